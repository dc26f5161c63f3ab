use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid medium: {0}")]
    InvalidMedium(String),
    #[error("argument outside the function domain: {0}")]
    Domain(String),
    #[error("Wood anomaly at mode m = {m}: {detail}")]
    WoodAnomaly { m: i64, detail: String },
    #[error("coincident points (|x - y| = {0:e})")]
    CoincidentPoints(f64),
    #[error("evaluation point too close to the source line (gap {gap:e} < {gap_min:e})")]
    NearSourceLine { gap: f64, gap_min: f64 },
    #[error("evaluation point too close to the source plane (gap {gap:e} < {gap_min:e})")]
    NearSourcePlane { gap: f64, gap_min: f64 },
    #[error("degenerate Rayleigh mode basis at mode m = {0}")]
    DegenerateModeBasis(i64),
    #[error("sample grid too coarse: {0}")]
    AliasedGrid(String),
    #[error("single-layer system looks resonant (condition estimate {0:e})")]
    ResonanceSuspected(f64),
    #[error("point within {dist:e} of the boundary (minimum {min:e})")]
    TooCloseToBoundary { dist: f64, min: f64 },
    #[error("dataset grids do not match: {0}")]
    GridMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
