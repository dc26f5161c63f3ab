use qplame::bem2d::{IncidentField, ProfileCurve2};
use qplame::phaseless::SourceConfig;
use qplame::verify::DEFAULT_SEED;
use qplame::{ElasticMedium, Geometry, QuasiMomentum, Truncation};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::Failure;

/// Everything a run reads. Defaults are filled in by `resolve` and written
/// back into every output file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub medium: ElasticMedium,
    #[serde(default)]
    pub geometry: Option<Geometry>,
    #[serde(default)]
    pub quasi_momentum: Option<QmBlock>,
    #[serde(default)]
    pub truncation: Option<Truncation>,
    #[serde(default)]
    pub profile: Option<ProfileCurve2>,
    #[serde(default)]
    pub grid: Option<GridBlock>,
    #[serde(default)]
    pub solver: Option<SolverBlock>,
    #[serde(default)]
    pub rayleigh: Option<RayleighBlock>,
    #[serde(default)]
    pub phaseless: Option<PhaselessBlock>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmBlock {
    pub alpha: [f64; 2],
}

/// Evaluation points: explicit `points` plus the tensor grid spanned by
/// `axes`, each axis given as [lo, hi, count]. The last axis varies fastest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub source: Vec<f64>,
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub axes: Vec<(f64, f64, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(default = "default_n")]
    pub n: usize,
    pub incident: IncidentField,
    /// Height of the line the Rayleigh coefficients are read from.
    #[serde(default)]
    pub height: Option<f64>,
    #[serde(default = "default_modes")]
    pub modes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayleighBlock {
    pub height: f64,
    #[serde(default = "default_modes")]
    pub modes: usize,
    /// CSV of samples at x₁ = j/N on the line x₂ = height (extract).
    #[serde(default)]
    pub samples: Option<PathBuf>,
    /// Coefficient file written by `rayleigh extract` (eval).
    #[serde(default)]
    pub coefficients: Option<PathBuf>,
    /// Number of equispaced points per period written by eval.
    #[serde(default = "default_eval_count")]
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Equal,
    Distinct,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaselessBlock {
    #[serde(default)]
    pub frequencies: Vec<f64>,
    #[serde(default)]
    pub sources: Option<SourceConfig>,
    /// One or two dataset files written by `phaseless synth` (check).
    #[serde(default)]
    pub datasets: Vec<PathBuf>,
    #[serde(default = "default_expect")]
    pub expect: Expect,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_n() -> usize {
    128
}

fn default_modes() -> usize {
    4
}

fn default_eval_count() -> usize {
    16
}

fn default_expect() -> Expect {
    Expect::Equal
}

fn default_tol() -> f64 {
    1e-6
}

/// Configuration used when `--config` is absent.
pub const DEFAULT_CONFIG: &str = r#"{
  "medium": { "lambda": 2.0, "mu": 1.0, "rho": 1.0, "omega": 5.0 }
}"#;

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<(Self, PathBuf), Failure> {
        let (text, base) = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
                (text, p.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (DEFAULT_CONFIG.to_string(), PathBuf::new()),
        };
        let name = path
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "default config".into());
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{name}: {e}")))?;
        Ok((cfg, base))
    }

    /// Fill defaults, apply command-line overrides and validate.
    pub fn resolve(mut self, geometry: Option<Geometry>, seed: Option<u64>) -> Result<Self, Failure> {
        self.medium = self
            .medium
            .validated()
            .map_err(|e| Failure::Config(format!("medium: {e}")))?;
        let g = geometry.or(self.geometry).unwrap_or(Geometry::Qp2d);
        self.geometry = Some(g);
        if self.quasi_momentum.is_none() {
            let derived = self.solver.as_ref().and_then(|s| s.incident.alpha(&self.medium));
            self.quasi_momentum = Some(QmBlock {
                alpha: [derived.unwrap_or(0.0), 0.0],
            });
        }
        QuasiMomentum::new(g, self.alpha()).map_err(|e| Failure::Config(format!("quasi_momentum: {e}")))?;
        let tr = self.truncation.unwrap_or_else(|| Truncation::for_geometry(g));
        tr.check().map_err(|e| Failure::Config(format!("truncation: {e}")))?;
        self.truncation = Some(tr);
        let profile = self.profile.take().unwrap_or_default();
        profile
            .validate()
            .map_err(|e| Failure::Config(format!("profile: {e}")))?;
        self.profile = Some(profile);
        if let Some(s) = self.solver.as_mut() {
            if s.height.is_none() {
                s.height = Some(self.profile.as_ref().unwrap().max_height() + 0.5);
            }
        }
        if let Some(p) = self.phaseless.as_mut() {
            if p.frequencies.is_empty() {
                p.frequencies = vec![self.medium.omega];
            }
        }
        self.seed = Some(seed.or(self.seed).unwrap_or(DEFAULT_SEED));
        Ok(self)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry.unwrap_or(Geometry::Qp2d)
    }

    pub fn alpha(&self) -> [f64; 2] {
        let a = self.quasi_momentum.as_ref().map(|q| q.alpha).unwrap_or_default();
        match self.geometry() {
            Geometry::Biqp3d => a,
            _ => [a[0], 0.0],
        }
    }

    pub fn q(&self) -> QuasiMomentum {
        QuasiMomentum::new(self.geometry(), self.alpha()).expect("validated in resolve")
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
            .unwrap_or_else(|| Truncation::for_geometry(self.geometry()))
    }

    pub fn profile(&self) -> ProfileCurve2 {
        self.profile.clone().unwrap_or_default()
    }

    pub fn block<'a, T>(&self, b: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
        b.as_ref()
            .ok_or_else(|| Failure::Config(format!("missing field `{name}`")))
    }
}

impl GridBlock {
    pub fn all_points(&self, dim: usize) -> Result<Vec<Vec<f64>>, Failure> {
        let mut out = self.points.clone();
        if !self.axes.is_empty() {
            if self.axes.len() != dim {
                return Err(Failure::Config(format!(
                    "grid.axes: expected {dim} axes, got {}",
                    self.axes.len()
                )));
            }
            let mut acc: Vec<Vec<f64>> = vec![vec![]];
            for &(lo, hi, n) in &self.axes {
                if n == 0 {
                    return Err(Failure::Config("grid.axes: a count must be positive".into()));
                }
                let vals: Vec<f64> = (0..n)
                    .map(|i| {
                        if n == 1 {
                            lo
                        } else {
                            lo + (hi - lo) * i as f64 / (n - 1) as f64
                        }
                    })
                    .collect();
                acc = acc
                    .into_iter()
                    .flat_map(|p| {
                        vals.iter().map(move |v| {
                            let mut q = p.clone();
                            q.push(*v);
                            q
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
        if self.source.len() != dim {
            return Err(Failure::Config(format!("grid.source: expected {dim} coordinates")));
        }
        if let Some(p) = out.iter().find(|p| p.len() != dim) {
            return Err(Failure::Config(format!(
                "grid.points: {p:?} does not have {dim} coordinates"
            )));
        }
        if out.is_empty() {
            return Err(Failure::Config("grid: no evaluation points".into()));
        }
        Ok(out)
    }
}
