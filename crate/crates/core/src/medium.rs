//! Elastic medium, quasi-momentum and the lattice of Fourier modes.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Wood-anomaly tolerance relative to k_s².
pub const DEFAULT_TOL_WOOD: f64 = 1e-8;

/// Square root on the branch with Im ≥ 0 (positive on the positive real axis).
pub fn branch_sqrt(z: C64) -> C64 {
    let s = z.sqrt();
    if s.im < 0.0 {
        -s
    } else if s.im == 0.0 && s.re < 0.0 {
        -s
    } else {
        s
    }
}

/// Isotropic homogeneous elastic medium at a fixed angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticMedium {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
    pub omega: f64,
}

impl ElasticMedium {
    pub fn new(lambda: f64, mu: f64, rho: f64, omega: f64) -> Result<Self> {
        let all = [lambda, mu, rho, omega];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMedium("non-finite parameter".into()));
        }
        if mu <= 0.0 {
            return Err(Error::InvalidMedium(format!("mu = {mu} must be positive")));
        }
        if lambda + mu <= 0.0 {
            return Err(Error::InvalidMedium(format!(
                "lambda + mu = {} must be positive",
                lambda + mu
            )));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidMedium(format!("omega = {omega} must be positive")));
        }
        if rho <= 0.0 {
            return Err(Error::InvalidMedium(format!("rho = {rho} must be positive")));
        }
        Ok(ElasticMedium { lambda, mu, rho, omega })
    }

    /// Revalidate a medium built field by field (e.g. deserialized).
    pub fn validated(self) -> Result<Self> {
        Self::new(self.lambda, self.mu, self.rho, self.omega)
    }

    pub fn kp(&self) -> f64 {
        self.omega * (self.rho / (self.lambda + 2.0 * self.mu)).sqrt()
    }

    pub fn ks(&self) -> f64 {
        self.omega * (self.rho / self.mu).sqrt()
    }

    pub fn rho_omega2(&self) -> f64 {
        self.rho * self.omega * self.omega
    }

    pub fn wavenumbers(&self) -> Wavenumbers {
        Wavenumbers::at(self, C64::new(self.omega, 0.0))
    }

    /// Wavenumbers at the complexified frequency ω(1 + iη).
    pub fn complexified(&self, eta: f64) -> Wavenumbers {
        Wavenumbers::at(self, C64::new(self.omega, self.omega * eta))
    }
}

/// Medium constants at a possibly complex frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumbers {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
    pub omega: C64,
    pub kp: C64,
    pub ks: C64,
    /// ρω²
    pub rw2: C64,
}

impl Wavenumbers {
    pub fn at(m: &ElasticMedium, omega: C64) -> Self {
        let kp = omega * (m.rho / (m.lambda + 2.0 * m.mu)).sqrt();
        let ks = omega * (m.rho / m.mu).sqrt();
        Wavenumbers {
            lambda: m.lambda,
            mu: m.mu,
            rho: m.rho,
            omega,
            kp,
            ks,
            rw2: m.rho * omega * omega,
        }
    }

    pub fn is_real(&self) -> bool {
        self.omega.im == 0.0
    }

    /// (β, γ) for a tangential wavenumber with squared norm `a2`.
    pub fn vertical(&self, a2: f64) -> (C64, C64) {
        (branch_sqrt(self.kp * self.kp - a2), branch_sqrt(self.ks * self.ks - a2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Qp2d,
    Qp3d,
    Biqp3d,
}

impl Geometry {
    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Qp2d => "qp2d",
            Geometry::Qp3d => "qp3d",
            Geometry::Biqp3d => "biqp3d",
        }
    }
}

impl std::str::FromStr for Geometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Geometry::Qp2d, Geometry::Qp3d, Geometry::Biqp3d]
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown geometry '{s}'")))
    }
}

/// Bloch phase per unit period. For the periodic geometries only `alpha[0]` is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiMomentum {
    pub geometry: Geometry,
    pub alpha: [f64; 2],
}

impl QuasiMomentum {
    pub fn new(geometry: Geometry, alpha: [f64; 2]) -> Result<Self> {
        if !alpha[0].is_finite() || !alpha[1].is_finite() {
            return Err(Error::InvalidInput("quasi-momentum must be finite".into()));
        }
        let alpha = match geometry {
            Geometry::Biqp3d => alpha,
            _ => [alpha[0], 0.0],
        };
        Ok(QuasiMomentum { geometry, alpha })
    }

    pub fn qp2d(alpha: f64) -> Self {
        QuasiMomentum {
            geometry: Geometry::Qp2d,
            alpha: [alpha, 0.0],
        }
    }

    pub fn qp3d(alpha: f64) -> Self {
        QuasiMomentum {
            geometry: Geometry::Qp3d,
            alpha: [alpha, 0.0],
        }
    }

    pub fn biqp3d(a1: f64, a2: f64) -> Self {
        QuasiMomentum {
            geometry: Geometry::Biqp3d,
            alpha: [a1, a2],
        }
    }

    pub fn negated(&self) -> Self {
        QuasiMomentum {
            geometry: self.geometry,
            alpha: [-self.alpha[0], -self.alpha[1]],
        }
    }

    pub fn norm(&self) -> f64 {
        self.alpha[0].hypot(self.alpha[1])
    }

    /// True when |α| ≤ k_p, i.e. the phase can come from an incident plane wave.
    pub fn physical(&self, medium: &ElasticMedium) -> bool {
        self.norm() <= medium.kp()
    }

    /// Tangential wavenumber α + 2πm.
    pub fn alpha_l(&self, m: [i64; 2]) -> [f64; 2] {
        match self.geometry {
            Geometry::Biqp3d => [
                self.alpha[0] + 2.0 * PI * m[0] as f64,
                self.alpha[1] + 2.0 * PI * m[1] as f64,
            ],
            _ => [self.alpha[0] + 2.0 * PI * m[0] as f64, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeClass {
    /// both p and s propagate
    L1,
    /// s propagates, p evanescent
    L2,
    /// both evanescent
    L3,
}

/// One lattice mode l = 2πm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeData {
    pub m: [i64; 2],
    pub alpha_l: [f64; 2],
    pub beta: C64,
    pub gamma: C64,
    pub class: ModeClass,
}

impl ModeData {
    pub fn alpha2(&self) -> f64 {
        self.alpha_l[0] * self.alpha_l[0] + self.alpha_l[1] * self.alpha_l[1]
    }

    /// √|k_p² − |α_l|²|
    pub fn gamma_p(&self) -> f64 {
        self.beta.norm()
    }

    /// √|k_s² − |α_l|²|
    pub fn gamma_s(&self) -> f64 {
        self.gamma.norm()
    }
}

pub fn classify_mode(medium: &ElasticMedium, q: &QuasiMomentum, m: [i64; 2]) -> Result<ModeData> {
    classify_mode_tol(medium, q, m, DEFAULT_TOL_WOOD)
}

/// Classify a mode; `tol_wood` is relative to k_s².
pub fn classify_mode_tol(medium: &ElasticMedium, q: &QuasiMomentum, m: [i64; 2], tol_wood: f64) -> Result<ModeData> {
    let m = match q.geometry {
        Geometry::Biqp3d => m,
        _ => [m[0], 0],
    };
    let alpha_l = q.alpha_l(m);
    let a2 = alpha_l[0] * alpha_l[0] + alpha_l[1] * alpha_l[1];
    let (kp, ks) = (medium.kp(), medium.ks());
    let (kp2, ks2) = (kp * kp, ks * ks);
    let tol = tol_wood * ks2;
    if (a2 - kp2).abs() < tol || (a2 - ks2).abs() < tol {
        return Err(Error::WoodAnomaly {
            m: m[0],
            detail: format!(
                "mode {:?}: |alpha_l|^2 = {a2} within {tol:e} of k_p^2 = {kp2} or k_s^2 = {ks2}",
                m
            ),
        });
    }
    let class = if a2 < kp2 {
        ModeClass::L1
    } else if a2 < ks2 {
        ModeClass::L2
    } else {
        ModeClass::L3
    };
    let (beta, gamma) = medium.wavenumbers().vertical(a2);
    Ok(ModeData {
        m,
        alpha_l,
        beta,
        gamma,
        class,
    })
}

/// Truncation and safety thresholds of the spectral series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Truncation {
    /// target size of the dropped tail
    pub tol: f64,
    /// smallest admissible distance to the source line or plane
    pub gap_min: f64,
    /// Wood-anomaly tolerance relative to k_s²
    pub tol_wood: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            tol: 1e-15,
            gap_min: 1e-3,
            tol_wood: DEFAULT_TOL_WOOD,
        }
    }
}

impl Truncation {
    pub fn for_geometry(g: Geometry) -> Self {
        let gap_min = match g {
            Geometry::Qp2d => 1e-3,
            Geometry::Qp3d => 1e-2,
            Geometry::Biqp3d => 0.05,
        };
        Truncation {
            gap_min,
            ..Default::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) || !(self.gap_min > 0.0) || !(self.tol_wood >= 0.0) {
            return Err(Error::InvalidInput(format!("bad truncation settings {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeCriterion {
    AllPropagating,
    /// keep modes with exp(−Im γ_l · gap) ≥ tol
    TailBound {
        gap: f64,
        tol: f64,
    },
}

/// Integers m with |α + 2πm| ≤ radius, ascending.
pub fn mode_range(alpha: f64, radius: f64) -> std::ops::RangeInclusive<i64> {
    let lo = ((-radius - alpha) / (2.0 * PI)).ceil() as i64;
    let hi = ((radius - alpha) / (2.0 * PI)).floor() as i64;
    lo..=hi
}

/// Radius in tangential wavenumber of the modes kept by a tail criterion.
pub fn tail_radius(ks: f64, gap: f64, tol: f64) -> f64 {
    let q = (1.0 / tol).ln().max(0.0) / gap;
    (ks * ks + q * q).sqrt()
}

pub fn list_modes(medium: &ElasticMedium, q: &QuasiMomentum, criterion: ModeCriterion) -> Result<Vec<ModeData>> {
    let radius = match criterion {
        ModeCriterion::AllPropagating => medium.ks(),
        ModeCriterion::TailBound { gap, tol } => {
            if !(gap > 0.0) || !(tol > 0.0) {
                return Err(Error::InvalidInput("tail_bound needs gap > 0 and tol > 0".into()));
            }
            tail_radius(medium.ks(), gap, tol)
        }
    };
    let mut out = Vec::new();
    match q.geometry {
        Geometry::Biqp3d => {
            for m1 in mode_range(q.alpha[0], radius) {
                let a1 = q.alpha[0] + 2.0 * PI * m1 as f64;
                let r2 = (radius * radius - a1 * a1).max(0.0).sqrt();
                for m2 in mode_range(q.alpha[1], r2) {
                    out.push(classify_mode(medium, q, [m1, m2])?);
                }
            }
        }
        _ => {
            for m1 in mode_range(q.alpha[0], radius) {
                out.push(classify_mode(medium, q, [m1, 0])?);
            }
        }
    }
    if let ModeCriterion::AllPropagating = criterion {
        out.retain(|md| md.class != ModeClass::L3);
    }
    Ok(out)
}

/// Sum of a per-mode bound over the modes outside `lo..=hi`, with a geometric
/// remainder once the term ratio settles below one.
pub(crate) fn tail_sum(bound: impl Fn(i64) -> f64, lo: i64, hi: i64) -> f64 {
    let side = |start: i64, step: i64| -> f64 {
        let mut m = start;
        let mut prev = bound(m);
        let mut sum = prev;
        for _ in 0..100_000 {
            m += step;
            let t = bound(m);
            sum += t;
            if t == 0.0 || !t.is_finite() {
                return if t.is_finite() { sum } else { f64::INFINITY };
            }
            let r = t / prev;
            if r < 0.95 && t * r / (1.0 - r) < 1e-3 * sum.max(1e-300) {
                return sum + t * r / (1.0 - r);
            }
            prev = t;
        }
        f64::INFINITY
    };
    side(hi + 1, 1) + side(lo - 1, -1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_examples() {
        let m = ElasticMedium::new(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!((m.kp() - 0.5).abs() < 1e-15 && (m.ks() - 1.0).abs() < 1e-15);
        let m = ElasticMedium::new(0.0, 1.0, 1.0, 2.0).unwrap();
        assert!((m.kp() - 2.0 / 2f64.sqrt()).abs() < 1e-15 && (m.ks() - 2.0).abs() < 1e-15);
        assert!(matches!(
            ElasticMedium::new(-2.0, 1.0, 1.0, 1.0),
            Err(Error::InvalidMedium(_))
        ));
        assert!(ElasticMedium::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(ElasticMedium::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(ElasticMedium::new(1.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn classification_examples() {
        let med = ElasticMedium::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let q = QuasiMomentum::qp2d(0.3);
        let m0 = classify_mode(&med, &q, [0, 0]).unwrap();
        assert_eq!(m0.class, ModeClass::L1);
        assert!((m0.beta - C64::new(0.4, 0.0)).norm() < 1e-15);
        let m1 = classify_mode(&med, &q, [1, 0]).unwrap();
        assert_eq!(m1.class, ModeClass::L3);
        assert!((m1.alpha_l[0] - 6.583185307179586).abs() < 1e-12);
        let want = (m1.alpha_l[0].powi(2) - 0.25).sqrt();
        assert!(m1.beta.re == 0.0 && (m1.beta.im - want).abs() < 1e-14);
        let err = classify_mode(&med, &QuasiMomentum::qp2d(0.5), [0, 0]);
        assert!(matches!(err, Err(Error::WoodAnomaly { .. })));
    }

    #[test]
    fn propagating_lists() {
        let med = ElasticMedium::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let l = list_modes(&med, &QuasiMomentum::qp2d(0.0), ModeCriterion::AllPropagating).unwrap();
        assert_eq!(l.iter().map(|m| m.m[0]).collect::<Vec<_>>(), vec![0]);
        // k_p = 7, k_s = 14
        let med = ElasticMedium::new(2.0, 1.0, 1.0, 14.0).unwrap();
        assert!((med.kp() - 7.0).abs() < 1e-12);
        let l = list_modes(&med, &QuasiMomentum::qp2d(0.0), ModeCriterion::AllPropagating).unwrap();
        let ms: Vec<i64> = l.iter().map(|m| m.m[0]).collect();
        assert_eq!(ms, vec![-2, -1, 0, 1, 2]);
        let p: Vec<i64> = l.iter().filter(|m| m.class == ModeClass::L1).map(|m| m.m[0]).collect();
        assert_eq!(p, vec![-1, 0, 1]);
    }

    #[test]
    fn tail_lists_grow_logarithmically() {
        let med = ElasticMedium::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let q = QuasiMomentum::qp2d(0.3);
        let count = |tol: f64| {
            list_modes(&med, &q, ModeCriterion::TailBound { gap: 1.0, tol })
                .unwrap()
                .len()
        };
        let (a, b) = (count(1e-8), count(1e-16));
        // direct enumeration: |0.3 + 2πm| ≤ sqrt(1 + ln(1e16)^2)
        let r = (1.0f64 + (1e16f64).ln().powi(2)).sqrt();
        let direct = (-100..100).filter(|m| (0.3 + 2.0 * PI * *m as f64).abs() <= r).count();
        assert_eq!(b, direct);
        assert!(b > a && b <= 2 * a + 1);
    }

    #[test]
    fn branch_is_upper_half_plane() {
        for z in [
            C64::new(-1.0, 0.0),
            C64::new(-1.0, -0.0),
            C64::new(4.0, 0.0),
            C64::new(0.3, -2.0),
        ] {
            let s = branch_sqrt(z);
            assert!(s.im >= 0.0);
            assert!((s * s - z).norm() < 1e-14);
        }
        assert_eq!(branch_sqrt(C64::new(4.0, 0.0)), C64::new(2.0, 0.0));
    }
}
