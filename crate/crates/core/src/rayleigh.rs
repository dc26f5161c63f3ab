//! Rayleigh expansions of outgoing quasi-periodic fields: evaluation,
//! coefficient extraction from samples on a horizontal line, and energy flux.

use nalgebra::{Matrix2, Vector2, Vector3};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::medium::{ElasticMedium, QuasiMomentum, Wavenumbers};
use crate::specfun::{hankel1, hankel1_deriv};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayleighMode2 {
    pub m: i64,
    pub up: C64,
    pub us: C64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RayleighCoeffs2 {
    pub modes: Vec<RayleighMode2>,
}

impl RayleighCoeffs2 {
    pub fn norm(&self) -> f64 {
        self.modes
            .iter()
            .map(|c| c.up.norm().max(c.us.norm()))
            .fold(0.0, f64::max)
    }

    pub fn get(&self, m: i64) -> Option<&RayleighMode2> {
        self.modes.iter().find(|c| c.m == m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayleighMode3Bi {
    pub n: [i64; 2],
    pub ap: C64,
    pub as_: [C64; 3],
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RayleighCoeffs3Bi {
    pub modes: Vec<RayleighMode3Bi>,
}

/// Cylinder-harmonic amplitudes of one axial mode; `a[k]`, `b[k]` belong to
/// the harmonic m = k − m_max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighMode3Qp {
    pub n: i64,
    pub m_max: i32,
    pub a: Vec<C64>,
    pub b: Vec<[C64; 3]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RayleighCoeffs3Qp {
    pub modes: Vec<RayleighMode3Qp>,
}

pub const DEFAULT_CYL_ORDER: i32 = 20;

/// Vertical wavenumbers (β_l, γ_l) of one 2D mode.
fn vertical(wn: &Wavenumbers, a: f64) -> (C64, C64) {
    wn.vertical(a * a)
}

/// Field and gradient (∂_j u_i at [(i, j)]) of one 2D mode term at x.
fn mode_jet_2d(wn: &Wavenumbers, alpha: f64, c: &RayleighMode2, x: [f64; 2]) -> (Vector2<C64>, Matrix2<C64>) {
    let a = alpha + 2.0 * PI * c.m as f64;
    let (beta, gamma) = vertical(wn, a);
    let ph = C64::from_polar(1.0, alpha * x[0]) * C64::from_polar(1.0, 2.0 * PI * c.m as f64 * x[0]);
    let ep = c.up * ph * (I * beta * x[1]).exp();
    let es = c.us * ph * (I * gamma * x[1]).exp();
    let vp = Vector2::new(C64::new(a, 0.0), beta);
    let vs = Vector2::new(gamma, C64::new(-a, 0.0));
    let u = vp * ep + vs * es;
    let kp = [C64::new(a, 0.0), beta];
    let ks = [C64::new(a, 0.0), gamma];
    let mut g = Matrix2::<C64>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            g[(i, j)] = I * (vp[i] * kp[j] * ep + vs[i] * ks[j] * es);
        }
    }
    (u, g)
}

pub fn eval_rayleigh_2d(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    coeffs: &RayleighCoeffs2,
    x: [f64; 2],
) -> Vector2<C64> {
    rayleigh_jet_2d(medium, q, coeffs, x).0
}

/// Field and gradient of the 2D expansion.
pub fn rayleigh_jet_2d(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    coeffs: &RayleighCoeffs2,
    x: [f64; 2],
) -> (Vector2<C64>, Matrix2<C64>) {
    let wn = medium.wavenumbers();
    let mut u = Vector2::zeros();
    let mut g = Matrix2::zeros();
    for c in &coeffs.modes {
        let (du, dg) = mode_jet_2d(&wn, q.alpha[0], c, x);
        u += du;
        g += dg;
    }
    (u, g)
}

/// Stress vector σν of a 2D field from its gradient. Equals
/// 2μ∂_νu + λν(∇·u) − μτ curl u with τ = (−ν₂, ν₁).
pub fn traction(medium: &ElasticMedium, grad: &Matrix2<C64>, nu: [f64; 2]) -> Vector2<C64> {
    let div = grad[(0, 0)] + grad[(1, 1)];
    let mut t = Vector2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let eps = 0.5 * (grad[(i, j)] + grad[(j, i)]);
            let s = medium.mu * 2.0 * eps
                + if i == j {
                    medium.lambda * div
                } else {
                    C64::new(0.0, 0.0)
                };
            t[i] += s * nu[j];
        }
    }
    t
}

/// Fourier coefficients over one period and a per-mode 2×2 solve in the
/// basis {(α_l, β_l)e^{iβ_l h}, (γ_l, −α_l)e^{iγ_l h}}. Samples sit at
/// x₁ = j/N, j = 0..N.
pub fn extract_coeffs_2d(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    samples: &[Vector2<C64>],
    h: f64,
    m_modes: usize,
) -> Result<RayleighCoeffs2> {
    let n = samples.len();
    if n < 2 * m_modes + 1 {
        return Err(Error::AliasedGrid(format!(
            "{n} samples cannot resolve {} modes",
            2 * m_modes + 1
        )));
    }
    let wn = medium.wavenumbers();
    let ks2 = medium.ks().powi(2);
    let alpha = q.alpha[0];
    let mut modes = Vec::with_capacity(2 * m_modes + 1);
    let mm = m_modes as i64;
    for m in -mm..=mm {
        let mut f = Vector2::<C64>::zeros();
        for (j, s) in samples.iter().enumerate() {
            let x = j as f64 / n as f64;
            let k = (m * j as i64).rem_euclid(n as i64) as f64;
            f += s * (C64::from_polar(1.0, -alpha * x) * C64::from_polar(1.0, -2.0 * PI * k / n as f64));
        }
        f /= C64::new(n as f64, 0.0);
        let a = alpha + 2.0 * PI * m as f64;
        let (beta, gamma) = vertical(&wn, a);
        let det0 = a * a + beta * gamma;
        if det0.norm() < 1e-10 * ks2 {
            return Err(Error::DegenerateModeBasis(m));
        }
        let ep = (I * beta * h).exp();
        let es = (I * gamma * h).exp();
        let basis = Matrix2::new(a * ep, gamma * es, beta * ep, -a * es);
        let sol = basis.lu().solve(&f).ok_or(Error::DegenerateModeBasis(m))?;
        modes.push(RayleighMode2 {
            m,
            up: sol[0],
            us: sol[1],
        });
    }
    Ok(RayleighCoeffs2 { modes })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpgoingDiagnostic {
    pub max_propagating: f64,
    pub holds: bool,
}

/// Whether any propagating mode carries a non-negligible amplitude.
pub fn check_upgoing(medium: &ElasticMedium, q: &QuasiMomentum, coeffs: &RayleighCoeffs2) -> UpgoingDiagnostic {
    let (kp, ks) = (medium.kp(), medium.ks());
    let mut best = 0.0f64;
    for c in &coeffs.modes {
        let a = (q.alpha[0] + 2.0 * PI * c.m as f64).abs();
        if a < kp {
            best = best.max(c.up.norm());
        }
        if a < ks {
            best = best.max(c.us.norm());
        }
    }
    UpgoingDiagnostic {
        max_propagating: best,
        holds: best > 1e-10 * coeffs.norm(),
    }
}

/// Time-averaged energy flux (ω/2)·Im ∫ T_ν(u)·ū over one period of a
/// horizontal line, from uniform samples of the field and its traction with
/// ν = (0, 1). Positive means upward.
pub fn flux_2d(medium: &ElasticMedium, u: &[Vector2<C64>], t: &[Vector2<C64>]) -> Result<f64> {
    if u.len() != t.len() || u.is_empty() {
        return Err(Error::InvalidInput(
            "flux_2d needs matching, non-empty sample sets".into(),
        ));
    }
    let s: f64 = u
        .iter()
        .zip(t)
        .map(|(u, t)| (t[0] * u[0].conj() + t[1] * u[1].conj()).im)
        .sum();
    Ok(0.5 * medium.omega * s / u.len() as f64)
}

/// Flux of a Rayleigh expansion through the line x₂ = h, mode by mode.
pub fn flux_rayleigh_2d(medium: &ElasticMedium, q: &QuasiMomentum, coeffs: &RayleighCoeffs2, h: f64) -> f64 {
    let wn = medium.wavenumbers();
    coeffs
        .modes
        .iter()
        .map(|c| {
            let (u, g) = mode_jet_2d(&wn, q.alpha[0], c, [0.0, h]);
            let t = traction(medium, &g, [0.0, 1.0]);
            0.5 * medium.omega * (t[0] * u[0].conj() + t[1] * u[1].conj()).im
        })
        .sum()
}

pub fn eval_rayleigh_3d_bi(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    coeffs: &RayleighCoeffs3Bi,
    x: [f64; 3],
) -> Vector3<C64> {
    let wn = medium.wavenumbers();
    let mut u = Vector3::zeros();
    for c in &coeffs.modes {
        let a = [
            q.alpha[0] + 2.0 * PI * c.n[0] as f64,
            q.alpha[1] + 2.0 * PI * c.n[1] as f64,
        ];
        let (beta, gamma) = wn.vertical(a[0] * a[0] + a[1] * a[1]);
        let ph = C64::from_polar(1.0, q.alpha[0] * x[0] + q.alpha[1] * x[1])
            * C64::from_polar(1.0, 2.0 * PI * (c.n[0] as f64 * x[0] + c.n[1] as f64 * x[1]));
        let ep = c.ap * ph * (I * beta * x[2]).exp();
        let es = ph * (I * gamma * x[2]).exp();
        u += Vector3::new(C64::new(a[0], 0.0), C64::new(a[1], 0.0), beta) * ep;
        u += Vector3::from(c.as_) * es;
    }
    u
}

/// |(α_n, γ_n)·A_{s,n}| relative to |A_{s,n}|, largest over the modes. Zero
/// means every s-amplitude is transverse to its wave vector.
pub fn transversality_defect(medium: &ElasticMedium, q: &QuasiMomentum, coeffs: &RayleighCoeffs3Bi) -> f64 {
    let wn = medium.wavenumbers();
    let mut worst = 0.0f64;
    for c in &coeffs.modes {
        let a = [
            q.alpha[0] + 2.0 * PI * c.n[0] as f64,
            q.alpha[1] + 2.0 * PI * c.n[1] as f64,
        ];
        let (_, gamma) = wn.vertical(a[0] * a[0] + a[1] * a[1]);
        let dot = a[0] * c.as_[0] + a[1] * c.as_[1] + gamma * c.as_[2];
        let size = c.as_.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if size > 0.0 {
            worst = worst.max(dot.norm() / size);
        }
    }
    worst
}

/// Cylindrical harmonics H_m(kr)e^{imθ} with their (x₂, x₃) gradients.
struct Harmonic {
    h: C64,
    d2: C64,
    d3: C64,
}

fn harmonic(m: i32, k: f64, x2: f64, x3: f64) -> Result<Harmonic> {
    let r = x2.hypot(x3);
    let th = x3.atan2(x2);
    let e = C64::from_polar(1.0, m as f64 * th);
    let h = hankel1(m, k * r)? * e;
    let hd = hankel1_deriv(m, k * r)? * e;
    let im = I * m as f64;
    Ok(Harmonic {
        h,
        d2: (x2 * k * hd - im * x3 / r * h) / r,
        d3: (x3 * k * hd + im * x2 / r * h) / r,
    })
}

/// Axial-mode sum of the quasi-periodic 3D expansion: p-part ∇(φ_n e^{iα_n x₁})
/// plus s-part ∇×(ψ_n e^{iα_n x₁}), each over the retained harmonics.
pub fn eval_rayleigh_3d_qp(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    coeffs: &RayleighCoeffs3Qp,
    x: [f64; 3],
) -> Result<Vector3<C64>> {
    let r = x[1].hypot(x[2]);
    if !(r > 0.0) {
        return Err(Error::Domain("the cylindrical expansion needs r > 0".into()));
    }
    let (kp, ks) = (medium.kp(), medium.ks());
    let mut u = Vector3::zeros();
    for c in &coeffs.modes {
        let len = (2 * c.m_max + 1) as usize;
        if c.m_max < 0 || c.a.len() != len || c.b.len() != len {
            return Err(Error::InvalidInput(format!("mode {}: expected {len} harmonics", c.n)));
        }
        let a = q.alpha[0] + 2.0 * PI * c.n as f64;
        let ph = C64::from_polar(1.0, q.alpha[0] * x[0]) * C64::from_polar(1.0, 2.0 * PI * c.n as f64 * x[0]);
        let has_p = c.a.iter().any(|v| v.norm() > 0.0);
        let has_s = c.b.iter().any(|v| v.iter().any(|w| w.norm() > 0.0));
        let beta = (kp * kp - a * a).max(0.0).sqrt();
        let gamma = (ks * ks - a * a).max(0.0).sqrt();
        if (has_p && !(beta > 0.0)) || (has_s && !(gamma > 0.0)) {
            return Err(Error::InvalidInput(format!("mode {} does not propagate", c.n)));
        }
        for (k, m) in (-c.m_max..=c.m_max).enumerate() {
            if c.a[k].norm() > 0.0 {
                let hp = harmonic(m, beta, x[1], x[2])?;
                u += Vector3::new(I * a * hp.h, hp.d2, hp.d3) * (c.a[k] * ph);
            }
            let b = c.b[k];
            if b.iter().any(|w| w.norm() > 0.0) {
                let hs = harmonic(m, gamma, x[1], x[2])?;
                let v = Vector3::new(
                    hs.d2 * b[2] - hs.d3 * b[1],
                    hs.d3 * b[0] - I * a * hs.h * b[2],
                    I * a * hs.h * b[1] - hs.d2 * b[0],
                );
                u += v * ph;
            }
        }
    }
    Ok(u)
}
