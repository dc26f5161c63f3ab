//! The 3D quasi-periodic Lamé Green's function (period 1 along x₁): Fourier
//! coefficients c_l(x₂, x₃) and their assembled series.
//!
//! The literal tables follow the three printed cases with their misprints
//! repaired (see `literal_c`); the unified form writes every case as
//! c_l = −(1/2π)[(1/μ)g_s I + (1/ρω²) D Dᵀ (g_s − g_p)], g = (i/4)H₀(γr),
//! D = (iα_l, ∂₂, ∂₃).

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fd::{hessian, partial};
use crate::green2d::Form;
use crate::green_free::{max_norm, GreenEval};
use crate::medium::{
    classify_mode_tol, mode_range, tail_radius, tail_sum, ElasticMedium, ModeClass, ModeData, QuasiMomentum,
    Truncation, Wavenumbers, DEFAULT_TOL_WOOD,
};
use crate::specfun::{hankel01_complex, hankel1, mod_k};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case3 {
    /// both evanescent
    I,
    /// s propagating, p evanescent
    II,
    /// both propagating
    III,
}

impl Case3 {
    pub fn of(class: ModeClass) -> Self {
        match class {
            ModeClass::L3 => Case3::I,
            ModeClass::L2 => Case3::II,
            ModeClass::L1 => Case3::III,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode3QP {
    pub mode: ModeData,
    pub c: Matrix3<C64>,
    pub r: f64,
    pub case_used: Case3,
}

/// (g, −g'(r), γ²) for g = (i/4)H₀(γr), γ² = k² − a².
pub(crate) fn radial_pair(k: C64, a2: f64, r: f64) -> Result<(C64, C64, C64)> {
    let g2 = k * k - a2;
    if k.im == 0.0 {
        let g2 = g2.re;
        if g2 > 0.0 {
            let g = g2.sqrt();
            let h0 = hankel1(0, g * r)?;
            let h1 = hankel1(1, g * r)?;
            return Ok((I / 4.0 * h0, I / 4.0 * g * h1, C64::new(g2, 0.0)));
        }
        if g2 < 0.0 {
            let kap = (-g2).sqrt();
            let f0 = mod_k(0, kap * r)? / (2.0 * PI);
            let f1 = kap * mod_k(1, kap * r)? / (2.0 * PI);
            return Ok((C64::new(f0, 0.0), C64::new(f1, 0.0), C64::new(g2, 0.0)));
        }
        return Err(Error::Domain("vertical wavenumber vanishes".into()));
    }
    let gamma = crate::medium::branch_sqrt(g2);
    let z = gamma * r;
    if z.im > 700.0 {
        return Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0), g2));
    }
    let (h0, h1) = hankel01_complex(z)?;
    Ok((I / 4.0 * h0, I / 4.0 * gamma * h1, g2))
}

/// D Dᵀ g for D = (iα_l, ∂₂, ∂₃), from (g, −g', γ²).
fn ddt(a: f64, x2: f64, x3: f64, f: (C64, C64, C64)) -> Matrix3<C64> {
    let (f0, f1, g2) = f;
    let r = x2.hypot(x3);
    let x = [x2, x3];
    let mut m = Matrix3::<C64>::zeros();
    m[(0, 0)] = -a * a * f0;
    for j in 0..2 {
        let v = I * a * (-f1 * x[j] / r);
        m[(0, j + 1)] = v;
        m[(j + 1, 0)] = v;
        for k in 0..2 {
            let delta = if j == k { 1.0 } else { 0.0 };
            let xx = x[j] * x[k];
            m[(j + 1, k + 1)] = -g2 * f0 * (xx / (r * r)) - f1 * (delta / r - 2.0 * xx / (r * r * r));
        }
    }
    m
}

/// Unified coefficient matrix; valid at complex frequency.
pub fn unified_c(wn: &Wavenumbers, alpha_l: f64, x2: f64, x3: f64) -> Result<Matrix3<C64>> {
    let r = x2.hypot(x3);
    if r == 0.0 {
        return Err(Error::Domain("c_l is singular at r = 0".into()));
    }
    let a2 = alpha_l * alpha_l;
    let s = radial_pair(wn.ks, a2, r)?;
    let p = radial_pair(wn.kp, a2, r)?;
    let ms = ddt(alpha_l, x2, x3, s);
    let mp = ddt(alpha_l, x2, x3, p);
    let mut c = (ms - mp) / wn.rw2;
    for i in 0..3 {
        c[(i, i)] += s.0 / wn.mu;
    }
    Ok(c * C64::new(-1.0 / (2.0 * PI), 0.0))
}

/// The printed case tables, with these repairs (each one checked against the
/// Fourier-integral oracle and the ODE residual):
/// Case II c₂₁, c₃₁: the H₁ term enters as −(π/2)γ_s H₁;
/// Case II, III c₂₂, c₃₃: the (1/μ) term is −(i/8πμ)H₀ and the H₀ term inside
/// each bracket carries the same sign as the H₁ term;
/// Case II, III c₂₃: overall factor 1/r², s-bracket with +(πi/2);
/// Case III c₁₁: −(iα_l²/8πρω²)H₀(γ_p r); Case III c₂₁, c₃₁: overall sign;
/// Case III c₂₂, c₃₃: the p bracket uses γ_p throughout;
/// Case I c₂₂: x² reads x₂².
fn literal_c(m: &ElasticMedium, mode: &ModeData, x2: f64, x3: f64) -> Result<Matrix3<C64>> {
    let r = x2.hypot(x3);
    let a = mode.alpha_l[0];
    let a2 = a * a;
    let (mu, rw2) = (m.mu, m.rho_omega2());
    let gs = mode.gamma_s();
    let gp = mode.gamma_p();
    let p4 = 1.0 / (4.0 * PI * PI * rw2);
    let p8 = 1.0 / (8.0 * PI * rw2);
    let xs = [x2, x3];
    let mut c = Matrix3::<C64>::zeros();
    match Case3::of(mode.class) {
        Case3::I => {
            let (k0s, k1s) = (mod_k(0, gs * r)?, mod_k(1, gs * r)?);
            let (k0p, k1p) = (mod_k(0, gp * r)?, mod_k(1, gp * r)?);
            c[(0, 0)] = C64::new(p4 * (gs * gs * k0s - a2 * k0p), 0.0);
            for j in 0..2 {
                c[(j + 1, 0)] = I * (p4 * a * xs[j] / r * (gs * k1s - gp * k1p));
            }
            for j in 0..2 {
                let (xj, xo) = (xs[j], xs[1 - j]);
                let q = (xo * xo - xj * xj) / r;
                let v = -k0s / (4.0 * PI * PI * mu)
                    + p4 / (r * r) * (gs * (q * k1s - xj * xj * gs * k0s) - gp * (q * k1p - xj * xj * gp * k0p));
                c[(j + 1, j + 1)] = C64::new(v, 0.0);
            }
            let v = p4 * x2 * x3 / (r * r) * (2.0 / r * gp * k1p + gp * gp * k0p - 2.0 / r * gs * k1s - gs * gs * k0s);
            c[(1, 2)] = C64::new(v, 0.0);
        }
        Case3::II => {
            let (h0s, h1s) = (hankel1(0, gs * r)?, hankel1(1, gs * r)?);
            let (k0p, k1p) = (mod_k(0, gp * r)?, mod_k(1, gp * r)?);
            c[(0, 0)] = -I * gs * gs * p8 * h0s - a2 * p4 * k0p;
            for j in 0..2 {
                c[(j + 1, 0)] = p4 * a * xs[j] / r * (-(PI / 2.0) * gs * h1s - I * gp * k1p);
            }
            for j in 0..2 {
                let (xj, xo) = (xs[j], xs[1 - j]);
                let q = (xo * xo - xj * xj) / r;
                c[(j + 1, j + 1)] = -I / (8.0 * PI * mu) * h0s
                    + I * gs * p8 / (r * r) * (gs * xj * xj * h0s + q * h1s)
                    + p4 * gp / (r * r) * (gp * xj * xj * k0p - q * k1p);
            }
            c[(1, 2)] = p4 * x2 * x3 / (r * r)
                * (PI * I / 2.0 * gs * (gs * h0s - 2.0 / r * h1s) + gp * (gp * k0p + 2.0 / r * k1p));
        }
        Case3::III => {
            let (h0s, h1s) = (hankel1(0, gs * r)?, hankel1(1, gs * r)?);
            let (h0p, h1p) = (hankel1(0, gp * r)?, hankel1(1, gp * r)?);
            c[(0, 0)] = -I * p8 * (gs * gs * h0s + a2 * h0p);
            for j in 0..2 {
                c[(j + 1, 0)] = -(p8 * a * xs[j] / r) * (gs * h1s - gp * h1p);
            }
            for j in 0..2 {
                let (xj, xo) = (xs[j], xs[1 - j]);
                let q = (xo * xo - xj * xj) / r;
                c[(j + 1, j + 1)] = -I / (8.0 * PI * mu) * h0s
                    + I * p8 / (r * r) * (gs * (gs * xj * xj * h0s + q * h1s) - gp * (gp * xj * xj * h0p + q * h1p));
            }
            c[(1, 2)] =
                I * p8 * x2 * x3 / (r * r) * (gs * (gs * h0s - 2.0 / r * h1s) - gp * (gp * h0p - 2.0 / r * h1p));
        }
    }
    c[(0, 1)] = c[(1, 0)];
    c[(0, 2)] = c[(2, 0)];
    c[(2, 1)] = c[(1, 2)];
    Ok(c)
}

/// Coefficient matrix c_l for the mode l = 2πm.
pub fn c_l(medium: &ElasticMedium, q: &QuasiMomentum, m: i64, x2: f64, x3: f64, form: Form) -> Result<FourierMode3QP> {
    let r = x2.hypot(x3);
    if !(r > 0.0) {
        return Err(Error::Domain("c_l needs r > 0".into()));
    }
    let mode = classify_mode_tol(medium, q, [m, 0], DEFAULT_TOL_WOOD)?;
    let c = match form {
        Form::Literal => literal_c(medium, &mode, x2, x3)?,
        Form::Unified => unified_c(&medium.wavenumbers(), mode.alpha_l[0], x2, x3)?,
    };
    Ok(FourierMode3QP {
        mode,
        c,
        r,
        case_used: Case3::of(mode.class),
    })
}

/// Max-norm residual of the mode ODE system applied to c_l by fourth-order
/// finite differences with step h.
pub fn ode_residual(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    m: i64,
    x2: f64,
    x3: f64,
    h: f64,
    form: Form,
) -> Result<f64> {
    if x2.hypot(x3) <= 2.0 * h {
        return Err(Error::InvalidInput("ode_residual needs r > 2h".into()));
    }
    let f = |p: [f64; 2]| c_l(medium, q, m, p[0], p[1], form).map(|v| v.c);
    let x = [x2, x3];
    let c = f(x)?;
    let hs = hessian(&f, x, h)?;
    let d2 = partial(&f, x, 0, h)?;
    let d3 = partial(&f, x, 1, h)?;
    let a = q.alpha_l([m, 0])[0];
    let (lam, mu, rw2) = (medium.lambda, medium.mu, medium.rho_omega2());
    let lm = lam + mu;
    let l2 = lam + 2.0 * mu;
    let mut res = Matrix3::<C64>::zeros();
    for j in 0..3 {
        res[(0, j)] = (rw2 - l2 * a * a) * c[(0, j)]
            + mu * (hs[0][0][(0, j)] + hs[1][1][(0, j)])
            + I * lm * a * (d2[(1, j)] + d3[(2, j)]);
        res[(1, j)] = I * lm * a * d2[(0, j)]
            + (rw2 - mu * a * a) * c[(1, j)]
            + l2 * hs[0][0][(1, j)]
            + mu * hs[1][1][(1, j)]
            + lm * hs[0][1][(2, j)];
        res[(2, j)] = I * lm * a * d3[(0, j)]
            + lm * hs[0][1][(1, j)]
            + (rw2 - mu * a * a) * c[(2, j)]
            + mu * hs[0][0][(2, j)]
            + l2 * hs[1][1][(2, j)];
    }
    Ok(max_norm(&res))
}

/// Per-mode max-norm bound of c_l at transverse distance r.
fn mode_bound(wn: &Wavenumbers, alpha_l: f64, r: f64) -> f64 {
    let a2 = alpha_l * alpha_l;
    let (Ok(s), Ok(p)) = (radial_pair(wn.ks, a2, r), radial_pair(wn.kp, a2, r)) else {
        return f64::INFINITY;
    };
    let part = |f: (C64, C64, C64)| {
        a2 * f.0.norm() + alpha_l.abs() * f.1.norm() + f.2.norm() * f.0.norm() + 3.0 * f.1.norm() / r
    };
    (s.0.norm() / wn.mu + (part(s) + part(p)) / wn.rw2.norm()) / (2.0 * PI)
}

fn spectral(wn: &Wavenumbers, alpha: f64, d: [f64; 3], radius: f64) -> Result<GreenEval<3>> {
    let r = d[1].hypot(d[2]);
    let range = mode_range(alpha, radius);
    let (lo, hi) = (*range.start(), *range.end());
    let mut value = Matrix3::<C64>::zeros();
    let mut count = 0;
    for m in range {
        let al = alpha + 2.0 * PI * m as f64;
        let ph = C64::from_polar(1.0, alpha * d[0]) * C64::from_polar(1.0, 2.0 * PI * m as f64 * d[0]);
        value += unified_c(wn, al, d[1], d[2])? * ph;
        count += 1;
    }
    let tail_bound = tail_sum(|m| mode_bound(wn, alpha + 2.0 * PI * m as f64, r), lo, hi);
    Ok(GreenEval {
        value,
        modes_used: count,
        tail_bound,
    })
}

/// Quasi-periodic Green's tensor at real frequency.
pub fn green3dqp_eval(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    x: &[f64],
    y: &[f64],
    tr: &Truncation,
) -> Result<GreenEval<3>> {
    tr.check()?;
    if x.len() != 3 || y.len() != 3 {
        return Err(Error::InvalidInput("points must have 3 coordinates".into()));
    }
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    let r = d[1].hypot(d[2]);
    if r < tr.gap_min {
        return Err(Error::NearSourceLine {
            gap: r,
            gap_min: tr.gap_min,
        });
    }
    let radius = tail_radius(medium.ks(), r, tr.tol);
    for m in mode_range(q.alpha[0], radius) {
        classify_mode_tol(medium, q, [m, 0], tr.tol_wood)?;
    }
    spectral(&medium.wavenumbers(), q.alpha[0], d, radius)
}

/// Spectral series at arbitrary (complex) frequency.
pub fn green3dqp_eval_at(wn: &Wavenumbers, alpha: f64, x: [f64; 3], y: [f64; 3], tol: f64) -> Result<GreenEval<3>> {
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    let r = d[1].hypot(d[2]);
    if r == 0.0 {
        return Err(Error::NearSourceLine { gap: 0.0, gap_min: 0.0 });
    }
    let radius = tail_radius(wn.ks.norm(), r, tol) + wn.ks.norm();
    spectral(wn, alpha, d, radius)
}
