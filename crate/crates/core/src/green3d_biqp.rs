//! The 3D quasi-biperiodic Lamé Green's function (periods 1 in x₁ and x₂):
//! coefficients c_l(x₃) are explicit exponentials.
//!
//! Unified form: c_l = −(1/4π²)[(1/μ)g_s I + (1/ρω²) D Dᵀ (g_s − g_p)] with
//! g = (i/2γ) e^{iγ|x₃|}, D = (iα_{l,1}, iα_{l,2}, ∂₃).

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::green2d::{sgn, Form};
use crate::green3d_qp::Case3;
use crate::green_free::GreenEval;
use crate::medium::{
    classify_mode_tol, mode_range, ElasticMedium, ModeData, QuasiMomentum, Truncation, Wavenumbers, DEFAULT_TOL_WOOD,
};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode3BI {
    pub mode: ModeData,
    pub c: Matrix3<C64>,
    pub case_used: Case3,
}

/// (g, ∂₃g, ∂₃²g) for g = (i/2γ)e^{iγ|t|}, t ≠ 0.
fn profile(gamma: C64, t: f64) -> (C64, C64, C64) {
    let e = (I * gamma * t.abs()).exp();
    (I / (2.0 * gamma) * e, -0.5 * sgn(t) * e, -0.5 * I * gamma * e)
}

/// Unified coefficient matrix; valid at complex frequency.
pub fn unified_c_bi(wn: &Wavenumbers, a: [f64; 2], x3: f64) -> Matrix3<C64> {
    let (beta, gamma) = wn.vertical(a[0] * a[0] + a[1] * a[1]);
    let s = profile(gamma, x3);
    let p = profile(beta, x3);
    let d = (s.0 - p.0, s.1 - p.1, s.2 - p.2);
    let mut m = Matrix3::<C64>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = -a[i] * a[j] * d.0;
        }
        m[(i, 2)] = I * a[i] * d.1;
        m[(2, i)] = m[(i, 2)];
    }
    m[(2, 2)] = d.2;
    let mut c = m / wn.rw2;
    for i in 0..3 {
        c[(i, i)] += s.0 / wn.mu;
    }
    c * C64::new(-1.0 / (4.0 * PI * PI), 0.0)
}

/// The printed case tables, with c₃₃ repaired in Cases II and III (the
/// γ_s-term enters with the opposite sign).
fn literal_c_bi(m: &ElasticMedium, mode: &ModeData, x3: f64) -> Matrix3<C64> {
    let (mu, rw2) = (m.mu, m.rho_omega2());
    let a = mode.alpha_l;
    let gs = mode.gamma_s();
    let gp = mode.gamma_p();
    let t = x3.abs();
    let s = sgn(x3);
    let k8 = 1.0 / (8.0 * PI * PI);
    let case = Case3::of(mode.class);
    // s- and p-profiles e/γ and e as printed per case
    let (es, ep) = match case {
        Case3::I => (C64::new((-gs * t).exp(), 0.0), C64::new((-gp * t).exp(), 0.0)),
        Case3::II => (C64::from_polar(1.0, gs * t), C64::new((-gp * t).exp(), 0.0)),
        Case3::III => (C64::from_polar(1.0, gs * t), C64::from_polar(1.0, gp * t)),
    };
    let (qs, qp) = match case {
        Case3::I => (es / gs, ep / gp),
        Case3::II => (I * es / gs, ep / gp),
        Case3::III => (I * es / gs, I * ep / gp),
    };
    let mut c = Matrix3::<C64>::zeros();
    for i in 0..2 {
        c[(i, i)] = k8 * (-qs / mu + a[i] * a[i] / rw2 * (qs - qp));
        c[(i, 2)] = I * a[i] * k8 / rw2 * s * (es - ep);
        c[(2, i)] = c[(i, 2)];
    }
    c[(0, 1)] = a[0] * a[1] * k8 / rw2 * (qs - qp);
    c[(1, 0)] = c[(0, 1)];
    c[(2, 2)] = match case {
        Case3::I => k8 * (-qs / mu + (gp * ep - gs * es) / rw2),
        Case3::II => k8 * (-qs / mu + (gp * ep + I * gs * es) / rw2),
        Case3::III => I * k8 * (-es / (gs * mu) + (gs * es - gp * ep) / rw2),
    };
    c
}

pub fn c_l_bi(medium: &ElasticMedium, q: &QuasiMomentum, m: [i64; 2], x3: f64, form: Form) -> Result<FourierMode3BI> {
    if x3 == 0.0 || !x3.is_finite() {
        return Err(Error::Domain(
            "c_l needs x3 ≠ 0 (odd entries jump across the source plane)".into(),
        ));
    }
    let q = QuasiMomentum::biqp3d(q.alpha[0], q.alpha[1]);
    let mode = classify_mode_tol(medium, &q, m, DEFAULT_TOL_WOOD)?;
    let c = match form {
        Form::Unified => unified_c_bi(&medium.wavenumbers(), mode.alpha_l, x3),
        Form::Literal => literal_c_bi(medium, &mode, x3),
    };
    Ok(FourierMode3BI {
        mode,
        c,
        case_used: Case3::of(mode.class),
    })
}

/// Max-norm residual of the biperiodic mode ODE system at x₃ ≠ 0 (fourth-order
/// finite differences with step h).
pub fn ode_residual_bi(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    m: [i64; 2],
    x3: f64,
    h: f64,
    form: Form,
) -> Result<f64> {
    if x3.abs() <= 2.0 * h {
        return Err(Error::InvalidInput("ode_residual_bi needs |x3| > 2h".into()));
    }
    let f = |p: [f64; 1]| c_l_bi(medium, q, m, p[0], form).map(|v| v.c);
    let c = f([x3])?;
    let d1 = crate::fd::partial(&f, [x3], 0, h)?;
    let d2 = crate::fd::hessian(&f, [x3], h)?[0][0];
    let a = QuasiMomentum::biqp3d(q.alpha[0], q.alpha[1]).alpha_l(m);
    let (lam, mu, rw2) = (medium.lambda, medium.mu, medium.rho_omega2());
    let (lm, l2) = (lam + mu, lam + 2.0 * mu);
    let mut res = Matrix3::<C64>::zeros();
    for j in 0..3 {
        res[(0, j)] = (rw2 - l2 * a[0] * a[0] - mu * a[1] * a[1]) * c[(0, j)] + mu * d2[(0, j)]
            - lm * a[0] * a[1] * c[(1, j)]
            + I * lm * a[0] * d1[(2, j)];
        res[(1, j)] = -lm * a[0] * a[1] * c[(0, j)]
            + (rw2 - l2 * a[1] * a[1] - mu * a[0] * a[0]) * c[(1, j)]
            + mu * d2[(1, j)]
            + I * lm * a[1] * d1[(2, j)];
        res[(2, j)] = I * lm * a[0] * d1[(0, j)]
            + I * lm * a[1] * d1[(1, j)]
            + (rw2 - mu * (a[0] * a[0] + a[1] * a[1])) * c[(2, j)]
            + l2 * d2[(2, j)];
    }
    Ok(crate::green_free::max_norm(&res))
}

/// Max-norm bound of one mode at |α_l| = rho.
fn mode_bound(wn: &Wavenumbers, rho: f64, gap: f64) -> f64 {
    let (beta, gamma) = wn.vertical(rho * rho);
    let part = |g: C64| {
        let e = (-g.im * gap).exp();
        (rho * rho / (2.0 * g.norm()) + rho / 2.0 + g.norm() / 2.0) * e
    };
    let gs = (-gamma.im * gap).exp() / (2.0 * gamma.norm());
    (gs / wn.mu + (part(gamma) + part(beta)) / wn.rw2.norm()) / (4.0 * PI * PI)
}

/// Sum of the per-mode bound over lattice points with |α_l| > radius: every
/// such point owns a 2π-cell within distance √2·π, so the sum is below
/// (1/2π)∫_{R−√2π}^∞ f(ρ − √2π) ρ dρ when f decreases there.
fn disk_tail(wn: &Wavenumbers, radius: f64, gap: f64) -> f64 {
    let shift = std::f64::consts::SQRT_2 * PI;
    let r0 = (radius - shift).max(0.0);
    let step = (0.05 / gap).min(0.5);
    let mut sum = 0.0;
    let mut u = r0;
    let f = |rho: f64| mode_bound(wn, (rho - shift).max(0.0), gap) * rho;
    let mut prev = f(u);
    if !prev.is_finite() {
        return f64::INFINITY;
    }
    for _ in 0..2_000_000 {
        let next = f(u + step);
        sum += 0.5 * step * (prev + next);
        u += step;
        if next < 1e-40 * sum.max(1e-300) || next == 0.0 {
            break;
        }
        prev = next;
    }
    // trapezoid on a convex decaying integrand overestimates; add 1% margin
    1.01 * sum / (2.0 * PI)
}

fn spectral(wn: &Wavenumbers, alpha: [f64; 2], d: [f64; 3], radius: f64) -> GreenEval<3> {
    let rows: Vec<i64> = mode_range(alpha[0], radius).collect();
    let parts: Vec<(Matrix3<C64>, usize)> = rows
        .par_iter()
        .map(|&m1| {
            let a1 = alpha[0] + 2.0 * PI * m1 as f64;
            let r2 = (radius * radius - a1 * a1).max(0.0).sqrt();
            let ph1 = C64::from_polar(1.0, alpha[0] * d[0]) * C64::from_polar(1.0, 2.0 * PI * m1 as f64 * d[0]);
            let mut acc = Matrix3::<C64>::zeros();
            let mut n = 0;
            for m2 in mode_range(alpha[1], r2) {
                let a2 = alpha[1] + 2.0 * PI * m2 as f64;
                let ph2 = C64::from_polar(1.0, alpha[1] * d[1]) * C64::from_polar(1.0, 2.0 * PI * m2 as f64 * d[1]);
                acc += unified_c_bi(wn, [a1, a2], d[2]) * (ph1 * ph2);
                n += 1;
            }
            (acc, n)
        })
        .collect();
    let mut value = Matrix3::<C64>::zeros();
    let mut count = 0;
    for (v, n) in parts {
        value += v;
        count += n;
    }
    GreenEval {
        value,
        modes_used: count,
        tail_bound: disk_tail(wn, radius, d[2].abs()),
    }
}

/// Radius of the retained mode disk: Im γ_s·gap ≤ 35 + ln(1/tol).
pub fn disk_radius(ks: f64, gap: f64, tol: f64) -> f64 {
    let q = (35.0 + (1.0 / tol).ln()) / gap;
    (ks * ks + q * q).sqrt()
}

/// Quasi-biperiodic Green's tensor at real frequency.
pub fn greenbi_eval(
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
    let gap = d[2].abs();
    if gap < tr.gap_min {
        return Err(Error::NearSourcePlane {
            gap,
            gap_min: tr.gap_min,
        });
    }
    let q = QuasiMomentum::biqp3d(q.alpha[0], q.alpha[1]);
    // Wood check on the propagating disk only; far modes cannot be anomalous
    let ks = medium.ks();
    for m1 in mode_range(q.alpha[0], ks * 1.01 + 1.0) {
        let a1 = q.alpha[0] + 2.0 * PI * m1 as f64;
        let r2 = ((ks * 1.01 + 1.0).powi(2) - a1 * a1).max(0.0).sqrt();
        for m2 in mode_range(q.alpha[1], r2) {
            classify_mode_tol(medium, &q, [m1, m2], tr.tol_wood)?;
        }
    }
    let radius = disk_radius(ks, gap, tr.tol);
    Ok(spectral(&medium.wavenumbers(), q.alpha, d, radius))
}

/// Spectral series at arbitrary (complex) frequency.
pub fn greenbi_eval_at(wn: &Wavenumbers, alpha: [f64; 2], x: [f64; 3], y: [f64; 3], tol: f64) -> Result<GreenEval<3>> {
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    if d[2] == 0.0 {
        return Err(Error::NearSourcePlane { gap: 0.0, gap_min: 0.0 });
    }
    let radius = disk_radius(wn.ks.norm(), d[2].abs(), tol) + wn.ks.norm();
    Ok(spectral(wn, alpha, d, radius))
}
