//! The 2D quasi-periodic Lamé Green's function as a spectral series over
//! the modes α_l = α + 2πm.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::green_free::{CMat, GreenEval};
use crate::medium::{
    classify_mode_tol, mode_range, tail_radius, tail_sum, ElasticMedium, ModeClass, ModeData, QuasiMomentum,
    Truncation, Wavenumbers,
};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Literal,
    Unified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseUsed {
    LiteralL1,
    LiteralL2,
    LiteralL3,
    Unified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTerm2D {
    pub mode: ModeData,
    pub matrix: Matrix2<C64>,
    pub case_used: CaseUsed,
}

pub(crate) fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Mode block with branch-convention roots; valid at complex frequency too.
pub fn unified_term(wn: &Wavenumbers, alpha_l: f64, d2: f64) -> Matrix2<C64> {
    let a = alpha_l;
    let (beta, gamma) = wn.vertical(a * a);
    let t = d2.abs();
    let ep = (I * beta * t).exp();
    let es = (I * gamma * t).exp();
    let pref = -I / (4.0 * PI * wn.rw2);
    let s = sgn(d2);
    let off = a * s * (ep - es);
    Matrix2::new(gamma * es + a * a * ep / beta, off, off, beta * ep + a * a * es / gamma) * pref
}

/// x-gradient of the mode block, without the tangential phase: (∂₁, ∂₂) where
/// ∂₁ only contributes the factor iα_l.
fn unified_term_d2(wn: &Wavenumbers, alpha_l: f64, d2: f64) -> Matrix2<C64> {
    let a = alpha_l;
    let (beta, gamma) = wn.vertical(a * a);
    let t = d2.abs();
    let ep = (I * beta * t).exp();
    let es = (I * gamma * t).exp();
    let pref = -I / (4.0 * PI * wn.rw2);
    let s = sgn(d2);
    let off = I * a * (beta * ep - gamma * es);
    Matrix2::new(
        I * s * (gamma * gamma * es + a * a * ep),
        off,
        off,
        I * s * (beta * beta * ep + a * a * es),
    ) * pref
}

/// The three case matrices with their printed prefactors, real frequency only.
fn literal_term(m: &ElasticMedium, mode: &ModeData, d2: f64) -> (Matrix2<C64>, CaseUsed) {
    let (lam, mu) = (m.lambda, m.mu);
    let (kp, ks) = (m.kp(), m.ks());
    let (kp2, ks2) = (kp * kp, ks * ks);
    let a = mode.alpha_l[0];
    let a2 = a * a;
    let t = d2.abs();
    let s = sgn(d2);
    let c = |re: f64| C64::new(re, 0.0);
    match mode.class {
        ModeClass::L1 => {
            let pre = I / (4.0 * PI) * (lam + mu) / (mu * (lam + 2.0 * mu) * (kp2 - ks2));
            let bp = (kp2 - a2).sqrt();
            let gs = (ks2 - a2).sqrt();
            let ep = C64::from_polar(1.0, bp * t);
            let es = C64::from_polar(1.0, gs * t);
            let off = c(a * s) * (ep - es);
            (
                Matrix2::new(gs * es + a2 / bp * ep, off, off, bp * ep + a2 / gs * es) * pre,
                CaseUsed::LiteralL1,
            )
        }
        ModeClass::L2 => {
            let pre = c((lam + mu) / (4.0 * PI * mu * (lam + 2.0 * mu) * (ks2 - kp2)));
            let tp = (a2 - kp2).sqrt();
            let gs = (ks2 - a2).sqrt();
            let ep = c((-tp * t).exp());
            let es = C64::from_polar(1.0, gs * t);
            let off = I * a * s * (es - ep);
            (
                Matrix2::new(-a2 / tp * ep - I * gs * es, off, off, tp * ep - I * a2 / gs * es) * pre,
                CaseUsed::LiteralL2,
            )
        }
        ModeClass::L3 => {
            let pre = c((lam + mu) / (4.0 * PI * mu * (lam + 2.0 * mu) * (ks2 - kp2)));
            let tp = (a2 - kp2).sqrt();
            let ts = (a2 - ks2).sqrt();
            let ep = c((-tp * t).exp());
            let es = c((-ts * t).exp());
            let off = I * a * s * (es - ep);
            (
                Matrix2::new(ts * es - a2 / tp * ep, off, off, tp * ep - a2 / ts * es) * pre,
                CaseUsed::LiteralL3,
            )
        }
    }
}

pub fn mode_term_2d(medium: &ElasticMedium, mode: &ModeData, x2: f64, y2: f64, form: Form) -> Result<ModeTerm2D> {
    if mode.beta.norm() == 0.0 || mode.gamma.norm() == 0.0 {
        return Err(Error::WoodAnomaly {
            m: mode.m[0],
            detail: "vanishing vertical wavenumber".into(),
        });
    }
    let d2 = x2 - y2;
    let (matrix, case_used) = match form {
        Form::Unified => (
            unified_term(&medium.wavenumbers(), mode.alpha_l[0], d2),
            CaseUsed::Unified,
        ),
        Form::Literal => literal_term(medium, mode, d2),
    };
    Ok(ModeTerm2D {
        mode: *mode,
        matrix,
        case_used,
    })
}

/// Per-mode max-norm bound of the block (and of its gradient when `grad`).
fn term_bound(wn: &Wavenumbers, alpha_l: f64, gap: f64, grad: bool) -> f64 {
    let a = alpha_l.abs();
    let (beta, gamma) = wn.vertical(a * a);
    let (b, g) = (beta.norm(), gamma.norm());
    let decay = (-beta.im * gap).exp().max((-gamma.im * gap).exp());
    let mut v = (g + a * a / b).max(b + a * a / g) + 2.0 * a;
    if grad {
        v *= a.max(b).max(g) * 2.0;
    }
    v * decay / (4.0 * PI * wn.rw2.norm())
}

/// Spectral sum for a possibly complex frequency; modes with |α_l| ≤ radius.
pub(crate) fn spectral(
    wn: &Wavenumbers,
    alpha: f64,
    d: [f64; 2],
    radius: f64,
    grad: bool,
) -> (CMat<2>, [CMat<2>; 2], usize, f64) {
    let range = mode_range(alpha, radius);
    let (lo, hi) = (*range.start(), *range.end());
    let mut g = CMat::<2>::zeros();
    let mut dg = [CMat::<2>::zeros(); 2];
    let mut count = 0;
    for m in range {
        let al = alpha + 2.0 * PI * m as f64;
        let ph = C64::from_polar(1.0, alpha * d[0]) * C64::from_polar(1.0, 2.0 * PI * m as f64 * d[0]);
        let t = unified_term(wn, al, d[1]) * ph;
        g += t;
        if grad {
            dg[0] += t * (I * al);
            dg[1] += unified_term_d2(wn, al, d[1]) * ph;
        }
        count += 1;
    }
    let gap = d[1].abs();
    let tail = tail_sum(|m| term_bound(wn, alpha + 2.0 * PI * m as f64, gap, grad), lo, hi);
    (g, dg, count, tail)
}

fn prepare(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    x: &[f64],
    y: &[f64],
    tr: &Truncation,
) -> Result<([f64; 2], f64)> {
    tr.check()?;
    if x.len() != 2 || y.len() != 2 {
        return Err(Error::InvalidInput("points must have 2 coordinates".into()));
    }
    let d = [x[0] - y[0], x[1] - y[1]];
    let gap = d[1].abs();
    if gap < tr.gap_min {
        return Err(Error::NearSourceLine {
            gap,
            gap_min: tr.gap_min,
        });
    }
    let radius = tail_radius(medium.ks(), gap, tr.tol);
    for m in mode_range(q.alpha[0], radius) {
        classify_mode_tol(medium, q, [m, 0], tr.tol_wood)?;
    }
    Ok((d, radius))
}

/// G^α(x, y) at real frequency.
pub fn green2d_eval(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    x: &[f64],
    y: &[f64],
    tr: &Truncation,
) -> Result<GreenEval<2>> {
    let (d, radius) = prepare(medium, q, x, y, tr)?;
    let (value, _, modes_used, tail_bound) = spectral(&medium.wavenumbers(), q.alpha[0], d, radius, false);
    Ok(GreenEval {
        value,
        modes_used,
        tail_bound,
    })
}

/// G^α(x, y) with its x-gradient [∂₁G, ∂₂G].
pub fn green2d_jet(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    x: &[f64],
    y: &[f64],
    tr: &Truncation,
) -> Result<(GreenEval<2>, [CMat<2>; 2])> {
    let (d, radius) = prepare(medium, q, x, y, tr)?;
    let (value, dg, modes_used, tail_bound) = spectral(&medium.wavenumbers(), q.alpha[0], d, radius, true);
    Ok((
        GreenEval {
            value,
            modes_used,
            tail_bound,
        },
        dg,
    ))
}

/// Spectral series at arbitrary (complex) frequency, for the lattice-sum comparison.
pub fn green2d_eval_at(wn: &Wavenumbers, alpha: f64, x: [f64; 2], y: [f64; 2], tol: f64) -> Result<GreenEval<2>> {
    let d = [x[0] - y[0], x[1] - y[1]];
    let gap = d[1].abs();
    if gap == 0.0 {
        return Err(Error::NearSourceLine { gap, gap_min: 0.0 });
    }
    let radius = tail_radius(wn.ks.norm(), gap, tol) + wn.ks.norm();
    let (value, _, modes_used, tail_bound) = spectral(wn, alpha, d, radius, false);
    Ok(GreenEval {
        value,
        modes_used,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::classify_mode;

    fn med() -> ElasticMedium {
        ElasticMedium::new(2.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn literal_equals_unified_for_every_class() {
        let m = ElasticMedium::new(1.3, 0.7, 1.2, 4.0).unwrap();
        let q = QuasiMomentum::qp2d(2.0);
        let mut seen = [false; 3];
        for k in -3..=3 {
            let md = classify_mode(&m, &q, [k, 0]).unwrap();
            seen[md.class as usize] = true;
            for &(x2, y2) in &[(0.4, -0.1), (-0.3, 0.2), (0.5, 0.5)] {
                let a = mode_term_2d(&m, &md, x2, y2, Form::Literal).unwrap().matrix;
                let b = mode_term_2d(&m, &md, x2, y2, Form::Unified).unwrap().matrix;
                let scale = b.iter().fold(0.0f64, |s, z| s.max(z.norm()));
                assert!((a - b).iter().all(|z| z.norm() <= 1e-13 * scale), "m={k} {a} {b}");
            }
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn off_diagonal_vanishes_at_zero_alpha() {
        let m = med();
        let md = classify_mode(&m, &QuasiMomentum::qp2d(0.0), [0, 0]).unwrap();
        for f in [Form::Literal, Form::Unified] {
            let t = mode_term_2d(&m, &md, 0.7, 0.1, f).unwrap().matrix;
            assert_eq!(t[(0, 1)], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn near_source_line_rejected() {
        let e = green2d_eval(
            &med(),
            &QuasiMomentum::qp2d(0.3),
            &[0.1, 0.0005],
            &[0.0, 0.0],
            &Truncation::default(),
        );
        assert!(matches!(e, Err(Error::NearSourceLine { .. })));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (m, q, tr) = (med(), QuasiMomentum::qp2d(0.3), Truncation::default());
        let y = [0.1, -0.2];
        let x = [0.35, 0.6];
        let (_, dg) = green2d_jet(&m, &q, &x, &y, &tr).unwrap();
        let h = 1e-5;
        for a in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let fd = (green2d_eval(&m, &q, &xp, &y, &tr).unwrap().value
                - green2d_eval(&m, &q, &xm, &y, &tr).unwrap().value)
                / C64::new(2.0 * h, 0.0);
            assert!((fd - dg[a]).iter().all(|z| z.norm() < 1e-7), "{a}");
        }
    }
}
