//! Free-space Kupradze tensors and phased lattice sums of them.
//!
//! The lattice sums carry the source weights of the spectral Green's functions:
//! the periodic forms equal −1/(2π) times the phased Kupradze sum, the
//! biperiodic form −1/(4π²) times it.

use nalgebra::SMatrix;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::medium::{ElasticMedium, Wavenumbers};
use crate::specfun::{hankel01_complex, hankel1_seq};

pub type CMat<const D: usize> = SMatrix<C64, D, D>;

/// A Green's tensor value with truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEval<const D: usize> {
    pub value: CMat<D>,
    pub modes_used: usize,
    /// bound on the dropped part of the series, max-norm
    pub tail_bound: f64,
}

/// Weight of the periodic spectral forms relative to the phased Kupradze sum.
pub const QP_WEIGHT: f64 = -1.0 / (2.0 * PI);
/// Same for the biperiodic form.
pub const BIQP_WEIGHT: f64 = -1.0 / (4.0 * PI * PI);

const COINCIDENT: f64 = 1e-12;

pub fn max_norm<const D: usize>(m: &CMat<D>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Radial derivative ladder of the scalar fundamental solution F(r):
/// returns [F, g1, g2, g3] with g_{m+1} = g_m'/r, g_0 = F.
/// In 2D F = (i/4)H₀(kr), in 3D F = e^{ikr}/(4πr).
pub fn radial_ladder<const D: usize>(k: C64, r: f64) -> Result<[C64; 4]> {
    let mut h = [C64::new(0.0, 0.0); 4];
    if D == 2 {
        if k.im == 0.0 && k.re > 0.0 {
            let s = hankel1_seq(3, k.re * r)?;
            h.copy_from_slice(&s[..4]);
        } else {
            let z = k * r;
            let (h0, h1) = hankel01_complex(z)?;
            h[0] = h0;
            h[1] = h1;
            h[2] = 2.0 / z * h1 - h0;
            h[3] = 4.0 / z * h[2] - h1;
        }
        let mut out = [C64::new(0.0, 0.0); 4];
        let mut f = I / 4.0;
        for (m, o) in out.iter_mut().enumerate() {
            *o = f * h[m];
            f *= -k / r;
        }
        Ok(out)
    } else {
        let z = k * r;
        let e = (I * z).exp();
        h[0] = -I * e / z;
        h[1] = -e * (z + I) / (z * z);
        h[2] = 3.0 / z * h[1] - h[0];
        h[3] = 5.0 / z * h[2] - h[1];
        let mut out = [C64::new(0.0, 0.0); 4];
        let mut f = I * k / (4.0 * PI);
        for (m, o) in out.iter_mut().enumerate() {
            *o = f * h[m];
            f *= -k / r;
        }
        Ok(out)
    }
}

/// Kupradze tensor at separation d = x − y and, optionally, its gradient in x.
pub fn kupradze_jet<const D: usize>(wn: &Wavenumbers, d: [f64; D], with_grad: bool) -> Result<(CMat<D>, [CMat<D>; D])> {
    let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r < COINCIDENT {
        return Err(Error::CoincidentPoints(r));
    }
    let s = radial_ladder::<D>(wn.ks, r)?;
    let p = radial_ladder::<D>(wn.kp, r)?;
    let inv_mu = 1.0 / wn.mu;
    let inv_rw = 1.0 / wn.rw2;
    let a = s[0] * inv_mu + (s[1] - p[1]) * inv_rw;
    let b = (s[2] - p[2]) * inv_rw;
    let mut g = CMat::<D>::zeros();
    for j in 0..D {
        for k in 0..D {
            let mut v = b * (d[j] * d[k]);
            if j == k {
                v += a;
            }
            g[(j, k)] = v;
        }
    }
    let mut grad = [CMat::<D>::zeros(); D];
    if with_grad {
        let c1 = s[1] * inv_mu;
        let c3 = (s[3] - p[3]) * inv_rw;
        for (l, gl) in grad.iter_mut().enumerate() {
            for j in 0..D {
                for k in 0..D {
                    let mut v = c3 * (d[j] * d[k] * d[l]);
                    let mut w = 0.0;
                    if j == k {
                        v += c1 * d[l];
                        w += d[l];
                    }
                    if j == l {
                        w += d[k];
                    }
                    if k == l {
                        w += d[j];
                    }
                    gl[(j, k)] = v + b * w;
                }
            }
        }
    }
    Ok((g, grad))
}

fn sep<const D: usize>(x: &[f64], y: &[f64]) -> Result<[f64; D]> {
    if x.len() != D || y.len() != D {
        return Err(Error::InvalidInput(format!("points must have {D} coordinates")));
    }
    let mut d = [0.0; D];
    for i in 0..D {
        d[i] = x[i] - y[i];
    }
    Ok(d)
}

/// Free-space Kupradze tensor in 2D.
pub fn kupradze_2d(medium: &ElasticMedium, x: &[f64], y: &[f64]) -> Result<GreenEval<2>> {
    let d = sep::<2>(x, y)?;
    let (value, _) = kupradze_jet::<2>(&medium.wavenumbers(), d, false)?;
    Ok(GreenEval {
        value,
        modes_used: 1,
        tail_bound: 0.0,
    })
}

/// Free-space Kupradze tensor in 3D.
pub fn kupradze_3d(medium: &ElasticMedium, x: &[f64], y: &[f64]) -> Result<GreenEval<3>> {
    let d = sep::<3>(x, y)?;
    let (value, _) = kupradze_jet::<3>(&medium.wavenumbers(), d, false)?;
    Ok(GreenEval {
        value,
        modes_used: 1,
        tail_bound: 0.0,
    })
}

/// Kahan-compensated accumulator for a complex matrix.
struct Acc<const D: usize> {
    sum: CMat<D>,
    c: CMat<D>,
}

impl<const D: usize> Acc<D> {
    fn new() -> Self {
        Acc {
            sum: CMat::zeros(),
            c: CMat::zeros(),
        }
    }
    fn add(&mut self, v: &CMat<D>) {
        for i in 0..D * D {
            let y = v[i] - self.c[i];
            let t = self.sum[i] + y;
            self.c[i] = (t - self.sum[i]) - y;
            self.sum[i] = t;
        }
    }
}

/// Number of periods needed so that e^{−Im(k_p) N} ≤ 1e−13 at complex frequency.
pub fn default_lattice_n(wn: &Wavenumbers) -> usize {
    let im = wn.kp.im;
    if im <= 0.0 {
        return 400;
    }
    ((30.0 / im).ceil() as usize).max(8)
}

fn tail_estimate(last: f64, ratio: f64, sides: f64) -> f64 {
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        sides * last * ratio / (1.0 - ratio)
    }
}

/// Σ_{|n|≤N} Kupradze(x, y + n e₁) e^{inα} e^{−εn²}, scaled by the periodic weight.
pub fn lattice_sum_qp<const D: usize>(
    wn: &Wavenumbers,
    alpha: f64,
    x: [f64; D],
    y: [f64; D],
    damping: f64,
    n: usize,
) -> Result<GreenEval<D>> {
    let n = n as i64;
    let mut acc = Acc::<D>::new();
    let mut last = 0.0f64;
    for j in -n..=n {
        let mut d = [0.0; D];
        for i in 0..D {
            d[i] = x[i] - y[i];
        }
        d[0] -= j as f64;
        let (k, _) = kupradze_jet::<D>(wn, d, false)?;
        let w = C64::from_polar((-damping * (j * j) as f64).exp(), j as f64 * alpha);
        let t = k * w;
        if j.abs() == n {
            last = last.max(max_norm(&t));
        }
        acc.add(&t);
    }
    let ratio = (-wn.kp.im.max(0.0) - damping * (2 * n + 1) as f64).exp();
    Ok(GreenEval {
        value: acc.sum * C64::new(QP_WEIGHT, 0.0),
        modes_used: (2 * n + 1) as usize,
        tail_bound: tail_estimate(last * QP_WEIGHT.abs(), ratio, 2.0),
    })
}

/// Biperiodic phased lattice sum over |n₁|, |n₂| ≤ N.
pub fn lattice_sum_biqp(
    wn: &Wavenumbers,
    alpha: [f64; 2],
    x: [f64; 3],
    y: [f64; 3],
    damping: f64,
    n: usize,
) -> Result<GreenEval<3>> {
    let n = n as i64;
    let mut rows = Vec::with_capacity((2 * n + 1) as usize);
    for j1 in -n..=n {
        let mut acc = Acc::<3>::new();
        let mut last = 0.0f64;
        for j2 in -n..=n {
            let d = [x[0] - y[0] - j1 as f64, x[1] - y[1] - j2 as f64, x[2] - y[2]];
            let (k, _) = kupradze_jet::<3>(wn, d, false)?;
            let nn = (j1 * j1 + j2 * j2) as f64;
            let w = C64::from_polar((-damping * nn).exp(), j1 as f64 * alpha[0] + j2 as f64 * alpha[1]);
            let t = k * w;
            if j1.abs() == n || j2.abs() == n {
                last = last.max(max_norm(&t));
            }
            acc.add(&t);
        }
        rows.push((acc.sum, last));
    }
    let mut acc = Acc::<3>::new();
    let mut last = 0.0f64;
    for (s, l) in &rows {
        acc.add(s);
        last = last.max(*l);
    }
    let ratio = (-wn.kp.im.max(0.0) - damping * (2 * n + 1) as f64).exp();
    // shell perimeter grows linearly; 8(N+1) points on the next shell
    let shells = 8.0 * (n + 1) as f64;
    Ok(GreenEval {
        value: acc.sum * C64::new(BIQP_WEIGHT, 0.0),
        modes_used: ((2 * n + 1) * (2 * n + 1)) as usize,
        tail_bound: tail_estimate(last * BIQP_WEIGHT.abs(), ratio, shells),
    })
}

/// Real-frequency periodic lattice sum: Gaussian-damped sums at ε, ε/2, ε/4
/// combined by Richardson extrapolation to ε → 0.
pub fn lattice_sum_qp_extrapolated<const D: usize>(
    wn: &Wavenumbers,
    alpha: f64,
    x: [f64; D],
    y: [f64; D],
    eps: f64,
) -> Result<CMat<D>> {
    let eval = |e: f64| -> Result<CMat<D>> {
        let n = (40.0 / e).sqrt().ceil() as usize;
        Ok(lattice_sum_qp::<D>(wn, alpha, x, y, e, n)?.value)
    };
    let (s1, s2, s4) = (eval(eps)?, eval(eps / 2.0)?, eval(eps / 4.0)?);
    // eliminate the ε and ε² terms
    let t1 = s2 * C64::new(2.0, 0.0) - s1;
    let t2 = s4 * C64::new(2.0, 0.0) - s2;
    Ok((t2 * C64::new(4.0, 0.0) - t1) / C64::new(3.0, 0.0))
}
