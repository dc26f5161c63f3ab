//! G^α near and on the source line, for boundary integrals.
//!
//! With d₁ reduced to [−½, ½], the scalar lattice sum splits into the copies
//! n = −1, 0, 1 and a remainder Σ_{|n|≥2} that is a regular wave function in
//! |d| < 2, expanded as Σ_ℓ a_ℓ J_ℓ(kr)e^{iℓθ} (Graf). The coefficients are
//! lattice sums a_ℓ = (i/4)[T_ℓ(α) + (−1)^ℓ T_ℓ(−α)], T_ℓ(φ) = Σ_{n≥2}e^{inφ}H_ℓ(kn),
//! summed directly up to kn ≈ 3000 and beyond via the Hankel asymptotic series
//! and polylog-type tails Σ_{n≥N} zⁿ n^{−s}.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::green2d::spectral;
use crate::green_free::{kupradze_jet, CMat, QP_WEIGHT};
use crate::medium::{classify_mode_tol, mode_range, tail_radius, ElasticMedium, QuasiMomentum, Wavenumbers};
use crate::specfun::{bessel_j_seq, hankel1_seq};

const I: C64 = C64 { re: 0.0, im: 1.0 };
/// Above this |d₂| the spectral series is used.
pub const SPECTRAL_GAP: f64 = 0.5;
const TAIL_START: f64 = 3000.0;

/// Coefficient arrays of one scalar remainder and its derivatives, indexed
/// ℓ + lmax.
struct Scalar {
    k: f64,
    lmax: usize,
    f: Vec<C64>,
    d1: [Vec<C64>; 2],
    d2: [Vec<C64>; 3],
    d3: [Vec<C64>; 4],
}

/// Σ_{n≥N} zⁿ n^{−(j+½)} = (1/Γ(j+½)) ∫ u^{2j} z^N e^{−Nu²} / (1 − z e^{−u²}) du.
fn power_tail(z: C64, n0: usize, j: usize) -> Result<C64> {
    let n = n0 as f64;
    let th = z.arg().abs();
    if th < 1e-12 {
        return Err(Error::WoodAnomaly {
            m: 0,
            detail: "lattice tail at a Wood anomaly".into(),
        });
    }
    let dist = (th / 2.0).sqrt();
    let h = (0.5 / n.sqrt()).min(2.0 * PI * dist / 40.0);
    let umax = ((50.0 + 2.0 * j as f64) / n)
        .sqrt()
        .max(((2 * j) as f64 / n).sqrt() * 2.0);
    let steps = (umax / h).ceil() as usize;
    let zn = z.powf(n);
    let mut acc = C64::new(0.0, 0.0);
    for s in 0..=steps {
        let u = s as f64 * h;
        let e = (-u * u).exp();
        let v = u.powi(2 * j as i32) * (-n * u * u).exp() / (1.0 - z * e);
        acc += if s == 0 { v } else { 2.0 * v };
    }
    // Γ(j + ½) = (2j)! √π / (4^j j!)
    let mut gamma = PI.sqrt();
    for i in 0..j {
        gamma *= i as f64 + 0.5;
    }
    Ok(zn * acc * h / gamma)
}

/// T_ℓ(φ) for ℓ = 0..=lmax.
fn lattice_t(k: f64, phi: f64, lmax: usize) -> Result<Vec<C64>> {
    let n_tail = ((TAIL_START / k).ceil() as usize).max(16);
    let mut t = vec![C64::new(0.0, 0.0); lmax + 1];
    for n in 2..n_tail {
        let h = hankel1_seq(lmax, k * n as f64)?;
        let ph = C64::from_polar(1.0, phi * n as f64);
        for (tl, hl) in t.iter_mut().zip(&h) {
            *tl += ph * hl;
        }
    }
    let z = C64::from_polar(1.0, phi + k);
    let mut tails = Vec::new();
    let pref = (2.0 / (PI * k)).sqrt();
    for l in 0..=lmax {
        // a_j(ℓ) i^j / k^j, until negligible at x = kN
        let mu = 4.0 * (l * l) as f64;
        let mut coef = C64::new(1.0, 0.0);
        let mut sum = C64::new(0.0, 0.0);
        let nt = n_tail as f64;
        for j in 0..40 {
            if j > 0 {
                let odd = (2 * j - 1) as f64;
                coef *= I * (mu - odd * odd) / (8.0 * j as f64 * k);
            }
            if j >= tails.len() {
                tails.push(power_tail(z, n_tail, j)?);
            }
            sum += coef * tails[j];
            if j > 0 && coef.norm() * nt.powi(-(j as i32)) < 1e-18 {
                break;
            }
        }
        t[l] += pref * C64::from_polar(1.0, -(l as f64 * PI / 2.0 + PI / 4.0)) * sum;
    }
    Ok(t)
}

fn sign(l: i64) -> f64 {
    if l % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Scalar {
    fn new(k: f64, alpha: f64, lcore: usize) -> Result<Self> {
        let lmax = lcore + 3;
        let tp = lattice_t(k, alpha, lcore)?;
        let tm = lattice_t(k, -alpha, lcore)?;
        let size = 2 * lmax + 1;
        let mut f = vec![C64::new(0.0, 0.0); size];
        for l in 0..=lcore {
            let s = sign(l as i64);
            f[lmax + l] = I / 4.0 * (tp[l] + s * tm[l]);
            f[lmax - l] = I / 4.0 * (s * tp[l] + tm[l]);
        }
        let dx = |a: &Vec<C64>, axis: usize| -> Vec<C64> {
            // D± = ∂₁ ± i∂₂ shift ℓ by ±1 with factors −k and k
            let mut plus = vec![C64::new(0.0, 0.0); size];
            let mut minus = vec![C64::new(0.0, 0.0); size];
            for i in 0..size {
                if i + 1 < size {
                    plus[i + 1] = -k * a[i];
                }
                if i >= 1 {
                    minus[i - 1] = k * a[i];
                }
            }
            (0..size)
                .map(|i| {
                    if axis == 0 {
                        0.5 * (plus[i] + minus[i])
                    } else {
                        (plus[i] - minus[i]) / (2.0 * I)
                    }
                })
                .collect()
        };
        let f1 = dx(&f, 0);
        let f2 = dx(&f, 1);
        let f11 = dx(&f1, 0);
        let f12 = dx(&f1, 1);
        let f22 = dx(&f2, 1);
        let d3 = [dx(&f11, 0), dx(&f11, 1), dx(&f12, 1), dx(&f22, 1)];
        Ok(Scalar {
            k,
            lmax,
            f,
            d1: [f1, f2],
            d2: [f11, f12, f22],
            d3,
        })
    }

    /// J_ℓ(kr)e^{iℓθ} for |ℓ| ≤ lmax.
    fn basis(&self, d: [f64; 2]) -> Vec<C64> {
        let r = d[0].hypot(d[1]);
        let th = d[1].atan2(d[0]);
        let j = bessel_j_seq(self.lmax, self.k * r);
        let mut z = vec![C64::new(0.0, 0.0); 2 * self.lmax + 1];
        for l in 0..=self.lmax {
            let e = C64::from_polar(1.0, l as f64 * th);
            z[self.lmax + l] = j[l] * e;
            z[self.lmax - l] = sign(l as i64) * j[l] * e.conj();
        }
        z
    }
}

fn dot(a: &[C64], z: &[C64]) -> C64 {
    a.iter().zip(z).map(|(a, z)| a * z).sum()
}

/// Quasi-periodic 2D Green's tensor usable at any d off the lattice points.
pub struct QpKernel2D {
    wn: Wavenumbers,
    alpha: f64,
    s: Scalar,
    p: Scalar,
}

/// Value and x-gradient [∂₁G, ∂₂G].
pub type Jet2 = (CMat<2>, [CMat<2>; 2]);

impl QpKernel2D {
    pub fn new(medium: &ElasticMedium, q: &QuasiMomentum) -> Result<Self> {
        let alpha = q.alpha[0];
        let ks = medium.ks();
        for m in mode_range(alpha, ks + 2.0 * PI) {
            classify_mode_tol(medium, q, [m, 0], 1e-8)?;
        }
        let lcore = 40 + 2 * ks.ceil() as usize;
        Ok(QpKernel2D {
            wn: medium.wavenumbers(),
            alpha,
            s: Scalar::new(ks, alpha, lcore)?,
            p: Scalar::new(medium.kp(), alpha, lcore)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn wavenumbers(&self) -> &Wavenumbers {
        &self.wn
    }

    /// Lamé remainder (regular part beyond the three copies) at reduced d.
    fn remainder(&self, d: [f64; 2], grad: bool) -> Jet2 {
        let zs = self.s.basis(d);
        let zp = self.p.basis(d);
        let (mu, rw) = (self.wn.mu, self.wn.rw2);
        let mut g = CMat::<2>::zeros();
        let hs: Vec<C64> = self.s.d2.iter().map(|a| dot(a, &zs)).collect();
        let hp: Vec<C64> = self.p.d2.iter().map(|a| dot(a, &zp)).collect();
        let fs = dot(&self.s.f, &zs);
        let idx = |i: usize, j: usize| i + j;
        for i in 0..2 {
            for j in 0..2 {
                g[(i, j)] = (hs[idx(i, j)] - hp[idx(i, j)]) / rw;
            }
            g[(i, i)] += fs / mu;
        }
        let mut dg = [CMat::<2>::zeros(); 2];
        if grad {
            let ts: Vec<C64> = self.s.d3.iter().map(|a| dot(a, &zs)).collect();
            let tp: Vec<C64> = self.p.d3.iter().map(|a| dot(a, &zp)).collect();
            let g1: Vec<C64> = self.s.d1.iter().map(|a| dot(a, &zs)).collect();
            for (l, dl) in dg.iter_mut().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        let n = l + i + j;
                        dl[(i, j)] = (ts[n] - tp[n]) / rw;
                    }
                    dl[(i, i)] += g1[l] / mu;
                }
            }
        }
        (g, dg)
    }

    /// G^α(d) and optionally its gradient, for d not on the lattice {n e₁}.
    pub fn jet(&self, d: [f64; 2], grad: bool) -> Result<Jet2> {
        let n0 = d[0].round();
        let red = [d[0] - n0, d[1]];
        let shift = C64::from_polar(1.0, self.alpha * n0);
        let (g, dg) = if red[1].abs() >= SPECTRAL_GAP {
            let radius = tail_radius(self.wn.ks.re, red[1].abs(), 1e-16);
            let (g, dg, _, _) = spectral(&self.wn, self.alpha, red, radius, grad);
            (g, dg)
        } else {
            let (mut g, mut dg) = self.remainder(red, grad);
            for n in -1..=1i32 {
                let (k, dk) = kupradze_jet::<2>(&self.wn, [red[0] - n as f64, red[1]], grad)?;
                let ph = C64::from_polar(1.0, self.alpha * n as f64);
                g += k * ph;
                if grad {
                    dg[0] += dk[0] * ph;
                    dg[1] += dk[1] * ph;
                }
            }
            let w = C64::new(QP_WEIGHT, 0.0);
            (g * w, [dg[0] * w, dg[1] * w])
        };
        Ok((g * shift, [dg[0] * shift, dg[1] * shift]))
    }

    pub fn eval(&self, d: [f64; 2]) -> Result<CMat<2>> {
        Ok(self.jet(d, false)?.0)
    }

    /// G^α(d) minus its n = 0 copy, at d = 0 (the regular part on the diagonal).
    pub fn regular_at_origin(&self) -> Result<CMat<2>> {
        let (mut g, _) = self.remainder([0.0, 0.0], false);
        for n in [-1i32, 1] {
            let (k, _) = kupradze_jet::<2>(&self.wn, [-(n as f64), 0.0], false)?;
            g += k * C64::from_polar(1.0, self.alpha * n as f64);
        }
        Ok(g * C64::new(QP_WEIGHT, 0.0))
    }
}
