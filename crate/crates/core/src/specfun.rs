//! Bessel, Hankel and modified Bessel functions of integer order.
//!
//! Real arguments use three regimes. Power series cover small `x`. Hankel
//! asymptotics cover large `x`. In between, `J`/`Y` come from Miller's
//! backward recurrence with Neumann sums, and `K` from a trapezoidal rule on
//! `∫ exp(-x cosh t) cosh(νt) dt`, which converges geometrically.
//!
//! Complex-argument Hankel functions of order 0 and 1 are provided for the
//! complexified-frequency checks. Their accuracy is about 1e-8, not 1e-15.

use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_MAX: f64 = 6.0;
const ASYMP_MIN: f64 = 25.0;
const K_SERIES_MAX: f64 = 2.0;
const K_ASYMP_MIN: f64 = 30.0;
const K_TRAP_STEP: f64 = 0.1;

fn require_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} needs finite x > 0, got {x}")))
    }
}

fn sign_pow(n: i64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn j01_series(x: f64) -> (f64, f64) {
    let t = -0.25 * x * x;
    let (mut a0, mut a1) = (1.0, 1.0);
    let (mut s0, mut s1) = (1.0, 1.0);
    for k in 1..60 {
        let k = k as f64;
        a0 *= t / (k * k);
        a1 *= t / (k * (k + 1.0));
        s0 += a0;
        s1 += a1;
        if a0.abs() < 1e-18 && a1.abs() < 1e-18 {
            break;
        }
    }
    (s0, 0.5 * x * s1)
}

fn y01_series(x: f64, j0: f64, j1: f64) -> (f64, f64) {
    let t = -0.25 * x * x;
    let lg = (0.5 * x).ln();
    let (mut a0, mut a1) = (1.0, 1.0);
    let mut h = 0.0;
    let mut s0 = 0.0;
    // k = 0 term of the Y1 sum: psi(1) + psi(2) = 1 - 2 gamma
    let mut s1 = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..60 {
        let kf = k as f64;
        a0 *= t / (kf * kf);
        a1 *= t / (kf * (kf + 1.0));
        h += 1.0 / kf;
        let h_next = h + 1.0 / (kf + 1.0);
        s0 += h * a0;
        s1 += (h + h_next - 2.0 * EULER_GAMMA) * a1;
        if a0.abs() < 1e-18 && a1.abs() < 1e-18 {
            break;
        }
    }
    let y0 = 2.0 / PI * ((lg + EULER_GAMMA) * j0 - s0);
    let y1 = -2.0 / (PI * x) + 2.0 / PI * lg * j1 - x / (2.0 * PI) * s1;
    (y0, y1)
}

fn jn_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut pref = 1.0;
    for k in 1..=n {
        pref *= half / k as f64;
        if pref == 0.0 {
            return 0.0;
        }
    }
    let t = -half * half;
    let mut a = 1.0;
    let mut s = 1.0;
    for k in 1..80 {
        let kf = k as f64;
        a *= t / (kf * (kf + n as f64));
        s += a;
        if a.abs() < 1e-18 * s.abs() {
            break;
        }
    }
    pref * s
}

/// Normalized Miller sequence J_0..=J_top for some top ≥ nmax.
fn miller(nmax: usize, x: f64) -> Vec<f64> {
    let base = nmax.max(x.ceil() as usize);
    let top = base + (60.0 * (base as f64 + 1.0)).sqrt() as usize + 20;
    let top = top + top % 2;
    let mut out = vec![0.0; top + 1];
    let mut jp1 = 0.0;
    let mut j = 1.0;
    let mut sum = 0.0;
    for k in (1..=top).rev() {
        out[k] = j;
        if k % 2 == 0 {
            sum += 2.0 * j;
        }
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp1 *= s;
            sum *= s;
            for v in out[k..].iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = j;
    sum += j;
    for v in out.iter_mut() {
        *v /= sum;
    }
    out
}

fn y01_neumann(x: f64, js: &[f64]) -> (f64, f64) {
    let lg = (0.5 * x).ln();
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < js.len() {
        let sg = sign_pow(k as i64);
        let kf = k as f64;
        s0 += sg * js[2 * k] / kf;
        s1 += sg * (2.0 * kf + 1.0) * js[2 * k + 1] / (kf * (kf + 1.0));
        k += 1;
    }
    let y0 = 2.0 / PI * ((lg + EULER_GAMMA) * js[0] - 2.0 * s0);
    let y1 = 2.0 / PI * (-js[0] / x + (lg - 1.0 + EULER_GAMMA) * js[1] - s1);
    (y0, y1)
}

fn hankel_asymptotic(nu: u32, x: f64) -> C64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= C64::new(0.0, (mu - odd * odd) / (8.0 * k as f64 * x));
        let mag = term.norm();
        if mag > prev {
            break;
        }
        sum += term;
        prev = mag;
        if mag < 1e-17 {
            break;
        }
    }
    let phase = C64::new(x.cos(), x.sin());
    let c = if nu == 0 {
        C64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
    } else {
        C64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
    };
    (2.0 / (PI * x)).sqrt() * phase * c * sum
}

/// (J0, J1, Y0, Y1) for x > 0.
fn jy01(x: f64) -> (f64, f64, f64, f64) {
    if x < SERIES_MAX {
        let (j0, j1) = j01_series(x);
        let (y0, y1) = y01_series(x, j0, j1);
        (j0, j1, y0, y1)
    } else if x < ASYMP_MIN {
        let js = miller(1, x);
        let (y0, y1) = y01_neumann(x, &js);
        (js[0], js[1], y0, y1)
    } else {
        let h0 = hankel_asymptotic(0, x);
        let h1 = hankel_asymptotic(1, x);
        (h0.re, h1.re, h0.im, h1.im)
    }
}

/// J_n(x) for integer n and real x.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let na = n.unsigned_abs();
    let mut sign = if n < 0 { sign_pow(na as i64) } else { 1.0 };
    let mut x = x;
    if x < 0.0 {
        x = -x;
        sign *= sign_pow(na as i64);
    }
    if x == 0.0 {
        return if na == 0 { 1.0 } else { 0.0 };
    }
    sign * bessel_j_pos(na, x)
}

fn bessel_j_pos(n: u32, x: f64) -> f64 {
    if x < SERIES_MAX {
        return jn_series(n, x);
    }
    if x < ASYMP_MIN || n as f64 > x {
        return miller(n as usize, x)[n as usize];
    }
    let (j0, j1, _, _) = jy01(x);
    if n == 0 {
        return j0;
    }
    let (mut a, mut b) = (j0, j1);
    for k in 1..n {
        let c = 2.0 * k as f64 / x * b - a;
        a = b;
        b = c;
    }
    b
}

/// J_0..=J_nmax at x ≥ 0.
pub fn bessel_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        return v;
    }
    let ax = x.abs();
    let mut v = miller(nmax, ax);
    v.truncate(nmax + 1);
    if x < 0.0 {
        for (k, val) in v.iter_mut().enumerate() {
            *val *= sign_pow(k as i64);
        }
    }
    v
}

/// Y_n(x), x > 0.
pub fn bessel_y(n: i32, x: f64) -> Result<f64> {
    Ok(hankel1(n, x)?.im)
}

/// H^(1)_m(x) = J_m(x) + i Y_m(x), x > 0.
pub fn hankel1(m: i32, x: f64) -> Result<C64> {
    require_positive(x, "hankel1")?;
    let ma = m.unsigned_abs();
    let sign = if m < 0 { sign_pow(ma as i64) } else { 1.0 };
    Ok(sign * hankel1_pos(ma, x))
}

fn hankel1_pos(m: u32, x: f64) -> C64 {
    let (j0, j1, y0, y1) = jy01(x);
    match m {
        0 => C64::new(j0, y0),
        1 => C64::new(j1, y1),
        _ => {
            let (mut a, mut b) = (y0, y1);
            for k in 1..m {
                let c = 2.0 * k as f64 / x * b - a;
                a = b;
                b = c;
            }
            C64::new(bessel_j_pos(m, x), b)
        }
    }
}

/// H^(1)_0..=H^(1)_nmax at x > 0.
pub fn hankel1_seq(nmax: usize, x: f64) -> Result<Vec<C64>> {
    require_positive(x, "hankel1_seq")?;
    let (j0, j1, y0, y1) = jy01(x);
    let mut ys = vec![y0, y1];
    for k in 1..nmax {
        let c = 2.0 * k as f64 / x * ys[k] - ys[k - 1];
        ys.push(c);
    }
    let js: Vec<f64> = if nmax <= 1 {
        vec![j0, j1]
    } else if x < ASYMP_MIN || nmax as f64 > x {
        let mut v = if x < SERIES_MAX {
            (0..=nmax as u32).map(|k| jn_series(k, x)).collect()
        } else {
            miller(nmax, x)
        };
        v.truncate(nmax + 1);
        v
    } else {
        let mut v = vec![j0, j1];
        for k in 1..nmax {
            let c = 2.0 * k as f64 / x * v[k] - v[k - 1];
            v.push(c);
        }
        v
    };
    Ok((0..=nmax).map(|k| C64::new(js[k], ys[k])).collect())
}

/// d/dx H^(1)_m(x) = H_{m-1} - (m/x) H_m.
pub fn hankel1_deriv(m: i32, x: f64) -> Result<C64> {
    let hm = hankel1(m, x)?;
    let hm1 = hankel1(m - 1, x)?;
    Ok(hm1 - m as f64 / x * hm)
}

fn k01_series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let lg = (0.5 * x).ln();
    let (mut a0, mut a1) = (1.0, 1.0);
    let (mut i0, mut i1) = (1.0, 1.0);
    let mut h = 0.0;
    let mut s0 = 0.0;
    let mut s1 = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..60 {
        let kf = k as f64;
        a0 *= t / (kf * kf);
        a1 *= t / (kf * (kf + 1.0));
        h += 1.0 / kf;
        let h_next = h + 1.0 / (kf + 1.0);
        i0 += a0;
        i1 += a1;
        s0 += h * a0;
        s1 += (h + h_next - 2.0 * EULER_GAMMA) * a1;
        if a0 < 1e-18 * i0 && a1 < 1e-18 * i1 {
            break;
        }
    }
    let i1 = 0.5 * x * i1;
    let k0 = -(lg + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
    (k0, k1)
}

fn k01_scaled_trapezoid(x: f64) -> (f64, f64) {
    let h = K_TRAP_STEP;
    let tmax = (1.0 + 50.0 / x).acosh();
    let n = (tmax / h).ceil() as usize;
    let (mut s0, mut s1) = (0.5, 0.5);
    for j in 1..=n {
        let t = j as f64 * h;
        let f = (-x * (t.cosh() - 1.0)).exp();
        s0 += f;
        s1 += f * t.cosh();
    }
    (h * s0, h * s1)
}

fn k01_scaled_asymptotic(x: f64) -> (f64, f64) {
    let sum = |nu: f64| {
        let mu = 4.0 * nu * nu;
        let mut term = 1.0;
        let mut s = 1.0;
        let mut prev = f64::INFINITY;
        for k in 1..200 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (8.0 * k as f64 * x);
            if term.abs() > prev {
                break;
            }
            s += term;
            prev = term.abs();
            if prev < 1e-17 {
                break;
            }
        }
        s
    };
    let pref = (PI / (2.0 * x)).sqrt();
    (pref * sum(0.0), pref * sum(1.0))
}

fn k01_scaled(x: f64) -> (f64, f64) {
    if x <= K_SERIES_MAX {
        let (k0, k1) = k01_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else if x < K_ASYMP_MIN {
        k01_scaled_trapezoid(x)
    } else {
        k01_scaled_asymptotic(x)
    }
}

/// exp(x) K_ν(x), x > 0.
pub fn mod_k_scaled(nu: u32, x: f64) -> Result<f64> {
    require_positive(x, "mod_k")?;
    let (k0, k1) = k01_scaled(x);
    Ok(match nu {
        0 => k0,
        1 => k1,
        _ => {
            let (mut a, mut b) = (k0, k1);
            for k in 1..nu {
                let c = a + 2.0 * k as f64 / x * b;
                a = b;
                b = c;
            }
            b
        }
    })
}

/// K_ν(x), x > 0. Underflows to 0 for very large x.
pub fn mod_k(nu: u32, x: f64) -> Result<f64> {
    Ok(mod_k_scaled(nu, x)? * (-x).exp())
}

/// K'_ν(x) = -K_{ν-1}(x) - (ν/x) K_ν(x), with K_{-1} = K_1.
pub fn mod_k_deriv(nu: u32, x: f64) -> Result<f64> {
    let prev = if nu == 0 { 1 } else { nu - 1 };
    Ok(-mod_k(prev, x)? - nu as f64 / x * mod_k(nu, x)?)
}

fn c_series01(z: C64) -> (C64, C64) {
    let t = -0.25 * z * z;
    let lg = (0.5 * z).ln();
    let (mut a0, mut a1) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
    let (mut j0, mut j1) = (a0, a1);
    let mut h = 0.0;
    let mut s0 = C64::new(0.0, 0.0);
    let mut s1 = C64::new(1.0 - 2.0 * EULER_GAMMA, 0.0);
    for k in 1..120 {
        let kf = k as f64;
        a0 *= t / (kf * kf);
        a1 *= t / (kf * (kf + 1.0));
        h += 1.0 / kf;
        let h_next = h + 1.0 / (kf + 1.0);
        j0 += a0;
        j1 += a1;
        s0 += h * a0;
        s1 += (h + h_next - 2.0 * EULER_GAMMA) * a1;
        if a0.norm() < 1e-18 && a1.norm() < 1e-18 {
            break;
        }
    }
    let j1 = 0.5 * z * j1;
    let y0 = 2.0 / PI * ((lg + EULER_GAMMA) * j0 - s0);
    let y1 = -2.0 / (PI * z) + 2.0 / PI * lg * j1 - z / (2.0 * PI) * s1;
    let i = C64::i();
    (j0 + i * y0, j1 + i * y1)
}

fn c_asymptotic(nu: u32, z: C64) -> C64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= C64::i() * (mu - odd * odd) / (8.0 * k as f64 * z);
        let mag = term.norm();
        if mag > prev {
            break;
        }
        sum += term;
        prev = mag;
        if mag < 1e-17 * sum.norm() {
            break;
        }
    }
    let phase = (C64::i() * (z - (nu as f64 * 0.5 + 0.25) * PI)).exp();
    (2.0 / (PI * z)).sqrt() * phase * sum
}

/// (H^(1)_0(z), H^(1)_1(z)) for complex z ≠ 0 with -π < arg z ≤ π.
/// Accuracy is about 1e-8 in the worst case.
pub fn hankel01_complex(z: C64) -> Result<(C64, C64)> {
    if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("hankel01_complex needs z ≠ 0, got {z}")));
    }
    let r = z.norm();
    let asym = r > 12.0 || (r > 8.5 && z.im.abs() > z.re.abs());
    if asym {
        Ok((c_asymptotic(0, z), c_asymptotic(1, z)))
    } else {
        Ok(c_series01(z))
    }
}
