//! Extended-precision reference values for J_n, Y_n and K_n.
//!
//! Power series for x ≤ 40, asymptotic expansions beyond, all at 384 bits.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

const P: usize = 384;
const RM: RoundingMode = RoundingMode::ToEven;
const SWITCH: f64 = 40.0;
const EULER: &str = "0.577215664901532860606512090082402431042159335939923598805767";

pub struct Big {
    cc: Consts,
    gamma: BigFloat,
    pi: BigFloat,
}

impl Big {
    pub fn new() -> Self {
        let mut cc = Consts::new().unwrap();
        let gamma = BigFloat::parse(EULER, Radix::Dec, P, RM, &mut cc);
        let pi = cc.pi(P, RM);
        Big { cc, gamma, pi }
    }

    fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    fn to_f64(&mut self, v: &BigFloat) -> f64 {
        v.format(Radix::Dec, RM, &mut self.cc).unwrap().parse().unwrap()
    }

    fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, P, RM)
    }
    fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, P, RM)
    }
    fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, P, RM)
    }
    fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, P, RM)
    }

    fn small(v: &BigFloat, scale: &BigFloat) -> bool {
        // |v| < 1e-45 |scale|
        let r = Self::div(v, scale).abs();
        let eps = BigFloat::from_f64(1e-45, P);
        r.cmp(&eps).map(|c| c < 0).unwrap_or(true)
    }

    /// Power series for J_n (n ≥ 0) and, for n ∈ {0, 1}, Y_n.
    fn jy_series(&mut self, n: u32, x: f64) -> (BigFloat, Option<BigFloat>) {
        let xb = self.f(x);
        let half = Self::div(&xb, &self.f(2.0));
        let t = Self::mul(&half, &half).neg();
        let mut pref = self.f(1.0);
        for k in 1..=n {
            pref = Self::div(&Self::mul(&pref, &half), &self.f(k as f64));
        }
        let mut a = self.f(1.0);
        let mut s = self.f(1.0);
        // harmonic-weighted sums for Y
        let mut h = self.f(0.0);
        let mut sy = if n == 0 { self.f(0.0) } else { self.f(1.0) };
        let one = self.f(1.0);
        for k in 1..2000 {
            let kb = self.f(k as f64);
            let nk = self.f((k + n) as f64);
            a = Self::div(&Self::mul(&a, &t), &Self::mul(&kb, &nk));
            s = Self::add(&s, &a);
            let hk_prev = h.clone();
            h = Self::add(&h, &Self::div(&one, &kb));
            if n == 0 {
                sy = Self::add(&sy, &Self::mul(&h, &a));
            } else if n == 1 {
                // weight H_k + H_{k+1}, with the -2γ folded in below
                let hn = Self::add(&h, &Self::div(&one, &nk));
                let _ = hk_prev;
                sy = Self::add(&sy, &Self::mul(&Self::add(&h, &hn), &a));
            }
            if k as f64 > x && Self::small(&a, &s) {
                break;
            }
        }
        let j = Self::mul(&pref, &s);
        let y = match n {
            0 => {
                let lg = Self::div(&xb, &self.f(2.0)).ln(P, RM, &mut self.cc);
                let inner = Self::sub(&Self::mul(&Self::add(&lg, &self.gamma), &j), &sy);
                Some(Self::div(&Self::mul(&self.f(2.0), &inner), &self.pi))
            }
            1 => {
                // Y1 = -2/(πx) + (2/π) ln(x/2) J1 - (x/2π) Σ (H_k + H_{k+1} - 2γ) t^k/(k!(k+1)!)
                let lg = Self::div(&xb, &self.f(2.0)).ln(P, RM, &mut self.cc);
                let two_g = Self::mul(&self.f(2.0), &self.gamma);
                let corr = Self::sub(&sy, &Self::mul(&two_g, &s));
                let t1 = Self::div(&self.f(-2.0), &Self::mul(&self.pi, &xb));
                let t2 = Self::div(&Self::mul(&Self::mul(&self.f(2.0), &lg), &j), &self.pi);
                let t3 = Self::div(&Self::mul(&xb, &corr), &Self::mul(&self.f(2.0), &self.pi));
                Some(Self::sub(&Self::add(&t1, &t2), &t3))
            }
            _ => None,
        };
        (j, y)
    }

    /// Hankel asymptotic (J_ν, Y_ν) for ν ∈ {0, 1} and large x.
    fn jy_asymptotic(&mut self, nu: u32, x: f64) -> (BigFloat, BigFloat) {
        let xb = self.f(x);
        let mu = self.f(4.0 * (nu * nu) as f64);
        let mut a = self.f(1.0);
        let mut pp = self.f(1.0);
        let mut qq = self.f(0.0);
        let mut prev = f64::INFINITY;
        for k in 1..400u32 {
            let odd = self.f((2 * k - 1) as f64);
            let num = Self::sub(&mu, &Self::mul(&odd, &odd));
            let den = Self::mul(&self.f(8.0 * k as f64), &xb);
            a = Self::div(&Self::mul(&a, &num), &den);
            let mag = self.to_f64(&a).abs();
            if mag > prev || mag < 1e-60 {
                break;
            }
            prev = mag;
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let term = Self::mul(&a, &self.f(sign));
            if k % 2 == 0 {
                pp = Self::add(&pp, &term);
            } else {
                qq = Self::add(&qq, &term);
            }
        }
        let shift = Self::mul(&self.pi, &self.f(0.5 * nu as f64 + 0.25));
        let chi = Self::sub(&xb, &shift);
        let c = chi.cos(P, RM, &mut self.cc);
        let s = chi.sin(P, RM, &mut self.cc);
        let amp = Self::div(&self.f(2.0), &Self::mul(&self.pi, &xb)).sqrt(P, RM);
        let j = Self::mul(&amp, &Self::sub(&Self::mul(&pp, &c), &Self::mul(&qq, &s)));
        let y = Self::mul(&amp, &Self::add(&Self::mul(&pp, &s), &Self::mul(&qq, &c)));
        (j, y)
    }

    fn jy01(&mut self, x: f64) -> [BigFloat; 4] {
        if x <= SWITCH {
            let (j0, y0) = self.jy_series(0, x);
            let (j1, y1) = self.jy_series(1, x);
            [j0, j1, y0.unwrap(), y1.unwrap()]
        } else {
            let (j0, y0) = self.jy_asymptotic(0, x);
            let (j1, y1) = self.jy_asymptotic(1, x);
            [j0, j1, y0, y1]
        }
    }

    /// J_n(x), x > 0.
    pub fn j(&mut self, n: u32, x: f64) -> f64 {
        if x <= SWITCH {
            let (j, _) = self.jy_series(n, x);
            return self.to_f64(&j);
        }
        let [j0, j1, _, _] = self.jy01(x);
        if n == 0 {
            return self.to_f64(&j0);
        }
        // forward recurrence is stable for n < x in extended precision
        assert!((n as f64) < x);
        let xb = self.f(x);
        let (mut a, mut b) = (j0, j1);
        for k in 1..n {
            let c = Self::sub(&Self::div(&Self::mul(&self.f(2.0 * k as f64), &b), &xb), &a);
            a = b;
            b = c;
        }
        self.to_f64(&b)
    }

    /// Y_n(x), x > 0, by forward recurrence from Y_0, Y_1.
    pub fn y(&mut self, n: u32, x: f64) -> f64 {
        let [_, _, y0, y1] = self.jy01(x);
        if n == 0 {
            return self.to_f64(&y0);
        }
        let xb = self.f(x);
        let (mut a, mut b) = (y0, y1);
        for k in 1..n {
            let c = Self::sub(&Self::div(&Self::mul(&self.f(2.0 * k as f64), &b), &xb), &a);
            a = b;
            b = c;
        }
        self.to_f64(&b)
    }

    /// K_ν(x) for ν ∈ {0, 1}, x > 0.
    pub fn k(&mut self, nu: u32, x: f64) -> f64 {
        assert!(nu <= 1);
        let xb = self.f(x);
        if x > SWITCH {
            let mu = self.f(4.0 * (nu * nu) as f64);
            let mut a = self.f(1.0);
            let mut s = self.f(1.0);
            let mut prev = f64::INFINITY;
            for k in 1..400u32 {
                let odd = self.f((2 * k - 1) as f64);
                let num = Self::sub(&mu, &Self::mul(&odd, &odd));
                let den = Self::mul(&self.f(8.0 * k as f64), &xb);
                a = Self::div(&Self::mul(&a, &num), &den);
                let mag = self.to_f64(&a).abs();
                if mag > prev || mag < 1e-60 {
                    break;
                }
                prev = mag;
                s = Self::add(&s, &a);
            }
            let amp = Self::div(&self.pi, &Self::mul(&self.f(2.0), &xb)).sqrt(P, RM);
            let e = xb.neg().exp(P, RM, &mut self.cc);
            return self.to_f64(&Self::mul(&Self::mul(&amp, &e), &s));
        }
        let half = Self::div(&xb, &self.f(2.0));
        let t = Self::mul(&half, &half);
        let lg = half.ln(P, RM, &mut self.cc);
        let one = self.f(1.0);
        let mut a = self.f(1.0);
        let mut i_sum = self.f(1.0);
        let mut w_sum = if nu == 0 { self.f(0.0) } else { self.f(1.0) };
        let mut h = self.f(0.0);
        for k in 1..4000u32 {
            let kb = self.f(k as f64);
            let nk = self.f((k + nu) as f64);
            a = Self::div(&Self::mul(&a, &t), &Self::mul(&kb, &nk));
            i_sum = Self::add(&i_sum, &a);
            h = Self::add(&h, &Self::div(&one, &kb));
            let w = if nu == 0 {
                h.clone()
            } else {
                Self::add(&h, &Self::add(&h, &Self::div(&one, &nk)))
            };
            w_sum = Self::add(&w_sum, &Self::mul(&w, &a));
            if k as f64 > x && Self::small(&a, &i_sum) {
                break;
            }
        }
        let v = if nu == 0 {
            // K0 = -(ln(x/2)+γ) I0 + Σ H_k t^k/(k!)^2
            Self::sub(&w_sum, &Self::mul(&Self::add(&lg, &self.gamma), &i_sum))
        } else {
            // K1 = 1/x + ln(x/2) I1 - (x/4) Σ (H_k + H_{k+1} - 2γ) t^k/(k!(k+1)!)
            let i1 = Self::mul(&half, &i_sum);
            let two_g = Self::mul(&self.f(2.0), &self.gamma);
            let corr = Self::sub(&w_sum, &Self::mul(&two_g, &i_sum));
            let t1 = Self::div(&one, &xb);
            let t2 = Self::mul(&lg, &i1);
            let t3 = Self::div(&Self::mul(&xb, &corr), &self.f(4.0));
            Self::sub(&Self::add(&t1, &t2), &t3)
        };
        self.to_f64(&v)
    }
}

/// 200 logarithmically spaced points in [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
