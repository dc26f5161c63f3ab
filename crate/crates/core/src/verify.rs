//! Seeded property suites over all three geometries. Each check records the
//! worst value seen against a fixed tolerance.

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fd::navier_residual;
use crate::green2d::{green2d_eval, green2d_eval_at, Form};
use crate::green3d_biqp::{greenbi_eval, greenbi_eval_at, ode_residual_bi, unified_c_bi};
use crate::green3d_qp::{green3dqp_eval, green3dqp_eval_at, ode_residual, unified_c};
use crate::green_free::{default_lattice_n, lattice_sum_biqp, lattice_sum_qp, max_norm, CMat, BIQP_WEIGHT, QP_WEIGHT};
use crate::medium::{ElasticMedium, Geometry, QuasiMomentum, Truncation};
use crate::specfun::{bessel_j, bessel_y, hankel1, mod_k};

pub const GEOMETRIES: [Geometry; 3] = [Geometry::Qp2d, Geometry::Qp3d, Geometry::Biqp3d];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Quasiperiodicity,
    Reciprocity,
    PdeResidual,
    Oracle,
    OdeJump,
    Specfun,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Quasiperiodicity,
        Suite::Reciprocity,
        Suite::PdeResidual,
        Suite::Oracle,
        Suite::OdeJump,
        Suite::Specfun,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Quasiperiodicity => "quasiperiodicity",
            Suite::Reciprocity => "reciprocity",
            Suite::PdeResidual => "pde_residual",
            Suite::Oracle => "oracle",
            Suite::OdeJump => "ode_jump",
            Suite::Specfun => "specfun",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub worst: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, samples: usize, worst: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            samples,
            worst,
            tol,
            pass: worst <= tol,
        }
    }

    /// Passes when lo ≤ worst-case ratio range ≤ hi.
    fn within(name: impl Into<String>, samples: usize, range: (f64, f64), lo: f64, hi: f64) -> Self {
        let pass = range.0 >= lo && range.1 <= hi;
        let worst = if range.0 < lo { range.0 } else { range.1 };
        Check {
            name: name.into(),
            samples,
            worst,
            tol: if range.0 < lo { lo } else { hi },
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// One random evaluation problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub medium: ElasticMedium,
    pub q: QuasiMomentum,
    pub x: [f64; 3],
    pub y: [f64; 3],
}

/// Green's tensor of any geometry as a dense matrix; 2D points use x[0..2].
pub fn green_any(c: &Case, tr: &Truncation) -> Result<DMatrix<C64>> {
    match c.q.geometry {
        Geometry::Qp2d => {
            let g = green2d_eval(&c.medium, &c.q, &c.x[..2], &c.y[..2], tr)?.value;
            Ok(DMatrix::from_iterator(2, 2, g.iter().copied()))
        }
        Geometry::Qp3d => {
            let g = green3dqp_eval(&c.medium, &c.q, &c.x, &c.y, tr)?.value;
            Ok(DMatrix::from_iterator(3, 3, g.iter().copied()))
        }
        Geometry::Biqp3d => {
            let g = greenbi_eval(&c.medium, &c.q, &c.x, &c.y, tr)?.value;
            Ok(DMatrix::from_iterator(3, 3, g.iter().copied()))
        }
    }
}

fn dmax(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Separation in the non-periodic directions for a random case.
fn gap_range(g: Geometry) -> (f64, f64) {
    match g {
        Geometry::Qp2d => (0.2, 0.9),
        Geometry::Qp3d => (0.2, 0.9),
        Geometry::Biqp3d => (0.4, 0.9),
    }
}

/// Random case with ω in `omega`; draws again on Wood anomalies.
pub fn random_case(rng: &mut ChaCha8Rng, g: Geometry, omega: (f64, f64)) -> Case {
    random_case_gap(rng, g, Band::Omega(omega.0, omega.1), gap_range(g))
}

/// Shear wavenumber or frequency range of a random medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Band {
    Omega(f64, f64),
    Ks(f64, f64),
}

/// As `random_case` with the band and source separation given.
pub fn random_case_gap(rng: &mut ChaCha8Rng, g: Geometry, band: Band, gaps: (f64, f64)) -> Case {
    loop {
        let (lambda, mu, rho) = (
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
        );
        let omega = match band {
            Band::Omega(lo, hi) => rng.gen_range(lo..hi),
            Band::Ks(lo, hi) => rng.gen_range(lo..hi) * (mu / rho as f64).sqrt(),
        };
        let medium = ElasticMedium::new(lambda, mu, rho, omega).unwrap();
        let q = QuasiMomentum::new(g, [rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)]).unwrap();
        let y = [
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
            rng.gen_range(-0.5..0.5),
        ];
        let (lo, hi) = gaps;
        let gap = rng.gen_range(lo..hi);
        let th = rng.gen_range(0.0..2.0 * PI);
        let mut x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), 0.0];
        match g {
            Geometry::Qp2d => {
                x[1] = y[1] + if th < PI { gap } else { -gap };
                x[2] = 0.0;
            }
            Geometry::Qp3d => {
                x[1] = y[1] + gap * th.cos();
                x[2] = y[2] + gap * th.sin();
            }
            Geometry::Biqp3d => x[2] = y[2] + if th < PI { gap } else { -gap },
        }
        let c = Case { medium, q, x, y };
        if green_any(&c, &Truncation::for_geometry(g)).is_ok() {
            return c;
        }
    }
}

fn shifted(c: &Case, axis: usize) -> Case {
    let mut s = *c;
    s.x[axis] += 1.0;
    s
}

pub fn quasiperiodicity(seed: u64, n: usize, geoms: &[Geometry]) -> Result<Vec<Check>> {
    let mut out = vec![];
    for &g in geoms {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tr = Truncation::for_geometry(g);
        let axes: &[usize] = if g == Geometry::Biqp3d { &[0, 1] } else { &[0] };
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let c = random_case(&mut rng, g, (0.5, 5.0));
            let g0 = green_any(&c, &tr)?;
            for &a in axes {
                let g1 = green_any(&shifted(&c, a), &tr)?;
                let ph = C64::from_polar(1.0, c.q.alpha[a]);
                worst = worst.max(dmax(&(g1 - &g0 * ph)) / dmax(&g0));
            }
        }
        out.push(Check::new(
            format!("{}: ‖G(x+e) − e^{{iα}}G(x)‖/‖G‖", g.name()),
            n,
            worst,
            1e-12,
        ));
    }
    Ok(out)
}

pub fn reciprocity(seed: u64, n: usize, geoms: &[Geometry]) -> Result<Vec<Check>> {
    let mut out = vec![];
    for &g in geoms {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let tr = Truncation::for_geometry(g);
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let c = random_case(&mut rng, g, (0.5, 5.0));
            let swapped = Case {
                q: c.q.negated(),
                x: c.y,
                y: c.x,
                ..c
            };
            let a = green_any(&c, &tr)?;
            let b = green_any(&swapped, &tr)?;
            worst = worst.max(dmax(&(a - b.transpose())));
        }
        out.push(Check::new(
            format!("{}: max |G^α(x,y) − G^{{−α}}(y,x)ᵀ|", g.name()),
            n,
            worst,
            1e-12,
        ));
    }
    Ok(out)
}

fn residual_at<const D: usize>(c: &Case, tr: &Truncation, h: f64) -> Result<(f64, f64)> {
    let wn = c.medium.wavenumbers();
    let f = |p: [f64; D]| -> Result<CMat<D>> {
        let mut x = [0.0; 3];
        x[..D].copy_from_slice(&p);
        let g = green_any(&Case { x, ..*c }, tr)?;
        Ok(CMat::<D>::from_iterator(g.iter().copied()))
    };
    let mut x = [0.0; D];
    x.copy_from_slice(&c.x[..D]);
    navier_residual(&wn, &f, x, h)
}

/// Fourth-order FD residual of (Δ* + ρω²)G at h = 2e−2 and 1e−2.
pub fn pde_residual(seed: u64, n: usize, geoms: &[Geometry]) -> Result<Vec<Check>> {
    let mut out = vec![];
    for &g in geoms {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
        let tr = Truncation::for_geometry(g);
        let mut worst: f64 = 0.0;
        let mut ratios = (f64::INFINITY, 0.0f64);
        for _ in 0..n {
            // the stencil error is about (h k)⁴/30 relative, so k_s stays below 4
            let c = random_case_gap(&mut rng, g, Band::Ks(1.5, 4.0), (0.8, 1.5));
            let run = |h| match g {
                Geometry::Qp2d => residual_at::<2>(&c, &tr, h),
                _ => residual_at::<3>(&c, &tr, h),
            };
            let (r1, _) = run(2e-2)?;
            let (r2, scale) = run(1e-2)?;
            worst = worst.max(r2 / scale);
            let ratio = r1 / r2;
            ratios = (ratios.0.min(ratio), ratios.1.max(ratio));
        }
        out.push(Check::new(
            format!("{}: relative residual at h = 1e-2", g.name()),
            n,
            worst,
            1e-6,
        ));
        out.push(Check::within(
            format!("{}: residual ratio h = 2e-2 vs 1e-2", g.name()),
            n,
            ratios,
            12.0,
            20.0,
        ));
    }
    Ok(out)
}

/// Spectral series against the phased lattice sum at ω(1 + 0.1i).
pub fn oracle(seed: u64, n: usize, geoms: &[Geometry]) -> Result<Vec<Check>> {
    let mut out = vec![];
    for &g in geoms {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let c = random_case(&mut rng, g, (1.0, 4.0));
            let wn = c.medium.complexified(0.1);
            let nl = default_lattice_n(&wn);
            let (s, l) = match g {
                Geometry::Qp2d => {
                    let (x, y) = ([c.x[0], c.x[1]], [c.y[0], c.y[1]]);
                    let s = green2d_eval_at(&wn, c.q.alpha[0], x, y, 1e-14)?.value;
                    let l = lattice_sum_qp::<2>(&wn, c.q.alpha[0], x, y, 0.0, nl)?.value;
                    (max_norm(&(s - l)), max_norm(&l))
                }
                Geometry::Qp3d => {
                    let s = green3dqp_eval_at(&wn, c.q.alpha[0], c.x, c.y, 1e-14)?.value;
                    let l = lattice_sum_qp::<3>(&wn, c.q.alpha[0], c.x, c.y, 0.0, nl)?.value;
                    (max_norm(&(s - l)), max_norm(&l))
                }
                Geometry::Biqp3d => {
                    let s = greenbi_eval_at(&wn, c.q.alpha, c.x, c.y, 1e-14)?.value;
                    let l = lattice_sum_biqp(&wn, c.q.alpha, c.x, c.y, 0.0, nl)?.value;
                    (max_norm(&(s - l)), max_norm(&l))
                }
            };
            worst = worst.max(s / l);
        }
        out.push(Check::new(
            format!("{}: spectral vs lattice sum at ω(1+0.1i)", g.name()),
            n,
            worst,
            1e-4,
        ));
    }
    Ok(out)
}

struct Rule(Vec<(f64, f64)>);

impl Rule {
    fn new(order: usize) -> Self {
        Rule(
            GaussLegendre::new(order.try_into().unwrap())
                .as_node_weight_pairs()
                .to_vec(),
        )
    }

    fn panel<F: FnMut(f64) -> Matrix3<C64>>(&self, a: f64, b: f64, f: &mut F) -> Matrix3<C64> {
        let (c, w) = (0.5 * (a + b), 0.5 * (b - a));
        self.0.iter().map(|&(x, wt)| f(c + w * x) * C64::new(w * wt, 0.0)).sum()
    }
}

/// ∫∫ (L*φ) c_l dx₂dx₃ for a Gaussian φ of width s; equals I/(2π).
pub fn weak_source_qp(medium: &ElasticMedium, alpha_l: f64, s: f64) -> Result<Matrix3<C64>> {
    let wn = medium.wavenumbers();
    let (mu, lm, rw) = (medium.mu, medium.lambda + medium.mu, medium.rho_omega2());
    let a = alpha_l;
    let rule = Rule::new(16);
    let nth = 64;
    let mut err = None;
    let mut radial = |r: f64| -> Matrix3<C64> {
        let mut acc = Matrix3::<C64>::zeros();
        for k in 0..nth {
            let th = 2.0 * PI * k as f64 / nth as f64;
            let x = [r * th.cos(), r * th.sin()];
            let phi = (-0.5 * r * r / (s * s)).exp();
            let d1 = [-x[0] / (s * s) * phi, -x[1] / (s * s) * phi];
            let d2 = |i: usize, j: usize| (x[i] * x[j] / s.powi(4) - if i == j { 1.0 / (s * s) } else { 0.0 }) * phi;
            let lap = d2(0, 0) + d2(1, 1);
            let mut m = Matrix3::<C64>::zeros();
            m[(0, 0)] = C64::new(-a * a * phi, 0.0);
            for j in 0..2 {
                m[(0, j + 1)] = C64::new(0.0, -a * d1[j]);
                m[(j + 1, 0)] = m[(0, j + 1)];
                for i in 0..2 {
                    m[(i + 1, j + 1)] = C64::new(d2(i, j), 0.0);
                }
            }
            let op = m * C64::new(lm, 0.0) + Matrix3::identity() * C64::new(mu * (lap - a * a * phi) + rw * phi, 0.0);
            match unified_c(&wn, a, x[0], x[1]) {
                Ok(c) => acc += op * c,
                Err(e) => err = Some(e),
            }
        }
        acc * C64::new(2.0 * PI * r / nth as f64, 0.0)
    };
    let mut total = Matrix3::<C64>::zeros();
    // geometric panels resolve the logarithm at the origin
    let mut hi = s;
    for _ in 0..40 {
        total += rule.panel(0.5 * hi, hi, &mut radial);
        hi *= 0.5;
    }
    let r_max = 9.0 * s;
    for p in 0..16 {
        let a0 = s + (r_max - s) * p as f64 / 16.0;
        let b0 = s + (r_max - s) * (p + 1) as f64 / 16.0;
        total += rule.panel(a0, b0, &mut radial);
    }
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// ∫ (L*φ) c_l dx₃ for a Gaussian φ of width s; equals I/(4π²).
pub fn weak_source_bi(medium: &ElasticMedium, a: [f64; 2], s: f64) -> Matrix3<C64> {
    let wn = medium.wavenumbers();
    let (mu, lm, rw) = (medium.mu, medium.lambda + medium.mu, medium.rho_omega2());
    let a2 = a[0] * a[0] + a[1] * a[1];
    let rule = Rule::new(16);
    let mut f = |t: f64| -> Matrix3<C64> {
        let phi = (-0.5 * t * t / (s * s)).exp();
        let d1 = -t / (s * s) * phi;
        let d2 = (t * t / s.powi(4) - 1.0 / (s * s)) * phi;
        let mut m = Matrix3::<C64>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = C64::new(-a[i] * a[j] * phi, 0.0);
            }
            m[(i, 2)] = C64::new(0.0, -a[i] * d1);
            m[(2, i)] = m[(i, 2)];
        }
        m[(2, 2)] = C64::new(d2, 0.0);
        let op = m * C64::new(lm, 0.0) + Matrix3::identity() * C64::new(mu * (d2 - a2 * phi) + rw * phi, 0.0);
        op * unified_c_bi(&wn, a, t)
    };
    let t_max = 9.0 * s;
    let mut total = Matrix3::<C64>::zeros();
    for p in 0..16 {
        let lo = t_max * p as f64 / 16.0;
        let hi = t_max * (p + 1) as f64 / 16.0;
        total += rule.panel(lo, hi, &mut f) + rule.panel(-hi, -lo, &mut f);
    }
    total
}

/// Mode ODE residuals off the source and the weak-form source strengths.
pub fn ode_jump() -> Result<Vec<Check>> {
    let medium = ElasticMedium::new(2.0, 1.0, 1.0, 3.0)?;
    let h = 2.5e-3;
    let q3 = QuasiMomentum::qp3d(0.4);
    let qb = QuasiMomentum::biqp3d(0.4, -0.7);
    let mut res_qp: f64 = 0.0;
    let mut res_bi: f64 = 0.0;
    let mut count = (0, 0);
    for m in -1..=1 {
        for (x2, x3) in [(0.5, 0.3), (-0.2, 0.7), (0.9, -0.4)] {
            for form in [Form::Unified, Form::Literal] {
                res_qp = res_qp.max(ode_residual(&medium, &q3, m, x2, x3, h, form)?);
                count.0 += 1;
            }
        }
    }
    for m in [[0, 0], [1, 0], [-1, 1]] {
        for x3 in [0.3, -0.6, 1.1] {
            for form in [Form::Unified, Form::Literal] {
                res_bi = res_bi.max(ode_residual_bi(&medium, &qb, m, x3, h, form)?);
                count.1 += 1;
            }
        }
    }
    let mut jump_qp: f64 = 0.0;
    for m in -1..=1 {
        let w = weak_source_qp(&medium, q3.alpha_l([m, 0])[0], 0.3)?;
        let want = Matrix3::<C64>::identity() * C64::new(-QP_WEIGHT, 0.0);
        jump_qp = jump_qp.max(max_norm(&(w - want)) / QP_WEIGHT.abs());
    }
    let mut jump_bi: f64 = 0.0;
    for m in [[0, 0], [1, 0], [-1, 1]] {
        let w = weak_source_bi(&medium, qb.alpha_l(m), 0.3);
        let want = Matrix3::<C64>::identity() * C64::new(-BIQP_WEIGHT, 0.0);
        jump_bi = jump_bi.max(max_norm(&(w - want)) / BIQP_WEIGHT.abs());
    }
    Ok(vec![
        Check::new("qp3d: mode ODE residual", count.0, res_qp, 1e-6),
        Check::new("biqp3d: mode ODE residual", count.1, res_bi, 1e-6),
        Check::new("qp3d: source strength 1/(2π), relative", 3, jump_qp, 1e-6),
        Check::new("biqp3d: source strength 1/(4π²), relative", 3, jump_bi, 1e-6),
    ])
}

/// J₀, J₁, Y₀, Y₁, K₀, K₁ from a 200-bit evaluation.
const SPECFUN_TABLE: [(f64, [f64; 6]); 5] = [
    (
        0.5,
        [
            9.38469807240812859e-1,
            2.42268457674873899e-1,
            -4.44518733506706565e-1,
            -1.47147239267024310e0,
            9.24419071227665867e-1,
            1.65644112000330090e0,
        ],
    ),
    (
        2.0,
        [
            2.23890779141235674e-1,
            5.76724807756873403e-1,
            5.10375672649745149e-1,
            -1.07032431540937542e-1,
            1.13893872749533442e-1,
            1.39865881816522430e-1,
        ],
    ),
    (
        7.5,
        [
            2.66339657880378389e-1,
            1.35248427579705510e-1,
            1.17313286148208629e-1,
            -2.59128510486116237e-1,
            2.49177616356114370e-4,
            2.65297390125289500e-4,
        ],
    ),
    (
        30.0,
        [
            -8.63679835810402113e-2,
            -1.18751062616622938e-1,
            -1.17295731686664031e-1,
            8.44255706617472318e-2,
            2.13247749646305625e-14,
            2.16773200189154947e-14,
        ],
    ),
    (
        120.0,
        [
            7.18234158291561342e-2,
            -1.18052114330018908e-2,
            -1.21043654100162022e-2,
            -7.18744732091495392e-2,
            8.76356809982557774e-54,
            8.80000752009276128e-54,
        ],
    ),
];

/// Reference table, Wronskians and recurrences over a log grid.
pub fn specfun() -> Result<Vec<Check>> {
    let mut table: f64 = 0.0;
    for (x, want) in SPECFUN_TABLE {
        let got = [
            bessel_j(0, x),
            bessel_j(1, x),
            bessel_y(0, x)?,
            bessel_y(1, x)?,
            mod_k(0, x)?,
            mod_k(1, x)?,
        ];
        for (g, w) in got.iter().zip(want) {
            table = table.max((g - w).abs() / w.abs());
        }
    }
    let n = 200;
    let grid: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(-3.0 + 5.5 * i as f64 / (n - 1) as f64))
        .collect();
    let mut wr: f64 = 0.0;
    let mut rec: f64 = 0.0;
    for &x in &grid {
        let h0 = hankel1(0, x)?;
        let h1 = hankel1(1, x)?;
        let h2 = hankel1(2, x)?;
        // J₁Y₀ − J₀Y₁ = 2/(πx)
        let w = h1.re * h0.im - h0.re * h1.im;
        wr = wr.max((w * PI * x / 2.0 - 1.0).abs());
        let r = h2 - h1 * (2.0 / x) + h0;
        rec = rec.max(r.norm() / h2.norm());
        let (k0, k1) = (mod_k(0, x)?, mod_k(1, x)?);
        let k2 = mod_k(2, x)?;
        rec = rec.max((k2 - k0 - 2.0 / x * k1).abs() / k2);
    }
    Ok(vec![
        Check::new("J, Y, K against reference table, relative", 30, table, 1e-12),
        Check::new("Wronskian J₁Y₀ − J₀Y₁ = 2/(πx), relative", n, wr, 1e-10),
        Check::new("three-term recurrences, relative", 2 * n, rec, 1e-12),
    ])
}

pub const DEFAULT_SEED: u64 = 7;

/// Sample counts used by the suites: quasi-periodicity and reciprocity use
/// 100 cases per geometry, the FD residual 20 and the oracle 10.
pub fn run_suite(suite: Suite, seed: u64, geoms: &[Geometry]) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Quasiperiodicity => quasiperiodicity(seed, 100, geoms)?,
        Suite::Reciprocity => reciprocity(seed, 100, geoms)?,
        Suite::PdeResidual => pde_residual(seed, 20, geoms)?,
        Suite::Oracle => oracle(seed, 10, geoms)?,
        Suite::OdeJump => ode_jump()?,
        Suite::Specfun => specfun()?,
    };
    Ok(SuiteReport { suite, seed, checks })
}
