//! Phaseless measurements of total fields excited by point sources above a
//! rigid grating, the cosine identity recovered from them, and numerical
//! reciprocity checks.

use nalgebra::Vector2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bem2d::{DirichletSolver, IncidentField, ProfileCurve2, ScatterSolution};
use crate::error::{Error, Result};
use crate::green2d_near::QpKernel2D;
use crate::medium::{ElasticMedium, QuasiMomentum};

/// Magnitudes below this count as identically zero.
pub const ZERO_TRACK: f64 = 1e-12;

/// Arc of the ellipse c + (a cos θ, b sin θ) holding the movable sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseArc {
    pub center: [f64; 2],
    pub semi_axes: [f64; 2],
    pub theta: [f64; 2],
    pub count: usize,
}

impl EllipseArc {
    pub fn points(&self) -> Vec<[f64; 2]> {
        let n = self.count;
        (0..n)
            .map(|j| {
                let s = if n > 1 { j as f64 / (n - 1) as f64 } else { 0.0 };
                let t = self.theta[0] + (self.theta[1] - self.theta[0]) * s;
                [
                    self.center[0] + self.semi_axes[0] * t.cos(),
                    self.center[1] + self.semi_axes[1] * t.sin(),
                ]
            })
            .collect()
    }
}

/// Sampling points x₁ on the measurement line x₂ = h.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementGrid {
    pub h: f64,
    pub x_range: [f64; 2],
    pub count: usize,
}

impl MeasurementGrid {
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|j| {
                let s = if n > 1 { j as f64 / (n - 1) as f64 } else { 0.0 };
                self.x_range[0] + (self.x_range[1] - self.x_range[0]) * s
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    /// Fixed source z̃ and its polarization q.
    pub z_fixed: [f64; 2],
    pub q_fixed: [f64; 2],
    pub sigma: EllipseArc,
    /// Polarizations q_l of the movable sources.
    pub q_movable: Vec<[f64; 2]>,
    /// Probe directions p_k.
    pub probes: Vec<[f64; 2]>,
    pub grid: MeasurementGrid,
    /// Nyström nodes per period.
    pub n_bem: usize,
}

fn is_unit(v: &[f64; 2]) -> bool {
    (v[0].hypot(v[1]) - 1.0).abs() <= 1e-12
}

impl SourceConfig {
    pub fn validate(&self, profile: &ProfileCurve2) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        let units = std::iter::once(&self.q_fixed)
            .chain(&self.q_movable)
            .chain(&self.probes);
        if let Some(v) = units.clone().find(|v| !is_unit(v)) {
            return bad(format!("polarization {v:?} is not a unit vector"));
        }
        if self.probes.is_empty() || self.q_movable.is_empty() || self.sigma.count == 0 || self.grid.count == 0 {
            return bad("empty probe, polarization, source or grid set".into());
        }
        for (i, a) in self.probes.iter().enumerate() {
            for b in &self.probes[i + 1..] {
                if (a[0] * b[1] - a[1] * b[0]).abs() < 1e-8 {
                    return bad(format!("probes {a:?} and {b:?} are colinear"));
                }
            }
        }
        let top = profile.max_height();
        let zs = self.sigma.points();
        let lo = zs.iter().map(|z| z[1]).fold(f64::INFINITY, f64::min);
        let hi = zs.iter().map(|z| z[1]).fold(f64::NEG_INFINITY, f64::max);
        if !(top < self.z_fixed[1] && self.z_fixed[1] < lo && hi < self.grid.h) {
            return bad(format!(
                "heights must satisfy max f ({top}) < z̃₂ ({}) < Σ ([{lo}, {hi}]) < h ({})",
                self.z_fixed[1], self.grid.h
            ));
        }
        Ok(())
    }

    pub fn movable(&self) -> Vec<[f64; 2]> {
        self.sigma.points()
    }
}

/// Magnitudes only, indexed r[k][x], s[k][l][j][x], sum[k][l][j][x].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaselessDataset {
    pub omega: f64,
    pub alpha: f64,
    pub h: f64,
    pub x: Vec<f64>,
    pub sources: Vec<[f64; 2]>,
    pub n_bem: usize,
    /// |p_k·u_tot(x, z̃, q)|
    pub r: Vec<Vec<f64>>,
    /// |p_k·u_tot(x, z_j, q_l)|
    pub s: Vec<Vec<Vec<Vec<f64>>>>,
    /// |p_k·(u_tot(x, z̃, q) + u_tot(x, z_j, q_l))|
    pub sum: Vec<Vec<Vec<Vec<f64>>>>,
    /// The Dirichlet-eigenvalue condition on the source curve is not checked.
    pub dirichlet_eigenvalue_condition: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Fixed,
    Movable { j: usize, l: usize },
    Both { j: usize, l: usize },
}

/// Point-source incident field G^α(x − z̃)q, G^α(x − z_j)q_l, or their sum.
pub fn incident_superposition(
    kernel: &QpKernel2D,
    cfg: &SourceConfig,
    x: [f64; 2],
    which: Which,
) -> Result<Vector2<C64>> {
    let one = |z: [f64; 2], q: [f64; 2]| -> Result<Vector2<C64>> {
        let g = kernel.eval([x[0] - z[0], x[1] - z[1]])?;
        Ok(g * Vector2::new(C64::new(q[0], 0.0), C64::new(q[1], 0.0)))
    };
    let zs = cfg.movable();
    let mov = |j: usize, l: usize| -> Result<Vector2<C64>> {
        let z = *zs
            .get(j)
            .ok_or_else(|| Error::InvalidInput(format!("no movable source {j}")))?;
        let q = *cfg
            .q_movable
            .get(l)
            .ok_or_else(|| Error::InvalidInput(format!("no polarization {l}")))?;
        one(z, q)
    };
    match which {
        Which::Fixed => one(cfg.z_fixed, cfg.q_fixed),
        Which::Movable { j, l } => mov(j, l),
        Which::Both { j, l } => Ok(one(cfg.z_fixed, cfg.q_fixed)? + mov(j, l)?),
    }
}

fn total_on_grid(sol: &ScatterSolution, xs: &[f64], h: f64) -> Result<Vec<Vector2<C64>>> {
    xs.iter()
        .map(|&x| sol.eval_total([x, h], false).map(|f| f.value))
        .collect()
}

fn probe(p: &[f64; 2], u: &Vector2<C64>) -> C64 {
    u[0] * p[0] + u[1] * p[1]
}

/// Synthesize the three magnitude arrays for one frequency.
pub fn synth_phaseless(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    profile: &ProfileCurve2,
    cfg: &SourceConfig,
) -> Result<PhaselessDataset> {
    cfg.validate(profile)?;
    let solver = DirichletSolver::new(medium, q, profile, cfg.n_bem)?;
    let xs = cfg.grid.points();
    let h = cfg.grid.h;
    let zs = cfg.movable();
    let fixed = solver.solve(&IncidentField::PointSource {
        z: cfg.z_fixed,
        q: cfg.q_fixed,
    })?;
    let u_fixed = total_on_grid(&fixed, &xs, h)?;

    let jobs: Vec<(usize, usize)> = (0..cfg.q_movable.len())
        .flat_map(|l| (0..zs.len()).map(move |j| (l, j)))
        .collect();
    let fields: Vec<Vec<Vector2<C64>>> = jobs
        .par_iter()
        .map(|&(l, j)| {
            let sol = solver.solve(&IncidentField::PointSource {
                z: zs[j],
                q: cfg.q_movable[l],
            })?;
            total_on_grid(&sol, &xs, h)
        })
        .collect::<Result<_>>()?;

    let nl = cfg.q_movable.len();
    let nj = zs.len();
    let mut r = Vec::with_capacity(cfg.probes.len());
    let mut s = Vec::with_capacity(cfg.probes.len());
    let mut sum = Vec::with_capacity(cfg.probes.len());
    for p in &cfg.probes {
        let a: Vec<C64> = u_fixed.iter().map(|u| probe(p, u)).collect();
        r.push(a.iter().map(|v| v.norm()).collect());
        let mut sk = vec![vec![Vec::new(); nj]; nl];
        let mut tk = vec![vec![Vec::new(); nj]; nl];
        for (idx, &(l, j)) in jobs.iter().enumerate() {
            let b: Vec<C64> = fields[idx].iter().map(|u| probe(p, u)).collect();
            sk[l][j] = b.iter().map(|v| v.norm()).collect();
            tk[l][j] = a.iter().zip(&b).map(|(a, b)| (a + b).norm()).collect();
        }
        s.push(sk);
        sum.push(tk);
    }
    Ok(PhaselessDataset {
        omega: medium.omega,
        alpha: q.alpha[0],
        h,
        x: xs,
        sources: zs,
        n_bem: cfg.n_bem,
        r,
        s,
        sum,
        dirichlet_eigenvalue_condition: "assumed".into(),
    })
}

impl PhaselessDataset {
    /// Re(a·b̄) recovered as (|a+b|² − |a|² − |b|²)/2, indexed [k][l][j][x].
    pub fn re_products(&self) -> Vec<Vec<Vec<Vec<f64>>>> {
        self.sum
            .iter()
            .enumerate()
            .map(|(k, tk)| {
                tk.iter()
                    .enumerate()
                    .map(|(l, tl)| {
                        tl.iter()
                            .enumerate()
                            .map(|(j, t)| {
                                t.iter()
                                    .enumerate()
                                    .map(|(i, c)| 0.5 * (c * c - self.r[k][i].powi(2) - self.s[k][l][j][i].powi(2)))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    fn shape(&self) -> (usize, usize, usize, usize) {
        let k = self.r.len();
        let l = self.s.first().map_or(0, |v| v.len());
        let j = self.s.first().and_then(|v| v.first()).map_or(0, |v| v.len());
        (k, l, j, self.x.len())
    }

    /// Largest violation of |r − s| ≤ |sum| ≤ r + s (slack for rounding).
    pub fn triangle_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, tk) in self.sum.iter().enumerate() {
            for (l, tl) in tk.iter().enumerate() {
                for (j, t) in tl.iter().enumerate() {
                    for (i, c) in t.iter().enumerate() {
                        let (a, b) = (self.r[k][i], self.s[k][l][j][i]);
                        worst = worst.max(c - (a + b)).max((a - b).abs() - c);
                    }
                }
            }
        }
        worst
    }
}

/// Largest difference of the recovered Re-products of two datasets.
pub fn cosine_identity(ds1: &PhaselessDataset, ds2: &PhaselessDataset) -> Result<f64> {
    if ds1.shape() != ds2.shape() {
        return Err(Error::GridMismatch(format!(
            "shapes {:?} and {:?}",
            ds1.shape(),
            ds2.shape()
        )));
    }
    if ds1.x != ds2.x || ds1.h != ds2.h || ds1.sources != ds2.sources {
        return Err(Error::GridMismatch(
            "measurement points or source positions differ".into(),
        ));
    }
    let (a, b) = (ds1.re_products(), ds2.re_products());
    let flat = |v: &Vec<Vec<Vec<Vec<f64>>>>| v.iter().flatten().flatten().flatten().copied().collect::<Vec<f64>>();
    Ok(flat(&a)
        .iter()
        .zip(flat(&b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Largest entrywise difference of all magnitude arrays.
pub fn max_difference(ds1: &PhaselessDataset, ds2: &PhaselessDataset) -> Result<f64> {
    if ds1.shape() != ds2.shape() || ds1.x != ds2.x {
        return Err(Error::GridMismatch(format!(
            "shapes {:?} and {:?}",
            ds1.shape(),
            ds2.shape()
        )));
    }
    let a = ds1
        .r
        .iter()
        .flatten()
        .chain(ds1.s.iter().flatten().flatten().flatten())
        .chain(ds1.sum.iter().flatten().flatten().flatten());
    let b = ds2
        .r
        .iter()
        .flatten()
        .chain(ds2.s.iter().flatten().flatten().flatten())
        .chain(ds2.sum.iter().flatten().flatten().flatten());
    Ok(a.zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Probes k whose fixed-source track vanishes.
    pub r_flags: Vec<usize>,
    /// (k, l, j) tracks of the movable sources that vanish.
    pub s_flags: Vec<[usize; 3]>,
}

/// Flag magnitude tracks that are below ZERO_TRACK on the whole grid.
pub fn nonvanishing_probe(ds: &PhaselessDataset) -> ProbeReport {
    let dead = |t: &[f64]| t.iter().all(|v| *v < ZERO_TRACK);
    let mut rep = ProbeReport::default();
    for (k, t) in ds.r.iter().enumerate() {
        if dead(t) {
            rep.r_flags.push(k);
        }
    }
    for (k, sk) in ds.s.iter().enumerate() {
        for (l, sl) in sk.iter().enumerate() {
            for (j, t) in sl.iter().enumerate() {
                if dead(t) {
                    rep.s_flags.push([k, l, j]);
                }
            }
        }
    }
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReciprocityLevel {
    PointSource,
    Scattered,
    Total,
}

/// One reciprocity sample: p·u^α(x, z, q) against q·u^{−α}(z, x, p).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityPair {
    pub x: [f64; 2],
    pub z: [f64; 2],
    pub p: [f64; 2],
    pub q: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub max_violation: f64,
    /// Largest |p·u| seen, for scale.
    pub max_value: f64,
}

fn dot(p: [f64; 2], u: &Vector2<C64>) -> C64 {
    u[0] * p[0] + u[1] * p[1]
}

/// Compare fields at α and −α with source and receiver exchanged.
pub fn check_reciprocity(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    profile: &ProfileCurve2,
    level: ReciprocityLevel,
    pairs: &[ReciprocityPair],
    n_bem: usize,
) -> Result<ReciprocityReport> {
    let qm = q.negated();
    let (fwd, bwd) = match level {
        ReciprocityLevel::PointSource => (None, None),
        _ => (
            Some(DirichletSolver::new(medium, q, profile, n_bem)?),
            Some(DirichletSolver::new(medium, &qm, profile, n_bem)?),
        ),
    };
    let kp = QpKernel2D::new(medium, q)?;
    let km = QpKernel2D::new(medium, &qm)?;
    let vals: Vec<(C64, C64)> = pairs
        .par_iter()
        .map(|pr| {
            let ps = |k: &QpKernel2D, x: [f64; 2], z: [f64; 2], pol: [f64; 2]| -> Result<Vector2<C64>> {
                Ok(k.eval([x[0] - z[0], x[1] - z[1]])? * Vector2::new(C64::new(pol[0], 0.0), C64::new(pol[1], 0.0)))
            };
            let (a, b) = match (&fwd, &bwd) {
                (Some(f), Some(b)) => {
                    let sa = f.solve(&IncidentField::PointSource { z: pr.z, q: pr.q })?;
                    let sb = b.solve(&IncidentField::PointSource { z: pr.x, q: pr.p })?;
                    let ua = sa.eval_scattered(pr.x, false)?.value;
                    let ub = sb.eval_scattered(pr.z, false)?.value;
                    if level == ReciprocityLevel::Total {
                        (ua + ps(&kp, pr.x, pr.z, pr.q)?, ub + ps(&km, pr.z, pr.x, pr.p)?)
                    } else {
                        (ua, ub)
                    }
                }
                _ => (ps(&kp, pr.x, pr.z, pr.q)?, ps(&km, pr.z, pr.x, pr.p)?),
            };
            Ok((dot(pr.p, &a), dot(pr.q, &b)))
        })
        .collect::<Result<_>>()?;
    Ok(ReciprocityReport {
        max_violation: vals.iter().map(|(a, b)| (a - b).norm()).fold(0.0, f64::max),
        max_value: vals.iter().map(|(a, b)| a.norm().max(b.norm())).fold(0.0, f64::max),
    })
}
