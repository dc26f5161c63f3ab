//! Rigid periodic grating in 2D: a quasi-periodic single-layer potential
//! solved by Nyström collocation with logarithmic product quadrature.
//!
//! The boundary is parametrized by t ∈ [0, 2π), y(t) = (t/2π, f(t/2π)).
//! The log-singular part of the kernel comes from the nearest free-space
//! copy and is cut off by a smooth window, so the remaining kernel is
//! 2π-periodic and smooth in both variables.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::green2d_near::QpKernel2D;
use crate::green_free::{CMat, QP_WEIGHT};
use crate::medium::{ElasticMedium, QuasiMomentum};
use crate::rayleigh::{extract_coeffs_2d, flux_2d, traction, RayleighCoeffs2};
use crate::specfun::{bessel_j, EULER_GAMMA};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Solves are rejected above this 1-norm condition estimate.
pub const MAX_CONDITION: f64 = 1e12;

/// f(x) = a0 + Σ_k cos[k-1]·cos(2πkx) + sin[k-1]·sin(2πkx).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve2 {
    #[serde(default)]
    pub a0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl ProfileCurve2 {
    pub fn flat(level: f64) -> Self {
        ProfileCurve2 {
            a0: level,
            ..Default::default()
        }
    }

    /// amplitude·sin(2π·degree·x)
    pub fn sinusoid(amplitude: f64, degree: usize) -> Self {
        let mut sin = vec![0.0; degree];
        sin[degree - 1] = amplitude;
        ProfileCurve2 {
            a0: 0.0,
            cos: Vec::new(),
            sin,
        }
    }

    pub fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    pub fn validate(&self) -> Result<()> {
        let ok = std::iter::once(&self.a0)
            .chain(&self.cos)
            .chain(&self.sin)
            .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("profile has non-finite coefficients".into()))
        }
    }

    /// (f, f', f'') at x.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let (mut f, mut f1, mut f2) = (self.a0, 0.0, 0.0);
        for k in 1..=self.degree() {
            let w = 2.0 * PI * k as f64;
            let c = self.cos.get(k - 1).copied().unwrap_or(0.0);
            let s = self.sin.get(k - 1).copied().unwrap_or(0.0);
            let (sn, cs) = (w * x).sin_cos();
            f += c * cs + s * sn;
            f1 += w * (s * cs - c * sn);
            f2 -= w * w * (c * cs + s * sn);
        }
        (f, f1, f2)
    }

    /// Upper bound of f over a period.
    pub fn max_height(&self) -> f64 {
        self.a0 + self.cos.iter().chain(&self.sin).map(|v| v.abs()).sum::<f64>()
    }
}

/// Incoming field. Plane-wave angles are measured from the downward
/// vertical, so the wave travels along (sin θ, −cos θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IncidentField {
    PlaneP { angle: f64 },
    PlaneS { angle: f64 },
    PointSource { z: [f64; 2], q: [f64; 2] },
}

impl IncidentField {
    /// Quasi-momentum matching a plane wave (None for a point source).
    pub fn alpha(&self, medium: &ElasticMedium) -> Option<f64> {
        match *self {
            IncidentField::PlaneP { angle } => Some(medium.kp() * angle.sin()),
            IncidentField::PlaneS { angle } => Some(medium.ks() * angle.sin()),
            IncidentField::PointSource { .. } => None,
        }
    }

    fn check(&self, medium: &ElasticMedium, q: &QuasiMomentum) -> Result<()> {
        match *self {
            IncidentField::PlaneP { angle } | IncidentField::PlaneS { angle } => {
                if !(angle.abs() < 0.5 * PI) {
                    return Err(Error::InvalidInput(format!(
                        "plane-wave angle {angle} must lie in (-π/2, π/2)"
                    )));
                }
                let a = self.alpha(medium).unwrap();
                if (a - q.alpha[0]).abs() > 1e-12 * medium.ks().max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "incident wave has α = {a}, quasi-momentum is {}",
                        q.alpha[0]
                    )));
                }
            }
            IncidentField::PointSource { z, q: pol } => {
                if !(z.iter().chain(&pol).all(|v| v.is_finite())) {
                    return Err(Error::InvalidInput("non-finite point source".into()));
                }
            }
        }
        Ok(())
    }

    /// Value and gradient, grad[(i, j)] = ∂_j u_i.
    pub fn jet(
        &self,
        medium: &ElasticMedium,
        kernel: &QpKernel2D,
        x: [f64; 2],
    ) -> Result<(Vector2<C64>, Matrix2<C64>)> {
        let plane = |k: f64, angle: f64, pol: [f64; 2]| {
            let kv = [k * angle.sin(), -k * angle.cos()];
            let e = C64::from_polar(1.0, kv[0] * x[0] + kv[1] * x[1]);
            let u = Vector2::new(e * pol[0], e * pol[1]);
            let g = Matrix2::from_fn(|i, j| I * kv[j] * u[i]);
            (u, g)
        };
        Ok(match *self {
            IncidentField::PlaneP { angle } => plane(medium.kp(), angle, [angle.sin(), -angle.cos()]),
            IncidentField::PlaneS { angle } => plane(medium.ks(), angle, [angle.cos(), angle.sin()]),
            IncidentField::PointSource { z, q } => {
                let (g, dg) = kernel.jet([x[0] - z[0], x[1] - z[1]], true)?;
                let qv = Vector2::new(C64::new(q[0], 0.0), C64::new(q[1], 0.0));
                let u = g * qv;
                let d0 = dg[0] * qv;
                let d1 = dg[1] * qv;
                (u, Matrix2::new(d0[0], d1[0], d0[1], d1[1]))
            }
        })
    }
}

/// Boundary point at parameter t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub t: f64,
    pub y: [f64; 2],
    /// |y'(t)|
    pub speed: f64,
    pub tangent: [f64; 2],
    /// Upward unit normal.
    pub normal: [f64; 2],
}

fn node_at(p: &ProfileCurve2, t: f64) -> Node {
    let x = t / (2.0 * PI);
    let (f, fp, _) = p.eval(x);
    let s = (1.0 + fp * fp).sqrt();
    let tangent = [1.0 / s, fp / s];
    Node {
        t,
        y: [x, f],
        speed: s / (2.0 * PI),
        tangent,
        normal: [-tangent[1], tangent[0]],
    }
}

/// Scalar weight of the log quadrature: ∫ ln(4 sin²((s−t)/2)) φ(t) dt ≈ Σ R(s − t_j) φ(t_j).
pub fn kress_weight(n: usize, diff: f64) -> f64 {
    let mut acc = 0.0;
    for m in 1..n / 2 {
        acc += (m as f64 * diff).cos() / m as f64;
    }
    let nf = n as f64;
    -4.0 * PI / nf * acc - 4.0 * PI / (nf * nf) * (0.5 * nf * diff).cos()
}

/// Smooth cutoff, 1 to order 10 at u = 0 and 0 to order 10 at u = 1.
fn window(u: f64) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..10 {
        acc += binom * u.powi(j) * (1.0 - u).powi(19 - j);
        binom = binom * (19 - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// J₁(x)/x and J₂(x)/x².
fn bessel_ratios(x: f64) -> (f64, f64) {
    if x < 1e-4 {
        let x2 = x * x;
        (0.5 - x2 / 16.0, 0.125 - x2 / 96.0)
    } else {
        (bessel_j(1, x) / x, bessel_j(2, x) / (x * x))
    }
}

struct Assembler<'a> {
    medium: ElasticMedium,
    kernel: &'a QpKernel2D,
    nodes: &'a [Node],
    reg0: CMat<2>,
}

impl Assembler<'_> {
    /// Coefficient of ln|d|² in the free-space tensor.
    fn log_coeff(&self, d: [f64; 2]) -> CMat<2> {
        let m = &self.medium;
        let r = d[0].hypot(d[1]);
        let hess = |k: f64| {
            let (a, b) = bessel_ratios(k * r);
            let k2 = k * k;
            Matrix2::new(
                -k2 * a + k2 * k2 * b * d[0] * d[0],
                k2 * k2 * b * d[0] * d[1],
                k2 * k2 * b * d[0] * d[1],
                -k2 * a + k2 * k2 * b * d[1] * d[1],
            )
        };
        let (ks, kp) = (m.ks(), m.kp());
        let h = (hess(ks) - hess(kp)) / m.rho_omega2();
        let c = Matrix2::identity() * (bessel_j(0, ks * r) / m.mu) + h;
        c.map(|v| C64::new(-v / (4.0 * PI), 0.0))
    }

    /// Limit of (free-space tensor − log_coeff·ln|d|²) as d → 0 along τ.
    fn diagonal_limit(&self, tau: [f64; 2]) -> CMat<2> {
        let m = &self.medium;
        let (ks, kp) = (m.ks(), m.kp());
        let c = |k: f64| C64::new(-((0.5 * k).ln() + EULER_GAMMA) / (2.0 * PI), 0.25);
        let (cs, cp) = (c(ks), c(kp));
        let inv = 1.0 / (2.0 * PI);
        let iso = -0.5 * ((cs + inv) * ks * ks - (cp + inv) * kp * kp);
        let dd = (ks * ks - kp * kp) / (4.0 * PI);
        let tt = Matrix2::new(tau[0] * tau[0], tau[0] * tau[1], tau[0] * tau[1], tau[1] * tau[1]);
        let aniso = (tt + Matrix2::identity() * 0.5) * dd;
        let rw = m.rho_omega2();
        CMat::<2>::identity() * (cs / m.mu + iso / rw) + aniso.map(|v| C64::new(v / rw, 0.0))
    }

    /// (K1, K2) for a boundary point s and node j with s ≠ t_j (mod 2π).
    fn split(&self, s: &Node, j: usize) -> Result<(CMat<2>, CMat<2>)> {
        let tn = &self.nodes[j];
        let d = [s.y[0] - tn.y[0], s.y[1] - tn.y[1]];
        let fac = C64::from_polar(tn.speed, self.kernel.alpha() * tn.y[0]);
        let k = self.kernel.eval(d)? * fac;
        let n0 = d[0].round();
        let half = (0.5 * (s.t - tn.t)).sin();
        let w = window(half * half);
        let k1 = if w == 0.0 {
            CMat::<2>::zeros()
        } else {
            let ph = C64::from_polar(w * QP_WEIGHT, self.kernel.alpha() * n0);
            self.log_coeff([d[0] - n0, d[1]]) * (ph * fac)
        };
        let lg = (4.0 * half * half).ln();
        Ok((k1, k - k1 * C64::new(lg, 0.0)))
    }

    fn diagonal(&self, j: usize) -> (CMat<2>, CMat<2>) {
        let tn = &self.nodes[j];
        let fac = C64::from_polar(tn.speed, self.kernel.alpha() * tn.y[0]);
        let a0 = self.log_coeff([0.0, 0.0]);
        let w = C64::new(QP_WEIGHT, 0.0);
        let lim = self.diagonal_limit(tn.tangent) + a0 * C64::new((tn.speed * tn.speed).ln(), 0.0);
        (a0 * (w * fac), (lim * w + self.reg0) * fac)
    }

    /// Row of 2×2 blocks: the single-layer operator at s applied to node values.
    fn row(&self, s: &Node, on_node: Option<usize>) -> Result<Vec<CMat<2>>> {
        let n = self.nodes.len();
        let h = C64::new(2.0 * PI / n as f64, 0.0);
        (0..n)
            .map(|j| {
                let (k1, k2) = if on_node == Some(j) {
                    self.diagonal(j)
                } else {
                    self.split(s, j)?
                };
                let r = kress_weight(n, s.t - self.nodes[j].t);
                Ok(k1 * C64::new(r, 0.0) + k2 * h)
            })
            .collect()
    }
}

/// Field value and optional gradient, grad[(i, j)] = ∂_j u_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldJet {
    pub value: Vector2<C64>,
    pub grad: Option<Matrix2<C64>>,
}

/// Solved single-layer density; immutable once built.
#[derive(Clone)]
pub struct ScatterSolution {
    pub medium: ElasticMedium,
    pub q: QuasiMomentum,
    pub profile: ProfileCurve2,
    pub incident: IncidentField,
    pub n: usize,
    pub nodes: Vec<Node>,
    pub density: Vec<Vector2<C64>>,
    /// 1-norm condition estimate of the collocation matrix.
    pub condition: f64,
    kernel: Arc<QpKernel2D>,
}

impl std::fmt::Debug for ScatterSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScatterSolution")
            .field("n", &self.n)
            .field("incident", &self.incident)
            .field("condition", &self.condition)
            .finish_non_exhaustive()
    }
}

/// ‖A⁻¹‖₁ lower bound by Hager's method with Higham's extra test vector.
fn inverse_norm1(lu: &nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>) -> f64 {
    let n = lu.l().nrows();
    let l = lu.l();
    let u = lu.u();
    let solve = |b: &DVector<C64>| {
        lu.solve(b)
            .unwrap_or_else(|| DVector::from_element(n, C64::new(f64::INFINITY, 0.0)))
    };
    let solve_adj = |b: &DVector<C64>| {
        let mut x = u.ad_solve_upper_triangular(b).unwrap_or_else(|| b.clone());
        x = l.ad_solve_lower_triangular(&x).unwrap_or(x);
        lu.p().inv_permute_rows(&mut x);
        x
    };
    let norm1 = |v: &DVector<C64>| v.iter().map(|z| z.norm()).sum::<f64>();
    let mut x = DVector::from_element(n, C64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0;
    for _ in 0..5 {
        let y = solve(&x);
        est = norm1(&y);
        let xi = y.map(|z| {
            if z.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                z / z.norm()
            }
        });
        let z = solve_adj(&xi);
        let (jmax, zmax) = z.iter().enumerate().fold(
            (0, 0.0),
            |acc, (j, v)| if v.norm() > acc.1 { (j, v.norm()) } else { acc },
        );
        let zx: C64 = z.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
        if zmax <= zx.re {
            break;
        }
        x = DVector::zeros(n);
        x[jmax] = C64::new(1.0, 0.0);
    }
    let alt = DVector::from_fn(n, |i, _| {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        C64::new(s * (1.0 + i as f64 / (n.max(2) - 1) as f64), 0.0)
    });
    est.max(2.0 * norm1(&solve(&alt)) / (3.0 * n as f64))
}

/// Factored collocation matrix for one grating, medium and quasi-momentum.
pub struct DirichletSolver {
    pub medium: ElasticMedium,
    pub q: QuasiMomentum,
    pub profile: ProfileCurve2,
    pub n: usize,
    pub nodes: Vec<Node>,
    /// 1-norm condition estimate of the collocation matrix.
    pub condition: f64,
    kernel: Arc<QpKernel2D>,
    lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl DirichletSolver {
    pub fn new(medium: &ElasticMedium, q: &QuasiMomentum, profile: &ProfileCurve2, n: usize) -> Result<Self> {
        if n < 32 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!("N = {n} must be a power of two ≥ 32")));
        }
        profile.validate()?;
        let kernel = Arc::new(QpKernel2D::new(medium, q)?);
        let nodes: Vec<Node> = (0..n)
            .map(|j| node_at(profile, 2.0 * PI * j as f64 / n as f64))
            .collect();
        let asm = Assembler {
            medium: *medium,
            kernel: &kernel,
            nodes: &nodes,
            reg0: kernel.regular_at_origin()?,
        };
        let rows: Vec<Vec<CMat<2>>> = (0..n)
            .into_par_iter()
            .map(|i| asm.row(&nodes[i], Some(i)))
            .collect::<Result<_>>()?;
        let mut a = DMatrix::<C64>::zeros(2 * n, 2 * n);
        for (i, row) in rows.iter().enumerate() {
            for (j, blk) in row.iter().enumerate() {
                a.view_mut((2 * i, 2 * j), (2, 2)).copy_from(blk);
            }
        }
        let norm_a = (0..2 * n)
            .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let lu = a.lu();
        let condition = norm_a * inverse_norm1(&lu);
        if !(condition <= MAX_CONDITION) {
            return Err(Error::ResonanceSuspected(condition));
        }
        Ok(DirichletSolver {
            medium: *medium,
            q: *q,
            profile: profile.clone(),
            n,
            nodes,
            condition,
            kernel,
            lu,
        })
    }

    pub fn kernel(&self) -> &QpKernel2D {
        &self.kernel
    }

    pub fn solve(&self, incident: &IncidentField) -> Result<ScatterSolution> {
        incident.check(&self.medium, &self.q)?;
        let n = self.n;
        let mut b = DVector::<C64>::zeros(2 * n);
        for (i, nd) in self.nodes.iter().enumerate() {
            let (u, _) = incident.jet(&self.medium, &self.kernel, nd.y)?;
            b[2 * i] = -u[0];
            b[2 * i + 1] = -u[1];
        }
        let phi = self.lu.solve(&b).ok_or(Error::ResonanceSuspected(f64::INFINITY))?;
        let density = (0..n).map(|j| Vector2::new(phi[2 * j], phi[2 * j + 1])).collect();
        Ok(ScatterSolution {
            medium: self.medium,
            q: self.q,
            profile: self.profile.clone(),
            incident: *incident,
            n,
            nodes: self.nodes.clone(),
            density,
            condition: self.condition,
            kernel: Arc::clone(&self.kernel),
        })
    }
}

/// Solve u_sc = −u_inc on the grating with N Nyström nodes.
pub fn solve_dirichlet(
    medium: &ElasticMedium,
    q: &QuasiMomentum,
    profile: &ProfileCurve2,
    incident: &IncidentField,
    n: usize,
) -> Result<ScatterSolution> {
    incident.check(medium, q)?;
    DirichletSolver::new(medium, q, profile, n)?.solve(incident)
}

impl ScatterSolution {
    pub fn kernel(&self) -> &QpKernel2D {
        &self.kernel
    }

    /// Total arc length of one period.
    pub fn arc_length(&self) -> f64 {
        self.nodes.iter().map(|nd| nd.speed).sum::<f64>() * 2.0 * PI / self.n as f64
    }

    /// Distance from x to the nearest node (periodic in x₁).
    pub fn node_distance(&self, x: [f64; 2]) -> f64 {
        let xr = x[0] - x[0].floor();
        let mut best = f64::INFINITY;
        for nd in &self.nodes {
            for s in [-1.0, 0.0, 1.0] {
                best = best.min((xr - nd.y[0] - s).hypot(x[1] - nd.y[1]));
            }
        }
        best
    }

    pub fn incident_jet(&self, x: [f64; 2]) -> Result<(Vector2<C64>, Matrix2<C64>)> {
        self.incident.jet(&self.medium, &self.kernel, x)
    }

    /// Trapezoid quadrature of the single layer at a point away from Γ.
    pub fn eval_scattered(&self, x: [f64; 2], need_gradient: bool) -> Result<FieldJet> {
        let dist = self.node_distance(x);
        let min = 10.0 * self.arc_length() / self.n as f64;
        if dist < min {
            return Err(Error::TooCloseToBoundary { dist, min });
        }
        let h = 2.0 * PI / self.n as f64;
        let mut value = Vector2::<C64>::zeros();
        let mut grad = Matrix2::<C64>::zeros();
        for (nd, phi) in self.nodes.iter().zip(&self.density) {
            let (g, dg) = self.kernel.jet([x[0] - nd.y[0], x[1] - nd.y[1]], need_gradient)?;
            let w = phi * C64::from_polar(h * nd.speed, self.kernel.alpha() * nd.y[0]);
            value += g * w;
            if need_gradient {
                let d0 = dg[0] * w;
                let d1 = dg[1] * w;
                grad += Matrix2::new(d0[0], d1[0], d0[1], d1[1]);
            }
        }
        Ok(FieldJet {
            value,
            grad: need_gradient.then_some(grad),
        })
    }

    pub fn eval_total(&self, x: [f64; 2], need_gradient: bool) -> Result<FieldJet> {
        let sc = self.eval_scattered(x, need_gradient)?;
        let (u, g) = self.incident_jet(x)?;
        Ok(FieldJet {
            value: sc.value + u,
            grad: sc.grad.map(|s| s + g),
        })
    }

    /// Single layer on Γ at parameter t via the Nyström interpolant.
    pub fn boundary_scattered(&self, t: f64) -> Result<Vector2<C64>> {
        let kernel = &*self.kernel;
        let asm = Assembler {
            medium: self.medium,
            kernel,
            nodes: &self.nodes,
            reg0: kernel.regular_at_origin()?,
        };
        let s = node_at(&self.profile, t);
        let on = self.nodes.iter().position(|nd| nd.t == t);
        let row = asm.row(&s, on)?;
        Ok(row.iter().zip(&self.density).map(|(b, phi)| b * phi).sum())
    }

    /// max |u_sc + u_inc| over 2N off-node points, relative to max |u_inc| there.
    pub fn boundary_residual(&self) -> Result<f64> {
        let m = 2 * self.n;
        let vals: Vec<(f64, f64)> = (0..m)
            .into_par_iter()
            .map(|i| {
                let t = 2.0 * PI * (i as f64 + 0.5) / m as f64;
                let s = node_at(&self.profile, t);
                let (u, _) = self.incident_jet(s.y)?;
                let sc = self.boundary_scattered(t)?;
                Ok(((sc + u).norm(), u.norm()))
            })
            .collect::<Result<_>>()?;
        let res = vals.iter().map(|v| v.0).fold(0.0, f64::max);
        let inc = vals.iter().map(|v| v.1).fold(0.0, f64::max);
        Ok(if inc == 0.0 { res } else { res / inc })
    }

    /// Scattered-field samples on x₂ = h at x₁ = j/m.
    pub fn sample_line(&self, h: f64, m: usize, total: bool) -> Result<Vec<FieldJet>> {
        (0..m)
            .into_par_iter()
            .map(|j| {
                let x = [j as f64 / m as f64, h];
                if total {
                    self.eval_total(x, true)
                } else {
                    self.eval_scattered(x, true)
                }
            })
            .collect()
    }

    /// Rayleigh coefficients of u_sc from 4·m_modes + 4 samples on x₂ = h.
    pub fn rayleigh_coeffs(&self, h: f64, m_modes: usize) -> Result<RayleighCoeffs2> {
        let samples: Vec<Vector2<C64>> = self
            .sample_line(h, 4 * m_modes + 4, false)?
            .into_iter()
            .map(|f| f.value)
            .collect();
        extract_coeffs_2d(&self.medium, &self.q, &samples, h, m_modes)
    }

    /// Energy fluxes through x₂ = h for a plane-wave incidence.
    pub fn energy_balance(&self, h: f64, m: usize) -> Result<EnergyBalance> {
        if matches!(self.incident, IncidentField::PointSource { .. }) {
            return Err(Error::InvalidInput(
                "energy balance needs a plane-wave incidence".into(),
            ));
        }
        if h <= self.profile.max_height() {
            return Err(Error::InvalidInput(format!("line x2 = {h} is not above the grating")));
        }
        let nu = [0.0, 1.0];
        let tot = self.sample_line(h, m, true)?;
        let (mut u_tot, mut t_tot, mut u_inc, mut t_inc) = (vec![], vec![], vec![], vec![]);
        for (j, f) in tot.iter().enumerate() {
            u_tot.push(f.value);
            t_tot.push(traction(&self.medium, &f.grad.unwrap(), nu));
            let (u, g) = self.incident_jet([j as f64 / m as f64, h])?;
            u_inc.push(u);
            t_inc.push(traction(&self.medium, &g, nu));
        }
        let incident = flux_2d(&self.medium, &u_inc, &t_inc)?;
        let net = flux_2d(&self.medium, &u_tot, &t_tot)?;
        Ok(EnergyBalance {
            incident,
            net,
            relative: (net / incident).abs(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBalance {
    /// Flux of the incident wave alone (negative: it travels down).
    pub incident: f64,
    /// Flux of the total field; zero for a rigid grating.
    pub net: f64,
    pub relative: f64,
}

/// Specular coefficients (u_p, u_s) of the reflection from the flat line x₂ = c.
pub fn flat_reflection(medium: &ElasticMedium, incident: &IncidentField, level: f64) -> Result<(C64, C64)> {
    let alpha = incident
        .alpha(medium)
        .ok_or_else(|| Error::InvalidInput("flat reflection needs a plane wave".into()))?;
    let (kp, ks) = (medium.kp(), medium.ks());
    let beta = C64::new(kp * kp - alpha * alpha, 0.0).sqrt();
    let gamma = C64::new(ks * ks - alpha * alpha, 0.0).sqrt();
    let (pol, kv) = match *incident {
        IncidentField::PlaneP { angle } => ([angle.sin(), -angle.cos()], [alpha, -kp * angle.cos()]),
        IncidentField::PlaneS { angle } => ([angle.cos(), angle.sin()], [alpha, -ks * angle.cos()]),
        IncidentField::PointSource { .. } => unreachable!(),
    };
    let e = C64::from_polar(1.0, kv[1] * level);
    let rhs = Vector2::new(-e * pol[0], -e * pol[1]);
    let ep = (I * beta * level).exp();
    let es = (I * gamma * level).exp();
    let m = Matrix2::new(alpha * ep, gamma * es, beta * ep, -alpha * es);
    let s = m.lu().solve(&rhs).ok_or(Error::DegenerateModeBasis(0))?;
    Ok((s[0], s[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green_free::{kupradze_jet, max_norm};

    fn medium() -> ElasticMedium {
        ElasticMedium::new(2.0, 1.0, 1.0, 5.0).unwrap()
    }

    #[test]
    fn kress_weights_integrate_log_cosines() {
        let n = 64;
        for m in [0usize, 1, 5, 31] {
            let got: f64 = (0..n)
                .map(|j| {
                    kress_weight(n, -2.0 * PI * j as f64 / n as f64) * (m as f64 * 2.0 * PI * j as f64 / n as f64).cos()
                })
                .sum();
            let want = if m == 0 { 0.0 } else { -2.0 * PI / m as f64 };
            assert!((got - want).abs() < 1e-12, "m = {m}: {got} vs {want}");
        }
    }

    #[test]
    fn window_is_a_partition() {
        for u in [0.0, 0.1, 0.5, 0.9, 1.0] {
            assert!((window(u) + window(1.0 - u) - 1.0).abs() < 1e-14);
        }
        assert_eq!(window(1.0), 0.0);
    }

    #[test]
    fn diagonal_limit_matches_small_separation() {
        let m = medium();
        let q = QuasiMomentum::qp2d(0.3);
        let kernel = QpKernel2D::new(&m, &q).unwrap();
        let nodes = [node_at(&ProfileCurve2::flat(0.0), 0.0)];
        let asm = Assembler {
            medium: m,
            kernel: &kernel,
            nodes: &nodes,
            reg0: CMat::zeros(),
        };
        let wn = m.wavenumbers();
        let tau = [0.6, 0.8];
        let lim = asm.diagonal_limit(tau);
        let mut errs = vec![];
        for r in [1e-4, 1e-5] {
            let d = [r * tau[0], r * tau[1]];
            let (k, _) = kupradze_jet::<2>(&wn, d, false).unwrap();
            let approx = k - asm.log_coeff(d) * C64::new((r * r).ln(), 0.0);
            errs.push(max_norm(&(approx - lim)));
        }
        assert!(errs[0] < 1e-6 && errs[1] < 1e-8, "{errs:?}");
    }

    #[test]
    fn hager_estimate_is_a_tight_lower_bound() {
        let a = DMatrix::from_fn(12, 12, |i, j| {
            C64::new(((i * 7 + j * 3) % 11) as f64 - 5.0, (i as f64 - j as f64).sin())
        });
        let inv = a.clone().try_inverse().unwrap();
        let exact = (0..12)
            .map(|j| inv.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let est = inverse_norm1(&a.lu());
        assert!(est <= exact * (1.0 + 1e-12) && est >= 0.3 * exact, "{est} {exact}");
    }

    #[test]
    fn zero_source_gives_zero_density() {
        let m = medium();
        let q = QuasiMomentum::qp2d(0.3);
        let inc = IncidentField::PointSource {
            z: [0.3, 0.5],
            q: [0.0, 0.0],
        };
        let sol = solve_dirichlet(&m, &q, &ProfileCurve2::sinusoid(0.1, 1), &inc, 32).unwrap();
        assert!(sol.density.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn flat_grating_reflects_specular_modes_only() {
        let m = medium();
        let inc = IncidentField::PlaneP { angle: 0.0 };
        let q = QuasiMomentum::qp2d(0.0);
        let sol = solve_dirichlet(&m, &q, &ProfileCurve2::flat(0.0), &inc, 64).unwrap();
        let c = sol.rayleigh_coeffs(0.5, 4).unwrap();
        let (up, us) = flat_reflection(&m, &inc, 0.0).unwrap();
        let c0 = c.get(0).unwrap();
        assert!(
            (c0.up - up).norm() < 1e-8 && (c0.us - us).norm() < 1e-8,
            "{c0:?} vs {up} {us}"
        );
        let leak = c
            .modes
            .iter()
            .filter(|c| c.m != 0)
            .map(|c| c.up.norm().max(c.us.norm()))
            .fold(0.0, f64::max);
        assert!(leak < 1e-8, "leakage {leak}");
    }
}
