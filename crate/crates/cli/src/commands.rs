use num_complex::Complex64 as C64;
use qplame::bem2d::{solve_dirichlet, IncidentField};
use qplame::green2d::green2d_eval;
use qplame::green3d_biqp::greenbi_eval;
use qplame::green3d_qp::green3dqp_eval;
use qplame::phaseless::{cosine_identity, max_difference, nonvanishing_probe, synth_phaseless, PhaselessDataset};
use qplame::rayleigh::{eval_rayleigh_2d, extract_coeffs_2d, RayleighCoeffs2, RayleighMode2};
use qplame::verify::{run_suite, Suite, SuiteReport};
use qplame::{CMat, ElasticMedium, Geometry};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};

use crate::config::{Expect, RunConfig};
use crate::output::{fmt_f64, to_csv, to_json};
use crate::Failure;

/// Bytes to write and whether every numerical check held.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub passed: bool,
}

impl Outcome {
    fn ok(bytes: Vec<u8>) -> Self {
        Outcome { bytes, passed: true }
    }
}

fn entries<const D: usize>(m: &CMat<D>) -> Vec<C64> {
    (0..D).flat_map(|i| (0..D).map(move |j| m[(i, j)])).collect()
}

pub fn eval(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let grid = cfg.block(&cfg.grid, "grid")?;
    let g = cfg.geometry();
    let dim = if g == Geometry::Qp2d { 2 } else { 3 };
    let points = grid.all_points(dim)?;
    let (m, q, tr) = (cfg.medium, cfg.q(), cfg.truncation());
    let values: Vec<_> = points
        .par_iter()
        .map(|x| {
            let y = &grid.source;
            let r = match g {
                Geometry::Qp2d => {
                    green2d_eval(&m, &q, x, y, &tr).map(|e| (entries(&e.value), e.modes_used, e.tail_bound))
                }
                Geometry::Qp3d => {
                    green3dqp_eval(&m, &q, x, y, &tr).map(|e| (entries(&e.value), e.modes_used, e.tail_bound))
                }
                Geometry::Biqp3d => {
                    greenbi_eval(&m, &q, x, y, &tr).map(|e| (entries(&e.value), e.modes_used, e.tail_bound))
                }
            };
            r.map_err(|e| Failure::from(e).context(&format!("point {x:?}")))
        })
        .collect();
    let mut header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    for i in 1..=dim {
        for j in 1..=dim {
            header.push(format!("G{i}{j}_re"));
            header.push(format!("G{i}{j}_im"));
        }
    }
    header.push("modes_used".into());
    header.push("tail_bound".into());
    let mut rows = Vec::with_capacity(points.len());
    for (x, v) in points.iter().zip(values) {
        let (g, modes, tail) = v?;
        let mut row: Vec<String> = x.iter().map(|c| fmt_f64(*c)).collect();
        for c in g {
            row.push(fmt_f64(c.re));
            row.push(fmt_f64(c.im));
        }
        row.push(modes.to_string());
        row.push(fmt_f64(tail));
        rows.push(row);
    }
    Ok(Outcome::ok(to_csv(cfg, &header, &rows)?))
}

pub fn verify(cfg: &RunConfig, suite: Option<Suite>, only: Option<Geometry>) -> Result<Outcome, Failure> {
    let seed = cfg.seed.unwrap_or_default();
    let geoms: Vec<Geometry> = match only {
        Some(g) => vec![g],
        None => qplame::verify::GEOMETRIES.to_vec(),
    };
    let suites: Vec<Suite> = suite.map(|s| vec![s]).unwrap_or_else(|| Suite::ALL.to_vec());
    let reports = suites
        .iter()
        .map(|s| run_suite(*s, seed, &geoms))
        .collect::<qplame::Result<Vec<SuiteReport>>>()?;
    let passed = reports.iter().all(|r| r.passed());
    let mut cfg = cfg.clone();
    cfg.geometry = only;
    let doc = json!({ "config": cfg, "seed": seed, "geometries": geoms, "suites": reports, "passed": passed });
    Ok(Outcome {
        bytes: to_json(&doc)?,
        passed,
    })
}

/// Rayleigh coefficients as (l, re, im) triples per wave type.
#[derive(Debug, Serialize, Deserialize)]
pub struct CoeffFile {
    pub omega: f64,
    pub alpha: f64,
    pub height: f64,
    pub p: Vec<(i64, f64, f64)>,
    pub s: Vec<(i64, f64, f64)>,
}

impl CoeffFile {
    fn new(medium: &ElasticMedium, alpha: f64, height: f64, c: &RayleighCoeffs2) -> Self {
        CoeffFile {
            omega: medium.omega,
            alpha,
            height,
            p: c.modes.iter().map(|m| (m.m, m.up.re, m.up.im)).collect(),
            s: c.modes.iter().map(|m| (m.m, m.us.re, m.us.im)).collect(),
        }
    }

    fn coeffs(&self) -> Result<RayleighCoeffs2, Failure> {
        if self.p.len() != self.s.len() || self.p.iter().zip(&self.s).any(|(a, b)| a.0 != b.0) {
            return Err(Failure::Config(
                "coefficient file: p and s lists must list the same modes".into(),
            ));
        }
        let modes = self
            .p
            .iter()
            .zip(&self.s)
            .map(|(a, b)| RayleighMode2 {
                m: a.0,
                up: C64::new(a.1, a.2),
                us: C64::new(b.1, b.2),
            })
            .collect();
        Ok(RayleighCoeffs2 { modes })
    }
}

fn need_qp2d(cfg: &RunConfig, what: &str) -> Result<(), Failure> {
    if cfg.geometry() != Geometry::Qp2d {
        return Err(Failure::Config(format!("{what} works in the qp2d geometry only")));
    }
    Ok(())
}

pub fn solve2d(cfg: &RunConfig) -> Result<Outcome, Failure> {
    need_qp2d(cfg, "solve2d")?;
    let s = cfg.block(&cfg.solver, "solver")?;
    let (m, q, profile) = (cfg.medium, cfg.q(), cfg.profile());
    let sol = solve_dirichlet(&m, &q, &profile, &s.incident, s.n)?;
    let residual = sol.boundary_residual()?;
    let h = s.height.unwrap_or_else(|| profile.max_height() + 0.5);
    let coeffs = sol.rayleigh_coeffs(h, s.modes)?;
    let energy = match s.incident {
        IncidentField::PointSource { .. } => None,
        _ => Some(sol.energy_balance(h, s.modes)?),
    };
    let density: Vec<[f64; 4]> = sol
        .density
        .iter()
        .map(|d| [d[0].re, d[0].im, d[1].re, d[1].im])
        .collect();
    let doc = json!({
        "config": cfg,
        "n": sol.n,
        "condition": sol.condition,
        "boundary_residual": residual,
        "nodes": sol.nodes,
        "density": density,
        "rayleigh": CoeffFile::new(&m, q.alpha[0], h, &coeffs),
        "energy_balance": energy,
    });
    Ok(Outcome::ok(to_json(&doc)?))
}

const FIELD_HEADER: [&str; 6] = ["x1", "x2", "u1_re", "u1_im", "u2_re", "u2_im"];

fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn read_samples(path: &Path, height: f64) -> Result<Vec<nalgebra::Vector2<C64>>, Failure> {
    let text = read_file(path)?;
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |msg: String| Failure::Config(format!("{}: {msg}", path.display()));
    let header = rd.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != FIELD_HEADER {
        return Err(bad(format!("expected columns {FIELD_HEADER:?}")));
    }
    let rows: Vec<Vec<f64>> = rd
        .records()
        .map(|r| {
            let r = r.map_err(|e| bad(e.to_string()))?;
            r.iter()
                .map(|v| v.trim().parse::<f64>().map_err(|e| bad(format!("'{v}': {e}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    for (j, r) in rows.iter().enumerate() {
        if (r[0] - j as f64 / n as f64).abs() > 1e-12 || (r[1] - height).abs() > 1e-12 {
            return Err(bad(format!("row {j} is not the point ({}/{n}, {height})", j)));
        }
    }
    Ok(rows
        .iter()
        .map(|r| nalgebra::Vector2::new(C64::new(r[2], r[3]), C64::new(r[4], r[5])))
        .collect())
}

pub fn rayleigh_extract(cfg: &RunConfig, base: &Path) -> Result<Outcome, Failure> {
    need_qp2d(cfg, "rayleigh")?;
    let rb = cfg.block(&cfg.rayleigh, "rayleigh")?;
    let path = resolve_path(base, cfg.block(&rb.samples, "rayleigh.samples")?);
    let samples = read_samples(&path, rb.height)?;
    let q = cfg.q();
    let c = extract_coeffs_2d(&cfg.medium, &q, &samples, rb.height, rb.modes)?;
    let doc = json!({ "config": cfg, "coefficients": CoeffFile::new(&cfg.medium, q.alpha[0], rb.height, &c) });
    Ok(Outcome::ok(to_json(&doc)?))
}

pub fn rayleigh_eval(cfg: &RunConfig, base: &Path) -> Result<Outcome, Failure> {
    need_qp2d(cfg, "rayleigh")?;
    let rb = cfg.block(&cfg.rayleigh, "rayleigh")?;
    let path = resolve_path(base, cfg.block(&rb.coefficients, "rayleigh.coefficients")?);
    #[derive(Deserialize)]
    struct Doc {
        coefficients: CoeffFile,
    }
    let doc: Doc =
        serde_json::from_str(&read_file(&path)?).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let file = doc.coefficients;
    let q = cfg.q();
    if file.alpha != q.alpha[0] || file.omega != cfg.medium.omega {
        return Err(Failure::Config(format!(
            "{}: coefficients belong to omega = {}, alpha = {}",
            path.display(),
            file.omega,
            file.alpha
        )));
    }
    let c = file.coeffs()?;
    if rb.count == 0 {
        return Err(Failure::Config("rayleigh.count must be positive".into()));
    }
    let rows: Vec<Vec<String>> = (0..rb.count)
        .map(|j| {
            let x = [j as f64 / rb.count as f64, rb.height];
            let u = eval_rayleigh_2d(&cfg.medium, &q, &c, x);
            [x[0], x[1], u[0].re, u[0].im, u[1].re, u[1].im]
                .iter()
                .map(|v| fmt_f64(*v))
                .collect()
        })
        .collect();
    let header: Vec<String> = FIELD_HEADER.iter().map(|s| s.to_string()).collect();
    Ok(Outcome::ok(to_csv(cfg, &header, &rows)?))
}

pub fn phaseless_synth(cfg: &RunConfig) -> Result<Outcome, Failure> {
    need_qp2d(cfg, "phaseless")?;
    let pb = cfg.block(&cfg.phaseless, "phaseless")?;
    let src = cfg.block(&pb.sources, "phaseless.sources")?;
    let (q, profile, m) = (cfg.q(), cfg.profile(), cfg.medium);
    let sets: Vec<_> = pb
        .frequencies
        .par_iter()
        .map(|w| {
            let mw = ElasticMedium::new(m.lambda, m.mu, m.rho, *w)?;
            synth_phaseless(&mw, &q, &profile, src)
        })
        .collect();
    let sets = sets.into_iter().collect::<qplame::Result<Vec<_>>>()?;
    let doc = json!({ "config": cfg, "datasets": sets });
    Ok(Outcome::ok(to_json(&doc)?))
}

pub fn phaseless_check(cfg: &RunConfig, base: &Path) -> Result<Outcome, Failure> {
    let pb = cfg.block(&cfg.phaseless, "phaseless")?;
    #[derive(Deserialize)]
    struct Doc {
        datasets: Vec<PhaselessDataset>,
    }
    let load = |p: &PathBuf| -> Result<Vec<PhaselessDataset>, Failure> {
        let path = resolve_path(base, p);
        let d: Doc = serde_json::from_str(&read_file(&path)?)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        Ok(d.datasets)
    };
    let (a, b) = match pb.datasets.as_slice() {
        [one] => {
            let a = load(one)?;
            (a.clone(), a)
        }
        [one, two] => (load(one)?, load(two)?),
        _ => return Err(Failure::Config("phaseless.datasets must name one or two files".into())),
    };
    if a.len() != b.len() {
        return Err(Failure::Config(format!(
            "dataset files hold {} and {} frequencies",
            a.len(),
            b.len()
        )));
    }
    let mut passed = true;
    let mut entries = vec![];
    for (da, db) in a.iter().zip(&b) {
        if da.omega != db.omega {
            return Err(Failure::Config(format!(
                "frequencies {} and {} do not match",
                da.omega, db.omega
            )));
        }
        let cos = cosine_identity(da, db)?;
        let diff = max_difference(da, db)?;
        let tri = da.triangle_defect().max(db.triangle_defect());
        let ok = tri <= 1e-12
            && match pb.expect {
                Expect::Equal => cos <= pb.tol,
                Expect::Distinct => cos > pb.tol,
            };
        passed &= ok;
        entries.push(json!({
            "omega": da.omega,
            "cosine_discrepancy": cos,
            "max_difference": diff,
            "triangle_defect": tri,
            "probes": [nonvanishing_probe(da), nonvanishing_probe(db)],
            "pass": ok,
        }));
    }
    let doc = json!({ "config": cfg, "frequencies": entries, "passed": passed });
    Ok(Outcome {
        bytes: to_json(&doc)?,
        passed,
    })
}
