//! Panel Gauss-Legendre quadrature of complex integrands.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64 as C64;

pub struct Panels {
    rule: Vec<(f64, f64)>,
}

impl Panels {
    pub fn new(order: usize) -> Self {
        let g = GaussLegendre::new(order.try_into().unwrap());
        Panels {
            rule: g.as_node_weight_pairs().to_vec(),
        }
    }

    /// ∫_a^b f(t) dt over `n` equal panels.
    pub fn integrate<F: FnMut(f64) -> C64>(&self, a: f64, b: f64, n: usize, mut f: F) -> C64 {
        let w = (b - a) / n as f64;
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..n {
            let lo = a + p as f64 * w;
            for &(x, wt) in &self.rule {
                acc += f(lo + 0.5 * w * (x + 1.0)) * (0.5 * w * wt);
            }
        }
        acc
    }
}

/// J_ν(z) by its power series; adequate for |z| ≲ 15.
pub fn bessel_j_series(nu: u32, z: C64) -> C64 {
    let h = z * 0.5;
    let mut term = C64::new(1.0, 0.0);
    for k in 1..=nu {
        term *= h / k as f64;
    }
    let mut sum = term;
    let h2 = h * h;
    for k in 1..200u32 {
        term *= -h2 / (k as f64 * (k + nu) as f64);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}
