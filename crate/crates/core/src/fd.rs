//! Fourth-order finite differences for residual checks.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::green_free::{max_norm, CMat};
use crate::medium::Wavenumbers;

const W1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
const W2: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

/// All second partials ∂_a∂_b of a matrix field, fourth order in h.
pub fn hessian<const N: usize, const D: usize, F>(f: &F, x: [f64; N], h: f64) -> Result<Vec<Vec<CMat<D>>>>
where
    F: Fn([f64; N]) -> Result<CMat<D>>,
{
    let at = |da: usize, ia: i32, db: usize, ib: i32| -> Result<CMat<D>> {
        let mut p = x;
        p[da] += ia as f64 * h;
        p[db] += ib as f64 * h;
        f(p)
    };
    let mut out = vec![vec![CMat::<D>::zeros(); N]; N];
    for a in 0..N {
        for b in a..N {
            let mut acc = CMat::<D>::zeros();
            if a == b {
                for (i, w) in W2.iter().enumerate() {
                    if *w != 0.0 {
                        acc += at(a, i as i32 - 2, a, 0)? * C64::new(*w, 0.0);
                    }
                }
            } else {
                for (i, wi) in W1.iter().enumerate() {
                    for (j, wj) in W1.iter().enumerate() {
                        if *wi != 0.0 && *wj != 0.0 {
                            acc += at(a, i as i32 - 2, b, j as i32 - 2)? * C64::new(wi * wj, 0.0);
                        }
                    }
                }
            }
            acc /= C64::new(h * h, 0.0);
            out[a][b] = acc;
            out[b][a] = acc;
        }
    }
    Ok(out)
}

/// (Δ* + ρω²) applied column-wise to a tensor field at x.
/// Returns (residual, scale) in max-norm, the scale being the largest of
/// ‖μΔG‖, ‖(λ+μ)∇∇·G‖ and ‖ρω²G‖.
pub fn navier_residual<const D: usize, F>(wn: &Wavenumbers, f: &F, x: [f64; D], h: f64) -> Result<(f64, f64)>
where
    F: Fn([f64; D]) -> Result<CMat<D>>,
{
    let hs = hessian(f, x, h)?;
    let g = f(x)?;
    let mu = C64::new(wn.mu, 0.0);
    let lm = C64::new(wn.lambda + wn.mu, 0.0);
    let mut r = g * wn.rw2;
    let mut terms = [0.0f64; 2];
    for i in 0..D {
        for k in 0..D {
            let mut lap = C64::new(0.0, 0.0);
            let mut gd = C64::new(0.0, 0.0);
            for a in 0..D {
                lap += hs[a][a][(i, k)];
                gd += hs[i][a][(a, k)];
            }
            terms[0] = terms[0].max((mu * lap).norm());
            terms[1] = terms[1].max((lm * gd).norm());
            r[(i, k)] += mu * lap + lm * gd;
        }
    }
    let scale = (wn.rw2.norm() * max_norm(&g)).max(terms[0]).max(terms[1]);
    Ok((max_norm(&r), scale))
}

/// Fourth-order central first derivative of a matrix field along axis `a`.
pub fn partial<const N: usize, const D: usize, F>(f: &F, x: [f64; N], a: usize, h: f64) -> Result<CMat<D>>
where
    F: Fn([f64; N]) -> Result<CMat<D>>,
{
    let mut acc = CMat::<D>::zeros();
    for (i, w) in W1.iter().enumerate() {
        if *w != 0.0 {
            let mut p = x;
            p[a] += (i as f64 - 2.0) * h;
            acc += f(p)? * C64::new(*w, 0.0);
        }
    }
    Ok(acc / C64::new(h, 0.0))
}
