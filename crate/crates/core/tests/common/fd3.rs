use nalgebra::Vector3;
use num_complex::Complex64 as C64;

/// ∂u/∂x_j by a fourth-order central difference.
pub fn partial(f: &dyn Fn([f64; 3]) -> Vector3<C64>, x: [f64; 3], j: usize, h: f64) -> Vector3<C64> {
    let at = |s: f64| {
        let mut y = x;
        y[j] += s * h;
        f(y)
    };
    (at(-2.0) - at(2.0) + (at(1.0) - at(-1.0)) * C64::new(8.0, 0.0)) / C64::new(12.0 * h, 0.0)
}

/// (|curl u|, |div u|, largest |∂_j u_i|) at x.
pub fn curl_div(f: &dyn Fn([f64; 3]) -> Vector3<C64>, x: [f64; 3]) -> (f64, f64, f64) {
    let d: Vec<Vector3<C64>> = (0..3).map(|j| partial(f, x, j, 1e-3)).collect();
    let curl = Vector3::new(d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]);
    let div = d[0][0] + d[1][1] + d[2][2];
    let scale = d.iter().flat_map(|v| v.iter().map(|c| c.norm())).fold(0.0, f64::max);
    (curl.norm(), div.norm(), scale)
}
