use nalgebra::Vector2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qplame::bem2d::{kress_weight, ProfileCurve2};
use qplame::green_free::{kupradze_2d, kupradze_3d, max_norm};
use qplame::rayleigh::{eval_rayleigh_2d, extract_coeffs_2d, RayleighCoeffs2, RayleighMode2};
use qplame::specfun::{bessel_j, bessel_y, mod_k};
use qplame::verify::{green_any, Case};
use qplame::{ElasticMedium, Geometry, QuasiMomentum, Truncation};
use std::f64::consts::PI;

fn medium() -> impl Strategy<Value = ElasticMedium> {
    (0.2..3.0f64, 0.5..2.0f64, 0.5..2.0f64, 1.0..6.0f64)
        .prop_map(|(l, m, r, w)| ElasticMedium::new(l, m, r, w).unwrap())
}

fn geometry() -> impl Strategy<Value = Geometry> {
    prop_oneof![Just(Geometry::Qp2d), Just(Geometry::Qp3d), Just(Geometry::Biqp3d)]
}

fn case() -> impl Strategy<Value = Case> {
    (
        medium(),
        geometry(),
        -PI..PI,
        -PI..PI,
        prop::array::uniform3(-1.0..1.0f64),
        0.4..0.9f64,
        0.0..2.0 * PI,
    )
        .prop_map(|(m, g, a1, a2, y, gap, th)| {
            let (q, x) = match g {
                Geometry::Qp2d => (QuasiMomentum::qp2d(a1), [y[0] + 0.3, y[1] + gap, 0.0]),
                Geometry::Qp3d => (
                    QuasiMomentum::qp3d(a1),
                    [y[0] + 0.3, y[1] + gap * th.cos(), y[2] + gap * th.sin()],
                ),
                Geometry::Biqp3d => (QuasiMomentum::biqp3d(a1, a2), [y[0] + 0.3, y[1] - 0.2, y[2] + gap]),
            };
            let y = if g == Geometry::Qp2d { [y[0], y[1], 0.0] } else { y };
            Case { medium: m, q, x, y }
        })
}

fn tr(g: Geometry) -> Truncation {
    Truncation::for_geometry(g).with_tol(1e-14)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn green_is_quasi_periodic(c in case()) {
        let t = tr(c.q.geometry);
        let g0 = green_any(&c, &t);
        prop_assume!(g0.is_ok());
        let g0 = g0.unwrap();
        let mut shifted = c;
        shifted.x[0] += 1.0;
        let g1 = green_any(&shifted, &t).unwrap();
        let ph = C64::from_polar(1.0, c.q.alpha[0]);
        let scale = g0.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let err = (g1 - g0 * ph).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        prop_assert!(err <= 1e-12 * scale.max(1e-300), "{err:e} vs {scale:e}");
    }

    #[test]
    fn green_is_reciprocal(c in case()) {
        let t = tr(c.q.geometry);
        let g = green_any(&c, &t);
        prop_assume!(g.is_ok());
        let g = g.unwrap();
        let back = Case { q: c.q.negated(), x: c.y, y: c.x, ..c };
        let h = green_any(&back, &t).unwrap();
        let err = (g - h.transpose()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        prop_assert!(err <= 1e-12, "{err:e}");
    }

    #[test]
    fn kupradze_is_symmetric_and_even(m in medium(), d in prop::array::uniform3(-2.0..2.0f64)) {
        prop_assume!(d.iter().map(|v| v * v).sum::<f64>() > 1e-4);
        let z = [0.0; 3];
        let g = kupradze_3d(&m, &d, &z).unwrap().value;
        let h = kupradze_3d(&m, &z, &d).unwrap().value;
        prop_assert!(max_norm(&(g - g.transpose())) <= 1e-14 * max_norm(&g));
        prop_assert!(max_norm(&(g - h)) <= 1e-14 * max_norm(&g));
        let g2 = kupradze_2d(&m, &d[..2], &z[..2]);
        prop_assume!(g2.is_ok());
        let g2 = g2.unwrap().value;
        prop_assert!(max_norm(&(g2 - g2.transpose())) <= 1e-14 * max_norm(&g2));
    }
}

proptest! {
    #[test]
    fn medium_rejects_nonpositive_parameters(mu in -2.0..0.0f64, w in -2.0..0.0f64) {
        prop_assert!(ElasticMedium::new(1.0, mu, 1.0, 1.0).is_err());
        prop_assert!(ElasticMedium::new(1.0, 1.0, 1.0, w).is_err());
    }

    #[test]
    fn pressure_waves_are_longer(m in medium()) {
        prop_assert!(m.kp() < m.ks());
        let ratio = (m.ks() / m.kp()).powi(2);
        prop_assert!((ratio - (m.lambda + 2.0 * m.mu) / m.mu).abs() < 1e-12 * ratio);
    }

    #[test]
    fn bessel_wronskian_and_recurrence(x in 1e-2..200.0f64, n in 0i32..6) {
        let w = bessel_j(n + 1, x) * bessel_y(n, x).unwrap() - bessel_j(n, x) * bessel_y(n + 1, x).unwrap();
        prop_assert!((w * PI * x / 2.0 - 1.0).abs() < 1e-10);
        let k = |v: u32| mod_k(v, x).unwrap();
        prop_assert!((k(2) - k(0) - 2.0 / x * k(1)).abs() <= 1e-12 * k(2));
    }

    #[test]
    fn kress_weight_is_even_and_periodic(d in 0.0..2.0 * PI, p in 3u32..8) {
        let n = 1usize << p;
        let w = kress_weight(n, d);
        prop_assert!((w - kress_weight(n, -d)).abs() < 1e-12);
        prop_assert!((w - kress_weight(n, d + 2.0 * PI)).abs() < 1e-11);
    }

    #[test]
    fn profile_derivatives_match_differences(
        a0 in -0.2..0.2f64,
        c in prop::collection::vec(-0.1..0.1f64, 1..4),
        x in 0.0..1.0f64,
    ) {
        let p = ProfileCurve2 { a0, sin: c.iter().map(|v| 0.5 * v).collect(), cos: c };
        let h = 1e-5;
        let (f, d1, d2) = p.eval(x);
        let (fp, d1p, _) = p.eval(x + h);
        let (fm, d1m, _) = p.eval(x - h);
        prop_assert!(((fp - fm) / (2.0 * h) - d1).abs() < 1e-6 * (1.0 + d1.abs()));
        prop_assert!(((d1p - d1m) / (2.0 * h) - d2).abs() < 1e-5 * (1.0 + d2.abs()));
        prop_assert!((p.eval(x + 1.0).0 - f).abs() < 1e-14);
    }

    #[test]
    fn rayleigh_roundtrip(
        m in medium(),
        alpha in -PI..PI,
        amps in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), 5),
        h in 0.0..0.2f64,
    ) {
        let q = QuasiMomentum::qp2d(alpha);
        let c = RayleighCoeffs2 {
            modes: amps
                .iter()
                .zip(-2i64..)
                .map(|(a, k)| RayleighMode2 { m: k, up: C64::new(a.0, a.1), us: C64::new(a.2, a.3) })
                .collect(),
        };
        let samples: Vec<Vector2<C64>> = (0..16).map(|j| eval_rayleigh_2d(&m, &q, &c, [j as f64 / 16.0, h])).collect();
        match extract_coeffs_2d(&m, &q, &samples, h, 2) {
            Ok(back) => {
                for (a, b) in c.modes.iter().zip(&back.modes) {
                    prop_assert!((a.up - b.up).norm() < 1e-9 && (a.us - b.us).norm() < 1e-9, "{a:?} {b:?}");
                }
            }
            Err(e) => prop_assert!(matches!(e, qplame::Error::DegenerateModeBasis(_)), "{e}"),
        }
    }
}
