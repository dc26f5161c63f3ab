//! Shared fixtures for the criterion benches.

use qplame::bem2d::{IncidentField, ProfileCurve2};
use qplame::{ElasticMedium, QuasiMomentum};

pub fn medium() -> ElasticMedium {
    ElasticMedium::new(2.0, 1.0, 1.0, 5.0).expect("valid medium")
}

pub fn grating() -> (ElasticMedium, QuasiMomentum, ProfileCurve2, IncidentField) {
    let m = medium();
    let inc = IncidentField::PlaneP { angle: 0.3 };
    let q = QuasiMomentum::qp2d(inc.alpha(&m).expect("plane wave"));
    (m, q, ProfileCurve2::sinusoid(0.1, 1), inc)
}
