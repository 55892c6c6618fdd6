use kdvh::sbp::{make_fourier_operator, make_grid};
use kdvh::waves::*;
use proptest::prelude::*;

#[test]
fn homoclinic_orbit_reaches_predicted_peak() {
    let p = TravelingWaveParams::new(1.0, 0.4).unwrap();
    let [plus, minus] = launch_from_origin(&p, 1e-8, &OrbitConfig::default())
        .expect("origin is a saddle")
        .unwrap();
    assert_eq!(plus.classification, OrbitClass::Homoclinic);
    let peak = homoclinic_peak(&p).unwrap();
    assert!((plus.max_u() - peak).abs() < 1e-5, "{} vs {peak}", plus.max_u());
    assert!((peak - 2.8054).abs() < 1e-4);
    assert!(plus.h_drift <= 1e-10, "{}", plus.h_drift);
    // the other branch runs off towards the singular line or infinity
    assert_ne!(minus.classification, OrbitClass::Homoclinic);
}

#[test]
fn orbit_around_crest_is_periodic() {
    let p = TravelingWaveParams::new(1.0, 0.4).unwrap();
    let r = integrate_orbit(&p, PhasePoint::new(2.3, 0.0), &OrbitConfig::default()).unwrap();
    assert_eq!(r.classification, OrbitClass::Periodic);
    assert!(r.h_drift <= 1e-10);
    assert!(r.min_u() > 0.0 && r.max_u() < homoclinic_peak(&p).unwrap());
}

#[test]
fn orbit_into_singular_line() {
    let p = TravelingWaveParams::new(2.0, 1.0).unwrap();
    assert_eq!(p.singular_u(), Some(1.5));
    let r = integrate_orbit(&p, PhasePoint::new(1.0, -1.0), &OrbitConfig::default()).unwrap();
    assert_eq!(r.classification, OrbitClass::SingularHit);
    assert!(p.singular_distance(PhasePoint::new(r.samples.last().unwrap().1, 0.0)) < 1e-3);
}

#[test]
fn no_solitary_wave_when_origin_is_a_center() {
    let p = TravelingWaveParams::new(2.0, 1.0).unwrap();
    assert!(launch_from_origin(&p, 1e-8, &OrbitConfig::default()).is_none());
}

#[test]
fn petviashvili_profiles_flatten_with_tau() {
    let g = make_grid(-30.0 * std::f64::consts::PI, 30.0 * std::f64::consts::PI, 512).unwrap();
    let guess: Vec<f64> = g.nodes().iter().map(|x| (-x * x / 8.0).exp()).collect();
    let mut peaks = Vec::new();
    for tau in [1.0, 0.5, 0.1] {
        let p = TravelingWaveParams::new(1.0 / 3.0, tau).unwrap();
        let r = petviashvili_solve(&g, &p, &guess, 1e-12, DEFAULT_MAX_ITER).unwrap();
        peaks.push(r.profile.iter().cloned().fold(f64::MIN, f64::max));
    }
    let kdv = 1.0; // 3c
    assert!(peaks[0] < peaks[1] && peaks[1] < peaks[2] && peaks[2] < kdv, "{peaks:?}");
    let _ = make_fourier_operator(&g).unwrap();
}

#[test]
fn field_samples_mark_singular_line() {
    let p = TravelingWaveParams::new(1.0, 0.4).unwrap();
    let s = sample_field(&p, (-1.5, 3.0), (-1.0, 1.0), 10, 5);
    assert_eq!(s.len(), 50);
    assert!(s.iter().filter(|f| f.singular).count() == 5);
}

proptest! {
    #[test]
    fn first_integral_is_conserved_by_the_field(
        c in 0.1f64..3.0, tau in 0.01f64..2.0, u in -3.0f64..3.0, v in -2.0f64..2.0,
    ) {
        let p = TravelingWaveParams::new(c, tau).unwrap();
        prop_assume!(p.singular_distance(PhasePoint::new(u, v)) > 1e-2);
        let pt = PhasePoint::new(u, v);
        let (du, dv) = tw_vector_field(&p, pt).unwrap();
        let h = 1e-5;
        let hu = (first_integral(&p, PhasePoint::new(u + h, v)) - first_integral(&p, PhasePoint::new(u - h, v))) / (2.0 * h);
        let hv = v;
        let scale = 1.0 + (hu * du).abs() + (hv * dv).abs();
        prop_assert!((hu * du + hv * dv).abs() < 1e-6 * scale);
    }

    #[test]
    fn origin_is_a_saddle_exactly_below_the_characteristic_speed(
        c in 0.05f64..3.0, tau in 0.01f64..3.0,
    ) {
        let p = TravelingWaveParams::new(c, tau).unwrap();
        prop_assume!((1.0 / tau - c * c).abs() > 1e-6);
        let r = classify_equilibria(&p);
        prop_assert_eq!(r.origin.saddle, 1.0 / tau > c * c);
    }
}
