mod common;

use chgeom::bending::{bend_sweep, deform_group, identity_word_probe, SweepOptions};
use chgeom::dirichlet::{dirichlet_side_census, pullback_domain_sides};
use chgeom::groups::{
    boxdim_estimate, cygan_window, limit_set_sample, orbit_enumerate, packing_inversion_group, word_metric_profile,
};
use chgeom::presets::{bend_spec, two_sphere_packing, DILATION_FACTOR};
use chgeom::projective::classify_isometry;
use chgeom::{InvariantModel, IsometryClass, Preset};

#[test]
fn cyclic_presets_have_two_sides() {
    for p in [Preset::CyclicVertical, Preset::Dilation] {
        let census = dirichlet_side_census(&p.group().unwrap(), &p.center(), 6, 2000, 0).unwrap();
        assert_eq!(census.side_words(), vec!["a", "A"], "{p}");
    }
}

#[test]
fn lattice_census_grows_and_slice_is_stable() {
    let p = Preset::Z2Lattice;
    let g = p.group().unwrap();
    let small = dirichlet_side_census(&g, &p.center(), 3, 2000, 0).unwrap();
    let large = dirichlet_side_census(&g, &p.center(), 6, 2000, 0).unwrap();
    assert!(large.sides.len() > small.sides.len(), "{} vs {}", small.sides.len(), large.sides.len());

    let slice = pullback_domain_sides(&g, p.model().unwrap(), 1.0, 2, 400, 0).unwrap();
    assert!(slice.stable);
    assert_eq!(slice.census.side_words().len(), 4);
}

#[test]
fn census_is_deterministic_per_seed() {
    let p = Preset::Z2Lattice;
    let g = p.group().unwrap();
    let a = dirichlet_side_census(&g, &p.center(), 3, 500, 7).unwrap();
    let b = dirichlet_side_census(&g, &p.center(), 3, 500, 7).unwrap();
    assert_eq!(a, b);
}

#[test]
fn dilation_profile_is_linear() {
    let p = Preset::Dilation;
    let prof = word_metric_profile(&p.group().unwrap(), 10, &p.center()).unwrap();
    let tau = 2.0 * DILATION_FACTOR.ln();
    for row in &prof.rows {
        assert!((row.dmax - row.length as f64 * tau).abs() < 1e-9, "{row:?}");
    }
}

#[test]
fn schottky_profile_bounds() {
    let p = Preset::Schottky;
    let gens = p.group().unwrap();
    let prof = word_metric_profile(&gens, 6, &p.center()).unwrap();
    let disp = prof.max_generator_displacement;
    for w in prof.rows.windows(2) {
        assert!(w[1].dmin >= w[0].dmin);
    }
    for row in &prof.rows {
        assert!(row.dmax <= row.length as f64 * disp + 1e-9);
        // Reduced words of a free group on two generators.
        let expected = if row.length == 0 { 1 } else { 4 * 3usize.pow(row.length as u32 - 1) };
        assert_eq!(row.count, expected);
    }
    let orbit = orbit_enumerate(&gens, 4, &p.center()).unwrap();
    assert_eq!(orbit.len(), 1 + 4 + 12 + 36 + 108);
}

#[test]
fn two_sphere_certificate_has_positive_margin() {
    let (gens, cert) = packing_inversion_group(&two_sphere_packing().unwrap(), 1000, 0).unwrap();
    assert!(cert.min_margin > 0.0);
    for i in 0..gens.len() {
        assert!(gens.is_involution(i));
    }
}

#[test]
fn fuchsian_limit_set_is_a_curve_on_the_real_circle() {
    let p = Preset::Fuchsian;
    let samples = limit_set_sample(&p.group().unwrap(), 6, &[p.center()]).unwrap();
    let pts: Vec<_> = samples.iter().map(|s| s.point.clone()).collect();
    for q in &pts {
        assert!(InvariantModel::HorizontalLine.cygan_distance(&q.at_height(0.0)) < 1e-6);
    }
    let window = cygan_window(&pts, 1.0);
    assert!(window.len() >= 1000);
    let est = boxdim_estimate(&window, &[0.1, 0.05, 0.02, 0.01]).unwrap();
    assert!((est.dimension - 1.0).abs() < 0.15, "{est:?}");
}

#[test]
fn bend_sweep_separates_parameters() {
    let spec = bend_spec().unwrap();
    let original = Preset::Bend.group().unwrap();
    let at_zero = deform_group(&spec, 0.0).unwrap();
    for (a, b) in original.generators().iter().zip(at_zero.generators()) {
        assert!(a.proj_eq(b, 1e-12));
    }
    let options = SweepOptions {
        probe_len: 5,
        ..SweepOptions::default()
    };
    let report = bend_sweep(&spec, &[-0.1, 0.0, 0.1], &options).unwrap();
    assert!(report.cartan_distinct && report.zero_only_at_origin);
    for row in &report.rows {
        assert!(row.probe.passed);
        assert_eq!(row.deformed_class, IsometryClass::Loxodromic);
    }
    assert!(report.x1.xi[0].im.abs() < 1e-9 && report.x2.xi[0].im.abs() < 1e-9);
}

#[test]
fn deformed_generators_stay_loxodromic_and_free() {
    let spec = bend_spec().unwrap();
    let g = deform_group(&spec, 0.2).unwrap();
    for m in g.generators() {
        assert_eq!(classify_isometry(m).unwrap(), IsometryClass::Loxodromic);
    }
    assert!(identity_word_probe(&g, 4, 1e-6).passed);
}
