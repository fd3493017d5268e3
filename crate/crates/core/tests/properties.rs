mod common;

use chgeom::bending::{
    bend_distortion, bend_heisenberg, bend_plane, cartan_invariant, BendParams, BoundaryTriple,
};
use chgeom::heisenberg::{
    cygan_dist_boundary, cygan_norm_boundary, embed_isometry, heis_dilate, heis_inversion, heis_similarity_apply,
    heis_to_projective, horo_inversion, horo_lift, horo_to_projective, horosphere_distance, HeisSimilarity,
};
use chgeom::projective::{bergman_distance, classify_isometry, herm_inner, j_matrix};
use chgeom::{HeisPoint, HoroPoint, IsometryClass, ProjectivePoint};
use common::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// `PROPTEST_CASES` overrides the per-block default.
fn cases(default: u32) -> u32 {
    std::env::var("PROPTEST_CASES").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(cases(256)))]

    #[test]
    fn embedded_similarities_preserve_the_form(s in similarity()) {
        let m = embed_isometry(&s).unwrap();
        let j = j_matrix(2);
        let mat = m.matrix();
        prop_assert!((mat.adjoint() * &j * mat - &j).norm() < 1e-10);
    }

    #[test]
    fn embedding_is_a_homomorphism(a in similarity(), b in similarity()) {
        let ab = embed_isometry(&a.compose(&b).unwrap()).unwrap();
        let prod = embed_isometry(&a).unwrap().compose(&embed_isometry(&b).unwrap());
        prop_assert!(projective_gap(ab.matrix(), prod.matrix()) < 1e-9);
    }

    #[test]
    fn embedding_matches_the_boundary_action(s in similarity(), p in horo_point()) {
        let direct = heis_similarity_apply(&s, &p).unwrap();
        let via = embed_isometry(&s).unwrap().apply(&horo_to_projective(&p)).unwrap();
        prop_assert!(via.proj_eq(&horo_to_projective(&direct)));
    }

    #[test]
    fn horo_lift_has_norm_minus_height(p in horo_point()) {
        let z = horo_lift(&p);
        let q = herm_inner(&z, &z).unwrap();
        prop_assert!((q.re + p.u).abs() < 1e-12 * (1.0 + z.norm_squared()));
        prop_assert!(q.im.abs() < 1e-12);
    }

    #[test]
    fn cygan_triangle_inequality(a in heis_point(), b in heis_point(), c in heis_point()) {
        let ab = cygan_dist_boundary(&a, &b).unwrap();
        let bc = cygan_dist_boundary(&b, &c).unwrap();
        let ac = cygan_dist_boundary(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn dilation_scales_cygan_distance(a in heis_point(), b in heis_point(), r in 0.1..10.0f64) {
        let (da, db) = (heis_dilate(r, &a.at_height(0.0)).base(), heis_dilate(r, &b.at_height(0.0)).base());
        let d = cygan_dist_boundary(&a, &b).unwrap();
        prop_assert!((cygan_dist_boundary(&da, &db).unwrap() - r * d).abs() < 1e-12 * (1.0 + r * d));
    }

    #[test]
    fn inversion_is_an_involution_reciprocating_the_norm(p in heis_point()) {
        prop_assume!(cygan_norm_boundary(&p) > 1e-3);
        let q = heis_inversion(&p).unwrap();
        prop_assert!((cygan_norm_boundary(&q) * cygan_norm_boundary(&p) - 1.0).abs() < 1e-12);
        let back = heis_inversion(&q).unwrap();
        prop_assert!(cygan_dist_boundary(&back, &p).unwrap() < 1e-6);
        prop_assert!((back.xi[0] - p.xi[0]).norm() < 1e-12 * (1.0 + p.xi[0].norm()));
        prop_assert!((back.v - p.v).abs() < 1e-12 * (1.0 + p.v.abs()));
    }

    #[test]
    fn horo_inversion_agrees_with_the_matrix(p in horo_point()) {
        let q = horo_inversion(&p).unwrap();
        let via = chgeom::heisenberg::inversion_isometry(2).apply(&horo_to_projective(&p)).unwrap();
        prop_assert!(via.proj_eq(&horo_to_projective(&q)));
    }

    #[test]
    fn horosphere_formula_matches_bergman(a in horo_point(), b in heis_point()) {
        let b = b.at_height(a.u);
        let d = horosphere_distance(&a, &b).unwrap();
        let e = bergman_distance(&horo_to_projective(&a), &horo_to_projective(&b)).unwrap();
        prop_assert!((d - e).abs() <= 1e-10 * d.max(1e-3));
    }

    #[test]
    fn isometries_preserve_bergman_distance(g in isometry(), a in horo_point(), b in horo_point()) {
        let (pa, pb) = (horo_to_projective(&a), horo_to_projective(&b));
        let d = bergman_distance(&pa, &pb).unwrap();
        let e = bergman_distance(&g.apply(&pa).unwrap(), &g.apply(&pb).unwrap()).unwrap();
        prop_assert!((d - e).abs() < 1e-8 * (1.0 + d));
    }

    #[test]
    fn classification_is_conjugation_invariant(g in isometry(), t in heis_point(), r in 1.2..4.0f64, th in 0.3..3.0f64) {
        prop_assume!(cygan_norm_boundary(&t) > 0.1);
        let cases = [
            (HeisSimilarity::translation(t), IsometryClass::Parabolic),
            (HeisSimilarity::dilation(2, r).unwrap(), IsometryClass::Loxodromic),
            (
                HeisSimilarity::rotation(nalgebra::DMatrix::from_element(1, 1, chgeom::C64::from_polar(1.0, th))).unwrap(),
                IsometryClass::Elliptic,
            ),
        ];
        for (s, class) in cases {
            let m = embed_isometry(&s).unwrap().conjugate_by(&g);
            prop_assert_eq!(classify_isometry(&m).unwrap(), class);
        }
    }
}

proptest! {
    #![proptest_config(config(cases(512)))]

    #[test]
    fn bend_preserves_modulus_and_reflects(r in 0.1..5.0f64, arg in -PI..PI, eta in -1.0..1.0f64, zeta in 0.2..1.2f64) {
        prop_assume!(eta.abs() < PI - 2.0 * zeta);
        let p = BendParams::new(eta, zeta).unwrap();
        let q = BendParams::new(-eta, zeta).unwrap();
        let z = chgeom::C64::from_polar(r, arg);
        let w = bend_plane(z, &p);
        prop_assert!((w.norm() - r).abs() < 1e-12 * r);
        prop_assert!((bend_plane(z.conj(), &q).conj() - w).norm() < 1e-12 * r);
    }

    #[test]
    fn bend_distortion_matches_jacobian(r in 0.2..3.0f64, arg in -PI..PI, eta in -0.8..0.8f64) {
        let zeta = FRAC_PI_4;
        let p = BendParams::new(eta, zeta).unwrap();
        let a = arg.abs();
        prop_assume!((a - zeta).abs() > 1e-3 && (a - (PI - zeta)).abs() > 1e-3 && a > 1e-3 && a < PI - 1e-3);
        prop_assume!(eta != 0.0);
        let z = chgeom::C64::from_polar(r, arg);
        let h = 1e-6 * r;
        let dx = (bend_plane(z + h, &p) - bend_plane(z - h, &p)) / (2.0 * h);
        let dy = (bend_plane(z + chgeom::C64::new(0.0, h), &p) - bend_plane(z - chgeom::C64::new(0.0, h), &p)) / (2.0 * h);
        let jac = nalgebra::Matrix2::new(dx.re, dy.re, dx.im, dy.im);
        let sv = jac.singular_values();
        let ratio = sv.max() / sv.min();
        prop_assert!((bend_distortion(z, &p).unwrap() - ratio).abs() < 1e-5);
    }

    #[test]
    fn bend_heisenberg_commutes_with_dilation(p in heis_point(), eta in -0.5..0.5f64, ri in 0usize..3) {
        let r = [0.5, 2.0, 3.7][ri];
        prop_assume!(p.xi[0].norm() > 1e-6);
        let params = BendParams::new(eta, FRAC_PI_4).unwrap();
        let a = bend_heisenberg(&heis_dilate(r, &p.at_height(0.0)).base(), &params).unwrap();
        let b = heis_dilate(r, &bend_heisenberg(&p, &params).unwrap().at_height(0.0)).base();
        prop_assert!((a.xi[0] - b.xi[0]).norm() < 1e-12 * (1.0 + a.xi[0].norm()));
        prop_assert!((a.v - b.v).abs() < 1e-12 * (1.0 + a.v.abs()));
        let q = bend_heisenberg(&p, &params).unwrap();
        prop_assert!((cygan_norm_boundary(&q) - cygan_norm_boundary(&p)).abs() < 1e-12 * (1.0 + cygan_norm_boundary(&p)));
    }

    #[test]
    fn cartan_is_invariant(g in moderate_isometry(), a in heis_point(), b in heis_point(), c in heis_point(), s in 0.1..5.0f64) {
        prop_assume!(cygan_dist_boundary(&a, &b).unwrap() > 0.1);
        prop_assume!(cygan_dist_boundary(&b, &c).unwrap() > 0.1);
        prop_assume!(cygan_dist_boundary(&a, &c).unwrap() > 0.1);
        let pts: Vec<ProjectivePoint> = [&a, &b, &c].iter().map(|p| heis_to_projective(p)).collect();
        let alpha = cartan_invariant(&BoundaryTriple::new(pts[0].clone(), pts[1].clone(), pts[2].clone()).unwrap());
        prop_assert!(alpha.abs() <= FRAC_PI_2);

        let scaled = ProjectivePoint::new(pts[0].lift() * chgeom::C64::new(s, -2.0 * s)).unwrap();
        let t = BoundaryTriple::new(scaled, pts[1].clone(), pts[2].clone()).unwrap();
        prop_assert!((cartan_invariant(&t) - alpha).abs() < 1e-12);

        let moved: Vec<ProjectivePoint> = pts.iter().map(|p| g.apply(p).unwrap()).collect();
        let t = BoundaryTriple::new(moved[0].clone(), moved[1].clone(), moved[2].clone()).unwrap();
        prop_assert!((cartan_invariant(&t) - alpha).abs() < 1e-10);

        let conj: Vec<ProjectivePoint> = pts.iter().map(|p| ProjectivePoint::new(p.lift().map(|z| z.conj())).unwrap()).collect();
        let t = BoundaryTriple::new(conj[0].clone(), conj[1].clone(), conj[2].clone()).unwrap();
        prop_assert!((cartan_invariant(&t) + alpha).abs() < 1e-12);
    }
}

#[test]
fn horosphere_distance_rejects_mixed_heights() {
    let a = HoroPoint::planar(cx(0.0, 0.0), 0.0, 1.0);
    let b = HoroPoint::planar(cx(1.0, 0.0), 0.0, 2.0);
    assert!(horosphere_distance(&a, &b).is_err());
    assert_eq!(horosphere_distance(&a, &a).unwrap(), 0.0);
    let _ = HeisPoint::origin(2);
}
