#![allow(dead_code)]

use chgeom::heisenberg::{embed_isometry, inversion_isometry};
use chgeom::{HeisPoint, HeisSimilarity, HoroPoint, Isometry, C64};
use nalgebra::DMatrix;
use proptest::prelude::*;

pub fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn heis_point() -> impl Strategy<Value = HeisPoint> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, v)| HeisPoint::planar(cx(x, y), v))
}

pub fn horo_point() -> impl Strategy<Value = HoroPoint> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, 0.05..3.0f64).prop_map(|(x, y, v, u)| HoroPoint::planar(cx(x, y), v, u))
}

/// A similarity of `H_2`: rotation by `θ`, translation, dilation `r`.
pub fn similarity() -> impl Strategy<Value = HeisSimilarity> {
    (heis_point(), -3.2..3.2f64, 0.3..3.0f64).prop_map(|(t, theta, r)| {
        let rot = DMatrix::from_element(1, 1, C64::from_polar(1.0, theta));
        HeisSimilarity::new(rot, t, r).unwrap()
    })
}

/// Products of embedded similarities and the inversion.
pub fn isometry() -> impl Strategy<Value = Isometry> {
    (similarity(), similarity()).prop_map(|(a, b)| {
        embed_isometry(&a)
            .unwrap()
            .compose(&inversion_isometry(2))
            .compose(&embed_isometry(&b).unwrap())
    })
}

/// Frobenius norm of `A − λB` for the `λ` best matching `B` to `A`.
pub fn projective_gap(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let num: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let lambda = num / b.norm_squared();
    (a - b * lambda).norm() / a.norm()
}

/// Like [`isometry`] with entries of order ten, so that `<gz, gw>` keeps
/// about ten digits.
pub fn moderate_isometry() -> impl Strategy<Value = Isometry> {
    let sim = (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -3.2..3.2f64, 0.5..2.0f64).prop_map(|(x, y, v, th, r)| {
        let rot = DMatrix::from_element(1, 1, C64::from_polar(1.0, th));
        HeisSimilarity::new(rot, HeisPoint::planar(cx(x, y), v), r).unwrap()
    });
    (sim.clone(), sim).prop_map(|(a, b)| {
        embed_isometry(&a)
            .unwrap()
            .compose(&inversion_isometry(2))
            .compose(&embed_isometry(&b).unwrap())
    })
}
