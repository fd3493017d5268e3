//! Named example configurations in `CH^2`.

use std::fmt;
use std::str::FromStr;

use crate::bending::{AmalgamSide, AmalgamSpec};
use crate::error::{GeomError, Result};
use crate::groups::{GroupGens, Sphere, SpherePacking};
use crate::heisenberg::{
    dilation_matrix, embed_isometry, horo_to_projective, inversion_matrix, translation_matrix, HeisPoint,
    HeisSimilarity, HoroPoint,
};
use crate::model::InvariantModel;
use crate::projective::{c, CMatrix, Isometry, ProjectivePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    CyclicVertical,
    CyclicHorizontal,
    Dilation,
    Z2Lattice,
    Schottky,
    Fuchsian,
    TwoSphere,
    Bend,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::CyclicVertical,
        Preset::CyclicHorizontal,
        Preset::Dilation,
        Preset::Z2Lattice,
        Preset::Schottky,
        Preset::Fuchsian,
        Preset::TwoSphere,
        Preset::Bend,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::CyclicVertical => "cyclic-vertical",
            Preset::CyclicHorizontal => "cyclic-horizontal",
            Preset::Dilation => "dilation",
            Preset::Z2Lattice => "z2-lattice",
            Preset::Schottky => "schottky",
            Preset::Fuchsian => "fuchsian",
            Preset::TwoSphere => "two-sphere",
            Preset::Bend => "bend",
        }
    }

    /// Generators of the preset group.
    pub fn group(&self) -> Result<GroupGens> {
        match self {
            Preset::CyclicVertical => GroupGens::from_isometries(vec![translation(c(0.0, 0.0), 1.0)]),
            Preset::CyclicHorizontal => GroupGens::from_isometries(vec![translation(c(1.0, 0.0), 0.0)]),
            Preset::Dilation => GroupGens::from_isometries(vec![dilation(DILATION_FACTOR)]),
            Preset::Z2Lattice => GroupGens::from_isometries(vec![
                translation(c(1.0, 0.0), 0.0),
                translation(c(0.0, 0.0), 1.0),
            ]),
            Preset::Schottky => {
                let inv: Vec<Isometry> = schottky_packing()?
                    .spheres()
                    .iter()
                    .map(|s| crate::groups::sphere_inversion(&s.center, s.radius))
                    .collect();
                GroupGens::from_isometries(vec![inv[0].compose(&inv[1]), inv[2].compose(&inv[3])])
            }
            Preset::Fuchsian => GroupGens::from_isometries(
                hexagon_sides()
                    .iter()
                    .map(|s| crate::groups::sphere_inversion(&s.center, s.radius))
                    .collect(),
            ),
            Preset::TwoSphere => {
                let packing = two_sphere_packing()?;
                GroupGens::from_isometries(
                    packing
                        .spheres()
                        .iter()
                        .map(|s| crate::groups::sphere_inversion(&s.center, s.radius))
                        .collect(),
                )
            }
            Preset::Bend => {
                let spec = bend_spec()?;
                crate::bending::deform_group(&spec, 0.0)
            }
        }
    }

    /// The default Dirichlet center / orbit basepoint: `(0, 0, 1)`.
    pub fn center(&self) -> ProjectivePoint {
        horo_to_projective(&HoroPoint::planar(c(0.0, 0.0), 0.0, 1.0))
    }

    /// Invariant model for the slice census, for parabolic presets.
    pub fn model(&self) -> Option<InvariantModel> {
        match self {
            Preset::CyclicVertical => Some(InvariantModel::VerticalAxis),
            Preset::CyclicHorizontal => Some(InvariantModel::HorizontalLine),
            Preset::Z2Lattice => Some(InvariantModel::RealPlane),
            _ => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| GeomError::InvalidSpec(format!("unknown preset {s:?}")))
    }
}

/// Boundary scaling of the dilation preset; its translation length is `2 ln` of it.
pub const DILATION_FACTOR: f64 = 1.648_721_270_700_128_1;

fn translation(xi: crate::projective::C64, v: f64) -> Isometry {
    embed_isometry(&HeisSimilarity::translation(HeisPoint::planar(xi, v))).expect("unitary identity rotation")
}

fn dilation(r: f64) -> Isometry {
    Isometry::new(dilation_matrix(2, r)).expect("dilations preserve the form")
}

/// Spheres of radius 1 centered at `±3` and `±3i`.
pub fn schottky_packing() -> Result<SpherePacking> {
    let sphere = |x: f64, y: f64| Sphere {
        center: HeisPoint::planar(c(x, y), 0.0),
        radius: 1.0,
    };
    SpherePacking::new(vec![sphere(3.0, 0.0), sphere(-3.0, 0.0), sphere(0.0, 3.0), sphere(0.0, -3.0)])
}

/// Spheres of radius 1 centered at `(±3, 0)`.
pub fn two_sphere_packing() -> Result<SpherePacking> {
    let sphere = |x: f64| Sphere {
        center: HeisPoint::planar(c(x, 0.0), 0.0),
        radius: 1.0,
    };
    SpherePacking::new(vec![sphere(3.0), sphere(-3.0)])
}

/// Sides of a regular right-angled hexagon in the real hyperbolic plane, as
/// spheres centered on the real axis. The disk-model sides are circles of radius
/// 1 centered at `√2·e^{ikπ/3}`; their endpoints `e^{iθ}` map to `−cot(θ/2)`.
pub fn hexagon_sides() -> Vec<Sphere> {
    (0..6)
        .map(|k| {
            let phi = k as f64 * std::f64::consts::FRAC_PI_3;
            let end = |t: f64| -1.0 / (t / 2.0).tan();
            let (p, q) = (end(phi - std::f64::consts::FRAC_PI_4), end(phi + std::f64::consts::FRAC_PI_4));
            Sphere {
                center: HeisPoint::planar(c((p + q) / 2.0, 0.0), 0.0),
                radius: (p - q).abs() / 2.0,
            }
        })
        .collect()
}

/// Real loxodromic with boundary fixed points `p` and `q` on the real axis and
/// multiplier `k`: `C δ_k C⁻¹` with `C = T_q ∘ I ∘ T_{1/(p−q)}`.
pub fn real_loxodromic(p: f64, q: f64, k: f64) -> Result<Isometry> {
    if p == q {
        return Err(GeomError::InvalidSpec("fixed points must differ".into()));
    }
    let s = 1.0 / (p - q);
    let t = |x: f64| translation_matrix(&HeisPoint::planar(c(x, 0.0), 0.0));
    let conj: CMatrix = t(q) * inversion_matrix(2) * t(s);
    let conj_inv: CMatrix = t(-s) * inversion_matrix(2) * t(-q);
    Isometry::new(conj * dilation_matrix(2, k) * conj_inv)
}

/// HNN decomposition of a rank-three real Schottky group: `g_α = δ_10`,
/// `G_1 = <g_α, h>` with `h` fixing `−3, −5`, and `g_2` fixing `3, 5`.
pub fn bend_spec() -> Result<AmalgamSpec> {
    let g_alpha = dilation(10.0);
    let h = real_loxodromic(-3.0, -5.0, 50.0)?;
    let g2 = real_loxodromic(3.0, 5.0, 50.0)?;
    AmalgamSpec::new(g_alpha, AmalgamSide::Hnn { g1: vec![h], g2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{heis_to_projective, projective_to_heis};

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            assert!(p.group().is_ok(), "{p}");
        }
        assert!("nope".parse::<Preset>().is_err());
    }

    #[test]
    fn real_loxodromic_fixes_its_points() {
        let g = real_loxodromic(3.0, 5.0, 50.0).unwrap();
        for x in [3.0, 5.0] {
            let p = heis_to_projective(&HeisPoint::planar(c(x, 0.0), 0.0));
            assert!(g.apply(&p).unwrap().proj_eq(&p));
        }
        // Points near p are pushed towards q.
        let img = projective_to_heis(&g.apply(&heis_to_projective(&HeisPoint::planar(c(3.1, 0.0), 0.0))).unwrap())
            .unwrap();
        assert!((img.xi[0].re - 5.0).abs() < 0.6);
    }

    #[test]
    fn hexagon_sides_meet_at_right_angles() {
        // Adjacent boundary circles orthogonal: d² = r₁² + r₂².
        let s = hexagon_sides();
        for k in 0..6 {
            let (a, b) = (&s[k], &s[(k + 1) % 6]);
            let d = (a.center.xi[0].re - b.center.xi[0].re).abs();
            assert!((d * d - a.radius.powi(2) - b.radius.powi(2)).abs() < 1e-9, "{k}");
        }
        let g = Preset::Fuchsian.group().unwrap();
        for l in g.letters() {
            let m = g.letter_isometry(l).matrix();
            assert!(m.iter().all(|z| z.im.abs() < 1e-12));
        }
    }

    #[test]
    fn dilation_preset_has_unit_translation_length() {
        assert!((2.0 * DILATION_FACTOR.ln() - 1.0).abs() < 1e-15);
    }
}
