//! Invariant subgroup models `H_∞ ⊂ H_n` used by cusp neighborhoods and the
//! slice census of parabolic groups.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::heisenberg::{cygan_dist, HeisPoint, HoroPoint};
use crate::projective::{c, CVector};

/// A connected subgroup of `H_n` through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantModel {
    /// The center `{(0, v)}`.
    VerticalAxis,
    /// `{(t e_1, 0) : t ∈ R}`.
    HorizontalLine,
    /// `C^{n-1} × {0}` (a subgroup only for `n = 1`; used as a coordinate slice).
    FullHorizontal,
    /// `R^{n-1} × R`, the real horizontal directions together with the center.
    RealPlane,
}

impl fmt::Display for InvariantModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvariantModel::VerticalAxis => "vertical-axis",
            InvariantModel::HorizontalLine => "horizontal-line",
            InvariantModel::FullHorizontal => "full-horizontal",
            InvariantModel::RealPlane => "real-plane",
        };
        f.write_str(s)
    }
}

impl FromStr for InvariantModel {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertical-axis" => Ok(InvariantModel::VerticalAxis),
            "horizontal-line" => Ok(InvariantModel::HorizontalLine),
            "full-horizontal" => Ok(InvariantModel::FullHorizontal),
            "real-plane" => Ok(InvariantModel::RealPlane),
            other => Err(GeomError::InvalidSpec(format!("unknown invariant model {other:?}"))),
        }
    }
}

impl InvariantModel {
    /// Real dimension of the model inside `H_n`.
    pub fn real_dim(&self, n: usize) -> usize {
        match self {
            InvariantModel::VerticalAxis | InvariantModel::HorizontalLine => 1,
            InvariantModel::FullHorizontal => 2 * (n - 1),
            InvariantModel::RealPlane => n,
        }
    }

    /// The model point with the given real coordinates, placed at height `u`.
    pub fn point(&self, n: usize, coords: &[f64], u: f64) -> HoroPoint {
        assert_eq!(coords.len(), self.real_dim(n));
        let mut xi = CVector::zeros(n - 1);
        let mut v = 0.0;
        match self {
            InvariantModel::VerticalAxis => v = coords[0],
            InvariantModel::HorizontalLine => xi[0] = c(coords[0], 0.0),
            InvariantModel::FullHorizontal => {
                for k in 0..n - 1 {
                    xi[k] = c(coords[2 * k], coords[2 * k + 1]);
                }
            }
            InvariantModel::RealPlane => {
                for k in 0..n - 1 {
                    xi[k] = c(coords[k], 0.0);
                }
                v = coords[n - 1];
            }
        }
        HoroPoint { xi, v, u }
    }

    /// Whether a boundary point lies on the model.
    pub fn contains(&self, p: &HeisPoint, tol: f64) -> bool {
        let k = p.xi.len();
        match self {
            InvariantModel::VerticalAxis => p.xi.norm() <= tol,
            InvariantModel::HorizontalLine => {
                p.v.abs() <= tol && p.xi[0].im.abs() <= tol && (1..k).all(|j| p.xi[j].norm() <= tol)
            }
            InvariantModel::FullHorizontal => p.v.abs() <= tol,
            InvariantModel::RealPlane => p.xi.iter().all(|z| z.im.abs() <= tol),
        }
    }

    /// Coordinate projection onto the model, then onto the slice `u = u0`.
    pub fn project(&self, p: &HoroPoint, u0: f64) -> HoroPoint {
        let k = p.xi.len();
        let mut xi = CVector::zeros(k);
        let mut v = 0.0;
        match self {
            InvariantModel::VerticalAxis => v = p.v,
            InvariantModel::HorizontalLine => xi[0] = c(p.xi[0].re, 0.0),
            InvariantModel::FullHorizontal => xi.copy_from(&p.xi),
            InvariantModel::RealPlane => {
                xi = p.xi.map(|z| c(z.re, 0.0));
                v = p.v;
            }
        }
        HoroPoint { xi, v, u: u0 }
    }

    /// `inf_{h ∈ model} ρ_c(h, p)`.
    pub fn cygan_distance(&self, p: &HoroPoint) -> f64 {
        match self {
            InvariantModel::VerticalAxis => (p.xi.norm_squared() + p.u).sqrt(),
            InvariantModel::RealPlane => {
                let im: f64 = p.xi.iter().map(|z| z.im * z.im).sum();
                (im + p.u).sqrt()
            }
            InvariantModel::HorizontalLine => {
                let x0 = p.xi[0].re;
                let f = |t: f64| {
                    let mut h = CVector::zeros(p.xi.len());
                    h[0] = c(t, 0.0);
                    let a = HoroPoint { xi: h, v: 0.0, u: 0.0 };
                    cygan_dist(&a, p).expect("same dimension").powi(4)
                };
                let reach = f(x0).powf(0.25) + 1e-12;
                golden_min(f, x0 - reach, x0 + reach).powf(0.25)
            }
            InvariantModel::FullHorizontal => {
                // With h = ξ + β·iξ/|ξ| the twist is 2β|ξ| − v; the optimal
                // displacement is along iξ, reducing to one variable.
                let r = p.xi.norm();
                if r == 0.0 {
                    return c(p.u, p.v).norm().sqrt();
                }
                let f = |b: f64| (b * b + p.u).powi(2) + (2.0 * b * r - p.v).powi(2);
                let reach = f(0.0).powf(0.25) + 1e-12;
                golden_min(f, -reach, reach).powf(0.25)
            }
        }
    }
}

/// Minimum value of a convex function on `[a, b]` by golden-section search.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    f1.min(f2).min(f(a)).min(f(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(model: InvariantModel, p: &HoroPoint) -> f64 {
        // Dense grid over the model near the projection.
        let n = p.dim();
        let base = model.project(p, 0.0);
        let mut best = f64::INFINITY;
        let steps = 400;
        let span = 4.0;
        let dim = model.real_dim(n);
        assert!(dim <= 2);
        let grid = |i: usize| -span + 2.0 * span * i as f64 / steps as f64;
        let centre: Vec<f64> = match model {
            InvariantModel::VerticalAxis => vec![base.v],
            InvariantModel::HorizontalLine => vec![base.xi[0].re],
            InvariantModel::FullHorizontal => vec![base.xi[0].re, base.xi[0].im],
            InvariantModel::RealPlane => vec![base.xi[0].re, base.v],
        };
        if dim == 1 {
            for i in 0..=steps {
                let q = model.point(n, &[centre[0] + grid(i)], 0.0);
                best = best.min(cygan_dist(&q, p).unwrap());
            }
        } else {
            for i in 0..=steps {
                for j in 0..=steps {
                    let q = model.point(n, &[centre[0] + grid(i), centre[1] + grid(j)], 0.0);
                    best = best.min(cygan_dist(&q, p).unwrap());
                }
            }
        }
        best
    }

    #[test]
    fn distances_match_brute_force() {
        let pts = [
            HoroPoint::planar(c(1.0, 2.0), 5.0, 3.0),
            HoroPoint::planar(c(-0.3, 0.7), -1.2, 0.0),
            HoroPoint::planar(c(0.0, 0.0), 2.0, 0.5),
            HoroPoint::planar(c(0.4, -0.1), 0.3, 0.2),
        ];
        for model in [
            InvariantModel::VerticalAxis,
            InvariantModel::HorizontalLine,
            InvariantModel::FullHorizontal,
            InvariantModel::RealPlane,
        ] {
            for p in &pts {
                let exact = model.cygan_distance(p);
                let grid = brute(model, p);
                assert!(exact <= grid + 1e-12, "{model} {p:?}: {exact} > {grid}");
                assert!(grid - exact < 0.05, "{model} {p:?}: {exact} vs {grid}");
            }
        }
    }

    #[test]
    fn projections_of_worked_examples() {
        let p = HoroPoint::planar(c(1.0, 2.0), 5.0, 3.0);
        let h = InvariantModel::HorizontalLine.project(&p, 1.0);
        assert_eq!((h.xi[0], h.v, h.u), (c(1.0, 0.0), 0.0, 1.0));
        let vax = InvariantModel::VerticalAxis.project(&p, 2.0);
        assert_eq!((vax.xi[0], vax.v, vax.u), (c(0.0, 0.0), 5.0, 2.0));
    }

    #[test]
    fn projection_is_idempotent_on_slice() {
        let p = HoroPoint::planar(c(0.3, -0.2), 1.5, 0.7);
        for model in [
            InvariantModel::VerticalAxis,
            InvariantModel::HorizontalLine,
            InvariantModel::FullHorizontal,
            InvariantModel::RealPlane,
        ] {
            let once = model.project(&p, 0.7);
            assert_eq!(model.project(&once, 0.7), once);
        }
    }

    #[test]
    fn names_round_trip() {
        for s in ["vertical-axis", "horizontal-line", "full-horizontal", "real-plane"] {
            assert_eq!(s.parse::<InvariantModel>().unwrap().to_string(), s);
        }
        assert!("diagonal".parse::<InvariantModel>().is_err());
    }
}
