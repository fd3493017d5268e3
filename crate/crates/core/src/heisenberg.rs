//! The Heisenberg group `H_n = C^{n-1} × R`, its Cygan metric, horospherical
//! coordinates and the embedding of `H_n ⋊ (U(n-1) × R_+)` into `U(n,1)`.
//!
//! Group law: `(ξ, v)·(ξ', v') = (ξ + ξ', v + v' + 2 Im <<ξ, ξ'>>)` with
//! `<<x, y>> = Σ x_k conj(y_k)`.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::projective::{c, form, CMatrix, CVector, Isometry, ProjectivePoint, C64};

/// Tolerance on `A†A = I` for the rotation part of a similarity.
pub const UNITARY_TOL: f64 = 1e-10;

/// `<<x, y>> = Σ x_k conj(y_k)`.
pub fn herm_std(x: &CVector, y: &CVector) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// A point `(ξ, v)` of the Heisenberg group (a finite boundary point of `CH^n`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisPoint {
    pub xi: CVector,
    pub v: f64,
}

/// Horospherical coordinates `(ξ, v, u)` with height `u ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoroPoint {
    pub xi: CVector,
    pub v: f64,
    pub u: f64,
}

impl HeisPoint {
    pub fn new(xi: CVector, v: f64) -> Self {
        HeisPoint { xi, v }
    }

    pub fn origin(n: usize) -> Self {
        HeisPoint {
            xi: CVector::zeros(n - 1),
            v: 0.0,
        }
    }

    /// Convenience constructor for `n = 2`.
    pub fn planar(xi: C64, v: f64) -> Self {
        HeisPoint {
            xi: CVector::from_element(1, xi),
            v,
        }
    }

    /// Complex dimension `n` of the ambient space.
    pub fn dim(&self) -> usize {
        self.xi.len() + 1
    }

    pub fn inverse(&self) -> HeisPoint {
        HeisPoint {
            xi: -&self.xi,
            v: -self.v,
        }
    }

    pub fn at_height(&self, u: f64) -> HoroPoint {
        HoroPoint {
            xi: self.xi.clone(),
            v: self.v,
            u,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.xi.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl HoroPoint {
    pub fn new(xi: CVector, v: f64, u: f64) -> Result<Self> {
        if !(u >= 0.0) || !u.is_finite() {
            return Err(GeomError::InvalidPoint(format!("height must be finite and nonnegative, got {u}")));
        }
        Ok(HoroPoint { xi, v, u })
    }

    pub fn planar(xi: C64, v: f64, u: f64) -> Self {
        HoroPoint {
            xi: CVector::from_element(1, xi),
            v,
            u,
        }
    }

    pub fn dim(&self) -> usize {
        self.xi.len() + 1
    }

    pub fn base(&self) -> HeisPoint {
        HeisPoint {
            xi: self.xi.clone(),
            v: self.v,
        }
    }

    pub fn is_boundary(&self) -> bool {
        self.u == 0.0
    }
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(GeomError::dim(a, b))
    } else {
        Ok(())
    }
}

pub fn heis_mul(a: &HeisPoint, b: &HeisPoint) -> Result<HeisPoint> {
    check_same(a.xi.len(), b.xi.len())?;
    Ok(HeisPoint {
        xi: &a.xi + &b.xi,
        v: a.v + b.v + 2.0 * herm_std(&a.xi, &b.xi).im,
    })
}

/// Left translation `T_a` acting on horospherical coordinates (height preserved).
pub fn heis_translate(a: &HeisPoint, p: &HoroPoint) -> Result<HoroPoint> {
    check_same(a.xi.len(), p.xi.len())?;
    Ok(HoroPoint {
        xi: &a.xi + &p.xi,
        v: a.v + p.v + 2.0 * herm_std(&a.xi, &p.xi).im,
        u: p.u,
    })
}

/// `| ‖ξ‖² + u − i v |^{1/2}`.
pub fn cygan_norm(p: &HoroPoint) -> f64 {
    c(p.xi.norm_squared() + p.u, -p.v).norm().sqrt()
}

pub fn cygan_norm_boundary(p: &HeisPoint) -> f64 {
    c(p.xi.norm_squared(), -p.v).norm().sqrt()
}

/// Cygan distance; on the boundary this is `‖a⁻¹·b‖_c`, in the interior the
/// height difference `|u_a − u_b|` joins the real part.
pub fn cygan_dist(a: &HoroPoint, b: &HoroPoint) -> Result<f64> {
    check_same(a.xi.len(), b.xi.len())?;
    let dxi = (&a.xi - &b.xi).norm_squared();
    let twist = a.v - b.v + 2.0 * herm_std(&a.xi, &b.xi).im;
    Ok(c(dxi + (a.u - b.u).abs(), -twist).norm().sqrt())
}

pub fn cygan_dist_boundary(a: &HeisPoint, b: &HeisPoint) -> Result<f64> {
    cygan_dist(&a.at_height(0.0), &b.at_height(0.0))
}

/// Heisenberg inversion `(ξ, v) ↦ (ξ / (|ξ|² − iv), −v / (v² + |ξ|⁴))`.
pub fn heis_inversion(p: &HeisPoint) -> Result<HeisPoint> {
    let out = horo_inversion(&p.at_height(0.0))?;
    Ok(out.base())
}

/// The same inversion extended to horospherical coordinates: with
/// `w = ‖ξ‖² + u − iv`, `(ξ, v, u) ↦ (ξ/w, −v/|w|², u/|w|²)`.
pub fn horo_inversion(p: &HoroPoint) -> Result<HoroPoint> {
    let w = c(p.xi.norm_squared() + p.u, -p.v);
    let w2 = w.norm_sqr();
    if w2 == 0.0 {
        return Err(GeomError::Pole);
    }
    Ok(HoroPoint {
        xi: p.xi.map(|z| z / w),
        v: -p.v / w2,
        u: p.u / w2,
    })
}

/// Dilation `δ_r(ξ, v, u) = (rξ, r²v, r²u)`.
pub fn heis_dilate(r: f64, p: &HoroPoint) -> HoroPoint {
    HoroPoint {
        xi: &p.xi * C64::from(r),
        v: r * r * p.v,
        u: r * r * p.u,
    }
}

/// A Heisenberg similarity `p ↦ T_t(δ_r(A p))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisSimilarity {
    pub rotation: CMatrix,
    pub translation: HeisPoint,
    pub dilation: f64,
}

impl HeisSimilarity {
    pub fn new(rotation: CMatrix, translation: HeisPoint, dilation: f64) -> Result<Self> {
        let k = translation.xi.len();
        if rotation.nrows() != k || rotation.ncols() != k {
            return Err(GeomError::dim(k, rotation.nrows()));
        }
        if !(dilation > 0.0) || !dilation.is_finite() {
            return Err(GeomError::InvalidSpec(format!("dilation must be positive, got {dilation}")));
        }
        let defect = unitary_defect(&rotation);
        if defect > UNITARY_TOL {
            return Err(GeomError::NonUnitary { defect });
        }
        Ok(HeisSimilarity {
            rotation,
            translation,
            dilation,
        })
    }

    pub fn identity(n: usize) -> Self {
        HeisSimilarity {
            rotation: CMatrix::identity(n - 1, n - 1),
            translation: HeisPoint::origin(n),
            dilation: 1.0,
        }
    }

    pub fn translation(t: HeisPoint) -> Self {
        let k = t.xi.len();
        HeisSimilarity {
            rotation: CMatrix::identity(k, k),
            translation: t,
            dilation: 1.0,
        }
    }

    pub fn dilation(n: usize, r: f64) -> Result<Self> {
        Self::new(CMatrix::identity(n - 1, n - 1), HeisPoint::origin(n), r)
    }

    pub fn rotation(a: CMatrix) -> Result<Self> {
        let n = a.nrows() + 1;
        Self::new(a, HeisPoint::origin(n), 1.0)
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &HeisSimilarity) -> Result<HeisSimilarity> {
        check_same(self.translation.xi.len(), other.translation.xi.len())?;
        let r1 = self.dilation;
        let moved = HeisPoint {
            xi: (&self.rotation * &other.translation.xi) * C64::from(r1),
            v: r1 * r1 * other.translation.v,
        };
        Ok(HeisSimilarity {
            rotation: &self.rotation * &other.rotation,
            translation: heis_mul(&self.translation, &moved)?,
            dilation: r1 * other.dilation,
        })
    }

    pub fn inverse(&self) -> HeisSimilarity {
        let a_inv = self.rotation.adjoint();
        let r_inv = 1.0 / self.dilation;
        let t_inv = self.translation.inverse();
        HeisSimilarity {
            translation: HeisPoint {
                xi: (&a_inv * &t_inv.xi) * C64::from(r_inv),
                v: r_inv * r_inv * t_inv.v,
            },
            rotation: a_inv,
            dilation: r_inv,
        }
    }

    pub fn is_translation(&self) -> bool {
        let k = self.rotation.nrows();
        self.dilation == 1.0 && (&self.rotation - CMatrix::identity(k, k)).camax() < UNITARY_TOL
    }
}

fn unitary_defect(a: &CMatrix) -> f64 {
    let k = a.nrows();
    (a.adjoint() * a - CMatrix::identity(k, k)).camax()
}

pub fn heis_similarity_apply(s: &HeisSimilarity, p: &HoroPoint) -> Result<HoroPoint> {
    check_same(s.translation.xi.len(), p.xi.len())?;
    let rotated = HoroPoint {
        xi: &s.rotation * &p.xi,
        v: p.v,
        u: p.u,
    };
    heis_translate(&s.translation, &heis_dilate(s.dilation, &rotated))
}

/// Block matrix of a Heisenberg translation `(ξ, v)` in `U(n,1)`.
pub fn translation_matrix(t: &HeisPoint) -> CMatrix {
    let k = t.xi.len();
    let n = k + 1;
    let a = c(t.xi.norm_squared(), -t.v) * 0.5;
    let mut m = CMatrix::identity(n + 1, n + 1);
    for i in 0..k {
        m[(i, n - 1)] = t.xi[i];
        m[(i, n)] = t.xi[i];
        m[(n - 1, i)] = -t.xi[i].conj();
        m[(n, i)] = t.xi[i].conj();
    }
    m[(n - 1, n - 1)] = c(1.0, 0.0) - a;
    m[(n - 1, n)] = -a;
    m[(n, n - 1)] = a;
    m[(n, n)] = c(1.0, 0.0) + a;
    m
}

/// `blockdiag(A, 1, 1)`.
pub fn rotation_matrix(a: &CMatrix) -> CMatrix {
    let k = a.nrows();
    let mut m = CMatrix::identity(k + 2, k + 2);
    m.view_mut((0, 0), (k, k)).copy_from(a);
    m
}

/// Boost in the last two coordinates realizing `δ_r`; fixes `[0', 1/2, 1/2]` and `∞`.
pub fn dilation_matrix(n: usize, r: f64) -> CMatrix {
    let s = r.ln();
    let mut m = CMatrix::identity(n + 1, n + 1);
    m[(n - 1, n - 1)] = c(s.cosh(), 0.0);
    m[(n, n)] = c(s.cosh(), 0.0);
    m[(n - 1, n)] = c(-s.sinh(), 0.0);
    m[(n, n - 1)] = c(-s.sinh(), 0.0);
    m
}

/// Matrix realization `diag(1, …, 1, −1, 1)` of the Heisenberg inversion.
pub fn inversion_matrix(n: usize) -> CMatrix {
    let mut m = CMatrix::identity(n + 1, n + 1);
    m[(n - 1, n - 1)] = c(-1.0, 0.0);
    m
}

pub fn inversion_isometry(n: usize) -> Isometry {
    Isometry::from_matrix_unchecked(inversion_matrix(n))
}

pub fn embed_isometry(s: &HeisSimilarity) -> Result<Isometry> {
    let defect = unitary_defect(&s.rotation);
    if defect > UNITARY_TOL {
        return Err(GeomError::NonUnitary { defect });
    }
    let n = s.dim();
    let m = translation_matrix(&s.translation) * dilation_matrix(n, s.dilation) * rotation_matrix(&s.rotation);
    Ok(Isometry::from_matrix_unchecked(m))
}

/// Lift `(ξ, (1 − ‖ξ‖² − u + iv)/2, (1 + ‖ξ‖² + u − iv)/2)`; satisfies `<z,z> = −u`.
pub fn horo_lift(p: &HoroPoint) -> CVector {
    let k = p.xi.len();
    let b = c(p.xi.norm_squared() + p.u, -p.v) * 0.5;
    let mut z = CVector::zeros(k + 2);
    z.rows_mut(0, k).copy_from(&p.xi);
    z[k] = c(0.5, 0.0) - b;
    z[k + 1] = c(0.5, 0.0) + b;
    z
}

pub fn horo_to_projective(p: &HoroPoint) -> ProjectivePoint {
    ProjectivePoint::from_lift_unchecked(horo_lift(p))
}

pub fn heis_to_projective(p: &HeisPoint) -> ProjectivePoint {
    horo_to_projective(&p.at_height(0.0))
}

/// Inverse of [`horo_to_projective`]; negative heights produced by rounding
/// on null lines are clamped to zero.
pub fn projective_to_horo(p: &ProjectivePoint) -> Result<HoroPoint> {
    let z = p.lift();
    let n = p.dim();
    let scale = z[n - 1] + z[n];
    if scale.norm() <= 1e-12 * z.norm() {
        return Err(GeomError::PointAtInfinity);
    }
    let zn = z.map(|x| x / scale);
    let xi = zn.rows(0, n - 1).into_owned();
    let b = zn[n] - c(0.5, 0.0);
    let u = 2.0 * b.re - xi.norm_squared();
    let v = -2.0 * b.im;
    let u = if u.abs() <= 1e-9 * (1.0 + xi.norm_squared() + v.abs()) { 0.0 } else { u };
    if u < 0.0 {
        return Err(GeomError::Domain("positive line has no horospherical coordinates".into()));
    }
    Ok(HoroPoint { xi, v, u })
}

/// Boundary coordinates of a null line; for negative lines the height is
/// dropped (vertical projection to the boundary).
pub fn projective_to_heis(p: &ProjectivePoint) -> Result<HeisPoint> {
    Ok(projective_to_horo(p)?.base())
}

/// Bergman distance between two points on the same horosphere `u = const`:
/// with `(ξ, v) = a⁻¹·b`, `cosh²(d/2) = (|ξ|⁴ + 4u|ξ|² + 4u² + v²) / 4u²`.
pub fn horosphere_distance(a: &HoroPoint, b: &HoroPoint) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(GeomError::dim(a.dim() + 1, b.dim() + 1));
    }
    if !(a.u > 0.0) || a.u != b.u {
        return Err(GeomError::InvalidPoint("points must share a positive height".into()));
    }
    let rel = heis_mul(&a.base().inverse(), &b.base())?;
    let (r2, u) = (rel.xi.norm_squared(), a.u);
    let ch2 = (r2 * r2 + 4.0 * u * r2 + 4.0 * u * u + rel.v * rel.v) / (4.0 * u * u);
    Ok(2.0 * ch2.sqrt().max(1.0).acosh())
}

/// `inf_t ρ_c((0, t, 0), p) = (‖ξ‖² + u)^{1/2}`.
pub fn dist_to_vertical_axis(p: &HoroPoint) -> f64 {
    (p.xi.norm_squared() + p.u).sqrt()
}

pub fn rotational_part(s: &HeisSimilarity) -> CMatrix {
    s.rotation.clone()
}

/// Sanity value `<z,z> + u` for a horospherical lift; zero up to rounding.
pub fn horo_lift_defect(p: &HoroPoint) -> f64 {
    let z = horo_lift(p);
    (form(&z, &z).re + p.u).abs()
}
