//! The projective model of complex hyperbolic space.
//!
//! Points of `CH^n` are negative lines in `C^{n,1}`, boundary points are
//! null lines. The Hermitian form is fixed once and for all as
//!
//! ```text
//! <z, w> = z_1 conj(w_1) + ... + z_n conj(w_n) - z_{n+1} conj(w_{n+1})
//! ```
//!
//! (linear in the first slot), i.e. `J = diag(1, ..., 1, -1)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance on `‖M†JM − J‖∞` for a matrix to count as a form isometry.
pub const FORM_TOL: f64 = 1e-10;
/// Relative band `|<z,z>| / ‖z‖²` below which a line counts as null.
pub const NULL_TOL: f64 = 1e-12;
/// Threshold for projective equality of two lifts.
pub const PROJ_EQ_TOL: f64 = 1e-9;
/// Modulus band separating loxodromic spectra from unit-modulus spectra.
pub const SPECTRAL_TOL: f64 = 1e-8;

const CLUSTER_TOL: f64 = 1e-4;
const NULLITY_TOL: f64 = 1e-7;
const NULLITY_GRAY: f64 = 1e-5;
/// Singular value below which stacked unit eigenvectors count as dependent.
const SPAN_TOL: f64 = 1e-2;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The signature data `(n, 1)` of the form; `n` is the complex dimension of `CH^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSignature {
    n: usize,
}

impl Default for FormSignature {
    fn default() -> Self {
        FormSignature { n: 2 }
    }
}

impl FormSignature {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GeomError::InvalidSpec("complex dimension n must be at least 1".into()));
        }
        Ok(FormSignature { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Length of lift vectors, `n + 1`.
    pub fn lift_len(&self) -> usize {
        self.n + 1
    }

    pub fn j_matrix(&self) -> CMatrix {
        j_matrix(self.n)
    }
}

/// `J = diag(1, ..., 1, -1)` of size `n + 1`.
pub fn j_matrix(n: usize) -> CMatrix {
    let mut j = CMatrix::identity(n + 1, n + 1);
    j[(n, n)] = c(-1.0, 0.0);
    j
}

/// Unchecked form evaluation; callers guarantee equal lengths.
#[inline]
pub(crate) fn form(z: &CVector, w: &CVector) -> C64 {
    let last = z.len() - 1;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..last {
        acc += z[k] * w[k].conj();
    }
    acc - z[last] * w[last].conj()
}

/// The indefinite Hermitian form `<z, w>`.
pub fn herm_inner(z: &CVector, w: &CVector) -> Result<C64> {
    if z.len() != w.len() {
        return Err(GeomError::dim(z.len(), w.len()));
    }
    if z.len() < 2 {
        return Err(GeomError::dim(2, z.len()));
    }
    Ok(form(z, w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    Negative,
    Null,
    Positive,
}

/// A complex line in `C^{n,1}`, stored through a nonzero lift.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    lift: CVector,
}

impl ProjectivePoint {
    pub fn new(lift: CVector) -> Result<Self> {
        if lift.len() < 2 {
            return Err(GeomError::InvalidPoint("lift must have length at least 2".into()));
        }
        if lift.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeomError::InvalidPoint("lift has non-finite entries".into()));
        }
        if lift.iter().all(|z| z.norm() == 0.0) {
            return Err(GeomError::InvalidPoint("zero lift".into()));
        }
        Ok(ProjectivePoint { lift })
    }

    pub fn from_slice(entries: &[C64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(entries))
    }

    pub(crate) fn from_lift_unchecked(lift: CVector) -> Self {
        ProjectivePoint { lift }
    }

    /// The boundary point `∞ = [0', -1, 1]`.
    pub fn infinity(n: usize) -> Self {
        let mut lift = CVector::zeros(n + 1);
        lift[n - 1] = c(-1.0, 0.0);
        lift[n] = c(1.0, 0.0);
        ProjectivePoint { lift }
    }

    /// The Heisenberg origin `[0', 1/2, 1/2]`.
    pub fn heisenberg_origin(n: usize) -> Self {
        let mut lift = CVector::zeros(n + 1);
        lift[n - 1] = c(0.5, 0.0);
        lift[n] = c(0.5, 0.0);
        ProjectivePoint { lift }
    }

    /// The center `[0, ..., 0, 1]` of the ball model.
    pub fn ball_origin(n: usize) -> Self {
        let mut lift = CVector::zeros(n + 1);
        lift[n] = c(1.0, 0.0);
        ProjectivePoint { lift }
    }

    pub fn lift(&self) -> &CVector {
        &self.lift
    }

    pub fn into_lift(self) -> CVector {
        self.lift
    }

    /// Complex dimension `n` of the ambient `CH^n`.
    pub fn dim(&self) -> usize {
        self.lift.len() - 1
    }

    pub fn self_inner(&self) -> f64 {
        form(&self.lift, &self.lift).re
    }

    pub fn class(&self) -> PointClass {
        let q = self.self_inner();
        let scale = self.lift.norm_squared();
        if q.abs() / scale < NULL_TOL {
            PointClass::Null
        } else if q < 0.0 {
            PointClass::Negative
        } else {
            PointClass::Positive
        }
    }

    pub fn is_negative(&self) -> bool {
        self.class() == PointClass::Negative
    }

    pub fn is_null(&self) -> bool {
        self.class() == PointClass::Null
    }

    /// Lift divided by its largest-modulus entry.
    pub fn normalized(&self) -> CVector {
        let (idx, _) = self
            .lift
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
        let pivot = self.lift[idx];
        self.lift.map(|z| z / pivot)
    }

    /// Lift of a negative point scaled to `<z,z> = -1` with real positive last entry.
    pub fn unit_lift(&self) -> Result<CVector> {
        let q = self.self_inner();
        if !(q < 0.0) {
            return Err(GeomError::Domain("unit lift requires a negative point".into()));
        }
        let last = self.lift[self.lift.len() - 1];
        let phase = last.conj() / last.norm();
        Ok(self.lift.map(|z| z * phase / (-q).sqrt()))
    }

    /// Projective equality via the wedge `a ∧ b` of the Euclidean-normalized lifts.
    pub fn proj_eq_tol(&self, other: &ProjectivePoint, tol: f64) -> bool {
        if self.lift.len() != other.lift.len() {
            return false;
        }
        wedge_norm(&self.lift, &other.lift) < tol
    }

    pub fn proj_eq(&self, other: &ProjectivePoint) -> bool {
        self.proj_eq_tol(other, PROJ_EQ_TOL)
    }
}

/// `max_{i<j} |a_i b_j − a_j b_i|` for unit-normalized `a`, `b`.
pub(crate) fn wedge_norm(z: &CVector, w: &CVector) -> f64 {
    let a = z / C64::from(z.norm());
    let b = w / C64::from(w.norm());
    let mut worst: f64 = 0.0;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            worst = worst.max((a[i] * b[j] - a[j] * b[i]).norm());
        }
    }
    worst
}

pub fn point_class(p: &ProjectivePoint) -> PointClass {
    p.class()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl std::fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Loxodromic => "loxodromic",
        };
        f.write_str(s)
    }
}

/// An element of `U(n,1)` representing a class in `PU(n,1)`.
///
/// Matrices are rescaled on construction so that `M†JM = J` holds exactly
/// up to rounding; this also makes `|det M| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: CMatrix,
    class_cache: Option<IsometryClass>,
}

impl Isometry {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let size = matrix.nrows();
        if size != matrix.ncols() {
            return Err(GeomError::dim(size, matrix.ncols()));
        }
        if size < 2 {
            return Err(GeomError::dim(2, size));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeomError::NotIsometry { defect: f64::INFINITY });
        }
        let n = size - 1;
        let j = j_matrix(n);
        let gram = matrix.adjoint() * &j * &matrix;
        let scale = -gram[(n, n)].re;
        if !(scale > 0.0) {
            return Err(GeomError::NotIsometry {
                defect: (gram - j).camax(),
            });
        }
        let m = matrix / C64::from(scale.sqrt());
        let defect = form_defect_of(&m);
        let allowed = FORM_TOL * m.camax().powi(2).max(1.0);
        if defect > allowed {
            return Err(GeomError::NotIsometry { defect });
        }
        Ok(Isometry {
            matrix: m,
            class_cache: None,
        })
    }

    /// Wraps a matrix already known to satisfy `M†JM = J` (products, inverses).
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Isometry {
            matrix,
            class_cache: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Isometry {
            matrix: CMatrix::identity(n + 1, n + 1),
            class_cache: Some(IsometryClass::Identity),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn class_cache(&self) -> Option<IsometryClass> {
        self.class_cache
    }

    /// Returns a copy carrying its classification tag.
    pub fn classified(mut self) -> Result<Self> {
        self.class_cache = Some(classify_isometry(&self)?);
        Ok(self)
    }

    pub fn form_defect(&self) -> f64 {
        form_defect_of(&self.matrix)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::from_matrix_unchecked(&self.matrix * &other.matrix)
    }

    /// `J M† J`, exact for form isometries.
    pub fn inverse(&self) -> Isometry {
        let n = self.dim();
        let mut inv = self.matrix.adjoint();
        for i in 0..=n {
            inv[(n, i)] = -inv[(n, i)];
            inv[(i, n)] = -inv[(i, n)];
        }
        Isometry {
            matrix: inv,
            class_cache: self.class_cache,
        }
    }

    pub fn conjugate_by(&self, g: &Isometry) -> Isometry {
        let mut out = g.compose(self).compose(&g.inverse());
        out.class_cache = self.class_cache;
        out
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn apply(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        projective_apply(self, p)
    }

    /// `min_θ ‖e^{iθ} M − I‖_F`, the projective distance to the identity.
    pub fn distance_to_identity(&self) -> f64 {
        let tr = self.matrix.trace();
        let phase = if tr.norm() > 0.0 { tr.conj() / tr.norm() } else { C64::new(1.0, 0.0) };
        let size = self.matrix.nrows();
        let mut acc = 0.0;
        for i in 0..size {
            for j in 0..size {
                let mut d = self.matrix[(i, j)] * phase;
                if i == j {
                    d -= 1.0;
                }
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_projective_identity(&self, tol: f64) -> bool {
        self.distance_to_identity() < tol * self.matrix.camax().max(1.0)
    }

    /// Projective equality of the induced transformations.
    pub fn proj_eq(&self, other: &Isometry, tol: f64) -> bool {
        if self.matrix.shape() != other.matrix.shape() {
            return false;
        }
        let a = CVector::from_column_slice(self.matrix.as_slice());
        let b = CVector::from_column_slice(other.matrix.as_slice());
        wedge_norm(&a, &b) < tol
    }
}

fn form_defect_of(m: &CMatrix) -> f64 {
    let n = m.nrows() - 1;
    let j = j_matrix(n);
    (m.adjoint() * &j * m - j).camax()
}

pub fn projective_apply(m: &Isometry, p: &ProjectivePoint) -> Result<ProjectivePoint> {
    if m.dim() != p.dim() {
        return Err(GeomError::dim(m.dim() + 1, p.lift.len()));
    }
    Ok(ProjectivePoint::from_lift_unchecked(&m.matrix * &p.lift))
}

/// Bergman distance (holomorphic curvature −1) via
/// `cosh²(d/2) = <z,w><w,z> / (<z,z><w,w>)`.
pub fn bergman_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(GeomError::dim(p.lift.len(), q.lift.len()));
    }
    // Deep orbit points sit inside the relative null band but still have a
    // strictly negative form value, which is all the formula needs.
    if !(p.self_inner() < 0.0) || !(q.self_inner() < 0.0) {
        return Err(GeomError::Domain("Bergman distance needs two points of CH^n".into()));
    }
    Ok(distance_between_lifts(&p.lift, &q.lift))
}

/// Distance for negative lifts; switches to the `sinh` form near the diagonal
/// where the cross-ratio loses digits.
pub(crate) fn distance_between_lifts(z: &CVector, w: &CVector) -> f64 {
    let zz = form(z, z).re;
    let ww = form(w, w).re;
    let zw = form(z, w);
    let cosh2 = zw.norm_sqr() / (zz * ww);
    if cosh2 > 1.5 {
        return 2.0 * cosh2.sqrt().acosh();
    }
    // z⊥ = z − (<z,w>/<w,w>) w lies in the positive complement of w.
    let perp = z - w * (zw / ww);
    let sinh2 = (form(&perp, &perp).re / -zz).max(0.0);
    2.0 * sinh2.sqrt().asinh()
}

/// Distance between unit lifts (`<z,z> = <w,w> = -1`); stable far from the origin.
#[allow(dead_code)]
pub(crate) fn distance_unit(z: &CVector, w: &CVector) -> f64 {
    let cosh_half = form(z, w).norm();
    if cosh_half > 1.2 {
        2.0 * cosh_half.acosh()
    } else {
        distance_between_lifts(z, w)
    }
}

/// An eigenvalue cluster: arithmetic mean, members, and the geometric mean of
/// the member moduli.
struct Cluster {
    mean: C64,
    members: Vec<C64>,
    modulus: f64,
}

/// Absolute error level of the spectrum: Schur rounding `ε·‖M‖²`, or the
/// form defect inherited from how the matrix was computed, if larger.
fn spectral_noise(m: &CMatrix) -> f64 {
    (f64::EPSILON * m.norm_squared()).max(form_defect_of(m))
}

/// Eigenvalue clusters of an isometry. A perturbation of size `e` splits a
/// Jordan block of size `k` by about `e^{1/k}`, so the clustering radius grows
/// with the noise; the product of a split cluster stays accurate.
fn eigen_clusters(m: &CMatrix) -> (Vec<C64>, Vec<Cluster>) {
    let eig: Vec<C64> = m
        .clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default();
    let radius = CLUSTER_TOL.max(10.0 * spectral_noise(m).cbrt());
    let mut clusters: Vec<Cluster> = Vec::new();
    for &lam in &eig {
        let tol = radius * lam.norm().max(1.0);
        match clusters.iter_mut().find(|cl| (cl.mean - lam).norm() < tol) {
            Some(cl) => {
                cl.members.push(lam);
                cl.mean = cl.members.iter().sum::<C64>() / cl.members.len() as f64;
            }
            None => clusters.push(Cluster {
                mean: lam,
                members: vec![lam],
                modulus: 0.0,
            }),
        }
    }
    for cl in &mut clusters {
        let log_sum: f64 = cl.members.iter().map(|z| z.norm().ln()).sum();
        cl.modulus = (log_sum / cl.members.len() as f64).exp();
    }
    (eig, clusters)
}

/// Whether a cluster's eigenvectors span its full algebraic multiplicity.
/// A tight cluster is tested at its mean; a split one by the numerical rank of
/// the eigenvectors of its members, which collapse for a perturbed Jordan block.
fn cluster_semisimple(m: &CMatrix, cl: &Cluster) -> std::result::Result<bool, ()> {
    let mult = cl.members.len();
    let spread = cl.members.iter().map(|z| (z - cl.mean).norm()).fold(0.0, f64::max);
    if spread <= CLUSTER_TOL * 1e-2 * cl.mean.norm().max(1.0) {
        let (basis, gray) = eigenspace(m, cl.mean);
        return if gray { Err(()) } else { Ok(basis.ncols() >= mult) };
    }
    let mut cols: Vec<CVector> = Vec::new();
    for &lam in &cl.members {
        let (basis, _) = eigenspace(m, lam);
        cols.extend(basis.column_iter().map(|c| c.into_owned()));
    }
    if cols.len() < mult {
        return Ok(false);
    }
    let sv = CMatrix::from_columns(&cols).singular_values();
    Ok(sv.iter().filter(|&&s| s > SPAN_TOL).count() >= mult)
}

/// Orthonormal basis (as columns) of the numerical kernel of `m − μI`, plus
/// a flag telling whether the kernel dimension is ambiguous.
///
/// The kernel is cut at the widest gap (ratio above `1e3`) just above a
/// singular value below `NULLITY_TOL·‖M‖`; a fixed threshold fails on badly
/// conditioned conjugates, whose genuine singular values can be tiny.
fn eigenspace(m: &CMatrix, mu: C64) -> (CMatrix, bool) {
    let size = m.nrows();
    let shifted = m - CMatrix::identity(size, size) * mu;
    let scale = m.camax().max(1.0);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i] / scale).collect();
    // Candidate cut k: the smallest `size − k` values form the kernel.
    let mut cut = None;
    let mut best = 1e3;
    for k in 0..size {
        let above = if k == 0 { f64::INFINITY } else { sv[k - 1] };
        if sv[k] >= NULLITY_TOL {
            continue;
        }
        let ratio = above / sv[k].max(f64::EPSILON);
        if ratio > best {
            best = ratio;
            cut = Some(k);
        }
    }
    let gray = cut.is_none() && sv[size - 1] < NULLITY_GRAY;
    let cols: Vec<CVector> = match cut {
        Some(k) => order[k..].iter().map(|&i| v_t.row(i).adjoint()).collect(),
        None => Vec::new(),
    };
    let basis = if cols.is_empty() {
        CMatrix::zeros(size, 0)
    } else {
        CMatrix::from_columns(&cols)
    };
    (basis, gray)
}

/// Classifies `M` as identity, elliptic, parabolic or loxodromic from its spectrum.
pub fn classify_isometry(m: &Isometry) -> Result<IsometryClass> {
    if m.is_projective_identity(1e-9) {
        return Ok(IsometryClass::Identity);
    }
    let (eig, clusters) = eigen_clusters(&m.matrix);
    if eig.len() != m.matrix.nrows() {
        return Err(GeomError::Borderline { eigenvalues: eig });
    }
    let deviation = clusters.iter().map(|cl| (cl.modulus - 1.0).abs()).fold(0.0, f64::max);
    let floor = spectral_noise(&m.matrix);
    if deviation > SPECTRAL_TOL.max(1e4 * floor) {
        return Ok(IsometryClass::Loxodromic);
    }
    if deviation > (SPECTRAL_TOL * 1e-2).max(1e2 * floor) {
        return Err(GeomError::Borderline { eigenvalues: eig });
    }
    let mut semisimple = true;
    for cl in &clusters {
        match cluster_semisimple(&m.matrix, cl) {
            Ok(s) => semisimple &= s,
            Err(()) => return Err(GeomError::Borderline { eigenvalues: eig }),
        }
    }
    Ok(if semisimple {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Parabolic
    })
}

/// Eigenvalues of the (normalized) matrix.
pub fn spectrum(m: &Isometry) -> Vec<C64> {
    eigen_clusters(&m.matrix).0
}

/// Null eigenvectors of `M`, deduplicated projectively.
///
/// Inside a higher-dimensional eigenspace the null cone is a sphere; there the
/// null vectors `e₊ ± e₋` built from the diagonalized restricted form are
/// returned, with each basis vector's largest entry made real positive.
pub fn boundary_fixed_points(m: &Isometry) -> Result<Vec<ProjectivePoint>> {
    if m.is_projective_identity(1e-9) {
        return Err(GeomError::DegenerateInput(
            "the identity fixes every boundary point".into(),
        ));
    }
    let n = m.dim();
    let j = j_matrix(n);
    let (_, clusters) = eigen_clusters(&m.matrix);
    let mut found: Vec<ProjectivePoint> = Vec::new();
    let push = |v: CVector, found: &mut Vec<ProjectivePoint>| {
        if v.norm() == 0.0 {
            return;
        }
        let p = ProjectivePoint::from_lift_unchecked(v);
        let q = p.self_inner().abs() / p.lift.norm_squared();
        if q < 1e-7 && !found.iter().any(|f| f.proj_eq_tol(&p, 1e-7)) {
            found.push(p);
        }
    };
    for cl in &clusters {
        let (basis, _) = eigenspace(&m.matrix, cl.mean);
        match basis.ncols() {
            0 => {}
            1 => push(basis.column(0).into_owned(), &mut found),
            _ => {
                let restricted = basis.adjoint() * &j * &basis;
                let eig = restricted.symmetric_eigen();
                let mut positive = Vec::new();
                let mut negative = Vec::new();
                for (k, lam) in eig.eigenvalues.iter().enumerate() {
                    let v = phase_fixed(&basis * eig.eigenvectors.column(k));
                    if lam.abs() < 1e-8 {
                        push(v, &mut found);
                    } else if *lam > 0.0 {
                        positive.push(v / C64::from(lam.sqrt()));
                    } else {
                        negative.push(v / C64::from((-lam).sqrt()));
                    }
                }
                for e_neg in &negative {
                    for e_pos in &positive {
                        push(e_pos + e_neg, &mut found);
                        push(e_pos - e_neg, &mut found);
                    }
                }
            }
        }
    }
    Ok(found)
}

fn phase_fixed(v: CVector) -> CVector {
    let pivot = v.iter().fold(C64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() + 1e-12 { *z } else { best });
    if pivot.norm() == 0.0 {
        return v;
    }
    let phase = pivot.conj() / pivot.norm();
    v.map(|z| z * phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec3(a: C64, b: C64, d: C64) -> CVector {
        CVector::from_vec(vec![a, b, d])
    }

    fn r(x: f64) -> C64 {
        c(x, 0.0)
    }

    #[test]
    fn inner_examples() {
        let e3 = vec3(r(0.0), r(0.0), r(1.0));
        assert_eq!(herm_inner(&e3, &e3).unwrap(), r(-1.0));
        let e1 = vec3(r(1.0), r(0.0), r(0.0));
        let e2 = vec3(r(0.0), r(1.0), r(0.0));
        assert_eq!(herm_inner(&e1, &e2).unwrap(), r(0.0));
        let ones = vec3(r(1.0), r(1.0), r(1.0));
        assert_eq!(herm_inner(&ones, &ones).unwrap(), r(1.0));
        let short = CVector::from_vec(vec![r(1.0), r(0.0)]);
        assert!(matches!(herm_inner(&e1, &short), Err(GeomError::Dimension { .. })));
    }

    #[test]
    fn point_classes() {
        let p = ProjectivePoint::from_slice(&[r(0.0), r(0.0), r(1.0)]).unwrap();
        assert_eq!(point_class(&p), PointClass::Negative);
        let p = ProjectivePoint::from_slice(&[r(0.0), r(0.5), r(0.5)]).unwrap();
        assert_eq!(point_class(&p), PointClass::Null);
        let p = ProjectivePoint::from_slice(&[r(1.0), r(0.0), r(0.0)]).unwrap();
        assert_eq!(point_class(&p), PointClass::Positive);
        assert!(ProjectivePoint::from_slice(&[r(0.0), r(0.0), r(0.0)]).is_err());
    }

    #[test]
    fn projective_equality_ignores_scale() {
        let p = ProjectivePoint::from_slice(&[c(1.0, 2.0), r(0.5), r(3.0)]).unwrap();
        let q = ProjectivePoint::new(p.lift() * c(-0.3, 1.7)).unwrap();
        assert!(p.proj_eq(&q));
        let s = ProjectivePoint::from_slice(&[c(1.0, 2.0), r(0.6), r(3.0)]).unwrap();
        assert!(!p.proj_eq(&s));
    }

    #[test]
    fn rejects_non_isometry() {
        let mut m = CMatrix::identity(3, 3);
        m[(0, 1)] = r(0.5);
        assert!(matches!(Isometry::new(m), Err(GeomError::NotIsometry { .. })));
    }

    #[test]
    fn rescales_projective_representatives() {
        let m = CMatrix::identity(3, 3) * c(0.0, 2.0);
        let g = Isometry::new(m).unwrap();
        assert!(g.form_defect() < 1e-15);
        assert!((g.matrix().determinant().norm() - 1.0).abs() < 1e-12);
        assert_eq!(classify_isometry(&g).unwrap(), IsometryClass::Identity);
    }

    #[test]
    fn diagonal_rotation_fixes_ball_origin() {
        let eta: f64 = 0.7;
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(eta.cos(), eta.sin()), r(1.0), r(1.0)]));
        let g = Isometry::new(m).unwrap();
        let o = ProjectivePoint::ball_origin(2);
        assert!(g.apply(&o).unwrap().proj_eq(&o));
    }

    #[test]
    fn distance_on_vertical_geodesic() {
        for &u in &[1.0, 2.0, 0.25, 7.5] {
            let p = ProjectivePoint::from_slice(&[r(0.0), r(0.0), r(1.0)]).unwrap();
            let q = ProjectivePoint::from_slice(&[r(0.0), r((1.0 - u) / 2.0), r((1.0 + u) / 2.0)]).unwrap();
            let d: f64 = bergman_distance(&p, &q).unwrap();
            let expected = (1.0 + u) * (1.0 + u) / (4.0 * u);
            assert!(((d / 2.0).cosh().powi(2) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_same_point_is_zero() {
        let p = ProjectivePoint::from_slice(&[c(0.1, 0.2), r(-0.3), r(1.0)]).unwrap();
        let q = ProjectivePoint::new(p.lift() * c(0.0, 3.0)).unwrap();
        assert!(bergman_distance(&p, &q).unwrap() < 1e-7);
    }

    #[test]
    fn distance_rejects_boundary_points() {
        let p = ProjectivePoint::heisenberg_origin(2);
        let q = ProjectivePoint::ball_origin(2);
        assert!(matches!(bergman_distance(&p, &q), Err(GeomError::Domain(_))));
    }

    #[test]
    fn inverse_is_exact() {
        let s: f64 = 0.8;
        let mut m = CMatrix::identity(3, 3);
        m[(1, 1)] = r(s.cosh());
        m[(2, 2)] = r(s.cosh());
        m[(1, 2)] = r(-s.sinh());
        m[(2, 1)] = r(-s.sinh());
        let g = Isometry::new(m).unwrap();
        assert!(g.compose(&g.inverse()).is_projective_identity(1e-12));
    }
}
