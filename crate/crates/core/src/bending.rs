//! Bending deformations in `CH^2`: the planar bend and its distortion, the
//! Heisenberg extension, deformed groups, the tube condition and Cartan's
//! angular invariant.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{GeomError, Result};
use crate::groups::{limit_set_sample, GroupGens, Letter};
use crate::heisenberg::{cygan_dist_boundary, projective_to_heis, HeisPoint};
use crate::projective::{
    boundary_fixed_points, c, classify_isometry, form, CMatrix, Isometry, IsometryClass, ProjectivePoint, C64,
};

/// Branch boundaries closer than this to `arg z` are rejected by [`bend_distortion`].
pub const BRANCH_TOL: f64 = 1e-12;
/// Cartan values below this modulus count as zero.
pub const CARTAN_ZERO_TOL: f64 = 1e-9;
const BOUNDARY_NULL_TOL: f64 = 1e-7;

/// Bend angle `η` and sector half-width `ζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendParams {
    eta: f64,
    zeta: f64,
}

impl BendParams {
    pub fn new(eta: f64, zeta: f64) -> Result<Self> {
        if !(zeta > 0.0 && zeta < FRAC_PI_2) {
            return Err(GeomError::InvalidSpec(format!("zeta must lie in (0, pi/2), got {zeta}")));
        }
        if !eta.is_finite() || eta.abs() >= PI - 2.0 * zeta {
            return Err(GeomError::InvalidSpec(format!(
                "|eta| must be below pi - 2 zeta = {}, got {eta}",
                PI - 2.0 * zeta
            )));
        }
        Ok(BendParams { eta, zeta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    fn reflected(&self) -> BendParams {
        BendParams {
            eta: -self.eta,
            zeta: self.zeta,
        }
    }
}

/// Rotation angle applied at argument `theta` for `η ≥ 0`.
fn angle_shift(theta: f64, p: &BendParams) -> f64 {
    let (eta, zeta) = (p.eta, p.zeta);
    let width = PI - 2.0 * zeta;
    if theta.abs() <= zeta {
        eta
    } else if theta.abs() >= PI - zeta {
        0.0
    } else if theta > 0.0 {
        eta * (1.0 - (theta - zeta) / width)
    } else {
        eta * (1.0 + (theta + zeta) / width)
    }
}

/// The planar bend: a rotation by `η` on `|arg z| ≤ ζ`, the identity on
/// `|arg z| ≥ π − ζ`, and a linear interpolation of the angle in between.
pub fn bend_plane(z: C64, params: &BendParams) -> C64 {
    if z == c(0.0, 0.0) {
        return z;
    }
    if params.eta < 0.0 {
        return bend_plane(z.conj(), &params.reflected()).conj();
    }
    z * C64::from_polar(1.0, angle_shift(z.arg(), params))
}

/// Linear distortion `K` of the planar bend at `z`.
pub fn bend_distortion(z: C64, params: &BendParams) -> Result<f64> {
    if z == c(0.0, 0.0) {
        return Err(GeomError::DegenerateInput("distortion is undefined at the origin".into()));
    }
    if params.eta < 0.0 {
        return bend_distortion(z.conj(), &params.reflected());
    }
    let (eta, zeta) = (params.eta, params.zeta);
    let theta = z.arg();
    let a = theta.abs();
    if (a - zeta).abs() < BRANCH_TOL || (a - (PI - zeta)).abs() < BRANCH_TOL {
        return Err(GeomError::BranchBoundary);
    }
    let width = PI - 2.0 * zeta;
    Ok(if a < zeta || a > PI - zeta {
        1.0
    } else if theta > 0.0 {
        width / (width - eta)
    } else {
        (width + eta) / width
    })
}

/// Heisenberg extension for `n = 2`: `(ξ, v) ↦ (φ(ξ), v)`.
pub fn bend_heisenberg(p: &HeisPoint, params: &BendParams) -> Result<HeisPoint> {
    if p.xi.len() != 1 {
        return Err(GeomError::dim(2, p.dim()));
    }
    Ok(HeisPoint::planar(bend_plane(p.xi[0], params), p.v))
}

/// `U_η = diag(e^{iη}, 1, 1)`.
pub fn unitary_rotation(eta: f64) -> Isometry {
    let mut m = CMatrix::identity(3, 3);
    m[(0, 0)] = C64::from_polar(1.0, eta);
    Isometry::new(m).expect("diagonal unitary")
}

/// The second factor of the decomposition.
#[derive(Debug, Clone)]
pub enum AmalgamSide {
    /// `G = G_1 *_{G_0} G_2`; `G_2` is deformed by conjugation with `U_η`.
    Amalgam { g1: Vec<Isometry>, g2: Vec<Isometry> },
    /// `G = <G_1, g_2>`; `g_2` is replaced by `U_η g_2`.
    Hnn { g1: Vec<Isometry>, g2: Isometry },
}

/// A decomposition of a real Fuchsian group along `G_0 = <g_α>`.
///
/// `g1` lists the generators of `G_1` besides `g_α`.
#[derive(Debug, Clone)]
pub struct AmalgamSpec {
    g_alpha: Isometry,
    side: AmalgamSide,
}

fn is_real(m: &Isometry) -> bool {
    let scale = m.matrix().camax().max(1.0);
    m.matrix().iter().all(|z| z.im.abs() <= 1e-12 * scale)
}

impl AmalgamSpec {
    pub fn new(g_alpha: Isometry, side: AmalgamSide) -> Result<Self> {
        let all: Vec<&Isometry> = match &side {
            AmalgamSide::Amalgam { g1, g2 } => std::iter::once(&g_alpha).chain(g1).chain(g2).collect(),
            AmalgamSide::Hnn { g1, g2 } => std::iter::once(&g_alpha).chain(g1).chain(std::iter::once(g2)).collect(),
        };
        if all.iter().any(|g| g.dim() != 2) {
            return Err(GeomError::InvalidSpec("bending works in CH^2".into()));
        }
        if classify_isometry(&g_alpha)? != IsometryClass::Loxodromic {
            return Err(GeomError::InvalidSpec("g_alpha must be loxodromic".into()));
        }
        let fixed = boundary_fixed_points(&g_alpha)?;
        let origin = ProjectivePoint::heisenberg_origin(2);
        let inf = ProjectivePoint::infinity(2);
        let axis_ok = fixed.len() == 2
            && fixed.iter().any(|p| p.proj_eq_tol(&origin, 1e-7))
            && fixed.iter().any(|p| p.proj_eq_tol(&inf, 1e-7));
        if !axis_ok {
            return Err(GeomError::InvalidSpec("g_alpha must fix the origin and infinity".into()));
        }
        let u = unitary_rotation(1.0);
        if !g_alpha.compose(&u).proj_eq(&u.compose(&g_alpha), 1e-10) {
            return Err(GeomError::InvalidSpec("g_alpha must be a pure dilation".into()));
        }
        let g1 = match &side {
            AmalgamSide::Amalgam { g1, .. } | AmalgamSide::Hnn { g1, .. } => g1,
        };
        if !is_real(&g_alpha) || !g1.iter().all(is_real) {
            return Err(GeomError::InvalidSpec("G_1 must preserve the real form".into()));
        }
        Ok(AmalgamSpec { g_alpha, side })
    }

    pub fn g_alpha(&self) -> &Isometry {
        &self.g_alpha
    }

    pub fn side(&self) -> &AmalgamSide {
        &self.side
    }

    fn g1(&self) -> &[Isometry] {
        match &self.side {
            AmalgamSide::Amalgam { g1, .. } | AmalgamSide::Hnn { g1, .. } => g1,
        }
    }

    /// The generator whose fixed point is tracked: `g_2`, or the first `G_2`
    /// generator with a fixed point on the positive real axis.
    fn tracked_generator(&self) -> Result<usize> {
        match &self.side {
            AmalgamSide::Hnn { .. } => Ok(0),
            AmalgamSide::Amalgam { g2, .. } => g2
                .iter()
                .position(|g| real_axis_fixed_point(g, 1.0).is_ok())
                .ok_or_else(|| GeomError::InvalidSpec("no G_2 generator fixes a point of the positive real axis".into())),
        }
    }
}

/// Generators of `G_η`: `g_α`, then `G_1`, then the deformed second factor.
pub fn deform_group(spec: &AmalgamSpec, eta: f64) -> Result<GroupGens> {
    let u = unitary_rotation(eta);
    let mut gens = vec![spec.g_alpha.clone()];
    gens.extend(spec.g1().iter().cloned());
    match &spec.side {
        AmalgamSide::Amalgam { g2, .. } => gens.extend(g2.iter().map(|g| g.conjugate_by(&u))),
        AmalgamSide::Hnn { g2, .. } => gens.push(u.compose(g2)),
    }
    GroupGens::from_isometries(gens)
}

/// Three pairwise distinct boundary points of `CH^2`.
#[derive(Debug, Clone)]
pub struct BoundaryTriple {
    points: [ProjectivePoint; 3],
}

impl BoundaryTriple {
    pub fn new(p0: ProjectivePoint, p1: ProjectivePoint, p2: ProjectivePoint) -> Result<Self> {
        for p in [&p0, &p1, &p2] {
            if p.dim() != p0.dim() {
                return Err(GeomError::dim(p0.dim() + 1, p.dim() + 1));
            }
            if p.self_inner().abs() > BOUNDARY_NULL_TOL * p.lift().norm_squared() {
                return Err(GeomError::InvalidPoint("triple points must be null".into()));
            }
        }
        if p0.proj_eq(&p1) || p1.proj_eq(&p2) || p2.proj_eq(&p0) {
            return Err(GeomError::CoincidentPoints);
        }
        Ok(BoundaryTriple { points: [p0, p1, p2] })
    }

    pub fn points(&self) -> &[ProjectivePoint; 3] {
        &self.points
    }
}

/// `α = arg(−<z0,z1><z1,z2><z2,z0>)`, in `[−π/2, π/2]`.
pub fn cartan_invariant(t: &BoundaryTriple) -> f64 {
    let [a, b, d] = &t.points;
    let (z0, z1, z2) = (a.lift(), b.lift(), d.lift());
    let prod = -(form(z0, z1) * form(z1, z2) * form(z2, z0));
    prod.arg().clamp(-FRAC_PI_2, FRAC_PI_2)
}

/// `sinh(ℓ/4) sinh(δ/2) ≤ 1/2`, with a relative slack of `1e-12` for the
/// equality case.
pub fn tube_ok(ell: f64, delta: f64) -> Result<bool> {
    if !(ell >= 0.0 && delta >= 0.0) || !ell.is_finite() || !delta.is_finite() {
        return Err(GeomError::InvalidSpec("tube parameters must be finite and positive".into()));
    }
    Ok((ell / 4.0).sinh() * (delta / 2.0).sinh() <= 0.5 * (1.0 + 1e-12))
}

/// Result of scanning all reduced words up to a length for near-identities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub passed: bool,
    pub min_gap: f64,
    pub worst_word: String,
    pub words_checked: usize,
}

fn identity_gap(m: &CMatrix) -> f64 {
    let tr = m.trace();
    let phase = if tr.norm() > 0.0 { tr.conj() / tr.norm() } else { c(1.0, 0.0) };
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let mut d = m[(i, j)] * phase;
            if i == j {
                d -= 1.0;
            }
            acc += d.norm_sqr();
        }
    }
    acc.sqrt()
}

/// Smallest projective distance to the identity over all nonempty reduced
/// words of length at most `max_len`.
pub fn identity_word_probe(gens: &GroupGens, max_len: usize, tol: f64) -> ProbeResult {
    let letters = gens.letters();
    let mats: Vec<CMatrix> = letters.iter().map(|&l| gens.letter_isometry(l).matrix().clone()).collect();
    let size = gens.dim() + 1;
    let partial: Vec<(f64, Vec<usize>, usize)> = (0..letters.len())
        .into_par_iter()
        .map(|first| {
            let mut stack: Vec<CMatrix> = (0..max_len).map(|_| CMatrix::zeros(size, size)).collect();
            let mut word = vec![first];
            stack[0].copy_from(&mats[first]);
            let mut best = (identity_gap(&stack[0]), word.clone());
            let mut count = 1;
            probe_dfs(gens, &letters, &mats, max_len, &mut stack, &mut word, &mut best, &mut count);
            (best.0, best.1, count)
        })
        .collect();
    let mut min_gap = f64::INFINITY;
    let mut worst = Vec::new();
    let mut words_checked = 0;
    for (gap, word, count) in partial {
        words_checked += count;
        if gap < min_gap {
            min_gap = gap;
            worst = word;
        }
    }
    let worst_letters: Vec<Letter> = worst.iter().map(|&i| letters[i]).collect();
    ProbeResult {
        passed: min_gap > tol,
        min_gap,
        worst_word: gens.word_string(&worst_letters),
        words_checked,
    }
}

#[allow(clippy::too_many_arguments)]
fn probe_dfs(
    gens: &GroupGens,
    letters: &[Letter],
    mats: &[CMatrix],
    max_len: usize,
    stack: &mut Vec<CMatrix>,
    word: &mut Vec<usize>,
    best: &mut (f64, Vec<usize>),
    count: &mut usize,
) {
    let depth = word.len();
    if depth == max_len {
        return;
    }
    let last = letters[*word.last().expect("nonempty")];
    for (i, &l) in letters.iter().enumerate() {
        if !gens.may_follow(Some(last), l) {
            continue;
        }
        let (done, rest) = stack.split_at_mut(depth);
        done[depth - 1].mul_to(&mats[i], &mut rest[0]);
        word.push(i);
        *count += 1;
        let gap = identity_gap(&rest[0]);
        if gap < best.0 {
            *best = (gap, word.clone());
        }
        probe_dfs(gens, letters, mats, max_len, stack, word, best, count);
        word.pop();
    }
}

/// Boundary fixed point of `g` on the real axis with `sign · ξ > 0`; among
/// several, the one nearest the origin.
fn real_axis_fixed_point(g: &Isometry, sign: f64) -> Result<HeisPoint> {
    let mut best: Option<HeisPoint> = None;
    for p in boundary_fixed_points(g)? {
        let Ok(h) = projective_to_heis(&p) else { continue };
        let x = h.xi[0];
        let on_axis = x.im.abs() < 1e-9 * (1.0 + x.re.abs()) && h.v.abs() < 1e-9 * (1.0 + x.re * x.re);
        if on_axis && sign * x.re > 1e-9 && best.as_ref().is_none_or(|b| x.re.abs() < b.xi[0].re.abs()) {
            best = Some(HeisPoint::planar(c(x.re, 0.0), 0.0));
        }
    }
    best.ok_or_else(|| GeomError::InvalidSpec("no fixed point on the requested half of the real axis".into()))
}

/// Options for [`bend_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub zeta: f64,
    pub probe_len: usize,
    pub probe_tol: f64,
    /// Largest `η` increment used when following the tracked fixed point.
    pub track_step: f64,
    /// Word length for limit-set samples, if any are wanted.
    pub limit_depth: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            zeta: std::f64::consts::FRAC_PI_4,
            probe_len: 8,
            probe_tol: 1e-6,
            track_step: 0.01,
            limit_depth: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub eta: f64,
    pub cartan_alpha: f64,
    pub probe: ProbeResult,
    /// Class of the deformed tracked generator.
    pub deformed_class: IsometryClass,
    /// The tracked fixed point `x²_η`.
    pub tracked_point: HeisPoint,
    pub limit_samples: Vec<HeisPoint>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub x1: HeisPoint,
    pub x2: HeisPoint,
    /// Rows sorted by `η`.
    pub rows: Vec<SweepRow>,
    /// Cartan values differ pairwise (beyond `1e-9`) across distinct `η`.
    pub cartan_distinct: bool,
    /// The Cartan value vanishes exactly at the rows with `η = 0`.
    pub zero_only_at_origin: bool,
}

fn tracked_isometry(spec: &AmalgamSpec, eta: f64, which: usize) -> Isometry {
    let u = unitary_rotation(eta);
    match &spec.side {
        AmalgamSide::Hnn { g2, .. } => u.compose(g2),
        AmalgamSide::Amalgam { g2, .. } => g2[which].conjugate_by(&u),
    }
}

/// Follows `x²` from `η = 0` to `eta` in steps of at most `step`, choosing the
/// nearest fixed point of the deformed generator at each step.
fn track_fixed_point(spec: &AmalgamSpec, which: usize, x2: &HeisPoint, eta: f64, step: f64) -> Result<HeisPoint> {
    let steps = ((eta.abs() / step).ceil() as usize).max(1);
    let mut current = x2.clone();
    for k in 1..=steps {
        let e = eta * k as f64 / steps as f64;
        let g = tracked_isometry(spec, e, which);
        let mut best: Option<(f64, HeisPoint)> = None;
        for p in boundary_fixed_points(&g)? {
            let Ok(h) = projective_to_heis(&p) else { continue };
            let d = cygan_dist_boundary(&current, &h)?;
            if best.as_ref().is_none_or(|b| d < b.0) {
                best = Some((d, h));
            }
        }
        current = best
            .ok_or_else(|| GeomError::Domain(format!("deformed generator lost its finite fixed points at eta = {e}")))?
            .1;
    }
    Ok(current)
}

/// Deformation sweep over `etas`, sorted ascending.
pub fn bend_sweep(spec: &AmalgamSpec, etas: &[f64], options: &SweepOptions) -> Result<SweepReport> {
    if etas.is_empty() {
        return Err(GeomError::InvalidSpec("empty eta grid".into()));
    }
    for &eta in etas {
        BendParams::new(eta, options.zeta)?;
    }
    let mut sorted = etas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let which = spec.tracked_generator()?;
    let mut x1: Option<HeisPoint> = None;
    for g in spec.g1() {
        if let Ok(p) = real_axis_fixed_point(g, -1.0) {
            if x1.as_ref().is_none_or(|b| p.xi[0].re > b.xi[0].re) {
                x1 = Some(p);
            }
        }
    }
    let x1 = x1.ok_or_else(|| GeomError::InvalidSpec("no G_1 generator fixes a point of the negative real axis".into()))?;
    let x2 = real_axis_fixed_point(&tracked_isometry(spec, 0.0, which), 1.0)?;
    let origin = ProjectivePoint::heisenberg_origin(2);
    let x1p = crate::heisenberg::heis_to_projective(&x1);
    let rows: Vec<SweepRow> = sorted
        .par_iter()
        .map(|&eta| -> Result<SweepRow> {
            let gens = deform_group(spec, eta)?;
            let probe = identity_word_probe(&gens, options.probe_len, options.probe_tol);
            let tracked = track_fixed_point(spec, which, &x2, eta, options.track_step)?;
            let triple = BoundaryTriple::new(
                x1p.clone(),
                origin.clone(),
                crate::heisenberg::heis_to_projective(&tracked),
            )?;
            let deformed_class = classify_isometry(&tracked_isometry(spec, eta, which))?;
            let limit_samples = match options.limit_depth {
                Some(depth) => limit_set_sample(&gens, depth, std::slice::from_ref(&x1p))?
                    .into_iter()
                    .map(|s| s.point)
                    .collect(),
                None => Vec::new(),
            };
            Ok(SweepRow {
                eta,
                cartan_alpha: cartan_invariant(&triple),
                probe,
                deformed_class,
                tracked_point: tracked,
                limit_samples,
            })
        })
        .collect::<Result<_>>()?;
    let mut cartan_distinct = true;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if (rows[i].cartan_alpha - rows[j].cartan_alpha).abs() <= CARTAN_ZERO_TOL {
                cartan_distinct = false;
            }
        }
    }
    let zero_only_at_origin = rows
        .iter()
        .all(|r| (r.cartan_alpha.abs() <= CARTAN_ZERO_TOL) == (r.eta == 0.0));
    Ok(SweepReport {
        x1,
        x2,
        rows,
        cartan_distinct,
        zero_only_at_origin,
    })
}
