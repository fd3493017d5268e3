//! Bisectors and Dirichlet side censuses.
//!
//! A census marches rays out of the center `y` and records, for each ray, the
//! first orbit point `h·y` that becomes closer than `y`. The ray is taken in
//! the ball model centered at `y`: with a `J`-orthonormal frame `(w_1..w_n, y)`
//! the points `y + T w`, `0 ≤ T < 1`, run along the geodesic from `y` in the
//! direction `w`, and the crossing of each bisector solves a quadratic in `T`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{GeomError, Result};
use crate::groups::{ball_elements, GroupElement, GroupGens};
use crate::heisenberg::{horo_lift, projective_to_horo, HoroPoint};
use crate::model::InvariantModel;
use crate::projective::{c, distance_between_lifts, form, CVector, ProjectivePoint, C64};
use crate::sampling::{sphere_directions, Halton};

/// Witnesses closer than this to a second bisector are discarded.
pub const STRICTNESS_MARGIN: f64 = 1e-6;
/// Precision of the slice-census root finder.
pub const ROOT_TOL: f64 = 1e-9;
pub const DEFAULT_RAYS: usize = 2000;

/// The bisector between `center` and `mate`.
#[derive(Debug, Clone)]
pub struct BisectorSpec {
    center: ProjectivePoint,
    mate: ProjectivePoint,
}

impl BisectorSpec {
    pub fn new(center: ProjectivePoint, mate: ProjectivePoint) -> Result<Self> {
        check_negative(&center)?;
        check_negative(&mate)?;
        if center.proj_eq(&mate) {
            return Err(GeomError::DegenerateInput("bisector of a point with itself".into()));
        }
        Ok(BisectorSpec { center, mate })
    }

    pub fn center(&self) -> &ProjectivePoint {
        &self.center
    }

    pub fn mate(&self) -> &ProjectivePoint {
        &self.mate
    }

    pub fn margin(&self, z: &ProjectivePoint) -> Result<f64> {
        bisector_margin(z, &self.center, &self.mate)
    }
}

fn check_negative(p: &ProjectivePoint) -> Result<()> {
    if p.self_inner() < 0.0 {
        Ok(())
    } else {
        Err(GeomError::Domain("bisector points must lie in CH^n".into()))
    }
}

/// `d(z, y) − d(z, gy)`; negative on the side of `y`.
pub fn bisector_margin(z: &ProjectivePoint, y: &ProjectivePoint, gy: &ProjectivePoint) -> Result<f64> {
    if z.dim() != y.dim() || y.dim() != gy.dim() {
        return Err(GeomError::dim(y.dim() + 1, gy.dim() + 1));
    }
    check_negative(z)?;
    check_negative(y)?;
    check_negative(gy)?;
    if y.proj_eq(gy) {
        return Err(GeomError::DegenerateInput("y = g·y".into()));
    }
    Ok(distance_between_lifts(z.lift(), y.lift()) - distance_between_lifts(z.lift(), gy.lift()))
}

/// One certified side.
#[derive(Debug, Clone, PartialEq)]
pub struct SideRecord {
    pub word: String,
    pub witnesses: usize,
    /// Smallest strictness margin over the witnesses of this side.
    pub min_margin: f64,
}

/// Side census; `sides` are in shortlex order of words.
#[derive(Debug, Clone, PartialEq)]
pub struct SideCensus {
    pub sides: Vec<SideRecord>,
    pub rays_used: usize,
    pub enumeration_radius: usize,
    /// Rays that reached the boundary with no beater.
    pub unbounded_rays: usize,
    /// Rays whose witness failed the strictness margin.
    pub borderline_rays: usize,
}

impl SideCensus {
    pub fn side_words(&self) -> Vec<&str> {
        self.sides.iter().map(|s| s.word.as_str()).collect()
    }

    pub fn unbounded_fraction(&self) -> f64 {
        if self.rays_used == 0 {
            0.0
        } else {
            self.unbounded_rays as f64 / self.rays_used as f64
        }
    }
}

/// Outcome of one ray: `(element index, strictness margin)`.
enum RayOutcome {
    Side(usize, f64),
    Borderline,
    Unbounded,
}

fn assemble(
    outcomes: Vec<RayOutcome>,
    elements: &[GroupElement],
    gens: &GroupGens,
    enumeration_radius: usize,
) -> SideCensus {
    let mut by_element: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    let mut unbounded_rays = 0;
    let mut borderline_rays = 0;
    let rays_used = outcomes.len();
    for o in outcomes {
        match o {
            RayOutcome::Side(idx, margin) => {
                let e = by_element.entry(idx).or_insert((0, f64::INFINITY));
                e.0 += 1;
                e.1 = e.1.min(margin);
            }
            RayOutcome::Borderline => borderline_rays += 1,
            RayOutcome::Unbounded => unbounded_rays += 1,
        }
    }
    // Elements are stored in shortlex order, so index order is word order.
    let sides = by_element
        .into_iter()
        .map(|(idx, (witnesses, min_margin))| SideRecord {
            word: gens.word_string(&elements[idx].word),
            witnesses,
            min_margin,
        })
        .collect();
    SideCensus {
        sides,
        rays_used,
        enumeration_radius,
        unbounded_rays,
        borderline_rays,
    }
}

/// Nontrivial elements with their images of the unit lift `y`; errors when one
/// of them fixes `y`.
fn orbit_table(gens: &GroupGens, y: &CVector, radius: usize) -> Result<(Vec<GroupElement>, Vec<CVector>)> {
    let elements = ball_elements(gens, radius)?;
    let mut images = Vec::with_capacity(elements.len());
    images.push(y.clone());
    for el in elements.iter().skip(1) {
        let hy = el.isometry.matrix() * y;
        if form(y, &hy).norm() - 1.0 < 1e-12 {
            return Err(GeomError::DegenerateCenter {
                word: gens.word_string(&el.word),
            });
        }
        images.push(hy);
    }
    Ok((elements, images))
}

/// A `J`-orthonormal basis of `y^⊥` for a unit lift `y`.
fn orthonormal_frame(y: &CVector) -> Vec<CVector> {
    let size = y.len();
    let mut frame: Vec<CVector> = Vec::new();
    for k in 0..size {
        let mut w = CVector::zeros(size);
        w[k] = c(1.0, 0.0);
        w += y * form(&w, y);
        for b in &frame {
            w -= b * form(&w, b);
        }
        let q = form(&w, &w).re;
        if q > 1e-6 {
            frame.push(w / c(q.sqrt(), 0.0));
        }
        if frame.len() == size - 1 {
            break;
        }
    }
    frame
}

/// Smallest `T ∈ (0, 1)` with `|a + bT| = 1`, given `|a| > 1`.
fn exit_parameter(a: C64, b: C64) -> Option<f64> {
    let a2 = b.norm_sqr();
    let a1 = 2.0 * (a * b.conj()).re;
    let a0 = a.norm_sqr() - 1.0;
    if a1 >= 0.0 || a2 == 0.0 {
        return None;
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        return None;
    }
    let q = 0.5 * (-a1 + disc.sqrt());
    let t = a0 / q;
    (t > 0.0 && t < 1.0).then_some(t)
}

/// Dirichlet side census at `center` over the ball of radius `enum_radius`.
pub fn dirichlet_side_census(
    gens: &GroupGens,
    center: &ProjectivePoint,
    enum_radius: usize,
    rays: usize,
    seed: u64,
) -> Result<SideCensus> {
    if rays < 100 {
        return Err(GeomError::InvalidSpec(format!("at least 100 rays are required, got {rays}")));
    }
    if center.dim() != gens.dim() {
        return Err(GeomError::dim(gens.dim() + 1, center.dim() + 1));
    }
    let y = center.unit_lift()?;
    let (elements, images) = orbit_table(gens, &y, enum_radius)?;
    let frame = orthonormal_frame(&y);
    let n = frame.len();
    let base: Vec<C64> = images.iter().map(|hy| form(&y, hy)).collect();
    let directions = sphere_directions(2 * n, rays, seed);
    let outcomes: Vec<RayOutcome> = directions
        .par_iter()
        .map(|u| {
            let mut w = CVector::zeros(y.len());
            for (k, b) in frame.iter().enumerate() {
                w += b * c(u[2 * k], u[2 * k + 1]);
            }
            let slopes: Vec<C64> = images.iter().map(|hy| form(&w, hy)).collect();
            let mut best: Option<(usize, f64)> = None;
            for idx in 1..images.len() {
                if let Some(t) = exit_parameter(base[idx], slopes[idx]) {
                    if best.is_none_or(|(_, bt)| t < bt) {
                        best = Some((idx, t));
                    }
                }
            }
            let Some((winner, t)) = best else {
                return RayOutcome::Unbounded;
            };
            // d(z, y) = 2 atanh T; compare with every other orbit point.
            let norm = (1.0 - t * t).sqrt();
            let own = 2.0 * t.atanh();
            let mut margin = f64::INFINITY;
            for idx in 1..images.len() {
                if idx == winner {
                    continue;
                }
                let h = ((base[idx] + slopes[idx] * t).norm() / norm).max(1.0);
                margin = margin.min(2.0 * h.acosh() - own);
            }
            if margin > STRICTNESS_MARGIN {
                RayOutcome::Side(winner, margin)
            } else {
                RayOutcome::Borderline
            }
        })
        .collect();
    Ok(assemble(outcomes, &elements, gens, enum_radius))
}

/// Slice censuses at radius `R` and `R + 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceCensus {
    pub model: InvariantModel,
    pub u0: f64,
    pub census: SideCensus,
    pub extended: SideCensus,
    /// Whether both censuses found the same side set.
    pub stable: bool,
}

/// `π'`: coordinate projection onto the model, then onto the slice `u = u0`.
pub fn parabolic_projection(p: &HoroPoint, model: InvariantModel, u0: f64) -> Result<HoroPoint> {
    if !(u0 > 0.0) || !u0.is_finite() {
        return Err(GeomError::InvalidSpec(format!("slice height must be positive, got {u0}")));
    }
    Ok(model.project(p, u0))
}

/// Checks that every generator fixes `∞` and maps the model slice at height
/// `u0` into itself.
pub fn check_model_invariance(gens: &GroupGens, model: InvariantModel, u0: f64) -> Result<()> {
    let n = gens.dim();
    let inf = ProjectivePoint::infinity(n);
    let k = model.real_dim(n);
    let probe = Halton::new(k, 17);
    for (g, label) in gens.generators().iter().zip(gens.labels()) {
        if !g.apply(&inf)?.proj_eq(&inf) {
            return Err(GeomError::Invariance(format!("generator {label} does not fix infinity")));
        }
        for i in 0..8u64 {
            let coords: Vec<f64> = probe.point(i).iter().map(|x| 4.0 * x - 2.0).collect();
            let p = model.point(n, &coords, u0);
            let img = projective_to_horo(&g.apply(&crate::heisenberg::horo_to_projective(&p))?)?;
            let scale = 1.0 + coords.iter().map(|x| x.abs()).sum::<f64>();
            let tol = 1e-9 * scale * scale;
            if (img.u - u0).abs() > tol || !model.contains(&img.base(), tol) {
                return Err(GeomError::Invariance(format!(
                    "generator {label} does not preserve the {model} slice at height {u0}"
                )));
            }
        }
    }
    Ok(())
}

/// Side census of a parabolic group restricted to the slice `model × {u0}`,
/// run at `enum_radius` and `enum_radius + 2`.
pub fn pullback_domain_sides(
    gens: &GroupGens,
    model: InvariantModel,
    u0: f64,
    enum_radius: usize,
    rays: usize,
    seed: u64,
) -> Result<SliceCensus> {
    if !(u0 > 0.0) || !u0.is_finite() {
        return Err(GeomError::InvalidSpec(format!("slice height must be positive, got {u0}")));
    }
    check_model_invariance(gens, model, u0)?;
    let census = slice_census(gens, model, u0, enum_radius, rays, seed)?;
    let extended = slice_census(gens, model, u0, enum_radius + 2, rays, seed)?;
    let stable = census.side_words() == extended.side_words();
    Ok(SliceCensus {
        model,
        u0,
        census,
        extended,
        stable,
    })
}

fn slice_directions(k: usize, rays: usize, seed: u64) -> Vec<Vec<f64>> {
    match k {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => {
            let offset = Halton::new(1, seed).point(0)[0];
            (0..rays)
                .map(|j| {
                    let a = std::f64::consts::TAU * (j as f64 + offset) / rays as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect()
        }
        _ => sphere_directions(k, rays, seed),
    }
}

fn slice_census(
    gens: &GroupGens,
    model: InvariantModel,
    u0: f64,
    enum_radius: usize,
    rays: usize,
    seed: u64,
) -> Result<SideCensus> {
    let n = gens.dim();
    let k = model.real_dim(n);
    let center = model.point(n, &vec![0.0; k], u0);
    let y = horo_lift(&center);
    let (elements, images) = orbit_table(gens, &y, enum_radius)?;
    let lift_at = |dir: &[f64], t: f64| {
        let coords: Vec<f64> = dir.iter().map(|x| x * t).collect();
        horo_lift(&model.point(n, &coords, u0))
    };
    // f_h(z) = d(z, y) − d(z, h y); the ray leaves the domain where max_h f_h = 0.
    let profile = |z: &CVector| -> Vec<f64> {
        let dy = distance_between_lifts(z, &y);
        images.iter().skip(1).map(|hy| dy - distance_between_lifts(z, hy)).collect()
    };
    let worst = |z: &CVector| profile(z).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let directions = slice_directions(k, rays, seed);
    let outcomes: Vec<RayOutcome> = directions
        .par_iter()
        .map(|dir| {
            let mut lo = 0.0;
            let mut hi = None;
            let mut t = 0.0;
            while t < 1e3 {
                let step = 5e-3 * (1.0 + t);
                let next = t + step;
                if worst(&lift_at(dir, next)) >= 0.0 {
                    lo = t;
                    hi = Some(next);
                    break;
                }
                t = next;
            }
            let Some(mut hi) = hi else {
                return RayOutcome::Unbounded;
            };
            while hi - lo > ROOT_TOL {
                let mid = 0.5 * (lo + hi);
                if worst(&lift_at(dir, mid)) >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let f = profile(&lift_at(dir, hi));
            let (winner, _) = f
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
            let margin = f
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != winner)
                .map(|(_, &v)| -v)
                .fold(f64::INFINITY, f64::min);
            if margin > STRICTNESS_MARGIN {
                RayOutcome::Side(winner + 1, margin)
            } else {
                RayOutcome::Borderline
            }
        })
        .collect();
    Ok(assemble(outcomes, &elements, gens, enum_radius))
}
