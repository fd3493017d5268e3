//! Finitely generated subgroups of `PU(n,1)`: words, ball enumeration, orbits,
//! word-metric profiles, packing inversion groups, limit sets and box counting.
//!
//! Words are strings over the generator labels; a lowercase label is the
//! generator, the uppercase label its inverse. Involutions only ever appear in
//! lowercase. Enumeration is breadth first and shortlex ordered, with letters
//! compared as `a < A < b < B < ...`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{GeomError, Result};
use crate::heisenberg::{
    cygan_dist_boundary, cygan_norm_boundary, heis_dilate, heis_to_projective, heis_translate,
    horo_inversion, horo_to_projective, inversion_matrix, projective_to_heis, translation_matrix,
    dilation_matrix, HeisPoint, HoroPoint,
};
use crate::model::InvariantModel;
use crate::projective::{c, distance_between_lifts, form, CVector, Isometry, ProjectivePoint};
use crate::sampling::Halton;

/// Default cap on the number of distinct group elements held in memory.
pub const DEFAULT_BUDGET: usize = 400_000;
/// Two elements are equal when `g⁻¹h` is this close to the identity.
pub const ELEMENT_EQ_TOL: f64 = 1e-6;
const KEY_BUCKET: f64 = 1e-6;

/// A generator (`inverse = false`) or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// Labeled generators of a group; inverses are implicit.
#[derive(Debug, Clone)]
pub struct GroupGens {
    labels: Vec<char>,
    generators: Vec<Isometry>,
    inverses: Vec<Isometry>,
    involution: Vec<bool>,
}

impl GroupGens {
    /// Labels must be distinct lowercase ASCII letters.
    pub fn new(labeled: Vec<(char, Isometry)>) -> Result<Self> {
        if labeled.is_empty() {
            return Err(GeomError::InvalidSpec("empty generator set".into()));
        }
        let n = labeled[0].1.dim();
        let mut labels = Vec::new();
        let mut generators = Vec::new();
        for (label, g) in labeled {
            if !label.is_ascii_lowercase() {
                return Err(GeomError::InvalidSpec(format!("generator label {label:?} is not a lowercase letter")));
            }
            if labels.contains(&label) {
                return Err(GeomError::InvalidSpec(format!("duplicate generator label {label:?}")));
            }
            if g.dim() != n {
                return Err(GeomError::dim(n + 1, g.dim() + 1));
            }
            // Re-run the form check so unchecked products cannot slip in.
            let g = Isometry::new(g.matrix().clone())?;
            labels.push(label);
            generators.push(g);
        }
        let inverses = generators.iter().map(Isometry::inverse).collect();
        let involution = generators
            .iter()
            .map(|g| !g.is_projective_identity(1e-9) && g.compose(g).is_projective_identity(1e-9))
            .collect();
        Ok(GroupGens {
            labels,
            generators,
            inverses,
            involution,
        })
    }

    /// Labels the generators `a, b, c, ...` in order.
    pub fn from_isometries(gens: Vec<Isometry>) -> Result<Self> {
        if gens.len() > 26 {
            return Err(GeomError::InvalidSpec("at most 26 generators".into()));
        }
        Self::new(gens.into_iter().enumerate().map(|(i, g)| ((b'a' + i as u8) as char, g)).collect())
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn is_involution(&self, i: usize) -> bool {
        self.involution[i]
    }

    /// The alphabet in enumeration order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            out.push(Letter { generator: i, inverse: false });
            if !self.involution[i] {
                out.push(Letter { generator: i, inverse: true });
            }
        }
        out
    }

    pub fn letter_isometry(&self, l: Letter) -> &Isometry {
        if l.inverse {
            &self.inverses[l.generator]
        } else {
            &self.generators[l.generator]
        }
    }

    /// Whether `next` may follow `prev` in a freely reduced word.
    pub fn may_follow(&self, prev: Option<Letter>, next: Letter) -> bool {
        match prev {
            None => true,
            Some(p) if self.involution[p.generator] => p.generator != next.generator,
            Some(p) => p.inv() != next,
        }
    }

    pub fn word_string(&self, word: &[Letter]) -> String {
        word.iter()
            .map(|l| {
                let ch = self.labels[l.generator];
                if l.inverse {
                    ch.to_ascii_uppercase()
                } else {
                    ch
                }
            })
            .collect()
    }

    pub fn parse_word(&self, s: &str) -> Result<Vec<Letter>> {
        s.chars()
            .map(|ch| {
                let lower = ch.to_ascii_lowercase();
                let generator = self
                    .labels
                    .iter()
                    .position(|&l| l == lower)
                    .ok_or_else(|| GeomError::InvalidSpec(format!("unknown letter {ch:?} in word {s:?}")))?;
                let inverse = ch.is_ascii_uppercase() && !self.involution[generator];
                Ok(Letter { generator, inverse })
            })
            .collect()
    }

    /// The product of the letters, left to right (`ab` means `a ∘ b`).
    pub fn evaluate(&self, word: &[Letter]) -> Isometry {
        let mut m = Isometry::identity(self.dim());
        for &l in word {
            m = m.compose(self.letter_isometry(l));
        }
        m
    }
}

/// A group element with its shortlex-minimal word.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub word: Vec<Letter>,
    pub isometry: Isometry,
}

/// Reference points used to bucket elements: `y0` and a generic point `q`.
struct Fingerprint {
    y0: CVector,
    q: CVector,
}

impl Fingerprint {
    fn new(n: usize) -> Self {
        let y0 = ProjectivePoint::ball_origin(n).unit_lift().expect("negative");
        let xi = CVector::from_fn(n - 1, |k, _| c(0.31 / (k + 1) as f64, 0.17 * (k + 1) as f64));
        let q = horo_to_projective(&HoroPoint { xi, v: 0.23, u: 0.77 })
            .unit_lift()
            .expect("negative");
        Fingerprint { y0, q }
    }

    fn key(&self, g: &Isometry) -> (i64, i64) {
        let gy = g.matrix() * &self.y0;
        let gq = g.matrix() * &self.q;
        let a = unit_distance(&self.y0, &gy);
        let b = unit_distance(&self.y0, &gq);
        ((a / KEY_BUCKET).round() as i64, (b / KEY_BUCKET).round() as i64)
    }
}

/// Distance between two lifts known to satisfy `<z,z> = <w,w> = −1` exactly.
fn unit_distance(z: &CVector, w: &CVector) -> f64 {
    let h = form(z, w).norm();
    if h > 1.2 {
        2.0 * h.acosh()
    } else {
        distance_between_lifts(z, w)
    }
}

fn same_element(g: &Isometry, h: &Isometry) -> bool {
    g.inverse().compose(h).distance_to_identity() < ELEMENT_EQ_TOL
}

/// Distinct elements of word length at most `max_len`, in shortlex order of
/// their minimal words. The identity comes first.
pub fn ball_elements(gens: &GroupGens, max_len: usize) -> Result<Vec<GroupElement>> {
    ball_elements_with_budget(gens, max_len, DEFAULT_BUDGET)
}

pub fn ball_elements_with_budget(gens: &GroupGens, max_len: usize, budget: usize) -> Result<Vec<GroupElement>> {
    let n = gens.dim();
    let fp = Fingerprint::new(n);
    let letters = gens.letters();
    let identity = Isometry::identity(n);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    buckets.entry(fp.key(&identity)).or_default().push(0);
    let mut elements = vec![GroupElement {
        word: Vec::new(),
        isometry: identity,
    }];
    let mut frontier: Vec<usize> = vec![0];
    let fp = &fp;
    let letters = &letters;
    for radius in 1..=max_len {
        let candidates: Vec<(Vec<Letter>, Isometry, (i64, i64))> = frontier
            .par_iter()
            .flat_map_iter(|&idx| {
                let parent = &elements[idx];
                let last = parent.word.last().copied();
                letters
                    .iter()
                    .filter(move |&&l| gens.may_follow(last, l))
                    .map(move |&l| {
                        let mut word = parent.word.clone();
                        word.push(l);
                        let g = parent.isometry.compose(gens.letter_isometry(l));
                        let key = fp.key(&g);
                        (word, g, key)
                    })
            })
            .collect();
        let mut next = Vec::new();
        for (word, g, key) in candidates {
            let mut duplicate = false;
            'search: for da in -1..=1 {
                for db in -1..=1 {
                    if let Some(list) = buckets.get(&(key.0 + da, key.1 + db)) {
                        if list.iter().any(|&i| same_element(&elements[i].isometry, &g)) {
                            duplicate = true;
                            break 'search;
                        }
                    }
                }
            }
            if duplicate {
                continue;
            }
            if elements.len() >= budget {
                return Err(GeomError::Budget {
                    budget,
                    completed_radius: radius - 1,
                });
            }
            buckets.entry(key).or_default().push(elements.len());
            next.push(elements.len());
            elements.push(GroupElement { word, isometry: g });
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(elements)
}

/// One point of an orbit `G·y`.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub word: String,
    pub point: ProjectivePoint,
    pub word_length: usize,
    pub distance: f64,
}

/// The orbit of `basepoint` under the ball of radius `max_len`, one record per
/// distinct point, in shortlex order of words.
pub fn orbit_enumerate(gens: &GroupGens, max_len: usize, basepoint: &ProjectivePoint) -> Result<Vec<OrbitRecord>> {
    if max_len < 1 {
        return Err(GeomError::InvalidSpec("max_len must be at least 1".into()));
    }
    if basepoint.dim() != gens.dim() {
        return Err(GeomError::dim(gens.dim() + 1, basepoint.dim() + 1));
    }
    let y = basepoint.unit_lift()?;
    let elements = ball_elements(gens, max_len)?;
    let fp = Fingerprint::new(gens.dim());
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut kept: Vec<usize> = Vec::new();
    let mut records = Vec::new();
    for (idx, el) in elements.iter().enumerate() {
        let gy = el.isometry.matrix() * &y;
        let d = unit_distance(&y, &gy);
        let key = ((d / KEY_BUCKET).round() as i64, (unit_distance(&fp.q, &gy) / KEY_BUCKET).round() as i64);
        let mut duplicate = false;
        'search: for da in -1..=1 {
            for db in -1..=1 {
                if let Some(list) = buckets.get(&(key.0 + da, key.1 + db)) {
                    for &j in list {
                        let k = elements[kept[j]].isometry.inverse().compose(&el.isometry);
                        if unit_distance(&y, &(k.matrix() * &y)) < ELEMENT_EQ_TOL {
                            duplicate = true;
                            break 'search;
                        }
                    }
                }
            }
        }
        if duplicate {
            continue;
        }
        buckets.entry(key).or_default().push(kept.len());
        kept.push(idx);
        records.push(OrbitRecord {
            word: gens.word_string(&el.word),
            point: ProjectivePoint::new(gy)?,
            word_length: el.word.len(),
            distance: d,
        });
    }
    Ok(records)
}

/// Per-length extremes of `d(y, g y)` over elements of exact word length `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub length: usize,
    pub count: usize,
    pub dmin: f64,
    pub dmax: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordMetricProfile {
    pub rows: Vec<ProfileRow>,
    /// `max_g d(y, g y)` over the generators.
    pub max_generator_displacement: f64,
    /// Least-squares slope of `dmax(ℓ)` through the origin.
    pub upper_slope: f64,
    /// Fit `dmin(ℓ) ≈ a + b ln ℓ` over `ℓ ≥ 1`, as `(a, b)`.
    pub lower_log_fit: (f64, f64),
}

pub fn word_metric_profile(gens: &GroupGens, max_len: usize, basepoint: &ProjectivePoint) -> Result<WordMetricProfile> {
    let y = basepoint.unit_lift()?;
    let elements = ball_elements(gens, max_len)?;
    let mut rows: Vec<ProfileRow> = (0..=max_len)
        .map(|length| ProfileRow {
            length,
            count: 0,
            dmin: f64::INFINITY,
            dmax: 0.0,
        })
        .collect();
    for el in &elements {
        let d = unit_distance(&y, &(el.isometry.matrix() * &y));
        let row = &mut rows[el.word.len()];
        row.count += 1;
        row.dmin = row.dmin.min(d);
        row.dmax = row.dmax.max(d);
    }
    rows.retain(|r| r.count > 0);
    let max_generator_displacement = gens
        .generators()
        .iter()
        .map(|g| unit_distance(&y, &(g.matrix() * &y)))
        .fold(0.0, f64::max);
    let (sxy, sxx) = rows
        .iter()
        .fold((0.0, 0.0), |(sxy, sxx), r| (sxy + r.length as f64 * r.dmax, sxx + (r.length * r.length) as f64));
    let upper_slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.length >= 1)
        .map(|r| ((r.length as f64).ln(), r.dmin))
        .collect();
    let lower_log_fit = linear_fit(&pts).map(|(a, b, _)| (a, b)).unwrap_or((0.0, 0.0));
    Ok(WordMetricProfile {
        rows,
        max_generator_displacement,
        upper_slope,
        lower_log_fit,
    })
}

/// Least squares `y ≈ a + b x`; returns `(a, b, rms residual)`.
pub(crate) fn linear_fit(pts: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let m = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let rms = (pts.iter().map(|p| (p.1 - a - b * p.0).powi(2)).sum::<f64>() / m).sqrt();
    Some((a, b, rms))
}

/// A closed Cygan ball `B(center, radius)` in the Heisenberg group.
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    pub center: HeisPoint,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpherePacking {
    spheres: Vec<Sphere>,
}

impl SpherePacking {
    /// Validates radii and pairwise disjointness of the closed balls.
    pub fn new(spheres: Vec<Sphere>) -> Result<Self> {
        if spheres.is_empty() {
            return Err(GeomError::InvalidSpec("a packing needs at least one sphere".into()));
        }
        let n = spheres[0].center.dim();
        for s in &spheres {
            if s.center.dim() != n {
                return Err(GeomError::dim(n, s.center.dim()));
            }
            if !(s.radius > 0.0) || !s.radius.is_finite() || !s.center.is_finite() {
                return Err(GeomError::InvalidSpec(format!("invalid sphere {s:?}")));
            }
        }
        for i in 0..spheres.len() {
            for j in i + 1..spheres.len() {
                let distance = cygan_dist_boundary(&spheres[i].center, &spheres[j].center)?;
                let radii_sum = spheres[i].radius + spheres[j].radius;
                if distance <= radii_sum {
                    return Err(GeomError::InvalidPacking {
                        i,
                        j,
                        distance,
                        radii_sum,
                    });
                }
            }
        }
        Ok(SpherePacking { spheres })
    }

    pub fn spheres(&self) -> &[Sphere] {
        &self.spheres
    }

    pub fn dim(&self) -> usize {
        self.spheres[0].center.dim()
    }
}

/// Matrix of the inversion in `S(a, r)`: `T_a ∘ δ_r ∘ I ∘ δ_{1/r} ∘ T_a⁻¹`.
pub fn sphere_inversion(center: &HeisPoint, radius: f64) -> Isometry {
    let n = center.dim();
    let m = translation_matrix(center)
        * dilation_matrix(n, radius)
        * inversion_matrix(n)
        * dilation_matrix(n, 1.0 / radius)
        * translation_matrix(&center.inverse());
    Isometry::from_matrix_unchecked(m)
}

/// The same inversion applied to a boundary point in Heisenberg coordinates.
pub fn sphere_invert_point(sphere: &Sphere, p: &HeisPoint) -> Result<HeisPoint> {
    let local = heis_translate(&sphere.center.inverse(), &p.at_height(0.0))?;
    let inverted = horo_inversion(&heis_dilate(1.0 / sphere.radius, &local))?;
    Ok(heis_translate(&sphere.center, &heis_dilate(sphere.radius, &inverted))?.base())
}

/// Ping-pong clearance for one ordered pair: points of `B_j` mapped by `ι_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMargin {
    pub i: usize,
    pub j: usize,
    /// `min (r_i − ρ_c(a_i, ι_i(x)))` over the samples `x ∈ B_j`.
    pub min_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PingPongCertificate {
    pub samples_per_ball: usize,
    pub pairs: Vec<PairMargin>,
    pub min_margin: f64,
}

/// Quasi-random points of the closed Cygan ball `B(a, r)`.
pub fn ball_samples(sphere: &Sphere, count: usize, seed: u64) -> Vec<HeisPoint> {
    let k = sphere.center.xi.len();
    let mut halton = Halton::new(2 * k + 1, seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = halton.next_point();
        let xi = CVector::from_fn(k, |i, _| c(2.0 * u[2 * i] - 1.0, 2.0 * u[2 * i + 1] - 1.0));
        let unit = HeisPoint::new(xi, 2.0 * u[2 * k] - 1.0);
        if cygan_norm_boundary(&unit) > 1.0 {
            continue;
        }
        let scaled = heis_dilate(sphere.radius, &unit.at_height(0.0));
        let p = heis_translate(&sphere.center, &scaled).expect("same dimension").base();
        out.push(p);
    }
    out
}

/// One involution per sphere, with a sampled ping-pong certificate.
pub fn packing_inversion_group(
    packing: &SpherePacking,
    samples: usize,
    seed: u64,
) -> Result<(GroupGens, PingPongCertificate)> {
    let spheres = packing.spheres();
    let gens = GroupGens::from_isometries(spheres.iter().map(|s| sphere_inversion(&s.center, s.radius)).collect())?;
    let sample_sets: Vec<Vec<HeisPoint>> = spheres
        .iter()
        .enumerate()
        .map(|(j, s)| ball_samples(s, samples, seed.wrapping_add(j as u64)))
        .collect();
    let mut pairs = Vec::new();
    for (i, si) in spheres.iter().enumerate() {
        for (j, pts) in sample_sets.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut min_margin = f64::INFINITY;
            for x in pts {
                let y = sphere_invert_point(si, x)?;
                min_margin = min_margin.min(si.radius - cygan_dist_boundary(&si.center, &y)?);
            }
            if !(min_margin > 0.0) {
                return Err(GeomError::CertificateFailed { i, j, margin: min_margin });
            }
            pairs.push(PairMargin { i, j, min_margin });
        }
    }
    let min_margin = pairs.iter().map(|p| p.min_margin).fold(f64::INFINITY, f64::min);
    Ok((
        gens,
        PingPongCertificate {
            samples_per_ball: samples,
            pairs,
            min_margin,
        },
    ))
}

/// A boundary sample `g(seed)` for a reduced word `g` of fixed length.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSample {
    pub word: String,
    pub seed: usize,
    pub point: HeisPoint,
}

/// Images of the seeds under every reduced word of length exactly `depth`,
/// in shortlex order of words, then seed order. Images at `∞` are dropped.
pub fn limit_set_sample(gens: &GroupGens, depth: usize, seeds: &[ProjectivePoint]) -> Result<Vec<LimitSample>> {
    if depth < 1 {
        return Err(GeomError::InvalidSpec("depth must be at least 1".into()));
    }
    for s in seeds {
        if s.dim() != gens.dim() {
            return Err(GeomError::dim(gens.dim() + 1, s.dim() + 1));
        }
        if s.class() == crate::projective::PointClass::Positive {
            return Err(GeomError::InvalidPoint("seeds must be negative or null".into()));
        }
    }
    let letters = gens.letters();
    let firsts: Vec<Letter> = letters.clone();
    let chunks: Vec<Vec<LimitSample>> = firsts
        .par_iter()
        .map(|&first| {
            let mut out = Vec::new();
            let mut word = vec![first];
            let mut stack = vec![gens.letter_isometry(first).matrix().clone()];
            sample_dfs(gens, &letters, depth, seeds, &mut word, &mut stack, &mut out);
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn sample_dfs(
    gens: &GroupGens,
    letters: &[Letter],
    depth: usize,
    seeds: &[ProjectivePoint],
    word: &mut Vec<Letter>,
    stack: &mut Vec<crate::projective::CMatrix>,
    out: &mut Vec<LimitSample>,
) {
    if word.len() == depth {
        let m = stack.last().expect("nonempty");
        let label = gens.word_string(word);
        for (k, s) in seeds.iter().enumerate() {
            let img = ProjectivePoint::new(m * s.lift());
            if let Ok(p) = img.and_then(|p| projective_to_heis(&p)) {
                out.push(LimitSample {
                    word: label.clone(),
                    seed: k,
                    point: p,
                });
            }
        }
        return;
    }
    let last = word.last().copied();
    for &l in letters {
        if !gens.may_follow(last, l) {
            continue;
        }
        let m = stack.last().expect("nonempty") * gens.letter_isometry(l).matrix();
        // Rescale to keep entries bounded; the projective class is unchanged.
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        stack.push(m / c(scale, 0.0));
        word.push(l);
        sample_dfs(gens, letters, depth, seeds, word, stack, out);
        word.pop();
        stack.pop();
    }
}

/// Result of a box-counting fit.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDimEstimate {
    pub dimension: f64,
    pub residual: f64,
    /// `(ε, N(ε))` per scale.
    pub counts: Vec<(f64, usize)>,
}

/// Box-counting dimension with cells of size `ε` in each real coordinate of
/// `ξ` and `ε²` in `v`, matching the Cygan scaling.
pub fn boxdim_estimate(points: &[HeisPoint], scales: &[f64]) -> Result<BoxDimEstimate> {
    if points.len() < 1000 {
        return Err(GeomError::InvalidSpec(format!("need at least 1000 points, got {}", points.len())));
    }
    if scales.len() < 4 || scales.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(GeomError::InvalidSpec("need at least 4 positive scales".into()));
    }
    let lo = scales.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scales.iter().copied().fold(0.0, f64::max);
    if hi / lo < 10.0 - 1e-9 {
        return Err(GeomError::InvalidSpec("scales must span at least a decade".into()));
    }
    let first = &points[0];
    if points.iter().all(|p| p == first) {
        return Err(GeomError::DegeneratePointSet("all points coincide".into()));
    }
    let mut counts = Vec::new();
    for &eps in scales {
        let mut cells: HashSet<Vec<i64>> = HashSet::new();
        for p in points {
            let mut key: Vec<i64> = Vec::with_capacity(2 * p.xi.len() + 1);
            for z in p.xi.iter() {
                key.push((z.re / eps).floor() as i64);
                key.push((z.im / eps).floor() as i64);
            }
            key.push((p.v / (eps * eps)).floor() as i64);
            cells.insert(key);
        }
        counts.push((eps, cells.len()));
    }
    let pts: Vec<(f64, f64)> = counts.iter().map(|&(e, n)| ((1.0 / e).ln(), (n as f64).ln())).collect();
    let (_, dimension, residual) =
        linear_fit(&pts).ok_or_else(|| GeomError::DegeneratePointSet("scales are not distinct".into()))?;
    Ok(BoxDimEstimate {
        dimension,
        residual,
        counts,
    })
}

/// Membership in the standard cusp neighborhood of radius `r` at `cusp`:
/// `p` is moved by `I ∘ T_cusp⁻¹` (sending the cusp to `∞`) and its Cygan
/// distance to the invariant model is compared with `1/r`.
pub fn cusp_neighborhood_contains(p: &HoroPoint, cusp: &HeisPoint, model: InvariantModel, r: f64) -> Result<bool> {
    if !(r > 0.0) {
        return Err(GeomError::InvalidSpec("radius must be positive".into()));
    }
    let local = heis_translate(&cusp.inverse(), p)?;
    let moved = horo_inversion(&local)?;
    Ok(model.cygan_distance(&moved) >= 1.0 / r)
}

/// Boundary images in the Heisenberg group of a set of projective points.
pub fn heis_points(points: &[ProjectivePoint]) -> Vec<HeisPoint> {
    points.iter().filter_map(|p| projective_to_heis(p).ok()).collect()
}

/// Points within Cygan distance `r` of the origin. Box counting needs a
/// bounded set, and limit sets containing `∞` are unbounded in the chart.
pub fn cygan_window(points: &[HeisPoint], r: f64) -> Vec<HeisPoint> {
    points.iter().filter(|p| cygan_norm_boundary(p) <= r).cloned().collect()
}

/// The seed used by presets and the CLI when none is given: the Heisenberg
/// origin at height one.
pub fn default_basepoint(n: usize) -> ProjectivePoint {
    horo_to_projective(&HeisPoint::origin(n).at_height(1.0))
}

/// The boundary point of a Heisenberg point, for seeding limit sets.
pub fn boundary_seed(p: &HeisPoint) -> ProjectivePoint {
    heis_to_projective(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{dilation_matrix, embed_isometry, heis_inversion, HeisSimilarity};
    use crate::projective::bergman_distance;

    fn dilation(r: f64) -> Isometry {
        Isometry::new(dilation_matrix(2, r)).unwrap()
    }

    fn schottky_pair() -> GroupGens {
        let packing = SpherePacking::new(vec![
            Sphere { center: HeisPoint::planar(c(3.0, 0.0), 0.0), radius: 1.0 },
            Sphere { center: HeisPoint::planar(c(-3.0, 0.0), 0.0), radius: 1.0 },
            Sphere { center: HeisPoint::planar(c(0.0, 3.0), 0.0), radius: 1.0 },
            Sphere { center: HeisPoint::planar(c(0.0, -3.0), 0.0), radius: 1.0 },
        ])
        .unwrap();
        let inv: Vec<Isometry> = packing
            .spheres()
            .iter()
            .map(|s| sphere_inversion(&s.center, s.radius))
            .collect();
        GroupGens::from_isometries(vec![inv[0].compose(&inv[1]), inv[2].compose(&inv[3])]).unwrap()
    }

    #[test]
    fn words_round_trip() {
        let g = schottky_pair();
        let w = g.parse_word("aBba").unwrap();
        assert_eq!(g.word_string(&w), "aBba");
        assert!(g.parse_word("ax").is_err());
        assert!(!g.may_follow(Some(w[1]), w[2]));
        assert!(g.may_follow(Some(w[0]), w[1]));
    }

    #[test]
    fn cyclic_loxodromic_orbit_has_seven_points() {
        let gens = GroupGens::from_isometries(vec![dilation(2.0)]).unwrap();
        let orbit = orbit_enumerate(&gens, 3, &default_basepoint(2)).unwrap();
        let words: Vec<&str> = orbit.iter().map(|r| r.word.as_str()).collect();
        assert_eq!(words, ["", "a", "A", "aa", "AA", "aaa", "AAA"]);
        assert_eq!(orbit[0].distance, 0.0);
        assert_eq!(orbit[0].word_length, 0);
    }

    #[test]
    fn free_pair_ball_counts() {
        let gens = schottky_pair();
        for len in 1..=4 {
            let orbit = orbit_enumerate(&gens, len, &default_basepoint(2)).unwrap();
            let expected = 1 + (1..=len).map(|k| 4 * 3usize.pow(k as u32 - 1)).sum::<usize>();
            assert_eq!(orbit.len(), expected, "length {len}");
        }
    }

    #[test]
    fn torsion_is_deduplicated() {
        // A rotation of order 4 about the vertical axis.
        let rot = crate::heisenberg::rotation_matrix(&crate::projective::CMatrix::from_element(1, 1, c(0.0, 1.0)));
        let gens = GroupGens::from_isometries(vec![Isometry::new(rot).unwrap()]).unwrap();
        let elements = ball_elements(&gens, 6).unwrap();
        assert_eq!(elements.len(), 4);
        let inv = GroupGens::from_isometries(vec![crate::heisenberg::inversion_isometry(2)]).unwrap();
        assert!(inv.is_involution(0));
        assert_eq!(inv.letters().len(), 1);
        assert_eq!(ball_elements(&inv, 5).unwrap().len(), 2);
    }

    #[test]
    fn budget_reports_completed_radius() {
        let gens = schottky_pair();
        match ball_elements_with_budget(&gens, 6, 30) {
            Err(GeomError::Budget { completed_radius, .. }) => assert_eq!(completed_radius, 2),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn orbit_distances_match_bergman() {
        let gens = schottky_pair();
        let y = default_basepoint(2);
        // Longer words push the lift beyond the range where <z,z> < 0 survives rounding.
        for rec in orbit_enumerate(&gens, 1, &y).unwrap() {
            let d = bergman_distance(&y, &rec.point).unwrap();
            assert!((d - rec.distance).abs() < 1e-9 * d.max(1.0));
        }
    }

    #[test]
    fn dilation_profile_is_linear() {
        let r = 1.5f64;
        let tau = 2.0 * r.ln();
        let gens = GroupGens::from_isometries(vec![dilation(r)]).unwrap();
        let prof = word_metric_profile(&gens, 10, &default_basepoint(2)).unwrap();
        assert_eq!(prof.rows[0].dmax, 0.0);
        for row in &prof.rows {
            assert!((row.dmax - row.length as f64 * tau).abs() < 1e-9);
        }
        assert!((prof.upper_slope - tau).abs() < 1e-9);
    }

    #[test]
    fn unit_sphere_inversion_matches_standard_inversion() {
        let s = sphere_inversion(&HeisPoint::origin(2), 1.0);
        let i = crate::heisenberg::inversion_isometry(2);
        assert!(s.proj_eq(&i, 1e-12));
        assert!(s.compose(&s).is_projective_identity(1e-9));
    }

    #[test]
    fn sphere_inversion_point_agrees_with_matrix() {
        let sphere = Sphere { center: HeisPoint::planar(c(0.5, -1.0), 2.0), radius: 1.7 };
        let m = sphere_inversion(&sphere.center, sphere.radius);
        let p = HeisPoint::planar(c(2.0, 0.3), -0.4);
        let direct = sphere_invert_point(&sphere, &p).unwrap();
        let via = projective_to_heis(&m.apply(&heis_to_projective(&p)).unwrap()).unwrap();
        assert!((&direct.xi - &via.xi).norm() < 1e-12 && (direct.v - via.v).abs() < 1e-12);
        // Points on the sphere stay on it.
        let on = heis_translate(&sphere.center, &HoroPoint::planar(c(1.7, 0.0), 0.0, 0.0)).unwrap().base();
        let img = sphere_invert_point(&sphere, &on).unwrap();
        assert!((cygan_dist_boundary(&sphere.center, &img).unwrap() - 1.7).abs() < 1e-12);
    }

    #[test]
    fn packing_examples() {
        let two = SpherePacking::new(vec![
            Sphere { center: HeisPoint::planar(c(3.0, 0.0), 0.0), radius: 1.0 },
            Sphere { center: HeisPoint::planar(c(-3.0, 0.0), 0.0), radius: 1.0 },
        ])
        .unwrap();
        let (gens, cert) = packing_inversion_group(&two, 1000, 0).unwrap();
        assert_eq!(gens.len(), 2);
        assert!(gens.is_involution(0) && gens.is_involution(1));
        assert!(cert.min_margin > 0.0);
        assert_eq!(cert.pairs.len(), 2);
        let bad = SpherePacking::new(vec![
            Sphere { center: HeisPoint::origin(2), radius: 1.0 },
            Sphere { center: HeisPoint::planar(c(1.0, 0.0), 0.0), radius: 1.0 },
        ]);
        assert!(matches!(bad, Err(GeomError::InvalidPacking { i: 0, j: 1, .. })));
    }

    #[test]
    fn ball_samples_stay_in_ball() {
        let s = Sphere { center: HeisPoint::planar(c(1.0, 1.0), 3.0), radius: 0.5 };
        for p in ball_samples(&s, 500, 3) {
            assert!(cygan_dist_boundary(&s.center, &p).unwrap() <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn cyclic_limit_set_accumulates_at_fixed_points() {
        let gens = GroupGens::from_isometries(vec![dilation(2.0)]).unwrap();
        let seed = horo_to_projective(&HoroPoint::planar(c(1.0, 0.5), 0.3, 1.0));
        let pts = limit_set_sample(&gens, 30, &[seed]).unwrap();
        // A^30 pushes towards the origin; a^30 lands so close to ∞ that its
        // image is either dropped or huge.
        let near_origin = pts.iter().any(|s| s.word.starts_with('A') && cygan_norm_boundary(&s.point) < 1e-8);
        assert!(near_origin);
        for s in pts.iter().filter(|s| s.word.starts_with('a')) {
            assert!(cygan_norm_boundary(&s.point) > 1e8);
        }
    }

    #[test]
    fn boxdim_of_segments() {
        let line: Vec<HeisPoint> = (0..10_000)
            .map(|k| HeisPoint::planar(c(k as f64 / 10_000.0, 0.0), 0.0))
            .collect();
        let scales = [0.1, 0.05, 0.02, 0.01, 0.005];
        let est = boxdim_estimate(&line, &scales).unwrap();
        assert!((est.dimension - 1.0).abs() < 0.15, "{est:?}");
        let vertical: Vec<HeisPoint> = (0..10_000)
            .map(|k| HeisPoint::planar(c(0.0, 0.0), k as f64 / 10_000.0))
            .collect();
        let est = boxdim_estimate(&vertical, &[0.3, 0.2, 0.1, 0.05, 0.03]).unwrap();
        assert!((est.dimension - 2.0).abs() < 0.3, "{est:?}");
        let same = vec![HeisPoint::planar(c(1.0, 0.0), 0.0); 1000];
        assert!(matches!(boxdim_estimate(&same, &scales), Err(GeomError::DegeneratePointSet(_))));
    }

    #[test]
    fn cusp_examples() {
        let origin = HeisPoint::origin(2);
        let far = HoroPoint::planar(c(0.0, 0.0), 10.0, 0.0);
        assert!(!cusp_neighborhood_contains(&far, &origin, InvariantModel::VerticalAxis, 1.0).unwrap());
        let one = HoroPoint::planar(c(1.0, 0.0), 0.0, 0.0);
        assert!(cusp_neighborhood_contains(&one, &origin, InvariantModel::VerticalAxis, 10.0).unwrap());
        let at = origin.at_height(0.0);
        assert!(matches!(
            cusp_neighborhood_contains(&at, &origin, InvariantModel::VerticalAxis, 1.0),
            Err(GeomError::Pole)
        ));
        // I(0,10) = (0, −1/10).
        let img = heis_inversion(&far.base()).unwrap();
        assert!((img.v + 0.1).abs() < 1e-15);
    }

    #[test]
    fn labels_are_validated() {
        let g = dilation(2.0);
        assert!(GroupGens::new(vec![('a', g.clone()), ('a', g.clone())]).is_err());
        assert!(GroupGens::new(vec![('A', g.clone())]).is_err());
        assert!(GroupGens::new(vec![]).is_err());
        let t = embed_isometry(&HeisSimilarity::translation(HeisPoint::planar(c(0.0, 0.0), 1.0))).unwrap();
        assert!(GroupGens::new(vec![('t', t)]).is_ok());
    }
}
