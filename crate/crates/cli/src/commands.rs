//! One function per command; each returns a [`Report`].

use chgeom::bending::{bend_sweep, SweepOptions};
use chgeom::dirichlet::{dirichlet_side_census, pullback_domain_sides, SideCensus};
use chgeom::groups::{
    boxdim_estimate, cygan_window, default_basepoint, limit_set_sample, orbit_enumerate, packing_inversion_group,
    word_metric_profile,
};
use chgeom::heisenberg::projective_to_horo;
use chgeom::presets::{bend_spec, schottky_packing, two_sphere_packing};
use chgeom::projective::{boundary_fixed_points, classify_isometry, spectrum};
use chgeom::{
    CMatrix, GeomError, GroupGens, HeisPoint, InvariantModel, Isometry, IsometryClass, Preset, ProjectivePoint,
    SpherePacking,
};
use serde_json::{json, Value};

use crate::config::{RunConfig, Source};
use crate::error::{CliError, CliResult};
use crate::input::{matrices_to_json, read_generators, read_matrices, read_spheres};
use crate::svg::Series;

/// Scales of the limit-set box count.
pub const BOX_SCALES: [f64; 4] = [0.1, 0.05, 0.02, 0.01];

/// A tabular projection of the result.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Default)]
pub struct Report {
    pub result: Value,
    pub table: Table,
    pub scatter: Vec<Series>,
}

fn class_name(c: IsometryClass) -> &'static str {
    match c {
        IsometryClass::Identity => "identity",
        IsometryClass::Elliptic => "elliptic",
        IsometryClass::Parabolic => "parabolic",
        IsometryClass::Loxodromic => "loxodromic",
    }
}

fn heis_json(p: &HeisPoint, u: f64) -> Value {
    json!({
        "xi_re": p.xi.iter().map(|z| z.re).collect::<Vec<_>>(),
        "xi_im": p.xi.iter().map(|z| z.im).collect::<Vec<_>>(),
        "v": p.v,
        "u": u,
    })
}

/// Horospherical coordinates, or `"infinity"`.
fn point_json(p: &ProjectivePoint) -> CliResult<Value> {
    match projective_to_horo(p) {
        Ok(h) => Ok(heis_json(&h.base(), h.u)),
        Err(GeomError::PointAtInfinity) => Ok(json!("infinity")),
        Err(e) => Err(e.into()),
    }
}

fn center_of(cfg: &RunConfig, n: usize) -> ProjectivePoint {
    match &cfg.source {
        Some(Source::Preset(p)) => p.center(),
        _ => default_basepoint(n),
    }
}

fn group(cfg: &RunConfig) -> CliResult<GroupGens> {
    let g = match &cfg.source {
        Some(Source::Preset(p)) => p.group()?,
        Some(Source::File(f)) => read_generators(f)?,
        None => return Err(CliError::Input("no group given".into())),
    };
    if let Some(n) = cfg.n {
        if n != g.dim() {
            return Err(CliError::Spec(format!("--n {n} but the generators act on CH^{}", g.dim())));
        }
    }
    Ok(g)
}

fn f(x: f64) -> String {
    format!("{x:?}")
}

pub fn classify(cfg: &RunConfig) -> CliResult<Report> {
    let labeled: Vec<(String, CMatrix)> = match &cfg.source {
        Some(Source::Preset(p)) => {
            let g = p.group()?;
            g.labels().iter().zip(g.generators()).map(|(l, m)| (l.to_string(), m.matrix().clone())).collect()
        }
        Some(Source::File(path)) => read_matrices(path)?
            .into_iter()
            .enumerate()
            .map(|(i, m)| ((b'a' + (i % 26) as u8).to_string(), m))
            .collect(),
        None => return Err(CliError::Input("no matrix given".into())),
    };
    let mut entries = Vec::new();
    let mut table = Table {
        header: vec!["label", "class", "form_defect"],
        rows: Vec::new(),
    };
    for (label, m) in labeled {
        let iso = Isometry::new(m)?;
        if let Some(n) = cfg.n {
            if n != iso.dim() {
                return Err(CliError::Spec(format!("--n {n} but the matrix acts on CH^{}", iso.dim())));
            }
        }
        let class = classify_isometry(&iso)?;
        let eigenvalues: Vec<[f64; 2]> = spectrum(&iso).iter().map(|z| [z.re, z.im]).collect();
        let fixed: Value = if class == IsometryClass::Identity {
            json!("all")
        } else {
            Value::Array(boundary_fixed_points(&iso)?.iter().map(point_json).collect::<CliResult<_>>()?)
        };
        table.rows.push(vec![label.clone(), class_name(class).into(), f(iso.form_defect())]);
        entries.push(json!({
            "label": label,
            "class": class_name(class),
            "form_defect": iso.form_defect(),
            "eigenvalues": eigenvalues,
            "boundary_fixed_points": fixed,
        }));
    }
    Ok(Report {
        result: json!({ "matrices": entries }),
        table,
        ..Report::default()
    })
}

fn census_json(c: &SideCensus) -> Value {
    json!({
        "sides": c.side_words(),
        "margins": c.sides.iter().map(|s| s.min_margin).collect::<Vec<_>>(),
        "witnesses": c.sides.iter().map(|s| s.witnesses).collect::<Vec<_>>(),
        "rays": c.rays_used,
        "enum_radius": c.enumeration_radius,
        "unbounded_ray_fraction": c.unbounded_fraction(),
        "borderline_rays": c.borderline_rays,
    })
}

fn census_table(c: &SideCensus) -> Table {
    Table {
        header: vec!["word", "witnesses", "min_margin"],
        rows: c.sides.iter().map(|s| vec![s.word.clone(), s.witnesses.to_string(), f(s.min_margin)]).collect(),
    }
}

pub fn dirichlet(cfg: &RunConfig) -> CliResult<Report> {
    let g = group(cfg)?;
    match cfg.model {
        Some(model) => {
            let slice = pullback_domain_sides(&g, model, cfg.u0, cfg.radius, cfg.rays, cfg.seed)?;
            Ok(Report {
                result: json!({
                    "model": model.to_string(),
                    "u0": slice.u0,
                    "stable": slice.stable,
                    "census": census_json(&slice.census),
                    "extended": census_json(&slice.extended),
                }),
                table: census_table(&slice.census),
                ..Report::default()
            })
        }
        None => {
            let center = center_of(cfg, g.dim());
            let census = dirichlet_side_census(&g, &center, cfg.radius, cfg.rays, cfg.seed)?;
            Ok(Report {
                result: census_json(&census),
                table: census_table(&census),
                ..Report::default()
            })
        }
    }
}

pub fn bend(cfg: &RunConfig) -> CliResult<Report> {
    let spec = bend_spec()?;
    let limit_depth = cfg.depth.or(if cfg.format == crate::config::Format::Svg { Some(4) } else { None });
    let options = SweepOptions {
        zeta: cfg.zeta,
        probe_len: cfg.probe_len,
        probe_tol: cfg.tol,
        limit_depth,
        ..SweepOptions::default()
    };
    let report = bend_sweep(&spec, &cfg.etas, &options)?;
    let mut rows = Vec::new();
    let mut table = Table {
        header: vec!["eta", "cartan_alpha", "probe_pass", "min_word_gap"],
        rows: Vec::new(),
    };
    let mut scatter = Vec::new();
    for row in &report.rows {
        let gens = chgeom::bending::deform_group(&spec, row.eta)?;
        let ms: Vec<CMatrix> = gens.generators().iter().map(|m| m.matrix().clone()).collect();
        table.rows.push(vec![f(row.eta), f(row.cartan_alpha), row.probe.passed.to_string(), f(row.probe.min_gap)]);
        rows.push(json!({
            "eta": row.eta,
            "cartan_alpha": row.cartan_alpha,
            "probe_pass": row.probe.passed,
            "min_word_gap": row.probe.min_gap,
            "worst_word": row.probe.worst_word,
            "words_checked": row.probe.words_checked,
            "deformed_class": class_name(row.deformed_class),
            "tracked_point": heis_json(&row.tracked_point, 0.0),
            "generators": matrices_to_json(&ms),
            "limit_samples": row.limit_samples.iter().map(|p| heis_json(p, 0.0)).collect::<Vec<_>>(),
        }));
        scatter.push(Series {
            label: format!("eta = {}", row.eta),
            points: row.limit_samples.clone(),
        });
    }
    Ok(Report {
        result: json!({
            "zeta": cfg.zeta,
            "x1": heis_json(&report.x1, 0.0),
            "x2": heis_json(&report.x2, 0.0),
            "cartan_distinct": report.cartan_distinct,
            "zero_only_at_origin": report.zero_only_at_origin,
            "rows": rows,
        }),
        table,
        scatter,
    })
}

pub fn orbit(cfg: &RunConfig) -> CliResult<Report> {
    let g = group(cfg)?;
    let depth = cfg.depth.unwrap_or(4);
    let records = orbit_enumerate(&g, depth, &center_of(cfg, g.dim()))?;
    let mut points = Vec::new();
    let mut table = Table {
        header: vec!["word", "length", "distance", "xi_re", "xi_im", "v", "u"],
        rows: Vec::new(),
    };
    for r in &records {
        let h = projective_to_horo(&r.point)?;
        let mut p = heis_json(&h.base(), h.u);
        p["word"] = json!(r.word);
        p["length"] = json!(r.word_length);
        p["distance"] = json!(r.distance);
        points.push(p);
        table.rows.push(vec![
            r.word.clone(),
            r.word_length.to_string(),
            f(r.distance),
            f(h.xi[0].re),
            f(h.xi[0].im),
            f(h.v),
            f(h.u),
        ]);
    }
    Ok(Report {
        result: json!({ "depth": depth, "count": records.len(), "points": points }),
        table,
        ..Report::default()
    })
}

pub fn limitset(cfg: &RunConfig) -> CliResult<Report> {
    let g = group(cfg)?;
    let depth = cfg.depth.unwrap_or(6);
    let samples = limit_set_sample(&g, depth, &[center_of(cfg, g.dim())])?;
    let pts: Vec<HeisPoint> = samples.iter().map(|s| s.point.clone()).collect();
    let r_circle = pts
        .iter()
        .map(|p| InvariantModel::HorizontalLine.cygan_distance(&p.at_height(0.0)))
        .fold(0.0, f64::max);
    let window = cygan_window(&pts, cfg.window);
    let box_dim = if window.len() >= 1000 {
        let e = boxdim_estimate(&window, &BOX_SCALES)?;
        json!({
            "dimension": e.dimension,
            "residual": e.residual,
            "counts": e.counts.iter().map(|&(eps, n)| json!([eps, n])).collect::<Vec<_>>(),
        })
    } else {
        Value::Null
    };
    let mut table = Table {
        header: vec!["word", "xi_re", "xi_im", "v"],
        rows: Vec::new(),
    };
    let mut points = Vec::new();
    for s in &samples {
        let mut p = heis_json(&s.point, 0.0);
        p["word"] = json!(s.word);
        points.push(p);
        table.rows.push(vec![s.word.clone(), f(s.point.xi[0].re), f(s.point.xi[0].im), f(s.point.v)]);
    }
    Ok(Report {
        result: json!({
            "depth": depth,
            "count": samples.len(),
            "max_r_circle_distance": r_circle,
            "window": cfg.window,
            "window_count": window.len(),
            "box_dimension": box_dim,
            "points": points,
        }),
        table,
        scatter: vec![Series {
            label: format!("depth {depth}"),
            points: pts,
        }],
    })
}

pub fn packing(cfg: &RunConfig) -> CliResult<Report> {
    let packing = match &cfg.source {
        Some(Source::Preset(Preset::TwoSphere)) => two_sphere_packing()?,
        Some(Source::Preset(Preset::Schottky)) => schottky_packing()?,
        Some(Source::Preset(p)) => return Err(CliError::Spec(format!("preset {p} is not a sphere packing"))),
        Some(Source::File(path)) => SpherePacking::new(read_spheres(path)?)?,
        None => return Err(CliError::Input("no packing given".into())),
    };
    let (gens, cert) = packing_inversion_group(&packing, cfg.samples, cfg.seed)?;
    let ms: Vec<CMatrix> = gens.generators().iter().map(|m| m.matrix().clone()).collect();
    let table = Table {
        header: vec!["i", "j", "min_margin"],
        rows: cert.pairs.iter().map(|p| vec![p.i.to_string(), p.j.to_string(), f(p.min_margin)]).collect(),
    };
    Ok(Report {
        result: json!({
            "passed": true,
            "samples_per_ball": cert.samples_per_ball,
            "min_margin": cert.min_margin,
            "pairs": cert.pairs.iter().map(|p| json!({"i": p.i, "j": p.j, "min_margin": p.min_margin})).collect::<Vec<_>>(),
            "spheres": packing.spheres().iter().map(|s| {
                let mut c = heis_json(&s.center, 0.0);
                c["radius"] = json!(s.radius);
                c
            }).collect::<Vec<_>>(),
            "generators": matrices_to_json(&ms),
        }),
        table,
        ..Report::default()
    })
}

pub fn profile(cfg: &RunConfig) -> CliResult<Report> {
    let g = group(cfg)?;
    let depth = cfg.depth.unwrap_or(6);
    let prof = word_metric_profile(&g, depth, &center_of(cfg, g.dim()))?;
    let table = Table {
        header: vec!["length", "count", "dmin", "dmax"],
        rows: prof
            .rows
            .iter()
            .map(|r| vec![r.length.to_string(), r.count.to_string(), f(r.dmin), f(r.dmax)])
            .collect(),
    };
    Ok(Report {
        result: json!({
            "rows": prof.rows.iter().map(|r| json!({"length": r.length, "count": r.count, "dmin": r.dmin, "dmax": r.dmax})).collect::<Vec<_>>(),
            "max_generator_displacement": prof.max_generator_displacement,
            "upper_slope": prof.upper_slope,
            "lower_log_fit": [prof.lower_log_fit.0, prof.lower_log_fit.1],
        }),
        table,
        ..Report::default()
    })
}
