//! Generator, matrix and sphere files.

use std::path::Path;

use chgeom::{CMatrix, GroupGens, HeisPoint, Isometry, Sphere, C64};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

fn bad(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {msg}", path.display()))
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(path, e))?;
    serde_json::from_str(&text).map_err(|e| bad(path, e))
}

fn pair(v: &Value) -> Option<C64> {
    match v.as_array()?.as_slice() {
        [re, im] => Some(C64::new(re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

fn is_pair(v: &Value) -> bool {
    pair(v).is_some()
}

/// A row-major list of `(n+1)²` complex entries.
fn matrix(path: &Path, v: &Value) -> CliResult<CMatrix> {
    let entries = v.as_array().ok_or_else(|| bad(path, "a matrix must be an array of [re, im] pairs"))?;
    let values: Vec<C64> = entries
        .iter()
        .map(|e| pair(e).ok_or_else(|| bad(path, format!("expected an [re, im] pair, found {e}"))))
        .collect::<CliResult<_>>()?;
    let side = (values.len() as f64).sqrt().round() as usize;
    if side * side != values.len() || side < 3 {
        return Err(bad(path, format!("{} entries do not form an (n+1)x(n+1) matrix with n >= 2", values.len())));
    }
    Ok(CMatrix::from_row_slice(side, side, &values))
}

/// Raw matrices of a file holding either one matrix or an array of them.
pub fn read_matrices(path: &Path) -> CliResult<Vec<CMatrix>> {
    let v = read_json(path)?;
    let arr = v.as_array().ok_or_else(|| bad(path, "expected a JSON array"))?;
    if arr.is_empty() {
        return Err(bad(path, "no matrices"));
    }
    if arr.iter().all(is_pair) {
        return Ok(vec![matrix(path, &v)?]);
    }
    arr.iter().map(|m| matrix(path, m)).collect()
}

/// Generators from a file; each matrix must preserve the form.
pub fn read_generators(path: &Path) -> CliResult<GroupGens> {
    let isos = read_matrices(path)?
        .into_iter()
        .map(Isometry::new)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupGens::from_isometries(isos)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SphereEntry {
    xi: Vec<[f64; 2]>,
    v: f64,
    radius: f64,
}

/// A sphere list `[{"xi": [[re, im], ...], "v": .., "radius": ..}, ...]`.
pub fn read_spheres(path: &Path) -> CliResult<Vec<Sphere>> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(path, e))?;
    let entries: Vec<SphereEntry> = serde_json::from_str(&text).map_err(|e| bad(path, e))?;
    Ok(entries
        .into_iter()
        .map(|e| Sphere {
            center: HeisPoint::new(
                chgeom::CVector::from_iterator(e.xi.len(), e.xi.iter().map(|[re, im]| C64::new(*re, *im))),
                e.v,
            ),
            radius: e.radius,
        })
        .collect())
}

/// Serializes matrices in the generator-file format.
pub fn matrices_to_json(ms: &[CMatrix]) -> Value {
    Value::Array(
        ms.iter()
            .map(|m| {
                let mut rows = Vec::new();
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        let z = m[(i, j)];
                        rows.push(serde_json::json!([z.re, z.im]));
                    }
                }
                Value::Array(rows)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use chgeom::Preset;

    #[test]
    fn generator_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gens.json");
        let g = Preset::Z2Lattice.group().unwrap();
        let ms: Vec<CMatrix> = g.generators().iter().map(|m| m.matrix().clone()).collect();
        std::fs::write(&path, matrices_to_json(&ms).to_string()).unwrap();
        let back = read_generators(&path).unwrap();
        for (a, b) in g.generators().iter().zip(back.generators()) {
            assert!(a.proj_eq(b, 1e-12));
        }
        // A single matrix parses too.
        std::fs::write(&path, matrices_to_json(&ms[..1])[0].to_string()).unwrap();
        assert_eq!(read_matrices(&path).unwrap().len(), 1);
    }

    #[test]
    fn malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        for text in ["{}", "[]", "[[1,2],[3,4]]", "[[1,2,3]]", "not json"] {
            std::fs::write(&path, text).unwrap();
            assert_eq!(read_matrices(&path).unwrap_err().exit_code(), 2, "{text}");
        }
    }
}
