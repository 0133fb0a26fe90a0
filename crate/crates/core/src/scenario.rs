//! Root-datum presets and scenario resolution.
//!
//! A preset file is JSON:
//!
//! ```json
//! { "label": "gl2", "tag": "gl_n", "rank": 2,
//!   "generators": [[[0, 1], [1, 0]]],
//!   "positive_roots": [[1, -1]],
//!   "torsion_generators": [["zeta4", 4]] }
//! ```
//!
//! `positive_roots`, `cover_embedding` and `description` are optional. When a
//! `cover_embedding` `B` is present, row `j` of `B` expresses basis character
//! `j` in the characters of a covering torus, so a cover point `s` maps to the
//! point with coordinates `prod_i s_i^(B_ji)`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::IntegerMatrix;
use crate::torus::{Coordinate, Torus, TorusError, TorusPoint, ValueGroup, QH};
use crate::weyl::{enumerate_group, LatticeMatrix, PresetTag, RootSystem, WeylError, WeylGroup, DEFAULT_MAX_ORDER};

/// Environment variable holding extra preset directories (`:`-separated).
pub const PRESET_PATH_ENV: &str = "EXTQUOT_PRESET_PATH";

const EMBEDDED: &[(&str, &str)] = &[
    ("gl1", include_str!("../presets/gl1.json")),
    ("gl2", include_str!("../presets/gl2.json")),
    ("gl3", include_str!("../presets/gl3.json")),
    ("gl4", include_str!("../presets/gl4.json")),
    ("gl5", include_str!("../presets/gl5.json")),
    ("gl6", include_str!("../presets/gl6.json")),
    ("sl2", include_str!("../presets/sl2.json")),
    ("g2_ramified", include_str!("../presets/g2_ramified.json")),
    ("g2_full", include_str!("../presets/g2_full.json")),
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("cannot read preset {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed preset {name}: {message}")]
    Malformed { name: String, message: String },
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetFile {
    pub label: String,
    #[serde(default)]
    pub tag: PresetTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub rank: usize,
    pub generators: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_roots: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_embedding: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub torsion_generators: Vec<(String, u64)>,
}

/// What a CLI invocation asks for: a preset name or path plus value-group
/// declarations (`name` or `name:order`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub preset: String,
    pub extensions: Vec<String>,
}

/// A torus with its Weyl group, ready for computation.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: Option<String>,
    pub torus: Torus,
    pub group: WeylGroup,
    pub cover_embedding: Option<IntegerMatrix>,
}

pub fn embedded_presets() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(n, _)| *n)
}

fn search_dirs() -> Vec<PathBuf> {
    std::env::var_os(PRESET_PATH_ENV)
        .map(|v| std::env::split_paths(&v).collect())
        .unwrap_or_default()
}

/// Finds a preset: embedded registry first, then `EXTQUOT_PRESET_PATH`
/// directories (`<name>.json`), then `name` as a file path.
pub fn resolve_preset(name: &str) -> Result<PresetFile, ScenarioError> {
    if let Some((_, text)) = EMBEDDED.iter().find(|(n, _)| *n == name) {
        return parse_preset(name, text);
    }
    for dir in search_dirs() {
        let p = dir.join(format!("{name}.json"));
        if p.is_file() {
            return read_preset(&p);
        }
    }
    let p = Path::new(name);
    if p.is_file() {
        return read_preset(p);
    }
    Err(ScenarioError::UnknownPreset(name.to_string()))
}

fn read_preset(path: &Path) -> Result<PresetFile, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_preset(&path.display().to_string(), &text)
}

pub fn parse_preset(name: &str, text: &str) -> Result<PresetFile, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Malformed {
        name: name.to_string(),
        message: e.to_string(),
    })
}

impl Scenario {
    pub fn load(config: &ScenarioConfig) -> Result<Self, ScenarioError> {
        let preset = resolve_preset(&config.preset)?;
        let mut s = Self::from_preset(&preset)?;
        for decl in &config.extensions {
            s.torus.value_group.extend(decl)?;
        }
        Ok(s)
    }

    /// Loads a preset by name with no value-group extensions.
    pub fn preset(name: &str) -> Result<Self, ScenarioError> {
        Self::load(&ScenarioConfig {
            preset: name.to_string(),
            extensions: Vec::new(),
        })
    }

    pub fn from_preset(p: &PresetFile) -> Result<Self, ScenarioError> {
        let malformed = |message: String| ScenarioError::Malformed {
            name: p.label.clone(),
            message,
        };
        let gens = p
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                LatticeMatrix::from_rows(g).ok_or_else(|| malformed(format!("generator {i} is not square")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut group = enumerate_group(p.rank, gens, DEFAULT_MAX_ORDER)?.with_tag(p.tag);
        if let Some(pos) = &p.positive_roots {
            if pos.iter().any(|r| r.len() != p.rank) {
                return Err(malformed("root of wrong length".into()));
            }
            group = group.with_roots(RootSystem {
                positive: pos.clone(),
            });
        }
        let cover_embedding = match &p.cover_embedding {
            Some(rows) => {
                let m = IntegerMatrix::from_rows(rows).map_err(|e| malformed(e.to_string()))?;
                if m.rows() != p.rank || m.cols() != p.rank || m.determinant().is_none_or(|d| d == BigInt::from(0)) {
                    return Err(malformed("cover_embedding must be a nonsingular rank x rank matrix".into()));
                }
                Some(m)
            }
            None => None,
        };
        let value_group = ValueGroup::new(vec![QH.to_string()], p.torsion_generators.clone())?;
        Ok(Self {
            name: p.label.clone(),
            description: p.description.clone(),
            torus: Torus::new(p.rank, value_group, p.label.clone()),
            group,
            cover_embedding,
        })
    }

    /// Image of a point of the covering torus.
    pub fn point_from_cover(&self, cover: &TorusPoint) -> Option<TorusPoint> {
        let b = self.cover_embedding.as_ref()?;
        (cover.rank() == b.cols()).then(|| cover.transform(b))
    }

    /// A preimage in the covering torus, or `None` when one cannot be written
    /// in the value group (a free symbol would need a fractional exponent, or
    /// a needed root of unity is missing).
    pub fn lift_to_cover(&self, t: &TorusPoint) -> Option<TorusPoint> {
        let b = self.cover_embedding.as_ref()?;
        let n = b.rows();
        if t.rank() != n {
            return None;
        }
        let binv = rational_inverse(b)?;
        let solve = |v: &[BigRational]| -> Vec<BigRational> {
            (0..n).map(|i| (0..n).map(|j| &binv[i][j] * &v[j]).sum()).collect()
        };
        let mut coords = vec![Coordinate::one(); n];

        let torsion: Vec<Coordinate> = t
            .coords()
            .iter()
            .map(|c| {
                let mut r = c.clone();
                for name in c.free_part().keys() {
                    r = r.without(name);
                }
                r
            })
            .collect();
        let x = TorusPoint::new(torsion).torsion_log()?;
        for (i, y) in solve(&x).iter().enumerate() {
            coords[i] = coords[i].mul(&self.torus.value_group.root_of_unity(y)?);
        }

        let symbols: BTreeSet<&String> = t.coords().iter().flat_map(|c| c.free_part().keys()).collect();
        for name in symbols {
            let e: Vec<BigRational> = t
                .coords()
                .iter()
                .map(|c| BigRational::from_integer(c.free_exponent(name).into()))
                .collect();
            for (i, y) in solve(&e).iter().enumerate() {
                if !y.is_integer() {
                    return None;
                }
                let k = y.to_integer().to_i64()?;
                coords[i] = coords[i].mul(&Coordinate::free_pow(name, k));
            }
        }
        Some(TorusPoint::new(coords))
    }
}

fn rational_inverse(m: &IntegerMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(m[(i, j)].clone())
                    } else {
                        BigRational::from_integer(BigInt::from((j - n == i) as i64))
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c].clone();
                if f.is_zero() {
                    continue;
                }
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
