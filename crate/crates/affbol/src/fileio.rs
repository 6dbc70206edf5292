//! Stable JSON file formats: family files, reports, and their parsers.
//!
//! Serialization is canonical so that identical inputs give identical
//! bytes: UTF-8, keys sorted (serde_json's default map is a BTreeMap),
//! two-space pretty printing, plain integers only, one trailing newline.
//! Field elements appear as integers under the field module's base-r digit
//! encoding; subspaces appear as canonical RREF bases plus (for cosets) the
//! reduced base point, and parsing re-canonicalizes whatever it is given.
//!
//! Unknown fields are rejected, as are elements outside the field range,
//! non-prime-power orders, and version mismatches.

use crate::families::{
    FamilyError, Mode, PairFamily, PointSet, Violation, ViolationKind,
};
use crate::fq::{FieldError, Fq};
use crate::geometry::{
    AffineSubspace, GeometryError, LinearSubspace, ProjectiveSubspace, SpaceDesc,
    DEFAULT_POINT_BUDGET,
};
use crate::linalg::MatFq;
use serde_json::{json, Map, Value};
use std::fmt;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug)]
pub enum FileError {
    Io(std::io::Error),
    /// Malformed JSON with source position.
    Json { message: String, line: usize, column: usize },
    VersionMismatch { found: Value },
    /// Schema violation (wrong type, unknown field, missing field, bad
    /// element range).
    Invalid(String),
    Field(FieldError),
    Geometry(GeometryError),
    Family(FamilyError),
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Io(e) => write!(f, "io: {e}"),
            FileError::Json { message, line, column } => {
                write!(f, "json parse error at line {line}, column {column}: {message}")
            }
            FileError::VersionMismatch { found } => {
                write!(f, "unsupported format_version {found}, expected {FORMAT_VERSION}")
            }
            FileError::Invalid(msg) => write!(f, "invalid family file: {msg}"),
            FileError::Field(e) => write!(f, "{e}"),
            FileError::Geometry(e) => write!(f, "{e}"),
            FileError::Family(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FileError {}

impl From<std::io::Error> for FileError {
    fn from(e: std::io::Error) -> Self {
        FileError::Io(e)
    }
}

impl From<FieldError> for FileError {
    fn from(e: FieldError) -> Self {
        FileError::Field(e)
    }
}

impl From<GeometryError> for FileError {
    fn from(e: GeometryError) -> Self {
        FileError::Geometry(e)
    }
}

impl From<FamilyError> for FileError {
    fn from(e: FamilyError) -> Self {
        FileError::Family(e)
    }
}

/// A parsed family file: geometry-typed pairs plus the context needed to
/// re-serialize even when the pair list is empty.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyFile {
    Sets {
        ground_size: u64,
        family: PairFamily<PointSet>,
    },
    Linear {
        space: SpaceDesc,
        family: PairFamily<LinearSubspace>,
    },
    Affine {
        space: SpaceDesc,
        family: PairFamily<AffineSubspace>,
    },
    /// `space` is the homogeneous coordinate space F_q^(n+1) of PG(n, q).
    Projective {
        space: SpaceDesc,
        family: PairFamily<ProjectiveSubspace>,
    },
}

impl FamilyFile {
    pub fn geometry_name(&self) -> &'static str {
        match self {
            FamilyFile::Sets { .. } => "sets",
            FamilyFile::Linear { .. } => "linear",
            FamilyFile::Affine { .. } => "affine",
            FamilyFile::Projective { .. } => "projective",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FamilyFile::Sets { family, .. } => family.len(),
            FamilyFile::Linear { family, .. } => family.len(),
            FamilyFile::Affine { family, .. } => family.len(),
            FamilyFile::Projective { family, .. } => family.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self {
            FamilyFile::Sets { family, .. } => family.mode(),
            FamilyFile::Linear { family, .. } => family.mode(),
            FamilyFile::Affine { family, .. } => family.mode(),
            FamilyFile::Projective { family, .. } => family.mode(),
        }
    }

    /// Same pairs, different verification mode.
    pub fn with_mode(&self, mode: Mode) -> FamilyFile {
        match self {
            FamilyFile::Sets { ground_size, family } => FamilyFile::Sets {
                ground_size: *ground_size,
                family: PairFamily::new(family.pairs().to_vec(), mode).expect("same context"),
            },
            FamilyFile::Linear { space, family } => FamilyFile::Linear {
                space: space.clone(),
                family: PairFamily::new(family.pairs().to_vec(), mode).expect("same context"),
            },
            FamilyFile::Affine { space, family } => FamilyFile::Affine {
                space: space.clone(),
                family: PairFamily::new(family.pairs().to_vec(), mode).expect("same context"),
            },
            FamilyFile::Projective { space, family } => FamilyFile::Projective {
                space: space.clone(),
                family: PairFamily::new(family.pairs().to_vec(), mode).expect("same context"),
            },
        }
    }

    /// Runs the mode's verifier and returns all violations as JSON values.
    pub fn verify_violations(&self) -> Vec<Value> {
        fn render<W, F: Fn(&W) -> Value>(vs: Vec<Violation<W>>, wit: F) -> Vec<Value> {
            vs.into_iter()
                .map(|v| {
                    json!({
                        "kind": match v.kind {
                            ViolationKind::DiagonalNonempty => "diagonal_nonempty",
                            ViolationKind::OffDiagonalEmpty => "off_diagonal_empty",
                        },
                        "i": v.i,
                        "j": v.j,
                        "witness": v.witness.as_ref().map(&wit).unwrap_or(Value::Null),
                    })
                })
                .collect()
        }
        match self {
            FamilyFile::Sets { family, .. } => family
                .verify()
                .err()
                .map(|vs| render(vs, |w| json!(w)))
                .unwrap_or_default(),
            FamilyFile::Linear { family, .. } => family
                .verify()
                .err()
                .map(|vs| render(vs, |w| json!(w)))
                .unwrap_or_default(),
            FamilyFile::Affine { family, .. } => family
                .verify()
                .err()
                .map(|vs| render(vs, |w| json!(w)))
                .unwrap_or_default(),
            FamilyFile::Projective { family, .. } => family
                .verify()
                .err()
                .map(|vs| render(vs, |w| json!(w)))
                .unwrap_or_default(),
        }
    }

    // ---- Serialization ----

    pub fn to_value(&self) -> Value {
        let mode = match self.mode() {
            Mode::Skew => "skew",
            Mode::Symmetric => "symmetric",
        };
        match self {
            FamilyFile::Sets { ground_size, family } => {
                let pairs: Vec<Value> = family
                    .pairs()
                    .iter()
                    .map(|(a, b)| {
                        json!({
                            "A": a.elems().collect::<Vec<u64>>(),
                            "B": b.elems().collect::<Vec<u64>>(),
                        })
                    })
                    .collect();
                json!({
                    "format_version": FORMAT_VERSION,
                    "geometry": "sets",
                    "ground_size": ground_size,
                    "mode": mode,
                    "pairs": pairs,
                })
            }
            FamilyFile::Linear { space, family } => {
                let pairs: Vec<Value> = family
                    .pairs()
                    .iter()
                    .map(|(a, b)| {
                        json!({
                            "A": {"basis": a.basis().row_vecs()},
                            "B": {"basis": b.basis().row_vecs()},
                        })
                    })
                    .collect();
                json!({
                    "format_version": FORMAT_VERSION,
                    "geometry": "linear",
                    "mode": mode,
                    "n": space.n(),
                    "pairs": pairs,
                    "q": space.q(),
                })
            }
            FamilyFile::Affine { space, family } => {
                let pairs: Vec<Value> = family
                    .pairs()
                    .iter()
                    .map(|(a, b)| {
                        json!({
                            "A": {"base": a.base(), "basis": a.direction().basis().row_vecs()},
                            "B": {"base": b.base(), "basis": b.direction().basis().row_vecs()},
                        })
                    })
                    .collect();
                json!({
                    "format_version": FORMAT_VERSION,
                    "geometry": "affine",
                    "mode": mode,
                    "n": space.n(),
                    "pairs": pairs,
                    "q": space.q(),
                })
            }
            FamilyFile::Projective { space, family } => {
                let pairs: Vec<Value> = family
                    .pairs()
                    .iter()
                    .map(|(a, b)| {
                        json!({
                            "A": {"basis": a.carrier().basis().row_vecs()},
                            "B": {"basis": b.carrier().basis().row_vecs()},
                        })
                    })
                    .collect();
                json!({
                    "format_version": FORMAT_VERSION,
                    "geometry": "projective",
                    "mode": mode,
                    "n": space.n() - 1,
                    "pairs": pairs,
                    "q": space.q(),
                })
            }
        }
    }

    /// Canonical bytes: sorted keys, two-space indentation, one trailing
    /// newline.
    pub fn to_canonical_string(&self) -> String {
        canonical_json(&self.to_value())
    }

    // ---- Parsing ----

    pub fn parse(text: &str) -> Result<FamilyFile, FileError> {
        FamilyFile::parse_with_budget(text, DEFAULT_POINT_BUDGET)
    }

    pub fn parse_with_budget(text: &str, budget: u64) -> Result<FamilyFile, FileError> {
        let value: Value = serde_json::from_str(text).map_err(|e| FileError::Json {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })?;
        let mut obj = into_object(value, "top level")?;

        let version = take(&mut obj, "format_version")?;
        if version.as_u64() != Some(FORMAT_VERSION) {
            return Err(FileError::VersionMismatch { found: version });
        }
        let geometry = take_string(&mut obj, "geometry")?;
        let mode = match take_string(&mut obj, "mode")?.as_str() {
            "skew" => Mode::Skew,
            "symmetric" => Mode::Symmetric,
            other => return Err(FileError::Invalid(format!("unknown mode `{other}`"))),
        };
        let pairs = match take(&mut obj, "pairs")? {
            Value::Array(a) => a,
            _ => return Err(FileError::Invalid("`pairs` must be an array".into())),
        };

        let file = match geometry.as_str() {
            "sets" => {
                let ground_size = take_u64(&mut obj, "ground_size")?;
                reject_unknown(&obj)?;
                let mut out = Vec::with_capacity(pairs.len());
                for p in pairs {
                    let (a, b) = split_pair(p)?;
                    out.push((
                        PointSet::new(ground_size, parse_u64_list(a, "A")?)?,
                        PointSet::new(ground_size, parse_u64_list(b, "B")?)?,
                    ));
                }
                FamilyFile::Sets {
                    ground_size,
                    family: PairFamily::new(out, mode)?,
                }
            }
            "linear" | "affine" | "projective" => {
                let q = take_u64(&mut obj, "q")?;
                let n = take_u64(&mut obj, "n")? as usize;
                reject_unknown(&obj)?;
                let field = Fq::new(q)?;
                let ambient = if geometry == "projective" { n + 1 } else { n };
                let space = SpaceDesc::with_budget(field, ambient, budget)?;
                match geometry.as_str() {
                    "linear" => {
                        let mut out = Vec::with_capacity(pairs.len());
                        for p in pairs {
                            let (a, b) = split_pair(p)?;
                            out.push((
                                parse_linear(&space, a, "A")?,
                                parse_linear(&space, b, "B")?,
                            ));
                        }
                        FamilyFile::Linear {
                            space,
                            family: PairFamily::new(out, mode)?,
                        }
                    }
                    "affine" => {
                        let mut out = Vec::with_capacity(pairs.len());
                        for p in pairs {
                            let (a, b) = split_pair(p)?;
                            out.push((
                                parse_affine(&space, a, "A")?,
                                parse_affine(&space, b, "B")?,
                            ));
                        }
                        FamilyFile::Affine {
                            space,
                            family: PairFamily::new(out, mode)?,
                        }
                    }
                    _ => {
                        let mut out = Vec::with_capacity(pairs.len());
                        for p in pairs {
                            let (a, b) = split_pair(p)?;
                            out.push((
                                parse_projective(&space, a, "A")?,
                                parse_projective(&space, b, "B")?,
                            ));
                        }
                        FamilyFile::Projective {
                            space,
                            family: PairFamily::new(out, mode)?,
                        }
                    }
                }
            }
            other => {
                return Err(FileError::Invalid(format!("unknown geometry `{other}`")));
            }
        };
        Ok(file)
    }
}

/// Canonical rendering for any report or family value: sorted keys come
/// free from serde_json's BTreeMap, pretty printing is stable, and a
/// trailing newline closes the document.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

/// The common report envelope. Every numeric claim inside `result` is
/// recomputable from the inputs; volatile data (timings) is left to the
/// caller to attach explicitly.
pub fn report_envelope(command: &str, parameters: Value, result: Value) -> Value {
    json!({
        "command": command,
        "parameters": parameters,
        "result": result,
        "tool_version": env!("CARGO_PKG_VERSION"),
    })
}

// ---- Value helpers ----

fn into_object(v: Value, what: &str) -> Result<Map<String, Value>, FileError> {
    match v {
        Value::Object(m) => Ok(m),
        _ => Err(FileError::Invalid(format!("{what} must be an object"))),
    }
}

fn take(obj: &mut Map<String, Value>, key: &str) -> Result<Value, FileError> {
    obj.remove(key)
        .ok_or_else(|| FileError::Invalid(format!("missing field `{key}`")))
}

fn take_string(obj: &mut Map<String, Value>, key: &str) -> Result<String, FileError> {
    match take(obj, key)? {
        Value::String(s) => Ok(s),
        _ => Err(FileError::Invalid(format!("field `{key}` must be a string"))),
    }
}

fn take_u64(obj: &mut Map<String, Value>, key: &str) -> Result<u64, FileError> {
    take(obj, key)?
        .as_u64()
        .ok_or_else(|| FileError::Invalid(format!("field `{key}` must be a nonnegative integer")))
}

fn reject_unknown(obj: &Map<String, Value>) -> Result<(), FileError> {
    if let Some(key) = obj.keys().next() {
        return Err(FileError::Invalid(format!("unknown field `{key}`")));
    }
    Ok(())
}

fn split_pair(p: Value) -> Result<(Value, Value), FileError> {
    let mut obj = into_object(p, "pair")?;
    let a = take(&mut obj, "A")?;
    let b = take(&mut obj, "B")?;
    reject_unknown(&obj)?;
    Ok((a, b))
}

fn parse_u64_list(v: Value, what: &str) -> Result<Vec<u64>, FileError> {
    match v {
        Value::Array(items) => items
            .into_iter()
            .map(|x| {
                x.as_u64()
                    .ok_or_else(|| FileError::Invalid(format!("{what}: elements must be integers")))
            })
            .collect(),
        _ => Err(FileError::Invalid(format!("{what} must be an array"))),
    }
}

fn parse_element_vector(space: &SpaceDesc, v: Value, what: &str) -> Result<Vec<u32>, FileError> {
    let raw = parse_u64_list(v, what)?;
    if raw.len() != space.n() {
        return Err(FileError::Invalid(format!(
            "{what}: vector length {} does not match n = {}",
            raw.len(),
            space.n()
        )));
    }
    raw.into_iter()
        .map(|x| {
            if x < space.q() as u64 {
                Ok(x as u32)
            } else {
                Err(FileError::Invalid(format!(
                    "{what}: element {x} outside field of order {}",
                    space.q()
                )))
            }
        })
        .collect()
}

fn parse_basis(space: &SpaceDesc, v: Value, what: &str) -> Result<MatFq, FileError> {
    let rows = match v {
        Value::Array(rows) => rows,
        _ => return Err(FileError::Invalid(format!("{what}.basis must be an array"))),
    };
    let mut parsed: Vec<Vec<u32>> = Vec::with_capacity(rows.len());
    for row in rows {
        parsed.push(parse_element_vector(space, row, what)?);
    }
    Ok(MatFq::from_rows(&parsed, space.n()))
}

fn parse_linear(space: &SpaceDesc, v: Value, what: &str) -> Result<LinearSubspace, FileError> {
    let mut obj = into_object(v, what)?;
    let basis = parse_basis(space, take(&mut obj, "basis")?, what)?;
    reject_unknown(&obj)?;
    Ok(LinearSubspace::from_spanning(space, &basis)?)
}

fn parse_affine(space: &SpaceDesc, v: Value, what: &str) -> Result<AffineSubspace, FileError> {
    let mut obj = into_object(v, what)?;
    let base = parse_element_vector(space, take(&mut obj, "base")?, what)?;
    let basis = parse_basis(space, take(&mut obj, "basis")?, what)?;
    reject_unknown(&obj)?;
    Ok(AffineSubspace::canonicalize(space, &basis, &base)?)
}

fn parse_projective(
    space: &SpaceDesc,
    v: Value,
    what: &str,
) -> Result<ProjectiveSubspace, FileError> {
    let mut obj = into_object(v, what)?;
    let basis = parse_basis(space, take(&mut obj, "basis")?, what)?;
    reject_unknown(&obj)?;
    let carrier = LinearSubspace::from_spanning(space, &basis)?;
    if carrier.dim() == 0 {
        return Err(FileError::Invalid(format!(
            "{what}: projective subspace needs a nonzero carrier"
        )));
    }
    Ok(ProjectiveSubspace::new(carrier)?)
}
