//! JSON file formats for spaces, functions, isometries and reports.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classify::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::function::LogFunction;
use crate::interval::StepFunction;
use crate::isometry::{
    BandMatch, IntervalSegment, LinearMapTable, LogIsometry, MeasurePreservingIso, Translation,
};
use crate::measure_algebra::{Atom, HomogeneousComponent, MeasureAlgebra, WeightLabel};

/// A JSON number, or a string holding a decimal or an exact ratio `"p/q"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawReal {
    Number(f64),
    Text(String),
}

fn parse_real(text: &str) -> std::result::Result<f64, String> {
    let bad = || format!("not a number or ratio: {text:?}");
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(format!("zero denominator in {text:?}"));
            }
            p / q
        }
        None => text.trim().parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("non-finite value {text:?}"))
    }
}

impl RawReal {
    fn value<E: serde::de::Error>(self) -> std::result::Result<f64, E> {
        match self {
            RawReal::Number(v) => Ok(v),
            RawReal::Text(t) => parse_real(&t).map_err(E::custom),
        }
    }
}

fn real<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    RawReal::deserialize(d)?.value()
}

fn reals<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    Vec::<RawReal>::deserialize(d)?.into_iter().map(RawReal::value).collect()
}

fn real_rows<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<f64>>, D::Error> {
    Vec::<Vec<RawReal>>::deserialize(d)?
        .into_iter()
        .map(|row| row.into_iter().map(RawReal::value).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomEntry {
    #[serde(deserialize_with = "real")]
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEntry {
    pub weight_label: WeightLabel,
    #[serde(deserialize_with = "real")]
    pub measure: f64,
    /// Defaults to true for `aleph_0` and false otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realized: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    #[serde(default)]
    pub atoms: Vec<AtomEntry>,
    #[serde(default)]
    pub components: Vec<ComponentEntry>,
}

impl SpaceFile {
    pub fn build(&self) -> Result<MeasureAlgebra> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(a.weight))
            .collect::<Result<_>>()?;
        let components = self
            .components
            .iter()
            .map(|c| {
                let realized = c.realized.unwrap_or(c.weight_label == WeightLabel::ALEPH_0);
                HomogeneousComponent::new(c.weight_label, c.measure, realized)
            })
            .collect::<Result<_>>()?;
        let space = MeasureAlgebra::new(atoms, components);
        if space.is_empty() {
            return Err(Error::EmptyAlgebra);
        }
        Ok(space)
    }

    pub fn from_space(space: &MeasureAlgebra) -> Self {
        SpaceFile {
            atoms: space
                .atoms()
                .iter()
                .map(|a| AtomEntry { weight: a.weight() })
                .collect(),
            components: space
                .components()
                .iter()
                .map(|c| ComponentEntry {
                    weight_label: c.label(),
                    measure: c.measure(),
                    realized: Some(c.is_realized()),
                })
                .collect(),
        }
    }
}

/// A space given inline or as a path relative to the referring file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(String),
    Inline(SpaceFile),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceEntry {
    #[serde(deserialize_with = "real")]
    pub length: f64,
    #[serde(deserialize_with = "real")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub space: SpaceRef,
    #[serde(default, deserialize_with = "reals")]
    pub atom_values: Vec<f64>,
    /// One list of pieces per realized component, in component order.
    #[serde(default)]
    pub step_parts: Vec<Vec<PieceEntry>>,
}

impl FunctionFile {
    /// Resolves the space (relative paths against `base`) and builds the
    /// function on it.
    pub fn build(&self, base: Option<&Path>) -> Result<LogFunction> {
        let space = match &self.space {
            SpaceRef::Inline(s) => Arc::new(s.build()?),
            SpaceRef::Path(p) => Arc::new(load_space(&resolve(base, p))?),
        };
        self.build_on(space)
    }

    /// Builds the function on a given space, which must match the referenced
    /// one in shape.
    pub fn build_on(&self, space: Arc<MeasureAlgebra>) -> Result<LogFunction> {
        let parts = self
            .step_parts
            .iter()
            .map(|pieces| {
                let lengths: Vec<(f64, f64)> = pieces.iter().map(|p| (p.length, p.value)).collect();
                StepFunction::from_lengths(&lengths).map_err(Error::MalformedFunction)
            })
            .collect::<Result<_>>()?;
        LogFunction::new(space, self.atom_values.clone(), parts)
    }

    pub fn from_function(f: &LogFunction) -> Self {
        FunctionFile {
            space: SpaceRef::Inline(SpaceFile::from_space(f.space())),
            atom_values: f.atom_values().to_vec(),
            step_parts: f
                .realized_parts()
                .into_iter()
                .map(|s| {
                    s.lengths()
                        .into_iter()
                        .map(|(length, value)| PieceEntry { length, value })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsometryFile {
    pub atom_map: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_map: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rearrangements: Option<Vec<Vec<Translation>>>,
    /// Explicit affine pieces; an alternative to `component_map`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<IntervalSegment>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bands: Option<Vec<BandMatch>>,
}

impl IsometryFile {
    pub fn build_iso(&self, source: Arc<MeasureAlgebra>, target: Arc<MeasureAlgebra>) -> Result<MeasurePreservingIso> {
        if self.segments.is_some() || self.bands.is_some() {
            if self.component_map.is_some() || self.rearrangements.is_some() {
                return Err(Error::Parse(
                    "give either segments/bands or component_map/rearrangements, not both".into(),
                ));
            }
            return MeasurePreservingIso::from_parts(
                source,
                target,
                &self.atom_map,
                self.segments.clone().unwrap_or_default(),
                self.bands.clone().unwrap_or_default(),
            );
        }
        let component_map = self
            .component_map
            .clone()
            .unwrap_or_else(|| (0..source.component_count()).collect());
        MeasurePreservingIso::from_translations(
            source,
            target,
            &self.atom_map,
            &component_map,
            self.rearrangements.as_deref().unwrap_or(&[]),
        )
    }

    pub fn build(&self, source: Arc<MeasureAlgebra>, target: Arc<MeasureAlgebra>) -> Result<LogIsometry> {
        let iso = self.build_iso(source, target)?;
        match &self.signs {
            Some(signs) => LogIsometry::with_signs(&iso, signs),
            None => Ok(LogIsometry::from_measure_preserving(&iso)),
        }
    }

    pub fn from_iso(iso: &MeasurePreservingIso) -> Self {
        IsometryFile {
            atom_map: iso.atom_map(),
            segments: Some(iso.segments().to_vec()),
            bands: Some(iso.bands().to_vec()),
            ..Default::default()
        }
    }

    /// Describes an isometry whose homomorphism sends atoms to single atoms;
    /// signs are read off the multiplier.
    pub fn from_isometry(u: &LogIsometry) -> Result<Self> {
        let hom = u.homomorphism();
        let mut atom_map = Vec::with_capacity(hom.atom_images().len());
        let mut signs = Vec::with_capacity(hom.atom_images().len());
        for image in hom.atom_images() {
            let &[j] = image.as_slice() else {
                return Err(Error::Unrepresentable(
                    "an atom is mapped onto several atoms".into(),
                ));
            };
            atom_map.push(j);
            signs.push(u.multiplier().atom_values()[j].signum());
        }
        Ok(IsometryFile {
            atom_map,
            signs: Some(signs),
            segments: Some(hom.segments().to_vec()),
            bands: Some(hom.bands().to_vec()),
            ..Default::default()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearMapFile {
    #[serde(deserialize_with = "real_rows")]
    pub matrix: Vec<Vec<f64>>,
}

impl LinearMapFile {
    pub fn build(&self, source: Arc<MeasureAlgebra>, target: Arc<MeasureAlgebra>) -> Result<LinearMapTable> {
        LinearMapTable::new(source, target, self.matrix.clone())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecisionReport {
    pub isometric: bool,
    pub witness: Option<IsometryFile>,
    pub refutation: Option<Refutation>,
    pub extensions_used: Vec<String>,
}

impl From<&Decision> for DecisionReport {
    fn from(d: &Decision) -> Self {
        DecisionReport {
            isometric: d.isometric,
            witness: d.witness.as_ref().map(IsometryFile::from_iso),
            refutation: d.refutation.clone(),
            extensions_used: d.extensions_used.clone(),
        }
    }
}

/// Parses JSON, reporting line and column on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn resolve(base: Option<&Path>, p: &str) -> PathBuf {
    let p = Path::new(p);
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

pub fn load_space(path: &Path) -> Result<MeasureAlgebra> {
    read::<SpaceFile>(path)?.build()
}

pub fn load_function(path: &Path) -> Result<LogFunction> {
    read::<FunctionFile>(path)?.build(path.parent())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_round_trip() {
        let text = r#"{"atoms":[{"weight":0.5}],"components":[{"weight_label":"aleph_0","measure":1.0},{"weight_label":"aleph_2","measure":2.0}]}"#;
        let space = parse::<SpaceFile>(text).unwrap().build().unwrap();
        assert_eq!(space.atom_count(), 1);
        assert!(space.is_realized(0));
        assert!(!space.is_realized(1));
        let again = parse::<SpaceFile>(&to_json(&SpaceFile::from_space(&space))).unwrap().build().unwrap();
        assert_eq!(again, space);
    }

    #[test]
    fn rejects_bad_numbers() {
        assert!(matches!(
            parse::<SpaceFile>(r#"{"atoms":[{"weight":-1}]}"#).unwrap().build(),
            Err(Error::InvalidMeasure { .. })
        ));
        assert!(parse::<SpaceFile>(r#"{"atoms":[{"weight":NaN}]}"#).is_err());
        assert!(matches!(parse::<SpaceFile>(r#"{"atoms":[{"weight":1e999}]}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse::<SpaceFile>(r#"{"components":[{"weight_label":"aleph_1","measure":1,"realized":true}]}"#)
                .unwrap()
                .build(),
            Err(Error::RealizedHigherWeight(_))
        ));
        assert!(matches!(parse::<SpaceFile>(r#"{"atomz":[]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse::<SpaceFile>("{}").unwrap().build(), Err(Error::EmptyAlgebra)));
    }

    #[test]
    fn exact_ratios_in_input() {
        let text = r#"{"atoms":[{"weight":"1/3"},{"weight":"2/3"}],"components":[{"weight_label":"aleph_0","measure":"0.5"}]}"#;
        let space = parse::<SpaceFile>(text).unwrap().build().unwrap();
        assert_eq!(space.atom_weight(0), 1.0 / 3.0);
        assert_eq!(space.atom_weight(1), 2.0 / 3.0);
        let f: FunctionFile = parse(r#"{"space":{"atoms":[{"weight":1}]},"atom_values":["-3/4"]}"#).unwrap();
        assert_eq!(f.atom_values, vec![-0.75]);
        assert!(parse::<SpaceFile>(r#"{"atoms":[{"weight":"1/0"}]}"#).is_err());
        assert!(parse::<SpaceFile>(r#"{"atoms":[{"weight":"NaN"}]}"#).is_err());
        assert!(parse::<SpaceFile>(r#"{"atoms":[{"weight":"inf"}]}"#).is_err());
        assert!(parse::<LinearMapFile>(r#"{"matrix":[["1/2", 0.5]]}"#).is_ok());
    }

    #[test]
    fn parse_error_has_position() {
        let Err(Error::Parse(msg)) = parse::<SpaceFile>("{\n  \"atoms\": [,]\n}") else {
            panic!("expected parse error");
        };
        assert!(msg.starts_with("line 2"), "{msg}");
    }

    #[test]
    fn function_from_inline_space() {
        let text = r#"{"space":{"components":[{"weight_label":"aleph_0","measure":1.0}]},
            "step_parts":[[{"length":0.4,"value":1.0},{"length":0.6,"value":0.0}]]}"#;
        let f = parse::<FunctionFile>(text).unwrap().build(None).unwrap();
        assert!((f.fnorm().value() - 0.4 * std::f64::consts::LN_2).abs() < 1e-15);
        let again = FunctionFile::from_function(&f).build(None).unwrap();
        assert_eq!(again.fnorm(), f.fnorm());
    }

    #[test]
    fn lengths_must_sum_to_one() {
        let text = r#"{"space":{"components":[{"weight_label":"aleph_0","measure":1.0}]},
            "step_parts":[[{"length":0.4,"value":1.0}]]}"#;
        assert!(parse::<FunctionFile>(text).unwrap().build(None).is_err());
    }

    #[test]
    fn isometry_file_with_signs() {
        let s = Arc::new(MeasureAlgebra::atomic(&[0.5, 0.5]).unwrap());
        let file: IsometryFile = parse(r#"{"atom_map":[1,0],"signs":[1,-1]}"#).unwrap();
        let u = file.build(s.clone(), s.clone()).unwrap();
        let back = IsometryFile::from_isometry(&u).unwrap();
        assert_eq!(back.atom_map, vec![1, 0]);
        assert_eq!(back.signs, Some(vec![1.0, -1.0]));
    }
}
