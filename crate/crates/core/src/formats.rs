//! JSON file formats for cubes, measures and groups.
//!
//! Arrays are positional and 0-based (`entries[i][j][k]` is `a[i+1][j+1][k+1]`);
//! Cayley tables use 1-based state labels. A scalar is a JSON integer or a
//! string holding an integer, a plain decimal, or a fraction `"p/q"`.
//! Writers emit every scalar as a string in lowest terms with a fixed field
//! order, so output is byte-for-byte reproducible.
//!
//! ```text
//! cube:    {"n": 2, "entries": [[["3/4", "1/4"], ["1/4", "3/4"]], ...]}
//! measure: {"n": 2, "values": ["3/4", "1/4"]}
//! group:   {"invariant_factors": [2, 2]}  or  {"cayley_table": [[1, 2], [2, 1]]}
//! ```

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serializer};
use thiserror::Error;

use crate::cube::{validate_cube, CoreError, CubeViolation, MeasureVector, StructureCube, ValidationError};
use crate::groups::{cayley_table, CayleyTable, GroupError, InvariantFactors};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Error)]
pub enum FormatError {
    /// Syntax or schema error; the message carries line and column.
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Measure(#[from] CoreError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A scalar read from a file, converted exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar(pub Rational);

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a string holding an integer, decimal or p/q fraction")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
                Err(E::custom(format!(
                    "bare decimal {v} is not accepted; quote it (\"{v}\") so it converts exactly"
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                parse_rational(v).map(Scalar).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeDoc {
    n: usize,
    entries: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureDoc {
    n: usize,
    values: Vec<Scalar>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    invariant_factors: Option<Vec<usize>>,
    cayley_table: Option<Vec<Vec<usize>>>,
}

/// A parsed but not yet validated cube document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCube {
    pub n: usize,
    pub entries: Vec<Vec<Vec<Rational>>>,
}

impl RawCube {
    /// Runs [`validate_cube`], also checking the declared `n`.
    pub fn validate(self) -> Result<StructureCube, ValidationError> {
        if self.entries.len() != self.n {
            return Err(ValidationError {
                violations: vec![CubeViolation::ShapeMismatch {
                    detail: format!("declared n = {} but entries has {} planes", self.n, self.entries.len()),
                }],
            });
        }
        validate_cube(self.entries)
    }
}

pub fn parse_cube(text: &str) -> Result<RawCube, FormatError> {
    let doc: CubeDoc = serde_json::from_str(text)?;
    Ok(RawCube {
        n: doc.n,
        entries: doc
            .entries
            .into_iter()
            .map(|plane| {
                plane
                    .into_iter()
                    .map(|col| col.into_iter().map(|s| s.0).collect())
                    .collect()
            })
            .collect(),
    })
}

pub fn parse_measure(text: &str) -> Result<MeasureVector, FormatError> {
    let doc: MeasureDoc = serde_json::from_str(text)?;
    if doc.values.len() != doc.n {
        return Err(FormatError::Field {
            field: "values".into(),
            message: format!("declared n = {} but {} values given", doc.n, doc.values.len()),
        });
    }
    Ok(MeasureVector::new(doc.values.into_iter().map(|s| s.0).collect())?)
}

pub fn parse_group(text: &str) -> Result<CayleyTable, FormatError> {
    let doc: GroupDoc = serde_json::from_str(text)?;
    match (doc.invariant_factors, doc.cayley_table) {
        (Some(factors), None) => Ok(cayley_table(&InvariantFactors::new(factors)?)),
        (None, Some(rows)) => Ok(CayleyTable::from_one_based(&rows)?),
        _ => Err(FormatError::Field {
            field: "invariant_factors/cayley_table".into(),
            message: "exactly one of the two fields must be present".into(),
        }),
    }
}

fn quoted(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("\"{}\"", format_rational(v))).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical cube document, one `a[i]` plane per line.
pub fn write_cube(cube: &StructureCube) -> String {
    let n = cube.n();
    let planes: Vec<String> = (0..n)
        .map(|i| {
            let cols: Vec<String> = (0..n).map(|j| quoted(cube.column(i, j))).collect();
            format!("    [{}]", cols.join(", "))
        })
        .collect();
    format!("{{\n  \"n\": {n},\n  \"entries\": [\n{}\n  ]\n}}\n", planes.join(",\n"))
}

pub fn write_measure(m: &MeasureVector) -> String {
    format!("{{\n  \"n\": {},\n  \"values\": {}\n}}\n", m.n(), quoted(m.values()))
}

/// Group document holding the 1-based Cayley table.
pub fn write_group(table: &CayleyTable) -> String {
    let rows: Vec<String> = table
        .rows_one_based()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            format!("    [{}]", cells.join(", "))
        })
        .collect();
    format!("{{\n  \"cayley_table\": [\n{}\n  ]\n}}\n", rows.join(",\n"))
}

pub fn write_factors(factors: &InvariantFactors) -> String {
    let cells: Vec<String> = factors.factors().iter().map(ToString::to_string).collect();
    format!("{{\n  \"invariant_factors\": [{}]\n}}\n", cells.join(", "))
}

/// Serde helper: a rational as its canonical string.
pub fn serialize_rational<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(value))
}

/// Serde helper: rationals as canonical strings.
pub fn serialize_rationals<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(format_rational))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::tests::z2_cube;
    use crate::derivation::derive_cube;
    use crate::groups::enumerate_abelian_groups;
    use crate::rational::ratio;
    use proptest::prelude::*;

    const Z2: &str = r#"{"n": 2, "entries": [[["3/4", "0.25"], [0.25e0, "3/4"]], [["1/4", "3/4"], ["3/4", "1/4"]]]}"#;

    #[test]
    fn reads_mixed_scalars() {
        let text = r#"{"n": 2, "entries": [[["3/4", "0.25"], ["1/4", "0.75"]], [["1/4", "3/4"], [1, 0]]]}"#;
        let raw = parse_cube(text).unwrap();
        assert_eq!(raw.entries[0][0], vec![ratio(3, 4), ratio(1, 4)]);
        assert_eq!(raw.entries[1][1], vec![ratio(1, 1), ratio(0, 1)]);
    }

    #[test]
    fn bare_floats_are_rejected_with_position() {
        let err = parse_cube(Z2).unwrap_err().to_string();
        assert!(err.contains("quote it"), "{err}");
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn bad_scalar_names_position() {
        let text = "{\n \"n\": 1,\n \"entries\": [[[\"abc\"]]]\n}";
        let err = parse_cube(text).unwrap_err().to_string();
        assert!(err.contains("malformed scalar `abc`"), "{err}");
        assert!(err.contains("line 3"), "{err}");
        assert!(parse_cube(r#"{"n": 1}"#).unwrap_err().to_string().contains("entries"));
        assert!(parse_cube(r#"{"n": 1, "entries": [[["1"]]], "x": 0}"#).is_err());
    }

    #[test]
    fn declared_order_must_match() {
        let raw = parse_cube(r#"{"n": 2, "entries": [[["1"]]]}"#).unwrap();
        assert!(matches!(
            raw.validate().unwrap_err().violations[0],
            CubeViolation::ShapeMismatch { .. }
        ));
    }

    #[test]
    fn canonical_cube_text() {
        let text = write_cube(&z2_cube());
        assert_eq!(
            text,
            "{\n  \"n\": 2,\n  \"entries\": [\n    [[\"3/4\", \"1/4\"], [\"1/4\", \"3/4\"]],\n    [[\"1/4\", \"3/4\"], [\"3/4\", \"1/4\"]]\n  ]\n}\n"
        );
        assert_eq!(parse_cube(&text).unwrap().validate().unwrap(), z2_cube());
    }

    #[test]
    fn measures_and_groups() {
        let m = parse_measure(r#"{"n": 2, "values": ["0.75", "1/4"]}"#).unwrap();
        assert_eq!(m.values(), &[ratio(3, 4), ratio(1, 4)]);
        assert_eq!(parse_measure(&write_measure(&m)).unwrap(), m);
        assert!(parse_measure(r#"{"n": 3, "values": ["1"]}"#).is_err());
        assert!(matches!(
            parse_measure(r#"{"n": 2, "values": ["1/2", "1/3"]}"#),
            Err(FormatError::Measure(_))
        ));

        let klein = parse_group(r#"{"invariant_factors": [2, 2]}"#).unwrap();
        assert_eq!(parse_group(&write_group(&klein)).unwrap(), klein);
        assert!(parse_group(r#"{"invariant_factors": [2], "cayley_table": [[1, 2], [2, 1]]}"#).is_err());
        assert!(parse_group("{}").is_err());
        assert!(matches!(
            parse_group(r#"{"invariant_factors": [2, 3]}"#),
            Err(FormatError::Group(_))
        ));
        assert!(parse_group(r#"{"cayley_table": [[1, 2], [2, 2]]}"#).is_err());
        assert_eq!(
            write_factors(&klein.factors()),
            "{\n  \"invariant_factors\": [2, 2]\n}\n"
        );
    }

    proptest! {
        #[test]
        fn cube_text_round_trip(
            (f, weights) in (1usize..=8).prop_flat_map(|n| {
                (prop::sample::select(enumerate_abelian_groups(n)), prop::collection::vec(1i64..10_000, n))
            })
        ) {
            let total: i64 = weights.iter().sum();
            let m = MeasureVector::new(weights.iter().map(|&w| ratio(w, total)).collect()).unwrap();
            let cube = derive_cube(&cayley_table(&f), &m).unwrap();
            let text = write_cube(&cube);
            let back = parse_cube(&text).unwrap().validate().unwrap();
            prop_assert_eq!(&back, &cube);
            prop_assert_eq!(write_cube(&back), text);
            prop_assert_eq!(parse_measure(&write_measure(&m)).unwrap(), m);
        }
    }
}
