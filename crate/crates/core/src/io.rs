//! JSON input documents and machine-readable reports.
//!
//! Exact numbers are written as fraction strings (`"-3"`, `"1/2"`); on input
//! plain JSON integers are accepted too. Element indices are 1-based.

use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{fmt_rational, parse_rational, IntMatrix, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};
use crate::fan::{sample_relative_interior, FlagCone};
use crate::intersect::{IntersectionPoint, IntersectionReport};
use crate::matroid::{FlagOfFlats, Flat, SignedCircuit};
use crate::numeric::{RootWitness, SeedOrigin};
use crate::subdivision::{Cell, DecoratedSimplex};
use crate::system::{assemble_crn, BoundReport, CrnModel, DecoratedSummary, VerticalSystem};

/// An exact rational in a JSON document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction(pub Rational);

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct FractionVisitor;

        impl Visitor<'_> for FractionVisitor {
            type Value = Fraction;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a fraction string such as \"-3/2\"")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Fraction, E> {
                parse_rational(s).map(Fraction).map_err(|e| E::custom(e.to_string()))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Fraction, E> {
                Ok(Fraction(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Fraction, E> {
                Ok(Fraction(Rational::from_integer(v.into())))
            }
        }

        deserializer.deserialize_any(FractionVisitor)
    }
}

fn fractions(v: &[Rational]) -> Vec<Fraction> {
    v.iter().cloned().map(Fraction).collect()
}

fn matrix_rows(m: &RationalMatrix) -> Vec<Vec<Number>> {
    (0..m.rows()).map(|i| numbers(m.row(i))).collect()
}

fn int_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// A number as written in an input file: an integer or a fraction string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Integer(i64),
    Text(String),
}

impl From<&Rational> for Number {
    fn from(q: &Rational) -> Self {
        Number::Text(fmt_rational(q))
    }
}

fn to_rational(field: &str, number: &Number) -> Result<Rational> {
    match number {
        Number::Integer(v) => Ok(Rational::from_integer((*v).into())),
        Number::Text(s) => parse_rational(s).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{field}: {msg}")),
            other => other,
        }),
    }
}

fn to_vector(field: &str, v: &[Number]) -> Result<RationalVector> {
    v.iter().enumerate().map(|(j, x)| to_rational(&format!("{field}[{}]", j + 1), x)).collect()
}

fn to_matrix(field: &str, rows: &[Vec<Number>], cols: Option<usize>) -> Result<RationalMatrix> {
    let width = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::Parse(format!("{field}: row {} has {} entries, expected {width}", i + 1, row.len())));
        }
        parsed.push(to_vector(&format!("{field}[{}]", i + 1), row)?);
    }
    RationalMatrix::from_rows(parsed, width)
}

fn numbers(v: &[Rational]) -> Vec<Number> {
    v.iter().map(Number::from).collect()
}

fn to_int_matrix(field: &str, rows: &[Vec<i64>]) -> Result<IntMatrix> {
    let width = rows.first().map(Vec::len).unwrap_or(0);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::Parse(format!("{field}: row {} has {} entries, expected {width}", i + 1, row.len())));
        }
    }
    IntMatrix::from_rows(rows, width)
}

/// Input file contents, distinguished by `"kind"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InputDocument {
    Matrix {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        description: Option<String>,
        matrix: Vec<Vec<Number>>,
    },
    System {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        description: Option<String>,
        coefficients: Vec<Vec<Number>>,
        exponents: Vec<Vec<i64>>,
        shift: Vec<Number>,
    },
    Crn {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        description: Option<String>,
        stoichiometric: Vec<Vec<Number>>,
        reactant: Vec<Vec<i64>>,
        #[serde(default)]
        conservation: Vec<Vec<Number>>,
        #[serde(default)]
        totals: Vec<Number>,
        rates: Vec<Number>,
    },
}

/// A parsed and validated input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Matrix(RationalMatrix),
    System(VerticalSystem),
    Crn(CrnModel),
}

impl Input {
    /// The vertical system: given directly or assembled from a network.
    pub fn system(&self) -> Result<VerticalSystem> {
        match self {
            Input::Matrix(_) => Err(Error::Parse("this command needs a \"system\" or \"crn\" document, not a bare matrix".into())),
            Input::System(s) => Ok(s.clone()),
            Input::Crn(model) => assemble_crn(model),
        }
    }

    /// The matrix whose kernel defines the oriented matroid.
    pub fn coefficient_matrix(&self) -> Result<RationalMatrix> {
        match self {
            Input::Matrix(m) => Ok(m.clone()),
            _ => Ok(self.system()?.c),
        }
    }
}

impl InputDocument {
    pub fn into_input(self) -> Result<Input> {
        match self {
            InputDocument::Matrix { matrix, .. } => Ok(Input::Matrix(to_matrix("matrix", &matrix, None)?)),
            InputDocument::System { coefficients, exponents, shift, .. } => {
                let c = to_matrix("coefficients", &coefficients, None)?;
                let a = to_int_matrix("exponents", &exponents)?;
                Ok(Input::System(VerticalSystem::new(c, a, to_vector("shift", &shift)?)?))
            }
            InputDocument::Crn { stoichiometric, reactant, conservation, totals, rates, .. } => {
                let n = to_matrix("stoichiometric", &stoichiometric, None)?;
                let w = to_matrix("conservation", &conservation, Some(n.rows()))?;
                Ok(Input::Crn(CrnModel {
                    stoichiometric: n,
                    reactant: to_int_matrix("reactant", &reactant)?,
                    conservation: w,
                    totals: to_vector("totals", &totals)?,
                    h: to_vector("rates", &rates)?,
                }))
            }
        }
    }

    pub fn from_system(system: &VerticalSystem, description: Option<String>) -> Self {
        InputDocument::System {
            description,
            coefficients: matrix_rows(&system.c),
            exponents: int_rows(&system.a),
            shift: numbers(&system.h),
        }
    }
}

pub fn parse_input_str(text: &str) -> Result<Input> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_input()
}

pub fn parse_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_input_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitDoc {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

impl From<&SignedCircuit> for CircuitDoc {
    fn from(c: &SignedCircuit) -> Self {
        Self { positive: c.positive.one_based(), negative: c.negative.one_based() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitsReport {
    pub ground_size: usize,
    pub rank: usize,
    pub circuits: Vec<CircuitDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatDoc {
    pub rank: usize,
    pub elements: Vec<usize>,
}

impl From<&Flat> for FlatDoc {
    fn from(f: &Flat) -> Self {
        Self { rank: f.rank, elements: f.elements.one_based() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatsReport {
    pub ground_size: usize,
    pub rank: usize,
    pub flats: Vec<FlatDoc>,
    pub maximal_flags: Vec<Vec<Vec<usize>>>,
}

pub fn flag_doc(flag: &FlagOfFlats) -> Vec<Vec<usize>> {
    flag.chain.iter().map(|f| f.elements.one_based()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDoc {
    /// Chain of flats; empty together with `whole_space` for free matroids.
    pub flag: Vec<Vec<usize>>,
    pub whole_space: bool,
    pub dimension: usize,
    pub sample: Vec<Fraction>,
}

impl From<&FlagCone> for ConeDoc {
    fn from(c: &FlagCone) -> Self {
        Self {
            flag: flag_doc(&c.flag),
            whole_space: c.is_whole_space(),
            dimension: c.dimension(),
            sample: fractions(&sample_relative_interior(c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    pub ground_size: usize,
    pub positive: bool,
    pub free_matroid: bool,
    pub cones: Vec<ConeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub v: Vec<Fraction>,
    pub w: Vec<Fraction>,
    pub supporting_flag: Vec<Vec<usize>>,
    pub isolated: bool,
    pub interior: bool,
}

impl From<&IntersectionPoint> for PointDoc {
    fn from(p: &IntersectionPoint) -> Self {
        Self {
            v: fractions(&p.v),
            w: fractions(&p.w),
            supporting_flag: flag_doc(&p.supporting_flag),
            isolated: p.isolated,
            interior: p.interior,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionDoc {
    pub count: usize,
    pub transverse: bool,
    pub lineality_ok: bool,
    pub free_matroid: bool,
    pub underdetermined_cones: usize,
    pub points: Vec<PointDoc>,
    pub notes: Vec<String>,
}

impl From<&IntersectionReport> for IntersectionDoc {
    fn from(r: &IntersectionReport) -> Self {
        Self {
            count: r.count,
            transverse: r.transverse,
            lineality_ok: r.lineality_ok,
            free_matroid: r.free_matroid,
            underdetermined_cones: r.underdetermined_cones,
            points: r.points.iter().map(PointDoc::from).collect(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDoc {
    pub members: Vec<usize>,
    pub witness: Vec<Fraction>,
}

impl From<&Cell> for CellDoc {
    fn from(c: &Cell) -> Self {
        Self { members: c.one_based(), witness: fractions(&c.witness) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionReport {
    pub triangulation: bool,
    pub cells: Vec<CellDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexDoc {
    pub members: Vec<usize>,
    pub witness: Vec<Fraction>,
    pub kernel_vector: Vec<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<Vec<Fraction>>,
}

impl SimplexDoc {
    pub fn new(d: &DecoratedSimplex, image: Option<&RationalVector>) -> Self {
        Self {
            members: d.cell.one_based(),
            witness: fractions(&d.cell.witness),
            kernel_vector: fractions(&d.kernel_vector),
            image: image.map(|w| fractions(w)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedDoc {
    pub count: usize,
    pub simplices: Vec<SimplexDoc>,
}

impl From<&DecoratedSummary> for DecoratedDoc {
    fn from(d: &DecoratedSummary) -> Self {
        Self { count: d.count, simplices: d.simplices.iter().zip(&d.images).map(|(s, w)| SimplexDoc::new(s, Some(w))).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundDoc {
    pub certified_bound: usize,
    pub tropical: IntersectionDoc,
    pub decorated: Option<DecoratedDoc>,
    pub notes: Vec<String>,
}

impl From<&BoundReport> for BoundDoc {
    fn from(b: &BoundReport) -> Self {
        Self {
            certified_bound: b.certified_bound,
            tropical: (&b.tropical).into(),
            decorated: b.decorated.as_ref().map(DecoratedDoc::from),
            notes: b.method_notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrnReport {
    pub system: InputDocument,
    pub bound: BoundDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub x: Vec<f64>,
    pub residual: f64,
    pub well_conditioned: bool,
    /// `"tropical"` or `"random"`.
    pub seed: String,
    /// 1-based index of the seeding intersection point or random start.
    pub seed_index: usize,
    pub continuation: Vec<f64>,
}

impl From<&RootWitness> for WitnessDoc {
    fn from(w: &RootWitness) -> Self {
        let (seed, seed_index) = match &w.seed_origin {
            SeedOrigin::Tropical { index, .. } => ("tropical", index + 1),
            SeedOrigin::Random { index } => ("random", index + 1),
        };
        Self {
            x: w.x.clone(),
            residual: w.residual,
            well_conditioned: w.well_conditioned,
            seed: seed.into(),
            seed_index,
            continuation: w.continuation.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Always `"empirical witness"`: floating-point evidence, not a proof.
    pub status: String,
    pub t: f64,
    pub tol: f64,
    pub separation: f64,
    pub multistarts: usize,
    pub seed: u64,
    pub certified_bound: usize,
    pub count: usize,
    pub witnesses: Vec<WitnessDoc>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat_vec};
    use crate::intersect::lower_bound;
    use crate::system::bound;

    const RUNNING: &str = r#"{
        "kind": "system",
        "coefficients": [["-3", "1", "-1", "-2", "2"], [-1, 1, -1, -1, 1]],
        "exponents": [[0, 2, 0, 2, 1], [0, 0, 2, 2, 1]],
        "shift": ["0", "0", "0", "0", "−1"]
    }"#;

    #[test]
    fn parses_system_with_mixed_numbers() {
        let Input::System(s) = parse_input_str(RUNNING).unwrap() else { panic!() };
        assert_eq!(s.c, RationalMatrix::from_i64(&[&[-3, 1, -1, -2, 2], &[-1, 1, -1, -1, 1]]));
        assert_eq!(s.h, rat_vec(&[0, 0, 0, 0, -1]));
    }

    #[test]
    fn rejects_zero_denominator_with_location() {
        let err = parse_input_str(r#"{"kind": "matrix", "matrix": [["1", "2"], ["1/0", "1"]]}"#).unwrap_err();
        let Error::Parse(msg) = err else { panic!("{err:?}") };
        assert!(msg.starts_with("matrix[2][1]"), "{msg}");
        let err = parse_input_str("{\"kind\": \"matrix\",\n \"matrix\": [[1, 2]\n").unwrap_err();
        let Error::Parse(msg) = err else { panic!("{err:?}") };
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn rejects_ragged_rows_and_unknown_fields() {
        assert!(matches!(parse_input_str(r#"{"kind": "matrix", "matrix": [["1"], ["1", "2"]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_input_str(r#"{"kind": "matrix", "matrix": [["1"]], "extra": 1}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_input_str(r#"{"kind": "tensor"}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_input_str(r#"{"kind": "system", "coefficients": [["1", "2"]], "exponents": [[0, 1]], "shift": ["0"]}"#),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn bound_report_round_trips() {
        let Input::System(s) = parse_input_str(RUNNING).unwrap() else { panic!() };
        let doc = BoundDoc::from(&bound(&s, false).unwrap());
        let back: BoundDoc = serde_json::from_str(&to_json(&doc)).unwrap();
        assert_eq!(back, doc);
        assert_eq!(doc.tropical.points[0].v, vec![Fraction(frac(-1, 2)), Fraction(frac(-1, 2))]);
        let json = to_json(&doc);
        assert!(json.contains("\"-1/2\""));
    }

    #[test]
    fn system_document_round_trips() {
        let Input::System(s) = parse_input_str(RUNNING).unwrap() else { panic!() };
        let text = to_json(&InputDocument::from_system(&s, None));
        assert_eq!(parse_input_str(&text).unwrap(), Input::System(s.clone()));
        let report = lower_bound(&s.c, &s.a, &s.h, false).unwrap();
        let doc = IntersectionDoc::from(&report);
        assert_eq!(serde_json::from_str::<IntersectionDoc>(&to_json(&doc)).unwrap(), doc);
    }
}
