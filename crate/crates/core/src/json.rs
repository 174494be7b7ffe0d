//! JSON interchange for algebra and triple-data files.
//!
//! All coefficients are canonical rational strings (`"p/q"` or `"p"`).
//! Unlisted bracket and form entries are zero. `args` of `"form"` entries
//! must be sorted ascending and lie-bracket `args` must satisfy `a < b`;
//! violations are parse errors. Serialization is deterministic: entries
//! come out in lexicographic key order, so identical structures produce
//! identical bytes.
//!
//! Algebra files:
//!
//! ```json
//! { "kind": "n-leibniz", "arity": 3, "dimension": 4,
//!   "basis": ["e1","e2","e3","e4"],
//!   "bracket": [ {"args":[0,1,2], "out":[{"index":3,"coeff":"1"}]} ],
//!   "form":    [ {"args":[0,0], "coeff":"1"} ] }
//! ```
//!
//! Triple-data files:
//!
//! ```json
//! { "kind": "lie-triple-data", "arity": 3,
//!   "lie": {"dimension": 6, "bracket": [...], "omega": [["0","1"],["1","0"]]},
//!   "module_dimension": 4,
//!   "rho": [ [["0"]] ],
//!   "form": [ ... ] }
//! ```

use crate::axioms;
use crate::matrix::RatMatrix;
use crate::model::{
    LieTripleData, MetricLieAlgebra, ModelError, NLeibnizAlgebra, SparseVec,
};
use crate::rational::{parse_rational, render_rational, Rational};
use crate::report::Report;
use crate::tensor::SymTensor;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const KIND_ALGEBRA: &str = "n-leibniz";
pub const KIND_TRIPLE: &str = "lie-triple-data";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unsupported kind {0:?}")]
    Kind(String),
    #[error("malformed rational literal {0:?}")]
    Rational(String),
    #[error("form args {0:?} are not sorted ascending")]
    UnsortedFormArgs(Vec<usize>),
    #[error("lie bracket args {0:?} must be a pair with a < b")]
    BadLiePair(Vec<usize>),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("representation is not faithful: {0}")]
    Faithfulness(Report),
    #[error("omega is degenerate: {0}")]
    DegenerateForm(Report),
    #[error("triple-data invariant failed: {0}")]
    Invariant(Report),
}

/// Which structure a file declares via its `"kind"` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Algebra,
    Triple,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutTermDto {
    index: usize,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketEntryDto {
    args: Vec<usize>,
    out: Vec<OutTermDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormEntryDto {
    args: Vec<usize>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDto {
    kind: String,
    arity: usize,
    dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<String>>,
    bracket: Vec<BracketEntryDto>,
    form: Vec<FormEntryDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieDto {
    dimension: usize,
    bracket: Vec<BracketEntryDto>,
    omega: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleDto {
    kind: String,
    arity: usize,
    lie: LieDto,
    module_dimension: usize,
    rho: Vec<Vec<Vec<String>>>,
    form: Vec<FormEntryDto>,
}

#[derive(Deserialize)]
struct KindProbe {
    kind: String,
}

/// Reads the `"kind"` discriminator of a file.
pub fn detect_kind(bytes: &[u8]) -> Result<FileKind, ParseError> {
    let probe: KindProbe =
        serde_json::from_slice(bytes).map_err(|e| ParseError::Json(e.to_string()))?;
    match probe.kind.as_str() {
        KIND_ALGEBRA => Ok(FileKind::Algebra),
        KIND_TRIPLE => Ok(FileKind::Triple),
        other => Err(ParseError::Kind(other.to_owned())),
    }
}

fn parse_coeff(text: &str) -> Result<Rational, ParseError> {
    parse_rational(text).map_err(|e| ParseError::Rational(e.0))
}

fn parse_out_terms(terms: Vec<OutTermDto>) -> Result<SparseVec, ParseError> {
    let mut out = SparseVec::new();
    for term in terms {
        let coeff = parse_coeff(&term.coeff)?;
        if out.insert(term.index, coeff).is_some() {
            return Err(ModelError::DuplicateEntry(format!("out index {}", term.index)).into());
        }
    }
    Ok(out)
}

fn parse_form(entries: Vec<FormEntryDto>) -> Result<Vec<(Vec<usize>, Rational)>, ParseError> {
    let mut out = Vec::with_capacity(entries.len());
    for entry in entries {
        if entry.args.windows(2).any(|w| w[0] > w[1]) {
            return Err(ParseError::UnsortedFormArgs(entry.args));
        }
        let coeff = parse_coeff(&entry.coeff)?;
        out.push((entry.args, coeff));
    }
    Ok(out)
}

fn parse_matrix(rows: &[Vec<String>], expect_rows: usize, expect_cols: usize, what: &str)
    -> Result<RatMatrix, ParseError>
{
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(ModelError::Shape(format!(
            "{what} must be a {expect_rows}x{expect_cols} matrix"
        ))
        .into());
    }
    let mut parsed = Vec::with_capacity(expect_rows);
    for row in rows {
        let mut out = Vec::with_capacity(expect_cols);
        for cell in row {
            out.push(parse_coeff(cell)?);
        }
        parsed.push(out);
    }
    if expect_rows == 0 || expect_cols == 0 {
        return Ok(RatMatrix::zero(expect_rows, expect_cols));
    }
    Ok(RatMatrix::from_rows(parsed))
}

/// Parses an n-Leibniz algebra file. Structure constants are loaded exactly
/// as written; no symmetrization of any kind is applied.
pub fn parse_algebra(bytes: &[u8]) -> Result<NLeibnizAlgebra, ParseError> {
    let dto: AlgebraDto =
        serde_json::from_slice(bytes).map_err(|e| ParseError::Json(e.to_string()))?;
    if dto.kind != KIND_ALGEBRA {
        return Err(ParseError::Kind(dto.kind));
    }
    if dto.arity < 2 {
        return Err(ModelError::BadArity(dto.arity).into());
    }
    let mut bracket: Vec<(Vec<usize>, SparseVec)> = Vec::with_capacity(dto.bracket.len());
    let mut seen = BTreeMap::new();
    for entry in dto.bracket {
        if seen.insert(entry.args.clone(), ()).is_some() {
            return Err(ModelError::DuplicateEntry(format!("bracket args {:?}", entry.args)).into());
        }
        bracket.push((entry.args, parse_out_terms(entry.out)?));
    }
    let s = SymTensor::new(dto.dimension, dto.arity.saturating_sub(1), parse_form(dto.form)?)
        .map_err(ModelError::from)?;
    Ok(NLeibnizAlgebra::new(
        dto.arity,
        dto.dimension,
        bracket,
        s,
        dto.basis,
    )?)
}

fn triple_from_dto(dto: TripleDto) -> Result<LieTripleData, ParseError> {
    if dto.kind != KIND_TRIPLE {
        return Err(ParseError::Kind(dto.kind));
    }
    if dto.arity < 2 {
        return Err(ModelError::BadArity(dto.arity).into());
    }
    let m = dto.lie.dimension;
    let mut bracket: Vec<((usize, usize), SparseVec)> = Vec::with_capacity(dto.lie.bracket.len());
    for entry in dto.lie.bracket {
        if entry.args.len() != 2 || entry.args[0] >= entry.args[1] {
            return Err(ParseError::BadLiePair(entry.args));
        }
        bracket.push(((entry.args[0], entry.args[1]), parse_out_terms(entry.out)?));
    }
    let omega = parse_matrix(&dto.lie.omega, m, m, "omega")?;
    let g = MetricLieAlgebra::new(m, bracket, omega)?;

    let d = dto.module_dimension;
    if dto.rho.len() != m {
        return Err(ModelError::Shape(format!("{} rho matrices for dimension {m}", dto.rho.len())).into());
    }
    let mut rho = Vec::with_capacity(m);
    for (i, rows) in dto.rho.iter().enumerate() {
        rho.push(parse_matrix(rows, d, d, &format!("rho[{i}]"))?);
    }
    let s = SymTensor::new(d, dto.arity.saturating_sub(1), parse_form(dto.form)?)
        .map_err(ModelError::from)?;
    Ok(LieTripleData::new(g, d, rho, s, dto.arity)?)
}

/// Structural parse of a triple-data file: shapes and indices are checked,
/// the semantic invariants are not. Used by checkers that want to report
/// invariant failures instead of rejecting the file.
pub fn parse_triple_raw(bytes: &[u8]) -> Result<LieTripleData, ParseError> {
    let dto: TripleDto =
        serde_json::from_slice(bytes).map_err(|e| ParseError::Json(e.to_string()))?;
    triple_from_dto(dto)
}

/// Parses a triple-data file and verifies its invariants: the Jacobi
/// identity and the symmetry and non-degeneracy of omega on the Lie side,
/// that rho is a faithful generalized orthogonal homomorphism, and that the
/// form is non-degenerate. The first failing invariant is reported in the
/// error; ad-invariance of omega is left to `check_metric_lie`.
pub fn parse_triple(bytes: &[u8]) -> Result<LieTripleData, ParseError> {
    let triple = parse_triple_raw(bytes)?;
    validate_triple(&triple)?;
    Ok(triple)
}

/// The invariant checks behind [`parse_triple`], usable on an already
/// constructed value.
pub fn validate_triple(triple: &LieTripleData) -> Result<(), ParseError> {
    let strategy = crate::scan::Strategy::default();
    let l = triple.lie();
    let fail = |name: &str, witness| ParseError::Invariant(Report::fail(name, 0, witness));
    if let Some(w) = axioms::jacobi_witness(l, strategy) {
        return Err(fail("jacobi", w));
    }
    if let Some(w) = axioms::omega_symmetry_witness(l) {
        return Err(fail("omega_symmetric", w));
    }
    if let Some(w) = axioms::omega_nondegeneracy_witness(l) {
        return Err(ParseError::DegenerateForm(Report::fail("omega_nondegenerate", 0, w)));
    }
    if let Some(w) = axioms::rep_homomorphism_witness(triple) {
        return Err(fail("rho_homomorphism", w));
    }
    if let Some(w) = axioms::rep_faithfulness_witness(triple) {
        return Err(ParseError::Faithfulness(Report::fail("rho_faithful", 0, w)));
    }
    if let Some(w) = axioms::rep_orthogonality_witness(triple, strategy) {
        return Err(fail("rho_orthogonality", w));
    }
    let rep = axioms::check_s_nondegenerate(triple.form());
    if !rep.pass {
        return Err(ParseError::Invariant(rep));
    }
    Ok(())
}

fn render_sparse(out: &SparseVec) -> Vec<OutTermDto> {
    out.iter()
        .map(|(&index, coeff)| OutTermDto {
            index,
            coeff: render_rational(coeff),
        })
        .collect()
}

fn render_form(s: &SymTensor) -> Vec<FormEntryDto> {
    s.iter()
        .map(|(key, coeff)| FormEntryDto {
            args: key.clone(),
            coeff: render_rational(coeff),
        })
        .collect()
}

fn render_matrix_dto(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(render_rational).collect())
        .collect()
}

fn to_pretty(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    text.push('\n');
    text
}

/// Canonical bytes for an algebra. Entries are emitted in lexicographic key
/// order, so serialization is deterministic.
pub fn serialize_algebra(a: &NLeibnizAlgebra) -> String {
    let dto = AlgebraDto {
        kind: KIND_ALGEBRA.to_owned(),
        arity: a.arity(),
        dimension: a.dim(),
        basis: a.basis_names().map(<[String]>::to_vec),
        bracket: a
            .bracket_entries()
            .map(|(args, out)| BracketEntryDto {
                args: args.clone(),
                out: render_sparse(out),
            })
            .collect(),
        form: render_form(a.form()),
    };
    to_pretty(&dto)
}

/// Canonical bytes for a derivation space: the basis as matrices of
/// rational strings plus the dimension and the rank of the constraint
/// system.
pub fn serialize_derivation_space(space: &crate::morphisms::DerivationSpace) -> String {
    #[derive(Serialize)]
    struct Dto {
        dimension: usize,
        constraint_rank: usize,
        basis: Vec<Vec<Vec<String>>>,
    }
    to_pretty(&Dto {
        dimension: space.dimension(),
        constraint_rank: space.constraint_rank,
        basis: space
            .basis
            .iter()
            .map(|op| render_matrix_dto(op.matrix()))
            .collect(),
    })
}

/// Canonical bytes for a Lie triple data.
pub fn serialize_triple(t: &LieTripleData) -> String {
    let dto = TripleDto {
        kind: KIND_TRIPLE.to_owned(),
        arity: t.arity(),
        lie: LieDto {
            dimension: t.lie().dim(),
            bracket: t
                .lie()
                .bracket_entries()
                .map(|(&(a, b), out)| BracketEntryDto {
                    args: vec![a, b],
                    out: render_sparse(out),
                })
                .collect(),
            omega: render_matrix_dto(t.lie().omega()),
        },
        module_dimension: t.module_dim(),
        rho: t.rho().iter().map(render_matrix_dto).collect(),
        form: render_form(t.form()),
    };
    to_pretty(&dto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn minimal_algebra_json() -> String {
        r#"{
  "kind": "n-leibniz",
  "arity": 3,
  "dimension": 2,
  "bracket": [],
  "form": [
    {"args": [0, 0], "coeff": "1"},
    {"args": [1, 1], "coeff": "1"}
  ]
}"#
        .to_owned()
    }

    #[test]
    fn parses_abelian_algebra() {
        let a = parse_algebra(minimal_algebra_json().as_bytes()).unwrap();
        assert_eq!(a.arity(), 3);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.bracket_entry_count(), 0);
        assert_eq!(a.form().coeff(&[0, 0]), rat_int(1));
    }

    #[test]
    fn rejects_out_of_range_index() {
        let text = minimal_algebra_json().replace(
            r#""bracket": []"#,
            r#""bracket": [{"args": [0, 1, 5], "out": [{"index": 0, "coeff": "1"}]}]"#,
        );
        let err = parse_algebra(text.as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Model(ModelError::IndexOutOfRange { index: 5, bound: 2 })
        ));
    }

    #[test]
    fn rejects_duplicate_bracket_entry() {
        let text = minimal_algebra_json().replace(
            r#""bracket": []"#,
            r#""bracket": [
                {"args": [0, 0, 1], "out": [{"index": 0, "coeff": "1"}]},
                {"args": [0, 0, 1], "out": [{"index": 1, "coeff": "1"}]}
            ]"#,
        );
        let err = parse_algebra(text.as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::Model(ModelError::DuplicateEntry(_))));
    }

    #[test]
    fn rejects_unsorted_form_args() {
        let text = minimal_algebra_json().replace(
            r#"{"args": [0, 0], "coeff": "1"},"#,
            r#"{"args": [1, 0], "coeff": "1"},"#,
        );
        let err = parse_algebra(text.as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::UnsortedFormArgs(_)));
    }

    #[test]
    fn rejects_malformed_rational() {
        let text = minimal_algebra_json().replace("\"1\"", "\"1.5\"");
        let err = parse_algebra(text.as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::Rational(_)));
    }

    #[test]
    fn detects_kind() {
        assert_eq!(
            detect_kind(minimal_algebra_json().as_bytes()).unwrap(),
            FileKind::Algebra
        );
        assert!(matches!(
            detect_kind(br#"{"kind": "mystery"}"#),
            Err(ParseError::Kind(_))
        ));
    }

    #[test]
    fn serialize_parse_round_trip() {
        let a = parse_algebra(minimal_algebra_json().as_bytes()).unwrap();
        let bytes = serialize_algebra(&a);
        let b = parse_algebra(bytes.as_bytes()).unwrap();
        assert!(a.same_structure(&b));
        // Serialization is idempotent byte for byte.
        assert_eq!(bytes, serialize_algebra(&b));
    }

    #[test]
    fn triple_invariants_are_enforced() {
        // One-dimensional Lie algebra acting by zero: not faithful.
        let text = r#"{
  "kind": "lie-triple-data",
  "arity": 3,
  "lie": {"dimension": 1, "bracket": [], "omega": [["1"]]},
  "module_dimension": 2,
  "rho": [[["0", "0"], ["0", "0"]]],
  "form": [
    {"args": [0, 0], "coeff": "1"},
    {"args": [1, 1], "coeff": "1"}
  ]
}"#;
        assert!(parse_triple_raw(text.as_bytes()).is_ok());
        let err = parse_triple(text.as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::Faithfulness(_)), "{err:?}");

        // Zero omega: degenerate.
        let text = text.replace(r#""omega": [["1"]]"#, r#""omega": [["0"]]"#);
        let err = parse_triple(text.as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::DegenerateForm(_)), "{err:?}");
    }
}
