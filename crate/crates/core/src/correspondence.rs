//! Both directions of the correspondence between generalized metric
//! n-Leibniz algebras and Lie triple data, together with the Leibniz
//! bracket on tensor space and its bilinear form.
//!
//! The forward direction realizes the Lie algebra as the image of the
//! D-map inside `gl(V)`, with a basis chosen greedily in lexicographic
//! tuple order so that every output is deterministic. The backward
//! direction transposes the Lie action through omega, solving one Gram
//! system per basis tuple with a single inversion of omega shared across
//! tuples.

use crate::axioms;
use crate::matrix::{render_vector, RatMatrix};
use crate::model::{
    Guardrail, GuardrailExceeded, LieTripleData, LinearOperator, MetricLieAlgebra,
    NLeibnizAlgebra, SparseVec,
};
use crate::rational::Rational;
use crate::report::{Report, Witness};
use crate::scan::{map_indexed, Strategy, TupleSpace};
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrespondenceError {
    #[error("axiom precondition failed: {0}")]
    AxiomViolation(Report),
    #[error(transparent)]
    Guardrail(#[from] GuardrailExceeded),
    #[error("commutator of basis operators {a} and {b} escapes the span of Im D")]
    Closure { a: usize, b: usize },
    #[error(
        "omega is not well-defined: pairing basis operator {basis_index} against the \
         operator of tuple {tuple:?} differs between the direct formula and the span expression"
    )]
    WellDefinedness { basis_index: usize, tuple: Vec<usize> },
    #[error("Gram system inconsistent at tuple {0:?} despite a non-degenerate omega")]
    CorruptGram(Vec<usize>),
    #[error("internal invariant violated after preconditions passed: {0}")]
    Internal(Report),
}

/// Output of [`lift`]: the metric Lie algebra presented in the greedily
/// chosen D-basis, the operators realizing that basis inside `gl(V)`, the
/// tuples that produced them, and the resulting Lie triple data (whose
/// representation is the inclusion).
#[derive(Debug, Clone)]
pub struct LiftResult {
    pub algebra: NLeibnizAlgebra,
    pub g: MetricLieAlgebra,
    pub g_basis_ops: Vec<LinearOperator>,
    pub generator_tuples: Vec<Vec<usize>>,
    pub triple: LieTripleData,
}

/// First failing metric axiom of an algebra, if any. The checks run in the
/// order fundamental identity, unitarity, symmetry, non-degeneracy of S.
pub fn metric_axioms_failure(a: &NLeibnizAlgebra) -> Option<Report> {
    [
        axioms::check_fundamental_identity(a),
        axioms::check_unitarity(a),
        axioms::check_symmetry(a),
        axioms::check_s_nondegenerate(a.form()),
    ]
    .into_iter()
    .find(|report| !report.pass)
}

/// The operator `v -> [u_1, .., u_{n-1}, v]` for arbitrary rational
/// arguments; its column `k` is the bracket applied to the k-th basis
/// vector.
pub fn d_operator(a: &NLeibnizAlgebra, vectors: &[Vec<Rational>]) -> LinearOperator {
    let n = a.arity();
    let d = a.dim();
    assert_eq!(vectors.len(), n - 1, "d_operator takes n-1 arguments");
    let mut m = RatMatrix::zero(d, d);
    for (key, result) in a.bracket_entries() {
        let mut coeff = Rational::from_integer(1.into());
        let mut vanishes = false;
        for slot in 0..n - 1 {
            if vectors[slot][key[slot]].is_zero() {
                vanishes = true;
                break;
            }
            coeff *= &vectors[slot][key[slot]];
        }
        if vanishes {
            continue;
        }
        let col = key[n - 1];
        for (&row, c) in result {
            let value = m.at(row, col) + &coeff * c;
            m.set(row, col, value);
        }
    }
    LinearOperator::new(m).expect("square by construction")
}

/// [`d_operator`] on a basis tuple, read straight off the structure
/// constants.
pub fn d_operator_basis(a: &NLeibnizAlgebra, tuple: &[usize]) -> LinearOperator {
    let n = a.arity();
    let d = a.dim();
    assert_eq!(tuple.len(), n - 1);
    let mut m = RatMatrix::zero(d, d);
    let mut args = Vec::with_capacity(n);
    args.extend_from_slice(tuple);
    args.push(0);
    for k in 0..d {
        args[n - 1] = k;
        if let Some(result) = a.bracket_basis(&args) {
            for (&row, c) in result {
                m.set(row, k, c.clone());
            }
        }
    }
    LinearOperator::new(m).expect("square by construction")
}

/// Basis of `Im D` inside `gl(V)`: scans all basis `(n-1)`-tuples in
/// lexicographic order and keeps an operator iff it enlarges the span,
/// decided by row reduction over the vectorized matrices. Returns the
/// operators and the tuples that produced them.
pub fn image_of_d(
    a: &NLeibnizAlgebra,
    guardrail: Guardrail,
) -> Result<(Vec<LinearOperator>, Vec<Vec<usize>>), GuardrailExceeded> {
    let k = a.arity() - 1;
    let d = a.dim();
    let total = guardrail.tuple_count(d, k)?;
    let space = TupleSpace::new(d, k);
    // Operators are computed in parallel; the greedy span scan itself is
    // inherently ordered and stays sequential.
    let ops = map_indexed(total, Strategy::default(), |i| {
        d_operator_basis(a, &space.decode(i))
    });
    let mut span = crate::matrix::SpanBuilder::new(d * d);
    let mut basis = Vec::new();
    let mut tuples = Vec::new();
    for (i, op) in ops.into_iter().enumerate() {
        if span.insert(&op.vectorize()) {
            basis.push(op);
            tuples.push(space.decode(i));
        }
    }
    Ok((basis, tuples))
}

/// Dimension of `ker D` on the tuple basis of the tensor power, via the
/// rank of the vectorization map used by [`image_of_d`].
pub fn ker_d_dim(a: &NLeibnizAlgebra, guardrail: Guardrail) -> Result<usize, GuardrailExceeded> {
    let total = guardrail.tuple_count(a.dim(), a.arity() - 1)?;
    let (ops, _) = image_of_d(a, guardrail)?;
    Ok(total - ops.len())
}

pub(crate) fn span_matrix(ops: &[LinearOperator], d: usize) -> RatMatrix {
    let vecs: Vec<Vec<Rational>> = ops.iter().map(LinearOperator::vectorize).collect();
    RatMatrix::from_fn(d * d, ops.len(), |r, c| vecs[c][r].clone())
}

/// Forward direction of the correspondence: from a generalized metric
/// n-Leibniz algebra to its Lie triple data.
///
/// Preconditions (fundamental identity, unitarity, symmetry, non-degenerate
/// S) are checked and reported as `AxiomViolation`. The Lie structure
/// constants come from commutators of the basis operators re-expressed in
/// the basis; `omega(g_a, g_b) = S(g_a v_1, v_2, ..)` over the generator
/// tuple of `g_b`, and its well-definedness is verified against every
/// scanned tuple rather than assumed.
pub fn lift(a: &NLeibnizAlgebra, guardrail: Guardrail) -> Result<LiftResult, CorrespondenceError> {
    if let Some(report) = metric_axioms_failure(a) {
        return Err(CorrespondenceError::AxiomViolation(report));
    }
    let d = a.dim();
    let k = a.arity() - 1;
    let (ops, tuples) = image_of_d(a, guardrail)?;
    let m = ops.len();
    let span = span_matrix(&ops, d);

    let mut lie: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let comm = ops[i].commutator(&ops[j]);
            let coords = span
                .solve(&comm.vectorize())
                .map_err(|_| CorrespondenceError::Closure { a: i, b: j })?;
            let sparse: SparseVec = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !sparse.is_empty() {
                lie.insert((i, j), sparse);
            }
        }
    }

    let omega = RatMatrix::from_fn(m, m, |r, c| {
        a.form()
            .eval_slot_dense(&tuples[c], 0, &ops[r].column(tuples[c][0]))
    });

    // Well-definedness of omega: for every tuple, the direct formula must
    // agree with the bilinear extension through the span expression.
    let space = TupleSpace::new(d, k);
    for i in 0..space.total() {
        let w = space.decode(i);
        let op = d_operator_basis(a, &w);
        let coords = span
            .solve(&op.vectorize())
            .expect("every D-operator lies in the span by construction");
        for (row, basis_op) in ops.iter().enumerate() {
            let direct = a.form().eval_slot_dense(&w, 0, &basis_op.column(w[0]));
            let mut via = Rational::zero();
            for (c, coord) in coords.iter().enumerate() {
                if !coord.is_zero() {
                    via += coord * omega.at(row, c);
                }
            }
            if direct != via {
                return Err(CorrespondenceError::WellDefinedness {
                    basis_index: row,
                    tuple: w,
                });
            }
        }
    }

    let g = MetricLieAlgebra::new(m, lie, omega).expect("shapes are correct by construction");
    let report = axioms::check_metric_lie(&g);
    if !report.pass {
        return Err(CorrespondenceError::Internal(report));
    }
    let triple = LieTripleData::new(
        g.clone(),
        d,
        ops.iter().map(|op| op.matrix().clone()).collect(),
        a.form().clone(),
        a.arity(),
    )
    .expect("shapes are correct by construction");
    let report = axioms::check_orthogonal_rep(&triple);
    if !report.pass {
        return Err(CorrespondenceError::Internal(report));
    }
    Ok(LiftResult {
        algebra: a.clone(),
        g,
        g_basis_ops: ops,
        generator_tuples: tuples,
        triple,
    })
}

/// Solves `omega(x, D(v_1, .., v_{n-1})) = S(rho(x) v_1, v_2, ..)` for the
/// coordinates of `D(v_1, .., v_{n-1})` in the Lie basis. Omega is inverted
/// once and the factorization is reused for every tuple.
pub struct FaulknerSolver<'a> {
    triple: &'a LieTripleData,
    omega_inv: RatMatrix,
}

impl<'a> FaulknerSolver<'a> {
    pub fn new(triple: &'a LieTripleData) -> Result<Self, CorrespondenceError> {
        match triple.lie().omega().inverse() {
            Some(omega_inv) => Ok(FaulknerSolver { triple, omega_inv }),
            None => {
                let witness = axioms::omega_nondegeneracy_witness(triple.lie())
                    .expect("a singular omega has a kernel vector");
                Err(CorrespondenceError::AxiomViolation(Report::fail(
                    axioms::METRIC_LIE,
                    0,
                    witness,
                )))
            }
        }
    }

    /// Coordinates of `D(vectors)` in the Lie basis, for arbitrary rational
    /// arguments.
    pub fn d_coords(&self, vectors: &[Vec<Rational>]) -> Vec<Rational> {
        let t = self.triple;
        assert_eq!(vectors.len(), t.arity() - 1);
        let rhs: Vec<Rational> = (0..t.lie().dim())
            .map(|x| {
                let mut args = Vec::with_capacity(vectors.len());
                args.push(t.rho()[x].mul_vec(&vectors[0]));
                args.extend(vectors[1..].iter().cloned());
                t.form().eval(&args)
            })
            .collect();
        self.omega_inv.mul_vec(&rhs)
    }

    /// Coordinates of `D` on a basis tuple.
    pub fn d_coords_basis(&self, tuple: &[usize]) -> Vec<Rational> {
        let t = self.triple;
        let rhs: Vec<Rational> = (0..t.lie().dim())
            .map(|x| t.form().eval_slot_dense(tuple, 0, &t.rho()[x].col(tuple[0])))
            .collect();
        self.omega_inv.mul_vec(&rhs)
    }

    /// The operator `rho(D(tuple))` acting on the module.
    pub fn rho_d(&self, coords: &[Rational]) -> RatMatrix {
        self.triple.rho_vec(coords)
    }
}

/// Backward direction of the correspondence: from a Lie triple data to a
/// generalized metric n-Leibniz algebra with the same form.
///
/// Preconditions (`check_metric_lie`, `check_orthogonal_rep`, non-degenerate
/// S) are checked and reported as `AxiomViolation`. The output is verified
/// to pass all metric axioms; a failure there, after the preconditions
/// passed, is an internal invariant violation.
pub fn reconstruct(
    t: &LieTripleData,
    guardrail: Guardrail,
) -> Result<NLeibnizAlgebra, CorrespondenceError> {
    let report = axioms::check_metric_lie(t.lie());
    if !report.pass {
        return Err(CorrespondenceError::AxiomViolation(report));
    }
    let report = axioms::check_orthogonal_rep(t);
    if !report.pass {
        return Err(CorrespondenceError::AxiomViolation(report));
    }
    let report = axioms::check_s_nondegenerate(t.form());
    if !report.pass {
        return Err(CorrespondenceError::AxiomViolation(report));
    }

    let solver = FaulknerSolver::new(t)?;
    let d = t.module_dim();
    let total = guardrail.tuple_count(d, t.arity() - 1)?;
    let space = TupleSpace::new(d, t.arity() - 1);

    let per_tuple: Vec<Vec<(Vec<usize>, SparseVec)>> =
        map_indexed(total, Strategy::default(), |i| {
            let w = space.decode(i);
            let coords = solver.d_coords_basis(&w);
            let op = solver.rho_d(&coords);
            let mut entries = Vec::new();
            for col in 0..d {
                let sparse: SparseVec = (0..d)
                    .filter(|&r| !op.at(r, col).is_zero())
                    .map(|r| (r, op.at(r, col).clone()))
                    .collect();
                if !sparse.is_empty() {
                    let mut key = w.clone();
                    key.push(col);
                    entries.push((key, sparse));
                }
            }
            entries
        });

    let out = NLeibnizAlgebra::new(
        t.arity(),
        d,
        per_tuple.into_iter().flatten(),
        t.form().clone(),
        None,
    )
    .expect("shapes are correct by construction");

    if let Some(report) = metric_axioms_failure(&out) {
        return Err(CorrespondenceError::Internal(report));
    }
    Ok(out)
}

fn render_sparse_dense(v: Option<&SparseVec>, dim: usize) -> String {
    let mut dense = vec![Rational::zero(); dim];
    if let Some(sv) = v {
        for (&k, c) in sv {
            dense[k] = c.clone();
        }
    }
    render_vector(&dense)
}

/// Lifts and reconstructs; the result must reproduce the input structure
/// constants exactly. A mismatch after valid preconditions is an internal
/// invariant violation.
pub fn roundtrip_algebra(
    a: &NLeibnizAlgebra,
    guardrail: Guardrail,
) -> Result<(), CorrespondenceError> {
    let lifted = lift(a, guardrail)?;
    let back = reconstruct(&lifted.triple, guardrail)?;
    if back.same_structure(a) {
        return Ok(());
    }
    let keys: std::collections::BTreeSet<Vec<usize>> = a
        .bracket_entries()
        .map(|(k, _)| k.clone())
        .chain(back.bracket_entries().map(|(k, _)| k.clone()))
        .collect();
    let witness = keys
        .into_iter()
        .find(|k| a.bracket_basis(k) != back.bracket_basis(k))
        .map(|k| Witness {
            lhs: render_sparse_dense(a.bracket_basis(&k), a.dim()),
            rhs: render_sparse_dense(back.bracket_basis(&k), a.dim()),
            tuple: k,
        })
        .unwrap_or(Witness {
            tuple: vec![],
            lhs: "input form".into(),
            rhs: "reconstructed form".into(),
        });
    Err(CorrespondenceError::Internal(Report::fail(
        "roundtrip_algebra",
        0,
        witness,
    )))
}

/// Reconstructs and lifts; the identification `g_a -> rho(g_a)` must carry
/// the Lie structure constants and omega over exactly, and the D-map must
/// be surjective (`dim Im D = dim g`).
pub fn roundtrip_triple(
    t: &LieTripleData,
    guardrail: Guardrail,
) -> Result<(), CorrespondenceError> {
    let a = reconstruct(t, guardrail)?;
    let lifted = lift(&a, guardrail)?;
    let m = t.lie().dim();
    let internal = |name: &str, witness| {
        Err(CorrespondenceError::Internal(Report::fail(name, 0, witness)))
    };

    if lifted.g.dim() != m {
        return internal(
            "d_surjectivity",
            Witness {
                tuple: vec![],
                lhs: lifted.g.dim().to_string(),
                rhs: m.to_string(),
            },
        );
    }

    // Express each rho(g_a) in the lifted basis.
    let d = t.module_dim();
    let span = span_matrix(&lifted.g_basis_ops, d);
    let mut p_cols = Vec::with_capacity(m);
    for (a_idx, rho_a) in t.rho().iter().enumerate() {
        match span.solve(&rho_a.vectorize()) {
            Ok(coords) => p_cols.push(coords),
            Err(_) => {
                return internal(
                    "identification",
                    Witness {
                        tuple: vec![a_idx],
                        lhs: "rho basis operator".into(),
                        rhs: "span of lifted operators".into(),
                    },
                )
            }
        }
    }
    let p = RatMatrix::from_fn(m, m, |r, c| p_cols[c][r].clone());

    // Structure constants transported through P.
    for i in 0..m {
        for j in (i + 1)..m {
            let mut f = vec![Rational::zero(); m];
            for (&k, c) in &t.lie().bracket_basis(i, j) {
                f[k] = c.clone();
            }
            let lhs = p.mul_vec(&f);
            let rhs = lifted.g.bracket_vec(&p_cols[i], &p_cols[j]);
            if lhs != rhs {
                return internal(
                    "lie_constants_identification",
                    Witness {
                        tuple: vec![i, j],
                        lhs: render_vector(&lhs),
                        rhs: render_vector(&rhs),
                    },
                );
            }
        }
    }

    // Omega pulls back exactly.
    let pulled = p.transpose().mul(lifted.g.omega()).mul(&p);
    if &pulled != t.lie().omega() {
        return internal(
            "omega_pullback",
            Witness {
                tuple: vec![],
                lhs: crate::matrix::render_matrix(&pulled),
                rhs: crate::matrix::render_matrix(t.lie().omega()),
            },
        );
    }
    Ok(())
}

/// Element of the (n-1)-fold tensor power of the module, stored as a sparse
/// map from index tuples to coefficients. Tensor tuples are not symmetric,
/// so keys are arbitrary ordered tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElem {
    dim: usize,
    order: usize,
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl TensorElem {
    pub fn zero(dim: usize, order: usize) -> Self {
        TensorElem {
            dim,
            order,
            terms: BTreeMap::new(),
        }
    }

    /// The basis tensor `e_{k_1} ⊗ .. ⊗ e_{k_order}`.
    pub fn basis(dim: usize, key: Vec<usize>) -> Self {
        assert!(key.iter().all(|&i| i < dim), "index out of range");
        let order = key.len();
        let mut terms = BTreeMap::new();
        terms.insert(key, Rational::from_integer(1.into()));
        TensorElem { dim, order, terms }
    }

    /// The simple tensor `v_1 ⊗ .. ⊗ v_k` of arbitrary rational vectors,
    /// expanded over the tuple basis.
    pub fn simple(vectors: &[Vec<Rational>]) -> Self {
        let order = vectors.len();
        assert!(order > 0, "simple tensor needs at least one factor");
        let dim = vectors[0].len();
        assert!(vectors.iter().all(|v| v.len() == dim), "ragged factors");
        let mut out = TensorElem::zero(dim, order);
        let space = TupleSpace::new(dim, order);
        for i in 0..space.total() {
            let key = space.decode(i);
            let mut coeff = Rational::from_integer(1.into());
            let mut vanishes = false;
            for (slot, &idx) in key.iter().enumerate() {
                if vectors[slot][idx].is_zero() {
                    vanishes = true;
                    break;
                }
                coeff *= &vectors[slot][idx];
            }
            if !vanishes {
                out.add_term(key, coeff);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.terms.iter()
    }

    /// Adds `coeff` on `key`, removing the entry when it cancels to zero.
    pub fn add_term(&mut self, key: Vec<usize>, coeff: Rational) {
        debug_assert_eq!(key.len(), self.order);
        if coeff.is_zero() {
            return;
        }
        let new = match self.terms.get(&key) {
            Some(old) => old + coeff,
            None => coeff,
        };
        if new.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, new);
        }
    }
}

/// The Leibniz bracket on the tensor power:
/// `[U, V] = sum_i v_1 ⊗ .. ⊗ [u_1, .., u_{n-1}, v_i] ⊗ .. ⊗ v_{n-1}`,
/// extended bilinearly.
pub fn tensor_bracket(a: &NLeibnizAlgebra, u: &TensorElem, v: &TensorElem) -> TensorElem {
    let k = a.arity() - 1;
    assert_eq!(u.order(), k);
    assert_eq!(v.order(), k);
    assert_eq!(u.dim(), a.dim());
    assert_eq!(v.dim(), a.dim());
    let mut out = TensorElem::zero(a.dim(), k);
    let mut args = Vec::with_capacity(a.arity());
    for (ukey, uc) in u.terms() {
        for (vkey, vc) in v.terms() {
            let scale = uc * vc;
            for i in 0..k {
                args.clear();
                args.extend_from_slice(ukey);
                args.push(vkey[i]);
                if let Some(result) = a.bracket_basis(&args) {
                    for (&j, cj) in result {
                        let mut key = vkey.clone();
                        key[i] = j;
                        out.add_term(key, &scale * cj);
                    }
                }
            }
        }
    }
    out
}

/// The bilinear form on the tensor power:
/// `B(U, V) = S([u_1, .., u_{n-1}, v_1], v_2, .., v_{n-1})`, extended
/// bilinearly.
pub fn tensor_form_b(a: &NLeibnizAlgebra, u: &TensorElem, v: &TensorElem) -> Rational {
    let k = a.arity() - 1;
    assert_eq!(u.order(), k);
    assert_eq!(v.order(), k);
    let mut acc = Rational::zero();
    let mut args = Vec::with_capacity(a.arity());
    for (ukey, uc) in u.terms() {
        for (vkey, vc) in v.terms() {
            args.clear();
            args.extend_from_slice(ukey);
            args.push(vkey[0]);
            if let Some(result) = a.bracket_basis(&args) {
                let s = a.form().eval_slot_sparse(vkey, 0, result);
                if !s.is_zero() {
                    acc += uc * vc * s;
                }
            }
        }
    }
    acc
}

/// Dimension of the radical of B, from the nullity of its Gram matrix on
/// the tuple basis. This route is independent of the D-vectorization used
/// by [`image_of_d`], so the two can cross-check each other.
pub fn b_radical_dim(a: &NLeibnizAlgebra, guardrail: Guardrail) -> Result<usize, GuardrailExceeded> {
    let k = a.arity() - 1;
    let d = a.dim();
    let total = guardrail.tuple_count(d, k)?;
    let space = TupleSpace::new(d, k);
    let rows: Vec<Vec<Rational>> = map_indexed(total, Strategy::default(), |p| {
        let pt = space.decode(p);
        let mut args = Vec::with_capacity(a.arity());
        (0..total)
            .map(|q| {
                let qt = space.decode(q);
                args.clear();
                args.extend_from_slice(&pt);
                args.push(qt[0]);
                match a.bracket_basis(&args) {
                    Some(result) => a.form().eval_slot_sparse(&qt, 0, result),
                    None => Rational::zero(),
                }
            })
            .collect()
    });
    let gram = RatMatrix::from_rows(rows);
    Ok(total - gram.rank())
}
