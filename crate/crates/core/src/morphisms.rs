//! Generalized orthogonal derivations and automorphisms, and the transfer
//! of both across the correspondence.
//!
//! Derivations form a linear space, so they are solved for: the derivation
//! law and the S-condition stack into one linear system in the d*d operator
//! entries whose nullspace is returned. Automorphisms form a nonlinear
//! variety, so candidates are only checked, either user-supplied or from
//! the built-in signed-permutation list.
//!
//! Transfer verifications distinguish two failure modes: a violated
//! precondition (`Precondition`, the input's fault) and a violated
//! conclusion after the preconditions passed (`Internal`), which the theory
//! rules out and therefore indicates a bug somewhere.

use crate::correspondence::{
    metric_axioms_failure, reconstruct, span_matrix, CorrespondenceError, FaulknerSolver,
    LiftResult,
};
use crate::matrix::{render_matrix, render_vector, RatMatrix, SpanBuilder};
use crate::model::{
    Guardrail, GuardrailExceeded, LieTripleData, LinearOperator, MetricLieAlgebra,
    NLeibnizAlgebra,
};
use crate::rational::{render_rational, Rational};
use crate::report::{Report, Witness};
use crate::scan::{find_first_failure, map_indexed, Strategy, TupleSpace};
use crate::tensor::next_permutation;
use num::Zero;
use thiserror::Error;

pub const DERIVATION: &str = "derivation";
pub const AUTOMORPHISM: &str = "automorphism";
pub const LIE_DERIVATION_TRANSFER: &str = "lie_derivation_transfer";
pub const TRIPLE_DERIVATION_TRANSFER: &str = "triple_derivation_transfer";
pub const LIE_AUTOMORPHISM_TRANSFER: &str = "lie_automorphism_transfer";
pub const TRIPLE_AUTOMORPHISM_TRANSFER: &str = "triple_automorphism_transfer";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MorphismError {
    #[error("precondition failed: {0}")]
    Precondition(Report),
    #[error(transparent)]
    Guardrail(#[from] GuardrailExceeded),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
    #[error("internal invariant violated after preconditions passed: {0}")]
    Internal(Report),
}

/// Basis of the space of generalized orthogonal derivations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpace {
    pub algebra_dim: usize,
    pub basis: Vec<LinearOperator>,
    pub constraint_rank: usize,
}

impl DerivationSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Direct verification that an operator is a generalized orthogonal
/// derivation: the derivation law on all basis n-tuples and the vanishing
/// S-sum on all basis (n-1)-tuples, evaluated straight from the structure
/// constants.
pub fn check_derivation(a: &NLeibnizAlgebra, d_v: &LinearOperator) -> Report {
    check_derivation_with(a, d_v, Strategy::default())
}

pub fn check_derivation_with(a: &NLeibnizAlgebra, d_v: &LinearOperator, strategy: Strategy) -> Report {
    assert_eq!(d_v.dim(), a.dim(), "operator dimension mismatch");
    let n = a.arity();
    let d = a.dim();

    let law_sides = |u: &[usize]| -> (Vec<Rational>, Vec<Rational>) {
        let lhs = match a.bracket_basis(u) {
            Some(result) => d_v.apply_sparse(result),
            None => vec![Rational::zero(); d],
        };
        let mut rhs = vec![Rational::zero(); d];
        for i in 0..n {
            let term = a.bracket_slot_dense(u, i, &d_v.column(u[i]));
            for (dst, src) in rhs.iter_mut().zip(term) {
                *dst += src;
            }
        }
        (lhs, rhs)
    };

    let law_space = TupleSpace::new(d, n);
    let mut scanned = law_space.total();
    let failure = find_first_failure(law_space.total(), strategy, |i| {
        let u = law_space.decode(i);
        let (lhs, rhs) = law_sides(&u);
        lhs != rhs
    });
    if let Some(i) = failure {
        let u = law_space.decode(i);
        let (lhs, rhs) = law_sides(&u);
        return Report::fail(
            DERIVATION,
            scanned,
            Witness {
                tuple: u,
                lhs: render_vector(&lhs),
                rhs: render_vector(&rhs),
            },
        );
    }

    let s_sum = |w: &[usize]| -> Rational {
        let mut sum = Rational::zero();
        for i in 0..n - 1 {
            sum += a.form().eval_slot_dense(w, i, &d_v.column(w[i]));
        }
        sum
    };
    let s_space = TupleSpace::new(d, n - 1);
    scanned += s_space.total();
    let failure = find_first_failure(s_space.total(), strategy, |i| {
        !s_sum(&s_space.decode(i)).is_zero()
    });
    if let Some(i) = failure {
        let w = s_space.decode(i);
        let sum = s_sum(&w);
        return Report::fail(
            DERIVATION,
            scanned,
            Witness {
                tuple: w,
                lhs: render_rational(&sum),
                rhs: "0".into(),
            },
        );
    }
    Report::pass(DERIVATION, scanned)
}

/// Verifies that an operator is a generalized orthogonal automorphism:
/// invertible, equivariant for the bracket on all basis n-tuples, and
/// preserving S on all basis (n-1)-tuples.
pub fn check_automorphism(a: &NLeibnizAlgebra, phi: &LinearOperator) -> Report {
    check_automorphism_with(a, phi, Strategy::default())
}

pub fn check_automorphism_with(a: &NLeibnizAlgebra, phi: &LinearOperator, strategy: Strategy) -> Report {
    assert_eq!(phi.dim(), a.dim(), "operator dimension mismatch");
    let n = a.arity();
    let d = a.dim();

    if !phi.is_invertible() {
        return Report::fail(
            AUTOMORPHISM,
            0,
            Witness {
                tuple: vec![],
                lhs: format!("rank {}", phi.matrix().rank()),
                rhs: format!("rank {d}"),
            },
        );
    }

    let equivariance_sides = |u: &[usize]| -> (Vec<Rational>, Vec<Rational>) {
        let lhs = match a.bracket_basis(u) {
            Some(result) => phi.apply_sparse(result),
            None => vec![Rational::zero(); d],
        };
        let mapped: Vec<Vec<Rational>> = u.iter().map(|&k| phi.column(k)).collect();
        let rhs = a.eval_bracket(&mapped);
        (lhs, rhs)
    };

    let law_space = TupleSpace::new(d, n);
    let mut scanned = law_space.total();
    let failure = find_first_failure(law_space.total(), strategy, |i| {
        let u = law_space.decode(i);
        let (lhs, rhs) = equivariance_sides(&u);
        lhs != rhs
    });
    if let Some(i) = failure {
        let u = law_space.decode(i);
        let (lhs, rhs) = equivariance_sides(&u);
        return Report::fail(
            AUTOMORPHISM,
            scanned,
            Witness {
                tuple: u,
                lhs: render_vector(&lhs),
                rhs: render_vector(&rhs),
            },
        );
    }

    let s_sides = |w: &[usize]| -> (Rational, Rational) {
        let mapped: Vec<Vec<Rational>> = w.iter().map(|&k| phi.column(k)).collect();
        (a.form().eval(&mapped), a.form().coeff(w))
    };
    let s_space = TupleSpace::new(d, n - 1);
    scanned += s_space.total();
    let failure = find_first_failure(s_space.total(), strategy, |i| {
        let w = s_space.decode(i);
        let (lhs, rhs) = s_sides(&w);
        lhs != rhs
    });
    if let Some(i) = failure {
        let w = s_space.decode(i);
        let (lhs, rhs) = s_sides(&w);
        return Report::fail(
            AUTOMORPHISM,
            scanned,
            Witness {
                tuple: w,
                lhs: render_rational(&lhs),
                rhs: render_rational(&rhs),
            },
        );
    }
    Report::pass(AUTOMORPHISM, scanned)
}

/// Solves for the space of generalized orthogonal derivations by stacking,
/// over all basis tuples in lexicographic order, the derivation-law rows
/// (one per tuple and output index) and the S-condition rows (one per
/// tuple), then taking the canonical nullspace.
///
/// The returned basis is verified to be closed under commutators up to the
/// span, which the theory guarantees; a failure there is internal.
pub fn solve_derivations(
    a: &NLeibnizAlgebra,
    guardrail: Guardrail,
) -> Result<DerivationSpace, MorphismError> {
    if let Some(report) = metric_axioms_failure(a) {
        return Err(MorphismError::Precondition(report));
    }
    let n = a.arity();
    let d = a.dim();
    let unknowns = d * d;
    let law_total = guardrail.tuple_count(d, n)?;
    let s_total = guardrail.tuple_count(d, n - 1)?;
    let law_space = TupleSpace::new(d, n);
    let s_space = TupleSpace::new(d, n - 1);

    // Derivation-law block: for tuple u and output r,
    //   sum_q x[r,q] [u]_q - sum_i sum_p x[p, u_i] [u | u_i -> p]_r = 0.
    let law_rows: Vec<Vec<Vec<Rational>>> = map_indexed(law_total, Strategy::default(), |idx| {
        let u = law_space.decode(idx);
        let mut rows = vec![vec![Rational::zero(); unknowns]; d];
        if let Some(result) = a.bracket_basis(&u) {
            // coefficient of x[r,q] in the row for output r is [u]_q
            for (&q, c) in result {
                for (r, row) in rows.iter_mut().enumerate() {
                    row[r * d + q] += c;
                }
            }
        }
        let mut probe = u.clone();
        for i in 0..n {
            let original = u[i];
            for p in 0..d {
                probe[i] = p;
                if let Some(result) = a.bracket_basis(&probe) {
                    for (&r, c) in result {
                        rows[r][p * d + original] -= c;
                    }
                }
            }
            probe[i] = original;
        }
        rows
    });

    // S-condition block: for tuple w,
    //   sum_i sum_p x[p, w_i] S(w | w_i -> p) = 0.
    let s_rows: Vec<Vec<Rational>> = map_indexed(s_total, Strategy::default(), |idx| {
        let w = s_space.decode(idx);
        let mut row = vec![Rational::zero(); unknowns];
        let mut probe = w.clone();
        for i in 0..n - 1 {
            let original = w[i];
            for p in 0..d {
                probe[i] = p;
                let c = a.form().coeff(&probe);
                if !c.is_zero() {
                    row[p * d + original] += c;
                }
            }
            probe[i] = original;
        }
        row
    });

    let mut rows: Vec<Vec<Rational>> = law_rows.into_iter().flatten().collect();
    rows.extend(s_rows);
    let system = RatMatrix::from_rows(rows);
    let rank = system.rank();
    let basis: Vec<LinearOperator> = system
        .nullspace()
        .into_iter()
        .map(|v| {
            LinearOperator::new(RatMatrix::from_fn(d, d, |r, c| v[r * d + c].clone()))
                .expect("square by construction")
        })
        .collect();

    // Closure under commutator, a consequence of the defining conditions.
    let mut span = SpanBuilder::new(unknowns);
    for op in &basis {
        span.insert(&op.vectorize());
    }
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let comm = basis[i].commutator(&basis[j]);
            if !span.contains(&comm.vectorize()) {
                return Err(MorphismError::Internal(Report::fail(
                    "derivation_space_closure",
                    0,
                    Witness {
                        tuple: vec![i, j],
                        lhs: render_matrix(comm.matrix()),
                        rhs: "span of the solution basis".into(),
                    },
                )));
            }
        }
    }

    Ok(DerivationSpace {
        algebra_dim: d,
        basis,
        constraint_rank: rank,
    })
}

fn matrix_witness(tuple: Vec<usize>, lhs: &RatMatrix, rhs: &RatMatrix) -> Witness {
    Witness {
        tuple,
        lhs: render_matrix(lhs),
        rhs: render_matrix(rhs),
    }
}

/// Dense vector of the structure constants `[e_i, e_j]` of `g`.
fn structure_vec(g: &MetricLieAlgebra, i: usize, j: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); g.dim()];
    for (&k, c) in &g.bracket_basis(i, j) {
        out[k] = c.clone();
    }
    out
}

/// Checks that `m` is a derivation of `g` and omega-orthogonal. Returns the
/// first failure.
fn lie_derivation_failure(g: &MetricLieAlgebra, m: &RatMatrix) -> Option<Witness> {
    let dim = g.dim();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let lhs = m.mul_vec(&structure_vec(g, i, j));
            let mut rhs = g.bracket_vec(&m.col(i), &unit_vec(dim, j));
            for (dst, src) in rhs.iter_mut().zip(g.bracket_vec(&unit_vec(dim, i), &m.col(j))) {
                *dst += src;
            }
            if lhs != rhs {
                return Some(Witness {
                    tuple: vec![i, j],
                    lhs: render_vector(&lhs),
                    rhs: render_vector(&rhs),
                });
            }
        }
    }
    let skew = m.transpose().mul(g.omega()).add(&g.omega().mul(m));
    if !skew.is_zero() {
        return Some(matrix_witness(vec![], &skew, &RatMatrix::zero(dim, dim)));
    }
    None
}

/// Checks that `m` is a Lie algebra automorphism of `g` preserving omega.
fn lie_automorphism_failure(g: &MetricLieAlgebra, m: &RatMatrix) -> Option<Witness> {
    let dim = g.dim();
    if m.rank() != dim {
        return Some(Witness {
            tuple: vec![],
            lhs: format!("rank {}", m.rank()),
            rhs: format!("rank {dim}"),
        });
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let lhs = m.mul_vec(&structure_vec(g, i, j));
            let rhs = g.bracket_vec(&m.col(i), &m.col(j));
            if lhs != rhs {
                return Some(Witness {
                    tuple: vec![i, j],
                    lhs: render_vector(&lhs),
                    rhs: render_vector(&rhs),
                });
            }
        }
    }
    let pulled = m.transpose().mul(g.omega()).mul(m);
    if &pulled != g.omega() {
        return Some(matrix_witness(vec![], &pulled, g.omega()));
    }
    None
}

fn unit_vec(dim: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[k] = Rational::from_integer(1.into());
    v
}

/// Interplay law `d_V rho(x) = rho(d_g x) + rho(x) d_V` on every basis
/// element, for an arbitrary list of representation matrices.
fn derivation_interplay_failure(
    rho: &[RatMatrix],
    d_g: &RatMatrix,
    d_v: &LinearOperator,
) -> Option<Witness> {
    for (a_idx, rho_a) in rho.iter().enumerate() {
        let lhs = d_v.matrix().mul(rho_a);
        let mut rho_dg = rho_a.mul(d_v.matrix());
        for (k, rho_k) in rho.iter().enumerate() {
            let coeff = d_g.at(k, a_idx);
            if !coeff.is_zero() {
                rho_dg = rho_dg.add(&rho_k.scale(coeff));
            }
        }
        if lhs != rho_dg {
            return Some(matrix_witness(vec![a_idx], &lhs, &rho_dg));
        }
    }
    None
}

/// Interplay law `Phi_V rho(x) = rho(Phi_g x) Phi_V` on every basis element.
fn automorphism_interplay_failure(
    rho: &[RatMatrix],
    phi_g: &RatMatrix,
    phi_v: &LinearOperator,
) -> Option<Witness> {
    for (a_idx, rho_a) in rho.iter().enumerate() {
        let lhs = phi_v.matrix().mul(rho_a);
        let mut mapped = RatMatrix::zero(phi_v.dim(), phi_v.dim());
        for (k, rho_k) in rho.iter().enumerate() {
            let coeff = phi_g.at(k, a_idx);
            if !coeff.is_zero() {
                mapped = mapped.add(&rho_k.scale(coeff));
            }
        }
        let rhs = mapped.mul(phi_v.matrix());
        if lhs != rhs {
            return Some(matrix_witness(vec![a_idx], &lhs, &rhs));
        }
    }
    None
}

/// Transfers a generalized orthogonal derivation of the algebra to the
/// lifted Lie algebra: `d_g(g_a) = [d_V, g_a]` expressed in the chosen
/// basis. The returned report certifies that `d_g` is an omega-orthogonal
/// Lie derivation and that the interplay law holds; those are consequences
/// of the precondition, so their failure is internal.
pub fn induce_lie_derivation(
    l: &LiftResult,
    d_v: &LinearOperator,
) -> Result<(RatMatrix, Report), MorphismError> {
    let pre = check_derivation(&l.algebra, d_v);
    if !pre.pass {
        return Err(MorphismError::Precondition(pre));
    }
    let m = l.g.dim();
    let d = l.algebra.dim();
    let span = span_matrix(&l.g_basis_ops, d);
    let mut cols = Vec::with_capacity(m);
    for (a_idx, op) in l.g_basis_ops.iter().enumerate() {
        let comm = d_v.commutator(op);
        match span.solve(&comm.vectorize()) {
            Ok(coords) => cols.push(coords),
            Err(_) => {
                return Err(MorphismError::Internal(Report::fail(
                    LIE_DERIVATION_TRANSFER,
                    0,
                    Witness {
                        tuple: vec![a_idx],
                        lhs: render_matrix(comm.matrix()),
                        rhs: "span of Im D".into(),
                    },
                )))
            }
        }
    }
    let d_g = RatMatrix::from_fn(m, m, |r, c| cols[c][r].clone());

    let scanned = pre.tuples_scanned + m * m.saturating_sub(1) / 2 + m;
    if let Some(w) = lie_derivation_failure(&l.g, &d_g) {
        return Err(MorphismError::Internal(Report::fail(
            LIE_DERIVATION_TRANSFER,
            scanned,
            w,
        )));
    }
    let rho: Vec<RatMatrix> = l.g_basis_ops.iter().map(|o| o.matrix().clone()).collect();
    if let Some(w) = derivation_interplay_failure(&rho, &d_g, d_v) {
        return Err(MorphismError::Internal(Report::fail(
            LIE_DERIVATION_TRANSFER,
            scanned,
            w,
        )));
    }
    Ok((d_g, Report::pass(LIE_DERIVATION_TRANSFER, scanned)))
}

/// Verifies that a pair `(d_g, d_V)` is a generalized orthogonal derivation
/// on the triple data, then that the transported `d_V` is a generalized
/// orthogonal derivation of the reconstructed algebra. The key identity
/// `d_g D(v) = sum_i D(v_1, .., d_V v_i, .., v_{n-1})` is verified on all
/// basis tuples through the Gram solver.
pub fn induce_from_triple_derivation(
    t: &LieTripleData,
    d_g: &RatMatrix,
    d_v: &LinearOperator,
    guardrail: Guardrail,
) -> Result<Report, MorphismError> {
    let m = t.lie().dim();
    let d = t.module_dim();
    let k = t.arity() - 1;
    assert_eq!(d_g.rows(), m, "d_g has wrong shape");
    assert_eq!(d_g.cols(), m, "d_g has wrong shape");
    assert_eq!(d_v.dim(), d, "d_V has wrong dimension");

    let precondition = |w| MorphismError::Precondition(Report::fail("triple_derivation_preconditions", 0, w));
    if let Some(w) = lie_derivation_failure(t.lie(), d_g) {
        return Err(precondition(w));
    }
    if let Some(w) = derivation_interplay_failure(t.rho(), d_g, d_v) {
        return Err(precondition(w));
    }
    let s_space = TupleSpace::new(d, k);
    let s_sum = |w: &[usize]| -> Rational {
        let mut sum = Rational::zero();
        for i in 0..k {
            sum += t.form().eval_slot_dense(w, i, &d_v.column(w[i]));
        }
        sum
    };
    for i in 0..s_space.total() {
        let w = s_space.decode(i);
        let sum = s_sum(&w);
        if !sum.is_zero() {
            return Err(precondition(Witness {
                tuple: w,
                lhs: render_rational(&sum),
                rhs: "0".into(),
            }));
        }
    }

    // Key identity through the Gram solver.
    let solver = FaulknerSolver::new(t)?;
    let total = guardrail.tuple_count(d, k)?;
    let space = TupleSpace::new(d, k);
    let mut scanned = 2 * space.total() + m * m.saturating_sub(1) / 2 + m;
    for i in 0..total {
        let w = space.decode(i);
        let lhs = d_g.mul_vec(&solver.d_coords_basis(&w));
        let mut rhs = vec![Rational::zero(); m];
        for slot in 0..k {
            let mut vectors: Vec<Vec<Rational>> = w.iter().map(|&j| unit_vec(d, j)).collect();
            vectors[slot] = d_v.column(w[slot]);
            for (dst, src) in rhs.iter_mut().zip(solver.d_coords(&vectors)) {
                *dst += src;
            }
        }
        if lhs != rhs {
            return Err(MorphismError::Internal(Report::fail(
                "derivation_identity",
                scanned,
                Witness {
                    tuple: w,
                    lhs: render_vector(&lhs),
                    rhs: render_vector(&rhs),
                },
            )));
        }
    }

    let algebra = reconstruct(t, guardrail)?;
    let report = check_derivation(&algebra, d_v);
    scanned += report.tuples_scanned;
    if !report.pass {
        return Err(MorphismError::Internal(report));
    }
    Ok(Report::pass(TRIPLE_DERIVATION_TRANSFER, scanned))
}

/// Transfers a generalized orthogonal automorphism of the algebra to the
/// lifted Lie algebra by conjugation: `Phi_g(g_a) = Phi_V g_a Phi_V^{-1}`
/// expressed in the chosen basis.
pub fn induce_lie_automorphism(
    l: &LiftResult,
    phi_v: &LinearOperator,
) -> Result<(RatMatrix, Report), MorphismError> {
    let pre = check_automorphism(&l.algebra, phi_v);
    if !pre.pass {
        return Err(MorphismError::Precondition(pre));
    }
    let m = l.g.dim();
    let d = l.algebra.dim();
    let inv = phi_v.inverse().expect("precondition verified invertibility");
    let span = span_matrix(&l.g_basis_ops, d);
    let mut cols = Vec::with_capacity(m);
    for (a_idx, op) in l.g_basis_ops.iter().enumerate() {
        let conjugated = phi_v.compose(op).compose(&inv);
        match span.solve(&conjugated.vectorize()) {
            Ok(coords) => cols.push(coords),
            Err(_) => {
                return Err(MorphismError::Internal(Report::fail(
                    LIE_AUTOMORPHISM_TRANSFER,
                    0,
                    Witness {
                        tuple: vec![a_idx],
                        lhs: render_matrix(conjugated.matrix()),
                        rhs: "span of Im D".into(),
                    },
                )))
            }
        }
    }
    let phi_g = RatMatrix::from_fn(m, m, |r, c| cols[c][r].clone());

    let scanned = pre.tuples_scanned + m * m.saturating_sub(1) / 2 + m;
    if let Some(w) = lie_automorphism_failure(&l.g, &phi_g) {
        return Err(MorphismError::Internal(Report::fail(
            LIE_AUTOMORPHISM_TRANSFER,
            scanned,
            w,
        )));
    }
    let rho: Vec<RatMatrix> = l.g_basis_ops.iter().map(|o| o.matrix().clone()).collect();
    if let Some(w) = automorphism_interplay_failure(&rho, &phi_g, phi_v) {
        return Err(MorphismError::Internal(Report::fail(
            LIE_AUTOMORPHISM_TRANSFER,
            scanned,
            w,
        )));
    }
    Ok((phi_g, Report::pass(LIE_AUTOMORPHISM_TRANSFER, scanned)))
}

/// Verifies that a pair `(Phi_g, Phi_V)` is a generalized orthogonal
/// automorphism on the triple data, then that the transported `Phi_V` is a
/// generalized orthogonal automorphism of the reconstructed algebra. The
/// key identity `Phi_g D(v) = D(Phi_V v_1, .., Phi_V v_{n-1})` is verified
/// on all basis tuples through the Gram solver.
pub fn induce_from_triple_automorphism(
    t: &LieTripleData,
    phi_g: &RatMatrix,
    phi_v: &LinearOperator,
    guardrail: Guardrail,
) -> Result<Report, MorphismError> {
    let m = t.lie().dim();
    let d = t.module_dim();
    let k = t.arity() - 1;
    assert_eq!(phi_g.rows(), m, "Phi_g has wrong shape");
    assert_eq!(phi_g.cols(), m, "Phi_g has wrong shape");
    assert_eq!(phi_v.dim(), d, "Phi_V has wrong dimension");

    let precondition = |w| MorphismError::Precondition(Report::fail("triple_automorphism_preconditions", 0, w));
    if !phi_v.is_invertible() {
        return Err(precondition(Witness {
            tuple: vec![],
            lhs: format!("rank {}", phi_v.matrix().rank()),
            rhs: format!("rank {d}"),
        }));
    }
    if let Some(w) = lie_automorphism_failure(t.lie(), phi_g) {
        return Err(precondition(w));
    }
    if let Some(w) = automorphism_interplay_failure(t.rho(), phi_g, phi_v) {
        return Err(precondition(w));
    }
    let s_space = TupleSpace::new(d, k);
    for i in 0..s_space.total() {
        let w = s_space.decode(i);
        let mapped: Vec<Vec<Rational>> = w.iter().map(|&j| phi_v.column(j)).collect();
        let lhs = t.form().eval(&mapped);
        let rhs = t.form().coeff(&w);
        if lhs != rhs {
            return Err(precondition(Witness {
                tuple: w,
                lhs: render_rational(&lhs),
                rhs: render_rational(&rhs),
            }));
        }
    }

    let solver = FaulknerSolver::new(t)?;
    let total = guardrail.tuple_count(d, k)?;
    let space = TupleSpace::new(d, k);
    let mut scanned = 2 * space.total() + m * m.saturating_sub(1) / 2 + m;
    for i in 0..total {
        let w = space.decode(i);
        let lhs = phi_g.mul_vec(&solver.d_coords_basis(&w));
        let mapped: Vec<Vec<Rational>> = w.iter().map(|&j| phi_v.column(j)).collect();
        let rhs = solver.d_coords(&mapped);
        if lhs != rhs {
            return Err(MorphismError::Internal(Report::fail(
                "automorphism_identity",
                scanned,
                Witness {
                    tuple: w,
                    lhs: render_vector(&lhs),
                    rhs: render_vector(&rhs),
                },
            )));
        }
    }

    let algebra = reconstruct(t, guardrail)?;
    let report = check_automorphism(&algebra, phi_v);
    scanned += report.tuples_scanned;
    if !report.pass {
        return Err(MorphismError::Internal(report));
    }
    Ok(Report::pass(TRIPLE_AUTOMORPHISM_TRANSFER, scanned))
}

/// Deterministic list of automorphism candidates: the identity, its
/// negative, then all other signed permutation matrices (permutations in
/// lexicographic order, sign patterns in binary order), truncated to
/// `limit` entries. Candidates are not filtered; run them through
/// [`check_automorphism`].
pub fn builtin_automorphism_candidates(dim: usize, limit: usize) -> Vec<LinearOperator> {
    let mut out = Vec::new();
    if out.len() < limit {
        out.push(LinearOperator::identity(dim));
    }
    if out.len() < limit {
        out.push(LinearOperator::new(RatMatrix::identity(dim).neg()).expect("square"));
    }
    let all_minus: usize = (1 << dim) - 1;
    let mut perm: Vec<usize> = (0..dim).collect();
    loop {
        let identity_perm = perm.iter().enumerate().all(|(i, &p)| p == i);
        for signs in 0..=all_minus {
            if identity_perm && (signs == 0 || signs == all_minus) {
                continue; // plus/minus identity already listed
            }
            if out.len() >= limit {
                return out;
            }
            let mut m = RatMatrix::zero(dim, dim);
            for (col, &row) in perm.iter().enumerate() {
                let value = if signs & (1 << col) != 0 {
                    Rational::from_integer((-1).into())
                } else {
                    Rational::from_integer(1.into())
                };
                m.set(row, col, value);
            }
            out.push(LinearOperator::new(m).expect("square"));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::lift;
    use crate::rational::rat_int;
    use crate::tensor::SymTensor;

    fn euclidean(dim: usize) -> SymTensor {
        SymTensor::new(dim, 2, (0..dim).map(|i| (vec![i, i], rat_int(1)))).unwrap()
    }

    fn abelian3(dim: usize) -> NLeibnizAlgebra {
        NLeibnizAlgebra::abelian(3, dim, euclidean(dim)).unwrap()
    }

    #[test]
    fn abelian_euclidean_derivations_are_skew_matrices() {
        for d in [2, 3] {
            let a = abelian3(d);
            let space = solve_derivations(&a, Guardrail::default()).unwrap();
            assert_eq!(space.dimension(), d * (d - 1) / 2);
            for op in &space.basis {
                assert_eq!(op.matrix().transpose(), op.matrix().neg());
                assert!(check_derivation(&a, op).pass);
            }
        }
    }

    #[test]
    fn zero_operator_is_a_derivation() {
        let a = abelian3(2);
        assert!(check_derivation(&a, &LinearOperator::zero(2)).pass);
    }

    #[test]
    fn identity_is_an_automorphism_of_abelian() {
        let a = abelian3(2);
        assert!(check_automorphism(&a, &LinearOperator::identity(2)).pass);
        // Scaling the first basis vector breaks S-preservation.
        let mut m = RatMatrix::identity(2);
        m.set(0, 0, rat_int(2));
        let report = check_automorphism(&a, &LinearOperator::new(m).unwrap());
        assert!(!report.pass);
    }

    #[test]
    fn zero_derivation_transfers_trivially() {
        let a = abelian3(2);
        let lifted = lift(&a, Guardrail::default()).unwrap();
        let (d_g, report) = induce_lie_derivation(&lifted, &LinearOperator::zero(2)).unwrap();
        assert!(d_g.is_zero());
        assert!(report.pass);
        let back =
            induce_from_triple_derivation(&lifted.triple, &d_g, &LinearOperator::zero(2), Guardrail::default())
                .unwrap();
        assert!(back.pass);
    }

    #[test]
    fn identity_automorphism_transfers_trivially() {
        let a = abelian3(2);
        let lifted = lift(&a, Guardrail::default()).unwrap();
        let phi = LinearOperator::identity(2);
        let (phi_g, report) = induce_lie_automorphism(&lifted, &phi).unwrap();
        assert_eq!(phi_g, RatMatrix::identity(0));
        assert!(report.pass);
        let back =
            induce_from_triple_automorphism(&lifted.triple, &phi_g, &phi, Guardrail::default()).unwrap();
        assert!(back.pass);
    }

    #[test]
    fn builtin_candidates_are_deterministic_and_capped() {
        let candidates = builtin_automorphism_candidates(2, 100);
        // 2 for +-identity, then 2 * 2^2 signed permutations minus the two
        // already listed.
        assert_eq!(candidates.len(), 2 + 2 * 4 - 2);
        assert_eq!(candidates[0], LinearOperator::identity(2));
        let capped = builtin_automorphism_candidates(2, 3);
        assert_eq!(capped.len(), 3);
        assert_eq!(capped[..2], candidates[..2]);
    }

    #[test]
    fn non_derivation_is_rejected_as_precondition() {
        let a = abelian3(2);
        let lifted = lift(&a, Guardrail::default()).unwrap();
        // The identity is not skew, hence not a generalized orthogonal
        // derivation for the Euclidean form.
        let err = induce_lie_derivation(&lifted, &LinearOperator::identity(2)).unwrap_err();
        assert!(matches!(err, MorphismError::Precondition(_)));
    }
}
