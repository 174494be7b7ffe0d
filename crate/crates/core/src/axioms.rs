//! Decision procedures for the axioms of generalized metric n-Leibniz
//! algebras, metric Lie algebras and generalized orthogonal representations.
//!
//! Every identity here is multilinear, so verifying it on all basis tuples
//! decides it for all vectors; the scans are exhaustive, enumerate tuples
//! in lexicographic order, and report the lexicographically first violation
//! as a [`Witness`]. Failure is a report state, never an error.
//!
//! The composite checks (`check_metric_lie`, `check_orthogonal_rep`) run
//! their sub-checks in a fixed order and return the first failure;
//! `tuples_scanned` counts the tuple domains of the executed stages.

use crate::matrix::{render_matrix, render_vector, vec_is_zero, RatMatrix};
use crate::model::{LieTripleData, MetricLieAlgebra, NLeibnizAlgebra, SparseVec};
use crate::rational::{render_rational, Rational};
use crate::report::{Report, Witness};
use crate::scan::{find_first_failure, Strategy, TupleSpace};
use crate::tensor::SymTensor;
use num::Zero;

pub const FUNDAMENTAL_IDENTITY: &str = "fundamental_identity";
pub const UNITARITY: &str = "unitarity";
pub const SYMMETRY: &str = "symmetry";
pub const CYCLIC_SUM: &str = "cyclic_sum";
pub const METRIC_LIE: &str = "metric_lie";
pub const ORTHOGONAL_REP: &str = "orthogonal_rep";
pub const S_NONDEGENERATE: &str = "s_nondegenerate";

/// Both sides of the fundamental identity on basis tuples `u` (length n-1)
/// and `v` (length n).
fn fundamental_identity_sides(
    a: &NLeibnizAlgebra,
    u: &[usize],
    v: &[usize],
) -> (Vec<Rational>, Vec<Rational>) {
    let n = a.arity();
    let d = a.dim();

    let mut outer = Vec::with_capacity(n);
    outer.extend_from_slice(u);
    outer.push(0);
    let lhs = match a.bracket_basis(v) {
        Some(inner) => a.bracket_slot_sparse(&outer, n - 1, inner),
        None => vec![Rational::zero(); d],
    };

    let mut rhs = vec![Rational::zero(); d];
    let mut inner_args = Vec::with_capacity(n);
    for i in 0..n {
        inner_args.clear();
        inner_args.extend_from_slice(u);
        inner_args.push(v[i]);
        if let Some(acted) = a.bracket_basis(&inner_args) {
            let term = a.bracket_slot_sparse(v, i, acted);
            for (dst, src) in rhs.iter_mut().zip(term) {
                *dst += src;
            }
        }
    }
    (lhs, rhs)
}

/// Left-hand side of the unitarity condition on basis tuples `u`, `v`
/// (both length n-1); the axiom requires it to vanish.
fn unitarity_sum(a: &NLeibnizAlgebra, u: &[usize], v: &[usize]) -> Rational {
    let n = a.arity();
    let mut sum = Rational::zero();
    let mut args = Vec::with_capacity(n);
    for i in 0..n - 1 {
        args.clear();
        args.extend_from_slice(u);
        args.push(v[i]);
        if let Some(acted) = a.bracket_basis(&args) {
            sum += a.form().eval_slot_sparse(v, i, acted);
        }
    }
    sum
}

/// `S([u..., v_1], v_2, .., v_{n-1})`.
fn symmetry_side(a: &NLeibnizAlgebra, u: &[usize], v: &[usize]) -> Rational {
    let mut args = Vec::with_capacity(a.arity());
    args.extend_from_slice(u);
    args.push(v[0]);
    match a.bracket_basis(&args) {
        Some(acted) => a.form().eval_slot_sparse(v, 0, acted),
        None => Rational::zero(),
    }
}

/// Sum over i of `[v_i, v_1, .., v_i omitted, .., v_{n-1}, v_n]`.
fn cyclic_sum(a: &NLeibnizAlgebra, v: &[usize]) -> Vec<Rational> {
    let n = a.arity();
    let mut total = vec![Rational::zero(); a.dim()];
    let mut args = Vec::with_capacity(n);
    for i in 0..n - 1 {
        args.clear();
        args.push(v[i]);
        for (j, &vj) in v[..n - 1].iter().enumerate() {
            if j != i {
                args.push(vj);
            }
        }
        args.push(v[n - 1]);
        if let Some(result) = a.bracket_basis(&args) {
            for (&k, c) in result {
                total[k] += c;
            }
        }
    }
    total
}

/// Fundamental identity of an n-Leibniz algebra, scanned over all basis
/// tuples `(u_1..u_{n-1}, v_1..v_n)`.
pub fn check_fundamental_identity(a: &NLeibnizAlgebra) -> Report {
    check_fundamental_identity_with(a, Strategy::default())
}

pub fn check_fundamental_identity_with(a: &NLeibnizAlgebra, strategy: Strategy) -> Report {
    let n = a.arity();
    let space = TupleSpace::new(a.dim(), 2 * n - 1);
    let failure = find_first_failure(space.total(), strategy, |i| {
        let tuple = space.decode(i);
        let (lhs, rhs) = fundamental_identity_sides(a, &tuple[..n - 1], &tuple[n - 1..]);
        lhs != rhs
    });
    match failure {
        None => Report::pass(FUNDAMENTAL_IDENTITY, space.total()),
        Some(i) => {
            let tuple = space.decode(i);
            let (lhs, rhs) = fundamental_identity_sides(a, &tuple[..n - 1], &tuple[n - 1..]);
            Report::fail(
                FUNDAMENTAL_IDENTITY,
                space.total(),
                Witness {
                    tuple,
                    lhs: render_vector(&lhs),
                    rhs: render_vector(&rhs),
                },
            )
        }
    }
}

/// Unitarity condition of the metric structure.
pub fn check_unitarity(a: &NLeibnizAlgebra) -> Report {
    check_unitarity_with(a, Strategy::default())
}

pub fn check_unitarity_with(a: &NLeibnizAlgebra, strategy: Strategy) -> Report {
    let k = a.arity() - 1;
    let space = TupleSpace::new(a.dim(), 2 * k);
    let failure = find_first_failure(space.total(), strategy, |i| {
        let tuple = space.decode(i);
        !unitarity_sum(a, &tuple[..k], &tuple[k..]).is_zero()
    });
    match failure {
        None => Report::pass(UNITARITY, space.total()),
        Some(i) => {
            let tuple = space.decode(i);
            let sum = unitarity_sum(a, &tuple[..k], &tuple[k..]);
            Report::fail(
                UNITARITY,
                space.total(),
                Witness {
                    tuple,
                    lhs: render_rational(&sum),
                    rhs: "0".into(),
                },
            )
        }
    }
}

/// Symmetry condition of the metric structure.
pub fn check_symmetry(a: &NLeibnizAlgebra) -> Report {
    check_symmetry_with(a, Strategy::default())
}

pub fn check_symmetry_with(a: &NLeibnizAlgebra, strategy: Strategy) -> Report {
    let k = a.arity() - 1;
    let space = TupleSpace::new(a.dim(), 2 * k);
    let failure = find_first_failure(space.total(), strategy, |i| {
        let tuple = space.decode(i);
        symmetry_side(a, &tuple[..k], &tuple[k..]) != symmetry_side(a, &tuple[k..], &tuple[..k])
    });
    match failure {
        None => Report::pass(SYMMETRY, space.total()),
        Some(i) => {
            let tuple = space.decode(i);
            let lhs = symmetry_side(a, &tuple[..k], &tuple[k..]);
            let rhs = symmetry_side(a, &tuple[k..], &tuple[..k]);
            Report::fail(
                SYMMETRY,
                space.total(),
                Witness {
                    tuple,
                    lhs: render_rational(&lhs),
                    rhs: render_rational(&rhs),
                },
            )
        }
    }
}

/// Vanishing of the sum over i of `[v_i, v_1, .., v_i omitted, .., v_n]`.
/// This is a consequence of unitarity, symmetry and non-degeneracy, so a
/// failure while those pass points at an implementation bug rather than at
/// the input.
pub fn check_cyclic_sum(a: &NLeibnizAlgebra) -> Report {
    check_cyclic_sum_with(a, Strategy::default())
}

pub fn check_cyclic_sum_with(a: &NLeibnizAlgebra, strategy: Strategy) -> Report {
    let space = TupleSpace::new(a.dim(), a.arity());
    let failure = find_first_failure(space.total(), strategy, |i| {
        !vec_is_zero(&cyclic_sum(a, &space.decode(i)))
    });
    match failure {
        None => Report::pass(CYCLIC_SUM, space.total()),
        Some(i) => {
            let tuple = space.decode(i);
            let sum = cyclic_sum(a, &tuple);
            let zero = vec![Rational::zero(); a.dim()];
            Report::fail(
                CYCLIC_SUM,
                space.total(),
                Witness {
                    tuple,
                    lhs: render_vector(&sum),
                    rhs: render_vector(&zero),
                },
            )
        }
    }
}

/// Non-degeneracy of the symmetric form, decided by the rank of the sharp
/// map. A failing witness carries a kernel vector.
pub fn check_s_nondegenerate(s: &SymTensor) -> Report {
    let sharp = s.sharp_matrix();
    if sharp.rank() == s.dim() {
        return Report::pass(S_NONDEGENERATE, 0);
    }
    let kernel = sharp.transpose().nullspace();
    let vec = kernel.first().expect("rank deficiency yields a kernel vector");
    Report::fail(
        S_NONDEGENERATE,
        0,
        Witness {
            tuple: vec![],
            lhs: render_vector(vec),
            rhs: "0".into(),
        },
    )
}

// ---------------------------------------------------------------------------
// Stages of the composite checks. Each returns the lexicographically first
// witness, if any; the composites and the file validator assemble them.
// ---------------------------------------------------------------------------

fn lie_double_bracket(l: &MetricLieAlgebra, inner: &SparseVec, c: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); l.dim()];
    for (&k, coeff) in inner {
        for (&j, cj) in &l.bracket_basis(k, c) {
            out[j] += coeff * cj;
        }
    }
    out
}

fn jacobi_sum(l: &MetricLieAlgebra, a: usize, b: usize, c: usize) -> Vec<Rational> {
    let mut total = lie_double_bracket(l, &l.bracket_basis(a, b), c);
    for (dst, src) in total
        .iter_mut()
        .zip(lie_double_bracket(l, &l.bracket_basis(b, c), a))
    {
        *dst += src;
    }
    for (dst, src) in total
        .iter_mut()
        .zip(lie_double_bracket(l, &l.bracket_basis(c, a), b))
    {
        *dst += src;
    }
    total
}

pub(crate) fn jacobi_witness(l: &MetricLieAlgebra, strategy: Strategy) -> Option<Witness> {
    let space = TupleSpace::new(l.dim(), 3);
    let i = find_first_failure(space.total(), strategy, |i| {
        let t = space.decode(i);
        !vec_is_zero(&jacobi_sum(l, t[0], t[1], t[2]))
    })?;
    let t = space.decode(i);
    let sum = jacobi_sum(l, t[0], t[1], t[2]);
    let zero = vec![Rational::zero(); l.dim()];
    Some(Witness {
        tuple: t,
        lhs: render_vector(&sum),
        rhs: render_vector(&zero),
    })
}

pub(crate) fn omega_symmetry_witness(l: &MetricLieAlgebra) -> Option<Witness> {
    let m = l.dim();
    for i in 0..m {
        for j in (i + 1)..m {
            if l.omega().at(i, j) != l.omega().at(j, i) {
                return Some(Witness {
                    tuple: vec![i, j],
                    lhs: render_rational(l.omega().at(i, j)),
                    rhs: render_rational(l.omega().at(j, i)),
                });
            }
        }
    }
    None
}

pub(crate) fn omega_nondegeneracy_witness(l: &MetricLieAlgebra) -> Option<Witness> {
    if l.omega().rank() == l.dim() {
        return None;
    }
    let kernel = l.omega().nullspace();
    let vec = kernel.first().expect("rank deficiency yields a kernel vector");
    Some(Witness {
        tuple: vec![],
        lhs: render_vector(vec),
        rhs: "0".into(),
    })
}

fn ad_invariance_sides(l: &MetricLieAlgebra, a: usize, b: usize, c: usize) -> (Rational, Rational) {
    let lhs = l.omega_sparse_basis(&l.bracket_basis(a, b), c);
    let mut inner = Rational::zero();
    for (&k, coeff) in &l.bracket_basis(a, c) {
        inner += coeff * l.omega().at(b, k);
    }
    (lhs, -inner)
}

pub(crate) fn ad_invariance_witness(l: &MetricLieAlgebra, strategy: Strategy) -> Option<Witness> {
    let space = TupleSpace::new(l.dim(), 3);
    let i = find_first_failure(space.total(), strategy, |i| {
        let t = space.decode(i);
        let (lhs, rhs) = ad_invariance_sides(l, t[0], t[1], t[2]);
        lhs != rhs
    })?;
    let t = space.decode(i);
    let (lhs, rhs) = ad_invariance_sides(l, t[0], t[1], t[2]);
    Some(Witness {
        tuple: t,
        lhs: render_rational(&lhs),
        rhs: render_rational(&rhs),
    })
}

pub(crate) fn rep_homomorphism_witness(t: &LieTripleData) -> Option<Witness> {
    let m = t.lie().dim();
    let d = t.module_dim();
    for a in 0..m {
        for b in (a + 1)..m {
            let mut lhs = RatMatrix::zero(d, d);
            for (&c, coeff) in &t.lie().bracket_basis(a, b) {
                lhs = lhs.add(&t.rho()[c].scale(coeff));
            }
            let rhs = t.rho()[a].commutator(&t.rho()[b]);
            if lhs != rhs {
                return Some(Witness {
                    tuple: vec![a, b],
                    lhs: render_matrix(&lhs),
                    rhs: render_matrix(&rhs),
                });
            }
        }
    }
    None
}

pub(crate) fn rep_faithfulness_witness(t: &LieTripleData) -> Option<Witness> {
    let m = t.lie().dim();
    if m == 0 {
        return None;
    }
    let stacked = RatMatrix::from_rows(t.rho().iter().map(RatMatrix::vectorize).collect());
    if stacked.rank() == m {
        return None;
    }
    let kernel = stacked.transpose().nullspace();
    let vec = kernel.first().expect("rank deficiency yields a kernel vector");
    Some(Witness {
        tuple: vec![],
        lhs: render_vector(vec),
        rhs: "0".into(),
    })
}

fn rep_orthogonality_sum(t: &LieTripleData, x: usize, w: &[usize]) -> Rational {
    let mut sum = Rational::zero();
    for i in 0..w.len() {
        let acted = t.rho()[x].col(w[i]);
        sum += t.form().eval_slot_dense(w, i, &acted);
    }
    sum
}

pub(crate) fn rep_orthogonality_witness(t: &LieTripleData, strategy: Strategy) -> Option<Witness> {
    let space = TupleSpace::new(t.module_dim(), t.arity() - 1);
    let total = t.lie().dim() * space.total();
    let i = find_first_failure(total, strategy, |i| {
        let x = i / space.total();
        let w = space.decode(i % space.total());
        !rep_orthogonality_sum(t, x, &w).is_zero()
    })?;
    let x = i / space.total();
    let w = space.decode(i % space.total());
    let sum = rep_orthogonality_sum(t, x, &w);
    let mut tuple = vec![x];
    tuple.extend_from_slice(&w);
    Some(Witness {
        tuple,
        lhs: render_rational(&sum),
        rhs: "0".into(),
    })
}

/// Verifies that a Lie algebra with a bilinear form is metric: the Jacobi
/// identity, symmetry and non-degeneracy of omega, and ad-invariance
/// `omega([x,y],z) = -omega(y,[x,z])` on all basis triples. Antisymmetry of
/// the bracket holds by construction of [`MetricLieAlgebra`].
pub fn check_metric_lie(l: &MetricLieAlgebra) -> Report {
    check_metric_lie_with(l, Strategy::default())
}

pub fn check_metric_lie_with(l: &MetricLieAlgebra, strategy: Strategy) -> Report {
    let m = l.dim();
    let triples = TupleSpace::new(m, 3).total();
    let mut scanned = triples;
    if let Some(w) = jacobi_witness(l, strategy) {
        return Report::fail(METRIC_LIE, scanned, w);
    }
    scanned += m * m;
    if let Some(w) = omega_symmetry_witness(l) {
        return Report::fail(METRIC_LIE, scanned, w);
    }
    if let Some(w) = omega_nondegeneracy_witness(l) {
        return Report::fail(METRIC_LIE, scanned, w);
    }
    scanned += triples;
    if let Some(w) = ad_invariance_witness(l, strategy) {
        return Report::fail(METRIC_LIE, scanned, w);
    }
    Report::pass(METRIC_LIE, scanned)
}

/// Verifies that the representation of a Lie triple data is a Lie algebra
/// homomorphism, is faithful, and is generalized orthogonal with respect to
/// the form.
pub fn check_orthogonal_rep(t: &LieTripleData) -> Report {
    check_orthogonal_rep_with(t, Strategy::default())
}

pub fn check_orthogonal_rep_with(t: &LieTripleData, strategy: Strategy) -> Report {
    let m = t.lie().dim();
    let mut scanned = m * m.saturating_sub(1) / 2;
    if let Some(w) = rep_homomorphism_witness(t) {
        return Report::fail(ORTHOGONAL_REP, scanned, w);
    }
    if let Some(w) = rep_faithfulness_witness(t) {
        return Report::fail(ORTHOGONAL_REP, scanned, w);
    }
    scanned += m * TupleSpace::new(t.module_dim(), t.arity() - 1).total();
    if let Some(w) = rep_orthogonality_witness(t, strategy) {
        return Report::fail(ORTHOGONAL_REP, scanned, w);
    }
    Report::pass(ORTHOGONAL_REP, scanned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;
    use crate::rational::rat_int;
    use crate::tensor::SymTensor;

    fn euclidean(dim: usize) -> SymTensor {
        SymTensor::new(dim, 2, (0..dim).map(|i| (vec![i, i], rat_int(1)))).unwrap()
    }

    fn abelian(arity: usize, dim: usize) -> NLeibnizAlgebra {
        let entries = crate::tensor::sorted_tuples(dim, arity - 1)
            .into_iter()
            .filter(|t| t.windows(2).all(|w| w[0] == w[1]))
            .map(|t| (t, rat_int(1)));
        let s = SymTensor::new(dim, arity - 1, entries).unwrap();
        NLeibnizAlgebra::abelian(arity, dim, s).unwrap()
    }

    #[test]
    fn abelian_passes_all_algebra_checks() {
        for (n, d) in [(2, 1), (3, 2), (4, 2)] {
            let a = abelian(n, d);
            assert!(check_fundamental_identity(&a).pass);
            assert!(check_unitarity(&a).pass);
            assert!(check_symmetry(&a).pass);
            assert!(check_cyclic_sum(&a).pass);
        }
    }

    #[test]
    fn strategies_agree() {
        let a = abelian(3, 3);
        for check in [
            check_fundamental_identity_with,
            check_unitarity_with,
            check_symmetry_with,
            check_cyclic_sum_with,
        ] {
            assert_eq!(
                check(&a, Strategy::Sequential),
                check(&a, Strategy::Parallel)
            );
        }
    }

    #[test]
    fn s_nondegenerate_reports() {
        assert!(check_s_nondegenerate(&euclidean(4)).pass);
        let zero = SymTensor::new(2, 2, []).unwrap();
        let report = check_s_nondegenerate(&zero);
        assert!(!report.pass);
        assert_eq!(report.witness.unwrap().lhs, "[1, 0]");
    }

    #[test]
    fn abelian_lie_with_identity_form_is_metric() {
        let l = MetricLieAlgebra::new(3, [], RatMatrix::identity(3)).unwrap();
        let report = check_metric_lie(&l);
        assert!(report.pass, "{report}");
    }

    #[test]
    fn degenerate_omega_is_caught() {
        let l = MetricLieAlgebra::new(2, [], RatMatrix::zero(2, 2)).unwrap();
        let report = check_metric_lie(&l);
        assert!(!report.pass);
        assert_eq!(report.witness.unwrap().lhs, "[1, 0]");
    }

    #[test]
    fn zero_dimensional_rep_passes_vacuously() {
        let l = MetricLieAlgebra::new(0, [], RatMatrix::zero(0, 0)).unwrap();
        let t = LieTripleData::new(l, 2, vec![], euclidean(2), 3).unwrap();
        let report = check_orthogonal_rep(&t);
        assert!(report.pass, "{report}");
    }

    #[test]
    fn unfaithful_rep_is_caught() {
        let l = MetricLieAlgebra::new(1, [], RatMatrix::identity(1)).unwrap();
        let t = LieTripleData::new(l, 2, vec![RatMatrix::zero(2, 2)], euclidean(2), 3).unwrap();
        let report = check_orthogonal_rep(&t);
        assert!(!report.pass);
        assert_eq!(report.witness.unwrap().lhs, "[1]");
    }

    #[test]
    fn non_orthogonal_rep_is_caught() {
        // rho(e_0) = identity is not skew for the Euclidean form.
        let l = MetricLieAlgebra::new(1, [], RatMatrix::identity(1)).unwrap();
        let t = LieTripleData::new(l, 2, vec![RatMatrix::identity(2)], euclidean(2), 3).unwrap();
        let report = check_orthogonal_rep(&t);
        assert!(!report.pass);
        let witness = report.witness.unwrap();
        assert_eq!(witness.tuple, vec![0, 0, 0]);
        assert_eq!(witness.lhs, "2");
    }
}
