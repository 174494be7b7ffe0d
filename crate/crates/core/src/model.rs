//! The three structures of the correspondence: generalized metric n-Leibniz
//! algebras, metric Lie algebras, and Lie triple data, together with linear
//! operators on the module and the tuple-enumeration guardrail.
//!
//! Values are immutable after construction and every operation is a pure
//! function, so shared concurrent reads are safe. Constructors validate
//! structural invariants (index ranges, shapes, key ordering); the semantic
//! axioms live in [`crate::axioms`] and are checked, never assumed.

use crate::matrix::RatMatrix;
use crate::rational::Rational;
use crate::tensor::{SymTensor, TensorError};
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

/// Sparse vector over the basis: index -> nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("arity must be at least 2 (got {0})")]
    BadArity(usize),
    #[error("dimension must be at least 1 (got {0})")]
    BadDimension(usize),
    #[error("basis index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("duplicate entry for {0}")]
    DuplicateEntry(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Cap on the number of basis tuples an operation may enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guardrail(pub usize);

impl Default for Guardrail {
    fn default() -> Self {
        Guardrail(100_000)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration of {required} tuples exceeds the guardrail cap {cap}")]
pub struct GuardrailExceeded {
    pub required: usize,
    pub cap: usize,
}

impl Guardrail {
    /// Number of `slots`-tuples over a basis of size `radix`, or an error
    /// when it exceeds the cap.
    pub fn tuple_count(&self, radix: usize, slots: usize) -> Result<usize, GuardrailExceeded> {
        let over = || GuardrailExceeded {
            required: usize::MAX,
            cap: self.0,
        };
        let required = radix.checked_pow(slots as u32).ok_or_else(over)?;
        if required > self.0 {
            return Err(GuardrailExceeded {
                required,
                cap: self.0,
            });
        }
        Ok(required)
    }
}

fn prune_sparse(v: SparseVec, bound: usize) -> Result<SparseVec, ModelError> {
    for &index in v.keys() {
        if index >= bound {
            return Err(ModelError::IndexOutOfRange { index, bound });
        }
    }
    Ok(v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// Generalized metric n-Leibniz algebra: an n-linear bracket given by sparse
/// structure constants on basis tuples, plus a symmetric (n-1)-tensor.
///
/// The bracket map stores arbitrary ordered tuples; no skew-symmetry is
/// imposed because n-Leibniz brackets are not skew in general.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NLeibnizAlgebra {
    arity: usize,
    dim: usize,
    bracket: BTreeMap<Vec<usize>, SparseVec>,
    s: SymTensor,
    basis_names: Option<Vec<String>>,
}

impl NLeibnizAlgebra {
    pub fn new(
        arity: usize,
        dim: usize,
        bracket: impl IntoIterator<Item = (Vec<usize>, SparseVec)>,
        s: SymTensor,
        basis_names: Option<Vec<String>>,
    ) -> Result<Self, ModelError> {
        if arity < 2 {
            return Err(ModelError::BadArity(arity));
        }
        if dim == 0 {
            return Err(ModelError::BadDimension(dim));
        }
        if s.order() != arity - 1 || s.dim() != dim {
            return Err(ModelError::Shape(format!(
                "form has order {} and dimension {}, expected order {} and dimension {}",
                s.order(),
                s.dim(),
                arity - 1,
                dim
            )));
        }
        if let Some(names) = &basis_names {
            if names.len() != dim {
                return Err(ModelError::Shape(format!(
                    "{} basis names for dimension {}",
                    names.len(),
                    dim
                )));
            }
        }
        let mut map = BTreeMap::new();
        for (key, value) in bracket {
            if key.len() != arity {
                return Err(ModelError::Shape(format!(
                    "bracket key {key:?} does not have arity {arity}"
                )));
            }
            if let Some(&index) = key.iter().find(|&&i| i >= dim) {
                return Err(ModelError::IndexOutOfRange { index, bound: dim });
            }
            let value = prune_sparse(value, dim)?;
            if map.contains_key(&key) {
                return Err(ModelError::DuplicateEntry(format!("bracket args {key:?}")));
            }
            if !value.is_empty() {
                map.insert(key, value);
            }
        }
        Ok(NLeibnizAlgebra {
            arity,
            dim,
            bracket: map,
            s,
            basis_names,
        })
    }

    /// The algebra with identically zero bracket on the given form.
    pub fn abelian(arity: usize, dim: usize, s: SymTensor) -> Result<Self, ModelError> {
        NLeibnizAlgebra::new(arity, dim, [], s, None)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &SymTensor {
        &self.s
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis_names.as_deref()
    }

    pub fn bracket_entries(&self) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.bracket.iter()
    }

    pub fn bracket_entry_count(&self) -> usize {
        self.bracket.len()
    }

    /// Bracket of a basis tuple as a sparse vector; `None` means zero.
    pub fn bracket_basis(&self, tuple: &[usize]) -> Option<&SparseVec> {
        self.bracket.get(tuple)
    }

    /// Bracket of a basis tuple with the argument at `slot` replaced by a
    /// sparse vector; returns a dense vector. `tuple[slot]` is ignored.
    pub fn bracket_slot_sparse(
        &self,
        tuple: &[usize],
        slot: usize,
        replacement: &SparseVec,
    ) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        let mut probe = tuple.to_vec();
        for (&k, c) in replacement {
            probe[slot] = k;
            if let Some(result) = self.bracket.get(&probe) {
                for (&j, cj) in result {
                    out[j] += c * cj;
                }
            }
        }
        out
    }

    /// Same as [`NLeibnizAlgebra::bracket_slot_sparse`] with a dense
    /// replacement vector.
    pub fn bracket_slot_dense(
        &self,
        tuple: &[usize],
        slot: usize,
        replacement: &[Rational],
    ) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        let mut probe = tuple.to_vec();
        for (k, c) in replacement.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            probe[slot] = k;
            if let Some(result) = self.bracket.get(&probe) {
                for (&j, cj) in result {
                    out[j] += c * cj;
                }
            }
        }
        out
    }

    /// Multilinear extension of the structure constants to arbitrary
    /// rational vectors.
    pub fn eval_bracket(&self, vectors: &[Vec<Rational>]) -> Vec<Rational> {
        assert_eq!(vectors.len(), self.arity, "bracket takes {} arguments", self.arity);
        for v in vectors {
            assert_eq!(v.len(), self.dim, "argument has wrong dimension");
        }
        let mut out = vec![Rational::zero(); self.dim];
        for (key, result) in &self.bracket {
            let mut coeff = Rational::from_integer(1.into());
            let mut zero = false;
            for (slot, &index) in key.iter().enumerate() {
                if vectors[slot][index].is_zero() {
                    zero = true;
                    break;
                }
                coeff *= &vectors[slot][index];
            }
            if zero {
                continue;
            }
            for (&j, cj) in result {
                out[j] += &coeff * cj;
            }
        }
        out
    }

    /// True when the structure constants and form agree entry for entry
    /// (basis names are ignored).
    pub fn same_structure(&self, other: &NLeibnizAlgebra) -> bool {
        self.arity == other.arity
            && self.dim == other.dim
            && self.bracket == other.bracket
            && self.s == other.s
    }
}

/// Lie algebra with structure constants on pairs `a < b` (the bracket is
/// extended by `[x,x] = 0` and antisymmetry, so those identities hold by
/// construction) and a symmetric bilinear form given as a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricLieAlgebra {
    dim: usize,
    bracket: BTreeMap<(usize, usize), SparseVec>,
    omega: RatMatrix,
}

impl MetricLieAlgebra {
    pub fn new(
        dim: usize,
        bracket: impl IntoIterator<Item = ((usize, usize), SparseVec)>,
        omega: RatMatrix,
    ) -> Result<Self, ModelError> {
        if omega.rows() != dim || omega.cols() != dim {
            return Err(ModelError::Shape(format!(
                "omega is {}x{}, expected {dim}x{dim}",
                omega.rows(),
                omega.cols()
            )));
        }
        let mut map = BTreeMap::new();
        for ((a, b), value) in bracket {
            if a >= b {
                return Err(ModelError::Shape(format!(
                    "lie bracket key ({a},{b}) must satisfy a < b"
                )));
            }
            if b >= dim {
                return Err(ModelError::IndexOutOfRange { index: b, bound: dim });
            }
            let value = prune_sparse(value, dim)?;
            if map.contains_key(&(a, b)) {
                return Err(ModelError::DuplicateEntry(format!("lie bracket args ({a},{b})")));
            }
            if !value.is_empty() {
                map.insert((a, b), value);
            }
        }
        Ok(MetricLieAlgebra {
            dim,
            bracket: map,
            omega,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn omega(&self) -> &RatMatrix {
        &self.omega
    }

    pub fn bracket_entries(&self) -> impl Iterator<Item = (&(usize, usize), &SparseVec)> {
        self.bracket.iter()
    }

    /// `[e_a, e_b]` as a sparse vector, for arbitrary `a`, `b`.
    pub fn bracket_basis(&self, a: usize, b: usize) -> SparseVec {
        use std::cmp::Ordering;
        match a.cmp(&b) {
            Ordering::Equal => SparseVec::new(),
            Ordering::Less => self.bracket.get(&(a, b)).cloned().unwrap_or_default(),
            Ordering::Greater => self
                .bracket
                .get(&(b, a))
                .map(|v| v.iter().map(|(&k, c)| (k, -c)).collect())
                .unwrap_or_default(),
        }
    }

    /// Bilinear extension of the bracket to arbitrary vectors.
    pub fn bracket_vec(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![Rational::zero(); self.dim];
        for (&(a, b), result) in &self.bracket {
            // [x,y] picks up x_a y_b - x_b y_a on the (a,b) constants.
            let coeff = &x[a] * &y[b] - &x[b] * &y[a];
            if coeff.is_zero() {
                continue;
            }
            for (&j, cj) in result {
                out[j] += &coeff * cj;
            }
        }
        out
    }

    /// `omega(sparse, e_c)`.
    pub fn omega_sparse_basis(&self, x: &SparseVec, c: usize) -> Rational {
        let mut acc = Rational::zero();
        for (&k, v) in x {
            acc += v * self.omega.at(k, c);
        }
        acc
    }
}

/// A square rational matrix acting on the module `V`, used for D-values,
/// derivations and automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOperator {
    matrix: RatMatrix,
}

impl LinearOperator {
    pub fn new(matrix: RatMatrix) -> Result<Self, ModelError> {
        if !matrix.is_square() {
            return Err(ModelError::Shape(format!(
                "operator matrix is {}x{}, expected square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(LinearOperator { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        LinearOperator {
            matrix: RatMatrix::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        LinearOperator {
            matrix: RatMatrix::zero(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix.mul_vec(v)
    }

    /// Applies the operator to a sparse vector, returning a dense one.
    pub fn apply_sparse(&self, v: &SparseVec) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (&k, c) in v {
            for (dst, cell) in out.iter_mut().zip(self.matrix.col(k)) {
                *dst += c * cell;
            }
        }
        out
    }

    /// Image of the `k`-th basis vector.
    pub fn column(&self, k: usize) -> Vec<Rational> {
        self.matrix.col(k)
    }

    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn commutator(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator {
            matrix: self.matrix.commutator(&other.matrix),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.rank() == self.dim()
    }

    pub fn inverse(&self) -> Option<LinearOperator> {
        self.matrix.inverse().map(|matrix| LinearOperator { matrix })
    }

    pub fn vectorize(&self) -> Vec<Rational> {
        self.matrix.vectorize()
    }
}

/// A metric Lie algebra together with a representation on `(V, S)`, the
/// ingredients of the reconstruction direction. Structural shapes are
/// validated here; faithfulness, the homomorphism law and generalized
/// orthogonality are semantic checks in [`crate::axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieTripleData {
    g: MetricLieAlgebra,
    module_dim: usize,
    rho: Vec<RatMatrix>,
    s: SymTensor,
    arity: usize,
}

impl LieTripleData {
    pub fn new(
        g: MetricLieAlgebra,
        module_dim: usize,
        rho: Vec<RatMatrix>,
        s: SymTensor,
        arity: usize,
    ) -> Result<Self, ModelError> {
        if arity < 2 {
            return Err(ModelError::BadArity(arity));
        }
        if module_dim == 0 {
            return Err(ModelError::BadDimension(module_dim));
        }
        if rho.len() != g.dim() {
            return Err(ModelError::Shape(format!(
                "{} rho matrices for a Lie algebra of dimension {}",
                rho.len(),
                g.dim()
            )));
        }
        for (i, m) in rho.iter().enumerate() {
            if m.rows() != module_dim || m.cols() != module_dim {
                return Err(ModelError::Shape(format!(
                    "rho[{i}] is {}x{}, expected {module_dim}x{module_dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if s.order() != arity - 1 || s.dim() != module_dim {
            return Err(ModelError::Shape(format!(
                "form has order {} and dimension {}, expected order {} and dimension {}",
                s.order(),
                s.dim(),
                arity - 1,
                module_dim
            )));
        }
        Ok(LieTripleData {
            g,
            module_dim,
            rho,
            s,
            arity,
        })
    }

    pub fn lie(&self) -> &MetricLieAlgebra {
        &self.g
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn form(&self) -> &SymTensor {
        &self.s
    }

    pub fn rho(&self) -> &[RatMatrix] {
        &self.rho
    }

    /// `rho` applied to an arbitrary Lie algebra element in coordinates.
    pub fn rho_vec(&self, x: &[Rational]) -> RatMatrix {
        assert_eq!(x.len(), self.g.dim());
        let mut acc = RatMatrix::zero(self.module_dim, self.module_dim);
        for (coeff, m) in x.iter().zip(&self.rho) {
            if !coeff.is_zero() {
                acc = acc.add(&m.scale(coeff));
            }
        }
        acc
    }
}
