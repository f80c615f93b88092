//! Finite-dimensional associative algebras via structure constants, their
//! modules and bimodules, and the tensor/Hom constructions everything
//! homological reduces to.
//!
//! Algebras are validated exhaustively at construction (associativity and
//! unit laws on all basis triples); construction fails loudly otherwise.
//! Modules built from untrusted data go through the checked constructors;
//! large internally derived modules (bar terms and friends) use the
//! unchecked constructors and are covered by structural tests instead.

use crate::field::{FieldSpec, Scalar};
use crate::linalg::{
    kernel_basis, quotient_by_span, Quotient, SVec, SparseMat, Subspace,
};
use rayon::prelude::*;
use std::sync::{Arc, OnceLock};

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("associativity fails at basis triple ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit law fails at basis element {0}")]
    UnitLaw(usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("module axioms fail: {0}")]
    NotAModule(String),
    #[error("left and right actions do not commute at basis pair ({0},{1})")]
    NotBimodule(usize, usize),
    #[error("operands are modules over different algebras")]
    AlgebraMismatch,
    #[error("map is not an algebra homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("subalgebra closure did not stabilize within {0} iterations")]
    NonStabilizingClosure(usize),
}

/// Associative unital algebra given by structure constants on an ordered
/// basis: mult[i][j] = e_i e_j expressed in basis coordinates.
#[derive(Debug)]
pub struct FiniteAlgebra {
    field: FieldSpec,
    dim: usize,
    mult: Vec<Vec<SVec>>,
    unit: SVec,
    label: String,
    left_mats: OnceLock<Vec<SparseMat>>,
    right_mats: OnceLock<Vec<SparseMat>>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.mult == other.mult
            && self.unit == other.unit
    }
}

impl FiniteAlgebra {
    /// Validates associativity and unit laws exhaustively.
    pub fn new(
        field: FieldSpec,
        mult: Vec<Vec<SVec>>,
        unit: SVec,
        label: impl Into<String>,
    ) -> Result<Arc<Self>, AlgebraError> {
        let dim = mult.len();
        if unit.dim() != dim {
            return Err(AlgebraError::Shape(format!(
                "unit has dim {}, algebra has dim {dim}",
                unit.dim()
            )));
        }
        for (i, row) in mult.iter().enumerate() {
            if row.len() != dim {
                return Err(AlgebraError::Shape(format!("mult row {i} has length {}", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v.dim() != dim {
                    return Err(AlgebraError::Shape(format!("mult[{i}][{j}] has dim {}", v.dim())));
                }
            }
        }
        let alg = FiniteAlgebra {
            field,
            dim,
            mult,
            unit,
            label: label.into(),
            left_mats: OnceLock::new(),
            right_mats: OnceLock::new(),
        };
        // Unit laws.
        for j in 0..dim {
            let e = SVec::unit(dim, j, field);
            if alg.multiply(&alg.unit, &e) != e || alg.multiply(&e, &alg.unit) != e {
                return Err(AlgebraError::UnitLaw(j));
            }
        }
        // Associativity on all basis triples, in parallel per leading index.
        let failure = (0..dim)
            .into_par_iter()
            .find_map_first(|i| {
                for j in 0..dim {
                    for k in 0..dim {
                        let e_k = SVec::unit(dim, k, field);
                        let e_i = SVec::unit(dim, i, field);
                        let lhs = alg.multiply(&alg.mult[i][j], &e_k);
                        let rhs = alg.multiply(&e_i, &alg.mult[j][k]);
                        if lhs != rhs {
                            return Some((i, j, k));
                        }
                    }
                }
                None
            });
        if let Some((i, j, k)) = failure {
            return Err(AlgebraError::NotAssociative(i, j, k));
        }
        Ok(Arc::new(alg))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &SVec {
        &self.unit
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SVec {
        &self.mult[i][j]
    }

    pub fn multiply(&self, x: &SVec, y: &SVec) -> SVec {
        let mut acc = SVec::zero(self.dim);
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                acc = acc.add_scaled(&self.mult[*i][*j], &a.mul(b));
            }
        }
        acc
    }

    /// Matrices of left multiplication by each basis element.
    pub fn left_mult_mats(&self) -> &[SparseMat] {
        self.left_mats.get_or_init(|| {
            (0..self.dim)
                .map(|i| {
                    SparseMat::from_cols(
                        self.field,
                        self.dim,
                        (0..self.dim).map(|j| self.mult[i][j].clone()).collect(),
                    )
                })
                .collect()
        })
    }

    /// Matrices of right multiplication by each basis element.
    pub fn right_mult_mats(&self) -> &[SparseMat] {
        self.right_mats.get_or_init(|| {
            (0..self.dim)
                .map(|j| {
                    SparseMat::from_cols(
                        self.field,
                        self.dim,
                        (0..self.dim).map(|i| self.mult[i][j].clone()).collect(),
                    )
                })
                .collect()
        })
    }

    /// Left multiplication by an arbitrary element.
    pub fn left_mult_operator(&self, x: &SVec) -> SparseMat {
        let mats = self.left_mult_mats();
        let mut acc = SparseMat::zero(self.field, self.dim, self.dim);
        for (i, c) in x.iter() {
            acc = acc.add(&mats[*i].scale(c));
        }
        acc
    }

    pub fn right_mult_operator(&self, x: &SVec) -> SparseMat {
        let mats = self.right_mult_mats();
        let mut acc = SparseMat::zero(self.field, self.dim, self.dim);
        for (i, c) in x.iter() {
            acc = acc.add(&mats[*i].scale(c));
        }
        acc
    }

    pub fn elem(&self, dense: &[i64]) -> SVec {
        assert_eq!(dense.len(), self.dim, "element length mismatch");
        SVec::from_dense(self.field, dense)
    }

    /// Power x^n (n >= 0).
    pub fn pow(&self, x: &SVec, n: usize) -> SVec {
        let mut acc = self.unit.clone();
        for _ in 0..n {
            acc = self.multiply(&acc, x);
        }
        acc
    }
}

/// The base field as a one-dimensional algebra.
pub fn field_algebra(field: FieldSpec) -> Arc<FiniteAlgebra> {
    FiniteAlgebra::new(
        field,
        vec![vec![SVec::unit(1, 0, field)]],
        SVec::unit(1, 0, field),
        "K",
    )
    .expect("field algebra is associative")
}

/// K^n with componentwise multiplication.
pub fn product_algebra(field: FieldSpec, n: usize) -> Arc<FiniteAlgebra> {
    let mult = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        SVec::unit(n, i, field)
                    } else {
                        SVec::zero(n)
                    }
                })
                .collect()
        })
        .collect();
    let unit = SVec::from_entries(n, (0..n).map(|i| (i, field.one())).collect());
    FiniteAlgebra::new(field, mult, unit, format!("K^{n}")).expect("K^n is associative")
}

/// Full matrix algebra M_n(K) on the basis E_{ij}, index i*n + j.
pub fn matrix_algebra(field: FieldSpec, n: usize) -> Arc<FiniteAlgebra> {
    let dim = n * n;
    let mut mult = vec![vec![SVec::zero(dim); dim]; dim];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if j == k {
                        mult[i * n + j][k * n + l] = SVec::unit(dim, i * n + l, field);
                    }
                }
            }
        }
    }
    let unit = SVec::from_entries(dim, (0..n).map(|i| (i * n + i, field.one())).collect());
    FiniteAlgebra::new(field, mult, unit, format!("M{n}(K)")).expect("matrix algebra is associative")
}

/// K[t]/(t^n) on the basis 1, t, ..., t^{n-1}.
pub fn truncated_polynomial(field: FieldSpec, n: usize) -> Arc<FiniteAlgebra> {
    let mult = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i + j < n {
                        SVec::unit(n, i + j, field)
                    } else {
                        SVec::zero(n)
                    }
                })
                .collect()
        })
        .collect();
    FiniteAlgebra::new(field, mult, SVec::unit(n, 0, field), format!("K[t]/(t^{n})"))
        .expect("truncated polynomial algebra is associative")
}

/// Opposite algebra A^op.
pub fn opposite(a: &FiniteAlgebra) -> Arc<FiniteAlgebra> {
    let dim = a.dim();
    let mult = (0..dim)
        .map(|i| (0..dim).map(|j| a.mult[j][i].clone()).collect())
        .collect();
    FiniteAlgebra::new(a.field(), mult, a.unit().clone(), format!("{}^op", a.label()))
        .expect("opposite of associative is associative")
}

/// Tensor product algebra A ⊗ B with (a⊗b)(c⊗d) = ac ⊗ bd. Basis index
/// (i, p) -> i * dim_b + p (left factor major).
pub fn tensor_algebra(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Arc<FiniteAlgebra> {
    assert_eq!(a.field(), b.field(), "tensor over one field");
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    let mut mult = vec![vec![SVec::zero(dim); dim]; dim];
    for i in 0..da {
        for p in 0..db {
            for j in 0..da {
                for q in 0..db {
                    let ij = &a.mult[i][j];
                    let pq = &b.mult[p][q];
                    let mut entries = Vec::with_capacity(ij.nnz() * pq.nnz());
                    for (k, u) in ij.iter() {
                        for (r, v) in pq.iter() {
                            entries.push((k * db + r, u.mul(v)));
                        }
                    }
                    mult[i * db + p][j * db + q] = SVec::from_entries(dim, entries);
                }
            }
        }
    }
    let mut unit_entries = Vec::new();
    for (i, u) in a.unit().iter() {
        for (p, v) in b.unit().iter() {
            unit_entries.push((i * db + p, u.mul(v)));
        }
    }
    let unit = SVec::from_entries(dim, unit_entries);
    FiniteAlgebra::new(
        a.field(),
        mult,
        unit,
        format!("{}(x){}", a.label(), b.label()),
    )
    .expect("tensor of associative algebras is associative")
}

/// Enveloping algebra A^e = A ⊗ A^op.
pub fn enveloping(a: &FiniteAlgebra) -> Arc<FiniteAlgebra> {
    tensor_algebra(a, &opposite(a))
}

/// A module (one- or two-sided) with one action matrix per algebra basis
/// element. Left matrices represent m -> e_i · m, right matrices m -> m · e_i.
#[derive(Clone, Debug)]
pub struct Module {
    dim: usize,
    left: Option<ModSide>,
    right: Option<ModSide>,
}

#[derive(Clone, Debug)]
struct ModSide {
    alg: Arc<FiniteAlgebra>,
    act: Vec<SparseMat>,
}

fn check_side_shapes(alg: &FiniteAlgebra, dim: usize, act: &[SparseMat]) -> Result<(), AlgebraError> {
    if act.len() != alg.dim() {
        return Err(AlgebraError::Shape(format!(
            "{} action matrices for algebra of dim {}",
            act.len(),
            alg.dim()
        )));
    }
    for (i, m) in act.iter().enumerate() {
        if m.rows() != dim || m.ncols() != dim {
            return Err(AlgebraError::Shape(format!(
                "action matrix {i} is {}x{}, module dim {dim}",
                m.rows(),
                m.ncols()
            )));
        }
    }
    Ok(())
}

fn operator(field: FieldSpec, dim: usize, act: &[SparseMat], x: &SVec) -> SparseMat {
    let mut acc = SparseMat::zero(field, dim, dim);
    for (i, c) in x.iter() {
        acc = acc.add(&act[*i].scale(c));
    }
    acc
}

fn check_left_axioms(alg: &FiniteAlgebra, dim: usize, act: &[SparseMat]) -> Result<(), AlgebraError> {
    check_side_shapes(alg, dim, act)?;
    let id = SparseMat::identity(alg.field(), dim);
    if operator(alg.field(), dim, act, alg.unit()) != id {
        return Err(AlgebraError::NotAModule("unit does not act as identity".into()));
    }
    let bad = (0..alg.dim()).into_par_iter().find_map_first(|i| {
        for j in 0..alg.dim() {
            let lhs = act[i].compose(&act[j]);
            let rhs = operator(alg.field(), dim, act, alg.basis_product(i, j));
            if lhs != rhs {
                return Some((i, j));
            }
        }
        None
    });
    match bad {
        Some((i, j)) => Err(AlgebraError::NotAModule(format!(
            "left action fails at basis pair ({i},{j})"
        ))),
        None => Ok(()),
    }
}

fn check_right_axioms(alg: &FiniteAlgebra, dim: usize, act: &[SparseMat]) -> Result<(), AlgebraError> {
    check_side_shapes(alg, dim, act)?;
    let id = SparseMat::identity(alg.field(), dim);
    if operator(alg.field(), dim, act, alg.unit()) != id {
        return Err(AlgebraError::NotAModule("unit does not act as identity".into()));
    }
    // (m·e_i)·e_j = m·(e_i e_j): act_j ∘ act_i = act(e_i e_j).
    let bad = (0..alg.dim()).into_par_iter().find_map_first(|i| {
        for j in 0..alg.dim() {
            let lhs = act[j].compose(&act[i]);
            let rhs = operator(alg.field(), dim, act, alg.basis_product(i, j));
            if lhs != rhs {
                return Some((i, j));
            }
        }
        None
    });
    match bad {
        Some((i, j)) => Err(AlgebraError::NotAModule(format!(
            "right action fails at basis pair ({i},{j})"
        ))),
        None => Ok(()),
    }
}

impl Module {
    pub fn left(alg: Arc<FiniteAlgebra>, act: Vec<SparseMat>) -> Result<Module, AlgebraError> {
        let dim = act.first().map(|m| m.rows()).unwrap_or(0);
        check_left_axioms(&alg, dim, &act)?;
        Ok(Module { dim, left: Some(ModSide { alg, act }), right: None })
    }

    pub fn right(alg: Arc<FiniteAlgebra>, act: Vec<SparseMat>) -> Result<Module, AlgebraError> {
        let dim = act.first().map(|m| m.rows()).unwrap_or(0);
        check_right_axioms(&alg, dim, &act)?;
        Ok(Module { dim, left: None, right: Some(ModSide { alg, act }) })
    }

    pub fn bimodule(
        lalg: Arc<FiniteAlgebra>,
        lact: Vec<SparseMat>,
        ralg: Arc<FiniteAlgebra>,
        ract: Vec<SparseMat>,
    ) -> Result<Module, AlgebraError> {
        let dim = lact.first().map(|m| m.rows()).unwrap_or(0);
        check_left_axioms(&lalg, dim, &lact)?;
        check_right_axioms(&ralg, dim, &ract)?;
        for i in 0..lalg.dim() {
            for j in 0..ralg.dim() {
                if lact[i].compose(&ract[j]) != ract[j].compose(&lact[i]) {
                    return Err(AlgebraError::NotBimodule(i, j));
                }
            }
        }
        Ok(Module {
            dim,
            left: Some(ModSide { alg: lalg, act: lact }),
            right: Some(ModSide { alg: ralg, act: ract }),
        })
    }

    /// For large internally constructed modules whose axioms follow from the
    /// construction; covered by structural tests, not per-instance checks.
    pub fn left_unchecked(alg: Arc<FiniteAlgebra>, dim: usize, act: Vec<SparseMat>) -> Module {
        Module { dim, left: Some(ModSide { alg, act }), right: None }
    }

    pub fn right_unchecked(alg: Arc<FiniteAlgebra>, dim: usize, act: Vec<SparseMat>) -> Module {
        Module { dim, left: None, right: Some(ModSide { alg, act }) }
    }

    pub fn bimodule_unchecked(
        lalg: Arc<FiniteAlgebra>,
        lact: Vec<SparseMat>,
        ralg: Arc<FiniteAlgebra>,
        ract: Vec<SparseMat>,
        dim: usize,
    ) -> Module {
        Module {
            dim,
            left: Some(ModSide { alg: lalg, act: lact }),
            right: Some(ModSide { alg: ralg, act: ract }),
        }
    }

    /// A as an (A,A)-bimodule.
    pub fn regular_bimodule(alg: &Arc<FiniteAlgebra>) -> Module {
        Module {
            dim: alg.dim(),
            left: Some(ModSide { alg: alg.clone(), act: alg.left_mult_mats().to_vec() }),
            right: Some(ModSide { alg: alg.clone(), act: alg.right_mult_mats().to_vec() }),
        }
    }

    pub fn left_regular(alg: &Arc<FiniteAlgebra>) -> Module {
        Module {
            dim: alg.dim(),
            left: Some(ModSide { alg: alg.clone(), act: alg.left_mult_mats().to_vec() }),
            right: None,
        }
    }

    pub fn right_regular(alg: &Arc<FiniteAlgebra>) -> Module {
        Module {
            dim: alg.dim(),
            left: None,
            right: Some(ModSide { alg: alg.clone(), act: alg.right_mult_mats().to_vec() }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_algebra(&self) -> Option<&Arc<FiniteAlgebra>> {
        self.left.as_ref().map(|s| &s.alg)
    }

    pub fn right_algebra(&self) -> Option<&Arc<FiniteAlgebra>> {
        self.right.as_ref().map(|s| &s.alg)
    }

    pub fn left_action(&self) -> &[SparseMat] {
        &self.left.as_ref().expect("module has no left action").act
    }

    pub fn right_action(&self) -> &[SparseMat] {
        &self.right.as_ref().expect("module has no right action").act
    }

    pub fn left_operator(&self, x: &SVec) -> SparseMat {
        let side = self.left.as_ref().expect("module has no left action");
        operator(side.alg.field(), self.dim, &side.act, x)
    }

    pub fn right_operator(&self, x: &SVec) -> SparseMat {
        let side = self.right.as_ref().expect("module has no right action");
        operator(side.alg.field(), self.dim, &side.act, x)
    }

    pub fn act_left(&self, x: &SVec, m: &SVec) -> SVec {
        let side = self.left.as_ref().expect("module has no left action");
        let mut acc = SVec::zero(self.dim);
        for (i, c) in x.iter() {
            acc = acc.add_scaled(&side.act[*i].apply(m), c);
        }
        acc
    }

    pub fn act_right(&self, m: &SVec, x: &SVec) -> SVec {
        let side = self.right.as_ref().expect("module has no right action");
        let mut acc = SVec::zero(self.dim);
        for (i, c) in x.iter() {
            acc = acc.add_scaled(&side.act[*i].apply(m), c);
        }
        acc
    }

    /// Drops one side.
    pub fn forget_right(&self) -> Module {
        Module { dim: self.dim, left: self.left.clone(), right: None }
    }

    pub fn forget_left(&self) -> Module {
        Module { dim: self.dim, left: None, right: self.right.clone() }
    }

    /// Restriction of scalars along an algebra hom into the acting algebra.
    pub fn restrict_left(&self, hom: &AlgebraHom) -> Module {
        let side = self.left.as_ref().expect("module has no left action");
        assert_eq!(&*side.alg, &*hom.target, "restriction target mismatch");
        let act = (0..hom.source.dim())
            .map(|i| {
                let img = hom.matrix.apply(&SVec::unit(hom.source.dim(), i, hom.source.field()));
                operator(side.alg.field(), self.dim, &side.act, &img)
            })
            .collect();
        Module { dim: self.dim, left: Some(ModSide { alg: hom.source.clone(), act }), right: None }
    }

    pub fn restrict_right(&self, hom: &AlgebraHom) -> Module {
        let side = self.right.as_ref().expect("module has no right action");
        assert_eq!(&*side.alg, &*hom.target, "restriction target mismatch");
        let act = (0..hom.source.dim())
            .map(|i| {
                let img = hom.matrix.apply(&SVec::unit(hom.source.dim(), i, hom.source.field()));
                operator(side.alg.field(), self.dim, &side.act, &img)
            })
            .collect();
        Module { dim: self.dim, left: None, right: Some(ModSide { alg: hom.source.clone(), act }) }
    }
}

/// Bimodule to left module over the enveloping algebra:
/// (a⊗b)·x = a·x·b.
pub fn bimodule_to_left_env(
    m: &Module,
    env: &Arc<FiniteAlgebra>,
) -> Result<Module, AlgebraError> {
    let (lside, rside) = match (&m.left, &m.right) {
        (Some(l), Some(r)) => (l, r),
        _ => return Err(AlgebraError::NotAModule("bimodule required".into())),
    };
    let da = lside.alg.dim();
    if env.dim() != da * da {
        return Err(AlgebraError::Shape("enveloping algebra dimension mismatch".into()));
    }
    let mut act = Vec::with_capacity(da * da);
    for i in 0..da {
        for j in 0..da {
            act.push(lside.act[i].compose(&rside.act[j]));
        }
    }
    Ok(Module { dim: m.dim, left: Some(ModSide { alg: env.clone(), act }), right: None })
}

/// Bimodule to right module over the enveloping algebra:
/// x·(a⊗b) = b·x·a.
pub fn bimodule_to_right_env(
    m: &Module,
    env: &Arc<FiniteAlgebra>,
) -> Result<Module, AlgebraError> {
    let (lside, rside) = match (&m.left, &m.right) {
        (Some(l), Some(r)) => (l, r),
        _ => return Err(AlgebraError::NotAModule("bimodule required".into())),
    };
    let da = lside.alg.dim();
    if env.dim() != da * da {
        return Err(AlgebraError::Shape("enveloping algebra dimension mismatch".into()));
    }
    let mut act = Vec::with_capacity(da * da);
    for i in 0..da {
        for j in 0..da {
            act.push(lside.act[j].compose(&rside.act[i]));
        }
    }
    Ok(Module { dim: m.dim, left: None, right: Some(ModSide { alg: env.clone(), act }) })
}

/// Unit-preserving multiplicative linear map between algebras, validated on
/// all basis pairs.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    pub source: Arc<FiniteAlgebra>,
    pub target: Arc<FiniteAlgebra>,
    pub matrix: SparseMat,
}

impl AlgebraHom {
    pub fn new(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        matrix: SparseMat,
    ) -> Result<Self, AlgebraError> {
        if matrix.rows() != target.dim() || matrix.ncols() != source.dim() {
            return Err(AlgebraError::Shape(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.ncols(),
                target.dim(),
                source.dim()
            )));
        }
        if matrix.apply(source.unit()) != *target.unit() {
            return Err(AlgebraError::NotAHomomorphism("unit not preserved".into()));
        }
        for i in 0..source.dim() {
            for j in 0..source.dim() {
                let lhs = matrix.apply(source.basis_product(i, j));
                let rhs = target.multiply(&matrix.col(i), &matrix.col(j));
                if lhs != rhs {
                    return Err(AlgebraError::NotAHomomorphism(format!(
                        "multiplicativity fails at basis pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(AlgebraHom { source, target, matrix })
    }

    pub fn identity(alg: &Arc<FiniteAlgebra>) -> Self {
        AlgebraHom {
            source: alg.clone(),
            target: alg.clone(),
            matrix: SparseMat::identity(alg.field(), alg.dim()),
        }
    }

    pub fn apply(&self, x: &SVec) -> SVec {
        self.matrix.apply(x)
    }

    pub fn compose(&self, inner: &AlgebraHom) -> AlgebraHom {
        assert_eq!(&*self.source, &*inner.target, "hom composition mismatch");
        AlgebraHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.compose(&inner.matrix),
        }
    }

    /// Bijective on the nose (rank = dim on both sides).
    pub fn is_isomorphism(&self) -> bool {
        self.source.dim() == self.target.dim()
            && crate::linalg::rank(&self.matrix) == self.source.dim()
    }
}

/// The tensor product x ⊗_R y of a right module and a left module over the
/// same algebra: quotient of x ⊗ y by span{x·r ⊗ y − x ⊗ r·y}. Pure tensor
/// index (i, j) -> i*dim_y + j.
pub struct TensorOverAlgebra {
    pub quot: Quotient,
    pub dim_x: usize,
    pub dim_y: usize,
}

impl TensorOverAlgebra {
    pub fn dim(&self) -> usize {
        self.quot.dim()
    }

    /// Image of the pure tensor x ⊗ y in quotient coordinates.
    pub fn pure(&self, x: &SVec, y: &SVec) -> SVec {
        let mut entries = Vec::with_capacity(x.nnz() * y.nnz());
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                entries.push((i * self.dim_y + j, a.mul(b)));
            }
        }
        self.quot.project(&SVec::from_entries(self.dim_x * self.dim_y, entries))
    }
}

pub fn tensor_over_subalgebra(x: &Module, y: &Module) -> Result<TensorOverAlgebra, AlgebraError> {
    let rx = x.right.as_ref().ok_or(AlgebraError::AlgebraMismatch)?;
    let ly = y.left.as_ref().ok_or(AlgebraError::AlgebraMismatch)?;
    if *rx.alg != *ly.alg {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let field = rx.alg.field();
    let (dx, dy) = (x.dim, y.dim);
    let ambient = dx * dy;
    let mut relations = Vec::new();
    for r in 0..rx.alg.dim() {
        let xr = &rx.act[r];
        let ry = &ly.act[r];
        for i in 0..dx {
            let xi_r = xr.col(i);
            for j in 0..dy {
                let r_yj = ry.col(j);
                let mut entries = Vec::with_capacity(xi_r.nnz() + r_yj.nnz());
                for (k, c) in xi_r.iter() {
                    entries.push((k * dy + j, c.clone()));
                }
                for (l, c) in r_yj.iter() {
                    entries.push((i * dy + l, c.neg()));
                }
                let v = SVec::from_entries(ambient, entries);
                if !v.is_zero() {
                    relations.push(v);
                }
            }
        }
    }
    Ok(TensorOverAlgebra {
        quot: quotient_by_span(field, ambient, relations),
        dim_x: dx,
        dim_y: dy,
    })
}

/// Basis of module homomorphisms between two same-side modules over the same
/// algebra (the solution space of the intertwining system).
pub struct HomSpace {
    pub maps: Vec<SparseMat>,
    pub dim_x: usize,
    pub dim_y: usize,
    /// Hom space as a subspace of the vectorized map space, index
    /// (j, i) -> j*dim_y + i for the matrix entry (i, j).
    pub space: Subspace,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

pub fn hom_space(x: &Module, y: &Module, side: Side) -> Result<HomSpace, AlgebraError> {
    let (xs, ys) = match side {
        Side::Left => (
            x.left.as_ref().ok_or(AlgebraError::AlgebraMismatch)?,
            y.left.as_ref().ok_or(AlgebraError::AlgebraMismatch)?,
        ),
        Side::Right => (
            x.right.as_ref().ok_or(AlgebraError::AlgebraMismatch)?,
            y.right.as_ref().ok_or(AlgebraError::AlgebraMismatch)?,
        ),
    };
    if *xs.alg != *ys.alg {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let field = xs.alg.field();
    let (dx, dy) = (x.dim, y.dim);
    let unknowns = dx * dy;
    // Constraint rows: for each algebra basis r and each source basis j,
    // a block of dim_y equations: sum_k (act_x_r)_{kj} F_col(k) - act_y_r F_col(j) = 0.
    let nr = xs.alg.dim();
    let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
    for r in 0..nr {
        let ax = &xs.act[r];
        let ay = &ys.act[r];
        for j in 0..dx {
            let row_base = (r * dx + j) * dy;
            for (k, c) in ax.col(j).iter() {
                for i in 0..dy {
                    triplets.push((row_base + i, k * dy + i, c.clone()));
                }
            }
            for jj in 0..dy {
                for (i, c) in ay.col(jj).iter() {
                    triplets.push((row_base + i, j * dy + jj, c.neg()));
                }
            }
        }
    }
    let system = SparseMat::from_triplets(field, nr * dx * dy, unknowns, &triplets);
    let kernel = kernel_basis(&system);
    let maps = kernel
        .iter()
        .map(|v| {
            let mut cols_triplets = Vec::with_capacity(v.nnz());
            for (idx, c) in v.iter() {
                let (j, i) = (idx / dy, idx % dy);
                cols_triplets.push((i, j, c.clone()));
            }
            SparseMat::from_triplets(field, dy, dx, &cols_triplets)
        })
        .collect();
    Ok(HomSpace {
        maps,
        dim_x: dx,
        dim_y: dy,
        space: Subspace::from_span(field, unknowns, kernel),
    })
}

/// M/[A,M] for a bimodule M: quotient by span{a·x − x·a}.
pub fn commutator_quotient(m: &Module) -> Result<Quotient, AlgebraError> {
    let (l, r) = match (&m.left, &m.right) {
        (Some(l), Some(r)) => (l, r),
        _ => return Err(AlgebraError::NotAModule("bimodule required".into())),
    };
    if *l.alg != *r.alg {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let field = l.alg.field();
    let mut relations = Vec::new();
    for i in 0..l.alg.dim() {
        let d = l.act[i].sub(&r.act[i]);
        for c in d.columns() {
            if !c.is_zero() {
                relations.push(c.clone());
            }
        }
    }
    Ok(quotient_by_span(field, m.dim, relations))
}

/// Separability idempotent: e in A ⊗ A with mult(e) = 1 and
/// (x⊗1)e = e(1⊗x) for all x, or None when the system is inconsistent.
pub fn separability_idempotent(a: &Arc<FiniteAlgebra>) -> Option<SVec> {
    let field = a.field();
    let d = a.dim();
    let dd = d * d;
    // mult: A⊗A -> A, column (i,j) -> e_i e_j.
    let mult_mat = SparseMat::from_fn(field, d, dd, |ij| a.basis_product(ij / d, ij % d).clone());
    let id = SparseMat::identity(field, d);
    let mut system = mult_mat;
    for k in 0..d {
        // (e_k ⊗ 1)e − e(1 ⊗ e_k) = (L_k ⊗ I − I ⊗ R_k)e.
        let lk = &a.left_mult_mats()[k];
        let rk = &a.right_mult_mats()[k];
        let block = lk.kron(&id).sub(&id.kron(rk));
        system = stack_rows(&system, &block);
    }
    let rhs = a.unit().shift(system.rows(), 0);
    crate::linalg::solve(&system, &rhs)
}

/// [top; bottom] row stacking.
pub fn stack_rows(top: &SparseMat, bottom: &SparseMat) -> SparseMat {
    assert_eq!(top.ncols(), bottom.ncols(), "stack_rows column mismatch");
    assert_eq!(top.field(), bottom.field(), "stack_rows field mismatch");
    let rows = top.rows() + bottom.rows();
    let cols: Vec<SVec> = (0..top.ncols())
        .map(|j| {
            top.col(j)
                .shift(rows, 0)
                .add(&bottom.col(j).shift(rows, top.rows()))
        })
        .collect();
    SparseMat::from_cols(top.field(), rows, cols)
}

/// Smallest unital, multiplicatively closed subspace containing the
/// generators, realized as V_{k+1} = V_k + V_k·gens until stabilization
/// (capped so a logic error cannot loop forever).
pub struct GeneratedSubalgebra {
    pub space: Subspace,
    pub algebra: Arc<FiniteAlgebra>,
    /// Columns = basis vectors of the subalgebra inside the big algebra.
    pub inclusion: SparseMat,
}

const CLOSURE_CAP: usize = 64;

pub fn subalgebra_generated(
    a: &Arc<FiniteAlgebra>,
    gens: &[SVec],
) -> Result<GeneratedSubalgebra, AlgebraError> {
    let field = a.field();
    let mut vs: Vec<SVec> = vec![a.unit().clone()];
    vs.extend(gens.iter().cloned());
    let mut space = Subspace::from_span(field, a.dim(), vs);
    for _ in 0..CLOSURE_CAP {
        let mut next: Vec<SVec> = space.basis().to_vec();
        for b in space.basis() {
            for g in gens {
                next.push(a.multiply(b, g));
            }
        }
        let grown = Subspace::from_span(field, a.dim(), next);
        if grown.dim() == space.dim() {
            // Stable: build the induced algebra on this basis.
            let basis = grown.basis().to_vec();
            let n = basis.len();
            let mut mult = vec![vec![SVec::zero(n); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let p = a.multiply(&basis[i], &basis[j]);
                    mult[i][j] = grown
                        .coordinates(&p)
                        .ok_or_else(|| AlgebraError::NotAModule("closure not closed".into()))?;
                }
            }
            let unit = grown
                .coordinates(a.unit())
                .ok_or_else(|| AlgebraError::NotAModule("unit escaped closure".into()))?;
            let algebra = FiniteAlgebra::new(field, mult, unit, format!("<gens> in {}", a.label()))?;
            let inclusion = grown.basis_mat();
            return Ok(GeneratedSubalgebra { space: grown, algebra, inclusion });
        }
        space = grown;
    }
    Err(AlgebraError::NonStabilizingClosure(CLOSURE_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    /// K_par(Z/2) built directly from its known structure constants:
    /// basis 1, e, g with e² = e, eg = ge = g, g² = e.
    fn kpar_z2() -> Arc<FiniteAlgebra> {
        let mut mult = vec![vec![SVec::zero(3); 3]; 3];
        let e = |i: usize| SVec::unit(3, i, Q);
        mult[0][0] = e(0);
        mult[0][1] = e(1);
        mult[0][2] = e(2);
        mult[1][0] = e(1);
        mult[1][1] = e(1);
        mult[1][2] = e(2);
        mult[2][0] = e(2);
        mult[2][1] = e(2);
        mult[2][2] = e(1);
        FiniteAlgebra::new(Q, mult, e(0), "Kpar(Z/2)").unwrap()
    }

    #[test]
    fn constructors_validate() {
        assert_eq!(field_algebra(Q).dim(), 1);
        assert_eq!(product_algebra(Q, 2).dim(), 2);
        assert_eq!(matrix_algebra(Q, 2).dim(), 4);
        assert_eq!(truncated_polynomial(Q, 2).dim(), 2);
        // Broken structure constants are rejected: x*x = 1 on a basis where
        // unit laws force x*x = x would be inconsistent; simpler, make unit fail.
        let bad = FiniteAlgebra::new(
            Q,
            vec![vec![SVec::zero(1)]],
            SVec::unit(1, 0, Q),
            "bad",
        );
        assert!(matches!(bad, Err(AlgebraError::UnitLaw(_))));
    }

    #[test]
    fn associativity_validator_rejects() {
        // dim 2, basis {1, x}: set x·x = 1 but make (x·x)·x ≠ x·(x·x) by
        // breaking symmetry: x·x = 1, but also declare 1·x = x, x·1 = x. This
        // IS associative, so instead poison: x·x = x + 1 with a sign flip on
        // one side cannot be expressed via structure constants; use a direct
        // non-associative table: x·x = 1, and pretend (x·x)·x: fine. Use the
        // classic non-associative example: e·e = f, f·f = f, e·f = e, f·e = f
        // with unit f.
        let mut mult = vec![vec![SVec::zero(2); 2]; 2];
        let e = |i: usize| SVec::unit(2, i, Q);
        // basis 0 = f (unit), 1 = e.
        mult[0][0] = e(0);
        mult[0][1] = e(1);
        mult[1][0] = e(1);
        mult[1][1] = e(1).add(&e(0)); // e·e = e + f
        // (e·e)·e = (e+f)·e = e·e + f·e = e+f+e = 2e+f
        // e·(e·e) = e·(e+f) = e+f+e = 2e+f — still associative. Flip one:
        mult[1][1] = e(0); // e·e = f
        // (e·e)·e = f·e = e; e·(e·e) = e·f = e — associative again (C2 group algebra).
        // Truly non-associative: put e·e = e + f and e·f = f.
        mult[1][1] = e(1).add(&e(0));
        mult[1][0] = e(0); // e·f = f breaks the unit law first...
        let r = FiniteAlgebra::new(Q, mult, e(0), "nonassoc");
        assert!(r.is_err());

        // And a genuine associativity failure with intact unit laws:
        // basis {1, x, y}: x·x = y, x·y = 1, y·x = y, y·y = y.
        // (x·x)·x = y·x = y but x·(x·x) = x·y = 1.
        let mut m3 = vec![vec![SVec::zero(3); 3]; 3];
        let u = |i: usize| SVec::unit(3, i, Q);
        for i in 0..3 {
            m3[0][i] = u(i);
            m3[i][0] = u(i);
        }
        m3[1][1] = u(2);
        m3[1][2] = u(0);
        m3[2][1] = u(2);
        m3[2][2] = u(2);
        let r3 = FiniteAlgebra::new(Q, m3, u(0), "nonassoc3");
        assert!(matches!(r3, Err(AlgebraError::NotAssociative(_, _, _))));
    }

    #[test]
    fn enveloping_examples() {
        let k = field_algebra(Q);
        assert_eq!(enveloping(&k).dim(), 1);

        let kk = product_algebra(Q, 2);
        let env = enveloping(&kk);
        assert_eq!(env.dim(), 4);
        // K×K is commutative, so its enveloping algebra is too.
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(env.basis_product(i, j), env.basis_product(j, i));
            }
        }

        let m2 = matrix_algebra(Q, 2);
        assert_eq!(enveloping(&m2).dim(), 16);
    }

    #[test]
    fn opposite_reverses_products() {
        let m2 = matrix_algebra(Q, 2);
        let op = opposite(&m2);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    op.basis_product(i, j),
                    m2.basis_product(j, i),
                    "op mult at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn env_modules_from_bimodules() {
        for alg in [field_algebra(Q), product_algebra(Q, 2), matrix_algebra(Q, 2)] {
            let env = enveloping(&alg);
            let reg = Module::regular_bimodule(&alg);
            let left = bimodule_to_left_env(&reg, &env).unwrap();
            assert_eq!(left.dim(), alg.dim());
            // Re-validate axioms through the checked constructor.
            let revalidated = Module::left(env.clone(), left.left_action().to_vec());
            assert!(revalidated.is_ok());
            let right = bimodule_to_right_env(&reg, &env).unwrap();
            let revalidated = Module::right(env.clone(), right.right_action().to_vec());
            assert!(revalidated.is_ok());
        }
    }

    #[test]
    fn tensor_over_field_is_plain_tensor() {
        let k = field_algebra(Q);
        // Any K-vector spaces as K-modules.
        let x = Module::right_unchecked(k.clone(), 3, vec![SparseMat::identity(Q, 3)]);
        let y = Module::left_unchecked(k.clone(), 2, vec![SparseMat::identity(Q, 2)]);
        let t = tensor_over_subalgebra(&x, &y).unwrap();
        assert_eq!(t.dim(), 6);
    }

    #[test]
    fn tensor_over_b_inside_kpar_z2_has_dim_5() {
        // H = K_par(Z/2), B = span{1, e}. H ⊗_B H has dimension 5.
        let h = kpar_z2();
        let b = subalgebra_generated(&h, &[h.elem(&[0, 1, 0])]).unwrap();
        assert_eq!(b.algebra.dim(), 2);
        // H as right/left B-module: restrict the regular actions along the inclusion.
        let inc = AlgebraHom::new(b.algebra.clone(), h.clone(), b.inclusion.clone()).unwrap();
        let reg = Module::regular_bimodule(&h);
        let h_right_b = reg.restrict_right(&inc);
        let h_left_b = reg.restrict_left(&inc);
        let t = tensor_over_subalgebra(&h_right_b, &h_left_b).unwrap();
        assert_eq!(t.dim(), 5);
    }

    #[test]
    fn tensor_b_over_b_is_identity_dim() {
        let b = product_algebra(Q, 2);
        let breg = Module::regular_bimodule(&b);
        let m = Module::regular_bimodule(&b);
        let t = tensor_over_subalgebra(&breg.forget_left(), &m.forget_right()).unwrap();
        assert_eq!(t.dim(), m.dim());
    }

    #[test]
    fn l_envl_identity_after_tensoring() {
        // a·x ⊗_{A^e} y = x ⊗_{A^e} y·a for bimodules x, y.
        for alg in [product_algebra(Q, 2), matrix_algebra(Q, 2)] {
            let env = enveloping(&alg);
            let reg = Module::regular_bimodule(&alg);
            let x_env = bimodule_to_right_env(&reg, &env).unwrap();
            let y_env = bimodule_to_left_env(&reg, &env).unwrap();
            let t = tensor_over_subalgebra(&x_env, &y_env).unwrap();
            for a_ix in 0..alg.dim() {
                let a = SVec::unit(alg.dim(), a_ix, Q);
                for x_ix in 0..alg.dim() {
                    let x = SVec::unit(alg.dim(), x_ix, Q);
                    for y_ix in 0..alg.dim() {
                        let y = SVec::unit(alg.dim(), y_ix, Q);
                        let ax = alg.multiply(&a, &x);
                        let ya = alg.multiply(&y, &a);
                        assert_eq!(t.pure(&ax, &y), t.pure(&x, &ya));
                    }
                }
            }
        }
    }

    #[test]
    fn hom_space_examples() {
        let k = field_algebra(Q);
        let kk_mod = Module::left_regular(&k);
        let h = hom_space(&kk_mod, &kk_mod, Side::Left).unwrap();
        assert_eq!(h.maps.len(), 1);

        // Hom_{A^e}(A, A) = center of A.
        for (alg, expected) in [(product_algebra(Q, 2), 2), (matrix_algebra(Q, 2), 1)] {
            let env = enveloping(&alg);
            let a_env = bimodule_to_left_env(&Module::regular_bimodule(&alg), &env).unwrap();
            let h = hom_space(&a_env, &a_env, Side::Left).unwrap();
            assert_eq!(h.maps.len(), expected, "Hom_Ae(A,A) for {}", alg.label());
            // Every basis map is genuinely A^e-linear.
            for f in &h.maps {
                for r in 0..env.dim() {
                    let ar = &a_env.left_action()[r];
                    assert_eq!(f.compose(ar), ar.compose(f));
                }
            }
        }
    }

    #[test]
    fn commutator_quotient_examples() {
        let k = field_algebra(Q);
        let m = Module::regular_bimodule(&k);
        assert_eq!(commutator_quotient(&m).unwrap().dim(), 1);

        let m2 = matrix_algebra(Q, 2);
        let q = commutator_quotient(&Module::regular_bimodule(&m2)).unwrap();
        assert_eq!(q.dim(), 1, "M2/[M2,M2] is the trace line");

        let kk = product_algebra(Q, 2);
        let q = commutator_quotient(&Module::regular_bimodule(&kk)).unwrap();
        assert_eq!(q.dim(), 2, "commutative algebra has zero commutators");
    }

    #[test]
    fn separability_examples() {
        let k = field_algebra(Q);
        let e = separability_idempotent(&k).unwrap();
        assert_eq!(e, SVec::unit(1, 0, Q));

        let kk = product_algebra(Q, 2);
        let e = separability_idempotent(&kk).unwrap();
        // e1⊗e1 + e2⊗e2 under index (i,j) -> 2i+j.
        assert_eq!(e, SVec::from_dense(Q, &[1, 0, 0, 1]));

        let m2 = matrix_algebra(Q, 2);
        let e = separability_idempotent(&m2).expect("M2 is separable");
        // Verify the defining properties rather than a particular solution.
        let mult_mat = SparseMat::from_fn(Q, 4, 16, |ij| m2.basis_product(ij / 4, ij % 4).clone());
        assert_eq!(mult_mat.apply(&e), *m2.unit());
        let id = SparseMat::identity(Q, 4);
        for k_ix in 0..4 {
            let lk = &m2.left_mult_mats()[k_ix];
            let rk = &m2.right_mult_mats()[k_ix];
            let diff = lk.kron(&id).sub(&id.kron(rk));
            assert!(diff.apply(&e).is_zero());
        }

        let kt = truncated_polynomial(Q, 2);
        assert!(separability_idempotent(&kt).is_none(), "K[t]/(t^2) is not separable");
    }

    #[test]
    fn subalgebra_closure_examples() {
        let m2 = matrix_algebra(Q, 2);
        let one_only = subalgebra_generated(&m2, &[m2.unit().clone()]).unwrap();
        assert_eq!(one_only.algebra.dim(), 1);

        // E11 generates span{1, E11}.
        let e11 = m2.elem(&[1, 0, 0, 0]);
        let s = subalgebra_generated(&m2, &[e11]).unwrap();
        assert_eq!(s.algebra.dim(), 2);

        // E12, E21 generate all of M2.
        let s = subalgebra_generated(&m2, &[m2.elem(&[0, 1, 0, 0]), m2.elem(&[0, 0, 1, 0])]).unwrap();
        assert_eq!(s.algebra.dim(), 4);

        // e_g in K_par(Z/2) generates B = span{1, e} of dim 2 = 2^{|G|-1}.
        let h = kpar_z2();
        let s = subalgebra_generated(&h, &[h.elem(&[0, 1, 0])]).unwrap();
        assert_eq!(s.algebra.dim(), 2);
    }

    #[test]
    fn algebra_hom_validation() {
        let k = field_algebra(Q);
        let kk = product_algebra(Q, 2);
        // Diagonal K -> K×K is a unital hom.
        let diag = SparseMat::from_dense(Q, &[vec![1], vec![1]]);
        assert!(AlgebraHom::new(k.clone(), kk.clone(), diag).is_ok());
        // Projection to the first factor is a hom K×K -> K.
        let proj = SparseMat::from_dense(Q, &[vec![1, 0]]);
        assert!(AlgebraHom::new(kk.clone(), k.clone(), proj).is_ok());
        // e1 ↦ e1, e2 ↦ 0 is not unital.
        let bad = SparseMat::from_dense(Q, &[vec![1, 0], vec![0, 0]]);
        assert!(AlgebraHom::new(kk.clone(), kk.clone(), bad).is_err());
        // Swap on K×K is an automorphism.
        let swap = SparseMat::from_dense(Q, &[vec![0, 1], vec![1, 0]]);
        let h = AlgebraHom::new(kk.clone(), kk.clone(), swap).unwrap();
        assert!(h.is_isomorphism());
    }

    #[test]
    fn module_validation_rejects_bad_actions() {
        let kk = product_algebra(Q, 2);
        // Left action where e1 acts as identity (wrong: e1·e2 = 0).
        let bad = Module::left(
            kk.clone(),
            vec![SparseMat::identity(Q, 2), SparseMat::identity(Q, 2)],
        );
        assert!(bad.is_err());
        // Non-commuting left/right actions on M2 are rejected as a bimodule:
        // use left regular for both sides (left·right would have to commute;
        // two lefts do not).
        let m2 = matrix_algebra(Q, 2);
        let res = Module::bimodule(
            m2.clone(),
            m2.left_mult_mats().to_vec(),
            m2.clone(),
            m2.left_mult_mats().to_vec(),
        );
        assert!(res.is_err());
    }
}
