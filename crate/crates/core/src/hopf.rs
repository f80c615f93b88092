//! Hopf-algebra structure over a finite-dimensional algebra: comultiplication,
//! counit, antipode, exhaustive axiom validation, Sweedler-component plumbing,
//! and the group-algebra constructor.
//!
//! Constructed instances are always cocommutative with involutive antipode;
//! both are constructor requirements here, matching the standing hypotheses
//! of everything downstream (the involution on the partial "enveloping"
//! algebra needs S² = id, and cocommutativity collapses the one-sided axiom
//! checks into the symmetric ones).

use crate::algebra::FiniteAlgebra;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{SVec, SparseMat};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum HopfError {
    #[error("invalid group table: {0}")]
    BadGroupTable(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("comultiplication is not an algebra map at basis pair ({0},{1})")]
    ComultNotMultiplicative(usize, usize),
    #[error("counit is not an algebra map at basis pair ({0},{1})")]
    CounitNotMultiplicative(usize, usize),
    #[error("coassociativity fails")]
    NotCoassociative,
    #[error("counit laws fail")]
    CounitLaw,
    #[error("antipode convolution identity fails at basis element {0}")]
    AntipodeConvolution(usize),
    #[error("antipode is not involutive")]
    AntipodeNotInvolutive,
    #[error("comultiplication is not cocommutative")]
    NotCocommutative,
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// Finite group by its multiplication table. Indices are element labels.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupTable {
    pub order: usize,
    pub identity: usize,
    /// Row-major: mult[i][j] = index of g_i g_j.
    pub mult: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(
        order: usize,
        identity: usize,
        mult: Vec<Vec<usize>>,
        inverse: Vec<usize>,
    ) -> Result<Self, HopfError> {
        let t = GroupTable { order, identity, mult, inverse };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), HopfError> {
        let n = self.order;
        if n == 0 {
            return Err(HopfError::BadGroupTable("empty group".into()));
        }
        if self.identity >= n || self.mult.len() != n || self.inverse.len() != n {
            return Err(HopfError::BadGroupTable("table shape mismatch".into()));
        }
        for row in &self.mult {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(HopfError::BadGroupTable("index out of range".into()));
            }
        }
        if self.inverse.iter().any(|&x| x >= n) {
            return Err(HopfError::BadGroupTable("inverse index out of range".into()));
        }
        let e = self.identity;
        for i in 0..n {
            if self.mult[e][i] != i || self.mult[i][e] != i {
                return Err(HopfError::BadGroupTable(format!("identity law fails at {i}")));
            }
            if self.mult[self.inverse[i]][i] != e || self.mult[i][self.inverse[i]] != e {
                return Err(HopfError::BadGroupTable(format!("inverse law fails at {i}")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.mult[self.mult[i][j]][k] != self.mult[i][self.mult[j][k]] {
                        return Err(HopfError::BadGroupTable(format!(
                            "associativity fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mult[i][j]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn trivial() -> Self {
        GroupTable::new(1, 0, vec![vec![0]], vec![0]).expect("trivial group")
    }

    /// Z/n with element i standing for g^i.
    pub fn cyclic(n: usize) -> Self {
        let mult = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let inverse = (0..n).map(|i| (n - i) % n).collect();
        GroupTable::new(n, 0, mult, inverse).expect("cyclic group")
    }
}

/// Hopf algebra: algebra plus Δ, ε, S with all axioms verified exhaustively
/// on basis elements at construction. Cocommutativity and S² = id are
/// constructor requirements, not assumptions.
#[derive(Clone, Debug)]
pub struct HopfData {
    algebra: Arc<FiniteAlgebra>,
    /// dim² × dim; column h = Δ(e_h), tensor index (i,j) -> i·dim + j.
    comult: SparseMat,
    /// 1 × dim.
    counit: SparseMat,
    /// dim × dim.
    antipode: SparseMat,
}

/// Product in A ⊗ A without materializing the tensor algebra.
fn tensor_square_mult(a: &FiniteAlgebra, u: &SVec, v: &SVec) -> SVec {
    let d = a.dim();
    let mut acc = SVec::zero(d * d);
    for (iu, cu) in u.iter() {
        let (i1, i2) = (iu / d, iu % d);
        for (iv, cv) in v.iter() {
            let (j1, j2) = (iv / d, iv % d);
            let left = a.basis_product(i1, j1);
            let right = a.basis_product(i2, j2);
            let c = cu.mul(cv);
            for (k, x) in left.iter() {
                for (l, y) in right.iter() {
                    acc = acc.add_scaled(
                        &SVec::unit(d * d, k * d + l, a.field()),
                        &c.mul(x).mul(y),
                    );
                }
            }
        }
    }
    acc
}

/// The flip τ(x⊗y) = y⊗x on A ⊗ A.
fn flip_matrix(field: FieldSpec, d: usize) -> SparseMat {
    SparseMat::from_fn(field, d * d, d * d, |ij| {
        SVec::unit(d * d, (ij % d) * d + ij / d, field)
    })
}

impl HopfData {
    pub fn new(
        algebra: Arc<FiniteAlgebra>,
        comult: SparseMat,
        counit: SparseMat,
        antipode: SparseMat,
    ) -> Result<Self, HopfError> {
        let d = algebra.dim();
        let field = algebra.field();
        if comult.rows() != d * d || comult.ncols() != d {
            return Err(HopfError::Shape("comult must be dim² × dim".into()));
        }
        if counit.rows() != 1 || counit.ncols() != d {
            return Err(HopfError::Shape("counit must be 1 × dim".into()));
        }
        if antipode.rows() != d || antipode.ncols() != d {
            return Err(HopfError::Shape("antipode must be dim × dim".into()));
        }
        let h = HopfData { algebra, comult, counit, antipode };

        // Δ and ε are algebra maps.
        let unit_tensor = {
            let u = h.algebra.unit();
            let mut entries = Vec::new();
            for (i, a) in u.iter() {
                for (j, b) in u.iter() {
                    entries.push((i * d + j, a.mul(b)));
                }
            }
            SVec::from_entries(d * d, entries)
        };
        if h.comult.apply(h.algebra.unit()) != unit_tensor {
            return Err(HopfError::ComultNotMultiplicative(usize::MAX, usize::MAX));
        }
        if h.counit.apply(h.algebra.unit()) != SVec::unit(1, 0, field) {
            return Err(HopfError::CounitNotMultiplicative(usize::MAX, usize::MAX));
        }
        for i in 0..d {
            for j in 0..d {
                let prod = h.algebra.basis_product(i, j);
                let lhs = h.comult.apply(prod);
                let rhs = tensor_square_mult(&h.algebra, h.comult.col(i), h.comult.col(j));
                if lhs != rhs {
                    return Err(HopfError::ComultNotMultiplicative(i, j));
                }
                let lhs = h.counit_of(prod);
                let rhs_scalar = h
                    .counit_of(&SVec::unit(d, i, field))
                    .mul(&h.counit_of(&SVec::unit(d, j, field)));
                if lhs != rhs_scalar {
                    return Err(HopfError::CounitNotMultiplicative(i, j));
                }
            }
        }

        // Coassociativity: (Δ⊗id)Δ = (id⊗Δ)Δ.
        let id = SparseMat::identity(field, d);
        let left = h.comult.kron(&id).compose(&h.comult);
        let right = id.kron(&h.comult).compose(&h.comult);
        if left != right {
            return Err(HopfError::NotCoassociative);
        }

        // Counit laws: (ε⊗id)Δ = id = (id⊗ε)Δ.
        if h.counit.kron(&id).compose(&h.comult) != id
            || id.kron(&h.counit).compose(&h.comult) != id
        {
            return Err(HopfError::CounitLaw);
        }

        // Antipode convolution identities on every basis element.
        for k in 0..d {
            let target = h
                .algebra
                .unit()
                .scale(&h.counit_of(&SVec::unit(d, k, field)));
            let mut s_id = SVec::zero(d);
            let mut id_s = SVec::zero(d);
            for (ij, c) in h.comult.col(k).iter() {
                let (i, j) = (ij / d, ij % d);
                let s_i = h.antipode.col(i);
                let s_j = h.antipode.col(j);
                let e_i = SVec::unit(d, i, field);
                let e_j = SVec::unit(d, j, field);
                s_id = s_id.add_scaled(&h.algebra.multiply(s_i, &e_j), c);
                id_s = id_s.add_scaled(&h.algebra.multiply(&e_i, s_j), c);
            }
            if s_id != target || id_s != target {
                return Err(HopfError::AntipodeConvolution(k));
            }
        }

        // S² = id (required; justified by cocommutativity below).
        if h.antipode.compose(&h.antipode) != id {
            return Err(HopfError::AntipodeNotInvolutive);
        }

        // Cocommutativity: τ∘Δ = Δ.
        if !check_cocommutative_raw(&h.algebra, &h.comult) {
            return Err(HopfError::NotCocommutative);
        }

        Ok(h)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn comult(&self) -> &SparseMat {
        &self.comult
    }

    pub fn counit(&self) -> &SparseMat {
        &self.counit
    }

    pub fn antipode(&self) -> &SparseMat {
        &self.antipode
    }

    /// Sweedler components of Δ(e_h): list of (i, j, coefficient).
    pub fn comult_pairs(&self, h: usize) -> Vec<(usize, usize, Scalar)> {
        let d = self.dim();
        self.comult
            .col(h)
            .iter()
            .map(|(ij, c)| (ij / d, ij % d, c.clone()))
            .collect()
    }

    pub fn counit_of(&self, x: &SVec) -> Scalar {
        let v = self.counit.apply(x);
        v.get(0).cloned().unwrap_or_else(|| self.field().zero())
    }

    pub fn antipode_of(&self, x: &SVec) -> SVec {
        self.antipode.apply(x)
    }

    pub fn is_cocommutative(&self) -> bool {
        check_cocommutative_raw(&self.algebra, &self.comult)
    }
}

/// τ∘Δ = Δ, checkable on raw parts (used before full construction and as a
/// negative-control hook).
pub fn check_cocommutative_raw(algebra: &FiniteAlgebra, comult: &SparseMat) -> bool {
    let d = algebra.dim();
    if comult.rows() != d * d || comult.ncols() != d {
        return false;
    }
    flip_matrix(algebra.field(), d).compose(comult) == *comult
}

/// Δ iterated to n tensor factors: dim^n × dim. n = 1 is the identity;
/// coassociativity makes the result independent of which factor Δ hits.
pub fn iterated_comult(h: &HopfData, n: usize) -> SparseMat {
    assert!(n >= 1, "iterated_comult needs n >= 1");
    let d = h.dim();
    let field = h.field();
    let mut acc = SparseMat::identity(field, d);
    let mut rows = d;
    for _ in 1..n {
        // Apply Δ to the first factor: (Δ ⊗ id^{k-1}).
        let step = h.comult().kron(&SparseMat::identity(field, rows / d));
        acc = step.compose(&acc);
        rows *= d;
    }
    acc
}

/// Group algebra KG with Δg = g⊗g, ε(g) = 1, S(g) = g⁻¹.
pub fn group_algebra(g: &GroupTable, field: FieldSpec) -> Result<HopfData, HopfError> {
    g.validate()?;
    let n = g.order();
    let mult = (0..n)
        .map(|i| (0..n).map(|j| SVec::unit(n, g.mul(i, j), field)).collect())
        .collect();
    let unit = SVec::unit(n, g.identity(), field);
    let algebra = FiniteAlgebra::new(field, mult, unit, format!("K[G{n}]"))?;
    let comult = SparseMat::from_fn(field, n * n, n, |h| SVec::unit(n * n, h * n + h, field));
    let counit = SparseMat::from_fn(field, 1, n, |_| SVec::unit(1, 0, field));
    let antipode = SparseMat::from_fn(field, n, n, |h| SVec::unit(n, g.inv(h), field));
    HopfData::new(algebra, comult, counit, antipode)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn group_table_validation() {
        assert!(GroupTable::cyclic(4).validate().is_ok());
        // Broken inverse list.
        let bad = GroupTable::new(2, 0, vec![vec![0, 1], vec![1, 0]], vec![0, 0]);
        assert!(bad.is_err());
        // Non-associative "table" (not a group).
        let bad = GroupTable::new(
            3,
            0,
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]],
            vec![0, 2, 1],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn group_algebra_examples() {
        let h1 = group_algebra(&GroupTable::trivial(), Q).unwrap();
        assert_eq!(h1.dim(), 1);

        let h2 = group_algebra(&GroupTable::cyclic(2), Q).unwrap();
        assert_eq!(h2.dim(), 2);
        assert_eq!(*h2.antipode(), SparseMat::identity(Q, 2), "every element of Z/2 is its own inverse");

        let h4 = group_algebra(&GroupTable::cyclic(4), Q).unwrap();
        let s = h4.antipode();
        assert_eq!(s.apply(&SVec::unit(4, 1, Q)), SVec::unit(4, 3, Q));
        assert_eq!(s.apply(&SVec::unit(4, 3, Q)), SVec::unit(4, 1, Q));
        assert_eq!(s.apply(&SVec::unit(4, 2, Q)), SVec::unit(4, 2, Q));

        // Also over small prime fields.
        let h3 = group_algebra(&GroupTable::cyclic(3), FieldSpec::prime(3).unwrap()).unwrap();
        assert_eq!(h3.dim(), 3);
    }

    #[test]
    fn cocommutativity_checks() {
        let h = group_algebra(&GroupTable::cyclic(3), Q).unwrap();
        assert!(h.is_cocommutative());

        // Corrupt Δ: send g to g⊗g² (not symmetric under the flip).
        let d = 3;
        let bad = SparseMat::from_fn(Q, d * d, d, |h_ix| {
            let j = (h_ix + 1) % d;
            SVec::unit(d * d, h_ix * d + j, Q)
        });
        assert!(!check_cocommutative_raw(h.algebra(), &bad));
    }

    #[test]
    fn iterated_comult_examples() {
        let h = group_algebra(&GroupTable::cyclic(4), Q).unwrap();
        assert_eq!(iterated_comult(&h, 1), SparseMat::identity(Q, 4));

        // Grouplike: Δ₃(g) = g⊗g⊗g.
        let d3 = iterated_comult(&h, 3);
        let g = 1usize;
        assert_eq!(
            d3.apply(&SVec::unit(4, g, Q)),
            SVec::unit(64, g * 16 + g * 4 + g, Q)
        );

        // Independence of parenthesization: (id⊗Δ)Δ = (Δ⊗id)Δ.
        for grp in [GroupTable::cyclic(2), GroupTable::cyclic(3), GroupTable::cyclic(4)] {
            let h = group_algebra(&grp, Q).unwrap();
            let id = SparseMat::identity(Q, h.dim());
            let left = h.comult().kron(&id).compose(h.comult());
            let right = id.kron(h.comult()).compose(h.comult());
            assert_eq!(left, right);
            assert_eq!(left, iterated_comult(&h, 3));
        }
    }

    #[test]
    fn antipode_invariants() {
        for n in [1, 2, 3, 4] {
            let h = group_algebra(&GroupTable::cyclic(n), Q).unwrap();
            let id = SparseMat::identity(Q, n);
            assert_eq!(h.antipode().compose(h.antipode()), id, "S² = id");
            assert_eq!(h.counit().compose(h.antipode()), *h.counit(), "ε∘S = ε");
            assert_eq!(h.antipode_of(h.algebra().unit()), *h.algebra().unit(), "S(1) = 1");
        }
    }

    #[test]
    fn validators_reject_corruption() {
        let g = GroupTable::cyclic(2);
        let h = group_algebra(&g, Q).unwrap();
        // Non-coassociative Δ: g ↦ g⊗1 breaks the counit/coassociativity laws.
        let bad_comult = SparseMat::from_fn(Q, 4, 2, |h_ix| SVec::unit(4, h_ix * 2, Q));
        let r = HopfData::new(
            h.algebra().clone(),
            bad_comult,
            h.counit().clone(),
            h.antipode().clone(),
        );
        assert!(r.is_err());

        // Wrong antipode on Z/3: identity map fails the convolution identity.
        let g3 = GroupTable::cyclic(3);
        let h3 = group_algebra(&g3, Q).unwrap();
        let r = HopfData::new(
            h3.algebra().clone(),
            h3.comult().clone(),
            h3.counit().clone(),
            SparseMat::identity(Q, 3),
        );
        assert!(matches!(r, Err(HopfError::AntipodeConvolution(_))));
    }

    #[test]
    fn group_table_serde_round_trip() {
        let g = GroupTable::cyclic(3);
        let json = serde_json::to_string(&g).unwrap();
        let back: GroupTable = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
        assert!(back.validate().is_ok());
    }
}
