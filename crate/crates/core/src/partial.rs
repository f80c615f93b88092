//! Partial actions and partial representations of a Hopf algebra, with
//! exhaustive axiom checkers, the partial smash product A#H, and restriction
//! of global actions to unital ideals (the fixture generator for genuinely
//! partial examples).
//!
//! Axiom checkers run over all basis tuples and report the first violating
//! tuple per axiom. Partial-representation identities are checked on faithful
//! matrix realizations (left multiplication operators), so one checker serves
//! both algebra-valued representations and endomorphism actions.

use crate::algebra::{
    bimodule_to_left_env, bimodule_to_right_env, enveloping, hom_space, tensor_over_subalgebra,
    AlgebraHom, FiniteAlgebra, HomSpace, Module, Side, TensorOverAlgebra,
};
use crate::field::FieldSpec;
use crate::hopf::HopfData;
use crate::hpar::{
    b_partial_action, extend_rep_mats, twist_left_to_right, universal_factorization, HParAlgebra,
    HparError,
};
use crate::linalg::{descends_to_quotients, induced_on_quotients, SVec, SparseMat, Subspace};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum PartialError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("axioms fail: {0}")]
    AxiomsFail(String),
    #[error("action is not global")]
    NotGlobal,
    #[error("element is not a central idempotent")]
    NotCentralIdempotent,
    #[error("smash product is not multiplicatively closed (internal error)")]
    SmashNotClosed,
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error(transparent)]
    Hopf(#[from] crate::hopf::HopfError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn push(&mut self, axiom: &str, failure: Option<String>) {
        self.checks.push(AxiomCheck {
            axiom: axiom.to_string(),
            passed: failure.is_none(),
            counterexample: failure,
        });
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.counterexample {
                None => writeln!(f, "{}: pass", c.axiom)?,
                Some(w) => writeln!(f, "{}: FAIL at {}", c.axiom, w)?,
            }
        }
        Ok(())
    }
}

/// A partial action of H on A: lambda columns are h·a for basis pairs,
/// column index h·dim_A + a. Construction validates PA1-PA4 (symmetric).
#[derive(Clone, Debug)]
pub struct PartialActionData {
    hopf: Arc<HopfData>,
    algebra: Arc<FiniteAlgebra>,
    lambda: SparseMat,
}

impl PartialActionData {
    pub fn new(
        hopf: Arc<HopfData>,
        algebra: Arc<FiniteAlgebra>,
        lambda: SparseMat,
    ) -> Result<Self, PartialError> {
        let report = check_partial_action_raw(&hopf, &algebra, &lambda)?;
        if !report.all_passed() {
            let failing = report
                .first_failure()
                .map(|c| {
                    format!(
                        "{} at {}",
                        c.axiom,
                        c.counterexample.as_deref().unwrap_or("?")
                    )
                })
                .unwrap_or_default();
            return Err(PartialError::AxiomsFail(failing));
        }
        Ok(PartialActionData { hopf, algebra, lambda })
    }

    pub fn hopf(&self) -> &Arc<HopfData> {
        &self.hopf
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn lambda(&self) -> &SparseMat {
        &self.lambda
    }

    pub fn dim_h(&self) -> usize {
        self.hopf.dim()
    }

    pub fn dim_a(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    /// h·a for basis indices.
    pub fn act_basis(&self, h: usize, a: usize) -> &SVec {
        self.lambda.col(h * self.dim_a() + a)
    }

    /// The operator a ↦ e_h · a.
    pub fn act_mat(&self, h: usize) -> SparseMat {
        let da = self.dim_a();
        SparseMat::from_fn(self.field(), da, da, |a| self.act_basis(h, a).clone())
    }

    pub fn act_operator(&self, h: &SVec) -> SparseMat {
        let da = self.dim_a();
        let mut acc = SparseMat::zero(self.field(), da, da);
        for (i, c) in h.iter() {
            acc = acc.add(&self.act_mat(*i).scale(c));
        }
        acc
    }

    pub fn act(&self, h: &SVec, a: &SVec) -> SVec {
        let mut acc = SVec::zero(self.dim_a());
        for (i, ch) in h.iter() {
            for (j, ca) in a.iter() {
                acc = acc.add_scaled(self.act_basis(*i, *j), &ch.mul(ca));
            }
        }
        acc
    }

    pub fn h_dot_one(&self, h: &SVec) -> SVec {
        self.act(h, self.algebra.unit())
    }

    /// Global means h·1_A = ε(h)1_A for all h.
    pub fn is_global(&self) -> bool {
        (0..self.dim_h()).all(|h| {
            let e_h = SVec::unit(self.dim_h(), h, self.field());
            let eps = self.hopf.counit_of(&e_h);
            self.h_dot_one(&e_h) == self.algebra.unit().scale(&eps)
        })
    }
}

/// PA1-PA4 on raw parts; errors only on shape mismatch.
pub fn check_partial_action_raw(
    hopf: &HopfData,
    algebra: &FiniteAlgebra,
    lambda: &SparseMat,
) -> Result<AxiomReport, PartialError> {
    let dh = hopf.dim();
    let da = algebra.dim();
    let field = algebra.field();
    if hopf.field() != field {
        return Err(PartialError::Shape("field mismatch between H and A".into()));
    }
    if lambda.rows() != da || lambda.ncols() != dh * da {
        return Err(PartialError::Shape(format!(
            "lambda is {}x{}, expected {}x{}",
            lambda.rows(),
            lambda.ncols(),
            da,
            dh * da
        )));
    }
    let act_basis = |h: usize, a: usize| lambda.col(h * da + a);
    let act_mats: Vec<SparseMat> =
        (0..dh).map(|h| SparseMat::from_fn(field, da, da, |a| act_basis(h, a).clone())).collect();
    let act_elem = |h: usize, x: &SVec| act_mats[h].apply(x);
    let act_comb = |hx: &SVec, x: &SVec| {
        let mut acc = SVec::zero(da);
        for (i, c) in hx.iter() {
            acc = acc.add_scaled(&act_mats[*i].apply(x), c);
        }
        acc
    };
    let one_a = algebra.unit();
    let h_dot_one: Vec<SVec> = (0..dh).map(|h| act_elem(h, one_a)).collect();

    let mut report = AxiomReport { checks: Vec::new() };

    // PA1: 1_H acts as the identity.
    let unit_op = {
        let mut acc = SparseMat::zero(field, da, da);
        for (i, c) in hopf.algebra().unit().iter() {
            acc = acc.add(&act_mats[*i].scale(c));
        }
        acc
    };
    let pa1 = if unit_op == SparseMat::identity(field, da) {
        None
    } else {
        Some("1_H does not act as identity".to_string())
    };
    report.push("PA1", pa1);

    // PA2: h·(ab) = (h_(1)·a)(h_(2)·b).
    let mut pa2 = None;
    'pa2: for h in 0..dh {
        let pairs = hopf.comult_pairs(h);
        for a in 0..da {
            for b in 0..da {
                let lhs = act_elem(h, algebra.basis_product(a, b));
                let mut rhs = SVec::zero(da);
                for (i, j, c) in &pairs {
                    let p = algebra.multiply(act_basis(*i, a), act_basis(*j, b));
                    rhs = rhs.add_scaled(&p, c);
                }
                if lhs != rhs {
                    pa2 = Some(format!("h={h}, a={a}, b={b}"));
                    break 'pa2;
                }
            }
        }
    }
    report.push("PA2", pa2);

    // PA3: h·(k·a) = (h_(1)·1_A)(h_(2)k·a).
    let mut pa3 = None;
    'pa3: for h in 0..dh {
        let pairs = hopf.comult_pairs(h);
        for k in 0..dh {
            for a in 0..da {
                let lhs = act_elem(h, act_basis(k, a));
                let mut rhs = SVec::zero(da);
                for (i, j, c) in &pairs {
                    let jk = hopf.algebra().basis_product(*j, k);
                    let t = algebra.multiply(&h_dot_one[*i], &act_comb(jk, &SVec::unit(da, a, field)));
                    rhs = rhs.add_scaled(&t, c);
                }
                if lhs != rhs {
                    pa3 = Some(format!("h={h}, k={k}, a={a}"));
                    break 'pa3;
                }
            }
        }
    }
    report.push("PA3", pa3);

    // PA4 (symmetry): h·(k·a) = (h_(1)k·a)(h_(2)·1_A).
    let mut pa4 = None;
    'pa4: for h in 0..dh {
        let pairs = hopf.comult_pairs(h);
        for k in 0..dh {
            for a in 0..da {
                let lhs = act_elem(h, act_basis(k, a));
                let mut rhs = SVec::zero(da);
                for (i, j, c) in &pairs {
                    let ik = hopf.algebra().basis_product(*i, k);
                    let t = algebra.multiply(&act_comb(ik, &SVec::unit(da, a, field)), &h_dot_one[*j]);
                    rhs = rhs.add_scaled(&t, c);
                }
                if lhs != rhs {
                    pa4 = Some(format!("h={h}, k={k}, a={a}"));
                    break 'pa4;
                }
            }
        }
    }
    report.push("PA4", pa4);

    Ok(report)
}

pub fn check_partial_action(pa: &PartialActionData) -> AxiomReport {
    check_partial_action_raw(&pa.hopf, &pa.algebra, &pa.lambda)
        .expect("constructed PartialActionData is well-shaped")
}

/// A partial representation π: H → A, stored as a dim_A × dim_H matrix of
/// images. Construction validates PR1-PR5.
#[derive(Clone, Debug)]
pub struct PartialRepData {
    hopf: Arc<HopfData>,
    target: Arc<FiniteAlgebra>,
    pi: SparseMat,
}

impl PartialRepData {
    pub fn new(
        hopf: Arc<HopfData>,
        target: Arc<FiniteAlgebra>,
        pi: SparseMat,
    ) -> Result<Self, PartialError> {
        let report = check_partial_rep_raw(&hopf, &target, &pi)?;
        if !report.all_passed() {
            let failing = report
                .first_failure()
                .map(|c| {
                    format!(
                        "{} at {}",
                        c.axiom,
                        c.counterexample.as_deref().unwrap_or("?")
                    )
                })
                .unwrap_or_default();
            return Err(PartialError::AxiomsFail(failing));
        }
        Ok(PartialRepData { hopf, target, pi })
    }

    pub fn hopf(&self) -> &Arc<HopfData> {
        &self.hopf
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMat {
        &self.pi
    }

    pub fn pi_basis(&self, h: usize) -> &SVec {
        self.pi.col(h)
    }

    pub fn pi_of(&self, x: &SVec) -> SVec {
        self.pi.apply(x)
    }
}

/// PR1-PR5 for a matrix family mats[h] = π(e_h) acting on a space of
/// dimension `dim`. Operator products realize the algebra products.
pub fn check_partial_rep_mats(hopf: &HopfData, mats: &[SparseMat], dim: usize) -> AxiomReport {
    let dh = hopf.dim();
    let field = hopf.field();
    assert_eq!(mats.len(), dh, "one matrix per H basis element");
    let mat_of = |x: &SVec| {
        let mut acc = SparseMat::zero(field, dim, dim);
        for (i, c) in x.iter() {
            acc = acc.add(&mats[*i].scale(c));
        }
        acc
    };
    // π(S(e_h)) for each basis element.
    let smats: Vec<SparseMat> = (0..dh).map(|h| mat_of(hopf.antipode().col(h))).collect();

    let mut report = AxiomReport { checks: Vec::new() };

    let pr1 = if mat_of(hopf.algebra().unit()) == SparseMat::identity(field, dim) {
        None
    } else {
        Some("π(1_H) ≠ id".to_string())
    };
    report.push("PR1", pr1);

    // PR2: π(h)π(k_(1))π(S(k_(2))) = π(hk_(1))π(S(k_(2))).
    let mut pr2 = None;
    'pr2: for h in 0..dh {
        for k in 0..dh {
            let mut lhs = SparseMat::zero(field, dim, dim);
            let mut rhs = SparseMat::zero(field, dim, dim);
            for (i, j, c) in hopf.comult_pairs(k) {
                lhs = lhs.add(&mats[h].compose(&mats[i]).compose(&smats[j]).scale(&c));
                rhs = rhs.add(&mat_of(hopf.algebra().basis_product(h, i)).compose(&smats[j]).scale(&c));
            }
            if lhs != rhs {
                pr2 = Some(format!("h={h}, k={k}"));
                break 'pr2;
            }
        }
    }
    report.push("PR2", pr2);

    // PR3: π(h_(1))π(S(h_(2)))π(k) = π(h_(1))π(S(h_(2))k).
    let mut pr3 = None;
    'pr3: for h in 0..dh {
        for k in 0..dh {
            let mut lhs = SparseMat::zero(field, dim, dim);
            let mut rhs = SparseMat::zero(field, dim, dim);
            for (i, j, c) in hopf.comult_pairs(h) {
                lhs = lhs.add(&mats[i].compose(&smats[j]).compose(&mats[k]).scale(&c));
                // S(e_j)·e_k in H.
                let mut sk = SVec::zero(dh);
                for (m, cm) in hopf.antipode().col(j).iter() {
                    sk = sk.add_scaled(hopf.algebra().basis_product(*m, k), cm);
                }
                rhs = rhs.add(&mats[i].compose(&mat_of(&sk)).scale(&c));
            }
            if lhs != rhs {
                pr3 = Some(format!("h={h}, k={k}"));
                break 'pr3;
            }
        }
    }
    report.push("PR3", pr3);

    // PR4: π(h)π(S(k_(1)))π(k_(2)) = π(hS(k_(1)))π(k_(2)).
    let mut pr4 = None;
    'pr4: for h in 0..dh {
        for k in 0..dh {
            let mut lhs = SparseMat::zero(field, dim, dim);
            let mut rhs = SparseMat::zero(field, dim, dim);
            for (i, j, c) in hopf.comult_pairs(k) {
                lhs = lhs.add(&mats[h].compose(&smats[i]).compose(&mats[j]).scale(&c));
                // e_h·S(e_i) in H.
                let mut hs = SVec::zero(dh);
                for (m, cm) in hopf.antipode().col(i).iter() {
                    hs = hs.add_scaled(hopf.algebra().basis_product(h, *m), cm);
                }
                rhs = rhs.add(&mat_of(&hs).compose(&mats[j]).scale(&c));
            }
            if lhs != rhs {
                pr4 = Some(format!("h={h}, k={k}"));
                break 'pr4;
            }
        }
    }
    report.push("PR4", pr4);

    // PR5: π(S(h_(1)))π(h_(2))π(k) = π(S(h_(1)))π(h_(2)k).
    let mut pr5 = None;
    'pr5: for h in 0..dh {
        for k in 0..dh {
            let mut lhs = SparseMat::zero(field, dim, dim);
            let mut rhs = SparseMat::zero(field, dim, dim);
            for (i, j, c) in hopf.comult_pairs(h) {
                lhs = lhs.add(&smats[i].compose(&mats[j]).compose(&mats[k]).scale(&c));
                rhs = rhs.add(&smats[i].compose(&mat_of(hopf.algebra().basis_product(j, k))).scale(&c));
            }
            if lhs != rhs {
                pr5 = Some(format!("h={h}, k={k}"));
                break 'pr5;
            }
        }
    }
    report.push("PR5", pr5);

    report
}

/// PR1-PR5 for an algebra-valued representation, via the faithful left
/// regular realization of the target.
pub fn check_partial_rep_raw(
    hopf: &HopfData,
    target: &FiniteAlgebra,
    pi: &SparseMat,
) -> Result<AxiomReport, PartialError> {
    if hopf.field() != target.field() {
        return Err(PartialError::Shape("field mismatch between H and target".into()));
    }
    if pi.rows() != target.dim() || pi.ncols() != hopf.dim() {
        return Err(PartialError::Shape(format!(
            "pi is {}x{}, expected {}x{}",
            pi.rows(),
            pi.ncols(),
            target.dim(),
            hopf.dim()
        )));
    }
    let mats: Vec<SparseMat> = (0..hopf.dim())
        .map(|h| target.left_mult_operator(pi.col(h)))
        .collect();
    Ok(check_partial_rep_mats(hopf, &mats, target.dim()))
}

pub fn check_partial_rep(rep: &PartialRepData) -> AxiomReport {
    check_partial_rep_raw(&rep.hopf, &rep.target, &rep.pi)
        .expect("constructed PartialRepData is well-shaped")
}

/// The partial smash product A#H = (A⊗H)(1_A⊗1_H), cut out of A⊗H with the
/// product (a⊗h)(b⊗k) = a(h_(1)·b) ⊗ h_(2)k. Tensor index (a,h) -> a·dim_H + h.
pub struct SmashAlgebra {
    pub action: Arc<PartialActionData>,
    pub algebra: Arc<FiniteAlgebra>,
    /// The smash subspace of A⊗H; its basis indexes the smash algebra.
    pub space: Subspace,
    /// a ↦ a#1, a verified algebra homomorphism A → A#H.
    pub phi0: AlgebraHom,
    /// h ↦ 1#h, a verified partial representation H → A#H.
    pub pi0: PartialRepData,
}

impl SmashAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// a#h in smash coordinates.
    pub fn smash_of(&self, a: &SVec, h: &SVec) -> SVec {
        let amb = self.action.pre_mult(&tensor_av(self.action.dim_h(), a, h), &self.one_tensor_one());
        self.space
            .coordinates(&amb)
            .expect("a#h lies in the smash subspace by construction")
    }

    fn one_tensor_one(&self) -> SVec {
        tensor_av(
            self.action.dim_h(),
            self.action.algebra().unit(),
            self.action.hopf().algebra().unit(),
        )
    }

    /// Smash coordinates of an ambient A⊗H vector, if it lies in the subspace.
    pub fn coords(&self, ambient: &SVec) -> Option<SVec> {
        self.space.coordinates(ambient)
    }
}

/// a⊗h as a vector in A⊗H.
pub fn tensor_av(dim_h: usize, a: &SVec, h: &SVec) -> SVec {
    let mut entries = Vec::with_capacity(a.nnz() * h.nnz());
    for (i, ca) in a.iter() {
        for (j, ch) in h.iter() {
            entries.push((i * dim_h + j, ca.mul(ch)));
        }
    }
    SVec::from_entries(a.dim() * dim_h, entries)
}

impl PartialActionData {
    /// The associative product on all of A⊗H.
    pub fn pre_mult(&self, u: &SVec, v: &SVec) -> SVec {
        let dh = self.dim_h();
        let da = self.dim_a();
        let mut acc = SVec::zero(da * dh);
        for (iu, cu) in u.iter() {
            let (a, h) = (iu / dh, iu % dh);
            for (iv, cv) in v.iter() {
                let (b, k) = (iv / dh, iv % dh);
                let c = cu.mul(cv);
                for (h1, h2, cd) in self.hopf.comult_pairs(h) {
                    // a(h1·b) ⊗ h2·k
                    let left = self
                        .algebra
                        .multiply(&SVec::unit(da, a, self.field()), self.act_basis(h1, b));
                    let right = self.hopf.algebra().basis_product(h2, k);
                    let coef = c.mul(&cd);
                    for (x, cx) in left.iter() {
                        for (y, cy) in right.iter() {
                            acc = acc.add_scaled(
                                &SVec::unit(da * dh, x * dh + y, self.field()),
                                &coef.mul(cx).mul(cy),
                            );
                        }
                    }
                }
            }
        }
        acc
    }
}

pub fn smash_product(pa: &Arc<PartialActionData>) -> Result<SmashAlgebra, PartialError> {
    let da = pa.dim_a();
    let dh = pa.dim_h();
    let field = pa.field();
    let ambient = da * dh;
    let one_one = tensor_av(dh, pa.algebra().unit(), pa.hopf().algebra().unit());

    // Image of right multiplication by 1⊗1 spans the smash subspace.
    let cols: Vec<SVec> = (0..ambient)
        .map(|x| pa.pre_mult(&SVec::unit(ambient, x, field), &one_one))
        .collect();
    let space = Subspace::from_span(field, ambient, cols);
    let n = space.dim();

    // Structure constants on the subspace basis.
    let basis = space.basis().to_vec();
    let mut mult = vec![vec![SVec::zero(n); n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = pa.pre_mult(&basis[i], &basis[j]);
            mult[i][j] = space.coordinates(&p).ok_or(PartialError::SmashNotClosed)?;
        }
    }
    let unit = space
        .coordinates(&pa.pre_mult(&one_one, &one_one))
        .ok_or(PartialError::SmashNotClosed)?;
    let algebra = FiniteAlgebra::new(field, mult, unit, format!("{}#H", pa.algebra().label()))?;

    // φ₀: a ↦ a#1.
    let one_h = pa.hopf().algebra().unit().clone();
    let phi_cols: Vec<SVec> = (0..da)
        .map(|a| {
            let amb = pa.pre_mult(&tensor_av(dh, &SVec::unit(da, a, field), &one_h), &one_one);
            space.coordinates(&amb).ok_or(PartialError::SmashNotClosed)
        })
        .collect::<Result<_, _>>()?;
    let phi0 = AlgebraHom::new(
        pa.algebra().clone(),
        algebra.clone(),
        SparseMat::from_cols(field, n, phi_cols),
    )
    .map_err(PartialError::Algebra)?;

    // π₀: h ↦ 1#h.
    let one_a = pa.algebra().unit().clone();
    let pi_cols: Vec<SVec> = (0..dh)
        .map(|h| {
            let amb = pa.pre_mult(&tensor_av(dh, &one_a, &SVec::unit(dh, h, field)), &one_one);
            space.coordinates(&amb).ok_or(PartialError::SmashNotClosed)
        })
        .collect::<Result<_, _>>()?;
    let pi0 = PartialRepData::new(
        pa.hopf().clone(),
        algebra.clone(),
        SparseMat::from_cols(field, n, pi_cols),
    )?;

    Ok(SmashAlgebra { action: pa.clone(), algebra, space, phi0, pi0 })
}

/// Restrict a global action to the unital ideal uA cut out by a central
/// idempotent u: h·(ux) := u(h ⋅_global ux).
pub fn restrict_global_action(
    global: &PartialActionData,
    u: &SVec,
) -> Result<PartialActionData, PartialError> {
    if !global.is_global() {
        return Err(PartialError::NotGlobal);
    }
    let a = global.algebra();
    if a.multiply(u, u) != *u {
        return Err(PartialError::NotCentralIdempotent);
    }
    for i in 0..a.dim() {
        let e = SVec::unit(a.dim(), i, a.field());
        if a.multiply(u, &e) != a.multiply(&e, u) {
            return Err(PartialError::NotCentralIdempotent);
        }
    }
    // The ideal uA as an algebra with unit u.
    let span: Vec<SVec> = (0..a.dim())
        .map(|i| a.multiply(u, &SVec::unit(a.dim(), i, a.field())))
        .collect();
    let ideal = Subspace::from_span(a.field(), a.dim(), span);
    let basis = ideal.basis().to_vec();
    let n = basis.len();
    let mut mult = vec![vec![SVec::zero(n); n]; n];
    for i in 0..n {
        for j in 0..n {
            mult[i][j] = ideal
                .coordinates(&a.multiply(&basis[i], &basis[j]))
                .expect("ideal is multiplicatively closed");
        }
    }
    let unit = ideal.coordinates(u).expect("u lies in uA");
    let sub = FiniteAlgebra::new(a.field(), mult, unit, format!("u·{}", a.label()))?;

    // λ'(h, x) = u(h·x) for x in the ideal basis.
    let dh = global.dim_h();
    let lambda = SparseMat::from_fn(a.field(), n, dh * n, |col| {
        let (h, x) = (col / n, col % n);
        let moved = global.act(&SVec::unit(dh, h, a.field()), &basis[x]);
        ideal
            .coordinates(&a.multiply(u, &moved))
            .expect("u(h·ux) lies in uA")
    });
    PartialActionData::new(global.hopf().clone(), sub, lambda)
}

// ---------------------------------------------------------------------------
// Modules over H_par: generator matrices h ↦ [h]▷(-) on a carrier, checked
// against PR1-PR5 and extended to the whole H_par algebra by universal
// factorization. The extension is then validated as a left module.
// ---------------------------------------------------------------------------

/// Carrier of an [`HparModule`] when its coordinates need interpreting
/// (a quotient or a subspace) rather than indexing a plain basis.
pub enum HparCarrier {
    Plain,
    /// A ⊗_{A^e} M; module coordinates are the tensor quotient coordinates.
    Tensor(TensorOverAlgebra),
    /// Hom_{A^e}(A, M); module coordinates index the hom subspace basis.
    Hom(HomSpace),
}

/// A validated left module over an H_par algebra, kept together with the
/// generator matrices it was extended from.
pub struct HparModule {
    pub module: Module,
    /// Action matrices of the generators [h], indexed by the basis of H.
    pub h_mats: Vec<SparseMat>,
    pub carrier: HparCarrier,
}

impl HparModule {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

fn ensure_same_hopf(hp: &HParAlgebra, other: &HopfData) -> Result<(), HparError> {
    let h = hp.hopf();
    let same = h.algebra() == other.algebra()
        && h.comult() == other.comult()
        && h.counit() == other.counit()
        && h.antipode() == other.antipode();
    if same {
        Ok(())
    } else {
        Err(HparError::Input(
            "Hopf data of the input does not match the H_par construction".into(),
        ))
    }
}

fn ensure_smash_bimodule(smash: &SmashAlgebra, m: &Module) -> Result<(), HparError> {
    let over = |alg: Option<&Arc<FiniteAlgebra>>| alg.map(|a| **a == *smash.algebra).unwrap_or(false);
    if over(m.left_algebra()) && over(m.right_algebra()) {
        Ok(())
    } else {
        Err(HparError::Input("expected a bimodule over the smash algebra".into()))
    }
}

fn finish_hpar_module(
    hp: &HParAlgebra,
    h_mats: Vec<SparseMat>,
    carrier: HparCarrier,
) -> Result<HparModule, HparError> {
    let dim = h_mats.first().map(|m| m.rows()).unwrap_or(0);
    let acts = extend_rep_mats(hp, &h_mats, dim)?;
    let module = Module::left(hp.algebra().clone(), acts)?;
    Ok(HparModule { module, h_mats, carrier })
}

/// The carrier A of a partial action, with [h]▷a := h·a.
pub fn hpar_module_base(
    hp: &HParAlgebra,
    pa: &PartialActionData,
) -> Result<HparModule, HparError> {
    ensure_same_hopf(hp, pa.hopf())?;
    let h_mats = (0..pa.dim_h()).map(|h| pa.act_mat(h)).collect();
    finish_hpar_module(hp, h_mats, HparCarrier::Plain)
}

/// [h] acting on an A#H-bimodule by x ↦ (1#h₁) x (1#S(h₂)).
fn smash_bimodule_h_mats(smash: &SmashAlgebra, m: &Module) -> Vec<SparseMat> {
    let hopf = smash.action.hopf();
    let s = hopf.antipode();
    (0..hopf.dim())
        .map(|h| {
            let mut acc = SparseMat::zero(hopf.field(), m.dim(), m.dim());
            for (h1, h2, c) in hopf.comult_pairs(h) {
                let l = m.left_operator(smash.pi0.pi_basis(h1));
                let r = m.right_operator(&smash.pi0.pi_of(s.col(h2)));
                acc = acc.add(&l.compose(&r).scale(&c));
            }
            acc
        })
        .collect()
}

/// An A#H-bimodule with [h]▷x := (1#h₁) x (1#S(h₂)).
pub fn hpar_module_bimodule(
    hp: &HParAlgebra,
    smash: &SmashAlgebra,
    m: &Module,
) -> Result<HparModule, HparError> {
    ensure_same_hopf(hp, smash.action.hopf())?;
    ensure_smash_bimodule(smash, m)?;
    let h_mats = smash_bimodule_h_mats(smash, m);
    finish_hpar_module(hp, h_mats, HparCarrier::Plain)
}

/// The smash algebra itself with [h]▷u := (1#h)u.
pub fn hpar_module_smash(
    hp: &HParAlgebra,
    smash: &SmashAlgebra,
) -> Result<HparModule, HparError> {
    ensure_same_hopf(hp, smash.action.hopf())?;
    let h_mats = (0..hp.hopf().dim())
        .map(|h| smash.algebra.left_mult_operator(smash.pi0.pi_basis(h)))
        .collect();
    finish_hpar_module(hp, h_mats, HparCarrier::Plain)
}

/// An A#H-bimodule as an A-bimodule through a ↦ a#1.
fn bimodule_along(m: &Module, hom: &AlgebraHom) -> Result<Module, HparError> {
    let a = &hom.source;
    let lact = (0..a.dim()).map(|i| m.left_operator(hom.matrix.col(i))).collect();
    let ract = (0..a.dim()).map(|i| m.right_operator(hom.matrix.col(i))).collect();
    Ok(Module::bimodule(a.clone(), lact, a.clone(), ract)?)
}

/// A ⊗_{A^e} M with [h]▷(a ⊗ x) := (h₁·a) ⊗ ([h₂]▷x), where [k]▷x is the
/// bimodule action. The ambient operator is checked to descend through the
/// tensor relations for each basis element of H (summand-wise it need not).
pub fn hpar_module_tensor(
    hp: &HParAlgebra,
    smash: &SmashAlgebra,
    m: &Module,
) -> Result<HparModule, HparError> {
    ensure_same_hopf(hp, smash.action.hopf())?;
    ensure_smash_bimodule(smash, m)?;
    let a = smash.action.algebra();
    let field = a.field();
    let env = enveloping(a);
    let x = bimodule_to_right_env(&Module::regular_bimodule(a), &env)?;
    let y = bimodule_to_left_env(&bimodule_along(m, &smash.phi0)?, &env)?;
    let tensor = tensor_over_subalgebra(&x, &y)?;

    let bims = smash_bimodule_h_mats(smash, m);
    let hopf = smash.action.hopf();
    let ambient = a.dim() * m.dim();
    let mut h_mats = Vec::with_capacity(hopf.dim());
    for h in 0..hopf.dim() {
        let mut amb = SparseMat::zero(field, ambient, ambient);
        for (h1, h2, c) in hopf.comult_pairs(h) {
            amb = amb.add(&smash.action.act_mat(h1).kron(&bims[h2]).scale(&c));
        }
        if !descends_to_quotients(&amb, &tensor.quot, &tensor.quot) {
            return Err(HparError::Descent(format!(
                "tensor action of basis element {h} does not respect the tensor relations"
            )));
        }
        h_mats.push(induced_on_quotients(&amb, &tensor.quot, &tensor.quot));
    }
    finish_hpar_module(hp, h_mats, HparCarrier::Tensor(tensor))
}

/// Hom_{A^e}(A, M) with ([h]▷f)(a) := [h₁]▷f(S(h₂)·a), where [k]▷ on the
/// output is the bimodule action and S(h₂)· on the input is the partial
/// action. The vectorized operator is checked to preserve the hom subspace.
pub fn hpar_module_hom(
    hp: &HParAlgebra,
    smash: &SmashAlgebra,
    m: &Module,
) -> Result<HparModule, HparError> {
    ensure_same_hopf(hp, smash.action.hopf())?;
    ensure_smash_bimodule(smash, m)?;
    let a = smash.action.algebra();
    let field = a.field();
    let env = enveloping(a);
    let x = bimodule_to_left_env(&Module::regular_bimodule(a), &env)?;
    let y = bimodule_to_left_env(&bimodule_along(m, &smash.phi0)?, &env)?;
    let homs = hom_space(&x, &y, Side::Left)?;

    let bims = smash_bimodule_h_mats(smash, m);
    let hopf = smash.action.hopf();
    let s = hopf.antipode();
    let mut h_mats = Vec::with_capacity(hopf.dim());
    for h in 0..hopf.dim() {
        // Vectorized F ↦ P∘F∘Q with index (j,i) ↦ j·dim_y + i is Qᵀ ⊗ P.
        let mut amb = SparseMat::zero(field, a.dim() * m.dim(), a.dim() * m.dim());
        for (h1, h2, c) in hopf.comult_pairs(h) {
            let q = smash.action.act_operator(s.col(h2));
            amb = amb.add(&q.transpose().kron(&bims[h1]).scale(&c));
        }
        let cols = homs
            .space
            .basis()
            .iter()
            .map(|v| {
                homs.space.coordinates(&amb.apply(v)).ok_or_else(|| {
                    HparError::Descent(format!(
                        "hom action of basis element {h} leaves the invariant-map subspace"
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        h_mats.push(SparseMat::from_cols(field, homs.space.dim(), cols));
    }
    finish_hpar_module(hp, h_mats, HparCarrier::Hom(homs))
}

/// The base subalgebra B with [h]▷b := [h₁] b [S(h₂)].
pub fn hpar_module_b_left(hp: &HParAlgebra) -> Result<HparModule, HparError> {
    let pa = b_partial_action(hp)?;
    hpar_module_base(hp, &pa)
}

/// B as a right H_par-module with b◁[h] := [S(h₁)] b [h₂], obtained as the
/// involution twist of the left action and revalidated.
pub fn hpar_module_b_right(hp: &HParAlgebra) -> Result<Module, HparError> {
    let left = hpar_module_b_left(hp)?;
    let twisted = twist_left_to_right(hp, &left.module);
    Ok(Module::right(hp.algebra().clone(), twisted.right_action().to_vec())?)
}

/// X ⊗_B (A#H) for a right H_par-module X, as an A#H-bimodule:
/// (a#h)·(x ⊗ w) = x·[S(h₁)] ⊗ (a#h₂)w and (x ⊗ w)·v = x ⊗ wv.
pub struct SmashBimodule {
    pub module: Module,
    pub tensor: TensorOverAlgebra,
    /// The factorization H_par → A#H through which B acts on A#H.
    pub pi_hat: AlgebraHom,
}

pub fn bimodule_x_tensor_b_smash(
    hp: &HParAlgebra,
    smash: &SmashAlgebra,
    x: &Module,
) -> Result<SmashBimodule, HparError> {
    ensure_same_hopf(hp, smash.action.hopf())?;
    let over_hpar = x
        .right_algebra()
        .map(|a| **a == **hp.algebra())
        .unwrap_or(false);
    if !over_hpar {
        return Err(HparError::Input("x must be a right module over the H_par algebra".into()));
    }
    let field = hp.field();
    let pi_hat = universal_factorization(hp, &smash.pi0)?;
    let kappa = pi_hat.compose(&hp.base().inclusion);
    let x_b = x.restrict_right(&hp.base().inclusion);
    let ash_b = Module::left_regular(&smash.algebra).restrict_left(&kappa);
    let tensor = tensor_over_subalgebra(&x_b, &ash_b)?;

    let n = smash.dim();
    let (dx, dh) = (x.dim(), smash.action.dim_h());
    let da = smash.action.dim_a();
    let ambient = dx * n;
    // Column h = [S(e_h)] in H_par coordinates.
    let sbracket = hp.bracket().compose(hp.hopf().antipode());

    let descend = |op: &SparseMat, what: String| -> Result<SparseMat, HparError> {
        if !descends_to_quotients(op, &tensor.quot, &tensor.quot) {
            return Err(HparError::Descent(what));
        }
        Ok(induced_on_quotients(op, &tensor.quot, &tensor.quot))
    };

    // Left action of the smash basis element u_s, computed on the canonical
    // ambient representative of u_s in A⊗H entry by entry. Right
    // multiplication by 1#1 fixes the smash subspace pointwise, so the entry
    // decomposition reproduces u_s inside A#H.
    let mut lact = Vec::with_capacity(n);
    for sb in 0..n {
        let rep = &smash.space.basis()[sb];
        let mut op = SparseMat::zero(field, ambient, ambient);
        for (idx, c) in rep.iter() {
            let (ai, h) = (idx / dh, idx % dh);
            let ea = SVec::unit(da, ai, field);
            for (h1, h2, c2) in hp.hopf().comult_pairs(h) {
                let xr = x.right_operator(sbracket.col(h1));
                let lm = smash
                    .algebra
                    .left_mult_operator(&smash.smash_of(&ea, &SVec::unit(dh, h2, field)));
                op = op.add(&xr.kron(&lm).scale(&c.mul(&c2)));
            }
        }
        lact.push(descend(
            &op,
            format!("left action of smash basis element {sb} does not respect ⊗_B"),
        )?);
    }

    let ix = SparseMat::identity(field, dx);
    let mut ract = Vec::with_capacity(n);
    for t in 0..n {
        let op = ix.kron(&smash.algebra.right_mult_operator(&SVec::unit(n, t, field)));
        ract.push(descend(
            &op,
            format!("right action of smash basis element {t} does not respect ⊗_B"),
        )?);
    }

    let module = Module::bimodule(smash.algebra.clone(), lact, smash.algebra.clone(), ract)?;
    Ok(SmashBimodule { module, tensor, pi_hat })
}
