//! Homology and cohomology tables over exact scalars.
//!
//! Hochschild homology is computed along two independent routes (the direct
//! complex and the bar resolution over the enveloping algebra) and the
//! results are compared degree by degree; a disagreement is an error, never
//! a silent pick. Partial Hopf (co)homology is derived functors of the base
//! subalgebra over the H_par algebra, computed from the iterated tensor
//! resolution. The comparison isomorphisms between the one-sided and
//! two-sided coefficient functors are built as explicit matrices and checked
//! to be well defined and mutually inverse, and genuine global actions are
//! compared against classical group homology.

use crate::algebra::{
    bimodule_to_left_env, bimodule_to_right_env, commutator_quotient, enveloping, field_algebra,
    hom_space, tensor_over_subalgebra, AlgebraError, AlgebraHom, FiniteAlgebra, HomSpace, Module,
    Side, TensorOverAlgebra,
};
use crate::field::FieldSpec;
use crate::hopf::{group_algebra, GroupTable, HopfData};
use crate::hpar::{build_kpar_group, universal_factorization, HParAlgebra, HparError};
use crate::linalg::{descends_to_quotients, induced_on_quotients, SVec, SparseMat};
use crate::partial::{
    hpar_module_b_left, hpar_module_b_right, hpar_module_hom, hpar_module_tensor, smash_product,
    HparCarrier, PartialActionData, PartialError, PartialRepData,
};
use crate::resolutions::{
    bar_resolution, bimodule_bar_resolution, cprime_resolution, left_module_splitting,
    CPrimeResolution, ChainComplex, Direction, Resolution, ResolutionError,
};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum HomologyError {
    #[error("{0}")]
    Input(String),
    #[error("homology routes disagree at degree {degree}: direct {direct}, resolution route {resolved}")]
    RouteDisagreement { degree: usize, direct: usize, resolved: usize },
    #[error("degree-0 dimension {got} does not match the independent count {expected}")]
    DegreeZero { expected: usize, got: usize },
    #[error("{0}")]
    Descent(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hpar(#[from] HparError),
    #[error(transparent)]
    Partial(#[from] PartialError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

/// Dimension table of a graded (co)homology, degree 0 first. Serializes as
/// `{label, field, dims}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub label: String,
    pub field: FieldSpec,
    pub dims: Vec<usize>,
}

impl HomologyTable {
    pub fn degrees(&self) -> std::ops::Range<usize> {
        0..self.dims.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }
}

// ---------------------------------------------------------------------------
// Functor appliers: tensor or hom a module against a resolution, degree by
// degree, inducing the differentials on the quotient (or sub-) spaces.
// ---------------------------------------------------------------------------

/// Column-major flatten of a map matrix, matching the hom-space convention:
/// entry (i, j) sits at index j*rows + i.
pub(crate) fn vec_of_map(f: &SparseMat) -> SVec {
    let rows = f.rows();
    let mut entries = Vec::with_capacity(f.nnz());
    for j in 0..f.ncols() {
        for (i, c) in f.col(j).iter() {
            entries.push((j * rows + i, c.clone()));
        }
    }
    SVec::from_entries(rows * f.ncols(), entries)
}

pub(crate) fn map_of_vec(field: FieldSpec, v: &SVec, cols: usize, rows: usize) -> SparseMat {
    SparseMat::from_fn(field, rows, cols, |j| v.window(j * rows, (j + 1) * rows))
}

/// The complex m ⊗_R C_• (or C_• ⊗_R m, by `m_position`) of a resolution.
/// Differentials are the induced maps on the tensor quotients; failure to
/// descend is a construction error, not a silent projection.
pub fn tensor_complex(
    m: &Module,
    res: &Resolution,
    m_position: Side,
) -> Result<(ChainComplex, Vec<TensorOverAlgebra>), HomologyError> {
    if res.complex.direction != Direction::Homological {
        return Err(HomologyError::Input("tensoring expects a homological resolution".into()));
    }
    let field = res.complex.field;
    let tensors: Vec<TensorOverAlgebra> = res
        .modules
        .par_iter()
        .map(|c| match m_position {
            Side::Left => tensor_over_subalgebra(m, c),
            Side::Right => tensor_over_subalgebra(c, m),
        })
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = tensors.iter().map(|t| t.dim()).collect();
    let im = SparseMat::identity(field, m.dim());
    let maps = (0..res.complex.maps.len())
        .into_par_iter()
        .map(|q| {
            let amb = match m_position {
                Side::Left => im.kron(&res.complex.maps[q]),
                Side::Right => res.complex.maps[q].kron(&im),
            };
            if !descends_to_quotients(&amb, &tensors[q + 1].quot, &tensors[q].quot) {
                return Err(HomologyError::Descent(format!(
                    "differential out of degree {} does not respect the tensor relations",
                    q + 1
                )));
            }
            Ok(induced_on_quotients(&amb, &tensors[q + 1].quot, &tensors[q].quot))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((ChainComplex::new(field, dims, maps, Direction::Homological)?, tensors))
}

/// The cochain complex Hom_R(C_•, m) of a resolution by left modules, with
/// d(f) = f ∘ ∂. Each differential is expressed in the hom-space bases.
pub fn hom_complex(
    res: &Resolution,
    m: &Module,
) -> Result<(ChainComplex, Vec<HomSpace>), HomologyError> {
    if res.complex.direction != Direction::Homological {
        return Err(HomologyError::Input("hom expects a homological resolution".into()));
    }
    let field = res.complex.field;
    let homs: Vec<HomSpace> = res
        .modules
        .par_iter()
        .map(|c| hom_space(c, m, Side::Left))
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = homs.iter().map(|h| h.space.dim()).collect();
    let dm = m.dim();
    let maps = (0..res.complex.maps.len())
        .into_par_iter()
        .map(|q| {
            let bound = &res.complex.maps[q];
            let cols = homs[q]
                .space
                .basis()
                .iter()
                .map(|v| {
                    let f = map_of_vec(field, v, res.complex.dims[q], dm);
                    homs[q + 1].space.coordinates(&vec_of_map(&f.compose(bound))).ok_or_else(
                        || {
                            HomologyError::Descent(format!(
                                "precomposing with the differential leaves the module-map space at degree {q}"
                            ))
                        },
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok::<_, HomologyError>(SparseMat::from_cols(field, dims[q + 1], cols))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((ChainComplex::new(field, dims, maps, Direction::Cohomological)?, homs))
}

// ---------------------------------------------------------------------------
// Hochschild homology and cohomology.
// ---------------------------------------------------------------------------

const DIM_CAP: usize = 1 << 22;

fn checked_pow(base: usize, exp: usize, factor: usize) -> Result<usize, HomologyError> {
    let mut v = factor;
    for _ in 0..exp {
        v = v
            .checked_mul(base)
            .filter(|&x| x <= DIM_CAP)
            .ok_or_else(|| {
                HomologyError::Input("complex term dimension exceeds the supported cap".into())
            })?;
    }
    Ok(v)
}

fn ensure_bimodule(a: &Arc<FiniteAlgebra>, m: &Module) -> Result<(), HomologyError> {
    let over = |side: Option<&Arc<FiniteAlgebra>>| side.map(|b| **b == **a).unwrap_or(false);
    if over(m.left_algebra()) && over(m.right_algebra()) {
        Ok(())
    } else {
        Err(HomologyError::Input(format!("expected a bimodule over {}", a.label())))
    }
}

/// The direct Hochschild complex C_q = M ⊗ A^{⊗q}: face 0 multiplies into the
/// coefficients from the right, the middle faces multiply adjacent tensor
/// factors, and the last face wraps around to act from the left.
fn direct_hochschild_complex(
    a: &Arc<FiniteAlgebra>,
    m: &Module,
    top: usize,
) -> Result<ChainComplex, HomologyError> {
    let field = a.field();
    let (d, dm) = (a.dim(), m.dim());
    let mut dims = Vec::with_capacity(top + 1);
    for q in 0..=top {
        dims.push(checked_pow(d, q, dm)?);
    }

    let first = SparseMat::from_fn(field, dm, dm * d, |col| {
        m.act_right(&SVec::unit(dm, col / d, field), &SVec::unit(d, col % d, field))
    });
    let mult_aa =
        SparseMat::from_fn(field, d, d * d, |col| a.basis_product(col / d, col % d).clone());

    let mut maps = Vec::with_capacity(top);
    for q in 1..=top {
        let tail = dims[q - 1] / dm; // d^{q-1}
        let mut acc = first.kron(&SparseMat::identity(field, tail));
        for i in 1..q {
            let pre = SparseMat::identity(field, dm * checked_pow(d, i - 1, 1)?);
            let post = SparseMat::identity(field, checked_pow(d, q - 1 - i, 1)?);
            let term = pre.kron(&mult_aa).kron(&post);
            acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        let wrap = SparseMat::from_fn(field, dims[q - 1], dims[q], |col| {
            let last = col % d;
            let rest = col / d;
            let (x, mid) = (rest / tail, rest % tail);
            let moved = m.act_left(&SVec::unit(d, last, field), &SVec::unit(dm, x, field));
            SVec::from_entries(
                dims[q - 1],
                moved.iter().map(|(y, c)| (y * tail + mid, c.clone())).collect(),
            )
        });
        acc = if q % 2 == 0 { acc.add(&wrap) } else { acc.sub(&wrap) };
        maps.push(acc);
    }
    Ok(ChainComplex::new(field, dims, maps, Direction::Homological)?)
}

/// H_•(A, M), computed both from the direct Hochschild complex and from the
/// bar resolution of A over A^e tensored with M. The two dimension tables
/// must agree, and degree 0 must match the commutator quotient M/[A,M].
pub fn hochschild_homology(
    a: &Arc<FiniteAlgebra>,
    m: &Module,
    n: usize,
) -> Result<HomologyTable, HomologyError> {
    ensure_bimodule(a, m)?;
    let field = a.field();
    let top = n + 1;

    let direct = direct_hochschild_complex(a, m, top)?;
    let direct_dims = direct.homology_dims();

    let env = enveloping(a);
    let bar = bimodule_bar_resolution(a, &Module::regular_bimodule(a), top)?;
    let m_env = bimodule_to_right_env(m, &env)?;
    let (resolved, _) = tensor_complex(&m_env, &bar, Side::Left)?;
    let resolved_dims = resolved.homology_dims();

    let mut dims = Vec::with_capacity(n + 1);
    for q in 0..=n {
        if direct_dims[q] != resolved_dims[q] {
            return Err(HomologyError::RouteDisagreement {
                degree: q,
                direct: direct_dims[q],
                resolved: resolved_dims[q],
            });
        }
        dims.push(direct_dims[q]);
    }
    let h0 = commutator_quotient(m)?.dim();
    if dims[0] != h0 {
        return Err(HomologyError::DegreeZero { expected: h0, got: dims[0] });
    }
    Ok(HomologyTable { label: format!("hochschild homology of {}", a.label()), field, dims })
}

/// H^•(A, M) = Ext over A^e of A with values in M, from the bar resolution.
/// Degree 0 is cross-checked against the bimodule-map space Hom_{A^e}(A, M).
pub fn hochschild_cohomology(
    a: &Arc<FiniteAlgebra>,
    m: &Module,
    n: usize,
) -> Result<HomologyTable, HomologyError> {
    ensure_bimodule(a, m)?;
    let field = a.field();
    let env = enveloping(a);
    let bar = bimodule_bar_resolution(a, &Module::regular_bimodule(a), n + 1)?;
    let m_env = bimodule_to_left_env(m, &env)?;
    let (cochain, _) = hom_complex(&bar, &m_env)?;
    let dims = cochain.homology_dims()[..=n].to_vec();

    let reg_env = bimodule_to_left_env(&Module::regular_bimodule(a), &env)?;
    let h0 = hom_space(&reg_env, &m_env, Side::Left)?.space.dim();
    if dims[0] != h0 {
        return Err(HomologyError::DegreeZero { expected: h0, got: dims[0] });
    }
    Ok(HomologyTable { label: format!("hochschild cohomology of {}", a.label()), field, dims })
}

// ---------------------------------------------------------------------------
// Partial Hopf homology and cohomology over the iterated tensor resolution.
// ---------------------------------------------------------------------------

fn ensure_left_hpar(hp: &HParAlgebra, m: &Module) -> Result<(), HomologyError> {
    let over = m.left_algebra().map(|a| **a == **hp.algebra()).unwrap_or(false);
    if over {
        Ok(())
    } else {
        Err(HomologyError::Input("a left module over the H_par algebra is required".into()))
    }
}

/// Partial Hopf homology: Tor over H_par of the base subalgebra against m,
/// computed as H_q of (right C'_•) ⊗_{H_par} m.
pub fn partial_tor(
    hp: &HParAlgebra,
    m: &Module,
    n: usize,
) -> Result<HomologyTable, HomologyError> {
    ensure_left_hpar(hp, m)?;
    let cp = cprime_resolution(hp, n + 1, Side::Right)?;
    let (complex, _) = tensor_complex(m, &cp.resolution, Side::Right)?;
    let dims = complex.homology_dims()[..=n].to_vec();
    Ok(HomologyTable {
        label: format!("partial Hopf homology over {}", hp.algebra().label()),
        field: hp.field(),
        dims,
    })
}

/// Partial Hopf cohomology: Ext over H_par of the base subalgebra into m,
/// computed as H^q of Hom_{H_par}(C'_•, m).
pub fn partial_ext(
    hp: &HParAlgebra,
    m: &Module,
    n: usize,
) -> Result<HomologyTable, HomologyError> {
    ensure_left_hpar(hp, m)?;
    let cp = cprime_resolution(hp, n + 1, Side::Left)?;
    let (complex, _) = hom_complex(&cp.resolution, m)?;
    let dims = complex.homology_dims()[..=n].to_vec();
    Ok(HomologyTable {
        label: format!("partial Hopf cohomology over {}", hp.algebra().label()),
        field: hp.field(),
        dims,
    })
}

/// The character H_par → K extending the counit ([h] ↦ ε(h)).
pub fn counit_character(hp: &HParAlgebra) -> Result<AlgebraHom, HomologyError> {
    let k = field_algebra(hp.field());
    let rep = PartialRepData::new(hp.hopf().clone(), k, hp.hopf().counit().clone())?;
    Ok(universal_factorization(hp, &rep)?)
}

/// The one-dimensional trivial left H_par-module.
pub fn trivial_hpar_module(hp: &HParAlgebra) -> Result<Module, HomologyError> {
    let eps = counit_character(hp)?;
    Ok(Module::left_regular(&eps.target).restrict_left(&eps))
}

/// The surjection H_par → H extending the identity partial representation
/// ([h] ↦ h); every H-module becomes an H_par-module through it.
pub fn global_projection(hp: &HParAlgebra) -> Result<AlgebraHom, HomologyError> {
    let h = hp.hopf().algebra().clone();
    let rep = PartialRepData::new(
        hp.hopf().clone(),
        h.clone(),
        SparseMat::identity(hp.field(), h.dim()),
    )?;
    Ok(universal_factorization(hp, &rep)?)
}

// ---------------------------------------------------------------------------
// Comparison isomorphisms between the one-sided and two-sided coefficient
// functors, as explicit matrices.
// ---------------------------------------------------------------------------

/// Recovers the multiplication table from a Hopf algebra whose basis is a
/// group (each basis product is again a basis element).
pub(crate) fn group_table_of(hopf: &HopfData) -> Result<GroupTable, HomologyError> {
    let alg = hopf.algebra();
    let n = alg.dim();
    let as_basis_index = |v: &SVec| -> Option<usize> {
        let mut it = v.iter();
        match (it.next(), it.next()) {
            (Some((i, c)), None) if c.is_one() => Some(*i),
            _ => None,
        }
    };
    let not_group =
        || HomologyError::Input("the Hopf algebra basis is not a group".into());
    let identity = as_basis_index(alg.unit()).ok_or_else(not_group)?;
    let mut mult = vec![vec![0usize; n]; n];
    for (i, row) in mult.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = as_basis_index(alg.basis_product(i, j)).ok_or_else(not_group)?;
        }
    }
    let mut inverse = vec![0usize; n];
    for (i, inv) in inverse.iter_mut().enumerate() {
        *inv = (0..n)
            .find(|&j| mult[i][j] == identity && mult[j][i] == identity)
            .ok_or_else(not_group)?;
    }
    GroupTable::new(n, identity, mult, inverse).map_err(|e| HomologyError::Input(e.to_string()))
}

struct IsoSetting {
    hp: HParAlgebra,
    smash: crate::partial::SmashAlgebra,
    kappa: AlgebraHom,
}

fn iso_setting(pa: &Arc<PartialActionData>) -> Result<IsoSetting, HomologyError> {
    let field = pa.algebra().field();
    let table = group_table_of(pa.hopf())?;
    let hp = build_kpar_group(&table, field)?;
    let smash = smash_product(pa)?;
    let kappa = universal_factorization(&hp, &smash.pi0)?.compose(&hp.base().inclusion);
    Ok(IsoSetting { hp, smash, kappa })
}

/// Builds γ: B ⊗_{H_par} (A ⊗_{A^e} M) → (A#H) ⊗_{(A#H)^e} M,
/// γ(b ⊗ (a ⊗ x)) = κ(b) ⊗ (a#1)·x, and its inverse
/// ψ(w ⊗ x) = 1_B ⊗ (1_A ⊗ w·x), and verifies both kill the coequalizer
/// relations and compose to the identity in both orders.
pub fn f2f1_iso_check(pa: &Arc<PartialActionData>, m: &Module) -> Result<bool, HomologyError> {
    let field = pa.algebra().field();
    let IsoSetting { hp, smash, kappa } = iso_setting(pa)?;
    let r = &smash.algebra;
    ensure_bimodule(r, m)?;
    let (da, dm, dr, nb) = (pa.algebra().dim(), m.dim(), r.dim(), hp.base().algebra.dim());

    let env = enveloping(r);
    let t1 = tensor_over_subalgebra(
        &bimodule_to_right_env(&Module::regular_bimodule(r), &env)?,
        &bimodule_to_left_env(m, &env)?,
    )?;
    let inner = hpar_module_tensor(&hp, &smash, m)?;
    let HparCarrier::Tensor(inner_tensor) = &inner.carrier else {
        return Err(HomologyError::Input("tensor coefficients carry no quotient".into()));
    };
    let t2 = tensor_over_subalgebra(&hpar_module_b_right(&hp)?, &inner.module)?;

    let h_one = pa.hopf().algebra().unit();
    let a_one = pa.algebra().unit();
    let b_one = hp.base().algebra.unit();

    let gamma_full = SparseMat::from_fn(field, t1.dim(), nb * da * dm, |col| {
        let (b, rest) = (col / (da * dm), col % (da * dm));
        let (ai, x) = (rest / dm, rest % dm);
        let a_hash = smash.smash_of(&SVec::unit(da, ai, field), h_one);
        let moved = m.act_left(&a_hash, &SVec::unit(dm, x, field));
        t1.pure(kappa.matrix.col(b), &moved)
    });
    for rel in inner_tensor.quot.relations().basis() {
        for b in 0..nb {
            if !gamma_full.apply(&rel.shift(nb * da * dm, b * da * dm)).is_zero() {
                return Ok(false);
            }
        }
    }
    let inb = SparseMat::identity(field, nb);
    let gamma_mid = gamma_full.compose(&inb.kron(inner_tensor.quot.section()));
    for rel in t2.quot.relations().basis() {
        if !gamma_mid.apply(rel).is_zero() {
            return Ok(false);
        }
    }
    let gamma = gamma_mid.compose(t2.quot.section());

    let psi_full = SparseMat::from_fn(field, t2.dim(), dr * dm, |col| {
        let (w, x) = (col / dm, col % dm);
        let moved = m.act_left(&SVec::unit(dr, w, field), &SVec::unit(dm, x, field));
        t2.pure(b_one, &inner_tensor.pure(a_one, &moved))
    });
    for rel in t1.quot.relations().basis() {
        if !psi_full.apply(rel).is_zero() {
            return Ok(false);
        }
    }
    let psi = psi_full.compose(t1.quot.section());

    Ok(gamma.compose(&psi) == SparseMat::identity(field, t1.dim())
        && psi.compose(&gamma) == SparseMat::identity(field, t2.dim()))
}

/// The cohomological counterpart: γ(f)(w) = f_{1_B}(1_A)·w from
/// Hom_{H_par}(B, Hom_{A^e}(A, M)) to Hom_{(A#H)^e}(A#H, M), and
/// Λ(F)_b(a) = F(κ(b)(a#1)) back. Both memberships and both compositions
/// are verified.
pub fn g2g1_iso_check(pa: &Arc<PartialActionData>, m: &Module) -> Result<bool, HomologyError> {
    let field = pa.algebra().field();
    let IsoSetting { hp, smash, kappa } = iso_setting(pa)?;
    let r = &smash.algebra;
    ensure_bimodule(r, m)?;
    let (da, dm, dr, nb) = (pa.algebra().dim(), m.dim(), r.dim(), hp.base().algebra.dim());

    let env = enveloping(r);
    let m_env = bimodule_to_left_env(m, &env)?;
    let t1 = hom_space(&bimodule_to_left_env(&Module::regular_bimodule(r), &env)?, &m_env, Side::Left)?;
    let inner = hpar_module_hom(&hp, &smash, m)?;
    let HparCarrier::Hom(inner_hom) = &inner.carrier else {
        return Err(HomologyError::Input("hom coefficients carry no map space".into()));
    };
    let bleft = hpar_module_b_left(&hp)?;
    let t2 = hom_space(&bleft.module, &inner.module, Side::Left)?;
    let di = inner.module.dim();

    let h_one = pa.hopf().algebra().unit();
    let a_one = pa.algebra().unit();
    let b_one = hp.base().algebra.unit();
    let inner_basis = inner_hom.space.basis_mat();

    let mut gamma_cols = Vec::with_capacity(t2.space.dim());
    for v in t2.space.basis() {
        let f = map_of_vec(field, v, nb, di);
        let g_amb = inner_basis.apply(&f.apply(b_one));
        let g = map_of_vec(field, &g_amb, da, dm);
        let u = g.apply(a_one);
        let image =
            SparseMat::from_fn(field, dm, dr, |w| m.act_right(&u, &SVec::unit(dr, w, field)));
        match t1.space.coordinates(&vec_of_map(&image)) {
            Some(c) => gamma_cols.push(c),
            None => return Ok(false),
        }
    }
    let gamma = SparseMat::from_cols(field, t1.space.dim(), gamma_cols);

    let mut lambda_cols = Vec::with_capacity(t1.space.dim());
    for v in t1.space.basis() {
        let f = map_of_vec(field, v, dr, dm);
        let mut entries = Vec::new();
        for b in 0..nb {
            let g_b = SparseMat::from_fn(field, dm, da, |ai| {
                let w = r.multiply(
                    kappa.matrix.col(b),
                    &smash.smash_of(&SVec::unit(da, ai, field), h_one),
                );
                f.apply(&w)
            });
            let Some(coords) = inner_hom.space.coordinates(&vec_of_map(&g_b)) else {
                return Ok(false);
            };
            for (i, c) in coords.iter() {
                entries.push((b * di + i, c.clone()));
            }
        }
        let Some(c2) = t2.space.coordinates(&SVec::from_entries(nb * di, entries)) else {
            return Ok(false);
        };
        lambda_cols.push(c2);
    }
    let lambda = SparseMat::from_cols(field, t2.space.dim(), lambda_cols);

    Ok(gamma.compose(&lambda) == SparseMat::identity(field, t1.space.dim())
        && lambda.compose(&gamma) == SparseMat::identity(field, t2.space.dim()))
}

// ---------------------------------------------------------------------------
// Global actions: partial Hopf homology against classical group homology.
// ---------------------------------------------------------------------------

/// For a genuine module over the group algebra of `g`: partial Hopf homology
/// of the module restricted along H_par → H, next to classical group
/// homology Tor over KG of the trivial module, and whether the tables agree.
pub fn global_comparison(
    g: &GroupTable,
    x: &Module,
    n: usize,
) -> Result<(HomologyTable, HomologyTable, bool), HomologyError> {
    let lalg = x
        .left_algebra()
        .ok_or_else(|| {
            HomologyError::Input("a left module over the group algebra is required".into())
        })?
        .clone();
    let field = lalg.field();
    let hopf =
        Arc::new(group_algebra(g, field).map_err(|e| HomologyError::Input(e.to_string()))?);
    let kg = hopf.algebra().clone();
    if *lalg != *kg {
        return Err(HomologyError::Input(
            "the module is not over the group algebra of the given table".into(),
        ));
    }
    // Revalidate the action against the canonical group algebra.
    let x_glob = Module::left(kg.clone(), x.left_action().to_vec())?;

    let bar = bar_resolution(&kg, &x_glob, n + 1)?;
    let k_right = Module::right(
        kg.clone(),
        (0..kg.dim())
            .map(|i| SparseMat::from_cols(field, 1, vec![hopf.counit().col(i).clone()]))
            .collect(),
    )?;
    let (classical_complex, _) = tensor_complex(&k_right, &bar, Side::Left)?;
    let classical = HomologyTable {
        label: format!("group homology of {}", kg.label()),
        field,
        dims: classical_complex.homology_dims()[..=n].to_vec(),
    };

    let hp = build_kpar_group(g, field)?;
    let phi = global_projection(&hp)?;
    let x_par = x_glob.restrict_left(&phi);
    let partial = partial_tor(&hp, &x_par, n)?;

    let equal = partial.dims == classical.dims;
    Ok((partial, classical, equal))
}

// ---------------------------------------------------------------------------
// Certificates behind the comparison: the two coefficient functors agree and
// the induced H-modules are projective.
// ---------------------------------------------------------------------------

/// Explicit mutually inverse maps between X ⊗_{H_par} H and X ⊗_B K for a
/// right H_par-module X: η(x ⊗ h) = x·[h] ⊗ 1 and Φ(x ⊗ r) = x ⊗ r·1_H.
pub fn ho_b_functors_check(hp: &HParAlgebra, x: &Module) -> Result<bool, HomologyError> {
    let field = hp.field();
    let over = x.right_algebra().map(|a| **a == **hp.algebra()).unwrap_or(false);
    if !over {
        return Err(HomologyError::Input(
            "a right module over the H_par algebra is required".into(),
        ));
    }
    let (dx, dh) = (x.dim(), hp.hopf().dim());

    let phi = global_projection(hp)?;
    let h_left = Module::left_regular(&phi.target).restrict_left(&phi);
    let th = tensor_over_subalgebra(x, &h_left)?;

    let eps_b = counit_character(hp)?.compose(&hp.base().inclusion);
    let k_left = Module::left_regular(&eps_b.target).restrict_left(&eps_b);
    let x_b = x.restrict_right(&hp.base().inclusion);
    let tk = tensor_over_subalgebra(&x_b, &k_left)?;

    let k_one = SVec::unit(1, 0, field);
    let eta_full = SparseMat::from_fn(field, tk.dim(), dx * dh, |col| {
        let (i, t) = (col / dh, col % dh);
        let moved = x.act_right(&SVec::unit(dx, i, field), hp.bracket().col(t));
        tk.pure(&moved, &k_one)
    });
    for rel in th.quot.relations().basis() {
        if !eta_full.apply(rel).is_zero() {
            return Ok(false);
        }
    }
    let eta = eta_full.compose(th.quot.section());

    let h_unit = hp.hopf().algebra().unit();
    let phi_full =
        SparseMat::from_fn(field, th.dim(), dx, |i| th.pure(&SVec::unit(dx, i, field), h_unit));
    for rel in tk.quot.relations().basis() {
        if !phi_full.apply(rel).is_zero() {
            return Ok(false);
        }
    }
    let phi_map = phi_full.compose(tk.quot.section());

    Ok(eta.compose(&phi_map) == SparseMat::identity(field, tk.dim())
        && phi_map.compose(&eta) == SparseMat::identity(field, th.dim()))
}

/// Certificate that H ⊗_{H_par} C'_q is a projective H-module, exhibited by
/// splitting a free cover.
pub fn cprime_h_projective_check(
    hp: &HParAlgebra,
    cp: &CPrimeResolution,
    q: usize,
) -> Result<bool, HomologyError> {
    if cp.side != Side::Left {
        return Err(HomologyError::Input(
            "expects the left-sided iterated tensor resolution".into(),
        ));
    }
    let cq = cp
        .resolution
        .modules
        .get(q)
        .ok_or_else(|| HomologyError::Input(format!("resolution stops before degree {q}")))?;
    let field = hp.field();
    let phi = global_projection(hp)?;
    let kg = phi.target.clone();
    let h_right = Module::right_regular(&kg).restrict_right(&phi);
    let t = tensor_over_subalgebra(&h_right, cq)?;

    let icq = SparseMat::identity(field, cq.dim());
    let mut mats = Vec::with_capacity(kg.dim());
    for i in 0..kg.dim() {
        let amb = kg.left_mult_operator(&SVec::unit(kg.dim(), i, field)).kron(&icq);
        if !descends_to_quotients(&amb, &t.quot, &t.quot) {
            return Err(HomologyError::Descent(
                "left multiplication does not respect the H_par balancing".into(),
            ));
        }
        mats.push(induced_on_quotients(&amb, &t.quot, &t.quot));
    }
    let module = Module::left(kg, mats)?;
    Ok(left_module_splitting(&module)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{field_algebra, matrix_algebra, product_algebra, truncated_polynomial};
    use crate::partial::restrict_global_action;

    const Q: FieldSpec = FieldSpec::Rational;
    const F2: FieldSpec = FieldSpec::Prime(2);
    const F3: FieldSpec = FieldSpec::Prime(3);

    fn cyclic_action(
        order: usize,
        field: FieldSpec,
        a: Arc<FiniteAlgebra>,
        lambda: SparseMat,
    ) -> Arc<PartialActionData> {
        let h = Arc::new(group_algebra(&GroupTable::cyclic(order), field).unwrap());
        Arc::new(PartialActionData::new(h, a, lambda).unwrap())
    }

    fn trivial_action(field: FieldSpec) -> Arc<PartialActionData> {
        let h = Arc::new(group_algebra(&GroupTable::trivial(), field).unwrap());
        Arc::new(PartialActionData::new(h, field_algebra(field), SparseMat::identity(field, 1)).unwrap())
    }

    /// Z/2 swapping the factors of K×K (global).
    fn swap_action(field: FieldSpec) -> Arc<PartialActionData> {
        let lambda = SparseMat::from_dense(field, &[vec![1, 0, 0, 1], vec![0, 1, 1, 0]]);
        cyclic_action(2, field, product_algebra(field, 2), lambda)
    }

    /// Z/4 shifting K⁴ cyclically, restricted to the ideal spanned by the
    /// first two idempotents.
    fn restricted_shift_action(field: FieldSpec) -> Arc<PartialActionData> {
        let lambda = SparseMat::from_fn(field, 4, 16, |col| {
            let (g, i) = (col / 4, col % 4);
            SVec::unit(4, (i + g) % 4, field)
        });
        let global = cyclic_action(4, field, product_algebra(field, 4), lambda);
        let u = SVec::from_entries(4, vec![(0, field.one()), (1, field.one())]);
        Arc::new(restrict_global_action(&global, &u).unwrap())
    }

    /// Z/2 acting on K with g·a = 0; the smash product collapses to dim 1.
    fn collapsing_action(field: FieldSpec) -> Arc<PartialActionData> {
        let lambda = SparseMat::from_dense(field, &[vec![1, 0]]);
        cyclic_action(2, field, field_algebra(field), lambda)
    }

    #[test]
    fn hochschild_homology_of_the_ground_field() {
        let a = field_algebra(Q);
        let t = hochschild_homology(&a, &Module::regular_bimodule(&a), 2).unwrap();
        assert_eq!(t.dims, vec![1, 0, 0]);
        assert_eq!(t.degrees(), 0..3);
    }

    #[test]
    fn hochschild_homology_of_the_matrix_algebra() {
        let a = matrix_algebra(Q, 2);
        let t = hochschild_homology(&a, &Module::regular_bimodule(&a), 2).unwrap();
        assert_eq!(t.dims, vec![1, 0, 0]);
    }

    #[test]
    fn hochschild_homology_of_the_dual_numbers() {
        let a = truncated_polynomial(Q, 2);
        let t = hochschild_homology(&a, &Module::regular_bimodule(&a), 2).unwrap();
        assert_eq!(t.dims, vec![2, 1, 1]);
    }

    #[test]
    fn hochschild_cohomology_of_the_ground_field_counts_the_coefficients() {
        let a = field_algebra(Q);
        let i2 = SparseMat::identity(Q, 2);
        let m = Module::bimodule(a.clone(), vec![i2.clone()], a.clone(), vec![i2]).unwrap();
        let t = hochschild_cohomology(&a, &m, 2).unwrap();
        assert_eq!(t.dims, vec![2, 0, 0]);
    }

    #[test]
    fn hochschild_cohomology_of_the_matrix_algebra() {
        let a = matrix_algebra(Q, 2);
        let t = hochschild_cohomology(&a, &Module::regular_bimodule(&a), 2).unwrap();
        assert_eq!(t.dims, vec![1, 0, 0]);
    }

    #[test]
    fn hochschild_cohomology_of_the_product_algebra() {
        let a = product_algebra(Q, 2);
        let t = hochschild_cohomology(&a, &Module::regular_bimodule(&a), 2).unwrap();
        assert_eq!(t.dims, vec![2, 0, 0]);
    }

    #[test]
    fn partial_tor_of_the_free_module_is_concentrated_in_degree_zero() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), Q).unwrap();
        let m = Module::left_regular(hp.algebra());
        let expected0 = tensor_over_subalgebra(&hpar_module_b_right(&hp).unwrap(), &m)
            .unwrap()
            .dim();
        let t = partial_tor(&hp, &m, 2).unwrap();
        assert_eq!(t.dims, vec![expected0, 0, 0]);
    }

    #[test]
    fn partial_tor_matches_group_homology_mod_two() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), F2).unwrap();
        let m = trivial_hpar_module(&hp).unwrap();
        let t = partial_tor(&hp, &m, 3).unwrap();
        assert_eq!(t.dims, vec![1, 1, 1, 1]);
    }

    #[test]
    fn partial_tor_of_the_trivial_module_in_characteristic_zero() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), Q).unwrap();
        let m = trivial_hpar_module(&hp).unwrap();
        let t = partial_tor(&hp, &m, 3).unwrap();
        assert_eq!(t.dims, vec![1, 0, 0, 0]);
    }

    #[test]
    fn partial_ext_over_the_trivial_group_counts_base_maps() {
        let hp = build_kpar_group(&GroupTable::trivial(), Q).unwrap();
        let m = trivial_hpar_module(&hp).unwrap();
        let t = partial_ext(&hp, &m, 2).unwrap();
        assert_eq!(t.dims, vec![1, 0, 0]);
    }

    #[test]
    fn partial_ext_matches_group_cohomology_mod_two() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), F2).unwrap();
        let m = trivial_hpar_module(&hp).unwrap();
        let t = partial_ext(&hp, &m, 3).unwrap();
        assert_eq!(t.dims, vec![1, 1, 1, 1]);
    }

    #[test]
    fn partial_ext_of_the_trivial_module_in_characteristic_zero() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), Q).unwrap();
        let m = trivial_hpar_module(&hp).unwrap();
        let t = partial_ext(&hp, &m, 3).unwrap();
        assert_eq!(t.dims, vec![1, 0, 0, 0]);
    }

    #[test]
    fn tensor_iso_check_on_the_trivial_action() {
        let pa = trivial_action(Q);
        let smash = smash_product(&pa).unwrap();
        let m = Module::regular_bimodule(&smash.algebra);
        assert!(f2f1_iso_check(&pa, &m).unwrap());
    }

    #[test]
    fn tensor_iso_check_on_the_global_swap_action() {
        let pa = swap_action(Q);
        let smash = smash_product(&pa).unwrap();
        let m = Module::regular_bimodule(&smash.algebra);
        assert!(f2f1_iso_check(&pa, &m).unwrap());
    }

    #[test]
    fn tensor_iso_check_on_the_restricted_shift_action() {
        let pa = restricted_shift_action(Q);
        let smash = smash_product(&pa).unwrap();
        let m = Module::regular_bimodule(&smash.algebra);
        assert!(f2f1_iso_check(&pa, &m).unwrap());
    }

    #[test]
    fn hom_iso_check_on_the_trivial_action() {
        let pa = trivial_action(Q);
        let smash = smash_product(&pa).unwrap();
        let m = Module::regular_bimodule(&smash.algebra);
        assert!(g2g1_iso_check(&pa, &m).unwrap());
    }

    #[test]
    fn hom_iso_check_on_the_global_swap_action() {
        let pa = swap_action(Q);
        let smash = smash_product(&pa).unwrap();
        let m = Module::regular_bimodule(&smash.algebra);
        assert!(g2g1_iso_check(&pa, &m).unwrap());
    }

    #[test]
    fn hom_iso_check_on_the_restricted_shift_action() {
        let pa = restricted_shift_action(Q);
        let smash = smash_product(&pa).unwrap();
        let m = Module::regular_bimodule(&smash.algebra);
        assert!(g2g1_iso_check(&pa, &m).unwrap());
    }

    #[test]
    fn degenerate_smash_products_are_first_class() {
        let pa = collapsing_action(Q);
        let smash = smash_product(&pa).unwrap();
        assert_eq!(smash.dim(), 1);
        let m = Module::regular_bimodule(&smash.algebra);
        assert!(f2f1_iso_check(&pa, &m).unwrap());
        assert!(g2g1_iso_check(&pa, &m).unwrap());
        let t = hochschild_homology(&smash.algebra, &m, 2).unwrap();
        assert_eq!(t.dims, vec![1, 0, 0]);
    }

    fn trivial_group_module(order: usize, field: FieldSpec) -> (GroupTable, Module) {
        let g = GroupTable::cyclic(order);
        let hopf = group_algebra(&g, field).unwrap();
        let kg = hopf.algebra().clone();
        let one = SparseMat::identity(field, 1);
        let m = Module::left(kg, vec![one; order]).unwrap();
        (g, m)
    }

    #[test]
    fn global_comparison_for_the_two_element_group_mod_two() {
        let (g, x) = trivial_group_module(2, F2);
        let (partial, classical, equal) = global_comparison(&g, &x, 3).unwrap();
        assert_eq!(partial.dims, vec![1, 1, 1, 1]);
        assert_eq!(classical.dims, vec![1, 1, 1, 1]);
        assert!(equal);
    }

    #[test]
    fn global_comparison_for_the_three_element_group_mod_three() {
        let (g, x) = trivial_group_module(3, F3);
        let (partial, classical, equal) = global_comparison(&g, &x, 3).unwrap();
        assert_eq!(partial.dims, vec![1, 1, 1, 1]);
        assert_eq!(classical.dims, vec![1, 1, 1, 1]);
        assert!(equal);
    }

    #[test]
    fn global_comparison_in_characteristic_zero() {
        let (g, x) = trivial_group_module(2, Q);
        let (partial, classical, equal) = global_comparison(&g, &x, 3).unwrap();
        assert_eq!(partial.dims, vec![1, 0, 0, 0]);
        assert_eq!(classical.dims, vec![1, 0, 0, 0]);
        assert!(equal);
    }

    #[test]
    fn eta_and_phi_invert_on_iterated_tensor_terms() {
        for field in [Q, F2] {
            let hp = build_kpar_group(&GroupTable::cyclic(2), field).unwrap();
            let cp = cprime_resolution(&hp, 2, Side::Right).unwrap();
            for x in &cp.resolution.modules {
                assert!(ho_b_functors_check(&hp, x).unwrap());
            }
            assert!(ho_b_functors_check(&hp, &Module::right_regular(hp.algebra())).unwrap());
        }
    }

    #[test]
    fn iterated_tensor_terms_are_projective_over_the_group_algebra() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), F2).unwrap();
        let cp = cprime_resolution(&hp, 2, Side::Left).unwrap();
        for q in 0..=2 {
            assert!(cprime_h_projective_check(&hp, &cp, q).unwrap());
        }
    }

    #[test]
    fn homology_tables_serialize_with_the_documented_keys() {
        let t = HomologyTable { label: "demo".into(), field: F2, dims: vec![1, 1] };
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, vec!["dims", "field", "label"]);
        assert_eq!(obj["dims"], serde_json::json!([1, 1]));
        assert_eq!(obj["label"], serde_json::json!("demo"));
    }

    #[test]
    fn mismatched_modules_are_rejected() {
        let a = field_algebra(Q);
        let b = product_algebra(Q, 2);
        let m = Module::regular_bimodule(&b);
        assert!(matches!(hochschild_homology(&a, &m, 1), Err(HomologyError::Input(_))));

        let hp = build_kpar_group(&GroupTable::cyclic(2), Q).unwrap();
        let right_only = Module::right_regular(hp.algebra());
        assert!(matches!(partial_tor(&hp, &right_only, 1), Err(HomologyError::Input(_))));
    }
}
