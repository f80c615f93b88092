//! Fixture corpus: JSON fixture documents, the built-in examples, and the
//! builders that turn a parsed document into validated objects. A fixture
//! pins a field, a group, a coefficient algebra, a partial action, and a
//! coefficient bimodule over the smash product; everything downstream
//! (axiom reports, homology tables, spectral sequences) is computed from
//! the built form.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    field_algebra, product_algebra, truncated_polynomial, AlgebraError, AlgebraHom,
    FiniteAlgebra, Module,
};
use crate::field::FieldSpec;
use crate::hopf::{group_algebra, GroupTable, HopfData};
use crate::hpar::{b_partial_action, build_kpar_group, HParAlgebra};
use crate::linalg::{SVec, SparseMat};
use crate::partial::{restrict_global_action, smash_product, PartialActionData, SmashAlgebra};

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    /// The document does not parse or its shapes are inconsistent. Maps to
    /// the "input error" exit path.
    #[error("fixture input error: {0}")]
    Input(String),
    /// A validated constructor rejected the content. Carries the library
    /// diagnostic (often an axiom witness).
    #[error("fixture build error: {0}")]
    Build(String),
}

fn build_err(e: impl std::fmt::Display) -> FixtureError {
    FixtureError::Build(e.to_string())
}

// ---------------------------------------------------------------------------
// The document format. One JSON object per fixture.
// ---------------------------------------------------------------------------

/// A fixture document. `field` uses the CLI notation (`q`, `f2`, `f3`, ...).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureSpec {
    pub name: String,
    pub field: String,
    pub group: GroupSpec,
    pub algebra: AlgebraSpec,
    pub action: ActionSpec,
    pub module: ModuleSpec,
    #[serde(default)]
    pub bounds: Bounds,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    /// Z/n, element i standing for g^i.
    Cyclic(usize),
    /// Explicit multiplication table (row i, column j holds i*j).
    Table { identity: usize, mult: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// The ground field as a one-dimensional algebra.
    Field,
    /// K x ... x K with n orthogonal idempotent coordinates.
    Product(usize),
    /// K[t]/(t^n).
    Truncated(usize),
    /// The base subalgebra of the partial group algebra of the fixture's
    /// group. Only valid together with the `b-action` action kind.
    Base,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ActionSpec {
    /// Raw action matrix: one dim(A) x dim(A) integer block per group
    /// element, block h column j holding h . e_j in coordinates. Parsed
    /// without validation so the axiom checker can report witnesses.
    Lambda(Vec<Vec<Vec<i64>>>),
    /// Global action of a cyclic group permuting the coordinates of a
    /// product algebra; g^k acts by the k-th power of `generator`. An
    /// optional `restriction` lists the coordinates of a central idempotent
    /// u, restricting the global action to the unital ideal uA.
    Permutation {
        generator: Vec<usize>,
        #[serde(default)]
        restriction: Option<Vec<usize>>,
    },
    /// The canonical partial action of the group algebra on the base
    /// subalgebra of its partial group algebra (the action whose smash
    /// product is the partial group algebra itself).
    #[serde(rename = "b-action")]
    BAction,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ModuleSpec {
    /// The smash product as a bimodule over itself.
    Regular,
    /// The one-dimensional bimodule through the counit character of the
    /// smash product. Requires a one-dimensional coefficient algebra.
    Trivial,
    /// Explicit action matrices over the smash product: one dim(M) x dim(M)
    /// integer block per smash basis element, on each side.
    Explicit { left: Vec<Vec<Vec<i64>>>, right: Vec<Vec<Vec<i64>>> },
}

/// Homological caps: `max_degree` bounds homology tables, `p`/`q` bound the
/// spectral window.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub max_degree: usize,
    pub p: usize,
    pub q: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_degree: 2, p: 2, q: 2 }
    }
}

pub fn parse_fixture(json: &str) -> Result<FixtureSpec, FixtureError> {
    serde_json::from_str(json).map_err(|e| FixtureError::Input(e.to_string()))
}

pub fn fixture_to_json(spec: &FixtureSpec) -> String {
    serde_json::to_string_pretty(spec).expect("fixture serializes")
}

// ---------------------------------------------------------------------------
// Built-in corpus.
// ---------------------------------------------------------------------------

pub const BUILTIN_NAMES: [&str; 6] =
    ["trivial", "z2-zero", "z2-swap-global", "z4-restricted", "z3-B-action", "z2-f2-trivial"];

/// The built-in fixture with the given name, if any.
pub fn builtin_fixture(name: &str) -> Option<FixtureSpec> {
    let fx = |field: &str, group, algebra, action, module| FixtureSpec {
        name: name.to_string(),
        field: field.to_string(),
        group,
        algebra,
        action,
        module,
        bounds: Bounds::default(),
    };
    match name {
        "trivial" => Some(fx(
            "q",
            GroupSpec::Cyclic(1),
            AlgebraSpec::Field,
            ActionSpec::Lambda(vec![vec![vec![1]]]),
            ModuleSpec::Regular,
        )),
        "z2-zero" => Some(fx(
            "q",
            GroupSpec::Cyclic(2),
            AlgebraSpec::Field,
            ActionSpec::Lambda(vec![vec![vec![1]], vec![vec![0]]]),
            ModuleSpec::Regular,
        )),
        "z2-swap-global" => Some(fx(
            "q",
            GroupSpec::Cyclic(2),
            AlgebraSpec::Product(2),
            ActionSpec::Permutation { generator: vec![1, 0], restriction: None },
            ModuleSpec::Regular,
        )),
        "z4-restricted" => Some(fx(
            "q",
            GroupSpec::Cyclic(4),
            AlgebraSpec::Product(4),
            ActionSpec::Permutation { generator: vec![1, 2, 3, 0], restriction: Some(vec![0, 1]) },
            ModuleSpec::Regular,
        )),
        "z3-B-action" => Some(fx(
            "q",
            GroupSpec::Cyclic(3),
            AlgebraSpec::Base,
            ActionSpec::BAction,
            ModuleSpec::Regular,
        )),
        "z2-f2-trivial" => Some(fx(
            "f2",
            GroupSpec::Cyclic(2),
            AlgebraSpec::Field,
            ActionSpec::Lambda(vec![vec![vec![1]], vec![vec![1]]]),
            ModuleSpec::Trivial,
        )),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Builders. `RawFixture` stops before the action is validated so the axiom
// checker can run on corrupted input and report witnesses; `BuiltFixture`
// is the fully validated form every computation consumes.
// ---------------------------------------------------------------------------

/// Parsed and shaped, but the action matrix is not yet validated.
pub struct RawFixture {
    pub spec: FixtureSpec,
    pub field: FieldSpec,
    pub group: GroupTable,
    pub hopf: Arc<HopfData>,
    /// The algebra the action matrix acts on (the restricted ideal for a
    /// restricted permutation action).
    pub coeff: Arc<FiniteAlgebra>,
    pub lambda: SparseMat,
    /// Present when the action kind already forced the partial group
    /// algebra to be built (reused downstream).
    pub hp: Option<HParAlgebra>,
}

/// Fully validated fixture.
pub struct BuiltFixture {
    pub spec: FixtureSpec,
    pub field: FieldSpec,
    pub group: GroupTable,
    pub hopf: Arc<HopfData>,
    pub action: Arc<PartialActionData>,
    pub smash: SmashAlgebra,
    pub module: Module,
    pub hp: HParAlgebra,
    pub bounds: Bounds,
}

fn group_of(spec: &GroupSpec) -> Result<GroupTable, FixtureError> {
    match spec {
        GroupSpec::Cyclic(0) => Err(FixtureError::Input("cyclic group of order 0".into())),
        GroupSpec::Cyclic(n) => Ok(GroupTable::cyclic(*n)),
        GroupSpec::Table { identity, mult } => {
            let n = mult.len();
            let in_range = mult.iter().all(|row| row.len() == n && row.iter().all(|&v| v < n));
            if n == 0 || !in_range || *identity >= n {
                return Err(FixtureError::Input("malformed group table".into()));
            }
            let inverse: Vec<usize> = (0..n)
                .map(|i| {
                    (0..n).find(|&j| mult[i][j] == *identity && mult[j][i] == *identity).ok_or_else(
                        || FixtureError::Input(format!("element {i} has no inverse")),
                    )
                })
                .collect::<Result<_, _>>()?;
            GroupTable::new(n, *identity, mult.clone(), inverse).map_err(build_err)
        }
    }
}

fn plain_algebra_of(
    spec: &AlgebraSpec,
    field: FieldSpec,
) -> Result<Arc<FiniteAlgebra>, FixtureError> {
    match spec {
        AlgebraSpec::Field => Ok(field_algebra(field)),
        AlgebraSpec::Product(n) if *n >= 1 => Ok(product_algebra(field, *n)),
        AlgebraSpec::Truncated(n) if *n >= 1 => Ok(truncated_polynomial(field, *n)),
        _ => Err(FixtureError::Input("algebra size must be at least 1".into())),
    }
}

/// Dense integer blocks (one per outer index) to a flat block matrix with
/// column h*dim + j holding block h column j.
fn blocks_to_matrix(
    field: FieldSpec,
    blocks: &[Vec<Vec<i64>>],
    outer: usize,
    dim: usize,
    what: &str,
) -> Result<SparseMat, FixtureError> {
    if blocks.len() != outer
        || blocks.iter().any(|b| b.len() != dim || b.iter().any(|row| row.len() != dim))
    {
        return Err(FixtureError::Input(format!(
            "{what}: expected {outer} dense blocks of size {dim}x{dim}"
        )));
    }
    Ok(SparseMat::from_fn(field, dim, outer * dim, |col| {
        let (h, j) = (col / dim, col % dim);
        let entries: Vec<i64> = (0..dim).map(|i| blocks[h][i][j]).collect();
        SVec::from_dense(field, &entries)
    }))
}

/// Stage one: resolve field, group, Hopf data, coefficient algebra, and the
/// action matrix, without validating the partial-action axioms.
pub fn raw_fixture(
    spec: &FixtureSpec,
    field_override: Option<FieldSpec>,
) -> Result<RawFixture, FixtureError> {
    let field = match field_override {
        Some(f) => f,
        None => FieldSpec::parse(&spec.field).map_err(|e| FixtureError::Input(e.to_string()))?,
    };
    let group = group_of(&spec.group)?;
    let hopf = Arc::new(group_algebra(&group, field).map_err(build_err)?);
    let dh = hopf.dim();

    let (coeff, lambda, hp) = match &spec.action {
        ActionSpec::Lambda(blocks) => {
            let coeff = plain_algebra_of(&spec.algebra, field)?;
            let lambda = blocks_to_matrix(field, blocks, dh, coeff.dim(), "action matrix")?;
            (coeff, lambda, None)
        }
        ActionSpec::Permutation { generator, restriction } => {
            let n = match spec.algebra {
                AlgebraSpec::Product(n) => n,
                _ => {
                    return Err(FixtureError::Input(
                        "a permutation action needs a product coefficient algebra".into(),
                    ))
                }
            };
            let order = match spec.group {
                GroupSpec::Cyclic(m) => m,
                _ => {
                    return Err(FixtureError::Input(
                        "a permutation action needs a cyclic group".into(),
                    ))
                }
            };
            let mut seen = vec![false; n];
            for &img in generator {
                if img >= n || seen[img] {
                    return Err(FixtureError::Input("generator is not a permutation".into()));
                }
                seen[img] = true;
            }
            if generator.len() != n {
                return Err(FixtureError::Input("generator is not a permutation".into()));
            }
            // power[k][j] = sigma^k(j)
            let mut powers = vec![(0..n).collect::<Vec<usize>>()];
            for k in 1..order {
                let prev = &powers[k - 1];
                powers.push((0..n).map(|j| generator[prev[j]]).collect());
            }
            if (0..n).any(|j| generator[powers[order - 1][j]] != j) {
                return Err(FixtureError::Input(format!(
                    "generator order does not divide the group order {order}"
                )));
            }
            let coeff = product_algebra(field, n);
            let lambda = SparseMat::from_fn(field, n, order * n, |col| {
                let (h, j) = (col / n, col % n);
                SVec::unit(n, powers[h][j], field)
            });
            match restriction {
                None => (coeff, lambda, None),
                Some(coords) => {
                    if coords.is_empty() || coords.iter().any(|&c| c >= n) {
                        return Err(FixtureError::Input(
                            "restriction coordinates out of range".into(),
                        ));
                    }
                    let global = PartialActionData::new(hopf.clone(), coeff, lambda)
                        .map_err(build_err)?;
                    let u = SVec::from_entries(
                        n,
                        coords.iter().map(|&c| (c, field.one())).collect(),
                    );
                    let restricted = restrict_global_action(&global, &u).map_err(build_err)?;
                    (restricted.algebra().clone(), restricted.lambda().clone(), None)
                }
            }
        }
        ActionSpec::BAction => {
            if !matches!(spec.algebra, AlgebraSpec::Base) {
                return Err(FixtureError::Input(
                    "the b-action kind requires the base coefficient algebra".into(),
                ));
            }
            let hp = build_kpar_group(&group, field).map_err(build_err)?;
            let pa = b_partial_action(&hp).map_err(build_err)?;
            (pa.algebra().clone(), pa.lambda().clone(), Some(hp))
        }
    };

    Ok(RawFixture { spec: spec.clone(), field, group, hopf, coeff, lambda, hp })
}

/// The counit character of a smash product over a one-dimensional
/// coefficient algebra, as a validated algebra map onto the ground field.
fn smash_counit_character(smash: &SmashAlgebra) -> Result<AlgebraHom, AlgebraError> {
    let hopf = smash.action.hopf();
    let field = smash.algebra.field();
    // Ambient index of A (x) H is a*dim(H) + h; dim(A) = 1 collapses it to h.
    let char_matrix = hopf.counit().compose(&smash.space.basis_mat());
    AlgebraHom::new(smash.algebra.clone(), field_algebra(field), char_matrix)
}

/// The fixture's coefficient bimodule over the smash product. Content
/// failures (non-axiomatic matrices, a counit that is not a character) come
/// back as `AlgebraError` so callers can surface them as check witnesses.
pub fn module_of(
    smash: &SmashAlgebra,
    spec: &ModuleSpec,
) -> Result<Result<Module, AlgebraError>, FixtureError> {
    let field = smash.algebra.field();
    let ds = smash.algebra.dim();
    match spec {
        ModuleSpec::Regular => Ok(Ok(Module::regular_bimodule(&smash.algebra))),
        ModuleSpec::Trivial => {
            if smash.action.dim_a() != 1 {
                return Err(FixtureError::Input(
                    "the trivial module needs a one-dimensional coefficient algebra".into(),
                ));
            }
            Ok(smash_counit_character(smash).and_then(|eps| {
                let act: Vec<SparseMat> = (0..ds)
                    .map(|i| SparseMat::from_cols(field, 1, vec![eps.matrix.col(i).clone()]))
                    .collect();
                Module::bimodule(smash.algebra.clone(), act.clone(), smash.algebra.clone(), act)
            }))
        }
        ModuleSpec::Explicit { left, right } => {
            let dm = left.first().map(|b| b.len()).unwrap_or(0);
            if dm == 0 {
                return Err(FixtureError::Input("explicit module has no dimension".into()));
            }
            let lmat = blocks_to_matrix(field, left, ds, dm, "left module matrices")?;
            let rmat = blocks_to_matrix(field, right, ds, dm, "right module matrices")?;
            let block = |m: &SparseMat, h: usize| {
                SparseMat::from_fn(field, dm, dm, |j| m.col(h * dm + j).clone())
            };
            let lact: Vec<SparseMat> = (0..ds).map(|h| block(&lmat, h)).collect();
            let ract: Vec<SparseMat> = (0..ds).map(|h| block(&rmat, h)).collect();
            Ok(Module::bimodule(smash.algebra.clone(), lact, smash.algebra.clone(), ract))
        }
    }
}

/// Stage two: validate the action, build the smash product, the coefficient
/// module, and the partial group algebra.
pub fn build_fixture(
    spec: &FixtureSpec,
    field_override: Option<FieldSpec>,
) -> Result<BuiltFixture, FixtureError> {
    let raw = raw_fixture(spec, field_override)?;
    let RawFixture { spec, field, group, hopf, coeff, lambda, hp } = raw;
    let action =
        Arc::new(PartialActionData::new(hopf.clone(), coeff, lambda).map_err(build_err)?);
    let smash = smash_product(&action).map_err(build_err)?;
    let module = module_of(&smash, &spec.module)?.map_err(build_err)?;
    let hp = match hp {
        Some(hp) => hp,
        None => build_kpar_group(&group, field).map_err(build_err)?,
    };
    let bounds = spec.bounds;
    Ok(BuiltFixture { spec, field, group, hopf, action, smash, module, hp, bounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial::check_partial_action_raw;

    #[test]
    fn builtins_parse_round_trip() {
        for name in BUILTIN_NAMES {
            let spec = builtin_fixture(name).expect("builtin exists");
            let json = fixture_to_json(&spec);
            let back = parse_fixture(&json).expect("round trip parses");
            assert_eq!(fixture_to_json(&back), json, "{name} round trip");
        }
        assert!(builtin_fixture("no-such-fixture").is_none());
    }

    #[test]
    fn builtins_build_with_expected_shapes() {
        let dims: Vec<(usize, usize, usize)> = BUILTIN_NAMES
            .iter()
            .map(|name| {
                let spec = builtin_fixture(name).unwrap();
                let b = build_fixture(&spec, None).unwrap();
                (b.action.dim_a(), b.smash.algebra.dim(), b.module.dim())
            })
            .collect();
        // (dim A, dim A#H, dim M) per corpus entry; the restricted fixture
        // acts on the two-coordinate ideal, the b-action smash is the whole
        // partial group algebra.
        assert_eq!(
            dims,
            vec![(1, 1, 1), (1, 1, 1), (2, 4, 4), (2, 4, 4), (4, 8, 8), (1, 2, 1)]
        );
    }

    #[test]
    fn z3_b_action_smash_is_the_partial_group_algebra() {
        let spec = builtin_fixture("z3-B-action").unwrap();
        let b = build_fixture(&spec, None).unwrap();
        assert_eq!(b.smash.algebra.dim(), b.hp.dim());
        assert_eq!(b.action.dim_a(), b.hp.base().algebra.dim());
    }

    #[test]
    fn field_override_replaces_the_document_field() {
        let spec = builtin_fixture("z2-swap-global").unwrap();
        let b = build_fixture(&spec, Some(FieldSpec::Prime(2))).unwrap();
        assert_eq!(b.field, FieldSpec::Prime(2));
        assert_eq!(b.smash.algebra.field(), FieldSpec::Prime(2));
    }

    #[test]
    fn corrupted_lambda_reaches_the_axiom_checker_with_a_witness() {
        let mut spec = builtin_fixture("z2-zero").unwrap();
        // g . 1 = 1 but g then fails to act compatibly: use a non-idempotent
        // value 2 so PA axioms must fail.
        spec.action = ActionSpec::Lambda(vec![vec![vec![1]], vec![vec![2]]]);
        let raw = raw_fixture(&spec, None).unwrap();
        let report = check_partial_action_raw(&raw.hopf, &raw.coeff, &raw.lambda).unwrap();
        assert!(!report.all_passed());
        let failure = report.first_failure().unwrap();
        assert!(failure.counterexample.is_some(), "witness recorded");
    }

    #[test]
    fn trivial_module_rejects_higher_dimensional_coefficients() {
        let mut spec = builtin_fixture("z2-swap-global").unwrap();
        spec.module = ModuleSpec::Trivial;
        match build_fixture(&spec, None) {
            Err(FixtureError::Input(_)) => {}
            other => panic!("expected an input error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn permutation_order_mismatch_is_an_input_error() {
        let mut spec = builtin_fixture("z2-swap-global").unwrap();
        // A 3-cycle does not square to the identity.
        spec.algebra = AlgebraSpec::Product(3);
        spec.action = ActionSpec::Permutation { generator: vec![1, 2, 0], restriction: None };
        assert!(matches!(raw_fixture(&spec, None), Err(FixtureError::Input(_))));
    }
}
