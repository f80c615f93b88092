//! Chain complexes and resolutions with verified structure. Every
//! constructor checks the identities that make the object what it claims to
//! be (d² = 0, simplicial face relations, contracting homotopies, linearity
//! of differentials over the acting algebra) and returns an error instead of
//! an unverified complex. Homology dimensions are computed by exact rank
//! arithmetic, intersecting image with kernel so that the answer stays
//! meaningful even on complexes that barely qualify.

use crate::algebra::{
    bimodule_to_left_env, enveloping, separability_idempotent, tensor_over_subalgebra,
    AlgebraError, FiniteAlgebra, Module, Side,
};
use crate::field::{FieldSpec, Scalar};
use crate::hpar::{twist_left_to_right, HParAlgebra, HparError};
use crate::linalg::{
    descends_to_quotients, induced_on_quotients, quotient_by_span, rank, rank_kernel_image, solve,
    LinalgError, Quotient, SVec, Solver, SparseMat, Subspace,
};
use crate::partial::hpar_module_b_left;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum ResolutionError {
    #[error("shape: {0}")]
    Shape(String),
    #[error("differential does not square to zero at degree {0}")]
    NotAComplex(usize),
    #[error("map at degree {degree} is not linear over algebra basis element {basis}")]
    NotLinear { degree: usize, basis: usize },
    #[error("operator does not descend: {0}")]
    Descent(String),
    #[error("simplicial identity fails at level {q} for face pair ({i},{j})")]
    Simplicial { q: usize, i: usize, j: usize },
    #[error("contracting homotopy identity fails at degree {0}")]
    Homotopy(usize),
    #[error("augmentation: {0}")]
    Augmentation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Hpar(#[from] HparError),
}

/// Whether differentials lower or raise the degree index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Homological,
    Cohomological,
}

/// A bounded complex of finite dimensional spaces. For the homological
/// direction maps[q] sends degree q+1 to degree q; for the cohomological
/// direction maps[q] sends degree q to degree q+1.
#[derive(Clone)]
pub struct ChainComplex {
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    pub maps: Vec<SparseMat>,
    pub direction: Direction,
}

impl ChainComplex {
    pub fn new(
        field: FieldSpec,
        dims: Vec<usize>,
        maps: Vec<SparseMat>,
        direction: Direction,
    ) -> Result<Self, ResolutionError> {
        if dims.is_empty() {
            return Err(ResolutionError::Shape("complex needs at least one degree".into()));
        }
        if maps.len() + 1 != dims.len() {
            return Err(ResolutionError::Shape(format!(
                "complex with {} degrees needs {} maps, got {}",
                dims.len(),
                dims.len() - 1,
                maps.len()
            )));
        }
        for (q, f) in maps.iter().enumerate() {
            let (src, dst) = match direction {
                Direction::Homological => (dims[q + 1], dims[q]),
                Direction::Cohomological => (dims[q], dims[q + 1]),
            };
            if f.rows() != dst || f.ncols() != src {
                return Err(ResolutionError::Shape(format!(
                    "map {} is {}x{}, expected {}x{}",
                    q,
                    f.rows(),
                    f.ncols(),
                    dst,
                    src
                )));
            }
        }
        for q in 0..maps.len().saturating_sub(1) {
            let square = match direction {
                Direction::Homological => maps[q].compose(&maps[q + 1]),
                Direction::Cohomological => maps[q + 1].compose(&maps[q]),
            };
            if !square.is_zero() {
                return Err(ResolutionError::NotAComplex(q));
            }
        }
        Ok(ChainComplex { field, dims, maps, direction })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Homology (or cohomology) dimension in every degree. The image is
    /// intersected with the kernel before subtracting, so degenerate inputs
    /// cannot push the count below zero.
    pub fn homology_dims(&self) -> Vec<usize> {
        let l = self.dims.len();
        (0..l)
            .map(|q| {
                let (outgoing, incoming) = match self.direction {
                    Direction::Homological => (
                        if q >= 1 { Some(&self.maps[q - 1]) } else { None },
                        if q + 1 < l { Some(&self.maps[q]) } else { None },
                    ),
                    Direction::Cohomological => (
                        if q + 1 < l { Some(&self.maps[q]) } else { None },
                        if q >= 1 { Some(&self.maps[q - 1]) } else { None },
                    ),
                };
                let ker = match outgoing {
                    Some(f) => rank_kernel_image(f).kernel,
                    None => full_space(self.field, self.dims[q]),
                };
                match incoming {
                    Some(f) => {
                        let im = rank_kernel_image(f).image;
                        ker.dim() - im.intersect(&ker).dim()
                    }
                    None => ker.dim(),
                }
            })
            .collect()
    }
}

fn full_space(field: FieldSpec, dim: usize) -> Subspace {
    Subspace::from_span(field, dim, (0..dim).map(|i| SVec::unit(dim, i, field)).collect())
}

/// A truncated resolution of `target`: the complex of resolving terms, the
/// module structure on each term, and the augmentation map. Homological
/// resolutions augment C_0 -> target; cohomological ones coaugment
/// target -> C^0.
#[derive(Clone)]
pub struct Resolution {
    pub complex: ChainComplex,
    pub augmentation: SparseMat,
    pub modules: Vec<Module>,
    pub target: Module,
}

/// Homology of the augmented complex in every degree where exactness is
/// decidable from a truncation: the target degree and all interior terms.
/// All zeros means the truncation is exact.
pub fn validate_resolution(res: &Resolution) -> Result<Vec<usize>, ResolutionError> {
    let c = &res.complex;
    let mut dims = Vec::with_capacity(c.dims.len() + 1);
    dims.push(res.target.dim());
    dims.extend(c.dims.iter().copied());
    let mut maps = Vec::with_capacity(c.maps.len() + 1);
    maps.push(res.augmentation.clone());
    maps.extend(c.maps.iter().cloned());
    let augmented = ChainComplex::new(c.field, dims, maps, c.direction)?;
    let h = augmented.homology_dims();
    Ok(h[..c.dims.len()].to_vec())
}

const DIM_CAP: usize = 1 << 22;

fn too_large() -> ResolutionError {
    ResolutionError::Shape("resolution term dimension exceeds the supported cap".into())
}

fn upow(base: usize, exp: usize) -> usize {
    let mut v = 1usize;
    for _ in 0..exp {
        v *= base;
    }
    v
}

/// Normalized bar resolution of a left module: B_q = R ⊗ W^{⊗q} ⊗ M with
/// W = R / K·1. Terms are free left R-modules; exactness is certified by the
/// prepend-the-unit contracting homotopy.
pub fn bar_resolution(
    r: &Arc<FiniteAlgebra>,
    m: &Module,
    n: usize,
) -> Result<Resolution, ResolutionError> {
    bar_core(r, m, n, true, false)
}

/// Unnormalized variant (W = R). Larger terms, same homology; useful as an
/// independent cross-check of the normalized construction.
pub fn unnormalized_bar_resolution(
    r: &Arc<FiniteAlgebra>,
    m: &Module,
    n: usize,
) -> Result<Resolution, ResolutionError> {
    bar_core(r, m, n, false, false)
}

/// Bar resolution of a bimodule by free modules over the enveloping algebra:
/// B_q = R ⊗ W^{⊗q} ⊗ M with (x⊗y)·(r ⊗ w ⊗ v) = xr ⊗ w ⊗ vy. With M = R
/// this is the standard resolution of the algebra by free bimodules.
pub fn bimodule_bar_resolution(
    r: &Arc<FiniteAlgebra>,
    m: &Module,
    n: usize,
) -> Result<Resolution, ResolutionError> {
    bar_core(r, m, n, true, true)
}

fn bar_core(
    r: &Arc<FiniteAlgebra>,
    m: &Module,
    n: usize,
    normalized: bool,
    env_structure: bool,
) -> Result<Resolution, ResolutionError> {
    let field = r.field();
    let d = r.dim();
    let dm = m.dim();
    match m.left_algebra() {
        Some(alg) if **alg == **r => {}
        _ => {
            return Err(ResolutionError::Shape(
                "bar resolution needs a left module over the given algebra".into(),
            ))
        }
    }
    if env_structure {
        match m.right_algebra() {
            Some(alg) if **alg == **r => {}
            _ => {
                return Err(ResolutionError::Shape(
                    "bimodule bar resolution needs a bimodule over the given algebra".into(),
                ))
            }
        }
    }

    // Reduced tensor factor W with its projection and section.
    let (e, proj_w, sect_w) = if normalized {
        let quot = quotient_by_span(field, d, vec![r.unit().clone()]);
        (quot.dim(), quot.projection().clone(), quot.section().clone())
    } else {
        let id = SparseMat::identity(field, d);
        (d, id.clone(), id)
    };

    let mut dims = Vec::with_capacity(n + 1);
    let mut cur = d.checked_mul(dm).filter(|&v| v <= DIM_CAP).ok_or_else(too_large)?;
    dims.push(cur);
    for _ in 0..n {
        cur = cur.checked_mul(e).filter(|&v| v <= DIM_CAP).ok_or_else(too_large)?;
        dims.push(cur);
    }

    let ident = |k: usize| SparseMat::identity(field, k);
    let unit_vec = |dim: usize, i: usize| SVec::unit(dim, i, field);

    // Structure blocks. Face maps are kron products of these with identities.
    let mult_rw = SparseMat::from_fn(field, d, d * e, |col| {
        let (ri, wi) = (col / e, col % e);
        r.multiply(&unit_vec(d, ri), sect_w.col(wi))
    });
    let mult_ww = SparseMat::from_fn(field, e, e * e, |col| {
        let (i, j) = (col / e, col % e);
        proj_w.apply(&r.multiply(sect_w.col(i), sect_w.col(j)))
    });
    let act_wm = SparseMat::from_fn(field, dm, e * dm, |col| {
        let (wi, x) = (col / dm, col % dm);
        m.act_left(sect_w.col(wi), &unit_vec(dm, x))
    });
    let aug = SparseMat::from_fn(field, dm, d * dm, |col| {
        let (ri, x) = (col / dm, col % dm);
        m.act_left(&unit_vec(d, ri), &unit_vec(dm, x))
    });

    let mut maps = Vec::with_capacity(n);
    for q in 1..=n {
        let mut acc = SparseMat::zero(field, dims[q - 1], dims[q]);
        for i in 0..=q {
            let face = if i == 0 {
                mult_rw.kron(&ident(upow(e, q - 1) * dm))
            } else if i < q {
                ident(d * upow(e, i - 1)).kron(&mult_ww).kron(&ident(upow(e, q - 1 - i) * dm))
            } else {
                ident(d * upow(e, q - 1)).kron(&act_wm)
            };
            acc = if i % 2 == 0 { acc.add(&face) } else { acc.sub(&face) };
        }
        maps.push(acc);
    }

    // Contracting homotopy: prepend the unit and reduce the old leading
    // factor into W.
    let unit_mat = SparseMat::from_cols(field, d, vec![r.unit().clone()]);
    let prepend = unit_mat.kron(&proj_w);
    let eta = unit_mat.kron(&ident(dm));
    if n >= 1 && !aug.compose(&maps[0]).is_zero() {
        return Err(ResolutionError::Augmentation(
            "bar augmentation does not kill the first boundary".into(),
        ));
    }
    for q in 0..n {
        let stepped = maps[q].compose(&prepend.kron(&ident(upow(e, q) * dm)));
        let lower = if q == 0 {
            eta.compose(&aug)
        } else {
            prepend.kron(&ident(upow(e, q - 1) * dm)).compose(&maps[q - 1])
        };
        if stepped.add(&lower) != ident(dims[q]) {
            return Err(ResolutionError::Homotopy(q));
        }
    }

    // Module structure per degree, target, and linearity of the maps.
    let lmats = r.left_mult_mats();
    let (modules, target) = if env_structure {
        let env = enveloping(r);
        let racts = m.right_action().to_vec();
        let mut modules = Vec::with_capacity(n + 1);
        for (q, _) in dims.iter().enumerate() {
            let mid = ident(upow(e, q));
            let mut act = Vec::with_capacity(d * d);
            for lm in lmats.iter() {
                for ra in racts.iter() {
                    act.push(lm.kron(&mid).kron(ra));
                }
            }
            modules.push(Module::left(env.clone(), act)?);
        }
        (modules, bimodule_to_left_env(m, &env)?)
    } else {
        let mut modules = Vec::with_capacity(n + 1);
        for (q, _) in dims.iter().enumerate() {
            let tail = ident(upow(e, q) * dm);
            let act = lmats.iter().map(|lm| lm.kron(&tail)).collect();
            modules.push(Module::left(r.clone(), act)?);
        }
        (modules, m.clone())
    };
    let target_act = target.left_action();
    for (z, t_act) in target_act.iter().enumerate() {
        if aug.compose(&modules[0].left_action()[z]) != t_act.compose(&aug) {
            return Err(ResolutionError::NotLinear { degree: 0, basis: z });
        }
    }
    for q in 1..=n {
        for z in 0..target_act.len() {
            let lhs = maps[q - 1].compose(&modules[q].left_action()[z]);
            let rhs = modules[q - 1].left_action()[z].compose(&maps[q - 1]);
            if lhs != rhs {
                return Err(ResolutionError::NotLinear { degree: q, basis: z });
            }
        }
    }

    let complex = ChainComplex::new(field, dims, maps, Direction::Homological)?;
    Ok(Resolution { complex, augmentation: aug, modules, target })
}

/// Coinduced injective resolution of a left module: I^0 = Hom_K(R, M) with
/// (r·f)(s) = f(sr), embedded via m ↦ (r ↦ r·m), then iterated cokernels.
pub fn coinduced_injective_resolution(
    r: &Arc<FiniteAlgebra>,
    m: &Module,
    n: usize,
) -> Result<Resolution, ResolutionError> {
    let field = r.field();
    let d = r.dim();
    match m.left_algebra() {
        Some(alg) if **alg == **r => {}
        _ => {
            return Err(ResolutionError::Shape(
                "coinduced resolution needs a left module over the given algebra".into(),
            ))
        }
    }
    let rmats = r.right_mult_mats();

    let mut dims = Vec::with_capacity(n + 1);
    let mut maps = Vec::with_capacity(n);
    let mut modules = Vec::with_capacity(n + 1);
    let mut cur_act: Vec<SparseMat> = m.left_action().to_vec();
    let mut cur_dim = m.dim();
    let mut prev_proj: Option<SparseMat> = None;
    let mut augmentation: Option<SparseMat> = None;

    for q in 0..=n {
        let iq = d * cur_dim;
        // Hom_K(R, M_q), vectorized as (s, x) -> s·dim + x; the left action
        // precomposes with right multiplication.
        let act: Vec<SparseMat> = (0..d)
            .map(|z| rmats[z].transpose().kron(&SparseMat::identity(field, cur_dim)))
            .collect();
        let embed = SparseMat::from_fn(field, iq, cur_dim, |x| {
            let mut entries = Vec::new();
            for (s, op) in cur_act.iter().enumerate() {
                for (y, c) in op.col(x).iter() {
                    entries.push((s * cur_dim + y, c.clone()));
                }
            }
            SVec::from_entries(iq, entries)
        });
        match &prev_proj {
            None => augmentation = Some(embed.clone()),
            Some(p) => maps.push(embed.compose(p)),
        }
        modules.push(Module::left(r.clone(), act.clone())?);
        dims.push(iq);
        if q == n {
            break;
        }
        let image_cols: Vec<SVec> = (0..cur_dim).map(|x| embed.col(x).clone()).collect();
        let quot = quotient_by_span(field, iq, image_cols);
        let mut next_act = Vec::with_capacity(d);
        for a in act.iter() {
            if !descends_to_quotients(a, &quot, &quot) {
                return Err(ResolutionError::Descent(
                    "coinduced action does not preserve the embedded image".into(),
                ));
            }
            next_act.push(induced_on_quotients(a, &quot, &quot));
        }
        cur_dim = quot.dim();
        cur_act = next_act;
        prev_proj = Some(quot.projection().clone());
    }

    let augmentation = augmentation.expect("degree zero always runs");
    if rank(&augmentation) != m.dim() {
        return Err(ResolutionError::Augmentation("coinduced embedding is not injective".into()));
    }
    for z in 0..d {
        let lhs = augmentation.compose(&m.left_action()[z]);
        let rhs = modules[0].left_action()[z].compose(&augmentation);
        if lhs != rhs {
            return Err(ResolutionError::NotLinear { degree: 0, basis: z });
        }
    }
    for (q, f) in maps.iter().enumerate() {
        for z in 0..d {
            let lhs = f.compose(&modules[q].left_action()[z]);
            let rhs = modules[q + 1].left_action()[z].compose(f);
            if lhs != rhs {
                return Err(ResolutionError::NotLinear { degree: q + 1, basis: z });
            }
        }
    }
    let complex = ChainComplex::new(field, dims, maps, Direction::Cohomological)?;
    Ok(Resolution { complex, augmentation, modules, target: m.clone() })
}

/// The iterated relative tensor resolution of the base subalgebra B of an
/// HParAlgebra H: C'_0 = H and C'_q = C'_{q-1} ⊗_B H, with the simplicial
/// faces (merge adjacent factors, send the last factor to B through the
/// augmentation) and the prepend-the-unit contracting homotopy. The side
/// selects whether the terms carry their left H-module structure or the
/// involution-twisted right one; the matrices are the same either way.
pub struct CPrimeResolution {
    pub resolution: Resolution,
    /// faces[q-1][i] is the i-th face C'_q -> C'_{q-1}, 0 <= i <= q.
    pub faces: Vec<Vec<SparseMat>>,
    /// homotopy[q] is s_q : C'_q -> C'_{q+1}.
    pub homotopy: Vec<SparseMat>,
    /// quotients[q-1] presents C'_q inside its ambient C'_{q-1} ⊗ H.
    pub quotients: Vec<Quotient>,
    pub side: Side,
}

pub fn cprime_resolution(
    hp: &HParAlgebra,
    n: usize,
    side: Side,
) -> Result<CPrimeResolution, ResolutionError> {
    let field = hp.field();
    let m = hp.dim();
    let halg = hp.algebra();
    let b_alg = hp.base().algebra.clone();
    let nb = b_alg.dim();
    let iota = &hp.base().inclusion;

    // Target: B with the dual partial action of H, and the augmentation
    // psi(x) = x ▷ 1_B.
    let bleft = hpar_module_b_left(hp)?;
    let psi = SparseMat::from_fn(field, nb, m, |x| {
        bleft.module.left_action()[x].apply(b_alg.unit())
    });
    let lmats = halg.left_mult_mats().to_vec();
    let rmats = halg.right_mult_mats().to_vec();
    for z in 0..m {
        if psi.compose(&lmats[z]) != bleft.module.left_action()[z].compose(&psi) {
            return Err(ResolutionError::Augmentation(
                "augmentation is not linear over the acting algebra".into(),
            ));
        }
    }

    // H as a left B-module along the inclusion; reused at every level.
    let y_left = Module::left(
        b_alg.clone(),
        (0..nb).map(|b| halg.left_mult_operator(iota.matrix.col(b))).collect(),
    )?;

    let mut level_dim = vec![m];
    let mut left_ops: Vec<Vec<SparseMat>> = vec![lmats.clone()];
    let mut right_last: Vec<Vec<SparseMat>> = vec![rmats.clone()];
    let mut faces_all: Vec<Vec<SparseMat>> = Vec::with_capacity(n);
    let mut quots: Vec<Quotient> = Vec::with_capacity(n);
    let mut prepends: Vec<SparseMat> = Vec::with_capacity(n);
    let mut maps: Vec<SparseMat> = Vec::with_capacity(n);
    let id_m = SparseMat::identity(field, m);

    for q in 1..=n {
        let prev = q - 1;
        let dp = level_dim[prev];
        // The previous level as a right B-module through its last factor.
        let x_right_acts: Vec<SparseMat> = (0..nb)
            .map(|b| {
                let mut acc = SparseMat::zero(field, dp, dp);
                for (z, c) in iota.matrix.col(b).iter() {
                    acc = acc.add(&right_last[prev][*z].scale(c));
                }
                acc
            })
            .collect();
        let x_mod = Module::right(b_alg.clone(), x_right_acts.clone())?;
        let ten = tensor_over_subalgebra(&x_mod, &y_left)?;
        let quot = ten.quot;
        let dq = quot.dim();
        let ambient = dp * m;

        let kills_relations = |f: &SparseMat| -> bool {
            quot.relations().basis().iter().all(|u| f.apply(u).is_zero())
        };

        // Module structure: left H on the leading factor, right H on the
        // trailing one. Both are induced through the tensor relations.
        let mut new_left = Vec::with_capacity(m);
        let mut new_right = Vec::with_capacity(m);
        for z in 0..m {
            let l_amb = left_ops[prev][z].kron(&id_m);
            if !descends_to_quotients(&l_amb, &quot, &quot) {
                return Err(ResolutionError::Descent(format!(
                    "left action {z} does not preserve the tensor relations at level {q}"
                )));
            }
            new_left.push(induced_on_quotients(&l_amb, &quot, &quot));
            let r_amb = SparseMat::identity(field, dp).kron(&rmats[z]);
            if !descends_to_quotients(&r_amb, &quot, &quot) {
                return Err(ResolutionError::Descent(format!(
                    "right action {z} does not preserve the tensor relations at level {q}"
                )));
            }
            new_right.push(induced_on_quotients(&r_amb, &quot, &quot));
        }

        let mut faces_q: Vec<SparseMat> = Vec::with_capacity(q + 1);
        // Inner faces: recurse into the previous level.
        for i in 0..q.saturating_sub(1) {
            let f_amb = faces_all[prev - 1][i].kron(&id_m);
            if !descends_to_quotients(&f_amb, &quot, &quots[prev - 1]) {
                return Err(ResolutionError::Descent(format!(
                    "face {i} does not descend at level {q}"
                )));
            }
            faces_q.push(induced_on_quotients(&f_amb, &quot, &quots[prev - 1]));
        }
        // Merge face: absorb the trailing factor into the previous level.
        let merge_amb = SparseMat::from_fn(field, dp, ambient, |col| {
            let (t, z) = (col / m, col % m);
            right_last[prev][z].col(t).clone()
        });
        if !kills_relations(&merge_amb) {
            return Err(ResolutionError::Descent(format!(
                "merge face does not kill the tensor relations at level {q}"
            )));
        }
        faces_q.push(merge_amb.compose(quot.section()));
        // Last face: push the trailing factor into B through psi and act on
        // the right.
        let last_amb = SparseMat::from_fn(field, dp, ambient, |col| {
            let (t, z) = (col / m, col % m);
            let mut acc = SVec::zero(dp);
            for (b, c) in psi.col(z).iter() {
                acc = acc.add_scaled(x_right_acts[*b].col(t), c);
            }
            acc
        });
        if !kills_relations(&last_amb) {
            return Err(ResolutionError::Descent(format!(
                "augmentation face does not kill the tensor relations at level {q}"
            )));
        }
        faces_q.push(last_amb.compose(quot.section()));

        let mut boundary = SparseMat::zero(field, dp, dq);
        for (i, f) in faces_q.iter().enumerate() {
            boundary = if i % 2 == 0 { boundary.add(f) } else { boundary.sub(f) };
        }
        maps.push(boundary);

        // Contracting homotopy: prepend the unit at the front.
        let s = if q == 1 {
            SparseMat::from_fn(field, dq, m, |x| {
                let entries =
                    halg.unit().iter().map(|(t, c)| (t * m + x, c.clone())).collect();
                quot.project(&SVec::from_entries(ambient, entries))
            })
        } else {
            let f_amb = prepends[q - 2].kron(&id_m);
            if !descends_to_quotients(&f_amb, &quots[prev - 1], &quot) {
                return Err(ResolutionError::Descent(format!(
                    "homotopy does not descend at level {q}"
                )));
            }
            induced_on_quotients(&f_amb, &quots[prev - 1], &quot)
        };
        prepends.push(s);

        level_dim.push(dq);
        left_ops.push(new_left);
        right_last.push(new_right);
        faces_all.push(faces_q);
        quots.push(quot);
    }

    // Simplicial identities d_i d_j = d_{j-1} d_i for i < j.
    for q in 2..=n {
        for j in 1..=q {
            for i in 0..j {
                let lhs = faces_all[q - 2][i].compose(&faces_all[q - 1][j]);
                let rhs = faces_all[q - 2][j - 1].compose(&faces_all[q - 1][i]);
                if lhs != rhs {
                    return Err(ResolutionError::Simplicial { q, i, j });
                }
            }
        }
    }
    // Homotopy identities and kernel balance of the augmentation.
    if n >= 1 {
        let zero_check = psi.compose(&maps[0]);
        if !zero_check.is_zero() {
            return Err(ResolutionError::Augmentation(
                "augmentation does not kill the first boundary".into(),
            ));
        }
        if rank(&psi) + rank(&maps[0]) != m {
            return Err(ResolutionError::Augmentation(
                "kernel of the augmentation is not the image of the first boundary".into(),
            ));
        }
        let head = maps[0].compose(&prepends[0]).add(&iota.matrix.compose(&psi));
        if head != id_m {
            return Err(ResolutionError::Homotopy(0));
        }
        for q in 1..n {
            let lhs = maps[q].compose(&prepends[q]).add(&prepends[q - 1].compose(&maps[q - 1]));
            if lhs != SparseMat::identity(field, level_dim[q]) {
                return Err(ResolutionError::Homotopy(q));
            }
        }
    }
    // Linearity of the boundaries over the left action.
    for q in 1..=n {
        for z in 0..m {
            let lhs = maps[q - 1].compose(&left_ops[q][z]);
            let rhs = left_ops[q - 1][z].compose(&maps[q - 1]);
            if lhs != rhs {
                return Err(ResolutionError::NotLinear { degree: q, basis: z });
            }
        }
    }

    let mut modules = Vec::with_capacity(n + 1);
    for ops in left_ops.iter() {
        let left = Module::left(halg.clone(), ops.clone())?;
        modules.push(match side {
            Side::Left => left,
            Side::Right => {
                let tw = twist_left_to_right(hp, &left);
                Module::right(halg.clone(), tw.right_action().to_vec())?
            }
        });
    }
    let target = match side {
        Side::Left => bleft.module.clone(),
        Side::Right => {
            let tw = twist_left_to_right(hp, &bleft.module);
            Module::right(halg.clone(), tw.right_action().to_vec())?
        }
    };

    let complex = ChainComplex::new(field, level_dim, maps, Direction::Homological)?;
    let resolution = Resolution { complex, augmentation: psi, modules, target };
    Ok(CPrimeResolution { resolution, faces: faces_all, homotopy: prepends, quotients: quots, side })
}

/// Splitting certificate for a left module: a free cover pi : R^k -> M
/// together with a module-linear section sigma, so M is a direct summand of
/// a free module. Returns None when no section exists.
pub fn left_module_splitting(
    m: &Module,
) -> Result<Option<(SparseMat, SparseMat)>, ResolutionError> {
    let alg = match m.left_algebra() {
        Some(a) => a.clone(),
        None => return Err(ResolutionError::Shape("splitting needs a left module".into())),
    };
    let field = alg.field();
    let d = alg.dim();
    let dm = m.dim();
    if dm == 0 {
        return Ok(Some((SparseMat::zero(field, 0, 0), SparseMat::zero(field, 0, 0))));
    }
    let fdim = dm * d;
    let lmats = alg.left_mult_mats();
    // Free cover with one generator per basis vector of M, basis (c, z) ->
    // c*d + z, pi(z·g_c) = z·m_c.
    let pi = SparseMat::from_fn(field, dm, fdim, |col| {
        let (c, z) = (col / d, col % d);
        m.act_left(&SVec::unit(d, z, field), &SVec::unit(dm, c, field))
    });
    let f_act: Vec<SparseMat> =
        (0..d).map(|y| SparseMat::identity(field, dm).kron(&lmats[y])).collect();
    let verified = |sigma: SparseMat| -> Option<(SparseMat, SparseMat)> {
        let split = pi.compose(&sigma) == SparseMat::identity(field, dm);
        let linear = (0..d)
            .all(|y| sigma.compose(&m.left_action()[y]) == f_act[y].compose(&sigma));
        if split && linear {
            Some((pi.clone(), sigma))
        } else {
            None
        }
    };

    // Fast path: average any linear section through a separability
    // idempotent when the algebra has one.
    if let Some(sep) = separability_idempotent(&alg) {
        let solver = Solver::new(&pi);
        let mut s0_cols = Vec::with_capacity(dm);
        for x in 0..dm {
            match solver.solve(&SVec::unit(dm, x, field)) {
                Some(v) => s0_cols.push(v),
                None => {
                    return Err(ResolutionError::Shape(
                        "free cover projection is not surjective".into(),
                    ))
                }
            }
        }
        let s0 = SparseMat::from_cols(field, fdim, s0_cols);
        let mut sigma = SparseMat::zero(field, fdim, dm);
        for (ij, c) in sep.iter() {
            let (i, j) = (ij / d, ij % d);
            let term = f_act[i].compose(&s0).compose(&m.left_action()[j]).scale(c);
            sigma = sigma.add(&term);
        }
        if let Some(found) = verified(sigma) {
            return Ok(Some(found));
        }
    }

    // General path: solve the full affine system pi∘sigma = id plus the
    // intertwining constraints for vec(sigma), column-major.
    let unknowns = dm * fdim;
    let mut trips: Vec<(usize, usize, Scalar)> = Vec::new();
    for x in 0..dm {
        for rin in 0..fdim {
            for (out, c) in pi.col(rin).iter() {
                trips.push((x * dm + out, x * fdim + rin, c.clone()));
            }
        }
    }
    let base2 = dm * dm;
    for y in 0..d {
        let ly = &m.left_action()[y];
        for x in 0..dm {
            let row0 = base2 + (y * dm + x) * fdim;
            for (t, c) in ly.col(x).iter() {
                for rr in 0..fdim {
                    trips.push((row0 + rr, t * fdim + rr, c.clone()));
                }
            }
            for rin in 0..fdim {
                for (rout, c) in f_act[y].col(rin).iter() {
                    trips.push((row0 + rout, x * fdim + rin, c.neg()));
                }
            }
        }
    }
    let rows = base2 + d * dm * fdim;
    let system = SparseMat::from_triplets(field, rows, unknowns, &trips);
    let rhs_entries: Vec<(usize, Scalar)> = (0..dm).map(|x| (x * dm + x, field.one())).collect();
    let rhs = SVec::from_entries(rows, rhs_entries);
    match solve(&system, &rhs) {
        None => Ok(None),
        Some(v) => {
            let sig_trips: Vec<(usize, usize, Scalar)> =
                v.iter().map(|(u, c)| (u % fdim, u / fdim, c.clone())).collect();
            let sigma = SparseMat::from_triplets(field, fdim, dm, &sig_trips);
            match verified(sigma) {
                Some(found) => Ok(Some(found)),
                None => Err(ResolutionError::Shape(
                    "solved splitting failed verification".into(),
                )),
            }
        }
    }
}
