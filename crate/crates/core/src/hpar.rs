//! The partial "Hopf" algebra H_par = T(H)/I, its base subalgebra B spanned
//! by the idempotents e_h, the involution S_par, and the universal
//! factorization of partial representations through H_par.
//!
//! For group algebras H = KG the construction uses an explicit normal form:
//! basis pairs (S, g) with S ⊆ G∖{1} and g ∈ S∪{1}, standing for e_S[g].
//! The normal form is never trusted: every instance passes the full defining
//! relation validator, the base-subalgebra checks, and (for |G| ≤ 4) an
//! independent bounded-word closure oracle that rederives the dimension from
//! the relations alone.

use crate::algebra::{
    opposite, subalgebra_generated, AlgebraHom, FiniteAlgebra, Module,
};
use crate::field::FieldSpec;
use crate::hopf::{GroupTable, HopfData};
use crate::linalg::{Echelon, Inserted, SVec, SparseMat, Solver, Subspace};
use crate::partial::{check_partial_rep_mats, PartialActionData, PartialRepData, SmashAlgebra};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

#[derive(Debug, thiserror::Error)]
pub enum HparError {
    #[error("bracket map is not a partial representation: {0}")]
    BracketNotPartialRep(String),
    #[error("[1] is not the unit")]
    BracketUnit,
    #[error("base subalgebra has dim {got}, expected {expected}")]
    BaseDimension { expected: usize, got: usize },
    #[error("identity {0} of the base lemma fails at pair ({1},{2})")]
    BaseLemma(&'static str, usize, usize),
    #[error("brackets do not generate the algebra (rank {0} of {1})")]
    NotGenerated(usize, usize),
    #[error("involution check fails: {0}")]
    Involution(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("inconsistent input: {0}")]
    Input(String),
    #[error("action does not descend: {0}")]
    Descent(String),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error(transparent)]
    Partial(#[from] crate::partial::PartialError),
    #[error(transparent)]
    Hopf(#[from] crate::hopf::HopfError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Normal-form bookkeeping for the group route. Subsets of G∖{1} are
/// bitmasks; basis order is (g ascending, mask ascending).
#[derive(Clone, Debug)]
pub struct GroupNormalForm {
    pub table: GroupTable,
    /// basis[i] = (mask, g).
    pub basis: Vec<(u64, usize)>,
    index: HashMap<(u64, usize), usize>,
    /// group element index -> bit position (identity has none).
    bit_of: Vec<Option<usize>>,
    /// bit position -> group element index.
    elem_of_bit: Vec<usize>,
}

impl GroupNormalForm {
    fn new(table: GroupTable) -> Self {
        let n = table.order();
        // dim = 2^{n-1} + (n-1)·2^{n-2} blows up long before the mask does;
        // the cap keeps enumeration honest.
        assert!((1..=16).contains(&n), "normal form supports |G| <= 16");
        let mut bit_of = vec![None; n];
        let mut elem_of_bit = Vec::new();
        for g in 0..n {
            if g != table.identity() {
                bit_of[g] = Some(elem_of_bit.len());
                elem_of_bit.push(g);
            }
        }
        let mut basis = Vec::new();
        let mut index = HashMap::new();
        for g in 0..n {
            for mask in 0..(1u64 << (n - 1)) {
                let valid = g == table.identity()
                    || (mask >> bit_of[g].expect("non-identity has a bit")) & 1 == 1;
                if valid {
                    index.insert((mask, g), basis.len());
                    basis.push((mask, g));
                }
            }
        }
        GroupNormalForm { table, basis, index, bit_of, elem_of_bit }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, mask: u64, g: usize) -> usize {
        self.index[&(mask, g)]
    }

    /// Insert one group element into a mask, dropping the identity.
    fn with_elem(&self, mask: u64, g: usize) -> u64 {
        match self.bit_of[g] {
            Some(b) => mask | (1 << b),
            None => mask,
        }
    }

    /// The translated set gT as a mask (identity components dropped).
    fn translate(&self, g: usize, mask: u64) -> u64 {
        let mut out = 0u64;
        for b in 0..self.elem_of_bit.len() {
            if (mask >> b) & 1 == 1 {
                out = self.with_elem(out, self.table.mul(g, self.elem_of_bit[b]));
            }
        }
        out
    }

    /// (S,g)·(T,h) = ((S ∪ {g} ∪ gT ∪ {gh}) ∖ {1}, gh).
    pub fn product(&self, s: (u64, usize), t: (u64, usize)) -> (u64, usize) {
        let (smask, g) = s;
        let (tmask, h) = t;
        let gh = self.table.mul(g, h);
        let mut mask = smask;
        mask = self.with_elem(mask, g);
        mask |= self.translate(g, tmask);
        mask = self.with_elem(mask, gh);
        (mask, gh)
    }

    /// S_par(e_S[g]) = e_{g⁻¹S ∪ {g⁻¹}}[g⁻¹] in normal form.
    pub fn involution_of(&self, s: (u64, usize)) -> (u64, usize) {
        let (mask, g) = s;
        let gi = self.table.inv(g);
        let mut out = self.translate(gi, mask);
        out = self.with_elem(out, gi);
        (out, gi)
    }
}

/// The partial "Hopf" algebra with its distinguished structure.
pub struct HParAlgebra {
    hopf: Arc<HopfData>,
    algebra: Arc<FiniteAlgebra>,
    /// dim_par × dim_H, column h = [h].
    bracket: SparseMat,
    /// dim_par × dim_H, column h = e_h = [h_(1)][S(h_(2))].
    e_map: SparseMat,
    base: BaseSubalgebra,
    /// S_par as a linear map on the underlying space (an anti-automorphism).
    involution: SparseMat,
    normal_form: Option<GroupNormalForm>,
    words: OnceLock<WordBasis>,
}

/// B, the commutative subalgebra generated by the e_h.
pub struct BaseSubalgebra {
    pub algebra: Arc<FiniteAlgebra>,
    /// Inclusion B → H_par as a validated algebra map.
    pub inclusion: AlgebraHom,
    pub space: Subspace,
}

/// A spanning family of bracket words with a solver for expressing arbitrary
/// elements as linear combinations of word values.
struct WordBasis {
    /// Letter sequences over H basis indices; empty word first.
    words: Vec<Vec<usize>>,
    solver: Solver,
}

impl HParAlgebra {
    pub fn hopf(&self) -> &Arc<HopfData> {
        &self.hopf
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

    pub fn bracket(&self) -> &SparseMat {
        &self.bracket
    }

    pub fn e_map(&self) -> &SparseMat {
        &self.e_map
    }

    pub fn base(&self) -> &BaseSubalgebra {
        &self.base
    }

    pub fn involution(&self) -> &SparseMat {
        &self.involution
    }

    pub fn normal_form(&self) -> Option<&GroupNormalForm> {
        self.normal_form.as_ref()
    }

    /// [x] for an arbitrary element of H.
    pub fn bracket_of(&self, x: &SVec) -> SVec {
        self.bracket.apply(x)
    }

    pub fn e_of(&self, x: &SVec) -> SVec {
        self.e_map.apply(x)
    }

    /// The bracket map as a validated partial representation into H_par.
    pub fn bracket_rep(&self) -> PartialRepData {
        PartialRepData::new(self.hopf.clone(), self.algebra.clone(), self.bracket.clone())
            .expect("bracket is a partial representation by construction")
    }

    fn word_basis(&self) -> &WordBasis {
        self.words.get_or_init(|| {
            build_word_basis(&self.algebra, &self.bracket)
                .expect("brackets generate H_par (validated at construction)")
        })
    }
}

/// BFS over bracket words, keeping only words whose values grow the span.
/// Terminates because each kept word adds an echelon pivot.
fn build_word_basis(
    algebra: &Arc<FiniteAlgebra>,
    bracket: &SparseMat,
) -> Result<WordBasis, HparError> {
    let field = algebra.field();
    let dim = algebra.dim();
    let dh = bracket.ncols();
    let mut ech = Echelon::new(field, dim);
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut values: Vec<SVec> = Vec::new();
    let mut frontier: Vec<usize> = Vec::new();

    let one = algebra.unit().clone();
    if let Inserted::Pivot(_) = ech.insert(&one) {
        words.push(Vec::new());
        values.push(one);
        frontier.push(0);
    }
    while !frontier.is_empty() && words.len() < dim {
        let mut next = Vec::new();
        for &w in &frontier {
            for h in 0..dh {
                let v = algebra.multiply(&values[w], bracket.col(h));
                if let Inserted::Pivot(_) = ech.insert(&v) {
                    let mut word = words[w].clone();
                    word.push(h);
                    words.push(word);
                    values.push(v);
                    next.push(words.len() - 1);
                    if words.len() == dim {
                        break;
                    }
                }
            }
        }
        frontier = next;
    }
    if words.len() != dim {
        return Err(HparError::NotGenerated(words.len(), dim));
    }
    let v_mat = SparseMat::from_cols(field, dim, values);
    Ok(WordBasis { words, solver: Solver::new(&v_mat) })
}

/// Evaluate each word under a multiplicative assignment of the letters.
fn evaluate_words<T: Clone>(
    words: &[Vec<usize>],
    one: T,
    mul_letter: &dyn Fn(&T, usize) -> T,
) -> Vec<T> {
    // Words are produced by extending earlier words, so a prefix cache would
    // apply; word counts are small enough that direct folding is fine.
    words
        .iter()
        .map(|w| {
            let mut acc = one.clone();
            for &h in w {
                acc = mul_letter(&acc, h);
            }
            acc
        })
        .collect()
}

/// The unique algebra map π̂: H_par → target with π̂∘[_] = π.
pub fn universal_factorization(
    hp: &HParAlgebra,
    rep: &PartialRepData,
) -> Result<AlgebraHom, HparError> {
    let wb = hp.word_basis();
    let target = rep.target().clone();
    let values = evaluate_words(&wb.words, target.unit().clone(), &|acc, h| {
        target.multiply(acc, rep.pi_basis(h))
    });
    let field = hp.field();
    let cols: Vec<SVec> = (0..hp.dim())
        .map(|x| {
            let combo = wb
                .solver
                .solve(&SVec::unit(hp.dim(), x, field))
                .ok_or_else(|| HparError::Factorization(format!("basis {x} not spanned by words")))?;
            let mut acc = SVec::zero(target.dim());
            for (w, c) in combo.iter() {
                acc = acc.add_scaled(&values[*w], c);
            }
            Ok(acc)
        })
        .collect::<Result<_, HparError>>()?;
    let mat = SparseMat::from_cols(field, target.dim(), cols);
    // π̂∘[_] = π on the nose.
    if mat.compose(&hp.bracket) != *rep.matrix() {
        return Err(HparError::Factorization("π̂∘bracket ≠ π".into()));
    }
    AlgebraHom::new(hp.algebra().clone(), target, mat).map_err(HparError::Algebra)
}

/// Extend an endomorphism-valued partial representation (one matrix per H
/// basis element, validated against PR1-PR5) to action matrices for every
/// H_par basis element. The resulting family is multiplicative by the
/// universal property.
pub fn extend_rep_mats(
    hp: &HParAlgebra,
    mats: &[SparseMat],
    dim: usize,
) -> Result<Vec<SparseMat>, HparError> {
    let report = check_partial_rep_mats(&hp.hopf, mats, dim);
    if !report.all_passed() {
        let f = report.first_failure().expect("failure present");
        return Err(HparError::BracketNotPartialRep(format!(
            "{} at {}",
            f.axiom,
            f.counterexample.as_deref().unwrap_or("?")
        )));
    }
    extend_rep_mats_unchecked(hp, mats, dim)
}

/// Same extension without re-running the PR checker (for callers that have
/// already established the axioms, e.g. actions descended from validated
/// ambient ones).
pub fn extend_rep_mats_unchecked(
    hp: &HParAlgebra,
    mats: &[SparseMat],
    dim: usize,
) -> Result<Vec<SparseMat>, HparError> {
    let field = hp.field();
    let wb = hp.word_basis();
    let values = evaluate_words(&wb.words, SparseMat::identity(field, dim), &|acc, h| {
        acc.compose(&mats[h])
    });
    (0..hp.dim())
        .map(|x| {
            let combo = wb
                .solver
                .solve(&SVec::unit(hp.dim(), x, field))
                .ok_or_else(|| HparError::Factorization(format!("basis {x} not spanned by words")))?;
            let mut acc = SparseMat::zero(field, dim, dim);
            for (w, c) in combo.iter() {
                acc = acc.add(&values[*w].scale(c));
            }
            Ok(acc)
        })
        .collect()
}

/// Shared validation pipeline: defining relations, base subalgebra, Lemma
/// identities, involution. Returns the finished structure.
fn finish_construction(
    hopf: Arc<HopfData>,
    algebra: Arc<FiniteAlgebra>,
    bracket: SparseMat,
    normal_form: Option<GroupNormalForm>,
) -> Result<HParAlgebra, HparError> {
    let field = algebra.field();
    let dim = algebra.dim();
    let dh = hopf.dim();

    // [1] = 1.
    if bracket.apply(hopf.algebra().unit()) != *algebra.unit() {
        return Err(HparError::BracketUnit);
    }

    // The defining relations are exactly "bracket is a partial
    // representation", checked on the faithful left regular realization.
    let bracket_mats: Vec<SparseMat> = (0..dh)
        .map(|h| algebra.left_mult_operator(bracket.col(h)))
        .collect();
    let report = check_partial_rep_mats(&hopf, &bracket_mats, dim);
    if !report.all_passed() {
        let f = report.first_failure().expect("failure present");
        return Err(HparError::BracketNotPartialRep(format!(
            "{} at {}",
            f.axiom,
            f.counterexample.as_deref().unwrap_or("?")
        )));
    }

    // e_h = [h_(1)][S(h_(2))].
    let e_cols: Vec<SVec> = (0..dh)
        .map(|h| {
            let mut acc = SVec::zero(dim);
            for (h1, h2, c) in hopf.comult_pairs(h) {
                let s_h2 = bracket.apply(hopf.antipode().col(h2));
                acc = acc.add_scaled(&algebra.multiply(bracket.col(h1), &s_h2), &c);
            }
            acc
        })
        .collect();
    let e_map = SparseMat::from_cols(field, dim, e_cols);

    // Base subalgebra B = <e_h>.
    let gens: Vec<SVec> = (0..dh).map(|h| e_map.col(h).clone()).collect();
    let generated = subalgebra_generated(&algebra, &gens)?;
    let inclusion = AlgebraHom::new(
        generated.algebra.clone(),
        algebra.clone(),
        generated.inclusion.clone(),
    )?;
    let base = BaseSubalgebra {
        algebra: generated.algebra.clone(),
        inclusion,
        space: generated.space.clone(),
    };
    // B is commutative.
    for i in 0..base.algebra.dim() {
        for j in 0..i {
            if base.algebra.basis_product(i, j) != base.algebra.basis_product(j, i) {
                return Err(HparError::BaseLemma("B commutative", i, j));
            }
        }
    }

    // Lemma identities for e and brackets, on all basis pairs of H.
    let e_of = |x: &SVec| e_map.apply(x);
    for h in 0..dh {
        let pairs = hopf.comult_pairs(h);
        // (iii) e_{h_(1)} e_{h_(2)} = e_h.
        let mut acc = SVec::zero(dim);
        for (h1, h2, c) in &pairs {
            acc = acc.add_scaled(&algebra.multiply(e_map.col(*h1), e_map.col(*h2)), c);
        }
        if acc != *e_map.col(h) {
            return Err(HparError::BaseLemma("(iii)", h, h));
        }
        // particular case of (i): e_{h_(1)}[h_(2)] = [h].
        let mut acc = SVec::zero(dim);
        for (h1, h2, c) in &pairs {
            acc = acc.add_scaled(&algebra.multiply(e_map.col(*h1), bracket.col(*h2)), c);
        }
        if acc != *bracket.col(h) {
            return Err(HparError::BaseLemma("(i) particular", h, h));
        }
        for k in 0..dh {
            let e_k = e_map.col(k);
            // (i) e_k[h] = [h_(2)] e_{S(h_(1))k}.
            let lhs = algebra.multiply(e_k, bracket.col(h));
            let mut rhs = SVec::zero(dim);
            for (h1, h2, c) in &pairs {
                let mut sk = SVec::zero(dh);
                for (m, cm) in hopf.antipode().col(*h1).iter() {
                    sk = sk.add_scaled(hopf.algebra().basis_product(*m, k), cm);
                }
                rhs = rhs.add_scaled(&algebra.multiply(bracket.col(*h2), &e_of(&sk)), c);
            }
            if lhs != rhs {
                return Err(HparError::BaseLemma("(i)", h, k));
            }
            // (ii) [h]e_k = e_{h_(1)k}[h_(2)].
            let lhs = algebra.multiply(bracket.col(h), e_k);
            let mut rhs = SVec::zero(dim);
            for (h1, h2, c) in &pairs {
                let h1k = hopf.algebra().basis_product(*h1, k);
                rhs = rhs.add_scaled(&algebra.multiply(&e_of(h1k), bracket.col(*h2)), c);
            }
            if lhs != rhs {
                return Err(HparError::BaseLemma("(ii)", h, k));
            }
            // (iv) e_h e_k = e_k e_h.
            if algebra.multiply(e_map.col(h), e_k) != algebra.multiply(e_k, e_map.col(h)) {
                return Err(HparError::BaseLemma("(iv)", h, k));
            }
        }
    }

    let mut hp = HParAlgebra {
        hopf,
        algebra,
        bracket,
        e_map,
        base,
        involution: SparseMat::zero(field, dim, dim),
        normal_form,
        words: OnceLock::new(),
    };
    // Fail early (with an error, not a panic) if brackets do not generate.
    let wb = build_word_basis(&hp.algebra, &hp.bracket)?;
    let _ = hp.words.set(wb);

    // Involution via the universal property: h ↦ [S(h)] is a partial
    // representation into H_par^op; its factorization is S_par.
    let op = opposite(hp.algebra());
    let s_bracket = hp.bracket.compose(hp.hopf.antipode());
    let rep = PartialRepData::new(hp.hopf.clone(), op.clone(), s_bracket)
        .map_err(|e| HparError::Involution(e.to_string()))?;
    let s_par = universal_factorization(&hp, &rep)?;
    let s_mat = s_par.matrix.clone();
    // S² = id.
    if s_mat.compose(&s_mat) != SparseMat::identity(field, dim) {
        return Err(HparError::Involution("S² ≠ id".into()));
    }
    // S restricted to B is the identity.
    if s_mat.compose(&hp.base.inclusion.matrix) != hp.base.inclusion.matrix {
        return Err(HparError::Involution("S does not fix B".into()));
    }
    hp.involution = s_mat;
    Ok(hp)
}

/// H_par for a group algebra KG via the (S, g) normal form.
pub fn build_kpar_group(table: &GroupTable, field: FieldSpec) -> Result<HParAlgebra, HparError> {
    table.validate()?;
    let hopf = Arc::new(crate::hopf::group_algebra(table, field)?);
    let nf = GroupNormalForm::new(table.clone());
    let dim = nf.dim();
    let mut mult = vec![vec![SVec::zero(dim); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let (mask, g) = nf.product(nf.basis[i], nf.basis[j]);
            mult[i][j] = SVec::unit(dim, nf.index_of(mask, g), field);
        }
    }
    let unit = SVec::unit(dim, nf.index_of(0, table.identity()), field);
    let algebra = FiniteAlgebra::new(field, mult, unit, format!("Kpar(G{})", table.order()))?;

    // [g] = e_S[g] with S = {g}∖{1}.
    let bracket = SparseMat::from_fn(field, dim, table.order(), |g| {
        let mask = nf.with_elem(0, g);
        SVec::unit(dim, nf.index_of(mask, g), field)
    });

    let hp = finish_construction(hopf, algebra, bracket, Some(nf))?;
    // dim B = 2^{|G|-1} for the group route.
    let expected_b = 1usize << (table.order() - 1);
    if hp.base.algebra.dim() != expected_b {
        return Err(HparError::BaseDimension {
            expected: expected_b,
            got: hp.base.algebra.dim(),
        });
    }
    Ok(hp)
}

/// Accept a user-supplied model of H_par iff every validator passes.
pub fn from_presentation(
    hopf: Arc<HopfData>,
    mult: Vec<Vec<SVec>>,
    bracket: SparseMat,
) -> Result<HParAlgebra, HparError> {
    let field = hopf.field();
    // The unit must be [1_H].
    let unit = bracket.apply(hopf.algebra().unit());
    let algebra = FiniteAlgebra::new(field, mult, unit, "Hpar(presented)")?;
    finish_construction(hopf, algebra, bracket, None)
}

/// Independent dimension oracle: the span of words in the letters [g], g ∈ G,
/// of length ≤ span_len, inside the free algebra modulo the defining
/// relations. Relations enter as two-sided multiples u·r·v bounded by
/// pad_len ≥ span_len; the extra padding room matters because the relation
/// system is not confluent, so two short words can be identified only through
/// longer intermediates. Words are indexed longest first, which puts echelon
/// pivots on long words and keeps reduction flowing toward short residues.
pub fn bounded_word_closure_dim(
    table: &GroupTable,
    field: FieldSpec,
    span_len: usize,
    pad_len: usize,
) -> usize {
    assert!(span_len <= pad_len, "padding must cover the spanned words");
    let n = table.order();
    // Index layout: lengths pad_len, pad_len-1, ..., 0; radix-n within each.
    // offsets[l] = Σ_{l < k ≤ pad_len} n^k.
    let offsets: Vec<usize> = (0..=pad_len)
        .map(|l| (l + 1..=pad_len).map(|k| n.pow(k as u32)).sum())
        .collect();
    let total = offsets[0] + 1;
    let word_index = |w: &[usize]| {
        let mut ix = 0usize;
        for &l in w {
            ix = ix * n + l;
        }
        offsets[w.len()] + ix
    };

    // Relation cores: pairs of words (w1, w2) meaning w1 − w2 ∈ I.
    let mut cores: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let e = table.identity();
    cores.push((vec![e], vec![]));
    for h in 0..n {
        for k in 0..n {
            let ki = table.inv(k);
            let hi = table.inv(h);
            // [h][k][k⁻¹] = [hk][k⁻¹]
            cores.push((vec![h, k, ki], vec![table.mul(h, k), ki]));
            // [h][h⁻¹][k] = [h][h⁻¹k]
            cores.push((vec![h, hi, k], vec![h, table.mul(hi, k)]));
            // [h][k⁻¹][k] = [hk⁻¹][k]
            cores.push((vec![h, ki, k], vec![table.mul(h, ki), k]));
            // [h⁻¹][h][k] = [h⁻¹][hk]
            cores.push((vec![hi, h, k], vec![hi, table.mul(h, k)]));
        }
    }

    let words_of_len = |l: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(n.pow(l as u32));
        let mut w = vec![0usize; l];
        loop {
            out.push(w.clone());
            let mut pos = l;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                w[pos] += 1;
                if w[pos] < n {
                    break;
                }
                w[pos] = 0;
            }
        }
    };

    // All u·core·v with |u| + |core| + |v| ≤ pad_len.
    let mut ech = Echelon::new(field, total);
    for (w1, w2) in &cores {
        let long = w1.len().max(w2.len());
        for lu in 0..=(pad_len.saturating_sub(long)) {
            for u in words_of_len(lu) {
                for lv in 0..=(pad_len - long - lu) {
                    for v in words_of_len(lv) {
                        let mut a = u.clone();
                        a.extend_from_slice(w1);
                        a.extend_from_slice(&v);
                        let mut b = u.clone();
                        b.extend_from_slice(w2);
                        b.extend_from_slice(&v);
                        let vec = SVec::unit(total, word_index(&a), field)
                            .sub(&SVec::unit(total, word_index(&b), field));
                        ech.insert(&vec);
                    }
                }
            }
        }
    }

    // Residue rank of the short words: pivots added on top of the relations.
    let mut dim = 0usize;
    for l in 0..=span_len {
        for w in words_of_len(l) {
            if let Inserted::Pivot(_) = ech.insert(&SVec::unit(total, word_index(&w), field)) {
                dim += 1;
            }
        }
    }
    dim
}

/// The partial action of H on B, [h]▷b = [h_(1)] b [S(h_(2))] computed
/// inside H_par and expressed in B coordinates.
pub fn b_partial_action(hp: &HParAlgebra) -> Result<PartialActionData, HparError> {
    let field = hp.field();
    let dh = hp.hopf.dim();
    let nb = hp.base.algebra.dim();
    let lambda = SparseMat::from_fn(field, nb, dh * nb, |col| {
        let (h, b) = (col / nb, col % nb);
        let bv = hp.base.inclusion.matrix.col(b);
        let mut acc = SVec::zero(hp.dim());
        for (h1, h2, c) in hp.hopf.comult_pairs(h) {
            let s_h2 = hp.bracket.apply(hp.hopf.antipode().col(h2));
            let t = hp
                .algebra
                .multiply(&hp.algebra.multiply(hp.bracket.col(h1), bv), &s_h2);
            acc = acc.add_scaled(&t, &c);
        }
        hp.base
            .space
            .coordinates(&acc)
            .expect("[h_(1)] b [S(h_(2))] lies in B")
    });
    PartialActionData::new(hp.hopf.clone(), hp.base.algebra.clone(), lambda)
        .map_err(HparError::Partial)
}

/// Builds B#H, factors π₀ through H_par, and checks that the result is a
/// left-B-linear algebra isomorphism.
pub struct SmashComparison {
    pub smash: SmashAlgebra,
    pub iso: AlgebraHom,
    pub is_isomorphism: bool,
    pub is_b_linear: bool,
}

pub fn theorem48_isomorphism_check(hp: &HParAlgebra) -> Result<SmashComparison, HparError> {
    let pa = Arc::new(b_partial_action(hp)?);
    let smash = crate::partial::smash_product(&pa)?;
    let iso = universal_factorization(hp, &smash.pi0)?;
    let is_isomorphism = iso.is_isomorphism();

    // B-linearity: π̂(ι(b)·x) = φ₀(b)·π̂(x).
    let mut is_b_linear = true;
    'outer: for b in 0..hp.base.algebra.dim() {
        let left_in_hpar = hp
            .algebra
            .left_mult_operator(hp.base.inclusion.matrix.col(b));
        let left_in_smash = smash
            .algebra
            .left_mult_operator(smash.phi0.matrix.col(b));
        if iso.matrix.compose(&left_in_hpar) != left_in_smash.compose(&iso.matrix) {
            is_b_linear = false;
            break 'outer;
        }
    }
    Ok(SmashComparison { smash, iso, is_isomorphism, is_b_linear })
}

/// Right module from a left H_par-module via x◁z := S_par(z)▷x.
pub fn twist_left_to_right(hp: &HParAlgebra, m: &Module) -> Module {
    let act = (0..hp.dim())
        .map(|i| m.left_operator(hp.involution.col(i)))
        .collect();
    Module::right_unchecked(hp.algebra.clone(), m.dim(), act)
}

/// Left module from a right H_par-module via z▷x := x◁S_par(z).
pub fn twist_right_to_left(hp: &HParAlgebra, m: &Module) -> Module {
    let act = (0..hp.dim())
        .map(|i| m.right_operator(hp.involution.col(i)))
        .collect();
    Module::left_unchecked(hp.algebra.clone(), m.dim(), act)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn trivial_group_is_one_dimensional() {
        let hp = build_kpar_group(&GroupTable::trivial(), Q).unwrap();
        assert_eq!(hp.dim(), 1);
        assert_eq!(hp.base().algebra.dim(), 1);
    }

    #[test]
    fn z2_normal_form() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), Q).unwrap();
        assert_eq!(hp.dim(), 3);
        assert_eq!(hp.base().algebra.dim(), 2);
        // [g]² = e_g.
        let g = hp.bracket().col(1);
        let sq = hp.algebra().multiply(g, g);
        assert_eq!(sq, *hp.e_map().col(1));
        // Basis is {(∅,1), ({g},1), ({g},g)}.
        let nf = hp.normal_form().unwrap();
        assert_eq!(nf.basis, vec![(0, 0), (1, 0), (1, 1)]);
    }

    #[test]
    fn dimensions_match_formula_and_oracle() {
        for (n, expected) in [(1usize, 1usize), (2, 3), (3, 8), (4, 20)] {
            let table = GroupTable::cyclic(n);
            let hp = build_kpar_group(&table, Q).unwrap();
            assert_eq!(hp.dim(), expected, "normal form dim for n={n}");
            if n > 1 {
                let formula = (1 << (n - 1)) + (n - 1) * (1 << (n - 2));
                assert_eq!(hp.dim(), formula);
            }
            let oracle = bounded_word_closure_dim(&table, Q, 6, 8);
            assert_eq!(oracle, expected, "closure oracle for n={n}");
        }
    }

    #[test]
    fn oracle_agrees_over_prime_fields() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(bounded_word_closure_dim(&GroupTable::cyclic(2), f2, 6, 8), 3);
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(bounded_word_closure_dim(&GroupTable::cyclic(3), f3, 6, 8), 8);
    }

    #[test]
    fn oracle_padding_is_stable() {
        // Non-confluence is exhausted by pad 8: pads 8 and 9 agree for Z/3.
        assert_eq!(bounded_word_closure_dim(&GroupTable::cyclic(3), Q, 6, 8), 8);
        assert_eq!(bounded_word_closure_dim(&GroupTable::cyclic(3), Q, 6, 9), 8);
    }

    #[test]
    fn involution_matches_normal_form_formula() {
        for n in [2usize, 3, 4] {
            let hp = build_kpar_group(&GroupTable::cyclic(n), Q).unwrap();
            let nf = hp.normal_form().unwrap();
            for (i, &sg) in nf.basis.iter().enumerate() {
                let (mask, g) = nf.involution_of(sg);
                let expected = SVec::unit(hp.dim(), nf.index_of(mask, g), Q);
                assert_eq!(
                    hp.involution().col(i),
                    &expected,
                    "S_par at basis {i} for n={n}"
                );
            }
        }
    }

    #[test]
    fn universal_factorization_examples() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), Q).unwrap();

        // rep = bracket itself factors through the identity.
        let rep = hp.bracket_rep();
        let id_hat = universal_factorization(&hp, &rep).unwrap();
        assert_eq!(id_hat.matrix, SparseMat::identity(Q, 3));

        // The ε-like global representation h ↦ ε(h)1 kills all e_h − 1.
        let k = crate::algebra::field_algebra(Q);
        let eps = PartialRepData::new(
            hp.hopf().clone(),
            k.clone(),
            SparseMat::from_dense(Q, &[vec![1, 1]]),
        )
        .unwrap();
        let pihat = universal_factorization(&hp, &eps).unwrap();
        for h in 0..2 {
            let e_minus_one = hp.e_map().col(h).sub(hp.algebra().unit());
            assert!(pihat.matrix.apply(&e_minus_one).is_zero());
        }
    }

    #[test]
    fn factorization_through_smash_of_zero_action() {
        // For the Z/2 action g·a = 0 on K, π̂ maps e_g to 0.
        let hopf = Arc::new(crate::hopf::group_algebra(&GroupTable::cyclic(2), Q).unwrap());
        let a = crate::algebra::field_algebra(Q);
        let lambda = SparseMat::from_dense(Q, &[vec![1, 0]]);
        let pa = Arc::new(PartialActionData::new(hopf, a, lambda).unwrap());
        let smash = crate::partial::smash_product(&pa).unwrap();
        let hp = build_kpar_group(&GroupTable::cyclic(2), Q).unwrap();
        let pihat = universal_factorization(&hp, &smash.pi0).unwrap();
        assert!(pihat.matrix.apply(hp.e_map().col(1)).is_zero());
    }

    #[test]
    fn theorem48_holds_for_small_groups() {
        for n in [1usize, 2, 3] {
            let hp = build_kpar_group(&GroupTable::cyclic(n), Q).unwrap();
            let cmp = theorem48_isomorphism_check(&hp).unwrap();
            assert!(cmp.is_isomorphism, "rank drop for n={n}");
            assert!(cmp.is_b_linear, "not B-linear for n={n}");
            assert_eq!(cmp.smash.dim(), hp.dim());
        }
    }

    #[test]
    fn presentation_round_trip_and_corruption() {
        let hp = build_kpar_group(&GroupTable::cyclic(2), Q).unwrap();
        let mult: Vec<Vec<SVec>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        hp.algebra().basis_product(i, j).clone()
                    })
                    .collect()
            })
            .collect();
        let again = from_presentation(hp.hopf().clone(), mult.clone(), hp.bracket().clone());
        assert!(again.is_ok());

        // Corrupt one structure constant: make [g]² = 1 instead of e_g.
        let mut bad = mult;
        bad[2][2] = SVec::unit(3, 0, Q);
        let r = from_presentation(hp.hopf().clone(), bad, hp.bracket().clone());
        assert!(r.is_err());
    }

    #[test]
    fn b_action_and_twist() {
        let hp = build_kpar_group(&GroupTable::cyclic(3), Q).unwrap();
        let pa = b_partial_action(&hp).unwrap();
        // Restriction of the action to B is multiplication: e_h ▷ u = e_h u,
        // i.e. the action of h on 1_B is e_h.
        for h in 0..3 {
            let e_h = SVec::unit(3, h, Q);
            let one_b = pa.algebra().unit();
            let got = pa.act(&e_h, one_b);
            let expected = hp
                .base()
                .space
                .coordinates(hp.e_map().col(h))
                .unwrap();
            assert_eq!(got, expected, "h·1_B = e_h at h={h}");
        }

        // Twist: left B-module from the extension, then right, then back.
        let mats: Vec<SparseMat> = (0..3).map(|h| pa.act_mat(h)).collect();
        let left = Module::left_unchecked(
            hp.algebra().clone(),
            pa.dim_a(),
            extend_rep_mats(&hp, &mats, pa.dim_a()).unwrap(),
        );
        let right = twist_left_to_right(&hp, &left);
        let back = twist_right_to_left(&hp, &right);
        for i in 0..hp.dim() {
            assert_eq!(left.left_action()[i], back.left_action()[i]);
        }
        // The right action matches b ◁ [h] = [S(h_(1))] b [h_(2)] on B.
        for h in 0..3 {
            let s_h = hp.hopf().antipode_of(&SVec::unit(3, h, Q));
            let mut expected = SparseMat::zero(Q, pa.dim_a(), pa.dim_a());
            for (i, c) in s_h.iter() {
                expected = expected.add(&pa.act_mat(*i).scale(c));
            }
            let got = right.right_operator(hp.bracket().col(h));
            // b◁[h] is the action of S([h]) = [S(h)] on the left; on B the
            // extension of the partial action realizes exactly λ_{S(h)}.
            assert_eq!(got, expected, "right action at h={h}");
        }
    }

    #[test]
    fn hpar_over_prime_fields() {
        let f2 = FieldSpec::prime(2).unwrap();
        let hp = build_kpar_group(&GroupTable::cyclic(2), f2).unwrap();
        assert_eq!(hp.dim(), 3);
        let f3 = FieldSpec::prime(3).unwrap();
        let hp = build_kpar_group(&GroupTable::cyclic(3), f3).unwrap();
        assert_eq!(hp.dim(), 8);
        assert_eq!(hp.base().algebra.dim(), 4);
    }
}
