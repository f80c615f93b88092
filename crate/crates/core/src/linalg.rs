//! Exact sparse linear algebra over Q and prime fields.
//!
//! Everything downstream (tensor quotients, Hom spaces, homology, spectral
//! sequences) reduces to the operations here: rank/kernel/image, solving,
//! quotient spaces with explicit projection and section, and subspace
//! arithmetic. All arithmetic is exact; there is no rounding anywhere.
//!
//! Elimination is a left-looking column echelon: each incoming column is
//! reduced against the pivots found so far and, if independent, becomes a new
//! pivot at its lowest nonzero row. Columns are processed in input order, so
//! pivot choice realizes the deterministic lowest-(row, col) rule and every
//! result is reproducible bit for bit.

use crate::field::{FieldSpec, Scalar};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Sparse vector: sorted entries, no explicit zeros. Field-agnostic; the
/// containers (matrices, subspaces) carry the field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SVec {
    dim: usize,
    entries: Vec<(usize, Scalar)>,
}

impl SVec {
    pub fn zero(dim: usize) -> Self {
        SVec { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, i: usize, field: FieldSpec) -> Self {
        assert!(i < dim, "unit index {i} out of range {dim}");
        SVec { dim, entries: vec![(i, field.one())] }
    }

    /// Builds from arbitrary (index, scalar) pairs: sorts, merges duplicates,
    /// drops zeros.
    pub fn from_entries(dim: usize, mut raw: Vec<(usize, Scalar)>) -> Self {
        raw.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Scalar)> = Vec::with_capacity(raw.len());
        for (i, c) in raw {
            assert!(i < dim, "index {i} out of range {dim}");
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.add(&c),
                _ => entries.push((i, c)),
            }
            if let Some((_, acc)) = entries.last() {
                if acc.is_zero() {
                    entries.pop();
                }
            }
        }
        SVec { dim, entries }
    }

    pub fn from_dense(field: FieldSpec, dense: &[i64]) -> Self {
        SVec::from_entries(
            dense.len(),
            dense
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i, field.from_i64(v)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &Scalar) -> SVec {
        if c.is_zero() {
            return SVec::zero(self.dim);
        }
        SVec {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, v)| (*i, v.mul(c))).collect(),
        }
    }

    pub fn neg(&self) -> SVec {
        SVec {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, v)| (*i, v.neg())).collect(),
        }
    }

    /// self + c * other, by sorted merge.
    pub fn add_scaled(&self, other: &SVec, c: &Scalar) -> SVec {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add_scaled");
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0usize, 0usize);
        while a < self.entries.len() || b < other.entries.len() {
            let pick_a = match (self.entries.get(a), other.entries.get(b)) {
                (Some((i, _)), Some((j, _))) => {
                    if i == j {
                        let v = self.entries[a].1.add(&other.entries[b].1.mul(c));
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a += 1;
                        b += 1;
                        continue;
                    }
                    i < j
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_a {
                out.push(self.entries[a].clone());
                a += 1;
            } else {
                let (j, v) = &other.entries[b];
                out.push((*j, v.mul(c)));
                b += 1;
            }
        }
        SVec { dim: self.dim, entries: out }
    }

    pub fn add(&self, other: &SVec) -> SVec {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().one()),
        }
    }

    pub fn sub(&self, other: &SVec) -> SVec {
        self.add(&other.neg())
    }

    /// Embeds into a larger space with indices shifted by `offset`.
    pub fn shift(&self, new_dim: usize, offset: usize) -> SVec {
        SVec {
            dim: new_dim,
            entries: self
                .entries
                .iter()
                .map(|(i, c)| {
                    assert!(i + offset < new_dim, "shift out of range");
                    (i + offset, c.clone())
                })
                .collect(),
        }
    }

    /// Restriction to the index window [lo, hi), reindexed from 0.
    pub fn window(&self, lo: usize, hi: usize) -> SVec {
        SVec {
            dim: hi - lo,
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= lo && *i < hi)
                .map(|(i, c)| (i - lo, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, field: FieldSpec) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.dim];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }
}

/// Sparse matrix stored column-major, with an explicit field so empty and
/// zero matrices stay unambiguous.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseMat {
    field: FieldSpec,
    rows: usize,
    cols: Vec<SVec>,
}

impl SparseMat {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SparseMat { field, rows, cols: vec![SVec::zero(rows); cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        SparseMat {
            field,
            rows: n,
            cols: (0..n).map(|i| SVec::unit(n, i, field)).collect(),
        }
    }

    pub fn from_cols(field: FieldSpec, rows: usize, cols: Vec<SVec>) -> Self {
        for c in &cols {
            assert_eq!(c.dim(), rows, "column dimension mismatch");
        }
        SparseMat { field, rows, cols }
    }

    pub fn from_triplets(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, Scalar)],
    ) -> Self {
        let mut per_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(*r < rows && *c < cols, "triplet out of range");
            per_col[*c].push((*r, v.clone()));
        }
        SparseMat {
            field,
            rows,
            cols: per_col
                .into_iter()
                .map(|raw| SVec::from_entries(rows, raw))
                .collect(),
        }
    }

    pub fn from_dense(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    triplets.push((i, j, field.from_i64(v)));
                }
            }
        }
        SparseMat::from_triplets(field, r, c, &triplets)
    }

    /// Columns given by a function from column index to vector.
    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, f: impl Fn(usize) -> SVec) -> Self {
        SparseMat::from_cols(field, rows, (0..cols).map(f).collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> impl Iterator<Item = &SVec> {
        self.cols.iter()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col.iter() {
                out.push((*i, j, v.clone()));
            }
        }
        out
    }

    /// y = M x.
    pub fn apply(&self, x: &SVec) -> SVec {
        assert_eq!(x.dim(), self.cols.len(), "apply dimension mismatch");
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, c) in x.iter() {
            for (i, v) in self.cols[*j].iter() {
                let t = v.mul(c);
                match acc.get_mut(i) {
                    Some(s) => *s = s.add(&t),
                    None => {
                        acc.insert(*i, t);
                    }
                }
            }
        }
        SVec {
            dim: self.rows,
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// self ∘ rhs.
    pub fn compose(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.cols.len(), rhs.rows, "compose dimension mismatch");
        assert_eq!(self.field, rhs.field, "compose field mismatch");
        let cols: Vec<SVec> = rhs.cols.par_iter().map(|c| self.apply(c)).collect();
        SparseMat { field: self.field, rows: self.rows, cols }
    }

    pub fn transpose(&self) -> SparseMat {
        let mut per_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col.iter() {
                per_col[*i].push((j, v.clone()));
            }
        }
        SparseMat {
            field: self.field,
            rows: self.cols.len(),
            cols: per_col
                .into_iter()
                .map(|raw| SVec::from_entries(self.cols.len(), raw))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMat {
        SparseMat {
            field: self.field,
            rows: self.rows,
            cols: self.cols.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols.len(), other.cols.len());
        SparseMat {
            field: self.field,
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    /// [self | other].
    pub fn hstack(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        assert_eq!(self.field, other.field, "hstack field mismatch");
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        SparseMat { field: self.field, rows: self.rows, cols }
    }

    /// Kronecker product: column (a,b) is col_a ⊗ col_b with tensor index
    /// i·other.rows + j (left factor major).
    pub fn kron(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.field, other.field, "kron field mismatch");
        let rows = self.rows * other.rows;
        let mut cols = Vec::with_capacity(self.cols.len() * other.cols.len());
        for ca in &self.cols {
            for cb in &other.cols {
                let mut entries = Vec::with_capacity(ca.nnz() * cb.nnz());
                for (i, u) in ca.iter() {
                    for (j, v) in cb.iter() {
                        entries.push((i * other.rows + j, u.mul(v)));
                    }
                }
                cols.push(SVec::from_entries(rows, entries));
            }
        }
        SparseMat { field: self.field, rows, cols }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.field, other.field, "direct_sum field mismatch");
        let rows = self.rows + other.rows;
        let mut cols: Vec<SVec> = self.cols.iter().map(|c| c.shift(rows, 0)).collect();
        cols.extend(other.cols.iter().map(|c| c.shift(rows, self.rows)));
        SparseMat { field: self.field, rows, cols }
    }
}

/// Column echelon set keyed by pivot row. Each stored column is monic with
/// its lowest nonzero index equal to its pivot row, so a single ascending
/// scan fully reduces any vector to the canonical representative supported
/// off the pivot rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    dim: usize,
    cols: BTreeMap<usize, SVec>,
}

pub enum Inserted {
    /// Vector was independent; a pivot was created at this row.
    Pivot(usize),
    /// Vector reduced to a form with no support below the pivot limit.
    Dependent(SVec),
}

impl Echelon {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        Echelon { field, dim, cols: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.cols.keys().copied()
    }

    pub fn basis(&self) -> impl Iterator<Item = &SVec> {
        self.cols.values()
    }

    pub fn into_basis(self) -> Vec<SVec> {
        self.cols.into_values().collect()
    }

    pub fn column_at_pivot(&self, row: usize) -> Option<&SVec> {
        self.cols.get(&row)
    }

    /// Fully reduces `v`: eliminates at every pivot row, ascending. The
    /// result is the canonical coset representative (supported off pivot
    /// rows) because stored columns only reach indices at or above their
    /// pivot.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut w = v.clone();
        let mut scan = 0usize;
        loop {
            let hit = w
                .iter()
                .find(|(i, _)| *i >= scan && self.cols.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            match hit {
                None => return w,
                Some((i, c)) => {
                    let col = &self.cols[&i];
                    w = w.add_scaled(col, &c.neg());
                    scan = i + 1;
                }
            }
        }
    }

    /// Reduces and inserts if a pivot below `limit` exists. Pass
    /// `limit = dim` for plain insertion.
    pub fn insert_with_limit(&mut self, v: &SVec, limit: usize) -> Inserted {
        let w = self.reduce(v);
        match w.leading() {
            Some((i, c)) if i < limit => {
                let monic = w.scale(&c.inv());
                self.cols.insert(i, monic);
                Inserted::Pivot(i)
            }
            _ => Inserted::Dependent(w),
        }
    }

    pub fn insert(&mut self, v: &SVec) -> Inserted {
        self.insert_with_limit(v, self.dim)
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

/// Explicit subspace with a canonical echelon basis.
#[derive(Debug)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    basis: Vec<SVec>,
    coord_solver: OnceLock<Solver>,
}

impl Clone for Subspace {
    fn clone(&self) -> Self {
        Subspace {
            field: self.field,
            ambient: self.ambient,
            basis: self.basis.clone(),
            coord_solver: OnceLock::new(),
        }
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace { field, ambient, basis: Vec::new(), coord_solver: OnceLock::new() }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace::from_span(
            field,
            ambient,
            (0..ambient).map(|i| SVec::unit(ambient, i, field)).collect(),
        )
    }

    /// Echelonizes the spanning set; the resulting basis is canonical for the
    /// given input order.
    pub fn from_span(field: FieldSpec, ambient: usize, vectors: Vec<SVec>) -> Self {
        let mut ech = Echelon::new(field, ambient);
        for v in &vectors {
            assert_eq!(v.dim(), ambient, "span vector dimension mismatch");
            ech.insert(v);
        }
        Subspace {
            field,
            ambient,
            basis: ech.into_basis(),
            coord_solver: OnceLock::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SVec] {
        &self.basis
    }

    pub fn basis_mat(&self) -> SparseMat {
        SparseMat::from_cols(self.field, self.ambient, self.basis.clone())
    }

    fn solver(&self) -> &Solver {
        self.coord_solver.get_or_init(|| Solver::new(&self.basis_mat()))
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in the basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &SVec) -> Option<SVec> {
        if self.basis.is_empty() {
            return v.is_zero().then(|| SVec::zero(0));
        }
        self.solver().solve(v)
    }

    pub fn member(&self, coords: &SVec) -> SVec {
        self.basis_mat().apply(coords)
    }

    pub fn add(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_span(self.field, self.ambient, vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.field, self.ambient);
        }
        // Kernel of [U | V]: U-part coordinates give the intersection.
        let stacked = self.basis_mat().hstack(&other.basis_mat());
        let ker = kernel_basis(&stacked);
        let u = self.basis_mat();
        let vs = ker.iter().map(|k| u.apply(&k.window(0, self.dim()))).collect();
        Subspace::from_span(self.field, self.ambient, vs)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }
}

/// Augmented echelon over a fixed matrix: answers `solve` queries and exposes
/// the kernel and an image basis found while echelonizing the columns.
#[derive(Clone, Debug)]
pub struct Solver {
    n: usize,
    m: usize,
    ech: Echelon,
    kernel: Vec<SVec>,
    image: Vec<SVec>,
}

impl Solver {
    pub fn new(mat: &SparseMat) -> Self {
        let field = mat.field();
        let n = mat.rows();
        let m = mat.ncols();
        let mut ech = Echelon::new(field, n + m);
        let mut kernel = Vec::new();
        let mut image = Vec::new();
        for (j, col) in mat.columns().enumerate() {
            let aug = col
                .shift(n + m, 0)
                .add(&SVec::unit(n + m, n + j, field));
            match ech.insert_with_limit(&aug, n) {
                Inserted::Pivot(row) => {
                    let stored = ech.column_at_pivot(row).expect("just inserted");
                    image.push(stored.window(0, n));
                }
                Inserted::Dependent(w) => {
                    // Tail coordinates express the zero ambient part as a
                    // combination of probe columns: a kernel vector.
                    kernel.push(w.window(n, n + m));
                }
            }
        }
        Solver { n, m, ech, kernel, image }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn kernel(&self) -> &[SVec] {
        &self.kernel
    }

    pub fn image(&self) -> &[SVec] {
        &self.image
    }

    /// Any exact solution of M x = rhs, or None when inconsistent.
    pub fn solve(&self, rhs: &SVec) -> Option<SVec> {
        assert_eq!(rhs.dim(), self.n, "solve rhs dimension mismatch");
        let w = self.ech.reduce(&rhs.shift(self.n + self.m, 0));
        if w.iter().any(|(i, _)| *i < self.n) {
            return None;
        }
        Some(w.window(self.n, self.n + self.m).neg())
    }
}

/// rank + kernel + image in one pass, per the linalg contract.
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Subspace,
    pub image: Subspace,
}

pub fn rank_kernel_image(mat: &SparseMat) -> RankKernelImage {
    let solver = Solver::new(mat);
    let rank = solver.rank();
    let kernel = Subspace::from_span(mat.field(), mat.ncols(), solver.kernel.clone());
    let image = Subspace::from_span(mat.field(), mat.rows(), solver.image.clone());
    RankKernelImage { rank, kernel, image }
}

pub fn rank(mat: &SparseMat) -> usize {
    let mut ech = Echelon::new(mat.field(), mat.rows());
    for col in mat.columns() {
        ech.insert(col);
    }
    ech.rank()
}

pub fn kernel_basis(mat: &SparseMat) -> Vec<SVec> {
    Solver::new(mat).kernel.clone()
}

pub fn solve(mat: &SparseMat, rhs: &SVec) -> Option<SVec> {
    Solver::new(mat).solve(rhs)
}

/// Quotient of an ambient space by a subspace, with explicit projection and
/// section. Quotient coordinates are the non-pivot rows of the relation
/// echelon, in ascending order.
#[derive(Clone, Debug)]
pub struct Quotient {
    field: FieldSpec,
    ambient: usize,
    dim: usize,
    projection: SparseMat,
    section: SparseMat,
    relations: Subspace,
}

impl Quotient {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projection(&self) -> &SparseMat {
        &self.projection
    }

    pub fn section(&self) -> &SparseMat {
        &self.section
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn project(&self, v: &SVec) -> SVec {
        self.projection.apply(v)
    }

    pub fn lift(&self, coords: &SVec) -> SVec {
        self.section.apply(coords)
    }
}

pub fn quotient_space(ambient: usize, sub: &Subspace) -> Result<Quotient, LinalgError> {
    if sub.ambient() != ambient {
        return Err(LinalgError::DimensionMismatch(format!(
            "quotient: subspace ambient {} vs {}",
            sub.ambient(),
            ambient
        )));
    }
    let field = sub.field();
    let mut ech = Echelon::new(field, ambient);
    for v in sub.basis() {
        ech.insert(v);
    }
    let mut is_pivot = vec![false; ambient];
    for p in ech.pivot_rows() {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ambient).filter(|i| !is_pivot[*i]).collect();
    let dim = free.len();
    let mut free_pos = vec![usize::MAX; ambient];
    for (k, &i) in free.iter().enumerate() {
        free_pos[i] = k;
    }

    // projection column i = canonical residue of e_i, reindexed to free rows.
    let proj_cols: Vec<SVec> = (0..ambient)
        .into_par_iter()
        .map(|i| {
            if !is_pivot[i] {
                return SVec::from_entries(dim, vec![(free_pos[i], field.one())]);
            }
            let red = ech.reduce(&SVec::unit(ambient, i, field));
            SVec::from_entries(
                dim,
                red.iter().map(|(j, c)| (free_pos[*j], c.clone())).collect(),
            )
        })
        .collect();
    let projection = SparseMat::from_cols(field, dim, proj_cols);
    let section = SparseMat::from_cols(
        field,
        ambient,
        free.iter().map(|&i| SVec::unit(ambient, i, field)).collect(),
    );
    Ok(Quotient {
        field,
        ambient,
        dim,
        projection,
        section,
        relations: Subspace::from_span(field, ambient, ech.into_basis()),
    })
}

/// Builds the quotient directly from relation vectors.
pub fn quotient_by_span(field: FieldSpec, ambient: usize, relations: Vec<SVec>) -> Quotient {
    quotient_space(ambient, &Subspace::from_span(field, ambient, relations))
        .expect("ambient matches by construction")
}

/// The map induced on quotients by an ambient map f, i.e. proj_dst ∘ f ∘ sect_src.
pub fn induced_on_quotients(f: &SparseMat, src: &Quotient, dst: &Quotient) -> SparseMat {
    dst.projection().compose(&f.compose(src.section()))
}

/// Whether f maps the relations of src into the relations of dst, so the
/// induced map is well defined.
pub fn descends_to_quotients(f: &SparseMat, src: &Quotient, dst: &Quotient) -> bool {
    src.relations()
        .basis()
        .iter()
        .all(|u| dst.project(&f.apply(u)).is_zero())
}

/// Preimage f^{-1}(target) as a subspace of the source.
pub fn preimage(f: &SparseMat, target: &Subspace) -> Subspace {
    assert_eq!(f.rows(), target.ambient(), "preimage ambient mismatch");
    if target.dim() == 0 {
        return Subspace::from_span(f.field(), f.ncols(), kernel_basis(f));
    }
    let stacked = f.hstack(&target.basis_mat());
    let ker = kernel_basis(&stacked);
    let vs: Vec<SVec> = ker.iter().map(|k| k.window(0, f.ncols())).collect();
    Subspace::from_span(f.field(), f.ncols(), vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rational;

    /// Dense reference elimination used as the oracle for randomized checks.
    fn dense_rank(field: FieldSpec, mat: &SparseMat) -> usize {
        let rows = mat.rows();
        let cols = mat.ncols();
        let mut a: Vec<Vec<Scalar>> = (0..cols).map(|j| mat.col(j).to_dense(field)).collect();
        let mut rank = 0;
        let mut used = vec![false; cols];
        for r in 0..rows {
            let Some(j) = (0..cols).find(|&j| !used[j] && !a[j][r].is_zero()) else {
                continue;
            };
            used[j] = true;
            rank += 1;
            let pv = a[j][r].clone();
            for k in 0..cols {
                if k != j && !a[k][r].is_zero() {
                    let f = a[k][r].div(&pv);
                    for i in 0..rows {
                        let t = a[j][i].mul(&f);
                        a[k][i] = a[k][i].sub(&t);
                    }
                }
            }
        }
        rank
    }

    fn random_sparse(rng: &mut ChaCha8Rng, field: FieldSpec, rows: usize, cols: usize) -> SparseMat {
        let mut triplets = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(0.4) {
                    let v = rng.gen_range(-3i64..=3);
                    if v != 0 {
                        triplets.push((i, j, field.from_i64(v)));
                    }
                }
            }
        }
        SparseMat::from_triplets(field, rows, cols, &triplets)
    }

    #[test]
    fn rank_empty_and_identity() {
        let empty = SparseMat::zero(Q, 0, 0);
        assert_eq!(rank_kernel_image(&empty).rank, 0);
        let id3 = SparseMat::identity(Q, 3);
        let rki = rank_kernel_image(&id3);
        assert_eq!(rki.rank, 3);
        assert_eq!(rki.kernel.dim(), 0);
        assert_eq!(rki.image.dim(), 3);
    }

    #[test]
    fn rank_one_matrix_kernel() {
        // [[1,2],[2,4]] has rank 1 and kernel spanned by (2,-1).
        let m = SparseMat::from_dense(Q, &[vec![1, 2], vec![2, 4]]);
        let rki = rank_kernel_image(&m);
        assert_eq!(rki.rank, 1);
        assert_eq!(rki.kernel.dim(), 1);
        let expected = SVec::from_dense(Q, &[2, -1]);
        assert!(rki.kernel.contains(&expected));
        for k in rki.kernel.basis() {
            assert!(m.apply(k).is_zero());
        }
    }

    #[test]
    fn kernel_of_zero_matrix_over_f2() {
        let f2 = FieldSpec::Prime(2);
        let z = SparseMat::zero(f2, 3, 2);
        let rki = rank_kernel_image(&z);
        assert_eq!(rki.rank, 0);
        assert_eq!(rki.kernel.dim(), 2);
        // Kernel vectors are F_2-valued, not rationals.
        for k in rki.kernel.basis() {
            for (_, c) in k.iter() {
                assert_eq!(c.field(), f2);
            }
        }
    }

    #[test]
    fn solve_examples() {
        let id = SparseMat::identity(Q, 2);
        let b = SVec::from_dense(Q, &[5, -7]);
        assert_eq!(solve(&id, &b).unwrap(), b);

        // Inconsistent: x + y = 1 and x + y = 2.
        let m = SparseMat::from_dense(Q, &[vec![1, 1], vec![1, 1]]);
        let bad = SVec::from_dense(Q, &[1, 2]);
        assert!(solve(&m, &bad).is_none());

        // [[1,1],[1,-1]] x = (2,0) has x = (1,1).
        let m = SparseMat::from_dense(Q, &[vec![1, 1], vec![1, -1]]);
        let rhs = SVec::from_dense(Q, &[2, 0]);
        let x = solve(&m, &rhs).unwrap();
        assert_eq!(x, SVec::from_dense(Q, &[1, 1]));
        assert_eq!(m.apply(&x), rhs);
    }

    #[test]
    fn quotient_examples() {
        // By the zero subspace: projection is the identity.
        let q = quotient_space(3, &Subspace::zero(Q, 3)).unwrap();
        assert_eq!(q.dim(), 3);
        assert_eq!(*q.projection(), SparseMat::identity(Q, 3));

        // Dim-2 by its diagonal.
        let diag = Subspace::from_span(Q, 2, vec![SVec::from_dense(Q, &[1, 1])]);
        let q = quotient_space(2, &diag).unwrap();
        assert_eq!(q.dim(), 1);

        // Q^3 by span{(1,1,0),(0,0,1)}.
        let sub = Subspace::from_span(
            Q,
            3,
            vec![SVec::from_dense(Q, &[1, 1, 0]), SVec::from_dense(Q, &[0, 0, 1])],
        );
        let q = quotient_space(3, &sub).unwrap();
        assert_eq!(q.dim(), 1);
        for v in sub.basis() {
            assert!(q.project(v).is_zero());
        }
        let ps = q.projection().compose(q.section());
        assert_eq!(ps, SparseMat::identity(Q, 1));
        assert_eq!(rank(q.projection()), 1);
        assert!(quotient_space(3, &Subspace::zero(Q, 2)).is_err());
    }

    #[test]
    fn randomized_rank_matches_dense_and_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for field in [Q, FieldSpec::Prime(5)] {
            for _ in 0..40 {
                let rows = rng.gen_range(0..=7);
                let cols = rng.gen_range(0..=7);
                let m = random_sparse(&mut rng, field, rows, cols);
                let r = rank_kernel_image(&m);
                assert_eq!(r.rank, dense_rank(field, &m), "sparse vs dense rank");
                assert_eq!(r.rank, rank(&m.transpose()), "rank(m) = rank(m^T)");
                assert_eq!(r.rank + r.kernel.dim(), cols, "rank-nullity");
                assert_eq!(r.image.dim(), r.rank);
                for k in r.kernel.basis() {
                    assert!(m.apply(k).is_zero());
                }
                for c in m.columns() {
                    assert!(r.image.contains(c));
                }
            }
        }
    }

    #[test]
    fn randomized_solve_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Q, FieldSpec::Prime(3)] {
            for _ in 0..30 {
                let rows = rng.gen_range(1..=6);
                let cols = rng.gen_range(1..=6);
                let m = random_sparse(&mut rng, field, rows, cols);
                let x = random_sparse(&mut rng, field, cols, 1);
                let rhs = m.apply(x.col(0));
                let sol = solve(&m, &rhs).expect("consistent system");
                assert_eq!(m.apply(&sol), rhs);
            }
        }
    }

    #[test]
    fn randomized_quotient_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let ambient = rng.gen_range(1..=7);
            let nvecs = rng.gen_range(0..=ambient);
            let m = random_sparse(&mut rng, Q, ambient, nvecs);
            let sub = Subspace::from_span(Q, ambient, m.columns().cloned().collect());
            let q = quotient_space(ambient, &sub).unwrap();
            assert_eq!(q.dim() + sub.dim(), ambient);
            assert_eq!(
                q.projection().compose(q.section()),
                SparseMat::identity(Q, q.dim())
            );
            assert_eq!(rank(q.projection()), q.dim());
            for v in sub.basis() {
                assert!(q.project(v).is_zero());
            }
            // x - sect(proj(x)) always lies in the subspace.
            for i in 0..ambient {
                let x = SVec::unit(ambient, i, Q);
                let back = q.lift(&q.project(&x));
                assert!(sub.contains(&x.sub(&back)));
            }
        }
    }

    #[test]
    fn subspace_arithmetic() {
        let u = Subspace::from_span(
            Q,
            3,
            vec![SVec::from_dense(Q, &[1, 0, 0]), SVec::from_dense(Q, &[0, 1, 0])],
        );
        let v = Subspace::from_span(
            Q,
            3,
            vec![SVec::from_dense(Q, &[0, 1, 0]), SVec::from_dense(Q, &[0, 0, 1])],
        );
        let cap = u.intersect(&v);
        assert_eq!(cap.dim(), 1);
        assert!(cap.contains(&SVec::from_dense(Q, &[0, 1, 0])));
        assert_eq!(u.add(&v).dim(), 3);

        let coords = u.coordinates(&SVec::from_dense(Q, &[3, -2, 0])).unwrap();
        assert_eq!(u.member(&coords), SVec::from_dense(Q, &[3, -2, 0]));
        assert!(u.coordinates(&SVec::from_dense(Q, &[0, 0, 1])).is_none());
    }

    #[test]
    fn preimage_and_induced_maps() {
        // f: Q^3 -> Q^2, f(x,y,z) = (x+y, z).
        let f = SparseMat::from_dense(Q, &[vec![1, 1, 0], vec![0, 0, 1]]);
        let target = Subspace::from_span(Q, 2, vec![SVec::from_dense(Q, &[1, 0])]);
        let pre = preimage(&f, &target);
        assert_eq!(pre.dim(), 2);
        assert!(pre.contains(&SVec::from_dense(Q, &[1, -1, 0])));
        assert!(pre.contains(&SVec::from_dense(Q, &[1, 0, 0])));
        assert!(!pre.contains(&SVec::from_dense(Q, &[0, 0, 1])));

        // Induced map on quotients: collapse the diagonal on both sides of id.
        let sub = Subspace::from_span(Q, 2, vec![SVec::from_dense(Q, &[1, 1])]);
        let q = quotient_space(2, &sub).unwrap();
        let id = SparseMat::identity(Q, 2);
        assert!(descends_to_quotients(&id, &q, &q));
        let ind = induced_on_quotients(&id, &q, &q);
        assert_eq!(ind, SparseMat::identity(Q, 1));
    }

    #[test]
    fn kron_matches_pointwise_products() {
        let a = SparseMat::from_dense(Q, &[vec![1, 2], vec![0, 1]]);
        let b = SparseMat::from_dense(Q, &[vec![0, 1], vec![1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.ncols(), 4);
        // (a ⊗ b)(e_i ⊗ e_j) = a e_i ⊗ b e_j.
        for i in 0..2 {
            for j in 0..2 {
                let e = SVec::unit(4, i * 2 + j, Q);
                let lhs = k.apply(&e);
                let ai = a.apply(&SVec::unit(2, i, Q));
                let bj = b.apply(&SVec::unit(2, j, Q));
                let mut expect = Vec::new();
                for (r, u) in ai.iter() {
                    for (s, v) in bj.iter() {
                        expect.push((r * 2 + s, u.mul(v)));
                    }
                }
                assert_eq!(lhs, SVec::from_entries(4, expect));
            }
        }
    }

    #[test]
    fn determinism_identical_reruns() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let m = random_sparse(&mut rng, Q, 8, 8);
        let a = rank_kernel_image(&m);
        let b = rank_kernel_image(&m);
        assert_eq!(a.kernel.basis(), b.kernel.basis());
        assert_eq!(a.image.basis(), b.image.basis());
        let s1 = Subspace::from_span(Q, 8, m.columns().cloned().collect());
        let q1 = quotient_space(8, &s1).unwrap();
        let q2 = quotient_space(8, &s1).unwrap();
        assert_eq!(q1.projection(), q2.projection());
    }
}
