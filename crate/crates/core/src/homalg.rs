//! Graded pieces of cokernel modules over `A = R/W` and degree-0 Hom/Ext
//! along the 2-periodic resolution of a matrix factorization.
//!
//! Two engines compute the same cohomology. [`QuotientComplex`] works with
//! `Mat(R_a)` modulo the image of the target's presentation matrix and
//! handles any weighted ring. [`NormalFormComplex`] applies when both
//! presentations read `S + c·x·I` with `x` of weight `deg S`: eliminating `x`
//! identifies `E_d` with `P_d^n`, and the cochains become `Mat(P_{i·deg S})`
//! with differentials `Φ ↦ Φ·S_E ∓ (c_E/c_F)·S_F·Φ`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::linalg::{rref, sparse_rank, Matrix, RankMethod, SparseCols};
use crate::mf::{double_cover_mf, MatrixFactorization};
use crate::poly::{Monomial, SparsePoly, WeightedRing};
use crate::polymat::PolyMatrix;

/// Monomial bases per degree with index lookup and product tables.
#[derive(Clone, Debug)]
pub struct GradedTable {
    ring: Arc<WeightedRing>,
    bases: BTreeMap<i64, Vec<Monomial>>,
    index: BTreeMap<i64, BTreeMap<Vec<u16>, u32>>,
    products: BTreeMap<(i64, i64), Vec<u32>>,
}

impl GradedTable {
    pub fn new(ring: &Arc<WeightedRing>) -> Self {
        GradedTable { ring: ring.clone(), bases: BTreeMap::new(), index: BTreeMap::new(), products: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<WeightedRing> {
        &self.ring
    }

    fn ensure(&mut self, d: i64) {
        if !self.bases.contains_key(&d) {
            let basis = self.ring.monomial_basis(d);
            let idx = basis.iter().enumerate().map(|(i, m)| (m.exps().to_vec(), i as u32)).collect();
            self.bases.insert(d, basis);
            self.index.insert(d, idx);
        }
    }

    pub fn dim(&mut self, d: i64) -> usize {
        self.ensure(d);
        self.bases[&d].len()
    }

    pub fn basis(&mut self, d: i64) -> &[Monomial] {
        self.ensure(d);
        &self.bases[&d]
    }

    /// `table[u·dim_b + t]` is the index of `basis_a[u]·basis_b[t]` in degree `a + b`.
    pub fn product_table(&mut self, a: i64, b: i64) -> &[u32] {
        if !self.products.contains_key(&(a, b)) {
            self.ensure(a);
            self.ensure(b);
            self.ensure(a + b);
            let target = &self.index[&(a + b)];
            let mut table = Vec::with_capacity(self.bases[&a].len() * self.bases[&b].len());
            let mut exps = Vec::new();
            for u in &self.bases[&a] {
                for t in &self.bases[&b] {
                    exps.clear();
                    exps.extend(u.exps().iter().zip(t.exps()).map(|(x, y)| x + y));
                    table.push(target[&exps]);
                }
            }
            self.products.insert((a, b), table);
        }
        &self.products[&(a, b)]
    }

    /// Coefficients of a polynomial homogeneous of degree `d` in the degree-`d` basis.
    pub fn coords(&mut self, p: &SparsePoly, d: i64) -> Result<Vec<(u32, Fe)>> {
        self.ensure(d);
        let idx = &self.index[&d];
        p.terms()
            .map(|(m, &c)| {
                if m.degree() as i64 != d {
                    return Err(Error::NotHomogeneous);
                }
                Ok((idx[m.exps()], c))
            })
            .collect()
    }

    /// Row-major coordinates of every entry of a matrix of degree-`d` forms.
    pub fn matrix_coords(&mut self, m: &PolyMatrix, d: i64) -> Result<Vec<Vec<(u32, Fe)>>> {
        m.entries().iter().map(|p| self.coords(p, d)).collect()
    }
}

/// A linear operator on `Mat_{m×n}(R_a)` of the form `Φ ↦ rc·Φ·Rt + lc·Lf·Φ`.
struct Operator<'a> {
    m: usize,
    n: usize,
    /// `n × n` right factor, row-major coordinates in degree `delta`.
    right: Option<(&'a [Vec<(u32, Fe)>], Fe)>,
    /// `m × m` left factor.
    left: Option<(&'a [Vec<(u32, Fe)>], Fe)>,
    delta: i64,
}

impl Operator<'_> {
    /// Image of the basis element `E_{rc}·u` as a sorted sparse vector in
    /// `Mat_{m×n}(R_{a+delta})`.
    fn apply(&self, field: &FieldSpec, prod: &[u32], dim_b: usize, dim_t: usize, r: usize, c: usize, u: usize, out: &mut Vec<(u32, Fe)>) {
        out.clear();
        let (m, n) = (self.m, self.n);
        let row_of = |i: usize, j: usize, t: u32| ((i * n + j) * dim_t) as u32 + prod[u * dim_b + t as usize];
        if let Some((right, rc)) = self.right {
            for k in 0..n {
                for &(t, v) in &right[c * n + k] {
                    out.push((row_of(r, k, t), field.mul(rc, v)));
                }
            }
        }
        if let Some((left, lc)) = self.left {
            for k in 0..m {
                for &(t, v) in &left[k * m + r] {
                    out.push((row_of(k, c, t), field.mul(lc, v)));
                }
            }
        }
        merge_sorted(field, out);
    }
}

fn merge_sorted(field: &FieldSpec, v: &mut Vec<(u32, Fe)>) {
    v.sort_unstable_by_key(|e| e.0);
    let mut w = 0;
    for i in 0..v.len() {
        if w > 0 && v[w - 1].0 == v[i].0 {
            v[w - 1].1 = field.add(v[w - 1].1, v[i].1);
        } else {
            v[w] = v[i];
            w += 1;
        }
    }
    v.truncate(w);
    v.retain(|e| !e.1.is_zero());
}

/// Columns of `op` over the basis of `Mat_{m×n}(R_a)`.
fn operator_columns(table: &mut GradedTable, op: &Operator, a: i64) -> SparseCols {
    let field = *table.ring().field();
    let dim_a = table.dim(a);
    let dim_b = table.dim(op.delta);
    let dim_t = table.dim(a + op.delta);
    let prod = table.product_table(a, op.delta).to_vec();
    let mut out = SparseCols::new(op.m * op.n * dim_t);
    let mut buf = Vec::new();
    for r in 0..op.m {
        for c in 0..op.n {
            for u in 0..dim_a {
                op.apply(&field, &prod, dim_b, dim_t, r, c, u, &mut buf);
                out.cols.push(buf.clone());
            }
        }
    }
    out
}

/// `coker(D)` over `A = R/W`, with `D·D' = W·I` for the stored partner `D'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    pub potential: SparsePoly,
    pub d: PolyMatrix,
    pub partner: PolyMatrix,
    /// Generator twists; all zero for the cokernels used here.
    pub twists: Vec<i64>,
    /// `(S, c)` when `D = S + c·x·I`, `x` the last variable, `S` free of `x`.
    normal_form: Option<(PolyMatrix, Fe)>,
}

impl GradedPresentation {
    pub fn from_mf(mf: &MatrixFactorization) -> Self {
        GradedPresentation { potential: mf.w.clone(), d: mf.b.clone(), partner: mf.c.clone(), twists: vec![0; mf.n], normal_form: None }
    }

    /// `coker(S + i·x·I)` on the double cover `W = S² + x²`.
    pub fn double_cover(s: &PolyMatrix) -> Result<Self> {
        let mf = double_cover_mf(s)?;
        let mut pres = Self::from_mf(&mf);
        pres.normal_form = Some((s.clone(), s.ring().field().sqrt_neg_one()));
        Ok(pres)
    }

    pub fn ring(&self) -> &Arc<WeightedRing> {
        self.d.ring()
    }

    pub fn size(&self) -> usize {
        self.d.rows()
    }

    pub fn degree(&self) -> i64 {
        self.d.entry_degree().unwrap_or(0) as i64
    }

    pub fn normal_form(&self) -> Option<&(PolyMatrix, Fe)> {
        self.normal_form.as_ref()
    }
}

/// Basis of `E_d` as unit vectors of `R_d^n` (generator-major) that survive
/// the relations `D·R_{d−deg D}^n + W·R_{d−deg W}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePiece {
    pub degree: i64,
    pub dim: usize,
    pub basis: Vec<usize>,
}

pub fn module_piece(pres: &GradedPresentation, d: i64) -> Result<ModulePiece> {
    if d < 0 {
        return Ok(ModulePiece { degree: d, dim: 0, basis: Vec::new() });
    }
    let field = *pres.ring().field();
    let n = pres.size();
    let mut table = GradedTable::new(pres.ring());
    let dim_d = table.dim(d);
    let mut relations: Vec<Vec<Fe>> = Vec::new();
    let delta = pres.degree();
    let dmat = table.matrix_coords(&pres.d, delta)?;
    if d >= delta {
        let prod = table.product_table(d - delta, delta).to_vec();
        let dim_b = table.dim(delta);
        for c in 0..n {
            for u in 0..table.dim(d - delta) {
                let mut row = vec![Fe::ZERO; n * dim_d];
                for k in 0..n {
                    for &(t, v) in &dmat[k * n + c] {
                        let i = k * dim_d + prod[u * dim_b + t as usize] as usize;
                        row[i] = field.add(row[i], v);
                    }
                }
                relations.push(row);
            }
        }
    }
    if let Some(dw) = pres.potential.homogeneous_degree().map(|x| x as i64) {
        if d >= dw {
            let w = table.coords(&pres.potential, dw)?;
            let prod = table.product_table(d - dw, dw).to_vec();
            let dim_b = table.dim(dw);
            for c in 0..n {
                for u in 0..table.dim(d - dw) {
                    let mut row = vec![Fe::ZERO; n * dim_d];
                    for &(t, v) in &w {
                        row[c * dim_d + prod[u * dim_b + t as usize] as usize] = v;
                    }
                    relations.push(row);
                }
            }
        }
    }
    let pivots = if relations.is_empty() {
        Vec::new()
    } else {
        let mut m = Matrix::from_rows(&relations);
        rref(&field, &mut m)
    };
    let basis: Vec<usize> = (0..n * dim_d).filter(|i| !pivots.contains(i)).collect();
    Ok(ModulePiece { degree: d, dim: basis.len(), basis })
}

/// Dimensions of one cohomology group with the numbers that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtDims {
    pub i: usize,
    pub cochain_dim: usize,
    pub dim_kernel: usize,
    pub dim_image: usize,
    pub dim_ext: usize,
    /// False when some rank came from a random projection (an upper bound on `dim_ext`).
    pub exact: bool,
}

impl ExtDims {
    fn new(i: usize, cochain_dim: usize, dim_kernel: usize, dim_image: usize, exact: bool) -> Self {
        ExtDims { i, cochain_dim, dim_kernel, dim_image, dim_ext: dim_kernel - dim_image, exact }
    }
}

fn check_compatible(e: &GradedPresentation, f: &GradedPresentation) -> Result<()> {
    if e.potential != f.potential {
        return Err(Error::PotentialMismatch);
    }
    Ok(())
}

/// Degree-0 complex `Hom(F_•, F)` for `F_•` the periodic resolution of `E`,
/// realised inside `Mat(R_a)` modulo `D_F·Mat(R_{a−deg D_F})`.
pub struct QuotientComplex {
    table: GradedTable,
    m: usize,
    n: usize,
    maps: [Vec<Vec<(u32, Fe)>>; 2],
    map_degrees: [i64; 2],
    target: Vec<Vec<(u32, Fe)>>,
    target_degree: i64,
    seed: u64,
}

impl QuotientComplex {
    pub fn new(e: &GradedPresentation, f: &GradedPresentation, seed: u64) -> Result<Self> {
        check_compatible(e, f)?;
        let mut table = GradedTable::new(e.ring());
        let (db, dc) = (e.degree(), e.partner.entry_degree().unwrap_or(0) as i64);
        let maps = [table.matrix_coords(&e.d, db)?, table.matrix_coords(&e.partner, dc)?];
        let target_degree = f.degree();
        let target = table.matrix_coords(&f.d, target_degree)?;
        Ok(QuotientComplex { table, m: f.size(), n: e.size(), maps, map_degrees: [db, dc], target, target_degree, seed })
    }

    fn position(&self, i: usize) -> i64 {
        (0..i).map(|j| self.map_degrees[j % 2]).sum()
    }

    fn relations(&mut self, a: i64) -> SparseCols {
        let src = a - self.target_degree;
        if src < 0 {
            return SparseCols::new(self.m * self.n * self.table.dim(a));
        }
        let target = self.target.clone();
        let op = Operator { m: self.m, n: self.n, right: None, left: Some((&target, Fe::ONE)), delta: self.target_degree };
        operator_columns(&mut self.table, &op, src)
    }

    fn map(&mut self, i: usize) -> SparseCols {
        let a = self.position(i);
        let which = i % 2;
        let map = self.maps[which].clone();
        let op = Operator { m: self.m, n: self.n, right: Some((&map, Fe::ONE)), left: None, delta: self.map_degrees[which] };
        operator_columns(&mut self.table, &op, a)
    }

    fn rank(&self, a: &SparseCols, salt: u64) -> (usize, bool) {
        let (r, method) = sparse_rank(self.table.ring().field(), a, self.seed ^ salt);
        (r, method == RankMethod::Exact)
    }

    pub fn ext(&mut self, i: usize) -> ExtDims {
        let a = self.position(i);
        let b = self.position(i + 1);
        let dim_v = self.m * self.n * self.table.dim(a);
        let n_a = self.relations(a);
        let n_b = self.relations(b);
        let (rank_na, e1) = self.rank(&n_a, 1);
        let (rank_nb, e2) = self.rank(&n_b, 2);
        let mut f_and_nb = self.map(i);
        f_and_nb.cols.extend(n_b.cols);
        let (rank_fnb, e3) = self.rank(&f_and_nb, 3);
        let preimage = dim_v + rank_nb - rank_fnb;
        let kernel = preimage - rank_na;
        let (image, e4) = if i == 0 {
            (0, true)
        } else {
            let mut g = self.map(i - 1);
            g.cols.extend(n_a.cols);
            let (r, e) = self.rank(&g, 4);
            (r - rank_na, e)
        };
        ExtDims::new(i, dim_v - rank_na, kernel, image, e1 && e2 && e3 && e4)
    }
}

/// Which cochain subspace a block of a split differential acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Whole,
    /// `τ`-invariant part, `τ(Φ) = J·Φᵀ·J` with `J` the antidiagonal identity.
    Symmetric,
    AntiSymmetric,
}

/// Cochains `Mat_{m×n}(P_{i·δ})` with `d_i(Φ) = Φ·S_E ∓ κ·S_F·Φ`, the sign
/// being `−` for even `i`.
pub struct NormalFormComplex {
    table: GradedTable,
    m: usize,
    n: usize,
    s_e: Vec<Vec<(u32, Fe)>>,
    s_f: Vec<Vec<(u32, Fe)>>,
    delta: i64,
    kappa: Fe,
    split: bool,
    seed: u64,
    ranks: BTreeMap<usize, (usize, bool)>,
}

impl NormalFormComplex {
    pub fn new(e: &GradedPresentation, f: &GradedPresentation, seed: u64) -> Result<Self> {
        check_compatible(e, f)?;
        let ((se, ce), (sf, cf)) = match (e.normal_form(), f.normal_form()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidArgument("presentation is not of the form S + c·x·I".into())),
        };
        let field = *se.ring().field();
        let delta = se.entry_degree().unwrap_or(0) as i64;
        let mut table = GradedTable::new(se.ring());
        let s_e = table.matrix_coords(se, delta)?;
        let s_f = table.matrix_coords(sf, delta)?;
        let kappa = field.div(*ce, *cf);
        let split = se == sf && kappa == Fe::ONE && se.antitranspose() == -se;
        Ok(NormalFormComplex { table, m: sf.rows(), n: se.rows(), s_e, s_f, delta, kappa, split, seed, ranks: BTreeMap::new() })
    }

    /// Whether the `τ` splitting is used for ranks.
    pub fn is_split(&self) -> bool {
        self.split
    }

    pub fn cochain_dim(&mut self, i: usize) -> usize {
        self.m * self.n * self.table.dim(i as i64 * self.delta)
    }

    fn sign(&self, i: usize) -> Fe {
        let f = self.table.ring().field();
        if i % 2 == 0 { f.neg(self.kappa) } else { self.kappa }
    }

    /// Full differential `d_i` as sparse columns.
    pub fn differential(&mut self, i: usize) -> SparseCols {
        let sign = self.sign(i);
        let (s_e, s_f) = (self.s_e.clone(), self.s_f.clone());
        let op = Operator { m: self.m, n: self.n, right: Some((&s_e, Fe::ONE)), left: Some((&s_f, sign)), delta: self.delta };
        operator_columns(&mut self.table, &op, i as i64 * self.delta)
    }

    /// `d_i` restricted to one `τ`-eigenspace, written in coordinates of the
    /// eigenspace it maps into.
    pub fn differential_block(&mut self, i: usize, block: Block) -> SparseCols {
        if block == Block::Whole {
            return self.differential(i);
        }
        let n = self.n;
        let field = *self.table.ring().field();
        let a = i as i64 * self.delta;
        let dim_a = self.table.dim(a);
        let dim_b = self.table.dim(self.delta);
        let dim_t = self.table.dim(a + self.delta);
        let prod = self.table.product_table(a, self.delta).to_vec();
        let tau = |r: usize, c: usize| (n - 1 - c, n - 1 - r);
        let source_sym = block == Block::Symmetric;
        // d_B commutes with τ and d_C anticommutes.
        let target_sym = if i % 2 == 0 { source_sym } else { !source_sym };
        let reps = |sym: bool| -> Vec<(usize, usize)> {
            let mut v = Vec::new();
            for r in 0..n {
                for c in 0..n {
                    let t = tau(r, c);
                    if (r, c) < t || ((r, c) == t && sym) {
                        v.push((r, c));
                    }
                }
            }
            v
        };
        let src = reps(source_sym);
        let dst = reps(target_sym);
        let mut dst_index = vec![u32::MAX; n * n];
        for (k, &(r, c)) in dst.iter().enumerate() {
            dst_index[r * n + c] = k as u32;
        }
        let sign = self.sign(i);
        let op = Operator { m: n, n, right: Some((&self.s_e, Fe::ONE)), left: Some((&self.s_f, sign)), delta: self.delta };
        let minus = field.neg(Fe::ONE);
        let mut out = SparseCols::new(dst.len() * dim_t);
        let (mut b1, mut b2) = (Vec::new(), Vec::new());
        for &(r, c) in &src {
            let (tr, tc) = tau(r, c);
            for u in 0..dim_a {
                op.apply(&field, &prod, dim_b, dim_t, r, c, u, &mut b1);
                if (tr, tc) != (r, c) {
                    op.apply(&field, &prod, dim_b, dim_t, tr, tc, u, &mut b2);
                    let s = if source_sym { Fe::ONE } else { minus };
                    b1.extend(b2.iter().map(|&(k, v)| (k, field.mul(s, v))));
                    merge_sorted(&field, &mut b1);
                }
                let col: Vec<(u32, Fe)> = b1
                    .iter()
                    .filter_map(|&(row, v)| {
                        let pos = row as usize / dim_t;
                        let k = dst_index[pos];
                        (k != u32::MAX).then(|| (k * dim_t as u32 + row % dim_t as u32, v))
                    })
                    .collect();
                out.cols.push(col);
            }
        }
        out
    }

    /// `rank d_i` (cached); the flag is false if a projection was involved.
    pub fn rank(&mut self, i: usize) -> (usize, bool) {
        if let Some(&r) = self.ranks.get(&i) {
            return r;
        }
        let field = *self.table.ring().field();
        let blocks: &[Block] = if self.split { &[Block::Symmetric, Block::AntiSymmetric] } else { &[Block::Whole] };
        let mut total = (0, true);
        for (k, &b) in blocks.iter().enumerate() {
            let cols = self.differential_block(i, b);
            let (r, method) = sparse_rank(&field, &cols, self.seed ^ ((i as u64) << 8) ^ k as u64);
            total.0 += r;
            total.1 &= method == RankMethod::Exact;
        }
        self.ranks.insert(i, total);
        total
    }

    pub fn ext(&mut self, i: usize) -> ExtDims {
        let dim = self.cochain_dim(i);
        let (ri, ei) = self.rank(i);
        let (rprev, eprev) = if i == 0 { (0, true) } else { self.rank(i - 1) };
        ExtDims::new(i, dim, dim - ri, rprev, ei && eprev)
    }
}

/// `Ext^i(E, F)` in internal degree 0, choosing the normal-form engine when
/// both presentations allow it.
pub fn ext_sheaf(e: &GradedPresentation, f: &GradedPresentation, i: usize, seed: u64) -> Result<ExtDims> {
    if e.normal_form().is_some() && f.normal_form().is_some() {
        Ok(NormalFormComplex::new(e, f, seed)?.ext(i))
    } else {
        Ok(QuotientComplex::new(e, f, seed)?.ext(i))
    }
}

pub fn hom_sheaf(e: &GradedPresentation, f: &GradedPresentation, seed: u64) -> Result<ExtDims> {
    ext_sheaf(e, f, 0, seed)
}

/// `(dim Ext⁰, …, dim Ext^{max_i})` of `E` with itself.
pub fn spherical_profile(pres: &GradedPresentation, max_i: usize, seed: u64) -> Result<Vec<ExtDims>> {
    if pres.normal_form().is_some() {
        let mut cx = NormalFormComplex::new(pres, pres, seed)?;
        Ok((0..=max_i).map(|i| cx.ext(i)).collect())
    } else {
        let mut cx = QuotientComplex::new(pres, pres, seed)?;
        Ok((0..=max_i).map(|i| cx.ext(i)).collect())
    }
}
