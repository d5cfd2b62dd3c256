//! Dense and sparse exact linear algebra.
//!
//! [`rank_kernel`] works over any [`FieldSpec`] by plain Gauss–Jordan. The
//! [`modp`] kernels are the fast paths used for large rank computations over
//! a prime field with `p < 2^16`.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Fe, FieldSpec};

/// Row-major dense matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, field: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &FieldSpec, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (a, b)| field.add(acc, field.mul(*a, *b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(field: &FieldSpec, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, r * m.cols + j);
            }
        }
        let inv = field.inv(m.get(r, c));
        for j in c..m.cols {
            let v = field.mul(m.get(r, j), inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c);
            if f.is_zero() {
                continue;
            }
            for j in c..m.cols {
                let v = field.sub(m.get(i, j), field.mul(f, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank and a kernel basis (`M·v = 0`) of `m`.
pub fn rank_kernel(field: &FieldSpec, m: &Matrix) -> (usize, Vec<Vec<Fe>>) {
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Fe::ZERO; m.cols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(a.get(r, free));
        }
        kernel.push(v);
    }
    (pivots.len(), kernel)
}

pub fn rank(field: &FieldSpec, m: &Matrix) -> usize {
    if !field.ext_mode() && field.prime() < (1 << 16) {
        let data = m.data.iter().map(|x| x.re as u16).collect();
        return modp::DenseU16::new(field.prime(), m.rows, m.cols, data).rank();
    }
    let mut a = m.clone();
    rref(field, &mut a).len()
}

/// Columns of a sparse matrix: each column is a list of `(row, value)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseCols {
    pub nrows: usize,
    pub cols: Vec<Vec<(u32, Fe)>>,
}

impl SparseCols {
    pub fn new(nrows: usize) -> Self {
        SparseCols { nrows, cols: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.nrows, self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                m.set(r as usize, c, v);
            }
        }
        m
    }
}

/// How a sparse rank was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    /// Exact elimination of the full matrix.
    Exact,
    /// Elimination after a seeded random projection of the row space. The
    /// result never exceeds the true rank and falls short of it with
    /// probability at most `p^-(margin)`.
    Projected { rows: usize },
}

/// Extra projected rows beyond the column count.
pub const PROJECTION_MARGIN: usize = 8;

/// Tall matrices with at most this many entries are eliminated exactly.
pub const EXACT_DENSE_LIMIT: usize = 1 << 23;

/// Rank of a sparse matrix. Large tall matrices over small primes are first
/// compressed by a random projection seeded with `seed`; the projected rank
/// never exceeds the true one.
pub fn sparse_rank(field: &FieldSpec, a: &SparseCols, seed: u64) -> (usize, RankMethod) {
    sparse_rank_with_limit(field, a, seed, EXACT_DENSE_LIMIT)
}

/// [`sparse_rank`] with the exact-elimination threshold given explicitly.
pub fn sparse_rank_with_limit(field: &FieldSpec, a: &SparseCols, seed: u64, exact_limit: usize) -> (usize, RankMethod) {
    let small_prime = !field.ext_mode() && field.prime() < (1 << 16);
    if !small_prime {
        return (rank(field, &a.to_dense()), RankMethod::Exact);
    }
    let p = field.prime();
    let k = a.ncols() + PROJECTION_MARGIN;
    if a.nrows <= k || a.nrows * a.ncols() <= exact_limit {
        // Rows of the dense matrix are the columns of `a`.
        let mut d = modp::DenseU16::zeros(p, a.ncols(), a.nrows);
        for (c, col) in a.cols.iter().enumerate() {
            for &(r, v) in col {
                d.set(c, r as usize, v.re as u16);
            }
        }
        return (d.rank(), RankMethod::Exact);
    }
    let d = modp::project_columns(p, a, k, seed);
    (d.rank(), RankMethod::Projected { rows: k })
}

pub mod modp {
    //! Word-level kernels over `F_p` with `p < 2^16`.

    use alloc::vec;
    use alloc::vec::Vec;

    use super::SparseCols;
    use crate::rng::Rng;

    /// Pivot rows gathered before each trailing update.
    const PANEL: usize = 64;
    /// Column block width used by the trailing update.
    const COL_BLOCK: usize = 4096;

    #[inline]
    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Rows handled together by [`tiled_update`].
    const ROW_TILE: usize = 4;
    /// Column width of one tile, sized so its pivot pairs stay in L2.
    const TILE_COLS: usize = 2048;

    /// For rows `r < nr` of `block` (row stride `stride`) and columns
    /// `c0..c1`: `row_r += Σ_q pair_q·g_{r,q}` reduced mod `p`, where
    /// `pairs[q·2·span + 2(j − start) + s]` holds pivot row `2q + s` at column `j`
    /// and `g[r·kp + q]` packs the two factors.
    #[allow(clippy::too_many_arguments)]
    fn tiled_update(block: &mut [u16], stride: usize, nr: usize, c0: usize, c1: usize, start: usize, span: usize, pairs: &[i16], g: &[i32], kp: usize, p: u32) {
        assert!(block.len() >= nr * stride && c1 <= stride && g.len() >= nr * kp && pairs.len() >= kp * 2 * span);
        let mut j = c0;
        #[cfg(all(target_arch = "x86_64", target_feature = "avx512bw"))]
        if nr == ROW_TILE {
            use core::arch::x86_64::*;
            // SAFETY: avx512bw is enabled at compile time; rows r < 4 and
            // columns j + 16 <= c1 <= stride stay inside `block`, and pair
            // offsets stay below kp·2·span (checked above).
            unsafe {
                let pv = _mm512_set1_epi32(p as i32);
                let inv = _mm512_set1_ps(1.0 / p as f32);
                let zero = _mm512_setzero_si512();
                let bp = block.as_mut_ptr();
                while j + 16 <= c1 {
                    let mut acc = [zero; ROW_TILE];
                    for (r, a) in acc.iter_mut().enumerate() {
                        *a = _mm512_cvtepu16_epi32(_mm256_loadu_si256(bp.add(r * stride + j) as *const __m256i));
                    }
                    let off = 2 * (j - start);
                    for q in 0..kp {
                        let v = _mm512_loadu_si512(pairs.as_ptr().add(q * 2 * span + off) as *const _);
                        for (r, a) in acc.iter_mut().enumerate() {
                            *a = _mm512_add_epi32(*a, _mm512_madd_epi16(v, _mm512_set1_epi32(*g.get_unchecked(r * kp + q))));
                        }
                    }
                    for (r, a) in acc.iter().enumerate() {
                        let qf = _mm512_mul_ps(_mm512_cvtepi32_ps(*a), inv);
                        let quo = _mm512_cvttps_epi32(qf);
                        let mut rem = _mm512_sub_epi32(*a, _mm512_mullo_epi32(quo, pv));
                        let neg = _mm512_cmplt_epi32_mask(rem, zero);
                        rem = _mm512_mask_add_epi32(rem, neg, rem, pv);
                        let big = _mm512_cmpge_epi32_mask(rem, pv);
                        rem = _mm512_mask_sub_epi32(rem, big, rem, pv);
                        _mm256_storeu_si256(bp.add(r * stride + j) as *mut __m256i, _mm512_cvtepi32_epi16(rem));
                    }
                    j += 16;
                }
            }
        }
        for r in 0..nr {
            for c in j..c1 {
                let mut acc = block[r * stride + c] as u64;
                for q in 0..kp {
                    let gq = g[r * kp + q];
                    let (g0, g1) = ((gq & 0xffff) as u64, (gq >> 16) as u64);
                    let base = q * 2 * span + 2 * (c - start);
                    acc += pairs[base] as u64 * g0 + pairs[base + 1] as u64 * g1;
                }
                block[r * stride + c] = (acc % p as u64) as u16;
            }
        }
    }

    /// `acc[j] += pr[2j]·g0 + pr[2j+1]·g1`.
    #[inline]
    fn madd_pairs(acc: &mut [i32], pr: &[i16], g0: i32, g1: i32) {
        assert!(pr.len() >= 2 * acc.len());
        let mut done = 0;
        #[cfg(all(target_arch = "x86_64", target_feature = "avx512bw"))]
        {
            use core::arch::x86_64::*;
            let g = (g1 << 16) | g0;
            // SAFETY: the target feature is enabled at compile time and every
            // load/store stays inside `acc[..n]` and `pr[..2n]`.
            unsafe {
                let gv = _mm512_set1_epi32(g);
                let n = acc.len() / 16 * 16;
                while done < n {
                    let v = _mm512_loadu_si512(pr.as_ptr().add(2 * done) as *const _);
                    let a = _mm512_loadu_si512(acc.as_ptr().add(done) as *const _);
                    let r = _mm512_add_epi32(a, _mm512_madd_epi16(v, gv));
                    _mm512_storeu_si512(acc.as_mut_ptr().add(done) as *mut _, r);
                    done += 16;
                }
            }
        }
        #[cfg(all(target_arch = "x86_64", target_feature = "avx2", not(target_feature = "avx512bw")))]
        {
            use core::arch::x86_64::*;
            let g = (g1 << 16) | g0;
            // SAFETY: as above, with 8-lane vectors.
            unsafe {
                let gv = _mm256_set1_epi32(g);
                let n = acc.len() / 8 * 8;
                while done < n {
                    let v = _mm256_loadu_si256(pr.as_ptr().add(2 * done) as *const __m256i);
                    let a = _mm256_loadu_si256(acc.as_ptr().add(done) as *const __m256i);
                    let r = _mm256_add_epi32(a, _mm256_madd_epi16(v, gv));
                    _mm256_storeu_si256(acc.as_mut_ptr().add(done) as *mut __m256i, r);
                    done += 8;
                }
            }
        }
        for j in done..acc.len() {
            acc[j] += pr[2 * j] as i32 * g0 + pr[2 * j + 1] as i32 * g1;
        }
    }

    /// Vectorisable reduction of a `u32` modulo `p`.
    #[derive(Clone, Copy)]
    struct Reducer {
        p: u32,
        m: u32,
        /// How many `(p-1)^2` products may be added to a reduced value before overflow.
        budget: usize,
    }

    impl Reducer {
        fn new(p: u32) -> Self {
            let sq = (p as u64 - 1) * (p as u64 - 1);
            let budget = ((u32::MAX as u64 - p as u64) / sq.max(1)) as usize;
            Reducer { p, m: ((1u64 << 32) / p as u64) as u32, budget: budget.max(1) }
        }

        #[inline(always)]
        fn reduce(&self, x: u32) -> u32 {
            let q = ((x as u64 * self.m as u64) >> 32) as u32;
            let mut r = x - q * self.p;
            if r >= self.p {
                r -= self.p;
            }
            if r >= self.p {
                r -= self.p;
            }
            r
        }
    }

    /// Row-major dense matrix with entries in `[0, p)`.
    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct DenseU16 {
        p: u32,
        rows: usize,
        cols: usize,
        data: Vec<u16>,
    }

    impl DenseU16 {
        pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u16>) -> Self {
            assert!(p < (1 << 16), "prime too large for the u16 kernel");
            assert_eq!(data.len(), rows * cols, "dense data length");
            DenseU16 { p, rows, cols, data }
        }

        pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
            Self::new(p, rows, cols, vec![0; rows * cols])
        }

        #[inline]
        pub fn set(&mut self, r: usize, c: usize, v: u16) {
            self.data[r * self.cols + c] = v;
        }

        #[inline]
        pub fn get(&self, r: usize, c: usize) -> u16 {
            self.data[r * self.cols + c]
        }

        pub fn row_mut(&mut self, r: usize) -> &mut [u16] {
            &mut self.data[r * self.cols..(r + 1) * self.cols]
        }

        /// Rank by blocked right-looking elimination; consumes the matrix.
        pub fn rank(mut self) -> usize {
            let (p, rows, cols) = (self.p, self.rows, self.cols);
            if rows == 0 || cols == 0 {
                return 0;
            }
            let red = Reducer::new(p);
            let mut rank = 0;
            let mut next = 0;
            let mut buf = vec![0u32; cols];
            let mut piv: Vec<u16> = Vec::with_capacity(PANEL * cols);
            let mut piv_cols: Vec<usize> = Vec::with_capacity(PANEL);
            let mut factors: Vec<u32> = Vec::new();
            let mut acc = vec![0u32; COL_BLOCK.min(cols)];
            let mut acc_i = vec![0i32; COL_BLOCK.min(cols)];
            // Products of two i16 pairs summed into i32 lanes.
            let paired = p < (1 << 15);
            let sq = 2 * (p as u64 - 1) * (p as u64 - 1);
            let pair_budget = ((i32::MAX as u64 - p as u64) / sq.max(1)).max(1) as usize;
            let mut pairs: Vec<i16> = Vec::new();
            let mut is_piv = vec![false; cols];
            let mut start = 0;
            // The tiled kernel reduces once per panel through f32, exact below 2^24.
            let tiled = cfg!(all(target_arch = "x86_64", target_feature = "avx512bw"))
                && (p as u64 - 1) + PANEL as u64 * (p as u64 - 1) * (p as u64 - 1) < (1 << 24);
            let mut packed: Vec<i32> = Vec::new();
            while next < rows {
                piv.clear();
                piv_cols.clear();
                // Gather a panel of pivot rows, each reduced by the earlier ones.
                while piv_cols.len() < PANEL && next < rows {
                    let row = &self.data[next * cols..(next + 1) * cols];
                    // Columns before `start` are pivot columns the trailing
                    // update leaves stale; they are zero in exact arithmetic.
                    buf[..start].fill(0);
                    for (b, &v) in buf[start..].iter_mut().zip(&row[start..]) {
                        *b = v as u32;
                    }
                    next += 1;
                    let mut pending = 0;
                    for (t, &c) in piv_cols.iter().enumerate() {
                        let f = red.reduce(buf[c]);
                        if f == 0 {
                            continue;
                        }
                        if pending == red.budget {
                            buf.iter_mut().for_each(|x| *x = red.reduce(*x));
                            pending = 0;
                        }
                        let g = p - f;
                        let prow = &piv[t * cols..(t + 1) * cols];
                        for (b, &v) in buf.iter_mut().zip(prow) {
                            *b += g * v as u32;
                        }
                        pending += 1;
                    }
                    buf.iter_mut().for_each(|x| *x = red.reduce(*x));
                    let Some(lead) = buf.iter().position(|&x| x != 0) else {
                        continue;
                    };
                    let inv = inv_mod(buf[lead], p);
                    piv.extend(buf.iter().map(|&x| (x as u64 * inv as u64 % p as u64) as u16));
                    piv_cols.push(lead);
                }
                let k = piv_cols.len();
                rank += k;
                if k == 0 || next == rows {
                    continue;
                }
                // Elimination factors for every remaining row.
                let remaining = rows - next;
                factors.clear();
                factors.resize(remaining * k, 0);
                for (i, f) in factors.chunks_mut(k).enumerate() {
                    let row = &self.data[(next + i) * cols..(next + i + 1) * cols];
                    for t in 0..k {
                        let mut v = row[piv_cols[t]] as u64;
                        for s in 0..t {
                            v += (p - f[s]) as u64 * piv[s * cols + piv_cols[t]] as u64;
                        }
                        f[t] = (v % p as u64) as u32;
                    }
                    // Store the additive multipliers p - f.
                    for x in f.iter_mut() {
                        *x = if *x == 0 { 0 } else { p - *x };
                    }
                }
                // Trailing update. Pivot columns are already zero in every
                // remaining row, so the leading run of them is skipped.
                for &c in &piv_cols {
                    is_piv[c] = true;
                }
                while start < cols && is_piv[start] {
                    start += 1;
                }
                let span = cols - start;
                let kp = k.div_ceil(2);
                if paired {
                    // Pivot rows interleaved two at a time: pairs[q][2j + s] = piv[2q + s][start + j].
                    pairs.clear();
                    pairs.resize(kp * 2 * span, 0);
                    for t in 0..k {
                        let (q, s) = (t / 2, t % 2);
                        let dst = &mut pairs[q * 2 * span..(q + 1) * 2 * span];
                        for (j, &v) in piv[t * cols + start..(t + 1) * cols].iter().enumerate() {
                            dst[2 * j + s] = v as i16;
                        }
                    }
                }
                if tiled {
                    // Factor pairs packed as (g1 << 16) | g0.
                    packed.clear();
                    for f in factors.chunks(k) {
                        for q in 0..kp {
                            let g0 = f[2 * q] as i32;
                            let g1 = if 2 * q + 1 < k { f[2 * q + 1] as i32 } else { 0 };
                            packed.push((g1 << 16) | g0);
                        }
                    }
                    let trailing = &mut self.data[next * cols..];
                    let mut c0 = start;
                    while c0 < cols {
                        let c1 = (c0 + TILE_COLS).min(cols);
                        let mut i = 0;
                        while i < remaining {
                            let nr = (remaining - i).min(ROW_TILE);
                            let block = &mut trailing[i * cols..(i + nr) * cols];
                            tiled_update(block, cols, nr, c0, c1, start, span, &pairs, &packed[i * kp..(i + nr) * kp], kp, p);
                            i += nr;
                        }
                        c0 = c1;
                    }
                    continue;
                }
                let mut c0 = start;
                while c0 < cols {
                    let c1 = (c0 + COL_BLOCK).min(cols);
                    let w = c1 - c0;
                    for i in 0..remaining {
                        let f = &factors[i * k..(i + 1) * k];
                        if f.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let row = &mut self.data[(next + i) * cols + c0..(next + i) * cols + c1];
                        if paired {
                            let acc = &mut acc_i[..w];
                            for (a, &v) in acc.iter_mut().zip(row.iter()) {
                                *a = v as i32;
                            }
                            let mut pending = 0;
                            for q in 0..kp {
                                let g0 = f[2 * q] as i32;
                                let g1 = if 2 * q + 1 < k { f[2 * q + 1] as i32 } else { 0 };
                                if g0 == 0 && g1 == 0 {
                                    continue;
                                }
                                if pending == pair_budget {
                                    acc.iter_mut().for_each(|x| *x = red.reduce(*x as u32) as i32);
                                    pending = 0;
                                }
                                let base = q * 2 * span + 2 * (c0 - start);
                                madd_pairs(acc, &pairs[base..base + 2 * w], g0, g1);
                                pending += 1;
                            }
                            for (r, &a) in row.iter_mut().zip(acc.iter()) {
                                *r = red.reduce(a as u32) as u16;
                            }
                            continue;
                        }
                        let acc = &mut acc[..w];
                        for (a, &v) in acc.iter_mut().zip(row.iter()) {
                            *a = v as u32;
                        }
                        let mut pending = 0;
                        for t in 0..k {
                            let g = f[t];
                            if g == 0 {
                                continue;
                            }
                            if pending == red.budget {
                                acc.iter_mut().for_each(|x| *x = red.reduce(*x));
                                pending = 0;
                            }
                            let prow = &piv[t * cols + c0..t * cols + c1];
                            for (a, &v) in acc.iter_mut().zip(prow) {
                                *a += g * v as u32;
                            }
                            pending += 1;
                        }
                        for (r, &a) in row.iter_mut().zip(acc.iter()) {
                            *r = red.reduce(a) as u16;
                        }
                    }
                    c0 = c1;
                }
            }
            rank
        }
    }

    /// Rows of the result are `(R·A)ᵀ` for a `k × nrows` random matrix `R`
    /// whose entries are SplitMix64 outputs `seed`-indexed by `r·k + i`.
    pub fn project_columns(p: u32, a: &SparseCols, k: usize, seed: u64) -> DenseU16 {
        let red = Reducer::new(p);
        let n = a.ncols();
        let mut out = DenseU16::zeros(p, n, k);
        // Rows of R generated per chunk, column-major (contiguous in i).
        let chunk = ((1usize << 25) / k.max(1)).clamp(1, a.nrows.max(1));
        let mut rchunk = vec![0u16; chunk * k];
        let mut cursor = vec![0usize; n];
        let mut acc = vec![0u32; k];
        let mut r0 = 0;
        while r0 < a.nrows {
            let r1 = (r0 + chunk).min(a.nrows);
            for r in r0..r1 {
                let col = &mut rchunk[(r - r0) * k..(r - r0 + 1) * k];
                let base = (r as u64).wrapping_mul(k as u64);
                for (i, x) in col.iter_mut().enumerate() {
                    *x = (Rng::output_at(seed, base + i as u64) % p as u64) as u16;
                }
            }
            for c in 0..n {
                let entries = &a.cols[c];
                let start = cursor[c];
                let mut end = start;
                while end < entries.len() && (entries[end].0 as usize) < r1 {
                    end += 1;
                }
                if end == start {
                    continue;
                }
                cursor[c] = end;
                let row = &mut out.data[c * k..(c + 1) * k];
                for (x, &v) in acc.iter_mut().zip(row.iter()) {
                    *x = v as u32;
                }
                let mut pending = 0;
                for &(r, v) in &entries[start..end] {
                    if pending == red.budget {
                        acc.iter_mut().for_each(|x| *x = red.reduce(*x));
                        pending = 0;
                    }
                    let g = v.re;
                    let rc = &rchunk[(r as usize - r0) * k..(r as usize - r0 + 1) * k];
                    for (x, &w) in acc.iter_mut().zip(rc) {
                        *x += g * w as u32;
                    }
                    pending += 1;
                }
                for (o, &x) in row.iter_mut().zip(acc.iter()) {
                    *o = red.reduce(x) as u16;
                }
            }
            r0 = r1;
        }
        out
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::rng::Rng;

    #[test]
    fn identity_has_full_rank() {
        let f = make_field(313).unwrap();
        let (r, k) = rank_kernel(&f, &Matrix::identity(&f, 6));
        assert_eq!(r, 6);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_matrix_kernel() {
        let f = make_field(313).unwrap();
        let (r, k) = rank_kernel(&f, &Matrix::zeros(4, 7));
        assert_eq!(r, 0);
        assert_eq!(k.len(), 7);
    }

    #[test]
    fn signed_diagonal() {
        let f = make_field(313).unwrap();
        let mut m = Matrix::identity(&f, 6);
        for i in 3..6 {
            m.set(i, i, f.neg(f.one()));
        }
        assert_eq!(rank_kernel(&f, &m).0, 6);
        assert_eq!(rank(&f, &m), 6);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = make_field(313).unwrap();
        let mut rng = Rng::new(4);
        // 5 × 9 of rank 3
        let a = Matrix::from_rows(&rng.matrix(&f, 5, 3));
        let b = Matrix::from_rows(&rng.matrix(&f, 3, 9));
        let m = a.mul(&f, &b);
        let (r, k) = rank_kernel(&f, &m);
        assert_eq!(r, 3);
        assert_eq!(k.len(), 6);
        for v in &k {
            assert!(m.mul_vec(&f, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn extension_field_rank() {
        let f = make_field(331).unwrap();
        let i = f.sqrt_neg_one();
        // [[1, i], [i, -1]] has rank 1 since i·i = -1.
        let m = Matrix::from_rows(&[vec![f.one(), i], vec![i, f.neg(f.one())]]);
        assert_eq!(rank_kernel(&f, &m).0, 1);
        assert_eq!(rank(&f, &m), 1);
    }

    #[test]
    fn blocked_kernel_agrees_across_panels() {
        // Large enough to span several panels and column blocks.
        let f = make_field(313).unwrap();
        let mut rng = Rng::new(9);
        let a = Matrix::from_rows(&rng.matrix(&f, 150, 90));
        let b = Matrix::from_rows(&rng.matrix(&f, 90, 170));
        let m = a.mul(&f, &b);
        assert_eq!(rank(&f, &m), 90);
        assert_eq!(rank_kernel(&f, &m).0, 90);
    }

    #[test]
    fn sparse_projection_matches_exact() {
        let f = make_field(313).unwrap();
        let mut rng = Rng::new(3);
        // 400 × 60 of rank 45 built from two sparse-ish factors.
        let a = Matrix::from_rows(&rng.matrix(&f, 400, 45));
        let b = Matrix::from_rows(&rng.matrix(&f, 45, 60));
        let m = a.mul(&f, &b);
        let mut s = SparseCols::new(400);
        for c in 0..60 {
            s.cols.push((0..400).filter(|&r| !m.get(r, c).is_zero()).map(|r| (r as u32, m.get(r, c))).collect());
        }
        let (r, method) = sparse_rank_with_limit(&f, &s, 17, 0);
        assert_eq!(r, 45);
        assert!(matches!(method, RankMethod::Projected { .. }));
    }
}
