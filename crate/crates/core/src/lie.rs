//! Root systems `A5` and `D6`, Freudenthal multiplicities, symmetric powers of
//! characters and greedy decomposition into irreducibles.
//!
//! Weights are integer vectors in fundamental-weight coordinates (Dynkin
//! labels). Both types are simply laced, so `(λ, μ) = λᵀ·C⁻¹·μ`; every inner
//! product below is scaled by `det C` to stay integral.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Weight = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootType {
    A5,
    D6,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub kind: RootType,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates.
    pub positive_roots: Vec<Vec<i64>>,
    /// `det C · C⁻¹`.
    scaled_inverse: Vec<Vec<i64>>,
    det: i64,
}

/// Simple roots in the usual orthonormal models: `e_i − e_{i+1}` in `Z⁶`
/// for `A5`, plus `e5 + e6` for `D6`.
pub fn simple_roots_euclidean(kind: RootType) -> Vec<Vec<i64>> {
    let mut roots = Vec::new();
    let e = |i: usize, j: usize, s: i64| {
        let mut v = vec![0i64; 6];
        v[i] = 1;
        v[j] = s;
        v
    };
    match kind {
        RootType::A5 => {
            for i in 0..5 {
                roots.push(e(i, i + 1, -1));
            }
        }
        RootType::D6 => {
            for i in 0..5 {
                roots.push(e(i, i + 1, -1));
            }
            roots.push(e(4, 5, 1));
        }
    }
    roots
}

/// The textbook Cartan matrix (Bourbaki numbering, `D6` branching at node 4).
pub fn standard_cartan(kind: RootType) -> Vec<Vec<i64>> {
    let r = rank_of(kind);
    let mut c = vec![vec![0i64; r]; r];
    for i in 0..r {
        c[i][i] = 2;
    }
    let edges: &[(usize, usize)] = match kind {
        RootType::A5 => &[(0, 1), (1, 2), (2, 3), (3, 4)],
        RootType::D6 => &[(0, 1), (1, 2), (2, 3), (3, 4), (3, 5)],
    };
    for &(a, b) in edges {
        c[a][b] = -1;
        c[b][a] = -1;
    }
    c
}

fn rank_of(kind: RootType) -> usize {
    match kind {
        RootType::A5 => 5,
        RootType::D6 => 6,
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cartan matrix recomputed from the Euclidean simple roots.
pub fn cartan_from_roots(kind: RootType) -> Vec<Vec<i64>> {
    let roots = simple_roots_euclidean(kind);
    roots.iter().map(|a| roots.iter().map(|b| 2 * dot(a, b) / dot(b, b)).collect()).collect()
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect()).collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * int_det(&minor)
        })
        .sum()
}

/// `(det C · C⁻¹, det C)` via cofactors.
fn scaled_inverse(c: &[Vec<i64>]) -> (Vec<Vec<i64>>, i64) {
    let n = c.len();
    let cofactor = |i: usize, j: usize| {
        let minor: Vec<Vec<i64>> = (0..n)
            .filter(|&r| r != i)
            .map(|r| (0..n).filter(|&k| k != j).map(|k| c[r][k]).collect())
            .collect();
        if (i + j) % 2 == 0 { int_det(&minor) } else { -int_det(&minor) }
    };
    let adj = (0..n).map(|i| (0..n).map(|j| cofactor(j, i)).collect()).collect();
    (adj, int_det(c))
}

impl RootSystem {
    pub fn new(kind: RootType) -> Self {
        let cartan = standard_cartan(kind);
        let (scaled_inverse, det) = scaled_inverse(&cartan);
        let r = cartan.len();
        // Norm-2 vectors of a simply-laced root lattice are exactly the roots.
        let mut positive_roots = Vec::new();
        let mut coeffs = vec![0i64; r];
        loop {
            if coeffs.iter().any(|&c| c > 0) {
                let norm: i64 = (0..r).map(|i| (0..r).map(|j| coeffs[i] * cartan[i][j] * coeffs[j]).sum::<i64>()).sum();
                if norm == 2 {
                    positive_roots.push(coeffs.clone());
                }
            }
            let mut i = 0;
            while i < r && coeffs[i] == 2 {
                coeffs[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
            coeffs[i] += 1;
        }
        positive_roots.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));
        RootSystem { kind, cartan, positive_roots, scaled_inverse, det }
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive_roots.len()
    }

    pub fn rho(&self) -> Weight {
        vec![1; self.rank()]
    }

    /// A root given in simple coordinates, converted to Dynkin labels.
    pub fn root_weight(&self, simple: &[i64]) -> Weight {
        (0..self.rank()).map(|j| (0..self.rank()).map(|i| simple[i] * self.cartan[i][j]).sum()).collect()
    }

    /// `det C · (λ, μ)`.
    pub fn scaled_form(&self, a: &[i64], b: &[i64]) -> i64 {
        let r = self.rank();
        (0..r).map(|i| (0..r).map(|j| a[i] * self.scaled_inverse[i][j] * b[j]).sum::<i64>()).sum()
    }

    /// `det C ·` the simple-root coordinates of `w`.
    pub fn scaled_simple_coords(&self, w: &[i64]) -> Vec<i64> {
        (0..self.rank()).map(|i| dot(&self.scaled_inverse[i], w)).collect()
    }

    pub fn determinant(&self) -> i64 {
        self.det
    }

    /// `det C ·` height.
    pub fn scaled_height(&self, w: &[i64]) -> i64 {
        self.scaled_simple_coords(w).iter().sum()
    }

    /// `lo ≤ hi` in the dominance order.
    pub fn dominated_by(&self, lo: &[i64], hi: &[i64]) -> bool {
        let diff: Vec<i64> = hi.iter().zip(lo).map(|(a, b)| a - b).collect();
        self.scaled_simple_coords(&diff).iter().all(|&c| c >= 0 && c % self.det == 0)
    }

    pub fn reflect(&self, w: &[i64], i: usize) -> Weight {
        let k = w[i];
        w.iter().zip(&self.cartan[i]).map(|(a, c)| a - k * c).collect()
    }

    pub fn dominant_conjugate(&self, w: &[i64]) -> Weight {
        let mut w = w.to_vec();
        while let Some(i) = w.iter().position(|&c| c < 0) {
            w = self.reflect(&w, i);
        }
        w
    }

    pub fn weyl_orbit(&self, w: &[i64]) -> Vec<Weight> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.to_vec());
        queue.push_back(w.to_vec());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank() {
                let u = self.reflect(&v, i);
                if seen.insert(u.clone()) {
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Weyl dimension formula `Π (λ+ρ, α) / (ρ, α)`.
    pub fn weyl_dimension(&self, hw: &[i64]) -> Result<u128> {
        check_dominant(hw)?;
        let (mut num, mut den) = (1u128, 1u128);
        for a in &self.positive_roots {
            num *= a.iter().zip(hw).map(|(c, l)| (c * (l + 1)) as u128).sum::<u128>();
            den *= a.iter().sum::<i64>() as u128;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
        debug_assert_eq!(den, 1);
        Ok(num / den)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_dominant(hw: &[i64]) -> Result<()> {
    if hw.iter().any(|&c| c < 0) {
        return Err(Error::NonDominant(format!("{hw:?}")));
    }
    Ok(())
}

/// Weight → multiplicity, zero entries never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightMultiset {
    pub weights: BTreeMap<Weight, u64>,
}

impl WeightMultiset {
    pub fn total_mass(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn get(&self, w: &[i64]) -> u64 {
        self.weights.get(w).copied().unwrap_or(0)
    }

    pub fn dual(&self) -> WeightMultiset {
        WeightMultiset { weights: self.weights.iter().map(|(w, &m)| (w.iter().map(|c| -c).collect(), m)).collect() }
    }

    /// Character of the tensor product.
    pub fn tensor(&self, other: &WeightMultiset) -> WeightMultiset {
        let mut out = BTreeMap::new();
        for (a, &ma) in &self.weights {
            for (b, &mb) in &other.weights {
                let w: Weight = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *out.entry(w).or_insert(0) += ma * mb;
            }
        }
        WeightMultiset { weights: out }
    }

    /// True when every simple reflection preserves multiplicities.
    pub fn is_weyl_symmetric(&self, rs: &RootSystem) -> bool {
        self.weights.iter().all(|(w, &m)| (0..rs.rank()).all(|i| self.get(&rs.reflect(w, i)) == m))
    }
}

/// Full weight multiset of the irreducible module with highest weight `hw`.
pub fn irrep_weights(rs: &RootSystem, hw: &[i64]) -> Result<WeightMultiset> {
    check_dominant(hw)?;
    if hw.len() != rs.rank() {
        return Err(Error::DimensionMismatch { expected: rs.rank(), found: hw.len() });
    }
    let dominant = dominant_multiplicities(rs, hw);
    let mut weights = BTreeMap::new();
    for (mu, &m) in &dominant {
        for w in rs.weyl_orbit(mu) {
            weights.insert(w, m);
        }
    }
    Ok(WeightMultiset { weights })
}

/// Freudenthal's recursion on the dominant weights below `hw`.
fn dominant_multiplicities(rs: &RootSystem, hw: &[i64]) -> BTreeMap<Weight, u64> {
    let r = rs.rank();
    let simple: Vec<Weight> = (0..r).map(|i| rs.cartan[i].clone()).collect();
    // Dominant weights μ ≤ hw, found by descending along simple roots.
    let mut members = BTreeSet::new();
    let mut queue = VecDeque::new();
    members.insert(hw.to_vec());
    queue.push_back(hw.to_vec());
    let mut dominant = Vec::new();
    while let Some(v) = queue.pop_front() {
        if v.iter().all(|&c| c >= 0) {
            dominant.push(v.clone());
        }
        for a in &simple {
            let u: Weight = v.iter().zip(a).map(|(x, y)| x - y).collect();
            if !members.contains(&u) && rs.dominated_by(&rs.dominant_conjugate(&u), hw) {
                members.insert(u.clone());
                queue.push_back(u);
            }
        }
    }
    dominant.sort_by_key(|w| -rs.scaled_height(w));
    let rho = rs.rho();
    let shift = |w: &[i64]| -> Weight { w.iter().zip(&rho).map(|(a, b)| a + b).collect() };
    let top = rs.scaled_form(&shift(hw), &shift(hw));
    let roots: Vec<Weight> = rs.positive_roots.iter().map(|a| rs.root_weight(a)).collect();
    let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
    mult.insert(hw.to_vec(), 1);
    for mu in dominant.iter().skip(1) {
        let mut acc: i64 = 0;
        for a in &roots {
            let mut k = 1;
            loop {
                let v: Weight = mu.iter().zip(a).map(|(x, y)| x + k * y).collect();
                let d = rs.dominant_conjugate(&v);
                if !rs.dominated_by(&d, hw) {
                    break;
                }
                let m = *mult.get(&d).expect("higher weights are processed first") as i64;
                acc += m * rs.scaled_form(&v, a);
                k += 1;
            }
        }
        let denom = top - rs.scaled_form(&shift(mu), &shift(mu));
        let m = 2 * acc / denom;
        debug_assert_eq!(2 * acc % denom, 0);
        if m > 0 {
            mult.insert(mu.clone(), m as u64);
        }
    }
    mult
}

fn adams(w: &WeightMultiset, j: i64) -> BTreeMap<Weight, i64> {
    w.weights.iter().map(|(v, &m)| (v.iter().map(|c| c * j).collect(), m as i64)).collect()
}

fn convolve(a: &BTreeMap<Weight, i64>, b: &BTreeMap<Weight, i64>) -> BTreeMap<Weight, i64> {
    let mut out = BTreeMap::new();
    for (x, &mx) in a {
        for (y, &my) in b {
            let w: Weight = x.iter().zip(y).map(|(p, q)| p + q).collect();
            *out.entry(w).or_insert(0) += mx * my;
        }
    }
    out
}

fn accumulate(acc: &mut BTreeMap<Weight, i64>, term: &BTreeMap<Weight, i64>, c: i64) {
    for (w, &m) in term {
        *acc.entry(w.clone()).or_insert(0) += c * m;
    }
}

/// `S^k` of a character via power sums, `k ∈ 1..=4`.
pub fn sym_power_character(w: &WeightMultiset, k: usize) -> Result<WeightMultiset> {
    let p1 = adams(w, 1);
    let mut acc = BTreeMap::new();
    let denom = match k {
        1 => {
            accumulate(&mut acc, &p1, 1);
            1
        }
        2 => {
            accumulate(&mut acc, &convolve(&p1, &p1), 1);
            accumulate(&mut acc, &adams(w, 2), 1);
            2
        }
        3 => {
            let p2 = adams(w, 2);
            let p11 = convolve(&p1, &p1);
            accumulate(&mut acc, &convolve(&p11, &p1), 1);
            accumulate(&mut acc, &convolve(&p1, &p2), 3);
            accumulate(&mut acc, &adams(w, 3), 2);
            6
        }
        4 => {
            let p2 = adams(w, 2);
            let p11 = convolve(&p1, &p1);
            accumulate(&mut acc, &convolve(&p11, &p11), 1);
            accumulate(&mut acc, &convolve(&p11, &p2), 6);
            accumulate(&mut acc, &convolve(&p2, &p2), 3);
            accumulate(&mut acc, &convolve(&p1, &adams(w, 3)), 8);
            accumulate(&mut acc, &adams(w, 4), 6);
            24
        }
        _ => return Err(Error::UnsupportedPower(k)),
    };
    let mut weights = BTreeMap::new();
    for (v, m) in acc {
        if m % denom != 0 || m < 0 {
            return Err(Error::NotACharacter(format!("coefficient {m} at {v:?}")));
        }
        if m > 0 {
            weights.insert(v, (m / denom) as u64);
        }
    }
    Ok(WeightMultiset { weights })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub weight: Weight,
    pub multiplicity: u64,
    pub dimension: u128,
}

/// Greedy peeling by maximal height, ties broken lexicographically (largest first).
pub fn decompose(rs: &RootSystem, w: &WeightMultiset) -> Result<Vec<Component>> {
    if !w.is_weyl_symmetric(rs) {
        return Err(Error::NotACharacter("multiset is not Weyl-symmetric".into()));
    }
    let mut rest: BTreeMap<Weight, i64> = w.weights.iter().map(|(k, &v)| (k.clone(), v as i64)).collect();
    let mut out = Vec::new();
    loop {
        let top = rest
            .iter()
            .filter(|(v, &m)| m > 0 && v.iter().all(|&c| c >= 0))
            .map(|(v, _)| v)
            .max_by(|a, b| rs.scaled_height(a).cmp(&rs.scaled_height(b)).then_with(|| a.cmp(b)))
            .cloned();
        let Some(hw) = top else { break };
        let m = rest[&hw];
        let irrep = irrep_weights(rs, &hw)?;
        for (v, &k) in &irrep.weights {
            let e = rest.entry(v.clone()).or_insert(0);
            *e -= m * k as i64;
            if *e < 0 {
                return Err(Error::NotACharacter(format!("negative multiplicity at {v:?}")));
            }
        }
        rest.retain(|_, m| *m != 0);
        out.push(Component { dimension: rs.weyl_dimension(&hw)?, weight: hw, multiplicity: m as u64 });
    }
    if let Some((v, _)) = rest.iter().next() {
        return Err(Error::NotACharacter(format!("residual weight {v:?}")));
    }
    Ok(out)
}

/// Character of `V ⊗ V*`.
pub fn end_character(w: &WeightMultiset) -> WeightMultiset {
    w.tensor(&w.dual())
}

/// The four plethysm computations exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlethysmCase {
    S4Lambda3,
    S4Delta,
    End6,
    End12,
}

impl PlethysmCase {
    pub const ALL: [PlethysmCase; 4] = [Self::S4Lambda3, Self::S4Delta, Self::End6, Self::End12];

    pub fn name(self) -> &'static str {
        match self {
            Self::S4Lambda3 => "s4-lambda3",
            Self::S4Delta => "s4-delta",
            Self::End6 => "end6",
            Self::End12 => "end12",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn root_type(self) -> RootType {
        match self {
            Self::S4Lambda3 | Self::End6 => RootType::A5,
            Self::S4Delta | Self::End12 => RootType::D6,
        }
    }

    /// The input representation and the character whose decomposition is sought.
    pub fn character(self, rs: &RootSystem) -> Result<(Weight, WeightMultiset)> {
        let (hw, sym): (Weight, bool) = match self {
            Self::S4Lambda3 => (vec![0, 0, 1, 0, 0], true),
            Self::S4Delta => (vec![0, 0, 0, 0, 0, 1], true),
            Self::End6 => (vec![1, 0, 0, 0, 0], false),
            Self::End12 => (vec![1, 0, 0, 0, 0, 0], false),
        };
        let v = irrep_weights(rs, &hw)?;
        let ch = if sym { sym_power_character(&v, 4)? } else { end_character(&v) };
        Ok((hw, ch))
    }

    /// The decomposition the module theory relies on, each summand once.
    pub fn expected(self) -> Vec<Weight> {
        match self {
            Self::S4Lambda3 => vec![
                vec![0, 0, 4, 0, 0],
                vec![1, 0, 2, 0, 1],
                vec![2, 0, 0, 0, 2],
                vec![0, 0, 2, 0, 0],
                vec![0, 1, 0, 1, 0],
                vec![0, 0, 0, 0, 0],
            ],
            Self::S4Delta => vec![
                vec![0, 0, 0, 0, 0, 4],
                vec![0, 1, 0, 0, 0, 2],
                vec![0, 2, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 2],
                vec![0, 0, 0, 1, 0, 0],
                vec![0, 0, 0, 0, 0, 0],
            ],
            Self::End6 => vec![vec![1, 0, 0, 0, 1], vec![0, 0, 0, 0, 0]],
            Self::End12 => vec![vec![2, 0, 0, 0, 0, 0], vec![0, 1, 0, 0, 0, 0], vec![0, 0, 0, 0, 0, 0]],
        }
    }
}
