//! Finite dynamical systems and matrix-driven periodic-point counts.
//!
//! A [`FiniteMap`] is the brute-force ground truth: it has actual points and
//! actual orbits, and every realizability statement elsewhere in the crate
//! can be checked against one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::linalg::bareiss_det;
use crate::seqkit::{is_realizable, transform_b, CongruenceVerdict, SeqPrefix};
use crate::{Error, Int, Result};

/// A self-map of {0, …, m−1} given by its table of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMap {
    table: Vec<usize>,
}

impl FiniteMap {
    pub fn new(table: Vec<usize>) -> Result<Self> {
        let size = table.len();
        if let Some((index, &target)) = table.iter().enumerate().find(|&(_, &t)| t >= size) {
            return Err(Error::InvalidMap {
                index,
                target,
                size,
            });
        }
        Ok(Self { table })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            table: (0..size).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Lengths of every cycle of the functional graph, one entry per cycle.
    ///
    /// Each point is visited a bounded number of times, so this is linear in
    /// the size of the map.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        const UNSEEN: u8 = 0;
        const ON_PATH: u8 = 1;
        const DONE: u8 = 2;
        let m = self.size();
        let mut state = vec![UNSEEN; m];
        let mut lengths = Vec::new();
        let mut path = Vec::new();
        for start in 0..m {
            if state[start] != UNSEEN {
                continue;
            }
            let mut x = start;
            while state[x] == UNSEEN {
                state[x] = ON_PATH;
                path.push(x);
                x = self.table[x];
            }
            if state[x] == ON_PATH {
                // x is on a fresh cycle: walk it once to measure.
                let mut len = 1;
                let mut y = self.table[x];
                while y != x {
                    y = self.table[y];
                    len += 1;
                }
                lengths.push(len);
            }
            for p in path.drain(..) {
                state[p] = DONE;
            }
        }
        lengths
    }
}

impl fmt::Display for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}->{t}")?;
        }
        Ok(())
    }
}

/// Closed-orbit census: orbit length ↦ number of orbits of that length.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OrbitSpec {
    counts: BTreeMap<u64, u64>,
}

impl OrbitSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut spec = Self::new();
        for (len, count) in pairs {
            spec.add(len, count);
        }
        spec
    }

    /// One orbit of each length 2^k with 2^k ≤ `horizon`: the period-doubling
    /// (Feigenbaum) orbit structure.
    pub fn feigenbaum(horizon: u64) -> Self {
        Self::from_pairs(
            std::iter::successors(Some(1u64), |&p| p.checked_mul(2))
                .take_while(|&p| p <= horizon)
                .map(|p| (p, 1)),
        )
    }

    pub fn add(&mut self, len: u64, count: u64) {
        assert!(len >= 1, "orbit lengths start at 1");
        if count > 0 {
            *self.counts.entry(len).or_insert(0) += count;
        }
    }

    /// O(n).
    pub fn count(&self, len: u64) -> u64 {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&l, &c)| (l, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of periodic points, Σ n·O(n).
    pub fn point_count(&self) -> u64 {
        self.iter().map(|(l, c)| l * c).sum()
    }

    /// F(n) = Σ_{d|n} d·O(d).
    pub fn fixed_count(&self, n: u64) -> Int {
        self.iter()
            .filter(|&(d, _)| n.is_multiple_of(d))
            .map(|(d, c)| Int::from(d) * Int::from(c))
            .sum()
    }

    /// Points of least period n: n·O(n).
    pub fn least_period_count(&self, n: u64) -> u64 {
        n * self.count(n)
    }

    /// The fixed-point window F(1), …, F(N).
    pub fn fixed_window(&self, n: usize) -> SeqPrefix {
        SeqPrefix::from_fn(n, |k| self.fixed_count(k)).expect("n >= 1")
    }

    /// The orbit-count window O(1), …, O(N).
    pub fn count_window(&self, n: usize) -> SeqPrefix {
        SeqPrefix::from_fn(n, |k| self.count(k).into()).expect("n >= 1")
    }
}

impl fmt::Display for OrbitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (l, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}: {c}")?;
        }
        write!(f, "}}")
    }
}

/// |{x : Tⁿx = x}| by literal iteration of the table.
pub fn count_fixed_by_iteration(map: &FiniteMap, n: u64) -> u64 {
    (0..map.size())
        .filter(|&x| {
            let mut y = x;
            for _ in 0..n {
                y = map.apply(y);
            }
            y == x
        })
        .count() as u64
}

const ITERATION_BUDGET: u64 = 4096;

/// F_T(n). Small cases iterate the table; otherwise the count comes from the
/// cycle census.
pub fn count_fixed(map: &FiniteMap, n: u64) -> u64 {
    if (map.size() as u64).saturating_mul(n) <= ITERATION_BUDGET {
        return count_fixed_by_iteration(map, n);
    }
    map.cycle_lengths()
        .into_iter()
        .filter(|&len| n.is_multiple_of(len as u64))
        .map(|len| len as u64)
        .sum()
}

/// Census of closed orbits; transient points are not counted.
pub fn orbit_spec(map: &FiniteMap) -> OrbitSpec {
    OrbitSpec::from_pairs(map.cycle_lengths().into_iter().map(|l| (l as u64, 1)))
}

/// Disjoint union of cycles realizing `spec`. Cycles are laid out in
/// increasing length on contiguous indices.
pub fn realize(spec: &OrbitSpec) -> FiniteMap {
    let mut table = Vec::with_capacity(spec.point_count() as usize);
    for (len, count) in spec.iter() {
        let len = len as usize;
        for _ in 0..count {
            let base = table.len();
            table.extend((0..len).map(|i| base + (i + 1) % len));
        }
    }
    FiniteMap { table }
}

/// A finite map whose fixed-point counts are the window `a`, if one exists.
pub fn realize_sequence(a: &SeqPrefix) -> Result<FiniteMap> {
    if let CongruenceVerdict::Fails { index, witness } = is_realizable(a) {
        return Err(Error::NotRealizable {
            index,
            witness: witness.to_string(),
        });
    }
    let b = transform_b(a);
    let spec = OrbitSpec::from_pairs(b.values().iter().enumerate().map(|(i, v)| {
        let count = u64::try_from(v.to_integer()).expect("orbit count fits in memory");
        (i as u64 + 1, count)
    }));
    Ok(realize(&spec))
}

/// A square matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<Int>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::NotSquare(format!(
                "{} entries for dimension {dim}",
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare(format!(
                "row of length {} in a {dim}-row matrix",
                r.len()
            )));
        }
        Self::new(dim, rows.iter().flatten().map(|&v| Int::from(v)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Int::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Int::one();
        }
        m
    }

    /// The k×k cyclic permutation matrix e_i ↦ e_{i+1 mod k}; tr Mⁿ = reg_k(n).
    pub fn cyclic(k: usize) -> Self {
        let mut m = Self::zero(k);
        for i in 0..k {
            m.entries[i * k + (i + 1) % k] = Int::one();
        }
        m
    }

    /// Companion matrix of the monic xᵏ + c_{k−1}x^{k−1} + ⋯ + c_0, given
    /// `lower` = [c_0, …, c_{k−1}].
    pub fn companion(lower: &[i64]) -> Self {
        let k = lower.len();
        let mut m = Self::zero(k);
        for i in 1..k {
            m.entries[i * k + i - 1] = Int::one();
        }
        for (i, &c) in lower.iter().enumerate() {
            m.entries[i * k + k - 1] = Int::from(-c);
        }
        m
    }

    /// Block-diagonal sum of the given matrices.
    pub fn block_diag<'a>(blocks: impl IntoIterator<Item = &'a IntMatrix>) -> Self {
        let blocks: Vec<&IntMatrix> = blocks.into_iter().collect();
        let dim = blocks.iter().map(|b| b.dim).sum();
        let mut m = Self::zero(dim);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    m.entries[(off + i) * dim + off + j] = b.get(i, j).clone();
                }
            }
            off += b.dim;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<Int>> {
        self.entries
            .chunks(self.dim.max(1))
            .map(<[Int]>::to_vec)
            .take(self.dim)
            .collect()
    }

    pub fn trace(&self) -> Int {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| !v.is_negative())
    }

    /// Matrix product. Zero entries of `self` are skipped, which makes
    /// products of sparse (e.g. permutation) matrices cheap.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn det(&self) -> Int {
        bareiss_det(&self.rows())
    }

    /// I − self.
    pub fn identity_minus(&self) -> Self {
        let mut m = self.clone();
        for v in &mut m.entries {
            *v = -&*v;
        }
        for i in 0..self.dim {
            m.entries[i * self.dim + i] += 1;
        }
        m
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    /// First token k, then k·k signed decimal integers, whitespace-separated.
    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let dim: usize = tokens
            .next()
            .ok_or_else(|| Error::MatrixParse("missing dimension".into()))?
            .parse()
            .map_err(|e| Error::MatrixParse(format!("dimension: {e}")))?;
        let entries = tokens
            .map(|t| {
                t.parse::<Int>()
                    .map_err(|_| Error::MatrixParse(format!("not an integer: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != dim * dim {
            return Err(Error::MatrixParse(format!(
                "expected {} entries, found {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(dim, entries)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// tr A, tr A², …, tr A^N.
pub fn trace_sequence(a: &IntMatrix, n: usize) -> SeqPrefix {
    let mut power = a.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            power = power.mul(a);
        }
        out.push(power.trace());
    }
    SeqPrefix::new(out).expect("n >= 1")
}

/// tr(A^{p^r}) ≡ tr(A^{p^{r−1}}) (mod p^r).
pub fn euler_fermat_check(a: &IntMatrix, p: u64, r: u32) -> Result<bool> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let low = a.pow(p.pow(r - 1));
    let high = low.pow(p);
    let modulus = Int::from(p).pow(r);
    Ok((high.trace() - low.trace()).is_multiple_of(&modulus))
}

/// |det(I − Aⁿ)| for n = 1..N: fixed-point counts of the induced toral map.
pub fn det_fix_sequence(a: &IntMatrix, n: usize) -> SeqPrefix {
    let mut power = a.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            power = power.mul(a);
        }
        out.push(power.identity_minus().det().abs());
    }
    SeqPrefix::new(out).expect("n >= 1")
}

/// Nielsen numbers |1 − dⁿ| of a degree-d circle map.
pub fn nielsen_circle(d: i64, n: usize) -> SeqPrefix {
    let d = Int::from(d);
    SeqPrefix::from_fn(n, |k| (Int::one() - d.pow(k as u32)).abs()).expect("n >= 1")
}

/// Nielsen numbers of a Klein-bottle map with fundamental-group data (u, v).
pub fn nielsen_klein(u: i64, v: i64, n: usize) -> SeqPrefix {
    let (u, v) = (Int::from(u), Int::from(v));
    let wide = u.abs() > Int::one();
    SeqPrefix::from_fn(n, |k| {
        let k = k as u32;
        let base: Int = v.pow(k) - Int::one();
        if wide {
            (u.pow(k) * base).abs()
        } else {
            base.abs()
        }
    })
    .expect("n >= 1")
}

/// Position key in the Šarkovskiĭ order: smaller keys come first.
fn sharkovskii_key(n: u64) -> (u8, i64, u64) {
    assert!(n >= 1, "the order is on positive integers");
    let a = n.trailing_zeros() as i64;
    let odd = n >> a;
    if odd > 1 {
        (0, a, odd)
    } else {
        // Pure powers of two come last, in decreasing order.
        (1, -a, 1)
    }
}

/// Whether m strictly precedes n in 3 ≺ 5 ≺ 7 ≺ ⋯ ≺ 2·3 ≺ 2·5 ≺ ⋯ ≺ 2² ≺ 2 ≺ 1.
pub fn sharkovskii_precedes(m: u64, n: u64) -> bool {
    sharkovskii_key(m) < sharkovskii_key(n)
}
