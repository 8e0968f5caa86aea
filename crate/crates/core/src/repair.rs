//! Repair (failure) factors, named special sequences and time changes.
//!
//! The failure of a window is the lcm of the denominators of its orbit
//! counts b_n = (1/n)(μ ∗ a)(n). A sequence whose failure stays bounded
//! becomes realizable after multiplying by that bound. A finite window can
//! only report the lcm it has seen so far, together with the last index at
//! which the lcm grew.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::dynsys::{IntMatrix, OrbitSpec};
use crate::seqkit::{is_realizable, reg, transform_b, PeriodicCombination, SeqPrefix};
use crate::{Error, Int, Rat, Result};

/// Horizon given to generators that can be evaluated at any index.
pub const DEFAULT_HORIZON: u64 = 10_000_000;

/// Fibonacci numbers F_0 = 0, F_1 = 1 by fast doubling; returns (F_n, F_{n+1}).
fn fib_pair(n: u64) -> (Int, Int) {
    if n == 0 {
        return (Int::zero(), Int::one());
    }
    let (a, b) = fib_pair(n / 2);
    let c = &a * (&b * 2 - &a);
    let d = &a * &a + &b * &b;
    if n.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

pub fn fibonacci(n: u64) -> Int {
    fib_pair(n).0
}

/// Lucas numbers L_0 = 2, L_1 = 1, L_2 = 3.
pub fn lucas(n: u64) -> Int {
    let (f, f1) = fib_pair(n);
    // L_n = 2F_{n+1} − F_n
    f1 * 2 - f
}

/// Signless Stirling numbers of the first kind, c(n, k).
pub fn stirling1(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let mut row = vec![Int::one()];
    for m in 1..=n {
        let mut next = vec![Int::zero(); m + 1];
        for j in 1..=m {
            let mut v = row.get(j - 1).cloned().unwrap_or_default();
            if j < m {
                v += &row[j] * Int::from(m - 1);
            }
            next[j] = v;
        }
        row = next;
    }
    row[k].clone()
}

/// Stirling numbers of the second kind, S(n, k).
pub fn stirling2(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    stirling2_column(k, n)[n].clone()
}

/// S(m, k) for m = 0..=m_max, by S(m, j) = j·S(m−1, j) + S(m−1, j−1).
fn stirling2_column(k: usize, m_max: usize) -> Vec<Int> {
    let mut col = vec![Int::zero(); k + 1];
    col[0] = Int::one();
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(col[k].clone());
    for _ in 1..=m_max {
        for j in (1..=k).rev() {
            col[j] = &col[j] * Int::from(j) + &col[j - 1];
        }
        col[0] = Int::zero();
        out.push(col[k].clone());
    }
    out
}

/// c(m, k) for m = 0..=m_max, by c(m, j) = (m−1)·c(m−1, j) + c(m−1, j−1).
fn stirling1_column(k: usize, m_max: usize) -> Vec<Int> {
    let mut col = vec![Int::zero(); k + 1];
    col[0] = Int::one();
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(col[k].clone());
    for m in 1..=m_max {
        for j in (1..=k).rev() {
            col[j] = &col[j] * Int::from(m - 1) + &col[j - 1];
        }
        col[0] = Int::zero();
        out.push(col[k].clone());
    }
    out
}

/// Bernoulli numbers B_0..=B_m (B_1 = −1/2) from Σ_{j=0}^{m} C(m+1, j) B_j = 0.
pub fn bernoulli_numbers(m: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(m + 1);
    b.push(Rat::one());
    for n in 1..=m {
        // binomials C(n+1, j) built incrementally
        let mut binom = Int::one();
        let mut acc = Rat::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * Rat::from_integer(binom.clone());
            binom = binom * Int::from(n + 1 - j) / Int::from(j + 1);
        }
        b.push(-acc / Rat::from_integer(Int::from(n + 1)));
    }
    b
}

/// (τ_n, β_n) with τ_n/β_n = |B_{2n}/(2n)| in lowest terms.
pub fn bernoulli_pair(n: usize) -> (Int, Int) {
    assert!(n >= 1);
    let b = &bernoulli_numbers(2 * n)[2 * n];
    let q = (b / Rat::from_integer(Int::from(2 * n))).abs();
    (q.numer().clone(), q.denom().clone())
}

/// Euler (secant) numbers E_0, E_2, …, E_{2m}.
fn euler_even(m: usize) -> Vec<Int> {
    let mut e: Vec<Int> = vec![Int::one()];
    for n in 1..=m {
        let mut acc = Int::zero();
        let mut binom = Int::one(); // C(2n, 2k)
        for (k, ek) in e.iter().enumerate() {
            acc += &binom * ek;
            let top = 2 * n - 2 * k;
            binom = binom * Int::from(top) * Int::from(top - 1)
                / (Int::from(2 * k + 1) * Int::from(2 * k + 2));
        }
        e.push(-acc);
    }
    e
}

/// (−1)ⁿ E_{2n}, always positive.
pub fn euler_abs(n: usize) -> Int {
    let e = euler_even(n).swap_remove(n);
    if n.is_multiple_of(2) {
        e
    } else {
        -e
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Rule {
    Fibonacci,
    Lucas,
    FibonacciPower(u32),
    Stirling1Row(usize),
    Stirling2Row(usize),
    TraceOf(IntMatrix),
    BernoulliTau,
    BernoulliBeta,
    EulerAbs,
    Prefix(SeqPrefix),
    Orbits(OrbitSpec),
    Periodic(PeriodicCombination),
    Scaled(Box<SequenceSource>, Int),
}

/// A deterministic rule n ↦ a_n, valid for 1 ≤ n ≤ horizon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceSource {
    rule: Rule,
    horizon: u64,
}

impl SequenceSource {
    fn generator(rule: Rule) -> Self {
        Self {
            rule,
            horizon: DEFAULT_HORIZON,
        }
    }

    pub fn fibonacci() -> Self {
        Self::generator(Rule::Fibonacci)
    }

    /// (1, 3, 4, 7, 11, …).
    pub fn lucas() -> Self {
        Self::generator(Rule::Lucas)
    }

    /// n ↦ F_{n^j}.
    pub fn fibonacci_power(j: u32) -> Self {
        Self::generator(Rule::FibonacciPower(j))
    }

    /// n ↦ c(n+k−1, k).
    pub fn stirling1_row(k: usize) -> Self {
        Self::generator(Rule::Stirling1Row(k))
    }

    /// n ↦ S(n+k−1, k).
    pub fn stirling2_row(k: usize) -> Self {
        Self::generator(Rule::Stirling2Row(k))
    }

    pub fn trace_of(a: IntMatrix) -> Self {
        Self::generator(Rule::TraceOf(a))
    }

    pub fn bernoulli_tau() -> Self {
        Self::generator(Rule::BernoulliTau)
    }

    pub fn bernoulli_beta() -> Self {
        Self::generator(Rule::BernoulliBeta)
    }

    pub fn euler_abs() -> Self {
        Self::generator(Rule::EulerAbs)
    }

    /// A finite window; its horizon is its length.
    pub fn prefix(a: SeqPrefix) -> Self {
        let horizon = a.len() as u64;
        Self {
            rule: Rule::Prefix(a),
            horizon,
        }
    }

    /// Fixed-point counts of the map with the given closed orbits.
    pub fn orbits(spec: OrbitSpec) -> Self {
        Self::generator(Rule::Orbits(spec))
    }

    pub fn periodic(comb: PeriodicCombination) -> Self {
        Self::generator(Rule::Periodic(comb))
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Looks up a generator by its command-line name.
    pub fn named(name: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown generator {name:?}"));
        let suffix = |prefix: &str| -> Result<Option<u64>> {
            match name.strip_prefix(prefix) {
                Some(rest) => rest.parse().map(Some).map_err(|_| bad()),
                None => Ok(None),
            }
        };
        Ok(match name {
            "fibonacci" | "fib" => Self::fibonacci(),
            "lucas" => Self::lucas(),
            "bernoulli-tau" => Self::bernoulli_tau(),
            "bernoulli-beta" => Self::bernoulli_beta(),
            "euler-abs" => Self::euler_abs(),
            _ => {
                if let Some(j) = suffix("fib-power-")? {
                    Self::fibonacci_power(u32::try_from(j).map_err(|_| bad())?)
                } else if let Some(k) = suffix("stirling1-")? {
                    Self::stirling1_row(k as usize)
                } else if let Some(k) = suffix("stirling2-")? {
                    Self::stirling2_row(k as usize)
                } else {
                    return Err(bad());
                }
            }
        })
    }

    fn check_horizon(&self, needed: u64) -> Result<()> {
        if needed > self.horizon || needed == 0 {
            return Err(Error::HorizonExceeded {
                needed,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    pub fn value(&self, n: u64) -> Result<Int> {
        Ok(self.values_at(&[n])?.swap_remove(0))
    }

    /// a_1, …, a_N.
    pub fn window(&self, n: usize) -> Result<SeqPrefix> {
        let idx: Vec<u64> = (1..=n as u64).collect();
        SeqPrefix::new(self.values_at(&idx)?)
    }

    /// Values at arbitrary indices, each in 1..=horizon.
    pub fn values_at(&self, indices: &[u64]) -> Result<Vec<Int>> {
        let Some(&max) = indices.iter().max() else {
            return Ok(Vec::new());
        };
        let min = *indices.iter().min().expect("non-empty");
        self.check_horizon(max)?;
        self.check_horizon(min)?;
        let as_usize = |n: u64| usize::try_from(n).expect("index fits in usize");
        Ok(match &self.rule {
            Rule::Fibonacci => indices.iter().map(|&n| fibonacci(n)).collect(),
            Rule::Lucas => indices.iter().map(|&n| lucas(n)).collect(),
            Rule::FibonacciPower(j) => indices
                .iter()
                .map(|&n| {
                    let idx = n.checked_pow(*j).ok_or(Error::HorizonExceeded {
                        needed: n,
                        horizon: self.horizon,
                    })?;
                    Ok(fibonacci(idx))
                })
                .collect::<Result<_>>()?,
            Rule::Stirling1Row(k) | Rule::Stirling2Row(k) => {
                let k = *k;
                let top = as_usize(max) + k.saturating_sub(1);
                let col = match &self.rule {
                    Rule::Stirling1Row(_) => stirling1_column(k, top),
                    _ => stirling2_column(k, top),
                };
                indices
                    .iter()
                    .map(|&n| col[as_usize(n) + k - 1].clone())
                    .collect()
            }
            Rule::TraceOf(a) => {
                if max as usize <= 4 * indices.len() {
                    let traces = crate::dynsys::trace_sequence(a, as_usize(max));
                    indices
                        .iter()
                        .map(|&n| traces.get(as_usize(n)).clone())
                        .collect()
                } else {
                    indices.iter().map(|&n| a.pow(n).trace()).collect()
                }
            }
            Rule::BernoulliTau | Rule::BernoulliBeta => {
                let b = bernoulli_numbers(2 * as_usize(max));
                indices
                    .iter()
                    .map(|&n| {
                        let n = as_usize(n);
                        let q = (&b[2 * n] / Rat::from_integer(Int::from(2 * n))).abs();
                        if matches!(self.rule, Rule::BernoulliTau) {
                            q.numer().clone()
                        } else {
                            q.denom().clone()
                        }
                    })
                    .collect()
            }
            Rule::EulerAbs => {
                let e = euler_even(as_usize(max));
                indices
                    .iter()
                    .map(|&n| {
                        let n = as_usize(n);
                        if n % 2 == 0 {
                            e[n].clone()
                        } else {
                            -&e[n]
                        }
                    })
                    .collect()
            }
            Rule::Prefix(a) => indices
                .iter()
                .map(|&n| a.get(as_usize(n)).clone())
                .collect(),
            Rule::Orbits(spec) => indices.iter().map(|&n| spec.fixed_count(n)).collect(),
            Rule::Periodic(comb) => indices.iter().map(|&n| comb.eval_at(n)).collect(),
            Rule::Scaled(inner, c) => inner
                .values_at(indices)?
                .into_iter()
                .map(|v| v * c)
                .collect(),
        })
    }
}

impl fmt::Display for SequenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::Fibonacci => write!(f, "fibonacci"),
            Rule::Lucas => write!(f, "lucas"),
            Rule::FibonacciPower(j) => write!(f, "fib-power-{j}"),
            Rule::Stirling1Row(k) => write!(f, "stirling1-{k}"),
            Rule::Stirling2Row(k) => write!(f, "stirling2-{k}"),
            Rule::TraceOf(a) => write!(f, "trace of {}x{} matrix", a.dim(), a.dim()),
            Rule::BernoulliTau => write!(f, "bernoulli-tau"),
            Rule::BernoulliBeta => write!(f, "bernoulli-beta"),
            Rule::EulerAbs => write!(f, "euler-abs"),
            Rule::Prefix(a) => write!(f, "prefix of length {}", a.len()),
            Rule::Orbits(spec) => write!(f, "orbits {spec}"),
            Rule::Periodic(comb) => write!(f, "periodic {comb}"),
            Rule::Scaled(inner, c) => write!(f, "{c} x {inner}"),
        }
    }
}

/// n ↦ c·src(n).
pub fn scaled_source(src: &SequenceSource, c: u64) -> SequenceSource {
    SequenceSource {
        horizon: src.horizon,
        rule: Rule::Scaled(Box::new(src.clone()), Int::from(c)),
    }
}

/// Windowed failure of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureResult {
    pub window: usize,
    /// lcm of the denominators of b_1, …, b_N.
    pub lcm_value: Int,
    /// Largest n ≤ N at which the running lcm grew (0 if it never did).
    pub last_new_prime_at: usize,
    /// Primes dividing some denominator in the window.
    pub primes: BTreeSet<u64>,
}

pub fn failure_window(src: &SequenceSource, n: usize) -> Result<FailureResult> {
    failure_of(&src.window(n)?)
}

/// [`failure_window`] for an explicit window.
pub fn failure_of(a: &SeqPrefix) -> Result<FailureResult> {
    let b = transform_b(a);
    let mut lcm = Int::one();
    let mut last = 0;
    let mut primes = BTreeSet::new();
    for (i, v) in b.values().iter().enumerate() {
        let den = v.denom();
        if den.is_one() {
            continue;
        }
        // b_n = (μ ∗ a)(n)/n, so the denominator divides n.
        let small = den.to_u64().expect("denominator divides n");
        primes.extend(arith::factorize(small).into_iter().map(|(p, _)| p));
        let next = lcm.lcm(den);
        if next != lcm {
            last = i + 1;
            lcm = next;
        }
    }
    Ok(FailureResult {
        window: a.len(),
        lcm_value: lcm,
        last_new_prime_at: last,
        primes,
    })
}

/// A reindexing n ↦ h(n) of sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TimeChange {
    /// n ↦ ℓ·n^k.
    Monomial { k: u32, l: u64 },
    /// n ↦ n if p ∤ n, p·n if p | n.
    Gp(u64),
    /// Applied left to right.
    Composition(Vec<TimeChange>),
}

impl TimeChange {
    pub fn monomial(k: u32, l: u64) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidArgument(
                "monomial time changes need k, l >= 1".into(),
            ));
        }
        Ok(Self::Monomial { k, l })
    }

    pub fn gp(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::Gp(p))
    }

    /// h(n), or `None` on u64 overflow.
    pub fn apply(&self, n: u64) -> Option<u64> {
        match self {
            Self::Monomial { k, l } => n.checked_pow(*k)?.checked_mul(*l),
            Self::Gp(p) => {
                if n.is_multiple_of(*p) {
                    n.checked_mul(*p)
                } else {
                    Some(n)
                }
            }
            Self::Composition(parts) => parts.iter().try_fold(n, |x, h| h.apply(x)),
        }
    }
}

impl FromStr for TimeChange {
    type Err = Error;

    /// `mono:k:l`, `gp:p`, or a comma-separated list of those.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .collect();
        let bad = |p: &str| Error::InvalidArgument(format!("bad time change {p:?}"));
        let parse_one = |p: &str| -> Result<Self> {
            let fields: Vec<&str> = p.split(':').collect();
            match fields.as_slice() {
                ["mono", k, l] => Self::monomial(
                    k.parse().map_err(|_| bad(p))?,
                    l.parse().map_err(|_| bad(p))?,
                ),
                ["gp", q] => Self::gp(q.parse().map_err(|_| bad(p))?),
                ["id"] => Self::monomial(1, 1),
                _ => Err(bad(p)),
            }
        };
        match parts.as_slice() {
            [] => Err(bad(s)),
            [one] => parse_one(one),
            many => Ok(Self::Composition(
                many.iter().map(|p| parse_one(p)).collect::<Result<_>>()?,
            )),
        }
    }
}

/// The window (src(h(1)), …, src(h(N))).
pub fn apply_time_change(src: &SequenceSource, h: &TimeChange, n: usize) -> Result<SeqPrefix> {
    let indices = (1..=n as u64)
        .map(|k| {
            h.apply(k).ok_or(Error::HorizonExceeded {
                needed: u64::MAX,
                horizon: src.horizon(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SeqPrefix::new(src.values_at(&indices)?)
}

/// For a permutation window σ(1..N), finds (k, n) such that reg_k ∘ σ fails
/// realizability at n. Returns `None` for the identity, and also when no
/// witness exists with k ≤ N.
pub fn surjective_tc_witness(sigma: &[u64]) -> Result<Option<(u64, usize)>> {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    for &s in sigma {
        let s = s as usize;
        if s == 0 || s > n || seen[s] {
            return Err(Error::NotPermutation(n));
        }
        seen[s] = true;
    }
    if n == 0 || sigma.iter().enumerate().all(|(i, &s)| s == i as u64 + 1) {
        return Ok(None);
    }
    for k in 1..=n as u64 {
        let regk = reg(k, n);
        let moved = SeqPrefix::new(
            sigma
                .iter()
                .map(|&s| regk.get(s as usize).clone())
                .collect(),
        )?;
        if let Some(idx) = is_realizable(&moved).failing_index() {
            return Ok(Some((k, idx)));
        }
    }
    Ok(None)
}
