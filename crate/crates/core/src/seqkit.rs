//! Sequence windows, the orbit-count and generating-sequence transforms, and
//! the Dold and realizability criteria.
//!
//! A [`SeqPrefix`] holds a_1, …, a_N. The orbit-count transform B sends it to
//! b_n = (1/n) Σ_{d|n} μ(n/d) a_d, and the generating-sequence transform C to
//! the c_n with exp(Σ a_n zⁿ/n) = 1 / (1 − Σ c_n zⁿ). Both land in rationals;
//! whether the result is integral is what the criteria test.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, is_nonneg_integer, mobius_table, phi_table};
use crate::{Error, Int, Rat, Result};

/// A finite window a_1, …, a_N of an integer sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeqPrefix {
    values: Vec<Int>,
}

impl SeqPrefix {
    pub fn new(values: Vec<Int>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        Ok(Self { values })
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Int::from(v)).collect())
    }

    /// Window of length `n` with entry k equal to `f(k)`.
    pub fn from_fn(n: usize, f: impl FnMut(u64) -> Int) -> Result<Self> {
        Self::new((1..=n as u64).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// a_n, 1-indexed.
    pub fn get(&self, n: usize) -> &Int {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[Int] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Int> {
        self.values
    }

    /// The first `n` terms.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.len() {
            return Err(Error::PrefixTooShort {
                need: n,
                have: self.len(),
            });
        }
        Self::new(self.values[..n].to_vec())
    }

    pub fn to_rat(&self) -> RatSeqPrefix {
        RatSeqPrefix {
            values: self.values.iter().cloned().map(Rat::from_integer).collect(),
        }
    }

    pub fn map(&self, f: impl FnMut(&Int) -> Int) -> Self {
        Self {
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Pointwise combination of two windows, truncated to the shorter one.
    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(&Int, &Int) -> Int) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| f(x, y))
                .collect(),
        }
    }
}

impl fmt::Display for SeqPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.values)
    }
}

/// A finite window of rationals, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatSeqPrefix {
    values: Vec<Rat>,
}

impl RatSeqPrefix {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        Ok(Self { values })
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| arith::rat(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> &Rat {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// The window as integers, if every entry is integral.
    pub fn to_integers(&self) -> Option<SeqPrefix> {
        self.values
            .iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(|values| SeqPrefix { values })
    }
}

impl fmt::Display for RatSeqPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.values)
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, values: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, ")")
}

/// Outcome of a windowed congruence or realizability test.
///
/// `Fails` always carries the least failing index together with the exact
/// offending value at that index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CongruenceVerdict<W = Rat> {
    Holds(usize),
    Fails { index: usize, witness: W },
}

impl<W> CongruenceVerdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds(_))
    }

    pub fn failing_index(&self) -> Option<usize> {
        match self {
            Self::Holds(_) => None,
            Self::Fails { index, .. } => Some(*index),
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Self::Holds(_) => None,
            Self::Fails { witness, .. } => Some(witness),
        }
    }
}

/// Which form of the Dold congruence to test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Criterion {
    /// Σ_{d|n} μ(n/d) a_d ≡ 0 (mod n).
    Mobius,
    /// Σ_{d|n} φ(n/d) a_d ≡ 0 (mod n).
    Phi,
    /// a_n ≡ a_{n/p} (mod p^{v_p(n)}) for every prime p dividing n.
    PrimePower,
    /// Σ_{k|n} ψ(n/k) a_k ≡ 0 (mod n) for an admissible ψ.
    Psi(SeqPrefix),
}

/// Σ_{d|n} w(n/d) a_d for every n in the window; `w` is 1-indexed.
fn weighted_divisor_sums(a: &SeqPrefix, weight: impl Fn(usize) -> Int) -> Vec<Int> {
    let n = a.len();
    let weights: Vec<Int> = (1..=n).map(weight).collect();
    let mut sums = vec![Int::zero(); n];
    for d in 1..=n {
        let ad = a.get(d);
        if ad.is_zero() {
            continue;
        }
        for k in 1..=n / d {
            let w = &weights[k - 1];
            if !w.is_zero() {
                sums[d * k - 1] += w * ad;
            }
        }
    }
    sums
}

/// b_n = (1/n) Σ_{d|n} μ(n/d) a_d.
pub fn transform_b(a: &SeqPrefix) -> RatSeqPrefix {
    let mu = mobius_table(a.len());
    let sums = weighted_divisor_sums(a, |k| Int::from(mu[k]));
    RatSeqPrefix {
        values: sums
            .into_iter()
            .enumerate()
            .map(|(i, s)| Rat::new(s, Int::from(i + 1)))
            .collect(),
    }
}

/// a_n = Σ_{d|n} d·b_d.
pub fn inverse_b(b: &RatSeqPrefix) -> RatSeqPrefix {
    let n = b.len();
    let mut out = vec![Rat::zero(); n];
    for d in 1..=n {
        let bd = b.get(d);
        if bd.is_zero() {
            continue;
        }
        let term = bd * Rat::from_integer(Int::from(d));
        for m in (d..=n).step_by(d) {
            out[m - 1] += &term;
        }
    }
    RatSeqPrefix { values: out }
}

/// Generating sequence: c_n = (1/n)(a_n − c_1 a_{n−1} − ⋯ − c_{n−1} a_1).
pub fn transform_c(a: &SeqPrefix) -> RatSeqPrefix {
    transform_c_rat(&a.to_rat())
}

/// [`transform_c`] for a rational input window.
pub fn transform_c_rat(a: &RatSeqPrefix) -> RatSeqPrefix {
    let n = a.len();
    let mut c: Vec<Rat> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc = a.get(m).clone();
        for j in 1..m {
            acc -= &c[j - 1] * a.get(m - j);
        }
        c.push(acc / Rat::from_integer(Int::from(m)));
    }
    RatSeqPrefix { values: c }
}

/// a_n = c_1 a_{n−1} + ⋯ + c_{n−1} a_1 + n·c_n.
pub fn inverse_c(c: &RatSeqPrefix) -> RatSeqPrefix {
    let n = c.len();
    let mut a: Vec<Rat> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc = c.get(m) * Rat::from_integer(Int::from(m));
        for j in 1..m {
            acc += c.get(j) * &a[m - j - 1];
        }
        a.push(acc);
    }
    RatSeqPrefix { values: a }
}

/// Checks that ψ(1) = ±1 and Σ_{k|n} ψ(k) ≡ 0 (mod n) for n ≤ `n`.
pub fn validate_psi(psi: &SeqPrefix, n: usize) -> Result<()> {
    if psi.len() < n {
        return Err(Error::InvalidPsi(psi.len() + 1));
    }
    if !psi.get(1).abs().is_one() {
        return Err(Error::InvalidPsi(1));
    }
    let mut sums = vec![Int::zero(); n];
    for k in 1..=n {
        for m in (k..=n).step_by(k) {
            sums[m - 1] += psi.get(k);
        }
    }
    match sums
        .iter()
        .enumerate()
        .find(|(i, s)| !s.is_multiple_of(&Int::from(i + 1)))
    {
        Some((i, _)) => Err(Error::InvalidPsi(i + 1)),
        None => Ok(()),
    }
}

fn first_non_divisible(sums: Vec<Int>) -> CongruenceVerdict {
    let len = sums.len();
    for (i, s) in sums.into_iter().enumerate() {
        if !s.is_multiple_of(&Int::from(i + 1)) {
            return CongruenceVerdict::Fails {
                index: i + 1,
                witness: Rat::from_integer(s),
            };
        }
    }
    CongruenceVerdict::Holds(len)
}

/// Tests a Dold-type congruence at every index of the window.
///
/// On failure the witness is the offending criterion value at the least
/// failing index: the full divisor sum for the μ, φ and ψ forms, and
/// a_n − a_{n/p} for the prime-power form.
pub fn congruence_test(a: &SeqPrefix, criterion: &Criterion) -> Result<CongruenceVerdict> {
    let n = a.len();
    let verdict = match criterion {
        Criterion::Mobius => {
            let mu = mobius_table(n);
            first_non_divisible(weighted_divisor_sums(a, |k| Int::from(mu[k])))
        }
        Criterion::Phi => {
            let phi = phi_table(n);
            first_non_divisible(weighted_divisor_sums(a, |k| Int::from(phi[k])))
        }
        Criterion::Psi(psi) => {
            validate_psi(psi, n)?;
            first_non_divisible(weighted_divisor_sums(a, |k| psi.get(k).clone()))
        }
        Criterion::PrimePower => prime_power_test(a),
    };
    Ok(verdict)
}

fn prime_power_test(a: &SeqPrefix) -> CongruenceVerdict {
    for m in 2..=a.len() {
        for (p, v) in arith::factorize(m as u64) {
            let modulus = Int::from(p.pow(v));
            let diff = a.get(m) - a.get(m / p as usize);
            if !diff.is_multiple_of(&modulus) {
                return CongruenceVerdict::Fails {
                    index: m,
                    witness: Rat::from_integer(diff),
                };
            }
        }
    }
    CongruenceVerdict::Holds(a.len())
}

/// Realizable iff every orbit count b_n is a non-negative integer.
pub fn is_realizable(a: &SeqPrefix) -> CongruenceVerdict {
    let b = transform_b(a);
    match b.values.iter().position(|v| !is_nonneg_integer(v)) {
        Some(i) => CongruenceVerdict::Fails {
            index: i + 1,
            witness: b.values[i].clone(),
        },
        None => CongruenceVerdict::Holds(a.len()),
    }
}

/// Writes a Dold window as a difference of two realizable windows by
/// splitting its orbit counts into positive and negative parts.
pub fn dold_split(a: &SeqPrefix) -> Result<(SeqPrefix, SeqPrefix)> {
    if let CongruenceVerdict::Fails { index, .. } = congruence_test(a, &Criterion::Mobius)? {
        return Err(Error::NotDold(index));
    }
    let b = transform_b(a);
    let split = |sign: bool| {
        let part = RatSeqPrefix {
            values: b
                .values
                .iter()
                .map(|v| {
                    let keep = if sign {
                        v.is_positive()
                    } else {
                        v.is_negative()
                    };
                    if keep {
                        v.abs()
                    } else {
                        Rat::zero()
                    }
                })
                .collect(),
        };
        inverse_b(&part)
            .to_integers()
            .expect("integer orbit counts give integer fixed-point counts")
    };
    Ok((split(true), split(false)))
}

/// A finitely supported integer combination Σ b_d · reg_d.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PeriodicCombination {
    coeffs: BTreeMap<u64, Int>,
}

impl PeriodicCombination {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a combination from (d, coefficient) pairs; repeated periods add up.
    pub fn from_pairs<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (u64, C)>,
        C: Into<Int>,
    {
        let mut out = Self::new();
        for (d, c) in pairs {
            out.add_term(d, c.into());
        }
        out
    }

    /// The elementary periodic sequence reg_d.
    pub fn reg(d: u64) -> Self {
        Self::from_pairs([(d, 1)])
    }

    pub fn add_term(&mut self, d: u64, c: Int) {
        assert!(d >= 1, "periods start at 1");
        let entry = self.coeffs.entry(d).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    pub fn coeff(&self, d: u64) -> Int {
        self.coeffs.get(&d).cloned().unwrap_or_else(Int::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Int)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_period(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Σ b_d · reg_d(n).
    pub fn eval_at(&self, n: u64) -> Int {
        self.iter()
            .filter(|&(d, _)| n.is_multiple_of(d))
            .map(|(d, c)| c * Int::from(d))
            .sum()
    }
}

impl fmt::Display for PeriodicCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (d, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}: {c}")?;
        }
        write!(f, "}}")
    }
}

/// reg_d on 1..N: d at multiples of d, 0 elsewhere.
pub fn reg(d: u64, n: usize) -> SeqPrefix {
    combo_eval(&PeriodicCombination::reg(d), n)
}

pub fn combo_eval(x: &PeriodicCombination, n: usize) -> SeqPrefix {
    SeqPrefix {
        values: (1..=n as u64).map(|k| x.eval_at(k)).collect(),
    }
}

pub fn combo_add(x: &PeriodicCombination, y: &PeriodicCombination) -> PeriodicCombination {
    let mut out = x.clone();
    for (d, c) in y.iter() {
        out.add_term(d, c.clone());
    }
    out
}

/// Pointwise product, using reg_k · reg_l = gcd(k, l) · reg_lcm(k, l).
pub fn combo_mul(x: &PeriodicCombination, y: &PeriodicCombination) -> PeriodicCombination {
    let mut out = PeriodicCombination::new();
    for (k, ck) in x.iter() {
        for (l, cl) in y.iter() {
            let (g, m) = k.gcd_lcm(&l);
            out.add_term(m, ck * cl * Int::from(g));
        }
    }
    out
}

/// Result of [`periodic_expansion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    Periodic(PeriodicCombination),
    /// First index whose orbit count is non-integral or lies beyond the bound.
    NotPeriodic(usize),
}

/// Expresses the window as Σ b_d reg_d with all periods at most `support_bound`.
///
/// The window must hold at least `2 * support_bound` terms so that the
/// vanishing of b_n past the bound is actually observed.
pub fn periodic_expansion(a: &SeqPrefix, support_bound: usize) -> Result<Expansion> {
    let need = 2 * support_bound.max(1);
    if a.len() < need {
        return Err(Error::ShortWindow { need, len: a.len() });
    }
    let b = transform_b(a);
    let mut comb = PeriodicCombination::new();
    for (i, v) in b.values.iter().enumerate() {
        let n = i + 1;
        if !v.is_integer() || (n > support_bound && !v.is_zero()) {
            return Ok(Expansion::NotPeriodic(n));
        }
        if !v.is_zero() {
            comb.add_term(n as u64, v.to_integer());
        }
    }
    Ok(Expansion::Periodic(comb))
}

/// A polynomial in q with integer coefficients, stored in ascending order
/// without trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<Int>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Self::new(vec![c.into()])
    }

    /// q^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Int::zero(); k + 1];
        coeffs[k] = Int::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_at_one(&self) -> Int {
        self.coeffs.iter().sum()
    }

    /// p(q^d).
    pub fn substitute_power(&self, d: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Int::zero(); (self.coeffs.len() - 1) * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * d] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| {
                    let x = self.coeffs.get(i).cloned().unwrap_or_default();
                    let y = other.coeffs.get(i).cloned().unwrap_or_default();
                    x + y
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &Int) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Int::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += x * y;
            }
        }
        Self::new(coeffs)
    }

    /// Quotient and remainder upon division by a monic polynomial.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        assert!(divisor.coeffs[dd].is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Int::zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let lead = std::mem::take(&mut rem[top]);
            if lead.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs[..dd].iter().enumerate() {
                rem[top - dd + j] -= &lead * c;
            }
            quot[top - dd] = lead;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}q^{i}")?,
            }
        }
        Ok(())
    }
}

/// [n]_q = 1 + q + ⋯ + q^{n−1}.
pub fn q_bracket(n: usize) -> IntPoly {
    assert!(n >= 1, "[n]_q needs n >= 1");
    IntPoly::new(vec![Int::one(); n])
}

/// Tests Σ_{d|n} μ(d) a_{n/d}(q^d) ≡ 0 modulo [n]_q in ℤ[q] for every n.
///
/// The witness on failure is the nonzero remainder.
pub fn q_dold_check(a: &[IntPoly]) -> Result<CongruenceVerdict<IntPoly>> {
    if a.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mu = mobius_table(a.len());
    for n in 1..=a.len() {
        let mut sum = IntPoly::zero();
        for d in arith::divisors(n as u64) {
            let d = d as usize;
            if mu[d] != 0 {
                let term = a[n / d - 1].substitute_power(d).scale(&Int::from(mu[d]));
                sum = sum.add(&term);
            }
        }
        let (_, rem) = sum.div_rem_monic(&q_bracket(n));
        if !rem.is_zero() {
            return Ok(CongruenceVerdict::Fails {
                index: n,
                witness: rem,
            });
        }
    }
    Ok(CongruenceVerdict::Holds(a.len()))
}

/// Convenience for witnesses that are known to be small.
pub fn witness_i64(v: &CongruenceVerdict) -> Option<i64> {
    v.witness().and_then(|w| w.to_integer().to_i64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[i64]) -> SeqPrefix {
        SeqPrefix::from_i64(v).unwrap()
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn fails(index: usize, witness: Rat) -> CongruenceVerdict {
        CongruenceVerdict::Fails { index, witness }
    }

    // Independent orbit-count oracle: divisors found by a linear scan,
    // μ from factorization.
    fn b_oracle(a: &[i64]) -> Vec<Rat> {
        (1..=a.len() as u64)
            .map(|n| {
                let s: i64 = (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| arith::mobius(n / d) * a[d as usize - 1])
                    .sum();
                r(s, n as i64)
            })
            .collect()
    }

    #[test]
    fn empty_windows_are_rejected() {
        assert_eq!(SeqPrefix::new(vec![]), Err(Error::EmptyWindow));
        assert_eq!(RatSeqPrefix::new(vec![]), Err(Error::EmptyWindow));
    }

    #[test]
    fn transform_b_examples() {
        let pow2: Vec<i64> = (1..=6).map(|n| 1 << n).collect();
        assert_eq!(
            transform_b(&seq(&pow2)),
            RatSeqPrefix::from_i64(&[2, 1, 2, 3, 6, 9]).unwrap()
        );
        assert_eq!(b_oracle(&pow2), transform_b(&seq(&pow2)).values);
        let lucas = [1, 3, 4, 7, 11, 18];
        assert_eq!(
            transform_b(&seq(&lucas)),
            RatSeqPrefix::from_i64(&[1, 1, 1, 1, 2, 2]).unwrap()
        );
        let es = [4, 8, 316, 2320, 16564, 116920];
        let b = transform_b(&seq(&es));
        let expected: Vec<Rat> = [4, 2, 104, 578, 3312]
            .iter()
            .map(|&v| r(v, 1))
            .chain([r(58300, 3)])
            .collect();
        assert_eq!(b.values(), &expected[..]);
    }

    #[test]
    fn inverse_b_examples() {
        let b = RatSeqPrefix::from_i64(&[1, 1, 1, 1, 2, 2]).unwrap();
        assert_eq!(
            inverse_b(&b).to_integers().unwrap(),
            seq(&[1, 3, 4, 7, 11, 18])
        );
        let ci = RatSeqPrefix::from_i64(&[1, 0, 0, 0, 0]).unwrap();
        assert_eq!(inverse_b(&ci).to_integers().unwrap(), seq(&[1, 1, 1, 1, 1]));
        let two_cycle = RatSeqPrefix::from_i64(&[0, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(inverse_b(&two_cycle).to_integers().unwrap(), reg(2, 6));
    }

    #[test]
    fn transform_c_examples() {
        let pow2: Vec<i64> = (1..=8).map(|n| 1 << n).collect();
        assert_eq!(
            transform_c(&seq(&pow2)),
            RatSeqPrefix::from_i64(&[2, 0, 0, 0, 0, 0, 0, 0]).unwrap()
        );
        assert_eq!(
            transform_c(&seq(&[1, 3, 4, 7, 11])),
            RatSeqPrefix::from_i64(&[1, 1, 0, 0, 0]).unwrap()
        );
        let mersenne: Vec<i64> = (1..=10).map(|n| (1 << n) - 1).collect();
        assert_eq!(
            transform_c(&seq(&mersenne)),
            RatSeqPrefix::from_i64(&[1; 10]).unwrap()
        );
        let c = RatSeqPrefix::from_i64(&[1, 1, 0, 0, 0]).unwrap();
        assert_eq!(inverse_c(&c).to_integers().unwrap(), seq(&[1, 3, 4, 7, 11]));
    }

    #[test]
    fn congruence_examples() {
        // a_n = n already fails at n = 2 (a_2 - a_1 = 1); the μ-sum at 4 is 2.
        let naturals: Vec<i64> = (1..=10).collect();
        assert_eq!(
            congruence_test(&seq(&naturals), &Criterion::Mobius).unwrap(),
            fails(2, r(1, 1))
        );
        assert_eq!(transform_b(&seq(&naturals)).get(4) * r(4, 1), r(2, 1));
        let sigma0 = SeqPrefix::from_fn(10, |n| arith::divisor_sigma(0, n)).unwrap();
        assert_eq!(
            congruence_test(&sigma0, &Criterion::Mobius).unwrap(),
            fails(2, r(1, 1))
        );
        let abs_lef = seq(&[0, 2, 3, 2, 0, 1, 0, 2, 3, 2, 0, 1]);
        assert_eq!(
            congruence_test(&abs_lef, &Criterion::Mobius).unwrap(),
            fails(6, r(-4, 1))
        );
    }

    fn lucas(n: usize) -> SeqPrefix {
        let mut v = vec![Int::from(1), Int::from(3)];
        while v.len() < n {
            let next = &v[v.len() - 1] + &v[v.len() - 2];
            v.push(next);
        }
        v.truncate(n);
        SeqPrefix::new(v).unwrap()
    }

    #[test]
    fn lucas_passes_every_criterion() {
        let l = lucas(100);
        let mu = SeqPrefix::from_fn(100, |n| arith::mobius(n).into()).unwrap();
        let phi = SeqPrefix::from_fn(100, |n| arith::euler_phi(n).into()).unwrap();
        for c in [
            Criterion::Mobius,
            Criterion::Phi,
            Criterion::PrimePower,
            Criterion::Psi(mu),
            Criterion::Psi(phi),
        ] {
            assert_eq!(
                congruence_test(&l, &c).unwrap(),
                CongruenceVerdict::Holds(100),
                "{c:?}"
            );
        }
    }

    #[test]
    fn invalid_psi_is_rejected() {
        let a = seq(&[1, 3, 4, 7]);
        let bad_first = Criterion::Psi(seq(&[2, 0, 0, 0]));
        assert_eq!(congruence_test(&a, &bad_first), Err(Error::InvalidPsi(1)));
        // ψ = (1, 0, ...) breaks Σ_{k|2} ψ(k) ≡ 0 mod 2.
        let bad_sum = Criterion::Psi(seq(&[1, 0, 0, 0]));
        assert_eq!(congruence_test(&a, &bad_sum), Err(Error::InvalidPsi(2)));
        let short = Criterion::Psi(seq(&[1, -1]));
        assert_eq!(congruence_test(&a, &short), Err(Error::InvalidPsi(3)));
    }

    #[test]
    fn realizability_examples() {
        assert_eq!(is_realizable(&seq(&[1, 1, 2, 3, 5, 8])), fails(3, r(1, 3)));
        assert_eq!(is_realizable(&seq(&[1, 0, 1, 1, 2, 3])), fails(2, r(-1, 2)));
        assert_eq!(is_realizable(&lucas(2000)), CongruenceVerdict::Holds(2000));
    }

    #[test]
    fn dold_split_examples() {
        let alt = seq(&[-1, 1, -1, 1]);
        let (plus, minus) = dold_split(&alt).unwrap();
        assert_eq!(plus, seq(&[0, 2, 0, 2]));
        assert_eq!(minus, seq(&[1, 1, 1, 1]));

        let l = lucas(12);
        let (plus, minus) = dold_split(&l).unwrap();
        assert_eq!(plus, l);
        assert!(minus.values().iter().all(Zero::is_zero));

        let comb = PeriodicCombination::from_pairs([(2, -1), (3, 1)]);
        let (plus, minus) = dold_split(&combo_eval(&comb, 12)).unwrap();
        assert_eq!(plus, reg(3, 12));
        assert_eq!(minus, reg(2, 12));

        assert_eq!(dold_split(&seq(&[1, 2, 3, 4])), Err(Error::NotDold(2)));
    }

    #[test]
    fn periodic_expansion_examples() {
        assert_eq!(
            periodic_expansion(&reg(2, 8), 4).unwrap(),
            Expansion::Periodic(PeriodicCombination::reg(2))
        );
        let w = seq(&[0, -2, 3, -2, 0, 1, 0, -2, 3, -2, 0, 1]);
        assert_eq!(
            periodic_expansion(&w, 6).unwrap(),
            Expansion::Periodic(PeriodicCombination::from_pairs([(2, -1), (3, 1)]))
        );
        let pow2 = SeqPrefix::from_fn(12, |n| Int::from(2).pow(n as u32)).unwrap();
        assert_eq!(
            periodic_expansion(&pow2, 6).unwrap(),
            Expansion::NotPeriodic(7)
        );
        assert_eq!(
            periodic_expansion(&pow2, 7),
            Err(Error::ShortWindow { need: 14, len: 12 })
        );
        assert_eq!(
            periodic_expansion(&seq(&[1, 1, 2, 3]), 2).unwrap(),
            Expansion::NotPeriodic(3)
        );
    }

    #[test]
    fn combination_examples() {
        let prod = combo_mul(&PeriodicCombination::reg(4), &PeriodicCombination::reg(6));
        assert_eq!(prod, PeriodicCombination::from_pairs([(12, 2)]));
        let x = PeriodicCombination::from_pairs([(2, 3), (5, -1)]);
        assert_eq!(combo_mul(&PeriodicCombination::reg(1), &x), x);
        let sum = combo_add(&PeriodicCombination::reg(2), &PeriodicCombination::reg(3));
        assert_eq!(combo_eval(&sum, 6), seq(&[0, 2, 3, 2, 0, 5]));
        let cancel = combo_add(&x, &PeriodicCombination::from_pairs([(2, -3)]));
        assert_eq!(cancel, PeriodicCombination::from_pairs([(5, -1)]));
    }

    #[test]
    fn q_polynomials() {
        assert_eq!(q_bracket(3), IntPoly::from_i64(&[1, 1, 1]));
        let powers: Vec<IntPoly> = (1..=12).map(IntPoly::monomial).collect();
        assert_eq!(q_dold_check(&powers).unwrap(), CongruenceVerdict::Holds(12));
        let ones = vec![IntPoly::constant(1); 12];
        assert_eq!(q_dold_check(&ones).unwrap(), CongruenceVerdict::Holds(12));
        let q = vec![IntPoly::monomial(1); 6];
        assert_eq!(
            q_dold_check(&q).unwrap(),
            CongruenceVerdict::Fails {
                index: 2,
                witness: IntPoly::constant(-2)
            }
        );
        let p = IntPoly::from_i64(&[0, 1, 0, 0, 1]);
        let (quot, rem) = p.div_rem_monic(&q_bracket(2));
        assert_eq!(quot.mul(&q_bracket(2)).add(&rem), p);
        assert_eq!(
            format!("{}", IntPoly::from_i64(&[-2, 0, 3, -1])),
            "-q^3 + 3q^2 - 2"
        );
    }

    fn dold_window(n: usize) -> impl Strategy<Value = SeqPrefix> {
        prop::collection::vec(-6i64..6, n).prop_map(|b| {
            inverse_b(&RatSeqPrefix::from_i64(&b).unwrap())
                .to_integers()
                .unwrap()
        })
    }

    fn all_criteria(n: usize) -> Vec<Criterion> {
        let mu = SeqPrefix::from_fn(n, |k| arith::mobius(k).into()).unwrap();
        let phi = SeqPrefix::from_fn(n, |k| arith::euler_phi(k).into()).unwrap();
        vec![
            Criterion::Mobius,
            Criterion::Phi,
            Criterion::PrimePower,
            Criterion::Psi(mu),
            Criterion::Psi(phi),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn transforms_are_bijective(v in prop::collection::vec(-1000i64..1000, 1..48)) {
            let a = seq(&v);
            prop_assert_eq!(inverse_b(&transform_b(&a)).to_integers().unwrap(), a.clone());
            prop_assert_eq!(inverse_c(&transform_c(&a)).to_integers().unwrap(), a);
        }

        #[test]
        fn b_matches_linear_scan_oracle(v in prop::collection::vec(-100i64..100, 1..40)) {
            prop_assert_eq!(transform_b(&seq(&v)).values().to_vec(), b_oracle(&v));
        }

        #[test]
        fn criteria_agree_on_perturbed_dold_windows(
            a in dold_window(48), at in 0usize..48, bump in -3i64..4
        ) {
            let mut v = a.into_values();
            v[at] += bump;
            let a = SeqPrefix::new(v).unwrap();
            let verdicts: Vec<_> = all_criteria(48)
                .iter()
                .map(|c| congruence_test(&a, c).unwrap().failing_index())
                .collect();
            prop_assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "{:?}", verdicts);
        }

        #[test]
        fn dold_closed_under_ring_operations(a in dold_window(40), b in dold_window(40)) {
            for c in [
                a.zip_with(&b, |x, y| x + y),
                a.zip_with(&b, |x, y| x - y),
                a.zip_with(&b, |x, y| x * y),
            ] {
                prop_assert!(congruence_test(&c, &Criterion::Mobius).unwrap().holds());
            }
        }

        #[test]
        fn dold_split_parts_are_realizable(a in dold_window(30)) {
            let (plus, minus) = dold_split(&a).unwrap();
            prop_assert!(is_realizable(&plus).holds());
            prop_assert!(is_realizable(&minus).holds());
            prop_assert_eq!(plus.zip_with(&minus, |x, y| x - y), a);
        }

        #[test]
        fn combo_mul_is_pointwise(
            x in prop::collection::vec((1u64..10, -4i64..5), 0..5),
            y in prop::collection::vec((1u64..10, -4i64..5), 0..5),
        ) {
            let x = PeriodicCombination::from_pairs(x);
            let y = PeriodicCombination::from_pairs(y);
            let lhs = combo_eval(&combo_mul(&x, &y), 90);
            let rhs = combo_eval(&x, 90).zip_with(&combo_eval(&y, 90), |p, q| p * q);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn q_verdict_refines_integer_verdict(
            polys in prop::collection::vec(prop::collection::vec(-2i64..3, 0..4), 1..12)
        ) {
            let a: Vec<IntPoly> = polys.iter().map(|c| IntPoly::from_i64(c)).collect();
            let q_verdict = q_dold_check(&a).unwrap();
            let at_one = SeqPrefix::new(a.iter().map(IntPoly::eval_at_one).collect()).unwrap();
            let int_verdict = congruence_test(&at_one, &Criterion::Mobius).unwrap();
            match (q_verdict.failing_index(), int_verdict.failing_index()) {
                (None, Some(n)) => prop_assert!(false, "q-test holds but integer test fails at {}", n),
                (Some(q), Some(n)) => prop_assert!(q <= n),
                _ => {}
            }
        }
    }

    #[test]
    fn negative_instances() {
        let squares = SeqPrefix::from_fn(16, |n| Int::from(n * n)).unwrap();
        assert!(!congruence_test(&squares, &Criterion::Mobius)
            .unwrap()
            .holds());
        for k in 1..=3 {
            let s = SeqPrefix::from_fn(200, |n| arith::divisor_sigma(k, n)).unwrap();
            assert!(
                congruence_test(&s, &Criterion::Mobius).unwrap().holds(),
                "sigma_{k}"
            );
        }
    }
}
