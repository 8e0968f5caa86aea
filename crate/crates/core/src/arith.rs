//! Multiplicative number theory and Dirichlet convolution.
//!
//! Indices and moduli are `u64`; values that can grow without bound are
//! [`Int`] or [`Rat`]. Arithmetic-function prefixes are 1-indexed: there is
//! no value at 0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::{Error, Int, Rat, Result};

const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// Prime factorization by trial division on a 2·3·5 wheel.
///
/// Primes come out strictly increasing. Inputs up to 10^12 finish quickly;
/// larger inputs still work but may be slow.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut p = 7u64;
    let mut step = 0;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += WHEEL[step];
        step = (step + 1) % WHEEL.len();
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

/// σ_k(n) = Σ_{d|n} d^k.
pub fn divisor_sigma(k: u32, n: u64) -> Int {
    divisors(n)
        .into_iter()
        .map(|d| Pow::pow(BigInt::from(d), k))
        .sum()
}

/// Number of prime factors counted with multiplicity.
pub fn big_omega(n: u64) -> u32 {
    factorize(n).into_iter().map(|(_, e)| e).sum()
}

/// p-adic valuation of a nonzero `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// μ(1..=n) by a linear sieve; index 0 is unused and holds 0.
pub fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![0i8; n + 1];
    if n == 0 {
        return mu;
    }
    mu[1] = 1;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// φ(1..=n) by sieve; index 0 holds 0.
pub fn phi_table(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            for j in (i..=n).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi
}

pub fn lcm_int(a: &Int, b: &Int) -> Int {
    a.lcm(b)
}

/// Values f(1), …, f(N) of an arithmetic function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArithFnPrefix {
    values: Vec<Rat>,
}

impl ArithFnPrefix {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> Rat) -> Result<Self> {
        Self::new((1..=n as u64).map(&mut f).collect())
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&v| Rat::from_integer(v.into()))
                .collect(),
        )
    }

    /// The convolution identity: 1 at n = 1, else 0.
    pub fn ci(n: usize) -> Result<Self> {
        Self::from_fn(n, |k| if k == 1 { Rat::one() } else { Rat::zero() })
    }

    /// The constant function u(n) = 1.
    pub fn unit(n: usize) -> Result<Self> {
        Self::from_fn(n, |_| Rat::one())
    }

    /// Id(n) = n.
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |k| Rat::from_integer(k.into()))
    }

    pub fn mobius(n: usize) -> Result<Self> {
        let mu = mobius_table(n);
        Self::from_fn(n, |k| Rat::from_integer(mu[k as usize].into()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// f(n) for 1 ≤ n ≤ len.
    pub fn get(&self, n: usize) -> &Rat {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rat> {
        self.values
    }

    fn require(&self, n: usize) -> Result<()> {
        if self.len() < n {
            Err(Error::PrefixTooShort {
                need: n,
                have: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// (f ∗ g)(n) = Σ_{d|n} f(d) g(n/d) for n ≤ N.
pub fn dirichlet_convolve(f: &ArithFnPrefix, g: &ArithFnPrefix, n: usize) -> Result<ArithFnPrefix> {
    if n == 0 {
        return Err(Error::EmptyWindow);
    }
    f.require(n)?;
    g.require(n)?;
    let mut out = vec![Rat::zero(); n];
    for d in 1..=n {
        let fd = f.get(d);
        if fd.is_zero() {
            continue;
        }
        for e in 1..=n / d {
            let ge = g.get(e);
            if !ge.is_zero() {
                out[d * e - 1] += fd * ge;
            }
        }
    }
    ArithFnPrefix::new(out)
}

/// The Dirichlet inverse on 1..N, solved recursively from f(1).
pub fn dirichlet_inverse(f: &ArithFnPrefix, n: usize) -> Result<ArithFnPrefix> {
    if n == 0 {
        return Err(Error::EmptyWindow);
    }
    f.require(n)?;
    let f1 = f.get(1);
    if f1.is_zero() {
        return Err(Error::NonInvertible);
    }
    let inv_f1 = f1.recip();
    let mut g = vec![Rat::zero(); n];
    g[0] = inv_f1.clone();
    // acc[m] collects Σ_{d|m, d<m} g(d) f(m/d) as soon as g(d) is known.
    let mut acc = vec![Rat::zero(); n + 1];
    for d in 1..=n {
        if d > 1 {
            g[d - 1] = -(&acc[d]) * &inv_f1;
        }
        let gd = g[d - 1].clone();
        if gd.is_zero() {
            continue;
        }
        for k in 2..=n / d {
            let fk = f.get(k);
            if !fk.is_zero() {
                acc[d * k] += &gd * fk;
            }
        }
    }
    ArithFnPrefix::new(g)
}

/// Least common multiple of the denominators of `values`.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn rat(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

pub(crate) fn is_nonneg_integer(v: &Rat) -> bool {
    v.is_integer() && !v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut p = 2;
        while n > 1 {
            if n.is_multiple_of(p) {
                n /= p;
                match out.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => out.push((p, 1)),
                }
            } else {
                p += 1;
            }
        }
        out
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(32760), trial_division(32760));
        assert_eq!(
            factorize(32760),
            vec![(2, 3), (3, 2), (5, 1), (7, 1), (13, 1)]
        );
        assert_eq!(factorize(999_999_999_989), vec![(999_999_999_989, 1)]);
        for n in 1..3000 {
            assert_eq!(factorize(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn multiplicative_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(1 << 10), 512);
        assert_eq!(divisor_sigma(0, 6), 4.into());
        assert_eq!(divisor_sigma(1, 6), 12.into());
        assert_eq!(divisor_sigma(2, 2), 5.into());
        assert_eq!(big_omega(1), 0);
        assert_eq!(big_omega(12), 3);
        assert_eq!(big_omega(97), 1);
    }

    #[test]
    fn phi_counts_coprime_residues() {
        for n in 1..200u64 {
            let direct = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n), direct);
        }
    }

    #[test]
    fn sieves_agree_with_factorization() {
        let mu = mobius_table(500);
        let phi = phi_table(500);
        for n in 1..=500u64 {
            assert_eq!(mu[n as usize] as i64, mobius(n));
            assert_eq!(phi[n as usize], euler_phi(n));
        }
    }

    #[test]
    fn mobius_and_phi_divisor_sums() {
        let mu = mobius_table(10_000);
        let phi = phi_table(10_000);
        let mut mu_sum = vec![0i64; 10_001];
        let mut phi_sum = vec![0u64; 10_001];
        for d in 1..=10_000 {
            for m in (d..=10_000).step_by(d) {
                mu_sum[m] += mu[d] as i64;
                phi_sum[m] += phi[d];
            }
        }
        assert_eq!(mu_sum[1], 1);
        assert!(mu_sum[2..].iter().all(|&s| s == 0));
        assert!((1..=10_000).all(|n| phi_sum[n] == n as u64));
    }

    #[test]
    fn convolution_examples() {
        let mu = ArithFnPrefix::mobius(6).unwrap();
        let u = ArithFnPrefix::unit(6).unwrap();
        let id = ArithFnPrefix::identity(6).unwrap();
        let ci = dirichlet_convolve(&mu, &u, 4).unwrap();
        assert_eq!(ci, ArithFnPrefix::from_i64(&[1, 0, 0, 0]).unwrap());
        assert_eq!(dirichlet_convolve(&mu, &id, 6).unwrap().get(6), &rat(2));
        assert_eq!(dirichlet_convolve(&u, &u, 6).unwrap().get(6), &rat(4));
        assert!(matches!(
            dirichlet_convolve(&mu, &u, 7),
            Err(Error::PrefixTooShort { need: 7, have: 6 })
        ));
    }

    #[test]
    fn inverse_examples() {
        let u = ArithFnPrefix::unit(6).unwrap();
        let inv = dirichlet_inverse(&u, 6).unwrap();
        assert_eq!(
            inv,
            ArithFnPrefix::from_i64(&[1, -1, -1, 0, -1, 1]).unwrap()
        );
        let ci = ArithFnPrefix::ci(8).unwrap();
        assert_eq!(dirichlet_inverse(&ci, 8).unwrap(), ci);
        let two = ArithFnPrefix::from_i64(&[2, 0, 0, 0]).unwrap();
        let half = dirichlet_inverse(&two, 4).unwrap();
        assert_eq!(half.get(1), &Rat::new(1.into(), 2.into()));
        assert!(half.values()[1..].iter().all(Zero::is_zero));
        let bad = ArithFnPrefix::from_i64(&[0, 1, 1]).unwrap();
        assert_eq!(dirichlet_inverse(&bad, 3), Err(Error::NonInvertible));
    }

    #[test]
    fn divisors_are_sorted_and_complete() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        for n in 1..300u64 {
            let direct: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n), direct);
        }
    }

    fn prefix(max_len: usize) -> impl Strategy<Value = ArithFnPrefix> {
        prop::collection::vec(-20i64..20, max_len..=max_len)
            .prop_map(|v| ArithFnPrefix::from_i64(&v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn convolution_commutes(f in prefix(64), g in prefix(64)) {
            prop_assert_eq!(dirichlet_convolve(&f, &g, 64).unwrap(), dirichlet_convolve(&g, &f, 64).unwrap());
        }

        #[test]
        fn convolution_associates(f in prefix(64), g in prefix(64), h in prefix(64)) {
            let left = dirichlet_convolve(&dirichlet_convolve(&f, &g, 64).unwrap(), &h, 64).unwrap();
            let right = dirichlet_convolve(&f, &dirichlet_convolve(&g, &h, 64).unwrap(), 64).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn mobius_inversion_round_trip(f in prefix(64)) {
            let g = dirichlet_convolve(&f, &ArithFnPrefix::unit(64).unwrap(), 64).unwrap();
            let back = dirichlet_convolve(&g, &ArithFnPrefix::mobius(64).unwrap(), 64).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn inverse_convolves_to_identity(mut v in prop::collection::vec(-9i64..9, 40)) {
            if v[0] == 0 { v[0] = 3; }
            let f = ArithFnPrefix::from_i64(&v).unwrap();
            let g = dirichlet_inverse(&f, 40).unwrap();
            prop_assert_eq!(dirichlet_convolve(&f, &g, 40).unwrap(), ArithFnPrefix::ci(40).unwrap());
        }
    }
}
