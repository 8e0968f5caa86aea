//! Truncated formal power series over ℚ, dynamical zeta functions and
//! Dirichlet series.
//!
//! A [`PowerSeries`] of order N stores c_0, …, c_N and every operation is
//! exact modulo z^{N+1}. Binary operations truncate to the smaller order.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, ArithFnPrefix};
use crate::dynsys::OrbitSpec;
use crate::linalg;
use crate::seqkit::{is_realizable, transform_b, CongruenceVerdict, IntPoly, SeqPrefix};
use crate::{Error, Int, Rat, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rat>,
}

impl PowerSeries {
    /// Series with the given coefficients c_0..c_N; its order is N.
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least its constant term"
        );
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| arith::rat(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Rat::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(Rat::one(), 0, order)
    }

    /// c·z^k truncated at `order`.
    pub fn monomial(c: Rat, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new(
            (0..=n)
                .map(|k| &self.coeffs[k] + &other.coeffs[k])
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new(
            (0..=n)
                .map(|k| &self.coeffs[k] - &other.coeffs[k])
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rat::zero(); n + 1];
        for (i, x) in self.coeffs[..=n].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs[..=n - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Self::new(out)
    }

    /// f(z^d), truncated at the same order.
    pub fn substitute_power(&self, d: usize) -> Self {
        assert!(d >= 1);
        let mut out = Self::zero(self.order());
        for (k, c) in self.coeffs.iter().enumerate() {
            if k * d > self.order() {
                break;
            }
            out.coeffs[k * d] = c.clone();
        }
        out
    }

    /// Whether every coefficient is a p-adic integer (denominator prime to p).
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = Int::from(p);
        self.coeffs.iter().all(|c| !c.denom().is_multiple_of(&p))
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "z")?;
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[Rat], var: &str) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
        }
        first = false;
        let mag = c.abs();
        match (k, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "{var}")?,
            (1, false) => write!(f, "{mag}{var}")?,
            (_, true) => write!(f, "{var}^{k}")?,
            (_, false) => write!(f, "{mag}{var}^{k}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// exp(f) for f with zero constant term, via n·g_n = Σ_{k=1}^n k f_k g_{n−k}.
pub fn ps_exp(f: &PowerSeries) -> Result<PowerSeries> {
    if !f.coeff(0).is_zero() {
        return Err(Error::SeriesDomain("exp needs a zero constant term"));
    }
    let n = f.order();
    let mut g = vec![Rat::zero(); n + 1];
    g[0] = Rat::one();
    for m in 1..=n {
        let mut acc = Rat::zero();
        for k in 1..=m {
            let fk = f.coeff(k);
            if !fk.is_zero() {
                acc += fk * &g[m - k] * rat_usize(k);
            }
        }
        g[m] = acc / rat_usize(m);
    }
    Ok(PowerSeries::new(g))
}

/// log(f) for f with constant term 1.
pub fn ps_log(f: &PowerSeries) -> Result<PowerSeries> {
    if !f.coeff(0).is_one() {
        return Err(Error::SeriesDomain("log needs constant term 1"));
    }
    let n = f.order();
    let mut g = vec![Rat::zero(); n + 1];
    for m in 1..=n {
        // m·g_m = m·f_m − Σ_{k=1}^{m−1} k·g_k·f_{m−k}
        let mut acc = f.coeff(m) * rat_usize(m);
        for (k, gk) in g.iter().enumerate().take(m).skip(1) {
            if !gk.is_zero() {
                acc -= gk * f.coeff(m - k) * rat_usize(k);
            }
        }
        g[m] = acc / rat_usize(m);
    }
    Ok(PowerSeries::new(g))
}

/// 1/f for f with nonzero constant term.
pub fn ps_inv(f: &PowerSeries) -> Result<PowerSeries> {
    if f.coeff(0).is_zero() {
        return Err(Error::SeriesDomain("inverse needs a nonzero constant term"));
    }
    let n = f.order();
    let inv0 = f.coeff(0).recip();
    let mut g = vec![Rat::zero(); n + 1];
    g[0] = inv0.clone();
    for m in 1..=n {
        let mut acc = Rat::zero();
        for k in 1..=m {
            let fk = f.coeff(k);
            if !fk.is_zero() {
                acc += fk * &g[m - k];
            }
        }
        g[m] = -acc * &inv0;
    }
    Ok(PowerSeries::new(g))
}

pub fn ps_mul(f: &PowerSeries, g: &PowerSeries) -> PowerSeries {
    f.mul(g)
}

/// f^α for rational α and f with constant term 1, from f·g' = α·f'·g.
pub fn ps_pow_rational(f: &PowerSeries, alpha: &Rat) -> Result<PowerSeries> {
    if !f.coeff(0).is_one() {
        return Err(Error::SeriesDomain("rational powers need constant term 1"));
    }
    let n = f.order();
    let mut g = vec![Rat::zero(); n + 1];
    g[0] = Rat::one();
    for m in 1..=n {
        let mut acc = Rat::zero();
        for k in 1..=m {
            let fk = f.coeff(k);
            if !fk.is_zero() {
                let weight = alpha * rat_usize(k) - rat_usize(m - k);
                acc += weight * fk * &g[m - k];
            }
        }
        g[m] = acc / rat_usize(m);
    }
    Ok(PowerSeries::new(g))
}

/// ζ(z) = exp(Σ a_n zⁿ/n), truncated at order len(a).
pub fn zeta_from_fix(a: &SeqPrefix) -> PowerSeries {
    let mut exponent = vec![Rat::zero()];
    exponent.extend(
        a.values()
            .iter()
            .enumerate()
            .map(|(i, v)| Rat::new(v.clone(), Int::from(i + 1))),
    );
    ps_exp(&PowerSeries::new(exponent)).expect("constant term is zero")
}

/// Recovers F_n = n·[zⁿ] log ζ(z) for n = 1..order.
pub fn fix_from_zeta(zeta: &PowerSeries) -> Result<SeqPrefix> {
    if zeta.order() == 0 {
        return Err(Error::EmptyWindow);
    }
    let log = ps_log(zeta)?;
    let values = (1..=zeta.order())
        .map(|n| {
            let v = log.coeff(n) * rat_usize(n);
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(Error::NonIntegral(n))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SeqPrefix::new(values)
}

/// (1 − z^len)^{−count} truncated at `order`, by the binomial series.
fn orbit_factor(len: usize, count: u64, order: usize) -> PowerSeries {
    let mut s = PowerSeries::zero(order);
    let mut binom = Int::one();
    let count = Int::from(count);
    let mut j = 0usize;
    while j * len <= order {
        s.coeffs[j * len] = Rat::from_integer(binom.clone());
        // C(count + j, j + 1) from C(count + j − 1, j)
        binom = binom * (&count + Int::from(j)) / Int::from(j + 1);
        j += 1;
    }
    s
}

/// ζ(z) = Π (1 − zⁿ)^{−O(n)} over the closed orbits, to order `order`.
pub fn zeta_product_from_orbits(spec: &OrbitSpec, order: usize) -> PowerSeries {
    spec.iter()
        .filter(|&(len, count)| len as usize <= order && count > 0)
        .fold(PowerSeries::one(order), |acc, (len, count)| {
            acc.mul(&orbit_factor(len as usize, count, order))
        })
}

/// ζ(z) = 1 / (1 − Σ c_n zⁿ) from a generating sequence c_1..c_N.
pub fn zeta_from_generating(c: &[Rat]) -> PowerSeries {
    let mut denom = vec![Rat::one()];
    denom.extend(c.iter().map(|v| -v));
    ps_inv(&PowerSeries::new(denom)).expect("constant term is one")
}

/// P(z)/Q(z) with Q(0) = 1 and gcd(P, Q) = 1 over ℚ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    numerator: Vec<Rat>,
    denominator: Vec<Rat>,
}

impl RationalFn {
    /// Normalizes to lowest terms with Q(0) = 1.
    pub fn new(numerator: Vec<Rat>, denominator: Vec<Rat>) -> Result<Self> {
        let p = trim(numerator);
        let q = trim(denominator);
        if q.first().is_none_or(Zero::is_zero) {
            return Err(Error::SeriesDomain(
                "denominator must have a nonzero constant term",
            ));
        }
        let g = poly_gcd(&p, &q);
        let (p, _) = poly_div_rem(&p, &g);
        let (q, _) = poly_div_rem(&q, &g);
        let q0 = q[0].clone();
        Ok(Self {
            numerator: p.iter().map(|c| c / &q0).collect(),
            denominator: q.iter().map(|c| c / &q0).collect(),
        })
    }

    pub fn from_i64(numerator: &[i64], denominator: &[i64]) -> Result<Self> {
        Self::new(
            numerator.iter().map(|&c| arith::rat(c)).collect(),
            denominator.iter().map(|&c| arith::rat(c)).collect(),
        )
    }

    pub fn numerator(&self) -> &[Rat] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Rat] {
        &self.denominator
    }

    /// max(deg P, deg Q); the zero numerator counts as degree 0.
    pub fn degree(&self) -> usize {
        self.numerator
            .len()
            .max(self.denominator.len())
            .saturating_sub(1)
    }

    /// Power-series expansion to `order`.
    pub fn expand(&self, order: usize) -> PowerSeries {
        let mut p = self.numerator.clone();
        p.resize(order + 1, Rat::zero());
        p.truncate(order + 1);
        let mut q = self.denominator.clone();
        q.resize(order + 1, Rat::zero());
        q.truncate(order + 1);
        PowerSeries::new(p).mul(&ps_inv(&PowerSeries::new(q)).expect("Q(0) = 1"))
    }

    /// Both polynomials, if all coefficients are integers.
    pub fn to_int_polys(&self) -> Option<(IntPoly, IntPoly)> {
        let conv = |v: &[Rat]| {
            v.iter()
                .map(|c| c.is_integer().then(|| c.to_integer()))
                .collect::<Option<Vec<Int>>>()
                .map(IntPoly::new)
        };
        Some((conv(&self.numerator)?, conv(&self.denominator)?))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        write_poly(f, &self.numerator, "z")?;
        write!(f, ")/(")?;
        write_poly(f, &self.denominator, "z")?;
        write!(f, ")")
    }
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_div_rem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    let lead_inv = b[db].recip();
    for top in (db..rem.len()).rev() {
        let c = &rem[top] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[top - db + j] -= &c * bj;
        }
        quot[top - db] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

/// Monic gcd over ℚ; gcd(0, q) = q made monic.
fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_div_rem(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().cloned().unwrap_or_else(Rat::one);
    x.iter().map(|c| c / &lead).collect()
}

/// Finds P/Q with deg P, deg Q ≤ `dmax` reproducing every coefficient of
/// `series`, preferring the smallest degree.
///
/// For each candidate degree d the linear recurrence Σ_{j=0}^{d} q_j c_{n−j} = 0
/// (n = d+1..N, q_0 = 1) is solved exactly over all available coefficients,
/// so a solution is only accepted if it holds on every one of them.
pub fn rational_fit(series: &PowerSeries, dmax: usize) -> Result<Option<RationalFn>> {
    let order = series.order();
    let need = 2 * dmax + 2;
    if order < need {
        return Err(Error::ShortWindow { need, len: order });
    }
    for d in 0..=dmax {
        let rows: Vec<Vec<Rat>> = (d + 1..=order)
            .map(|n| (1..=d).map(|j| series.coeff(n - j).clone()).collect())
            .collect();
        let rhs: Vec<Rat> = (d + 1..=order).map(|n| -series.coeff(n)).collect();
        let Some(q_tail) = linalg::solve(&rows, &rhs) else {
            continue;
        };
        let mut q = vec![Rat::one()];
        q.extend(q_tail);
        let mut q_series = q.clone();
        q_series.resize(order + 1, Rat::zero());
        let product = PowerSeries::new(q_series).mul(series);
        let p = product.coeffs()[..=d].to_vec();
        let fit = RationalFn::new(p, q)?;
        if fit.expand(order) == *series {
            return Ok(Some(fit));
        }
    }
    Ok(None)
}

/// Coefficients 1..N of a Dirichlet series Σ f(n) n^{−s}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletPrefix(ArithFnPrefix);

impl DirichletPrefix {
    pub fn new(coeffs: ArithFnPrefix) -> Self {
        Self(coeffs)
    }

    /// d_T(s) = Σ O(n) n^{−s}.
    pub fn orbit_series(orbits: &SeqPrefix) -> Self {
        Self(ArithFnPrefix::new(orbits.to_rat().values().to_vec()).expect("window is non-empty"))
    }

    /// ζ(s + 1) = Σ n^{−1} n^{−s}.
    pub fn riemann_shifted(n: usize) -> Self {
        Self(ArithFnPrefix::from_fn(n, |k| Rat::new(Int::one(), Int::from(k))).expect("n >= 1"))
    }

    /// Σ F(n) n^{−1} n^{−s}.
    pub fn fixed_point_series(fix: &SeqPrefix) -> Self {
        Self(
            ArithFnPrefix::from_fn(fix.len(), |k| {
                Rat::new(fix.get(k as usize).clone(), Int::from(k))
            })
            .expect("window is non-empty"),
        )
    }

    pub fn coeffs(&self) -> &ArithFnPrefix {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self(arith::dirichlet_convolve(&self.0, &other.0, n).expect("both cover 1..n"))
    }
}

/// Checks d_T(s)·ζ(s+1) = Σ F(n) n^{−s−1} coefficientwise on the window.
pub fn dirichlet_identity_check(fix: &SeqPrefix) -> Result<bool> {
    if let CongruenceVerdict::Fails { index, witness } = is_realizable(fix) {
        return Err(Error::NotRealizable {
            index,
            witness: witness.to_string(),
        });
    }
    let orbits = transform_b(fix)
        .to_integers()
        .expect("realizable windows are integral");
    let lhs =
        DirichletPrefix::orbit_series(&orbits).mul(&DirichletPrefix::riemann_shifted(fix.len()));
    Ok(lhs == DirichletPrefix::fixed_point_series(fix))
}

/// E_p(x) = exp(x + x^p/p + x^{p²}/p² + ⋯) to order `order`.
pub fn artin_hasse(p: u64, order: usize) -> Result<PowerSeries> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut exponent = PowerSeries::zero(order);
    let mut pk = 1usize;
    while pk <= order {
        exponent.coeffs[pk] = Rat::new(Int::one(), Int::from(pk));
        match pk.checked_mul(p as usize) {
            Some(next) => pk = next,
            None => break,
        }
    }
    ps_exp(&exponent)
}

/// Π_{n=1}^{order} (1 − xⁿ)^{exponent(n)} truncated at `order`.
pub fn mobius_exp_product(order: usize, exponent: impl Fn(u64) -> Rat) -> PowerSeries {
    (1..=order).fold(PowerSeries::one(order), |acc, n| {
        let e = exponent(n as u64);
        if e.is_zero() {
            return acc;
        }
        let mut base = PowerSeries::one(order);
        base.coeffs[n] = -Rat::one();
        acc.mul(&ps_pow_rational(&base, &e).expect("constant term is one"))
    })
}

/// eˣ = Π (1 − xⁿ)^{−μ(n)/n}, compared through order `order`.
pub fn mobius_exp_check(order: usize) -> bool {
    let mut x = PowerSeries::zero(order);
    if order >= 1 {
        x.coeffs[1] = Rat::one();
    }
    let lhs = ps_exp(&x).expect("zero constant term");
    let rhs = mobius_exp_product(order, |n| {
        Rat::new(Int::from(-arith::mobius(n)), Int::from(n))
    });
    lhs == rhs
}
