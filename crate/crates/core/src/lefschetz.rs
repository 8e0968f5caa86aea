//! Lefschetz sequences tr Aⁿ − tr Bⁿ and the Kronecker–Hankel rationality test.
//!
//! A Lefschetz sequence built from k×k and ℓ×ℓ matrices has a rational
//! zeta function, so the Hankel determinants of its generating sequence
//! vanish from m = max(k, ℓ) on. Here the generating sequence c_1, c_2, …
//! is laid out from matrix position 0: entry (i, j) of the m-th Hankel
//! matrix is c_{1+i+j}.

use crate::dynsys::{trace_sequence, IntMatrix};
use crate::linalg;
use crate::seqkit::{transform_c, CongruenceVerdict, PeriodicCombination, SeqPrefix};
use crate::{arith, Error, Rat, Result};

use num_traits::Zero;

/// Window w_0, w_1, … feeding Hankel matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HankelWindow {
    values: Vec<Rat>,
}

impl HankelWindow {
    pub fn new(values: Vec<Rat>) -> Self {
        Self { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| arith::rat(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.values[i]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// The (m+1)×(m+1) matrix with entries w_{i+j}.
    pub fn matrix(&self, m: usize) -> Result<Vec<Vec<Rat>>> {
        self.require(2 * m + 1)?;
        Ok((0..=m)
            .map(|i| (0..=m).map(|j| self.values[i + j].clone()).collect())
            .collect())
    }

    fn require(&self, need: usize) -> Result<()> {
        if self.len() < need {
            Err(Error::ShortWindow {
                need,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// A linear recurrence c_{n+p} = α_{p−1} c_{n+p−1} + ⋯ + α_0 c_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Recurrence {
    /// α_0, …, α_{p−1}.
    pub coeffs: Vec<Rat>,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether the recurrence holds at every index of the window.
    pub fn fits(&self, w: &HankelWindow) -> bool {
        let p = self.order();
        (0..w.len().saturating_sub(p)).all(|n| {
            let predicted: Rat = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| a * w.get(n + i))
                .sum();
            predicted == *w.get(n + p)
        })
    }
}

/// a_n = tr Aⁿ − tr Bⁿ for n = 1..N. Either matrix may be 0×0.
pub fn lefschetz_sequence(a: &IntMatrix, b: &IntMatrix, n: usize) -> SeqPrefix {
    let ta = trace_sequence(a, n);
    let tb = trace_sequence(b, n);
    ta.zip_with(&tb, |x, y| x - y)
}

/// Δ_0, …, Δ_{m_max} of the window, each computed fraction-free.
pub fn hankel_dets(w: &HankelWindow, m_max: usize) -> Result<Vec<Rat>> {
    w.require(2 * m_max + 1)?;
    (0..=m_max)
        .map(|m| Ok(linalg::rational_det(&w.matrix(m)?)))
        .collect()
}

/// The generating sequence of `a` as a Hankel window: w_i = c_{1+i}.
pub fn generating_window(a: &SeqPrefix) -> HankelWindow {
    HankelWindow::new(transform_c(a).values().to_vec())
}

/// Verdict on Δ_m = 0 for every bound ≤ m ≤ bound + width, taken over the
/// generating sequence of `a`. A failure reports the first nonvanishing Δ_m.
pub fn generating_hankel_test(
    a: &SeqPrefix,
    bound: usize,
    width: usize,
) -> Result<CongruenceVerdict> {
    let top = bound + width;
    let need = 2 * top + 1;
    if a.len() < need {
        return Err(Error::ShortWindow { need, len: a.len() });
    }
    let w = generating_window(a);
    for m in bound..=top {
        let det = linalg::rational_det(&w.matrix(m)?);
        if !det.is_zero() {
            return Ok(CongruenceVerdict::Fails {
                index: m,
                witness: det,
            });
        }
    }
    Ok(CongruenceVerdict::Holds(top))
}

/// Minimal-order recurrence holding across the whole window, up to `p_max`.
///
/// An all-zero window has the order-0 recurrence. Ties between solutions of
/// an underdetermined system are broken by zeroing free coefficients.
pub fn recurrence_detect(w: &HankelWindow, p_max: usize) -> Result<Option<Recurrence>> {
    w.require(2 * p_max + 2)?;
    for p in 0..=p_max {
        let rows: Vec<Vec<Rat>> = (0..w.len() - p)
            .map(|n| (0..p).map(|i| w.get(n + i).clone()).collect())
            .collect();
        let rhs: Vec<Rat> = (0..w.len() - p).map(|n| w.get(n + p).clone()).collect();
        if let Some(coeffs) = linalg::solve(&rows, &rhs) {
            let rec = Recurrence { coeffs };
            debug_assert!(rec.fits(w));
            return Ok(Some(rec));
        }
    }
    Ok(None)
}

/// Matrices (A, B) with tr Aⁿ − tr Bⁿ = Σ b_d reg_d(n): A stacks b_d copies of
/// the d×d cyclic block for b_d > 0, B does the same for b_d < 0.
pub fn periodic_to_matrices(comb: &PeriodicCombination) -> (IntMatrix, IntMatrix) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (d, c) in comb.iter() {
        let copies = usize::try_from(c.magnitude()).expect("coefficient fits in memory");
        let block = IntMatrix::cyclic(d as usize);
        let target = if c > &num_bigint::BigInt::zero() {
            &mut pos
        } else {
            &mut neg
        };
        target.extend(std::iter::repeat_n(block, copies));
    }
    (IntMatrix::block_diag(&pos), IntMatrix::block_diag(&neg))
}
