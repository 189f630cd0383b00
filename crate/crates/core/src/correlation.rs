//! Aperiodic correlation with exact values in the group ring `Z[Z_q]`.
//!
//! `Theta(a, b)(tau) = sum_t a_t conj(b_{t+tau})`. With `a_t = xi^{e_t}` and
//! `b_s = xi^{f_s}` every term is `xi^{e_t - f_{t+tau}}`, so a correlation value
//! is a multiplicity vector over `Z_q`. Null entries contribute nothing.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cyclotomic::{reduce_counts, CyclotomicCache, IntPolynomial};
use crate::error::{Error, Result};
use crate::waveform::RootSequence;

/// `sum_j counts[j] * xi_q^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    modulus: u32,
    counts: Vec<i64>,
}

impl GroupRingElement {
    pub fn zero(modulus: u32) -> Self {
        GroupRingElement {
            modulus,
            counts: vec![0; modulus as usize],
        }
    }

    pub fn new(modulus: u32, counts: Vec<i64>) -> Result<Self> {
        if counts.len() != modulus as usize {
            return Err(Error::LengthMismatch {
                expected: modulus as usize,
                found: counts.len(),
            });
        }
        Ok(GroupRingElement { modulus, counts })
    }

    /// The integer `n`, i.e. `n * xi^0`.
    pub fn integer(modulus: u32, n: i64) -> Self {
        let mut g = Self::zero(modulus);
        g.counts[0] = n;
        g
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Adds one copy of `xi^exponent`.
    #[inline]
    pub fn push(&mut self, exponent: u32) {
        self.counts[(exponent % self.modulus) as usize] += 1;
    }

    pub fn checked_add(&self, other: &GroupRingElement) -> Result<GroupRingElement> {
        let mut out = self.clone();
        out.checked_add_assign(other)?;
        Ok(out)
    }

    pub fn checked_add_assign(&mut self, other: &GroupRingElement) -> Result<()> {
        self.same_modulus(other)?;
        for (a, &b) in self.counts.iter_mut().zip(&other.counts) {
            *a = a.checked_add(b).ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    pub fn checked_sub(&self, other: &GroupRingElement) -> Result<GroupRingElement> {
        self.same_modulus(other)?;
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(&a, &b)| a.checked_sub(b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupRingElement {
            modulus: self.modulus,
            counts,
        })
    }

    fn same_modulus(&self, other: &GroupRingElement) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        Ok(())
    }

    /// Complex conjugate: exponents negated mod q.
    pub fn conj(&self) -> GroupRingElement {
        let q = self.modulus as usize;
        let mut counts = vec![0; q];
        for (j, &c) in self.counts.iter().enumerate() {
            counts[(q - j) % q] = c;
        }
        GroupRingElement {
            modulus: self.modulus,
            counts,
        }
    }

    /// Sum of the multiplicities, the number of terms for correlation sums.
    pub fn total(&self) -> i64 {
        self.counts.iter().sum()
    }

    /// True if every multiplicity is zero (stronger than [`Self::is_zero_exact`]).
    pub fn is_trivial(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn to_complex(&self) -> Complex64 {
        let step = core::f64::consts::TAU / self.modulus as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| Complex64::from_polar(c as f64, step * j as f64))
            .sum()
    }

    /// Exact test for `sum_j counts[j] xi^j = 0`.
    pub fn is_zero_exact(&self) -> bool {
        ZeroTester::new(self.modulus).is_zero(self)
    }

    /// Exact test for equality with the integer `n`.
    pub fn equals_integer(&self, n: i64) -> bool {
        let mut shifted = self.clone();
        match shifted.counts[0].checked_sub(n) {
            Some(v) => shifted.counts[0] = v,
            None => return false,
        }
        shifted.is_zero_exact()
    }
}

/// Zero tester holding `Phi_q` for repeated use.
#[derive(Debug, Clone)]
pub struct ZeroTester {
    modulus: u32,
    phi: IntPolynomial,
}

impl ZeroTester {
    pub fn new(modulus: u32) -> Self {
        ZeroTester {
            modulus,
            phi: CyclotomicCache::new().get(modulus as usize).clone(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn phi(&self) -> &IntPolynomial {
        &self.phi
    }

    pub fn is_zero(&self, g: &GroupRingElement) -> bool {
        assert_eq!(g.modulus, self.modulus, "modulus mismatch in zero test");
        if g.is_trivial() {
            return true;
        }
        // a full orbit 1 + xi + .. + xi^{q-1} vanishes only for q >= 2
        let c0 = g.counts[0];
        if self.modulus >= 2 && g.counts.iter().all(|&c| c == c0) {
            return true;
        }
        reduce_counts(&g.counts, &self.phi)
            .expect("i64 counts reduce within i128")
            .is_zero()
    }

    pub fn equals_integer(&self, g: &GroupRingElement, n: i64) -> bool {
        let mut shifted = g.clone();
        match shifted.counts[0].checked_sub(n) {
            Some(v) => shifted.counts[0] = v,
            None => return false,
        }
        self.is_zero(&shifted)
    }
}

fn check_pair(a: &RootSequence, b: &RootSequence) -> Result<()> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch {
            expected: a.modulus(),
            found: b.modulus(),
        });
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// `Theta(a, b)(tau)` for `|tau| < L`.
pub fn accf_exact(a: &RootSequence, b: &RootSequence, tau: i64) -> Result<GroupRingElement> {
    check_pair(a, b)?;
    let len = a.len();
    if tau.unsigned_abs() as usize >= len {
        return Err(Error::ShiftOutOfRange { shift: tau, length: len });
    }
    let q = a.modulus();
    let mut g = GroupRingElement::zero(q);
    accumulate(&mut g.counts, a, b, tau);
    Ok(g)
}

fn accumulate(counts: &mut [i64], a: &RootSequence, b: &RootSequence, tau: i64) {
    let q = a.modulus();
    let len = a.len();
    let (start, end) = if tau >= 0 {
        (0, len - tau as usize)
    } else {
        ((-tau) as usize, len)
    };
    for t in start..end {
        let s = (t as i64 + tau) as usize;
        if let (Some(x), Some(y)) = (a.get(t), b.get(s)) {
            counts[((x + q - y) % q) as usize] += 1;
        }
    }
}

fn check_rows(c1: &[RootSequence], c2: &[RootSequence]) -> Result<(u32, usize)> {
    if c1.len() != c2.len() {
        return Err(Error::Shape(alloc::format!(
            "rows hold {} and {} sequences",
            c1.len(),
            c2.len()
        )));
    }
    let first = c1
        .first()
        .ok_or_else(|| Error::Shape("empty code row".into()))?;
    for s in c1.iter().chain(c2) {
        check_pair(first, s)?;
    }
    Ok((first.modulus(), first.len()))
}

/// `sum_m Theta(c1[m], c2[m])(tau)`.
pub fn code_accf(c1: &[RootSequence], c2: &[RootSequence], tau: i64) -> Result<GroupRingElement> {
    let (q, len) = check_rows(c1, c2)?;
    if tau.unsigned_abs() as usize >= len {
        return Err(Error::ShiftOutOfRange { shift: tau, length: len });
    }
    let mut g = GroupRingElement::zero(q);
    for (a, b) in c1.iter().zip(c2) {
        accumulate(&mut g.counts, a, b, tau);
    }
    Ok(g)
}

/// Code correlation at every shift `tau in [0, L)`, entry `tau` of the result.
pub fn code_accf_nonnegative(
    c1: &[RootSequence],
    c2: &[RootSequence],
) -> Result<Vec<GroupRingElement>> {
    let (q, len) = check_rows(c1, c2)?;
    let qu = q as usize;
    let mut flat = vec![0i64; len * qu];
    let mut xs: Vec<i64> = vec![0; len];
    let mut ys: Vec<i64> = vec![0; len];
    for (a, b) in c1.iter().zip(c2) {
        for (slot, e) in xs.iter_mut().zip(a.entries()) {
            *slot = e.map_or(-1, |v| v as i64);
        }
        for (slot, e) in ys.iter_mut().zip(b.entries()) {
            *slot = e.map_or(-1, |v| v as i64);
        }
        for (t, &x) in xs.iter().enumerate() {
            if x < 0 {
                continue;
            }
            let shifted = x + q as i64;
            for (tau, &y) in ys[t..].iter().enumerate() {
                if y >= 0 {
                    flat[tau * qu + ((shifted - y) % q as i64) as usize] += 1;
                }
            }
        }
    }
    Ok(flat
        .chunks_exact(qu)
        .map(|c| GroupRingElement {
            modulus: q,
            counts: c.to_vec(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEntry {
    pub tau: i64,
    pub value: GroupRingElement,
    pub is_zero: bool,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

/// Correlation of two code rows at every shift `-(L-1) ..= L-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile {
    pub modulus: u32,
    pub length: usize,
    pub entries: Vec<ProfileEntry>,
}

impl CorrelationProfile {
    pub fn at(&self, tau: i64) -> Option<&ProfileEntry> {
        let idx = tau + self.length as i64 - 1;
        usize::try_from(idx).ok().and_then(|i| self.entries.get(i))
    }
}

/// Negative shifts come from `Theta(a, b)(-tau) = conj Theta(b, a)(tau)`.
pub fn correlation_profile(c1: &[RootSequence], c2: &[RootSequence]) -> Result<CorrelationProfile> {
    let forward = code_accf_nonnegative(c1, c2)?;
    let backward = code_accf_nonnegative(c2, c1)?;
    let q = c1[0].modulus();
    let len = c1[0].len();
    let tester = ZeroTester::new(q);
    // exact zeros are reported as 0.0 rather than rounding noise
    let make = |tau: i64, value: GroupRingElement| {
        let is_zero = tester.is_zero(&value);
        let z = if is_zero {
            Complex64::new(0.0, 0.0)
        } else {
            value.to_complex()
        };
        ProfileEntry {
            tau,
            is_zero,
            re: z.re,
            im: z.im,
            magnitude: z.norm(),
            value,
        }
    };
    let mut entries = Vec::with_capacity(2 * len - 1);
    for tau in (1..len).rev() {
        entries.push(make(-(tau as i64), backward[tau].conj()));
    }
    for (tau, value) in forward.into_iter().enumerate() {
        entries.push(make(tau as i64, value));
    }
    Ok(CorrelationProfile {
        modulus: q,
        length: len,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(q: u32, e: &[u32]) -> RootSequence {
        RootSequence::from_exponents(q, e).unwrap()
    }

    #[test]
    fn zero_test_examples() {
        assert!(GroupRingElement::new(6, vec![1, 0, 1, 0, 1, 0])
            .unwrap()
            .is_zero_exact());
        assert!(!GroupRingElement::new(6, vec![1, 1, 0, 0, 0, 0])
            .unwrap()
            .is_zero_exact());
        assert!(GroupRingElement::new(5, vec![3; 5]).unwrap().is_zero_exact());
        // 1 + xi^3 vanishes for q = 6, 1 + xi^2 does not
        assert!(GroupRingElement::new(6, vec![1, 0, 0, 1, 0, 0])
            .unwrap()
            .is_zero_exact());
        assert!(!GroupRingElement::new(6, vec![1, 0, 1, 0, 0, 0])
            .unwrap()
            .is_zero_exact());
    }

    #[test]
    fn autocorrelation_at_zero_is_length() {
        let a = seq(3, &[0, 1, 2, 2, 1]);
        let g = accf_exact(&a, &a, 0).unwrap();
        assert_eq!(g.counts(), &[5, 0, 0]);
    }

    #[test]
    fn hand_computed_shift() {
        let a = seq(2, &[0, 0, 0, 1]);
        let g = accf_exact(&a, &a, 1).unwrap();
        assert_eq!(g.counts(), &[2, 1]);
        assert!((g.to_complex().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golay_pair_cancels() {
        let row = [seq(2, &[0, 0, 0, 1]), seq(2, &[0, 1, 0, 0])];
        for tau in 1..4 {
            assert!(code_accf(&row, &row, tau).unwrap().is_zero_exact());
            assert!(code_accf(&row, &row, -tau).unwrap().is_zero_exact());
        }
        assert!(code_accf(&row, &row, 0).unwrap().equals_integer(8));
    }

    #[test]
    fn shift_bounds() {
        let a = seq(2, &[0, 1]);
        assert!(matches!(
            accf_exact(&a, &a, 2),
            Err(Error::ShiftOutOfRange { .. })
        ));
        assert!(accf_exact(&a, &seq(3, &[0, 1]), 0).is_err());
    }

    #[test]
    fn bulk_matches_single_shift() {
        let a = RootSequence::new(4, vec![Some(1), None, Some(3), Some(0), None, Some(2)]).unwrap();
        let b = RootSequence::new(4, vec![Some(2), Some(2), None, Some(1), Some(3), Some(0)]).unwrap();
        let row1 = [a.clone(), b.clone()];
        let row2 = [b, a];
        let bulk = code_accf_nonnegative(&row1, &row2).unwrap();
        for (tau, g) in bulk.iter().enumerate() {
            assert_eq!(g, &code_accf(&row1, &row2, tau as i64).unwrap());
        }
        let profile = correlation_profile(&row1, &row2).unwrap();
        assert_eq!(profile.entries.len(), 11);
        for tau in -5..=5i64 {
            assert_eq!(
                profile.at(tau).unwrap().value,
                code_accf(&row1, &row2, tau).unwrap()
            );
        }
    }

    #[test]
    fn null_entries_are_skipped() {
        let a = RootSequence::new(3, vec![None, Some(1), None]).unwrap();
        let g = accf_exact(&a, &a, 0).unwrap();
        assert_eq!(g.total(), 1);
        let g = accf_exact(&a, &a, 1).unwrap();
        assert!(g.is_trivial());
    }
}
