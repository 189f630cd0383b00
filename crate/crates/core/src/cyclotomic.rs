//! Integer polynomials and cyclotomic polynomials.
//!
//! A sum `sum_j c_j xi_q^j` is zero exactly when `sum_j c_j x^j` is divisible by
//! `Phi_q(x)`, because `Phi_q` is the minimal polynomial of `xi_q` over the
//! rationals. `Phi_q` is monic, so the remainder stays integral.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Coefficients in ascending degree, without trailing zeros. The zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i128>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![0i128; n + 1];
        coeffs[0] = -1;
        coeffs[n] = 1;
        IntPolynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn mul(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.is_zero() || other.is_zero() {
            return Ok(IntPolynomial::zero());
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a.checked_mul(b).ok_or(Error::Overflow)?;
                out[i + j] = out[i + j].checked_add(prod).ok_or(Error::Overflow)?;
            }
        }
        Ok(IntPolynomial::new(out))
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial)> {
        if !divisor.is_monic() {
            return Err(Error::InvalidSpec("divisor must be monic".into()));
        }
        let dn = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return Ok((IntPolynomial::zero(), self.clone()));
        }
        let mut quot = vec![0i128; rem.len() - dn];
        for i in (0..quot.len()).rev() {
            let lead = rem[i + dn];
            if lead == 0 {
                continue;
            }
            quot[i] = lead;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let prod = lead.checked_mul(d).ok_or(Error::Overflow)?;
                rem[i + j] = rem[i + j].checked_sub(prod).ok_or(Error::Overflow)?;
            }
        }
        rem.truncate(dn);
        Ok((IntPolynomial::new(quot), IntPolynomial::new(rem)))
    }
}

/// Memoizing source of cyclotomic polynomials.
#[derive(Debug, Default, Clone)]
pub struct CyclotomicCache {
    cache: BTreeMap<usize, IntPolynomial>,
}

impl CyclotomicCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, n: usize) -> &IntPolynomial {
        assert!(n >= 1, "cyclotomic index must be positive");
        if !self.cache.contains_key(&n) {
            let mut poly = IntPolynomial::x_pow_minus_one(n);
            for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
                let phi_d = self.get(d).clone();
                let (q, r) = poly
                    .div_rem_monic(&phi_d)
                    .expect("cyclotomic coefficients fit in i128");
                debug_assert!(r.is_zero());
                poly = q;
            }
            self.cache.insert(n, poly);
        }
        &self.cache[&n]
    }
}

/// `Phi_n(x)`.
pub fn cyclotomic(n: usize) -> IntPolynomial {
    CyclotomicCache::new().get(n).clone()
}

/// Remainder of `sum_j counts[j] x^j` modulo `phi`.
pub fn reduce_counts(counts: &[i64], phi: &IntPolynomial) -> Result<IntPolynomial> {
    let poly = IntPolynomial::new(counts.iter().map(|&c| c as i128).collect());
    Ok(poly.div_rem_monic(phi)?.1)
}
