//! The domain `Z_{p_1}^{m_1} x ... x Z_{p_k}^{m_k}` and its bijection with `[0, L)`.
//!
//! A point is a flat digit vector of length `m = m_1 + ... + m_k`. Block `i`
//! occupies positions `offset_i .. offset_i + m_i`, digits inside a block are
//! least-significant first, and the integer index is
//! `x = sigma_1 * Delta_1 + ... + sigma_k * Delta_k` with `Delta_1 = 1` and
//! `Delta_{i+1} = Delta_i * p_i^{m_i}`. Block 1 therefore varies fastest.
//!
//! With more than one block every radix must be prime and the radices strictly
//! increasing. A single block may use any radix `>= 2`, which is how the
//! `Z_q^m` domains of the single-modulus constructions are expressed.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};

/// One factor `Z_p^m` of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub radix: u32,
    pub len: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpec {
    blocks: Vec<Block>,
    modulus: u32,
    length: usize,
    offsets: Vec<usize>,
    strides: Vec<usize>,
    radix_at: Vec<u32>,
    block_at: Vec<usize>,
}

/// Digit vector of a domain point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomainPoint(Vec<u32>);

impl DomainPoint {
    pub fn new(digits: Vec<u32>) -> Self {
        DomainPoint(digits)
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u32> {
        self.0
    }

    /// Number of nonzero digits.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&d| d != 0).count()
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl DomainSpec {
    /// Builds a domain from `(radix, exponent)` pairs, block 1 first.
    pub fn new(blocks: &[(u32, u32)]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidDomain("at least one block is required".into()));
        }
        for (i, &(p, m)) in blocks.iter().enumerate() {
            if p < 2 {
                return Err(Error::InvalidDomain(format!("block {i}: radix {p} < 2")));
            }
            if m == 0 {
                return Err(Error::InvalidDomain(format!("block {i}: exponent must be >= 1")));
            }
            if blocks.len() > 1 && !is_prime(p) {
                return Err(Error::InvalidDomain(format!(
                    "block {i}: radix {p} is not prime (required when k > 1)"
                )));
            }
            if i > 0 && blocks[i - 1].0 >= p {
                return Err(Error::InvalidDomain(format!(
                    "radices must be strictly increasing ({} then {p})",
                    blocks[i - 1].0
                )));
            }
        }

        let mut modulus: u32 = 1;
        let mut length: usize = 1;
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut strides = Vec::with_capacity(blocks.len());
        let mut radix_at = Vec::new();
        let mut block_at = Vec::new();
        for (i, &(p, m)) in blocks.iter().enumerate() {
            modulus = modulus.checked_mul(p).ok_or(Error::Overflow)?;
            offsets.push(radix_at.len());
            strides.push(length);
            for _ in 0..m {
                length = length.checked_mul(p as usize).ok_or(Error::Overflow)?;
                radix_at.push(p);
                block_at.push(i);
            }
        }
        Ok(DomainSpec {
            blocks: blocks
                .iter()
                .map(|&(radix, len)| Block { radix, len })
                .collect(),
            modulus,
            length,
            offsets,
            strides,
            radix_at,
            block_at,
        })
    }

    /// The single-block domain `Z_q^m`.
    pub fn uniform(q: u32, m: u32) -> Result<Self> {
        Self::new(&[(q, m)])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Alphabet size `q`, the product of the radices.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Sequence length `L`.
    pub fn length(&self) -> usize {
        self.length
    }

    /// Number of variables `m`.
    pub fn num_vars(&self) -> usize {
        self.radix_at.len()
    }

    /// `Delta_i`, the index stride of block `i`.
    pub fn stride(&self, block: usize) -> usize {
        self.strides[block]
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    /// Flat variable positions belonging to `block`.
    pub fn block_range(&self, block: usize) -> Range<usize> {
        let start = self.offsets[block];
        start..start + self.blocks[block].len as usize
    }

    /// `p_i^{m_i}`.
    pub fn block_length(&self, block: usize) -> usize {
        (self.blocks[block].radix as usize).pow(self.blocks[block].len)
    }

    pub fn radix_at(&self, position: usize) -> u32 {
        self.radix_at[position]
    }

    pub fn block_of(&self, position: usize) -> usize {
        self.block_at[position]
    }

    /// `q / p_i`, the weight carried by block-`i` quadratic and linear code terms.
    pub fn block_weight(&self, block: usize) -> u32 {
        self.modulus / self.blocks[block].radix
    }

    pub fn int_to_vec(&self, x: usize) -> Result<DomainPoint> {
        if x >= self.length {
            return Err(Error::IndexOutOfRange {
                index: x,
                bound: self.length,
            });
        }
        let mut digits = vec![0u32; self.num_vars()];
        self.fill_digits(x, &mut digits);
        Ok(DomainPoint(digits))
    }

    /// Writes the digits of `x` (assumed `< L`) into `out`.
    pub(crate) fn fill_digits(&self, mut x: usize, out: &mut [u32]) {
        for (slot, &p) in out.iter_mut().zip(&self.radix_at) {
            let p = p as usize;
            *slot = (x % p) as u32;
            x /= p;
        }
    }

    pub fn vec_to_int(&self, point: &DomainPoint) -> Result<usize> {
        self.digits_to_int(point.digits())
    }

    pub fn digits_to_int(&self, digits: &[u32]) -> Result<usize> {
        if digits.len() != self.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.num_vars(),
                found: digits.len(),
            });
        }
        let mut x = 0usize;
        let mut weight = 1usize;
        for (position, (&d, &p)) in digits.iter().zip(&self.radix_at).enumerate() {
            if d >= p {
                return Err(Error::DigitOutOfRange {
                    position,
                    digit: d,
                    radix: p,
                });
            }
            x += d as usize * weight;
            weight *= p as usize;
        }
        Ok(x)
    }

    /// Digits of every index, row-major: entry `x * m + j` is digit `j` of `x`.
    pub fn digit_table(&self) -> Vec<u32> {
        let m = self.num_vars();
        let mut table = vec![0u32; self.length * m];
        let mut current = vec![0u32; m];
        for x in 0..self.length {
            table[x * m..(x + 1) * m].copy_from_slice(&current);
            // odometer increment, position 0 fastest
            for (d, &p) in current.iter_mut().zip(&self.radix_at) {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
        table
    }

    /// All points in index order.
    pub fn points(&self) -> impl Iterator<Item = DomainPoint> + '_ {
        let m = self.num_vars();
        let table = self.digit_table();
        (0..self.length).map(move |x| DomainPoint(table[x * m..(x + 1) * m].to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d72() -> DomainSpec {
        DomainSpec::new(&[(2, 3), (3, 2)]).unwrap()
    }

    #[test]
    fn derived_parameters() {
        let d = d72();
        assert_eq!(d.modulus(), 6);
        assert_eq!(d.length(), 72);
        assert_eq!(d.num_vars(), 5);
        assert_eq!(d.stride(0), 1);
        assert_eq!(d.stride(1), 8);
        assert_eq!(d.block_offset(1), 3);
        assert_eq!(d.block_weight(0), 3);
        assert_eq!(d.block_weight(1), 2);
    }

    #[test]
    fn table_one_rows() {
        let d = d72();
        assert_eq!(d.int_to_vec(11).unwrap().digits(), &[1, 1, 0, 1, 0]);
        assert_eq!(d.int_to_vec(70).unwrap().digits(), &[0, 1, 1, 2, 2]);
        assert_eq!(d.int_to_vec(0).unwrap().digits(), &[0; 5]);
        assert_eq!(d.digits_to_int(&[1, 1, 1, 0, 0]).unwrap(), 7);
        assert_eq!(d.digits_to_int(&[0, 1, 1, 2, 2]).unwrap(), 70);
        assert_eq!(d.digits_to_int(&[0; 5]).unwrap(), 0);
    }

    #[test]
    fn range_and_digit_errors() {
        let d = d72();
        assert_eq!(
            d.int_to_vec(72),
            Err(Error::IndexOutOfRange {
                index: 72,
                bound: 72
            })
        );
        assert_eq!(
            d.digits_to_int(&[0, 2, 0, 0, 0]),
            Err(Error::DigitOutOfRange {
                position: 1,
                digit: 2,
                radix: 2
            })
        );
        assert!(matches!(
            d.digits_to_int(&[0, 0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn domain_validation() {
        assert!(DomainSpec::new(&[]).is_err());
        assert!(DomainSpec::new(&[(3, 2), (2, 2)]).is_err());
        assert!(DomainSpec::new(&[(2, 2), (4, 2)]).is_err());
        assert!(DomainSpec::new(&[(2, 0)]).is_err());
        assert!(DomainSpec::new(&[(2, 2), (3, 1)]).is_ok());
        // composite radix is fine for a single block
        assert_eq!(DomainSpec::uniform(6, 3).unwrap().length(), 216);
    }

    #[test]
    fn single_block_is_plain_base_p() {
        let d = DomainSpec::uniform(5, 3).unwrap();
        for x in 0..125 {
            let v = d.int_to_vec(x).unwrap();
            let expected = [x % 5, (x / 5) % 5, x / 25];
            let got: Vec<usize> = v.digits().iter().map(|&d| d as usize).collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn digit_table_matches_int_to_vec() {
        let d = DomainSpec::new(&[(2, 2), (3, 1), (5, 1)]).unwrap();
        let m = d.num_vars();
        let table = d.digit_table();
        for x in 0..d.length() {
            assert_eq!(&table[x * m..(x + 1) * m], d.int_to_vec(x).unwrap().digits());
        }
    }
}
