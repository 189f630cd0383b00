//! Sequences derived from q-ary functions.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qary_function::{QaryFunction, Restriction};

/// A length-`L` sequence of `q`-th roots of unity, stored as exponents.
/// `None` entries stand for the complex value 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootSequence {
    modulus: u32,
    entries: Vec<Option<u32>>,
}

impl RootSequence {
    pub fn new(modulus: u32, entries: Vec<Option<u32>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidSpec("modulus must be positive".into()));
        }
        if let Some(value) = entries.iter().flatten().copied().find(|&e| e >= modulus) {
            return Err(Error::ValueOutOfRange { value, modulus });
        }
        Ok(RootSequence { modulus, entries })
    }

    /// A sequence with no null entries.
    pub fn from_exponents(modulus: u32, exponents: &[u32]) -> Result<Self> {
        Self::new(modulus, exponents.iter().map(|&e| Some(e)).collect())
    }

    pub(crate) fn from_raw(modulus: u32, entries: Vec<Option<u32>>) -> Self {
        debug_assert!(entries.iter().flatten().all(|&e| e < modulus));
        RootSequence { modulus, entries }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Option<u32>] {
        &self.entries
    }

    pub fn get(&self, t: usize) -> Option<u32> {
        self.entries[t]
    }

    /// Positions holding a root of unity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.entries[t].is_some()).collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        let step = core::f64::consts::TAU / self.modulus as f64;
        self.entries
            .iter()
            .map(|e| match e {
                Some(k) => Complex64::from_polar(1.0, step * *k as f64),
                None => Complex64::new(0.0, 0.0),
            })
            .collect()
    }

    /// Entrywise superposition of sequences with disjoint supports.
    pub fn superpose(parts: &[RootSequence]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Shape("nothing to superpose".into()))?;
        let mut entries = alloc::vec![None; first.len()];
        for part in parts {
            if part.modulus != first.modulus {
                return Err(Error::ModulusMismatch {
                    expected: first.modulus,
                    found: part.modulus,
                });
            }
            if part.len() != first.len() {
                return Err(Error::LengthMismatch {
                    expected: first.len(),
                    found: part.len(),
                });
            }
            for (slot, &e) in entries.iter_mut().zip(&part.entries) {
                if e.is_some() {
                    if slot.is_some() {
                        return Err(Error::Shape("supports overlap".into()));
                    }
                    *slot = e;
                }
            }
        }
        Ok(RootSequence {
            modulus: first.modulus,
            entries,
        })
    }
}

/// `(f_0, f_1, .., f_{L-1})`.
pub fn eta(f: &QaryFunction) -> Vec<u32> {
    f.table().to_vec()
}

/// `(xi^{f_0}, .., xi^{f_{L-1}})`.
pub fn psi(f: &QaryFunction) -> RootSequence {
    RootSequence::from_raw(f.modulus(), f.table().iter().map(|&v| Some(v)).collect())
}

/// The sequence of `f|_{x_J = c}`: `xi^{f_x}` on `N_c`, zero elsewhere.
pub fn psi_restricted(f: &QaryFunction, restriction: &Restriction) -> RootSequence {
    let domain = f.domain();
    let m = domain.num_vars();
    let digits = domain.digit_table();
    let entries = f
        .table()
        .iter()
        .enumerate()
        .map(|(x, &v)| restriction.matches(&digits[x * m..(x + 1) * m]).then_some(v))
        .collect();
    RootSequence::from_raw(f.modulus(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed_radix::DomainSpec;

    #[test]
    fn single_variable_function() {
        let d = DomainSpec::uniform(2, 1).unwrap();
        let f = QaryFunction::from_table(d, alloc::vec![0, 1]).unwrap();
        assert_eq!(eta(&f), alloc::vec![0, 1]);
        assert_eq!(psi(&f).entries(), &[Some(0), Some(1)]);
    }

    #[test]
    fn restriction_pieces_partition_psi() {
        let d = DomainSpec::new(&[(2, 2), (3, 1)]).unwrap();
        let table: Vec<u32> = (0..12).map(|x| (x * 5 + 1) % 6).collect();
        let f = QaryFunction::from_table(d.clone(), table).unwrap();
        let mut parts = Vec::new();
        for c in 0..3 {
            let r = Restriction::new(&d, alloc::vec![2], alloc::vec![c]).unwrap();
            let s = psi_restricted(&f, &r);
            assert_eq!(s.support().len(), 4);
            parts.push(s);
        }
        assert_eq!(RootSequence::superpose(&parts).unwrap(), psi(&f));
        assert_eq!(psi_restricted(&f, &Restriction::none()), psi(&f));
    }

    #[test]
    fn rejects_unreduced_exponent() {
        assert!(RootSequence::from_exponents(4, &[0, 4]).is_err());
    }
}
