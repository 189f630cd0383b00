//! Floating-point Gram check through the FFT.
//!
//! For codes `a` and `b` the aperiodic correlations at every shift are the
//! inverse transform of `sum_m A_m conj(B_m)` on a zero-padded grid of at
//! least `2L - 1` points. Index `s` of the result holds the correlation at
//! `tau = -s` (mod the grid size).

use ccc_core::CodeSet;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramCheck {
    /// Largest `|value - expected|` over every pair and shift.
    pub max_deviation: f64,
    /// `1e-9 * M * L`.
    pub tolerance: f64,
    pub pairs: usize,
}

impl GramCheck {
    pub fn passes(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

pub fn float_gram_check(set: &CodeSet) -> GramCheck {
    let len = set.length();
    let size = (2 * len - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let spectra: Vec<Vec<Vec<Complex64>>> = set
        .codes()
        .iter()
        .map(|code| {
            code.iter()
                .map(|seq| {
                    let mut buf = seq.to_complex();
                    buf.resize(size, Complex64::new(0.0, 0.0));
                    forward.process(&mut buf);
                    buf
                })
                .collect()
        })
        .collect();

    let peak = set.peak() as f64;
    let mut worst = 0.0f64;
    let mut pairs = 0;
    let mut acc = vec![Complex64::new(0.0, 0.0); size];
    for (k1, a) in spectra.iter().enumerate() {
        for (k2, b) in spectra.iter().enumerate() {
            pairs += 1;
            acc.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for (sa, sb) in a.iter().zip(b) {
                for ((z, x), y) in acc.iter_mut().zip(sa).zip(sb) {
                    *z += x * y.conj();
                }
            }
            inverse.process(&mut acc);
            for (s, z) in acc.iter().enumerate() {
                let value = *z / size as f64;
                let expected = if k1 == k2 && s == 0 { peak } else { 0.0 };
                worst = worst.max((value - Complex64::new(expected, 0.0)).norm());
            }
        }
    }
    GramCheck {
        max_deviation: worst,
        tolerance: 1e-9 * peak,
        pairs,
    }
}
