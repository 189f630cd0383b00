//! CCC certification and the permutation-condition experiments.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::construct::{build, CodeSet};
use crate::correlation::{code_accf, code_accf_nonnegative, GroupRingElement, ZeroTester};
use crate::error::{Error, Result};
use crate::mixed_radix::DomainSpec;
use crate::qary_function::{is_permutation_mod, FuncTable, GeneralizedQuadraticSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyMode {
    /// Cyclotomic reduction; the authority.
    #[default]
    Exact,
    /// `|Theta - expected| < 1e-9 * M * L`; advisory only.
    Float,
}

impl VerifyMode {
    pub fn name(self) -> &'static str {
        match self {
            VerifyMode::Exact => "exact",
            VerifyMode::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    /// Stored violations; `None` keeps all of them.
    pub max_violations: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: VerifyMode::Exact,
            max_violations: Some(16),
        }
    }
}

impl VerifyOptions {
    pub fn float() -> Self {
        VerifyOptions {
            mode: VerifyMode::Float,
            ..Self::default()
        }
    }
}

/// A cell `(k1, k2, tau)` whose code correlation differs from its CCC value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub k1: usize,
    pub k2: usize,
    pub tau: i64,
    pub value: GroupRingElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub is_ccc: bool,
    /// `K == M`.
    pub square: bool,
    /// `M * L`.
    pub peak: i64,
    pub mode: VerifyMode,
    /// Number of `(k1, k2, tau)` cells evaluated.
    pub shifts_tested: usize,
    /// Total violating cells, including those beyond the cap.
    pub violation_count: usize,
    /// Sorted by `(k1, k2, tau)`, truncated to the cap.
    pub violations: Vec<Violation>,
}

struct CellJudge {
    mode: VerifyMode,
    tester: ZeroTester,
    peak: i64,
    tolerance: f64,
}

impl CellJudge {
    fn new(set: &CodeSet, mode: VerifyMode) -> Self {
        CellJudge {
            mode,
            tester: ZeroTester::new(set.modulus()),
            peak: set.peak(),
            tolerance: 1e-9 * set.peak() as f64,
        }
    }

    fn expected(&self, k1: usize, k2: usize, tau: i64) -> i64 {
        if k1 == k2 && tau == 0 {
            self.peak
        } else {
            0
        }
    }

    fn ok(&self, k1: usize, k2: usize, tau: i64, value: &GroupRingElement) -> bool {
        let expected = self.expected(k1, k2, tau);
        match self.mode {
            VerifyMode::Exact => self.tester.equals_integer(value, expected),
            VerifyMode::Float => {
                (value.to_complex() - num_complex::Complex64::new(expected as f64, 0.0)).norm()
                    < self.tolerance
            }
        }
    }
}

/// Checks every pair `k1 <= k2` at every shift `|tau| < L`. Auto-correlations
/// only need `tau >= 0`; negative cross shifts come from the swapped pair.
pub fn verify_ccc(set: &CodeSet, options: &VerifyOptions) -> VerifyReport {
    let judge = CellJudge::new(set, options.mode);
    let k = set.num_codes();
    let mut violations = Vec::new();
    let mut count = 0usize;
    let mut tested = 0usize;
    let mut record = |k1: usize, k2: usize, tau: i64, value: GroupRingElement| {
        count += 1;
        if options.max_violations.is_none_or(|cap| violations.len() < cap) {
            violations.push(Violation { k1, k2, tau, value });
        }
    };
    for k1 in 0..k {
        for k2 in k1..k {
            let forward = code_accf_nonnegative(set.code(k1), set.code(k2))
                .expect("code set rows share shape");
            if k1 != k2 {
                let backward = code_accf_nonnegative(set.code(k2), set.code(k1))
                    .expect("code set rows share shape");
                for tau in (1..set.length()).rev() {
                    tested += 1;
                    let value = backward[tau].conj();
                    if !judge.ok(k1, k2, -(tau as i64), &value) {
                        record(k1, k2, -(tau as i64), value);
                    }
                }
            }
            for (tau, value) in forward.into_iter().enumerate() {
                tested += 1;
                if !judge.ok(k1, k2, tau as i64, &value) {
                    record(k1, k2, tau as i64, value);
                }
            }
        }
    }
    let square = set.num_codes() == set.seqs_per_code();
    VerifyReport {
        is_ccc: count == 0 && square,
        square,
        peak: set.peak(),
        mode: options.mode,
        shifts_tested: tested,
        violation_count: count,
        violations,
    }
}

/// Exact verdict on individual cells `(k1, k2, tau)`.
pub fn verify_cells(set: &CodeSet, cells: &[(usize, usize, i64)]) -> Result<Vec<Option<Violation>>> {
    let judge = CellJudge::new(set, VerifyMode::Exact);
    cells
        .iter()
        .map(|&(k1, k2, tau)| {
            let k = set.num_codes();
            if k1 >= k || k2 >= k {
                return Err(Error::IndexOutOfRange {
                    index: k1.max(k2),
                    bound: k,
                });
            }
            let value = code_accf(set.code(k1), set.code(k2), tau)?;
            Ok((!judge.ok(k1, k2, tau, &value)).then_some(Violation { k1, k2, tau, value }))
        })
        .collect()
}

/// Uniformly drawn cells with `k1, k2 in [0, K)` and `tau in (-L, L)`.
pub fn sample_cells<R: Rng + ?Sized>(rng: &mut R, set: &CodeSet, count: usize) -> Vec<(usize, usize, i64)> {
    let k = set.num_codes();
    let l = set.length() as i64;
    (0..count)
        .map(|_| {
            (
                rng.random_range(0..k),
                rng.random_range(0..k),
                rng.random_range(-(l - 1)..l),
            )
        })
        .collect()
}

/// Coefficients of `C_{k1}(z) C_{k2}^dagger(z^{-1})` over the group ring, index
/// `e + L - 1` holding the coefficient of `z^e`.
pub fn gram_entry(set: &CodeSet, k1: usize, k2: usize) -> Vec<GroupRingElement> {
    let q = set.modulus();
    let l = set.length();
    let mut coeffs = vec![GroupRingElement::zero(q); 2 * l - 1];
    for (a, b) in set.code(k1).iter().zip(set.code(k2)) {
        // a(z) = sum_t xi^{a_t} z^t,  conj b(1/z) = sum_s xi^{-b_s} z^{-s}
        let a_terms: Vec<(usize, u32)> = a
            .entries()
            .iter()
            .enumerate()
            .filter_map(|(t, e)| e.map(|e| (t, e)))
            .collect();
        let b_terms: Vec<(usize, u32)> = b
            .entries()
            .iter()
            .enumerate()
            .filter_map(|(s, e)| e.map(|e| (s, (q - e) % q)))
            .collect();
        for &(t, ea) in &a_terms {
            for &(s, eb) in &b_terms {
                coeffs[t + l - 1 - s].push(ea + eb);
            }
        }
    }
    coeffs
}

/// `C(z) C^dagger(z^{-1}) = M L I_K`, checked coefficientwise and exactly.
pub fn gram_identity_holds(set: &CodeSet) -> bool {
    let tester = ZeroTester::new(set.modulus());
    let l = set.length();
    let k = set.num_codes();
    if k != set.seqs_per_code() {
        return false;
    }
    for k1 in 0..k {
        for k2 in 0..k {
            for (idx, c) in gram_entry(set, k1, k2).iter().enumerate() {
                let expected = if k1 == k2 && idx == l - 1 { set.peak() } else { 0 };
                if !tester.equals_integer(c, expected) {
                    return false;
                }
            }
        }
    }
    true
}

/// `Delta_b (p^{m_b} - n p^{m_b - s})` for each block `b`, `1 <= s < m_b`, `1 <= n < p`.
pub fn witness_shifts(domain: &DomainSpec) -> Vec<usize> {
    let mut out = Vec::new();
    for (b, block) in domain.blocks().iter().enumerate() {
        let p = block.radix as usize;
        let full = domain.block_length(b);
        for s in 1..block.len {
            let unit = p.pow(block.len - s);
            for n in 1..p {
                let tau = domain.stride(b) * (full - n * unit);
                if !out.contains(&tau) {
                    out.push(tau);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeOutcome {
    /// First exact violation found, if any.
    pub evidence: Option<Violation>,
    /// The evidence came from the witness-shift scan.
    pub at_witness_shift: bool,
    pub cells_scanned: usize,
}

/// Builds a corrupted spec and looks for an exact violation, scanning the
/// witness shifts over all code pairs before falling back to a full scan.
pub fn necessity_probe(spec: &GeneralizedQuadraticSpec) -> Result<ProbeOutcome> {
    if !spec.is_corrupted() {
        return Err(Error::NotCorrupted);
    }
    let set = build(spec)?;
    let judge = CellJudge::new(&set, VerifyMode::Exact);
    let k = set.num_codes();
    let mut scanned = 0usize;
    let shifts = witness_shifts(spec.domain());
    for &tau in &shifts {
        for k1 in 0..k {
            for k2 in k1..k {
                let signs: &[i64] = if k1 == k2 { &[1] } else { &[1, -1] };
                for &sign in signs {
                    let tau = sign * tau as i64;
                    scanned += 1;
                    let value = code_accf(set.code(k1), set.code(k2), tau)?;
                    if !judge.ok(k1, k2, tau, &value) {
                        return Ok(ProbeOutcome {
                            evidence: Some(Violation { k1, k2, tau, value }),
                            at_witness_shift: true,
                            cells_scanned: scanned,
                        });
                    }
                }
            }
        }
    }
    let report = verify_ccc(
        &set,
        &VerifyOptions {
            mode: VerifyMode::Exact,
            max_violations: Some(1),
        },
    );
    Ok(ProbeOutcome {
        evidence: report.violations.into_iter().next(),
        at_witness_shift: false,
        cells_scanned: scanned + report.shifts_tested,
    })
}

/// Outcome of comparing "all nontrivial character sums of `t` vanish" with
/// "`t` permutes `Z_q`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Report {
    pub modulus: u32,
    pub tables_checked: usize,
    pub permutations: usize,
    pub exhaustive: bool,
    pub counterexamples: Vec<FuncTable>,
}

impl Lemma1Report {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// True iff `sum_x xi^{r t(x)} = 0` exactly for every `r = 1..q-1`.
pub fn character_sums_vanish(t: &FuncTable, tester: &ZeroTester) -> bool {
    let q = t.modulus();
    (1..q).all(|r| {
        let mut g = GroupRingElement::zero(q);
        for &v in t.values() {
            g.push(((r as u64 * v as u64) % q as u64) as u32);
        }
        tester.is_zero(&g)
    })
}

fn lemma1_on(tables: impl Iterator<Item = FuncTable>, q: u32, exhaustive: bool) -> Lemma1Report {
    let tester = ZeroTester::new(q);
    let mut report = Lemma1Report {
        modulus: q,
        tables_checked: 0,
        permutations: 0,
        exhaustive,
        counterexamples: Vec::new(),
    };
    for t in tables {
        report.tables_checked += 1;
        let perm = is_permutation_mod(&t, q).expect("q divides q");
        if perm {
            report.permutations += 1;
        }
        if perm != character_sums_vanish(&t, &tester) {
            report.counterexamples.push(t);
        }
    }
    report
}

/// Largest `q^q` enumerated by [`lemma1_equiv_check`].
pub const LEMMA1_EXHAUSTIVE_LIMIT: usize = 50_000;

/// Exhaustive over all `q^q` maps `Z_q -> Z_q`; `None` when `q^q` exceeds
/// [`LEMMA1_EXHAUSTIVE_LIMIT`] (use [`lemma1_equiv_check_sampled`]).
pub fn lemma1_equiv_check(q: u32) -> Option<Lemma1Report> {
    let total = (q as usize).checked_pow(q)?;
    if q == 0 || total > LEMMA1_EXHAUSTIVE_LIMIT {
        return None;
    }
    let tables = (0..total).map(move |mut idx| {
        let values = (0..q)
            .map(|_| {
                let d = (idx % q as usize) as u32;
                idx /= q as usize;
                d
            })
            .collect();
        FuncTable::new(q, values).expect("reduced")
    });
    Some(lemma1_on(tables, q, true))
}

/// Random maps, half of them drawn as permutations so both sides get exercised.
pub fn lemma1_equiv_check_sampled<R: Rng + ?Sized>(rng: &mut R, q: u32, samples: usize) -> Lemma1Report {
    let mut tables = Vec::with_capacity(samples);
    for i in 0..samples {
        tables.push(if i % 2 == 0 {
            crate::construct::random_permutation_table(rng, q, q)
        } else {
            crate::construct::random_table(rng, q)
        });
    }
    lemma1_on(tables.into_iter(), q, false)
}
