//! The (12, 72) example over `Z_2^3 x Z_3^2` with `q = 6`:
//! `f = 2x1x2 + 4x2x3 + x2x4 + x2x5 + 3x1x3 + 2x4x5 + x2 + 2`, restricted on `x2`.

use std::time::{Duration, Instant};

use ccc_core::correlation::correlation_profile;
use ccc_core::qary_function::{MonomialForm, Restriction, ZeroPower};
use ccc_core::verify::{verify_ccc, VerifyOptions};
use ccc_core::waveform::{eta, psi_restricted};
use ccc_core::{CodeSet, DomainSpec, GeneralizedQuadraticSpec, QaryFunction};

use crate::config::BuildConfig;
use crate::error::{CliError, CliResult};

pub const EXAMPLE72_CONFIG: &str = include_str!("../../../configs/example72.json");

/// `eta(f)`, the printed 72-symbol reference.
pub const ETA_72: [u32; 72] = [
    2, 2, 3, 5, 2, 5, 1, 0, 2, 2, 4, 0, 2, 5, 2, 1, 2, 2, 5, 1, 2, 5, 3, 2, 2, 2, 4, 0, 2, 5, 2,
    1, 4, 4, 1, 3, 4, 1, 5, 4, 0, 0, 4, 0, 0, 3, 2, 1, 2, 2, 5, 1, 2, 5, 3, 2, 0, 0, 4, 0, 0, 3,
    2, 1, 4, 4, 3, 5, 4, 1, 1, 0,
];

/// Nonzero exponents of `psi(f|x2=0)`, printed as pairs each followed by `00`.
pub const RESTRICTED_X2_0_PAIRS: [[u32; 2]; 18] = [
    [2, 2], [2, 5], [2, 2], [2, 5], [2, 2], [2, 5], [2, 2], [2, 5], [4, 4],
    [4, 1], [0, 0], [0, 3], [2, 2], [2, 5], [0, 0], [0, 3], [4, 4], [4, 1],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Reproduce72 {
    pub checks: Vec<Check>,
    pub set: CodeSet,
    pub elapsed: Duration,
}

impl Reproduce72 {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn example72_spec() -> CliResult<GeneralizedQuadraticSpec> {
    BuildConfig::from_json(EXAMPLE72_CONFIG)?.to_spec()
}

fn domain() -> DomainSpec {
    DomainSpec::new(&[(2, 3), (3, 2)]).expect("valid domain")
}

/// The monomial listing of `f` with 0-based positions.
pub fn example72_monomials() -> MonomialForm {
    MonomialForm::from_sparse(
        domain(),
        &[
            (2, &[(0, 1), (1, 1)]),
            (4, &[(1, 1), (2, 1)]),
            (1, &[(1, 1), (3, 1)]),
            (1, &[(1, 1), (4, 1)]),
            (3, &[(0, 1), (2, 1)]),
            (2, &[(3, 1), (4, 1)]),
            (1, &[(1, 1)]),
            (2, &[]),
        ],
    )
    .expect("valid form")
}

fn f_direct(x: &[u32]) -> u32 {
    let [x1, x2, x3, x4, x5] = [x[0], x[1], x[2], x[3], x[4]];
    (2 * x1 * x2 + 4 * x2 * x3 + x2 * x4 + x2 * x5 + 3 * x1 * x3 + 2 * x4 * x5 + x2 + 2) % 6
}

/// `f + 3(d11 + t11) x2 + 3(d12 x1 + t12 x3) + 2(d21 x4 + t21 x5)`.
fn listed_sequence(d: [u32; 3], t: [u32; 3]) -> Vec<u32> {
    domain()
        .points()
        .map(|p| {
            let x = p.digits();
            (f_direct(x)
                + 3 * (d[0] + t[0]) * x[1]
                + 3 * (d[1] * x[0] + t[1] * x[2])
                + 2 * (d[2] * x[3] + t[2] * x[4]))
                % 6
        })
        .collect()
}

/// Code `t` as listed: `d21` fastest, then `d11`, then `d12`.
pub fn listed_code(t: [u32; 3]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d12 in 0..2 {
        for d11 in 0..2 {
            for d21 in 0..3 {
                out.push(listed_sequence([d11, d12, d21], t));
            }
        }
    }
    out
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        detail: detail.into(),
    }
}

fn first_mismatch<T: PartialEq>(a: &[T], b: &[T]) -> String {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        Some(i) => format!("first mismatch at x = {i}"),
        None if a.len() != b.len() => format!("lengths {} and {}", a.len(), b.len()),
        None => "all symbols match".into(),
    }
}

pub fn reproduce72() -> CliResult<Reproduce72> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let spec = example72_spec()?;
    let d = spec.domain().clone();
    let f = QaryFunction::from_spec(&spec);

    let eta_f = eta(&f);
    checks.push(check(
        "eta(f) equals the 72-symbol reference",
        eta_f == ETA_72,
        first_mismatch(&eta_f, &ETA_72),
    ));

    let from_monomials = QaryFunction::from_monomials(&example72_monomials(), ZeroPower::One);
    checks.push(check(
        "monomial listing evaluates to the reference",
        from_monomials.table() == ETA_72,
        first_mismatch(from_monomials.table(), &ETA_72),
    ));

    let restrict = |c: u32| {
        Restriction::new(&d, vec![1], vec![c]).map_err(|e| CliError::core("restriction", e))
    };
    let formula_ok = |c: u32, formula: &dyn Fn(&[u32]) -> u32| -> CliResult<(bool, usize)> {
        let view = f.restrict(restrict(c)?);
        let values = view.values();
        let ok = values.iter().all(|&(x, v)| {
            let p = d.int_to_vec(x).expect("in range");
            v == formula(p.digits())
        });
        Ok((ok && values.len() == 36, values.len()))
    };
    let (ok0, n0) = formula_ok(0, &|x| (3 * x[0] * x[2] + 2 * x[3] * x[4] + 2) % 6)?;
    checks.push(check(
        "f|x2=0 = 3x1x3 + 2x4x5 + 2 on its support",
        ok0,
        format!("{n0} support points"),
    ));
    let (ok1, n1) = formula_ok(1, &|x| {
        (3 * x[0] * x[2] + 2 * x[3] * x[4] + 2 * x[0] + 4 * x[2] + x[3] + x[4] + 3) % 6
    })?;
    checks.push(check(
        "f|x2=1 = 3x1x3 + 2x4x5 + 2x1 + 4x3 + x4 + x5 + 3 on its support",
        ok1,
        format!("{n1} support points"),
    ));

    let expected: Vec<Option<u32>> = RESTRICTED_X2_0_PAIRS
        .iter()
        .flat_map(|&[a, b]| [Some(a), Some(b), None, None])
        .collect();
    let restricted = psi_restricted(&f, &restrict(0)?);
    checks.push(check(
        "psi(f|x2=0) equals the printed zero-padded sequence",
        restricted.entries() == expected.as_slice(),
        first_mismatch(restricted.entries(), &expected),
    ));

    let set = ccc_core::construct::build(&spec).map_err(|e| CliError::core("build", e))?;
    let exps = |k: usize| -> Vec<Vec<u32>> {
        set.code(k)
            .iter()
            .map(|s| s.entries().iter().map(|e| e.unwrap_or(u32::MAX)).collect())
            .collect()
    };
    let mut listed_ok = true;
    for (k, t) in [(1usize, [1, 0, 0]), (11, [1, 1, 2])] {
        let mut built = exps(k);
        let mut listed = listed_code(t);
        built.sort();
        listed.sort();
        listed_ok &= built == listed;
    }
    checks.push(check(
        "codes 1 and 11 hold the listed sequences",
        listed_ok,
        "compared as sets of sequences",
    ));

    let report = verify_ccc(&set, &VerifyOptions::default());
    let shape_ok = set.num_codes() == 12 && set.seqs_per_code() == 12 && set.length() == 72;
    checks.push(check(
        "(12, 72) set verifies exactly with peak 864",
        report.is_ccc && shape_ok && report.peak == 864,
        format!(
            "K = {}, M = {}, L = {}, peak = {}, violations = {}",
            set.num_codes(),
            set.seqs_per_code(),
            set.length(),
            report.peak,
            report.violation_count
        ),
    ));

    let auto = correlation_profile(set.code(1), set.code(1)).map_err(|e| CliError::core("profile", e))?;
    let cross = correlation_profile(set.code(1), set.code(11)).map_err(|e| CliError::core("profile", e))?;
    let auto_ok = auto.entries.iter().all(|e| {
        if e.tau == 0 {
            e.value.equals_integer(864)
        } else {
            e.is_zero
        }
    });
    let cross_ok = cross.entries.iter().all(|e| e.is_zero);
    checks.push(check(
        "AACF of code 1 is 864 at tau = 0 and 0 elsewhere; ACCF of codes 1, 11 vanishes",
        auto_ok && cross_ok && auto.entries.len() == 143,
        format!("{} shifts per profile", auto.entries.len()),
    ));

    Ok(Reproduce72 {
        checks,
        set,
        elapsed: start.elapsed(),
    })
}
