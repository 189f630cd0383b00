//! The 72-point, 6-ary worked example and the domain tables around it.

use ccc_core::construct::{build, code_digit_radices, index_to_digits};
use ccc_core::correlation::correlation_profile;
use ccc_core::qary_function::{monomials_upto, hamming_degree, MonomialForm, Restriction, ZeroPower};
use ccc_core::verify::{verify_ccc, VerifyOptions};
use ccc_core::waveform::{eta, psi, psi_restricted, RootSequence};
use ccc_core::*;

const ETA_72: [u32; 72] = [
    2, 2, 3, 5, 2, 5, 1, 0, 2, 2, 4, 0, 2, 5, 2, 1, 2, 2, 5, 1, 2, 5, 3, 2, 2, 2, 4, 0, 2, 5, 2,
    1, 4, 4, 1, 3, 4, 1, 5, 4, 0, 0, 4, 0, 0, 3, 2, 1, 2, 2, 5, 1, 2, 5, 3, 2, 0, 0, 4, 0, 0, 3,
    2, 1, 4, 4, 3, 5, 4, 1, 1, 0,
];

fn domain() -> DomainSpec {
    DomainSpec::new(&[(2, 3), (3, 2)]).unwrap()
}

/// f restricted to x2 = c is `3 x1 x3 + 2 x4 x5 + g_c + offset_c`.
fn spec() -> GeneralizedQuadraticSpec {
    let z = FuncTable::zero(6);
    let lin = |k: u32| FuncTable::from_fn(6, move |u| k * u);
    let order = vec![vec![0, 2], vec![3, 4]];
    GeneralizedQuadraticSpec::new(
        domain(),
        vec![
            BlockForm {
                restricted: vec![1],
                chain: vec![ChainLink::identity(6)],
            },
            BlockForm {
                restricted: vec![],
                chain: vec![ChainLink::identity(6)],
            },
        ],
        vec![Coupling {
            weight: 0,
            left: z.clone(),
            right: z.clone(),
        }],
        vec![
            Branch {
                order: order.clone(),
                linear: vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
                offset: Some(2),
            },
            Branch {
                order,
                linear: vec![vec![lin(2), lin(4)], vec![lin(1), lin(1)]],
                offset: Some(3),
            },
        ],
    )
    .unwrap()
}

/// `2x1x2 + 4x2x3 + x2x4 + x2x5 + 3x1x3 + 2x4x5 + x2 + 2`, 0-based positions.
fn monomial_form() -> MonomialForm {
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
    .unwrap()
}

/// Direct evaluation from digits, written out by hand.
fn f_direct(x: &[u32]) -> u32 {
    let [x1, x2, x3, x4, x5] = [x[0], x[1], x[2], x[3], x[4]];
    (2 * x1 * x2 + 4 * x2 * x3 + x2 * x4 + x2 * x5 + 3 * x1 * x3 + 2 * x4 * x5 + x2 + 2) % 6
}

#[test]
fn table_one_rows() {
    let d = domain();
    assert_eq!(d.int_to_vec(7).unwrap().digits(), &[1, 1, 1, 0, 0]);
    assert_eq!(d.int_to_vec(11).unwrap().digits(), &[1, 1, 0, 1, 0]);
    assert_eq!(d.int_to_vec(70).unwrap().digits(), &[0, 1, 1, 2, 2]);
}

#[test]
fn eta_matches_printed_sequence() {
    let f = QaryFunction::from_spec(&spec());
    assert_eq!(eta(&f), ETA_72.to_vec());
    assert_eq!(f.eval(2).unwrap(), 3);
    assert_eq!(f.eval(7).unwrap(), 0);
    let psi_f = psi(&f);
    assert!(psi_f.entries().iter().zip(ETA_72).all(|(e, v)| *e == Some(v)));
}

#[test]
fn spec_monomials_and_direct_formula_agree() {
    let d = domain();
    let from_spec = QaryFunction::from_spec(&spec());
    let from_monomials = QaryFunction::from_monomials(&monomial_form(), ZeroPower::One);
    for (x, p) in d.points().enumerate() {
        let expected = f_direct(p.digits());
        assert_eq!(from_spec.eval(x).unwrap(), expected, "x = {x}");
        assert_eq!(from_monomials.eval(x).unwrap(), expected, "x = {x}");
    }
    assert_eq!(hamming_degree(&monomial_form()), 2);
}

#[test]
fn literal_zero_power_breaks_the_constant_term() {
    let literal = QaryFunction::from_monomials(&monomial_form(), ZeroPower::Zero);
    assert_ne!(literal.table(), &ETA_72[..]);
    // at x = 0 every monomial, including the constant, vanishes
    assert_eq!(literal.eval(0).unwrap(), 0);
    assert_eq!(ETA_72[0], 2);
}

#[test]
fn restrictions_match_their_formulas() {
    let d = domain();
    let f = QaryFunction::from_spec(&spec());
    let zero = f.restrict(Restriction::new(&d, vec![1], vec![0]).unwrap());
    let one = f.restrict(Restriction::new(&d, vec![1], vec![1]).unwrap());
    assert_eq!(zero.support().len(), 36);
    assert_eq!(one.support().len(), 36);
    for (x, v) in zero.values() {
        let p = d.int_to_vec(x).unwrap();
        let [x1, _, x3, x4, x5] = <[u32; 5]>::try_from(p.digits()).unwrap();
        assert_eq!(v, (3 * x1 * x3 + 2 * x4 * x5 + 2) % 6);
    }
    for (x, v) in one.values() {
        let p = d.int_to_vec(x).unwrap();
        let [x1, _, x3, x4, x5] = <[u32; 5]>::try_from(p.digits()).unwrap();
        assert_eq!(v, (3 * x1 * x3 + 2 * x4 * x5 + 2 * x1 + 4 * x3 + x4 + x5 + 3) % 6);
    }
    assert!(zero.eval(2).is_err());
}

#[test]
fn restricted_sequence_has_double_null_gaps() {
    let d = domain();
    let f = QaryFunction::from_spec(&spec());
    let s = psi_restricted(&f, &Restriction::new(&d, vec![1], vec![0]).unwrap());
    assert_eq!(&s.entries()[..6], &[Some(2), Some(2), None, None, Some(2), Some(5)]);
    for (x, e) in s.entries().iter().enumerate() {
        assert_eq!(e.is_some(), x % 4 < 2);
    }
}

#[test]
fn twenty_seven_monomials_of_weight_at_most_two() {
    let d = domain();
    let ms = monomials_upto(&d, 2);
    assert_eq!(ms.len(), 27);
    // independent count: 1 + sum_j (p_j - 1) + sum_{j<l} (p_j - 1)(p_l - 1)
    let w: Vec<usize> = (0..5).map(|j| d.radix_at(j) as usize - 1).collect();
    let mut count = 1 + w.iter().sum::<usize>();
    for a in 0..5 {
        for b in a + 1..5 {
            count += w[a] * w[b];
        }
    }
    assert_eq!(count, 27);
    let mut sorted = ms.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 27);
}

fn exps(s: &RootSequence) -> Vec<u32> {
    s.entries().iter().map(|e| e.unwrap()).collect()
}

/// Sequence of `f + 3(d11 + t11) x2 + 3(d12 x1 + t12 x3) + 2(d21 x4 + t21 x5)`.
fn listed_sequence(d11: u32, d12: u32, d21: u32, t11: u32, t12: u32, t21: u32) -> Vec<u32> {
    domain()
        .points()
        .map(|p| {
            let x = p.digits();
            (f_direct(x) + 3 * (d11 + t11) * x[1] + 3 * (d12 * x[0] + t12 * x[2]) + 2 * (d21 * x[3] + t21 * x[4])) % 6
        })
        .collect()
}

#[test]
fn printed_codes_one_and_eleven() {
    let set = build(&spec()).unwrap();
    assert_eq!(set.num_codes(), 12);
    assert_eq!(set.seqs_per_code(), 12);
    // t = 4 t2 + t1, t1 = t11 + 2 t12
    assert_eq!(code_digit_radices(&domain(), &[1, 0]), vec![2, 2, 3]);
    assert_eq!(index_to_digits(1, &[2, 2, 3]).unwrap(), vec![1, 0, 0]);
    assert_eq!(index_to_digits(11, &[2, 2, 3]).unwrap(), vec![1, 1, 2]);
    for (t, (t11, t12, t21)) in [(1usize, (1, 0, 0)), (11, (1, 1, 2))] {
        // the listing enumerates d21 fastest, then d11, then d12
        let mut listed = Vec::new();
        for d12 in 0..2 {
            for d11 in 0..2 {
                for d21 in 0..3 {
                    listed.push(listed_sequence(d11, d12, d21, t11, t12, t21));
                }
            }
        }
        let mut built: Vec<Vec<u32>> = set.code(t).iter().map(exps).collect();
        // built order: d11 fastest, then d12, then d21
        for (idx, seq) in built.iter().enumerate() {
            let (d11, d12, d21) = (idx % 2, (idx / 2) % 2, idx / 4);
            assert_eq!(seq, &listed_sequence(d11 as u32, d12 as u32, d21 as u32, t11, t12, t21));
        }
        built.sort();
        listed.sort();
        assert_eq!(built, listed, "code {t}");
    }
}

#[test]
fn the_set_is_a_ccc_with_peak_864() {
    let set = build(&spec()).unwrap();
    let report = verify_ccc(&set, &VerifyOptions::default());
    assert!(report.is_ccc);
    assert_eq!(report.peak, 864);
    let auto = correlation_profile(set.code(1), set.code(1)).unwrap();
    for e in &auto.entries {
        if e.tau == 0 {
            assert!(e.value.equals_integer(864));
            assert!((e.magnitude - 864.0).abs() < 1e-9);
        } else {
            assert!(e.is_zero);
            assert!(e.magnitude < 1e-9);
        }
    }
    let cross = correlation_profile(set.code(1), set.code(11)).unwrap();
    assert!(cross.entries.iter().all(|e| e.is_zero && e.magnitude < 1e-9));
}
