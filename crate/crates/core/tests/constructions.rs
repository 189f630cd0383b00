use ccc_core::construct::*;
use ccc_core::correlation::code_accf;
use ccc_core::verify::*;
use ccc_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force correlation of two code rows in floating point.
fn naive_code_corr(c1: &[RootSequence], c2: &[RootSequence], tau: i64) -> (f64, f64) {
    let q = c1[0].modulus() as f64;
    let l = c1[0].len() as i64;
    let (mut re, mut im) = (0.0, 0.0);
    for (a, b) in c1.iter().zip(c2) {
        for t in 0..l {
            let s = t + tau;
            if s < 0 || s >= l {
                continue;
            }
            if let (Some(x), Some(y)) = (a.get(t as usize), b.get(s as usize)) {
                let ang = std::f64::consts::TAU * (x as f64 - y as f64) / q;
                re += ang.cos();
                im += ang.sin();
            }
        }
    }
    (re, im)
}

fn identity_theorem1(q: u32, m: u32) -> GeneralizedQuadraticSpec {
    theorem1_spec(
        q,
        m,
        (1..m).map(|_| ChainLink::identity(q)).collect(),
        vec![FuncTable::zero(q); m as usize],
        (0..m as usize).collect(),
    )
    .unwrap()
}

#[test]
fn theorem1_small_cases_match_brute_force() {
    for (q, m) in [(2, 2), (3, 2), (4, 2), (2, 3)] {
        let set = build_as(&identity_theorem1(q, m), ConstructionKind::Theorem1).unwrap();
        let peak = (q as f64).powi(m as i32 + 1);
        let l = set.length() as i64;
        for k1 in 0..set.num_codes() {
            for k2 in 0..set.num_codes() {
                for tau in -(l - 1)..l {
                    let (re, im) = naive_code_corr(set.code(k1), set.code(k2), tau);
                    let expected = if k1 == k2 && tau == 0 { peak } else { 0.0 };
                    assert!((re - expected).abs() < 1e-6 && im.abs() < 1e-6);
                }
            }
        }
        assert!(verify_ccc(&set, &VerifyOptions::default()).is_ccc);
    }
}

/// Code sequences straight from the defining sum, without the library builder.
fn oracle_sequence(spec: &GeneralizedQuadraticSpec, t: &[u32], d: &[u32]) -> Vec<u32> {
    let dom = spec.domain();
    let q = dom.modulus() as u64;
    let f = QaryFunction::from_spec(spec);
    dom.points()
        .enumerate()
        .map(|(x, p)| {
            let x_digits = p.digits();
            let branch = spec.branch(spec.restriction_index(x_digits));
            let mut v = f.table()[x] as u64;
            let mut k = 0;
            for (i, form) in spec.blocks().iter().enumerate() {
                let w = dom.block_weight(i) as u64;
                for &pos in &form.restricted {
                    v += w * (d[k] as u64 + t[k] as u64) * x_digits[pos] as u64;
                    k += 1;
                }
                let order = &branch.order[i];
                v += w * d[k] as u64 * x_digits[order[0]] as u64;
                v += w * t[k] as u64 * x_digits[*order.last().unwrap()] as u64;
                k += 1;
            }
            (v % q) as u32
        })
        .collect()
}

#[test]
fn builder_matches_defining_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (blocks, n) in [
        (vec![(2u32, 3u32), (3, 2)], vec![1usize, 0usize]),
        (vec![(2, 2), (3, 2)], vec![0, 1]),
        (vec![(3, 3)], vec![1]),
    ] {
        let dom = DomainSpec::new(&blocks).unwrap();
        let spec = random_spec(
            &mut rng,
            &dom,
            &RandomSpecShape {
                restricted: n.clone(),
                per_restriction: true,
                couplings: true,
            },
        )
        .unwrap();
        let set = build(&spec).unwrap();
        let radices = code_digit_radices(&dom, &n);
        for _ in 0..5 {
            let t = rng.random_range(0..set.num_codes());
            let d = rng.random_range(0..set.seqs_per_code());
            let td = index_to_digits(t, &radices).unwrap();
            let dd = index_to_digits(d, &radices).unwrap();
            let got: Vec<u32> = set.code(t)[d].entries().iter().map(|e| e.unwrap()).collect();
            assert_eq!(got, oracle_sequence(&spec, &td, &dd));
        }
    }
}

#[test]
fn code_index_digits_are_a_bijection() {
    let dom = DomainSpec::new(&[(2, 3), (3, 2), (5, 2)]).unwrap();
    let n = [2, 1, 0];
    let radices = code_digit_radices(&dom, &n);
    let k: usize = radices.iter().map(|&p| p as usize).product();
    assert_eq!(k, 8 * 9 * 5);
    let mut seen = std::collections::HashSet::new();
    for t in 0..k {
        let digits = index_to_digits(t, &radices).unwrap();
        // t = t_1 + t_2 p_1^{n_1+1} + t_3 p_1^{n_1+1} p_2^{n_2+1}
        let t1 = digits[0] + 2 * digits[1] + 4 * digits[2];
        let t2 = digits[3] + 3 * digits[4];
        let t3 = digits[5];
        assert_eq!(t as u32, t1 + 8 * t2 + 72 * t3);
        assert!(seen.insert(digits));
    }
}

#[test]
fn corollary1_q3_m3_n1() {
    let set = build_corollary1(
        3,
        3,
        vec![1],
        vec![ChainLink::identity(3)],
        vec![Branch {
            order: vec![vec![0, 2]],
            linear: vec![vec![FuncTable::zero(3); 2]],
            offset: None,
        }],
    )
    .unwrap();
    assert_eq!((set.num_codes(), set.length()), (9, 27));
    let report = verify_ccc(&set, &VerifyOptions::default());
    assert!(report.is_ccc);
    assert_eq!(report.peak, 243);
    assert!(code_accf(set.code(4), set.code(4), 0).unwrap().equals_integer(243));
}

#[test]
fn corollary1_binary_with_varying_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dom = DomainSpec::uniform(2, 3).unwrap();
    let spec = random_spec(
        &mut rng,
        &dom,
        &RandomSpecShape {
            restricted: vec![1],
            per_restriction: true,
            couplings: false,
        },
    )
    .unwrap();
    let set = build(&spec).unwrap();
    assert_eq!((set.num_codes(), set.length()), (4, 8));
    assert!(verify_ccc(&set, &VerifyOptions::default()).is_ccc);
}

#[test]
fn corollary1_without_restriction_is_theorem1() {
    let a = build_theorem1(
        3,
        3,
        vec![ChainLink::identity(3); 2],
        vec![FuncTable::identity(3), FuncTable::zero(3), FuncTable::constant(3, 2)],
        vec![2, 0, 1],
    )
    .unwrap();
    // linear tables listed in chain order: x3, x1, x2
    let b = build_corollary1(
        3,
        3,
        vec![],
        vec![ChainLink::identity(3); 2],
        vec![Branch {
            order: vec![vec![2, 0, 1]],
            linear: vec![vec![FuncTable::constant(3, 2), FuncTable::identity(3), FuncTable::zero(3)]],
            offset: None,
        }],
    )
    .unwrap();
    assert_eq!(a.codes(), b.codes());
}

fn theorem2_identity(m1: u32, m2: u32) -> Theorem2Params {
    Theorem2Params {
        p1: 2,
        p2: 3,
        m1,
        m2,
        f: (1..m1).map(|_| ChainLink::identity(6)).collect(),
        h: (1..m2).map(|_| ChainLink::identity(6)).collect(),
        f0: FuncTable::identity(6),
        h0: FuncTable::identity(6),
        gamma: 1,
        pi1: (0..m1 as usize).collect(),
        pi2: (m1 as usize..(m1 + m2) as usize).collect(),
        g1: vec![FuncTable::from_fn(6, |u| u * u); m1 as usize],
        g2: vec![FuncTable::identity(6); m2 as usize],
    }
}

#[test]
fn theorem2_six_by_thirty_six() {
    let set = build_theorem2(theorem2_identity(2, 2)).unwrap();
    assert_eq!((set.num_codes(), set.seqs_per_code(), set.length()), (6, 6, 36));
    let report = verify_ccc(&set, &VerifyOptions::default());
    assert!(report.is_ccc);
    assert_eq!(report.peak, 216);
}

#[test]
fn theorem2_with_single_variable_block() {
    let set = build_theorem2(theorem2_identity(1, 2)).unwrap();
    assert_eq!(set.length(), 18);
    assert!(verify_ccc(&set, &VerifyOptions::default()).is_ccc);
}

#[test]
fn theorem2_rejects_non_permutation_mod_p() {
    let mut params = theorem2_identity(2, 2);
    // u -> 2u is a bijection of Z_3 but collapses Z_2
    params.f[0].left = FuncTable::from_fn(6, |u| 2 * u);
    assert_eq!(
        build_theorem2(params).unwrap_err(),
        Error::NotPermutation {
            block: 0,
            link: 0,
            side: Side::Left,
            radix: 2
        }
    );
}

#[test]
fn kronecker_of_small_ccc_is_ccc() {
    let a = build_theorem1(2, 2, vec![ChainLink::identity(2)], vec![FuncTable::zero(2); 2], vec![0, 1]).unwrap();
    let b = build_theorem1(3, 2, vec![ChainLink::identity(3)], vec![FuncTable::zero(3); 2], vec![1, 0]).unwrap();
    let ab = kronecker_compose(&a, &b).unwrap();
    assert_eq!((ab.num_codes(), ab.length(), ab.modulus()), (6, 36, 6));
    let report = verify_ccc(&ab, &VerifyOptions::default());
    assert!(report.is_ccc);
    assert_eq!(report.peak, 216);
}

/// With no coupling, the multi-block code equals the Kronecker product of the
/// per-block codes with block 1 as the last (fastest) factor.
#[test]
fn uncoupled_build_is_kronecker_of_blocks_block_one_last() {
    let z6 = FuncTable::zero(6);
    let whole = build(
        &GeneralizedQuadraticSpec::new(
            DomainSpec::new(&[(2, 3), (3, 2)]).unwrap(),
            vec![
                BlockForm {
                    restricted: vec![1],
                    chain: vec![ChainLink::identity(6)],
                },
                BlockForm {
                    restricted: vec![],
                    chain: vec![ChainLink::new(FuncTable::from_fn(6, |u| 2 * u + 1), FuncTable::identity(6))],
                },
            ],
            vec![Coupling {
                weight: 0,
                left: z6.clone(),
                right: z6.clone(),
            }],
            vec![Branch {
                order: vec![vec![2, 0], vec![4, 3]],
                linear: vec![
                    vec![FuncTable::from_fn(6, |u| 3 * u), z6.clone()],
                    vec![FuncTable::from_fn(6, |u| 2 * u * u), FuncTable::from_fn(6, |u| 4 * u)],
                ],
                offset: Some(0),
            }],
        )
        .unwrap(),
    )
    .unwrap();
    let block1 = build_corollary1(
        2,
        3,
        vec![1],
        vec![ChainLink::identity(2)],
        vec![Branch {
            order: vec![vec![2, 0]],
            linear: vec![vec![FuncTable::identity(2), FuncTable::zero(2)]],
            offset: Some(0),
        }],
    )
    .unwrap();
    let block2 = build_corollary1(
        3,
        2,
        vec![],
        vec![ChainLink::new(FuncTable::from_fn(3, |u| 2 * u + 1), FuncTable::identity(3))],
        vec![Branch {
            order: vec![vec![1, 0]],
            linear: vec![vec![FuncTable::from_fn(3, |u| u * u), FuncTable::from_fn(3, |u| 2 * u)]],
            offset: Some(0),
        }],
    )
    .unwrap();
    assert_eq!(kronecker_compose(&block2, &block1).unwrap().codes(), whole.codes());
    assert_ne!(kronecker_compose(&block1, &block2).unwrap().codes(), whole.codes());
}

type Shape = (&'static [(u32, u32)], &'static [usize]);

#[test]
fn randomized_sufficiency_across_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shapes: [Shape; 6] = [
        (&[(2, 3), (3, 2)], &[1, 0]),
        (&[(2, 2), (3, 2)], &[0, 1]),
        (&[(2, 3), (3, 2)], &[0, 0]),
        (&[(3, 3)], &[1]),
        (&[(4, 3)], &[1]),
        (&[(2, 4)], &[2]),
    ];
    for (blocks, n) in shapes {
        let dom = DomainSpec::new(blocks).unwrap();
        for round in 0..6 {
            let spec = random_spec(
                &mut rng,
                &dom,
                &RandomSpecShape {
                    restricted: n.to_vec(),
                    per_restriction: round % 2 == 0,
                    couplings: true,
                },
            )
            .unwrap();
            let report = verify_ccc(&build(&spec).unwrap(), &VerifyOptions::default());
            assert!(report.is_ccc, "{blocks:?} n={n:?} round {round}");
        }
    }
}

#[test]
fn constant_corruption_shows_at_witness_shift() {
    // replacing the chain link m - i (1-based) gives a nonzero value at q^m - q^(m-i)
    for (q, m, i) in [(3u32, 2u32, 1u32), (4, 3, 1), (4, 3, 2)] {
        let link = (m - i - 1) as usize;
        let bad = corrupt_spec(&identity_theorem1(q, m), 0, link, Side::Left, FuncTable::zero(q)).unwrap();
        let set = build(&bad).unwrap();
        let tau = (q.pow(m) - q.pow(m - i)) as i64;
        let hit = (0..set.num_codes()).any(|k1| {
            (0..set.num_codes()).any(|k2| !code_accf(set.code(k1), set.code(k2), tau).unwrap().is_zero_exact())
        });
        assert!(hit, "q={q} m={m} i={i}");
        assert!(!verify_ccc(&set, &VerifyOptions::default()).is_ccc);
        let probe = necessity_probe(&bad).unwrap();
        assert!(probe.at_witness_shift);
        assert!(probe.evidence.is_some());
    }
}

#[test]
fn probe_on_theorem2_finds_block_one_shift() {
    let spec = theorem2_spec(Theorem2Params {
        g1: vec![FuncTable::zero(6); 2],
        g2: vec![FuncTable::zero(6); 2],
        gamma: 0,
        ..theorem2_identity(2, 2)
    })
    .unwrap();
    let bad = corrupt_spec(&spec, 0, 0, Side::Left, FuncTable::zero(6)).unwrap();
    let probe = necessity_probe(&bad).unwrap();
    let evidence = probe.evidence.unwrap();
    assert!(probe.at_witness_shift);
    assert_eq!(evidence.tau.abs(), 2);
}

#[test]
fn randomized_necessity() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for q in 2..=6u32 {
        for m in 2..=3u32 {
            let dom = DomainSpec::uniform(q, m).unwrap();
            for _ in 0..5 {
                let spec = random_spec(
                    &mut rng,
                    &dom,
                    &RandomSpecShape {
                        restricted: vec![0],
                        per_restriction: false,
                        couplings: false,
                    },
                )
                .unwrap();
                let link = rng.random_range(0..(m - 1) as usize);
                let side = if rng.random_bool(0.5) { Side::Left } else { Side::Right };
                let table = random_non_permutation_table(&mut rng, q, q);
                let bad = corrupt_spec(&spec, 0, link, side, table).unwrap();
                let set = build(&bad).unwrap();
                assert!(!verify_ccc(&set, &VerifyOptions::default()).is_ccc);
                assert!(necessity_probe(&bad).unwrap().evidence.is_some());
            }
        }
    }
}

#[test]
fn corrupted_set_reports_capped_violations() {
    let bad = corrupt_spec(&identity_theorem1(4, 3), 0, 0, Side::Right, FuncTable::constant(4, 1)).unwrap();
    let set = build(&bad).unwrap();
    let capped = verify_ccc(&set, &VerifyOptions::default());
    assert!(!capped.is_ccc);
    assert_eq!(capped.violations.len(), 16.min(capped.violation_count));
    assert!(capped.violations.iter().any(|v| v.tau == 60) || capped.violation_count > 16);
    let full = verify_ccc(&set, &VerifyOptions { max_violations: None, ..Default::default() });
    assert_eq!(full.violations.len(), full.violation_count);
    assert!(full.violations.iter().any(|v| v.tau == 60));
    let mut sorted = full.violations.clone();
    sorted.sort_by_key(|v| (v.k1, v.k2, v.tau));
    assert_eq!(sorted, full.violations);
}

#[test]
fn three_block_sampled_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dom = DomainSpec::new(&[(2, 2), (3, 2), (5, 1)]).unwrap();
    let spec = random_spec(
        &mut rng,
        &dom,
        &RandomSpecShape {
            restricted: vec![0, 0, 0],
            per_restriction: false,
            couplings: true,
        },
    )
    .unwrap();
    let set = build(&spec).unwrap();
    assert_eq!((set.num_codes(), set.length(), set.modulus()), (30, 180, 30));
    let cells = sample_cells(&mut rng, &set, 100);
    assert!(verify_cells(&set, &cells).unwrap().iter().all(Option::is_none));
}

#[test]
fn float_mode_agrees_with_exact_on_builds() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dom = DomainSpec::new(&[(2, 2), (3, 2)]).unwrap();
    for _ in 0..3 {
        let spec = random_spec(
            &mut rng,
            &dom,
            &RandomSpecShape {
                restricted: vec![1, 0],
                per_restriction: true,
                couplings: true,
            },
        )
        .unwrap();
        let set = build(&spec).unwrap();
        let exact = verify_ccc(&set, &VerifyOptions::default());
        let float = verify_ccc(&set, &VerifyOptions::float());
        assert_eq!(exact.is_ccc, float.is_ccc);
        assert!(gram_identity_holds(&set));
    }
}

#[test]
fn non_square_set_is_not_a_ccc() {
    let a = build_theorem1(2, 2, vec![ChainLink::identity(2)], vec![FuncTable::zero(2); 2], vec![0, 1]).unwrap();
    let one = CodeSet::new(2, vec![a.code(0).to_vec()], CodeMeta::custom()).unwrap();
    let report = verify_ccc(&one, &VerifyOptions::default());
    assert!(!report.square);
    assert!(!report.is_ccc);
    assert_eq!(report.violation_count, 0);
}
