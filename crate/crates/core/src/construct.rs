//! Code-set construction.
//!
//! Every construction is a special case of one builder. Given a chain-quadratic
//! spec `f` with restricted sets `J_i` and orders `pi_i^c`, code `t` holds the
//! `K` functions
//!
//! ```text
//! f + sum_i (q/p_i) [ sum_l (d_{i,l} + t_{i,l}) x_{J_i[l]}
//!                     + d_{i,n_i+1} x_{pi_i^c(1)} + t_{i,n_i+1} x_{pi_i^c(m_i - n_i)} ]
//! ```
//!
//! where `K = prod p_i^{n_i+1}`. Code and sequence indices are both mixed-radix
//! over the digit list `(t_{1,1}, .., t_{1,n_1+1}, t_{2,1}, ..)` with the first
//! digit least significant, so block 1 varies fastest.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result, Side};
use crate::mixed_radix::DomainSpec;
use crate::qary_function::{
    is_permutation_mod, BlockForm, Branch, ChainLink, Coupling, FuncTable,
    GeneralizedQuadraticSpec, QaryFunction,
};
use crate::waveform::RootSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionKind {
    /// Single modulus, no restriction: `(q, q^m)`.
    Theorem1,
    /// Single modulus with `n` restricted variables: `(q^{n+1}, q^m)`.
    Corollary1,
    /// Two prime blocks, no restriction: `(p_1 p_2, L)`.
    Theorem2,
    /// Any number of blocks with restrictions.
    Corollary3,
    Kronecker,
    /// Assembled from raw sequences.
    Custom,
}

impl ConstructionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::Theorem1 => "theorem1",
            ConstructionKind::Corollary1 => "corollary1",
            ConstructionKind::Theorem2 => "theorem2",
            ConstructionKind::Corollary3 => "corollary3",
            ConstructionKind::Kronecker => "kronecker",
            ConstructionKind::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "theorem1" => ConstructionKind::Theorem1,
            "corollary1" => ConstructionKind::Corollary1,
            "theorem2" => ConstructionKind::Theorem2,
            "corollary3" => ConstructionKind::Corollary3,
            "kronecker" => ConstructionKind::Kronecker,
            "custom" => ConstructionKind::Custom,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMeta {
    pub kind: ConstructionKind,
    /// `(p_i, m_i)` of the source domain; empty for composed or custom sets.
    pub blocks: Vec<(u32, u32)>,
    /// `n_i` per block.
    pub restricted: Vec<usize>,
    pub corrupted: bool,
    /// How code and sequence indices map to digit vectors.
    pub index_order: String,
}

impl CodeMeta {
    pub fn custom() -> Self {
        CodeMeta {
            kind: ConstructionKind::Custom,
            blocks: Vec::new(),
            restricted: Vec::new(),
            corrupted: false,
            index_order: String::new(),
        }
    }
}

/// `K` codes of `M` sequences each, all of length `L` over `Z_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSet {
    modulus: u32,
    length: usize,
    codes: Vec<Vec<RootSequence>>,
    meta: CodeMeta,
}

impl CodeSet {
    pub fn new(modulus: u32, codes: Vec<Vec<RootSequence>>, meta: CodeMeta) -> Result<Self> {
        let first = codes
            .first()
            .and_then(|c| c.first())
            .ok_or_else(|| Error::Shape("a code set needs at least one sequence".into()))?;
        let length = first.len();
        let m = codes[0].len();
        for (k, code) in codes.iter().enumerate() {
            if code.len() != m {
                return Err(Error::Shape(format!(
                    "code {k} holds {} sequences, expected {m}",
                    code.len()
                )));
            }
            for s in code {
                if s.modulus() != modulus {
                    return Err(Error::ModulusMismatch {
                        expected: modulus,
                        found: s.modulus(),
                    });
                }
                if s.len() != length {
                    return Err(Error::LengthMismatch {
                        expected: length,
                        found: s.len(),
                    });
                }
            }
        }
        Ok(CodeSet {
            modulus,
            length,
            codes,
            meta,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `K`.
    pub fn num_codes(&self) -> usize {
        self.codes.len()
    }

    /// `M`.
    pub fn seqs_per_code(&self) -> usize {
        self.codes[0].len()
    }

    pub fn codes(&self) -> &[Vec<RootSequence>] {
        &self.codes
    }

    pub fn code(&self, k: usize) -> &[RootSequence] {
        &self.codes[k]
    }

    pub fn meta(&self) -> &CodeMeta {
        &self.meta
    }

    /// `M * L`, the in-phase auto-correlation of a code in a CCC.
    pub fn peak(&self) -> i64 {
        (self.seqs_per_code() * self.length) as i64
    }
}

/// Radices of the code-index digits `(t_{1,1}, .., t_{1,n_1+1}, t_{2,1}, ..)`.
pub fn code_digit_radices(domain: &DomainSpec, restricted: &[usize]) -> Vec<u32> {
    domain
        .blocks()
        .iter()
        .zip(restricted)
        .flat_map(|(b, &n)| core::iter::repeat_n(b.radix, n + 1))
        .collect()
}

/// Mixed-radix digits of `index`, least significant first.
pub fn index_to_digits(mut index: usize, radices: &[u32]) -> Result<Vec<u32>> {
    let bound: usize = radices.iter().map(|&p| p as usize).product();
    if index >= bound {
        return Err(Error::IndexOutOfRange { index, bound });
    }
    Ok(radices
        .iter()
        .map(|&p| {
            let d = (index % p as usize) as u32;
            index /= p as usize;
            d
        })
        .collect())
}

pub fn digits_to_index(digits: &[u32], radices: &[u32]) -> Result<usize> {
    if digits.len() != radices.len() {
        return Err(Error::LengthMismatch {
            expected: radices.len(),
            found: digits.len(),
        });
    }
    let mut index = 0usize;
    for (pos, (&d, &p)) in digits.iter().zip(radices).enumerate().rev() {
        if d >= p {
            return Err(Error::DigitOutOfRange {
                position: pos,
                digit: d,
                radix: p,
            });
        }
        index = index * p as usize + d as usize;
    }
    Ok(index)
}

/// Builds the code set of a validated spec. Specs produced by [`corrupt_spec`]
/// skip the permutation check.
pub fn build(spec: &GeneralizedQuadraticSpec) -> Result<CodeSet> {
    build_as(spec, ConstructionKind::Corollary3)
}

/// Same as [`build`]; the general multi-block construction.
pub fn build_corollary3(spec: &GeneralizedQuadraticSpec) -> Result<CodeSet> {
    build(spec)
}

pub fn build_as(spec: &GeneralizedQuadraticSpec, kind: ConstructionKind) -> Result<CodeSet> {
    if !spec.is_corrupted() {
        spec.check_permutations()?;
    }
    let domain = spec.domain();
    let q = domain.modulus() as u64;
    let len = domain.length();
    let m = domain.num_vars();
    let counts = spec.restricted_counts();
    let radices = code_digit_radices(domain, &counts);
    let digits_per_index = radices.len();
    let k_codes: usize = radices.iter().map(|&p| p as usize).product();

    // weight of every code digit
    let weights: Vec<u64> = counts
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| core::iter::repeat_n(domain.block_weight(i) as u64, n + 1))
        .collect();

    let f = QaryFunction::from_spec(spec);
    let table = domain.digit_table();
    // d-features (J digits then pi(1)) and t-features (J digits then pi(last)) per point
    let mut d_feat = vec![0u64; len * digits_per_index];
    let mut t_feat = vec![0u64; len * digits_per_index];
    for x in 0..len {
        let point = &table[x * m..(x + 1) * m];
        let branch = spec.branch(spec.restriction_index(point));
        let mut slot = x * digits_per_index;
        for (i, form) in spec.blocks().iter().enumerate() {
            for &pos in &form.restricted {
                d_feat[slot] = point[pos] as u64;
                t_feat[slot] = point[pos] as u64;
                slot += 1;
            }
            let order = &branch.order[i];
            d_feat[slot] = point[order[0]] as u64;
            t_feat[slot] = point[*order.last().expect("nonempty order")] as u64;
            slot += 1;
        }
    }

    let all_digits: Vec<Vec<u32>> = (0..k_codes)
        .map(|idx| index_to_digits(idx, &radices).expect("index in range"))
        .collect();

    let mut codes = Vec::with_capacity(k_codes);
    let mut base = vec![0u64; len];
    for t_digits in &all_digits {
        for (x, slot) in base.iter_mut().enumerate() {
            let feats = &t_feat[x * digits_per_index..(x + 1) * digits_per_index];
            let mut v = f.table()[x] as u64;
            for ((&w, &t), &z) in weights.iter().zip(t_digits).zip(feats) {
                v += w * t as u64 * z;
            }
            *slot = v % q;
        }
        let mut code = Vec::with_capacity(k_codes);
        for d_digits in &all_digits {
            let entries = (0..len)
                .map(|x| {
                    let feats = &d_feat[x * digits_per_index..(x + 1) * digits_per_index];
                    let mut v = base[x];
                    for ((&w, &d), &y) in weights.iter().zip(d_digits).zip(feats) {
                        v += w * d as u64 * y;
                    }
                    Some((v % q) as u32)
                })
                .collect();
            code.push(RootSequence::from_raw(q as u32, entries));
        }
        codes.push(code);
    }

    let meta = CodeMeta {
        kind,
        blocks: domain.blocks().iter().map(|b| (b.radix, b.len)).collect(),
        restricted: counts,
        corrupted: spec.is_corrupted(),
        index_order: "mixed-radix over (t_{1,1}..t_{1,n_1+1}, t_{2,1}, ..), first digit least significant; same layout for sequence index d".into(),
    };
    CodeSet::new(q as u32, codes, meta)
}

fn positions_permutation(pi: &[usize], range: core::ops::Range<usize>) -> Result<()> {
    let mut seen = vec![false; range.len()];
    if pi.len() != range.len() {
        return Err(Error::InvalidSpec(format!(
            "ordering {pi:?} must list every position of {range:?}"
        )));
    }
    for &p in pi {
        if !range.contains(&p) || core::mem::replace(&mut seen[p - range.start], true) {
            return Err(Error::InvalidSpec(format!(
                "ordering {pi:?} is not a permutation of {range:?}"
            )));
        }
    }
    Ok(())
}

/// Linear tables listed by variable position, rearranged into chain order.
fn linear_in_order(g_by_position: &[FuncTable], pi: &[usize], first: usize) -> Vec<FuncTable> {
    pi.iter().map(|&p| g_by_position[p - first].clone()).collect()
}

/// `f = sum_{i<m} h_i(x_pi(i)) h'_i(x_pi(i+1)) + sum_j g_j(x_j)` over `Z_q^m`.
/// `pi` lists 0-based positions; `g[j]` acts on `x_j`.
pub fn theorem1_spec(
    q: u32,
    m: u32,
    chain: Vec<ChainLink>,
    g: Vec<FuncTable>,
    pi: Vec<usize>,
) -> Result<GeneralizedQuadraticSpec> {
    let domain = DomainSpec::uniform(q, m)?;
    positions_permutation(&pi, 0..m as usize)?;
    if g.len() != m as usize {
        return Err(Error::LengthMismatch {
            expected: m as usize,
            found: g.len(),
        });
    }
    let linear = linear_in_order(&g, &pi, 0);
    GeneralizedQuadraticSpec::new(
        domain,
        vec![BlockForm {
            restricted: Vec::new(),
            chain,
        }],
        Vec::new(),
        vec![Branch {
            order: vec![pi],
            linear: vec![linear],
            offset: None,
        }],
    )
}

/// The `(q, q^m)` code set of [`theorem1_spec`].
pub fn build_theorem1(
    q: u32,
    m: u32,
    chain: Vec<ChainLink>,
    g: Vec<FuncTable>,
    pi: Vec<usize>,
) -> Result<CodeSet> {
    build_as(&theorem1_spec(q, m, chain, g, pi)?, ConstructionKind::Theorem1)
}

/// Single-block spec over `Z_q^m` with restricted positions `j`; `branches`
/// holds one branch or one per restriction value.
pub fn corollary1_spec(
    q: u32,
    m: u32,
    j: Vec<usize>,
    chain: Vec<ChainLink>,
    branches: Vec<Branch>,
) -> Result<GeneralizedQuadraticSpec> {
    GeneralizedQuadraticSpec::new(
        DomainSpec::uniform(q, m)?,
        vec![BlockForm {
            restricted: j,
            chain,
        }],
        Vec::new(),
        branches,
    )
}

/// The `(q^{n+1}, q^m)` code set of [`corollary1_spec`].
pub fn build_corollary1(
    q: u32,
    m: u32,
    j: Vec<usize>,
    chain: Vec<ChainLink>,
    branches: Vec<Branch>,
) -> Result<CodeSet> {
    build_as(&corollary1_spec(q, m, j, chain, branches)?, ConstructionKind::Corollary1)
}

/// Two prime blocks without restriction:
/// `f = (q/p_1) sum f_i f'_i + sum g_a(x_a) + (q/p_2) sum h_j h'_j + sum g'_b(x_b)
///      + gamma f_0(x_pi(m_1)) h_0(x_pi'(m_1+1))`.
#[derive(Debug, Clone)]
pub struct Theorem2Params {
    pub p1: u32,
    pub p2: u32,
    pub m1: u32,
    pub m2: u32,
    pub f: Vec<ChainLink>,
    pub h: Vec<ChainLink>,
    pub f0: FuncTable,
    pub h0: FuncTable,
    pub gamma: u32,
    /// Order of block 1, 0-based positions in `0..m1`.
    pub pi1: Vec<usize>,
    /// Order of block 2, 0-based positions in `m1..m1+m2`.
    pub pi2: Vec<usize>,
    /// `g_a` for positions `0..m1`.
    pub g1: Vec<FuncTable>,
    /// `g'_b` for positions `m1..m1+m2`.
    pub g2: Vec<FuncTable>,
}

pub fn theorem2_spec(params: Theorem2Params) -> Result<GeneralizedQuadraticSpec> {
    let domain = DomainSpec::new(&[(params.p1, params.m1), (params.p2, params.m2)])?;
    positions_permutation(&params.pi1, domain.block_range(0))?;
    positions_permutation(&params.pi2, domain.block_range(1))?;
    if params.g1.len() != params.m1 as usize || params.g2.len() != params.m2 as usize {
        return Err(Error::InvalidSpec(
            "one linear table per variable is required".into(),
        ));
    }
    let first2 = domain.block_offset(1);
    let linear = vec![
        linear_in_order(&params.g1, &params.pi1, 0),
        linear_in_order(&params.g2, &params.pi2, first2),
    ];
    GeneralizedQuadraticSpec::new(
        domain,
        vec![
            BlockForm {
                restricted: Vec::new(),
                chain: params.f,
            },
            BlockForm {
                restricted: Vec::new(),
                chain: params.h,
            },
        ],
        vec![Coupling {
            weight: params.gamma,
            left: params.f0,
            right: params.h0,
        }],
        vec![Branch {
            order: vec![params.pi1, params.pi2],
            linear,
            offset: None,
        }],
    )
}

/// The `(p_1 p_2, p_1^{m_1} p_2^{m_2})` code set of [`theorem2_spec`].
pub fn build_theorem2(params: Theorem2Params) -> Result<CodeSet> {
    build_as(&theorem2_spec(params)?, ConstructionKind::Theorem2)
}

/// Per-sequence Kronecker product. Code `u * K_D + v` pairs code `u` of `c`
/// with code `v` of `d`; sequence `a * M_D + b` is `c[u][a] (x) d[v][b]`,
/// whose entry `i * L_D + j` has exponent `e_C (Q/q_C) + e_D (Q/q_D)` over
/// `Q = lcm(q_C, q_D)`.
///
/// With block 1 varying fastest, the code of a multi-block spec with no
/// coupling equals `kron(block_k, .., kron(block_2, block_1))`.
pub fn kronecker_compose(c: &CodeSet, d: &CodeSet) -> Result<CodeSet> {
    let qc = c.modulus() as u64;
    let qd = d.modulus() as u64;
    let big_q = qc / gcd(qc, qd) * qd;
    let big_q32 = u32::try_from(big_q).map_err(|_| Error::Overflow)?;
    let (sc, sd) = (big_q / qc, big_q / qd);
    let ld = d.length();
    let mut codes = Vec::with_capacity(c.num_codes() * d.num_codes());
    for cu in c.codes() {
        for dv in d.codes() {
            let mut code = Vec::with_capacity(cu.len() * dv.len());
            for ca in cu {
                for db in dv {
                    let mut entries = Vec::with_capacity(ca.len() * ld);
                    for ei in ca.entries() {
                        for ej in db.entries() {
                            entries.push(match (ei, ej) {
                                (Some(a), Some(b)) => {
                                    Some(((*a as u64 * sc + *b as u64 * sd) % big_q) as u32)
                                }
                                _ => None,
                            });
                        }
                    }
                    code.push(RootSequence::from_raw(big_q32, entries));
                }
            }
            codes.push(code);
        }
    }
    let meta = CodeMeta {
        kind: ConstructionKind::Kronecker,
        blocks: Vec::new(),
        restricted: Vec::new(),
        corrupted: c.meta().corrupted || d.meta().corrupted,
        index_order: format!(
            "code u*{kd}+v, sequence a*{md}+b, entry i*{ld}+j (left factor slowest)",
            kd = d.num_codes(),
            md = d.seqs_per_code()
        ),
    };
    CodeSet::new(big_q32, codes, meta)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The `(1, 1)` code `{(+)}`, neutral for [`kronecker_compose`].
pub fn trivial_code() -> CodeSet {
    CodeSet::new(
        1,
        vec![vec![RootSequence::from_raw(1, vec![Some(0)])]],
        CodeMeta::custom(),
    )
    .expect("well-formed")
}

/// Replaces one chain function by a table that does not permute the block's
/// prime, and marks the result so builders skip the permutation check.
pub fn corrupt_spec(
    spec: &GeneralizedQuadraticSpec,
    block: usize,
    link: usize,
    side: Side,
    replacement: FuncTable,
) -> Result<GeneralizedQuadraticSpec> {
    let domain = spec.domain();
    if block >= domain.num_blocks() {
        return Err(Error::IndexOutOfRange {
            index: block,
            bound: domain.num_blocks(),
        });
    }
    let links = spec.blocks()[block].chain.len();
    if link >= links {
        return Err(Error::IndexOutOfRange {
            index: link,
            bound: links,
        });
    }
    if replacement.modulus() != domain.modulus() {
        return Err(Error::ModulusMismatch {
            expected: domain.modulus(),
            found: replacement.modulus(),
        });
    }
    if is_permutation_mod(&replacement, domain.blocks()[block].radix)? {
        return Err(Error::ReplacementIsPermutation { block, link, side });
    }
    let mut out = spec.clone();
    let target = &mut out.blocks_mut()[block].chain[link];
    match side {
        Side::Left => target.left = replacement,
        Side::Right => target.right = replacement,
    }
    out.mark_corrupted();
    Ok(out)
}

/// Arbitrary map `Z_q -> Z_q`.
pub fn random_table<R: Rng + ?Sized>(rng: &mut R, q: u32) -> FuncTable {
    FuncTable::new(q, (0..q).map(|_| rng.random_range(0..q)).collect()).expect("reduced")
}

/// Random table whose reduction mod `p` permutes `Z_p` on inputs `0..p`;
/// inputs `p..q` map anywhere.
pub fn random_permutation_table<R: Rng + ?Sized>(rng: &mut R, q: u32, p: u32) -> FuncTable {
    let mut sigma: Vec<u32> = (0..p).collect();
    sigma.shuffle(rng);
    let lifts = q / p;
    let values = (0..q)
        .map(|u| {
            if u < p {
                sigma[u as usize] + p * rng.random_range(0..lifts)
            } else {
                rng.random_range(0..q)
            }
        })
        .collect();
    FuncTable::new(q, values).expect("reduced")
}

/// Random table that fails the permutation test mod `p` (requires `p >= 2`).
pub fn random_non_permutation_table<R: Rng + ?Sized>(rng: &mut R, q: u32, p: u32) -> FuncTable {
    loop {
        let t = random_table(rng, q);
        if !is_permutation_mod(&t, p).expect("p divides q") {
            return t;
        }
    }
}

/// Shape of a random spec.
#[derive(Debug, Clone)]
pub struct RandomSpecShape {
    /// `n_i` per block.
    pub restricted: Vec<usize>,
    /// One branch per restriction value instead of a shared one.
    pub per_restriction: bool,
    /// Draw random coupling weights (otherwise 0).
    pub couplings: bool,
}

/// A random valid spec: permutation chain tables, arbitrary linear tables,
/// random `J_i`, orders, couplings and offsets.
pub fn random_spec<R: Rng + ?Sized>(
    rng: &mut R,
    domain: &DomainSpec,
    shape: &RandomSpecShape,
) -> Result<GeneralizedQuadraticSpec> {
    let q = domain.modulus();
    let k = domain.num_blocks();
    if shape.restricted.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: shape.restricted.len(),
        });
    }
    let mut blocks = Vec::with_capacity(k);
    for i in 0..k {
        let p = domain.blocks()[i].radix;
        let mut positions: Vec<usize> = domain.block_range(i).collect();
        positions.shuffle(rng);
        let n = shape.restricted[i];
        if n + 1 > positions.len() {
            return Err(Error::InvalidSpec(format!(
                "block {i}: cannot restrict {n} of {} variables",
                positions.len()
            )));
        }
        let restricted = positions[..n].to_vec();
        let links = positions.len() - n - 1;
        let chain = (0..links)
            .map(|_| {
                ChainLink::new(
                    random_permutation_table(rng, q, p),
                    random_permutation_table(rng, q, p),
                )
            })
            .collect();
        blocks.push(BlockForm { restricted, chain });
    }
    let couplings = (1..k)
        .map(|_| Coupling {
            weight: if shape.couplings {
                rng.random_range(0..q)
            } else {
                0
            },
            left: random_table(rng, q),
            right: random_table(rng, q),
        })
        .collect();
    let restriction_count: usize = domain
        .blocks()
        .iter()
        .zip(&shape.restricted)
        .map(|(b, &n)| (b.radix as usize).pow(n as u32))
        .product();
    let branch_count = if shape.per_restriction {
        restriction_count
    } else {
        1
    };
    let branches = (0..branch_count)
        .map(|_| {
            let mut order = Vec::with_capacity(k);
            let mut linear = Vec::with_capacity(k);
            for (i, form) in blocks.iter().enumerate() {
                let mut free: Vec<usize> = domain
                    .block_range(i)
                    .filter(|p| !form.restricted.contains(p))
                    .collect();
                free.shuffle(rng);
                linear.push(free.iter().map(|_| random_table(rng, q)).collect());
                order.push(free);
            }
            Branch {
                order,
                linear,
                offset: if rng.random_bool(0.5) {
                    Some(rng.random_range(0..q))
                } else {
                    None
                },
            }
        })
        .collect();
    GeneralizedQuadraticSpec::new(domain.clone(), blocks, couplings, branches)
}
