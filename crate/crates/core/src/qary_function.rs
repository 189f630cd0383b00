//! q-ary functions on a mixed-radix domain.
//!
//! Functions are stored as evaluation tables indexed by the integer form of a
//! domain point. Two structured sources exist besides raw tables:
//!
//! * [`GeneralizedQuadraticSpec`]: the chain-quadratic family whose restrictions
//!   to `x_J = c` have the shape
//!   `sum_i [ (q/p_i) sum_j f_ij(x_pi(j)) f'_ij(x_pi(j+1)) + sum_j g_ij(x_pi(j)) ]
//!    + sum_i lambda_i f_i(x_last(i)) h_i(x_first(i+1)) + offset(c)`.
//! * [`MonomialForm`]: a `Z_q`-linear combination of monomials `x^e`.
//!
//! Univariate components are explicit length-`q` tables ([`FuncTable`]), so any
//! map `Z_q -> Z_q` can be plugged in.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result, Side};
use crate::mixed_radix::{DomainPoint, DomainSpec};

/// A map `Z_q -> Z_q` stored as `values[u]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuncTable {
    modulus: u32,
    values: Vec<u32>,
}

impl FuncTable {
    pub fn new(modulus: u32, values: Vec<u32>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidSpec("table modulus must be positive".into()));
        }
        if values.len() != modulus as usize {
            return Err(Error::LengthMismatch {
                expected: modulus as usize,
                found: values.len(),
            });
        }
        if let Some(&value) = values.iter().find(|&&v| v >= modulus) {
            return Err(Error::ValueOutOfRange { value, modulus });
        }
        Ok(FuncTable { modulus, values })
    }

    pub fn from_fn(modulus: u32, f: impl Fn(u32) -> u32) -> Self {
        FuncTable {
            modulus,
            values: (0..modulus).map(|u| f(u) % modulus).collect(),
        }
    }

    pub fn identity(modulus: u32) -> Self {
        Self::from_fn(modulus, |u| u)
    }

    pub fn constant(modulus: u32, value: u32) -> Self {
        Self::from_fn(modulus, |_| value)
    }

    pub fn zero(modulus: u32) -> Self {
        Self::constant(modulus, 0)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, u: u32) -> u32 {
        self.values[u as usize]
    }

    /// Same map with every value multiplied by `factor` (mod q).
    pub fn scaled(&self, factor: u32) -> Self {
        let q = self.modulus as u64;
        FuncTable {
            modulus: self.modulus,
            values: self
                .values
                .iter()
                .map(|&v| ((v as u64 * factor as u64) % q) as u32)
                .collect(),
        }
    }

    /// The map `u -> t(u) mod p` on `Z_p`, for `p | q`.
    pub fn reduced(&self, p: u32) -> Result<Self> {
        check_divides(p, self.modulus)?;
        Ok(FuncTable {
            modulus: p,
            values: self.values[..p as usize].iter().map(|&v| v % p).collect(),
        })
    }

    pub fn is_permutation_mod(&self, p: u32) -> Result<bool> {
        is_permutation_mod(self, p)
    }
}

fn check_divides(p: u32, q: u32) -> Result<()> {
    if p == 0 || !q.is_multiple_of(p) {
        return Err(Error::NonDividingPrime {
            prime: p,
            modulus: q,
        });
    }
    Ok(())
}

/// True iff `u -> t(u) mod p` is a bijection of `{0, .., p-1}`.
pub fn is_permutation_mod(t: &FuncTable, p: u32) -> Result<bool> {
    check_divides(p, t.modulus)?;
    let mut seen = vec![false; p as usize];
    for u in 0..p {
        let r = (t.get(u) % p) as usize;
        if seen[r] {
            return Ok(false);
        }
        seen[r] = true;
    }
    Ok(true)
}

/// Variables `x_J` pinned to digits `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    positions: Vec<usize>,
    digits: Vec<u32>,
}

impl Restriction {
    pub fn new(domain: &DomainSpec, positions: Vec<usize>, digits: Vec<u32>) -> Result<Self> {
        if positions.len() != digits.len() {
            return Err(Error::LengthMismatch {
                expected: positions.len(),
                found: digits.len(),
            });
        }
        for (i, &pos) in positions.iter().enumerate() {
            if pos >= domain.num_vars() {
                return Err(Error::IndexOutOfRange {
                    index: pos,
                    bound: domain.num_vars(),
                });
            }
            if positions[..i].contains(&pos) {
                return Err(Error::InvalidSpec(format!(
                    "restricted position {pos} listed twice"
                )));
            }
            let radix = domain.radix_at(pos);
            if digits[i] >= radix {
                return Err(Error::DigitOutOfRange {
                    position: pos,
                    digit: digits[i],
                    radix,
                });
            }
        }
        Ok(Restriction { positions, digits })
    }

    /// The empty restriction; its support is the whole domain.
    pub fn none() -> Self {
        Restriction {
            positions: Vec::new(),
            digits: Vec::new(),
        }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn matches(&self, point: &[u32]) -> bool {
        self.positions
            .iter()
            .zip(&self.digits)
            .all(|(&pos, &c)| point[pos] == c)
    }

    /// Indices `x` whose points satisfy `x_J = c`, ascending.
    pub fn support(&self, domain: &DomainSpec) -> Vec<usize> {
        let m = domain.num_vars();
        let table = domain.digit_table();
        (0..domain.length())
            .filter(|&x| self.matches(&table[x * m..(x + 1) * m]))
            .collect()
    }
}

/// One factor pair `f(x_a) * f'(x_b)` of a quadratic chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLink {
    pub left: FuncTable,
    pub right: FuncTable,
}

impl ChainLink {
    pub fn new(left: FuncTable, right: FuncTable) -> Self {
        ChainLink { left, right }
    }

    pub fn identity(q: u32) -> Self {
        ChainLink::new(FuncTable::identity(q), FuncTable::identity(q))
    }

    pub fn side(&self, side: Side) -> &FuncTable {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

/// Per-block data shared by every restriction value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    /// `J_i` as flat variable positions inside the block, in restriction-digit order.
    pub restricted: Vec<usize>,
    /// `m_i - n_i - 1` links.
    pub chain: Vec<ChainLink>,
}

/// Cross-block term `lambda * left(last variable of block i) * right(first variable of block i+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    pub weight: u32,
    pub left: FuncTable,
    pub right: FuncTable,
}

/// Data that may vary with the restriction value `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    /// Per block, `pi_i^c` listing the unrestricted positions in chain order.
    pub order: Vec<Vec<usize>>,
    /// Per block, `g_{i,j}` applied to `x_{pi_i^c(j)}`.
    pub linear: Vec<Vec<FuncTable>>,
    /// Constant added on `N_c`; `None` means the default `sum c_i q^{n-i}`.
    pub offset: Option<u32>,
}

/// A chain-quadratic function described through its restrictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedQuadraticSpec {
    domain: DomainSpec,
    blocks: Vec<BlockForm>,
    couplings: Vec<Coupling>,
    branches: Vec<Branch>,
    restricted: Vec<usize>,
    restricted_radix: Vec<u32>,
    corrupted: bool,
}

impl GeneralizedQuadraticSpec {
    /// Validates the structure. `branches` holds either one shared branch or
    /// one branch per restriction value `c`, indexed by the integer form of `c`.
    pub fn new(
        domain: DomainSpec,
        blocks: Vec<BlockForm>,
        couplings: Vec<Coupling>,
        branches: Vec<Branch>,
    ) -> Result<Self> {
        let q = domain.modulus();
        let k = domain.num_blocks();
        if blocks.len() != k {
            return Err(Error::InvalidSpec(format!(
                "expected {k} block forms, found {}",
                blocks.len()
            )));
        }
        if couplings.len() + 1 != k {
            return Err(Error::InvalidSpec(format!(
                "expected {} couplings, found {}",
                k - 1,
                couplings.len()
            )));
        }
        let check_table = |t: &FuncTable, what: &dyn Fn() -> alloc::string::String| {
            if t.modulus() != q {
                Err(Error::InvalidSpec(format!(
                    "{}: table modulus {} differs from q = {q}",
                    what(),
                    t.modulus()
                )))
            } else {
                Ok(())
            }
        };

        let mut restricted = Vec::new();
        let mut restricted_radix = Vec::new();
        for (i, form) in blocks.iter().enumerate() {
            let range = domain.block_range(i);
            let m_i = range.len();
            let n_i = form.restricted.len();
            if n_i + 1 > m_i {
                return Err(Error::InvalidSpec(format!(
                    "block {i}: {n_i} restricted variables, at most {} allowed",
                    m_i - 1
                )));
            }
            for (a, &pos) in form.restricted.iter().enumerate() {
                if !range.contains(&pos) {
                    return Err(Error::InvalidSpec(format!(
                        "block {i}: restricted position {pos} lies outside {range:?}"
                    )));
                }
                if form.restricted[..a].contains(&pos) {
                    return Err(Error::InvalidSpec(format!(
                        "block {i}: restricted position {pos} repeated"
                    )));
                }
                restricted.push(pos);
                restricted_radix.push(domain.radix_at(pos));
            }
            if form.chain.len() != m_i - n_i - 1 {
                return Err(Error::InvalidSpec(format!(
                    "block {i}: expected {} chain links, found {}",
                    m_i - n_i - 1,
                    form.chain.len()
                )));
            }
            for (j, link) in form.chain.iter().enumerate() {
                check_table(&link.left, &|| format!("block {i} link {j} left"))?;
                check_table(&link.right, &|| format!("block {i} link {j} right"))?;
            }
        }
        for (i, c) in couplings.iter().enumerate() {
            if c.weight >= q {
                return Err(Error::ValueOutOfRange {
                    value: c.weight,
                    modulus: q,
                });
            }
            check_table(&c.left, &|| format!("coupling {i} left"))?;
            check_table(&c.right, &|| format!("coupling {i} right"))?;
        }

        let restriction_count: usize = restricted_radix.iter().map(|&p| p as usize).product();
        if branches.len() != 1 && branches.len() != restriction_count {
            return Err(Error::InvalidSpec(format!(
                "expected 1 or {restriction_count} branches, found {}",
                branches.len()
            )));
        }
        for (b, branch) in branches.iter().enumerate() {
            if branch.order.len() != k || branch.linear.len() != k {
                return Err(Error::InvalidSpec(format!(
                    "branch {b}: expected per-block order and linear lists for {k} blocks"
                )));
            }
            if let Some(off) = branch.offset {
                if off >= q {
                    return Err(Error::ValueOutOfRange {
                        value: off,
                        modulus: q,
                    });
                }
            }
            for (i, form) in blocks.iter().enumerate() {
                let range = domain.block_range(i);
                let free = range.len() - form.restricted.len();
                let order = &branch.order[i];
                if order.len() != free {
                    return Err(Error::InvalidSpec(format!(
                        "branch {b} block {i}: ordering has {} entries, expected {free}",
                        order.len()
                    )));
                }
                for (a, &pos) in order.iter().enumerate() {
                    if !range.contains(&pos)
                        || form.restricted.contains(&pos)
                        || order[..a].contains(&pos)
                    {
                        return Err(Error::InvalidSpec(format!(
                            "branch {b} block {i}: ordering {order:?} is not a bijection onto the unrestricted positions"
                        )));
                    }
                }
                if branch.linear[i].len() != free {
                    return Err(Error::InvalidSpec(format!(
                        "branch {b} block {i}: expected {free} linear tables, found {}",
                        branch.linear[i].len()
                    )));
                }
                for (j, g) in branch.linear[i].iter().enumerate() {
                    check_table(g, &|| format!("branch {b} block {i} linear {j}"))?;
                }
            }
        }

        Ok(GeneralizedQuadraticSpec {
            domain,
            blocks,
            couplings,
            branches,
            restricted,
            restricted_radix,
            corrupted: false,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn modulus(&self) -> u32 {
        self.domain.modulus()
    }

    pub fn blocks(&self) -> &[BlockForm] {
        &self.blocks
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// `n_i` per block.
    pub fn restricted_counts(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.restricted.len()).collect()
    }

    /// All restricted positions, block 1 first, each block in `J_i` order.
    pub fn restricted_positions(&self) -> &[usize] {
        &self.restricted
    }

    /// `L' = prod p_i^{n_i}`, the number of restriction values.
    pub fn restriction_count(&self) -> usize {
        self.restricted_radix.iter().map(|&p| p as usize).product()
    }

    /// Integer form of `x_J`, least-significant digit first.
    pub fn restriction_index(&self, point: &[u32]) -> usize {
        let mut index = 0usize;
        let mut weight = 1usize;
        for (&pos, &p) in self.restricted.iter().zip(&self.restricted_radix) {
            index += point[pos] as usize * weight;
            weight *= p as usize;
        }
        index
    }

    /// The restriction `x_J = c` for the integer `c`.
    pub fn restriction_for(&self, mut c: usize) -> Result<Restriction> {
        let count = self.restriction_count();
        if c >= count {
            return Err(Error::IndexOutOfRange {
                index: c,
                bound: count,
            });
        }
        let mut digits = Vec::with_capacity(self.restricted.len());
        for &p in &self.restricted_radix {
            digits.push((c % p as usize) as u32);
            c /= p as usize;
        }
        Restriction::new(&self.domain, self.restricted.clone(), digits)
    }

    pub fn branch(&self, c: usize) -> &Branch {
        if self.branches.len() == 1 {
            &self.branches[0]
        } else {
            &self.branches[c]
        }
    }

    pub fn is_corrupted(&self) -> bool {
        self.corrupted
    }

    pub(crate) fn mark_corrupted(&mut self) {
        self.corrupted = true;
    }

    pub(crate) fn blocks_mut(&mut self) -> &mut [BlockForm] {
        &mut self.blocks
    }

    /// Checks that every chain function permutes `Z_{p_i}` modulo `p_i`.
    pub fn check_permutations(&self) -> Result<()> {
        for (i, form) in self.blocks.iter().enumerate() {
            let p = self.domain.blocks()[i].radix;
            for (j, link) in form.chain.iter().enumerate() {
                for side in [Side::Left, Side::Right] {
                    if !is_permutation_mod(link.side(side), p)? {
                        return Err(Error::NotPermutation {
                            block: i,
                            link: j,
                            side,
                            radix: p,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn offset_for(&self, branch: &Branch, point: &[u32]) -> u64 {
        let q = self.modulus() as u64;
        match branch.offset {
            Some(off) => off as u64,
            None => self
                .restricted
                .iter()
                .fold(0u64, |acc, &pos| (acc * q + point[pos] as u64) % q),
        }
    }

    /// Value at a digit vector assumed to lie in the domain.
    pub fn eval_digits(&self, point: &[u32]) -> u32 {
        let q = self.modulus() as u64;
        let branch = self.branch(self.restriction_index(point));
        let mut acc = 0u64;
        for (i, form) in self.blocks.iter().enumerate() {
            let order = &branch.order[i];
            let mut quad = 0u64;
            for (j, link) in form.chain.iter().enumerate() {
                let a = link.left.get(point[order[j]]) as u64;
                let b = link.right.get(point[order[j + 1]]) as u64;
                quad = (quad + a * b) % q;
            }
            acc = (acc + self.domain.block_weight(i) as u64 * quad) % q;
            for (j, g) in branch.linear[i].iter().enumerate() {
                acc = (acc + g.get(point[order[j]]) as u64) % q;
            }
        }
        for (i, coupling) in self.couplings.iter().enumerate() {
            let last = *branch.order[i].last().expect("block has a free variable");
            let first = branch.order[i + 1][0];
            let a = coupling.left.get(point[last]) as u64;
            let b = coupling.right.get(point[first]) as u64;
            acc = (acc + coupling.weight as u64 * ((a * b) % q)) % q;
        }
        ((acc + self.offset_for(branch, point)) % q) as u32
    }
}

/// How `x^0` evaluates at `x = 0` in a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroPower {
    /// `0^0 = 1`: exponent-0 factors drop out. This reproduces the worked
    /// 72-point example and is the default.
    #[default]
    One,
    /// `0^0 = 0` applied literally to every factor, so `x^0` vanishes whenever
    /// any variable is zero. Kept to document that convention; it does not
    /// reproduce the worked example.
    Zero,
}

/// `sum_e c_e x^e` over a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialForm {
    domain: DomainSpec,
    terms: Vec<(DomainPoint, u32)>,
}

impl MonomialForm {
    pub fn new(domain: DomainSpec, terms: Vec<(DomainPoint, u32)>) -> Result<Self> {
        let q = domain.modulus();
        for (e, c) in &terms {
            domain.vec_to_int(e)?;
            if *c >= q {
                return Err(Error::ValueOutOfRange {
                    value: *c,
                    modulus: q,
                });
            }
        }
        Ok(MonomialForm { domain, terms })
    }

    /// Convenience constructor from `(coefficient, [(position, exponent), ...])`.
    pub fn from_sparse(domain: DomainSpec, terms: &[(u32, &[(usize, u32)])]) -> Result<Self> {
        let m = domain.num_vars();
        let mut out = Vec::with_capacity(terms.len());
        for &(coeff, factors) in terms {
            let mut e = vec![0u32; m];
            for &(pos, exp) in factors {
                if pos >= m {
                    return Err(Error::IndexOutOfRange {
                        index: pos,
                        bound: m,
                    });
                }
                e[pos] += exp;
            }
            out.push((DomainPoint::new(e), coeff % domain.modulus()));
        }
        Self::new(domain, out)
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn terms(&self) -> &[(DomainPoint, u32)] {
        &self.terms
    }

    pub fn eval_digits(&self, point: &[u32], convention: ZeroPower) -> u32 {
        let q = self.domain.modulus() as u64;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut mono = 1u64;
            for (&x, &k) in point.iter().zip(e.digits()) {
                let factor = if k == 0 {
                    match convention {
                        ZeroPower::One => 1,
                        ZeroPower::Zero => u64::from(x != 0),
                    }
                } else {
                    pow_mod(x as u64, k, q)
                };
                mono = mono * factor % q;
            }
            acc = (acc + *c as u64 * mono) % q;
        }
        acc as u32
    }
}

fn pow_mod(base: u64, exp: u32, q: u64) -> u64 {
    let mut r = 1 % q;
    for _ in 0..exp {
        r = r * base % q;
    }
    r
}

/// Exponent vectors of Hamming weight at most `r`, in index order.
pub fn monomials_upto(domain: &DomainSpec, r: usize) -> Vec<DomainPoint> {
    domain.points().filter(|e| e.weight() <= r).collect()
}

/// Largest weight among exponents with a nonzero coefficient; 0 for the zero form.
pub fn hamming_degree(form: &MonomialForm) -> usize {
    form.terms
        .iter()
        .filter(|(_, c)| *c != 0)
        .map(|(e, _)| e.weight())
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Table,
    Quadratic(Box<GeneralizedQuadraticSpec>),
    Monomial(MonomialForm),
}

/// A function `V_L -> Z_q` as an evaluation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QaryFunction {
    domain: DomainSpec,
    table: Vec<u32>,
    provenance: Provenance,
}

impl QaryFunction {
    pub fn from_table(domain: DomainSpec, table: Vec<u32>) -> Result<Self> {
        if table.len() != domain.length() {
            return Err(Error::LengthMismatch {
                expected: domain.length(),
                found: table.len(),
            });
        }
        let q = domain.modulus();
        if let Some(&value) = table.iter().find(|&&v| v >= q) {
            return Err(Error::ValueOutOfRange { value, modulus: q });
        }
        Ok(QaryFunction {
            domain,
            table,
            provenance: Provenance::Table,
        })
    }

    pub fn zero(domain: DomainSpec) -> Self {
        QaryFunction {
            table: vec![0; domain.length()],
            domain,
            provenance: Provenance::Table,
        }
    }

    pub fn from_spec(spec: &GeneralizedQuadraticSpec) -> Self {
        let domain = spec.domain().clone();
        let m = domain.num_vars();
        let digits = domain.digit_table();
        let table = (0..domain.length())
            .map(|x| spec.eval_digits(&digits[x * m..(x + 1) * m]))
            .collect();
        QaryFunction {
            domain,
            table,
            provenance: Provenance::Quadratic(Box::new(spec.clone())),
        }
    }

    pub fn from_monomials(form: &MonomialForm, convention: ZeroPower) -> Self {
        let domain = form.domain().clone();
        let m = domain.num_vars();
        let digits = domain.digit_table();
        let table = (0..domain.length())
            .map(|x| form.eval_digits(&digits[x * m..(x + 1) * m], convention))
            .collect();
        QaryFunction {
            domain,
            table,
            provenance: Provenance::Monomial(form.clone()),
        }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn modulus(&self) -> u32 {
        self.domain.modulus()
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn eval(&self, x: usize) -> Result<u32> {
        self.table.get(x).copied().ok_or(Error::IndexOutOfRange {
            index: x,
            bound: self.table.len(),
        })
    }

    pub fn eval_point(&self, point: &DomainPoint) -> Result<u32> {
        let x = self.domain.vec_to_int(point)?;
        Ok(self.table[x])
    }

    pub fn restrict(&self, restriction: Restriction) -> RestrictedView<'_> {
        RestrictedView {
            function: self,
            restriction,
        }
    }
}

/// `f|_{x_J = c}`, defined only on `N_c`.
#[derive(Debug, Clone)]
pub struct RestrictedView<'a> {
    function: &'a QaryFunction,
    restriction: Restriction,
}

impl RestrictedView<'_> {
    pub fn restriction(&self) -> &Restriction {
        &self.restriction
    }

    pub fn function(&self) -> &QaryFunction {
        self.function
    }

    pub fn support(&self) -> Vec<usize> {
        self.restriction.support(self.function.domain())
    }

    pub fn eval(&self, x: usize) -> Result<u32> {
        let point = self.function.domain().int_to_vec(x)?;
        if !self.restriction.matches(point.digits()) {
            return Err(Error::OffSupport { index: x });
        }
        Ok(self.function.table[x])
    }

    /// `(x, f_x)` for every `x` in the support.
    pub fn values(&self) -> Vec<(usize, u32)> {
        self.support()
            .into_iter()
            .map(|x| (x, self.function.table[x]))
            .collect()
    }
}
