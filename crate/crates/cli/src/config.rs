//! Build configurations.
//!
//! A config names a construction and fills in as much of the function as the
//! user cares about. Every slot left out (a `J` set, a chain table, a linear
//! table, an ordering, a coupling) is drawn from a ChaCha8 stream seeded by
//! `seed`, in a fixed order, so a config plus seed always yields the same code
//! set.
//!
//! ```json
//! {
//!   "kind": "corollary3",
//!   "domain": {"blocks": [{"p": 2, "m": 3}, {"p": 3, "m": 2}]},
//!   "restricted": [[1], []],
//!   "chain": [[{"left": [0,1,2,3,4,5], "right": null}], [null]],
//!   "couplings": [{"weight": 0, "left": [0,0,0,0,0,0], "right": [0,0,0,0,0,0]}],
//!   "branches": [{"order": [[0, 2], [3, 4]], "linear": null, "offset": 2}],
//!   "seed": 7
//! }
//! ```
//!
//! Positions are 0-based across the whole digit vector. `linear` lists, per
//! block, one table per unrestricted variable in the branch's order.

use std::path::{Path, PathBuf};

use ccc_core::construct::{
    build_as, corrupt_spec, kronecker_compose, random_permutation_table, random_table,
    trivial_code,
};
use ccc_core::{
    BlockForm, Branch, ChainLink, CodeSet, ConstructionKind, Coupling, DomainSpec, FuncTable,
    GeneralizedQuadraticSpec, Side,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codeset_file;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Theorem1,
    Corollary1,
    Theorem2,
    Corollary3,
    Kronecker,
}

impl Kind {
    pub fn construction(self) -> ConstructionKind {
        match self {
            Kind::Theorem1 => ConstructionKind::Theorem1,
            Kind::Corollary1 => ConstructionKind::Corollary1,
            Kind::Theorem2 => ConstructionKind::Theorem2,
            Kind::Corollary3 => ConstructionKind::Corollary3,
            Kind::Kronecker => ConstructionKind::Kronecker,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockConfig {
    pub p: u32,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub blocks: Vec<BlockConfig>,
}

impl DomainConfig {
    pub fn from_domain(d: &DomainSpec) -> Self {
        DomainConfig {
            blocks: d
                .blocks()
                .iter()
                .map(|b| BlockConfig { p: b.radix, m: b.len })
                .collect(),
        }
    }

    pub fn to_domain(&self) -> CliResult<DomainSpec> {
        let pairs: Vec<(u32, u32)> = self.blocks.iter().map(|b| (b.p, b.m)).collect();
        DomainSpec::new(&pairs).map_err(|e| CliError::core("domain", e))
    }
}

/// Table slot; `None` is filled at random.
pub type TableSlot = Option<Vec<u32>>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkConfig {
    #[serde(default)]
    pub left: TableSlot,
    #[serde(default)]
    pub right: TableSlot,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    /// The lambda coefficient.
    #[serde(default)]
    pub weight: Option<u32>,
    #[serde(default)]
    pub left: TableSlot,
    #[serde(default)]
    pub right: TableSlot,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchConfig {
    #[serde(default)]
    pub order: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub linear: Option<Vec<Vec<TableSlot>>>,
    /// Constant added on this branch; omitted means the Horner value of `x_J`.
    #[serde(default)]
    pub offset: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideConfig {
    Left,
    Right,
}

impl From<SideConfig> for Side {
    fn from(s: SideConfig) -> Side {
        match s {
            SideConfig::Left => Side::Left,
            SideConfig::Right => Side::Right,
        }
    }
}

/// Replaces one chain table with a non-permuting one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorruptConfig {
    pub block: usize,
    pub link: usize,
    pub side: SideConfig,
    pub table: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorConfig {
    /// A code-set file, relative to the config's directory.
    File { path: PathBuf },
    Inline(Box<BuildConfig>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    pub kind: Kind,
    #[serde(default)]
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub seed: u64,
    /// `n_i` per block; ignored when `restricted` is given.
    #[serde(default)]
    pub n: Option<Vec<usize>>,
    /// `J_i` per block.
    #[serde(default)]
    pub restricted: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub chain: Option<Vec<Vec<Option<LinkConfig>>>>,
    #[serde(default)]
    pub couplings: Option<Vec<Option<CouplingConfig>>>,
    #[serde(default)]
    pub branches: Option<Vec<BranchConfig>>,
    #[serde(default)]
    pub corrupt: Option<CorruptConfig>,
    /// Kronecker operands, composed left to right.
    #[serde(default)]
    pub factors: Option<Vec<FactorConfig>>,
}

impl BuildConfig {
    pub fn new(kind: Kind, domain: &DomainSpec) -> Self {
        BuildConfig {
            kind,
            domain: Some(DomainConfig::from_domain(domain)),
            seed: 0,
            n: None,
            restricted: None,
            chain: None,
            couplings: None,
            branches: None,
            corrupt: None,
            factors: None,
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|source| CliError::Json {
            context: "config".into(),
            source,
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Checks the fields against the arity of the chosen construction.
    pub fn check_arity(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(format!("{}: {msg}", self.kind_name())));
        if self.kind == Kind::Kronecker {
            let extra = self.domain.is_some()
                || self.n.is_some()
                || self.restricted.is_some()
                || self.chain.is_some()
                || self.couplings.is_some()
                || self.branches.is_some()
                || self.corrupt.is_some();
            if extra {
                return bad("only `factors` (and `seed`) are allowed".into());
            }
            return match &self.factors {
                Some(f) if !f.is_empty() => Ok(()),
                _ => bad("`factors` must list at least one operand".into()),
            };
        }
        if self.factors.is_some() {
            return bad("`factors` is only valid for kronecker".into());
        }
        let Some(domain) = &self.domain else {
            return bad("`domain` is required".into());
        };
        let k = domain.blocks.len();
        let counts = self.restricted_counts(k);
        match self.kind {
            Kind::Theorem1 | Kind::Corollary1 if k != 1 => {
                return bad(format!("needs exactly one block, found {k}"));
            }
            Kind::Theorem2 if k != 2 => return bad(format!("needs exactly two blocks, found {k}")),
            _ => {}
        }
        if matches!(self.kind, Kind::Theorem1 | Kind::Theorem2) && counts.iter().any(|&n| n != 0) {
            return bad("restricted variables are not allowed".into());
        }
        if matches!(self.kind, Kind::Theorem1 | Kind::Theorem2)
            && self.branches.as_ref().is_some_and(|b| b.len() > 1)
        {
            return bad("a single branch is allowed".into());
        }
        if let Some(r) = &self.restricted {
            if r.len() != k {
                return bad(format!("`restricted` has {} sets for {k} blocks", r.len()));
            }
        }
        if let Some(n) = &self.n {
            if n.len() != k {
                return bad(format!("`n` has {} entries for {k} blocks", n.len()));
            }
        }
        if let Some(c) = &self.chain {
            if c.len() != k {
                return bad(format!("`chain` has {} lists for {k} blocks", c.len()));
            }
        }
        if let Some(c) = &self.couplings {
            if c.len() + 1 != k {
                return bad(format!("`couplings` needs {} entries, found {}", k - 1, c.len()));
            }
        }
        Ok(())
    }

    fn kind_name(&self) -> &'static str {
        self.kind.construction().name()
    }

    fn restricted_counts(&self, k: usize) -> Vec<usize> {
        match (&self.restricted, &self.n) {
            (Some(r), _) => r.iter().map(Vec::len).collect(),
            (None, Some(n)) => n.clone(),
            (None, None) => vec![0; k],
        }
    }

    /// Resolves every slot into a validated spec (not for kronecker).
    pub fn to_spec(&self) -> CliResult<GeneralizedQuadraticSpec> {
        self.check_arity()?;
        if self.kind == Kind::Kronecker {
            return Err(CliError::Config("kronecker configs have no single spec".into()));
        }
        let domain = self.domain.as_ref().expect("checked").to_domain()?;
        let q = domain.modulus();
        let k = domain.num_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let table = |slot: &TableSlot, what: &str| -> CliResult<Option<FuncTable>> {
            slot.as_ref()
                .map(|v| FuncTable::new(q, v.clone()).map_err(|e| CliError::core(what, e)))
                .transpose()
        };

        // J sets
        let counts = self.restricted_counts(k);
        let mut restricted = Vec::with_capacity(k);
        for i in 0..k {
            match &self.restricted {
                Some(r) => restricted.push(r[i].clone()),
                None => {
                    let mut positions: Vec<usize> = domain.block_range(i).collect();
                    positions.shuffle(&mut rng);
                    if counts[i] + 1 > positions.len() {
                        return Err(CliError::Config(format!(
                            "block {i}: cannot restrict {} of {} variables",
                            counts[i],
                            positions.len()
                        )));
                    }
                    let mut j = positions[..counts[i]].to_vec();
                    j.sort_unstable();
                    restricted.push(j);
                }
            }
        }

        // chains
        let mut blocks = Vec::with_capacity(k);
        for i in 0..k {
            let p = domain.blocks()[i].radix;
            let links = domain.block_range(i).len().saturating_sub(restricted[i].len() + 1);
            let given = self.chain.as_ref().map(|c| &c[i]);
            if let Some(g) = given {
                if g.len() != links {
                    return Err(CliError::Config(format!(
                        "block {i}: expected {links} chain links, found {}",
                        g.len()
                    )));
                }
            }
            let mut chain = Vec::with_capacity(links);
            for j in 0..links {
                let link = given.and_then(|g| g[j].clone()).unwrap_or_default();
                let left = table(&link.left, &format!("block {i} link {j} left"))?;
                let right = table(&link.right, &format!("block {i} link {j} right"))?;
                let left = left.unwrap_or_else(|| random_permutation_table(&mut rng, q, p));
                let right = right.unwrap_or_else(|| random_permutation_table(&mut rng, q, p));
                chain.push(ChainLink::new(left, right));
            }
            blocks.push(BlockForm {
                restricted: restricted[i].clone(),
                chain,
            });
        }

        // couplings
        let mut couplings = Vec::with_capacity(k.saturating_sub(1));
        for i in 0..k.saturating_sub(1) {
            let c = self
                .couplings
                .as_ref()
                .and_then(|c| c[i].clone())
                .unwrap_or_default();
            let weight = c.weight.unwrap_or_else(|| rng.random_range(0..q));
            let left = table(&c.left, &format!("coupling {i} left"))?;
            let right = table(&c.right, &format!("coupling {i} right"))?;
            couplings.push(Coupling {
                weight,
                left: left.unwrap_or_else(|| random_table(&mut rng, q)),
                right: right.unwrap_or_else(|| random_table(&mut rng, q)),
            });
        }

        // branches
        let defaults = [BranchConfig::default()];
        let branch_configs = match &self.branches {
            Some(b) if !b.is_empty() => b.as_slice(),
            _ => &defaults[..],
        };
        let mut branches = Vec::with_capacity(branch_configs.len());
        for (b, bc) in branch_configs.iter().enumerate() {
            if let Some(o) = &bc.order {
                if o.len() != k {
                    return Err(CliError::Config(format!(
                        "branch {b}: `order` has {} lists for {k} blocks",
                        o.len()
                    )));
                }
            }
            if let Some(l) = &bc.linear {
                if l.len() != k {
                    return Err(CliError::Config(format!(
                        "branch {b}: `linear` has {} lists for {k} blocks",
                        l.len()
                    )));
                }
            }
            let mut order = Vec::with_capacity(k);
            let mut linear = Vec::with_capacity(k);
            for i in 0..k {
                let o = match bc.order.as_ref().map(|o| o[i].clone()) {
                    Some(o) => o,
                    None => {
                        let mut free: Vec<usize> = domain
                            .block_range(i)
                            .filter(|pos| !restricted[i].contains(pos))
                            .collect();
                        free.shuffle(&mut rng);
                        free
                    }
                };
                let given = bc.linear.as_ref().map(|l| &l[i]);
                if let Some(g) = given {
                    if g.len() != o.len() {
                        return Err(CliError::Config(format!(
                            "branch {b} block {i}: expected {} linear tables, found {}",
                            o.len(),
                            g.len()
                        )));
                    }
                }
                let mut tables = Vec::with_capacity(o.len());
                for j in 0..o.len() {
                    let slot = given.map(|g| g[j].clone()).unwrap_or(None);
                    let t = table(&slot, &format!("branch {b} block {i} linear {j}"))?;
                    tables.push(t.unwrap_or_else(|| random_table(&mut rng, q)));
                }
                order.push(o);
                linear.push(tables);
            }
            branches.push(Branch {
                order,
                linear,
                offset: bc.offset,
            });
        }

        let spec = GeneralizedQuadraticSpec::new(domain, blocks, couplings, branches)
            .map_err(|e| CliError::core("spec", e))?;
        match &self.corrupt {
            None => Ok(spec),
            Some(c) => {
                let t = FuncTable::new(q, c.table.clone())
                    .map_err(|e| CliError::core("corrupt table", e))?;
                corrupt_spec(&spec, c.block, c.link, c.side.clone().into(), t)
                    .map_err(|e| CliError::core(format!("corrupt block {} link {}", c.block, c.link), e))
            }
        }
    }

    /// Builds the code set. `base` resolves relative factor paths.
    pub fn build(&self, base: &Path) -> CliResult<CodeSet> {
        self.check_arity()?;
        if self.kind == Kind::Kronecker {
            let mut acc = trivial_code();
            for (i, factor) in self.factors.as_ref().expect("checked").iter().enumerate() {
                let set = match factor {
                    FactorConfig::File { path } => codeset_file::load(&base.join(path))?,
                    FactorConfig::Inline(cfg) => cfg.build(base)?,
                };
                acc = kronecker_compose(&acc, &set)
                    .map_err(|e| CliError::core(format!("factor {i}"), e))?;
            }
            return Ok(acc);
        }
        let spec = self.to_spec()?;
        build_as(&spec, self.kind.construction()).map_err(|e| CliError::core("build", e))
    }
}
