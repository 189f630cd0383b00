//! Code-set files.
//!
//! ```json
//! {
//!   "q": 6, "L": 72, "K": 12, "M": 12,
//!   "meta": {"kind": "corollary3", "blocks": [[2,3],[3,2]], ...},
//!   "codes": [[[2,2,3,...], ...], ...]
//! }
//! ```
//!
//! Entries are exponents of `xi_q`; `null` marks a zero entry. Each sequence
//! sits on its own line, so files diff well and the output is byte-stable.

use std::fmt::Write as _;
use std::path::Path;

use ccc_core::{CodeMeta, CodeSet, ConstructionKind, RootSequence};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaFile {
    pub kind: String,
    pub blocks: Vec<(u32, u32)>,
    pub restricted: Vec<usize>,
    pub corrupted: bool,
    pub index_order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSetFile {
    pub q: u32,
    #[serde(rename = "L")]
    pub length: usize,
    #[serde(rename = "K")]
    pub num_codes: usize,
    #[serde(rename = "M")]
    pub seqs_per_code: usize,
    pub meta: MetaFile,
    pub codes: Vec<Vec<Vec<Option<u32>>>>,
}

fn meta_file(m: &CodeMeta) -> MetaFile {
    MetaFile {
        kind: m.kind.name().into(),
        blocks: m.blocks.clone(),
        restricted: m.restricted.clone(),
        corrupted: m.corrupted,
        index_order: m.index_order.clone(),
    }
}

pub fn to_json(set: &CodeSet) -> String {
    let meta = serde_json::to_string(&meta_file(set.meta())).expect("plain data");
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"q\": {},", set.modulus());
    let _ = writeln!(out, "  \"L\": {},", set.length());
    let _ = writeln!(out, "  \"K\": {},", set.num_codes());
    let _ = writeln!(out, "  \"M\": {},", set.seqs_per_code());
    let _ = writeln!(out, "  \"meta\": {meta},");
    let _ = writeln!(out, "  \"codes\": [");
    for (k, code) in set.codes().iter().enumerate() {
        let _ = writeln!(out, "    [");
        for (m, seq) in code.iter().enumerate() {
            let row = serde_json::to_string(seq.entries()).expect("plain data");
            let comma = if m + 1 < code.len() { "," } else { "" };
            let _ = writeln!(out, "      {row}{comma}");
        }
        let comma = if k + 1 < set.num_codes() { "," } else { "" };
        let _ = writeln!(out, "    ]{comma}");
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    out
}

pub fn from_json(text: &str) -> CliResult<CodeSet> {
    let file: CodeSetFile = serde_json::from_str(text).map_err(|source| CliError::Json {
        context: "code-set file".into(),
        source,
    })?;
    from_file(file)
}

pub fn from_file(file: CodeSetFile) -> CliResult<CodeSet> {
    let bad = |msg: String| Err(CliError::CodeSetFile(msg));
    if file.codes.len() != file.num_codes {
        return bad(format!("K = {} but {} codes listed", file.num_codes, file.codes.len()));
    }
    let kind = ConstructionKind::from_name(&file.meta.kind)
        .ok_or_else(|| CliError::CodeSetFile(format!("unknown kind {:?}", file.meta.kind)))?;
    let mut codes = Vec::with_capacity(file.codes.len());
    for (k, code) in file.codes.into_iter().enumerate() {
        if code.len() != file.seqs_per_code {
            return bad(format!("code {k}: M = {} but {} sequences", file.seqs_per_code, code.len()));
        }
        let mut seqs = Vec::with_capacity(code.len());
        for (m, entries) in code.into_iter().enumerate() {
            if entries.len() != file.length {
                return bad(format!("code {k} sequence {m}: L = {} but {} entries", file.length, entries.len()));
            }
            let seq = RootSequence::new(file.q, entries)
                .map_err(|e| CliError::core(format!("code {k} sequence {m}"), e))?;
            seqs.push(seq);
        }
        codes.push(seqs);
    }
    let meta = CodeMeta {
        kind,
        blocks: file.meta.blocks,
        restricted: file.meta.restricted,
        corrupted: file.meta.corrupted,
        index_order: file.meta.index_order,
    };
    CodeSet::new(file.q, codes, meta).map_err(|e| CliError::core("code set", e))
}

pub fn load(path: &Path) -> CliResult<CodeSet> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    from_json(&text)
}

pub fn save(set: &CodeSet, path: &Path) -> CliResult<()> {
    std::fs::write(path, to_json(set)).map_err(|e| CliError::io(path, e))
}
