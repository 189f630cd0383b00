//! Subcommands. Each returns the process exit status; errors map to 2.

use std::io::Write;
use std::path::{Path, PathBuf};

use ccc_core::correlation::correlation_profile;
use ccc_core::verify::{necessity_probe, verify_ccc, VerifyMode, VerifyOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codeset_file;
use crate::config::{BuildConfig, CorruptConfig, SideConfig};
use crate::error::{CliError, CliResult};
use crate::report::{probe_json, report_json, write_profile_csv};
use crate::reproduce::reproduce72;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CCC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ccc", version, about = "Build and verify complete complementary codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code set from a JSON config.
    Build {
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a code-set file; exit 0 iff it is a CCC.
    Verify {
        codeset: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Stored violations, or `all`.
        #[arg(long, default_value = "16")]
        max_violations: ViolationCap,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correlation of codes k1 and k2 at every shift, as CSV.
    Profile {
        codeset: PathBuf,
        k1: usize,
        k2: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corrupt one chain table of a config and search for a violation.
    /// Exit 1 when one is found, 0 when the corrupted set still verifies.
    Probe {
        config: PathBuf,
        #[command(flatten)]
        corruption: CorruptionArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the (12, 72) example and check it against the printed data.
    Reproduce72 {
        /// Also write the built code set here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

impl From<Mode> for VerifyMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => VerifyMode::Exact,
            Mode::Float => VerifyMode::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ViolationCap(pub Option<usize>);

impl std::str::FromStr for ViolationCap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(ViolationCap(None));
        }
        s.parse()
            .map(|n| ViolationCap(Some(n)))
            .map_err(|_| format!("expected a count or `all`, got {s:?}"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct CorruptionArgs {
    /// Block of the chain table to replace (0-based).
    #[arg(long)]
    pub block: Option<usize>,
    /// Chain link within the block (0-based).
    #[arg(long)]
    pub link: Option<usize>,
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    /// Replace with the constant function.
    #[arg(long, conflicts_with = "table")]
    pub constant: Option<u32>,
    /// Replace with this table, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub table: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn config_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Build { config, seed, out } => {
            let mut cfg = BuildConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let set = cfg.build(&config_dir(&config))?;
            emit(&codeset_file::to_json(&set), out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            codeset,
            mode,
            max_violations,
            out,
        } => {
            let set = codeset_file::load(&codeset)?;
            let options = VerifyOptions {
                mode: mode.into(),
                max_violations: max_violations.0,
            };
            let report = verify_ccc(&set, &options);
            let mut text = report_json(&report);
            text.push('\n');
            emit(&text, out.as_deref(), stdout)?;
            Ok(if report.is_ccc { EXIT_OK } else { EXIT_NOT_CCC })
        }
        Command::Profile {
            codeset,
            k1,
            k2,
            out,
        } => {
            let set = codeset_file::load(&codeset)?;
            for k in [k1, k2] {
                if k >= set.num_codes() {
                    return Err(CliError::Usage(format!(
                        "code index {k} out of range, the set has {} codes",
                        set.num_codes()
                    )));
                }
            }
            let profile = correlation_profile(set.code(k1), set.code(k2))
                .map_err(|e| CliError::core("profile", e))?;
            let mut buf = Vec::new();
            write_profile_csv(&profile, &mut buf)?;
            emit(&String::from_utf8(buf).expect("ascii csv"), out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Probe {
            config,
            corruption,
            seed,
            out,
        } => {
            let mut cfg = BuildConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.corrupt = Some(merge_corruption(&cfg, &corruption)?);
            let c = cfg.corrupt.clone().expect("set above");
            let spec = cfg.to_spec()?;
            let outcome = necessity_probe(&spec).map_err(|e| CliError::core("probe", e))?;
            let side = match c.side {
                SideConfig::Left => "left",
                SideConfig::Right => "right",
            };
            let mut text = probe_json(c.block, c.link, side, &outcome);
            text.push('\n');
            emit(&text, out.as_deref(), stdout)?;
            Ok(if outcome.evidence.is_some() {
                EXIT_NOT_CCC
            } else {
                EXIT_OK
            })
        }
        Command::Reproduce72 { out } => {
            let r = reproduce72()?;
            for c in &r.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                writeln!(stdout, "{tag}  {} ({})", c.name, c.detail)
                    .map_err(|e| CliError::io("<stdout>", e))?;
            }
            writeln!(stdout, "elapsed {:.3} s", r.elapsed.as_secs_f64())
                .map_err(|e| CliError::io("<stdout>", e))?;
            if let Some(path) = out {
                codeset_file::save(&r.set, &path)?;
            }
            Ok(if r.passed() { EXIT_OK } else { EXIT_NOT_CCC })
        }
    }
}

/// Flags override the config's `corrupt` entry field by field.
fn merge_corruption(cfg: &BuildConfig, args: &CorruptionArgs) -> CliResult<CorruptConfig> {
    let base = cfg.corrupt.clone();
    let block = args.block.or(base.as_ref().map(|c| c.block));
    let link = args.link.or(base.as_ref().map(|c| c.link));
    let side = match args.side {
        Some(SideArg::Left) => Some(SideConfig::Left),
        Some(SideArg::Right) => Some(SideConfig::Right),
        None => base.as_ref().map(|c| c.side.clone()),
    };
    let q = cfg
        .domain
        .as_ref()
        .ok_or_else(|| CliError::Usage("probe needs a config with a domain".into()))?
        .to_domain()?
        .modulus();
    let table = match (&args.table, args.constant) {
        (Some(t), _) => Some(t.clone()),
        (None, Some(c)) => Some(vec![c; q as usize]),
        (None, None) => base.as_ref().map(|c| c.table.clone()),
    };
    match (block, link, side, table) {
        (Some(block), Some(link), Some(side), Some(table)) => Ok(CorruptConfig {
            block,
            link,
            side,
            table,
        }),
        _ => Err(CliError::Usage(
            "probe needs --block, --link, --side and --constant or --table (or a `corrupt` entry in the config)".into(),
        )),
    }
}

/// Parses `args` (without the program name) and runs; for tests and embedding.
pub fn run_args<I, S>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("ccc")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => match run(cli, stdout) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
