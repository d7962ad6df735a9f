//! Command-line front end.
//!
//! Exit codes: 0 coverable or accepted, 1 not coverable or rejected, 2 usage
//! or parse error, 3 coverable but no witness within budget. The verdict is
//! printed as `verdict: <word>` on standard output; everything else goes to
//! standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use crate::io::fuzz::run_fuzz;
use crate::io::gen::{
    fig1, fig1_canonical_witness, fig2, fig2_canonical_witness, gen_random, FuzzEnvelope,
};
use crate::io::{parse_instance_with, parse_witness, serialize_instance, serialize_witness};
use crate::model::CoverInstance;
use crate::oracle::backward_cover;
use crate::path::{expand, PathExpr};
use crate::solver::{solve_with_stats, Budget, Verdict};
use crate::toolkit::greedy_linear_form;
use crate::witness::{check_witness, CheckOutcome, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ucover",
    version,
    about = "Coverability for 2-VASS with one unary counter",
    after_help = "Budget defaults can be overridden with UCOVER_MAX_WIDTH, UCOVER_MAX_PATH_LEN, \
UCOVER_EXP_BOUND, UCOVER_PUMP_B, UCOVER_WALL_CLOCK_MS, UCOVER_MAX_SKELETONS and UCOVER_ILP_NODES."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Decide coverability and print a compressed witness.
    Solve {
        file: PathBuf,
        #[arg(long)]
        witness_out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        parse: ParseArgs,
    },
    /// Check a witness against an instance.
    Check {
        file: PathBuf,
        witness: PathBuf,
        #[command(flatten)]
        parse: ParseArgs,
    },
    /// Run the backward oracle.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        basis_out: Option<PathBuf>,
        #[command(flatten)]
        parse: ParseArgs,
    },
    /// Print a generated instance.
    Gen {
        #[command(subcommand)]
        which: GenCmd,
    },
    /// Compare solver and oracle on random instances.
    Fuzz {
        #[arg(long, default_value_t = 500)]
        count: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        envelope: EnvelopeArgs,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Count the power blocks of the greedy linear form of an expanded witness.
    Blocks {
        file: PathBuf,
        witness: PathBuf,
        /// Refuse to expand beyond this many steps.
        #[arg(long, default_value_t = 1 << 24)]
        max_len: usize,
        #[command(flatten)]
        parse: ParseArgs,
    },
}

#[derive(Debug, Subcommand)]
enum GenCmd {
    Fig1 {
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    Fig2 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    Random {
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        envelope: EnvelopeArgs,
    },
}

#[derive(Debug, Args)]
struct ParseArgs {
    /// Accept unary updates outside {-1, 0, 1}.
    #[arg(long)]
    permissive: bool,
}

#[derive(Debug, Args)]
struct EnvelopeArgs {
    #[arg(long, default_value_t = 4)]
    states: u32,
    #[arg(long, default_value_t = 6)]
    transitions: u32,
    #[arg(long, default_value_t = 8)]
    max_bin: u32,
    #[arg(long, default_value_t = 6)]
    max_init_target: u32,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long, env = "UCOVER_MAX_WIDTH")]
    max_width: Option<usize>,
    #[arg(long, env = "UCOVER_MAX_PATH_LEN")]
    max_path_len: Option<usize>,
    #[arg(long, env = "UCOVER_EXP_BOUND")]
    exp_bound: Option<BigUint>,
    #[arg(long, env = "UCOVER_PUMP_B")]
    pump_b: Option<u32>,
    #[arg(long, env = "UCOVER_WALL_CLOCK_MS")]
    wall_clock_ms: Option<u64>,
    #[arg(long, env = "UCOVER_MAX_SKELETONS")]
    max_skeletons: Option<u64>,
    #[arg(long, env = "UCOVER_ILP_NODES")]
    ilp_nodes: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_width: self.max_width.unwrap_or(d.max_width),
            max_skeleton_path_len: self.max_path_len.or(d.max_skeleton_path_len),
            exp_bound: self.exp_bound.clone().or(d.exp_bound),
            pump_exponent_b: self.pump_b.unwrap_or(d.pump_exponent_b),
            wall_clock: self
                .wall_clock_ms
                .map(Duration::from_millis)
                .or(d.wall_clock),
            max_skeletons: self.max_skeletons.unwrap_or(d.max_skeletons),
            ilp_nodes: self.ilp_nodes.unwrap_or(d.ilp_nodes),
            max_covering_path: d.max_covering_path,
        }
    }
}

impl EnvelopeArgs {
    fn envelope(&self, seed: u64) -> FuzzEnvelope {
        FuzzEnvelope::new(
            self.states,
            self.transitions,
            self.max_bin,
            self.max_init_target,
            seed,
        )
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// A failure that ends the command with exit code 2.
struct Usage(String);

fn read(path: &Path) -> Result<String, Usage> {
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Usage> {
    fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path, p: &ParseArgs) -> Result<CoverInstance, Usage> {
    parse_instance_with(&read(path)?, p.permissive)
        .map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load_witness(path: &Path) -> Result<PathExpr, Usage> {
    parse_witness(&read(path)?).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    match run(cli.cmd, &mut io) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn verdict(io: &mut Io, word: &str) {
    let _ = writeln!(io.out, "verdict: {word}");
}

fn run(cmd: Cmd, io: &mut Io) -> Result<i32, Usage> {
    match cmd {
        Cmd::Solve {
            file,
            witness_out,
            budget,
            parse,
        } => {
            let inst = load_instance(&file, &parse)?;
            let (v, stats) = solve_with_stats(&inst, &budget.budget());
            verdict(io, v.word());
            let _ = writeln!(
                io.err,
                "oracle: {} iterations, basis of {} elements",
                stats.oracle_iterations, stats.basis_size
            );
            match v {
                Verdict::Coverable(w) => {
                    let text = serialize_witness(&w.expr);
                    if let CheckOutcome::Accept(c) = check_witness(&inst, &w) {
                        let _ = writeln!(io.err, "final: {}", c.display(&inst.vass));
                    }
                    if let Some(p) = stats.phase {
                        let _ = writeln!(io.err, "phase: {}", p.name());
                    }
                    match witness_out {
                        Some(path) => write_file(&path, &format!("{text}\n"))?,
                        None => {
                            let _ = writeln!(io.out, "witness: {text}");
                        }
                    }
                    Ok(EXIT_OK)
                }
                Verdict::NotCoverable => Ok(EXIT_NO),
                Verdict::CoverableWitnessUnknown(rep) => {
                    let _ = writeln!(io.err, "budget exhausted: {rep}");
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Cmd::Check {
            file,
            witness,
            parse,
        } => {
            let inst = load_instance(&file, &parse)?;
            let expr = load_witness(&witness)?;
            match check_witness(&inst, &Witness::new(expr)) {
                CheckOutcome::Accept(c) => {
                    verdict(io, "accepted");
                    let _ = writeln!(io.out, "final: {}", c.display(&inst.vass));
                    Ok(EXIT_OK)
                }
                CheckOutcome::Reject(r) => {
                    verdict(io, "rejected");
                    let _ = writeln!(io.out, "reason: {}", r.keyword());
                    let _ = writeln!(io.err, "rejected: {r}");
                    Ok(EXIT_NO)
                }
            }
        }
        Cmd::Oracle {
            file,
            basis_out,
            parse,
        } => {
            let inst = load_instance(&file, &parse)?;
            let r = backward_cover(&inst);
            verdict(
                io,
                if r.coverable {
                    "coverable"
                } else {
                    "not-coverable"
                },
            );
            let _ = writeln!(
                io.err,
                "basis: {} elements after {} iterations",
                r.basis.elements.len(),
                r.iterations
            );
            if let Some(path) = basis_out {
                write_file(&path, &r.basis.dump(&inst.vass))?;
            }
            Ok(if r.coverable { EXIT_OK } else { EXIT_NO })
        }
        Cmd::Gen { which } => {
            let (inst, witness, out_path) = match which {
                GenCmd::Fig1 { witness_out } => {
                    (fig1(), Some(fig1_canonical_witness()), witness_out)
                }
                GenCmd::Fig2 { n, witness_out } => {
                    let inst = fig2(n).map_err(|e| Usage(e.to_string()))?;
                    (inst, Some(fig2_canonical_witness(n)), witness_out)
                }
                GenCmd::Random { seed, envelope } => {
                    (gen_random(&envelope.envelope(seed)), None, None)
                }
            };
            let _ = write!(io.out, "{}", serialize_instance(&inst));
            if let (Some(w), Some(path)) = (witness, out_path) {
                write_file(&path, &format!("{}\n", serialize_witness(&w)))?;
            }
            Ok(EXIT_OK)
        }
        Cmd::Fuzz {
            count,
            seed,
            envelope,
            threads,
            budget,
        } => {
            let report = run_fuzz(&envelope.envelope(seed), count, &budget.budget(), threads);
            for f in report.failures() {
                let _ = writeln!(
                    io.err,
                    "instance {} (seed {}): {:?} {}",
                    f.index, f.seed, f.outcome, f.detail
                );
            }
            let _ = writeln!(io.err, "{report}");
            if report.all_agree() {
                verdict(io, "agree");
                Ok(EXIT_OK)
            } else {
                verdict(io, "disagree");
                Ok(EXIT_NO)
            }
        }
        Cmd::Blocks {
            file,
            witness,
            max_len,
            parse,
        } => {
            let inst = load_instance(&file, &parse)?;
            let expr = load_witness(&witness)?;
            let path = expand(&inst.vass, &expr, max_len).map_err(|e| Usage(e.to_string()))?;
            let form = greedy_linear_form(&inst.vass, &path).map_err(|e| Usage(e.to_string()))?;
            let _ = writeln!(io.out, "blocks: {}", form.width());
            let _ = writeln!(
                io.err,
                "expanded length {}, connecting steps {}",
                path.len(),
                form.cost().0
            );
            Ok(EXIT_OK)
        }
    }
}
