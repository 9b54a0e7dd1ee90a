//! The `bucklin` command line: winners, solve, reduce, verify, gen.
//!
//! Exit status is 0 for success or a YES answer, 1 for a NO answer or a
//! failed verification, 2 for usage and input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::control::{ControlKind, ControlType, Goal, TieRule};
use crate::error::Error;
use crate::gen;
use crate::io::{
    parse_control_instance, parse_election, parse_hitting_set, parse_x3c, serialize_control_instance,
    serialize_election, serialize_hitting_set, serialize_x3c,
};
use crate::reductions::{
    candidate_construction_codes, hs_to_ccdc, hs_to_rhs, rhs_to_candidate_control, x3c_to_ccav, x3c_to_ccdv, x3c_to_ccpv,
    RestrictedHittingSetInstance,
};
use crate::solvers::{decide_brute_force, decide_dc_add_voters_poly, decide_dc_delete_voters_poly};
use crate::verify::{run_verification_suite, Suite, SuiteConfig};

#[derive(Parser, Debug)]
#[command(name = "bucklin", version, about = "Bucklin voting and electoral control")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the winning level and winners of an election file.
    Winners { file: PathBuf },
    /// Decide a control instance file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Also print the control action found.
        #[arg(long)]
        witness: bool,
    },
    /// Build a control instance from a source problem file.
    Reduce {
        #[arg(long, value_enum)]
        from: SourceKind,
        /// Control code, or `rhs` for the restricted Hitting Set form.
        #[arg(long)]
        to: String,
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run the self-checking suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = SuiteConfig::default().max_n)]
        max_n: usize,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SuiteConfig::default().samples)]
        samples: usize,
    },
    /// Emit a random election, Hitting Set or X3C file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        candidates: usize,
        #[arg(long, default_value_t = 6)]
        votes: usize,
        /// Elements of the ground set (a multiple of 3 for x3c).
        #[arg(long)]
        elements: Option<usize>,
        #[arg(long, default_value_t = 4)]
        sets: usize,
        #[arg(long, default_value_t = 2)]
        budget: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Poly,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    Hs,
    Rhs,
    X3c,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Election,
    Hs,
    X3c,
}

/// Runs the command line with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            if e.kind() == DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = writeln!(err, "error: missing subcommand (winners, solve, reduce, verify, gen); see --help");
                return 2;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            let _ = writeln!(err, "{}", line.trim());
            return 2;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), String> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn in_file(path: &Path) -> impl Fn(Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    match command {
        Command::Winners { file } => {
            let election = parse_election(&read(&file)?).map_err(in_file(&file))?;
            let outcome = election.outcome().map_err(|e| e.to_string())?;
            let line = match outcome.winning_level() {
                Some(level) => {
                    let names: Vec<&str> = outcome.winners().iter().map(|c| c.as_str()).collect();
                    format!("level {level}: {}", names.join(", "))
                }
                None => "no winner".to_string(),
            };
            writeln!(out, "{line}").map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::Solve { file, method, witness } => {
            let instance = parse_control_instance(&read(&file)?).map_err(in_file(&file))?;
            let code = instance.control();
            let poly_kind = code.goal == Goal::Destructive
                && matches!(code.kind, ControlKind::AddVoters | ControlKind::DeleteVoters);
            let decision = match method {
                Method::Brute => decide_brute_force(&instance),
                Method::Poly | Method::Auto if poly_kind => match code.kind {
                    ControlKind::AddVoters => decide_dc_add_voters_poly(&instance),
                    _ => decide_dc_delete_voters_poly(&instance),
                },
                Method::Poly => return Err(format!("no polynomial method for {code} (only DCAV and DCDV)")),
                Method::Auto => decide_brute_force(&instance),
            }
            .map_err(|e| e.to_string())?;
            writeln!(out, "{}", decision.answer).map_err(|e| e.to_string())?;
            if witness {
                if let Some(action) = &decision.witness {
                    writeln!(out, "witness: {}", action.describe(&instance)).map_err(|e| e.to_string())?;
                }
            }
            let _ = writeln!(
                err,
                "{} actions examined in {:.3?}",
                decision.stats.examined, decision.stats.elapsed
            );
            Ok(if decision.is_yes() { 0 } else { 1 })
        }
        Command::Reduce { from, to, file, output } => {
            let text = reduce(from, &to, &file)?;
            emit(&text, output.as_deref(), out)?;
            Ok(0)
        }
        Command::Verify {
            suite,
            max_n,
            seed,
            samples,
        } => {
            let config = SuiteConfig {
                suite: suite.parse::<Suite>().map_err(|e| e.to_string())?,
                max_n,
                seed,
                samples,
                corrupt_fixture: false,
            };
            let report = run_verification_suite(&config);
            write!(out, "{report}").map_err(|e| e.to_string())?;
            let failed = report.len() - report.passed();
            let _ = writeln!(err, "{} checks, {failed} failed", report.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Command::Gen {
            kind,
            seed,
            candidates,
            votes,
            elements,
            sets,
            budget,
            output,
        } => {
            let mut rng = gen::rng(seed);
            let text = match kind {
                GenKind::Election => {
                    if candidates == 0 {
                        return Err("--candidates must be at least 1".into());
                    }
                    serialize_election(&gen::random_election(&mut rng, candidates, votes))
                }
                GenKind::Hs => {
                    let m = elements.unwrap_or(4);
                    if !(1..=20).contains(&m) || sets == 0 || !(1..=m).contains(&budget) {
                        return Err("hs needs 1 <= --elements <= 20, --sets >= 1 and 1 <= --budget <= --elements".into());
                    }
                    serialize_hitting_set(&gen::random_hitting_set(&mut rng, m, sets, budget))
                }
                GenKind::X3c => {
                    let e = elements.unwrap_or(6);
                    if e == 0 || !e.is_multiple_of(3) || sets == 0 {
                        return Err("x3c needs --elements a positive multiple of 3 and --sets >= 1".into());
                    }
                    serialize_x3c(&gen::random_x3c(&mut rng, e / 3, sets))
                }
            };
            emit(&text, output.as_deref(), out)?;
            Ok(0)
        }
    }
}

fn supported_targets(from: SourceKind) -> Vec<String> {
    match from {
        SourceKind::Rhs => candidate_construction_codes().iter().map(|c| c.code()).collect(),
        SourceKind::Hs => vec!["rhs".into(), "CCDC".into()],
        SourceKind::X3c => vec!["CCAV".into(), "CCDV".into(), "CCPV-TE".into(), "CCPV-TP".into()],
    }
}

fn reduce(from: SourceKind, to: &str, file: &Path) -> Result<String, String> {
    let text = read(file)?;
    let target = if to.eq_ignore_ascii_case("rhs") {
        "rhs".to_string()
    } else {
        to.to_ascii_uppercase()
    };
    let unsupported = || {
        format!(
            "cannot reduce from {} to {to}; supported targets: {}",
            from.to_possible_value().expect("named").get_name(),
            supported_targets(from).join(", ")
        )
    };
    if !supported_targets(from).contains(&target) {
        return Err(unsupported());
    }
    let reduction = match from {
        SourceKind::Hs => {
            let hs = parse_hitting_set(&text).map_err(in_file(file))?;
            if target == "rhs" {
                return Ok(serialize_hitting_set(hs_to_rhs(&hs).instance.as_hitting_set()));
            }
            hs_to_ccdc(&hs)
        }
        SourceKind::Rhs => {
            let hs = parse_hitting_set(&text).map_err(in_file(file))?;
            let rhs = RestrictedHittingSetInstance::new(hs).map_err(in_file(file))?;
            let code: ControlType = target.parse().map_err(|e: Error| e.to_string())?;
            rhs_to_candidate_control(&rhs, code)
        }
        SourceKind::X3c => {
            let x = parse_x3c(&text).map_err(in_file(file))?;
            match target.as_str() {
                "CCAV" => x3c_to_ccav(&x),
                "CCDV" => x3c_to_ccdv(&x),
                "CCPV-TE" => x3c_to_ccpv(&x, TieRule::TiesEliminate),
                _ => x3c_to_ccpv(&x, TieRule::TiesPromote),
            }
        }
    }
    .map_err(|e| e.to_string())?;
    Ok(serialize_control_instance(reduction.instance()))
}
