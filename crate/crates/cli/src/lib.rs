//! Command-line front end: argument model, parameter resolution and dispatch.

pub mod commands;
pub mod report;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kummer_mw::surface::{validate_params, FamilyParams, Mode, ParamError};
use serde_json::{json, Value};

pub use report::{Check, Envelope, Format};

#[derive(Debug, Parser)]
#[command(name = "kummer-mw", version, about = "Exact checks on the Kummer/Kuwata surface family over F_q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Validate (q, b, c) against the family hypotheses.
    CheckParams,
    /// Fibers, trivial lattices, MW over the closure and Picard numbers of the E_j.
    Table1,
    /// Gram matrices of <P0, P1> on E_1 and <Q0, Q1> on E_2.
    Heights,
    /// Frobenius matrices on both lattices and the residue symbols selecting them.
    Frobenius,
    /// Rank and torsion of MW(K6) over F_q.
    Rank,
    /// Randomised round trips of the isomorphism and global minimality of every model.
    VerifyIso,
    /// P0 + P1 + P2 = O, Q0 + Q1 + Q2 = O and the order of the torsion sections.
    Relations,
    /// Exhaustive bounded-degree search for affine F_q-sections of K2 or K6n.
    Search,
    /// The sections at infinity of K6 and their images on E.
    Torsion,
    /// List every (b, c) satisfying the strict hypotheses for the given q.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    #[value(name = "7-2-6")]
    P726,
    #[value(name = "13-2-5")]
    P13_2_5,
    #[value(name = "7-6-6-relaxed")]
    P766Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceArg {
    K2,
    K6n,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    #[arg(long, global = true)]
    pub q: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<i64>,
    /// Use a shipped parameter set instead of --q/--b/--c.
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    /// Accept a cube b.
    #[arg(long, global = true)]
    pub relaxed: bool,
    /// Base-change exponent for K6n (t -> t^(3n)).
    #[arg(long, global = true, default_value_t = 1)]
    pub n: u32,
    #[arg(long = "max-deg", global = true, default_value_t = 1)]
    pub max_deg: usize,
    /// Search rational (not only polynomial) coordinates.
    #[arg(long, global = true)]
    pub rational: bool,
    #[arg(long, global = true, value_enum, default_value_t = SurfaceArg::K2)]
    pub surface: SurfaceArg,
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: u32,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = kummer_mw::search::DEFAULT_CAP)]
    pub cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Exit status when a check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status when a search would exceed its cap.
pub const EXIT_CAP: i32 = 3;

/// Distinct exit status per violated hypothesis.
pub fn exit_code(err: ParamError) -> i32 {
    match err {
        ParamError::QNotPrime => 10,
        ParamError::QMod3 => 11,
        ParamError::BZero => 12,
        ParamError::CZero => 13,
        ParamError::BIsCube => 14,
        ParamError::CNotCube => 15,
        ParamError::CIsSquare => 16,
    }
}

/// `(q, b mod q, c mod q, mode)` from a preset or explicit flags.
pub fn resolve(opts: &Options, command: Command) -> Result<(u64, u64, u64, Mode)> {
    let relaxed_mode = |r: bool| if r { Mode::Relaxed } else { Mode::Strict };
    if let Some(p) = opts.preset {
        return Ok(match p {
            Preset::P726 => (7, 2, 6, relaxed_mode(opts.relaxed)),
            Preset::P13_2_5 => (13, 2, 5, relaxed_mode(opts.relaxed)),
            Preset::P766Relaxed => (7, 6, 6, Mode::Relaxed),
        });
    }
    let Some(q) = opts.q else { bail!("--q is required (or use --preset)") };
    if q < 2 {
        bail!("--q must be at least 2");
    }
    if command == Command::Scan {
        return Ok((q, 0, 0, relaxed_mode(opts.relaxed)));
    }
    let (Some(b), Some(c)) = (opts.b, opts.c) else { bail!("--b and --c are required (or use --preset)") };
    let reduce = |v: i64| v.rem_euclid(q as i64) as u64;
    Ok((q, reduce(b), reduce(c), relaxed_mode(opts.relaxed)))
}

pub struct Outcome {
    pub envelope: Envelope,
    pub exit_code: i32,
}

fn config_echo(opts: &Options, command: Command, (q, b, c, mode): (u64, u64, u64, Mode)) -> Value {
    let name = format!("{command:?}");
    let mut config = json!({
        "command": kebab(&name),
        "q": q.to_string(),
        "b": b.to_string(),
        "c": c.to_string(),
        "mode": mode,
    });
    let extra = match command {
        Command::VerifyIso => json!({"n": opts.n, "samples": opts.samples, "seed": opts.seed.to_string()}),
        Command::Search => json!({
            "surface": match opts.surface { SurfaceArg::K2 => "k2", SurfaceArg::K6n => "k6n" },
            "n": opts.n,
            "max_deg": opts.max_deg,
            "family": if opts.rational { "rational" } else { "polynomial" },
            "cap": opts.cap.to_string(),
        }),
        Command::Scan => {
            let obj = config.as_object_mut().expect("object");
            obj.remove("b");
            obj.remove("c");
            json!({})
        }
        _ => json!({}),
    };
    if let (Some(obj), Some(extra)) = (config.as_object_mut(), extra.as_object()) {
        obj.extend(extra.clone());
    }
    config
}

fn kebab(camel: &str) -> String {
    let mut out = String::new();
    for (i, ch) in camel.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.extend(ch.to_lowercase());
    }
    out
}

/// Runs one subcommand; parameter problems become a failing report with a specific status.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let opts = &cli.opts;
    let resolved = resolve(opts, cli.command)?;
    let config = config_echo(opts, cli.command, resolved);
    let (q, b, c, mode) = resolved;
    if cli.command == Command::Scan {
        return Ok(finish(config, commands::scan(q), None));
    }
    if cli.command == Command::CheckParams {
        let (checks, err) = commands::check_params(q, b, c, mode);
        return Ok(Outcome { envelope: Envelope::new(config, checks), exit_code: err.map_or(0, exit_code) });
    }
    let params: FamilyParams = match validate_params(q, b, c, mode) {
        Ok(p) => p,
        Err(e) => {
            let (checks, _) = commands::check_params(q, b, c, mode);
            return Ok(Outcome { envelope: Envelope::new(config, checks), exit_code: exit_code(e) });
        }
    };
    let (checks, special) = match cli.command {
        Command::Table1 => (commands::table1(&params)?, None),
        Command::Heights => (commands::heights(&params)?, None),
        Command::Frobenius => (commands::frobenius(&params)?, None),
        Command::Rank => (commands::rank(&params)?, None),
        Command::VerifyIso => (commands::verify_iso(&params, opts.n, opts.samples, opts.seed)?, None),
        Command::Relations => (commands::relations(&params), None),
        Command::Search => commands::search(&params, opts),
        Command::Torsion => (commands::torsion(&params)?, None),
        Command::CheckParams | Command::Scan => unreachable!("handled above"),
    };
    Ok(finish(config, checks, special))
}

fn finish(config: Value, checks: Vec<Check>, special_exit: Option<i32>) -> Outcome {
    let envelope = Envelope::new(config, checks);
    let exit_code = special_exit.unwrap_or(if envelope.pass { 0 } else { EXIT_CHECK_FAILED });
    Outcome { envelope, exit_code }
}
