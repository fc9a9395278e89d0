//! Command-line front end: ring inspection, resolution tables and the
//! verification suites, with stable machine-readable output.
//!
//! Exit codes: 0 pass, 1 assertion failure, 2 parse/build error,
//! 3 stage-budget truncation, 4 wrong ring class or bad suite parameters.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use artinres::algebra::{build_algebra, build_algebra_stabilized, ARing, RingSpec};
use artinres::error::Error;
use artinres::harness::{
    report_to_csv, verify_ci4, verify_curv, verify_flat, verify_limits, verify_monomial_ci,
    verify_short_nonci, SuiteConfig, SuiteReport,
};
use artinres::modules::{resolve, ModuleSpecFile, PeriodicCert, ResolveOptions};

#[derive(Parser, Debug)]
#[command(name = "artinres", version)]
#[command(about = "Exact resolutions, Betti tables and length invariants over Artin local algebras")]
#[command(after_help = "EXAMPLES:
    artinres ring-info rings/x2y2.json
    artinres resolve rings/x2y2.json rings/mod_ax.json --stages 10
    artinres verify ci4 rings/x2y2.json --count 50 --seed 1
    artinres verify flat rings/uv22.json rings/z3.json --cap 1024
    artinres verify monomial-ci --exponents 4,2
    artinres verify limits --growth 2,3,5")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print dimension, Hilbert data and classification of a ring spec
    RingInfo(RingInfoArgs),
    /// Resolve a module and print its Betti table
    Resolve(ResolveArgs),
    /// Run a verification suite (ci4, short, curv, flat, monomial-ci, limits)
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, Default)]
enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct CommonFlags {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RingInfoArgs {
    /// Ring spec file (JSON)
    ring: PathBuf,

    /// For ungraded specs: raise the truncation until the dimension is stable
    #[arg(long)]
    stabilize: bool,

    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args, Debug)]
struct ResolveArgs {
    /// Ring spec file (JSON)
    ring: PathBuf,
    /// Module spec file (JSON)
    module: PathBuf,

    /// Number of resolution stages
    #[arg(long, default_value_t = 12)]
    stages: usize,

    /// Matrix-size cap in scalar rows (beta_i * dim A)
    #[arg(long, default_value_t = 16384)]
    cap: usize,

    /// Trailing window for the plateau flag
    #[arg(long, default_value_t = 4)]
    window: usize,

    /// Seed for randomized certificates
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Trials for randomized isomorphism certificates
    #[arg(long, default_value_t = 64)]
    trials: u64,

    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name: ci4 | short | curv | flat | monomial-ci | limits
    suite: String,

    /// Ring spec file(s); flat takes two (R and T)
    rings: Vec<PathBuf>,

    /// Exponents for monomial-ci, e.g. 4,2
    #[arg(long, value_delimiter = ',')]
    exponents: Vec<u32>,

    /// Characteristic for monomial-ci
    #[arg(long, default_value_t = 7)]
    char_p: u64,

    /// Growth rates for the limits suite, e.g. 2,3,5
    #[arg(long = "growth", alias = "h", value_delimiter = ',')]
    growth: Vec<u64>,

    /// Tail index for the limits suite
    #[arg(long, default_value_t = 60)]
    n_max: usize,

    /// Number of resolution stages
    #[arg(long, default_value_t = 12)]
    stages: usize,

    /// Seed for every randomized choice in the suite
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Trials for randomized isomorphism certificates
    #[arg(long, default_value_t = 64)]
    trials: u64,

    /// Trailing window for plateau flags
    #[arg(long, default_value_t = 4)]
    window: usize,

    /// Extension-closure sample count
    #[arg(long, default_value_t = 24)]
    count: usize,

    /// Random control presentations
    #[arg(long, default_value_t = 10)]
    controls: usize,

    /// Matrix-size cap in scalar rows (beta_i * dim A)
    #[arg(long, default_value_t = 16384)]
    cap: usize,

    #[command(flatten)]
    common: CommonFlags,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::WrongRingClass(_) | Error::BadExponents(_) | Error::InvalidParameter(_) => 4,
        Error::StageBudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn emit(common: &CommonFlags, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None if text.ends_with('\n') => print!("{text}"),
        None => println!("{text}"),
    }
    Ok(())
}

fn load_ring(path: &Path) -> Result<ARing, Error> {
    let spec = RingSpec::from_path(path)?;
    build_algebra(&spec)
}

#[derive(Serialize)]
struct RingInfoOut {
    name: String,
    dim: usize,
    hilbert: Vec<usize>,
    embdim: usize,
    socle_dim: usize,
    short: bool,
    hypersurface: bool,
    ci4_candidate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lescot: Option<artinres::algebra::LescotData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stabilized_truncation: Option<usize>,
}

fn cmd_ring_info(args: &RingInfoArgs) -> Result<i32, Error> {
    let spec = RingSpec::from_path(&args.ring)?;
    let (algebra, stabilized) = if args.stabilize && !spec.graded {
        let (a, n) = build_algebra_stabilized(&spec)?;
        (a, Some(n))
    } else {
        (build_algebra(&spec)?, None)
    };
    let hd = algebra.hilbert();
    let class = algebra.classify();
    let out = RingInfoOut {
        name: algebra.name().to_string(),
        dim: algebra.dim(),
        hilbert: hd.h,
        embdim: hd.embdim,
        socle_dim: hd.socle_dim,
        short: class.short,
        hypersurface: class.hypersurface,
        ci4_candidate: class.ci4_candidate,
        lescot: class.lescot,
        stabilized_truncation: stabilized,
    };
    emit(&args.common, &serde_json::to_string_pretty(&out)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct ResolveOut {
    betti: Vec<u64>,
    lengths: Vec<u64>,
    bounded: bool,
    periodic: Option<PeriodicCert>,
    truncated: bool,
    stages_computed: usize,
}

fn cmd_resolve(args: &ResolveArgs) -> Result<i32, Error> {
    let algebra = load_ring(&args.ring)?;
    let module_spec = ModuleSpecFile::from_path(&args.module)?;
    let module = module_spec.build(&algebra)?;
    let opts = ResolveOptions {
        stages: args.stages,
        matrix_cap: args.cap,
        window: args.window,
        seed: args.seed,
        trials: args.trials,
        ..Default::default()
    };
    let res = resolve(&module, &opts);
    let out = ResolveOut {
        betti: res.betti.clone(),
        lengths: res.syzygy_lengths.clone(),
        bounded: res.bounded_flag,
        periodic: res.periodic,
        truncated: res.truncated,
        stages_computed: res.stages_computed,
    };
    let text = match args.common.format {
        OutputFormat::Json => serde_json::to_string_pretty(&out)?,
        OutputFormat::Csv => {
            let mut s = String::from("stage,beta,length\n");
            for (i, (b, l)) in out.betti.iter().zip(&out.lengths).enumerate() {
                s.push_str(&format!("{i},{b},{l}\n"));
            }
            s
        }
    };
    emit(&args.common, &text)?;
    if res.truncated {
        eprintln!(
            "stage budget exceeded: table truncated after {} stages",
            res.stages_computed
        );
        return Ok(3);
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, Error> {
    let cfg = SuiteConfig {
        seed: args.seed,
        module_count: args.count,
        controls: args.controls,
        stages: args.stages,
        trials: args.trials,
        window: args.window,
        matrix_cap: args.cap,
        iso_length_cap: 64,
    };
    let need_rings = |n: usize| -> Result<(), Error> {
        if args.rings.len() != n {
            return Err(Error::InvalidParameter(format!(
                "suite `{}` takes {} ring file(s), got {}",
                args.suite,
                n,
                args.rings.len()
            )));
        }
        Ok(())
    };
    let report: SuiteReport = match args.suite.as_str() {
        "ci4" => {
            need_rings(1)?;
            verify_ci4(&load_ring(&args.rings[0])?, &cfg)?
        }
        "short" => {
            need_rings(1)?;
            verify_short_nonci(&load_ring(&args.rings[0])?, &cfg)?
        }
        "curv" => {
            need_rings(1)?;
            verify_curv(&load_ring(&args.rings[0])?, &cfg)?
        }
        "flat" => {
            need_rings(2)?;
            verify_flat(
                &load_ring(&args.rings[0])?,
                &load_ring(&args.rings[1])?,
                &cfg,
            )?
        }
        "monomial-ci" => {
            need_rings(0)?;
            verify_monomial_ci(args.char_p, &args.exponents, &cfg)?
        }
        "limits" => {
            need_rings(0)?;
            verify_limits(&args.growth, args.n_max, &cfg)?
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown suite `{other}`; expected ci4 | short | curv | flat | monomial-ci | limits"
            )))
        }
    };
    let text = match args.common.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report_to_csv(&report),
    };
    emit(&args.common, &text)?;
    eprintln!(
        "suite {}: {} ({} assertions, {} modules)",
        report.suite,
        if report.pass { "PASS" } else { "FAIL" },
        report.assertions.len(),
        report.modules.len()
    );
    Ok(if report.pass { 0 } else { 1 })
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::RingInfo(args) => cmd_ring_info(args),
        Command::Resolve(args) => cmd_resolve(args),
        Command::Verify(args) => cmd_verify(args),
    };
    let code = match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    };
    std::process::exit(code);
}
