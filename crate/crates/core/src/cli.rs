//! Command line front end.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 infeasible tree, 3 bad input,
//! 4 I/O or schema error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::document::{FrameDocument, TreeFile};
use crate::error::Error;
use crate::frame::{build_frame, BuildOptions, JPartition};
use crate::group::GroupParams;
use crate::render::{self, Format, What};
use crate::tree::{Classification, MaskTree, PaddingRule, Transform};
use crate::verify::{resolve_seed, verify_frame, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "padic-frames",
    version,
    about = "Step wavelet frames on the p-adic line"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Design a mask, solve it and write the frame document.
    Build(BuildArgs),
    /// Check a frame document numerically.
    Verify(VerifyArgs),
    /// Draw a frame document on the Monna line.
    Render(RenderArgs),
    /// Classify a tree without solving it.
    Classify(ClassifyArgs),
}

#[derive(clap::Args, Debug)]
pub struct TreeArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long = "N")]
    pub n: u32,
    /// Tree literal (JSON); the default tree is used otherwise.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// `i:J`, `ii:L`, `lift:K` or `push:K`; applied in order.
    #[arg(long = "transform")]
    pub transforms: Vec<Transform>,
    #[arg(long, value_enum, default_value_t = Padding::LeavesFirst)]
    pub padding: Padding,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Padding {
    LeavesFirst,
    SmallestIndex,
}

#[derive(clap::Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub tree: TreeArgs,
    /// Fine `j` values for the N = 1 split, e.g. `1,2`.
    #[arg(long = "j-partition")]
    pub j_partition: Option<JPartition>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub tests: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Overridden by `PADIC_FRAMES_SEED`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report path; defaults to the input with `.report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct RenderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = WhatArg::PhiHat)]
    pub what: WhatArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub tree: TreeArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WhatArg {
    PhiHat,
    PhiHatShifted,
    Wavelets,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Ascii,
    Svg,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible { .. }
        | Error::Contradiction { .. }
        | Error::PaddingExhausted { .. }
        | Error::NeedsPadding { .. }
        | Error::ZeroFreePath { .. }
        | Error::ZeroOnLevel { .. }
        | Error::NoZeroLevel => EXIT_INFEASIBLE,
        Error::Parse(_) => EXIT_IO,
        _ => EXIT_BAD_INPUT,
    }
}

fn fail(e: &Error) -> i32 {
    let code = exit_code(e);
    match e {
        Error::Infeasible { .. } | Error::Contradiction { .. } => eprintln!(
            "error: {e}\nthe tree cannot determine a mask: some lambda would have to vanish on a node declared nonzero"
        ),
        _ => eprintln!("error: {e}"),
    }
    code
}

fn read(path: &Path) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_IO
    })
}

fn write(path: Option<&Path>, text: &str) -> Result<(), i32> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            EXIT_IO
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_tree(args: &TreeArgs) -> Result<(GroupParams, Option<MaskTree>, BuildOptions), i32> {
    let params = GroupParams::symmetric(args.p, args.n).map_err(|e| fail(&e))?;
    let base = match &args.tree {
        None => None,
        Some(path) => {
            let text = read(path)?;
            let file: TreeFile = serde_json::from_str(&text).map_err(|e| {
                eprintln!("error: tree file {}: {e}", path.display());
                EXIT_IO
            })?;
            let tree = file.to_tree().map_err(|e| fail(&e))?;
            if tree.params() != params {
                eprintln!("error: tree file parameters differ from --p/--N");
                return Err(EXIT_BAD_INPUT);
            }
            Some(tree)
        }
    };
    let options = BuildOptions {
        transforms: args.transforms.clone(),
        padding: match args.padding {
            Padding::LeavesFirst => PaddingRule::LeavesFirst,
            Padding::SmallestIndex => PaddingRule::SmallestIndex,
        },
        ..Default::default()
    };
    Ok((params, base, options))
}

fn load_document(path: &Path) -> Result<FrameDocument, i32> {
    let text = read(path)?;
    FrameDocument::from_json(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_IO
    })
}

fn cmd_build(args: &BuildArgs) -> Result<i32, i32> {
    let (params, base, mut options) = load_tree(&args.tree)?;
    options.partition = args.j_partition.clone();
    let frame = build_frame(params, base, &options).map_err(|e| fail(&e))?;
    let doc = FrameDocument::from_frame(&frame, &options);
    write(args.out.as_deref(), &doc.to_json())?;
    let v = &doc.verification;
    let ok = v.theorem31
        && v.support_propagation
        && v.refinement_error <= VerifyOptions::default().tol * v.phi_max.max(1.0)
        && v.system_residual <= VerifyOptions::default().tol;
    eprintln!(
        "{} wavelet(s), branch {}, theorem check {}",
        frame.wavelets.len(),
        frame.branch,
        if v.theorem31 { "passed" } else { "FAILED" }
    );
    for s in &v.violations {
        eprintln!("  {s}");
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn default_report(input: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "frame".into());
    input.with_file_name(format!("{stem}.report.json"))
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, i32> {
    let doc = load_document(&args.input)?;
    let frame = doc.to_frame().map_err(|e| {
        eprintln!("error: inconsistent document {}: {e}", args.input.display());
        EXIT_IO
    })?;
    let opts = VerifyOptions {
        tests: args.tests,
        tol: args.tol,
        seed: resolve_seed(args.seed),
        ..Default::default()
    };
    let report = verify_frame(&frame, &opts).map_err(|e| fail(&e))?;
    let path = args
        .report
        .clone()
        .unwrap_or_else(|| default_report(&args.input));
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write(Some(&path), &text)?;
    println!(
        "{}: parseval max {:.3e}, lemma max {:.3e}, refinement {:.3e} (max |phi| {:.3e}), consistency {:.3e} (tol {:e}, seed {})",
        if report.passed { "PASS" } else { "FAIL" },
        report.parseval_max,
        report.lemma31_max,
        report.refinement_error,
        report.phi_max,
        report.consistency_residual,
        opts.tol,
        opts.seed
    );
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_render(args: &RenderArgs) -> Result<i32, i32> {
    let doc = load_document(&args.input)?;
    let frame = doc.to_frame().map_err(|e| {
        eprintln!("error: inconsistent document {}: {e}", args.input.display());
        EXIT_IO
    })?;
    let what = match args.what {
        WhatArg::PhiHat => What::PhiHat,
        WhatArg::PhiHatShifted => What::PhiHatShifted,
        WhatArg::Wavelets => What::Wavelets,
    };
    let format = match args.format {
        FormatArg::Ascii => Format::Ascii,
        FormatArg::Svg => Format::Svg,
    };
    write(args.out.as_deref(), &render::render(&frame, what, format))?;
    Ok(EXIT_OK)
}

fn cmd_classify(args: &ClassifyArgs) -> Result<i32, i32> {
    let (params, base, options) = load_tree(&args.tree)?;
    let mut tree = match base {
        Some(t) => t,
        None => MaskTree::initial(params).map_err(|e| fail(&e))?,
    };
    for &t in &options.transforms {
        tree = tree.apply(t).map_err(|e| fail(&e))?;
    }
    match tree.classify().map_err(|e| fail(&e))? {
        Classification::Determines => println!("determines"),
        Classification::DeterminesAfterPadding(d) => println!("determines after padding {d}"),
        Classification::Infeasible { zeros } => {
            println!("infeasible ({zeros} zeros)");
            return Ok(EXIT_INFEASIBLE);
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Render(a) => cmd_render(a),
        Command::Classify(a) => cmd_classify(a),
    };
    result.unwrap_or_else(|code| code)
}
