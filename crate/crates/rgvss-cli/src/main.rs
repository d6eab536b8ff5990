//! `rgvss`: contrast tables, the corrigendum diff, share encoding and
//! decoding, and the closed-form/enumeration/Monte-Carlo verifier.
//!
//! Exit codes: 0 on success (and verification pass), 1 on verification
//! failure, 2 on usage or I/O errors.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rgvss_core::analytic::{self, SchemeParams, StackOp};
use rgvss_core::codec::EncodingPolicy;
use rgvss_core::imaging::{self, pbm, Bitmap};
use rgvss_core::oracle;
use rgvss_core::PixelColor;

use output::{ratio_cell, ratio_json, OutputFormat, Table};

#[derive(Parser)]
#[command(name = "rgvss", version, about = "Random-grid (k,n) visual secret sharing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the corrected contrast table for a (k,n) scheme
    ContrastTable {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
        /// Also show the light transmissions behind each contrast
        #[arg(long)]
        show_transmissions: bool,
    },
    /// Diff the previously published contrast values against recomputed ones
    Corrigendum {
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
    /// Split a PBM secret image into n share files
    Encode {
        /// Secret image (PBM, P1 or P4)
        #[arg(long)]
        secret: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        /// Per-pixel encoding: "averaged" or "fixed:<j>"
        #[arg(long, default_value = "averaged")]
        policy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for shares and manifest
        #[arg(long)]
        out: PathBuf,
        /// Write ASCII (P1) shares instead of packed binary (P4)
        #[arg(long)]
        ascii: bool,
    },
    /// Stack share files into a reconstructed image
    Decode {
        #[arg(long, value_enum)]
        op: OpArg,
        /// Output path for the reconstruction
        #[arg(long)]
        out: PathBuf,
        /// Original secret; when given, measured per-region transmissions
        /// are printed
        #[arg(long)]
        secret: Option<PathBuf>,
        /// Share files, stacked in order
        #[arg(required = true)]
        shares: Vec<PathBuf>,
        /// Write ASCII (P1) output instead of packed binary (P4)
        #[arg(long)]
        ascii: bool,
    },
    /// Check closed forms against enumeration and Monte Carlo for a scheme
    Verify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the report as JSON instead of text
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpArg {
    Or,
    Xor,
}

impl From<OpArg> for StackOp {
    fn from(op: OpArg) -> StackOp {
        match op {
            OpArg::Or => StackOp::Or,
            OpArg::Xor => StackOp::Xor,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::ContrastTable {
            k,
            n,
            format,
            show_transmissions,
        } => {
            if n > 12 {
                bail!("contrast tables support n <= 12, got n={n}");
            }
            cmd_contrast_table(scheme(k, n)?, format, show_transmissions)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Corrigendum { format } => {
            cmd_corrigendum(format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Encode {
            secret,
            k,
            n,
            policy,
            seed,
            out,
            ascii,
        } => {
            let scheme = scheme(k, n)?;
            cmd_encode(&secret, parse_policy(&policy, scheme)?, seed, &out, ascii)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decode {
            op,
            out,
            secret,
            shares,
            ascii,
        } => {
            cmd_decode(op.into(), &out, secret.as_deref(), &shares, ascii)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            k,
            n,
            trials,
            seed,
            json,
        } => cmd_verify(scheme(k, n)?, trials, seed, json),
    }
}

fn scheme(k: u32, n: u32) -> Result<SchemeParams> {
    Ok(SchemeParams::new(k, n)?)
}

fn parse_policy(text: &str, scheme: SchemeParams) -> Result<EncodingPolicy> {
    if text == "averaged" {
        return Ok(EncodingPolicy::averaged(scheme));
    }
    let j = text
        .strip_prefix("fixed:")
        .and_then(|j| j.parse().ok())
        .ok_or_else(|| anyhow!("policy must be \"averaged\" or \"fixed:<j>\", got {text:?}"))?;
    Ok(EncodingPolicy::fixed(scheme, j)?)
}

fn enum_cap() -> u32 {
    std::env::var("RGVSS_ENUM_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(oracle::DEFAULT_ENUM_CAP)
}

fn cmd_contrast_table(
    scheme: SchemeParams,
    format: OutputFormat,
    show_transmissions: bool,
) -> Result<()> {
    let rows = analytic::contrast_table(scheme)?;
    match format {
        OutputFormat::Json => {
            let entries: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut entry = serde_json::json!({
                        "t": row.t,
                        "alpha_or": ratio_json(&row.alpha_or),
                        "alpha_xor": ratio_json(&row.alpha_xor),
                    });
                    if show_transmissions {
                        entry["t0_or"] = ratio_json(&row.t0_or);
                        entry["t1_or"] = ratio_json(&row.t1_or);
                        entry["t0_xor"] = ratio_json(&row.t0_xor);
                        entry["t1_xor"] = ratio_json(&row.t1_xor);
                    }
                    entry
                })
                .collect();
            let report = serde_json::json!({
                "scheme": { "k": scheme.k(), "n": scheme.n() },
                "rows": entries,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        OutputFormat::Csv => {
            let mut headers = vec!["t", "alpha_or", "alpha_xor"];
            if show_transmissions {
                headers.extend(["t0_or", "t1_or", "t0_xor", "t1_xor"]);
            }
            headers.extend(["alpha_or_decimal", "alpha_xor_decimal"]);
            let mut table = Table::new(&headers);
            for row in &rows {
                let mut cells = vec![
                    row.t.to_string(),
                    row.alpha_or.to_string(),
                    row.alpha_xor.to_string(),
                ];
                if show_transmissions {
                    for t in [&row.t0_or, &row.t1_or, &row.t0_xor, &row.t1_xor] {
                        cells.push(t.to_string());
                    }
                }
                cells.push(row.alpha_or.to_decimal(6));
                cells.push(row.alpha_xor.to_decimal(6));
                table.push(cells);
            }
            print!("{}", table.to_csv());
        }
        OutputFormat::Markdown => {
            println!("Contrast for the ({},{}) scheme\n", scheme.k(), scheme.n());
            let mut headers = vec!["t", "alpha_OR", "alpha_XOR"];
            if show_transmissions {
                headers.extend(["T_OR(s=0)", "T_OR(s=1)", "T_XOR(s=0)", "T_XOR(s=1)"]);
            }
            let mut table = Table::new(&headers);
            for row in &rows {
                let mut cells = vec![
                    row.t.to_string(),
                    ratio_cell(&row.alpha_or),
                    ratio_cell(&row.alpha_xor),
                ];
                if show_transmissions {
                    for t in [&row.t0_or, &row.t1_or, &row.t0_xor, &row.t1_xor] {
                        cells.push(ratio_cell(t));
                    }
                }
                table.push(cells);
            }
            print!("{}", table.to_markdown());
        }
    }
    Ok(())
}

fn cmd_corrigendum(format: OutputFormat) -> Result<()> {
    let rows = analytic::corrigendum_report()?;
    match format {
        OutputFormat::Json => {
            let entries: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "scheme": { "k": row.scheme.k(), "n": row.scheme.n() },
                        "t": row.t,
                        "claimed_or": ratio_json(&row.claimed_or),
                        "claimed_xor": ratio_json(&row.claimed_xor),
                        "corrected_or": ratio_json(&row.corrected_or),
                        "corrected_xor": ratio_json(&row.corrected_xor),
                        "or_match": row.or_match,
                        "xor_match": row.xor_match,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&entries)?);
        }
        OutputFormat::Csv | OutputFormat::Markdown => {
            let mut table = Table::new(&[
                "scheme",
                "t",
                "claimed_or",
                "claimed_xor",
                "corrected_or",
                "corrected_xor",
                "or_match",
                "xor_match",
            ]);
            for row in &rows {
                table.push(vec![
                    row.scheme.to_string(),
                    row.t.to_string(),
                    row.claimed_or.to_string(),
                    row.claimed_xor.to_string(),
                    row.corrected_or.to_string(),
                    row.corrected_xor.to_string(),
                    row.or_match.to_string(),
                    row.xor_match.to_string(),
                ]);
            }
            if format == OutputFormat::Csv {
                print!("{}", table.to_csv());
            } else {
                print!("{}", table.to_markdown());
                let mismatching = rows.iter().filter(|r| !r.or_match || !r.xor_match).count();
                println!("\n{mismatching} of {} rows have at least one corrected value", rows.len());
            }
        }
    }
    Ok(())
}

fn cmd_encode(
    secret_path: &Path,
    policy: EncodingPolicy,
    seed: u64,
    out_dir: &Path,
    ascii: bool,
) -> Result<()> {
    let secret = pbm::read_pbm_file(secret_path)
        .with_context(|| format!("reading secret {}", secret_path.display()))?;
    let set = imaging::encode_image(&secret, &policy, seed)?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let stem = secret_path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("secret path has no usable file stem"))?;
    let mut share_names = Vec::new();
    for (index, share) in set.shares.iter().enumerate() {
        let name = imaging::share_file_name(stem, index + 1);
        pbm::write_pbm_file(out_dir.join(&name), share, ascii)?;
        share_names.push(name);
    }
    let manifest = serde_json::json!({
        "scheme": { "k": policy.scheme().k(), "n": policy.scheme().n() },
        "policy": policy.to_string(),
        "seed": seed,
        "width": secret.width(),
        "height": secret.height(),
        "shares": share_names,
    });
    let manifest_path = out_dir.join(format!("{stem}.manifest.json"));
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    println!(
        "wrote {} shares and {} to {}",
        set.shares.len(),
        manifest_path.file_name().unwrap().to_string_lossy(),
        out_dir.display()
    );
    Ok(())
}

fn cmd_decode(
    op: StackOp,
    out: &Path,
    secret: Option<&Path>,
    share_paths: &[PathBuf],
    ascii: bool,
) -> Result<()> {
    let shares = share_paths
        .iter()
        .map(|path| {
            pbm::read_pbm_file(path).with_context(|| format!("reading share {}", path.display()))
        })
        .collect::<Result<Vec<Bitmap>>>()?;
    let refs: Vec<&Bitmap> = shares.iter().collect();
    let recon = imaging::reconstruct(&refs, op)?;
    pbm::write_pbm_file(out, &recon, ascii)?;
    println!("wrote {} ({} shares, {op})", out.display(), shares.len());
    if let Some(secret_path) = secret {
        let secret = pbm::read_pbm_file(secret_path)
            .with_context(|| format!("reading secret {}", secret_path.display()))?;
        for (region, label) in [(PixelColor::White, "white"), (PixelColor::Black, "black")] {
            let t = imaging::measure_transmission(&recon, &secret, region)?;
            println!(
                "region {} ({label}) transmission: {} ({})",
                region.bit(),
                t.to_decimal(6),
                t
            );
        }
    }
    Ok(())
}

fn cmd_verify(scheme: SchemeParams, trials: u64, seed: u64, json: bool) -> Result<ExitCode> {
    let report = oracle::verify_scheme(scheme, trials, seed, 5.0, enum_cap())?;
    if json {
        let entries: Vec<serde_json::Value> = report
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "t": e.t,
                    "op": e.op.to_string(),
                    "s": e.s.bit(),
                    "closed_form": ratio_json(&e.closed_form),
                    "enumerated": ratio_json(&e.enumerated),
                    "mc_estimate": e.mc.estimate,
                    "mc_stderr": e.mc.stderr,
                    "mc_deviation_sigmas": e.mc_deviation_sigmas,
                    "exact_match": e.exact_match,
                    "passed": e.passed,
                })
            })
            .collect();
        let value = serde_json::json!({
            "scheme": { "k": scheme.k(), "n": scheme.n() },
            "trials": trials,
            "seed": seed,
            "sigma_limit": report.sigma_limit,
            "entries": entries,
            "all_passed": report.all_passed(),
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!(
            "verifying {scheme} with {trials} trials, seed {seed}, sigma limit {}",
            report.sigma_limit
        );
        for e in &report.entries {
            println!(
                "t={} {:>3} s={}: closed {} enum {} mc {:.6} ({:.2} sigma) {}",
                e.t,
                e.op.to_string(),
                e.s.bit(),
                e.closed_form,
                e.enumerated,
                e.mc.estimate,
                e.mc_deviation_sigmas,
                if e.passed { "ok" } else { "FAIL" }
            );
        }
        println!("{}", if report.all_passed() { "PASS" } else { "FAIL" });
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
