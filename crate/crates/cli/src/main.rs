//! Command-line surface over the torus-spectra library.
//!
//! Four subcommands: `spectrum` (extrapolated eigenvalues of the separated
//! problems per frequency), `verify` (the per-pair verification checklist),
//! `table` (closed-form functional data over the coprime family), and `lame`
//! (trigonometric Lamé levels at a given modulus). All share the output
//! plumbing: text, JSON, or CSV, written to stdout or a file.
//!
//! The JSON document always carries the four top-level keys `params`,
//! `checks`, `spectra`, `functionals` (empty where a command has nothing to
//! put there), and every number is rounded to the requested precision before
//! serialization so reruns diff cleanly.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid
//! parameters, 3 solver diagnostics, 4 output-file write failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use torus_spectra::spectrum::DEFAULT_GRID;
use torus_spectra::{
    admitted_spectrum, agm_ke, full_report, functional_value, lame_spectrum, modulus, Error,
    TorusLevel, TorusParams,
};

#[derive(Parser)]
#[command(name = "torus-spectra", version, about = "Spectra and extremal-functional certificates for minimal tori in the 5-sphere")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Decimal digits for every emitted number.
    #[arg(long, global = true, default_value_t = 12,
          value_parser = clap::value_parser!(u8).range(4..=17))]
    precision: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// First six eigenvalues the torus admits at each frequency l.
    Spectrum {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Highest frequency to solve (inclusive).
        #[arg(long, default_value_t = 4,
              value_parser = clap::value_parser!(u32).range(0..=64))]
        l_max: u32,
        /// Grid size: a power of two in [64, 16384]. Falls back to the
        /// SPECTRA_GRID_N environment variable, then to the library default.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Eigenvalue-count, coordinate-eigenvalue, and non-maximality checks.
    Verify {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Acceptance band around the expected values.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Functional values and margins for every coprime pair with m+n bounded.
    Table {
        /// Largest m+n to include.
        #[arg(long, default_value_t = 12,
              value_parser = clap::value_parser!(u32).range(2..=20))]
        sum_max: u32,
    },
    /// Trigonometric Lamé levels h_0.. at modulus k.
    Lame {
        #[arg(long)]
        k: f64,
        /// How many levels to compute.
        #[arg(long, default_value_t = 5,
              value_parser = clap::value_parser!(u8).range(1..=12))]
        levels: u8,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    let prec = cli.precision as usize;
    let outcome = match cli.command {
        Command::Spectrum { m, n, l_max, grid } => cmd_spectrum(cli.format, prec, m, n, l_max, grid),
        Command::Verify { m, n, tol } => cmd_verify(cli.format, prec, m, n, tol),
        Command::Table { sum_max } => cmd_table(cli.format, prec, sum_max),
        Command::Lame { k, levels } => cmd_lame(cli.format, prec, k, levels as usize),
    };
    match outcome {
        Ok((text, code)) => match deliver(&text, &cli.out) {
            Ok(()) => code,
            Err(err) => {
                eprintln!("error: cannot write output: {err}");
                4
            }
        },
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::InvalidInput(_) => 2,
                _ => 3,
            }
        }
    }
}

fn deliver(text: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Grid resolution order: `--grid` flag, then SPECTRA_GRID_N, then default.
/// Whichever source supplies the value must name a power of two in
/// [64, 16384].
fn resolve_grid(flag: Option<usize>) -> Result<usize, Error> {
    let (source, text) = match flag {
        Some(g) => ("--grid", g.to_string()),
        None => match std::env::var("SPECTRA_GRID_N") {
            Ok(s) => ("SPECTRA_GRID_N", s),
            Err(std::env::VarError::NotPresent) => return Ok(DEFAULT_GRID),
            Err(std::env::VarError::NotUnicode(_)) => ("SPECTRA_GRID_N", String::new()),
        },
    };
    let value: usize = text
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{source} must be an integer, got {text:?}")))?;
    if !value.is_power_of_two() || !(64..=16384).contains(&value) {
        return Err(Error::InvalidInput(format!(
            "{source} must be a power of two in [64, 16384], got {value}"
        )));
    }
    Ok(value)
}

/// Fixed-point rendering at the configured precision. Values that round to
/// zero lose their sign so reruns straddling ±0 diff cleanly.
fn fnum(v: f64, prec: usize) -> String {
    let s = format!("{v:.prec$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// The same rounding, landed back in a JSON number.
fn jnum(v: f64, prec: usize) -> Value {
    match fnum(v, prec).parse::<f64>() {
        Ok(r) => json!(r),
        Err(_) => Value::Null, // non-finite input
    }
}

fn envelope(params: Value, checks: Value, spectra: Value, functionals: Value) -> String {
    let doc = json!({
        "params": params,
        "checks": checks,
        "spectra": spectra,
        "functionals": functionals,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn flavor_tag(level: &TorusLevel) -> String {
    let suffix = if level.merged { "-merged" } else { "" };
    format!("{}{}", level.flavor.label(), suffix)
}

fn cmd_spectrum(
    format: Format,
    prec: usize,
    m: u32,
    n: u32,
    l_max: u32,
    grid_flag: Option<usize>,
) -> Result<(String, u8), Error> {
    let params = TorusParams::new(m, n)?;
    let grid = resolve_grid(grid_flag)?;
    let mut rows = Vec::new();
    for l in 0..=l_max {
        let levels = admitted_spectrum(params, l, 6, grid)?;
        for (i, level) in levels.iter().take(6).enumerate() {
            rows.push((l, i, level.lambda, level.zeros, flavor_tag(level)));
        }
    }

    let text = match format {
        Format::Csv => {
            let mut s = String::from("l,i,lambda,zeros,flavor\n");
            for (l, i, lambda, zeros, flavor) in &rows {
                s.push_str(&format!("{l},{i},{},{zeros},{flavor}\n", fnum(*lambda, prec)));
            }
            s
        }
        Format::Json => envelope(
            json!({ "m": m, "n": n, "l_max": l_max, "grid": grid }),
            json!([]),
            Value::Array(
                rows.iter()
                    .map(|(l, i, lambda, zeros, flavor)| {
                        json!({
                            "l": l, "i": i,
                            "lambda": jnum(*lambda, prec),
                            "zeros": zeros,
                            "flavor": flavor,
                        })
                    })
                    .collect(),
            ),
            json!([]),
        ),
        Format::Text => {
            let mut s = format!(
                "spectrum of ({m}, {n}): frequencies 0..={l_max}, grid {grid}\n\
                 {:>3} {:>3}  {:>width$}  {:>5}  flavor\n",
                "l",
                "i",
                "lambda",
                "zeros",
                width = prec + 6
            );
            for (l, i, lambda, zeros, flavor) in &rows {
                s.push_str(&format!(
                    "{l:>3} {i:>3}  {:>width$}  {zeros:>5}  {flavor}\n",
                    fnum(*lambda, prec),
                    width = prec + 6
                ));
            }
            s
        }
    };
    Ok((text, 0))
}

fn cmd_verify(format: Format, prec: usize, m: u32, n: u32, tol: f64) -> Result<(String, u8), Error> {
    let params = TorusParams::new(m, n)?;
    let report = full_report(params, tol)?;
    let code = if report.overall { 0 } else { 1 };

    let text = match format {
        Format::Csv => {
            let mut s = String::from("claim,status,margin,tolerance,detail\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.claim,
                    c.status.label(),
                    fnum(c.margin, prec),
                    fnum(c.tolerance, prec),
                    csv_quote(&c.detail),
                ));
            }
            s
        }
        Format::Json => envelope(
            json!({ "m": m, "n": n, "tol": tol }),
            Value::Array(
                report
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "claim": c.claim,
                            "status": c.status.label(),
                            "margin": jnum(c.margin, prec),
                            "tolerance": jnum(c.tolerance, prec),
                            "detail": c.detail,
                        })
                    })
                    .collect(),
            ),
            json!([]),
            json!([]),
        ),
        Format::Text => {
            let mut s = format!("verification of ({m}, {n}) at tolerance {tol:e}\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "  [{:<7}] {:<40} margin {:>18}  {}\n",
                    c.status.label(),
                    c.claim,
                    fnum(c.margin, prec),
                    c.detail,
                ));
            }
            s.push_str(&format!(
                "overall: {}\n",
                if report.overall { "pass" } else { "fail" }
            ));
            s
        }
    };
    Ok((text, code))
}

fn cmd_table(format: Format, prec: usize, sum_max: u32) -> Result<(String, u8), Error> {
    let mut rows = Vec::new();
    for n in 1..=(sum_max / 2) {
        for m in n..=(sum_max - n) {
            if gcd(m, n) != 1 {
                continue;
            }
            let params = TorusParams::new(m, n)?;
            let rep = functional_value(params)?;
            let k = modulus(params);
            let ke = agm_ke(k)?;
            rows.push((params, rep, k, ke));
        }
    }

    let text = match format {
        Format::Csv => {
            let mut s =
                String::from("m,n,parity,index,k,K,E,area,Lambda_closed,Lambda_numeric,nonmax_margin\n");
            for (p, rep, k, ke) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    p.m(),
                    p.n(),
                    parity_tag(p),
                    rep.index,
                    fnum(*k, prec),
                    fnum(ke.k_first, prec),
                    fnum(ke.e_second, prec),
                    fnum(rep.lambda_closed / 2.0, prec),
                    fnum(rep.lambda_closed, prec),
                    fnum(rep.lambda_numeric, prec),
                    fnum(rep.nonmax_margin, prec),
                ));
            }
            s
        }
        Format::Json => envelope(
            json!({ "sum_max": sum_max }),
            json!([]),
            json!([]),
            Value::Array(
                rows.iter()
                    .map(|(p, rep, k, ke)| {
                        json!({
                            "m": p.m(), "n": p.n(),
                            "parity": parity_tag(p),
                            "index": rep.index,
                            "k": jnum(*k, prec),
                            "k_first": jnum(ke.k_first, prec),
                            "e_second": jnum(ke.e_second, prec),
                            "area": jnum(rep.lambda_closed / 2.0, prec),
                            "lambda_closed": jnum(rep.lambda_closed, prec),
                            "lambda_numeric": jnum(rep.lambda_numeric, prec),
                            "nonmax_margin": jnum(rep.nonmax_margin, prec),
                        })
                    })
                    .collect(),
            ),
        ),
        Format::Text => {
            let w = prec + 6;
            let mut s = format!(
                "functional table, coprime pairs with m + n <= {sum_max}\n\
                 {:>2} {:>2} {:>6} {:>5}  {:>w$}  {:>w$}  {:>w$}  {:>w$}  {:>w$}  {:>w$}\n",
                "m", "n", "parity", "index", "k", "K", "E", "Lambda_closed", "Lambda_numeric",
                "nonmax_margin",
            );
            for (p, rep, k, ke) in &rows {
                s.push_str(&format!(
                    "{:>2} {:>2} {:>6} {:>5}  {:>w$}  {:>w$}  {:>w$}  {:>w$}  {:>w$}  {:>w$}\n",
                    p.m(),
                    p.n(),
                    parity_tag(p),
                    rep.index,
                    fnum(*k, prec),
                    fnum(ke.k_first, prec),
                    fnum(ke.e_second, prec),
                    fnum(rep.lambda_closed, prec),
                    fnum(rep.lambda_numeric, prec),
                    fnum(rep.nonmax_margin, prec),
                ));
            }
            s
        }
    };
    Ok((text, 0))
}

fn cmd_lame(format: Format, prec: usize, k: f64, levels: usize) -> Result<(String, u8), Error> {
    let spectrum = lame_spectrum(k, levels)?;
    let h3_margin = (levels >= 4).then(|| (spectrum[3].h, spectrum[3].h - 2.0));

    let text = match format {
        Format::Csv => {
            let mut s = String::from("i,h,flavor,symmetry\n");
            for (i, level) in spectrum.iter().enumerate() {
                s.push_str(&format!(
                    "{i},{},{},{}\n",
                    fnum(level.h, prec),
                    level.flavor.label(),
                    level.symmetry.label(),
                ));
            }
            s
        }
        Format::Json => envelope(
            json!({ "k": k, "levels": levels }),
            json!([]),
            Value::Array(
                spectrum
                    .iter()
                    .enumerate()
                    .map(|(i, level)| {
                        json!({
                            "i": i,
                            "h": jnum(level.h, prec),
                            "flavor": level.flavor.label(),
                            "symmetry": level.symmetry.label(),
                        })
                    })
                    .collect(),
            ),
            match h3_margin {
                Some((h3, margin)) => json!([{
                    "h3": jnum(h3, prec),
                    "h3_margin": jnum(margin, prec),
                }]),
                None => json!([]),
            },
        ),
        Format::Text => {
            let mut s = format!("trigonometric Lame levels at k = {k}\n");
            for (i, level) in spectrum.iter().enumerate() {
                s.push_str(&format!(
                    "  h[{i}] = {:>width$}  {:<12} {}\n",
                    fnum(level.h, prec),
                    level.flavor.label(),
                    level.symmetry.label(),
                    width = prec + 4
                ));
            }
            if let Some((h3, margin)) = h3_margin {
                s.push_str(&format!(
                    "h3 = {}, margin over 2 = {}\n",
                    fnum(h3, prec),
                    fnum(margin, prec)
                ));
            }
            s
        }
    };
    Ok((text, 0))
}

fn parity_tag(params: &TorusParams) -> &'static str {
    if params.mn_odd() {
        "odd"
    } else {
        "even"
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
