//! Command-line front end: parse documents, run checks, print reports.
//!
//! Exit codes: 0 when every requested check passes, 1 when one fails, 2 on
//! usage, parse or internal errors.

mod commands;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopfgroup::report::ReportFormat;

#[derive(Parser, Debug)]
#[command(
    name = "hopfgroup",
    version,
    about = "Formal groups over Hopf algebras, checked exactly"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args, Debug)]
struct Named {
    /// Input document.
    file: PathBuf,
    /// Declaration to work on.
    #[arg(long)]
    name: String,
}

#[derive(Args, Debug)]
struct Checked {
    #[command(flatten)]
    target: Named,
    /// Weight cutoff (default: the declared trunc, or 6 for Hopf algebras).
    #[arg(long)]
    trunc: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a document and print its canonical form.
    Parse { file: PathBuf },
    /// Run a verifier.
    #[command(subcommand)]
    Check(Check),
    /// Functional inverse θ(x) of a formal group law series.
    Inverse(Named),
    /// The series Θ(x) of a formal group over a Hopf algebra.
    Theta(Named),
    /// The ordinary law (ε⊗ε)𝔉.
    Reduce(Named),
    /// Write the trivial extension of a law over a Hopf algebra.
    TrivialExtend {
        file: PathBuf,
        #[arg(long)]
        fgl: String,
        #[arg(long)]
        hopf: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the Hopf axioms of the extended algebra H[[x]].
    ExtendHopf(Named),
    /// The series 𝔊 with B_ij = μ(id⊗S)A_ij.
    Gseries(Named),
    /// Verify the compatibility of 𝔊 with the ε-reduced law.
    Gproperty(Named),
    /// Equations on an ansatz: extension constraints for a Hopf algebra,
    /// associativity constraints for a series.
    Constraints {
        #[command(flatten)]
        target: Named,
        #[arg(long)]
        max_degree: u32,
    },
    /// Gcd arithmetic of the Grassmannians Gr_{k,kl}.
    #[command(subcommand)]
    Fab(Fab),
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Hopf algebra axioms.
    Hopf(Checked),
    /// Formal group law axioms.
    Fgl(Checked),
    /// Conditions 1-3 of a formal group over a Hopf algebra.
    Hopffgl {
        #[command(flatten)]
        checked: Checked,
        /// Condition to leave out (repeatable).
        #[arg(long, value_enum)]
        skip: Vec<Condition>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Condition {
    #[value(name = "condition1", alias = "1")]
    Condition1,
    #[value(name = "condition2", alias = "2")]
    Condition2,
    #[value(name = "condition3", alias = "3")]
    Condition3,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ChainMode {
    Limit,
    Stable,
}

#[derive(Subcommand, Debug)]
enum Fab {
    /// Multiplier gcd(m,n)/gcd(k,l) of Gr_{k,kl} -> Gr_{m,mn} on π_2s.
    Multiplier { k: u64, l: u64, m: u64, n: u64 },
    /// Validate a chain as a limit sequence or a stable-equivalence chain.
    Chain {
        #[command(flatten)]
        target: Named,
        #[arg(long, value_enum)]
        mode: ChainMode,
        /// Required first pair K,L for stable mode (default: the chain's own).
        #[arg(long, value_parser = parse_pair)]
        from: Option<(u64, u64)>,
        /// Required last pair M,N for stable mode (default: the chain's own).
        #[arg(long, value_parser = parse_pair)]
        to: Option<(u64, u64)>,
    },
    /// Direct limit of Z -a1-> Z -a2-> ... for positive multipliers.
    Limit {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        multipliers: Vec<u64>,
    },
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or("expected K,L")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

/// What a command produced: text for stdout and the exit status.
pub struct Outcome {
    pub stdout: String,
    pub status: u8,
}

pub struct Output {
    pub format: ReportFormat,
    pub color: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output {
        format: match cli.format {
            Format::Text => ReportFormat::Text,
            Format::Machine => ReportFormat::Machine,
        },
        color: std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stdout().is_terminal(),
    };
    match commands::run(cli.command, &out) {
        Ok(o) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(o.stdout.as_bytes());
            ExitCode::from(o.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
