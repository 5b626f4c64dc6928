use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use khbeta::braid::{parse_braids, parse_inline, NamedBraid};
use khbeta::catalog;
use khbeta::frobenius::TheoryTag;
use khbeta::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "khbeta", version, about = "Khovanov-type homology and transverse invariants of braid closures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bigraded homology table (Kh, BN) or a chain-level summary (VT, BIG).
    Homology(Common),
    /// sl, c, c̄, ψ vanishing and s for each braid.
    Invariants(Common),
    /// Random transverse rewrites with β pushed through the chain maps;
    /// writes a JSON-lines trace.
    Verify(Common),
    /// The three c-simplicity conditions and pseudo-thinness per knot.
    CheckCSimple(Common),
    /// Invariants and c-simplicity together for every braid of a file.
    Batch(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Kh,
    Bn,
    Vt,
    Big,
}

impl TheoryArg {
    pub fn tag(self) -> TheoryTag {
        match self {
            TheoryArg::Kh => TheoryTag::Kh,
            TheoryArg::Bn => TheoryTag::Bn,
            TheoryArg::Vt => TheoryTag::Vt,
            TheoryArg::Big => TheoryTag::Big,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// A braid file, a catalog name, or an inline `n : letters` word.
    input: String,
    #[arg(long, value_enum, default_value = "bn")]
    theory: TheoryArg,
    /// Characteristic of the coefficient field.
    #[arg(long = "char", default_value_t = 3)]
    p: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    moves: usize,
    #[arg(long)]
    allow_negative: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Everything a command needs, validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub theory: TheoryTag,
    pub p: u32,
    pub format: Format,
    pub seed: u64,
    pub moves: usize,
    pub allow_negative: bool,
    pub braids: Vec<NamedBraid>,
}

/// Why the input could not be turned into braids; always a usage error.
fn load_input(input: &str) -> Result<Vec<NamedBraid>, String> {
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| format!("{input}: {e}"))?;
        return parse_braids(&text).map_err(|e| format!("{input}: {e}"));
    }
    if let Some(word) = catalog::lookup(input) {
        return Ok(vec![NamedBraid { name: input.to_string(), word }]);
    }
    if input.contains(':') {
        let word = parse_inline(input).map_err(|e| e.to_string())?;
        return Ok(vec![NamedBraid { name: input.trim().to_string(), word }]);
    }
    Err(format!("{input:?} is not a file, a catalog name or an inline braid"))
}

/// Failures that are the caller's fault exit with 2, the rest with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidBraid(_) | Error::NotPrime(_) | Error::UnsupportedTheory(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match cli.command {
        Command::Homology(c) => (commands::Cmd::Homology, c),
        Command::Invariants(c) => (commands::Cmd::Invariants, c),
        Command::Verify(c) => (commands::Cmd::Verify, c),
        Command::CheckCSimple(c) => (commands::Cmd::CheckCSimple, c),
        Command::Batch(c) => (commands::Cmd::Batch, c),
    };
    let braids = match load_input(&common.input) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if khbeta::frobenius::Theory::new(common.theory.tag(), common.p).is_err() {
        eprintln!("error: {} is not a prime", common.p);
        return ExitCode::from(2);
    }
    if common.p == 2 {
        eprintln!("warning: characteristic 2 is outside the odd-characteristic theory; s and c-simplicity are reported but not covered");
    }
    let cfg = RunConfig {
        theory: common.theory.tag(),
        p: common.p,
        format: common.format,
        seed: common.seed,
        moves: common.moves,
        allow_negative: common.allow_negative,
        braids,
    };
    let out = match commands::run(cmd, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &common.out {
        Some(path) => fs::write(path, &out.text),
        None => io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    for m in &out.messages {
        eprintln!("{m}");
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
