//! `sparsedil`: keys, signatures, self-test, overflow analysis and benchmarks.
//!
//! Exit codes: 0 success / signature accepted, 1 signature rejected,
//! 2 usage or input error, 3 self-test failure.

mod analyze;
mod bench;
mod io;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sparsedil::scheme::{self, Backend, SignOptions};
use sparsedil::{Level, PublicKeyBytes, SecretKeyBytes, SignatureBytes};

const EXIT_REJECT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

#[derive(Parser)]
#[command(name = "sparsedil", version, about = "Dilithium with branchless sparse challenge multiplication")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Sign a message (read from a file or stdin).
    Sign(SignArgs),
    /// Verify a signature; exits 0 on accept, 1 on reject.
    Verify(VerifyArgs),
    /// Cross-check every multiplication route, codec and rounding helper.
    Selftest(selftest::SelftestArgs),
    /// Time keygen/sign/verify per backend and report operation counts.
    Bench(bench::BenchArgs),
    /// Exact and Monte Carlo overflow probabilities of 8-bit c·s lanes.
    Analyze(analyze::AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "5")]
    Five,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::Two => Level::Two,
            LevelArg::Three => Level::Three,
            LevelArg::Five => Level::Five,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Ntt,
    Sparse,
    #[value(name = "sparse-fused", alias = "sparse_fused")]
    SparseFused,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Ntt => Backend::Ntt,
            BackendArg::Sparse => Backend::Sparse,
            BackendArg::SparseFused => Backend::SparseFused,
        }
    }
}

#[derive(Args)]
struct KeygenArgs {
    #[arg(long, value_enum, default_value = "2")]
    level: LevelArg,
    /// 32-byte seed as 64 hex digits; fresh OS randomness if omitted.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    pk: PathBuf,
    #[arg(long)]
    sk: PathBuf,
    /// Write keys as hex text instead of raw bytes.
    #[arg(long)]
    hex: bool,
}

#[derive(Args)]
struct SignArgs {
    #[arg(long)]
    sk: PathBuf,
    /// Message file; `-` or omitted reads stdin.
    #[arg(long)]
    message: Option<PathBuf>,
    /// Signature output; `-` or omitted writes stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to sparse-fused for levels 2/5 and ntt for level 3.
    #[arg(long, value_enum, env = "SPARSEDIL_BACKEND")]
    backend: Option<BackendArg>,
    /// Keys and signatures are hex text.
    #[arg(long)]
    hex: bool,
    /// Randomized signing (fresh ρ′) instead of deterministic.
    #[arg(long)]
    randomized: bool,
    /// Recompute 8-bit products in full width and report wrapped lanes.
    #[arg(long)]
    wrap_check: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    pk: PathBuf,
    /// Message file; `-` or omitted reads stdin.
    #[arg(long)]
    message: Option<PathBuf>,
    #[arg(long)]
    sig: PathBuf,
    #[arg(long)]
    hex: bool,
}

/// An error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<sparsedil::Error> for Failure {
    fn from(e: sparsedil::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

pub type CliResult = Result<u8, Failure>;

fn keygen(args: &KeygenArgs) -> CliResult {
    let seed = match &args.seed {
        Some(s) => io::parse_seed(s)?,
        None => {
            let mut seed = [0u8; 32];
            getrandom::getrandom(&mut seed).map_err(|e| Failure::usage(format!("no OS randomness: {e}")))?;
            seed
        }
    };
    let (pk, sk) = scheme::keygen(args.level.into(), &seed);
    io::write_files(&[(&args.pk, pk.as_bytes()), (&args.sk, sk.as_bytes())], args.hex)?;
    eprintln!(
        "{}: public key {} bytes -> {}, secret key {} bytes -> {}",
        pk.level(),
        pk.as_bytes().len(),
        args.pk.display(),
        sk.as_bytes().len(),
        args.sk.display()
    );
    Ok(0)
}

fn sign(args: &SignArgs) -> CliResult {
    let sk = SecretKeyBytes::from_bytes(&io::read_blob(&args.sk, args.hex)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.sk.display())))?;
    let msg = io::read_message(args.message.as_deref())?;
    let backend = args.backend.map(Backend::from).unwrap_or_else(|| Backend::default_for(sk.level()));
    let mut opts = SignOptions::new(backend);
    opts.wrap_check = args.wrap_check;
    if args.randomized {
        let mut rnd = [0u8; 64];
        getrandom::getrandom(&mut rnd).map_err(|e| Failure::usage(format!("no OS randomness: {e}")))?;
        opts.randomness = Some(rnd);
    }
    let (sig, trace) = scheme::sign_traced(&sk, &msg, &opts)?;
    io::write_output(args.out.as_deref(), sig.as_bytes(), args.hex)?;
    eprintln!(
        "{} {}: {} bytes after {} iteration(s)",
        sk.level(),
        backend,
        sig.as_bytes().len(),
        trace.iterations
    );
    if args.wrap_check && trace.wraps > 0 {
        eprintln!("warning: {} product lane(s) wrapped in 8 bits", trace.wraps);
    }
    Ok(0)
}

fn verify(args: &VerifyArgs) -> CliResult {
    let pk = PublicKeyBytes::from_bytes(&io::read_blob(&args.pk, args.hex)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.pk.display())))?;
    let msg = io::read_message(args.message.as_deref())?;
    let raw = io::read_blob(&args.sig, args.hex)?;
    let ok = match SignatureBytes::with_level(pk.level(), &raw) {
        Ok(sig) => scheme::verify(&pk, &msg, &sig),
        Err(e) => {
            eprintln!("malformed signature: {e}");
            false
        }
    };
    if ok {
        println!("accept");
        Ok(0)
    } else {
        println!("reject");
        Ok(EXIT_REJECT)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Keygen(a) => keygen(a),
        Command::Sign(a) => sign(a),
        Command::Verify(a) => verify(a),
        Command::Selftest(a) => selftest::run(a),
        Command::Bench(a) => bench::run(a),
        Command::Analyze(a) => analyze::run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
