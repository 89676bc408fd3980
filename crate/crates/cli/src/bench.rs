use std::io::Write;
use std::time::Instant;

use clap::{Args, ValueEnum};
use csv::StringRecord;
use sparsedil::codec::sk_decode_extended;
use sparsedil::meter::OpCounts;
use sparsedil::ring::PolyVec;
use sparsedil::sampling::sample_in_ball;
use sparsedil::scheme::{keygen_metered, sign_traced, verify_metered, Backend, SignOptions};
use sparsedil::sparse::{encode_challenge, sparse_mul_branchless_metered};
use sparsedil::Level;

use crate::{BackendArg, CliResult, Failure, LevelArg};

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "3")]
    level: LevelArg,
    /// Comma-separated signing backends.
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["ntt", "sparse", "sparse-fused"])]
    backends: Vec<BackendArg>,
    /// Timed calls per row.
    #[arg(long, default_value_t = 1000)]
    iterations: u32,
    /// Untimed calls before each row.
    #[arg(long, default_value_t = 10)]
    warmup: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

/// One (procedure, backend) measurement; counters are means per call.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub level: u8,
    pub procedure: String,
    pub backend: String,
    pub iterations: u32,
    pub median_us: f64,
    pub mean_us: f64,
    /// Time-stamp counter ticks, where the CPU has one.
    pub median_cycles: Option<u64>,
    pub modmul: f64,
    pub cs_modmul: f64,
    pub lane_steps: f64,
    pub xof_bytes: f64,
    pub restarts: f64,
}

pub const HEADER: [&str; 12] = [
    "level",
    "procedure",
    "backend",
    "iterations",
    "median_us",
    "mean_us",
    "median_cycles",
    "modmul",
    "cs_modmul",
    "lane_steps",
    "xof_bytes",
    "restarts",
];

impl BenchRow {
    pub fn to_record(&self) -> StringRecord {
        StringRecord::from(vec![
            self.level.to_string(),
            self.procedure.clone(),
            self.backend.clone(),
            self.iterations.to_string(),
            format!("{:.3}", self.median_us),
            format!("{:.3}", self.mean_us),
            self.median_cycles.map(|c| c.to_string()).unwrap_or_default(),
            format!("{:.1}", self.modmul),
            format!("{:.1}", self.cs_modmul),
            format!("{:.1}", self.lane_steps),
            format!("{:.1}", self.xof_bytes),
            format!("{:.4}", self.restarts),
        ])
    }

    // the inverse of to_record, kept alongside it so the format can't drift
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_record(r: &StringRecord) -> Result<Self, String> {
        if r.len() != HEADER.len() {
            return Err(format!("expected {} fields, found {}", HEADER.len(), r.len()));
        }
        let num = |i: usize| -> Result<f64, String> {
            r[i].parse().map_err(|e| format!("{}: {e}", HEADER[i]))
        };
        Ok(Self {
            level: r[0].parse().map_err(|e| format!("level: {e}"))?,
            procedure: r[1].to_string(),
            backend: r[2].to_string(),
            iterations: r[3].parse().map_err(|e| format!("iterations: {e}"))?,
            median_us: num(4)?,
            mean_us: num(5)?,
            median_cycles: match &r[6] {
                "" => None,
                c => Some(c.parse().map_err(|e| format!("median_cycles: {e}"))?),
            },
            modmul: num(7)?,
            cs_modmul: num(8)?,
            lane_steps: num(9)?,
            xof_bytes: num(10)?,
            restarts: num(11)?,
        })
    }
}

#[cfg(target_arch = "x86_64")]
fn ticks() -> Option<u64> {
    #[allow(unused_unsafe)]
    // SAFETY: rdtsc has no preconditions on x86_64.
    Some(unsafe { core::arch::x86_64::_rdtsc() })
}

#[cfg(not(target_arch = "x86_64"))]
fn ticks() -> Option<u64> {
    None
}

#[derive(Default)]
struct Tally {
    total: OpCounts,
    cs: OpCounts,
    restarts: u64,
}

/// Times `iterations` calls of `f(i)`; `f` adds its own counters.
fn measure(
    level: Level,
    procedure: &str,
    backend: &str,
    iterations: u32,
    warmup: u32,
    mut f: impl FnMut(u32, &mut Tally),
) -> BenchRow {
    let mut scratch = Tally::default();
    for i in 0..warmup {
        f(u32::MAX - i, &mut scratch);
    }
    let mut tally = Tally::default();
    let mut us = Vec::with_capacity(iterations as usize);
    let mut cycles = Vec::with_capacity(iterations as usize);
    for i in 0..iterations {
        let (t0, c0) = (Instant::now(), ticks());
        f(i, &mut tally);
        let c1 = ticks();
        us.push(t0.elapsed().as_secs_f64() * 1e6);
        if let (Some(a), Some(b)) = (c0, c1) {
            cycles.push(b.wrapping_sub(a));
        }
    }
    let n = f64::from(iterations.max(1));
    us.sort_by(f64::total_cmp);
    cycles.sort_unstable();
    BenchRow {
        level: level.number(),
        procedure: procedure.into(),
        backend: backend.into(),
        iterations,
        median_us: us.get(us.len() / 2).copied().unwrap_or(0.0),
        mean_us: us.iter().sum::<f64>() / n,
        median_cycles: cycles.get(cycles.len() / 2).copied(),
        modmul: tally.total.modmul as f64 / n,
        cs_modmul: tally.cs.modmul as f64 / n,
        lane_steps: tally.total.lane_steps as f64 / n,
        xof_bytes: tally.total.xof_bytes as f64 / n,
        restarts: tally.restarts as f64 / n,
    }
}

pub fn rows(level: Level, backends: &[Backend], iterations: u32, warmup: u32) -> Result<Vec<BenchRow>, Failure> {
    let p = level.params();
    let (pk, sk) = keygen_metered(level, &[7; 32], &mut ());
    let msg = |i: u32| i.to_le_bytes();
    let mut out = Vec::new();

    out.push(measure(level, "keygen", "-", iterations, warmup, |i, t| {
        let mut seed = [7u8; 32];
        seed[..4].copy_from_slice(&i.to_le_bytes());
        let mut ops = OpCounts::default();
        std::hint::black_box(keygen_metered(level, &seed, &mut ops));
        t.total += ops;
    }));

    let mut sigs = Vec::with_capacity(iterations as usize);
    for &b in backends {
        let opts = SignOptions::new(b);
        let mut failure = None;
        let row = measure(level, "sign", b.name(), iterations, warmup, |i, t| {
            match sign_traced(&sk, &msg(i), &opts) {
                Ok((sig, trace)) => {
                    t.total += trace.total_ops();
                    t.cs += trace.cs_ops;
                    t.restarts += u64::from(trace.iterations - 1);
                    if sigs.len() < iterations as usize && i < iterations {
                        sigs.push(sig);
                    }
                }
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e.into());
        }
        out.push(row);
    }

    if !sigs.is_empty() {
        out.push(measure(level, "verify", "-", iterations, warmup, |i, t| {
            let j = (i % iterations) as usize % sigs.len();
            let mut ops = OpCounts::default();
            assert!(verify_metered(&pk, &msg(j as u32), &sigs[j], &mut ops));
            t.total += ops;
        }));
    }

    // the challenge products alone, for every secret polynomial
    let secret = sk_decode_extended(&sk)?;
    let ext: Vec<_> = secret.s1_ext.iter().chain(&secret.s2_ext).collect();
    let s_hat = PolyVec::from(ext.iter().map(|e| e.secret().to_poly()).collect::<Vec<_>>()).ntt()?;
    let challenge = |i: u32| sample_in_ball(&i.to_le_bytes(), p.tau);
    for &b in backends.iter().filter(|&&b| b != Backend::SparseFused) {
        let row = measure(level, "cs-mul", b.name(), iterations, warmup, |i, t| {
            let c = challenge(i);
            let mut ops = OpCounts::default();
            match b {
                Backend::Ntt => {
                    let c_hat = c.to_poly().ntt_metered(&mut ops).expect("coefficient domain");
                    for s in s_hat.iter() {
                        let prod = c_hat.pointwise_mul_metered(s, &mut ops).expect("ntt domain");
                        std::hint::black_box(prod.inv_ntt_metered(&mut ops).expect("ntt domain"));
                    }
                }
                _ => {
                    let idx = encode_challenge(&c, p.tau).expect("challenge in ball");
                    for e in &ext {
                        std::hint::black_box(sparse_mul_branchless_metered(&idx, e, &mut ops));
                    }
                }
            }
            t.total += ops;
            t.cs += ops;
        });
        out.push(row);
    }
    Ok(out)
}

pub fn run(args: &BenchArgs) -> CliResult {
    if args.iterations == 0 {
        return Err(Failure::usage("--iterations must be positive"));
    }
    let mut backends: Vec<Backend> = args.backends.iter().map(|&b| b.into()).collect();
    backends.dedup();
    let level: Level = args.level.into();
    let rows = rows(level, &backends, args.iterations, args.warmup)?;
    let stdout = std::io::stdout();
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(stdout.lock());
            w.write_record(HEADER).map_err(|e| Failure::usage(e.to_string()))?;
            for r in &rows {
                w.write_record(&r.to_record()).map_err(|e| Failure::usage(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Text => {
            let mut out = stdout.lock();
            writeln!(
                out,
                "level {} — {} calls per row, counters are means per call",
                level.number(),
                args.iterations
            )?;
            writeln!(
                out,
                "{:<8} {:<13} {:>11} {:>11} {:>12} {:>10} {:>10} {:>10} {:>9} {:>8}",
                "proc", "backend", "median µs", "mean µs", "cycles", "modmul", "cs_modmul", "lanes", "xof B", "restarts"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:<8} {:<13} {:>11.2} {:>11.2} {:>12} {:>10.0} {:>10.0} {:>10.0} {:>9.0} {:>8.3}",
                    r.procedure,
                    r.backend,
                    r.median_us,
                    r.mean_us,
                    r.median_cycles.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
                    r.modmul,
                    r.cs_modmul,
                    r.lane_steps,
                    r.xof_bytes,
                    r.restarts
                )?;
            }
        }
    }
    Ok(0)
}
