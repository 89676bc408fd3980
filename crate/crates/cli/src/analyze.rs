use clap::Args;
use sparsedil::analysis::{exact_sum_distribution, monte_carlo_overflow, OverflowReport};

use crate::{CliResult, Failure};

#[derive(Args)]
pub struct AnalyzeArgs {
    #[arg(long, default_value_t = 4)]
    eta: u32,
    #[arg(long, default_value_t = 49)]
    tau: u32,
    /// Overflow threshold on |c·s| coefficients.
    #[arg(long, default_value_t = 128)]
    bound: u64,
    /// Polynomials per vector for the supplementary whole-vector figure.
    #[arg(long, default_value_t = 5)]
    polys: u32,
    /// Monte Carlo samples to cross-check the exact tail (0 = skip).
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

// small supports get their full table printed
const TABLE_LIMIT: usize = 41;

pub fn run(args: &AnalyzeArgs) -> CliResult {
    if args.eta == 0 || args.tau == 0 {
        return Err(Failure::usage("--eta and --tau must be positive"));
    }
    if args.eta > 127 || args.tau > 256 {
        return Err(Failure::usage("--eta must be <= 127 and --tau <= 256"));
    }
    let r = OverflowReport::new(args.eta, args.tau, args.bound, args.polys.max(1))?;
    let (b, max) = (args.bound, u64::from(args.eta) * u64::from(args.tau));
    println!("coefficient of c*s: sum of tau={} uniforms on [-{e}, {e}]", args.tau, e = args.eta);
    println!("  support                    [-{max}, {max}]");
    println!("  {:<26} {:.16e}", format!("P(|u| > {b})"), r.tail.value);
    println!("  {:<26} {:.16e}", format!("P(|u| >= {b})"), r.tail_at_least.value);
    println!("    exact                    {}", r.tail_at_least.decimal_string(24));
    println!("  P(u outside [-128, 127])   {:.16e}", r.int8_overflow.value);
    println!("per polynomial (256 coefficients), from P(|u| >= {b}):");
    println!("  exact                      {}", r.per_poly_exact.decimal_string(24));
    println!("  -expm1(256*log1p(-p))      {:.16e}", r.per_poly_stable);
    println!("  1 - (1 - p)^256            {:.16e}", r.per_poly_literal);
    println!("{:<28} {:.16e}", format!("per vector ({} polynomials)", r.polys), r.per_vector);
    if b >= max {
        println!("note: bound >= tau*eta, so |u| > bound is impossible");
    }

    let dist = exact_sum_distribution(args.eta, args.tau)?;
    if dist.iter().count() <= TABLE_LIMIT {
        println!("distribution ({} outcomes):", dist.total());
        for (v, count) in dist.iter() {
            println!("  {v:>4}  {count}");
        }
    }

    if args.trials > 0 {
        let hits = monte_carlo_overflow(args.eta, args.tau, b, args.trials, args.seed);
        println!(
            "monte carlo: {hits}/{} samples with |u| > {b} ({:.3e}; exact {:.3e})",
            args.trials,
            hits as f64 / args.trials as f64,
            r.tail.value
        );
    }
    Ok(0)
}
