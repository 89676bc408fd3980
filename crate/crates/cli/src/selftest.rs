//! Cross-checks of every arithmetic route, runnable on any build.

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsedil::codec::{pack_eta, pack_t0, pack_t1, pack_z, unpack_eta, unpack_t0, unpack_t1, unpack_z};
use sparsedil::params::{ParameterSet, N, Q};
use sparsedil::ring::{schoolbook_negacyclic, Poly};
use sparsedil::rounding::{decompose, high_bits, make_hint, power2round, use_hint};
use sparsedil::scheme::{keygen, sign, verify, Backend, SignOptions};
use sparsedil::sparse::swar::{pack_lanes, packed_add_lanes, packed_sub_lanes, unpack_lanes};
use sparsedil::sparse::{encode_challenge, exact_product, sparse_mul_branchless, sparse_mul_indexed, ExtendedSecret, SmallPoly};
use sparsedil::Level;

use crate::{CliResult, LevelArg, EXIT_SELFTEST};

#[derive(Args)]
pub struct SelftestArgs {
    /// Only this level (default: all).
    #[arg(long, value_enum)]
    level: Option<LevelArg>,
    /// Random trials per check and level.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Corrupt one stage on purpose to prove the checks can fail.
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Fault {
    Branchless,
    Ntt,
    Swar,
    Codec,
    Hint,
}

type Outcome = Result<String, String>;

struct Ctx {
    trials: u64,
    rng: ChaCha8Rng,
    fault: Option<Fault>,
}

fn random_challenge(rng: &mut impl Rng, tau: usize) -> SmallPoly {
    let mut c = SmallPoly::zero();
    let mut placed = 0;
    while placed < tau {
        let i = rng.gen_range(0..N);
        if c.coeffs[i] == 0 {
            c.coeffs[i] = if rng.gen() { 1 } else { -1 };
            placed += 1;
        }
    }
    c
}

fn random_secret(rng: &mut impl Rng, eta: i32) -> SmallPoly {
    let mut s = SmallPoly::zero();
    s.coeffs.iter_mut().for_each(|c| *c = rng.gen_range(-eta..=eta) as i8);
    s
}

fn swar_lanes(ctx: &mut Ctx) -> Outcome {
    let corrupt = |w: u32| if ctx.fault == Some(Fault::Swar) { w ^ 0x100 } else { w };
    for a in i8::MIN..=i8::MAX {
        for b in i8::MIN..=i8::MAX {
            let (x, y) = (pack_lanes([a; 4]), pack_lanes([b; 4]));
            if unpack_lanes(corrupt(packed_add_lanes(x, y))) != [a.wrapping_add(b); 4]
                || unpack_lanes(packed_sub_lanes(x, y)) != [a.wrapping_sub(b); 4]
            {
                return Err(format!("lane mismatch at ({a}, {b})"));
            }
        }
    }
    for _ in 0..ctx.trials {
        let (x, y): (u32, u32) = (ctx.rng.gen(), ctx.rng.gen());
        let (xl, yl) = (unpack_lanes(x), unpack_lanes(y));
        let add: [i8; 4] = core::array::from_fn(|i| xl[i].wrapping_add(yl[i]));
        let sub: [i8; 4] = core::array::from_fn(|i| xl[i].wrapping_sub(yl[i]));
        if unpack_lanes(packed_add_lanes(x, y)) != add || unpack_lanes(packed_sub_lanes(x, y)) != sub {
            return Err(format!("word mismatch at ({x:#010x}, {y:#010x})"));
        }
    }
    Ok(format!("65536 lane pairs, {} random words", ctx.trials))
}

fn oracle_chain(ctx: &mut Ctx, p: &ParameterSet) -> Outcome {
    let mut wraps = 0;
    for t in 0..ctx.trials {
        let c = random_challenge(&mut ctx.rng, p.tau);
        let s = random_secret(&mut ctx.rng, p.eta);
        let reference = schoolbook_negacyclic(&c.to_poly(), &s.to_poly());
        let mut ntt = c
            .to_poly()
            .ntt()
            .and_then(|a| a.pointwise_mul(&s.to_poly().ntt()?))
            .and_then(|a| a.inv_ntt())
            .map_err(|e| e.to_string())?;
        if ctx.fault == Some(Fault::Ntt) {
            ntt.coeffs[3] = (ntt.coeffs[3] + 1) % Q;
        }
        if ntt != reference {
            return Err(format!("ntt product differs from schoolbook at trial {t}"));
        }
        let indexed = sparse_mul_indexed(&c, &s.to_poly()).map_err(|e| e.to_string())?;
        if indexed != reference {
            return Err(format!("indexed product differs from schoolbook at trial {t}"));
        }
        let idx = encode_challenge(&c, p.tau).map_err(|e| e.to_string())?;
        let ext = ExtendedSecret::new(&s, p.eta).map_err(|e| e.to_string())?;
        let mut fast = sparse_mul_branchless(&idx, &ext);
        if ctx.fault == Some(Fault::Branchless) {
            fast.coeffs[17] = fast.coeffs[17].wrapping_add(1);
        }
        let exact = exact_product(&idx, &ext);
        if Poly::from_coeffs(exact).reduce() != indexed {
            return Err(format!("exact lane product differs from indexed at trial {t}"));
        }
        // 8-bit lanes must agree with the exact product modulo 256
        if fast.coeffs.iter().zip(&exact).any(|(&f, &e)| f != e as i8) {
            return Err(format!("branchless product differs from indexed at trial {t}"));
        }
        wraps += fast.wrapped_lanes(&exact);
    }
    Ok(format!(
        "{} products: schoolbook = ntt = indexed = branchless ({wraps} 8-bit wraps)",
        ctx.trials
    ))
}

fn codecs(ctx: &mut Ctx, p: &ParameterSet) -> Outcome {
    let rng = &mut ctx.rng;
    for t in 0..ctx.trials {
        let t1 = Poly::from_coeffs(core::array::from_fn(|_| rng.gen_range(0..1024)));
        let t0 = Poly::from_coeffs(core::array::from_fn(|_| rng.gen_range(-4095..=4096)));
        let z = Poly::from_coeffs(core::array::from_fn(|_| rng.gen_range(1 - p.gamma1..=p.gamma1)));
        let s = random_secret(rng, p.eta);
        let mut z_bytes = pack_z(&z, p).map_err(|e| e.to_string())?;
        if ctx.fault == Some(Fault::Codec) {
            z_bytes[0] ^= 1;
        }
        let ok = unpack_t1(&pack_t1(&t1).map_err(|e| e.to_string())?).ok() == Some(t1)
            && unpack_t0(&pack_t0(&t0).map_err(|e| e.to_string())?).ok() == Some(t0)
            && unpack_z(&z_bytes, p).ok() == Some(z)
            && unpack_eta(&pack_eta(&s, p).map_err(|e| e.to_string())?, p).ok() == Some(s);
        if !ok {
            return Err(format!("codec roundtrip failed at trial {t}"));
        }
    }
    Ok(format!("{} roundtrips each of t1, t0, z, eta", ctx.trials))
}

fn rounding(ctx: &mut Ctx, p: &ParameterSet) -> Outcome {
    let alpha = 2 * p.gamma2;
    for _ in 0..ctx.trials {
        let r = ctx.rng.gen_range(0..Q);
        let (r1, r0) = power2round(r);
        if (r1 << 13) + r0 != r || !(-(1 << 12) < r0 && r0 <= 1 << 12) {
            return Err(format!("power2round({r})"));
        }
        let (h1, l0) = decompose(r, alpha);
        if (h1 * alpha + l0 - r).rem_euclid(Q) != 0 {
            return Err(format!("decompose({r})"));
        }
        let z = ctx.rng.gen_range(-p.gamma2..=p.gamma2);
        let moved = (r + z).rem_euclid(Q);
        let mut hint = make_hint(-z, moved, alpha);
        if ctx.fault == Some(Fault::Hint) {
            hint = !hint;
        }
        if use_hint(hint, moved, alpha) != high_bits(r, alpha) {
            return Err(format!("hint recovery failed for r={r}, z={z}"));
        }
    }
    Ok(format!("{} samples: power2round, decompose, hint recovery", ctx.trials))
}

fn scheme_roundtrip(ctx: &mut Ctx, level: Level) -> Outcome {
    let rounds = (ctx.trials / 100).clamp(1, 10);
    let (pk, sk) = keygen(level, &ctx.rng.gen());
    for i in 0..rounds {
        let msg = i.to_le_bytes();
        let sigs: Vec<_> = Backend::ALL
            .iter()
            .map(|&b| sign(&sk, &msg, &SignOptions::new(b)).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        if sigs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("backends disagree on message {i}"));
        }
        if !verify(&pk, &msg, &sigs[0]) {
            return Err(format!("signature on message {i} does not verify"));
        }
    }
    Ok(format!("{rounds} messages, identical across ntt/sparse/sparse-fused, all verify"))
}

pub fn run(args: &SelftestArgs) -> CliResult {
    let levels: Vec<Level> = match args.level {
        Some(l) => vec![l.into()],
        None => Level::ALL.to_vec(),
    };
    let mut ctx = Ctx {
        trials: args.trials.max(1),
        rng: ChaCha8Rng::seed_from_u64(args.seed),
        fault: args.inject_fault,
    };
    println!("selftest: trials={} seed={}", ctx.trials, args.seed);
    let mut failures = Vec::new();
    let mut report = |name: String, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS {name:<24} {detail}"),
        Err(detail) => {
            println!("FAIL {name:<24} {detail}");
            failures.push(name);
        }
    };
    report("swar-lanes".into(), swar_lanes(&mut ctx));
    for level in levels {
        let p = level.params();
        let n = level.number();
        report(format!("oracle-chain level={n}"), oracle_chain(&mut ctx, p));
        report(format!("codec level={n}"), codecs(&mut ctx, p));
        report(format!("rounding level={n}"), rounding(&mut ctx, p));
        report(format!("sign-verify level={n}"), scheme_roundtrip(&mut ctx, level));
    }
    if failures.is_empty() {
        println!("selftest passed");
        Ok(0)
    } else {
        println!("selftest FAILED: {}", failures.join(", "));
        Ok(EXIT_SELFTEST)
    }
}
