//! Command-line front end. `run` returns the exit code and the text to print.

use std::f64::consts::PI;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::alien::{alien_derivation, alien_plus, ResurgentSeries};
use crate::borelfun::BorelFunction;
use crate::error::{Error, Result};
use crate::hyperlog::{l_numeric, MonomialFamily};
use crate::laplace::{hankel_laplace, lateral_jump, laplace_ray, RaySpec};
use crate::mould::{random_alternal, random_symmetral, Alphabet, Mould};
use crate::mzv::{verify_relation, wa_eval, ze_eval, MzvIndex, WaLetter, WaWord};
use crate::scalars::{parse_rational, ExactScalar};
use crate::series::{borel, gevrey_bound, FormalSeries};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Parser, Debug)]
#[command(name = "resurgence", about = "Moulds, alien calculus and Borel-Laplace summation")]
struct Cli {
    /// Working precision in bits
    #[arg(long, global = true, default_value_t = 53)]
    prec: usize,
    /// Series truncation order
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized constructions
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Mould constructions and symmetry checks
    #[command(subcommand)]
    Mould(MouldCmd),
    /// Alien derivations of built-in resurgent series
    Alien(AlienArgs),
    /// Borel-Laplace sums, lateral jumps and Hankel integrals
    Sum(SumArgs),
    /// Resurgence monomials and L iterated integrals
    Hyperlog(HyperlogArgs),
    /// Multizeta values
    #[command(subcommand)]
    Mzv(MzvCmd),
    /// Formal series of the built-in examples
    Series(SeriesArgs),
}

#[derive(Subcommand, Debug)]
enum MouldCmd {
    /// Symmetry predicates of a mould stored as JSON
    Check {
        #[arg(long)]
        file: String,
        #[arg(long)]
        symmetral: bool,
        #[arg(long)]
        alternal: bool,
        #[arg(long)]
        symmetrel: bool,
        #[arg(long)]
        alternel: bool,
    },
    /// The mould Exp_w
    ExpW {
        #[arg(long)]
        w: String,
        #[arg(long, default_value = "1,2")]
        alphabet: String,
        #[arg(long, default_value_t = 3)]
        length: usize,
    },
    /// A random alternal or symmetral mould
    Random {
        #[arg(long, value_parser = ["alternal", "symmetral"])]
        kind: String,
        #[arg(long, default_value = "1,2")]
        alphabet: String,
        #[arg(long, default_value_t = 3)]
        length: usize,
    },
    /// Algebra on moulds stored as JSON
    Op {
        #[arg(long, value_parser = ["product", "compose", "exp", "log", "inverse", "comp-inverse", "commutator"])]
        op: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
    },
}

#[derive(Args, Debug)]
struct AlienArgs {
    #[arg(long)]
    input: String,
    #[arg(long, allow_hyphen_values = true)]
    omega: String,
    #[arg(long, conflicts_with = "plus")]
    derivation: bool,
    #[arg(long)]
    plus: bool,
}

#[derive(Args, Debug)]
struct SumArgs {
    #[arg(long)]
    input: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    theta: String,
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[arg(long, default_value_t = 1e-12)]
    target_err: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    c0: String,
    #[arg(long, conflicts_with = "hankel")]
    jump: bool,
    #[arg(long, allow_hyphen_values = true, requires = "jump")]
    theta_star: Option<String>,
    #[arg(long, default_value = "0.3")]
    delta: String,
    #[arg(long)]
    hankel: bool,
}

#[derive(Args, Debug)]
struct HyperlogArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "l")]
    word: Option<String>,
    #[arg(long = "L", id = "l", allow_hyphen_values = true)]
    l: Option<String>,
}

#[derive(Subcommand, Debug)]
enum MzvCmd {
    /// Ze by nested summation
    Eval {
        #[arg(long)]
        s: String,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Wa by iterated quadrature; letters 0, 1, -1 or e(q)
    Wa {
        #[arg(long, allow_hyphen_values = true)]
        alphas: String,
    },
    /// Stuffle and shuffle decompositions of a product
    Relation {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "stuffle,shuffle")]
        mode: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long)]
    input: String,
    #[arg(long, value_parser = ["coeffs", "borel", "gevrey"], default_value = "coeffs")]
    op: String,
}

/// Angles: decimals or multiples of pi such as "pi", "-pi/2", "3pi/4", "0.25pi".
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    if let Some(i) = t.find("pi") {
        let (head, tail) = (&t[..i], &t[i + 2..]);
        let c = match head.trim_end_matches('*') {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| Error::Parse(format!("bad angle '{s}'")))?,
        };
        let d = match tail.strip_prefix('/') {
            None if tail.is_empty() => 1.0,
            Some(x) => x.parse::<f64>().map_err(|_| Error::Parse(format!("bad angle '{s}'")))?,
            None => return Err(Error::Parse(format!("bad angle '{s}'"))),
        };
        return Ok(c * PI / d);
    }
    t.parse::<f64>().map_err(|_| Error::Parse(format!("bad angle '{s}'")))
}

/// Complex numbers such as "10", "-3", "5-5i", "2i", "0.5+1.5i".
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad complex number '{s}'"));
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign or the leading sign
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let im_of = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse::<f64>().map_err(|_| bad())?, im_of(&body[k..])?)),
        None => Ok(Complex64::new(0.0, im_of(body)?)),
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer '{x}'"))))
        .collect()
}

fn parse_wa(s: &str) -> Result<WaWord> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|x| {
            let x = x.trim();
            match x {
                "0" => Ok(WaLetter::Zero),
                "1" => Ok(WaLetter::root(num_rational::BigRational::from_integer(0.into()))),
                "-1" => Ok(WaLetter::root(parse_rational("1/2")?)),
                _ => {
                    let q = x
                        .strip_prefix("e(")
                        .and_then(|y| y.strip_suffix(')'))
                        .ok_or_else(|| Error::Parse(format!("bad Wa letter '{x}'")))?;
                    Ok(WaLetter::root(parse_rational(q)?))
                }
            }
        })
        .collect::<Result<_>>()
        .map(WaWord::new)
}

fn read_mould(path: &str) -> Result<Mould> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    Mould::from_json(&text)
}

fn mould_value(m: &Mould) -> Value {
    serde_json::from_str(&m.to_json()).expect("valid json")
}

fn builtin_series(name: &str, order: usize) -> Result<FormalSeries> {
    match name {
        "euler" => Ok(FormalSeries::euler(order)),
        "stirling" => Ok(FormalSeries::stirling(order)),
        _ => ResurgentSeries::from_minor(BorelFunction::builtin(name)?).to_formal(order),
    }
}

fn strings(xs: &[ExactScalar]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn c64_json(z: Complex64, error: f64) -> Value {
    json!({"re": z.re, "im": z.im, "error": error})
}

fn execute(cli: &Cli) -> Result<Value> {
    match &cli.cmd {
        Cmd::Mould(m) => match m {
            MouldCmd::Check { file, symmetral, alternal, symmetrel, alternel } => {
                let m = read_mould(file)?;
                let all = !(*symmetral || *alternal || *symmetrel || *alternel);
                let mut out = serde_json::Map::new();
                if all || *symmetral {
                    out.insert("symmetral".into(), json!(m.is_symmetral()));
                }
                if all || *alternal {
                    out.insert("alternal".into(), json!(m.is_alternal()));
                }
                if all || *symmetrel {
                    out.insert("symmetrel".into(), json!(m.is_symmetrel()));
                }
                if all || *alternel {
                    out.insert("alternel".into(), json!(m.is_alternel()));
                }
                Ok(Value::Object(out))
            }
            MouldCmd::ExpW { w, alphabet, length } => {
                let w: ExactScalar = w.parse()?;
                Ok(mould_value(&Mould::exp_w(Alphabet::ints(&parse_ints(alphabet)?), *length, &w)))
            }
            MouldCmd::Random { kind, alphabet, length } => {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                let a = Alphabet::ints(&parse_ints(alphabet)?);
                let m = if kind == "alternal" {
                    random_alternal(&mut rng, &a, *length, None)?
                } else {
                    random_symmetral(&mut rng, &a, *length)?
                };
                Ok(mould_value(&m))
            }
            MouldCmd::Op { op, a, b } => {
                let a = read_mould(a)?;
                let need_b = || -> Result<Mould> {
                    read_mould(b.as_deref().ok_or_else(|| Error::Parse(format!("--op {op} needs --b")))?)
                };
                let r = match op.as_str() {
                    "product" => a.product(&need_b()?)?,
                    "compose" => a.compose(&need_b()?)?,
                    "commutator" => a.commutator(&need_b()?)?,
                    "exp" => a.exp()?,
                    "log" => a.log()?,
                    "inverse" => a.mult_inverse()?,
                    _ => a.comp_inverse()?,
                };
                Ok(mould_value(&r))
            }
        },
        Cmd::Alien(a) => {
            let phi = ResurgentSeries::from_minor(BorelFunction::builtin(&a.input)?);
            let omega: ExactScalar = a.omega.parse()?;
            let r = if a.plus { alien_plus(&phi, &omega)? } else { alien_derivation(&phi, &omega)? };
            let order = cli.order.unwrap_or(6);
            Ok(json!({
                "operator": if a.plus { "plus" } else { "derivation" },
                "omega": omega.to_string(),
                "value": r.constant.to_string(),
                "minor_zero": r.minor.is_zero(),
                "minor_taylor": strings(&r.minor.taylor(order)?),
                "exact": true,
                "error": 0.0,
            }))
        }
        Cmd::Sum(s) => {
            let f = BorelFunction::builtin(&s.input)?;
            let z = parse_complex(&s.z)?;
            let c0: ExactScalar = s.c0.parse()?;
            if s.jump {
                let ts = parse_angle(s.theta_star.as_deref().ok_or_else(|| Error::Parse("--jump needs --theta-star".into()))?)?;
                let j = lateral_jump(&f, &c0, ts, parse_angle(&s.delta)?, z)?;
                Ok(json!({
                    "plus": c64_json(j.plus.c64(), j.plus.error_estimate),
                    "minus": c64_json(j.minus.c64(), j.minus.error_estimate),
                    "jump": c64_json(j.jump(), j.error),
                    "abs_jump": j.jump().norm(),
                }))
            } else if s.hankel {
                let r = hankel_laplace(&f, parse_angle(&s.theta)?, z)?;
                Ok(serde_json::to_value(&r).expect("serializable"))
            } else {
                let spec = RaySpec::new(parse_angle(&s.theta)?, z).with_target(s.target_err);
                Ok(serde_json::to_value(laplace_ray(&f, &c0, &spec)?).expect("serializable"))
            }
        }
        Cmd::Hyperlog(h) => {
            if let Some(l) = &h.l {
                let w = parse_ints(l)?;
                let v = l_numeric(&w, cli.prec)?;
                let mut out = c64_json(v.value.to_c64(), v.error);
                // exact value from the Delta+ relation where it is available
                if w.len() <= 2 {
                    let fam = MonomialFamily::ints(&w, 4)?;
                    let eta = ExactScalar::from_int(w.iter().sum());
                    if let Ok(m) = fam.extract_l(&eta, w.len()) {
                        out["exact"] = json!(m.get(&Word::ints(&w)).to_string());
                    }
                }
                Ok(out)
            } else {
                let w = parse_ints(h.word.as_deref().ok_or_else(|| Error::Parse("hyperlog needs --word or --L".into()))?)?;
                let mut letters = w.clone();
                letters.sort();
                letters.dedup();
                let fam = MonomialFamily::ints(&letters, cli.order.unwrap_or(12))?;
                let s = fam.v_series(&Word::ints(&w))?;
                Ok(json!({"word": w, "coefficients": strings(&s.coeffs), "exact": true, "error": 0.0}))
            }
        }
        Cmd::Mzv(m) => match m {
            MzvCmd::Eval { s, eps } => {
                let idx = MzvIndex::parse(s, eps.as_deref())?;
                let v = ze_eval(&idx, cli.prec)?;
                Ok(json!({"index": idx.to_string(), "value": v.re, "im": v.im, "error": v.error}))
            }
            MzvCmd::Wa { alphas } => {
                let w = parse_wa(alphas)?;
                let v = wa_eval(&w, cli.prec)?;
                Ok(json!({"word": w.to_string(), "value": v.re, "im": v.im, "error": v.error}))
            }
            MzvCmd::Relation { a, b, mode, tol } => {
                let modes: Vec<&str> = mode.split(',').map(str::trim).collect();
                if let Some(bad) = modes.iter().find(|m| !matches!(**m, "stuffle" | "shuffle")) {
                    return Err(Error::Parse(format!("unknown mode '{bad}'")));
                }
                let r = verify_relation(
                    &MzvIndex::parse(a, None)?,
                    &MzvIndex::parse(b, None)?,
                    modes.contains(&"stuffle"),
                    modes.contains(&"shuffle"),
                    *tol,
                )?;
                let mut v = serde_json::to_value(&r).expect("serializable");
                v["ok"] = json!(r.ok());
                Ok(v)
            }
        },
        Cmd::Series(s) => {
            let order = cli.order.unwrap_or(10);
            let series = builtin_series(&s.input, order)?;
            match s.op.as_str() {
                "coeffs" => Ok(json!({"coefficients": strings(&series.coeffs), "exact": true, "error": 0.0})),
                "borel" => {
                    let b = borel(&series);
                    Ok(json!({"delta": b.delta.to_string(), "coefficients": strings(&b.coeffs), "exact": true, "error": 0.0}))
                }
                _ => {
                    let g = gevrey_bound(&series)?;
                    Ok(json!({"c": g.c, "m": g.m, "error": g.max_residual}))
                }
            }
        }
    }
}

fn table(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}\t{s}"),
                _ => format!("{k}\t{x}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => v.to_string(),
    }
}

/// Runs the command line; exit codes are 0 on success, 1 on usage errors, 2 on domain errors.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    match execute(&cli) {
        Ok(v) => (
            0,
            match cli.format {
                Format::Json => v.to_string(),
                Format::Table => table(&v),
            },
        ),
        Err(e) => {
            let code = if e.is_domain() { 2 } else { 1 };
            (code, json!({"error": {"kind": e.kind(), "message": e.to_string()}}).to_string())
        }
    }
}
