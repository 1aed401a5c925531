//! Command dispatch for the `qtorsion` binary. [`run_command`] does all the work and returns the
//! exit status with the captured output, so the binary is a thin wrapper and tests need no process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qtorsion::corpus::{parse_corpus, parse_curve_arg, parse_point_arg};
use qtorsion::curve::Curve;
use qtorsion::divpoly::{two_division_cubic, DivPolyError};
use qtorsion::exact::{ri, SquarefreeInt};
use qtorsion::galois::{
    fixed_vectors, index2_subgroups, named_subgroup, quadratic_growth_analysis, sl2_membership, SubgroupGL2,
};
use qtorsion::growth::{context, growth_scan, FourTorsionModel, GrowthError, GrowthRecord};
use qtorsion::sieve::{sieve, VerificationReport};
use qtorsion::tate::{to_tate_normal_form, verify_discriminant_identities, TateError};
use serde_json::json;

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qtorsion", version, about = "Torsion growth of elliptic curves over quadratic fields")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CurveArg {
    /// Weierstrass coefficients `a1,a2,a3,a4,a6` (rationals allowed).
    #[arg(long, allow_hyphen_values = true)]
    curve: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torsion over Q, or over Q(sqrt d) with --d.
    Torsion {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// Every square-free 0 < |d| <= B over which torsion grows.
    Growth {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        dmax: u64,
    },
    /// Primes allowed to divide d, and the candidate fields up to --dmax.
    Sieve {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value_t = 30)]
        dmax: u64,
    },
    /// Tate normal form of a rational point and the discriminant identities along the way.
    Tate {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Data of a catalogued subgroup of GL2(F_l).
    Galois(GaloisArgs),
    /// Scan a corpus and check every growth theorem.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        dmax: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("what").required(true).multiple(false))]
struct GaloisArgs {
    #[arg(long)]
    ell: u8,
    #[arg(long)]
    name: String,
    #[arg(long, group = "what")]
    fixed_points: bool,
    #[arg(long, group = "what")]
    index2: bool,
    #[arg(long, group = "what")]
    analysis: bool,
    #[arg(long, group = "what")]
    elements: bool,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(EXIT_CLEAN, text)
            };
        }
    };
    let json = cli.json;
    match cli.command {
        Command::Torsion { curve, d } => with_curve(&curve, |e| torsion(e, d, json)),
        Command::Growth { curve, dmax } => with_curve(&curve, |e| growth(e, &curve.curve, dmax, json)),
        Command::Sieve { curve, dmax } => with_curve(&curve, |e| {
            let r = sieve(e, &curve.curve, dmax);
            if json {
                return Outcome::ok(EXIT_CLEAN, to_json(&r));
            }
            Outcome::ok(
                EXIT_CLEAN,
                format!(
                    "coarse primes: {}\nsharp primes: {}\ncandidate d (|d| <= {}): {}\n",
                    join(&r.coarse_primes),
                    join(&r.sharp_primes),
                    r.bound,
                    join(&r.candidate_d)
                ),
            )
        }),
        Command::Tate { curve, point } => with_curve(&curve, |e| tate(e, &point, json)),
        Command::Galois(args) => galois(&args, json),
        Command::Verify { corpus, dmax, jobs } => verify(&corpus, dmax, jobs, json),
    }
}

fn with_curve(arg: &CurveArg, f: impl FnOnce(&Curve) -> Outcome) -> Outcome {
    match parse_curve_arg(&arg.curve) {
        Ok(e) => f(&e),
        Err(e) => Outcome::fail(EXIT_USAGE, e),
    }
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn growth_failure(e: GrowthError) -> Outcome {
    let code = match &e {
        GrowthError::Indeterminate(_) => EXIT_INDETERMINATE,
        GrowthError::TableViolation { .. } | GrowthError::DivPoly(DivPolyError::Impossible(_)) => EXIT_COUNTEREXAMPLE,
        _ => EXIT_USAGE,
    };
    Outcome::fail(code, e)
}

fn torsion(e: &Curve, d: Option<i64>, json: bool) -> Outcome {
    let ctx = match context(e) {
        Ok(c) => c,
        Err(err) => return growth_failure(err),
    };
    let (field, structure, gens): (String, _, Vec<String>) = match d {
        None => {
            let g = ctx.torsion_over_q();
            ("Q".into(), g.structure, g.generators.iter().map(ToString::to_string).collect())
        }
        Some(d) => {
            let d = match SquarefreeInt::from_i64(d) {
                Ok(d) => d,
                Err(err) => return Outcome::fail(EXIT_USAGE, format!("--d {d}: {err}")),
            };
            match ctx.torsion_over_K(&d) {
                Ok(g) => (format!("Q(sqrt({d}))"), g.structure, g.generators.iter().map(ToString::to_string).collect()),
                Err(err) => return growth_failure(err),
            }
        }
    };
    if json {
        let v = json!({ "field": field, "structure": structure, "display": structure.to_string(), "generators": gens });
        return Outcome::ok(EXIT_CLEAN, to_json(&v));
    }
    let mut out = format!("{structure}\n");
    for g in &gens {
        let _ = writeln!(out, "generator {g}");
    }
    let _ = writeln!(out, "over {field}");
    Outcome::ok(EXIT_CLEAN, out)
}

fn record_line(r: &GrowthRecord) -> String {
    let ram: Vec<String> = r.ramified_primes.iter().map(ToString::to_string).collect();
    format!("d={}: {} -> {}  new orders {:?}  ramified [{}]", r.d, r.t_q, r.t_k, r.new_orders, ram.join(", "))
}

fn growth(e: &Curve, id: &str, dmax: u64, json: bool) -> Outcome {
    match growth_scan(e, id, dmax) {
        Ok(recs) if json => Outcome::ok(EXIT_CLEAN, to_json(&recs)),
        Ok(recs) => {
            let mut out = String::new();
            for r in &recs {
                let _ = writeln!(out, "{}", record_line(r));
            }
            if recs.is_empty() {
                let _ = writeln!(out, "no growth for |d| <= {dmax}");
            }
            Outcome::ok(EXIT_CLEAN, out)
        }
        Err(err) => growth_failure(err),
    }
}

fn tate(e: &Curve, point: &str, json: bool) -> Outcome {
    let p = match parse_point_arg(point) {
        Ok(p) => p,
        Err(err) => return Outcome::fail(EXIT_USAGE, err),
    };
    let (form, trace) = match to_tate_normal_form(e, &p) {
        Ok(x) => x,
        Err(err @ (TateError::Precondition(_) | TateError::UnsupportedOrder(_) | TateError::InvalidParameter(_))) => {
            return Outcome::fail(EXIT_USAGE, err)
        }
    };
    // a point of order 4 gets the four-torsion model check too
    let model = if form.c == ri(0) {
        two_division_cubic(e).rational_roots().first().and_then(|r| FourTorsionModel::from_root(e, &(ri(4) * r)).ok())
    } else {
        None
    };
    let checks = verify_discriminant_identities(&trace, model.as_ref());
    let code = if checks.iter().all(|c| c.holds) { EXIT_CLEAN } else { EXIT_COUNTEREXAMPLE };
    if json {
        return Outcome::ok(code, to_json(&json!({ "form": form, "identities": checks })));
    }
    let mut out = format!("b = {}\nc = {}\n", form.b, form.c);
    let _ = writeln!(out, "{}", form.curve().coeffs().map(ToString::to_string).join(","));
    for c in &checks {
        let _ = writeln!(out, "{} {}", if c.holds { "ok  " } else { "FAIL" }, c.name);
    }
    Outcome::ok(code, out)
}

fn group_line(h: &SubgroupGL2) -> String {
    let fixed: Vec<String> = fixed_vectors(h).iter().map(ToString::to_string).collect();
    let mut out = format!("order {}", h.order());
    if !h.generators.is_empty() {
        let gens: Vec<String> = h.generators.iter().map(ToString::to_string).collect();
        let _ = write!(out, "  generators {}", gens.join(" "));
    }
    let _ = write!(out, "  fixed {{{}}}  in SL2: {}", fixed.join(", "), sl2_membership(h));
    out
}

fn galois(args: &GaloisArgs, json: bool) -> Outcome {
    let g = match named_subgroup(args.ell, &args.name) {
        Ok(g) => g,
        Err(err) => return Outcome::fail(EXIT_USAGE, err),
    };
    let mut out = String::new();
    if args.elements {
        if json {
            return Outcome::ok(EXIT_CLEAN, to_json(&g.elements.iter().map(ToString::to_string).collect::<Vec<_>>()));
        }
        let _ = writeln!(out, "{} over F{}: order {}", args.name, args.ell, g.order());
        for m in &g.elements {
            let _ = writeln!(out, "{m}");
        }
    } else if args.fixed_points {
        let fixed: Vec<String> = fixed_vectors(&g).iter().map(ToString::to_string).collect();
        if json {
            return Outcome::ok(EXIT_CLEAN, to_json(&fixed));
        }
        if fixed.is_empty() {
            out.push_str("no nonzero fixed vectors\n");
        }
        for v in fixed {
            let _ = writeln!(out, "{v}");
        }
    } else if args.index2 {
        let subs = index2_subgroups(&g);
        if json {
            return Outcome::ok(EXIT_CLEAN, to_json(&subs));
        }
        let _ = writeln!(out, "{} index-2 subgroups of {}", subs.len(), args.name);
        for h in &subs {
            let _ = writeln!(out, "{}", group_line(h));
        }
    } else {
        let cases = quadratic_growth_analysis(&g);
        if json {
            return Outcome::ok(EXIT_CLEAN, to_json(&cases));
        }
        let _ = writeln!(out, "{}", group_line(&g));
        if cases.is_empty() {
            out.push_str("no index-2 subgroup gains fixed vectors\n");
        }
        for c in &cases {
            let new: Vec<String> = c.new_fixed.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}  new {{{}}}", group_line(&c.subgroup), new.join(", "));
        }
    }
    Outcome::ok(EXIT_CLEAN, out)
}

fn verify(path: &std::path::Path, dmax: u64, jobs: Option<usize>, json: bool) -> Outcome {
    if jobs == Some(0) {
        return Outcome::fail(EXIT_USAGE, "--jobs must be positive");
    }
    let corpus = match parse_corpus(path) {
        Ok(c) => c,
        Err(err) => return Outcome::fail(EXIT_USAGE, err),
    };
    let report = qtorsion::sieve::verify_growth_theorems(&corpus, dmax, jobs);
    let code = report.exit_code();
    if json {
        return Outcome::ok(code, to_json(&report));
    }
    Outcome::ok(code, summary(&report))
}

fn summary(r: &VerificationReport) -> String {
    let p = &r.parameters;
    let mut out = format!("{} curves, |d| <= {}, {} pairs, {} ms\n", p.curves, p.d_bound, p.pairs, p.elapsed_ms);
    for t in &r.theorems {
        let _ = writeln!(
            out,
            "{:<34} checked {:>6}  violations {}  exempt {}",
            t.name,
            t.checked,
            t.violations.len(),
            t.exceptions.len()
        );
        for v in &t.violations {
            let _ = writeln!(out, "  COUNTEREXAMPLE {} {}: {}", v.record.curve, record_line(&v.record), v.detail);
        }
    }
    let _ = writeln!(out, "{} pairs with growth", r.records.len());
    for i in &r.indeterminate {
        let d = i.d.as_ref().map(ToString::to_string).unwrap_or_else(|| "-".into());
        let _ = writeln!(out, "INDETERMINATE {} d={}: {}", i.curve, d, i.reason);
    }
    out
}
