use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use arithsurf::bundles::{audit_primes, check_parity, check_type_h0, type_profile, BundleHandle, SplittingProfile};
use arithsurf::delpezzo::{
    classify, general_position, no_six_on_conic_everywhere, no_three_collinear_everywhere,
    pairwise_distinct_everywhere, PointConfiguration,
};
use arithsurf::exactlat::Prime;
use arithsurf::graded::{Form, GradedPresentation};
use arithsurf::hirzebruch::{bundle_from_normal_form, constancy_check, equation, reduce_coefficients, NormalForm};
use arithsurf::transforms::{
    apply_center, apply_many, blowup_factorization, prescribed_types, FiberQuotient, JumpSpec, TransformCenter,
};
use arithsurf::Error;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const GUARD_VAR: &str = "ARITHSURF_WINDOW_GUARD";

#[derive(Parser)]
#[command(
    name = "arithsurf",
    version,
    about = "Splitting types, elementary transformations and del Pezzo checks over Z"
)]
struct Cli {
    /// Also check every prime up to B that is not a detected jump.
    #[arg(long, global = true, value_name = "B")]
    primes_up_to: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Bundle(BundleCmd),
    #[command(subcommand)]
    Transform(TransformCmd),
    #[command(subcommand)]
    Surface(SurfaceCmd),
    #[command(subcommand)]
    Delpezzo(DelpezzoCmd),
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, value_name = "ID")]
        criterion: Option<u8>,
    },
}

#[derive(Subcommand)]
enum BundleCmd {
    /// Bundle with prescribed types, or the bundle of a Hirzebruch normal form.
    Build(BuildArgs),
    /// Generic type and jump primes.
    Profile(InputArgs),
    /// Parity and `delta = 2 h0` at every jump.
    Check(InputArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_name = "N", conflicts_with_all = ["n", "f"])]
    generic_type: Option<i64>,
    /// `p:n_i`, repeatable.
    #[arg(long, value_name = "P:K", requires = "generic_type")]
    jump: Vec<String>,
    #[arg(short, value_name = "N", requires = "f")]
    n: Option<i64>,
    #[arg(short, value_name = "FORM", requires = "n", allow_hyphen_values = true)]
    f: Option<String>,
}

#[derive(Args)]
struct InputArgs {
    /// Presentation JSON file, or `-` for stdin.
    #[arg(long, value_name = "PATH", conflicts_with = "json")]
    input: Option<String>,
    /// Presentation JSON given inline.
    #[arg(long, value_name = "JSON")]
    json: Option<String>,
}

#[derive(Subcommand)]
enum TransformCmd {
    /// Elementary transformation along a fiber quotient.
    Apply(TransformArgs),
    /// Blow-up factorization record.
    Factorize(TransformArgs),
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    input: InputArgs,
    /// `{"p","m","g","h"}` or `{"p","m","forms"}`; repeatable.
    #[arg(long, value_name = "JSON")]
    quotient: Vec<String>,
    /// `{"kind": "fiber", ...}` or `{"kind": "horizontal", "equation": ...}`.
    #[arg(long, value_name = "JSON", conflicts_with = "quotient")]
    center: Option<String>,
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Equation and fiber types of `x0^n y0 + x1^n y1 + f y2 = 0`.
    NormalForm {
        #[arg(short, value_name = "N")]
        n: i64,
        #[arg(short, value_name = "FORM", default_value = "0", allow_hyphen_values = true)]
        f: String,
        /// Clear the `x0^n` and `x1^n` terms of `f` first.
        #[arg(long)]
        reduce: bool,
    },
}

#[derive(Subcommand)]
enum DelpezzoCmd {
    /// General position over every prime.
    Check(PointsArgs),
    /// Standardize and name the del Pezzo model.
    Classify(PointsArgs),
}

#[derive(Args)]
struct PointsArgs {
    /// Comma-separated points `a:b:c`.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    points: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Acceptance(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Context {
    primes_up_to: Option<u64>,
    guard: Option<i64>,
    used_guard: Option<i64>,
}

impl Context {
    fn bundle(&mut self, p: GradedPresentation) -> Outcome<BundleHandle> {
        let b = BundleHandle::new(p)?;
        let b = match self.guard {
            Some(g) => b.with_guard(g),
            None => b,
        };
        self.used_guard.get_or_insert(b.guard());
        Ok(b)
    }

    fn audit(&self, b: &BundleHandle, out: &mut Value) -> Outcome<()> {
        if let Some(bound) = self.primes_up_to {
            out["audit"] = to_value(&audit_primes(b, bound)?);
        }
        Ok(())
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn malformed(what: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Domain(Error::Malformed(format!("{what}: {e}")))
}

fn profile_summary(p: &SplittingProfile) -> Value {
    let (generic, jumps) = p.type_map();
    let jumps: serde_json::Map<String, Value> = jumps.into_iter().map(|(q, t)| (q.to_string(), json!(t))).collect();
    json!({ "generic": generic, "jumps": jumps })
}

fn bundle_json(b: &BundleHandle) -> Outcome<Value> {
    let profile = type_profile(b)?;
    Ok(json!({
        "presentation": to_value(b.presentation()),
        "rank": b.rank(),
        "degree": b.degree(),
        "profile": to_value(&profile),
        "types": profile_summary(&profile),
    }))
}

/// Accepts a bare presentation, any object with a `presentation` field, or a
/// whole report from an earlier run.
fn read_presentation(args: &InputArgs) -> Outcome<GradedPresentation> {
    let text = match (&args.input, &args.json) {
        (Some(path), _) if path == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| malformed("stdin", e))?;
            s
        }
        (Some(path), _) => fs::read_to_string(path).map_err(|e| malformed(path, e))?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(Failure::Usage("one of --input or --json is required".into())),
    };
    let mut v: Value = serde_json::from_str(&text).map_err(|e| malformed("input JSON", e))?;
    if let Some(r) = v.get("result") {
        v = r.clone();
    }
    if let Some(p) = v.get("presentation") {
        v = p.clone();
    }
    serde_json::from_value(v).map_err(|e| malformed("presentation", e))
}

fn parse_jump(s: &str) -> Outcome<JumpSpec> {
    let (p, k) = s
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("--jump expects P:K, got {s:?}")))?;
    let p: BigInt = p
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("--jump prime {p:?} is not a decimal integer")))?;
    let k: i64 = k
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("--jump size {k:?} is not an integer")))?;
    Ok(JumpSpec::new(Prime::new(p)?, k))
}

fn bundle_cmd(cmd: &BundleCmd, ctx: &mut Context) -> Outcome<Value> {
    match cmd {
        BundleCmd::Build(a) => {
            let b = match (a.generic_type, a.n, &a.f) {
                (Some(n), None, None) => {
                    let jumps = a.jump.iter().map(|s| parse_jump(s)).collect::<Outcome<Vec<_>>>()?;
                    let built = prescribed_types(n, &jumps)?;
                    ctx.bundle(built.presentation().clone())?
                }
                (None, Some(n), Some(f)) => {
                    let built = bundle_from_normal_form(&NormalForm::parse(n, f)?)?;
                    ctx.bundle(built.presentation().clone())?
                }
                _ => {
                    return Err(Failure::Usage(
                        "bundle build needs --generic-type [--jump P:K ...] or -n N -f FORM".into(),
                    ))
                }
            };
            let mut out = bundle_json(&b)?;
            ctx.audit(&b, &mut out)?;
            Ok(out)
        }
        BundleCmd::Profile(input) => {
            let b = ctx.bundle(read_presentation(input)?)?;
            let mut out = bundle_json(&b)?;
            ctx.audit(&b, &mut out)?;
            Ok(out)
        }
        BundleCmd::Check(input) => {
            let b = ctx.bundle(read_presentation(input)?)?;
            let parity = check_parity(&b)?;
            let identity = check_type_h0(&b)?;
            Ok(json!({ "parity": to_value(&parity), "identity": to_value(&identity) }))
        }
    }
}

/// Replaces forms written as strings (`"x0^2 - 3*x1^2"`) by their JSON
/// objects; the degree of quotient form `i` is `m - a_i`.
fn forms_from_strings(mut v: Value, gens: &[i64]) -> Outcome<Value> {
    let m = v.get("m").and_then(Value::as_i64);
    let parse = |x: &mut Value, i: Option<usize>| -> Outcome<()> {
        if let Value::String(s) = x {
            let degree = match (m, i) {
                (Some(m), Some(i)) if i < gens.len() => Some(m - gens[i]),
                _ => None,
            };
            *x = to_value(&Form::parse(s, degree)?);
        }
        Ok(())
    };
    if let Some(Value::Array(forms)) = v.get_mut("forms") {
        for (i, f) in forms.iter_mut().enumerate() {
            parse(f, Some(i))?;
        }
    }
    for (i, key) in ["g", "h"].iter().enumerate() {
        if let Some(f) = v.get_mut(*key) {
            parse(f, Some(i))?;
        }
    }
    if let Some(f) = v.get_mut("equation") {
        parse(f, None)?;
    }
    Ok(v)
}

fn transform_cmd(cmd: &TransformCmd, ctx: &mut Context) -> Outcome<Value> {
    let args = match cmd {
        TransformCmd::Apply(a) | TransformCmd::Factorize(a) => a,
    };
    let b = ctx.bundle(read_presentation(&args.input)?)?;
    let gens = b.presentation().generators().twists();
    let quotients = args
        .quotient
        .iter()
        .map(|s| {
            let v = forms_from_strings(serde_json::from_str(s).map_err(|e| malformed("--quotient", e))?, gens)?;
            serde_json::from_value::<FiberQuotient>(v).map_err(|e| malformed("--quotient", e))
        })
        .collect::<Outcome<Vec<_>>>()?;
    let center = match &args.center {
        Some(s) => {
            let v = forms_from_strings(serde_json::from_str(s).map_err(|e| malformed("--center", e))?, gens)?;
            Some(serde_json::from_value::<TransformCenter>(v).map_err(|e| malformed("--center", e))?)
        }
        None => None,
    };
    match cmd {
        TransformCmd::Apply(_) => {
            let (bundle, inclusion) = match center {
                Some(c) => (apply_center(&b, &c)?, None),
                None if quotients.is_empty() => {
                    return Err(Failure::Usage("--quotient or --center is required".into()))
                }
                None => {
                    let t = apply_many(&b, &quotients)?;
                    (t.bundle, Some(t.inclusion))
                }
            };
            let mut out = json!({ "bundle": bundle_json(&bundle)? });
            if let Some(inc) = inclusion {
                out["inclusion"] = to_value(&inc);
            }
            ctx.audit(&bundle, &mut out)?;
            Ok(out)
        }
        TransformCmd::Factorize(_) => {
            let q = match (center, quotients.as_slice()) {
                (Some(TransformCenter::Fiber(q)), _) => q,
                (Some(c), _) => return Err(apply_center(&b, &c).err().map(Failure::Domain).expect("unsupported")),
                (None, [q]) => q.clone(),
                (None, _) => {
                    return Err(Failure::Usage(
                        "transform factorize takes exactly one --quotient".into(),
                    ))
                }
            };
            Ok(to_value(&blowup_factorization(&b, &q)?))
        }
    }
}

fn surface_cmd(cmd: &SurfaceCmd, ctx: &mut Context) -> Outcome<Value> {
    let SurfaceCmd::NormalForm { n, f, reduce } = cmd;
    let mut nf = NormalForm::new(*n, Form::parse(f, Some(*n))?)?;
    if *reduce {
        nf = reduce_coefficients(&nf);
    }
    let rec = equation(&nf);
    let b = ctx.bundle(bundle_from_normal_form(&nf)?.presentation().clone())?;
    let profile = type_profile(&b)?;
    let mut out = json!({
        "equation": rec.equation,
        "bidegree": [rec.bidegree.0, rec.bidegree.1],
        "smooth": rec.smooth,
        "profile": to_value(&profile),
        "types": profile_summary(&profile),
        "constancy": to_value(&constancy_check(&nf)?),
    });
    ctx.audit(&b, &mut out)?;
    Ok(out)
}

fn points(a: &PointsArgs) -> Outcome<PointConfiguration> {
    let list: Vec<&str> = a.points.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(PointConfiguration::parse(&list)?)
}

fn delpezzo_cmd(cmd: &DelpezzoCmd) -> Outcome<Value> {
    match cmd {
        DelpezzoCmd::Check(a) => {
            let c = points(a)?;
            let verdict = general_position(&c);
            let mut out = json!({
                "points": to_value(&c),
                "general_position": verdict.passed(),
                "checks": {
                    "distinct": to_value(&pairwise_distinct_everywhere(&c)),
                    "no_three_collinear": to_value(&no_three_collinear_everywhere(&c)),
                    "no_six_on_conic": to_value(&no_six_on_conic_everywhere(&c)),
                },
            });
            if let Some(w) = verdict.witness() {
                out["witness"] = to_value(w);
                out["reason"] = json!(w.to_string());
            }
            Ok(out)
        }
        DelpezzoCmd::Classify(a) => {
            let c = points(a)?;
            if let Some(w) = general_position(&c).witness() {
                if c.len() <= 4 {
                    return Err(Error::NotGeneralPosition(w.to_string()).into());
                }
            }
            let cl = classify(&c)?;
            Ok(json!({
                "model": cl.model,
                "K2": cl.k_squared,
                "points": cl.points,
                "standardization": to_value(&cl.standardization),
            }))
        }
    }
}

fn selftest(criterion: Option<u8>) -> Outcome<Value> {
    let results = match criterion {
        Some(id) => vec![arithsurf_acceptance::criteria::run(id)
            .ok_or_else(|| Failure::Usage(format!("--criterion {id} is not in 1..=8")))?],
        None => arithsurf_acceptance::criteria::run_all(),
    };
    for r in &results {
        eprintln!("{r}");
    }
    let rows: Vec<Value> = results
        .iter()
        .map(|r| json!({ "id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail }))
        .collect();
    let passed = results.iter().all(|r| r.passed);
    let out = json!({ "criteria": rows, "passed": passed });
    if passed {
        Ok(out)
    } else {
        Err(Failure::Acceptance(out))
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Bundle(BundleCmd::Build(_)) => "bundle build",
        Command::Bundle(BundleCmd::Profile(_)) => "bundle profile",
        Command::Bundle(BundleCmd::Check(_)) => "bundle check",
        Command::Transform(TransformCmd::Apply(_)) => "transform apply",
        Command::Transform(TransformCmd::Factorize(_)) => "transform factorize",
        Command::Surface(SurfaceCmd::NormalForm { .. }) => "surface normal-form",
        Command::Delpezzo(DelpezzoCmd::Check(_)) => "delpezzo check",
        Command::Delpezzo(DelpezzoCmd::Classify(_)) => "delpezzo classify",
        Command::Selftest { .. } => "selftest",
    }
}

fn emit(doc: Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
}

fn error_doc(command: Option<&str>, name: &str, message: String) -> Value {
    json!({
        "version": VERSION,
        "command": command,
        "error": { "name": name, "message": message },
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            emit(error_doc(None, "Usage", e.render().to_string().trim().to_string()));
            return ExitCode::from(1);
        }
    };
    let name = command_name(&cli.command);
    let guard = match std::env::var(GUARD_VAR) {
        Ok(s) => match s.trim().parse::<i64>() {
            Ok(g) if g >= 0 => Some(g),
            _ => {
                let msg = format!("{GUARD_VAR} must be a nonnegative integer, got {s:?}");
                eprintln!("{msg}");
                emit(error_doc(Some(name), "Usage", msg));
                return ExitCode::from(1);
            }
        },
        Err(_) => None,
    };
    let mut ctx = Context {
        primes_up_to: cli.primes_up_to,
        guard,
        used_guard: None,
    };
    let out = match &cli.command {
        Command::Bundle(c) => bundle_cmd(c, &mut ctx),
        Command::Transform(c) => transform_cmd(c, &mut ctx),
        Command::Surface(c) => surface_cmd(c, &mut ctx),
        Command::Delpezzo(c) => delpezzo_cmd(c),
        Command::Selftest { criterion } => selftest(*criterion),
    };
    let header = |doc: &mut Value| {
        doc["window_guard"] = json!({
            "value": ctx.used_guard,
            "source": if guard.is_some() { "env" } else { "default" },
        });
    };
    match out {
        Ok(result) => {
            let mut doc = json!({ "version": VERSION, "command": name, "result": result });
            header(&mut doc);
            emit(doc);
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            let mut doc = error_doc(Some(name), e.name(), e.to_string());
            header(&mut doc);
            emit(doc);
            ExitCode::from(2)
        }
        Err(Failure::Acceptance(result)) => {
            let mut doc = error_doc(Some(name), "AcceptanceFailure", "at least one criterion failed".into());
            doc["result"] = result;
            header(&mut doc);
            emit(doc);
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            emit(error_doc(Some(name), "Usage", msg));
            ExitCode::from(1)
        }
    }
}
