use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tropdiff_core::diffpoly::{derived_tropical_system, is_tropical_solution, ExponentMatrix};
use tropdiff_core::field::{FieldBackend, FieldElem};
use tropdiff_core::initial::{initial_form, initial_system_monomial_check};
use tropdiff_core::io::{
    default_order, default_truncation, format_rational, format_trop, load_series, load_system, parse_rational,
    power_series_json, trop_series_json, SeriesData, System,
};
use tropdiff_core::parser::parse_poly;
use tropdiff_core::radius::{
    base_change, classical_radius, default_base, radius_from_rule, radius_window_estimate, LogRadius, LogRatio,
    LogValue, RadiusEstimate, RadiusRule,
};
use tropdiff_core::series::{tropicalize_series, PowerSeries, TropSeries};
use tropdiff_core::verify::{exp_ode, reproduce_exp_example, solve_linear, verify_ft, FTReport, LinearODE};
use tropdiff_core::{gen, NatValuation, Rational, TropNum};

/// Exact tropical differential algebra over valued fields.
#[derive(Parser)]
#[command(name = "tropdiff", version)]
struct Cli {
    /// Seed for random instances; TROPDIFF_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print trop(d^k f) for every equation of a system and k ≤ order.
    Tropicalize {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Check that candidate tropical series solve the derived tropical system.
    Check(CandidateArgs),
    /// Initial forms of a system at candidate tropical series.
    Initial(CandidateArgs),
    /// Tropical radius of convergence of a series or of a coefficient rule.
    Radius {
        #[arg(long)]
        series: Option<PathBuf>,
        /// Base c > 1 of the absolute value |x| = c^(-v(x)); defaults to p.
        #[arg(long)]
        base: Option<String>,
        /// Express the radius in a second base as well.
        #[arg(long)]
        to_base: Option<String>,
        /// First index of the window; defaults to half the truncation.
        #[arg(long)]
        window_start: Option<usize>,
        /// `d,q,offset,corr` or `p,auto` for the exponential law.
        #[arg(long)]
        rule: Option<String>,
        /// Prime for a rule when no series is given.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Solve x' = g·x, x(0) = c0 by the power-series recurrence.
    SolveLinear {
        #[arg(long)]
        p: u64,
        /// Right-hand side g as an expression in t (and zeta); defaults to p*zeta*t^(p-1).
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value = "1")]
        c0: String,
        #[arg(long)]
        truncation: Option<usize>,
        /// Coefficient field: eisenstein or rational-padic.
        #[arg(long, default_value = "eisenstein")]
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the tropicalization instead of the classical series.
        #[arg(long)]
        tropical: bool,
    },
    /// Reproduce the exponential example and run seeded random ODE checks.
    VerifyFt {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        random: usize,
    },
    /// Reproduce the exponential example with default sizes.
    Selftest {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CandidateArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long)]
    candidate: PathBuf,
    #[arg(long)]
    order: Option<usize>,
}

/// A usage, input or IO problem (exit 2).
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn seed(cli_seed: Option<u64>) -> Result<u64, UsageError> {
    match std::env::var("TROPDIFF_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("TROPDIFF_SEED is not an integer: {s:?}"))),
        Err(_) => Ok(cli_seed.unwrap_or(gen::DEFAULT_SEED)),
    }
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, value: &Value) -> Result<(), UsageError> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn emit(json_mode: bool, value: &Value, text: &str) -> Result<(), UsageError> {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{text}");
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let seed = seed(cli.seed)?;
    let json_mode = cli.json;
    match cli.command {
        Command::Tropicalize { system, order } => tropicalize(json_mode, &system, order),
        Command::Check(args) => check(json_mode, &args),
        Command::Initial(args) => initial(json_mode, &args),
        Command::Radius {
            series,
            base,
            to_base,
            window_start,
            rule,
            p,
        } => radius(json_mode, series.as_deref(), base, to_base, window_start, rule, p),
        Command::SolveLinear {
            p,
            g,
            c0,
            truncation,
            field,
            out,
            tropical,
        } => solve(json_mode, p, g, &c0, truncation, &field, out.as_deref(), tropical),
        Command::VerifyFt {
            p,
            truncation,
            order,
            out,
            random,
        } => {
            let backend = FieldBackend::Eisenstein { p }.validate()?;
            let n = truncation.unwrap_or_else(|| default_truncation(backend));
            let m = order.unwrap_or_else(|| default_order(backend));
            let report = verify_ft(p, n, m, seed, random)?;
            finish_report(json_mode, &report, out.as_deref())
        }
        Command::Selftest { p, out } => {
            let backend = FieldBackend::Eisenstein { p }.validate()?;
            let report = reproduce_exp_example(p, default_truncation(backend), default_order(backend))?;
            finish_report(json_mode, &report, out.as_deref())
        }
    }
}

fn finish_report(json_mode: bool, report: &FTReport, out: Option<&Path>) -> Outcome {
    let value = serde_json::to_value(report)?;
    if let Some(path) = out {
        write(path, &value)?;
    }
    emit(json_mode, &value, &report.render_text())?;
    Ok(report.all_passed)
}

fn system_order(sys: &System, order: Option<usize>) -> usize {
    order.or(sys.order).unwrap_or_else(|| default_order(sys.backend))
}

fn tropicalize(json_mode: bool, path: &Path, order: Option<usize>) -> Outcome {
    let sys = load_system(&read(path)?)?;
    let m = order.or(sys.order).unwrap_or(0);
    let mut text = String::new();
    let mut equations = Vec::new();
    for (l, f) in sys.polynomials.iter().enumerate() {
        let derived = derived_tropical_system(f, m)?;
        for (k, g) in derived.iter().enumerate() {
            text += &format!("f{} d^{k}: {g}\n", l + 1);
        }
        equations.push(json!({
            "equation": l + 1,
            "derived": derived.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        }));
    }
    let value = json!({
        "schema": "tropdiff.tropicalize/1",
        "backend": sys.backend,
        "truncation": sys.truncation,
        "order": m,
        "equations": equations,
    });
    emit(json_mode, &value, &text)?;
    Ok(true)
}

fn load_candidate(sys: &System, path: &Path) -> Result<Vec<TropSeries>, UsageError> {
    let series = load_series(&read(path)?, Some(sys.backend.nat_valuation()))?;
    if series.len() != sys.nvars {
        return Err(UsageError(format!(
            "candidate has {} series, system has {} variables",
            series.len(),
            sys.nvars
        )));
    }
    let trop: Vec<TropSeries> = series.iter().map(SeriesData::to_tropical).collect();
    for s in &trop {
        if s.nat_val() != sys.backend.nat_valuation() {
            return Err(UsageError(format!(
                "candidate valuation {:?} does not match the system field {}",
                s.nat_val(),
                sys.backend
            )));
        }
    }
    Ok(trop)
}

fn check(json_mode: bool, args: &CandidateArgs) -> Outcome {
    let sys = load_system(&read(&args.system)?)?;
    let s = load_candidate(&sys, &args.candidate)?;
    let m = system_order(&sys, args.order);
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut failure: Option<(usize, usize)> = None;
    let mut limited = false;
    for (l, f) in sys.polynomials.iter().enumerate() {
        let verdict = is_tropical_solution(&derived_tropical_system(f, m)?, &s);
        limited |= verdict.truncation_limited;
        for (k, r) in verdict.reports.iter().enumerate() {
            let mark = if r.vanishes { "ok" } else { "FAIL" };
            let flag = if r.truncation_limited { " [truncation-limited]" } else { "" };
            text += &format!(
                "equation {} order {k}: {} attained {}x {mark}{flag}\n",
                l + 1,
                r.value,
                r.attainment.len()
            );
            rows.push(json!({
                "equation": l + 1,
                "order": k,
                "value": r.value.to_string(),
                "attained": r.attainment.len(),
                "vanishes": r.vanishes,
                "truncation_limited": r.truncation_limited,
            }));
        }
        if failure.is_none() {
            failure = verdict.first_failure().map(|k| (l + 1, k));
        }
    }
    match failure {
        Some((l, k)) => text += &format!("not a solution: equation {l} fails at order {k}\n"),
        None => text += &format!("solution up to order {m}\n"),
    }
    let value = json!({
        "schema": "tropdiff.check/1",
        "backend": sys.backend,
        "truncation": sys.truncation,
        "order": m,
        "rows": rows,
        "solves": failure.is_none(),
        "failure": failure.map(|(l, k)| json!({"equation": l, "order": k})),
        "truncation_limited": limited,
    });
    emit(json_mode, &value, &text)?;
    Ok(failure.is_none())
}

fn initial(json_mode: bool, args: &CandidateArgs) -> Outcome {
    let sys = load_system(&read(&args.system)?)?;
    let s = load_candidate(&sys, &args.candidate)?;
    let mut text = String::new();
    let mut forms = Vec::new();
    for (l, f) in sys.polynomials.iter().enumerate() {
        let form = initial_form(f, &s)?;
        let flag = if form.truncation_limited { " [truncation-limited]" } else { "" };
        text += &format!("in_S(f{}) = {}{flag}\n", l + 1, form.poly);
        forms.push(json!({
            "equation": l + 1,
            "form": form.poly.to_string(),
            "monomial": form.poly.is_monomial(),
            "truncation_limited": form.truncation_limited,
        }));
    }
    let mut value = json!({
        "schema": "tropdiff.initial/1",
        "backend": sys.backend,
        "truncation": sys.truncation,
        "forms": forms,
    });
    let Some(m) = args.order else {
        emit(json_mode, &value, &text)?;
        return Ok(true);
    };
    let check = initial_system_monomial_check(&sys.polynomials, &s, m)?;
    let witnesses: Vec<Value> = check
        .witnesses
        .iter()
        .map(|w| json!({"equation": w.generator + 1, "order": w.order, "form": w.form.to_string()}))
        .collect();
    for w in &check.witnesses {
        text += &format!("monomial: in_S(d^{} f{}) = {}\n", w.order, w.generator + 1, w.form);
    }
    if check.monomial_free {
        text += &format!("no monomial initial form up to order {m}\n");
    }
    value["order"] = json!(m);
    value["monomial_free"] = json!(check.monomial_free);
    value["witnesses"] = json!(witnesses);
    value["truncation_limited"] = json!(check.truncation_limited);
    emit(json_mode, &value, &text)?;
    Ok(check.monomial_free)
}

fn parse_rule(text: &str, p: Option<u64>) -> Result<RadiusRule, UsageError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let need_p = || p.ok_or_else(|| UsageError("the rule needs a prime: give --p or a p-adic series".into()));
    let rule = match parts.as_slice() {
        [first, "auto"] => {
            let prime = if *first == "p" { need_p()? } else { first.parse().map_err(|_| UsageError(format!("bad prime {first:?}")))? };
            RadiusRule::exponential(prime)
        }
        [d, q, offset, corr] => {
            let stride = d.parse().map_err(|_| UsageError(format!("bad stride {d:?}")))?;
            let factorial_correction = match *corr {
                "0" | "off" | "false" => false,
                "1" | "on" | "true" => true,
                other => return Err(UsageError(format!("corr must be 0 or 1, got {other:?}"))),
            };
            RadiusRule::Arithmetic {
                stride,
                slope: parse_rational(q)?,
                offset: parse_rational(offset)?,
                factorial_correction,
                p: match (factorial_correction, p) {
                    (true, _) => need_p()?,
                    (false, Some(p)) => p,
                    (false, None) => 2,
                },
            }
        }
        ["terminating"] => RadiusRule::Terminating,
        _ => return Err(UsageError(format!("cannot read rule {text:?}; expected d,q,offset,corr or p,auto"))),
    };
    rule.validate()?;
    Ok(rule)
}

fn log_value_string(v: &LogValue) -> String {
    match v {
        LogValue::Exact(l) => l.to_string(),
        LogValue::Approx(x) => format!("{x:.6} (approx)"),
    }
}

fn log_radius_string(l: &LogRadius) -> String {
    match l {
        LogRadius::Finite(x) => format_rational(x),
        other => other.to_string(),
    }
}

fn estimate_json(est: &RadiusEstimate) -> Value {
    json!({
        "log_radius": log_radius_string(&est.log_radius),
        "kind": est.kind,
        "window": est.window,
        "caveat": est.caveat,
    })
}

fn radius(
    json_mode: bool,
    series: Option<&Path>,
    base: Option<String>,
    to_base: Option<String>,
    window_start: Option<usize>,
    rule: Option<String>,
    p: Option<u64>,
) -> Outcome {
    let data = match series {
        Some(path) => {
            let mut all = load_series(&read(path)?, p.map(NatValuation::PAdic))?;
            if all.len() != 1 {
                return Err(UsageError(format!("expected one series, found {}", all.len())));
            }
            Some(all.remove(0))
        }
        None => None,
    };
    let nat_val = data.as_ref().map(|d| match d {
        SeriesData::Tropical(s) => s.nat_val(),
        SeriesData::Classical(a) => a.backend().nat_valuation(),
    });
    let prime = match nat_val {
        Some(NatValuation::PAdic(q)) => Some(q),
        _ => p,
    };
    let base: Rational = match base {
        Some(b) => parse_rational(&b)?,
        None => prime
            .and_then(|q| default_base(FieldBackend::RationalPadic { p: q }))
            .ok_or_else(|| UsageError("no prime to use as base; give --base".into()))?,
    };

    let mut text = String::new();
    let mut value = json!({"schema": "tropdiff.radius/1", "base": format_rational(&base)});
    let mut consistent = true;
    let estimate = match (&rule, &data) {
        (Some(rule_text), _) => {
            let rule = parse_rule(rule_text, prime)?;
            let est = radius_from_rule(&rule)?;
            if let Some(d) = &data {
                let s = d.to_tropical();
                let mismatch = (0..s.len()).find(|&n| *s.coeff(n) != rule.coefficient(n as u64));
                if let Some(n) = mismatch {
                    consistent = false;
                    text += &format!(
                        "series disagrees with the rule at n = {n}: {} vs {}\n",
                        format_trop(s.coeff(n)),
                        format_trop(&rule.coefficient(n as u64))
                    );
                }
                value["rule_matches_series"] = json!(consistent);
            }
            est
        }
        (None, Some(d)) => {
            let len = match d {
                SeriesData::Tropical(s) => s.len(),
                SeriesData::Classical(a) => a.truncation() + 1,
            };
            let start = window_start.unwrap_or(len / 2);
            match d {
                SeriesData::Tropical(s) => {
                    if s.nat_val() == NatValuation::Trivial {
                        return Err(UsageError("radius is undefined over a trivially valued field".into()));
                    }
                    radius_window_estimate(s, start)?
                }
                SeriesData::Classical(a) => classical_radius(a, start)?,
            }
        }
        (None, None) => return Err(UsageError("give --series, --rule, or both".into())),
    };
    text += &estimate.render(&base);
    text += "\n";
    if let Some(caveat) = estimate.caveat {
        text += &format!("caveat: {}\n", serde_json::to_value(caveat)?.as_str().unwrap_or(""));
    }
    if estimate.kind == tropdiff_core::radius::EstimateKind::WindowLowerBound {
        if let Some((a, b)) = estimate.window {
            text += &format!("window estimate over indices {a}..={b}\n");
        }
    }
    value["estimate"] = estimate_json(&estimate);
    if let Some(target) = to_base {
        let target = parse_rational(&target)?;
        let change = base_change(&estimate, &base, &target)?;
        let ratio = match &change.ratio {
            LogRatio::Exact(k) => format_rational(k),
            LogRatio::Approx(x) => format!("{x:.6} (approx)"),
        };
        text += &format!(
            "log_{} r = {} (log_{} {} = {ratio})\n",
            target,
            log_value_string(&change.log_in_new_base),
            base,
            target
        );
        value["base_change"] = json!({
            "to": format_rational(&target),
            "ratio": ratio,
            "log_radius": log_value_string(&change.log_in_new_base),
        });
    }
    emit(json_mode, &value, &text)?;
    Ok(consistent)
}

#[allow(clippy::too_many_arguments)]
fn solve(
    json_mode: bool,
    p: u64,
    g: Option<String>,
    c0: &str,
    truncation: Option<usize>,
    field: &str,
    out: Option<&Path>,
    tropical: bool,
) -> Outcome {
    let backend = match field {
        "eisenstein" => FieldBackend::Eisenstein { p },
        "rational-padic" => FieldBackend::RationalPadic { p },
        other => return Err(UsageError(format!("unknown field {other:?}; use eisenstein or rational-padic"))),
    }
    .validate()?;
    let n = truncation.unwrap_or_else(|| default_truncation(backend));
    let c0 = FieldElem::from_rational(backend, parse_rational(c0)?);
    let ode = match g {
        None if matches!(backend, FieldBackend::Eisenstein { .. }) => {
            let mut ode = exp_ode(p, n);
            ode.c0 = c0;
            ode
        }
        None => return Err(UsageError("the default right-hand side needs zeta; give --g".into())),
        Some(src) => LinearODE {
            g: constant_series(&src, backend, n)?,
            c0,
            truncation: n,
        },
    };
    let sol = solve_linear(&ode);
    let value = if tropical {
        trop_series_json(&tropicalize_series(&sol))
    } else {
        power_series_json(&sol)
    };
    if let Some(path) = out {
        write(path, &value)?;
    }
    let text = format!("x' = ({})*x, truncation {n}\n{}\n", g_display(&ode), summary(&sol));
    if out.is_none() || json_mode {
        emit(json_mode, &value, &text)?;
    } else {
        print!("{text}");
    }
    Ok(true)
}

/// Reads an expression free of `x` as a power series.
fn constant_series(src: &str, backend: FieldBackend, n: usize) -> Result<PowerSeries, UsageError> {
    let f = parse_poly(src, backend, 1, n)?;
    if f.terms().keys().any(|m| !m.is_one()) {
        return Err(UsageError(format!("g must not contain x: {src:?}")));
    }
    Ok(f
        .terms()
        .get(&ExponentMatrix::one())
        .cloned()
        .unwrap_or_else(|| PowerSeries::zero(backend, n)))
}

fn summary(sol: &PowerSeries) -> String {
    let trop = tropicalize_series(sol);
    let finite: Vec<String> = trop
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != TropNum::Inf)
        .map(|(k, c)| format!("{k}:{}", format_trop(c)))
        .collect();
    format!("trop(x) = {{{}}}", finite.join(", "))
}

fn g_display(ode: &LinearODE) -> String {
    tropdiff_core::DiffPoly::constant(1, ode.g.clone()).to_string()
}
