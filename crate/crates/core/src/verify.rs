//! Truncation-scale checks of the fundamental theorem: a classical oracle for
//! first-order linear ODEs, the inclusion "tropicalized solutions solve the
//! tropicalization", the `B_m` truncation checks, and a full reproduction of
//! the `p`-adic exponential example.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::diffpoly::{
    derived_tropical_system, is_tropical_solution, DiffPoly, ExponentMatrix, TropDiffPoly,
};
use crate::field::{FieldBackend, FieldElem, ResidueElem};
use crate::gen;
use crate::initial::{initial_form, initial_system_monomial_check, ResiduePoly};
use crate::radius::{radius_from_rule, radius_window_estimate, LogRadius, RadiusRule};
use crate::series::{
    factorial, psi_trop_inverse, sigma0, sigma_to_grigoriev, tropicalize_series, PowerSeries,
    TropSeries,
};
use crate::valuation::{check_prime, v_p, v_p_factorial, NatValuation};
use crate::{q, qi, Error, Result, Trop2, TropNum};

pub const REPORT_SCHEMA: &str = "tropdiff.report/1";

/// Allowed distance of a window radius estimate from the exact value.
pub const WINDOW_TOLERANCE: f64 = 0.15;

/// `x' = g·x`, `x(0) = c₀`, solved up to `t^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearODE {
    pub g: PowerSeries,
    pub c0: FieldElem,
    pub truncation: usize,
}

impl LinearODE {
    /// The differential polynomial `x' − g·x`.
    pub fn equation(&self) -> DiffPoly {
        let n = self.g.truncation();
        let b = self.g.backend();
        DiffPoly::var(1, b, n, 0, 1).sub(&DiffPoly::from_terms(
            1,
            b,
            n,
            [(ExponentMatrix::var(0, 0), self.g.clone())],
        ))
    }
}

/// Power-series solution by `c_{k+1} = (1/(k+1)) Σ_{j≤k} g_j c_{k−j}`.
pub fn solve_linear(ode: &LinearODE) -> PowerSeries {
    let b = ode.g.backend();
    let n = ode.truncation;
    assert!(ode.g.truncation() + 1 >= n, "g must be known up to t^(N-1)");
    let mut c = vec![FieldElem::zero(b); n + 1];
    c[0] = ode.c0.clone();
    for k in 0..n {
        let mut acc = FieldElem::zero(b);
        for j in 0..=k {
            acc = &acc + &(ode.g.coeff(j) * &c[k - j]);
        }
        c[k + 1] = acc.scale(&qi(k as i64 + 1).recip());
    }
    let sol = PowerSeries::from_coeffs(b, c);
    if n >= 1 {
        let residual = ode
            .equation()
            .eval_classical(std::slice::from_ref(&sol))
            .expect("solution has enough coefficients");
        assert!(residual.is_zero(), "recurrence oracle left a nonzero residual");
    }
    sol
}

/// `x' − pζt^{p−1}x` over the Eisenstein backend.
pub fn exp_equation(p: u64, truncation: usize) -> DiffPoly {
    exp_ode(p, truncation).equation()
}

/// The linear ODE solved by `exp(ζt^p)`.
pub fn exp_ode(p: u64, truncation: usize) -> LinearODE {
    let b = FieldBackend::Eisenstein { p };
    let c = &FieldElem::from_int(b, p as i64) * &FieldElem::zeta(b).expect("Eisenstein backend");
    LinearODE {
        g: PowerSeries::monomial(c, (p - 1) as usize, truncation),
        c0: FieldElem::one(b),
        truncation,
    }
}

/// `a_{mp} = m/(p−1) − v_p(m!)`, `∞` elsewhere.
pub fn exp_solution_closed_form(p: u64, truncation: usize) -> TropSeries {
    let entries = (0..=truncation / p as usize).map(|m| {
        let v = q(m as i64, p as i64 - 1) - qi(v_p_factorial(m as u64, p) as i64);
        (m * p as usize, v)
    });
    TropSeries::from_sparse(NatValuation::PAdic(p), truncation, entries)
}

fn binomial(n: u64, k: u64) -> i64 {
    (factorial(n) / (factorial(k) * factorial(n - k)))
        .to_integer()
        .to_i64()
        .expect("binomial fits i64")
}

/// Closed form of `trop(d^n f)` for `f = x' − pζt^{p−1}x`.
pub fn exp_derived_closed_form(p: u64, n: u64) -> TropDiffPoly {
    let shift = q(p as i64, p as i64 - 1);
    let x = |j: u64| ExponentMatrix::var(0, j as usize);
    let mut terms = vec![(x(n + 1), Trop2::new(qi(0), qi(0)))];
    if n < p {
        for i in 0..=n {
            let beta = qi(v_p(binomial(n, i), p).unwrap() as i64) + &shift;
            terms.push((x(i), Trop2::new(qi((p - 1 - n + i) as i64), beta)));
        }
    } else {
        for i in 0..p {
            let beta = qi(v_p(binomial(n, p - 1 - i), p).unwrap() as i64) + &shift;
            terms.push((x(i + n - p + 1), Trop2::new(qi(i as i64), beta)));
        }
    }
    TropDiffPoly::new(1, terms)
}

/// One row of a tropical-vanishing table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingRow {
    pub generator: usize,
    pub order: usize,
    pub value: String,
    pub attained: usize,
    pub vanishes: bool,
    pub truncation_limited: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionSection {
    pub order: usize,
    pub truncation: usize,
    pub rows: Vec<VanishingRow>,
    pub passed: bool,
    pub truncation_limited: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub generator: usize,
    pub r: usize,
    pub value: String,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSection {
    pub order: usize,
    pub rows: Vec<LemmaRow>,
    pub passed: bool,
}

/// Checks that the tropicalization of a classical solution solves every
/// `trop(d^k f)`, `k ≤ m`.
pub fn check_easy_inclusion(generators: &[DiffPoly], sol: &[PowerSeries], m: usize) -> Result<InclusionSection> {
    for f in generators {
        let residual = f.eval_classical(sol)?;
        if let Some(k) = residual.order() {
            return Err(Error::NotAClassicalSolution(k));
        }
    }
    let s: Vec<TropSeries> = sol.iter().map(tropicalize_series).collect();
    let mut rows = Vec::new();
    for (l, f) in generators.iter().enumerate() {
        let system = derived_tropical_system(f, m)?;
        let report = is_tropical_solution(&system, &s);
        for (k, r) in report.reports.iter().enumerate() {
            rows.push(VanishingRow {
                generator: l,
                order: k,
                value: r.value.to_string(),
                attained: r.attainment.len(),
                vanishes: r.vanishes,
                truncation_limited: r.truncation_limited,
            });
        }
    }
    Ok(InclusionSection {
        order: m,
        truncation: sol.iter().map(PowerSeries::truncation).min().unwrap_or(0),
        passed: rows.iter().all(|r| r.vanishes),
        truncation_limited: rows.iter().any(|r| r.truncation_limited),
        rows,
    })
}

/// `B_m`: `b_{i,j} = c_{i,j} + v(j!)` for `j ≤ ord(f) + m`.
pub fn truncation_vectors(s: &[TropSeries], len: usize) -> Result<Vec<Vec<TropNum>>> {
    s.iter()
        .map(|si| {
            let b = psi_trop_inverse(si);
            if b.len() < len {
                return Err(Error::TruncationExhausted {
                    needed: len - 1,
                    available: b.len().saturating_sub(1),
                });
            }
            Ok(b[..len].to_vec())
        })
        .collect()
}

/// Evaluates every `trop(F_{l,r})`, `r ≤ m`, at `B_m` and checks vanishing.
pub fn check_lemma_truncation(generators: &[DiffPoly], s: &[TropSeries], m: usize) -> Result<LemmaSection> {
    let mut rows = Vec::new();
    for (l, f) in generators.iter().enumerate() {
        let len = f.order().unwrap_or(0) + m + 1;
        let b = truncation_vectors(s, len)?;
        for r in 0..=m {
            let report = f.f_lr(r)?.tropicalize().eval(&b)?;
            rows.push(LemmaRow {
                generator: l,
                r,
                value: report.value.to_string(),
                vanishes: report.vanishes,
            });
        }
    }
    Ok(LemmaSection {
        order: m,
        passed: rows.iter().all(|r| r.vanishes),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSection {
    pub seed: u64,
    pub count: usize,
    pub p: u64,
    pub truncation: usize,
    pub order: usize,
    pub easy_inclusion_passed: usize,
    pub lemma_passed: usize,
    pub truncation_limited: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FTReport {
    pub schema: String,
    pub backend: String,
    pub p: u64,
    pub truncation: usize,
    pub order: usize,
    pub steps: Vec<Step>,
    pub easy_inclusion: Option<InclusionSection>,
    pub lemma: Option<LemmaSection>,
    pub random: Option<RandomSection>,
    pub all_passed: bool,
}

impl FTReport {
    /// Plain-text rendering of the structured report.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "tropdiff report ({}) backend={} N={} m={}\n",
            self.schema, self.backend, self.truncation, self.order
        );
        for (k, s) in self.steps.iter().enumerate() {
            let mark = if s.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}. {}: {}\n", k + 1, s.name, s.detail));
        }
        if let Some(r) = &self.random {
            out.push_str(&format!(
                "  random ODEs (seed {}, p={}, N={}, m={}): easy inclusion {}/{}, B_m checks {}/{}, truncation-limited {}\n",
                r.seed, r.p, r.truncation, r.order, r.easy_inclusion_passed, r.count, r.lemma_passed, r.count, r.truncation_limited
            ));
        }
        out.push_str(if self.all_passed { "ALL PASS\n" } else { "FAILED\n" });
        out
    }
}

fn step(name: &str, passed: bool, detail: impl Into<String>) -> Step {
    Step {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// Runs the seven-step reproduction of the exponential example: oracle
/// solution, tropicalization, closed-form coefficients, derived-system
/// solution check, initial form, radius, and the projection to Grigoriev's
/// setting. Stops at the first failing step.
pub fn reproduce_exp_example(p: u64, truncation: usize, m: usize) -> Result<FTReport> {
    check_prime(p)?;
    if m > truncation {
        return Err(Error::TruncationExhausted {
            needed: m,
            available: truncation,
        });
    }
    let backend = FieldBackend::Eisenstein { p };
    let mut report = FTReport {
        schema: REPORT_SCHEMA.into(),
        backend: backend.name(),
        p,
        truncation,
        order: m,
        steps: Vec::new(),
        easy_inclusion: None,
        lemma: None,
        random: None,
        all_passed: false,
    };
    let pu = p as usize;
    let ode = exp_ode(p, truncation);
    let f = ode.equation();

    let sol = solve_linear(&ode);
    let zeta = FieldElem::zeta(backend)?;
    let ok = (0..=truncation).all(|k| {
        let expected = if k % pu == 0 {
            let mm = (k / pu) as u64;
            zeta.pow(mm as u32).scale(&factorial(mm).recip())
        } else {
            FieldElem::zero(backend)
        };
        *sol.coeff(k) == expected
    });
    report.steps.push(step(
        "oracle solution",
        ok,
        format!("c_(mp) = zeta^m/m! and zero elsewhere for k <= {truncation}"),
    ));
    if !ok {
        return Ok(report);
    }

    let s = tropicalize_series(&sol);
    report.steps.push(step("tropicalize", true, format!("S = {s}")));

    let closed = exp_solution_closed_form(p, truncation);
    let ok = s == closed;
    report.steps.push(step(
        "closed-form coefficients",
        ok,
        "a_(mp) = m/(p-1) - v_p(m!), inf elsewhere",
    ));
    if !ok {
        return Ok(report);
    }

    let system = derived_tropical_system(&f, m)?;
    let forms_ok = system
        .iter()
        .enumerate()
        .all(|(n, g)| *g == exp_derived_closed_form(p, n as u64));
    let verdict = is_tropical_solution(&system, std::slice::from_ref(&s));
    let inclusion = check_easy_inclusion(std::slice::from_ref(&f), std::slice::from_ref(&sol), m)?;
    let lemma = check_lemma_truncation(std::slice::from_ref(&f), std::slice::from_ref(&s), m)?;
    let ok = forms_ok && verdict.solves && !verdict.truncation_limited && inclusion.passed && lemma.passed;
    report.steps.push(step(
        "tropical solution",
        ok,
        format!(
            "closed forms of trop(d^n f) {}; S solves trop(d^n f) for n <= {m}: {}; B_m checks: {}",
            if forms_ok { "match" } else { "differ" },
            verdict.solves,
            lemma.passed
        ),
    ));
    report.easy_inclusion = Some(inclusion);
    report.lemma = Some(lemma);
    if !ok {
        return Ok(report);
    }

    let form = initial_form(&f, std::slice::from_ref(&s))?;
    let field = backend.residue_field();
    let expected = ResiduePoly::from_terms(
        1,
        field,
        [
            (ExponentMatrix::var(0, 1), ResidueElem::one(field)),
            (ExponentMatrix::var(0, 0), ResidueElem::one(field)),
        ],
    );
    let check = initial_system_monomial_check(std::slice::from_ref(&f), std::slice::from_ref(&s), m)?;
    let ok = form.poly == expected && check.monomial_free;
    report.steps.push(step(
        "initial form",
        ok,
        format!(
            "in_S(f) = {} over F_{p}; no monomial among in_S(d^k f), k <= {m}: {}",
            form.poly, check.monomial_free
        ),
    ));
    if !ok {
        return Ok(report);
    }

    let exact = radius_from_rule(&RadiusRule::exponential(p))?;
    let window = radius_window_estimate(&s, truncation / 2)?;
    let window_ok = match &window.log_radius {
        LogRadius::Finite(l) => l.to_f64().is_some_and(|l| l.abs() <= WINDOW_TOLERANCE),
        _ => false,
    };
    let ok = exact.log_radius == LogRadius::Finite(qi(0)) && window_ok;
    report.steps.push(step(
        "radius",
        ok,
        format!(
            "rule: {}; window [{}, {truncation}]: log_r = {}",
            exact.render(&qi(p as i64)),
            truncation / 2,
            window.log_radius
        ),
    ));
    if !ok {
        return Ok(report);
    }

    let ok = sigma_consistent(&f, &s, m)?;
    report.steps.push(step(
        "projection to Grigoriev mode",
        ok,
        "sigma commutes with the leading-term maps and the projected system vanishes at sigma(S)",
    ));
    report.all_passed = report.steps.iter().all(|s| s.passed);
    Ok(report)
}

/// σ₀∘Φ = Φ∘σ₁ on every `d^j S` needed by the derived system, and the
/// σ₀-projection of each `trop(d^k f)` vanishes at `σ₁(S)`.
pub fn sigma_consistent(f: &DiffPoly, s: &TropSeries, m: usize) -> Result<bool> {
    let b = sigma_to_grigoriev(s);
    let max_j = f.order().unwrap_or(0) + m;
    let mut ok = true;
    let mut ds = s.clone();
    let mut db = b.clone();
    for _ in 0..=max_j {
        ok &= sigma0(&ds.phi_leading().value) == db.leading().value;
        ds = ds.trop_diff();
        db = db.diff();
    }
    for g in derived_tropical_system(f, m)? {
        ok &= g.project_grigoriev().eval_grigoriev(std::slice::from_ref(&b)).vanishes;
    }
    Ok(ok)
}

/// Easy inclusion and `B_m` checks on `count` seeded random linear ODEs over
/// `ℚ` with the `p`-adic valuation.
pub fn random_linear_checks(seed: u64, count: usize, p: u64, truncation: usize, m: usize, max_degree: usize) -> Result<RandomSection> {
    let mut rng = gen::rng(seed);
    let mut section = RandomSection {
        seed,
        count,
        p,
        truncation,
        order: m,
        easy_inclusion_passed: 0,
        lemma_passed: 0,
        truncation_limited: 0,
    };
    for _ in 0..count {
        let ode = gen::linear_ode(&mut rng, p, truncation, max_degree);
        let sol = solve_linear(&ode);
        let f = ode.equation();
        let inc = check_easy_inclusion(std::slice::from_ref(&f), std::slice::from_ref(&sol), m)?;
        section.easy_inclusion_passed += inc.passed as usize;
        section.truncation_limited += inc.truncation_limited as usize;
        let s = tropicalize_series(&sol);
        let lemma = check_lemma_truncation(std::slice::from_ref(&f), std::slice::from_ref(&s), m)?;
        section.lemma_passed += lemma.passed as usize;
    }
    Ok(section)
}

/// Reproduction plus random-ODE checks; the `verify-ft` report.
pub fn verify_ft(p: u64, truncation: usize, m: usize, seed: u64, count: usize) -> Result<FTReport> {
    let mut report = reproduce_exp_example(p, truncation, m)?;
    let random = random_linear_checks(seed, count, p, truncation, m, 3)?;
    report.all_passed &= random.easy_inclusion_passed == count && random.lemma_passed == count;
    report.random = Some(random);
    Ok(report)
}

/// The exponential solution with `a_p` raised by one.
pub fn perturbed_exp_solution(p: u64, truncation: usize) -> TropSeries {
    let mut s = exp_solution_closed_form(p, truncation);
    let bumped = s.coeff(p as usize).shift(&qi(1));
    s.set_coeff(p as usize, bumped);
    s
}
