//! Tropical radius of convergence.
//!
//! For a tropical series `A = Σ aᵢtⁱ` and a base `c > 1`, the radius `r_c(A)`
//! is the supremum of the `r` with `c^{−aᵢ}rⁱ → 0`. Taking `log_c`, this is
//! the condition `i·(log_c r − aᵢ/i) → −∞`, so `log_c r_c = liminf aᵢ/i`.
//! Radii are kept in log space as exact rationals; the numeric radius `c^L`
//! is only formed for display.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::field::FieldBackend;
use crate::series::{tropicalize_series, PowerSeries, TropSeries};
use crate::valuation::{check_prime, v_p_factorial, NatValuation};
use crate::{qi, Error, Rational, Result, TropNum};

/// `log_c r`, with `+∞` for `r = ∞` and `−∞` for `r = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogRadius {
    Finite(Rational),
    PlusInf,
    MinusInf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateKind {
    ExactFromRule,
    WindowLowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Caveat {
    /// No finite coefficient in the window; `r = ∞` is only a candidate.
    EmptyWindow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusEstimate {
    pub log_radius: LogRadius,
    pub kind: EstimateKind,
    /// Inclusive index window used by a window estimate.
    pub window: Option<(usize, usize)>,
    pub caveat: Option<Caveat>,
}

/// Sequences with `a_n = ∞` unless `n = d·m`, where
/// `a_{dm} = q·m + offset − [corr]·v_p(m!)`; or the all-`∞` tail of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadiusRule {
    Arithmetic {
        stride: u64,
        slope: Rational,
        offset: Rational,
        factorial_correction: bool,
        p: u64,
    },
    Terminating,
}

impl RadiusRule {
    /// The coefficient law of `exp(ζt^p)`: stride `p`, slope `1/(p−1)`,
    /// offset 0, with the factorial correction.
    pub fn exponential(p: u64) -> Self {
        RadiusRule::Arithmetic {
            stride: p,
            slope: Rational::new(1.into(), (p as i64 - 1).into()),
            offset: Rational::zero(),
            factorial_correction: true,
            p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let RadiusRule::Arithmetic { stride, p, .. } = self {
            if *stride == 0 {
                return Err(Error::InvalidRule("stride must be positive".into()));
            }
            check_prime(*p).map_err(|_| Error::InvalidRule(format!("{p} is not prime")))?;
        }
        Ok(())
    }

    /// `a_n` under the rule.
    pub fn coefficient(&self, n: u64) -> TropNum {
        match self {
            RadiusRule::Terminating => TropNum::Inf,
            RadiusRule::Arithmetic {
                stride,
                slope,
                offset,
                factorial_correction,
                p,
            } => {
                if !n.is_multiple_of(*stride) {
                    return TropNum::Inf;
                }
                let m = n / stride;
                let mut a = slope * qi(m as i64) + offset;
                if *factorial_correction {
                    a -= qi(v_p_factorial(m, *p) as i64);
                }
                TropNum::new(a)
            }
        }
    }

    /// The first `truncation + 1` coefficients as a tropical series.
    pub fn series(&self, nat_val: NatValuation, truncation: usize) -> TropSeries {
        TropSeries::new(nat_val, (0..=truncation as u64).map(|n| self.coefficient(n)).collect())
    }
}

/// Exact `log_c r` for a rule-described sequence: `(q − [corr]/(p−1))/d`.
/// The digit-sum part of Legendre's formula contributes nothing to the
/// liminf (it stays 1 along `m = p^k`).
pub fn radius_from_rule(rule: &RadiusRule) -> Result<RadiusEstimate> {
    rule.validate()?;
    let log_radius = match rule {
        RadiusRule::Terminating => LogRadius::PlusInf,
        RadiusRule::Arithmetic {
            stride,
            slope,
            factorial_correction,
            p,
            ..
        } => {
            let mut l = slope.clone();
            if *factorial_correction {
                l -= Rational::new(1.into(), (*p as i64 - 1).into());
            }
            LogRadius::Finite(l / qi(*stride as i64))
        }
    };
    Ok(RadiusEstimate {
        log_radius,
        kind: EstimateKind::ExactFromRule,
        window: None,
        caveat: None,
    })
}

/// `min aᵢ/i` over the finite coefficients with `i ≥ window_start` (and
/// `i ≥ 1`). A finite-sample proxy for the liminf; no convergence claim.
pub fn radius_window_estimate(a: &TropSeries, window_start: usize) -> Result<RadiusEstimate> {
    let truncation = a.truncation().unwrap_or(0);
    if a.is_empty() || window_start >= truncation {
        return Err(Error::BadWindow {
            start: window_start,
            truncation,
        });
    }
    let best = (window_start.max(1)..=truncation)
        .filter_map(|i| a.coeff(i).finite().map(|v| v / qi(i as i64)))
        .min();
    let (log_radius, caveat) = match best {
        Some(l) => (LogRadius::Finite(l), None),
        None => (LogRadius::PlusInf, Some(Caveat::EmptyWindow)),
    };
    Ok(RadiusEstimate {
        log_radius,
        kind: EstimateKind::WindowLowerBound,
        window: Some((window_start, truncation)),
        caveat,
    })
}

/// Radius of a power series over a `p`-adic backend, computed as the window
/// estimate of its tropicalization.
pub fn classical_radius(a: &PowerSeries, window_start: usize) -> Result<RadiusEstimate> {
    if a.backend().is_trivial() {
        return Err(Error::TrivialBackend);
    }
    radius_window_estimate(&tropicalize_series(a), window_start)
}

/// `log_c(c')`, exact when `c` and `c'` are rational powers of a common base.
#[derive(Clone, Debug, PartialEq)]
pub enum LogRatio {
    Exact(Rational),
    Approx(f64),
}

/// The radius `r_c` and its expression relative to another base `c'`.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseChange {
    pub from: Rational,
    pub to: Rational,
    /// `log_c(c')`.
    pub ratio: LogRatio,
    /// `log_{c'}(r_c) = log_c(r_c) / log_c(c')`.
    pub log_in_new_base: LogValue,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LogValue {
    Exact(LogRadius),
    Approx(f64),
}

/// Writes `x = g^k` with `k` maximal, for a rational `x > 0`.
fn primitive_power(x: &Rational) -> (Rational, u32) {
    let bits = x.numer().bits().max(x.denom().bits()) as u32;
    for k in (2..=bits.max(2)).rev() {
        let n = x.numer().nth_root(k);
        let d = x.denom().nth_root(k);
        if num_traits::pow(n.clone(), k as usize) == *x.numer() && num_traits::pow(d.clone(), k as usize) == *x.denom() {
            return (Rational::new(n, d), k);
        }
    }
    (x.clone(), 1)
}

pub fn log_ratio(c: &Rational, c_prime: &Rational) -> Result<LogRatio> {
    for b in [c, c_prime] {
        if *b <= Rational::one() {
            return Err(Error::BadBase(b.to_string()));
        }
    }
    let (g, a) = primitive_power(c);
    let (h, b) = primitive_power(c_prime);
    if g == h {
        return Ok(LogRatio::Exact(Rational::new((b as i64).into(), (a as i64).into())));
    }
    let ln = |x: &Rational| x.to_f64().expect("finite rational").ln();
    Ok(LogRatio::Approx(ln(c_prime) / ln(c)))
}

/// Re-expresses `r_c` in base `c'`. The exponent `log_c r_c` of an estimate
/// does not depend on `c`; only the radius `c^L` does.
pub fn base_change(est: &RadiusEstimate, c: &Rational, c_prime: &Rational) -> Result<BaseChange> {
    let ratio = log_ratio(c, c_prime)?;
    let log_in_new_base = match (&est.log_radius, &ratio) {
        (LogRadius::Finite(l), LogRatio::Exact(k)) => LogValue::Exact(LogRadius::Finite(l / k)),
        (LogRadius::Finite(l), LogRatio::Approx(k)) => {
            if l.is_zero() {
                LogValue::Exact(LogRadius::Finite(Rational::zero()))
            } else {
                LogValue::Approx(l.to_f64().expect("finite rational") / k)
            }
        }
        (inf, _) => LogValue::Exact(inf.clone()),
    };
    Ok(BaseChange {
        from: c.clone(),
        to: c_prime.clone(),
        ratio,
        log_in_new_base,
    })
}

/// `c^L` when `L` is an integer; otherwise `None`.
pub fn exact_radius(c: &Rational, log: &Rational) -> Option<Rational> {
    if !log.is_integer() {
        return None;
    }
    let k = log.to_integer().to_i32()?;
    let pow = num_traits::pow(c.clone(), k.unsigned_abs() as usize);
    Some(if k.is_negative() { pow.recip() } else { pow })
}

impl fmt::Display for LogRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogRadius::Finite(l) => write!(f, "{l}"),
            LogRadius::PlusInf => write!(f, "inf"),
            LogRadius::MinusInf => write!(f, "-inf"),
        }
    }
}

impl RadiusEstimate {
    /// `log_r = L, r = c^L (base c)`.
    pub fn render(&self, base: &Rational) -> String {
        let r = match &self.log_radius {
            LogRadius::PlusInf => "inf".to_string(),
            LogRadius::MinusInf => "0".to_string(),
            LogRadius::Finite(l) => match exact_radius(base, l) {
                Some(r) => r.to_string(),
                None => format!("{base}^({l})"),
            },
        };
        format!("log_r = {}, r = {r} (base {base})", self.log_radius)
    }
}

/// The `p` used as default base for a backend.
pub fn default_base(backend: FieldBackend) -> Option<Rational> {
    backend.prime().map(|p| qi(p as i64))
}
