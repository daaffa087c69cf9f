//! Ritt differential polynomials over truncated `K[[t]]`, their tropical
//! images over 𝕋₂ and 𝕋, and the evaluation maps that decide tropical
//! solutions.
//!
//! A monomial `Π (x_i^{(j)})^{λ_{i,j}}` is keyed by an [`ExponentMatrix`].
//! Variables are 0-based internally and print as `x` (one variable) or
//! `x1, x2, …`.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::field::{field_val, FieldBackend, FieldElem};
use crate::series::{rank2_val, BoolSeries, Leading, PowerSeries, TropSeries};
use crate::tropical::{tropically_vanishes, Semiring};
use crate::{qi, Error, Rational, Result, Trop2, TropNum};

/// Sparse exponent matrix `(variable, derivative order) ↦ exponent`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExponentMatrix(BTreeMap<(usize, usize), u32>);

impl ExponentMatrix {
    pub fn one() -> Self {
        ExponentMatrix(BTreeMap::new())
    }

    /// The monomial `x_var^{(order)}`.
    pub fn var(var: usize, order: usize) -> Self {
        Self::var_pow(var, order, 1)
    }

    pub fn var_pow(var: usize, order: usize, exp: u32) -> Self {
        let mut m = BTreeMap::new();
        if exp > 0 {
            m.insert((var, order), exp);
        }
        ExponentMatrix(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, var: usize, order: usize) -> u32 {
        self.0.get(&(var, order)).copied().unwrap_or(0)
    }

    /// `((var, order), exponent)` in increasing `(var, order)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.0.iter().map(|(&k, &e)| (k, e))
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    /// Highest derivative order present.
    pub fn order(&self) -> Option<usize> {
        self.0.keys().map(|&(_, j)| j).max()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.keys().map(|&(i, _)| i).max()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&k, &e) in &other.0 {
            *m.entry(k).or_insert(0) += e;
        }
        ExponentMatrix(m)
    }

    /// `x^λ / x_var^{(order)}`, if that variable divides.
    pub fn divide_var(&self, var: usize, order: usize) -> Option<Self> {
        let e = self.exponent(var, order);
        if e == 0 {
            return None;
        }
        let mut m = self.0.clone();
        if e == 1 {
            m.remove(&(var, order));
        } else {
            m.insert((var, order), e - 1);
        }
        Some(ExponentMatrix(m))
    }

    /// Every derivative order shifted up by `k` (`x_i^{(j)} ↦ x_i^{(j+k)}`).
    pub fn shift_orders(&self, k: usize) -> Self {
        ExponentMatrix(self.0.iter().map(|(&(i, j), &e)| ((i, j + k), e)).collect())
    }
}

impl Ord for ExponentMatrix {
    /// Graded, then lexicographic with `x_i^{(j)}` ranked by higher `j` first
    /// and lower `i` first among equal orders.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let keys: BTreeSet<(Reverse<usize>, usize)> = self
                    .0
                    .keys()
                    .chain(other.0.keys())
                    .map(|&(i, j)| (Reverse(j), i))
                    .collect();
                for (Reverse(j), i) in keys {
                    match self.exponent(i, j).cmp(&other.exponent(i, j)) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for ExponentMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Differential polynomial with truncated power-series coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffPoly {
    n: usize,
    backend: FieldBackend,
    truncation: usize,
    terms: BTreeMap<ExponentMatrix, PowerSeries>,
}

impl DiffPoly {
    pub fn zero(n: usize, backend: FieldBackend, truncation: usize) -> Self {
        DiffPoly {
            n,
            backend,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial, truncating every coefficient to `truncation` and
    /// collecting like terms.
    pub fn from_terms(
        n: usize,
        backend: FieldBackend,
        truncation: usize,
        terms: impl IntoIterator<Item = (ExponentMatrix, PowerSeries)>,
    ) -> Self {
        let mut p = Self::zero(n, backend, truncation);
        for (m, c) in terms {
            assert!(m.max_var().is_none_or(|i| i < n), "variable index out of range");
            assert!(c.truncation() >= truncation, "coefficient truncation below polynomial truncation");
            p.add_term(m, c.truncate(truncation));
        }
        p
    }

    pub fn constant(n: usize, c: PowerSeries) -> Self {
        let truncation = c.truncation();
        let backend = c.backend();
        Self::from_terms(n, backend, truncation, [(ExponentMatrix::one(), c)])
    }

    /// `x_var^{(order)}` with coefficient 1.
    pub fn var(n: usize, backend: FieldBackend, truncation: usize, var: usize, order: usize) -> Self {
        Self::from_terms(
            n,
            backend,
            truncation,
            [(
                ExponentMatrix::var(var, order),
                PowerSeries::constant(FieldElem::one(backend), truncation),
            )],
        )
    }

    fn add_term(&mut self, m: ExponentMatrix, c: PowerSeries) {
        let sum = match self.terms.remove(&m) {
            Some(existing) => existing.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> FieldBackend {
        self.backend
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn terms(&self) -> &BTreeMap<ExponentMatrix, PowerSeries> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order among the monomials (`None` if no variable occurs).
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().filter_map(ExponentMatrix::order).max()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(ExponentMatrix::total_degree).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.n, other.n, "variable count mismatch");
        assert_eq!(self.backend, other.backend, "backend mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let truncation = self.truncation.min(other.truncation);
        let mut p = Self::zero(self.n, self.backend, truncation);
        for (m, c) in self.terms.iter().chain(&other.terms) {
            p.add_term(m.clone(), c.truncate(truncation));
        }
        p
    }

    pub fn neg(&self) -> Self {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let truncation = self.truncation.min(other.truncation);
        let mut p = Self::zero(self.n, self.backend, truncation);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1.mul(c2).truncate(truncation));
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let one = PowerSeries::constant(FieldElem::one(self.backend), self.truncation);
        let mut acc = Self::constant(self.n, one);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The derivation extending `d/dt` with `x_i^{(j)} ↦ x_i^{(j+1)}`.
    /// Coefficients lose one degree of truncation.
    pub fn diff(&self) -> Result<Self> {
        if self.truncation == 0 {
            return Err(Error::TruncationExhausted {
                needed: 1,
                available: 0,
            });
        }
        let truncation = self.truncation - 1;
        let mut p = Self::zero(self.n, self.backend, truncation);
        for (m, a) in &self.terms {
            p.add_term(m.clone(), a.derivative()?);
            let a = a.truncate(truncation);
            for ((i, j), e) in m.entries() {
                let rest = m.divide_var(i, j).expect("variable present");
                let shifted = rest.mul(&ExponentMatrix::var(i, j + 1));
                let coeff = a.scale(&FieldElem::from_int(self.backend, e as i64));
                p.add_term(shifted, coeff);
            }
        }
        Ok(p)
    }

    pub fn nth_diff(&self, k: usize) -> Result<Self> {
        if k > self.truncation {
            return Err(Error::TruncationExhausted {
                needed: k,
                available: self.truncation,
            });
        }
        let mut p = self.clone();
        for _ in 0..k {
            p = p.diff()?;
        }
        Ok(p)
    }

    /// Substitutes `d^j a_i` for `x_i^{(j)}`. The result is exact up to
    /// `min(truncation, min_i(trunc(a_i)) − order)`.
    pub fn eval_classical(&self, a: &[PowerSeries]) -> Result<PowerSeries> {
        if a.len() != self.n {
            return Err(Error::Format(format!(
                "expected {} series, got {}",
                self.n,
                a.len()
            )));
        }
        let order = self.order().unwrap_or(0);
        let min_trunc = a.iter().map(PowerSeries::truncation).min().unwrap_or(usize::MAX);
        if !self.terms.keys().all(ExponentMatrix::is_one) && min_trunc < order {
            return Err(Error::TruncationExhausted {
                needed: order,
                available: min_trunc,
            });
        }
        let out_trunc = if self.n == 0 {
            self.truncation
        } else {
            self.truncation.min(min_trunc - order.min(min_trunc))
        };
        let mut derivs: HashMap<(usize, usize), PowerSeries> = HashMap::new();
        let mut total = PowerSeries::zero(self.backend, out_trunc);
        for (m, c) in &self.terms {
            let mut term = c.truncate(out_trunc);
            for ((i, j), e) in m.entries() {
                if let std::collections::hash_map::Entry::Vacant(e) = derivs.entry((i, j)) {
                    e.insert(a[i].nth_derivative(j)?.truncate(out_trunc));
                }
                term = term.mul(&derivs[&(i, j)].pow(e));
            }
            total = total.add(&term);
        }
        Ok(total)
    }

    /// `trop_v`: rank-2 valuation of every coefficient.
    pub fn tropicalize(&self) -> TropDiffPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let lead = rank2_val(c);
                if lead.value.is_inf() {
                    None
                } else {
                    Some((m.clone(), lead.value))
                }
            })
            .collect();
        TropDiffPoly { n: self.n, terms }
    }

    /// `F_r := (d^r f)|_{t=0}`, a polynomial over `K` in the `x_i^{(j)}`.
    pub fn f_lr(&self, r: usize) -> Result<KPoly> {
        let d = self.nth_diff(r)?;
        let mut terms = BTreeMap::new();
        for (m, c) in &d.terms {
            let c0 = c.eval_at_zero();
            if !c0.is_zero() {
                terms.insert(m.clone(), c0.clone());
            }
        }
        Ok(KPoly {
            n: self.n,
            backend: self.backend,
            terms,
        })
    }
}

/// `trop_v` of a polynomial; free function form.
pub fn tropicalize_poly(f: &DiffPoly) -> TropDiffPoly {
    f.tropicalize()
}

/// `{d^k f}_{k ≤ m}`.
pub fn derived_system(f: &DiffPoly, m: usize) -> Result<Vec<DiffPoly>> {
    if m > f.truncation() {
        return Err(Error::TruncationExhausted {
            needed: m,
            available: f.truncation(),
        });
    }
    let mut out = Vec::with_capacity(m + 1);
    let mut cur = f.clone();
    out.push(cur.clone());
    for _ in 0..m {
        cur = cur.diff()?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Tropicalization of [`derived_system`].
pub fn derived_tropical_system(f: &DiffPoly, m: usize) -> Result<Vec<TropDiffPoly>> {
    Ok(derived_system(f, m)?.iter().map(DiffPoly::tropicalize).collect())
}

/// A non-differential polynomial over `K` (the `F_{l,r}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPoly {
    n: usize,
    backend: FieldBackend,
    terms: BTreeMap<ExponentMatrix, FieldElem>,
}

impl KPoly {
    pub fn terms(&self) -> &BTreeMap<ExponentMatrix, FieldElem> {
        &self.terms
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> FieldBackend {
        self.backend
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> Option<usize> {
        self.terms.keys().filter_map(ExponentMatrix::order).max()
    }

    /// Ordinary evaluation with `point[i][j]` substituted for `x_i^{(j)}`.
    pub fn eval(&self, point: &[Vec<FieldElem>]) -> Result<FieldElem> {
        let mut total = FieldElem::zero(self.backend);
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for ((i, j), e) in m.entries() {
                let x = point
                    .get(i)
                    .and_then(|row| row.get(j))
                    .ok_or(Error::MissingVariable { var: i, order: j })?;
                term = &term * &x.pow(e);
            }
            total = &total + &term;
        }
        Ok(total)
    }

    /// `trop_{v_K}`: coefficientwise valuation.
    pub fn tropicalize(&self) -> TropPoly1 {
        TropPoly1 {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field_val(c)))
                .collect(),
        }
    }
}

/// Result of evaluating a tropical polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport<T> {
    pub value: T,
    /// Monomials at which the minimum is attained (empty if the value is `∞`).
    pub attainment: Vec<ExponentMatrix>,
    pub vanishes: bool,
    /// Some leading term needed here was `∞` only for lack of known coefficients.
    pub truncation_limited: bool,
}

fn report_from_terms<S: Semiring>(terms: Vec<(ExponentMatrix, S)>, truncation_limited: bool) -> EvalReport<S> {
    let values: Vec<S> = terms.iter().map(|(_, w)| w.clone()).collect();
    let v = tropically_vanishes(&values);
    EvalReport {
        value: v.sum,
        attainment: v.attained.into_iter().map(|k| terms[k].0.clone()).collect(),
        vanishes: v.vanishes,
        truncation_limited,
    }
}

/// Tropical differential polynomial with 𝕋₂ coefficients (basic subring).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropDiffPoly {
    n: usize,
    terms: BTreeMap<ExponentMatrix, Trop2>,
}

impl TropDiffPoly {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (ExponentMatrix, Trop2)>) -> Self {
        TropDiffPoly {
            n,
            terms: terms.into_iter().filter(|(_, c)| c.is_finite()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ExponentMatrix, Trop2> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Plugs `Φ(d^j S_i)` into `x_i^{(j)}` and tests tropical vanishing.
    pub fn eval_tropical(&self, s: &[TropSeries]) -> EvalReport<Trop2> {
        let mut cache: HashMap<(usize, usize), Leading<Trop2>> = HashMap::new();
        let mut limited = false;
        let mut weights = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut w = c.clone();
            for ((i, j), e) in m.entries() {
                let lead = cache
                    .entry((i, j))
                    .or_insert_with(|| s[i].nth_diff(j).phi_leading());
                limited |= lead.truncation_limited;
                w = w.otimes(&lead.value.pow(e));
            }
            weights.push((m.clone(), w));
        }
        report_from_terms(weights, limited)
    }

    /// Evaluation of each monomial `M_λ(S)` (without the coefficient).
    pub fn monomial_values(&self, s: &[TropSeries]) -> Vec<(ExponentMatrix, Leading<Trop2>)> {
        self.terms
            .keys()
            .map(|m| {
                let mut w = Trop2::unit();
                let mut limited = false;
                for ((i, j), e) in m.entries() {
                    let lead = s[i].nth_diff(j).phi_leading();
                    limited |= lead.truncation_limited;
                    w = w.otimes(&lead.value.pow(e));
                }
                (
                    m.clone(),
                    Leading {
                        value: w,
                        truncation_limited: limited,
                    },
                )
            })
            .collect()
    }

    /// `⊙`-multiplication of every coefficient by `c`.
    pub fn scale(&self, c: &Trop2) -> Self {
        Self::new(self.n, self.terms.iter().map(|(m, w)| (m.clone(), w.otimes(c))))
    }

    /// Image under σ₀: Grigoriev's tropicalization `trop_w`, recording only
    /// the `t`-order of each coefficient.
    pub fn project_grigoriev(&self) -> TropPoly1 {
        TropPoly1 {
            n: self.n,
            terms: self.terms.iter().map(|(m, w)| (m.clone(), w.first())).collect(),
        }
    }
}

/// Tropical polynomial with 𝕋 coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropPoly1 {
    n: usize,
    terms: BTreeMap<ExponentMatrix, TropNum>,
}

impl TropPoly1 {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (ExponentMatrix, TropNum)>) -> Self {
        TropPoly1 {
            n,
            terms: terms.into_iter().filter(|(_, c)| c.is_finite()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ExponentMatrix, TropNum> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Min-plus evaluation at `b[i][j]` for `x_i^{(j)}`, forgetting the
    /// differential relations between the variables.
    pub fn eval(&self, b: &[Vec<TropNum>]) -> Result<EvalReport<TropNum>> {
        let mut weights = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut w = c.clone();
            for ((i, j), e) in m.entries() {
                let x = b
                    .get(i)
                    .and_then(|row| row.get(j))
                    .ok_or(Error::MissingVariable { var: i, order: j })?;
                w = w.otimes(&x.pow(e));
            }
            weights.push((m.clone(), w));
        }
        Ok(report_from_terms(weights, false))
    }

    /// Evaluation in Grigoriev's pair: plug `Φ(d^j S_i)` for Boolean series.
    pub fn eval_grigoriev(&self, s: &[BoolSeries]) -> EvalReport<TropNum> {
        let mut limited = false;
        let mut cache: HashMap<(usize, usize), Leading<TropNum>> = HashMap::new();
        let mut weights = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut w = c.clone();
            for ((i, j), e) in m.entries() {
                let lead = cache.entry((i, j)).or_insert_with(|| {
                    let mut d = s[i].clone();
                    for _ in 0..j {
                        d = d.diff();
                    }
                    d.leading()
                });
                limited |= lead.truncation_limited;
                w = w.otimes(&lead.value.pow(e));
            }
            weights.push((m.clone(), w));
        }
        report_from_terms(weights, limited)
    }
}

/// Free-function form of [`TropDiffPoly::eval_tropical`].
pub fn eval_tropical(g: &TropDiffPoly, s: &[TropSeries]) -> EvalReport<Trop2> {
    g.eval_tropical(s)
}

/// Free-function form of [`TropPoly1::eval`].
pub fn eval_trop1(g: &TropPoly1, b: &[Vec<TropNum>]) -> Result<EvalReport<TropNum>> {
    g.eval(b)
}

/// Verdict of a tropical solution check over a finite system.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionReport {
    pub reports: Vec<EvalReport<Trop2>>,
    /// Every equation tropically vanishes.
    pub solves: bool,
    /// Some verdict relies on a leading term cut off by truncation.
    pub truncation_limited: bool,
}

impl SolutionReport {
    /// Index of the first equation that does not vanish.
    pub fn first_failure(&self) -> Option<usize> {
        self.reports.iter().position(|r| !r.vanishes)
    }
}

pub fn is_tropical_solution(system: &[TropDiffPoly], s: &[TropSeries]) -> SolutionReport {
    let reports: Vec<_> = system.iter().map(|g| g.eval_tropical(s)).collect();
    SolutionReport {
        solves: reports.iter().all(|r| r.vanishes),
        truncation_limited: reports.iter().any(|r| r.truncation_limited),
        reports,
    }
}

/// `Σ` over the monomials of `(α, β)`-values; helper for the closed forms of
/// the exponential example.
pub fn trop2(alpha: i64, beta: Rational) -> Trop2 {
    Trop2::new(qi(alpha), beta)
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_poly(self))
    }
}

impl fmt::Display for TropDiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_trop_poly(self))
    }
}

impl fmt::Display for TropPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_trop_poly1(self))
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_kpoly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use crate::valuation::NatValuation;

    const E3: FieldBackend = FieldBackend::Eisenstein { p: 3 };

    fn zeta() -> FieldElem {
        FieldElem::zeta(E3).unwrap()
    }

    fn c(x: FieldElem) -> FieldElem {
        x
    }

    /// `x' − 3ζt²x` with truncation `n`.
    fn exp_equation(n: usize) -> DiffPoly {
        let coeff = PowerSeries::monomial(&FieldElem::from_int(E3, -3) * &zeta(), 2, n);
        DiffPoly::var(1, E3, n, 0, 1).add(&DiffPoly::from_terms(
            1,
            E3,
            n,
            [(ExponentMatrix::var(0, 0), coeff)],
        ))
    }

    fn mono(order: usize) -> ExponentMatrix {
        ExponentMatrix::var(0, order)
    }

    #[test]
    fn derivative_of_exp_equation() {
        let f = exp_equation(10);
        let df = f.diff().unwrap();
        assert_eq!(df.truncation(), 9);
        let expected = DiffPoly::from_terms(
            1,
            E3,
            9,
            [
                (mono(2), PowerSeries::constant(FieldElem::one(E3), 9)),
                (mono(0), PowerSeries::monomial(c(&FieldElem::from_int(E3, -6) * &zeta()), 1, 9)),
                (mono(1), PowerSeries::monomial(c(&FieldElem::from_int(E3, -3) * &zeta()), 2, 9)),
            ],
        );
        assert_eq!(df, expected);
    }

    #[test]
    fn derivative_basics() {
        let one = PowerSeries::constant(FieldElem::one(E3), 4);
        assert!(DiffPoly::constant(1, one).diff().unwrap().is_zero());
        assert_eq!(DiffPoly::var(1, E3, 4, 0, 0).diff().unwrap(), DiffPoly::var(1, E3, 3, 0, 1));
        assert!(matches!(
            DiffPoly::var(1, E3, 0, 0, 0).diff(),
            Err(Error::TruncationExhausted { .. })
        ));
    }

    #[test]
    fn tropicalization_of_exp_equation() {
        let f = exp_equation(10);
        let t = f.tropicalize();
        let expected = TropDiffPoly::new(1, [(mono(1), Trop2::unit()), (mono(0), trop2(2, q(3, 2)))]);
        assert_eq!(t, expected);
        let dt = f.diff().unwrap().tropicalize();
        let expected = TropDiffPoly::new(
            1,
            [
                (mono(2), Trop2::unit()),
                (mono(0), trop2(1, q(3, 2))),
                (mono(1), trop2(2, q(3, 2))),
            ],
        );
        assert_eq!(dt, expected);
        assert!(DiffPoly::zero(1, E3, 3).tropicalize().is_empty());
    }

    #[test]
    fn running_example_monomial() {
        // M = x·x''' at S = 0t ⊕ 1t³ over 𝕋[[t]]_{v₃}.
        let m = ExponentMatrix::var(0, 0).mul(&ExponentMatrix::var(0, 3));
        let g = TropDiffPoly::new(1, [(m.clone(), Trop2::unit())]);
        let s = TropSeries::from_sparse(NatValuation::PAdic(3), 8, [(1, qi(0)), (3, qi(1))]);
        let r = g.eval_tropical(&[s]);
        assert_eq!(r.value, trop2(1, qi(2)));
        assert!(!r.vanishes);

        let g1 = TropPoly1::new(1, [(m, TropNum::new(qi(0)))]);
        let b = vec![vec![TropNum::Inf, TropNum::new(qi(0)), TropNum::Inf, TropNum::new(qi(2))]];
        let r = g1.eval(&b).unwrap();
        assert_eq!(r.value, TropNum::Inf);
        assert!(r.vanishes);
    }

    #[test]
    fn f_lr_examples() {
        let f = exp_equation(10);
        assert_eq!(f.f_lr(0).unwrap().terms().keys().cloned().collect::<Vec<_>>(), vec![mono(1)]);
        assert_eq!(f.f_lr(1).unwrap().terms().keys().cloned().collect::<Vec<_>>(), vec![mono(2)]);
        let f2 = f.f_lr(2).unwrap();
        assert_eq!(f2.terms().len(), 2);
        assert!(f2.terms()[&mono(3)].is_one());
        assert_eq!(f2.terms()[&mono(0)], &FieldElem::from_int(E3, -6) * &zeta());
        let t = f2.tropicalize();
        assert_eq!(t.terms()[&mono(0)], TropNum::new(q(3, 2)));
        assert_eq!(t.terms()[&mono(3)], TropNum::new(qi(0)));

        let x = DiffPoly::var(1, E3, 6, 0, 0);
        for r in 0..4 {
            let fr = x.f_lr(r).unwrap();
            assert_eq!(fr.terms().keys().cloned().collect::<Vec<_>>(), vec![mono(r)]);
        }
    }

    #[test]
    fn trop1_missing_variable() {
        let g = TropPoly1::new(1, [(mono(4), TropNum::new(qi(0)))]);
        assert_eq!(
            g.eval(&[vec![TropNum::Inf]]),
            Err(Error::MissingVariable { var: 0, order: 4 })
        );
        let empty = TropPoly1::new(1, []);
        let r = empty.eval(&[vec![]]).unwrap();
        assert!(r.value.is_inf() && r.vanishes);
    }

    #[test]
    fn classical_eval_basics() {
        let b = FieldBackend::RationalPadic { p: 3 };
        let a = PowerSeries::from_coeffs(b, (0..5).map(|k| FieldElem::from_int(b, k)).collect());
        let x = DiffPoly::var(1, b, 5, 0, 0);
        assert_eq!(x.eval_classical(std::slice::from_ref(&a)).unwrap(), a);
        let one = DiffPoly::constant(1, PowerSeries::constant(FieldElem::one(b), 5));
        let r = one.eval_classical(&[a]).unwrap();
        assert!(r.coeff(0).is_one() && r.coeffs()[1..].iter().all(FieldElem::is_zero));
    }

    #[test]
    fn exponent_order() {
        let mut ms = [mono(0), mono(1), mono(0).mul(&mono(1)), mono(3), ExponentMatrix::one()];
        ms.sort();
        assert_eq!(ms[0], ExponentMatrix::one());
        assert_eq!(ms[1], mono(0));
        assert_eq!(ms[3], mono(3));
        assert_eq!(ms[4], mono(0).mul(&mono(1)));
    }
}
