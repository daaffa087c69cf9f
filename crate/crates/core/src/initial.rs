//! Initial forms `in_S(f)` over the residue field and the monomial test on
//! a derived family of equations.

use std::collections::BTreeMap;
use std::fmt;

use crate::diffpoly::{derived_system, is_tropical_solution, DiffPoly, ExponentMatrix};
use crate::field::{angular_component, ResidueElem, ResidueField};
use crate::series::TropSeries;
use crate::{Result, Trop2};

/// A differential polynomial over the residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePoly {
    n: usize,
    field: ResidueField,
    terms: BTreeMap<ExponentMatrix, ResidueElem>,
}

impl ResiduePoly {
    pub fn zero(n: usize, field: ResidueField) -> Self {
        ResiduePoly {
            n,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n: usize,
        field: ResidueField,
        terms: impl IntoIterator<Item = (ExponentMatrix, ResidueElem)>,
    ) -> Self {
        let mut p = Self::zero(n, field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: ExponentMatrix, c: ResidueElem) {
        let sum = match self.terms.remove(&m) {
            Some(existing) => &existing + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> ResidueField {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<ExponentMatrix, ResidueElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exactly one term; the zero polynomial is not a monomial.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.n, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for ResiduePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_residue_poly(self))
    }
}

/// An initial form with the truncation caveat of the underlying evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialForm {
    pub poly: ResiduePoly,
    pub truncation_limited: bool,
}

/// `in_S(f)`: the angular components of the leading coefficients of the terms
/// attaining the minimum of `trop(f)(S)`, or `0` when that minimum is `∞`.
pub fn initial_form(f: &DiffPoly, s: &[TropSeries]) -> Result<InitialForm> {
    let field = f.backend().residue_field();
    let report = f.tropicalize().eval_tropical(s);
    let mut poly = ResiduePoly::zero(f.nvars(), field);
    if report.value != Trop2::Inf {
        for m in &report.attainment {
            let a = &f.terms()[m];
            let lead = a.coeff(a.order().expect("nonzero coefficient"));
            poly.add_term(m.clone(), angular_component(lead)?);
        }
    }
    Ok(InitialForm {
        poly,
        truncation_limited: report.truncation_limited,
    })
}

/// A monomial initial form `in_S(d^k f_l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialWitness {
    pub generator: usize,
    pub order: usize,
    pub form: ResiduePoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialCheck {
    /// The derivation order `m` the check covers.
    pub order: usize,
    /// No `in_S(d^k f_l)`, `k ≤ m`, is a monomial.
    pub monomial_free: bool,
    pub witnesses: Vec<MonomialWitness>,
    pub truncation_limited: bool,
}

/// Computes `in_S(d^k f_l)` for every generator and `k ≤ m` and collects the
/// monomial ones. Cross-checked against the tropical-solution verdict of the
/// same derived system.
pub fn initial_system_monomial_check(generators: &[DiffPoly], s: &[TropSeries], m: usize) -> Result<MonomialCheck> {
    let mut witnesses = Vec::new();
    let mut limited = false;
    let mut solves = true;
    for (l, f) in generators.iter().enumerate() {
        let system = derived_system(f, m)?;
        let trop: Vec<_> = system.iter().map(DiffPoly::tropicalize).collect();
        let verdict = is_tropical_solution(&trop, s);
        solves &= verdict.solves;
        for (k, g) in system.iter().enumerate() {
            let form = initial_form(g, s)?;
            limited |= form.truncation_limited;
            if form.poly.is_monomial() {
                witnesses.push(MonomialWitness {
                    generator: l,
                    order: k,
                    form: form.poly,
                });
            }
        }
    }
    assert_eq!(
        witnesses.is_empty(),
        solves,
        "monomial test disagrees with tropical vanishing"
    );
    Ok(MonomialCheck {
        order: m,
        monomial_free: witnesses.is_empty(),
        witnesses,
        truncation_limited: limited,
    })
}
