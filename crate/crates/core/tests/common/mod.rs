//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use tropdiff_core::diffpoly::{DiffPoly, ExponentMatrix};
use tropdiff_core::field::{residue, section_phi, FieldBackend, FieldElem, ResidueElem};
use tropdiff_core::gen;
use tropdiff_core::initial::ResiduePoly;
use tropdiff_core::series::{factorial, psi, rank2_val, PowerSeries, TropSeries};
use tropdiff_core::tropical::Semiring;
use tropdiff_core::valuation::NatValuation;
use tropdiff_core::{Rational, Trop2, TropNum};

/// `in_S(f)` from the definition: multiply out
/// `h_S = φ(−w) Σ A_λ Π (φ(Φ(d^j S_i)) x_i^{(j)})^{λ_{i,j}}` with `w` the
/// minimum, then keep the `t⁰` coefficients and reduce them mod 𝔪.
pub fn literal_initial_form(f: &DiffPoly, s: &[TropSeries]) -> ResiduePoly {
    let backend = f.backend();
    let field = backend.residue_field();
    let mut phis: BTreeMap<(usize, usize), Trop2> = BTreeMap::new();
    let mut weights = Vec::new();
    for (m, a) in f.terms() {
        let mut w = rank2_val(a).value;
        for ((i, j), e) in m.entries() {
            let phi = phis
                .entry((i, j))
                .or_insert_with(|| s[i].nth_diff(j).phi_leading().value)
                .clone();
            w = w.otimes(&phi.pow(e));
        }
        weights.push(w);
    }
    let min = Trop2::sum(weights.iter());
    let mut out = Vec::new();
    let Some(neg_min) = min.inverse() else {
        return ResiduePoly::zero(f.nvars(), field);
    };
    let shift = section_phi(&neg_min, backend).expect("minimum lies in the value group");
    for (m, a) in f.terms() {
        let mut t_exp = shift.t_exp;
        let mut c = shift.coeff.clone();
        let mut killed = false;
        for ((i, j), e) in m.entries() {
            let phi = &phis[&(i, j)];
            if !phi.is_finite() {
                killed = true;
                break;
            }
            let mono = section_phi(phi, backend).expect("leading terms lie in the value group");
            for _ in 0..e {
                t_exp += mono.t_exp;
                c = &c * &mono.coeff;
            }
        }
        if killed || t_exp > 0 {
            continue;
        }
        let k = (-t_exp) as usize;
        if k > a.truncation() {
            continue;
        }
        let coeff = &c * a.coeff(k);
        let r = residue(&coeff).expect("h_S has integral t^0 coefficients");
        if !r.is_zero() {
            out.push((m.clone(), r));
        }
    }
    ResiduePoly::from_terms(f.nvars(), field, out)
}

/// Product of residue polynomials by explicit double loop over term lists.
pub fn brute_product(a: &ResiduePoly, b: &ResiduePoly) -> BTreeMap<ExponentMatrix, ResidueElem> {
    let mut acc: BTreeMap<ExponentMatrix, ResidueElem> = BTreeMap::new();
    let terms_a: Vec<_> = a.terms().iter().collect();
    let terms_b: Vec<_> = b.terms().iter().collect();
    for (ma, ca) in &terms_a {
        for (mb, cb) in &terms_b {
            let m = ma.mul(mb);
            let prod = *ca * *cb;
            let sum = match acc.remove(&m) {
                Some(old) => &old + &prod,
                None => prod,
            };
            if !sum.is_zero() {
                acc.insert(m, sum);
            }
        }
    }
    acc
}

/// Tropical series whose finite coefficients lie in the value group `(1/e)ℤ`.
pub fn value_group_series<R: Rng>(rng: &mut R, backend: FieldBackend, len: usize, inf_prob: f64) -> TropSeries {
    let e = backend.ramification() as i64;
    let nat_val = backend.nat_valuation();
    let coeffs = (0..len)
        .map(|_| {
            if rng.gen_bool(inf_prob) {
                TropNum::Inf
            } else if backend.is_trivial() {
                TropNum::new(Rational::zero())
            } else {
                TropNum::new(Rational::new(rng.gen_range(-6i64..=6).into(), e.into()))
            }
        })
        .collect();
    TropSeries::new(nat_val, coeffs)
}

/// Checks `f(Ψ(a)) = Σ_r F_r(a)/r!·t^r` coefficient by coefficient.
pub fn taylor_identity_holds(f: &DiffPoly, a: &[Vec<FieldElem>]) -> bool {
    let backend = f.backend();
    let series: Vec<PowerSeries> = a.iter().map(|ai| psi(backend, ai)).collect();
    let lhs = f.eval_classical(&series).expect("enough coefficients");
    (0..=lhs.truncation()).all(|r| {
        let fr = f.f_lr(r).expect("truncation allows d^r f");
        let value = fr.eval(a).expect("point covers all variables");
        *lhs.coeff(r) == value.scale(&factorial(r as u64).recip())
    })
}

/// Random `(a_{i,j})_{j ≤ len}` points for each variable.
pub fn random_point<R: Rng>(rng: &mut R, backend: FieldBackend, n: usize, len: usize) -> Vec<Vec<FieldElem>> {
    (0..n)
        .map(|_| (0..len).map(|_| gen::field_elem(rng, backend, 0.3)).collect())
        .collect()
}

/// `k`-coefficients of `d(x⊙y)`, `x⊙d(y)`, `y⊙d(x)` vanish tropically for
/// every `k`, computed with explicit index loops.
pub fn leibniz_holds(x: &[TropNum], y: &[TropNum], v: NatValuation) -> bool {
    let n = x.len().min(y.len());
    let conv = |a: &[TropNum], b: &[TropNum], k: usize| {
        (0..=k).fold(TropNum::Inf, |acc, i| acc.oplus(&a[i].otimes(&b[k - i])))
    };
    let diff = |a: &[TropNum]| -> Vec<TropNum> {
        (1..a.len()).map(|k| a[k].otimes(&v.of(k as u64))).collect()
    };
    let xy: Vec<TropNum> = (0..n).map(|k| conv(x, y, k)).collect();
    let (dxy, dx, dy) = (diff(&xy), diff(&x[..n]), diff(&y[..n]));
    (0..n.saturating_sub(1)).all(|k| {
        let terms = [dxy[k].clone(), conv(&x[..n], &dy, k), conv(&y[..n], &dx, k)];
        let min = TropNum::sum(terms.iter());
        min.is_inf() || terms.iter().filter(|t| **t == min).count() >= 2
    })
}
