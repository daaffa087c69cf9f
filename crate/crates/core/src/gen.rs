//! Seeded random instances for property checks and the verification harness.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffpoly::{DiffPoly, ExponentMatrix};
use crate::field::{FieldBackend, FieldElem};
use crate::series::{BoolSeries, PowerSeries, TropSeries};
use crate::valuation::NatValuation;
use crate::verify::LinearODE;
use crate::{Rational, TropNum};

pub const DEFAULT_SEED: u64 = 0x7d1f_2024;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational whose numerator and denominator may carry powers of `p`.
pub fn rational<R: Rng>(rng: &mut R, p: u64) -> Rational {
    let pk = |rng: &mut R| num_traits::pow(p as i64, rng.gen_range(0..3usize));
    let num = rng.gen_range(-9i64..=9) * pk(rng);
    let den = rng.gen_range(1i64..=6) * pk(rng);
    Rational::new(num.into(), den.into())
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, p: u64) -> Rational {
    loop {
        let x = rational(rng, p);
        if x != Rational::from_integer(0.into()) {
            return x;
        }
    }
}

fn backend_prime(backend: FieldBackend) -> u64 {
    backend.prime().unwrap_or(2)
}

/// Random field element; each coordinate is zero with probability `zero_prob`.
pub fn field_elem<R: Rng>(rng: &mut R, backend: FieldBackend, zero_prob: f64) -> FieldElem {
    let p = backend_prime(backend);
    let coeffs = (0..backend.degree())
        .map(|_| {
            if rng.gen_bool(zero_prob) {
                Rational::from_integer(0.into())
            } else {
                nonzero_rational(rng, p)
            }
        })
        .collect();
    FieldElem::from_coeffs(backend, coeffs)
}

pub fn nonzero_field_elem<R: Rng>(rng: &mut R, backend: FieldBackend) -> FieldElem {
    loop {
        let x = field_elem(rng, backend, 0.3);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random series whose coefficients vanish with probability `zero_prob`.
pub fn power_series<R: Rng>(rng: &mut R, backend: FieldBackend, truncation: usize, zero_prob: f64) -> PowerSeries {
    let coeffs = (0..=truncation)
        .map(|_| {
            if rng.gen_bool(zero_prob) {
                FieldElem::zero(backend)
            } else {
                nonzero_field_elem(rng, backend)
            }
        })
        .collect();
    PowerSeries::from_coeffs(backend, coeffs)
}

/// Random tropical series of length `len` with coefficients in `[−5, 5]`
/// (denominators up to 4), `∞` with probability `inf_prob`.
pub fn trop_series<R: Rng>(rng: &mut R, nat_val: NatValuation, len: usize, inf_prob: f64) -> TropSeries {
    let coeffs = (0..len).map(|_| trop_num(rng, inf_prob)).collect();
    TropSeries::new(nat_val, coeffs)
}

pub fn trop_num<R: Rng>(rng: &mut R, inf_prob: f64) -> TropNum {
    if rng.gen_bool(inf_prob) {
        TropNum::Inf
    } else {
        TropNum::new(Rational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=4).into()))
    }
}

pub fn bool_series<R: Rng>(rng: &mut R, len: usize, density: f64) -> BoolSeries {
    BoolSeries::new(len, (0..len).filter(|_| rng.gen_bool(density)).collect())
}

/// Shape limits for random differential polynomials.
#[derive(Clone, Copy, Debug)]
pub struct PolyShape {
    pub nvars: usize,
    pub max_order: usize,
    pub max_degree: u32,
    pub max_terms: usize,
    /// Highest `t`-power allowed in a coefficient.
    pub coeff_degree: usize,
}

pub fn monomial<R: Rng>(rng: &mut R, shape: &PolyShape) -> ExponentMatrix {
    let degree = rng.gen_range(0..=shape.max_degree);
    let mut m = ExponentMatrix::one();
    for _ in 0..degree {
        let i = rng.gen_range(0..shape.nvars);
        let j = rng.gen_range(0..=shape.max_order);
        m = m.mul(&ExponentMatrix::var(i, j));
    }
    m
}

/// Random polynomial with polynomial-in-`t` coefficients.
pub fn diff_poly<R: Rng>(rng: &mut R, backend: FieldBackend, shape: &PolyShape, truncation: usize) -> DiffPoly {
    let nterms = rng.gen_range(1..=shape.max_terms);
    let terms: Vec<_> = (0..nterms)
        .map(|_| {
            let mut c = power_series(rng, backend, shape.coeff_degree.min(truncation), 0.5);
            if c.is_zero() {
                c = PowerSeries::constant(nonzero_field_elem(rng, backend), 0);
            }
            let mut coeffs = c.coeffs().to_vec();
            coeffs.resize(truncation + 1, FieldElem::zero(backend));
            (monomial(rng, shape), PowerSeries::from_coeffs(backend, coeffs))
        })
        .collect();
    DiffPoly::from_terms(shape.nvars, backend, truncation, terms)
}

/// `x' = g·x` with `g` a random rational polynomial of degree ≤ `max_degree`.
pub fn linear_ode<R: Rng>(rng: &mut R, p: u64, truncation: usize, max_degree: usize) -> LinearODE {
    let backend = FieldBackend::RationalPadic { p };
    let mut coeffs: Vec<FieldElem> = (0..=max_degree.min(truncation))
        .map(|_| {
            if rng.gen_bool(0.3) {
                FieldElem::zero(backend)
            } else {
                FieldElem::from_rational(backend, nonzero_rational(rng, p))
            }
        })
        .collect();
    coeffs.resize(truncation + 1, FieldElem::zero(backend));
    let c0 = FieldElem::from_rational(backend, nonzero_rational(rng, p));
    LinearODE {
        g: PowerSeries::from_coeffs(backend, coeffs),
        c0,
        truncation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_deterministic() {
        let b = FieldBackend::Eisenstein { p: 3 };
        let a = power_series(&mut rng(7), b, 5, 0.2);
        let c = power_series(&mut rng(7), b, 5, 0.2);
        assert_eq!(a, c);
        let shape = PolyShape {
            nvars: 2,
            max_order: 2,
            max_degree: 2,
            max_terms: 4,
            coeff_degree: 2,
        };
        let f = diff_poly(&mut rng(9), b, &shape, 4);
        assert_eq!(f, diff_poly(&mut rng(9), b, &shape, 4));
        assert!(f.order().unwrap_or(0) <= 2 && f.total_degree() <= 2);
    }
}
