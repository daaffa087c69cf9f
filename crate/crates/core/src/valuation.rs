//! Integer and rational `p`-adic valuations, Legendre's formula, and the
//! valuations `ℕ → 𝕋` that select a tropical differential.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{qi, Error, Rational, Result, TropNum};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Exponent of `p` in a nonzero integer. Returns `None` for zero.
pub fn v_p(n: i64, p: u64) -> Option<u64> {
    v_p_big(&BigInt::from(n), p)
}

pub fn v_p_big(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = m.div_rem(&p);
        if !rem.is_zero() {
            return Some(v);
        }
        m = quot;
        v += 1;
    }
}

/// `v_p` of a nonzero rational (may be negative). `None` for zero.
pub fn v_p_rational(x: &Rational, p: u64) -> Option<i64> {
    let num = v_p_big(x.numer(), p)?;
    let den = v_p_big(x.denom(), p).expect("denominator is nonzero");
    Some(num as i64 - den as i64)
}

/// Sum of the base-`p` digits of `m`.
pub fn digit_sum(mut m: u64, p: u64) -> u64 {
    let mut s = 0;
    while m > 0 {
        s += m % p;
        m /= p;
    }
    s
}

/// `v_p(m!)` via Legendre's formula `(m − s_p(m))/(p − 1)`.
pub fn v_p_factorial(m: u64, p: u64) -> u64 {
    (m - digit_sum(m, p)) / (p - 1)
}

/// `v_p(m!)` as `Σ_k ⌊m/p^k⌋`.
pub fn v_p_factorial_iterative(m: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut pk = p;
    while pk <= m {
        total += m / pk;
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    total
}

/// A valuation `ℕ → 𝕋` used to build the tropical differential `d_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "kebab-case")]
pub enum NatValuation {
    Trivial,
    PAdic(u64),
}

impl NatValuation {
    /// `v(n)` for `n ≥ 1`; `v(0) = ∞`.
    pub fn of(&self, n: u64) -> TropNum {
        if n == 0 {
            return TropNum::Inf;
        }
        TropNum::new(qi(self.of_positive(n) as i64))
    }

    pub fn of_positive(&self, n: u64) -> u64 {
        debug_assert!(n > 0);
        match self {
            NatValuation::Trivial => 0,
            NatValuation::PAdic(p) => v_p(n as i64, *p).expect("positive input"),
        }
    }

    /// `v(j!)`.
    pub fn of_factorial(&self, j: u64) -> Rational {
        match self {
            NatValuation::Trivial => qi(0),
            NatValuation::PAdic(p) => qi(v_p_factorial(j, *p) as i64),
        }
    }

    /// `v(j!/(j−k)!)`, the valuation of the falling factorial `j(j−1)⋯(j−k+1)`.
    pub fn of_falling(&self, j: u64, k: u64) -> Rational {
        debug_assert!(k <= j);
        self.of_factorial(j) - self.of_factorial(j - k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn brute_factorial_val(m: u64, p: u64) -> u64 {
        (1..=m).map(|k| v_p(k as i64, p).unwrap()).sum()
    }

    #[test]
    fn integer_valuations() {
        assert_eq!(v_p(6, 3), Some(1));
        assert_eq!(v_p(8, 2), Some(3));
        assert_eq!(v_p(7, 5), Some(0));
        assert_eq!(v_p(-54, 3), Some(3));
        assert_eq!(v_p(0, 3), None);
        assert_eq!(v_p_rational(&q(7, 18), 3), Some(-2));
    }

    #[test]
    fn factorial_valuations() {
        assert_eq!(v_p_factorial(3, 3), brute_factorial_val(3, 3));
        assert_eq!(v_p_factorial(3, 3), 1);
        assert_eq!(v_p_factorial(0, 3), 0);
        assert_eq!(v_p_factorial(4, 2), 3);
        assert_eq!(brute_factorial_val(4, 2), 3);
    }

    #[test]
    fn legendre_matches_iterative_sum() {
        for p in [2, 3, 5, 7] {
            for m in 0..=10_000 {
                assert_eq!(v_p_factorial(m, p), v_p_factorial_iterative(m, p), "m={m} p={p}");
            }
        }
    }

    #[test]
    fn nat_valuations() {
        let v3 = NatValuation::PAdic(3);
        assert_eq!(v3.of(0), TropNum::Inf);
        assert_eq!(v3.of(9), TropNum::new(qi(2)));
        assert_eq!(NatValuation::Trivial.of(9), TropNum::new(qi(0)));
        assert_eq!(v3.of_falling(6, 3), qi(1));
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(9));
        assert_eq!(check_prime(4), Err(Error::NotPrime(4)));
    }
}
