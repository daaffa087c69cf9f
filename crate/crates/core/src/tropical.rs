//! Idempotent min-plus semirings: tropical numbers 𝕋 = K ∪ {∞}, the rank-2
//! semiring 𝕋₂ = K² ∪ {∞} with lexicographic minimum, and the tropical
//! vanishing predicate.
//!
//! Both semirings are generic over the scalar `T`. The exact path of the
//! crate instantiates them with [`crate::Rational`]; floats work as well.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{FromPrimitive, Num, One, Zero};

/// Scalars a tropical number may carry.
pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + fmt::Debug {}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + FromPrimitive + fmt::Debug {}

/// Operations shared by the idempotent semirings in this module.
///
/// `oplus` is the (idempotent) semiring sum, `otimes` the product. The
/// additive identity is `∞`, the multiplicative identity is the scalar zero.
pub trait Semiring: Clone + PartialEq + fmt::Debug {
    fn inf() -> Self;
    fn unit() -> Self;
    fn oplus(&self, other: &Self) -> Self;
    fn otimes(&self, other: &Self) -> Self;

    fn is_inf(&self) -> bool {
        *self == Self::inf()
    }

    /// The canonical partial order: `a ⪯ b` iff `a ⊕ b = b`.
    fn preceq(&self, other: &Self) -> bool {
        self.oplus(other) == *other
    }

    /// `⊕` over an iterator; the empty sum is `∞`.
    fn sum<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        items
            .into_iter()
            .fold(Self::inf(), |acc, x| acc.oplus(x))
    }
}

/// An element of 𝕋: a finite scalar or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tropical<T> {
    Finite(T),
    Inf,
}

impl<T: Scalar> Tropical<T> {
    pub fn new(value: T) -> Self {
        Tropical::Finite(value)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Tropical::Finite(v) => Some(v),
            Tropical::Inf => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Tropical::Finite(_))
    }

    /// Membership in the Boolean sub-semiring 𝔹 = {0, ∞}.
    pub fn is_boolean(&self) -> bool {
        match self {
            Tropical::Finite(v) => v.is_zero(),
            Tropical::Inf => true,
        }
    }

    /// `⊙`-power, i.e. multiplication of the scalar by `k`.
    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::unit();
        }
        match self {
            Tropical::Finite(v) => {
                Tropical::Finite(v.clone() * T::from_u32(k).expect("exponent fits scalar"))
            }
            Tropical::Inf => Tropical::Inf,
        }
    }

    /// Ordinary subtraction of a finite scalar (undefined on `∞`, which is kept).
    pub fn shift(&self, by: &T) -> Self {
        match self {
            Tropical::Finite(v) => Tropical::Finite(v.clone() + by.clone()),
            Tropical::Inf => Tropical::Inf,
        }
    }

    pub fn map<U: Scalar>(&self, f: impl FnOnce(&T) -> U) -> Tropical<U> {
        match self {
            Tropical::Finite(v) => Tropical::Finite(f(v)),
            Tropical::Inf => Tropical::Inf,
        }
    }
}

impl<T: Scalar> PartialOrd for Tropical<T> {
    /// The order in which the minimum is taken (`∞` is largest).
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Tropical::Inf, Tropical::Inf) => Some(Ordering::Equal),
            (Tropical::Inf, _) => Some(Ordering::Greater),
            (_, Tropical::Inf) => Some(Ordering::Less),
            (Tropical::Finite(a), Tropical::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: Scalar + Ord> Ord for Tropical<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("total order")
    }
}

impl<T: Scalar + Eq> Eq for TropicalPair<T> {}

impl<T: Scalar> Semiring for Tropical<T> {
    fn inf() -> Self {
        Tropical::Inf
    }

    fn unit() -> Self {
        Tropical::Finite(T::zero())
    }

    fn oplus(&self, other: &Self) -> Self {
        if other < self {
            other.clone()
        } else {
            self.clone()
        }
    }

    fn otimes(&self, other: &Self) -> Self {
        match (self, other) {
            (Tropical::Finite(a), Tropical::Finite(b)) => Tropical::Finite(a.clone() + b.clone()),
            _ => Tropical::Inf,
        }
    }
}

impl<T: Scalar> Add for Tropical<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.oplus(&rhs)
    }
}

impl<T: Scalar> Mul for Tropical<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.otimes(&rhs)
    }
}

impl<T: Scalar> Zero for Tropical<T> {
    fn zero() -> Self {
        Tropical::Inf
    }

    fn is_zero(&self) -> bool {
        matches!(self, Tropical::Inf)
    }
}

impl<T: Scalar> One for Tropical<T> {
    fn one() -> Self {
        Self::unit()
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Tropical<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tropical::Finite(v) => write!(f, "{v}"),
            Tropical::Inf => write!(f, "inf"),
        }
    }
}

/// An element of 𝕋₂: a pair `(α, β)` compared lexicographically, or `∞`.
#[derive(Clone, Debug, PartialEq, Hash)]
pub enum TropicalPair<T> {
    Finite(T, T),
    Inf,
}

impl<T: Scalar> TropicalPair<T> {
    pub fn new(alpha: T, beta: T) -> Self {
        TropicalPair::Finite(alpha, beta)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TropicalPair::Finite(..))
    }

    pub fn alpha(&self) -> Option<&T> {
        match self {
            TropicalPair::Finite(a, _) => Some(a),
            TropicalPair::Inf => None,
        }
    }

    pub fn beta(&self) -> Option<&T> {
        match self {
            TropicalPair::Finite(_, b) => Some(b),
            TropicalPair::Inf => None,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::unit();
        }
        match self {
            TropicalPair::Finite(a, b) => {
                let k = T::from_u32(k).expect("exponent fits scalar");
                TropicalPair::Finite(a.clone() * k.clone(), b.clone() * k)
            }
            TropicalPair::Inf => TropicalPair::Inf,
        }
    }

    /// Projection onto the first coordinate (the bottom map of the morphism
    /// from the rank-2 pair to Grigoriev's pair).
    pub fn first(&self) -> Tropical<T> {
        match self {
            TropicalPair::Finite(a, _) => Tropical::Finite(a.clone()),
            TropicalPair::Inf => Tropical::Inf,
        }
    }

    /// Componentwise negation of a finite element (its `⊙`-inverse).
    pub fn inverse(&self) -> Option<Self> {
        match self {
            TropicalPair::Finite(a, b) => {
                Some(TropicalPair::Finite(T::zero() - a.clone(), T::zero() - b.clone()))
            }
            TropicalPair::Inf => None,
        }
    }
}

impl<T: Scalar> PartialOrd for TropicalPair<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (TropicalPair::Inf, TropicalPair::Inf) => Some(Ordering::Equal),
            (TropicalPair::Inf, _) => Some(Ordering::Greater),
            (_, TropicalPair::Inf) => Some(Ordering::Less),
            (TropicalPair::Finite(a1, b1), TropicalPair::Finite(a2, b2)) => {
                match a1.partial_cmp(a2)? {
                    Ordering::Equal => b1.partial_cmp(b2),
                    ord => Some(ord),
                }
            }
        }
    }
}

impl<T: Scalar + Ord> Ord for TropicalPair<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("total order")
    }
}

impl<T: Scalar> Semiring for TropicalPair<T> {
    fn inf() -> Self {
        TropicalPair::Inf
    }

    fn unit() -> Self {
        TropicalPair::Finite(T::zero(), T::zero())
    }

    fn oplus(&self, other: &Self) -> Self {
        if other < self {
            other.clone()
        } else {
            self.clone()
        }
    }

    fn otimes(&self, other: &Self) -> Self {
        match (self, other) {
            (TropicalPair::Finite(a1, b1), TropicalPair::Finite(a2, b2)) => {
                TropicalPair::Finite(a1.clone() + a2.clone(), b1.clone() + b2.clone())
            }
            _ => TropicalPair::Inf,
        }
    }
}

impl<T: Scalar> Add for TropicalPair<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.oplus(&rhs)
    }
}

impl<T: Scalar> Mul for TropicalPair<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.otimes(&rhs)
    }
}

impl<T: Scalar> Zero for TropicalPair<T> {
    fn zero() -> Self {
        TropicalPair::Inf
    }

    fn is_zero(&self) -> bool {
        matches!(self, TropicalPair::Inf)
    }
}

impl<T: Scalar> One for TropicalPair<T> {
    fn one() -> Self {
        Self::unit()
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for TropicalPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropicalPair::Finite(a, b) => write!(f, "({a}, {b})"),
            TropicalPair::Inf => write!(f, "inf"),
        }
    }
}

/// Outcome of a tropical vanishing test on a finite sum.
#[derive(Clone, Debug, PartialEq)]
pub struct Vanishing<S> {
    pub sum: S,
    /// Indices of the addends equal to the sum (empty when the sum is `∞`).
    pub attained: Vec<usize>,
    pub vanishes: bool,
}

/// Tropical vanishing by the removal definition: the sum is unchanged after
/// dropping any single addend. Works for any idempotent semiring.
pub fn vanishes_by_removal<S: Semiring>(addends: &[S]) -> bool {
    let total = S::sum(addends);
    (0..addends.len()).all(|skip| {
        let rest = addends
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .fold(S::inf(), |acc, (_, x)| acc.oplus(x));
        rest == total
    })
}

/// Tropical vanishing with an attainment report.
///
/// For the totally ordered semirings here the sum vanishes iff it is `∞` or
/// the minimum is attained by at least two addends. The removal definition is
/// checked as well in debug builds.
pub fn tropically_vanishes<S: Semiring>(addends: &[S]) -> Vanishing<S> {
    let sum = S::sum(addends);
    let attained: Vec<usize> = if sum.is_inf() {
        Vec::new()
    } else {
        addends
            .iter()
            .enumerate()
            .filter(|(_, x)| **x == sum)
            .map(|(i, _)| i)
            .collect()
    };
    let vanishes = sum.is_inf() || attained.len() >= 2;
    debug_assert_eq!(vanishes, vanishes_by_removal(addends));
    Vanishing {
        sum,
        attained,
        vanishes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, Trop2, TropNum};

    fn t2(a: i64, b: (i64, i64)) -> Trop2 {
        Trop2::new(q(a, 1), q(b.0, b.1))
    }

    #[test]
    fn lex_min_sum() {
        assert_eq!(t2(2, (3, 2)).oplus(&t2(1, (3, 2))), t2(1, (3, 2)));
        assert_eq!(t2(0, (5, 1)).oplus(&t2(0, (2, 1))), t2(0, (2, 1)));
        assert_eq!(Trop2::Inf.oplus(&t2(4, (1, 1))), t2(4, (1, 1)));
    }

    #[test]
    fn products() {
        assert_eq!(t2(1, (0, 1)).otimes(&t2(0, (2, 1))), t2(1, (2, 1)));
        assert_eq!(TropNum::Inf.otimes(&TropNum::new(q(2, 1))), TropNum::Inf);
        let x = TropNum::new(q(-7, 3));
        assert_eq!(TropNum::unit().otimes(&x), x);
    }

    #[test]
    fn vanishing_examples() {
        let a = t2(2, (1, 2));
        let r = tropically_vanishes(&[a.clone(), a]);
        assert!(r.vanishes);
        assert!(!tropically_vanishes(&[t2(2, (3, 2))]).vanishes);
        assert!(tropically_vanishes(&[TropNum::Inf, TropNum::Inf]).vanishes);
        let r = tropically_vanishes(&[t2(0, (1, 1)), t2(0, (1, 1)), t2(1, (2, 1))]);
        assert!(r.vanishes);
        assert_eq!(r.attained, vec![0, 1]);
        let empty: [TropNum; 0] = [];
        let r = tropically_vanishes(&empty);
        assert!(r.vanishes && r.sum.is_inf());
    }

    #[test]
    fn order_is_reversed() {
        // a ⪯ b iff a ⊕ b = b, i.e. b is the smaller one.
        let small = TropNum::new(q(1, 1));
        let big = TropNum::new(q(5, 1));
        assert!(big.preceq(&small));
        assert!(!small.preceq(&big));
        assert!(TropNum::Inf.preceq(&small));
    }

    #[test]
    fn float_instantiation() {
        let a = Tropical::new(1.5f64);
        let b = Tropical::new(-0.5f64);
        assert_eq!(a.clone() + b.clone(), b);
        assert_eq!(a * b, Tropical::new(1.0));
        assert!(Tropical::<f64>::Inf.is_inf());
    }

    #[test]
    fn boolean_subsemiring() {
        assert!(TropNum::unit().is_boolean());
        assert!(TropNum::Inf.is_boolean());
        assert!(!TropNum::new(q(1, 2)).is_boolean());
    }
}
