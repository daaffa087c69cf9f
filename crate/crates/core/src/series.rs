//! Truncated power series over a valued field and over 𝕋.
//!
//! A series with truncation `N` knows its coefficients of degree `0..=N`.
//! Products keep the smaller truncation; every derivative loses one degree.
//! Leading-term maps that find nothing inside the known window return `∞`
//! with `truncation_limited` set, since the untruncated series may have
//! support further out.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::field::{field_val, FieldBackend, FieldElem};
use crate::tropical::Semiring;
use crate::valuation::NatValuation;
use crate::{qi, Error, Rational, Result, Trop2, TropNum};

/// `n!` as a rational.
pub fn factorial(n: u64) -> Rational {
    let f = (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    Rational::from_integer(f)
}

/// A leading term together with the truncation caveat.
#[derive(Clone, Debug, PartialEq)]
pub struct Leading<T> {
    pub value: T,
    pub truncation_limited: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    backend: FieldBackend,
    coeffs: Vec<FieldElem>,
}

impl PowerSeries {
    pub fn zero(backend: FieldBackend, truncation: usize) -> Self {
        PowerSeries {
            backend,
            coeffs: vec![FieldElem::zero(backend); truncation + 1],
        }
    }

    pub fn constant(c: FieldElem, truncation: usize) -> Self {
        Self::monomial(c, 0, truncation)
    }

    /// `c·t^k`, which is zero within the window when `k > truncation`.
    pub fn monomial(c: FieldElem, k: usize, truncation: usize) -> Self {
        let mut s = Self::zero(c.backend(), truncation);
        if k <= truncation {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series with the given coefficients; the truncation is `coeffs.len() − 1`.
    pub fn from_coeffs(backend: FieldBackend, coeffs: Vec<FieldElem>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        assert!(coeffs.iter().all(|c| c.backend() == backend));
        PowerSeries { backend, coeffs }
    }

    pub fn backend(&self) -> FieldBackend {
        self.backend
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &FieldElem {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    /// Index of the first nonzero coefficient inside the window.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(truncation + 1, FieldElem::zero(self.backend));
        PowerSeries {
            backend: self.backend,
            coeffs,
        }
    }

    pub fn eval_at_zero(&self) -> &FieldElem {
        &self.coeffs[0]
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        PowerSeries {
            backend: self.backend,
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        PowerSeries {
            backend: self.backend,
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            backend: self.backend,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Cauchy product, truncated at the smaller truncation.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut coeffs = vec![FieldElem::zero(self.backend); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        PowerSeries {
            backend: self.backend,
            coeffs,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(FieldElem::one(self.backend), self.truncation());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        PowerSeries {
            backend: self.backend,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `d/dt`; the result has truncation `N − 1`.
    pub fn derivative(&self) -> Result<Self> {
        if self.truncation() == 0 {
            return Err(Error::TruncationExhausted {
                needed: 1,
                available: 0,
            });
        }
        Ok(PowerSeries {
            backend: self.backend,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&qi(k as i64)))
                .collect(),
        })
    }

    pub fn nth_derivative(&self, j: usize) -> Result<Self> {
        if j > self.truncation() {
            return Err(Error::TruncationExhausted {
                needed: j,
                available: self.truncation(),
            });
        }
        let mut s = self.clone();
        for _ in 0..j {
            s = s.derivative()?;
        }
        Ok(s)
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})*t^{k}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        write!(f, " + O(t^{})", self.truncation() + 1)
    }
}

/// A truncated tropical power series with its differential `d_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropSeries {
    nat_val: NatValuation,
    coeffs: Vec<TropNum>,
}

impl TropSeries {
    /// Series with known coefficients `0..coeffs.len()`. An empty vector means
    /// nothing is known (the result of differentiating past the window).
    pub fn new(nat_val: NatValuation, coeffs: Vec<TropNum>) -> Self {
        TropSeries { nat_val, coeffs }
    }

    pub fn all_inf(nat_val: NatValuation, truncation: usize) -> Self {
        TropSeries {
            nat_val,
            coeffs: vec![TropNum::Inf; truncation + 1],
        }
    }

    /// Series given by `(index, value)` pairs; other coefficients are `∞`.
    pub fn from_sparse(
        nat_val: NatValuation,
        truncation: usize,
        terms: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Self {
        let mut s = Self::all_inf(nat_val, truncation);
        for (k, v) in terms {
            if k <= truncation {
                s.coeffs[k] = TropNum::new(v);
            }
        }
        s
    }

    pub fn nat_val(&self) -> NatValuation {
        self.nat_val
    }

    pub fn coeffs(&self) -> &[TropNum] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &TropNum {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, value: TropNum) {
        self.coeffs[k] = value;
    }

    /// Number of known coefficients (`truncation + 1`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncation(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_boolean(&self) -> bool {
        self.coeffs.iter().all(TropNum::is_boolean)
    }

    pub fn oplus(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        TropSeries {
            nat_val: self.nat_val,
            coeffs: (0..n).map(|k| self.coeffs[k].oplus(&other.coeffs[k])).collect(),
        }
    }

    /// Min-plus convolution.
    pub fn otimes(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let coeffs = (0..n)
            .map(|k| {
                (0..=k)
                    .map(|i| self.coeffs[i].otimes(&other.coeffs[k - i]))
                    .fold(TropNum::Inf, |acc, x| acc.oplus(&x))
            })
            .collect();
        TropSeries {
            nat_val: self.nat_val,
            coeffs,
        }
    }

    /// `c ⊙ S`.
    pub fn scale(&self, c: &TropNum) -> Self {
        TropSeries {
            nat_val: self.nat_val,
            coeffs: self.coeffs.iter().map(|a| a.otimes(c)).collect(),
        }
    }

    /// `d_v`: coefficient `k − 1` of the result is `v(k) ⊙ a_k`.
    pub fn trop_diff(&self) -> Self {
        TropSeries {
            nat_val: self.nat_val,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| self.nat_val.of(k as u64).otimes(a))
                .collect(),
        }
    }

    pub fn nth_diff(&self, j: usize) -> Self {
        let mut s = self.clone();
        for _ in 0..j {
            s = s.trop_diff();
        }
        s
    }

    /// Φ: the pair `(n₀, a_{n₀})` for the first finite coefficient.
    pub fn phi_leading(&self) -> Leading<Trop2> {
        match self.coeffs.iter().position(TropNum::is_finite) {
            Some(k) => Leading {
                value: Trop2::new(qi(k as i64), self.coeffs[k].finite().unwrap().clone()),
                truncation_limited: false,
            },
            None => Leading {
                value: Trop2::Inf,
                truncation_limited: true,
            },
        }
    }

    /// Constant term (evaluation "at t = ∞" in min-plus terms).
    pub fn constant_term(&self) -> TropNum {
        self.coeffs.first().cloned().unwrap_or(TropNum::Inf)
    }
}

impl fmt::Display for TropSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.finite().map(|v| format!("{v}*t^{k}")))
            .collect();
        if terms.is_empty() {
            write!(f, "inf")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// The rank-2 valuation `(order, v_K(leading coefficient))` of a series.
pub fn rank2_val(a: &PowerSeries) -> Leading<Trop2> {
    match a.order() {
        Some(k) => Leading {
            value: match field_val(a.coeff(k)) {
                TropNum::Finite(v) => Trop2::new(qi(k as i64), v),
                TropNum::Inf => unreachable!("nonzero coefficient"),
            },
            truncation_limited: false,
        },
        None => Leading {
            value: Trop2::Inf,
            truncation_limited: true,
        },
    }
}

/// Coefficientwise valuation (ṽ, or w̃ over the trivial backend).
pub fn tropicalize_series(a: &PowerSeries) -> TropSeries {
    TropSeries {
        nat_val: a.backend().nat_valuation(),
        coeffs: a.coeffs().iter().map(field_val).collect(),
    }
}

/// Ψ: `(a_j) ↦ Σ a_j/j! · t^j`.
pub fn psi(backend: FieldBackend, a: &[FieldElem]) -> PowerSeries {
    let coeffs = a
        .iter()
        .enumerate()
        .map(|(j, x)| x.scale(&factorial(j as u64).recip()))
        .collect();
    PowerSeries::from_coeffs(backend, coeffs)
}

/// Ψ⁻¹: `A ↦ (j!·A_j)`, i.e. the derivatives of `A` at zero.
pub fn psi_inverse(a: &PowerSeries) -> Vec<FieldElem> {
    a.coeffs()
        .iter()
        .enumerate()
        .map(|(j, x)| x.scale(&factorial(j as u64)))
        .collect()
}

/// Ψ_trop: `(b_j) ↦ Σ (b_j − v(j!)) t^j`.
pub fn psi_trop(nat_val: NatValuation, b: &[TropNum]) -> TropSeries {
    let coeffs = b
        .iter()
        .enumerate()
        .map(|(j, x)| x.shift(&-nat_val.of_factorial(j as u64)))
        .collect();
    TropSeries::new(nat_val, coeffs)
}

/// Ψ_trop⁻¹: `S ↦ (c_j + v(j!))`, equal to the constant terms of `d_v^j S`.
pub fn psi_trop_inverse(s: &TropSeries) -> Vec<TropNum> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(j, x)| x.shift(&s.nat_val().of_factorial(j as u64)))
        .collect()
}

/// A Boolean power series, stored by its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolSeries {
    len: usize,
    support: BTreeSet<usize>,
}

impl BoolSeries {
    pub fn new(len: usize, support: BTreeSet<usize>) -> Self {
        assert!(support.iter().all(|&k| k < len));
        BoolSeries { len, support }
    }

    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The strict differential `tⁿ ↦ tⁿ⁻¹`.
    pub fn diff(&self) -> Self {
        BoolSeries {
            len: self.len.saturating_sub(1),
            support: self.support.iter().filter(|&&k| k > 0).map(|k| k - 1).collect(),
        }
    }

    /// Φ for Grigoriev's pair: `tⁿ ↦ n`.
    pub fn leading(&self) -> Leading<TropNum> {
        match self.support.iter().next() {
            Some(&k) => Leading {
                value: TropNum::new(qi(k as i64)),
                truncation_limited: false,
            },
            None => Leading {
                value: TropNum::Inf,
                truncation_limited: true,
            },
        }
    }

    /// View as a tropical series with coefficients in 𝔹 and the trivial `d_v`.
    pub fn to_trop_series(&self) -> TropSeries {
        let coeffs = (0..self.len)
            .map(|k| {
                if self.support.contains(&k) {
                    TropNum::new(Rational::zero())
                } else {
                    TropNum::Inf
                }
            })
            .collect();
        TropSeries::new(NatValuation::Trivial, coeffs)
    }
}

/// σ₁: send every finite coefficient to 0.
pub fn sigma_to_grigoriev(s: &TropSeries) -> BoolSeries {
    BoolSeries {
        len: s.len(),
        support: s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_finite())
            .map(|(k, _)| k)
            .collect(),
    }
}

/// σ₀: projection of 𝕋₂ onto its first coordinate.
pub fn sigma0(w: &Trop2) -> TropNum {
    w.first()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    const V3: NatValuation = NatValuation::PAdic(3);
    const E3: FieldBackend = FieldBackend::Eisenstein { p: 3 };

    /// `0·t ⊕ 1·t³` from the running example.
    fn example_s() -> TropSeries {
        TropSeries::from_sparse(V3, 8, [(1, qi(0)), (3, qi(1))])
    }

    #[test]
    fn phi_of_example() {
        assert_eq!(example_s().phi_leading().value, Trop2::new(qi(1), qi(0)));
        let all_inf = TropSeries::all_inf(V3, 4).phi_leading();
        assert!(all_inf.value.is_inf() && all_inf.truncation_limited);
        let s = TropSeries::from_sparse(V3, 4, [(0, qi(5)), (2, qi(1))]);
        assert_eq!(s.phi_leading().value, Trop2::new(qi(0), qi(5)));
    }

    #[test]
    fn tropical_derivative() {
        let d = example_s().trop_diff();
        assert_eq!(d, TropSeries::from_sparse(V3, 7, [(0, qi(0)), (2, qi(2))]));
        assert_eq!(example_s().nth_diff(3).phi_leading().value, Trop2::new(qi(0), qi(2)));
        let c = TropSeries::from_sparse(NatValuation::Trivial, 3, [(0, qi(0))]);
        assert!(c.trop_diff().coeffs().iter().all(|x| x.is_inf()));
    }

    #[test]
    fn psi_trop_inverse_example() {
        let b = psi_trop_inverse(&example_s());
        let expected: Vec<TropNum> = [None, Some(0), None, Some(2), None]
            .iter()
            .map(|x| x.map_or(TropNum::Inf, |v| TropNum::new(qi(v))))
            .collect();
        assert_eq!(&b[..5], &expected[..]);
        assert_eq!(psi_trop(V3, &b), example_s());
        let inf = TropSeries::all_inf(V3, 3);
        assert_eq!(psi_trop(V3, &psi_trop_inverse(&inf)), inf);
    }

    #[test]
    fn psi_inverse_matches_derivative_constant_terms() {
        let s = example_s();
        let b = psi_trop_inverse(&s);
        for (j, bj) in b.iter().enumerate() {
            assert_eq!(*bj, s.nth_diff(j).constant_term());
        }
    }

    #[test]
    fn classical_psi() {
        let b = FieldBackend::RationalPadic { p: 3 };
        let a: Vec<FieldElem> = [0, 1, 0, 2].iter().map(|&x| FieldElem::from_int(b, x)).collect();
        let s = psi(b, &a);
        assert_eq!(s.coeff(1), &FieldElem::from_int(b, 1));
        assert_eq!(s.coeff(3), &FieldElem::from_rational(b, q(1, 3)));
        assert_eq!(psi_inverse(&s), a);
        let one = psi(b, &[FieldElem::one(b), FieldElem::zero(b)]);
        assert_eq!(one, PowerSeries::constant(FieldElem::one(b), 1));
    }

    #[test]
    fn rank2_examples() {
        let zeta = FieldElem::zeta(E3).unwrap();
        let lead = &FieldElem::from_int(E3, -3) * &zeta;
        let a = PowerSeries::monomial(lead, 2, 5);
        assert_eq!(rank2_val(&a).value, Trop2::new(qi(2), q(3, 2)));
        let one = PowerSeries::constant(FieldElem::one(E3), 3);
        assert_eq!(rank2_val(&one).value, Trop2::new(qi(0), qi(0)));
        let z = rank2_val(&PowerSeries::zero(E3, 3));
        assert!(z.value.is_inf() && z.truncation_limited);
    }

    #[test]
    fn tropicalize_examples() {
        let t = FieldBackend::RationalTrivial;
        let a = PowerSeries::constant(FieldElem::one(t), 3)
            .add(&PowerSeries::monomial(FieldElem::from_int(t, 7), 2, 3));
        let s = tropicalize_series(&a);
        assert!(s.is_boolean());
        assert_eq!(sigma_to_grigoriev(&s).support().iter().copied().collect::<Vec<_>>(), vec![0, 2]);
        assert!(tropicalize_series(&PowerSeries::zero(E3, 2)).coeffs().iter().all(|c| c.is_inf()));
    }

    #[test]
    fn sigma_examples() {
        let b = sigma_to_grigoriev(&example_s());
        assert_eq!(b.support().iter().copied().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(sigma0(&Trop2::new(qi(2), q(3, 2))), TropNum::new(qi(2)));
        assert_eq!(sigma0(&Trop2::Inf), TropNum::Inf);
    }

    #[test]
    fn derivative_truncation() {
        let s = PowerSeries::zero(E3, 0);
        assert!(matches!(s.derivative(), Err(Error::TruncationExhausted { .. })));
        let s = PowerSeries::monomial(FieldElem::one(E3), 3, 4);
        let d = s.derivative().unwrap();
        assert_eq!(d.truncation(), 3);
        assert_eq!(d.coeff(2), &FieldElem::from_int(E3, 3));
    }
}
