//! Exact coefficient fields with a valuation: ℚ (trivial or `p`-adic) and the
//! Eisenstein extension ℚ(ζ), ζ^(p−1) = −p. Also the uniformizer section φ,
//! residue maps, and angular components.
//!
//! Valuations are normalized so that `v(p) = 1`; the Eisenstein field then has
//! value group `(1/(p−1))ℤ` and residue field 𝔽_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::valuation::{check_prime, v_p_rational, NatValuation};
use crate::{qi, Error, Rational, Result, Trop2, TropNum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldBackend {
    RationalTrivial,
    RationalPadic { p: u64 },
    Eisenstein { p: u64 },
}

impl FieldBackend {
    pub fn validate(self) -> Result<Self> {
        match self {
            FieldBackend::RationalTrivial => {}
            FieldBackend::RationalPadic { p } | FieldBackend::Eisenstein { p } => {
                check_prime(p)?;
            }
        }
        Ok(self)
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            FieldBackend::RationalTrivial => None,
            FieldBackend::RationalPadic { p } | FieldBackend::Eisenstein { p } => Some(*p),
        }
    }

    /// Ramification index `e`; the value group is `(1/e)ℤ` (or `{0}`).
    pub fn ramification(&self) -> u64 {
        match self {
            FieldBackend::Eisenstein { p } => p - 1,
            _ => 1,
        }
    }

    /// Number of rational coordinates of an element.
    pub fn degree(&self) -> usize {
        match self {
            FieldBackend::Eisenstein { p } => (p - 1) as usize,
            _ => 1,
        }
    }

    pub fn nat_valuation(&self) -> NatValuation {
        match self {
            FieldBackend::RationalTrivial => NatValuation::Trivial,
            FieldBackend::RationalPadic { p } | FieldBackend::Eisenstein { p } => {
                NatValuation::PAdic(*p)
            }
        }
    }

    pub fn residue_field(&self) -> ResidueField {
        match self.prime() {
            Some(p) => ResidueField::Fp(p),
            None => ResidueField::Rationals,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, FieldBackend::RationalTrivial)
    }

    /// Whether `β` lies in the value group.
    pub fn in_value_group(&self, beta: &Rational) -> bool {
        match self {
            FieldBackend::RationalTrivial => beta.is_zero(),
            _ => (beta * qi(self.ramification() as i64)).is_integer(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            FieldBackend::RationalTrivial => "rational-trivial".into(),
            FieldBackend::RationalPadic { p } => format!("rational-padic(p={p})"),
            FieldBackend::Eisenstein { p } => format!("eisenstein(p={p})"),
        }
    }
}

impl fmt::Display for FieldBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An exact field element. Eisenstein elements store `(c₀, …, c_{p−2})` for
/// `Σ cᵢζⁱ`; the other backends store a single rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    backend: FieldBackend,
    coeffs: Vec<Rational>,
}

impl FieldElem {
    pub fn zero(backend: FieldBackend) -> Self {
        FieldElem {
            backend,
            coeffs: vec![Rational::zero(); backend.degree()],
        }
    }

    pub fn one(backend: FieldBackend) -> Self {
        Self::from_rational(backend, Rational::one())
    }

    pub fn from_rational(backend: FieldBackend, value: Rational) -> Self {
        let mut e = Self::zero(backend);
        e.coeffs[0] = value;
        e
    }

    pub fn from_int(backend: FieldBackend, value: i64) -> Self {
        Self::from_rational(backend, qi(value))
    }

    /// Builds `Σ cᵢζⁱ` from any number of coefficients, reducing powers
    /// `ζ^k`, `k ≥ p−1`, through ζ^(p−1) = −p.
    pub fn from_coeffs(backend: FieldBackend, coeffs: Vec<Rational>) -> Self {
        let d = backend.degree();
        if coeffs.len() <= d {
            let mut c = coeffs;
            c.resize(d, Rational::zero());
            return FieldElem { backend, coeffs: c };
        }
        let minus_p = match backend {
            FieldBackend::Eisenstein { p } => -qi(p as i64),
            _ => panic!("only Eisenstein elements have more than one coordinate"),
        };
        let mut c = coeffs;
        for k in (d..c.len()).rev() {
            let top = std::mem::take(&mut c[k]);
            if !top.is_zero() {
                c[k - d] += top * &minus_p;
            }
        }
        c.truncate(d);
        FieldElem { backend, coeffs: c }
    }

    pub fn zeta(backend: FieldBackend) -> Result<Self> {
        match backend {
            FieldBackend::Eisenstein { .. } => Ok(Self::from_coeffs(
                backend,
                vec![Rational::zero(), Rational::one()],
            )),
            _ => Err(Error::ZetaUnavailable),
        }
    }

    pub fn backend(&self) -> FieldBackend {
        self.backend
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        FieldElem {
            backend: self.backend,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.backend);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.backend.degree();
        if d == 1 {
            return Some(Self::from_rational(self.backend, self.coeffs[0].recip()));
        }
        // Solve (x·ζʲ coordinates as columns) · y = e₀.
        let mut columns = Vec::with_capacity(d);
        let zeta = Self::zeta(self.backend).expect("eisenstein");
        let mut col = self.clone();
        for _ in 0..d {
            columns.push(col.coeffs.clone());
            col = &col * &zeta;
        }
        let mut rows: Vec<Vec<Rational>> = (0..d)
            .map(|r| {
                let mut row: Vec<Rational> = (0..d).map(|c| columns[c][r].clone()).collect();
                row.push(if r == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for c in 0..d {
            let pivot = (c..d).find(|&r| !rows[r][c].is_zero())?;
            rows.swap(c, pivot);
            let lead = rows[c][c].clone();
            for v in rows[c].iter_mut() {
                *v /= &lead;
            }
            for r in 0..d {
                if r != c && !rows[r][c].is_zero() {
                    let factor = rows[r][c].clone();
                    let pivot_row = rows[c].clone();
                    for (v, pv) in rows[r].iter_mut().zip(pivot_row) {
                        *v -= &factor * pv;
                    }
                }
            }
        }
        let coeffs = rows.into_iter().map(|mut row| row.pop().unwrap()).collect();
        Some(FieldElem {
            backend: self.backend,
            coeffs,
        })
    }

    /// `π^k` for the fixed uniformizer (ζ or p); `None` over the trivial backend.
    pub fn uniformizer_pow(backend: FieldBackend, k: i64) -> Option<Self> {
        let pi = match backend {
            FieldBackend::RationalTrivial => return None,
            FieldBackend::RationalPadic { p } => Self::from_int(backend, p as i64),
            FieldBackend::Eisenstein { .. } => Self::zeta(backend).ok()?,
        };
        let base = if k >= 0 { pi } else { pi.inv()? };
        Some(base.pow(k.unsigned_abs() as u32))
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(
            self.backend, other.backend,
            "field elements from different backends"
        );
    }
}

impl Add<&FieldElem> for &FieldElem {
    type Output = FieldElem;

    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.assert_same(rhs);
        FieldElem {
            backend: self.backend,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&FieldElem> for &FieldElem {
    type Output = FieldElem;

    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.assert_same(rhs);
        FieldElem {
            backend: self.backend,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&FieldElem> for &FieldElem {
    type Output = FieldElem;

    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.assert_same(rhs);
        let d = self.coeffs.len();
        if d == 1 {
            return FieldElem {
                backend: self.backend,
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            };
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        FieldElem::from_coeffs(self.backend, prod)
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;

    fn neg(self) -> FieldElem {
        FieldElem {
            backend: self.backend,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;

            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;

    fn neg(self) -> FieldElem {
        -&self
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "zeta")?;
                    } else {
                        write!(f, "zeta^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The valuation `v_K`, with `v(0) = ∞`.
pub fn field_val(x: &FieldElem) -> TropNum {
    match x.backend {
        FieldBackend::RationalTrivial => {
            if x.is_zero() {
                TropNum::Inf
            } else {
                TropNum::new(Rational::zero())
            }
        }
        FieldBackend::RationalPadic { p } => match v_p_rational(&x.coeffs[0], p) {
            Some(v) => TropNum::new(qi(v)),
            None => TropNum::Inf,
        },
        FieldBackend::Eisenstein { p } => {
            let e = (p - 1) as i64;
            x.coeffs
                .iter()
                .enumerate()
                .filter_map(|(i, c)| v_p_rational(c, p).map(|v| Rational::new((v * e + i as i64).into(), e.into())))
                .min()
                .map(TropNum::new)
                .unwrap_or(TropNum::Inf)
        }
    }
}

/// A Laurent monomial `c·t^k` with `c ∈ K`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMonomial {
    pub t_exp: i64,
    pub coeff: FieldElem,
}

/// The section φ: `(α, β) ↦ π^β t^α` of the rank-2 valuation.
pub fn section_phi(w: &Trop2, backend: FieldBackend) -> Result<LaurentMonomial> {
    let (alpha, beta) = match w {
        Trop2::Finite(a, b) => (a, b),
        Trop2::Inf => return Err(Error::NonIntegralExponent("inf".into())),
    };
    if !alpha.is_integer() {
        return Err(Error::NonIntegralExponent(format!("t^{alpha}")));
    }
    let t_exp = alpha.to_integer().to_i64().ok_or_else(|| Error::NonIntegralExponent(alpha.to_string()))?;
    if !backend.in_value_group(beta) {
        return Err(Error::NonIntegralExponent(format!("valuation {beta} over {backend}")));
    }
    let coeff = if backend.is_trivial() {
        FieldElem::one(backend)
    } else {
        let k = (beta * qi(backend.ramification() as i64)).to_integer();
        let k = k.to_i64().ok_or_else(|| Error::NonIntegralExponent(beta.to_string()))?;
        FieldElem::uniformizer_pow(backend, k).expect("nontrivial backend")
    };
    Ok(LaurentMonomial { t_exp, coeff })
}

/// Residue field of a backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResidueField {
    Fp(u64),
    Rationals,
}

/// An element of 𝔽_p or ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ResidueElem {
    Fp { p: u64, value: u64 },
    Q(Rational),
}

impl ResidueElem {
    pub fn zero(field: ResidueField) -> Self {
        match field {
            ResidueField::Fp(p) => ResidueElem::Fp { p, value: 0 },
            ResidueField::Rationals => ResidueElem::Q(Rational::zero()),
        }
    }

    pub fn one(field: ResidueField) -> Self {
        match field {
            ResidueField::Fp(p) => ResidueElem::Fp { p, value: 1 % p },
            ResidueField::Rationals => ResidueElem::Q(Rational::one()),
        }
    }

    pub fn from_int(field: ResidueField, n: i64) -> Self {
        match field {
            ResidueField::Fp(p) => ResidueElem::Fp {
                p,
                value: n.rem_euclid(p as i64) as u64,
            },
            ResidueField::Rationals => ResidueElem::Q(qi(n)),
        }
    }

    pub fn field(&self) -> ResidueField {
        match self {
            ResidueElem::Fp { p, .. } => ResidueField::Fp(*p),
            ResidueElem::Q(_) => ResidueField::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ResidueElem::Fp { value, .. } => *value == 0,
            ResidueElem::Q(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ResidueElem::Fp { value, .. } => *value == 1,
            ResidueElem::Q(v) => v.is_one(),
        }
    }

    /// Reduction of a `p`-integral rational.
    pub fn reduce_rational(field: ResidueField, x: &Rational) -> Result<Self> {
        match field {
            ResidueField::Rationals => Ok(ResidueElem::Q(x.clone())),
            ResidueField::Fp(p) => {
                let pb = BigInt::from(p);
                let den = x.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(Error::NegativeValuation(x.to_string()));
                }
                let den_inv = den.modpow(&BigInt::from(p - 2), &pb);
                let value = (x.numer().mod_floor(&pb) * den_inv).mod_floor(&pb);
                Ok(ResidueElem::Fp {
                    p,
                    value: value.to_u64().expect("reduced below p"),
                })
            }
        }
    }
}

impl Add for &ResidueElem {
    type Output = ResidueElem;

    fn add(self, rhs: &ResidueElem) -> ResidueElem {
        match (self, rhs) {
            (ResidueElem::Fp { p, value: a }, ResidueElem::Fp { p: p2, value: b }) if p == p2 => {
                ResidueElem::Fp { p: *p, value: (a + b) % p }
            }
            (ResidueElem::Q(a), ResidueElem::Q(b)) => ResidueElem::Q(a + b),
            _ => panic!("residue elements from different fields"),
        }
    }
}

impl Mul for &ResidueElem {
    type Output = ResidueElem;

    fn mul(self, rhs: &ResidueElem) -> ResidueElem {
        match (self, rhs) {
            (ResidueElem::Fp { p, value: a }, ResidueElem::Fp { p: p2, value: b }) if p == p2 => {
                ResidueElem::Fp {
                    p: *p,
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                }
            }
            (ResidueElem::Q(a), ResidueElem::Q(b)) => ResidueElem::Q(a * b),
            _ => panic!("residue elements from different fields"),
        }
    }
}

impl Neg for &ResidueElem {
    type Output = ResidueElem;

    fn neg(self) -> ResidueElem {
        match self {
            ResidueElem::Fp { p, value } => ResidueElem::Fp {
                p: *p,
                value: (p - value) % p,
            },
            ResidueElem::Q(a) => ResidueElem::Q(-a),
        }
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueElem::Fp { value, .. } => write!(f, "{value}"),
            ResidueElem::Q(v) => write!(f, "{v}"),
        }
    }
}

/// Residue class of an element of non-negative valuation.
pub fn residue(x: &FieldElem) -> Result<ResidueElem> {
    let field = x.backend.residue_field();
    if let TropNum::Finite(v) = field_val(x) {
        if v.is_negative() {
            return Err(Error::NegativeValuation(v.to_string()));
        }
    }
    // Over the Eisenstein backend only c₀ has valuation ≤ 0 when v(x) ≥ 0;
    // every ζⁱ, i ≥ 1, term lies in the maximal ideal.
    ResidueElem::reduce_rational(field, &x.coeffs[0])
}

/// Angular component: the residue of `x·φ(−v(x))`.
pub fn angular_component(x: &FieldElem) -> Result<ResidueElem> {
    let v = match field_val(x) {
        TropNum::Finite(v) => v,
        TropNum::Inf => return Err(Error::ZeroInput),
    };
    let unit = match x.backend {
        FieldBackend::RationalTrivial => x.clone(),
        backend => {
            let k = (v * qi(backend.ramification() as i64)).to_integer();
            let k = k.to_i64().expect("valuation fits i64");
            x * &FieldElem::uniformizer_pow(backend, -k).expect("nontrivial backend")
        }
    };
    residue(&unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    const E3: FieldBackend = FieldBackend::Eisenstein { p: 3 };
    const Q3: FieldBackend = FieldBackend::RationalPadic { p: 3 };

    fn zeta3() -> FieldElem {
        FieldElem::zeta(E3).unwrap()
    }

    #[test]
    fn zeta_relation() {
        for p in [2u64, 3, 5, 7] {
            let b = FieldBackend::Eisenstein { p };
            let z = FieldElem::zeta(b).unwrap();
            assert_eq!(z.pow((p - 1) as u32), FieldElem::from_int(b, -(p as i64)));
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(field_val(&zeta3()), TropNum::new(q(1, 2)));
        assert_eq!(field_val(&FieldElem::from_int(Q3, 6)), TropNum::new(qi(1)));
        assert_eq!(field_val(&FieldElem::zero(E3)), TropNum::Inf);
        let z5 = FieldElem::zeta(FieldBackend::Eisenstein { p: 5 }).unwrap();
        assert_eq!(field_val(&z5.pow(3)), TropNum::new(q(3, 4)));
        assert_eq!(
            field_val(&FieldElem::from_int(FieldBackend::RationalTrivial, 12)),
            TropNum::new(qi(0))
        );
    }

    #[test]
    fn phi_values() {
        let m = section_phi(&Trop2::new(qi(0), q(1, 2)), E3).unwrap();
        assert_eq!(m, LaurentMonomial { t_exp: 0, coeff: zeta3() });
        let m = section_phi(&Trop2::new(qi(2), q(3, 2)), E3).unwrap();
        assert_eq!(m.t_exp, 2);
        assert_eq!(m.coeff, &FieldElem::from_int(E3, -3) * &zeta3());
        let m = section_phi(&Trop2::new(qi(0), qi(0)), E3).unwrap();
        assert!(m.coeff.is_one() && m.t_exp == 0);
        assert!(matches!(
            section_phi(&Trop2::new(qi(0), q(1, 3)), E3),
            Err(Error::NonIntegralExponent(_))
        ));
        assert!(section_phi(&Trop2::new(q(1, 2), qi(0)), E3).is_err());
        assert!(section_phi(&Trop2::new(qi(1), qi(1)), FieldBackend::RationalTrivial).is_err());
    }

    #[test]
    fn angular_components() {
        let one = FieldElem::one(E3);
        assert!(angular_component(&one).unwrap().is_one());
        // −3ζ: the leading coefficient of the exponential equation at p = 3.
        let lead = &FieldElem::from_int(E3, -3) * &zeta3();
        assert!(angular_component(&lead).unwrap().is_one());
        let six_zeta = &FieldElem::from_int(E3, 6) * &zeta3();
        assert_eq!(angular_component(&six_zeta).unwrap(), ResidueElem::Fp { p: 3, value: 1 });
        assert_eq!(angular_component(&FieldElem::zero(E3)), Err(Error::ZeroInput));
    }

    #[test]
    fn residues() {
        assert_eq!(
            residue(&FieldElem::from_rational(E3, q(7, 2))).unwrap(),
            ResidueElem::Fp { p: 3, value: 2 }
        );
        assert!(residue(&zeta3()).unwrap().is_zero());
        assert!(residue(&FieldElem::one(E3)).unwrap().is_one());
        assert!(matches!(
            residue(&FieldElem::from_rational(Q3, q(1, 3))),
            Err(Error::NegativeValuation(_))
        ));
    }

    #[test]
    fn inverses() {
        let x = FieldElem::from_coeffs(
            FieldBackend::Eisenstein { p: 5 },
            vec![q(1, 2), qi(-3), qi(0), q(7, 5)],
        );
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(FieldElem::zero(E3).inv().is_none());
        let zi = FieldElem::uniformizer_pow(E3, -1).unwrap();
        assert!((&zi * &zeta3()).is_one());
    }

    #[test]
    fn display() {
        let x = FieldElem::from_coeffs(E3, vec![q(3, 2), qi(-1)]);
        assert_eq!(x.to_string(), "3/2 - zeta");
        assert_eq!(FieldElem::zero(E3).to_string(), "0");
    }
}
