//! Canonical forms and products in operator algebras `Σ fᵢ∂ⁱ` with exact
//! Laurent-polynomial coefficients.
//!
//! Products are computed from the rewrite `∂f − f∂ = f′`, iterated to
//! `∂ⁿf = Σₖ C(n,k) f⁽ᵏ⁾ ∂ⁿ⁻ᵏ`; everything stays exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;


use crate::scalar::Scalar;
use crate::series::LaurentSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylError {
    /// Coefficients of an operator must be exact Laurent polynomials.
    InexactCoefficient,
}

impl fmt::Display for WeylError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeylError::InexactCoefficient => {
                write!(f, "operator coefficients must be exact Laurent polynomials")
            }
        }
    }
}

impl std::error::Error for WeylError {}

/// Order of an operator: highest ∂-exponent, −∞ for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderValue {
    NegInfinity,
    Finite(usize),
}

/// An element `Σ fᵢ∂ⁱ`; `coeffs[i]` is the coefficient of `∂ⁱ`, the last
/// entry is nonzero unless the element is zero (empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    coeffs: Vec<LaurentSeries>,
}

fn binom(n: usize, k: usize) -> Scalar {
    BigRational::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_series(LaurentSeries::one())
    }

    /// The derivation ∂.
    pub fn d() -> Self {
        Self::from_parts(vec![LaurentSeries::zero(), LaurentSeries::one()]).unwrap()
    }

    /// A multiplication operator (∂-degree zero). Panics on inexact input.
    pub fn from_series(f: LaurentSeries) -> Self {
        Self::from_parts(vec![f]).expect("exact coefficient")
    }

    /// Builds `Σ coeffs[i]·∂ⁱ`, validating exactness.
    pub fn from_parts(coeffs: Vec<LaurentSeries>) -> Result<Self, WeylError> {
        if coeffs.iter().any(|c| !c.is_exact()) {
            return Err(WeylError::InexactCoefficient);
        }
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero_known()) {
            coeffs.pop();
        }
        Ok(WeylElement { coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `∂ⁱ`.
    pub fn coeff(&self, i: usize) -> LaurentSeries {
        self.coeffs.get(i).cloned().unwrap_or_else(LaurentSeries::zero)
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    pub fn order(&self) -> OrderValue {
        match self.coeffs.len() {
            0 => OrderValue::NegInfinity,
            n => OrderValue::Finite(n - 1),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self::from_parts(coeffs).expect("sums of exact coefficients are exact")
    }

    pub fn neg(&self) -> Self {
        WeylElement { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_parts(self.coeffs.iter().map(|f| f.scale(c)).collect()).unwrap()
    }

    /// Canonical product, via `∂ⁿ f = Σₖ C(n,k) f⁽ᵏ⁾ ∂ⁿ⁻ᵏ`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: Vec<LaurentSeries> = Vec::new();
        for (i, fi) in self.coeffs.iter().enumerate() {
            if fi.is_zero_known() {
                continue;
            }
            for (j, gj) in other.coeffs.iter().enumerate() {
                if gj.is_zero_known() {
                    continue;
                }
                // fᵢ ∂ⁱ gⱼ ∂ʲ = fᵢ Σₖ C(i,k) gⱼ⁽ᵏ⁾ ∂^{i+j−k}
                let mut gk = gj.clone();
                for k in 0..=i {
                    let deg = i + j - k;
                    if acc.len() <= deg {
                        acc.resize(deg + 1, LaurentSeries::zero());
                    }
                    let term = fi.mul(&gk).scale(&binom(i, k));
                    acc[deg] = acc[deg].add(&term);
                    if k < i {
                        gk = gk.derivative();
                    }
                }
            }
        }
        Self::from_parts(acc).expect("exact arithmetic")
    }

    /// Commutator `ab − ba`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;

        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero_known() {
                continue;
            }
            // single-monomial coefficients fold their sign into the
            // separator so that printing stays inside the grammar
            let single = c.support().count() == 1 && c.is_exact();
            let (neg, body) = if single {
                let (e, coeff) = c.support().next().unwrap();
                let mag = LaurentSeries::monomial(coeff.abs(), e);
                (coeff.is_negative(), mag)
            } else {
                (false, c.clone())
            };
            if wrote {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            if i == 0 {
                if single {
                    write!(f, "{}", body)?;
                } else {
                    write!(f, "({})", body)?;
                }
            } else {
                if body == LaurentSeries::one() {
                    // bare D
                } else if single {
                    write!(f, "{}*", body)?;
                } else {
                    write!(f, "({})*", body)?;
                }
                if i == 1 {
                    write!(f, "D")?;
                } else {
                    write!(f, "D^{}", i)?;
                }
            }
            wrote = true;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn xpow(e: i64) -> LaurentSeries {
        LaurentSeries::monomial(int(1), e)
    }

    /// Test-side oracle: apply `Σ fᵢ∂ⁱ` to a series directly.
    fn apply(op: &WeylElement, g: &LaurentSeries) -> LaurentSeries {
        let mut out = LaurentSeries::zero();
        let mut dg = g.clone();
        for (i, fi) in op.coeffs().iter().enumerate() {
            if i > 0 {
                dg = dg.derivative();
            }
            out = out.add(&fi.mul(&dg));
        }
        out
    }

    #[test]
    fn d_times_x_rewrites() {
        // ∂·x = x∂ + 1
        let p = WeylElement::d().mul(&WeylElement::from_series(xpow(1)));
        let expected = WeylElement::from_parts(vec![LaurentSeries::one(), xpow(1)]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn xd_squared_matches_application_oracle() {
        // (x∂)(x∂) = x²∂² + x∂, checked by acting on x^j for j = 0..5
        let xd = WeylElement::from_parts(vec![LaurentSeries::zero(), xpow(1)]).unwrap();
        let p = xd.mul(&xd);
        let expected =
            WeylElement::from_parts(vec![LaurentSeries::zero(), xpow(1), xpow(2)]).unwrap();
        assert_eq!(p, expected);
        for j in 0..=5 {
            let g = xpow(j);
            assert_eq!(apply(&p, &g), apply(&xd, &apply(&xd, &g)));
        }
    }

    #[test]
    fn identity_element() {
        let a = WeylElement::from_parts(vec![
            xpow(1),
            LaurentSeries::zero(),
            LaurentSeries::zero(),
            LaurentSeries::monomial(int(1), -1),
        ])
        .unwrap(); // x^-1 D^3 + x
        assert_eq!(WeylElement::one().mul(&a), a);
        assert_eq!(a.mul(&WeylElement::one()), a);
    }

    #[test]
    fn order_examples() {
        let a = WeylElement::from_parts(vec![
            LaurentSeries::zero(),
            LaurentSeries::one(),
            LaurentSeries::zero(),
            xpow(2),
        ])
        .unwrap(); // x²∂³ + ∂
        assert_eq!(a.order(), OrderValue::Finite(3));
        assert_eq!(WeylElement::zero().order(), OrderValue::NegInfinity);
        let d2 = WeylElement::d().mul(&WeylElement::d());
        let xd = WeylElement::from_parts(vec![LaurentSeries::zero(), xpow(1)]).unwrap();
        assert_eq!(d2.mul(&xd).order(), OrderValue::Finite(3));
    }

    #[test]
    fn bracket_examples() {
        // [∂, x] = 1
        let b = WeylElement::d().bracket(&WeylElement::from_series(xpow(1)));
        assert_eq!(b, WeylElement::one());
        // [a, a] = 0
        let a = WeylElement::from_parts(vec![xpow(2), xpow(-1)]).unwrap();
        assert!(a.bracket(&a).is_zero());
        // [x∂, x²∂] = x²∂
        let xd = WeylElement::from_parts(vec![LaurentSeries::zero(), xpow(1)]).unwrap();
        let x2d = WeylElement::from_parts(vec![LaurentSeries::zero(), xpow(2)]).unwrap();
        assert_eq!(xd.bracket(&x2d), x2d);
    }

    #[test]
    fn rejects_truncated_coefficients() {
        let t = LaurentSeries::from_terms_trunc([(0, int(1))], 3);
        assert_eq!(
            WeylElement::from_parts(vec![t]),
            Err(WeylError::InexactCoefficient)
        );
    }

    #[test]
    fn display_descending_degree() {
        let a = WeylElement::from_parts(vec![
            xpow(1),
            LaurentSeries::from_terms([(-1, int(1)), (1, int(1))]),
            LaurentSeries::monomial(int(3), 2),
        ])
        .unwrap();
        assert_eq!(a.to_string(), "3*x^2*D^2 + (x^-1 + x)*D + x");
        assert_eq!(WeylElement::d().to_string(), "D");
        assert_eq!(WeylElement::zero().to_string(), "0");
    }
}
