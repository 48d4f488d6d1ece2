//! The Lie algebra of first-order operators `f∂`.
//!
//! The bracket is `[f∂, g∂] = (fg′ − gf′)∂`. Eigenvector candidates for
//! `ad(f∂)` come from the logarithmic-derivative machinery: for `W(f) ≤ 0`
//! the candidate for eigenvalue `a` is `f·e^{∫ a/f}·∂`, and for `W(f) = 1`
//! the eigenvalues are the integer multiples `N·f′(0)` with candidate
//! `f·x^N·e^{∫ N(f′(0)x−f)/(fx)}·∂`. Whether a candidate belongs to a given
//! stable algebra is a bounded semi-decision over the known coefficients.

use std::fmt;

use num_traits::Zero;

use crate::scalar::{scalar_to_i64, Scalar};
use crate::series::{DegreeVerdict, LaurentSeries, Precision};
use crate::weyl::WeylElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WittError {
    /// `W(f) > 1` admits no nonzero eigenvalue.
    NoEigenvector,
    /// `W(f) = 1` and the requested eigenvalue is not an integer multiple of `f′(0)`.
    NotIntegerMultiple,
    /// The coefficient is zero on its known range, so its degree case is undecidable.
    ZeroOrUnknownLead,
}

impl fmt::Display for WittError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WittError::NoEigenvector => write!(f, "no eigenvector: W(f) > 1 and a != 0"),
            WittError::NotIntegerMultiple => {
                write!(f, "eigenvalue is not an integer multiple of f'(0)")
            }
            WittError::ZeroOrUnknownLead => {
                write!(f, "coefficient is zero on its known range")
            }
        }
    }
}

impl std::error::Error for WittError {}

/// The four catalogued stable algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StableAlgebraId {
    Poly,
    LaurentPoly,
    PowerSeries,
    FractionField,
}

/// Bounded membership semi-decision. `No` carries an exponent witnessing a
/// violating nonzero coefficient; the `Yes` forms are never a proof for a
/// truncated series, only a statement about the inspected range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    No(i64),
    YesWithinBounds { degree_bound: i64, prec: i64 },
    YesExact,
}

impl MembershipVerdict {
    pub fn is_yes(&self) -> bool {
        !matches!(self, MembershipVerdict::No(_))
    }
}

/// Spectrum shape of `ad(f∂)` by the Weierstrass degree of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumClassification {
    /// `W(f) > 1`: only the eigenvalue 0.
    TrivialSpectrum,
    /// `W(f) ≤ 0`: every scalar is an eigenvalue (over the fraction field).
    AllScalars,
    /// `W(f) = 1`: eigenvalues are the integer multiples of `f′(0)`.
    IntegerMultiples(Scalar),
}

/// Per-candidate outcome of a spectrum scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateOutcome {
    Membership(MembershipVerdict),
    NoEigenvector,
    NotIntegerMultiple,
}

/// An element `f∂`, wrapping its coefficient series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittElement {
    pub coeff: LaurentSeries,
}

impl WittElement {
    pub fn new(coeff: LaurentSeries) -> Self {
        WittElement { coeff }
    }

    pub fn zero() -> Self {
        WittElement { coeff: LaurentSeries::zero() }
    }

    pub fn is_zero_known(&self) -> bool {
        self.coeff.is_zero_known()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        WittElement { coeff: self.coeff.scale(c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        WittElement { coeff: self.coeff.add(&other.coeff) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        WittElement { coeff: self.coeff.sub(&other.coeff) }
    }

    /// Embeds into the ambient operator algebra (coefficient must be exact).
    pub fn to_weyl(&self) -> Option<WeylElement> {
        WeylElement::from_parts(vec![LaurentSeries::zero(), self.coeff.clone()]).ok()
    }

    /// Extracts `f∂` from an operator of order ≤ 1 with no order-0 part.
    pub fn from_weyl(op: &WeylElement) -> Option<Self> {
        if op.coeffs().len() > 2 || !op.coeff(0).is_zero_known() {
            return None;
        }
        Some(WittElement { coeff: op.coeff(1) })
    }
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.support().count() > 1 {
            write!(f, "({})*D", self.coeff)
        } else if self.coeff == LaurentSeries::one() {
            write!(f, "D")
        } else {
            write!(f, "{}*D", self.coeff)
        }
    }
}

/// `[f∂, g∂] = (fg′ − gf′)∂`.
pub fn witt_bracket(a: &WittElement, b: &WittElement) -> WittElement {
    let f = &a.coeff;
    let g = &b.coeff;
    WittElement::new(f.mul(&g.derivative()).sub(&g.mul(&f.derivative())))
}

/// True iff `b` centralizes `a` (bracket vanishes on the common known range).
/// For exact inputs this certifies that `b` is a scalar multiple of `a`.
pub fn centralizer_test(a: &WittElement, b: &WittElement) -> bool {
    assert!(!a.is_zero_known(), "centralizer_test requires nonzero a");
    let br = witt_bracket(a, b);
    let commutes = br.coeff.is_zero_known();
    if commutes && a.coeff.is_exact() && b.coeff.is_exact() && !b.is_zero_known() {
        // Postcondition from the self-centralizing property: b = β·a exactly.
        let beta = b.coeff.leading_coeff().unwrap()
            / a.coeff.leading_coeff().expect("nonzero a");
        assert_eq!(
            b.coeff,
            a.coeff.scale(&beta),
            "self-centralizing violation: commuting exact element is not proportional"
        );
    }
    commutes
}

/// `f′(0)` read off a series with `W(f) = 1`: the coefficient of `x`.
fn f_prime_at_zero(f: &LaurentSeries) -> Scalar {
    f.coeff(1).expect("lead 1 is within the known range")
}

/// Builds the eigenvector candidate `g∂` with `[f∂, g∂] = a·g∂` to precision
/// `prec`, following the degree trichotomy.
pub fn eigenvector_candidate(
    f: &LaurentSeries,
    a: &Scalar,
    prec: i64,
) -> Result<WittElement, WittError> {
    let w = match f.weierstrass_degree() {
        DegreeVerdict::Known(w) => w,
        _ => return Err(WittError::ZeroOrUnknownLead),
    };
    if a.is_zero() {
        return Ok(WittElement::new(f.clone()));
    }
    if w > 1 {
        return Err(WittError::NoEigenvector);
    }
    if w <= 0 {
        // g = f·e^{∫ a/f}
        let terms = (prec - 2 * w).max(8) as usize + 8;
        let inv = f.inverse_with_terms(terms).expect("nonzero f");
        let u = inv.scale(a);
        let exp = u
            .exp_integral_prec((prec - w).max(1) + 4)
            .expect("W(a/f) = -W(f) >= 0");
        return Ok(WittElement::new(f.mul(&exp)));
    }
    // w == 1: a must be N·f'(0) for integer N
    let step = f_prime_at_zero(f);
    let ratio = a / &step;
    let n = match scalar_to_i64(&ratio) {
        Some(n) => n,
        None => return Err(WittError::NotIntegerMultiple),
    };
    // inner = N(f'(0)x − f)/(fx), which has W ≥ 0 by construction
    let numer = LaurentSeries::monomial(step, 1).sub(f).scale(&ratio);
    let denom = f.mul(&LaurentSeries::x());
    let terms = (prec - n - 1).max(8) as usize + 8;
    let inner = numer.mul(&denom.inverse_with_terms(terms).expect("nonzero fx"));
    match inner.weierstrass_degree() {
        DegreeVerdict::Known(iw) => assert!(iw >= 0, "inner series must have W >= 0"),
        _ => {} // zero on its known range: fine, exp is 1 to precision
    }
    let exp = inner
        .exp_integral_prec((prec - w - n).max(1) + 4)
        .expect("inner W >= 0");
    let g = f.mul(&LaurentSeries::monomial(Scalar::from_integer(1.into()), n)).mul(&exp);
    Ok(WittElement::new(g))
}

/// Bounded membership of a series in one of the catalogued stable algebras.
pub fn membership(f: &LaurentSeries, alg: StableAlgebraId, degree_bound: i64) -> MembershipVerdict {
    let violation = |e: i64| match alg {
        StableAlgebraId::Poly => e < 0 || e > degree_bound,
        StableAlgebraId::LaurentPoly => e.abs() > degree_bound,
        StableAlgebraId::PowerSeries => e < 0,
        StableAlgebraId::FractionField => false,
    };
    if alg != StableAlgebraId::FractionField {
        for (e, _) in f.support() {
            if violation(e) {
                return MembershipVerdict::No(e);
            }
        }
    }
    match f.prec() {
        Precision::Exact => MembershipVerdict::YesExact,
        Precision::Trunc(p) => {
            if alg == StableAlgebraId::FractionField {
                MembershipVerdict::YesExact
            } else {
                MembershipVerdict::YesWithinBounds { degree_bound, prec: p }
            }
        }
    }
}

/// Classifies the spectrum of `ad(f∂)` by `W(f)`.
pub fn spectrum_classify(f: &LaurentSeries) -> Result<SpectrumClassification, WittError> {
    match f.weierstrass_degree() {
        DegreeVerdict::Known(w) if w > 1 => Ok(SpectrumClassification::TrivialSpectrum),
        DegreeVerdict::Known(w) if w <= 0 => Ok(SpectrumClassification::AllScalars),
        DegreeVerdict::Known(_) => Ok(SpectrumClassification::IntegerMultiples(f_prime_at_zero(f))),
        _ => Err(WittError::ZeroOrUnknownLead),
    }
}

/// For each candidate eigenvalue, builds the eigenvector candidate and
/// reports membership of its coefficient in the chosen stable algebra.
pub fn spectrum_in_algebra(
    f: &LaurentSeries,
    alg: StableAlgebraId,
    candidates: &[Scalar],
    degree_bound: i64,
    prec: i64,
) -> Vec<(Scalar, CandidateOutcome)> {
    candidates
        .iter()
        .map(|a| {
            let outcome = match eigenvector_candidate(f, a, prec) {
                Ok(v) => CandidateOutcome::Membership(membership(&v.coeff, alg, degree_bound)),
                Err(WittError::NoEigenvector) => CandidateOutcome::NoEigenvector,
                Err(WittError::NotIntegerMultiple) => CandidateOutcome::NotIntegerMultiple,
                Err(WittError::ZeroOrUnknownLead) => {
                    panic!("spectrum_in_algebra requires nonzero f")
                }
            };
            (a.clone(), outcome)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn xpow(e: i64) -> LaurentSeries {
        LaurentSeries::monomial(int(1), e)
    }

    fn wd(f: LaurentSeries) -> WittElement {
        WittElement::new(f)
    }

    #[test]
    fn bracket_structure_constants() {
        // [∂, x³∂] = 3x²∂
        let b = witt_bracket(&wd(xpow(0)), &wd(xpow(3)));
        assert_eq!(b.coeff, LaurentSeries::monomial(int(3), 2));
        // [f∂, f∂] = 0
        let f = LaurentSeries::from_terms([(0, int(1)), (2, int(-3))]);
        assert!(witt_bracket(&wd(f.clone()), &wd(f)).is_zero_known());
        // [x∂, ∂] = -∂
        let b = witt_bracket(&wd(xpow(1)), &wd(xpow(0)));
        assert_eq!(b.coeff, LaurentSeries::monomial(int(-1), 0));
    }

    #[test]
    fn centralizer_cases() {
        let xd = wd(xpow(1));
        assert!(centralizer_test(&xd, &xd.scale(&int(5))));
        assert!(!centralizer_test(&xd, &wd(xpow(2))));
        let x2d = wd(xpow(2));
        assert!(centralizer_test(&x2d, &x2d.scale(&rat(7, 3))));
    }

    #[test]
    fn eigenvector_monomial_case() {
        // f = x, a = 3: inner exponential is e^{∫0} = 1, so v = x⁴∂ exactly
        let v = eigenvector_candidate(&xpow(1), &int(3), 32).unwrap();
        assert_eq!(v.coeff, xpow(4));
        assert!(v.coeff.is_exact());
        // eigen equation [x∂, x⁴∂] = 3x⁴∂ exactly
        let lhs = witt_bracket(&wd(xpow(1)), &v);
        assert_eq!(lhs.coeff, v.coeff.scale(&int(3)));
    }

    #[test]
    fn eigenvector_rejections() {
        assert_eq!(
            eigenvector_candidate(&xpow(2), &int(1), 32),
            Err(WittError::NoEigenvector)
        );
        assert_eq!(
            eigenvector_candidate(&xpow(1), &rat(1, 2), 32),
            Err(WittError::NotIntegerMultiple)
        );
        assert_eq!(
            eigenvector_candidate(&LaurentSeries::zero_trunc(3), &int(1), 32),
            Err(WittError::ZeroOrUnknownLead)
        );
    }

    #[test]
    fn eigenvector_unit_case() {
        // f = 1+x, a = 2: v = (1+x)³∂, checked by direct bracket
        let f = LaurentSeries::from_terms([(0, int(1)), (1, int(1))]);
        let v = eigenvector_candidate(&f, &int(2), 32).unwrap();
        let cube = f.mul(&f).mul(&f);
        assert!(v.coeff.agrees_with(&cube, 24));
        let residual = witt_bracket(&wd(f), &v).sub(&v.scale(&int(2)));
        assert!(residual.coeff.is_zero_known());
        assert!(matches!(residual.coeff.prec(), Precision::Trunc(p) if p >= 24));
    }

    #[test]
    fn eigenvector_zero_eigenvalue_is_self() {
        let f = LaurentSeries::from_terms([(2, int(5))]);
        let v = eigenvector_candidate(&f, &int(0), 32).unwrap();
        assert_eq!(v.coeff, f);
    }

    #[test]
    fn eigenspaces_are_one_dimensional() {
        // two candidates for the same (f, a) are proportional:
        // w·inverse(v) has zero derivative to precision
        let f = LaurentSeries::from_terms([(0, int(2)), (1, int(1))]);
        let v = eigenvector_candidate(&f, &int(1), 32).unwrap();
        let w = eigenvector_candidate(&f, &int(1), 24).unwrap();
        let ratio = w.coeff.mul(&v.coeff.inverse().unwrap());
        assert!(ratio.derivative().is_zero_known());
    }

    #[test]
    fn membership_verdicts() {
        assert_eq!(membership(&xpow(3), StableAlgebraId::Poly, 10), MembershipVerdict::YesExact);
        let f = LaurentSeries::from_terms([(-1, int(1)), (0, int(1))]);
        assert_eq!(membership(&f, StableAlgebraId::Poly, 10), MembershipVerdict::No(-1));
        assert_eq!(
            membership(&f, StableAlgebraId::LaurentPoly, 10),
            MembershipVerdict::YesExact
        );
        assert_eq!(membership(&f, StableAlgebraId::PowerSeries, 10), MembershipVerdict::No(-1));
        assert_eq!(membership(&f, StableAlgebraId::FractionField, 10), MembershipVerdict::YesExact);
        // e^x truncated at 12 terms, poly bound 10: coefficient 1/11! at 11
        let e = LaurentSeries::one().exp_integral_prec(12).unwrap();
        assert_eq!(membership(&e, StableAlgebraId::Poly, 10), MembershipVerdict::No(11));
    }

    #[test]
    fn classification_cases() {
        assert_eq!(
            spectrum_classify(&xpow(3)).unwrap(),
            SpectrumClassification::TrivialSpectrum
        );
        assert_eq!(
            spectrum_classify(&LaurentSeries::one()).unwrap(),
            SpectrumClassification::AllScalars
        );
        let f = LaurentSeries::from_terms([(1, int(2)), (2, int(1))]);
        assert_eq!(
            spectrum_classify(&f).unwrap(),
            SpectrumClassification::IntegerMultiples(int(2))
        );
    }

    #[test]
    fn spectrum_scan_on_classical_witt() {
        let cands: Vec<Scalar> = (-2..=2).map(int).collect();
        let out = spectrum_in_algebra(&xpow(1), StableAlgebraId::Poly, &cands, 16, 32);
        for (a, outcome) in &out {
            let n = scalar_to_i64(a).unwrap();
            match outcome {
                CandidateOutcome::Membership(v) => {
                    assert_eq!(v.is_yes(), n >= -1, "candidate {}", n);
                    if n == -2 {
                        assert_eq!(*v, MembershipVerdict::No(-1));
                    }
                }
                other => panic!("unexpected outcome {:?}", other),
            }
        }
        let all_yes = spectrum_in_algebra(&xpow(1), StableAlgebraId::LaurentPoly, &cands, 16, 32);
        assert!(all_yes.iter().all(|(_, o)| matches!(
            o,
            CandidateOutcome::Membership(v) if v.is_yes()
        )));
        // f = 1: e^x is not a polynomial
        let out = spectrum_in_algebra(&LaurentSeries::one(), StableAlgebraId::Poly, &[int(1)], 16, 32);
        assert!(matches!(
            out[0].1,
            CandidateOutcome::Membership(MembershipVerdict::No(e)) if e == 17
        ));
    }

    #[test]
    fn witt_and_weyl_brackets_agree() {
        let f = LaurentSeries::from_terms([(-1, int(2)), (1, int(1))]);
        let g = LaurentSeries::from_terms([(0, int(1)), (3, int(-1))]);
        let wf = wd(f);
        let wg = wd(g);
        let via_witt = witt_bracket(&wf, &wg);
        let via_weyl = wf.to_weyl().unwrap().bracket(&wg.to_weyl().unwrap());
        assert_eq!(WittElement::from_weyl(&via_weyl).unwrap(), via_witt);
    }
}
