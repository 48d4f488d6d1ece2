//! Truncated and exact formal Laurent series with rational coefficients.
//!
//! A series is either EXACT (a Laurent polynomial: finite support, every
//! unlisted coefficient is exactly zero) or truncated at a precision `p`
//! (coefficients at exponents `< p` are known, everything at `≥ p` is
//! unknown). Canonical form strips known-zero coefficients at both ends of
//! the stored window, so the Weierstrass degree of a nonzero series is just
//! its lowest stored exponent.
//!
//! Precision propagation rules:
//!
//! - `add`: minimum of the operand precisions.
//! - `mul`: `min(prec_f + W(g), prec_g + W(f))`, where a series that is zero
//!   on its whole known range contributes its precision in place of `W`.
//! - `inverse`: `prec_f − 2·W(f)`; an exact series with more than one term is
//!   inverted at [`DEFAULT_PREC`] known terms.
//! - `compose`: `min(prec_f, W(f)·prec_g)`, deliberately conservative.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{format_scalar, int, scalar_to_i64, Scalar};

/// Default number of known terms for operations that must truncate an
/// inherently infinite result (inverses of multi-term exact series, `e^{∫g}`).
pub const DEFAULT_PREC: i64 = 32;

/// Precision marker: exact Laurent polynomial, or known below an exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Exact,
    Trunc(i64),
}

impl Precision {
    pub fn min(a: Precision, b: Precision) -> Precision {
        match (a, b) {
            (Precision::Exact, x) => x,
            (x, Precision::Exact) => x,
            (Precision::Trunc(p), Precision::Trunc(q)) => Precision::Trunc(p.min(q)),
        }
    }

    fn as_ext(self) -> Ext {
        match self {
            Precision::Exact => Ext::Inf,
            Precision::Trunc(p) => Ext::Fin(p),
        }
    }
}

/// i64 extended with +∞, for lower bounds on degrees and precisions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ext {
    Fin(i64),
    Inf,
}

impl Ext {
    fn min(a: Ext, b: Ext) -> Ext {
        match (a, b) {
            (Ext::Inf, x) => x,
            (x, Ext::Inf) => x,
            (Ext::Fin(p), Ext::Fin(q)) => Ext::Fin(p.min(q)),
        }
    }

    fn add(a: Ext, b: Ext) -> Ext {
        match (a, b) {
            (Ext::Fin(p), Ext::Fin(q)) => Ext::Fin(p + q),
            _ => Ext::Inf,
        }
    }

    // ∞·0 = 0 here: an unknown constant term stays unknown no matter how
    // deep the inner series vanishes.
    fn mul(a: Ext, b: Ext) -> Ext {
        match (a, b) {
            (Ext::Fin(p), Ext::Fin(q)) => Ext::Fin(p * q),
            (Ext::Inf, Ext::Fin(q)) | (Ext::Fin(q), Ext::Inf) => {
                if q > 0 {
                    Ext::Inf
                } else {
                    Ext::Fin(0)
                }
            }
            (Ext::Inf, Ext::Inf) => Ext::Inf,
        }
    }

    fn to_prec(self) -> Precision {
        match self {
            Ext::Inf => Precision::Exact,
            Ext::Fin(p) => Precision::Trunc(p),
        }
    }

    fn at_least(self, n: i64) -> bool {
        match self {
            Ext::Inf => true,
            Ext::Fin(p) => p >= n,
        }
    }
}

/// Weierstrass degree verdict: known exactly, only bounded below by the
/// precision (the series vanishes on its whole known range), or +∞ for the
/// exact zero series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeVerdict {
    Known(i64),
    AtLeast(i64),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesError {
    /// Inverse or logarithmic derivative of a series that is zero on its
    /// whole known range.
    ZeroDivisor,
    /// Formal integration of a series with a known nonzero coefficient
    /// at exponent −1.
    NonzeroResidue,
    /// Composition `g ∘ f` with `W(f) < 1` or `W(g) < 0` (or undecidably so).
    CompositionDomain,
    /// The coefficient at exponent −1 lies outside the known range.
    ResidueUnknown,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::ZeroDivisor => write!(f, "zero divisor: series is zero on its known range"),
            SeriesError::NonzeroResidue => write!(f, "nonzero residue: coefficient at x^-1 obstructs integration"),
            SeriesError::CompositionDomain => write!(f, "composition domain: need W(f) >= 1 and W(g) >= 0"),
            SeriesError::ResidueUnknown => write!(f, "residue unknown: exponent -1 outside the known range"),
        }
    }
}

impl std::error::Error for SeriesError {}

/// Why a series has no preimage under the logarithmic derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdObstruction {
    DegreeTooLow,
    NonIntegerResidue,
}

/// Outcome of the logarithmic-derivative preimage trichotomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LdPreimageResult {
    /// `W(g) ≥ 0`: `g = LD(e^{∫g})`.
    CaseA { witness: LaurentSeries },
    /// `W(g) = −1` with integer residue `N`: `g = LD(x^N e^{∫(g − N/x)})`.
    CaseB { witness: LaurentSeries, residue: i64 },
    NoPreimage(LdObstruction),
}

/// A formal Laurent series `Σ cᵢ xⁱ` in canonical form.
///
/// `coeffs[k]` is the coefficient of `x^(lead+k)`; when nonempty, the first
/// and last entries are nonzero. Exponents inside the stored window that are
/// absent are exactly zero, as is everything below `lead` and — for exact
/// series — everything above the stored window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    lead: i64,
    coeffs: Vec<Scalar>,
    prec: Precision,
}

fn normalize(mut lead: i64, mut coeffs: Vec<Scalar>, prec: Precision) -> LaurentSeries {
    if let Precision::Trunc(p) = prec {
        let end = lead + coeffs.len() as i64;
        if end > p {
            let keep = (p - lead).max(0) as usize;
            coeffs.truncate(keep);
        }
    }
    match coeffs.iter().position(|c| !c.is_zero()) {
        None => LaurentSeries { lead: 0, coeffs: Vec::new(), prec },
        Some(k) => {
            coeffs.drain(..k);
            lead += k as i64;
            let back = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
            coeffs.truncate(back + 1);
            LaurentSeries { lead, coeffs, prec }
        }
    }
}

impl LaurentSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        LaurentSeries { lead: 0, coeffs: Vec::new(), prec: Precision::Exact }
    }

    /// The series that is zero everywhere below `p` and unknown from `p` on.
    pub fn zero_trunc(p: i64) -> Self {
        LaurentSeries { lead: 0, coeffs: Vec::new(), prec: Precision::Trunc(p) }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn x() -> Self {
        Self::monomial(Scalar::one(), 1)
    }

    /// `c·x^e`, exact.
    pub fn monomial(c: Scalar, e: i64) -> Self {
        normalize(e, vec![c], Precision::Exact)
    }

    /// Exact series from `(exponent, coefficient)` terms; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(terms: I) -> Self {
        Self::from_terms_prec(terms, Precision::Exact)
    }

    /// Truncated series: the given terms, known up to exponent `p`.
    pub fn from_terms_trunc<I: IntoIterator<Item = (i64, Scalar)>>(terms: I, p: i64) -> Self {
        Self::from_terms_prec(terms, Precision::Trunc(p))
    }

    fn from_terms_prec<I: IntoIterator<Item = (i64, Scalar)>>(terms: I, prec: Precision) -> Self {
        let terms: Vec<(i64, Scalar)> = terms.into_iter().collect();
        let lead = match terms.iter().map(|(e, _)| *e).min() {
            None => return LaurentSeries { lead: 0, coeffs: Vec::new(), prec },
            Some(l) => l,
        };
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![Scalar::zero(); (hi - lead + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lead) as usize] += c;
        }
        normalize(lead, coeffs, prec)
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Precision::Exact
    }

    /// True when every known coefficient is zero.
    pub fn is_zero_known(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient, if any coefficient is known nonzero.
    pub fn lead_exponent(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lead)
        }
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.first()
    }

    /// Coefficient at exponent `e`: `None` if outside the known range.
    pub fn coeff(&self, e: i64) -> Option<Scalar> {
        if let Precision::Trunc(p) = self.prec {
            if e >= p {
                return None;
            }
        }
        Some(self.stored(e))
    }

    fn stored(&self, e: i64) -> Scalar {
        if e < self.lead || e >= self.lead + self.coeffs.len() as i64 {
            Scalar::zero()
        } else {
            self.coeffs[(e - self.lead) as usize].clone()
        }
    }

    /// Stored nonzero terms, ascending by exponent.
    pub fn support(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        let lead = self.lead;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (lead + k as i64, c))
    }

    pub fn weierstrass_degree(&self) -> DegreeVerdict {
        match (self.coeffs.is_empty(), self.prec) {
            (false, _) => DegreeVerdict::Known(self.lead),
            (true, Precision::Exact) => DegreeVerdict::Infinite,
            (true, Precision::Trunc(p)) => DegreeVerdict::AtLeast(p),
        }
    }

    /// Lower bound on the Weierstrass degree; +∞ for the exact zero.
    fn w_lower(&self) -> Ext {
        match self.weierstrass_degree() {
            DegreeVerdict::Known(w) => Ext::Fin(w),
            DegreeVerdict::AtLeast(p) => Ext::Fin(p),
            DegreeVerdict::Infinite => Ext::Inf,
        }
    }

    /// Coefficient at exponent −1.
    pub fn residue(&self) -> Result<Scalar, SeriesError> {
        self.coeff(-1).ok_or(SeriesError::ResidueUnknown)
    }

    /// Reduce precision to at most `p`.
    pub fn truncate(&self, p: i64) -> Self {
        normalize(
            self.lead,
            self.coeffs.clone(),
            Precision::min(self.prec, Precision::Trunc(p)),
        )
    }

    fn clamp(&self, target: Ext) -> Self {
        match target {
            Ext::Inf => self.clone(),
            Ext::Fin(p) => self.truncate(p),
        }
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = Precision::min(self.prec, other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return LaurentSeries { lead: 0, coeffs: Vec::new(), prec };
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (false, false) => self.lead.min(other.lead),
            (false, true) => self.lead,
            (true, false) => other.lead,
            (true, true) => unreachable!(),
        };
        let hi = (self.lead + self.coeffs.len() as i64).max(other.lead + other.coeffs.len() as i64);
        let mut coeffs = Vec::with_capacity((hi - lo) as usize);
        for e in lo..hi {
            coeffs.push(self.stored(e) + other.stored(e));
        }
        normalize(lo, coeffs, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            // 0·f is exactly zero, including the unknown tail.
            return Self::zero();
        }
        LaurentSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|k| k * c).collect(),
            prec: self.prec,
        }
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let prec = Ext::min(
            Ext::add(self.prec.as_ext(), other.w_lower()),
            Ext::add(other.prec.as_ext(), self.w_lower()),
        );
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return match prec.to_prec() {
                Precision::Exact => Self::zero(),
                Precision::Trunc(p) => Self::zero_trunc(p),
            };
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        normalize(self.lead + other.lead, coeffs, prec.to_prec())
    }

    /// Multiplicative inverse with the default precision policy.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        self.inverse_with_terms(DEFAULT_PREC as usize)
    }

    /// Multiplicative inverse. For a multi-term exact input, `default_terms`
    /// known coefficients are produced (the true inverse is infinite);
    /// otherwise the precision rule `prec − 2·W` applies.
    pub fn inverse_with_terms(&self, default_terms: usize) -> Result<Self, SeriesError> {
        if self.coeffs.is_empty() {
            return Err(SeriesError::ZeroDivisor);
        }
        let w = self.lead;
        let c0 = &self.coeffs[0];
        if self.prec == Precision::Exact && self.coeffs.len() == 1 {
            return Ok(Self::monomial(c0.clone().recip(), -w));
        }
        let (terms, out_prec) = match self.prec {
            Precision::Exact => (default_terms.max(1), Precision::Trunc(-w + default_terms.max(1) as i64)),
            Precision::Trunc(p) => (((p - w).max(0)) as usize, Precision::Trunc(p - 2 * w)),
        };
        let mut v = vec![Scalar::zero(); terms];
        if terms > 0 {
            v[0] = c0.clone().recip();
            for n in 1..terms {
                let mut acc = Scalar::zero();
                for k in 1..=n.min(self.coeffs.len() - 1) {
                    if !self.coeffs[k].is_zero() {
                        acc += &self.coeffs[k] * &v[n - k];
                    }
                }
                v[n] = -(acc / c0);
            }
        }
        Ok(normalize(-w, v, out_prec))
    }

    /// Termwise derivative `Σ i·cᵢ x^{i−1}`; precision drops by one.
    pub fn derivative(&self) -> Self {
        let prec = match self.prec {
            Precision::Exact => Precision::Exact,
            Precision::Trunc(p) => Precision::Trunc(p - 1),
        };
        let coeffs: Vec<Scalar> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * int(self.lead + k as i64))
            .collect();
        normalize(self.lead - 1, coeffs, prec)
    }

    /// Termwise formal integral `Σ cᵢ x^{i+1}/(i+1)`, defined whenever the
    /// coefficient at −1 is not known to be nonzero; precision rises by one.
    pub fn integrate(&self) -> Result<Self, SeriesError> {
        if let Some(r) = self.coeff(-1) {
            if !r.is_zero() {
                return Err(SeriesError::NonzeroResidue);
            }
        }
        let prec = match self.prec {
            Precision::Exact => Precision::Exact,
            Precision::Trunc(p) => Precision::Trunc(p + 1),
        };
        let coeffs: Vec<Scalar> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let e = self.lead + k as i64;
                if e == -1 {
                    // known zero coefficient, checked above
                    Scalar::zero()
                } else {
                    c / int(e + 1)
                }
            })
            .collect();
        Ok(normalize(self.lead + 1, coeffs, prec))
    }

    /// Composition `self ∘ f` by Horner accumulation, for `W(self) ≥ 0` and
    /// `W(f) ≥ 1`.
    pub fn compose(&self, f: &Self) -> Result<Self, SeriesError> {
        if !f.w_lower().at_least(1) || !self.w_lower().at_least(0) {
            return Err(SeriesError::CompositionDomain);
        }
        let rule = Ext::min(
            f.prec.as_ext(),
            Ext::mul(f.w_lower(), self.prec.as_ext()),
        );
        let mut acc = Self::zero();
        let top = self.lead + self.coeffs.len() as i64 - 1;
        for e in (0..=top).rev() {
            acc = acc.mul(f).add(&Self::constant(self.stored(e)));
        }
        Ok(acc.clamp(rule))
    }

    /// `e^{∫ self}` to [`DEFAULT_PREC`] known terms (fewer if limited by the
    /// input's own precision).
    pub fn exp_integral(&self) -> Result<Self, SeriesError> {
        self.exp_integral_prec(DEFAULT_PREC)
    }

    /// `e^{∫ self}` with target precision `target`: the exponential series is
    /// truncated deep enough that the composition's precision rule yields at
    /// least `target` whenever the input's precision allows it.
    pub fn exp_integral_prec(&self, target: i64) -> Result<Self, SeriesError> {
        if !self.w_lower().at_least(0) {
            return Err(SeriesError::CompositionDomain);
        }
        let u = self.integrate().expect("no residue for W >= 0");
        let n = target.max(1);
        let mut fact = Scalar::one();
        let mut terms = Vec::with_capacity(n as usize);
        for i in 0..n {
            if i > 0 {
                fact = fact * int(i);
            }
            terms.push((i, fact.clone().recip()));
        }
        let exp = Self::from_terms_trunc(terms, n);
        exp.compose(&u)
    }

    /// Logarithmic derivative `f′/f`.
    pub fn log_derivative(&self) -> Result<Self, SeriesError> {
        Ok(self.derivative().mul(&self.inverse()?))
    }

    /// The image trichotomy for the logarithmic derivative. A series that is
    /// zero on its whole known range is treated as case A with witness 1.
    pub fn ld_preimage(&self) -> LdPreimageResult {
        let target = match self.prec {
            Precision::Exact => DEFAULT_PREC,
            Precision::Trunc(p) => p.max(1),
        };
        match self.weierstrass_degree() {
            DegreeVerdict::Infinite | DegreeVerdict::AtLeast(_) => {
                LdPreimageResult::CaseA { witness: Self::one() }
            }
            DegreeVerdict::Known(w) if w >= 0 => LdPreimageResult::CaseA {
                witness: self.exp_integral_prec(target).expect("W >= 0"),
            },
            DegreeVerdict::Known(w) if w == -1 => {
                let r = self.stored(-1);
                match scalar_to_i64(&r) {
                    None => LdPreimageResult::NoPreimage(LdObstruction::NonIntegerResidue),
                    Some(n) => {
                        let rest = self.sub(&Self::monomial(int(n), -1));
                        let tail = rest.exp_integral_prec(target).expect("residue removed");
                        let witness = Self::monomial(Scalar::one(), n).mul(&tail);
                        LdPreimageResult::CaseB { witness, residue: n }
                    }
                }
            }
            DegreeVerdict::Known(_) => LdPreimageResult::NoPreimage(LdObstruction::DegreeTooLow),
        }
    }

    /// True when both series agree at every exponent below `upto` and both
    /// actually know that range.
    pub fn agrees_with(&self, other: &Self, upto: i64) -> bool {
        let known = |s: &Self| s.prec.as_ext().at_least(upto);
        if !known(self) || !known(other) {
            return false;
        }
        let lo = self.lead.min(other.lead);
        let hi = upto
            .min(self.lead + self.coeffs.len() as i64)
            .max(upto.min(other.lead + other.coeffs.len() as i64));
        (lo..hi).all(|e| self.stored(e) == other.stored(e))
    }

    /// Equality on the common known range (full equality when both exact).
    pub fn eq_to_common_prec(&self, other: &Self) -> bool {
        match Precision::min(self.prec, other.prec) {
            Precision::Exact => self == other,
            Precision::Trunc(p) => {
                let lo = self.lead.min(other.lead);
                (lo..p).all(|e| self.stored(e) == other.stored(e))
            }
        }
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (e, c) in self.support() {
            let mag = c.abs();
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let unit_mag = mag.is_one();
            match (e, unit_mag) {
                (0, _) => write!(f, "{}", format_scalar(&mag))?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{}*x", format_scalar(&mag))?,
                (_, true) => write!(f, "x^{}", e)?,
                (_, false) => write!(f, "{}*x^{}", format_scalar(&mag), e)?,
            }
            wrote = true;
        }
        match (wrote, self.prec) {
            (false, Precision::Exact) => write!(f, "0"),
            (false, Precision::Trunc(p)) => write!(f, "O(x^{})", p),
            (true, Precision::Trunc(p)) => write!(f, " + O(x^{})", p),
            (true, Precision::Exact) => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn s(terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_terms(terms.iter().map(|&(e, c)| (e, int(c))))
    }

    #[test]
    fn add_identity_and_cancellation() {
        let x = LaurentSeries::x();
        assert_eq!(x.add(&LaurentSeries::zero()), x);
        // (x^-1 + 1) + (-x^-1) = 1, lead recomputed
        let a = s(&[(-1, 1), (0, 1)]);
        let b = s(&[(-1, -1)]);
        assert_eq!(a.add(&b), LaurentSeries::one());
    }

    #[test]
    fn add_takes_min_precision() {
        let a = LaurentSeries::from_terms_trunc([(0, int(1)), (1, int(1))], 2);
        let b = s(&[(2, 1)]);
        let sum = a.add(&b);
        assert_eq!(sum.prec(), Precision::Trunc(2));
        assert_eq!(sum, a); // the x^2 term is beyond the known range
    }

    #[test]
    fn mul_monomials_and_degree_additivity() {
        assert_eq!(s(&[(2, 1)]).mul(&s(&[(3, 1)])), s(&[(5, 1)]));
        assert_eq!(s(&[(-1, 1)]).mul(&s(&[(1, 1)])), LaurentSeries::one());
        // W(x^-2 (1+x)) = -2, W(x^3) = 3 => W(product) = 1
        let f = s(&[(-2, 1), (-1, 1)]);
        let g = s(&[(3, 1)]);
        assert_eq!(f.mul(&g).weierstrass_degree(), DegreeVerdict::Known(1));
    }

    #[test]
    fn mul_precision_rule() {
        // f = x^-2 + ... + O(x^3), g = x^4 exact: prec = min(3+4, inf-2) = 7
        let f = LaurentSeries::from_terms_trunc([(-2, int(1))], 3);
        let g = s(&[(4, 1)]);
        assert_eq!(f.mul(&g).prec(), Precision::Trunc(7));
        // zero-to-prec times nonzero: zero at prec + W
        let z = LaurentSeries::zero_trunc(5);
        let p = z.mul(&s(&[(2, 3)]));
        assert!(p.is_zero_known());
        assert_eq!(p.prec(), Precision::Trunc(7));
        // exact zero annihilates
        assert_eq!(LaurentSeries::zero().mul(&f), LaurentSeries::zero());
    }

    #[test]
    fn inverse_monomial_is_exact() {
        let inv = s(&[(1, 1)]).inverse().unwrap();
        assert_eq!(inv, s(&[(-1, 1)]));
        assert!(inv.is_exact());
    }

    #[test]
    fn inverse_of_geometric() {
        // oracle: multiply back and compare with 1 to the result precision
        let f = s(&[(0, 1), (1, -1)]); // 1 - x
        let inv = f.inverse().unwrap();
        assert_eq!(inv.prec(), Precision::Trunc(DEFAULT_PREC));
        for e in 0..DEFAULT_PREC {
            assert_eq!(inv.coeff(e).unwrap(), int(1));
        }
        let back = f.mul(&inv);
        assert!(back.agrees_with(&LaurentSeries::one(), DEFAULT_PREC));
    }

    #[test]
    fn inverse_rejects_zero() {
        assert_eq!(LaurentSeries::zero_trunc(5).inverse(), Err(SeriesError::ZeroDivisor));
        assert_eq!(LaurentSeries::zero().inverse(), Err(SeriesError::ZeroDivisor));
    }

    #[test]
    fn inverse_precision_rule_truncated() {
        // f = x^2(1 + x + ...) known to prec 6: inverse prec = 6 - 4 = 2
        let f = LaurentSeries::from_terms_trunc([(2, int(1)), (3, int(1))], 6);
        let inv = f.inverse().unwrap();
        assert_eq!(inv.prec(), Precision::Trunc(2));
        assert_eq!(inv.lead_exponent(), Some(-2));
        assert!(f.mul(&inv).agrees_with(&LaurentSeries::one(), 2));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(s(&[(3, 1)]).derivative(), s(&[(2, 3)]));
        assert_eq!(s(&[(0, 5)]).derivative(), LaurentSeries::zero());
        assert_eq!(s(&[(-1, 1)]).derivative(), s(&[(-2, -1)]));
    }

    #[test]
    fn integrate_examples() {
        let f = s(&[(0, 1), (1, 1)]);
        let int_f = f.integrate().unwrap();
        assert_eq!(
            int_f,
            LaurentSeries::from_terms([(1, int(1)), (2, rat(1, 2))])
        );
        assert_eq!(
            s(&[(3, 1)]).integrate().unwrap().weierstrass_degree(),
            DegreeVerdict::Known(4)
        );
        assert_eq!(s(&[(-1, 1)]).integrate(), Err(SeriesError::NonzeroResidue));
        // extension to residue-free Laurent series
        let g = s(&[(-3, 2)]);
        assert_eq!(g.integrate().unwrap(), s(&[(-2, -1)]));
        assert_eq!(g.integrate().unwrap().derivative(), g);
    }

    #[test]
    fn compose_examples() {
        // g ∘ x = g
        let g = s(&[(0, 1), (1, 2), (3, 1)]);
        assert_eq!(g.compose(&LaurentSeries::x()).unwrap(), g);
        // (x^2) ∘ (x + x^2) = x^2 + 2x^3 + x^4
        let f = s(&[(1, 1), (2, 1)]);
        assert_eq!(
            s(&[(2, 1)]).compose(&f).unwrap(),
            s(&[(2, 1), (3, 2), (4, 1)])
        );
        // W(f) = 0 rejected
        let u = s(&[(0, 1), (1, 1)]);
        assert_eq!(u.compose(&u), Err(SeriesError::CompositionDomain));
        // W(g) < 0 rejected
        assert_eq!(s(&[(-1, 1)]).compose(&LaurentSeries::x()), Err(SeriesError::CompositionDomain));
    }

    #[test]
    fn compose_chain_rule_to_precision() {
        let g = s(&[(0, 1), (1, 3), (2, -2), (5, 1)]);
        let f = s(&[(1, 2), (3, 1)]);
        let comp = g.compose(&f).unwrap();
        let lhs = comp.derivative();
        let rhs = g.derivative().compose(&f).unwrap().mul(&f.derivative());
        assert_eq!(lhs, rhs); // all exact here
        assert_eq!(comp.coeff(0).unwrap(), g.coeff(0).unwrap()); // (g∘f)(0) = g(0)
    }

    #[test]
    fn exp_integral_examples() {
        assert_eq!(LaurentSeries::zero().exp_integral().unwrap(), LaurentSeries::one());
        let e = LaurentSeries::one().exp_integral().unwrap();
        // e^x = 1 + x + x^2/2 + x^3/6 + ...
        assert_eq!(e.coeff(0).unwrap(), int(1));
        assert_eq!(e.coeff(1).unwrap(), int(1));
        assert_eq!(e.coeff(2).unwrap(), rat(1, 2));
        assert_eq!(e.coeff(3).unwrap(), rat(1, 6));
        assert!(e.prec() == Precision::Trunc(DEFAULT_PREC));
    }

    #[test]
    fn exp_integral_rational_case() {
        // g = 2/(1+x): e^{∫g} = (1+x)^2, all higher coefficients 0 to precision
        let g = int(2) * s(&[(0, 1), (1, 1)]).inverse().unwrap().coeff(0).unwrap();
        assert_eq!(g, int(2)); // sanity on the inverse's constant term
        let two_over = s(&[(0, 1), (1, 1)]).inverse().unwrap().scale(&int(2));
        let u = two_over.exp_integral().unwrap();
        assert_eq!(u.coeff(0).unwrap(), int(1));
        assert_eq!(u.coeff(1).unwrap(), int(2));
        assert_eq!(u.coeff(2).unwrap(), int(1));
        for e in 3..24 {
            assert_eq!(u.coeff(e).unwrap(), int(0), "coefficient at {}", e);
        }
        // derived check: ∂u = g·u termwise to precision
        let lhs = u.derivative();
        let rhs = two_over.mul(&u);
        assert!(lhs.eq_to_common_prec(&rhs));
        assert_eq!(u.coeff(0).unwrap(), int(1)); // u ∈ U
    }

    #[test]
    fn log_derivative_examples() {
        assert_eq!(
            s(&[(3, 1)]).log_derivative().unwrap(),
            s(&[(-1, 3)])
        );
        // res(LD(x^5 (1+x))) = 5
        let f = s(&[(5, 1), (6, 1)]);
        assert_eq!(f.log_derivative().unwrap().residue().unwrap(), int(5));
        // LD(uv) = LD(u) + LD(v)
        let u = s(&[(0, 1), (1, 1)]);
        let v = s(&[(-2, 1)]);
        let lhs = u.mul(&v).log_derivative().unwrap();
        let rhs = u.log_derivative().unwrap().add(&v.log_derivative().unwrap());
        assert!(lhs.eq_to_common_prec(&rhs));
    }

    #[test]
    fn ld_preimage_trichotomy() {
        // 3x^-1 -> case B with witness x^3
        match s(&[(-1, 3)]).ld_preimage() {
            LdPreimageResult::CaseB { witness, residue } => {
                assert_eq!(residue, 3);
                assert!(witness.agrees_with(&s(&[(3, 1)]), DEFAULT_PREC));
            }
            other => panic!("expected case B, got {:?}", other),
        }
        assert_eq!(
            s(&[(-2, 2)]).ld_preimage(),
            LdPreimageResult::NoPreimage(LdObstruction::DegreeTooLow)
        );
        let half = LaurentSeries::monomial(rat(1, 2), -1);
        assert_eq!(
            half.ld_preimage(),
            LdPreimageResult::NoPreimage(LdObstruction::NonIntegerResidue)
        );
        // zero-to-precision is case A with witness 1
        match LaurentSeries::zero_trunc(4).ld_preimage() {
            LdPreimageResult::CaseA { witness } => assert_eq!(witness, LaurentSeries::one()),
            other => panic!("expected case A, got {:?}", other),
        }
    }

    #[test]
    fn ld_preimage_round_trip() {
        let g = LaurentSeries::from_terms_trunc(
            [(0, int(2)), (1, rat(-1, 3)), (4, int(5))],
            24,
        );
        match g.ld_preimage() {
            LdPreimageResult::CaseA { witness } => {
                let back = witness.log_derivative().unwrap();
                assert!(back.agrees_with(&g, 20));
            }
            other => panic!("expected case A, got {:?}", other),
        }
        let h = s(&[(-1, -2), (0, 1)]);
        match h.ld_preimage() {
            LdPreimageResult::CaseB { witness, residue } => {
                assert_eq!(residue, -2);
                let back = witness.log_derivative().unwrap();
                assert!(back.agrees_with(&h, 20));
            }
            other => panic!("expected case B, got {:?}", other),
        }
    }

    #[test]
    fn degree_and_residue_verdicts() {
        assert_eq!(s(&[(-3, 1), (0, 1)]).weierstrass_degree(), DegreeVerdict::Known(-3));
        assert_eq!(LaurentSeries::zero().weierstrass_degree(), DegreeVerdict::Infinite);
        assert_eq!(LaurentSeries::zero_trunc(7).weierstrass_degree(), DegreeVerdict::AtLeast(7));
        assert_eq!(s(&[(-1, 2), (0, 5)]).residue().unwrap(), int(2));
        assert_eq!(s(&[(0, 5)]).residue().unwrap(), int(0));
        assert_eq!(LaurentSeries::zero_trunc(-2).residue(), Err(SeriesError::ResidueUnknown));
    }

    #[test]
    fn display_canonical() {
        assert_eq!(s(&[(-1, 1), (0, 2), (3, -1)]).to_string(), "x^-1 + 2 - x^3");
        assert_eq!(LaurentSeries::monomial(rat(3, 2), 3).to_string(), "3/2*x^3");
        assert_eq!(LaurentSeries::zero().to_string(), "0");
        assert_eq!(LaurentSeries::zero_trunc(5).to_string(), "O(x^5)");
        let t = LaurentSeries::from_terms_trunc([(0, int(1)), (1, int(1))], 2);
        assert_eq!(t.to_string(), "1 + x + O(x^2)");
    }
}
