//! Strongly graded Lie algebras over a pseudomonoid `G ⊆ ℚ`.
//!
//! The basis `{e_g}` carries the structure constants `[e_a, e_b] = (b−a)
//! e_{a+b}` with the `a = b` term zero by convention. All statements about
//! the (usually infinite-dimensional) algebra are checked on a grade window
//! with explicit overflow accounting: sums that leave the window are
//! reported, never silently dropped.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::linalg::kernel_basis;
use crate::pseudomonoid::{extreme_elements, OrderChoice, Pseudomonoid, Window};
use crate::scalar::{format_scalar, int, rat_pow, scalar_to_i64, Scalar};
use crate::series::LaurentSeries;
use crate::witt::WittElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradedError {
    /// A bracket or image grade left the window; carries (source grades,
    /// escaping target grade).
    GradeOverflow { a: Scalar, b: Scalar, target: Scalar },
    /// A sum of grades stayed inside the window but is not a grade of `G`:
    /// the ambient pseudomonoid is invalid or incompletely enumerated.
    NotInG(Scalar),
    /// The operation needs a nonzero element.
    ZeroElement,
    /// A grade set is not contained in the window elements of `G`.
    SubsetNotInG(Scalar),
    /// `spectrum_window` outside the supported shapes `k·e_0 (+ k'·e_m)`.
    UnsupportedForm(String),
    /// Endomorphism precondition violated (wrong grading or `kG ⊄ G`).
    InvalidEndo(String),
    /// Conversion to the concrete picture needs exact integer grades.
    InexactConversion,
}

impl fmt::Display for GradedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedError::GradeOverflow { a, b, target } => write!(
                f,
                "grade overflow: {} + {} = {} leaves the window",
                format_scalar(a),
                format_scalar(b),
                format_scalar(target)
            ),
            GradedError::NotInG(g) => {
                write!(f, "grade {} is inside the window but not in G", format_scalar(g))
            }
            GradedError::ZeroElement => write!(f, "zero element"),
            GradedError::SubsetNotInG(g) => {
                write!(f, "grade {} is not a window element of G", format_scalar(g))
            }
            GradedError::UnsupportedForm(s) => write!(f, "unsupported form: {}", s),
            GradedError::InvalidEndo(s) => write!(f, "invalid endomorphism: {}", s),
            GradedError::InexactConversion => {
                write!(f, "conversion requires exact integer grades")
            }
        }
    }
}

impl std::error::Error for GradedError {}

/// Finite-support assignment of coefficients to grades in the basis `{e_g}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedElement {
    terms: std::collections::BTreeMap<Scalar, Scalar>,
}

impl GradedElement {
    pub fn zero() -> Self {
        GradedElement::default()
    }

    /// The basis element `e_g`.
    pub fn basis(g: Scalar) -> Self {
        Self::from_terms([(g, Scalar::from_integer(1.into()))])
    }

    pub fn from_terms<I: IntoIterator<Item = (Scalar, Scalar)>>(terms: I) -> Self {
        let mut out = GradedElement::default();
        for (g, c) in terms {
            out.accumulate(g, c);
        }
        out
    }

    fn accumulate(&mut self, g: Scalar, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &Scalar) -> Scalar {
        self.terms.get(g).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> {
        self.terms.iter()
    }

    pub fn supp(&self) -> BTreeSet<Scalar> {
        self.terms.keys().cloned().collect()
    }

    /// Least support grade under the chosen order.
    pub fn init(&self, ord: OrderChoice) -> Result<Scalar, GradedError> {
        let k = match ord {
            OrderChoice::Ascending => self.terms.keys().next(),
            OrderChoice::Descending => self.terms.keys().next_back(),
        };
        k.cloned().ok_or(GradedError::ZeroElement)
    }

    /// Greatest support grade under the chosen order.
    pub fn term_index(&self, ord: OrderChoice) -> Result<Scalar, GradedError> {
        let k = match ord {
            OrderChoice::Ascending => self.terms.keys().next_back(),
            OrderChoice::Descending => self.terms.keys().next(),
        };
        k.cloned().ok_or(GradedError::ZeroElement)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.accumulate(g.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GradedElement {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        GradedElement {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * k)).collect(),
        }
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", format_scalar(g), format_scalar(c))?;
        }
        write!(f, "}}")
    }
}

fn validate_support(x: &GradedElement, gw: &BTreeSet<Scalar>) -> Result<(), GradedError> {
    for g in x.terms.keys() {
        if !gw.contains(g) {
            return Err(GradedError::SubsetNotInG(g.clone()));
        }
    }
    Ok(())
}

/// Bilinear extension of `[e_a, e_b] = (b−a) e_{a+b}`; errors if any nonzero
/// pair lands outside the window.
pub fn graded_bracket(
    x: &GradedElement,
    y: &GradedElement,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<GradedElement, GradedError> {
    let (gw, _) = g.elements(w);
    validate_support(x, &gw)?;
    validate_support(y, &gw)?;
    let mut out = GradedElement::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            if a == b {
                continue;
            }
            let target = a + b;
            if !w.contains(&target) {
                return Err(GradedError::GradeOverflow {
                    a: a.clone(),
                    b: b.clone(),
                    target,
                });
            }
            if !gw.contains(&target) {
                return Err(GradedError::NotInG(target));
            }
            out.accumulate(target, (b - a) * ca * cb);
        }
    }
    Ok(out)
}

/// The subspace `Θ(I) = ⊕_{a∈I} E_a`, as its grade set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSubspace {
    pub grades: BTreeSet<Scalar>,
}

impl ThetaSubspace {
    pub fn contains(&self, x: &GradedElement) -> bool {
        x.terms.keys().all(|g| self.grades.contains(g))
    }
}

/// Validates `I ⊆ G ∩ w` and wraps it as a subspace descriptor.
pub fn theta(
    i: &BTreeSet<Scalar>,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<ThetaSubspace, GradedError> {
    let (gw, _) = g.elements(w);
    for a in i {
        if !gw.contains(a) {
            return Err(GradedError::SubsetNotInG(a.clone()));
        }
    }
    Ok(ThetaSubspace { grades: i.clone() })
}

/// Splits an element into its single-grade components by the bracket
/// induction `y ↦ y − (1/a₁)[e_0, y]`, then checks the result against the
/// direct support split.
pub fn component_extraction(
    y: &GradedElement,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<Vec<GradedElement>, GradedError> {
    if y.is_zero() {
        return Err(GradedError::ZeroElement);
    }
    let e0 = GradedElement::basis(Scalar::zero());

    fn extract(
        y: &GradedElement,
        e0: &GradedElement,
        g: &Pseudomonoid,
        w: &Window,
    ) -> Result<Vec<GradedElement>, GradedError> {
        let supp = y.supp();
        if supp.len() <= 1 {
            return Ok(if y.is_zero() { Vec::new() } else { vec![y.clone()] });
        }
        let a1 = supp
            .iter()
            .find(|a| !a.is_zero())
            .expect("more than one grade, so one is nonzero")
            .clone();
        // [e_0, y] keeps every grade in place, so no overflow is possible
        let ad0 = graded_bracket(e0, y, g, w)?;
        let reduced = y.sub(&ad0.scale(&a1.clone().recip()));
        let mut sub = extract(&reduced, e0, g, w)?;
        // undo the (1 − aᵢ/a₁) scaling on each recovered component
        for comp in &mut sub {
            let ai = comp.terms.keys().next().unwrap().clone();
            let factor = Scalar::from_integer(1.into()) - &ai / &a1;
            *comp = comp.scale(&factor.recip());
        }
        let mut rest = GradedElement::zero();
        for c in &sub {
            rest = rest.add(c);
        }
        let first = y.sub(&rest);
        let mut out = vec![first];
        out.append(&mut sub);
        out.sort_by(|p, q| {
            p.terms.keys().next().unwrap().cmp(q.terms.keys().next().unwrap())
        });
        Ok(out)
    }

    let comps = extract(y, &e0, g, w)?;
    // verification against the direct split
    let direct: Vec<GradedElement> = y
        .terms()
        .map(|(g_, c)| GradedElement::from_terms([(g_.clone(), c.clone())]))
        .collect();
    assert_eq!(comps, direct, "component extraction disagrees with the support split");
    Ok(comps)
}

/// Overflow annotations from an ideal closure: (source grade, escaped target).
pub type OverflowPairs = BTreeSet<(Scalar, Scalar)>;

/// The ideal subset generated by the supports of `gens`, closed under
/// window-bracketing with basis elements. Out-of-window targets are reported
/// as annotations rather than failures.
pub fn ideal_from_elements(
    gens: &[GradedElement],
    g: &Pseudomonoid,
    w: &Window,
) -> Result<(BTreeSet<Scalar>, OverflowPairs), GradedError> {
    let (gw, _) = g.elements(w);
    for x in gens {
        validate_support(x, &gw)?;
    }
    let mut set: BTreeSet<Scalar> = gens.iter().flat_map(|x| x.supp()).collect();
    let mut overflow: OverflowPairs = BTreeSet::new();
    let mut work: Vec<Scalar> = set.iter().cloned().collect();
    while let Some(a) = work.pop() {
        for b in &gw {
            if &a == b {
                continue;
            }
            let t = &a + b;
            if !w.contains(&t) {
                overflow.insert((a.clone(), t));
                continue;
            }
            if !gw.contains(&t) {
                return Err(GradedError::NotInG(t));
            }
            if set.insert(t.clone()) {
                work.push(t);
            }
        }
    }
    Ok((set, overflow))
}

/// Exact matrix of `ad(α)` on the window basis, with overflow accounting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdMatrix {
    /// Window grades, ascending; row/column `i` corresponds to `e_{basis[i]}`.
    pub basis: Vec<Scalar>,
    /// `entries[i][j]` is the `e_{basis[i]}`-coefficient of `[α, e_{basis[j]}]`.
    pub entries: Vec<Vec<Scalar>>,
    /// Pairs (source grade, target grade) whose image left the window.
    pub overflow: OverflowPairs,
}

pub fn ad_matrix(
    alpha: &GradedElement,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<AdMatrix, GradedError> {
    let (gw, _) = g.elements(w);
    validate_support(alpha, &gw)?;
    let basis: Vec<Scalar> = gw.iter().cloned().collect();
    let index_of = |x: &Scalar| basis.iter().position(|e| e == x);
    let n = basis.len();
    let mut entries = vec![vec![Scalar::zero(); n]; n];
    let mut overflow: OverflowPairs = BTreeSet::new();
    for (j, gj) in basis.iter().enumerate() {
        for (a, ca) in alpha.terms() {
            if a == gj {
                continue;
            }
            let t = a + gj;
            if !w.contains(&t) {
                overflow.insert((gj.clone(), t));
                continue;
            }
            match index_of(&t) {
                Some(i) => {
                    let c = (gj - a) * ca;
                    entries[i][j] = &entries[i][j] + &c;
                }
                None => return Err(GradedError::NotInG(t)),
            }
        }
    }
    Ok(AdMatrix { basis, entries, overflow })
}

/// Exact basis of the `a`-eigenspace of `ad(α)` within the window,
/// restricted to basis columns whose bracket image has no overflow. Every
/// returned vector satisfies `[α, v] = a·v` exactly.
pub fn eigen_kernel(
    alpha: &GradedElement,
    a: &Scalar,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<Vec<GradedElement>, GradedError> {
    let m = ad_matrix(alpha, g, w)?;
    let overflowing: BTreeSet<&Scalar> = m.overflow.iter().map(|(s, _)| s).collect();
    let valid: Vec<usize> = (0..m.basis.len())
        .filter(|&j| !overflowing.contains(&m.basis[j]))
        .collect();
    if valid.is_empty() {
        return Ok(Vec::new());
    }
    let rows = m.basis.len();
    let mat: Vec<Vec<Scalar>> = (0..rows)
        .map(|i| {
            valid
                .iter()
                .map(|&j| {
                    let mut v = m.entries[i][j].clone();
                    if i == j {
                        v -= a;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let kernel = kernel_basis(&mat);
    let out: Vec<GradedElement> = kernel
        .into_iter()
        .map(|vec| {
            GradedElement::from_terms(
                vec.into_iter()
                    .enumerate()
                    .map(|(k, c)| (m.basis[valid[k]].clone(), c)),
            )
        })
        .collect();
    for v in &out {
        let br = graded_bracket(alpha, v, g, w)
            .expect("valid columns cannot overflow");
        assert_eq!(br, v.scale(a), "eigen kernel vector fails its equation");
    }
    Ok(out)
}

/// Windowed spectrum report for the supported ad-diagonalizable forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    /// Candidate eigenvalues with a nonzero exact kernel.
    pub values: BTreeSet<Scalar>,
    /// Candidates whose kernel came out empty (boundary losses included).
    pub missing: BTreeSet<Scalar>,
    /// Window grades excluded from eigenvector support by overflow.
    pub excluded_grades: BTreeSet<Scalar>,
}

/// Spectrum of `ad(α)` on the window, for `α = k·e_0` or `α = k·e_0 + k'·e_m`
/// with `m` a certified extreme of `(G, ord)` — the shapes for which the
/// windowed candidate set `k·(G ∩ w)` is exhaustive.
pub fn spectrum_window(
    alpha: &GradedElement,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<SpectrumReport, GradedError> {
    let supp = alpha.supp();
    let k = alpha.coeff(&Scalar::zero());
    if k.is_zero() {
        return Err(GradedError::UnsupportedForm(
            "alpha must have a nonzero e_0 component".into(),
        ));
    }
    let extras: Vec<&Scalar> = supp.iter().filter(|s| !s.is_zero()).collect();
    match extras.len() {
        0 => {}
        1 => {
            let m = extras[0];
            let asc = extreme_elements(g, w, OrderChoice::Ascending);
            let certified = [asc.min, asc.max]
                .into_iter()
                .flatten()
                .any(|e| e.certified && &e.value == m);
            if !certified {
                return Err(GradedError::UnsupportedForm(format!(
                    "grade {} is not a certified extreme of G",
                    format_scalar(m)
                )));
            }
        }
        _ => {
            return Err(GradedError::UnsupportedForm(
                "alpha must be k*e_0 or k*e_0 + k'*e_m".into(),
            ))
        }
    }

    let (gw, _) = g.elements(w);
    let mut values = BTreeSet::new();
    let mut missing = BTreeSet::new();
    let mut excluded = BTreeSet::new();
    for grade in &gw {
        let cand = &k * grade;
        let kern = eigen_kernel(alpha, &cand, g, w)?;
        if kern.is_empty() {
            missing.insert(cand);
        } else {
            values.insert(cand);
        }
    }
    let m = ad_matrix(alpha, g, w)?;
    for (s, _) in &m.overflow {
        excluded.insert(s.clone());
    }
    Ok(SpectrumReport { values, missing, excluded_grades: excluded })
}

/// An endomorphism given by its action on the window basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndoSpec {
    /// Over `G = ℤ`: `e_n ↦ a^{−(n+1)} e_{an}` for a nonzero integer `a`.
    VirasoroScale(i64),
    /// `e_g ↦ (1/k)·e_{kg}` for nonzero `k` with `kG ⊆ G` on the window.
    GradeScale(Scalar),
}

fn require_integer_grading(g: &Pseudomonoid) -> Result<(), GradedError> {
    match g {
        Pseudomonoid::Builtin(crate::pseudomonoid::BuiltinPm::Z) => Ok(()),
        _ => Err(GradedError::InvalidEndo("VirasoroScale requires G = Z".into())),
    }
}

pub fn endo_apply(
    e: &EndoSpec,
    x: &GradedElement,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<GradedElement, GradedError> {
    let (gw, _) = g.elements(w);
    validate_support(x, &gw)?;
    match e {
        EndoSpec::VirasoroScale(a) => {
            require_integer_grading(g)?;
            if *a == 0 {
                return Err(GradedError::InvalidEndo("a must be nonzero".into()));
            }
            let mut out = GradedElement::zero();
            for (grade, c) in x.terms() {
                let n = scalar_to_i64(grade).ok_or(GradedError::InexactConversion)?;
                let target = int(a * n);
                if !w.contains(&target) {
                    return Err(GradedError::GradeOverflow {
                        a: grade.clone(),
                        b: grade.clone(),
                        target,
                    });
                }
                out.accumulate(target, c * rat_pow(&int(*a), -(n + 1)));
            }
            Ok(out)
        }
        EndoSpec::GradeScale(k) => {
            if k.is_zero() {
                return Err(GradedError::InvalidEndo("k must be nonzero".into()));
            }
            // validate kG ⊆ G on the window
            for grade in &gw {
                let t = k * grade;
                if w.contains(&t) && !gw.contains(&t) {
                    return Err(GradedError::InvalidEndo(format!(
                        "k*{} = {} is not in G",
                        format_scalar(grade),
                        format_scalar(&t)
                    )));
                }
            }
            let mut out = GradedElement::zero();
            for (grade, c) in x.terms() {
                let target = k * grade;
                if !w.contains(&target) {
                    return Err(GradedError::GradeOverflow {
                        a: grade.clone(),
                        b: grade.clone(),
                        target,
                    });
                }
                out.accumulate(target, c * k.clone().recip());
            }
            Ok(out)
        }
    }
}

/// Exhaustive homomorphism check of an endomorphism on all window pairs
/// whose brackets and images stay inside the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoReport {
    pub pass: bool,
    pub pairs_checked: usize,
    pub counterexample: Option<(Scalar, Scalar)>,
    pub image_grades: BTreeSet<Scalar>,
    pub injective_on_window: bool,
    pub onto_window: bool,
}

pub fn endo_verify(
    e: &EndoSpec,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<EndoReport, GradedError> {
    let (gw, _) = g.elements(w);
    let basis: Vec<Scalar> = gw.iter().cloned().collect();

    let mut image_grades: BTreeSet<Scalar> = BTreeSet::new();
    let mut images: Vec<Option<GradedElement>> = Vec::new();
    for grade in &basis {
        match endo_apply(e, &GradedElement::basis(grade.clone()), g, w) {
            Ok(y) => {
                image_grades.extend(y.supp());
                images.push(Some(y));
            }
            Err(GradedError::GradeOverflow { .. }) => images.push(None),
            Err(other) => return Err(other),
        }
    }

    let mut pass = true;
    let mut counterexample = None;
    let mut pairs_checked = 0usize;
    for (i, n) in basis.iter().enumerate() {
        for (j, m) in basis.iter().enumerate() {
            if j <= i {
                continue;
            }
            let (fn_, fm) = match (&images[i], &images[j]) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            let en = GradedElement::basis(n.clone());
            let em = GradedElement::basis(m.clone());
            let bracket = match graded_bracket(&en, &em, g, w) {
                Ok(b) => b,
                Err(GradedError::GradeOverflow { .. }) => continue,
                Err(other) => return Err(other),
            };
            let rhs = match endo_apply(e, &bracket, g, w) {
                Ok(r) => r,
                Err(GradedError::GradeOverflow { .. }) => continue,
                Err(other) => return Err(other),
            };
            let lhs = match graded_bracket(fn_, fm, g, w) {
                Ok(l) => l,
                Err(GradedError::GradeOverflow { .. }) => continue,
                Err(other) => return Err(other),
            };
            pairs_checked += 1;
            if lhs != rhs && pass {
                pass = false;
                counterexample = Some((n.clone(), m.clone()));
            }
        }
    }

    // injectivity on the window basis: defined images are nonzero with
    // pairwise distinct supports
    let defined: Vec<&GradedElement> = images.iter().flatten().collect();
    let mut supports: BTreeSet<BTreeSet<Scalar>> = BTreeSet::new();
    let mut injective = true;
    for y in &defined {
        if y.is_zero() || !supports.insert(y.supp()) {
            injective = false;
        }
    }
    let onto_window = basis.iter().all(|g_| image_grades.contains(g_));

    Ok(EndoReport {
        pass,
        pairs_checked,
        counterexample,
        image_grades,
        injective_on_window: injective,
        onto_window,
    })
}

/// The grade-to-operator dictionary `e_n ↔ x^{n+1}∂` of the concrete
/// pictures of the classical Witt and centerless Virasoro algebras.
pub fn graded_to_witt(x: &GradedElement) -> Result<WittElement, GradedError> {
    let mut terms: Vec<(i64, Scalar)> = Vec::new();
    for (g, c) in x.terms() {
        let n = scalar_to_i64(g).ok_or(GradedError::InexactConversion)?;
        terms.push((n + 1, c.clone()));
    }
    Ok(WittElement::new(LaurentSeries::from_terms(terms)))
}

/// Inverse dictionary; requires an exact coefficient series.
pub fn witt_to_graded(v: &WittElement) -> Result<GradedElement, GradedError> {
    if !v.coeff.is_exact() {
        return Err(GradedError::InexactConversion);
    }
    Ok(GradedElement::from_terms(
        v.coeff.support().map(|(e, c)| (int(e - 1), c.clone())),
    ))
}
