//! Pseudomonoids: subsets of ℚ containing 0 and closed under sums of
//! *distinct* elements.
//!
//! Everything here is windowed: infinite families are inspected on an
//! explicit interval and every answer carries a completeness flag or an
//! `UnknownWithinWindow` verdict, so no claim silently outruns the window.
//! For the built-in families (ℤ, ℕ, the Witt pseudomonoid {−1,0,1,…}, dℤ,
//! and numerical submonoids M(n,m)) several questions are answered exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{ceil_int, floor_int, format_scalar, int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PmError {
    /// A finite set that is missing 0 or is not closed under distinct sums.
    NotAPseudomonoid(String),
    /// A subset query whose set is not contained in the window elements.
    SubsetNotInG(Scalar),
    /// Ideal enumeration over more than 24 window elements.
    WindowTooLarge(usize),
    /// Degenerate parameters (empty window, d = 0, non-coprime generators).
    InvalidParameter(String),
}

impl fmt::Display for PmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PmError::NotAPseudomonoid(why) => write!(f, "not a pseudomonoid: {}", why),
            PmError::SubsetNotInG(x) => {
                write!(f, "subset element {} is not a window element of G", format_scalar(x))
            }
            PmError::WindowTooLarge(n) => {
                write!(f, "window has {} elements; ideal enumeration is capped at 24", n)
            }
            PmError::InvalidParameter(why) => write!(f, "invalid parameter: {}", why),
        }
    }
}

impl std::error::Error for PmError {}

/// Closed interval of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Window {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self, PmError> {
        if lo > hi {
            return Err(PmError::InvalidParameter("window lo > hi".into()));
        }
        Ok(Window { lo, hi })
    }

    pub fn of_ints(lo: i64, hi: i64) -> Self {
        Window::new(int(lo), int(hi)).unwrap()
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        *x >= self.lo && *x <= self.hi
    }
}

/// One of the two translation-invariant linear orders on ℚ we support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderChoice {
    Ascending,
    Descending,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinPm {
    /// ℤ.
    Z,
    /// ℕ = {0, 1, 2, …}.
    N,
    /// {−1, 0, 1, 2, …}, the grading of the classical Witt algebra.
    WittPM,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pseudomonoid {
    Builtin(BuiltinPm),
    /// dℤ for nonzero d.
    StepZ(Scalar),
    /// Submonoid of ℕ generated by coprime n, m > 1.
    Numerical(i64, i64),
    /// A validated finite pseudomonoid.
    FiniteSet(BTreeSet<Scalar>),
    /// Distinct-sum closure of a finite generator set (0 is always adjoined).
    GeneratedClosure(BTreeSet<Scalar>),
}

/// Three-valued verdict with checkable evidence on the definite branches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict3<Y, N> {
    Yes(Y),
    No(N),
    UnknownWithinWindow,
}

/// Witness for a positive self-containment verdict: the scalar `a` with
/// `aG ⊊ G`, plus an element of `G` missing from `aG` when we can name one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfContainingWitness {
    pub a: Scalar,
    pub missing: Option<Scalar>,
}

/// An enumerated ideal subset of a window, with the upward-extension flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSubset {
    pub grades: BTreeSet<Scalar>,
    /// True when re-running the closure on an extended window adds nothing
    /// inside the original window, i.e. the set is stable as a restriction.
    pub extends_upward: bool,
}

/// Window extreme with a global-certification flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeElement {
    pub value: Scalar,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeReport {
    pub min: Option<ExtremeElement>,
    pub max: Option<ExtremeElement>,
}

impl Pseudomonoid {
    /// Validates and builds a finite pseudomonoid.
    pub fn finite_set<I: IntoIterator<Item = Scalar>>(elems: I) -> Result<Self, PmError> {
        let set: BTreeSet<Scalar> = elems.into_iter().collect();
        if !set.contains(&Scalar::zero()) {
            return Err(PmError::NotAPseudomonoid("0 is missing".into()));
        }
        for a in &set {
            for b in &set {
                if a != b && !set.contains(&(a + b)) {
                    return Err(PmError::NotAPseudomonoid(format!(
                        "{} + {} = {} is missing",
                        format_scalar(a),
                        format_scalar(b),
                        format_scalar(&(a + b))
                    )));
                }
            }
        }
        Ok(Pseudomonoid::FiniteSet(set))
    }

    pub fn step_z(d: Scalar) -> Result<Self, PmError> {
        if d.is_zero() {
            return Err(PmError::InvalidParameter("dZ requires d != 0".into()));
        }
        Ok(Pseudomonoid::StepZ(d.abs()))
    }

    pub fn numerical(n: i64, m: i64) -> Result<Self, PmError> {
        if n <= 1 || m <= 1 || n.gcd(&m) != 1 {
            return Err(PmError::InvalidParameter(
                "numerical submonoid requires coprime generators > 1".into(),
            ));
        }
        let (n, m) = (n.min(m), n.max(m));
        Ok(Pseudomonoid::Numerical(n, m))
    }

    pub fn generated<I: IntoIterator<Item = Scalar>>(gens: I) -> Self {
        Pseudomonoid::GeneratedClosure(gens.into_iter().collect())
    }

    /// Exact membership where decidable without a window.
    fn member_exact(&self, x: &Scalar) -> Option<bool> {
        match self {
            Pseudomonoid::Builtin(BuiltinPm::Z) => Some(x.is_integer()),
            Pseudomonoid::Builtin(BuiltinPm::N) => Some(x.is_integer() && !x.is_negative()),
            Pseudomonoid::Builtin(BuiltinPm::WittPM) => {
                Some(x.is_integer() && *x >= int(-1))
            }
            Pseudomonoid::StepZ(d) => Some((x / d).is_integer()),
            Pseudomonoid::Numerical(n, m) => {
                if !x.is_integer() || x.is_negative() {
                    return Some(false);
                }
                let v = match crate::scalar::scalar_to_i64(x) {
                    Some(v) => v,
                    None => return None,
                };
                Some(numerical_member(*n, *m, v))
            }
            Pseudomonoid::FiniteSet(s) => Some(s.contains(x)),
            Pseudomonoid::GeneratedClosure(_) => None,
        }
    }

    /// Membership decided within a window: exact families answer directly,
    /// a generated closure answers from its (complete) window enumeration.
    pub fn contains_in_window(&self, x: &Scalar, w: &Window) -> Option<bool> {
        if let Some(b) = self.member_exact(x) {
            return Some(b);
        }
        let (elems, complete) = self.elements(w);
        if elems.contains(x) {
            Some(true)
        } else if complete && w.contains(x) {
            Some(false)
        } else {
            None
        }
    }

    /// Intersection with the window, plus a completeness flag: `true` means
    /// the returned set is exactly `G ∩ [lo, hi]`.
    pub fn elements(&self, w: &Window) -> (BTreeSet<Scalar>, bool) {
        match self {
            Pseudomonoid::Builtin(BuiltinPm::Z) => (integer_range(&w.lo, &w.hi, None), true),
            Pseudomonoid::Builtin(BuiltinPm::N) => {
                (integer_range(&w.lo.clone().max(int(0)), &w.hi, None), true)
            }
            Pseudomonoid::Builtin(BuiltinPm::WittPM) => {
                (integer_range(&w.lo.clone().max(int(-1)), &w.hi, None), true)
            }
            Pseudomonoid::StepZ(d) => {
                let lo = &w.lo / d;
                let hi = &w.hi / d;
                let mut out = BTreeSet::new();
                let mut k = ceil_int(&lo);
                let top = floor_int(&hi);
                while k <= top {
                    out.insert(Scalar::from_integer(k.clone()) * d);
                    k += 1;
                }
                (out, true)
            }
            Pseudomonoid::Numerical(n, m) => {
                let mut out = BTreeSet::new();
                if w.hi.is_negative() {
                    return (out, true);
                }
                let top = floor_int(&w.hi);
                let mut v: i64 = 0;
                while BigInt::from(v) <= top {
                    if numerical_member(*n, *m, v) {
                        let s = int(v);
                        if w.contains(&s) {
                            out.insert(s);
                        }
                    }
                    v += 1;
                }
                (out, true)
            }
            Pseudomonoid::FiniteSet(s) => {
                (s.iter().filter(|x| w.contains(x)).cloned().collect(), true)
            }
            Pseudomonoid::GeneratedClosure(gens) => closure_elements(gens, w),
        }
    }

    fn is_group_like(&self) -> bool {
        matches!(self, Pseudomonoid::Builtin(BuiltinPm::Z) | Pseudomonoid::StepZ(_))
    }
}

impl fmt::Display for Pseudomonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pseudomonoid::Builtin(BuiltinPm::Z) => write!(f, "Z"),
            Pseudomonoid::Builtin(BuiltinPm::N) => write!(f, "N"),
            Pseudomonoid::Builtin(BuiltinPm::WittPM) => write!(f, "Witt"),
            Pseudomonoid::StepZ(d) => write!(f, "dZ:{}", format_scalar(d)),
            Pseudomonoid::Numerical(n, m) => write!(f, "Mnm:{},{}", n, m),
            Pseudomonoid::FiniteSet(s) => {
                write!(f, "set:{{{}}}", join_scalars(s))
            }
            Pseudomonoid::GeneratedClosure(s) => {
                write!(f, "gen:{{{}}}", join_scalars(s))
            }
        }
    }
}

fn join_scalars(s: &BTreeSet<Scalar>) -> String {
    s.iter().map(format_scalar).collect::<Vec<_>>().join(",")
}

fn integer_range(lo: &Scalar, hi: &Scalar, step: Option<&BigInt>) -> BTreeSet<Scalar> {
    let one = BigInt::one();
    let step = step.unwrap_or(&one);
    let mut out = BTreeSet::new();
    let mut k = ceil_int(lo);
    let top = floor_int(hi);
    // align k upward to a multiple of step
    let rem = k.mod_floor(step);
    if !rem.is_zero() {
        k += step - rem;
    }
    while k <= top {
        out.insert(Scalar::from_integer(k.clone()));
        k += step;
    }
    out
}

/// Exact membership in the numerical submonoid generated by coprime n, m.
fn numerical_member(n: i64, m: i64, v: i64) -> bool {
    if v < 0 {
        return false;
    }
    let mut b = 0;
    while b * m <= v {
        if (v - b * m) % n == 0 {
            return true;
        }
        b += 1;
    }
    false
}

/// Distinct-sum closure of a generator set, intersected with the window.
///
/// Completeness is certified only in two sound cases (after scaling the
/// generators to integers with gcd `d`):
///
/// 1. no negative generator — the closure stays in `[0, ∞)` and every
///    element is derivable through intermediates no larger than itself;
/// 2. exactly one negative generator equal to `−d` — the closure stays in
///    `[−d, ∞)`, and a fixed point over an extended ceiling together with a
///    saturated run of `d`-multiples at the top certifies that no element of
///    the requested window arrives through values beyond the ceiling.
///
/// Everything else falls back to a window-restricted fixed point with
/// `complete = false`.
fn closure_elements(gens: &BTreeSet<Scalar>, w: &Window) -> (BTreeSet<Scalar>, bool) {
    let mut all: BTreeSet<Scalar> = gens.clone();
    all.insert(Scalar::zero());
    if gens.is_empty() {
        let zero = Scalar::zero();
        let out: BTreeSet<Scalar> = all.into_iter().filter(|x| w.contains(x)).collect();
        let _ = zero;
        return (out, true);
    }

    // scale to integer units
    let mut denom_lcm = BigInt::one();
    for g in gens {
        denom_lcm = denom_lcm.lcm(g.denom());
    }
    let unit = |x: &Scalar| -> BigInt { x.numer() * (&denom_lcm / x.denom()) };
    let units: BTreeSet<BigInt> = gens.iter().map(unit).collect();
    let mut d = BigInt::zero();
    for u in &units {
        d = d.gcd(u);
    }
    let negatives: Vec<&BigInt> = units.iter().filter(|u| u.is_negative()).collect();
    let sound = negatives.is_empty()
        || (negatives.len() == 1 && !d.is_zero() && *negatives[0] == -d.clone());

    let from_unit = |u: &BigInt| Scalar::new(u.clone(), denom_lcm.clone());
    let hi_unit_window = ceil_int(&(&w.hi * Scalar::from_integer(denom_lcm.clone())));

    if !sound {
        // honest fallback: fixed point restricted to the window
        let mut set: BTreeSet<Scalar> = all.iter().filter(|x| w.contains(x)).cloned().collect();
        loop {
            let mut fresh: Vec<Scalar> = Vec::new();
            for a in &set {
                for b in &set {
                    if a != b {
                        let s = a + b;
                        if w.contains(&s) && !set.contains(&s) {
                            fresh.push(s);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            set.extend(fresh);
        }
        return (set, false);
    }

    let max_gen = units.iter().max().unwrap().clone().max(BigInt::zero());
    let pad = &max_gen * 2 + &d * 4 + 4;
    let ceiling: BigInt = hi_unit_window.clone().max(max_gen.clone()) + &pad;
    let floor: BigInt = if negatives.is_empty() { BigInt::zero() } else { -d.clone() };

    let mut set: BTreeSet<BigInt> = units
        .iter()
        .filter(|u| **u <= ceiling)
        .cloned()
        .collect();
    set.insert(BigInt::zero());
    let mut clipped = false;
    loop {
        let mut fresh: Vec<BigInt> = Vec::new();
        for a in &set {
            for b in &set {
                if a >= b {
                    continue;
                }
                let s = a + b;
                if s > ceiling {
                    clipped = true;
                    continue;
                }
                if s >= floor && !set.contains(&s) {
                    fresh.push(s);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        set.extend(fresh);
    }

    let complete = if !clipped {
        true
    } else {
        // saturation: a full run of d-multiples at the top certifies that
        // every multiple above it is in the closure, hence nothing re-enters
        // the window from beyond the ceiling unaccounted
        let run_lo: BigInt = &ceiling - (&max_gen * 2 + &d * 2);
        let mut k = run_lo.clone();
        let mut ok = run_lo > hi_unit_window; // the run must sit above the window
        while ok && k <= ceiling {
            let aligned = k.mod_floor(&d).is_zero();
            if aligned && !set.contains(&k) {
                ok = false;
            }
            k += 1;
        }
        ok
    };

    let out: BTreeSet<Scalar> = set
        .iter()
        .map(from_unit)
        .filter(|x| w.contains(x))
        .collect();
    (out, complete)
}

/// True iff `S` is closed under distinct sums that land in the window.
pub fn is_closed_subset(
    s: &BTreeSet<Scalar>,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<bool, PmError> {
    let (gw, _) = g.elements(w);
    if let Some(x) = s.iter().find(|x| !gw.contains(x)) {
        return Err(PmError::SubsetNotInG(x.clone()));
    }
    for a in s {
        for b in s {
            if a != b {
                let sum = a + b;
                if w.contains(&sum) && !s.contains(&sum) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// True iff `a + b ∈ I` for every `a ∈ I` and `b ∈ G∩w` with `b ≠ a`,
/// whenever the sum lands in the window.
pub fn is_ideal_subset(
    i: &BTreeSet<Scalar>,
    g: &Pseudomonoid,
    w: &Window,
) -> Result<bool, PmError> {
    let (gw, _) = g.elements(w);
    if let Some(x) = i.iter().find(|x| !gw.contains(x)) {
        return Err(PmError::SubsetNotInG(x.clone()));
    }
    for a in i {
        for b in &gw {
            if a != b {
                let sum = a + b;
                if w.contains(&sum) && !i.contains(&sum) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Smallest window ideal containing `seed`, by forced-sum closure.
fn ideal_closure(
    seed: &BTreeSet<Scalar>,
    gw: &BTreeSet<Scalar>,
    w: &Window,
) -> BTreeSet<Scalar> {
    let mut set = seed.clone();
    let mut work: Vec<Scalar> = set.iter().cloned().collect();
    while let Some(a) = work.pop() {
        for b in gw {
            if &a != b {
                let sum = &a + b;
                if w.contains(&sum) && gw.contains(&sum) && set.insert(sum.clone()) {
                    work.push(sum);
                }
            }
        }
    }
    set
}

/// All ideal subsets of `G ∩ w`, each annotated with the upward-extension
/// flag. Ideal subsets are exactly the unions of the principal closures of
/// single elements, so the search is over those unions, not over all 2ⁿ
/// subsets.
pub fn enumerate_ideal_subsets(
    g: &Pseudomonoid,
    w: &Window,
) -> Result<Vec<IdealSubset>, PmError> {
    let (gw, _) = g.elements(w);
    let n = gw.len();
    if n > 24 {
        return Err(PmError::WindowTooLarge(n));
    }
    let elems: Vec<Scalar> = gw.iter().cloned().collect();
    let index_of = |x: &Scalar| elems.iter().position(|e| e == x).unwrap();

    let principal_masks: Vec<u32> = elems
        .iter()
        .map(|a| {
            let seed: BTreeSet<Scalar> = [a.clone()].into_iter().collect();
            let cl = ideal_closure(&seed, &gw, w);
            cl.iter().map(|x| 1u32 << index_of(x)).sum()
        })
        .collect();

    let mut unions: BTreeSet<u32> = BTreeSet::new();
    unions.insert(0);
    let mut work: Vec<u32> = vec![0];
    while let Some(u) = work.pop() {
        for p in &principal_masks {
            let v = u | p;
            if unions.insert(v) {
                work.push(v);
                if unions.len() > 1_000_000 {
                    return Err(PmError::WindowTooLarge(n));
                }
            }
        }
    }

    // extension window: pad by four steps of the smallest gap
    let step = min_gap(&elems);
    let w_ext = Window::new(w.lo.clone(), &w.hi + &step * int(4)).unwrap();
    let (gw_ext, _) = g.elements(&w_ext);

    let mut out: Vec<IdealSubset> = Vec::new();
    for mask in unions {
        let grades: BTreeSet<Scalar> = elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, x)| x.clone())
            .collect();
        let extended = ideal_closure(&grades, &gw_ext, &w_ext);
        let back: BTreeSet<Scalar> =
            extended.iter().filter(|x| w.contains(x)).cloned().collect();
        let extends_upward = back == grades;
        out.push(IdealSubset { grades, extends_upward });
    }
    out.sort_by(|a, b| {
        b.grades
            .len()
            .cmp(&a.grades.len())
            .then_with(|| a.grades.cmp(&b.grades))
    });
    Ok(out)
}

fn min_gap(sorted: &[Scalar]) -> Scalar {
    let mut gap: Option<Scalar> = None;
    for pair in sorted.windows(2) {
        let d = &pair[1] - &pair[0];
        gap = Some(match gap {
            None => d,
            Some(g) => g.min(d),
        });
    }
    gap.unwrap_or_else(|| int(1))
}

/// Simplicity of `G` as a pseudomonoid, decided where the catalogued
/// arguments apply and reported as a window verdict otherwise.
pub fn simplicity_verdict(
    g: &Pseudomonoid,
    w: &Window,
) -> Verdict3<String, BTreeSet<Scalar>> {
    if g.is_group_like() {
        return Verdict3::Yes("group".into());
    }
    let (gw, complete) = g.elements(w);
    // finite families that are groups element-by-element
    if let Pseudomonoid::FiniteSet(s) = g {
        if s.iter().all(|x| s.contains(&-x.clone())) {
            return Verdict3::Yes("group".into());
        }
    }
    let ideals = match enumerate_ideal_subsets(g, w) {
        Ok(v) => v,
        Err(_) => return Verdict3::UnknownWithinWindow,
    };
    let full: BTreeSet<Scalar> = gw.clone();
    for ideal in &ideals {
        if !ideal.grades.is_empty() && ideal.grades != full && ideal.extends_upward {
            return Verdict3::No(ideal.grades.clone());
        }
    }
    match g {
        // every nonempty ideal of {−1,0,1,…} walks down to the invertible −1,
        // hence contains 0, hence is everything
        Pseudomonoid::Builtin(BuiltinPm::WittPM) => Verdict3::Yes("exhaustive".into()),
        Pseudomonoid::FiniteSet(s) => {
            if s.iter().all(|x| w.contains(x)) {
                Verdict3::Yes("exhaustive".into())
            } else {
                Verdict3::UnknownWithinWindow
            }
        }
        Pseudomonoid::GeneratedClosure(_) if complete => {
            // complete and finite: the window enumeration was exhaustive
            let w_ext = Window::new(&w.lo - int(1), &w.hi + int(1)).unwrap();
            let (ext, ext_complete) = g.elements(&w_ext);
            if ext_complete && ext == gw {
                Verdict3::Yes("exhaustive".into())
            } else {
                Verdict3::UnknownWithinWindow
            }
        }
        _ => Verdict3::UnknownWithinWindow,
    }
}

/// Is there a nonzero `a` with `aG ⊊ G`? Exact for the built-in families and
/// finite sets; bounded search with window evidence otherwise.
pub fn is_self_containing(
    g: &Pseudomonoid,
    search_bound: i64,
) -> Verdict3<SelfContainingWitness, String> {
    match g {
        Pseudomonoid::Builtin(BuiltinPm::Z) => Verdict3::Yes(SelfContainingWitness {
            a: int(2),
            missing: Some(int(1)),
        }),
        Pseudomonoid::Builtin(BuiltinPm::N) => Verdict3::Yes(SelfContainingWitness {
            a: int(2),
            missing: Some(int(1)),
        }),
        Pseudomonoid::StepZ(d) => Verdict3::Yes(SelfContainingWitness {
            a: int(2),
            missing: Some(d.clone()),
        }),
        Pseudomonoid::Numerical(n, m) => Verdict3::Yes(SelfContainingWitness {
            a: int(2),
            missing: Some(int(*n.min(m))),
        }),
        // 1 ∈ G forces a ∈ G and a > 0; then −a ∈ G forces a = 1
        Pseudomonoid::Builtin(BuiltinPm::WittPM) => Verdict3::No("unit-forcing".into()),
        Pseudomonoid::FiniteSet(_) => {
            Verdict3::No("finite: scaling by nonzero a preserves cardinality".into())
        }
        Pseudomonoid::GeneratedClosure(gens) => {
            let radius = gens
                .iter()
                .map(|x| x.abs())
                .max()
                .unwrap_or_else(|| int(1))
                .max(int(1))
                * int(8)
                * int(search_bound.max(1));
            let w = Window::new(-radius.clone(), radius).unwrap();
            let (s, complete) = g.elements(&w);
            if !complete {
                return Verdict3::UnknownWithinWindow;
            }
            let finite = {
                let w2 = Window::new(&w.lo * int(2), &w.hi * int(2)).unwrap();
                let (s2, c2) = g.elements(&w2);
                c2 && s2 == s
            };
            if finite {
                return Verdict3::No("finite: scaling by nonzero a preserves cardinality".into());
            }
            for p in 1..=search_bound {
                for q in 1..=search_bound {
                    for sign in [1i64, -1] {
                        let a = crate::scalar::rat(sign * p, q);
                        if a == int(1) {
                            continue;
                        }
                        let maps_in = s.iter().all(|x| {
                            let y = &a * x;
                            !w.contains(&y) || s.contains(&y)
                        });
                        if !maps_in {
                            continue;
                        }
                        let missing = s.iter().find(|y| {
                            let pre = *y / &a;
                            w.contains(&pre) && !s.contains(&pre)
                        });
                        if let Some(y) = missing {
                            return Verdict3::Yes(SelfContainingWitness {
                                a,
                                missing: Some(y.clone()),
                            });
                        }
                    }
                }
            }
            Verdict3::UnknownWithinWindow
        }
    }
}

/// Searches for a nonzero `k` with `G1 = k·G2`. Exact for built-in pairs and
/// finite sets; windowed bijection evidence otherwise.
pub fn equivalence_test(
    g1: &Pseudomonoid,
    g2: &Pseudomonoid,
    w: &Window,
) -> Verdict3<Scalar, String> {
    use BuiltinPm::*;
    use Pseudomonoid::*;

    // normalize the group-like families to a step
    let step_of = |g: &Pseudomonoid| -> Option<Scalar> {
        match g {
            Builtin(Z) => Some(int(1)),
            StepZ(d) => Some(d.clone()),
            _ => None,
        }
    };
    if let (Some(d1), Some(d2)) = (step_of(g1), step_of(g2)) {
        return Verdict3::Yes(d1 / d2);
    }

    let finite_of = |g: &Pseudomonoid| -> Option<BTreeSet<Scalar>> {
        match g {
            FiniteSet(s) => Some(s.clone()),
            GeneratedClosure(_) => {
                let (s, complete) = g.elements(w);
                let w2 = Window::new(&w.lo * int(2) - int(1), &w.hi * int(2) + int(1)).unwrap();
                let (s2, c2) = g.elements(&w2);
                if complete && c2 && s == s2 {
                    Some(s)
                } else {
                    None
                }
            }
            _ => None,
        }
    };

    match (finite_of(g1), finite_of(g2)) {
        (Some(s1), Some(s2)) => {
            if s1.len() != s2.len() {
                return Verdict3::No("cardinality differs".into());
            }
            let mut candidates: Vec<Scalar> = Vec::new();
            for a in s1.iter().filter(|x| !x.is_zero()) {
                for b in s2.iter().filter(|x| !x.is_zero()) {
                    let k = a / b;
                    if !candidates.contains(&k) {
                        candidates.push(k);
                    }
                }
            }
            candidates.sort();
            if s1.len() == 1 && s2.len() == 1 {
                return Verdict3::Yes(int(1)); // both are {0}
            }
            for k in candidates {
                let image: BTreeSet<Scalar> = s2.iter().map(|x| &k * x).collect();
                if image == s1 {
                    return Verdict3::Yes(k);
                }
            }
            return Verdict3::No("no scalar maps one set onto the other".into());
        }
        (Some(_), None) | (None, Some(_)) => {
            if matches!(g1, FiniteSet(_)) || matches!(g2, FiniteSet(_)) {
                return Verdict3::No("finite vs infinite".into());
            }
            return Verdict3::UnknownWithinWindow;
        }
        (None, None) => {}
    }

    // remaining exact builtin reasoning
    let class = |g: &Pseudomonoid| -> Option<&'static str> {
        match g {
            Builtin(Z) | StepZ(_) => Some("group"),
            Builtin(N) => Some("N"),
            Builtin(WittPM) => Some("witt"),
            Numerical(_, _) => Some("numerical"),
            _ => None,
        }
    };
    match (class(g1), class(g2)) {
        (Some(c1), Some(c2)) if c1 != c2 => {
            // scaling preserves: being a group; the minimum-to-zero pattern of
            // N; the single negative of WittPM; the gap structure of M(n,m)
            return Verdict3::No(format!("structure differs: {} vs {}", c1, c2));
        }
        (Some("N"), Some("N")) | (Some("witt"), Some("witt")) => {
            return Verdict3::Yes(int(1));
        }
        (Some("numerical"), Some("numerical")) => {
            if g1 == g2 {
                return Verdict3::Yes(int(1));
            }
            // kM(n',m') = M(n,m) forces k to be a positive integer (gcd 1 on
            // both sides) and then two consecutive integers beyond the
            // Frobenius number force k = 1
            return Verdict3::No("distinct numerical submonoids".into());
        }
        _ => {}
    }

    // windowed fallback: candidates from ratios of minimal-magnitude elements
    let (s1, c1) = g1.elements(w);
    let min_mag = |s: &BTreeSet<Scalar>| -> Option<Scalar> {
        s.iter().filter(|x| !x.is_zero()).map(|x| x.abs()).min()
    };
    let (s2_probe, _) = g2.elements(w);
    let (m1, m2) = match (min_mag(&s1), min_mag(&s2_probe)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Verdict3::UnknownWithinWindow,
    };
    for k in [&m1 / &m2, -(&m1 / &m2)] {
        // G1 ∩ w should equal k·(G2 ∩ w/k)
        let (a, b) = (&w.lo / &k, &w.hi / &k);
        let (lo2, hi2) = if a <= b { (a, b) } else { (b, a) };
        let w2 = Window::new(lo2, hi2).unwrap();
        let (s2, c2) = g2.elements(&w2);
        let image: BTreeSet<Scalar> = s2.iter().map(|x| &k * x).collect();
        if image == s1 {
            if c1 && c2 {
                return Verdict3::Yes(k);
            }
        }
    }
    Verdict3::UnknownWithinWindow
}

/// Window extremes under the chosen order, with certification when the
/// family proves global extremality.
pub fn extreme_elements(g: &Pseudomonoid, w: &Window, ord: OrderChoice) -> ExtremeReport {
    let (gw, complete) = g.elements(w);
    let asc_min = gw.iter().next().cloned();
    let asc_max = gw.iter().next_back().cloned();

    let covered_finite = match g {
        Pseudomonoid::FiniteSet(s) => s.iter().all(|x| w.contains(x)),
        Pseudomonoid::GeneratedClosure(_) if complete => {
            let w2 = Window::new(&w.lo * int(2) - int(1), &w.hi * int(2) + int(1)).unwrap();
            let (s2, c2) = g.elements(&w2);
            c2 && s2 == gw
        }
        _ => false,
    };

    let global_min: Option<Scalar> = match g {
        Pseudomonoid::Builtin(BuiltinPm::N) | Pseudomonoid::Numerical(_, _) => Some(int(0)),
        Pseudomonoid::Builtin(BuiltinPm::WittPM) => Some(int(-1)),
        Pseudomonoid::FiniteSet(s) => s.iter().next().cloned(),
        _ => None,
    };
    let global_max: Option<Scalar> = match g {
        Pseudomonoid::FiniteSet(s) => s.iter().next_back().cloned(),
        _ => None,
    };

    let lo_el = asc_min.map(|v| {
        let certified = global_min.as_ref() == Some(&v) || covered_finite;
        ExtremeElement { value: v, certified }
    });
    let hi_el = asc_max.map(|v| {
        let certified = global_max.as_ref() == Some(&v) || covered_finite;
        ExtremeElement { value: v, certified }
    });
    match ord {
        OrderChoice::Ascending => ExtremeReport { min: lo_el, max: hi_el },
        OrderChoice::Descending => ExtremeReport { min: hi_el, max: lo_el },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn set(xs: &[i64]) -> BTreeSet<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    /// Test-side oracle: naive distinct-sum closure on an integer interval,
    /// iterated well beyond it to catch re-entry from above and below.
    fn closure_bruteforce(gens: &[i64], lo: i64, hi: i64) -> BTreeSet<i64> {
        let slack = 64;
        let mut s: BTreeSet<i64> = gens.iter().cloned().collect();
        s.insert(0);
        loop {
            let mut fresh = Vec::new();
            for &a in &s {
                for &b in &s {
                    if a != b {
                        let t = a + b;
                        if t >= lo - slack && t <= hi + slack && !s.contains(&t) {
                            fresh.push(t);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            s.extend(fresh);
        }
        s.into_iter().filter(|&x| x >= lo && x <= hi).collect()
    }

    #[test]
    fn builtin_windows() {
        let w = Window::of_ints(-3, 3);
        let (e, complete) = Pseudomonoid::Builtin(BuiltinPm::WittPM).elements(&w);
        assert!(complete);
        assert_eq!(e, set(&[-1, 0, 1, 2, 3]));
        let (e, complete) = Pseudomonoid::numerical(2, 3).unwrap().elements(&Window::of_ints(0, 8));
        assert!(complete);
        assert_eq!(e, set(&[0, 2, 3, 4, 5, 6, 7, 8]));
    }

    #[test]
    fn generated_closure_with_one_negative() {
        let g = Pseudomonoid::generated([int(-1), int(1)]);
        let (e, complete) = g.elements(&Window::of_ints(-5, 5));
        assert!(complete);
        assert_eq!(e, set(&[-1, 0, 1]));
    }

    #[test]
    fn generated_closure_matches_bruteforce() {
        for (gens, lo, hi) in [
            (vec![-1i64, 1, 2], -6i64, 8i64),
            (vec![-1, 3], -5, 9),
            (vec![2, 5], 0, 20),
            (vec![-1, 5], -3, 12),
            (vec![7], -2, 30),
        ] {
            let g = Pseudomonoid::generated(gens.iter().map(|&x| int(x)));
            let w = Window::of_ints(lo, hi);
            let (e, complete) = g.elements(&w);
            assert!(complete, "expected complete for {:?}", gens);
            let oracle: BTreeSet<Scalar> =
                closure_bruteforce(&gens, lo, hi).into_iter().map(int).collect();
            assert_eq!(e, oracle, "closure mismatch for {:?}", gens);
        }
    }

    #[test]
    fn generated_closure_unsound_cases_flagged() {
        // {-3, 4} spirals below any bound: completeness must not be claimed
        let g = Pseudomonoid::generated([int(-3), int(4)]);
        let (_, complete) = g.elements(&Window::of_ints(-10, 10));
        assert!(!complete);
        // two negatives
        let g = Pseudomonoid::generated([int(-1), int(-2), int(3)]);
        let (_, complete) = g.elements(&Window::of_ints(-6, 6));
        assert!(!complete);
    }

    #[test]
    fn finite_set_validation() {
        assert!(Pseudomonoid::finite_set([int(-1), int(0), int(1)]).is_ok());
        assert!(matches!(
            Pseudomonoid::finite_set([int(1), int(2)]),
            Err(PmError::NotAPseudomonoid(_))
        ));
        assert!(matches!(
            Pseudomonoid::finite_set([int(0), int(1), int(2)]),
            Err(PmError::NotAPseudomonoid(_)) // 1 + 2 = 3 missing
        ));
    }

    #[test]
    fn closure_idempotence() {
        let g = Pseudomonoid::generated([int(-1), int(1)]);
        let (e, complete) = g.elements(&Window::of_ints(-5, 5));
        assert!(complete);
        assert!(Pseudomonoid::finite_set(e).is_ok());
    }

    #[test]
    fn closed_subset_examples() {
        let n = Pseudomonoid::Builtin(BuiltinPm::N);
        let w = Window::of_ints(0, 10);
        assert!(is_closed_subset(&BTreeSet::new(), &n, &w).unwrap());
        let s: BTreeSet<Scalar> = [0i64, 2, 3, 4, 5, 6, 7, 8, 9, 10].iter().map(|&x| int(x)).collect();
        assert!(is_closed_subset(&s, &n, &w).unwrap());
        assert!(!is_closed_subset(&set(&[1, 2]), &n, &w).unwrap());
        assert!(matches!(
            is_closed_subset(&set(&[-1]), &n, &w),
            Err(PmError::SubsetNotInG(_))
        ));
    }

    #[test]
    fn ideal_subset_examples() {
        let n = Pseudomonoid::Builtin(BuiltinPm::N);
        let w = Window::of_ints(0, 12);
        let (full, _) = n.elements(&w);
        assert!(is_ideal_subset(&full, &n, &w).unwrap());
        let i2: BTreeSet<Scalar> = (2..=12).map(int).collect();
        assert!(is_ideal_subset(&i2, &n, &w).unwrap());
        assert!(!is_ideal_subset(&set(&[0]), &n, &w).unwrap());
    }

    #[test]
    fn ideal_enumeration_of_n_matches_bruteforce() {
        let n = Pseudomonoid::Builtin(BuiltinPm::N);
        let w = Window::of_ints(0, 12);
        let ideals = enumerate_ideal_subsets(&n, &w).unwrap();
        // oracle: all 2^13 subsets filtered by the ideal predicate
        let (gw, _) = n.elements(&w);
        let elems: Vec<Scalar> = gw.iter().cloned().collect();
        let mut oracle: BTreeSet<BTreeSet<Scalar>> = BTreeSet::new();
        for mask in 0u32..(1 << elems.len()) {
            let s: BTreeSet<Scalar> = elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, x)| x.clone())
                .collect();
            if is_ideal_subset(&s, &n, &w).unwrap() {
                oracle.insert(s);
            }
        }
        let got: BTreeSet<BTreeSet<Scalar>> =
            ideals.iter().map(|i| i.grades.clone()).collect();
        assert_eq!(got, oracle);
        assert_eq!(ideals.len(), 15);
        // the one extra nonempty ideal beyond ∅, full, and the I_k
        let extra: BTreeSet<Scalar> =
            [1i64, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12].iter().map(|&x| int(x)).collect();
        assert!(got.contains(&extra), "expected {{1}} ∪ {{3..12}} to be an ideal");
    }

    #[test]
    fn ideal_enumeration_of_z_is_trivial() {
        let z = Pseudomonoid::Builtin(BuiltinPm::Z);
        let w = Window::of_ints(-6, 6);
        let ideals = enumerate_ideal_subsets(&z, &w).unwrap();
        assert_eq!(ideals.len(), 2);
        assert!(ideals.iter().all(|i| i.extends_upward));
    }

    #[test]
    fn ideal_enumeration_of_numerical_has_nontrivial() {
        let m = Pseudomonoid::numerical(2, 3).unwrap();
        let w = Window::of_ints(0, 12);
        let ideals = enumerate_ideal_subsets(&m, &w).unwrap();
        let i2: BTreeSet<Scalar> = (2..=12).map(int).collect();
        assert!(ideals.iter().any(|i| i.grades == i2));
        assert!(ideals.iter().any(|i| !i.grades.is_empty()
            && i.grades != m.elements(&w).0
            && i.extends_upward));
    }

    #[test]
    fn simplicity_verdicts() {
        let w = Window::of_ints(-6, 6);
        assert_eq!(
            simplicity_verdict(&Pseudomonoid::Builtin(BuiltinPm::Z), &w),
            Verdict3::Yes("group".into())
        );
        assert_eq!(
            simplicity_verdict(&Pseudomonoid::Builtin(BuiltinPm::WittPM), &w),
            Verdict3::Yes("exhaustive".into())
        );
        match simplicity_verdict(&Pseudomonoid::Builtin(BuiltinPm::N), &Window::of_ints(0, 12)) {
            Verdict3::No(witness) => {
                assert!(is_ideal_subset(
                    &witness,
                    &Pseudomonoid::Builtin(BuiltinPm::N),
                    &Window::of_ints(0, 12)
                )
                .unwrap());
                assert!(!witness.is_empty());
            }
            other => panic!("expected No, got {:?}", other),
        }
    }

    #[test]
    fn self_containing_verdicts() {
        assert_eq!(
            is_self_containing(&Pseudomonoid::Builtin(BuiltinPm::Z), 8),
            Verdict3::Yes(SelfContainingWitness { a: int(2), missing: Some(int(1)) })
        );
        assert!(matches!(
            is_self_containing(&Pseudomonoid::Builtin(BuiltinPm::WittPM), 8),
            Verdict3::No(_)
        ));
        assert!(matches!(
            is_self_containing(&Pseudomonoid::Builtin(BuiltinPm::N), 8),
            Verdict3::Yes(SelfContainingWitness { .. })
        ));
        assert!(matches!(
            is_self_containing(&Pseudomonoid::finite_set([int(-1), int(0), int(1)]).unwrap(), 8),
            Verdict3::No(_)
        ));
    }

    #[test]
    fn equivalence_examples() {
        let w = Window::of_ints(-6, 6);
        assert_eq!(
            equivalence_test(
                &Pseudomonoid::step_z(int(3)).unwrap(),
                &Pseudomonoid::Builtin(BuiltinPm::Z),
                &w
            ),
            Verdict3::Yes(int(3))
        );
        assert!(matches!(
            equivalence_test(
                &Pseudomonoid::Builtin(BuiltinPm::WittPM),
                &Pseudomonoid::Builtin(BuiltinPm::Z),
                &w
            ),
            Verdict3::No(_)
        ));
        // {−1,0,1} = (1/2)·{−2,0,2}
        let a = Pseudomonoid::finite_set([int(-1), int(0), int(1)]).unwrap();
        let b = Pseudomonoid::finite_set([int(-2), int(0), int(2)]).unwrap();
        match equivalence_test(&a, &b, &w) {
            Verdict3::Yes(k) => {
                assert!(k == rat(1, 2) || k == rat(-1, 2));
            }
            other => panic!("expected Yes, got {:?}", other),
        }
        // reflexivity
        for g in [
            Pseudomonoid::Builtin(BuiltinPm::Z),
            Pseudomonoid::Builtin(BuiltinPm::N),
            Pseudomonoid::Builtin(BuiltinPm::WittPM),
            Pseudomonoid::numerical(2, 3).unwrap(),
        ] {
            assert_eq!(equivalence_test(&g, &g, &w), Verdict3::Yes(int(1)), "{:?}", g);
        }
    }

    #[test]
    fn extreme_examples() {
        let witt = Pseudomonoid::Builtin(BuiltinPm::WittPM);
        let r = extreme_elements(&witt, &Window::of_ints(-5, 5), OrderChoice::Ascending);
        let min = r.min.unwrap();
        assert_eq!(min.value, int(-1));
        assert!(min.certified);
        let max = r.max.unwrap();
        assert_eq!(max.value, int(5));
        assert!(!max.certified);

        let z = Pseudomonoid::Builtin(BuiltinPm::Z);
        let r = extreme_elements(&z, &Window::of_ints(-4, 4), OrderChoice::Ascending);
        assert!(!r.min.unwrap().certified);
        assert!(!r.max.unwrap().certified);

        let f = Pseudomonoid::finite_set([int(-1), int(0), int(1)]).unwrap();
        let r = extreme_elements(&f, &Window::of_ints(-9, 9), OrderChoice::Ascending);
        assert!(r.min.unwrap().certified);
        let max = r.max.unwrap();
        assert_eq!(max.value, int(1));
        assert!(max.certified);

        // descending order swaps the roles
        let r = extreme_elements(&witt, &Window::of_ints(-5, 5), OrderChoice::Descending);
        assert_eq!(r.max.unwrap().value, int(-1));
    }

    #[test]
    fn small_finite_pseudomonoids_classified() {
        // exhaustive search: subsets of a grid of size ≤ 4 containing 0 that
        // validate are of order 1, 2 or 3, equivalent to the three canonical ones
        let grid: Vec<Scalar> = (-4..=4)
            .flat_map(|p| [int(p), rat(p, 2)])
            .collect();
        let canon1 = Pseudomonoid::finite_set([int(0)]).unwrap();
        let canon2 = Pseudomonoid::finite_set([int(0), int(1)]).unwrap();
        let canon3 = Pseudomonoid::finite_set([int(-1), int(0), int(1)]).unwrap();
        let w = Window::of_ints(-10, 10);
        let mut seen = [false; 4];
        let n = grid.len();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let mut elems: BTreeSet<Scalar> =
                        [grid[i].clone(), grid[j].clone(), grid[k].clone()]
                            .into_iter()
                            .collect();
                    elems.insert(int(0));
                    if let Ok(g) = Pseudomonoid::finite_set(elems.clone()) {
                        let order = elems.len();
                        assert!(order <= 3, "pseudomonoid of order {} found: {:?}", order, elems);
                        seen[order] = true;
                        let canon = match order {
                            1 => &canon1,
                            2 => &canon2,
                            _ => &canon3,
                        };
                        assert!(
                            matches!(equivalence_test(&g, canon, &w), Verdict3::Yes(_)),
                            "not equivalent to canonical: {:?}",
                            elems
                        );
                    }
                }
            }
        }
        assert!(seen[1] && seen[2] && seen[3]);
    }
}
