//! Sheaf-theoretic contextuality: measurement scenarios, semiring-valued
//! distributions on joint outcomes, marginalization, no-signalling, the
//! support subpresheaf, and the three-level contextuality classification.
//!
//! Probabilities are exact nonnegative rationals and possibilities are
//! booleans, so feasibility and emptiness verdicts are never at the mercy of
//! rounding. A model is a compatible family of per-context distributions;
//! compatibility on overlaps is the usual no-signalling property.

mod simplex;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::abgroup::{FiniteAbelianGroup, GroupElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SheafError {
    #[error("restriction target is not a subset of the distribution domain")]
    DomainNotContained,
    #[error("section domain does not match the distribution domain")]
    SectionDomainMismatch,
    #[error("section value lies outside the outcome group")]
    WrongGroup,
    #[error("boolean distribution must have nonempty support")]
    EmptySupport,
    #[error("probability weights must be nonnegative")]
    NegativeWeight,
    #[error("distribution weights must sum to 1, got {0}")]
    NotNormalized(String),
    #[error("cover does not cover the measurement set")]
    CoverNotGlobal,
    #[error("model has {got} distributions for {expected} contexts")]
    ContextCountMismatch { got: usize, expected: usize },
    #[error("operation requires a no-signalling model")]
    Signalling,
}

/// A measurement label: party index and phase label (0 is the unphased
/// measurement; `r >= 1` names the phase attached to equation variable `r`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Measurement {
    pub party: u32,
    pub phase: u32,
}

impl Measurement {
    pub fn new(party: u32, phase: u32) -> Self {
        Self { party, phase }
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase == 0 {
            write!(f, "X{}^0", self.party)
        } else {
            write!(f, "X{}^a{}", self.party, self.phase)
        }
    }
}

/// A finite measurement set with a global cover of contexts; all measurements
/// share the same outcome group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementScenario {
    measurements: BTreeSet<Measurement>,
    outcome_group: FiniteAbelianGroup,
    cover: Vec<BTreeSet<Measurement>>,
}

impl MeasurementScenario {
    pub fn new(
        measurements: BTreeSet<Measurement>,
        outcome_group: FiniteAbelianGroup,
        cover: Vec<BTreeSet<Measurement>>,
    ) -> Result<Self, SheafError> {
        let union: BTreeSet<Measurement> = cover.iter().flatten().copied().collect();
        if union != measurements {
            return Err(SheafError::CoverNotGlobal);
        }
        Ok(Self { measurements, outcome_group, cover })
    }

    pub fn measurements(&self) -> &BTreeSet<Measurement> {
        &self.measurements
    }

    pub fn outcome_group(&self) -> &FiniteAbelianGroup {
        &self.outcome_group
    }

    pub fn cover(&self) -> &[BTreeSet<Measurement>] {
        &self.cover
    }
}

/// An assignment of outcomes to a subset of measurements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Section {
    values: BTreeMap<Measurement, GroupElement>,
}

impl Section {
    pub fn new(values: BTreeMap<Measurement, GroupElement>) -> Self {
        Self { values }
    }

    pub fn empty() -> Self {
        Self { values: BTreeMap::new() }
    }

    pub fn domain(&self) -> BTreeSet<Measurement> {
        self.values.keys().copied().collect()
    }

    pub fn get(&self, m: &Measurement) -> Option<&GroupElement> {
        self.values.get(m)
    }

    pub fn values(&self) -> &BTreeMap<Measurement, GroupElement> {
        &self.values
    }

    pub fn restrict(&self, to: &BTreeSet<Measurement>) -> Section {
        Section {
            values: self
                .values
                .iter()
                .filter(|(m, _)| to.contains(m))
                .map(|(m, v)| (*m, v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(m, v)| format!("{m}={v}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Enumerates all sections over a measurement subset, lexicographic in the
/// sorted measurement order with the first measurement most significant.
pub fn sections_over(
    group: &FiniteAbelianGroup,
    domain: &BTreeSet<Measurement>,
) -> Vec<Section> {
    let measurements: Vec<Measurement> = domain.iter().copied().collect();
    let d = group.order();
    let total = (d as u128).checked_pow(measurements.len() as u32).expect("desk scale");
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut rem = idx;
        let mut values = BTreeMap::new();
        for m in measurements.iter().rev() {
            values.insert(*m, group.element_at((rem % d as u128) as u64));
            rem /= d as u128;
        }
        out.push(Section { values });
    }
    out
}

// ---------------------------------------------------------------------------
// Semirings and distributions

/// Weight semiring of a distribution. Three are used: booleans
/// (possibilities), nonnegative rationals (probabilities), and signed
/// rationals.
pub trait Semiring {
    type Value: Clone + Ord + fmt::Debug;
    const NAME: &'static str;
    fn zero() -> Self::Value;
    fn add(a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn is_zero(v: &Self::Value) -> bool;
    /// Per-semiring normalization invariant over the (pruned) weights.
    fn validate(weights: &BTreeMap<Section, Self::Value>) -> Result<(), SheafError>;
}

/// Possibilities: `(bool, or, and)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boolean;

impl Semiring for Boolean {
    type Value = bool;
    const NAME: &'static str = "boolean";
    fn zero() -> bool {
        false
    }
    fn add(a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn is_zero(v: &bool) -> bool {
        !*v
    }
    fn validate(weights: &BTreeMap<Section, bool>) -> Result<(), SheafError> {
        if weights.is_empty() {
            return Err(SheafError::EmptySupport);
        }
        Ok(())
    }
}

/// Probabilities: nonnegative rationals summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonNegRational;

impl Semiring for NonNegRational {
    type Value = BigRational;
    const NAME: &'static str = "nonneg-rational";
    fn zero() -> BigRational {
        BigRational::zero()
    }
    fn add(a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn is_zero(v: &BigRational) -> bool {
        v.is_zero()
    }
    fn validate(weights: &BTreeMap<Section, BigRational>) -> Result<(), SheafError> {
        if weights.values().any(|v| v.is_negative()) {
            return Err(SheafError::NegativeWeight);
        }
        let sum: BigRational = weights.values().sum();
        if !sum.is_one() {
            return Err(SheafError::NotNormalized(sum.to_string()));
        }
        Ok(())
    }
}

/// Signed rational weights summing to 1; negativity allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedRational;

impl Semiring for SignedRational {
    type Value = BigRational;
    const NAME: &'static str = "rational";
    fn zero() -> BigRational {
        BigRational::zero()
    }
    fn add(a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn is_zero(v: &BigRational) -> bool {
        v.is_zero()
    }
    fn validate(weights: &BTreeMap<Section, BigRational>) -> Result<(), SheafError> {
        let sum: BigRational = weights.values().sum();
        if !sum.is_one() {
            return Err(SheafError::NotNormalized(sum.to_string()));
        }
        Ok(())
    }
}

/// A finitely supported, normalized `R`-distribution on the sections over a
/// fixed measurement subset. Zero weights are never stored.
#[derive(Debug)]
pub struct Distribution<R: Semiring> {
    domain: BTreeSet<Measurement>,
    weights: BTreeMap<Section, R::Value>,
}

impl<R: Semiring> Clone for Distribution<R> {
    fn clone(&self) -> Self {
        Self { domain: self.domain.clone(), weights: self.weights.clone() }
    }
}

impl<R: Semiring> PartialEq for Distribution<R> {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.weights == other.weights
    }
}

impl<R: Semiring> Eq for Distribution<R> {}

impl<R: Semiring> Distribution<R> {
    pub fn new(
        domain: BTreeSet<Measurement>,
        weights: BTreeMap<Section, R::Value>,
    ) -> Result<Self, SheafError> {
        let weights: BTreeMap<Section, R::Value> = weights
            .into_iter()
            .filter(|(_, v)| !R::is_zero(v))
            .collect();
        for s in weights.keys() {
            if s.domain() != domain {
                return Err(SheafError::SectionDomainMismatch);
            }
        }
        R::validate(&weights)?;
        Ok(Self { domain, weights })
    }

    pub fn domain(&self) -> &BTreeSet<Measurement> {
        &self.domain
    }

    pub fn weights(&self) -> &BTreeMap<Section, R::Value> {
        &self.weights
    }

    pub fn weight_of(&self, s: &Section) -> R::Value {
        self.weights.get(s).cloned().unwrap_or_else(R::zero)
    }

    pub fn support(&self) -> BTreeSet<Section> {
        self.weights.keys().cloned().collect()
    }

    /// Marginal onto a subset of the domain: the weight of `t` is the
    /// semiring sum over all sections restricting to `t`.
    pub fn marginalize(&self, to: &BTreeSet<Measurement>) -> Result<Distribution<R>, SheafError> {
        if !to.is_subset(&self.domain) {
            return Err(SheafError::DomainNotContained);
        }
        let mut out: BTreeMap<Section, R::Value> = BTreeMap::new();
        for (s, w) in &self.weights {
            let t = s.restrict(to);
            match out.get_mut(&t) {
                Some(acc) => *acc = R::add(acc, w),
                None => {
                    out.insert(t, w.clone());
                }
            }
        }
        // marginalization preserves normalization in every semiring
        Distribution::new(to.clone(), out)
    }
}

// ---------------------------------------------------------------------------
// Empirical models

/// Per-context distributions over a scenario, all in the same semiring.
#[derive(Debug)]
pub struct EmpiricalModel<R: Semiring> {
    scenario: MeasurementScenario,
    contexts: Vec<Distribution<R>>,
}

impl<R: Semiring> Clone for EmpiricalModel<R> {
    fn clone(&self) -> Self {
        Self { scenario: self.scenario.clone(), contexts: self.contexts.clone() }
    }
}

impl<R: Semiring> PartialEq for EmpiricalModel<R> {
    fn eq(&self, other: &Self) -> bool {
        self.scenario == other.scenario && self.contexts == other.contexts
    }
}

impl<R: Semiring> Eq for EmpiricalModel<R> {}

/// Contextuality hierarchy levels, strongest last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ContextualityClass {
    NonContextual,
    ProbabilisticallyContextual,
    PossibilisticallyContextual,
    StronglyContextual,
}

impl fmt::Display for ContextualityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ContextualityClass::NonContextual => "NonContextual",
            ContextualityClass::ProbabilisticallyContextual => "ProbabilisticallyContextual",
            ContextualityClass::PossibilisticallyContextual => "PossibilisticallyContextual",
            ContextualityClass::StronglyContextual => "StronglyContextual",
        };
        write!(f, "{name}")
    }
}

impl<R: Semiring> EmpiricalModel<R> {
    /// Structural validation only; signalling models are constructible so the
    /// compatibility checker has something to reject.
    pub fn new(
        scenario: MeasurementScenario,
        contexts: Vec<Distribution<R>>,
    ) -> Result<Self, SheafError> {
        if contexts.len() != scenario.cover.len() {
            return Err(SheafError::ContextCountMismatch {
                got: contexts.len(),
                expected: scenario.cover.len(),
            });
        }
        for (ctx, dist) in scenario.cover.iter().zip(&contexts) {
            if dist.domain() != ctx {
                return Err(SheafError::SectionDomainMismatch);
            }
            for s in dist.weights.keys() {
                for v in s.values().values() {
                    if !scenario.outcome_group.contains(v) {
                        return Err(SheafError::WrongGroup);
                    }
                }
            }
        }
        Ok(Self { scenario, contexts })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn context_distributions(&self) -> &[Distribution<R>] {
        &self.contexts
    }

    pub fn contexts(&self) -> impl Iterator<Item = (&BTreeSet<Measurement>, &Distribution<R>)> {
        self.scenario.cover.iter().zip(&self.contexts)
    }

    /// Compatibility on overlaps: for every two contexts, the marginals onto
    /// their intersection agree exactly.
    pub fn is_no_signalling(&self) -> bool {
        for i in 0..self.contexts.len() {
            for j in (i + 1)..self.contexts.len() {
                let overlap: BTreeSet<Measurement> = self.scenario.cover[i]
                    .intersection(&self.scenario.cover[j])
                    .copied()
                    .collect();
                let a = self.contexts[i].marginalize(&overlap).expect("subset");
                let b = self.contexts[j].marginalize(&overlap).expect("subset");
                if a != b {
                    return false;
                }
            }
        }
        true
    }

    /// Sections over `at` whose restriction to every `at /\ C` lies in the
    /// support of the marginal of `e_C`. At the full measurement set this is
    /// the set of global support sections; emptiness there is strong
    /// contextuality.
    pub fn support_presheaf_at(&self, at: &BTreeSet<Measurement>) -> Vec<Section> {
        let group = &self.scenario.outcome_group;
        let mut marginal_supports: Vec<(BTreeSet<Measurement>, BTreeSet<Section>)> = Vec::new();
        for (ctx, dist) in self.contexts() {
            let shared: BTreeSet<Measurement> = at.intersection(ctx).copied().collect();
            let support = dist
                .support()
                .into_iter()
                .map(|s| s.restrict(&shared))
                .collect();
            marginal_supports.push((shared, support));
        }
        sections_over(group, at)
            .into_iter()
            .filter(|s| {
                marginal_supports
                    .iter()
                    .all(|(shared, supp)| supp.contains(&s.restrict(shared)))
            })
            .collect()
    }

    /// Flasque-beneath-the-cover property: for `V <= U <= C` with `C` in the
    /// cover, restriction maps the support presheaf at `U` onto the one at
    /// `V`. Checked exhaustively over all subset pairs of every context.
    pub fn check_flasque_beneath_cover(&self) -> bool {
        let mut cache: BTreeMap<BTreeSet<Measurement>, Vec<Section>> = BTreeMap::new();
        for ctx in self.scenario.cover.iter() {
            let members: Vec<Measurement> = ctx.iter().copied().collect();
            for umask in 0..(1usize << members.len()) {
                let u: BTreeSet<Measurement> = members
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| umask & (1 << b) != 0)
                    .map(|(_, m)| *m)
                    .collect();
                let sigma_u = cache
                    .entry(u.clone())
                    .or_insert_with(|| self.support_presheaf_at(&u))
                    .clone();
                // every subset of u, via submask enumeration
                let mut vmask = umask;
                loop {
                    let v: BTreeSet<Measurement> = members
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| vmask & (1 << b) != 0)
                        .map(|(_, m)| *m)
                        .collect();
                    let sigma_v = cache
                        .entry(v.clone())
                        .or_insert_with(|| self.support_presheaf_at(&v))
                        .clone();
                    let image: BTreeSet<Section> =
                        sigma_u.iter().map(|s| s.restrict(&v)).collect();
                    if !sigma_v.iter().all(|t| image.contains(t)) {
                        return false;
                    }
                    if vmask == 0 {
                        break;
                    }
                    vmask = (vmask - 1) & umask;
                }
            }
        }
        true
    }
}

impl EmpiricalModel<Boolean> {
    /// First global section (in enumeration order) consistent with every
    /// context's support; `None` exactly when the model is strongly
    /// contextual.
    pub fn find_global_section_possibilistic(&self) -> Option<Section> {
        let group = &self.scenario.outcome_group;
        let supports: Vec<(&BTreeSet<Measurement>, BTreeSet<Section>)> = self
            .contexts()
            .map(|(ctx, dist)| (ctx, dist.support()))
            .collect();
        sections_over(group, &self.scenario.measurements)
            .into_iter()
            .find(|s| supports.iter().all(|(ctx, supp)| supp.contains(&s.restrict(ctx))))
    }
}

impl EmpiricalModel<NonNegRational> {
    /// Collapses probabilities to possibilities: support is preserved.
    pub fn possibilize(&self) -> EmpiricalModel<Boolean> {
        let contexts = self
            .contexts
            .iter()
            .map(|d| {
                Distribution::<Boolean>::new(
                    d.domain().clone(),
                    d.weights().keys().map(|s| (s.clone(), true)).collect(),
                )
                .expect("nonempty support")
            })
            .collect();
        EmpiricalModel { scenario: self.scenario.clone(), contexts }
    }

    /// Exact rational feasibility for a probabilistic hidden-variable model:
    /// nonnegative weights on deterministic global sections whose marginals
    /// reproduce every context distribution. Global sections that violate
    /// some context's support are forced to zero by that context's null rows
    /// and are eliminated up front; the rest go to a phase-one simplex.
    pub fn find_global_section_probabilistic(
        &self,
    ) -> Result<Option<Distribution<NonNegRational>>, SheafError> {
        if !self.is_no_signalling() {
            return Err(SheafError::Signalling);
        }
        let candidates = self.support_presheaf_at(&self.scenario.measurements);
        let mut rows: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
        for (ctx, dist) in self.contexts() {
            for (t, w) in dist.weights() {
                let coeffs: Vec<BigRational> = candidates
                    .iter()
                    .map(|s| {
                        if s.restrict(ctx) == *t {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect();
                rows.push((coeffs, w.clone()));
            }
        }
        // total mass 1 is implied by any one context block; keep the system
        // minimal. With no candidates and positive rhs somewhere the simplex
        // reports infeasibility.
        let Some(solution) = simplex::feasible_nonnegative(candidates.len(), &rows) else {
            return Ok(None);
        };
        let weights: BTreeMap<Section, BigRational> = candidates
            .into_iter()
            .zip(solution)
            .filter(|(_, w)| !w.is_zero())
            .collect();
        let dist = Distribution::<NonNegRational>::new(
            self.scenario.measurements.clone(),
            weights,
        )?;
        // certificate check: marginals must reproduce the model exactly
        for (ctx, expected) in self.contexts() {
            assert_eq!(
                dist.marginalize(ctx).expect("context within measurements"),
                *expected,
                "internal invariant violation: probabilistic section marginals differ"
            );
        }
        Ok(Some(dist))
    }

    /// A signed global section always exists for a no-signalling model. The
    /// closed form is inclusion-exclusion over nonempty subfamilies `S` of
    /// the cover: take the common marginal on the intersection of `S`,
    /// tensored with the uniform distribution off it, signed by `|S|` parity.
    /// Pairing subfamilies with and without a fixed context telescopes every
    /// marginal back to the context distribution itself.
    pub fn find_signed_global_section(
        &self,
    ) -> Result<Distribution<SignedRational>, SheafError> {
        if !self.is_no_signalling() {
            return Err(SheafError::Signalling);
        }
        let group = &self.scenario.outcome_group;
        let x = &self.scenario.measurements;
        let m = self.contexts.len();
        assert!(m <= 16, "cover too large for subfamily enumeration");
        let globals = sections_over(group, x);
        let mut weights: BTreeMap<Section, BigRational> =
            globals.iter().map(|s| (s.clone(), BigRational::zero())).collect();
        for mask in 1usize..(1 << m) {
            let members: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let inter: BTreeSet<Measurement> = members
                .iter()
                .map(|&i| self.scenario.cover[i].clone())
                .reduce(|a, b| a.intersection(&b).copied().collect())
                .expect("nonempty subfamily");
            // common marginal: any member works, no-signalling makes them equal
            let marginal = self.contexts[members[0]].marginalize(&inter)?;
            let off = (x.len() - inter.len()) as u32;
            let uniform = BigRational::new(
                1.into(),
                num_bigint::BigInt::from(group.order()).pow(off),
            );
            let sign_positive = members.len() % 2 == 1;
            for s in &globals {
                let w = marginal.weight_of(&s.restrict(&inter));
                if w.is_zero() {
                    continue;
                }
                let term = &w * &uniform;
                let slot = weights.get_mut(s).expect("preseeded");
                if sign_positive {
                    *slot += term;
                } else {
                    *slot -= term;
                }
            }
        }
        let dist = Distribution::<SignedRational>::new(x.clone(), weights)?;
        for (ctx, expected) in self.contexts() {
            let got = dist.marginalize(ctx)?;
            let expected_signed = Distribution::<SignedRational>::new(
                ctx.clone(),
                expected.weights().clone(),
            )?;
            assert_eq!(
                got, expected_signed,
                "internal invariant violation: signed section marginals differ"
            );
        }
        Ok(dist)
    }

    /// Strongest applicable level of the contextuality hierarchy. The three
    /// verdicts are monotone by construction: a probabilistic global section
    /// possibilizes to a possibilistic one, whose support witnesses
    /// non-strong contextuality.
    pub fn classify(&self) -> Result<ContextualityClass, SheafError> {
        if !self.is_no_signalling() {
            return Err(SheafError::Signalling);
        }
        let globals = self.support_presheaf_at(&self.scenario.measurements);
        if globals.is_empty() {
            return Ok(ContextualityClass::StronglyContextual);
        }
        // possibilistic extendability: the maximal candidate is the full
        // global support set; it must restrict onto every context support
        let possibilistic = self.contexts().all(|(ctx, dist)| {
            let image: BTreeSet<Section> = globals.iter().map(|s| s.restrict(ctx)).collect();
            dist.support().iter().all(|t| image.contains(t))
        });
        if !possibilistic {
            return Ok(ContextualityClass::PossibilisticallyContextual);
        }
        match self.find_global_section_probabilistic()? {
            Some(_) => Ok(ContextualityClass::NonContextual),
            None => Ok(ContextualityClass::ProbabilisticallyContextual),
        }
    }
}
