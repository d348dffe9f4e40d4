//! Construction of Mermin measurement scenarios from a group-valued equation
//! and a torus phase solution: one control context (all phases zero) plus `N`
//! cyclically shifted variations, the exact empirical model, the
//! deterministic outcome pushforward, and the explicit hidden-variable
//! mixture when the equation is solvable inside the group.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::abgroup::{FiniteAbelianGroup, GroupElement, GroupError, TorusPoint};
use crate::sheaf::{
    sections_over, Distribution, EmpiricalModel, Measurement, MeasurementScenario,
    NonNegRational, Section, SheafError,
};
use crate::zsolve::{
    self, Assignment, EquationRhs, EquationSystem, SolveError, ValueGroup, ZModEquation,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario equations must be valued in the outcome group")]
    NotGroupValued,
    #[error("coefficient {coeff} of {var} is negative; party counts need positive coefficients")]
    NegativeCoefficient { var: String, coeff: i64 },
    #[error("phase solution is missing variable {0}")]
    BetaMissing(String),
    #[error("phase assignment does not solve the equation in the torus")]
    BetaNotASolution,
    #[error("joint outcome section {index} lies outside its context's support")]
    OutOfSupport { index: usize },
    #[error("assignment does not solve the scenario equation in the group")]
    NotASolution,
    #[error("tensor factors must share one outcome group")]
    MixedGroups,
    #[error("tensor of zero scenarios")]
    EmptyTensor,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
}

/// A scenario built from one equation `sum_r n_r y_r = a` over `K` and a
/// torus solution `beta`: `N` parties, each carrying measurements labeled by
/// the equation variables plus the unphased label 0, covered by one control
/// and `N` cyclic variations.
#[derive(Debug, Clone)]
pub struct MerminScenario {
    group: FiniteAbelianGroup,
    equation: ZModEquation,
    /// Equation variables in sorted order; label `r` names `variables[r-1]`.
    variables: Vec<String>,
    exponent: u64,
    parties: usize,
    padding: usize,
    /// Phase label per party for the first variation: the first `n_1`
    /// parties carry label 1, the next `n_2` label 2, ..., trailing `n_0`
    /// parties the unphased label 0.
    label_of_party: Vec<u32>,
    /// `beta_r` for `r = 1..=M`; `beta_0 = 0` is implicit.
    betas: Vec<TorusPoint>,
    /// `alpha_i = beta_{R(i)}` per party.
    alphas: Vec<TorusPoint>,
    target: GroupElement,
    scenario: MeasurementScenario,
}

impl MerminScenario {
    /// Builds the scenario from a verified torus solution. `N` is the least
    /// admissible party count: `N >= max(2, sum n_r)` and `N = 1 (mod k)`.
    pub fn build(
        group: &FiniteAbelianGroup,
        equation: &ZModEquation,
        beta: &BTreeMap<String, TorusPoint>,
    ) -> Result<Self, ScenarioError> {
        let target = match equation.rhs() {
            EquationRhs::Element(e) if group.contains(e) => e.clone(),
            _ => return Err(ScenarioError::NotGroupValued),
        };
        for (var, &coeff) in equation.coeffs() {
            if coeff < 0 {
                return Err(ScenarioError::NegativeCoefficient { var: var.clone(), coeff });
            }
        }
        let variables: Vec<String> = equation.coeffs().keys().cloned().collect();
        let betas: Vec<TorusPoint> = variables
            .iter()
            .map(|v| {
                let point = beta.get(v).ok_or_else(|| ScenarioError::BetaMissing(v.clone()))?;
                if point.dim() != group.torus_dim() {
                    return Err(ScenarioError::Group(GroupError::TorusDimensionMismatch {
                        got: point.dim(),
                        expected: group.torus_dim(),
                    }));
                }
                Ok(point.clone())
            })
            .collect::<Result<_, ScenarioError>>()?;
        let single = EquationSystem::new(
            vec![equation.clone()],
            ValueGroup::Group(group.clone()),
        )?;
        let assignment: BTreeMap<String, TorusPoint> = variables
            .iter()
            .cloned()
            .zip(betas.iter().cloned())
            .collect();
        if !zsolve::verify_solution(&single, &Assignment::Torus(assignment)) {
            return Err(ScenarioError::BetaNotASolution);
        }

        let exponent = group.exponent();
        let coeff_sum: usize = equation.coeffs().values().map(|&c| c as usize).sum();
        let mut parties = coeff_sum.max(2);
        while parties as u64 % exponent != 1 % exponent {
            parties += 1;
        }
        let padding = parties - coeff_sum;

        // first variation layout: coefficient blocks in variable order, the
        // unphased padding at the end
        let mut label_of_party = Vec::with_capacity(parties);
        for (r, var) in variables.iter().enumerate() {
            let n = equation.coeffs()[var] as usize;
            label_of_party.extend(std::iter::repeat((r + 1) as u32).take(n));
        }
        label_of_party.extend(std::iter::repeat(0u32).take(padding));

        let zero_phase = group.torus_zero();
        let alphas: Vec<TorusPoint> = label_of_party
            .iter()
            .map(|&r| if r == 0 { zero_phase.clone() } else { betas[(r - 1) as usize].clone() })
            .collect();

        let mut cover: Vec<BTreeSet<Measurement>> = Vec::with_capacity(parties + 1);
        cover.push((1..=parties).map(|i| Measurement::new(i as u32, 0)).collect());
        for v in 1..=parties {
            cover.push(
                (1..=parties)
                    .map(|i| {
                        let shifted = (i - 1 + v - 1) % parties;
                        Measurement::new(i as u32, label_of_party[shifted])
                    })
                    .collect(),
            );
        }
        let measurements: BTreeSet<Measurement> = cover.iter().flatten().copied().collect();
        let scenario = MeasurementScenario::new(measurements, group.clone(), cover)?;

        Ok(Self {
            group: group.clone(),
            equation: equation.clone(),
            variables,
            exponent,
            parties,
            padding,
            label_of_party,
            betas,
            alphas,
            target,
            scenario,
        })
    }

    /// Solves the equation in the torus and builds the scenario from the
    /// canonical solution.
    pub fn synthesize(
        group: &FiniteAbelianGroup,
        equation: &ZModEquation,
    ) -> Result<Self, ScenarioError> {
        let single = EquationSystem::new(
            vec![equation.clone()],
            ValueGroup::Group(group.clone()),
        )?;
        let beta = zsolve::solve_torus(&single)?;
        Self::build(group, equation, &beta)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn equation(&self) -> &ZModEquation {
        &self.equation
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    pub fn betas(&self) -> &[TorusPoint] {
        &self.betas
    }

    pub fn alphas(&self) -> &[TorusPoint] {
        &self.alphas
    }

    pub fn target(&self) -> &GroupElement {
        &self.target
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    /// Context count: the control plus `N` variations.
    pub fn context_count(&self) -> usize {
        self.parties + 1
    }

    /// Outcome-sum target of context `v` (0 is the control).
    pub fn context_target(&self, v: usize) -> GroupElement {
        if v == 0 {
            self.group.zero()
        } else {
            self.target.clone()
        }
    }

    /// Per-party phases of context `v`, for the quantum realization.
    pub fn context_phases(&self, v: usize) -> Vec<TorusPoint> {
        if v == 0 {
            return vec![self.group.torus_zero(); self.parties];
        }
        (0..self.parties)
            .map(|i| self.alphas[(i + v - 1) % self.parties].clone())
            .collect()
    }

    /// The exact empirical model: each context carries the uniform weight
    /// `1/D^(N-1)` on sections whose outcome sum hits the context target.
    pub fn empirical_model(&self) -> EmpiricalModel<NonNegRational> {
        let d = BigInt::from(self.group.order());
        let fiber_weight = BigRational::new(
            BigInt::from(1),
            d.pow(self.parties as u32 - 1),
        );
        let dists: Vec<Distribution<NonNegRational>> = (0..self.context_count())
            .map(|v| {
                let ctx = &self.scenario.cover()[v];
                let t = self.context_target(v);
                let weights: BTreeMap<Section, BigRational> = sections_over(&self.group, ctx)
                    .into_iter()
                    .filter(|s| self.section_sum(s) == t)
                    .map(|s| (s, fiber_weight.clone()))
                    .collect();
                Distribution::new(ctx.clone(), weights).expect("fiber is nonempty")
            })
            .collect();
        EmpiricalModel::new(self.scenario.clone(), dists).expect("contexts align")
    }

    fn section_sum(&self, s: &Section) -> GroupElement {
        let mut acc = self.group.zero();
        for v in s.values().values() {
            acc = self.group.add(&acc, v).expect("same group");
        }
        acc
    }

    /// Deterministic pushforward of a joint outcome across all contexts:
    /// the variation outcome-sums combined, minus `n_0` times the control
    /// outcome-sum. Constant (equal to the equation target) on the support.
    pub fn pushforward(&self, joint: &JointOutcome) -> Result<GroupElement, ScenarioError> {
        if joint.sections.len() != self.context_count() {
            return Err(ScenarioError::OutOfSupport { index: joint.sections.len() });
        }
        for (v, s) in joint.sections.iter().enumerate() {
            if s.domain() != self.scenario.cover()[v]
                || self.section_sum(s) != self.context_target(v)
            {
                return Err(ScenarioError::OutOfSupport { index: v });
            }
        }
        let mut acc = self.group.zero();
        for s in joint.sections.iter().skip(1) {
            acc = self.group.add(&acc, &self.section_sum(s)).expect("same group");
        }
        let control = self.section_sum(&joint.sections[0]);
        let scaled = self.group.scalar_mul(self.padding as i64, &control).expect("same group");
        Ok(self.group.sub(&acc, &scaled).expect("same group"))
    }

    /// The explicit hidden-variable mixture available when `b` solves the
    /// equation in `K`: uniform over the zero-sum fiber `x` of deterministic
    /// global sections `X_i^{a_r} -> x_i + b_r` (with `b_0 = 0`). Its
    /// marginals reproduce the empirical model exactly.
    pub fn lhv_when_solvable(
        &self,
        b: &BTreeMap<String, GroupElement>,
    ) -> Result<Distribution<NonNegRational>, ScenarioError> {
        let single = EquationSystem::new(
            vec![self.equation.clone()],
            ValueGroup::Group(self.group.clone()),
        )?;
        if !zsolve::verify_solution(&single, &Assignment::Elements(b.clone())) {
            return Err(ScenarioError::NotASolution);
        }
        let b_of_label = |r: u32| -> GroupElement {
            if r == 0 {
                self.group.zero()
            } else {
                b[&self.variables[(r - 1) as usize]].clone()
            }
        };
        let d = BigInt::from(self.group.order());
        let weight = BigRational::new(BigInt::from(1), d.pow(self.parties as u32 - 1));
        let mut weights: BTreeMap<Section, BigRational> = BTreeMap::new();
        for tuple in sections_over(&self.group, &self.scenario.cover()[0]) {
            // tuples over the control context enumerate the zero-sum fiber
            if self.section_sum(&tuple) != self.group.zero() {
                continue;
            }
            let values: BTreeMap<Measurement, GroupElement> = self
                .scenario
                .measurements()
                .iter()
                .map(|m| {
                    let xi = tuple
                        .get(&Measurement::new(m.party, 0))
                        .expect("control covers every party");
                    let val = self
                        .group
                        .add(xi, &b_of_label(m.phase))
                        .expect("same group");
                    (*m, val)
                })
                .collect();
            weights.insert(Section::new(values), weight.clone());
        }
        Ok(Distribution::new(self.scenario.measurements().clone(), weights)?)
    }
}

/// One section per context, aligned with the cover (control first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointOutcome {
    pub sections: Vec<Section>,
}

impl JointOutcome {
    pub fn new(sections: Vec<Section>) -> Self {
        Self { sections }
    }
}

/// Independent composition of scenarios over one group: measurement sets are
/// made disjoint by renumbering parties, the cover is the product of the
/// factor covers (one context chosen per factor), and distributions multiply.
#[derive(Debug, Clone)]
pub struct TensorScenario {
    group: FiniteAbelianGroup,
    factors: Vec<MerminScenario>,
    offsets: Vec<u32>,
    scenario: MeasurementScenario,
}

/// Unsolvability of any factor equation (the factors' equations on disjoint
/// variable universes, taken jointly) makes the composite contextual; a
/// per-factor family of group solutions yields a product hidden-variable
/// model.
pub fn tensor_scenarios(factors: &[MerminScenario]) -> Result<TensorScenario, ScenarioError> {
    let first = factors.first().ok_or(ScenarioError::EmptyTensor)?;
    let group = first.group().clone();
    if factors.iter().any(|f| f.group() != &group) {
        return Err(ScenarioError::MixedGroups);
    }
    let mut offsets = Vec::with_capacity(factors.len());
    let mut offset = 0u32;
    for f in factors {
        offsets.push(offset);
        offset += f.parties() as u32;
    }
    let shift = |f: usize, m: &Measurement| Measurement::new(m.party + offsets[f], m.phase);

    let counts: Vec<usize> = factors.iter().map(|f| f.context_count()).collect();
    let total: usize = counts.iter().product();
    let mut cover = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut ctx: BTreeSet<Measurement> = BTreeSet::new();
        for (f, count) in counts.iter().enumerate().rev() {
            let v = idx % count;
            idx /= count;
            ctx.extend(factors[f].scenario().cover()[v].iter().map(|m| shift(f, m)));
        }
        cover.push(ctx);
    }
    let measurements: BTreeSet<Measurement> = cover.iter().flatten().copied().collect();
    let scenario = MeasurementScenario::new(measurements, group.clone(), cover)?;
    Ok(TensorScenario { group, factors: factors.to_vec(), offsets, scenario })
}

impl TensorScenario {
    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn factors(&self) -> &[MerminScenario] {
        &self.factors
    }

    /// Product model: the weight of a composite section is the product of
    /// the factor weights of its per-factor restrictions.
    pub fn empirical_model(&self) -> EmpiricalModel<NonNegRational> {
        let factor_models: Vec<EmpiricalModel<NonNegRational>> =
            self.factors.iter().map(|f| f.empirical_model()).collect();
        let counts: Vec<usize> = self.factors.iter().map(|f| f.context_count()).collect();
        let dists: Vec<Distribution<NonNegRational>> = self
            .scenario
            .cover()
            .iter()
            .enumerate()
            .map(|(flat, ctx)| {
                let mut rem = flat;
                let mut choice = vec![0usize; counts.len()];
                for (f, count) in counts.iter().enumerate().rev() {
                    choice[f] = rem % count;
                    rem /= count;
                }
                let mut weights: BTreeMap<Section, BigRational> = BTreeMap::new();
                weights.insert(Section::empty(), BigRational::from_integer(1.into()));
                for f in 0..self.factors.len() {
                    let dist = &factor_models[f].context_distributions()[choice[f]];
                    let mut next: BTreeMap<Section, BigRational> = BTreeMap::new();
                    for (partial, w) in &weights {
                        for (s, fw) in dist.weights() {
                            let mut values = partial.values().clone();
                            for (m, val) in s.values() {
                                values.insert(
                                    Measurement::new(m.party + self.offsets[f], m.phase),
                                    val.clone(),
                                );
                            }
                            next.insert(Section::new(values), w * fw);
                        }
                    }
                    weights = next;
                }
                Distribution::new(ctx.clone(), weights).expect("product normalizes")
            })
            .collect();
        EmpiricalModel::new(self.scenario.clone(), dists).expect("contexts align")
    }
}

/// The four parity equations of the original three-qubit argument, over Z2
/// in the six variables X1,X2,X3,Y1,Y2,Y3: each row is satisfiable, the
/// system is consistent, yet no joint solution exists.
pub fn original_parity_system() -> EquationSystem {
    let z2 = FiniteAbelianGroup::cyclic(2).expect("2 >= 2");
    let vg = ValueGroup::Group(z2);
    let texts = [
        "X1 + X2 + X3 = (0)",
        "Y1 + Y2 + X3 = (1)",
        "Y1 + X2 + Y3 = (1)",
        "X1 + Y2 + Y3 = (1)",
    ];
    let eqs = texts
        .iter()
        .map(|t| ZModEquation::parse(t, &vg).expect("fixture parses"))
        .collect();
    EquationSystem::new(eqs, vg).expect("fixture is well-formed")
}
