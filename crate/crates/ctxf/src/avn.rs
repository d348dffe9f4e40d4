//! All-vs-Nothing machinery: ring-linear equations satisfied by context
//! supports, the theory they generate, the AvN decision procedure, and the
//! hierarchy witness showing that AvN classes over different prime moduli do
//! not collapse.
//!
//! Coefficients live in `Z_q` with `q` a multiple of the outcome module's
//! exponent, which is exactly when the ring action on the module is
//! well-defined. The integer-coefficient theory is represented through this
//! quotient; the hierarchy argument additionally lifts a prime-field theory
//! to integer coefficients acting through a foreign module, which for
//! assignments valued there means all residues modulo its exponent.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use thiserror::Error;

use crate::abgroup::{FiniteAbelianGroup, GroupElement, GroupError};
use crate::mermin::MerminScenario;
use crate::sheaf::{sections_over, Boolean, EmpiricalModel, Measurement, Section};
use crate::zsolve::EquationRhs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AvnError {
    #[error("modulus {q} is not a positive multiple of the module exponent {exponent}")]
    BadModulus { q: u64, exponent: u64 },
    #[error("the value module must be the model's outcome group")]
    ModuleMismatch,
    #[error("assignment does not cover the equation's context")]
    DomainMismatch,
    #[error("{p} and the module exponent {exponent} share a factor")]
    NotCoprime { p: u64, exponent: u64 },
    #[error("the hierarchy witness needs a nontrivial value module")]
    TrivialModule,
    #[error("scenario is not of the required shape: {0}")]
    BadScenarioShape(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A ring-linear equation `sum_{m in C} n_m s_m = b` with coefficients in
/// `Z_q` and right-hand side in the outcome module.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearEquation {
    context: BTreeSet<Measurement>,
    coeffs: BTreeMap<Measurement, u64>,
    rhs: GroupElement,
}

impl LinearEquation {
    pub fn new(coeffs: BTreeMap<Measurement, u64>, rhs: GroupElement) -> Self {
        let context = coeffs.keys().copied().collect();
        Self { context, coeffs, rhs }
    }

    /// The equation's index set `C`.
    pub fn context(&self) -> &BTreeSet<Measurement> {
        &self.context
    }

    pub fn coeffs(&self) -> &BTreeMap<Measurement, u64> {
        &self.coeffs
    }

    pub fn rhs(&self) -> &GroupElement {
        &self.rhs
    }
}

/// All equations over a fixed modulus satisfied by the recorded supports;
/// `contexts` records which support sets generated it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearTheory {
    modulus: u64,
    equations: Vec<LinearEquation>,
    contexts: Vec<BTreeSet<Measurement>>,
}

impl LinearTheory {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn equations(&self) -> &[LinearEquation] {
        &self.equations
    }

    pub fn contexts(&self) -> &[BTreeSet<Measurement>] {
        &self.contexts
    }

    pub fn union(mut self, other: LinearTheory) -> LinearTheory {
        assert_eq!(self.modulus, other.modulus, "theories share one modulus");
        self.equations.extend(other.equations);
        self.contexts.extend(other.contexts);
        self
    }
}

/// Whether an assignment satisfies one equation in the outcome module. The
/// assignment may be defined on a superset of the equation's context.
pub fn satisfies(
    s: &Section,
    phi: &LinearEquation,
    group: &FiniteAbelianGroup,
) -> Result<bool, AvnError> {
    let mut acc = group.zero();
    for (m, &n) in &phi.coeffs {
        let value = s.get(m).ok_or(AvnError::DomainMismatch)?;
        acc = group.add(&acc, &group.scalar_mul(n as i64, value)?)?;
    }
    Ok(acc == phi.rhs)
}

/// Enumerates every coefficient vector in `(Z_q)^C` and keeps the equations
/// satisfied by all of `support`. The right-hand side is forced by the first
/// support section and verified against the rest; empty supports admit every
/// equation. Deterministic lexicographic order.
pub fn theory_of_support(
    context: &BTreeSet<Measurement>,
    support: &BTreeSet<Section>,
    q: u64,
    group: &FiniteAbelianGroup,
) -> Result<LinearTheory, AvnError> {
    if q == 0 || q % group.exponent() != 0 {
        return Err(AvnError::BadModulus { q, exponent: group.exponent() });
    }
    let members: Vec<Measurement> = context.iter().copied().collect();
    let total = (q as u128).checked_pow(members.len() as u32).expect("desk scale");
    let mut equations = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let mut coeffs: BTreeMap<Measurement, u64> = BTreeMap::new();
        for m in members.iter().rev() {
            coeffs.insert(*m, (rem % q as u128) as u64);
            rem /= q as u128;
        }
        let evaluate = |s: &Section| -> Result<GroupElement, AvnError> {
            let mut acc = group.zero();
            for (m, &n) in &coeffs {
                let value = s.get(m).ok_or(AvnError::DomainMismatch)?;
                acc = group.add(&acc, &group.scalar_mul(n as i64, value)?)?;
            }
            Ok(acc)
        };
        let mut sections = support.iter();
        match sections.next() {
            Some(first) => {
                let forced = evaluate(first)?;
                let mut all = true;
                for s in sections {
                    if evaluate(s)? != forced {
                        all = false;
                        break;
                    }
                }
                if all {
                    equations.push(LinearEquation {
                        context: context.clone(),
                        coeffs,
                        rhs: forced,
                    });
                }
            }
            None => {
                for b in group.elements() {
                    equations.push(LinearEquation {
                        context: context.clone(),
                        coeffs: coeffs.clone(),
                        rhs: b,
                    });
                }
            }
        }
    }
    Ok(LinearTheory { modulus: q, equations, contexts: vec![context.clone()] })
}

/// Outcome of the AvN decision: either the theory is globally unsatisfiable
/// (All-vs-Nothing), or a satisfying global assignment witnesses the
/// opposite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvnOutcome {
    pub avn: bool,
    pub witness: Option<Section>,
    pub theory: LinearTheory,
}

/// Decides AvN for a possibilistic model: generates the theory of every
/// context support, then exhaustively searches global assignments valued in
/// the outcome module. The model is AvN iff no assignment satisfies the
/// whole theory. The value module must be the outcome group itself, since
/// the generated right-hand sides live there.
pub fn avn_check(
    model: &EmpiricalModel<Boolean>,
    q: u64,
    module: &FiniteAbelianGroup,
) -> Result<AvnOutcome, AvnError> {
    let group = model.scenario().outcome_group();
    if module != group {
        return Err(AvnError::ModuleMismatch);
    }
    let mut theory: Option<LinearTheory> = None;
    for (ctx, dist) in model.contexts() {
        let t = theory_of_support(ctx, &dist.support(), q, group)?;
        theory = Some(match theory {
            Some(acc) => acc.union(t),
            None => t,
        });
    }
    let theory = theory.expect("a scenario has at least one context");
    let witness = sections_over(group, model.scenario().measurements())
        .into_iter()
        .find(|s| {
            theory
                .equations()
                .iter()
                .all(|phi| satisfies(s, phi, group).expect("global domain"))
        });
    Ok(AvnOutcome { avn: witness.is_none(), witness, theory })
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let ext = i64::extended_gcd(&(a as i64 % m as i64), &(m as i64));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m as i64) as u64)
}

/// The non-collapsing-hierarchy witness. Input: the scenario of `p*y = 1`
/// over `Z_p` (AvN over `Z_p`) and a nontrivial module `K'` with exponent
/// coprime to `p`. Then `y := p^{-1}` exists in `K'`, and the global
/// assignment sending unphased measurements to 0 and phased ones to `y`
/// satisfies the whole integer lift of the prime-field theory, whose
/// context equations are the integer multiples of the canonical outcome-sum
/// equations. The witness certifies the model is not AvN over `K'`.
pub fn hierarchy_witness(
    p: u64,
    kprime: &FiniteAbelianGroup,
    scenario: &MerminScenario,
) -> Result<Section, AvnError> {
    if kprime.is_trivial() {
        return Err(AvnError::TrivialModule);
    }
    if num_integer::gcd(p, kprime.exponent()) != 1 {
        return Err(AvnError::NotCoprime { p, exponent: kprime.exponent() });
    }
    if scenario.group().factors() != [p] {
        return Err(AvnError::BadScenarioShape(format!(
            "outcome group {} is not Z{p}",
            scenario.group()
        )));
    }
    let coeffs = scenario.equation().coeffs();
    let target_ok = matches!(
        scenario.equation().rhs(),
        EquationRhs::Element(e) if e.residues() == [1]
    );
    if coeffs.len() != 1 || *coeffs.values().next().expect("one var") != p as i64 || !target_ok {
        return Err(AvnError::BadScenarioShape(format!(
            "equation {} is not p*y = 1",
            scenario.equation()
        )));
    }

    // y with every invariant-factor coordinate the inverse of p
    let y = kprime.element(
        kprime
            .factors()
            .iter()
            .map(|&n| mod_inverse(p % n, n).expect("coprimality gives invertibility"))
            .collect(),
    )?;
    let witness = Section::new(
        scenario
            .scenario()
            .measurements()
            .iter()
            .map(|m| {
                let value = if m.phase == 0 { kprime.zero() } else { y.clone() };
                (*m, value)
            })
            .collect(),
    );

    // Verify against the lifted theory. Over assignments valued in K', an
    // integer coefficient only matters modulo exponent(K'), and every
    // residue has representatives outside pZ, so all residues must pass.
    let kexp = kprime.exponent();
    for (v, ctx) in scenario.scenario().cover().iter().enumerate() {
        let t_int = if v == 0 {
            0i64
        } else {
            scenario.context_target(v).residues()[0] as i64
        };
        for u in 0..kexp {
            let mut acc = kprime.zero();
            for m in ctx {
                let value = witness.get(m).expect("witness is global");
                acc = kprime.add(&acc, &kprime.scalar_mul(u as i64, value)?)?;
            }
            let expected = kprime.from_integer(u as i64 * t_int);
            assert_eq!(
                acc, expected,
                "internal invariant violation: hierarchy witness fails the lifted theory"
            );
        }
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zsolve::{ValueGroup, ZModEquation};

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    fn meas(party: u32, phase: u32) -> Measurement {
        Measurement::new(party, phase)
    }

    fn eqn(group: &FiniteAbelianGroup, text: &str) -> ZModEquation {
        ZModEquation::parse(text, &ValueGroup::Group(group.clone())).unwrap()
    }

    fn parity_support(
        group: &FiniteAbelianGroup,
        ctx: &BTreeSet<Measurement>,
        target: &GroupElement,
    ) -> BTreeSet<Section> {
        sections_over(group, ctx)
            .into_iter()
            .filter(|s| {
                let mut acc = group.zero();
                for v in s.values().values() {
                    acc = group.add(&acc, v).unwrap();
                }
                acc == *target
            })
            .collect()
    }

    #[test]
    fn satisfies_examples() {
        let z2 = z(2);
        let ctx: BTreeSet<Measurement> = (1..=3).map(|i| meas(i, 0)).collect();
        let phi = LinearEquation::new(
            ctx.iter().map(|m| (*m, 1u64)).collect(),
            z2.zero(),
        );
        let s = Section::new(
            [
                (meas(1, 0), z2.element(vec![1]).unwrap()),
                (meas(2, 0), z2.element(vec![1]).unwrap()),
                (meas(3, 0), z2.zero()),
            ]
            .into(),
        );
        assert!(satisfies(&s, &phi, &z2).unwrap());

        let s_bad = Section::new(
            [
                (meas(1, 0), z2.element(vec![1]).unwrap()),
                (meas(2, 0), z2.zero()),
                (meas(3, 0), z2.zero()),
            ]
            .into(),
        );
        assert!(!satisfies(&s_bad, &phi, &z2).unwrap());

        // the all-zero-coefficient equation with rhs 0 holds everywhere
        let trivial = LinearEquation::new(ctx.iter().map(|m| (*m, 0u64)).collect(), z2.zero());
        assert!(satisfies(&s, &trivial, &z2).unwrap());
        assert!(satisfies(&s_bad, &trivial, &z2).unwrap());

        // missing measurements are a domain error
        let small = Section::new([(meas(1, 0), z2.zero())].into());
        assert!(matches!(satisfies(&small, &phi, &z2), Err(AvnError::DomainMismatch)));
    }

    #[test]
    fn theory_of_parity_support() {
        let z2 = z(2);
        let ctx: BTreeSet<Measurement> = (1..=3).map(|i| meas(i, 0)).collect();
        let support = parity_support(&z2, &ctx, &z2.zero());
        assert_eq!(support.len(), 4);
        let theory = theory_of_support(&ctx, &support, 2, &z2).unwrap();

        let all_ones = LinearEquation::new(ctx.iter().map(|m| (*m, 1u64)).collect(), z2.zero());
        let trivial = LinearEquation::new(ctx.iter().map(|m| (*m, 0u64)).collect(), z2.zero());
        assert!(theory.equations().contains(&all_ones));
        assert!(theory.equations().contains(&trivial));
        // only the two: a (1,0,0)-style functional is not constant on the fiber
        assert_eq!(theory.equations().len(), 2);
        for phi in theory.equations() {
            let nonconstant = phi.coeffs().values().any(|&c| c != 0);
            if nonconstant {
                assert!(phi.coeffs().values().all(|&c| c == 1));
            }
        }

        // every emitted equation holds on every support section, and every
        // non-emitted candidate fails on at least one
        let emitted: BTreeSet<LinearEquation> = theory.equations().iter().cloned().collect();
        let members: Vec<Measurement> = ctx.iter().copied().collect();
        for mask in 0..8u32 {
            let coeffs: BTreeMap<Measurement, u64> = members
                .iter()
                .enumerate()
                .map(|(b, m)| (*m, ((mask >> b) & 1) as u64))
                .collect();
            for b in z2.elements() {
                let phi = LinearEquation::new(coeffs.clone(), b);
                let holds_everywhere =
                    support.iter().all(|s| satisfies(s, &phi, &z2).unwrap());
                assert_eq!(holds_everywhere, emitted.contains(&phi));
            }
        }

        // bad modulus: 3 is not a multiple of the exponent 2
        assert!(matches!(
            theory_of_support(&ctx, &support, 3, &z2),
            Err(AvnError::BadModulus { .. })
        ));
    }

    #[test]
    fn avn_verdicts_on_generated_models() {
        let z2 = z(2);
        let unsolvable = MerminScenario::synthesize(&z2, &eqn(&z2, "2*y = (1)")).unwrap();
        let outcome = avn_check(&unsolvable.empirical_model().possibilize(), 2, &z2).unwrap();
        assert!(outcome.avn);
        assert!(outcome.witness.is_none());

        let solvable = MerminScenario::synthesize(&z2, &eqn(&z2, "2*y = (0)")).unwrap();
        let outcome = avn_check(&solvable.empirical_model().possibilize(), 2, &z2).unwrap();
        assert!(!outcome.avn);
        let witness = outcome.witness.unwrap();
        // the first witness in enumeration order is the all-zero assignment
        assert!(witness.values().values().all(|v| v.is_zero()));

        let z3 = z(3);
        let z3_model = MerminScenario::synthesize(&z3, &eqn(&z3, "3*y = (1)")).unwrap();
        let outcome = avn_check(&z3_model.empirical_model().possibilize(), 3, &z3).unwrap();
        assert!(outcome.avn);

        // module must match the outcome group
        assert!(matches!(
            avn_check(&solvable.empirical_model().possibilize(), 2, &z3),
            Err(AvnError::ModuleMismatch)
        ));
    }

    /// Over a prime modulus every pair of nontrivial theory equations with
    /// proportional coefficients has proportional right-hand sides.
    #[test]
    fn prime_theory_equations_are_proportional() {
        let z3 = z(3);
        let scenario = MerminScenario::synthesize(&z3, &eqn(&z3, "3*y = (1)")).unwrap();
        let model = scenario.empirical_model().possibilize();
        for (ctx, dist) in model.contexts() {
            let theory = theory_of_support(ctx, &dist.support(), 3, &z3).unwrap();
            // exactly the multiples of the canonical outcome-sum equation
            assert_eq!(theory.equations().len(), 3);
            let eqs = theory.equations();
            for phi in eqs {
                for psi in eqs {
                    let nontrivial = |e: &LinearEquation| e.coeffs().values().any(|&c| c != 0);
                    if !nontrivial(phi) || !nontrivial(psi) {
                        continue;
                    }
                    for u in 1..3u64 {
                        let prop_coeffs = phi
                            .coeffs()
                            .iter()
                            .all(|(m, &c)| (c * u) % 3 == psi.coeffs()[m]);
                        if prop_coeffs {
                            assert_eq!(
                                z3.scalar_mul(u as i64, phi.rhs()).unwrap(),
                                *psi.rhs()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hierarchy_witness_examples() {
        // p = 3, K' = Z2: y = 1, controls 0, phased 1
        let z3 = z(3);
        let scenario = MerminScenario::synthesize(&z3, &eqn(&z3, "3*y = (1)")).unwrap();
        let z2 = z(2);
        let witness = hierarchy_witness(3, &z2, &scenario).unwrap();
        for (m, v) in witness.values() {
            if m.phase == 0 {
                assert!(v.is_zero());
            } else {
                assert_eq!(*v, z2.element(vec![1]).unwrap());
            }
        }

        // p = 3, K' = Z3: not coprime
        assert!(matches!(
            hierarchy_witness(3, &z3, &scenario),
            Err(AvnError::NotCoprime { .. })
        ));

        // p = 5, K' = Z3: y = 2 because 5 * 2 = 10 = 1 (mod 3); the check
        // needs only the scenario's cover, not its empirical model
        let z5 = z(5);
        let scenario5 = MerminScenario::synthesize(&z5, &eqn(&z5, "5*y = (1)")).unwrap();
        assert_eq!(scenario5.parties(), 6);
        let witness = hierarchy_witness(5, &z(3), &scenario5).unwrap();
        for (m, v) in witness.values() {
            if m.phase != 0 {
                assert_eq!(v.residues(), [2]);
            }
        }

        // shape validation: the scenario must encode p*y = 1 over Z_p
        assert!(matches!(
            hierarchy_witness(5, &z2, &scenario),
            Err(AvnError::BadScenarioShape(_))
        ));
    }
}
