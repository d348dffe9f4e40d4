//! Dense complex-vector realization of generalized GHZ states and torus
//! phase gates, used to cross-validate the exact combinatorial models.
//!
//! States live in the X basis: amplitudes are indexed by tuples in `K^N`
//! (big-endian mixed radix, party 0 most significant). The character basis
//! (Z basis) enters through [`character_matrix`]; a phase gate is diagonal
//! there and becomes a group convolution in the X basis. States stay
//! unnormalized until measurement, where Born weights are normalized to a
//! probability distribution.

use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

use crate::abgroup::{torus_sum, FiniteAbelianGroup, GroupElement, GroupError, TorusPoint};

/// Absolute per-entry tolerance for every floating-point comparison here.
/// Dimensions stay small enough that rounding sits far below this.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizeError {
    #[error("phase sum {0} is not a classical point: the context is not realizable")]
    Unrealizable(TorusPoint),
    #[error("cannot measure a zero state vector")]
    DegenerateState,
    #[error("phase point has {got} coordinates, group needs {expected}")]
    PhaseDimension { got: usize, expected: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A vector in the `N`-party space over group `G`, X-basis indexed.
#[derive(Debug, Clone)]
pub struct StateVector {
    group: FiniteAbelianGroup,
    parties: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Flat index of an outcome tuple.
    pub fn index_of(&self, tuple: &[GroupElement]) -> usize {
        let d = self.group.order() as usize;
        tuple.iter().fold(0usize, |acc, g| {
            acc * d + self.group.element_index(g).expect("tuple element in group") as usize
        })
    }

    /// Outcome tuple of a flat index.
    pub fn tuple_of(&self, mut index: usize) -> Vec<GroupElement> {
        let d = self.group.order() as usize;
        let mut tuple = vec![self.group.zero(); self.parties];
        for slot in (0..self.parties).rev() {
            tuple[slot] = self.group.element_at((index % d) as u64);
            index /= d;
        }
        tuple
    }
}

/// Born-rule weights over `K^N` outcome tuples; sums to 1.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    group: FiniteAbelianGroup,
    parties: usize,
    weights: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn weight_of(&self, tuple: &[GroupElement]) -> f64 {
        let d = self.group.order() as usize;
        let idx = tuple.iter().fold(0usize, |acc, g| {
            acc * d + self.group.element_index(g).expect("tuple element in group") as usize
        });
        self.weights[idx]
    }

    pub fn tuple_of(&self, mut index: usize) -> Vec<GroupElement> {
        let d = self.group.order() as usize;
        let mut tuple = vec![self.group.zero(); self.parties];
        for slot in (0..self.parties).rev() {
            tuple[slot] = self.group.element_at((index % d) as u64);
            index /= d;
        }
        tuple
    }

    /// Pushforward along the group sum `(x_1,...,x_N) -> x_1 + ... + x_N`,
    /// one weight per group element.
    pub fn pushforward_sum(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.group.order() as usize];
        for (idx, &w) in self.weights.iter().enumerate() {
            let tuple = self.tuple_of(idx);
            let mut acc = self.group.zero();
            for g in &tuple {
                acc = self.group.add(&acc, g).expect("same group");
            }
            out[self.group.element_index(&acc).expect("in group") as usize] += w;
        }
        out
    }
}

fn tau() -> f64 {
    std::f64::consts::TAU
}

/// Character matrix: entry `(y, x) = exp(2 pi i <y, x>)`, rows and columns in
/// element-enumeration order. Satisfies `M M^dagger = D I`.
pub fn character_matrix(group: &FiniteAbelianGroup) -> Array2<Complex64> {
    let d = group.order() as usize;
    let elements: Vec<GroupElement> = group.elements().collect();
    Array2::from_shape_fn((d, d), |(y, x)| {
        let angle = group
            .pairing(&elements[y], &elements[x])
            .expect("same group")
            .to_f64();
        Complex64::from_polar(1.0, tau() * angle)
    })
}

/// Generalized GHZ state: amplitude 1 on every tuple summing to `x`, zero
/// elsewhere. Unnormalized; normalization happens at measurement.
pub fn ghz_state(
    group: &FiniteAbelianGroup,
    parties: usize,
    x: &GroupElement,
) -> Result<StateVector, RealizeError> {
    assert!(parties >= 1, "GHZ needs at least one party");
    if !group.contains(x) {
        return Err(RealizeError::Group(GroupError::DimensionMismatch {
            got: x.residues().len(),
            expected: group.factors().len(),
        }));
    }
    let d = group.order() as usize;
    let dim = d.checked_pow(parties as u32).expect("desk scale");
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let state = StateVector { group: group.clone(), parties, amps: Vec::new() };
    for idx in 0..dim {
        let tuple = state.tuple_of(idx);
        let mut acc = group.zero();
        for g in &tuple {
            acc = group.add(&acc, g).expect("same group");
        }
        if acc == *x {
            amps[idx] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(StateVector { group: group.clone(), parties, amps })
}

/// Phase gate for a torus phase: diagonal in the character basis with entries
/// `exp(2 pi i alpha_y)` (`alpha_0 = 0`), expressed here in the X basis as
/// `M^dagger diag M / D`, the group convolution by the phase state.
pub fn phase_gate(
    group: &FiniteAbelianGroup,
    alpha: &TorusPoint,
) -> Result<Array2<Complex64>, RealizeError> {
    let d = group.order() as usize;
    if alpha.dim() != d - 1 {
        return Err(RealizeError::PhaseDimension { got: alpha.dim(), expected: d - 1 });
    }
    let m = character_matrix(group);
    let mdag = m.t().mapv(|z| z.conj());
    let mut diag = Array2::zeros((d, d));
    diag[(0, 0)] = Complex64::new(1.0, 0.0);
    for y in 1..d {
        diag[(y, y)] = Complex64::from_polar(1.0, tau() * alpha.coord(y).to_f64());
    }
    let scale = Complex64::new(1.0 / d as f64, 0.0);
    Ok(mdag.dot(&diag).dot(&m).mapv(|z| z * scale))
}

/// Applies a one-party operator at the given site.
pub fn apply_at_site(state: &StateVector, site: usize, gate: &Array2<Complex64>) -> StateVector {
    let d = state.group.order() as usize;
    assert!(site < state.parties);
    assert_eq!(gate.nrows(), d);
    let dim = state.amps.len();
    // stride of the site index within the flat big-endian layout
    let stride = d.pow((state.parties - 1 - site) as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for idx in 0..dim {
        let xi = (idx / stride) % d;
        let base = idx - xi * stride;
        let mut acc = Complex64::new(0.0, 0.0);
        for xj in 0..d {
            acc += gate[(xi, xj)] * state.amps[base + xj * stride];
        }
        out[idx] = acc;
    }
    StateVector { group: state.group.clone(), parties: state.parties, amps: out }
}

/// GHZ at 0 with per-party phase gates applied.
pub fn gated_ghz(
    group: &FiniteAbelianGroup,
    alphas: &[TorusPoint],
) -> Result<StateVector, RealizeError> {
    let mut state = ghz_state(group, alphas.len(), &group.zero())?;
    for (site, alpha) in alphas.iter().enumerate() {
        let gate = phase_gate(group, alpha)?;
        state = apply_at_site(&state, site, &gate);
    }
    Ok(state)
}

/// Measurement of every party in the X observable: squared moduli,
/// normalized to total weight 1.
pub fn measure_all_x(state: &StateVector) -> Result<OutcomeDistribution, RealizeError> {
    let total: f64 = state.amps.iter().map(|a| a.norm_sqr()).sum();
    if total <= 0.0 {
        return Err(RealizeError::DegenerateState);
    }
    let weights: Vec<f64> = state.amps.iter().map(|a| a.norm_sqr() / total).collect();
    let sum: f64 = weights.iter().sum();
    debug_assert!((sum - 1.0).abs() <= TOLERANCE);
    Ok(OutcomeDistribution { group: state.group.clone(), parties: state.parties, weights })
}

/// Resolves the classical point a family of phases sums to, or signals the
/// context unrealizable when the sum leaves the classical subgroup.
pub fn classical_phase_sum(
    group: &FiniteAbelianGroup,
    alphas: &[TorusPoint],
) -> Result<GroupElement, RealizeError> {
    let total = torus_sum(group.torus_dim(), alphas.iter())?;
    group
        .torus_to_classical(&total)
        .ok_or(RealizeError::Unrealizable(total))
}

/// Checks that the group sum of the measured outcomes is deterministic: the
/// pushforward of the gated-GHZ measurement under `(x_i) -> sum x_i` must be
/// a point mass at the classical point the phases sum to, within
/// [`TOLERANCE`] total variation.
pub fn check_parity_lemma(
    group: &FiniteAbelianGroup,
    parties: usize,
    alphas: &[TorusPoint],
) -> Result<bool, RealizeError> {
    assert_eq!(alphas.len(), parties);
    let target = classical_phase_sum(group, alphas)?;
    let dist = measure_all_x(&gated_ghz(group, alphas)?)?;
    let push = dist.pushforward_sum();
    let target_idx = group.element_index(&target).expect("in group") as usize;
    let tv: f64 = push
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let q = if i == target_idx { 1.0 } else { 0.0 };
            (p - q).abs()
        })
        .sum::<f64>()
        / 2.0;
    Ok(tv <= TOLERANCE)
}

/// Checks the decoherence identity: measuring the gated GHZ equals measuring
/// the generalized GHZ at the classical point the phases sum to, within
/// [`TOLERANCE`] per entry.
pub fn check_decoherence_lemma(
    group: &FiniteAbelianGroup,
    parties: usize,
    alphas: &[TorusPoint],
) -> Result<bool, RealizeError> {
    assert_eq!(alphas.len(), parties);
    let x = classical_phase_sum(group, alphas)?;
    let gated = measure_all_x(&gated_ghz(group, alphas)?)?;
    let reference = measure_all_x(&ghz_state(group, parties, &x)?)?;
    Ok(gated
        .weights
        .iter()
        .zip(&reference.weights)
        .all(|(a, b)| (a - b).abs() <= TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::RationalTurn;
    use crate::zsolve::{self, ValueGroup, ZModEquation};

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    fn turn(p: i64, q: i64) -> RationalTurn {
        RationalTurn::new(p, q).unwrap()
    }

    fn approx(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= TOLERANCE
    }

    #[test]
    fn character_matrix_examples() {
        let m = character_matrix(&z(2));
        let one = Complex64::new(1.0, 0.0);
        assert!(approx(m[(0, 0)], one));
        assert!(approx(m[(0, 1)], one));
        assert!(approx(m[(1, 0)], one));
        assert!(approx(m[(1, 1)], -one));

        let m = character_matrix(&z(3));
        let omega = Complex64::from_polar(1.0, tau() / 3.0);
        for y in 0..3 {
            for x in 0..3 {
                assert!(approx(m[(y, x)], omega.powu((y * x) as u32)));
            }
        }

        let m = character_matrix(&FiniteAbelianGroup::trivial());
        assert_eq!(m.dim(), (1, 1));
        assert!(approx(m[(0, 0)], one));
    }

    #[test]
    fn character_matrix_unitary_up_to_order() {
        for g in [
            z(2),
            z(3),
            z(4),
            z(5),
            z(6),
            FiniteAbelianGroup::new(vec![2, 2]).unwrap(),
            FiniteAbelianGroup::new(vec![2, 3]).unwrap(),
        ] {
            let d = g.order() as usize;
            let m = character_matrix(&g);
            let prod = m.dot(&m.t().mapv(|z| z.conj()));
            for i in 0..d {
                for j in 0..d {
                    let expect = if i == j { d as f64 } else { 0.0 };
                    assert!(
                        (prod[(i, j)] - Complex64::new(expect, 0.0)).norm() <= TOLERANCE,
                        "M M^dag != D I for {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn ghz_support() {
        let z2 = z(2);
        let state = ghz_state(&z2, 3, &z2.zero()).unwrap();
        let expected: Vec<usize> = vec![0b000, 0b011, 0b101, 0b110];
        for idx in 0..8 {
            let amp = state.amplitudes()[idx];
            if expected.contains(&idx) {
                assert!(approx(amp, Complex64::new(1.0, 0.0)));
            } else {
                assert!(approx(amp, Complex64::new(0.0, 0.0)));
            }
        }

        // single party: the basis state itself
        let g = z(3);
        let e = g.element(vec![2]).unwrap();
        let state = ghz_state(&g, 1, &e).unwrap();
        assert!(approx(state.amplitudes()[2], Complex64::new(1.0, 0.0)));
        assert!(approx(state.amplitudes()[0], Complex64::new(0.0, 0.0)));
    }

    /// Change of basis: the character matrix applied per site maps GHZ onto
    /// the diagonal tuples of the Z basis.
    #[test]
    fn ghz_change_of_basis_is_diagonal() {
        let z2 = z(2);
        let m = character_matrix(&z2);
        let mut state = ghz_state(&z2, 3, &z2.zero()).unwrap();
        for site in 0..3 {
            state = apply_at_site(&state, site, &m);
        }
        for idx in 0..8 {
            let amp = state.amplitudes()[idx];
            if idx == 0b000 || idx == 0b111 {
                assert!(amp.norm() > 1.0);
            } else {
                assert!(amp.norm() <= TOLERANCE, "off-diagonal Z tuple {idx} populated");
            }
        }
    }

    /// The X-basis fiber definition and the Z-diagonal form agree up to a
    /// global scalar (cosine similarity 1).
    #[test]
    fn ghz_two_forms_agree() {
        for (g, parties) in [(z(2), 2), (z(2), 3), (z(2), 4), (z(3), 2), (z(3), 3), (z(3), 4)] {
            let d = g.order() as usize;
            let fiber = ghz_state(&g, parties, &g.zero()).unwrap();
            // Z-diagonal form mapped back to the X basis:
            // sum_y |z_y>^(x N) with |z_y> = sum_x exp(-2 pi i <y,x>) |x>
            let els: Vec<GroupElement> = g.elements().collect();
            let dim = d.pow(parties as u32);
            let mut alt = vec![Complex64::new(0.0, 0.0); dim];
            for y in &els {
                for (idx, amp) in alt.iter_mut().enumerate() {
                    let tuple = fiber.tuple_of(idx);
                    let mut angle = 0.0;
                    for x in &tuple {
                        angle -= g.pairing(y, x).unwrap().to_f64();
                    }
                    *amp += Complex64::from_polar(1.0, tau() * angle);
                }
            }
            let inner: Complex64 = fiber
                .amplitudes()
                .iter()
                .zip(&alt)
                .map(|(a, b)| a.conj() * b)
                .sum();
            let na: f64 = fiber.amplitudes().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let nb: f64 = alt.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let cosine = inner.norm() / (na * nb);
            assert!((cosine - 1.0).abs() <= TOLERANCE, "forms differ for {g}, N={parties}");
        }
    }

    #[test]
    fn phase_gate_examples() {
        let z2 = z(2);
        // alpha = 1/4 turn: diag(1, i) in the Z basis
        let alpha = TorusPoint::new(vec![turn(1, 4)]);
        let p = phase_gate(&z2, &alpha).unwrap();
        let m = character_matrix(&z2);
        let mdag = m.t().mapv(|z| z.conj());
        let in_z = m.dot(&p).dot(&mdag).mapv(|z| z * Complex64::new(0.5, 0.0));
        assert!(approx(in_z[(0, 0)], Complex64::new(1.0, 0.0)));
        assert!(approx(in_z[(1, 1)], Complex64::new(0.0, 1.0)));
        assert!(approx(in_z[(0, 1)], Complex64::new(0.0, 0.0)));
        assert!(approx(in_z[(1, 0)], Complex64::new(0.0, 0.0)));

        // alpha = 0: identity
        let p = phase_gate(&z2, &z2.torus_zero()).unwrap();
        assert!(approx(p[(0, 0)], Complex64::new(1.0, 0.0)));
        assert!(approx(p[(0, 1)], Complex64::new(0.0, 0.0)));

        // alpha = 1/2: permutes the two X-basis states
        let alpha = TorusPoint::new(vec![turn(1, 2)]);
        let p = phase_gate(&z2, &alpha).unwrap();
        assert!(approx(p[(0, 1)], Complex64::new(1.0, 0.0)));
        assert!(approx(p[(1, 0)], Complex64::new(1.0, 0.0)));
        assert!(approx(p[(0, 0)], Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn phase_gates_unitary() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for g in [z(2), z(3), z(4), z(6), FiniteAbelianGroup::new(vec![2, 2]).unwrap()] {
            let d = g.order() as usize;
            for _ in 0..5 {
                let alpha = TorusPoint::new(
                    (0..d - 1)
                        .map(|_| turn(rng.gen_range(0..8), rng.gen_range(1..=8)))
                        .collect(),
                );
                let p = phase_gate(&g, &alpha).unwrap();
                let prod = p.dot(&p.t().mapv(|z| z.conj()));
                for i in 0..d {
                    for j in 0..d {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!(
                            (prod[(i, j)] - Complex64::new(expect, 0.0)).norm() <= TOLERANCE,
                            "phase gate not unitary for {g}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn measurement_examples() {
        let z2 = z(2);
        let dist = measure_all_x(&ghz_state(&z2, 3, &z2.zero()).unwrap()).unwrap();
        for idx in [0b000, 0b011, 0b101, 0b110] {
            assert!((dist.weights()[idx] - 0.25).abs() <= TOLERANCE);
        }
        for idx in [0b001, 0b010, 0b100, 0b111] {
            assert!(dist.weights()[idx].abs() <= TOLERANCE);
        }

        // point mass on a basis state
        let g = z(3);
        let e = g.element(vec![1]).unwrap();
        let dist = measure_all_x(&ghz_state(&g, 1, &e).unwrap()).unwrap();
        assert!((dist.weights()[1] - 1.0).abs() <= TOLERANCE);

        // phase-gated GHZ with (1/4, 1/4, 0): uniform on odd-parity triples
        let alphas = vec![
            TorusPoint::new(vec![turn(1, 4)]),
            TorusPoint::new(vec![turn(1, 4)]),
            z2.torus_zero(),
        ];
        let dist = measure_all_x(&gated_ghz(&z2, &alphas).unwrap()).unwrap();
        for idx in [0b001, 0b010, 0b100, 0b111] {
            assert!((dist.weights()[idx] - 0.25).abs() <= TOLERANCE);
        }
        for idx in [0b000, 0b011, 0b101, 0b110] {
            assert!(dist.weights()[idx].abs() <= TOLERANCE);
        }

        // zero vector cannot be measured
        let zero = StateVector {
            group: z2.clone(),
            parties: 1,
            amps: vec![Complex64::new(0.0, 0.0); 2],
        };
        assert!(matches!(measure_all_x(&zero), Err(RealizeError::DegenerateState)));
    }

    #[test]
    fn parity_lemma_examples() {
        let z2 = z(2);
        let quarter = TorusPoint::new(vec![turn(1, 4)]);
        let alphas = vec![quarter.clone(), quarter.clone(), z2.torus_zero()];
        assert_eq!(classical_phase_sum(&z2, &alphas).unwrap(), z2.element(vec![1]).unwrap());
        assert!(check_parity_lemma(&z2, 3, &alphas).unwrap());

        let zeros = vec![z2.torus_zero(); 3];
        assert_eq!(classical_phase_sum(&z2, &zeros).unwrap(), z2.zero());
        assert!(check_parity_lemma(&z2, 3, &zeros).unwrap());

        // non-classical phase sum: (1/4, 0, 0) sums to 1/4, not a classical point
        let bad = vec![quarter, z2.torus_zero(), z2.torus_zero()];
        assert!(matches!(
            check_parity_lemma(&z2, 3, &bad),
            Err(RealizeError::Unrealizable(_))
        ));
    }

    /// Four parties over Z3 with the torus solution of 3y = 1: outcome sum is
    /// deterministically 1, cross-checking the dim-81 simulation against the
    /// exact prediction.
    #[test]
    fn parity_lemma_z3() {
        let z3 = z(3);
        let sys = crate::zsolve::EquationSystem::new(
            vec![ZModEquation::parse("3*y = (1)", &ValueGroup::Group(z3.clone())).unwrap()],
            ValueGroup::Group(z3.clone()),
        )
        .unwrap();
        let beta = zsolve::solve_torus(&sys).unwrap()["y"].clone();
        let alphas = vec![beta.clone(), beta.clone(), beta.clone(), z3.torus_zero()];
        assert_eq!(
            classical_phase_sum(&z3, &alphas).unwrap(),
            z3.element(vec![1]).unwrap()
        );
        assert!(check_parity_lemma(&z3, 4, &alphas).unwrap());
        assert!(check_decoherence_lemma(&z3, 4, &alphas).unwrap());
    }

    #[test]
    fn decoherence_lemma_examples() {
        let z2 = z(2);
        let quarter = TorusPoint::new(vec![turn(1, 4)]);
        let alphas = vec![quarter, TorusPoint::new(vec![turn(1, 4)]), z2.torus_zero()];
        assert!(check_decoherence_lemma(&z2, 3, &alphas).unwrap());
        assert!(check_decoherence_lemma(&z2, 3, &vec![z2.torus_zero(); 3]).unwrap());

        // Z3, two parties, phases (embed(1), 0): matches GHZ at 1
        let z3 = z(3);
        let alphas = vec![
            z3.classical_to_torus(&z3.element(vec![1]).unwrap()).unwrap(),
            z3.torus_zero(),
        ];
        assert!(check_decoherence_lemma(&z3, 2, &alphas).unwrap());
        // exact support check: pairs summing to 1
        let dist = measure_all_x(&gated_ghz(&z3, &alphas).unwrap()).unwrap();
        for idx in 0..9 {
            let tuple = dist.tuple_of(idx);
            let sum = z3.add(&tuple[0], &tuple[1]).unwrap();
            let expect = if sum == z3.element(vec![1]).unwrap() { 1.0 / 3.0 } else { 0.0 };
            assert!((dist.weights()[idx] - expect).abs() <= TOLERANCE);
        }
    }

    /// Every realizable phase family yields the uniform distribution
    /// 1/D^(N-1) on the fiber of its classical sum.
    #[test]
    fn measurement_matches_exact_fiber_prediction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for g in [z(2), z(3)] {
            let d = g.order() as usize;
            for parties in 2..=3usize {
                // random classical points per party: sum is always classical
                let points: Vec<GroupElement> =
                    (0..parties).map(|_| g.element_at(rng.gen_range(0..g.order()))).collect();
                let alphas: Vec<TorusPoint> = points
                    .iter()
                    .map(|p| g.classical_to_torus(p).unwrap())
                    .collect();
                let target = classical_phase_sum(&g, &alphas).unwrap();
                let dist = measure_all_x(&gated_ghz(&g, &alphas).unwrap()).unwrap();
                let fiber_weight = 1.0 / (d.pow(parties as u32 - 1) as f64);
                for idx in 0..dist.weights().len() {
                    let tuple = dist.tuple_of(idx);
                    let mut acc = g.zero();
                    for t in &tuple {
                        acc = g.add(&acc, t).unwrap();
                    }
                    let expect = if acc == target { fiber_weight } else { 0.0 };
                    assert!(
                        (dist.weights()[idx] - expect).abs() <= TOLERANCE,
                        "fiber prediction violated for {g}, N={parties}"
                    );
                }
            }
        }
    }
}
