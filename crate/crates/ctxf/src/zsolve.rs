//! Integer-coefficient linear systems valued in a finite abelian group or in
//! the circle group of rational turns.
//!
//! The same integer row-elimination engine backs three questions:
//! consistency (every integer relation among coefficient rows must annihilate
//! the right-hand sides), exhaustive solving inside the finite group, and
//! Gaussian elimination over the circle. The circle is divisible, so forward
//! elimination only ever subtracts integer multiples of rows (exact,
//! information-preserving on singleton right-hand sides); the multi-valued
//! division `(1/n)A = { b : n b in A }` is deferred to back-substitution,
//! where each pivot contributes an `n`-element candidate set and the
//! lexicographically least representative is chosen.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::abgroup::{FiniteAbelianGroup, GroupElement, GroupError, RationalTurn, TorusPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("operation requires a {expected}-valued system, got {got}-valued")]
    UnsupportedValueGroup { expected: &'static str, got: &'static str },
    #[error("system is inconsistent: relation {relation:?} does not annihilate the right-hand sides")]
    Inconsistent { relation: Vec<i64> },
    #[error("equation has no variables after dropping zero coefficients")]
    NoVariables,
    #[error("right-hand side does not match the declared value group")]
    MixedRhs,
    #[error("cannot parse equation `{0}`")]
    BadEquation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Value space a system is solved in: a finite abelian group `K`, or the
/// circle of rational turns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueGroup {
    Group(FiniteAbelianGroup),
    Circle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationRhs {
    Element(GroupElement),
    Turn(RationalTurn),
}

impl fmt::Display for EquationRhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationRhs::Element(e) => write!(f, "{e}"),
            EquationRhs::Turn(t) => write!(f, "turn {t}"),
        }
    }
}

/// One equation `sum_r n_r * y_r = rhs` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZModEquation {
    coeffs: BTreeMap<String, i64>,
    rhs: EquationRhs,
}

impl ZModEquation {
    /// Zero coefficients are dropped; an equation must mention at least one
    /// variable.
    pub fn new(coeffs: BTreeMap<String, i64>, rhs: EquationRhs) -> Result<Self, SolveError> {
        let coeffs: BTreeMap<String, i64> =
            coeffs.into_iter().filter(|(_, c)| *c != 0).collect();
        if coeffs.is_empty() {
            return Err(SolveError::NoVariables);
        }
        Ok(Self { coeffs, rhs })
    }

    pub fn coeffs(&self) -> &BTreeMap<String, i64> {
        &self.coeffs
    }

    pub fn rhs(&self) -> &EquationRhs {
        &self.rhs
    }

    /// Parses `2*y = (1)` (group right-hand side) or `3*y = turn 1/3`
    /// (circle right-hand side). Terms are `+`-separated, each `c*var` or a
    /// bare `var`; negative coefficients are written `-2*y`.
    pub fn parse(s: &str, value_group: &ValueGroup) -> Result<Self, SolveError> {
        let bad = || SolveError::BadEquation(s.to_string());
        let (lhs, rhs_text) = s.split_once('=').ok_or_else(bad)?;
        let rhs_text = rhs_text.trim();
        let rhs = if let Some(turn) = rhs_text.strip_prefix("turn ") {
            EquationRhs::Turn(RationalTurn::parse(turn).map_err(|_| bad())?)
        } else {
            match value_group {
                ValueGroup::Group(g) => {
                    EquationRhs::Element(GroupElement::parse(rhs_text, g).map_err(|_| bad())?)
                }
                ValueGroup::Circle => return Err(bad()),
            }
        };
        let mut coeffs: BTreeMap<String, i64> = BTreeMap::new();
        for term in lhs.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad());
            }
            let (coeff, var) = match term.split_once('*') {
                Some((c, v)) => (c.trim().parse::<i64>().map_err(|_| bad())?, v.trim()),
                None => {
                    if let Some(v) = term.strip_prefix('-') {
                        (-1, v.trim())
                    } else {
                        (1, term)
                    }
                }
            };
            if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(bad());
            }
            *coeffs.entry(var.to_string()).or_insert(0) += coeff;
        }
        Self::new(coeffs, rhs)
    }
}

impl fmt::Display for ZModEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(v, c)| format!("{c}*{v}"))
            .collect();
        write!(f, "{} = {}", terms.join(" + "), self.rhs)
    }
}

/// An ordered list of equations over a shared variable universe, valued in a
/// common group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    equations: Vec<ZModEquation>,
    value_group: ValueGroup,
    variables: Vec<String>,
}

impl EquationSystem {
    pub fn new(equations: Vec<ZModEquation>, value_group: ValueGroup) -> Result<Self, SolveError> {
        let mut vars: BTreeSet<String> = BTreeSet::new();
        for eq in &equations {
            match (&eq.rhs, &value_group) {
                (EquationRhs::Element(e), ValueGroup::Group(g)) => {
                    if !g.contains(e) {
                        return Err(SolveError::MixedRhs);
                    }
                }
                (EquationRhs::Turn(_), ValueGroup::Circle) => {}
                _ => return Err(SolveError::MixedRhs),
            }
            vars.extend(eq.coeffs.keys().cloned());
        }
        Ok(Self { equations, value_group, variables: vars.into_iter().collect() })
    }

    pub fn equations(&self) -> &[ZModEquation] {
        &self.equations
    }

    pub fn value_group(&self) -> &ValueGroup {
        &self.value_group
    }

    /// Variable universe in sorted (deterministic) order.
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    fn group(&self) -> Result<&FiniteAbelianGroup, SolveError> {
        match &self.value_group {
            ValueGroup::Group(g) => Ok(g),
            ValueGroup::Circle => Err(SolveError::UnsupportedValueGroup {
                expected: "group",
                got: "circle",
            }),
        }
    }

    /// Coefficient matrix in variable order, one row per equation.
    fn coefficient_rows(&self) -> Vec<Vec<i64>> {
        self.equations
            .iter()
            .map(|eq| {
                self.variables
                    .iter()
                    .map(|v| eq.coeffs.get(v).copied().unwrap_or(0))
                    .collect()
            })
            .collect()
    }
}

/// A satisfying assignment, in the value space matching the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assignment {
    Elements(BTreeMap<String, GroupElement>),
    Turns(BTreeMap<String, RationalTurn>),
    Torus(BTreeMap<String, TorusPoint>),
}

/// Per-variable candidate sets produced by circle elimination, together with
/// the canonical (lexicographically least) verified joint solution.
///
/// The candidate set of a variable describes its admissible coset given the
/// canonical choices already made for the variables eliminated after it;
/// arbitrary mixed selections across variables need not solve the system,
/// but the canonical selection always does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleSolutionSet {
    candidates: BTreeMap<String, BTreeSet<RationalTurn>>,
    canonical: BTreeMap<String, RationalTurn>,
}

impl CircleSolutionSet {
    pub fn candidates(&self) -> &BTreeMap<String, BTreeSet<RationalTurn>> {
        &self.candidates
    }

    pub fn canonical_solution(&self) -> &BTreeMap<String, RationalTurn> {
        &self.canonical
    }
}

// ---------------------------------------------------------------------------
// Elimination engine

/// Right-hand-side values the row elimination can act on.
trait RowValue: Clone {
    /// `self + scale * other`.
    fn combine(&self, other: &Self, scale: i64) -> Self;
    fn negate(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl RowValue for RationalTurn {
    fn combine(&self, other: &Self, scale: i64) -> Self {
        self.add(&other.scale(scale))
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
}

#[derive(Clone)]
struct GroupVal<'g> {
    group: &'g FiniteAbelianGroup,
    el: GroupElement,
}

impl RowValue for GroupVal<'_> {
    fn combine(&self, other: &Self, scale: i64) -> Self {
        let scaled = self.group.scalar_mul(scale, &other.el).expect("same group");
        GroupVal {
            group: self.group,
            el: self.group.add(&self.el, &scaled).expect("same group"),
        }
    }
    fn negate(&self) -> Self {
        GroupVal { group: self.group, el: self.group.neg(&self.el).expect("same group") }
    }
    fn is_zero(&self) -> bool {
        self.el.is_zero()
    }
}

#[derive(Clone)]
struct Row<V> {
    coeffs: Vec<i64>,
    rhs: V,
    /// Expression of this row as an integer combination of the original rows.
    provenance: Vec<i64>,
}

impl<V: RowValue> Row<V> {
    /// `self := self + scale * other`.
    fn add_multiple(&mut self, other: &Row<V>, scale: i64) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += scale * b;
        }
        for (a, b) in self.provenance.iter_mut().zip(&other.provenance) {
            *a += scale * b;
        }
        self.rhs = self.rhs.combine(&other.rhs, scale);
    }

    fn negate(&mut self) {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        for a in self.provenance.iter_mut() {
            *a = -*a;
        }
        self.rhs = self.rhs.negate();
    }

    fn is_zero_row(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

struct Echelon<V> {
    /// `(column, row)` pairs in increasing column order; each pivot row has
    /// zero coefficients in all earlier columns and a positive pivot.
    pivots: Vec<(usize, Row<V>)>,
    /// Rows whose coefficients vanished: integer relations among the original
    /// rows, with the combined right-hand side attached.
    relations: Vec<Row<V>>,
}

/// Row-echelon reduction by repeated subtraction of integer row multiples
/// (a Euclid pass per column). Integer multiples of rows are exact,
/// invertibility-free operations in any value group, so the set of joint
/// solutions is preserved at every step.
fn eliminate<V: RowValue>(mut active: Vec<Row<V>>, nvars: usize) -> Echelon<V> {
    let mut pivots = Vec::new();
    for col in 0..nvars {
        loop {
            let nonzero: Vec<usize> = active
                .iter()
                .enumerate()
                .filter(|(_, r)| r.coeffs[col] != 0)
                .map(|(i, _)| i)
                .collect();
            if nonzero.is_empty() {
                break;
            }
            let &pivot_idx = nonzero
                .iter()
                .min_by_key(|&&i| active[i].coeffs[col].unsigned_abs())
                .expect("nonempty");
            if active[pivot_idx].coeffs[col] < 0 {
                active[pivot_idx].negate();
            }
            if nonzero.len() == 1 {
                let row = active.remove(pivot_idx);
                pivots.push((col, row));
                break;
            }
            let pivot = active[pivot_idx].clone();
            for &i in &nonzero {
                if i == pivot_idx {
                    continue;
                }
                let k = active[i].coeffs[col].div_euclid(pivot.coeffs[col]);
                active[i].add_multiple(&pivot, -k);
            }
        }
    }
    debug_assert!(active.iter().all(Row::is_zero_row));
    Echelon { pivots, relations: active }
}

fn rows_from<V: RowValue>(coeffs: &[Vec<i64>], rhs: impl Iterator<Item = V>) -> Vec<Row<V>> {
    let total = coeffs.len();
    coeffs
        .iter()
        .zip(rhs)
        .enumerate()
        .map(|(s, (c, v))| {
            let mut provenance = vec![0i64; total];
            provenance[s] = 1;
            Row { coeffs: c.clone(), rhs: v, provenance }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Consistency over a finite group

/// True iff every integer relation among the coefficient rows annihilates the
/// right-hand sides in `K`. A generating set of the relation lattice falls
/// out of integer row elimination with provenance tracking; checking the
/// generators suffices because the right-hand-side combination is linear in
/// the relation vector.
pub fn check_consistency(sys: &EquationSystem) -> Result<bool, SolveError> {
    Ok(find_violated_relation(sys)?.is_none())
}

/// The provenance vector of the first derived relation whose combined
/// right-hand side is nonzero, if any.
pub fn find_violated_relation(sys: &EquationSystem) -> Result<Option<Vec<i64>>, SolveError> {
    let group = sys.group()?;
    let coeffs = sys.coefficient_rows();
    let rhs = sys.equations.iter().map(|eq| match &eq.rhs {
        EquationRhs::Element(e) => GroupVal { group, el: e.clone() },
        EquationRhs::Turn(_) => unreachable!("validated at construction"),
    });
    let ech = eliminate(rows_from(&coeffs, rhs), sys.variables.len());
    Ok(ech
        .relations
        .iter()
        .find(|r| !r.rhs.is_zero())
        .map(|r| r.provenance.clone()))
}

// ---------------------------------------------------------------------------
// Exhaustive solving inside K

/// First satisfying assignment in lexicographic enumeration order over
/// `K^M`, or `None`. Exhaustive search: instances stay desk-scale and the
/// enumeration order makes the output deterministic.
pub fn solve_in_group(
    sys: &EquationSystem,
) -> Result<Option<BTreeMap<String, GroupElement>>, SolveError> {
    let group = sys.group()?;
    let nvars = sys.variables.len();
    let total = (group.order() as u128).checked_pow(nvars as u32).expect("desk scale");
    let mut assignment: Vec<GroupElement> = vec![group.zero(); nvars];
    for idx in 0..total {
        let mut rem = idx;
        for slot in (0..nvars).rev() {
            assignment[slot] = group.element_at((rem % group.order() as u128) as u64);
            rem /= group.order() as u128;
        }
        if satisfies_in_group(sys, group, &assignment)? {
            let map = sys
                .variables
                .iter()
                .cloned()
                .zip(assignment.iter().cloned())
                .collect();
            return Ok(Some(map));
        }
    }
    Ok(None)
}

fn satisfies_in_group(
    sys: &EquationSystem,
    group: &FiniteAbelianGroup,
    values: &[GroupElement],
) -> Result<bool, SolveError> {
    for eq in &sys.equations {
        let mut acc = group.zero();
        for (var, &c) in &eq.coeffs {
            let slot = sys.variables.binary_search(var).expect("in universe");
            acc = group.add(&acc, &group.scalar_mul(c, &values[slot])?)?;
        }
        let target = match &eq.rhs {
            EquationRhs::Element(e) => e,
            EquationRhs::Turn(_) => unreachable!("validated at construction"),
        };
        if acc != *target {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Circle elimination

/// Gaussian elimination over the circle of rational turns. `None` means the
/// elimination derived a relation with nonzero right-hand side (an
/// inconsistent system); otherwise the canonical solution is verified against
/// every original equation before returning.
pub fn gaussian_eliminate_circle(
    sys: &EquationSystem,
) -> Result<Option<CircleSolutionSet>, SolveError> {
    match &sys.value_group {
        ValueGroup::Circle => {}
        ValueGroup::Group(_) => {
            return Err(SolveError::UnsupportedValueGroup { expected: "circle", got: "group" })
        }
    }
    let coeffs = sys.coefficient_rows();
    let rhs: Vec<RationalTurn> = sys
        .equations
        .iter()
        .map(|eq| match &eq.rhs {
            EquationRhs::Turn(t) => t.clone(),
            EquationRhs::Element(_) => unreachable!("validated at construction"),
        })
        .collect();
    let solved = match solve_circle_rows(&coeffs, &rhs, sys.variables.len()) {
        Some(s) => s,
        None => return Ok(None),
    };
    let candidates = sys
        .variables
        .iter()
        .cloned()
        .zip(solved.candidates)
        .collect();
    let canonical: BTreeMap<String, RationalTurn> = sys
        .variables
        .iter()
        .cloned()
        .zip(solved.canonical)
        .collect();
    let set = CircleSolutionSet { candidates, canonical };
    assert!(
        verify_solution(sys, &Assignment::Turns(set.canonical.clone())),
        "internal invariant violation: circle elimination produced a non-solution"
    );
    Ok(Some(set))
}

struct CircleRowsSolution {
    candidates: Vec<BTreeSet<RationalTurn>>,
    canonical: Vec<RationalTurn>,
}

/// Core circle solver on an explicit coefficient matrix. Free variables get
/// the canonical representative 0 with candidate set `{0}`.
fn solve_circle_rows(
    coeffs: &[Vec<i64>],
    rhs: &[RationalTurn],
    nvars: usize,
) -> Option<CircleRowsSolution> {
    let rows = rows_from(coeffs, rhs.iter().cloned());
    let ech = eliminate(rows, nvars);
    if ech.relations.iter().any(|r| !r.rhs.is_zero()) {
        return None;
    }
    let mut canonical: Vec<RationalTurn> = vec![RationalTurn::zero(); nvars];
    let mut candidates: Vec<BTreeSet<RationalTurn>> =
        vec![std::iter::once(RationalTurn::zero()).collect(); nvars];
    // Reverse pivot order: every later variable is already chosen, so each
    // pivot reduces to n*x = b, whose solution set is the n-element coset
    // (1/n){b} = { (b + t)/n : t = 0..n-1 }.
    for (col, row) in ech.pivots.iter().rev() {
        let mut b = row.rhs.clone();
        for l in (col + 1)..nvars {
            if row.coeffs[l] != 0 {
                b = b.sub(&canonical[l].scale(row.coeffs[l]));
            }
        }
        let n = row.coeffs[*col];
        debug_assert!(n > 0);
        let set: BTreeSet<RationalTurn> = (0..n)
            .map(|t| {
                RationalTurn::from_rational(
                    (b.as_rational() + num_rational::BigRational::from_integer(t.into()))
                        / num_rational::BigRational::from_integer(n.into()),
                )
            })
            .collect();
        canonical[*col] = set.iter().next().expect("n >= 1").clone();
        candidates[*col] = set;
    }
    Some(CircleRowsSolution { candidates, canonical })
}

// ---------------------------------------------------------------------------
// Torus solving

/// Solves a `K`-valued system in the phase torus `T^(D-1)`: each right-hand
/// side is embedded through the character pairing and the `D-1` independent
/// circle systems are eliminated coordinatewise. Solvability is guaranteed by
/// consistency, which is checked first; an inconsistent system fails with the
/// violated relation.
pub fn solve_torus(sys: &EquationSystem) -> Result<BTreeMap<String, TorusPoint>, SolveError> {
    let group = sys.group()?.clone();
    if let Some(relation) = find_violated_relation(sys)? {
        return Err(SolveError::Inconsistent { relation });
    }
    let coeffs = sys.coefficient_rows();
    let rhs_points: Vec<TorusPoint> = sys
        .equations
        .iter()
        .map(|eq| match &eq.rhs {
            EquationRhs::Element(e) => group.classical_to_torus(e),
            EquationRhs::Turn(_) => unreachable!("validated at construction"),
        })
        .collect::<Result<_, _>>()?;
    let solution = solve_in_torus(&coeffs, &rhs_points, group.torus_dim(), sys.variables.len())
        .expect("consistent system is solvable in the torus");
    let map: BTreeMap<String, TorusPoint> = sys
        .variables
        .iter()
        .cloned()
        .zip(solution)
        .collect();
    assert!(
        verify_solution(sys, &Assignment::Torus(map.clone())),
        "internal invariant violation: torus solution failed verification"
    );
    Ok(map)
}

/// Coordinatewise torus solver on an explicit coefficient matrix with
/// torus-valued right-hand sides. Coordinates are independent circle systems
/// and may be solved across `CTXF_THREADS` workers; the per-coordinate
/// canonical choice makes the result schedule-independent.
pub fn solve_in_torus(
    coeffs: &[Vec<i64>],
    rhs: &[TorusPoint],
    dim: usize,
    nvars: usize,
) -> Option<Vec<TorusPoint>> {
    let solve_coord = |m: usize| -> Option<Vec<RationalTurn>> {
        let coord_rhs: Vec<RationalTurn> =
            rhs.iter().map(|p| p.coord(m + 1).clone()).collect();
        solve_circle_rows(coeffs, &coord_rhs, nvars).map(|s| s.canonical)
    };

    let workers = worker_count().min(dim.max(1));
    let per_coord: Vec<Option<Vec<RationalTurn>>> = if workers <= 1 || dim <= 1 {
        (0..dim).map(solve_coord).collect()
    } else {
        let mut slots: Vec<Option<Option<Vec<RationalTurn>>>> = vec![None; dim];
        let chunk = dim.div_ceil(workers);
        let indices: Vec<usize> = (0..dim).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = indices
                .chunks(chunk)
                .map(|idxs| {
                    scope.spawn(move || {
                        idxs.iter()
                            .map(|&m| (m, solve_coord(m)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (m, r) in h.join().expect("worker panicked") {
                    slots[m] = Some(r);
                }
            }
        });
        slots
            .into_iter()
            .map(|s| s.expect("all coordinates computed"))
            .collect()
    };

    let mut coord_solutions = Vec::with_capacity(dim);
    for c in per_coord {
        coord_solutions.push(c?);
    }
    // reassemble: variable r gets the vector of its per-coordinate turns
    Some(
        (0..nvars)
            .map(|r| {
                TorusPoint::new((0..dim).map(|m| coord_solutions[m][r].clone()).collect())
            })
            .collect(),
    )
}

/// Worker cap for internal parallelism, from `CTXF_THREADS` (values that do
/// not parse fall back to the machine default).
pub(crate) fn worker_count() -> usize {
    std::env::var("CTXF_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

// ---------------------------------------------------------------------------
// Verification

/// True iff the assignment covers every variable, matches the system's value
/// space (group elements or torus points for `K`-valued systems, turns for
/// circle-valued ones), and satisfies every equation exactly.
pub fn verify_solution(sys: &EquationSystem, assignment: &Assignment) -> bool {
    match (assignment, &sys.value_group) {
        (Assignment::Elements(map), ValueGroup::Group(group)) => {
            sys.variables.iter().all(|v| map.contains_key(v))
                && sys.equations.iter().all(|eq| {
                    let mut acc = group.zero();
                    for (var, &c) in &eq.coeffs {
                        let Some(val) = map.get(var) else { return false };
                        let Ok(scaled) = group.scalar_mul(c, val) else { return false };
                        let Ok(next) = group.add(&acc, &scaled) else { return false };
                        acc = next;
                    }
                    matches!(&eq.rhs, EquationRhs::Element(e) if acc == *e)
                })
        }
        (Assignment::Turns(map), ValueGroup::Circle) => {
            sys.variables.iter().all(|v| map.contains_key(v))
                && sys.equations.iter().all(|eq| {
                    let mut acc = RationalTurn::zero();
                    for (var, &c) in &eq.coeffs {
                        let Some(t) = map.get(var) else { return false };
                        acc = acc.add(&t.scale(c));
                    }
                    matches!(&eq.rhs, EquationRhs::Turn(t) if acc == *t)
                })
        }
        (Assignment::Torus(map), ValueGroup::Group(group)) => {
            let dim = group.torus_dim();
            sys.variables.iter().all(|v| map.contains_key(v))
                && sys.equations.iter().all(|eq| {
                    let mut acc = TorusPoint::zero(dim);
                    for (var, &c) in &eq.coeffs {
                        let Some(val) = map.get(var) else { return false };
                        let Ok(next) = acc.add(&val.scale(c)) else { return false };
                        acc = next;
                    }
                    match &eq.rhs {
                        EquationRhs::Element(e) => {
                            group.classical_to_torus(e).map(|t| acc == t).unwrap_or(false)
                        }
                        EquationRhs::Turn(_) => false,
                    }
                })
        }
        _ => false,
    }
}
