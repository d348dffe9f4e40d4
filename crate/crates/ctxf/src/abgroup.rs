//! Finite abelian groups in invariant-factor form, together with exact
//! circle/torus phases and the character pairing that embeds a group's
//! classical points into the phase torus.
//!
//! All phases are rational turns (1 turn = 2π), never floating radians, so
//! equality of phases is decidable and every derived quantity stays exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invariant factor {0} is smaller than 2")]
    FactorTooSmall(u64),
    #[error("element has {got} residues, group has {expected} invariant factors")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("residue {residue} out of range for invariant factor {factor}")]
    ResidueOutOfRange { residue: u64, factor: u64 },
    #[error("cannot parse group literal `{0}`")]
    BadGroupLiteral(String),
    #[error("cannot parse group element `{0}`")]
    BadElementLiteral(String),
    #[error("cannot parse rational turn `{0}`")]
    BadTurnLiteral(String),
    #[error("torus point has {got} coordinates, expected {expected}")]
    TorusDimensionMismatch { got: usize, expected: usize },
}

/// A finite abelian group `Z_{n_1} x ... x Z_{n_J}` given by its invariant
/// factors. The empty factor list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: u64,
    exponent: u64,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self, GroupError> {
        if let Some(&bad) = factors.iter().find(|&&n| n < 2) {
            return Err(GroupError::FactorTooSmall(bad));
        }
        let order = factors.iter().product::<u64>().max(1);
        let exponent = factors.iter().fold(1u64, |acc, &n| num_integer::lcm(acc, n));
        Ok(Self { factors, order, exponent })
    }

    pub fn trivial() -> Self {
        Self { factors: Vec::new(), order: 1, exponent: 1 }
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Group order `D`, the Hilbert-space dimension of the realization.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Least `k >= 1` with `k * g = 0` for every element `g`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.factors.len()] }
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement, GroupError> {
        if residues.len() != self.factors.len() {
            return Err(GroupError::DimensionMismatch {
                got: residues.len(),
                expected: self.factors.len(),
            });
        }
        for (&r, &n) in residues.iter().zip(&self.factors) {
            if r >= n {
                return Err(GroupError::ResidueOutOfRange { residue: r, factor: n });
            }
        }
        Ok(GroupElement { residues })
    }

    /// The image of an integer under the canonical map `Z -> G`, i.e. the
    /// element with every residue equal to `z` reduced.
    pub fn from_integer(&self, z: i64) -> GroupElement {
        GroupElement {
            residues: self
                .factors
                .iter()
                .map(|&n| z.rem_euclid(n as i64) as u64)
                .collect(),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.residues.len() == self.factors.len()
            && g.residues.iter().zip(&self.factors).all(|(&r, &n)| r < n)
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(GroupElement {
            residues: g
                .residues
                .iter()
                .zip(&h.residues)
                .zip(&self.factors)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        })
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        Ok(GroupElement {
            residues: g
                .residues
                .iter()
                .zip(&self.factors)
                .map(|(&a, &n)| (n - a) % n)
                .collect(),
        })
    }

    pub fn sub(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        let neg_h = self.neg(h)?;
        self.add(g, &neg_h)
    }

    /// `n * g` for any integer `n` (negative scalars act through negation).
    pub fn scalar_mul(&self, n: i64, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        Ok(GroupElement {
            residues: g
                .residues
                .iter()
                .zip(&self.factors)
                .map(|(&a, &m)| {
                    let m_i = m as i64;
                    ((n.rem_euclid(m_i)) * (a as i64) % m_i) as u64
                })
                .collect(),
        })
    }

    /// Character pairing `<y, x> = sum_j y_j x_j / n_j` as a rational turn.
    /// Bilinear, symmetric, and nondegenerate.
    pub fn pairing(&self, y: &GroupElement, x: &GroupElement) -> Result<RationalTurn, GroupError> {
        self.check(y)?;
        self.check(x)?;
        let mut acc = BigRational::zero();
        for ((&yj, &xj), &nj) in y.residues.iter().zip(&x.residues).zip(&self.factors) {
            acc += BigRational::new(BigInt::from(yj) * BigInt::from(xj), BigInt::from(nj));
        }
        Ok(RationalTurn::from_rational(acc))
    }

    /// Embeds a classical point into the phase torus: the coordinate at each
    /// nonzero `y` is the pairing `<y, x>`. Injective group homomorphism.
    pub fn classical_to_torus(&self, x: &GroupElement) -> Result<TorusPoint, GroupError> {
        self.check(x)?;
        let coords = self
            .elements()
            .skip(1)
            .map(|y| self.pairing(&y, x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TorusPoint { coords })
    }

    /// Inverse of `classical_to_torus` by exhaustive search; `None` when the
    /// torus point is not the image of a classical point.
    pub fn torus_to_classical(&self, t: &TorusPoint) -> Option<GroupElement> {
        if t.dim() != (self.order - 1) as usize {
            return None;
        }
        self.elements().find(|x| {
            self.classical_to_torus(x)
                .map(|img| img == *t)
                .unwrap_or(false)
        })
    }

    /// Enumerates all `D` elements in lexicographic residue order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    /// Element at a lexicographic index (big-endian mixed radix).
    pub fn element_at(&self, index: u64) -> GroupElement {
        debug_assert!(index < self.order);
        let mut residues = vec![0u64; self.factors.len()];
        let mut rem = index;
        for j in (0..self.factors.len()).rev() {
            residues[j] = rem % self.factors[j];
            rem /= self.factors[j];
        }
        GroupElement { residues }
    }

    pub fn element_index(&self, g: &GroupElement) -> Result<u64, GroupError> {
        self.check(g)?;
        let mut idx = 0u64;
        for (&r, &n) in g.residues.iter().zip(&self.factors) {
            idx = idx * n + r;
        }
        Ok(idx)
    }

    pub fn torus_dim(&self) -> usize {
        (self.order - 1) as usize
    }

    pub fn torus_zero(&self) -> TorusPoint {
        TorusPoint { coords: vec![RationalTurn::zero(); self.torus_dim()] }
    }

    fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        if g.residues.len() != self.factors.len() {
            return Err(GroupError::DimensionMismatch {
                got: g.residues.len(),
                expected: self.factors.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = GroupError;

    /// Parses literals like `Z2`, `Z3`, `Z2xZ4` (case-insensitive). `Z1` is
    /// the trivial group.
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let lowered = s.trim().to_ascii_lowercase();
        if lowered == "z1" {
            return Ok(Self::trivial());
        }
        let mut factors = Vec::new();
        for part in lowered.split('x') {
            let digits = part
                .strip_prefix('z')
                .ok_or_else(|| GroupError::BadGroupLiteral(s.to_string()))?;
            let n: u64 = digits
                .parse()
                .map_err(|_| GroupError::BadGroupLiteral(s.to_string()))?;
            factors.push(n);
        }
        Self::new(factors).map_err(|_| GroupError::BadGroupLiteral(s.to_string()))
    }
}

/// Element of a [`FiniteAbelianGroup`], stored as reduced residues in
/// invariant-factor coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    /// Parses a comma-separated residue tuple like `(1,3)` against a group.
    pub fn parse(s: &str, group: &FiniteAbelianGroup) -> Result<Self, GroupError> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| GroupError::BadElementLiteral(s.to_string()))?;
        let residues = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| GroupError::BadElementLiteral(s.to_string()))?
        };
        group.element(residues)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An exact phase: a rational number of turns in `[0, 1)`, one turn being 2π.
/// Elements of the circle group `S^1` restricted to rational angles, which is
/// all the constructions here ever produce.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalTurn {
    value: BigRational,
}

impl RationalTurn {
    pub fn zero() -> Self {
        Self { value: BigRational::zero() }
    }

    pub fn new(numer: i64, denom: i64) -> Result<Self, GroupError> {
        if denom == 0 {
            return Err(GroupError::BadTurnLiteral(format!("{numer}/{denom}")));
        }
        Ok(Self::from_rational(BigRational::new(numer.into(), denom.into())))
    }

    /// Reduces an arbitrary rational modulo 1 into `[0, 1)`.
    pub fn from_rational(r: BigRational) -> Self {
        let f = r.floor();
        Self { value: r - f }
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_rational(&self.value + &other.value)
    }

    pub fn neg(&self) -> Self {
        Self::from_rational(-self.value.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_rational(&self.value - &other.value)
    }

    pub fn scale(&self, n: i64) -> Self {
        Self::from_rational(&self.value * BigRational::from_integer(BigInt::from(n)))
    }

    /// Fraction of a full turn as `f64`, for the numeric realization layer.
    pub fn to_f64(&self) -> f64 {
        let n = self.value.numer();
        let d = self.value.denom();
        // Denominators stay desk-scale; a direct quotient is exact enough.
        bigint_to_f64(n) / bigint_to_f64(d)
    }

    /// Parses `p/q` or a bare integer; reduced modulo 1.
    pub fn parse(s: &str) -> Result<Self, GroupError> {
        let t = s.trim();
        let bad = || GroupError::BadTurnLiteral(s.to_string());
        if let Some((p, q)) = t.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Self::from_rational(BigRational::new(p.into(), q.into())))
        } else {
            let p: i64 = t.parse().map_err(|_| bad())?;
            Ok(Self::from_rational(BigRational::from_integer(p.into())))
        }
    }
}

impl fmt::Display for RationalTurn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    // num's to_f64 never fails for the magnitudes used here.
    num_traits::ToPrimitive::to_f64(n).expect("bigint out of f64 range")
}

/// A point of the phase torus `T^(D-1)`: one rational turn per nonzero group
/// element, in element-enumeration order. The coordinate at 0 is fixed to 0
/// and omitted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusPoint {
    coords: Vec<RationalTurn>,
}

impl TorusPoint {
    pub fn new(coords: Vec<RationalTurn>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![RationalTurn::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[RationalTurn] {
        &self.coords
    }

    /// Coordinate at the nonzero element with enumeration index `y_index`
    /// (1-based over the ambient group).
    pub fn coord(&self, y_index: usize) -> &RationalTurn {
        &self.coords[y_index - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupError> {
        self.check(other)?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupError> {
        self.check(other)?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, n: i64) -> Self {
        Self { coords: self.coords.iter().map(|c| c.scale(n)).collect() }
    }

    /// Parses `(1/9, 2/9)`, or a bare `p/q` for the one-dimensional torus.
    pub fn parse(s: &str, dim: usize) -> Result<Self, GroupError> {
        let t = s.trim();
        let coords = if let Some(inner) = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')) {
            if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(RationalTurn::parse)
                    .collect::<Result<Vec<_>, _>>()?
            }
        } else {
            vec![RationalTurn::parse(t)?]
        };
        if coords.len() != dim {
            return Err(GroupError::TorusDimensionMismatch { got: coords.len(), expected: dim });
        }
        Ok(Self { coords })
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `sum(arr)` accumulated with turn addition; empty input gives 0.
pub fn turn_sum<'a>(turns: impl IntoIterator<Item = &'a RationalTurn>) -> RationalTurn {
    turns
        .into_iter()
        .fold(RationalTurn::zero(), |acc, t| acc.add(t))
}

/// Componentwise torus sum of equal-dimension points.
pub fn torus_sum<'a>(
    dim: usize,
    points: impl IntoIterator<Item = &'a TorusPoint>,
) -> Result<TorusPoint, GroupError> {
    let mut acc = TorusPoint::zero(dim);
    for p in points {
        acc = acc.add(p)?;
    }
    Ok(acc)
}

impl TorusPoint {
    fn check(&self, other: &Self) -> Result<(), GroupError> {
        if self.coords.len() != other.coords.len() {
            return Err(GroupError::TorusDimensionMismatch {
                got: other.coords.len(),
                expected: self.coords.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    fn grp(factors: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(factors.to_vec()).unwrap()
    }

    fn turn(p: i64, q: i64) -> RationalTurn {
        RationalTurn::new(p, q).unwrap()
    }

    #[test]
    fn add_examples() {
        let z2 = z(2);
        let one = z2.element(vec![1]).unwrap();
        assert_eq!(z2.add(&one, &one).unwrap(), z2.zero());

        let g = grp(&[2, 4]);
        let a = g.element(vec![1, 3]).unwrap();
        let b = g.element(vec![1, 2]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.element(vec![0, 1]).unwrap());

        for x in g.elements() {
            assert_eq!(g.add(&x, &g.zero()).unwrap(), x);
        }
    }

    #[test]
    fn scalar_mul_examples() {
        let z2 = z(2);
        let one = z2.element(vec![1]).unwrap();
        assert_eq!(z2.scalar_mul(2, &one).unwrap(), z2.zero());

        let z3 = z(3);
        let two = z3.element(vec![2]).unwrap();
        assert_eq!(z3.scalar_mul(2, &two).unwrap(), z3.element(vec![1]).unwrap());

        for x in grp(&[2, 3]).elements() {
            assert!(grp(&[2, 3]).scalar_mul(0, &x).unwrap().is_zero());
        }
        // negative scalars act through negation
        let z4 = z(4);
        let g1 = z4.element(vec![1]).unwrap();
        assert_eq!(z4.scalar_mul(-1, &g1).unwrap(), z4.element(vec![3]).unwrap());
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(z(2).exponent(), 2);
        assert_eq!(grp(&[2, 4]).exponent(), 4);
        assert_eq!(FiniteAbelianGroup::trivial().exponent(), 1);
        assert_eq!(FiniteAbelianGroup::trivial().order(), 1);
    }

    #[test]
    fn pairing_examples() {
        let z2 = z(2);
        let one = z2.element(vec![1]).unwrap();
        assert_eq!(z2.pairing(&one, &one).unwrap(), turn(1, 2));

        let z3 = z(3);
        let a = z3.element(vec![1]).unwrap();
        let b = z3.element(vec![2]).unwrap();
        assert_eq!(z3.pairing(&a, &b).unwrap(), turn(2, 3));

        for y in grp(&[2, 3]).elements() {
            let g = grp(&[2, 3]);
            assert!(g.pairing(&y, &g.zero()).unwrap().is_zero());
        }
    }

    #[test]
    fn pairing_symmetric_and_bilinear() {
        let g = grp(&[2, 4]);
        let els: Vec<_> = g.elements().collect();
        for a in &els {
            for b in &els {
                assert_eq!(g.pairing(a, b).unwrap(), g.pairing(b, a).unwrap());
                for c in &els {
                    let lhs = g.pairing(&g.add(a, b).unwrap(), c).unwrap();
                    let rhs = g.pairing(a, c).unwrap().add(&g.pairing(b, c).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn classical_to_torus_examples() {
        let z2 = z(2);
        let one = z2.element(vec![1]).unwrap();
        let img = z2.classical_to_torus(&one).unwrap();
        assert_eq!(img.coords(), &[turn(1, 2)]);

        assert!(z2.classical_to_torus(&z2.zero()).unwrap().is_zero());

        let z3 = z(3);
        let img = z3.classical_to_torus(&z3.element(vec![1]).unwrap()).unwrap();
        assert_eq!(img.coords(), &[turn(1, 3), turn(2, 3)]);
        // injectivity over all of Z3
        let images: Vec<_> = z3
            .elements()
            .map(|x| z3.classical_to_torus(&x).unwrap())
            .collect();
        for i in 0..images.len() {
            for j in 0..i {
                assert_ne!(images[i], images[j]);
            }
        }
    }

    #[test]
    fn turn_arithmetic_examples() {
        assert_eq!(turn(3, 4).add(&turn(1, 2)), turn(1, 4));
        assert_eq!(turn(2, 5).add(&RationalTurn::zero()), turn(2, 5));
        assert!(turn(1, 3).add(&turn(2, 3)).is_zero());
        assert_eq!(turn(-1, 4), turn(3, 4));
        assert_eq!(turn(1, 3).scale(-1), turn(2, 3));
    }

    /// Brute-force group laws for every group of order at most 12.
    #[test]
    fn group_laws_small_orders() {
        let groups = vec![
            FiniteAbelianGroup::trivial(),
            z(2),
            z(3),
            z(4),
            grp(&[2, 2]),
            z(5),
            z(6),
            grp(&[2, 4]),
            grp(&[2, 2, 2]),
            z(9),
            grp(&[3, 3]),
            z(12),
            grp(&[2, 6]),
            grp(&[2, 2, 3]),
        ];
        for g in groups {
            let els: Vec<_> = g.elements().collect();
            assert_eq!(els.len() as u64, g.order());
            for a in &els {
                assert_eq!(g.add(a, &g.zero()).unwrap(), *a);
                let inv = g.neg(a).unwrap();
                assert!(g.add(a, &inv).unwrap().is_zero());
                assert!(g.scalar_mul(g.exponent() as i64, a).unwrap().is_zero());
                for b in &els {
                    assert_eq!(g.add(a, b).unwrap(), g.add(b, a).unwrap());
                    for c in &els {
                        let lhs = g.add(&g.add(a, b).unwrap(), c).unwrap();
                        let rhs = g.add(a, &g.add(b, c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
            // exponent is minimal
            if !g.is_trivial() {
                let k = g.exponent();
                assert!((1..k).any(|_| true));
                for m in 1..k {
                    assert!(
                        els.iter().any(|a| !g.scalar_mul(m as i64, a).unwrap().is_zero()),
                        "exponent not minimal for {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn embedding_is_homomorphism_and_nondegenerate() {
        for g in [z(2), z(3), grp(&[2, 2]), grp(&[2, 4]), z(12)] {
            let els: Vec<_> = g.elements().collect();
            for a in &els {
                for b in &els {
                    let lhs = g
                        .classical_to_torus(&g.add(a, b).unwrap())
                        .unwrap();
                    let rhs = g
                        .classical_to_torus(a)
                        .unwrap()
                        .add(&g.classical_to_torus(b).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
                if !a.is_zero() {
                    // nondegeneracy: some character sees a
                    assert!(
                        els.iter().any(|y| !g.pairing(y, a).unwrap().is_zero()),
                        "degenerate pairing at {a} in {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn element_indexing_round_trip() {
        let g = grp(&[2, 4]);
        for (i, e) in g.elements().enumerate() {
            assert_eq!(g.element_index(&e).unwrap(), i as u64);
            assert_eq!(g.element_at(i as u64), e);
        }
        // enumeration order agrees with Ord on elements
        let els: Vec<_> = g.elements().collect();
        let mut sorted = els.clone();
        sorted.sort();
        assert_eq!(els, sorted);
    }

    #[test]
    fn literals_round_trip() {
        for s in ["Z2", "Z3", "Z2xZ4", "Z12", "Z2xZ2xZ3"] {
            let g: FiniteAbelianGroup = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        let g: FiniteAbelianGroup = "z2XZ4".to_string().to_lowercase().parse().unwrap();
        assert_eq!(g, grp(&[2, 4]));
        assert!("Zx".parse::<FiniteAbelianGroup>().is_err());
        assert!("Z0".parse::<FiniteAbelianGroup>().is_err());
        assert_eq!("Z1".parse::<FiniteAbelianGroup>().unwrap(), FiniteAbelianGroup::trivial());

        let g = grp(&[2, 4]);
        let e = GroupElement::parse("(1,3)", &g).unwrap();
        assert_eq!(e.to_string(), "(1,3)");
        assert!(GroupElement::parse("(2,0)", &g).is_err());
        assert!(GroupElement::parse("1,3", &g).is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let z2 = z(2);
        let g = grp(&[2, 2]);
        let a = z2.element(vec![1]).unwrap();
        let b = g.element(vec![1, 0]).unwrap();
        assert!(matches!(z2.add(&a, &b), Err(GroupError::DimensionMismatch { .. })));
    }
}
