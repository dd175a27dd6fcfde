//! Wall relations, the anticanonical (Fano) test, and extremal walls at Picard rank 2.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan, Wall};
use crate::lattice::{self, Rational};

/// The linear relation `a_1 y_1 + a_2 y_2 + sum b_i x_i = 0` among the rays of the
/// two maximal cones meeting at a wall, as a vector indexed by all rays of the fan
/// (zero off the wall). Primitive integral, opposite-ray coefficients positive.
///
/// Read as a curve class, entry `v` is `D_v . C` up to a common positive factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallRelation {
    pub wall: Wall,
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub coeffs: Vec<BigInt>,
}

impl WallRelation {
    pub fn coeff(&self, ray: usize) -> &BigInt {
        &self.coeffs[ray]
    }

    pub fn sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Rays with strictly positive coefficient.
    pub fn positive_support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i].is_positive()).collect()
    }

    /// Rays involved in the relation: the wall together with both opposite rays.
    pub fn wall_rays(&self) -> Cone {
        self.wall.tau.with(self.wall.opposite[0]).with(self.wall.opposite[1])
    }

    pub fn rational(&self, ray: usize) -> Rational {
        Rational::from_integer(self.coeffs[ray].clone())
    }
}

impl fmt::Display for WallRelation {
    /// Renders as `lhs = rhs` with positive coefficients on both sides, rays named `x<i>`
    /// (0-based).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |positive: bool| {
            let terms: Vec<String> = self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| if positive { c.is_positive() } else { c.is_negative() })
                .map(|(i, c)| {
                    let c = c.abs();
                    if c == BigInt::from(1) {
                        format!("x{i}")
                    } else {
                        format!("{c}*x{i}")
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        write!(f, "{} = {}", side(true), side(false))
    }
}

/// The wall relation for `wall`.
pub fn wall_relation(fan: &Fan, wall: &Wall) -> Result<WallRelation> {
    let order: Vec<usize> =
        [wall.opposite[0], wall.opposite[1]].into_iter().chain(wall.tau.rays().iter().copied()).collect();
    let vectors: Vec<_> = order.iter().map(|&i| fan.ray(i).clone()).collect();
    let w = lattice::solve_dependency(&vectors)?;
    // first entry (opposite[0]) is positive after normalization unless it vanishes
    if !w[0].is_positive() || !w[1].is_positive() {
        return Err(Error::DegenerateWall(format!(
            "opposite rays {} and {} of wall {} are not on opposite sides",
            wall.opposite[0], wall.opposite[1], wall.tau
        )));
    }
    let mut coeffs = vec![BigInt::zero(); fan.rays().len()];
    for (k, &i) in order.iter().enumerate() {
        coeffs[i] = w[k].clone();
    }
    Ok(WallRelation { wall: wall.clone(), coeffs })
}

pub fn all_wall_relations(fan: &Fan) -> Result<Vec<WallRelation>> {
    fan::walls(fan)?.iter().map(|w| wall_relation(fan, w)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoWitness {
    pub tau: Cone,
    /// `-K . C` up to a positive factor.
    #[serde(serialize_with = "crate::report::ser_int")]
    pub sum: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoReport {
    pub is_fano: bool,
    pub witnesses: Vec<FanoWitness>,
}

/// `-K` is ample iff it is positive on every torus-invariant curve, i.e. every
/// wall relation has positive coefficient sum.
pub fn is_fano(fan: &Fan) -> Result<FanoReport> {
    let witnesses: Vec<FanoWitness> =
        all_wall_relations(fan)?.into_iter().map(|r| FanoWitness { sum: r.sum(), tau: r.wall.tau }).collect();
    Ok(FanoReport { is_fano: witnesses.iter().all(|w| w.sum.is_positive()), witnesses })
}

/// Coordinates on the (rank `rho`) space of curve classes: pairing with a fixed
/// set of divisors `D_i` whose restriction to the relation space is invertible.
#[derive(Clone, Debug)]
pub struct ClassCoordinates {
    pub divisors: Vec<usize>,
}

impl ClassCoordinates {
    /// Picks the lexicographically first set of `rho` ray indices that gives
    /// coordinates on the kernel of the ray matrix.
    pub fn new(fan: &Fan) -> Result<Self> {
        let n = fan.rays().len();
        let d = fan.dim();
        let mat: Vec<Vec<Rational>> = (0..d)
            .map(|i| fan.rays().iter().map(|r| Rational::from_integer(r.coords()[i].clone())).collect())
            .collect();
        let ker = lattice::kernel(&mat, n);
        let rho = ker.len();
        for subset in itertools::Itertools::combinations(0..n, rho) {
            let minor: Vec<Vec<Rational>> =
                ker.iter().map(|k| subset.iter().map(|&i| k[i].clone()).collect()).collect();
            if lattice::rank(&minor) == rho {
                return Ok(ClassCoordinates { divisors: subset });
            }
        }
        Err(Error::InvalidFan("rays do not span".into()))
    }

    pub fn of(&self, rel: &WallRelation) -> Vec<BigInt> {
        self.divisors.iter().map(|&i| rel.coeffs[i].clone()).collect()
    }
}

/// The two extremal wall relations of a Picard-rank-2 fan, oriented as
/// `sum a_i x_i = sum c_j y_j` and `sum b_j y_j = sum d_i x_i`.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalPair {
    /// Positive support contains ray 0.
    pub x_relation: WallRelation,
    pub y_relation: WallRelation,
    /// Positive support of `x_relation`.
    pub x_side: Vec<usize>,
    /// Positive support of `y_relation`.
    pub y_side: Vec<usize>,
}

pub fn extremal_walls_rho2(fan: &Fan) -> Result<ExtremalPair> {
    if fan.picard_number() != 2 {
        return Err(Error::Unsupported(format!(
            "extremal wall detection needs Picard number 2, fan has {}",
            fan.picard_number()
        )));
    }
    let rels = all_wall_relations(fan)?;
    let coords = ClassCoordinates::new(fan)?;
    let pts: Vec<[BigInt; 2]> = rels
        .iter()
        .map(|r| {
            let c = coords.of(r);
            [c[0].clone(), c[1].clone()]
        })
        .collect();
    for (i, p) in pts.iter().enumerate() {
        if p[0].is_zero() && p[1].is_zero() {
            return Err(Error::Invariant(format!("wall {} has a zero curve class", rels[i].wall.tau)));
        }
        for q in &pts[i + 1..] {
            let dot = &p[0] * &q[0] + &p[1] * &q[1];
            if fan::cross(p, q).is_zero() && dot.is_negative() {
                return Err(Error::InvalidFan("curve classes are not strongly convex (fan not projective?)".into()));
            }
        }
    }
    // walls come sorted by tau, so the first hit is the lexicographic tie-break
    let boundary = |want_left: bool| -> Option<usize> {
        (0..pts.len()).find(|&i| {
            pts.iter().all(|q| {
                let c = fan::cross(&pts[i], q);
                if want_left {
                    !c.is_negative()
                } else {
                    !c.is_positive()
                }
            })
        })
    };
    let (Some(l), Some(r)) = (boundary(true), boundary(false)) else {
        return Err(Error::Invariant("curve classes do not span a pointed cone".into()));
    };
    if fan::cross(&pts[l], &pts[r]).is_zero() {
        return Err(Error::Invariant("all curve classes are proportional".into()));
    }
    let (first, second) = (rels[l].clone(), rels[r].clone());
    let (x_relation, y_relation) = if first.coeff(0).is_positive() { (first, second) } else { (second, first) };
    let x_side = x_relation.positive_support();
    let y_side = y_relation.positive_support();
    let n = fan.rays().len();
    let covers = x_side.len() + y_side.len() == n && x_side.iter().all(|i| !y_side.contains(i));
    if !covers || x_side.len() < 2 || y_side.len() < 2 || !x_relation.coeff(0).is_positive() {
        return Err(Error::Invariant(format!(
            "extremal relations {x_relation} and {y_relation} do not partition the rays"
        )));
    }
    Ok(ExtremalPair { x_relation, y_relation, x_side, y_side })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;

    fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        Fan::validated(
            dim,
            rays.iter().map(|r| LatticePoint::from(*r)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn projective_plane_relations_are_all_ones() {
        let f = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
        for r in all_wall_relations(&f).unwrap() {
            assert_eq!(r.coeffs, ints(&[1, 1, 1]));
        }
        let fano = is_fano(&f).unwrap();
        assert!(fano.is_fano);
        assert!(fano.witnesses.iter().all(|w| w.sum == BigInt::from(3)));
    }

    #[test]
    fn hirzebruch_two_is_not_fano() {
        let f = fan(2, &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]);
        let fano = is_fano(&f).unwrap();
        assert!(!fano.is_fano);
        let zero: Vec<_> = fano.witnesses.iter().filter(|w| w.sum.is_zero()).collect();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].tau, Cone::from([1]));
        // (1,0) + (-1,2) - 2(0,1) = 0
        let rel = wall_relation(&f, &fan::wall_at(&f, &Cone::from([1])).unwrap()).unwrap();
        assert_eq!(rel.coeffs, ints(&[1, -2, 1, 0]));
        assert_eq!(rel.to_string(), "x0 + x2 = 2*x1");
    }

    #[test]
    fn extremal_rejects_other_picard_numbers() {
        let f = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(matches!(extremal_walls_rho2(&f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn p1xp1_extremal_partition() {
        let f = fan(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]);
        let e = extremal_walls_rho2(&f).unwrap();
        assert_eq!(e.x_side, vec![0, 2]);
        assert_eq!(e.y_side, vec![1, 3]);
    }
}
