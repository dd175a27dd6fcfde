//! Terminality (by lattice-point enumeration), the Gorenstein index, and the singular locus.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan};
use crate::lattice::{self, LatticePoint, Rational};

/// A simplicial cone is terminal iff `conv(0, v_1, ..., v_k)` contains no lattice
/// points besides its vertices.
pub fn is_terminal_generators(gens: &[LatticePoint]) -> Result<bool> {
    let dim = gens.first().map_or(0, LatticePoint::dim);
    let mut vertices = vec![LatticePoint::zero(dim)];
    vertices.extend(gens.iter().cloned());
    let points = lattice::lattice_points_in_simplex(&vertices)?;
    Ok(points.len() == vertices.len())
}

pub fn is_terminal_cone(fan: &Fan, cone: &Cone) -> Result<bool> {
    is_terminal_generators(&fan.cone_rays(cone))
}

/// Generators `e_1, ..., e_{d-1}, c e_d - (e_p + ... + e_{d-1})` (1-based `p`).
pub fn lemma31_cone(d: usize, p: usize, c: i64) -> Result<Vec<LatticePoint>> {
    if d < 3 || p < 1 || p > d - 1 || c <= 0 {
        return Err(Error::InvalidParameter(format!("need d >= 3, 1 <= p <= d-1, c > 0 (got d={d}, p={p}, c={c})")));
    }
    Ok(lemma31_generators(d, p, c))
}

/// Same generators without the `c < d - p + 1` restriction (used to probe the excluded boundary).
pub fn lemma31_generators(d: usize, p: usize, c: i64) -> Vec<LatticePoint> {
    let mut gens: Vec<LatticePoint> = (0..d - 1).map(|i| LatticePoint::unit(d, i)).collect();
    let last: Vec<BigInt> = (0..d)
        .map(|i| {
            if i == d - 1 {
                BigInt::from(c)
            } else if i + 1 >= p {
                BigInt::from(-1)
            } else {
                BigInt::from(0)
            }
        })
        .collect();
    gens.push(LatticePoint::new(last));
    gens
}

/// Valid `c` values for given `d`, `p`: `0 < c < d - p + 1`.
pub fn lemma31_range(d: usize, p: usize) -> std::ops::Range<i64> {
    1..(d - p + 1) as i64
}

/// The rational `m` with `<m, v> = 1` on every generator of a full-dimensional cone.
pub fn gorenstein_dual(fan: &Fan, cone: &Cone) -> Result<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = fan.cone_rays(cone).iter().map(LatticePoint::to_rational).collect();
    let rhs = vec![Rational::one(); rows.len()];
    lattice::solve(&rows, &rhs).ok_or_else(|| Error::InvalidFan(format!("cone {cone} is degenerate")))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeSingularity {
    pub cone: Cone,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub multiplicity: BigInt,
    pub terminal: bool,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub dual: Vec<Rational>,
    /// lcm of the denominators of `dual`.
    #[serde(serialize_with = "crate::report::ser_int")]
    pub denominator: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityReport {
    pub cones: Vec<ConeSingularity>,
    pub terminal: bool,
    pub gorenstein: bool,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub gorenstein_index: BigInt,
    /// Minimal cones of multiplicity `> 1`; their orbit closures make up the singular locus.
    pub singular_cones: Vec<Cone>,
}

pub fn gorenstein_report(fan: &Fan) -> Result<SingularityReport> {
    let cones: Vec<ConeSingularity> = fan
        .max_cones()
        .par_iter()
        .map(|cone| {
            let dual = gorenstein_dual(fan, cone)?;
            let denominator = dual.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            Ok(ConeSingularity {
                cone: cone.clone(),
                multiplicity: fan::multiplicity(fan, cone)?,
                terminal: is_terminal_cone(fan, cone)?,
                dual,
                denominator,
            })
        })
        .collect::<Result<_>>()?;
    let gorenstein_index = cones.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator));
    let terminal = cones.iter().all(|c| c.terminal);
    let singular_cones = singular_cones(fan, &cones)?;
    Ok(SingularityReport { terminal, gorenstein: gorenstein_index.is_one(), gorenstein_index, singular_cones, cones })
}

// faces of singular maximal cones with multiplicity > 1 and no such proper face
fn singular_cones(fan: &Fan, cones: &[ConeSingularity]) -> Result<Vec<Cone>> {
    let mut singular: BTreeSet<Cone> = BTreeSet::new();
    let mut smooth: BTreeSet<Cone> = BTreeSet::new();
    for c in cones.iter().filter(|c| !c.multiplicity.is_one()) {
        for k in 2..=c.cone.dim() {
            for face in c.cone.rays().iter().copied().combinations(k) {
                let face = Cone::new(face);
                if singular.contains(&face) || smooth.contains(&face) {
                    continue;
                }
                if fan::multiplicity(fan, &face)?.is_one() {
                    smooth.insert(face);
                } else {
                    singular.insert(face);
                }
            }
        }
    }
    let minimal = singular.iter().filter(|s| !singular.iter().any(|t| t != *s && t.is_face_of(s))).cloned().collect();
    Ok(minimal)
}

/// Whether the rays include a pair `v`, `-v`.
pub fn has_centrally_symmetric_pair(fan: &Fan) -> bool {
    let rays: BTreeSet<&LatticePoint> = fan.rays().iter().collect();
    fan.rays().iter().any(|v| rays.contains(&v.neg()))
}
