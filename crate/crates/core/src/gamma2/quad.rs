//! `gamma_2 . S` for a torus-invariant surface `S = V(tau)` whose star is a
//! quadrilateral (so `rho(S) = 2`).
//!
//! With the star rays labeled so that the maximal cones through `tau` are
//! `{y1,y3}`, `{y2,y3}`, `{y1,y4}`, `{y2,y4}`, and the wall relations
//!
//! ```text
//! b1 y1 + b2 y2 + c3 y3 + sum a_i x_i = 0      (wall tau + y3)
//! b3 y3 + b4 y4 + c1 y1 + sum e_i x_i = 0      (wall tau + y1)
//! ```
//!
//! the quantity
//!
//! ```text
//! -b3 c1 (b1^2 + b2^2 + c3^2 + sum a_i^2)
//!   + 2 b1 b3 (b1 c1 + b3 c3 + sum a_i e_i)
//!   - b1 c3 (b3^2 + b4^2 + c1^2 + sum e_i^2)
//! ```
//!
//! is a positive multiple of `gamma_2 . S`. Only its sign is intrinsic; the raw
//! value depends on the labeling and on how the relations are scaled (it is
//! homogeneous of degree 2 in each relation).

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan};
use crate::lattice::Rational;
use crate::walls::{self, WallRelation};

#[derive(Clone, Debug, Serialize)]
pub struct QuadSurface {
    pub tau: Cone,
    /// `[y1, y2, y3, y4]`
    pub labels: [usize; 4],
    /// Relation of the wall `tau + y3`.
    pub rel3: WallRelation,
    /// Relation of the wall `tau + y1`.
    pub rel1: WallRelation,
}

/// The labeled coefficients entering the formula; `a` and `e` follow the rays of
/// `tau` in increasing index order.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadCoefficients {
    pub b: [Rational; 4],
    pub c1: Rational,
    pub c3: Rational,
    pub a: Vec<Rational>,
    pub e: Vec<Rational>,
}

impl QuadSurface {
    pub fn coefficients(&self) -> QuadCoefficients {
        let [y1, y2, y3, y4] = self.labels;
        let r3 = |i| self.rel3.rational(i);
        let r1 = |i| self.rel1.rational(i);
        QuadCoefficients {
            b: [r3(y1), r3(y2), r1(y3), r1(y4)],
            c1: r1(y1),
            c3: r3(y3),
            a: self.tau.rays().iter().map(|&x| r3(x)).collect(),
            e: self.tau.rays().iter().map(|&x| r1(x)).collect(),
        }
    }
}

impl QuadCoefficients {
    /// Scales the `tau + y3` relation by `s` and the `tau + y1` relation by `t`.
    pub fn rescaled(&self, s: &Rational, t: &Rational) -> QuadCoefficients {
        QuadCoefficients {
            b: [&self.b[0] * s, &self.b[1] * s, &self.b[2] * t, &self.b[3] * t],
            c1: &self.c1 * t,
            c3: &self.c3 * s,
            a: self.a.iter().map(|x| x * s).collect(),
            e: self.e.iter().map(|x| x * t).collect(),
        }
    }
}

fn sum_sq(v: &[Rational]) -> Rational {
    v.iter().map(|x| x * x).sum()
}

/// Evaluates the quadrilateral formula on raw coefficients.
pub fn quad_formula(k: &QuadCoefficients) -> Rational {
    let [b1, b2, b3, b4] = &k.b;
    let (c1, c3) = (&k.c1, &k.c3);
    let ae: Rational = k.a.iter().zip(&k.e).map(|(a, e)| a * e).sum();
    let first = -(b3 * c1) * (b1 * b1 + b2 * b2 + c3 * c3 + sum_sq(&k.a));
    let second = Rational::from_integer(2.into()) * b1 * b3 * (b1 * c1 + b3 * c3 + ae);
    let third = -(b1 * c3) * (b3 * b3 + b4 * b4 + c1 * c1 + sum_sq(&k.e));
    first + second + third
}

/// All 8 labelings `[y1, y2, y3, y4]` compatible with the quadrilateral around `tau`.
pub fn valid_labelings(fan: &Fan, tau: &Cone) -> Result<Vec<[usize; 4]>> {
    let star = quad_star(fan, tau)?;
    let mut out = Vec::with_capacity(8);
    // cyclic order y3, y1, y4, y2 around the quadrilateral
    for start in 0..4 {
        for dir in [1, 3] {
            let at = |k: usize| star[(start + k * dir) % 4];
            out.push([at(1), at(3), at(0), at(2)]);
        }
    }
    Ok(out)
}

// star rays in cyclic order; errors unless there are exactly four
fn quad_star(fan: &Fan, tau: &Cone) -> Result<Vec<usize>> {
    let star = fan::star_surface(fan, tau)?;
    if star.len() != 4 || fan.max_cones_containing(tau).len() != 4 {
        return Err(Error::UnsupportedSurface { tau: tau.rays().to_vec(), rays: star.len() });
    }
    Ok(star.into_iter().map(|s| s.ray).collect())
}

/// Canonical labeling: `y3` is the adjacent ray of smallest index, `y1 < y2` its two
/// neighbours, `y4` the ray opposite to it.
pub fn quad_surface(fan: &Fan, tau: &Cone) -> Result<QuadSurface> {
    let cyc = quad_star(fan, tau)?;
    let p = cyc.iter().position(|&r| r == *cyc.iter().min().unwrap()).unwrap();
    let y3 = cyc[p];
    let (n1, n2) = (cyc[(p + 1) % 4], cyc[(p + 3) % 4]);
    let (y1, y2) = if n1 < n2 { (n1, n2) } else { (n2, n1) };
    let y4 = cyc[(p + 2) % 4];
    quad_surface_labeled(fan, tau, [y1, y2, y3, y4])
}

/// Builds the surface data for an explicit labeling, checking that it is valid.
pub fn quad_surface_labeled(fan: &Fan, tau: &Cone, labels: [usize; 4]) -> Result<QuadSurface> {
    let [y1, y2, y3, y4] = labels;
    quad_star(fan, tau)?;
    for (u, w) in [(y1, y3), (y2, y3), (y1, y4), (y2, y4)] {
        if !fan.is_cone(&tau.with(u).with(w)) {
            return Err(Error::InvalidParameter(format!(
                "labeling {labels:?} is not compatible with the star of {tau}"
            )));
        }
    }
    let rel3 = walls::wall_relation(fan, &fan::wall_at(fan, &tau.with(y3))?)?;
    let rel1 = walls::wall_relation(fan, &fan::wall_at(fan, &tau.with(y1))?)?;
    let q = QuadSurface { tau: tau.clone(), labels, rel3, rel1 };
    let k = q.coefficients();
    if !k.b.iter().all(Signed::is_positive) {
        return Err(Error::Invariant(format!("non-positive b coefficient on the star of {tau}")));
    }
    Ok(q)
}

/// The formula value under the canonical labeling and primitive-integral relations.
/// Its sign is the sign of `gamma_2 . V(tau)`; the magnitude is that of
/// `alpha * gamma_2 . V(tau)` for an unspecified `alpha > 0`.
pub fn gamma2_dot_quad(fan: &Fan, tau: &Cone) -> Result<Rational> {
    Ok(quad_formula(&quad_surface(fan, tau)?.coefficients()))
}

/// Codimension-two cones whose star is a quadrilateral.
pub fn quadrilateral_cones(fan: &Fan) -> Vec<Cone> {
    if fan.dim() < 2 {
        return Vec::new();
    }
    fan.cones_of_dim(fan.dim() - 2)
        .into_iter()
        .filter(|tau| fan.max_cones_containing(tau).len() == 4 && fan.adjacent_rays(tau).len() == 4)
        .collect()
}
