//! `gamma_2` arithmetic on complete toric surfaces: self-intersections, ray
//! contractions and their `gamma_2` drops, crepant resolutions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan};
use crate::lattice::{LatticePoint, Rational};
use crate::singularities;

fn require_surface(fan: &Fan) -> Result<()> {
    if fan.dim() != 2 {
        return Err(Error::Unsupported(format!("surface computation on a fan of dimension {}", fan.dim())));
    }
    Ok(())
}

/// Rays in counterclockwise order.
pub fn cyclic_rays(fan: &Fan) -> Result<Vec<usize>> {
    require_surface(fan)?;
    let mut cyc: Vec<usize> = fan::star_surface(fan, &Cone::empty())?.into_iter().map(|s| s.ray).collect();
    // the quotient basis may reverse orientation; consecutive rays of a complete fan turn left
    if cyc.len() >= 2 && det2(fan.ray(cyc[0]), fan.ray(cyc[1])).is_negative() {
        cyc[1..].reverse();
    }
    Ok(cyc)
}

fn det2(u: &LatticePoint, w: &LatticePoint) -> BigInt {
    let (u, w) = (u.coords(), w.coords());
    &u[0] * &w[1] - &u[1] * &w[0]
}

/// `D_v^2` computed with the dual vector `m` (`<m, v> = 1`):
/// `-<m,u>/mult(v,u) - <m,w>/mult(v,w)` for the two neighbours `u`, `w` of `v`.
pub fn self_intersection_with(fan: &Fan, v: usize, m: &[Rational]) -> Result<Rational> {
    let cyc = cyclic_rays(fan)?;
    let p = cyc.iter().position(|&r| r == v).ok_or_else(|| Error::InvalidParameter(format!("no ray {v}")))?;
    let k = cyc.len();
    let (u, w) = (cyc[(p + k - 1) % k], cyc[(p + 1) % k]);
    let vv = fan.ray(v);
    if vv.pair(m) != Rational::one() {
        return Err(Error::InvalidParameter("dual vector must evaluate to 1 on the ray".into()));
    }
    let term = |x: usize| fan.ray(x).pair(m) / Rational::from_integer(det2(vv, fan.ray(x)).abs());
    Ok(-term(u) - term(w))
}

/// `D_v^2` for every ray `v`, indexed like the rays.
pub fn surface_self_intersections(fan: &Fan) -> Result<Vec<Rational>> {
    require_surface(fan)?;
    (0..fan.rays().len())
        .map(|v| {
            let r = fan.ray(v);
            let norm: BigInt = r.dot(r);
            let m: Vec<Rational> = r.coords().iter().map(|c| Rational::new(c.clone(), norm.clone())).collect();
            self_intersection_with(fan, v, &m)
        })
        .collect()
}

/// `gamma_2 = sum_v D_v^2`.
pub fn gamma2_surface(fan: &Fan) -> Result<Rational> {
    Ok(surface_self_intersections(fan)?.into_iter().sum())
}

/// Removal of a ray `y` from a surface fan, merging its two cones into `cone(x1, x2)`.
#[derive(Clone, Debug, Serialize)]
pub struct Contraction {
    #[serde(skip)]
    pub fan: Fan,
    /// Ray indices in the original fan; `x1` precedes `y` counterclockwise.
    pub x1: usize,
    pub x2: usize,
    /// `a x1 + b x2 = q y` with `a = mult(y, x2)`, `b = mult(x1, y)`, `q = mult(x1, x2)`.
    #[serde(serialize_with = "crate::report::ser_int")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub q: BigInt,
}

impl Contraction {
    /// The triple divided by its gcd.
    pub fn coprime(&self) -> (BigInt, BigInt, BigInt) {
        let g = self.a.gcd(&self.b).gcd(&self.q);
        (&self.a / &g, &self.b / &g, &self.q / &g)
    }

    /// `a + b = q`: the contraction does not change the canonical class.
    pub fn is_crepant(&self) -> bool {
        &self.a + &self.b == self.q
    }
}

/// Contracts the ray `y`; its neighbours must span a strictly convex cone.
pub fn contract_ray(fan: &Fan, y: usize) -> Result<Contraction> {
    let cyc = cyclic_rays(fan)?;
    let k = cyc.len();
    if k <= 3 {
        return Err(Error::NotContractible(y, "a complete surface fan needs at least three rays".into()));
    }
    let p = cyc.iter().position(|&r| r == y).ok_or_else(|| Error::InvalidParameter(format!("no ray {y}")))?;
    let (x1, x2) = (cyc[(p + k - 1) % k], cyc[(p + 1) % k]);
    let (v1, v2, vy) = (fan.ray(x1), fan.ray(x2), fan.ray(y));
    let q = det2(v1, v2);
    if !q.is_positive() {
        return Err(Error::NotContractible(y, "neighbours do not span a strictly convex cone".into()));
    }
    // Cramer: det(y,x2) x1 + det(x1,y) x2 = det(x1,x2) y
    let a = det2(vy, v2);
    let b = det2(v1, vy);
    debug_assert!(a.is_positive() && b.is_positive());

    let keep: Vec<usize> = (0..fan.rays().len()).filter(|&r| r != y).collect();
    let new_index = |r: usize| keep.iter().position(|&s| s == r).unwrap();
    let rays: Vec<LatticePoint> = keep.iter().map(|&r| fan.ray(r).clone()).collect();
    let mut cones: Vec<Vec<usize>> = fan
        .max_cones()
        .iter()
        .filter(|c| !c.contains(y))
        .map(|c| c.rays().iter().map(|&r| new_index(r)).collect())
        .collect();
    cones.push(vec![new_index(x1), new_index(x2)]);
    let contracted = Fan::validated(2, rays, cones)?;
    Ok(Contraction { fan: contracted, x1, x2, a, b, q })
}

/// `(a^2 + b^2 + q^2) / (a b q)` for the contraction of `y`, checked against the
/// direct difference `gamma_2(contracted) - gamma_2(fan)`.
pub fn gamma2_drop(fan: &Fan, y: usize) -> Result<Rational> {
    let c = contract_ray(fan, y)?;
    let drop = drop_formula(&c.a, &c.b, &c.q);
    let direct = gamma2_surface(&c.fan)? - gamma2_surface(fan)?;
    if direct != drop {
        return Err(Error::Invariant(format!(
            "gamma_2 drop for ray {y}: formula {drop} but direct difference {direct}"
        )));
    }
    Ok(drop)
}

pub fn drop_formula(a: &BigInt, b: &BigInt, q: &BigInt) -> Rational {
    Rational::new(a * a + b * b + q * q, a * b * q)
}

/// `1/a + 1/b - 1/(a+b)`; the crepant drop equals `2 f(a, b)`.
pub fn f(a: &BigInt, b: &BigInt) -> Result<Rational> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::InvalidParameter(format!("f({a}, {b}) needs positive integers")));
    }
    let one = BigInt::one();
    Ok(Rational::new(one.clone(), a.clone()) + Rational::new(one.clone(), b.clone()) - Rational::new(one, a + b))
}

/// Inserts the primitive ray `v` into the interior of the two-dimensional cone `cone`.
pub fn insert_ray(fan: &Fan, cone: &Cone, v: LatticePoint) -> Result<Fan> {
    require_surface(fan)?;
    let k = fan.max_cones().iter().position(|c| c == cone).ok_or_else(|| Error::NotACone(cone.rays().to_vec()))?;
    let (u, w) = (cone.rays()[0], cone.rays()[1]);
    let (du, dw) = (det2(fan.ray(u), &v), det2(&v, fan.ray(w)));
    let same_side = (du.is_positive() && dw.is_positive()) || (du.is_negative() && dw.is_negative());
    if !same_side {
        return Err(Error::InvalidParameter(format!("{v} is not interior to cone {cone}")));
    }
    let mut rays = fan.rays().to_vec();
    rays.push(v);
    let new = rays.len() - 1;
    let mut cones: Vec<Vec<usize>> =
        fan.max_cones().iter().enumerate().filter(|&(i, _)| i != k).map(|(_, c)| c.rays().to_vec()).collect();
    cones.push(vec![u, new]);
    cones.push(vec![new, w]);
    Fan::validated(2, rays, cones)
}

/// Crepant resolution of a Gorenstein surface: every singular cone is subdivided
/// at the lattice points of the segment joining its generators. New rays are
/// appended after the original ones.
pub fn crepant_resolution_surface(fan: &Fan) -> Result<Fan> {
    require_surface(fan)?;
    let report = singularities::gorenstein_report(fan)?;
    if !report.gorenstein {
        return Err(Error::InvalidParameter(format!(
            "crepant resolution needs a Gorenstein surface (index {})",
            report.gorenstein_index
        )));
    }
    if fan.max_cones().iter().all(|c| fan::multiplicity(fan, c).is_ok_and(|m| m.is_one())) {
        return Ok(fan.clone());
    }
    let cyc = cyclic_rays(fan)?;
    let mut rays = fan.rays().to_vec();
    let mut cones = Vec::new();
    for (p, &u) in cyc.iter().enumerate() {
        let w = cyc[(p + 1) % cyc.len()];
        let step = fan.ray(w).sub(fan.ray(u));
        let g = step.content();
        let unit = LatticePoint::new(step.coords().iter().map(|c| c / &g).collect());
        let mut prev = u;
        let mut point = fan.ray(u).clone();
        let mut k = BigInt::one();
        while k < g {
            point = point.add(&unit);
            rays.push(point.clone());
            let idx = rays.len() - 1;
            cones.push(vec![prev, idx]);
            prev = idx;
            k += 1;
        }
        cones.push(vec![prev, w]);
    }
    let resolved = Fan::validated(2, rays, cones)?;
    debug_assert!(resolved.max_cones().iter().all(|c| fan::multiplicity(&resolved, c).is_ok_and(|m| m.is_one())));
    Ok(resolved)
}
