//! Top-degree intersection numbers of torus-invariant divisors on a complete
//! simplicial toric variety.
//!
//! `D_{v_1} ... D_{v_d}` is `1/mult(sigma)` when the `v_i` are distinct and span a
//! maximal cone `sigma`, and zero when they do not lie in a common cone. A
//! repeated divisor `D_v` is traded for `-sum_w <m, w> D_w` where `m` is dual to
//! `v` on a maximal cone containing the current support; the support only grows,
//! so the recursion terminates.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan};
use crate::lattice::{self, Rational};

pub struct Intersections<'a> {
    fan: &'a Fan,
    cache: HashMap<Vec<usize>, Rational>,
}

impl<'a> Intersections<'a> {
    pub fn new(fan: &'a Fan) -> Self {
        Intersections { fan, cache: HashMap::new() }
    }

    /// The intersection number of the divisors of the given rays (a multiset of size `d`).
    pub fn top(&mut self, rays: &[usize]) -> Result<Rational> {
        if rays.len() != self.fan.dim() {
            return Err(Error::InvalidParameter(format!(
                "top intersection needs {} divisors, got {}",
                self.fan.dim(),
                rays.len()
            )));
        }
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.eval(key)
    }

    fn eval(&mut self, key: Vec<usize>) -> Result<Rational> {
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let support = Cone::new(key.clone());
        let containing = self.fan.max_cones_containing(&support);
        let value = if containing.is_empty() {
            Rational::zero()
        } else if support.dim() == self.fan.dim() {
            let det = lattice::determinant(&self.fan.cone_rays(&support));
            Rational::new(One::one(), det.abs())
        } else {
            let sigma = self.fan.max_cones()[containing[0]].clone();
            let repeated = key.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]).expect("support smaller than key");
            let m = dual_to(self.fan, &sigma, repeated)?;
            let pos = key.iter().position(|&r| r == repeated).unwrap();
            let mut total = Rational::zero();
            for w in (0..self.fan.rays().len()).filter(|w| !sigma.contains(*w)) {
                let coeff = self.fan.ray(w).pair(&m);
                if coeff.is_zero() {
                    continue;
                }
                let mut next = key.clone();
                next[pos] = w;
                next.sort_unstable();
                total -= coeff * self.eval(next)?;
            }
            total
        };
        self.cache.insert(key, value.clone());
        Ok(value)
    }

    /// `gamma_2 . V(tau) = sum_v D_v^2 . V(tau)` for a cone `tau` of codimension 2,
    /// using `[V(tau)] = (1/mult(tau)) prod_{u in tau} D_u`.
    pub fn gamma2_dot_surface(&mut self, tau: &Cone) -> Result<Rational> {
        let d = self.fan.dim();
        if d < 2 || tau.dim() + 2 != d {
            return Err(Error::InvalidParameter(format!("{tau} does not have codimension two")));
        }
        if !self.fan.is_cone(tau) {
            return Err(Error::NotACone(tau.rays().to_vec()));
        }
        let mult = Rational::from_integer(fan::multiplicity(self.fan, tau)?);
        let mut total = Rational::zero();
        for v in 0..self.fan.rays().len() {
            let mut key = tau.rays().to_vec();
            key.extend([v, v]);
            total += self.top(&key)?;
        }
        Ok(total / mult)
    }

    /// Pairing of the monomial `prod_{u in monomial} D_u` (a codimension-two cone)
    /// with `D_s D_t`.
    pub fn pair_monomial(&mut self, monomial: &Cone, s: usize, t: usize) -> Result<Rational> {
        let mut key = monomial.rays().to_vec();
        key.extend([s, t]);
        self.top(&key)
    }
}

/// The dual vector `m` with `<m, v> = 1` for `v = ray` and `0` on the other rays of `sigma`.
fn dual_to(fan: &Fan, sigma: &Cone, ray: usize) -> Result<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = sigma.rays().iter().map(|&r| fan.ray(r).to_rational()).collect();
    let rhs: Vec<Rational> =
        sigma.rays().iter().map(|&r| if r == ray { Rational::one() } else { Rational::zero() }).collect();
    lattice::solve(&rows, &rhs).ok_or_else(|| Error::InvalidFan(format!("cone {sigma} is degenerate")))
}

/// Convenience wrapper: the exact value of `gamma_2 . V(tau)`.
pub fn gamma2_dot_surface(fan: &Fan, tau: &Cone) -> Result<Rational> {
    Intersections::new(fan).gamma2_dot_surface(tau)
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
