//! Generators of the cone of effective 2-cycles at Picard rank 2, and the
//! rewriting that expresses any torus-invariant surface in terms of them.
//!
//! The two extremal relations split the rays into `x_1..x_m` and `y_1..y_n`:
//!
//! ```text
//! a_1 x_1 + ... + a_m x_m = c_1 y_1 + ... + c_{n-1} y_{n-1}
//! b_1 y_1 + ... + b_n y_n = d_1 x_1 + ... + d_{m-1} x_{m-1}
//! ```
//!
//! where `x_m` (resp. `y_n`) is the ray missing from the second (resp. first)
//! relation's wall, and the remaining rays are sorted by `d_i/a_i` (resp. `c_j/b_j`).
//! In `N^1` this gives
//!
//! ```text
//! D_i = (a_i/a_m) D_m - (d_i/b_n) E_n,     E_j = (b_j/b_n) E_n - (c_j/a_m) D_m.
//! ```
//!
//! The generators are the monomials `D_p..D_{m-1} E_q..E_{n-1}` with `p + q = 4`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::lattice::Rational;
use crate::walls::{self, ExtremalPair};

#[derive(Clone, Debug, Serialize)]
pub struct Ne2Generators {
    #[serde(skip)]
    pub extremal: ExtremalPair,
    /// Ray indices `x_1..x_m`, with `x_m` last.
    pub x: Vec<usize>,
    /// Ray indices `y_1..y_n`, with `y_n` last.
    pub y: Vec<usize>,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub a: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub b: Vec<Rational>,
    /// `c_j` for `j < n`, zero at `y_n`.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub c: Vec<Rational>,
    /// `d_i` for `i < m`, zero at `x_m`.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub d: Vec<Rational>,
    /// Generator cones `S1`, `S2`, `S3`; `S1` is absent when `n = 2`, `S3` when `m = 2`.
    pub s: [Option<Cone>; 3],
}

impl Ne2Generators {
    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// `d_i / a_i` for `i < m`, in sorted order.
    pub fn x_ratios(&self) -> Vec<Rational> {
        (0..self.m() - 1).map(|i| &self.d[i] / &self.a[i]).collect()
    }

    /// `c_j / b_j` for `j < n`, in sorted order.
    pub fn y_ratios(&self) -> Vec<Rational> {
        (0..self.n() - 1).map(|j| &self.c[j] / &self.b[j]).collect()
    }

    /// Monomial cone `{x_p..x_{m-1}} ∪ {y_q..y_{n-1}}` (1-based `p`, `q`).
    fn monomial(&self, p: usize, q: usize) -> Cone {
        let xs = self.x[p - 1..self.m() - 1].iter();
        let ys = self.y[q - 1..self.n() - 1].iter();
        Cone::new(xs.chain(ys).copied().collect())
    }
}

/// The x/y partition, sorted coefficients and generator cones of a Picard-rank-2 fan.
pub fn ne2_generators(fan: &Fan) -> Result<Ne2Generators> {
    if fan.dim() < 3 {
        return Err(Error::Unsupported("NE_2 generators need dimension at least 3".into()));
    }
    let ext = walls::extremal_walls_rho2(fan)?;
    let (r1, r2) = (&ext.x_relation, &ext.y_relation);
    let missing = |side: &[usize], rel: &walls::WallRelation| -> Result<usize> {
        let wall = rel.wall_rays();
        let out: Vec<usize> = side.iter().copied().filter(|r| !wall.contains(*r)).collect();
        match out.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::Invariant(format!("expected one ray of {side:?} off the wall of {rel}"))),
        }
    };
    let x_last = missing(&ext.x_side, r2)?;
    let y_last = missing(&ext.y_side, r1)?;

    let ratio_sorted = |side: &[usize], last: usize, own: &walls::WallRelation, other: &walls::WallRelation| {
        let mut rest: Vec<usize> = side.iter().copied().filter(|&r| r != last).collect();
        // ratio = (-other coeff) / own coeff; ties by ray index
        rest.sort_by(|&u, &v| {
            let ru = -other.rational(u) / own.rational(u);
            let rv = -other.rational(v) / own.rational(v);
            ru.cmp(&rv).then(u.cmp(&v))
        });
        rest.push(last);
        rest
    };
    let x = ratio_sorted(&ext.x_side, x_last, r1, r2);
    let y = ratio_sorted(&ext.y_side, y_last, r2, r1);
    let a: Vec<Rational> = x.iter().map(|&r| r1.rational(r)).collect();
    let d: Vec<Rational> = x.iter().map(|&r| -r2.rational(r)).collect();
    let b: Vec<Rational> = y.iter().map(|&r| r2.rational(r)).collect();
    let c: Vec<Rational> = y.iter().map(|&r| -r1.rational(r)).collect();
    if d.iter().chain(&c).any(Signed::is_negative) {
        return Err(Error::Invariant("extremal relations have a negative off-side coefficient".into()));
    }
    let (m, n) = (x.len(), y.len());
    if m + n != fan.dim() + 2 {
        return Err(Error::Invariant(format!("partition sizes {m} + {n} != d + 2")));
    }

    let mut g = Ne2Generators { extremal: ext.clone(), x, y, a, b, c, d, s: [None, None, None] };
    for (k, (p, q)) in [(1, 3), (2, 2), (3, 1)].into_iter().enumerate() {
        // S1 needs n >= 3, S3 needs m >= 3
        if (k == 0 && n == 2) || (k == 2 && m == 2) {
            continue;
        }
        let cone = g.monomial(p, q);
        if cone.dim() + 2 != fan.dim() || !fan.is_cone(&cone) {
            return Err(Error::Invariant(format!("generator S{} = {cone} is not a codimension-2 cone", k + 1)));
        }
        g.s[k] = Some(cone);
    }
    Ok(g)
}

/// A squarefree monomial in the divisors, by positions in the sorted `x`/`y` lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Monomial {
    xs: BTreeSet<usize>,
    ys: BTreeSet<usize>,
}

struct Rewriter<'a> {
    g: &'a Ne2Generators,
    out: [Rational; 3],
    steps: usize,
}

const MAX_REWRITE_STEPS: usize = 1_000_000;

impl Rewriter<'_> {
    // 1 - c_j d_i / (a_i b_j), positive on a complete fan
    fn kappa(&self, i: usize, j: usize) -> Result<Rational> {
        let g = self.g;
        let k = Rational::one() - (&g.c[j] * &g.d[i]) / (&g.a[i] * &g.b[j]);
        if !k.is_positive() {
            return Err(Error::Invariant(format!("a_i b_j - c_j d_i <= 0 at i={i}, j={j}")));
        }
        Ok(k)
    }

    fn reduce(&mut self, mono: Monomial, coeff: Rational) -> Result<()> {
        self.steps += 1;
        if self.steps > MAX_REWRITE_STEPS {
            return Err(Error::Invariant("surface rewriting did not terminate".into()));
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let g = self.g;
        let (m, n) = (g.m(), g.n());
        let (xm, yn) = (m - 1, n - 1);
        if mono.xs.len() == m || mono.ys.len() == n {
            return Ok(()); // all of one side: not a cone, the product vanishes
        }
        let missing_x = (0..xm).rev().find(|i| !mono.xs.contains(i));
        let missing_y = (0..yn).rev().find(|j| !mono.ys.contains(j));

        if mono.xs.contains(&xm) {
            let i = missing_x.expect("some x is missing");
            let mut base = mono.clone();
            base.xs.remove(&xm);
            match missing_y {
                Some(j) => {
                    // kappa D_m = (a_m/a_i) D_i + (a_m d_i / (a_i b_j)) E_j
                    let k = self.kappa(i, j)?;
                    let ci = &g.a[xm] / &g.a[i] / &k;
                    let cj = (&g.a[xm] * &g.d[i]) / (&g.a[i] * &g.b[j]) / &k;
                    self.reduce(with_x(&base, i), &coeff * ci)?;
                    self.reduce(with_y(&base, j), &coeff * cj)?;
                }
                None => {
                    // D_m = (a_m/a_i) D_i + (..) E_n and the E_n term completes the y side
                    let ci = &g.a[xm] / &g.a[i];
                    self.reduce(with_x(&base, i), &coeff * ci)?;
                }
            }
            return Ok(());
        }
        if mono.ys.contains(&yn) {
            let j = missing_y.expect("some y is missing");
            let mut base = mono.clone();
            base.ys.remove(&yn);
            match missing_x {
                Some(i) => {
                    // kappa E_n = (b_n/b_j) E_j + (b_n c_j / (b_j a_i)) D_i
                    let k = self.kappa(i, j)?;
                    let cj = &g.b[yn] / &g.b[j] / &k;
                    let ci = (&g.b[yn] * &g.c[j]) / (&g.b[j] * &g.a[i]) / &k;
                    self.reduce(with_y(&base, j), &coeff * cj)?;
                    self.reduce(with_x(&base, i), &coeff * ci)?;
                }
                None => {
                    let cj = &g.b[yn] / &g.b[j];
                    self.reduce(with_y(&base, j), &coeff * cj)?;
                }
            }
            return Ok(());
        }
        // y side first: E_{j1} = (b_{j1}/b_{j2}) E_{j2} + (b_{j1}/a_m)(c_{j2}/b_{j2} - c_{j1}/b_{j1}) D_m
        if let Some((j1, j2)) = gap(&mono.ys, yn) {
            let mut base = mono.clone();
            base.ys.remove(&j1);
            let c_up = &g.b[j1] / &g.b[j2];
            let c_m = (&g.b[j1] / &g.a[xm]) * (&g.c[j2] / &g.b[j2] - &g.c[j1] / &g.b[j1]);
            self.reduce(with_y(&base, j2), &coeff * c_up)?;
            self.reduce(with_x(&base, xm), &coeff * c_m)?;
            return Ok(());
        }
        // then x side: D_{i1} = (a_{i1}/a_{i2}) D_{i2} + (a_{i1}/b_n)(d_{i2}/a_{i2} - d_{i1}/a_{i1}) E_n
        if let Some((i1, i2)) = gap(&mono.xs, xm) {
            let mut base = mono.clone();
            base.xs.remove(&i1);
            let c_up = &g.a[i1] / &g.a[i2];
            let c_n = (&g.a[i1] / &g.b[yn]) * (&g.d[i2] / &g.a[i2] - &g.d[i1] / &g.a[i1]);
            self.reduce(with_x(&base, i2), &coeff * c_up)?;
            self.reduce(with_y(&base, yn), &coeff * c_n)?;
            return Ok(());
        }
        // standard monomial x_p..x_{m-1}, y_q..y_{n-1} (1-based) with p + q = 4
        let p = m - mono.xs.len();
        let q = n - mono.ys.len();
        if p + q != 4 || !(1..=3).contains(&p) {
            return Err(Error::Invariant(format!("reduced monomial has (p, q) = ({p}, {q})")));
        }
        self.out[p - 1] += coeff;
        Ok(())
    }
}

fn with_x(base: &Monomial, i: usize) -> Monomial {
    let mut m = base.clone();
    m.xs.insert(i);
    m
}

fn with_y(base: &Monomial, j: usize) -> Monomial {
    let mut m = base.clone();
    m.ys.insert(j);
    m
}

/// If `set ⊂ {0..top-1}` is not a terminal segment, returns its smallest element and
/// the largest missing position above it.
fn gap(set: &BTreeSet<usize>, top: usize) -> Option<(usize, usize)> {
    let lo = *set.iter().next()?;
    let hole = (lo..top).rev().find(|i| !set.contains(i))?;
    Some((lo, hole))
}

/// Writes the divisor monomial `prod_{v in tau} D_v` as `sum_k lambda_k * S_k`
/// (the generator monomials), with every `lambda_k >= 0`.
pub fn decompose_surface_rho2(fan: &Fan, tau: &Cone) -> Result<[Rational; 3]> {
    let g = ne2_generators(fan)?;
    decompose_with(&g, fan, tau)
}

pub fn decompose_with(g: &Ne2Generators, fan: &Fan, tau: &Cone) -> Result<[Rational; 3]> {
    if tau.dim() + 2 != fan.dim() {
        return Err(Error::InvalidParameter(format!("{tau} does not have codimension two")));
    }
    if !fan.is_cone(tau) {
        return Err(Error::NotACone(tau.rays().to_vec()));
    }
    let mut mono = Monomial { xs: BTreeSet::new(), ys: BTreeSet::new() };
    for &r in tau.rays() {
        if let Some(i) = g.x.iter().position(|&v| v == r) {
            mono.xs.insert(i);
        } else if let Some(j) = g.y.iter().position(|&v| v == r) {
            mono.ys.insert(j);
        }
    }
    let mut rw = Rewriter { g, out: [Rational::zero(), Rational::zero(), Rational::zero()], steps: 0 };
    rw.reduce(mono, Rational::one())?;
    if rw.out.iter().any(Signed::is_negative) {
        return Err(Error::Invariant(format!("negative coefficient decomposing {tau}")));
    }
    for (k, v) in rw.out.iter().enumerate() {
        if !v.is_zero() && g.s[k].is_none() {
            return Err(Error::Invariant(format!("decomposition of {tau} uses absent generator S{}", k + 1)));
        }
    }
    Ok(rw.out)
}
