//! Independent oracles used by the integration tests. They share no code with
//! the library beyond its data types.
#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use toric_gamma2::{Fan, LatticePoint};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn coords_i64(p: &LatticePoint) -> Vec<i64> {
    p.coords().iter().map(|c| i64::try_from(c).expect("small coordinate")).collect()
}

/// Solves the square system `a x = b` by Gaussian elimination; `None` if singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(row, r)| row.iter().cloned().chain([r.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Lattice points of `conv(vertices)` for a full-dimensional simplex, by scanning
/// the bounding box and solving for barycentric coordinates.
pub fn simplex_points(vertices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = vertices[0].len();
    assert_eq!(vertices.len(), d + 1);
    let lo: Vec<i64> = (0..d).map(|k| vertices.iter().map(|v| v[k]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|k| vertices.iter().map(|v| v[k]).max().unwrap()).collect();
    // columns v_i - v_0
    let a: Vec<Vec<Q>> = (0..d).map(|k| (1..=d).map(|i| q(vertices[i][k] - vertices[0][k])).collect()).collect();
    let mut out = Vec::new();
    let mut p = lo.clone();
    loop {
        let b: Vec<Q> = (0..d).map(|k| q(p[k] - vertices[0][k])).collect();
        let lam = solve(&a, &b).expect("degenerate simplex");
        let sum: Q = lam.iter().cloned().sum();
        if lam.iter().all(|l| !l.is_negative()) && sum <= Q::one() {
            out.push(p.clone());
        }
        let mut k = 0;
        loop {
            if k == d {
                out.sort();
                return out;
            }
            if p[k] < hi[k] {
                p[k] += 1;
                break;
            }
            p[k] = lo[k];
            k += 1;
        }
    }
}

/// Whether `conv(0, gens)` has lattice points other than its vertices.
pub fn terminal_oracle(gens: &[Vec<i64>]) -> bool {
    let mut v = vec![vec![0; gens[0].len()]];
    v.extend(gens.iter().cloned());
    simplex_points(&v).len() == v.len()
}

fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Rays of a complete 2D fan sorted by angle.
pub fn angular_order(rays: &[Vec<i64>]) -> Vec<usize> {
    let half = |v: &[i64]| if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 };
    let mut idx: Vec<usize> = (0..rays.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (&rays[i], &rays[j]);
        half(a).cmp(&half(b)).then_with(|| 0.cmp(&det2(a, b)))
    });
    idx
}

/// `D_v^2 = -det(prev, next) / (det(prev, v) det(v, next))` around the cycle.
pub fn surface_self_intersections_oracle(fan: &Fan) -> Vec<Q> {
    let rays: Vec<Vec<i64>> = fan.rays().iter().map(coords_i64).collect();
    let ord = angular_order(&rays);
    let n = ord.len();
    let mut out = vec![Q::zero(); n];
    for k in 0..n {
        let (p, v, nx) = (&rays[ord[(k + n - 1) % n]], &rays[ord[k]], &rays[ord[(k + 1) % n]]);
        out[ord[k]] = Q::new(BigInt::from(-det2(p, nx)), BigInt::from(det2(p, v) * det2(v, nx)));
    }
    out
}

pub fn surface_gamma2_oracle(fan: &Fan) -> Q {
    surface_self_intersections_oracle(fan).into_iter().sum()
}

/// The quadrilateral formula evaluated from raw relation vectors.
pub fn quad_formula_raw(rel3: &[Q], rel1: &[Q], labels: [usize; 4], tau: &[usize]) -> Q {
    let [y1, y2, y3, y4] = labels;
    let (b1, b2, c3) = (&rel3[y1], &rel3[y2], &rel3[y3]);
    let (b3, b4, c1) = (&rel1[y3], &rel1[y4], &rel1[y1]);
    let sa: Q = tau.iter().map(|&i| &rel3[i] * &rel3[i]).sum();
    let se: Q = tau.iter().map(|&i| &rel1[i] * &rel1[i]).sum();
    let ae: Q = tau.iter().map(|&i| &rel3[i] * &rel1[i]).sum();
    let two = q(2);
    -(b3 * c1) * (b1 * b1 + b2 * b2 + c3 * c3 + sa) + two * b1 * b3 * (b1 * c1 + b3 * c3 + ae)
        - b1 * c3 * (b3 * b3 + b4 * b4 + c1 * c1 + se)
}

pub fn sign(x: &Q) -> Ordering {
    x.cmp(&Q::zero())
}
