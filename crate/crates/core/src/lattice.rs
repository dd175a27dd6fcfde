//! Exact integer and rational linear algebra over `N = Z^d`.
//!
//! Everything here is arbitrary precision. Matrices are plain row vectors
//! (`&[Vec<Rational>]` or `&[LatticePoint]`); the sizes involved are tiny
//! (d <= 10 or so), so no attempt is made at cache-friendly layouts.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A point of the lattice `N = Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticePoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard basis vector of `Z^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn dot(&self, other: &LatticePoint) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Pairing with a rational dual vector.
    pub fn pair(&self, m: &[Rational]) -> Rational {
        self.0.iter().zip(m).map(|(a, b)| b * Rational::from_integer(a.clone())).sum()
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().cloned().map(Rational::from_integer).collect()
    }

    /// Image under a linear map given by its matrix rows.
    pub fn transform(&self, rows: &[LatticePoint]) -> LatticePoint {
        LatticePoint(rows.iter().map(|r| r.dot(self)).collect())
    }
}

impl From<&[i64]> for LatticePoint {
    fn from(v: &[i64]) -> Self {
        LatticePoint(v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(v: [i64; N]) -> Self {
        LatticePoint::from(&v[..])
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint::from(&v[..])
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Splits `v` into its primitive direction and the gcd of its coordinates.
pub fn primitive_part(v: &LatticePoint) -> Result<(LatticePoint, BigInt)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.content();
    let prim = LatticePoint(v.0.iter().map(|x| x / &g).collect());
    Ok((prim, g))
}

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref(mat: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = mat.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // leftmost nonzero pivot, first row that has it
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(mat: &[Vec<Rational>]) -> usize {
    rref(mat).1.len()
}

/// A basis of the right kernel `{x : mat * x = 0}`, one vector per free column.
pub fn kernel(mat: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(mat);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves the square system `mat * x = rhs`; `None` if `mat` is singular.
pub fn solve(mat: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = mat.len();
    let aug: Vec<Vec<Rational>> = mat
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square rational matrix.
pub fn inverse(mat: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = mat.len();
    let aug: Vec<Vec<Rational>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn determinant(rows: &[LatticePoint]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Index of the sublattice generated by `gens` inside the saturation of its span:
/// the gcd of all maximal minors. `None` if the generators are dependent.
pub fn sublattice_index(gens: &[LatticePoint]) -> Option<BigInt> {
    let k = gens.len();
    if k == 0 {
        return Some(BigInt::one());
    }
    let d = gens[0].dim();
    if k > d {
        return None;
    }
    let mut g = BigInt::zero();
    for cols in itertools::Itertools::combinations(0..d, k) {
        let minor: Vec<LatticePoint> =
            gens.iter().map(|v| LatticePoint(cols.iter().map(|&c| v.0[c].clone()).collect())).collect();
        g = g.gcd(&determinant(&minor));
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        None
    } else {
        Some(g)
    }
}

/// The unique (up to scale) linear dependency among `d+1` vectors spanning `R^d`,
/// scaled to a primitive integer vector whose first nonzero entry is positive.
pub fn solve_dependency(vectors: &[LatticePoint]) -> Result<Vec<BigInt>> {
    let n = vectors.len();
    let d = vectors.first().map_or(0, LatticePoint::dim);
    if let Some(v) = vectors.iter().find(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: v.dim() });
    }
    // columns are the vectors
    let mat: Vec<Vec<Rational>> =
        (0..d).map(|i| vectors.iter().map(|v| Rational::from_integer(v.0[i].clone())).collect()).collect();
    let ker = kernel(&mat, n);
    if ker.len() != 1 {
        return Err(Error::DegenerateWall(format!(
            "kernel dimension {} among {} vectors in dimension {}",
            ker.len(),
            n,
            d
        )));
    }
    let mut w = integralize(&ker[0]);
    if w.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        w.iter_mut().for_each(|x| *x = -x.clone());
    }
    Ok(w)
}

/// Clears denominators and divides out the content, keeping the direction.
pub fn integralize(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// A Z-basis of the saturated lattice `{m in Z^dim : <m, r> = 0 for every r in rows}`.
///
/// Column-style Hermite reduction: unimodular column operations bring the row
/// matrix into lower echelon form, and the trailing columns of the accumulated
/// transform span the integer kernel.
pub fn integer_kernel_basis(rows: &[LatticePoint], dim: usize) -> Vec<LatticePoint> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..dim).map(|i| LatticePoint::unit(dim, i).0).collect::<Vec<_>>();
    // u is stored column-major: u[j] is the j-th column
    let mut c = 0;
    for i in 0..a.len() {
        if c == dim {
            break;
        }
        for j in c + 1..dim {
            if a[i][j].is_zero() {
                continue;
            }
            if a[i][c].is_zero() {
                swap_cols(&mut a, &mut u, c, j);
                continue;
            }
            let x = a[i][c].clone();
            let y = a[i][j].clone();
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (p, q) = (-(&y / &g), &x / &g);
            combine_cols(&mut a, &mut u, c, j, (&s, &t), (&p, &q));
        }
        if !a[i][c].is_zero() {
            c += 1;
        }
    }
    u[c..].iter().cloned().map(LatticePoint).collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], c: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(c, j);
    }
    u.swap(c, j);
}

// new_c = s*c + t*j ; new_j = p*c + q*j
fn combine_cols(
    a: &mut [Vec<BigInt>],
    u: &mut [Vec<BigInt>],
    c: usize,
    j: usize,
    (s, t): (&BigInt, &BigInt),
    (p, q): (&BigInt, &BigInt),
) {
    for row in a.iter_mut() {
        let (x, y) = (row[c].clone(), row[j].clone());
        row[c] = s * &x + t * &y;
        row[j] = p * &x + q * &y;
    }
    let (cx, cy) = (u[c].clone(), u[j].clone());
    u[c] = cx.iter().zip(&cy).map(|(x, y)| s * x + t * y).collect();
    u[j] = cx.iter().zip(&cy).map(|(x, y)| p * x + q * y).collect();
}

/// All lattice points of the closed simplex `conv(vertices)`.
///
/// `vertices` must be `d+1` affinely independent points of `Z^d` (in practice the
/// origin together with a cone's generators). Candidates come from the inclusive
/// coordinate bounding box; membership is an exact barycentric test.
pub fn lattice_points_in_simplex(vertices: &[LatticePoint]) -> Result<BTreeSet<LatticePoint>> {
    let d = vertices.first().map_or(0, LatticePoint::dim);
    if vertices.len() != d + 1 {
        return Err(Error::InvalidParameter(format!(
            "simplex in dimension {d} needs {} vertices, got {}",
            d + 1,
            vertices.len()
        )));
    }
    if let Some(v) = vertices.iter().find(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: v.dim() });
    }
    let base = &vertices[0];
    let edges: Vec<LatticePoint> = vertices[1..].iter().map(|v| v.sub(base)).collect();
    // columns of the edge matrix are the edge vectors
    let emat: Vec<Vec<Rational>> =
        (0..d).map(|i| edges.iter().map(|e| Rational::from_integer(e.0[i].clone())).collect()).collect();
    let inv =
        inverse(&emat).ok_or_else(|| Error::InvalidParameter("simplex vertices are affinely dependent".into()))?;
    let den = inv.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<LatticePoint> = inv
        .iter()
        .map(|row| LatticePoint(row.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect()))
        .collect();

    let lo: Vec<BigInt> = (0..d).map(|i| vertices.iter().map(|v| v.0[i].clone()).min().unwrap()).collect();
    let hi: Vec<BigInt> = (0..d).map(|i| vertices.iter().map(|v| v.0[i].clone()).max().unwrap()).collect();

    let mut out = BTreeSet::new();
    let mut cur = LatticePoint(lo.clone());
    loop {
        let rel = cur.sub(base);
        let bary: Vec<BigInt> = scaled.iter().map(|r| r.dot(&rel)).collect();
        let total: BigInt = bary.iter().sum();
        if bary.iter().all(|x| !x.is_negative()) && total <= den {
            out.insert(cur.clone());
        }
        // odometer step over the box
        let mut k = 0;
        loop {
            if k == d {
                return Ok(out);
            }
            if cur.0[k] < hi[k] {
                cur.0[k] += 1;
                break;
            }
            cur.0[k] = lo[k].clone();
            k += 1;
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(v: &[i64]) -> LatticePoint {
        LatticePoint::from(v)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(primitive_part(&lp(&[2, 4, 6])).unwrap(), (lp(&[1, 2, 3]), int(2)));
        assert_eq!(primitive_part(&lp(&[0, 0, 1])).unwrap(), (lp(&[0, 0, 1]), int(1)));
        assert_eq!(primitive_part(&lp(&[-3, 6])).unwrap(), (lp(&[-1, 2]), int(3)));
        let err = primitive_part(&lp(&[0, 0])).unwrap_err();
        assert_eq!(err.to_string(), "zero vector has no primitive part");
    }

    #[test]
    fn dependency_of_p2() {
        let w = solve_dependency(&[lp(&[1, 0]), lp(&[0, 1]), lp(&[-1, -1])]).unwrap();
        assert_eq!(w, ints(&[1, 1, 1]));
    }

    #[test]
    fn dependency_gorenstein_3fold_wall() {
        // x3, x4, x1, x5, x2 of the Gorenstein Fano 3-fold
        let v = [lp(&[0, 0, 1]), lp(&[0, -2, -1]), lp(&[1, 0, 0]), lp(&[-1, -1, 0]), lp(&[0, 1, 0])];
        // only 4 of them belong to one wall: x3, x4, x1, x2
        let wall = [v[0].clone(), v[1].clone(), v[2].clone(), v[4].clone()];
        assert_eq!(solve_dependency(&wall).unwrap(), ints(&[1, 1, 0, 2]));
        // all five span a 2-dimensional kernel
        assert!(matches!(solve_dependency(&v), Err(Error::DegenerateWall(_))));
    }

    #[test]
    fn dependency_terminal_4fold_wall() {
        // wall cone(x1,x5,x6) with opposite rays x3, x4:
        // 3x3 + 2x4 - x1 - x5 + 2x6 = 0
        let v = [lp(&[0, 0, 1, 0]), lp(&[0, 0, 0, 1]), lp(&[1, 0, 0, 0]), lp(&[-1, -2, -1, 0]), lp(&[0, -1, -2, -1])];
        assert_eq!(solve_dependency(&v).unwrap(), ints(&[3, 2, -1, -1, 2]));
    }

    #[test]
    fn determinant_and_index() {
        assert_eq!(determinant(&[lp(&[1, 0]), lp(&[-1, -2])]), int(-2));
        assert_eq!(determinant(&[lp(&[0, 1, 0]), lp(&[1, 0, 0]), lp(&[0, 0, 1])]), int(-1));
        assert_eq!(sublattice_index(&[lp(&[1, 0, 0]), lp(&[1, 2, 0])]), Some(int(2)));
        assert_eq!(sublattice_index(&[lp(&[1, 0, 0, 0]), lp(&[-1, -2, -1, 0])]), Some(int(1)));
        assert_eq!(sublattice_index(&[lp(&[1, 1]), lp(&[2, 2])]), None);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // m orthogonal to (2, 4, 6): kernel lattice has index 1 in its span
        let basis = integer_kernel_basis(&[lp(&[2, 4, 6])], 3);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(b.dot(&lp(&[2, 4, 6])).is_zero());
        }
        assert_eq!(sublattice_index(&basis), Some(int(1)));

        let basis = integer_kernel_basis(&[lp(&[0, 0, 1, 0]), lp(&[0, -2, -1, 0])], 4);
        assert_eq!(basis.len(), 2);
        assert_eq!(sublattice_index(&basis), Some(int(1)));
    }

    #[test]
    fn simplex_points() {
        let pts = lattice_points_in_simplex(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1])]).unwrap();
        assert_eq!(pts.len(), 3);

        let pts =
            lattice_points_in_simplex(&[lp(&[0, 0, 0]), lp(&[1, 0, 0]), lp(&[0, 1, 0]), lp(&[0, -1, 1])]).unwrap();
        assert_eq!(pts.len(), 4);

        let pts = lattice_points_in_simplex(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[1, 2])]).unwrap();
        let expected: BTreeSet<_> = [lp(&[0, 0]), lp(&[1, 0]), lp(&[1, 1]), lp(&[1, 2])].into_iter().collect();
        assert_eq!(pts, expected);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![rat(1, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]);
        assert!(inverse(&[vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]).is_none());
    }
}
