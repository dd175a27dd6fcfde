//! Simplicial fans: data model, structural validation, walls, stars.
//!
//! Rays are referenced by their index in [`Fan::rays`] everywhere; input order
//! is never changed so that reports stay comparable with the source file.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, LatticePoint, Rational};

/// A cone of the fan, given by the sorted indices of its rays.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone(rays)
    }

    pub fn empty() -> Self {
        Cone(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.0.binary_search(&ray).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|&r| other.contains(r))
    }

    pub fn with(&self, ray: usize) -> Cone {
        let mut v = self.0.clone();
        v.push(ray);
        Cone::new(v)
    }

    pub fn without(&self, ray: usize) -> Cone {
        Cone(self.0.iter().copied().filter(|&r| r != ray).collect())
    }
}

impl From<&[usize]> for Cone {
    fn from(v: &[usize]) -> Self {
        Cone::new(v.to_vec())
    }
}

impl<const N: usize> From<[usize; N]> for Cone {
    fn from(v: [usize; N]) -> Self {
        Cone::new(v.to_vec())
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticePoint>,
    max_cones: Vec<Cone>,
}

impl Fan {
    /// Builds a fan after shape checks only (lengths and index ranges).
    /// Geometric validity is the job of [`validate`].
    pub fn new(dim: usize, rays: Vec<LatticePoint>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::InvalidFan("dimension must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::InvalidFan(format!("ray {i} has {} coordinates, expected {dim}", r.dim())));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (k, c) in max_cones.into_iter().enumerate() {
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!("cone {k} references missing ray {bad}")));
            }
            let len = c.len();
            let cone = Cone::new(c);
            if cone.dim() != len {
                return Err(Error::InvalidFan(format!("cone {k} repeats a ray index")));
            }
            if cone.dim() != dim {
                return Err(Error::InvalidFan(format!("cone {k} has {len} rays, expected {dim}")));
            }
            cones.push(cone);
        }
        Ok(Fan { dim, rays, max_cones: cones })
    }

    /// Builds the fan and rejects it unless [`validate`] reports no issues.
    pub fn validated(dim: usize, rays: Vec<LatticePoint>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        let fan = Fan::new(dim, rays, max_cones)?;
        let report = validate(&fan);
        if !report.is_valid() {
            let msgs: Vec<String> = report.issues.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidFan(msgs.join("; ")));
        }
        Ok(fan)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticePoint] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticePoint {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// `#rays - d`, the Picard number of a complete simplicial fan.
    pub fn picard_number(&self) -> usize {
        self.rays.len().saturating_sub(self.dim)
    }

    pub fn cone_rays(&self, cone: &Cone) -> Vec<LatticePoint> {
        cone.rays().iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Indices of the maximal cones having `cone` as a face.
    pub fn max_cones_containing(&self, cone: &Cone) -> Vec<usize> {
        (0..self.max_cones.len()).filter(|&k| cone.is_face_of(&self.max_cones[k])).collect()
    }

    pub fn is_cone(&self, cone: &Cone) -> bool {
        self.max_cones.iter().any(|m| cone.is_face_of(m))
    }

    /// All cones of the given dimension, in sorted order.
    pub fn cones_of_dim(&self, k: usize) -> BTreeSet<Cone> {
        let mut out = BTreeSet::new();
        for m in &self.max_cones {
            for sub in itertools::Itertools::combinations(m.rays().iter().copied(), k) {
                out.insert(Cone(sub));
            }
        }
        out
    }

    /// Rays sharing a maximal cone with `tau` but not in it (the star's rays).
    pub fn adjacent_rays(&self, tau: &Cone) -> BTreeSet<usize> {
        self.max_cones_containing(tau)
            .into_iter()
            .flat_map(|k| self.max_cones[k].rays().to_vec())
            .filter(|r| !tau.contains(*r))
            .collect()
    }

    /// Facets of maximal cones, with the maximal cones and opposite rays they border.
    fn facet_incidence(&self) -> BTreeMap<Cone, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Cone, Vec<(usize, usize)>> = BTreeMap::new();
        for (k, m) in self.max_cones.iter().enumerate() {
            for &r in m.rays() {
                map.entry(m.without(r)).or_default().push((k, r));
            }
        }
        map
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    TooFewRays { rays: usize, dim: usize },
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    UnusedRay { ray: usize },
    DuplicateCone { first: usize, second: usize },
    DegenerateCone { cone: usize },
    FacetCount { facet: Cone, count: usize },
    WallNotSeparating { facet: Cone },
    ImproperIntersection { first: usize, second: usize },
    PointLocation { direction: String, hits: usize },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            TooFewRays { rays, dim } => write!(f, "{rays} rays cannot form a complete fan in dimension {dim}"),
            ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            DuplicateRay { first, second } => write!(f, "rays {first} and {second} coincide"),
            UnusedRay { ray } => write!(f, "ray {ray} lies in no maximal cone"),
            DuplicateCone { first, second } => write!(f, "maximal cones {first} and {second} coincide"),
            DegenerateCone { cone } => write!(f, "maximal cone {cone} is not full-dimensional"),
            FacetCount { facet, count } => {
                write!(f, "facet {facet} lies in {count} maximal cone(s), expected 2")
            }
            WallNotSeparating { facet } => {
                write!(f, "the two cones at facet {facet} lie on the same side of it")
            }
            ImproperIntersection { first, second } => {
                write!(f, "maximal cones {first} and {second} do not meet in a common face")
            }
            PointLocation { direction, hits } => {
                write!(f, "direction {direction} lies in {hits} maximal cones, expected 1")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub num_rays: usize,
    pub num_max_cones: usize,
    pub picard_number: usize,
    pub deep: bool,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Dimension up to which [`validate`] runs the pairwise intersection check.
pub const DEEP_VALIDATION_MAX_DIM: usize = 5;

const POINT_LOCATION_SAMPLES: usize = 24;
const POINT_LOCATION_SEED: u64 = 0x7a11_c0de;

/// Structural validation with the default deep-mode policy.
pub fn validate(fan: &Fan) -> ValidationReport {
    validate_with(fan, fan.dim <= DEEP_VALIDATION_MAX_DIM)
}

/// Checks primitivity, simpliciality, the wall condition, and point location;
/// with `deep` also checks that maximal cones pairwise meet in common faces.
pub fn validate_with(fan: &Fan, deep: bool) -> ValidationReport {
    let mut issues = Vec::new();
    let d = fan.dim;
    let n = fan.rays.len();

    if n <= d {
        issues.push(ValidationIssue::TooFewRays { rays: n, dim: d });
    }
    for (i, r) in fan.rays.iter().enumerate() {
        if r.is_zero() {
            issues.push(ValidationIssue::ZeroRay { ray: i });
        } else if !r.is_primitive() {
            issues.push(ValidationIssue::NonPrimitiveRay { ray: i });
        }
    }
    let mut seen: BTreeMap<&LatticePoint, usize> = BTreeMap::new();
    for (i, r) in fan.rays.iter().enumerate() {
        if let Some(&first) = seen.get(r) {
            issues.push(ValidationIssue::DuplicateRay { first, second: i });
        } else {
            seen.insert(r, i);
        }
    }
    let used: BTreeSet<usize> = fan.max_cones.iter().flat_map(|c| c.rays().to_vec()).collect();
    for i in (0..n).filter(|i| !used.contains(i)) {
        issues.push(ValidationIssue::UnusedRay { ray: i });
    }
    let mut seen_cones: BTreeMap<&Cone, usize> = BTreeMap::new();
    for (k, c) in fan.max_cones.iter().enumerate() {
        if let Some(&first) = seen_cones.get(c) {
            issues.push(ValidationIssue::DuplicateCone { first, second: k });
        } else {
            seen_cones.insert(c, k);
        }
    }
    let dets: Vec<BigInt> = fan.max_cones.iter().map(|c| lattice::determinant(&fan.cone_rays(c))).collect();
    for (k, det) in dets.iter().enumerate() {
        if det.is_zero() {
            issues.push(ValidationIssue::DegenerateCone { cone: k });
        }
    }
    for (facet, adj) in fan.facet_incidence() {
        if adj.len() != 2 {
            issues.push(ValidationIssue::FacetCount { facet, count: adj.len() });
        } else if dets.iter().all(|x| !x.is_zero()) && !separates(fan, &facet, adj[0].1, adj[1].1) {
            issues.push(ValidationIssue::WallNotSeparating { facet });
        }
    }
    if !issues.is_empty() {
        return report(fan, deep, issues);
    }

    let locator = PointLocator::new(fan);
    let mut rng = ChaCha8Rng::seed_from_u64(POINT_LOCATION_SEED);
    let mut found = 0;
    let mut attempts = 0;
    while found < POINT_LOCATION_SAMPLES && attempts < 50 * POINT_LOCATION_SAMPLES {
        attempts += 1;
        let dir = LatticePoint::new((0..d).map(|_| BigInt::from(rng.random_range(-1000i64..=1000))).collect());
        if dir.is_zero() {
            continue;
        }
        // generic directions only: skip anything on a cone boundary
        let Some(hits) = locator.locate_generic(&dir) else {
            continue;
        };
        found += 1;
        if hits != 1 {
            issues.push(ValidationIssue::PointLocation { direction: dir.to_string(), hits });
            break;
        }
    }

    if deep {
        let m = fan.max_cones.len();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let bad: Vec<(usize, usize)> =
            pairs.par_iter().filter(|&&(i, j)| !meets_in_common_face(fan, &locator, i, j)).copied().collect();
        for (first, second) in bad {
            issues.push(ValidationIssue::ImproperIntersection { first, second });
        }
    }
    report(fan, deep, issues)
}

fn report(fan: &Fan, deep: bool, issues: Vec<ValidationIssue>) -> ValidationReport {
    ValidationReport {
        dim: fan.dim,
        num_rays: fan.rays.len(),
        num_max_cones: fan.max_cones.len(),
        picard_number: fan.picard_number(),
        deep,
        issues,
    }
}

/// True iff rays `y1`, `y2` lie strictly on opposite sides of the hyperplane spanned by `facet`.
fn separates(fan: &Fan, facet: &Cone, y1: usize, y2: usize) -> bool {
    let mut rows = fan.cone_rays(facet);
    rows.push(fan.rays[y1].clone());
    let s1 = lattice::determinant(&rows);
    rows.pop();
    rows.push(fan.rays[y2].clone());
    let s2 = lattice::determinant(&rows);
    (s1.is_positive() && s2.is_negative()) || (s1.is_negative() && s2.is_positive())
}

/// Coordinates with respect to each maximal cone's generators.
pub(crate) struct PointLocator {
    // inverse[k] maps a point to its coefficients in cone k's ray basis
    inverse: Vec<Vec<Vec<Rational>>>,
}

impl PointLocator {
    pub(crate) fn new(fan: &Fan) -> Self {
        let inverse = fan
            .max_cones
            .iter()
            .map(|c| {
                let rays = fan.cone_rays(c);
                let cols: Vec<Vec<Rational>> = (0..fan.dim)
                    .map(|i| rays.iter().map(|r| Rational::from_integer(r.coords()[i].clone())).collect())
                    .collect();
                lattice::inverse(&cols).expect("maximal cones checked nondegenerate")
            })
            .collect();
        PointLocator { inverse }
    }

    pub(crate) fn coords(&self, k: usize, p: &[Rational]) -> Vec<Rational> {
        self.inverse[k].iter().map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum()).collect()
    }

    /// Number of maximal cones containing `dir` in their interior, or `None` if
    /// `dir` lies on the boundary of some cone.
    fn locate_generic(&self, dir: &LatticePoint) -> Option<usize> {
        let p = dir.to_rational();
        let mut hits = 0;
        for k in 0..self.inverse.len() {
            let lam = self.coords(k, &p);
            if lam.iter().all(Signed::is_positive) {
                hits += 1;
            } else if lam.iter().all(|x| !x.is_negative()) {
                return None;
            }
        }
        Some(hits)
    }
}

/// Exact check that cones `i` and `j` intersect in the cone spanned by their
/// shared rays. The intersection is `{x : A_i^{-1} x >= 0, A_j^{-1} x >= 0}`;
/// every extreme ray of it is cut out by `d-1` independent tight constraints,
/// so enumerating those subsets finds all extreme rays.
fn meets_in_common_face(fan: &Fan, locator: &PointLocator, i: usize, j: usize) -> bool {
    let d = fan.dim;
    let ci = &fan.max_cones[i];
    let cj = &fan.max_cones[j];
    let mut constraints: Vec<Vec<Rational>> = locator.inverse[i].clone();
    constraints.extend(locator.inverse[j].iter().cloned());
    // which coordinates of cone i belong to rays not shared with cone j
    let private_i: Vec<usize> = (0..d).filter(|&t| !cj.contains(ci.rays()[t])).collect();
    if d == 1 {
        return ci == cj || private_i.is_empty();
    }
    for subset in itertools::Itertools::combinations(0..2 * d, d - 1) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&t| constraints[t].clone()).collect();
        let ker = lattice::kernel(&rows, d);
        if ker.len() != 1 {
            continue;
        }
        for sign in [1i64, -1] {
            let x: Vec<Rational> = ker[0].iter().map(|v| v * Rational::from_integer(sign.into())).collect();
            let vals: Vec<Rational> =
                constraints.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
            if vals.iter().all(|v| !v.is_negative()) {
                // extreme ray of the intersection; it must avoid cone i's private rays
                if private_i.iter().any(|&t| !vals[t].is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// A codimension-one cone together with the two maximal cones it separates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub tau: Cone,
    pub left: usize,
    pub right: usize,
    /// `opposite[0]` completes `tau` to `left`, `opposite[1]` to `right`.
    pub opposite: [usize; 2],
}

/// Every wall exactly once, ordered by `tau`.
pub fn walls(fan: &Fan) -> Result<Vec<Wall>> {
    let mut out = Vec::new();
    for (tau, adj) in fan.facet_incidence() {
        if adj.len() != 2 {
            return Err(Error::InvalidFan(format!("facet {tau} lies in {} maximal cone(s)", adj.len())));
        }
        let (a, b) = if adj[0].0 < adj[1].0 { (adj[0], adj[1]) } else { (adj[1], adj[0]) };
        out.push(Wall { tau, left: a.0, right: b.0, opposite: [a.1, b.1] });
    }
    Ok(out)
}

/// The wall with the given `tau`, if it is one.
pub fn wall_at(fan: &Fan, tau: &Cone) -> Result<Wall> {
    if tau.dim() + 1 != fan.dim {
        return Err(Error::InvalidParameter(format!("{tau} is not a codimension-one cone")));
    }
    let adj: Vec<usize> = fan.max_cones_containing(tau);
    if adj.is_empty() {
        return Err(Error::NotACone(tau.rays().to_vec()));
    }
    if adj.len() != 2 {
        return Err(Error::InvalidFan(format!("facet {tau} lies in {} maximal cone(s)", adj.len())));
    }
    let opp = |k: usize| fan.max_cones[k].rays().iter().copied().find(|r| !tau.contains(*r)).unwrap();
    Ok(Wall { tau: tau.clone(), left: adj[0], right: adj[1], opposite: [opp(adj[0]), opp(adj[1])] })
}

/// Index of the sublattice generated by the cone's rays in the saturation of their span.
pub fn multiplicity(fan: &Fan, cone: &Cone) -> Result<BigInt> {
    lattice::sublattice_index(&fan.cone_rays(cone))
        .ok_or_else(|| Error::InvalidFan(format!("cone {cone} is not simplicial")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarRay {
    pub ray: usize,
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub image: [BigInt; 2],
}

/// Rays adjacent to a codimension-two cone `tau`, with their images in the rank-2
/// lattice `N / (span(tau) ∩ N)`, sorted counterclockwise starting at the
/// smallest ray index.
pub fn star_surface(fan: &Fan, tau: &Cone) -> Result<Vec<StarRay>> {
    if tau.dim() + 2 != fan.dim {
        return Err(Error::InvalidParameter(format!("{tau} does not have codimension two")));
    }
    if !fan.is_cone(tau) {
        return Err(Error::NotACone(tau.rays().to_vec()));
    }
    let basis = lattice::integer_kernel_basis(&fan.cone_rays(tau), fan.dim);
    if basis.len() != 2 {
        return Err(Error::InvalidFan(format!("cone {tau} is not simplicial")));
    }
    let mut star: Vec<StarRay> = fan
        .adjacent_rays(tau)
        .into_iter()
        .map(|r| {
            let v = &fan.rays[r];
            StarRay { ray: r, image: [basis[0].dot(v), basis[1].dot(v)] }
        })
        .collect();
    if star.is_empty() {
        return Ok(star);
    }
    let start = star[0].image.clone();
    star.sort_by(|a, b| angle_cmp(&start, &a.image, &b.image));
    Ok(star)
}

/// Signed area `det(u, w)` of two plane vectors.
pub fn cross(u: &[BigInt; 2], w: &[BigInt; 2]) -> BigInt {
    &u[0] * &w[1] - &u[1] * &w[0]
}

// counterclockwise angle measured from `start`, in [0, 2pi)
fn angle_cmp(start: &[BigInt; 2], a: &[BigInt; 2], b: &[BigInt; 2]) -> Ordering {
    let half = |v: &[BigInt; 2]| {
        let c = cross(start, v);
        let dot = &start[0] * &v[0] + &start[1] * &v[1];
        if c.is_zero() && dot.is_positive() {
            0
        } else if c.is_positive() {
            1
        } else if c.is_zero() {
            2
        } else {
            3
        }
    };
    half(a).cmp(&half(b)).then_with(|| match cross(a, b) {
        c if c.is_positive() => Ordering::Less,
        c if c.is_negative() => Ordering::Greater,
        _ => Ordering::Equal,
    })
}
