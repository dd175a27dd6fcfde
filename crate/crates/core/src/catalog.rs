//! Built-in fans: the three Picard-rank-2 examples, classical reference fans,
//! and a seeded generator of Gorenstein toric surfaces.
//!
//! The examples are known only through their rays. Their maximal cones are
//! reconstructed as all sets "rays minus one x-side ray minus one y-side ray";
//! construction fails unless the result is a valid fan whose extremal wall
//! relations are exactly the expected ones.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{self, Cone, Fan};
use crate::gamma2::{self, Verdict};
use crate::lattice::{LatticePoint, Rational};
use crate::singularities;
use crate::walls;

/// A stored claim about a value of the `gamma_2` classifier.
#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    /// Codimension-two cone; empty for a surface.
    pub tau: Cone,
    /// Quadrilateral formula value for `d >= 3`, `gamma_2` itself for surfaces.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: Rational,
}

/// Claims attached to an entry. Tests re-derive every one of them.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ExpectedFacts {
    pub picard_number: usize,
    pub terminal: Option<bool>,
    pub gorenstein: Option<bool>,
    pub fano: Option<bool>,
    pub verdict: Option<Verdict>,
    pub fixtures: Vec<Fixture>,
    pub singular_cones: Option<Vec<Cone>>,
    /// Extremal relations `(x, y)` as coefficient vectors.
    pub extremal: Option<(Vec<i64>, Vec<i64>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, i64>,
    #[serde(skip)]
    pub fan: Fan,
    pub expected: ExpectedFacts,
    /// True when the maximal cones were inferred from the rays.
    pub reconstructed: bool,
}

fn points(rows: &[Vec<i64>]) -> Vec<LatticePoint> {
    rows.iter().map(|r| LatticePoint::from(r.clone())).collect()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Maximal cones `G \ {x, y}` for `x` in `xs`, `y` in `ys`.
pub fn omit_one_each(num_rays: usize, xs: &[usize], ys: &[usize]) -> Vec<Vec<usize>> {
    xs.iter().cartesian_product(ys).map(|(&x, &y)| (0..num_rays).filter(|&r| r != x && r != y).collect()).collect()
}

fn reconstruct_rho2(
    dim: usize,
    rays: Vec<LatticePoint>,
    xs: &[usize],
    ys: &[usize],
    extremal: &(Vec<i64>, Vec<i64>),
) -> Result<Fan> {
    let cones = omit_one_each(rays.len(), xs, ys);
    let fan = Fan::validated(dim, rays, cones)?;
    let e = walls::extremal_walls_rho2(&fan)?;
    if e.x_relation.coeffs != ints(&extremal.0) || e.y_relation.coeffs != ints(&extremal.1) {
        return Err(Error::Invariant(format!(
            "reconstructed fan has extremal relations {} and {}, not the expected pair",
            e.x_relation, e.y_relation
        )));
    }
    Ok(fan)
}

fn entry(name: &str, params: &[(&str, i64)], fan: Fan, expected: ExpectedFacts, reconstructed: bool) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        fan,
        expected,
        reconstructed,
    }
}

fn fixture(tau: &[usize], value: Rational) -> Fixture {
    Fixture { tau: Cone::from(tau), value }
}

/// The terminal Fano 4-fold with rays `e_1..e_4, (-1,-2,-1,0), (0,-1,-2,-1)`.
pub fn terminal_fano_4fold() -> Result<CatalogEntry> {
    let rays = points(&[
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
        vec![-1, -2, -1, 0],
        vec![0, -1, -2, -1],
    ]);
    let extremal = (vec![2, 3, 0, -1, 2, -1], vec![-1, 0, 3, 2, -1, 2]);
    let fan = reconstruct_rho2(4, rays, &[0, 1, 4], &[2, 3, 5], &extremal)?;
    let expected = ExpectedFacts {
        picard_number: 2,
        terminal: Some(true),
        gorenstein: None,
        fano: Some(true),
        verdict: Some(Verdict::Positive),
        fixtures: vec![fixture(&[4, 5], Rational::from_integer(8.into()))],
        singular_cones: None,
        extremal: Some(extremal),
    };
    Ok(entry("terminal-fano-4fold", &[], fan, expected, true))
}

/// `(d-2)^3 - (d-2)(d-1)`.
pub fn terminal_fano_dfold_value(d: usize) -> Rational {
    let k = BigInt::from(d) - 2;
    Rational::from_integer(&k * &k * &k - &k * (BigInt::from(d) - 1))
}

/// The terminal Fano `d`-fold family (`d >= 4`). Ray order: `x_1..x_d, y_1, y_2`.
pub fn terminal_fano_dfold(d: usize) -> Result<CatalogEntry> {
    if d < 4 {
        return Err(Error::InvalidParameter(format!("terminal-fano-dfold needs d >= 4, got {d}")));
    }
    let unit = |i: usize| -> Vec<i64> { (0..d).map(|k| i64::from(k == i)).collect() };
    let mut rows: Vec<Vec<i64>> = (0..d - 2).map(unit).collect();
    let mut x_dm1 = vec![0i64; d];
    x_dm1[..d - 2].iter_mut().for_each(|c| *c = -1);
    x_dm1[d - 2] = -(d as i64 - 2);
    rows.push(x_dm1);
    rows.push(unit(d - 2));
    let mut y1 = vec![0i64; d];
    y1[d - 2] = -1;
    y1[d - 1] = -1;
    rows.push(y1);
    rows.push(unit(d - 1));

    let k = d as i64 - 2;
    let mut x_rel = vec![1i64; d - 1];
    x_rel.extend([k, 0, 0]);
    let mut y_rel = vec![-1i64; d - 1];
    y_rel.extend([0, k, k]);
    let extremal = (x_rel, y_rel);
    let xs: Vec<usize> = (0..d).collect();
    let fan = reconstruct_rho2(d, points(&rows), &xs, &[d, d + 1], &extremal)?;
    let expected = ExpectedFacts {
        picard_number: 2,
        terminal: Some(true),
        gorenstein: None,
        fano: Some(true),
        verdict: Some(Verdict::Positive),
        fixtures: vec![Fixture { tau: Cone::new((1..d - 1).collect()), value: terminal_fano_dfold_value(d) }],
        singular_cones: Some(vec![Cone::new((0..d - 1).collect())]),
        extremal: Some(extremal),
    };
    Ok(entry("terminal-fano-dfold", &[("d", d as i64)], fan, expected, true))
}

/// The Gorenstein Fano 3-fold with rays `e_1, e_2, e_3, (0,-2,-1), (-1,-1,0)`.
pub fn gorenstein_fano_3fold() -> Result<CatalogEntry> {
    let rays = points(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, -2, -1], vec![-1, -1, 0]]);
    let extremal = (vec![2, 0, -1, -1, 2], vec![0, 2, 1, 1, 0]);
    let fan = reconstruct_rho2(3, rays, &[0, 4], &[1, 2, 3], &extremal)?;
    let expected = ExpectedFacts {
        picard_number: 2,
        terminal: None,
        gorenstein: Some(true),
        fano: Some(true),
        verdict: Some(Verdict::Positive),
        fixtures: vec![fixture(&[3], Rational::from_integer(2.into()))],
        singular_cones: Some(vec![Cone::from([2, 3])]),
        extremal: Some(extremal),
    };
    Ok(entry("gorenstein-fano-3fold", &[], fan, expected, true))
}

pub fn projective_space(d: usize) -> Result<CatalogEntry> {
    if d < 1 {
        return Err(Error::InvalidParameter("projective space needs d >= 1".into()));
    }
    let mut rows: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|k| i64::from(k == i)).collect()).collect();
    rows.push(vec![-1; d]);
    let cones: Vec<Vec<usize>> = (0..=d).combinations(d).collect();
    let fan = Fan::validated(d, points(&rows), cones)?;
    let mut expected = ExpectedFacts {
        picard_number: 1,
        terminal: Some(true),
        gorenstein: Some(true),
        fano: Some(true),
        singular_cones: Some(Vec::new()),
        ..Default::default()
    };
    if d == 2 {
        expected.verdict = Some(Verdict::Positive);
        expected.fixtures = vec![fixture(&[], Rational::from_integer(3.into()))];
    }
    Ok(entry("projective-space", &[("d", d as i64)], fan, expected, false))
}

fn smooth_surface(
    name: &str,
    params: &[(&str, i64)],
    rows: &[Vec<i64>],
    gamma2: i64,
    fano: bool,
) -> Result<CatalogEntry> {
    let n = rows.len();
    let fan = fan_from_cycle(points(rows))?;
    let expected = ExpectedFacts {
        picard_number: n - 2,
        terminal: Some(true),
        gorenstein: Some(true),
        fano: Some(fano),
        verdict: Some(if gamma2 > 0 {
            Verdict::Positive
        } else if gamma2 == 0 {
            Verdict::NefNotPositive
        } else {
            Verdict::Neither
        }),
        fixtures: vec![fixture(&[], Rational::from_integer(gamma2.into()))],
        singular_cones: Some(Vec::new()),
        extremal: None,
    };
    Ok(entry(name, params, fan, expected, false))
}

/// A complete surface fan from rays listed counterclockwise.
pub fn fan_from_cycle(rays: Vec<LatticePoint>) -> Result<Fan> {
    let n = rays.len();
    let cones = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Fan::validated(2, rays, cones)
}

/// Hirzebruch surface `F_a` with rays `(1,0), (0,1), (-1,a), (0,-1)`.
pub fn hirzebruch(a: i64) -> Result<CatalogEntry> {
    if a < 0 {
        return Err(Error::InvalidParameter(format!("hirzebruch needs a >= 0, got {a}")));
    }
    smooth_surface("hirzebruch", &[("a", a)], &[vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]], 0, a <= 1)
}

pub fn product_p1_p1() -> Result<CatalogEntry> {
    smooth_surface("p1xp1", &[], &[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], 0, true)
}

/// `P^2` blown up at `k <= 3` torus-fixed points.
pub fn blowup_p2(k: usize) -> Result<CatalogEntry> {
    let rows: Vec<Vec<i64>> = match k {
        0 => vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        1 => vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, -1]],
        2 => vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![-1, -1]],
        3 => vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![-1, -1], vec![0, -1]],
        _ => return Err(Error::InvalidParameter(format!("blowup-p2 supports k <= 3, got {k}"))),
    };
    smooth_surface("blowup-p2", &[("k", k as i64)], &rows, 3 - 3 * k as i64, true)
}

/// `P(1,1,2)` with rays `(0,1), (1,0), (-1,-2)`.
pub fn weighted_p2_112() -> Result<CatalogEntry> {
    let fan =
        Fan::validated(2, points(&[vec![0, 1], vec![1, 0], vec![-1, -2]]), vec![vec![0, 1], vec![1, 2], vec![0, 2]])?;
    let expected = ExpectedFacts {
        picard_number: 1,
        terminal: Some(false),
        gorenstein: Some(true),
        fano: Some(true),
        verdict: Some(Verdict::Positive),
        fixtures: vec![fixture(&[], Rational::from_integer(3.into()))],
        singular_cones: Some(vec![Cone::from([1, 2])]),
        extremal: None,
    };
    Ok(entry("weighted-p2-112", &[], fan, expected, false))
}

pub const NAMES: &[&str] = &[
    "terminal-fano-4fold",
    "terminal-fano-dfold",
    "gorenstein-fano-3fold",
    "projective-space",
    "hirzebruch",
    "weighted-p2-112",
    "p1xp1",
    "blowup-p2",
];

pub fn names() -> &'static [&'static str] {
    NAMES
}

/// Looks up an entry by name; missing parameters take their defaults
/// (`d = 4` for the `d`-fold family, `d = 2`, `a = 1`, `k = 1` otherwise).
pub fn lookup(name: &str, params: &BTreeMap<String, i64>) -> Result<CatalogEntry> {
    let allowed: &[&str] = match name {
        "terminal-fano-dfold" | "projective-space" => &["d"],
        "hirzebruch" => &["a"],
        "blowup-p2" => &["k"],
        _ => &[],
    };
    if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("{name} has no parameter {bad}")));
    }
    let get = |k: &str, default: i64| params.get(k).copied().unwrap_or(default);
    let nonneg = |k: &str, v: i64| -> Result<usize> {
        usize::try_from(v).map_err(|_| Error::InvalidParameter(format!("{k} must be nonnegative, got {v}")))
    };
    match name {
        "terminal-fano-4fold" => terminal_fano_4fold(),
        "terminal-fano-dfold" => terminal_fano_dfold(nonneg("d", get("d", 4))?),
        "gorenstein-fano-3fold" => gorenstein_fano_3fold(),
        "projective-space" => projective_space(nonneg("d", get("d", 2))?),
        "hirzebruch" => hirzebruch(get("a", 1)),
        "weighted-p2-112" => weighted_p2_112(),
        "p1xp1" => product_p1_p1(),
        "blowup-p2" => blowup_p2(nonneg("k", get("k", 1))?),
        _ => Err(Error::InvalidParameter(format!("unknown catalog entry {name:?} (known: {})", NAMES.join(", ")))),
    }
}

/// The Picard-rank-2 examples used by the acceptance checks (`d`-fold family for `d = 4..=10`).
pub fn rho2_examples() -> Result<Vec<CatalogEntry>> {
    let mut out = vec![terminal_fano_4fold()?, gorenstein_fano_3fold()?];
    for d in 4..=10 {
        out.push(terminal_fano_dfold(d)?);
    }
    Ok(out)
}

/// Gorenstein surfaces of Picard number one used to seed [`gorenstein_surface_family`].
pub fn gorenstein_surface_seeds() -> Result<Vec<Fan>> {
    let cycles: [&[[i64; 2]]; 7] = [
        &[[1, 0], [0, 1], [-1, -1]],
        &[[1, 0], [0, 1], [-1, -2]],
        &[[1, 0], [0, 1], [-2, -3]],
        &[[2, -1], [-1, 2], [-1, -1]],
        &[[1, 0], [0, 1], [-1, 0], [0, -1]],
        &[[1, 0], [0, 1], [-1, 1], [0, -1]],
        &[[1, 0], [0, 1], [-1, 2], [0, -1]],
    ];
    cycles.iter().map(|c| fan_from_cycle(c.iter().map(|&p| LatticePoint::from(p)).collect())).collect()
}

const FAMILY_MAX_RAYS: usize = 12;

/// A deterministic family of `count` Gorenstein toric surfaces: the seeds, then
/// random smooth blow-ups, crepant subdivisions and Gorenstein-preserving
/// contractions of earlier members.
pub fn gorenstein_surface_family(seed: u64, count: usize) -> Result<Vec<Fan>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family = gorenstein_surface_seeds()?;
    let mut attempts = 0usize;
    while family.len() < count {
        attempts += 1;
        if attempts > 200 * count.max(1) {
            return Err(Error::Invariant("surface family generator stalled".into()));
        }
        let base = family[rng.random_range(0..family.len())].clone();
        let candidate = match rng.random_range(0..3) {
            0 => random_blowup(&base, &mut rng),
            1 => random_crepant_subdivision(&base, &mut rng),
            _ => random_contraction(&base, &mut rng),
        };
        let Some(candidate) = candidate? else { continue };
        if candidate.rays().len() > FAMILY_MAX_RAYS || !singularities::gorenstein_report(&candidate)?.gorenstein {
            continue;
        }
        if family.iter().any(|f| same_surface(f, &candidate)) {
            continue;
        }
        family.push(candidate);
    }
    family.truncate(count);
    Ok(family)
}

// same ray set
fn same_surface(a: &Fan, b: &Fan) -> bool {
    let mut ra = a.rays().to_vec();
    let mut rb = b.rays().to_vec();
    ra.sort();
    rb.sort();
    ra == rb
}

fn random_blowup(fan: &Fan, rng: &mut ChaCha8Rng) -> Result<Option<Fan>> {
    let smooth: Vec<&Cone> =
        fan.max_cones().iter().filter(|c| fan::multiplicity(fan, c).is_ok_and(|m| m == BigInt::from(1))).collect();
    if smooth.is_empty() {
        return Ok(None);
    }
    let cone = smooth[rng.random_range(0..smooth.len())];
    let v = fan.ray(cone.rays()[0]).add(fan.ray(cone.rays()[1]));
    gamma2::insert_ray(fan, cone, v).map(Some)
}

fn random_crepant_subdivision(fan: &Fan, rng: &mut ChaCha8Rng) -> Result<Option<Fan>> {
    let mut options = Vec::new();
    for cone in fan.max_cones() {
        let (u, w) = (fan.ray(cone.rays()[0]), fan.ray(cone.rays()[1]));
        let step = w.sub(u);
        let g = step.content();
        let unit = LatticePoint::new(step.coords().iter().map(|c| c / &g).collect());
        let mut p = u.clone();
        let mut k = BigInt::from(1);
        while k < g {
            p = p.add(&unit);
            options.push((cone.clone(), p.clone()));
            k += 1;
        }
    }
    if options.is_empty() {
        return Ok(None);
    }
    let (cone, v) = options.swap_remove(rng.random_range(0..options.len()));
    gamma2::insert_ray(fan, &cone, v).map(Some)
}

fn random_contraction(fan: &Fan, rng: &mut ChaCha8Rng) -> Result<Option<Fan>> {
    if fan.rays().len() <= 3 {
        return Ok(None);
    }
    let y = rng.random_range(0..fan.rays().len());
    match gamma2::contract_ray(fan, y) {
        Ok(c) => Ok(Some(c.fan)),
        Err(Error::NotContractible(..)) | Err(Error::InvalidFan(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
