//! The acceptance checks, runnable from the CLI (`verify-paper`) and the test suite.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog;
use crate::error::Result;
use crate::fan::{self, Cone, Fan};
use crate::gamma2::{self, Verdict};
use crate::lattice::Rational;
use crate::singularities;
use crate::walls;

/// Seed of the generated surface family.
pub const FAMILY_SEED: u64 = 20_231_115;
pub const FAMILY_SIZE: usize = 120;
const SCALING_SEED: u64 = 0x5ca1e;
const SCALINGS_PER_LABELING: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Failures, or a one-line summary when everything passed.
    pub detail: Vec<String>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let first = self.detail.first().map(String::as_str).unwrap_or("");
        format!("[{status}] {}. {}: {first}", self.id, self.name)
    }
}

struct Checker {
    failures: Vec<String>,
    checks: usize,
}

impl Checker {
    fn new() -> Self {
        Checker { failures: Vec::new(), checks: 0 }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    /// Records an error as a failure instead of aborting the criterion.
    fn ok<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn finish(self, id: u8, name: &'static str, summary: String) -> CriterionResult {
        let passed = self.failures.is_empty();
        let detail = if passed { vec![format!("{summary} ({} checks)", self.checks)] } else { self.failures };
        CriterionResult { id, name, passed, detail }
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// The terminal Fano 4-fold end to end.
pub fn criterion_1() -> CriterionResult {
    let mut c = Checker::new();
    if let Some(e) = c.ok("construct", catalog::terminal_fano_4fold()) {
        let f = &e.fan;
        let v = fan::validate_with(f, true);
        c.check(v.is_valid(), || format!("validation issues: {:?}", v.issues));
        c.check(f.picard_number() == 2, || format!("rho = {}", f.picard_number()));
        if let Some(x) = c.ok("extremal", walls::extremal_walls_rho2(f)) {
            c.check(x.x_relation.coeffs == ints(&[2, 3, 0, -1, 2, -1]), || format!("x relation {}", x.x_relation));
            c.check(x.y_relation.coeffs == ints(&[-1, 0, 3, 2, -1, 2]), || format!("y relation {}", x.y_relation));
        }
        if let Some(s) = c.ok("singularities", singularities::gorenstein_report(f)) {
            c.check(s.terminal, || "not terminal".into());
        }
        if let Some(fano) = c.ok("fano", walls::is_fano(f)) {
            c.check(fano.is_fano, || "not Fano".into());
        }
        if let Some(v) = c.ok("gamma2 on {4,5}", gamma2::gamma2_dot_quad(f, &Cone::from([4, 5]))) {
            c.check(v == int(8), || format!("value on {{4,5}} is {v}, expected 8"));
        }
        if let Some(r) = c.ok("classify", gamma2::classify(f)) {
            c.check(r.verdict == Verdict::Positive, || format!("verdict {}", r.verdict));
        }
    }
    c.finish(1, "terminal Fano 4-fold", "value 8, verdict positive".into())
}

/// The terminal Fano d-folds for `d = 4..=10`.
pub fn criterion_2() -> CriterionResult {
    let mut c = Checker::new();
    for d in 4..=10usize {
        let Some(e) = c.ok(&format!("construct d={d}"), catalog::terminal_fano_dfold(d)) else { continue };
        let f = &e.fan;
        let expected = catalog::terminal_fano_dfold_value(d);
        let k = Rational::from_integer(BigInt::from(d) - 2);
        let factored = &k * ((&k - int(1)) * (&k - int(1)) + (&k - int(2)));
        c.check(expected == factored, || format!("d={d}: closed forms disagree"));
        if let Some(g) = c.ok(&format!("ne2 d={d}"), gamma2::ne2_generators(f)) {
            let s2 = Cone::new((1..d - 1).collect());
            c.check(g.s[1].as_ref() == Some(&s2), || format!("d={d}: S2 = {:?}, expected {s2}", g.s[1]));
            c.check(g.s[0].is_none(), || format!("d={d}: S1 should be absent"));
            if let Some(v) = c.ok(&format!("S2 value d={d}"), gamma2::gamma2_dot_quad(f, &s2)) {
                c.check(v == expected && v.is_positive(), || format!("d={d}: S2 value {v}, expected {expected}"));
            }
        }
        if d <= 6 {
            if let Some(s) = c.ok(&format!("singularities d={d}"), singularities::gorenstein_report(f)) {
                c.check(s.terminal, || format!("d={d}: not terminal"));
            }
        }
    }
    c.finish(2, "terminal Fano d-folds, d = 4..10", "S2 values match (d-2)((d-3)^2+(d-4))".into())
}

/// The Gorenstein Fano 3-fold.
pub fn criterion_3() -> CriterionResult {
    let mut c = Checker::new();
    if let Some(e) = c.ok("construct", catalog::gorenstein_fano_3fold()) {
        let f = &e.fan;
        if let Some(s) = c.ok("singularities", singularities::gorenstein_report(f)) {
            c.check(s.gorenstein_index.is_one(), || format!("Gorenstein index {}", s.gorenstein_index));
            c.check(s.singular_cones == vec![Cone::from([2, 3])], || format!("singular cones {:?}", s.singular_cones));
        }
        if let Some(v) = c.ok("gamma2 on {3}", gamma2::gamma2_dot_quad(f, &Cone::from([3]))) {
            c.check(v == int(2), || format!("value on {{3}} is {v}, expected 2"));
        }
        if let Some(r) = c.ok("classify", gamma2::classify(f)) {
            c.check(r.verdict == Verdict::Positive, || format!("verdict {}", r.verdict));
        }
    }
    c.finish(3, "Gorenstein Fano 3-fold", "index 1, value 2, verdict positive".into())
}

/// Named test surfaces plus the generated family.
pub fn test_surfaces() -> Result<Vec<Fan>> {
    let mut out =
        vec![catalog::projective_space(2)?.fan, catalog::weighted_p2_112()?.fan, catalog::product_p1_p1()?.fan];
    for a in 0..=5 {
        out.push(catalog::hirzebruch(a)?.fan);
    }
    for k in 1..=3 {
        out.push(catalog::blowup_p2(k)?.fan);
    }
    out.extend(catalog::gorenstein_surface_family(FAMILY_SEED, FAMILY_SIZE)?);
    Ok(out)
}

/// Gorenstein surfaces: `gamma_2 > 0` iff `rho = 1`.
pub fn criterion_4() -> CriterionResult {
    let mut c = Checker::new();
    let g2 = |f: &Fan| gamma2::gamma2_surface(f);
    if let Some(p2) = c.ok("P2", catalog::projective_space(2)) {
        if let Some(v) = c.ok("gamma2(P2)", g2(&p2.fan)) {
            c.check(v == int(3) && p2.fan.picard_number() == 1, || format!("gamma2(P2) = {v}"));
        }
    }
    for a in 0..=6 {
        if let Some(e) = c.ok("F_a", catalog::hirzebruch(a)) {
            if let Some(v) = c.ok("gamma2(F_a)", g2(&e.fan)) {
                c.check(v.is_zero() && e.fan.picard_number() == 2, || format!("gamma2(F_{a}) = {v}"));
            }
        }
    }
    for k in 1..=3 {
        if let Some(e) = c.ok("blowup", catalog::blowup_p2(k)) {
            if let Some(v) = c.ok("gamma2(blowup)", g2(&e.fan)) {
                c.check(!v.is_positive() && e.fan.picard_number() >= 2, || format!("gamma2(P2 blown up {k}x) = {v}"));
            }
        }
    }
    if let Some(e) = c.ok("P(1,1,2)", catalog::weighted_p2_112()) {
        if let Some(v) = c.ok("gamma2(P(1,1,2))", g2(&e.fan)) {
            c.check(v == int(3) && e.fan.picard_number() == 1, || format!("gamma2(P(1,1,2)) = {v}"));
        }
    }
    let mut rho1 = 0;
    if let Some(family) = c.ok("family", catalog::gorenstein_surface_family(FAMILY_SEED, FAMILY_SIZE)) {
        c.check(family.len() >= 100, || format!("family has only {} members", family.len()));
        for (i, f) in family.iter().enumerate() {
            if let Some(s) = c.ok("family singularities", singularities::gorenstein_report(f)) {
                c.check(s.gorenstein, || format!("family member {i} is not Gorenstein"));
            }
            if let Some(v) = c.ok("family gamma2", g2(f)) {
                let rho = f.picard_number();
                rho1 += usize::from(rho == 1);
                c.check(v.is_positive() == (rho == 1), || format!("family member {i}: rho {rho}, gamma2 {v}"));
            }
        }
    }
    c.finish(
        4,
        "Gorenstein surfaces: gamma2 > 0 iff rho = 1",
        format!("{FAMILY_SIZE} generated surfaces, {rho1} with rho = 1"),
    )
}

/// Drop identities for contractions of surface rays.
pub fn criterion_5() -> CriterionResult {
    let mut c = Checker::new();
    let mut contractions = 0usize;
    if let Some(surfaces) = c.ok("surfaces", test_surfaces()) {
        for (i, f) in surfaces.iter().enumerate() {
            for y in 0..f.rays().len() {
                let contraction = match gamma2::contract_ray(f, y) {
                    Ok(k) => k,
                    Err(crate::Error::NotContractible(..)) | Err(crate::Error::InvalidFan(_)) => continue,
                    Err(e) => {
                        c.check(false, || format!("surface {i} ray {y}: {e}"));
                        continue;
                    }
                };
                contractions += 1;
                let Some(drop) = c.ok(&format!("surface {i} ray {y}"), gamma2::gamma2_drop(f, y)) else { continue };
                let (a, b, q) = (&contraction.a, &contraction.b, &contraction.q);
                let one = BigInt::one();
                if *a == one && *b == one && *q == one {
                    c.check(drop == int(3), || format!("surface {i} ray {y}: smooth blow-down drop {drop}"));
                }
                if contraction.is_crepant() {
                    c.check(drop.is_positive() && drop <= int(3), || {
                        format!("surface {i} ray {y}: crepant drop {drop}")
                    });
                    let at_max = *a == one && *b == one;
                    c.check((drop == int(3)) == at_max, || format!("surface {i} ray {y}: drop {drop} at ({a},{b})"));
                    if let Some(fv) = c.ok("f", gamma2::f(a, b)) {
                        c.check(drop == int(2) * fv, || format!("surface {i} ray {y}: crepant drop is not 2 f(a,b)"));
                    }
                }
            }
        }
    }
    for a in 1..=50i64 {
        for b in 1..=50i64 {
            let (fa, fb) =
                (gamma2::f(&BigInt::from(a + 1), &BigInt::from(b)), gamma2::f(&BigInt::from(a), &BigInt::from(b)));
            if let (Some(x), Some(y)) = (c.ok("f", fa), c.ok("f", fb)) {
                c.check(x < y, || format!("f({}, {b}) >= f({a}, {b})", a + 1));
            }
        }
    }
    c.finish(5, "Surface contraction drop identities", format!("{contractions} contractions"))
}

/// The terminal cone family is terminal; the excluded boundary is not.
pub fn criterion_6() -> CriterionResult {
    let mut c = Checker::new();
    let mut boundary_witness = Vec::new();
    let mut cones = 0;
    for d in 3..=6usize {
        for p in 1..d {
            for cc in singularities::lemma31_range(d, p) {
                let Some(gens) = c.ok("lemma cone", singularities::lemma31_cone(d, p, cc)) else { continue };
                cones += 1;
                if let Some(t) = c.ok("terminality", singularities::is_terminal_generators(&gens)) {
                    c.check(t, || format!("d={d} p={p} c={cc} is not terminal"));
                }
            }
            let cb = (d - p + 1) as i64;
            if let Some(false) =
                c.ok("boundary", singularities::is_terminal_generators(&singularities::lemma31_generators(d, p, cb)))
            {
                boundary_witness.push(format!("(d={d},p={p})"));
            }
        }
    }
    c.check(!boundary_witness.is_empty(), || "no boundary case is non-terminal".into());
    c.finish(
        6,
        "Terminal cone family",
        format!("{cones} cones terminal; boundary non-terminal at {}", boundary_witness.join(" ")),
    )
}

/// Random positive rational with numerator and denominator in `1..=12`.
fn random_positive(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(BigInt::from(rng.random_range(1..=12)), BigInt::from(rng.random_range(1..=12)))
}

/// Sign of the quadrilateral formula is invariant under relabeling and rescaling.
pub fn criterion_7() -> CriterionResult {
    let mut c = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SCALING_SEED);
    let mut evaluations = 0usize;
    let mut surfaces = 0usize;
    if let Some(entries) = c.ok("catalog", catalog::rho2_examples()) {
        for e in &entries {
            let f = &e.fan;
            for tau in gamma2::quadrilateral_cones(f) {
                surfaces += 1;
                let Some(reference) = c.ok("canonical", gamma2::gamma2_dot_quad(f, &tau)) else { continue };
                let want = gamma2::sign(&reference);
                let Some(labelings) = c.ok("labelings", gamma2::valid_labelings(f, &tau)) else { continue };
                c.check(labelings.len() == 8, || format!("{} {tau}: {} labelings", e.name, labelings.len()));
                for labels in labelings {
                    let Some(q) = c.ok("labeled", gamma2::quad_surface_labeled(f, &tau, labels)) else { continue };
                    let k = q.coefficients();
                    for _ in 0..SCALINGS_PER_LABELING {
                        let (s, t) = (random_positive(&mut rng), random_positive(&mut rng));
                        let v = gamma2::quad_formula(&k.rescaled(&s, &t));
                        evaluations += 1;
                        c.check(gamma2::sign(&v) == want, || {
                            format!("{} {tau} labels {labels:?} scaled ({s}, {t}): {v} vs {reference}", e.name)
                        });
                    }
                }
            }
        }
    }
    c.finish(7, "Quadrilateral formula sign invariance", format!("{surfaces} surfaces, {evaluations} evaluations"))
}

/// Nonnegative decompositions of every surface, and the cited `S1`, `S3` positivity.
pub fn criterion_8() -> CriterionResult {
    let mut c = Checker::new();
    let mut decomposed = 0usize;
    if let Some(entries) = c.ok("catalog", catalog::rho2_examples()) {
        for e in &entries {
            let f = &e.fan;
            let Some(g) = c.ok("ne2", gamma2::ne2_generators(f)) else { continue };
            for tau in f.cones_of_dim(f.dim() - 2) {
                if let Some(lambda) = c.ok(&format!("{} decompose {tau}", e.name), gamma2::decompose_with(&g, f, &tau))
                {
                    decomposed += 1;
                    c.check(lambda.iter().all(|l| !l.is_negative()), || format!("{} {tau}: {lambda:?}", e.name));
                }
            }
            for k in [0, 2] {
                if let Some(s) = &g.s[k] {
                    if let Some(v) = c.ok("S value", gamma2::gamma2_dot_surface(f, s)) {
                        c.check(v.is_positive(), || format!("{}: gamma2 . S{} = {v} on {s}", e.name, k + 1));
                    }
                }
            }
        }
    }
    c.finish(8, "Surface decomposition and S1/S3 positivity", format!("{decomposed} surfaces decomposed"))
}

pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}
