mod common;

use std::sync::OnceLock;

use common::{q, surface_gamma2_oracle, terminal_oracle};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use toric_gamma2::fan::{self, cross};
use toric_gamma2::gamma2::{self, Verdict};
use toric_gamma2::lattice::{self, Rational};
use toric_gamma2::{catalog, singularities, walls, Fan, LatticePoint};

fn small_vec(d: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, d)
}

fn permuted(f: &Fan, perm: &[usize]) -> Fan {
    // new ray i is old ray perm[i]
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let rays = perm.iter().map(|&p| f.ray(p).clone()).collect();
    let cones = f.max_cones().iter().map(|c| c.rays().iter().map(|&r| inv[r]).collect()).collect();
    Fan::new(f.dim(), rays, cones).unwrap()
}

/// Product of shears `e_i += k e_j`, followed by an optional reflection.
fn unimodular(d: usize) -> impl Strategy<Value = Vec<LatticePoint>> {
    (prop::collection::vec((0..d, 0..d, -2i64..=2), 0..6), any::<bool>()).prop_map(move |(shears, flip)| {
        let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k) in shears {
            if i != j {
                let src = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(src) {
                    *x += k * y;
                }
            }
        }
        if flip {
            m[0].iter_mut().for_each(|x| *x = -*x);
        }
        m.into_iter().map(LatticePoint::from).collect()
    })
}

fn transformed(f: &Fan, rows: &[LatticePoint]) -> Fan {
    let rays = f.rays().iter().map(|r| r.transform(rows)).collect();
    let cones = f.max_cones().iter().map(|c| c.rays().to_vec()).collect();
    Fan::new(f.dim(), rays, cones).unwrap()
}

fn small_examples() -> &'static [Fan] {
    static FANS: OnceLock<Vec<Fan>> = OnceLock::new();
    FANS.get_or_init(|| {
        vec![
            catalog::terminal_fano_4fold().unwrap().fan,
            catalog::gorenstein_fano_3fold().unwrap().fan,
            catalog::terminal_fano_dfold(4).unwrap().fan,
            catalog::terminal_fano_dfold(5).unwrap().fan,
        ]
    })
}

fn perm_of(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// An example index with a relabeling of its rays.
fn example_and_perm() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..small_examples().len()).prop_flat_map(|ex| (Just(ex), perm_of(small_examples()[ex].rays().len())))
}

fn example_and_automorphism() -> impl Strategy<Value = (usize, Vec<LatticePoint>)> {
    (0..small_examples().len()).prop_flat_map(|ex| (Just(ex), unimodular(small_examples()[ex].dim())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dependency_annihilates(d in 2usize..=4, seed in prop::collection::vec(small_vec(4), 5)) {
        let vs: Vec<LatticePoint> = seed.iter().take(d + 1).map(|v| LatticePoint::from(&v[..d])).collect();
        let Ok(c) = lattice::solve_dependency(&vs) else { return Ok(()) };
        for k in 0..d {
            let s: BigInt = vs.iter().zip(&c).map(|(v, ci)| &v.coords()[k] * ci).sum();
            prop_assert!(s.is_zero());
        }
        prop_assert!(c.iter().find(|x| !x.is_zero()).unwrap().is_positive());
        let g = c.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        prop_assert!(g.is_one());
    }

    #[test]
    fn primitive_part_scales(v in small_vec(3), k in 1i64..30) {
        let p = LatticePoint::from(v);
        prop_assume!(!p.is_zero());
        let (prim, g) = lattice::primitive_part(&p).unwrap();
        let (prim_k, g_k) = lattice::primitive_part(&p.scale(&BigInt::from(k))).unwrap();
        prop_assert!(prim.is_primitive());
        prop_assert_eq!(&prim_k, &prim);
        prop_assert_eq!(g_k, g * k);
    }

    #[test]
    fn terminality_agrees_with_oracle(gens in prop::collection::vec(small_vec(3), 3), u in unimodular(3), perm in perm_of(3)) {
        let pts: Vec<LatticePoint> = gens.iter().cloned().map(LatticePoint::from).collect();
        prop_assume!(lattice::determinant(&pts) != BigInt::zero());
        let t = singularities::is_terminal_generators(&pts).unwrap();
        prop_assert_eq!(t, terminal_oracle(&gens));
        let moved: Vec<LatticePoint> = perm.iter().map(|&i| pts[i].transform(&u)).collect();
        prop_assert_eq!(singularities::is_terminal_generators(&moved).unwrap(), t);
    }

    #[test]
    fn quad_formula_is_homogeneous(ex in 0usize..4, pick in any::<prop::sample::Index>(), s in 1i64..20, t in 1i64..20, sd in 1i64..7, td in 1i64..7) {
        let f = &small_examples()[ex];
        let quads = gamma2::quadrilateral_cones(f);
        let tau = pick.get(&quads);
        let (s, t) = (Rational::new(s.into(), sd.into()), Rational::new(t.into(), td.into()));
        for labels in gamma2::valid_labelings(f, tau).unwrap() {
            let k = gamma2::quad_surface_labeled(f, tau, labels).unwrap().coefficients();
            let base = gamma2::quad_formula(&k);
            let scaled = gamma2::quad_formula(&k.rescaled(&s, &t));
            prop_assert_eq!(scaled, base * &s * &s * &t * &t);
        }
    }

    #[test]
    fn self_intersection_ignores_choice_of_m(seed in 0u64..1000, pick in any::<prop::sample::Index>(), num in -20i64..20, den in 1i64..9) {
        let fans = catalog::gorenstein_surface_family(seed, 3).unwrap();
        let f = pick.get(&fans);
        let expected = gamma2::surface_self_intersections(f).unwrap();
        let shift = Rational::new(num.into(), den.into());
        for (v, e) in expected.iter().enumerate() {
            let c = f.ray(v).coords();
            let n2 = Rational::from_integer(&c[0] * &c[0] + &c[1] * &c[1]);
            let m = [
                Rational::from_integer(c[0].clone()) / &n2 - &shift * Rational::from_integer(c[1].clone()),
                Rational::from_integer(c[1].clone()) / &n2 + &shift * Rational::from_integer(c[0].clone()),
            ];
            prop_assert_eq!(&gamma2::self_intersection_with(f, v, &m).unwrap(), e);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_nonnegative_under_relabeling((ex, perm) in example_and_perm()) {
        let f0 = &small_examples()[ex];
        let f = permuted(f0, &perm);
        let g = gamma2::ne2_generators(&f).unwrap();
        for tau in f.cones_of_dim(f.dim() - 2) {
            let lambda = gamma2::decompose_with(&g, &f, &tau).unwrap();
            prop_assert!(lambda.iter().all(|l| !l.is_negative()), "{} {:?}", tau, lambda);
        }
        prop_assert_eq!(gamma2::classify(&f).unwrap().verdict, gamma2::classify(f0).unwrap().verdict);
    }

    #[test]
    fn verdict_invariant_under_lattice_automorphism((ex, rows) in example_and_automorphism()) {
        let f0 = &small_examples()[ex];
        prop_assert!(lattice::determinant(&rows).abs().is_one());
        let f = transformed(f0, &rows);
        let (a, b) = (gamma2::classify(f0).unwrap(), gamma2::classify(&f).unwrap());
        prop_assert_eq!(a.verdict, b.verdict);
        let va: Vec<_> = a.entries.iter().map(|e| e.value().clone()).collect();
        let vb: Vec<_> = b.entries.iter().map(|e| e.value().clone()).collect();
        prop_assert_eq!(va, vb);
    }

    #[test]
    fn surface_invariants_on_random_families(seed in 0u64..5000, u in unimodular(2)) {
        for f in catalog::gorenstein_surface_family(seed, 6).unwrap() {
            let g = gamma2::gamma2_surface(&f).unwrap();
            prop_assert_eq!(&g, &surface_gamma2_oracle(&f));
            prop_assert_eq!(&gamma2::gamma2_surface(&transformed(&f, &u)).unwrap(), &g);
            let expected = if f.picard_number() == 1 { Verdict::Positive } else { Verdict::Neither };
            prop_assert!(g.is_positive() == (expected == Verdict::Positive));
            for y in 0..f.rays().len() {
                let Ok(c) = gamma2::contract_ray(&f, y) else { continue };
                let drop = gamma2::gamma2_drop(&f, y).unwrap();
                prop_assert_eq!(&drop, &gamma2::drop_formula(&c.a, &c.b, &c.q));
                if c.is_crepant() {
                    prop_assert_eq!(drop, gamma2::f(&c.a, &c.b).unwrap() * q(2));
                }
            }
        }
    }

    #[test]
    fn walls_and_relations_are_consistent((ex, perm) in example_and_perm()) {
        let f = permuted(&small_examples()[ex], &perm);
        let n = f.rays().len();
        let ws = fan::walls(&f).unwrap();
        prop_assert_eq!(ws.len() * 2, f.dim() * f.max_cones().len());
        for rel in walls::all_wall_relations(&f).unwrap() {
            for k in 0..f.dim() {
                let s: BigInt = (0..n).map(|i| rel.coeff(i) * &f.ray(i).coords()[k]).sum();
                prop_assert!(s.is_zero());
            }
            for &o in &rel.wall.opposite {
                prop_assert!(rel.coeff(o).is_positive());
            }
            prop_assert!(rel.sum().is_positive(), "not Fano at {}", rel);
        }
        for tau in f.cones_of_dim(f.dim() - 2) {
            let star = fan::star_surface(&f, &tau).unwrap();
            prop_assert!(star.len() >= 3);
            for k in 0..star.len() {
                let next = &star[(k + 1) % star.len()];
                prop_assert!(cross(&star[k].image, &next.image).is_positive());
            }
        }
    }
}

#[test]
fn terminal_oracle_sanity() {
    assert!(terminal_oracle(&[vec![1, 0], vec![0, 1]]));
    assert!(!terminal_oracle(&[vec![1, 0], vec![1, 2]]));
}
