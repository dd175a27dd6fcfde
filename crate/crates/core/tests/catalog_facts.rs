mod common;

use std::collections::BTreeMap;

use common::{surface_self_intersections_oracle, terminal_oracle};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use toric_gamma2::catalog::{self, CatalogEntry};
use toric_gamma2::fan::{self, cross};
use toric_gamma2::gamma2;
use toric_gamma2::lattice::Rational;
use toric_gamma2::walls::{self, ClassCoordinates};
use toric_gamma2::{singularities, Cone};

fn all_entries() -> Vec<CatalogEntry> {
    let mut out = catalog::rho2_examples().unwrap();
    let p = |k: &str, v: i64| BTreeMap::from([(k.to_string(), v)]);
    for d in 2..=5 {
        out.push(catalog::lookup("projective-space", &p("d", d)).unwrap());
    }
    for a in 0..=4 {
        out.push(catalog::lookup("hirzebruch", &p("a", a)).unwrap());
    }
    for k in 0..=3 {
        out.push(catalog::lookup("blowup-p2", &p("k", k)).unwrap());
    }
    out.push(catalog::lookup("p1xp1", &BTreeMap::new()).unwrap());
    out.push(catalog::lookup("weighted-p2-112", &BTreeMap::new()).unwrap());
    out
}

#[test]
fn every_stored_fact_is_rederived() {
    for entry in all_entries() {
        let f = &entry.fan;
        let x = &entry.expected;
        let name = format!("{} {:?}", entry.name, entry.params);
        let report = fan::validate_with(f, f.dim() <= 5);
        assert!(report.is_valid(), "{name}: {:?}", report.issues);
        assert_eq!(f.picard_number(), x.picard_number, "{name}");
        let sing = singularities::gorenstein_report(f).unwrap();
        if let Some(t) = x.terminal {
            assert_eq!(sing.terminal, t, "{name}");
        }
        if let Some(g) = x.gorenstein {
            assert_eq!(sing.gorenstein, g, "{name}");
        }
        if let Some(fano) = x.fano {
            assert_eq!(walls::is_fano(f).unwrap().is_fano, fano, "{name}");
        }
        if let Some(v) = x.verdict {
            assert_eq!(gamma2::classify(f).unwrap().verdict, v, "{name}");
        }
        for fx in &x.fixtures {
            let got = if f.dim() == 2 {
                gamma2::gamma2_surface(f).unwrap()
            } else {
                gamma2::gamma2_dot_quad(f, &fx.tau).unwrap()
            };
            assert_eq!(got, fx.value, "{name} at {}", fx.tau);
        }
        if let Some(cones) = &x.singular_cones {
            assert_eq!(&sing.singular_cones, cones, "{name}");
        }
        if let Some((xr, yr)) = &x.extremal {
            let pair = walls::extremal_walls_rho2(f).unwrap();
            let to = |v: &Vec<i64>| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
            assert_eq!(pair.x_relation.coeffs, to(xr), "{name}");
            assert_eq!(pair.y_relation.coeffs, to(yr), "{name}");
        }
    }
}

#[test]
fn terminal_claims_match_brute_force() {
    for entry in all_entries().into_iter().filter(|e| e.fan.dim() <= 5) {
        let f = &entry.fan;
        let oracle = f.max_cones().iter().all(|c| {
            let gens: Vec<Vec<i64>> = f.cone_rays(c).iter().map(common::coords_i64).collect();
            terminal_oracle(&gens)
        });
        assert_eq!(singularities::gorenstein_report(f).unwrap().terminal, oracle, "{}", entry.name);
    }
}

#[test]
fn four_fold_singular_locus_sits_inside_the_two_surfaces() {
    let f = catalog::terminal_fano_4fold().unwrap().fan;
    let sing = singularities::gorenstein_report(&f).unwrap();
    let (s15, s46) = (Cone::from([0, 4]), Cone::from([3, 5]));
    assert!(!sing.singular_cones.is_empty());
    for c in &sing.singular_cones {
        assert!(s15.is_face_of(c) || s46.is_face_of(c), "{c}");
    }
    // both surfaces are cones of the fan but are themselves smooth
    assert!(fan::multiplicity(&f, &s15).unwrap().is_one());
    assert!(fan::multiplicity(&f, &s46).unwrap().is_one());
    assert!(!singularities::has_centrally_symmetric_pair(&f));
}

#[test]
fn wall_classes_lie_in_the_extremal_cone() {
    for entry in catalog::rho2_examples().unwrap() {
        let f = &entry.fan;
        let coords = ClassCoordinates::new(f).unwrap();
        let pair = walls::extremal_walls_rho2(f).unwrap();
        let two = |v: Vec<BigInt>| [v[0].clone(), v[1].clone()];
        let ex = two(coords.of(&pair.x_relation));
        let ey = two(coords.of(&pair.y_relation));
        let orient = cross(&ex, &ey);
        assert!(!orient.is_zero());
        for rel in walls::all_wall_relations(f).unwrap() {
            let w = two(coords.of(&rel));
            assert!(!(cross(&ex, &w) * &orient).is_negative(), "{}: {rel}", entry.name);
            assert!(!(cross(&w, &ey) * &orient).is_negative(), "{}: {rel}", entry.name);
        }
        for &i in &pair.x_side {
            assert!(pair.x_relation.coeff(i).is_positive());
            assert!(!pair.y_relation.coeff(i).is_positive());
        }
        for &j in &pair.y_side {
            assert!(pair.y_relation.coeff(j).is_positive());
            assert!(!pair.x_relation.coeff(j).is_positive());
        }
    }
}

#[test]
fn fano_matches_self_intersection_bound_on_smooth_surfaces() {
    let mut fans: Vec<_> = all_entries().into_iter().filter(|e| e.fan.dim() == 2).map(|e| e.fan).collect();
    fans.extend(catalog::gorenstein_surface_family(7, 40).unwrap());
    let mut smooth = 0;
    for f in fans {
        let sing = singularities::gorenstein_report(&f).unwrap();
        if !sing.singular_cones.is_empty() {
            continue;
        }
        smooth += 1;
        let bound = surface_self_intersections_oracle(&f).iter().all(|d| *d >= -Rational::one());
        assert_eq!(walls::is_fano(&f).unwrap().is_fano, bound);
    }
    assert!(smooth >= 10);
}
