//! `gamma_2 = sum_v D_v^2` on torus-invariant surfaces, and the positivity classifier.
//!
//! Only torus-invariant surfaces are examined; the cone of effective 2-cycles of
//! a toric variety is generated by them.

pub mod intersection;
pub mod ne2;
pub mod quad;
pub mod surface;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::lattice::Rational;

pub use intersection::{gamma2_dot_surface, sign, Intersections};
pub use ne2::{decompose_surface_rho2, decompose_with, ne2_generators, Ne2Generators};
pub use quad::{
    gamma2_dot_quad, quad_formula, quad_surface, quad_surface_labeled, quadrilateral_cones, valid_labelings,
    QuadCoefficients, QuadSurface,
};
pub use surface::{
    contract_ray, crepant_resolution_surface, cyclic_rays, drop_formula, f, gamma2_drop, gamma2_surface, insert_ray,
    self_intersection_with, surface_self_intersections, Contraction,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Positive,
    NefNotPositive,
    Neither,
    Unsupported,
}

impl Verdict {
    /// Verdict from a list of values: positive iff all are `> 0`, nef iff all are `>= 0`.
    pub fn from_values<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Verdict {
        let mut zero = false;
        for v in values {
            if v.is_negative() {
                return Verdict::Neither;
            }
            zero |= v.is_zero();
        }
        if zero {
            Verdict::NefNotPositive
        } else {
            Verdict::Positive
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::NefNotPositive => "nef-not-positive",
            Verdict::Neither => "neither",
            Verdict::Unsupported => "unsupported",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated surface.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceEntry {
    pub label: String,
    pub tau: Cone,
    /// Quadrilateral formula value (a positive multiple of `gamma_2 . S`), when the star is a quadrilateral.
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub formula_value: Option<Rational>,
    /// Exact `gamma_2 . S` from intersection numbers.
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub exact_value: Option<Rational>,
    pub sign: i8,
}

impl SurfaceEntry {
    fn evaluate(fan: &Fan, label: String, tau: Cone) -> Result<SurfaceEntry> {
        let formula_value = match quad::gamma2_dot_quad(fan, &tau) {
            Ok(v) => Some(v),
            Err(Error::UnsupportedSurface { .. }) => None,
            Err(e) => return Err(e),
        };
        let exact = intersection::gamma2_dot_surface(fan, &tau)?;
        let s = sign(&exact);
        if let Some(v) = &formula_value {
            if sign(v) != s {
                return Err(Error::Invariant(format!(
                    "quadrilateral formula gives {v} on {tau} but the intersection number is {exact}"
                )));
            }
        }
        Ok(SurfaceEntry { label, tau, formula_value, exact_value: Some(exact), sign: s })
    }

    /// The formula value when available, otherwise the exact value.
    pub fn value(&self) -> &Rational {
        self.formula_value.as_ref().or(self.exact_value.as_ref()).expect("entry without a value")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Gamma2Report {
    pub method: String,
    pub entries: Vec<SurfaceEntry>,
    pub verdict: Verdict,
    /// Checked expectations that failed (reported, not absorbed).
    pub violations: Vec<String>,
    pub note: Option<String>,
}

impl Gamma2Report {
    fn unsupported(method: &str, note: String) -> Gamma2Report {
        Gamma2Report {
            method: method.into(),
            entries: Vec::new(),
            verdict: Verdict::Unsupported,
            violations: Vec::new(),
            note: Some(note),
        }
    }

    pub fn entry(&self, label: &str) -> Option<&SurfaceEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

/// Picard rank 2, `d >= 3`: evaluate `gamma_2` on the generators `S1`, `S2`, `S3`.
pub fn classify_gamma2_rho2(fan: &Fan) -> Result<Gamma2Report> {
    let g = ne2::ne2_generators(fan)?;
    let present: Vec<(usize, Cone)> = g.s.iter().enumerate().filter_map(|(k, c)| c.clone().map(|c| (k, c))).collect();
    let entries: Vec<SurfaceEntry> = present
        .into_par_iter()
        .map(|(k, tau)| SurfaceEntry::evaluate(fan, format!("S{}", k + 1), tau))
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    for e in &entries {
        if e.label != "S2" && e.sign <= 0 {
            violations.push(format!("expected gamma_2 . {} > 0 on {}, got {}", e.label, e.tau, e.value()));
        }
    }
    let verdict = Verdict::from_values(entries.iter().map(SurfaceEntry::value));
    Ok(Gamma2Report {
        method: "ne2-generators".into(),
        entries,
        verdict,
        violations,
        note: Some("verdict covers the generators of the cone of torus-invariant surfaces".into()),
    })
}

/// Dispatch on dimension and Picard number.
pub fn classify(fan: &Fan) -> Result<Gamma2Report> {
    let (d, rho) = (fan.dim(), fan.picard_number());
    if d == 2 {
        let value = surface::gamma2_surface(fan)?;
        let entry = SurfaceEntry {
            label: "S".into(),
            tau: Cone::empty(),
            formula_value: None,
            sign: sign(&value),
            exact_value: Some(value),
        };
        let verdict = Verdict::from_values([entry.value()]);
        return Ok(Gamma2Report {
            method: "surface".into(),
            entries: vec![entry],
            verdict,
            violations: Vec::new(),
            note: None,
        });
    }
    if d < 2 {
        return Ok(Gamma2Report::unsupported("none", format!("dimension {d}")));
    }
    match rho {
        2 => classify_gamma2_rho2(fan),
        1 => {
            if quad::quadrilateral_cones(fan).is_empty() {
                return Ok(Gamma2Report::unsupported("rho1-surfaces", "no quadrilateral surface to evaluate".into()));
            }
            let entries: Vec<SurfaceEntry> = fan
                .cones_of_dim(d - 2)
                .into_par_iter()
                .map(|tau| SurfaceEntry::evaluate(fan, format!("V{tau}"), tau))
                .collect::<Result<_>>()?;
            // a negative surface is a definite witness; anything else short of
            // strict positivity is left undecided
            let verdict = match Verdict::from_values(entries.iter().map(SurfaceEntry::value)) {
                Verdict::NefNotPositive => Verdict::Unsupported,
                v => v,
            };
            let note = (verdict == Verdict::Unsupported)
                .then(|| "Picard number 1 with a zero surface value is not decided".to_string());
            Ok(Gamma2Report { method: "rho1-surfaces".into(), entries, verdict, violations: Vec::new(), note })
        }
        _ => Ok(Gamma2Report::unsupported("none", format!("Picard number {rho} in dimension {d}"))),
    }
}
