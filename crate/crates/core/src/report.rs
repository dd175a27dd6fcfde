//! Aggregate analysis report and serde helpers that print exact numbers as strings.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::Result;
use crate::fan::{self, Fan, ValidationReport};
use crate::gamma2::{self, Gamma2Report};
use crate::lattice::Rational;
use crate::singularities::{self, SingularityReport};
use crate::walls::{self, FanoReport};

pub const SCHEMA_VERSION: u32 = 1;

/// `p/q`, or `p` when the denominator is 1.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn ser_int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_ints<S: Serializer, V: AsRef<[BigInt]>>(xs: &V, s: S) -> Result<S::Ok, S::Error> {
    let xs = xs.as_ref();
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn ser_rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(x))
}

pub fn ser_opt_rational<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&fmt_rational(x)),
        None => s.serialize_none(),
    }
}

pub fn ser_rationals<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&fmt_rational(x))?;
    }
    seq.end()
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    /// sha256 of the input bytes, when the fan came from a file.
    pub input_sha256: Option<String>,
}

impl Provenance {
    pub fn new(input_sha256: Option<String>) -> Self {
        Provenance { tool: "toric-gamma2".into(), version: env!("CARGO_PKG_VERSION").into(), input_sha256 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub structural: ValidationReport,
    pub singularity: Option<SingularityReport>,
    pub fano: Option<FanoReport>,
    pub gamma2: Option<Gamma2Report>,
}

impl Report {
    /// Runs every analysis; sections after `structural` are absent for invalid fans.
    pub fn build(fan: &Fan, deep: bool, provenance: Provenance) -> Result<Report> {
        let structural = fan::validate_with(fan, deep);
        let mut report = Report {
            schema_version: SCHEMA_VERSION,
            provenance,
            structural,
            singularity: None,
            fano: None,
            gamma2: None,
        };
        if report.structural.is_valid() {
            report.singularity = Some(singularities::gorenstein_report(fan)?);
            report.fano = Some(walls::is_fano(fan)?);
            report.gamma2 = Some(gamma2::classify(fan)?);
        }
        Ok(report)
    }

    pub fn violations(&self) -> &[String] {
        self.gamma2.as_ref().map_or(&[], |g| g.violations.as_slice())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.structural;
        let _ = writeln!(
            out,
            "fan: dim {}, {} rays, {} maximal cones, rho {}",
            s.dim, s.num_rays, s.num_max_cones, s.picard_number
        );
        if s.is_valid() {
            let _ = writeln!(out, "valid: yes{}", if s.deep { " (deep)" } else { "" });
        } else {
            let _ = writeln!(out, "valid: no");
            for issue in &s.issues {
                let _ = writeln!(out, "  - {issue}");
            }
        }
        if let Some(sing) = &self.singularity {
            let cones: Vec<String> = sing.singular_cones.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "terminal: {}", sing.terminal);
            let _ = writeln!(out, "gorenstein: {} (index {})", sing.gorenstein, sing.gorenstein_index);
            let _ = writeln!(
                out,
                "singular cones: {}",
                if cones.is_empty() { "none".to_string() } else { cones.join(" ") }
            );
        }
        if let Some(f) = &self.fano {
            let _ = writeln!(out, "fano: {}", f.is_fano);
        }
        if let Some(g) = &self.gamma2 {
            let _ = writeln!(out, "gamma2 verdict: {} ({})", g.verdict, g.method);
            for e in &g.entries {
                let mut line = format!("  {} tau={}", e.label, e.tau);
                if let Some(v) = &e.formula_value {
                    let _ = write!(line, " formula={}", fmt_rational(v));
                }
                if let Some(v) = &e.exact_value {
                    let _ = write!(line, " exact={}", fmt_rational(v));
                }
                let sign = match e.sign {
                    1 => "+",
                    0 => "0",
                    _ => "-",
                };
                let _ = writeln!(out, "{line} sign={sign}");
            }
            if let Some(n) = &g.note {
                let _ = writeln!(out, "  note: {n}");
            }
            for v in &g.violations {
                let _ = writeln!(out, "  VIOLATION: {v}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice::rat;

    #[test]
    fn rationals_print_exactly() {
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&rat(-8, 1)), "-8");
        assert_eq!(fmt_rational(&rat(0, 5)), "0");
    }

    #[test]
    fn report_is_deterministic() {
        let f = catalog::gorenstein_fano_3fold().unwrap().fan;
        let a = Report::build(&f, true, Provenance::new(Some("x".into()))).unwrap().to_json();
        let b = Report::build(&f, true, Provenance::new(Some("x".into()))).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"verdict\": \"positive\""));
        assert!(a.contains("\"formula_value\": \"2\""));
    }

    #[test]
    fn invalid_fans_only_get_structure() {
        let f = Fan::new(2, vec![[1, 0].into(), [0, 1].into(), [-1, -1].into()], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let r = Report::build(&f, false, Provenance::new(None)).unwrap();
        assert!(!r.structural.is_valid());
        assert!(r.gamma2.is_none());
        assert!(r.to_text().contains("valid: no"));
    }
}
