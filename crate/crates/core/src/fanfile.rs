//! The JSON fan file format.
//!
//! ```json
//! {
//!   "version": 1,
//!   "dim": 2,
//!   "rays": [
//!     [1, 0],
//!     [0, 1],
//!     [-1, -1]
//!   ],
//!   "max_cones": [
//!     [0, 1],
//!     [1, 2],
//!     [0, 2]
//!   ]
//! }
//! ```
//!
//! `version` is optional on input (only `1` is accepted); coordinates are
//! integers of any size; cone entries are 0-based ray indices. [`write_fan`]
//! produces exactly the layout above, so writing a parsed canonical file gives
//! back the same bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::LatticePoint;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFan {
    version: Option<u64>,
    dim: usize,
    rays: Vec<Vec<serde_json::Number>>,
    max_cones: Vec<Vec<usize>>,
}

/// Parses a fan file. Only shape checks are applied; run validation separately.
pub fn parse_fan(text: &str) -> Result<Fan> {
    let raw: RawFan = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(v) = raw.version {
        if v != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format version {v}")));
        }
    }
    let mut rays = Vec::with_capacity(raw.rays.len());
    for (i, r) in raw.rays.iter().enumerate() {
        let coords = r
            .iter()
            .map(|n| {
                BigInt::from_str(&n.to_string()).map_err(|_| Error::Parse(format!("ray {i}: {n} is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        rays.push(LatticePoint::new(coords));
    }
    Fan::new(raw.dim, rays, raw.max_cones)
}

/// Canonical text form: two-space indentation, one ray or cone per line, cones
/// in stored (sorted) form, trailing newline.
pub fn write_fan(fan: &Fan) -> String {
    fn rows<T: ToString>(out: &mut String, name: &str, items: impl ExactSizeIterator<Item = Vec<T>>, last: bool) {
        let n = items.len();
        let _ = write!(out, "  \"{name}\": [");
        if n == 0 {
            out.push(']');
        } else {
            out.push('\n');
            for (k, row) in items.enumerate() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                let _ = write!(out, "    [{}]", cells.join(", "));
                out.push_str(if k + 1 < n { ",\n" } else { "\n" });
            }
            out.push_str("  ]");
        }
        out.push_str(if last { "\n" } else { ",\n" });
    }
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"version\": {FORMAT_VERSION},");
    let _ = writeln!(out, "  \"dim\": {},", fan.dim());
    rows(&mut out, "rays", fan.rays().iter().map(|r| r.coords().to_vec()), false);
    rows(&mut out, "max_cones", fan.max_cones().iter().map(|c| c.rays().to_vec()), true);
    out.push_str("}\n");
    out
}
