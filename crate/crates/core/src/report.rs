//! Stable numeric formatting for machine-readable output.

use serde::{Serialize, Serializer};

/// Rounds to 9 significant digits.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Shortest decimal text of `x` rounded to 9 significant digits.
pub fn sig9(x: f64) -> String {
    round_sig9(x).to_string()
}

/// JSON number rounded to 9 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig9(pub f64);

impl Serialize for Sig9 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(round_sig9(self.0))
    }
}
