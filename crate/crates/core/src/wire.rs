//! Serde helpers shared by the document formats: exact values always travel
//! as fraction strings.

use serde::Serializer;

use crate::algebra::{fraction_string, Rational};

pub fn ser_rational<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&fraction_string(value))
}
