//! Serialization helpers shared by library reports and the CLI.

use serde::Serializer;

/// Counts are emitted as decimal strings so that JSON consumers never round them.
pub fn u128_str<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
