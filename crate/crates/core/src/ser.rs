//! Serialization helpers: big numbers are written as decimal strings so
//! reports stay exact and readable.

use std::fmt::Display;

use serde::Serializer;

pub fn display<S: Serializer, T: Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn display_seq<S: Serializer, T: Display>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}
