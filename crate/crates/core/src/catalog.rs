//! The shipped monoid catalog.

use std::sync::Arc;

use crate::io::parse_monoid;
use crate::monoid::Monoid;

/// `(name, file text)` for every catalog monoid, sorted by name.
pub const FILES: &[(&str, &str)] = &[
    ("lz3", include_str!("../catalog/lz3.monoid")),
    ("lz4", include_str!("../catalog/lz4.monoid")),
    ("lz5", include_str!("../catalog/lz5.monoid")),
    ("nil3", include_str!("../catalog/nil3.monoid")),
    ("rz3", include_str!("../catalog/rz3.monoid")),
    ("rz4", include_str!("../catalog/rz4.monoid")),
    ("rz5", include_str!("../catalog/rz5.monoid")),
    (
        "semilattice2",
        include_str!("../catalog/semilattice2.monoid"),
    ),
    ("sym2", include_str!("../catalog/sym2.monoid")),
    ("trivial", include_str!("../catalog/trivial.monoid")),
    ("z2", include_str!("../catalog/z2.monoid")),
    ("z3", include_str!("../catalog/z3.monoid")),
    ("z4", include_str!("../catalog/z4.monoid")),
];

pub fn all() -> Vec<(&'static str, Arc<Monoid>)> {
    FILES
        .iter()
        .map(|(name, text)| {
            (
                *name,
                Arc::new(parse_monoid(text).expect("catalog files are valid")),
            )
        })
        .collect()
}

pub fn get(name: &str) -> Option<Arc<Monoid>> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| Arc::new(parse_monoid(text).expect("catalog files are valid")))
}

/// Catalog monoids with at most `max_size` elements.
pub fn up_to(max_size: usize) -> Vec<(&'static str, Arc<Monoid>)> {
    all()
        .into_iter()
        .filter(|(_, m)| m.size() <= max_size)
        .collect()
}

/// The right-zero monoid `{1, a, b}` with `xy = y` on `{a, b}`.
pub fn rz3() -> Arc<Monoid> {
    get("rz3").expect("rz3 is in the catalog")
}
