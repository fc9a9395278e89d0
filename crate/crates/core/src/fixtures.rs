//! Shared test rings.

use crate::algebra::{build_algebra, ARing, RingSpec};

pub fn ring_spec(
    name: &str,
    vars: &[&str],
    relations: &[&str],
    graded: bool,
    truncate: Option<usize>,
) -> RingSpec {
    RingSpec {
        name: name.into(),
        characteristic: 7,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        relations: relations.iter().map(|s| s.to_string()).collect(),
        graded,
        truncate,
        degree_cap: None,
    }
}

/// k[x,y]/(x^2, y^2): the multiplicity-4 complete intersection.
pub fn x2y2() -> ARing {
    build_algebra(&ring_spec("x2y2", &["x", "y"], &["x^2", "y^2"], true, None)).unwrap()
}

/// k[x,y]/(x,y)^2: the square-zero maximal ideal ring.
pub fn m2zero() -> ARing {
    build_algebra(&ring_spec(
        "m2zero",
        &["x", "y"],
        &["x^2", "x*y", "y^2"],
        true,
        None,
    ))
    .unwrap()
}

/// k[x,y,z]/(x^2, y^2, z^2, yz): short non-CI with Hilbert [1,3,2].
pub fn h132() -> ARing {
    build_algebra(&ring_spec(
        "h132",
        &["x", "y", "z"],
        &["x^2", "y^2", "z^2", "y*z"],
        true,
        None,
    ))
    .unwrap()
}

/// k[x,y]/(x^4, y^2): monomial CI of dimension 8.
pub fn x4y2() -> ARing {
    build_algebra(&ring_spec("x4y2", &["x", "y"], &["x^4", "y^2"], true, None)).unwrap()
}

/// k[z]/(z^3).
pub fn z3() -> ARing {
    build_algebra(&ring_spec("z3", &["z"], &["z^3"], true, None)).unwrap()
}

/// k[u,v]/(u^2, v^2): the CI-4 ring on disjoint variable names.
pub fn uv22() -> ARing {
    build_algebra(&ring_spec("uv22", &["u", "v"], &["u^2", "v^2"], true, None)).unwrap()
}

/// The field k itself.
pub fn field_k() -> ARing {
    build_algebra(&ring_spec("k", &["t"], &["t"], true, None)).unwrap()
}
