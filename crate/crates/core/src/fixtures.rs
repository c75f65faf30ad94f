//! Built-in example groups.

use crate::coxeter::CoxeterMatrix;

const FIXTURES: &[(&str, &str)] = &[
    (
        "dodecahedron",
        include_str!("../fixtures/dodecahedron.json"),
    ),
    (
        "truncated_icosahedron",
        include_str!("../fixtures/truncated_icosahedron.json"),
    ),
    (
        "cube_three_thirds",
        include_str!("../fixtures/cube_three_thirds.json"),
    ),
    ("lanner_535", include_str!("../fixtures/lanner_535.json")),
    (
        "ultraparallel_13",
        include_str!("../fixtures/ultraparallel_13.json"),
    ),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|&(name, _)| name)
}

/// Raw JSON of a built-in fixture.
pub fn source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|&&(n, _)| n == name).map(|&(_, s)| s)
}

pub fn load(name: &str) -> Option<CoxeterMatrix> {
    source(name).map(|s| CoxeterMatrix::from_json(s).expect("built-in fixture is valid"))
}

/// Right-angled reflection group of the regular dodecahedron, rank 12.
pub fn dodecahedron() -> CoxeterMatrix {
    load("dodecahedron").unwrap()
}

/// Right-angled group of the truncated icosahedron, rank 32.
pub fn truncated_icosahedron() -> CoxeterMatrix {
    load("truncated_icosahedron").unwrap()
}

/// Compact hexahedron with three edges of angle pi/3 and all others right.
pub fn cube_three_thirds() -> CoxeterMatrix {
    load("cube_three_thirds").unwrap()
}

/// Compact Lanner tetrahedron with Coxeter diagram 5-3-5.
pub fn lanner_535() -> CoxeterMatrix {
    load("lanner_535").unwrap()
}

/// Thirteen faces, pairwise ultraparallel: a free product of order-2 groups.
pub fn ultraparallel_13() -> CoxeterMatrix {
    load("ultraparallel_13").unwrap()
}
