//! The built-in complexes.

use crate::simplicial::SimplicialComplex;

/// Names accepted by [`builtin`], in a fixed order.
pub const NAMES: [&str; 8] =
    ["point", "two-points", "edge", "triangle", "triangle-boundary", "tetrahedron-boundary", "two-triangles", "triangle-wedge"];

/// A built-in complex by name.
pub fn builtin(name: &str) -> Option<SimplicialComplex> {
    let (n, maximal): (usize, &[&[usize]]) = match name {
        "point" => (1, &[&[1]]),
        "two-points" => (2, &[&[1], &[2]]),
        "edge" => (2, &[&[1, 2]]),
        "triangle" => (3, &[&[1, 2, 3]]),
        "triangle-boundary" => (3, &[&[1, 2], &[1, 3], &[2, 3]]),
        "tetrahedron-boundary" => (4, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]),
        "two-triangles" => (4, &[&[1, 2, 3], &[2, 3, 4]]),
        "triangle-wedge" => (5, &[&[1, 2], &[1, 3], &[2, 3], &[3, 4], &[3, 5], &[4, 5]]),
        _ => return None,
    };
    Some(SimplicialComplex::from_index_lists(name, n, maximal).expect("built-in complexes are valid"))
}

/// All built-in complexes in [`NAMES`] order.
pub fn all() -> Vec<SimplicialComplex> {
    NAMES.iter().map(|n| builtin(n).expect("listed")).collect()
}
