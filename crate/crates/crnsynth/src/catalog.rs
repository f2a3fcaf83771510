//! Known networks from the literature, usable as fixtures and demo inputs.

use crate::crn::{Crn, Reaction};

fn build(num_species: usize, rows: &[(&[u32], &[u32], f64)], inputs: &[usize], outputs: &[usize]) -> Crn {
    let reactions = rows
        .iter()
        .map(|(r, p, k)| Reaction::new(r.to_vec(), p.to_vec(), *k).unwrap())
        .collect();
    Crn::with_canonical_species(num_species, reactions, inputs.to_vec(), outputs.to_vec())
        .unwrap()
}

/// Direct competition majority network `{A+B -> 2B, A+B -> 2A}` with tuned rates.
pub fn direct_competition() -> Crn {
    build(
        2,
        &[(&[1, 1], &[0, 2], 82.8), (&[1, 1], &[2, 0], 82.9)],
        &[0, 1],
        &[0, 1],
    )
}

/// Direct competition with all rates 1.0.
pub fn direct_competition_unit() -> Crn {
    direct_competition().with_rates(&[1.0, 1.0]).unwrap()
}

/// The classic three-species approximate majority network
/// `{A+B -> 2X, A+X -> 2A, B+X -> 2B}` with tuned rates.
///
/// From input `(A=1, B=1, X=0)` it terminates in `(0, 0, 2)` without deciding
/// a majority, which makes it a useful negative fixture.
pub fn tri_majority() -> Crn {
    build(
        3,
        &[
            (&[1, 1, 0], &[0, 0, 2], 92.9),
            (&[1, 0, 1], &[2, 0, 0], 26.2),
            (&[0, 1, 1], &[0, 2, 0], 23.3),
        ],
        &[0, 1],
        &[0, 1],
    )
}

/// Three-species approximate majority with all rates 1.0.
pub fn tri_majority_unit() -> Crn {
    tri_majority().with_rates(&[1.0, 1.0, 1.0]).unwrap()
}

/// A four-species divider `{B+X -> B+Y, A+Y -> X+Y, A+B -> X+Y}` with tuned
/// rates; computes `X = floor(A/B)` with modest probability.
pub fn divider_4_species() -> Crn {
    build(
        4,
        &[
            (&[0, 1, 1, 0], &[0, 1, 0, 1], 87.5),
            (&[1, 0, 0, 1], &[0, 0, 1, 1], 0.15),
            (&[1, 1, 0, 0], &[0, 0, 1, 1], 38.2),
        ],
        &[0, 1],
        &[2],
    )
}

/// A three-species divider `{B+X -> 2B, B+X -> A+X, A+B -> B+X}` with tuned rates.
pub fn divider_3_species() -> Crn {
    build(
        3,
        &[
            (&[0, 1, 1], &[0, 2, 0], 86.1),
            (&[0, 1, 1], &[1, 0, 1], 42.9),
            (&[1, 1, 0], &[0, 1, 1], 18.6),
        ],
        &[0, 1],
        &[2],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_networks_validate() {
        for crn in [
            direct_competition(),
            tri_majority(),
            divider_4_species(),
            divider_3_species(),
        ] {
            assert!(crn.num_reactions() >= 2);
        }
    }
}
