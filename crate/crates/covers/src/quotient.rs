use lattice::Subgroup;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::cover::{cover_from_subgroup, FketCover};
use crate::galois::{fiber_functor, fiber_restriction};
use crate::CoversError;

/// The quotient of a cover by part of its deck action, named by the
/// subgroup that survives: generators of a subgroup of the cover's
/// classifying subgroup. Keeping everything returns the cover, keeping
/// nothing returns the base. The construction certifies that the result's
/// fiber is the orbit set of the original fiber under the deck characters
/// that vanish on the kept subgroup.
pub fn cover_quotient(
    c: &FketCover,
    kept_generators: &[Vec<BigInt>],
) -> Result<FketCover, CoversError> {
    let gamma = c.level_group();
    let kept = Subgroup::generated_by(&gamma, kept_generators)?;
    if !kept
        .elements
        .iter()
        .all(|e| c.subgroup().contains(&gamma, e))
    {
        return Err(CoversError::Precondition(
            "the kept subgroup must lie inside the cover's subgroup".into(),
        ));
    }
    let result = cover_from_subgroup(c.base(), c.level(), &kept.generators(&gamma))?;

    // Certify against the Galois side. The restriction map sends each
    // character to its values on the kept subgroup; its fibers must be
    // exactly the translation orbits under characters vanishing there.
    let map = fiber_restriction(c, &result)?;
    let fiber = fiber_functor(c);
    let positions: Vec<usize> = kept
        .elements
        .iter()
        .map(|e| {
            c.subgroup()
                .elements
                .binary_search(e)
                .expect("kept elements sit in the cover's subgroup")
        })
        .collect();
    let vanishing: Vec<usize> = fiber
        .elements
        .iter()
        .enumerate()
        .filter(|(_, row)| positions.iter().all(|&p| row[p].is_zero()))
        .map(|(j, _)| j)
        .collect();
    assert_eq!(
        vanishing.len() * result.degree(),
        fiber.size(),
        "vanishing characters count the quotient's sheets"
    );
    let mb = BigInt::from(c.level());
    for (j, row) in fiber.elements.iter().enumerate() {
        for &t in &vanishing {
            let translated: Vec<BigInt> = row
                .iter()
                .zip(&fiber.elements[t])
                .map(|(x, y)| (x + y).mod_floor(&mb))
                .collect();
            let shifted = fiber
                .elements
                .binary_search(&translated)
                .expect("translates of characters are characters");
            assert_eq!(
                map[shifted], map[j],
                "deck translates restrict to the same character"
            );
        }
        assert_eq!(
            map.iter().filter(|&&v| v == map[j]).count(),
            vanishing.len(),
            "restriction fibers are single deck orbits"
        );
    }
    Ok(result)
}
