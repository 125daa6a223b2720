//! Lower and upper bounds on an event next to its additive probability.
//!
//! cargo run -p foresight --example belief_bounds

use foresight::belief::{
    additive_probability, additive_probability_from_atoms, atom_normalized_commonalities, belief,
    plausibility,
};
use foresight::{MassFunction, Subset};

fn main() -> foresight::Result<()> {
    let mf = MassFunction::new(
        4,
        vec![
            (Subset::from_indices([0]), 0.4),
            (Subset::from_indices([1, 2]), 0.35),
            (Subset::from_indices([0, 1, 2, 3]), 0.25),
        ],
    )?;
    let cn = atom_normalized_commonalities(&mf)?;
    for event in [
        Subset::from_indices([0]),
        Subset::from_indices([1]),
        Subset::from_indices([0, 3]),
        Subset::full(4),
    ] {
        let (bel, pr, pl) = (
            belief(&mf, &event),
            additive_probability(&mf, &event),
            plausibility(&mf, &event),
        );
        let via_atoms = additive_probability_from_atoms(&cn, &event)?;
        println!(
            "{event}: Bel {bel:.4} <= Pr {pr:.4} <= Pl {pl:.4}  (sum of atom C^N: {via_atoms:.4})"
        );
    }
    Ok(())
}
