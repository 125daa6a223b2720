//! Labels unforeseen profiles with the foreseen events they most resemble,
//! then conditions a raw assessment on the foreseeable part.
//!
//! cargo run -p foresight --example label_unforeseen

use foresight::event_space::Atom;
use foresight::unforeseen::{condition_on_foreseeable, label_unforeseen};
use foresight::{EventSpace, RawAssessment, UnforeseenProfile};

fn main() -> foresight::Result<()> {
    let space = EventSpace::from_atoms(
        &["demand", "supply", "regulation"],
        vec![1.into(), 1.into(), 1.into()],
        None,
        vec![
            Atom::new("e111", [1, 1, 1]),
            Atom::new("e110", [1, 1, 0]),
            Atom::new("e001", [0, 0, 1]),
        ],
    )?;

    let mut labelled = Vec::new();
    for (profile, probability) in [
        (vec![1, 0, 0], 0.3),
        (vec![0, 0, 1], 0.5),
        (vec![2, 2, 2], 0.2),
    ] {
        let label = label_unforeseen(&space, &UnforeseenProfile::new(profile.clone()))?;
        let ids: Vec<&str> = space.ids_of(&label.subset).collect();
        if label.is_unrecognisable() {
            println!("{profile:?} -> unrecognisable");
        } else {
            println!(
                "{profile:?} -> {{{}}} at depth {}",
                ids.join(","),
                label.depth
            );
        }
        labelled.push((label.subset, probability));
    }

    let raw = RawAssessment::new(space.atom_count(), labelled, 0.0)?;
    println!("unrecognisable share: {}", raw.empty_probability());
    let mass = condition_on_foreseeable(&raw)?;
    for (subset, m) in mass.focal_elements() {
        let ids: Vec<&str> = space.ids_of(subset).collect();
        println!("m({{{}}}) = {m:.4}", ids.join(","));
    }
    Ok(())
}
