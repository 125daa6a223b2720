//! Infers an importance order for characteristics from utility spread along
//! reference sweeps, and shows how the order changes a label.
//!
//! cargo run -p foresight --example importance_ranking

use foresight::event_space::{rank_characteristics, Atom};
use foresight::unforeseen::label_unforeseen;
use foresight::{EventSpace, UnforeseenProfile, UtilityTable};

fn main() -> foresight::Result<()> {
    let space = EventSpace::from_atoms(
        &["price", "quality"],
        vec!["low".into(), "high".into()],
        None,
        vec![
            Atom::new("baseline", ["low", "high"]),
            Atom::new("price-up", ["high", "high"]),
            Atom::new("quality-down", ["low", "poor"]),
        ],
    )?;
    let utilities = UtilityTable::new(
        vec!["buy".into(), "wait".into()],
        vec![vec![1.0, 0.8, 0.1], vec![0.5, 0.5, 0.5]],
        0.0,
    )?;

    let ranking = rank_characteristics(&space, &utilities)?;
    for &k in &ranking.order {
        println!(
            "{}: spread {:.2}",
            space.schema().characteristics()[k].name,
            ranking.importance[k]
        );
    }

    let profile = UnforeseenProfile::new(["high", "poor"]);
    for order in [vec![0, 1], ranking.order.clone()] {
        let ordered = space.with_importance_order(order.clone())?;
        let label = label_unforeseen(&ordered, &profile)?;
        let ids: Vec<&str> = ordered.ids_of(&label.subset).collect();
        println!(
            "order {order:?}: label {{{}}} at depth {}",
            ids.join(","),
            label.depth
        );
    }
    Ok(())
}
