//! Ranks decisions three ways: mass-weighted label utilities, commonality
//! weighted atom utilities, and a lumped unforeseen event at a fixed utility.
//!
//! cargo run -p foresight --example rank_decisions

use foresight::decision::{rank_decisions, rank_eq1, OutcomeProbabilities};
use foresight::{DecisionRanking, MassFunction, Method, Subset, UtilityTable, EPS_TIE};

fn show(title: &str, ranking: &DecisionRanking) {
    println!("{title}");
    for entry in &ranking.entries {
        println!(
            "  {}. {} {:.6}",
            entry.rank, entry.decision, entry.expected_utility
        );
    }
}

fn main() -> foresight::Result<()> {
    let mf = MassFunction::new(
        3,
        vec![
            (Subset::from_indices([0]), 0.5),
            (Subset::from_indices([0, 1]), 0.3),
            (Subset::from_indices([0, 1, 2]), 0.2),
        ],
    )?;
    let utilities = UtilityTable::new(
        vec!["expand".into(), "hold".into(), "divest".into()],
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.5, 0.5, 0.5],
            vec![0.0, 1.0, 1.0],
        ],
        0.25,
    )?;

    show(
        "mass-weighted labels",
        &rank_decisions(&mf, &utilities, Method::Eq2)?,
    );
    show(
        "commonality-weighted atoms",
        &rank_decisions(&mf, &utilities, Method::Commonality)?,
    );

    let baseline = OutcomeProbabilities::new(vec![0.5, 0.2, 0.1], 0.2)?;
    show(
        "lumped unforeseen event",
        &rank_eq1(&baseline, &utilities, EPS_TIE)?,
    );
    Ok(())
}
