//! Loads a problem document, reports diagnostics, and ranks its decisions.
//!
//! cargo run -p foresight --example load_document -- crates/core/fixtures/supplier_choice.json

use foresight::decision::rank_decisions;
use foresight::document::ProblemDocument;
use foresight::Method;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/supplier_choice.json").to_string()
    });
    let document = match ProblemDocument::load(&path) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let validation = document.validate();
    for d in &validation.diagnostics {
        println!("{:?} [{}] {}: {}", d.severity, d.section, d.code, d.message);
    }
    let Some(problem) = validation.problem else {
        std::process::exit(1);
    };

    let order: Vec<&str> = problem
        .space
        .schema()
        .importance_order()
        .iter()
        .map(|&k| problem.space.schema().characteristics()[k].name.as_str())
        .collect();
    println!("importance order: {}", order.join(" > "));

    if let (Some(assessment), Some(utilities)) = (&problem.assessment, &problem.utilities) {
        let ranking =
            rank_decisions(&assessment.mass, utilities, Method::Commonality).expect("ranking");
        for entry in &ranking.entries {
            println!(
                "{}. {} {:.6}",
                entry.rank, entry.decision, entry.expected_utility
            );
        }
    }
}
