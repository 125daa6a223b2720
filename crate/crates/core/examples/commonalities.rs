//! Shafer and normalized commonalities, on single atoms and compound events,
//! through both the sparse and the dense lattice paths.
//!
//! cargo run -p foresight --example commonalities

use foresight::belief::{
    atom_commonalities, atom_normalized_commonalities_with, commonality, normalized_commonality,
    normalized_commonality_table, Algorithm, LatticeConfig,
};
use foresight::{MassFunction, Subset};

fn main() -> foresight::Result<()> {
    let mf = MassFunction::new(
        3,
        vec![
            (Subset::from_indices([0]), 0.5),
            (Subset::from_indices([0, 1]), 0.3),
            (Subset::from_indices([0, 1, 2]), 0.2),
        ],
    )?;

    let shafer = atom_commonalities(&mf);
    for algorithm in [Algorithm::Sparse, Algorithm::Dense] {
        let cn =
            atom_normalized_commonalities_with(&mf, &LatticeConfig::with_algorithm(algorithm))?;
        println!(
            "{algorithm:?}: C^N = {:?}, sum = {}",
            cn.values(),
            cn.values().iter().sum::<f64>()
        );
    }
    println!("Shafer C = {:?}", shafer.values());
    println!("auto picks {:?}", LatticeConfig::default().resolve(&mf));

    let pair = Subset::from_indices([0, 1]);
    println!(
        "C({pair}) = {}, C^N({pair}) = {}",
        commonality(&mf, &pair)?,
        normalized_commonality(&mf, &pair)?
    );

    // Every subset at once, indexed by bit mask.
    let table = normalized_commonality_table(&mf, 24)?;
    for (mask, value) in table.iter().enumerate().skip(1) {
        println!("C^N({}) = {value:.4}", Subset::from_mask(mask as u64));
    }
    Ok(())
}
