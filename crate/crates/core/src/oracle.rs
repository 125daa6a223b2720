//! Brute-force reference implementations for small frames.
//!
//! Everything here walks the full power set of atoms and shares no traversal
//! code with the optimized paths, so agreement between the two is evidence
//! that both are right. Keep it naive.

use crate::belief::MassFunction;
use crate::decision::UtilityTable;
use crate::event_space::EventSpace;
use crate::unforeseen::{Label, UnforeseenProfile};
use crate::{Error, Result, Subset};

/// Largest frame the oracle will enumerate.
pub const ORACLE_CAP: usize = 12;

fn check(atoms: usize) -> Result<()> {
    if atoms > ORACLE_CAP {
        return Err(Error::SpaceTooLarge {
            atoms,
            cap: ORACLE_CAP,
        });
    }
    Ok(())
}

fn bits(subset: &Subset) -> usize {
    let mut mask = 0usize;
    for i in subset.iter() {
        mask |= 1 << i;
    }
    mask
}

/// Mass on every element of the power set, indexed by bit mask.
fn mass_table(mf: &MassFunction) -> Vec<f64> {
    let mut table = vec![0.0; 1 << mf.frame()];
    for (a, m) in mf.focal_elements() {
        table[bits(a)] += m;
    }
    table
}

fn superset_total(
    mf: &MassFunction,
    subset: &Subset,
    weight: impl Fn(usize, f64) -> f64,
) -> Result<f64> {
    check(mf.frame())?;
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let target = bits(subset);
    let table = mass_table(mf);
    let mut total = 0.0;
    for (s, &m) in table.iter().enumerate() {
        if s & target == target {
            total += weight(s, m);
        }
    }
    Ok(total)
}

pub fn oracle_commonality(mf: &MassFunction, subset: &Subset) -> Result<f64> {
    superset_total(mf, subset, |_, m| m)
}

pub fn oracle_normalized_commonality(mf: &MassFunction, subset: &Subset) -> Result<f64> {
    superset_total(mf, subset, |s, m| {
        if m == 0.0 {
            0.0
        } else {
            m / s.count_ones() as f64
        }
    })
}

/// Runs the labelling procedure literally: at each depth `r` from `m` down,
/// every nonempty set of atoms whose own shared characteristics include the
/// profile's first `r` values is eligible, and the label is their union.
pub fn oracle_label(space: &EventSpace, profile: &UnforeseenProfile) -> Result<Label> {
    let n = space.atom_count();
    check(n)?;
    let m = space.characteristic_count();
    if profile.values().len() != m {
        return Err(Error::ProfileLengthMismatch {
            expected: m,
            found: profile.values().len(),
        });
    }
    let order = space.schema().importance_order();
    let atoms = space.atoms();

    // For each compound event: how many leading characteristics it has, and
    // one member to read their values from.
    let events: Vec<(usize, usize, usize)> = (1usize..1 << n)
        .map(|set| {
            let members: Vec<usize> = (0..n).filter(|i| set >> i & 1 == 1).collect();
            let first = members[0];
            let mut shared = 0;
            for &k in order {
                if members
                    .iter()
                    .all(|&i| atoms[i].profile[k] == atoms[first].profile[k])
                {
                    shared += 1;
                } else {
                    break;
                }
            }
            (set, shared, first)
        })
        .collect();

    for r in (1..=m).rev() {
        let mut union = 0usize;
        for &(set, shared, first) in &events {
            if shared >= r
                && order[..r]
                    .iter()
                    .all(|&k| atoms[first].profile[k] == profile.values()[k])
            {
                union |= set;
            }
        }
        if union != 0 {
            return Ok(Label {
                subset: Subset::from_indices((0..n).filter(|i| union >> i & 1 == 1)),
                depth: r,
            });
        }
    }
    Ok(Label {
        subset: Subset::empty(),
        depth: 0,
    })
}

/// Mass-weighted mean utility, summed over the whole power set.
pub fn oracle_expected_utility(
    mf: &MassFunction,
    u: &UtilityTable,
    decision: usize,
) -> Result<f64> {
    let n = mf.frame();
    check(n)?;
    let row = u.row(decision)?;
    if row.len() != n {
        return Err(Error::MissingUtility {
            expected: n,
            found: row.len(),
        });
    }
    let table = mass_table(mf);
    let mut total = 0.0;
    for (s, &m) in table.iter().enumerate().skip(1) {
        if m == 0.0 {
            continue;
        }
        let mut sum = 0.0;
        let mut count = 0.0;
        for (i, v) in row.iter().enumerate() {
            if s >> i & 1 == 1 {
                sum += v;
                count += 1.0;
            }
        }
        total += m * sum / count;
    }
    Ok(total)
}
