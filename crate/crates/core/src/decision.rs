//! Utilities, lifting them to compound labels, and ranking decisions.

use serde::Serialize;

use crate::belief::{
    atom_normalized_commonalities, CommonalityKind, CommonalityVector, MassFunction,
};
use crate::{Error, Result, Subset, EPS_NORM, EPS_TIE};

/// `u(d|E)` for every decision and foreseen atom, plus `u0`, the utility of
/// any decision when the outcome resembles nothing foreseen.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityTable {
    decisions: Vec<String>,
    atoms: usize,
    values: Vec<f64>,
    u0: f64,
}

impl UtilityTable {
    /// `rows[d][i]` is the utility of decision `d` given atom `i`.
    pub fn new(decisions: Vec<String>, rows: Vec<Vec<f64>>, u0: f64) -> Result<Self> {
        if decisions.is_empty() {
            return Err(Error::NoDecisions);
        }
        if rows.len() != decisions.len() {
            return Err(Error::MissingUtility {
                expected: decisions.len(),
                found: rows.len(),
            });
        }
        let atoms = rows[0].len();
        let mut values = Vec::with_capacity(atoms * rows.len());
        for row in rows {
            if row.len() != atoms {
                return Err(Error::MissingUtility {
                    expected: atoms,
                    found: row.len(),
                });
            }
            values.extend(row);
        }
        if let Some(&bad) = values.iter().chain([&u0]).find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Self {
            decisions,
            atoms,
            values,
            u0,
        })
    }

    pub fn decisions(&self) -> &[String] {
        &self.decisions
    }

    pub fn decision_count(&self) -> usize {
        self.decisions.len()
    }

    pub fn decision_index(&self, name: &str) -> Option<usize> {
        self.decisions.iter().position(|d| d == name)
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    /// # Panics
    /// If either index is out of range.
    pub fn utility(&self, decision: usize, atom: usize) -> f64 {
        assert!(atom < self.atoms);
        self.values[decision * self.atoms + atom]
    }

    pub fn row(&self, decision: usize) -> Result<&[f64]> {
        if decision >= self.decisions.len() {
            return Err(Error::UnknownDecision(decision.to_string()));
        }
        Ok(&self.values[decision * self.atoms..(decision + 1) * self.atoms])
    }

    /// Applies `a * u + b` to every utility including `u0`.
    pub fn affine(&self, a: f64, b: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| a * v + b).collect(),
            u0: a * self.u0 + b,
            ..self.clone()
        }
    }

    fn covers(&self, frame: usize) -> Result<()> {
        if self.atoms != frame {
            return Err(Error::MissingUtility {
                expected: frame,
                found: self.atoms,
            });
        }
        Ok(())
    }
}

/// Utility of a decision given label `A`: the mean of `u(d|E)` over `E` in `A`.
///
/// When every member shares one utility the mean is that utility, so
/// inheritance from unanimous members needs no separate rule.
pub fn compound_utility(u: &UtilityTable, decision: usize, subset: &Subset) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let row = u.row(decision)?;
    if let Some(i) = subset.max_index().filter(|&i| i >= row.len()) {
        return Err(Error::AtomOutOfFrame {
            index: i,
            frame: row.len(),
        });
    }
    Ok(subset.iter().map(|i| row[i]).sum::<f64>() / subset.len() as f64)
}

/// `sum over focal A of m(A) u(d|I_A)`.
pub fn expected_utility_eq2(mf: &MassFunction, u: &UtilityTable, decision: usize) -> Result<f64> {
    u.covers(mf.frame())?;
    mf.focal_elements()
        .iter()
        .map(|(a, m)| compound_utility(u, decision, a).map(|v| m * v))
        .sum()
}

/// `sum over atoms E of C^N(E) u(d|E)`.
pub fn expected_utility_commonality(
    cn: &CommonalityVector,
    u: &UtilityTable,
    decision: usize,
) -> Result<f64> {
    if cn.kind() != CommonalityKind::Normalized {
        return Err(Error::KindMismatch);
    }
    u.covers(cn.len())?;
    let row = u.row(decision)?;
    Ok(cn.values().iter().zip(row).map(|(w, v)| w * v).sum())
}

/// Probabilities over the foreseen atoms plus a single lumped unforeseen event.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeProbabilities {
    atoms: Vec<f64>,
    unforeseen: f64,
}

impl OutcomeProbabilities {
    pub fn new(atoms: Vec<f64>, unforeseen: f64) -> Result<Self> {
        if let Some(&bad) = atoms.iter().chain([&unforeseen]).find(|p| !p.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        if let Some(&neg) = atoms.iter().chain([&unforeseen]).find(|&&p| p < 0.0) {
            return Err(Error::NegativeMass(neg));
        }
        let total = unforeseen + atoms.iter().sum::<f64>();
        if (total - 1.0).abs() > EPS_NORM {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self { atoms, unforeseen })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn unforeseen(&self) -> f64 {
        self.unforeseen
    }

    /// `Pr(E | F)`, the atom probabilities given that a foreseen event occurs.
    pub fn conditional(&self) -> Result<Vec<f64>> {
        let keep = 1.0 - self.unforeseen;
        if keep <= EPS_NORM {
            return Err(Error::AllMassUnforeseeable);
        }
        Ok(self.atoms.iter().map(|p| p / keep).collect())
    }
}

/// Expected utility treating every unforeseen outcome as one event worth `u0`.
pub fn expected_utility_eq1(
    probabilities: &OutcomeProbabilities,
    u: &UtilityTable,
    decision: usize,
) -> Result<f64> {
    u.covers(probabilities.atoms.len())?;
    let row = u.row(decision)?;
    let foreseen: f64 = probabilities
        .atoms
        .iter()
        .zip(row)
        .map(|(p, v)| p * v)
        .sum();
    Ok(foreseen + probabilities.unforeseen * u.u0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Mass-weighted mean utilities of the focal labels.
    Eq2,
    /// Normalized-commonality-weighted atom utilities.
    Commonality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedDecision {
    pub decision: String,
    pub index: usize,
    pub expected_utility: f64,
    /// 1-based; decisions in one tie group share a rank.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionRanking {
    pub entries: Vec<RankedDecision>,
    /// Decision indices per tie group, best group first.
    pub tie_groups: Vec<Vec<usize>>,
}

impl DecisionRanking {
    /// Orders decisions by decreasing value. A tie group collects every
    /// decision within `tolerance` of the group's best value; inside a group
    /// decisions keep their input order.
    pub fn from_values(u: &UtilityTable, values: &[f64], tolerance: f64) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

        let mut tie_groups: Vec<Vec<usize>> = Vec::new();
        let mut leader = f64::NAN;
        for i in order {
            match tie_groups.last_mut() {
                Some(group) if leader - values[i] < tolerance => group.push(i),
                _ => {
                    leader = values[i];
                    tie_groups.push(vec![i]);
                }
            }
        }
        for group in &mut tie_groups {
            group.sort_unstable();
        }
        let entries = tie_groups
            .iter()
            .enumerate()
            .flat_map(|(g, group)| {
                group.iter().map(move |&i| RankedDecision {
                    decision: u.decisions[i].clone(),
                    index: i,
                    expected_utility: values[i],
                    rank: g + 1,
                })
            })
            .collect();
        Self {
            entries,
            tie_groups,
        }
    }

    /// Decision indices in ranked order.
    pub fn order(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.index).collect()
    }

    pub fn best(&self) -> &RankedDecision {
        &self.entries[0]
    }
}

/// Evaluates every decision by `method` with the default tie tolerance.
pub fn rank_decisions(
    mf: &MassFunction,
    u: &UtilityTable,
    method: Method,
) -> Result<DecisionRanking> {
    rank_decisions_with_tolerance(mf, u, method, EPS_TIE)
}

pub fn rank_decisions_with_tolerance(
    mf: &MassFunction,
    u: &UtilityTable,
    method: Method,
    tolerance: f64,
) -> Result<DecisionRanking> {
    let values = match method {
        Method::Eq2 => (0..u.decision_count())
            .map(|d| expected_utility_eq2(mf, u, d))
            .collect::<Result<Vec<_>>>()?,
        Method::Commonality => {
            let cn = atom_normalized_commonalities(mf)?;
            (0..u.decision_count())
                .map(|d| expected_utility_commonality(&cn, u, d))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(DecisionRanking::from_values(u, &values, tolerance))
}

/// Ranking by expected utility over foreseen atoms plus one lumped
/// unforeseen event worth `u0`.
pub fn rank_eq1(
    probabilities: &OutcomeProbabilities,
    u: &UtilityTable,
    tolerance: f64,
) -> Result<DecisionRanking> {
    let values = (0..u.decision_count())
        .map(|d| expected_utility_eq1(probabilities, u, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(DecisionRanking::from_values(u, &values, tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::atom_commonalities;

    const TOL: f64 = 1e-12;

    fn nested() -> MassFunction {
        MassFunction::new(
            3,
            vec![
                (Subset::from_indices([0]), 0.5),
                (Subset::from_indices([0, 1]), 0.3),
                (Subset::from_indices([0, 1, 2]), 0.2),
            ],
        )
        .unwrap()
    }

    fn two_decisions() -> UtilityTable {
        UtilityTable::new(
            vec!["d1".into(), "d2".into()],
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn table_validation() {
        assert_eq!(
            UtilityTable::new(vec![], vec![], 0.0),
            Err(Error::NoDecisions)
        );
        assert_eq!(
            UtilityTable::new(
                vec!["a".into(), "b".into()],
                vec![vec![1.0, 2.0], vec![1.0]],
                0.0
            ),
            Err(Error::MissingUtility {
                expected: 2,
                found: 1
            })
        );
        assert!(matches!(
            UtilityTable::new(vec!["a".into()], vec![vec![f64::NAN]], 0.0),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn compound_utility_examples() {
        let u = UtilityTable::new(vec!["d".into()], vec![vec![1.0, 0.0, 4.0, 4.0]], 0.0).unwrap();
        assert_eq!(compound_utility(&u, 0, &Subset::singleton(2)).unwrap(), 4.0);
        assert_eq!(
            compound_utility(&u, 0, &Subset::from_indices([2, 3])).unwrap(),
            4.0
        );
        assert_eq!(
            compound_utility(&u, 0, &Subset::from_indices([0, 1])).unwrap(),
            0.5
        );
        assert_eq!(
            compound_utility(&u, 0, &Subset::empty()),
            Err(Error::EmptySubset)
        );
        assert_eq!(
            compound_utility(&u, 3, &Subset::singleton(0)),
            Err(Error::UnknownDecision("3".into()))
        );
    }

    #[test]
    fn expected_utility_examples() {
        let mf = nested();
        let u = two_decisions();
        let expected = 0.5 + 0.3 * 0.5 + 0.2 / 3.0;
        assert!((expected_utility_eq2(&mf, &u, 0).unwrap() - expected).abs() < TOL);

        let cn = atom_normalized_commonalities(&mf).unwrap();
        assert!((expected_utility_commonality(&cn, &u, 0).unwrap() - expected).abs() < TOL);
        assert_eq!(
            expected_utility_commonality(&atom_commonalities(&mf), &u, 0),
            Err(Error::KindMismatch)
        );

        let point = MassFunction::new(3, vec![(Subset::singleton(1), 1.0)]).unwrap();
        assert_eq!(expected_utility_eq2(&point, &u, 1).unwrap(), 1.0);

        let flat = UtilityTable::new(vec!["d".into()], vec![vec![2.5; 3]], 2.5).unwrap();
        assert!((expected_utility_eq2(&mf, &flat, 0).unwrap() - 2.5).abs() < TOL);

        let short = UtilityTable::new(vec!["d".into()], vec![vec![1.0; 2]], 0.0).unwrap();
        assert_eq!(
            expected_utility_eq2(&mf, &short, 0),
            Err(Error::MissingUtility {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn uniform_commonality_is_plain_average() {
        let full = MassFunction::new(4, vec![(Subset::full(4), 1.0)]).unwrap();
        let cn = atom_normalized_commonalities(&full).unwrap();
        let u = UtilityTable::new(vec!["d".into()], vec![vec![1.0, 2.0, 3.0, 6.0]], 0.0).unwrap();
        assert!((expected_utility_commonality(&cn, &u, 0).unwrap() - 3.0).abs() < TOL);
    }

    #[test]
    fn eq1_examples() {
        let u = UtilityTable::new(vec!["d".into()], vec![vec![1.0]], 0.0).unwrap();
        let p = OutcomeProbabilities::new(vec![0.8], 0.2).unwrap();
        assert!((expected_utility_eq1(&p, &u, 0).unwrap() - 0.8).abs() < TOL);

        let flat = UtilityTable::new(vec!["d".into()], vec![vec![3.0, 3.0]], 3.0).unwrap();
        let p = OutcomeProbabilities::new(vec![0.3, 0.3], 0.4).unwrap();
        assert!((expected_utility_eq1(&p, &flat, 0).unwrap() - 3.0).abs() < TOL);

        assert!(matches!(
            OutcomeProbabilities::new(vec![0.5], 0.2),
            Err(Error::NotNormalized(_))
        ));
        assert_eq!(
            OutcomeProbabilities::new(vec![0.0], 1.0)
                .unwrap()
                .conditional(),
            Err(Error::AllMassUnforeseeable)
        );
    }

    #[test]
    fn ranking_examples() {
        let mf = nested();
        let u = two_decisions();
        for method in [Method::Eq2, Method::Commonality] {
            let r = rank_decisions(&mf, &u, method).unwrap();
            assert_eq!(r.order(), vec![0, 1]);
            assert_eq!(r.tie_groups, vec![vec![0], vec![1]]);
            let sum: f64 = r.entries.iter().map(|e| e.expected_utility).sum();
            assert!((sum - 1.0).abs() < TOL);
            assert!((r.entries[1].expected_utility - (0.3 * 0.5 + 0.2 * 2.0 / 3.0)).abs() < TOL);
        }

        let single =
            UtilityTable::new(vec!["only".into()], vec![vec![0.0, 1.0, 2.0]], 0.0).unwrap();
        let r = rank_decisions(&mf, &single, Method::Eq2).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.best().rank, 1);

        let twins = UtilityTable::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 2.0, 3.0],
                vec![1.0, 2.0, 3.0],
            ],
            0.0,
        )
        .unwrap();
        let r = rank_decisions(&mf, &twins, Method::Commonality).unwrap();
        assert_eq!(r.tie_groups, vec![vec![1, 2], vec![0]]);
        assert_eq!(
            r.entries.iter().map(|e| e.rank).collect::<Vec<_>>(),
            vec![1, 1, 2]
        );
    }

    #[test]
    fn tie_groups_anchor_on_leader() {
        let u = UtilityTable::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0.0]; 3],
            0.0,
        )
        .unwrap();
        // b and c each within 0.6 of the next but c is 1.0 below a.
        let r = DecisionRanking::from_values(&u, &[1.0, 0.5, 0.0], 0.6);
        assert_eq!(r.tie_groups, vec![vec![0, 1], vec![2]]);
    }
}
