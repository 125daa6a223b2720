//! Characteristics, foreseen atoms, and how atoms group by their profiles.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decision::UtilityTable;
use crate::{Error, Result, Subset};

/// A categorical value taken by one characteristic.
///
/// Matching is by exact equality; `Int(1)` and `Text("1")` are different levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Level {
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Level {
    /// Parses a command-line token: integers and booleans become typed levels.
    pub fn parse_token(token: &str) -> Level {
        let token = token.trim();
        if let Ok(i) = token.parse::<i64>() {
            Level::Int(i)
        } else if let Ok(b) = token.parse::<bool>() {
            Level::Bool(b)
        } else {
            Level::Text(token.to_string())
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Int(i) => write!(f, "{i}"),
            Level::Bool(b) => write!(f, "{b}"),
            Level::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Level {
    fn from(v: i64) -> Self {
        Level::Int(v)
    }
}

impl From<i32> for Level {
    fn from(v: i32) -> Self {
        Level::Int(v as i64)
    }
}

impl From<&str> for Level {
    fn from(v: &str) -> Self {
        Level::Text(v.to_string())
    }
}

impl From<bool> for Level {
    fn from(v: bool) -> Self {
        Level::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Characteristic {
    pub name: String,
    pub range: Vec<Level>,
    pub reference: Level,
}

/// The `m` characteristics and the order in which they matter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicSchema {
    characteristics: Vec<Characteristic>,
    importance_order: Vec<usize>,
}

impl CharacteristicSchema {
    /// `importance_order` lists characteristic positions, most important
    /// first. `None` keeps the declaration order.
    pub fn new(
        characteristics: Vec<Characteristic>,
        importance_order: Option<Vec<usize>>,
    ) -> Result<Self> {
        if characteristics.is_empty() {
            return Err(Error::EmptySchema);
        }
        let mut names = HashSet::new();
        for c in &characteristics {
            if !names.insert(c.name.as_str()) {
                return Err(Error::DuplicateCharacteristic(c.name.clone()));
            }
            if c.range.is_empty() {
                return Err(Error::EmptyRange(c.name.clone()));
            }
            if !c.range.contains(&c.reference) {
                return Err(Error::ReferenceOutOfRange(c.name.clone()));
            }
        }
        let m = characteristics.len();
        let importance_order = importance_order.unwrap_or_else(|| (0..m).collect());
        if !is_permutation(&importance_order, m) {
            return Err(Error::BadImportanceOrder(m));
        }
        Ok(Self {
            characteristics,
            importance_order,
        })
    }

    pub fn len(&self) -> usize {
        self.characteristics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characteristics.is_empty()
    }

    pub fn characteristics(&self) -> &[Characteristic] {
        &self.characteristics
    }

    pub fn importance_order(&self) -> &[usize] {
        &self.importance_order
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.characteristics.iter().position(|c| c.name == name)
    }

    pub fn reference_profile(&self) -> Vec<Level> {
        self.characteristics
            .iter()
            .map(|c| c.reference.clone())
            .collect()
    }
}

pub(crate) fn is_permutation(order: &[usize], m: usize) -> bool {
    let mut seen = vec![false; m];
    order.len() == m
        && order
            .iter()
            .all(|&i| i < m && !std::mem::replace(&mut seen[i], true))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub id: String,
    pub profile: Vec<Level>,
}

impl Atom {
    pub fn new<I, L>(id: impl Into<String>, profile: I) -> Self
    where
        I: IntoIterator<Item = L>,
        L: Into<Level>,
    {
        Self {
            id: id.into(),
            profile: profile.into_iter().map(Into::into).collect(),
        }
    }
}

/// The foreseen atomic events together with their schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSpace {
    schema: CharacteristicSchema,
    atoms: Vec<Atom>,
    index: HashMap<String, usize>,
}

impl EventSpace {
    pub fn new(schema: CharacteristicSchema, atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::NoAtoms);
        }
        let m = schema.len();
        let ranges: Vec<HashSet<&Level>> = schema
            .characteristics
            .iter()
            .map(|c| c.range.iter().collect())
            .collect();
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, atom) in atoms.iter().enumerate() {
            if index.insert(atom.id.clone(), i).is_some() {
                return Err(Error::DuplicateAtom(atom.id.clone()));
            }
            if atom.profile.len() != m {
                return Err(Error::ProfileLengthMismatch {
                    expected: m,
                    found: atom.profile.len(),
                });
            }
            for ((c, range), value) in schema
                .characteristics
                .iter()
                .zip(&ranges)
                .zip(&atom.profile)
            {
                if !range.contains(value) {
                    return Err(Error::ValueOutOfRange {
                        atom: atom.id.clone(),
                        characteristic: c.name.clone(),
                        value: value.to_string(),
                    });
                }
            }
        }
        for (k, (c, range)) in schema.characteristics.iter().zip(&ranges).enumerate() {
            let taken: HashSet<&Level> = atoms.iter().map(|a| &a.profile[k]).collect();
            if taken.len() != range.len() {
                return Err(Error::RangeMismatch(c.name.clone()));
            }
        }
        Ok(Self {
            schema,
            atoms,
            index,
        })
    }

    /// Builds a space whose ranges are read off the atoms (in first-seen order).
    pub fn from_atoms(
        names: &[&str],
        reference: Vec<Level>,
        importance_order: Option<Vec<usize>>,
        atoms: Vec<Atom>,
    ) -> Result<Self> {
        if reference.len() != names.len() {
            return Err(Error::ProfileLengthMismatch {
                expected: names.len(),
                found: reference.len(),
            });
        }
        let characteristics = names
            .iter()
            .zip(reference)
            .enumerate()
            .map(|(k, (name, reference))| {
                let mut range: Vec<Level> = Vec::new();
                for atom in &atoms {
                    if let Some(v) = atom.profile.get(k) {
                        if !range.contains(v) {
                            range.push(v.clone());
                        }
                    }
                }
                Characteristic {
                    name: name.to_string(),
                    range,
                    reference,
                }
            })
            .collect();
        Self::new(
            CharacteristicSchema::new(characteristics, importance_order)?,
            atoms,
        )
    }

    pub fn schema(&self) -> &CharacteristicSchema {
        &self.schema
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn characteristic_count(&self) -> usize {
        self.schema.len()
    }

    pub fn atom_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Resolves atom ids to a subset.
    pub fn subset_of<'a, I: IntoIterator<Item = &'a str>>(&self, ids: I) -> Result<Subset> {
        ids.into_iter()
            .map(|id| {
                self.atom_index(id)
                    .ok_or_else(|| Error::UnknownAtom(id.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Subset::from_indices)
    }

    /// Atom ids of a subset, in atom order.
    pub fn ids_of<'a>(&'a self, subset: &'a Subset) -> impl Iterator<Item = &'a str> + 'a {
        subset.iter().map(move |i| self.atoms[i].id.as_str())
    }

    pub(crate) fn check_subset(&self, subset: &Subset) -> Result<()> {
        match subset.max_index() {
            Some(i) if i >= self.atom_count() => Err(Error::AtomOutOfFrame {
                index: i,
                frame: self.atom_count(),
            }),
            _ => Ok(()),
        }
    }

    /// Same space with a different importance order.
    pub fn with_importance_order(&self, order: Vec<usize>) -> Result<Self> {
        let schema = CharacteristicSchema::new(self.schema.characteristics.clone(), Some(order))?;
        Ok(Self {
            schema,
            ..self.clone()
        })
    }

    /// Reorders characteristic positions: new position `p` holds old
    /// characteristic `order[p]`. The importance order follows the move.
    pub fn permute_characteristics(&self, order: &[usize]) -> Result<Self> {
        let m = self.schema.len();
        if !is_permutation(order, m) {
            return Err(Error::BadImportanceOrder(m));
        }
        let mut new_position = vec![0; m];
        for (p, &old) in order.iter().enumerate() {
            new_position[old] = p;
        }
        let characteristics = order
            .iter()
            .map(|&old| self.schema.characteristics[old].clone())
            .collect();
        let importance = self
            .schema
            .importance_order
            .iter()
            .map(|&old| new_position[old])
            .collect();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                id: a.id.clone(),
                profile: order.iter().map(|&old| a.profile[old].clone()).collect(),
            })
            .collect();
        Self::new(
            CharacteristicSchema::new(characteristics, Some(importance))?,
            atoms,
        )
    }
}

/// Result of [`rank_characteristics`].
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceRanking {
    /// Characteristic positions, most important first.
    pub order: Vec<usize>,
    /// Spread of utility per characteristic position.
    pub importance: Vec<f64>,
    /// Characteristics with no atom matching the reference elsewhere; their
    /// importance is reported as 0.
    pub missing_sweeps: Vec<usize>,
}

/// Orders characteristics by how much utility varies when only that
/// characteristic moves away from the reference profile.
///
/// For characteristic `j` the sweep is every atom whose profile equals the
/// reference at all positions other than `j`; importance is the max minus
/// min of `u(d|E)` over all decisions and sweep atoms. Ties keep ascending
/// position.
pub fn rank_characteristics(
    space: &EventSpace,
    utilities: &UtilityTable,
) -> Result<ImportanceRanking> {
    let n = space.atom_count();
    if utilities.atom_count() != n {
        return Err(Error::MissingUtility {
            expected: n,
            found: utilities.atom_count(),
        });
    }
    let m = space.characteristic_count();
    let reference = space.schema.reference_profile();
    let mut importance = vec![0.0; m];
    let mut missing_sweeps = Vec::new();

    for (j, slot) in importance.iter_mut().enumerate() {
        let sweep: Vec<usize> = space
            .atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| {
                a.profile
                    .iter()
                    .zip(&reference)
                    .enumerate()
                    .all(|(k, (v, r))| k == j || v == r)
            })
            .map(|(i, _)| i)
            .collect();
        if sweep.is_empty() {
            missing_sweeps.push(j);
            continue;
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for d in 0..utilities.decision_count() {
            for &i in &sweep {
                let u = utilities.utility(d, i);
                lo = lo.min(u);
                hi = hi.max(u);
            }
        }
        *slot = hi - lo;
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| importance[b].total_cmp(&importance[a]).then(a.cmp(&b)));
    Ok(ImportanceRanking {
        order,
        importance,
        missing_sweeps,
    })
}

/// Number of leading characteristics (in importance order) on which every
/// atom of `subset` agrees.
pub fn shared_prefix_length(space: &EventSpace, subset: &Subset) -> Result<usize> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    space.check_subset(subset)?;
    let mut members = subset.iter();
    let first = &space.atoms[members.next().expect("nonempty")].profile;
    let rest: Vec<&[Level]> = members.map(|i| space.atoms[i].profile.as_slice()).collect();
    Ok(space
        .schema
        .importance_order
        .iter()
        .take_while(|&&k| rest.iter().all(|p| p[k] == first[k]))
        .count())
}

/// Partitions the atoms into blocks sharing a full profile, ordered by each
/// block's first atom.
pub fn group_atoms_by_profile(space: &EventSpace) -> Vec<Subset> {
    let mut block_of: HashMap<&[Level], usize> = HashMap::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, atom) in space.atoms.iter().enumerate() {
        let b = *block_of.entry(atom.profile.as_slice()).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(i);
    }
    blocks.into_iter().map(Subset::from_indices).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn worked_space() -> EventSpace {
        EventSpace::from_atoms(
            &["c1", "c2", "c3"],
            vec![1.into(), 1.into(), 1.into()],
            None,
            vec![
                Atom::new("e111", [1, 1, 1]),
                Atom::new("e110", [1, 1, 0]),
                Atom::new("e001", [0, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn schema_validation() {
        let c = |name: &str, range: Vec<Level>, reference: Level| Characteristic {
            name: name.into(),
            range,
            reference,
        };
        assert_eq!(
            CharacteristicSchema::new(vec![], None),
            Err(Error::EmptySchema)
        );
        assert_eq!(
            CharacteristicSchema::new(vec![c("a", vec![], 0.into())], None),
            Err(Error::EmptyRange("a".into()))
        );
        assert_eq!(
            CharacteristicSchema::new(vec![c("a", vec![1.into()], 0.into())], None),
            Err(Error::ReferenceOutOfRange("a".into()))
        );
        assert_eq!(
            CharacteristicSchema::new(
                vec![
                    c("a", vec![0.into()], 0.into()),
                    c("b", vec![0.into()], 0.into())
                ],
                Some(vec![0, 0])
            ),
            Err(Error::BadImportanceOrder(2))
        );
    }

    #[test]
    fn range_must_match_atoms() {
        let schema = CharacteristicSchema::new(
            vec![Characteristic {
                name: "a".into(),
                range: vec![0.into(), 1.into()],
                reference: 0.into(),
            }],
            None,
        )
        .unwrap();
        let err = EventSpace::new(schema.clone(), vec![Atom::new("x", [0])]).unwrap_err();
        assert_eq!(err, Error::RangeMismatch("a".into()));
        let err =
            EventSpace::new(schema, vec![Atom::new("x", [0]), Atom::new("x", [1])]).unwrap_err();
        assert_eq!(err, Error::DuplicateAtom("x".into()));
    }

    #[test]
    fn shared_prefix_examples() {
        let space = worked_space();
        let s = |ids: &[&str]| space.subset_of(ids.iter().copied()).unwrap();
        assert_eq!(shared_prefix_length(&space, &s(&["e110"])).unwrap(), 3);
        assert_eq!(
            shared_prefix_length(&space, &s(&["e111", "e110"])).unwrap(),
            2
        );
        assert_eq!(
            shared_prefix_length(&space, &s(&["e111", "e001"])).unwrap(),
            0
        );
        assert_eq!(
            shared_prefix_length(&space, &Subset::empty()),
            Err(Error::EmptySubset)
        );
    }

    #[test]
    fn shared_prefix_respects_importance_order() {
        // With c3 most important, e111 and e001 agree on it.
        let space = worked_space().with_importance_order(vec![2, 0, 1]).unwrap();
        let s = space.subset_of(["e111", "e001"]).unwrap();
        assert_eq!(shared_prefix_length(&space, &s).unwrap(), 1);
    }

    #[test]
    fn grouping() {
        let space = worked_space();
        assert_eq!(group_atoms_by_profile(&space).len(), 3);

        let space = EventSpace::from_atoms(
            &["c1", "c2", "c3"],
            vec![0.into(), 0.into(), 1.into()],
            None,
            vec![
                Atom::new("a", [1, 1, 0]),
                Atom::new("c", [0, 0, 1]),
                Atom::new("b", [1, 1, 0]),
            ],
        )
        .unwrap();
        assert_eq!(
            group_atoms_by_profile(&space),
            vec![Subset::from_indices([0, 2]), Subset::singleton(1)]
        );
    }

    #[test]
    fn importance_sweeps() {
        // Reference (0,0); atoms (0,0),(1,0),(0,1) with utilities 10, 0, 5.
        // Brute force: sweep for c1 is {(0,0),(1,0)} -> 10 - 0; for c2 {(0,0),(0,1)} -> 10 - 5.
        let space = EventSpace::from_atoms(
            &["c1", "c2"],
            vec![0.into(), 0.into()],
            None,
            vec![
                Atom::new("a", [0, 0]),
                Atom::new("b", [1, 0]),
                Atom::new("c", [0, 1]),
            ],
        )
        .unwrap();
        let u = UtilityTable::new(vec!["d".into()], vec![vec![10.0, 0.0, 5.0]], 0.0).unwrap();
        let ranking = rank_characteristics(&space, &u).unwrap();
        assert_eq!(ranking.importance, vec![10.0, 5.0]);
        assert_eq!(ranking.order, vec![0, 1]);
        assert!(ranking.missing_sweeps.is_empty());

        // Swap utilities so c2 matters more.
        let u = UtilityTable::new(vec!["d".into()], vec![vec![10.0, 8.0, 0.0]], 0.0).unwrap();
        assert_eq!(rank_characteristics(&space, &u).unwrap().order, vec![1, 0]);
    }

    #[test]
    fn constant_utility_gives_identity() {
        let space = worked_space();
        let u =
            UtilityTable::new(vec!["d1".into(), "d2".into()], vec![vec![3.0; 3]; 2], 3.0).unwrap();
        let ranking = rank_characteristics(&space, &u).unwrap();
        assert_eq!(ranking.order, vec![0, 1, 2]);
        assert!(ranking.importance.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn missing_sweep_is_reported() {
        // Reference (0,0,0); every atom differs from it in two places, so no
        // sweep has any atom.
        let space = EventSpace::from_atoms(
            &["c1", "c2", "c3"],
            vec![0.into(), 0.into(), 0.into()],
            None,
            vec![
                Atom::new("a", [0, 1, 1]),
                Atom::new("b", [1, 0, 1]),
                Atom::new("c", [1, 1, 0]),
            ],
        )
        .unwrap();
        let u = UtilityTable::new(vec!["d".into()], vec![vec![1.0, 2.0, 3.0]], 0.0).unwrap();
        let ranking = rank_characteristics(&space, &u).unwrap();
        assert_eq!(ranking.missing_sweeps, vec![0, 1, 2]);
        assert_eq!(ranking.importance, vec![0.0; 3]);
        assert_eq!(ranking.order, vec![0, 1, 2]);
    }

    #[test]
    fn single_characteristic() {
        let space = EventSpace::from_atoms(
            &["c"],
            vec![0.into()],
            None,
            vec![Atom::new("a", [0]), Atom::new("b", [1])],
        )
        .unwrap();
        let u = UtilityTable::new(vec!["d".into()], vec![vec![1.0, 4.0]], 0.0).unwrap();
        let ranking = rank_characteristics(&space, &u).unwrap();
        assert_eq!(ranking.order, vec![0]);
        assert_eq!(ranking.importance, vec![3.0]);
    }

    #[test]
    fn permuting_by_own_ranking_gives_identity() {
        let space = EventSpace::from_atoms(
            &["c1", "c2"],
            vec![0.into(), 0.into()],
            None,
            vec![
                Atom::new("a", [0, 0]),
                Atom::new("b", [1, 0]),
                Atom::new("c", [0, 1]),
            ],
        )
        .unwrap();
        let u = UtilityTable::new(vec!["d".into()], vec![vec![10.0, 8.0, 0.0]], 0.0).unwrap();
        let order = rank_characteristics(&space, &u).unwrap().order;
        let sorted = space.permute_characteristics(&order).unwrap();
        assert_eq!(rank_characteristics(&sorted, &u).unwrap().order, vec![0, 1]);
    }
}
