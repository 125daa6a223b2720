//! Labelling unforeseen events with sets of foreseen atoms, and turning
//! assessed label probabilities into a mass function.

use std::collections::HashMap;

use crate::belief::MassFunction;
use crate::event_space::{group_atoms_by_profile, EventSpace, Level};
use crate::{Error, Result, Subset, EPS_NORM};

/// How an unforeseen event rates on each characteristic, positionally
/// aligned with the schema. Values may lie outside the foreseen ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnforeseenProfile {
    values: Vec<Level>,
}

impl UnforeseenProfile {
    pub fn new<I, L>(values: I) -> Self
    where
        I: IntoIterator<Item = L>,
        L: Into<Level>,
    {
        Self {
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    pub fn values(&self) -> &[Level] {
        &self.values
    }
}

/// The subset an unforeseen event is mapped to, and how many leading
/// characteristics matched. `depth == 0` iff the subset is empty, the label
/// for events resembling nothing foreseen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub subset: Subset,
    pub depth: usize,
}

impl Label {
    pub fn is_unrecognisable(&self) -> bool {
        self.subset.is_empty()
    }
}

/// Maps an unforeseen profile to the union of all foreseen events sharing its
/// first `r` characteristics, for the largest `r` where that union is
/// nonempty.
///
/// Any event with the same first `r` characteristics as the profile consists
/// only of atoms that individually match those values, and each matching atom
/// is such an event, so the union is the set of matching atoms. Each atom's
/// matching prefix length is computed once; the deepest nonempty level is the
/// largest of those lengths.
pub fn label_unforeseen(space: &EventSpace, profile: &UnforeseenProfile) -> Result<Label> {
    let m = space.characteristic_count();
    if profile.values.len() != m {
        return Err(Error::ProfileLengthMismatch {
            expected: m,
            found: profile.values.len(),
        });
    }
    let order = space.schema().importance_order();
    let prefix: Vec<usize> = space
        .atoms()
        .iter()
        .map(|a| {
            order
                .iter()
                .take_while(|&&k| a.profile[k] == profile.values[k])
                .count()
        })
        .collect();
    let depth = prefix.iter().copied().max().unwrap_or(0);
    if depth == 0 {
        return Ok(Label {
            subset: Subset::empty(),
            depth: 0,
        });
    }
    let subset = prefix
        .iter()
        .enumerate()
        .filter(|(_, &p)| p >= depth)
        .map(|(i, _)| i)
        .collect();
    Ok(Label { subset, depth })
}

/// The block of atoms sharing `atom_id`'s full profile.
pub fn relabel_atomic(space: &EventSpace, atom_id: &str) -> Result<Subset> {
    let index = space
        .atom_index(atom_id)
        .ok_or_else(|| Error::UnknownAtom(atom_id.to_string()))?;
    Ok(group_atoms_by_profile(space)
        .into_iter()
        .find(|block| block.contains(index))
        .expect("blocks partition the atoms"))
}

/// Assessed probabilities of labels, including the mass on the empty label.
#[derive(Debug, Clone, PartialEq)]
pub struct RawAssessment {
    frame: usize,
    labelled: Vec<(Subset, f64)>,
    empty_probability: f64,
}

impl RawAssessment {
    /// Entries labelled with the empty subset are folded into
    /// `empty_probability`, so output of [`label_unforeseen`] can be used
    /// directly. Duplicate labels are summed.
    pub fn new(frame: usize, labelled: Vec<(Subset, f64)>, empty_probability: f64) -> Result<Self> {
        let mut empty = empty_probability;
        let mut merged: HashMap<Subset, f64> = HashMap::new();
        for p in labelled.iter().map(|(_, p)| *p).chain([empty_probability]) {
            if !p.is_finite() {
                return Err(Error::NonFinite(p));
            }
            if p < 0.0 {
                return Err(Error::NegativeMass(p));
            }
        }
        for (subset, p) in labelled {
            if subset.is_empty() {
                empty += p;
                continue;
            }
            if let Some(i) = subset.max_index().filter(|&i| i >= frame) {
                return Err(Error::AtomOutOfFrame { index: i, frame });
            }
            *merged.entry(subset).or_insert(0.0) += p;
        }
        let total = empty + merged.values().sum::<f64>();
        if (total - 1.0).abs() > EPS_NORM {
            return Err(Error::NotNormalized(total));
        }
        let mut labelled: Vec<_> = merged.into_iter().collect();
        labelled.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(Self {
            frame,
            labelled,
            empty_probability: empty,
        })
    }

    pub fn frame(&self) -> usize {
        self.frame
    }

    pub fn labelled(&self) -> &[(Subset, f64)] {
        &self.labelled
    }

    pub fn empty_probability(&self) -> f64 {
        self.empty_probability
    }
}

/// Conditions on the empty label not occurring: `m(A) = Pr(A) / (1 - Pr(empty))`.
pub fn condition_on_foreseeable(raw: &RawAssessment) -> Result<MassFunction> {
    let keep = 1.0 - raw.empty_probability;
    if keep <= EPS_NORM {
        return Err(Error::AllMassUnforeseeable);
    }
    let entries = raw
        .labelled
        .iter()
        .map(|(s, p)| (s.clone(), p / keep))
        .collect();
    MassFunction::new(raw.frame, entries)
}
