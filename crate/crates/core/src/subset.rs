use std::cmp::Ordering;
use std::fmt;

/// A set of foreseen atoms, identified by their position in the event space.
///
/// Members are kept as a strictly increasing list of atom indices, so two
/// subsets with the same members compare equal regardless of how they were
/// built. This stays compact for frames with millions of atoms; the dense
/// lattice code converts to bit masks via [`Subset::to_mask`] when the frame
/// fits in a machine word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    members: Vec<u32>,
}

impl Subset {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(index: usize) -> Self {
        Self {
            members: vec![index as u32],
        }
    }

    /// All atoms `0..frame`.
    pub fn full(frame: usize) -> Self {
        Self {
            members: (0..frame as u32).collect(),
        }
    }

    /// Builds a subset from indices in any order; duplicates collapse.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut members: Vec<u32> = indices.into_iter().map(|i| i as u32).collect();
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut members = Vec::with_capacity(mask.count_ones() as usize);
        let mut rest = mask;
        while rest != 0 {
            members.push(rest.trailing_zeros());
            rest &= rest - 1;
        }
        Self { members }
    }

    /// Bit mask with bit `i` set for each member `i`, if every member is below 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.members.last() {
            Some(&max) if max >= 64 => None,
            _ => Some(self.members.iter().fold(0u64, |m, &i| m | (1u64 << i))),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Largest member index, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.members.last().map(|&i| i as usize)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&(index as u32)).is_ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.members.iter().map(|&i| i as usize)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut theirs = other.members.iter();
        'outer: for &x in &self.members {
            for &y in theirs.by_ref() {
                match y.cmp(&x) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn is_superset_of(&self, other: &Subset) -> bool {
        other.is_subset_of(self)
    }

    /// Number of atoms common to both subsets.
    pub fn intersection_len(&self, other: &Subset) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        let (a, b) = (&self.members, &other.members);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.members, &other.members);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset::from_indices(self.iter().chain(other.iter()))
    }

    /// Atoms of `0..frame` not in this subset.
    pub fn complement(&self, frame: usize) -> Subset {
        Subset {
            members: (0..frame as u32)
                .filter(|i| self.members.binary_search(i).is_err())
                .collect(),
        }
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_indices(iter)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}
