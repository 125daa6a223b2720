//! Mass functions over the power set of foreseen atoms and the set functions
//! derived from them: commonality, normalized commonality, belief,
//! plausibility and the additive probability sandwiched between the last two.

use std::collections::HashMap;

use crate::event_space::EventSpace;
use crate::{Error, Result, Subset, EPS_NORM};

/// Basic probability assignment over nonempty subsets of a frame of atoms.
///
/// Focal elements are kept in canonical subset order with strictly positive
/// mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: usize,
    focal: Vec<(Subset, f64)>,
}

impl MassFunction {
    /// Validates and normalizes `entries` over atoms `0..frame`. Duplicate
    /// subsets are merged by summing their masses; zero masses are dropped.
    pub fn new(frame: usize, entries: Vec<(Subset, f64)>) -> Result<Self> {
        if frame == 0 {
            return Err(Error::NoAtoms);
        }
        let mut merged: HashMap<Subset, f64> = HashMap::with_capacity(entries.len());
        for (subset, mass) in entries {
            if !mass.is_finite() {
                return Err(Error::NonFinite(mass));
            }
            if mass < 0.0 {
                return Err(Error::NegativeMass(mass));
            }
            match subset.max_index() {
                None => return Err(Error::EmptyFocalSet),
                Some(i) if i >= frame => return Err(Error::AtomOutOfFrame { index: i, frame }),
                Some(_) => {}
            }
            *merged.entry(subset).or_insert(0.0) += mass;
        }
        let mut focal: Vec<(Subset, f64)> = merged.into_iter().filter(|(_, m)| *m > 0.0).collect();
        focal.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let total: f64 = focal.iter().map(|(_, m)| m).sum();
        if (total - 1.0).abs() > EPS_NORM {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self { frame, focal })
    }

    pub fn frame(&self) -> usize {
        self.frame
    }

    pub fn focal_elements(&self) -> &[(Subset, f64)] {
        &self.focal
    }

    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    /// Mass of exactly `subset` (zero when it is not focal).
    pub fn mass(&self, subset: &Subset) -> f64 {
        self.focal
            .binary_search_by(|(s, _)| s.cmp(subset))
            .map(|i| self.focal[i].1)
            .unwrap_or(0.0)
    }

    pub fn is_bayesian(&self) -> bool {
        self.focal.iter().all(|(s, _)| s.len() == 1)
    }
}

/// Mass function over the atoms of `space`, rejecting subsets that cite
/// atoms outside it.
pub fn make_mass(space: &EventSpace, entries: Vec<(Subset, f64)>) -> Result<MassFunction> {
    MassFunction::new(space.atom_count(), entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommonalityKind {
    /// `C(E) = sum over A containing E of m(A)`.
    Shafer,
    /// `C^N(E) = sum over A containing E of m(A) / |A|`.
    Normalized,
}

/// Per-atom commonality values.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonalityVector {
    values: Vec<f64>,
    kind: CommonalityKind,
}

impl CommonalityVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> CommonalityKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Which lattice algorithm computes per-atom normalized commonalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    /// Dense when the focal count exceeds `2^n / n` and `n` is within the cap.
    #[default]
    Auto,
    /// Spread each focal mass over its members: `O(sum |A|)`.
    Sparse,
    /// Superset-sum transform over the whole lattice: `O(n 2^n)`.
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeConfig {
    pub algorithm: Algorithm,
    /// Largest frame the dense path accepts.
    pub dense_cap: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Auto,
            dense_cap: 24,
        }
    }
}

impl LatticeConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }

    /// The concrete algorithm used for `mf`.
    pub fn resolve(&self, mf: &MassFunction) -> Algorithm {
        match self.algorithm {
            Algorithm::Auto => {
                let n = mf.frame();
                if n <= self.dense_cap.min(63)
                    && mf.focal_count() as f64 > (1u64 << n) as f64 / n as f64
                {
                    Algorithm::Dense
                } else {
                    Algorithm::Sparse
                }
            }
            other => other,
        }
    }
}

/// Shafer commonality `C(E)` of an arbitrary nonempty subset.
pub fn commonality(mf: &MassFunction, subset: &Subset) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(mf
        .focal
        .iter()
        .filter(|(a, _)| a.is_superset_of(subset))
        .map(|(_, m)| m)
        .fold(0.0, |acc, m| acc + m))
}

/// Normalized commonality `C^N(E)` of an arbitrary nonempty subset.
pub fn normalized_commonality(mf: &MassFunction, subset: &Subset) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(mf
        .focal
        .iter()
        .filter(|(a, _)| a.is_superset_of(subset))
        .map(|(a, m)| m / a.len() as f64)
        .fold(0.0, |acc, m| acc + m))
}

/// Per-atom normalized commonalities with the default lattice configuration.
pub fn atom_normalized_commonalities(mf: &MassFunction) -> Result<CommonalityVector> {
    atom_normalized_commonalities_with(mf, &LatticeConfig::default())
}

pub fn atom_normalized_commonalities_with(
    mf: &MassFunction,
    config: &LatticeConfig,
) -> Result<CommonalityVector> {
    let values = match config.resolve(mf) {
        Algorithm::Dense => {
            let table = normalized_commonality_table(mf, config.dense_cap)?;
            (0..mf.frame).map(|i| table[1usize << i]).collect()
        }
        _ => {
            let mut values = vec![0.0; mf.frame];
            for (a, m) in &mf.focal {
                let share = m / a.len() as f64;
                for i in a.iter() {
                    values[i] += share;
                }
            }
            values
        }
    };
    Ok(CommonalityVector {
        values,
        kind: CommonalityKind::Normalized,
    })
}

/// Per-atom Shafer commonalities `C({E})`.
pub fn atom_commonalities(mf: &MassFunction) -> CommonalityVector {
    let mut values = vec![0.0; mf.frame];
    for (a, m) in &mf.focal {
        for i in a.iter() {
            values[i] += m;
        }
    }
    CommonalityVector {
        values,
        kind: CommonalityKind::Shafer,
    }
}

fn lattice(
    mf: &MassFunction,
    cap: usize,
    weight: impl Fn(&Subset, f64) -> f64,
) -> Result<Vec<f64>> {
    let n = mf.frame;
    if n > cap.min(63) {
        return Err(Error::LatticeTooLarge {
            atoms: n,
            cap: cap.min(63),
        });
    }
    let mut table = vec![0.0; 1usize << n];
    for (a, m) in &mf.focal {
        let mask = a.to_mask().expect("frame fits in a mask") as usize;
        table[mask] += weight(a, *m);
    }
    superset_sums(&mut table);
    Ok(table)
}

/// `C^N` of every subset, indexed by bit mask (entry 0 holds the total mass).
pub fn normalized_commonality_table(mf: &MassFunction, cap: usize) -> Result<Vec<f64>> {
    lattice(mf, cap, |a, m| m / a.len() as f64)
}

/// Shafer `C` of every subset, indexed by bit mask.
pub fn commonality_table(mf: &MassFunction, cap: usize) -> Result<Vec<f64>> {
    lattice(mf, cap, |_, m| m)
}

/// In-place zeta transform over supersets: afterwards
/// `values[s] = sum over t containing s of old values[t]`.
///
/// # Panics
/// If the length is not a power of two.
pub fn superset_sums(values: &mut [f64]) {
    assert!(values.len().is_power_of_two());
    let mut half = 1;
    while half < values.len() {
        for block in values.chunks_exact_mut(2 * half) {
            let (without, with) = block.split_at_mut(half);
            for (w, v) in without.iter_mut().zip(with.iter()) {
                *w += *v;
            }
        }
        half <<= 1;
    }
}

/// `Bel(B)`: mass of focal elements inside `B`.
pub fn belief(mf: &MassFunction, subset: &Subset) -> f64 {
    mf.focal
        .iter()
        .filter(|(a, _)| a.is_subset_of(subset))
        .map(|(_, m)| m)
        .fold(0.0, |acc, m| acc + m)
}

/// `Pl(B)`: mass of focal elements meeting `B`.
pub fn plausibility(mf: &MassFunction, subset: &Subset) -> f64 {
    mf.focal
        .iter()
        .filter(|(a, _)| a.intersects(subset))
        .map(|(_, m)| m)
        .fold(0.0, |acc, m| acc + m)
}

/// `Pr(B) = sum over A of m(A) |A and B| / |A|`, the additive measure whose
/// atom values are the normalized commonalities.
pub fn additive_probability(mf: &MassFunction, subset: &Subset) -> f64 {
    mf.focal
        .iter()
        .map(|(a, m)| m * a.intersection_len(subset) as f64 / a.len() as f64)
        .fold(0.0, |acc, m| acc + m)
}

/// `Pr(B)` as the sum of atom values of a normalized commonality vector.
pub fn additive_probability_from_atoms(cn: &CommonalityVector, subset: &Subset) -> Result<f64> {
    if cn.kind != CommonalityKind::Normalized {
        return Err(Error::KindMismatch);
    }
    if let Some(i) = subset.max_index().filter(|&i| i >= cn.len()) {
        return Err(Error::AtomOutOfFrame {
            index: i,
            frame: cn.len(),
        });
    }
    Ok(subset
        .iter()
        .map(|i| cn.values[i])
        .fold(0.0, |acc, m| acc + m))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn s(ix: &[usize]) -> Subset {
        Subset::from_indices(ix.iter().copied())
    }

    // {a}:0.5, {a,b}:0.3, {a,b,c}:0.2 with a=0, b=1, c=2.
    fn nested() -> MassFunction {
        MassFunction::new(
            3,
            vec![(s(&[0]), 0.5), (s(&[0, 1]), 0.3), (s(&[0, 1, 2]), 0.2)],
        )
        .unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < TOL
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            MassFunction::new(2, vec![(Subset::empty(), 0.5), (s(&[0]), 0.5)]),
            Err(Error::EmptyFocalSet)
        );
        assert_eq!(
            MassFunction::new(2, vec![(s(&[0]), -0.1), (s(&[1]), 1.1)]),
            Err(Error::NegativeMass(-0.1))
        );
        assert!(matches!(
            MassFunction::new(2, vec![(s(&[0]), 0.9)]),
            Err(Error::NotNormalized(t)) if close(t, 0.9)
        ));
        assert_eq!(
            MassFunction::new(2, vec![(s(&[2]), 1.0)]),
            Err(Error::AtomOutOfFrame { index: 2, frame: 2 })
        );
        assert_eq!(MassFunction::new(2, vec![]), Err(Error::NotNormalized(0.0)));
    }

    #[test]
    fn empty_sums_are_positive_zero() {
        let mf = MassFunction::new(3, vec![(s(&[0]), 1.0)]).unwrap();
        for v in [
            belief(&mf, &s(&[1])),
            plausibility(&mf, &s(&[1])),
            commonality(&mf, &s(&[2])).unwrap(),
        ] {
            assert!(v == 0.0 && v.is_sign_positive());
        }
    }

    #[test]
    fn duplicates_merge() {
        let mf =
            MassFunction::new(2, vec![(s(&[0]), 0.25), (s(&[1]), 0.5), (s(&[0]), 0.25)]).unwrap();
        assert_eq!(mf.focal_count(), 2);
        assert_eq!(mf.mass(&s(&[0])), 0.5);
        assert_eq!(nested().focal_count(), 3);
    }

    #[test]
    fn commonality_examples() {
        let point = MassFunction::new(1, vec![(s(&[0]), 1.0)]).unwrap();
        assert_eq!(commonality(&point, &s(&[0])).unwrap(), 1.0);

        let mf = nested();
        assert!(close(commonality(&mf, &s(&[0])).unwrap(), 1.0));
        assert!(close(commonality(&mf, &s(&[1])).unwrap(), 0.5));
        assert!(close(commonality(&mf, &s(&[1, 2])).unwrap(), 0.2));
        assert!(close(commonality(&mf, &s(&[0, 1, 2])).unwrap(), 0.2));
        assert_eq!(commonality(&mf, &Subset::empty()), Err(Error::EmptySubset));
    }

    #[test]
    fn normalized_commonality_examples() {
        let mf = nested();
        let a = 0.5 + 0.3 / 2.0 + 0.2 / 3.0;
        let b = 0.3 / 2.0 + 0.2 / 3.0;
        let c = 0.2 / 3.0;
        assert!(close(normalized_commonality(&mf, &s(&[0])).unwrap(), a));
        assert!(close(normalized_commonality(&mf, &s(&[1])).unwrap(), b));
        assert!(close(normalized_commonality(&mf, &s(&[2])).unwrap(), c));
        assert!(close(normalized_commonality(&mf, &s(&[0, 1])).unwrap(), b));
        assert!(
            (a - 0.716667).abs() < 1e-6
                && (b - 0.216667).abs() < 1e-6
                && (c - 0.066667).abs() < 1e-6
        );
        assert_eq!(
            normalized_commonality(&mf, &Subset::empty()),
            Err(Error::EmptySubset)
        );
    }

    #[test]
    fn atom_vectors_both_paths() {
        let mf = nested();
        for algorithm in [Algorithm::Sparse, Algorithm::Dense] {
            let cn =
                atom_normalized_commonalities_with(&mf, &LatticeConfig::with_algorithm(algorithm))
                    .unwrap();
            assert_eq!(cn.kind(), CommonalityKind::Normalized);
            assert!(close(cn.values()[0], 0.5 + 0.15 + 0.2 / 3.0));
            assert!(close(cn.values()[1], 0.15 + 0.2 / 3.0));
            assert!(close(cn.values()[2], 0.2 / 3.0));
            assert!(close(cn.values().iter().sum::<f64>(), 1.0));
        }

        let full = MassFunction::new(4, vec![(Subset::full(4), 1.0)]).unwrap();
        assert_eq!(
            atom_normalized_commonalities(&full).unwrap().values(),
            &[0.25; 4]
        );

        let p = [0.1, 0.2, 0.3, 0.4];
        let bayes = MassFunction::new(
            4,
            p.iter()
                .enumerate()
                .map(|(i, &m)| (Subset::singleton(i), m))
                .collect(),
        )
        .unwrap();
        assert!(bayes.is_bayesian());
        assert_eq!(atom_normalized_commonalities(&bayes).unwrap().values(), &p);
    }

    #[test]
    fn dense_cap() {
        let mf = MassFunction::new(30, vec![(Subset::singleton(29), 1.0)]).unwrap();
        let config = LatticeConfig::with_algorithm(Algorithm::Dense);
        assert_eq!(
            atom_normalized_commonalities_with(&mf, &config),
            Err(Error::LatticeTooLarge { atoms: 30, cap: 24 })
        );
        assert_eq!(LatticeConfig::default().resolve(&mf), Algorithm::Sparse);
    }

    #[test]
    fn auto_picks_dense_for_crowded_lattices() {
        let entries: Vec<_> = (1u64..16)
            .map(|m| (Subset::from_mask(m), 1.0 / 15.0))
            .collect();
        let mf = MassFunction::new(4, entries).unwrap();
        assert_eq!(LatticeConfig::default().resolve(&mf), Algorithm::Dense);
        // 3 focal elements over 3 atoms exceeds 2^3 / 3.
        assert_eq!(
            LatticeConfig::default().resolve(&nested()),
            Algorithm::Dense
        );
        let point = MassFunction::new(4, vec![(Subset::singleton(0), 1.0)]).unwrap();
        assert_eq!(LatticeConfig::default().resolve(&point), Algorithm::Sparse);
    }

    #[test]
    fn tables_match_direct_queries() {
        let mf = nested();
        let cn = normalized_commonality_table(&mf, 24).unwrap();
        let c = commonality_table(&mf, 24).unwrap();
        for mask in 1u64..8 {
            let e = Subset::from_mask(mask);
            assert!(close(
                cn[mask as usize],
                normalized_commonality(&mf, &e).unwrap()
            ));
            assert!(close(c[mask as usize], commonality(&mf, &e).unwrap()));
        }
    }

    #[test]
    fn belief_plausibility_examples() {
        let mf = nested();
        assert!(close(belief(&mf, &Subset::full(3)), 1.0));
        assert_eq!(belief(&mf, &Subset::empty()), 0.0);
        assert_eq!(belief(&mf, &s(&[1, 2])), 0.0);
        assert!(close(belief(&mf, &s(&[0, 1])), 0.8));

        assert_eq!(plausibility(&mf, &Subset::empty()), 0.0);
        assert!(close(plausibility(&mf, &s(&[1, 2])), 0.5));
        assert!(close(plausibility(&mf, &s(&[0])), 1.0));
    }

    #[test]
    fn additive_probability_examples() {
        let mf = nested();
        let cn = atom_normalized_commonalities(&mf).unwrap();
        assert!(close(additive_probability(&mf, &Subset::full(3)), 1.0));
        let bc = 0.3 * 0.5 + 0.2 * (2.0 / 3.0);
        assert!(close(additive_probability(&mf, &s(&[1, 2])), bc));
        assert!(close(
            additive_probability_from_atoms(&cn, &s(&[1, 2])).unwrap(),
            bc
        ));
        assert!(close(additive_probability(&mf, &s(&[0])), cn.values()[0]));
        assert_eq!(
            additive_probability_from_atoms(&atom_commonalities(&mf), &s(&[0])),
            Err(Error::KindMismatch)
        );
    }

    #[test]
    fn shafer_atom_vector() {
        let c = atom_commonalities(&nested());
        assert_eq!(c.kind(), CommonalityKind::Shafer);
        assert!(
            close(c.values()[0], 1.0) && close(c.values()[1], 0.5) && close(c.values()[2], 0.2)
        );
    }

    #[test]
    fn zeta_transform_small() {
        let mut v = vec![1.0, 2.0, 4.0, 8.0];
        superset_sums(&mut v);
        assert_eq!(v, vec![15.0, 10.0, 12.0, 8.0]);
    }
}
