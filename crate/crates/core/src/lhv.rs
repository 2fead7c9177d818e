//! Deterministic local-hidden-variable strategies and their product tensors.
//!
//! A deterministic strategy pre-assigns a ±1 outcome to every analyzer
//! setting of every party. Its observable footprint is the rank-one product
//! tensor `T(i,j,k,…) = A_i·B_j·C_k·…`, and the local-hidden-variable
//! models of a given correlation tensor are exactly the convex combinations
//! of these product tensors. Flipping every sign of an even number of
//! parties leaves the product unchanged, so of the `2^Σ` raw strategies
//! (Σ = total setting count) only `2^(Σ−N+1)` produce distinct tensors for
//! `N` parties. [`build_basis`] enumerates one strategy per class directly,
//! without materializing the raw set.

use crate::error::{Error, Result};
use crate::quantum::SettingsGrid;
use crate::Sign;

/// Default bound on the total setting count Σ, limiting raw enumeration to
/// 2^24 strategies.
pub const DEFAULT_MAX_TOTAL_SETTINGS: usize = 24;

fn check_cap(counts: &[usize], cap: usize) -> Result<usize> {
    let total: usize = counts.iter().sum();
    if total > cap {
        return Err(Error::CapExceeded { total, cap });
    }
    Ok(total)
}

/// How aggressively [`build_basis_with`] merges strategies whose product
/// tensors coincide or mirror each other.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum DedupMode {
    /// All `2^Σ` strategies, no merging.
    Raw,
    /// Quotient by one global sign flip, keeping `2^(Σ−1)` strategies
    /// (the coarser count used when summing over half the hidden-variable
    /// range). Distinctness of the stored tensors is not guaranteed for
    /// more than two parties.
    GlobalFlip,
    /// Quotient by the full even-sign-flip group, keeping `2^(Σ−N+1)`
    /// strategies with pairwise distinct tensors. The default.
    EvenFlips,
}

impl DedupMode {
    /// Basis size for `parties` parties with `total` settings overall.
    pub fn basis_len(self, total: usize, parties: usize) -> u64 {
        match self {
            DedupMode::Raw => 1 << total,
            DedupMode::GlobalFlip => 1 << (total - 1),
            DedupMode::EvenFlips => 1 << (total + 1 - parties),
        }
    }

    /// Raw strategies represented by each basis element.
    pub fn multiplicity(self, parties: usize) -> u64 {
        match self {
            DedupMode::Raw => 1,
            DedupMode::GlobalFlip => 2,
            DedupMode::EvenFlips => 1 << (parties - 1),
        }
    }
}

/// A pre-assignment of ±1 outcomes to every setting of every party.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub struct DeterministicStrategy {
    assignments: Vec<Vec<Sign>>,
}

impl DeterministicStrategy {
    pub fn new(assignments: Vec<Vec<Sign>>) -> Self {
        Self { assignments }
    }

    /// Decodes strategy number `index` for the given per-party setting
    /// counts. Assignment bits are packed party-major, little-endian:
    /// bit 0 is party 0 setting 0, a zero bit means +1. Index 0 is the
    /// all-(+1) strategy.
    pub fn from_index(counts: &[usize], index: u64) -> Self {
        let total: usize = counts.iter().sum();
        debug_assert!(total < 64, "index space exceeds u64");
        debug_assert!(total == 64 || index < 1 << total);
        let mut assignments = Vec::with_capacity(counts.len());
        let mut bit = 0;
        for &c in counts {
            let mut party = Vec::with_capacity(c);
            for _ in 0..c {
                party.push(if index >> bit & 1 == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                });
                bit += 1;
            }
            assignments.push(party);
        }
        Self { assignments }
    }

    /// Inverse of [`from_index`](Self::from_index).
    pub fn to_index(&self) -> u64 {
        let mut index = 0u64;
        let mut bit = 0;
        for party in &self.assignments {
            for &s in party {
                if s == Sign::Minus {
                    index |= 1 << bit;
                }
                bit += 1;
            }
        }
        index
    }

    pub fn party_count(&self) -> usize {
        self.assignments.len()
    }

    pub fn assignments(&self) -> &[Vec<Sign>] {
        &self.assignments
    }

    /// The outcome this strategy fixes for one party at one setting.
    pub fn outcome(&self, party: usize, setting: usize) -> Sign {
        self.assignments[party][setting]
    }

    /// Checks the per-party assignment counts against a grid's.
    pub fn validate_against(&self, grid: &SettingsGrid) -> Result<()> {
        let counts = grid.counts();
        if self.assignments.len() != counts.len() {
            return Err(Error::StrategyShape {
                party: self.assignments.len().min(counts.len()),
                got: self.assignments.len(),
                expected: counts.len(),
            });
        }
        for (party, (a, &expected)) in self.assignments.iter().zip(&counts).enumerate() {
            if a.len() != expected {
                return Err(Error::StrategyShape {
                    party,
                    got: a.len(),
                    expected,
                });
            }
        }
        Ok(())
    }

    /// Flips every assignment of the given party.
    pub fn flip_party(&self, party: usize) -> Self {
        let mut assignments = self.assignments.clone();
        for s in &mut assignments[party] {
            *s = -*s;
        }
        Self { assignments }
    }

    /// The rank-one correlation tensor this strategy produces, built as an
    /// iterated outer product so the last party's index varies fastest.
    pub fn product_tensor(&self) -> ProductTensor {
        let mut signs = vec![Sign::Plus];
        for party in &self.assignments {
            let mut next = Vec::with_capacity(signs.len() * party.len());
            for &acc in &signs {
                for &s in party {
                    next.push(acc * s);
                }
            }
            signs = next;
        }
        ProductTensor {
            dims: self.assignments.iter().map(Vec::len).collect(),
            signs,
        }
    }
}

/// A dense ±1 tensor with rank-one product structure, stored row-major with
/// the last party's index fastest.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub struct ProductTensor {
    dims: Vec<usize>,
    signs: Vec<Sign>,
}

impl ProductTensor {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn get(&self, index: &[usize]) -> Sign {
        self.signs[crate::index::flat(&self.dims, index)]
    }

    /// Element-wise negation; the footprint of flipping one party's signs.
    pub fn negated(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            signs: self.signs.iter().map(|&s| -s).collect(),
        }
    }
}

/// Streaming enumeration of deterministic strategies in index order.
pub struct StrategyIter {
    counts: Vec<usize>,
    next: u64,
    end: u64,
}

impl Iterator for StrategyIter {
    type Item = DeterministicStrategy;

    fn next(&mut self) -> Option<DeterministicStrategy> {
        if self.next == self.end {
            return None;
        }
        let s = DeterministicStrategy::from_index(&self.counts, self.next);
        self.next += 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for StrategyIter {}

/// All `2^Σ` deterministic strategies for the grid, each exactly once, in
/// increasing index order. Errors when Σ exceeds the default cap.
pub fn enumerate_strategies(grid: &SettingsGrid) -> Result<StrategyIter> {
    enumerate_strategies_capped(grid, DEFAULT_MAX_TOTAL_SETTINGS)
}

/// [`enumerate_strategies`] with an explicit bound on the total setting
/// count.
pub fn enumerate_strategies_capped(grid: &SettingsGrid, cap: usize) -> Result<StrategyIter> {
    let counts = grid.counts();
    let total = check_cap(&counts, cap)?;
    Ok(StrategyIter {
        counts,
        next: 0,
        end: 1 << total,
    })
}

/// The deduplicated generator set of the local-hidden-variable polytope:
/// one representative strategy per dedup class, its product tensor, and the
/// number of raw strategies the class contains.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StrategyBasis {
    counts: Vec<usize>,
    mode: DedupMode,
    strategies: Vec<DeterministicStrategy>,
    tensors: Vec<ProductTensor>,
    multiplicity: u64,
}

impl StrategyBasis {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn mode(&self) -> DedupMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn strategies(&self) -> &[DeterministicStrategy] {
        &self.strategies
    }

    pub fn tensors(&self) -> &[ProductTensor] {
        &self.tensors
    }

    /// Raw strategies represented by each basis element.
    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    /// Sum of multiplicities over the basis, always `2^Σ`.
    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicity * self.tensors.len() as u64
    }

    /// Entries per tensor, ∏ per-party counts.
    pub fn entry_count(&self) -> usize {
        self.counts.iter().product()
    }
}

/// Builds the default basis: full even-flip dedup under the default cap.
pub fn build_basis(grid: &SettingsGrid) -> Result<StrategyBasis> {
    build_basis_with(grid, DedupMode::EvenFlips, DEFAULT_MAX_TOTAL_SETTINGS)
}

/// Builds the strategy basis for a grid under the given dedup mode and
/// total-settings cap.
///
/// Class representatives are enumerated directly by pinning assignment bits:
/// the even-flip group is transversed by fixing the first setting of every
/// party but the first to +1, the global-flip quotient by fixing the last
/// party's last setting to +1. Representatives are emitted in increasing
/// strategy-index order, so the result is deterministic.
pub fn build_basis_with(
    grid: &SettingsGrid,
    mode: DedupMode,
    cap: usize,
) -> Result<StrategyBasis> {
    let counts = grid.counts();
    let total = check_cap(&counts, cap)?;
    let parties = counts.len();

    let mut offsets = Vec::with_capacity(parties);
    let mut offset = 0;
    for &c in &counts {
        offsets.push(offset);
        offset += c;
    }

    let pinned: Vec<usize> = match mode {
        DedupMode::Raw => Vec::new(),
        DedupMode::GlobalFlip => vec![offsets[parties - 1] + counts[parties - 1] - 1],
        DedupMode::EvenFlips => offsets[1..].to_vec(),
    };
    let free: Vec<usize> = (0..total).filter(|b| !pinned.contains(b)).collect();

    let n = 1u64 << free.len();
    let mut strategies = Vec::with_capacity(n as usize);
    let mut tensors = Vec::with_capacity(n as usize);
    for k in 0..n {
        let mut index = 0u64;
        for (j, &pos) in free.iter().enumerate() {
            index |= (k >> j & 1) << pos;
        }
        let s = DeterministicStrategy::from_index(&counts, index);
        tensors.push(s.product_tensor());
        strategies.push(s);
    }

    Ok(StrategyBasis {
        counts,
        mode,
        strategies,
        tensors,
        multiplicity: mode.multiplicity(parties),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::SettingsGrid;
    use std::collections::HashSet;

    fn grid(counts: &[usize]) -> SettingsGrid {
        let angles: Vec<Vec<f64>> = counts
            .iter()
            .map(|&c| (0..c).map(|i| i as f64).collect())
            .collect();
        SettingsGrid::from_coplanar_angles(&angles).unwrap()
    }

    #[test]
    fn strategy_count_per_grid() {
        assert_eq!(enumerate_strategies(&grid(&[1, 1, 1])).unwrap().count(), 8);
        assert_eq!(enumerate_strategies(&grid(&[2, 2, 2])).unwrap().count(), 64);
        assert_eq!(enumerate_strategies(&grid(&[3, 3, 3])).unwrap().count(), 512);
    }

    #[test]
    fn strategies_are_distinct_and_indexed() {
        let all: Vec<_> = enumerate_strategies(&grid(&[2, 1, 2])).unwrap().collect();
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
        for (i, s) in all.iter().enumerate() {
            assert_eq!(s.to_index(), i as u64);
        }
    }

    #[test]
    fn index_zero_is_all_plus_and_bits_are_party_major() {
        let s = DeterministicStrategy::from_index(&[2, 2], 0);
        assert!(s.assignments().iter().flatten().all(|&x| x == Sign::Plus));

        // Bit 1 is party 0 setting 1; bit 2 is party 1 setting 0.
        let s = DeterministicStrategy::from_index(&[2, 2], 0b0110);
        assert_eq!(s.outcome(0, 0), Sign::Plus);
        assert_eq!(s.outcome(0, 1), Sign::Minus);
        assert_eq!(s.outcome(1, 0), Sign::Minus);
        assert_eq!(s.outcome(1, 1), Sign::Plus);
    }

    #[test]
    fn cap_is_enforced() {
        let g = grid(&[13, 12]);
        assert!(matches!(
            enumerate_strategies(&g),
            Err(Error::CapExceeded { total: 25, cap: 24 })
        ));
        assert!(enumerate_strategies_capped(&g, 25).is_ok());
        assert!(matches!(
            build_basis(&g),
            Err(Error::CapExceeded { total: 25, cap: 24 })
        ));
    }

    #[test]
    fn all_plus_strategy_gives_all_ones_tensor() {
        let t = DeterministicStrategy::from_index(&[2, 2, 2], 0).product_tensor();
        assert_eq!(t.dims(), &[2, 2, 2]);
        assert_eq!(t.len(), 8);
        assert!(t.signs().iter().all(|&s| s == Sign::Plus));
    }

    #[test]
    fn product_tensor_direct_product() {
        // A = (+1, −1), B = C = (+1, +1): the tensor depends only on A's
        // setting index.
        let s = DeterministicStrategy::new(vec![
            vec![Sign::Plus, Sign::Minus],
            vec![Sign::Plus, Sign::Plus],
            vec![Sign::Plus, Sign::Plus],
        ]);
        let t = s.product_tensor();
        for j in 0..2 {
            for k in 0..2 {
                assert_eq!(t.get(&[0, j, k]), Sign::Plus);
                assert_eq!(t.get(&[1, j, k]), Sign::Minus);
            }
        }
    }

    #[test]
    fn product_tensor_factorizes() {
        let g = grid(&[2, 3, 2]);
        for s in enumerate_strategies_capped(&g, 24).unwrap().step_by(7) {
            let t = s.product_tensor();
            for i in 0..2 {
                for j in 0..3 {
                    for k in 0..2 {
                        let expected =
                            s.outcome(0, i) * s.outcome(1, j) * s.outcome(2, k);
                        assert_eq!(t.get(&[i, j, k]), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn even_party_flips_preserve_the_tensor() {
        let s = DeterministicStrategy::from_index(&[2, 2, 2], 0b101_101);
        let t = s.product_tensor();
        assert_eq!(s.flip_party(0).flip_party(1).product_tensor(), t);
        assert_eq!(s.flip_party(0).flip_party(2).product_tensor(), t);
        assert_eq!(s.flip_party(1).product_tensor(), t.negated());
    }

    #[test]
    fn basis_sizes_match_dedup_mode() {
        for (counts, raw, even) in [
            (&[1usize, 1, 1][..], 8u64, 2u64),
            (&[2, 2, 2], 64, 16),
            (&[2, 2], 16, 8),
            (&[3, 3, 3], 512, 128),
        ] {
            let g = grid(counts);
            let parties = counts.len();
            let base = build_basis(&g).unwrap();
            assert_eq!(base.len() as u64, even);
            assert_eq!(base.multiplicity(), 1 << (parties - 1));
            assert_eq!(base.total_multiplicity(), raw);

            let half = build_basis_with(&g, DedupMode::GlobalFlip, 24).unwrap();
            assert_eq!(half.len() as u64, raw / 2);
            assert_eq!(half.total_multiplicity(), raw);

            let full = build_basis_with(&g, DedupMode::Raw, 24).unwrap();
            assert_eq!(full.len() as u64, raw);
        }
    }

    #[test]
    fn single_entry_basis_is_plus_and_minus() {
        let base = build_basis(&grid(&[1, 1, 1])).unwrap();
        assert_eq!(base.len(), 2);
        let signs: HashSet<_> = base.tensors().iter().map(|t| t.signs()[0]).collect();
        assert_eq!(signs, HashSet::from([Sign::Plus, Sign::Minus]));
    }

    #[test]
    fn dedup_matches_brute_force() {
        for counts in [&[2usize, 2, 2][..], &[1, 2], &[2, 2], &[1, 2, 3]] {
            let g = grid(counts);
            let raw: HashSet<ProductTensor> = enumerate_strategies(&g)
                .unwrap()
                .map(|s| s.product_tensor())
                .collect();
            let base = build_basis(&g).unwrap();
            let kept: HashSet<ProductTensor> = base.tensors().iter().cloned().collect();
            // Pairwise distinct and exactly the raw tensor set.
            assert_eq!(kept.len(), base.len());
            assert_eq!(kept, raw);

            // The coarser mode may repeat tensors but covers the same set.
            let half = build_basis_with(&g, DedupMode::GlobalFlip, 24).unwrap();
            let half_set: HashSet<ProductTensor> =
                half.tensors().iter().cloned().collect();
            assert_eq!(half_set, raw);
        }
    }

    #[test]
    fn basis_is_closed_under_negation() {
        let base = build_basis(&grid(&[2, 2, 2])).unwrap();
        let kept: HashSet<ProductTensor> = base.tensors().iter().cloned().collect();
        for t in base.tensors() {
            assert!(kept.contains(&t.negated()));
        }
    }

    #[test]
    fn basis_is_deterministic() {
        let g = grid(&[2, 3]);
        let a = build_basis(&g).unwrap();
        let b = build_basis(&g).unwrap();
        assert_eq!(a.tensors(), b.tensors());
        assert_eq!(a.strategies(), b.strategies());
    }

    #[test]
    fn strategy_shape_validation() {
        let g = grid(&[2, 2, 2]);
        let s = DeterministicStrategy::from_index(&[2, 2], 3);
        assert!(matches!(
            s.validate_against(&g),
            Err(Error::StrategyShape { .. })
        ));
        let s = DeterministicStrategy::from_index(&[2, 2, 1], 3);
        assert!(matches!(
            s.validate_against(&g),
            Err(Error::StrategyShape { party: 2, got: 1, expected: 2 })
        ));
        let s = DeterministicStrategy::from_index(&[2, 2, 2], 3);
        assert!(s.validate_against(&g).is_ok());
    }
}
