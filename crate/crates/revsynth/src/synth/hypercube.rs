//! Boolean subcube search over a pool of independent transpositions.
//!
//! Transpositions whose endpoints differ by one common mask and whose
//! vectors jointly fill a subcube are realized by one gate per toggled
//! coordinate, controlled on the fixed coordinates.

use std::collections::{BTreeMap, BTreeSet};

use crate::gate::{Gate, LineSet};
use crate::perm::Transposition;

/// A subcube pattern: fixed coordinates with polarities, toggled
/// coordinates, and the remaining free coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeDescriptor {
    pub fixed_positive: LineSet,
    pub fixed_negative: LineSet,
    pub toggles: LineSet,
    pub free: LineSet,
}

#[derive(Clone, Debug)]
pub struct CubeHit {
    pub cube: CubeDescriptor,
    pub gates: Vec<Gate>,
    pub consumed: Vec<Transposition>,
}

/// Finds the largest full subcube whose pairing matches a subset of the
/// pool, or `None`. The pool must hold pairwise independent transpositions.
pub fn find_hypercube(pool: &[Transposition]) -> Option<CubeHit> {
    if pool.is_empty() {
        return None;
    }
    let width = pool[0].width();
    let full_mask = ((1u64 << width) - 1) as u32;

    let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, t) in pool.iter().enumerate() {
        classes.entry(t.diff()).or_default().push(i);
    }

    // (consumed pairs, delta, free mask, fixed pattern)
    let mut best: Option<(usize, u32, u32, u32)> = None;
    for (&delta, idxs) in &classes {
        let dbits = delta.count_ones() as usize;
        // Base buckets share every non-toggled coordinate.
        let mut buckets: BTreeMap<u32, usize> = BTreeMap::new();
        for &i in idxs {
            *buckets.entry(pool[i].a().value() & !delta & full_mask).or_insert(0) += 1;
        }
        let needed = 1usize << (dbits - 1);
        let mut level: BTreeSet<(u32, u32)> = buckets
            .iter()
            .filter(|&(_, &count)| count == needed)
            .map(|(&pat, _)| (delta, pat))
            .collect();
        let mut candidates: Vec<(u32, u32)> = level.iter().copied().collect();
        // Merge full cubes pairwise along each remaining coordinate.
        while !level.is_empty() {
            let mut next: BTreeSet<(u32, u32)> = BTreeSet::new();
            for &(free, pat) in &level {
                for bitpos in 0..width {
                    let bit = 1u32 << bitpos;
                    if free & bit != 0 || pat & bit != 0 {
                        continue;
                    }
                    if level.contains(&(free, pat | bit)) {
                        next.insert((free | bit, pat));
                    }
                }
            }
            candidates.extend(next.iter().copied());
            level = next;
        }
        for (free, pat) in candidates {
            let consumed = 1usize << (free.count_ones() - 1);
            let cand = (consumed, delta, free, pat);
            let better = match best {
                None => true,
                Some(b) => {
                    cand.0 > b.0 || (cand.0 == b.0 && (cand.1, cand.2, cand.3) < (b.1, b.2, b.3))
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }

    let (_, delta, free, pat) = best?;
    let fixed = full_mask & !free;
    let toggles = LineSet::from_value_mask(delta, width);
    let cube = CubeDescriptor {
        fixed_positive: LineSet::from_value_mask(fixed & pat, width),
        fixed_negative: LineSet::from_value_mask(fixed & !pat, width),
        toggles,
        free: LineSet::from_value_mask(free & !delta, width),
    };
    let gates: Vec<Gate> = toggles
        .iter()
        .map(|d| Gate::new(cube.fixed_positive, cube.fixed_negative, d))
        .collect();
    let consumed: Vec<Transposition> = pool
        .iter()
        .filter(|t| t.diff() == delta && t.a().value() & !free & full_mask == pat)
        .copied()
        .collect();
    debug_assert_eq!(consumed.len() * 2, 1usize << free.count_ones());
    Some(CubeHit { cube, gates, consumed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, TruthTable};
    use crate::perm::TranspositionGroup;

    fn pool(width: usize, pairs: &[(u32, u32)]) -> Vec<Transposition> {
        pairs
            .iter()
            .map(|&(a, b)| Transposition::from_values(width, a, b).unwrap())
            .collect()
    }

    fn pairs_table(width: usize, ts: &[Transposition]) -> TruthTable {
        TranspositionGroup::new(ts.to_vec()).unwrap().to_permutation().to_table()
    }

    #[test]
    fn reference_three_cube() {
        // Four transpositions forming <1,0,*,*,*>: toggles {3,5}.
        let p = pool(
            5,
            &[
                (0b10000, 0b10101),
                (0b10001, 0b10100),
                (0b10010, 0b10111),
                (0b10011, 0b10110),
            ],
        );
        let hit = find_hypercube(&p).unwrap();
        assert_eq!(hit.cube.fixed_positive, LineSet::from_lines(&[1]));
        assert_eq!(hit.cube.fixed_negative, LineSet::from_lines(&[2]));
        assert_eq!(hit.cube.toggles, LineSet::from_lines(&[3, 5]));
        assert_eq!(hit.cube.free, LineSet::from_lines(&[4]));
        assert_eq!(
            hit.gates,
            vec![
                Gate::new(LineSet::from_lines(&[1]), LineSet::from_lines(&[2]), 3),
                Gate::new(LineSet::from_lines(&[1]), LineSet::from_lines(&[2]), 5),
            ]
        );
        assert_eq!(hit.consumed.len(), 4);
        // Emitted gates implement exactly the consumed transpositions.
        let c = Circuit::from_gates(5, hit.gates.clone()).unwrap();
        assert_eq!(c.simulate().unwrap(), pairs_table(5, &hit.consumed));
    }

    #[test]
    fn xor_line_collapses_to_single_cnot() {
        // x2 ^= x1 over three lines: pairs (100,110) and (101,111).
        let p = pool(3, &[(0b100, 0b110), (0b101, 0b111)]);
        let hit = find_hypercube(&p).unwrap();
        assert_eq!(hit.gates, vec![Gate::cnot(1, 2)]);
        assert_eq!(hit.consumed.len(), 2);
        let c = Circuit::from_gates(3, hit.gates.clone()).unwrap();
        assert_eq!(c.simulate().unwrap(), pairs_table(3, &hit.consumed));
    }

    #[test]
    fn single_distance_one_pair_is_a_degenerate_cube() {
        let p = pool(3, &[(0b101, 0b100)]);
        let hit = find_hypercube(&p).unwrap();
        assert_eq!(hit.cube.toggles, LineSet::from_lines(&[3]));
        assert!(hit.cube.free.is_empty());
        assert_eq!(hit.gates.len(), 1);
        assert_eq!(
            hit.gates[0],
            Gate::new(LineSet::from_lines(&[1]), LineSet::from_lines(&[2]), 3)
        );
    }

    #[test]
    fn lone_multibit_pair_has_no_cube() {
        // A single pair at distance 2 cannot fill a 2-toggle subcube.
        let p = pool(3, &[(0b000, 0b011)]);
        assert!(find_hypercube(&p).is_none());
    }

    #[test]
    fn prefers_the_larger_cube() {
        // Four distance-1 pairs merge into the cube <*,*,0,*> toggling line 4.
        let p = pool(
            4,
            &[(0b0000, 0b0001), (0b0100, 0b0101), (0b1000, 0b1001), (0b1100, 0b1101)],
        );
        let hit = find_hypercube(&p).unwrap();
        assert_eq!(hit.consumed.len(), 4);
        assert_eq!(
            hit.gates,
            vec![Gate::new(LineSet::EMPTY, LineSet::from_lines(&[3]), 4)]
        );
        let c = Circuit::from_gates(4, hit.gates.clone()).unwrap();
        assert_eq!(c.simulate().unwrap(), pairs_table(4, &hit.consumed));
    }
}
