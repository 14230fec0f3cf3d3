//! Embedding of irreversible or partial specifications into bijections.
//!
//! Inputs occupy the leading lines, added constant-0 lines follow, and the
//! outputs are read from the trailing lines. Don't-care output bits and
//! garbage values are assigned greedily by minimal input/output Hamming
//! distance; a matching fallback guarantees an embedding whenever one
//! exists.

use std::collections::BTreeMap;

use crate::circuit::TruthTable;
use crate::gate::MAX_LINES;
use crate::io::SpecFile;
use crate::perm::{Parity, Permutation};

use super::SynthError;

/// Where the specification's inputs, constants, and outputs live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineLayout {
    pub lines: usize,
    pub inputs: Vec<usize>,
    pub constants: Vec<(usize, bool)>,
    pub outputs: Vec<usize>,
}

/// Extends `spec` to a bijection on `lines` lines.
pub fn extend_to_bijection(
    spec: &SpecFile,
    lines: usize,
) -> Result<(TruthTable, LineLayout), SynthError> {
    let n = spec.inputs();
    let m = spec.outputs();
    if lines < n.max(m) || lines > MAX_LINES {
        return Err(SynthError::InfeasibleSpec);
    }
    let layout = LineLayout {
        lines,
        inputs: (1..=n).collect(),
        constants: (n + 1..=lines).map(|l| (l, false)).collect(),
        outputs: (lines - m + 1..=lines).collect(),
    };

    // A total square bijection embeds as itself.
    if lines == n && m == n {
        if let Some(t) = spec.as_bijection() {
            return Ok((t, layout));
        }
    }

    let size = 1usize << lines;
    let shift = lines - n;
    // Candidate targets for an input row, nearest first.
    let candidates = |x: u32| -> Vec<u32> {
        let v = x << shift;
        let row = spec.row(x);
        let mut c: Vec<u32> = (0..size as u32)
            .filter(|&w| {
                row.iter().enumerate().all(|(k, sym)| match sym {
                    None => true,
                    Some(bit) => (w >> (m - 1 - k)) & 1 == *bit as u32,
                })
            })
            .collect();
        c.sort_by_key(|&w| ((w ^ v).count_ones(), w));
        c
    };

    // Most constrained rows first.
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.sort_by_key(|&x| {
        let free = spec.row(x).iter().filter(|s| s.is_none()).count();
        (free, x)
    });

    let mut target_of: BTreeMap<u32, u32> = BTreeMap::new(); // input row -> target
    let mut source_of: BTreeMap<u32, u32> = BTreeMap::new(); // target -> input row
    for &x in &order {
        let mut visited = vec![false; 1 << n];
        if !augment(x, &candidates, &mut target_of, &mut source_of, &mut visited) {
            return Err(SynthError::InfeasibleSpec);
        }
    }

    // Fill the remaining domain points (constants off their declared value)
    // with the nearest unused targets.
    let mut values = vec![u32::MAX; size];
    for (&x, &w) in &target_of {
        values[(x as usize) << shift] = w;
    }
    let mut free_targets: Vec<u32> =
        (0..size as u32).filter(|w| !source_of.contains_key(w)).collect();
    let mut free_domain: Vec<u32> = Vec::new();
    for v in 0..size as u32 {
        if values[v as usize] == u32::MAX {
            free_domain.push(v);
        }
    }
    for &v in &free_domain {
        let (idx, _) = free_targets
            .iter()
            .enumerate()
            .min_by_key(|(_, &w)| ((w ^ v).count_ones(), w))
            .expect("equal counts of free domain and target points");
        values[v as usize] = free_targets.swap_remove(idx);
    }

    let mut table = TruthTable::new(lines, values);

    // Prefer an even permutation when free points allow: swap the two free
    // assignments whose exchange costs the least distance.
    if free_domain.len() >= 2 {
        let p = Permutation::from_table(&table).expect("matching produced a bijection");
        if p.parity() == Parity::Odd {
            let d = |a: u32, b: u32| (a ^ b).count_ones() as i64;
            let mut best: Option<(i64, u32, u32)> = None;
            for i in 0..free_domain.len() {
                for j in i + 1..free_domain.len() {
                    let (v1, v2) = (free_domain[i], free_domain[j]);
                    let (w1, w2) = (table.apply(v1), table.apply(v2));
                    let cand = (d(v1, w2) + d(v2, w1) - d(v1, w1) - d(v2, w2), v1, v2);
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            if let Some((_, v1, v2)) = best {
                let (w1, w2) = (table.apply(v1), table.apply(v2));
                table.set(v1, w2);
                table.set(v2, w1);
            }
        }
    }

    Ok((table, layout))
}

fn augment(
    x: u32,
    candidates: &impl Fn(u32) -> Vec<u32>,
    target_of: &mut BTreeMap<u32, u32>,
    source_of: &mut BTreeMap<u32, u32>,
    visited: &mut [bool],
) -> bool {
    for w in candidates(x) {
        match source_of.get(&w).copied() {
            None => {
                target_of.insert(x, w);
                source_of.insert(w, x);
                return true;
            }
            Some(owner) => {
                if visited[owner as usize] {
                    continue;
                }
                visited[owner as usize] = true;
                if augment(owner, candidates, target_of, source_of, visited) {
                    target_of.insert(x, w);
                    source_of.insert(w, x);
                    return true;
                }
            }
        }
    }
    false
}

/// Smallest line count on which the specification embeds.
pub fn minimal_lines(spec: &SpecFile) -> Result<usize, SynthError> {
    for lines in spec.inputs().max(spec.outputs())..=MAX_LINES {
        if extend_to_bijection(spec, lines).is_ok() {
            return Ok(lines);
        }
    }
    Err(SynthError::InfeasibleSpec)
}
