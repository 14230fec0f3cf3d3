//! Cycle-based synthesis: disjoint extraction of transpositions, subcube
//! hits, and grouped wide-gate realization, with optional left/right
//! multiplication search.

mod extend;
mod hypercube;
mod matrix;

pub use extend::{extend_to_bijection, minimal_lines, LineLayout};
pub use hypercube::{find_hypercube, CubeDescriptor, CubeHit};
pub use matrix::{
    build_matrix, decompose_mct, realize_final, to_canonical_form, zero_duplicate_columns,
    FinalRealization, GroupMatrix, MatrixStage,
};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::circuit::{Circuit, SimError};
use crate::gate::{Gate, GateError};
use crate::perm::{
    broken_count, distance_histogram, pair_key, pick_delta, split_cycle, Parity, PermError,
    Permutation, SplitSide, Transposition, TranspositionGroup,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("odd permutation rejected by the ancilla policy")]
    OddPermutationRejected,
    #[error("no affine alignment exists for the group")]
    CanonicalizationFailed,
    #[error("not enough spare lines to decompose the wide gate")]
    InsufficientLines,
    #[error("matrix is not in the {expected} stage")]
    WrongStage { expected: &'static str },
    #[error("target line {0} is not a distinct nonzero column")]
    InvalidTarget(usize),
    #[error("distinct column set does not match the varying columns")]
    DistinctColumnsMismatch,
    #[error("group size must be between 1 and n-1")]
    InvalidGroupSize,
    #[error("specification cannot be extended to a bijection on the given lines")]
    InfeasibleSpec,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Disposition of odd permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AncillaPolicy {
    /// Fail on odd input.
    RejectOdd,
    /// Append one identity line, which makes any permutation even.
    AddLine,
}

/// Tuning knobs for the cycle engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthParams {
    /// Transposition group size; `None` picks `floor(log2 n)`. Grouping
    /// uses the largest power of two at most this value, so a plain wide
    /// gate realizes each group exactly.
    pub group_size: Option<usize>,
    /// Search for Boolean subcubes before grouping.
    pub hypercube: bool,
    /// Explore both left and right multiplication at every disjoint step.
    pub lr_search: bool,
    pub ancilla: AncillaPolicy,
    /// Accept a cube only when it emits fewer than `factor * consumed`
    /// gates.
    pub cube_accept_factor: u32,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            group_size: None,
            hypercube: true,
            lr_search: false,
            ancilla: AncillaPolicy::AddLine,
            cube_accept_factor: 3,
        }
    }
}

impl SynthParams {
    fn effective_group_size(&self, width: usize) -> Result<usize, SynthError> {
        let k = match self.group_size {
            Some(k) => {
                if k < 1 || (width > 1 && k > width - 1) {
                    return Err(SynthError::InvalidGroupSize);
                }
                k
            }
            None => (usize::BITS - 1 - width.leading_zeros()) as usize,
        };
        let k = k.max(1);
        // Round down to a power of two: a group is realized by one wide gate
        // only when its vectors fill a full subcube.
        Ok(1usize << (usize::BITS - 1 - k.leading_zeros()))
    }
}

/// Synthesizes an even permutation; odd input is rejected or extended by one
/// line depending on the ancilla policy.
pub fn synthesize(spec: &Permutation, params: &SynthParams) -> Result<Circuit, SynthError> {
    let spec = if spec.parity() == Parity::Odd {
        match params.ancilla {
            AncillaPolicy::RejectOdd => return Err(SynthError::OddPermutationRejected),
            AncillaPolicy::AddLine => spec.extend_line(),
        }
    } else {
        spec.clone()
    };
    synthesize_gt(&spec, params)
}

/// Synthesizes any permutation, odd ones included, on its own line count.
/// Odd permutations need at least one full-control gate, so the output stays
/// within the GT library rather than NCT.
pub fn synthesize_gt(spec: &Permutation, params: &SynthParams) -> Result<Circuit, SynthError> {
    let width = spec.width();
    let k_eff = params.effective_group_size(width)?;
    let mut prefix: Vec<Gate> = Vec::new();
    let mut suffix: Vec<Gate> = Vec::new();
    let mut current = spec.clone();
    while !current.is_identity() {
        let before = current.transposition_count();
        let hist = distance_histogram(&current);
        let delta = pick_delta(&hist).expect("non-identity permutation has element pairs");
        let round = run_round(&current, delta, params);
        prefix.extend(realize_sequence(&round.left, width, k_eff, params)?);
        let mut s = realize_sequence(&round.right, width, k_eff, params)?;
        s.append(&mut suffix);
        suffix = s;
        current = round.residual;
        debug_assert!(current.transposition_count() < before);
    }
    prefix.append(&mut suffix);
    Ok(Circuit::from_gates(width, prefix)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Left,
    Right,
}

/// Snapshot of one disjoint step, as seen by the left/right exploration.
pub struct LrState<'a> {
    pub width: usize,
    /// The cycle about to be split.
    pub cycle: &'a [u32],
    /// Remaining candidate pairs of the cycle at the current distance.
    pub pairs: &'a [(u32, u32)],
    /// Transpositions already extracted to each side in this round.
    pub pending_left: &'a [Transposition],
    pub pending_right: &'a [Transposition],
    pub params: &'a SynthParams,
}

/// Runs both split continuations one step and keeps a branch: more surviving
/// pairs first, then fewer realized gates over the pending pools, then left.
pub fn lr_explore(state: &LrState, t: &Transposition) -> Branch {
    let p = pair_key(t.a().value(), t.b().value());
    let survive = |side: SplitSide| {
        state.pairs.len() - 1 - broken_count(state.cycle, state.pairs, p, side)
    };
    let (sl, sr) = (survive(SplitSide::Left), survive(SplitSide::Right));
    if sl != sr {
        return if sl > sr { Branch::Left } else { Branch::Right };
    }
    let k_eff = match state.params.effective_group_size(state.width) {
        Ok(k) => k,
        Err(_) => return Branch::Left,
    };
    let probe = |left_extra: Option<&Transposition>, right_extra: Option<&Transposition>| {
        let mut l = state.pending_left.to_vec();
        l.extend(left_extra.copied());
        let mut r = state.pending_right.to_vec();
        r.extend(right_extra.copied());
        let gl = realize_sequence(&l, state.width, k_eff, state.params);
        let gr = realize_sequence(&r, state.width, k_eff, state.params);
        match (gl, gr) {
            (Ok(a), Ok(b)) => a.len() + b.len(),
            _ => usize::MAX,
        }
    };
    let cost_left = probe(Some(t), None);
    let cost_right = probe(None, Some(t));
    if cost_right < cost_left {
        Branch::Right
    } else {
        Branch::Left
    }
}

struct Round {
    left: Vec<Transposition>,
    /// Product order: the latest extraction of each cycle comes first.
    right: Vec<Transposition>,
    residual: Permutation,
}

/// Extracts every pair at distance `delta` from every cycle, choosing the
/// split pair that breaks the fewest other pairs, and routing each extracted
/// transposition left or right.
fn run_round(current: &Permutation, delta: u32, params: &SynthParams) -> Round {
    let width = current.width();
    let mut left: Vec<Transposition> = Vec::new();
    let mut right: Vec<Transposition> = Vec::new();
    let mut residual_cycles: Vec<Vec<u32>> = Vec::new();

    for cycle in current.cycles() {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for i in 0..cycle.len() {
            for j in i + 1..cycle.len() {
                if (cycle[i] ^ cycle[j]).count_ones() == delta {
                    pairs.push(pair_key(cycle[i], cycle[j]));
                }
            }
        }
        let mut work: Vec<Vec<u32>> = vec![cycle.clone()];
        let mut local_right: Vec<Transposition> = Vec::new();
        while !pairs.is_empty() {
            let (_, chosen) = pairs
                .iter()
                .map(|&p| {
                    let cyc = work.iter().find(|c| c.contains(&p.0)).unwrap();
                    (broken_count(cyc, &pairs, p, SplitSide::Left), p)
                })
                .min()
                .unwrap();
            let (ci, cyc) = work
                .iter()
                .enumerate()
                .find(|(_, c)| c.contains(&chosen.0))
                .map(|(i, c)| (i, c.clone()))
                .unwrap();
            let tr = Transposition::from_values(width, chosen.0, chosen.1)
                .expect("delta pair is a valid transposition");
            let side = if params.lr_search {
                let state = LrState {
                    width,
                    cycle: &cyc,
                    pairs: &pairs,
                    pending_left: &left,
                    pending_right: &right,
                    params,
                };
                match lr_explore(&state, &tr) {
                    Branch::Left => SplitSide::Left,
                    Branch::Right => SplitSide::Right,
                }
            } else {
                SplitSide::Left
            };
            let subs = split_cycle(&cyc, chosen.0, chosen.1, side);
            work.splice(ci..=ci, subs);
            match side {
                SplitSide::Left => left.push(tr),
                SplitSide::Right => local_right.insert(0, tr),
            }
            pairs.retain(|q| {
                *q != chosen && work.iter().any(|c| c.contains(&q.0) && c.contains(&q.1))
            });
        }
        right.extend(local_right);
        residual_cycles.extend(work);
    }
    let residual = Permutation::from_cycles(width, residual_cycles)
        .expect("sub-cycles of disjoint cycles stay disjoint");
    Round { left, right, residual }
}

/// Realizes an ordered transposition sequence as gates: splits it into
/// pairwise-independent layers, takes subcube hits inside each layer, and
/// groups the rest by difference mask.
fn realize_sequence(
    seq: &[Transposition],
    width: usize,
    k_eff: usize,
    params: &SynthParams,
) -> Result<Vec<Gate>, SynthError> {
    let mut gates = Vec::new();
    let mut layer: Vec<Transposition> = Vec::new();
    for t in seq {
        if layer.iter().any(|u| u.shares_vector(t)) {
            gates.extend(realize_layer(std::mem::take(&mut layer), width, k_eff, params)?);
        }
        layer.push(*t);
    }
    if !layer.is_empty() {
        gates.extend(realize_layer(layer, width, k_eff, params)?);
    }
    Ok(gates)
}

fn realize_layer(
    layer: Vec<Transposition>,
    width: usize,
    k_eff: usize,
    params: &SynthParams,
) -> Result<Vec<Gate>, SynthError> {
    let mut pool = layer;
    let mut gates = Vec::new();
    if params.hypercube {
        while let Some(hit) = find_hypercube(&pool) {
            if hit.gates.len() as u32 >= params.cube_accept_factor * hit.consumed.len() as u32 {
                break;
            }
            gates.extend(hit.gates.iter().copied());
            pool.retain(|t| !hit.consumed.contains(t));
        }
    }
    let mut buckets: BTreeMap<u32, Vec<Transposition>> = BTreeMap::new();
    for t in pool {
        buckets.entry(t.diff()).or_default().push(t);
    }
    for (_, mut bucket) in buckets {
        bucket.sort();
        while !bucket.is_empty() {
            let max = k_eff.min(bucket.len());
            let size = 1usize << (usize::BITS - 1 - max.leading_zeros());
            let group = TranspositionGroup::new(bucket.drain(..size).collect())?;
            gates.extend(realize_group(&group, params)?);
        }
    }
    Ok(gates)
}

/// Realizes one group through the matrix pipeline; on a failed alignment the
/// group splits in half and both halves are realized independently.
fn realize_group(group: &TranspositionGroup, params: &SynthParams) -> Result<Vec<Gate>, SynthError> {
    let width = group.width();
    let m0 = build_matrix(group);
    let (m1, conj_dedup) = zero_duplicate_columns(&m0)?;
    let t = choose_target(&m1);
    match to_canonical_form(&m1, t) {
        Ok((m2, conj_canon)) => {
            let distinct = m2.varying_lines();
            let fin = realize_final(&m2, &distinct, t)?;
            let mid = if group.len() > 1 {
                let controls: Vec<usize> = fin.gate.positive().iter().collect();
                let spares: Vec<usize> = distinct.without(t).iter().collect();
                decompose_mct(&controls, t, &spares)?
            } else {
                vec![fin.gate]
            };
            let mut conj: Vec<Gate> = conj_dedup.gates().to_vec();
            conj.extend(conj_canon.gates().iter().copied());
            conj.extend(fin.not_conjugator.gates().iter().copied());
            let mut gates = conj.clone();
            gates.extend(mid);
            gates.extend(conj.into_iter().rev());
            debug_assert!({
                let c = Circuit::from_gates(width, gates.clone()).unwrap();
                c.simulate_with_cap(crate::gate::MAX_LINES).unwrap()
                    == group.to_permutation().to_table()
            });
            Ok(gates)
        }
        Err(SynthError::CanonicalizationFailed) if group.len() > 1 => {
            let ts = group.transpositions();
            let half = ts.len() / 2;
            let mut gates =
                realize_group(&TranspositionGroup::new(ts[..half].to_vec())?, params)?;
            gates.extend(realize_group(
                &TranspositionGroup::new(ts[half..].to_vec())?,
                params,
            )?);
            Ok(gates)
        }
        Err(e) => Err(e),
    }
}

/// Picks the controlled-output line: the smallest line where the pair
/// difference has a 1, which keeps the alignment gate count minimal.
fn choose_target(m: &GroupMatrix) -> usize {
    let width = m.width();
    let delta = m.rows()[0] ^ m.rows()[1];
    (1..=width)
        .find(|&l| delta & (1 << (width - l)) != 0)
        .expect("transposition endpoints differ")
}
