//! Transformation-based synthesis over truth tables, and the hybrid that
//! pushes high-weight rows out to the cycle engine.
//!
//! The sweep fixes rows in index order by appending gates on the output
//! side; a fixed prefix is never disturbed because every appended gate's
//! control set only matches values at or above the row being fixed.

use thiserror::Error;

use crate::circuit::{Circuit, SimError, TruthTable};
use crate::gate::{Gate, GateError, LineSet, MAX_LINES};
use crate::perm::{PermError, Permutation};
use crate::synth::{synthesize_gt, SynthError, SynthParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RmError {
    #[error("table is not a bijection")]
    NotBijective,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("weight threshold {threshold} exceeds n+1 = {max}")]
    InvalidThreshold { threshold: u32, max: u32 },
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// A truth table being swept to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkTable {
    table: TruthTable,
    pushes: usize,
}

impl WorkTable {
    pub fn new(t: &TruthTable) -> Result<Self, RmError> {
        if !t.is_bijective() {
            return Err(RmError::NotBijective);
        }
        Ok(WorkTable { table: t.clone(), pushes: 0 })
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn width(&self) -> usize {
        self.table.width()
    }

    /// First row index whose value differs from itself; the table length
    /// when the table is the identity.
    pub fn frontier(&self) -> usize {
        (0..self.table.len() as u32)
            .find(|&i| self.table.apply(i) != i)
            .map(|i| i as usize)
            .unwrap_or(self.table.len())
    }

    pub fn is_identity(&self) -> bool {
        self.table.is_identity()
    }

    fn apply_output_gate(&mut self, g: &Gate) {
        let width = self.width();
        for x in 0..self.table.len() as u32 {
            let y = self.table.apply(x);
            self.table.set(x, g.apply_value(y, width));
        }
    }
}

/// Line of the most significant set bit, i.e. the smallest line index.
fn top_line(mask: u32, width: usize) -> usize {
    debug_assert!(mask != 0);
    width - (31 - mask.leading_zeros() as usize)
}

/// Fixes row `i`, appending output-side gates until `T[i] = i`.
///
/// Set phase:每 missing bit `p` of the value gains `TOF(ones(v); p)`; clear
/// phase: each surplus bit `q` is cleared by `TOF(ones(v) \ {q}; q)`. Rows
/// below `i` stay fixed throughout.
pub fn fix_row(wt: &mut WorkTable, i: u32) -> Result<Vec<Gate>, RmError> {
    if (wt.frontier() as u32) < i {
        return Err(RmError::PreconditionViolated(format!(
            "rows below {i} are not all fixed"
        )));
    }
    let width = wt.width();
    let mut gates = Vec::new();
    // Set phase: raise the bits of i missing from the value.
    loop {
        let v = wt.table.apply(i);
        let missing = i & !v;
        if missing == 0 {
            break;
        }
        let p = top_line(missing, width);
        let g = Gate::new(LineSet::from_value_mask(v, width), LineSet::EMPTY, p);
        wt.apply_output_gate(&g);
        gates.push(g);
    }
    // Clear phase: drop the surplus bits.
    loop {
        let v = wt.table.apply(i);
        let surplus = v & !i;
        if surplus == 0 {
            break;
        }
        let q = top_line(surplus, width);
        let controls = v & !(1 << (width - q));
        let g = Gate::new(LineSet::from_value_mask(controls, width), LineSet::EMPTY, q);
        wt.apply_output_gate(&g);
        gates.push(g);
    }
    debug_assert_eq!(wt.table.apply(i), i);
    debug_assert!(wt.frontier() as u32 > i);
    Ok(gates)
}

/// Sweeps every row to the identity and returns the circuit (the collected
/// output-side gates in reverse order).
pub fn rm_synthesize(t: &TruthTable) -> Result<Circuit, RmError> {
    let mut wt = WorkTable::new(t)?;
    let mut gates = Vec::new();
    for i in 0..t.len() as u32 {
        gates.extend(fix_row(&mut wt, i)?);
    }
    gates.reverse();
    Ok(Circuit::from_gates(t.width(), gates)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushSide {
    Left,
    Right,
}

/// A transposition factored out of the sweep for later cycle-based
/// synthesis. Diagnostic only; the residuals are recovered by simulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PushRecord {
    pub pair: (u32, u32),
    pub side: PushSide,
    pub order: usize,
}

/// Skips the transformation of row `i` by factoring one transposition out
/// to the chosen side; afterwards `T[i] = i` and earlier rows stay fixed.
pub fn push_row(wt: &mut WorkTable, i: u32, side: PushSide) -> Result<PushRecord, RmError> {
    if (wt.frontier() as u32) < i {
        return Err(RmError::PreconditionViolated(format!(
            "rows below {i} are not all fixed"
        )));
    }
    if wt.table.apply(i) == i {
        return Err(RmError::PreconditionViolated(format!("row {i} is already fixed")));
    }
    let record = match side {
        PushSide::Right => {
            // Post-compose the transposition (i, k): swap the two values.
            let k = wt.table.apply(i);
            for x in 0..wt.table.len() as u32 {
                let y = wt.table.apply(x);
                if y == i {
                    wt.table.set(x, k);
                } else if y == k {
                    wt.table.set(x, i);
                }
            }
            PushRecord { pair: (i, k), side, order: wt.pushes }
        }
        PushSide::Left => {
            // Pre-compose the transposition (i, l): swap the two rows.
            let l = (0..wt.table.len() as u32)
                .find(|&x| wt.table.apply(x) == i)
                .expect("bijection contains every value");
            let (a, b) = (wt.table.apply(i), wt.table.apply(l));
            wt.table.set(i, b);
            wt.table.set(l, a);
            PushRecord { pair: (i, l), side, order: wt.pushes }
        }
    };
    wt.pushes += 1;
    debug_assert_eq!(wt.table.apply(i), i);
    Ok(record)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushPolicy {
    RightOnly,
    LeftOnly,
    /// Odd-numbered pushes go left, the rest right.
    Alternate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CombineParams {
    pub weight_threshold: u32,
    pub policy: PushPolicy,
}

impl Default for CombineParams {
    fn default() -> Self {
        CombineParams { weight_threshold: 1, policy: PushPolicy::RightOnly }
    }
}

#[derive(Clone, Debug)]
pub struct CombinedSynthesis {
    pub circuit: Circuit,
    pub pushes: Vec<PushRecord>,
}

/// The hybrid sweep: rows whose index weight reaches the threshold are
/// pushed out per the policy, the rest are fixed in place. The pushed
/// residuals are recovered by simulation and handed to the cycle engine.
pub fn combined_synthesize(
    t: &TruthTable,
    combine: &CombineParams,
    synth: &SynthParams,
) -> Result<CombinedSynthesis, RmError> {
    let width = t.width();
    if combine.weight_threshold > width as u32 + 1 {
        return Err(RmError::InvalidThreshold {
            threshold: combine.weight_threshold,
            max: width as u32 + 1,
        });
    }
    let mut wt = WorkTable::new(t)?;
    let mut fixes = Vec::new();
    let mut records = Vec::new();
    for i in 0..t.len() as u32 {
        if wt.table.apply(i) == i {
            continue;
        }
        if i.count_ones() >= combine.weight_threshold {
            let side = match combine.policy {
                PushPolicy::RightOnly => PushSide::Right,
                PushPolicy::LeftOnly => PushSide::Left,
                PushPolicy::Alternate => {
                    if wt.pushes % 2 == 0 {
                        PushSide::Right
                    } else {
                        PushSide::Left
                    }
                }
            };
            records.push(push_row(&mut wt, i, side)?);
        } else {
            fixes.extend(fix_row(&mut wt, i)?);
        }
    }
    debug_assert!(wt.is_identity());

    let mut rm_gates = fixes;
    rm_gates.reverse();
    let rm_circuit = Circuit::from_gates(width, rm_gates)?;
    let rm_table = rm_circuit.simulate_with_cap(MAX_LINES)?;

    // Left pushes pre-compose raw transpositions in push order (the fixes
    // all live on the right side, so no conjugation applies to them).
    let mut left_table = TruthTable::identity(width);
    for r in records.iter().filter(|r| r.side == PushSide::Left) {
        let mut swap = TruthTable::identity(width);
        swap.set(r.pair.0, r.pair.1);
        swap.set(r.pair.1, r.pair.0);
        left_table = left_table.then(&swap);
    }
    // spec = left . rm . right, so the right residual is recovered by
    // simulation of the known prefix.
    let prefix = left_table.then(&rm_table);
    let mut right_values = vec![0u32; t.len()];
    for x in 0..t.len() as u32 {
        right_values[prefix.apply(x) as usize] = t.apply(x);
    }
    let right_table = TruthTable::new(width, right_values);

    let left_perm = Permutation::from_table(&left_table)?;
    let right_perm = Permutation::from_table(&right_table)?;
    let mut gates = Vec::new();
    if !left_perm.is_identity() {
        gates.extend(synthesize_gt(&left_perm, synth)?.gates().iter().copied());
    }
    gates.extend(rm_circuit.gates().iter().copied());
    if !right_perm.is_identity() {
        gates.extend(synthesize_gt(&right_perm, synth)?.gates().iter().copied());
    }
    let circuit = Circuit::from_gates(width, gates)?;
    debug_assert_eq!(circuit.simulate_with_cap(MAX_LINES).unwrap(), *t);
    Ok(CombinedSynthesis { circuit, pushes: records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn table(width: usize, values: &[u32]) -> TruthTable {
        TruthTable::new(width, values.to_vec())
    }

    fn random_table(width: usize, rng: &mut ChaCha8Rng) -> TruthTable {
        let mut v: Vec<u32> = (0..1u32 << width).collect();
        v.shuffle(rng);
        TruthTable::new(width, v)
    }

    #[test]
    fn fix_row_single_gate_example() {
        // T = [0,3,2,1]: row 1 carries 11; one gate clears the surplus bit
        // and the whole table lands on the identity.
        let mut wt = WorkTable::new(&table(2, &[0, 3, 2, 1])).unwrap();
        let gates = fix_row(&mut wt, 1).unwrap();
        assert_eq!(gates, vec![Gate::cnot(2, 1)]);
        assert!(wt.is_identity());
    }

    #[test]
    fn fix_row_is_a_no_op_on_fixed_rows() {
        let mut wt = WorkTable::new(&table(2, &[0, 1, 3, 2])).unwrap();
        assert!(fix_row(&mut wt, 0).unwrap().is_empty());
        assert!(fix_row(&mut wt, 1).unwrap().is_empty());
    }

    #[test]
    fn fix_row_single_not_on_one_line() {
        let mut wt = WorkTable::new(&table(1, &[1, 0])).unwrap();
        let gates = fix_row(&mut wt, 0).unwrap();
        assert_eq!(gates, vec![Gate::not(1)]);
        assert!(wt.is_identity());
    }

    #[test]
    fn fix_row_rejects_unfixed_prefix() {
        let mut wt = WorkTable::new(&table(2, &[1, 0, 2, 3])).unwrap();
        assert!(matches!(fix_row(&mut wt, 1), Err(RmError::PreconditionViolated(_))));
    }

    #[test]
    fn fix_row_never_disturbs_earlier_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for width in 2..=5usize {
            for _ in 0..20 {
                let t = random_table(width, &mut rng);
                let mut wt = WorkTable::new(&t).unwrap();
                for i in 0..t.len() as u32 {
                    let gates = fix_row(&mut wt, i).unwrap();
                    for g in &gates {
                        // No fixed row's value matches the control set.
                        for j in 0..i {
                            assert_eq!(g.apply_value(j, width), j);
                        }
                    }
                    assert!(wt.frontier() as u32 > i);
                }
            }
        }
    }

    #[test]
    fn rm_synthesize_identity_and_not() {
        assert_eq!(
            rm_synthesize(&TruthTable::identity(3)).unwrap().gate_complexity(),
            0
        );
        let c = rm_synthesize(&table(1, &[1, 0])).unwrap();
        assert_eq!(c.gates(), &[Gate::not(1)]);
    }

    #[test]
    fn rm_synthesize_verifies_exhaustively_on_b2() {
        let mut idx: Vec<u32> = (0..4).collect();
        permute_all(&mut idx, 0, &mut |v| {
            let t = table(2, v);
            let c = rm_synthesize(&t).unwrap();
            assert_eq!(c.simulate().unwrap(), t);
        });
    }

    #[test]
    fn rm_synthesize_verifies_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for width in 3..=6usize {
            for _ in 0..20 {
                let t = random_table(width, &mut rng);
                let c = rm_synthesize(&t).unwrap();
                assert_eq!(c.simulate().unwrap(), t);
            }
        }
    }

    #[test]
    fn push_right_swaps_values() {
        let mut wt = WorkTable::new(&table(2, &[2, 0, 1, 3])).unwrap();
        let rec = push_row(&mut wt, 0, PushSide::Right).unwrap();
        assert_eq!(rec.pair, (0, 2));
        assert_eq!(wt.table().values(), &[0, 2, 1, 3]);
    }

    #[test]
    fn push_left_swaps_rows() {
        let mut wt = WorkTable::new(&table(2, &[2, 0, 1, 3])).unwrap();
        let rec = push_row(&mut wt, 0, PushSide::Left).unwrap();
        assert_eq!(rec.pair, (0, 1));
        assert_eq!(wt.table().values(), &[0, 2, 1, 3]);
    }

    #[test]
    fn push_rejects_fixed_rows() {
        let mut wt = WorkTable::new(&table(2, &[0, 2, 1, 3])).unwrap();
        assert!(matches!(
            push_row(&mut wt, 0, PushSide::Right),
            Err(RmError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn threshold_above_n_plus_one_is_rejected() {
        let t = TruthTable::identity(2);
        let cp = CombineParams { weight_threshold: 4, policy: PushPolicy::RightOnly };
        assert_eq!(
            combined_synthesize(&t, &cp, &SynthParams::default()).err(),
            Some(RmError::InvalidThreshold { threshold: 4, max: 3 })
        );
    }

    #[test]
    fn threshold_n_plus_one_matches_pure_rm_gate_for_gate() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for width in 2..=5usize {
            for _ in 0..10 {
                let t = random_table(width, &mut rng);
                let cp = CombineParams {
                    weight_threshold: width as u32 + 1,
                    policy: PushPolicy::RightOnly,
                };
                let hybrid = combined_synthesize(&t, &cp, &SynthParams::default()).unwrap();
                let pure = rm_synthesize(&t).unwrap();
                assert_eq!(hybrid.circuit.gates(), pure.gates());
                assert!(hybrid.pushes.is_empty());
            }
        }
    }

    #[test]
    fn threshold_zero_right_only_uses_cycle_engine_alone() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let t = random_table(4, &mut rng);
        let cp = CombineParams { weight_threshold: 0, policy: PushPolicy::RightOnly };
        let out = combined_synthesize(&t, &cp, &SynthParams::default()).unwrap();
        assert!(!out.pushes.is_empty());
        assert_eq!(out.circuit.simulate().unwrap(), t);
        // Every unfixed row was pushed, so the sweep emitted no gates; the
        // circuit is exactly the cycle engine's output for the spec.
        let reference = synthesize_gt(
            &Permutation::from_table(&t).unwrap(),
            &SynthParams::default(),
        )
        .unwrap();
        assert_eq!(out.circuit.gates(), reference.gates());
    }

    #[test]
    fn combined_verifies_across_policies_and_thresholds() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for width in 2..=5usize {
            for policy in [PushPolicy::RightOnly, PushPolicy::LeftOnly, PushPolicy::Alternate] {
                for w in 0..=width as u32 + 1 {
                    let t = random_table(width, &mut rng);
                    let cp = CombineParams { weight_threshold: w, policy };
                    let out = combined_synthesize(&t, &cp, &SynthParams::default()).unwrap();
                    assert_eq!(out.circuit.simulate().unwrap(), t, "policy {policy:?} w={w}");
                }
            }
        }
    }

    #[test]
    fn frontier_monotone_through_mixed_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let t = random_table(4, &mut rng);
        let mut wt = WorkTable::new(&t).unwrap();
        for i in 0..t.len() as u32 {
            if wt.table().apply(i) == i {
                continue;
            }
            if i.count_ones() >= 2 {
                push_row(&mut wt, i, PushSide::Right).unwrap();
            } else {
                fix_row(&mut wt, i).unwrap();
            }
            assert!(wt.frontier() as u32 > i);
        }
        assert!(wt.is_identity());
    }

    fn permute_all(v: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute_all(v, k + 1, f);
            v.swap(k, i);
        }
    }
}
