//! Gate independence, the replacement rules for gate compositions, and the
//! moving-and-replacing reducer.
//!
//! Two adjacent gates commute iff neither target feeds the other's controls,
//! or some control meets the other gate's opposite polarity. The rewrite
//! rules merge gate pairs sharing a target, trade negative controls away,
//! interchange dependent gates, and expand negative-control gates into the
//! NCT gate set.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::circuit::Circuit;
use crate::gate::{Gate, LineSet};

/// Identifies which rewrite produced a replacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleId {
    ExpandNots,
    ExpandSubsets,
    MergeDrop,
    MergeToNegative,
    MergeToPositive,
    ReduceSwapPair,
    ReduceFlipPair,
    InterchangeThreeGate,
    InterchangePolarityFlip,
    CancelIdentical,
}

/// Gate independence: `g1 * g2 = g2 * g1`.
///
/// Holds iff (1) neither target is a control of the other gate, or (2) some
/// positive control of one gate is a negative control of the other.
pub fn independent(g1: &Gate, g2: &Gate) -> bool {
    let cond1 = !g2.controls().contains(g1.target()) && !g1.controls().contains(g2.target());
    let cond2 = !g1.positive().intersection(g2.negative()).is_empty()
        || !g2.positive().intersection(g1.negative()).is_empty();
    cond1 || cond2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpandVariant {
    /// NOT sandwich: `2|J| + 1` gates.
    Nots,
    /// Positive-control sum over all subsets of `J`: `2^|J|` gates.
    Subsets,
}

/// Rewrites a gate with negative controls into NCT-library gates.
pub fn expand_to_nct(g: &Gate, variant: ExpandVariant) -> Vec<Gate> {
    let neg: Vec<usize> = g.negative().iter().collect();
    if neg.is_empty() {
        return vec![*g];
    }
    match variant {
        ExpandVariant::Nots => {
            let mut gates: Vec<Gate> = neg.iter().map(|&j| Gate::not(j)).collect();
            gates.push(Gate::new(g.controls(), LineSet::EMPTY, g.target()));
            gates.extend(neg.iter().rev().map(|&j| Gate::not(j)));
            gates
        }
        ExpandVariant::Subsets => {
            (0..1usize << neg.len())
                .map(|mask| {
                    let mut controls = g.positive();
                    for (idx, &j) in neg.iter().enumerate() {
                        if mask >> idx & 1 == 1 {
                            controls.insert(j);
                        }
                    }
                    Gate::new(controls, LineSet::EMPTY, g.target())
                })
                .collect()
        }
    }
}

/// Result of merging two gates with a common target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeOutcome {
    /// The gates cancel outright.
    Cancelled,
    Merged(Gate),
}

/// Merges two gates sharing a target into one (or none): identical gates
/// cancel; otherwise one control line is dropped or flips polarity.
pub fn try_merge(g1: &Gate, g2: &Gate) -> Option<MergeOutcome> {
    if g1.target() != g2.target() {
        return None;
    }
    if g1 == g2 {
        return Some(MergeOutcome::Cancelled);
    }
    merge_oriented(g1, g2).or_else(|| merge_oriented(g2, g1)).map(MergeOutcome::Merged)
}

fn merge_oriented(g1: &Gate, g2: &Gate) -> Option<Gate> {
    let t = g1.target();
    let (i1, j1) = (g1.positive(), g1.negative());
    let (i2, j2) = (g2.positive(), g2.negative());
    // I1 = I2 + {k}, J2 = J1 + {k}: line k drops entirely.
    if let Some(k) = i1.difference(i2).single() {
        if i2.is_subset(i1) && j2 == j1.with(k) && !j1.contains(k) {
            return Some(Gate::new(i2, j1, t));
        }
        // I1 = I2 + {k}, same J: k joins the negative controls.
        if i2.is_subset(i1) && j1 == j2 {
            return Some(Gate::new(i2, j2.with(k), t));
        }
    }
    // J1 = J2 + {k}, same I: k joins the positive controls.
    if i1 == i2 {
        if let Some(k) = j1.difference(j2).single() {
            if j2.is_subset(j1) {
                return Some(Gate::new(i2.with(k), j2, t));
            }
        }
    }
    None
}

/// Reduces the negative-control count of a gate pair with a common target.
pub fn reduce_negative(g1: &Gate, g2: &Gate) -> Option<(Gate, Gate)> {
    if g1.target() != g2.target() {
        return None;
    }
    let t = g1.target();
    let (i1, j1) = (g1.positive(), g1.negative());
    let (i2, j2) = (g2.positive(), g2.negative());
    // Rule 1: p in I1&J2, q in J1&I2 with the rest shared; both q and p
    // leave the negative sets.
    let p_set = i1.intersection(j2);
    let q_set = j1.intersection(i2);
    if let (Some(p), Some(q)) = (p_set.single(), q_set.single()) {
        if i2 == i1.without(p).with(q) && j2 == j1.without(q).with(p) {
            let j3 = j1.without(q);
            return Some((Gate::new(i1, j3, t), Gate::new(i2, j3, t)));
        }
    }
    // Rule 2: same positives, negatives differ in one line each; both lines
    // flip to positive.
    if i1 == i2 {
        let d1 = j1.difference(j2);
        let d2 = j2.difference(j1);
        if let (Some(p), Some(q)) = (d1.single(), d2.single()) {
            return Some((
                Gate::new(i1.with(p), j1.without(p), t),
                Gate::new(i2.with(q), j2.without(q), t),
            ));
        }
    }
    None
}

/// Interchanges two dependent gates; the polarity-flip form comes first
/// since it avoids growing the circuit.
pub fn interchange(g1: &Gate, g2: &Gate) -> Option<Vec<Gate>> {
    if independent(g1, g2) {
        return None;
    }
    // Subset rule: g1's controls are contained in g2's; g1's target flips
    // its polarity inside g2 and the gates swap.
    if g1.positive().is_subset(g2.positive()) && g1.negative().is_subset(g2.negative()) {
        return Some(vec![flip_polarity(g2, g1.target()), *g1]);
    }
    // Mirror of the subset rule.
    if g2.positive().is_subset(g1.positive()) && g2.negative().is_subset(g1.negative()) {
        return Some(vec![*g2, flip_polarity(g1, g2.target())]);
    }
    // Three-gate rule: g1's target feeds g2's controls while g2's target
    // avoids g1; a combined gate peels off to the left.
    if g2.controls().contains(g1.target()) && !g1.controls().contains(g2.target()) {
        let t1 = g1.target();
        let i3 = g1.positive().union(g2.positive()).without(t1);
        let j3 = g1.negative().union(g2.negative()).without(t1);
        return Some(vec![Gate::new(i3, j3, g2.target()), *g2, *g1]);
    }
    // Mirror of the three-gate rule.
    if g1.controls().contains(g2.target()) && !g2.controls().contains(g1.target()) {
        let t2 = g2.target();
        let i3 = g1.positive().union(g2.positive()).without(t2);
        let j3 = g1.negative().union(g2.negative()).without(t2);
        return Some(vec![*g2, Gate::new(i3, j3, g1.target()), *g1]);
    }
    None
}

fn flip_polarity(g: &Gate, line: usize) -> Gate {
    debug_assert!(g.controls().contains(line));
    if g.positive().contains(line) {
        Gate::new(g.positive().without(line), g.negative().with(line), g.target())
    } else {
        Gate::new(g.positive().with(line), g.negative().without(line), g.target())
    }
}

/// First matching rewrite for an ordered gate pair, by rule priority.
/// Expansions are excluded: they only run on demand.
pub fn match_rewrite(g1: &Gate, g2: &Gate) -> Option<(RuleId, Vec<Gate>)> {
    match try_merge(g1, g2) {
        Some(MergeOutcome::Cancelled) => return Some((RuleId::CancelIdentical, vec![])),
        Some(MergeOutcome::Merged(g)) => {
            let id = if g.control_count() < g1.control_count().max(g2.control_count()) {
                RuleId::MergeDrop
            } else if g.negative().len() > g1.negative().len().min(g2.negative().len()) {
                RuleId::MergeToNegative
            } else {
                RuleId::MergeToPositive
            };
            return Some((id, vec![g]));
        }
        None => {}
    }
    if let Some((a, b)) = reduce_negative(g1, g2) {
        let id = if g1.positive() == g2.positive() {
            RuleId::ReduceFlipPair
        } else {
            RuleId::ReduceSwapPair
        };
        return Some((id, vec![a, b]));
    }
    if let Some(seq) = interchange(g1, g2) {
        let id = if seq.len() == 3 {
            RuleId::InterchangeThreeGate
        } else {
            RuleId::InterchangePolarityFlip
        };
        return Some((id, seq));
    }
    None
}

#[derive(Clone, Debug)]
pub struct AppliedRewrite {
    pub rule: RuleId,
    pub span: (usize, usize),
    pub insert_at: usize,
}

#[derive(Clone, Debug)]
pub struct OptimizeOutcome {
    pub circuit: Circuit,
    pub applied: Vec<AppliedRewrite>,
    pub budget_exhausted: bool,
}

fn fingerprint(gates: &[Gate]) -> u64 {
    let mut h = DefaultHasher::new();
    gates.hash(&mut h);
    h.finish()
}

/// Moving-and-replacing reduction: a pair `(e_i, e_j)` rewrites when some
/// split index `s` lets `e_i` commute right to `s` and `e_j` commute left to
/// `s+1`; the replacement is inserted there. Pairs are scanned nearest
/// first; every applied rewrite restarts the scan; previously seen gate
/// sequences are skipped to prevent oscillation. The best circuit seen is
/// returned, so the gate count never increases.
pub fn move_and_replace(c: &Circuit, budget: usize) -> OptimizeOutcome {
    let lines = c.lines();
    let mut gates: Vec<Gate> = c.gates().to_vec();
    let mut best = gates.clone();
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(fingerprint(&gates));
    let mut applied = Vec::new();
    let mut budget_exhausted = false;

    'outer: loop {
        if applied.len() >= budget {
            budget_exhausted = true;
            break;
        }
        let l = gates.len();
        // Right reach of each gate under commutation.
        let mut reach = vec![0usize; l];
        for i in 0..l {
            let mut r = i;
            while r + 1 < l && independent(&gates[i], &gates[r + 1]) {
                r += 1;
            }
            reach[i] = r;
        }
        for dist in 1..l {
            for i in 0..l - dist {
                let j = i + dist;
                // Left reach of e_j down toward i.
                let mut lreach = j;
                while lreach > i + 1 && independent(&gates[j], &gates[lreach - 1]) {
                    lreach -= 1;
                }
                if reach[i] < lreach.saturating_sub(1) {
                    continue;
                }
                let Some((rule, replacement)) = match_rewrite(&gates[i], &gates[j]) else {
                    continue;
                };
                let s = i.max(lreach.saturating_sub(1));
                let mut next: Vec<Gate> = Vec::with_capacity(l + 1);
                next.extend_from_slice(&gates[..i]);
                next.extend_from_slice(&gates[i + 1..=s]);
                next.extend(replacement.iter().copied());
                next.extend_from_slice(&gates[s + 1..j]);
                next.extend_from_slice(&gates[j + 1..]);
                let fp = fingerprint(&next);
                if seen.contains(&fp) {
                    continue;
                }
                seen.insert(fp);
                applied.push(AppliedRewrite { rule, span: (i, j), insert_at: s });
                gates = next;
                if gates.len() < best.len() {
                    best = gates.clone();
                }
                continue 'outer;
            }
        }
        break;
    }

    let mut circuit = Circuit::from_gates(lines, best).expect("rewrites preserve validity");
    circuit.set_metadata(c.metadata().clone());
    OptimizeOutcome { circuit, applied, budget_exhausted }
}
