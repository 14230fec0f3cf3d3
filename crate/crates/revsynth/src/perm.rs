//! Permutation algebra on the Boolean cube: cycle decomposition, effective
//! disjoints, transposition grouping, conjugation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::circuit::{Circuit, TruthTable};
use crate::gate::{BitVector, Gate, MAX_LINES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("table is not a bijection")]
    NotBijective,
    #[error("no element pair at Hamming distance {0} in the cycle")]
    NoPairAtDistance(u32),
    #[error("transposition elements do not both occur in the cycle")]
    ElementsNotInCycle,
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("transpositions share a vector")]
    DependentTranspositions,
    #[error("group size must be at least 1")]
    InvalidGroupSize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// An unordered pair of distinct equal-width vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    a: BitVector,
    b: BitVector,
}

impl Transposition {
    pub fn new(a: BitVector, b: BitVector) -> Result<Self, PermError> {
        if a.width() != b.width() {
            return Err(PermError::WidthMismatch(a.width(), b.width()));
        }
        if a == b {
            return Err(PermError::InvalidCycle("transposition of equal vectors".into()));
        }
        // Normalized so the smaller encoding comes first.
        Ok(if a.value() <= b.value() {
            Transposition { a, b }
        } else {
            Transposition { a: b, b: a }
        })
    }

    pub fn from_values(width: usize, a: u32, b: u32) -> Result<Self, PermError> {
        Transposition::new(BitVector::new(width, a), BitVector::new(width, b))
    }

    pub fn a(&self) -> BitVector {
        self.a
    }

    pub fn b(&self) -> BitVector {
        self.b
    }

    pub fn width(&self) -> usize {
        self.a.width()
    }

    /// Coordinate-wise difference mask of the two endpoints.
    pub fn diff(&self) -> u32 {
        self.a.value() ^ self.b.value()
    }

    pub fn distance(&self) -> u32 {
        self.diff().count_ones()
    }

    pub fn shares_vector(&self, other: &Transposition) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }
}

/// A set of pairwise independent transpositions: all endpoint vectors are
/// distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranspositionGroup {
    transpositions: Vec<Transposition>,
}

impl TranspositionGroup {
    pub fn new(transpositions: Vec<Transposition>) -> Result<Self, PermError> {
        if transpositions.is_empty() {
            return Err(PermError::InvalidGroupSize);
        }
        let w = transpositions[0].width();
        for (i, t) in transpositions.iter().enumerate() {
            if t.width() != w {
                return Err(PermError::WidthMismatch(w, t.width()));
            }
            for u in &transpositions[..i] {
                if t.shares_vector(u) {
                    return Err(PermError::DependentTranspositions);
                }
            }
        }
        Ok(TranspositionGroup { transpositions })
    }

    pub fn transpositions(&self) -> &[Transposition] {
        &self.transpositions
    }

    pub fn len(&self) -> usize {
        self.transpositions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn width(&self) -> usize {
        self.transpositions[0].width()
    }

    /// The permutation realized by the group (disjoint 2-cycles).
    pub fn to_permutation(&self) -> Permutation {
        let mut cycles: Vec<Vec<u32>> =
            self.transpositions.iter().map(|t| vec![t.a().value(), t.b().value()]).collect();
        cycles.sort_by_key(|c| c[0]);
        Permutation { width: self.width(), cycles }
    }
}

/// A bijection on `B^n`, stored as disjoint cycles with fixed points omitted.
///
/// Every cycle is rotated to start at its smallest element and cycles are
/// sorted by that element, so equal permutations compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    width: usize,
    cycles: Vec<Vec<u32>>,
}

impl Permutation {
    pub fn identity(width: usize) -> Self {
        assert!(width >= 1 && width <= MAX_LINES);
        Permutation { width, cycles: Vec::new() }
    }

    pub fn from_table(t: &TruthTable) -> Result<Self, PermError> {
        if !t.is_bijective() {
            return Err(PermError::NotBijective);
        }
        let size = t.len();
        let mut seen = vec![false; size];
        let mut cycles = Vec::new();
        for start in 0..size as u32 {
            if seen[start as usize] {
                continue;
            }
            seen[start as usize] = true;
            if t.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            let mut x = t.apply(start);
            while x != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = t.apply(x);
            }
            cycles.push(cycle);
        }
        Ok(Permutation { width: t.width(), cycles })
    }

    /// Builds from externally supplied cycles, validating disjointness.
    pub fn from_cycles(width: usize, cycles: Vec<Vec<u32>>) -> Result<Self, PermError> {
        let mut seen = vec![false; 1 << width];
        for c in &cycles {
            if c.len() < 2 {
                return Err(PermError::InvalidCycle("cycle shorter than 2".into()));
            }
            for &x in c {
                if x as usize >= 1 << width {
                    return Err(PermError::InvalidCycle(format!("element {x} out of range")));
                }
                if seen[x as usize] {
                    return Err(PermError::InvalidCycle(format!("element {x} repeated")));
                }
                seen[x as usize] = true;
            }
        }
        let mut cycles: Vec<Vec<u32>> = cycles.into_iter().map(canonical_rotation).collect();
        cycles.sort_by_key(|c| c[0]);
        Ok(Permutation { width, cycles })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    pub fn is_identity(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn apply(&self, x: u32) -> u32 {
        for c in &self.cycles {
            if let Some(pos) = c.iter().position(|&v| v == x) {
                return c[(pos + 1) % c.len()];
            }
        }
        x
    }

    pub fn to_table(&self) -> TruthTable {
        let mut t = TruthTable::identity(self.width);
        for c in &self.cycles {
            for i in 0..c.len() {
                t.set(c[i], c[(i + 1) % c.len()]);
            }
        }
        t
    }

    /// Minimal number of transpositions: sum of (cycle length - 1).
    pub fn transposition_count(&self) -> usize {
        self.cycles.iter().map(|c| c.len() - 1).sum()
    }

    /// Parity of the transposition count.
    pub fn parity(&self) -> Parity {
        if self.transposition_count() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Left-associative product: applies `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.width != other.width {
            return Err(PermError::WidthMismatch(self.width, other.width));
        }
        Permutation::from_table(&self.to_table().then(&other.to_table()))
    }

    pub fn inverse(&self) -> Permutation {
        let mut cycles: Vec<Vec<u32>> = self
            .cycles
            .iter()
            .map(|c| {
                let mut r = c.clone();
                r.reverse();
                canonical_rotation(r)
            })
            .collect();
        cycles.sort_by_key(|c| c[0]);
        Permutation { width: self.width, cycles }
    }

    /// Conjugation `h^e = e^-1 . self . e`, which relabels every cycle
    /// element through `e`. For a single gate, `e^-1 = e`.
    pub fn conjugate_by_gate(&self, e: &Gate) -> Permutation {
        self.relabel(|x| e.apply_value(x, self.width))
    }

    /// Conjugation by a whole circuit; wraps the circuit's function around
    /// every cycle element.
    pub fn conjugate_by_circuit(&self, e: &Circuit) -> Result<Permutation, PermError> {
        if e.lines() != self.width {
            return Err(PermError::WidthMismatch(self.width, e.lines()));
        }
        Ok(self.relabel(|x| e.apply_value(x)))
    }

    fn relabel(&self, f: impl Fn(u32) -> u32) -> Permutation {
        let mut cycles: Vec<Vec<u32>> = self
            .cycles
            .iter()
            .map(|c| canonical_rotation(c.iter().map(|&x| f(x)).collect()))
            .collect();
        cycles.sort_by_key(|c| c[0]);
        Permutation { width: self.width, cycles }
    }

    /// Extends by one identity line appended as the new least significant
    /// coordinate; every cycle doubles, so the result is even.
    pub fn extend_line(&self) -> Permutation {
        let mut cycles = Vec::with_capacity(self.cycles.len() * 2);
        for c in &self.cycles {
            cycles.push(c.iter().map(|&x| x << 1).collect());
            cycles.push(c.iter().map(|&x| (x << 1) | 1).collect());
        }
        cycles.sort_by_key(|c: &Vec<u32>| c[0]);
        Permutation { width: self.width + 1, cycles }
    }
}

/// Rotates a cycle so its smallest element comes first.
fn canonical_rotation(cycle: Vec<u32>) -> Vec<u32> {
    let pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut r = Vec::with_capacity(cycle.len());
    r.extend_from_slice(&cycle[pos..]);
    r.extend_from_slice(&cycle[..pos]);
    r
}

/// Histogram of Hamming distances over unordered element pairs within each
/// cycle. Drives the choice of the disjoint distance.
pub fn distance_histogram(p: &Permutation) -> BTreeMap<u32, usize> {
    let mut hist = BTreeMap::new();
    for c in p.cycles() {
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                let d = (c[i] ^ c[j]).count_ones();
                *hist.entry(d).or_insert(0) += 1;
            }
        }
    }
    hist
}

/// The distance with maximal histogram count, ties to the smaller distance.
pub fn pick_delta(hist: &BTreeMap<u32, usize>) -> Option<u32> {
    hist.iter()
        .max_by(|(d1, c1), (d2, c2)| c1.cmp(c2).then(d2.cmp(d1)))
        .map(|(&d, _)| d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SplitSide {
    Left,
    Right,
}

/// Splits `cycle` at the unordered pair `(a, b)`; returns the sub-cycles
/// (singletons dropped, each min-rotated, sorted by smallest element).
///
/// For a left split, `cycle = (a,b) . A . B`; for a right split,
/// `cycle = A . B . (a,b)`. In the remainder the successors of `a` and `b`
/// swap (left) or their predecessors do (right).
pub(crate) fn split_cycle(cycle: &[u32], a: u32, b: u32, side: SplitSide) -> Vec<Vec<u32>> {
    let i = cycle.iter().position(|&x| x == a).expect("a in cycle");
    let j = cycle.iter().position(|&x| x == b).expect("b in cycle");
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    let l = cycle.len();
    let succ = |p: usize| -> usize {
        match side {
            SplitSide::Left => {
                if p == i {
                    (j + 1) % l
                } else if p == j {
                    (i + 1) % l
                } else {
                    (p + 1) % l
                }
            }
            SplitSide::Right => {
                if p == (j + l - 1) % l {
                    i
                } else if p == (i + l - 1) % l {
                    j
                } else {
                    (p + 1) % l
                }
            }
        }
    };
    let mut out = Vec::new();
    let mut visited = vec![false; l];
    for start in 0..l {
        if visited[start] {
            continue;
        }
        let mut sub = Vec::new();
        let mut p = start;
        while !visited[p] {
            visited[p] = true;
            sub.push(cycle[p]);
            p = succ(p);
        }
        if sub.len() >= 2 {
            out.push(canonical_rotation(sub));
        }
    }
    out.sort_by_key(|c| c[0]);
    out
}

fn validate_cycle(cycle: &[u32], width: usize) -> Result<(), PermError> {
    if cycle.len() < 2 {
        return Err(PermError::InvalidCycle("cycle shorter than 2".into()));
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cycle.len() {
        return Err(PermError::InvalidCycle("repeated element".into()));
    }
    if let Some(&max) = sorted.last() {
        if max as u64 >= 1u64 << width {
            return Err(PermError::InvalidCycle(format!("element {max} out of range")));
        }
    }
    Ok(())
}

/// Left multiplication: `cycle = t . rest`. Returns the factor list.
pub fn split_left(cycle: &[u32], width: usize, t: &Transposition) -> Result<Vec<Vec<u32>>, PermError> {
    validate_cycle(cycle, width)?;
    let (a, b) = (t.a().value(), t.b().value());
    if !cycle.contains(&a) || !cycle.contains(&b) {
        return Err(PermError::ElementsNotInCycle);
    }
    let mut out = vec![vec![a.min(b), a.max(b)]];
    out.extend(split_cycle(cycle, a, b, SplitSide::Left));
    Ok(out)
}

/// Right multiplication: `cycle = rest . t`. Returns the factor list.
pub fn split_right(cycle: &[u32], width: usize, t: &Transposition) -> Result<Vec<Vec<u32>>, PermError> {
    validate_cycle(cycle, width)?;
    let (a, b) = (t.a().value(), t.b().value());
    if !cycle.contains(&a) || !cycle.contains(&b) {
        return Err(PermError::ElementsNotInCycle);
    }
    let mut out = split_cycle(cycle, a, b, SplitSide::Right);
    out.push(vec![a.min(b), a.max(b)]);
    Ok(out)
}

/// Normalizes an unordered value pair.
pub(crate) fn pair_key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Counts how many other delta pairs of the same cycle a split at `p` breaks.
pub(crate) fn broken_count(
    cycle: &[u32],
    pairs: &[(u32, u32)],
    p: (u32, u32),
    side: SplitSide,
) -> usize {
    let pos = |v: u32| cycle.iter().position(|&x| x == v).unwrap();
    let (mut i, mut j) = (pos(p.0), pos(p.1));
    if i > j {
        std::mem::swap(&mut i, &mut j);
    }
    // Left split separates positions {i+1..=j}; right split {i..=j-1}.
    let in_arc = |q: usize| match side {
        SplitSide::Left => q > i && q <= j,
        SplitSide::Right => q >= i && q < j,
    };
    pairs
        .iter()
        .filter(|&&q| q != p)
        .filter(|q| in_arc(pos(q.0)) != in_arc(pos(q.1)))
        .count()
}

/// Repeatedly disjoints `cycle` at pairs of Hamming distance `delta`,
/// always choosing a pair whose removal breaks the fewest other pairs.
///
/// The left-associative product of the returned cycles equals the input
/// cycle. Extracted transpositions come first in extraction order, followed
/// by the residual cycles. The result does not depend on the rotation of the
/// input cycle.
pub fn effective_disjoint(
    cycle: &[u32],
    width: usize,
    delta: u32,
) -> Result<Vec<Vec<u32>>, PermError> {
    validate_cycle(cycle, width)?;
    // Pass 1: all pairs at the requested distance.
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for i in 0..cycle.len() {
        for j in i + 1..cycle.len() {
            if (cycle[i] ^ cycle[j]).count_ones() == delta {
                pairs.push(pair_key(cycle[i], cycle[j]));
            }
        }
    }
    if pairs.is_empty() {
        return Err(PermError::NoPairAtDistance(delta));
    }

    let mut extracted: Vec<Vec<u32>> = Vec::new();
    let mut residual: Vec<Vec<u32>> = vec![canonical_rotation(cycle.to_vec())];
    while !pairs.is_empty() {
        // Pass 2: broken-pair count per candidate.
        let counted: Vec<(usize, (u32, u32))> = pairs
            .iter()
            .map(|&p| {
                let cyc = residual
                    .iter()
                    .find(|c| c.contains(&p.0))
                    .expect("pair tracked inside a residual cycle");
                (broken_count(cyc, &pairs, p, SplitSide::Left), p)
            })
            .collect();
        // Pass 3: minimal broken count, ties to the smaller element pair.
        let &(_, chosen) = counted.iter().min().unwrap();
        let (ci, cyc) = residual
            .iter()
            .enumerate()
            .find(|(_, c)| c.contains(&chosen.0))
            .map(|(i, c)| (i, c.clone()))
            .unwrap();
        let subs = split_cycle(&cyc, chosen.0, chosen.1, SplitSide::Left);
        residual.splice(ci..=ci, subs);
        extracted.push(vec![chosen.0, chosen.1]);
        // Drop the chosen pair and everything it broke; surviving pairs are
        // those whose endpoints stayed within one sub-cycle.
        pairs.retain(|q| {
            *q != chosen
                && residual
                    .iter()
                    .any(|c| c.contains(&q.0) && c.contains(&q.1))
        });
    }
    extracted.extend(residual);
    Ok(extracted)
}

/// Greedy grouping of a permutation into groups of exactly `k` independent
/// transpositions, taken from the standard cycle decomposition in order.
///
/// Grouping stops at the first transposition that shares a vector with the
/// current partial group (reordering past it would change the product); the
/// remaining stream, including any partial group, multiplies into the
/// residual. `groups[0] . groups[1] . ... . residual` equals `p`.
pub fn group_transpositions(
    p: &Permutation,
    k: usize,
) -> Result<(Vec<TranspositionGroup>, Permutation), PermError> {
    if k == 0 {
        return Err(PermError::InvalidGroupSize);
    }
    let width = p.width();
    let mut stream = Vec::new();
    for c in p.cycles() {
        for idx in 1..c.len() {
            stream.push(Transposition::from_values(width, c[0], c[idx])?);
        }
    }

    let mut groups = Vec::new();
    let mut current: Vec<Transposition> = Vec::new();
    let mut leftover_from = stream.len();
    for (idx, t) in stream.iter().enumerate() {
        if current.iter().any(|u| u.shares_vector(t)) {
            leftover_from = idx - current.len();
            current.clear();
            break;
        }
        current.push(*t);
        if current.len() == k {
            groups.push(TranspositionGroup::new(std::mem::take(&mut current))?);
        }
    }
    if !current.is_empty() {
        leftover_from = stream.len() - current.len();
    }

    let mut residual = TruthTable::identity(width);
    for t in &stream[leftover_from.min(stream.len())..] {
        let (a, b) = (t.a().value(), t.b().value());
        let mut swap = TruthTable::identity(width);
        swap.set(a, b);
        swap.set(b, a);
        residual = residual.then(&swap);
    }
    Ok((groups, Permutation::from_table(&residual)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn perm_of(width: usize, values: &[u32]) -> Permutation {
        Permutation::from_table(&TruthTable::new(width, values.to_vec())).unwrap()
    }

    fn product_table(width: usize, cycles: &[Vec<u32>]) -> TruthTable {
        let mut t = TruthTable::identity(width);
        for c in cycles {
            let part = Permutation::from_cycles(width, vec![c.clone()]).unwrap().to_table();
            t = t.then(&part);
        }
        t
    }

    fn random_table(width: usize, rng: &mut ChaCha8Rng) -> TruthTable {
        let mut v: Vec<u32> = (0..1u32 << width).collect();
        v.shuffle(rng);
        TruthTable::new(width, v)
    }

    #[test]
    fn from_table_identity_has_no_cycles() {
        let p = perm_of(2, &[0, 1, 2, 3]);
        assert!(p.is_identity());
        assert_eq!(p.parity(), Parity::Even);
    }

    #[test]
    fn from_table_single_swap() {
        let p = perm_of(1, &[1, 0]);
        assert_eq!(p.cycles(), &[vec![0, 1]]);
        assert_eq!(p.parity(), Parity::Odd);
    }

    #[test]
    fn from_table_rejects_non_bijection() {
        let t = TruthTable::new(1, vec![0, 0]);
        assert_eq!(Permutation::from_table(&t), Err(PermError::NotBijective));
    }

    #[test]
    fn table_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for width in 1..=6 {
            for _ in 0..20 {
                let t = random_table(width, &mut rng);
                let p = Permutation::from_table(&t).unwrap();
                assert_eq!(p.to_table(), t);
            }
        }
    }

    #[test]
    fn parity_of_three_cycle_is_even() {
        let p = Permutation::from_cycles(2, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(p.parity(), Parity::Even);
    }

    #[test]
    fn parity_is_additive_under_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let p = Permutation::from_table(&random_table(3, &mut rng)).unwrap();
            let q = Permutation::from_table(&random_table(3, &mut rng)).unwrap();
            let pq = p.then(&q).unwrap();
            let expect = match (p.parity(), q.parity()) {
                (Parity::Even, Parity::Even) | (Parity::Odd, Parity::Odd) => Parity::Even,
                _ => Parity::Odd,
            };
            assert_eq!(pq.parity(), expect);
        }
    }

    #[test]
    fn conjugate_by_empty_circuit_is_identity_action() {
        let p = Permutation::from_cycles(2, vec![vec![0, 1, 2]]).unwrap();
        let c = Circuit::new(2);
        assert_eq!(p.conjugate_by_circuit(&c).unwrap(), p);
    }

    #[test]
    fn conjugating_transposition_relabels_endpoints() {
        let g = Gate::cnot(1, 2);
        let p = Permutation::from_cycles(2, vec![vec![0b10, 0b01]]).unwrap();
        let conj = p.conjugate_by_gate(&g);
        let expect = Permutation::from_cycles(
            2,
            vec![vec![g.apply_value(0b10, 2), g.apply_value(0b01, 2)]],
        )
        .unwrap();
        assert_eq!(conj, expect);
    }

    #[test]
    fn conjugation_matches_front_back_gate_wrapping() {
        // Wrapping a sub-circuit with a CNOT front and back realizes the
        // conjugated permutation.
        let sub = Circuit::from_gates(3, vec![Gate::toffoli(1, 2, 3), Gate::not(2)]).unwrap();
        let e = Gate::cnot(1, 2);
        let mut wrapped = Circuit::new(3);
        wrapped.push(e).unwrap();
        wrapped.extend_gates(sub.gates().iter().copied()).unwrap();
        wrapped.push(e).unwrap();
        let p = Permutation::from_table(&sub.simulate().unwrap()).unwrap();
        let expect = Permutation::from_table(&wrapped.simulate().unwrap()).unwrap();
        assert_eq!(p.conjugate_by_gate(&e), expect);
    }

    /// Concrete instance of the six-element disjoint example: distances
    /// d(a,e) = d(b,g) = d(c,f) = 3 and no other pair at distance 3.
    fn disjoint_fixture() -> (Vec<u32>, [u32; 6]) {
        let (a, b, c, e, f, g) = (0b0000, 0b0001, 0b0010, 0b0111, 0b0101, 0b0110);
        (vec![a, b, c, e, f, g], [a, b, c, e, f, g])
    }

    #[test]
    fn effective_disjoint_matches_reference_factorization() {
        let (cycle, [a, b, c, e, f, g]) = disjoint_fixture();
        let out = effective_disjoint(&cycle, 4, 3).unwrap();
        // (b,g) . (c,f) . (a,b) . (c,g) . (e,f); the last cycle prints as
        // [f, e] because f has the smaller encoding.
        assert_eq!(
            out,
            vec![vec![b, g], vec![c, f], vec![a, b], vec![c, g], vec![f, e]]
        );
        assert_eq!(product_table(4, &out), product_table(4, &[cycle]));
    }

    #[test]
    fn effective_disjoint_ignores_cycle_rotation() {
        let (cycle, _) = disjoint_fixture();
        let baseline = effective_disjoint(&cycle, 4, 3).unwrap();
        for rot in 1..cycle.len() {
            let mut rotated = cycle.clone();
            rotated.rotate_left(rot);
            assert_eq!(effective_disjoint(&rotated, 4, 3).unwrap(), baseline);
        }
    }

    #[test]
    fn effective_disjoint_of_two_cycle_is_itself() {
        let out = effective_disjoint(&[0b00, 0b11], 2, 2).unwrap();
        assert_eq!(out, vec![vec![0b00, 0b11]]);
    }

    #[test]
    fn effective_disjoint_flags_missing_distance() {
        assert_eq!(
            effective_disjoint(&[0b00, 0b11], 2, 1),
            Err(PermError::NoPairAtDistance(1))
        );
    }

    #[test]
    fn effective_disjoint_products_match_exhaustively_on_b3() {
        // Every 8-point permutation cycle, every distance present in it.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..300 {
            let t = random_table(3, &mut rng);
            let p = Permutation::from_table(&t).unwrap();
            for cycle in p.cycles() {
                let mut deltas: Vec<u32> = Vec::new();
                for i in 0..cycle.len() {
                    for j in i + 1..cycle.len() {
                        deltas.push((cycle[i] ^ cycle[j]).count_ones());
                    }
                }
                deltas.sort_unstable();
                deltas.dedup();
                for d in deltas {
                    let out = effective_disjoint(cycle, 3, d).unwrap();
                    assert_eq!(product_table(3, &out), product_table(3, &[cycle.clone()]));
                }
            }
        }
    }

    #[test]
    fn split_left_of_three_cycle() {
        // (a,b,c) = (a,b) . (a,c)
        let t = Transposition::from_values(2, 0, 1).unwrap();
        let out = split_left(&[0, 1, 2], 2, &t).unwrap();
        assert_eq!(out, vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(product_table(2, &out), product_table(2, &[vec![0, 1, 2]]));
    }

    #[test]
    fn split_right_of_three_cycle() {
        // (a,b,c) = (b,c) . (a,b)
        let t = Transposition::from_values(2, 0, 1).unwrap();
        let out = split_right(&[0, 1, 2], 2, &t).unwrap();
        assert_eq!(out, vec![vec![1, 2], vec![0, 1]]);
        assert_eq!(product_table(2, &out), product_table(2, &[vec![0, 1, 2]]));
    }

    #[test]
    fn split_of_two_cycle_is_the_transposition_alone() {
        let t = Transposition::from_values(2, 0, 1).unwrap();
        assert_eq!(split_left(&[0, 1], 2, &t).unwrap(), vec![vec![0, 1]]);
        assert_eq!(split_right(&[0, 1], 2, &t).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn split_rejects_foreign_elements() {
        let t = Transposition::from_values(2, 0, 3).unwrap();
        assert_eq!(split_left(&[0, 1, 2], 2, &t), Err(PermError::ElementsNotInCycle));
    }

    #[test]
    fn split_products_match_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for width in 3..=8usize {
            for _ in 0..30 {
                let len = rng.gen_range(2..=(1usize << width).min(10));
                let mut all: Vec<u32> = (0..1u32 << width).collect();
                all.shuffle(&mut rng);
                let cycle: Vec<u32> = all[..len].to_vec();
                let i = rng.gen_range(0..len);
                let mut j = rng.gen_range(0..len);
                while j == i {
                    j = rng.gen_range(0..len);
                }
                let t = Transposition::from_values(width, cycle[i], cycle[j]).unwrap();
                let reference = product_table(width, &[cycle.clone()]);
                assert_eq!(product_table(width, &split_left(&cycle, width, &t).unwrap()), reference);
                assert_eq!(product_table(width, &split_right(&cycle, width, &t).unwrap()), reference);
            }
        }
    }

    #[test]
    fn grouping_disjoint_transpositions() {
        let p = Permutation::from_cycles(3, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let (groups, residual) = group_transpositions(&p, 2).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].len(), 2);
        assert!(residual.is_identity());
    }

    #[test]
    fn grouping_three_cycle_yields_residual_only() {
        let p = Permutation::from_cycles(3, vec![vec![0, 1, 2]]).unwrap();
        let (groups, residual) = group_transpositions(&p, 2).unwrap();
        assert!(groups.is_empty());
        assert_eq!(residual, p);
    }

    #[test]
    fn grouping_reference_permutation_two_groups() {
        // Four disjoint transpositions grouped pairwise; verify the product
        // by simulation against the original.
        let cycles = vec![
            vec![0b10000, 0b10101],
            vec![0b10001, 0b10100],
            vec![0b10010, 0b10111],
            vec![0b10011, 0b10110],
        ];
        let p = Permutation::from_cycles(5, cycles).unwrap();
        let (groups, residual) = group_transpositions(&p, 2).unwrap();
        assert_eq!(groups.len(), 2);
        assert!(residual.is_identity());
        let mut acc = TruthTable::identity(5);
        for g in &groups {
            acc = acc.then(&g.to_permutation().to_table());
        }
        acc = acc.then(&residual.to_table());
        assert_eq!(acc, p.to_table());
    }

    #[test]
    fn grouping_product_matches_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for width in 2..=6usize {
            for _ in 0..40 {
                let t = random_table(width, &mut rng);
                let p = Permutation::from_table(&t).unwrap();
                for k in 1..=3usize {
                    let (groups, residual) = group_transpositions(&p, k).unwrap();
                    let mut acc = TruthTable::identity(width);
                    for g in &groups {
                        assert_eq!(g.len(), k);
                        acc = acc.then(&g.to_permutation().to_table());
                    }
                    acc = acc.then(&residual.to_table());
                    assert_eq!(acc, t);
                }
            }
        }
    }

    #[test]
    fn histogram_counts_within_cycle_pairs() {
        assert!(distance_histogram(&Permutation::identity(3)).is_empty());

        let p = Permutation::from_cycles(3, vec![vec![0b000, 0b011]]).unwrap();
        assert_eq!(distance_histogram(&p), BTreeMap::from([(2, 1)]));

        let (cycle, _) = disjoint_fixture();
        let p = Permutation::from_cycles(4, vec![cycle]).unwrap();
        let hist = distance_histogram(&p);
        assert_eq!(hist.get(&3), Some(&3));
        assert!(hist.len() > 1);
        assert_eq!(pick_delta(&hist), Some(3));
    }

    #[test]
    fn extension_makes_any_permutation_even() {
        // Exhaustive over B^2; sampled over B^3.
        for width in [2usize, 3] {
            let size = 1usize << width;
            let mut idx: Vec<u32> = (0..size as u32).collect();
            let mut count = 0;
            permute_all(&mut idx, 0, &mut |v| {
                count += 1;
                if width == 3 && count % 97 != 0 {
                    return;
                }
                let p = Permutation::from_table(&TruthTable::new(width, v.to_vec())).unwrap();
                let ext = p.extend_line();
                assert_eq!(ext.parity(), Parity::Even);
                assert_eq!(ext.cycles().len(), p.cycles().len() * 2);
                // The extension acts as p on the doubled points.
                for x in 0..size as u32 {
                    assert_eq!(ext.apply(x << 1), p.apply(x) << 1);
                    assert_eq!(ext.apply((x << 1) | 1), (p.apply(x) << 1) | 1);
                }
            });
        }
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

    #[test]
    fn conjugation_by_cnot_pair_zeroes_matrix_column() {
        // Conjugating by TOF(1;2) relabels so equal coordinates cancel:
        // the column-zeroing move of the matrix pipeline.
        let u = 0b11;
        let v = 0b00;
        let p = Permutation::from_cycles(2, vec![vec![u, v]]).unwrap();
        let g = Gate::cnot(1, 2);
        let conj = p.conjugate_by_gate(&g);
        assert_eq!(conj, Permutation::from_cycles(2, vec![vec![0b10, 0b00]]).unwrap());
    }
}
