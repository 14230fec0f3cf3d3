//! The group-matrix pipeline: duplicate-column zeroing, canonical form, and
//! wide-gate realization with its C²NOT decomposition.
//!
//! A group of K independent transpositions is written as a `2K x n` binary
//! matrix. CNOT conjugation zeroes duplicated columns and then aligns the
//! rows so every odd row differs from its successor only in the target
//! coordinate `t`; NOT conjugation raises the constant columns to 1. The
//! aligned matrix is realized by the single gate whose positive controls are
//! all lines outside the varying columns.

use std::collections::BTreeMap;

use crate::circuit::Circuit;
use crate::gate::{Gate, LineSet};
use crate::perm::TranspositionGroup;

use super::SynthError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixStage {
    Raw,
    Deduped,
    Canonical,
    Final,
}

/// The binary matrix of a transposition group; rows are the endpoint
/// vectors in the order `x_1, y_1, x_2, y_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMatrix {
    width: usize,
    rows: Vec<u32>,
    stage: MatrixStage,
}

impl GroupMatrix {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn stage(&self) -> MatrixStage {
        self.stage
    }

    pub fn pairs(&self) -> usize {
        self.rows.len() / 2
    }

    /// Column pattern at `line`: bit `r` holds row `r`'s coordinate.
    pub fn column(&self, line: usize) -> u64 {
        let bit = 1u32 << (self.width - line);
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (r, &row)| acc | ((((row & bit) != 0) as u64) << r))
    }

    /// Lines on which not all rows agree.
    pub fn varying_lines(&self) -> LineSet {
        let varying = self.rows.iter().fold(0u32, |acc, &r| acc | (r ^ self.rows[0]));
        LineSet::from_value_mask(varying, self.width)
    }

    fn apply_gate(&mut self, g: &Gate) {
        for r in self.rows.iter_mut() {
            *r = g.apply_value(*r, self.width);
        }
    }
}

/// Builds the raw matrix of a group.
pub fn build_matrix(group: &TranspositionGroup) -> GroupMatrix {
    let width = group.width();
    let mut rows = Vec::with_capacity(group.len() * 2);
    for t in group.transpositions() {
        rows.push(t.a().value());
        rows.push(t.b().value());
    }
    GroupMatrix { width, rows, stage: MatrixStage::Raw }
}

/// Zeroes duplicated nonzero columns with CNOT conjugation.
///
/// The returned circuit maps every input row to the corresponding output
/// row; attaching it to the front and back of the remaining sub-circuit
/// realizes the conjugation.
pub fn zero_duplicate_columns(m: &GroupMatrix) -> Result<(GroupMatrix, Circuit), SynthError> {
    if m.stage != MatrixStage::Raw {
        return Err(SynthError::WrongStage { expected: "raw" });
    }
    let mut out = m.clone();
    let mut conj = Circuit::new(m.width);
    let mut first_of: BTreeMap<u64, usize> = BTreeMap::new();
    for line in 1..=m.width {
        let pat = out.column(line);
        if pat == 0 {
            continue;
        }
        if let Some(&src) = first_of.get(&pat) {
            let g = Gate::cnot(src, line);
            conj.push(g).expect("conjugator gate is valid");
            out.apply_gate(&g);
        } else {
            first_of.insert(pat, line);
        }
    }
    out.stage = MatrixStage::Deduped;
    Ok((out, conj))
}

/// Aligns the matrix so every odd row differs from its successor exactly in
/// coordinate `t`, using CNOT conjugation.
///
/// Succeeds when all pairs share one difference vector and the row offsets
/// form a linear subspace; otherwise the group cannot be aligned by affine
/// moves and the caller falls back to splitting it.
pub fn to_canonical_form(
    m: &GroupMatrix,
    t: usize,
) -> Result<(GroupMatrix, Circuit), SynthError> {
    if m.stage != MatrixStage::Deduped {
        return Err(SynthError::WrongStage { expected: "deduped" });
    }
    let width = m.width;
    if t < 1 || t > width || m.column(t) == 0 {
        return Err(SynthError::InvalidTarget(t));
    }
    let delta = m.rows[0] ^ m.rows[1];
    for pair in m.rows.chunks(2) {
        if pair[0] ^ pair[1] != delta {
            return Err(SynthError::CanonicalizationFailed);
        }
    }
    let offsets: Vec<u32> = m.rows.iter().map(|&r| r ^ m.rows[0]).collect();
    for &a in &offsets {
        for &b in &offsets {
            if !offsets.contains(&(a ^ b)) {
                return Err(SynthError::CanonicalizationFailed);
            }
        }
    }

    let mut out = m.clone();
    let mut conj = Circuit::new(width);
    let budget = width * width;
    let mut emit = |out: &mut GroupMatrix, conj: &mut Circuit, g: Gate| -> Result<(), SynthError> {
        if conj.gate_complexity() >= budget {
            return Err(SynthError::CanonicalizationFailed);
        }
        conj.push(g).expect("conjugator gate is valid");
        out.apply_gate(&g);
        Ok(())
    };
    let line_bit = |line: usize| 1u32 << (width - line);

    // Reduce the pair difference to e_t.
    let mut delta = out.rows[0] ^ out.rows[1];
    if delta & line_bit(t) == 0 {
        let src = (1..=width)
            .find(|&l| delta & line_bit(l) != 0)
            .expect("pair difference is nonzero");
        emit(&mut out, &mut conj, Gate::cnot(src, t))?;
        delta = out.rows[0] ^ out.rows[1];
    }
    for l in 1..=width {
        if l != t && delta & line_bit(l) != 0 {
            emit(&mut out, &mut conj, Gate::cnot(t, l))?;
        }
    }

    // Map the remaining offset basis onto fresh unit vectors.
    let mut used = line_bit(t);
    loop {
        let offsets: Vec<u32> = out.rows.iter().map(|&r| r ^ out.rows[0]).collect();
        let Some(&eps) = offsets.iter().filter(|&&o| o & !used != 0).min() else {
            break;
        };
        let s = (1..=width)
            .find(|&l| eps & line_bit(l) & !used != 0)
            .expect("offset has a coordinate outside the used set");
        for l in 1..=width {
            if l != s && eps & line_bit(l) != 0 {
                emit(&mut out, &mut conj, Gate::cnot(s, l))?;
            }
        }
        used |= line_bit(s);
    }

    for pair in out.rows.chunks(2) {
        if pair[0] ^ pair[1] != line_bit(t) {
            return Err(SynthError::CanonicalizationFailed);
        }
    }
    out.stage = MatrixStage::Canonical;
    Ok((out, conj))
}

/// Result of the final realization stage.
#[derive(Clone, Debug)]
pub struct FinalRealization {
    /// The matrix after the NOT stage: constant 1 outside the varying lines.
    pub matrix: GroupMatrix,
    /// NOT gates on the constant-0 lines outside the distinct set.
    pub not_conjugator: Circuit,
    /// The wide gate realizing the aligned group exactly.
    pub gate: Gate,
}

/// Realizes a canonical matrix: NOT conjugation on the constant-0 lines,
/// then the single gate `TOF({1..n} \ distinct; t)`.
pub fn realize_final(
    m: &GroupMatrix,
    distinct: &LineSet,
    t: usize,
) -> Result<FinalRealization, SynthError> {
    if m.stage != MatrixStage::Canonical {
        return Err(SynthError::WrongStage { expected: "canonical" });
    }
    let width = m.width;
    let varying = m.varying_lines();
    if varying != *distinct || !distinct.contains(t) {
        return Err(SynthError::DistinctColumnsMismatch);
    }
    if m.rows.len() != 1usize << distinct.len() {
        return Err(SynthError::DistinctColumnsMismatch);
    }
    let mut out = m.clone();
    let mut nots = Circuit::new(width);
    for line in 1..=width {
        if !distinct.contains(line) && out.rows[0] & (1 << (width - line)) == 0 {
            let g = Gate::not(line);
            nots.push(g).expect("NOT gate is valid");
            out.apply_gate(&g);
        }
    }
    out.stage = MatrixStage::Final;
    let controls: LineSet = (1..=width).filter(|l| !distinct.contains(*l)).collect();
    let gate = Gate::new(controls, LineSet::EMPTY, t);
    Ok(FinalRealization { matrix: out, not_conjugator: nots, gate })
}

/// Expands a multi-control gate into C²NOT gates using `spares` as borrowed
/// lines. Gates with at most two controls pass through; three or more
/// controls need at least one spare line.
pub fn decompose_mct(
    controls: &[usize],
    target: usize,
    spares: &[usize],
) -> Result<Vec<Gate>, SynthError> {
    let c = controls.len();
    if c <= 2 {
        let set: LineSet = controls.iter().copied().collect();
        return Ok(vec![Gate::new(set, LineSet::EMPTY, target)]);
    }
    if spares.is_empty() {
        return Err(SynthError::InsufficientLines);
    }
    if spares.len() >= c - 2 {
        return Ok(v_chain(controls, target, &spares[..c - 2]));
    }
    // Split the control set in half around one borrowed line; each half then
    // has enough borrowed lines for the chain.
    let c1 = (c + 1) / 2;
    let (x1, x2) = controls.split_at(c1);
    let a = spares[0];
    let mut spares_a: Vec<usize> = x2.to_vec();
    spares_a.push(target);
    spares_a.extend_from_slice(&spares[1..]);
    let ga = decompose_mct(x1, a, &spares_a)?;
    let mut ctrl_b: Vec<usize> = x2.to_vec();
    ctrl_b.push(a);
    let mut spares_b: Vec<usize> = x1.to_vec();
    spares_b.extend_from_slice(&spares[1..]);
    let gb = decompose_mct(&ctrl_b, target, &spares_b)?;
    let mut gates = ga.clone();
    gates.extend(gb.iter().copied());
    gates.extend(ga);
    gates.extend(gb);
    Ok(gates)
}

/// The borrowed-line chain: `4(c-2)` Toffoli gates for `c >= 3` controls.
fn v_chain(x: &[usize], y: usize, a: &[usize]) -> Vec<Gate> {
    let c = x.len();
    debug_assert!(c >= 3 && a.len() == c - 2);
    let mut first = Vec::new();
    first.push(Gate::toffoli(x[c - 1], a[c - 3], y));
    for k in (1..=c - 3).rev() {
        first.push(Gate::toffoli(x[k + 1], a[k - 1], a[k]));
    }
    first.push(Gate::toffoli(x[0], x[1], a[0]));
    for k in 1..=c - 3 {
        first.push(Gate::toffoli(x[k + 1], a[k - 1], a[k]));
    }
    first.push(Gate::toffoli(x[c - 1], a[c - 3], y));
    let mut gates = first.clone();
    gates.extend_from_slice(&first[1..first.len() - 1]);
    gates
}
