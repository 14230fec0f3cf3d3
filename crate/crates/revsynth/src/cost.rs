//! Quantum-cost and T-count accounting under a configurable per-gate model.
//!
//! The shipped defaults are documented estimates, not a reproduction of any
//! external tool's tables: a gate with `c` controls costs `1` for `c <= 1`,
//! `5` for `c == 2` and `2^(c+1) - 3` beyond; its T-count is `0`, `7` and
//! `8(c-1) - 9` respectively. Negative controls cost the same as positive
//! ones unless the model says otherwise.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::circuit::Circuit;
use crate::gate::MAX_LINES;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CostError {
    #[error("cost model has no entry for {controls} controls")]
    ModelIncomplete { controls: usize },
    #[error("cost table is not monotone at {controls} controls")]
    NotMonotone { controls: usize },
    #[error("malformed cost model line {line}: {text}")]
    MalformedModel { line: usize, text: String },
}

/// Per-control-count cost tables plus the negative-control policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostModel {
    qc_overrides: BTreeMap<usize, u64>,
    t_overrides: BTreeMap<usize, u64>,
    /// When set, only the explicit tables are consulted.
    strict: bool,
    /// Negative controls cost the same as positive ones.
    pub negative_controls_free: bool,
    /// Control count at which a Clifford+T decomposition starts needing a
    /// spare line.
    pub ancilla_control_threshold: usize,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            qc_overrides: BTreeMap::new(),
            t_overrides: BTreeMap::new(),
            strict: false,
            negative_controls_free: true,
            ancilla_control_threshold: 3,
        }
    }
}

fn default_qc(controls: usize) -> u64 {
    match controls {
        0 | 1 => 1,
        2 => 5,
        c => (1u64 << (c + 1)) - 3,
    }
}

fn default_t(controls: usize) -> u64 {
    match controls {
        0 | 1 => 0,
        2 => 7,
        c => 8 * (c as u64 - 1) - 9,
    }
}

impl CostModel {
    /// A model backed only by the given tables; lookups outside them fail
    /// with [`CostError::ModelIncomplete`].
    pub fn strict(
        qc: BTreeMap<usize, u64>,
        t: BTreeMap<usize, u64>,
        negative_controls_free: bool,
    ) -> Result<Self, CostError> {
        let m = CostModel {
            qc_overrides: qc,
            t_overrides: t,
            strict: true,
            negative_controls_free,
            ancilla_control_threshold: 3,
        };
        m.check_monotone()?;
        Ok(m)
    }

    /// Parses `qc <c> <cost>` / `t <c> <cost>` lines; anything not overridden
    /// falls back to the defaults. `#` starts a comment.
    pub fn from_file(text: &str) -> Result<Self, CostError> {
        let mut model = CostModel::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let err = || CostError::MalformedModel { line: idx + 1, text: raw.to_string() };
            let kind = parts.next().ok_or_else(err)?;
            let c: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
            let cost: u64 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
            if parts.next().is_some() {
                return Err(err());
            }
            match kind {
                "qc" => {
                    model.qc_overrides.insert(c, cost);
                }
                "t" => {
                    model.t_overrides.insert(c, cost);
                }
                _ => return Err(err()),
            }
        }
        model.check_monotone()?;
        Ok(model)
    }

    pub fn qc_cost(&self, controls: usize) -> Result<u64, CostError> {
        match self.qc_overrides.get(&controls) {
            Some(&c) => Ok(c),
            None if self.strict => Err(CostError::ModelIncomplete { controls }),
            None => Ok(default_qc(controls)),
        }
    }

    pub fn t_cost(&self, controls: usize) -> Result<u64, CostError> {
        match self.t_overrides.get(&controls) {
            Some(&c) => Ok(c),
            None if self.strict => Err(CostError::ModelIncomplete { controls }),
            None => Ok(default_t(controls)),
        }
    }

    fn check_monotone(&self) -> Result<(), CostError> {
        let max = if self.strict {
            self.qc_overrides
                .keys()
                .chain(self.t_overrides.keys())
                .copied()
                .max()
                .unwrap_or(0)
        } else {
            MAX_LINES
        };
        let mut prev_qc = 0;
        let mut prev_t = 0;
        for c in 0..=max {
            if let Ok(q) = self.qc_cost(c) {
                if q < prev_qc {
                    return Err(CostError::NotMonotone { controls: c });
                }
                prev_qc = q;
            }
            if let Ok(t) = self.t_cost(c) {
                if t < prev_t {
                    return Err(CostError::NotMonotone { controls: c });
                }
                prev_t = t;
            }
        }
        Ok(())
    }
}

/// Sum of per-gate costs keyed by control count.
pub fn quantum_cost(c: &Circuit, model: &CostModel) -> Result<u64, CostError> {
    let mut total = 0u64;
    for g in c.gates() {
        let base = model.qc_cost(g.control_count())?;
        total += base;
        if !model.negative_controls_free {
            // NOT sandwich around each negative control.
            total += 2 * g.negative().len() as u64 * model.qc_cost(0)?;
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TCountReport {
    pub count: u64,
    /// Some gate needs a spare line for its Clifford+T decomposition and the
    /// circuit has none.
    pub ancilla_required: bool,
}

pub fn t_count(c: &Circuit, model: &CostModel) -> Result<TCountReport, CostError> {
    let mut count = 0u64;
    let mut ancilla = false;
    for g in c.gates() {
        let controls = g.control_count();
        count += model.t_cost(controls)?;
        if controls >= model.ancilla_control_threshold && c.lines() == controls + 1 {
            ancilla = true;
        }
    }
    Ok(TCountReport { count, ancilla_required: ancilla })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{Gate, LineSet};

    fn tof(pos: &[usize], neg: &[usize], t: usize) -> Gate {
        Gate::new(LineSet::from_lines(pos), LineSet::from_lines(neg), t)
    }

    #[test]
    fn three_nots_cost_three() {
        let c = Circuit::from_gates(3, vec![Gate::not(1), Gate::not(2), Gate::not(3)]).unwrap();
        assert_eq!(quantum_cost(&c, &CostModel::default()).unwrap(), 3);
    }

    #[test]
    fn two_control_toffoli_costs_five() {
        let c = Circuit::from_gates(3, vec![Gate::toffoli(1, 2, 3)]).unwrap();
        assert_eq!(quantum_cost(&c, &CostModel::default()).unwrap(), 5);
    }

    #[test]
    fn negative_controls_cost_as_positive_by_default() {
        let neg = Circuit::from_gates(3, vec![tof(&[1], &[2], 3)]).unwrap();
        let pos = Circuit::from_gates(3, vec![tof(&[1, 2], &[], 3)]).unwrap();
        let m = CostModel::default();
        assert_eq!(quantum_cost(&neg, &m).unwrap(), quantum_cost(&pos, &m).unwrap());
    }

    #[test]
    fn t_count_examples() {
        let m = CostModel::default();
        let nots = Circuit::from_gates(2, vec![Gate::not(1), Gate::not(2)]).unwrap();
        assert_eq!(t_count(&nots, &m).unwrap(), TCountReport { count: 0, ancilla_required: false });

        let c2 = Circuit::from_gates(3, vec![Gate::toffoli(1, 2, 3)]).unwrap();
        assert_eq!(t_count(&c2, &m).unwrap().count, 7);

        // A 4-control gate using every line of a 5-line circuit.
        let c4 = Circuit::from_gates(5, vec![tof(&[1, 2, 3, 4], &[], 5)]).unwrap();
        assert!(t_count(&c4, &m).unwrap().ancilla_required);
        // Same gate with a spare line available.
        let c4 = Circuit::from_gates(6, vec![tof(&[1, 2, 3, 4], &[], 5)]).unwrap();
        assert!(!t_count(&c4, &m).unwrap().ancilla_required);
    }

    #[test]
    fn cost_is_additive_over_gates() {
        let m = CostModel::default();
        let mut c = Circuit::new(4);
        let mut expect = 0;
        for g in [Gate::not(1), Gate::toffoli(1, 2, 3), tof(&[1, 2, 3], &[], 4)] {
            c.push(g).unwrap();
            expect += m.qc_cost(g.control_count()).unwrap();
            assert_eq!(quantum_cost(&c, &m).unwrap(), expect);
        }
    }

    #[test]
    fn model_file_overrides_and_defaults() {
        let m = CostModel::from_file("# comment\nqc 2 6\nt 2 9\n").unwrap();
        assert_eq!(m.qc_cost(2).unwrap(), 6);
        assert_eq!(m.qc_cost(3).unwrap(), 13);
        assert_eq!(m.t_cost(2).unwrap(), 9);
        assert_eq!(m.t_cost(1).unwrap(), 0);
    }

    #[test]
    fn model_file_rejects_garbage_and_non_monotone() {
        assert!(matches!(
            CostModel::from_file("qc x 3"),
            Err(CostError::MalformedModel { line: 1, .. })
        ));
        assert!(matches!(
            CostModel::from_file("qc 2 0"),
            Err(CostError::NotMonotone { .. })
        ));
    }

    #[test]
    fn strict_model_reports_missing_entries() {
        let m = CostModel::strict(
            BTreeMap::from([(0, 1), (1, 1)]),
            BTreeMap::from([(0, 0)]),
            true,
        )
        .unwrap();
        let c = Circuit::from_gates(3, vec![Gate::toffoli(1, 2, 3)]).unwrap();
        assert_eq!(
            quantum_cost(&c, &m),
            Err(CostError::ModelIncomplete { controls: 2 })
        );
    }

    #[test]
    fn default_tables_are_monotone() {
        let m = CostModel::default();
        let mut prev_q = 0;
        let mut prev_t = 0;
        for c in 0..MAX_LINES {
            let q = m.qc_cost(c).unwrap();
            let t = m.t_cost(c).unwrap();
            assert!(q >= prev_q && t >= prev_t);
            prev_q = q;
            prev_t = t;
        }
    }
}
