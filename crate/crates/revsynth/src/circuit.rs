//! Circuits as ordered gate sequences, plus dense truth tables and simulation.

use std::fmt;

use thiserror::Error;

use crate::gate::{BitVector, Gate, GateError, MAX_LINES};

/// Default number of lines above which [`Circuit::simulate`] refuses to run.
pub const DEFAULT_SIM_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("{lines} lines exceed the simulation cap of {cap}")]
    TooManyLines { lines: usize, cap: usize },
}

/// A dense map `B^n -> B^n`, not necessarily bijective.
#[derive(Clone, PartialEq, Eq)]
pub struct TruthTable {
    width: usize,
    values: Vec<u32>,
}

impl TruthTable {
    pub fn new(width: usize, values: Vec<u32>) -> Self {
        assert!(width >= 1 && width <= MAX_LINES);
        assert_eq!(values.len(), 1usize << width);
        debug_assert!(values.iter().all(|&v| (v as u64) < (1u64 << width)));
        TruthTable { width, values }
    }

    pub fn identity(width: usize) -> Self {
        TruthTable::new(width, (0..1u32 << width).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.values[x as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn set(&mut self, x: u32, y: u32) {
        self.values[x as usize] = y;
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        for &v in &self.values {
            if seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Left-associative composition: applies `self`, then `other`.
    pub fn then(&self, other: &TruthTable) -> TruthTable {
        assert_eq!(self.width, other.width);
        TruthTable::new(
            self.width,
            self.values.iter().map(|&v| other.apply(v)).collect(),
        )
    }

    /// Inverse of a bijective table.
    pub fn inverse(&self) -> TruthTable {
        debug_assert!(self.is_bijective());
        let mut inv = vec![0u32; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        TruthTable::new(self.width, inv)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, {:?})", self.width, self.values)
    }
}

/// Optional line labelling carried alongside a circuit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CircuitMetadata {
    /// Line names, one per line, when known.
    pub names: Option<Vec<String>>,
    /// Lines fed by primary inputs (1-based).
    pub input_lines: Option<Vec<usize>>,
    /// Lines whose final values are primary outputs (1-based).
    pub output_lines: Option<Vec<usize>>,
    /// Constant input value per line; `None` for non-constant lines.
    pub constants: Option<Vec<Option<bool>>>,
    /// Garbage marker per line.
    pub garbage: Option<Vec<bool>>,
}

/// A reversible circuit: a line count and an ordered gate sequence.
///
/// Composition is left to right; the first gate in the sequence acts first.
#[derive(Clone, PartialEq, Eq)]
pub struct Circuit {
    lines: usize,
    gates: Vec<Gate>,
    metadata: CircuitMetadata,
}

impl Circuit {
    pub fn new(lines: usize) -> Self {
        assert!(lines >= 1 && lines <= MAX_LINES, "line count {lines} out of range");
        Circuit { lines, gates: Vec::new(), metadata: CircuitMetadata::default() }
    }

    pub fn from_gates(lines: usize, gates: Vec<Gate>) -> Result<Self, GateError> {
        let mut c = Circuit::new(lines);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn metadata(&self) -> &CircuitMetadata {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut CircuitMetadata {
        &mut self.metadata
    }

    pub fn set_metadata(&mut self, m: CircuitMetadata) {
        self.metadata = m;
    }

    pub fn push(&mut self, g: Gate) -> Result<(), GateError> {
        g.validate(self.lines)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn extend_gates(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<(), GateError> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Number of gates (GC).
    pub fn gate_complexity(&self) -> usize {
        self.gates.len()
    }

    /// The inverse circuit: gates reversed (every gate is an involution).
    pub fn reversed(&self) -> Circuit {
        let mut c = self.clone();
        c.gates.reverse();
        c
    }

    /// Applies all gates in order to one vector.
    pub fn apply(&self, v: BitVector) -> BitVector {
        assert_eq!(v.width(), self.lines);
        self.gates.iter().fold(v, |v, g| g.apply(v))
    }

    pub fn apply_value(&self, x: u32) -> u32 {
        self.gates.iter().fold(x, |x, g| g.apply_value(x, self.lines))
    }

    /// Exhaustive simulation into a dense table; always a bijection.
    pub fn simulate(&self) -> Result<TruthTable, SimError> {
        self.simulate_with_cap(DEFAULT_SIM_CAP)
    }

    pub fn simulate_with_cap(&self, cap: usize) -> Result<TruthTable, SimError> {
        if self.lines > cap {
            return Err(SimError::TooManyLines { lines: self.lines, cap });
        }
        let n = self.lines;
        let mut table: Vec<u32> = (0..1u32 << n).collect();
        for g in &self.gates {
            let pos = g.positive().value_mask(n);
            let neg = g.negative().value_mask(n);
            let bit = 1u32 << (n - g.target());
            for v in table.iter_mut() {
                if *v & pos == pos && *v & neg == 0 {
                    *v ^= bit;
                }
            }
        }
        Ok(TruthTable::new(n, table))
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Circuit(n={}", self.lines)?;
        for g in &self.gates {
            write!(f, ", {g}")?;
        }
        write!(f, ")")
    }
}
