//! Reversible logic synthesis toolkit.
//!
//! This crate synthesizes reversible circuits built from generalized Toffoli
//! gates with positive and negative controls, starting from permutation or
//! truth-table specifications. Three synthesis engines are provided:
//!
//! * a cycle-based engine that decomposes a permutation into grouped
//!   independent transpositions and realizes each group through a conjugated
//!   wide gate ([`synth`]),
//! * a transformation-based engine that sweeps the truth table row by row
//!   ([`rmsynth`]),
//! * a hybrid that pushes high-weight rows out of the transformation sweep
//!   and hands them to the cycle engine ([`rmsynth::combined_synthesize`]).
//!
//! Synthesized circuits can be reduced with equivalence-preserving rewrite
//! rules ([`optimize`]), checked by exhaustive simulation, costed under a
//! configurable model ([`cost`]), and exchanged in the TFC and REAL file
//! formats ([`io`]).

pub mod circuit;
pub mod cost;
pub mod gate;
pub mod io;
pub mod optimize;
pub mod perm;
pub mod pipeline;
pub mod rmsynth;
pub mod synth;

pub use circuit::{Circuit, CircuitMetadata, SimError, TruthTable};
pub use cost::{quantum_cost, t_count, CostError, CostModel, TCountReport};
pub use gate::{BitVector, Gate, GateError, LineSet, MAX_LINES};
pub use perm::{Parity, PermError, Permutation, Transposition, TranspositionGroup};
pub use synth::{AncillaPolicy, SynthError, SynthParams};
