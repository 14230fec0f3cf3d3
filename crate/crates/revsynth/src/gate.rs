//! Bit vectors, line sets, and the generalized Toffoli gate.

use std::fmt;

use thiserror::Error;

/// Maximum number of circuit lines supported by the dense representations.
pub const MAX_LINES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("positive and negative control sets overlap")]
    OverlappingControls,
    #[error("target line {0} is also a control")]
    TargetIsControl(usize),
    #[error("line {line} out of range for {lines} lines")]
    LineOutOfRange { line: usize, lines: usize },
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
}

/// A point of the Boolean cube `B^n`, coordinates `x_1..x_n`.
///
/// `x_1` is the most significant bit of the integer encoding, so truth-table
/// row indices and lexicographic coordinate order coincide.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    width: u8,
    value: u32,
}

impl BitVector {
    pub fn new(width: usize, value: u32) -> Self {
        assert!(width >= 1 && width <= MAX_LINES, "width {width} out of range");
        assert!(
            (value as u64) < (1u64 << width),
            "value {value} does not fit in {width} bits"
        );
        BitVector { width: width as u8, value }
    }

    pub fn from_coords(coords: &[bool]) -> Self {
        let mut value = 0u32;
        for &c in coords {
            value = (value << 1) | c as u32;
        }
        BitVector::new(coords.len(), value)
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Coordinate `x_line`, lines numbered `1..=width`.
    pub fn coord(&self, line: usize) -> bool {
        debug_assert!(line >= 1 && line <= self.width());
        (self.value >> (self.width() - line)) & 1 == 1
    }

    pub fn with_coord(self, line: usize, bit: bool) -> Self {
        let mask = 1u32 << (self.width() - line);
        let value = if bit { self.value | mask } else { self.value & !mask };
        BitVector { width: self.width, value }
    }

    pub fn flip(self, line: usize) -> Self {
        BitVector {
            width: self.width,
            value: self.value ^ (1 << (self.width() - line)),
        }
    }

    pub fn xor(self, other: Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        BitVector { width: self.width, value: self.value ^ other.value }
    }

    pub fn hamming_distance(self, other: Self) -> u32 {
        debug_assert_eq!(self.width, other.width);
        (self.value ^ other.value).count_ones()
    }

    pub fn weight(self) -> u32 {
        self.value.count_ones()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in 1..=self.width() {
            write!(f, "{}", self.coord(line) as u8)?;
        }
        Ok(())
    }
}

/// A set of line indices (1-based), stored as a bitmask.
///
/// Bit `i - 1` of the mask represents line `i`.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineSet(u32);

impl LineSet {
    pub const EMPTY: LineSet = LineSet(0);

    pub fn from_lines(lines: &[usize]) -> Self {
        lines.iter().copied().collect()
    }

    pub fn contains(&self, line: usize) -> bool {
        line >= 1 && line <= 32 && (self.0 >> (line - 1)) & 1 == 1
    }

    pub fn insert(&mut self, line: usize) {
        debug_assert!(line >= 1 && line <= 32);
        self.0 |= 1 << (line - 1);
    }

    pub fn remove(&mut self, line: usize) {
        self.0 &= !(1 << (line - 1));
    }

    pub fn with(mut self, line: usize) -> Self {
        self.insert(line);
        self
    }

    pub fn without(mut self, line: usize) -> Self {
        self.remove(line);
        self
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        LineSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        LineSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        LineSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.0;
        (1..=32usize).filter(move |i| (mask >> (i - 1)) & 1 == 1)
    }

    pub fn max_line(&self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(32 - self.0.leading_zeros() as usize)
        }
    }

    /// The only element of a singleton set.
    pub fn single(&self) -> Option<usize> {
        if self.len() == 1 {
            self.max_line()
        } else {
            None
        }
    }

    /// Mask over the value encoding of a `width`-line vector (`x_1` = MSB).
    pub fn value_mask(&self, width: usize) -> u32 {
        let mut m = 0;
        for line in self.iter() {
            debug_assert!(line <= width);
            m |= 1 << (width - line);
        }
        m
    }

    /// Inverse of [`LineSet::value_mask`].
    pub fn from_value_mask(mask: u32, width: usize) -> Self {
        let mut s = LineSet::EMPTY;
        for line in 1..=width {
            if (mask >> (width - line)) & 1 == 1 {
                s.insert(line);
            }
        }
        s
    }
}

impl FromIterator<usize> for LineSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = LineSet::EMPTY;
        for line in iter {
            s.insert(line);
        }
        s
    }
}

impl fmt::Debug for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, line) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{line}")?;
        }
        write!(f, "}}")
    }
}

/// A generalized Toffoli gate `TOF(I; J; t)`.
///
/// The gate flips the target coordinate `x_t` exactly when every line in the
/// positive set `I` carries 1 and every line in the negative set `J` carries
/// 0. `I` and `J` must be disjoint and must not contain `t`.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    positive: LineSet,
    negative: LineSet,
    target: usize,
}

impl Gate {
    /// Builds the gate without validating the invariants; use
    /// [`Gate::validate`] to check them against a line count.
    pub fn new(positive: LineSet, negative: LineSet, target: usize) -> Self {
        Gate { positive, negative, target }
    }

    pub fn not(target: usize) -> Self {
        Gate::new(LineSet::EMPTY, LineSet::EMPTY, target)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::new(LineSet::EMPTY.with(control), LineSet::EMPTY, target)
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::new(LineSet::EMPTY.with(c1).with(c2), LineSet::EMPTY, target)
    }

    pub fn positive(&self) -> LineSet {
        self.positive
    }

    pub fn negative(&self) -> LineSet {
        self.negative
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> LineSet {
        self.positive.union(self.negative)
    }

    pub fn control_count(&self) -> usize {
        self.controls().len()
    }

    /// Checks the gate invariants for a circuit with `lines` lines.
    pub fn validate(&self, lines: usize) -> Result<(), GateError> {
        if !self.positive.intersection(self.negative).is_empty() {
            return Err(GateError::OverlappingControls);
        }
        if self.controls().contains(self.target) {
            return Err(GateError::TargetIsControl(self.target));
        }
        if self.target < 1 || self.target > lines {
            return Err(GateError::LineOutOfRange { line: self.target, lines });
        }
        if let Some(max) = self.controls().max_line() {
            if max > lines {
                return Err(GateError::LineOutOfRange { line: max, lines });
            }
        }
        Ok(())
    }

    /// Applies the gate to one input vector. Involutive.
    pub fn apply(&self, v: BitVector) -> BitVector {
        let n = v.width();
        debug_assert!(self.validate(n).is_ok());
        let pos = self.positive.value_mask(n);
        let neg = self.negative.value_mask(n);
        if v.value() & pos == pos && v.value() & neg == 0 {
            v.flip(self.target)
        } else {
            v
        }
    }

    /// Apply over the raw integer encoding for a `width`-line vector.
    pub fn apply_value(&self, x: u32, width: usize) -> u32 {
        let pos = self.positive.value_mask(width);
        let neg = self.negative.value_mask(width);
        if x & pos == pos && x & neg == 0 {
            x ^ (1 << (width - self.target))
        } else {
            x
        }
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TOF(")?;
        let mut first = true;
        for line in self.controls().iter() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if self.negative.contains(line) {
                write!(f, "{line}'")?;
            } else {
                write!(f, "{line}")?;
            }
        }
        if !first {
            write!(f, ";")?;
        }
        write!(f, "{})", self.target)
    }
}

/// Validates a gate against a line count; standalone form of [`Gate::validate`].
pub fn validate_gate(g: &Gate, lines: usize) -> Result<(), GateError> {
    g.validate(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tof(pos: &[usize], neg: &[usize], t: usize) -> Gate {
        Gate::new(LineSet::from_lines(pos), LineSet::from_lines(neg), t)
    }

    #[test]
    fn bitvector_encoding_msb_first() {
        let v = BitVector::new(3, 0b100);
        assert!(v.coord(1));
        assert!(!v.coord(2));
        assert!(!v.coord(3));
        assert_eq!(BitVector::from_coords(&[true, false, false]), v);
        assert_eq!(v.to_string(), "100");
    }

    #[test]
    fn validate_accepts_valid_gate() {
        assert_eq!(tof(&[1], &[2], 3).validate(3), Ok(()));
    }

    #[test]
    fn validate_rejects_overlapping_controls() {
        assert_eq!(tof(&[1], &[1], 2).validate(3), Err(GateError::OverlappingControls));
    }

    #[test]
    fn validate_rejects_target_in_controls() {
        assert_eq!(tof(&[1], &[], 1).validate(3), Err(GateError::TargetIsControl(1)));
    }

    #[test]
    fn validate_rejects_out_of_range_lines() {
        assert_eq!(
            tof(&[4], &[], 1).validate(3),
            Err(GateError::LineOutOfRange { line: 4, lines: 3 })
        );
        assert_eq!(
            tof(&[], &[], 5).validate(3),
            Err(GateError::LineOutOfRange { line: 5, lines: 3 })
        );
    }

    #[test]
    fn apply_follows_control_polarities() {
        let g = tof(&[1], &[2], 3);
        assert_eq!(g.apply(BitVector::new(3, 0b100)), BitVector::new(3, 0b101));
        assert_eq!(g.apply(BitVector::new(3, 0b110)), BitVector::new(3, 0b110));
    }

    #[test]
    fn apply_is_involutive() {
        let g = tof(&[2], &[3], 1);
        for x in 0..8 {
            let v = BitVector::new(3, x);
            assert_eq!(g.apply(g.apply(v)), v);
        }
    }

    #[test]
    fn lineset_value_mask_round_trip() {
        let s = LineSet::from_lines(&[1, 3]);
        assert_eq!(s.value_mask(3), 0b101);
        assert_eq!(LineSet::from_value_mask(0b101, 3), s);
        assert_eq!(s.len(), 2);
        assert_eq!(s.max_line(), Some(3));
    }
}
