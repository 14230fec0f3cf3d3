//! The truth-table specification format: `.n`/`.m` headers and one output
//! row per input assignment, `-` marking a don't-care bit.

use crate::circuit::TruthTable;

use super::IoError;

/// A possibly partial, possibly multi-output truth table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    inputs: usize,
    outputs: usize,
    rows: Vec<Vec<Option<bool>>>,
}

impl SpecFile {
    pub fn new(inputs: usize, outputs: usize, rows: Vec<Vec<Option<bool>>>) -> Self {
        assert_eq!(rows.len(), 1 << inputs);
        assert!(rows.iter().all(|r| r.len() == outputs));
        SpecFile { inputs, outputs, rows }
    }

    /// Builds a square total specification from a dense table.
    pub fn from_table(t: &TruthTable) -> Self {
        let n = t.width();
        let rows = t
            .values()
            .iter()
            .map(|&y| (0..n).map(|k| Some((y >> (n - 1 - k)) & 1 == 1)).collect())
            .collect();
        SpecFile { inputs: n, outputs: n, rows }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, x: u32) -> &[Option<bool>] {
        &self.rows[x as usize]
    }

    pub fn rows(&self) -> &[Vec<Option<bool>>] {
        &self.rows
    }

    /// The dense table when the spec is square, total, and bijective.
    pub fn as_bijection(&self) -> Option<TruthTable> {
        if self.outputs != self.inputs {
            return None;
        }
        let mut values = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut v = 0u32;
            for sym in row {
                v = (v << 1) | (*sym)? as u32;
            }
            values.push(v);
        }
        let t = TruthTable::new(self.inputs, values);
        t.is_bijective().then_some(t)
    }
}

/// Parses `.n <n>` / `.m <m>` headers followed by `2^n` symbol rows.
pub fn parse_spec(text: &str) -> Result<SpecFile, IoError> {
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut rows: Vec<Vec<Option<bool>>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        if let Some(rest) = line.strip_prefix(".n ") {
            n = Some(rest.trim().parse().map_err(|_| IoError::MalformedHeader {
                line: lineno,
                text: raw.to_string(),
            })?);
        } else if let Some(rest) = line.strip_prefix(".m ") {
            m = Some(rest.trim().parse().map_err(|_| IoError::MalformedHeader {
                line: lineno,
                text: raw.to_string(),
            })?);
        } else {
            let m = m.ok_or(IoError::MissingHeader(".m"))?;
            let mut row = Vec::with_capacity(m);
            for ch in line.chars() {
                match ch {
                    '0' => row.push(Some(false)),
                    '1' => row.push(Some(true)),
                    '-' => row.push(None),
                    c => return Err(IoError::BadSymbol { line: lineno, symbol: c }),
                }
            }
            if row.len() != m {
                return Err(IoError::MalformedHeader { line: lineno, text: raw.to_string() });
            }
            rows.push(row);
        }
    }
    let n = n.ok_or(IoError::MissingHeader(".n"))?;
    let m = m.ok_or(IoError::MissingHeader(".m"))?;
    if rows.len() != 1 << n {
        return Err(IoError::RowCountMismatch { expected: 1 << n, found: rows.len() });
    }
    Ok(SpecFile { inputs: n, outputs: m, rows })
}

pub fn emit_spec(spec: &SpecFile) -> String {
    let mut out = String::new();
    out.push_str(&format!(".n {}\n.m {}\n", spec.inputs, spec.outputs));
    for row in &spec.rows {
        for sym in row {
            out.push(match sym {
                Some(false) => '0',
                Some(true) => '1',
                None => '-',
            });
        }
        out.push('\n');
    }
    out
}
