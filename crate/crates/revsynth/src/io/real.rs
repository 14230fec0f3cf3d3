//! The REAL circuit format: `.version/.numvars/.variables` headers, a
//! `.begin`/`.end` body, and gate lines `t<k> -a b c` where a leading `-`
//! marks a negative control and the last name is the target.

use std::collections::BTreeMap;

use crate::circuit::{Circuit, CircuitMetadata};
use crate::gate::{Gate, LineSet};

use super::{garbage_from_outputs, line_names, IoError};

pub fn parse_real(text: &str) -> Result<Circuit, IoError> {
    let mut numvars: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut constants: Option<Vec<Option<bool>>> = None;
    let mut garbage: Option<Vec<bool>> = None;
    let mut gates: Vec<(usize, String)> = Vec::new();
    let mut in_body = false;
    let mut ended = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if ended {
            return Err(IoError::MalformedHeader { line: lineno, text: raw.to_string() });
        }
        if !in_body {
            if line == ".begin" {
                in_body = true;
            } else if line.starts_with(".version") {
                // Accepted and regenerated on emission.
            } else if let Some(rest) = line.strip_prefix(".numvars ") {
                numvars = Some(rest.trim().parse().map_err(|_| IoError::MalformedHeader {
                    line: lineno,
                    text: raw.to_string(),
                })?);
            } else if let Some(rest) = line.strip_prefix(".variables ") {
                names = Some(split_names(rest));
            } else if let Some(rest) = line.strip_prefix(".inputs ") {
                inputs = Some(split_names(rest));
            } else if let Some(rest) = line.strip_prefix(".outputs ") {
                outputs = Some(split_names(rest));
            } else if let Some(rest) = line.strip_prefix(".constants ") {
                let mut vals = Vec::new();
                for ch in rest.trim().chars() {
                    match ch {
                        '0' => vals.push(Some(false)),
                        '1' => vals.push(Some(true)),
                        '-' => vals.push(None),
                        c => return Err(IoError::BadSymbol { line: lineno, symbol: c }),
                    }
                }
                constants = Some(vals);
            } else if let Some(rest) = line.strip_prefix(".garbage ") {
                let mut vals = Vec::new();
                for ch in rest.trim().chars() {
                    match ch {
                        '1' => vals.push(true),
                        '-' => vals.push(false),
                        c => return Err(IoError::BadSymbol { line: lineno, symbol: c }),
                    }
                }
                garbage = Some(vals);
            } else {
                return Err(IoError::MalformedHeader { line: lineno, text: raw.to_string() });
            }
        } else if line == ".end" {
            ended = true;
        } else {
            gates.push((lineno, line.to_string()));
        }
    }
    let names = names.ok_or(IoError::MissingHeader(".variables"))?;
    let declared = numvars.ok_or(IoError::MissingHeader(".numvars"))?;
    if declared != names.len() {
        return Err(IoError::NumvarsMismatch { declared, found: names.len() });
    }
    if !in_body {
        return Err(IoError::MissingHeader(".begin"));
    }
    if !ended {
        return Err(IoError::MissingHeader(".end"));
    }
    let lines = names.len();
    let index: BTreeMap<&str, usize> =
        names.iter().enumerate().map(|(i, n)| (n.as_str(), i + 1)).collect();
    let mut circuit = Circuit::new(lines);

    for (lineno, text) in gates {
        let mut parts = text.split_whitespace();
        let kind = parts.next().unwrap_or_default();
        let (letter, count) = kind.split_at(1);
        if letter != "t" {
            return Err(IoError::UnsupportedGateKind { line: lineno, kind: kind.to_string() });
        }
        let declared: usize = count
            .parse()
            .map_err(|_| IoError::MalformedGate { line: lineno, text: text.clone() })?;
        let operands: Vec<&str> = parts.collect();
        if operands.len() != declared || operands.is_empty() {
            return Err(IoError::MalformedGate { line: lineno, text: text.clone() });
        }
        let mut positive = LineSet::EMPTY;
        let mut negative = LineSet::EMPTY;
        let mut target = 0usize;
        for (pos, op) in operands.iter().enumerate() {
            let last = pos + 1 == operands.len();
            let (name, negated) = match op.strip_prefix('-') {
                Some(stripped) => (stripped, true),
                None => (*op, false),
            };
            let &line = index.get(name).ok_or_else(|| IoError::UnknownVariable {
                line: lineno,
                name: name.to_string(),
            })?;
            if last {
                if negated {
                    return Err(IoError::MalformedGate { line: lineno, text: text.clone() });
                }
                target = line;
            } else if negated {
                negative.insert(line);
            } else {
                positive.insert(line);
            }
        }
        let gate = Gate::new(positive, negative, target);
        gate.validate(lines)?;
        circuit.push(gate)?;
    }

    let to_lines = |list: &[String]| -> Result<Vec<usize>, IoError> {
        list.iter()
            .map(|n| {
                index.get(n.as_str()).copied().ok_or_else(|| IoError::UnknownVariable {
                    line: 0,
                    name: n.clone(),
                })
            })
            .collect()
    };
    let input_lines = inputs.as_deref().map(to_lines).transpose()?;
    let output_lines = outputs.as_deref().map(to_lines).transpose()?;
    if let Some(vals) = &constants {
        if vals.len() != lines {
            return Err(IoError::MalformedHeader { line: 0, text: ".constants".into() });
        }
    }
    if let Some(vals) = &garbage {
        if vals.len() != lines {
            return Err(IoError::MalformedHeader { line: 0, text: ".garbage".into() });
        }
    }
    let meta = circuit.metadata_mut();
    meta.garbage = garbage.or_else(|| {
        output_lines.as_ref().map(|outs| garbage_from_outputs(lines, outs))
    });
    meta.names = Some(names);
    meta.input_lines = input_lines;
    meta.output_lines = output_lines;
    meta.constants = constants;
    Ok(circuit)
}

fn split_names(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

pub fn emit_real(c: &Circuit) -> String {
    let names = line_names(c);
    let meta = c.metadata();
    let mut out = String::from(".version 2.0\n");
    out.push_str(&format!(".numvars {}\n", c.lines()));
    out.push_str(&format!(".variables {}\n", names.join(" ")));
    if let Some(inputs) = &meta.input_lines {
        let list: Vec<&str> = inputs.iter().map(|&l| names[l - 1].as_str()).collect();
        out.push_str(&format!(".inputs {}\n", list.join(" ")));
    }
    if let Some(outputs) = &meta.output_lines {
        let list: Vec<&str> = outputs.iter().map(|&l| names[l - 1].as_str()).collect();
        out.push_str(&format!(".outputs {}\n", list.join(" ")));
    }
    if let Some(constants) = &meta.constants {
        let s: String = constants
            .iter()
            .map(|v| match v {
                Some(false) => '0',
                Some(true) => '1',
                None => '-',
            })
            .collect();
        out.push_str(&format!(".constants {s}\n"));
    }
    if let Some(garbage) = &meta.garbage {
        let s: String = garbage.iter().map(|&g| if g { '1' } else { '-' }).collect();
        out.push_str(&format!(".garbage {s}\n"));
    }
    out.push_str(".begin\n");
    for g in c.gates() {
        let mut ops: Vec<String> = g
            .controls()
            .iter()
            .map(|l| {
                if g.negative().contains(l) {
                    format!("-{}", names[l - 1])
                } else {
                    names[l - 1].clone()
                }
            })
            .collect();
        ops.push(names[g.target() - 1].clone());
        out.push_str(&format!("t{} {}\n", ops.len(), ops.join(" ")));
    }
    out.push_str(".end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tof(pos: &[usize], neg: &[usize], t: usize) -> Gate {
        Gate::new(LineSet::from_lines(pos), LineSet::from_lines(neg), t)
    }

    #[test]
    fn leading_dash_marks_negative_control() {
        let c = parse_real(".numvars 3\n.variables a b c\n.begin\nt3 -a b c\n.end\n").unwrap();
        assert_eq!(c.gates(), &[tof(&[2], &[1], 3)]);
    }

    #[test]
    fn numvars_mismatch_is_reported() {
        assert_eq!(
            parse_real(".numvars 2\n.variables a b c\n.begin\n.end\n"),
            Err(IoError::NumvarsMismatch { declared: 2, found: 3 })
        );
    }

    #[test]
    fn emission_is_stable_and_round_trips() {
        let mut c = Circuit::new(3);
        c.push(tof(&[1], &[2], 3)).unwrap();
        c.push(Gate::not(1)).unwrap();
        let text = emit_real(&c);
        let parsed = parse_real(&text).unwrap();
        assert_eq!(parsed.gates(), c.gates());
        assert_eq!(emit_real(&parsed), text);
    }

    #[test]
    fn cross_format_parses_identically() {
        let mut c = Circuit::new(4);
        c.push(tof(&[1, 3], &[2], 4)).unwrap();
        c.push(tof(&[2], &[], 1)).unwrap();
        let via_real = parse_real(&emit_real(&c)).unwrap();
        let via_tfc = crate::io::parse_tfc(&crate::io::emit_tfc(&c)).unwrap();
        assert_eq!(via_real.gates(), via_tfc.gates());
        assert_eq!(via_real.lines(), via_tfc.lines());
    }

    #[test]
    fn unsupported_gate_kinds_error() {
        assert!(matches!(
            parse_real(".numvars 3\n.variables a b c\n.begin\nf3 a b c\n.end\n"),
            Err(IoError::UnsupportedGateKind { .. })
        ));
    }
}
