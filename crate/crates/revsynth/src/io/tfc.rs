//! The TFC circuit format: `.v/.i/.o/.c` headers, a `BEGIN`/`END` body, and
//! gate lines `t<k> a,b',c` where a trailing apostrophe marks a negative
//! control and the last name is the target.

use std::collections::BTreeMap;

use crate::circuit::{Circuit, CircuitMetadata};
use crate::gate::{Gate, LineSet};

use super::{garbage_from_outputs, line_names, IoError};

pub fn parse_tfc(text: &str) -> Result<Circuit, IoError> {
    let mut names: Option<Vec<String>> = None;
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut constants: Option<Vec<bool>> = None;
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
            if line == "BEGIN" {
                in_body = true;
            } else if let Some(rest) = line.strip_prefix(".v ") {
                names = Some(split_names(rest));
            } else if let Some(rest) = line.strip_prefix(".i ") {
                inputs = Some(split_names(rest));
            } else if let Some(rest) = line.strip_prefix(".o ") {
                outputs = Some(split_names(rest));
            } else if let Some(rest) = line.strip_prefix(".c ") {
                let mut vals = Vec::new();
                for v in rest.split(',') {
                    match v.trim() {
                        "0" => vals.push(false),
                        "1" => vals.push(true),
                        _ => {
                            return Err(IoError::MalformedHeader {
                                line: lineno,
                                text: raw.to_string(),
                            })
                        }
                    }
                }
                constants = Some(vals);
            } else {
                return Err(IoError::MalformedHeader { line: lineno, text: raw.to_string() });
            }
        } else if line == "END" {
            ended = true;
        } else {
            gates.push((lineno, line.to_string()));
        }
    }
    let names = names.ok_or(IoError::MissingHeader(".v"))?;
    if !in_body {
        return Err(IoError::MissingHeader("BEGIN"));
    }
    if !ended {
        return Err(IoError::MissingHeader("END"));
    }
    let index: BTreeMap<&str, usize> =
        names.iter().enumerate().map(|(i, n)| (n.as_str(), i + 1)).collect();
    let lines = names.len();
    let mut circuit = Circuit::new(lines);

    for (lineno, text) in gates {
        let (kind, rest) = text.split_once(char::is_whitespace).ok_or_else(|| {
            IoError::MalformedGate { line: lineno, text: text.clone() }
        })?;
        let (letter, count) = kind.split_at(1);
        if letter != "t" {
            return Err(IoError::UnsupportedGateKind { line: lineno, kind: kind.to_string() });
        }
        let declared: usize = count
            .parse()
            .map_err(|_| IoError::MalformedGate { line: lineno, text: text.clone() })?;
        let operands: Vec<&str> = rest.split(',').map(str::trim).collect();
        if operands.len() != declared || operands.is_empty() {
            return Err(IoError::MalformedGate { line: lineno, text: text.clone() });
        }
        let mut positive = LineSet::EMPTY;
        let mut negative = LineSet::EMPTY;
        let mut target = 0usize;
        for (pos, op) in operands.iter().enumerate() {
            let last = pos + 1 == operands.len();
            let (name, negated) = match op.strip_suffix('\'') {
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

    let meta = circuit.metadata_mut();
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
    if let Some(vals) = constants {
        let inputs = input_lines.clone().unwrap_or_default();
        let non_inputs: Vec<usize> = (1..=lines).filter(|l| !inputs.contains(l)).collect();
        if vals.len() != non_inputs.len() {
            return Err(IoError::MalformedHeader { line: 0, text: ".c".to_string() });
        }
        let mut per_line = vec![None; lines];
        for (l, v) in non_inputs.into_iter().zip(vals) {
            per_line[l - 1] = Some(v);
        }
        meta.constants = Some(per_line);
    }
    meta.garbage = output_lines
        .as_ref()
        .map(|outs| garbage_from_outputs(lines, outs));
    meta.names = Some(names);
    meta.input_lines = input_lines;
    meta.output_lines = output_lines;
    Ok(circuit)
}

fn split_names(s: &str) -> Vec<String> {
    s.split(',').map(|n| n.trim().to_string()).collect()
}

pub fn emit_tfc(c: &Circuit) -> String {
    let names = line_names(c);
    let mut out = String::new();
    out.push_str(&format!(".v {}\n", names.join(",")));
    let meta = c.metadata();
    if let Some(inputs) = &meta.input_lines {
        let list: Vec<&str> = inputs.iter().map(|&l| names[l - 1].as_str()).collect();
        out.push_str(&format!(".i {}\n", list.join(",")));
        if let Some(constants) = &meta.constants {
            let vals: Vec<&str> = (1..=c.lines())
                .filter(|l| !inputs.contains(l))
                .filter_map(|l| constants[l - 1].map(|b| if b { "1" } else { "0" }))
                .collect();
            if !vals.is_empty() {
                out.push_str(&format!(".c {}\n", vals.join(",")));
            }
        }
    }
    if let Some(outputs) = &meta.output_lines {
        let list: Vec<&str> = outputs.iter().map(|&l| names[l - 1].as_str()).collect();
        out.push_str(&format!(".o {}\n", list.join(",")));
    }
    out.push_str("BEGIN\n");
    for g in c.gates() {
        let mut ops: Vec<String> = g
            .controls()
            .iter()
            .map(|l| {
                if g.negative().contains(l) {
                    format!("{}'", names[l - 1])
                } else {
                    names[l - 1].clone()
                }
            })
            .collect();
        ops.push(names[g.target() - 1].clone());
        out.push_str(&format!("t{} {}\n", ops.len(), ops.join(",")));
    }
    out.push_str("END\n");
    out
}
