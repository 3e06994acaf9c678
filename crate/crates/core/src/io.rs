//! Stable file formats and literals: arrangement and Coxeter JSON inputs,
//! weight literals, and the JSON reports emitted by the CLI.
//!
//! All numeric I/O is integer-only. Elements render as dot-joined generator
//! names with `e` for the identity; hyperplanes render against the basis
//! labels (`s-2t`); maps serialize with sorted keys so output is
//! byte-stable across runs and thread counts.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::arrangement::{Arrangement, Facet};
use crate::coxeter::CoxeterSystem;
use crate::error::{Error, Result};
use crate::hecke::{CellPartition, HeckeElement};
use crate::lattice::LatticeBasis;
use crate::weight::WeightFunction;

/// Arrangement file: `{"labels": ["s","t"], "forms": [[1,0],[0,1],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrangementFile {
    pub labels: Vec<String>,
    pub forms: Vec<Vec<i64>>,
}

pub fn arrangement_from_json(text: &str) -> Result<Arrangement> {
    let file: ArrangementFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("arrangement JSON: {e}")))?;
    Arrangement::new(LatticeBasis::new(file.labels)?, file.forms)
}

/// Coxeter file: `{"generators": ["t","s1"], "matrix": [[1,4],[4,1]]}`
/// with `0` encoding an infinite bond.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoxeterFile {
    pub generators: Vec<String>,
    pub matrix: Vec<Vec<u32>>,
}

pub fn coxeter_from_json(text: &str, cap: usize) -> Result<CoxeterSystem> {
    let file: CoxeterFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("coxeter JSON: {e}")))?;
    CoxeterSystem::build(file.generators, file.matrix, cap)
}

/// Loads a group from a built-in name (`I2(5)`, `A3`, `B4`, `F4`) or a
/// JSON file path.
pub fn load_group(spec: &str, cap: usize) -> Result<CoxeterSystem> {
    if std::path::Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| Error::Parse(format!("reading `{spec}`: {e}")))?;
        return coxeter_from_json(&text, cap);
    }
    crate::coxeter::builtin(spec, cap)
}

/// Parses a weight literal: `s=1,t=2` (rank one) or `s=(1,0),t=(1,1)`
/// (lexicographic, leftmost coordinate most significant). Keys may be
/// class labels or any generator in the class; each class must be
/// assigned exactly once.
pub fn parse_weight_literal(system: &CoxeterSystem, text: &str) -> Result<WeightFunction> {
    let mut assignments: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let bytes = text.as_bytes();
    let mut pieces = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse("unbalanced parentheses in weight".into()))?
            }
            b',' if depth == 0 => {
                pieces.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced parentheses in weight".into()));
    }
    pieces.push(&text[start..]);

    for piece in pieces {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("weight entry `{piece}` is not `name=value`")))?;
        let class = system
            .class_by_label(key.trim())
            .ok_or_else(|| Error::Parse(format!("unknown class or generator `{}`", key.trim())))?;
        let value = value.trim();
        let coords: Vec<i64> = if let Some(inner) =
            value.strip_prefix('(').and_then(|v| v.strip_suffix(')'))
        {
            inner
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad integer `{c}` in weight")))
                })
                .collect::<Result<_>>()?
        } else {
            vec![value
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer `{value}` in weight")))?]
        };
        if assignments.iter().any(|(c, _)| *c == class) {
            return Err(Error::Parse(format!(
                "class `{}` assigned twice",
                system.class_labels()[class]
            )));
        }
        assignments.push((class, coords));
    }
    if assignments.len() != system.num_classes() {
        return Err(Error::Parse(format!(
            "weight must assign every class exactly once; expected {}, got {}",
            system.num_classes(),
            assignments.len()
        )));
    }
    let rank = assignments[0].1.len();
    if assignments.iter().any(|(_, v)| v.len() != rank) {
        return Err(Error::Parse("all weight values must have the same rank".into()));
    }
    let mut values = vec![vec![0i64; rank]; system.num_classes()];
    for (class, coords) in assignments {
        values[class] = coords;
    }
    WeightFunction::new(rank, values)
}

/// Weight as a JSON object keyed by class label: integers at rank one,
/// arrays otherwise.
pub fn weight_json(system: &CoxeterSystem, w: &WeightFunction) -> Value {
    let mut map = Map::new();
    for (c, label) in system.class_labels().iter().enumerate() {
        let v = w.value(c);
        map.insert(label.clone(), if w.rank() == 1 { json!(v[0]) } else { json!(v) });
    }
    Value::Object(map)
}

/// Facet as a JSON object with sign map, dimension and zero classes.
pub fn facet_json(arrangement: &Arrangement, facet: &Facet) -> Value {
    let mut signs = Map::new();
    for (h, &s) in facet.signs().iter().enumerate() {
        signs.insert(arrangement.hyperplane_label(h), json!(s));
    }
    let zero_classes: Vec<String> = arrangement
        .parabolic_zero_classes(facet)
        .map(|set| {
            set.into_iter().map(|c| arrangement.basis().labels()[c].clone()).collect()
        })
        .unwrap_or_default();
    json!({
        "signs": Value::Object(signs),
        "dim": facet.dim(),
        "zero_classes": zero_classes,
    })
}

/// Facet census with the Hasse diagram (covering pairs) of the face order.
pub fn facets_report_json(arrangement: &Arrangement) -> Value {
    let facets = arrangement.enumerate_facets();
    let n = facets.len();
    let leq: Vec<Vec<bool>> = facets
        .iter()
        .map(|f| facets.iter().map(|g| arrangement.face_leq(f, g).unwrap()).collect())
        .collect();
    let mut hasse = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq[i][j] {
                continue;
            }
            let covered = (0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j]);
            if !covered {
                hasse.push(json!([i, j]));
            }
        }
    }
    json!({
        "labels": arrangement.basis().labels(),
        "hyperplanes": (0..arrangement.hyperplanes().len())
            .map(|h| arrangement.hyperplane_label(h))
            .collect::<Vec<_>>(),
        "facets": facets.iter().map(|f| facet_json(arrangement, f)).collect::<Vec<_>>(),
        "chambers": facets.iter().filter(|f| f.is_chamber()).count(),
        "hasse": hasse,
    })
}

/// Partition report: side, weight and rendered cells (cells and members
/// sorted in ShortLex order).
pub fn partition_json(
    system: &CoxeterSystem,
    weight: &WeightFunction,
    partition: &CellPartition,
) -> Value {
    json!({
        "side": partition.side.as_str(),
        "weight": weight_json(system, weight),
        "cells": partition
            .cells
            .iter()
            .map(|cell| cell.iter().map(|&w| system.render(w)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "order": partition.order,
    })
}

/// Kazhdan-Lusztig element dump: a list of `(word, [(exponent, coeff)])`
/// pairs, exponents most-significant coordinate first.
pub fn kl_dump_json(system: &CoxeterSystem, element: &HeckeElement) -> Value {
    let mut rows = Vec::new();
    for (w, coef) in element.terms() {
        let terms: Vec<Value> =
            coef.terms().map(|(e, c)| json!([e.coords(coef.rank()), c])).collect();
        rows.push(json!([system.render(w), terms]));
    }
    Value::Array(rows)
}

/// Parses a partition report back into blocks of elements.
pub fn partition_from_json(system: &CoxeterSystem, value: &Value) -> Result<crate::hecke::cells::Blocks> {
    let cells = value
        .get("cells")
        .and_then(|c| c.as_array())
        .ok_or_else(|| Error::Parse("partition JSON lacks `cells`".into()))?;
    let mut blocks = Vec::new();
    for cell in cells {
        let members = cell
            .as_array()
            .ok_or_else(|| Error::Parse("partition cell is not an array".into()))?;
        let mut block = Vec::new();
        for m in members {
            let name =
                m.as_str().ok_or_else(|| Error::Parse("cell member is not a string".into()))?;
            block.push(system.parse_element(name)?);
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks.sort();
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::builtin;
    use crate::hecke::Side;

    #[test]
    fn weight_literals() {
        let b3 = builtin("B3", 100).unwrap();
        let w = parse_weight_literal(&b3, "s=1,t=2").unwrap();
        assert_eq!(w.rank(), 1);
        assert_eq!(w.value(0), &[2]); // class order: t first in B3
        assert_eq!(w.value(1), &[1]);
        let w = parse_weight_literal(&b3, "s1=3,t=2").unwrap();
        assert_eq!(w.value(1), &[3]);
        let w = parse_weight_literal(&b3, "s=(1,0),t=(1,1)").unwrap();
        assert_eq!(w.rank(), 2);
        assert_eq!(w.value(0), &[1, 1]);
        assert!(parse_weight_literal(&b3, "s=1").is_err());
        assert!(parse_weight_literal(&b3, "s=1,t=2,s1=3").is_err());
        assert!(parse_weight_literal(&b3, "s=1,t=(1,2)").is_err());
        assert!(parse_weight_literal(&b3, "u=1,t=2").is_err());
    }

    #[test]
    fn files_round_trip() {
        let text = r#"{"labels": ["s","t"], "forms": [[1,0],[0,1],[1,-1],[1,1]]}"#;
        let arr = arrangement_from_json(text).unwrap();
        assert_eq!(arr.hyperplanes().len(), 4);
        assert!(arrangement_from_json("{bad").is_err());

        let text = r#"{"generators": ["t","s1","s2"], "matrix": [[1,4,2],[4,1,3],[2,3,1]]}"#;
        let w = coxeter_from_json(text, 100).unwrap();
        assert_eq!(w.size(), 48);
    }

    #[test]
    fn partition_json_round_trip() {
        let w = builtin("I2(4)", 100).unwrap();
        let weight = parse_weight_literal(&w, "s=1,t=2").unwrap();
        let p = crate::hecke::cells_for_weight(&w, &weight, Side::L).unwrap();
        let v = partition_json(&w, &weight, &p);
        assert_eq!(v["side"], "L");
        assert_eq!(v["weight"]["s"], 1);
        let blocks = partition_from_json(&w, &v).unwrap();
        assert_eq!(blocks, p.cells);
    }

    #[test]
    fn facet_report_names_hyperplanes() {
        let basis = LatticeBasis::new(vec!["s".into(), "t".into()]).unwrap();
        let arr = Arrangement::complete_rank2(basis).unwrap();
        let report = facets_report_json(&arr);
        assert_eq!(report["facets"].as_array().unwrap().len(), 17);
        assert_eq!(report["chambers"], 8);
        assert_eq!(report["hyperplanes"][2], "s-t");
        // The zero facet is covered by rays only: hasse edges out of it go
        // to dimension-1 facets.
        assert!(!report["hasse"].as_array().unwrap().is_empty());
    }
}
