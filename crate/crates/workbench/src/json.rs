//! JSON document types. Field order is declaration order and maps are
//! BTree-backed, so identical inputs serialize byte-identically.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use serde::Serialize;

use workbench_core::assembly::LongExactSequenceReport;
use workbench_core::building::BuildingGraph;
use workbench_core::cohomology::GradedCohomology;
use workbench_core::congruence::{word_to_string, FreeMatrixGroup};
use workbench_core::linalg::FinAb;
use workbench_core::orders::CosetCountReport;
use workbench_core::IntMatrix;

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct FinAbDoc {
    pub free_rank: String,
    pub torsion: Vec<String>,
}

impl From<&FinAb> for FinAbDoc {
    fn from(g: &FinAb) -> Self {
        FinAbDoc {
            free_rank: g.free_rank().to_string(),
            torsion: g.torsion().iter().map(BigInt::to_string).collect(),
        }
    }
}

/// Matrices serialize as nested arrays of decimal strings.
pub fn matrix_to_json(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).to_string()).collect())
        .collect()
}

/// Inverse of `matrix_to_json`; rejects ragged or non-decimal input.
pub fn matrix_from_json(rows: &[Vec<String>]) -> Result<IntMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        bail!("ragged matrix rows");
    }
    let mut entries = Vec::with_capacity(nrows * ncols);
    for row in rows {
        for s in row {
            entries.push(
                s.parse::<BigInt>()
                    .with_context(|| format!("bad entry {s:?}"))?,
            );
        }
    }
    let mut i = entries.into_iter();
    Ok(IntMatrix::from_fn(nrows, ncols, |_, _| {
        i.next().expect("counted")
    }))
}

#[derive(Serialize)]
pub struct OrdersDoc {
    pub schema: u32,
    pub kind: &'static str,
    pub group: String,
    pub p: String,
    pub group_order: String,
    pub stabilizer_orders: BTreeMap<String, String>,
    pub indices: BTreeMap<String, String>,
}

impl From<&CosetCountReport> for OrdersDoc {
    fn from(r: &CosetCountReport) -> Self {
        OrdersDoc {
            schema: SCHEMA,
            kind: "orders",
            group: r.group.to_string(),
            p: r.p.to_string(),
            group_order: r.group_order.to_string(),
            stabilizer_orders: r
                .stabilizer_orders
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
            indices: r
                .indices
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ParabolicDoc {
    pub schema: u32,
    pub kind: &'static str,
    pub label: String,
    pub group: String,
    pub which: String,
    pub p: String,
    pub degrees: Vec<FinAbDoc>,
    pub extension_ambiguous: Vec<String>,
}

impl ParabolicDoc {
    pub fn new(table: &GradedCohomology, group: &str, which: &str) -> Self {
        ParabolicDoc {
            schema: SCHEMA,
            kind: "parabolic",
            label: table.label.clone(),
            group: group.to_string(),
            which: which.to_string(),
            p: table.p.to_string(),
            degrees: table.groups.iter().map(FinAbDoc::from).collect(),
            extension_ambiguous: table
                .extension_ambiguous
                .iter()
                .map(usize::to_string)
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct GeneratorDoc {
    pub matrix: Vec<Vec<String>>,
    pub word: String,
}

#[derive(Serialize)]
pub struct GeneratorsDoc {
    pub schema: u32,
    pub kind: &'static str,
    pub p: String,
    pub index: String,
    pub rank: String,
    pub generators: Vec<GeneratorDoc>,
}

impl From<&FreeMatrixGroup> for GeneratorsDoc {
    fn from(g: &FreeMatrixGroup) -> Self {
        GeneratorsDoc {
            schema: SCHEMA,
            kind: "generators",
            p: g.p.to_string(),
            index: workbench_core::congruence::psl2_order(g.p).to_string(),
            rank: g.rank.to_string(),
            generators: g
                .generators
                .iter()
                .zip(&g.schreier_words)
                .map(|(m, w)| GeneratorDoc {
                    matrix: matrix_to_json(m),
                    word: word_to_string(w),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct BuildingDoc {
    pub schema: u32,
    pub kind: &'static str,
    pub group: String,
    pub p: String,
    pub left_count: String,
    pub right_count: String,
    pub edge_count: String,
    pub h0: String,
    pub h1: String,
    /// subspace representatives: rref basis rows over F_p
    pub left: Vec<Vec<Vec<String>>>,
    pub right: Vec<Vec<Vec<String>>>,
    pub edges: Vec<[String; 2]>,
}

impl BuildingDoc {
    pub fn new(g: &BuildingGraph, homology: (usize, usize)) -> Self {
        let subspaces = |side: &[workbench_core::building::Subspace]| {
            side.iter()
                .map(|s| {
                    s.rows
                        .iter()
                        .map(|row| row.iter().map(u64::to_string).collect())
                        .collect()
                })
                .collect()
        };
        BuildingDoc {
            schema: SCHEMA,
            kind: "building",
            group: g.kind.to_string(),
            p: g.p.to_string(),
            left_count: g.left.len().to_string(),
            right_count: g.right.len().to_string(),
            edge_count: g.edge_count().to_string(),
            h0: homology.0.to_string(),
            h1: homology.1.to_string(),
            left: subspaces(&g.left),
            right: subspaces(&g.right),
            edges: g
                .edges
                .iter()
                .map(|&(l, r)| [l.to_string(), r.to_string()])
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct LesDoc {
    pub schema: u32,
    pub kind: &'static str,
    pub group: String,
    pub p: String,
    pub field_char: String,
    pub vertex_term_ranks: Vec<String>,
    pub edge_term_ranks: Vec<String>,
    /// per degree: [invariant factor, multiplicity] pairs
    pub vertex_term_torsion: Vec<Vec<[String; 2]>>,
    pub edge_term_torsion: Vec<Vec<[String; 2]>>,
    pub derived_bounds: BTreeMap<String, String>,
    pub chi_check: String,
}

impl From<&LongExactSequenceReport> for LesDoc {
    fn from(r: &LongExactSequenceReport) -> Self {
        let torsion = |t: &[(BigInt, u128)]| -> Vec<[String; 2]> {
            t.iter()
                .map(|(f, c)| [f.to_string(), c.to_string()])
                .collect()
        };
        LesDoc {
            schema: SCHEMA,
            kind: "les",
            group: r.group.to_string(),
            p: r.p.to_string(),
            field_char: r.field_char.to_string(),
            vertex_term_ranks: r.vertex_term_ranks.iter().map(u128::to_string).collect(),
            edge_term_ranks: r.edge_term_ranks.iter().map(u128::to_string).collect(),
            vertex_term_torsion: r.vertex_term_torsion.iter().map(|t| torsion(t)).collect(),
            edge_term_torsion: r.edge_term_torsion.iter().map(|t| torsion(t)).collect(),
            derived_bounds: r
                .derived_bounds
                .iter()
                .enumerate()
                .map(|(i, b)| (i.to_string(), b.to_string()))
                .collect(),
            chi_check: r.chi_check.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct BoundsDoc {
    pub schema: u32,
    pub kind: &'static str,
    pub group: String,
    pub p: String,
    pub degree: String,
    pub bound: String,
}

#[derive(Serialize)]
pub struct ManifestDoc {
    pub schema: u32,
    pub kind: &'static str,
    pub command: String,
    pub p: Option<String>,
    pub group: Option<String>,
    pub output_path: Option<String>,
    pub tool_version: &'static str,
    pub wall_time_ms: String,
}

/// Serialize a document with a trailing newline (stable bytes).
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable document");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = IntMatrix::from_i64_rows(&[&[1, -7], &[0, 123456789]]);
        let j = matrix_to_json(&m);
        assert_eq!(j, vec![vec!["1", "-7"], vec!["0", "123456789"]]);
        assert_eq!(matrix_from_json(&j).unwrap(), m);
        assert!(matrix_from_json(&[vec!["1".into()], vec![]]).is_err());
        assert!(matrix_from_json(&[vec!["x".into()]]).is_err());
    }
}
