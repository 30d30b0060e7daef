//! Plain-text renderings of the reports.

use std::fmt::Write;

use workbench_core::assembly::LongExactSequenceReport;
use workbench_core::building::BuildingGraph;
use workbench_core::cohomology::GradedCohomology;
use workbench_core::congruence::{word_to_string, FreeMatrixGroup};
use workbench_core::orders::CosetCountReport;

pub fn orders_text(r: &CosetCountReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "group {} at p = {}: order {}",
        r.group, r.p, r.group_order
    );
    for ((name, order), (iname, index)) in r.stabilizer_orders.iter().zip(&r.indices) {
        let _ = writeln!(out, "  |{name}(p)| = {order}    {iname} = {index}");
    }
    out
}

pub fn parabolic_text(t: &GradedCohomology) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "H*({}, Z)", t.label);
    for (i, g) in t.groups.iter().enumerate() {
        let _ = write!(out, "  * = {i}:  {g}");
        // annotate with the primary decomposition when it refines the
        // invariant-factor chain (Z/6 = Z/2 + Z/3 and so on)
        let primary = g.primary_parts();
        if primary.len() > g.torsion().len() {
            let parts: Vec<String> = primary.iter().map(|q| format!("Z/{q}")).collect();
            let _ = write!(out, "   (torsion in primary form: {})", parts.join(" + "));
        }
        let _ = writeln!(out);
    }
    for d in &t.extension_ambiguous {
        let _ = writeln!(
            out,
            "  note: degree {d} is the associated graded; a nontrivial extension \
             between its two pieces is possible"
        );
    }
    out
}

pub fn generators_text(g: &FreeMatrixGroup) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "congruence subgroup of level {}: free of rank {} (index {} below the modular group)",
        g.p,
        g.rank,
        workbench_core::congruence::psl2_order(g.p)
    );
    for (m, w) in g.generators.iter().zip(&g.schreier_words) {
        let _ = writeln!(
            out,
            "  [[{}, {}], [{}, {}]]    {}",
            m.at(0, 0),
            m.at(0, 1),
            m.at(1, 0),
            m.at(1, 1),
            word_to_string(w)
        );
    }
    out
}

pub fn building_text(g: &BuildingGraph, homology: (usize, usize)) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} building at p = {}: {} + {} vertices, {} edges, ({})-regular",
        g.kind,
        g.p,
        g.left.len(),
        g.right.len(),
        g.edge_count(),
        g.p + 1
    );
    let _ = writeln!(out, "  H0 rank {}, H1 rank {}", homology.0, homology.1);
    out
}

/// One line per degree, mirroring the shape of the sequence:
/// equivariant term, vertex isotropy term, edge isotropy term.
pub fn les_text(r: &LongExactSequenceReport) -> String {
    let coeff = if r.field_char == 0 {
        "Z ranks".to_string()
    } else {
        format!("F_{} dims", r.field_char)
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "equivariant long exact sequence, {} at p = {} ({coeff}; chi = {})",
        r.group, r.p, r.chi_check
    );
    let torsion = |t: &[(num_bigint::BigInt, u128)]| -> String {
        if t.is_empty() {
            String::new()
        } else {
            let parts: Vec<String> = t.iter().map(|(f, c)| format!("(Z/{f})^{c}")).collect();
            format!(" + {}", parts.join(" + "))
        }
    };
    for i in 0..r.vertex_term_ranks.len() {
        let _ = writeln!(
            out,
            "  -> H^{i} -> [vertex Z^{}{}] -> [edge Z^{}{}]",
            r.vertex_term_ranks[i],
            torsion(&r.vertex_term_torsion[i]),
            r.edge_term_ranks[i],
            torsion(&r.edge_term_torsion[i]),
        );
    }
    let bounds: Vec<String> = r
        .derived_bounds
        .iter()
        .enumerate()
        .map(|(i, b)| format!("H^{i} >= {b}"))
        .collect();
    let _ = writeln!(out, "  rank bounds: {}", bounds.join(", "));
    out
}

/// Edge list: one "u v" pair per line, 0-indexed, left vertex block
/// first, right block offset by the left count.
pub fn edge_list_text(g: &BuildingGraph) -> String {
    let mut out = String::new();
    let offset = g.left.len();
    for &(l, r) in &g.edges {
        let _ = writeln!(out, "{} {}", l, offset + r);
    }
    out
}
