//! Deterministic dumps: TWOCAT v1 for synthesized 2-categories and DOT for
//! finite categories and the 1-skeleton of a 2-category.

use std::fmt::Write as _;

use eqfib_core::fincat::FinCategory;
use eqfib_core::htpy::SynthesizedTwoCategory;
use eqfib_core::oracle::Key;

/// Hom-categories in `(source, target)` index order; within each, morphisms
/// and cells in synthesis order, which depends only on the oracle.
pub fn export_twocat<B: Key, T: Key>(t: &SynthesizedTwoCategory<B, T>) -> String {
    let n = t.num_objects();
    let mut out = String::from("TWOCAT v1\n");
    let _ = writeln!(out, "label {}", t.label);
    let _ = writeln!(out, "objects {n}");
    for (i, o) in t.objects.iter().enumerate() {
        let _ = writeln!(out, "object {i} {o}");
    }
    for a in 0..n {
        for b in 0..n {
            let hom = t.hom(a, b);
            let _ = writeln!(
                out,
                "hom {} {} morphisms {} cells {}",
                t.objects[a],
                t.objects[b],
                hom.morphisms.len(),
                hom.num_cells()
            );
            for (i, m) in hom.mor_labels.iter().enumerate() {
                let _ = writeln!(out, "morphism {i} {m}");
            }
            for (i, c) in hom.cells.iter().enumerate() {
                let i = i as u32;
                let ident = hom.ident[c.src as usize] == i;
                let _ = writeln!(
                    out,
                    "cell {i} {} => {} inverse {}{}",
                    hom.mor_labels[c.src as usize],
                    hom.mor_labels[c.tgt as usize],
                    hom.inverse[i as usize],
                    if ident { " identity" } else { "" }
                );
            }
        }
    }
    let _ = writeln!(
        out,
        "total morphisms {} cells {}",
        t.total_morphisms(),
        t.total_cells()
    );
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Objects as nodes, non-identity morphisms as labeled edges.
pub fn export_dot(c: &FinCategory) -> String {
    let mut out = format!("digraph {} {{\n", quote(c.name()));
    for a in c.objects() {
        let _ = writeln!(out, "  {};", quote(c.obj_name(a)));
    }
    for m in c.morphisms().filter(|&m| !c.is_identity(m)) {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(c.obj_name(c.src(m))),
            quote(c.obj_name(c.tgt(m))),
            quote(c.mor_name(m))
        );
    }
    out.push_str("}\n");
    out
}

/// 0-cells as nodes, non-identity 1-cells as edges labeled with their
/// number of automorphism 2-cells.
pub fn export_twocat_dot<B: Key, T: Key>(t: &SynthesizedTwoCategory<B, T>) -> String {
    let n = t.num_objects();
    let mut out = format!("digraph {} {{\n", quote(&t.label));
    for o in &t.objects {
        let _ = writeln!(out, "  {};", quote(o));
    }
    for a in 0..n {
        for b in 0..n {
            let hom = t.hom(a, b);
            for (i, m) in hom.mor_labels.iter().enumerate() {
                if a == b && t.identity[a] == i as u32 {
                    continue;
                }
                let autos = hom.cells_between(i as u32, i as u32).count();
                let _ = writeln!(
                    out,
                    "  {} -> {} [label={}];",
                    quote(&t.objects[a]),
                    quote(&t.objects[b]),
                    quote(&format!("{m} ({autos})"))
                );
            }
        }
    }
    out.push_str("}\n");
    out
}
