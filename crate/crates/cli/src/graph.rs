use std::fmt::Write;

use subfib::fincat::FinCategory;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per object and one edge per non-identity morphism. Edges for which
/// `vertical` holds are dashed.
pub fn dot(name: &str, c: &FinCategory, vertical: impl Fn(subfib::fincat::Mor) -> bool) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {} {{", quote(name)).unwrap();
    for o in c.objects() {
        writeln!(s, "  {};", quote(c.object_name(o))).unwrap();
    }
    for m in c.morphisms().filter(|&m| !c.is_identity(m)) {
        let style = if vertical(m) { ", style=dashed" } else { "" };
        writeln!(
            s,
            "  {} -> {} [label={}{}];",
            quote(c.object_name(c.dom(m))),
            quote(c.object_name(c.cod(m))),
            quote(c.name(m)),
            style
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}
