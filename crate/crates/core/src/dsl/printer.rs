use std::fmt::Write;

use super::{Decl, Document};
use crate::series::TruncatedSeries;

/// Canonical text: two-space indentation, one item per line, declarations
/// separated by a blank line, LF line endings.
pub fn print_document(d: &Document) -> String {
    let mut out = String::new();
    for (k, decl) in d.decls().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        print_decl(&mut out, decl);
    }
    out
}

fn print_decl(out: &mut String, decl: &Decl) {
    // Writing to a String cannot fail.
    let _ = match decl {
        Decl::Ring(r) => {
            let _ = writeln!(out, "ring {} {{", r.name);
            for g in &r.gens {
                let _ = write!(out, "  gen {} : deg={}", g.name, g.degree);
                if g.weight != 1 {
                    let _ = write!(out, ", weight={}", g.weight);
                }
                out.push_str(";\n");
            }
            writeln!(out, "}}")
        }
        Decl::Hopf(h) => {
            let _ = writeln!(out, "hopf {} over {} {{", h.name, h.base.name);
            for g in h.generators() {
                let _ = writeln!(out, "  gen {} : deg={} {{", g.decl.name, g.decl.degree);
                let _ = writeln!(out, "    delta = {};", g.delta.display(2));
                let _ = writeln!(out, "    counit = {};", g.counit.display(0));
                let _ = writeln!(out, "    antipode = {};", g.antipode.display(1));
                let _ = writeln!(out, "  }}");
            }
            writeln!(out, "}}")
        }
        Decl::Series(s) => {
            print_series(out, "series", &s.fgl.name, &s.ring.name, s.fgl.series());
            Ok(())
        }
        Decl::HopfFgl(g) => {
            print_series(out, "hopffgl", &g.name, &g.hopf().name, g.series());
            Ok(())
        }
        Decl::Chain(c) => {
            let pairs: Vec<String> = c.pairs().iter().map(|(k, l)| format!("({k},{l})")).collect();
            let _ = writeln!(out, "chain {} {{", c.name);
            let _ = writeln!(out, "  pairs = {};", pairs.join(", "));
            if let Some(d) = c.dim {
                let _ = writeln!(out, "  dim = {d};");
            }
            writeln!(out, "}}")
        }
    };
}

fn print_series(out: &mut String, keyword: &str, name: &str, over: &str, s: &TruncatedSeries) {
    let vars = s.vars();
    let _ = writeln!(
        out,
        "{keyword} {name} over {over} vars {},{} trunc {} {{",
        vars[0],
        vars[1],
        s.cutoff()
    );
    for (md, c) in s.terms() {
        let _ = writeln!(out, "  [{},{}] = {};", md.0[0], md.0[1], c.display(s.arity()));
    }
    let _ = writeln!(out, "}}");
}
