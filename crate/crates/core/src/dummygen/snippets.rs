use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{DummyShape, DummySpec};
use crate::opaque::{Algorithm, Atom, PredicateGroup};

const R: &str = include_str!("templates/R.java");
const S: &str = include_str!("templates/S.java");
const X: &str = include_str!("templates/X.java");
const Y: &str = include_str!("templates/Y.java");
const Z: &str = include_str!("templates/Z.java");
const NODE: &str = include_str!("templates/Node.java");

const MOVERS: &str = "\
private Node g, h, p, q;
private Thread t, s;

// constructor
g = new Node();
g.token = true;
h = new Node();
h.token = true;
p = g.addNode();
q = h.addNode();
t = new Thread(this);
s = new Thread(this);
t.start();
s.start();

public void run() {
    while (true) {
        Thread ct = Thread.currentThread();
        if (ct == t) {
            p = p.MoveNext();
        } else if (ct == s) {
            q = q.MoveBack();
        }
        try {
            if (ct == t) {
                Thread.sleep(12000);
            } else if (ct == s) {
                Thread.sleep(4000);
            }
        } catch (InterruptedException ie) {}
    }
}
";

/// The template for `shape`, method name as in the listing.
pub fn template(shape: DummyShape) -> &'static str {
    match shape {
        DummyShape::R => R,
        DummyShape::S => S,
        DummyShape::X => X,
        DummyShape::Y => Y,
        DummyShape::Z => Z,
    }
}

/// Text artifacts for wiring a dummy into a source file by hand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnippetBundle {
    pub dummy: String,
    pub node: String,
    pub movers: String,
    pub guard: String,
}

impl SnippetBundle {
    pub fn files(&self) -> [(&'static str, &str); 4] {
        [
            ("dummy.java.txt", &self.dummy),
            ("Node.java", &self.node),
            ("movers.java.txt", &self.movers),
            ("guard.java.txt", &self.guard),
        ]
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for (name, text) in self.files() {
            let path = dir.join(name);
            std::fs::write(&path, text)?;
            out.push(path);
        }
        Ok(out)
    }
}

/// Guard statement around `name(10)` for `group`. Members become locals
/// `b1..bn` (Algorithm I) or `p1..pn` (Algorithm II, with the enforcement
/// line after the assignments).
pub fn guard_source(group: &PredicateGroup, name: &str) -> String {
    let var = if group.algorithm() == Some(Algorithm::II) { "p" } else { "b" };
    let vars: Vec<String> = (1..=group.members().len()).map(|i| format!("{var}{i}")).collect();
    let mut s = format!("boolean {};\n", vars.join(", "));
    for (v, m) in vars.iter().zip(group.members()) {
        s.push_str(&format!("{v} = {};\n", Atom::java(m)));
    }
    if group.algorithm() == Some(Algorithm::II) {
        s.push_str("if (p1) p2 = false;\n");
    }
    let op = match group.op() {
        crate::opaque::GroupOp::And => " && ",
        crate::opaque::GroupOp::Or => " || ",
    };
    s.push_str(&format!("if ({}) {{\n    {name}(10);\n}}\n", vars.join(op)));
    s
}

/// Source-level artifacts for `spec`: the dummy body (renamed to
/// `spec.name`), the Node class, the mover threads and the guard.
pub fn emit_source_snippets(spec: &DummySpec, algorithm: Algorithm) -> SnippetBundle {
    let t = template(spec.shape);
    let header = format!("private void {}(int k)", spec.shape.letter());
    let dummy = t.replacen(&header, &format!("private void {}(int k)", spec.name), 1);
    SnippetBundle {
        dummy,
        node: NODE.to_string(),
        movers: MOVERS.to_string(),
        guard: guard_source(&PredicateGroup::listing(algorithm), &spec.name),
    }
}
