use std::fmt::Write;

use super::ball::CosetBall;

/// Fill colours: members of `A` and the rest.
const IN_A: &str = "#f4a261";
const OUT_A: &str = "#a8dadc";

impl CosetBall {
    /// Graphviz rendering. Vertices are labelled by depth and coloured by
    /// membership in `A`; each undirected edge is drawn once with the label of
    /// the generator it was discovered with. `highlight` vertices get a bold
    /// outline.
    pub fn to_dot(&self, highlight: &[usize]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph coset_{}_r{} {{", self.group, self.radius);
        let _ = writeln!(out, "  node [shape=circle, style=filled, fontsize=10];");
        for (i, s) in self.states.iter().enumerate() {
            let fill = if s.is_affine() { IN_A } else { OUT_A };
            let pen = if highlight.contains(&i) { ", penwidth=3" } else { "" };
            let _ = writeln!(
                out,
                "  v{i} [label=\"{}\", fillcolor=\"{fill}\", tooltip=\"{}\"{pen}];",
                self.depth[i],
                s.to_record()
            );
        }
        for e in &self.edges {
            if e.src < e.dst || (e.src == e.dst && e.generator <= self.inverse_of[e.generator as usize]) {
                let _ = writeln!(
                    out,
                    "  v{} -- v{} [label=\"{}\"];",
                    e.src, e.dst, self.generators[e.generator as usize].name
                );
            }
        }
        out.push_str("}\n");
        out
    }
}
