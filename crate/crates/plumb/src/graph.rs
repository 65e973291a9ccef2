//! Decorated plumbing graphs: text format, validation, intersection matrix.
//!
//! A plumbing graph is a finite multigraph whose vertices carry a genus
//! `g_v >= 0`, a self-intersection `s_v`, and a positive rational area
//! `area_hat` measured in units of 2*pi (so every downstream identity is
//! exact). Self-loops are rejected at parse time; multi-edges are allowed
//! and kept with multiplicity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    pub self_int: i64,
    /// area / 2*pi, strictly positive
    pub area_hat: Rat,
}

/// Edges are stored as index pairs into `vertices`, in file order, with
/// endpoint order preserved so that render is the exact inverse of parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationItem {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ValidationReport {
    pub violations: Vec<ValidationItem>,
    pub warnings: Vec<ValidationItem>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl PlumbingGraph {
    pub fn new(vertices: Vec<Vertex>, edge_ids: &[(String, String)]) -> Result<PlumbingGraph> {
        let mut g = PlumbingGraph {
            vertices,
            edges: Vec::with_capacity(edge_ids.len()),
        };
        for i in 0..g.vertices.len() {
            if g.vertices[i].area_hat <= Rat::zero() {
                return Err(Error::Precondition(format!(
                    "vertex `{}` has non-positive area",
                    g.vertices[i].id
                )));
            }
            for j in 0..i {
                if g.vertices[i].id == g.vertices[j].id {
                    return Err(Error::Precondition(format!(
                        "duplicate vertex id `{}`",
                        g.vertices[i].id
                    )));
                }
            }
        }
        for (a, b) in edge_ids {
            let ia = g.index_of(a)?;
            let ib = g.index_of(b)?;
            if ia == ib {
                return Err(Error::Precondition(format!("self-loop at vertex `{a}`")));
            }
            g.edges.push((ia, ib));
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edges as index pairs, in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Number of edge endpoints at `v`, counted with multiplicity.
    pub fn valency_by_index(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn valency(&self, id: &str) -> Result<usize> {
        Ok(self.valency_by_index(self.index_of(id)?))
    }

    /// Incidences at vertex `v` as (edge index, endpoint slot) pairs,
    /// ordered by edge index then slot. This ordering defines the
    /// "lowest-indexed incidence" tie-break used by the split rule.
    pub fn incidences(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                out.push((e, 0));
            }
            if b == v {
                out.push((e, 1));
            }
        }
        out
    }

    /// Endpoint index of edge `e` at slot `slot` (0 or 1).
    pub fn endpoint(&self, e: usize, slot: usize) -> usize {
        let (a, b) = self.edges[e];
        if slot == 0 {
            a
        } else {
            b
        }
    }

    /// Q_ii = s_i, Q_ij = number of edges between i and j.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut q = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            q[i][i] = v.self_int;
        }
        for &(a, b) in &self.edges {
            q[a][b] += 1;
            q[b][a] += 1;
        }
        q
    }

    /// True iff the graph is connected and #edges = #vertices - 1
    /// (multi-edges counted with multiplicity, so a double edge fails).
    pub fn is_tree(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        if self.edges.len() != n - 1 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn validate(&self) -> ValidationReport {
        // structural invariants are enforced by construction, so a graph
        // value can only accrue warnings here
        let mut report = ValidationReport::default();
        for (i, v) in self.vertices.iter().enumerate() {
            if self.valency_by_index(i) == 0 {
                report.warnings.push(ValidationItem {
                    code: "isolated-vertex".into(),
                    message: format!("isolated vertex `{}`: model construction unavailable", v.id),
                });
            }
        }
        report
    }
}

// ---------------------------------------------------------------------------
// Text format
//
//   # comment
//   vertex <id> genus=<int> self=<int> area=<int|int/int>   (area optional, default 1)
//   edge <id> <id>
// ---------------------------------------------------------------------------

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut col = 0;
    for part in line.split_whitespace() {
        let start = line[col..].find(part).unwrap() + col;
        out.push(Tok {
            text: part,
            col: start + 1,
        });
        col = start + part.len();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<PlumbingGraph> {
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edge_ids: Vec<(String, String)> = Vec::new();

    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        };
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        match toks[0].text {
            "vertex" => {
                if toks.len() < 2 {
                    return Err(parse_err(lineno, toks[0].col, "vertex line needs an id"));
                }
                let id = toks[1].text.to_string();
                let mut genus: Option<i64> = None;
                let mut self_int: Option<i64> = None;
                let mut area: Option<Rat> = None;
                for t in &toks[2..] {
                    let (key, value) = t.text.split_once('=').ok_or_else(|| {
                        parse_err(lineno, t.col, format!("expected key=value, found `{}`", t.text))
                    })?;
                    match key {
                        "genus" => {
                            genus = Some(value.parse().map_err(|_| {
                                parse_err(lineno, t.col, format!("bad genus `{value}`"))
                            })?);
                        }
                        "self" => {
                            self_int = Some(value.parse().map_err(|_| {
                                parse_err(lineno, t.col, format!("bad self-intersection `{value}`"))
                            })?);
                        }
                        "area" => {
                            area = Some(value.parse().map_err(|_| {
                                parse_err(lineno, t.col, format!("bad area `{value}`"))
                            })?);
                        }
                        other => {
                            return Err(parse_err(
                                lineno,
                                t.col,
                                format!("unknown field `{other}`"),
                            ));
                        }
                    }
                }
                let genus = genus
                    .ok_or_else(|| parse_err(lineno, toks[0].col, "missing genus field"))?;
                let self_int = self_int
                    .ok_or_else(|| parse_err(lineno, toks[0].col, "missing self field"))?;
                if genus < 0 {
                    return Err(parse_err(lineno, toks[0].col, "negative genus"));
                }
                let area_hat = area.unwrap_or_else(Rat::one);
                if !area_hat.is_positive() {
                    return Err(parse_err(lineno, toks[0].col, "non-positive area"));
                }
                if vertices.iter().any(|v| v.id == id) {
                    return Err(parse_err(
                        lineno,
                        toks[1].col,
                        format!("duplicate vertex id `{id}`"),
                    ));
                }
                vertices.push(Vertex {
                    id,
                    genus: genus as u32,
                    self_int,
                    area_hat,
                });
            }
            "edge" => {
                if toks.len() != 3 {
                    return Err(parse_err(
                        lineno,
                        toks[0].col,
                        "edge line needs exactly two vertex ids",
                    ));
                }
                let a = toks[1].text;
                let b = toks[2].text;
                if !vertices.iter().any(|v| v.id == a) {
                    return Err(parse_err(
                        lineno,
                        toks[1].col,
                        format!("unknown endpoint `{a}`"),
                    ));
                }
                if !vertices.iter().any(|v| v.id == b) {
                    return Err(parse_err(
                        lineno,
                        toks[2].col,
                        format!("unknown endpoint `{b}`"),
                    ));
                }
                if a == b {
                    return Err(parse_err(
                        lineno,
                        toks[1].col,
                        format!("self-loop at vertex `{a}`"),
                    ));
                }
                edge_ids.push((a.to_string(), b.to_string()));
            }
            other => {
                return Err(parse_err(
                    lineno,
                    toks[0].col,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    PlumbingGraph::new(vertices, &edge_ids)
}

/// Canonical text form; `parse_graph(render_graph(g)) == g`.
pub fn render_graph(g: &PlumbingGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!(
            "vertex {} genus={} self={} area={}\n",
            v.id, v.genus, v.self_int, v.area_hat
        ));
    }
    for &(a, b) in g.edges() {
        out.push_str(&format!(
            "edge {} {}\n",
            g.vertices()[a].id,
            g.vertices()[b].id
        ));
    }
    out
}

// JSON mirror keeps edges as id pairs, which is stable under reordering of
// the internal index space.
#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String)>,
}

impl Serialize for PlumbingGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = GraphDoc {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (self.vertices[a].id.clone(), self.vertices[b].id.clone()))
                .collect(),
        };
        doc.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PlumbingGraph {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<PlumbingGraph, D::Error> {
        let doc = GraphDoc::deserialize(deserializer)?;
        PlumbingGraph::new(doc.vertices, &doc.edges).map_err(serde::de::Error::custom)
    }
}
