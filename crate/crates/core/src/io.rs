//! Canonical text formats: graph files, timeline exports and simulation
//! reports.
//!
//! Serialization is byte-stable: fixed key order, vertices ascending, edges
//! in canonical order, floats in shortest round-trip form. Parsing a
//! serialized graph reproduces the identical topology, and re-serializing
//! gives the identical bytes, so files are diffable.

use std::fmt::Write as _;

use crate::entangle::{StepPlan, Swap, Timeline};
use crate::error::{Error, Result};
use crate::graph::{AdjacencyView, Edge, VertexId};
use crate::label::Label;
use crate::ring::RingTopology;
use crate::sim::SimReport;
use crate::sphere::{SphereTopology, SphereVertex};
use crate::topo::Topology;

const GRAPH_MAGIC: &str = "vqlnet-graph v1";
const TIMELINE_MAGIC: &str = "vqlnet-timeline v1";
const SUMMARY_MAGIC: &str = "vqlnet-sim-summary v1";

pub fn serialize_graph(topo: &Topology) -> String {
    let mut out = String::new();
    writeln!(out, "{GRAPH_MAGIC}").unwrap();
    match topo {
        Topology::Ring(r) => {
            writeln!(out, "kind ring").unwrap();
            writeln!(out, "n {}", r.levels()).unwrap();
        }
        Topology::Sphere(s) => {
            writeln!(out, "kind sphere").unwrap();
            writeln!(out, "k {}", s.subdivisions()).unwrap();
            writeln!(out, "vertices {}", s.vertex_count()).unwrap();
            writeln!(out, "edges {}", s.edges().len()).unwrap();
            for v in s.vertices() {
                let parents = match v.parents {
                    Some((a, b)) => format!("{a},{b}"),
                    None => "-".to_string(),
                };
                writeln!(
                    out,
                    "vertex {} {} {} {} {} {} {}",
                    v.id,
                    v.layer,
                    parents,
                    v.coords[0],
                    v.coords[1],
                    v.coords[2],
                    s.label(v.id)
                )
                .unwrap();
            }
            for &(e, layer) in s.edges() {
                let (u, v) = e.endpoints();
                writeln!(out, "edge {u} {v} {layer}").unwrap();
            }
        }
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Topology> {
    let mut lines = Lines::new(text);
    lines.expect_line(GRAPH_MAGIC)?;
    let kind = lines.expect_key("kind")?;
    match kind.as_str() {
        "ring" => {
            let n: u32 = lines.parse_value("n")?;
            lines.expect_end()?;
            Ok(Topology::Ring(RingTopology::new(n)?))
        }
        "sphere" => {
            let k: u32 = lines.parse_value("k")?;
            let vertex_count: usize = lines.parse_value("vertices")?;
            let edge_count: usize = lines.parse_value("edges")?;
            let mut vertices = Vec::with_capacity(vertex_count);
            let mut labels: Vec<Label> = Vec::with_capacity(vertex_count);
            for _ in 0..vertex_count {
                let (vertex, label) = lines.parse_vertex()?;
                labels.push(label);
                vertices.push(vertex);
            }
            let mut edges = Vec::with_capacity(edge_count);
            for _ in 0..edge_count {
                edges.push(lines.parse_edge()?);
            }
            lines.expect_end()?;
            for (i, v) in vertices.iter().enumerate() {
                if v.id.index() != i {
                    return Err(lines.error(format!(
                        "vertex records out of order: expected {i}, found {}",
                        v.id
                    )));
                }
            }
            let topo = SphereTopology::from_parts(k, vertices, edges)?;
            // Labels are derived data; a file that disagrees with the
            // structure it carries is corrupt.
            for (i, parsed) in labels.iter().enumerate() {
                if parsed != topo.label(VertexId(i as u32)) {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!(
                            "stored label of vertex {i} does not match the graph structure"
                        ),
                    });
                }
            }
            Ok(Topology::Sphere(topo))
        }
        other => Err(lines.error(format!("unknown graph kind {other:?}"))),
    }
}

pub fn serialize_timeline(timeline: &Timeline) -> String {
    let mut out = String::new();
    writeln!(out, "{TIMELINE_MAGIC}").unwrap();
    writeln!(out, "steps {}", timeline.len()).unwrap();
    for (i, step) in timeline.steps.iter().enumerate() {
        writeln!(out, "step {i}").unwrap();
        for e in &step.creates {
            let (u, v) = e.endpoints();
            writeln!(out, "create {u}-{v}").unwrap();
        }
        for s in &step.swaps {
            let (lu, lv) = s.left.endpoints();
            let (ru, rv) = s.right.endpoints();
            writeln!(out, "swap {} {lu}-{lv} {ru}-{rv}", s.node).unwrap();
        }
    }
    out
}

pub fn parse_timeline(text: &str) -> Result<Timeline> {
    let mut lines = Lines::new(text);
    lines.expect_line(TIMELINE_MAGIC)?;
    let steps: usize = lines.parse_value("steps")?;
    let mut timeline = Timeline::default();
    for i in 0..steps {
        let header = lines.next_line()?;
        if header != format!("step {i}") {
            return Err(lines.error(format!("expected \"step {i}\", found {header:?}")));
        }
        let mut plan = StepPlan::default();
        while let Some(peeked) = lines.peek() {
            let mut parts = peeked.split_whitespace();
            match parts.next() {
                Some("create") => {
                    let e = parse_edge_token(parts.next().unwrap_or(""), &lines)?;
                    plan.creates.push(e);
                    lines.next_line()?;
                }
                Some("swap") => {
                    let node = parse_u32(parts.next().unwrap_or(""), &lines)?;
                    let left = parse_edge_token(parts.next().unwrap_or(""), &lines)?;
                    let right = parse_edge_token(parts.next().unwrap_or(""), &lines)?;
                    plan.swaps.push(Swap { node: VertexId(node), left, right });
                    lines.next_line()?;
                }
                _ => break,
            }
        }
        timeline.steps.push(plan);
    }
    lines.expect_end()?;
    Ok(timeline)
}

/// Per-sample records: `sample_index,pairs,collided,lowest_layer`, with an
/// empty last field when the sample had no collision.
pub fn render_report_csv(report: &SimReport) -> String {
    let mut out = String::from("sample_index,pairs,collided,lowest_layer\n");
    for (i, rec) in report.records.iter().enumerate() {
        let level = rec.lowest_level.map(|l| l.to_string()).unwrap_or_default();
        writeln!(out, "{i},{},{},{level}", report.pairs, rec.collided).unwrap();
    }
    out
}

/// Aggregate block written next to the CSV.
pub fn render_report_summary(report: &SimReport, topo: &Topology) -> String {
    let mut out = String::new();
    writeln!(out, "{SUMMARY_MAGIC}").unwrap();
    writeln!(out, "kind {}", topo.kind()).unwrap();
    match topo {
        Topology::Ring(r) => writeln!(out, "n {}", r.levels()).unwrap(),
        Topology::Sphere(s) => writeln!(out, "k {}", s.subdivisions()).unwrap(),
    }
    writeln!(out, "routing {}", report.routing.name()).unwrap();
    writeln!(out, "pairs {}", report.pairs).unwrap();
    writeln!(out, "samples {}", report.samples).unwrap();
    writeln!(out, "seed {}", report.seed).unwrap();
    writeln!(out, "collided_samples {}", report.collided_samples).unwrap();
    writeln!(out, "collision_fraction {}", report.collision_fraction).unwrap();
    for (level, count) in &report.level_histogram {
        writeln!(out, "layer {level} {count}").unwrap();
    }
    out
}

/// Parses `3-17` into an edge.
pub fn parse_edge_spec(token: &str) -> Result<Edge> {
    let (a, b) = token.split_once('-').ok_or_else(|| Error::Parse {
        line: 0,
        message: format!("edge spec {token:?} is not of the form u-v"),
    })?;
    let a: u32 = a.trim().parse().map_err(|_| Error::Parse {
        line: 0,
        message: format!("bad vertex id {a:?}"),
    })?;
    let b: u32 = b.trim().parse().map_err(|_| Error::Parse {
        line: 0,
        message: format!("bad vertex id {b:?}"),
    })?;
    if a == b {
        return Err(Error::Parse { line: 0, message: format!("edge {token:?} is a self-loop") });
    }
    Ok(Edge::new(VertexId(a), VertexId(b)))
}

struct Lines<'a> {
    iter: std::iter::Peekable<std::str::Lines<'a>>,
    line_no: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        Lines { iter: text.lines().peekable(), line_no: 0 }
    }

    fn error(&self, message: String) -> Error {
        Error::Parse { line: self.line_no, message }
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.iter.peek().copied()
    }

    fn next_line(&mut self) -> Result<&'a str> {
        self.line_no += 1;
        self.iter
            .next()
            .ok_or(Error::Parse { line: self.line_no, message: "unexpected end of file".into() })
    }

    fn expect_line(&mut self, want: &str) -> Result<()> {
        let got = self.next_line()?;
        if got != want {
            return Err(self.error(format!("expected {want:?}, found {got:?}")));
        }
        Ok(())
    }

    fn expect_key(&mut self, key: &str) -> Result<String> {
        let line = self.next_line()?;
        match line.split_once(' ') {
            Some((k, v)) if k == key => Ok(v.to_string()),
            _ => Err(self.error(format!("expected \"{key} <value>\", found {line:?}"))),
        }
    }

    fn parse_value<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let raw = self.expect_key(key)?;
        raw.parse().map_err(|_| self.error(format!("bad value {raw:?} for {key}")))
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.iter.next() {
            None => Ok(()),
            Some(line) => {
                self.line_no += 1;
                Err(self.error(format!("trailing content: {line:?}")))
            }
        }
    }

    fn parse_vertex(&mut self) -> Result<(SphereVertex, Label)> {
        let line = self.next_line()?;
        let mut parts = line.split(' ');
        if parts.next() != Some("vertex") {
            return Err(self.error(format!("expected a vertex record, found {line:?}")));
        }
        let id = VertexId(parse_u32(parts.next().unwrap_or(""), self)?);
        let layer = parse_u32(parts.next().unwrap_or(""), self)?;
        let parents_tok = parts.next().unwrap_or("");
        let parents = if parents_tok == "-" {
            None
        } else {
            let (a, b) = parents_tok.split_once(',').ok_or_else(|| {
                self.error(format!("bad parent pair {parents_tok:?}"))
            })?;
            Some((VertexId(parse_u32(a, self)?), VertexId(parse_u32(b, self)?)))
        };
        let mut coords = [0.0; 3];
        for c in &mut coords {
            let tok = parts.next().unwrap_or("");
            *c = tok
                .parse()
                .map_err(|_| self.error(format!("bad coordinate {tok:?}")))?;
        }
        let label_tok = parts.next().unwrap_or("");
        let label = parse_label_token(label_tok, self)?;
        if parts.next().is_some() {
            return Err(self.error(format!("trailing fields in vertex record {line:?}")));
        }
        Ok((SphereVertex { id, layer, parents, coords }, label))
    }

    fn parse_edge(&mut self) -> Result<(Edge, u32)> {
        let line = self.next_line()?;
        let mut parts = line.split(' ');
        if parts.next() != Some("edge") {
            return Err(self.error(format!("expected an edge record, found {line:?}")));
        }
        let u = parse_u32(parts.next().unwrap_or(""), self)?;
        let v = parse_u32(parts.next().unwrap_or(""), self)?;
        let layer = parse_u32(parts.next().unwrap_or(""), self)?;
        if u == v {
            return Err(self.error(format!("self-loop in edge record {line:?}")));
        }
        Ok((Edge::new(VertexId(u), VertexId(v)), layer))
    }
}

fn parse_u32(token: &str, lines: &Lines<'_>) -> Result<u32> {
    token.parse().map_err(|_| lines.error(format!("bad number {token:?}")))
}

fn parse_edge_token(token: &str, lines: &Lines<'_>) -> Result<Edge> {
    parse_edge_spec(token).map_err(|e| match e {
        Error::Parse { message, .. } => lines.error(message),
        other => other,
    })
}

fn parse_label_token(token: &str, lines: &Lines<'_>) -> Result<Label> {
    let mut entries = Vec::new();
    for part in token.split('>') {
        let inner = part
            .strip_prefix('{')
            .and_then(|p| p.strip_suffix('}'))
            .ok_or_else(|| lines.error(format!("bad label entry {part:?}")))?;
        let mut entry = Vec::new();
        for id in inner.split(',') {
            entry.push(VertexId(parse_u32(id, lines)?));
        }
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(lines.error(format!("empty label {token:?}")));
    }
    Ok(Label::from_entries(entries))
}
