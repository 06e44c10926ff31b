//! Clifford ZX diagrams as open multigraphs.
//!
//! Vertices are spiders (`Z`, `X`), Hadamard boxes (`H`) or boundary nodes
//! (`B`). Edges form a multiset: parallel edges are kept because every edge
//! is a potential fault location. Edge ids are positions in the edge list
//! and stay stable under [`ZXDiagram::split_edge`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::phase::Phase;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Z,
    X,
    H,
    B,
}

impl VertexKind {
    pub fn is_spider(self) -> bool {
        matches!(self, VertexKind::Z | VertexKind::X)
    }

    /// Swaps Z and X, leaves H and B alone.
    pub fn dual(self) -> Self {
        match self {
            VertexKind::Z => VertexKind::X,
            VertexKind::X => VertexKind::Z,
            k => k,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            VertexKind::Z => "Z",
            VertexKind::X => "X",
            VertexKind::H => "H",
            VertexKind::B => "B",
        }
    }
}

impl FromStr for VertexKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" => Ok(VertexKind::Z),
            "X" => Ok(VertexKind::X),
            "H" => Ok(VertexKind::H),
            "B" => Ok(VertexKind::B),
            _ => Err(Error::parse(0, format!("unknown vertex kind '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub kind: VertexKind,
    pub phase: Phase,
}

#[derive(Clone, Debug, Default)]
pub struct ZXDiagram {
    vertices: BTreeMap<VertexId, Vertex>,
    edges: Vec<(VertexId, VertexId)>,
    inputs: Vec<VertexId>,
    outputs: Vec<VertexId>,
    next_id: VertexId,
}

impl PartialEq for ZXDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.inputs == other.inputs
            && self.outputs == other.outputs
    }
}

impl Eq for ZXDiagram {}

/// A structural problem found by [`ZXDiagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    HadamardDegree { vertex: VertexId, degree: usize },
    BoundaryDegree { vertex: VertexId, degree: usize },
    NonZeroPhase { vertex: VertexId },
    SelfLoop { edge: EdgeId },
    DanglingEdge { edge: EdgeId },
    BoundaryNotListed { vertex: VertexId },
    ListedNotBoundary { vertex: VertexId },
    BoundaryListedTwice { vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HadamardDegree { vertex, degree } => {
                write!(f, "Hadamard degree ≠ 2 at vertex {vertex} (degree {degree})")
            }
            Violation::BoundaryDegree { vertex, degree } => {
                write!(f, "boundary degree ≠ 1 at vertex {vertex} (degree {degree})")
            }
            Violation::NonZeroPhase { vertex } => {
                write!(f, "H/B vertex {vertex} carries a non-zero phase")
            }
            Violation::SelfLoop { edge } => write!(f, "edge {edge} is a self-loop"),
            Violation::DanglingEdge { edge } => {
                write!(f, "edge {edge} references a missing vertex")
            }
            Violation::BoundaryNotListed { vertex } => {
                write!(f, "boundary vertex {vertex} is neither input nor output")
            }
            Violation::ListedNotBoundary { vertex } => {
                write!(f, "listed boundary {vertex} is not a B vertex")
            }
            Violation::BoundaryListedTwice { vertex } => {
                write!(f, "boundary vertex {vertex} is listed more than once")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::InvalidDiagram(msgs.join("; ")))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("pass");
        }
        writeln!(f, "fail")?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

impl ZXDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind, phase: Phase) -> VertexId {
        let id = self.next_id;
        self.next_id += 1;
        self.vertices.insert(id, Vertex { kind, phase });
        id
    }

    /// Inserts a vertex under a caller-chosen id, replacing nothing.
    pub fn add_vertex_with_id(&mut self, id: VertexId, kind: VertexKind, phase: Phase) -> Result<()> {
        if self.vertices.contains_key(&id) {
            return Err(Error::InvalidDiagram(format!("duplicate vertex id {id}")));
        }
        self.vertices.insert(id, Vertex { kind, phase });
        self.next_id = self.next_id.max(id + 1);
        Ok(())
    }

    pub fn add_spider(&mut self, kind: VertexKind, phase: Phase) -> VertexId {
        debug_assert!(kind.is_spider());
        self.add_vertex(kind, phase)
    }

    pub fn add_z(&mut self) -> VertexId {
        self.add_vertex(VertexKind::Z, Phase::ZERO)
    }

    pub fn add_x(&mut self) -> VertexId {
        self.add_vertex(VertexKind::X, Phase::ZERO)
    }

    pub fn add_input(&mut self) -> VertexId {
        let b = self.add_vertex(VertexKind::B, Phase::ZERO);
        self.inputs.push(b);
        b
    }

    pub fn add_output(&mut self) -> VertexId {
        let b = self.add_vertex(VertexKind::B, Phase::ZERO);
        self.outputs.push(b);
        b
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> EdgeId {
        self.edges.push((a, b));
        self.edges.len() - 1
    }

    pub fn set_inputs(&mut self, inputs: Vec<VertexId>) {
        self.inputs = inputs;
    }

    pub fn set_outputs(&mut self, outputs: Vec<VertexId>) {
        self.outputs = outputs;
    }

    pub fn set_phase(&mut self, v: VertexId, phase: Phase) {
        if let Some(vx) = self.vertices.get_mut(&v) {
            vx.phase = phase;
        }
    }

    pub fn add_to_phase(&mut self, v: VertexId, phase: Phase) {
        if let Some(vx) = self.vertices.get_mut(&v) {
            vx.phase = vx.phase + phase;
        }
    }

    /// Removes a vertex and every edge touching it. Edge ids after the
    /// removed edges shift down.
    pub fn remove_vertex(&mut self, v: VertexId) {
        self.vertices.remove(&v);
        self.edges.retain(|&(a, b)| a != v && b != v);
        self.inputs.retain(|&b| b != v);
        self.outputs.retain(|&b| b != v);
    }

    pub fn remove_edges(&mut self, mut ids: Vec<EdgeId>) {
        ids.sort_unstable();
        ids.dedup();
        for id in ids.into_iter().rev() {
            self.edges.remove(id);
        }
    }

    /// Replaces edge `e = (a, b)` by `a - v - b` for a fresh vertex `v`.
    /// Edge `e` becomes `(a, v)` and the new edge `(v, b)` is appended, so
    /// existing edge ids stay valid.
    pub fn split_edge(&mut self, e: EdgeId, kind: VertexKind, phase: Phase) -> Result<(VertexId, EdgeId)> {
        let (a, b) = *self.edges.get(e).ok_or(Error::UnknownEdge(e))?;
        let v = self.add_vertex(kind, phase);
        self.edges[e] = (a, v);
        let new_edge = self.add_edge(v, b);
        Ok((v, new_edge))
    }

    pub fn vertex(&self, v: VertexId) -> Option<&Vertex> {
        self.vertices.get(&v)
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.vertices[&v].kind
    }

    pub fn phase(&self, v: VertexId) -> Phase {
        self.vertices[&v].phase
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &Vertex)> {
        self.vertices.iter().map(|(&id, v)| (id, v))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(e).copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn inputs(&self) -> &[VertexId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VertexId] {
        &self.outputs
    }

    /// Inputs followed by outputs.
    pub fn boundary(&self) -> Vec<VertexId> {
        self.inputs.iter().chain(&self.outputs).copied().collect()
    }

    pub fn next_vertex_id(&self) -> VertexId {
        self.next_id
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// Incidence lists for every vertex, built in one pass.
    pub fn incidence(&self) -> HashMap<VertexId, Vec<EdgeId>> {
        let mut inc: HashMap<VertexId, Vec<EdgeId>> =
            self.vertices.keys().map(|&v| (v, Vec::new())).collect();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            inc.entry(a).or_default().push(i);
            if b != a {
                inc.entry(b).or_default().push(i);
            }
        }
        inc
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        self.incident_edges(v)
            .into_iter()
            .map(|e| self.other_end(e, v))
            .collect()
    }

    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| (a == u && b == v) || (a == v && b == u))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_input(&self, v: VertexId) -> bool {
        self.inputs.contains(&v)
    }

    pub fn is_output(&self, v: VertexId) -> bool {
        self.outputs.contains(&v)
    }

    pub fn is_input_edge(&self, e: EdgeId) -> bool {
        let (a, b) = self.edges[e];
        self.is_input(a) || self.is_input(b)
    }

    pub fn is_output_edge(&self, e: EdgeId) -> bool {
        let (a, b) = self.edges[e];
        self.is_output(a) || self.is_output(b)
    }

    pub fn is_boundary_edge(&self, e: EdgeId) -> bool {
        let (a, b) = self.edges[e];
        self.kind(a) == VertexKind::B || self.kind(b) == VertexKind::B
    }

    pub fn internal_edges(&self) -> Vec<EdgeId> {
        (0..self.edges.len())
            .filter(|&e| !self.is_boundary_edge(e))
            .collect()
    }

    /// The edge attached to a boundary vertex.
    pub fn boundary_edge(&self, b: VertexId) -> Option<EdgeId> {
        self.edges.iter().position(|&(x, y)| x == b || y == b)
    }

    pub fn max_spider_degree(&self) -> usize {
        let inc = self.incidence();
        self.vertices
            .iter()
            .filter(|(_, v)| v.kind.is_spider())
            .map(|(id, _)| inc[id].iter().map(|&e| if self.edges[e].0 == self.edges[e].1 { 2 } else { 1 }).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut degree: HashMap<VertexId, usize> = self.vertices.keys().map(|&v| (v, 0)).collect();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if !self.vertices.contains_key(&a) || !self.vertices.contains_key(&b) {
                violations.push(Violation::DanglingEdge { edge: i });
                continue;
            }
            if a == b {
                violations.push(Violation::SelfLoop { edge: i });
            }
            *degree.get_mut(&a).unwrap() += 1;
            *degree.get_mut(&b).unwrap() += 1;
        }
        for (&id, v) in &self.vertices {
            let d = degree[&id];
            match v.kind {
                VertexKind::H if d != 2 => {
                    violations.push(Violation::HadamardDegree { vertex: id, degree: d })
                }
                VertexKind::B if d != 1 => {
                    violations.push(Violation::BoundaryDegree { vertex: id, degree: d })
                }
                _ => {}
            }
            if matches!(v.kind, VertexKind::H | VertexKind::B) && !v.phase.is_zero() {
                violations.push(Violation::NonZeroPhase { vertex: id });
            }
        }
        let mut seen = BTreeSet::new();
        for &b in self.inputs.iter().chain(&self.outputs) {
            if !seen.insert(b) {
                violations.push(Violation::BoundaryListedTwice { vertex: b });
            }
            match self.vertices.get(&b) {
                Some(v) if v.kind == VertexKind::B => {}
                _ => violations.push(Violation::ListedNotBoundary { vertex: b }),
            }
        }
        for (&id, v) in &self.vertices {
            if v.kind == VertexKind::B && !seen.contains(&id) {
                violations.push(Violation::BoundaryNotListed { vertex: id });
            }
        }
        ValidationReport { violations }
    }

    /// Sequential composition: `self` first, then `next`. Outputs of `self`
    /// are plugged into the inputs of `next` in order.
    pub fn compose(&self, next: &ZXDiagram) -> Result<ZXDiagram> {
        if self.outputs.len() != next.inputs.len() {
            return Err(Error::ArityMismatch(format!(
                "composing {} outputs with {} inputs",
                self.outputs.len(),
                next.inputs.len()
            )));
        }
        let mut out = self.clone();
        let offset = out.next_id;
        let remap = |v: VertexId| v + offset;
        for (&id, v) in &next.vertices {
            out.vertices.insert(remap(id), *v);
        }
        out.next_id = offset + next.next_id;
        for &(a, b) in &next.edges {
            out.edges.push((remap(a), remap(b)));
        }
        let joins: Vec<(VertexId, VertexId)> = self
            .outputs
            .iter()
            .zip(&next.inputs)
            .map(|(&o, &i)| (o, remap(i)))
            .collect();
        out.outputs = next.outputs.iter().map(|&v| remap(v)).collect();
        for (o, i) in joins {
            out.fuse_boundaries(o, i)?;
        }
        Ok(out)
    }

    /// Joins two boundary vertices: their neighbours become adjacent and
    /// the two B vertices disappear.
    fn fuse_boundaries(&mut self, p: VertexId, q: VertexId) -> Result<()> {
        let ep = self
            .boundary_edge(p)
            .ok_or_else(|| Error::InvalidDiagram(format!("boundary {p} has no edge")))?;
        let eq = self
            .boundary_edge(q)
            .ok_or_else(|| Error::InvalidDiagram(format!("boundary {q} has no edge")))?;
        if ep == eq {
            return Err(Error::InvalidDiagram("cannot join the two ends of one wire".into()));
        }
        let x = self.other_end(ep, p);
        let y = self.other_end(eq, q);
        // Reuse ep for the joined edge so its id survives.
        self.edges[ep] = (x, y);
        self.edges.remove(eq);
        self.vertices.remove(&p);
        self.vertices.remove(&q);
        self.inputs.retain(|&b| b != p && b != q);
        self.outputs.retain(|&b| b != p && b != q);
        Ok(())
    }

    /// Parallel composition.
    pub fn tensor(&self, other: &ZXDiagram) -> ZXDiagram {
        let mut out = self.clone();
        let offset = out.next_id;
        for (&id, v) in &other.vertices {
            out.vertices.insert(id + offset, *v);
        }
        for &(a, b) in &other.edges {
            out.edges.push((a + offset, b + offset));
        }
        out.inputs.extend(other.inputs.iter().map(|&v| v + offset));
        out.outputs.extend(other.outputs.iter().map(|&v| v + offset));
        out.next_id = offset + other.next_id;
        out
    }

    /// Identity on `n` wires.
    pub fn identity(n: usize) -> ZXDiagram {
        let mut d = ZXDiagram::new();
        let ins: Vec<_> = (0..n).map(|_| d.add_input()).collect();
        let outs: Vec<_> = (0..n).map(|_| d.add_output()).collect();
        for (i, o) in ins.into_iter().zip(outs) {
            d.add_edge(i, o);
        }
        d
    }

    /// Colour-swapped copy (Z <-> X), which is the same diagram conjugated
    /// by Hadamards on every boundary.
    pub fn dual(&self) -> ZXDiagram {
        let mut out = self.clone();
        for v in out.vertices.values_mut() {
            v.kind = v.kind.dual();
        }
        out
    }

    /// Replaces a fragment of `self` by `replacement`.
    ///
    /// `occurrence.interior` lists the host vertices that are deleted.
    /// `occurrence.legs[i]` describes where boundary `i` of the
    /// replacement (inputs then outputs) attaches: the host edge that
    /// crossed the fragment boundary and the outside endpoint that is kept.
    pub fn substitute(&self, occurrence: &Occurrence, replacement: &ZXDiagram) -> Result<Substitution> {
        let rb = replacement.boundary();
        if rb.len() != occurrence.legs.len() {
            return Err(Error::Substitution(format!(
                "replacement has {} boundary legs, occurrence has {}",
                rb.len(),
                occurrence.legs.len()
            )));
        }
        let interior: BTreeSet<VertexId> = occurrence.interior.iter().copied().collect();
        for &v in &interior {
            if !self.contains_vertex(v) {
                return Err(Error::Substitution(format!("interior vertex {v} missing")));
            }
            if self.kind(v) == VertexKind::B {
                return Err(Error::Substitution(format!("interior vertex {v} is a boundary")));
            }
        }
        // Every edge touching the interior must be either fully interior or
        // one of the declared legs.
        let mut leg_edges = BTreeSet::new();
        for leg in &occurrence.legs {
            let (a, b) = self
                .edge(leg.edge)
                .ok_or(Error::Substitution(format!("unknown leg edge {}", leg.edge)))?;
            if a != leg.outside && b != leg.outside {
                return Err(Error::Substitution(format!(
                    "leg edge {} does not touch vertex {}",
                    leg.edge, leg.outside
                )));
            }
            if interior.contains(&leg.outside) {
                return Err(Error::Substitution(format!(
                    "outside endpoint {} lies in the interior",
                    leg.outside
                )));
            }
            leg_edges.insert(leg.edge);
        }
        // A leg edge may be claimed twice when the fragment is a bare wire.
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let touches = interior.contains(&a) || interior.contains(&b);
            let inside = interior.contains(&a) && interior.contains(&b);
            if touches && !inside && !leg_edges.contains(&i) {
                return Err(Error::Substitution(format!(
                    "edge {i} leaves the fragment but is not a declared leg (dangling)"
                )));
            }
        }

        let mut out = self.clone();
        let mut drop: Vec<EdgeId> = (0..out.edges.len())
            .filter(|&i| {
                let (a, b) = out.edges[i];
                interior.contains(&a) || interior.contains(&b) || leg_edges.contains(&i)
            })
            .collect();
        drop.sort_unstable();
        for &v in &interior {
            out.vertices.remove(&v);
        }
        out.remove_edges(drop);

        let mut vertex_map = BTreeMap::new();
        for (&id, v) in &replacement.vertices {
            if v.kind != VertexKind::B {
                let nid = out.add_vertex(v.kind, v.phase);
                vertex_map.insert(id, nid);
            }
        }
        let leg_of: HashMap<VertexId, usize> = rb.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut new_edges = Vec::new();
        let mut wired = BTreeSet::new();
        for (ri, &(a, b)) in replacement.edges.iter().enumerate() {
            let end = |v: VertexId| -> VertexId {
                match leg_of.get(&v) {
                    Some(&i) => occurrence.legs[i].outside,
                    None => vertex_map[&v],
                }
            };
            let (x, y) = (end(a), end(b));
            if x == y {
                return Err(Error::Substitution(format!(
                    "replacement edge {ri} would become a self-loop on {x}"
                )));
            }
            if leg_of.contains_key(&a) {
                wired.insert(a);
            }
            if leg_of.contains_key(&b) {
                wired.insert(b);
            }
            new_edges.push(out.add_edge(x, y));
        }
        if wired.len() != rb.len() {
            return Err(Error::Substitution("replacement boundary without an edge".into()));
        }
        Ok(Substitution {
            diagram: out,
            vertex_map,
            new_edges,
        })
    }

    /// Boundary-respecting isomorphism test: inputs and outputs are matched
    /// in order, everything else up to relabelling. Exponential in the worst
    /// case; meant for small diagrams.
    pub fn is_isomorphic(&self, other: &ZXDiagram) -> bool {
        if self.num_vertices() != other.num_vertices()
            || self.num_edges() != other.num_edges()
            || self.inputs.len() != other.inputs.len()
            || self.outputs.len() != other.outputs.len()
        {
            return false;
        }
        let mut map: HashMap<VertexId, VertexId> = HashMap::new();
        for (a, b) in self.boundary().into_iter().zip(other.boundary()) {
            map.insert(a, b);
        }
        let order: Vec<VertexId> = self
            .vertex_ids()
            .filter(|v| !map.contains_key(v))
            .collect();
        let sm = self.multiplicities();
        let om = other.multiplicities();
        let sdeg: HashMap<_, _> = self.vertex_ids().map(|v| (v, self.degree(v))).collect();
        let odeg: HashMap<_, _> = other.vertex_ids().map(|v| (v, other.degree(v))).collect();
        let used: BTreeSet<VertexId> = map.values().copied().collect();
        iso_extend(self, other, &order, 0, &mut map, used, &sm, &om, &sdeg, &odeg)
    }

    fn multiplicities(&self) -> HashMap<(VertexId, VertexId), usize> {
        let mut m = HashMap::new();
        for &(a, b) in &self.edges {
            let key = if a <= b { (a, b) } else { (b, a) };
            *m.entry(key).or_insert(0) += 1;
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (&id, v) in &self.vertices {
            let _ = writeln!(s, "node {} {} {}", id, v.kind.as_str(), v.phase);
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "edge {a} {b}");
        }
        let join = |vs: &[VertexId]| vs.iter().map(|v| format!(" {v}")).collect::<String>();
        let _ = writeln!(s, "in{}", join(&self.inputs));
        let _ = writeln!(s, "out{}", join(&self.outputs));
        s
    }

    pub fn from_text(text: &str) -> Result<ZXDiagram> {
        let mut d = ZXDiagram::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let ln = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap();
            let rest: Vec<&str> = parts.collect();
            let num = |s: &str| -> Result<usize> {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(ln, format!("expected a vertex id, got '{s}'")))
            };
            match head {
                "node" => {
                    if rest.len() != 3 {
                        return Err(Error::parse(ln, "expected: node <id> <Z|X|H|B> <quarter_turns>"));
                    }
                    let id = num(rest[0])?;
                    let kind: VertexKind = rest[1].parse().map_err(|_| {
                        Error::parse(ln, format!("unknown vertex kind '{}'", rest[1]))
                    })?;
                    let qt: i64 = rest[2]
                        .parse()
                        .map_err(|_| Error::parse(ln, format!("bad phase '{}'", rest[2])))?;
                    d.add_vertex_with_id(id, kind, Phase::new(qt))
                        .map_err(|_| Error::parse(ln, format!("duplicate vertex id {id}")))?;
                }
                "edge" => {
                    if rest.len() != 2 {
                        return Err(Error::parse(ln, "expected: edge <id> <id>"));
                    }
                    edges.push((ln, num(rest[0])?, num(rest[1])?));
                }
                "in" => {
                    for r in rest {
                        d.inputs.push(num(r)?);
                    }
                }
                "out" => {
                    for r in rest {
                        d.outputs.push(num(r)?);
                    }
                }
                other => return Err(Error::parse(ln, format!("unknown record '{other}'"))),
            }
        }
        for (ln, a, b) in edges {
            for v in [a, b] {
                if !d.contains_vertex(v) {
                    return Err(Error::parse(ln, format!("edge references unknown vertex {v}")));
                }
            }
            d.add_edge(a, b);
        }
        Ok(d)
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_extend(
    a: &ZXDiagram,
    b: &ZXDiagram,
    order: &[VertexId],
    idx: usize,
    map: &mut HashMap<VertexId, VertexId>,
    used: BTreeSet<VertexId>,
    am: &HashMap<(VertexId, VertexId), usize>,
    bm: &HashMap<(VertexId, VertexId), usize>,
    adeg: &HashMap<VertexId, usize>,
    bdeg: &HashMap<VertexId, usize>,
) -> bool {
    let key = |x: VertexId, y: VertexId| if x <= y { (x, y) } else { (y, x) };
    if idx == order.len() {
        // all edges consistent?
        return am.iter().all(|(&(x, y), &m)| {
            bm.get(&key(map[&x], map[&y])).copied().unwrap_or(0) == m
        });
    }
    let v = order[idx];
    let vx = a.vertex(v).unwrap();
    for (w, wx) in b.vertices() {
        if used.contains(&w) || wx != vx || adeg[&v] != bdeg[&w] {
            continue;
        }
        // consistency with already-mapped vertices
        let ok = map.iter().all(|(&x, &y)| {
            am.get(&key(v, x)).copied().unwrap_or(0) == bm.get(&key(w, y)).copied().unwrap_or(0)
        }) && am.get(&key(v, v)).copied().unwrap_or(0) == bm.get(&key(w, w)).copied().unwrap_or(0);
        if !ok {
            continue;
        }
        map.insert(v, w);
        let mut u2 = used.clone();
        u2.insert(w);
        if iso_extend(a, b, order, idx + 1, map, u2, am, bm, adeg, bdeg) {
            return true;
        }
        map.remove(&v);
    }
    false
}

impl fmt::Display for ZXDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ZXDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ZXDiagram::from_text(s)
    }
}

/// Where one boundary leg of a replacement attaches in the host.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Leg {
    pub edge: EdgeId,
    pub outside: VertexId,
}

/// A fragment of a host diagram selected for replacement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub interior: Vec<VertexId>,
    pub legs: Vec<Leg>,
}

#[derive(Clone, Debug)]
pub struct Substitution {
    pub diagram: ZXDiagram,
    /// Replacement vertex id -> id in the new host.
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    /// Host ids of the edges contributed by the replacement, in the
    /// replacement's edge order.
    pub new_edges: Vec<EdgeId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_diagram_is_valid() {
        assert!(ZXDiagram::new().validate().is_ok());
    }

    #[test]
    fn lone_boundary_fails_degree_rule() {
        let mut d = ZXDiagram::new();
        d.add_input();
        let r = d.validate();
        assert!(matches!(r.violations[..], [Violation::BoundaryDegree { degree: 0, .. }]));
        assert!(r.to_string().contains("boundary degree ≠ 1"));
    }

    #[test]
    fn three_legged_hadamard_fails() {
        let mut d = ZXDiagram::new();
        let h = d.add_vertex(VertexKind::H, Phase::ZERO);
        for _ in 0..3 {
            let z = d.add_z();
            d.add_edge(h, z);
        }
        let r = d.validate();
        assert!(r.violations.contains(&Violation::HadamardDegree { vertex: h, degree: 3 }));
        assert!(r.to_string().contains("Hadamard degree ≠ 2"));
    }

    #[test]
    fn self_loop_rejected() {
        let mut d = ZXDiagram::new();
        let z = d.add_z();
        d.add_edge(z, z);
        assert!(d.validate().violations.contains(&Violation::SelfLoop { edge: 0 }));
    }

    #[test]
    fn text_round_trip() {
        let text = "node 0 B 0\nnode 1 Z 1\nnode 2 X 2\nnode 3 B 0\nedge 0 1\nedge 1 2\nedge 1 2\nedge 2 3\nin 0\nout 3\n";
        let d = ZXDiagram::from_text(text).unwrap();
        assert_eq!(d.to_text(), text);
        assert!(d.validate().is_ok());
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# a wire\n\nnode 0 B 0\nnode 1 B 0\nedge 0 1\nin 0\nout 1\n";
        let d = ZXDiagram::from_text(text).unwrap();
        assert_eq!(d.num_edges(), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = ZXDiagram::from_text("node 0 B 0\nedge 0 7\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = ZXDiagram::from_text("node 0 Q 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn compose_wires() {
        let a = ZXDiagram::identity(2);
        let c = a.compose(&a).unwrap();
        assert!(c.validate().is_ok());
        assert_eq!(c.num_edges(), 2);
        assert_eq!(c.inputs().len(), 2);
    }

    #[test]
    fn split_edge_keeps_ids() {
        let mut d = ZXDiagram::identity(1);
        let (v, e2) = d.split_edge(0, VertexKind::Z, Phase::PI).unwrap();
        assert_eq!(d.edge(0).unwrap().1, v);
        assert_eq!(d.edge(e2).unwrap().0, v);
        assert!(d.validate().is_ok());
    }

    #[test]
    fn self_substitution_is_isomorphic() {
        // in - Z - out with a Z leaf
        let mut d = ZXDiagram::new();
        let i = d.add_input();
        let z = d.add_z();
        let leaf = d.add_x();
        let o = d.add_output();
        let e0 = d.add_edge(i, z);
        d.add_edge(z, leaf);
        let e2 = d.add_edge(z, o);

        let mut frag = ZXDiagram::new();
        let fi = frag.add_input();
        let fz = frag.add_z();
        let fl = frag.add_x();
        let fo = frag.add_output();
        frag.add_edge(fi, fz);
        frag.add_edge(fz, fl);
        frag.add_edge(fz, fo);

        let occ = Occurrence {
            interior: vec![z, leaf],
            legs: vec![Leg { edge: e0, outside: i }, Leg { edge: e2, outside: o }],
        };
        let s = d.substitute(&occ, &frag).unwrap();
        assert!(s.diagram.is_isomorphic(&d));
    }

    #[test]
    fn substitution_rejects_dangling_edges() {
        let mut d = ZXDiagram::new();
        let i = d.add_input();
        let z = d.add_z();
        let o = d.add_output();
        let e0 = d.add_edge(i, z);
        d.add_edge(z, o);
        let frag = ZXDiagram::identity(1);
        let occ = Occurrence {
            interior: vec![z],
            legs: vec![Leg { edge: e0, outside: i }],
        };
        assert!(d.substitute(&occ, &frag).is_err());
    }
}
