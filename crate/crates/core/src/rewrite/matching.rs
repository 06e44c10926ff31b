//! Finding rule left sides inside a host diagram.
//!
//! Matches are induced and degree-exact: every pattern spider maps to a
//! host vertex of the same kind, phase and degree, edge multiplicities
//! between matched vertices agree, and each pattern boundary leg takes a
//! distinct host edge leaving the matched fragment.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::diagram::{EdgeId, Leg, Occurrence, VertexId, VertexKind, ZXDiagram};
use crate::error::{Error, Result};

use super::rules::RewriteRule;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    /// Pattern vertex -> host vertex, for non-boundary pattern vertices.
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub occurrence: Occurrence,
}

fn multiplicity(d: &ZXDiagram, a: VertexId, b: VertexId) -> usize {
    d.edges_between(a, b).len()
}

/// All embeddings of `pattern` into `host`, in a deterministic order.
pub fn find_pattern(host: &ZXDiagram, pattern: &ZXDiagram) -> Vec<Embedding> {
    let boundary = pattern.boundary();
    let inner: Vec<VertexId> = pattern
        .vertex_ids()
        .filter(|&v| pattern.kind(v) != VertexKind::B)
        .collect();
    if inner.is_empty() {
        return bare_wire_matches(host, pattern);
    }
    let mut out = Vec::new();
    let mut map = BTreeMap::new();
    extend(host, pattern, &inner, 0, &mut map, &mut BTreeSet::new(), &mut |m| {
        assign_legs(host, pattern, &boundary, m, &mut out);
    });
    out
}

/// A pattern with no spiders is a bare wire; it matches each host edge
/// once, in stored orientation.
fn bare_wire_matches(host: &ZXDiagram, pattern: &ZXDiagram) -> Vec<Embedding> {
    if pattern.boundary().len() != 2 || pattern.num_edges() != 1 {
        return Vec::new();
    }
    host.edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| Embedding {
            vertices: BTreeMap::new(),
            occurrence: Occurrence {
                interior: Vec::new(),
                legs: vec![Leg { edge: e, outside: a }, Leg { edge: e, outside: b }],
            },
        })
        .collect()
}

fn extend(
    host: &ZXDiagram,
    pattern: &ZXDiagram,
    order: &[VertexId],
    idx: usize,
    map: &mut BTreeMap<VertexId, VertexId>,
    used: &mut BTreeSet<VertexId>,
    emit: &mut dyn FnMut(&BTreeMap<VertexId, VertexId>),
) {
    if idx == order.len() {
        emit(map);
        return;
    }
    let p = order[idx];
    let pv = pattern.vertex(p).unwrap();
    let pdeg = pattern.degree(p);
    for (h, hv) in host.vertices() {
        if used.contains(&h) || hv != pv || host.degree(h) != pdeg {
            continue;
        }
        let consistent = map
            .iter()
            .all(|(&q, &hq)| multiplicity(pattern, p, q) == multiplicity(host, h, hq));
        if !consistent {
            continue;
        }
        map.insert(p, h);
        used.insert(h);
        extend(host, pattern, order, idx + 1, map, used, emit);
        used.remove(&h);
        map.remove(&p);
    }
}

fn assign_legs(
    host: &ZXDiagram,
    pattern: &ZXDiagram,
    boundary: &[VertexId],
    map: &BTreeMap<VertexId, VertexId>,
    out: &mut Vec<Embedding>,
) {
    let image: BTreeSet<VertexId> = map.values().copied().collect();
    // pattern vertex each boundary leg hangs off
    let anchor: Vec<VertexId> = boundary
        .iter()
        .map(|&b| {
            let e = pattern.boundary_edge(b).unwrap();
            pattern.other_end(e, b)
        })
        .collect();
    // boundary legs directly joined (bare wires inside a pattern) are not
    // supported together with spiders
    if anchor.iter().any(|a| !map.contains_key(a)) {
        return;
    }
    let mut free: HashMap<VertexId, Vec<(EdgeId, VertexId)>> = HashMap::new();
    for &h in map.values() {
        let legs: Vec<(EdgeId, VertexId)> = host
            .incident_edges(h)
            .into_iter()
            .map(|e| (e, host.other_end(e, h)))
            .filter(|&(_, o)| !image.contains(&o))
            .collect();
        free.insert(h, legs);
    }
    let mut chosen: Vec<Leg> = Vec::with_capacity(boundary.len());
    let mut taken = BTreeSet::new();
    fn rec(
        i: usize,
        anchor: &[VertexId],
        map: &BTreeMap<VertexId, VertexId>,
        free: &HashMap<VertexId, Vec<(EdgeId, VertexId)>>,
        chosen: &mut Vec<Leg>,
        taken: &mut BTreeSet<EdgeId>,
        emit: &mut dyn FnMut(&[Leg]),
    ) {
        if i == anchor.len() {
            emit(chosen);
            return;
        }
        let h = map[&anchor[i]];
        for &(e, o) in &free[&h] {
            if taken.contains(&e) {
                continue;
            }
            taken.insert(e);
            chosen.push(Leg { edge: e, outside: o });
            rec(i + 1, anchor, map, free, chosen, taken, emit);
            chosen.pop();
            taken.remove(&e);
        }
    }
    rec(0, &anchor, map, &free, &mut chosen, &mut taken, &mut |legs| {
        out.push(Embedding {
            vertices: map.clone(),
            occurrence: Occurrence {
                interior: map.values().copied().collect(),
                legs: legs.to_vec(),
            },
        });
    });
}

pub fn find_matches(host: &ZXDiagram, r: &RewriteRule) -> Vec<Embedding> {
    find_pattern(host, &r.lhs)
}

/// Checks that an embedding still describes `host`.
pub fn check_embedding(host: &ZXDiagram, pattern: &ZXDiagram, emb: &Embedding) -> Result<()> {
    for (&p, &h) in &emb.vertices {
        let (Some(pv), Some(hv)) = (pattern.vertex(p), host.vertex(h)) else {
            return Err(Error::StaleEmbedding(format!("vertex {h} missing")));
        };
        if pv != hv || pattern.degree(p) != host.degree(h) {
            return Err(Error::StaleEmbedding(format!("vertex {h} changed")));
        }
    }
    for leg in &emb.occurrence.legs {
        match host.edge(leg.edge) {
            Some((a, b)) if a == leg.outside || b == leg.outside => {}
            _ => return Err(Error::StaleEmbedding(format!("edge {} changed", leg.edge))),
        }
    }
    Ok(())
}

/// Replaces the matched left side with the right side.
pub fn apply(host: &ZXDiagram, r: &RewriteRule, emb: &Embedding) -> Result<ZXDiagram> {
    check_embedding(host, &r.lhs, emb)?;
    Ok(host.substitute(&emb.occurrence, &r.rhs)?.diagram)
}
