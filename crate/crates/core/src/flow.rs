//! Measurement-circuit flow.
//!
//! A flow is a set of edge-disjoint directed paths plus a partial order
//! on vertices. The order is stored as the relations the path conditions
//! force (see [`MCFlow::from_paths`]); `x <= y` is reachability.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use crate::circuit::{Basis, Circuit, Clifford1, Op};
use crate::diagram::{EdgeId, Leg, Occurrence, VertexId, VertexKind, ZXDiagram};
use crate::error::{Error, Result};
use crate::rewrite::{fuse, four, five, n_legged, n_plus, RewriteRule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCFlow {
    pub paths: Vec<Vec<VertexId>>,
    /// Generating pairs `(x, y)` meaning `x <= y`.
    pub order: Vec<(VertexId, VertexId)>,
}

fn edge_between(d: &ZXDiagram, a: VertexId, b: VertexId) -> Result<EdgeId> {
    match d.edges_between(a, b).as_slice() {
        [e] => Ok(*e),
        [] => Err(Error::Flow(format!("path step {a} -> {b} is not an edge"))),
        _ => Err(Error::Flow(format!("path step {a} -> {b} crosses parallel edges"))),
    }
}

fn path_edges(d: &ZXDiagram, path: &[VertexId]) -> Result<Vec<EdgeId>> {
    path.windows(2).map(|w| edge_between(d, w[0], w[1])).collect()
}

impl MCFlow {
    /// The least order making the paths satisfy O1 and O2: `x <= y` for
    /// each step `x -> y`, and `x <= z` for each other neighbour `z` of `y`
    /// that does not itself step into `y`.
    pub fn from_paths(d: &ZXDiagram, paths: Vec<Vec<VertexId>>) -> Result<MCFlow> {
        let steps: HashSet<(VertexId, VertexId)> = paths.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1]))).collect();
        let mut order = BTreeSet::new();
        for p in &paths {
            path_edges(d, p)?;
            for w in p.windows(2) {
                let (x, y) = (w[0], w[1]);
                order.insert((x, y));
                for z in d.neighbours(y) {
                    if z != x && !steps.contains(&(z, y)) {
                        order.insert((x, z));
                    }
                }
            }
        }
        let flow = MCFlow {
            paths,
            order: order.into_iter().collect(),
        };
        if let Some(v) = flow.cycle_vertex() {
            return Err(Error::Flow(format!("path conditions force a cycle through vertex {v}")));
        }
        Ok(flow)
    }

    fn successors(&self) -> HashMap<VertexId, Vec<VertexId>> {
        let mut succ: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for &(a, b) in &self.order {
            if a != b {
                succ.entry(a).or_default().push(b);
            }
        }
        succ
    }

    /// Some vertex on a cycle of the order relation, if there is one.
    pub fn cycle_vertex(&self) -> Option<VertexId> {
        let succ = self.successors();
        let mut indeg: BTreeMap<VertexId, usize> = BTreeMap::new();
        for &(a, b) in &self.order {
            if a != b {
                indeg.entry(a).or_default();
                *indeg.entry(b).or_default() += 1;
            }
        }
        let mut queue: VecDeque<VertexId> = indeg.iter().filter(|(_, &k)| k == 0).map(|(&v, _)| v).collect();
        while let Some(v) = queue.pop_front() {
            for &w in succ.get(&v).into_iter().flatten() {
                let k = indeg.get_mut(&w).unwrap();
                *k -= 1;
                if *k == 0 {
                    queue.push_back(w);
                }
            }
            indeg.remove(&v);
        }
        indeg.into_keys().next()
    }

    pub fn leq(&self, a: VertexId, b: VertexId) -> bool {
        Reach::new(self).leq(a, b)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.paths {
            let vs: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "path {}", vs.join(" "));
        }
        s
    }
}

/// Memoised reachability over the order relation.
struct Reach {
    succ: HashMap<VertexId, Vec<VertexId>>,
    memo: std::cell::RefCell<HashMap<VertexId, HashSet<VertexId>>>,
}

impl Reach {
    fn new(flow: &MCFlow) -> Self {
        Reach {
            succ: flow.successors(),
            memo: Default::default(),
        }
    }

    fn leq(&self, a: VertexId, b: VertexId) -> bool {
        if a == b {
            return true;
        }
        if let Some(r) = self.memo.borrow().get(&a) {
            return r.contains(&b);
        }
        let mut seen = HashSet::new();
        let mut stack = vec![a];
        while let Some(v) = stack.pop() {
            for &w in self.succ.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        let hit = seen.contains(&b);
        self.memo.borrow_mut().insert(a, seen);
        hit
    }
}

/// Per-condition outcome of [`verify_flow`], with offending items.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowReport {
    pub malformed: Vec<String>,
    pub cyclic_order: Option<VertexId>,
    pub o1: Vec<(VertexId, VertexId)>,
    /// `(x, y, z)`: step `x -> y` with neighbour `z` of `y` unordered.
    pub o2: Vec<(VertexId, VertexId, VertexId)>,
    pub p1: Vec<VertexId>,
    pub p2: Vec<VertexId>,
    pub p3: Vec<EdgeId>,
    pub p4: Vec<VertexId>,
}

impl FlowReport {
    pub fn is_flow(&self) -> bool {
        self.malformed.is_empty()
            && self.cyclic_order.is_none()
            && self.o1.is_empty()
            && self.o2.is_empty()
            && self.p1.is_empty()
            && self.p2.is_empty()
            && self.p3.is_empty()
    }

    pub fn is_well_covered(&self) -> bool {
        self.is_flow() && self.p4.is_empty()
    }
}

impl fmt::Display for FlowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        for m in &self.malformed {
            writeln!(f, "malformed: {m}")?;
        }
        if let Some(v) = self.cyclic_order {
            writeln!(f, "order: FAIL (cycle through {v})")?;
        }
        writeln!(f, "O1: {} {:?}", mark(self.o1.is_empty()), self.o1)?;
        writeln!(f, "O2: {} {:?}", mark(self.o2.is_empty()), self.o2)?;
        writeln!(f, "P1: {} {:?}", mark(self.p1.is_empty()), self.p1)?;
        writeln!(f, "P2: {} {:?}", mark(self.p2.is_empty()), self.p2)?;
        writeln!(f, "P3: {} {:?}", mark(self.p3.is_empty()), self.p3)?;
        writeln!(f, "P4: {} {:?}", mark(self.p4.is_empty()), self.p4)
    }
}

/// Path indices covering each edge.
fn coverage(d: &ZXDiagram, paths: &[Vec<VertexId>]) -> Result<Vec<Vec<usize>>> {
    let mut cover = vec![Vec::new(); d.num_edges()];
    for (i, p) in paths.iter().enumerate() {
        for e in path_edges(d, p)? {
            cover[e].push(i);
        }
    }
    Ok(cover)
}

pub fn verify_flow(d: &ZXDiagram, flow: &MCFlow) -> FlowReport {
    let mut rep = FlowReport::default();
    for (i, p) in flow.paths.iter().enumerate() {
        if p.len() < 2 {
            rep.malformed.push(format!("path {i} has fewer than two vertices"));
        }
        if let Some(v) = p.iter().find(|&&v| !d.contains_vertex(v)) {
            rep.malformed.push(format!("path {i} visits unknown vertex {v}"));
        }
        if p.iter().collect::<HashSet<_>>().len() != p.len() {
            rep.malformed.push(format!("path {i} revisits a vertex"));
        }
    }
    if !rep.malformed.is_empty() {
        return rep;
    }
    let cover = match coverage(d, &flow.paths) {
        Ok(c) => c,
        Err(e) => {
            rep.malformed.push(e.to_string());
            return rep;
        }
    };
    rep.cyclic_order = flow.cycle_vertex();
    let reach = Reach::new(flow);
    let steps: HashSet<(VertexId, VertexId)> = flow.paths.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1]))).collect();
    for p in &flow.paths {
        for w in p.windows(2) {
            let (x, y) = (w[0], w[1]);
            if !reach.leq(x, y) {
                rep.o1.push((x, y));
            }
            for z in d.neighbours(y) {
                if !steps.contains(&(z, y)) && !reach.leq(x, z) {
                    rep.o2.push((x, y, z));
                }
            }
        }
    }
    for (v, vx) in d.vertices() {
        let inc = d.incident_edges(v);
        match vx.kind {
            VertexKind::B => {
                if inc.iter().any(|&e| cover[e].is_empty()) {
                    rep.p1.push(v);
                }
            }
            VertexKind::H => {
                let first = inc.first().map(|&e| cover[e].clone()).unwrap_or_default();
                if first.is_empty() || inc.iter().any(|&e| cover[e] != first) {
                    rep.p1.push(v);
                }
            }
            VertexKind::Z | VertexKind::X => {
                if inc.iter().filter(|&&e| cover[e].is_empty()).count() > 1 {
                    rep.p2.push(v);
                }
            }
        }
    }
    rep.p3 = (0..d.num_edges()).filter(|&e| cover[e].len() > 1).collect();
    for p in &flow.paths {
        for &v in [p[0], p[p.len() - 1]].iter() {
            if d.kind(v).is_spider() && d.degree(v) > 1 && !rep.p4.contains(&v) {
                rep.p4.push(v);
            }
        }
    }
    rep
}

/// A diagram and flow produced by flow-preserving rewrites, with a log of
/// what was applied.
#[derive(Clone, Debug)]
pub struct Rewritten {
    pub diagram: ZXDiagram,
    pub flow: MCFlow,
    pub audit: Vec<String>,
}

/// Substitutes `rule.rhs` for the single spider `s`, attaching rule leg
/// `i` to `legs[i]`. Returns the new diagram and the ids of the rule's
/// right-side vertices in it.
fn replace_spider(
    d: &ZXDiagram,
    rule: &RewriteRule,
    s: VertexId,
    legs: Vec<Leg>,
) -> Result<(ZXDiagram, BTreeMap<VertexId, VertexId>)> {
    let occ = Occurrence { interior: vec![s], legs };
    let sub = d.substitute(&occ, &rule.rhs)?;
    Ok((sub.diagram, sub.vertex_map))
}

fn leg(d: &ZXDiagram, s: VertexId, other: VertexId) -> Result<Leg> {
    Ok(Leg {
        edge: edge_between(d, s, other)?,
        outside: other,
    })
}

/// Adds a phase-free leaf to spider `s` with r_fuse.
pub(crate) fn add_leaf(d: &ZXDiagram, s: VertexId) -> Result<(ZXDiagram, VertexId, VertexId)> {
    let kind = d.kind(s);
    let rule = fuse(d.degree(s), kind, d.phase(s))?;
    let legs = d
        .incident_edges(s)
        .into_iter()
        .map(|e| Leg {
            edge: e,
            outside: d.other_end(e, s),
        })
        .collect();
    let (nd, map) = replace_spider(d, &rule, s, legs)?;
    Ok((nd, map[&rule.role("spider")[0]], map[&rule.role("leaf")[0]]))
}

fn relabel(paths: &mut [Vec<VertexId>], from: VertexId, to: VertexId) {
    for p in paths {
        for v in p.iter_mut() {
            if *v == from {
                *v = to;
            }
        }
    }
}

fn require(rep: &FlowReport, well_covered: bool, what: &str) -> Result<()> {
    let ok = if well_covered { rep.is_well_covered() } else { rep.is_flow() };
    if ok {
        Ok(())
    } else {
        Err(Error::Flow(format!("{what}:\n{rep}")))
    }
}

/// Moves every path end sitting on a spider of degree above one onto a
/// fresh leaf, using r_fuse.
pub fn make_well_covered(d: &ZXDiagram, flow: &MCFlow) -> Result<Rewritten> {
    require(&verify_flow(d, flow), false, "input flow invalid")?;
    let mut d = d.clone();
    let mut paths = flow.paths.clone();
    let mut audit = Vec::new();
    loop {
        let bad = paths.iter().enumerate().find_map(|(i, p)| {
            let (a, b) = (p[0], p[p.len() - 1]);
            if d.kind(a).is_spider() && d.degree(a) > 1 {
                Some((i, true, a))
            } else if d.kind(b).is_spider() && d.degree(b) > 1 {
                Some((i, false, b))
            } else {
                None
            }
        });
        let Some((i, start, s)) = bad else { break };
        let deg = d.degree(s);
        let (nd, s2, leaf) = add_leaf(&d, s)?;
        d = nd;
        relabel(&mut paths, s, s2);
        if start {
            paths[i].insert(0, leaf);
        } else {
            paths[i].push(leaf);
        }
        audit.push(format!(
            "r_fuse at spider {s} ({deg} legs): path {i} {} at leaf {leaf}",
            if start { "starts" } else { "ends" }
        ));
    }
    let flow = MCFlow::from_paths(&d, paths)?;
    require(&verify_flow(&d, &flow), true, "flow lost after r_fuse")?;
    Ok(Rewritten {
        diagram: d,
        flow,
        audit,
    })
}

/// One path passing through a spider: its index, position, and the
/// neighbours before and after.
#[derive(Clone, Copy, Debug)]
struct Through {
    path: usize,
    pos: usize,
    prev: VertexId,
    next: VertexId,
}

fn splice(paths: &mut [Vec<VertexId>], t: Through, middle: &[VertexId]) {
    paths[t.path].splice(t.pos..=t.pos, middle.iter().copied());
}

/// Rewrites spiders of degree above three until none remain, carrying the
/// flow along. Uses r_4 and r_5 at degree four and five, r_{n+} and r_n on
/// larger spiders, and an extra r_fuse path first when the number of
/// paths through the spider is odd.
pub fn reduce_degree(d: &ZXDiagram, flow: &MCFlow) -> Result<Rewritten> {
    require(&verify_flow(d, flow), true, "reduce_degree needs a well-covered flow")?;
    let mut d = d.clone();
    let mut paths = flow.paths.clone();
    let mut audit = Vec::new();
    loop {
        let Some(s) = d.vertex_ids().find(|&v| d.kind(v).is_spider() && d.degree(v) > 3) else {
            break;
        };
        let (kind, phase) = (d.kind(s), d.phase(s));
        let cover = coverage(&d, &paths)?;
        let through: Vec<Through> = paths
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let pos = p.iter().position(|&v| v == s)?;
                Some((i, pos, p))
            })
            .map(|(i, pos, p)| {
                if pos == 0 || pos + 1 == p.len() {
                    return Err(Error::Flow(format!("path {i} ends on spider {s}")));
                }
                Ok(Through {
                    path: i,
                    pos,
                    prev: p[pos - 1],
                    next: p[pos + 1],
                })
            })
            .collect::<Result<_>>()?;
        let uncovered: Vec<EdgeId> = d.incident_edges(s).into_iter().filter(|&e| cover[e].is_empty()).collect();
        let u = match uncovered.as_slice() {
            [] => None,
            [e] => Some(Leg {
                edge: *e,
                outside: d.other_end(*e, s),
            }),
            _ => return Err(Error::Flow(format!("spider {s} has several uncovered edges"))),
        };
        let p = through.len();
        let deg = d.degree(s);
        if p % 2 == 1 {
            let (d1, s1, l1) = add_leaf(&d, s)?;
            let (d2, s2, l2) = add_leaf(&d1, s1)?;
            d = d2;
            relabel(&mut paths, s, s2);
            paths.push(vec![l1, s2, l2]);
            audit.push(format!("r_fuse twice at spider {s} ({deg} legs): new path {l1} -> {l2}"));
            continue;
        }
        let ins: Vec<Leg> = through.iter().map(|t| leg(&d, s, t.prev)).collect::<Result<_>>()?;
        let outs: Vec<Leg> = through.iter().map(|t| leg(&d, s, t.next)).collect::<Result<_>>()?;
        // splice positions shift when two paths coincide, so splice the
        // later position first
        let mut edits: Vec<(Through, Vec<VertexId>)> = Vec::new();
        if p == 2 {
            let (a, b) = (through[0], through[1]);
            let (rule, legs) = match u {
                None => (four(kind, phase)?, vec![ins[0], outs[0], outs[1], ins[1]]),
                Some(u) => (five(kind, phase)?, vec![ins[0], u, outs[0], outs[1], ins[1]]),
            };
            let (nd, map) = replace_spider(&d, &rule, s, legs)?;
            let c: Vec<VertexId> = rule.role("cycle").iter().map(|v| map[v]).collect();
            if u.is_none() {
                edits.push((a, vec![c[0], c[1]]));
                edits.push((b, vec![c[3], c[2]]));
            } else {
                edits.push((a, vec![c[0], c[1], c[2]]));
                edits.push((b, vec![c[4], c[3]]));
            }
            audit.push(format!("{} at spider {s} ({deg} legs)", rule.label()));
            d = nd;
        } else {
            let n = 2 * p;
            let rule = match u {
                None => n_plus(n, kind, phase)?,
                Some(_) => n_legged(n, kind, phase)?,
            };
            let half = p / 2;
            let mut legs = Vec::with_capacity(n + 1);
            for i in 0..half {
                legs.extend([ins[2 * i], ins[2 * i + 1]]);
            }
            for i in 0..half {
                legs.extend([outs[2 * i], outs[2 * i + 1]]);
            }
            legs.extend(u);
            let (nd, map) = replace_spider(&d, &rule, s, legs)?;
            let a = map[&rule.role("centre_a")[0]];
            let b = map[&rule.role("centre_b")[0]];
            let o: Vec<VertexId> = rule.role("outer").iter().map(|v| map[v]).collect();
            for i in 0..half {
                edits.push((through[2 * i], vec![o[i], a, o[half + i]]));
                edits.push((through[2 * i + 1], vec![o[i], b, o[half + i]]));
            }
            audit.push(format!("{} at spider {s}", rule.label()));
            d = nd;
        }
        edits.sort_by_key(|(t, _)| Reverse((t.path, t.pos)));
        for (t, mid) in edits {
            splice(&mut paths, t, &mid);
        }
        let f = MCFlow::from_paths(&d, paths.clone())?;
        require(&verify_flow(&d, &f), true, "flow lost during degree reduction")?;
    }
    let flow = MCFlow::from_paths(&d, paths)?;
    require(&verify_flow(&d, &flow), true, "flow lost during degree reduction")?;
    Ok(Rewritten {
        diagram: d,
        flow,
        audit,
    })
}

/// Extra paths needed for a fully covered spider of even degree `n`.
pub fn f_overhead(n: usize) -> Result<usize> {
    check_overhead_arg(n)?;
    Ok(match n {
        4 => 0,
        _ if n.is_multiple_of(4) => f_overhead(n / 2)?,
        _ => 1 + f_overhead(n + 2)?,
    })
}

/// Weight-two operations needed for a fully covered spider of even
/// degree `n`.
pub fn g_overhead(n: usize) -> Result<usize> {
    check_overhead_arg(n)?;
    Ok(match n {
        4 => 2,
        _ if n.is_multiple_of(4) => n + 2 * g_overhead(n / 2)?,
        _ => g_overhead(n + 2)?,
    })
}

fn check_overhead_arg(n: usize) -> Result<()> {
    if n < 4 || n % 2 == 1 {
        Err(Error::InvalidParameter(format!("overhead defined for even n >= 4, got {n}")))
    } else {
        Ok(())
    }
}

/// What a degree-3 path spider does with its uncovered edge.
#[derive(Clone, Copy, Debug)]
enum Partner {
    Leaf(VertexId),
    Spider(VertexId),
}

fn basis_of_leaf(kind: VertexKind) -> Basis {
    match kind {
        VertexKind::X => Basis::Z,
        _ => Basis::X,
    }
}

/// Event scheduling state for extraction.
#[derive(Clone)]
struct Timeline {
    indeg: BTreeMap<VertexId, usize>,
    /// Ready events other than preparations.
    ready: BTreeSet<VertexId>,
    preps: BTreeSet<VertexId>,
    live: isize,
}

impl Timeline {
    fn enqueue(&mut self, e: VertexId, is_start: &impl Fn(VertexId) -> bool) {
        if is_start(e) {
            self.preps.insert(e);
        } else {
            self.ready.insert(e);
        }
    }

    fn fire<I: Iterator<Item = VertexId>>(
        &mut self,
        e: VertexId,
        succ: &impl Fn(VertexId) -> I,
        is_start: &impl Fn(VertexId) -> bool,
        is_end: &impl Fn(VertexId) -> bool,
        out: &mut Vec<VertexId>,
    ) {
        self.ready.remove(&e);
        self.preps.remove(&e);
        out.push(e);
        self.live += is_start(e) as isize - is_end(e) as isize;
        for f in succ(e) {
            let k = self.indeg.get_mut(&f).unwrap();
            *k -= 1;
            if *k == 0 {
                self.enqueue(f, is_start);
            }
        }
    }

    /// Fires ready events, lowest id first, until only preparations remain.
    fn run_free<I: Iterator<Item = VertexId>>(
        &mut self,
        succ: &impl Fn(VertexId) -> I,
        is_start: &impl Fn(VertexId) -> bool,
        is_end: &impl Fn(VertexId) -> bool,
        out: &mut Vec<VertexId>,
    ) {
        while let Some(&e) = self.ready.first() {
            self.fire(e, succ, is_start, is_end, out);
        }
    }
}

/// Reads a circuit off a diagram with a well-covered flow and spiders of
/// degree at most three. Each path is a qubit while it is live; freed
/// qubits are reused lowest index first. Input `i` starts on qubit `i`
/// and outputs end on the live qubits in increasing order.
pub fn extract_circuit(d: &ZXDiagram, flow: &MCFlow) -> Result<Circuit> {
    require(&verify_flow(d, flow), true, "extraction needs a well-covered flow")?;
    if d.max_spider_degree() > 3 {
        return Err(Error::Flow(format!(
            "extraction needs spider degree at most 3, found {}",
            d.max_spider_degree()
        )));
    }
    let cover = coverage(d, &flow.paths)?;
    let mut on_path: HashMap<VertexId, (usize, usize)> = HashMap::new();
    for (i, p) in flow.paths.iter().enumerate() {
        for (pos, &v) in p.iter().enumerate() {
            // a spider of degree <= 3 lies on at most one path
            if on_path.insert(v, (i, pos)).is_some() && d.kind(v) != VertexKind::B {
                return Err(Error::Flow(format!("vertex {v} lies on two paths")));
            }
        }
    }
    let mut partner: HashMap<VertexId, Partner> = HashMap::new();
    for (&v, &(i, pos)) in &on_path {
        let interior = pos > 0 && pos + 1 < flow.paths[i].len();
        if !(interior && d.kind(v).is_spider() && d.degree(v) == 3) {
            continue;
        }
        let e = d.incident_edges(v).into_iter().find(|&e| cover[e].is_empty()).unwrap();
        let q = d.other_end(e, v);
        let p = if d.degree(q) == 1 && d.kind(q).is_spider() && !on_path.contains_key(&q) {
            Partner::Leaf(q)
        } else if d.degree(q) == 3 && d.kind(q).is_spider() && on_path.contains_key(&q) {
            Partner::Spider(q)
        } else {
            return Err(Error::Flow(format!("spider {v} has an unextractable neighbour {q}")));
        };
        partner.insert(v, p);
    }

    // two spiders joined by an uncovered edge act at one time step
    let mut event_of: BTreeMap<VertexId, VertexId> = d.vertex_ids().map(|v| (v, v)).collect();
    for (&v, p) in &partner {
        if let Partner::Spider(q) = *p {
            let r = v.min(q);
            event_of.insert(v, r);
            event_of.insert(q, r);
        }
    }
    let mut members: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (&v, &e) in &event_of {
        members.entry(e).or_default().push(v);
    }
    let mut succ: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    let mut indeg: BTreeMap<VertexId, usize> = members.keys().map(|&e| (e, 0)).collect();
    for &(a, b) in &flow.order {
        let (ea, eb) = (event_of[&a], event_of[&b]);
        if ea != eb && succ.entry(ea).or_default().insert(eb) {
            *indeg.get_mut(&eb).unwrap() += 1;
        }
    }
    let is_start = |e: VertexId| {
        members[&e]
            .iter()
            .any(|v| d.kind(*v).is_spider() && on_path.get(v).is_some_and(|&(_, pos)| pos == 0))
    };
    let is_end = |e: VertexId| {
        members[&e].iter().any(|v| {
            d.kind(*v).is_spider() && on_path.get(v).is_some_and(|&(i, pos)| pos > 0 && pos + 1 == flow.paths[i].len())
        })
    };
    let mut state = Timeline {
        indeg,
        ready: BTreeSet::new(),
        preps: BTreeSet::new(),
        live: 0,
    };
    for (&e, &k) in &state.indeg.clone() {
        if k == 0 {
            state.enqueue(e, &is_start);
        }
    }
    let mut schedule = Vec::new();
    let succ_of = |e: VertexId| succ.get(&e).into_iter().flatten().copied();
    loop {
        state.run_free(&succ_of, &is_start, &is_end, &mut schedule);
        // only preparations are left: take the one after which the
        // fewest qubits stay live, so ancillas with disjoint lifetimes
        // share a qubit
        let Some(best) = state
            .preps
            .iter()
            .map(|&c| {
                let mut trial = state.clone();
                trial.fire(c, &succ_of, &is_start, &is_end, &mut Vec::new());
                trial.run_free(&succ_of, &is_start, &is_end, &mut Vec::new());
                (trial.live, c)
            })
            .min()
        else {
            break;
        };
        state.fire(best.1, &succ_of, &is_start, &is_end, &mut schedule);
    }
    if schedule.len() != members.len() {
        return Err(Error::Flow("extraction order has a cycle".into()));
    }

    let n_in = d.inputs().len();
    let mut qubit: Vec<Option<usize>> = vec![None; flow.paths.len()];
    for (i, p) in flow.paths.iter().enumerate() {
        if let Some(k) = d.inputs().iter().position(|&b| b == p[0]) {
            qubit[i] = Some(k);
        }
    }
    let mut free: BTreeSet<usize> = BTreeSet::new();
    let mut next = n_in;
    let mut ops = Vec::new();
    let mut out_qubit: BTreeMap<usize, usize> = BTreeMap::new();
    let gate = |ops: &mut Vec<Op>, c: Clifford1, q: usize| {
        if c != Clifford1::I {
            ops.push(Op::Gate(c, q));
        }
    };
    for e in schedule {
        for &v in &members[&e] {
            let Some(&(i, pos)) = on_path.get(&v) else { continue };
            let last = pos + 1 == flow.paths[i].len();
            let (kind, phase) = (d.kind(v), d.phase(v));
            if pos == 0 {
                if kind == VertexKind::B {
                    continue;
                }
                if !kind.is_spider() || d.degree(v) != 1 {
                    return Err(Error::Flow(format!("path {i} starts on vertex {v}")));
                }
                let q = free.pop_first().unwrap_or_else(|| {
                    next += 1;
                    next - 1
                });
                qubit[i] = Some(q);
                ops.push(Op::Prep(basis_of_leaf(kind), q));
                gate(&mut ops, Clifford1::phase_gate(kind, phase), q);
                continue;
            }
            let q = qubit[i].ok_or_else(|| Error::Flow(format!("path {i} used before it starts")))?;
            if last {
                if kind == VertexKind::B {
                    let k = d
                        .outputs()
                        .iter()
                        .position(|&b| b == v)
                        .ok_or_else(|| Error::Flow(format!("path {i} ends on input {v}")))?;
                    out_qubit.insert(k, q);
                } else {
                    gate(&mut ops, Clifford1::phase_gate(kind, phase), q);
                    ops.push(Op::Destroy(basis_of_leaf(kind), q));
                    free.insert(q);
                }
                continue;
            }
            match kind {
                VertexKind::H => ops.push(Op::Gate(Clifford1::H, q)),
                VertexKind::B => return Err(Error::Flow(format!("boundary {v} inside path {i}"))),
                _ => {
                    gate(&mut ops, Clifford1::phase_gate(kind, phase), q);
                    if let Some(&Partner::Leaf(l)) = partner.get(&v) {
                        let lp = d.phase(l);
                        if d.kind(l) == kind {
                            gate(&mut ops, Clifford1::phase_gate(kind, lp), q);
                        } else if lp.is_pauli() {
                            // a pi leaf selects the -1 eigenspace: conjugate
                            // the +1 projector by a flip
                            let b = basis_of_leaf(d.kind(l));
                            let flip = Clifford1::phase_gate(d.kind(l), lp);
                            gate(&mut ops, flip, q);
                            ops.push(Op::M1(b, q));
                            gate(&mut ops, flip, q);
                        } else {
                            gate(&mut ops, Clifford1::phase_gate(kind, -lp), q);
                        }
                    }
                }
            }
        }
        if let [a, b] = members[&e].as_slice() {
            let qa = qubit[on_path[a].0].unwrap();
            let qb = qubit[on_path[b].0].unwrap();
            if qa == qb {
                return Err(Error::Flow(format!("spiders {a} and {b} share a qubit")));
            }
            let op = match (d.kind(*a), d.kind(*b)) {
                (VertexKind::Z, VertexKind::X) => Op::Cx(qa, qb),
                (VertexKind::X, VertexKind::Z) => Op::Cx(qb, qa),
                (VertexKind::Z, _) => Op::M2(Basis::Z, qa, qb),
                _ => Op::M2(Basis::X, qa, qb),
            };
            ops.push(op);
        }
    }

    let mut c = Circuit { qubits: next, ops };
    // park outputs on the live qubits in order
    let live = c.output_qubits();
    if live.len() != d.outputs().len() || out_qubit.len() != live.len() {
        return Err(Error::Flow("live qubits do not match the outputs".into()));
    }
    let mut at: Vec<usize> = (0..live.len()).map(|k| out_qubit[&k]).collect();
    for k in 0..live.len() {
        let (cur, want) = (at[k], live[k]);
        if cur != want {
            c.push(Op::Swap(cur, want));
            if let Some(j) = at.iter().position(|&q| q == want) {
                at[j] = cur;
            }
            at[k] = want;
        }
    }
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Phase;
    use crate::tensor::{equal_up_to_scalar, interpret, DEFAULT_TOL};

    fn same_map(a: &ZXDiagram, b: &ZXDiagram) -> bool {
        equal_up_to_scalar(&interpret(a).unwrap(), &interpret(b).unwrap(), DEFAULT_TOL).unwrap()
    }

    /// A spider of colour `kind` with `p` paths through it, inputs to
    /// outputs, and optionally one extra uncovered leaf.
    fn spider_with_paths(p: usize, kind: VertexKind, leaf: bool) -> (ZXDiagram, MCFlow) {
        let mut d = ZXDiagram::new();
        let ins: Vec<_> = (0..p).map(|_| d.add_input()).collect();
        let outs: Vec<_> = (0..p).map(|_| d.add_output()).collect();
        let s = d.add_vertex(kind, Phase::ZERO);
        for i in 0..p {
            d.add_edge(ins[i], s);
            d.add_edge(s, outs[i]);
        }
        if leaf {
            let l = d.add_vertex(kind.dual(), Phase::ZERO);
            d.add_edge(s, l);
        }
        let paths = (0..p).map(|i| vec![ins[i], s, outs[i]]).collect();
        let f = MCFlow::from_paths(&d, paths).unwrap();
        (d, f)
    }

    #[test]
    fn single_wire_passes() {
        let d = ZXDiagram::identity(1);
        let f = MCFlow::from_paths(&d, vec![vec![d.inputs()[0], d.outputs()[0]]]).unwrap();
        assert!(verify_flow(&d, &f).is_well_covered());
    }

    #[test]
    fn path_ending_on_spider_fails_p4_and_gets_a_leaf() {
        // input -> Z (3 legs) with the path stopping at the spider
        let mut d = ZXDiagram::new();
        let i = d.add_input();
        let o = d.add_output();
        let z = d.add_z();
        let x = d.add_x();
        let l = d.add_z();
        d.add_edge(i, z);
        d.add_edge(z, x);
        d.add_edge(z, l);
        let _ = l;
        d.add_edge(x, o);
        // path 0 stops at z; path 1 starts at z's neighbour x
        let f = MCFlow::from_paths(&d, vec![vec![i, z], vec![x, o]]).unwrap();
        let rep = verify_flow(&d, &f);
        assert!(!rep.is_flow(), "z has two uncovered edges");
        let f = MCFlow::from_paths(&d, vec![vec![i, z, x, o]]).unwrap();
        assert!(verify_flow(&d, &f).is_well_covered());

        let mut d2 = ZXDiagram::new();
        let i = d2.add_input();
        let z = d2.add_z();
        let l1 = d2.add_x();
        d2.add_edge(i, z);
        d2.add_edge(z, l1);
        let f = MCFlow::from_paths(&d2, vec![vec![i, z, l1]]).unwrap();
        assert!(verify_flow(&d2, &f).is_well_covered());
        let f = MCFlow::from_paths(&d2, vec![vec![i, z]]).unwrap();
        let rep = verify_flow(&d2, &f);
        assert_eq!(rep.p4, vec![z]);
        let out = make_well_covered(&d2, &f).unwrap();
        assert_eq!(out.audit.len(), 1);
        assert!(verify_flow(&out.diagram, &out.flow).is_well_covered());
        assert_eq!(d2.num_vertices() + 1, out.diagram.num_vertices());
        assert!(same_map(&d2, &out.diagram));
    }

    #[test]
    fn shared_edge_fails_p3() {
        let d = ZXDiagram::identity(1);
        let (i, o) = (d.inputs()[0], d.outputs()[0]);
        let f = MCFlow {
            paths: vec![vec![i, o], vec![i, o]],
            order: vec![(i, o)],
        };
        assert_eq!(verify_flow(&d, &f).p3, vec![0]);
    }

    #[test]
    fn overhead_recursions() {
        assert_eq!(f_overhead(4).unwrap(), 0);
        assert_eq!(f_overhead(6).unwrap(), 1);
        assert_eq!(f_overhead(8).unwrap(), 0);
        assert_eq!(f_overhead(10).unwrap(), 2);
        assert_eq!(g_overhead(4).unwrap(), 2);
        assert_eq!(g_overhead(8).unwrap(), 12);
        assert!(f_overhead(5).is_err());
        assert!(g_overhead(2).is_err());
    }

    #[test]
    fn degree_reduction_keeps_semantics_and_flow() {
        for (p, leaf) in [(2, false), (2, true), (3, false), (4, false), (4, true), (3, true)] {
            let (d, f) = spider_with_paths(p, VertexKind::X, leaf);
            let out = reduce_degree(&d, &f).unwrap();
            assert!(out.diagram.max_spider_degree() <= 3, "{p} {leaf}");
            assert!(verify_flow(&out.diagram, &out.flow).is_well_covered());
            assert!(same_map(&d, &out.diagram), "{p} {leaf}");
        }
    }

    #[test]
    fn degree_eight_needs_no_extra_paths_and_six_one() {
        let (d, f) = spider_with_paths(4, VertexKind::Z, false);
        let out = reduce_degree(&d, &f).unwrap();
        assert_eq!(out.flow.paths.len(), 4);
        assert_eq!(out.audit.len(), 1 + 6);
        let (d, f) = spider_with_paths(3, VertexKind::Z, false);
        let out = reduce_degree(&d, &f).unwrap();
        assert_eq!(out.flow.paths.len(), 4);
    }

    #[test]
    fn extraction_of_hadamard_wire() {
        let mut d = ZXDiagram::new();
        let i = d.add_input();
        let h = d.add_vertex(VertexKind::H, Phase::ZERO);
        let o = d.add_output();
        d.add_edge(i, h);
        d.add_edge(h, o);
        let f = MCFlow::from_paths(&d, vec![vec![i, h, o]]).unwrap();
        let c = extract_circuit(&d, &f).unwrap();
        assert_eq!(c.ops, vec![Op::Gate(Clifford1::H, 0)]);
    }

    #[test]
    fn extraction_of_reduced_spiders_round_trips() {
        for (p, leaf, kind) in [(2, false, VertexKind::X), (2, true, VertexKind::Z), (3, true, VertexKind::X)] {
            let (d, f) = spider_with_paths(p, kind, leaf);
            let out = reduce_degree(&d, &f).unwrap();
            let c = extract_circuit(&out.diagram, &out.flow).unwrap();
            assert!(c.max_weight() <= 2);
            assert!(same_map(&d, &c.to_diagram().unwrap()), "{p} {leaf}");
        }
    }

    #[test]
    fn leaf_phases_extract_to_matching_gates() {
        for kind in [VertexKind::Z, VertexKind::X] {
            for q in 0..4 {
                for same in [true, false] {
                    let mut d = ZXDiagram::new();
                    let i = d.add_input();
                    let o = d.add_output();
                    let s = d.add_vertex(kind, Phase::new(1));
                    let l = d.add_vertex(if same { kind } else { kind.dual() }, Phase::new(q));
                    d.add_edge(i, s);
                    d.add_edge(s, o);
                    d.add_edge(s, l);
                    let f = MCFlow::from_paths(&d, vec![vec![i, s, o]]).unwrap();
                    let c = extract_circuit(&d, &f).unwrap();
                    assert!(same_map(&d, &c.to_diagram().unwrap()), "{kind:?} {q} {same}");
                }
            }
        }
    }
}
