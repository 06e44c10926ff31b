//! Pauli webs as solutions of a linear system over F2.
//!
//! Each edge carries two bits, `z` at column `2e` and `x` at column
//! `2e + 1`. A `Y` highlight sets both.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::diagram::{EdgeId, VertexId, VertexKind, ZXDiagram};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, RowSpace};
use crate::pauli::{Pauli, PauliString};
use crate::phase::Phase;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliWeb {
    bits: BitVec,
}

impl PauliWeb {
    pub fn empty(num_edges: usize) -> Self {
        PauliWeb {
            bits: BitVec::zeros(2 * num_edges),
        }
    }

    pub fn from_bits(bits: BitVec) -> Self {
        assert!(bits.len().is_multiple_of(2));
        PauliWeb { bits }
    }

    pub fn from_highlights(num_edges: usize, hl: impl IntoIterator<Item = (EdgeId, Pauli)>) -> Self {
        let mut w = PauliWeb::empty(num_edges);
        for (e, p) in hl {
            w.set(e, p);
        }
        w
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn num_edges(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn get(&self, e: EdgeId) -> Pauli {
        Pauli::from_bits(self.bits.get(2 * e + 1), self.bits.get(2 * e))
    }

    pub fn set(&mut self, e: EdgeId, p: Pauli) {
        self.bits.set(2 * e, p.z_bit());
        self.bits.set(2 * e + 1, p.x_bit());
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    /// Highlighted edges with their colour, in edge order.
    pub fn highlights(&self) -> Vec<(EdgeId, Pauli)> {
        (0..self.num_edges())
            .map(|e| (e, self.get(e)))
            .filter(|&(_, p)| p != Pauli::I)
            .collect()
    }

    /// The symmetric-difference product.
    pub fn product(&self, other: &PauliWeb) -> PauliWeb {
        PauliWeb {
            bits: self.bits.xor(&other.bits),
        }
    }

    pub fn to_text(&self, d: &ZXDiagram) -> String {
        let mut s = String::new();
        for (e, p) in self.highlights() {
            let (a, b) = d.edges()[e];
            let _ = writeln!(s, "hl {a} {b} {}", p.as_char());
        }
        s
    }

    /// Parses `hl <a> <b> <Z|X|Y>` lines. Parallel edges are consumed in
    /// edge order.
    pub fn from_text(d: &ZXDiagram, text: &str) -> Result<PauliWeb> {
        let mut w = PauliWeb::empty(d.num_edges());
        let mut used = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "hl" {
                return Err(Error::parse(i + 1, "expected: hl <id> <id> <Z|X|Y>"));
            }
            let a: VertexId = parts[1].parse().map_err(|_| Error::parse(i + 1, "bad vertex id"))?;
            let b: VertexId = parts[2].parse().map_err(|_| Error::parse(i + 1, "bad vertex id"))?;
            let p = match parts[3] {
                "Z" => Pauli::Z,
                "X" => Pauli::X,
                "Y" => Pauli::Y,
                other => return Err(Error::parse(i + 1, format!("bad colour '{other}'"))),
            };
            let e = d
                .edges_between(a, b)
                .into_iter()
                .find(|e| !used.contains(e))
                .ok_or_else(|| Error::parse(i + 1, format!("no free edge between {a} and {b}")))?;
            used.insert(e);
            w.set(e, p);
        }
        Ok(w)
    }
}

impl fmt::Debug for PauliWeb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliWeb{:?}", self.highlights())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WebClass {
    Detecting,
    Stabilising,
    CoStabilising,
    Logical,
    MixedTrivial,
}

impl fmt::Display for WebClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WebClass::Detecting => "detecting",
            WebClass::Stabilising => "stabilising",
            WebClass::CoStabilising => "co-stabilising",
            WebClass::Logical => "logical",
            WebClass::MixedTrivial => "mixed-trivial",
        })
    }
}

fn zcol(e: EdgeId) -> usize {
    2 * e
}

fn xcol(e: EdgeId) -> usize {
    2 * e + 1
}

/// Builds the linear constraints every web must satisfy.
pub fn web_system(d: &ZXDiagram) -> BitMatrix {
    system_with_owners(d).0
}

/// The web system plus, for each row, the vertex that produced it.
fn system_with_owners(d: &ZXDiagram) -> (BitMatrix, Vec<VertexId>) {
    let ncols = 2 * d.num_edges();
    let mut m = BitMatrix::new(ncols);
    let mut owners = Vec::new();
    let inc = d.incidence();
    for (v, vx) in d.vertices() {
        let legs = &inc[&v];
        match vx.kind {
            VertexKind::B => {}
            VertexKind::H => {
                if let [a, b] = legs[..] {
                    m.push_row(BitVec::from_indices(ncols, [zcol(a), xcol(b)]));
                    m.push_row(BitVec::from_indices(ncols, [xcol(a), zcol(b)]));
                }
            }
            kind => {
                if legs.is_empty() {
                    continue;
                }
                let (own, opp): (fn(EdgeId) -> usize, fn(EdgeId) -> usize) = if kind == VertexKind::Z {
                    (zcol, xcol)
                } else {
                    (xcol, zcol)
                };
                for &l in &legs[1..] {
                    m.push_row(BitVec::from_indices(ncols, [opp(legs[0]), opp(l)]));
                }
                let mut parity = BitVec::from_indices(ncols, legs.iter().map(|&l| own(l)));
                if !vx.phase.is_pauli() {
                    parity.flip(opp(legs[0]));
                }
                m.push_row(parity);
            }
        }
        owners.resize(m.nrows(), v);
    }
    (m, owners)
}

pub fn is_web(d: &ZXDiagram, w: &PauliWeb) -> bool {
    w.num_edges() == d.num_edges() && web_system(d).mul_vec(w.bits()).is_zero()
}

/// A basis of all webs.
pub fn web_basis(d: &ZXDiagram) -> Vec<PauliWeb> {
    web_system(d).nullspace().into_iter().map(PauliWeb::from_bits).collect()
}

/// Basis of the webs that leave every edge in `quiet` unhighlighted.
fn constrained_basis(d: &ZXDiagram, quiet: &[EdgeId]) -> Vec<PauliWeb> {
    let mut m = web_system(d);
    let n = m.ncols();
    for &e in quiet {
        m.push_row(BitVec::from_indices(n, [zcol(e)]));
        m.push_row(BitVec::from_indices(n, [xcol(e)]));
    }
    m.nullspace().into_iter().map(PauliWeb::from_bits).collect()
}

fn boundary_edges(d: &ZXDiagram, vs: &[VertexId]) -> Vec<EdgeId> {
    vs.iter().filter_map(|&b| d.boundary_edge(b)).collect()
}

pub fn detecting_basis(d: &ZXDiagram) -> Vec<PauliWeb> {
    constrained_basis(d, &boundary_edges(d, &d.boundary()))
}

pub fn stabilising_basis(d: &ZXDiagram) -> Vec<PauliWeb> {
    constrained_basis(d, &boundary_edges(d, d.inputs()))
}

pub fn costabilising_basis(d: &ZXDiagram) -> Vec<PauliWeb> {
    constrained_basis(d, &boundary_edges(d, d.outputs()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    In,
    Out,
}

/// The Pauli string a web puts on the inputs or the outputs.
pub fn boundary_pauli(d: &ZXDiagram, w: &PauliWeb, side: Side) -> PauliString {
    let vs = match side {
        Side::In => d.inputs(),
        Side::Out => d.outputs(),
    };
    let letters: Vec<Pauli> = vs
        .iter()
        .map(|&b| d.boundary_edge(b).map_or(Pauli::I, |e| w.get(e)))
        .collect();
    PauliString::from_letters(&letters)
}

/// Precomputed web spaces of one diagram.
#[derive(Clone, Debug)]
pub struct WebAnalysis {
    system: BitMatrix,
    owners: Vec<VertexId>,
    pub all: Vec<PauliWeb>,
    pub detecting: Vec<PauliWeb>,
    pub stabilising: Vec<PauliWeb>,
    pub costabilising: Vec<PauliWeb>,
    trivial_span: RowSpace,
    input_edges: Vec<EdgeId>,
    output_edges: Vec<EdgeId>,
}

impl WebAnalysis {
    pub fn new(d: &ZXDiagram) -> Self {
        let (system, owners) = system_with_owners(d);
        let stabilising = stabilising_basis(d);
        let costabilising = costabilising_basis(d);
        let ncols = system.ncols();
        let trivial_span = RowSpace::from_vectors(
            ncols,
            stabilising.iter().chain(&costabilising).map(|w| w.bits()),
        );
        WebAnalysis {
            all: web_basis(d),
            detecting: detecting_basis(d),
            stabilising,
            costabilising,
            trivial_span,
            system,
            owners,
            input_edges: boundary_edges(d, d.inputs()),
            output_edges: boundary_edges(d, d.outputs()),
        }
    }

    /// log2 of the number of stabilising webs modulo detecting regions.
    pub fn stabilising_classes_log2(&self) -> usize {
        self.stabilising.len() - self.detecting.len()
    }

    pub fn costabilising_classes_log2(&self) -> usize {
        self.costabilising.len() - self.detecting.len()
    }

    /// log2 of the number of webs modulo stabilising and co-stabilising
    /// ones.
    pub fn logical_classes_log2(&self) -> usize {
        self.all.len() - self.trivial_span.dim()
    }

    pub fn classify(&self, w: &PauliWeb) -> Result<WebClass> {
        if w.bits().len() != self.system.ncols() {
            return Err(Error::ArityMismatch("web built for another diagram".into()));
        }
        if let Some(row) = (0..self.system.nrows()).find(|&r| self.system.row(r).dot(w.bits())) {
            return Err(Error::InvalidWeb(self.owners[row]));
        }
        if w.is_empty() {
            return Ok(WebClass::MixedTrivial);
        }
        let quiet = |edges: &[EdgeId]| edges.iter().all(|&e| w.get(e) == Pauli::I);
        let (qi, qo) = (quiet(&self.input_edges), quiet(&self.output_edges));
        Ok(match (qi, qo) {
            (true, true) => WebClass::Detecting,
            (true, false) => WebClass::Stabilising,
            (false, true) => WebClass::CoStabilising,
            _ if self.trivial_span.contains(w.bits()) => WebClass::MixedTrivial,
            _ => WebClass::Logical,
        })
    }
}

pub fn classify(d: &ZXDiagram, w: &PauliWeb) -> Result<WebClass> {
    WebAnalysis::new(d).classify(w)
}

/// All elements of the span of `basis`. Exponential; for small bases.
pub fn span(basis: &[PauliWeb], num_edges: usize) -> Vec<PauliWeb> {
    let mut out = vec![PauliWeb::empty(num_edges)];
    for b in basis {
        let more: Vec<PauliWeb> = out.iter().map(|w| w.product(b)).collect();
        out.extend(more);
    }
    out
}

/// Distinct output strings of the stabilising webs.
pub fn stabiliser_strings(d: &ZXDiagram, a: &WebAnalysis) -> BTreeSet<String> {
    span(&a.stabilising, d.num_edges())
        .iter()
        .map(|w| boundary_pauli(d, w, Side::Out).to_string())
        .collect()
}

/// Inserts a Pauli as pi spiders on edge `e`.
pub(crate) fn insert_pauli(d: &mut ZXDiagram, e: EdgeId, p: Pauli) -> Result<()> {
    if p.z_bit() {
        d.split_edge(e, VertexKind::Z, Phase::PI)?;
    }
    if p.x_bit() {
        d.split_edge(e, VertexKind::X, Phase::PI)?;
    }
    Ok(())
}

/// Fires one spider (or Hadamard box): a pi spider of the highlighted
/// colour goes on every highlighted incident edge.
pub fn fire(d: &ZXDiagram, s: VertexId, w: &PauliWeb) -> Result<ZXDiagram> {
    fire_many(d, &[s], w)
}

/// Fires several vertices at once. Edge ids refer to `d`, so the web
/// stays meaningful while pi spiders accumulate.
pub fn fire_many(d: &ZXDiagram, vs: &[VertexId], w: &PauliWeb) -> Result<ZXDiagram> {
    let mut counts: BTreeMap<EdgeId, Vec<Pauli>> = BTreeMap::new();
    for &s in vs {
        let kind = d.vertex(s).ok_or(Error::UnknownVertex(s))?.kind;
        if kind == VertexKind::B {
            return Err(Error::NotCovered(s));
        }
        let inc = d.incident_edges(s);
        if inc.iter().all(|&e| w.get(e) == Pauli::I) {
            return Err(Error::NotCovered(s));
        }
        for e in inc {
            let p = w.get(e);
            if p != Pauli::I {
                counts.entry(e).or_default().push(p);
            }
        }
    }
    let mut out = d.clone();
    for (e, ps) in counts {
        for p in ps {
            insert_pauli(&mut out, e, p)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{equal_up_to_scalar, interpret, DEFAULT_TOL};

    fn spider_with_legs(kind: VertexKind, phase: Phase, ins: usize, outs: usize) -> (ZXDiagram, VertexId) {
        let mut d = ZXDiagram::new();
        let s = d.add_vertex(kind, phase);
        for _ in 0..ins {
            let b = d.add_input();
            d.add_edge(b, s);
        }
        for _ in 0..outs {
            let b = d.add_output();
            d.add_edge(s, b);
        }
        (d, s)
    }

    #[test]
    fn bare_wire_has_four_webs() {
        let d = ZXDiagram::identity(1);
        assert_eq!(web_system(&d).nrows(), 0);
        assert_eq!(web_basis(&d).len(), 2);
    }

    #[test]
    fn four_legged_spider() {
        let (d, _) = spider_with_legs(VertexKind::Z, Phase::ZERO, 2, 2);
        assert_eq!(web_system(&d).rank(), 4);
        assert_eq!(web_basis(&d).len(), 4);
    }

    #[test]
    fn quarter_turn_spider_webs() {
        let (d, _) = spider_with_legs(VertexKind::Z, Phase::HALF_PI, 1, 1);
        let webs: BTreeSet<String> = span(&web_basis(&d), 2)
            .iter()
            .map(|w| format!("{}{}", w.get(0).as_char(), w.get(1).as_char()))
            .collect();
        // S maps X to Y
        let expect: BTreeSet<String> = ["II", "ZZ", "XY", "YX"].iter().map(|s| s.to_string()).collect();
        assert_eq!(webs, expect);
    }

    #[test]
    fn every_basis_web_is_valid() {
        let (d, _) = spider_with_legs(VertexKind::X, Phase::MINUS_HALF_PI, 2, 3);
        for w in web_basis(&d) {
            assert!(is_web(&d, &w));
        }
    }

    #[test]
    fn empty_web_reads_identity() {
        let d = ZXDiagram::identity(2);
        let w = PauliWeb::empty(2);
        assert!(boundary_pauli(&d, &w, Side::Out).is_identity());
        assert_eq!(classify(&d, &w).unwrap(), WebClass::MixedTrivial);
    }

    #[test]
    fn firing_a_full_web_preserves_the_map() {
        let (d, s) = spider_with_legs(VertexKind::Z, Phase::ZERO, 1, 2);
        let base = interpret(&d).unwrap();
        for w in span(&web_basis(&d), d.num_edges()) {
            if w.is_empty() {
                continue;
            }
            let fired = fire(&d, s, &w).unwrap();
            assert!(equal_up_to_scalar(&interpret(&fired).unwrap(), &base, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn text_round_trip() {
        let (d, _) = spider_with_legs(VertexKind::Z, Phase::ZERO, 1, 1);
        let w = PauliWeb::from_highlights(2, [(0, Pauli::X), (1, Pauli::X)]);
        let t = w.to_text(&d);
        assert_eq!(PauliWeb::from_text(&d, &t).unwrap(), w);
    }
}
