//! Edge-flip errors, their semantic classification, and ZX distance.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::diagram::{EdgeId, ZXDiagram};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::{combinations, Pauli};
use crate::tensor::{equal_up_to_scalar, InterpretConfig, LinearMap, Network};
use crate::web::{detecting_basis, insert_pauli, is_web, PauliWeb};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlipKind {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeFlip {
    pub edge: EdgeId,
    pub kind: FlipKind,
}

/// A set of edge flips, stored as one Pauli per touched edge.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorSet {
    flips: BTreeMap<EdgeId, Pauli>,
}

impl ErrorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_flips(flips: impl IntoIterator<Item = EdgeFlip>) -> Self {
        let mut s = ErrorSet::new();
        for f in flips {
            s.add_flip(f);
        }
        s
    }

    pub fn from_paulis(ps: impl IntoIterator<Item = (EdgeId, Pauli)>) -> Self {
        let mut s = ErrorSet::new();
        for (e, p) in ps {
            s.add_pauli(e, p);
        }
        s
    }

    /// Toggles a flip: adding the same flip twice cancels it.
    pub fn add_flip(&mut self, f: EdgeFlip) {
        let p = match f.kind {
            FlipKind::X => Pauli::X,
            FlipKind::Z => Pauli::Z,
        };
        self.add_pauli(f.edge, p);
    }

    pub fn add_pauli(&mut self, e: EdgeId, p: Pauli) {
        let cur = self.flips.get(&e).copied().unwrap_or(Pauli::I);
        let next = Pauli::from_bits(cur.x_bit() ^ p.x_bit(), cur.z_bit() ^ p.z_bit());
        if next == Pauli::I {
            self.flips.remove(&e);
        } else {
            self.flips.insert(e, next);
        }
    }

    /// Number of distinct edges touched.
    pub fn weight(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    pub fn paulis(&self) -> Vec<(EdgeId, Pauli)> {
        self.flips.iter().map(|(&e, &p)| (e, p)).collect()
    }

    pub fn get(&self, e: EdgeId) -> Pauli {
        self.flips.get(&e).copied().unwrap_or(Pauli::I)
    }

    pub fn flips(&self) -> Vec<EdgeFlip> {
        let mut out = Vec::new();
        for (&edge, &p) in &self.flips {
            if p.x_bit() {
                out.push(EdgeFlip { edge, kind: FlipKind::X });
            }
            if p.z_bit() {
                out.push(EdgeFlip { edge, kind: FlipKind::Z });
            }
        }
        out
    }

    pub fn to_text(&self, d: &ZXDiagram) -> String {
        let mut s = String::new();
        for (&e, &p) in &self.flips {
            let (a, b) = d.edges()[e];
            let _ = writeln!(s, "flip {a} {b} {}", p.as_char());
        }
        s
    }
}

impl fmt::Display for ErrorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.flips.iter().map(|(e, p)| format!("{}@{e}", p.as_char())).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `D + E`: pi spiders inserted on every flipped edge.
pub fn apply_error(d: &ZXDiagram, e: &ErrorSet) -> Result<ZXDiagram> {
    let mut out = d.clone();
    for (edge, p) in e.paulis() {
        if edge >= d.num_edges() {
            return Err(Error::UnknownEdge(edge));
        }
        insert_pauli(&mut out, edge, p)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    Trivial,
    Detectable,
    Live,
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorClass::Trivial => "trivial",
            ErrorClass::Detectable => "detectable",
            ErrorClass::Live => "live",
        })
    }
}

/// Classifies errors of one diagram against its compiled network.
#[derive(Clone, Debug)]
pub struct ErrorOracle {
    network: Network,
    base: LinearMap,
    tol: f64,
}

impl ErrorOracle {
    pub fn new(d: &ZXDiagram, cfg: &InterpretConfig, tol: f64) -> Result<Self> {
        let network = Network::new(d, cfg)?;
        let base = network.evaluate();
        Ok(ErrorOracle { network, base, tol })
    }

    pub fn base(&self) -> &LinearMap {
        &self.base
    }

    pub fn evaluate(&self, e: &ErrorSet) -> LinearMap {
        self.network.evaluate_with_flips(&e.paulis())
    }

    pub fn classify(&self, e: &ErrorSet) -> ErrorClass {
        let m = self.evaluate(e);
        if m.is_zero(self.tol) {
            ErrorClass::Detectable
        } else if equal_up_to_scalar(&m, &self.base, self.tol).unwrap_or(false) {
            ErrorClass::Trivial
        } else {
            ErrorClass::Live
        }
    }
}

pub fn classify_error(d: &ZXDiagram, e: &ErrorSet, tol: f64) -> Result<ErrorClass> {
    for (edge, _) in e.paulis() {
        if edge >= d.num_edges() {
            return Err(Error::UnknownEdge(edge));
        }
    }
    Ok(ErrorOracle::new(d, &InterpretConfig::default(), tol)?.classify(e))
}

/// Whether `e` anticommutes with region `w`: a Z highlight catches X
/// flips and an X highlight catches Z flips.
pub fn odd_overlap(w: &PauliWeb, e: &ErrorSet) -> bool {
    let mut parity = false;
    for (edge, p) in e.paulis() {
        let h = w.get(edge);
        parity ^= (h.z_bit() && p.x_bit()) ^ (h.x_bit() && p.z_bit());
    }
    parity
}

/// Detector error matrix over a fixed list of edges. Columns are the X
/// flips of every listed edge followed by the Z flips.
#[derive(Clone, Debug)]
pub struct DetectorErrorMatrix {
    pub edges: Vec<EdgeId>,
    pub matrix: BitMatrix,
}

impl DetectorErrorMatrix {
    pub fn num_regions(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn error_vector(&self, e: &ErrorSet) -> BitVec {
        let n = self.edges.len();
        let mut v = BitVec::zeros(2 * n);
        for (i, &edge) in self.edges.iter().enumerate() {
            let p = e.get(edge);
            v.set(i, p.x_bit());
            v.set(n + i, p.z_bit());
        }
        v
    }

    pub fn error_from_vector(&self, v: &BitVec) -> ErrorSet {
        let n = self.edges.len();
        let mut e = ErrorSet::new();
        for (i, &edge) in self.edges.iter().enumerate() {
            let p = Pauli::from_bits(v.get(i), v.get(n + i));
            if p != Pauli::I {
                e.add_pauli(edge, p);
            }
        }
        e
    }

    pub fn syndrome(&self, v: &BitVec) -> BitVec {
        self.matrix.mul_vec(v)
    }

    pub fn syndrome_of(&self, e: &ErrorSet) -> BitVec {
        self.syndrome(&self.error_vector(e))
    }
}

/// Builds the detector matrix over the internal edges of `d`.
pub fn detector_matrix(d: &ZXDiagram, regions: &[PauliWeb]) -> Result<DetectorErrorMatrix> {
    detector_matrix_on(d, regions, d.internal_edges())
}

pub fn detector_matrix_on(d: &ZXDiagram, regions: &[PauliWeb], edges: Vec<EdgeId>) -> Result<DetectorErrorMatrix> {
    let n = edges.len();
    let mut m = BitMatrix::new(2 * n);
    for (ri, w) in regions.iter().enumerate() {
        if !is_web(d, w) {
            return Err(Error::NotDetecting(format!("region {ri} is not a Pauli web")));
        }
        if d.boundary()
            .iter()
            .filter_map(|&b| d.boundary_edge(b))
            .any(|e| w.get(e) != Pauli::I)
        {
            return Err(Error::NotDetecting(format!("region {ri} highlights a boundary edge")));
        }
        let mut row = BitVec::zeros(2 * n);
        for (i, &e) in edges.iter().enumerate() {
            let h = w.get(e);
            row.set(i, h.z_bit());
            row.set(n + i, h.x_bit());
        }
        m.push_row(row);
    }
    Ok(DetectorErrorMatrix { edges, matrix: m })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    /// `None` when no live error exists up to `w_max`.
    pub distance: Option<usize>,
    pub w_max: usize,
    pub witness: Option<ErrorSet>,
}

impl DistanceReport {
    pub fn to_text(&self, d: &ZXDiagram) -> String {
        let mut s = match self.distance {
            Some(k) => format!("distance {k}\n"),
            None => format!("distance >{}\n", self.w_max),
        };
        if let Some(w) = &self.witness {
            s.push_str(&w.to_text(d));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct DistanceOptions {
    pub w_max: usize,
    /// Restrict error support to these edges; all edges when `None`.
    pub window: Option<Vec<EdgeId>>,
    pub tol: f64,
    pub interpret: InterpretConfig,
    /// Refuse to enumerate more candidates than this.
    pub limit: u128,
}

impl DistanceOptions {
    pub fn new(w_max: usize) -> Self {
        DistanceOptions {
            w_max,
            window: None,
            tol: crate::tensor::DEFAULT_TOL,
            interpret: InterpretConfig::default(),
            limit: 50_000_000,
        }
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k as u128 {
        r = r * (n as u128 - i) / (i + 1);
    }
    r
}

/// Letters in enumeration order for one touched edge.
pub const FLIP_ORDER: [Pauli; 3] = [Pauli::X, Pauli::Z, Pauli::Y];

/// The `code`-th letter assignment over `support`, first edge varying
/// slowest.
pub fn assignment(support: &[EdgeId], mut code: usize) -> ErrorSet {
    let mut letters = vec![Pauli::I; support.len()];
    for slot in letters.iter_mut().rev() {
        *slot = FLIP_ORDER[code % 3];
        code /= 3;
    }
    ErrorSet::from_paulis(support.iter().copied().zip(letters))
}

/// Least weight of a live error, searching supports in lexicographic
/// order and then flip kinds. Errors that anticommute with a detecting
/// region are skipped without contraction.
pub fn zx_distance(d: &ZXDiagram, opts: &DistanceOptions) -> Result<DistanceReport> {
    let oracle = ErrorOracle::new(d, &opts.interpret, opts.tol)?;
    let edges: Vec<EdgeId> = match &opts.window {
        Some(w) => {
            for &e in w {
                if e >= d.num_edges() {
                    return Err(Error::UnknownEdge(e));
                }
            }
            w.clone()
        }
        None => (0..d.num_edges()).collect(),
    };
    let total: u128 = (1..=opts.w_max).map(|w| binom(edges.len(), w) * 3u128.pow(w as u32)).sum();
    if total > opts.limit {
        return Err(Error::EnumerationTooLarge {
            candidates: total,
            limit: opts.limit,
        });
    }
    let regions = detecting_basis(d);
    let dm = detector_matrix_on(d, &regions, (0..d.num_edges()).collect())?;
    for w in 1..=opts.w_max {
        let supports: Vec<Vec<EdgeId>> = combinations(edges.len(), w)
            .into_iter()
            .map(|c| c.into_iter().map(|i| edges[i]).collect())
            .collect();
        let hit = supports.par_iter().find_map_first(|support| {
            (0..3usize.pow(w as u32)).find_map(|code| {
                let e = assignment(support, code);
                if !dm.syndrome_of(&e).is_zero() {
                    return None;
                }
                (oracle.classify(&e) == ErrorClass::Live).then_some(e)
            })
        });
        if let Some(e) = hit {
            return Ok(DistanceReport {
                distance: Some(w),
                w_max: opts.w_max,
                witness: Some(e),
            });
        }
    }
    Ok(DistanceReport {
        distance: None,
        w_max: opts.w_max,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::VertexKind;
    use crate::phase::Phase;
    use crate::tensor::DEFAULT_TOL;

    #[test]
    fn y_counts_once() {
        let e = ErrorSet::from_flips([
            EdgeFlip { edge: 3, kind: FlipKind::X },
            EdgeFlip { edge: 3, kind: FlipKind::Z },
            EdgeFlip { edge: 5, kind: FlipKind::Z },
        ]);
        assert_eq!(e.weight(), 2);
        assert_eq!(e.get(3), Pauli::Y);
    }

    #[test]
    fn empty_error_leaves_diagram() {
        let d = ZXDiagram::identity(2);
        assert_eq!(apply_error(&d, &ErrorSet::new()).unwrap(), d);
    }

    #[test]
    fn flip_on_wire_is_live() {
        let d = ZXDiagram::identity(1);
        let e = ErrorSet::from_paulis([(0, Pauli::X)]);
        assert_eq!(classify_error(&d, &e, DEFAULT_TOL).unwrap(), ErrorClass::Live);
        let r = zx_distance(&d, &DistanceOptions::new(2)).unwrap();
        assert_eq!(r.distance, Some(1));
        assert_eq!(r.to_text(&d).lines().next(), Some("distance 1"));
    }

    #[test]
    fn x_flip_into_z_state_is_trivial() {
        // a Z leaf is |+>, which absorbs X
        let mut d = ZXDiagram::new();
        let z = d.add_z();
        let o = d.add_output();
        d.add_edge(z, o);
        let e = ErrorSet::from_paulis([(0, Pauli::X)]);
        assert_eq!(classify_error(&d, &e, DEFAULT_TOL).unwrap(), ErrorClass::Trivial);
        let e = ErrorSet::from_paulis([(0, Pauli::Z)]);
        assert_eq!(classify_error(&d, &e, DEFAULT_TOL).unwrap(), ErrorClass::Live);
    }

    #[test]
    fn apply_error_inserts_pi_spiders() {
        let d = ZXDiagram::identity(1);
        let e = ErrorSet::from_paulis([(0, Pauli::Y)]);
        let de = apply_error(&d, &e).unwrap();
        let pis: Vec<_> = de.vertices().filter(|(_, v)| v.phase == Phase::PI).map(|(_, v)| v.kind).collect();
        assert_eq!(pis, vec![VertexKind::Z, VertexKind::X]);
    }

    #[test]
    fn unknown_edge_rejected() {
        let d = ZXDiagram::identity(1);
        let e = ErrorSet::from_paulis([(4, Pauli::X)]);
        assert_eq!(apply_error(&d, &e), Err(Error::UnknownEdge(4)));
    }

    #[test]
    fn empty_detector_matrix() {
        let d = ZXDiagram::identity(1);
        let m = detector_matrix(&d, &[]).unwrap();
        assert_eq!(m.num_regions(), 0);
        assert!(m.syndrome_of(&ErrorSet::from_paulis([(0, Pauli::X)])).is_zero());
    }

    #[test]
    fn assignment_order() {
        let e = assignment(&[2, 5], 1);
        assert_eq!(e.paulis(), vec![(2, Pauli::X), (5, Pauli::Z)]);
        assert_eq!(assignment(&[2, 5], 3).paulis(), vec![(2, Pauli::Z), (5, Pauli::X)]);
    }
}
