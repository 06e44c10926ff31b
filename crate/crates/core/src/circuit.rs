//! Circuits in low-weight Clifford and measurement form.
//!
//! Measurements are post-selected on the +1 outcome, matching the
//! diagrams they come from.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};

use crate::diagram::{VertexId, VertexKind, ZXDiagram};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    fn letter(self) -> char {
        match self {
            Basis::Z => 'Z',
            Basis::X => 'X',
        }
    }

    fn from_letter(c: char) -> Option<Basis> {
        match c {
            'Z' => Some(Basis::Z),
            'X' => Some(Basis::X),
            _ => None,
        }
    }

    /// Spider colour whose phase-free leaf is this basis' +1 eigenstate.
    pub fn leaf_colour(self) -> VertexKind {
        match self {
            Basis::Z => VertexKind::X,
            Basis::X => VertexKind::Z,
        }
    }

    /// Spider colour of a parity measurement in this basis.
    pub fn spider_colour(self) -> VertexKind {
        self.leaf_colour().dual()
    }
}

/// Named single-qubit Cliffords.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clifford1 {
    I,
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    Sx,
    Sxdg,
}

impl Clifford1 {
    pub const ALL: [Clifford1; 9] = [
        Clifford1::I,
        Clifford1::H,
        Clifford1::S,
        Clifford1::Sdg,
        Clifford1::X,
        Clifford1::Y,
        Clifford1::Z,
        Clifford1::Sx,
        Clifford1::Sxdg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Clifford1::I => "I",
            Clifford1::H => "H",
            Clifford1::S => "S",
            Clifford1::Sdg => "SDG",
            Clifford1::X => "X",
            Clifford1::Y => "Y",
            Clifford1::Z => "Z",
            Clifford1::Sx => "SX",
            Clifford1::Sxdg => "SXDG",
        }
    }

    pub fn from_name(s: &str) -> Option<Clifford1> {
        Clifford1::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Phase gate `exp(-i a/2 P)` up to global phase, for `P` the
    /// spider colour's Pauli.
    pub fn phase_gate(colour: VertexKind, phase: Phase) -> Clifford1 {
        let z = colour == VertexKind::Z;
        match (phase.quarter_turns(), z) {
            (0, _) => Clifford1::I,
            (1, true) => Clifford1::S,
            (2, true) => Clifford1::Z,
            (3, true) => Clifford1::Sdg,
            (1, false) => Clifford1::Sx,
            (2, false) => Clifford1::X,
            _ => Clifford1::Sxdg,
        }
    }

    /// Images of X and Z under conjugation, ignoring signs.
    pub fn conjugate(self, p: Pauli) -> Pauli {
        let (x, z) = (p.x_bit(), p.z_bit());
        let (x, z) = match self {
            Clifford1::H => (z, x),
            Clifford1::S | Clifford1::Sdg => (x, z ^ x),
            Clifford1::Sx | Clifford1::Sxdg => (x ^ z, z),
            _ => (x, z),
        };
        Pauli::from_bits(x, z)
    }

    /// Diagram pieces placed in sequence on a wire.
    pub(crate) fn pieces(self) -> Vec<(VertexKind, Phase)> {
        match self {
            Clifford1::I => vec![],
            Clifford1::H => vec![(VertexKind::H, Phase::ZERO)],
            Clifford1::Y => vec![(VertexKind::Z, Phase::PI), (VertexKind::X, Phase::PI)],
            Clifford1::S => vec![(VertexKind::Z, Phase::HALF_PI)],
            Clifford1::Sdg => vec![(VertexKind::Z, Phase::MINUS_HALF_PI)],
            Clifford1::Z => vec![(VertexKind::Z, Phase::PI)],
            Clifford1::Sx => vec![(VertexKind::X, Phase::HALF_PI)],
            Clifford1::Sxdg => vec![(VertexKind::X, Phase::MINUS_HALF_PI)],
            Clifford1::X => vec![(VertexKind::X, Phase::PI)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Prep(Basis, usize),
    /// Destructive measurement; ends the wire.
    Destroy(Basis, usize),
    Gate(Clifford1, usize),
    /// Control then target.
    Cx(usize, usize),
    M1(Basis, usize),
    M2(Basis, usize, usize),
    Swap(usize, usize),
    /// Measurement of an arbitrary Pauli string over all qubits. Used for
    /// the schedules of codes before Floquetification.
    Mp(PauliString),
    /// Timestep boundary; no effect on the state.
    Tick,
}

impl Op {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Prep(_, q) | Op::Destroy(_, q) | Op::Gate(_, q) | Op::M1(_, q) => vec![*q],
            Op::Cx(a, b) | Op::M2(_, a, b) | Op::Swap(a, b) => vec![*a, *b],
            Op::Mp(p) => p.support(),
            Op::Tick => vec![],
        }
    }

    /// Number of qubits the operation acts on. A swap is wiring and counts
    /// as two.
    pub fn weight(&self) -> usize {
        self.qubits().len()
    }

    pub fn is_prep(&self) -> bool {
        matches!(self, Op::Prep(..))
    }

    pub fn is_destroy(&self) -> bool {
        matches!(self, Op::Destroy(..))
    }

    /// Rewrites qubit labels.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Op {
        match self {
            Op::Prep(b, q) => Op::Prep(*b, f(*q)),
            Op::Destroy(b, q) => Op::Destroy(*b, f(*q)),
            Op::Gate(c, q) => Op::Gate(*c, f(*q)),
            Op::Cx(a, b) => Op::Cx(f(*a), f(*b)),
            Op::M1(b, q) => Op::M1(*b, f(*q)),
            Op::M2(k, a, b) => Op::M2(*k, f(*a), f(*b)),
            Op::Swap(a, b) => Op::Swap(f(*a), f(*b)),
            Op::Mp(p) => {
                let n = p.num_qubits();
                let mut out = PauliString::identity(n);
                for q in p.support() {
                    out.set(f(q), p.get(q));
                }
                Op::Mp(out)
            }
            Op::Tick => Op::Tick,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Prep(b, q) => write!(f, "P{} {q}", b.letter()),
            Op::Destroy(b, q) => write!(f, "D{} {q}", b.letter()),
            Op::Gate(c, q) => write!(f, "C {q} {}", c.name()),
            Op::Cx(a, b) => write!(f, "CX {a} {b}"),
            Op::M1(b, q) => write!(f, "M1{} {q}", b.letter()),
            Op::M2(k, a, b) => write!(f, "M2{} {a} {b}", k.letter()),
            Op::Swap(a, b) => write!(f, "SWAP {a} {b}"),
            Op::Mp(p) => write!(f, "MP {p}"),
            Op::Tick => f.write_str("TICK"),
        }
    }
}

impl FromStr for Op {
    type Err = Error;

    fn from_str(s: &str) -> Result<Op> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::parse(0, format!("bad operation '{}'", s.trim()));
        let q = |i: usize| -> Result<usize> { toks.get(i).and_then(|t| t.parse().ok()).ok_or_else(bad) };
        let head = *toks.first().ok_or_else(bad)?;
        let arity = |n: usize| if toks.len() == n + 1 { Ok(()) } else { Err(bad()) };
        let basis = |c: Option<char>| c.and_then(Basis::from_letter).ok_or_else(bad);
        let op = match head {
            "TICK" => {
                arity(0)?;
                Op::Tick
            }
            "C" => {
                arity(2)?;
                Op::Gate(Clifford1::from_name(toks[2]).ok_or_else(bad)?, q(1)?)
            }
            "CX" => {
                arity(2)?;
                Op::Cx(q(1)?, q(2)?)
            }
            "SWAP" => {
                arity(2)?;
                Op::Swap(q(1)?, q(2)?)
            }
            "MP" => {
                arity(1)?;
                Op::Mp(toks[1].parse()?)
            }
            h if h.starts_with("M1") && h.len() == 3 => {
                arity(1)?;
                Op::M1(basis(h.chars().nth(2))?, q(1)?)
            }
            h if h.starts_with("M2") && h.len() == 3 => {
                arity(2)?;
                Op::M2(basis(h.chars().nth(2))?, q(1)?, q(2)?)
            }
            h if h.len() == 2 && (h.starts_with('P') || h.starts_with('D')) => {
                arity(1)?;
                let b = basis(h.chars().nth(1))?;
                if h.starts_with('P') {
                    Op::Prep(b, q(1)?)
                } else {
                    Op::Destroy(b, q(1)?)
                }
            }
            _ => return Err(bad()),
        };
        Ok(op)
    }
}

/// Parses op lines, skipping blanks and `#` comments. Line numbers in
/// errors are offset by `first_line`.
pub(crate) fn parse_ops<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Vec<Op>> {
    let mut ops = Vec::new();
    for (no, line) in lines {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let op: Op = line.parse().map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(no, msg),
            e => e,
        })?;
        ops.push(op);
    }
    Ok(ops)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub qubits: usize,
    pub ops: Vec<Op>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Circuit { qubits, ops: Vec::new() }
    }

    pub fn push(&mut self, op: Op) {
        self.ops.push(op);
    }

    /// Qubits live before the first operation: every qubit whose first
    /// operation is not a preparation.
    pub fn input_qubits(&self) -> Vec<usize> {
        (0..self.qubits)
            .filter(|&q| !self.ops.iter().find(|op| op.qubits().contains(&q)).is_some_and(Op::is_prep))
            .collect()
    }

    /// Qubits live after the last operation.
    pub fn output_qubits(&self) -> Vec<usize> {
        (0..self.qubits)
            .filter(|&q| {
                !self
                    .ops
                    .iter()
                    .rev()
                    .find(|op| op.qubits().contains(&q))
                    .is_some_and(Op::is_destroy)
            })
            .collect()
    }

    /// Checks qubit ranges and that preparations start wires and
    /// destructive measurements end them.
    pub fn validate(&self) -> Result<()> {
        let mut live: BTreeSet<usize> = self.input_qubits().into_iter().collect();
        for (i, op) in self.ops.iter().enumerate() {
            let qs = op.qubits();
            if let Op::Mp(p) = op {
                if p.num_qubits() != self.qubits {
                    return Err(Error::Schedule(format!("op {i}: '{op}' has the wrong length")));
                }
            }
            if qs.iter().any(|&q| q >= self.qubits) {
                return Err(Error::Schedule(format!("op {i}: '{op}' out of range")));
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::Schedule(format!("op {i}: '{op}' repeats a qubit")));
            }
            match op {
                Op::Prep(_, q) => {
                    if !live.insert(*q) {
                        return Err(Error::Schedule(format!("op {i}: '{op}' on a live qubit")));
                    }
                }
                Op::Destroy(_, q) => {
                    if !live.remove(q) {
                        return Err(Error::Schedule(format!("op {i}: '{op}' on a dead qubit")));
                    }
                }
                _ => {
                    if let Some(q) = qs.iter().find(|q| !live.contains(q)) {
                        return Err(Error::Schedule(format!("op {i}: '{op}' touches dead qubit {q}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest number of qubits any operation touches, ignoring swaps.
    pub fn max_weight(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| !matches!(op, Op::Swap(..)))
            .map(Op::weight)
            .max()
            .unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.qubits);
        for op in &self.ops {
            s.push_str(&op.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| {
            let l = l.split('#').next().unwrap().trim();
            !l.is_empty()
        });
        let (no, head) = lines.next().ok_or_else(|| Error::parse(1, "missing 'qubits' line"))?;
        let qubits = parse_qubits_line(no, head)?;
        let c = Circuit {
            qubits,
            ops: parse_ops(lines)?,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn then(&self, next: &Circuit) -> Result<Circuit> {
        if self.qubits != next.qubits {
            return Err(Error::ArityMismatch(format!(
                "{} qubits followed by {}",
                self.qubits, next.qubits
            )));
        }
        let mut c = self.clone();
        c.ops.extend(next.ops.iter().cloned());
        Ok(c)
    }

    pub fn to_diagram(&self) -> Result<ZXDiagram> {
        Ok(self.to_diagram_traced()?.0)
    }

    /// The diagram of the circuit, plus the vertices created for each
    /// operation.
    pub fn to_diagram_traced(&self) -> Result<(ZXDiagram, Vec<Vec<VertexId>>)> {
        self.validate()?;
        let mut d = ZXDiagram::new();
        let mut front: Vec<Option<VertexId>> = vec![None; self.qubits];
        for q in self.input_qubits() {
            front[q] = Some(d.add_input());
        }
        let mut trace = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let mut made = Vec::new();
            let step = |d: &mut ZXDiagram, front: &mut Vec<Option<VertexId>>, q: usize, kind, phase| {
                let v = d.add_vertex(kind, phase);
                d.add_edge(front[q].unwrap(), v);
                front[q] = Some(v);
                v
            };
            match op {
                Op::Prep(b, q) => {
                    let v = d.add_vertex(b.leaf_colour(), Phase::ZERO);
                    front[*q] = Some(v);
                    made.push(v);
                }
                Op::Destroy(b, q) => {
                    made.push(step(&mut d, &mut front, *q, b.leaf_colour(), Phase::ZERO));
                    front[*q] = None;
                }
                Op::Gate(c, q) => {
                    for (k, p) in c.pieces() {
                        made.push(step(&mut d, &mut front, *q, k, p));
                    }
                }
                Op::Cx(a, b) => {
                    let c = step(&mut d, &mut front, *a, VertexKind::Z, Phase::ZERO);
                    let t = step(&mut d, &mut front, *b, VertexKind::X, Phase::ZERO);
                    d.add_edge(c, t);
                    made.extend([c, t]);
                }
                Op::M1(b, q) => {
                    let s = step(&mut d, &mut front, *q, b.spider_colour(), Phase::ZERO);
                    let l = d.add_vertex(b.leaf_colour(), Phase::ZERO);
                    d.add_edge(s, l);
                    made.extend([s, l]);
                }
                Op::M2(b, x, y) => {
                    let k = b.spider_colour();
                    let s = step(&mut d, &mut front, *x, k, Phase::ZERO);
                    let t = step(&mut d, &mut front, *y, k, Phase::ZERO);
                    d.add_edge(s, t);
                    made.extend([s, t]);
                }
                Op::Swap(a, b) => front.swap(*a, *b),
                Op::Mp(p) => {
                    made = measure_fragment(&mut d, &mut front, p);
                }
                Op::Tick => {}
            }
            trace.push(made);
        }
        for f in front.iter().flatten() {
            let o = d.add_output();
            d.add_edge(*f, o);
        }
        Ok((d, trace))
    }
}

pub(crate) fn parse_qubits_line(no: usize, line: &str) -> Result<usize> {
    let toks: Vec<&str> = line.split('#').next().unwrap().split_whitespace().collect();
    match toks.as_slice() {
        ["qubits", n] => n.parse().map_err(|_| Error::parse(no, "bad qubit count")),
        _ => Err(Error::parse(no, "expected 'qubits <N>'")),
    }
}

/// Local Cliffords turning a Z measurement into a measurement of `p`:
/// applied before and after a Z-type measurement on that qubit.
pub fn dressing(p: Pauli) -> (Vec<Clifford1>, Vec<Clifford1>) {
    match p {
        Pauli::I | Pauli::Z => (vec![], vec![]),
        Pauli::X => (vec![Clifford1::H], vec![Clifford1::H]),
        Pauli::Y => (vec![Clifford1::Sdg, Clifford1::H], vec![Clifford1::H, Clifford1::S]),
    }
}

/// Post-selected measurement of `p`: a Z spider on each supported wire,
/// wrapped in its dressing, all joined to one X spider.
fn measure_fragment(d: &mut ZXDiagram, front: &mut [Option<VertexId>], p: &PauliString) -> Vec<VertexId> {
    let mut made = Vec::new();
    let centre = d.add_x();
    made.push(centre);
    for q in p.support() {
        let (pre, post) = dressing(p.get(q));
        let mut chain: Vec<(VertexKind, Phase)> = pre.iter().flat_map(|c| c.pieces()).collect();
        let at = chain.len();
        chain.push((VertexKind::Z, Phase::ZERO));
        chain.extend(post.iter().flat_map(|c| c.pieces()));
        for (i, (k, ph)) in chain.into_iter().enumerate() {
            let v = d.add_vertex(k, ph);
            d.add_edge(front[q].unwrap(), v);
            front[q] = Some(v);
            made.push(v);
            if i == at {
                d.add_edge(v, centre);
            }
        }
    }
    made
}

/// A random circuit on `1..=max_qubits` qubits with up to `max_ops`
/// operations, any of which may be a preparation, destructive
/// measurement, single-qubit Clifford, CNOT or parity measurement.
pub fn random_circuit(rng: &mut impl Rng, max_qubits: usize, max_ops: usize) -> Circuit {
    let n = rng.gen_range(1..=max_qubits.max(1));
    let len = rng.gen_range(0..=max_ops);
    let mut c = Circuit::new(n);
    let mut live = vec![true; n];
    let basis = |rng: &mut dyn RngCore| if rng.next_u32().is_multiple_of(2) { Basis::Z } else { Basis::X };
    while c.ops.len() < len {
        let q = rng.gen_range(0..n);
        let r = rng.gen_range(0..n);
        let op = match rng.gen_range(0..6) {
            0 if !live[q] => Op::Prep(basis(rng), q),
            1 if live[q] => Op::Destroy(basis(rng), q),
            2 if live[q] => Op::Gate(Clifford1::ALL[rng.gen_range(0..Clifford1::ALL.len())], q),
            3 if live[q] && live[r] && q != r => Op::Cx(q, r),
            4 if live[q] => Op::M1(basis(rng), q),
            5 if live[q] && live[r] && q != r => Op::M2(basis(rng), q, r),
            _ => continue,
        };
        match op {
            Op::Prep(..) => live[q] = true,
            Op::Destroy(..) => live[q] = false,
            _ => {}
        }
        c.push(op);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{equal_up_to_scalar, interpret, LinearMap, DEFAULT_TOL};
    use num_complex::Complex64;

    fn pauli_matrix(p: Pauli) -> LinearMap {
        let (o, i, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
        let e = match p {
            Pauli::I => vec![o, z, z, o],
            Pauli::X => vec![z, o, o, z],
            Pauli::Y => vec![z, -i, i, z],
            Pauli::Z => vec![o, z, z, -o],
        };
        LinearMap::new(1, 1, e).unwrap()
    }

    /// `(I + P) / 2` built directly from Pauli matrices.
    fn projector(p: &PauliString) -> LinearMap {
        let n = p.num_qubits();
        let mut m = pauli_matrix(p.get(0));
        for q in 1..n {
            m = m.kron(&pauli_matrix(p.get(q)));
        }
        LinearMap::from_fn(n, n, |r, c| {
            let id = if r == c { 1.0 } else { 0.0 };
            (Complex64::new(id, 0.0) + m.get(r, c)) * 0.5
        })
    }

    #[test]
    fn text_round_trip() {
        let text = "qubits 3\nPZ 2\nCX 0 2\nC 1 SDG\nM2X 0 1\nM1Z 2\nMP XYZ\nTICK\nSWAP 0 1\nDZ 2\n";
        let c = Circuit::from_text(text).unwrap();
        assert_eq!(c.to_text(), text);
        assert_eq!(c.input_qubits(), vec![0, 1]);
        assert_eq!(c.output_qubits(), vec![0, 1]);
    }

    #[test]
    fn rejects_bad_wiring() {
        assert!(Circuit::from_text("qubits 1\nC 0 H\nPZ 0\n").is_err());
        assert!(Circuit::from_text("qubits 1\nDZ 0\nC 0 H\n").is_err());
        assert!(Circuit::from_text("qubits 2\nCX 0 2\n").is_err());
        let e = Circuit::from_text("qubits 2\nCX 0 1\nFOO 1\n").unwrap_err();
        assert_eq!(e, Error::parse(3, "bad operation 'FOO 1'"));
    }

    #[test]
    fn measurement_fragments_are_projectors() {
        for s in ["Z", "X", "Y", "ZZ", "XY", "YZX"] {
            let p: PauliString = s.parse().unwrap();
            let mut c = Circuit::new(p.num_qubits());
            c.push(Op::Mp(p.clone()));
            let m = interpret(&c.to_diagram().unwrap()).unwrap();
            assert!(equal_up_to_scalar(&m, &projector(&p), DEFAULT_TOL).unwrap(), "{s}");
        }
    }

    #[test]
    fn low_weight_gates_match_their_matrices() {
        let cases = [
            (Op::M1(Basis::Z, 0), "ZI"),
            (Op::M1(Basis::X, 1), "IX"),
            (Op::M2(Basis::Z, 0, 1), "ZZ"),
            (Op::M2(Basis::X, 0, 1), "XX"),
        ];
        for (op, s) in cases {
            let c = Circuit { qubits: 2, ops: vec![op] };
            let m = interpret(&c.to_diagram().unwrap()).unwrap();
            assert!(equal_up_to_scalar(&m, &projector(&s.parse().unwrap()), DEFAULT_TOL).unwrap());
        }
        // CNOT, control first
        let c = Circuit {
            qubits: 2,
            ops: vec![Op::Cx(0, 1)],
        };
        let m = interpret(&c.to_diagram().unwrap()).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let cx = LinearMap::from_fn(2, 2, |r, col| {
            let t = if col >= 2 { col ^ 1 } else { col };
            if r == t {
                one
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(equal_up_to_scalar(&m, &cx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn clifford_conjugation_matches_matrices() {
        // U P U^dag against the table, for each gate and Pauli
        for g in Clifford1::ALL {
            let c = Circuit {
                qubits: 1,
                ops: vec![Op::Gate(g, 0)],
            };
            let u = interpret(&c.to_diagram().unwrap()).unwrap();
            for p in [Pauli::X, Pauli::Z] {
                let pm = pauli_matrix(p);
                // U P U^dag = image  <=>  U P = image U
                let lhs = pm.then(&u).unwrap();
                let rhs = u.then(&pauli_matrix(g.conjugate(p))).unwrap();
                assert!(equal_up_to_scalar(&lhs, &rhs, DEFAULT_TOL).unwrap(), "{g:?} {p:?}");
            }
        }
    }

    #[test]
    fn prep_and_destroy_bracket_a_wire() {
        let c = Circuit::from_text("qubits 2\nPZ 1\nCX 0 1\nDZ 1\n").unwrap();
        assert_eq!(c.input_qubits(), vec![0]);
        assert_eq!(c.output_qubits(), vec![0]);
        let m = interpret(&c.to_diagram().unwrap()).unwrap();
        // |0> on the ancilla, copy, post-select 0: projector onto |0>
        assert!(equal_up_to_scalar(&m, &projector(&"Z".parse().unwrap()), DEFAULT_TOL).unwrap());
    }
}
