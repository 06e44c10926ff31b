//! Decomposition of Pauli measurements of any weight into circuits of
//! single- and two-qubit operations.
//!
//! A measurement of `P` is a Z-parity measurement inside local Cliffords.
//! The parity spider is split into gadgets, one per adjacent pair of
//! supported qubits, each carried by an ancilla path.

use crate::circuit::{dressing, Circuit, Clifford1};
use crate::diagram::{EdgeId, Leg, Occurrence, VertexId, VertexKind, ZXDiagram};
use crate::error::{Error, Result};
use crate::flow::{add_leaf, extract_circuit, make_well_covered, reduce_degree, MCFlow, Rewritten};
use crate::pauli::PauliString;
use crate::phase::Phase;
use crate::rewrite::elim;

/// Local Cliffords reducing a Pauli measurement to a Z-parity measurement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalised {
    /// Qubits with a non-identity letter.
    pub support: Vec<usize>,
    /// Gates before and after the Z measurement, per supported qubit.
    pub pre: Vec<Vec<Clifford1>>,
    pub post: Vec<Vec<Clifford1>>,
}

impl Normalised {
    pub fn weight(&self) -> usize {
        self.support.len()
    }
}

pub fn normalise_pauli(p: &PauliString) -> Result<Normalised> {
    if p.is_identity() {
        return Err(Error::IdentityPauli);
    }
    let support = p.support();
    let (pre, post) = support.iter().map(|&q| dressing(p.get(q))).unzip();
    Ok(Normalised { support, pre, post })
}

/// Ancilla qubits the emitted circuit may use beyond the data qubits.
pub fn ancilla_bound(weight: usize) -> f64 {
    weight.div_ceil(2) as f64 + (weight as f64).log2()
}

fn edge_between(d: &ZXDiagram, a: VertexId, b: VertexId) -> Result<EdgeId> {
    d.edges_between(a, b)
        .first()
        .copied()
        .ok_or_else(|| Error::Flow(format!("no edge between {a} and {b}")))
}

/// Puts a phase-free spider on the edge between `a` and `b` with r_elim.
fn elim_on(d: &ZXDiagram, a: VertexId, b: VertexId, kind: VertexKind) -> Result<(ZXDiagram, VertexId)> {
    let rule = elim(kind)?;
    let e = edge_between(d, a, b)?;
    let occ = Occurrence {
        interior: vec![],
        legs: vec![Leg { edge: e, outside: a }, Leg { edge: e, outside: b }],
    };
    let sub = d.substitute(&occ, &rule.rhs)?;
    let s = sub.vertex_map[&rule.role("spider")[0]];
    Ok((sub.diagram, s))
}

/// The measurement of `p` as a diagram with a well-covered flow: one path
/// per qubit and one ancilla path per gadget.
pub fn decompose_measurement(p: &PauliString) -> Result<Rewritten> {
    let norm = normalise_pauli(p)?;
    let n = p.num_qubits();
    let w = norm.weight();
    let mut d = ZXDiagram::new();
    let ins: Vec<VertexId> = (0..n).map(|_| d.add_input()).collect();
    let centre = d.add_x();
    let mut wires: Vec<Vec<VertexId>> = ins.iter().map(|&i| vec![i]).collect();
    let mut zs = Vec::with_capacity(w);
    let mut audit = Vec::new();
    for (k, &q) in norm.support.iter().enumerate() {
        let mut chain: Vec<(VertexKind, Phase)> = norm.pre[k].iter().flat_map(|c| c.pieces()).collect();
        let at = chain.len();
        chain.push((VertexKind::Z, Phase::ZERO));
        chain.extend(norm.post[k].iter().flat_map(|c| c.pieces()));
        for (i, (kind, ph)) in chain.into_iter().enumerate() {
            let v = d.add_vertex(kind, ph);
            d.add_edge(*wires[q].last().unwrap(), v);
            wires[q].push(v);
            if i == at {
                d.add_edge(v, centre);
                zs.push(v);
            }
        }
    }
    for wire in &mut wires {
        let o = d.add_output();
        d.add_edge(*wire.last().unwrap(), o);
        wire.push(o);
    }

    let mut xs = Vec::with_capacity(w);
    for (k, &z) in zs.iter().enumerate() {
        let (nd, x) = elim_on(&d, z, centre, VertexKind::X)?;
        d = nd;
        xs.push(x);
        audit.push(format!("r_elim: X spider {x} between qubit {} and the centre", norm.support[k]));
    }
    let mut centre = centre;
    let mut gadgets = Vec::new();
    for j in 0..w.div_ceil(2) {
        let (a, b) = (2 * j, 2 * j + 1);
        let start = if b < w {
            let (nd, x, leaf) = add_leaf(&d, xs[a])?;
            d = nd;
            xs[a] = x;
            audit.push(format!("r_fuse: ancilla leaf {leaf} on spider {x}"));
            leaf
        } else {
            let (nd, c, leaf) = add_leaf(&d, centre)?;
            d = nd;
            centre = c;
            audit.push(format!("r_fuse: padding leaf {leaf} on the centre"));
            leaf
        };
        let last = if b < w { b } else { a };
        let (nd, x, end) = add_leaf(&d, xs[last])?;
        d = nd;
        xs[last] = x;
        audit.push(format!("r_fuse: ancilla leaf {end} on spider {x}"));
        gadgets.push((start, a, last, end));
    }
    let mut paths = wires;
    for (start, a, last, end) in gadgets {
        let path = if a == last {
            vec![start, centre, xs[a], end]
        } else {
            vec![start, xs[a], centre, xs[last], end]
        };
        paths.push(path);
    }
    let flow = MCFlow::from_paths(&d, paths)?;
    let rep = crate::flow::verify_flow(&d, &flow);
    if !rep.is_well_covered() {
        return Err(Error::Flow(format!("decomposition lost its flow:\n{rep}")));
    }
    Ok(Rewritten {
        diagram: d,
        flow,
        audit,
    })
}

/// A measurement circuit for `p` on qubits `0..n` plus ancillas from `n`.
pub fn measurement_circuit_for(p: &PauliString) -> Result<Circuit> {
    Ok(synthesise(p)?.0)
}

/// The circuit and the rewrites that produced it.
pub fn synthesise(p: &PauliString) -> Result<(Circuit, Vec<String>)> {
    let dec = decompose_measurement(p)?;
    let wc = make_well_covered(&dec.diagram, &dec.flow)?;
    let red = reduce_degree(&wc.diagram, &wc.flow)?;
    let c = extract_circuit(&red.diagram, &red.flow)?;
    let mut audit = dec.audit;
    audit.extend(wc.audit);
    audit.extend(red.audit);
    let w = p.weight() as f64;
    let extra = (c.qubits - p.num_qubits()) as f64;
    if extra > ancilla_bound(p.weight()) + 1e-9 {
        return Err(Error::Flow(format!(
            "{extra} ancillas for weight {w}, above the bound {:.3}",
            ancilla_bound(p.weight())
        )));
    }
    Ok((c, audit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Op;
    use crate::flow::verify_flow;
    use crate::pauli::Pauli;
    use crate::tensor::{equal_up_to_scalar, interpret, LinearMap, DEFAULT_TOL};
    use num_complex::Complex64;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one(m: [Complex64; 4]) -> LinearMap {
        LinearMap::new(1, 1, m.to_vec()).unwrap()
    }

    fn pauli_matrix(p: Pauli) -> LinearMap {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        match p {
            Pauli::I => one([o, z, z, o]),
            Pauli::X => one([z, o, o, z]),
            Pauli::Y => one([z, c(0.0, -1.0), c(0.0, 1.0), z]),
            Pauli::Z => one([o, z, z, -o]),
        }
    }

    fn gate_matrix(g: Clifford1) -> LinearMap {
        let (o, z, h) = (c(1.0, 0.0), c(0.0, 0.0), c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        match g {
            Clifford1::H => one([h, h, h, -h]),
            Clifford1::S => one([o, z, z, c(0.0, 1.0)]),
            Clifford1::Sdg => one([o, z, z, c(0.0, -1.0)]),
            Clifford1::I => one([o, z, z, o]),
            other => panic!("not used in dressings: {other:?}"),
        }
    }

    fn kron_all(ms: Vec<LinearMap>) -> LinearMap {
        ms.into_iter().reduce(|a, b| a.kron(&b)).unwrap()
    }

    /// `(I + P) / 2` from Pauli matrices.
    fn projector(p: &PauliString) -> LinearMap {
        let n = p.num_qubits();
        let m = kron_all(p.letters().into_iter().map(pauli_matrix).collect());
        LinearMap::from_fn(n, n, |r, col| {
            let id = if r == col { 1.0 } else { 0.0 };
            (c(id, 0.0) + m.get(r, col)) * 0.5
        })
    }

    #[test]
    fn dressings_conjugate_z_to_the_letter() {
        let p = ps("ZYX");
        let norm = normalise_pauli(&p).unwrap();
        assert_eq!(norm.support, vec![0, 1, 2]);
        assert!(norm.pre[0].is_empty() && norm.post[0].is_empty());
        // post . Z . pre on each qubit, as an 8x8 matrix identity
        let mut per = Vec::new();
        for k in 0..3 {
            let mut m = LinearMap::identity(1);
            for &g in &norm.pre[k] {
                m = m.then(&gate_matrix(g)).unwrap();
            }
            m = m.then(&pauli_matrix(Pauli::Z)).unwrap();
            for &g in &norm.post[k] {
                m = m.then(&gate_matrix(g)).unwrap();
            }
            per.push(m);
        }
        let lhs = kron_all(per);
        let rhs = kron_all(p.letters().into_iter().map(pauli_matrix).collect());
        assert!(equal_up_to_scalar(&lhs, &rhs, DEFAULT_TOL).unwrap());
        assert_eq!(normalise_pauli(&ps("XXXX")).unwrap().pre, vec![vec![Clifford1::H]; 4]);
        assert_eq!(normalise_pauli(&ps("ZZZZ")).unwrap().weight(), 4);
        assert_eq!(normalise_pauli(&ps("III")), Err(Error::IdentityPauli));
    }

    #[test]
    fn decomposition_paths_and_semantics() {
        for (s, paths) in [("ZZ", 3), ("ZZZZ", 6), ("ZZZ", 5), ("ZIXZY", 7), ("Z", 2)] {
            let p = ps(s);
            let r = decompose_measurement(&p).unwrap();
            assert_eq!(r.flow.paths.len(), paths, "{s}");
            assert!(verify_flow(&r.diagram, &r.flow).is_well_covered());
            assert!(
                equal_up_to_scalar(&interpret(&r.diagram).unwrap(), &projector(&p), DEFAULT_TOL).unwrap(),
                "{s}"
            );
        }
        let r = decompose_measurement(&ps("ZZZZZZZZZ")).unwrap();
        assert_eq!(r.flow.paths.len(), 9 + 5);
    }

    #[test]
    fn weight_four_circuit_has_six_qubits() {
        let p = ps("ZZZZ");
        let c = measurement_circuit_for(&p).unwrap();
        assert_eq!(c.qubits, 6);
        assert!(c.max_weight() <= 2);
        assert!(!c.ops.iter().any(|op| matches!(op, Op::Swap(..))));
        assert!(equal_up_to_scalar(&interpret(&c.to_diagram().unwrap()).unwrap(), &projector(&p), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn weight_two_is_a_single_gadget() {
        let c = measurement_circuit_for(&ps("ZZ")).unwrap();
        assert_eq!(c.qubits, 3);
        assert_eq!(c.ops.iter().filter(|op| op.is_prep()).count(), 1);
    }

    #[test]
    fn circuits_match_projectors_and_bound() {
        for s in ["X", "YY", "XZX", "ZZZZ", "XYZXY", "ZZZZZZ", "XIZ"] {
            let p = ps(s);
            let c = measurement_circuit_for(&p).unwrap();
            assert!(c.max_weight() <= 2, "{s}");
            let m = interpret(&c.to_diagram().unwrap()).unwrap();
            assert!(equal_up_to_scalar(&m, &projector(&p), DEFAULT_TOL).unwrap(), "{s}");
        }
    }

    #[test]
    fn weight_nine_respects_the_bound() {
        let p = ps("ZZZZZZZZZ");
        let c = measurement_circuit_for(&p).unwrap();
        assert!(c.qubits <= 9 + 5 + 4);
        assert!(c.max_weight() <= 2);
    }
}
