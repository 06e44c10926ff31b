//! Instantaneous stabiliser groups of circuits, without signs.
//!
//! Qubits start maximally mixed unless their first operation prepares
//! them. Measurements are tracked as group updates only; outcomes are
//! irrelevant to group sizes and distances.

use rayon::prelude::*;

use crate::circuit::{Basis, Circuit, Op};
use crate::error::{Error, Result};
use crate::gf2::RowSpace;
use crate::pauli::{combinations, Pauli, PauliString};
use crate::tensor::interpret;
use crate::web::WebAnalysis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabiliserTableau {
    n: usize,
    live: Vec<bool>,
    /// Independent generators.
    gens: Vec<PauliString>,
    /// Operations applied so far.
    pub t: usize,
}

fn basis_pauli(b: Basis) -> Pauli {
    match b {
        Basis::Z => Pauli::Z,
        Basis::X => Pauli::X,
    }
}

impl StabiliserTableau {
    /// The empty group on `n` qubits, of which `live` hold a state.
    pub fn new(n: usize, live: &[usize]) -> Self {
        let mut l = vec![false; n];
        for &q in live {
            l[q] = true;
        }
        StabiliserTableau {
            n,
            live: l,
            gens: Vec::new(),
            t: 0,
        }
    }

    /// Start state of a circuit: its input qubits live, nothing stabilised.
    pub fn for_circuit(c: &Circuit) -> Self {
        StabiliserTableau::new(c.qubits, &c.input_qubits())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn live_qubits(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.live[q]).collect()
    }

    /// Number of logical qubits: live qubits minus independent generators.
    pub fn num_logical(&self) -> usize {
        self.live_qubits().len() - self.rank()
    }

    fn span(&self) -> RowSpace {
        let v: Vec<_> = self.gens.iter().map(PauliString::symplectic).collect();
        RowSpace::from_vectors(2 * self.n, v.iter())
    }

    /// Whether `p` is in the group, up to sign.
    pub fn contains(&self, p: &PauliString) -> bool {
        self.span().contains(&p.symplectic())
    }

    pub fn measure(&mut self, p: &PauliString) {
        let anti: Vec<usize> = (0..self.gens.len()).filter(|&i| !self.gens[i].commutes_with(p)).collect();
        if let Some((&g, rest)) = anti.split_first() {
            let pivot = self.gens[g].clone();
            for &i in rest {
                self.gens[i].mul_assign(&pivot);
            }
            self.gens[g] = p.clone();
        } else if !p.is_identity() && !self.contains(p) {
            self.gens.push(p.clone());
        }
    }

    /// Traces out qubit `q`: keeps the elements acting trivially on it.
    fn discard(&mut self, q: usize) {
        let mut pivots = Vec::new();
        for bit in [0, 1] {
            let has = |g: &PauliString| if bit == 0 { g.get(q).x_bit() } else { g.get(q).z_bit() };
            let Some(pv) = (0..self.gens.len()).find(|i| !pivots.contains(i) && has(&self.gens[*i])) else {
                continue;
            };
            let pg = self.gens[pv].clone();
            for i in 0..self.gens.len() {
                if i != pv && has(&self.gens[i]) {
                    self.gens[i].mul_assign(&pg);
                }
            }
            pivots.push(pv);
        }
        pivots.sort_unstable();
        for i in pivots.into_iter().rev() {
            self.gens.remove(i);
        }
        self.live[q] = false;
    }

    fn check_live(&self, op: &Op) -> Result<()> {
        match op.qubits().into_iter().find(|&q| q >= self.n || !self.live[q]) {
            Some(q) => Err(Error::Schedule(format!("'{op}' touches dead qubit {q}"))),
            None => Ok(()),
        }
    }

    pub fn apply(&mut self, op: &Op) -> Result<()> {
        self.t += 1;
        let n = self.n;
        match op {
            Op::Prep(b, q) => {
                if *q >= n || self.live[*q] {
                    return Err(Error::Schedule(format!("'{op}' on a live qubit")));
                }
                self.live[*q] = true;
                self.measure(&PauliString::single(n, *q, basis_pauli(*b)));
                return Ok(());
            }
            Op::Mp(p) if p.num_qubits() != n => {
                return Err(Error::Schedule(format!("'{op}' has the wrong length")));
            }
            Op::Tick => return Ok(()),
            _ => self.check_live(op)?,
        }
        match op {
            Op::Destroy(b, q) => {
                self.measure(&PauliString::single(n, *q, basis_pauli(*b)));
                self.discard(*q);
            }
            Op::M1(b, q) => self.measure(&PauliString::single(n, *q, basis_pauli(*b))),
            Op::M2(b, x, y) => {
                let mut p = PauliString::single(n, *x, basis_pauli(*b));
                p.set(*y, basis_pauli(*b));
                self.measure(&p);
            }
            Op::Mp(p) => self.measure(p),
            Op::Gate(c, q) => {
                for g in &mut self.gens {
                    let l = g.get(*q);
                    g.set(*q, c.conjugate(l));
                }
            }
            Op::Cx(c, t) => {
                for g in &mut self.gens {
                    let (pc, pt) = (g.get(*c), g.get(*t));
                    let xt = pt.x_bit() ^ pc.x_bit();
                    let zc = pc.z_bit() ^ pt.z_bit();
                    g.set(*c, Pauli::from_bits(pc.x_bit(), zc));
                    g.set(*t, Pauli::from_bits(xt, pt.z_bit()));
                }
            }
            Op::Swap(a, b) => {
                for g in &mut self.gens {
                    let (pa, pb) = (g.get(*a), g.get(*b));
                    g.set(*a, pb);
                    g.set(*b, pa);
                }
            }
            Op::Prep(..) | Op::Tick => unreachable!(),
        }
        Ok(())
    }

    /// Least weight of a logical operator on the live qubits, with the
    /// first one found. `None` when there are no logical qubits or none up
    /// to `max_weight`.
    pub fn distance(&self, max_weight: Option<usize>) -> Option<(usize, PauliString)> {
        if self.num_logical() == 0 {
            return None;
        }
        let live = self.live_qubits();
        let span = self.span();
        let top = max_weight.unwrap_or(live.len()).min(live.len());
        for w in 1..=top {
            let supports = combinations(live.len(), w);
            let hit = supports.par_iter().find_map_first(|s| {
                let qs: Vec<usize> = s.iter().map(|&i| live[i]).collect();
                (0..3usize.pow(w as u32)).find_map(|mut code| {
                    let mut p = PauliString::identity(self.n);
                    for &q in qs.iter().rev() {
                        p.set(q, [Pauli::X, Pauli::Z, Pauli::Y][code % 3]);
                        code /= 3;
                    }
                    let logical = self.gens.iter().all(|g| g.commutes_with(&p)) && !span.contains(&p.symplectic());
                    logical.then_some(p)
                })
            });
            if let Some(p) = hit {
                return Some((w, p));
            }
        }
        None
    }
}

/// The tableau after each prefix of `c`, starting with the empty prefix.
pub fn run(c: &Circuit) -> Result<Vec<StabiliserTableau>> {
    let mut t = StabiliserTableau::for_circuit(c);
    let mut out = vec![t.clone()];
    for op in &c.ops {
        t.apply(op)?;
        out.push(t.clone());
    }
    Ok(out)
}

/// Group sizes read two ways off one circuit: from its web spaces and
/// from the tableau after the last operation, all as log2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub stabilising_webs: usize,
    pub rank: usize,
    pub logical_webs: usize,
    /// log2 of the number of logical classes, `2k`.
    pub logical_classes: usize,
}

impl Agreement {
    pub fn holds(&self) -> bool {
        self.stabilising_webs == self.rank && self.logical_webs == self.logical_classes
    }
}

/// `None` when the post-selected circuit is the zero map.
pub fn web_agreement(c: &Circuit, tol: f64) -> Result<Option<Agreement>> {
    let d = c.to_diagram()?;
    if interpret(&d)?.is_zero(tol) {
        return Ok(None);
    }
    let a = WebAnalysis::new(&d);
    let t = run(c)?.pop().unwrap();
    Ok(Some(Agreement {
        stabilising_webs: a.stabilising_classes_log2(),
        rank: t.rank(),
        logical_webs: a.logical_classes_log2(),
        logical_classes: 2 * t.num_logical(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn circuit(text: &str) -> Circuit {
        Circuit::from_text(text).unwrap()
    }

    #[test]
    fn four_two_two_from_measurements() {
        let c = circuit("qubits 4\nMP XXXX\nMP ZZZZ\n");
        let t = run(&c).unwrap().pop().unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(t.num_logical(), 2);
        assert_eq!(t.distance(None).unwrap().0, 2);
        assert!(t.contains(&ps("XXXX")) && t.contains(&ps("ZZZZ")));
    }

    #[test]
    fn anticommuting_measurement_replaces() {
        let mut t = StabiliserTableau::new(2, &[0, 1]);
        t.measure(&ps("ZZ"));
        t.measure(&ps("XI"));
        assert_eq!(t.rank(), 1);
        assert!(t.contains(&ps("XI")) && !t.contains(&ps("ZZ")));
        t.measure(&ps("XX"));
        assert_eq!(t.rank(), 2);
        t.measure(&ps("IX"));
        assert_eq!(t.rank(), 2);
    }

    #[test]
    fn cnot_copies_parities() {
        let c = circuit("qubits 3\nPZ 2\nCX 0 2\nCX 1 2\nM1Z 2\n");
        let t = run(&c).unwrap().pop().unwrap();
        assert!(t.contains(&ps("ZZI")));
        assert!(t.contains(&ps("IIZ")));
        assert_eq!(t.num_logical(), 1);
    }

    #[test]
    fn destroy_keeps_what_avoids_the_qubit() {
        let c = circuit("qubits 3\nPZ 2\nCX 0 2\nCX 1 2\nDZ 2\n");
        let t = run(&c).unwrap().pop().unwrap();
        assert_eq!(t.live_qubits(), vec![0, 1]);
        assert_eq!(t.generators(), &[ps("ZZI")]);
    }

    #[test]
    fn gates_conjugate() {
        let c = circuit("qubits 2\nMP ZX\nC 0 H\nC 1 S\nSWAP 0 1\n");
        let t = run(&c).unwrap().pop().unwrap();
        assert!(t.contains(&ps("YX")));
    }

    #[test]
    fn trivial_code_has_distance_one() {
        let t = StabiliserTableau::new(1, &[0]);
        assert_eq!(t.distance(None).unwrap().0, 1);
        let mut t = StabiliserTableau::new(1, &[0]);
        t.measure(&ps("Z"));
        assert_eq!(t.distance(None), None);
    }

    #[test]
    fn five_qubit_code_distance() {
        let c = circuit("qubits 5\nMP XZZXI\nMP IXZZX\nMP XIXZZ\nMP ZXIXZ\n");
        let t = run(&c).unwrap().pop().unwrap();
        assert_eq!(t.num_logical(), 1);
        assert_eq!(t.distance(None).unwrap().0, 3);
    }
    #[test]
    fn webs_agree_with_the_tableau_on_random_circuits() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen = 0;
        for _ in 0..100 {
            let c = crate::circuit::random_circuit(&mut rng, 3, 4);
            if let Some(a) = web_agreement(&c, 1e-9).unwrap() {
                assert!(a.holds(), "{a:?}\n{}", c.to_text());
                seen += 1;
            }
        }
        assert!(seen > 50);
    }
}
