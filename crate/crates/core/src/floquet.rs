//! Floquetification: from a stabiliser code to a periodic schedule of
//! single- and two-qubit operations with the same logical count and
//! distance.

use std::collections::BTreeSet;
use std::fmt;

use crate::circuit::{parse_ops, parse_qubits_line, Circuit, Op};
use crate::diagram::{EdgeId, VertexId, ZXDiagram};
use crate::error::{Error, Result};
use crate::gf2::RowSpace;
use crate::pauli::PauliString;
use crate::synth::synthesise;
use crate::tableau::{run, StabiliserTableau};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabiliserCode {
    pub n: usize,
    pub generators: Vec<PauliString>,
}

impl StabiliserCode {
    /// Checks lengths, commutation and independence.
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        let mut span = RowSpace::new(2 * n);
        for (i, g) in generators.iter().enumerate() {
            if g.num_qubits() != n {
                return Err(Error::InvalidParameter(format!(
                    "generator {i} has {} qubits, expected {n}",
                    g.num_qubits()
                )));
            }
            if let Some(j) = (0..i).find(|&j| !generators[j].commutes_with(g)) {
                return Err(Error::NonCommuting(j, i));
            }
            if !span.insert(g.symplectic()) {
                return Err(Error::DependentGenerator(i));
            }
        }
        Ok(StabiliserCode { n, generators })
    }

    /// Largest generator weight.
    pub fn max_weight(&self) -> usize {
        self.generators.iter().map(PauliString::weight).max().unwrap_or(0)
    }

    pub fn k(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for g in &self.generators {
            s.push_str(&format!("{g}\n"));
        }
        s
    }
}

/// Reads `n <N>` followed by one generator per line. `#` starts a comment.
pub fn parse_code(text: &str) -> Result<StabiliserCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());
    let (no, head) = lines.next().ok_or_else(|| Error::parse(1, "missing 'n' line"))?;
    let n = match head.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", k] => k.parse::<usize>().map_err(|_| Error::parse(no, "bad qubit count"))?,
        _ => return Err(Error::parse(no, "expected 'n <N>'")),
    };
    let mut gens = Vec::new();
    for (no, line) in lines {
        let g: PauliString = line.parse().map_err(|_| Error::parse(no, format!("bad Pauli string '{line}'")))?;
        if g.num_qubits() != n {
            return Err(Error::parse(no, format!("'{line}' has length {}, expected {n}", g.num_qubits())));
        }
        gens.push(g);
    }
    StabiliserCode::new(n, gens)
}

/// One round of the code's measurements, a tick after each.
pub fn measurement_schedule(code: &StabiliserCode) -> PeriodicSchedule {
    let mut body = Vec::new();
    for g in &code.generators {
        body.push(Op::Mp(g.clone()));
        body.push(Op::Tick);
    }
    PeriodicSchedule {
        qubits: code.n,
        prologue: Vec::new(),
        body,
    }
}

/// `rounds` rounds of post-selected generator measurements.
pub fn measurement_circuit(code: &StabiliserCode, rounds: usize) -> Circuit {
    let mut c = Circuit::new(code.n);
    for _ in 0..rounds {
        for g in &code.generators {
            c.push(Op::Mp(g.clone()));
        }
    }
    c
}

pub fn build_measurement_circuit(code: &StabiliserCode, rounds: usize) -> Result<ZXDiagram> {
    if rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be at least 1".into()));
    }
    measurement_circuit(code, rounds).to_diagram()
}

/// The measurement circuit over `rounds` rounds, with the edges touching
/// round `round` (counted from zero). Errors restricted to those edges
/// see the code after establishment when rounds on both sides exist.
pub fn measurement_window(
    code: &StabiliserCode,
    rounds: usize,
    round: usize,
) -> Result<(ZXDiagram, Vec<Vec<VertexId>>, Vec<EdgeId>)> {
    if round >= rounds {
        return Err(Error::InvalidParameter(format!("round {round} of {rounds}")));
    }
    let (d, trace) = measurement_circuit(code, rounds).to_diagram_traced()?;
    let m = code.generators.len();
    let inside: BTreeSet<VertexId> = trace[round * m..(round + 1) * m].iter().flatten().copied().collect();
    let edges = (0..d.num_edges())
        .filter(|&e| {
            let (a, b) = d.edge(e).unwrap();
            inside.contains(&a) || inside.contains(&b)
        })
        .collect();
    Ok((d, trace, edges))
}

/// A finite prologue followed by a body repeated forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSchedule {
    pub qubits: usize,
    pub prologue: Vec<Op>,
    pub body: Vec<Op>,
}

impl PeriodicSchedule {
    /// The prologue followed by `periods` copies of the body.
    pub fn window(&self, periods: usize) -> Circuit {
        let mut ops = self.prologue.clone();
        for _ in 0..periods {
            ops.extend(self.body.iter().cloned());
        }
        Circuit {
            qubits: self.qubits,
            ops,
        }
    }

    /// Wiring checks on the prologue and two periods, and that every
    /// qubit live at the start of the body is live at its end.
    pub fn validate(&self) -> Result<()> {
        let one = self.window(1);
        one.validate()?;
        let two = self.window(2);
        two.validate()?;
        let body = Circuit {
            qubits: self.qubits,
            ops: self.body.clone(),
        };
        if body.input_qubits() != body.output_qubits() {
            return Err(Error::Schedule("body does not return to its live qubits".into()));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\nprologue:\n", self.qubits);
        for op in &self.prologue {
            s.push_str(&format!("{op}\n"));
        }
        s.push_str("body:\n");
        for op in &self.body {
            s.push_str(&format!("{op}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<PeriodicSchedule> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.split('#').next().unwrap().trim().is_empty())
            .collect();
        let (no, head) = *lines.first().ok_or_else(|| Error::parse(1, "missing 'qubits' line"))?;
        let qubits = parse_qubits_line(no, head)?;
        let label = |s: &str| s.split('#').next().unwrap().trim().to_string();
        let p = lines.iter().position(|(_, l)| label(l) == "prologue:");
        let b = lines.iter().position(|(_, l)| label(l) == "body:");
        let (p, b) = match (p, b) {
            (Some(p), Some(b)) if p == 1 && b > p => (p, b),
            _ => return Err(Error::parse(no, "expected 'prologue:' then 'body:' sections")),
        };
        let s = PeriodicSchedule {
            qubits,
            prologue: parse_ops(lines[p + 1..b].iter().copied())?,
            body: parse_ops(lines[b + 1..].iter().copied())?,
        };
        s.validate()?;
        Ok(s)
    }

    /// Runs the first body operation once up front and rotates the body.
    pub fn reorder(&self) -> Result<PeriodicSchedule> {
        let Some(first) = self.body.first() else {
            return Err(Error::EmptyBody);
        };
        let mut s = self.clone();
        s.prologue.push(first.clone());
        s.body.rotate_left(1);
        Ok(s)
    }

    /// The body repeated `k` times as one period.
    pub fn unroll(&self, k: usize) -> Result<PeriodicSchedule> {
        if k == 0 {
            return Err(Error::InvalidParameter("unroll factor must be at least 1".into()));
        }
        if self.body.is_empty() {
            return Err(Error::EmptyBody);
        }
        let mut s = self.clone();
        s.body = (0..k).flat_map(|_| self.body.iter().cloned()).collect();
        Ok(s)
    }

    pub fn has_swaps(&self) -> bool {
        self.prologue.iter().chain(&self.body).any(|op| matches!(op, Op::Swap(..)))
    }
}

/// Drops swaps and relabels the operations after them, until the
/// accumulated relabelling returns to where the body started.
fn strip_swaps(ops: &[Op], sigma: &mut [usize]) -> Vec<Op> {
    let mut out = Vec::new();
    for op in ops {
        match op {
            Op::Swap(a, b) => sigma.swap(*a, *b),
            _ => out.push(op.relabel(|q| sigma[q])),
        }
    }
    out
}

/// Shortest prefix whose repetition gives `body`.
fn minimal_period(body: &[Op]) -> &[Op] {
    let l = body.len();
    let p = (1..=l)
        .find(|&p| l.is_multiple_of(p) && (p..l).all(|i| body[i] == body[i - p]))
        .unwrap_or(0);
    &body[..p]
}

/// Absorbs swaps into wire labels. The body is unrolled by the order of
/// its net wire permutation, relabelled, and cut to its shortest period.
pub fn remove_swaps(s: &PeriodicSchedule) -> PeriodicSchedule {
    if !s.has_swaps() {
        return s.clone();
    }
    let mut sigma: Vec<usize> = (0..s.qubits).collect();
    let prologue = strip_swaps(&s.prologue, &mut sigma);
    let start = sigma.clone();
    let mut body = strip_swaps(&s.body, &mut sigma);
    while sigma != start {
        body.extend(strip_swaps(&s.body, &mut sigma));
    }
    PeriodicSchedule {
        qubits: s.qubits,
        prologue,
        body: minimal_period(&body).to_vec(),
    }
}

/// Tableaux after every step of a window, and when the code settled.
#[derive(Clone, Debug)]
pub struct Simulation {
    /// `tableaux[t]` is the group after the first `t` operations.
    pub tableaux: Vec<StabiliserTableau>,
    pub ops: Vec<Op>,
    pub period: usize,
    /// First step after which the logical count stays fixed for at least
    /// one full period to the end of the window.
    pub established: Option<usize>,
}

pub fn simulate(s: &PeriodicSchedule, periods: usize) -> Result<Simulation> {
    let c = s.window(periods.max(1));
    let tableaux = run(&c)?;
    let period = s.body.len();
    let ks: Vec<usize> = tableaux.iter().map(StabiliserTableau::num_logical).collect();
    let end = ks.len() - 1;
    let mut t = end;
    while t > 0 && ks[t - 1] == ks[end] {
        t -= 1;
    }
    let established = (period == 0 || end - t >= period).then_some(t);
    Ok(Simulation {
        tableaux,
        ops: c.ops,
        period,
        established,
    })
}

/// Periods simulated when reading off code parameters.
pub const WINDOW_PERIODS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    /// `None` when there is no logical qubit.
    pub d: Option<usize>,
    pub established: usize,
    /// A least-weight logical operator and the step where it occurs.
    pub witness: Option<(usize, PauliString)>,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            Some(d) => write!(f, "n={} k={} d={d}", self.n, self.k),
            None => write!(f, "n={} k={} d>{}", self.n, self.k, self.n),
        }
    }
}

/// Steps of one settled period where the distance is read: just after
/// each tick, or every step if the body has none.
fn sample_steps(sim: &Simulation, t: usize) -> Vec<usize> {
    if sim.period == 0 {
        return vec![t];
    }
    let range = t..t + sim.period;
    let ticks: Vec<usize> = range.clone().filter(|&i| i > 0 && sim.ops[i - 1] == Op::Tick).collect();
    if ticks.is_empty() {
        range.collect()
    } else {
        ticks
    }
}

fn least_distance(sim: &Simulation, steps: &[usize]) -> Option<(usize, usize, PauliString)> {
    steps
        .iter()
        .filter_map(|&i| sim.tableaux[i].distance(None).map(|(w, p)| (w, i, p)))
        .min_by_key(|(w, i, _)| (*w, *i))
}

pub fn code_params(s: &PeriodicSchedule) -> Result<CodeParams> {
    let sim = simulate(s, WINDOW_PERIODS)?;
    let t = sim.established.ok_or(Error::NotEstablished)?;
    let k = sim.tableaux[t].num_logical();
    let best = least_distance(&sim, &sample_steps(&sim, t));
    Ok(CodeParams {
        n: s.qubits,
        k,
        d: best.as_ref().map(|b| b.0),
        established: t,
        witness: best.map(|(_, i, p)| (i, p)),
    })
}

/// Least logical weight over every step of one settled period, ticks or
/// not. Mid-measurement states are included, so this can be lower than
/// the code distance.
pub fn distance_at_every_step(s: &PeriodicSchedule) -> Result<Option<usize>> {
    let sim = simulate(s, WINDOW_PERIODS)?;
    let t = sim.established.ok_or(Error::NotEstablished)?;
    let steps: Vec<usize> = (t..t + sim.period.max(1)).collect();
    Ok(least_distance(&sim, &steps).map(|b| b.0))
}

/// Merges each destructive measurement with the preparation that next
/// uses the same qubit into a single-qubit measurement. A pair that wraps
/// around the period leaves its preparation to the prologue.
fn merge_measure_prepare(s: &PeriodicSchedule, audit: &mut Vec<String>) -> Result<PeriodicSchedule> {
    let mut body: Vec<Option<Op>> = s.body.iter().cloned().map(Some).collect();
    let mut prologue = s.prologue.clone();
    for q in 0..s.qubits {
        let idx: Vec<usize> = (0..s.body.len()).filter(|&i| s.body[i].qubits().contains(&q)).collect();
        for (w, &i) in idx.iter().enumerate() {
            let (wrap, j) = match idx.get(w + 1) {
                Some(&j) => (false, j),
                None => (true, idx[0]),
            };
            let (Op::Destroy(b, _), Op::Prep(b2, _)) = (&s.body[i], &s.body[j]) else {
                continue;
            };
            if b != b2 {
                return Err(Error::Schedule(format!(
                    "'{}' is followed by '{}' on a different basis",
                    s.body[i], s.body[j]
                )));
            }
            body[i] = Some(Op::M1(*b, q));
            body[j] = None;
            if wrap {
                prologue.push(s.body[j].clone());
                audit.push(format!(
                    "reorder: '{}' (op {j}) runs once up front; r_pauli-1 across the period boundary: '{}' (op {i}) and the next period's preparation become '{}'",
                    s.body[j],
                    s.body[i],
                    Op::M1(*b, q)
                ));
            } else {
                audit.push(format!(
                    "r_pauli-1: '{}' (op {i}) and '{}' (op {j}) become '{}'",
                    s.body[i],
                    s.body[j],
                    Op::M1(*b, q)
                ));
            }
        }
    }
    let out = PeriodicSchedule {
        qubits: s.qubits,
        prologue,
        body: body.into_iter().flatten().collect(),
    };
    out.validate()?;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Floquetified {
    pub schedule: PeriodicSchedule,
    pub params: CodeParams,
    /// Qubits added on top of the code's own.
    pub ancillas: usize,
    /// Ancillas beyond one per generator pair, coming from degree
    /// reduction.
    pub extra: usize,
    pub audit: Vec<String>,
}

/// The schedule before measure/prepare merging: each generator's
/// synthesised circuit in file order, with a tick after each.
pub fn synthesised_round(code: &StabiliserCode, audit: &mut Vec<String>) -> Result<PeriodicSchedule> {
    let mut parts = Vec::new();
    for (i, g) in code.generators.iter().enumerate() {
        let (c, steps) = synthesise(g)?;
        audit.extend(steps.into_iter().map(|s| format!("generator {i} ({g}): {s}")));
        parts.push(c);
    }
    let qubits = parts.iter().map(|c| c.qubits).max().unwrap_or(code.n);
    let mut body = Vec::new();
    for c in parts {
        body.extend(c.ops);
        body.push(Op::Tick);
    }
    let s = PeriodicSchedule {
        qubits,
        prologue: Vec::new(),
        body,
    };
    s.validate()?;
    Ok(s)
}

pub fn floquetify(code: &StabiliserCode) -> Result<Floquetified> {
    let mut audit = vec![format!(
        "measurement circuit: {} generators per round on {} qubits, max weight {}",
        code.generators.len(),
        code.n,
        code.max_weight()
    )];
    let round = synthesised_round(code, &mut audit)?;
    let merged = merge_measure_prepare(&round, &mut audit)?;
    let swapless = remove_swaps(&merged);
    if swapless != merged {
        audit.push(format!(
            "remove_swaps: body of {} ops becomes {} ops",
            merged.body.len(),
            swapless.body.len()
        ));
    }
    let mut schedule = swapless;
    for op in schedule.prologue.drain(..) {
        audit.push(format!("prologue '{op}' left out of the emitted schedule"));
    }
    if let Some(op) = schedule.body.iter().find(|op| op.weight() > 2 || op.is_prep() || op.is_destroy()) {
        return Err(Error::Schedule(format!("'{op}' left in the body")));
    }
    schedule.validate()?;
    let params = code_params(&schedule)?;
    let ancillas = schedule.qubits - code.n;
    audit.push(format!("extracted schedule: {} qubits, body of {} ops; {params}", schedule.qubits, schedule.body.len()));
    Ok(Floquetified {
        ancillas,
        extra: ancillas.saturating_sub(code.max_weight().div_ceil(2)),
        schedule,
        params,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Basis, Clifford1};
    use crate::tensor::{equal_up_to_scalar, interpret, DEFAULT_TOL};

    const C422: &str = "n 4\nXXXX\nZZZZ\n";
    const C513: &str = "n 5\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n";

    #[test]
    fn parse_checks_commutation_and_independence() {
        let c = parse_code(C422).unwrap();
        assert_eq!((c.n, c.k(), c.max_weight()), (4, 2, 4));
        assert_eq!(parse_code(C513).unwrap().k(), 1);
        assert!(parse_code("n 2\nXX\nZZ\n").is_ok());
        assert!(parse_code("n 2\nXZ\nZX\n").is_ok());
        assert_eq!(parse_code("n 2\nXI\nZZ\n"), Err(Error::NonCommuting(0, 1)));
        assert_eq!(parse_code("n 2\nZZ\nZI\nIZ\n"), Err(Error::DependentGenerator(2)));
        assert_eq!(parse_code("n 2\nII\n"), Err(Error::DependentGenerator(0)));
        assert!(matches!(parse_code("n 2\nXXX\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_code("# c\nn 2\n\nZQ\n"), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn measurement_diagrams() {
        let c = parse_code(C422).unwrap();
        let one = build_measurement_circuit(&c, 1).unwrap();
        let two = build_measurement_circuit(&c, 2).unwrap();
        let a = interpret(&one).unwrap();
        let b = interpret(&two).unwrap();
        assert!(equal_up_to_scalar(&a, &b, DEFAULT_TOL).unwrap());
        assert!(equal_up_to_scalar(&a.then(&a).unwrap(), &a, DEFAULT_TOL).unwrap());
        let empty = parse_code("n 2\n").unwrap();
        let d = build_measurement_circuit(&empty, 1).unwrap();
        assert!(d.is_isomorphic(&ZXDiagram::identity(2)));
    }

    #[test]
    fn schedule_text_round_trip() {
        let s = PeriodicSchedule {
            qubits: 3,
            prologue: vec![Op::Prep(Basis::Z, 2)],
            body: vec![Op::Cx(0, 2), Op::M1(Basis::Z, 2), Op::Gate(Clifford1::H, 1), Op::Tick],
        };
        let t = s.to_text();
        assert_eq!(PeriodicSchedule::from_text(&t).unwrap(), s);
        assert!(PeriodicSchedule::from_text("qubits 1\nbody:\nC 0 H\n").is_err());
        assert!(PeriodicSchedule::from_text("qubits 2\nprologue:\nbody:\nDZ 1\n").is_err());
    }

    #[test]
    fn reorder_and_unroll() {
        let s = measurement_schedule(&parse_code(C422).unwrap());
        assert_eq!(s.unroll(1).unwrap(), s);
        let mut r = s.clone();
        for _ in 0..s.body.len() {
            r = r.reorder().unwrap();
        }
        assert_eq!(r.body, s.body);
        assert_eq!(r.prologue, s.body);
        let e = PeriodicSchedule {
            qubits: 1,
            prologue: vec![],
            body: vec![],
        };
        assert_eq!(e.reorder(), Err(Error::EmptyBody));
    }

    #[test]
    fn swaps_are_absorbed() {
        let single = PeriodicSchedule {
            qubits: 2,
            prologue: vec![],
            body: vec![Op::Swap(0, 1)],
        };
        assert!(remove_swaps(&single).body.is_empty());
        // a three-cycle: swapping three times returns every wire
        let body = vec![
            Op::M2(Basis::Z, 0, 1),
            Op::Swap(0, 1),
            Op::Swap(1, 2),
            Op::Tick,
        ];
        let s = PeriodicSchedule {
            qubits: 3,
            prologue: vec![],
            body,
        };
        let r = remove_swaps(&s);
        assert!(!r.has_swaps());
        assert_eq!(
            r.body,
            vec![
                Op::M2(Basis::Z, 0, 1),
                Op::Tick,
                Op::M2(Basis::Z, 1, 2),
                Op::Tick,
                Op::M2(Basis::Z, 2, 0),
                Op::Tick,
            ]
        );
        // the swap takes two periods to undo
        let s = PeriodicSchedule {
            qubits: 2,
            prologue: vec![],
            body: vec![Op::M1(Basis::X, 0), Op::Swap(0, 1)],
        };
        let r = remove_swaps(&s);
        assert_eq!(r.body, vec![Op::M1(Basis::X, 0), Op::M1(Basis::X, 1)]);
        let plain = measurement_schedule(&parse_code(C422).unwrap());
        assert_eq!(remove_swaps(&plain), plain);
    }

    #[test]
    fn original_schedule_parameters() {
        let s = measurement_schedule(&parse_code(C422).unwrap());
        let p = code_params(&s).unwrap();
        assert_eq!((p.n, p.k, p.d), (4, 2, Some(2)));
        let sim = simulate(&s, 3).unwrap();
        assert_eq!(sim.tableaux[sim.established.unwrap()].rank(), 2);
        let trivial = measurement_schedule(&parse_code("n 1\n").unwrap());
        let p = code_params(&trivial).unwrap();
        assert_eq!((p.n, p.k, p.d, p.established), (1, 1, Some(1), 0));
        let idle = PeriodicSchedule {
            qubits: 1,
            prologue: vec![],
            body: vec![Op::Gate(Clifford1::I, 0)],
        };
        assert_eq!(simulate(&idle, 3).unwrap().established, Some(0));
    }

    #[test]
    fn four_two_two_floquetifies_to_six_qubits() {
        let f = floquetify(&parse_code(C422).unwrap()).unwrap();
        assert_eq!(f.schedule.qubits, 6);
        assert_eq!((f.params.n, f.params.k, f.params.d), (6, 2, Some(2)));
        assert!(f.schedule.body.iter().all(|op| op.weight() <= 2));
        assert!(!f.schedule.has_swaps());
        assert!(f.audit.iter().any(|a| a.contains("r_pauli-1")));
        let s = f.schedule.to_text();
        assert_eq!(PeriodicSchedule::from_text(&s).unwrap(), f.schedule);
        assert_eq!(f.ancillas, 2);
        assert_eq!(f.extra, 0);
        // no intermediate step is weaker than the ticks
        assert_eq!(distance_at_every_step(&f.schedule).unwrap(), Some(2));
    }

    #[test]
    fn merging_keeps_the_logical_count_at_every_tick() {
        let code = parse_code(C422).unwrap();
        let round = synthesised_round(&code, &mut Vec::new()).unwrap();
        let merged = merge_measure_prepare(&round, &mut Vec::new()).unwrap();
        let ks = |s: &PeriodicSchedule| -> Vec<usize> {
            let sim = simulate(s, 3).unwrap();
            (1..sim.tableaux.len())
                .filter(|&i| sim.ops[i - 1] == Op::Tick)
                .map(|i| sim.tableaux[i].num_logical())
                .collect()
        };
        let (a, b) = (ks(&round), ks(&merged));
        assert_eq!(a.len(), b.len());
        assert_eq!(a, b);
    }

    #[test]
    fn five_qubit_code_keeps_its_distance() {
        let f = floquetify(&parse_code(C513).unwrap()).unwrap();
        assert_eq!((f.params.n, f.params.k, f.params.d), (7, 1, Some(3)));
        assert_eq!(f.extra, 0);
        assert_eq!(distance_at_every_step(&f.schedule).unwrap(), Some(3));
    }

    #[test]
    fn two_qubit_parity_code() {
        let f = floquetify(&parse_code("n 2\nZZ\n").unwrap()).unwrap();
        assert_eq!(f.params.k, 1);
        assert_eq!(f.params.d, Some(1));
        assert!(f.schedule.body.iter().all(|op| op.weight() <= 2));
    }
}
