//! The rule library.
//!
//! Both sides of a rule share one boundary layout: boundary `i` of the
//! left side (inputs, then outputs) corresponds to boundary `i` of the
//! right side.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::diagram::{VertexId, VertexKind, ZXDiagram};
use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::tensor::{equal_up_to_scalar, interpret, InterpretConfig, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    Elim,
    Fuse,
    Four,
    Five,
    NPlus,
    N,
    Pauli1,
    Naive,
}

impl RuleName {
    pub const ALL: [RuleName; 8] = [
        RuleName::Elim,
        RuleName::Fuse,
        RuleName::Four,
        RuleName::Five,
        RuleName::NPlus,
        RuleName::N,
        RuleName::Pauli1,
        RuleName::Naive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Elim => "r_elim",
            RuleName::Fuse => "r_fuse",
            RuleName::Four => "r_4",
            RuleName::Five => "r_5",
            RuleName::NPlus => "r_n+",
            RuleName::N => "r_n",
            RuleName::Pauli1 => "r_pauli-1",
            RuleName::Naive => "r_naive",
        }
    }

    /// Whether the rule takes a leg-count parameter.
    pub fn takes_n(self) -> bool {
        matches!(self, RuleName::Fuse | RuleName::NPlus | RuleName::N)
    }

    pub fn default_n(self) -> Option<usize> {
        match self {
            RuleName::Fuse => Some(2),
            RuleName::NPlus | RuleName::N => Some(8),
            _ => None,
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(['{', '}'], "");
        Ok(match t.as_str() {
            "r_elim" | "elim" => RuleName::Elim,
            "r_fuse" | "fuse" => RuleName::Fuse,
            "r_4" | "4" => RuleName::Four,
            "r_5" | "5" => RuleName::Five,
            "r_n+" | "r_n^+" | "r_nplus" | "n+" => RuleName::NPlus,
            "r_n" | "n" => RuleName::N,
            "r_pauli-1" | "r_pauli1" | "pauli-1" => RuleName::Pauli1,
            "r_naive" | "naive" => RuleName::Naive,
            _ => return Err(Error::InvalidParameter(format!("unknown rule '{s}'"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: RuleName,
    pub n: Option<usize>,
    pub colour: VertexKind,
    pub phase: Phase,
    pub lhs: ZXDiagram,
    pub rhs: ZXDiagram,
    /// Named vertices of the right side, used by the flow rewrites and by
    /// structural tests.
    pub roles: BTreeMap<&'static str, Vec<VertexId>>,
}

impl RewriteRule {
    pub fn label(&self) -> String {
        match self.n {
            Some(n) => format!("{}(n={n})", self.name),
            None => self.name.to_string(),
        }
    }

    pub fn role(&self, key: &str) -> &[VertexId] {
        self.roles.get(key).map_or(&[], |v| v.as_slice())
    }

    /// The same rule read right to left.
    pub fn inverse(&self) -> RewriteRule {
        let mut r = self.clone();
        std::mem::swap(&mut r.lhs, &mut r.rhs);
        r.roles.clear();
        r
    }
}

/// Boundary legs of a rule side are outputs unless the rule is a process.
fn spider_state(kind: VertexKind, phase: Phase, legs: usize) -> (ZXDiagram, VertexId, Vec<VertexId>) {
    let mut d = ZXDiagram::new();
    let s = d.add_vertex(kind, phase);
    let bs: Vec<VertexId> = (0..legs).map(|_| d.add_output()).collect();
    for &b in &bs {
        d.add_edge(s, b);
    }
    (d, s, bs)
}

/// Adds `legs` output boundaries up front so every side numbers its
/// boundary identically.
fn boundary_only(legs: usize) -> (ZXDiagram, Vec<VertexId>) {
    let mut d = ZXDiagram::new();
    let bs = (0..legs).map(|_| d.add_output()).collect();
    (d, bs)
}

fn check_colour(colour: VertexKind) -> Result<()> {
    if colour.is_spider() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rule colour must be Z or X, got {colour:?}")))
    }
}

fn finish(rule: RewriteRule) -> Result<RewriteRule> {
    rule.lhs.validate().into_result()?;
    rule.rhs.validate().into_result()?;
    // wide instances are past dense interpretation; they share their
    // construction with the narrow ones checked here
    if rule.lhs.boundary().len() > InterpretConfig::default().boundary_cap {
        return Ok(rule);
    }
    let a = interpret(&rule.lhs)?;
    let b = interpret(&rule.rhs)?;
    if !equal_up_to_scalar(&a, &b, DEFAULT_TOL)? {
        return Err(Error::InvalidDiagram(format!(
            "{} does not preserve semantics",
            rule.label()
        )));
    }
    Ok(rule)
}

/// Bare wire to a wire through a phase-free spider.
pub fn elim(colour: VertexKind) -> Result<RewriteRule> {
    check_colour(colour)?;
    let lhs = ZXDiagram::identity(1);
    let mut rhs = ZXDiagram::new();
    let i = rhs.add_input();
    let o = rhs.add_output();
    let s = rhs.add_vertex(colour, Phase::ZERO);
    rhs.add_edge(i, s);
    rhs.add_edge(s, o);
    finish(RewriteRule {
        name: RuleName::Elim,
        n: None,
        colour,
        phase: Phase::ZERO,
        lhs,
        rhs,
        roles: BTreeMap::from([("spider", vec![s])]),
    })
}

/// An `n`-legged spider to the same spider with an extra leg ending in a
/// phase-free leaf of the same colour.
pub fn fuse(n: usize, colour: VertexKind, phase: Phase) -> Result<RewriteRule> {
    check_colour(colour)?;
    let (lhs, _, _) = spider_state(colour, phase, n);
    let (mut rhs, s, _) = spider_state(colour, phase, n);
    let leaf = rhs.add_vertex(colour, Phase::ZERO);
    rhs.add_edge(s, leaf);
    finish(RewriteRule {
        name: RuleName::Fuse,
        n: Some(n),
        colour,
        phase,
        lhs,
        rhs,
        roles: BTreeMap::from([("spider", vec![s]), ("leaf", vec![leaf])]),
    })
}

/// A `k`-legged spider to a `k`-cycle of three-legged spiders, leg `i` on
/// cycle vertex `i`. The phase sits on the first cycle vertex.
fn cycle_rule(name: RuleName, k: usize, colour: VertexKind, phase: Phase) -> Result<RewriteRule> {
    check_colour(colour)?;
    let (lhs, _, _) = spider_state(colour, phase, k);
    let (mut rhs, bs) = boundary_only(k);
    let cyc: Vec<VertexId> = (0..k)
        .map(|i| rhs.add_vertex(colour, if i == 0 { phase } else { Phase::ZERO }))
        .collect();
    for i in 0..k {
        rhs.add_edge(cyc[i], bs[i]);
    }
    for i in 0..k {
        rhs.add_edge(cyc[i], cyc[(i + 1) % k]);
    }
    finish(RewriteRule {
        name,
        n: None,
        colour,
        phase,
        lhs,
        rhs,
        roles: BTreeMap::from([("cycle", cyc)]),
    })
}

pub fn four(colour: VertexKind, phase: Phase) -> Result<RewriteRule> {
    cycle_rule(RuleName::Four, 4, colour, phase)
}

pub fn five(colour: VertexKind, phase: Phase) -> Result<RewriteRule> {
    cycle_rule(RuleName::Five, 5, colour, phase)
}

/// Centres `A`, `B` and `n/2` four-legged outer spiders. Outer `i` carries
/// boundary legs `2i` and `2i + 1` and one edge to each centre. With
/// `extra`, centre `B` also carries boundary leg `n`.
fn split_rule(name: RuleName, n: usize, extra: bool, colour: VertexKind, phase: Phase) -> Result<RewriteRule> {
    check_colour(colour)?;
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("{name} needs an even n >= 4, got {n}")));
    }
    let legs = n + extra as usize;
    let (lhs, _, _) = spider_state(colour, phase, legs);
    let (mut rhs, bs) = boundary_only(legs);
    let a = rhs.add_vertex(colour, phase);
    let b = rhs.add_vertex(colour, Phase::ZERO);
    let outers: Vec<VertexId> = (0..n / 2).map(|_| rhs.add_vertex(colour, Phase::ZERO)).collect();
    for (i, &o) in outers.iter().enumerate() {
        rhs.add_edge(o, bs[2 * i]);
        rhs.add_edge(o, bs[2 * i + 1]);
    }
    for &o in &outers {
        rhs.add_edge(o, a);
        rhs.add_edge(o, b);
    }
    if extra {
        rhs.add_edge(b, bs[n]);
    }
    finish(RewriteRule {
        name,
        n: Some(n),
        colour,
        phase,
        lhs,
        rhs,
        roles: BTreeMap::from([("centre_a", vec![a]), ("centre_b", vec![b]), ("outer", outers)]),
    })
}

pub fn n_plus(n: usize, colour: VertexKind, phase: Phase) -> Result<RewriteRule> {
    split_rule(RuleName::NPlus, n, false, colour, phase)
}

/// The `(n + 1)`-legged variant.
pub fn n_legged(n: usize, colour: VertexKind, phase: Phase) -> Result<RewriteRule> {
    split_rule(RuleName::N, n, true, colour, phase)
}

/// Measure-then-prepare on one wire, against two chained weight-one
/// measurements. For `colour = Z` the left side is `|0><0|` as two
/// disconnected X leaves, and each measurement is a Z spider on the wire
/// with an X leaf.
pub fn pauli1(colour: VertexKind) -> Result<RewriteRule> {
    check_colour(colour)?;
    let leaf = colour.dual();
    let mut lhs = ZXDiagram::new();
    let i = lhs.add_input();
    let o = lhs.add_output();
    let l1 = lhs.add_vertex(leaf, Phase::ZERO);
    let l2 = lhs.add_vertex(leaf, Phase::ZERO);
    lhs.add_edge(i, l1);
    lhs.add_edge(l2, o);

    let mut rhs = ZXDiagram::new();
    let i = rhs.add_input();
    let o = rhs.add_output();
    let za = rhs.add_vertex(colour, Phase::ZERO);
    let zb = rhs.add_vertex(colour, Phase::ZERO);
    let xa = rhs.add_vertex(leaf, Phase::ZERO);
    let xb = rhs.add_vertex(leaf, Phase::ZERO);
    rhs.add_edge(i, za);
    rhs.add_edge(za, zb);
    rhs.add_edge(zb, o);
    rhs.add_edge(za, xa);
    rhs.add_edge(zb, xb);
    finish(RewriteRule {
        name: RuleName::Pauli1,
        n: None,
        colour,
        phase: Phase::ZERO,
        lhs,
        rhs,
        roles: BTreeMap::from([("chain", vec![za, zb]), ("leaf", vec![xa, xb])]),
    })
}

/// The weight-4 measurement against one ancilla and four CNOTs. Left:
/// data spiders `Z_i` joined to a single X spider. Right: the X spider
/// unfused into a chain `prep - X_1 - ... - X_4 - meas`.
pub fn naive() -> Result<RewriteRule> {
    let build = |chain: bool| {
        let mut d = ZXDiagram::new();
        let ins: Vec<VertexId> = (0..4).map(|_| d.add_input()).collect();
        let outs: Vec<VertexId> = (0..4).map(|_| d.add_output()).collect();
        let data: Vec<VertexId> = (0..4).map(|_| d.add_z()).collect();
        for q in 0..4 {
            d.add_edge(ins[q], data[q]);
            d.add_edge(data[q], outs[q]);
        }
        let mut anc = Vec::new();
        if chain {
            let prep = d.add_x();
            anc.push(prep);
            for &z in &data {
                let x = d.add_x();
                d.add_edge(z, x);
                anc.push(x);
            }
            let meas = d.add_x();
            anc.push(meas);
            for w in anc.windows(2) {
                d.add_edge(w[0], w[1]);
            }
        } else {
            let x = d.add_x();
            for &z in &data {
                d.add_edge(z, x);
            }
            anc.push(x);
        }
        (d, data, anc)
    };
    let (lhs, _, _) = build(false);
    let (rhs, data, anc) = build(true);
    finish(RewriteRule {
        name: RuleName::Naive,
        n: None,
        colour: VertexKind::Z,
        phase: Phase::ZERO,
        lhs,
        rhs,
        roles: BTreeMap::from([("data", data), ("ancilla", anc)]),
    })
}

/// Instantiates a rule by name, Z-coloured and phase-free.
pub fn rule(name: RuleName, n: Option<usize>) -> Result<RewriteRule> {
    if n.is_some() && !name.takes_n() {
        return Err(Error::InvalidParameter(format!("{name} takes no leg count")));
    }
    let n = n.or(name.default_n());
    let z = VertexKind::Z;
    match name {
        RuleName::Elim => elim(z),
        RuleName::Fuse => fuse(n.unwrap(), z, Phase::ZERO),
        RuleName::Four => four(z, Phase::ZERO),
        RuleName::Five => five(z, Phase::ZERO),
        RuleName::NPlus => n_plus(n.unwrap(), z, Phase::ZERO),
        RuleName::N => n_legged(n.unwrap(), z, Phase::ZERO),
        RuleName::Pauli1 => pauli1(z),
        RuleName::Naive => naive(),
    }
}
