//! Semantic and distance checks for rules.
//!
//! Distance preservation is checked on the closed fragment. For every
//! error `E2` on the internal edges of the right side, either `rhs + E2`
//! is the zero map, or some error `E1` on the left side with
//! `wt(E1) <= wt(E2)` gives a proportional map. The same is then done
//! with the sides swapped.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::diagram::{EdgeId, ZXDiagram};
use crate::error::{Error, Result};
use crate::fault::{assignment, detector_matrix_on, ErrorOracle, ErrorSet};
use crate::pauli::{combinations, Pauli};
use crate::tensor::{equal_up_to_scalar, interpret_with, InterpretConfig, LinearMap, DEFAULT_TOL};
use crate::web::detecting_basis;

use super::rules::RewriteRule;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub tol: f64,
    pub interpret: InterpretConfig,
    /// Refuse sides with more internal edges than this.
    pub max_internal: usize,
    /// How far past `wt(E2)` to look when reporting the cheapest
    /// equivalent error of a counterexample.
    pub extra_search: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: DEFAULT_TOL,
            interpret: InterpretConfig::default(),
            max_internal: 10,
            extra_search: 2,
        }
    }
}

pub fn verify_semantics(r: &RewriteRule, tol: f64) -> Result<bool> {
    verify_semantics_with(r, tol, &InterpretConfig::default())
}

pub fn verify_semantics_with(r: &RewriteRule, tol: f64, cfg: &InterpretConfig) -> Result<bool> {
    let a = interpret_with(&r.lhs, cfg)?;
    let b = interpret_with(&r.rhs, cfg)?;
    equal_up_to_scalar(&a, &b, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Preserving,
    NonDecreasingOnly,
    Refuted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Preserving => "preserving",
            Verdict::NonDecreasingOnly => "non-decreasing-only",
            Verdict::Refuted => "refuted",
        })
    }
}

/// An internal error with no equivalent error of lower or equal weight on
/// the other side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub error: ErrorSet,
    pub weight: usize,
    /// Cheapest equivalent error found on the other side, if any was found
    /// within the search radius.
    pub cheapest: Option<ErrorSet>,
}

impl Witness {
    pub fn cheapest_weight(&self) -> Option<usize> {
        self.cheapest.as_ref().map(|e| e.weight())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DirectionReport {
    pub checked: usize,
    pub detectable: usize,
    pub pushed: usize,
    pub witness: Option<Witness>,
}

impl DirectionReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct PreservationReport {
    pub rule: String,
    pub verdict: Verdict,
    pub forward: DirectionReport,
    pub backward: DirectionReport,
}

impl PreservationReport {
    pub fn witness(&self) -> Option<&Witness> {
        self.forward.witness.as_ref().or(self.backward.witness.as_ref())
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} {}", self.rule, self.verdict);
        if let Some(w) = self.witness() {
            let _ = write!(s, ": weight-{} internal error", w.weight);
            match w.cheapest_weight() {
                Some(c) => {
                    let _ = write!(s, " needs weight {c} on the other side");
                }
                None => s.push_str(" has no equivalent error in range"),
            }
        }
        s
    }

    /// Witness file: the offending internal error as `flip` lines against
    /// the side it lives on, then the cheapest equivalent error.
    pub fn witness_text(&self, r: &RewriteRule) -> Option<String> {
        let (w, here, there) = match (&self.forward.witness, &self.backward.witness) {
            (Some(w), _) => (w, &r.rhs, &r.lhs),
            (None, Some(w)) => (w, &r.lhs, &r.rhs),
            _ => return None,
        };
        let mut s = String::new();
        let _ = writeln!(s, "# {}", self.summary());
        let _ = writeln!(s, "# internal error (weight {})", w.weight);
        s.push_str(&w.error.to_text(here));
        if let Some(c) = &w.cheapest {
            let _ = writeln!(s, "# cheapest equivalent error (weight {})", c.weight());
            for line in c.to_text(there).lines() {
                let _ = writeln!(s, "# {line}");
            }
        }
        Some(s)
    }
}

/// All errors over `edges` of weight exactly `w`, in enumeration order.
fn errors_of_weight(edges: &[EdgeId], w: usize) -> Vec<ErrorSet> {
    let mut out = Vec::new();
    for c in combinations(edges.len(), w) {
        let support: Vec<EdgeId> = c.into_iter().map(|i| edges[i]).collect();
        for code in 0..3usize.pow(w as u32) {
            out.push(assignment(&support, code));
        }
    }
    out
}

/// Lowest-weight error per projective map, filled one weight level at a
/// time.
struct LevelTable<'a> {
    eval: Box<dyn Fn(&ErrorSet) -> LinearMap + Sync + 'a>,
    edges: Vec<EdgeId>,
    level: Option<usize>,
    best: HashMap<Vec<i128>, ErrorSet>,
}

impl<'a> LevelTable<'a> {
    fn new(eval: impl Fn(&ErrorSet) -> LinearMap + Sync + 'a, edges: Vec<EdgeId>) -> Self {
        LevelTable {
            eval: Box::new(eval),
            edges,
            level: None,
            best: HashMap::new(),
        }
    }

    fn fill_to(&mut self, w: usize) {
        let w = w.min(self.edges.len());
        let start = self.level.map_or(0, |l| l + 1);
        for lvl in start..=w {
            let errs = errors_of_weight(&self.edges, lvl);
            let keys: Vec<Vec<i128>> = errs
                .par_iter()
                .map(|e| (self.eval)(e).projective_key())
                .collect();
            for (e, k) in errs.into_iter().zip(keys) {
                self.best.entry(k).or_insert(e);
            }
            self.level = Some(lvl);
        }
    }

    fn lookup(&self, key: &[i128]) -> Option<&ErrorSet> {
        self.best.get(key)
    }
}

enum Outcome {
    Detectable,
    Pushed,
    Suspect(Vec<i128>),
}

/// Checks that every internal error of `target` has an equivalent error
/// on `source` of no greater weight.
pub fn check_direction(source: &ZXDiagram, target: &ZXDiagram, opts: &VerifyOptions) -> Result<DirectionReport> {
    let internal = target.internal_edges();
    if internal.len() > opts.max_internal {
        return Err(Error::EnumerationTooLarge {
            candidates: 4u128.pow(internal.len() as u32),
            limit: 4u128.pow(opts.max_internal as u32),
        });
    }
    let src = ErrorOracle::new(source, &opts.interpret, opts.tol)?;
    let tgt = ErrorOracle::new(target, &opts.interpret, opts.tol)?;
    let dm = detector_matrix_on(target, &detecting_basis(target), internal.clone())?;

    // errors on boundary wires act directly on the open legs of the map
    let mut leg_of: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (leg, &b) in source.boundary().iter().enumerate() {
        if let Some(e) = source.boundary_edge(b) {
            leg_of.entry(e).or_insert(leg);
        }
    }
    let boundary: Vec<EdgeId> = leg_of.keys().copied().collect();
    let base = src.base().clone();
    let mut btable = LevelTable::new(
        |e: &ErrorSet| {
            let flips: Vec<(usize, Pauli)> = e.paulis().into_iter().map(|(edge, p)| (leg_of[&edge], p)).collect();
            base.apply_paulis_on_legs(&flips)
        },
        boundary,
    );
    let candidates: Vec<ErrorSet> = (0..=internal.len()).flat_map(|w| errors_of_weight(&internal, w)).collect();
    let keys: Vec<Option<Vec<i128>>> = candidates
        .par_iter()
        .map(|e2| {
            if !dm.syndrome_of(e2).is_zero() {
                return None;
            }
            let m = tgt.evaluate(e2);
            (!m.is_zero(opts.tol)).then(|| m.projective_key())
        })
        .collect();
    // the table only needs weights some undetected error can reach
    let need = candidates
        .iter()
        .zip(&keys)
        .filter(|(_, k)| k.is_some())
        .map(|(e, _)| e.weight())
        .max()
        .unwrap_or(0);
    btable.fill_to(need);
    let outcomes: Vec<Outcome> = candidates
        .iter()
        .zip(keys)
        .map(|(e2, key)| match key {
            None => Outcome::Detectable,
            Some(key) => match btable.lookup(&key) {
                Some(e1) if e1.weight() <= e2.weight() => Outcome::Pushed,
                _ => Outcome::Suspect(key),
            },
        })
        .collect();

    let mut report = DirectionReport {
        checked: candidates.len(),
        ..Default::default()
    };
    let all_edges: Vec<EdgeId> = (0..source.num_edges()).collect();
    let mut full = LevelTable::new(|e: &ErrorSet| src.evaluate(e), all_edges);
    for (e2, outcome) in candidates.iter().zip(outcomes) {
        match outcome {
            Outcome::Detectable => report.detectable += 1,
            Outcome::Pushed => report.pushed += 1,
            Outcome::Suspect(key) => {
                let w2 = e2.weight();
                full.fill_to(w2);
                if full.lookup(&key).is_some_and(|e1| e1.weight() <= w2) {
                    report.pushed += 1;
                    continue;
                }
                full.fill_to(w2 + opts.extra_search);
                let cheapest = [full.lookup(&key), btable.lookup(&key)]
                    .into_iter()
                    .flatten()
                    .min_by_key(|e| e.weight())
                    .cloned();
                report.witness = Some(Witness {
                    error: e2.clone(),
                    weight: w2,
                    cheapest,
                });
                // candidates are in weight order, so this is the minimal
                // witness
                break;
            }
        }
    }
    Ok(report)
}

pub fn verify_distance_preserving(r: &RewriteRule) -> Result<PreservationReport> {
    verify_distance_preserving_with(r, &VerifyOptions::default())
}

pub fn verify_distance_preserving_with(r: &RewriteRule, opts: &VerifyOptions) -> Result<PreservationReport> {
    let forward = check_direction(&r.lhs, &r.rhs, opts)?;
    let backward = check_direction(&r.rhs, &r.lhs, opts)?;
    let verdict = match (forward.holds(), backward.holds()) {
        (true, true) => Verdict::Preserving,
        (true, false) => Verdict::NonDecreasingOnly,
        _ => Verdict::Refuted,
    };
    Ok(PreservationReport {
        rule: r.label(),
        verdict,
        forward,
        backward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::VertexKind;
    use crate::phase::Phase;
    use crate::rewrite::rules::{fuse, naive, rule, RuleName};

    #[test]
    fn fuse_is_preserving() {
        let r = fuse(3, VertexKind::Z, Phase::ZERO).unwrap();
        assert!(verify_semantics(&r, DEFAULT_TOL).unwrap());
        let rep = verify_distance_preserving(&r).unwrap();
        assert_eq!(rep.verdict, Verdict::Preserving);
        assert_eq!(rep.forward.checked, 4);
    }

    #[test]
    fn corrupted_phase_fails_semantics() {
        let mut r = rule(RuleName::Four, None).unwrap();
        let c = r.role("cycle")[2];
        r.rhs.add_to_phase(c, Phase::PI);
        assert!(!verify_semantics(&r, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn naive_is_refuted_by_a_single_flip() {
        let r = naive().unwrap();
        let rep = verify_distance_preserving(&r).unwrap();
        assert_eq!(rep.verdict, Verdict::Refuted);
        let w = rep.witness().unwrap();
        assert_eq!(w.weight, 1);
        assert_eq!(w.cheapest_weight(), Some(2));
        // the flip is a Z on the ancilla between the second and third CNOT
        let anc = r.role("ancilla");
        let (e, p) = w.error.paulis()[0];
        let (a, b) = r.rhs.edges()[e];
        assert_eq!(p, Pauli::Z);
        assert!((a, b) == (anc[2], anc[3]) || (a, b) == (anc[3], anc[2]));
        assert!(rep.witness_text(&r).unwrap().contains("flip"));
    }
}
