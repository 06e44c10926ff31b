//! Dense interpretation of ZX diagrams.
//!
//! Spider tensors are left unnormalised so every entry is a Gaussian
//! integer: a Z spider is 1 on the all-zero index and i^k on the all-one
//! index, an X spider is `1 + i^k (-1)^|x|`, and H is `[[1, 1], [1, -1]]`.
//! Comparisons are therefore only ever up to scalar.
//!
//! A diagram is turned into a [`Network`] once. The contraction order is
//! fixed at that point, so the same network can be evaluated many times
//! with Pauli flips pushed onto individual edges.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex64;

use crate::diagram::{EdgeId, VertexKind, ZXDiagram};
use crate::error::{Error, Result};
use crate::pauli::Pauli;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterpretConfig {
    /// Maximum number of boundary legs (inputs plus outputs).
    pub boundary_cap: usize,
    /// Maximum rank of any intermediate tensor.
    pub budget: usize,
}

impl Default for InterpretConfig {
    fn default() -> Self {
        InterpretConfig {
            boundary_cap: 16,
            budget: 24,
        }
    }
}

/// A `2^out x 2^in` matrix. Qubit 0 is the most significant bit of both
/// the row and the column index.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    in_arity: usize,
    out_arity: usize,
    entries: Vec<Complex64>,
}

impl LinearMap {
    pub fn new(in_arity: usize, out_arity: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != 1 << (in_arity + out_arity) {
            return Err(Error::ArityMismatch(format!(
                "{} entries for a {out_arity}x{in_arity}-qubit map",
                entries.len()
            )));
        }
        Ok(LinearMap {
            in_arity,
            out_arity,
            entries,
        })
    }

    pub fn from_fn(in_arity: usize, out_arity: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let cols = 1 << in_arity;
        let entries = (0..(1usize << (in_arity + out_arity)))
            .map(|i| f(i / cols, i % cols))
            .collect();
        LinearMap {
            in_arity,
            out_arity,
            entries,
        }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap::from_fn(n, n, |r, c| if r == c { 1.0.into() } else { 0.0.into() })
    }

    pub fn in_arity(&self) -> usize {
        self.in_arity
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * (1 << self.in_arity) + col]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn scale(&self, c: Complex64) -> LinearMap {
        LinearMap {
            in_arity: self.in_arity,
            out_arity: self.out_arity,
            entries: self.entries.iter().map(|&e| e * c).collect(),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LinearMap) -> Result<LinearMap> {
        if self.out_arity != next.in_arity {
            return Err(Error::ArityMismatch(format!(
                "composing {} outputs with {} inputs",
                self.out_arity, next.in_arity
            )));
        }
        let (r, k, c) = (1 << next.out_arity, 1 << self.out_arity, 1 << self.in_arity);
        let mut entries = vec![Complex64::new(0.0, 0.0); r * c];
        for i in 0..r {
            for j in 0..k {
                let a = next.entries[i * k + j];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for l in 0..c {
                    entries[i * c + l] += a * self.entries[j * c + l];
                }
            }
        }
        Ok(LinearMap {
            in_arity: self.in_arity,
            out_arity: next.out_arity,
            entries,
        })
    }

    /// Kronecker product, `self` on the leading qubits.
    pub fn kron(&self, other: &LinearMap) -> LinearMap {
        let oc = 1 << other.in_arity;
        let or = 1 << other.out_arity;
        let sc = 1 << self.in_arity;
        LinearMap::from_fn(self.in_arity + other.in_arity, self.out_arity + other.out_arity, |r, c| {
            self.entries[(r / or) * sc + c / oc] * other.entries[(r % or) * oc + c % oc]
        })
    }

    /// Rank over the complex numbers, by Gaussian elimination with partial
    /// pivoting.
    pub fn rank(&self, tol: f64) -> usize {
        let rows = 1 << self.out_arity;
        let cols = 1 << self.in_arity;
        let mut m: Vec<Vec<Complex64>> = (0..rows)
            .map(|r| self.entries[r * cols..(r + 1) * cols].to_vec())
            .collect();
        let scale = self.max_abs().max(1.0);
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows)
                .filter(|&r| m[r][col].norm() > tol * scale)
                .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col];
            for r in 0..rows {
                if r != rank {
                    let f = m[r][col] / pivot;
                    if f.norm() > 0.0 {
                        for c in col..cols {
                            let v = m[rank][c];
                            m[r][c] -= f * v;
                        }
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Exact projective key. Entries are rounded to Gaussian integers,
    /// multiplied by the conjugate of the first nonzero entry (which makes
    /// any complex rescaling a positive real one) and divided by the gcd
    /// of all components. Two maps with Gaussian-integer entries share a
    /// key iff they are proportional. The zero map has an empty key.
    /// Applies Paulis on open legs, legs numbered inputs then outputs.
    /// Agrees with inserting them on those wires up to a global phase.
    pub fn apply_paulis_on_legs(&self, flips: &[(usize, Pauli)]) -> LinearMap {
        let (ni, no) = (self.in_arity, self.out_arity);
        let (mut xr, mut xc, mut zr, mut zc) = (0usize, 0usize, 0usize, 0usize);
        for &(leg, p) in flips {
            let (rb, cb) = if leg < ni {
                (0, 1usize << (ni - 1 - leg))
            } else {
                (1usize << (no - 1 - (leg - ni)), 0)
            };
            if p.x_bit() {
                xr ^= rb;
                xc ^= cb;
            }
            if p.z_bit() {
                zr ^= rb;
                zc ^= cb;
            }
        }
        let cols = 1usize << ni;
        let entries = (0..self.entries.len())
            .map(|i| {
                let (r, c) = (i / cols, i % cols);
                let v = self.entries[(r ^ xr) * cols + (c ^ xc)];
                if ((r & zr).count_ones() + (c & zc).count_ones()) % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        LinearMap { in_arity: ni, out_arity: no, entries }
    }

    pub fn projective_key(&self) -> Vec<i128> {
        let ints: Vec<(i128, i128)> = self
            .entries
            .iter()
            .map(|e| (e.re.round() as i128, e.im.round() as i128))
            .collect();
        let Some(&(fr, fi)) = ints.iter().find(|&&(a, b)| a != 0 || b != 0) else {
            return Vec::new();
        };
        // (a + bi)(fr - fi i)
        let mut key: Vec<i128> = Vec::with_capacity(2 * ints.len());
        for &(a, b) in &ints {
            key.push(a * fr + b * fi);
            key.push(b * fr - a * fi);
        }
        let g = key.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
        if g > 1 {
            for x in &mut key {
                *x /= g;
            }
        }
        key
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// True iff `a = c·b` for some nonzero `c` within `tol`, or both maps are
/// zero within `tol`. Both maps are first scaled to a unit largest entry so
/// the tolerance does not depend on the unnormalised magnitudes.
pub fn equal_up_to_scalar(a: &LinearMap, b: &LinearMap, tol: f64) -> Result<bool> {
    if a.in_arity != b.in_arity || a.out_arity != b.out_arity {
        return Err(Error::ArityMismatch(format!(
            "{}→{} vs {}→{}",
            a.in_arity, a.out_arity, b.in_arity, b.out_arity
        )));
    }
    let (ma, mb) = (a.max_abs(), b.max_abs());
    match (ma <= tol, mb <= tol) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    let pivot = b
        .entries
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(i, _)| i)
        .unwrap();
    let c = (a.entries[pivot] / ma) / (b.entries[pivot] / mb);
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .all(|(&x, &y)| (x / ma - c * (y / mb)).norm() <= tol))
}

#[derive(Clone, Debug)]
struct Tensor {
    indices: Vec<usize>,
    data: Vec<Complex64>,
}

/// Gather table reordering axes from `from` to `to`: entry `i` of the new
/// layout is entry `table[i]` of the old one. `None` when nothing moves.
fn gather_table(from: &[usize], to: &[usize]) -> Option<Vec<u32>> {
    if from == to {
        return None;
    }
    let k = from.len();
    let pos: HashMap<usize, usize> = from.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let shift: Vec<usize> = to.iter().map(|x| k - 1 - pos[x]).collect();
    let table = (0..1usize << k)
        .map(|new| {
            let mut old = 0usize;
            for (j, &s) in shift.iter().enumerate() {
                if (new >> (k - 1 - j)) & 1 == 1 {
                    old |= 1 << s;
                }
            }
            old as u32
        })
        .collect();
    Some(table)
}

fn gathered<'a>(data: &'a [Complex64], table: &Option<Vec<u32>>) -> Cow<'a, [Complex64]> {
    match table {
        None => Cow::Borrowed(data),
        Some(t) => Cow::Owned(t.iter().map(|&i| data[i as usize]).collect()),
    }
}

/// Applies a Pauli to the axis whose bit is `bit`.
fn apply_pauli(data: &mut [Complex64], bit: usize, p: Pauli) {
    if p.x_bit() {
        for i in 0..data.len() {
            if i & bit == 0 {
                data.swap(i, i | bit);
            }
        }
    }
    if p.z_bit() {
        for (i, d) in data.iter_mut().enumerate() {
            if i & bit != 0 {
                *d = -*d;
            }
        }
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn spider_tensor(kind: VertexKind, qt: u8, indices: Vec<usize>) -> Tensor {
    let k = indices.len();
    let size = 1usize << k;
    let w = i_pow(qt);
    let data = match kind {
        VertexKind::Z => {
            let mut d = vec![Complex64::new(0.0, 0.0); size];
            if k == 0 {
                d[0] = Complex64::new(1.0, 0.0) + w;
            } else {
                d[0] = Complex64::new(1.0, 0.0);
                d[size - 1] = w;
            }
            d
        }
        VertexKind::X => (0..size)
            .map(|x| {
                let sign = if (x as u64).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                Complex64::new(1.0, 0.0) + w * sign
            })
            .collect(),
        VertexKind::H => vec![1.0, 1.0, 1.0, -1.0].into_iter().map(Complex64::from).collect(),
        // Boundaries are plain wires: a delta between the edge and the
        // open index.
        VertexKind::B => vec![1.0, 0.0, 0.0, 1.0].into_iter().map(Complex64::from).collect(),
    };
    Tensor { indices, data }
}

/// One pairwise contraction with its axis shuffles worked out in advance.
#[derive(Clone, Debug)]
struct Step {
    a: usize,
    b: usize,
    gather_a: Option<Vec<u32>>,
    gather_b: Option<Vec<u32>>,
    m: usize,
    k: usize,
    n: usize,
}

/// A diagram compiled into leaf tensors plus a fixed pairwise contraction
/// plan.
#[derive(Clone, Debug)]
pub struct Network {
    leaves: Vec<Vec<Complex64>>,
    steps: Vec<Step>,
    /// Per edge: the leaf holding its axis and that axis' bit.
    flip_site: Vec<(usize, usize)>,
    final_gather: Option<Vec<u32>>,
    in_arity: usize,
    out_arity: usize,
    max_rank: usize,
}

impl Network {
    pub fn new(d: &ZXDiagram, cfg: &InterpretConfig) -> Result<Network> {
        d.validate().into_result()?;
        let legs = d.inputs().len() + d.outputs().len();
        if legs > cfg.boundary_cap {
            return Err(Error::BoundaryCapExceeded {
                legs,
                cap: cfg.boundary_cap,
            });
        }
        let ne = d.num_edges();
        let boundary = d.boundary();
        let open_of: BTreeMap<usize, usize> = boundary.iter().enumerate().map(|(i, &b)| (b, ne + i)).collect();
        let inc = d.incidence();
        let mut leaves = Vec::new();
        let mut flip_site = vec![(usize::MAX, 0); ne];
        for (id, v) in d.vertices() {
            let mut idx = inc[&id].clone();
            if v.kind == VertexKind::B {
                idx.push(open_of[&id]);
            }
            for (pos, &e) in idx.iter().enumerate() {
                if e < ne && flip_site[e].0 == usize::MAX {
                    flip_site[e] = (leaves.len(), 1 << (idx.len() - 1 - pos));
                }
            }
            leaves.push(spider_tensor(v.kind, v.phase.quarter_turns(), idx));
        }
        let open: Vec<usize> = (ne..ne + boundary.len()).collect();
        let (plan, max_rank) = greedy_plan(&leaves.iter().map(|t| t.indices.clone()).collect::<Vec<_>>());
        if max_rank > cfg.budget {
            return Err(Error::BudgetExceeded {
                rank: max_rank,
                budget: cfg.budget,
            });
        }
        let mut shapes: Vec<Option<Vec<usize>>> = leaves.iter().map(|t| Some(t.indices.clone())).collect();
        let mut steps = Vec::with_capacity(plan.len());
        for &(a, b) in &plan {
            let ia = shapes[a].take().unwrap();
            let ib = shapes[b].take().unwrap();
            let sb: BTreeSet<usize> = ib.iter().copied().collect();
            let shared: Vec<usize> = ia.iter().copied().filter(|i| sb.contains(i)).collect();
            let ss: BTreeSet<usize> = shared.iter().copied().collect();
            let free_a: Vec<usize> = ia.iter().copied().filter(|i| !ss.contains(i)).collect();
            let free_b: Vec<usize> = ib.iter().copied().filter(|i| !ss.contains(i)).collect();
            steps.push(Step {
                a,
                b,
                gather_a: gather_table(&ia, &[free_a.clone(), shared.clone()].concat()),
                gather_b: gather_table(&ib, &[shared.clone(), free_b.clone()].concat()),
                m: 1 << free_a.len(),
                k: 1 << shared.len(),
                n: 1 << free_b.len(),
            });
            shapes.push(Some([free_a, free_b].concat()));
        }
        let last = shapes.into_iter().flatten().next().unwrap_or_default();
        Ok(Network {
            leaves: leaves.into_iter().map(|t| t.data).collect(),
            steps,
            flip_site,
            final_gather: gather_table(&last, &open),
            in_arity: d.inputs().len(),
            out_arity: d.outputs().len(),
            max_rank,
        })
    }

    /// Largest intermediate rank of the plan.
    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn evaluate(&self) -> LinearMap {
        self.evaluate_with_flips(&[])
    }

    /// Evaluates the diagram with a Pauli inserted on each listed edge.
    pub fn evaluate_with_flips(&self, flips: &[(EdgeId, Pauli)]) -> LinearMap {
        let mut slots: Vec<Option<Cow<[Complex64]>>> =
            self.leaves.iter().map(|l| Some(Cow::Borrowed(l.as_slice()))).collect();
        for &(e, p) in flips {
            let (leaf, bit) = self.flip_site[e];
            if let Some(t) = slots[leaf].as_mut() {
                apply_pauli(t.to_mut(), bit, p);
            }
        }
        for st in &self.steps {
            let a = slots[st.a].take().unwrap();
            let b = slots[st.b].take().unwrap();
            let a = gathered(&a, &st.gather_a);
            let b = gathered(&b, &st.gather_b);
            let (m, k, n) = (st.m, st.k, st.n);
            let mut data = vec![Complex64::new(0.0, 0.0); m * n];
            for i in 0..m {
                let row = &mut data[i * n..(i + 1) * n];
                for j in 0..k {
                    let x = a[i * k + j];
                    if x.re == 0.0 && x.im == 0.0 {
                        continue;
                    }
                    for (r, &y) in row.iter_mut().zip(&b[j * n..(j + 1) * n]) {
                        *r += x * y;
                    }
                }
            }
            slots.push(Some(Cow::Owned(data)));
        }
        let one = [Complex64::new(1.0, 0.0)];
        let result = slots.into_iter().flatten().next().unwrap_or(Cow::Borrowed(&one));
        let t = gathered(&result, &self.final_gather);
        // axis order is inputs then outputs; rows index outputs
        let (ni, no) = (self.in_arity, self.out_arity);
        LinearMap::from_fn(ni, no, |r, c| t[(c << no) | r])
    }
}

/// Greedy pairing: repeatedly contract the pair whose result has the
/// smallest rank, preferring pairs that share an index. Returns the plan
/// and the largest rank it creates.
fn greedy_plan(leaves: &[Vec<usize>]) -> (Vec<(usize, usize)>, usize) {
    let mut live: BTreeMap<usize, BTreeSet<usize>> = leaves
        .iter()
        .enumerate()
        .map(|(i, idx)| (i, idx.iter().copied().collect()))
        .collect();
    let mut next = leaves.len();
    let mut plan = Vec::new();
    let mut max_rank = leaves.iter().map(|l| l.len()).max().unwrap_or(0);
    while live.len() > 1 {
        // index -> tensors holding it
        let mut holders: HashMap<usize, Vec<usize>> = HashMap::new();
        for (&t, idx) in &live {
            for &i in idx {
                holders.entry(i).or_default().push(t);
            }
        }
        let mut best: Option<(usize, usize, usize)> = None;
        let consider = |a: usize, b: usize, best: &mut Option<(usize, usize, usize)>| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            let sa = &live[&a];
            let sb = &live[&b];
            let shared = sa.intersection(sb).count();
            let r = sa.len() + sb.len() - 2 * shared;
            let cand = (r, a, b);
            if best.is_none_or(|bb| cand < bb) {
                *best = Some(cand);
            }
        };
        for hs in holders.values() {
            if hs.len() == 2 {
                consider(hs[0], hs[1], &mut best);
            }
        }
        if best.is_none() {
            // disconnected pieces only: take the two smallest
            let mut by_size: Vec<(usize, usize)> = live.iter().map(|(&t, s)| (s.len(), t)).collect();
            by_size.sort();
            consider(by_size[0].1, by_size[1].1, &mut best);
        }
        let (r, a, b) = best.unwrap();
        max_rank = max_rank.max(r);
        let sa = live.remove(&a).unwrap();
        let sb = live.remove(&b).unwrap();
        let merged: BTreeSet<usize> = sa.symmetric_difference(&sb).copied().collect();
        live.insert(next, merged);
        plan.push((a, b));
        next += 1;
    }
    (plan, max_rank)
}

pub fn interpret(d: &ZXDiagram) -> Result<LinearMap> {
    interpret_with(d, &InterpretConfig::default())
}

pub fn interpret_with(d: &ZXDiagram, cfg: &InterpretConfig) -> Result<LinearMap> {
    Ok(Network::new(d, cfg)?.evaluate())
}
