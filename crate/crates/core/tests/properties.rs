use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zxfloquet::circuit::random_circuit;
use zxfloquet::fault::{detector_matrix, ErrorClass, ErrorOracle, ErrorSet};
use zxfloquet::floquet::{build_measurement_circuit, measurement_window, parse_code};
use zxfloquet::flow::{extract_circuit, f_overhead, g_overhead, make_well_covered, reduce_degree, verify_flow};
use zxfloquet::gf2::BitVec;
use zxfloquet::pauli::{Pauli, PauliString};
use zxfloquet::rewrite::{
    apply, elim, find_matches, fuse, rule, verify_distance_preserving, RewriteRule, RuleName,
};
use zxfloquet::synth::{decompose_measurement, measurement_circuit_for};
use zxfloquet::tableau::run;
use zxfloquet::tensor::{equal_up_to_scalar, interpret, InterpretConfig, DEFAULT_TOL};
use zxfloquet::web::{detecting_basis, is_web, span, stabiliser_strings, web_basis, WebAnalysis};
use zxfloquet::fault::{zx_distance, DistanceOptions};
use zxfloquet::{Phase, VertexId, VertexKind, ZXDiagram};

/// A small diagram: spiders, boundary legs hung on spiders, and edges
/// between distinct spiders, some carrying a Hadamard box.
#[derive(Clone, Debug)]
struct Shape {
    spiders: Vec<(bool, u8)>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    edges: Vec<(usize, usize, bool)>,
}

fn colour(x: bool) -> VertexKind {
    if x {
        VertexKind::X
    } else {
        VertexKind::Z
    }
}

fn shape(max_edges: usize) -> impl Strategy<Value = Shape> {
    (1usize..=5)
        .prop_flat_map(move |k| {
            (
                prop::collection::vec((any::<bool>(), 0u8..4), k),
                prop::collection::vec(0..k, 0..=2),
                prop::collection::vec(0..k, 0..=2),
                prop::collection::vec((0..k, 0..k, prop::bool::weighted(0.3)), 0..=max_edges),
            )
        })
        .prop_map(|(spiders, inputs, outputs, edges)| Shape {
            spiders,
            inputs,
            outputs,
            edges: edges.into_iter().filter(|(a, b, _)| a != b).collect(),
        })
}

impl Shape {
    /// Vertices in a fixed order (spiders, inputs, outputs, boxes) and
    /// edges as index pairs.
    fn flat(&self) -> (Vec<(VertexKind, Phase)>, Vec<(usize, usize)>) {
        let mut vs: Vec<(VertexKind, Phase)> =
            self.spiders.iter().map(|&(x, p)| (colour(x), Phase::new(p as i64))).collect();
        let k = vs.len();
        let nb = self.inputs.len() + self.outputs.len();
        vs.extend((0..nb).map(|_| (VertexKind::B, Phase::ZERO)));
        let mut es = Vec::new();
        for &(a, b, h) in &self.edges {
            if h {
                vs.push((VertexKind::H, Phase::ZERO));
                es.push((a, vs.len() - 1));
                es.push((vs.len() - 1, b));
            } else {
                es.push((a, b));
            }
        }
        es.extend(self.inputs.iter().enumerate().map(|(j, &s)| (k + j, s)));
        es.extend(self.outputs.iter().enumerate().map(|(j, &s)| (s, k + self.inputs.len() + j)));
        (vs, es)
    }

    /// Builds the diagram with vertex `i` under id `ids[i]` and edges in
    /// the order `edge_order`, each reversed when `flip` says so.
    fn build_with(&self, ids: &[VertexId], edge_order: &[usize], flip: &[bool]) -> ZXDiagram {
        let (vs, es) = self.flat();
        let mut d = ZXDiagram::new();
        for (i, &(kd, ph)) in vs.iter().enumerate() {
            d.add_vertex_with_id(ids[i], kd, ph).unwrap();
        }
        let k = self.spiders.len();
        d.set_inputs((0..self.inputs.len()).map(|j| ids[k + j]).collect());
        d.set_outputs((0..self.outputs.len()).map(|j| ids[k + self.inputs.len() + j]).collect());
        for (pos, &i) in edge_order.iter().enumerate() {
            let (a, b) = (ids[es[i].0], ids[es[i].1]);
            if flip[pos] {
                d.add_edge(b, a);
            } else {
                d.add_edge(a, b);
            }
        }
        d
    }

    fn sizes(&self) -> (usize, usize) {
        let (vs, es) = self.flat();
        (vs.len(), es.len())
    }

    fn build(&self) -> ZXDiagram {
        let (nv, ne) = self.sizes();
        let ids: Vec<VertexId> = (0..nv).collect();
        let order: Vec<usize> = (0..ne).collect();
        self.build_with(&ids, &order, &vec![false; ne])
    }

    fn relabelled(&self, seed: u64) -> ZXDiagram {
        let (nv, ne) = self.sizes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ids: Vec<VertexId> = (0..nv).map(|i| 3 * i + 7).collect();
        ids.shuffle(&mut rng);
        let mut order: Vec<usize> = (0..ne).collect();
        order.shuffle(&mut rng);
        let flip: Vec<bool> = order.iter().map(|_| rand::Rng::gen(&mut rng)).collect();
        self.build_with(&ids, &order, &flip)
    }
}

fn library() -> Vec<RewriteRule> {
    let mut out = vec![
        rule(RuleName::Elim, None).unwrap(),
        rule(RuleName::Four, None).unwrap(),
        rule(RuleName::Five, None).unwrap(),
        rule(RuleName::Pauli1, None).unwrap(),
        rule(RuleName::Naive, None).unwrap(),
    ];
    for n in 2..=8 {
        out.push(rule(RuleName::Fuse, Some(n)).unwrap());
    }
    for n in [4, 6, 8] {
        out.push(rule(RuleName::NPlus, Some(n)).unwrap());
        out.push(rule(RuleName::N, Some(n)).unwrap());
    }
    out
}

fn nonidentity_pauli(max: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(0u8..4, 1..=max)
        .prop_filter("identity", |v| v.iter().any(|&x| x != 0))
        .prop_map(|v| {
            let letters: Vec<Pauli> = v.iter().map(|&x| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][x as usize]).collect();
            PauliString::from_letters(&letters)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabelling_leaves_the_map_unchanged(s in shape(6), seed in any::<u64>()) {
        let a = interpret(&s.build()).unwrap();
        let b = interpret(&s.relabelled(seed)).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn text_round_trip_is_exact(s in shape(6), seed in any::<u64>()) {
        let d = s.relabelled(seed);
        let t = d.to_text();
        let back = ZXDiagram::from_text(&t).unwrap();
        prop_assert_eq!(back.to_text(), t);
    }

    #[test]
    fn substituting_equal_fragments_keeps_the_map(s in shape(6), pick in any::<prop::sample::Index>()) {
        let d = s.build();
        let base = interpret(&d).unwrap();
        let spiders: Vec<VertexId> = d.vertex_ids().filter(|&v| matches!(d.kind(v), VertexKind::Z | VertexKind::X)).collect();
        prop_assume!(!spiders.is_empty());
        let v = spiders[pick.index(spiders.len())];
        let (k, ph, n) = (d.kind(v), d.phase(v), d.degree(v));
        let mut rules = vec![elim(k).unwrap()];
        if n >= 1 {
            rules.push(fuse(n, k, ph).unwrap());
        }
        for r in rules {
            let m = find_matches(&d, &r).into_iter().find(|m| r.name != RuleName::Fuse || m.vertices.values().any(|&h| h == v));
            if let Some(m) = m {
                let after = apply(&d, &r, &m).unwrap();
                prop_assert!(equal_up_to_scalar(&interpret(&after).unwrap(), &base, DEFAULT_TOL).unwrap(), "{}", r.label());
            }
        }
    }

    #[test]
    fn adjacent_spiders_fuse(k in any::<bool>(), a in 0i64..4, b in 0i64..4, la in 0usize..3, lb in 0usize..3, links in 1usize..3) {
        let k = colour(k);
        let mut two = ZXDiagram::new();
        let (x, y) = (two.add_spider(k, Phase::new(a)), two.add_spider(k, Phase::new(b)));
        for _ in 0..links {
            two.add_edge(x, y);
        }
        let mut one = ZXDiagram::new();
        let z = one.add_spider(k, Phase::new(a + b));
        for (v, legs) in [(x, la), (y, lb)] {
            for _ in 0..legs {
                let o = two.add_output();
                two.add_edge(v, o);
                let o = one.add_output();
                one.add_edge(z, o);
            }
        }
        let (m2, m1) = (interpret(&two).unwrap(), interpret(&one).unwrap());
        prop_assert!(equal_up_to_scalar(&m2, &m1, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn webs_are_closed_under_products(s in shape(7)) {
        let d = s.build();
        prop_assume!(d.num_edges() <= 12);
        let basis = web_basis(&d);
        prop_assume!(basis.len() <= 10);
        for w in span(&basis, d.num_edges()) {
            prop_assert!(is_web(&d, &w));
        }
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i..] {
                prop_assert!(is_web(&d, &a.product(b)));
            }
        }
    }

    #[test]
    fn stabilising_webs_match_the_tableau(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&mut rng, 3, 4);
        let d = c.to_diagram().unwrap();
        prop_assume!(!interpret(&d).unwrap().is_zero(DEFAULT_TOL));
        let a = WebAnalysis::new(&d);
        let t = run(&c).unwrap().pop().unwrap();
        prop_assert_eq!(a.stabilising_classes_log2(), t.rank());
        prop_assert_eq!(a.logical_classes_log2(), 2 * t.num_logical());
        let outs = c.output_qubits();
        let gens = t.generators();
        let mut group = BTreeSet::new();
        for mask in 0..1usize << gens.len() {
            let mut p = PauliString::identity(c.qubits);
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    p.mul_assign(g);
                }
            }
            group.insert(p.restrict(&outs).to_string());
        }
        prop_assert_eq!(stabiliser_strings(&d, &a), group);
    }

    #[test]
    fn nonzero_syndrome_means_detectable(which in any::<prop::sample::Index>(), bits in prop::collection::vec(any::<bool>(), 64)) {
        let mut targets: Vec<ZXDiagram> = library().into_iter().map(|r| r.rhs).filter(|d| d.internal_edges().len() <= 16).collect();
        targets.push(build_measurement_circuit(&parse_code("n 2\nZZ\n").unwrap(), 2).unwrap());
        let d = &targets[which.index(targets.len())];
        let m = detector_matrix(d, &detecting_basis(d)).unwrap();
        let n = 2 * m.edges.len();
        let v = BitVec::from_bools(&bits[..n]);
        if !m.syndrome(&v).is_zero() {
            let oracle = ErrorOracle::new(d, &InterpretConfig::default(), DEFAULT_TOL).unwrap();
            prop_assert_eq!(oracle.classify(&m.error_from_vector(&v)), ErrorClass::Detectable);
        }
    }

    #[test]
    fn x_and_z_on_one_edge_weigh_one(flips in prop::collection::vec((0usize..20, 1u8..4), 0..8), e in 20usize..40) {
        let rest = ErrorSet::from_paulis(flips.iter().map(|&(q, p)| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][p as usize])));
        let mut both = rest.clone();
        both.add_pauli(e, Pauli::X);
        both.add_pauli(e, Pauli::Z);
        prop_assert_eq!(both.weight(), rest.weight() + 1);
        prop_assert_eq!(both.get(e), Pauli::Y);
    }

    #[test]
    fn overheads_stay_within_bounds(half in 2usize..=2048) {
        let n = 2 * half;
        let l = (n as f64).log2();
        prop_assert!(f_overhead(n).unwrap() as f64 <= l);
        prop_assert!(g_overhead(n).unwrap() as f64 <= 2.0 * n as f64 * l);
    }

    #[test]
    fn extraction_is_sound(p in nonidentity_pauli(5)) {
        let dec = decompose_measurement(&p).unwrap();
        let wc = make_well_covered(&dec.diagram, &dec.flow).unwrap();
        let red = reduce_degree(&wc.diagram, &wc.flow).unwrap();
        prop_assert!(verify_flow(&red.diagram, &red.flow).is_well_covered());
        let c = extract_circuit(&red.diagram, &red.flow).unwrap();
        prop_assert!(c.max_weight() <= 2);
        let want = interpret(&dec.diagram).unwrap();
        prop_assert!(equal_up_to_scalar(&interpret(&red.diagram).unwrap(), &want, DEFAULT_TOL).unwrap());
        prop_assert!(equal_up_to_scalar(&interpret(&c.to_diagram().unwrap()).unwrap(), &want, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn measurement_circuits_are_projectors(p in nonidentity_pauli(5)) {
        let c = measurement_circuit_for(&p).unwrap();
        let once = interpret(&c.to_diagram().unwrap()).unwrap();
        let twice = interpret(&c.then(&c).unwrap().to_diagram().unwrap()).unwrap();
        prop_assert!(equal_up_to_scalar(&once, &twice, DEFAULT_TOL).unwrap());
    }
}

#[test]
fn every_rule_left_side_has_no_internal_edges() {
    for r in library().into_iter().filter(|r| r.name != RuleName::Naive) {
        assert!(r.lhs.internal_edges().is_empty(), "{}", r.label());
    }
}

#[test]
fn powers_of_two_need_no_padding() {
    for k in 2..=12 {
        assert_eq!(f_overhead(1 << k).unwrap(), 0);
    }
}

#[test]
fn extraction_adds_f_qubits() {
    for n in 2..=16usize {
        let p: PauliString = "Z".repeat(n).parse().unwrap();
        let c = measurement_circuit_for(&p).unwrap();
        let deg = (2 * n.div_ceil(2)).max(4);
        assert_eq!(c.qubits, n + n.div_ceil(2) + f_overhead(deg).unwrap(), "weight {n}");
    }
}

#[test]
fn degree_reduction_keeps_the_distance() {
    for s in ["ZZ", "ZZZ", "XZY"] {
        let p: PauliString = s.parse().unwrap();
        let dec = decompose_measurement(&p).unwrap();
        let wc = make_well_covered(&dec.diagram, &dec.flow).unwrap();
        let red = reduce_degree(&wc.diagram, &wc.flow).unwrap();
        let opts = DistanceOptions::new(2);
        let before = zx_distance(&dec.diagram, &opts).unwrap().distance;
        let after = zx_distance(&red.diagram, &opts).unwrap().distance;
        assert_eq!(before, after, "{s}");
    }
}

#[test]
fn verdicts_ignore_edge_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in [RuleName::Elim, RuleName::Four, RuleName::Naive] {
        let r = rule(name, None).unwrap();
        let want = verify_distance_preserving(&r).unwrap().verdict;
        let mut edges = r.rhs.edges().to_vec();
        edges.shuffle(&mut rng);
        let mut shuffled = r.clone();
        let mut rhs = r.rhs.clone();
        rhs.remove_edges((0..rhs.num_edges()).collect());
        for (a, b) in edges {
            rhs.add_edge(a, b);
        }
        shuffled.rhs = rhs;
        assert_eq!(verify_distance_preserving(&shuffled).unwrap().verdict, want, "{}", r.label());
    }
}

#[test]
fn another_round_never_lowers_the_distance() {
    let code = parse_code("n 4\nXXXX\nZZZZ\n").unwrap();
    let mut last = 0;
    for rounds in [3, 4] {
        let (d, _, window) = measurement_window(&code, rounds, 1).unwrap();
        let mut opts = DistanceOptions::new(2);
        opts.window = Some(window);
        let got = zx_distance(&d, &opts).unwrap().distance.unwrap_or(3);
        assert!(got >= last);
        last = got;
    }
}
