//! The EM to TkPM reduction.
//!
//! Every source edge `e = (u, v)` becomes a path `u - v1 - v2 - v3 - v4 - v` of five
//! edges `p1..p5`, and `k` disjoint extra edges (the set `E_k`) are added on `2k` fresh
//! vertices. Weights: `E_k` edges get 2, blue paths get 0 everywhere, red paths get
//! `(0, 2, 3, 2, 0)`. With `k' = 2|R|` and threshold `4|R| + k`, the source has a
//! perfect matching with exactly `k` red edges iff some perfect matching of the gadget
//! graph has top-`k'` weight at least the threshold.
//!
//! Numbering: source vertices keep `0..n`, path `e` uses vertices `n + 4e .. n + 4e + 4`
//! and edges `5e .. 5e + 5`, and the `E_k` edges come last.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::em_solvers::Answer;
use crate::enumerate::EnumerationBudget;
use crate::error::{Error, Result};
use crate::graph::{top_k_weight, EmInstance, Graph, Matching, TkpmInstance, WeightedGraph};
use crate::oracles::brute_tkpm;

pub const RED_PATH_WEIGHTS: [u64; 5] = [0, 2, 3, 2, 0];
pub const BLUE_PATH_WEIGHTS: [u64; 5] = [0; 5];
pub const EK_WEIGHT: u64 = 2;

/// The replacement path of one source edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePath {
    /// Gadget edge ids `p1..p5` in path order.
    pub edges: [usize; 5],
    /// Subdivision vertices `v1..v4`; `v1` is next to the lower source endpoint.
    pub vertices: [usize; 4],
}

impl EdgePath {
    pub fn middle(&self) -> usize {
        self.edges[2]
    }

    /// Edges used when the source edge is in the matching.
    pub fn matched_pattern(&self) -> [usize; 3] {
        [self.edges[0], self.edges[2], self.edges[4]]
    }

    /// Edges used when it is not.
    pub fn unmatched_pattern(&self) -> [usize; 2] {
        [self.edges[1], self.edges[3]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetMap {
    source: EmInstance,
    target: WeightedGraph,
    paths: Vec<EdgePath>,
    ek_edges: Vec<usize>,
    kprime: usize,
    threshold: u64,
}

impl GadgetMap {
    pub fn source(&self) -> &EmInstance {
        &self.source
    }

    /// The gadget graph `G'`.
    pub fn target(&self) -> &WeightedGraph {
        &self.target
    }

    pub fn paths(&self) -> &[EdgePath] {
        &self.paths
    }

    pub fn ek_edges(&self) -> &[usize] {
        &self.ek_edges
    }

    pub fn kprime(&self) -> usize {
        self.kprime
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// Deterministic text listing of the map.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# source edge -> gadget edge ids p1..p5\n");
        let _ = writeln!(s, "p map {} {}", self.paths.len(), self.ek_edges.len());
        for (e, p) in self.paths.iter().enumerate() {
            let [a, b, c, d, f] = p.edges;
            let _ = writeln!(s, "s {e} {a} {b} {c} {d} {f}");
        }
        s.push('k');
        let _ = write!(s, " {}", self.ek_edges.len());
        for id in &self.ek_edges {
            let _ = write!(s, " {id}");
        }
        let _ = writeln!(s, "\nkprime {}", self.kprime);
        let _ = writeln!(s, "threshold {}", self.threshold);
        s
    }
}

pub fn gadgetize(inst: &EmInstance) -> (TkpmInstance, GadgetMap) {
    let g = &inst.graph;
    let n = g.vertex_count();
    let m = g.edge_count();
    let k = inst.k;
    let reds = g.red_edge_count();

    let mut edges = Vec::with_capacity(5 * m + k);
    let mut paths = Vec::with_capacity(m);
    for (e, edge) in g.edges().iter().enumerate() {
        let base = n + 4 * e;
        let vertices = [base, base + 1, base + 2, base + 3];
        let chain = [edge.u, base, base + 1, base + 2, base + 3, edge.v];
        let weights = if edge.label.is_red() {
            RED_PATH_WEIGHTS
        } else {
            BLUE_PATH_WEIGHTS
        };
        let first = edges.len();
        for (i, w) in weights.into_iter().enumerate() {
            edges.push((chain[i], chain[i + 1], w));
        }
        paths.push(EdgePath {
            edges: [first, first + 1, first + 2, first + 3, first + 4],
            vertices,
        });
    }
    let ek_base = n + 4 * m;
    let ek_edges: Vec<usize> = (0..k)
        .map(|i| {
            edges.push((ek_base + 2 * i, ek_base + 2 * i + 1, EK_WEIGHT));
            edges.len() - 1
        })
        .collect();

    let target = Graph::new(ek_base + 2 * k, edges);
    let kprime = 2 * reds;
    let threshold = 4 * reds as u64 + k as u64;
    let tkpm = TkpmInstance::new(target.clone(), kprime);
    let map = GadgetMap {
        source: inst.clone(),
        target,
        paths,
        ek_edges,
        kprime,
        threshold,
    };
    (tkpm, map)
}

/// Maps a perfect matching of `G` to the corresponding perfect matching of `G'`.
pub fn lift_matching(m: &Matching, map: &GadgetMap) -> Result<Matching> {
    if !map.source.graph.is_perfect_matching(m)? {
        return Err(Error::NotPerfect);
    }
    let mut out = Vec::with_capacity(3 * m.len() + 2 * (map.paths.len() - m.len()) + map.ek_edges.len());
    for (e, path) in map.paths.iter().enumerate() {
        if m.contains(e) {
            out.extend(path.matched_pattern());
        } else {
            out.extend(path.unmatched_pattern());
        }
    }
    out.extend_from_slice(&map.ek_edges);
    Ok(Matching::new(out))
}

/// Maps a perfect matching of `G'` back to `G` by reading off the middle path edges.
pub fn project_matching(mp: &Matching, map: &GadgetMap) -> Result<Matching> {
    if !map.target.is_perfect_matching(mp)? {
        return Err(Error::NotPerfect);
    }
    Ok(read_middles(mp, map))
}

fn read_middles(mp: &Matching, map: &GadgetMap) -> Matching {
    map.paths
        .iter()
        .enumerate()
        .filter(|(_, p)| mp.contains(p.middle()))
        .map(|(e, _)| e)
        .collect()
}

/// Projection that validates the gadget structure instead of perfectness: every path
/// must use one of its two legal patterns, all of `E_k` must be present, and the
/// projected edges must form a perfect matching of `G`.
pub fn project_matching_strict(mp: &Matching, map: &GadgetMap) -> Result<Matching> {
    if let Some(&bad) = mp.edges().iter().find(|&&id| id >= map.target.edge_count()) {
        return Err(Error::InvalidEdgeId {
            edge: bad,
            edge_count: map.target.edge_count(),
        });
    }
    for (e, path) in map.paths.iter().enumerate() {
        let used: Vec<bool> = path.edges.iter().map(|&p| mp.contains(p)).collect();
        let legal = used == [true, false, true, false, true] || used == [false, true, false, true, false];
        if !legal {
            return Err(Error::GadgetMismatch(format!(
                "path of source edge {e} uses pattern {used:?}"
            )));
        }
    }
    if let Some(&missing) = map.ek_edges.iter().find(|&&id| !mp.contains(id)) {
        return Err(Error::GadgetMismatch(format!("E_k edge {missing} missing")));
    }
    let m = read_middles(mp, map);
    if !map.source.graph.is_perfect_matching(&m)? {
        return Err(Error::GadgetMismatch("middle edges do not form a perfect matching".into()));
    }
    Ok(m)
}

/// `w^{k'}` of the lift of `m`.
pub fn lifted_value(tkpm: &TkpmInstance, map: &GadgetMap, m: &Matching) -> Result<u64> {
    let lifted = lift_matching(m, map)?;
    Ok(top_k_weight(&tkpm.graph.weights(), lifted.iter(), map.kprime))
}

pub trait TkpmSolver {
    /// The optimum top-k weight, or `None` when there is no perfect matching.
    fn optimum(&self, inst: &TkpmInstance) -> Result<Option<u64>>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BruteTkpm {
    pub budget: EnumerationBudget,
}

impl TkpmSolver for BruteTkpm {
    fn optimum(&self, inst: &TkpmInstance) -> Result<Option<u64>> {
        Ok(brute_tkpm(inst, self.budget)?.map(|(_, v)| v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TkpmDecision {
    pub yes: bool,
    pub optimum: Option<u64>,
    pub threshold: u64,
}

impl TkpmDecision {
    pub fn answer(&self) -> Answer {
        if self.yes {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

/// Decides EM by solving the gadget TkPM instance and comparing with the threshold.
pub fn decide_em_via_tkpm(inst: &EmInstance, solver: &impl TkpmSolver) -> Result<TkpmDecision> {
    let (tkpm, map) = gadgetize(inst);
    let optimum = solver.optimum(&tkpm)?;
    Ok(TkpmDecision {
        yes: optimum.is_some_and(|v| v >= map.threshold),
        optimum,
        threshold: map.threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::collect_perfect_matchings;
    use crate::format::write_tkpm;
    use crate::graph::Color::{self, *};

    fn k2(c: Color, k: usize) -> EmInstance {
        EmInstance::new(Graph::new(2, [(0, 1, c)]), k)
    }

    fn c4_red0(k: usize) -> EmInstance {
        EmInstance::new(
            Graph::new(4, [(0, 1, Red), (1, 2, Blue), (2, 3, Blue), (0, 3, Blue)]),
            k,
        )
    }

    #[test]
    fn k2_red_gadget() {
        let (t, map) = gadgetize(&k2(Red, 1));
        assert_eq!(t.graph.vertex_count(), 8);
        assert_eq!(t.graph.edge_count(), 6);
        assert_eq!(t.graph.weights(), vec![0, 2, 3, 2, 0, 2]);
        assert_eq!(t.k, 2);
        assert_eq!(map.kprime(), 2);
        assert_eq!(map.threshold(), 5);
        assert_eq!(map.ek_edges(), &[5]);
        assert_eq!(map.paths()[0].vertices, [2, 3, 4, 5]);
        assert_eq!(
            write_tkpm(&t),
            "p tkpm 8 6 2\ne 0 2 0\ne 2 3 2\ne 3 4 3\ne 4 5 2\ne 1 5 0\ne 6 7 2\n"
        );
        assert_eq!(
            map.to_text(),
            "# source edge -> gadget edge ids p1..p5\np map 1 1\ns 0 0 1 2 3 4\nk 1 5\nkprime 2\nthreshold 5\n"
        );
    }

    #[test]
    fn k2_blue_gadget() {
        let (t, map) = gadgetize(&k2(Blue, 0));
        assert_eq!(t.graph.weights(), vec![0; 5]);
        assert!(map.ek_edges().is_empty());
        assert_eq!((map.kprime(), map.threshold()), (0, 0));
    }

    #[test]
    fn c4_gadget_sizes() {
        let (t, map) = gadgetize(&c4_red0(1));
        assert_eq!(t.graph.vertex_count(), 22);
        assert_eq!(t.graph.edge_count(), 21);
        assert_eq!((map.kprime(), map.threshold()), (2, 5));
        assert!(t.graph.validate().is_ok());
    }

    #[test]
    fn lift_examples() {
        let (t, map) = gadgetize(&k2(Red, 1));
        let lifted = lift_matching(&Matching::new([0]), &map).unwrap();
        assert_eq!(lifted, Matching::new([0, 2, 4, 5]));
        assert!(t.graph.is_perfect_matching(&lifted).unwrap());
        assert_eq!(project_matching(&lifted, &map).unwrap(), Matching::new([0]));

        let (t, map) = gadgetize(&c4_red0(1));
        let lifted = lift_matching(&Matching::new([0, 2]), &map).unwrap();
        let p = map.paths();
        for e in [p[0].middle(), p[2].middle(), p[1].edges[1], p[1].edges[3], p[3].edges[1], p[3].edges[3], 20] {
            assert!(lifted.contains(e), "missing {e}");
        }
        assert!(t.graph.is_perfect_matching(&lifted).unwrap());
    }

    #[test]
    fn lift_and_project_reject_non_perfect() {
        let (_, map) = gadgetize(&c4_red0(1));
        assert_eq!(lift_matching(&Matching::new([0]), &map), Err(Error::NotPerfect));
        assert_eq!(project_matching(&Matching::new([2]), &map), Err(Error::NotPerfect));
    }

    #[test]
    fn only_two_patterns_per_path() {
        // single path plus its endpoints: the gadget of K2 without E_k
        let (t, map) = gadgetize(&k2(Red, 0));
        let all = collect_perfect_matchings(&t.graph, EnumerationBudget::unlimited()).unwrap();
        assert_eq!(all, vec![Matching::new(map.paths()[0].matched_pattern())]);

        let k4 = EmInstance::new(
            Graph::new(4, [(0, 1, Red), (0, 2, Blue), (0, 3, Red), (1, 2, Red), (1, 3, Blue), (2, 3, Blue)]),
            1,
        );
        let (t, map) = gadgetize(&k4);
        let all = collect_perfect_matchings(&t.graph, EnumerationBudget::unlimited()).unwrap();
        assert_eq!(all.len(), 3);
        for mp in &all {
            project_matching_strict(mp, &map).unwrap();
        }
    }

    #[test]
    fn strict_projection_flags_corruption() {
        let (_, map) = gadgetize(&c4_red0(1));
        let good = lift_matching(&Matching::new([1, 3]), &map).unwrap();
        assert_eq!(project_matching_strict(&good, &map).unwrap(), Matching::new([1, 3]));

        // flip path 0 to the matched pattern
        let p0 = map.paths()[0];
        let flipped: Matching = good
            .iter()
            .filter(|e| !p0.unmatched_pattern().contains(e))
            .chain(p0.matched_pattern())
            .collect();
        assert!(matches!(project_matching_strict(&flipped, &map), Err(Error::GadgetMismatch(_))));
        // a half-used path
        let broken: Matching = good.iter().filter(|&e| e != p0.edges[1]).collect();
        assert!(matches!(project_matching_strict(&broken, &map), Err(Error::GadgetMismatch(_))));
        // dropping E_k
        let no_ek: Matching = good.iter().filter(|&e| e != 20).collect();
        assert!(matches!(project_matching_strict(&no_ek, &map), Err(Error::GadgetMismatch(_))));
    }

    #[test]
    fn decisions_via_tkpm() {
        let solver = BruteTkpm::default();
        let d = decide_em_via_tkpm(&k2(Red, 1), &solver).unwrap();
        assert_eq!(d, TkpmDecision { yes: true, optimum: Some(5), threshold: 5 });

        let d = decide_em_via_tkpm(&k2(Red, 0), &solver).unwrap();
        assert_eq!(d, TkpmDecision { yes: false, optimum: Some(3), threshold: 4 });

        let d = decide_em_via_tkpm(&c4_red0(1), &solver).unwrap();
        assert!(d.yes);
        assert_eq!(d.optimum, Some(5));
    }

    #[test]
    fn no_red_edges_but_positive_k_is_no() {
        let inst = EmInstance::new(Graph::new(4, [(0, 1, Blue), (2, 3, Blue)]), 1);
        let (t, map) = gadgetize(&inst);
        assert_eq!((map.kprime(), map.threshold()), (0, 1));
        assert_eq!(t.k, 0);
        let d = decide_em_via_tkpm(&inst, &BruteTkpm::default()).unwrap();
        assert_eq!(d, TkpmDecision { yes: false, optimum: Some(0), threshold: 1 });
    }

    #[test]
    fn no_perfect_matching_is_no() {
        let inst = EmInstance::new(Graph::new(4, [(0, 1, Red), (1, 2, Red), (1, 3, Red)]), 1);
        let d = decide_em_via_tkpm(&inst, &BruteTkpm::default()).unwrap();
        assert_eq!(d.optimum, None);
        assert!(!d.yes);
    }

    #[test]
    fn lifted_values_follow_closed_form() {
        let inst = c4_red0(0);
        let (t, map) = gadgetize(&inst);
        // M = {0,2} has r = 1 > k = 0: 4*1 - 1 + 0 = 3
        assert_eq!(lifted_value(&t, &map, &Matching::new([0, 2])).unwrap(), 3);
        // M = {1,3} has r = 0 = k: threshold 4
        assert_eq!(lifted_value(&t, &map, &Matching::new([1, 3])).unwrap(), 4);
    }
}
