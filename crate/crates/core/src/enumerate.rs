//! Exhaustive perfect-matching enumeration.
//!
//! The search always branches on the lowest-numbered uncovered vertex and tries its
//! free incident edges in ascending edge id. Vertices left with a single free edge
//! are matched immediately and a vertex with no free edge cuts the branch. Forced
//! moves never touch vertices below the current branch vertex, so the output order
//! is the same as the plain search: matchings come out lexicographically ordered by
//! their edge ids listed by increasing lower endpoint.

use std::num::NonZeroU64;

use crate::error::{Error, Result};
use crate::graph::{Graph, Matching};

/// Optional caps on an enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_matchings: Option<NonZeroU64>,
    pub max_nodes: Option<NonZeroU64>,
}

impl EnumerationBudget {
    pub const UNLIMITED: EnumerationBudget = EnumerationBudget {
        max_matchings: None,
        max_nodes: None,
    };

    pub fn unlimited() -> Self {
        Self::UNLIMITED
    }

    /// Panics if `cap` is zero.
    pub fn with_max_matchings(mut self, cap: u64) -> Self {
        self.max_matchings = Some(NonZeroU64::new(cap).expect("matching cap must be positive"));
        self
    }

    /// Panics if `cap` is zero.
    pub fn with_max_nodes(mut self, cap: u64) -> Self {
        self.max_nodes = Some(NonZeroU64::new(cap).expect("node cap must be positive"));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationStatus {
    Running,
    /// Every perfect matching has been produced.
    Complete,
    /// A budget cap stopped the search; more matchings may exist.
    Exhausted,
}

#[derive(Debug)]
struct Frame {
    candidates: Vec<usize>,
    next: usize,
    trail_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Start,
    Searching,
    Done,
}

/// Iterator over the perfect matchings of a graph in canonical order.
///
/// Once it returns `None`, [`PerfectMatchings::status`] tells whether the stream
/// was complete or cut short by the budget.
#[derive(Debug)]
pub struct PerfectMatchings {
    incidence: Vec<Vec<(usize, usize)>>,
    ends: Vec<(usize, usize)>,
    covered: Vec<bool>,
    trail: Vec<usize>,
    frames: Vec<Frame>,
    budget: EnumerationBudget,
    nodes: u64,
    yielded: u64,
    phase: Phase,
    status: EnumerationStatus,
}

pub fn enumerate_perfect_matchings<L>(graph: &Graph<L>, budget: EnumerationBudget) -> PerfectMatchings {
    PerfectMatchings::new(graph, budget)
}

/// Every perfect matching, or [`Error::BudgetExhausted`].
pub fn collect_perfect_matchings<L>(graph: &Graph<L>, budget: EnumerationBudget) -> Result<Vec<Matching>> {
    let mut it = PerfectMatchings::new(graph, budget);
    let all: Vec<Matching> = it.by_ref().collect();
    match it.status() {
        EnumerationStatus::Complete => Ok(all),
        _ => Err(Error::BudgetExhausted),
    }
}

impl PerfectMatchings {
    pub fn new<L>(graph: &Graph<L>, budget: EnumerationBudget) -> Self {
        PerfectMatchings {
            incidence: graph.incidence(),
            ends: graph.edges().iter().map(|e| (e.u, e.v)).collect(),
            covered: vec![false; graph.vertex_count()],
            trail: Vec::new(),
            frames: Vec::new(),
            budget,
            nodes: 0,
            yielded: 0,
            phase: Phase::Start,
            status: EnumerationStatus::Running,
        }
    }

    pub fn status(&self) -> EnumerationStatus {
        self.status
    }

    /// Search-tree nodes expanded so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn finish(&mut self, status: EnumerationStatus) {
        self.phase = Phase::Done;
        self.status = status;
        self.frames.clear();
    }

    fn apply(&mut self, e: usize) {
        let (u, v) = self.ends[e];
        self.covered[u] = true;
        self.covered[v] = true;
        self.trail.push(e);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let e = self.trail.pop().unwrap();
            let (u, v) = self.ends[e];
            self.covered[u] = false;
            self.covered[v] = false;
        }
    }

    fn free_edges(&self, x: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.incidence[x]
            .iter()
            .copied()
            .filter(move |&(_, y)| !self.covered[y])
    }

    fn push_free_neighbours(&self, x: usize, work: &mut Vec<usize>) {
        work.extend(self.free_edges(x).map(|(_, y)| y));
    }

    /// Matches forced vertices until a fixpoint. Returns false on a dead end.
    fn propagate(&mut self, mut work: Vec<usize>) -> bool {
        while let Some(x) = work.pop() {
            if self.covered[x] {
                continue;
            }
            let (first, second) = {
                let mut free = self.free_edges(x);
                (free.next(), free.next())
            };
            let Some((e, y)) = first else {
                return false;
            };
            if second.is_some() {
                continue;
            }
            self.apply(e);
            self.push_free_neighbours(x, &mut work);
            self.push_free_neighbours(y, &mut work);
        }
        true
    }

    /// Opens a branch frame at the lowest uncovered vertex; false if all are covered.
    fn open(&mut self) -> bool {
        let Some(x) = self.covered.iter().position(|&c| !c) else {
            return false;
        };
        let candidates = self.free_edges(x).map(|(e, _)| e).collect();
        self.frames.push(Frame {
            candidates,
            next: 0,
            trail_len: self.trail.len(),
        });
        true
    }

    fn emit(&mut self) -> Option<Matching> {
        if let Some(cap) = self.budget.max_matchings {
            if self.yielded == cap.get() {
                self.finish(EnumerationStatus::Exhausted);
                return None;
            }
        }
        self.yielded += 1;
        Some(Matching::new(self.trail.iter().copied()))
    }
}

impl Iterator for PerfectMatchings {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        loop {
            match self.phase {
                Phase::Done => return None,
                Phase::Start => {
                    self.phase = Phase::Searching;
                    let n = self.covered.len();
                    if n % 2 == 1 || !self.propagate((0..n).collect()) {
                        self.finish(EnumerationStatus::Complete);
                        continue;
                    }
                    if !self.open() {
                        return self.emit();
                    }
                }
                Phase::Searching => {
                    let Some(frame) = self.frames.last_mut() else {
                        self.finish(EnumerationStatus::Complete);
                        continue;
                    };
                    if frame.next == frame.candidates.len() {
                        let f = self.frames.pop().unwrap();
                        self.undo_to(f.trail_len);
                        continue;
                    }
                    let e = frame.candidates[frame.next];
                    frame.next += 1;
                    let trail_len = frame.trail_len;
                    self.undo_to(trail_len);

                    if let Some(cap) = self.budget.max_nodes {
                        if self.nodes == cap.get() {
                            self.finish(EnumerationStatus::Exhausted);
                            continue;
                        }
                    }
                    self.nodes += 1;

                    self.apply(e);
                    let (u, v) = self.ends[e];
                    let mut work = Vec::new();
                    self.push_free_neighbours(u, &mut work);
                    self.push_free_neighbours(v, &mut work);
                    if !self.propagate(work) {
                        continue;
                    }
                    if !self.open() {
                        return self.emit();
                    }
                }
            }
        }
    }
}
