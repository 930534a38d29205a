//! Brute-force deciders for EM, TkPM, CPM and BCPM.
//!
//! Each one scans perfect matchings in canonical enumeration order, so witnesses are
//! reproducible: the first qualifying matching wins, and for TkPM the first maximizer.

use crate::enumerate::{enumerate_perfect_matchings, EnumerationBudget, EnumerationStatus, PerfectMatchings};
use crate::error::{Error, Result};
use crate::graph::{top_k_weight, ColoredGraph, EmInstance, Graph, Matching, TkpmInstance};

/// First matching satisfying `pred`, or `None` once the search is complete.
fn first_where(
    mut it: PerfectMatchings,
    mut pred: impl FnMut(&Matching) -> bool,
) -> Result<Option<Matching>> {
    for m in it.by_ref() {
        if pred(&m) {
            return Ok(Some(m));
        }
    }
    match it.status() {
        EnumerationStatus::Complete => Ok(None),
        _ => Err(Error::BudgetExhausted),
    }
}

fn red_filter<'a>(graph: &'a ColoredGraph, accept: impl Fn(usize) -> bool + 'a) -> impl FnMut(&Matching) -> bool + 'a {
    move |m| accept(m.iter().filter(|&e| graph.edges()[e].label.is_red()).count())
}

pub fn has_perfect_matching<L>(graph: &Graph<L>, budget: EnumerationBudget) -> Result<bool> {
    Ok(first_where(enumerate_perfect_matchings(graph, budget), |_| true)?.is_some())
}

/// A perfect matching with exactly `k` red edges.
pub fn brute_em(inst: &EmInstance, budget: EnumerationBudget) -> Result<Option<Matching>> {
    let k = inst.k;
    first_where(
        enumerate_perfect_matchings(&inst.graph, budget),
        red_filter(&inst.graph, move |r| r == k),
    )
}

/// A perfect matching with `r(M) ≡ k (mod 2)`.
pub fn brute_cpm(inst: &EmInstance, budget: EnumerationBudget) -> Result<Option<Matching>> {
    let k = inst.k;
    first_where(
        enumerate_perfect_matchings(&inst.graph, budget),
        red_filter(&inst.graph, move |r| r % 2 == k % 2),
    )
}

/// A perfect matching with `r(M) ≡ k (mod 2)` and `r(M) <= k`.
pub fn brute_bcpm(inst: &EmInstance, budget: EnumerationBudget) -> Result<Option<Matching>> {
    let k = inst.k;
    first_where(
        enumerate_perfect_matchings(&inst.graph, budget),
        red_filter(&inst.graph, move |r| r % 2 == k % 2 && r <= k),
    )
}

/// A perfect matching maximizing the top-k weight, with that maximum.
pub fn brute_tkpm(inst: &TkpmInstance, budget: EnumerationBudget) -> Result<Option<(Matching, u64)>> {
    let weights = inst.graph.weights();
    let mut it = enumerate_perfect_matchings(&inst.graph, budget);
    let mut best: Option<(Matching, u64)> = None;
    for m in it.by_ref() {
        let value = top_k_weight(&weights, m.iter(), inst.k);
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((m, value));
        }
    }
    match it.status() {
        EnumerationStatus::Complete => Ok(best),
        _ => Err(Error::BudgetExhausted),
    }
}
