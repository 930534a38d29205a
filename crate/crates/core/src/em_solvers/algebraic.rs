//! Randomized algebraic EM decider for bipartite graphs.
//!
//! Each edge `e = (l, r)` gets a random exponent `w_e` in `1..=2m` and the Left x Right
//! matrix gets the entry `2^{w_e} * y^{[e is red]}`. The coefficient of `y^k` in the
//! determinant is a signed sum of `2^{w(M)}` over perfect matchings with exactly `k`
//! red edges. If one of those matchings is the unique minimum weight one, its term
//! has the lowest power of two and cannot cancel, so the coefficient is nonzero.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::poly::RedPolynomial;
use super::Answer;
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EmInstance};

pub const DEFAULT_TRIALS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    sides: Vec<Side>,
}

impl Bipartition {
    pub fn new(sides: Vec<Side>) -> Self {
        Bipartition { sides }
    }

    pub fn side(&self, v: usize) -> Side {
        self.sides[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn left(&self) -> Vec<usize> {
        self.members(Side::Left)
    }

    pub fn right(&self) -> Vec<usize> {
        self.members(Side::Right)
    }

    fn members(&self, s: Side) -> Vec<usize> {
        (0..self.sides.len()).filter(|&v| self.sides[v] == s).collect()
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.left().len() == self.sides.len()
    }

    /// True if every edge of `graph` joins the two sides.
    pub fn separates(&self, graph: &ColoredGraph) -> bool {
        self.sides.len() == graph.vertex_count() && graph.edges().iter().all(|e| self.sides[e.u] != self.sides[e.v])
    }
}

/// Two-colours each component by BFS, lowest vertex on the left. `None` on an odd cycle.
pub fn find_bipartition(graph: &ColoredGraph) -> Option<Bipartition> {
    let n = graph.vertex_count();
    let inc = graph.incidence();
    let mut side: Vec<Option<Side>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(Side::Left);
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            let opposite = match side[x] {
                Some(Side::Left) => Side::Right,
                _ => Side::Left,
            };
            for &(_, y) in &inc[x] {
                match side[y] {
                    None => {
                        side[y] = Some(opposite);
                        queue.push_back(y);
                    }
                    Some(s) if s != opposite => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(Bipartition::new(side.into_iter().map(Option::unwrap).collect()))
}

/// Per-edge isolation exponents, each in `1..=2m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightAssignment(Vec<u32>);

impl WeightAssignment {
    /// Rejects exponents outside `1..=2m`.
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        let hi = 2 * weights.len() as u64;
        if let Some((e, &w)) = weights.iter().enumerate().find(|(_, &w)| w == 0 || u64::from(w) > hi) {
            return Err(Error::InvalidArgument(format!(
                "weight {w} of edge {e} outside 1..={hi}"
            )));
        }
        Ok(WeightAssignment(weights))
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Draws each exponent uniformly from `1..=2m`.
pub fn sample_isolation_weights_with<R: Rng + ?Sized>(m: usize, rng: &mut R) -> WeightAssignment {
    let hi = 2 * m as u32;
    WeightAssignment((0..m).map(|_| rng.gen_range(1..=hi)).collect())
}

pub fn sample_isolation_weights(m: usize, seed: u64) -> WeightAssignment {
    sample_isolation_weights_with(m, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Generator for one trial: the seed picks the key, the trial index picks the stream.
pub fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(trial));
    rng
}

/// Determinant of a square matrix over `Z[y]` by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(mut a: Vec<Vec<RedPolynomial>>) -> RedPolynomial {
    let n = a.len();
    if n == 0 {
        return RedPolynomial::one();
    }
    let mut negate = false;
    let mut prev = RedPolynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return RedPolynomial::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            a[i][k] = RedPolynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// The determinant of the Left x Right matrix with entries `2^{w_e} y^{[e red]}`.
///
/// Rows are left vertices and columns right vertices, both in increasing id order.
pub fn symbolic_determinant(
    graph: &ColoredGraph,
    bipartition: &Bipartition,
    weights: &WeightAssignment,
) -> Result<RedPolynomial> {
    if weights.len() != graph.edge_count() {
        return Err(Error::WeightCountMismatch {
            got: weights.len(),
            expected: graph.edge_count(),
        });
    }
    if !bipartition.separates(graph) {
        return Err(Error::NotBipartite);
    }
    let left = bipartition.left();
    let right = bipartition.right();
    if left.len() != right.len() {
        return Err(Error::UnbalancedBipartition {
            left: left.len(),
            right: right.len(),
        });
    }
    let mut index = vec![0; graph.vertex_count()];
    for list in [&left, &right] {
        for (i, &v) in list.iter().enumerate() {
            index[v] = i;
        }
    }
    let size = left.len();
    let mut matrix = vec![vec![RedPolynomial::zero(); size]; size];
    for (e, edge) in graph.edges().iter().enumerate() {
        let (l, r) = match bipartition.side(edge.u) {
            Side::Left => (edge.u, edge.v),
            Side::Right => (edge.v, edge.u),
        };
        let entry = BigInt::one() << weights.weights()[e];
        matrix[index[l]][index[r]] = RedPolynomial::monomial(entry, usize::from(edge.label.is_red()));
    }
    Ok(bareiss_determinant(matrix))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub weights: WeightAssignment,
    /// Whether the coefficient of `y^k` was nonzero.
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicOutcome {
    pub answer: Answer,
    pub transcript: Vec<TrialRecord>,
}

/// Monte Carlo EM decider for bipartite graphs.
///
/// `Yes` is always correct. `ProbablyNo` is wrong with probability at most
/// `2^-trials`. Trials stop at the first hit.
pub fn algebraic_em_decide(inst: &EmInstance, trials: u32, seed: u64) -> Result<AlgebraicOutcome> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let graph = &inst.graph;
    let bip = find_bipartition(graph).ok_or(Error::NotBipartite)?;
    let mut transcript = Vec::new();
    if !bip.is_balanced() {
        // no perfect matching can exist
        return Ok(AlgebraicOutcome {
            answer: Answer::No,
            transcript,
        });
    }
    for trial in 0..trials {
        let weights = sample_isolation_weights_with(graph.edge_count(), &mut trial_rng(seed, trial));
        let det = symbolic_determinant(graph, &bip, &weights)?;
        let hit = !det.coefficient(inst.k).is_zero();
        transcript.push(TrialRecord { trial, weights, hit });
        if hit {
            return Ok(AlgebraicOutcome {
                answer: Answer::Yes,
                transcript,
            });
        }
    }
    Ok(AlgebraicOutcome {
        answer: Answer::ProbablyNo {
            error_bound: 0.5f64.powi(trials as i32),
        },
        transcript,
    })
}
