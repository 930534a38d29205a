//! Differential campaigns: the same instances fed to two engines that must agree.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gen::{gen_bipartite_instance, gen_instance, max_extra_edges, max_extra_edges_bipartite, GenSpec};
use super::iso::{nonisomorphic_graphs, MAX_ISO_N};
use crate::em_solvers::{algebraic_em_decide, bcpm_via_em, cpm_via_em, Answer, BruteEm};
use crate::enumerate::EnumerationBudget;
use crate::error::{Error, Result};
use crate::format::write_em;
use crate::graph::{Color, EmInstance, Graph};
use crate::oracles::{brute_bcpm, brute_cpm, brute_em, has_perfect_matching};
use crate::reduction::{decide_em_via_tkpm, BruteTkpm};

pub const MAX_SWEEP_N: usize = 8;

/// A pair of engines checked against each other. The first named engine is the reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    /// `brute_em` vs `decide_em_via_tkpm`.
    EmViaTkpm,
    /// `brute_em` vs `algebraic_em_decide`; bipartite instances only.
    EmAlgebraic { trials: u32 },
    /// `brute_cpm` vs `cpm_via_em(brute_em)`.
    Cpm,
    /// `brute_bcpm` vs `bcpm_via_em(brute_em)`.
    Bcpm,
}

impl Comparison {
    pub fn engines(&self) -> (&'static str, &'static str) {
        match self {
            Comparison::EmViaTkpm => ("brute_em", "via_tkpm"),
            Comparison::EmAlgebraic { .. } => ("brute_em", "algebraic"),
            Comparison::Cpm => ("brute_cpm", "cpm_via_em"),
            Comparison::Bcpm => ("brute_bcpm", "bcpm_via_em"),
        }
    }

    pub fn name(&self) -> String {
        let (a, b) = self.engines();
        format!("{a} vs {b}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub instance_id: u64,
    pub comparison: String,
    pub reference: String,
    pub candidate: String,
    /// Generator seed, when the instance came from the generator.
    pub seed: Option<u64>,
    /// The instance in `p em` text form.
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub instance_id: u64,
    pub comparison: String,
    pub reason: String,
    pub instance: String,
}

/// How often the randomized decider found a yes-instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub yes_instances: u64,
    pub detected: u64,
}

impl Detection {
    pub fn rate(&self) -> f64 {
        if self.yes_instances == 0 {
            1.0
        } else {
            self.detected as f64 / self.yes_instances as f64
        }
    }
}

/// Result of a campaign. Counts are per (instance, comparison) check.
///
/// `agreements` includes statistical misses: a `ProbablyNo` from the randomized decider
/// on a yes-instance is within its error contract and is counted in
/// `statistical_misses`, never in `disagreements`. Checks that could not run (budget
/// exhausted, engine not applicable) are listed in `skipped` and not counted as run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub instances_run: u64,
    pub agreements: u64,
    pub statistical_misses: u64,
    pub disagreements: Vec<Disagreement>,
    pub skipped: Vec<Skipped>,
    pub detection: Option<Detection>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl CampaignReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for CampaignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed:               {}", self.seed)?;
        writeln!(f, "checks run:         {}", self.instances_run)?;
        writeln!(f, "agreements:         {}", self.agreements)?;
        writeln!(f, "statistical misses: {}", self.statistical_misses)?;
        writeln!(f, "hard disagreements: {}", self.disagreements.len())?;
        writeln!(f, "skipped:            {}", self.skipped.len())?;
        if let Some(d) = self.detection {
            writeln!(
                f,
                "detection:          {}/{} ({:.4})",
                d.detected,
                d.yes_instances,
                d.rate()
            )?;
        }
        for (engine, ms) in &self.timings_ms {
            writeln!(f, "time {engine:<14} {ms:.1} ms")?;
        }
        for d in &self.disagreements {
            writeln!(
                f,
                "DISAGREEMENT #{} {}: {} vs {} (seed {:?})\n{}",
                d.instance_id, d.comparison, d.reference, d.candidate, d.seed, d.instance
            )?;
        }
        Ok(())
    }
}

/// An instance queued for checking.
#[derive(Debug, Clone)]
pub struct CampaignItem {
    pub instance: EmInstance,
    pub seed: Option<u64>,
}

enum Outcome {
    Agree,
    StatisticalMiss,
    Hard { reference: String, candidate: String },
    Skip(String),
}

struct CheckResult {
    outcome: Outcome,
    /// Reference said yes and the candidate is randomized: did it find it?
    detection: Option<bool>,
    timings: [(&'static str, Duration); 2],
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn describe(a: Answer) -> String {
    match a {
        Answer::Yes => "yes".into(),
        Answer::No => "no".into(),
        Answer::ProbablyNo { error_bound } => format!("probably-no (error <= {error_bound:e})"),
    }
}

fn run_check(item: &CampaignItem, cmp: Comparison, budget: EnumerationBudget, algebraic_seed: u64) -> CheckResult {
    let inst = &item.instance;
    let (ra, rb) = cmp.engines();
    let exact = |reference: Result<bool>, candidate: Result<bool>, t: [(&'static str, Duration); 2]| {
        let outcome = match (reference, candidate) {
            (Ok(a), Ok(b)) if a == b => Outcome::Agree,
            (Ok(a), Ok(b)) => Outcome::Hard {
                reference: yes_no(a),
                candidate: yes_no(b),
            },
            (Err(e), _) | (_, Err(e)) => Outcome::Skip(e.to_string()),
        };
        CheckResult {
            outcome,
            detection: None,
            timings: t,
        }
    };
    let brute = BruteEm { budget };
    match cmp {
        Comparison::EmViaTkpm => {
            let (a, ta) = timed(|| brute_em(inst, budget).map(|w| w.is_some()));
            let (b, tb) = timed(|| decide_em_via_tkpm(inst, &BruteTkpm { budget }).map(|d| d.yes));
            exact(a, b, [(ra, ta), (rb, tb)])
        }
        Comparison::Cpm => {
            let (a, ta) = timed(|| brute_cpm(inst, budget).map(|w| w.is_some()));
            let (b, tb) = timed(|| cpm_via_em(inst, &brute).map(Answer::is_yes));
            exact(a, b, [(ra, ta), (rb, tb)])
        }
        Comparison::Bcpm => {
            let (a, ta) = timed(|| brute_bcpm(inst, budget).map(|w| w.is_some()));
            let (b, tb) = timed(|| bcpm_via_em(inst, &brute).map(Answer::is_yes));
            exact(a, b, [(ra, ta), (rb, tb)])
        }
        Comparison::EmAlgebraic { trials } => {
            let (a, ta) = timed(|| brute_em(inst, budget).map(|w| w.is_some()));
            let (b, tb) = timed(|| algebraic_em_decide(inst, trials, algebraic_seed).map(|o| o.answer));
            let timings = [(ra, ta), (rb, tb)];
            let (outcome, detection) = match (a, b) {
                (Err(e), _) | (_, Err(e)) => (Outcome::Skip(e.to_string()), None),
                (Ok(truth), Ok(ans)) => {
                    let outcome = match (truth, ans) {
                        (true, Answer::Yes) | (false, Answer::No | Answer::ProbablyNo { .. }) => Outcome::Agree,
                        (true, Answer::ProbablyNo { .. }) => Outcome::StatisticalMiss,
                        (truth, ans) => Outcome::Hard {
                            reference: yes_no(truth),
                            candidate: describe(ans),
                        },
                    };
                    (outcome, truth.then_some(ans.is_yes()))
                }
            };
            CheckResult {
                outcome,
                detection,
                timings,
            }
        }
    }
}

fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every comparison on every item and merges the results in item order.
pub fn run_campaign(
    items: &[CampaignItem],
    comparisons: &[Comparison],
    budget: EnumerationBudget,
    seed: u64,
) -> CampaignReport {
    let results: Vec<(u64, Comparison, CheckResult)> = items
        .par_iter()
        .enumerate()
        .flat_map_iter(|(id, item)| {
            let alg_seed = derive_seed(seed ^ 0xA1CE, id as u64);
            comparisons
                .iter()
                .map(move |&cmp| (id as u64, cmp, run_check(item, cmp, budget, alg_seed)))
        })
        .collect();

    let mut report = CampaignReport {
        seed,
        ..CampaignReport::default()
    };
    let mut detection: Option<Detection> = None;
    for (id, cmp, res) in results {
        for (engine, t) in res.timings {
            *report.timings_ms.entry(engine.to_string()).or_default() += t.as_secs_f64() * 1e3;
        }
        let item = &items[id as usize];
        match res.outcome {
            Outcome::Agree => {
                report.instances_run += 1;
                report.agreements += 1;
            }
            Outcome::StatisticalMiss => {
                report.instances_run += 1;
                report.agreements += 1;
                report.statistical_misses += 1;
            }
            Outcome::Hard { reference, candidate } => {
                report.instances_run += 1;
                report.disagreements.push(Disagreement {
                    instance_id: id,
                    comparison: cmp.name(),
                    reference,
                    candidate,
                    seed: item.seed,
                    instance: write_em(&item.instance),
                });
            }
            Outcome::Skip(reason) => report.skipped.push(Skipped {
                instance_id: id,
                comparison: cmp.name(),
                reason,
                instance: write_em(&item.instance),
            }),
        }
        if let Some(hit) = res.detection {
            let d = detection.get_or_insert_with(Detection::default);
            d.yes_instances += 1;
            d.detected += u64::from(hit);
        }
    }
    report.detection = detection;
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub max_n: usize,
    pub seed: u64,
    /// Graphs sampled per vertex count above the isomorphism-enumeration limit.
    pub sampled_graphs: usize,
    /// Colorings sampled when a graph has more than `MAX_ALL_COLORINGS_M` edges.
    pub sampled_colorings: usize,
    pub budget: EnumerationBudget,
}

/// Graphs with at most this many edges get every coloring.
pub const MAX_ALL_COLORINGS_M: usize = 10;

impl SweepConfig {
    pub fn new(max_n: usize) -> Self {
        SweepConfig {
            max_n,
            seed: 0x5EED,
            sampled_graphs: 30,
            sampled_colorings: 64,
            budget: EnumerationBudget::unlimited(),
        }
    }
}

fn colorings(m: usize, cfg: &SweepConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<Color>> {
    let bits = |mask: u64| -> Vec<Color> {
        (0..m)
            .map(|i| if mask >> i & 1 == 1 { Color::Red } else { Color::Blue })
            .collect()
    };
    if m <= MAX_ALL_COLORINGS_M {
        (0..1u64 << m).map(bits).collect()
    } else {
        (0..cfg.sampled_colorings)
            .map(|_| (0..m).map(|_| if rng.gen_bool(0.5) { Color::Red } else { Color::Blue }).collect())
            .collect()
    }
}

/// The instance set of an exhaustive sweep.
///
/// For each even `n` in `2..=max_n`: every graph up to isomorphism that has a perfect
/// matching (for `n <= 6`), otherwise `sampled_graphs` seeded planted-matching graphs;
/// every coloring when `m <= 10`, otherwise `sampled_colorings` seeded ones; and every
/// `k` in `0..=n/2`.
pub fn sweep_instances(cfg: &SweepConfig) -> Result<Vec<EmInstance>> {
    if cfg.max_n > MAX_SWEEP_N {
        return Err(Error::InvalidArgument(format!(
            "exhaustive sweep is limited to max_n <= {MAX_SWEEP_N}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for n in (2..=cfg.max_n).step_by(2) {
        let shapes: Vec<Vec<(usize, usize)>> = if n <= MAX_ISO_N {
            nonisomorphic_graphs(n)
                .into_iter()
                .filter(|pairs| {
                    let g: Graph<()> = Graph::new(n, pairs.iter().map(|&(u, v)| (u, v, ())));
                    has_perfect_matching(&g, cfg.budget).unwrap_or(true)
                })
                .collect()
        } else {
            (0..cfg.sampled_graphs)
                .map(|_| {
                    let extra = rng.gen_range(0..=max_extra_edges(n));
                    let spec = GenSpec::new(n, extra, 0.0, rng.gen());
                    let g = gen_instance(&spec)?.graph;
                    Ok(g.edges().iter().map(|e| (e.u, e.v)).collect())
                })
                .collect::<Result<_>>()?
        };
        for pairs in shapes {
            for colors in colorings(pairs.len(), cfg, &mut rng) {
                let graph = Graph::new(n, pairs.iter().zip(&colors).map(|(&(u, v), &c)| (u, v, c)));
                for k in 0..=n / 2 {
                    out.push(EmInstance::new(graph.clone(), k));
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustive check of `brute_em` against `decide_em_via_tkpm` with default settings.
pub fn exhaustive_sweep(max_n: usize) -> Result<CampaignReport> {
    exhaustive_sweep_with(&SweepConfig::new(max_n), &[Comparison::EmViaTkpm])
}

pub fn exhaustive_sweep_with(cfg: &SweepConfig, comparisons: &[Comparison]) -> Result<CampaignReport> {
    let items: Vec<CampaignItem> = sweep_instances(cfg)?
        .into_iter()
        .map(|instance| CampaignItem { instance, seed: None })
        .collect();
    Ok(run_campaign(&items, comparisons, cfg.budget, cfg.seed))
}

/// Shape of the instances in a randomized campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSpec {
    pub count: usize,
    /// Vertex counts to draw from; all even and >= 2.
    pub ns: Vec<usize>,
    /// Fixed red probability, or uniform in `[0, 1]` per instance when `None`.
    pub red_prob: Option<f64>,
    /// Check every `k` in `0..=n/2` for each generated graph instead of the drawn one.
    pub all_k: bool,
    pub bipartite: bool,
    pub seed: u64,
    pub budget: EnumerationBudget,
}

impl CampaignSpec {
    pub fn new(count: usize, seed: u64) -> Self {
        CampaignSpec {
            count,
            ns: vec![2, 4, 6, 8],
            red_prob: None,
            all_k: false,
            bipartite: false,
            seed,
            budget: EnumerationBudget::unlimited(),
        }
    }
}

/// Generates `count` graphs as described by `spec`.
pub fn campaign_items(spec: &CampaignSpec) -> Result<Vec<CampaignItem>> {
    let mut items = Vec::new();
    for i in 0..spec.count {
        let gen_seed = derive_seed(spec.seed, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(gen_seed);
        let n = *spec
            .ns
            .choose(&mut rng)
            .ok_or_else(|| Error::InvalidArgument("no vertex counts given".into()))?;
        let cap = if spec.bipartite {
            max_extra_edges_bipartite(n)
        } else {
            max_extra_edges(n)
        };
        let extra = rng.gen_range(0..=cap);
        let red_prob = spec.red_prob.unwrap_or_else(|| rng.gen_range(0.0..=1.0));
        let gs = GenSpec::new(n, extra, red_prob, gen_seed);
        let inst = if spec.bipartite {
            gen_bipartite_instance(&gs)?
        } else {
            gen_instance(&gs)?
        };
        if spec.all_k {
            for k in 0..=n / 2 {
                items.push(CampaignItem {
                    instance: EmInstance::new(inst.graph.clone(), k),
                    seed: Some(gen_seed),
                });
            }
        } else {
            items.push(CampaignItem {
                instance: inst,
                seed: Some(gen_seed),
            });
        }
    }
    Ok(items)
}

/// Seeded random differential campaign. Instances are generated bipartite when
/// `spec.bipartite` is set or any comparison involves the algebraic decider.
pub fn randomized_campaign(spec: &CampaignSpec, comparisons: &[Comparison]) -> Result<CampaignReport> {
    let mut spec = spec.clone();
    spec.bipartite |= comparisons
        .iter()
        .any(|c| matches!(c, Comparison::EmAlgebraic { .. }));
    let items = campaign_items(&spec)?;
    Ok(run_campaign(&items, comparisons, spec.budget, spec.seed))
}
