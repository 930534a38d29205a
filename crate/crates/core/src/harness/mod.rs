//! Instance generation and differential campaigns.

pub mod campaign;
pub mod gen;
pub mod iso;

pub use campaign::{
    campaign_items, exhaustive_sweep, exhaustive_sweep_with, randomized_campaign, run_campaign, sweep_instances,
    CampaignItem, CampaignReport, CampaignSpec, Comparison, Detection, Disagreement, SweepConfig, MAX_SWEEP_N,
};
pub use gen::{gen_bipartite_instance, gen_instance, GenSpec};
