//! Named surfaces, the classification of the family and Hilbert series checks.

pub mod classify;
pub mod hilbert;
pub mod recipes;

pub use classify::{
    classify, evidence_plan, normalize, solution_set, solution_set_up_to,
    swapped_solution_set_up_to, table1, table1_tsv, volume_formula, ClassificationRow,
    EvidenceItem, Normalized, Status, TableGroup,
};
pub use hilbert::{hilbert_series_check, two_negative_check, HilbertCheck};
pub use recipes::{build_config, build_config_named, recipes, Config, ConfigName, Recipe};

use crate::error::Result;
use crate::kstab::{delta_lower_bound, DeltaReport};

/// The delta report of a catalog flag.
pub fn delta_report(config: &Config, flag: &str) -> Result<DeltaReport> {
    let (model, points) = config.flag(flag)?;
    delta_lower_bound(model, flag, &points)
}
