//! Node-classification protocol and the spreading experiment.
//!
//! Features are classified with one-vs-rest L2-regularized logistic
//! regression over repeated random train/test splits; micro and macro F1
//! are averaged over the repeats.

mod grid;
mod logreg;
mod metrics;
mod protocol;
mod spread;

pub use grid::{grid_search, EmbeddingMethod, GridResult, GridRow, WalkSettings, DEFAULT_GRID};
pub use logreg::{predict, train_ovr_logreg, BinaryModel, LogisticObjective, OvrModel, DEFAULT_REG_STRENGTH};
pub use metrics::{macro_f1, micro_f1};
pub use protocol::{evaluate_protocol, split, EvalReport, RatioScores, SplitSpec, REPORT_HEADER};
pub use spread::{fit_power_law, spread_variance, SpreadCurves};
