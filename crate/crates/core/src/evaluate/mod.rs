//! Metrics, Monte-Carlo evaluation, ROC curves, sigma contours, SSIM and
//! pipeline timing.

pub mod contours;
pub mod metrics;
pub mod montecarlo;
pub mod roc;
pub mod ssim;
pub mod timing;

pub use contours::{sigma_contours, Ellipse, SigmaContours};
pub use metrics::{metrics, ConfusionCounts, MetricSet};
pub use montecarlo::{evaluate_split, monte_carlo, ClassifierSpec, McConfig, McReport};
pub use roc::{roc_sweep, RocPoint};
pub use ssim::ssim;
pub use timing::{pipeline_timing, Inference, TimingReport};
