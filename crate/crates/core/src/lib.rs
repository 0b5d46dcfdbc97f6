//! Information-theoretic difficulty and effort metrics for squash shot
//! retrieval, plus the classic Fitts'-law model family and the least-squares
//! machinery used to fit them.
//!
//! The index of difficulty of a shot is `log2(v * D)`: ball speed `v` (m/s)
//! times the distance `D` (m) the receiving player covers. Dividing by the
//! movement time gives the information rate in bits/s.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, rendering and
//! the command line live in the `squashfitts` crate.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod model;
pub mod stats;
pub mod variants;

pub use analysis::{
    figure_series, run_analysis, subset_label, AnalysisOptions, Figure, FigureSeries,
    ReportDocument,
};
pub use error::{Error, Result};
pub use model::{
    ball_speed, derive_trial, index_of_difficulty, information_rate, real_time_from_slowmo,
    validate_against_court, CourtGeometry, DerivedTrial, ShotKind, TrialKey, TrialRecord,
    TrialWarning,
};
pub use stats::{
    fit_model, group_stats, mean, ols_simple, ols_two_predictor, pearson_r, population_sd,
    FitResult, GroupKey, GroupStats, Grouping, LinearFit, TrialSet, WelfordFit,
};
pub use variants::{
    id_fitts_original, id_mackenzie, model_design_row, predict_mt_steering, predict_mt_welford,
    FittsReference, ModelKind, PointingTrial, TrialRef,
};
