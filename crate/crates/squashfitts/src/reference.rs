//! Values printed alongside the bundled dataset, kept as cross-check targets.
//! None of these feed a computation.

use squashfitts_core::ShotKind::{self, Boast, Drive, Drop, Lob};

/// Rounded V, ID and IR as printed next to one raw trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedRow {
    pub person_id: u32,
    pub shot: ShotKind,
    pub trial_index: u32,
    pub speed_mps: f64,
    pub id_bits: f64,
    pub info_rate_bps: f64,
}

const fn printed(
    person_id: u32,
    shot: ShotKind,
    trial_index: u32,
    speed_mps: f64,
    id_bits: f64,
    info_rate_bps: f64,
) -> PrintedRow {
    PrintedRow {
        person_id,
        shot,
        trial_index,
        speed_mps,
        id_bits,
        info_rate_bps,
    }
}

pub const PRINTED_ROWS: [PrintedRow; 36] = [
    printed(1, Drive, 1, 29.75, 6.8, 5.57),
    printed(1, Drive, 2, 28.77, 6.8, 5.62),
    printed(1, Drive, 3, 29.29, 7.01, 5.7),
    printed(1, Drop, 1, 15.57, 5.79, 5.46),
    printed(1, Drop, 2, 16.26, 5.84, 5.36),
    printed(1, Drop, 3, 15.32, 5.8, 5.58),
    printed(1, Lob, 1, 21.95, 6.38, 3.38),
    printed(1, Lob, 2, 18.34, 6.2, 3.8),
    printed(1, Lob, 3, 20.46, 6.21, 3.49),
    printed(1, Boast, 1, 12.26, 5.91, 5.83),
    printed(1, Boast, 2, 13.39, 5.59, 4.63),
    printed(1, Boast, 3, 13.44, 5.56, 4.38),
    printed(2, Drive, 1, 23.18, 6.48, 4.76),
    printed(2, Drive, 2, 27.0, 6.71, 5.34),
    printed(2, Drive, 3, 29.07, 6.52, 4.94),
    printed(2, Drop, 1, 14.26, 5.21, 4.65),
    printed(2, Drop, 2, 14.45, 5.58, 5.17),
    printed(2, Drop, 3, 14.21, 5.34, 4.81),
    printed(2, Lob, 1, 24.24, 6.22, 4.29),
    printed(2, Lob, 2, 26.09, 6.56, 3.47),
    printed(2, Lob, 3, 21.19, 6.12, 4.19),
    printed(2, Boast, 1, 9.63, 5.5, 4.07),
    printed(2, Boast, 2, 10.36, 5.46, 3.35),
    printed(2, Boast, 3, 10.54, 5.54, 3.9),
    printed(3, Drive, 1, 31.09, 6.69, 5.06),
    printed(3, Drive, 2, 30.41, 6.74, 5.03),
    printed(3, Drive, 3, 25.42, 6.54, 5.15),
    printed(3, Drop, 1, 15.73, 5.87, 5.39),
    printed(3, Drop, 2, 16.79, 5.88, 5.44),
    printed(3, Drop, 3, 15.4, 5.79, 5.2),
    printed(3, Lob, 1, 20.62, 6.21, 3.49),
    printed(3, Lob, 2, 19.16, 6.15, 3.75),
    printed(3, Lob, 3, 24.17, 6.55, 4.31),
    printed(3, Boast, 1, 9.38, 5.5, 4.87),
    printed(3, Boast, 2, 10.57, 5.6, 3.59),
    printed(3, Boast, 3, 8.97, 5.46, 3.79),
];

/// Printed mean and SD of ID for one group; `person_id = None` pools all players.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedGroup {
    pub person_id: Option<u32>,
    pub shot: ShotKind,
    pub mean_id: f64,
    pub sd_id: f64,
}

const fn group(person_id: Option<u32>, shot: ShotKind, mean_id: f64, sd_id: f64) -> PrintedGroup {
    PrintedGroup {
        person_id,
        shot,
        mean_id,
        sd_id,
    }
}

pub const PRINTED_GROUPS: [PrintedGroup; 16] = [
    group(Some(1), Drive, 6.87, 0.1),
    group(Some(1), Drop, 5.81, 0.02),
    group(Some(1), Lob, 6.26, 0.08),
    group(Some(1), Boast, 5.69, 0.16),
    group(Some(2), Drive, 6.57, 0.1),
    group(Some(2), Drop, 5.38, 0.15),
    group(Some(2), Lob, 6.3, 0.2),
    group(Some(2), Boast, 5.5, 0.03),
    group(Some(3), Drive, 6.66, 0.08),
    group(Some(3), Drop, 5.85, 0.04),
    group(Some(3), Lob, 6.3, 0.2),
    group(Some(3), Boast, 5.52, 0.06),
    group(None, Drive, 6.7, 0.16),
    group(None, Drop, 5.68, 0.23),
    group(None, Lob, 6.29, 0.16),
    group(None, Boast, 5.57, 0.13),
];

/// Printed overall trend line, `MT = slope * ID + intercept`.
pub const TREND_SLOPE: f64 = 0.456;
pub const TREND_INTERCEPT: f64 = -1.3;

/// Tolerance for rounded V / ID / IR against the printed rows.
pub const ROW_TOLERANCE: f64 = 0.02;
/// Default tolerance for group mean / SD against the printed values.
pub const GROUP_TOLERANCE: f64 = 0.01;
/// Trend-line match: slope printed to 3 decimals, intercept to 1.
pub const TREND_SLOPE_TOLERANCE: f64 = 0.01;
pub const TREND_INTERCEPT_TOLERANCE: f64 = 0.05;
/// Absorbs binary representation error when comparing at a printed tolerance.
pub const COMPARE_EPSILON: f64 = 1e-9;

pub fn printed_row(
    person_id: u32,
    shot: ShotKind,
    trial_index: u32,
) -> Option<&'static PrintedRow> {
    PRINTED_ROWS
        .iter()
        .find(|r| r.person_id == person_id && r.shot == shot && r.trial_index == trial_index)
}
