//! Squash trial records and the per-trial derivation of ball speed, index of
//! difficulty and information rate.
//!
//! Raw lengths are kept in centimeters, as recorded. The difficulty formula
//! `ID = log2(v * D)` is evaluated with `v` in m/s and `D` in meters.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// The four squash shots played to the receiving player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ShotKind {
    Drive,
    Drop,
    Lob,
    Boast,
}

impl ShotKind {
    /// Canonical ordering used for every grouped output.
    pub const ALL: [ShotKind; 4] = [
        ShotKind::Drive,
        ShotKind::Drop,
        ShotKind::Lob,
        ShotKind::Boast,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ShotKind::Drive => "Drive",
            ShotKind::Drop => "Drop",
            ShotKind::Lob => "Lob",
            ShotKind::Boast => "Boast",
        }
    }
}

impl fmt::Display for ShotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ShotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        ShotKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownShot(String::from(t)))
    }
}

/// Identifies one trial within a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialKey {
    pub person_id: u32,
    pub shot: ShotKind,
    pub trial_index: u32,
}

impl fmt::Display for TrialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "person {} {} #{}",
            self.person_id, self.shot, self.trial_index
        )
    }
}

/// One raw row of the squash experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialRecord {
    pub person_id: u32,
    pub shot: ShotKind,
    pub trial_index: u32,
    /// Distance travelled by the ball to the front wall.
    pub ball_distance_cm: f64,
    /// Real (not slowed-down) time for the ball to reach the front wall.
    pub ball_time_s: f64,
    /// Distance the receiving player moved from the T.
    pub player_distance_cm: f64,
    pub movement_time_s: f64,
}

impl TrialRecord {
    pub fn key(&self) -> TrialKey {
        TrialKey {
            person_id: self.person_id,
            shot: self.shot,
            trial_index: self.trial_index,
        }
    }

    /// Checks the positivity invariants on every measurement.
    pub fn check(&self) -> Result<()> {
        let fields = [
            ("ball_distance_cm", self.ball_distance_cm),
            ("ball_time_s", self.ball_time_s),
            ("player_distance_cm", self.player_distance_cm),
            ("movement_time_s", self.movement_time_s),
        ];
        for (field, value) in fields {
            positive(field, value)?;
        }
        if self.person_id == 0 {
            return Err(Error::domain("person_id", 0.0));
        }
        if self.trial_index == 0 {
            return Err(Error::domain("trial_index", 0.0));
        }
        Ok(())
    }
}

/// A trial with its derived metrics attached.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivedTrial {
    pub base: TrialRecord,
    pub ball_speed_mps: f64,
    pub id_bits: f64,
    /// ID / MT. Also reported as index of performance or throughput.
    pub info_rate_bps: f64,
}

/// Court dimensions measured from the T, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CourtGeometry {
    pub t_to_front_m: f64,
    pub t_to_back_m: f64,
    pub t_to_side_m: f64,
    /// Plausible ball speed band, m/s.
    pub min_ball_speed_mps: f64,
    pub max_ball_speed_mps: f64,
}

impl Default for CourtGeometry {
    fn default() -> Self {
        CourtGeometry {
            t_to_front_m: 5.55,
            t_to_back_m: 4.2,
            t_to_side_m: 3.2,
            min_ball_speed_mps: 1.0,
            max_ball_speed_mps: 100.0,
        }
    }
}

impl CourtGeometry {
    pub fn new(t_to_front_m: f64, t_to_back_m: f64, t_to_side_m: f64) -> Result<Self> {
        positive("t_to_front_m", t_to_front_m)?;
        positive("t_to_back_m", t_to_back_m)?;
        positive("t_to_side_m", t_to_side_m)?;
        Ok(CourtGeometry {
            t_to_front_m,
            t_to_back_m,
            t_to_side_m,
            ..CourtGeometry::default()
        })
    }

    /// Distance from the T to the farther front corner.
    pub fn max_player_reach_m(&self) -> f64 {
        libm::hypot(self.t_to_front_m, self.t_to_side_m)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TrialWarning {
    BeyondCourtReach {
        player_distance_m: f64,
        reach_m: f64,
    },
    ImplausibleBallSpeed {
        speed_mps: f64,
    },
    /// `v * D <= 1`, so the index of difficulty is zero or negative.
    NonPositiveDifficulty {
        id_bits: f64,
    },
}

impl fmt::Display for TrialWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrialWarning::BeyondCourtReach {
                player_distance_m,
                reach_m,
            } => write!(
                f,
                "player distance {player_distance_m:.2} m exceeds court reach {reach_m:.2} m"
            ),
            TrialWarning::ImplausibleBallSpeed { speed_mps } => {
                write!(f, "implausible ball speed {speed_mps:.2} m/s")
            }
            TrialWarning::NonPositiveDifficulty { id_bits } => {
                write!(f, "index of difficulty {id_bits:.3} bits is not positive")
            }
        }
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    // Also rejects NaN.
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, value))
    }
}

/// Average ball speed in m/s from a distance in cm and a time in s.
pub fn ball_speed(ball_distance_cm: f64, ball_time_s: f64) -> Result<f64> {
    positive("ball_distance_cm", ball_distance_cm)?;
    positive("ball_time_s", ball_time_s)?;
    Ok(ball_distance_cm / 100.0 / ball_time_s)
}

/// Converts a time read off slowed-down video back to real time.
pub fn real_time_from_slowmo(observed_time_s: f64, slowdown_factor: f64) -> Result<f64> {
    positive("observed_time_s", observed_time_s)?;
    positive("slowdown_factor", slowdown_factor)?;
    Ok(observed_time_s / slowdown_factor)
}

/// `log2(v * D)` with `v` in m/s and `D` in meters.
pub fn index_of_difficulty(ball_speed_mps: f64, player_distance_m: f64) -> Result<f64> {
    positive("ball_speed_mps", ball_speed_mps)?;
    positive("player_distance_m", player_distance_m)?;
    Ok(libm::log2(ball_speed_mps * player_distance_m))
}

pub fn information_rate(id_bits: f64, movement_time_s: f64) -> Result<f64> {
    positive("movement_time_s", movement_time_s)?;
    Ok(id_bits / movement_time_s)
}

pub fn derive_trial(record: &TrialRecord) -> Result<DerivedTrial> {
    let annotate = |e: Error| Error::Trial {
        key: record.key(),
        source: Box::new(e),
    };
    let speed = ball_speed(record.ball_distance_cm, record.ball_time_s).map_err(annotate)?;
    let id = index_of_difficulty(speed, record.player_distance_cm / 100.0).map_err(annotate)?;
    let rate = information_rate(id, record.movement_time_s).map_err(annotate)?;
    Ok(DerivedTrial {
        base: *record,
        ball_speed_mps: speed,
        id_bits: id,
        info_rate_bps: rate,
    })
}

/// Plausibility screen against the court dimensions. Never rejects a trial.
pub fn validate_against_court(record: &TrialRecord, geometry: &CourtGeometry) -> Vec<TrialWarning> {
    let mut warnings = Vec::new();
    let reach = geometry.max_player_reach_m();
    let player_m = record.player_distance_cm / 100.0;
    if player_m > reach {
        warnings.push(TrialWarning::BeyondCourtReach {
            player_distance_m: player_m,
            reach_m: reach,
        });
    }
    if let Ok(speed) = ball_speed(record.ball_distance_cm, record.ball_time_s) {
        if !(geometry.min_ball_speed_mps..=geometry.max_ball_speed_mps).contains(&speed) {
            warnings.push(TrialWarning::ImplausibleBallSpeed { speed_mps: speed });
        }
        if let Ok(id) = index_of_difficulty(speed, player_m) {
            if id <= 0.0 {
                warnings.push(TrialWarning::NonPositiveDifficulty { id_bits: id });
            }
        }
    }
    warnings
}
