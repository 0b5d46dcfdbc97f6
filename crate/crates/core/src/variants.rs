//! Fitts'-law model family: index-of-difficulty formulas and movement-time
//! predictors for the variants that have an explicit equation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::model::DerivedTrial;

/// A classic pointing trial: amplitude `A`, target width `W`, movement time.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointingTrial {
    pub amplitude: f64,
    pub width: f64,
    pub movement_time_s: f64,
}

impl PointingTrial {
    pub fn new(amplitude: f64, width: f64, movement_time_s: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::Domain {
                field: "amplitude",
                value: amplitude,
            });
        }
        check_width(width)?;
        if !(movement_time_s > 0.0 && movement_time_s.is_finite()) {
            return Err(Error::Domain {
                field: "movement_time_s",
                value: movement_time_s,
            });
        }
        Ok(PointingTrial {
            amplitude,
            width,
            movement_time_s,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ModelKind {
    /// `log2(v * D)` for squash shot retrieval.
    SquashID,
    /// `log2(2A / W)`.
    FittsOriginal,
    /// `log2(2A / W + 1)`.
    MacKenzieShannon,
    /// Separate slopes on `log2(A)` and `log2(1 / W)`.
    Welford,
    /// `A / W`.
    Steering,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::SquashID,
        ModelKind::FittsOriginal,
        ModelKind::MacKenzieShannon,
        ModelKind::Welford,
        ModelKind::Steering,
    ];

    /// Name accepted on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::SquashID => "squash",
            ModelKind::FittsOriginal => "fitts",
            ModelKind::MacKenzieShannon => "mackenzie",
            ModelKind::Welford => "welford",
            ModelKind::Steering => "steering",
        }
    }

    pub fn predictor_count(self) -> usize {
        match self {
            ModelKind::Welford => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownModel(String::from(t)))
    }
}

/// Fitts' own reciprocal-tapping throughput, kept for report annotations.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FittsReference {
    pub mean_throughput_bps: f64,
    pub sd_throughput_bps: f64,
}

impl FittsReference {
    pub const TAPPING: FittsReference = FittsReference {
        mean_throughput_bps: 10.10,
        sd_throughput_bps: 1.33,
    };
}

fn check_width(width: f64) -> Result<()> {
    if width > 0.0 && width.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            field: "width",
            value: width,
        })
    }
}

fn check_amplitude_positive(amplitude: f64) -> Result<()> {
    if amplitude > 0.0 && amplitude.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            field: "amplitude",
            value: amplitude,
        })
    }
}

pub fn id_fitts_original(amplitude: f64, width: f64) -> Result<f64> {
    check_amplitude_positive(amplitude)?;
    check_width(width)?;
    Ok(libm::log2(2.0 * amplitude / width))
}

/// Shannon-form ID as `log2(2A/W + 1)`; zero at `A = 0` and never negative.
pub fn id_mackenzie(amplitude: f64, width: f64) -> Result<f64> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::Domain {
            field: "amplitude",
            value: amplitude,
        });
    }
    check_width(width)?;
    Ok(libm::log2(2.0 * amplitude / width + 1.0))
}

pub fn predict_mt_welford(a: f64, b1: f64, b2: f64, amplitude: f64, width: f64) -> Result<f64> {
    check_amplitude_positive(amplitude)?;
    check_width(width)?;
    Ok(a + b1 * libm::log2(amplitude) + b2 * libm::log2(1.0 / width))
}

pub fn predict_mt_steering(a: f64, b: f64, amplitude: f64, width: f64) -> Result<f64> {
    check_width(width)?;
    Ok(a + b * (amplitude / width))
}

/// Either kind of trial a model can be evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum TrialRef<'a> {
    Pointing(&'a PointingTrial),
    Squash(&'a DerivedTrial),
}

impl TrialRef<'_> {
    pub fn movement_time_s(&self) -> f64 {
        match self {
            TrialRef::Pointing(t) => t.movement_time_s,
            TrialRef::Squash(t) => t.base.movement_time_s,
        }
    }
}

/// Predictor vector whose linear combination plus an intercept predicts MT.
pub fn model_design_row(kind: ModelKind, trial: TrialRef<'_>) -> Result<Vec<f64>> {
    match (kind, trial) {
        (ModelKind::SquashID, TrialRef::Squash(t)) => Ok(vec![t.id_bits]),
        (ModelKind::SquashID, TrialRef::Pointing(_)) => Err(Error::IncompatibleTrial {
            model: kind,
            expected: "derived squash trials",
        }),
        (_, TrialRef::Squash(_)) => Err(Error::IncompatibleTrial {
            model: kind,
            expected: "pointing trials",
        }),
        (ModelKind::FittsOriginal, TrialRef::Pointing(p)) => {
            Ok(vec![id_fitts_original(p.amplitude, p.width)?])
        }
        (ModelKind::MacKenzieShannon, TrialRef::Pointing(p)) => {
            Ok(vec![id_mackenzie(p.amplitude, p.width)?])
        }
        (ModelKind::Welford, TrialRef::Pointing(p)) => {
            check_amplitude_positive(p.amplitude)?;
            check_width(p.width)?;
            Ok(vec![libm::log2(p.amplitude), libm::log2(1.0 / p.width)])
        }
        (ModelKind::Steering, TrialRef::Pointing(p)) => {
            check_width(p.width)?;
            Ok(vec![p.amplitude / p.width])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_trial, ShotKind, TrialRecord};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn fitts_original_examples() {
        assert_eq!(id_fitts_original(3.0, 3.0).unwrap(), 1.0);
        assert_eq!(id_fitts_original(8.0, 1.0).unwrap(), 4.0);
        assert_eq!(id_fitts_original(10.0, 5.0).unwrap(), 2.0);
        assert!(id_fitts_original(0.0, 1.0).is_err());
        assert!(id_fitts_original(1.0, 0.0).is_err());
    }

    #[test]
    fn mackenzie_examples() {
        assert_eq!(id_mackenzie(0.0, 5.0).unwrap(), 0.0);
        assert!(close(id_mackenzie(7.0, 2.0).unwrap(), 3.0, 1e-12));
        assert!(close(
            id_mackenzie(2.0, 2.0).unwrap(),
            libm::log2(3.0),
            1e-12
        ));
        assert!(id_mackenzie(-1.0, 5.0).is_err());
        assert!(id_mackenzie(1.0, 0.0).is_err());
    }

    #[test]
    fn welford_examples() {
        assert!(close(
            predict_mt_welford(0.0, 1.0, 1.0, 2.0, 0.5).unwrap(),
            2.0,
            1e-12
        ));
        assert!(close(
            predict_mt_welford(0.3, 0.0, 0.0, 5.0, 1.0).unwrap(),
            0.3,
            1e-12
        ));
        assert!(close(
            predict_mt_welford(0.0, 1.0, 0.0, 8.0, 3.0).unwrap(),
            3.0,
            1e-12
        ));
        assert!(predict_mt_welford(0.0, 1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn steering_examples() {
        assert!(close(
            predict_mt_steering(0.1, 0.2, 5.0, 1.0).unwrap(),
            1.1,
            1e-12
        ));
        assert_eq!(predict_mt_steering(0.0, 1.0, 4.0, 4.0).unwrap(), 1.0);
        assert_eq!(predict_mt_steering(0.5, 0.0, 123.0, 7.0).unwrap(), 0.5);
        assert!(predict_mt_steering(0.5, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn original_goes_negative_only_below_half_width() {
        assert!(id_fitts_original(0.4, 1.0).unwrap() < 0.0);
        assert_eq!(id_fitts_original(0.5, 1.0).unwrap(), 0.0);
        assert!(id_fitts_original(0.6, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn mackenzie_converges_to_original() {
        let d = id_mackenzie(1e6, 1.0).unwrap() - id_fitts_original(1e6, 1.0).unwrap();
        assert!(d > 0.0 && d < 1e-5);
    }

    #[test]
    fn design_rows() {
        let p = PointingTrial::new(8.0, 1.0, 0.5).unwrap();
        assert_eq!(
            model_design_row(ModelKind::FittsOriginal, TrialRef::Pointing(&p)).unwrap(),
            vec![4.0]
        );
        let p = PointingTrial::new(2.0, 0.5, 0.5).unwrap();
        assert_eq!(
            model_design_row(ModelKind::Welford, TrialRef::Pointing(&p)).unwrap(),
            vec![1.0, 1.0]
        );

        let rec = TrialRecord {
            person_id: 1,
            shot: ShotKind::Drive,
            trial_index: 1,
            ball_distance_cm: 586.0,
            ball_time_s: 0.197,
            player_distance_cm: 374.0,
            movement_time_s: 1.22,
        };
        let d = derive_trial(&rec).unwrap();
        let row = model_design_row(ModelKind::SquashID, TrialRef::Squash(&d)).unwrap();
        assert_eq!(row.len(), 1);
        assert!(close(row[0], 6.80, 0.01));

        assert!(matches!(
            model_design_row(ModelKind::SquashID, TrialRef::Pointing(&p)),
            Err(Error::IncompatibleTrial { .. })
        ));
        assert!(matches!(
            model_design_row(ModelKind::Steering, TrialRef::Squash(&d)),
            Err(Error::IncompatibleTrial { .. })
        ));
    }

    #[test]
    fn model_names_are_case_insensitive() {
        for kind in ModelKind::ALL {
            assert_eq!(
                kind.name().to_uppercase().parse::<ModelKind>().unwrap(),
                kind
            );
        }
        assert!(matches!(
            "nosuch".parse::<ModelKind>(),
            Err(Error::UnknownModel(_))
        ));
    }

    #[test]
    fn pointing_trial_invariants() {
        assert!(PointingTrial::new(0.0, 1.0, 0.2).is_ok());
        assert!(PointingTrial::new(-1.0, 1.0, 0.2).is_err());
        assert!(PointingTrial::new(1.0, 0.0, 0.2).is_err());
        assert!(PointingTrial::new(1.0, 1.0, 0.0).is_err());
    }
}
