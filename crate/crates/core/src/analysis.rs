//! The end-to-end analysis: derive every trial, aggregate, fit, and build the
//! series behind the overall and per-shot MT-vs-ID figures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::{derive_trial, DerivedTrial, ShotKind, TrialRecord};
use crate::stats::{group_stats, ols_simple, GroupStats, Grouping, LinearFit};
use crate::variants::FittsReference;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Shots left out of the overall fit and the overall figure.
    pub exclude: BTreeSet<ShotKind>,
    /// Also fit every single-shot-excluded subset.
    pub subset_fits: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            exclude: BTreeSet::new(),
            subset_fits: true,
        }
    }
}

impl AnalysisOptions {
    pub fn excluding(shots: impl IntoIterator<Item = ShotKind>) -> Result<Self> {
        let opts = AnalysisOptions {
            exclude: shots.into_iter().collect(),
            ..AnalysisOptions::default()
        };
        if opts.exclude.len() == ShotKind::ALL.len() {
            return Err(Error::Usage(String::from("cannot exclude all four shots")));
        }
        Ok(opts)
    }
}

/// Name of a fitted subset: `all`, or `exclude:` followed by the left-out shots.
pub fn subset_label(exclude: &BTreeSet<ShotKind>) -> String {
    if exclude.is_empty() {
        return String::from("all");
    }
    let names: Vec<&str> = exclude.iter().map(|s| s.label()).collect();
    format!("exclude:{}", names.join(","))
}

/// The five reproduced figures, numbered as captioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Figure {
    Overall,
    Drives,
    Boasts,
    Lobs,
    Drops,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Overall,
        Figure::Drives,
        Figure::Boasts,
        Figure::Lobs,
        Figure::Drops,
    ];

    pub fn number(self) -> u8 {
        match self {
            Figure::Overall => 4,
            Figure::Drives => 5,
            Figure::Boasts => 6,
            Figure::Lobs => 7,
            Figure::Drops => 8,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.number() == n)
            .ok_or(Error::UnknownFigure(n))
    }

    pub fn shot(self) -> Option<ShotKind> {
        match self {
            Figure::Overall => None,
            Figure::Drives => Some(ShotKind::Drive),
            Figure::Boasts => Some(ShotKind::Boast),
            Figure::Lobs => Some(ShotKind::Lob),
            Figure::Drops => Some(ShotKind::Drop),
        }
    }

    /// File stem used when the figure is written to disk.
    pub fn file_stem(self) -> &'static str {
        match self {
            Figure::Overall => "fig4_overall",
            Figure::Drives => "fig5_drives",
            Figure::Boasts => "fig6_boasts",
            Figure::Lobs => "fig7_lobs",
            Figure::Drops => "fig8_drops",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Figure {}", self.number())
    }
}

/// Scatter points `(id_bits, movement_time_s)` and the line fitted to them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FigureSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// `None` only for series too small to fit (a single point).
    pub fit: Option<LinearFit>,
}

impl FigureSeries {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty {
                what: "figure series",
            });
        }
        let fit = if points.len() < 2 {
            None
        } else {
            Some(ols_simple(&points)?)
        };
        Ok(FigureSeries {
            label: label.into(),
            points,
            fit,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReportDocument {
    pub per_person_shot_stats: Vec<GroupStats>,
    pub per_shot_stats: Vec<GroupStats>,
    /// Subset the overall fit was computed on.
    pub overall_subset: String,
    pub overall_excluded: BTreeSet<ShotKind>,
    pub overall_fit: LinearFit,
    pub subset_fits: BTreeMap<String, LinearFit>,
    pub per_shot_fits: BTreeMap<ShotKind, LinearFit>,
    /// Sorted by (person, shot, trial).
    pub derived_table: Vec<DerivedTrial>,
    pub reference_notes: FittsReference,
}

impl ReportDocument {
    fn points<'a>(&'a self, keep: impl Fn(ShotKind) -> bool + 'a) -> Vec<(f64, f64)> {
        self.derived_table
            .iter()
            .filter(|t| keep(t.base.shot))
            .map(|t| (t.id_bits, t.base.movement_time_s))
            .collect()
    }
}

fn fit_points(label: &str, points: &[(f64, f64)]) -> Result<LinearFit> {
    ols_simple(points).map_err(|e| e.in_group(label.to_string()))
}

fn derive_all(records: &[TrialRecord]) -> Result<Vec<DerivedTrial>> {
    let mut sorted: Vec<TrialRecord> = records.to_vec();
    sorted.sort_by_key(|r| r.key());
    if let Some(w) = sorted.windows(2).find(|w| w[0].key() == w[1].key()) {
        return Err(Error::Usage(format!("duplicate trial {}", w[0].key())));
    }
    sorted.iter().map(derive_trial).collect()
}

/// Runs the full analysis. Row order of `records` never affects the result.
pub fn run_analysis(records: &[TrialRecord], options: &AnalysisOptions) -> Result<ReportDocument> {
    if records.is_empty() {
        return Err(Error::Empty { what: "dataset" });
    }
    if options.exclude.len() == ShotKind::ALL.len() {
        return Err(Error::Usage(String::from("cannot exclude all four shots")));
    }
    let derived = derive_all(records)?;

    let per_person_shot_stats = group_stats(&derived, Grouping::PersonShot)?;
    let per_shot_stats = group_stats(&derived, Grouping::ShotOnly)?;

    let points_without = |exclude: &BTreeSet<ShotKind>| -> Vec<(f64, f64)> {
        derived
            .iter()
            .filter(|t| !exclude.contains(&t.base.shot))
            .map(|t| (t.id_bits, t.base.movement_time_s))
            .collect()
    };

    let overall_subset = subset_label(&options.exclude);
    let overall_points = points_without(&options.exclude);
    if overall_points.is_empty() {
        return Err(Error::Empty { what: "fit subset" }.in_group(overall_subset));
    }
    let overall_fit = fit_points(&overall_subset, &overall_points)?;

    let mut subset_fits = BTreeMap::new();
    if options.subset_fits {
        for shot in ShotKind::ALL {
            let exclude: BTreeSet<ShotKind> = [shot].into_iter().collect();
            let label = subset_label(&exclude);
            subset_fits.insert(
                label.clone(),
                fit_points(&label, &points_without(&exclude))?,
            );
        }
        if options.exclude.len() > 1 {
            subset_fits.insert(overall_subset.clone(), overall_fit);
        }
    }

    let mut per_shot_fits = BTreeMap::new();
    for shot in ShotKind::ALL {
        let points: Vec<(f64, f64)> = derived
            .iter()
            .filter(|t| t.base.shot == shot)
            .map(|t| (t.id_bits, t.base.movement_time_s))
            .collect();
        let label = format!("shot {shot}");
        if points.is_empty() {
            return Err(Error::Empty { what: "shot group" }.in_group(label));
        }
        per_shot_fits.insert(shot, fit_points(&label, &points)?);
    }

    Ok(ReportDocument {
        per_person_shot_stats,
        per_shot_stats,
        overall_subset,
        overall_excluded: options.exclude.clone(),
        overall_fit,
        subset_fits,
        per_shot_fits,
        derived_table: derived,
        reference_notes: FittsReference::TAPPING,
    })
}

/// Scatter series for one figure: the overall fit subset for Figure 4, one
/// shot's trials for Figures 5 to 8.
pub fn figure_series(report: &ReportDocument, figure: Figure) -> Result<FigureSeries> {
    let label = match figure.shot() {
        None => {
            String::from("Overall Relationship Movement Time (s) vs Index of Difficulty (bits)")
        }
        Some(shot) => format!(
            "Movement Time (s) vs Index of Difficulty (bits) for {}s",
            shot.label().to_lowercase()
        ),
    };
    let (points, fit) = match figure.shot() {
        None => {
            let excluded = &report.overall_excluded;
            (
                report.points(move |s| !excluded.contains(&s)),
                report.overall_fit,
            )
        }
        Some(shot) => {
            let fit = *report
                .per_shot_fits
                .get(&shot)
                .ok_or(Error::Empty { what: "shot group" })?;
            (report.points(move |s| s == shot), fit)
        }
    };
    if points.is_empty() {
        return Err(Error::Empty {
            what: "figure series",
        });
    }
    Ok(FigureSeries {
        label,
        points,
        fit: Some(fit),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(person: u32, shot: ShotKind, trial: u32, dp: f64, mt: f64) -> TrialRecord {
        TrialRecord {
            person_id: person,
            shot,
            trial_index: trial,
            ball_distance_cm: 600.0 + trial as f64 * 10.0,
            ball_time_s: 0.3,
            player_distance_cm: dp,
            movement_time_s: mt,
        }
    }

    fn small_dataset() -> Vec<TrialRecord> {
        let mut v = Vec::new();
        for shot in ShotKind::ALL {
            for t in 1..=3 {
                v.push(rec(
                    1,
                    shot,
                    t,
                    300.0 + 20.0 * t as f64,
                    1.0 + 0.1 * t as f64,
                ));
            }
        }
        v
    }

    #[test]
    fn figure_numbers_follow_captions() {
        assert_eq!(
            Figure::from_number(5).unwrap().shot(),
            Some(ShotKind::Drive)
        );
        assert_eq!(
            Figure::from_number(6).unwrap().shot(),
            Some(ShotKind::Boast)
        );
        assert_eq!(Figure::from_number(7).unwrap().shot(), Some(ShotKind::Lob));
        assert_eq!(Figure::from_number(8).unwrap().shot(), Some(ShotKind::Drop));
        assert_eq!(Figure::from_number(4).unwrap().shot(), None);
        assert_eq!(Figure::from_number(9), Err(Error::UnknownFigure(9)));
    }

    #[test]
    fn single_person_groups() {
        let report = run_analysis(&small_dataset(), &AnalysisOptions::default()).unwrap();
        assert_eq!(report.per_person_shot_stats.len(), 4);
        assert!(report.per_person_shot_stats.iter().all(|g| g.n == 3));
        assert_eq!(report.per_shot_fits.len(), 4);
        assert_eq!(report.subset_fits.len(), 4);
        assert_eq!(report.overall_subset, "all");
    }

    #[test]
    fn filters() {
        assert!(AnalysisOptions::excluding(ShotKind::ALL).is_err());
        let opts = AnalysisOptions::excluding([ShotKind::Drive]).unwrap();
        let report = run_analysis(&small_dataset(), &opts).unwrap();
        assert_eq!(report.overall_subset, "exclude:Drive");
        assert_eq!(report.overall_fit.n, 9);
        let fig = figure_series(&report, Figure::Overall).unwrap();
        assert_eq!(fig.points.len(), 9);

        let opts = AnalysisOptions {
            subset_fits: false,
            ..AnalysisOptions::default()
        };
        let report = run_analysis(&small_dataset(), &opts).unwrap();
        assert!(report.subset_fits.is_empty());
    }

    #[test]
    fn errors_name_the_group() {
        assert!(matches!(
            run_analysis(&[], &AnalysisOptions::default()),
            Err(Error::Empty { what: "dataset" })
        ));
        // Lobs all at the same player distance and ball distance: x constant.
        let mut data = small_dataset();
        for r in data.iter_mut().filter(|r| r.shot == ShotKind::Lob) {
            r.player_distance_cm = 350.0;
            r.ball_distance_cm = 650.0;
        }
        match run_analysis(&data, &AnalysisOptions::default()) {
            Err(Error::Group { label, source }) => {
                assert_eq!(label, "shot Lob");
                assert_eq!(*source, Error::DegenerateDesign { column: "x" });
            }
            Err(e) => panic!("unexpected {e:?}"),
            Ok(_) => panic!("expected degenerate fit"),
        }
    }

    #[test]
    fn duplicate_keys_rejected() {
        let mut data = small_dataset();
        data.push(data[0]);
        assert!(matches!(
            run_analysis(&data, &AnalysisOptions::default()),
            Err(Error::Usage(_))
        ));
    }
}
