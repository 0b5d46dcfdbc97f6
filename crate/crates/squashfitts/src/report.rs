//! JSON report document, printed-value cross-checks, and the plain-text summary.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use squashfitts_core::{GroupStats, LinearFit, ReportDocument, ShotKind, TrialRecord};

use crate::dataset::bundled_table1;
use crate::reference::{
    printed_row, COMPARE_EPSILON, GROUP_TOLERANCE, PRINTED_GROUPS, ROW_TOLERANCE, TREND_INTERCEPT,
    TREND_INTERCEPT_TOLERANCE, TREND_SLOPE, TREND_SLOPE_TOLERANCE,
};

pub const SCHEMA_VERSION: u32 = 1;
/// Decimals used by the `display` block and the text summary.
pub const DISPLAY_DECIMALS: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowCheck {
    pub person_id: u32,
    pub shot: ShotKind,
    pub trial_index: u32,
    pub quantity: String,
    pub printed: f64,
    pub computed: f64,
    pub rounded: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupCheck {
    pub group: String,
    pub n: usize,
    pub printed_mean_id: f64,
    pub computed_mean_id: f64,
    pub printed_sd_id: f64,
    pub computed_sd_id: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendCandidate {
    pub subset: String,
    pub slope: f64,
    pub intercept: f64,
    pub matches: bool,
}

/// The printed trend line compared with every fitted subset. Informational:
/// which subset it was fitted on is not recoverable, so nothing here is a
/// pass/fail gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendLineCheck {
    pub printed_slope: f64,
    pub printed_intercept: f64,
    pub slope_tolerance: f64,
    pub intercept_tolerance: f64,
    pub candidates: Vec<TrendCandidate>,
    pub matching_subsets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualitativeCheck {
    pub claim: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossChecks {
    pub rows_pass: bool,
    pub groups_pass: bool,
    pub row_checks: Vec<RowCheck>,
    pub group_checks: Vec<GroupCheck>,
    pub trend_line: TrendLineCheck,
    pub qualitative: Vec<QualitativeCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplayGroup {
    pub group: String,
    pub n: usize,
    pub mean_id: f64,
    pub sd_id: f64,
    pub mean_mt: f64,
    pub sd_mt: f64,
    pub mean_ir: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplayFit {
    pub subset: String,
    pub slope: f64,
    pub intercept: f64,
    pub pearson_r: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Values rounded for presentation. Never used in a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplayBlock {
    pub decimals: i32,
    pub per_person_shot_stats: Vec<DisplayGroup>,
    pub per_shot_stats: Vec<DisplayGroup>,
    pub fits: Vec<DisplayFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub schema_version: u32,
    pub report: ReportDocument,
    pub display: DisplayBlock,
    /// Present only when the analyzed trials are exactly the bundled dataset.
    pub cross_checks: Option<CrossChecks>,
}

pub fn round_to(value: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (value * scale).round() / scale
}

fn within(a: f64, b: f64, tolerance: f64) -> bool {
    (a - b).abs() <= tolerance + COMPARE_EPSILON
}

fn sorted_raw(mut trials: Vec<TrialRecord>) -> Vec<TrialRecord> {
    trials.sort_by_key(|t| t.key());
    trials
}

/// Whether the report was computed from the bundled reference trials.
pub fn is_bundled_run(report: &ReportDocument) -> bool {
    let analyzed: Vec<TrialRecord> = report.derived_table.iter().map(|d| d.base).collect();
    sorted_raw(analyzed) == sorted_raw(bundled_table1().trials)
}

pub fn row_checks(report: &ReportDocument) -> Vec<RowCheck> {
    let mut out = Vec::new();
    for d in &report.derived_table {
        let b = &d.base;
        let Some(p) = printed_row(b.person_id, b.shot, b.trial_index) else {
            continue;
        };
        for (quantity, printed, computed) in [
            ("v_mps", p.speed_mps, d.ball_speed_mps),
            ("id_bits", p.id_bits, d.id_bits),
            ("ir_bps", p.info_rate_bps, d.info_rate_bps),
        ] {
            let rounded = round_to(computed, 2);
            out.push(RowCheck {
                person_id: b.person_id,
                shot: b.shot,
                trial_index: b.trial_index,
                quantity: quantity.to_string(),
                printed,
                computed,
                rounded,
                tolerance: ROW_TOLERANCE,
                pass: within(rounded, printed, ROW_TOLERANCE),
            });
        }
    }
    out
}

fn find_group(stats: &[GroupStats], person_id: Option<u32>, shot: ShotKind) -> Option<&GroupStats> {
    stats
        .iter()
        .find(|g| g.key.person_id == person_id && g.key.shot == Some(shot))
}

pub fn group_checks(report: &ReportDocument, tolerance: f64) -> Vec<GroupCheck> {
    PRINTED_GROUPS
        .iter()
        .filter_map(|p| {
            let pool = if p.person_id.is_some() {
                &report.per_person_shot_stats
            } else {
                &report.per_shot_stats
            };
            let g = find_group(pool, p.person_id, p.shot)?;
            Some(GroupCheck {
                group: g.key.to_string(),
                n: g.n,
                printed_mean_id: p.mean_id,
                computed_mean_id: g.mean_id,
                printed_sd_id: p.sd_id,
                computed_sd_id: g.sd_id,
                tolerance,
                pass: within(g.mean_id, p.mean_id, tolerance)
                    && within(g.sd_id, p.sd_id, tolerance),
            })
        })
        .collect()
}

pub fn trend_line_check(report: &ReportDocument) -> TrendLineCheck {
    let mut fits: Vec<(String, LinearFit)> =
        vec![(report.overall_subset.clone(), report.overall_fit)];
    for (subset, fit) in &report.subset_fits {
        if *subset != report.overall_subset {
            fits.push((subset.clone(), *fit));
        }
    }
    let candidates: Vec<TrendCandidate> = fits
        .into_iter()
        .map(|(subset, fit)| TrendCandidate {
            matches: within(fit.slope, TREND_SLOPE, TREND_SLOPE_TOLERANCE)
                && within(fit.intercept, TREND_INTERCEPT, TREND_INTERCEPT_TOLERANCE),
            subset,
            slope: fit.slope,
            intercept: fit.intercept,
        })
        .collect();
    TrendLineCheck {
        printed_slope: TREND_SLOPE,
        printed_intercept: TREND_INTERCEPT,
        slope_tolerance: TREND_SLOPE_TOLERANCE,
        intercept_tolerance: TREND_INTERCEPT_TOLERANCE,
        matching_subsets: candidates
            .iter()
            .filter(|c| c.matches)
            .map(|c| c.subset.clone())
            .collect(),
        candidates,
    }
}

fn mean_ir(report: &ReportDocument, shot: ShotKind) -> Option<f64> {
    find_group(&report.per_shot_stats, None, shot).map(|g| g.mean_ir)
}

pub fn qualitative_checks(report: &ReportDocument) -> Vec<QualitativeCheck> {
    let slope = |shot: ShotKind| report.per_shot_fits.get(&shot).map(|f| f.slope);
    let mut out = Vec::new();
    for (shot, positive) in [
        (ShotKind::Drive, false),
        (ShotKind::Drop, false),
        (ShotKind::Lob, true),
        (ShotKind::Boast, false),
    ] {
        let pass = slope(shot).is_some_and(|s| if positive { s > 0.0 } else { s < 0.0 });
        out.push(QualitativeCheck {
            claim: format!(
                "{shot} MT-vs-ID slope is {}",
                if positive { "positive" } else { "negative" }
            ),
            pass,
        });
    }
    for high in [ShotKind::Drive, ShotKind::Drop] {
        for low in [ShotKind::Lob, ShotKind::Boast] {
            let pass = matches!((mean_ir(report, high), mean_ir(report, low)), (Some(h), Some(l)) if h > l);
            out.push(QualitativeCheck {
                claim: format!("mean information rate {high} > {low}"),
                pass,
            });
        }
    }
    out
}

pub fn cross_checks(report: &ReportDocument, group_tolerance: f64) -> CrossChecks {
    let row_checks = row_checks(report);
    let group_checks = group_checks(report, group_tolerance);
    CrossChecks {
        rows_pass: !row_checks.is_empty() && row_checks.iter().all(|c| c.pass),
        groups_pass: !group_checks.is_empty() && group_checks.iter().all(|c| c.pass),
        row_checks,
        group_checks,
        trend_line: trend_line_check(report),
        qualitative: qualitative_checks(report),
    }
}

fn display_group(g: &GroupStats) -> DisplayGroup {
    let r = |v: f64| round_to(v, DISPLAY_DECIMALS);
    DisplayGroup {
        group: g.key.to_string(),
        n: g.n,
        mean_id: r(g.mean_id),
        sd_id: r(g.sd_id),
        mean_mt: r(g.mean_mt),
        sd_mt: r(g.sd_mt),
        mean_ir: r(g.mean_ir),
    }
}

fn display_fit(subset: String, f: &LinearFit) -> DisplayFit {
    let r = |v: f64| round_to(v, DISPLAY_DECIMALS);
    DisplayFit {
        subset,
        slope: r(f.slope),
        intercept: r(f.intercept),
        pearson_r: r(f.pearson_r),
        r_squared: r(f.r_squared),
        n: f.n,
    }
}

pub fn display_block(report: &ReportDocument) -> DisplayBlock {
    let mut fits = vec![display_fit(
        report.overall_subset.clone(),
        &report.overall_fit,
    )];
    fits.extend(
        report
            .subset_fits
            .iter()
            .filter(|(k, _)| **k != report.overall_subset)
            .map(|(k, f)| display_fit(k.clone(), f)),
    );
    fits.extend(
        report
            .per_shot_fits
            .iter()
            .map(|(shot, f)| display_fit(format!("only:{shot}"), f)),
    );
    DisplayBlock {
        decimals: DISPLAY_DECIMALS,
        per_person_shot_stats: report
            .per_person_shot_stats
            .iter()
            .map(display_group)
            .collect(),
        per_shot_stats: report.per_shot_stats.iter().map(display_group).collect(),
        fits,
    }
}

pub fn build_json_report(report: &ReportDocument, group_tolerance: f64) -> JsonReport {
    JsonReport {
        schema_version: SCHEMA_VERSION,
        report: report.clone(),
        display: display_block(report),
        cross_checks: is_bundled_run(report).then(|| cross_checks(report, group_tolerance)),
    }
}

/// Pretty JSON with a stable key order (struct field order; maps sorted).
pub fn render_report_json(report: &ReportDocument, group_tolerance: f64) -> String {
    let doc = build_json_report(report, group_tolerance);
    let mut s = serde_json::to_string_pretty(&doc).expect("report is always serializable");
    s.push('\n');
    s
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn stats_table(out: &mut String, title: &str, stats: &[GroupStats]) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(
        out,
        "  {:<22} {:>3} {:>8} {:>6} {:>7} {:>6} {:>8}",
        "group", "n", "mean ID", "SD", "mean MT", "SD", "mean IR"
    );
    for g in stats {
        let _ = writeln!(
            out,
            "  {:<22} {:>3} {:>8.2} {:>6.2} {:>7.2} {:>6.2} {:>8.2}",
            g.key.to_string(),
            g.n,
            g.mean_id,
            g.sd_id,
            g.mean_mt,
            g.sd_mt,
            g.mean_ir
        );
    }
}

/// Grouped statistics at two decimals.
pub fn render_stats_text(report: &ReportDocument) -> String {
    let mut out = String::new();
    stats_table(
        &mut out,
        "Per person and shot",
        &report.per_person_shot_stats,
    );
    out.push('\n');
    stats_table(&mut out, "Per shot (all players)", &report.per_shot_stats);
    out
}

fn fit_line(f: &LinearFit) -> String {
    format!(
        "MT = {:.3} ID {} {:.3}  (r = {:.3}, r2 = {:.3}, n = {})",
        f.slope,
        if f.intercept < 0.0 { '-' } else { '+' },
        f.intercept.abs(),
        f.pearson_r,
        f.r_squared,
        f.n
    )
}

pub fn render_summary(doc: &JsonReport) -> String {
    let report = &doc.report;
    let mut out = render_stats_text(report);
    out.push('\n');
    let _ = writeln!(
        out,
        "Overall fit [{}]: {}",
        report.overall_subset,
        fit_line(&report.overall_fit)
    );
    for (subset, f) in &report.subset_fits {
        let _ = writeln!(out, "  subset [{subset}]: {}", fit_line(f));
    }
    for (shot, f) in &report.per_shot_fits {
        let _ = writeln!(out, "  shot [{shot}]: {}", fit_line(f));
    }
    let fr = report.reference_notes;
    let _ = writeln!(
        out,
        "\nReference: reciprocal tapping throughput {:.2} bits/s (SD {:.2})",
        fr.mean_throughput_bps, fr.sd_throughput_bps
    );

    let Some(cc) = &doc.cross_checks else {
        out.push_str("\nCross-checks: skipped (input is not the bundled dataset)\n");
        return out;
    };
    out.push_str("\nCross-checks\n");
    let failed_rows: Vec<&RowCheck> = cc.row_checks.iter().filter(|c| !c.pass).collect();
    let _ = writeln!(
        out,
        "{} derived columns: {}/{} within ±{}",
        pass_word(cc.rows_pass),
        cc.row_checks.len() - failed_rows.len(),
        cc.row_checks.len(),
        crate::reference::ROW_TOLERANCE
    );
    for c in failed_rows {
        let _ = writeln!(
            out,
            "  FAIL person {} {} #{} {}: computed {:.4} (rounded {:.2}) vs printed {}",
            c.person_id, c.shot, c.trial_index, c.quantity, c.computed, c.rounded, c.printed
        );
    }
    let passed = cc.group_checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(
        out,
        "{} group statistics: {}/{} within ±{}",
        pass_word(cc.groups_pass),
        passed,
        cc.group_checks.len(),
        cc.group_checks
            .first()
            .map_or(GROUP_TOLERANCE, |c| c.tolerance)
    );
    for c in &cc.group_checks {
        let _ = writeln!(
            out,
            "  {} {:<18} mean {:.4} vs {}, SD {:.4} vs {}",
            pass_word(c.pass),
            c.group,
            c.computed_mean_id,
            c.printed_mean_id,
            c.computed_sd_id,
            c.printed_sd_id
        );
    }
    let t = &cc.trend_line;
    let matching: BTreeSet<&str> = t.matching_subsets.iter().map(String::as_str).collect();
    let _ = writeln!(
        out,
        "INFO trend line MT = {} ID {}: matched by {}",
        t.printed_slope,
        t.printed_intercept,
        if matching.is_empty() {
            "no fitted subset".to_string()
        } else {
            matching.into_iter().collect::<Vec<_>>().join(", ")
        }
    );
    for c in &cc.qualitative {
        let _ = writeln!(out, "{} {}", pass_word(c.pass), c.claim);
    }
    out
}
