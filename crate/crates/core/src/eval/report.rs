//! Benchmark aggregation and report rendering.
//!
//! With a single run the ± column is the sample standard deviation (n-1);
//! with two or more runs it is the standard deviation of the per-run means.
//! The report metadata records which basis was used. Undefined d_pin samples
//! are excluded from the d_pin mean and its n reports how many remained.

use super::{EvalError, SampleReport};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MetricSummary {
    fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { mean: f64::NAN, std: 0.0, n: 0 };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = sample_std(values, mean);
        Self { mean, std, n }
    }
}

fn sample_std(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// Metric summaries for one scope (overall or one package class).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricBlock {
    pub iou_ic: MetricSummary,
    pub mae: MetricSummary,
    pub rmse: MetricSummary,
    pub d_pin: MetricSummary,
    pub iou_pin: MetricSummary,
}

impl MetricBlock {
    fn of(reports: &[&SampleReport]) -> Self {
        let iou: Vec<f64> = reports.iter().map(|r| r.iou_ic).collect();
        let abs_err: Vec<f64> = reports
            .iter()
            .map(|r| (r.count_pred as f64 - r.count_truth as f64).abs())
            .collect();
        let sq_err: Vec<f64> = abs_err.iter().map(|d| d * d).collect();
        let d_pin: Vec<f64> = reports.iter().filter_map(|r| r.d_pin).collect();
        let iou_pin: Vec<f64> = reports.iter().map(|r| r.iou_pin).collect();

        let mae = MetricSummary::of(&abs_err);
        let mean_sq = sq_err.iter().sum::<f64>() / sq_err.len().max(1) as f64;
        let rmse_mean = mean_sq.sqrt();
        // Delta-method dispersion for a root of a mean of squares.
        let rmse_std = if rmse_mean > 0.0 {
            sample_std(&sq_err, mean_sq) / (2.0 * rmse_mean)
        } else {
            0.0
        };
        Self {
            iou_ic: MetricSummary::of(&iou),
            mae,
            rmse: MetricSummary { mean: rmse_mean, std: rmse_std, n: sq_err.len() },
            d_pin: MetricSummary::of(&d_pin),
            iou_pin: MetricSummary::of(&iou_pin),
        }
    }

    fn from_run_means(blocks: &[MetricBlock], total_n: usize, d_pin_n: usize) -> Self {
        let pick = |f: fn(&MetricBlock) -> MetricSummary, n: usize| {
            let means: Vec<f64> = blocks.iter().map(|b| f(b).mean).collect();
            let mean = means.iter().sum::<f64>() / means.len() as f64;
            MetricSummary { mean, std: sample_std(&means, mean), n }
        };
        Self {
            iou_ic: pick(|b| b.iou_ic, total_n),
            mae: pick(|b| b.mae, total_n),
            rmse: pick(|b| b.rmse, total_n),
            d_pin: pick(|b| b.d_pin, d_pin_n),
            iou_pin: pick(|b| b.iou_pin, total_n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub runs: usize,
    /// "runs" when the ± came from run means, "samples" otherwise.
    pub std_basis: &'static str,
    pub toolkit_version: &'static str,
}

/// Aggregated benchmark results: overall and per package class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub n: usize,
    pub overall: MetricBlock,
    pub per_class: BTreeMap<String, MetricBlock>,
    pub metadata: ReportMetadata,
}

/// Aggregates a single evaluation run.
pub fn aggregate(reports: &[SampleReport]) -> Result<BenchmarkReport, EvalError> {
    aggregate_runs(std::slice::from_ref(&reports.to_vec()))
}

/// Aggregates one or more runs over the same benchmark. With >= 2 runs the
/// std is computed over per-run means.
pub fn aggregate_runs(runs: &[Vec<SampleReport>]) -> Result<BenchmarkReport, EvalError> {
    if runs.is_empty() || runs.iter().any(|r| r.is_empty()) {
        return Err(EvalError::EmptyInput);
    }
    let total_n: usize = runs.iter().map(|r| r.len()).sum();
    let d_pin_n: usize = runs
        .iter()
        .flat_map(|r| r.iter())
        .filter(|r| r.d_pin.is_some())
        .count();

    let overall = if runs.len() == 1 {
        MetricBlock::of(&runs[0].iter().collect::<Vec<_>>())
    } else {
        let blocks: Vec<MetricBlock> = runs
            .iter()
            .map(|r| MetricBlock::of(&r.iter().collect::<Vec<_>>()))
            .collect();
        MetricBlock::from_run_means(&blocks, total_n, d_pin_n)
    };

    let mut by_class: BTreeMap<String, Vec<&SampleReport>> = BTreeMap::new();
    for report in runs.iter().flat_map(|r| r.iter()) {
        by_class.entry(report.package_class.clone()).or_default().push(report);
    }
    let per_class = by_class
        .into_iter()
        .map(|(class, reports)| (class, MetricBlock::of(&reports)))
        .collect();

    Ok(BenchmarkReport {
        n: total_n,
        overall,
        per_class,
        metadata: ReportMetadata {
            runs: runs.len(),
            std_basis: if runs.len() >= 2 { "runs" } else { "samples" },
            toolkit_version: env!("CARGO_PKG_VERSION"),
        },
    })
}

fn pct(s: &MetricSummary) -> String {
    format!("{:.1} ± {:.1}", s.mean * 100.0, s.std * 100.0)
}

fn dist(s: &MetricSummary) -> String {
    if s.n == 0 {
        "n/a".to_string()
    } else {
        format!("{:.2} ± {:.2}", s.mean, s.std)
    }
}

/// Human-readable table mirroring the benchmark column layout:
/// overall IoU_IC %, task-1 MAE/RMSE, task-2 d_pin, task-3 IoU_pin %.
pub fn render_table(report: &BenchmarkReport) -> String {
    let mut rows: Vec<[String; 6]> = Vec::new();
    rows.push([
        "overall".to_string(),
        pct(&report.overall.iou_ic),
        dist(&report.overall.mae),
        dist(&report.overall.rmse),
        dist(&report.overall.d_pin),
        pct(&report.overall.iou_pin),
    ]);
    for (class, block) in &report.per_class {
        rows.push([
            class.clone(),
            pct(&block.iou_ic),
            dist(&block.mae),
            dist(&block.rmse),
            dist(&block.d_pin),
            pct(&block.iou_pin),
        ]);
    }
    let header = [
        "Scope",
        "Overall (IoU_IC %)",
        "Task 1 (MAE)",
        "Task 1 (RMSE)",
        "Task 2 (d_pin)",
        "Task 3 (IoU_pin %)",
    ];
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: &[String]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:<width$}", width = widths[i]))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    out.push_str(&fmt_row(&header.map(str::to_string)));
    let sep: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&format!("|-{}-|\n", sep.join("-|-")));
    for row in &rows {
        out.push_str(&fmt_row(row));
    }
    out.push_str(&format!(
        "n={}, runs={}, std over {}\n",
        report.n, report.metadata.runs, report.metadata.std_basis
    ));
    out
}

/// CSV rendering: one row per scope, percentages to 1 decimal, distances
/// to 2 decimals.
pub fn render_csv(report: &BenchmarkReport) -> String {
    let mut out = String::from(
        "scope,n,iou_ic_pct,iou_ic_pct_std,mae,mae_std,rmse,rmse_std,d_pin,d_pin_std,d_pin_n,iou_pin_pct,iou_pin_pct_std\n",
    );
    let mut push = |scope: &str, b: &MetricBlock, n: usize| {
        out.push_str(&format!(
            "{},{},{:.1},{:.1},{:.2},{:.2},{:.2},{:.2},{},{},{},{:.1},{:.1}\n",
            scope,
            n,
            b.iou_ic.mean * 100.0,
            b.iou_ic.std * 100.0,
            b.mae.mean,
            b.mae.std,
            b.rmse.mean,
            b.rmse.std,
            if b.d_pin.n == 0 { "n/a".to_string() } else { format!("{:.2}", b.d_pin.mean) },
            if b.d_pin.n == 0 { "n/a".to_string() } else { format!("{:.2}", b.d_pin.std) },
            b.d_pin.n,
            b.iou_pin.mean * 100.0,
            b.iou_pin.std * 100.0,
        ));
    };
    push("overall", &report.overall, report.n);
    for (class, block) in &report.per_class {
        push(class, block, block.iou_ic.n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(id: &str, class: &str, iou: f64) -> SampleReport {
        SampleReport {
            sample_id: id.to_string(),
            package_class: class.to_string(),
            iou_ic: iou,
            count_pred: 8,
            count_truth: 8,
            d_pin: Some(0.0),
            count_mismatch: false,
            iou_pin: iou,
            pred_empty: false,
            parse_flags: None,
        }
    }

    #[test]
    fn identical_samples_have_zero_std() {
        let reports: Vec<SampleReport> = (0..5).map(|i| report(&format!("s{i}"), "SOIC", 0.716)).collect();
        let agg = aggregate(&reports).unwrap();
        let rendered = render_table(&agg);
        assert!(rendered.contains("71.6 ± 0.0"), "{rendered}");
        assert_eq!(agg.metadata.std_basis, "samples");
    }

    #[test]
    fn run_std_matches_table_formatting_example() {
        let runs: Vec<Vec<SampleReport>> = [0.711, 0.716, 0.721]
            .iter()
            .map(|&iou| (0..4).map(|i| report(&format!("s{i}"), "SOIC", iou)).collect())
            .collect();
        let agg = aggregate_runs(&runs).unwrap();
        assert!((agg.overall.iou_ic.mean - 0.716).abs() < 1e-12);
        assert!((agg.overall.iou_ic.std - 0.005).abs() < 1e-12);
        assert_eq!(agg.metadata.std_basis, "runs");
        let rendered = render_table(&agg);
        assert!(rendered.contains("71.6 ± 0.5"), "{rendered}");
    }

    #[test]
    fn undefined_d_pin_excluded_with_n() {
        let mut reports = vec![report("a", "SOIC", 1.0), report("b", "BGA", 1.0)];
        reports[1].d_pin = None;
        let agg = aggregate(&reports).unwrap();
        assert_eq!(agg.overall.d_pin.n, 1);
        assert_eq!(agg.overall.iou_ic.n, 2);
        assert_eq!(agg.per_class.len(), 2);
    }

    #[test]
    fn aggregation_is_permutation_invariant() {
        let a = vec![report("a", "SOIC", 0.2), report("b", "BGA", 0.9), report("c", "DIP", 0.5)];
        let mut b = a.clone();
        b.reverse();
        let ra = aggregate(&a).unwrap();
        let rb = aggregate(&b).unwrap();
        assert!((ra.overall.iou_ic.mean - rb.overall.iou_ic.mean).abs() < 1e-15);
        assert!((ra.overall.iou_ic.std - rb.overall.iou_ic.std).abs() < 1e-15);
        assert_eq!(ra.per_class.keys().collect::<Vec<_>>(), rb.per_class.keys().collect::<Vec<_>>());
    }

    #[test]
    fn empty_input_errors() {
        assert!(aggregate(&[]).is_err());
        assert!(aggregate_runs(&[]).is_err());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let reports = vec![report("a", "SOIC", 1.0), report("b", "BGA", 0.5)];
        let csv = render_csv(&aggregate(&reports).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("scope,n,iou_ic_pct"));
        assert!(lines[1].starts_with("overall,2,75.0"));
    }
}
