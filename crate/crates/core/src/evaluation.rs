//! Dual-radar agreement statistics in per-minute rows.
//!
//! Two respiration series are paired by nearest timestamp, bucketed by
//! wall-clock minute and summarised as mean interval / rate of the reference
//! series (radar 1, series `a`) with RMS and relative differences against the
//! other series. Minutes whose rate RMS difference exceeds a fraction of the
//! overall mean rate are excluded from the aggregate row.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::respiration::{RespirationEstimate, RespirationSeries};

pub const DEFAULT_EXCLUDE_PCT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub t_s: f64,
    pub interval_a_s: f64,
    pub interval_b_s: f64,
    pub rate_a_bpm: f64,
    pub rate_b_bpm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub pairs: Vec<Pair>,
    /// Entries of `a` (estimates and gaps) left without a partner.
    pub dropped_a: usize,
    pub dropped_b: usize,
}

/// Pairs usable estimates of `a` and `b` whose timestamps differ by at most
/// `tolerance_s`, each estimate used at most once.
pub fn pair_series(a: &RespirationSeries, b: &RespirationSeries, tolerance_s: f64) -> Result<Pairing> {
    let mut ua: Vec<&RespirationEstimate> = a.usable().collect();
    let mut ub: Vec<&RespirationEstimate> = b.usable().collect();
    ua.sort_by(|x, y| x.t_s.total_cmp(&y.t_s));
    ub.sort_by(|x, y| x.t_s.total_cmp(&y.t_s));
    let (Some(a0), Some(b0)) = (ua.first(), ub.first()) else {
        return Err(Error::NoOverlap);
    };
    let (a1, b1) = (ua.last().unwrap(), ub.last().unwrap());
    if a0.t_s > b1.t_s + tolerance_s || b0.t_s > a1.t_s + tolerance_s {
        return Err(Error::NoOverlap);
    }

    let mut pairs = Vec::new();
    let mut j = 0;
    for ea in &ua {
        while j < ub.len() && ub[j].t_s < ea.t_s - tolerance_s {
            j += 1;
        }
        let mut best: Option<usize> = None;
        for (k, eb) in ub.iter().enumerate().skip(j) {
            if eb.t_s > ea.t_s + tolerance_s {
                break;
            }
            let d = (eb.t_s - ea.t_s).abs();
            if d <= tolerance_s && best.is_none_or(|b| d < (ub[b].t_s - ea.t_s).abs()) {
                best = Some(k);
            }
        }
        if let Some(k) = best {
            let eb = ub[k];
            pairs.push(Pair {
                t_s: ea.t_s,
                interval_a_s: ea.tau_hat_s,
                interval_b_s: eb.tau_hat_s,
                rate_a_bpm: ea.rate_bpm,
                rate_b_bpm: eb.rate_bpm,
            });
            j = k + 1;
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoOverlap);
    }
    let total_a = a.estimates.len() + a.gaps.len();
    let total_b = b.estimates.len() + b.gaps.len();
    Ok(Pairing {
        dropped_a: total_a - pairs.len(),
        dropped_b: total_b - pairs.len(),
        pairs,
    })
}

impl Pairing {
    /// The same pairing with the roles of `a` and `b` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .map(|p| Pair {
                    t_s: p.t_s,
                    interval_a_s: p.interval_b_s,
                    interval_b_s: p.interval_a_s,
                    rate_a_bpm: p.rate_b_bpm,
                    rate_b_bpm: p.rate_a_bpm,
                })
                .collect(),
            dropped_a: self.dropped_b,
            dropped_b: self.dropped_a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinuteRow {
    pub minute_label: String,
    pub mean_interval_s: f64,
    pub mean_rate_bpm: f64,
    /// `60 / mean_interval_s`; differs from the mean of rates.
    pub rate_from_mean_interval_bpm: f64,
    pub rms_err_interval_ms: f64,
    pub rms_err_rate_bpm: f64,
    pub rel_err_interval_pct: f64,
    pub rel_err_rate_pct: f64,
    pub n_pairs: usize,
    pub excluded: bool,
}

pub fn minute_index(t_s: f64) -> i64 {
    (t_s / 60.0).floor() as i64
}

/// `HH:MM` clock label of a minute counted from midnight.
pub fn minute_label(minute: i64) -> String {
    let m = minute.rem_euclid(24 * 60);
    format!("{:02}:{:02}", m / 60, m % 60)
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

pub fn minute_stats(pairs: &[Pair], label: &str) -> Result<MinuteRow> {
    if pairs.is_empty() {
        return Err(Error::EmptySeries(format!("no pairs in minute {label}")));
    }
    let mean_interval_s = mean(pairs.iter().map(|p| p.interval_a_s));
    let mean_rate_bpm = mean(pairs.iter().map(|p| p.rate_a_bpm));
    let rms_interval_s = mean(pairs.iter().map(|p| (p.interval_a_s - p.interval_b_s).powi(2))).sqrt();
    let rms_rate = mean(pairs.iter().map(|p| (p.rate_a_bpm - p.rate_b_bpm).powi(2))).sqrt();
    Ok(MinuteRow {
        minute_label: label.to_string(),
        mean_interval_s,
        mean_rate_bpm,
        rate_from_mean_interval_bpm: 60.0 / mean_interval_s,
        rms_err_interval_ms: 1000.0 * rms_interval_s,
        rms_err_rate_bpm: rms_rate,
        rel_err_interval_pct: 100.0 * rms_interval_s / mean_interval_s,
        rel_err_rate_pct: 100.0 * rms_rate / mean_rate_bpm,
        n_pairs: pairs.len(),
        excluded: false,
    })
}

/// Flags rows whose rate RMS error is strictly above `pct`% of
/// `overall_mean_rate`. Returns the threshold used.
pub fn exclude_outliers(rows: &mut [MinuteRow], overall_mean_rate: f64, pct: f64) -> f64 {
    let threshold = pct / 100.0 * overall_mean_rate;
    for row in rows.iter_mut() {
        row.excluded = row.rms_err_rate_bpm > threshold;
    }
    threshold
}

/// Column means over the non-excluded rows, labelled `Mean`.
pub fn aggregate(rows: &[MinuteRow]) -> Option<MinuteRow> {
    let kept: Vec<&MinuteRow> = rows.iter().filter(|r| !r.excluded).collect();
    if kept.is_empty() {
        return None;
    }
    let col = |f: fn(&MinuteRow) -> f64| mean(kept.iter().map(|r| f(r)));
    let mean_interval_s = col(|r| r.mean_interval_s);
    Some(MinuteRow {
        minute_label: "Mean".into(),
        mean_interval_s,
        mean_rate_bpm: col(|r| r.mean_rate_bpm),
        rate_from_mean_interval_bpm: 60.0 / mean_interval_s,
        rms_err_interval_ms: col(|r| r.rms_err_interval_ms),
        rms_err_rate_bpm: col(|r| r.rms_err_rate_bpm),
        rel_err_interval_pct: col(|r| r.rel_err_interval_pct),
        rel_err_rate_pct: col(|r| r.rel_err_rate_pct),
        n_pairs: kept.iter().map(|r| r.n_pairs).sum(),
        excluded: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<MinuteRow>,
    pub overall: Option<MinuteRow>,
    pub exclude_pct: f64,
    pub exclusion_threshold_bpm: f64,
    pub excluded_minutes: Vec<String>,
    /// Minutes inside the paired span that have no pairs at all.
    pub gap_minutes: Vec<String>,
    pub dropped_a: usize,
    pub dropped_b: usize,
}

/// Builds minute rows from `pairing`, applies the outlier rule and aggregates.
pub fn evaluate(pairing: &Pairing, exclude_pct: f64) -> Result<EvalReport> {
    if !(exclude_pct.is_finite() && exclude_pct > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "exclusion percentage must be positive, got {exclude_pct}"
        )));
    }
    let mut buckets: BTreeMap<i64, Vec<Pair>> = BTreeMap::new();
    for p in &pairing.pairs {
        buckets.entry(minute_index(p.t_s)).or_default().push(*p);
    }
    let mut rows = buckets
        .iter()
        .map(|(m, pairs)| minute_stats(pairs, &minute_label(*m)))
        .collect::<Result<Vec<_>>>()?;

    let gap_minutes = match (buckets.keys().next(), buckets.keys().last()) {
        (Some(&lo), Some(&hi)) => (lo..=hi)
            .filter(|m| !buckets.contains_key(m))
            .map(minute_label)
            .collect(),
        _ => Vec::new(),
    };

    let overall_mean_rate = mean(rows.iter().map(|r| r.mean_rate_bpm));
    let threshold = exclude_outliers(&mut rows, overall_mean_rate, exclude_pct);
    let excluded_minutes = rows
        .iter()
        .filter(|r| r.excluded)
        .map(|r| r.minute_label.clone())
        .collect();
    Ok(EvalReport {
        overall: aggregate(&rows),
        rows,
        exclude_pct,
        exclusion_threshold_bpm: threshold,
        excluded_minutes,
        gap_minutes,
        dropped_a: pairing.dropped_a,
        dropped_b: pairing.dropped_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

pub const CSV_HEADER: &str = "time,mean_interval_s,mean_rate_bpm,rms_err_interval_ms,\
rms_err_rate_bpm,rel_err_interval_pct,rel_err_rate_pct,n_pairs,excluded";

/// Bar-chart data: per-minute mean rate with RMS error bars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinuteBar {
    pub label: String,
    pub mean_rate_bpm: f64,
    pub rms_err_rate_bpm: f64,
    pub mean_interval_s: f64,
    pub rms_err_interval_ms: f64,
}

#[derive(Serialize, Deserialize)]
struct ReportDocument {
    #[serde(flatten)]
    report: EvalReport,
    bars: Vec<MinuteBar>,
}

impl EvalReport {
    pub fn bars(&self) -> Vec<MinuteBar> {
        self.rows
            .iter()
            .filter(|r| !r.excluded)
            .map(|r| MinuteBar {
                label: r.minute_label.clone(),
                mean_rate_bpm: r.mean_rate_bpm,
                rms_err_rate_bpm: r.rms_err_rate_bpm,
                mean_interval_s: r.mean_interval_s,
                rms_err_interval_ms: r.rms_err_interval_ms,
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str::<ReportDocument>(text)?.report)
    }
}

fn csv_line(out: &mut String, r: &MinuteRow) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        r.minute_label,
        r.mean_interval_s,
        r.mean_rate_bpm,
        r.rms_err_interval_ms,
        r.rms_err_rate_bpm,
        r.rel_err_interval_pct,
        r.rel_err_rate_pct,
        r.n_pairs,
        r.excluded
    );
}

pub fn render_report(report: &EvalReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => {
            let mut out = String::new();
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in &report.rows {
                csv_line(&mut out, r);
            }
            if let Some(overall) = &report.overall {
                csv_line(&mut out, overall);
            }
            Ok(out)
        }
        ReportFormat::Json => {
            let doc = ReportDocument {
                report: report.clone(),
                bars: report.bars(),
            };
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Per-minute summary of a single series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMinute {
    pub minute_label: String,
    pub mean_rate_bpm: f64,
    pub rate_from_mean_interval_bpm: f64,
    pub mean_interval_s: f64,
    pub n_estimates: usize,
}

pub fn series_minutes(series: &RespirationSeries) -> Vec<SeriesMinute> {
    let mut buckets: BTreeMap<i64, Vec<&RespirationEstimate>> = BTreeMap::new();
    for e in series.usable() {
        buckets.entry(minute_index(e.t_s)).or_default().push(e);
    }
    buckets
        .into_iter()
        .map(|(m, es)| {
            let mean_interval_s = mean(es.iter().map(|e| e.tau_hat_s));
            SeriesMinute {
                minute_label: minute_label(m),
                mean_rate_bpm: mean(es.iter().map(|e| e.rate_bpm)),
                rate_from_mean_interval_bpm: 60.0 / mean_interval_s,
                mean_interval_s,
                n_estimates: es.len(),
            }
        })
        .collect()
}

/// CSV with columns `minute_label,mean_rate_bpm,rate_from_mean_interval_bpm,mean_interval_s,n_estimates`.
pub fn write_series_minutes_csv<W: std::io::Write>(minutes: &[SeriesMinute], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for m in minutes {
        w.serialize(m)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::respiration::Gap;

    fn est(t_s: f64, tau: f64) -> RespirationEstimate {
        RespirationEstimate {
            t_s,
            tau_hat_s: tau,
            rate_bpm: 60.0 / tau,
            peak_corr: 0.9,
            motion_flag: false,
            effective_harmonics: 4,
        }
    }

    fn series(ts: &[f64], tau: f64) -> RespirationSeries {
        RespirationSeries {
            estimates: ts.iter().map(|&t| est(t, tau)).collect(),
            gaps: vec![],
            params: None,
        }
    }

    fn pair(t: f64, ia: f64, ib: f64, ra: f64, rb: f64) -> Pair {
        Pair {
            t_s: t,
            interval_a_s: ia,
            interval_b_s: ib,
            rate_a_bpm: ra,
            rate_b_bpm: rb,
        }
    }

    fn row(label: &str, rate: f64, err: f64) -> MinuteRow {
        MinuteRow {
            minute_label: label.into(),
            mean_interval_s: 60.0 / rate,
            mean_rate_bpm: rate,
            rate_from_mean_interval_bpm: rate,
            rms_err_interval_ms: 10.0,
            rms_err_rate_bpm: err,
            rel_err_interval_pct: 1.0,
            rel_err_rate_pct: 100.0 * err / rate,
            n_pairs: 10,
            excluded: false,
        }
    }

    #[test]
    fn identical_series_pair_with_zero_difference() {
        let ts: Vec<f64> = (0..120).map(|k| k as f64).collect();
        let a = series(&ts, 2.0);
        let p = pair_series(&a, &a, 0.5).unwrap();
        assert_eq!(p.pairs.len(), 120);
        assert_eq!((p.dropped_a, p.dropped_b), (0, 0));
        assert!(p.pairs.iter().all(|q| q.interval_a_s == q.interval_b_s));
    }

    #[test]
    fn quarter_hop_shift_still_pairs() {
        let ts: Vec<f64> = (0..100).map(|k| k as f64).collect();
        let shifted: Vec<f64> = (0..90).map(|k| k as f64 + 0.25).collect();
        let p = pair_series(&series(&ts, 2.0), &series(&shifted, 2.1), 0.5).unwrap();
        assert_eq!(p.pairs.len(), 90);
        assert_eq!(p.dropped_a, 10);
    }

    #[test]
    fn missing_minute_is_dropped_and_reported() {
        let ts: Vec<f64> = (0..180).map(|k| k as f64).collect();
        let tb: Vec<f64> = ts.iter().copied().filter(|t| !(60.0..120.0).contains(t)).collect();
        let mut b = series(&tb, 2.0);
        b.gaps = (60..120).map(|k| Gap { t_s: k as f64, reason: "motion".into() }).collect();
        let p = pair_series(&series(&ts, 2.0), &b, 0.5).unwrap();
        assert_eq!(p.pairs.len(), 120);
        assert_eq!(p.dropped_a, 60);
        assert_eq!(p.dropped_b, 60);
        let report = evaluate(&p, 10.0).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.gap_minutes, vec!["00:01".to_string()]);
    }

    #[test]
    fn motion_flagged_estimates_are_not_paired() {
        let mut a = series(&[0.0, 1.0, 2.0], 2.0);
        a.estimates[1].motion_flag = true;
        let p = pair_series(&a, &series(&[0.0, 1.0, 2.0], 2.0), 0.5).unwrap();
        assert_eq!(p.pairs.len(), 2);
        assert_eq!(p.dropped_a, 1);
    }

    #[test]
    fn disjoint_series_do_not_overlap() {
        let a = series(&[0.0, 1.0], 2.0);
        let b = series(&[100.0, 101.0], 2.0);
        assert!(matches!(pair_series(&a, &b, 0.5), Err(Error::NoOverlap)));
        assert!(matches!(pair_series(&a, &series(&[], 2.0), 0.5), Err(Error::NoOverlap)));
    }

    #[test]
    fn minute_stats_examples() {
        let same: Vec<Pair> = (0..5).map(|k| pair(k as f64, 2.0, 2.0, 30.0, 30.0)).collect();
        let r = minute_stats(&same, "11:37").unwrap();
        assert_eq!(r.rms_err_interval_ms, 0.0);
        assert_eq!(r.rel_err_rate_pct, 0.0);
        assert_eq!(r.mean_interval_s, 2.0);

        let two = [pair(0.0, 2.0, 1.99, 30.0, 29.0), pair(1.0, 2.0, 2.01, 30.0, 31.0)];
        let r = minute_stats(&two, "x").unwrap();
        assert!((r.rms_err_interval_ms - 10.0).abs() < 1e-9);
        assert!((r.rms_err_rate_bpm - 1.0).abs() < 1e-12);
        assert!((r.rel_err_rate_pct - 100.0 / 30.0).abs() < 1e-12);
        assert!(minute_stats(&[], "x").is_err());
    }

    #[test]
    fn outlier_rule() {
        let mut rows: Vec<MinuteRow> = (0..5).map(|k| row(&k.to_string(), 37.4, 0.5)).collect();
        let thr = exclude_outliers(&mut rows, 37.4, 10.0);
        assert!((thr - 3.74).abs() < 1e-12);
        assert!(rows.iter().all(|r| !r.excluded));

        rows[2].rms_err_rate_bpm = 5.0;
        exclude_outliers(&mut rows, 37.4, 10.0);
        assert!(rows[2].excluded);
        assert_eq!(rows.iter().filter(|r| r.excluded).count(), 1);

        rows[2].rms_err_rate_bpm = thr;
        exclude_outliers(&mut rows, 37.4, 10.0);
        assert!(!rows[2].excluded);
    }

    #[test]
    fn aggregate_reproduces_published_mean_row() {
        // minute rows as published: interval s, rate bpm, RMS ms, RMS bpm, rel %, rel %
        let table = [
            (1.75, 42.5, 35.7, 0.43, 2.04, 1.01),
            (1.73, 48.0, 12.9, 0.14, 0.74, 0.29),
            (2.22, 34.4, 100.4, 1.03, 4.53, 3.00),
            (2.87, 22.4, 38.1, 0.27, 1.33, 1.19),
            (2.02, 33.2, 49.8, 0.63, 2.47, 1.89),
            (2.33, 26.1, 31.4, 0.32, 1.35, 1.23),
            (2.32, 26.1, 58.8, 0.74, 2.54, 2.83),
            (2.21, 29.3, 77.6, 0.86, 3.51, 2.93),
            (2.16, 35.3, 79.0, 0.95, 3.66, 2.69),
            (1.45, 42.9, 34.6, 1.25, 2.39, 2.91),
            (1.83, 33.0, 46.8, 0.81, 2.55, 2.44),
            (1.96, 31.2, 58.9, 0.90, 3.01, 2.90),
            (1.97, 31.4, 48.0, 0.84, 2.44, 2.68),
            (1.26, 73.6, 14.2, 0.99, 1.13, 1.34),
            (1.73, 38.2, 32.0, 0.73, 1.85, 1.91),
            (1.44, 47.8, 49.3, 1.91, 3.43, 4.00),
            (1.52, 41.0, 37.5, 0.93, 2.47, 2.26),
        ];
        let mut rows: Vec<MinuteRow> = table
            .iter()
            .enumerate()
            .map(|(k, &(i, r, ei, er, ri, rr))| MinuteRow {
                minute_label: k.to_string(),
                mean_interval_s: i,
                mean_rate_bpm: r,
                rate_from_mean_interval_bpm: 60.0 / i,
                rms_err_interval_ms: ei,
                rms_err_rate_bpm: er,
                rel_err_interval_pct: ri,
                rel_err_rate_pct: rr,
                n_pairs: 1,
                excluded: false,
            })
            .collect();
        let overall_rate = mean(rows.iter().map(|r| r.mean_rate_bpm));
        exclude_outliers(&mut rows, overall_rate, 10.0);
        assert!(rows.iter().all(|r| !r.excluded));
        let m = aggregate(&rows).unwrap();
        let round = |v: f64, d: i32| (v * 10f64.powi(d)).round() / 10f64.powi(d);
        assert_eq!(round(m.mean_interval_s, 2), 1.93);
        assert_eq!(round(m.mean_rate_bpm, 1), 37.4);
        assert_eq!(round(m.rms_err_interval_ms, 1), 47.4);
        assert_eq!(round(m.rms_err_rate_bpm, 2), 0.81);
        assert_eq!(round(m.rel_err_interval_pct, 2), 2.44);
        assert_eq!(round(m.rel_err_rate_pct, 2), 2.21);
    }

    #[test]
    fn report_rendering() {
        let empty = EvalReport {
            rows: vec![],
            overall: None,
            exclude_pct: 10.0,
            exclusion_threshold_bpm: 0.0,
            excluded_minutes: vec![],
            gap_minutes: vec![],
            dropped_a: 0,
            dropped_b: 0,
        };
        let csv = render_report(&empty, ReportFormat::Csv).unwrap();
        assert_eq!(csv, format!("{CSV_HEADER}\n"));

        let rows: Vec<MinuteRow> = (0..17).map(|k| row(&minute_label(697 + k), 37.0, 0.8)).collect();
        let report = EvalReport {
            overall: aggregate(&rows),
            rows,
            ..empty
        };
        let csv = render_report(&report, ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 19);
        assert!(lines[1].starts_with("11:37,"));
        assert!(lines[18].starts_with("Mean,"));

        let json = render_report(&report, ReportFormat::Json).unwrap();
        assert_eq!(EvalReport::from_json(&json).unwrap(), report);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["bars"].as_array().unwrap().len(), 17);
        assert!(matches!("xml".parse::<ReportFormat>(), Err(Error::UnknownFormat(_))));
        assert_eq!("JSON".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
    }

    #[test]
    fn labels() {
        assert_eq!(minute_label(minute_index(41820.0)), "11:37");
        assert_eq!(minute_label(minute_index(41820.0 + 9.0 * 60.0 + 59.9)), "11:46");
        assert_eq!(minute_label(0), "00:00");
    }

    #[test]
    fn single_series_minutes() {
        let ts: Vec<f64> = (0..120).map(|k| k as f64).collect();
        let mut s = series(&ts, 2.0);
        for e in s.estimates.iter_mut().skip(60) {
            e.tau_hat_s = 3.0;
            e.rate_bpm = 20.0;
        }
        let m = series_minutes(&s);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].mean_rate_bpm, 30.0);
        assert_eq!(m[1].rate_from_mean_interval_bpm, 20.0);
        assert_eq!(m[1].n_estimates, 60);
    }
}
