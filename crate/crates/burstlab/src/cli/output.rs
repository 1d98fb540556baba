//! Output-file writers. Every file is plain CSV or JSON with a fixed
//! column order (documented in docs/formats.md); undefined statistics are
//! written as literal `NA`, never dropped. Writers format floats with the
//! shortest round-trip representation, so identical values give identical
//! bytes.

use std::fs::{self, File};
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::RunConfig;
use super::pipeline::{FamilyResult, PipelineError, RunReport};
use crate::localvar::{ExcludedTrain, LvError, LvRecord};
use crate::stats::{BinSummary, CorrelationRecord, ZScoreRecord};
use crate::trains::Role;

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_else(|| "NA".to_string())
}

fn out_error(path: &Path, err: impl std::fmt::Display) -> PipelineError {
    PipelineError::Output {
        path: path.to_path_buf(),
        message: err.to_string(),
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, PipelineError> {
    let file = File::create(path).map_err(|e| out_error(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let mut file = File::create(path).map_err(|e| out_error(path, e))?;
    serde_json::to_writer_pretty(&mut file, value).map_err(|e| out_error(path, e))?;
    file.write_all(b"\n").map_err(|e| out_error(path, e))
}

fn write_bins(path: &Path, families: &[FamilyResult]) -> Result<(), PipelineError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "role",
        "channel",
        "class_lo",
        "class_hi",
        "mean_log10_f",
        "member_count",
        "excluded_count",
        "mu_lv",
        "sigma_lv",
        "degenerate",
    ])
    .map_err(|e| out_error(path, e))?;
    for family in families {
        let mut summaries = family.summaries.iter();
        for bin in &family.bins {
            let (mu, sigma, degenerate) = if bin.members.is_empty() {
                (None, None, "NA".to_string())
            } else {
                let s = summaries.next().expect("one summary per populated bin");
                (Some(s.mu_lv), Some(s.sigma_lv), s.degenerate.to_string())
            };
            w.write_record([
                family.analysis.role.to_string(),
                family.analysis.channel.to_string(),
                fmt_f64(bin.class.lo),
                fmt_f64(bin.class.hi),
                fmt_opt(bin.class.mean_log10_f),
                bin.class.member_count.to_string(),
                bin.excluded_count.to_string(),
                fmt_opt(mu),
                fmt_opt(sigma),
                degenerate,
            ])
            .map_err(|e| out_error(path, e))?;
        }
    }
    w.flush().map_err(|e| out_error(path, e))
}

fn write_lv_hist(path: &Path, families: &[FamilyResult]) -> Result<(), PipelineError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "role", "channel", "class_lo", "class_hi", "lv_lo", "lv_hi", "p",
    ])
    .map_err(|e| out_error(path, e))?;
    for family in families {
        for summary in &family.summaries {
            for (i, p) in summary.histogram.iter().enumerate() {
                w.write_record([
                    summary.role.to_string(),
                    summary.channel.to_string(),
                    fmt_f64(summary.class.lo),
                    fmt_f64(summary.class.hi),
                    fmt_f64(i as f64 * summary.hist_width),
                    fmt_f64((i + 1) as f64 * summary.hist_width),
                    fmt_f64(*p),
                ])
                .map_err(|e| out_error(path, e))?;
            }
        }
    }
    w.flush().map_err(|e| out_error(path, e))
}

fn write_zipf(path: &Path, families: &[FamilyResult]) -> Result<(), PipelineError> {
    let mut w = csv_writer(path)?;
    w.write_record(["role", "channel", "rank", "user_id", "f"])
        .map_err(|e| out_error(path, e))?;
    for family in families {
        for record in &family.zipf {
            w.write_record([
                family.analysis.role.to_string(),
                family.analysis.channel.to_string(),
                record.rank.to_string(),
                record.user.to_string(),
                record.f.to_string(),
            ])
            .map_err(|e| out_error(path, e))?;
        }
    }
    w.flush().map_err(|e| out_error(path, e))
}

fn write_zscores(path: &Path, rows: &[(Role, ZScoreRecord)]) -> Result<(), PipelineError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "role",
        "comparison",
        "class_lo",
        "class_hi",
        "mean_log10_f",
        "member_count",
        "denominator",
        "f_term",
        "z",
    ])
    .map_err(|e| out_error(path, e))?;
    for (role, record) in rows {
        w.write_record([
            role.to_string(),
            record.comparison.to_string(),
            fmt_f64(record.class.lo),
            fmt_f64(record.class.hi),
            fmt_opt(record.class.mean_log10_f),
            record.class.member_count.to_string(),
            record.denominator.to_string(),
            fmt_f64(record.f_term),
            fmt_opt(record.z),
        ])
        .map_err(|e| out_error(path, e))?;
    }
    w.flush().map_err(|e| out_error(path, e))
}

fn write_correlations(path: &Path, rows: &[CorrelationRecord]) -> Result<(), PipelineError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "role",
        "pair",
        "mode",
        "class_lo",
        "class_hi",
        "mean_log10_f_first",
        "mean_log10_f_second",
        "n_pairs",
        "r",
    ])
    .map_err(|e| out_error(path, e))?;
    for record in rows {
        w.write_record([
            record.role.to_string(),
            record.pair.to_string(),
            record.mode.to_string(),
            fmt_f64(record.class.lo),
            fmt_f64(record.class.hi),
            fmt_opt(record.class.mean_log10_f),
            fmt_opt(record.other_mean_log10_f),
            record.n_pairs.to_string(),
            fmt_opt(record.r),
        ])
        .map_err(|e| out_error(path, e))?;
    }
    w.flush().map_err(|e| out_error(path, e))
}

fn write_null_bins(path: &Path, rows: &[(u64, BinSummary)]) -> Result<(), PipelineError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "seed",
        "role",
        "channel",
        "class_lo",
        "class_hi",
        "mean_log10_f",
        "member_count",
        "excluded_count",
        "mu_lv",
        "sigma_lv",
    ])
    .map_err(|e| out_error(path, e))?;
    for (seed, summary) in rows {
        w.write_record([
            seed.to_string(),
            summary.role.to_string(),
            summary.channel.to_string(),
            fmt_f64(summary.class.lo),
            fmt_f64(summary.class.hi),
            fmt_opt(summary.class.mean_log10_f),
            summary.class.member_count.to_string(),
            summary.excluded_count.to_string(),
            fmt_f64(summary.mu_lv),
            fmt_f64(summary.sigma_lv),
        ])
        .map_err(|e| out_error(path, e))?;
    }
    w.flush().map_err(|e| out_error(path, e))
}

/// Write the complete output set of an analyze run.
#[allow(clippy::too_many_arguments)]
pub(crate) fn write_all(
    out_dir: &Path,
    config: &RunConfig,
    report: &RunReport,
    families: &[FamilyResult],
    zscores: &[(Role, ZScoreRecord)],
    correlations: &[CorrelationRecord],
    null_summaries: &[(u64, BinSummary)],
) -> Result<(), PipelineError> {
    fs::create_dir_all(out_dir).map_err(|e| out_error(out_dir, e))?;
    write_json(&out_dir.join("manifest.json"), config)?;
    write_json(&out_dir.join("summary.json"), report)?;
    write_bins(&out_dir.join("bins.csv"), families)?;
    write_lv_hist(&out_dir.join("lv_hist.csv"), families)?;
    write_zipf(&out_dir.join("zipf.csv"), families)?;
    write_zscores(&out_dir.join("zscores.csv"), zscores)?;
    write_correlations(&out_dir.join("correlations.csv"), correlations)?;
    if !config.null_seeds.is_empty() {
        write_null_bins(&out_dir.join("null_bins.csv"), null_summaries)?;
    }
    Ok(())
}

fn lv_error_label(reason: LvError) -> &'static str {
    match reason {
        LvError::TooFewSpikes { .. } => "too-few-spikes",
        LvError::ZeroInterval { .. } => "zero-interval",
    }
}

/// Per-train Lv rows, shared by the `lv`, `null`, and `synth` subcommands.
///
/// Included and excluded trains are merged in user-id order; excluded rows
/// carry `lv=NA` and the exclusion reason.
pub(crate) fn write_lv_rows<W: Write>(
    w: W,
    role_label: &str,
    channel_label: &str,
    records: &[LvRecord],
    excluded: &[ExcludedTrain],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["user_id", "role", "channel", "n_spikes", "lv", "exclusion"])?;
    let mut records = records.iter().peekable();
    let mut excluded = excluded.iter().peekable();
    loop {
        let take_record = match (records.peek(), excluded.peek()) {
            (Some(r), Some(e)) => r.user <= e.user,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_record {
            let r = records.next().unwrap();
            w.write_record([
                r.user.to_string(),
                role_label.to_string(),
                channel_label.to_string(),
                r.n.to_string(),
                fmt_f64(r.lv),
                String::new(),
            ])?;
        } else {
            let e = excluded.next().unwrap();
            w.write_record([
                e.user.to_string(),
                role_label.to_string(),
                channel_label.to_string(),
                e.n.to_string(),
                "NA".to_string(),
                lv_error_label(e.reason).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
