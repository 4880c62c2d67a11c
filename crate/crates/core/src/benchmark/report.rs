use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use super::metrics::{cvar, mean};
use super::runner::BenchmarkRecord;
use crate::error::Result;

pub const CSV_HEADER: &str =
    "run_id,env_seed,dataset_seed,eta,dataset_size,algorithm,hyperparam_name,hyperparam_value,perf_raw,perf_normalized,zeta,failed";

pub fn write_records<W: Write>(out: W, records: &[BenchmarkRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<BenchmarkRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Into::into))
        .collect()
}

/// Mean and CVaR of the normalized performance of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub eta: Option<f64>,
    pub dataset_size: usize,
    pub algorithm: String,
    pub hyperparam_name: String,
    pub hyperparam_value: Option<f64>,
    pub runs: usize,
    pub failures: usize,
    pub mean: Option<f64>,
    pub cvar_10: Option<f64>,
    pub cvar_1: Option<f64>,
    pub cvar_0_1: Option<f64>,
}

/// Groups records by `(eta, size, algorithm, hyper-parameter)`. Failed runs
/// are counted but excluded from the statistics.
pub fn summarize(records: &[BenchmarkRecord]) -> Vec<SummaryRow> {
    type Key = (Option<u64>, usize, String, String, Option<u64>);
    let mut groups: BTreeMap<Key, (Vec<f64>, usize, Option<f64>, Option<f64>)> = BTreeMap::new();
    for r in records {
        let key = (
            r.eta.map(f64::to_bits),
            r.dataset_size,
            r.algorithm.clone(),
            r.hyperparam_name.clone(),
            r.hyperparam_value.map(f64::to_bits),
        );
        let entry = groups
            .entry(key)
            .or_insert((Vec::new(), 0, r.eta, r.hyperparam_value));
        match r.perf_normalized {
            Some(p) if !r.failed => entry.0.push(p),
            _ => entry.1 += 1,
        }
    }
    groups
        .into_iter()
        .map(
            |((_, size, algorithm, name, _), (values, failures, eta, value))| SummaryRow {
                eta,
                dataset_size: size,
                algorithm,
                hyperparam_name: name,
                hyperparam_value: value,
                runs: values.len() + failures,
                failures,
                mean: mean(&values),
                cvar_10: cvar(&values, 0.1).ok(),
                cvar_1: cvar(&values, 0.01).ok(),
                cvar_0_1: cvar(&values, 0.001).ok(),
            },
        )
        .collect()
}

const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Plots mean and CVaR curves from summary.csv (written next to this script)."""
import csv
import os
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "summary.csv"))))
metrics = sys.argv[1:] or ["mean", "cvar_1"]
etas = sorted({r["eta"] for r in rows})
for eta in etas:
    for metric in metrics:
        curves = defaultdict(list)
        for r in rows:
            if r["eta"] != eta or r[metric] == "":
                continue
            label = r["algorithm"]
            if r["hyperparam_name"]:
                label += " (%s=%s)" % (r["hyperparam_name"], r["hyperparam_value"])
            curves[label].append((int(r["dataset_size"]), float(r[metric])))
        plt.figure(figsize=(7, 4.5))
        for label, points in sorted(curves.items()):
            points.sort()
            plt.plot([p[0] for p in points], [p[1] for p in points], marker="o", label=label)
        plt.xscale("log")
        plt.xlabel("number of trajectories")
        plt.ylabel("normalized performance (%s)" % metric)
        plt.axhline(0.0, color="black", linewidth=0.5)
        plt.legend(fontsize="small")
        suffix = "" if eta == "" else "_eta%s" % eta
        plt.tight_layout()
        plt.savefig(os.path.join(here, "%s%s.png" % (metric, suffix)))
        plt.close()
"#;

/// Writes `summary.csv`, one heatmap table per swept algorithm
/// (`heatmap_<algorithm>.csv`: 1%-CVaR by hyper-parameter and size), and
/// `plot.py` into `dir`. Returns the written paths.
pub fn emit_plot_data(records: &[BenchmarkRecord], dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let summary = summarize(records);
    let mut written = Vec::new();

    let path = dir.join("summary.csv");
    let mut writer = csv::Writer::from_path(&path)?;
    for row in &summary {
        writer.serialize(row)?;
    }
    writer.flush()?;
    written.push(path);

    let mut heatmaps: BTreeMap<&str, Vec<&SummaryRow>> = BTreeMap::new();
    for row in summary.iter().filter(|r| !r.hyperparam_name.is_empty()) {
        heatmaps
            .entry(row.algorithm.as_str())
            .or_default()
            .push(row);
    }
    for (algorithm, rows) in heatmaps {
        let path = dir.join(format!("heatmap_{algorithm}.csv"));
        let mut writer = csv::Writer::from_path(&path)?;
        writer.write_record(["eta", "hyperparam_value", "dataset_size", "mean", "cvar_1"])?;
        for r in rows {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            writer.write_record([
                opt(r.eta),
                opt(r.hyperparam_value),
                r.dataset_size.to_string(),
                opt(r.mean),
                opt(r.cvar_1),
            ])?;
        }
        writer.flush()?;
        written.push(path);
    }

    let path = dir.join("plot.py");
    std::fs::write(&path, PLOT_SCRIPT)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(run_id: u64, algorithm: &str, perf: Option<f64>) -> BenchmarkRecord {
        BenchmarkRecord {
            run_id,
            env_seed: 1,
            dataset_seed: 2,
            eta: None,
            dataset_size: 10,
            algorithm: algorithm.into(),
            hyperparam_name: String::new(),
            hyperparam_value: None,
            perf_raw: perf,
            perf_normalized: perf,
            zeta: None,
            failed: perf.is_none(),
        }
    }

    #[test]
    fn csv_header_and_round_trip() {
        let records = vec![rec(0, "basic_rl", Some(0.25)), rec(1, "basic_rl", None)];
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(read_records(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn summary_excludes_failures() {
        let records = vec![
            rec(0, "basic_rl", Some(1.0)),
            rec(1, "basic_rl", Some(-1.0)),
            rec(2, "basic_rl", None),
        ];
        let summary = summarize(&records);
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].runs, 3);
        assert_eq!(summary[0].failures, 1);
        assert_eq!(summary[0].mean, Some(0.0));
        assert_eq!(summary[0].cvar_1, Some(-1.0));
    }
}
