//! Partitioned census runs, CSV reports and golden files.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use causal_core::census::{BetaEstimate, CensusConfig, CensusTable, DirectSearch, MapSearch, Step, Strategy};

/// Depth of the search prefixes that define partitions. Fixed, so that the
/// tables do not depend on the number of jobs.
pub const PARTITION_DEPTH: usize = 3;

fn partitions(strategy: Strategy, config: CensusConfig) -> Vec<Vec<Step>> {
    match strategy {
        Strategy::Direct => DirectSearch::partitions(config, PARTITION_DEPTH),
        Strategy::Midsection => MapSearch::partitions(config, PARTITION_DEPTH),
    }
}

fn run_partition(strategy: Strategy, config: CensusConfig, prefix: &[Step]) -> CensusTable {
    match strategy {
        Strategy::Direct => DirectSearch::run(config, prefix),
        Strategy::Midsection => MapSearch::run(config, prefix),
    }
}

/// Runs every partition on a pool of `jobs` threads and merges the tables
/// in partition order. A node cap applies to each partition separately.
pub fn run_census(strategy: Strategy, config: CensusConfig, jobs: usize) -> CensusTable {
    let parts = partitions(strategy, config);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CensusTable>>> = Mutex::new(vec![None; parts.len()]);
    thread::scope(|scope| {
        for _ in 0..jobs.max(1).min(parts.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(prefix) = parts.get(i) else { break };
                let table = run_partition(strategy, config, prefix);
                results.lock().expect("no panics while holding the lock")[i] = Some(table);
            });
        }
    });
    let mut merged = CensusTable::new(strategy, &config);
    for t in results.into_inner().expect("threads joined").into_iter().flatten() {
        merged.merge(t);
    }
    merged
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii")
}

/// `V,count,strategy,genus` for every volume up to `vmax`.
pub fn table_csv(table: &CensusTable) -> String {
    csv_string(|w| {
        w.write_record(["V", "count", "strategy", "genus"])?;
        for (v, n) in table.counts() {
            w.write_record([v.to_string(), n.to_string(), table.strategy.to_string(), table.genus.to_string()])?;
        }
        Ok(())
    })
}

/// `V,logN_over_V,running_inf`, where `running_inf` is the running infimum
/// of `f(V)/V` for `f(V) = -log N(V - V0)`.
pub fn beta_csv(estimate: &BetaEstimate) -> String {
    csv_string(|w| {
        w.write_record(["V", "logN_over_V", "running_inf"])?;
        for r in &estimate.rows {
            w.write_record([
                r.volume.to_string(),
                format!("{:.6}", r.log_n_over_v),
                format!("{:.6}", r.running_inf()),
            ])?;
        }
        Ok(())
    })
}

/// Reads the `V` and `count` columns of a counts CSV.
pub fn read_counts(text: &str) -> Result<BTreeMap<usize, u64>, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("missing column `{name}`"))
    };
    let (v, count) = (column("V")?, column("count")?);
    let mut out = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let field = |c: usize| -> Result<u64, String> {
            record
                .get(c)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| format!("row {}: bad number", i + 2))
        };
        out.insert(field(v)? as usize, field(count)?);
    }
    Ok(out)
}

pub fn golden_path(dir: &Path, strategy: Strategy, genus: u32, vmax: usize) -> PathBuf {
    dir.join(format!("census_{strategy}_g{genus}_v{vmax}.csv"))
}

#[derive(Debug, PartialEq, Eq)]
pub enum Golden {
    Written(PathBuf),
    Matched(PathBuf),
    Differs(PathBuf),
}

/// Compares `csv` with the golden file, writing it on the first run.
pub fn check_golden(path: &Path, csv: &str) -> io::Result<Golden> {
    match fs::read_to_string(path) {
        Ok(existing) if existing == csv => Ok(Golden::Matched(path.to_path_buf())),
        Ok(_) => Ok(Golden::Differs(path.to_path_buf())),
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, csv)?;
            Ok(Golden::Written(path.to_path_buf()))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use causal_core::census::estimate_beta;

    #[test]
    fn job_count_does_not_matter() {
        let config = CensusConfig::new(13, 0);
        let one = run_census(Strategy::Direct, config, 1);
        let four = run_census(Strategy::Direct, config, 4);
        assert_eq!(table_csv(&one), table_csv(&four));
        assert!(one.same_classes(&four));
    }

    #[test]
    fn counts_csv_round_trip() {
        let table = run_census(Strategy::Direct, CensusConfig::new(12, 0), 2);
        let csv = table_csv(&table);
        assert!(csv.starts_with("V,count,strategy,genus\n1,0,direct,0\n"));
        assert!(csv.ends_with("12,1,direct,0\n"));
        let counts = read_counts(&csv).unwrap();
        assert_eq!(counts[&12], 1);
        let beta = beta_csv(&estimate_beta(&counts, 0).unwrap());
        assert_eq!(beta, "V,logN_over_V,running_inf\n12,0.000000,0.000000\n");
    }
}
