//! Executes run points, optionally on a pool of worker threads.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use qbatt::engines::Trajectory;

use crate::config::{ExperimentConfig, RunPoint};
use crate::output::write_trajectory;
use crate::CliError;

fn execute(point: &RunPoint) -> Result<Trajectory, CliError> {
    point.scenario.run(point.k, &point.params).map_err(|e| CliError::Run {
        point: point.to_string(),
        source: e,
    })
}

/// Runs every point of `cfg` on `workers` threads. Results are written by
/// the calling thread as they arrive; the first failure (in point order)
/// decides the returned error, after all points have finished.
pub fn run_config(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<PathBuf>, CliError> {
    let points = cfg.points()?;
    let snapshots = cfg.snapshot_indices();
    let workers = workers.clamp(1, points.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();

    let mut outcomes: Vec<Option<Result<Vec<PathBuf>, CliError>>> = vec![None; points.len()];
    std::thread::scope(|s| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (points, next) = (&points, &next);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(point) = points.get(i) else { break };
                if tx.send((i, execute(point))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, result) in rx {
            let written = result.and_then(|t| write_trajectory(&cfg.output, &t, &snapshots));
            if let Ok(paths) = &written {
                for p in paths {
                    println!("wrote {}", p.display());
                }
            }
            outcomes[i] = Some(written);
        }
    });

    let mut all = Vec::new();
    for outcome in outcomes.into_iter().flatten() {
        all.extend(outcome?);
    }
    Ok(all)
}
