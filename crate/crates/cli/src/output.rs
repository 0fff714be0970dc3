//! CSV writers. Floats carry 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qbatt::engines::Trajectory;
use qbatt::observables::poisson_tv;

use crate::CliError;

pub const TRAJECTORY_HEADER: &str = "k,dtau,dU_atom,dU_field,U_field_cum,ergotropy_field,mean_n,poisson_tv";
pub const SNAPSHOT_HEADER: &str = "n,p_n";
pub const ATOM_HEADER: &str = "k,p_g,p_e,p_m";

/// Ledger tolerance re-checked before anything is written.
pub const LEDGER_TOLERANCE: f64 = 1e-9;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn stem(t: &Trajectory) -> String {
    format!("{}_T{}", t.scenario.tag(), t.params.t_bar())
}

pub fn trajectory_csv(t: &Trajectory) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for (r, cum) in t.records.iter().zip(t.cumulative_field_energy()) {
        let pops = r.field.populations();
        let fit = poisson_tv(&pops);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.k,
            num(r.dtau),
            num(r.du_atom),
            num(r.du_field),
            num(cum),
            num(r.ergotropy_field),
            num(fit.mean),
            num(fit.tv_distance)
        );
    }
    out
}

pub fn snapshot_csv(pops: &[f64]) -> String {
    let mut out = String::from(SNAPSHOT_HEADER);
    out.push('\n');
    for (n, p) in pops.iter().enumerate() {
        let _ = writeln!(out, "{n},{}", num(*p));
    }
    out
}

/// Colliding-atom populations after each collision.
pub fn atom_csv(t: &Trajectory) -> String {
    let mut out = String::from(ATOM_HEADER);
    out.push('\n');
    for r in &t.records {
        let a = r.atom_final;
        let _ = writeln!(out, "{},{},{},{}", r.k, num(a.p_g), num(a.p_e), num(a.p_m));
    }
    out
}

fn write(path: PathBuf, body: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    written.push(path);
    Ok(())
}

/// Writes the trajectory, its atom diagnostic and the requested snapshots.
pub fn write_trajectory(dir: &Path, t: &Trajectory, snapshots: &[usize]) -> Result<Vec<PathBuf>, CliError> {
    t.check_ledger(LEDGER_TOLERANCE).map_err(CliError::Engine)?;
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let stem = stem(t);
    let mut written = Vec::new();
    write(dir.join(format!("{stem}.csv")), &trajectory_csv(t), &mut written)?;
    write(dir.join(format!("{stem}_atom.csv")), &atom_csv(t), &mut written)?;
    for &k in snapshots.iter().filter(|&&k| k >= 1 && k <= t.len()) {
        let pops = t.records[k - 1].field.populations();
        write(dir.join(format!("{stem}_k{k}.csv")), &snapshot_csv(&pops), &mut written)?;
    }
    Ok(written)
}
