//! Rate sweeps over (E, N) grids, shared by `sweep` and `figures`.

use crate::csvio::SweepRecord;
use pppm_core::rates::{r_dolinar, r_hadamard, r_holevo_bpsk, r_pppm_opt};
use rayon::prelude::*;

/// A failed grid point, tagged with its coordinates.
#[derive(Debug)]
pub struct SweepError {
    pub n_modes: usize,
    pub energy: f64,
    pub source: pppm_core::Error,
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "sweep point (E = {}, N = {}): {}",
            self.energy, self.n_modes, self.source
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Log,
    Linear,
}

impl std::str::FromStr for GridKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "log" => Ok(GridKind::Log),
            "linear" => Ok(GridKind::Linear),
            other => Err(format!("unknown grid '{other}' (expected log or linear)")),
        }
    }
}

pub fn energy_grid(emin: f64, emax: f64, points: usize, kind: GridKind) -> Vec<f64> {
    assert!(points >= 2);
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            match kind {
                GridKind::Log => emin * (emax / emin).powf(t),
                GridKind::Linear => emin + (emax - emin) * t,
            }
        })
        .collect()
}

/// One record per (N, E), N-major, E ascending. Grid points evaluate in
/// parallel; assembly is deterministic.
pub fn compute_sweep(modes: &[usize], energies: &[f64]) -> Result<Vec<SweepRecord>, SweepError> {
    let mut tasks: Vec<(usize, f64)> = Vec::new();
    let mut sorted_modes = modes.to_vec();
    sorted_modes.sort_unstable();
    sorted_modes.dedup();
    for &n in &sorted_modes {
        for &e in energies {
            tasks.push((n, e));
        }
    }
    tasks
        .par_iter()
        .map(|&(n, e)| {
            let point = |source| SweepError {
                n_modes: n,
                energy: e,
                source,
            };
            let opt = r_pppm_opt(e, n).map_err(point)?;
            Ok(SweepRecord {
                energy: e,
                n_modes: n,
                p_opt: opt.p_opt,
                r_holevo: r_holevo_bpsk(e).map_err(point)?,
                r_dolinar: r_dolinar(e).map_err(point)?,
                r_hadamard: r_hadamard(e, n).map_err(point)?,
                r_pppm: opt.rate_bits_per_mode,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_endpoints() {
        let g = energy_grid(0.01, 1.0, 5, GridKind::Log);
        assert!((g[0] - 0.01).abs() < 1e-15);
        assert!((g[4] - 1.0).abs() < 1e-12);
        let l = energy_grid(0.0, 1.0, 3, GridKind::Linear);
        assert_eq!(l, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn sweep_rows_are_n_major_and_monotone_in_energy() {
        let records = compute_sweep(&[8, 4], &energy_grid(0.05, 0.2, 3, GridKind::Log)).unwrap();
        assert_eq!(records.len(), 6);
        let ns: Vec<usize> = records.iter().map(|r| r.n_modes).collect();
        assert_eq!(ns, vec![4, 4, 4, 8, 8, 8]);
        for w in records.windows(2) {
            if w[0].n_modes == w[1].n_modes {
                assert!(w[0].energy < w[1].energy);
            }
        }
        for r in &records {
            assert!(r.r_pppm >= r.r_hadamard - 1e-12);
            assert!(r.r_pppm > 0.0 && r.p_opt >= 0.0 && r.p_opt <= 1.0);
        }
    }
}
