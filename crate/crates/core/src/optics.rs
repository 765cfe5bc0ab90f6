//! Coherent-amplitude representation of multi-mode states and the passive
//! linear-optical operations acting on them.
//!
//! Under passive linear optics a multi-mode coherent state is fully
//! described by its vector of complex amplitudes (first moments), so every
//! operation here is a deterministic map on that vector implemented in
//! amplitude space.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Amplitude vector of an N-mode coherent state, entries in units of
/// sqrt(photons).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes {
    amps: Vec<Complex64>,
}

impl ModeAmplitudes {
    /// N-mode vacuum.
    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            amps: vec![Complex64::ZERO; n_modes],
        }
    }

    pub fn new(amps: Vec<Complex64>) -> Self {
        debug_assert!(amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()));
        Self { amps }
    }

    /// Real-amplitude constructor; all codebook states are real.
    pub fn from_real(amps: &[f64]) -> Self {
        Self {
            amps: amps.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.amps.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n_modes: self.amps.len(),
            });
        }
        Ok(())
    }
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ParamOutOfRange {
            name,
            value,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

/// Two-mode beam splitter of transmissivity `eta` acting on modes (i, j):
///
///   a_i' =  sqrt(eta) a_i + sqrt(1-eta) a_j
///   a_j' = -sqrt(1-eta) a_i + sqrt(eta) a_j
pub fn beam_splitter(
    state: &ModeAmplitudes,
    i: usize,
    j: usize,
    eta: f64,
) -> Result<ModeAmplitudes> {
    state.check_index(i)?;
    state.check_index(j)?;
    if i == j {
        return Err(Error::IndexOutOfRange {
            index: j,
            n_modes: state.n_modes(),
        });
    }
    check_unit_interval("eta", eta)?;

    let t = eta.sqrt();
    let r = (1.0 - eta).sqrt();
    let mut out = state.clone();
    let (ai, aj) = (state.amps[i], state.amps[j]);
    out.amps[i] = t * ai + r * aj;
    out.amps[j] = -r * ai + t * aj;
    Ok(out)
}

/// Displace mode `i` by `beta`.
pub fn displace(state: &ModeAmplitudes, i: usize, beta: Complex64) -> Result<ModeAmplitudes> {
    state.check_index(i)?;
    let mut out = state.clone();
    out.amps[i] += beta;
    Ok(out)
}

/// Block a fraction of the signal in mode `i`: amplitude scales by
/// sqrt(kappa), energy by kappa. Exact for coherent states.
pub fn attenuate(state: &ModeAmplitudes, i: usize, kappa: f64) -> Result<ModeAmplitudes> {
    state.check_index(i)?;
    check_unit_interval("kappa", kappa)?;
    let mut out = state.clone();
    out.amps[i] *= kappa.sqrt();
    Ok(out)
}

/// Total photon number sum_i |a_i|^2.
pub fn total_energy(state: &ModeAmplitudes) -> f64 {
    state.amps.iter().map(|a| a.norm_sqr()).sum()
}

/// Multiply by (1/sqrt(N)) H_N with H_N the symmetric Sylvester-Hadamard
/// matrix, realized as log2(N) butterfly stages of pairwise mixes.
///
/// The normalized transform is an involution (H_N is symmetric and
/// H_N^2 = N I), so this both concentrates codewords into pulses and maps
/// pulse states back to their transmit-basis pre-images.
pub fn hadamard_butterfly(state: &ModeAmplitudes) -> Result<ModeAmplitudes> {
    let n = state.n_modes();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { n });
    }
    let mut amps = state.amps.clone();
    let mut dist = 1;
    while dist < n {
        for block in (0..n).step_by(2 * dist) {
            for k in block..block + dist {
                let (x, y) = (amps[k], amps[k + dist]);
                amps[k] = x + y;
                amps[k + dist] = x - y;
            }
        }
        dist *= 2;
    }
    let scale = 1.0 / (n as f64).sqrt();
    for a in &mut amps {
        *a *= scale;
    }
    Ok(ModeAmplitudes { amps })
}
