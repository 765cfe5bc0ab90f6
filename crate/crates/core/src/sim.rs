//! Seeded Monte Carlo simulation of the physical receiver.
//!
//! Each trial runs T-step VP detectors in lockstep on all modes of the
//! pulse-basis codeword, freezes the first-clicked mode, and follows the
//! feed-forward chain: a lone click ends in a Dolinar stage on that mode's
//! remainder; a second click triggers attenuation of the earlier mode, a
//! balanced recombination, and a fresh VP + Dolinar stage on the combined
//! pulse. Dolinar hardware is treated as a black box sampled from its
//! known error statistics.
//!
//! Every trial owns a counter-based RNG stream keyed by (seed, message,
//! trial), so results are bit-identical regardless of thread scheduling.

use crate::codebook::{self, Codebook, Message, Sign};
use crate::detectors::helstrom_error;
use crate::error::{Error, Result};
use crate::rates::{ConditionalTable, OutcomeSymbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

/// How the solo-click phase guess on a two-pulse codeword is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DolinarMode {
    /// Fair-coin sign, reproducing the analytic table's 1/2 factor.
    PaperModel,
    /// Run the Dolinar stage on the clicked mode's remainder.
    Physical,
}

/// How trials are assigned to messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialAllocation {
    /// Split the trial budget evenly over all messages.
    PerMessage,
    /// Draw each trial's message from the p-mixed prior.
    Prior,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub e_per_mode: f64,
    pub n_modes: usize,
    pub p_mix: f64,
    /// VP tap rounds per detector.
    pub vp_steps: usize,
    pub trials: u64,
    pub seed: u64,
    pub dolinar_mode: DolinarMode,
    pub allocation: TrialAllocation,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_modes < 2 || !self.n_modes.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { n: self.n_modes });
        }
        if self.e_per_mode.is_nan() || self.e_per_mode < 0.0 {
            return Err(Error::ParamOutOfRange {
                name: "e_per_mode",
                value: self.e_per_mode,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        if !(0.0..=1.0).contains(&self.p_mix) {
            return Err(Error::ParamOutOfRange {
                name: "p_mix",
                value: self.p_mix,
                min: 0.0,
                max: 1.0,
            });
        }
        if self.vp_steps < 2 {
            return Err(Error::ParamOutOfRange {
                name: "vp_steps",
                value: self.vp_steps as f64,
                min: 2.0,
                max: f64::INFINITY,
            });
        }
        if self.trials < 1 {
            return Err(Error::ParamOutOfRange {
                name: "trials",
                value: self.trials as f64,
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        Ok(())
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent RNG stream for one (message, trial) pair.
fn trial_rng(seed: u64, msg_idx: u64, trial_idx: u64) -> ChaCha12Rng {
    let mut state = seed;
    let a = splitmix64(&mut state);
    state ^= msg_idx.wrapping_mul(0xA076_1D64_78BD_642F);
    let b = splitmix64(&mut state);
    state ^= trial_idx.wrapping_mul(0xE703_7ED1_A0B4_28DB);
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&a.to_le_bytes());
    key[8..16].copy_from_slice(&b.to_le_bytes());
    key[16..24].copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    key[24..].copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

// message-selection streams must never collide with decode streams
const SELECTION_STREAM: u64 = u64::MAX;

/// First click round of a T-step VP detector on a pulse of energy
/// `e_mode`, or None if all rounds stay silent. Each round clicks with
/// probability 1 - exp(-e/T), so the first-click CDF is 1 - exp(-e t / T)
/// and the overall click probability telescopes to 1 - exp(-e).
pub fn sample_first_click<R: Rng>(e_mode: f64, t_steps: usize, rng: &mut R) -> Option<usize> {
    debug_assert!(e_mode >= 0.0);
    if e_mode <= 0.0 {
        return None;
    }
    let u: f64 = rng.random();
    if u >= 1.0 - (-e_mode).exp() {
        return None;
    }
    // invert the geometric CDF
    let t = 1 + (-(1.0 - u).ln() * t_steps as f64 / e_mode) as usize;
    Some(t.min(t_steps))
}

/// Black-box Dolinar stage on remaining energy `e_rem`: returns the true
/// sign with probability 1 - P_Hel(e_rem).
pub fn dolinar_sample<R: Rng>(e_rem: f64, true_sign: Sign, rng: &mut R) -> Sign {
    let err = helstrom_error(e_rem).expect("remaining energy >= 0");
    if rng.random::<f64>() < err {
        true_sign.flipped()
    } else {
        true_sign
    }
}

/// Run one decoding trial on a codeword and return the decoder's outcome.
pub fn decode_trial<R: Rng>(msg: &Message, cfg: &SimConfig, rng: &mut R) -> OutcomeSymbol {
    let n = cfg.n_modes as f64;
    let t_steps = cfg.vp_steps;
    let t_f = t_steps as f64;

    match *msg {
        Message::OnePulse { pos, sign } => {
            let e_pulse = n * cfg.e_per_mode;
            match sample_first_click(e_pulse, t_steps, rng) {
                None => OutcomeSymbol::Error2,
                Some(t1) => {
                    let e_rem = e_pulse * (t_steps - t1) as f64 / t_f;
                    let guess = dolinar_sample(e_rem, sign, rng);
                    OutcomeSymbol::OnePulse { pos, sign: guess }
                }
            }
        }
        Message::TwoPulse {
            pos: (k1, k2),
            signs: (s1, s2),
        } => {
            let e_pulse = n * cfg.e_per_mode / 2.0;
            let c1 = sample_first_click(e_pulse, t_steps, rng);
            let c2 = sample_first_click(e_pulse, t_steps, rng);
            match (c1, c2) {
                (None, None) => OutcomeSymbol::Error2,
                (Some(t1), None) => solo_click(cfg, k1, s1, e_pulse, t1, rng),
                (None, Some(t1)) => solo_click(cfg, k2, s2, e_pulse, t1, rng),
                (Some(ta), Some(tb)) => {
                    // earlier mode frozen, later click sets the usable
                    // remainder; ties resolve to the lower mode index
                    let (first_sign, later_sign, t2) =
                        if ta <= tb { (s1, s2, tb) } else { (s2, s1, ta) };
                    // block the frozen mode down to the same time fraction,
                    // then recombine on a balanced splitter: the pulse sits
                    // in the sum port (sign = first_sign) for equal signs,
                    // in the difference port (sign = -first_sign) otherwise
                    let e_final = 2.0 * e_pulse * (t_steps - t2) as f64 / t_f;
                    match sample_first_click(e_final, t_steps, rng) {
                        None => OutcomeSymbol::Error1 { pos: (k1, k2) },
                        Some(t3) => {
                            let e_rem = e_final * (t_steps - t3) as f64 / t_f;
                            let equal = first_sign == later_sign;
                            let pulse_sign = if equal {
                                first_sign
                            } else {
                                first_sign.flipped()
                            };
                            let est = dolinar_sample(e_rem, pulse_sign, rng);
                            let (g_first, g_later) = if equal {
                                (est, est)
                            } else {
                                (est.flipped(), est)
                            };
                            let signs = if ta <= tb {
                                (g_first, g_later)
                            } else {
                                (g_later, g_first)
                            };
                            OutcomeSymbol::TwoPulse {
                                pos: (k1, k2),
                                signs,
                            }
                        }
                    }
                }
            }
        }
    }
}

fn solo_click<R: Rng>(
    cfg: &SimConfig,
    pos: usize,
    true_sign: Sign,
    e_pulse: f64,
    t1: usize,
    rng: &mut R,
) -> OutcomeSymbol {
    let sign = match cfg.dolinar_mode {
        DolinarMode::PaperModel => {
            if rng.random::<f64>() < 0.5 {
                Sign::Plus
            } else {
                Sign::Minus
            }
        }
        DolinarMode::Physical => {
            let e_rem = e_pulse * (cfg.vp_steps - t1) as f64 / cfg.vp_steps as f64;
            dolinar_sample(e_rem, true_sign, rng)
        }
    };
    OutcomeSymbol::OnePulse { pos, sign }
}

/// Outcome tallies per (message, outcome) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalTable {
    n_modes: usize,
    n_outcomes: usize,
    counts: Vec<u64>,
    trials_per_message: Vec<u64>,
}

impl EmpiricalTable {
    fn new(n_modes: usize) -> Self {
        let n_messages = codebook::total_message_count(n_modes);
        let n_outcomes = crate::rates::outcome_count(n_modes);
        Self {
            n_modes,
            n_outcomes,
            counts: vec![0; n_messages * n_outcomes],
            trials_per_message: vec![0; n_messages],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_messages(&self) -> usize {
        self.trials_per_message.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    pub fn count(&self, msg_idx: usize, outcome_idx: usize) -> u64 {
        self.counts[msg_idx * self.n_outcomes + outcome_idx]
    }

    pub fn trials_for(&self, msg_idx: usize) -> u64 {
        self.trials_per_message[msg_idx]
    }

    /// Empirical conditional frequency; 0 for unsampled messages.
    pub fn frequency(&self, msg_idx: usize, outcome_idx: usize) -> f64 {
        let n = self.trials_per_message[msg_idx];
        if n == 0 {
            0.0
        } else {
            self.count(msg_idx, outcome_idx) as f64 / n as f64
        }
    }

    fn merge(mut self, other: &EmpiricalTable) -> EmpiricalTable {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self
            .trials_per_message
            .iter_mut()
            .zip(&other.trials_per_message)
        {
            *a += b;
        }
        self
    }
}

/// Plug-in mutual-information estimate with a delta-method standard error.
#[derive(Debug, Clone, Copy)]
pub struct MiEstimate {
    pub bits: f64,
    pub std_err: f64,
}

/// Estimate I(X;Y) in bits from empirical conditional frequencies under
/// the given message prior. Zero cells contribute zero (the 0 log 0
/// convention); rows with zero prior or zero trials are skipped. The
/// standard error propagates per-row multinomial noise through the exact
/// gradient dI/df(y|x) = P(x) log2(f(y|x)/q(y)).
pub fn empirical_mi(prior: &[f64], table: &EmpiricalTable) -> Result<MiEstimate> {
    if prior.len() != table.n_messages() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "prior has {} entries, table has {} messages",
                prior.len(),
                table.n_messages()
            ),
        });
    }

    let n_outcomes = table.n_outcomes();
    let mut marginal = vec![0.0; n_outcomes];
    for (x, &px) in prior.iter().enumerate() {
        if px == 0.0 || table.trials_for(x) == 0 {
            continue;
        }
        for (y, slot) in marginal.iter_mut().enumerate() {
            *slot += px * table.frequency(x, y);
        }
    }

    let mut bits = 0.0;
    let mut variance = 0.0;
    for (x, &px) in prior.iter().enumerate() {
        let n_x = table.trials_for(x);
        if px == 0.0 || n_x == 0 {
            continue;
        }
        let mut row_mean = 0.0; // E[L] under f(.|x)
        let mut row_sq = 0.0; // E[L^2]
        for (y, &q) in marginal.iter().enumerate() {
            let f = table.frequency(x, y);
            if f > 0.0 {
                let l = (f / q).log2();
                bits += px * f * l;
                row_mean += f * l;
                row_sq += f * l * l;
            }
        }
        variance += px * px / n_x as f64 * (row_sq - row_mean * row_mean).max(0.0);
    }

    Ok(MiEstimate {
        bits,
        std_err: variance.sqrt(),
    })
}

/// Simulation result: tallies plus the empirical mutual information under
/// the configured prior.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub table: EmpiricalTable,
    pub mi: MiEstimate,
}

/// Run the configured number of trials. Deterministic for a given config:
/// every trial's randomness comes from its own (seed, message, trial)
/// stream and tallies merge associatively, so thread scheduling cannot
/// change the result.
pub fn run_trials(cfg: &SimConfig) -> Result<SimOutput> {
    cfg.validate()?;
    let codebook = Codebook::new(cfg.n_modes, cfg.e_per_mode)?;
    let priors = codebook.priors(cfg.p_mix)?;
    let messages = codebook.messages();

    let table = match cfg.allocation {
        TrialAllocation::PerMessage => {
            let n_messages = messages.len() as u64;
            let base = cfg.trials / n_messages;
            let remainder = (cfg.trials % n_messages) as usize;
            messages
                .par_iter()
                .enumerate()
                .map(|(mi, msg)| {
                    let mut local = EmpiricalTable::new(cfg.n_modes);
                    let n_trials = base + u64::from(mi < remainder);
                    for trial in 0..n_trials {
                        let mut rng = trial_rng(cfg.seed, mi as u64, trial);
                        let outcome = decode_trial(msg, cfg, &mut rng);
                        let y = outcome.canonical_index(cfg.n_modes);
                        local.counts[mi * local.n_outcomes + y] += 1;
                        local.trials_per_message[mi] += 1;
                    }
                    local
                })
                .reduce(|| EmpiricalTable::new(cfg.n_modes), |a, b| a.merge(&b))
        }
        TrialAllocation::Prior => {
            // cumulative prior for message selection
            let mut cdf = Vec::with_capacity(priors.len());
            let mut acc = 0.0;
            for &p in &priors {
                acc += p;
                cdf.push(acc);
            }
            (0..cfg.trials)
                .into_par_iter()
                .fold(
                    || EmpiricalTable::new(cfg.n_modes),
                    |mut local, trial| {
                        let mut select = trial_rng(cfg.seed, SELECTION_STREAM, trial);
                        let u: f64 = select.random();
                        let mi = cdf.partition_point(|&c| c <= u).min(priors.len() - 1);
                        let mut rng = trial_rng(cfg.seed, mi as u64, trial);
                        let outcome = decode_trial(&messages[mi], cfg, &mut rng);
                        let y = outcome.canonical_index(cfg.n_modes);
                        local.counts[mi * local.n_outcomes + y] += 1;
                        local.trials_per_message[mi] += 1;
                        local
                    },
                )
                .reduce(|| EmpiricalTable::new(cfg.n_modes), |a, b| a.merge(&b))
        }
    };

    let mi = empirical_mi(&priors, &table)?;
    Ok(SimOutput { table, mi })
}

/// Deviation of one empirical table entry from its analytic value, in
/// binomial standard deviations.
#[derive(Debug, Clone, Copy)]
pub struct EntryDeviation {
    pub msg_idx: usize,
    pub outcome_idx: usize,
    pub analytic: f64,
    pub empirical: f64,
    pub sigma: f64,
}

/// Compare empirical frequencies against an analytic conditional table.
/// Entries with analytic probability 0 are structural zeros: any observed
/// count reports an infinite deviation.
pub fn compare_to_table(
    emp: &EmpiricalTable,
    analytic: &ConditionalTable,
) -> Result<Vec<EntryDeviation>> {
    if emp.n_messages() != analytic.n_messages() || emp.n_outcomes() != analytic.n_outcomes() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "empirical {}x{} vs analytic {}x{}",
                emp.n_messages(),
                emp.n_outcomes(),
                analytic.n_messages(),
                analytic.n_outcomes()
            ),
        });
    }
    let mut out = Vec::with_capacity(emp.n_messages() * emp.n_outcomes());
    for x in 0..emp.n_messages() {
        let n = emp.trials_for(x);
        if n == 0 {
            continue;
        }
        for y in 0..emp.n_outcomes() {
            let p0 = analytic.prob(x, y);
            let phat = emp.frequency(x, y);
            let sigma = if p0 == 0.0 || p0 == 1.0 {
                if phat == p0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                let sd = (p0 * (1.0 - p0) / n as f64).sqrt();
                (phat - p0).abs() / sd
            };
            out.push(EntryDeviation {
                msg_idx: x,
                outcome_idx: y,
                analytic: p0,
                empirical: phat,
                sigma,
            });
        }
    }
    Ok(out)
}

/// Largest per-entry deviation, in binomial sigmas.
pub fn max_sigma(deviations: &[EntryDeviation]) -> f64 {
    deviations.iter().map(|d| d.sigma).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::build_conditional_table;

    fn test_cfg(e: f64, n: usize, trials: u64) -> SimConfig {
        SimConfig {
            e_per_mode: e,
            n_modes: n,
            p_mix: 0.5,
            vp_steps: 10_000,
            trials,
            seed: 42,
            dolinar_mode: DolinarMode::PaperModel,
            allocation: TrialAllocation::PerMessage,
        }
    }

    #[test]
    fn first_click_zero_energy_never_fires() {
        let mut rng = trial_rng(1, 0, 0);
        for _ in 0..1000 {
            assert_eq!(sample_first_click(0.0, 100, &mut rng), None);
        }
    }

    #[test]
    fn first_click_probability_and_cdf() {
        let e = 0.8;
        let t_steps = 1000;
        let samples = 1_000_000u64;
        let mut rng = trial_rng(7, 0, 0);
        let mut clicks = 0u64;
        let mut by_quarter = [0u64; 4];
        for _ in 0..samples {
            if let Some(t) = sample_first_click(e, t_steps, &mut rng) {
                clicks += 1;
                by_quarter[(4 * (t - 1)) / t_steps] += 1;
            }
        }
        let p_click = 1.0 - (-e).exp();
        let sd = (p_click * (1.0 - p_click) / samples as f64).sqrt();
        assert!((clicks as f64 / samples as f64 - p_click).abs() < 4.0 * sd);

        // empirical CDF at t = T/4, T/2, 3T/4 vs 1 - exp(-e t / T)
        let mut cum = 0u64;
        for (i, &c) in by_quarter.iter().take(3).enumerate() {
            cum += c;
            let want = 1.0 - (-e * (i as f64 + 1.0) / 4.0).exp();
            let sd = (want * (1.0 - want) / samples as f64).sqrt();
            assert!(
                (cum as f64 / samples as f64 - want).abs() < 4.0 * sd,
                "CDF mismatch at quarter {i}"
            );
        }
    }

    #[test]
    fn dolinar_sample_statistics() {
        let mut rng = trial_rng(3, 1, 0);
        // zero energy: fair coin
        let n = 1_000_000;
        let mut hits = 0;
        for _ in 0..n {
            if dolinar_sample(0.0, Sign::Plus, &mut rng) == Sign::Plus {
                hits += 1;
            }
        }
        let sd = (0.25f64 / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - 0.5).abs() < 4.0 * sd);

        // E = 0.5: accuracy within 4 sigma of 1 - P_Hel
        let want = 1.0 - helstrom_error(0.5).unwrap();
        let mut hits = 0;
        for _ in 0..n {
            if dolinar_sample(0.5, Sign::Minus, &mut rng) == Sign::Minus {
                hits += 1;
            }
        }
        let sd = (want * (1.0 - want) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - want).abs() < 4.0 * sd);

        // high energy: essentially always right
        for _ in 0..1000 {
            assert_eq!(dolinar_sample(10.0, Sign::Plus, &mut rng), Sign::Plus);
        }
    }

    #[test]
    fn two_pulse_at_zero_energy_always_error2() {
        let cfg = test_cfg(0.0, 4, 1);
        let msg = Message::TwoPulse {
            pos: (0, 2),
            signs: (Sign::Plus, Sign::Minus),
        };
        let mut rng = trial_rng(cfg.seed, 0, 0);
        for _ in 0..500 {
            assert_eq!(decode_trial(&msg, &cfg, &mut rng), OutcomeSymbol::Error2);
        }
    }

    #[test]
    fn one_pulse_high_energy_decodes_correctly() {
        let cfg = test_cfg(25.0, 4, 1); // pooled pulse energy 100
        let msg = Message::OnePulse {
            pos: 2,
            sign: Sign::Minus,
        };
        let mut rng = trial_rng(9, 0, 0);
        let trials = 20_000;
        let mut correct = 0;
        for _ in 0..trials {
            let out = decode_trial(&msg, &cfg, &mut rng);
            if out
                == (OutcomeSymbol::OnePulse {
                    pos: 2,
                    sign: Sign::Minus,
                })
            {
                correct += 1;
            }
        }
        assert!(correct as f64 / trials as f64 > 0.99);
    }

    #[test]
    fn paper_model_solo_click_sign_is_uniform() {
        let cfg = test_cfg(0.05, 4, 1);
        let msg = Message::TwoPulse {
            pos: (1, 3),
            signs: (Sign::Plus, Sign::Plus),
        };
        let mut rng = trial_rng(11, 0, 0);
        let mut plus = 0u64;
        let mut total = 0u64;
        for _ in 0..100_000 {
            if let OutcomeSymbol::OnePulse { sign, .. } = decode_trial(&msg, &cfg, &mut rng) {
                total += 1;
                if sign == Sign::Plus {
                    plus += 1;
                }
            }
        }
        assert!(total > 1000, "need solo-click events, got {total}");
        let sd = 0.5 * (total as f64).sqrt();
        assert!((plus as f64 - total as f64 / 2.0).abs() < 4.0 * sd);
    }

    #[test]
    fn run_trials_is_deterministic() {
        let cfg = test_cfg(0.1, 2, 4000);
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        assert_eq!(a.table, b.table);
        assert_eq!(a.mi.bits, b.mi.bits);
    }

    #[test]
    fn prior_allocation_is_deterministic_and_weighted() {
        let mut cfg = test_cfg(0.1, 2, 20_000);
        cfg.allocation = TrialAllocation::Prior;
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        assert_eq!(a.table, b.table);
        // one-pulse messages carry prior p/(2N) = 0.125 each
        let total: u64 = (0..a.table.n_messages())
            .map(|x| a.table.trials_for(x))
            .sum();
        assert_eq!(total, cfg.trials);
        let f = a.table.trials_for(0) as f64 / cfg.trials as f64;
        let sd = (0.125f64 * 0.875 / cfg.trials as f64).sqrt();
        assert!((f - 0.125).abs() < 5.0 * sd);
    }

    #[test]
    fn empirical_frequencies_match_analytic_table() {
        let cfg = test_cfg(0.1, 4, 320_000); // 10k trials per message
        let out = run_trials(&cfg).unwrap();
        let analytic = build_conditional_table(cfg.e_per_mode, cfg.n_modes).unwrap();
        let devs = compare_to_table(&out.table, &analytic).unwrap();
        let worst = max_sigma(&devs);
        assert!(worst < 5.0, "worst deviation {worst} sigma");
    }

    #[test]
    fn empirical_mi_tracks_closed_form() {
        let cfg = test_cfg(0.1, 4, 320_000);
        let out = run_trials(&cfg).unwrap();
        let want = cfg.n_modes as f64
            * crate::rates::r_pppm_closed(cfg.e_per_mode, cfg.n_modes, cfg.p_mix).unwrap();
        let gap = (out.mi.bits - want).abs();
        // plug-in MI carries an O(1/trials-per-row) upward bias on top of
        // the sampling noise
        assert!(
            gap < 4.0 * out.mi.std_err + 1e-3,
            "MI {} vs closed form {want}, sigma {}",
            out.mi.bits,
            out.mi.std_err
        );
    }

    #[test]
    fn physical_mode_mi_not_below_paper_model() {
        let mut cfg = test_cfg(0.1, 4, 320_000);
        let paper = run_trials(&cfg).unwrap();
        cfg.dolinar_mode = DolinarMode::Physical;
        let physical = run_trials(&cfg).unwrap();
        let sigma = (paper.mi.std_err.powi(2) + physical.mi.std_err.powi(2)).sqrt();
        assert!(physical.mi.bits >= paper.mi.bits - 3.0 * sigma);
    }

    #[test]
    fn row_sums_equal_trials() {
        let cfg = test_cfg(0.2, 2, 999); // deliberately not divisible by 8
        let out = run_trials(&cfg).unwrap();
        let mut total = 0u64;
        for x in 0..out.table.n_messages() {
            let row_sum: u64 = (0..out.table.n_outcomes())
                .map(|y| out.table.count(x, y))
                .sum();
            assert_eq!(row_sum, out.table.trials_for(x));
            total += row_sum;
        }
        assert_eq!(total, 999);
    }

    #[test]
    fn structural_zeros_stay_zero() {
        let cfg = test_cfg(0.3, 4, 64_000);
        let out = run_trials(&cfg).unwrap();
        let analytic = build_conditional_table(cfg.e_per_mode, cfg.n_modes).unwrap();
        for x in 0..out.table.n_messages() {
            for y in 0..out.table.n_outcomes() {
                if analytic.prob(x, y) == 0.0 {
                    assert_eq!(out.table.count(x, y), 0, "x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = test_cfg(0.1, 4, 100);
        cfg.n_modes = 3;
        assert!(cfg.validate().is_err());
        let mut cfg = test_cfg(0.1, 4, 100);
        cfg.p_mix = 1.5;
        assert!(cfg.validate().is_err());
        let mut cfg = test_cfg(0.1, 4, 100);
        cfg.vp_steps = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = test_cfg(0.1, 4, 100);
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empirical_mi_of_perfect_channel() {
        // hand-built tallies: message x always lands on outcome x
        let n = 2;
        let mut table = EmpiricalTable::new(n);
        let n_messages = table.n_messages();
        for x in 0..n_messages {
            table.counts[x * table.n_outcomes + x] = 1000;
            table.trials_per_message[x] = 1000;
        }
        let prior = vec![1.0 / n_messages as f64; n_messages];
        let est = empirical_mi(&prior, &table).unwrap();
        assert!((est.bits - 3.0).abs() < 1e-12);
        assert!(est.std_err < 1e-12);
    }
}
