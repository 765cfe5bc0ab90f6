//! Hadamard matrices, message enumeration and codeword construction.
//!
//! Messages carry the total energy N*E either in a single pulsed mode or
//! split across two pulsed modes; the transmit-basis codewords are the
//! butterfly pre-images of those pulse states. Mode indices are 0-based
//! throughout.

use crate::error::{Error, Result};
use crate::optics::{hadamard_butterfly, ModeAmplitudes};

/// Default size cap for dense Hadamard matrices.
pub const HADAMARD_SIZE_CAP: usize = 1 << 16;

/// Dense Sylvester-Hadamard matrix with +-1 entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    size: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.size + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.size..(row + 1) * self.size]
    }
}

/// Sylvester construction H_{2N} = [[H_N, H_N], [H_N, -H_N]] starting from
/// H_1 = [1]; `n` is the exponent, so the result has size N = 2^n.
pub fn hadamard_matrix(n: u32) -> Result<HadamardMatrix> {
    hadamard_matrix_capped(n, HADAMARD_SIZE_CAP)
}

pub fn hadamard_matrix_capped(n: u32, cap: usize) -> Result<HadamardMatrix> {
    let size = 1usize
        .checked_shl(n)
        .filter(|&s| s <= cap)
        .ok_or(Error::MatrixTooLarge { n: n as usize, cap })?;

    let mut entries = vec![0i8; size * size];
    entries[0] = 1;
    let mut half = 1;
    while half < size {
        for r in 0..half {
            for c in 0..half {
                let v = entries[r * size + c];
                entries[r * size + c + half] = v;
                entries[(r + half) * size + c] = v;
                entries[(r + half) * size + c + half] = -v;
            }
        }
        half *= 2;
    }
    Ok(HadamardMatrix { size, entries })
}

/// Pulse sign (BPSK phase).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

const SIGN_PAIRS: [(Sign, Sign); 4] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Plus),
    (Sign::Minus, Sign::Minus),
];

/// A codebook message: total energy concentrated in one mode, or split
/// evenly across two modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Message {
    OnePulse {
        pos: usize,
        sign: Sign,
    },
    TwoPulse {
        pos: (usize, usize),
        signs: (Sign, Sign),
    },
}

impl Message {
    /// Number of pulsed modes (1 or 2).
    pub fn pulse_count(&self) -> usize {
        match self {
            Message::OnePulse { .. } => 1,
            Message::TwoPulse { .. } => 2,
        }
    }

    pub fn validate(&self, n_modes: usize) -> Result<()> {
        match *self {
            Message::OnePulse { pos, .. } if pos < n_modes => Ok(()),
            Message::TwoPulse { pos: (k1, k2), .. } if k1 < k2 && k2 < n_modes => Ok(()),
            _ => Err(Error::InvalidMessage {
                n_modes,
                context: format!("{self:?}"),
            }),
        }
    }

    /// Short comma-free text form for CSV reports: pulse positions with
    /// their signs, 0-based mode indices (e.g. "2-" or "0+3-").
    pub fn label(&self) -> String {
        match *self {
            Message::OnePulse { pos, sign } => format!("{}{}", pos, sign.symbol()),
            Message::TwoPulse {
                pos: (k1, k2),
                signs: (s1, s2),
            } => {
                format!("{k1}{}{k2}{}", s1.symbol(), s2.symbol())
            }
        }
    }

    /// Index of this message in the canonical enumeration order.
    pub fn canonical_index(&self, n_modes: usize) -> usize {
        match *self {
            Message::OnePulse { pos, sign } => 2 * pos + (sign == Sign::Minus) as usize,
            Message::TwoPulse {
                pos: (k1, k2),
                signs: (s1, s2),
            } => {
                let pair_rank = k1 * n_modes - k1 * (k1 + 1) / 2 + (k2 - k1 - 1);
                let sign_rank = 2 * (s1 == Sign::Minus) as usize + (s2 == Sign::Minus) as usize;
                2 * n_modes + 4 * pair_rank + sign_rank
            }
        }
    }
}

fn check_modes(n_modes: usize) -> Result<()> {
    if n_modes < 2 || !n_modes.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { n: n_modes });
    }
    Ok(())
}

pub fn one_pulse_count(n_modes: usize) -> usize {
    2 * n_modes
}

pub fn two_pulse_count(n_modes: usize) -> usize {
    // 4 * C(N, 2)
    2 * n_modes * (n_modes - 1)
}

/// Total message count 4*C(N,2) + 2N.
pub fn total_message_count(n_modes: usize) -> usize {
    one_pulse_count(n_modes) + two_pulse_count(n_modes)
}

/// All messages in canonical order: the 2N one-pulse messages (by position,
/// then sign), then the 4*C(N,2) two-pulse messages (by position pair,
/// then sign pair ++, +-, -+, --).
pub fn enumerate_messages(n_modes: usize) -> Result<Vec<Message>> {
    check_modes(n_modes)?;
    let mut out = Vec::with_capacity(total_message_count(n_modes));
    for pos in 0..n_modes {
        for sign in [Sign::Plus, Sign::Minus] {
            out.push(Message::OnePulse { pos, sign });
        }
    }
    for k1 in 0..n_modes {
        for k2 in k1 + 1..n_modes {
            for signs in SIGN_PAIRS {
                out.push(Message::TwoPulse {
                    pos: (k1, k2),
                    signs,
                });
            }
        }
    }
    Ok(out)
}

/// Pulse-basis state of a message at per-mode energy `e`: the total energy
/// N*e sits in the pulsed mode(s), split evenly for two-pulse messages.
pub fn message_to_pulse_state(msg: &Message, e: f64, n_modes: usize) -> Result<ModeAmplitudes> {
    check_modes(n_modes)?;
    msg.validate(n_modes)?;
    if e < 0.0 {
        return Err(Error::ParamOutOfRange {
            name: "e",
            value: e,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let mut amps = vec![0.0; n_modes];
    match *msg {
        Message::OnePulse { pos, sign } => {
            amps[pos] = sign.factor() * (n_modes as f64 * e).sqrt();
        }
        Message::TwoPulse {
            pos: (k1, k2),
            signs: (s1, s2),
        } => {
            let a = (n_modes as f64 * e / 2.0).sqrt();
            amps[k1] = s1.factor() * a;
            amps[k2] = s2.factor() * a;
        }
    }
    Ok(ModeAmplitudes::from_real(&amps))
}

/// Transmit-basis codeword: the butterfly pre-image of the pulse state.
/// Since the normalized transform is an involution, the pre-image is the
/// forward transform of the pulse state. One-pulse messages give BPSK
/// vectors (every entry +-sqrt(e)); two-pulse messages give entries in
/// {0, +-sqrt(2e)}.
pub fn message_to_transmit_state(msg: &Message, e: f64, n_modes: usize) -> Result<ModeAmplitudes> {
    let pulse = message_to_pulse_state(msg, e, n_modes)?;
    hadamard_butterfly(&pulse)
}

/// Prior weight of a message under the class-mixing probability `p`:
/// one-pulse messages share mass p uniformly, two-pulse messages share 1-p.
pub fn message_prior(msg: &Message, p: f64, n_modes: usize) -> Result<f64> {
    check_modes(n_modes)?;
    msg.validate(n_modes)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParamOutOfRange {
            name: "p",
            value: p,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(match msg {
        Message::OnePulse { .. } => p / one_pulse_count(n_modes) as f64,
        Message::TwoPulse { .. } => (1.0 - p) / two_pulse_count(n_modes) as f64,
    })
}

/// A full message set at fixed (N, E).
#[derive(Debug, Clone)]
pub struct Codebook {
    n_modes: usize,
    per_mode_energy: f64,
    messages: Vec<Message>,
}

impl Codebook {
    pub fn new(n_modes: usize, per_mode_energy: f64) -> Result<Self> {
        if per_mode_energy < 0.0 {
            return Err(Error::ParamOutOfRange {
                name: "per_mode_energy",
                value: per_mode_energy,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(Self {
            n_modes,
            per_mode_energy,
            messages: enumerate_messages(n_modes)?,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn per_mode_energy(&self) -> f64 {
        self.per_mode_energy
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn pulse_state(&self, msg: &Message) -> Result<ModeAmplitudes> {
        message_to_pulse_state(msg, self.per_mode_energy, self.n_modes)
    }

    pub fn transmit_state(&self, msg: &Message) -> Result<ModeAmplitudes> {
        message_to_transmit_state(msg, self.per_mode_energy, self.n_modes)
    }

    /// Prior vector over the canonical message order.
    pub fn priors(&self, p: f64) -> Result<Vec<f64>> {
        self.messages
            .iter()
            .map(|m| message_prior(m, p, self.n_modes))
            .collect()
    }
}
