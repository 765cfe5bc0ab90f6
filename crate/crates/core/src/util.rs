//! Small numeric helpers shared across modules.

/// Kahan-compensated sum. The rate and normalization checks run at
/// tolerances (1e-12 .. 1e-15) where naive accumulation over a few
/// hundred terms already loses digits.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensates_small_terms() {
        let n = 10_000_000;
        let v = 1e-8;
        let s = kahan_sum((0..n).map(|_| v));
        assert!((s - n as f64 * v).abs() < 1e-12);
    }
}
