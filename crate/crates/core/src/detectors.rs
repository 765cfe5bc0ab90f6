//! Analytic detector statistics.
//!
//! The vacuum-or-pulse (VP) detector taps a 1/T amplitude fraction per
//! round and hands the remainder to a Dolinar stage on the first click;
//! its large-T statistics are integrals over the click time. The two-click
//! quantities describe the second receiver stage on two-pulse codewords.
//! Continuum forms are used everywhere, with the literal finite-T sums
//! kept as oracles.

use crate::error::{Error, Result};
use crate::quad;
use std::cell::RefCell;

/// Absolute quadrature tolerance for the detector integrals. Tight enough
/// that conditional-table rows still sum to 1 within 1e-12 even though
/// three independent integrals enter each two-pulse row.
pub const QUAD_TOL: f64 = 2e-14;

/// Minimum-error probability for discriminating coherent states of
/// opposite phase and energy `e`: (1 - sqrt(1 - exp(-4 e))) / 2.
pub fn helstrom_error(e: f64) -> Result<f64> {
    check_energy(e)?;
    Ok(0.5 * (1.0 - (1.0 - (-4.0 * e).exp()).max(0.0).sqrt()))
}

fn check_energy(e: f64) -> Result<()> {
    if e.is_nan() || e < 0.0 {
        return Err(Error::ParamOutOfRange {
            name: "energy",
            value: e,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok(())
}

/// Outcome probabilities of a VP detector on a pulse of energy `e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VpStats {
    /// Guess the transmitted phase.
    pub p_same: f64,
    /// Guess the opposite phase.
    pub p_diff: f64,
    /// No click in any round: exp(-e).
    pub p_vac: f64,
    /// Pulse energy the statistics were evaluated at.
    pub energy: f64,
}

/// Large-T VP statistics:
///
///   p_same = int_{exp(-e)}^{1} (1 + sqrt(1 - exp(-4e)/t^4)) / 2 dt
///   p_diff = int_{exp(-e)}^{1} (1 - sqrt(1 - exp(-4e)/t^4)) / 2 dt
///
/// The radicand vanishes at the lower endpoint; adaptive subdivision
/// resolves the square-root there.
pub fn vp_probabilities(e: f64) -> Result<VpStats> {
    check_energy(e)?;
    if e == 0.0 {
        return Ok(VpStats {
            p_same: 0.0,
            p_diff: 0.0,
            p_vac: 1.0,
            energy: 0.0,
        });
    }
    let a = (-e).exp();
    let c = (-4.0 * e).exp();
    // clamp: rounding can push c/t^4 a hair above 1 right at t = exp(-e)
    let root = move |t: f64| (1.0 - c / (t * t * t * t)).max(0.0).sqrt();
    // For large e the square-root transition is confined to a boundary
    // layer of width ~ exp(-e) that a coarse first pass cannot see (the
    // integrand looks constant at every sample); a geometric ladder of
    // breakpoints through the layer forces its resolution.
    let mut pts = vec![a];
    let mut rung = a;
    for _ in 0..10 {
        rung *= 4.0;
        if rung >= 1.0 {
            break;
        }
        pts.push(rung);
    }
    pts.push(1.0);
    let p_same = quad::integrate_with_breakpoints(|t| 0.5 * (1.0 + root(t)), &pts, QUAD_TOL)?;
    let p_diff = quad::integrate_with_breakpoints(|t| 0.5 * (1.0 - root(t)), &pts, QUAD_TOL)?;
    Ok(VpStats {
        p_same,
        p_diff,
        p_vac: a,
        energy: e,
    })
}

/// Literal T-round VP statistics: click in round t with probability
/// (1 - exp(-e/T)) exp(-(t-1) e/T), then a Dolinar stage on the remaining
/// energy e (T-t)/T.
pub fn vp_probabilities_finite_t(e: f64, t_steps: usize) -> VpStats {
    assert!(t_steps >= 1, "need at least one tap round");
    assert!(e >= 0.0, "energy must be non-negative");
    let t_f = t_steps as f64;
    let q = 1.0 - (-e / t_f).exp();
    let mut p_same = 0.0;
    let mut p_diff = 0.0;
    for t in 1..=t_steps {
        let weight = q * (-((t - 1) as f64) * e / t_f).exp();
        let remaining = e * (t_steps - t) as f64 / t_f;
        let hel = helstrom_error(remaining).expect("remaining energy >= 0");
        p_same += weight * (1.0 - hel);
        p_diff += weight * hel;
    }
    VpStats {
        p_same,
        p_diff,
        p_vac: (-e).exp(),
        energy: e,
    }
}

/// Second-stage outcome probabilities on a two-pulse codeword with total
/// energy `energy_total` = N*E (each pulsed mode carries N*E/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoClickStats {
    /// Both modes click and the sign pair is guessed correctly.
    pub p_s: f64,
    /// Both modes click and the guess is the antipodal sign pair.
    pub p_e: f64,
    /// Both modes click but the final-stage VP stays silent.
    pub p_nc: f64,
    pub energy_total: f64,
}

/// Breakpoints for the two-click outer integrals. The geometric ladder
/// into u = 1 resolves the (1-u)^(3/2) endpoint of the VP factor (its
/// error hides under the smooth part in a plain Gauss-Kronrod estimate);
/// the 1/m points resolve the exp(-m u) weight when m is large, whose
/// mass a first coarse pass can miss entirely.
fn outer_breakpoints(m: f64) -> Vec<f64> {
    let mut pts = vec![0.0, 1.0];
    let mut width = 0.25;
    for _ in 0..16 {
        pts.push(1.0 - width);
        width *= 0.25;
    }
    if m > 8.0 {
        for s in [0.5 / m, 2.0 / m, 8.0 / m, 32.0 / m] {
            if s < 0.5 {
                pts.push(s);
                pts.push(1.0 - s);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Large-T limits of the two-click sums, computed as one-dimensional
/// integrals over the later click time u = t2/T after summing out the
/// earlier click analytically:
///
///   P_S  = int_0^1 2m exp(-m u) (1 - exp(-m u)) p_same(2m (1-u)) du
///   P_E  = int_0^1 2m exp(-m u) (1 - exp(-m u)) p_diff(2m (1-u)) du
///   P_nc = int_0^1 2m exp(-m u) (1 - exp(-m u)) exp(-2m (1-u)) du
///
/// with m = N*E/2. Validated against `two_click_probabilities_finite_t`.
pub fn two_click_probabilities(e: f64, n_modes: usize) -> Result<TwoClickStats> {
    check_energy(e)?;
    if n_modes < 2 {
        return Err(Error::ParamOutOfRange {
            name: "n_modes",
            value: n_modes as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    let energy_total = n_modes as f64 * e;
    if e == 0.0 {
        return Ok(TwoClickStats {
            p_s: 0.0,
            p_e: 0.0,
            p_nc: 0.0,
            energy_total,
        });
    }
    let m = energy_total / 2.0;
    let pts = outer_breakpoints(m);
    let weight = move |u: f64| 2.0 * m * (-m * u).exp() * (1.0 - (-m * u).exp());

    // Inner quadrature failures cannot cross the Fn boundary directly;
    // stash the first one and re-raise after integration.
    let inner_err: RefCell<Option<Error>> = RefCell::new(None);
    let vp_at = |u: f64, same: bool| -> f64 {
        match vp_probabilities(2.0 * m * (1.0 - u)) {
            Ok(v) => {
                if same {
                    v.p_same
                } else {
                    v.p_diff
                }
            }
            Err(err) => {
                inner_err.borrow_mut().get_or_insert(err);
                0.0
            }
        }
    };

    let p_s = quad::integrate_with_breakpoints(|u| weight(u) * vp_at(u, true), &pts, QUAD_TOL)?;
    let p_e = quad::integrate_with_breakpoints(|u| weight(u) * vp_at(u, false), &pts, QUAD_TOL)?;
    let p_nc = quad::integrate_with_breakpoints(
        |u| weight(u) * (-2.0 * m * (1.0 - u)).exp(),
        &pts,
        QUAD_TOL,
    )?;
    if let Some(err) = inner_err.into_inner() {
        return Err(err);
    }
    Ok(TwoClickStats {
        p_s,
        p_e,
        p_nc,
        energy_total,
    })
}

/// Literal finite-T double sums over the two click times t1 < t2:
///
///   sum_{t1=1}^{T} sum_{t2=t1+1}^{T} 2 (1 - exp(-m/T))^2
///       exp(-(t1 + t2 - 2) m / T) * F(N E (T - t2) / T)
///
/// with m = N*E/2 and F the final-stage factor (VP success, VP error, or
/// the no-click weight exp(-x)). This is the normative oracle for
/// `two_click_probabilities`.
pub fn two_click_probabilities_finite_t(e: f64, n_modes: usize, t_steps: usize) -> TwoClickStats {
    assert!(t_steps >= 2, "need at least two tap rounds");
    assert!(e >= 0.0, "energy must be non-negative");
    assert!(n_modes >= 2, "need at least two modes");
    let energy_total = n_modes as f64 * e;
    if e == 0.0 {
        return TwoClickStats {
            p_s: 0.0,
            p_e: 0.0,
            p_nc: 0.0,
            energy_total,
        };
    }
    let t_f = t_steps as f64;
    let m = energy_total / 2.0;
    let q = 1.0 - (-m / t_f).exp();

    // exp(-(t-1) m / T) per click index, and final-stage factors per t2
    let decay: Vec<f64> = (0..t_steps)
        .map(|k| (-(k as f64) * m / t_f).exp())
        .collect();
    let final_vp: Vec<VpStats> = (0..=t_steps)
        .map(|t2| {
            let remaining = energy_total * (t_steps - t2) as f64 / t_f;
            if remaining == 0.0 {
                VpStats {
                    p_same: 0.0,
                    p_diff: 0.0,
                    p_vac: 1.0,
                    energy: 0.0,
                }
            } else {
                vp_probabilities(remaining).expect("VP quadrature converges on [0, NE]")
            }
        })
        .collect();

    let (mut p_s, mut p_e, mut p_nc) = (0.0, 0.0, 0.0);
    for t2 in 2..=t_steps {
        let mut first_click_sum = 0.0;
        for t1 in 1..t2 {
            first_click_sum += decay[t1 - 1];
        }
        let w = 2.0 * q * q * decay[t2 - 1] * first_click_sum;
        let vp = &final_vp[t2];
        p_s += w * vp.p_same;
        p_e += w * vp.p_diff;
        p_nc += w * vp.p_vac;
    }
    TwoClickStats {
        p_s,
        p_e,
        p_nc,
        energy_total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helstrom_limits() {
        assert_eq!(helstrom_error(0.0).unwrap(), 0.5);
        assert!(helstrom_error(50.0).unwrap() < 1e-15);
        assert!(helstrom_error(-0.1).is_err());
        assert!(helstrom_error(f64::NAN).is_err());
    }

    #[test]
    fn helstrom_spot_value() {
        // independently evaluated closed form at E = 0.1
        let v = helstrom_error(0.1).unwrap();
        assert!((v - 0.21291118361891875).abs() < 1e-15);
    }

    #[test]
    fn helstrom_monotone_non_increasing() {
        let mut prev = 0.5;
        for k in 0..60 {
            let e = 1e-3 * 1.2f64.powi(k);
            let v = helstrom_error(e).unwrap();
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn vp_zero_energy_is_exact() {
        let v = vp_probabilities(0.0).unwrap();
        assert_eq!((v.p_same, v.p_diff, v.p_vac), (0.0, 0.0, 1.0));
    }

    #[test]
    fn vp_spot_value() {
        // high-precision evaluation of the click integral at E = 1
        let v = vp_probabilities(1.0).unwrap();
        assert!((v.p_same - 0.597204015460445).abs() < 1e-11, "{}", v.p_same);
        assert!((v.p_same + v.p_diff - 0.6321205588285577).abs() < 1e-11);
    }

    #[test]
    fn vp_normalization_across_energies() {
        for k in 0..30 {
            let e = 1e-3 * (10f64).powf(4.0 * k as f64 / 29.0);
            let v = vp_probabilities(e).unwrap();
            let sum = v.p_same + v.p_diff + v.p_vac;
            assert!((sum - 1.0).abs() < 1e-9, "E={e} sum={sum}");
            assert!(v.p_same >= v.p_diff && v.p_diff >= 0.0);
        }
    }

    #[test]
    fn vp_p_same_monotone_in_energy() {
        let mut prev = 0.0;
        for k in 0..40 {
            let e = 1e-3 * 1.35f64.powi(k);
            let v = vp_probabilities(e).unwrap();
            assert!(v.p_same >= prev - 1e-12);
            prev = v.p_same;
        }
    }

    #[test]
    fn vp_finite_t_single_round() {
        // T = 1: click then Dolinar on zero remaining energy = fair coin
        let e = 0.7;
        let v = vp_probabilities_finite_t(e, 1);
        let half_click = (1.0 - (-e).exp()) / 2.0;
        assert!((v.p_same - half_click).abs() < 1e-15);
        assert!((v.p_diff - half_click).abs() < 1e-15);
        let z = vp_probabilities_finite_t(0.0, 1);
        assert_eq!((z.p_same, z.p_diff, z.p_vac), (0.0, 0.0, 1.0));
    }

    #[test]
    fn vp_finite_t_converges_to_continuum() {
        let e = 1.0;
        let exact = vp_probabilities(e).unwrap();
        let mut gaps = Vec::new();
        for t in [100usize, 1000, 10000] {
            let v = vp_probabilities_finite_t(e, t);
            gaps.push((v.p_same - exact.p_same).abs());
        }
        // first-order convergence: a decade in T buys a decade in accuracy
        for w in gaps.windows(2) {
            let order = w[0] / w[1];
            assert!((5.0..20.0).contains(&order), "convergence ratio {order}");
        }
        assert!(gaps[2] < 1e-4);
        // spot check against an independent T = 1e5 evaluation
        let v = vp_probabilities_finite_t(e, 100_000);
        assert!((v.p_same - 0.5972029417579787).abs() < 1e-10);
    }

    #[test]
    fn vp_boundary_layer_mass_survives_large_energy() {
        // at E = 10 the whole p_diff mass sits in a width ~ exp(-10) layer
        // above the lower limit; a coarse pass sees a constant integrand
        // and silently drops it without the seeded layer breakpoints
        let v = vp_probabilities(10.0).unwrap();
        let oracle = vp_probabilities_finite_t(10.0, 200_000);
        assert!(v.p_diff > 1e-6, "layer mass lost: {}", v.p_diff);
        assert!((v.p_diff - oracle.p_diff).abs() < 1e-8);
        assert!((v.p_same + v.p_diff + v.p_vac - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_click_zero_energy() {
        let s = two_click_probabilities(0.0, 8).unwrap();
        assert_eq!((s.p_s, s.p_e, s.p_nc), (0.0, 0.0, 0.0));
    }

    #[test]
    fn two_click_normalization_identity() {
        // p_s + p_e + p_nc = (1 - exp(-NE/2))^2
        for &(e, n) in &[(1.0, 2usize), (0.1, 8), (0.25, 4), (0.05, 16)] {
            let s = two_click_probabilities(e, n).unwrap();
            let m = n as f64 * e / 2.0;
            let want = (1.0 - (-m).exp()).powi(2);
            let sum = s.p_s + s.p_e + s.p_nc;
            assert!((sum - want).abs() < 1e-11, "E={e} N={n}: {sum} vs {want}");
            assert!(s.p_s >= s.p_e);
        }
    }

    #[test]
    fn two_click_nc_matches_closed_form() {
        // the u-integral for P_nc evaluates to 2 exp(-2m) (exp(m) - 1 - m)
        for &(e, n) in &[(0.1, 8usize), (0.5, 4), (0.02, 16)] {
            let s = two_click_probabilities(e, n).unwrap();
            let m = n as f64 * e / 2.0;
            let want = 2.0 * (-2.0 * m).exp() * (m.exp() - 1.0 - m);
            assert!((s.p_nc - want).abs() < 1e-11, "E={e} N={n}");
        }
    }

    #[test]
    fn two_click_nc_spot_value() {
        let s = two_click_probabilities(0.1, 8).unwrap();
        assert!((s.p_nc - 0.08251899254305815).abs() < 1e-9);
    }

    #[test]
    fn two_click_survives_huge_energy() {
        // breakpoints must catch the concentrated weight at m = 512
        let s = two_click_probabilities(1.0, 1024).unwrap();
        let sum = s.p_s + s.p_e + s.p_nc;
        assert!((sum - 1.0).abs() < 1e-10, "sum={sum}");
        assert!(s.p_nc < 1e-12);
    }

    #[test]
    fn finite_t_two_round_case() {
        // T = 2 has the single term (t1, t2) = (1, 2) with zero remaining
        // energy: p_s = p_e = 0 and p_nc = 2 (1 - exp(-m/2))^2 exp(-m/2)
        let (e, n) = (0.4, 4usize);
        let m = n as f64 * e / 2.0;
        let s = two_click_probabilities_finite_t(e, n, 2);
        assert_eq!(s.p_s, 0.0);
        assert_eq!(s.p_e, 0.0);
        let q = 1.0 - (-m / 2.0).exp();
        let want = 2.0 * q * q * (-m / 2.0).exp();
        assert!((s.p_nc - want).abs() < 1e-15);

        let z = two_click_probabilities_finite_t(0.0, 4, 2);
        assert_eq!((z.p_s, z.p_e, z.p_nc), (0.0, 0.0, 0.0));
    }

    #[test]
    fn finite_t_normalization_approached() {
        let (e, n) = (0.1, 8usize);
        let m = n as f64 * e / 2.0;
        let want = (1.0 - (-m).exp()).powi(2);
        let mut prev_gap = f64::INFINITY;
        for t in [100usize, 400, 1600] {
            let s = two_click_probabilities_finite_t(e, n, t);
            let gap = (s.p_s + s.p_e + s.p_nc - want).abs();
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-3);
    }

    #[test]
    fn finite_t_converges_to_continuum() {
        let (e, n) = (0.1, 8usize);
        let exact = two_click_probabilities(e, n).unwrap();
        let mut prev = f64::INFINITY;
        for t in [250usize, 1000, 4000] {
            let s = two_click_probabilities_finite_t(e, n, t);
            let gap = (s.p_s - exact.p_s)
                .abs()
                .max((s.p_e - exact.p_e).abs())
                .max((s.p_nc - exact.p_nc).abs());
            assert!(gap < prev, "gap not decreasing at T={t}");
            prev = gap;
        }
        assert!(prev < 5e-3);
    }
}
