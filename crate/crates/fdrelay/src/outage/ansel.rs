//! Outage probability of the antenna-selection schemes: exact semi-infinite
//! integrals for MM/PR/LI, two-term high-power approximations for all four
//! rules, and the explicit asymptotic bracket for the optimal rule (whose
//! exact outage has no closed form and is estimated by simulation).
//!
//! Every scheme reduces to the dual-hop outage integral
//!
//! ```text
//! P = 1 - int_0^inf  S_X((y + g + 1) g / y) f_Y(y + g) dy,   g = gamma_t
//! ```
//!
//! where `X` is the post-selection first-hop signal-to-loopback ratio with
//! survival function `S_X`, and `Y` is the post-selection second-hop SNR.
//! The schemes differ only in the order statistics entering `S_X` and `f_Y`.

use crate::channel::{derived_averages, PowerContext, RelayPower, SystemConfig};
use crate::numerics::integrate_semi_infinite;
use crate::selection::AsScheme;

use super::zf::{ln_factorial, ln_sum_exp};
use super::{clamp_probability, OutageError};

const QUAD_ABS_TOL: f64 = 1e-10;
const QUAD_REL_TOL: f64 = 1e-8;

/// Average link SNR/INR triple for the selection context.
struct Averages {
    snr_sr: f64,
    snr_rd: f64,
    inr_rr: f64,
}

fn averages(config: &SystemConfig) -> Result<Averages, OutageError> {
    let avg = derived_averages(config, PowerContext::AntennaSelection);
    let positive = |v: f64| v.is_finite() && v > 0.0;
    if !positive(avg.snr_sr) || !positive(avg.snr_rd) {
        return Err(OutageError::Domain(format!(
            "average hop SNRs must be positive, got {} and {}",
            avg.snr_sr, avg.snr_rd
        )));
    }
    if !avg.inr_rr.is_finite() || avg.inr_rr < 0.0 {
        return Err(OutageError::Domain(
            "average loopback INR must be nonnegative".into(),
        ));
    }
    Ok(Averages {
        snr_sr: avg.snr_sr,
        snr_rd: avg.snr_rd,
        inr_rr: avg.inr_rr,
    })
}

/// Survival function of `max{Exp_1..Exp_n} / (INR + 1)` where the numerator
/// is the largest of `n` rate-`1/snr` exponentials and `INR` is exponential
/// with mean `inr_eff`, independent. Closed form after integrating out the
/// loopback variable:
///
/// ```text
/// S(x) = n sum_{p<n} (-1)^p C(n-1, p) e^{-(p+1)x/snr}
///        / [(p+1) (1 + (p+1) inr_eff x / snr)]
/// ```
fn ratio_survival(x: f64, n: u32, snr: f64, inr_eff: f64) -> f64 {
    let mut acc = 0.0;
    let mut sign = 1.0;
    for p in 0..n {
        let pf = (p + 1) as f64;
        let term = sign * binomial(n - 1, p) * (-pf * x / snr).exp()
            / (pf * (1.0 + pf * inr_eff * x / snr));
        acc += term;
        sign = -sign;
    }
    n as f64 * acc
}

/// Density of the largest of `n` mean-`scale` exponentials.
fn max_exp_pdf(y: f64, n: u32, scale: f64) -> f64 {
    if y < 0.0 {
        return 0.0;
    }
    let e = (-y / scale).exp();
    n as f64 / scale * (1.0 - e).powi(n as i32 - 1) * e
}

/// Dual-hop outage integral shared by the exact evaluators.
fn dual_hop_outage<S>(survival_x: S, hop2_order: u32, snr_rd: f64, gamma_t: f64) -> Result<f64, OutageError>
where
    S: Fn(f64) -> f64,
{
    if gamma_t <= 0.0 {
        return Ok(0.0);
    }
    let integrand = |y: f64| {
        let x = (y + gamma_t + 1.0) * gamma_t / y;
        survival_x(x) * max_exp_pdf(y + gamma_t, hop2_order, snr_rd)
    };
    let integral = integrate_semi_infinite(integrand, QUAD_ABS_TOL, QUAD_REL_TOL)?;
    Ok(clamp_probability(1.0 - integral))
}

/// Exact outage of max-max selection: the first hop is the largest of
/// `N_T M_R` exponentials over an untouched loopback draw, the second the
/// largest of `M_T N_R` exponentials.
pub fn outage_mm_exact(config: &SystemConfig, gamma_t: f64) -> Result<f64, OutageError> {
    let avg = averages(config)?;
    let hop1 = (config.n_t * config.m_r) as u32;
    let hop2 = (config.m_t * config.n_r) as u32;
    dual_hop_outage(
        |x| ratio_survival(x, hop1, avg.snr_sr, avg.inr_rr),
        hop2,
        avg.snr_rd,
        gamma_t,
    )
}

/// Exact outage of partial selection: per relay receive antenna the best of
/// `N_T` source antennas pairs with the weakest of `M_T` loopback entries,
/// and the best such antenna wins; the destination picks the best of `N_R`.
pub fn outage_pr_exact(config: &SystemConfig, gamma_t: f64) -> Result<f64, OutageError> {
    let avg = averages(config)?;
    let n_t = config.n_t as u32;
    let m_r = config.m_r as i32;
    let m_t = config.m_t as f64;
    dual_hop_outage(
        |x| {
            let per_antenna_cdf = 1.0 - ratio_survival(x, n_t, avg.snr_sr, avg.inr_rr / m_t);
            1.0 - per_antenna_cdf.powi(m_r)
        },
        config.n_r as u32,
        avg.snr_rd,
        gamma_t,
    )
}

/// Exact outage of loop-interference selection: the loopback is the minimum
/// of `M_R M_T` exponentials, the hops take the best of `N_T` and `N_R`.
pub fn outage_li_exact(config: &SystemConfig, gamma_t: f64) -> Result<f64, OutageError> {
    let avg = averages(config)?;
    let pool = (config.m_r * config.m_t) as f64;
    dual_hop_outage(
        |x| ratio_survival(x, config.n_t as u32, avg.snr_sr, avg.inr_rr / pool),
        config.n_r as u32,
        avg.snr_rd,
        gamma_t,
    )
}

/// Requires the power-control exponent to lie strictly inside (0, 1); the
/// two-term high-power forms are stated for that regime only.
fn require_partial_alpha(config: &SystemConfig) -> Result<(), OutageError> {
    match config.relay_power {
        RelayPower::Exponent(a) if a > 0.0 && a < 1.0 => Ok(()),
        _ => Err(OutageError::AlphaOutOfRange),
    }
}

/// `ln` of the two-term high-power outage approximation of a selection
/// scheme. For the optimal rule this is the upper member of its asymptotic
/// bracket (the max-max form); see [`op_as_asymptotic_bounds`].
pub fn outage_as_asymptotic_ln(
    scheme: AsScheme,
    config: &SystemConfig,
    gamma_t: f64,
) -> Result<f64, OutageError> {
    require_partial_alpha(config)?;
    let avg = averages(config)?;
    if gamma_t <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if avg.inr_rr <= 0.0 {
        return Err(OutageError::Domain(
            "the high-power forms assume a nonzero loopback variance".into(),
        ));
    }
    let n_t = config.n_t;
    let m_r = config.m_r;
    let m_t = config.m_t;
    let n_r = config.n_r;
    let ln_ratio1 = (avg.inr_rr * gamma_t / avg.snr_sr).ln();
    let ln_ratio2 = (gamma_t / avg.snr_rd).ln();
    let (ln_c1, exp1, exp2) = match scheme {
        AsScheme::Optimal | AsScheme::MaxMax => {
            (ln_factorial(n_t * m_r), n_t * m_r, m_t * n_r)
        }
        AsScheme::Partial => (
            m_r as f64 * (ln_factorial(n_t) - n_t as f64 * (m_t as f64).ln()),
            n_t * m_r,
            n_r,
        ),
        AsScheme::LoopInterference => (
            ln_factorial(n_t) - n_t as f64 * ((m_r * m_t) as f64).ln(),
            n_t,
            n_r,
        ),
    };
    let ln_term1 = ln_c1 + exp1 as f64 * ln_ratio1;
    let ln_term2 = exp2 as f64 * ln_ratio2;
    Ok(ln_sum_exp(ln_term1, ln_term2))
}

/// Two-term high-power outage approximation (see the `_ln` variant).
pub fn outage_as_asymptotic(
    scheme: AsScheme,
    config: &SystemConfig,
    gamma_t: f64,
) -> Result<f64, OutageError> {
    Ok(outage_as_asymptotic_ln(scheme, config, gamma_t)?.exp())
}

/// Explicit high-power bracket for the optimal rule: the lower member comes
/// from a virtual system that decouples the loopback from the hop selection,
/// the upper member is the max-max approximation. Both decay with the same
/// diversity order; the exact constants in between are not known in closed
/// form.
pub fn op_as_asymptotic_bounds(
    config: &SystemConfig,
    gamma_t: f64,
) -> Result<(f64, f64), OutageError> {
    require_partial_alpha(config)?;
    let avg = averages(config)?;
    if gamma_t <= 0.0 {
        return Ok((0.0, 0.0));
    }
    if avg.inr_rr <= 0.0 {
        return Err(OutageError::Domain(
            "the high-power forms assume a nonzero loopback variance".into(),
        ));
    }
    let n1 = config.n_t * config.m_r;
    let n2 = config.m_t * config.n_r;
    let ln_ratio1 = (avg.inr_rr * gamma_t / avg.snr_sr).ln();
    let ln_ratio2 = n2 as f64 * (gamma_t / avg.snr_rd).ln();
    let ln_upper_c = ln_factorial(n1);
    let ln_lower_c = ln_factorial(n1) - n1 as f64 * ((config.m_t * config.m_r) as f64).ln();
    let lower = ln_sum_exp(ln_lower_c + n1 as f64 * ln_ratio1, ln_ratio2).exp();
    let upper = ln_sum_exp(ln_upper_c + n1 as f64 * ln_ratio1, ln_ratio2).exp();
    Ok((lower, upper))
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(p_s: f64, c_rr: f64, alpha: f64) -> SystemConfig {
        SystemConfig {
            n_t: 2,
            m_r: 2,
            m_t: 2,
            n_r: 2,
            c_sr: 1.0,
            c_rd: 1.0,
            c_rr,
            p_s,
            relay_power: RelayPower::Exponent(alpha),
            target_rate: 2.0,
        }
    }

    #[test]
    fn vanishing_threshold_gives_zero() {
        let cfg = config(100.0, 0.05, 1.0);
        for f in [outage_mm_exact, outage_pr_exact, outage_li_exact] {
            assert_eq!(f(&cfg, 0.0).unwrap(), 0.0);
            assert!(f(&cfg, 1e-9).unwrap() < 1e-6);
        }
    }

    #[test]
    fn survival_is_one_at_zero_threshold() {
        for n in [1u32, 2, 4, 8] {
            let s = ratio_survival(0.0, n, 5.0, 0.3);
            assert!((s - 1.0).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn binomial_sum_form_matches_product_form() {
        // The alternating binomial expansion of the second-hop density equals
        // the product form used by the integrator.
        let n = 4u32;
        let scale = 2.5;
        for &y in &[0.1, 0.7, 2.0, 9.0] {
            let mut sum = 0.0;
            let mut sign = 1.0;
            for q in 0..n {
                sum += sign * binomial(n - 1, q) * (-((q + 1) as f64) * y / scale).exp();
                sign = -sign;
            }
            sum *= n as f64 / scale;
            assert!((sum - max_exp_pdf(y, n, scale)).abs() <= 1e-12);
        }
    }

    #[test]
    fn loopback_free_limit_matches_dual_hop_oracle() {
        // With a vanishing loopback variance the MM outage must match an
        // independently coded best-antenna dual-hop outage.
        let mut cfg = config(31.6227766, 1e-12, 1.0);
        cfg.c_rr = 1e-12;
        let gamma_t = cfg.gamma_threshold();
        let p = outage_mm_exact(&cfg, gamma_t).unwrap();

        // Oracle: P = 1 - int S_X f_Y with X the max of 4 exponentials
        // (no loopback division at all).
        let snr = cfg.p_s;
        let oracle_integrand = |y: f64| {
            let x = (y + gamma_t + 1.0) * gamma_t / y;
            let s_x = 1.0 - (1.0 - (-x / snr).exp()).powi(4);
            s_x * max_exp_pdf(y + gamma_t, 4, snr)
        };
        let oracle = 1.0 - integrate_semi_infinite(oracle_integrand, 1e-12, 1e-10).unwrap();
        assert!((p - oracle).abs() <= 1e-6, "{p} vs {oracle}");
    }

    #[test]
    fn pr_collapses_to_mm_when_single_receive_antenna() {
        // With M_R = 1 the PR first-hop law has a single factor, matching the
        // MM law with N_T * M_R = N_T antennas, up to the loopback pool size.
        let mut cfg = config(20.0, 0.1, 1.0);
        cfg.m_r = 1;
        cfg.m_t = 1;
        let gamma_t = cfg.gamma_threshold();
        let pr = outage_pr_exact(&cfg, gamma_t).unwrap();
        let mm = outage_mm_exact(&cfg, gamma_t).unwrap();
        assert!((pr - mm).abs() <= 1e-8, "{pr} vs {mm}");
    }

    #[test]
    fn li_approaches_loopback_free_oracle_for_large_pools() {
        // As M_R * M_T grows the minimum loopback entry vanishes and LI tends
        // to the loopback-free dual-hop outage with N_T and N_R selection.
        let gamma_t = 3.0;
        let snr = 100.0;
        let free_integrand = |y: f64| {
            let x = (y + gamma_t + 1.0) * gamma_t / y;
            let s_x = 1.0 - (1.0 - (-x / snr).exp()).powi(2);
            s_x * max_exp_pdf(y + gamma_t, 2, snr)
        };
        let free = 1.0 - integrate_semi_infinite(free_integrand, 1e-12, 1e-10).unwrap();
        let mut gaps = Vec::new();
        for relay_antennas in [2usize, 4, 8] {
            let mut cfg = config(snr, 0.5, 1.0);
            cfg.m_r = relay_antennas;
            cfg.m_t = relay_antennas;
            let p = outage_li_exact(&cfg, gamma_t).unwrap();
            assert!(p >= free - 1e-12, "loopback can only hurt");
            gaps.push(p - free);
        }
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gaps {gaps:?}");
    }

    #[test]
    fn asymptotic_constants_match_direct_evaluation() {
        let cfg = config(1e8, 0.05, 0.5);
        let gamma_t = 3.0;
        let snr_sr = cfg.p_s;
        let p_r = cfg.p_s.sqrt();
        let inr = p_r * cfg.c_rr;
        let snr_rd = p_r;

        // MM: (N_T M_R)! (inr g / snr1)^4 + (g / snr2)^4, with 4! = 24.
        let mm = outage_as_asymptotic(AsScheme::MaxMax, &cfg, gamma_t).unwrap();
        let expected = 24.0 * (inr * gamma_t / snr_sr).powi(4) + (gamma_t / snr_rd).powi(4);
        assert!((mm - expected).abs() <= 1e-12 * expected);

        // PR: (N_T! / M_T^{N_T})^{M_R} = (2/4)^2 = 0.25 leading constant.
        let pr = outage_as_asymptotic(AsScheme::Partial, &cfg, gamma_t).unwrap();
        let expected = 0.25 * (inr * gamma_t / snr_sr).powi(4) + (gamma_t / snr_rd).powi(2);
        assert!((pr - expected).abs() <= 1e-12 * expected);

        // LI: N_T! / (M_R M_T)^{N_T} = 2/16.
        let li = outage_as_asymptotic(AsScheme::LoopInterference, &cfg, gamma_t).unwrap();
        let expected = 0.125 * (inr * gamma_t / snr_sr).powi(2) + (gamma_t / snr_rd).powi(2);
        assert!((li - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn op_bounds_bracket_and_share_slope() {
        let gamma_t = 3.0;
        let at = |db: f64| {
            let cfg = config(10f64.powf(db / 10.0), 0.1, 0.5);
            op_as_asymptotic_bounds(&cfg, gamma_t).unwrap()
        };
        let (lo1, up1) = at(80.0);
        let (lo2, up2) = at(100.0);
        assert!(lo1 < up1, "lower must sit strictly below upper");
        let slope_lo = -(lo2.log10() - lo1.log10()) / 2.0;
        let slope_up = -(up2.log10() - up1.log10()) / 2.0;
        assert!((slope_lo - 2.0).abs() <= 0.05);
        assert!((slope_up - 2.0).abs() <= 0.05);

        // Point estimate equals the upper member.
        let cfg = config(1e8, 0.1, 0.5);
        let (_, upper) = op_as_asymptotic_bounds(&cfg, gamma_t).unwrap();
        let point = outage_as_asymptotic(AsScheme::Optimal, &cfg, gamma_t).unwrap();
        assert!((point - upper).abs() <= 1e-12 * upper);
    }

    #[test]
    fn asymptotics_reject_full_power_operation() {
        let cfg = config(100.0, 0.05, 1.0);
        assert!(matches!(
            outage_as_asymptotic(AsScheme::MaxMax, &cfg, 3.0),
            Err(OutageError::AlphaOutOfRange)
        ));
        assert!(matches!(
            op_as_asymptotic_bounds(&cfg, 3.0),
            Err(OutageError::AlphaOutOfRange)
        ));
    }

    #[test]
    #[allow(clippy::type_complexity)]
    fn asymptotic_over_exact_ratio_approaches_one() {
        // At the optimal exponent the two-term law closes in on the exact
        // evaluator: ratio within [0.5, 2] at the top power and improving
        // along the top three grid points.
        let cases: [(AsScheme, f64, fn(&SystemConfig, f64) -> Result<f64, OutageError>); 3] = [
            (AsScheme::MaxMax, 0.5, outage_mm_exact),
            (AsScheme::Partial, 2.0 / 3.0, outage_pr_exact),
            (AsScheme::LoopInterference, 0.5, outage_li_exact),
        ];
        for (scheme, alpha, exact_fn) in cases {
            let mut errs = Vec::new();
            for &db in &[40.0, 45.0, 50.0] {
                let cfg = config(10f64.powf(db / 10.0), 0.1, alpha);
                let exact = exact_fn(&cfg, 3.0).unwrap();
                let asym = outage_as_asymptotic(scheme, &cfg, 3.0).unwrap();
                errs.push((asym / exact - 1.0).abs());
            }
            // Improvement is only visible above the convergence floor; once
            // the ratio sits within 1% of one there is nothing left to gain.
            let converged = errs.iter().all(|&e| e < 0.01);
            assert!(
                converged || (errs[0] > errs[1] && errs[1] > errs[2]),
                "{scheme:?}: {errs:?}"
            );
            assert!(errs[2] < 1.0, "{scheme:?} top ratio error {}", errs[2]);
        }
    }

    #[test]
    fn exact_outage_monotone_in_power_and_threshold() {
        for f in [outage_mm_exact, outage_pr_exact, outage_li_exact] {
            let mut last = 1.0;
            for &db in &[0.0, 10.0, 20.0, 30.0, 40.0] {
                let cfg = config(10f64.powf(db / 10.0), 0.05, 0.5);
                let p = f(&cfg, cfg.gamma_threshold()).unwrap();
                assert!((0.0..=1.0).contains(&p));
                assert!(p <= last + 1e-12);
                last = p;
            }
            let cfg = config(100.0, 0.05, 0.5);
            let mut lastt = 0.0;
            for &gt in &[0.2, 1.0, 3.0, 10.0] {
                let p = f(&cfg, gt).unwrap();
                assert!(p >= lastt - 1e-12);
                lastt = p;
            }
        }
    }
}
