//! Exact and asymptotic outage probability of the two ZF precoding designs.
//!
//! Under either design the e2e SNR is `x y / (x + y + 1)` with independent
//! hop variables `x = P_S lambda_1` and `y = P_R lambda_2`, where `lambda_1`
//! and `lambda_2` are largest eigenvalues of complex Wishart forms. The
//! receive design nulls one relay receive dimension, shrinking hop one to
//! `(M_R - 1) x N_T`; the transmit design shrinks hop two to
//! `(M_T - 1) x N_R`. The exact outage is the standard dual-hop integral of
//! the hop-one density against the hop-two survival function, which the
//! polynomial-times-exponential expansions turn into a finite sum of modified
//! Bessel functions.

use crate::channel::{derived_averages, PowerContext, SystemConfig};
use crate::numerics::bessel_k;
use crate::precoding::ZfDesign;

use super::wishart::wishart_maxeig_expansion;
use super::{clamp_probability, OutageError};

/// Wishart dimensions of the two hops: (rows, cols) per hop.
type HopDims = ((usize, usize), (usize, usize));

fn hop_dims(design: ZfDesign, config: &SystemConfig) -> Result<HopDims, OutageError> {
    match design {
        ZfDesign::Receive => {
            if config.m_r < 2 {
                return Err(OutageError::UnsupportedConfig {
                    design,
                    requirement: "more than one relay receive antenna",
                });
            }
            Ok(((config.m_r - 1, config.n_t), (config.m_t, config.n_r)))
        }
        ZfDesign::Transmit => {
            if config.m_t < 2 {
                return Err(OutageError::UnsupportedConfig {
                    design,
                    requirement: "more than one relay transmit antenna",
                });
            }
            Ok(((config.m_r, config.n_t), (config.m_t - 1, config.n_r)))
        }
    }
}

fn check_averages(snr_sr: f64, snr_rd: f64) -> Result<(), OutageError> {
    if snr_sr > 0.0 && snr_sr.is_finite() && snr_rd > 0.0 && snr_rd.is_finite() {
        Ok(())
    } else {
        Err(OutageError::Domain(format!(
            "average hop SNRs must be positive, got {snr_sr} and {snr_rd}"
        )))
    }
}

/// Exact outage probability of a ZF design at SINR threshold `gamma_t`.
pub fn outage_zf_exact(
    design: ZfDesign,
    config: &SystemConfig,
    gamma_t: f64,
) -> Result<f64, OutageError> {
    let (hop1, hop2) = hop_dims(design, config)?;
    let avg = derived_averages(config, PowerContext::Precoding);
    outage_dual_wishart_exact(hop1, hop2, avg.snr_sr, avg.snr_rd, gamma_t)
}

/// Exact dual-hop outage with hop-1 and hop-2 Wishart dimensions given
/// explicitly. Shared kernel of both designs; they differ only in the
/// dimension bookkeeping.
pub fn outage_dual_wishart_exact(
    hop1: (usize, usize),
    hop2: (usize, usize),
    snr_sr: f64,
    snr_rd: f64,
    gamma_t: f64,
) -> Result<f64, OutageError> {
    check_averages(snr_sr, snr_rd)?;
    if gamma_t <= 0.0 {
        return Ok(0.0);
    }
    let pdf_terms = wishart_maxeig_expansion(hop1.0, hop1.1)?;
    let cdf_terms = wishart_maxeig_expansion(hop2.0, hop2.1)?;

    // P = 1 - int_0^inf survival_2((y + gt + 1) gt / y) f_1(y + gt) dy.
    // Expanding both hop laws and applying
    //   int_0^inf y^{nu-1} e^{-beta/y - gamma y} dy = 2 (beta/gamma)^{nu/2} K_nu(2 sqrt(beta gamma))
    // turns the integral into the finite sum below.
    let gt = gamma_t;
    let mut acc = 0.0;
    for t1 in pdf_terms.terms() {
        let a = t1.decay as f64;
        let b = t1.power;
        let pdf_coeff =
            a.powi(b as i32 + 1) * t1.coeff / (factorial(b) * snr_sr.powi(b as i32 + 1));
        for t2 in cdf_terms.terms() {
            let k = t2.decay as f64;
            let l = t2.power;
            let shared_exp = (-(a / snr_sr + k / snr_rd) * gt).exp();
            for m in 0..=l {
                let cdf_coeff = k.powi(m as i32) * t2.coeff / (factorial(m) * snr_rd.powi(m as i32));
                let beta = k * gt * (gt + 1.0) / snr_rd;
                let gamma = a / snr_sr;
                let ratio_sqrt = (beta / gamma).sqrt();
                let bessel_arg = 2.0 * (beta * gamma).sqrt();
                for u in 0..=m {
                    for v in 0..=b {
                        let order = v as i32 + u as i32 - m as i32 + 1;
                        let bessel = bessel_k(order.unsigned_abs(), bessel_arg)
                            .expect("argument is positive");
                        acc += pdf_coeff
                            * cdf_coeff
                            * binomial(m, u)
                            * binomial(b, v)
                            * gt.powi((m + b - v) as i32)
                            * (1.0 + gt).powi((m - u) as i32)
                            * shared_exp
                            * 2.0
                            * ratio_sqrt.powi(order)
                            * bessel;
                    }
                }
            }
        }
    }
    Ok(clamp_probability(1.0 - acc))
}

/// Natural log of the asymptotic (high-power) outage of a ZF design.
///
/// Three branches depending on how the hop exponents `n1 = rows1 * cols1`
/// and `n2 = rows2 * cols2` compare; the equal case keeps both terms.
pub fn outage_zf_asymptotic_ln(
    design: ZfDesign,
    config: &SystemConfig,
    gamma_t: f64,
) -> Result<f64, OutageError> {
    let (hop1, hop2) = hop_dims(design, config)?;
    let avg = derived_averages(config, PowerContext::Precoding);
    check_averages(avg.snr_sr, avg.snr_rd)?;
    if gamma_t <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let n1 = hop1.0 * hop1.1;
    let n2 = hop2.0 * hop2.1;
    let ln1 = ln_smallx_constant(hop1) + n1 as f64 * (gamma_t.ln() - avg.snr_sr.ln());
    let ln2 = ln_smallx_constant(hop2) + n2 as f64 * (gamma_t.ln() - avg.snr_rd.ln());
    Ok(match n1.cmp(&n2) {
        std::cmp::Ordering::Less => ln1,
        std::cmp::Ordering::Greater => ln2,
        std::cmp::Ordering::Equal => ln_sum_exp(ln1, ln2),
    })
}

/// Asymptotic outage of a ZF design (see [`outage_zf_asymptotic_ln`]).
pub fn outage_zf_asymptotic(
    design: ZfDesign,
    config: &SystemConfig,
    gamma_t: f64,
) -> Result<f64, OutageError> {
    Ok(outage_zf_asymptotic_ln(design, config, gamma_t)?.exp())
}

/// `ln` of the leading CDF constant of an `m x n` Wishart largest eigenvalue:
/// `F(x) ~ [prod_{k<s} k! / prod_{k<s} (t+k)!] x^{m n}` as `x -> 0`.
fn ln_smallx_constant((m, n): (usize, usize)) -> f64 {
    let s = m.min(n);
    let t = m.max(n);
    let mut acc = 0.0;
    for k in 0..s {
        acc += ln_factorial(k) - ln_factorial(t + k);
    }
    acc
}

pub(crate) fn ln_sum_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RelayPower;

    fn config(n_t: usize, m_r: usize, m_t: usize, n_r: usize, p: f64) -> SystemConfig {
        SystemConfig {
            n_t,
            m_r,
            m_t,
            n_r,
            c_sr: 1.0,
            c_rd: 1.0,
            c_rr: 0.05,
            p_s: p,
            relay_power: RelayPower::Explicit(p),
            target_rate: 2.0,
        }
    }

    #[test]
    fn vanishing_threshold_gives_vanishing_outage() {
        let cfg = config(2, 2, 2, 1, 100.0);
        let p = outage_zf_exact(ZfDesign::Receive, &cfg, 1e-8).unwrap();
        assert!(p.abs() <= 1e-6, "p = {p}");
    }

    #[test]
    fn receive_and_transmit_kernels_agree_under_hop_swap() {
        // The two designs share one kernel up to index ranges: a receive
        // design with (N_T, M_R, M_T, N_R) matches a transmit design with
        // (N_T, M_R - 1, M_T + 1, N_R).
        for (cfg_r, cfg_t) in [
            (config(2, 3, 2, 2, 20.0), config(2, 2, 3, 2, 20.0)),
            (config(2, 2, 2, 1, 50.0), config(2, 1, 3, 1, 50.0)),
        ] {
            let gt = cfg_r.gamma_threshold();
            let a = outage_zf_exact(ZfDesign::Receive, &cfg_r, gt).unwrap();
            let b = outage_zf_exact(ZfDesign::Transmit, &cfg_t, gt).unwrap();
            assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn receive_design_wins_at_high_power_when_both_apply() {
        // (2,3,2,3) has fourth-order diversity under receive ZF but only
        // third-order under transmit ZF.
        let cfg = config(2, 3, 2, 3, db2lin(20.0));
        let gt = cfg.gamma_threshold();
        let rx = outage_zf_exact(ZfDesign::Receive, &cfg, gt).unwrap();
        let tx = outage_zf_exact(ZfDesign::Transmit, &cfg, gt).unwrap();
        assert!(rx < tx, "receive {rx} vs transmit {tx}");
    }

    fn db2lin(db: f64) -> f64 {
        10f64.powf(db / 10.0)
    }

    #[test]
    fn exact_outage_is_monotone() {
        let design = ZfDesign::Receive;
        // Nonincreasing in power.
        let mut last = 1.0;
        for &p in &[1.0, 3.0, 10.0, 30.0, 100.0, 1000.0] {
            let cfg = config(2, 2, 2, 1, p);
            let out = outage_zf_exact(design, &cfg, cfg.gamma_threshold()).unwrap();
            assert!(out <= last + 1e-12);
            assert!((0.0..=1.0).contains(&out));
            last = out;
        }
        // Nondecreasing in the threshold.
        let cfg = config(2, 2, 2, 1, 30.0);
        let mut lastt = 0.0;
        for &gt in &[0.1, 0.5, 1.0, 3.0, 10.0, 30.0] {
            let out = outage_zf_exact(design, &cfg, gt).unwrap();
            assert!(out >= lastt - 1e-12);
            lastt = out;
        }
    }

    #[test]
    fn asymptotic_slope_matches_diversity() {
        // d log10 p / d log10 P equals the diversity order at high power.
        for (cfg, design, expected) in [
            (config(2, 2, 2, 1, 1.0), ZfDesign::Receive, 2.0),
            (config(2, 3, 2, 3, 1.0), ZfDesign::Receive, 4.0),
            (config(2, 3, 2, 3, 1.0), ZfDesign::Transmit, 3.0),
        ] {
            let gt = cfg.gamma_threshold();
            let at = |db: f64| {
                let p = 10f64.powf(db / 10.0);
                let c = SystemConfig {
                    p_s: p,
                    relay_power: RelayPower::Explicit(p),
                    ..cfg.clone()
                };
                outage_zf_asymptotic_ln(design, &c, gt).unwrap() / std::f64::consts::LN_10
            };
            let slope = -(at(80.0) - at(60.0)) / 2.0;
            assert!(
                (slope - expected).abs() <= 0.05,
                "{design:?}: slope {slope} vs {expected}"
            );
        }
    }

    #[test]
    fn equal_exponent_branch_keeps_both_terms() {
        // (2,2,2,1) receive: both hop exponents are 2, so the asymptote is
        // the sum of the two single-hop terms.
        let cfg = config(2, 2, 2, 1, 1000.0);
        let gt = cfg.gamma_threshold();
        let combined = outage_zf_asymptotic(ZfDesign::Receive, &cfg, gt).unwrap();
        let term1 = (ln_smallx_constant((1, 2)) + 2.0 * (gt.ln() - cfg.p_s.ln())).exp();
        let term2 = (ln_smallx_constant((2, 1)) + 2.0 * (gt.ln() - cfg.p_s.ln())).exp();
        assert!((combined - (term1 + term2)).abs() <= 1e-12 * combined);
    }

    #[test]
    fn exact_approaches_asymptotic_at_high_power() {
        let design = ZfDesign::Receive;
        let mut prev_ratio_err = f64::INFINITY;
        for &db in &[25.0, 35.0, 45.0] {
            let p = 10f64.powf(db / 10.0);
            let cfg = config(2, 2, 2, 1, p);
            let gt = cfg.gamma_threshold();
            let exact = outage_zf_exact(design, &cfg, gt).unwrap();
            let asym = outage_zf_asymptotic(design, &cfg, gt).unwrap();
            let ratio_err = (exact / asym - 1.0).abs();
            assert!(ratio_err < prev_ratio_err, "ratio error should shrink");
            prev_ratio_err = ratio_err;
        }
        assert!(prev_ratio_err <= 0.10, "final ratio error {prev_ratio_err}");
    }

    #[test]
    fn rejects_unsupported_configs_and_bad_averages() {
        let cfg = config(2, 1, 2, 2, 10.0);
        assert!(matches!(
            outage_zf_exact(ZfDesign::Receive, &cfg, 3.0),
            Err(OutageError::UnsupportedConfig { .. })
        ));
        let mut bad = config(2, 2, 2, 2, 10.0);
        bad.c_sr = 0.0;
        assert!(matches!(
            outage_zf_exact(ZfDesign::Receive, &bad, 3.0),
            Err(OutageError::Domain(_))
        ));
    }
}
