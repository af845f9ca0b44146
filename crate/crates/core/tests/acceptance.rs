//! Acceptance suite: one `PASS`/`FAIL` line per criterion, non-zero exit on
//! any failure. Tolerances and sample sizes are fixed here.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use barnesg::barnes::{
    log_barnes_g_integral, log_barnes_g_product, log_barnes_g_series, BarnesEvalReport,
    DEFAULT_PRODUCT_TERMS,
};
use barnesg::cue_moments::{
    beta_identity_residual, ks_gamma_identity_residual, log_arithmetic_factor, log_scaled_moment_ratio,
    log_gamma_product_mellin, log_gamma_product_limit,
};
use barnesg::ggc::{
    double_sum_closed_form, double_sum_integral, double_sum_remainder, loggamma_levy_residual,
    log_scaled_laplace_sn, log_exp_laplace_limit, mode_evidence, rn_evidence, HConstantMode, SnQuery,
    ThorinMeasure,
};
use barnesg::num_core::{ComplexScalar, QuadratureSpec};
use barnesg::samplers::{
    empirical_mellin, ks_critical_value, ks_two_sample, log_sample_abs_z_beta, q_total_mass,
    sample_haar_abs_det, sample_q, RngStream,
};
use barnesg::Result;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn fmt_seq(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" > ")
}

fn c1_barnes_cross_route() -> Result<Outcome> {
    let mut grid: Vec<ComplexScalar> = (0..25)
        .map(|k| ComplexScalar::new(-0.9 + 1.8 * (k as f64 + 0.5) / 25.0, 0.0))
        .collect();
    grid.extend((0..25).map(|k| ComplexScalar::from_polar(0.5, 2.0 * PI * k as f64 / 25.0)));
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for z in grid {
        let routes: [BarnesEvalReport; 3] = [
            log_barnes_g_product(z, DEFAULT_PRODUCT_TERMS)?,
            log_barnes_g_series(z)?,
            log_barnes_g_integral(z)?,
        ];
        for i in 0..3 {
            for j in i + 1..3 {
                let gap = (routes[i].log_value - routes[j].log_value).norm();
                let allowed = 1e-8 + routes[i].err_estimate + routes[j].err_estimate;
                worst = worst.max(gap);
                pass &= gap <= allowed;
            }
        }
    }
    Ok(Outcome {
        pass,
        detail: format!("50 points, max pairwise gap {worst:.2e} (allowed 1e-8 + estimates)"),
    })
}

fn c2_exact_identities() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=50 {
        for t in [0.1, 0.5, 1.0, 2.0, 3.7] {
            worst = worst
                .max(ks_gamma_identity_residual(n, t)?.residual.abs())
                .max(beta_identity_residual(n, t)?.residual.abs());
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-10,
        detail: format!("max |residual| {worst:.2e} over N ≤ 50, 5 exponents (tol 1e-10)"),
    })
}

const NS: [u64; 3] = [100, 1000, 10_000];

fn c3_keating_snaith_limit() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for lambda in [0.5, 1.0, 1.5] {
        let rem: Vec<f64> = NS
            .iter()
            .map(|&n| log_scaled_moment_ratio(n, lambda).map(|l| l.exp_m1().abs()))
            .collect::<Result<_>>()?;
        pass &= strictly_decreasing(&rem);
        if lambda == 1.0 {
            // (N+1)/N exactly
            pass &= rem[2] <= 1e-2 && (rem[2] - 1e-4).abs() <= 1e-9;
        }
        parts.push(format!("λ={lambda}: {}", fmt_seq(&rem)));
    }
    Ok(Outcome {
        pass,
        detail: parts.join("; "),
    })
}

fn c4_gamma_product() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for lambda in [0.5, 1.0] {
        let limit = log_gamma_product_limit(lambda)?;
        let rem: Vec<f64> = NS
            .iter()
            .map(|&n| log_gamma_product_mellin(n, lambda).map(|l| (l - limit).exp_m1().abs()))
            .collect::<Result<_>>()?;
        pass &= strictly_decreasing(&rem);
        parts.push(format!("λ={lambda}: {}", fmt_seq(&rem)));
    }
    Ok(Outcome {
        pass,
        detail: parts.join("; "),
    })
}

fn c5_exp_laplace() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    let delta1 = ThorinMeasure::point(1.0, 1.0)?;
    for lambda in [0.5, 1.0, 2.0] {
        let limit = log_exp_laplace_limit(lambda)?;
        let rem: Vec<f64> = NS
            .iter()
            .map(|&n| {
                let q = SnQuery {
                    measure: delta1.clone(),
                    n_max: n,
                    lambda,
                };
                log_scaled_laplace_sn(&q).map(|l| (l - limit).exp_m1().abs())
            })
            .collect::<Result<_>>()?;
        pass &= strictly_decreasing(&rem);
        parts.push(format!("λ={lambda}: {}", fmt_seq(&rem)));
    }
    Ok(Outcome {
        pass,
        detail: parts.join("; "),
    })
}

fn c6_haar_monte_carlo() -> Result<Outcome> {
    const SAMPLES: usize = 200_000;
    let mut haar_rng = RngStream::new(SEED, 6);
    let haar: Vec<f64> = (0..SAMPLES)
        .map(|_| sample_haar_abs_det(8, &mut haar_rng))
        .collect::<Result<_>>()?;
    let mut beta_rng = RngStream::new(SEED, 7);
    let beta: Vec<f64> = (0..SAMPLES)
        .map(|_| log_sample_abs_z_beta(8, &mut beta_rng))
        .collect::<Result<_>>()?;
    let second = empirical_mellin(&haar, 2.0)?;
    let moment_ok = second.agrees_with(9.0, 3.0);
    let log_haar: Vec<f64> = haar.iter().map(|x| x.ln()).collect();
    let d = ks_two_sample(&beta, &log_haar)?;
    let crit = ks_critical_value(0.01, SAMPLES, Some(SAMPLES));
    Ok(Outcome {
        pass: moment_ok && d < crit,
        detail: format!(
            "E|Z|² = {:.4} ± {:.4} (want 9); KS D = {d:.2e} < {crit:.2e}",
            second.mean, second.std_error
        ),
    })
}

fn c7_q_law() -> Result<Outcome> {
    const SAMPLES: usize = 100_000;
    // (3/π²) Γ(s+3) ζ(s+2)
    const MELLIN: [(f64, f64); 4] = [
        (-0.5, 1.055_585_184_257_599_6),
        (0.5, 1.355_140_326_922_173),
        (1.0, 2.192_288_908_204_315_3),
        (2.0, 7.895_683_520_871_487),
    ];
    let (mass, _) = q_total_mass(&QuadratureSpec::with_target(1e-13))?;
    let mut pass = (mass - 1.0).abs() <= 1e-10;
    let mut rng = RngStream::new(SEED, 8);
    let draws: Vec<f64> = (0..SAMPLES).map(|_| sample_q(&mut rng)).collect::<Result<_>>()?;
    let mut parts = vec![format!("mass-1 = {:.1e}", mass - 1.0)];
    for (s, want) in MELLIN {
        let m = empirical_mellin(&draws, s)?;
        pass &= m.agrees_with(want, 3.0);
        parts.push(format!("s={s}: {:.2}σ", (m.mean - want) / m.std_error));
    }
    Ok(Outcome {
        pass,
        detail: parts.join(", "),
    })
}

fn c8_double_sum() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in [1, 10, 100] {
        worst = worst.max((double_sum_integral(n)? - double_sum_closed_form(n)?).abs());
    }
    let rem: Vec<f64> = NS
        .iter()
        .map(|&n| double_sum_remainder(n).map(f64::abs))
        .collect::<Result<_>>()?;
    Ok(Outcome {
        pass: worst <= 1e-10 && strictly_decreasing(&rem),
        detail: format!("closed-form gap {worst:.1e}; remainder {}", fmt_seq(&rem)),
    })
}

fn c9_loggamma_levy() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for (a, l) in [(1.0, 1.0), (3.5, 2.2), (0.7, -0.3)] {
        let r = loggamma_levy_residual(a, l)?;
        worst = worst.max(r.residual.abs());
        pass &= r.residual.abs() <= 1e-8;
    }
    Ok(Outcome {
        pass,
        detail: format!("max |residual| {worst:.2e} (tol 1e-8)"),
    })
}

fn c10_h_constant() -> Result<Outcome> {
    let measures = [
        ("δ_1", ThorinMeasure::point(1.0, 1.0)?),
        ("{(1,1),(2,2)}", ThorinMeasure::atomic([(1.0, 1.0), (2.0, 2.0)])?),
    ];
    let mut winners = Vec::new();
    let mut parts = Vec::new();
    for (name, mu) in &measures {
        for lambda in [0.5, 1.0, 2.0] {
            let ev = mode_evidence(mu, lambda, 1_000, 10_000)?;
            winners.push(ev.winner());
            parts.push(format!(
                "{name} λ={lambda}: Δ(1+γ)={:.1e} Δγ={:.1e} err={:.1e}",
                ev.log_sn_hi - ev.log_h_one_plus_gamma,
                ev.log_sn_hi - ev.log_h_gamma,
                ev.extrapolation_error
            ));
        }
    }
    let winner = winners[0];
    let unanimous = winner.is_some() && winners.iter().all(|w| *w == winner);

    let mut rn_ok = true;
    for xi in [1.0, 2.0] {
        for lambda in [0.5, 1.0, 2.0] {
            let ev = rn_evidence(xi, lambda, &NS)?;
            rn_ok &= ev.gaps_shrink && ev.implied_mode() == winner;
            if xi == 1.0 {
                parts.push(format!(
                    "R_N(1,{lambda}) → {:.6} (−λ²/2 = {:.6})",
                    ev.limit_estimate, ev.mode_consistent_limit
                ));
            }
        }
    }
    let label = match winner {
        Some(HConstantMode::Gamma) => "gamma",
        Some(HConstantMode::OnePlusGamma) => "one_plus_gamma",
        None => "ambiguous",
    };
    Ok(Outcome {
        pass: unanimous && rn_ok,
        detail: format!("winner {label}; {}", parts.join("; ")),
    })
}

fn c11_arithmetic_factor() -> Result<Outcome> {
    let a = log_arithmetic_factor(2.0, 100_000)?.exp();
    let b = log_arithmetic_factor(2.0, 200_000)?.exp();
    Ok(Outcome {
        pass: (a - b).abs() < 1e-6,
        detail: format!("A(2) = {b:.10}, change on doubling p_max {:.2e} (< 1e-6)", (a - b).abs()),
    })
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 barnes cross-route", c1_barnes_cross_route, Duration::from_secs(10)),
        ("2 exact moment identities", c2_exact_identities, Duration::from_secs(5)),
        ("3 moment limit", c3_keating_snaith_limit, Duration::from_secs(30)),
        ("4 gamma-product limit", c4_gamma_product, Duration::from_secs(30)),
        ("5 gamma Laplace limit", c5_exp_laplace, Duration::from_secs(60)),
        ("6 haar monte carlo", c6_haar_monte_carlo, Duration::from_secs(120)),
        ("7 Q law", c7_q_law, Duration::from_secs(120)),
        ("8 double-sum integral", c8_double_sum, Duration::from_secs(60)),
        ("9 log-gamma Lévy residual", c9_loggamma_levy, Duration::from_secs(60)),
        ("10 H constant adjudication", c10_h_constant, Duration::from_secs(120)),
        ("11 arithmetic factor tail", c11_arithmetic_factor, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(o) => (o.pass && elapsed <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {detail} [{:.2}s / {}s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
