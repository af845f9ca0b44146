use std::collections::BTreeMap;

use barnesg::barnes::{
    log_barnes_g, log_barnes_g_integral, log_barnes_g_product, log_barnes_g_series, BarnesEvalReport,
};
use barnesg::cue_moments::{
    beta_identity_residual, ks_gamma_identity_residual, log_arithmetic_factor, log_moment_abs_t,
    log_scaled_moment_ratio, log_gamma_product_mellin, log_gamma_product_limit, MomentQuery, MomentScaling,
};
use barnesg::ggc::{
    double_sum_closed_form, double_sum_integral, double_sum_remainder, h_integral, log_h_lambda,
    log_scaled_laplace_sn, rn_probe, HConstantMode, SnQuery, ThorinMeasure,
};
use barnesg::num_core::{ComplexScalar, QuadratureSpec};
use barnesg::samplers::{
    empirical_mellin, ks_critical_value, ks_one_sample, ks_two_sample, log_sample_abs_z_beta, q_cdf,
    q_total_mass, sample_haar_abs_det, sample_q, RngStream, SampleStats,
};
use barnesg::IdentityReport;
use serde::Serialize;

use crate::args::*;
use crate::table::{Cell, Kind, Metadata, ResultTable};
use crate::CliError;

fn metadata<P: Serialize>(command: &str, seed: u64, params: &P) -> Result<Metadata, CliError> {
    let value = serde_json::to_value(params)?;
    let mut map = BTreeMap::new();
    if let serde_json::Value::Object(obj) = value {
        for (k, v) in obj {
            let s = match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            map.insert(k, s);
        }
    }
    Ok(Metadata {
        command: command.to_owned(),
        build: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        seed,
        params: map,
    })
}

/// Evaluate a command into its table.
pub fn run(cli: &Cli) -> Result<ResultTable, CliError> {
    let seed = cli.output.seed;
    match &cli.command {
        Command::Barnes(BarnesCmd::Eval(a)) => barnes_eval(metadata("barnes eval", seed, a)?, a),
        Command::Barnes(BarnesCmd::Table(a)) => barnes_table(metadata("barnes table", seed, a)?, a),
        Command::Cue(CueCmd::Moments(a)) => cue_moments(metadata("cue moments", seed, a)?, a),
        Command::Cue(CueCmd::Limit(a)) => cue_limit(metadata("cue limit", seed, a)?, a),
        Command::Verify(VerifyCmd::KsIdentity(a)) => {
            identity(metadata("verify ks-identity", seed, a)?, a, ks_gamma_identity_residual)
        }
        Command::Verify(VerifyCmd::BetaIdentity(a)) => {
            identity(metadata("verify beta-identity", seed, a)?, a, beta_identity_residual)
        }
        Command::Verify(VerifyCmd::Haar(a)) => verify_haar(metadata("verify haar", seed, a)?, a, seed),
        Command::Verify(VerifyCmd::Q(a)) => verify_q(metadata("verify q", seed, a)?, a, seed),
        Command::Ggc(GgcCmd::H(a)) => ggc_h(metadata("ggc h", seed, a)?, a),
        Command::Ggc(GgcCmd::Limit(a)) => ggc_limit(metadata("ggc limit", seed, a)?, a),
        Command::Ggc(GgcCmd::RnProbe(a)) => ggc_rn(metadata("ggc rn-probe", seed, a)?, a),
        Command::Ggc(GgcCmd::DoubleSum(a)) => ggc_double_sum(metadata("ggc double-sum", seed, a)?, a),
        Command::Factor(FactorCmd::Arithmetic(a)) => {
            factor_arithmetic(metadata("factor arithmetic", seed, a)?, a)
        }
    }
}

fn z_cells(z: ComplexScalar) -> Vec<Cell> {
    vec![z.re.into(), z.im.into()]
}

const NAN_PAIR: (f64, f64) = (f64::NAN, f64::NAN);

fn barnes_eval(meta: Metadata, a: &BarnesEval) -> Result<ResultTable, CliError> {
    let mut t = ResultTable::new(
        meta,
        &[
            ("z_re", Kind::Real),
            ("z_im", Kind::Real),
            ("product_re", Kind::Real),
            ("product_im", Kind::Real),
            ("series_re", Kind::Real),
            ("series_im", Kind::Real),
            ("integral_re", Kind::Real),
            ("integral_im", Kind::Real),
            ("dispatch_re", Kind::Real),
            ("dispatch_im", Kind::Real),
            ("dispatch_route", Kind::Text),
            ("max_gap", Kind::Real),
            ("max_excess", Kind::Real),
        ],
    );
    for &z in &a.z.0 {
        let row = (|| -> barnesg::Result<(Vec<Cell>, bool)> {
            let dispatch = log_barnes_g(z)?;
            let in_strip = z.re > -1.0;
            let product = if in_strip { Some(log_barnes_g_product(z, a.terms)?) } else { None };
            let series = if z.norm() < 1.0 { Some(log_barnes_g_series(z)?) } else { None };
            let integral = if in_strip { Some(log_barnes_g_integral(z)?) } else { None };
            let routes: Vec<&BarnesEvalReport> =
                [&product, &series, &integral].into_iter().flatten().chain([&dispatch]).collect();
            // gap minus allowance; pass iff never positive
            let mut max_gap: f64 = 0.0;
            let mut max_excess = f64::NEG_INFINITY;
            for i in 0..routes.len() {
                for j in i + 1..routes.len() {
                    let gap = (routes[i].log_value - routes[j].log_value).norm();
                    let allowed = a.tolerance + routes[i].err_estimate + routes[j].err_estimate;
                    max_gap = max_gap.max(gap);
                    max_excess = max_excess.max(gap - allowed);
                }
            }
            let pair = |r: &Option<BarnesEvalReport>| r.as_ref().map_or(NAN_PAIR, |r| (r.log_value.re, r.log_value.im));
            let (p, s, i) = (pair(&product), pair(&series), pair(&integral));
            let cells = vec![
                p.0.into(),
                p.1.into(),
                s.0.into(),
                s.1.into(),
                i.0.into(),
                i.1.into(),
                dispatch.log_value.re.into(),
                dispatch.log_value.im.into(),
                dispatch.route.to_string().into(),
                max_gap.into(),
                max_excess.into(),
            ];
            Ok((cells, max_excess <= 0.0 || max_excess == f64::NEG_INFINITY))
        })();
        t.push_result(z_cells(z), row)?;
    }
    Ok(t)
}

fn barnes_table(meta: Metadata, a: &BarnesTable) -> Result<ResultTable, CliError> {
    let mut t = ResultTable::new(
        meta,
        &[
            ("z_re", Kind::Real),
            ("z_im", Kind::Real),
            ("log_g_re", Kind::Real),
            ("log_g_im", Kind::Real),
            ("route", Kind::Text),
            ("terms_or_nodes", Kind::Int),
            ("err_estimate", Kind::Real),
        ],
    );
    for &z in &a.z.0 {
        let row = log_barnes_g(z).map(|r| {
            let cells = vec![
                r.log_value.re.into(),
                r.log_value.im.into(),
                r.route.to_string().into(),
                (r.terms_or_nodes_used as u64).into(),
                r.err_estimate.into(),
            ];
            (cells, true)
        });
        t.push_result(z_cells(z), row)?;
    }
    Ok(t)
}

fn cue_moments(meta: Metadata, a: &CueMoments) -> Result<ResultTable, CliError> {
    let scaling = match a.scaling {
        Scaling::None => MomentScaling::None,
        Scaling::NToLambdaSq => MomentScaling::NToLambdaSq,
        Scaling::NToHalfLambdaSq => MomentScaling::NToHalfLambdaSq,
    };
    let mut t = ResultTable::new(
        meta,
        &[
            ("n", Kind::Int),
            ("lambda_re", Kind::Real),
            ("lambda_im", Kind::Real),
            ("log_moment_re", Kind::Real),
            ("log_moment_im", Kind::Real),
        ],
    );
    for &n in &a.n.0 {
        for &lambda in &a.lambda.0 {
            let q = MomentQuery {
                n_dim: n,
                exponent: lambda,
                scaling,
            };
            let row = q.log_value().map(|v| (vec![v.re.into(), v.im.into()], true));
            t.push_result(vec![n.into(), lambda.re.into(), lambda.im.into()], row)?;
        }
    }
    Ok(t)
}

fn cue_limit(meta: Metadata, a: &CueLimit) -> Result<ResultTable, CliError> {
    let mut t = ResultTable::new(
        meta,
        &[
            ("lambda", Kind::Real),
            ("n", Kind::Int),
            ("ratio", Kind::Real),
            ("remainder", Kind::Real),
        ],
    );
    for &lambda in &a.lambda.0 {
        let mut previous: Option<f64> = None;
        for &n in &a.n.0 {
            let log_ratio = match a.kind {
                LimitKind::Moment => log_scaled_moment_ratio(n, lambda),
                LimitKind::GammaProduct => log_gamma_product_mellin(n, lambda)
                    .and_then(|l| Ok(l - log_gamma_product_limit(lambda)?)),
            };
            let row = log_ratio.map(|l| {
                let rem = l.exp_m1().abs();
                // pass: remainder strictly below that of the previous N
                let pass = previous.is_none_or(|p| rem < p);
                previous = Some(rem);
                (vec![l.exp().into(), rem.into()], pass)
            });
            t.push_result(vec![lambda.into(), n.into()], row)?;
        }
    }
    Ok(t)
}

fn identity(
    meta: Metadata,
    a: &IdentityGrid,
    f: fn(u64, f64) -> barnesg::Result<IdentityReport>,
) -> Result<ResultTable, CliError> {
    let mut t = ResultTable::new(
        meta,
        &[
            ("n", Kind::Int),
            ("t", Kind::Real),
            ("lhs_log", Kind::Real),
            ("rhs_log", Kind::Real),
            ("residual", Kind::Real),
            ("tolerance", Kind::Real),
        ],
    );
    for &n in &a.n.0 {
        for &x in &a.t.0 {
            let row = f(n, x).map(|r| {
                let cells = vec![r.lhs_log.into(), r.rhs_log.into(), r.residual.into(), r.tolerance.into()];
                (cells, r.pass)
            });
            t.push_result(vec![n.into(), x.into()], row)?;
        }
    }
    Ok(t)
}

fn check_table(meta: Metadata) -> ResultTable {
    ResultTable::new(
        meta,
        &[
            ("check", Kind::Text),
            ("value", Kind::Real),
            ("reference", Kind::Real),
            ("std_error", Kind::Real),
            ("threshold", Kind::Real),
        ],
    )
}

/// Moment row: passes when `|mean - reference| ≤ sigmas · SE`.
fn push_moment(t: &mut ResultTable, name: String, stats: barnesg::Result<SampleStats>, reference: f64, sigmas: f64) -> Result<(), CliError> {
    let row = stats.map(|s| {
        let threshold = sigmas * s.std_error;
        let pass = (s.mean - reference).abs() <= threshold;
        (vec![s.mean.into(), reference.into(), s.std_error.into(), threshold.into()], pass)
    });
    t.push_result(vec![name.into()], row)
}

fn verify_haar(meta: Metadata, a: &VerifyHaar, seed: u64) -> Result<ResultTable, CliError> {
    let mut t = check_table(meta);
    let n = a.n;
    let mut haar_rng = RngStream::new(seed, 0);
    let haar: Vec<f64> = (0..a.samples)
        .map(|_| sample_haar_abs_det(n, &mut haar_rng))
        .collect::<barnesg::Result<_>>()?;
    let mut beta_rng = RngStream::new(seed, 1);
    let log_beta: Vec<f64> = (0..a.samples)
        .map(|_| log_sample_abs_z_beta(n as u64, &mut beta_rng))
        .collect::<barnesg::Result<_>>()?;
    let beta: Vec<f64> = log_beta.iter().map(|x| x.exp()).collect();

    let second = (n + 1) as f64;
    push_moment(&mut t, "haar E|Z|^2".into(), empirical_mellin(&haar, 2.0), second, a.sigmas)?;
    let first = log_moment_abs_t(n as u64, ComplexScalar::new(1.0, 0.0))?.re.exp();
    push_moment(&mut t, "haar E|Z|".into(), empirical_mellin(&haar, 1.0), first, a.sigmas)?;
    push_moment(&mut t, "beta-product E|Z|^2".into(), empirical_mellin(&beta, 2.0), second, a.sigmas)?;
    push_moment(&mut t, "beta-product E|Z|".into(), empirical_mellin(&beta, 1.0), first, a.sigmas)?;

    let log_haar: Vec<f64> = haar.iter().map(|x| x.ln()).collect();
    let crit = ks_critical_value(a.alpha, a.samples, Some(a.samples));
    let row = ks_two_sample(&log_haar, &log_beta).map(|d| {
        (vec![d.into(), 0.0.into(), f64::NAN.into(), crit.into()], d < crit)
    });
    t.push_result(vec!["two-sample KS haar vs beta-product".into()], row)?;
    Ok(t)
}

fn verify_q(meta: Metadata, a: &VerifyQ, seed: u64) -> Result<ResultTable, CliError> {
    let mut t = check_table(meta);
    let mass = q_total_mass(&QuadratureSpec::with_target(1e-13)).map(|(m, err)| {
        (vec![m.into(), 1.0.into(), err.into(), 1e-10.into()], (m - 1.0).abs() <= 1e-10)
    });
    t.push_result(vec!["density mass".into()], mass)?;

    let mut rng = RngStream::new(seed, 0);
    let draws: Vec<f64> = (0..a.samples).map(|_| sample_q(&mut rng)).collect::<barnesg::Result<_>>()?;
    for &s in &a.s.0 {
        // (3/π²) Γ(s+3) ζ(s+2)
        let reference = (|| -> barnesg::Result<f64> {
            let lg = barnesg::num_core::log_gamma_real(s + 3.0)?;
            Ok(3.0 / (std::f64::consts::PI * std::f64::consts::PI) * lg.exp() * barnesg::num_core::zeta(s + 2.0)?)
        })();
        match reference {
            Ok(r) => push_moment(&mut t, format!("E[Q^{s}]"), empirical_mellin(&draws, s), r, a.sigmas)?,
            Err(e) => t.push_error(vec![format!("E[Q^{s}]").into()], e.to_string())?,
        }
    }
    let crit = ks_critical_value(a.alpha, a.samples, None);
    let row = ks_one_sample(&draws, q_cdf).map(|d| (vec![d.into(), 0.0.into(), f64::NAN.into(), crit.into()], d < crit));
    t.push_result(vec!["one-sample KS vs density".into()], row)?;
    Ok(t)
}

/// `mass:location` pairs separated by commas.
pub fn parse_measure(s: &str) -> Result<ThorinMeasure, CliError> {
    let mut atoms = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (w, x) = part
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("atom {part:?} must be mass:location")))?;
        let w: f64 = w.trim().parse().map_err(|_| CliError::Config(format!("bad mass in {part:?}")))?;
        let x: f64 = x.trim().parse().map_err(|_| CliError::Config(format!("bad location in {part:?}")))?;
        atoms.push((w, x));
    }
    if atoms.is_empty() {
        return Err(CliError::Config("measure needs at least one atom".into()));
    }
    ThorinMeasure::atomic(atoms).map_err(|e| CliError::Config(e.to_string()))
}

fn ggc_h(meta: Metadata, a: &GgcH) -> Result<ResultTable, CliError> {
    let mu = parse_measure(&a.measure)?;
    let modes: Vec<HConstantMode> = match a.mode {
        ModeChoice::OnePlusGamma => vec![HConstantMode::OnePlusGamma],
        ModeChoice::Gamma => vec![HConstantMode::Gamma],
        ModeChoice::Both => HConstantMode::ALL.to_vec(),
    };
    let mut t = ResultTable::new(
        meta,
        &[
            ("lambda", Kind::Real),
            ("mode", Kind::Text),
            ("log_h", Kind::Real),
            ("h", Kind::Real),
            ("integral_err", Kind::Real),
        ],
    );
    for &lambda in &a.lambda.0 {
        for &mode in &modes {
            let row = (|| -> barnesg::Result<(Vec<Cell>, bool)> {
                let log_h = log_h_lambda(&mu, lambda, mode)?;
                let (_, err) = h_integral(&mu, lambda)?;
                Ok((vec![log_h.into(), log_h.exp().into(), err.into()], true))
            })();
            t.push_result(vec![lambda.into(), mode.to_string().into()], row)?;
        }
    }
    Ok(t)
}

fn ggc_limit(meta: Metadata, a: &GgcLimit) -> Result<ResultTable, CliError> {
    let mu = parse_measure(&a.measure)?;
    let mut t = ResultTable::new(
        meta,
        &[
            ("lambda", Kind::Real),
            ("n", Kind::Int),
            ("log_sn", Kind::Real),
            ("log_h_one_plus_gamma", Kind::Real),
            ("log_h_gamma", Kind::Real),
            ("extrapolation_error", Kind::Real),
            ("one_plus_gamma_matches", Kind::Bool),
            ("gamma_matches", Kind::Bool),
        ],
    );
    for &lambda in &a.lambda.0 {
        let hs = log_h_lambda(&mu, lambda, HConstantMode::OnePlusGamma)
            .and_then(|p| Ok((p, log_h_lambda(&mu, lambda, HConstantMode::Gamma)?)));
        let mut previous: Option<f64> = None;
        for &n in &a.n.0 {
            let row = (|| -> barnesg::Result<(Vec<Cell>, bool)> {
                let (h_one, h_gamma) = hs.clone()?;
                let q = SnQuery {
                    measure: mu.clone(),
                    n_max: n,
                    lambda,
                };
                let sn = log_scaled_laplace_sn(&q)?;
                // a mode matches within 10× the change since the previous N
                let err = previous.map_or(f64::NAN, |p| (sn - p).abs());
                previous = Some(sn);
                let pm = (sn - h_one).abs() <= 10.0 * err;
                let cm = (sn - h_gamma).abs() <= 10.0 * err;
                let pass = err.is_nan() || (pm != cm);
                Ok((
                    vec![sn.into(), h_one.into(), h_gamma.into(), err.into(), pm.into(), cm.into()],
                    pass,
                ))
            })();
            t.push_result(vec![lambda.into(), n.into()], row)?;
        }
    }
    Ok(t)
}

fn ggc_rn(meta: Metadata, a: &GgcRn) -> Result<ResultTable, CliError> {
    let mut t = ResultTable::new(
        meta,
        &[
            ("xi", Kind::Real),
            ("lambda", Kind::Real),
            ("n", Kind::Int),
            ("r_n", Kind::Real),
            ("gap", Kind::Real),
            ("limit_estimate", Kind::Real),
            ("minus_half_lambda_sq_over_xi_sq", Kind::Real),
        ],
    );
    for &lambda in &a.lambda.0 {
        let mut prev: Option<(u64, f64)> = None;
        let mut prev_gap: Option<f64> = None;
        let target = -lambda * lambda / (2.0 * a.xi * a.xi);
        for &n in &a.n.0 {
            let row = rn_probe(a.xi, lambda, n).map(|v| {
                let (gap, limit) = match prev {
                    Some((pn, pv)) => {
                        let ratio = n as f64 / pn as f64;
                        ((v - pv).abs(), v + (v - pv) / (ratio - 1.0))
                    }
                    None => (f64::NAN, f64::NAN),
                };
                // successive gaps must shrink by at least 2×
                let pass = match prev_gap {
                    Some(g) if !gap.is_nan() => gap <= 0.5 * g,
                    _ => true,
                };
                prev = Some((n, v));
                if !gap.is_nan() {
                    prev_gap = Some(gap);
                }
                (vec![v.into(), gap.into(), limit.into(), target.into()], pass)
            });
            t.push_result(vec![a.xi.into(), lambda.into(), n.into()], row)?;
        }
    }
    Ok(t)
}

fn ggc_double_sum(meta: Metadata, a: &GgcDoubleSum) -> Result<ResultTable, CliError> {
    let mut t = ResultTable::new(
        meta,
        &[
            ("n", Kind::Int),
            ("integral", Kind::Real),
            ("closed_form", Kind::Real),
            ("difference", Kind::Real),
            ("remainder", Kind::Real),
        ],
    );
    for &n in &a.n.0 {
        let row = (|| -> barnesg::Result<(Vec<Cell>, bool)> {
            let q = double_sum_integral(n)?;
            let c = double_sum_closed_form(n)?;
            let r = double_sum_remainder(n)?;
            let d = q - c;
            Ok((vec![q.into(), c.into(), d.into(), r.into()], d.abs() <= a.tolerance))
        })();
        t.push_result(vec![n.into()], row)?;
    }
    Ok(t)
}

fn factor_arithmetic(meta: Metadata, a: &FactorArithmetic) -> Result<ResultTable, CliError> {
    let mut t = ResultTable::new(
        meta,
        &[
            ("lambda", Kind::Real),
            ("p_max", Kind::Int),
            ("value", Kind::Real),
            ("log_value", Kind::Real),
        ],
    );
    for &lambda in &a.lambda.0 {
        for &p in &a.p_max.0 {
            let row = log_arithmetic_factor(lambda, p).map(|l| (vec![l.exp().into(), l.into()], true));
            t.push_result(vec![lambda.into(), p.into()], row)?;
        }
    }
    Ok(t)
}
