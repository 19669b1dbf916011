//! Certificate verification against integrated trajectories.
//!
//! Each check integrates the forward equations, evaluates the claimed
//! left- and right-hand sides on the time grid, and reports the signed
//! slack per time point. A check passes when the worst slack stays
//! above `-tol_verify`, where the tolerance couples the solver budget
//! and the observed truncation loss instead of hiding both behind one
//! magic epsilon.

use serde::{Deserialize, Serialize};

use crate::bounds::{tail_floor, BoundCertificate, Claim, DiffInit, DiffNorm, Direction};
use crate::error::{Error, Result};
use crate::model::BdpSpec;
use crate::oracle::{
    adaptive_simpson, integrate_kolmogorov, l1_distance, mean_value, weighted_norm, NormKind,
    Trajectory,
};
use crate::weights::{WeightKind, WeightSequence};

/// Default solver budget per unit time.
pub const DEFAULT_TOL_ODE: f64 = 1e-9;
/// Band mass above which truncated comparisons are abandoned.
pub const LOSS_THRESHOLD: f64 = 1e-6;
/// Slack allowed when checking ordered initial data.
const ORDER_TOL: f64 = 1e-12;
/// Tolerance for point-mass initial condition checks.
const POINT_MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs - lhs for upper bounds, lhs - rhs for lower bounds.
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub certificate_id: String,
    pub rows: Vec<VerificationRow>,
    pub min_slack: f64,
    pub pass: bool,
    pub tol_ode: f64,
    pub truncation_loss: f64,
    /// 100 tol_ode + 10 truncation_loss.
    pub tol_verify: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn assemble(
        certificate_id: String,
        rows: Vec<VerificationRow>,
        tol_ode: f64,
        truncation_loss: f64,
        notes: Vec<String>,
    ) -> Self {
        let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
        let tol_verify = 100.0 * tol_ode + 10.0 * truncation_loss;
        VerificationReport {
            certificate_id,
            rows,
            min_slack,
            pass: min_slack >= -tol_verify,
            tol_ode,
            truncation_loss,
            tol_verify,
            notes,
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {} (min slack {:+.3e}, tol {:.3e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.certificate_id,
            self.min_slack,
            self.tol_verify
        )
    }

    pub fn table(&self) -> String {
        let mut out = format!(
            "{:>12} {:>14} {:>14} {:>14}\n",
            "t", "lhs", "rhs", "slack"
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{:>12.6} {:>14.6e} {:>14.6e} {:>+14.6e}\n",
                row.t, row.lhs, row.rhs, row.slack
            ));
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    !reports.is_empty() && reports.iter().all(|r| r.pass)
}

fn signed_slack(direction: Direction, lhs: f64, rhs: f64) -> f64 {
    match direction {
        Direction::Upper => rhs - lhs,
        Direction::Lower => lhs - rhs,
    }
}

fn require_point_mass(p0: &[f64], k: usize) -> Result<()> {
    if k >= p0.len() || (p0[k] - 1.0).abs() > POINT_MASS_TOL {
        return Err(Error::HypothesisUnmet(format!(
            "claim conditions on X(0) = {k}; initial vector is not that point mass"
        )));
    }
    Ok(())
}

fn require_zero_start(t_grid: &[f64]) -> Result<()> {
    if t_grid.first().is_none_or(|t| t.abs() > 1e-12) {
        return Err(Error::HypothesisUnmet(
            "claim integrates its rate from 0; time grid must start there".into(),
        ));
    }
    Ok(())
}

fn difference_norm(diff: &[f64], w: &WeightSequence, norm: DiffNorm) -> Result<f64> {
    match norm {
        DiffNorm::L1 => weighted_norm(diff, w, NormKind::L1),
        DiffNorm::L1d => match w.kind() {
            WeightKind::Triangular => weighted_norm(&diff[1..], w, NormKind::L1d),
            WeightKind::Diagonal => weighted_norm(diff, w, NormKind::L1d),
        },
    }
}

fn vec_diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Verify a difference-of-solutions certificate on a pair of initial
/// distributions.
pub fn check_decay(
    cert: &BoundCertificate,
    spec: &BdpSpec,
    w: &WeightSequence,
    p1_0: &[f64],
    p2_0: &[f64],
    t_grid: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    let (norm, init, ordered) = match &cert.claim {
        Claim::Difference {
            norm,
            init,
            ordered,
        } => (*norm, *init, *ordered),
        _ => {
            return Err(Error::KindMismatch {
                expected: "difference claim",
                got: "other claim",
            })
        }
    };
    let mut notes = Vec::new();
    if ordered {
        for i in 1..p1_0.len().min(p2_0.len()) {
            if p1_0[i] > p2_0[i] + ORDER_TOL {
                return Err(Error::OrderViolation);
            }
        }
        notes.push("ordered initial data checked on states >= 1".into());
    }
    let traj1 = integrate_kolmogorov(spec, p1_0, t_grid, tol)?;
    let traj2 = integrate_kolmogorov(spec, p2_0, t_grid, tol)?;
    let s = t_grid[0];
    let diff_s = vec_diff(traj1.state(0), traj2.state(0));
    let init_term = match init {
        DiffInit::SameNorm => difference_norm(&diff_s, w, norm)?,
        DiffInit::WeightedQ => weighted_norm(&diff_s, w, NormKind::WeightedSumQ)?,
    };
    let mut rows = Vec::with_capacity(traj1.len());
    for idx in 0..traj1.len() {
        let t = traj1.times()[idx];
        let diff = vec_diff(traj1.state(idx), traj2.state(idx));
        let lhs = difference_norm(&diff, w, norm)?;
        let rhs = cert.envelope(spec, s, t)? * init_term;
        rows.push(VerificationRow {
            t,
            lhs,
            rhs,
            slack: signed_slack(cert.direction, lhs, rhs),
        });
    }
    let loss = truncation_loss(spec, &traj1).max(truncation_loss(spec, &traj2));
    Ok(VerificationReport::assemble(
        cert.statement_id.clone(),
        rows,
        tol,
        loss,
        notes,
    ))
}

/// Verify a two-sided certificate set on a finite space. Ordered
/// certificates require p1_0 <= p2_0 on states >= 1.
pub fn check_two_sided(
    certs: &[BoundCertificate],
    spec: &BdpSpec,
    w: &WeightSequence,
    p1_0: &[f64],
    p2_0: &[f64],
    t_grid: &[f64],
    tol: f64,
) -> Result<Vec<VerificationReport>> {
    certs
        .iter()
        .map(|cert| check_decay(cert, spec, w, p1_0, p2_0, t_grid, tol))
        .collect()
}

/// Verify the deviation-from-pi certificate for a homogeneous instance.
pub fn check_stationary(
    cert: &BoundCertificate,
    spec: &BdpSpec,
    w: &WeightSequence,
    p0: &[f64],
    t_grid: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    let pi = match &cert.claim {
        Claim::StationaryDeviation { pi } => pi,
        _ => {
            return Err(Error::KindMismatch {
                expected: "stationary deviation claim",
                got: "other claim",
            })
        }
    };
    let traj = integrate_kolmogorov(spec, p0, t_grid, tol)?;
    let s = t_grid[0];
    let init_term = weighted_norm(&vec_diff(traj.state(0), pi), w, NormKind::WeightedSumQ)?;
    let mut rows = Vec::with_capacity(traj.len());
    for idx in 0..traj.len() {
        let t = traj.times()[idx];
        let lhs = l1_distance(traj.state(idx), pi);
        let rhs = cert.envelope(spec, s, t)? * init_term;
        rows.push(VerificationRow {
            t,
            lhs,
            rhs,
            slack: rhs - lhs,
        });
    }
    Ok(VerificationReport::assemble(
        cert.statement_id.clone(),
        rows,
        tol,
        truncation_loss(spec, &traj),
        vec![],
    ))
}

/// Mass lost to the truncation band; finite models are exact, so only
/// truncated infinite spaces contribute.
fn truncation_loss(spec: &BdpSpec, traj: &Trajectory) -> f64 {
    if spec.is_finite() {
        0.0
    } else {
        traj.max_band_mass()
    }
}

fn guard_band(spec: &BdpSpec, traj: &Trajectory) -> Result<()> {
    let loss = truncation_loss(spec, traj);
    if loss > LOSS_THRESHOLD {
        let idx = traj
            .band_mass()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Err(Error::TruncationLoss {
            t: traj.times()[idx],
            mass: loss,
        });
    }
    Ok(())
}

/// Verify null-ergodic certificates from one initial distribution.
/// Cumulative claims additionally require p0 to be the point mass at
/// their starting state and the grid to begin at 0.
pub fn check_null(
    certs: &[BoundCertificate],
    spec: &BdpSpec,
    w: &WeightSequence,
    p0: &[f64],
    t_grid: &[f64],
    tol: f64,
) -> Result<Vec<VerificationReport>> {
    if w.kind() != WeightKind::Diagonal {
        return Err(Error::KindMismatch {
            expected: "diagonal",
            got: w.kind().name(),
        });
    }
    let traj = integrate_kolmogorov(spec, p0, t_grid, tol)?;
    guard_band(spec, &traj)?;
    let loss = truncation_loss(spec, &traj);
    let s = t_grid[0];
    let mut out = Vec::with_capacity(certs.len());
    for cert in certs {
        let mut notes = Vec::new();
        let mut rows = Vec::with_capacity(traj.len());
        match cert.claim {
            Claim::WeightedMass => {
                for idx in 0..traj.len() {
                    let t = traj.times()[idx];
                    let lhs = weighted_norm(traj.state(idx), w, NormKind::L1d)?;
                    let rhs = cert.envelope(spec, s, t)?;
                    rows.push(VerificationRow {
                        t,
                        lhs,
                        rhs,
                        slack: rhs - lhs,
                    });
                }
            }
            Claim::StateProbability { k } => {
                if k >= spec.dim() {
                    return Err(Error::OutOfRange(format!(
                        "state {k} outside the truncated space"
                    )));
                }
                for idx in 0..traj.len() {
                    let t = traj.times()[idx];
                    let lhs = traj.state(idx)[k];
                    let rhs = cert.envelope(spec, s, t)?;
                    rows.push(VerificationRow {
                        t,
                        lhs,
                        rhs,
                        slack: rhs - lhs,
                    });
                }
            }
            Claim::CumulativeProbability { k, j } => {
                require_point_mass(p0, k)?;
                require_zero_start(t_grid)?;
                if j >= spec.dim() {
                    return Err(Error::OutOfRange(format!(
                        "level {j} outside the truncated space"
                    )));
                }
                notes.push(format!("conditioned on X(0) = {k}"));
                for idx in 0..traj.len() {
                    let t = traj.times()[idx];
                    let lhs: f64 = traj.state(idx)[..=j].iter().sum();
                    let rhs = cert.envelope(spec, 0.0, t)?;
                    rows.push(VerificationRow {
                        t,
                        lhs,
                        rhs,
                        slack: rhs - lhs,
                    });
                }
            }
            _ => {
                return Err(Error::KindMismatch {
                    expected: "null-ergodic claim",
                    got: "other claim",
                })
            }
        }
        out.push(VerificationReport::assemble(
            cert.statement_id.clone(),
            rows,
            tol,
            loss,
            notes,
        ));
    }
    Ok(out)
}

/// Verify mean and tail certificates from one initial distribution.
/// Tail-floor claims are evaluated at each level in `tail_levels`.
pub fn check_means_and_tails(
    certs: &[BoundCertificate],
    spec: &BdpSpec,
    w: &WeightSequence,
    p0: &[f64],
    t_grid: &[f64],
    tol: f64,
    tail_levels: &[usize],
) -> Result<Vec<VerificationReport>> {
    let traj = integrate_kolmogorov(spec, p0, t_grid, tol)?;
    guard_band(spec, &traj)?;
    let loss = truncation_loss(spec, &traj);
    let mut out = Vec::new();
    for cert in certs {
        match &cert.claim {
            Claim::MeanFloor { start } => {
                require_point_mass(p0, *start)?;
                require_zero_start(t_grid)?;
                let mut rows = Vec::with_capacity(traj.len());
                for idx in 0..traj.len() {
                    let t = traj.times()[idx];
                    let lhs = mean_value(traj.state(idx));
                    let rhs = *start as f64 + cert.rate.integral(spec, 0.0, t)?;
                    rows.push(VerificationRow {
                        t,
                        lhs,
                        rhs,
                        slack: lhs - rhs,
                    });
                }
                out.push(VerificationReport::assemble(
                    cert.statement_id.clone(),
                    rows,
                    tol,
                    loss,
                    vec![format!("conditioned on X(0) = {start}")],
                ));
            }
            Claim::MeanCeiling => {
                require_point_mass(p0, 0)?;
                let mut rows = Vec::with_capacity(traj.len());
                for idx in 0..traj.len() {
                    let t = traj.times()[idx];
                    let lhs = mean_value(traj.state(idx));
                    let rhs = cert.prefactor;
                    rows.push(VerificationRow {
                        t,
                        lhs,
                        rhs,
                        slack: rhs - lhs,
                    });
                }
                out.push(VerificationReport::assemble(
                    cert.statement_id.clone(),
                    rows,
                    tol,
                    loss,
                    vec!["uniform-in-time ceiling".into()],
                ));
            }
            Claim::MeanRelaxation { start } => {
                require_point_mass(p0, *start)?;
                require_zero_start(t_grid)?;
                let a = spec.a().clone();
                let b = spec.b().clone();
                let mut rows = Vec::with_capacity(traj.len());
                for idx in 0..traj.len() {
                    let t = traj.times()[idx];
                    let lhs = mean_value(traj.state(idx));
                    let decay = (-b.integrate(0.0, t)?).exp();
                    let forced = if t > 0.0 {
                        adaptive_simpson(
                            |tau| {
                                let av = a.evaluate(tau).unwrap_or(f64::NAN);
                                let ex = b.integrate(tau, t).unwrap_or(f64::NAN);
                                av * (-ex).exp()
                            },
                            0.0,
                            t,
                            1e-11,
                        )
                    } else {
                        0.0
                    };
                    let rhs = *start as f64 * decay + forced;
                    rows.push(VerificationRow {
                        t,
                        lhs,
                        rhs,
                        slack: rhs - lhs,
                    });
                }
                out.push(VerificationReport::assemble(
                    cert.statement_id.clone(),
                    rows,
                    tol,
                    loss,
                    vec![format!("conditioned on X(0) = {start}")],
                ));
            }
            Claim::TailFloor => {
                require_point_mass(p0, 0)?;
                for &j in tail_levels {
                    if j >= spec.dim() {
                        return Err(Error::OutOfRange(format!(
                            "level {j} outside the truncated space"
                        )));
                    }
                    let floor = tail_floor(cert, w, j)?;
                    let mut rows = Vec::with_capacity(traj.len());
                    for idx in 0..traj.len() {
                        let t = traj.times()[idx];
                        let lhs: f64 = traj.state(idx)[..=j].iter().sum();
                        rows.push(VerificationRow {
                            t,
                            lhs,
                            rhs: floor,
                            slack: lhs - floor,
                        });
                    }
                    out.push(VerificationReport::assemble(
                        format!("{}[j={j}]", cert.statement_id),
                        rows,
                        tol,
                        loss,
                        vec!["uniform-in-time floor".into()],
                    ));
                }
            }
            _ => {
                return Err(Error::KindMismatch {
                    expected: "mean or tail claim",
                    got: "other claim",
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{
        mean_lower_certificate, mean_upper_loss_certificate, mean_upper_tail_certificate,
        null_ergodic_certificate, tail_certificate, two_sided_certificate,
        weak_ergodic_certificate, ergodic_certificate, SymbolicRate,
    };
    use crate::model::BdpSpec;
    use crate::rates::RateFunction;
    use crate::weights::{find_ergodic_weights, find_null_weights, DeltaPick, DriftParams};

    const TOL: f64 = 1e-8;

    fn constant(v: f64) -> RateFunction {
        RateFunction::constant(v).unwrap()
    }

    fn grid(hi: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| hi * i as f64 / n as f64).collect()
    }

    fn point_mass(dim: usize, k: usize) -> Vec<f64> {
        let mut p = vec![0.0; dim];
        p[k] = 1.0;
        p
    }

    #[test]
    fn weak_ergodic_pair_passes() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 30).unwrap();
        let (feas, w) =
            find_ergodic_weights(&spec, DriftParams::given(2.0, 0.5), DeltaPick::Geometric)
                .unwrap();
        let (l1d, l1) = weak_ergodic_certificate(&spec, &feas, &w);
        let p1 = point_mass(spec.dim(), 0);
        let p2 = point_mass(spec.dim(), 10);
        let t = grid(6.0, 12);
        let rep = check_decay(&l1d, &spec, &w, &p1, &p2, &t, TOL).unwrap();
        assert!(rep.pass, "{}", rep.summary_line());
        assert!(rep.rows[0].slack.abs() < 1e-12, "tight at s");
        let rep = check_decay(&l1, &spec, &w, &p1, &p2, &t, TOL).unwrap();
        assert!(rep.pass, "{}", rep.summary_line());
        assert!(rep.min_slack > 0.0);
    }

    #[test]
    fn equal_inputs_pass_trivially() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 20).unwrap();
        let (feas, w) =
            find_ergodic_weights(&spec, DriftParams::given(2.0, 0.5), DeltaPick::Geometric)
                .unwrap();
        let (l1d, _) = weak_ergodic_certificate(&spec, &feas, &w);
        let p = point_mass(spec.dim(), 0);
        let rep = check_decay(&l1d, &spec, &w, &p, &p, &grid(3.0, 6), TOL).unwrap();
        assert!(rep.pass);
        assert!(rep.rows.iter().all(|r| r.lhs < 1e-12 && r.slack > -1e-12));
    }

    #[test]
    fn inflated_rate_is_caught() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 30).unwrap();
        let (feas, w) =
            find_ergodic_weights(&spec, DriftParams::given(2.0, 0.5), DeltaPick::Geometric)
                .unwrap();
        let (mut l1d, _) = weak_ergodic_certificate(&spec, &feas, &w);
        l1d.rate = SymbolicRate {
            coef_a: 2.0 * l1d.rate.coef_a,
            coef_b: 2.0 * l1d.rate.coef_b,
            constant: 0.0,
        };
        let p1 = point_mass(spec.dim(), 0);
        let p2 = point_mass(spec.dim(), 10);
        let rep = check_decay(&l1d, &spec, &w, &p1, &p2, &grid(6.0, 12), TOL).unwrap();
        assert!(!rep.pass, "doubled rate must fail: {}", rep.summary_line());
        assert!(rep.min_slack < -1e-3);
    }

    #[test]
    fn two_sided_loss_system_passes() {
        let spec = BdpSpec::erlang_loss(3, constant(1.0), constant(1.0)).unwrap();
        let w = crate::weights::WeightSequence::new(
            WeightKind::Triangular,
            vec![1.0; 3],
            None,
        )
        .unwrap();
        let certs = two_sided_certificate(&spec, &w).unwrap();
        let p1 = point_mass(spec.dim(), 0);
        let p2 = point_mass(spec.dim(), 3);
        let reports = check_two_sided(&certs, &spec, &w, &p1, &p2, &grid(5.0, 10), TOL).unwrap();
        assert_eq!(reports.len(), 6);
        for rep in &reports {
            assert!(rep.pass, "{}", rep.summary_line());
        }
        let ordered = reports
            .iter()
            .find(|r| r.certificate_id == "ordered_lower_l1d")
            .unwrap();
        assert!(ordered.notes.iter().any(|n| n.contains("ordered")));
    }

    #[test]
    fn order_violation_is_rejected_and_l1_is_symmetric() {
        let spec = BdpSpec::erlang_loss(3, constant(1.0), constant(1.0)).unwrap();
        let w = crate::weights::WeightSequence::new(
            WeightKind::Triangular,
            vec![1.0; 3],
            None,
        )
        .unwrap();
        let certs = two_sided_certificate(&spec, &w).unwrap();
        let p1 = point_mass(spec.dim(), 3);
        let p2 = point_mass(spec.dim(), 0);
        let t = grid(4.0, 8);
        assert!(matches!(
            check_two_sided(&certs, &spec, &w, &p1, &p2, &t, TOL),
            Err(Error::OrderViolation)
        ));
        let upper = certs
            .iter()
            .find(|c| c.statement_id == "two_sided_upper_l1")
            .unwrap();
        let fwd = check_decay(upper, &spec, &w, &p2, &p1, &t, TOL).unwrap();
        let rev = check_decay(upper, &spec, &w, &p1, &p2, &t, TOL).unwrap();
        for (a, b) in fwd.rows.iter().zip(&rev.rows) {
            assert!((a.lhs - b.lhs).abs() < 1e-10);
            assert!((a.rhs - b.rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn null_certificates_hold_for_overloaded_queue() {
        let spec = BdpSpec::mm1(constant(4.0), constant(1.0), 80).unwrap();
        let (feas, w) =
            find_null_weights(&spec, DriftParams::given(2.0, 0.5), DeltaPick::Geometric).unwrap();
        let certs = null_ergodic_certificate(&spec, &feas, &w, &[0, 3], &[(0, 1)]).unwrap();
        let p0 = point_mass(spec.dim(), 0);
        let reports = check_null(&certs, &spec, &w, &p0, &grid(2.0, 8), TOL).unwrap();
        assert_eq!(reports.len(), 4);
        for rep in &reports {
            assert!(rep.pass, "{}", rep.summary_line());
        }
        let mass = &reports[0];
        assert!(mass.rows[0].slack.abs() < 1e-12, "d_0 = G at t = 0");
    }

    #[test]
    fn truncation_loss_aborts_null_checks() {
        let spec = BdpSpec::mm1(constant(4.0), constant(1.0), 12).unwrap();
        let (feas, w) =
            find_null_weights(&spec, DriftParams::given(2.0, 0.5), DeltaPick::Geometric).unwrap();
        let certs = null_ergodic_certificate(&spec, &feas, &w, &[0], &[]).unwrap();
        let p0 = point_mass(spec.dim(), 0);
        assert!(matches!(
            check_null(&certs, &spec, &w, &p0, &grid(3.0, 6), TOL),
            Err(Error::TruncationLoss { .. })
        ));
    }

    #[test]
    fn mean_floor_holds_for_overloaded_queue() {
        let spec = BdpSpec::mm1(constant(4.0), constant(1.0), 80).unwrap();
        let cert = mean_lower_certificate(&spec, 0);
        let p0 = point_mass(spec.dim(), 0);
        let w = crate::weights::WeightSequence::new(WeightKind::Diagonal, vec![0.5; 10], 0.5)
            .unwrap();
        let reports =
            check_means_and_tails(&[cert], &spec, &w, &p0, &grid(2.0, 8), TOL, &[]).unwrap();
        assert!(reports[0].pass, "{}", reports[0].summary_line());
        let last = reports[0].rows.last().unwrap();
        assert!((last.rhs - 6.0).abs() < 1e-9, "3t at t = 2");
    }

    #[test]
    fn loss_relaxation_bound_holds() {
        let spec = BdpSpec::erlang_loss(5, constant(2.0), constant(1.0)).unwrap();
        let cert = mean_upper_loss_certificate(&spec, 0).unwrap();
        let p0 = point_mass(spec.dim(), 0);
        let w = crate::weights::WeightSequence::new(
            WeightKind::Triangular,
            vec![1.0; 5],
            None,
        )
        .unwrap();
        let t = grid(4.0, 8);
        let reports = check_means_and_tails(&[cert], &spec, &w, &p0, &t, TOL, &[]).unwrap();
        assert!(reports[0].pass, "{}", reports[0].summary_line());
        let last = reports[0].rows.last().unwrap();
        let closed = 2.0 * (1.0 - (-4.0_f64).exp());
        assert!((last.rhs - closed).abs() < 1e-8, "closed-form relaxation");
    }

    #[test]
    fn tail_floor_and_mean_ceiling_hold() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 30).unwrap();
        let (feas, w) =
            find_ergodic_weights(&spec, DriftParams::given(2.0, 0.5), DeltaPick::Geometric)
                .unwrap();
        let tail = tail_certificate(&spec, &feas, &w, 0.5).unwrap();
        let ceiling = mean_upper_tail_certificate(&spec, &feas, &w, 0.5).unwrap();
        let p0 = point_mass(spec.dim(), 0);
        let reports = check_means_and_tails(
            &[tail, ceiling],
            &spec,
            &w,
            &p0,
            &grid(6.0, 12),
            TOL,
            &[0, 3],
        )
        .unwrap();
        assert_eq!(reports.len(), 3);
        for rep in &reports {
            assert!(rep.pass, "{}", rep.summary_line());
        }
        assert_eq!(reports[0].certificate_id, "tail_floor[j=0]");
    }

    #[test]
    fn stationary_deviation_bound_holds() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 30).unwrap();
        let (feas, w) =
            find_ergodic_weights(&spec, DriftParams::given(2.0, 0.5), DeltaPick::Geometric)
                .unwrap();
        let pi = spec.stationary_vector().unwrap();
        let cert = ergodic_certificate(&spec, &feas, &w, &pi).unwrap();
        let p0 = point_mass(spec.dim(), 5);
        let rep = check_stationary(&cert, &spec, &w, &p0, &grid(8.0, 16), TOL).unwrap();
        assert!(rep.pass, "{}", rep.summary_line());
        let last = rep.rows.last().unwrap();
        assert!(last.lhs < 5e-2, "relaxed close to pi by t = 8, got {}", last.lhs);
    }

    #[test]
    fn hypothesis_gates_fire() {
        let spec = BdpSpec::mm1(constant(4.0), constant(1.0), 40).unwrap();
        let cert = mean_lower_certificate(&spec, 0);
        let w = crate::weights::WeightSequence::new(WeightKind::Diagonal, vec![0.5; 5], 0.5)
            .unwrap();
        let wrong_start = point_mass(spec.dim(), 1);
        assert!(matches!(
            check_means_and_tails(std::slice::from_ref(&cert), &spec, &w, &wrong_start, &grid(1.0, 4), TOL, &[]),
            Err(Error::HypothesisUnmet(_))
        ));
        let p0 = point_mass(spec.dim(), 0);
        let late: Vec<f64> = vec![0.5, 1.0, 1.5];
        assert!(matches!(
            check_means_and_tails(&[cert], &spec, &w, &p0, &late, TOL, &[]),
            Err(Error::HypothesisUnmet(_))
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 20).unwrap();
        let (feas, w) =
            find_ergodic_weights(&spec, DriftParams::given(2.0, 0.5), DeltaPick::Geometric)
                .unwrap();
        let (l1d, _) = weak_ergodic_certificate(&spec, &feas, &w);
        let p1 = point_mass(spec.dim(), 0);
        let p2 = point_mass(spec.dim(), 5);
        let t = grid(3.0, 6);
        let a = check_decay(&l1d, &spec, &w, &p1, &p2, &t, TOL).unwrap();
        let b = check_decay(&l1d, &spec, &w, &p1, &p2, &t, TOL).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(all_pass(&[a, b]));
        assert!(!all_pass(&[]));
    }
}
