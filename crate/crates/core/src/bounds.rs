//! Evaluable decay certificates.
//!
//! A certificate pins one inequality about the process: a decay
//! envelope for the distance of two solutions, a contraction of a
//! weighted mass, a floor on cumulative probabilities, or a bound on
//! the mean. Rates are stored symbolically as
//!
//! ```text
//! rate(t) = coef_a a(t) + coef_b b(t) + constant,
//! ```
//!
//! so envelopes integrate through the analytic machinery in `rates`
//! instead of quadrature. Coefficient-wise minima and maxima of the
//! per-state profiles stay valid pointwise because a(t), b(t) >= 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BdpSpec, QueuePreset};
use crate::weights::{ErgodicFeasibility, NullFeasibility, WeightSequence};

/// Relative burn-in level for the K constant window.
const SETTLE_LEVEL: f64 = 1e-6;
/// Grid size for the oscillation estimate behind K.
const K_GRID: usize = 10_000;
/// Safety factor applied to the oscillation exponent.
const K_SAFETY: f64 = 1.1;

/// rate(t) = coef_a a(t) + coef_b b(t) + constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolicRate {
    pub coef_a: f64,
    pub coef_b: f64,
    pub constant: f64,
}

impl SymbolicRate {
    pub const ZERO: SymbolicRate = SymbolicRate {
        coef_a: 0.0,
        coef_b: 0.0,
        constant: 0.0,
    };

    pub fn value(&self, spec: &BdpSpec, t: f64) -> Result<f64> {
        Ok(self.coef_a * spec.a().evaluate(t)?
            + self.coef_b * spec.b().evaluate(t)?
            + self.constant)
    }

    pub fn integral(&self, spec: &BdpSpec, s: f64, t: f64) -> Result<f64> {
        Ok(self.coef_a * spec.a().integrate(s, t)?
            + self.coef_b * spec.b().integrate(s, t)?
            + self.constant * (t - s))
    }

    /// Long-run average of the rate.
    pub fn mean(&self, spec: &BdpSpec) -> f64 {
        self.coef_a * spec.a().long_run_average()
            + self.coef_b * spec.b().long_run_average()
            + self.constant
    }

    fn coef_min(self, other: (f64, f64)) -> SymbolicRate {
        SymbolicRate {
            coef_a: self.coef_a.min(other.0),
            coef_b: self.coef_b.min(other.1),
            constant: self.constant,
        }
    }

    fn coef_max(self, other: (f64, f64)) -> SymbolicRate {
        SymbolicRate {
            coef_a: self.coef_a.max(other.0),
            coef_b: self.coef_b.max(other.1),
            constant: self.constant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upper,
    Lower,
}

/// Norm used for a difference-of-solutions claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffNorm {
    L1,
    L1d,
}

/// How the time-s factor of an envelope claim is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffInit {
    /// Same norm as the left-hand side.
    SameNorm,
    /// sum_i q_i |x_i| over the full vector.
    WeightedQ,
}

/// The inequality a certificate asserts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Claim {
    /// ||p1(t) - p2(t)|| vs prefactor e^{-int rate} init(s).
    Difference {
        norm: DiffNorm,
        init: DiffInit,
        /// Requires p1_i(s) <= p2_i(s) for all states i >= 1.
        ordered: bool,
    },
    /// sum_i d_i p_i(t) <= prefactor e^{-int_s^t rate}.
    WeightedMass,
    /// p_k(t) <= prefactor e^{-int_s^t rate}.
    StateProbability { k: usize },
    /// Pr(X(t) <= j | X(0) = k) <= prefactor e^{-int_0^t rate}.
    CumulativeProbability { k: usize, j: usize },
    /// Pr(X(t) <= j | X(0) = 0) >= 1 - prefactor / q_{j+1}, uniformly
    /// in t and j.
    TailFloor,
    /// ||p(t) - pi||_1 <= prefactor e^{-int rate} sum q_i |p_i(s) - pi_i|.
    StationaryDeviation { pi: Vec<f64> },
    /// E(t; start) >= start + int_0^t rate.
    MeanFloor { start: usize },
    /// E(t; 0) <= prefactor, uniformly in t.
    MeanCeiling,
    /// E(t; start) <= start e^{-int_0^t b} + int_0^t a(tau) e^{-int_tau^t b} dtau.
    MeanRelaxation { start: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub statement_id: String,
    pub direction: Direction,
    pub rate: SymbolicRate,
    pub prefactor: f64,
    pub claim: Claim,
    pub hypotheses: Vec<String>,
}

impl BoundCertificate {
    /// prefactor e^{-int_s^t rate}.
    pub fn envelope(&self, spec: &BdpSpec, s: f64, t: f64) -> Result<f64> {
        Ok(self.prefactor * (-self.rate.integral(spec, s, t)?).exp())
    }
}

/// Per-state symbolic coefficients (coef_a, coef_b) of alpha_k.
fn alpha_coefs(spec: &BdpSpec, w: &WeightSequence, k: usize) -> (f64, f64) {
    let ca = spec.birth_rate(k) - w.delta(k + 1) * spec.birth_rate(k + 1);
    let cb = spec.death_rate(k + 1)
        - if k == 0 { 0.0 } else { spec.death_rate(k) / w.delta(k) };
    (ca, cb)
}

/// Per-state symbolic coefficients of zeta_k.
fn zeta_coefs(spec: &BdpSpec, w: &WeightSequence, k: usize) -> (f64, f64) {
    let ca = spec.birth_rate(k) + w.delta(k + 1) * spec.birth_rate(k + 1);
    let cb = spec.death_rate(k + 1)
        + if k == 0 { 0.0 } else { spec.death_rate(k) / w.delta(k) };
    (ca, cb)
}

/// Coefficient-wise minimum of the alpha profile: a valid pointwise
/// lower bound on inf_k alpha_k(t).
pub fn alpha_lower_rate(spec: &BdpSpec, w: &WeightSequence) -> SymbolicRate {
    let mut rate = SymbolicRate {
        coef_a: f64::INFINITY,
        coef_b: f64::INFINITY,
        constant: 0.0,
    };
    for k in 0..spec.top() {
        rate = rate.coef_min(alpha_coefs(spec, w, k));
    }
    rate
}

/// Coefficient-wise maximum of the alpha profile (>= sup_k alpha_k(t)).
pub fn alpha_upper_rate(spec: &BdpSpec, w: &WeightSequence) -> SymbolicRate {
    let mut rate = SymbolicRate {
        coef_a: f64::NEG_INFINITY,
        coef_b: f64::NEG_INFINITY,
        constant: 0.0,
    };
    for k in 0..spec.top() {
        rate = rate.coef_max(alpha_coefs(spec, w, k));
    }
    rate
}

/// Coefficient-wise maximum of the zeta profile (>= sup_k zeta_k(t)).
pub fn zeta_upper_rate(spec: &BdpSpec, w: &WeightSequence) -> SymbolicRate {
    let mut rate = SymbolicRate {
        coef_a: f64::NEG_INFINITY,
        coef_b: f64::NEG_INFINITY,
        constant: 0.0,
    };
    for k in 0..spec.top() {
        rate = rate.coef_max(zeta_coefs(spec, w, k));
    }
    rate
}

/// l(t) = c (mu b(t) - Delta lambda a(t)).
pub fn ergodic_drift_rate(spec: &BdpSpec, feas: &ErgodicFeasibility) -> SymbolicRate {
    SymbolicRate {
        coef_a: -feas.c * feas.delta_big * spec.birth_limit(),
        coef_b: feas.c * spec.death_limit(),
        constant: 0.0,
    }
}

/// theta(t) = c (lambda a(t) - Delta mu b(t)).
pub fn null_drift_rate(spec: &BdpSpec, feas: &NullFeasibility) -> SymbolicRate {
    SymbolicRate {
        coef_a: feas.c * spec.birth_limit(),
        coef_b: -feas.c * feas.delta_big * spec.death_limit(),
        constant: 0.0,
    }
}

fn ergodic_hypotheses(feas: &ErgodicFeasibility) -> Vec<String> {
    vec![
        format!("Delta = {}", feas.delta_big),
        format!("c = {}", feas.c),
        format!("inf f_k = {}", feas.f_inf),
        format!("drift mean = {}", feas.drift_mean),
        "monotone rate products".into(),
        "nonempty weight intervals".into(),
    ]
}

fn null_hypotheses(feas: &NullFeasibility) -> Vec<String> {
    vec![
        format!("Delta = {}", feas.delta_big),
        format!("c = {}", feas.c),
        format!("inf h_k = {}", feas.h_inf),
        format!("drift mean = {}", feas.drift_mean),
        "nonempty weight intervals".into(),
    ]
}

/// Weak-ergodicity certificates: the triangular-norm contraction and
/// its l1 consequence with prefactor 4/g and a q-weighted initial term.
pub fn weak_ergodic_certificate(
    spec: &BdpSpec,
    feas: &ErgodicFeasibility,
    w: &WeightSequence,
) -> (BoundCertificate, BoundCertificate) {
    let rate = ergodic_drift_rate(spec, feas);
    let hyps = ergodic_hypotheses(feas);
    let l1d = BoundCertificate {
        statement_id: "weak_ergodic_l1d".into(),
        direction: Direction::Upper,
        rate,
        prefactor: 1.0,
        claim: Claim::Difference {
            norm: DiffNorm::L1d,
            init: DiffInit::SameNorm,
            ordered: false,
        },
        hypotheses: hyps.clone(),
    };
    let l1 = BoundCertificate {
        statement_id: "weak_ergodic_l1".into(),
        direction: Direction::Upper,
        rate,
        prefactor: 4.0 / w.g(),
        claim: Claim::Difference {
            norm: DiffNorm::L1,
            init: DiffInit::WeightedQ,
            ordered: false,
        },
        hypotheses: hyps,
    };
    (l1d, l1)
}

/// Two-sided bounds on finite state spaces: upper and lower envelopes
/// in both norms, plus lower envelopes under ordered initial data.
/// g and G range over the rows d_0 .. d_{N-1} of the triangular
/// transform acting on the reduced space.
pub fn two_sided_certificate(spec: &BdpSpec, w: &WeightSequence) -> Result<Vec<BoundCertificate>> {
    if !spec.is_finite() {
        return Err(Error::RequiresFinite);
    }
    let n = spec.top();
    let g = w.d_min_upto(n - 1);
    let big_g = w.d_max_upto(n - 1);
    let l1_factor = 4.0 * n as f64 * big_g / g;
    let alpha_low = alpha_lower_rate(spec, w);
    let alpha_high = alpha_upper_rate(spec, w);
    let zeta_high = zeta_upper_rate(spec, w);
    let hyps = vec![
        format!("finite state space, N = {n}"),
        format!("g = {g}, G = {big_g}"),
    ];
    let make = |id: &str, direction, rate, prefactor, norm, ordered| BoundCertificate {
        statement_id: id.into(),
        direction,
        rate,
        prefactor,
        claim: Claim::Difference {
            norm,
            init: DiffInit::SameNorm,
            ordered,
        },
        hypotheses: hyps.clone(),
    };
    Ok(vec![
        make("two_sided_upper_l1d", Direction::Upper, alpha_low, 1.0, DiffNorm::L1d, false),
        make("two_sided_lower_l1d", Direction::Lower, zeta_high, 1.0, DiffNorm::L1d, false),
        make("two_sided_upper_l1", Direction::Upper, alpha_low, l1_factor, DiffNorm::L1, false),
        make("two_sided_lower_l1", Direction::Lower, zeta_high, 1.0 / l1_factor, DiffNorm::L1, false),
        make("ordered_lower_l1d", Direction::Lower, alpha_high, 1.0, DiffNorm::L1d, true),
        make("ordered_lower_l1", Direction::Lower, alpha_high, 1.0 / l1_factor, DiffNorm::L1, true),
    ])
}

/// Null-ergodic certificates: weighted-mass contraction, per-state
/// ceilings for the requested states, and cumulative ceilings for the
/// requested (start, level) pairs.
pub fn null_ergodic_certificate(
    spec: &BdpSpec,
    feas: &NullFeasibility,
    w: &WeightSequence,
    states: &[usize],
    cumulative: &[(usize, usize)],
) -> Result<Vec<BoundCertificate>> {
    let rate = null_drift_rate(spec, feas);
    let big_g = w.big_g();
    if !big_g.is_finite() {
        return Err(Error::InvalidParameter(
            "null certificates need bounded weights (sup d_k < infinity)".into(),
        ));
    }
    let hyps = null_hypotheses(feas);
    let mut out = vec![BoundCertificate {
        statement_id: "null_mass".into(),
        direction: Direction::Upper,
        rate,
        prefactor: big_g,
        claim: Claim::WeightedMass,
        hypotheses: hyps.clone(),
    }];
    for &k in states {
        out.push(BoundCertificate {
            statement_id: format!("null_state_{k}"),
            direction: Direction::Upper,
            rate,
            prefactor: big_g / w.d(k),
            claim: Claim::StateProbability { k },
            hypotheses: hyps.clone(),
        });
    }
    for &(k, j) in cumulative {
        out.push(BoundCertificate {
            statement_id: format!("null_cumulative_{k}_{j}"),
            direction: Direction::Upper,
            rate,
            prefactor: w.d(k) / w.d_min_upto(j),
            claim: Claim::CumulativeProbability { k, j },
            hypotheses: hyps.clone(),
        });
    }
    Ok(out)
}

/// Constructive constant K with e^{-int_s^t rate} <= K e^{-(mean-eps)(t-s)}
/// for all 0 <= s <= t. Computed as exp of the (safety-inflated)
/// oscillation of R(u) = int_0^u (rate - mean) over a window of the
/// burn-in plus three periods; exact (K = 1) for constant rates.
pub fn k_constant(spec: &BdpSpec, rate: &SymbolicRate) -> Result<f64> {
    let mean = rate.mean(spec);
    let period = spec.a().period().max(spec.b().period());
    let settle = spec
        .a()
        .vanishing_part()
        .settle_time(SETTLE_LEVEL)
        .max(spec.b().vanishing_part().settle_time(SETTLE_LEVEL));
    let window = settle + 3.0 * period;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..=K_GRID {
        let u = window * i as f64 / K_GRID as f64;
        let r = rate.integral(spec, 0.0, u)? - mean * u;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((K_SAFETY * (hi - lo)).exp())
}

/// Tail certificate: Pr(X(t) <= j | X(0) = 0) >= 1 - prefactor / q_{j+1}
/// for every t >= 0 and every j. The prefactor is K lambda_0 a_m
/// (1 + e^x / (e^x - 1)) with x = (l_mean - eps) T_1, T_1 the period
/// of the birth modulation.
pub fn tail_certificate(
    spec: &BdpSpec,
    feas: &ErgodicFeasibility,
    w: &WeightSequence,
    eps: f64,
) -> Result<BoundCertificate> {
    if w.kind() != crate::weights::WeightKind::Triangular {
        return Err(Error::KindMismatch {
            expected: "triangular",
            got: w.kind().name(),
        });
    }
    let rate = ergodic_drift_rate(spec, feas);
    let l_mean = feas.drift_mean;
    if !(eps > 0.0 && eps < l_mean) {
        return Err(Error::EpsilonTooLarge {
            eps,
            limit: l_mean,
        });
    }
    let k_const = k_constant(spec, &rate)?;
    let x = (l_mean - eps) * spec.a().period();
    let geom = 1.0 + x.exp() / (x.exp() - 1.0);
    let prefactor = k_const * spec.birth_rate(0) * spec.a().long_run_average() * geom;
    let mut hyps = ergodic_hypotheses(feas);
    hyps.push(format!("K = {k_const}, eps = {eps}"));
    Ok(BoundCertificate {
        statement_id: "tail_floor".into(),
        direction: Direction::Lower,
        rate: SymbolicRate::ZERO,
        prefactor,
        claim: Claim::TailFloor,
        hypotheses: hyps,
    })
}

/// The floor 1 - prefactor / q_{j+1} asserted by a tail certificate
/// at level j.
pub fn tail_floor(cert: &BoundCertificate, w: &WeightSequence, j: usize) -> Result<f64> {
    match cert.claim {
        Claim::TailFloor => Ok(1.0 - cert.prefactor / w.q(j + 1)),
        _ => Err(Error::KindMismatch {
            expected: "tail floor claim",
            got: "other claim",
        }),
    }
}

/// Deviation from a stationary vector, for homogeneous instances.
pub fn ergodic_certificate(
    spec: &BdpSpec,
    feas: &ErgodicFeasibility,
    w: &WeightSequence,
    pi: &[f64],
) -> Result<BoundCertificate> {
    if spec.constant_rates().is_err() {
        return Err(Error::HypothesisUnmet(
            "stationary-deviation certificate needs constant rates".into(),
        ));
    }
    if pi.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: pi.len(),
        });
    }
    let mass: f64 = pi.iter().sum();
    if pi.iter().any(|v| *v < -1e-12) || (mass - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter("pi is not a probability vector".into()));
    }
    let mut hyps = ergodic_hypotheses(feas);
    hyps.push("stationary vector supplied".into());
    Ok(BoundCertificate {
        statement_id: "stationary_l1".into(),
        direction: Direction::Upper,
        rate: ergodic_drift_rate(spec, feas),
        prefactor: 4.0 / w.g(),
        claim: Claim::StationaryDeviation { pi: pi.to_vec() },
        hypotheses: hyps,
    })
}

/// Drift floor on the mean: E(t; k) >= k + int_0^t r with the
/// coefficient-wise minorant r of min(lambda_0(t), inf_i (lambda_i(t) - mu_i(t))).
pub fn mean_lower_certificate(spec: &BdpSpec, start: usize) -> BoundCertificate {
    let mut coef_a = spec.birth_rate(0).min(spec.birth_limit());
    let mut coef_b: f64 = 0.0;
    for i in 1..=spec.top() {
        coef_a = coef_a.min(spec.birth_rate(i));
        coef_b = coef_b.min(-spec.death_rate(i));
    }
    coef_b = coef_b.min(-spec.death_limit());
    BoundCertificate {
        statement_id: "mean_floor".into(),
        direction: Direction::Lower,
        rate: SymbolicRate {
            coef_a,
            coef_b,
            constant: 0.0,
        },
        prefactor: 1.0,
        claim: Claim::MeanFloor { start },
        hypotheses: vec!["rate infima over stored states and limits".into()],
    }
}

/// Mean ceiling from the tail machinery: E(t; 0) <= K lambda_0 a_m
/// (1 + e^x/(e^x - 1)) / W, uniformly in t.
pub fn mean_upper_tail_certificate(
    spec: &BdpSpec,
    feas: &ErgodicFeasibility,
    w: &WeightSequence,
    eps: f64,
) -> Result<BoundCertificate> {
    let tail = tail_certificate(spec, feas, w, eps)?;
    let w_low = w.w_lower();
    if !(w_low > 0.0) {
        return Err(Error::HypothesisUnmet(
            "mean ceiling needs inf q_i / i > 0".into(),
        ));
    }
    Ok(BoundCertificate {
        statement_id: "mean_ceiling".into(),
        direction: Direction::Upper,
        rate: SymbolicRate::ZERO,
        prefactor: tail.prefactor / w_low,
        claim: Claim::MeanCeiling,
        hypotheses: tail.hypotheses,
    })
}

/// Loss-system relaxation bound on the mean.
pub fn mean_upper_loss_certificate(spec: &BdpSpec, start: usize) -> Result<BoundCertificate> {
    if !matches!(spec.preset_kind(), Some(QueuePreset::ErlangLoss { .. })) {
        return Err(Error::HypothesisUnmet(
            "relaxation bound needs the erlang loss preset".into(),
        ));
    }
    Ok(BoundCertificate {
        statement_id: "mean_relaxation".into(),
        direction: Direction::Upper,
        rate: SymbolicRate::ZERO,
        prefactor: 1.0,
        claim: Claim::MeanRelaxation { start },
        hypotheses: vec!["loss system: unit arrivals below S, departures i b(t)".into()],
    })
}

/// Context for assembling every mean bound whose hypotheses hold.
pub struct MeanContext<'a> {
    pub ergodic: Option<(&'a ErgodicFeasibility, &'a WeightSequence, f64)>,
    pub start: usize,
}

pub fn mean_bounds(spec: &BdpSpec, ctx: MeanContext<'_>) -> Result<Vec<BoundCertificate>> {
    let mut out = vec![mean_lower_certificate(spec, ctx.start)];
    if let Some((feas, w, eps)) = ctx.ergodic {
        if ctx.start == 0 {
            out.push(mean_upper_tail_certificate(spec, feas, w, eps)?);
        }
    }
    if matches!(spec.preset_kind(), Some(QueuePreset::ErlangLoss { .. })) {
        out.push(mean_upper_loss_certificate(spec, ctx.start)?);
    }
    Ok(out)
}
