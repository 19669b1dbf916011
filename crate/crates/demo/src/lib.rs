//! Browser bindings: three JSON-in, JSON-out operations over the core
//! pipeline, thin enough to test natively and ship through wasm-bindgen.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::wasm_bindgen;

use bdp_bounds::bounds::{
    alpha_lower_rate, two_sided_certificate, weak_ergodic_certificate, BoundCertificate, Claim,
    DiffInit, DiffNorm, Direction,
};
use bdp_bounds::lognorm::{coefficient_profile, ProfileKind};
use bdp_bounds::model::{BdpSpec, QueuePreset};
use bdp_bounds::oracle::{integrate_kolmogorov, mean_value};
use bdp_bounds::rates::RateFunction;
use bdp_bounds::weights::{
    preset_weights, traffic_intensity, PresetFeasibility, PresetRule, WeightKind, WeightSequence,
};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Scenario {
    preset: String,
    #[serde(default)]
    s: Option<usize>,
    #[serde(default = "default_trunc")]
    k_trunc: usize,
    a: RateSpec,
    b: RateSpec,
    #[serde(default)]
    epsilon: Option<f64>,
    #[serde(default = "default_horizon")]
    horizon: f64,
    #[serde(default = "default_points")]
    points: usize,
    #[serde(default)]
    initial_state: usize,
    /// Evaluation time for frozen quantities.
    #[serde(default)]
    time: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RateSpec {
    mean: f64,
    #[serde(default)]
    amplitude: f64,
    #[serde(default = "default_period")]
    period: f64,
}

fn default_trunc() -> usize {
    120
}

fn default_horizon() -> f64 {
    8.0
}

fn default_points() -> usize {
    81
}

fn default_period() -> f64 {
    1.0
}

fn fail(message: String) -> String {
    #[derive(Serialize)]
    struct ErrorBody {
        ok: bool,
        error: String,
    }
    serde_json::to_string(&ErrorBody {
        ok: false,
        error: message,
    })
    .unwrap_or_else(|_| "{\"ok\":false,\"error\":\"serialization\"}".into())
}

fn done(value: &impl Serialize) -> String {
    serde_json::to_string(value).unwrap_or_else(|e| fail(format!("serialize: {e}")))
}

impl Scenario {
    fn rate(spec: &RateSpec) -> Result<RateFunction, String> {
        if spec.amplitude == 0.0 {
            RateFunction::constant(spec.mean)
        } else {
            RateFunction::sinusoid(spec.mean, spec.amplitude, spec.period)
        }
        .map_err(|e| e.to_string())
    }

    fn build(&self) -> Result<BdpSpec, String> {
        if self.points < 2 || self.points > 4000 {
            return Err("points must lie in 2..=4000".into());
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err("horizon must be positive".into());
        }
        let a = Self::rate(&self.a)?;
        let b = Self::rate(&self.b)?;
        let k_trunc = self.k_trunc.clamp(2, 2000);
        BdpSpec::preset(&self.preset, self.s, a, b, k_trunc).map_err(|e| e.to_string())
    }

    fn weights(&self, spec: &BdpSpec) -> Result<(WeightSequence, PresetFeasibility), String> {
        let rho = traffic_intensity(spec);
        let rule = match spec.preset_kind() {
            Some(QueuePreset::Mm1) => {
                if rho < 1.0 {
                    PresetRule::Mm1Underloaded
                } else {
                    PresetRule::Mm1Overloaded
                }
            }
            Some(QueuePreset::Mms { .. }) => {
                if rho < 1.0 {
                    PresetRule::MmsUnderloaded
                } else {
                    PresetRule::MmsOverloaded
                }
            }
            Some(QueuePreset::Discouragement { .. }) => PresetRule::Discouragement {
                epsilon: self.epsilon.unwrap_or(0.5),
            },
            Some(QueuePreset::ErlangLoss { .. }) => PresetRule::ErlangUnit,
            None => return Err("unknown preset".into()),
        };
        preset_weights(spec, rule).map_err(|e| e.to_string())
    }

    fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| self.horizon * i as f64 / n as f64)
            .collect()
    }
}

#[derive(Serialize)]
struct EnvelopeCurve {
    id: String,
    direction: &'static str,
    prefactor: f64,
    rate_mean: f64,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct EnvelopeBody {
    ok: bool,
    rho: f64,
    kind: &'static str,
    l_mean: f64,
    curves: Vec<EnvelopeCurve>,
}

fn decay_certificates(
    spec: &BdpSpec,
    w: &WeightSequence,
    feas: &PresetFeasibility,
) -> Result<(Vec<BoundCertificate>, &'static str, f64), String> {
    let mut certs = Vec::new();
    let (kind, l_mean) = match feas {
        PresetFeasibility::Ergodic(f) => {
            let (l1d, l1) = weak_ergodic_certificate(spec, f, w);
            certs.push(l1d);
            certs.push(l1);
            ("ergodic", f.drift_mean)
        }
        PresetFeasibility::Null(f) => {
            let built =
                bdp_bounds::bounds::null_ergodic_certificate(spec, f, w, &[], &[])
                    .map_err(|e| e.to_string())?;
            certs.extend(built);
            ("null", f.drift_mean)
        }
        PresetFeasibility::Direct => {
            let rate = alpha_lower_rate(spec, w);
            let l_mean = rate.mean(spec);
            certs.push(BoundCertificate {
                statement_id: "direct_l1d".into(),
                direction: Direction::Upper,
                rate,
                prefactor: 1.0,
                claim: Claim::Difference {
                    norm: DiffNorm::L1d,
                    init: DiffInit::SameNorm,
                    ordered: false,
                },
                hypotheses: vec!["weights valid by construction".into()],
            });
            ("direct", l_mean)
        }
    };
    if spec.is_finite() && w.kind() == WeightKind::Triangular {
        certs.extend(two_sided_certificate(spec, w).map_err(|e| e.to_string())?);
    }
    Ok((certs, kind, l_mean))
}

fn envelope_impl(request: &str) -> Result<EnvelopeBody, String> {
    let scenario: Scenario = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let spec = scenario.build()?;
    let (w, feas) = scenario.weights(&spec)?;
    let (certs, kind, l_mean) = decay_certificates(&spec, &w, &feas)?;
    let grid = scenario.grid();
    let curves = certs
        .iter()
        .map(|c| {
            let values = grid
                .iter()
                .map(|&t| Ok([t, c.envelope(&spec, 0.0, t).map_err(|e| e.to_string())?]))
                .collect::<Result<Vec<_>, String>>()?;
            Ok(EnvelopeCurve {
                id: c.statement_id.clone(),
                direction: match c.direction {
                    Direction::Upper => "upper",
                    Direction::Lower => "lower",
                },
                prefactor: c.prefactor,
                rate_mean: c.rate.mean(&spec),
                values,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(EnvelopeBody {
        ok: true,
        rho: traffic_intensity(&spec),
        kind,
        l_mean,
        curves,
    })
}

#[derive(Serialize)]
struct ProfileBody {
    ok: bool,
    time: f64,
    kind: &'static str,
    alpha: ProfileCurve,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta: Option<ProfileCurve>,
}

#[derive(Serialize)]
struct ProfileCurve {
    values: Vec<f64>,
    inf: f64,
    sup: f64,
    limit: Option<f64>,
}

fn profile_impl(request: &str) -> Result<ProfileBody, String> {
    let scenario: Scenario = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let spec = scenario.build()?;
    let (w, _) = scenario.weights(&spec)?;
    let to_curve = |kind: ProfileKind| -> Result<ProfileCurve, String> {
        let p = coefficient_profile(&spec, &w, kind, scenario.time).map_err(|e| e.to_string())?;
        Ok(ProfileCurve {
            values: p.values,
            inf: p.inf,
            sup: p.sup,
            limit: p.limit,
        })
    };
    Ok(match w.kind() {
        WeightKind::Triangular => ProfileBody {
            ok: true,
            time: scenario.time,
            kind: "triangular",
            alpha: to_curve(ProfileKind::Alpha)?,
            zeta: Some(to_curve(ProfileKind::Zeta)?),
        },
        WeightKind::Diagonal => ProfileBody {
            ok: true,
            time: scenario.time,
            kind: "diagonal",
            alpha: to_curve(ProfileKind::AlphaNull)?,
            zeta: None,
        },
    })
}

#[derive(Serialize)]
struct SnapshotBody {
    ok: bool,
    times: Vec<f64>,
    mean: Vec<f64>,
    snapshot_times: Vec<f64>,
    snapshots: Vec<Vec<f64>>,
    max_mass_defect: f64,
}

fn snapshots_impl(request: &str) -> Result<SnapshotBody, String> {
    let scenario: Scenario = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let spec = scenario.build()?;
    let dim = spec.dim();
    if scenario.initial_state >= dim {
        return Err(format!(
            "initial_state {} outside 0..{}",
            scenario.initial_state, dim
        ));
    }
    let mut p0 = vec![0.0; dim];
    p0[scenario.initial_state] = 1.0;
    let grid = scenario.grid();
    let traj = integrate_kolmogorov(&spec, &p0, &grid, 1e-8).map_err(|e| e.to_string())?;
    let mean: Vec<f64> = (0..traj.len()).map(|i| mean_value(traj.state(i))).collect();
    let take = 9.min(traj.len());
    let picks: Vec<usize> = (0..take)
        .map(|i| i * (traj.len() - 1) / (take - 1).max(1))
        .collect();
    Ok(SnapshotBody {
        ok: true,
        times: traj.times().to_vec(),
        mean,
        snapshot_times: picks.iter().map(|&i| traj.times()[i]).collect(),
        snapshots: picks.iter().map(|&i| traj.state(i).to_vec()).collect(),
        max_mass_defect: traj.max_mass_defect(),
    })
}

/// Decay envelopes for a preset scenario: JSON request in, JSON out.
#[wasm_bindgen]
pub fn decay_envelope(request: &str) -> String {
    match envelope_impl(request) {
        Ok(body) => done(&body),
        Err(e) => fail(e),
    }
}

/// Per-state drift coefficients alpha_k (and zeta_k for triangular
/// weights) at a frozen time.
#[wasm_bindgen]
pub fn coefficient_profiles(request: &str) -> String {
    match profile_impl(request) {
        Ok(body) => done(&body),
        Err(e) => fail(e),
    }
}

/// Transient distributions from a point mass plus the mean curve.
#[wasm_bindgen]
pub fn distribution_snapshots(request: &str) -> String {
    match snapshots_impl(request) {
        Ok(body) => done(&body),
        Err(e) => fail(e),
    }
}
