//! Run configuration: a single JSON file describing the model, the rate
//! functions, the weight strategy, and the requested analyses.

use std::path::PathBuf;

use serde::Deserialize;

use bdp_bounds::model::{BdpSpec, QueuePreset, StateSpace};
use bdp_bounds::rates::RateFunction;
use bdp_bounds::weights::{
    find_ergodic_weights, find_null_weights, preset_weights, traffic_intensity, DeltaPick,
    DriftParams, PresetFeasibility, PresetRule, WeightKind, WeightSequence,
};

use crate::Failure;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: ModelConfig,
    pub rates: RatesConfig,
    pub weights: WeightStrategy,
    /// Extra analyses folded into a run; `verify` implies `bounds`
    /// implies `feasibility`, and the list must respect that closure.
    #[serde(default)]
    pub analyses: Vec<Analysis>,
    pub horizon: f64,
    pub grid_points: usize,
    #[serde(default = "default_tol")]
    pub tol_ode: f64,
    /// Point-mass start used by null, mean, and Cesaro runs.
    #[serde(default)]
    pub initial_state: usize,
    /// Time at which frozen spectra are taken.
    #[serde(default)]
    pub freeze_time: f64,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

fn default_tol() -> f64 {
    1e-9
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default)]
    pub k_trunc: Option<usize>,
    /// Explicit coefficient tables, used when no preset is given.
    #[serde(default)]
    pub birth: Option<Vec<f64>>,
    #[serde(default)]
    pub death: Option<Vec<f64>>,
    #[serde(default)]
    pub birth_limit: Option<f64>,
    #[serde(default)]
    pub death_limit: Option<f64>,
    #[serde(default)]
    pub finite: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    pub a: RateFunction,
    pub b: RateFunction,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightStrategy {
    /// Pick the queue rule matching the preset and traffic intensity.
    Auto,
    Preset {
        rule: RuleConfig,
    },
    Explicit {
        kind: WeightKindConfig,
        deltas: Vec<f64>,
        #[serde(default)]
        tail_delta: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKindConfig {
    Triangular,
    Diagonal,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleConfig {
    Mm1Underloaded,
    Mm1Overloaded,
    MmsUnderloaded,
    MmsOverloaded,
    Discouragement { epsilon: f64 },
    ErlangUnit,
    ErlangContracting,
}

impl From<RuleConfig> for PresetRule {
    fn from(r: RuleConfig) -> Self {
        match r {
            RuleConfig::Mm1Underloaded => PresetRule::Mm1Underloaded,
            RuleConfig::Mm1Overloaded => PresetRule::Mm1Overloaded,
            RuleConfig::MmsUnderloaded => PresetRule::MmsUnderloaded,
            RuleConfig::MmsOverloaded => PresetRule::MmsOverloaded,
            RuleConfig::Discouragement { epsilon } => PresetRule::Discouragement { epsilon },
            RuleConfig::ErlangUnit => PresetRule::ErlangUnit,
            RuleConfig::ErlangContracting => PresetRule::ErlangContracting,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Feasibility,
    Bounds,
    Verify,
    Spectrum,
    Cesaro,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Rho,
    Epsilon,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        let fail = |msg: String| Err(Failure::Config(msg));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            ));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return fail(format!("horizon: must be positive, got {}", self.horizon));
        }
        if self.grid_points < 2 {
            return fail(format!(
                "grid_points: need at least 2, got {}",
                self.grid_points
            ));
        }
        if !(self.tol_ode > 0.0 && self.tol_ode.is_finite()) {
            return fail(format!("tol_ode: must be positive, got {}", self.tol_ode));
        }
        if self.freeze_time < 0.0 {
            return fail(format!(
                "freeze_time: must be nonnegative, got {}",
                self.freeze_time
            ));
        }
        let has = |a: Analysis| self.analyses.contains(&a);
        if has(Analysis::Verify) && !has(Analysis::Bounds) {
            return fail("analyses: verify requires bounds".into());
        }
        if has(Analysis::Bounds) && !has(Analysis::Feasibility) {
            return fail("analyses: bounds requires feasibility".into());
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return fail("sweep.values: must not be empty".into());
            }
            for v in &sweep.values {
                if !(v.is_finite() && *v > 0.0) {
                    return fail(format!("sweep.values: must be positive, got {v}"));
                }
            }
        }
        match &self.model.preset {
            Some(_) => {
                if self.model.birth.is_some() || self.model.death.is_some() {
                    return fail("model: give either a preset or explicit tables, not both".into());
                }
            }
            None => {
                if self.model.birth.is_none() || self.model.death.is_none() {
                    return fail("model: explicit tables need both birth and death".into());
                }
            }
        }
        Ok(())
    }

    /// The uniform output grid 0..horizon.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points - 1;
        (0..=n)
            .map(|i| self.horizon * i as f64 / n as f64)
            .collect()
    }

    pub fn build_spec(&self, trunc_override: Option<usize>) -> Result<BdpSpec, Failure> {
        let config_err = |e: bdp_bounds::Error| Failure::Config(format!("model: {e}"));
        let a = revalidate(&self.rates.a).map_err(|e| Failure::Config(format!("rates.a: {e}")))?;
        let b = revalidate(&self.rates.b).map_err(|e| Failure::Config(format!("rates.b: {e}")))?;
        match &self.model.preset {
            Some(name) => {
                let k_trunc = trunc_override
                    .or(self.model.k_trunc)
                    .unwrap_or(DEFAULT_TRUNC);
                BdpSpec::preset(name, self.model.s, a, b, k_trunc).map_err(config_err)
            }
            None => {
                if trunc_override.is_some() {
                    return Err(Failure::Config(
                        "--trunc cannot rescale explicit coefficient tables".into(),
                    ));
                }
                let birth = self.model.birth.clone().unwrap();
                let death = self.model.death.clone().unwrap();
                let top = birth.len().saturating_sub(1);
                let finite = self.model.finite.unwrap_or(true);
                let space = if finite {
                    StateSpace::Finite { n: top }
                } else {
                    StateSpace::Infinite { k_trunc: top }
                };
                let limits = match (self.model.birth_limit, self.model.death_limit) {
                    (Some(lam), Some(mu)) => Some((lam, mu)),
                    (None, None) => None,
                    _ => {
                        return Err(Failure::Config(
                            "model: give both birth_limit and death_limit or neither".into(),
                        ))
                    }
                };
                BdpSpec::new(space, birth, death, limits, a, b).map_err(config_err)
            }
        }
    }

    /// Resolve the weight strategy. Construction failures here mean the
    /// feasibility conditions reject the scenario.
    pub fn build_weights(
        &self,
        spec: &BdpSpec,
    ) -> Result<(WeightSequence, PresetFeasibility), Failure> {
        let infeasible = |e: bdp_bounds::Error| Failure::Infeasible(e.to_string());
        match &self.weights {
            WeightStrategy::Preset { rule } => {
                preset_weights(spec, (*rule).into()).map_err(infeasible)
            }
            WeightStrategy::Auto => auto_weights(spec),
            WeightStrategy::Explicit {
                kind,
                deltas,
                tail_delta,
            } => {
                let kind = match kind {
                    WeightKindConfig::Triangular => WeightKind::Triangular,
                    WeightKindConfig::Diagonal => WeightKind::Diagonal,
                };
                let w = WeightSequence::new(kind, deltas.clone(), *tail_delta)
                    .map_err(|e| Failure::Config(format!("weights: {e}")))?;
                Ok((w, PresetFeasibility::Direct))
            }
        }
    }
}

pub const DEFAULT_TRUNC: usize = 200;

/// Serde fills the fields directly, so rebuild through the validating
/// constructor to reject negative or malformed rates.
fn revalidate(r: &RateFunction) -> bdp_bounds::Result<RateFunction> {
    RateFunction::new(
        r.periodic_part().clone(),
        r.vanishing_part().clone(),
        r.period(),
    )
}

fn auto_weights(spec: &BdpSpec) -> Result<(WeightSequence, PresetFeasibility), Failure> {
    let infeasible = |e: bdp_bounds::Error| Failure::Infeasible(e.to_string());
    let rho = traffic_intensity(spec);
    match spec.preset_kind() {
        Some(QueuePreset::Mm1) => {
            let rule = if rho < 1.0 {
                PresetRule::Mm1Underloaded
            } else {
                PresetRule::Mm1Overloaded
            };
            preset_weights(spec, rule).map_err(infeasible)
        }
        Some(QueuePreset::Mms { .. }) => {
            let rule = if rho < 1.0 {
                PresetRule::MmsUnderloaded
            } else {
                PresetRule::MmsOverloaded
            };
            preset_weights(spec, rule).map_err(infeasible)
        }
        Some(QueuePreset::Discouragement { .. }) => {
            preset_weights(spec, PresetRule::Discouragement { epsilon: 0.5 }).map_err(infeasible)
        }
        Some(QueuePreset::ErlangLoss { .. }) => {
            preset_weights(spec, PresetRule::ErlangUnit).map_err(infeasible)
        }
        None => {
            let ergodic = find_ergodic_weights(spec, DriftParams::default(), DeltaPick::Geometric);
            match ergodic {
                Ok((feas, w)) => Ok((w, PresetFeasibility::Ergodic(feas))),
                Err(first) => {
                    match find_null_weights(spec, DriftParams::default(), DeltaPick::Geometric) {
                        Ok((feas, w)) => Ok((w, PresetFeasibility::Null(feas))),
                        Err(second) => Err(Failure::Infeasible(format!(
                            "no automatic weights: ergodic route: {first}; null route: {second}"
                        ))),
                    }
                }
            }
        }
    }
}
