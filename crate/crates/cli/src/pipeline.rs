//! The analysis pipeline behind every subcommand: feasibility, then
//! certificates, then verification against the integrator, plus the
//! spectrum, Cesaro, and sweep extras.

use serde::Serialize;

use bdp_bounds::bounds::{
    alpha_lower_rate, ergodic_certificate, mean_lower_certificate, mean_upper_loss_certificate,
    mean_upper_tail_certificate, null_ergodic_certificate, tail_certificate,
    two_sided_certificate, weak_ergodic_certificate, BoundCertificate, Claim, DiffInit, DiffNorm,
    Direction,
};
use bdp_bounds::model::{BdpSpec, QueuePreset};
use bdp_bounds::oracle::{
    cesaro_average, frozen_spectrum, integrate_kolmogorov, l1_distance, spectral_gap,
};
use bdp_bounds::rates::RateFunction;
use bdp_bounds::verify::{
    all_pass, check_decay, check_means_and_tails, check_null, check_stationary,
    VerificationReport,
};
use bdp_bounds::weights::{
    preset_weights, traffic_intensity, PresetFeasibility, PresetRule, WeightKind, WeightSequence,
};

use crate::artifacts::{fmt_float, OutDir};
use crate::config::{Analysis, RunConfig, SweepParameter, SCHEMA_VERSION};
use crate::Failure;

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub model: ModelSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<FeasibilitySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cesaro: Option<CesaroSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSummary>,
}

#[derive(Serialize)]
pub struct ModelSummary {
    pub preset: Option<String>,
    pub top: usize,
    pub finite: bool,
    pub rho: Option<f64>,
}

#[derive(Serialize, Clone)]
pub struct FeasibilitySummary {
    pub schema_version: u32,
    pub kind: &'static str,
    pub rho: Option<f64>,
    pub l_mean: Option<f64>,
    pub weights: WeightSequence,
    pub details: Option<serde_json::Value>,
}

#[derive(Serialize)]
pub struct VerificationSummary {
    pub all_pass: bool,
    pub reports: Vec<VerificationReport>,
    pub skipped: Vec<String>,
}

#[derive(Serialize)]
pub struct SpectrumSummary {
    pub freeze_time: f64,
    pub count: usize,
    pub gap: f64,
}

#[derive(Serialize)]
pub struct CesaroSummary {
    pub t_half: f64,
    pub t_full: f64,
    pub l1_difference: f64,
}

#[derive(Serialize)]
pub struct SweepSummary {
    pub parameter: String,
    pub rows: usize,
}

pub struct Pipeline<'a> {
    pub config: &'a RunConfig,
    pub spec: BdpSpec,
    pub out: OutDir,
    pub quiet: bool,
}

impl Pipeline<'_> {
    fn say(&self, line: &str) {
        if !self.quiet {
            println!("{line}");
        }
    }

    pub fn model_summary(&self) -> ModelSummary {
        let rho = traffic_intensity(&self.spec);
        ModelSummary {
            preset: self.config.model.preset.clone(),
            top: self.spec.top(),
            finite: self.spec.is_finite(),
            rho: rho.is_finite().then_some(rho),
        }
    }

    pub fn feasibility(
        &self,
    ) -> Result<(WeightSequence, PresetFeasibility, FeasibilitySummary), Failure> {
        let (w, feas) = self.config.build_weights(&self.spec)?;
        let rho = traffic_intensity(&self.spec);
        let to_value = |v: &dyn erased::Feasibility| -> Result<serde_json::Value, Failure> {
            v.to_value()
                .map_err(|e| Failure::Runtime(format!("serialize feasibility: {e}")))
        };
        let (kind, l_mean, details) = match &feas {
            PresetFeasibility::Ergodic(f) => {
                ("ergodic", Some(f.drift_mean), Some(to_value(f)?))
            }
            PresetFeasibility::Null(f) => ("null", Some(f.drift_mean), Some(to_value(f)?)),
            PresetFeasibility::Direct => {
                let l_mean = (w.kind() == WeightKind::Triangular)
                    .then(|| alpha_lower_rate(&self.spec, &w).mean(&self.spec));
                ("direct", l_mean, None)
            }
        };
        let summary = FeasibilitySummary {
            schema_version: SCHEMA_VERSION,
            kind,
            rho: rho.is_finite().then_some(rho),
            l_mean,
            weights: w.clone(),
            details,
        };
        self.out.write_json("feasibility.json", &summary)?;
        self.say(&format!(
            "feasibility: {kind}, rho = {}, l_mean = {}",
            rho,
            l_mean.map_or("n/a".into(), |v| v.to_string())
        ));
        Ok((w, feas, summary))
    }

    /// Build every certificate the scenario supports. Statements whose
    /// hypotheses the scenario does not meet are skipped with a note.
    pub fn bounds(
        &self,
        w: &WeightSequence,
        feas: &PresetFeasibility,
    ) -> Result<(Vec<BoundCertificate>, Vec<String>), Failure> {
        let spec = &self.spec;
        let mut certs: Vec<BoundCertificate> = Vec::new();
        let mut skipped: Vec<String> = Vec::new();
        let mut optional = |label: &str, r: bdp_bounds::Result<BoundCertificate>| match r {
            Ok(c) => Some(c),
            Err(e) => {
                skipped.push(format!("{label}: {e}"));
                None
            }
        };
        match feas {
            PresetFeasibility::Ergodic(f) => {
                let (l1d, l1) = weak_ergodic_certificate(spec, f, w);
                certs.push(l1d);
                certs.push(l1);
                if spec.constant_rates().is_ok() {
                    let pi = spec
                        .stationary_vector()
                        .map_err(|e| Failure::Runtime(e.to_string()))?;
                    if let Some(c) = optional("stationary_l1", ergodic_certificate(spec, f, w, &pi))
                    {
                        certs.push(c);
                    }
                }
                if f.drift_mean > 0.0 {
                    let eps = 0.5 * f.drift_mean;
                    if let Some(c) = optional("tail_floor", tail_certificate(spec, f, w, eps)) {
                        certs.push(c);
                    }
                    if let Some(c) =
                        optional("mean_ceiling", mean_upper_tail_certificate(spec, f, w, eps))
                    {
                        certs.push(c);
                    }
                }
            }
            PresetFeasibility::Null(f) => {
                let top = spec.top();
                let states: Vec<usize> =
                    dedup_sorted([0, 3, 10].into_iter().filter(|k| *k <= top));
                let start = self.config.initial_state;
                let cumulative: Vec<(usize, usize)> = [0, 3, 10]
                    .into_iter()
                    .filter(|j| *j <= top)
                    .map(|j| (start, j))
                    .collect();
                let built = null_ergodic_certificate(spec, f, w, &states, &cumulative)
                    .map_err(|e| Failure::Runtime(e.to_string()))?;
                certs.extend(built);
            }
            PresetFeasibility::Direct => {
                if w.kind() != WeightKind::Triangular {
                    return Err(Failure::Config(
                        "weights: explicit diagonal weights carry no certified claims; \
                         use a preset or auto strategy"
                            .into(),
                    ));
                }
                let rate = alpha_lower_rate(spec, w);
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
            }
        }
        if !matches!(feas, PresetFeasibility::Null(_)) {
            let floor = mean_lower_certificate(spec, self.config.initial_state);
            if floor.rate.mean(spec) > 0.0 {
                certs.push(floor);
            }
        } else {
            certs.push(mean_lower_certificate(spec, self.config.initial_state));
        }
        if spec.is_finite() && w.kind() == WeightKind::Triangular {
            let two = two_sided_certificate(spec, w)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            certs.extend(two);
        }
        if matches!(spec.preset_kind(), Some(QueuePreset::ErlangLoss { .. })) {
            if let Some(c) = optional(
                "mean_relaxation",
                mean_upper_loss_certificate(spec, self.config.initial_state),
            ) {
                certs.push(c);
            }
        }

        #[derive(Serialize)]
        struct CertFile<'a> {
            schema_version: u32,
            certificates: &'a [BoundCertificate],
        }
        self.out.write_json(
            "certificates.json",
            &CertFile {
                schema_version: SCHEMA_VERSION,
                certificates: &certs,
            },
        )?;
        let grid = self.config.grid();
        for cert in &certs {
            let rows = grid.iter().map(|&t| {
                let v = cert.envelope(&self.spec, grid[0], t).unwrap_or(f64::NAN);
                vec![fmt_float(t), fmt_float(v)]
            });
            self.out.write_csv(
                &format!("envelope_{}.csv", cert.statement_id),
                &["t".into(), "envelope".into()],
                rows,
            )?;
        }
        self.say(&format!(
            "bounds: {} certificates ({} skipped)",
            certs.len(),
            skipped.len()
        ));
        Ok((certs, skipped))
    }

    pub fn verify(
        &self,
        w: &WeightSequence,
        certs: &[BoundCertificate],
        mut skipped: Vec<String>,
    ) -> Result<VerificationSummary, Failure> {
        let spec = &self.spec;
        let grid = self.config.grid();
        let tol = self.config.tol_ode;
        let run = |e: bdp_bounds::Error| Failure::Runtime(e.to_string());
        let dim = spec.dim();
        let start = self.config.initial_state.min(dim - 1);
        let pair_m = 10.min(spec.top());

        let mut difference = Vec::new();
        let mut stationary = Vec::new();
        let mut null_claims = Vec::new();
        let mut from_start = Vec::new();
        let mut from_zero = Vec::new();
        for c in certs {
            match &c.claim {
                Claim::Difference { .. } => difference.push(c.clone()),
                Claim::StationaryDeviation { .. } => stationary.push(c.clone()),
                Claim::WeightedMass
                | Claim::StateProbability { .. }
                | Claim::CumulativeProbability { .. } => null_claims.push(c.clone()),
                Claim::MeanFloor { .. } | Claim::MeanRelaxation { .. } => {
                    from_start.push(c.clone())
                }
                Claim::TailFloor | Claim::MeanCeiling => from_zero.push(c.clone()),
            }
        }

        let mut reports: Vec<VerificationReport> = Vec::new();
        let mut initials: Vec<usize> = Vec::new();
        if !difference.is_empty() || !stationary.is_empty() {
            initials.push(0);
            initials.push(pair_m);
        }
        if !null_claims.is_empty() || !from_start.is_empty() {
            initials.push(start);
        }
        if !from_zero.is_empty() {
            initials.push(0);
        }

        let p1 = point_mass(dim, 0);
        let p2 = point_mass(dim, pair_m);
        for cert in &difference {
            reports.push(check_decay(cert, spec, w, &p1, &p2, &grid, tol).map_err(run)?);
        }
        for cert in &stationary {
            reports.push(check_stationary(cert, spec, w, &p2, &grid, tol).map_err(run)?);
        }
        if !null_claims.is_empty() {
            let p0 = point_mass(dim, start);
            reports
                .extend(check_null(&null_claims, spec, w, &p0, &grid, tol).map_err(run)?);
        }
        if !from_start.is_empty() {
            let p0 = point_mass(dim, start);
            reports.extend(
                check_means_and_tails(&from_start, spec, w, &p0, &grid, tol, &[]).map_err(run)?,
            );
        }
        if !from_zero.is_empty() {
            let levels: Vec<usize> = [0, 3, 10]
                .into_iter()
                .filter(|j| *j < spec.top())
                .collect();
            reports.extend(
                check_means_and_tails(&from_zero, spec, w, &p1, &grid, tol, &levels)
                    .map_err(run)?,
            );
        }

        for k in dedup_sorted(initials.into_iter()) {
            let p0 = point_mass(dim, k);
            let traj = integrate_kolmogorov(spec, &p0, &grid, tol).map_err(run)?;
            let header: Vec<String> = std::iter::once("t".to_string())
                .chain((0..dim).map(|i| format!("p{i}")))
                .collect();
            let rows = (0..traj.len()).map(|idx| {
                let mut row = Vec::with_capacity(dim + 1);
                row.push(fmt_float(traj.times()[idx]));
                row.extend(traj.state(idx).iter().map(|&v| fmt_float(v)));
                row
            });
            self.out
                .write_csv(&format!("trajectory_delta_{k}.csv"), &header, rows)?;
        }

        if reports.is_empty() {
            skipped.push("verify: no checkable certificates".into());
        }
        for r in &reports {
            self.say(&r.summary_line());
        }
        let summary = VerificationSummary {
            all_pass: all_pass(&reports),
            reports,
            skipped,
        };
        Ok(summary)
    }

    pub fn spectrum(&self) -> Result<SpectrumSummary, Failure> {
        let t = self.config.freeze_time;
        let mut eigs = frozen_spectrum(&self.spec, None, t)
            .map_err(|e| Failure::Runtime(e.to_string()))?;
        eigs.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        let gap = spectral_gap(&eigs);
        self.out.write_csv(
            "spectrum.csv",
            &["re".into(), "im".into()],
            eigs.iter().map(|z| vec![fmt_float(z.re), fmt_float(z.im)]),
        )?;
        self.say(&format!("spectrum: {} eigenvalues, gap = {gap}", eigs.len()));
        Ok(SpectrumSummary {
            freeze_time: t,
            count: eigs.len(),
            gap,
        })
    }

    pub fn cesaro(&self) -> Result<CesaroSummary, Failure> {
        let run = |e: bdp_bounds::Error| Failure::Runtime(e.to_string());
        let grid = self.config.grid();
        let dim = self.spec.dim();
        let p0 = point_mass(dim, self.config.initial_state.min(dim - 1));
        let traj = integrate_kolmogorov(&self.spec, &p0, &grid, self.config.tol_ode).map_err(run)?;
        let t_full = self.config.horizon;
        let t_half = 0.5 * t_full;
        let half = cesaro_average(&traj, t_half).map_err(run)?;
        let full = cesaro_average(&traj, t_full).map_err(run)?;
        let diff = l1_distance(&half, &full);
        self.out.write_csv(
            "cesaro.csv",
            &[
                "state".into(),
                "average_half_horizon".into(),
                "average_full_horizon".into(),
            ],
            (0..dim).map(|i| vec![i.to_string(), fmt_float(half[i]), fmt_float(full[i])]),
        )?;
        self.say(&format!("cesaro: l1 difference {diff}"));
        Ok(CesaroSummary {
            t_half,
            t_full,
            l1_difference: diff,
        })
    }

    pub fn wants(&self, a: Analysis) -> bool {
        self.config.analyses.contains(&a)
    }
}

/// Sweep a preset family across a parameter grid, one row per value.
pub fn sweep(config: &RunConfig, out: &OutDir, quiet: bool) -> Result<SweepSummary, Failure> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| Failure::Config("sweep: missing sweep section".into()))?;
    let base = config.build_spec(None)?;
    let preset = config
        .model
        .preset
        .clone()
        .ok_or_else(|| Failure::Config("sweep: needs a preset model".into()))?;

    struct Row {
        value: f64,
        rho: f64,
        feasible: bool,
        l_mean: Option<f64>,
    }

    let rows: Vec<Row> = match sweep.parameter {
        SweepParameter::Rho => {
            if !matches!(preset.as_str(), "mm1" | "mms") {
                return Err(Failure::Config(
                    "sweep: rho sweeps need the mm1 or mms preset".into(),
                ));
            }
            let (_, b_m) = base
                .constant_rates()
                .map_err(|_| Failure::Config("sweep: rho sweeps need constant rates".into()))?;
            let servers = base.death_limit();
            let k_trunc = base.top();
            let b = base.b().clone();
            std::thread::scope(|scope| {
                let handles: Vec<_> = sweep
                    .values
                    .iter()
                    .map(|&v| {
                        let preset = preset.as_str();
                        let b = b.clone();
                        scope.spawn(move || {
                            let a_m = v * servers * b_m;
                            let a = RateFunction::constant(a_m).ok()?;
                            let spec =
                                BdpSpec::preset(preset, config.model.s, a, b, k_trunc).ok()?;
                            let rule = match (preset, v < 1.0) {
                                ("mm1", true) => PresetRule::Mm1Underloaded,
                                ("mm1", false) => PresetRule::Mm1Overloaded,
                                (_, true) => PresetRule::MmsUnderloaded,
                                (_, false) => PresetRule::MmsOverloaded,
                            };
                            let (_, feas) = preset_weights(&spec, rule).ok()?;
                            let l_mean = match feas {
                                PresetFeasibility::Ergodic(f) => f.drift_mean,
                                PresetFeasibility::Null(f) => f.drift_mean,
                                PresetFeasibility::Direct => return None,
                            };
                            Some(l_mean)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .zip(&sweep.values)
                    .map(|(h, &v)| {
                        let l_mean = h.join().expect("sweep worker panicked");
                        Row {
                            value: v,
                            rho: v,
                            feasible: l_mean.is_some(),
                            l_mean,
                        }
                    })
                    .collect()
            })
        }
        SweepParameter::Epsilon => {
            if preset != "discouragement" {
                return Err(Failure::Config(
                    "sweep: epsilon sweeps need the discouragement preset".into(),
                ));
            }
            let rho = traffic_intensity(&base);
            std::thread::scope(|scope| {
                let handles: Vec<_> = sweep
                    .values
                    .iter()
                    .map(|&eps| {
                        let spec = &base;
                        scope.spawn(move || {
                            let (w, _) =
                                preset_weights(spec, PresetRule::Discouragement { epsilon: eps })
                                    .ok()?;
                            Some(alpha_lower_rate(spec, &w).mean(spec))
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .zip(&sweep.values)
                    .map(|(h, &v)| {
                        let l_mean = h.join().expect("sweep worker panicked");
                        Row {
                            value: v,
                            rho,
                            feasible: l_mean.is_some_and(|m| m > 0.0),
                            l_mean,
                        }
                    })
                    .collect()
            })
        }
    };

    let parameter = match sweep.parameter {
        SweepParameter::Rho => "rho",
        SweepParameter::Epsilon => "epsilon",
    };
    out.write_csv(
        "sweep.csv",
        &[
            "parameter".into(),
            "value".into(),
            "rho".into(),
            "feasible".into(),
            "l_mean".into(),
        ],
        rows.iter().map(|r| {
            vec![
                parameter.to_string(),
                fmt_float(r.value),
                fmt_float(r.rho),
                if r.feasible { "1" } else { "0" }.to_string(),
                r.l_mean.map(fmt_float).unwrap_or_default(),
            ]
        }),
    )?;
    if !quiet {
        for r in &rows {
            println!(
                "sweep {parameter} = {}: {}",
                r.value,
                r.l_mean
                    .map_or("infeasible".into(), |m| format!("l_mean = {m}"))
            );
        }
    }
    Ok(SweepSummary {
        parameter: parameter.to_string(),
        rows: rows.len(),
    })
}

fn point_mass(dim: usize, k: usize) -> Vec<f64> {
    let mut p = vec![0.0; dim];
    p[k] = 1.0;
    p
}

fn dedup_sorted(values: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = values.collect();
    v.sort_unstable();
    v.dedup();
    v
}

mod erased {
    use serde::Serialize;

    /// Object-safe serialization hook for the two feasibility records.
    pub trait Feasibility {
        fn to_value(&self) -> Result<serde_json::Value, serde_json::Error>;
    }

    impl<T: Serialize> Feasibility for T {
        fn to_value(&self) -> Result<serde_json::Value, serde_json::Error> {
            serde_json::to_value(self)
        }
    }
}
