//! Weight sequences and drift feasibility.
//!
//! A positive sequence d_0 = 1, d_k = delta_1 ... delta_k defines the
//! transform D (upper triangular with rows d_k, or diagonal). The free
//! ratios delta_k are chosen inside admissible intervals so that every
//! column sum of the transformed generator is bounded by a drift
//! function with positive mean:
//!
//! ```text
//! ergodic:  alpha_k(t) >= l(t)     = c (mu b(t) - Delta lambda a(t)),
//! null:     alpha0_k(t) >= theta(t) = c (lambda a(t) - Delta mu b(t)),
//! ```
//!
//! where lambda, mu are the birth/death rate limits and Delta > 1,
//! c in (0, 1) are tuning parameters. The admissible intervals come
//! from root sequences f_k (ergodic) and ratio sequences h_k (null);
//! parameters can be supplied or searched automatically to maximize
//! the drift mean.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::BdpSpec;

/// Relative slack for closed-interval feasibility comparisons.
const FEAS_TOL: f64 = 1e-12;

/// Shape of the weight transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// Upper-triangular D acting on the reduced system (ergodic route).
    Triangular,
    /// Diagonal D acting on the full system (null-ergodic route).
    Diagonal,
}

impl WeightKind {
    pub fn name(self) -> &'static str {
        match self {
            WeightKind::Triangular => "triangular",
            WeightKind::Diagonal => "diagonal",
        }
    }
}

/// A validated positive weight sequence with its derived quantities.
#[derive(Debug, Clone, Serialize)]
pub struct WeightSequence {
    kind: WeightKind,
    /// delta_k for k = 1..=stored.
    delta: Vec<f64>,
    /// Ratio applied beyond the stored prefix; `None` on finite spaces.
    tail_delta: Option<f64>,
    /// d_k for k = 0..=stored.
    d: Vec<f64>,
    /// q_i = d_0 + ... + d_{i-1} for i = 0..=stored (q_0 = 0).
    q: Vec<f64>,
    g: f64,
    big_g: f64,
    w_lower: f64,
}

impl WeightSequence {
    /// Build a weight sequence from the ratios delta_1.. and an optional
    /// tail ratio for the states beyond the stored prefix.
    pub fn new(kind: WeightKind, delta: Vec<f64>, tail_delta: impl Into<Option<f64>>) -> Result<Self> {
        let tail_delta = tail_delta.into();
        if delta.is_empty() {
            return Err(Error::InvalidParameter("empty weight sequence".into()));
        }
        for (i, dl) in delta.iter().enumerate() {
            if !(dl.is_finite() && *dl > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "delta_{} must be positive, got {dl}",
                    i + 1
                )));
            }
        }
        if let Some(td) = tail_delta {
            if !(td.is_finite() && td > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "tail delta must be positive, got {td}"
                )));
            }
        }
        let mut d = Vec::with_capacity(delta.len() + 1);
        d.push(1.0);
        for dl in &delta {
            let next = d.last().unwrap() * dl;
            if !(next.is_finite() && next > 0.0) {
                return Err(Error::InvalidParameter(
                    "weight products overflow or underflow".into(),
                ));
            }
            d.push(next);
        }
        let mut q = Vec::with_capacity(d.len());
        q.push(0.0);
        let mut acc = 0.0;
        for v in &d[..d.len() - 1] {
            acc += v;
            q.push(acc);
        }

        let stored_min = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let stored_max = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (g, big_g) = match tail_delta {
            Some(td) if td < 1.0 => (0.0, stored_max),
            Some(td) if td > 1.0 => (stored_min, f64::INFINITY),
            _ => (stored_min, stored_max),
        };
        let mut w_lower = f64::INFINITY;
        for i in 1..q.len() {
            w_lower = w_lower.min(q[i] / i as f64);
        }
        match tail_delta {
            None => {}
            Some(td) if td >= 1.0 => w_lower = w_lower.min(d[d.len() - 1]),
            Some(_) => w_lower = 0.0,
        }
        Ok(WeightSequence {
            kind,
            delta,
            tail_delta,
            d,
            q,
            g,
            big_g,
            w_lower,
        })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Number of stored ratios.
    pub fn stored(&self) -> usize {
        self.delta.len()
    }

    pub fn tail_delta(&self) -> Option<f64> {
        self.tail_delta
    }

    /// delta_k with the conventions delta_0 = 0 and tail continuation.
    pub fn delta(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else if k <= self.delta.len() {
            self.delta[k - 1]
        } else {
            self.tail_delta.unwrap_or(1.0)
        }
    }

    /// d_k = product of the first k ratios (tail-extended).
    pub fn d(&self, k: usize) -> f64 {
        if k < self.d.len() {
            self.d[k]
        } else {
            let last = self.d[self.d.len() - 1];
            let td = self.tail_delta.unwrap_or(1.0);
            last * td.powi((k + 1 - self.d.len()) as i32)
        }
    }

    /// q_i = d_0 + ... + d_{i-1} (tail-extended).
    pub fn q(&self, i: usize) -> f64 {
        if i < self.q.len() {
            self.q[i]
        } else {
            let mut acc = self.q[self.q.len() - 1];
            for k in self.q.len()..=i {
                acc += self.d(k - 1);
            }
            acc
        }
    }

    /// Certified infimum of d_k over k >= 0 (zero when the tail shrinks).
    pub fn g(&self) -> f64 {
        self.g
    }

    /// Certified supremum of d_k (infinite when the tail grows).
    pub fn big_g(&self) -> f64 {
        self.big_g
    }

    /// Certified lower bound on inf_{i >= 1} q_i / i.
    pub fn w_lower(&self) -> f64 {
        self.w_lower
    }

    /// min_{i <= j} d_i, used by cumulative null bounds.
    pub fn d_min_upto(&self, j: usize) -> f64 {
        (0..=j).map(|i| self.d(i)).fold(f64::INFINITY, f64::min)
    }

    /// max_{i <= j} d_i, the norm-equivalence constant on finite spaces.
    pub fn d_max_upto(&self, j: usize) -> f64 {
        (0..=j).map(|i| self.d(i)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Ergodic-route feasibility data for fixed (Delta, c).
#[derive(Debug, Clone, Serialize)]
pub struct ErgodicFeasibility {
    pub delta_big: f64,
    pub c: f64,
    /// inf over the root sequence f_k and its limit.
    pub f_inf: f64,
    /// Mean of l(t) = c (mu b(t) - Delta lambda a(t)).
    pub drift_mean: f64,
    /// Admissible delta_k intervals for k = 1..=top.
    pub intervals: Vec<(f64, f64)>,
    /// Interval for the tail ratio (infinite spaces).
    pub tail_interval: Option<(f64, f64)>,
}

/// Null-route feasibility data for fixed (Delta, c).
#[derive(Debug, Clone, Serialize)]
pub struct NullFeasibility {
    pub delta_big: f64,
    pub c: f64,
    /// inf over the ratio sequence h_k and its limit.
    pub h_inf: f64,
    /// Mean of theta(t) = c (lambda a(t) - Delta mu b(t)).
    pub drift_mean: f64,
    pub intervals: Vec<(f64, f64)>,
    pub tail_interval: Option<(f64, f64)>,
}

/// Tuning parameters; `None` means search automatically.
#[derive(Debug, Clone, Copy, Default)]
pub struct DriftParams {
    pub delta_big: Option<f64>,
    pub c: Option<f64>,
}

impl DriftParams {
    pub fn given(delta_big: f64, c: f64) -> Self {
        DriftParams {
            delta_big: Some(delta_big),
            c: Some(c),
        }
    }

    pub fn auto() -> Self {
        DriftParams::default()
    }
}

/// How to choose delta_k inside its admissible interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaPick {
    Lower,
    Upper,
    #[default]
    Geometric,
}

impl DeltaPick {
    fn apply(self, lo: f64, hi: f64) -> f64 {
        match self {
            DeltaPick::Lower => lo,
            DeltaPick::Upper => hi,
            DeltaPick::Geometric => (lo * hi).sqrt(),
        }
    }
}

/// Root sequence f_k for k = 0..top-1 (the k = 0 entry uses the
/// convention lambda_{-1} = 0, which collapses to mu_1 / mu).
pub fn f_sequence(spec: &BdpSpec, delta_big: f64) -> Result<Vec<f64>> {
    let lam = spec.birth_limit();
    let mu = spec.death_limit();
    if !(lam > 0.0 && mu > 0.0) {
        return Err(Error::InvalidParameter(
            "root sequence needs positive rate limits".into(),
        ));
    }
    let denom = 2.0 * delta_big * lam * mu;
    let mut out = Vec::with_capacity(spec.top());
    for k in 0..spec.top() {
        let lam_prev = if k == 0 { 0.0 } else { spec.birth_rate(k - 1) };
        let lin = delta_big * lam * spec.death_rate(k + 1) - lam_prev * mu;
        let prod = lam_prev * spec.death_rate(k + 1) - spec.birth_rate(k) * spec.death_rate(k);
        let rad = lin * lin + 4.0 * delta_big * lam * mu * prod;
        if rad < 0.0 {
            if rad > -FEAS_TOL * (1.0 + lin * lin) {
                out.push(lin.max(0.0) * 2.0 / denom / 2.0);
                continue;
            }
            return Err(Error::NegativeDiscriminant { k });
        }
        out.push((lin + rad.sqrt()) / denom);
    }
    Ok(out)
}

/// Limit of f_k when the birth limit is positive: (Delta - 1) / Delta.
pub fn f_limit(spec: &BdpSpec, delta_big: f64) -> Option<f64> {
    if spec.birth_limit() > 0.0 {
        Some((delta_big - 1.0) / delta_big)
    } else {
        None
    }
}

/// Ratio sequence h_k for k = 1..=top.
pub fn h_sequence(spec: &BdpSpec, delta_big: f64) -> Result<Vec<f64>> {
    let lam = spec.birth_limit();
    let mu = spec.death_limit();
    if !(lam > 0.0 && mu > 0.0) {
        return Err(Error::InvalidParameter(
            "ratio sequence needs positive rate limits".into(),
        ));
    }
    let denom = delta_big * lam * mu;
    Ok((1..=spec.top())
        .map(|k| (delta_big * mu * spec.birth_rate(k - 1) - lam * spec.death_rate(k)) / denom)
        .collect())
}

fn ergodic_given(spec: &BdpSpec, delta_big: f64, c: f64) -> Result<ErgodicFeasibility> {
    if !(delta_big > 1.0 && delta_big.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Delta must exceed 1, got {delta_big}"
        )));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Infeasible {
            condition: "c in (0, 1)",
            detail: format!("c = {c}"),
        });
    }
    let lam = spec.birth_limit();
    let mu = spec.death_limit();
    // monotone products: lambda_{k-1} mu_{k+1} >= lambda_k mu_k
    for k in 1..=spec.top() {
        let lhs = spec.birth_rate(k - 1) * spec.death_rate(k + 1);
        let rhs = spec.birth_rate(k) * spec.death_rate(k);
        if lhs < rhs - FEAS_TOL * (1.0 + rhs.abs()) {
            return Err(Error::Infeasible {
                condition: "monotone rate products",
                detail: format!("lambda_{} mu_{} < lambda_{k} mu_{k}", k - 1, k + 1),
            });
        }
    }
    let f_seq = f_sequence(spec, delta_big)?;
    let mut f_inf = f_limit(spec, delta_big).unwrap_or(f64::INFINITY);
    for f in &f_seq {
        f_inf = f_inf.min(*f);
    }
    if !(f_inf > 0.0) {
        return Err(Error::Infeasible {
            condition: "positive root infimum",
            detail: format!("inf f_k = {f_inf}"),
        });
    }
    let drift_mean = c * (mu * spec.b().long_run_average() - delta_big * lam * spec.a().long_run_average());
    if !(drift_mean > 0.0) {
        return Err(Error::Infeasible {
            condition: "positive drift mean",
            detail: format!("c (mu b_m - Delta lambda a_m) = {drift_mean}"),
        });
    }
    if c > f_inf * (1.0 + FEAS_TOL) + FEAS_TOL {
        return Err(Error::Infeasible {
            condition: "c <= inf f_k",
            detail: format!("c = {c}, inf f_k = {f_inf}"),
        });
    }
    if c > spec.death_rate(1) / mu * (1.0 + FEAS_TOL) + FEAS_TOL {
        return Err(Error::Infeasible {
            condition: "c <= mu_1 / mu",
            detail: format!("c = {c}, mu_1/mu = {}", spec.death_rate(1) / mu),
        });
    }
    for k in 1..=spec.top() {
        if c >= spec.death_rate(k + 1) / mu {
            return Err(Error::Infeasible {
                condition: "c < mu_{k+1} / mu",
                detail: format!("violated at k = {k}"),
            });
        }
    }
    let mut intervals = Vec::with_capacity(spec.top());
    for k in 1..=spec.top() {
        let lo = spec.death_rate(k) / (spec.death_rate(k + 1) - c * mu);
        let hi = (spec.birth_rate(k - 1) + c * delta_big * lam) / spec.birth_rate(k);
        if lo > hi * (1.0 + FEAS_TOL) {
            return Err(Error::Infeasible {
                condition: "nonempty weight interval",
                detail: format!("k = {k}: [{lo}, {hi}]"),
            });
        }
        intervals.push((lo.min(hi), hi));
    }
    let tail_interval = if spec.is_finite() {
        None
    } else {
        if !(lam > 0.0) {
            return Err(Error::Infeasible {
                condition: "positive birth limit for the tail interval",
                detail: format!("lambda limit = {lam}"),
            });
        }
        let lo = 1.0 / (1.0 - c);
        let hi = 1.0 + c * delta_big;
        if lo > hi * (1.0 + FEAS_TOL) {
            return Err(Error::Infeasible {
                condition: "nonempty tail interval",
                detail: format!("[{lo}, {hi}]"),
            });
        }
        Some((lo.min(hi), hi))
    };
    Ok(ErgodicFeasibility {
        delta_big,
        c,
        f_inf,
        drift_mean,
        intervals,
        tail_interval,
    })
}

fn null_given(spec: &BdpSpec, delta_big: f64, c: f64) -> Result<NullFeasibility> {
    if !(delta_big > 1.0 && delta_big.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Delta must exceed 1, got {delta_big}"
        )));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Infeasible {
            condition: "c in (0, 1)",
            detail: format!("c = {c}"),
        });
    }
    let lam = spec.birth_limit();
    let mu = spec.death_limit();
    let h_seq = h_sequence(spec, delta_big)?;
    let mut h_inf = (delta_big - 1.0) / delta_big;
    for h in &h_seq {
        h_inf = h_inf.min(*h);
    }
    if !(h_inf > 0.0) {
        return Err(Error::Infeasible {
            condition: "positive ratio infimum",
            detail: format!("inf h_k = {h_inf}"),
        });
    }
    let drift_mean = c * (lam * spec.a().long_run_average() - delta_big * mu * spec.b().long_run_average());
    if !(drift_mean > 0.0) {
        return Err(Error::Infeasible {
            condition: "positive drift mean",
            detail: format!("c (lambda a_m - Delta mu b_m) = {drift_mean}"),
        });
    }
    if c > h_inf * (1.0 + FEAS_TOL) + FEAS_TOL {
        return Err(Error::Infeasible {
            condition: "c <= inf h_k",
            detail: format!("c = {c}, inf h_k = {h_inf}"),
        });
    }
    for k in 0..=spec.top() {
        if c >= spec.birth_rate(k) / lam {
            return Err(Error::Infeasible {
                condition: "c < lambda_k / lambda",
                detail: format!("violated at k = {k}"),
            });
        }
    }
    let mut intervals = Vec::with_capacity(spec.top());
    for k in 1..=spec.top() {
        let lo = spec.death_rate(k) / (spec.death_rate(k + 1) + c * mu * delta_big);
        let hi = (spec.birth_rate(k - 1) - c * lam) / spec.birth_rate(k - 1);
        if lo > hi * (1.0 + FEAS_TOL) {
            return Err(Error::Infeasible {
                condition: "nonempty weight interval",
                detail: format!("k = {k}: [{lo}, {hi}]"),
            });
        }
        intervals.push((lo.min(hi), hi));
    }
    let tail_interval = if spec.is_finite() {
        None
    } else {
        let lo = 1.0 / (1.0 + c * delta_big);
        let hi = 1.0 - c;
        if lo > hi * (1.0 + FEAS_TOL) {
            return Err(Error::Infeasible {
                condition: "nonempty tail interval",
                detail: format!("[{lo}, {hi}]"),
            });
        }
        Some((lo.min(hi), hi))
    };
    Ok(NullFeasibility {
        delta_big,
        c,
        h_inf,
        drift_mean,
        intervals,
        tail_interval,
    })
}

fn weights_from_intervals(
    kind: WeightKind,
    intervals: &[(f64, f64)],
    tail_interval: Option<(f64, f64)>,
    pick: DeltaPick,
) -> Result<WeightSequence> {
    let delta: Vec<f64> = intervals.iter().map(|&(lo, hi)| pick.apply(lo, hi)).collect();
    let tail = tail_interval.map(|(lo, hi)| pick.apply(lo, hi));
    WeightSequence::new(kind, delta, tail)
}

/// Largest c admissible for the ergodic route at fixed Delta.
fn ergodic_c_cap(spec: &BdpSpec, delta_big: f64) -> Result<f64> {
    let mu = spec.death_limit();
    let f_seq = f_sequence(spec, delta_big)?;
    let mut cap = f_limit(spec, delta_big).unwrap_or(f64::INFINITY);
    for f in &f_seq {
        cap = cap.min(*f);
    }
    cap = cap.min(spec.death_rate(1) / mu);
    let mut strict = 1.0_f64;
    for k in 1..=spec.top() {
        strict = strict.min(spec.death_rate(k + 1) / mu);
    }
    Ok(cap.min(strict * (1.0 - 1e-9)).min(1.0 - 1e-9))
}

/// Largest c admissible for the null route at fixed Delta.
fn null_c_cap(spec: &BdpSpec, delta_big: f64) -> Result<f64> {
    let lam = spec.birth_limit();
    let h_seq = h_sequence(spec, delta_big)?;
    let mut cap = (delta_big - 1.0) / delta_big;
    for h in &h_seq {
        cap = cap.min(*h);
    }
    let mut strict = 1.0_f64;
    for k in 0..=spec.top() {
        strict = strict.min(spec.birth_rate(k) / lam);
    }
    Ok(cap.min(strict * (1.0 - 1e-9)).min(1.0 - 1e-9))
}

/// Golden-section maximization of a unimodal function on [lo, hi].
fn golden_max(mut lo: f64, mut hi: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol * hi.abs().max(1.0) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

const GRID: usize = 64;

fn search_params(
    spec: &BdpSpec,
    params: DriftParams,
    drift_scale: impl Fn(&BdpSpec, f64) -> f64,
    c_cap: impl Fn(&BdpSpec, f64) -> Result<f64>,
    delta_max: f64,
) -> Result<(f64, f64)> {
    if let (Some(d), Some(c)) = (params.delta_big, params.c) {
        return Ok((d, c));
    }
    let resolve_c = |d: f64| -> Option<f64> {
        match params.c {
            Some(c) => Some(c),
            None => c_cap(spec, d).ok().filter(|c| *c > 0.0),
        }
    };
    let objective = |d: f64| -> f64 {
        match resolve_c(d) {
            Some(c) if c > 0.0 => {
                let scale = drift_scale(spec, d);
                let mut best = f64::NEG_INFINITY;
                for j in 1..=GRID {
                    let cj = c * j as f64 / GRID as f64;
                    best = best.max(cj * scale);
                }
                best
            }
            _ => f64::NEG_INFINITY,
        }
    };
    if let Some(d) = params.delta_big {
        let c = resolve_c(d).ok_or(Error::Infeasible {
            condition: "admissible c at given Delta",
            detail: format!("Delta = {d}"),
        })?;
        return Ok((d, c));
    }
    let hi = if delta_max.is_finite() && delta_max > 1.0 {
        delta_max
    } else {
        8.0
    };
    let mut best = (f64::NEG_INFINITY, 0.0_f64);
    for i in 1..=GRID {
        let d = 1.0 + (hi - 1.0) * i as f64 / (GRID as f64 + 1.0);
        let v = objective(d);
        if v > best.0 {
            best = (v, d);
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Infeasible {
            condition: "automatic parameter search",
            detail: "no feasible (Delta, c) on the search grid".into(),
        });
    }
    let step = (hi - 1.0) / (GRID as f64 + 1.0);
    let lo_bracket = (best.1 - step).max(1.0 + 1e-9);
    let hi_bracket = (best.1 + step).min(hi);
    let d_star = golden_max(lo_bracket, hi_bracket, 1e-6, objective);
    let d_star = if objective(d_star) >= best.0 { d_star } else { best.1 };
    let c = resolve_c(d_star).ok_or(Error::Infeasible {
        condition: "admissible c at optimal Delta",
        detail: format!("Delta = {d_star}"),
    })?;
    Ok((d_star, c))
}

/// Determine triangular weights for the ergodic route. Feasibility
/// conditions are checked for the supplied (Delta, c); missing
/// parameters are searched to maximize the drift mean.
pub fn find_ergodic_weights(
    spec: &BdpSpec,
    params: DriftParams,
    pick: DeltaPick,
) -> Result<(ErgodicFeasibility, WeightSequence)> {
    let lam = spec.birth_limit();
    let mu = spec.death_limit();
    let am = spec.a().long_run_average();
    let bm = spec.b().long_run_average();
    let delta_max = if lam * am > 0.0 {
        mu * bm / (lam * am)
    } else {
        f64::INFINITY
    };
    let (delta_big, c) = search_params(
        spec,
        params,
        |s, d| s.death_limit() * bm - d * s.birth_limit() * am,
        ergodic_c_cap,
        delta_max,
    )?;
    let feas = ergodic_given(spec, delta_big, c)?;
    let w = weights_from_intervals(
        WeightKind::Triangular,
        &feas.intervals,
        feas.tail_interval,
        pick,
    )?;
    Ok((feas, w))
}

/// Determine diagonal weights for the null-ergodic route.
pub fn find_null_weights(
    spec: &BdpSpec,
    params: DriftParams,
    pick: DeltaPick,
) -> Result<(NullFeasibility, WeightSequence)> {
    let lam = spec.birth_limit();
    let mu = spec.death_limit();
    let am = spec.a().long_run_average();
    let bm = spec.b().long_run_average();
    let delta_max = if mu * bm > 0.0 {
        lam * am / (mu * bm)
    } else {
        f64::INFINITY
    };
    let (delta_big, c) = search_params(
        spec,
        params,
        |s, d| s.birth_limit() * am - d * s.death_limit() * bm,
        null_c_cap,
        delta_max,
    )?;
    let feas = null_given(spec, delta_big, c)?;
    let w = weights_from_intervals(
        WeightKind::Diagonal,
        &feas.intervals,
        feas.tail_interval,
        pick,
    )?;
    Ok((feas, w))
}

/// Section-specific weight rules for the built-in queues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PresetRule {
    Mm1Underloaded,
    Mm1Overloaded,
    MmsUnderloaded,
    MmsOverloaded,
    Discouragement { epsilon: f64 },
    ErlangUnit,
    ErlangContracting,
}

/// Where a preset weight sequence gets its decay rate from.
#[derive(Debug, Clone)]
pub enum PresetFeasibility {
    Ergodic(ErgodicFeasibility),
    Null(NullFeasibility),
    /// Valid by construction; drift comes from the coefficient profile.
    Direct,
}

/// Traffic intensity rho = lambda a_m / (mu b_m).
pub fn traffic_intensity(spec: &BdpSpec) -> f64 {
    spec.birth_limit() * spec.a().long_run_average()
        / (spec.death_limit() * spec.b().long_run_average())
}

/// Build the queue-specific weight sequences. The mm1/mms rules go
/// through the generic interval construction with the section's
/// (Delta, c) choices, so feasibility is certified, and the upper
/// endpoint reproduces delta_k = rho^{-1/2} where that value is
/// admissible (always for mm1, heavy traffic for mms).
pub fn preset_weights(spec: &BdpSpec, rule: PresetRule) -> Result<(WeightSequence, PresetFeasibility)> {
    use crate::model::QueuePreset as Q;
    let preset = spec.preset_kind();
    let rho = traffic_intensity(spec);
    match rule {
        PresetRule::Mm1Underloaded => {
            if !matches!(preset, Some(Q::Mm1)) {
                return Err(Error::UnknownPreset("rule needs the mm1 preset".into()));
            }
            if !(rho < 1.0 && rho > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "underloaded rule needs rho < 1, got {rho}"
                )));
            }
            let params = DriftParams::given(rho.sqrt().recip(), 1.0 - rho.sqrt());
            let (feas, w) = find_ergodic_weights(spec, params, DeltaPick::Upper)?;
            Ok((w, PresetFeasibility::Ergodic(feas)))
        }
        PresetRule::MmsUnderloaded => {
            let s = match preset {
                Some(Q::Mms { s }) => s,
                _ => return Err(Error::UnknownPreset("rule needs the mms preset".into())),
            };
            if !(rho < 1.0 && rho > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "underloaded rule needs rho < 1, got {rho}"
                )));
            }
            let heavy = rho.sqrt() >= (s as f64 - 1.0) / s as f64;
            let (c, pick) = if heavy {
                (1.0 - rho.sqrt(), DeltaPick::Upper)
            } else {
                (1.0 / s as f64, DeltaPick::Geometric)
            };
            let params = DriftParams::given(rho.sqrt().recip(), c);
            let (feas, w) = find_ergodic_weights(spec, params, pick)?;
            Ok((w, PresetFeasibility::Ergodic(feas)))
        }
        PresetRule::Mm1Overloaded | PresetRule::MmsOverloaded => {
            let ok = match rule {
                PresetRule::Mm1Overloaded => matches!(preset, Some(Q::Mm1)),
                _ => matches!(preset, Some(Q::Mms { .. })),
            };
            if !ok {
                return Err(Error::UnknownPreset("rule does not match the model preset".into()));
            }
            if !(rho > 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "overloaded rule needs rho > 1, got {rho}"
                )));
            }
            let params = DriftParams::given(rho.sqrt(), 1.0 - rho.sqrt().recip());
            let (feas, w) = find_null_weights(spec, params, DeltaPick::Upper)?;
            Ok((w, PresetFeasibility::Null(feas)))
        }
        PresetRule::Discouragement { epsilon } => {
            let s = match preset {
                Some(Q::Discouragement { s }) => s,
                _ => {
                    return Err(Error::UnknownPreset(
                        "rule needs the discouragement preset".into(),
                    ))
                }
            };
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "epsilon must lie in (0, 1), got {epsilon}"
                )));
            }
            let delta: Vec<f64> = (1..=spec.top())
                .map(|k| if k < s { 1.0 } else { 1.0 + epsilon })
                .collect();
            let w = WeightSequence::new(WeightKind::Triangular, delta, 1.0 + epsilon)?;
            Ok((w, PresetFeasibility::Direct))
        }
        PresetRule::ErlangUnit => {
            if !matches!(preset, Some(Q::ErlangLoss { .. })) {
                return Err(Error::UnknownPreset("rule needs the erlang loss preset".into()));
            }
            let w = WeightSequence::new(WeightKind::Triangular, vec![1.0; spec.top()], None)?;
            Ok((w, PresetFeasibility::Direct))
        }
        PresetRule::ErlangContracting => {
            let s = match preset {
                Some(Q::ErlangLoss { s }) => s,
                _ => return Err(Error::UnknownPreset("rule needs the erlang loss preset".into())),
            };
            if s < 2 {
                return Err(Error::InvalidParameter(
                    "contracting weights need at least two servers".into(),
                ));
            }
            let delta = (s as f64 - 1.0) / s as f64;
            let w = WeightSequence::new(WeightKind::Triangular, vec![delta; spec.top()], None)?;
            Ok((w, PresetFeasibility::Direct))
        }
    }
}
