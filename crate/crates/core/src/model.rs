//! Birth-death process specifications and their generator matrices.
//!
//! Intensities factor into a constant state profile and a shared time
//! profile: lambda_n(t) = lambda_n a(t), mu_n(t) = mu_n b(t). The
//! forward Kolmogorov system for the column vector p(t) reads
//!
//! ```text
//! dp/dt = A(t) p,    A[n+1][n] = lambda_n a(t),  A[n-1][n] = mu_n b(t),
//! ```
//!
//! with diagonal entries making every column sum to zero. Eliminating
//! p_0 = 1 - sum_{i>=1} p_i yields the reduced system dz/dt = B(t) z +
//! f(t) on states 1..N, and similarity transforms D B D^{-1} (upper
//! triangular D) or D A D^{-1} (diagonal D) restore sign structure that
//! the l1 logarithmic norm can exploit.
//!
//! Infinite state spaces are truncated at `k_trunc` with a reflecting
//! boundary (the top birth rate is dropped when building matrices); the
//! untruncated rate sequence stays available to the weight and profile
//! machinery through [`BdpSpec::birth_rate`].

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::RateFunction;
use crate::weights::{WeightKind, WeightSequence};

/// Default truncation level for infinite state spaces.
pub const DEFAULT_K_TRUNC: usize = 200;

/// Finite state space {0..n} or truncated infinite one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpace {
    Finite { n: usize },
    Infinite { k_trunc: usize },
}

/// Built-in queueing models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueuePreset {
    /// Single server: lambda_n = 1, mu_n = 1.
    Mm1,
    /// s servers: lambda_n = 1, mu_n = min(n, s).
    Mms { s: usize },
    /// Arrivals discouraged beyond s: lambda_n = 1 for n < s and
    /// 1/(n - s + 2) after; mu_n = min(n, s).
    Discouragement { s: usize },
    /// Erlang loss (finite, N = s): lambda_n = 1 below s, mu_n = n.
    ErlangLoss { s: usize },
}

/// A validated birth-death process specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BdpSpec {
    state_space: StateSpace,
    /// Untruncated lambda_n for n = 0..=top (zero at top when finite).
    birth: Vec<f64>,
    /// mu_n for n = 0..=top, mu_0 = 0.
    death: Vec<f64>,
    /// Limit of lambda_n (finite case: lambda_{N-1}).
    birth_limit: f64,
    /// Limit of mu_n (finite case: mu_N).
    death_limit: f64,
    a: RateFunction,
    b: RateFunction,
    preset: Option<QueuePreset>,
}

impl BdpSpec {
    /// Build a specification from explicit rate sequences. For finite
    /// spaces the limits are taken from the boundary rates; infinite
    /// spaces must supply them.
    pub fn new(
        state_space: StateSpace,
        birth: Vec<f64>,
        death: Vec<f64>,
        limits: Option<(f64, f64)>,
        a: RateFunction,
        b: RateFunction,
    ) -> Result<Self> {
        let top = match state_space {
            StateSpace::Finite { n } => n,
            StateSpace::Infinite { k_trunc } => k_trunc,
        };
        if top < 1 {
            return Err(Error::InvalidParameter(
                "state space needs at least states {0, 1}".into(),
            ));
        }
        let dim = top + 1;
        if birth.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: birth.len(),
            });
        }
        if death.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: death.len(),
            });
        }
        if death[0] != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mu_0 must be zero, got {}",
                death[0]
            )));
        }
        for n in 0..top {
            if !(birth[n] > 0.0 && birth[n].is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "lambda_{n} must be positive, got {}",
                    birth[n]
                )));
            }
        }
        for n in 1..dim {
            if !(death[n] > 0.0 && death[n].is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "mu_{n} must be positive, got {}",
                    death[n]
                )));
            }
        }
        let (birth_limit, death_limit) = match state_space {
            StateSpace::Finite { n } => {
                if birth[n] != 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "finite space requires lambda_N = 0, got {}",
                        birth[n]
                    )));
                }
                if let Some((bl, dl)) = limits {
                    if bl != birth[n - 1] || dl != death[n] {
                        return Err(Error::InvalidParameter(
                            "finite limits must equal the boundary rates".into(),
                        ));
                    }
                }
                (birth[n - 1], death[n])
            }
            StateSpace::Infinite { k_trunc } => {
                if !(birth[k_trunc] > 0.0) {
                    return Err(Error::InvalidParameter(
                        "truncated spaces keep the untruncated top birth rate".into(),
                    ));
                }
                let (bl, dl) = limits.ok_or_else(|| {
                    Error::InvalidParameter("infinite spaces must supply rate limits".into())
                })?;
                if !(bl.is_finite() && bl >= 0.0 && dl.is_finite() && dl > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "rate limits must be finite with mu-limit positive, got ({bl}, {dl})"
                    )));
                }
                (bl, dl)
            }
        };
        Ok(BdpSpec {
            state_space,
            birth,
            death,
            birth_limit,
            death_limit,
            a,
            b,
            preset: None,
        })
    }

    /// Single-server queue, truncated at `k_trunc`.
    pub fn mm1(a: RateFunction, b: RateFunction, k_trunc: usize) -> Result<Self> {
        let dim = k_trunc + 1;
        let mut death = vec![1.0; dim];
        death[0] = 0.0;
        let mut spec = Self::new(
            StateSpace::Infinite { k_trunc },
            vec![1.0; dim],
            death,
            Some((1.0, 1.0)),
            a,
            b,
        )?;
        spec.preset = Some(QueuePreset::Mm1);
        Ok(spec)
    }

    /// s-server queue, truncated at `k_trunc`.
    pub fn mms(s: usize, a: RateFunction, b: RateFunction, k_trunc: usize) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidParameter("mms needs s >= 1".into()));
        }
        let dim = k_trunc + 1;
        let death = (0..dim).map(|n| n.min(s) as f64).collect();
        let mut spec = Self::new(
            StateSpace::Infinite { k_trunc },
            vec![1.0; dim],
            death,
            Some((1.0, s as f64)),
            a,
            b,
        )?;
        spec.preset = Some(QueuePreset::Mms { s });
        Ok(spec)
    }

    /// Queue with discouraged arrivals, truncated at `k_trunc`.
    pub fn discouragement(
        s: usize,
        a: RateFunction,
        b: RateFunction,
        k_trunc: usize,
    ) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidParameter("discouragement needs s >= 1".into()));
        }
        let dim = k_trunc + 1;
        let birth = (0..dim)
            .map(|n| {
                if n < s {
                    1.0
                } else {
                    1.0 / (n - s + 2) as f64
                }
            })
            .collect();
        let death = (0..dim).map(|n| n.min(s) as f64).collect();
        let mut spec = Self::new(
            StateSpace::Infinite { k_trunc },
            birth,
            death,
            Some((0.0, s as f64)),
            a,
            b,
        )?;
        spec.preset = Some(QueuePreset::Discouragement { s });
        Ok(spec)
    }

    /// Erlang loss system: finite space {0..s}, no queueing.
    pub fn erlang_loss(s: usize, a: RateFunction, b: RateFunction) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidParameter("erlang loss needs s >= 1".into()));
        }
        let dim = s + 1;
        let mut birth = vec![1.0; dim];
        birth[s] = 0.0;
        let death = (0..dim).map(|n| n as f64).collect();
        let mut spec = Self::new(StateSpace::Finite { n: s }, birth, death, None, a, b)?;
        spec.preset = Some(QueuePreset::ErlangLoss { s });
        Ok(spec)
    }

    /// String-keyed preset dispatch (used by the CLI layer).
    pub fn preset(
        name: &str,
        s: Option<usize>,
        a: RateFunction,
        b: RateFunction,
        k_trunc: usize,
    ) -> Result<Self> {
        let need_s = || {
            s.ok_or_else(|| Error::InvalidParameter(format!("preset {name} needs a server count")))
        };
        match name {
            "mm1" => Self::mm1(a, b, k_trunc),
            "mms" => Self::mms(need_s()?, a, b, k_trunc),
            "discouragement" => Self::discouragement(need_s()?, a, b, k_trunc),
            "mmss" | "erlang_loss" => Self::erlang_loss(need_s()?, a, b),
            other => Err(Error::UnknownPreset(other.into())),
        }
    }

    pub fn state_space(&self) -> StateSpace {
        self.state_space
    }

    pub fn preset_kind(&self) -> Option<QueuePreset> {
        self.preset
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.state_space, StateSpace::Finite { .. })
    }

    /// Largest represented state.
    pub fn top(&self) -> usize {
        match self.state_space {
            StateSpace::Finite { n } => n,
            StateSpace::Infinite { k_trunc } => k_trunc,
        }
    }

    /// Number of represented states (top + 1).
    pub fn dim(&self) -> usize {
        self.top() + 1
    }

    /// Untruncated lambda_n; beyond the stored range the limit applies.
    pub fn birth_rate(&self, n: usize) -> f64 {
        if n < self.birth.len() {
            self.birth[n]
        } else {
            self.birth_limit
        }
    }

    /// mu_n; beyond the stored range the limit applies.
    pub fn death_rate(&self, n: usize) -> f64 {
        if n < self.death.len() {
            self.death[n]
        } else {
            self.death_limit
        }
    }

    /// lambda_n as used by the truncated generator (zero at the top).
    pub fn effective_birth(&self, n: usize) -> f64 {
        if n >= self.top() {
            0.0
        } else {
            self.birth[n]
        }
    }

    pub fn birth_limit(&self) -> f64 {
        self.birth_limit
    }

    pub fn death_limit(&self) -> f64 {
        self.death_limit
    }

    pub fn a(&self) -> &RateFunction {
        &self.a
    }

    pub fn b(&self) -> &RateFunction {
        &self.b
    }

    /// Forward Kolmogorov generator A(t) on the represented states,
    /// column convention: column n carries the outflow of state n.
    /// Every column sums to zero exactly (the diagonal is computed as
    /// the negated sum of its off-diagonal entries).
    pub fn build_a(&self, t: f64) -> Result<DMatrix<f64>> {
        let av = self.a.evaluate(t)?;
        let bv = self.b.evaluate(t)?;
        let dim = self.dim();
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for n in 0..dim {
            let lam = self.effective_birth(n) * av;
            let mu = self.death[n] * bv;
            m[(n, n)] = -(lam + mu);
            if n + 1 < dim {
                m[(n + 1, n)] = lam;
            }
            if n > 0 {
                m[(n - 1, n)] = mu;
            }
        }
        Ok(m)
    }

    /// Reduced system on states 1..=top after eliminating p_0:
    /// dz/dt = B(t) z + f(t) with B[i][j] = A[i][j] - A[i][0] and
    /// f_i = A[i][0] (indices on the full matrix).
    pub fn build_b(&self, t: f64) -> Result<(DMatrix<f64>, DVector<f64>)> {
        let a = self.build_a(t)?;
        let n = self.top();
        let mut b = DMatrix::<f64>::zeros(n, n);
        let mut f = DVector::<f64>::zeros(n);
        for r in 0..n {
            let base = a[(r + 1, 0)];
            f[r] = base;
            for c in 0..n {
                b[(r, c)] = a[(r + 1, c + 1)] - base;
            }
        }
        Ok((b, f))
    }

    /// Closed form of the weight-transformed matrix: D B(t) D^{-1} for
    /// triangular weights (size top x top), D A(t) D^{-1} for diagonal
    /// weights (size dim x dim). Uses untruncated birth rates; on
    /// truncated spaces the numerically transformed matrix differs in
    /// its last column, where the reflecting boundary zeroes the top
    /// birth rate.
    pub fn build_transformed(&self, w: &WeightSequence, t: f64) -> Result<DMatrix<f64>> {
        let av = self.a.evaluate(t)?;
        let bv = self.b.evaluate(t)?;
        match w.kind() {
            WeightKind::Triangular => {
                let n = self.top();
                let mut m = DMatrix::<f64>::zeros(n, n);
                for k in 0..n {
                    m[(k, k)] = -(self.birth_rate(k) * av + self.death_rate(k + 1) * bv);
                    if k + 1 < n {
                        m[(k, k + 1)] = self.death_rate(k + 1) * bv / w.delta(k + 1);
                        m[(k + 1, k)] = w.delta(k + 1) * self.birth_rate(k + 1) * av;
                    }
                }
                Ok(m)
            }
            WeightKind::Diagonal => {
                let dim = self.dim();
                let mut m = DMatrix::<f64>::zeros(dim, dim);
                for k in 0..dim {
                    m[(k, k)] = -(self.birth_rate(k) * av + self.death_rate(k) * bv);
                    if k + 1 < dim {
                        m[(k + 1, k)] = w.delta(k + 1) * self.birth_rate(k) * av;
                        m[(k, k + 1)] = self.death_rate(k + 1) * bv / w.delta(k + 1);
                    }
                }
                Ok(m)
            }
        }
    }

    /// Detailed-balance stationary vector of the truncated chain.
    /// Defined for constant rate multipliers only.
    pub fn stationary_vector(&self) -> Result<Vec<f64>> {
        let (av, bv) = self.constant_rates()?;
        if !(av > 0.0 && bv > 0.0) {
            return Err(Error::InvalidParameter(
                "stationary vector needs positive constant rates".into(),
            ));
        }
        let dim = self.dim();
        let mut logw = vec![0.0_f64; dim];
        for n in 1..dim {
            let lam = self.effective_birth(n - 1) * av;
            let mu = self.death[n] * bv;
            logw[n] = logw[n - 1] + (lam / mu).ln();
        }
        let m = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut w: Vec<f64> = logw.iter().map(|l| (l - m).exp()).collect();
        let total: f64 = w.iter().sum();
        for v in &mut w {
            *v /= total;
        }
        Ok(w)
    }

    /// Constant multiplier values, when both rate functions are constant.
    pub fn constant_rates(&self) -> Result<(f64, f64)> {
        let get = |f: &RateFunction| -> Result<f64> {
            match (f.periodic_part(), f.vanishing_part()) {
                (crate::rates::PeriodicForm::Constant { value }, crate::rates::VanishingForm::Zero) => {
                    Ok(*value)
                }
                _ => Err(Error::InvalidParameter(
                    "operation requires constant rate multipliers".into(),
                )),
            }
        };
        Ok((get(&self.a)?, get(&self.b)?))
    }
}
