//! Asymptotically periodic rate functions.
//!
//! A rate is the sum of a periodic part and a part vanishing at infinity:
//!
//! ```text
//! f(t) = f_per(t) + f_van(t),   f_per(t + T) = f_per(t),   f_van(t) -> 0,
//! ```
//!
//! and must be nonnegative for all t >= 0. Both parts come from small
//! closed-form families so that averages and integrals are exact:
//! constants, truncated trigonometric series, periodic piecewise-linear
//! and piecewise-constant interpolants for the periodic part; zero,
//! exponential decay `c e^{-rt}`, and power decay `c (1+t)^{-p}` for the
//! vanishing part.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of validation samples per period.
const SAMPLES_PER_PERIOD: usize = 10_000;
/// Hard cap on total validation samples over the burn-in window.
const MAX_SAMPLES: usize = 10_000_000;
/// Values this far below zero are treated as rounding dust and clamped.
const NEG_DUST: f64 = 1e-12;

/// Periodic component of a rate function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum PeriodicForm {
    /// Constant value.
    Constant { value: f64 },
    /// mean + sum_j cos[j-1] cos(2 pi j t / T) + sin[j-1] sin(2 pi j t / T).
    TrigSeries {
        mean: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    /// Piecewise-linear periodic interpolant. Breakpoints start at 0,
    /// increase strictly, stay below the period, and the last segment
    /// wraps around to the first node.
    PiecewiseLinear { times: Vec<f64>, values: Vec<f64> },
    /// Piecewise-constant: value `values[i]` on `[times[i], times[i+1])`,
    /// wrapping; jump points take the right-limit value.
    PiecewiseConstant { times: Vec<f64>, values: Vec<f64> },
}

/// Vanishing component of a rate function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum VanishingForm {
    /// Identically zero.
    Zero,
    /// amplitude * exp(-rate * t), rate > 0.
    ExpDecay { amplitude: f64, rate: f64 },
    /// amplitude / (1 + t)^power, power > 0.
    PowerDecay { amplitude: f64, power: f64 },
}

fn default_period() -> f64 {
    1.0
}

/// A validated, nonnegative, asymptotically periodic rate function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateFunction {
    periodic: PeriodicForm,
    #[serde(default = "VanishingForm::zero")]
    vanishing: VanishingForm,
    #[serde(default = "default_period")]
    period: f64,
}

impl VanishingForm {
    fn zero() -> Self {
        VanishingForm::Zero
    }

    fn value(&self, t: f64) -> f64 {
        match *self {
            VanishingForm::Zero => 0.0,
            VanishingForm::ExpDecay { amplitude, rate } => amplitude * (-rate * t).exp(),
            VanishingForm::PowerDecay { amplitude, power } => amplitude / (1.0 + t).powf(power),
        }
    }

    /// Integral over [s, t].
    fn integral(&self, s: f64, t: f64) -> f64 {
        match *self {
            VanishingForm::Zero => 0.0,
            VanishingForm::ExpDecay { amplitude, rate } => {
                amplitude * ((-rate * s).exp() - (-rate * t).exp()) / rate
            }
            VanishingForm::PowerDecay { amplitude, power } => {
                if (power - 1.0).abs() < 1e-14 {
                    amplitude * ((1.0 + t) / (1.0 + s)).ln()
                } else {
                    amplitude * ((1.0 + s).powf(1.0 - power) - (1.0 + t).powf(1.0 - power))
                        / (power - 1.0)
                }
            }
        }
    }

    /// Smallest t past which |value| stays below `level`, if the form is
    /// nonzero. Monotone decay makes this a closed form.
    pub(crate) fn settle_time(&self, level: f64) -> f64 {
        match *self {
            VanishingForm::Zero => 0.0,
            VanishingForm::ExpDecay { amplitude, rate } => {
                if amplitude.abs() <= level {
                    0.0
                } else {
                    (amplitude.abs() / level).ln() / rate
                }
            }
            VanishingForm::PowerDecay { amplitude, power } => {
                if amplitude.abs() <= level {
                    0.0
                } else {
                    (amplitude.abs() / level).powf(1.0 / power) - 1.0
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            VanishingForm::Zero => true,
            VanishingForm::ExpDecay { amplitude, rate } => amplitude.is_finite() && rate > 0.0,
            VanishingForm::PowerDecay { amplitude, power } => amplitude.is_finite() && power > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidRate(format!(
                "vanishing part has nonpositive decay or nonfinite amplitude: {self:?}"
            )))
        }
    }
}

impl PeriodicForm {
    fn validate(&self, period: f64) -> Result<()> {
        match self {
            PeriodicForm::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidRate("nonfinite constant".into()));
                }
            }
            PeriodicForm::TrigSeries { mean, cos, sin } => {
                if !mean.is_finite()
                    || cos.iter().any(|c| !c.is_finite())
                    || sin.iter().any(|c| !c.is_finite())
                {
                    return Err(Error::InvalidRate("nonfinite trig coefficient".into()));
                }
            }
            PeriodicForm::PiecewiseLinear { times, values }
            | PeriodicForm::PiecewiseConstant { times, values } => {
                if times.is_empty() || times.len() != values.len() {
                    return Err(Error::InvalidRate(
                        "piecewise form needs equally many times and values".into(),
                    ));
                }
                if times[0] != 0.0 {
                    return Err(Error::InvalidRate(
                        "piecewise breakpoints must start at 0".into(),
                    ));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidRate(
                        "piecewise breakpoints must increase strictly".into(),
                    ));
                }
                if *times.last().unwrap() >= period {
                    return Err(Error::InvalidRate(
                        "piecewise breakpoints must stay below the period".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidRate("nonfinite piecewise value".into()));
                }
            }
        }
        Ok(())
    }

    /// Value at phase u in [0, period).
    fn value_at_phase(&self, u: f64, period: f64) -> f64 {
        match self {
            PeriodicForm::Constant { value } => *value,
            PeriodicForm::TrigSeries { mean, cos, sin } => {
                let w = 2.0 * std::f64::consts::PI / period;
                let mut v = *mean;
                for (j, c) in cos.iter().enumerate() {
                    v += c * (w * (j as f64 + 1.0) * u).cos();
                }
                for (j, c) in sin.iter().enumerate() {
                    v += c * (w * (j as f64 + 1.0) * u).sin();
                }
                v
            }
            PeriodicForm::PiecewiseLinear { times, values } => {
                let (t0, v0, t1, v1) = segment(times, values, u, period);
                v0 + (v1 - v0) * (u - t0) / (t1 - t0)
            }
            PeriodicForm::PiecewiseConstant { times, values } => {
                let idx = match times.binary_search_by(|t| t.partial_cmp(&u).unwrap()) {
                    Ok(i) => i,
                    Err(i) => i - 1,
                };
                values[idx]
            }
        }
    }

    /// Integral of one full period.
    fn period_integral(&self, period: f64) -> f64 {
        match self {
            PeriodicForm::Constant { value } => value * period,
            PeriodicForm::TrigSeries { mean, .. } => mean * period,
            PeriodicForm::PiecewiseLinear { times, values } => {
                let n = times.len();
                let mut area = 0.0;
                for i in 0..n {
                    let (t0, v0) = (times[i], values[i]);
                    let (t1, v1) = if i + 1 < n {
                        (times[i + 1], values[i + 1])
                    } else {
                        (period, values[0])
                    };
                    area += 0.5 * (v0 + v1) * (t1 - t0);
                }
                area
            }
            PeriodicForm::PiecewiseConstant { times, values } => {
                let n = times.len();
                let mut area = 0.0;
                for i in 0..n {
                    let t1 = if i + 1 < n { times[i + 1] } else { period };
                    area += values[i] * (t1 - times[i]);
                }
                area
            }
        }
    }

    /// Integral from phase 0 to phase u, u in [0, period].
    fn partial_integral(&self, u: f64, period: f64) -> f64 {
        match self {
            PeriodicForm::Constant { value } => value * u,
            PeriodicForm::TrigSeries { mean, cos, sin } => {
                let w = 2.0 * std::f64::consts::PI / period;
                let mut v = mean * u;
                for (j, c) in cos.iter().enumerate() {
                    let wj = w * (j as f64 + 1.0);
                    v += c * (wj * u).sin() / wj;
                }
                for (j, c) in sin.iter().enumerate() {
                    let wj = w * (j as f64 + 1.0);
                    v += c * (1.0 - (wj * u).cos()) / wj;
                }
                v
            }
            PeriodicForm::PiecewiseLinear { times, values } => {
                let n = times.len();
                let mut area = 0.0;
                for i in 0..n {
                    let (t0, v0) = (times[i], values[i]);
                    let (t1, v1) = if i + 1 < n {
                        (times[i + 1], values[i + 1])
                    } else {
                        (period, values[0])
                    };
                    if u <= t0 {
                        break;
                    }
                    let hi = u.min(t1);
                    let vh = v0 + (v1 - v0) * (hi - t0) / (t1 - t0);
                    area += 0.5 * (v0 + vh) * (hi - t0);
                }
                area
            }
            PeriodicForm::PiecewiseConstant { times, values } => {
                let n = times.len();
                let mut area = 0.0;
                for i in 0..n {
                    let t1 = if i + 1 < n { times[i + 1] } else { period };
                    if u <= times[i] {
                        break;
                    }
                    area += values[i] * (u.min(t1) - times[i]);
                }
                area
            }
        }
    }
}

/// Locate the (possibly wrapping) linear segment containing phase u.
fn segment(times: &[f64], values: &[f64], u: f64, period: f64) -> (f64, f64, f64, f64) {
    let n = times.len();
    let idx = match times.binary_search_by(|t| t.partial_cmp(&u).unwrap()) {
        Ok(i) => i,
        Err(i) => i - 1,
    };
    if idx + 1 < n {
        (times[idx], values[idx], times[idx + 1], values[idx + 1])
    } else {
        (times[idx], values[idx], period, values[0])
    }
}

impl RateFunction {
    /// Build and validate a rate function. Rejects malformed forms and
    /// any definition whose sampled minimum over one period plus the
    /// vanishing-part burn-in window is negative.
    pub fn new(periodic: PeriodicForm, vanishing: VanishingForm, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidRate(format!("period must be positive, got {period}")));
        }
        periodic.validate(period)?;
        vanishing.validate()?;
        let f = RateFunction {
            periodic,
            vanishing,
            period,
        };
        f.check_nonnegative()?;
        Ok(f)
    }

    /// Constant rate.
    pub fn constant(value: f64) -> Result<Self> {
        Self::new(
            PeriodicForm::Constant { value },
            VanishingForm::Zero,
            1.0,
        )
    }

    /// mean + amp * sin(2 pi t / period).
    pub fn sinusoid(mean: f64, amp: f64, period: f64) -> Result<Self> {
        Self::new(
            PeriodicForm::TrigSeries {
                mean,
                cos: vec![],
                sin: vec![amp],
            },
            VanishingForm::Zero,
            period,
        )
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn periodic_part(&self) -> &PeriodicForm {
        &self.periodic
    }

    pub fn vanishing_part(&self) -> &VanishingForm {
        &self.vanishing
    }

    fn periodic_value(&self, t: f64) -> f64 {
        let u = t.rem_euclid(self.period);
        // rem_euclid can return exactly `period` when t is a huge
        // negative-dust multiple; fold it back.
        let u = if u >= self.period { 0.0 } else { u };
        self.periodic.value_at_phase(u, self.period)
    }

    /// Value at time t >= 0. Values within rounding dust below zero are
    /// clamped to zero; anything clearly negative is an error.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::OutOfRange(format!("rate evaluated at t = {t} < 0")));
        }
        let v = self.periodic_value(t) + self.vanishing.value(t);
        if v >= 0.0 {
            Ok(v)
        } else if v >= -NEG_DUST {
            Ok(0.0)
        } else {
            Err(Error::NegativeRate { t, value: v })
        }
    }

    /// Long-run average: the mean of the periodic part over one period.
    pub fn long_run_average(&self) -> f64 {
        self.periodic.period_integral(self.period) / self.period
    }

    /// Exact integral over [s, t], 0 <= s <= t.
    pub fn integrate(&self, s: f64, t: f64) -> Result<f64> {
        if !(s >= 0.0 && t >= s) {
            return Err(Error::OutOfRange(format!(
                "integration bounds must satisfy 0 <= s <= t, got s = {s}, t = {t}"
            )));
        }
        Ok(self.periodic_antiderivative(t) - self.periodic_antiderivative(s)
            + self.vanishing.integral(s, t))
    }

    /// Antiderivative of the periodic part at x >= 0 (zero at 0).
    fn periodic_antiderivative(&self, x: f64) -> f64 {
        let whole = (x / self.period).floor();
        let u = x - whole * self.period;
        let (whole, u) = if u >= self.period {
            (whole + 1.0, 0.0)
        } else {
            (whole, u)
        };
        whole * self.periodic.period_integral(self.period)
            + self.periodic.partial_integral(u, self.period)
    }

    /// Nonnegativity: sample the periodic part densely over one period;
    /// if the vanishing part can push below zero, extend sampling over
    /// its burn-in window and certify the remainder analytically.
    fn check_nonnegative(&self) -> Result<()> {
        let mut per_min = f64::INFINITY;
        for i in 0..SAMPLES_PER_PERIOD {
            let u = self.period * i as f64 / SAMPLES_PER_PERIOD as f64;
            per_min = per_min.min(self.periodic.value_at_phase(u, self.period));
        }
        if per_min < -NEG_DUST {
            return Err(Error::InvalidRate(format!(
                "periodic part dips to {per_min:.6} below zero"
            )));
        }
        let amp_negative = match self.vanishing {
            VanishingForm::Zero => return Ok(()),
            VanishingForm::ExpDecay { amplitude, .. }
            | VanishingForm::PowerDecay { amplitude, .. } => amplitude < 0.0,
        };
        if !amp_negative {
            // Nonnegative vanishing part only adds to the periodic part.
            return Ok(());
        }
        // Negative vanishing amplitude: past settle_time the dip stays
        // within the periodic minimum, before it we must sample.
        let margin = per_min.max(0.0);
        let horizon = if margin > 0.0 {
            self.vanishing.settle_time(margin)
        } else {
            // Periodic minimum is zero: any negative contribution near the
            // periodic argmin makes the sum negative at late times.
            return Err(Error::InvalidRate(
                "vanishing part is negative while the periodic minimum is zero".into(),
            ));
        };
        let periods = (horizon / self.period).ceil() as usize + 1;
        let total = periods.saturating_mul(SAMPLES_PER_PERIOD);
        if total > MAX_SAMPLES {
            return Err(Error::InvalidRate(format!(
                "cannot certify nonnegativity: burn-in window of {periods} periods is too long"
            )));
        }
        let end = periods as f64 * self.period;
        for i in 0..total {
            let t = end * i as f64 / total as f64;
            let v = self.periodic_value(t) + self.vanishing.value(t);
            if v < -NEG_DUST {
                return Err(Error::InvalidRate(format!(
                    "rate dips to {v:.6} below zero at t = {t:.6}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine_rate() -> RateFunction {
        RateFunction::sinusoid(1.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn constant_evaluates_everywhere() {
        let f = RateFunction::constant(2.0).unwrap();
        assert_eq!(f.evaluate(0.0).unwrap(), 2.0);
        assert_eq!(f.evaluate(17.3).unwrap(), 2.0);
        assert_eq!(f.long_run_average(), 2.0);
    }

    #[test]
    fn sinusoid_quarter_period() {
        let f = sine_rate();
        let v = f.evaluate(0.25).unwrap();
        assert!((v - 1.5).abs() < 1e-12, "1 + 0.5 sin(pi/2) = 1.5, got {v}");
        assert!((f.long_run_average() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vanishing_exp_adds_at_zero() {
        let f = RateFunction::new(
            PeriodicForm::Constant { value: 1.0 },
            VanishingForm::ExpDecay {
                amplitude: 1.0,
                rate: 1.0,
            },
            1.0,
        )
        .unwrap();
        assert!((f.evaluate(0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((f.evaluate(100.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn piecewise_constant_average_and_right_limit() {
        let f = RateFunction::new(
            PeriodicForm::PiecewiseConstant {
                times: vec![0.0, 0.5],
                values: vec![2.0, 4.0],
            },
            VanishingForm::Zero,
            1.0,
        )
        .unwrap();
        assert!((f.long_run_average() - 3.0).abs() < 1e-15);
        assert_eq!(f.evaluate(0.5).unwrap(), 4.0, "jump takes the right limit");
        assert_eq!(f.evaluate(0.4999).unwrap(), 2.0);
        assert_eq!(f.evaluate(1.5).unwrap(), 4.0, "periodic extension");
    }

    #[test]
    fn piecewise_linear_interpolates_and_wraps() {
        let f = RateFunction::new(
            PeriodicForm::PiecewiseLinear {
                times: vec![0.0, 0.5],
                values: vec![1.0, 3.0],
            },
            VanishingForm::Zero,
            1.0,
        )
        .unwrap();
        assert!((f.evaluate(0.25).unwrap() - 2.0).abs() < 1e-12);
        // wrap segment from (0.5, 3) back to (1.0, 1)
        assert!((f.evaluate(0.75).unwrap() - 2.0).abs() < 1e-12);
        assert!((f.long_run_average() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_constant_and_sine() {
        let c = RateFunction::constant(2.0).unwrap();
        assert!((c.integrate(0.0, 3.0).unwrap() - 6.0).abs() < 1e-12);
        let s = sine_rate();
        assert!(
            (s.integrate(0.0, 1.0).unwrap() - 1.0).abs() < 1e-12,
            "sine integrates to its mean over a whole period"
        );
        let quarter = s.integrate(0.0, 0.25).unwrap();
        let exact = 0.25 + 0.5 / (2.0 * std::f64::consts::PI);
        assert!((quarter - exact).abs() < 1e-12);
    }

    #[test]
    fn integrate_exponential_tail() {
        let f = RateFunction::new(
            PeriodicForm::Constant { value: 0.0 },
            VanishingForm::ExpDecay {
                amplitude: 1.0,
                rate: 1.0,
            },
            1.0,
        )
        .unwrap();
        let v = f.integrate(0.0, 50.0).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "integral of e^-t over [0,50] is nearly 1");
    }

    #[test]
    fn integrate_power_decay_log_case() {
        let f = RateFunction::new(
            PeriodicForm::Constant { value: 0.0 },
            VanishingForm::PowerDecay {
                amplitude: 2.0,
                power: 1.0,
            },
            1.0,
        )
        .unwrap();
        let v = f.integrate(0.0, 3.0).unwrap();
        assert!((v - 2.0 * 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_periodic_dip() {
        let err = RateFunction::new(
            PeriodicForm::TrigSeries {
                mean: 0.8,
                cos: vec![],
                sin: vec![1.0],
            },
            VanishingForm::Zero,
            1.0,
        );
        assert!(matches!(err, Err(Error::InvalidRate(_))), "dips to -0.2");
    }

    #[test]
    fn rejects_negative_vanishing_undershoot() {
        // periodic part touches zero, so any negative transient fails
        let err = RateFunction::new(
            PeriodicForm::TrigSeries {
                mean: 1.0,
                cos: vec![],
                sin: vec![1.0],
            },
            VanishingForm::ExpDecay {
                amplitude: -0.5,
                rate: 1.0,
            },
            1.0,
        );
        assert!(matches!(err, Err(Error::InvalidRate(_))));
    }

    #[test]
    fn accepts_negative_vanishing_with_margin() {
        // periodic minimum 0.5, transient dip -0.3 e^-t stays above zero
        let f = RateFunction::new(
            PeriodicForm::TrigSeries {
                mean: 1.0,
                cos: vec![],
                sin: vec![0.5],
            },
            VanishingForm::ExpDecay {
                amplitude: -0.3,
                rate: 1.0,
            },
            1.0,
        )
        .unwrap();
        assert!(f.evaluate(0.0).unwrap() > 0.0);
    }

    #[test]
    fn rejects_bad_breakpoints() {
        for times in [vec![0.1, 0.5], vec![0.0, 0.5, 0.5], vec![0.0, 1.5]] {
            let n = times.len();
            let err = RateFunction::new(
                PeriodicForm::PiecewiseConstant {
                    times,
                    values: vec![1.0; n],
                },
                VanishingForm::Zero,
                1.0,
            );
            assert!(err.is_err());
        }
    }

    #[test]
    fn evaluate_rejects_negative_time() {
        let f = RateFunction::constant(1.0).unwrap();
        assert!(matches!(f.evaluate(-0.1), Err(Error::OutOfRange(_))));
        assert!(matches!(f.integrate(1.0, 0.5), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn serde_round_trip() {
        let f = RateFunction::new(
            PeriodicForm::TrigSeries {
                mean: 1.0,
                cos: vec![0.1],
                sin: vec![0.5],
            },
            VanishingForm::PowerDecay {
                amplitude: 0.2,
                power: 2.0,
            },
            2.0,
        )
        .unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let g: RateFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rate() -> impl Strategy<Value = RateFunction> {
            (
                0.5f64..3.0,
                -0.4f64..0.4,
                -0.4f64..0.4,
                0.5f64..2.0,
                prop_oneof![
                    Just(VanishingForm::Zero),
                    (0.0f64..0.5, 0.5f64..3.0).prop_map(|(amplitude, rate)| {
                        VanishingForm::ExpDecay { amplitude, rate }
                    }),
                    (0.0f64..0.5, 0.5f64..3.0).prop_map(|(amplitude, power)| {
                        VanishingForm::PowerDecay { amplitude, power }
                    }),
                ],
            )
                .prop_map(|(mean, c1, s1, period, vanishing)| {
                    RateFunction::new(
                        PeriodicForm::TrigSeries {
                            mean,
                            cos: vec![c1],
                            sin: vec![s1],
                        },
                        vanishing,
                        period,
                    )
                    .unwrap()
                })
        }

        proptest! {
            #[test]
            fn average_matches_many_period_integral(f in arb_rate()) {
                let horizon = 100.0 * f.period();
                let avg = f.integrate(0.0, horizon).unwrap() / horizon;
                // independent trapezoid estimate of the vanishing mass;
                // slow power decays shed it like T^{1-p}, not O(1)
                let n = 20_000;
                let h = horizon / n as f64;
                let v = f.vanishing_part();
                let mut tail = 0.5 * (v.value(0.0) + v.value(horizon));
                for i in 1..n {
                    tail += v.value(h * i as f64);
                }
                tail *= h;
                prop_assert!((avg - f.long_run_average() - tail / horizon).abs() < 1e-5);
            }

            #[test]
            fn integral_is_additive(f in arb_rate(), s in 0.0f64..5.0, m in 0.0f64..5.0, t in 0.0f64..5.0) {
                let mut pts = [s, m, t];
                pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                let [s, m, t] = pts;
                let whole = f.integrate(s, t).unwrap();
                let parts = f.integrate(s, m).unwrap() + f.integrate(m, t).unwrap();
                prop_assert!((whole - parts).abs() < 1e-10 * (1.0 + whole.abs()));
            }

            #[test]
            fn integral_derivative_matches_value(f in arb_rate(), t in 0.1f64..10.0) {
                let h = 1e-5;
                let d = (f.integrate(0.0, t + h).unwrap() - f.integrate(0.0, t - h).unwrap()) / (2.0 * h);
                prop_assert!((d - f.evaluate(t).unwrap()).abs() < 1e-6);
            }

            #[test]
            fn values_stay_nonnegative(f in arb_rate(), t in 0.0f64..50.0) {
                prop_assert!(f.evaluate(t).unwrap() >= 0.0);
            }
        }
    }
}
