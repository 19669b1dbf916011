//! Logarithmic norms in l1 and transformed column-sum profiles.
//!
//! The l1 logarithmic norm of a matrix has the closed form
//!
//! ```text
//! gamma(M) = sup_j ( m_jj + sum_{i != j} |m_ij| ),
//! ```
//!
//! and for the weight-transformed generators all off-diagonal entries
//! are nonnegative, so the norm reduces to column sums. The column
//! sums of D B(t) D^{-1} are -alpha_k(t), those of -D B(t) D^{-1} are
//! zeta_k(t), and the diagonal transform yields -alpha0_k(t). Decay
//! certificates integrate these profiles instead of touching matrices.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::BdpSpec;
use crate::weights::{WeightKind, WeightSequence};

/// Closed form of the l1 logarithmic norm.
pub fn lognorm_l1(m: &DMatrix<f64>) -> f64 {
    assert_eq!(m.nrows(), m.ncols(), "logarithmic norm needs a square matrix");
    let n = m.nrows();
    let mut worst = f64::NEG_INFINITY;
    for j in 0..n {
        let mut col = m[(j, j)];
        for i in 0..n {
            if i != j {
                col += m[(i, j)].abs();
            }
        }
        worst = worst.max(col);
    }
    worst
}

/// Which column-sum sequence a profile holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// alpha_k(t): decay coefficients of the reduced triangular transform.
    Alpha,
    /// zeta_k(t): growth coefficients, column sums of the negated transform.
    Zeta,
    /// alpha0_k(t): decay coefficients of the diagonal transform.
    AlphaNull,
}

impl ProfileKind {
    fn required_weights(self) -> WeightKind {
        match self {
            ProfileKind::Alpha | ProfileKind::Zeta => WeightKind::Triangular,
            ProfileKind::AlphaNull => WeightKind::Diagonal,
        }
    }
}

/// Column-sum coefficients at a fixed time with certified aggregates.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientProfile {
    pub kind: ProfileKind,
    pub t: f64,
    /// alpha/zeta: k = 0..top-1; alpha0: k = 0..=top.
    pub values: Vec<f64>,
    /// Analytic k -> infinity value on infinite state spaces.
    pub limit: Option<f64>,
    /// Minimum over stored values and the limit.
    pub inf: f64,
    /// Maximum over stored values and the limit.
    pub sup: f64,
}

/// Evaluate one coefficient sequence at time t. The delta_0 = 0
/// convention zeroes the mu_k / delta_k term at k = 0.
pub fn coefficient_profile(
    spec: &BdpSpec,
    w: &WeightSequence,
    kind: ProfileKind,
    t: f64,
) -> Result<CoefficientProfile> {
    let need = kind.required_weights();
    if w.kind() != need {
        return Err(Error::KindMismatch {
            expected: need.name(),
            got: w.kind().name(),
        });
    }
    let av = spec.a().evaluate(t)?;
    let bv = spec.b().evaluate(t)?;
    let values: Vec<f64> = match kind {
        ProfileKind::Alpha => (0..spec.top())
            .map(|k| {
                let inflow = w.delta(k + 1) * spec.birth_rate(k + 1) * av
                    + if k == 0 { 0.0 } else { spec.death_rate(k) * bv / w.delta(k) };
                spec.birth_rate(k) * av + spec.death_rate(k + 1) * bv - inflow
            })
            .collect(),
        ProfileKind::Zeta => (0..spec.top())
            .map(|k| {
                let inflow = w.delta(k + 1) * spec.birth_rate(k + 1) * av
                    + if k == 0 { 0.0 } else { spec.death_rate(k) * bv / w.delta(k) };
                spec.birth_rate(k) * av + spec.death_rate(k + 1) * bv + inflow
            })
            .collect(),
        ProfileKind::AlphaNull => (0..=spec.top())
            .map(|k| {
                let birth = spec.birth_rate(k) * av * (1.0 - w.delta(k + 1));
                if k == 0 {
                    birth
                } else {
                    birth + spec.death_rate(k) * bv * (1.0 - 1.0 / w.delta(k))
                }
            })
            .collect(),
    };
    let limit = if spec.is_finite() {
        None
    } else {
        let lam = spec.birth_limit() * av;
        let mu = spec.death_limit() * bv;
        let td = w.tail_delta().unwrap_or(1.0);
        Some(match kind {
            ProfileKind::Alpha => lam + mu - td * lam - mu / td,
            ProfileKind::Zeta => lam + mu + td * lam + mu / td,
            ProfileKind::AlphaNull => lam * (1.0 - td) + mu * (1.0 - 1.0 / td),
        })
    };
    let mut inf = f64::INFINITY;
    let mut sup = f64::NEG_INFINITY;
    for v in values.iter().chain(limit.iter()) {
        inf = inf.min(*v);
        sup = sup.max(*v);
    }
    Ok(CoefficientProfile {
        kind,
        t,
        values,
        limit,
        inf,
        sup,
    })
}

/// l1 logarithmic norm of the transformed generator, computed from the
/// closed-form profile: -inf_k alpha_k(t), or -inf_k alpha0_k(t) for
/// diagonal weights. Equals `lognorm_l1(build_transformed(..))` on
/// finite spaces; on truncated infinite spaces the profile keeps the
/// untruncated outflow in the boundary column, so it upper-bounds the
/// matrix value and stays valid for the infinite system.
pub fn lognorm_of_transformed(spec: &BdpSpec, w: &WeightSequence, t: f64) -> Result<f64> {
    let kind = match w.kind() {
        WeightKind::Triangular => ProfileKind::Alpha,
        WeightKind::Diagonal => ProfileKind::AlphaNull,
    };
    Ok(-coefficient_profile(spec, w, kind, t)?.inf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BdpSpec;
    use crate::rates::RateFunction;
    use nalgebra::dmatrix;

    fn constant(v: f64) -> RateFunction {
        RateFunction::constant(v).unwrap()
    }

    fn uniform_weights(kind: WeightKind, delta: f64, stored: usize, tail: Option<f64>) -> WeightSequence {
        WeightSequence::new(kind, vec![delta; stored], tail).unwrap()
    }

    #[test]
    fn lognorm_l1_column_sums() {
        let m = dmatrix![-1.0, 2.0; 0.5, -3.0];
        assert_eq!(lognorm_l1(&m), -0.5);
        assert_eq!(lognorm_l1(&DMatrix::zeros(4, 4)), 0.0);
    }

    #[test]
    fn lognorm_l1_of_generator_vanishes() {
        let spec = BdpSpec::mms(2, constant(1.3), constant(0.8), 12).unwrap();
        let a = spec.build_a(0.7).unwrap();
        assert!(lognorm_l1(&a).abs() < 1e-14);
    }

    #[test]
    fn alpha_profile_mm1_quarter_load() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 30).unwrap();
        let w = uniform_weights(WeightKind::Triangular, 2.0, 30, Some(2.0));
        let p = coefficient_profile(&spec, &w, ProfileKind::Alpha, 0.0).unwrap();
        assert!((p.values[0] - 3.0).abs() < 1e-12, "alpha_0 = 1 + 4 - 2");
        for (k, v) in p.values.iter().enumerate().skip(1) {
            assert!((v - 1.0).abs() < 1e-12, "alpha_{k} = {v}");
        }
        assert!((p.limit.unwrap() - 1.0).abs() < 1e-12);
        assert!((p.inf - 1.0).abs() < 1e-12);
        assert!((lognorm_of_transformed(&spec, &w, 0.0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_profile_loss_system_unit_weights() {
        let spec = BdpSpec::erlang_loss(2, constant(3.0), constant(1.0)).unwrap();
        let w = uniform_weights(WeightKind::Triangular, 1.0, 2, None);
        let p = coefficient_profile(&spec, &w, ProfileKind::Alpha, 0.0).unwrap();
        assert_eq!(p.values.len(), 2);
        assert!((p.values[0] - 1.0).abs() < 1e-12, "b(t) below the top state");
        assert!((p.values[1] - 4.0).abs() < 1e-12, "a(t) + b(t) at the top");
        assert_eq!(p.limit, None);
        assert!((p.inf - 1.0).abs() < 1e-12);
        assert!((p.sup - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_profile_loss_system_unit_weights() {
        let spec = BdpSpec::erlang_loss(2, constant(3.0), constant(1.0)).unwrap();
        let w = uniform_weights(WeightKind::Triangular, 1.0, 2, None);
        let p = coefficient_profile(&spec, &w, ProfileKind::Zeta, 0.0).unwrap();
        assert!((p.values[0] - 7.0).abs() < 1e-12);
        assert!((p.values[1] - 6.0).abs() < 1e-12);
        // 2 a(t) + (2S - 1) b(t) dominates the whole profile
        assert!(p.sup <= 2.0 * 3.0 + 3.0 * 1.0 + 1e-12);
    }

    #[test]
    fn discouragement_profile_stays_above_floor() {
        let spec = BdpSpec::discouragement(2, constant(1.0), constant(2.0), 200).unwrap();
        let w = {
            let delta: Vec<f64> = (1..=200).map(|k| if k < 2 { 1.0 } else { 1.5 }).collect();
            WeightSequence::new(WeightKind::Triangular, delta, 1.5).unwrap()
        };
        let p = coefficient_profile(&spec, &w, ProfileKind::Alpha, 0.3).unwrap();
        // floor (S eps / (1 + eps)) (b - eps a) = 1
        assert!(p.inf >= 1.0 - 1e-12, "inf = {}", p.inf);
        assert!((p.limit.unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn null_profile_overloaded_mm1() {
        let spec = BdpSpec::mm1(constant(4.0), constant(1.0), 40).unwrap();
        let w = uniform_weights(WeightKind::Diagonal, 0.5, 40, Some(0.5));
        let p = coefficient_profile(&spec, &w, ProfileKind::AlphaNull, 0.0).unwrap();
        assert!((p.values[0] - 2.0).abs() < 1e-12, "4 (1 - 1/2) at the origin");
        for (k, v) in p.values.iter().enumerate().skip(1).take(38) {
            assert!((v - 1.0).abs() < 1e-12, "alpha0_{k} = {v}");
        }
        assert!((p.limit.unwrap() - 1.0).abs() < 1e-12);
        assert!((p.inf - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 10).unwrap();
        let tri = uniform_weights(WeightKind::Triangular, 2.0, 10, Some(2.0));
        let diag = uniform_weights(WeightKind::Diagonal, 2.0, 10, Some(2.0));
        assert!(matches!(
            coefficient_profile(&spec, &diag, ProfileKind::Alpha, 0.0),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            coefficient_profile(&spec, &tri, ProfileKind::AlphaNull, 0.0),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn degenerate_zero_rates_have_zero_norm() {
        let spec = BdpSpec::mm1(constant(0.0), constant(0.0), 8).unwrap();
        let w = uniform_weights(WeightKind::Triangular, 2.0, 8, Some(2.0));
        assert_eq!(lognorm_of_transformed(&spec, &w, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn transformed_norm_matches_matrix_on_finite_spaces() {
        let spec = BdpSpec::erlang_loss(5, constant(1.3), constant(0.7)).unwrap();
        let deltas = vec![1.2, 0.8, 1.5, 0.9, 1.1];
        for kind in [WeightKind::Triangular, WeightKind::Diagonal] {
            let w = WeightSequence::new(kind, deltas.clone(), None).unwrap();
            let m = spec.build_transformed(&w, 0.4).unwrap();
            let closed = lognorm_of_transformed(&spec, &w, 0.4).unwrap();
            assert!(
                (closed - lognorm_l1(&m)).abs() < 1e-12,
                "{kind:?}: closed {closed} vs matrix {}",
                lognorm_l1(&m)
            );
        }
    }

    #[test]
    fn truncated_profile_upper_bounds_matrix_norm() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 15).unwrap();
        for kind in [WeightKind::Triangular, WeightKind::Diagonal] {
            let w = uniform_weights(kind, 2.0, 15, Some(2.0));
            let m = spec.build_transformed(&w, 0.0).unwrap();
            let closed = lognorm_of_transformed(&spec, &w, 0.0).unwrap();
            assert!(closed >= lognorm_l1(&m) - 1e-12, "{kind:?}");
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_deltas(n: usize) -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(0.4f64..2.5, n..=n)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn zeta_minus_alpha_is_twice_the_inflow(
                deltas in arb_deltas(12),
                av in 0.0f64..3.0,
                bv in 0.1f64..3.0,
                s in 1usize..4,
            ) {
                let spec = BdpSpec::mms(s, constant(av), constant(bv), 12).unwrap();
                let w = WeightSequence::new(WeightKind::Triangular, deltas, 1.0).unwrap();
                let alpha = coefficient_profile(&spec, &w, ProfileKind::Alpha, 0.0).unwrap();
                let zeta = coefficient_profile(&spec, &w, ProfileKind::Zeta, 0.0).unwrap();
                for k in 0..spec.top() {
                    let inflow = w.delta(k + 1) * spec.birth_rate(k + 1) * av
                        + if k == 0 { 0.0 } else { spec.death_rate(k) * bv / w.delta(k) };
                    let gap = zeta.values[k] - alpha.values[k];
                    prop_assert!((gap - 2.0 * inflow).abs() < 1e-10);
                    prop_assert!(gap >= -1e-12);
                }
                prop_assert!(alpha.inf <= alpha.sup);
            }

            #[test]
            fn limit_definition_agrees_with_closed_form(
                seed in proptest::array::uniform16(-5.0f64..5.0),
            ) {
                let m = DMatrix::from_row_slice(4, 4, &seed);
                let h = 1e-6;
                let mut shifted = m.clone() * h;
                for i in 0..4 {
                    shifted[(i, i)] += 1.0;
                }
                let opnorm = (0..4)
                    .map(|j| (0..4).map(|i| shifted[(i, j)].abs()).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max);
                let approx = (opnorm - 1.0) / h;
                let m_norm = (0..4)
                    .map(|j| (0..4).map(|i| m[(i, j)].abs()).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max);
                prop_assert!((approx - lognorm_l1(&m)).abs() <= 10.0 * m_norm * m_norm * h);
            }
        }
    }
}
