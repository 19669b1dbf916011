//! Randomized cross-module consistency checks. Case counts are kept low
//! where a case costs an ODE solve.

use proptest::prelude::*;

use bdp_bounds::bounds::{alpha_lower_rate, ergodic_drift_rate, weak_ergodic_certificate, zeta_upper_rate};
use bdp_bounds::lognorm::{coefficient_profile, ProfileKind};
use bdp_bounds::model::BdpSpec;
use bdp_bounds::oracle::{frozen_spectrum, weighted_norm, NormKind};
use bdp_bounds::rates::RateFunction;
use bdp_bounds::verify::check_decay;
use bdp_bounds::weights::{
    preset_weights, PresetFeasibility, PresetRule, WeightKind, WeightSequence,
};

fn constant(v: f64) -> RateFunction {
    RateFunction::constant(v).unwrap()
}

fn point_mass(dim: usize, k: usize) -> Vec<f64> {
    let mut p = vec![0.0; dim];
    p[k] = 1.0;
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The certified drift never exceeds any profile coefficient: the
    /// feasibility construction promises alpha_k(t) >= l(t) for all k, t.
    #[test]
    fn profile_dominates_certified_drift(
        a in 0.2f64..2.0,
        b_extra in 0.1f64..3.0,
        amp_frac in 0.0f64..0.8,
        t in 0.0f64..4.0,
    ) {
        let b = a + b_extra;
        let rate_a = RateFunction::sinusoid(a, amp_frac * a, 1.0).unwrap();
        let spec = BdpSpec::mm1(rate_a, constant(b), 80).unwrap();
        let (w, pf) = preset_weights(&spec, PresetRule::Mm1Underloaded).unwrap();
        let feas = match pf {
            PresetFeasibility::Ergodic(f) => f,
            _ => unreachable!(),
        };
        let profile = coefficient_profile(&spec, &w, ProfileKind::Alpha, t).unwrap();
        let drift = ergodic_drift_rate(&spec, &feas).value(&spec, t).unwrap();
        prop_assert!(profile.inf >= drift - 1e-9,
            "profile inf {} below drift {}", profile.inf, drift);
    }

    /// Frozen-spectrum sandwich on finite loss systems: every eigenvalue
    /// decay rate sits between inf alpha and sup zeta.
    #[test]
    fn spectrum_sits_between_profiles(
        s in 2usize..7,
        a in 0.2f64..3.0,
        b in 0.2f64..3.0,
        delta_seed in 0.6f64..1.4,
    ) {
        let spec = BdpSpec::erlang_loss(s, constant(a), constant(b)).unwrap();
        let deltas: Vec<f64> = (0..s)
            .map(|k| delta_seed + 0.05 * k as f64)
            .collect();
        let w = WeightSequence::new(WeightKind::Triangular, deltas, None).unwrap();
        let alpha = coefficient_profile(&spec, &w, ProfileKind::Alpha, 0.0).unwrap();
        let zeta = coefficient_profile(&spec, &w, ProfileKind::Zeta, 0.0).unwrap();
        let eigs = frozen_spectrum(&spec, None, 0.0).unwrap();
        for nu in &eigs {
            let decay = -nu.re;
            prop_assert!(alpha.inf - 1e-8 <= decay && decay <= zeta.sup + 1e-8,
                "eigenvalue decay {} outside [{}, {}]", decay, alpha.inf, zeta.sup);
        }
    }

    /// Symbolic coefficient-wise extrema really bound the profile at
    /// arbitrary times, including over the vanishing perturbation.
    #[test]
    fn symbolic_rates_bracket_profiles(
        s in 2usize..6,
        a in 0.3f64..2.5,
        b in 0.3f64..2.5,
        amp_frac in 0.0f64..0.9,
        t in 0.0f64..5.0,
    ) {
        let rate_a = RateFunction::sinusoid(a, amp_frac * a, 0.7).unwrap();
        let spec = BdpSpec::erlang_loss(s, rate_a, constant(b)).unwrap();
        let w = WeightSequence::new(WeightKind::Triangular, vec![1.0; s], None).unwrap();
        let lower = alpha_lower_rate(&spec, &w).value(&spec, t).unwrap();
        let upper = zeta_upper_rate(&spec, &w).value(&spec, t).unwrap();
        let alpha = coefficient_profile(&spec, &w, ProfileKind::Alpha, t).unwrap();
        let zeta = coefficient_profile(&spec, &w, ProfileKind::Zeta, t).unwrap();
        prop_assert!(lower <= alpha.inf + 1e-10);
        prop_assert!(zeta.sup <= upper + 1e-10);
    }

    /// Triangular weighted norm: the suffix-sum evaluation agrees with
    /// building D explicitly and taking the plain l1 norm of D z.
    #[test]
    fn weighted_norm_matches_explicit_transform(
        z in proptest::collection::vec(-5.0f64..5.0, 1..12),
        delta_seed in 0.5f64..1.6,
    ) {
        let n = z.len();
        let deltas: Vec<f64> = (0..n).map(|k| delta_seed + 0.03 * k as f64).collect();
        let w = WeightSequence::new(WeightKind::Triangular, deltas, 1.0).unwrap();
        let fast = weighted_norm(&z, &w, NormKind::L1d).unwrap();
        let mut slow = 0.0;
        for k in 0..n {
            let suffix: f64 = z[k..].iter().sum();
            slow += w.d(k) * suffix.abs();
        }
        prop_assert!((fast - slow).abs() <= 1e-9 * (1.0 + slow.abs()),
            "suffix evaluation {} vs explicit {}", fast, slow);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Certified decay holds against the integrator for random underloaded
    /// single-server systems and random initial point-mass pairs.
    #[test]
    fn certified_decay_survives_integration(
        a in 0.3f64..1.2,
        b_extra in 0.5f64..2.5,
        j in 1usize..15,
    ) {
        let b = a + b_extra;
        let spec = BdpSpec::mm1(constant(a), constant(b), 40).unwrap();
        let (w, pf) = preset_weights(&spec, PresetRule::Mm1Underloaded).unwrap();
        let feas = match pf {
            PresetFeasibility::Ergodic(f) => f,
            _ => unreachable!(),
        };
        let (l1d, _) = weak_ergodic_certificate(&spec, &feas, &w);
        let p1 = point_mass(spec.dim(), 0);
        let p2 = point_mass(spec.dim(), j);
        let grid: Vec<f64> = (0..=8).map(|i| 0.25 * i as f64).collect();
        let rep = check_decay(&l1d, &spec, &w, &p1, &p2, &grid, 1e-9).unwrap();
        prop_assert!(rep.pass, "min slack {}", rep.min_slack);
    }
}
