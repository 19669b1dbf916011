//! Direct numerical integration of the forward Kolmogorov system.
//!
//! Everything the certificates claim is checked against trajectories
//! produced here: an explicit adaptive Dormand-Prince 5(4) pair with
//! error-per-unit-time control, tridiagonal derivative evaluation, and
//! no renormalization, so mass conservation stays an observable check
//! instead of an enforced identity.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::model::BdpSpec;
use crate::weights::{WeightKind, WeightSequence};

/// Share of the top states whose mass counts as truncation loss.
const BAND_FRACTION: f64 = 0.05;
/// Smallest step before the controller gives up.
const MIN_STEP: f64 = 1e-14;

/// Solution of dp/dt = A(t) p sampled on a time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    mass_defect: Vec<f64>,
    band_mass: Vec<f64>,
    tol: f64,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, idx: usize) -> &[f64] {
        &self.states[idx]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn mass_defect(&self) -> &[f64] {
        &self.mass_defect
    }

    /// Mass sitting in the top `BAND_FRACTION` share of states.
    pub fn band_mass(&self) -> &[f64] {
        &self.band_mass
    }

    pub fn max_mass_defect(&self) -> f64 {
        self.mass_defect.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_band_mass(&self) -> f64 {
        self.band_mass.iter().cloned().fold(0.0, f64::max)
    }
}

struct Derivative<'a> {
    spec: &'a BdpSpec,
}

impl Derivative<'_> {
    /// Tridiagonal product A(t) p; also returns the l1 norm of A(t).
    fn eval(&self, t: f64, p: &[f64], out: &mut [f64]) -> Result<f64> {
        let av = self.spec.a().evaluate(t)?;
        let bv = self.spec.b().evaluate(t)?;
        let n = p.len();
        let lam = |k: usize| self.spec.effective_birth(k) * av;
        let mu = |k: usize| self.spec.death_rate(k) * bv;
        let mut a_norm: f64 = 0.0;
        for k in 0..n {
            let out_rate = lam(k) + mu(k);
            let mut v = -out_rate * p[k];
            if k > 0 {
                v += lam(k - 1) * p[k - 1];
            }
            if k + 1 < n {
                v += mu(k + 1) * p[k + 1];
            }
            out[k] = v;
            a_norm = a_norm.max(2.0 * out_rate);
        }
        Ok(a_norm)
    }
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate the forward Kolmogorov system and sample it on `t_grid`.
/// The local error is kept below `tol` per unit time, and the step is
/// capped at 0.1 / ||A(t)||_1 for stability.
pub fn integrate_kolmogorov(
    spec: &BdpSpec,
    p0: &[f64],
    t_grid: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    let dim = spec.dim();
    if p0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: p0.len(),
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let mass: f64 = p0.iter().sum();
    if (mass - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "initial mass {mass} is not 1"
        )));
    }
    if p0.iter().any(|v| *v < -1e-12 || !v.is_finite()) {
        return Err(Error::InvalidParameter("initial vector has negative entries".into()));
    }
    if t_grid.is_empty() || t_grid[0] < 0.0 {
        return Err(Error::InvalidParameter("time grid must start at t >= 0".into()));
    }
    for pair in t_grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidParameter("time grid must strictly increase".into()));
        }
    }

    let deriv = Derivative { spec };
    let band = ((dim as f64 * BAND_FRACTION).ceil() as usize).max(1);
    let mut traj = Trajectory {
        times: Vec::with_capacity(t_grid.len()),
        states: Vec::with_capacity(t_grid.len()),
        mass_defect: Vec::with_capacity(t_grid.len()),
        band_mass: Vec::with_capacity(t_grid.len()),
        tol,
    };
    let record = |t: f64, p: &[f64], traj: &mut Trajectory| {
        let mass: f64 = p.iter().sum();
        let loss: f64 = p[dim - band..].iter().sum();
        traj.times.push(t);
        traj.states.push(p.to_vec());
        traj.mass_defect.push((mass - 1.0).abs());
        traj.band_mass.push(loss.max(0.0));
    };

    let mut y = p0.to_vec();
    let mut t = t_grid[0];
    record(t, &y, &mut traj);

    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut k5 = vec![0.0; dim];
    let mut k6 = vec![0.0; dim];
    let mut k7 = vec![0.0; dim];
    let mut stage = vec![0.0; dim];
    let mut y_next = vec![0.0; dim];

    let mut a_norm = deriv.eval(t, &y, &mut k1)?;
    let mut h = 0.05_f64.min(0.1 / a_norm.max(1e-12));

    for &t_stop in &t_grid[1..] {
        while t < t_stop {
            let cap = 0.1 / a_norm.max(1e-12);
            let gap = t_stop - t;
            let mut step = h.min(cap);
            // Snap onto the grid point instead of letting rounding
            // leave an unreachable sliver before it.
            let hitting = step >= gap;
            if hitting {
                step = gap;
            } else if step < MIN_STEP * t.abs().max(1.0) {
                return Err(Error::StepFailure { t, h: step });
            }

            for i in 0..dim {
                stage[i] = y[i] + step * A21 * k1[i];
            }
            deriv.eval(t + step / 5.0, &stage, &mut k2)?;
            for i in 0..dim {
                stage[i] = y[i] + step * (A31 * k1[i] + A32 * k2[i]);
            }
            deriv.eval(t + 3.0 * step / 10.0, &stage, &mut k3)?;
            for i in 0..dim {
                stage[i] = y[i] + step * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            deriv.eval(t + 4.0 * step / 5.0, &stage, &mut k4)?;
            for i in 0..dim {
                stage[i] =
                    y[i] + step * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            deriv.eval(t + 8.0 * step / 9.0, &stage, &mut k5)?;
            for i in 0..dim {
                stage[i] = y[i]
                    + step
                        * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            deriv.eval(t + step, &stage, &mut k6)?;
            for i in 0..dim {
                y_next[i] = y[i]
                    + step * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            }
            let next_norm = deriv.eval(t + step, &y_next, &mut k7)?;

            let mut err = 0.0;
            for i in 0..dim {
                err += (step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]))
                    .abs();
            }
            let budget = tol * step;
            let ratio = if err > 0.0 { budget / err } else { 5.0 };
            if err <= budget {
                t = if hitting { t_stop } else { t + step };
                std::mem::swap(&mut y, &mut y_next);
                std::mem::swap(&mut k1, &mut k7);
                a_norm = next_norm;
                // A step clamped to the grid says nothing about the
                // controller's preferred size; keep h as it was.
                if !hitting {
                    h = step * (0.9 * ratio.powf(0.2)).clamp(0.2, 5.0);
                }
            } else {
                h = step * (0.9 * ratio.powf(0.2)).clamp(0.2, 5.0);
            }
        }
        record(t, &y, &mut traj);
    }
    Ok(traj)
}

/// Norms evaluated against a weight sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Plain l1.
    L1,
    /// Weighted norm ||D x||: suffix sums for triangular weights
    /// (reduced vectors, entry i is state i+1), diagonal scaling
    /// otherwise (full vectors).
    L1d,
    /// sum_i q_i |x_i| over full vectors (q_0 = 0).
    WeightedSumQ,
}

pub fn weighted_norm(x: &[f64], w: &WeightSequence, kind: NormKind) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    Ok(match kind {
        NormKind::L1 => x.iter().map(|v| v.abs()).sum(),
        NormKind::L1d => match w.kind() {
            WeightKind::Triangular => {
                let mut suffix = 0.0;
                let mut acc = vec![0.0; x.len()];
                for (i, v) in x.iter().enumerate().rev() {
                    suffix += v;
                    acc[i] = suffix;
                }
                acc.iter()
                    .enumerate()
                    .map(|(k, s)| w.d(k) * s.abs())
                    .sum()
            }
            WeightKind::Diagonal => x.iter().enumerate().map(|(i, v)| w.d(i) * v.abs()).sum(),
        },
        NormKind::WeightedSumQ => x.iter().enumerate().map(|(i, v)| w.q(i) * v.abs()).sum(),
    })
}

/// Trapezoidal time average of the trajectory over [t_0, t].
pub fn cesaro_average(traj: &Trajectory, t: f64) -> Result<Vec<f64>> {
    let times = traj.times();
    if traj.is_empty() || t < times[0] - 1e-12 || t > times[times.len() - 1] + 1e-12 {
        return Err(Error::OutOfRange(format!(
            "t = {t} outside the trajectory span"
        )));
    }
    let dim = traj.state(0).len();
    if t - times[0] < 1e-15 {
        return Ok(traj.state(0).to_vec());
    }
    let mut acc = vec![0.0; dim];
    let mut covered = times[0];
    for m in 1..traj.len() {
        let (t0, t1) = (times[m - 1], times[m]);
        if t >= t1 {
            let h = t1 - t0;
            for i in 0..dim {
                acc[i] += 0.5 * h * (traj.state(m - 1)[i] + traj.state(m)[i]);
            }
            covered = t1;
        } else {
            let h = t - t0;
            if h > 0.0 {
                let frac = h / (t1 - t0);
                for i in 0..dim {
                    let interp =
                        traj.state(m - 1)[i] * (1.0 - frac) + traj.state(m)[i] * frac;
                    acc[i] += 0.5 * h * (traj.state(m - 1)[i] + interp);
                }
                covered = t;
            }
            break;
        }
    }
    let span = covered - times[0];
    for v in &mut acc {
        *v /= span;
    }
    Ok(acc)
}

/// Eigenvalues of the reduced matrix B(t), or of the weight-transformed
/// operator when weights are supplied (triangular: D B D^{-1}, same
/// spectrum as B; diagonal: D A D^{-1}, same spectrum as A).
pub fn frozen_spectrum(
    spec: &BdpSpec,
    w: Option<&WeightSequence>,
    t: f64,
) -> Result<Vec<Complex<f64>>> {
    let m: DMatrix<f64> = match w {
        None => spec.build_b(t)?.0,
        Some(w) => spec.build_transformed(w, t)?,
    };
    Ok(m.complex_eigenvalues().iter().cloned().collect())
}

/// Spectral gap min_j -Re nu_j of a frozen spectrum.
pub fn spectral_gap(eigs: &[Complex<f64>]) -> f64 {
    eigs.iter().map(|z| -z.re).fold(f64::INFINITY, f64::min)
}

/// E X(t) = sum_i i p_i.
pub fn mean_value(p: &[f64]) -> f64 {
    p.iter().enumerate().map(|(i, v)| i as f64 * v).sum()
}

/// Plain l1 distance between two vectors of equal length.
pub fn l1_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}

/// Adaptive Simpson quadrature with absolute tolerance.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    if hi <= lo {
        return 0.0;
    }
    let fa = f(lo);
    let fb = f(hi);
    let m = 0.5 * (lo + hi);
    let fm = f(m);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    rec(&f, lo, fa, hi, fb, m, fm, whole, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BdpSpec, StateSpace};
    use crate::rates::RateFunction;

    fn constant(v: f64) -> RateFunction {
        RateFunction::constant(v).unwrap()
    }

    fn two_state() -> BdpSpec {
        BdpSpec::new(
            StateSpace::Finite { n: 1 },
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            None,
            constant(1.0),
            constant(1.0),
        )
        .unwrap()
    }

    fn grid(t_end: f64, steps: usize) -> Vec<f64> {
        (0..=steps).map(|i| t_end * i as f64 / steps as f64).collect()
    }

    #[test]
    fn two_state_closed_form() {
        let spec = two_state();
        let traj = integrate_kolmogorov(&spec, &[1.0, 0.0], &[0.0, 1.0], 1e-9).unwrap();
        let p0 = traj.state(1)[0];
        let exact = 0.5 + 0.5 * (-2.0_f64).exp();
        assert!((p0 - exact).abs() < 1e-8, "p_0(1) = {p0}, exact {exact}");
    }

    #[test]
    fn zero_rates_freeze_the_state() {
        let spec = BdpSpec::mm1(constant(0.0), constant(0.0), 6).unwrap();
        let mut p0 = vec![0.0; 7];
        p0[2] = 0.25;
        p0[3] = 0.75;
        let traj = integrate_kolmogorov(&spec, &p0, &grid(3.0, 3), 1e-9).unwrap();
        for m in 0..traj.len() {
            assert_eq!(traj.state(m), p0.as_slice());
        }
    }

    #[test]
    fn mm1_relaxes_to_geometric_law() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 25).unwrap();
        let mut p0 = vec![0.0; 26];
        p0[0] = 1.0;
        let traj = integrate_kolmogorov(&spec, &p0, &[0.0, 20.0], 1e-9).unwrap();
        let pi = spec.stationary_vector().unwrap();
        let tv = 0.5 * l1_distance(traj.state(1), &pi);
        assert!(tv < 1e-6, "total variation {tv}");
    }

    #[test]
    fn mass_and_positivity_hold_for_periodic_rates() {
        let spec = BdpSpec::mm1(
            RateFunction::sinusoid(1.0, 0.5, 1.0).unwrap(),
            constant(4.0),
            40,
        )
        .unwrap();
        let mut p0 = vec![0.0; 41];
        p0[0] = 1.0;
        let traj = integrate_kolmogorov(&spec, &p0, &grid(5.0, 5), 1e-9).unwrap();
        assert!(traj.max_mass_defect() <= 10.0 * 1e-9 * 5.0);
        for m in 0..traj.len() {
            let worst = traj.state(m).iter().cloned().fold(0.0, f64::min);
            assert!(worst >= -1e-9, "negative excursion {worst}");
        }
        assert!(traj.max_band_mass() < 1e-6);
    }

    #[test]
    fn refinement_changes_little() {
        let spec = BdpSpec::mms(2, constant(1.5), constant(1.0), 30).unwrap();
        let mut p0 = vec![0.0; 31];
        p0[5] = 1.0;
        let coarse = integrate_kolmogorov(&spec, &p0, &[0.0, 4.0], 1e-8).unwrap();
        let fine = integrate_kolmogorov(&spec, &p0, &[0.0, 4.0], 5e-9).unwrap();
        let diff = l1_distance(coarse.state(1), fine.state(1));
        assert!(diff <= 5.0 * 1e-8, "l1 difference {diff}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = two_state();
        assert!(integrate_kolmogorov(&spec, &[0.7, 0.7], &[0.0, 1.0], 1e-9).is_err());
        assert!(integrate_kolmogorov(&spec, &[1.0, 0.0], &[1.0, 1.0], 1e-9).is_err());
        assert!(integrate_kolmogorov(&spec, &[1.0, 0.0], &[0.0, 1.0], 0.0).is_err());
        assert!(integrate_kolmogorov(&spec, &[1.0], &[0.0, 1.0], 1e-9).is_err());
    }

    #[test]
    fn triangular_norm_by_hand() {
        let w = WeightSequence::new(WeightKind::Triangular, vec![1.0, 1.0], None).unwrap();
        let x = [0.2, -0.1, -0.1];
        let v = weighted_norm(&x, &w, NormKind::L1d).unwrap();
        assert!((v - 0.3).abs() < 1e-15);
        assert_eq!(weighted_norm(&[0.0, 0.0, 0.0], &w, NormKind::L1d).unwrap(), 0.0);
        assert!((weighted_norm(&[0.3, 0.45, 0.25], &w, NormKind::L1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_and_q_norms() {
        let w = WeightSequence::new(WeightKind::Diagonal, vec![2.0, 2.0], 2.0).unwrap();
        let x = [1.0, 1.0, -0.5];
        assert!((weighted_norm(&x, &w, NormKind::L1d).unwrap() - 5.0).abs() < 1e-15);
        // q = (0, 1, 3)
        assert!((weighted_norm(&x, &w, NormKind::WeightedSumQ).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn cesaro_average_of_constant_and_exponential() {
        let spec = two_state();
        let traj = integrate_kolmogorov(&spec, &[1.0, 0.0], &grid(1.0, 1000), 1e-10).unwrap();
        let avg = cesaro_average(&traj, 1.0).unwrap();
        let exact = 0.5 + (1.0 - (-2.0_f64).exp()) / 4.0;
        assert!((avg[0] - exact).abs() < 1e-7, "avg {}, exact {exact}", avg[0]);

        let frozen = BdpSpec::mm1(constant(0.0), constant(0.0), 3).unwrap();
        let p0 = vec![0.25, 0.25, 0.5, 0.0];
        let traj = integrate_kolmogorov(&frozen, &p0, &grid(2.0, 4), 1e-9).unwrap();
        let avg = cesaro_average(&traj, 2.0).unwrap();
        for (a, b) in avg.iter().zip(&p0) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(cesaro_average(&traj, 3.0).is_err());
    }

    #[test]
    fn cesaro_handles_interior_times() {
        let spec = two_state();
        let traj = integrate_kolmogorov(&spec, &[1.0, 0.0], &grid(1.0, 1000), 1e-10).unwrap();
        let avg = cesaro_average(&traj, 0.7305).unwrap();
        let t = 0.7305_f64;
        let exact = 0.5 + (1.0 - (-2.0 * t).exp()) / (4.0 * t);
        assert!((avg[0] - exact).abs() < 1e-7);
    }

    #[test]
    fn spectrum_of_tiny_systems() {
        let spec = two_state();
        let eigs = frozen_spectrum(&spec, None, 0.0).unwrap();
        assert_eq!(eigs.len(), 1);
        assert!((eigs[0].re + 2.0).abs() < 1e-12 && eigs[0].im.abs() < 1e-12);

        let loss = BdpSpec::erlang_loss(2, constant(1.0), constant(1.0)).unwrap();
        let eigs = frozen_spectrum(&loss, None, 0.0).unwrap();
        let mut res: Vec<f64> = eigs.iter().map(|z| z.re).collect();
        res.sort_by(f64::total_cmp);
        let root = 5.0_f64.sqrt();
        assert!((res[0] - (-5.0 - root) / 2.0).abs() < 1e-9);
        assert!((res[1] - (-5.0 + root) / 2.0).abs() < 1e-9);
        for z in &eigs {
            assert!(z.im.abs() < 1e-9);
        }
    }

    #[test]
    fn transformed_spectrum_matches_reduced() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 12).unwrap();
        let w = WeightSequence::new(WeightKind::Triangular, vec![2.0; 12], 2.0).unwrap();
        let plain = spectral_gap(&frozen_spectrum(&spec, None, 0.0).unwrap());
        let moved = spectral_gap(&frozen_spectrum(&spec, Some(&w), 0.0).unwrap());
        assert!((plain - moved).abs() < 1e-8, "similarity keeps the spectrum");
    }

    #[test]
    fn truncated_gap_approaches_one() {
        let spec = BdpSpec::mm1(constant(1.0), constant(4.0), 40).unwrap();
        let gap = spectral_gap(&frozen_spectrum(&spec, None, 0.0).unwrap());
        assert!(gap > 0.5 && gap < 1.5, "gap {gap}");
    }

    #[test]
    fn simpson_matches_closed_forms() {
        let v = adaptive_simpson(|x| x * x, 0.0, 1.0, 1e-12);
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-10);
        assert!((v - 2.0).abs() < 1e-9);
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-9), 0.0);
    }

    #[test]
    fn mean_and_distance_helpers() {
        assert_eq!(mean_value(&[0.5, 0.25, 0.25]), 0.75);
        assert_eq!(l1_distance(&[1.0, 0.0], &[0.0, 1.0]), 2.0);
    }
}
