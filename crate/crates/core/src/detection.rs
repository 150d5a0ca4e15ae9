//! Detector and interference-imperfection models, plus the closed-form
//! success probabilities of the discriminator.

use crate::discriminator::NStatePlan;
use crate::error::{domain, Result};
use crate::optics::ComplexAmplitude;
use crate::scalar::Real;

/// Threshold single-photon detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel<T> {
    /// Quantum efficiency in `[0, 1]`.
    pub eta: T,
    /// Mean number of dark counts per coincidence window.
    pub dark_mean: T,
}

impl<T: Real> DetectorModel<T> {
    pub fn new(eta: T, dark_mean: T) -> Result<Self> {
        if !(eta >= T::zero() && eta <= T::one()) {
            return Err(domain(format!("detector efficiency {eta:?} outside [0, 1]")));
        }
        if !(dark_mean >= T::zero()) || !dark_mean.is_finite() {
            return Err(domain(format!("dark-count mean {dark_mean:?} must be finite and >= 0")));
        }
        Ok(Self { eta, dark_mean })
    }

    /// Unit efficiency, no dark counts.
    pub fn ideal() -> Self {
        Self {
            eta: T::one(),
            dark_mean: T::zero(),
        }
    }

    /// Probability of at least one dark count in a window.
    pub fn dark_click_probability(&self) -> T {
        -(-self.dark_mean).exp_m1()
    }
}

/// Fringe visibility of one interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceModel<T> {
    pub visibility: T,
}

impl<T: Real> InterferenceModel<T> {
    pub fn new(visibility: T) -> Result<Self> {
        if !(visibility >= T::zero() && visibility <= T::one()) {
            return Err(domain(format!("visibility {visibility:?} outside [0, 1]")));
        }
        Ok(Self { visibility })
    }

    pub fn perfect() -> Self {
        Self {
            visibility: T::one(),
        }
    }
}

/// Mean photon number reaching a detector port under partial coherence:
/// `V·|coherent_sum|² + (1−V)·incoherent_sum`.
pub fn port_mean_photons<T: Real>(
    coherent_sum: ComplexAmplitude<T>,
    incoherent_sum_of_intensities: T,
    vis: &InterferenceModel<T>,
) -> Result<T> {
    if !(incoherent_sum_of_intensities >= T::zero()) {
        return Err(domain(format!(
            "incoherent intensity {incoherent_sum_of_intensities:?} is negative"
        )));
    }
    let v = vis.visibility;
    Ok(v * coherent_sum.intensity() + (T::one() - v) * incoherent_sum_of_intensities)
}

/// Probability of a click for a coherent input of mean photon number `n`:
/// `1 − (1 − p_dark)·e^{−ηn}`.
pub fn click_probability<T: Real>(n: T, det: &DetectorModel<T>) -> Result<T> {
    if !(n >= T::zero()) {
        return Err(domain(format!("mean photon number {n:?} is negative")));
    }
    // (1 − p_dark)·e^{−ηn} = e^{−dark − ηn}
    Ok(-(-(det.dark_mean + det.eta * n)).exp_m1())
}

/// Probability of correctly identifying `α₁`:
/// `1 − exp(−η₂·(1−T₀)/(2−T₀)·|α₁−α₂|²)`.
pub fn analytic_p1<T: Real>(alpha_1: ComplexAmplitude<T>, alpha_2: ComplexAmplitude<T>, t0: T, eta2: T) -> T {
    let two = T::lit(2.0);
    let factor = (T::one() - t0) / (two - t0);
    -(-(eta2 * factor * (alpha_1 - alpha_2).intensity())).exp_m1()
}

/// Probability of correctly identifying `α₂`:
/// `1 − exp(−η₁·T₀/(1+T₀)·|α₁−α₂|²)`.
pub fn analytic_p2<T: Real>(alpha_1: ComplexAmplitude<T>, alpha_2: ComplexAmplitude<T>, t0: T, eta1: T) -> T {
    let factor = t0 / (T::one() + t0);
    -(-(eta1 * factor * (alpha_1 - alpha_2).intensity())).exp_m1()
}

/// Success probability for hypothesis `k` of the N-state network without
/// dark counts: `∏_{j≠k} (1 − e^{−η|α_j−α_k|²/(n+1)})`.
pub fn analytic_nstate_success<T: Real>(
    programs: &[ComplexAmplitude<T>],
    k: usize,
    plan: &NStatePlan,
    det: &DetectorModel<T>,
) -> Result<T> {
    if programs.len() != plan.n() {
        return Err(domain(format!(
            "plan expects {} program states, got {}",
            plan.n(),
            programs.len()
        )));
    }
    if k >= programs.len() {
        return Err(domain(format!("hypothesis index {k} out of range")));
    }
    let r = plan.reflectance::<T>();
    let truth = programs[k];
    Ok(programs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, p)| -(-(det.eta * r * (*p - truth).intensity())).exp_m1())
        .fold(T::one(), |acc, x| acc * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::from_intensity_phase;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type C = ComplexAmplitude<f64>;

    fn det(eta: f64, dark: f64) -> DetectorModel<f64> {
        DetectorModel::new(eta, dark).unwrap()
    }

    #[test]
    fn ideal_visibility_is_coherent() {
        let c = C::new(0.3, 0.4);
        let n = port_mean_photons(c, 7.0, &InterferenceModel::perfect()).unwrap();
        assert!((n - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fringe_visibility_equals_parameter() {
        let intensity: f64 = 0.8;
        let vis = InterferenceModel::new(0.98).unwrap();
        let arm = C::new(intensity.sqrt(), 0.0);
        let max = port_mean_photons(arm + arm, 2.0 * intensity, &vis).unwrap();
        let min = port_mean_photons(arm - arm, 2.0 * intensity, &vis).unwrap();
        assert!((min - 0.04 * intensity).abs() < 1e-12);
        assert!(((max - min) / (max + min) - 0.98).abs() < 1e-12);
    }

    #[test]
    fn zero_visibility_is_incoherent() {
        let vis = InterferenceModel::new(0.0).unwrap();
        assert_eq!(port_mean_photons(C::new(2.0, 0.0), 1.5, &vis).unwrap(), 1.5);
        assert!(port_mean_photons(C::zero(), -1.0, &vis).is_err());
    }

    #[test]
    fn click_probability_examples() {
        let p = click_probability(0.0, &det(0.53, 4e-7)).unwrap();
        assert!((p - 4e-7).abs() < 1e-12);
        assert_eq!(click_probability(0.0, &det(0.53, 0.0)).unwrap(), 0.0);
        let p = click_probability(4.0 / 3.0, &det(0.53, 0.0)).unwrap();
        assert!((p - 0.5067).abs() < 5e-5);
        assert!((p - (1.0 - (-0.53f64 * 4.0 / 3.0).exp())).abs() < 1e-15);
        assert!(click_probability(-0.1, &det(0.5, 0.0)).is_err());
    }

    #[test]
    fn detector_validation() {
        assert!(DetectorModel::new(1.2, 0.0).is_err());
        assert!(DetectorModel::new(0.5, -1e-9).is_err());
        assert!(InterferenceModel::new(1.01).is_err());
    }

    #[test]
    fn p1_examples() {
        let a = C::new(1.0, 0.0);
        assert_eq!(analytic_p1(a, a, 0.5, 0.53), 0.0);
        let p = analytic_p1(C::new(1.0, 0.0), C::new(-1.0, 0.0), 0.5, 1.0);
        assert!((p - 0.7364).abs() < 5e-5);
        let a1 = from_intensity_phase(2.0, 0.0).unwrap();
        let a2 = from_intensity_phase(2.0, PI).unwrap();
        assert!(((a1 - a2).intensity() - 8.0).abs() < 1e-12);
        assert!((analytic_p1(a1, a2, 0.5, 0.53) - 0.7567).abs() < 5e-5);
    }

    #[test]
    fn p2_examples() {
        let (a1, a2) = (C::new(1.0, 0.0), C::new(-1.0, 0.0));
        assert_eq!(analytic_p1(a1, a2, 0.5, 0.53), analytic_p2(a1, a2, 0.5, 0.53));
        assert_eq!(analytic_p2(a1, a1, 0.5, 0.53), 0.0);
        let b2 = C::new(1.0 - 2f64.sqrt(), 0.0);
        let p = analytic_p2(a1, b2, 1.0, 1.0);
        assert!((p - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert!((p - 0.6321).abs() < 5e-5);
    }

    #[test]
    fn nstate_two_reduces_to_two_state() {
        let programs = [C::new(0.9, 0.2), C::new(-0.4, 0.7)];
        let plan = NStatePlan::new(2).unwrap();
        let d = det(0.53, 0.0);
        let s0 = analytic_nstate_success(&programs, 0, &plan, &d).unwrap();
        let s1 = analytic_nstate_success(&programs, 1, &plan, &d).unwrap();
        assert!((s0 - analytic_p1(programs[0], programs[1], 0.5, 0.53)).abs() < 1e-15);
        assert!((s1 - analytic_p2(programs[0], programs[1], 0.5, 0.53)).abs() < 1e-15);
    }

    #[test]
    fn nstate_identical_programs_never_succeed() {
        let a = C::new(1.0, 0.0);
        let plan = NStatePlan::new(4).unwrap();
        assert_eq!(analytic_nstate_success(&[a; 4], 2, &plan, &det(1.0, 0.0)).unwrap(), 0.0);
        assert!(analytic_nstate_success(&[a; 3], 0, &plan, &det(1.0, 0.0)).is_err());
    }

    #[test]
    fn nstate_success_decreases_with_n() {
        // Truth at the origin, every other program at distance² = 4.
        let mut prev = f64::INFINITY;
        for n in 2..=8 {
            let mut programs = vec![C::zero()];
            programs.extend((1..n).map(|j| C::from_polar(2.0, j as f64)));
            let plan = NStatePlan::new(n).unwrap();
            let s = analytic_nstate_success(&programs, 0, &plan, &det(0.53, 0.0)).unwrap();
            assert!(s < prev, "n = {n}: {s} !< {prev}");
            prev = s;
        }
    }

    proptest! {
        #[test]
        fn click_probability_is_a_probability(n in 0.0f64..50.0, eta in 0.0f64..=1.0, dark in 0.0f64..2.0) {
            let d = det(eta, dark);
            let p = click_probability(n, &d).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
            let p_more = click_probability(n + 0.5, &d).unwrap();
            prop_assert!(p_more >= p);
            let p_dark_only = click_probability(n, &det(eta, 0.0)).unwrap();
            prop_assert!((p_dark_only - (1.0 - (-eta * n).exp())).abs() < 1e-15);
        }

        #[test]
        fn analytic_global_phase_invariance(
            r1 in 0.0f64..2.0, r2 in 0.0f64..2.0, p1 in -4.0f64..4.0, p2 in -4.0f64..4.0,
            theta in -4.0f64..4.0, t0 in 0.0f64..=1.0,
        ) {
            let a1 = C::from_polar(r1, p1);
            let a2 = C::from_polar(r2, p2);
            let b1 = C::from_polar(r1, p1 + theta);
            let b2 = C::from_polar(r2, p2 + theta);
            prop_assert!((analytic_p1(a1, a2, t0, 0.53) - analytic_p1(b1, b2, t0, 0.53)).abs() < 1e-12);
            prop_assert!((analytic_p2(a1, a2, t0, 0.53) - analytic_p2(b1, b2, t0, 0.53)).abs() < 1e-12);
        }

        #[test]
        fn mean_photons_linear_in_visibility(re in -2.0f64..2.0, im in -2.0f64..2.0, inc in 0.0f64..8.0, v in 0.0f64..=1.0) {
            let c = C::new(re, im);
            let n = port_mean_photons(c, inc, &InterferenceModel::new(v).unwrap()).unwrap();
            let coherent = port_mean_photons(c, inc, &InterferenceModel::perfect()).unwrap();
            let incoherent = port_mean_photons(c, inc, &InterferenceModel::new(0.0).unwrap()).unwrap();
            prop_assert!((n - (v * coherent + (1.0 - v) * incoherent)).abs() < 1e-12);
        }
    }
}
