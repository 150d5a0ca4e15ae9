//! Slow interferometric phase drift and the dither-and-lock stabilizer that
//! corrects it between measurement blocks.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Normal};

use crate::error::{config, domain, Result};

/// Random-walk drift of the interferometer phases, one step per block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftModel {
    /// Standard deviation of the per-block phase increment, in radians.
    pub sigma: f64,
}

impl DriftModel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(domain(format!("drift sigma {sigma} must be finite and >= 0")));
        }
        Ok(Self { sigma })
    }

    pub fn none() -> Self {
        Self { sigma: 0.0 }
    }

    pub fn is_active(&self) -> bool {
        self.sigma > 0.0
    }
}

impl Default for DriftModel {
    fn default() -> Self {
        Self::none()
    }
}

/// Instantaneous phase error of each interferometer's unknown-state arm.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftState {
    pub phases: Vec<f64>,
}

impl DriftState {
    pub fn locked(interferometers: usize) -> Self {
        Self {
            phases: vec![0.0; interferometers],
        }
    }
}

/// Advances every phase by an independent `Normal(0, σ²)` step.
pub fn evolve<R: Rng + ?Sized>(drift: &DriftModel, state: &mut DriftState, rng: &mut R) {
    if !drift.is_active() {
        return;
    }
    let step = Normal::new(0.0, drift.sigma).expect("sigma validated at construction");
    for phi in &mut state.phases {
        *phi += step.sample(rng);
    }
}

/// Dither-and-lock parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizerConfig {
    pub enabled: bool,
    /// Calibration pulses per probe setting. Each interferometer is probed
    /// at three settings per block.
    pub probe_trials: u64,
    /// Phase offset applied during the probes, in radians.
    pub dither: f64,
    /// Fraction of the estimated error removed per correction.
    pub gain: f64,
    /// Mean photon number of the known probe state sent through both arms.
    pub probe_intensity: f64,
}

impl StabilizerConfig {
    pub fn disabled() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.enabled {
            return Ok(());
        }
        if self.probe_trials == 0 {
            return Err(config("stabilizer needs probe_trials > 0"));
        }
        if !(self.dither > 0.0 && self.dither < std::f64::consts::PI) {
            return Err(config(format!("stabilizer dither {} must be in (0, π)", self.dither)));
        }
        if !(self.gain > 0.0 && self.gain <= 1.0) {
            return Err(config(format!("stabilizer gain {} must be in (0, 1]", self.gain)));
        }
        if !(self.probe_intensity > 0.0) || !self.probe_intensity.is_finite() {
            return Err(config("stabilizer probe intensity must be positive"));
        }
        Ok(())
    }
}

impl Default for StabilizerConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            probe_trials: 100_000,
            dither: 0.5,
            gain: 0.8,
            probe_intensity: 1.0,
        }
    }
}

/// What one stabilization pass measured and spent.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationReport {
    /// Estimated phase error per interferometer before correction.
    pub estimates: Vec<f64>,
    /// Calibration pulses consumed. These never enter measurement counts.
    pub probe_pulses: u64,
}

/// Probes each interferometer's dark port at `φ−δ`, `φ`, `φ+δ` and removes
/// `gain` times the estimated phase error.
///
/// `click_probability(j, φ)` gives the dark-port click probability of
/// interferometer `j` for a probe whose arm carries the total phase error
/// `φ`. The dark-port rate follows `y(φ) = B + A(1 − cos φ)` after the
/// transform `y = −ln(1 − f)`, so
///
/// ```text
/// tan φ = (y₊ − y₋)(1 − cos δ) / ((y₊ + y₋ − 2y₀) sin δ)
/// ```
///
/// which needs neither the probe intensity, the detector efficiency, nor
/// the visibility.
pub fn stabilize<R, F>(
    state: &mut DriftState,
    cfg: &StabilizerConfig,
    click_probability: F,
    rng: &mut R,
) -> Result<StabilizationReport>
where
    R: Rng + ?Sized,
    F: Fn(usize, f64) -> f64,
{
    if !cfg.enabled {
        return Err(config("stabilize called with the stabilizer disabled"));
    }
    cfg.validate()?;

    let mut estimates = Vec::with_capacity(state.phases.len());
    for (j, phi) in state.phases.iter_mut().enumerate() {
        let mut probe = |offset: f64| -> Result<f64> {
            let p = click_probability(j, *phi + offset).clamp(0.0, 1.0);
            let clicks = Binomial::new(cfg.probe_trials, p)
                .map_err(|e| domain(format!("probe click probability {p}: {e}")))?
                .sample(rng);
            Ok(linearized_rate(clicks, cfg.probe_trials))
        };
        let minus = probe(-cfg.dither)?;
        let centre = probe(0.0)?;
        let plus = probe(cfg.dither)?;

        let (sin_d, cos_d) = cfg.dither.sin_cos();
        let estimate = ((plus - minus) * (1.0 - cos_d)).atan2((plus + minus - 2.0 * centre) * sin_d);
        *phi -= cfg.gain * estimate;
        estimates.push(estimate);
    }

    Ok(StabilizationReport {
        estimates,
        probe_pulses: 3 * cfg.probe_trials * state.phases.len() as u64,
    })
}

/// `−ln(1 − f)` of the observed click fraction, which is linear in the mean
/// photon number for threshold detectors. Saturated probes are pulled back
/// by half a count.
fn linearized_rate(clicks: u64, trials: u64) -> f64 {
    let n = trials as f64;
    let f = (clicks as f64).min(n - 0.5) / n;
    -(-f).ln_1p()
}

/// Fringe contrast an interferometer shows when its arms carry a residual
/// phase error `phi`, relative to a perfectly locked one.
pub fn visibility_equivalent(phi: f64) -> f64 {
    phi.cos()
}

/// Phase history of a drift/stabilization run with no measurement attached.
#[derive(Debug, Clone, PartialEq)]
pub struct LockTrace {
    /// Phase errors seen by each block's measurement, after correction.
    pub measured: Vec<Vec<f64>>,
    /// Phase errors once the final block's drift has been applied.
    pub final_phases: Vec<f64>,
    pub probe_pulses: u64,
}

impl LockTrace {
    /// Mean of `visibility_equivalent` over blocks and interferometers.
    pub fn mean_visibility_equivalent(&self) -> f64 {
        let (sum, count) = self
            .measured
            .iter()
            .flatten()
            .fold((0.0, 0usize), |(s, c), &phi| (s + visibility_equivalent(phi), c + 1));
        if count == 0 {
            1.0
        } else {
            sum / count as f64
        }
    }
}

/// Runs `blocks` rounds of: stabilize (if enabled), record, drift.
pub fn simulate_lock<R, F>(
    interferometers: usize,
    blocks: usize,
    drift: &DriftModel,
    cfg: &StabilizerConfig,
    click_probability: F,
    rng: &mut R,
) -> Result<LockTrace>
where
    R: Rng + ?Sized,
    F: Fn(usize, f64) -> f64,
{
    let mut state = DriftState::locked(interferometers);
    let mut measured = Vec::with_capacity(blocks);
    let mut probe_pulses = 0;
    for _ in 0..blocks {
        if cfg.enabled {
            probe_pulses += stabilize(&mut state, cfg, &click_probability, rng)?.probe_pulses;
        }
        measured.push(state.phases.clone());
        evolve(drift, &mut state, rng);
    }
    Ok(LockTrace {
        measured,
        final_phases: state.phases,
        probe_pulses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Dark port of a balanced MZ with efficiency 0.53, probe intensity 1/3
    /// per arm and visibility 0.98.
    fn dark_port(_: usize, phi: f64) -> f64 {
        let arm = 1.0 / 3.0;
        let coherent = 2.0 * arm * (1.0 - phi.cos());
        let n = 0.98 * coherent + 0.02 * 2.0 * arm;
        1.0 - (-0.53 * n).exp()
    }

    #[test]
    fn zero_sigma_freezes_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut state = DriftState {
            phases: vec![0.3, -0.2],
        };
        evolve(&DriftModel::none(), &mut state, &mut rng);
        assert_eq!(state.phases, vec![0.3, -0.2]);
        assert!(DriftModel::new(-0.1).is_err());
    }

    #[test]
    fn random_walk_variance_grows_linearly() {
        let drift = DriftModel::new(0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let paths = 20_000;
        let steps = 9;
        let mut finals = Vec::with_capacity(paths);
        for _ in 0..paths {
            let mut s = DriftState::locked(1);
            for _ in 0..steps {
                evolve(&drift, &mut s, &mut rng);
            }
            finals.push(s.phases[0]);
        }
        let mean = finals.iter().sum::<f64>() / paths as f64;
        let var = finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (paths - 1) as f64;
        let want = steps as f64 * 0.05f64.powi(2);
        // Sample variance of a normal has relative sd √(2/(N−1)) ≈ 1%.
        assert!((var / want - 1.0).abs() < 0.05, "var {var} vs {want}");
        // Symmetric about the start.
        assert!(mean.abs() < 4.0 * (want / paths as f64).sqrt());
    }

    #[test]
    fn locked_interferometer_needs_no_correction() {
        let cfg = StabilizerConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut sum = 0.0;
        let runs = 200;
        for _ in 0..runs {
            let mut s = DriftState::locked(1);
            let report = stabilize(&mut s, &cfg, dark_port, &mut rng).unwrap();
            sum += report.estimates[0];
        }
        assert!((sum / runs as f64).abs() < 5e-3);
    }

    #[test]
    fn large_error_is_reduced() {
        let cfg = StabilizerConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &phi in &[0.6, -0.9, 1.4, 2.5] {
            let mut s = DriftState { phases: vec![phi] };
            stabilize(&mut s, &cfg, dark_port, &mut rng).unwrap();
            assert!(s.phases[0].abs() < phi.abs() * 0.5, "{phi} -> {}", s.phases[0]);
        }
    }

    #[test]
    fn probe_pulses_are_accounted() {
        let cfg = StabilizerConfig {
            probe_trials: 10,
            ..StabilizerConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = DriftState::locked(2);
        let report = stabilize(&mut s, &cfg, dark_port, &mut rng).unwrap();
        assert_eq!(report.probe_pulses, 60);
    }

    #[test]
    fn invalid_stabilizer_configs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = DriftState::locked(1);
        let zero = StabilizerConfig {
            probe_trials: 0,
            ..StabilizerConfig::default()
        };
        assert!(matches!(
            stabilize(&mut s, &zero, dark_port, &mut rng),
            Err(crate::Error::Config(_))
        ));
        let no_dither = StabilizerConfig {
            dither: 0.0,
            ..StabilizerConfig::default()
        };
        assert!(no_dither.validate().is_err());
        assert!(stabilize(&mut s, &StabilizerConfig::disabled(), dark_port, &mut rng).is_err());
    }

    #[test]
    fn stabilized_paths_stay_locked() {
        let drift = DriftModel::new(0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let on = simulate_lock(2, 100, &drift, &StabilizerConfig::default(), dark_port, &mut rng).unwrap();
        assert!(on.mean_visibility_equivalent() > 0.99);
        assert_eq!(on.measured.len(), 100);
        assert_eq!(on.probe_pulses, 100 * 2 * 3 * 100_000);
    }
}
