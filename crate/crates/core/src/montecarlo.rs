//! Per-pulse Monte Carlo engine.
//!
//! Every trial draws its randomness from its own ChaCha8 stream, selected by
//! the global trial index under a key derived from the experiment seed. The
//! result of an experiment is therefore a pure function of the
//! configuration, whatever the number of workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::detection::{click_probability, port_mean_photons, DetectorModel, InterferenceModel};
use crate::discriminator::{
    classify, derive_plan, detector_amplitudes_with_phase_errors, nstate_amplitudes_with_phase_errors, NStatePlan,
    Outcome, PortAmplitudes, SplitterPlan,
};
use crate::drift::{evolve, stabilize, DriftModel, DriftState, StabilizerConfig};
use crate::error::{config, Error, Result};
use crate::optics::ComplexAmplitude;

type Amplitude = ComplexAmplitude<f64>;

/// Upper bound on program states; click patterns are kept on the stack.
pub const MAX_PROGRAMS: usize = 64;

/// Detector efficiency measured for both detectors of the experiment.
pub const DEFAULT_EFFICIENCY: f64 = 0.53;
/// Mean dark counts per 8 ns coincidence window.
pub const DEFAULT_DARK_MEAN: f64 = 4e-7;
/// Operating fringe visibility of each interferometer.
pub const DEFAULT_VISIBILITY: f64 = 0.98;
/// Ten blocks of 10⁵ pulses.
pub const DEFAULT_BLOCKS: u32 = 10;
pub const DEFAULT_TRIALS_PER_BLOCK: u64 = 100_000;

const TRIALS_PER_CHUNK: u64 = 1 << 14;
const DRIFT_KEY: u64 = 0x6a09_e667_f3bc_c908;
const PROBE_KEY: u64 = 0xbb67_ae85_84ca_a73b;

/// Interferometric network the unknown state is sent through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Network {
    TwoState(SplitterPlan<f64>),
    NState(NStatePlan),
}

impl Network {
    pub fn ports(&self) -> usize {
        match self {
            Network::TwoState(_) => 2,
            Network::NState(plan) => plan.n(),
        }
    }

    /// Detector fields with the given phase error on each unknown-state arm.
    pub fn port_fields(&self, unknown: Amplitude, programs: &[Amplitude], phase_errors: &[f64]) -> Result<PortAmplitudes<f64>> {
        match self {
            Network::TwoState(plan) => {
                if programs.len() != 2 || phase_errors.len() != 2 {
                    return Err(config("two-state network needs 2 programs and 2 phase errors"));
                }
                Ok(detector_amplitudes_with_phase_errors(
                    unknown,
                    programs[0],
                    programs[1],
                    plan,
                    [phase_errors[0], phase_errors[1]],
                ))
            }
            Network::NState(plan) => nstate_amplitudes_with_phase_errors(unknown, programs, plan, phase_errors),
        }
    }
}

/// Everything that defines one simulated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub programs: Vec<Amplitude>,
    pub network: Network,
    /// One per port; `detectors[0]` is D₁.
    pub detectors: Vec<DetectorModel<f64>>,
    /// One per interferometer.
    pub interference: Vec<InterferenceModel<f64>>,
    /// Prior probability of each program state being the unknown.
    pub priors: Vec<f64>,
    pub trials_per_block: u64,
    pub blocks: u32,
    pub seed: u64,
    pub drift: DriftModel,
    pub stabilizer: StabilizerConfig,
}

impl ExperimentConfig {
    /// Two-state experiment with the measured detector and visibility
    /// parameters, uniform priors and no drift.
    pub fn two_state(alpha_1: Amplitude, alpha_2: Amplitude, t0: f64) -> Result<Self> {
        Ok(Self::with_network(vec![alpha_1, alpha_2], Network::TwoState(derive_plan(t0)?)))
    }

    /// N-state experiment with the same defaults as [`Self::two_state`].
    pub fn n_state(programs: Vec<Amplitude>) -> Result<Self> {
        let plan = NStatePlan::new(programs.len())?;
        Ok(Self::with_network(programs, Network::NState(plan)))
    }

    fn with_network(programs: Vec<Amplitude>, network: Network) -> Self {
        let n = programs.len();
        Self {
            programs,
            network,
            detectors: vec![DetectorModel { eta: DEFAULT_EFFICIENCY, dark_mean: DEFAULT_DARK_MEAN }; n],
            interference: vec![InterferenceModel { visibility: DEFAULT_VISIBILITY }; n],
            priors: vec![1.0 / n as f64; n],
            trials_per_block: DEFAULT_TRIALS_PER_BLOCK,
            blocks: DEFAULT_BLOCKS,
            seed: 0,
            drift: DriftModel::none(),
            stabilizer: StabilizerConfig::disabled(),
        }
    }

    /// Unit efficiency, no dark counts, perfect visibility.
    pub fn ideal(mut self) -> Self {
        let n = self.ports();
        self.detectors = vec![DetectorModel::ideal(); n];
        self.interference = vec![InterferenceModel::perfect(); n];
        self
    }

    pub fn with_detectors(mut self, detector: DetectorModel<f64>) -> Self {
        self.detectors = vec![detector; self.ports()];
        self
    }

    pub fn with_visibility(mut self, vis: InterferenceModel<f64>) -> Self {
        self.interference = vec![vis; self.ports()];
        self
    }

    pub fn with_trials(mut self, trials_per_block: u64, blocks: u32) -> Self {
        self.trials_per_block = trials_per_block;
        self.blocks = blocks;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Every trial uses program `k` as the unknown state.
    pub fn with_truth(mut self, k: usize) -> Self {
        let mut priors = vec![0.0; self.ports()];
        if let Some(p) = priors.get_mut(k) {
            *p = 1.0;
        }
        self.priors = priors;
        self
    }

    pub fn ports(&self) -> usize {
        self.network.ports()
    }

    pub fn total_trials(&self) -> u64 {
        self.trials_per_block.saturating_mul(self.blocks as u64)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.ports();
        if n > MAX_PROGRAMS {
            return Err(config(format!("at most {MAX_PROGRAMS} program states supported, got {n}")));
        }
        for (what, len) in [
            ("program states", self.programs.len()),
            ("detectors", self.detectors.len()),
            ("interference models", self.interference.len()),
            ("priors", self.priors.len()),
        ] {
            if len != n {
                return Err(config(format!("network has {n} ports but {len} {what}")));
            }
        }
        if self.programs.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(config("program amplitudes must be finite"));
        }
        for d in &self.detectors {
            DetectorModel::new(d.eta, d.dark_mean)?;
        }
        for v in &self.interference {
            InterferenceModel::new(v.visibility)?;
        }
        if self.priors.iter().any(|p| !(*p >= 0.0)) {
            return Err(config("priors must be non-negative"));
        }
        let total: f64 = self.priors.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(config(format!("priors sum to {total}, not 1")));
        }
        if self.trials_per_block == 0 {
            return Err(config("trials_per_block must be at least 1"));
        }
        if self.blocks == 0 {
            return Err(config("blocks must be at least 1"));
        }
        if self.trials_per_block.checked_mul(self.blocks as u64).is_none() {
            return Err(config("total trial count overflows a 64-bit counter"));
        }
        self.stabilizer.validate()
    }

    /// Click probability of every detector for every hypothesis, given the
    /// arm phase errors of the current block.
    pub fn click_table(&self, phase_errors: &[f64]) -> Result<ClickTable> {
        let n = self.ports();
        if phase_errors.len() != n {
            return Err(config(format!("expected {n} phase errors, got {}", phase_errors.len())));
        }
        let mut probabilities = Vec::with_capacity(n);
        for &unknown in &self.programs {
            let ports = self.network.port_fields(unknown, &self.programs, phase_errors)?;
            probabilities.push(self.port_click_probabilities(&ports)?);
        }

        let mut cumulative = Vec::with_capacity(n);
        let mut acc = 0.0;
        for p in &self.priors {
            acc += p;
            cumulative.push(acc);
        }
        if let Some(last) = self.priors.iter().rposition(|&p| p > 0.0) {
            for c in &mut cumulative[last..] {
                *c = f64::INFINITY;
            }
        }
        Ok(ClickTable {
            cumulative_priors: cumulative,
            probabilities,
        })
    }

    fn port_click_probabilities(&self, ports: &PortAmplitudes<f64>) -> Result<Vec<f64>> {
        (0..ports.len())
            .map(|j| {
                let n = port_mean_photons(ports.d[j], ports.incoherent[j], &self.interference[j])?;
                click_probability(n, &self.detectors[j])
            })
            .collect()
    }

    /// Dark-port click probability of interferometer `j` for a calibration
    /// pulse of the stabilizer's probe intensity, sent through both the
    /// unknown-state input and every program input, with arm phase `phi`.
    pub fn probe_click_probability(&self, j: usize, phi: f64) -> f64 {
        let n = self.ports();
        let probe = Amplitude::new(self.stabilizer.probe_intensity.sqrt(), 0.0);
        let programs = vec![probe; n];
        let mut phases = vec![0.0; n];
        phases[j] = phi;
        self.network
            .port_fields(probe, &programs, &phases)
            .and_then(|ports| {
                let mean = port_mean_photons(ports.d[j], ports.incoherent[j], &self.interference[j])?;
                click_probability(mean, &self.detectors[j])
            })
            .expect("configuration validated before probing")
    }
}

/// Per-block lookup of prior and click probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ClickTable {
    cumulative_priors: Vec<f64>,
    /// `probabilities[truth][port]`.
    probabilities: Vec<Vec<f64>>,
}

impl ClickTable {
    pub fn probability(&self, truth: usize, port: usize) -> f64 {
        self.probabilities[truth][port]
    }

    /// Draws one trial: the true hypothesis, then one uniform per detector.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TrialOutcome {
        let u: f64 = rng.random();
        let truth = self
            .cumulative_priors
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative_priors.len() - 1);
        let probs = &self.probabilities[truth];
        let mut clicks = [false; MAX_PROGRAMS];
        for (click, &p) in clicks.iter_mut().zip(probs) {
            *click = rng.random::<f64>() < p;
        }
        let outcome = Outcome::resolve(classify(&clicks[..probs.len()]), truth);
        TrialOutcome { truth, outcome }
    }
}

/// Result of one triggered pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrialOutcome {
    pub truth: usize,
    pub outcome: Outcome,
}

/// Random stream of trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs a single trial with explicit arm phase errors.
pub fn run_trial(cfg: &ExperimentConfig, trial_index: u64, phase_errors: &[f64]) -> Result<TrialOutcome> {
    cfg.validate()?;
    let table = cfg.click_table(phase_errors)?;
    Ok(table.sample(&mut trial_rng(cfg.seed, trial_index)))
}

/// Outcome tallies, indexed by the true hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Counts {
    pub c_plus: Vec<u64>,
    pub c_minus: Vec<u64>,
    /// Clicks that left zero or several hypotheses standing.
    pub double_clicks: u64,
    pub no_clicks: u64,
    pub c_tot: u64,
}

impl Counts {
    pub fn zero(n: usize) -> Self {
        Self {
            c_plus: vec![0; n],
            c_minus: vec![0; n],
            ..Self::default()
        }
    }

    pub fn record(&mut self, trial: &TrialOutcome) {
        match trial.outcome {
            Outcome::Identified(_) => self.c_plus[trial.truth] += 1,
            Outcome::Erroneous { .. } => self.c_minus[trial.truth] += 1,
            Outcome::InconclusiveNoClick => self.no_clicks += 1,
            Outcome::InconclusiveMultiClick => self.double_clicks += 1,
        }
        self.c_tot += 1;
    }

    pub fn merge(mut self, other: &Counts) -> Self {
        for (a, b) in self.c_plus.iter_mut().zip(&other.c_plus) {
            *a += b;
        }
        for (a, b) in self.c_minus.iter_mut().zip(&other.c_minus) {
            *a += b;
        }
        self.double_clicks += other.double_clicks;
        self.no_clicks += other.no_clicks;
        self.c_tot += other.c_tot;
        self
    }

    pub fn conclusive(&self) -> u64 {
        self.c_plus.iter().chain(&self.c_minus).sum()
    }

    pub fn erroneous(&self) -> u64 {
        self.c_minus.iter().sum()
    }

    pub fn inconclusive(&self) -> u64 {
        self.double_clicks + self.no_clicks
    }

    /// Checks that every trial landed in exactly one bin.
    pub fn check_partition(&self) -> Result<()> {
        let binned = self.conclusive() + self.inconclusive();
        if binned != self.c_tot {
            return Err(Error::Invariant(format!(
                "{binned} binned outcomes for {} trials",
                self.c_tot
            )));
        }
        Ok(())
    }
}

/// Measured fractions `C/C_tot` with block-wise standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Fractions {
    pub p_plus: Vec<f64>,
    pub p_minus: Vec<f64>,
    pub p_inconclusive: f64,
    pub stderr_plus: Vec<f64>,
    pub stderr_minus: Vec<f64>,
    pub stderr_inconclusive: f64,
}

impl Fractions {
    /// Fractions of the pooled counts; errors are the spread of per-block
    /// fractions over `√blocks`, or the binomial error for a single block.
    pub fn from_blocks(pooled: &Counts, blocks: &[Counts]) -> Self {
        let tot = pooled.c_tot.max(1) as f64;
        let n = pooled.c_plus.len();
        let frac = |c: u64| c as f64 / tot;
        let spread = |pooled_p: f64, per_block: &dyn Fn(&Counts) -> u64| -> f64 {
            if blocks.len() < 2 {
                return binomial_stderr(pooled_p, pooled.c_tot.max(1));
            }
            let values: Vec<f64> = blocks
                .iter()
                .map(|b| per_block(b) as f64 / b.c_tot.max(1) as f64)
                .collect();
            let m = values.len() as f64;
            let mean = values.iter().sum::<f64>() / m;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
            (var / m).sqrt()
        };

        let p_plus: Vec<f64> = pooled.c_plus.iter().map(|&c| frac(c)).collect();
        let p_minus: Vec<f64> = pooled.c_minus.iter().map(|&c| frac(c)).collect();
        let p_inconclusive = frac(pooled.inconclusive());
        let stderr_plus = (0..n).map(|j| spread(p_plus[j], &|b| b.c_plus[j])).collect();
        let stderr_minus = (0..n).map(|j| spread(p_minus[j], &|b| b.c_minus[j])).collect();
        let stderr_inconclusive = spread(p_inconclusive, &|b| b.inconclusive());
        Self {
            p_plus,
            p_minus,
            p_inconclusive,
            stderr_plus,
            stderr_minus,
            stderr_inconclusive,
        }
    }

    pub fn conclusive(&self) -> f64 {
        self.p_plus.iter().chain(&self.p_minus).sum()
    }

    pub fn check_ranges(&self) -> Result<()> {
        let all = self.p_plus.iter().chain(&self.p_minus).chain([&self.p_inconclusive]);
        for p in all {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Invariant(format!("fraction {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// `√(p(1−p)/n)`.
pub fn binomial_stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// How trials are spread over threads. Results never depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// Everything on the calling thread.
    Sequential,
    /// Rayon's global pool.
    #[default]
    Parallel,
    /// A dedicated pool with this many threads.
    Workers(usize),
}

/// Full output of [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub blocks: Vec<Counts>,
    pub pooled: Counts,
    pub fractions: Fractions,
    /// Arm phase errors in force during each block.
    pub phase_trace: Vec<Vec<f64>>,
    /// Stabilizer calibration pulses, kept out of `pooled`.
    pub probe_pulses: u64,
}

/// Runs the experiment on Rayon's global pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(cfg, Execution::Parallel)
}

pub fn run_experiment_with(cfg: &ExperimentConfig, execution: Execution) -> Result<ExperimentResult> {
    cfg.validate()?;
    match execution {
        Execution::Workers(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| config(format!("cannot build worker pool: {e}")))?;
            pool.install(|| run_blocks(cfg, true))
        }
        Execution::Parallel => run_blocks(cfg, true),
        Execution::Sequential => run_blocks(cfg, false),
    }
}

fn run_blocks(cfg: &ExperimentConfig, parallel: bool) -> Result<ExperimentResult> {
    let n = cfg.ports();
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut drift_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ DRIFT_KEY);
    let probe_base = ChaCha8Rng::seed_from_u64(cfg.seed ^ PROBE_KEY);

    let mut state = DriftState::locked(n);
    let mut blocks = Vec::with_capacity(cfg.blocks as usize);
    let mut phase_trace = Vec::with_capacity(cfg.blocks as usize);
    let mut probe_pulses = 0u64;

    for block in 0..cfg.blocks as u64 {
        if cfg.stabilizer.enabled {
            let mut probe_rng = probe_base.clone();
            probe_rng.set_stream(block);
            let report = stabilize(
                &mut state,
                &cfg.stabilizer,
                |j, phi| cfg.probe_click_probability(j, phi),
                &mut probe_rng,
            )?;
            probe_pulses += report.probe_pulses;
        }
        phase_trace.push(state.phases.clone());

        let table = cfg.click_table(&state.phases)?;
        let first = block * cfg.trials_per_block;
        let counts = simulate_block(&table, &base, first, cfg.trials_per_block, n, parallel);
        counts.check_partition()?;
        blocks.push(counts);

        evolve(&cfg.drift, &mut state, &mut drift_rng);
    }

    let pooled = blocks.iter().fold(Counts::zero(n), |acc, b| acc.merge(b));
    pooled.check_partition()?;
    let fractions = Fractions::from_blocks(&pooled, &blocks);
    fractions.check_ranges()?;
    Ok(ExperimentResult {
        blocks,
        pooled,
        fractions,
        phase_trace,
        probe_pulses,
    })
}

fn simulate_block(table: &ClickTable, base: &ChaCha8Rng, first: u64, trials: u64, n: usize, parallel: bool) -> Counts {
    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    let chunk = |c: u64| {
        let start = first + c * TRIALS_PER_CHUNK;
        let end = (start + TRIALS_PER_CHUNK).min(first + trials);
        let mut counts = Counts::zero(n);
        for index in start..end {
            let mut rng = base.clone();
            rng.set_stream(index);
            counts.record(&table.sample(&mut rng));
        }
        counts
    };
    if parallel {
        (0..chunks)
            .into_par_iter()
            .map(chunk)
            .reduce(|| Counts::zero(n), |a, b| a.merge(&b))
    } else {
        (0..chunks).map(chunk).fold(Counts::zero(n), |a, b| a.merge(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::analytic_p2;
    use crate::discriminator::Outcome;

    fn amp(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    fn antipodal() -> ExperimentConfig {
        ExperimentConfig::two_state(amp(1.0), amp(-1.0), 0.5).unwrap()
    }

    #[test]
    fn null_port_never_clicks() {
        let cfg = antipodal().ideal().with_truth(0);
        for i in 0..2_000 {
            let t = run_trial(&cfg, i, &[0.0, 0.0]).unwrap();
            assert_eq!(t.truth, 0);
            assert!(matches!(t.outcome, Outcome::Identified(0) | Outcome::InconclusiveNoClick));
        }
    }

    #[test]
    fn identical_states_without_signal_click_only_in_the_dark() {
        let dark = 4e-3;
        let cfg = ExperimentConfig::two_state(amp(0.8), amp(0.8), 0.5)
            .unwrap()
            .with_detectors(DetectorModel::new(0.53, dark).unwrap())
            .with_visibility(InterferenceModel::perfect());
        let table = cfg.click_table(&[0.0, 0.0]).unwrap();
        let p_dark = 1.0 - (-dark).exp();
        for truth in 0..2 {
            for port in 0..2 {
                assert!((table.probability(truth, port) - p_dark).abs() < 1e-15);
            }
        }
        let result = run_experiment(&cfg.with_trials(50_000, 4)).unwrap();
        let no_click = result.pooled.no_clicks as f64 / result.pooled.c_tot as f64;
        let want = (1.0 - p_dark).powi(2);
        assert!((no_click - want).abs() < 4.0 * binomial_stderr(want, result.pooled.c_tot));
    }

    #[test]
    fn trials_are_reproducible() {
        let cfg = antipodal().with_seed(99);
        for i in [0, 1, 12345, u64::MAX - 1] {
            let a = run_trial(&cfg, i, &[0.1, -0.2]).unwrap();
            let b = run_trial(&cfg, i, &[0.1, -0.2]).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn fractions_partition_unity() {
        let cfg = antipodal().with_trials(20_000, 10).with_seed(4);
        let r = run_experiment(&cfg).unwrap();
        let total = r.fractions.conclusive() + r.fractions.p_inconclusive;
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(r.pooled.c_tot, 200_000);
        assert_eq!(r.pooled.conclusive() + r.pooled.inconclusive(), r.pooled.c_tot);
        assert_eq!(r.blocks.len(), 10);
        assert_eq!(r.probe_pulses, 0);
    }

    #[test]
    fn ideal_interference_has_no_errors() {
        let cfg = antipodal()
            .with_detectors(DetectorModel::new(0.53, 0.0).unwrap())
            .with_visibility(InterferenceModel::perfect())
            .with_trials(50_000, 4);
        let r = run_experiment(&cfg).unwrap();
        assert!(r.fractions.p_minus.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn conclusive_fraction_matches_analytic() {
        let cfg = antipodal()
            .with_detectors(DetectorModel::new(0.53, 0.0).unwrap())
            .with_visibility(InterferenceModel::perfect())
            .with_trials(100_000, 10)
            .with_seed(2024);
        let r = run_experiment(&cfg).unwrap();
        let want = analytic_p2(amp(1.0), amp(-1.0), 0.5, 0.53);
        assert!((want - 0.5067).abs() < 5e-5);
        let got = r.fractions.conclusive();
        assert!((got - want).abs() < 3.0 * binomial_stderr(want, r.pooled.c_tot), "{got} vs {want}");
    }

    #[test]
    fn execution_mode_does_not_change_results() {
        let cfg = antipodal().with_trials(40_000, 3).with_seed(17);
        let seq = run_experiment_with(&cfg, Execution::Sequential).unwrap();
        let par = run_experiment_with(&cfg, Execution::Workers(4)).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn probes_are_excluded_from_counts() {
        let mut cfg = antipodal().with_trials(1_000, 3);
        cfg.drift = DriftModel::new(0.05).unwrap();
        cfg.stabilizer = StabilizerConfig {
            probe_trials: 500,
            ..StabilizerConfig::default()
        };
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.pooled.c_tot, 3_000);
        assert_eq!(r.probe_pulses, 3 * 2 * 3 * 500);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = antipodal();
        cfg.priors = vec![0.7, 0.7];
        assert!(cfg.validate().is_err());
        assert!(antipodal().with_trials(0, 10).validate().is_err());
        let mut cfg = antipodal();
        cfg.detectors.pop();
        assert!(cfg.validate().is_err());
        assert!(antipodal().click_table(&[0.0]).is_err());
    }

    #[test]
    fn stderr_examples() {
        assert!((binomial_stderr(0.5, 100) - 0.05).abs() < 1e-15);
        assert_eq!(binomial_stderr(0.0, 1000), 0.0);
        assert!((binomial_stderr(0.5067, 1_000_000) - 5.0e-4).abs() < 5e-7);
    }

    #[test]
    fn block_stderr_is_spread_over_root_blocks() {
        let blocks = vec![
            Counts { c_plus: vec![1, 0], c_minus: vec![0, 0], double_clicks: 0, no_clicks: 9, c_tot: 10 },
            Counts { c_plus: vec![3, 0], c_minus: vec![0, 0], double_clicks: 0, no_clicks: 7, c_tot: 10 },
        ];
        let pooled = blocks.iter().fold(Counts::zero(2), |a, b| a.merge(b));
        let f = Fractions::from_blocks(&pooled, &blocks);
        assert!((f.p_plus[0] - 0.2).abs() < 1e-15);
        // values 0.1, 0.3: sd = √0.02, /√2 = 0.1
        assert!((f.stderr_plus[0] - 0.1).abs() < 1e-12);
        assert_eq!(f.stderr_plus[1], 0.0);
    }
}
