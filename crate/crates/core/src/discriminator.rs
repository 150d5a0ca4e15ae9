//! The discriminator network and click-pattern classifier.
//!
//! Two-state layout: the unknown state is split at BS₀. The transmitted arm
//! is transmitted through BS₁ onto D₁ while program state α₁ is reflected
//! into the same port. The reflected arm is reflected at BS₂ onto D₂ while
//! α₂ is transmitted into that port. A fixed `π/2` shifter on the α₁ input
//! compensates the reflection phases so that both detector fields take the
//! difference form
//!
//! ```text
//! d₁ ∝ √(T₀/(1+T₀))·(α? − α₁)      d₂ ∝ √((1−T₀)/(2−T₀))·(α₂ − α?)
//! ```
//!
//! and the ports are exactly dark when the unknown matches the program.
//!
//! N-state layout: the unknown is split equally into `n` arms and each arm
//! meets program `α_j` on a splitter with `T = n/(n+1)`.

use num_traits::FromPrimitive;

use crate::error::{domain, Result};
use crate::optics::{apply_phase, BeamSplitter, ComplexAmplitude};
use crate::scalar::{Field, Real};

/// Splitting ratios of the two-state network. `t1` and `t2` are always
/// derived from `t0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitterPlan<T> {
    t0: T,
    t1: T,
    t2: T,
}

impl<T: Field> SplitterPlan<T> {
    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn t1(&self) -> T {
        self.t1
    }

    pub fn t2(&self) -> T {
        self.t2
    }

    /// True when `t0` sits at 0 or 1, where one detector receives no
    /// usable signal.
    pub fn is_degenerate(&self) -> bool {
        self.t0 == T::zero() || self.t0 == T::one()
    }
}

/// Derives `T₁ = 1/(1+T₀)` and `T₂ = (1−T₀)/(2−T₀)` from the BS₀
/// transmittance.
pub fn derive_plan<T: Field>(t0: T) -> Result<SplitterPlan<T>> {
    let one = T::one();
    let two = one + one;
    if !(t0 >= T::zero() && t0 <= one) {
        return Err(domain(format!("t0 = {t0:?} outside [0, 1]")));
    }
    Ok(SplitterPlan {
        t0,
        t1: one / (one + t0),
        t2: (one - t0) / (two - t0),
    })
}

/// Ratios of the N-state extension: every program splitter has
/// `T = n/(n+1)`, `R = 1/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NStatePlan {
    n: usize,
}

impl NStatePlan {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("need at least 2 program states, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn transmittance<T: Field + FromPrimitive>(&self) -> T {
        let n = T::from_usize(self.n).expect("state count representable");
        n / (n + T::one())
    }

    pub fn reflectance<T: Field + FromPrimitive>(&self) -> T {
        let n = T::from_usize(self.n).expect("state count representable");
        T::one() / (n + T::one())
    }
}

/// Fields incident on the detectors, one entry per program state.
///
/// `incoherent[j]` is the sum of the two intensities that interfere at
/// port `j`, which the partial-visibility model needs.
#[derive(Debug, Clone, PartialEq)]
pub struct PortAmplitudes<T> {
    pub d: Vec<ComplexAmplitude<T>>,
    pub incoherent: Vec<T>,
}

impl<T: Real> PortAmplitudes<T> {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn intensities(&self) -> Vec<T> {
        self.d.iter().map(ComplexAmplitude::intensity).collect()
    }
}

/// Detector fields of the two-state network with perfectly balanced arms.
pub fn detector_amplitudes<T: Real>(
    alpha_unknown: ComplexAmplitude<T>,
    alpha_1: ComplexAmplitude<T>,
    alpha_2: ComplexAmplitude<T>,
    plan: &SplitterPlan<T>,
) -> PortAmplitudes<T> {
    detector_amplitudes_with_phase_errors(alpha_unknown, alpha_1, alpha_2, plan, [T::zero(); 2])
}

/// Detector fields of the two-state network when the unknown-state arm of
/// interferometer `j` carries an extra phase `phase_errors[j]`.
pub fn detector_amplitudes_with_phase_errors<T: Real>(
    alpha_unknown: ComplexAmplitude<T>,
    alpha_1: ComplexAmplitude<T>,
    alpha_2: ComplexAmplitude<T>,
    plan: &SplitterPlan<T>,
    phase_errors: [T; 2],
) -> PortAmplitudes<T> {
    let bs0 = splitter(plan.t0);
    let bs1 = splitter(plan.t1);
    let bs2 = splitter(plan.t2);

    let (arm1, arm2) = bs0.transform(alpha_unknown, ComplexAmplitude::zero());
    let arm1 = apply_phase(arm1, phase_errors[0]);
    let arm2 = apply_phase(arm2, phase_errors[1]);

    // Program 1 is reflected at BS₁; the π/2 shifter turns i² into −1.
    let program_1 = alpha_1.mul_i();
    let (d1, _) = bs1.transform(arm1, program_1);
    let (d2, _) = bs2.transform(alpha_2, arm2);

    let incoherent_1 = bs1.transmittance() * arm1.intensity() + bs1.reflectance() * alpha_1.intensity();
    let incoherent_2 = bs2.transmittance() * alpha_2.intensity() + bs2.reflectance() * arm2.intensity();

    PortAmplitudes {
        d: vec![d1, d2],
        incoherent: vec![incoherent_1, incoherent_2],
    }
}

/// Detector fields of the N-state network with balanced arms.
pub fn nstate_amplitudes<T: Real>(
    alpha_unknown: ComplexAmplitude<T>,
    programs: &[ComplexAmplitude<T>],
    plan: &NStatePlan,
) -> Result<PortAmplitudes<T>> {
    let zeros = vec![T::zero(); programs.len()];
    nstate_amplitudes_with_phase_errors(alpha_unknown, programs, plan, &zeros)
}

/// N-state detector fields with a phase error on each unknown-state arm.
pub fn nstate_amplitudes_with_phase_errors<T: Real>(
    alpha_unknown: ComplexAmplitude<T>,
    programs: &[ComplexAmplitude<T>],
    plan: &NStatePlan,
    phase_errors: &[T],
) -> Result<PortAmplitudes<T>> {
    let n = plan.n();
    if programs.len() != n {
        return Err(domain(format!(
            "plan expects {n} program states, got {}",
            programs.len()
        )));
    }
    if phase_errors.len() != n {
        return Err(domain(format!(
            "plan expects {n} phase errors, got {}",
            phase_errors.len()
        )));
    }

    let arms = equal_split(alpha_unknown, n);
    let bs = splitter(plan.transmittance::<T>());

    let mut d = Vec::with_capacity(n);
    let mut incoherent = Vec::with_capacity(n);
    for ((arm, program), phi) in arms.into_iter().zip(programs).zip(phase_errors) {
        let arm = apply_phase(arm, *phi);
        let (port, _) = bs.transform(arm, program.mul_i());
        d.push(port);
        incoherent.push(bs.transmittance() * arm.intensity() + bs.reflectance() * program.intensity());
    }
    Ok(PortAmplitudes { d, incoherent })
}

/// Splits `input` into `n` arms of amplitude `input/√n` with a cascade of
/// two-port splitters, removing the accumulated `i^j` reflection phases.
fn equal_split<T: Real>(input: ComplexAmplitude<T>, n: usize) -> Vec<ComplexAmplitude<T>> {
    let mut arms = Vec::with_capacity(n);
    let mut rest = input;
    for j in 0..n - 1 {
        let remaining = T::from_usize(n - j).expect("arm count representable");
        let (tap, through) = splitter(T::one() / remaining).transform(rest, ComplexAmplitude::zero());
        arms.push(undo_reflections(tap, j));
        rest = through;
    }
    arms.push(undo_reflections(rest, n - 1));
    arms
}

/// Multiplies by `(−i)^k`.
fn undo_reflections<T: Real>(a: ComplexAmplitude<T>, k: usize) -> ComplexAmplitude<T> {
    match k % 4 {
        0 => a,
        1 => -a.mul_i(),
        2 => -a,
        _ => a.mul_i(),
    }
}

fn splitter<T: Real>(transmittance: T) -> BeamSplitter<T> {
    BeamSplitter::new(transmittance).expect("derived splitting ratio lies in [0, 1]")
}

/// Result of applying the exclusion rule to a click pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Every hypothesis but `k` (0-based) was excluded.
    Identified(usize),
    /// No detector clicked.
    InconclusiveNoClick,
    /// Clicks occurred but left zero or several hypotheses standing. For two
    /// program states this is exactly the double click.
    InconclusiveMultiClick,
}

/// Applies the exclusion rule: a click at `D_j` rules out hypothesis `j`.
pub fn classify(clicks: &[bool]) -> Classification {
    let mut clicked = 0;
    let mut survivor = None;
    for (j, &c) in clicks.iter().enumerate() {
        if c {
            clicked += 1;
        } else if survivor.is_none() {
            survivor = Some(j);
        }
    }
    match clicked {
        0 => Classification::InconclusiveNoClick,
        c if c + 1 == clicks.len() => Classification::Identified(survivor.expect("one unclicked port")),
        _ => Classification::InconclusiveMultiClick,
    }
}

/// Outcome of one trial once the true hypothesis is known. Indices are
/// 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Identified(usize),
    Erroneous { reported: usize, truth: usize },
    InconclusiveNoClick,
    InconclusiveMultiClick,
}

impl Outcome {
    pub fn resolve(classification: Classification, truth: usize) -> Self {
        match classification {
            Classification::Identified(k) if k == truth => Outcome::Identified(k),
            Classification::Identified(k) => Outcome::Erroneous { reported: k, truth },
            Classification::InconclusiveNoClick => Outcome::InconclusiveNoClick,
            Classification::InconclusiveMultiClick => Outcome::InconclusiveMultiClick,
        }
    }

    pub fn is_conclusive(&self) -> bool {
        matches!(self, Outcome::Identified(_) | Outcome::Erroneous { .. })
    }
}
