//! Complex-amplitude algebra for coherent states in single optical modes.
//!
//! Amplitudes are normalized so that `|a|²` is the mean photon number per
//! pulse. Beam splitters use the symmetric convention with a factor `i` on
//! reflection:
//!
//! ```text
//! a_out = √T·a_in + i√R·b_in
//! b_out = i√R·a_in + √T·b_in
//! ```

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, Result};
use crate::scalar::Real;

/// Complex field amplitude of a coherent state in one optical mode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexAmplitude<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> ComplexAmplitude<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// `r·e^{iφ}`.
    pub fn from_polar(r: T, phi: T) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(r * c, r * s)
    }

    /// Mean photon number `re² + im²`.
    pub fn intensity(&self) -> T {
        self.re * self.re + self.im * self.im
    }

    pub fn modulus(&self) -> T {
        self.re.hypot(self.im)
    }

    pub fn arg(&self) -> T {
        self.im.atan2(self.re)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Self::new(-self.im, self.re)
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.re * k, self.im * k)
    }
}

impl<T: Real> Add for ComplexAmplitude<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Real> Sub for ComplexAmplitude<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Real> Neg for ComplexAmplitude<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<T: Real> Mul for ComplexAmplitude<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

/// Lossless two-port beam splitter, `R + T = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter<T> {
    transmittance: T,
}

impl<T: Real> BeamSplitter<T> {
    pub fn new(transmittance: T) -> Result<Self> {
        if !(transmittance >= T::zero() && transmittance <= T::one()) {
            return Err(domain(format!(
                "beam splitter transmittance {transmittance:?} outside [0, 1]"
            )));
        }
        Ok(Self { transmittance })
    }

    /// A 50:50 splitter.
    pub fn balanced() -> Self {
        Self {
            transmittance: T::lit(0.5),
        }
    }

    pub fn transmittance(&self) -> T {
        self.transmittance
    }

    pub fn reflectance(&self) -> T {
        T::one() - self.transmittance
    }

    /// Applies the two-port transform to the input pair.
    pub fn transform(
        &self,
        a_in: ComplexAmplitude<T>,
        b_in: ComplexAmplitude<T>,
    ) -> (ComplexAmplitude<T>, ComplexAmplitude<T>) {
        let t = self.transmittance.sqrt();
        let r = self.reflectance().sqrt();
        let a_out = a_in.scale(t) + b_in.mul_i().scale(r);
        let b_out = a_in.mul_i().scale(r) + b_in.scale(t);
        (a_out, b_out)
    }
}

/// Two-port transform of `(a_in, b_in)` through a splitter of transmittance
/// `transmittance`.
pub fn bs_transform<T: Real>(
    a_in: ComplexAmplitude<T>,
    b_in: ComplexAmplitude<T>,
    transmittance: T,
) -> Result<(ComplexAmplitude<T>, ComplexAmplitude<T>)> {
    Ok(BeamSplitter::new(transmittance)?.transform(a_in, b_in))
}

/// Returns `a·e^{iφ}`.
pub fn apply_phase<T: Real>(a: ComplexAmplitude<T>, phi: T) -> ComplexAmplitude<T> {
    a * ComplexAmplitude::from_polar(T::one(), phi)
}

/// Coherent amplitude `√n·e^{iφ}` for a mean photon number `n`.
pub fn from_intensity_phase<T: Real>(n: T, phi: T) -> Result<ComplexAmplitude<T>> {
    if !(n >= T::zero()) || !n.is_finite() {
        return Err(domain(format!("mean photon number {n:?} must be finite and >= 0")));
    }
    Ok(ComplexAmplitude::from_polar(n.sqrt(), phi))
}
