//! Complex-phasor (FHRR) hypervector algebra.
//!
//! A [`UnitaryHypervector`] stores one phase per sample; its samples are
//! `e^{iφ_j}`. Binding adds phases, unbinding subtracts them and a fractional
//! power multiplies them, so the algebraic identities hold up to float
//! rounding. Phases are kept *lifted* (not reduced mod 2π): a fractional power
//! `x^p` is only well defined relative to a chosen branch of the phase, and
//! keeping the sampled Gaussian value as that branch is what makes
//! `fpe(fpe(x, a), b) = fpe(x, a·b)` hold for non-integer exponents and what
//! gives the similarity kernel its Gaussian shape. Every comparison is done on
//! wrapped differences, see [`wrap_phase`].
//!
//! [`Hypervector`] is the general complex-sample carrier, used for
//! superpositions inside the resonator.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default hypervector length.
pub const DEFAULT_DIM: usize = 10_000;

/// Magnitudes below this are treated as zero by [`Hypervector::normalize_phases`].
pub const ZERO_MAGNITUDE: f64 = 1e-12;

/// Reduce an angle to the canonical interval (−π, π].
pub fn wrap_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Seed for the portable generator.
///
/// Every random hypervector is drawn from ChaCha20 seeded with
/// `ChaCha20Rng::seed_from_u64(seed)` and switched to sub-stream `stream`
/// with `set_stream`. Domains allocate one stream per basis, so adding a
/// domain never perturbs the bases of another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn stream(self, stream: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

/// Normal distribution of sample phases, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDistribution {
    mean: f64,
    std: f64,
}

impl PhaseDistribution {
    pub fn new(mean: f64, std: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::NonFinite("phase mean"));
        }
        if !std.is_finite() {
            return Err(Error::NonFinite("phase standard deviation"));
        }
        if std < 0.0 {
            return Err(Error::invalid(format!(
                "phase standard deviation must be >= 0, got {std}"
            )));
        }
        Ok(Self { mean, std })
    }

    /// Zero-mean distribution with the given spread.
    pub fn centered(std: f64) -> Result<Self> {
        Self::new(0.0, std)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std(&self) -> f64 {
        self.std
    }
}

/// Hypervector whose samples all have unit magnitude, stored as phases.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryHypervector {
    phases: Vec<f64>,
}

impl UnitaryHypervector {
    pub fn from_phases(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("phase"));
        }
        Ok(Self { phases })
    }

    /// The binding identity: every phase zero.
    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_phases(vec![0.0; dim])
    }

    /// Draw `dim` phases i.i.d. from `dist` using sub-stream `stream` of `seed`.
    pub fn sample_gaussian(
        dim: usize,
        dist: PhaseDistribution,
        seed: RngSeed,
        stream: u64,
    ) -> Result<Self> {
        let mut rng = seed.stream(stream);
        Self::sample_with(dim, dist, &mut rng)
    }

    pub fn sample_with<R: rand::Rng + ?Sized>(
        dim: usize,
        dist: PhaseDistribution,
        rng: &mut R,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let normal = Normal::new(dist.mean, dist.std)
            .map_err(|e| Error::invalid(format!("phase distribution: {e}")))?;
        let phases = (0..dim).map(|_| normal.sample(rng)).collect();
        Ok(Self { phases })
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// Lifted phases, exactly as stored.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Phases reduced to (−π, π].
    pub fn wrapped_phases(&self) -> Vec<f64> {
        self.phases.iter().map(|&p| wrap_phase(p)).collect()
    }

    pub fn to_complex(&self) -> Hypervector {
        Hypervector {
            samples: self.phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect(),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_dim(other)?;
        let phases = self
            .phases
            .iter()
            .zip(&other.phases)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self { phases })
    }

    /// Samplewise multiplication (phase addition).
    pub fn bind(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Complex conjugate (phase negation).
    pub fn inverse(&self) -> Self {
        Self {
            phases: self.phases.iter().map(|&p| -p).collect(),
        }
    }

    /// `bind(self, inverse(other))`.
    pub fn unbind(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Fractional power encoding: every phase multiplied by `exponent`.
    pub fn fpe(&self, exponent: f64) -> Result<Self> {
        if !exponent.is_finite() {
            return Err(Error::NonFinite("fractional power exponent"));
        }
        Ok(Self {
            phases: self.phases.iter().map(|&p| p * exponent).collect(),
        })
    }

    /// Mean cosine of samplewise phase differences, in [−1, 1].
    pub fn similarity(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let sum: f64 = self
            .phases
            .iter()
            .zip(&other.phases)
            .map(|(&a, &b)| (a - b).cos())
            .sum();
        Ok(sum / self.dim() as f64)
    }

    /// Largest wrapped phase difference between the two vectors.
    pub fn max_phase_error(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .phases
            .iter()
            .zip(&other.phases)
            .map(|(&a, &b)| wrap_phase(a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Equality modulo 2π, samplewise within `tol` radians.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_phase_error(other).is_ok_and(|e| e <= tol)
    }
}

/// Bind a non-empty sequence of unitary hypervectors.
pub fn bind_all<'a, I>(vectors: I) -> Result<UnitaryHypervector>
where
    I: IntoIterator<Item = &'a UnitaryHypervector>,
{
    let mut iter = vectors.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::invalid("nothing to bind"))?
        .clone();
    iter.try_fold(first, |acc, v| acc.bind(v))
}

/// General complex-sample hypervector.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypervector {
    samples: Vec<Complex64>,
}

impl Hypervector {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::NonFinite("sample"));
        }
        Ok(Self { samples })
    }

    pub fn dim(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * factor).collect(),
        }
    }

    /// Elementwise complex sum.
    pub fn superpose(xs: &[Hypervector]) -> Result<Self> {
        let (first, rest) = xs.split_first().ok_or(Error::EmptySuperposition)?;
        let mut samples = first.samples.clone();
        for x in rest {
            if x.dim() != samples.len() {
                return Err(Error::DimensionMismatch {
                    left: samples.len(),
                    right: x.dim(),
                });
            }
            for (acc, s) in samples.iter_mut().zip(&x.samples) {
                *acc += s;
            }
        }
        Ok(Self { samples })
    }

    /// Project every sample onto the unit circle; (near-)zero samples get phase 0.
    pub fn normalize_phases(&self) -> UnitaryHypervector {
        UnitaryHypervector {
            phases: self
                .samples
                .iter()
                .map(|s| if s.norm() < ZERO_MAGNITUDE { 0.0 } else { s.arg() })
                .collect(),
        }
    }

    /// Normalized Hermitian inner product `(1/d)·Σ conj(other_j)·self_j`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let sum: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(sum / self.dim() as f64)
    }
}

impl From<&UnitaryHypervector> for Hypervector {
    fn from(v: &UnitaryHypervector) -> Self {
        v.to_complex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random(dim: usize, std: f64, seed: u64) -> UnitaryHypervector {
        UnitaryHypervector::sample_gaussian(
            dim,
            PhaseDistribution::centered(std).unwrap(),
            RngSeed(seed),
            0,
        )
        .unwrap()
    }

    #[test]
    fn wrap_phase_is_half_open() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(0.5) - 0.5).abs() < 1e-15);
        assert!((wrap_phase(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn zero_dimension_is_rejected() {
        let dist = PhaseDistribution::centered(1.0).unwrap();
        assert!(matches!(
            UnitaryHypervector::sample_gaussian(0, dist, RngSeed(1), 0),
            Err(Error::InvalidDimension(0))
        ));
        assert!(UnitaryHypervector::from_phases(vec![]).is_err());
        assert!(UnitaryHypervector::from_phases(vec![f64::NAN]).is_err());
    }

    #[test]
    fn negative_spread_is_rejected() {
        assert!(PhaseDistribution::new(0.0, -0.1).is_err());
        assert!(PhaseDistribution::new(f64::INFINITY, 0.1).is_err());
    }

    #[test]
    fn zero_spread_gives_identity() {
        let x = random(4, 0.0, 99);
        assert_eq!(x.phases(), &[0.0; 4]);
        assert_eq!(x, UnitaryHypervector::identity(4).unwrap());
    }

    #[test]
    fn narrow_sample_is_centered() {
        let sigma = PI / 7.0;
        let x = random(1000, sigma, 7);
        let mean = x.phases().iter().sum::<f64>() / 1000.0;
        assert!(mean.abs() < 3.0 * sigma / (1000f64).sqrt(), "mean {mean}");
        // bell shape: roughly 68% within one standard deviation
        let inside = x.phases().iter().filter(|p| p.abs() <= sigma).count();
        assert!((600..=760).contains(&inside), "{inside}");
    }

    #[test]
    fn same_seed_same_bits() {
        let a = random(512, 2.0 * PI, 5);
        let b = random(512, 2.0 * PI, 5);
        assert_eq!(a.phases(), b.phases());
        let c = UnitaryHypervector::sample_gaussian(
            512,
            PhaseDistribution::centered(2.0 * PI).unwrap(),
            RngSeed(5),
            1,
        )
        .unwrap();
        assert_ne!(a.phases(), c.phases());
    }

    #[test]
    fn wide_vectors_are_quasi_orthogonal() {
        let a = random(10_000, 2.0 * PI, 1);
        let b = random(10_000, 2.0 * PI, 2);
        assert!(a.similarity(&b).unwrap().abs() < 0.05);
        let bound = a.bind(&b).unwrap();
        assert!(bound.similarity(&a).unwrap().abs() < 0.05);
    }

    #[test]
    fn identity_and_inverse_laws() {
        let x = random(256, 2.0 * PI, 3);
        let id = UnitaryHypervector::identity(256).unwrap();
        assert_eq!(x.bind(&id).unwrap(), x);
        assert_eq!(x.bind(&x.inverse()).unwrap(), id);
        assert_eq!(id.inverse(), id);
        assert!(x.inverse().inverse().approx_eq(&x, 1e-12));
    }

    #[test]
    fn unbind_recovers_operand() {
        let x = random(256, 2.0 * PI, 3);
        let y = random(256, 2.0 * PI, 4);
        let z = x.bind(&y).unwrap();
        assert!(z.unbind(&y).unwrap().approx_eq(&x, 1e-12));
        assert_eq!(z.unbind(&y).unwrap(), z.bind(&y.inverse()).unwrap());
    }

    #[test]
    fn mismatched_dimensions_error() {
        let x = random(8, 1.0, 1);
        let y = random(9, 1.0, 1);
        assert!(matches!(x.bind(&y), Err(Error::DimensionMismatch { .. })));
        assert!(x.unbind(&y).is_err());
        assert!(x.similarity(&y).is_err());
    }

    #[test]
    fn fpe_special_exponents() {
        let x = random(256, 2.0 * PI, 8);
        assert_eq!(x.fpe(1.0).unwrap(), x);
        assert!(x.fpe(0.0).unwrap().approx_eq(&UnitaryHypervector::identity(256).unwrap(), 0.0));
        let lhs = x.fpe(2.3 + -6.2).unwrap();
        let rhs = x.fpe(2.3).unwrap().bind(&x.fpe(-6.2).unwrap()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-9));
        assert!(x.fpe(f64::NAN).is_err());
        assert!(x.fpe(f64::INFINITY).is_err());
    }

    #[test]
    fn similarity_extremes() {
        let x = random(1000, 2.0 * PI, 11);
        assert!((x.similarity(&x).unwrap() - 1.0).abs() < 1e-12);
        let shifted =
            UnitaryHypervector::from_phases(x.phases().iter().map(|p| p + PI).collect()).unwrap();
        assert!((x.similarity(&shifted).unwrap() + 1.0).abs() < 1e-12);
        let y = random(1000, 2.0 * PI, 12);
        assert_eq!(x.similarity(&y).unwrap(), y.similarity(&x).unwrap());
    }

    #[test]
    fn similarity_is_real_part_of_inner_product() {
        let x = random(500, 1.0, 21);
        let y = random(500, 1.0, 22);
        let inner = x.to_complex().inner(&y.to_complex()).unwrap();
        assert!((inner.re - x.similarity(&y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn superpose_basics() {
        let x = random(64, 2.0 * PI, 1);
        let xc = x.to_complex();
        assert_eq!(Hypervector::superpose(std::slice::from_ref(&xc)).unwrap(), xc);
        let doubled = Hypervector::superpose(&[xc.clone(), xc.clone()]).unwrap();
        for (d, s) in doubled.samples().iter().zip(xc.samples()) {
            assert!((d.norm() - 2.0).abs() < 1e-12);
            assert!(wrap_phase(d.arg() - s.arg()).abs() < 1e-12);
        }
        assert!(matches!(
            Hypervector::superpose(&[]),
            Err(Error::EmptySuperposition)
        ));
        let short = random(32, 1.0, 1).to_complex();
        assert!(Hypervector::superpose(&[xc, short]).is_err());
    }

    #[test]
    fn bundle_stays_similar_to_constituents() {
        let x = random(10_000, 2.0 * PI, 31);
        let y = random(10_000, 2.0 * PI, 32);
        let bundle = Hypervector::superpose(&[x.to_complex(), y.to_complex()])
            .unwrap()
            .normalize_phases();
        assert!(bundle.similarity(&x).unwrap() > 0.4);
        assert!(bundle.similarity(&y).unwrap() > 0.4);
    }

    #[test]
    fn normalize_phases_rules() {
        let x = random(128, 2.0 * PI, 41);
        assert!(x.to_complex().normalize_phases().approx_eq(&x, 1e-12));
        assert!(x.to_complex().scale(2.5).normalize_phases().approx_eq(&x, 1e-12));
        let zero = Hypervector::new(vec![Complex64::new(0.0, 0.0); 5]).unwrap();
        assert_eq!(zero.normalize_phases(), UnitaryHypervector::identity(5).unwrap());
    }

    #[test]
    fn bind_all_folds() {
        let a = random(16, 1.0, 1);
        let b = random(16, 1.0, 2);
        let c = random(16, 1.0, 3);
        let all = bind_all([&a, &b, &c]).unwrap();
        assert!(all.approx_eq(&a.bind(&b).unwrap().bind(&c).unwrap(), 1e-12));
        assert!(bind_all(std::iter::empty()).is_err());
    }
}
