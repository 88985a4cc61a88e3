//! Conceptual domains and prototype encoding.
//!
//! A domain is a set of `k` property dimensions, each backed by a random basis
//! hypervector. A prototype `(p₁, …, p_k)` is encoded as the binding of the
//! fractional powers `b_i^{p_i}`, which turns the domain into a product of
//! radial-basis kernels in hyperspace.
//!
//! Each domain carries two spreads. `basis_sigma` is the phase spread used
//! when sampling the bases; it is wide (2π by default) so bases are
//! quasi-orthogonal and codebook entries half a unit apart are nearly
//! orthogonal too, which is what the decoder needs. `kernel_sigma` is the
//! per-dimension bandwidth of the similarity kernel used to compare concepts:
//! [`DomainSpec::kernel_encode`] rescales each exponent by
//! `kernel_sigma / basis_sigma`, so two kernel encodings `δ` apart have
//! expected similarity `exp(−κ²δ²/2)` per dimension.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdc::{PhaseDistribution, RngSeed, UnitaryHypervector};

pub const DEFAULT_RANGE: (f64, f64) = (-10.0, 10.0);
pub const DEFAULT_BASIS_SIGMA: f64 = 2.0 * PI;
pub const DEFAULT_KERNEL_SIGMA: f64 = PI / 7.0;
pub const DEFAULT_BETA: f64 = 10.0;

/// Largest |similarity| tolerated between two bases of one domain.
///
/// 0.05 at the default dimension; at small `d` the bound widens to six
/// standard deviations of the similarity of independent vectors, `1/√(2d)`.
pub fn orthogonality_threshold(dim: usize) -> f64 {
    f64::max(0.05, 6.0 / (2.0 * dim as f64).sqrt())
}

/// Scaling constant between HSB units and normalized coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingConstant(f64);

impl ScalingConstant {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::invalid(format!("beta must be a positive number, got {beta}")));
        }
        Ok(Self(beta))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for ScalingConstant {
    fn default() -> Self {
        Self(DEFAULT_BETA)
    }
}

/// Hue in degrees, saturation and brightness in percent.
///
/// [`ColorHsb::new`] enforces the ranges. Readings produced by
/// [`point_to_hsb`] are not clamped: a point outside the color disc reports a
/// saturation above 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorHsb {
    pub hue: f64,
    pub saturation: f64,
    pub brightness: f64,
}

impl ColorHsb {
    pub fn new(hue: f64, saturation: f64, brightness: f64) -> Result<Self> {
        if !(0.0..360.0).contains(&hue) {
            return Err(Error::invalid(format!("hue must be in [0, 360), got {hue}")));
        }
        if !(0.0..=100.0).contains(&saturation) {
            return Err(Error::invalid(format!(
                "saturation must be in [0, 100], got {saturation}"
            )));
        }
        if !(0.0..=100.0).contains(&brightness) {
            return Err(Error::invalid(format!(
                "brightness must be in [0, 100], got {brightness}"
            )));
        }
        Ok(Self {
            hue,
            saturation,
            brightness,
        })
    }
}

/// Polar hue/saturation to Cartesian coordinates, brightness on the third axis.
pub fn hsb_to_point(color: ColorHsb, beta: ScalingConstant) -> [f64; 3] {
    let beta = beta.get();
    let hue = color.hue.to_radians();
    [
        hue.cos() * color.saturation / beta,
        hue.sin() * color.saturation / beta,
        color.brightness / beta,
    ]
}

/// Inverse of [`hsb_to_point`]. A point on the brightness axis gets hue 0.
pub fn point_to_hsb(coords: &[f64], beta: ScalingConstant) -> Result<ColorHsb> {
    let [x, y, z] = coords else {
        return Err(Error::invalid(format!(
            "HSB conversion needs 3 coordinates, got {}",
            coords.len()
        )));
    };
    let beta = beta.get();
    let hue = if *x == 0.0 && *y == 0.0 {
        0.0
    } else {
        let deg = y.atan2(*x).to_degrees().rem_euclid(360.0);
        if deg >= 360.0 {
            0.0
        } else {
            deg
        }
    };
    Ok(ColorHsb {
        hue,
        saturation: beta * x.hypot(*y),
        brightness: beta * z,
    })
}

/// A point in a domain's normalized coordinate space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prototype {
    pub domain: String,
    pub coords: Vec<f64>,
}

impl Prototype {
    pub fn new(domain: impl Into<String>, coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("prototype coordinate"));
        }
        Ok(Self {
            domain: domain.into(),
            coords,
        })
    }
}

/// Closed interval of normalized values along one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueRange {
    pub lo: f64,
    pub hi: f64,
}

impl ValueRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::invalid(format!("range needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, v: f64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }
}

impl Default for ValueRange {
    fn default() -> Self {
        Self {
            lo: DEFAULT_RANGE.0,
            hi: DEFAULT_RANGE.1,
        }
    }
}

/// Everything needed to regenerate a domain; this is what the store persists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainConfig {
    pub name: String,
    pub dim_names: Vec<String>,
    pub ranges: Vec<ValueRange>,
    pub basis_sigma: f64,
    pub kernel_sigma: Vec<f64>,
    /// HSB scaling constant; set on three-dimensional domains that accept HSB input.
    pub beta: Option<f64>,
    /// RNG sub-stream of each basis.
    pub streams: Vec<u64>,
}

impl DomainConfig {
    /// Defaults: range [−10, 10], basis σ = 2π, kernel σ = π/7, streams `0..k`,
    /// and β = 10 when the domain has three dimensions.
    pub fn new<S: Into<String>>(name: impl Into<String>, dim_names: Vec<S>) -> Self {
        let dim_names: Vec<String> = dim_names.into_iter().map(Into::into).collect();
        let k = dim_names.len();
        Self {
            name: name.into(),
            ranges: vec![ValueRange::default(); k],
            basis_sigma: DEFAULT_BASIS_SIGMA,
            kernel_sigma: vec![DEFAULT_KERNEL_SIGMA; k],
            beta: (k == 3).then_some(DEFAULT_BETA),
            streams: (0..k as u64).collect(),
            dim_names,
        }
    }

    pub fn with_range(mut self, range: ValueRange) -> Self {
        self.ranges = vec![range; self.dim_names.len()];
        self
    }

    pub fn with_basis_sigma(mut self, sigma: f64) -> Self {
        self.basis_sigma = sigma;
        self
    }

    pub fn with_kernel_sigma(mut self, sigma: f64) -> Self {
        self.kernel_sigma = vec![sigma; self.dim_names.len()];
        self
    }

    pub fn with_beta(mut self, beta: Option<f64>) -> Self {
        self.beta = beta;
        self
    }

    /// Assign consecutive sub-streams starting at `first`.
    pub fn with_first_stream(mut self, first: u64) -> Self {
        self.streams = (first..first + self.dim_names.len() as u64).collect();
        self
    }

    pub fn k(&self) -> usize {
        self.dim_names.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if self.name.trim().is_empty() {
            return Err(Error::invalid("domain name must not be empty"));
        }
        if k == 0 {
            return Err(Error::invalid(format!(
                "domain `{}` needs at least one dimension",
                self.name
            )));
        }
        for (field, len) in [
            ("ranges", self.ranges.len()),
            ("kernel_sigma", self.kernel_sigma.len()),
            ("streams", self.streams.len()),
        ] {
            if len != k {
                return Err(Error::invalid(format!(
                    "domain `{}` has {k} dimensions but {len} {field}",
                    self.name
                )));
            }
        }
        for r in &self.ranges {
            ValueRange::new(r.lo, r.hi)?;
        }
        if !self.basis_sigma.is_finite() || self.basis_sigma <= 0.0 {
            return Err(Error::invalid(format!(
                "basis sigma must be positive, got {}",
                self.basis_sigma
            )));
        }
        if let Some(bad) = self.kernel_sigma.iter().find(|s| !s.is_finite() || **s <= 0.0) {
            return Err(Error::invalid(format!("kernel sigma must be positive, got {bad}")));
        }
        if let Some(beta) = self.beta {
            ScalingConstant::new(beta)?;
            if k != 3 {
                return Err(Error::invalid(format!(
                    "domain `{}`: HSB scaling needs exactly 3 dimensions",
                    self.name
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = self.dim_names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::invalid(format!("duplicate dimension name `{dup}`")));
        }
        Ok(())
    }
}

/// A domain with its basis hypervectors materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    config: DomainConfig,
    bases: Vec<UnitaryHypervector>,
    kernel_bases: Vec<UnitaryHypervector>,
}

impl DomainSpec {
    /// Sample one basis per dimension from its sub-stream and check that the
    /// bases are pairwise quasi-orthogonal.
    pub fn generate(config: DomainConfig, dim: usize, seed: RngSeed) -> Result<Self> {
        config.validate()?;
        let dist = PhaseDistribution::centered(config.basis_sigma)?;
        let bases = config
            .streams
            .iter()
            .map(|&s| UnitaryHypervector::sample_gaussian(dim, dist, seed, s))
            .collect::<Result<Vec<_>>>()?;
        Self::with_bases(config, bases)
    }

    /// Build from explicitly supplied bases (e.g. embedded in a store file).
    pub fn with_bases(config: DomainConfig, bases: Vec<UnitaryHypervector>) -> Result<Self> {
        config.validate()?;
        if bases.len() != config.k() {
            return Err(Error::invalid(format!(
                "domain `{}` has {} dimensions but {} bases",
                config.name,
                config.k(),
                bases.len()
            )));
        }
        let dim = bases[0].dim();
        if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: b.dim(),
            });
        }
        let threshold = orthogonality_threshold(dim);
        for i in 0..bases.len() {
            for j in i + 1..bases.len() {
                let similarity = bases[i].similarity(&bases[j])?;
                if similarity.abs() >= threshold {
                    return Err(Error::NotOrthogonal {
                        domain: config.name.clone(),
                        first: config.dim_names[i].clone(),
                        second: config.dim_names[j].clone(),
                        similarity,
                        threshold,
                    });
                }
            }
        }
        let kernel_bases = bases
            .iter()
            .zip(&config.kernel_sigma)
            .map(|(b, &kappa)| b.fpe(kappa / config.basis_sigma))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config,
            bases,
            kernel_bases,
        })
    }

    pub fn config(&self) -> &DomainConfig {
        &self.config
    }

    pub fn name(&self) -> &str {
        &self.config.name
    }

    pub fn k(&self) -> usize {
        self.config.k()
    }

    pub fn dim(&self) -> usize {
        self.bases[0].dim()
    }

    pub fn bases(&self) -> &[UnitaryHypervector] {
        &self.bases
    }

    pub fn ranges(&self) -> &[ValueRange] {
        &self.config.ranges
    }

    pub fn beta(&self) -> Option<ScalingConstant> {
        self.config.beta.map(ScalingConstant)
    }

    /// The bind of all unencoded bases; identifies the domain itself.
    pub fn identifier(&self) -> UnitaryHypervector {
        crate::hdc::bind_all(&self.bases).expect("a domain has at least one basis")
    }

    fn check_point(&self, p: &Prototype) -> Result<()> {
        if p.domain != self.config.name {
            return Err(Error::CategoryMismatch(format!(
                "prototype belongs to domain `{}`, not `{}`",
                p.domain, self.config.name
            )));
        }
        self.check_coords(&p.coords)
    }

    fn check_coords(&self, coords: &[f64]) -> Result<()> {
        if coords.len() != self.k() {
            return Err(Error::CoordinateCount {
                domain: self.config.name.clone(),
                expected: self.k(),
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("prototype coordinate"));
        }
        Ok(())
    }

    /// Clamp every coordinate into its dimension's range.
    pub fn clamp_to_range(&self, p: &Prototype) -> Result<Prototype> {
        self.check_point(p)?;
        let coords = p
            .coords
            .iter()
            .zip(&self.config.ranges)
            .map(|(&c, r)| c.clamp(r.lo, r.hi))
            .collect();
        Ok(Prototype {
            domain: p.domain.clone(),
            coords,
        })
    }

    pub fn in_range(&self, coords: &[f64]) -> bool {
        coords.len() == self.k()
            && coords.iter().zip(&self.config.ranges).all(|(&c, r)| r.contains(c))
    }

    /// `⊛_i b_i^{p_i}` over the domain bases.
    pub fn encode(&self, p: &Prototype) -> Result<UnitaryHypervector> {
        self.check_point(p)?;
        self.encode_coords(&p.coords)
    }

    /// [`encode`](Self::encode) without the domain-name check. Coordinates
    /// outside the range are accepted; the homomorphism holds everywhere.
    pub fn encode_coords(&self, coords: &[f64]) -> Result<UnitaryHypervector> {
        self.check_coords(coords)?;
        power_product(&self.bases, coords)
    }

    /// Encoding in the similarity space with per-dimension bandwidth `kernel_sigma`.
    pub fn kernel_encode(&self, coords: &[f64]) -> Result<UnitaryHypervector> {
        self.check_coords(coords)?;
        power_product(&self.kernel_bases, coords)
    }

    /// Closed-form expected similarity of two kernel encodings.
    pub fn expected_kernel(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        self.check_coords(a)?;
        self.check_coords(b)?;
        let exponent: f64 = a
            .iter()
            .zip(b)
            .zip(&self.config.kernel_sigma)
            .map(|((x, y), k)| k * k * (x - y) * (x - y))
            .sum();
        Ok((-exponent / 2.0).exp())
    }
}

/// Phases `Σ_i p_i·φ_ij`, accumulated in the same order as binding the
/// fractional powers one by one onto the identity.
fn power_product(bases: &[UnitaryHypervector], coords: &[f64]) -> Result<UnitaryHypervector> {
    let dim = bases[0].dim();
    let mut phases = vec![0.0; dim];
    for (b, &p) in bases.iter().zip(coords) {
        for (acc, &phi) in phases.iter_mut().zip(b.phases()) {
            *acc += phi * p;
        }
    }
    UnitaryHypervector::from_phases(phases)
}

/// Sample a domain from scratch: the bases use sub-streams `0..k`.
pub fn make_domain<S: Into<String>>(
    name: &str,
    dim_names: Vec<S>,
    range: ValueRange,
    dim: usize,
    basis_sigma: f64,
    seed: RngSeed,
) -> Result<DomainSpec> {
    let config = DomainConfig::new(name, dim_names)
        .with_range(range)
        .with_basis_sigma(basis_sigma);
    DomainSpec::generate(config, dim, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn color(dim: usize) -> DomainSpec {
        make_domain(
            "color",
            vec!["x", "y", "z"],
            ValueRange::default(),
            dim,
            DEFAULT_BASIS_SIGMA,
            RngSeed(17),
        )
        .unwrap()
    }

    fn point(coords: &[f64]) -> Prototype {
        Prototype::new("color", coords.to_vec()).unwrap()
    }

    #[test]
    fn purple_preprocessing() {
        let c = ColorHsb::new(315.0, 87.0, 53.0).unwrap();
        let p = hsb_to_point(c, ScalingConstant::default());
        assert!((p[0] - 6.151_828).abs() < 1e-5, "{p:?}");
        assert!((p[1] + 6.151_828).abs() < 1e-5);
        assert!((p[2] - 5.3).abs() < 1e-12);
        // displayed to one decimal as 6.2, −6.2, 5.3
        assert_eq!(format!("{:.1} {:.1} {:.1}", p[0], p[1], p[2]), "6.2 -6.2 5.3");
    }

    #[test]
    fn hsb_degenerate_points() {
        let beta = ScalingConstant::default();
        assert_eq!(hsb_to_point(ColorHsb::new(0.0, 0.0, 0.0).unwrap(), beta), [0.0, 0.0, 0.0]);
        let p = hsb_to_point(ColorHsb::new(90.0, 50.0, 100.0).unwrap(), beta);
        assert!(p[0].abs() < 1e-12);
        assert!((p[1] - 5.0).abs() < 1e-12);
        assert_eq!(p[2], 10.0);
    }

    #[test]
    fn hsb_validation() {
        assert!(ColorHsb::new(360.0, 10.0, 10.0).is_err());
        assert!(ColorHsb::new(-1.0, 10.0, 10.0).is_err());
        assert!(ColorHsb::new(10.0, 100.5, 10.0).is_err());
        assert!(ColorHsb::new(10.0, 10.0, -0.5).is_err());
        assert!(ScalingConstant::new(0.0).is_err());
        assert!(ScalingConstant::new(f64::NAN).is_err());
    }

    #[test]
    fn inverse_preprocessing() {
        let beta = ScalingConstant::default();
        let purple = point_to_hsb(&[6.151_828_5, -6.151_828_5, 5.3], beta).unwrap();
        assert!((purple.hue - 315.0).abs() < 1e-4);
        assert!((purple.saturation - 87.0).abs() < 1e-4);
        assert!((purple.brightness - 53.0).abs() < 1e-12);

        // the decoded yellow coordinates, read literally
        let y = point_to_hsb(&[0.5, 2.0, 9.5], beta).unwrap();
        assert!((y.hue - 75.963_756_5).abs() < 1e-6, "{}", y.hue);
        assert!((y.saturation - 20.615_528_1).abs() < 1e-6);
        assert!((y.brightness - 95.0).abs() < 1e-12);

        let axis = point_to_hsb(&[0.0, 0.0, 5.0], beta).unwrap();
        assert_eq!((axis.hue, axis.saturation, axis.brightness), (0.0, 0.0, 50.0));
        assert!(point_to_hsb(&[1.0, 2.0], beta).is_err());
    }

    #[test]
    fn clamp_examples() {
        let d = color(256);
        assert_eq!(d.clamp_to_range(&point(&[11.0, 0.0, 0.0])).unwrap().coords, vec![10.0, 0.0, 0.0]);
        assert_eq!(d.clamp_to_range(&point(&[1.0, -2.0, 3.5])).unwrap().coords, vec![1.0, -2.0, 3.5]);
        assert_eq!(
            d.clamp_to_range(&point(&[-10.2, 10.2, 0.0])).unwrap().coords,
            vec![-10.0, 10.0, 0.0]
        );
    }

    #[test]
    fn make_domain_checks() {
        let d = color(10_000);
        assert_eq!(d.k(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(d.bases()[i].similarity(&d.bases()[j]).unwrap().abs() < 0.05);
            }
        }
        let weight = make_domain(
            "weight",
            vec!["w"],
            ValueRange::default(),
            10_000,
            DEFAULT_BASIS_SIGMA,
            RngSeed(1),
        )
        .unwrap();
        assert_eq!(weight.k(), 1);
        assert!(weight.config().beta.is_none());
        let empty: Vec<&str> = vec![];
        assert!(make_domain("none", empty, ValueRange::default(), 64, 1.0, RngSeed(1)).is_err());
    }

    #[test]
    fn narrow_bases_fail_orthogonality_with_named_pair() {
        let err = make_domain(
            "tight",
            vec!["a", "b"],
            ValueRange::default(),
            10_000,
            PI / 7.0,
            RngSeed(3),
        )
        .unwrap_err();
        match err {
            Error::NotOrthogonal { first, second, .. } => {
                assert_eq!((first.as_str(), second.as_str()), ("a", "b"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let bad = DomainConfig::new("c", vec!["a", "a"]);
        assert!(bad.validate().is_err());
        let bad = DomainConfig::new("c", vec!["a"]).with_beta(Some(10.0));
        assert!(bad.validate().is_err());
        let bad = DomainConfig::new("c", vec!["a"]).with_kernel_sigma(0.0);
        assert!(bad.validate().is_err());
        assert!(ValueRange::new(1.0, 1.0).is_err());
    }

    #[test]
    fn origin_encodes_to_identity() {
        let d = color(512);
        let e = d.encode(&point(&[0.0, 0.0, 0.0])).unwrap();
        assert_eq!(e, UnitaryHypervector::identity(512).unwrap());
    }

    #[test]
    fn encode_is_a_homomorphism() {
        let d = color(512);
        let p = [1.5, -2.25, 3.0];
        let q = [-0.5, 4.0, 2.5];
        let sum: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
        let lhs = d.encode_coords(&p).unwrap().bind(&d.encode_coords(&q).unwrap()).unwrap();
        assert!(lhs.approx_eq(&d.encode_coords(&sum).unwrap(), 1e-9));
        let neg: Vec<f64> = p.iter().map(|v| -v).collect();
        assert!(d.encode_coords(&p).unwrap().inverse().approx_eq(&d.encode_coords(&neg).unwrap(), 1e-9));
    }

    #[test]
    fn encode_matches_explicit_fpe_binding() {
        let d = color(256);
        let p = [6.2, -6.2, 5.3];
        let explicit = d.bases()[0]
            .fpe(p[0])
            .unwrap()
            .bind(&d.bases()[1].fpe(p[1]).unwrap())
            .unwrap()
            .bind(&d.bases()[2].fpe(p[2]).unwrap())
            .unwrap();
        assert!(d.encode_coords(&p).unwrap().approx_eq(&explicit, 1e-9));
    }

    #[test]
    fn encode_rejects_wrong_arity_and_domain() {
        let d = color(64);
        assert!(matches!(
            d.encode(&point(&[1.0, 2.0])),
            Err(Error::CoordinateCount { expected: 3, got: 2, .. })
        ));
        let other = Prototype::new("weight", vec![1.0, 2.0, 3.0]).unwrap();
        assert!(d.encode(&other).is_err());
    }

    #[test]
    fn kernel_encoding_follows_bandwidth() {
        let config = DomainConfig::new("color", vec!["x", "y", "z"]).with_kernel_sigma(0.3);
        let d = DomainSpec::generate(config, 10_000, RngSeed(5)).unwrap();
        let a = [1.0, 2.0, 3.0];
        let b = [2.0, 2.0, 1.5];
        let got = d.kernel_encode(&a).unwrap().similarity(&d.kernel_encode(&b).unwrap()).unwrap();
        let want = d.expected_kernel(&a, &b).unwrap();
        assert!((got - want).abs() < 0.03, "{got} vs {want}");
    }
}
