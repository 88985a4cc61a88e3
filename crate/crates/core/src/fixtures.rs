//! The documented example store: a color domain, a weight domain and a
//! handful of fruit and color concepts.
//!
//! Color concepts are entered as HSB readings and converted with β = 10.
//!
//! | label  | hue° | sat | bri |
//! |--------|------|-----|-----|
//! | PURPLE | 315  | 87  | 53  |
//! | BLUE   | 240  | 87  | 53  |
//! | ORANGE | 30   | 75  | 95  |
//! | YELLOW | 60   | 75  | 95  |
//! | RED    | 0    | 90  | 60  |
//! | APPLE  | 355  | 80  | 55  |
//! | BANANA | 55   | 80  | 90  |
//!
//! APPLE and BANANA also carry a weight record. The color domain uses a kernel
//! bandwidth of 0.15 per normalized unit so that similarities between
//! prototypes several units apart stay above the sampling noise at d = 10⁴.

use crate::error::Result;
use crate::hdc::RngSeed;
use crate::space::{hsb_to_point, ColorHsb, DomainConfig, ScalingConstant};
use crate::store::{ConceptRecord, Store};

pub const COLOR_DOMAIN: &str = "color";
pub const WEIGHT_DOMAIN: &str = "weight";
pub const COLOR_DIMS: [&str; 3] = ["hue-x", "hue-y", "brightness"];
pub const FIXTURE_KERNEL_SIGMA: f64 = 0.15;

/// `(label, hue, saturation, brightness)`
pub const FIXTURE_COLORS: [(&str, f64, f64, f64); 7] = [
    ("PURPLE", 315.0, 87.0, 53.0),
    ("BLUE", 240.0, 87.0, 53.0),
    ("ORANGE", 30.0, 75.0, 95.0),
    ("YELLOW", 60.0, 75.0, 95.0),
    ("RED", 0.0, 90.0, 60.0),
    ("APPLE", 355.0, 80.0, 55.0),
    ("BANANA", 55.0, 80.0, 90.0),
];

/// `(label, normalized weight)`
pub const FIXTURE_WEIGHTS: [(&str, f64); 2] = [("APPLE", 1.8), ("BANANA", 1.2)];

pub fn color_domain() -> DomainConfig {
    DomainConfig::new(COLOR_DOMAIN, COLOR_DIMS.to_vec()).with_kernel_sigma(FIXTURE_KERNEL_SIGMA)
}

pub fn weight_domain() -> DomainConfig {
    DomainConfig::new(WEIGHT_DOMAIN, vec!["w"])
}

/// Record for an HSB reading, converted with the default β.
pub fn hsb_record(label: &str, domain: &str, hsb: ColorHsb) -> ConceptRecord {
    ConceptRecord {
        label: label.to_string(),
        domain: domain.to_string(),
        coords: hsb_to_point(hsb, ScalingConstant::default()).to_vec(),
        source: hsb.into(),
    }
}

pub fn fixture_store(dim: usize, seed: RngSeed) -> Result<Store> {
    let mut store = Store::new(dim, seed)?
        .add_domain(color_domain())?
        .add_domain(weight_domain())?;
    for (label, h, s, b) in FIXTURE_COLORS {
        store = store.put_concept(hsb_record(label, COLOR_DOMAIN, ColorHsb::new(h, s, b)?), false)?;
    }
    for (label, w) in FIXTURE_WEIGHTS {
        store = store.put_concept(ConceptRecord::explicit(label, WEIGHT_DOMAIN, vec![w]), false)?;
    }
    Ok(store)
}
