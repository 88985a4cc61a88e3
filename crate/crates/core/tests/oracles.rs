//! Expected values computed without the hypervector machinery, then checked
//! against the library.

use std::f64::consts::PI;

use hyperspace::analogy::{self, AnalogyQuery, DecoderConfig, Operand};
use hyperspace::fixtures::{fixture_store, FIXTURE_COLORS, FIXTURE_KERNEL_SIGMA};
use hyperspace::store::ConceptQuery;
use hyperspace::*;

/// Plain-trig HSB conversion with β = 10.
fn oracle_point(hue: f64, sat: f64, bri: f64) -> [f64; 3] {
    let r = hue * PI / 180.0;
    [sat * r.cos() / 10.0, sat * r.sin() / 10.0, bri / 10.0]
}

fn table(label: &str) -> [f64; 3] {
    let (_, h, s, b) = FIXTURE_COLORS.iter().find(|c| c.0 == label).copied().unwrap();
    oracle_point(h, s, b)
}

fn snap(v: f64) -> f64 {
    ((v.clamp(-10.0, 10.0) + 10.0) * 2.0 + 0.5).floor() / 2.0 - 10.0
}

fn dist2(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Nearest label by squared distance; with an isotropic Gaussian kernel this
/// is the kernel-similarity argmax.
fn oracle_nearest(point: &[f64], exclude: &[&str]) -> &'static str {
    FIXTURE_COLORS
        .iter()
        .filter(|c| !exclude.contains(&c.0))
        .min_by(|x, y| {
            dist2(point, &table(x.0))
                .partial_cmp(&dist2(point, &table(y.0)))
                .unwrap()
        })
        .unwrap()
        .0
}

#[test]
fn fixture_category_answer() {
    let (a, b, c) = (table("PURPLE"), table("BLUE"), table("ORANGE"));
    let x: Vec<f64> = (0..3).map(|i| c[i] - a[i] + b[i]).collect();
    let expected: Vec<f64> = x.iter().map(|&v| snap(v)).collect();
    assert_eq!(expected, vec![-4.0, 2.5, 9.5]);
    assert_eq!(oracle_nearest(&expected, &[]), "YELLOW");

    let store = fixture_store(10_000, RngSeed(0)).unwrap();
    let q = AnalogyQuery::category(
        Operand::label("PURPLE"),
        Operand::label("BLUE"),
        Operand::label("ORANGE"),
    );
    for method in [DecodeMethod::Resonator, DecodeMethod::Bruteforce] {
        let cfg = DecoderConfig { method, ..DecoderConfig::default() };
        let ans = analogy::solve_category(&q, &store, None, &cfg).unwrap();
        assert_eq!(ans.point, expected, "{method:?}");
        assert_eq!(ans.nearest_label.as_deref(), Some("YELLOW"));
        let expected_sim = (-FIXTURE_KERNEL_SIGMA.powi(2) * dist2(&expected, &table("YELLOW")) / 2.0).exp();
        assert!((ans.nearest_similarity.unwrap() - expected_sim).abs() < 0.03);
    }
}

#[test]
fn fixture_property_answer() {
    assert_eq!(oracle_nearest(&table("BANANA"), &["APPLE", "BANANA"]), "YELLOW");
    let store = fixture_store(10_000, RngSeed(0)).unwrap();
    let q = AnalogyQuery::property(
        Operand::label("APPLE"),
        Operand::label("RED"),
        Operand::label("BANANA"),
    );
    let ans = analogy::solve_property(&q, &store).unwrap();
    assert_eq!(ans.nearest_label.as_deref(), Some("YELLOW"));
    assert_eq!(ans.salient_domain.as_deref(), Some("color"));
}

#[test]
fn fixture_prototypes_are_their_own_nearest() {
    let store = fixture_store(10_000, RngSeed(0)).unwrap();
    for rec in store.concepts() {
        let hit = store
            .nearest_concept(&rec.domain, ConceptQuery::Point(&rec.coords))
            .unwrap();
        assert_eq!(hit.label, rec.label);
        assert!((hit.similarity - 1.0).abs() < 1e-6);
    }
}

#[test]
fn far_queries_report_low_similarity() {
    let store = Store::new(10_000, RngSeed(4))
        .unwrap()
        .add_domain(DomainConfig::new("line", vec!["x"]))
        .unwrap()
        .put_concept(ConceptRecord::explicit("P", "line", vec![-3.0]), false)
        .unwrap();
    let hit = store.nearest_concept("line", ConceptQuery::Point(&[3.0])).unwrap();
    // exp(−(π/7)²·36/2) ≈ 0.027
    assert!(hit.similarity < 0.1, "{}", hit.similarity);
}

#[test]
fn kernel_law_monte_carlo() {
    let sigma = PI / 7.0;
    let d = 10_000;
    for delta in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let mut total = 0.0;
        for seed in 0..20 {
            let base = UnitaryHypervector::sample_gaussian(
                d,
                PhaseDistribution::centered(sigma).unwrap(),
                RngSeed(seed),
                0,
            )
            .unwrap();
            let p = 1.5;
            total += base.fpe(p).unwrap().similarity(&base.fpe(p + delta).unwrap()).unwrap();
        }
        let expected = (-sigma * sigma * delta * delta / 2.0).exp();
        assert!((total / 20.0 - expected).abs() < 0.02, "delta {delta}");
    }
}

#[test]
fn off_disc_point_in_hsb() {
    // the decoded triple (0.5, 2.0, 9.5) read back through the inverse map
    let h = 2.0f64.atan2(0.5).to_degrees();
    let s = 10.0 * (0.25f64 + 4.0).sqrt();
    let c = space::point_to_hsb(&[0.5, 2.0, 9.5], ScalingConstant::default()).unwrap();
    assert!((c.hue - h).abs() < 1e-9 && (h - 75.963_756_5).abs() < 1e-6);
    assert!((c.saturation - s).abs() < 1e-9 && (s - 20.615_528_1).abs() < 1e-6);
    assert!((c.brightness - 95.0).abs() < 1e-12);
}

#[test]
fn orthogonality_depends_on_spread() {
    // independent phases with spread σ differ by N(0, 2σ²), so the expected
    // similarity is exp(−σ²)
    let pair = |sigma: f64, i: u64| {
        let dist = PhaseDistribution::centered(sigma).unwrap();
        let x = UnitaryHypervector::sample_gaussian(10_000, dist, RngSeed(i), 0).unwrap();
        let y = UnitaryHypervector::sample_gaussian(10_000, dist, RngSeed(i), 1).unwrap();
        x.similarity(&y).unwrap()
    };
    for sigma in [PI, 1.5 * PI, 2.0 * PI] {
        let worst = (0..100).map(|i| pair(sigma, i).abs()).fold(0.0, f64::max);
        assert!(worst < 0.05, "σ = {sigma}: {worst}");
    }
    let half = PI / 2.0;
    let mean = (0..20).map(|i| pair(half, i)).sum::<f64>() / 20.0;
    assert!((mean - (-half * half).exp()).abs() < 0.01, "{mean}");
}
