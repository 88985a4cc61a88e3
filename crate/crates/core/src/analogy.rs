//! Category analogies by the parallelogram rule and property analogies by
//! salient-domain lookup.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hdc::UnitaryHypervector;
use crate::resonator::{
    brute_force_decode, make_codebook, resonator_decode, DecodeMethod, DecodeResult, GridSpec,
    ResonatorConfig, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::space::{point_to_hsb, ColorHsb, DomainSpec, Prototype};
use crate::store::{ConceptQuery, Store};

#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Label(String),
    Point(Prototype),
}

impl Operand {
    pub fn label(s: impl Into<String>) -> Self {
        Operand::Label(s.into())
    }

    fn label_str(&self) -> Option<&str> {
        match self {
            Operand::Label(l) => Some(l),
            Operand::Point(_) => None,
        }
    }

    fn describe(&self) -> String {
        match self {
            Operand::Label(l) => format!("`{l}`"),
            Operand::Point(p) => format!("point {:?} in `{}`", p.coords, p.domain),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalogyKind {
    Category,
    Property,
}

/// `A : B :: C : ?`
#[derive(Debug, Clone, PartialEq)]
pub struct AnalogyQuery {
    pub a: Operand,
    pub b: Operand,
    pub c: Operand,
    pub kind: AnalogyKind,
}

impl AnalogyQuery {
    pub fn category(a: Operand, b: Operand, c: Operand) -> Self {
        Self { a, b, c, kind: AnalogyKind::Category }
    }

    pub fn property(a: Operand, b: Operand, c: Operand) -> Self {
        Self { a, b, c, kind: AnalogyKind::Property }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub grid: GridSpec,
    pub method: DecodeMethod,
    pub resonator: ResonatorConfig,
    pub brute_force_cap: u64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            method: DecodeMethod::Resonator,
            resonator: ResonatorConfig::default(),
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalogyAnswer {
    pub kind: AnalogyKind,
    pub domain: String,
    pub point: Vec<f64>,
    pub nearest_label: Option<String>,
    /// Kernel similarity between the answer point and `nearest_label`.
    pub nearest_similarity: Option<f64>,
    /// Present for category analogies, which decode a hypervector.
    pub decode: Option<DecodeResult>,
    pub salient_domain: Option<String>,
    /// The answer point in HSB terms, for domains that take HSB input.
    pub hsb: Option<ColorHsb>,
}

impl AnalogyAnswer {
    pub fn decode_iterations(&self) -> usize {
        self.decode.as_ref().map_or(0, |d| d.sweeps_used)
    }

    pub fn converged(&self) -> bool {
        self.decode.as_ref().is_none_or(|d| d.converged)
    }
}

/// `(c ⊛ a⁻¹) ⊛ b`; for encodings this is the encoding of `C − A + B`.
pub fn parallelogram_find(
    a: &UnitaryHypervector,
    b: &UnitaryHypervector,
    c: &UnitaryHypervector,
) -> Result<UnitaryHypervector> {
    c.unbind(a)?.bind(b)
}

/// Decode `x` over `spec`'s codebooks with the configured method.
pub fn decode(x: &UnitaryHypervector, spec: &DomainSpec, cfg: &DecoderConfig) -> Result<DecodeResult> {
    let books = make_codebook(spec, cfg.grid)?;
    match cfg.method {
        DecodeMethod::Resonator => resonator_decode(x, &books, &cfg.resonator),
        DecodeMethod::Bruteforce => brute_force_decode(x, &books, cfg.brute_force_cap),
    }
}

fn domains_of(store: &Store, op: &Operand) -> Result<Vec<String>> {
    match op {
        Operand::Label(l) => {
            let recs = store.records(l);
            if recs.is_empty() {
                return Err(Error::ConceptNotFound(l.clone()));
            }
            Ok(recs.into_iter().map(|r| r.domain.clone()).collect())
        }
        Operand::Point(p) => {
            store.domain(&p.domain)?;
            Ok(vec![p.domain.clone()])
        }
    }
}

fn coords_in(store: &Store, op: &Operand, domain: &str) -> Option<Vec<f64>> {
    match op {
        Operand::Label(l) => store.get(l, domain).map(|r| r.coords.clone()),
        Operand::Point(p) => (p.domain == domain).then(|| p.coords.clone()),
    }
}

/// Pick the domain shared by all operands: `domain` if given, otherwise the
/// first shared one in registration order.
fn shared_domain(store: &Store, ops: [&Operand; 3], domain: Option<&str>) -> Result<String> {
    let per_op = ops
        .iter()
        .map(|op| domains_of(store, op))
        .collect::<Result<Vec<_>>>()?;
    if let Some(d) = domain {
        store.domain(d)?;
        if let Some((op, _)) = ops.iter().zip(&per_op).find(|(_, ds)| !ds.iter().any(|x| x == d)) {
            return Err(Error::CategoryMismatch(format!(
                "{} has no prototype in domain `{d}`",
                op.describe()
            )));
        }
        return Ok(d.to_string());
    }
    store
        .domains()
        .map(|s| s.name())
        .find(|name| per_op.iter().all(|ds| ds.iter().any(|x| x == name)))
        .map(str::to_string)
        .ok_or_else(|| {
            Error::CategoryMismatch(format!(
                "{}, {} and {} share no domain",
                ops[0].describe(),
                ops[1].describe(),
                ops[2].describe()
            ))
        })
}

fn nearest(store: &Store, domain: &str, point: &[f64], exclude: &[&str]) -> Result<(Option<String>, Option<f64>)> {
    match store.nearest_concept_excluding(domain, ConceptQuery::Point(point), exclude) {
        Ok(hit) => Ok((Some(hit.label), Some(hit.similarity))),
        Err(Error::EmptyDomain(_)) => Ok((None, None)),
        Err(e) => Err(e),
    }
}

/// Solve `A : B :: C : ?` inside one shared domain.
pub fn solve_category(
    query: &AnalogyQuery,
    store: &Store,
    domain: Option<&str>,
    cfg: &DecoderConfig,
) -> Result<AnalogyAnswer> {
    let name = shared_domain(store, [&query.a, &query.b, &query.c], domain)?;
    let spec = store.domain(&name)?;
    let encode = |op: &Operand| {
        let coords = coords_in(store, op, &name).expect("resolved in the shared domain");
        spec.encode_coords(&coords)
    };
    let x = parallelogram_find(&encode(&query.a)?, &encode(&query.b)?, &encode(&query.c)?)?;
    let decoded = decode(&x, spec, cfg)?;
    let (nearest_label, nearest_similarity) = nearest(store, &name, &decoded.coords, &[])?;
    let hsb = spec
        .beta()
        .map(|beta| point_to_hsb(&decoded.coords, beta))
        .transpose()?;
    Ok(AnalogyAnswer {
        kind: AnalogyKind::Category,
        domain: name,
        point: decoded.coords.clone(),
        nearest_label,
        nearest_similarity,
        decode: Some(decoded),
        salient_domain: None,
        hsb,
    })
}

/// The registered domain whose identifier is most similar to the identifier of
/// `b`'s domain. Ties go to the earliest registered domain.
pub fn salient_domain(b: &Operand, store: &Store) -> Result<String> {
    if store.domains().next().is_none() {
        return Err(Error::NoDomains);
    }
    let home = domains_of(store, b)?.remove(0);
    let target = store.domain(&home)?.identifier();
    let mut best: Option<(&str, f64)> = None;
    for spec in store.domains() {
        let id = spec.identifier();
        if id.dim() != target.dim() {
            continue;
        }
        let s = id.similarity(&target)?;
        if best.is_none_or(|(_, bs)| s > bs) {
            best = Some((spec.name(), s));
        }
    }
    Ok(best.expect("the home domain is registered").0.to_string())
}

/// Solve `A : B :: C : ?` where B names a property: answer with the stored
/// concept of B's salient domain closest to C's projection there.
pub fn solve_property(query: &AnalogyQuery, store: &Store) -> Result<AnalogyAnswer> {
    domains_of(store, &query.a)?;
    domains_of(store, &query.c)?;
    let salient = salient_domain(&query.b, store)?;
    let spec = store.domain(&salient)?;
    let missing = |op: &Operand| Error::MissingProjection {
        label: op.label_str().map_or_else(|| op.describe(), str::to_string),
        domain: salient.clone(),
    };
    coords_in(store, &query.a, &salient).ok_or_else(|| missing(&query.a))?;
    let point = coords_in(store, &query.c, &salient).ok_or_else(|| missing(&query.c))?;
    let exclude: Vec<&str> = [&query.a, &query.c].iter().filter_map(|op| op.label_str()).collect();
    let (nearest_label, nearest_similarity) = nearest(store, &salient, &point, &exclude)?;
    let hsb = spec.beta().map(|beta| point_to_hsb(&point, beta)).transpose()?;
    Ok(AnalogyAnswer {
        kind: AnalogyKind::Property,
        domain: salient.clone(),
        point,
        nearest_label,
        nearest_similarity,
        decode: None,
        salient_domain: Some(salient),
        hsb,
    })
}

/// Dispatch on the query kind. `domain` only applies to category analogies.
pub fn solve(
    query: &AnalogyQuery,
    store: &Store,
    domain: Option<&str>,
    cfg: &DecoderConfig,
) -> Result<AnalogyAnswer> {
    match query.kind {
        AnalogyKind::Category => solve_category(query, store, domain, cfg),
        AnalogyKind::Property => solve_property(query, store),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hdc::RngSeed;
    use crate::space::DomainConfig;
    use crate::store::ConceptRecord;

    fn store() -> Store {
        Store::new(2_000, RngSeed(3))
            .unwrap()
            .add_domain(DomainConfig::new("color", vec!["x", "y", "z"]))
            .unwrap()
            .add_domain(DomainConfig::new("weight", vec!["w"]))
            .unwrap()
    }

    fn put(s: Store, label: &str, domain: &str, coords: &[f64]) -> Store {
        s.put_concept(ConceptRecord::explicit(label, domain, coords.to_vec()), false)
            .unwrap()
    }

    #[test]
    fn degenerate_parallelograms() {
        let s = store();
        let spec = s.domain("color").unwrap();
        let a = spec.encode_coords(&[1.0, 2.0, 3.0]).unwrap();
        let b = spec.encode_coords(&[4.0, 5.0, 6.0]).unwrap();
        let c = spec.encode_coords(&[2.0, 2.0, 2.0]).unwrap();
        assert!(parallelogram_find(&a, &b, &a).unwrap().approx_eq(&b, 1e-12));
        assert!(parallelogram_find(&a, &a, &c).unwrap().approx_eq(&c, 1e-12));
        let x = parallelogram_find(&a, &b, &c).unwrap();
        assert!(x.approx_eq(&spec.encode_coords(&[5.0, 5.0, 5.0]).unwrap(), 1e-9));
        let short = UnitaryHypervector::identity(10).unwrap();
        assert!(parallelogram_find(&a, &b, &short).is_err());
    }

    #[test]
    fn equal_operands_decode_to_the_operand() {
        // off-grid factors need the full dimension for the resonator
        let s = Store::new(10_000, RngSeed(3))
            .unwrap()
            .add_domain(DomainConfig::new("color", vec!["x", "y", "z"]))
            .unwrap();
        let s = put(s, "P", "color", &[1.5, -2.0, 7.2]);
        let q = AnalogyQuery::category(Operand::label("P"), Operand::label("P"), Operand::label("P"));
        let ans = solve_category(&q, &s, None, &DecoderConfig::default()).unwrap();
        assert_eq!(ans.point, vec![1.5, -2.0, 7.0]);
        assert_eq!(ans.nearest_label.as_deref(), Some("P"));
    }

    #[test]
    fn cross_domain_operands_are_rejected() {
        let s = put(put(store(), "P", "color", &[0.0, 0.0, 0.0]), "H", "weight", &[1.0]);
        let q = AnalogyQuery::category(Operand::label("P"), Operand::label("H"), Operand::label("P"));
        let err = solve_category(&q, &s, None, &DecoderConfig::default()).unwrap_err();
        assert!(matches!(err, Error::CategoryMismatch(_)), "{err}");
        let err = solve_category(&q, &s, Some("color"), &DecoderConfig::default()).unwrap_err();
        assert!(matches!(err, Error::CategoryMismatch(_)), "{err}");
        let q = AnalogyQuery::category(Operand::label("P"), Operand::label("Q"), Operand::label("P"));
        assert!(matches!(
            solve_category(&q, &s, None, &DecoderConfig::default()),
            Err(Error::ConceptNotFound(_))
        ));
    }

    #[test]
    fn explicit_points_and_empty_domains() {
        let s = store();
        let p = |c: &[f64]| Operand::Point(Prototype::new("color", c.to_vec()).unwrap());
        let q = AnalogyQuery::category(p(&[1.0, 1.0, 1.0]), p(&[2.0, 3.0, 4.0]), p(&[0.0, 0.0, 0.0]));
        let ans = solve_category(&q, &s, None, &DecoderConfig::default()).unwrap();
        assert_eq!(ans.point, vec![1.0, 2.0, 3.0]);
        assert_eq!(ans.nearest_label, None);
        assert_eq!(ans.nearest_similarity, None);
        assert!(ans.hsb.is_some());
    }

    #[test]
    fn salient_domain_rules() {
        let s = put(store(), "RED", "color", &[9.0, 0.0, 6.0]);
        assert_eq!(salient_domain(&Operand::label("RED"), &s).unwrap(), "color");
        let empty = Store::new(100, RngSeed(0)).unwrap();
        assert!(matches!(
            salient_domain(&Operand::label("RED"), &empty),
            Err(Error::NoDomains)
        ));
        // a second domain with identical bases: the first registered wins
        let twin = s.domain("color").unwrap().config().clone();
        let mut file = s.to_file();
        let mut entry = file.domains[0].clone();
        entry.name = "hue".into();
        entry.streams = twin.streams.clone();
        file.domains.insert(0, entry);
        let s2 = Store::from_file(file).unwrap();
        assert_eq!(salient_domain(&Operand::label("RED"), &s2).unwrap(), "hue");
    }

    #[test]
    fn property_analogy() {
        let mut s = store();
        for (l, c) in [("RED", [9.0, 0.0, 6.0]), ("YELLOW", [4.0, 6.5, 9.5]), ("APPLE", [8.9, -0.5, 5.5]), ("BANANA", [4.0, 6.0, 9.0])] {
            s = put(s, l, "color", &c);
        }
        s = put(s, "APPLE", "weight", &[1.0]);
        s = put(s, "BANANA", "weight", &[1.2]);
        let q = AnalogyQuery::property(Operand::label("APPLE"), Operand::label("RED"), Operand::label("BANANA"));
        let ans = solve_property(&q, &s).unwrap();
        assert_eq!(ans.nearest_label.as_deref(), Some("YELLOW"));
        assert_eq!(ans.salient_domain.as_deref(), Some("color"));
        assert_eq!(ans.point, vec![4.0, 6.0, 9.0]);

        let s2 = put(s.clone(), "STRAW", "color", &[4.0, 6.0, 9.0]);
        let ans = solve_property(&q, &s2).unwrap();
        assert_eq!(ans.nearest_label.as_deref(), Some("STRAW"));
        assert!((ans.nearest_similarity.unwrap() - 1.0).abs() < 1e-9);

        let s3 = put(s, "HEAVY", "weight", &[8.0]);
        let s3 = put(s3, "PEBBLE", "color", &[0.0, 0.0, 0.0]);
        let q = AnalogyQuery::property(Operand::label("APPLE"), Operand::label("HEAVY"), Operand::label("PEBBLE"));
        assert!(matches!(
            solve_property(&q, &s3),
            Err(Error::MissingProjection { .. })
        ));
    }
}
