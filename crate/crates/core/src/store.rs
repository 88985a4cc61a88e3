//! Long-term memory stand-in: domains plus labeled concept prototypes.
//!
//! Only coordinates are persisted. Bases are regenerated from the global seed
//! and each domain's RNG sub-streams unless a domain is marked to embed its
//! raw phases. A [`Store`] value is an immutable snapshot: every mutation
//! returns a new snapshot and saving writes a temporary file that is renamed
//! over the target.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdc::{RngSeed, UnitaryHypervector};
use crate::space::{ColorHsb, DomainConfig, DomainSpec, Prototype, ValueRange};

pub const STORE_VERSION: u32 = 1;
pub const RNG_NAME: &str = "chacha20";
pub const STORE_PATH_ENV: &str = "HYPERSPACE_STORE";
pub const DEFAULT_STORE_PATH: &str = "hyperspace-store.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum ConceptSource {
    Explicit,
    Hsb {
        hue: f64,
        saturation: f64,
        brightness: f64,
    },
}

impl From<ColorHsb> for ConceptSource {
    fn from(c: ColorHsb) -> Self {
        ConceptSource::Hsb {
            hue: c.hue,
            saturation: c.saturation,
            brightness: c.brightness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptRecord {
    pub label: String,
    pub domain: String,
    pub coords: Vec<f64>,
    pub source: ConceptSource,
}

impl ConceptRecord {
    pub fn explicit(label: impl Into<String>, domain: impl Into<String>, coords: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            domain: domain.into(),
            coords,
            source: ConceptSource::Explicit,
        }
    }

    pub fn prototype(&self) -> Prototype {
        Prototype {
            domain: self.domain.clone(),
            coords: self.coords.clone(),
        }
    }
}

/// Result of a nearest-concept lookup.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearestConcept {
    pub label: String,
    pub similarity: f64,
}

/// What to compare stored concepts against.
#[derive(Debug, Clone, Copy)]
pub enum ConceptQuery<'a> {
    Point(&'a [f64]),
    /// A hypervector in the domain's kernel space (see [`DomainSpec::kernel_encode`]).
    Vector(&'a UnitaryHypervector),
}

#[derive(Debug, Clone)]
struct DomainSlot {
    spec: Arc<DomainSpec>,
    embed_bases: bool,
}

#[derive(Debug, Clone)]
pub struct Store {
    seed: RngSeed,
    dim: usize,
    domains: Vec<DomainSlot>,
    concepts: Arc<Vec<ConceptRecord>>,
}

impl Store {
    pub fn new(dim: usize, seed: RngSeed) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            seed,
            dim,
            domains: Vec::new(),
            concepts: Arc::new(Vec::new()),
        })
    }

    pub fn seed(&self) -> RngSeed {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Registered domains, in registration order.
    pub fn domains(&self) -> impl Iterator<Item = &DomainSpec> {
        self.domains.iter().map(|s| s.spec.as_ref())
    }

    pub fn concepts(&self) -> &[ConceptRecord] {
        &self.concepts
    }

    pub fn domain(&self, name: &str) -> Result<&DomainSpec> {
        self.domains
            .iter()
            .find(|s| s.spec.name() == name)
            .map(|s| s.spec.as_ref())
            .ok_or_else(|| Error::UnknownDomain(name.to_string()))
    }

    fn next_stream(&self) -> u64 {
        self.domains
            .iter()
            .flat_map(|s| s.spec.config().streams.iter().copied())
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Register a new domain. Its bases get the next unused sub-streams,
    /// whatever `config.streams` says.
    pub fn add_domain(&self, config: DomainConfig) -> Result<Store> {
        if self.domain(&config.name).is_ok() {
            return Err(Error::DuplicateDomain(config.name));
        }
        let config = config.with_first_stream(self.next_stream());
        let spec = DomainSpec::generate(config, self.dim, self.seed)?;
        Ok(self.with_slot(DomainSlot {
            spec: Arc::new(spec),
            embed_bases: false,
        }))
    }

    fn with_slot(&self, slot: DomainSlot) -> Store {
        let mut next = self.clone();
        next.domains.push(slot);
        next
    }

    /// Persist raw basis phases for `domain` on save instead of regenerating them.
    pub fn set_embed_bases(&self, domain: &str, embed: bool) -> Result<Store> {
        let mut next = self.clone();
        let slot = next
            .domains
            .iter_mut()
            .find(|s| s.spec.name() == domain)
            .ok_or_else(|| Error::UnknownDomain(domain.to_string()))?;
        slot.embed_bases = embed;
        Ok(next)
    }

    /// Add a concept, or replace an existing `(label, domain)` when `overwrite` is set.
    pub fn put_concept(&self, record: ConceptRecord, overwrite: bool) -> Result<Store> {
        let spec = self.domain(&record.domain)?;
        if record.label.trim().is_empty() {
            return Err(Error::invalid("concept label must not be empty"));
        }
        if record.coords.len() != spec.k() {
            return Err(Error::CoordinateCount {
                domain: record.domain.clone(),
                expected: spec.k(),
                got: record.coords.len(),
            });
        }
        if record.coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("concept coordinate"));
        }
        if !spec.in_range(&record.coords) {
            return Err(Error::invalid(format!(
                "coordinates {:?} of `{}` fall outside the range of domain `{}`",
                record.coords, record.label, record.domain
            )));
        }
        let mut concepts = self.concepts.as_ref().clone();
        match concepts
            .iter_mut()
            .find(|c| c.label == record.label && c.domain == record.domain)
        {
            Some(existing) if overwrite => *existing = record,
            Some(_) => {
                return Err(Error::DuplicateLabel {
                    label: record.label,
                    domain: record.domain,
                })
            }
            None => concepts.push(record),
        }
        let mut next = self.clone();
        next.concepts = Arc::new(concepts);
        Ok(next)
    }

    pub fn get(&self, label: &str, domain: &str) -> Option<&ConceptRecord> {
        self.concepts.iter().find(|c| c.label == label && c.domain == domain)
    }

    /// Every record carrying `label`, in domain registration order.
    pub fn records(&self, label: &str) -> Vec<&ConceptRecord> {
        let mut out: Vec<&ConceptRecord> = self.concepts.iter().filter(|c| c.label == label).collect();
        out.sort_by_key(|c| self.domain_position(&c.domain));
        out
    }

    fn domain_position(&self, name: &str) -> usize {
        self.domains
            .iter()
            .position(|s| s.spec.name() == name)
            .unwrap_or(usize::MAX)
    }

    /// Stored concept of `domain` whose kernel encoding is most similar to the
    /// query. Ties go to the lexicographically first label.
    pub fn nearest_concept(&self, domain: &str, query: ConceptQuery<'_>) -> Result<NearestConcept> {
        self.nearest_concept_excluding(domain, query, &[])
    }

    /// As [`nearest_concept`](Self::nearest_concept), skipping the given labels.
    pub fn nearest_concept_excluding(
        &self,
        domain: &str,
        query: ConceptQuery<'_>,
        exclude: &[&str],
    ) -> Result<NearestConcept> {
        let spec = self.domain(domain)?;
        let query = match query {
            ConceptQuery::Point(coords) => spec.kernel_encode(coords)?,
            ConceptQuery::Vector(v) => v.clone(),
        };
        let mut candidates: Vec<&ConceptRecord> = self
            .concepts
            .iter()
            .filter(|c| c.domain == domain && !exclude.contains(&c.label.as_str()))
            .collect();
        candidates.sort_by(|a, b| a.label.cmp(&b.label));
        let mut best: Option<NearestConcept> = None;
        for c in candidates {
            let similarity = spec.kernel_encode(&c.coords)?.similarity(&query)?;
            if best.as_ref().is_none_or(|b| similarity > b.similarity) {
                best = Some(NearestConcept {
                    label: c.label.clone(),
                    similarity,
                });
            }
        }
        best.ok_or_else(|| Error::EmptyDomain(domain.to_string()))
    }

    pub fn to_file(&self) -> StoreFile {
        StoreFile {
            version: STORE_VERSION,
            rng: RNG_NAME.to_string(),
            seed: self.seed.0,
            dim: self.dim,
            domains: self
                .domains
                .iter()
                .map(|s| DomainEntry::from_spec(&s.spec, s.embed_bases))
                .collect(),
            concepts: self.concepts.as_ref().clone(),
        }
    }

    pub fn from_file(file: StoreFile) -> Result<Store> {
        if file.version != STORE_VERSION {
            return Err(Error::VersionMismatch {
                found: file.version,
                expected: STORE_VERSION,
            });
        }
        if file.rng != RNG_NAME {
            return Err(Error::invalid(format!("unsupported generator `{}`", file.rng)));
        }
        let mut store = Store::new(file.dim, RngSeed(file.seed))?;
        for entry in file.domains {
            if store.domain(&entry.name).is_ok() {
                return Err(Error::DuplicateDomain(entry.name));
            }
            let embed = entry.bases.is_some();
            let (config, bases) = entry.into_parts();
            let spec = match bases {
                Some(raw) => {
                    let bases = raw
                        .into_iter()
                        .map(UnitaryHypervector::from_phases)
                        .collect::<Result<Vec<_>>>()?;
                    DomainSpec::with_bases(config, bases)?
                }
                None => DomainSpec::generate(config, file.dim, RngSeed(file.seed))?,
            };
            if spec.dim() != file.dim {
                return Err(Error::DimensionMismatch {
                    left: file.dim,
                    right: spec.dim(),
                });
            }
            store = store.with_slot(DomainSlot {
                spec: Arc::new(spec),
                embed_bases: embed,
            });
        }
        for record in file.concepts {
            store = store.put_concept(record, false)?;
        }
        Ok(store)
    }

    /// Canonical text form: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_file()).expect("store serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Store> {
        let parse_error = |e: serde_json::Error| Error::Parse {
            path: origin.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        };
        #[derive(Deserialize)]
        struct VersionProbe {
            version: u32,
        }
        let probe: VersionProbe = serde_json::from_str(text).map_err(parse_error)?;
        if probe.version != STORE_VERSION {
            return Err(Error::VersionMismatch {
                found: probe.version,
                expected: STORE_VERSION,
            });
        }
        let file: StoreFile = serde_json::from_str(text).map_err(parse_error)?;
        Store::from_file(file)
    }

    /// Write atomically: temporary file in the target directory, then rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
        tmp.write_all(self.to_json().as_bytes()).map_err(io_err)?;
        tmp.as_file().sync_all().map_err(io_err)?;
        tmp.persist(path).map_err(|e| io_err(e.error))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Store> {
        let text = std::fs::read_to_string(path).map_err(|source| {
            if source.kind() == std::io::ErrorKind::NotFound {
                Error::StoreNotFound(path.to_path_buf())
            } else {
                Error::Io {
                    path: path.to_path_buf(),
                    source,
                }
            }
        })?;
        Store::from_json(&text, path)
    }
}

/// On-disk layout. Field order here is the canonical key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoreFile {
    pub version: u32,
    pub rng: String,
    pub seed: u64,
    pub dim: usize,
    pub domains: Vec<DomainEntry>,
    pub concepts: Vec<ConceptRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainEntry {
    pub name: String,
    pub dim_names: Vec<String>,
    pub ranges: Vec<ValueRange>,
    pub basis_sigma: f64,
    pub kernel_sigma: Vec<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    pub streams: Vec<u64>,
    /// Raw lifted basis phases, present only for domains that embed them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<Vec<f64>>>,
}

impl DomainEntry {
    fn from_spec(spec: &DomainSpec, embed: bool) -> Self {
        let c = spec.config().clone();
        Self {
            name: c.name,
            dim_names: c.dim_names,
            ranges: c.ranges,
            basis_sigma: c.basis_sigma,
            kernel_sigma: c.kernel_sigma,
            beta: c.beta,
            streams: c.streams,
            bases: embed.then(|| spec.bases().iter().map(|b| b.phases().to_vec()).collect()),
        }
    }

    fn into_parts(self) -> (DomainConfig, Option<Vec<Vec<f64>>>) {
        (
            DomainConfig {
                name: self.name,
                dim_names: self.dim_names,
                ranges: self.ranges,
                basis_sigma: self.basis_sigma,
                kernel_sigma: self.kernel_sigma,
                beta: self.beta,
                streams: self.streams,
            },
            self.bases,
        )
    }
}
