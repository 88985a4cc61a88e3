//! Codebooks and factorization of bound hypervectors.
//!
//! [`resonator_decode`] recovers one codebook entry per factor from
//! `x = e₁ ⊛ e₂ ⊛ … ⊛ e_k` by iterating cleanups; [`brute_force_decode`]
//! scores every combination and serves as the reference answer.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdc::{RngSeed, UnitaryHypervector, ZERO_MAGNITUDE};
use crate::space::DomainSpec;

/// Default cap on the number of combinations the brute-force decoder scores.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 1_000_000;

/// Evenly spaced values `lo, lo + step, …, hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            lo: -10.0,
            hi: 10.0,
            step: 0.5,
        }
    }
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let grid = Self { lo, hi, step };
        grid.point_count()?;
        Ok(grid)
    }

    /// Number of grid points, after checking that `(hi − lo)/step` is integral.
    pub fn point_count(&self) -> Result<usize> {
        let Self { lo, hi, step } = *self;
        if !lo.is_finite() || !hi.is_finite() || !step.is_finite() {
            return Err(Error::InvalidGrid("bounds and step must be finite".into()));
        }
        if lo >= hi {
            return Err(Error::InvalidGrid(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if step <= 0.0 {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        let intervals = (hi - lo) / step;
        let rounded = intervals.round();
        if (intervals - rounded).abs() > 1e-9 * rounded.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "(hi - lo) / step = {intervals} is not an integer"
            )));
        }
        Ok(rounded as usize + 1)
    }

    pub fn value(&self, index: usize) -> f64 {
        self.lo + index as f64 * self.step
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        Ok((0..self.point_count()?).map(|i| self.value(i)).collect())
    }

    /// Index of the grid point nearest to `v`, clamped to the grid; halves round up.
    pub fn snap_index(&self, v: f64) -> Result<usize> {
        let n = self.point_count()?;
        let i = ((v - self.lo) / self.step + 0.5).floor();
        Ok(i.clamp(0.0, (n - 1) as f64) as usize)
    }

    pub fn snap(&self, v: f64) -> Result<f64> {
        Ok(self.value(self.snap_index(v)?))
    }
}

/// Unit phasors in split real/imaginary layout.
#[derive(Debug, Clone, PartialEq)]
struct Phasors {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Phasors {
    fn from_phases(phases: &[f64]) -> Self {
        let (re, im) = phases.iter().map(|p| (p.cos(), p.sin())).unzip();
        Self { re, im }
    }

    fn ones(dim: usize) -> Self {
        Self {
            re: vec![1.0; dim],
            im: vec![0.0; dim],
        }
    }

    fn dim(&self) -> usize {
        self.re.len()
    }

    fn mul_assign(&mut self, other: &Phasors) {
        for j in 0..self.dim() {
            let (a, b) = (self.re[j], self.im[j]);
            let (c, d) = (other.re[j], other.im[j]);
            self.re[j] = a * c - b * d;
            self.im[j] = a * d + b * c;
        }
    }

    /// `self · conj(other)`, samplewise.
    fn mul_conj(&self, other: &Phasors) -> Phasors {
        let mut out = self.clone();
        for j in 0..self.dim() {
            let (a, b) = (self.re[j], self.im[j]);
            let (c, d) = (other.re[j], other.im[j]);
            out.re[j] = a * c + b * d;
            out.im[j] = b * c - a * d;
        }
        out
    }

    /// `(1/d)·Σ_j self_j · conj(other_j)` as (re, im).
    fn inner(&self, other: &Phasors) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for j in 0..self.dim() {
            let (a, b) = (self.re[j], self.im[j]);
            let (c, d) = (other.re[j], other.im[j]);
            re += a * c + b * d;
            im += b * c - a * d;
        }
        let n = self.dim() as f64;
        (re / n, im / n)
    }

    /// Project each sample onto the unit circle (zero samples become 1).
    fn normalize(&mut self) {
        for j in 0..self.dim() {
            let m = self.re[j].hypot(self.im[j]);
            if m < ZERO_MAGNITUDE {
                self.re[j] = 1.0;
                self.im[j] = 0.0;
            } else {
                self.re[j] /= m;
                self.im[j] /= m;
            }
        }
    }
}

/// Reference hypervectors `basis^v` for each grid value `v` of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    basis_index: usize,
    values: Vec<f64>,
    entries: Vec<UnitaryHypervector>,
    phasors: Vec<Phasors>,
}

impl Codebook {
    pub fn new(basis_index: usize, basis: &UnitaryHypervector, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidGrid("a codebook needs at least two values".into()));
        }
        if values
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidGrid("codebook values must be strictly increasing".into()));
        }
        let entries = values
            .iter()
            .map(|&v| basis.fpe(v))
            .collect::<Result<Vec<_>>>()?;
        let phasors = entries.iter().map(|e| Phasors::from_phases(e.phases())).collect();
        Ok(Self {
            basis_index,
            values,
            entries,
            phasors,
        })
    }

    pub fn basis_index(&self) -> usize {
        self.basis_index
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn entries(&self) -> &[UnitaryHypervector] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].dim()
    }
}

/// One codebook per basis of `spec`, all over the same grid.
pub fn make_codebook(spec: &DomainSpec, grid: GridSpec) -> Result<Vec<Codebook>> {
    let values = grid.values()?;
    spec.bases()
        .iter()
        .enumerate()
        .map(|(i, b)| Codebook::new(i, b, values.clone()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateOrder {
    /// Each factor update sees the newest estimates of the others.
    SequentialInPlace,
    /// All factors update from the previous sweep's estimates.
    Synchronous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cleanup {
    /// Score-weighted superposition of all entries.
    Soft,
    /// Substitute the best-scoring entry.
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorConfig {
    pub max_sweeps: usize,
    pub update_order: UpdateOrder,
    pub cleanup: Cleanup,
    /// A sweep counts as settled when every estimate keeps at least
    /// `1 − settle_tolerance` coherence with its previous value.
    pub settle_tolerance: f64,
    /// Spread of random phase noise added to the initial estimates (0 = none).
    pub init_noise: f64,
    pub seed: RngSeed,
}

impl Default for ResonatorConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 100,
            update_order: UpdateOrder::SequentialInPlace,
            cleanup: Cleanup::Soft,
            settle_tolerance: 1e-3,
            init_noise: 0.0,
            seed: RngSeed(0),
        }
    }
}

impl ResonatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 {
            return Err(Error::invalid("max_sweeps must be at least 1"));
        }
        if !(self.settle_tolerance.is_finite() && self.settle_tolerance >= 0.0) {
            return Err(Error::invalid("settle tolerance must be a non-negative number"));
        }
        if !(self.init_noise.is_finite() && self.init_noise >= 0.0) {
            return Err(Error::invalid("initial noise must be a non-negative number"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeMethod {
    Resonator,
    Bruteforce,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    pub coords: Vec<f64>,
    pub indices: Vec<usize>,
    /// Sweep at which the final indices first appeared.
    pub sweeps_used: usize,
    /// Sweeps actually executed, including the one confirming convergence.
    pub sweeps_run: usize,
    pub converged: bool,
    pub method: DecodeMethod,
    /// Similarity between the input and the bound read-out.
    pub similarity: f64,
    /// Number of input-versus-entry comparisons performed.
    pub comparisons: u64,
}

fn check_books(x: &UnitaryHypervector, books: &[Codebook]) -> Result<()> {
    if books.is_empty() {
        return Err(Error::invalid("decoding needs at least one codebook"));
    }
    for b in books {
        if b.dim() != x.dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: b.dim(),
            });
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn readout(
    x: &Phasors,
    books: &[Codebook],
    indices: Vec<usize>,
    method: DecodeMethod,
    sweeps_used: usize,
    sweeps_run: usize,
    converged: bool,
    comparisons: u64,
) -> DecodeResult {
    let mut bound = Phasors::ones(x.dim());
    for (b, &i) in books.iter().zip(&indices) {
        bound.mul_assign(&b.phasors[i]);
    }
    DecodeResult {
        coords: books.iter().zip(&indices).map(|(b, &i)| b.values[i]).collect(),
        similarity: x.inner(&bound).0,
        indices,
        sweeps_used,
        sweeps_run,
        converged,
        method,
        comparisons,
    }
}

/// Complex scores of `residual` against every entry of `book`.
fn project(residual: &Phasors, book: &Codebook) -> Vec<(f64, f64)> {
    book.phasors.iter().map(|e| residual.inner(e)).collect()
}

/// Index of the largest score magnitude; ties go to the lowest index.
///
/// The magnitude is used because the factor estimates are only determined up
/// to unit phases that cancel in the product.
fn argmax_magnitude(scores: &[(f64, f64)]) -> usize {
    let mut best = 0;
    let mut best_mag = f64::NEG_INFINITY;
    for (i, &(re, im)) in scores.iter().enumerate() {
        let mag = re.hypot(im);
        if mag > best_mag {
            best = i;
            best_mag = mag;
        }
    }
    best
}

fn cleanup(book: &Codebook, scores: &[(f64, f64)], mode: Cleanup) -> Phasors {
    match mode {
        Cleanup::Hard => book.phasors[argmax_magnitude(scores)].clone(),
        Cleanup::Soft => {
            let dim = book.dim();
            let mut out = Phasors {
                re: vec![0.0; dim],
                im: vec![0.0; dim],
            };
            for (e, &(wr, wi)) in book.phasors.iter().zip(scores) {
                for j in 0..dim {
                    out.re[j] += wr * e.re[j] - wi * e.im[j];
                    out.im[j] += wr * e.im[j] + wi * e.re[j];
                }
            }
            out.normalize();
            out
        }
    }
}

/// Resonator-network factorization of `x` against one codebook per factor.
///
/// Each estimate starts as the phase-normalized superposition of its whole
/// codebook. A sweep visits the factors in order: unbind the other estimates
/// from `x`, score the residual against every entry, and replace the estimate
/// by the cleanup of those scores. The run has converged once a sweep leaves
/// every factor's best index unchanged and every estimate settled; otherwise
/// it stops after `max_sweeps` with `converged = false` and the last indices.
pub fn resonator_decode(
    x: &UnitaryHypervector,
    books: &[Codebook],
    cfg: &ResonatorConfig,
) -> Result<DecodeResult> {
    check_books(x, books)?;
    cfg.validate()?;
    let target = Phasors::from_phases(x.phases());
    let per_sweep: u64 = books.iter().map(|b| b.len() as u64).sum();

    if books.len() == 1 {
        // The residual is x itself, so the first sweep is already a fixed point.
        let scores = project(&target, &books[0]);
        let best = argmax_magnitude(&scores);
        return Ok(readout(&target, books, vec![best], DecodeMethod::Resonator, 1, 1, true, per_sweep));
    }

    let mut estimates: Vec<Phasors> = books
        .iter()
        .map(|b| {
            let scores = vec![(1.0, 0.0); b.len()];
            cleanup(b, &scores, Cleanup::Soft)
        })
        .collect();
    if cfg.init_noise > 0.0 {
        let normal = Normal::new(0.0, cfg.init_noise)
            .map_err(|e| Error::invalid(format!("initial noise: {e}")))?;
        for (i, est) in estimates.iter_mut().enumerate() {
            let mut rng = cfg.seed.stream(i as u64);
            let noise: Vec<f64> = (0..est.dim()).map(|_| normal.sample(&mut rng)).collect();
            est.mul_assign(&Phasors::from_phases(&noise));
        }
    }

    let mut indices: Vec<usize> = Vec::new();
    let mut first_seen = 0;
    for sweep in 1..=cfg.max_sweeps {
        let previous = estimates.clone();
        let mut next = Vec::with_capacity(books.len());
        for (i, book) in books.iter().enumerate() {
            let source = match cfg.update_order {
                UpdateOrder::SequentialInPlace => &estimates,
                UpdateOrder::Synchronous => &previous,
            };
            let mut others = Phasors::ones(x.dim());
            for (j, e) in source.iter().enumerate() {
                if j != i {
                    others.mul_assign(e);
                }
            }
            let residual = target.mul_conj(&others);
            let scores = project(&residual, book);
            next.push(argmax_magnitude(&scores));
            estimates[i] = cleanup(book, &scores, cfg.cleanup);
        }
        let settled = estimates
            .iter()
            .zip(&previous)
            .all(|(new, old)| {
                let (re, im) = new.inner(old);
                1.0 - re.hypot(im) <= cfg.settle_tolerance
            });
        if next != indices {
            indices = next;
            first_seen = sweep;
        } else if settled {
            return Ok(readout(
                &target,
                books,
                indices,
                DecodeMethod::Resonator,
                first_seen,
                sweep,
                true,
                per_sweep * sweep as u64,
            ));
        }
    }
    let sweeps = cfg.max_sweeps;
    Ok(readout(
        &target,
        books,
        indices,
        DecodeMethod::Resonator,
        first_seen,
        sweeps,
        false,
        per_sweep * sweeps as u64,
    ))
}

/// Number of combinations scored by [`brute_force_decode`].
pub fn search_space(books: &[Codebook]) -> u128 {
    books.iter().map(|b| b.len() as u128).product()
}

/// Rows of partial products scored per matrix multiplication.
const ROW_BLOCK: usize = 64;

/// Exhaustive decoding: score `x` against the binding of every combination of
/// entries and return the best, ties going to the lexicographically first
/// index tuple.
///
/// The last codebook is handled as one matrix product per block of prefix
/// combinations: `Re(w · conj(e)) = w.re·e.re + w.im·e.im`.
pub fn brute_force_decode(x: &UnitaryHypervector, books: &[Codebook], cap: u64) -> Result<DecodeResult> {
    check_books(x, books)?;
    let size = search_space(books);
    if size > cap as u128 {
        return Err(Error::SearchSpaceTooLarge { size, cap });
    }
    let dim = x.dim();
    let target = Phasors::from_phases(x.phases());
    let (last, prefix) = books.split_last().expect("checked non-empty");
    let n_last = last.len();

    // last codebook as an (n_last × 2d) row-major matrix
    let mut entries = Vec::with_capacity(n_last * 2 * dim);
    for e in &last.phasors {
        entries.extend_from_slice(&e.re);
        entries.extend_from_slice(&e.im);
    }

    let n_prefix: usize = prefix.iter().map(|b| b.len()).product();
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    let mut rows = vec![0.0; ROW_BLOCK * 2 * dim];
    let mut scores = vec![0.0; ROW_BLOCK * n_last];
    let mut counter = vec![0usize; prefix.len()];

    let mut start = 0;
    while start < n_prefix {
        let block = ROW_BLOCK.min(n_prefix - start);
        for r in 0..block {
            let mut w = target.clone();
            for (b, &i) in prefix.iter().zip(&counter) {
                w = w.mul_conj(&b.phasors[i]);
            }
            let row = &mut rows[r * 2 * dim..(r + 1) * 2 * dim];
            row[..dim].copy_from_slice(&w.re);
            row[dim..].copy_from_slice(&w.im);
            advance(&mut counter, prefix);
        }
        // scores (block × n_last) = rows (block × 2d) · entriesᵀ (2d × n_last)
        unsafe {
            matrixmultiply::dgemm(
                block,
                2 * dim,
                n_last,
                1.0,
                rows.as_ptr(),
                (2 * dim) as isize,
                1,
                entries.as_ptr(),
                1,
                (2 * dim) as isize,
                0.0,
                scores.as_mut_ptr(),
                n_last as isize,
                1,
            );
        }
        for r in 0..block {
            for c in 0..n_last {
                let s = scores[r * n_last + c];
                if s > best.0 {
                    best = (s, start + r, c);
                }
            }
        }
        start += block;
    }

    let mut indices = unrank(best.1, prefix);
    indices.push(best.2);
    Ok(readout(
        &target,
        books,
        indices,
        DecodeMethod::Bruteforce,
        0,
        0,
        true,
        size as u64,
    ))
}

/// Increment a mixed-radix counter, last digit fastest.
fn advance(counter: &mut [usize], books: &[Codebook]) {
    for (digit, book) in counter.iter_mut().zip(books).rev() {
        *digit += 1;
        if *digit < book.len() {
            return;
        }
        *digit = 0;
    }
}

fn unrank(mut rank: usize, books: &[Codebook]) -> Vec<usize> {
    let mut out = vec![0; books.len()];
    for (digit, book) in out.iter_mut().zip(books).rev() {
        *digit = rank % book.len();
        rank /= book.len();
    }
    out
}
