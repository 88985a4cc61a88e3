use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use hyperspace::analogy::parallelogram_find;
use hyperspace::resonator::{brute_force_decode, make_codebook, resonator_decode, search_space};
use hyperspace::{DomainConfig, DomainSpec, GridSpec, ResonatorConfig, Result, RngSeed};

/// Sub-stream for trial sampling, far away from basis streams.
const TRIAL_STREAM: u64 = 1 << 40;

/// Operands are drawn from this box so the answer can land anywhere in range.
const OPERAND_SPAN: f64 = 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMethod {
    Both,
    Resonator,
    Bruteforce,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub trials: usize,
    pub dim: usize,
    pub seed: RngSeed,
    pub grid: GridSpec,
    pub method: BenchMethod,
    pub resonator: ResonatorConfig,
    pub brute_force_cap: u64,
    pub timings: bool,
}

#[derive(Debug, Serialize)]
pub struct ResonatorStats {
    /// Decodes equal to the grid-snapped arithmetic answer.
    pub successes: usize,
    /// Decodes equal to the brute-force answer, when both methods ran.
    pub agreement: Option<usize>,
    pub converged: usize,
    pub mean_sweeps: f64,
    pub max_sweeps: usize,
}

#[derive(Debug, Serialize)]
pub struct BruteForceStats {
    pub successes: usize,
    pub comparisons_per_decode: u64,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub resonator_ms_mean: Option<f64>,
    pub bruteforce_ms_mean: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub trials: usize,
    pub dim: usize,
    pub seed: u64,
    pub grid: GridSpec,
    pub search_space: u64,
    pub resonator: Option<ResonatorStats>,
    pub bruteforce: Option<BruteForceStats>,
    pub timings: Option<Timings>,
}

/// One parallelogram trial: operands and the snapped arithmetic answer.
#[derive(Debug, Clone)]
pub struct Trial {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub expected: Vec<f64>,
}

pub fn sample_trials(grid: &GridSpec, k: usize, n: usize, seed: RngSeed) -> Result<Vec<Trial>> {
    let lo = grid.snap(-OPERAND_SPAN)?;
    let hi = grid.snap(OPERAND_SPAN)?;
    let (lo_i, hi_i) = (grid.snap_index(lo)?, grid.snap_index(hi)?);
    let mut rng = seed.stream(TRIAL_STREAM);
    let draw = |rng: &mut rand_chacha::ChaCha20Rng| -> Vec<f64> {
        (0..k).map(|_| grid.value(rng.random_range(lo_i..=hi_i))).collect()
    };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let x: Vec<f64> = (0..k).map(|i| c[i] - a[i] + b[i]).collect();
        if x.iter().all(|v| (grid.lo..=grid.hi).contains(v)) {
            let expected = x.iter().map(|&v| grid.snap(v)).collect::<Result<_>>()?;
            out.push(Trial { a, b, c, expected });
        }
    }
    Ok(out)
}

pub fn run(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.trials == 0 {
        return Err(hyperspace::Error::InvalidParameter("trials must be at least 1".into()));
    }
    cfg.resonator.validate()?;
    let domain = DomainSpec::generate(DomainConfig::new("bench", vec!["x", "y", "z"]), cfg.dim, cfg.seed)?;
    let books = make_codebook(&domain, cfg.grid)?;
    let size = search_space(&books);
    let trials = sample_trials(&cfg.grid, domain.k(), cfg.trials, cfg.seed)?;

    let run_res = cfg.method != BenchMethod::Bruteforce;
    let run_bf = cfg.method != BenchMethod::Resonator;
    let (mut res_ok, mut agree, mut conv, mut sweeps, mut max_sweeps, mut bf_ok) = (0, 0, 0, 0, 0, 0);
    let (mut res_time, mut bf_time) = (0.0, 0.0);
    let mut comparisons = 0;
    for t in &trials {
        let enc = |p: &[f64]| domain.encode_coords(p);
        let x = parallelogram_find(&enc(&t.a)?, &enc(&t.b)?, &enc(&t.c)?)?;
        let bf = if run_bf {
            let start = Instant::now();
            let r = brute_force_decode(&x, &books, cfg.brute_force_cap)?;
            bf_time += start.elapsed().as_secs_f64();
            bf_ok += usize::from(r.coords == t.expected);
            comparisons = r.comparisons;
            Some(r)
        } else {
            None
        };
        if run_res {
            let start = Instant::now();
            let r = resonator_decode(&x, &books, &cfg.resonator)?;
            res_time += start.elapsed().as_secs_f64();
            res_ok += usize::from(r.coords == t.expected);
            agree += usize::from(bf.as_ref().is_some_and(|b| b.indices == r.indices));
            conv += usize::from(r.converged);
            sweeps += r.sweeps_used;
            max_sweeps = max_sweeps.max(r.sweeps_used);
        }
    }
    let n = cfg.trials as f64;
    let ms = |secs: f64| (secs * 1e3 / n * 1e3).round() / 1e3;
    Ok(BenchReport {
        trials: cfg.trials,
        dim: cfg.dim,
        seed: cfg.seed.0,
        grid: cfg.grid,
        search_space: u64::try_from(size).unwrap_or(u64::MAX),
        resonator: run_res.then(|| ResonatorStats {
            successes: res_ok,
            agreement: run_bf.then_some(agree),
            converged: conv,
            mean_sweeps: sweeps as f64 / n,
            max_sweeps,
        }),
        bruteforce: run_bf.then_some(BruteForceStats {
            successes: bf_ok,
            comparisons_per_decode: comparisons,
        }),
        timings: cfg.timings.then(|| Timings {
            resonator_ms_mean: run_res.then(|| ms(res_time)),
            bruteforce_ms_mean: run_bf.then(|| ms(bf_time)),
        }),
    })
}
