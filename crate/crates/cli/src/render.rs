use std::fmt::Write;

use serde::Serialize;

use hyperspace::analogy::AnalogyAnswer;
use hyperspace::store::ConceptSource;
use hyperspace::{ConceptRecord, DecodeResult, DomainConfig, Store};

use crate::bench::BenchReport;
use crate::Output;

/// Up to four decimals, trailing zeros dropped but at least one kept.
fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0');
    let s = if s.ends_with('.') { format!("{s}0") } else { s.to_string() };
    if s == "-0.0" {
        "0.0".into()
    } else {
        s
    }
}

fn nums(vs: &[f64]) -> String {
    vs.iter().map(|&v| num(v)).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct StoreSummary<'a> {
    dim: usize,
    seed: u64,
    domains: Vec<&'a DomainConfig>,
    concepts: &'a [ConceptRecord],
}

fn domain_line(out: &mut String, c: &DomainConfig) {
    let _ = write!(out, "domain {} [{}]", c.name, c.dim_names.join(", "));
    if let Some(beta) = c.beta {
        let _ = write!(out, " hsb beta={}", num(beta));
    }
    let _ = writeln!(out, " kernel_sigma={}", nums(&c.kernel_sigma));
}

fn concept_line(out: &mut String, r: &ConceptRecord) {
    let _ = write!(out, "{:<10} {:<8} {}", r.label, r.domain, nums(&r.coords));
    if let ConceptSource::Hsb { hue, saturation, brightness } = r.source {
        let _ = write!(out, "  (hsb {}, {}, {})", num(hue), num(saturation), num(brightness));
    }
    out.push('\n');
}

pub fn store_summary(store: &Store) -> Output {
    let value = StoreSummary {
        dim: store.dim(),
        seed: store.seed().0,
        domains: store.domains().map(|d| d.config()).collect(),
        concepts: store.concepts(),
    };
    let mut text = format!("store d={} seed={}\n", value.dim, value.seed);
    for c in &value.domains {
        domain_line(&mut text, c);
    }
    for r in value.concepts {
        concept_line(&mut text, r);
    }
    Output::new(&value, text)
}

pub fn domain(c: &DomainConfig) -> Output {
    let mut text = String::new();
    domain_line(&mut text, c);
    Output::new(c, text)
}

pub fn concept(r: &ConceptRecord) -> Output {
    let mut text = String::from("added ");
    concept_line(&mut text, r);
    Output::new(r, text)
}

#[derive(Serialize)]
struct AnalogyOutput<'a> {
    query: [&'a str; 3],
    answer: &'a AnalogyAnswer,
}

pub fn analogy(query: [&String; 3], answer: &AnalogyAnswer) -> Output {
    let mut text = String::new();
    let label = answer.nearest_label.as_deref().unwrap_or("?");
    let _ = writeln!(text, "{} : {} :: {} : {}", query[0], query[1], query[2], label);
    if let Some(s) = &answer.salient_domain {
        let _ = writeln!(text, "salient domain  {s}");
    }
    let _ = writeln!(text, "domain          {}", answer.domain);
    let _ = writeln!(text, "point           {}", nums(&answer.point));
    if let Some(h) = answer.hsb {
        let _ = writeln!(
            text,
            "hsb             {} {} {}",
            num(h.hue),
            num(h.saturation),
            num(h.brightness)
        );
    }
    if let Some(sim) = answer.nearest_similarity {
        let _ = writeln!(text, "similarity      {}", num(sim));
    }
    if let Some(d) = &answer.decode {
        let _ = writeln!(
            text,
            "decode          {:?}, {} sweeps, {}",
            d.method,
            d.sweeps_used,
            if d.converged { "converged" } else { "not converged" }
        );
    }
    let value = AnalogyOutput {
        query: [query[0].as_str(), query[1].as_str(), query[2].as_str()],
        answer,
    };
    Output::new(&value, text)
}

#[derive(Serialize)]
struct DecodeOutput<'a> {
    domain: &'a str,
    input: &'a [f64],
    result: &'a DecodeResult,
}

pub fn decode(domain: &str, input: &[f64], result: &DecodeResult) -> Output {
    let text = format!(
        "{} -> {}  ({:?}, {} sweeps, similarity {}{})\n",
        nums(input),
        nums(&result.coords),
        result.method,
        result.sweeps_used,
        num(result.similarity),
        if result.converged { "" } else { ", not converged" }
    );
    Output::new(&DecodeOutput { domain, input, result }, text)
}

pub fn bench(r: &BenchReport) -> Output {
    let mut text = format!(
        "{} trials, d={}, seed={}, grid [{}, {}] step {}, {} combinations\n",
        r.trials,
        r.dim,
        r.seed,
        num(r.grid.lo),
        num(r.grid.hi),
        num(r.grid.step),
        r.search_space
    );
    if let Some(res) = &r.resonator {
        let _ = write!(
            text,
            "resonator   {}/{} correct, {} converged, mean sweeps {}, max {}",
            res.successes,
            r.trials,
            res.converged,
            num(res.mean_sweeps),
            res.max_sweeps
        );
        if let Some(a) = res.agreement {
            let _ = write!(text, ", agrees with brute force {a}/{}", r.trials);
        }
        text.push('\n');
    }
    if let Some(bf) = &r.bruteforce {
        let _ = writeln!(
            text,
            "bruteforce  {}/{} correct, {} comparisons per decode",
            bf.successes, r.trials, bf.comparisons_per_decode
        );
    }
    if let Some(t) = &r.timings {
        if let Some(ms) = t.resonator_ms_mean {
            let _ = writeln!(text, "resonator   {ms:.3} ms per decode");
        }
        if let Some(ms) = t.bruteforce_ms_mean {
            let _ = writeln!(text, "bruteforce  {ms:.3} ms per decode");
        }
    }
    Output::new(r, text)
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn number_format() {
        assert_eq!(num(6.151828), "6.1518");
        assert_eq!(num(-4.0), "-4.0");
        assert_eq!(num(-0.00001), "0.0");
        assert_eq!(num(9.5), "9.5");
    }
}
