//! Parsing of the polynomial, frequency and group sources shared by the
//! subcommands.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use rand::Rng;
use riesz_core::{DirichletPolynomial, Frequency, GroupRealization, RealizationHint};

/// `naturals:N | lognat:N | pow2:N | file:<path>`.
pub fn parse_frequency(spec: &str) -> Result<Frequency> {
    let (kind, arg) = spec
        .split_once(':')
        .with_context(|| format!("frequency spec '{spec}' (expected kind:arg)"))?;
    Ok(match kind {
        "naturals" => Frequency::naturals(arg.parse()?)?,
        "lognat" => Frequency::log_naturals(arg.parse()?)?,
        "pow2" => Frequency::powers_of_two(arg.parse()?)?,
        "file" => {
            let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
            serde_json::from_str(&text).with_context(|| format!("parsing frequency from {arg}"))?
        }
        other => bail!("unknown frequency kind '{other}' (naturals|lognat|pow2|file)"),
    })
}

/// `ones | alternating | power:<exponent> | pm1 | unitdisc | delta:<n>`.
pub fn build_coefficients(rule: &str, n: usize, seed: u64) -> Result<Vec<Complex64>> {
    let coeffs = match rule.split_once(':') {
        Some(("power", e)) => {
            let exponent: f64 = e.parse()?;
            (1..=n)
                .map(|i| Complex64::new((i as f64).powf(exponent), 0.0))
                .collect()
        }
        Some(("delta", at)) => {
            let at: usize = at.parse()?;
            (1..=n)
                .map(|i| Complex64::new(if i == at { 1.0 } else { 0.0 }, 0.0))
                .collect()
        }
        None if rule == "ones" => vec![Complex64::new(1.0, 0.0); n],
        None if rule == "alternating" => (0..n)
            .map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect(),
        None if rule == "pm1" => {
            let mut rng = riesz_core::rng::labeled_rng(seed, "cli_coefficients", 0);
            (0..n)
                .map(|_| Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0))
                .collect()
        }
        None if rule == "unitdisc" => {
            let mut rng = riesz_core::rng::labeled_rng(seed, "cli_coefficients", 0);
            (0..n)
                .map(|_| loop {
                    let re = rng.random::<f64>() * 2.0 - 1.0;
                    let im = rng.random::<f64>() * 2.0 - 1.0;
                    if re * re + im * im <= 1.0 {
                        return Complex64::new(re, im);
                    }
                })
                .collect()
        }
        _ => bail!("unknown coefficient rule '{rule}'"),
    };
    Ok(coeffs)
}

/// Common options selecting the polynomial under study.
#[derive(clap::Args, Debug, Clone)]
pub struct PolySource {
    /// Polynomial JSON file ({"frequency": [...], "coefficients": [[re,im],...]}).
    #[arg(long)]
    pub poly: Option<String>,
    /// Frequency spec: naturals:N | lognat:N | pow2:N | file:<path>.
    #[arg(long)]
    pub frequency: Option<String>,
    /// Coefficient rule: ones | alternating | power:<e> | pm1 | unitdisc | delta:<n>.
    #[arg(long, default_value = "ones")]
    pub rule: String,
    /// Seed for random coefficient rules.
    #[arg(long, default_value_t = 0)]
    pub rule_seed: u64,
}

impl PolySource {
    pub fn build(&self) -> Result<DirichletPolynomial> {
        match (&self.poly, &self.frequency) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
                Ok(serde_json::from_str(&text)
                    .with_context(|| format!("parsing polynomial from {path}"))?)
            }
            (None, Some(freq_spec)) => {
                let freq = parse_frequency(freq_spec)?;
                let coeffs = build_coefficients(&self.rule, freq.len(), self.rule_seed)?;
                Ok(DirichletPolynomial::new(freq, coeffs)?)
            }
            (None, None) => bail!("supply --poly <file> or --frequency <spec>"),
        }
    }
}

/// `auto | naturals | primes | file:<path>`.
pub fn build_group(spec: &str, freq: &Frequency) -> Result<GroupRealization> {
    Ok(match spec {
        "auto" => GroupRealization::realize(freq, RealizationHint::Auto, None)?,
        "naturals" => GroupRealization::naturals(freq)?,
        "primes" => GroupRealization::prime_factorization(freq)?,
        other => match other.split_once(':') {
            Some(("file", path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
                let g: GroupRealization = serde_json::from_str(&text)
                    .with_context(|| format!("parsing group from {path}"))?;
                if g.frequency() != freq {
                    bail!("group file frequency does not match the polynomial frequency");
                }
                g
            }
            _ => bail!("unknown group spec '{other}' (auto|naturals|primes|file:<path>)"),
        },
    })
}

/// "re,im" -> complex.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let (re, im) = s
        .split_once(',')
        .with_context(|| format!("complex value '{s}' (expected re,im)"))?;
    Ok(Complex64::new(re.trim().parse()?, im.trim().parse()?))
}

/// Write CSV to `--out` or stdout; the summary JSON goes to stdout when the
/// CSV went to a file, to stderr otherwise.
pub fn emit(out: Option<&Path>, csv: &str, summary: Option<&serde_json::Value>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            if let Some(s) = summary {
                println!("{}", serde_json::to_string_pretty(s)?);
            }
        }
        None => {
            print!("{csv}");
            if let Some(s) = summary {
                eprintln!("{}", serde_json::to_string_pretty(s)?);
            }
        }
    }
    Ok(())
}
