//! Deterministic GHZ circuit and random T/C3 circuit ensembles.

pub mod analysis;
mod ghz;
mod random;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

pub use analysis::{
    estimate_saturation_time, fit_growth_rate, page_value, page_value_exact, plateau,
    DEFAULT_SATURATION_THRESHOLD,
};
pub use ghz::{build_ghz_program, ghz_blocks};
pub use random::{random_step, realization_rng};

use crate::error::{Error, Result};
use crate::oracle::{OperatorWavefunction, Stabilization, MAX_ORACLE_QUBITS};
use crate::region::Region;
use crate::tableau::SuperStabilizerTableau;

/// Agreement required between tableau and oracle entropies.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    pub time_steps: u64,
    pub realizations: usize,
    pub rng_seed: u64,
    pub cut: Region,
    pub sample_every: u64,
    pub output: Option<PathBuf>,
    /// Co-evolve the dense oracle and compare entropies and stabilizers at
    /// every sample. Only for `n_qubits <= 16`.
    pub oracle_check: bool,
    /// Run the full commutation/independence check at every sample.
    pub check_invariants: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// Half-chain cut, sample every step, invariant checks on.
    pub fn new(n_qubits: usize, time_steps: u64, realizations: usize, rng_seed: u64) -> Self {
        Self {
            n_qubits,
            time_steps,
            realizations,
            rng_seed,
            cut: Region::half_chain(n_qubits),
            sample_every: 1,
            output: None,
            oracle_check: false,
            check_invariants: true,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 3 {
            return Err(Error::TooFewQubits {
                min: 3,
                got: self.n_qubits,
            });
        }
        if self.realizations == 0 {
            return Err(Error::InvalidConfig("need at least one realization".into()));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidConfig("sample_every must be positive".into()));
        }
        if self.cut.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: self.cut.n_qubits(),
            });
        }
        if self.oracle_check && self.n_qubits > MAX_ORACLE_QUBITS {
            return Err(Error::OracleSize {
                max: MAX_ORACLE_QUBITS,
                got: self.n_qubits,
            });
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("thread count must be positive".into()));
        }
        Ok(())
    }

    pub fn sampled_steps(&self) -> impl Iterator<Item = u64> + '_ {
        (0..=self.time_steps).step_by(self.sample_every as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub step: u64,
    /// Integer entropies, one per realization, in realization order.
    pub values: Vec<u32>,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropySeries {
    n_qubits: usize,
    cut_size: usize,
    realizations: usize,
    points: Vec<SeriesPoint>,
}

impl EntropySeries {
    /// Aggregates per-realization curves (all sampled at the same steps).
    pub fn from_realizations(
        n_qubits: usize,
        cut_size: usize,
        steps: &[u64],
        curves: &[Vec<u32>],
    ) -> Self {
        let r = curves.len();
        let points = steps
            .iter()
            .enumerate()
            .map(|(k, &step)| {
                let values: Vec<u32> = curves.iter().map(|c| c[k]).collect();
                let mean = values.iter().map(|&v| v as f64).sum::<f64>() / r as f64;
                let stderr = if r > 1 {
                    let var = values
                        .iter()
                        .map(|&v| (v as f64 - mean).powi(2))
                        .sum::<f64>()
                        / (r - 1) as f64;
                    (var / r as f64).sqrt()
                } else {
                    0.0
                };
                SeriesPoint {
                    step,
                    values,
                    mean,
                    stderr,
                }
            })
            .collect();
        Self {
            n_qubits,
            cut_size,
            realizations: r,
            points,
        }
    }

    /// A series carrying only a mean curve, for analysing external data.
    pub fn from_mean_curve(n_qubits: usize, cut_size: usize, curve: Vec<(u64, f64)>) -> Self {
        Self {
            n_qubits,
            cut_size,
            realizations: 0,
            points: curve
                .into_iter()
                .map(|(step, mean)| SeriesPoint {
                    step,
                    values: Vec::new(),
                    mean,
                    stderr: 0.0,
                })
                .collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn cut_size(&self) -> usize {
        self.cut_size
    }

    pub fn realizations(&self) -> usize {
        self.realizations
    }

    pub fn points(&self) -> &[SeriesPoint] {
        &self.points
    }

    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }

    /// `step,mean_entropy,stderr,realizations`, 9 significant digits, LF.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,mean_entropy,stderr,realizations\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                p.step,
                format_sig(p.mean, 9),
                format_sig(p.stderr, 9),
                self.realizations
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Fixed-point rendering with `digits` significant digits.
pub fn format_sig(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value.is_finite() {
            format!("{:.*}", digits - 1, 0.0)
        } else {
            value.to_string()
        };
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{value:.decimals$}");
    // Rounding can carry into a new leading digit (9.9999999996 -> 10.00000000).
    let rounded: f64 = s.parse().unwrap_or(value);
    let new_mag = rounded.abs().log10().floor() as i64;
    if new_mag > magnitude && decimals > 0 {
        format!("{value:.*}", decimals - 1)
    } else {
        s
    }
}

fn run_realization(config: &ExperimentConfig, index: usize) -> Result<Vec<u32>> {
    let n = config.n_qubits;
    let mut rng = realization_rng(config.rng_seed, index as u64);
    let mut tableau = SuperStabilizerTableau::new_all_x(n)?;
    let mut oracle = if config.oracle_check {
        Some(OperatorWavefunction::new_all_x(n)?)
    } else {
        None
    };
    let mut curve = Vec::with_capacity((config.time_steps / config.sample_every) as usize + 1);
    for step in 0..=config.time_steps {
        if step > 0 {
            for gate in random_step(&mut rng, n)? {
                tableau.apply_gate(gate)?;
                if let Some(psi) = oracle.as_mut() {
                    psi.apply_gate(gate)?;
                }
            }
        }
        if step % config.sample_every != 0 {
            continue;
        }
        if config.check_invariants {
            tableau.check_invariants().map_err(|e| {
                Error::Verification(format!("realization {index}, step {step}: {e}"))
            })?;
        }
        let s = tableau.entropy(&config.cut)?;
        if let Some(psi) = oracle.as_ref() {
            compare_with_oracle(&tableau, psi, &config.cut)
                .map_err(|e| Error::Verification(format!("realization {index}, step {step}: {e}")))?;
        }
        curve.push(s as u32);
    }
    Ok(curve)
}

/// Checks entropy agreement on `cut` and on every prefix, and that each
/// tableau stabilizer stabilizes the oracle state up to sign.
pub fn compare_with_oracle(
    tableau: &SuperStabilizerTableau,
    psi: &OperatorWavefunction,
    cut: &Region,
) -> std::result::Result<(), String> {
    let n = tableau.n_qubits();
    let mut regions: Vec<Region> = (1..n)
        .map(|p| Region::prefix(n, p).expect("prefix in range"))
        .collect();
    if !cut.is_empty() && cut.len() < n {
        regions.push(cut.clone());
    }
    for region in &regions {
        let t = tableau.entropy(region).map_err(|e| e.to_string())? as f64;
        let o = psi.entropy(region).map_err(|e| e.to_string())?;
        if (t - o).abs() > ORACLE_TOLERANCE {
            return Err(format!("entropy mismatch on {{{region}}}: tableau {t}, oracle {o}"));
        }
    }
    for (alpha, s) in tableau.stabilizers().iter().enumerate() {
        if psi.check_stabilized(s).map_err(|e| e.to_string())? == Stabilization::NotStabilized {
            return Err(format!("stabilizer {} ({s}) does not stabilize the oracle state", alpha + 1));
        }
    }
    Ok(())
}

/// Runs every realization (in parallel) and aggregates in realization
/// order, so the result does not depend on scheduling. Writes the CSV when
/// `config.output` is set.
pub fn run_random_ensemble(config: &ExperimentConfig) -> Result<EntropySeries> {
    config.validate()?;
    let run_all = || -> Result<Vec<Vec<u32>>> {
        (0..config.realizations)
            .into_par_iter()
            .map(|r| run_realization(config, r))
            .collect()
    };
    let curves = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(run_all)?,
        None => run_all()?,
    };
    let steps: Vec<u64> = config.sampled_steps().collect();
    let series = EntropySeries::from_realizations(config.n_qubits, config.cut.len(), &steps, &curves);
    if let Some(path) = &config.output {
        series.write_csv(path)?;
    }
    Ok(series)
}

/// Derived quantities written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummary {
    pub n_qubits: usize,
    pub time_steps: u64,
    pub realizations: usize,
    pub rng_seed: u64,
    pub cut: String,
    pub sample_every: u64,
    pub plateau: Option<f64>,
    pub growth_rate: Option<f64>,
    pub saturation_step: Option<u64>,
    pub page_value: Option<f64>,
    pub notes: Vec<String>,
}

impl EnsembleSummary {
    pub fn compute(config: &ExperimentConfig, series: &EntropySeries) -> Self {
        let mut notes = Vec::new();
        let mut keep = |what: &str, r: Result<f64>| match r {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(format!("{what}: {e}"));
                None
            }
        };
        let plateau = keep("plateau", plateau(series));
        let growth_rate = keep("growth_rate", fit_growth_rate(series));
        let cut = config.cut.len().min(config.n_qubits - config.cut.len());
        let page = keep("page_value", page_value(config.n_qubits, cut));
        let saturation_step = match estimate_saturation_time(series, DEFAULT_SATURATION_THRESHOLD) {
            Ok(s) => Some(s),
            Err(e) => {
                notes.push(format!("saturation_step: {e}"));
                None
            }
        };
        Self {
            n_qubits: config.n_qubits,
            time_steps: config.time_steps,
            realizations: config.realizations,
            rng_seed: config.rng_seed,
            cut: config.cut.to_string(),
            sample_every: config.sample_every,
            plateau,
            growth_rate,
            saturation_step,
            page_value: page,
            notes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digits() {
        assert_eq!(format_sig(0.0, 9), "0.00000000");
        assert_eq!(format_sig(59.2786525, 9), "59.2786525");
        assert_eq!(format_sig(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_sig(0.00123456789123, 9), "0.00123456789");
        assert_eq!(format_sig(9.9999999996, 9), "10.0000000");
        assert_eq!(format_sig(123456789012.0, 9), "123456789012");
        assert_eq!(format_sig(-2.5, 9), "-2.50000000");
    }

    #[test]
    fn aggregation_mean_and_stderr() {
        let s = EntropySeries::from_realizations(6, 3, &[0, 5], &[vec![0, 1], vec![0, 3]]);
        assert_eq!(s.points()[0].mean, 0.0);
        assert_eq!(s.points()[1].mean, 2.0);
        // sample sd = sqrt(2), stderr = sqrt(2)/sqrt(2) = 1
        assert!((s.points()[1].stderr - 1.0).abs() < 1e-12);
        assert_eq!(
            s.to_csv(),
            "step,mean_entropy,stderr,realizations\n0,0.00000000,0.00000000,2\n5,2.00000000,1.00000000,2\n"
        );
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::new(6, 10, 2, 1);
        c.validate().unwrap();
        c.sample_every = 0;
        assert!(c.validate().is_err());
        let c = ExperimentConfig::new(2, 10, 2, 1);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(20, 10, 2, 1);
        c.oracle_check = true;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(6, 10, 0, 1);
        assert!(c.validate().is_err());
        c.realizations = 1;
        c.cut = Region::prefix(7, 3).unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn small_ensemble_starts_at_zero_and_respects_bounds() {
        let mut c = ExperimentConfig::new(9, 300, 4, 42);
        c.sample_every = 7;
        let s = run_random_ensemble(&c).unwrap();
        assert_eq!(s.points()[0].step, 0);
        assert_eq!(s.points()[0].mean, 0.0);
        assert_eq!(s.points().len(), 300 / 7 + 1);
        for p in s.points() {
            assert!(p.values.iter().all(|&v| v as usize <= c.cut.max_entropy()));
        }
        assert!(s.points().last().unwrap().mean > 0.0);
    }

    #[test]
    fn oracle_co_run_agrees() {
        let mut c = ExperimentConfig::new(6, 60, 3, 5);
        c.cut = Region::prefix(6, 3).unwrap();
        c.oracle_check = true;
        run_random_ensemble(&c).unwrap();
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let mut c = ExperimentConfig::new(12, 200, 6, 77);
        c.sample_every = 10;
        c.threads = Some(1);
        let one = run_random_ensemble(&c).unwrap();
        c.threads = Some(4);
        let four = run_random_ensemble(&c).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.to_csv(), four.to_csv());
    }
}
