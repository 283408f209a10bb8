//! One CSV row per quench: evaluation and fixed-width formatting.

use std::io::Write;

use xyquench::limits::zero_t_breakdown;
use xyquench::{breakdown, QuadratureConfig, QuenchSpec};

pub const HEADER: [&str; 13] = [
    "g0",
    "gamma0",
    "g_tau",
    "gamma_tau",
    "beta",
    "C",
    "D",
    "S_irr",
    "ratio",
    "W",
    "dF",
    "lowT",
    "error",
];

/// Densities of one quench. At `beta = inf`, `population` and `lag` hold
/// `D / beta` and `S_irr / beta`, and the energies are absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Values {
    pub coherence: f64,
    pub population: f64,
    pub lag: f64,
    pub ratio: f64,
    pub work: Option<f64>,
    pub dfree: Option<f64>,
    pub low_t: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub g0: f64,
    pub gamma0: f64,
    pub g_tau: f64,
    pub gamma_tau: f64,
    pub beta: f64,
    pub outcome: Result<Values, String>,
}

pub fn evaluate(spec: &QuenchSpec, config: &QuadratureConfig) -> xyquench::Result<Values> {
    if spec.is_zero_temperature() {
        let z = zero_t_breakdown(&spec.pre, &spec.post, config)?;
        // C stays finite while S_irr grows like beta
        return Ok(Values {
            coherence: z.coherence,
            population: z.population_over_beta,
            lag: z.lag_over_beta,
            ratio: 0.0,
            work: None,
            dfree: None,
            low_t: true,
        });
    }
    let b = breakdown(spec, config)?;
    Ok(Values {
        coherence: b.coherence,
        population: b.population,
        lag: b.lag,
        ratio: b.coherence_fraction(),
        work: Some(b.work),
        dfree: Some(b.dfree),
        low_t: false,
    })
}

impl Row {
    pub fn new(g0: f64, gamma0: f64, g_tau: f64, gamma_tau: f64, beta: f64) -> Self {
        Self {
            g0,
            gamma0,
            g_tau,
            gamma_tau,
            beta,
            outcome: Err(String::new()),
        }
    }

    pub fn compute(mut self, config: &QuadratureConfig) -> Self {
        self.outcome = xyquench::model::ModelParams::new(self.g0, self.gamma0)
            .and_then(|pre| {
                let post = xyquench::model::ModelParams::new(self.g_tau, self.gamma_tau)?;
                QuenchSpec::new(pre, post, self.beta)
            })
            .and_then(|spec| evaluate(&spec, config))
            .map_err(|e| e.to_string());
        self
    }

    pub fn fields(&self) -> Vec<String> {
        let mut out: Vec<String> = [self.g0, self.gamma0, self.g_tau, self.gamma_tau, self.beta]
            .map(fmt_num)
            .into();
        match &self.outcome {
            Ok(v) => {
                out.extend([v.coherence, v.population, v.lag, v.ratio].map(fmt_num));
                out.push(v.work.map(fmt_num).unwrap_or_default());
                out.push(v.dfree.map(fmt_num).unwrap_or_default());
                out.push(if v.low_t { "1" } else { "0" }.into());
                out.push(String::new());
            }
            Err(e) => {
                out.extend(std::iter::repeat_n(String::new(), 6));
                out.push(if self.beta.is_infinite() { "1" } else { "0" }.into());
                out.push(e.clone());
            }
        }
        out
    }
}

/// Twelve significant digits in scientific notation; `inf` spelled out.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x == 0.0 {
        format!("{:.11e}", 0.0)
    } else {
        format!("{x:.11e}")
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<(), crate::CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.25), "2.50000000000e-1");
        assert_eq!(fmt_num(-1234.5), "-1.23450000000e3");
        assert_eq!(fmt_num(0.0), "0.00000000000e0");
        assert_eq!(fmt_num(-0.0), "0.00000000000e0");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn failed_rows_carry_the_message() {
        let r = Row::new(0.5, 1.2, 0.5, 1.2, 1.0).compute(&QuadratureConfig::default());
        let f = r.fields();
        assert_eq!(f.len(), HEADER.len());
        assert!(f[5..11].iter().all(String::is_empty));
        assert!(f[12].contains("anisotropy"), "{}", f[12]);
    }

    #[test]
    fn zero_temperature_rows() {
        let r = Row::new(0.5, 1.0, 0.51, 1.0, f64::INFINITY).compute(&QuadratureConfig::default());
        let f = r.fields();
        assert_eq!(f[4], "inf");
        assert!(f[9].is_empty() && f[10].is_empty());
        assert_eq!(f[11], "1");
        assert!(f[12].is_empty());
    }
}
