use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use superball::geometry::{circle_chain, greedy_code, CodeWitness, GreedyParams};
use superball::{ExponentBound, Method, PNorm};

use crate::curve::BoundCurve;
use crate::figure;
use crate::format::{fmt_num, round_sig};
use crate::verify::{self, VerificationReport, VerifyOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] superball::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    /// Every error here is a usage or I/O problem. Verification failures
    /// are reported through [`VerificationReport`] instead.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, contents).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn pnorm(p: f64) -> Result<PNorm, CliError> {
    PNorm::new(p).map_err(|e| CliError::Usage(format!("--p: {e}")))
}

/// A single bound as printed by `bound`, rounded to the emitted precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub p: f64,
    pub method: Method,
    pub value: f64,
    /// `θ*` when the method optimizes over θ.
    pub theta: Option<f64>,
    /// `q*` when the method optimizes over q.
    pub q: Option<f64>,
    /// The winning method for `composite`.
    pub source: Option<Method>,
}

impl BoundReport {
    fn from_bound(b: &ExponentBound) -> BoundReport {
        let origin = b.source.unwrap_or(b.method);
        let theta = b.argmin.filter(|_| origin == Method::New);
        let q = b.argmin.filter(|_| origin == Method::Rankin).map(|x| 1.0 / x);
        BoundReport {
            p: b.p.get(),
            method: b.method,
            value: round_sig(b.value),
            theta: theta.map(round_sig),
            q: q.map(round_sig),
            source: b.source,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p      {}\nmethod {}\nvalue  {}\n", fmt_num(self.p), self.method, fmt_num(self.value));
        if let Some(s) = self.source {
            out.push_str(&format!("source {s}\n"));
        }
        if let Some(t) = self.theta {
            out.push_str(&format!("theta  {}\n", fmt_num(t)));
        }
        if let Some(q) = self.q {
            out.push_str(&format!("q      {}\n", fmt_num(q)));
        }
        out
    }
}

pub fn bound(p: f64, method: Method) -> Result<BoundReport, CliError> {
    let p = pnorm(p)?;
    if !method.applies_to(p) {
        return Err(CliError::Usage(format!(
            "method {method} does not apply at p = {p}; it needs {}",
            method.regime()
        )));
    }
    Ok(BoundReport::from_bound(&method.evaluate(p)?))
}

pub fn render_bound(report: &BoundReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_line(report),
        OutputFormat::Text => report.to_text(),
    }
}

pub fn curve(p_min: f64, p_max: f64, samples: usize) -> Result<String, CliError> {
    Ok(BoundCurve::sample(p_min, p_max, samples)?.to_csv())
}

pub fn figure(p_min: f64, p_max: f64, samples: usize) -> Result<String, CliError> {
    Ok(figure::render(&BoundCurve::sample(p_min, p_max, samples)?))
}

pub const MIN_CODE_DIMENSION: usize = 2;
pub const MAX_CODE_DIMENSION: usize = 16;

pub fn codes(n: usize, p: f64, d: f64, trials: u64, seed: u64) -> Result<CodeWitness, CliError> {
    if !(MIN_CODE_DIMENSION..=MAX_CODE_DIMENSION).contains(&n) {
        return Err(CliError::Usage(format!(
            "--n must be in [{MIN_CODE_DIMENSION}, {MAX_CODE_DIMENSION}], got {n}"
        )));
    }
    if !(d > 0.0 && d <= 1.0) {
        return Err(CliError::Usage(format!("--d must be in (0, 1], got {d}")));
    }
    if trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let params = GreedyParams {
        n,
        p: pnorm(p)?,
        d,
        trials,
        seed,
    };
    let code = greedy_code(&params)?;
    let chain = if n == 2 && p >= 2.0 {
        Some(circle_chain(&code, d)?)
    } else {
        None
    };
    Ok(CodeWitness::new(&params, &code, chain))
}

pub fn run_verify(options: VerifyOptions) -> VerificationReport {
    verify::run(options)
}

pub fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_reports() {
        let b = bound(2.0, Method::New).unwrap();
        assert!((b.value + 0.5990).abs() < 5e-4);
        assert!((b.theta.unwrap() - 1.0995).abs() < 1e-3);
        assert_eq!(b.q, None);

        let b = bound(4.0, Method::Vdcs).unwrap();
        assert_eq!(b.value, -0.25);
        assert_eq!(b.theta, None);

        let r = bound(1.0, Method::Rankin).unwrap();
        assert!(r.q.unwrap() > 1.0 && r.q.unwrap() < 2.0);

        let c = bound(1.0, Method::Composite).unwrap();
        assert_eq!(c.source, Some(Method::Rankin));
        assert_eq!(c.q, r.q);
    }

    #[test]
    fn regime_errors_name_the_regime() {
        let e = bound(1.0, Method::New).unwrap_err();
        assert!(matches!(e, CliError::Usage(_)));
        assert!(e.to_string().contains("p in [2, 1e6]"), "{e}");
        assert!(bound(3.0, Method::KlTransfer).is_err());
        assert!(bound(0.5, Method::Composite).is_err());
        assert!(bound(f64::NAN, Method::Composite).is_err());
    }

    #[test]
    fn bound_formats() {
        let b = bound(2.0, Method::New).unwrap();
        let json: serde_json::Value = serde_json::from_str(&render_bound(&b, OutputFormat::Json)).unwrap();
        assert_eq!(json["method"], "new");
        assert_eq!(json["value"].as_f64(), Some(b.value));
        let text = render_bound(&b, OutputFormat::Text);
        assert!(text.contains("value  -0.59905576686"), "{text}");
    }

    #[test]
    fn code_witnesses() {
        let w = codes(2, 2.0, 0.5, GreedyParams::DEFAULT_TRIALS, 1).unwrap();
        assert_eq!((w.count, w.oracle, w.chain_pass), (6, Some(6), Some(true)));
        let w = codes(3, 2.0, 1.0, 1000, 1).unwrap();
        assert_eq!(w.count, 2);
        assert_eq!((w.oracle, w.chain_pass), (None, None));
        let w = codes(2, 1.5, 0.5, 1000, 1).unwrap();
        assert_eq!(w.oracle, None);
        assert!(codes(1, 2.0, 0.5, 10, 1).is_err());
        assert!(codes(17, 2.0, 0.5, 10, 1).is_err());
        assert!(codes(2, 2.0, 0.0, 10, 1).is_err());
        assert!(codes(2, 2.0, 1.5, 10, 1).is_err());
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let e = emit(Some(Path::new("/nonexistent-dir/x.csv")), "x").unwrap_err();
        assert!(matches!(e, CliError::Io { .. }));
        assert_eq!(e.exit_code(), 2);
    }
}
