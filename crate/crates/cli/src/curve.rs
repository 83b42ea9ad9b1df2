//! Sampled bound curves and their CSV form.

use rayon::prelude::*;
use serde::Serialize;
use superball::bounds::{
    best_upper_bound, kl_transfer_bound, minimize_superball, rankin_bound, vdcs_bound,
};
use superball::{Method, PNorm};

use crate::commands::CliError;
use crate::format::{fmt_num, fmt_opt};

pub const CSV_HEADER: &str = "p,vdcs,new_bound,theta_star,rankin,q_star,kl_transfer,best,best_method";

pub const DEFAULT_P_MIN: f64 = 1.0;
pub const DEFAULT_P_MAX: f64 = 8.0;
pub const DEFAULT_SAMPLES: usize = 701;

/// Every bound at one `p`. Columns that do not apply at `p` are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub p: f64,
    pub vdcs: Option<f64>,
    pub new_bound: Option<f64>,
    pub theta_star: Option<f64>,
    pub rankin: Option<f64>,
    /// `q*` itself (the Rankin bound records `1/q*` as its argmin).
    pub q_star: Option<f64>,
    pub kl_transfer: Option<f64>,
    pub best: f64,
    pub best_method: Method,
}

impl CurveRow {
    pub fn at(p: PNorm) -> CurveRow {
        let new = minimize_superball(p).ok();
        let rankin = rankin_bound(p).ok();
        let best = best_upper_bound(p);
        CurveRow {
            p: p.get(),
            vdcs: vdcs_bound(p).ok().map(|b| b.value),
            new_bound: new.map(|b| b.value),
            theta_star: new.and_then(|b| b.argmin),
            rankin: rankin.map(|b| b.value),
            q_star: rankin.and_then(|b| b.argmin).map(|x| 1.0 / x),
            kl_transfer: kl_transfer_bound(p).ok().map(|b| b.value),
            best: best.value,
            best_method: best.source.expect("composite bounds record their source"),
        }
    }

    fn csv_line(&self) -> String {
        [
            fmt_num(self.p),
            fmt_opt(self.vdcs),
            fmt_opt(self.new_bound),
            fmt_opt(self.theta_star),
            fmt_opt(self.rankin),
            fmt_opt(self.q_star),
            fmt_opt(self.kl_transfer),
            fmt_num(self.best),
            self.best_method.to_string(),
        ]
        .join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurve {
    pub samples: Vec<CurveRow>,
    pub p_range: [f64; 2],
    pub count: usize,
}

impl BoundCurve {
    /// `samples` evenly spaced values of `p` from `p_min` to `p_max`
    /// inclusive. Rows are computed in parallel and kept in order.
    pub fn sample(p_min: f64, p_max: f64, samples: usize) -> Result<BoundCurve, CliError> {
        check_range(p_min, p_max)?;
        if samples < 2 {
            return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
        }
        let last = samples - 1;
        let ps: Vec<f64> = (0..samples)
            .map(|i| {
                if i == last {
                    p_max
                } else {
                    p_min + (p_max - p_min) * i as f64 / last as f64
                }
            })
            .collect();
        if ps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Usage(format!(
                "{samples} samples over [{p_min}, {p_max}] do not give strictly increasing p"
            )));
        }
        let rows = ps
            .par_iter()
            .map(|&p| CurveRow::at(PNorm::new(p).expect("range checked")))
            .collect();
        Ok(BoundCurve {
            samples: rows,
            p_range: [p_min, p_max],
            count: samples,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.samples.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.samples {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }
}

pub fn check_range(p_min: f64, p_max: f64) -> Result<(), CliError> {
    let ok = p_min.is_finite()
        && p_max.is_finite()
        && PNorm::MIN <= p_min
        && p_min < p_max
        && p_max <= PNorm::MAX;
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "need 1 <= p-min < p-max <= 1e6, got [{p_min}, {p_max}]"
        )))
    }
}
