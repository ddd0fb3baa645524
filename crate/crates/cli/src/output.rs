//! Serializable command results and their json / tsv renderings.

use std::fmt::Write as _;

use logitkit::{CvReport64, FitResult64, NestedTestResult64, PowerCurve64, PressQResult64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

/// A fit together with the column names needed to apply it to new data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub label_column: String,
    pub feature_names: Vec<String>,
    pub fit: FitResult64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedTest {
    pub full_columns: Vec<String>,
    pub reduced_columns: Vec<String>,
    pub result: NestedTestResult64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub threshold: f64,
    pub report: CvReport64,
    pub press_q: PressQResult64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub probability: f64,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    pub threshold: f64,
    pub rows: Vec<Prediction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Fit(FittedModel),
    Predict(Predictions),
    Test(NestedTest),
    Cv(CrossValidation),
    #[serde(rename = "pressq")]
    PressQ(PressQResult64),
    Curve(PowerCurve64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub format: Format,
    pub payload: Payload,
}

impl RunOutput {
    pub fn render(&self) -> String {
        match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.payload).expect("payload serializes");
                s.push('\n');
                s
            }
            Format::Tsv => render_tsv(&self.payload),
        }
    }
}

/// 17 significant digits, scientific notation.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Shortest round-trip decimal, exponent form for very large or small magnitudes.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    writeln!(out, "{key}\t{value}").unwrap();
}

fn render_tsv(payload: &Payload) -> String {
    let mut out = String::new();
    match payload {
        Payload::Fit(m) => {
            let f = &m.fit;
            kv(&mut out, "status", f.status);
            kv(&mut out, "iterations", f.iterations);
            kv(&mut out, "log_lik", num(f.log_lik));
            kv(&mut out, "deviance", num(f.deviance));
            kv(&mut out, "grad_norm", num(f.grad_norm));
            kv(&mut out, "residual_df", f.residual_df);
            kv(&mut out, "degenerate", f.degenerate);
            out.push_str("term\testimate\tstd_error\n");
            for ((name, b), se) in m.feature_names.iter().zip(f.coef.beta()).zip(f.std_errors.iter()) {
                writeln!(out, "{name}\t{}\t{}", num(*b), num(*se)).unwrap();
            }
        }
        Payload::Predict(p) => {
            out.push_str("row\tprobability\tlabel\n");
            for (i, r) in p.rows.iter().enumerate() {
                writeln!(out, "{}\t{}\t{}", i + 1, num(r.probability), r.label).unwrap();
            }
        }
        Payload::Test(t) => {
            let r = &t.result;
            kv(&mut out, "deviance_reduced", num(r.deviance_reduced));
            kv(&mut out, "deviance_full", num(r.deviance_full));
            kv(&mut out, "statistic", num(r.statistic));
            kv(&mut out, "df", r.df);
            kv(&mut out, "p_value", num(r.p_value));
        }
        Payload::Cv(c) => {
            kv(&mut out, "n", c.report.n);
            kv(&mut out, "error_rate", num(c.report.error_rate));
            kv(&mut out, "discriminant_power", num(c.report.discriminant_power));
            kv(&mut out, "non_converged_folds", c.report.non_converged_folds);
            kv(&mut out, "q_statistic", num(c.press_q.q_statistic));
            kv(&mut out, "p_value", num(c.press_q.p_value));
            out.push_str("subject\terror\n");
            for (i, e) in c.report.per_subject_errors.iter().enumerate() {
                writeln!(out, "{}\t{e}", i + 1).unwrap();
            }
        }
        Payload::PressQ(q) => {
            kv(&mut out, "n", q.n);
            kv(&mut out, "rate", num(q.error_rate));
            kv(&mut out, "q_statistic", num(q.q_statistic));
            kv(&mut out, "p_value", num(q.p_value));
        }
        Payload::Curve(c) => {
            for p in &c.points {
                writeln!(out, "{}\t{}", sig17(p.power), sig17(p.p_value)).unwrap();
            }
        }
    }
    out
}
