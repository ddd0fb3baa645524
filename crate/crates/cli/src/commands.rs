use std::path::Path;

use logitkit::classify::classify_design;
use logitkit::model::{predict_proba_for, INTERCEPT};
use logitkit::{
    evaluate_with_press_q, fit_irls, loocv, lrt_nested, power_curve, press_q, FitConfig64,
};

use crate::error::{CliError, Result};
use crate::ingest::{ingest, ingest_design, CsvSpec};
use crate::output::{
    CrossValidation, FittedModel, Format, NestedTest, Payload, Prediction, Predictions, RunOutput,
};

pub fn check_config(config: &FitConfig64) -> Result<()> {
    config.validate().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--threshold must lie in (0, 1), got {threshold}")))
    }
}

pub fn cmd_fit(spec: &CsvSpec, config: &FitConfig64, format: Format) -> Result<RunOutput> {
    check_config(config)?;
    let data = ingest(spec)?;
    let fit = fit_irls(&data, config)?;
    Ok(RunOutput {
        format,
        payload: Payload::Fit(FittedModel {
            label_column: spec.label_column.clone(),
            feature_names: data.feature_names().to_vec(),
            fit,
        }),
    })
}

pub fn read_model(path: &Path) -> Result<FittedModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    match serde_json::from_str::<Payload>(&text) {
        Ok(Payload::Fit(m)) => Ok(m),
        Ok(_) => Err(CliError::Data(format!("{} is not a fit result", path.display()))),
        Err(e) => Err(CliError::Data(format!("{}: {e}", path.display()))),
    }
}

/// Applies a saved fit to the feature columns of `spec.path`.
pub fn cmd_predict(
    model_path: &Path,
    spec: &CsvSpec,
    threshold: f64,
    format: Format,
) -> Result<RunOutput> {
    check_threshold(threshold)?;
    let model = read_model(model_path)?;
    let features: Vec<String> = model.feature_names.iter().skip(1).cloned().collect();
    let spec = CsvSpec {
        label_column: model.label_column.clone(),
        ..spec.clone()
    }
    .with_features(features);
    let design = ingest_design(&spec)?;
    let coef = &model.fit.coef;
    let probs = predict_proba_for(&design, coef)?;
    let labels = classify_design(&design, coef, threshold)?;
    Ok(RunOutput {
        format,
        payload: Payload::Predict(Predictions {
            threshold,
            rows: probs
                .iter()
                .zip(labels)
                .map(|(&probability, label)| Prediction { probability, label })
                .collect(),
        }),
    })
}

/// Nested test dropping every feature not named in `reduced`.
pub fn cmd_test(
    spec: &CsvSpec,
    reduced: &[String],
    config: &FitConfig64,
    format: Format,
) -> Result<RunOutput> {
    check_config(config)?;
    let data = ingest(spec)?;
    let names = data.feature_names();
    let mut cols = vec![0];
    for name in reduced.iter().filter(|n| n.as_str() != INTERCEPT) {
        let j = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CliError::Usage(format!("--reduced column {name:?} is not a model feature")))?;
        if !cols.contains(&j) {
            cols.push(j);
        }
    }
    cols.sort_unstable();
    let result = lrt_nested(&data, &cols, config)?;
    Ok(RunOutput {
        format,
        payload: Payload::Test(NestedTest {
            full_columns: names.to_vec(),
            reduced_columns: cols.iter().map(|&j| names[j].clone()).collect(),
            result,
        }),
    })
}

pub fn cmd_cv(spec: &CsvSpec, config: &FitConfig64, threshold: f64, format: Format) -> Result<RunOutput> {
    check_config(config)?;
    check_threshold(threshold)?;
    let data = ingest(spec)?;
    let report = loocv(&data, config, threshold)?;
    let press_q = evaluate_with_press_q(&report)?;
    Ok(RunOutput {
        format,
        payload: Payload::Cv(CrossValidation {
            threshold,
            report,
            press_q,
        }),
    })
}

pub fn cmd_pressq(n: usize, rate: f64, format: Format) -> Result<RunOutput> {
    if n == 0 {
        return Err(CliError::Usage("--n must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&rate) {
        return Err(CliError::Usage(format!("--rate must lie in [0, 1], got {rate}")));
    }
    Ok(RunOutput {
        format,
        payload: Payload::PressQ(press_q(n, rate)?),
    })
}

pub fn cmd_curve(n: usize, grid_points: usize, format: Format) -> Result<RunOutput> {
    if n == 0 {
        return Err(CliError::Usage("--n must be >= 1".into()));
    }
    if grid_points < 2 {
        return Err(CliError::Usage("--grid must be >= 2".into()));
    }
    Ok(RunOutput {
        format,
        payload: Payload::Curve(power_curve(n, grid_points)?),
    })
}
