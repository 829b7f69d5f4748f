//! Goodness-of-fit metrics.
//!
//! Reported R² is the squared Pearson correlation between predictions and
//! observations. The coefficient of determination `1 - SSE/SST` is
//! available separately as an auxiliary figure.

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("length mismatch: {pred} predictions vs {actual} observations")]
    LengthMismatch { pred: usize, actual: usize },
    #[error("empty input")]
    Empty,
    #[error("constant vector: correlation undefined")]
    ConstantVector,
}

fn check(pred: &[f64], actual: &[f64]) -> Result<(), MetricsError> {
    if pred.len() != actual.len() {
        return Err(MetricsError::LengthMismatch {
            pred: pred.len(),
            actual: actual.len(),
        });
    }
    if pred.is_empty() {
        return Err(MetricsError::Empty);
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Pearson correlation coefficient, clamped to `[-1, 1]` against rounding.
pub fn pearson_r(pred: &[f64], actual: &[f64]) -> Result<f64, MetricsError> {
    check(pred, actual)?;
    let (mp, ma) = (mean(pred), mean(actual));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (p, a) in pred.iter().zip(actual) {
        let (dp, da) = (p - mp, a - ma);
        sxy += dp * da;
        sxx += dp * dp;
        syy += da * da;
    }
    let denom = (sxx * syy).sqrt();
    if denom == 0.0 || !denom.is_finite() {
        return Err(MetricsError::ConstantVector);
    }
    Ok((sxy / denom).clamp(-1.0, 1.0))
}

/// Squared Pearson correlation.
pub fn r_squared(pred: &[f64], actual: &[f64]) -> Result<f64, MetricsError> {
    pearson_r(pred, actual).map(|r| r * r)
}

/// Root mean squared error, divisor n.
pub fn rmse(pred: &[f64], actual: &[f64]) -> Result<f64, MetricsError> {
    check(pred, actual)?;
    let sse: f64 = pred.iter().zip(actual).map(|(p, a)| (p - a).powi(2)).sum();
    Ok((sse / pred.len() as f64).sqrt())
}

/// Mean absolute error.
pub fn mae(pred: &[f64], actual: &[f64]) -> Result<f64, MetricsError> {
    check(pred, actual)?;
    let sae: f64 = pred.iter().zip(actual).map(|(p, a)| (p - a).abs()).sum();
    Ok(sae / pred.len() as f64)
}

/// `-mae`, the higher-is-better score used for CV box plots.
pub fn negative_mae(pred: &[f64], actual: &[f64]) -> Result<f64, MetricsError> {
    mae(pred, actual).map(|m| -m)
}

/// `1 - SSE/SST`; errors when the observations are constant.
pub fn coefficient_of_determination(pred: &[f64], actual: &[f64]) -> Result<f64, MetricsError> {
    check(pred, actual)?;
    let ma = mean(actual);
    let sst: f64 = actual.iter().map(|a| (a - ma).powi(2)).sum();
    if sst == 0.0 {
        return Err(MetricsError::ConstantVector);
    }
    let sse: f64 = pred.iter().zip(actual).map(|(p, a)| (p - a).powi(2)).sum();
    Ok(1.0 - sse / sst)
}

/// R², RMSE and MAE of one model on one split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTriple {
    pub r2: f64,
    pub rmse: f64,
    pub mae: f64,
}

pub fn evaluate(pred: &[f64], actual: &[f64]) -> Result<MetricTriple, MetricsError> {
    Ok(MetricTriple {
        r2: r_squared(pred, actual)?,
        rmse: rmse(pred, actual)?,
        mae: mae(pred, actual)?,
    })
}

/// Scores of one split where the correlation-based cells may fail
/// individually (constant predictions) while RMSE and MAE still exist.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitScore {
    /// Squared Pearson correlation.
    pub r2: Result<f64, MetricsError>,
    /// Pearson correlation before squaring.
    pub r: Result<f64, MetricsError>,
    pub rmse: f64,
    pub mae: f64,
    pub cod: Result<f64, MetricsError>,
}

impl SplitScore {
    pub fn compute(pred: &[f64], actual: &[f64]) -> Result<Self, MetricsError> {
        Ok(Self {
            rmse: rmse(pred, actual)?,
            mae: mae(pred, actual)?,
            r2: r_squared(pred, actual),
            r: pearson_r(pred, actual),
            cod: coefficient_of_determination(pred, actual),
        })
    }
}
