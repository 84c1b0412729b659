//! One-vs-rest L2-regularized L2-loss linear SVM trained by dual coordinate
//! descent, with a bias term learned as a constant feature.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::{FeatureEncoder, FeatureVector};

/// First line of every model file.
pub const MODEL_HEADER: &str = "chronorel-linear-model v1";

#[derive(Debug, thiserror::Error)]
pub enum LinearError {
    #[error("training data has fewer than two labels ({0:?})")]
    Degenerate(Vec<String>),
    #[error("training data is empty")]
    Empty,
    #[error("feature index {index} outside model dimension {dim}")]
    Shape { index: u32, dim: usize },
    #[error("model format: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// Misclassification cost.
    pub c: f64,
    /// Stop when the spread of projected gradients falls below this.
    pub tol: f64,
    pub max_epochs: usize,
    pub seed: u64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters { c: 1.0, tol: 1e-4, max_epochs: 1000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    /// Label inventory; ties in prediction go to the earlier label.
    pub labels: Vec<String>,
    pub dim: usize,
    /// One weight vector per label.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub hyper: Hyperparameters,
}

/// Dual objective after each epoch, per one-vs-rest problem.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainingLog {
    pub objectives: Vec<Vec<f64>>,
    pub epochs: Vec<usize>,
}

impl TrainingLog {
    /// True when no problem's objective rose between epochs beyond rounding.
    pub fn is_monotone(&self) -> bool {
        self.objectives.iter().all(|o| o.windows(2).all(|w| w[1] <= w[0] + 1e-9 * w[0].abs().max(1.0)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub label: String,
    /// Scores in label-inventory order.
    pub scores: Vec<f64>,
    /// Top score minus the runner-up.
    pub confidence: f64,
}

/// Trains one binary problem; returns weights, bias and per-epoch dual
/// objectives.
fn train_binary(
    xs: &[&FeatureVector],
    ys: &[f64],
    dim: usize,
    hp: &Hyperparameters,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, f64, Vec<f64>, usize) {
    let n = xs.len();
    let diag = 0.5 / hp.c;
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut alpha = vec![0.0; n];
    let qii: Vec<f64> = xs.iter().map(|x| x.len() as f64 + 1.0 + diag).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut objectives = Vec::new();
    let mut epochs = 0;
    for _ in 0..hp.max_epochs {
        epochs += 1;
        order.shuffle(rng);
        let (mut pg_max, mut pg_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for &i in &order {
            let x = xs[i];
            let y = ys[i];
            let wx: f64 = x.indices().iter().map(|&j| w[j as usize]).sum::<f64>() + b;
            let g = y * wx - 1.0 + diag * alpha[i];
            let pg = if alpha[i] == 0.0 { g.min(0.0) } else { g };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / qii[i]).max(0.0);
                let d = (alpha[i] - old) * y;
                for &j in x.indices() {
                    w[j as usize] += d;
                }
                b += d;
            }
        }
        let norm: f64 = w.iter().map(|v| v * v).sum::<f64>() + b * b;
        let obj = 0.5 * norm + 0.5 * diag * alpha.iter().map(|a| a * a).sum::<f64>() - alpha.iter().sum::<f64>();
        objectives.push(obj);
        if pg_max - pg_min <= hp.tol {
            break;
        }
    }
    (w, b, objectives, epochs)
}

/// Trains a one-vs-rest model. Labels are inventoried in first-seen order.
pub fn train(
    data: &[(FeatureVector, String)],
    dim: usize,
    hp: Hyperparameters,
) -> Result<(LinearModel, TrainingLog), LinearError> {
    if data.is_empty() {
        return Err(LinearError::Empty);
    }
    let mut labels: Vec<String> = Vec::new();
    for (x, y) in data {
        if let Some(&bad) = x.indices().iter().find(|&&i| i as usize >= dim) {
            return Err(LinearError::Shape { index: bad, dim });
        }
        if !labels.contains(y) {
            labels.push(y.clone());
        }
    }
    if labels.len() < 2 {
        return Err(LinearError::Degenerate(labels));
    }
    let xs: Vec<&FeatureVector> = data.iter().map(|d| &d.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let mut model = LinearModel { labels: labels.clone(), dim, weights: Vec::new(), bias: Vec::new(), hyper: hp };
    let mut log = TrainingLog::default();
    for label in &labels {
        let ys: Vec<f64> = data.iter().map(|d| if &d.1 == label { 1.0 } else { -1.0 }).collect();
        let (w, b, obj, epochs) = train_binary(&xs, &ys, dim, &hp, &mut rng);
        model.weights.push(w);
        model.bias.push(b);
        log.objectives.push(obj);
        log.epochs.push(epochs);
    }
    Ok((model, log))
}

impl LinearModel {
    pub fn scores(&self, x: &FeatureVector) -> Result<Vec<f64>, LinearError> {
        if let Some(&bad) = x.indices().iter().find(|&&i| i as usize >= self.dim) {
            return Err(LinearError::Shape { index: bad, dim: self.dim });
        }
        Ok(self
            .weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| x.indices().iter().map(|&j| w[j as usize]).sum::<f64>() + b)
            .collect())
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<Prediction, LinearError> {
        let scores = self.scores(x)?;
        let mut best = 0;
        for (k, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = k;
            }
        }
        let runner =
            scores.iter().enumerate().filter(|&(k, _)| k != best).map(|(_, &s)| s).fold(f64::NEG_INFINITY, f64::max);
        let confidence = if runner.is_finite() { scores[best] - runner } else { 0.0 };
        Ok(Prediction { label: self.labels[best].clone(), scores, confidence })
    }

    /// Header line followed by the JSON body.
    pub fn to_text(&self) -> String {
        let body = serde_json::to_string(self).expect("model serializes");
        format!("{MODEL_HEADER}\n{body}\n")
    }

    pub fn from_text(text: &str) -> Result<LinearModel, LinearError> {
        let (header, body) = text.split_once('\n').unwrap_or((text, ""));
        if header.trim_end_matches('\r') != MODEL_HEADER {
            return Err(LinearError::Format(format!("expected header `{MODEL_HEADER}`, found `{header}`")));
        }
        let m: LinearModel = serde_json::from_str(body).map_err(|e| LinearError::Format(e.to_string()))?;
        if m.weights.len() != m.labels.len()
            || m.bias.len() != m.labels.len()
            || m.weights.iter().any(|w| w.len() != m.dim)
        {
            return Err(LinearError::Format("weight shapes do not match labels and dimension".into()));
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<(), LinearError> {
        std::fs::write(path, self.to_text())
            .map_err(|source| LinearError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<LinearModel, LinearError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| LinearError::Io { path: path.display().to_string(), source })?;
        LinearModel::from_text(&text)
    }
}

/// A feature vocabulary with the model trained over it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classifier {
    pub encoder: FeatureEncoder,
    pub model: LinearModel,
}

impl Classifier {
    /// Fits the vocabulary on the raw features and trains the model.
    pub fn fit(data: &[(Vec<String>, String)], hp: Hyperparameters) -> Result<(Classifier, TrainingLog), LinearError> {
        if data.is_empty() {
            return Err(LinearError::Empty);
        }
        let encoder = FeatureEncoder::fit(data.iter().map(|d| &d.0)).map_err(|_| LinearError::Empty)?;
        let encoded: Vec<(FeatureVector, String)> = data.iter().map(|(f, y)| (encoder.encode(f), y.clone())).collect();
        let (model, log) = train(&encoded, encoder.dim(), hp)?;
        Ok((Classifier { encoder, model }, log))
    }

    pub fn predict_raw(&self, raw: &[String]) -> Prediction {
        self.model.predict(&self.encoder.encode(raw)).expect("encoder and model dimensions agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(ix: &[u32]) -> FeatureVector {
        FeatureVector::from_indices(ix.to_vec())
    }

    fn toy() -> Vec<(FeatureVector, String)> {
        vec![
            (fv(&[0, 3]), "A".into()),
            (fv(&[0, 4]), "A".into()),
            (fv(&[1, 3]), "B".into()),
            (fv(&[1, 4]), "B".into()),
            (fv(&[2]), "C".into()),
            (fv(&[2, 3, 4]), "C".into()),
        ]
    }

    #[test]
    fn separable_toy_is_fit_exactly() {
        let (m, log) = train(&toy(), 5, Hyperparameters::default()).unwrap();
        for (x, y) in toy() {
            assert_eq!(m.predict(&x).unwrap().label, y);
        }
        assert!(log.is_monotone());
    }

    #[test]
    fn deterministic_and_roundtrips() {
        let hp = Hyperparameters { seed: 7, ..Default::default() };
        let a = train(&toy(), 5, hp).unwrap().0;
        let b = train(&toy(), 5, hp).unwrap().0;
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(LinearModel::from_text(&a.to_text()).unwrap(), a);
        assert!(matches!(LinearModel::from_text("garbage\n{}"), Err(LinearError::Format(_))));
    }

    #[test]
    fn zero_model_and_errors() {
        let m = LinearModel {
            labels: vec!["X".into(), "Y".into()],
            dim: 2,
            weights: vec![vec![0.0; 2]; 2],
            bias: vec![0.0; 2],
            hyper: Hyperparameters::default(),
        };
        let p = m.predict(&fv(&[1])).unwrap();
        assert_eq!((p.label.as_str(), p.confidence), ("X", 0.0));
        assert!(matches!(m.predict(&fv(&[5])), Err(LinearError::Shape { index: 5, dim: 2 })));
        let one = vec![(fv(&[0]), "A".to_string())];
        assert!(matches!(train(&one, 1, Hyperparameters::default()), Err(LinearError::Degenerate(_))));
    }
}
