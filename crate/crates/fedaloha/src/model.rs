//! Linear-regression model shared by all users: data generation, loss,
//! local gradient steps, server-side aggregation, and the error metric.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense real vector of fixed dimension; holds the global weights, each
/// user's local update, and the ground-truth vector behind the data.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("weight vector must have L >= 1".into()));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("weight vector entries must be finite".into()));
        }
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter("weight vector must have L >= 1".into()));
        }
        Ok(Self(vec![0.0; len]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // L >= 1 by construction
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// self - other
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// self + scale * other
    pub fn axpy(&self, scale: f64, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + scale * b).collect()))
    }
}

/// One user's data: a single (x, y) sample with y generated noiselessly.
#[derive(Debug, Clone, PartialEq)]
pub struct UserDataset {
    pub x: WeightVector,
    pub y: f64,
}

/// Ground truth plus every user's dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelInstance {
    pub w_true: WeightVector,
    pub datasets: Vec<UserDataset>,
}

impl ModelInstance {
    pub fn num_users(&self) -> usize {
        self.datasets.len()
    }

    pub fn dim(&self) -> usize {
        self.w_true.len()
    }
}

/// How a user's significance a_k is measured from its local update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignificanceMode {
    /// ‖w_k(t+1)‖, the local weight vector norm.
    WeightNorm,
    /// ‖w_k(t+1) − w(t)‖ = h·‖∇f_k‖, the update displacement.
    DeltaNorm,
    /// ‖w_k(t+1) − w(t)‖ / h = ‖∇f_k‖, the local gradient magnitude.
    #[default]
    GradNorm,
}

/// How the server folds received local updates into the global weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregationMode {
    /// Arithmetic mean of the received weight vectors.
    Mean,
    /// w + Σ(w_k − w): every received update is applied as an SGD step.
    #[default]
    SumGradient,
}

/// Draw ground truth and per-user data, all entries i.i.d. standard normal,
/// with y_k = x_k·w_true exactly.
pub fn generate_instance<R: Rng>(k: usize, l: usize, rng: &mut R) -> Result<ModelInstance> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be >= 1".into()));
    }
    if l == 0 {
        return Err(Error::InvalidParameter("L must be >= 1".into()));
    }
    let draw = |rng: &mut R| -> Vec<f64> { (0..l).map(|_| rng.sample(StandardNormal)).collect() };
    let w_true = WeightVector::new(draw(rng))?;
    let datasets = (0..k)
        .map(|_| {
            let x = WeightVector::new(draw(rng))?;
            let y = x.dot(&w_true)?;
            Ok(UserDataset { x, y })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelInstance { w_true, datasets })
}

/// Squared-error loss ½|x·w − y|².
pub fn loss(w: &WeightVector, d: &UserDataset) -> Result<f64> {
    let r = w.dot(&d.x)? - d.y;
    Ok(0.5 * r * r)
}

/// Gradient of the loss at w: (x·w − y)·x.
pub fn gradient(w: &WeightVector, d: &UserDataset) -> Result<WeightVector> {
    let r = w.dot(&d.x)? - d.y;
    WeightVector::zeros(w.len())?.axpy(r, &d.x)
}

/// One gradient-descent step: w − h·(x·w − y)·x.
pub fn local_update(w: &WeightVector, d: &UserDataset, h: f64) -> Result<WeightVector> {
    if h <= 0.0 || h.is_nan() {
        return Err(Error::InvalidParameter(format!("step size must be positive, got {h}")));
    }
    let r = w.dot(&d.x)? - d.y;
    w.axpy(-h * r, &d.x)
}

/// Significance a_k of a local update. An unavailable user reports 0 so its
/// access probability is forced to 0.
pub fn significance(
    w_old: &WeightVector,
    w_new: &WeightVector,
    h: f64,
    available: bool,
    mode: SignificanceMode,
) -> Result<f64> {
    if w_old.len() != w_new.len() {
        return Err(Error::DimensionMismatch { expected: w_old.len(), got: w_new.len() });
    }
    if !available {
        return Ok(0.0);
    }
    match mode {
        SignificanceMode::WeightNorm => Ok(w_new.norm()),
        SignificanceMode::DeltaNorm => Ok(w_new.sub(w_old)?.norm()),
        SignificanceMode::GradNorm => {
            if h <= 0.0 || h.is_nan() {
                return Err(Error::InvalidParameter(format!(
                    "step size must be positive, got {h}"
                )));
            }
            Ok(w_new.sub(w_old)?.norm() / h)
        }
    }
}

/// Fold the received local updates into the global weights. An empty round
/// leaves the weights untouched; a single received vector is returned as-is
/// (identical in both modes, and keeps single-uploader schedules bit-exact).
pub fn aggregate(
    w_prev: &WeightVector,
    received: &[WeightVector],
    mode: AggregationMode,
) -> Result<WeightVector> {
    for v in received {
        if v.len() != w_prev.len() {
            return Err(Error::DimensionMismatch { expected: w_prev.len(), got: v.len() });
        }
    }
    match received {
        [] => Ok(w_prev.clone()),
        [only] => Ok(only.clone()),
        many => match mode {
            AggregationMode::Mean => {
                let mut acc = vec![0.0; w_prev.len()];
                for v in many {
                    for (a, b) in acc.iter_mut().zip(v.entries()) {
                        *a += b;
                    }
                }
                let n = many.len() as f64;
                WeightVector::new(acc.into_iter().map(|a| a / n).collect())
            }
            AggregationMode::SumGradient => {
                let mut acc = w_prev.entries().to_vec();
                for v in many {
                    for ((a, b), w0) in acc.iter_mut().zip(v.entries()).zip(w_prev.entries()) {
                        *a += b - w0;
                    }
                }
                WeightVector::new(acc)
            }
        },
    }
}

/// ‖w − w_true‖, the plotted convergence metric.
pub fn error_norm(w: &WeightVector, w_true: &WeightVector) -> Result<f64> {
    Ok(w.sub(w_true)?.norm())
}
