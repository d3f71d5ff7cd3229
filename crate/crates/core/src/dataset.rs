use crate::error::{Error, Result};

/// Observed unit-variance statistics `Y_1, ..., Y_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Vec<f64>,
}

impl Dataset {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::InsufficientData("dataset is empty".into()));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "observation {i} is not finite ({})",
                y[i]
            )));
        }
        Ok(Self { y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn into_values(self) -> Vec<f64> {
        self.y
    }

    pub fn mean(&self) -> f64 {
        self.y.iter().sum::<f64>() / self.y.len() as f64
    }

    /// Sample variance with the `m - 1` divisor; `None` when `m < 2`.
    pub fn sample_variance(&self) -> Option<f64> {
        let m = self.y.len();
        if m < 2 {
            return None;
        }
        let mean = self.mean();
        let ss: f64 = self.y.iter().map(|v| (v - mean) * (v - mean)).sum();
        Some(ss / (m - 1) as f64)
    }
}

impl TryFrom<Vec<f64>> for Dataset {
    type Error = Error;

    fn try_from(y: Vec<f64>) -> Result<Self> {
        Dataset::new(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Dataset::new(vec![]).is_err());
        assert!(Dataset::new(vec![1.0, f64::NAN]).is_err());
        assert!(Dataset::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn moments() {
        let d = Dataset::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(d.mean(), 2.5);
        assert!((d.sample_variance().unwrap() - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(Dataset::new(vec![1.0]).unwrap().sample_variance(), None);
    }
}
