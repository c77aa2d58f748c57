//! Row-major point sets and regression datasets.

use crate::error::{GskError, Result};

/// `n` points in `d` dimensions stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    data: Vec<f64>,
    dim: usize,
}

impl Points {
    pub fn new(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(GskError::Input("point dimension must be at least 1".into()));
        }
        if data.len() % dim != 0 {
            return Err(GskError::Input(format!(
                "{} values do not split into rows of {dim}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(GskError::Input(format!(
                "non-finite input at row {}, column {}",
                i / dim,
                i % dim
            )));
        }
        Ok(Self { data, dim })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows
            .first()
            .map(|r| r.len())
            .ok_or_else(|| GskError::Input("no rows".into()))?;
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(GskError::Input(format!(
                "row {i} has {} values, expected {dim}",
                rows[i].len()
            )));
        }
        Self::new(rows.concat(), dim)
    }

    /// 1-d points.
    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        Self::new(xs.to_vec(), 1)
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            data: Vec::new(),
            dim,
        }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Training inputs and targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Points,
    y: Vec<f64>,
}

impl Dataset {
    pub fn new(x: Points, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(GskError::Input("dataset needs at least one sample".into()));
        }
        if x.len() != y.len() {
            return Err(GskError::Input(format!(
                "{} inputs but {} targets",
                x.len(),
                y.len()
            )));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(GskError::Input(format!("non-finite target at row {i}")));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &Points {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn mean_y(&self) -> f64 {
        self.y.iter().sum::<f64>() / self.y.len() as f64
    }

    /// Population variance of the targets.
    pub fn var_y(&self) -> f64 {
        let m = self.mean_y();
        self.y.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.y.len() as f64
    }

    /// Copy with the target mean subtracted, and that mean.
    pub fn centered(&self) -> (Dataset, f64) {
        let m = self.mean_y();
        (
            Dataset {
                x: self.x.clone(),
                y: self.y.iter().map(|v| v - m).collect(),
            },
            m,
        )
    }
}
