//! The 13-point assessment scale.
//!
//! Assessors score each link on buckets 1..=13; adjacent buckets differ by a
//! constant likelihood ratio, so the mapping is geometric between the two
//! configured endpoints.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MIN_BUCKET: u8 = 1;
pub const MAX_BUCKET: u8 = 13;

pub const DEFAULT_P_MAX: f64 = 0.9;
pub const DEFAULT_RATIO: f64 = 1.8;

#[derive(Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("bucket {0} outside 1..=13")]
    BucketOutOfRange(i64),
    #[error("invalid scale: require 0 < pMin < pMax < 1, got pMin={p_min}, pMax={p_max}")]
    InvalidScale { p_min: f64, p_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BucketScale {
    pub p_min: f64,
    pub p_max: f64,
}

impl Default for BucketScale {
    fn default() -> Self {
        Self::from_max_and_ratio(DEFAULT_P_MAX, DEFAULT_RATIO)
    }
}

impl BucketScale {
    pub fn new(p_min: f64, p_max: f64) -> Result<Self, ScaleError> {
        let scale = Self { p_min, p_max };
        if scale.is_valid() {
            Ok(scale)
        } else {
            Err(ScaleError::InvalidScale { p_min, p_max })
        }
    }

    /// Scale whose top bucket is `p_max` and whose adjacent buckets differ by `ratio`.
    pub fn from_max_and_ratio(p_max: f64, ratio: f64) -> Self {
        Self {
            p_min: p_max * ratio.powi(-i32::from(MAX_BUCKET - MIN_BUCKET)),
            p_max,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.p_min > 0.0 && self.p_min < self.p_max && self.p_max < 1.0
    }

    /// Likelihood ratio between adjacent buckets.
    pub fn ratio(&self) -> f64 {
        (self.p_max / self.p_min).powf(1.0 / f64::from(MAX_BUCKET - MIN_BUCKET))
    }

    pub fn probability(&self, bucket: i64) -> Result<f64, ScaleError> {
        bucket_to_probability(bucket, self)
    }
}

/// Maps an assessed bucket to its probability, `pMax * r^(b - 13)`.
///
/// The two endpoints return the configured values exactly.
pub fn bucket_to_probability(bucket: i64, scale: &BucketScale) -> Result<f64, ScaleError> {
    if !scale.is_valid() {
        return Err(ScaleError::InvalidScale {
            p_min: scale.p_min,
            p_max: scale.p_max,
        });
    }
    match bucket {
        b if b == i64::from(MAX_BUCKET) => Ok(scale.p_max),
        b if b == i64::from(MIN_BUCKET) => Ok(scale.p_min),
        b if (i64::from(MIN_BUCKET)..i64::from(MAX_BUCKET)).contains(&b) => {
            let steps = (b - i64::from(MAX_BUCKET)) as i32;
            Ok(scale.p_max * scale.ratio().powi(steps))
        }
        b => Err(ScaleError::BucketOutOfRange(b)),
    }
}
