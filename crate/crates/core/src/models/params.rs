use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fanout `b`, scale factor `c` and height `H` of the base model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IgamParams {
    pub b: u32,
    pub c: f64,
    #[serde(rename = "H", alias = "height")]
    pub height: u32,
}

impl IgamParams {
    /// Requires `b >= 2` and `1 < c < b`. Height zero is accepted (a single node).
    pub fn new(b: u32, c: f64, height: u32) -> Result<Self> {
        let p = Self { b, c, height };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b < 2 {
            return Err(Error::InvalidParams(format!("fanout b = {} must be at least 2", self.b)));
        }
        if !(self.c > 1.0 && self.c < self.b as f64) {
            return Err(Error::InvalidParams(format!("scale c = {} must lie in (1, b = {})", self.c, self.b)));
        }
        Ok(())
    }

    pub(crate) fn check_level(&self, h: u32) -> Result<()> {
        if h > self.height {
            Err(Error::LevelOutOfRange { level: h, max: self.height })
        } else {
            Ok(())
        }
    }
}

/// Two-regime variant: pairs whose lower member sits at or above the core
/// threshold `H0` use scale `c1`, all other pairs use `c2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Igam2Params {
    pub b: u32,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "H0", alias = "core_threshold")]
    pub core_threshold: u32,
    #[serde(rename = "H", alias = "height")]
    pub height: u32,
}

impl Igam2Params {
    /// Requires `1 < c1 <= c2 < b` and `0 < H0 < H`. Equal scales reduce the
    /// law to the base model.
    pub fn new(b: u32, c1: f64, c2: f64, core_threshold: u32, height: u32) -> Result<Self> {
        let p = Self { b, c1, c2, core_threshold, height };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b < 2 {
            return Err(Error::InvalidParams(format!("fanout b = {} must be at least 2", self.b)));
        }
        if !(1.0 < self.c1 && self.c1 <= self.c2 && self.c2 < self.b as f64) {
            return Err(Error::InvalidParams(format!(
                "scales must satisfy 1 < c1 <= c2 < b (got c1 = {}, c2 = {}, b = {})",
                self.c1, self.c2, self.b
            )));
        }
        if !(0 < self.core_threshold && self.core_threshold < self.height) {
            return Err(Error::InvalidParams(format!(
                "core threshold H0 = {} must lie strictly between 0 and H = {}",
                self.core_threshold, self.height
            )));
        }
        Ok(())
    }

    pub fn base(&self, c: f64) -> IgamParams {
        IgamParams { b: self.b, c, height: self.height }
    }
}

/// Smoothed variant: the minimum height is replaced by the power mean of order `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaIgamParams {
    pub base: IgamParams,
    pub delta: f64,
}

impl DeltaIgamParams {
    pub fn new(base: IgamParams, delta: f64) -> Result<Self> {
        base.validate()?;
        if delta == 0.0 || !delta.is_finite() {
            return Err(Error::InvalidParams(format!("delta = {delta} must be finite and nonzero")));
        }
        Ok(Self { base, delta })
    }
}
