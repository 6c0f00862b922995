//! Model parameters: the tuple (n, m, a, b, alpha, beta, eta, sign) defining
//! one instance of the chemotaxis model.

use core::fmt;

/// Orientation of the Newtonian interaction: attractive drives aggregation,
/// repulsive drives spreading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Attractive,
    Repulsive,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Attractive => "attractive",
            Sign::Repulsive => "repulsive",
        }
    }

    /// +1 for attractive, -1 for repulsive; the factor multiplying the
    /// advective divergence in the evolution equation.
    pub fn factor(self) -> f64 {
        match self {
            Sign::Attractive => 1.0,
            Sign::Repulsive => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamError {
    /// The Sobolev exponent 2n/(n-2) and the Newtonian kernel need n >= 3.
    DimensionTooLow { n: u32 },
    /// m, a, b, alpha, eta must be strictly positive (and finite).
    NonPositive { field: &'static str, value: f64 },
    /// The nonlocal exponent beta must satisfy beta >= 1.
    BetaBelowOne { value: f64 },
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::DimensionTooLow { n } => {
                write!(f, "DimensionTooLow: n = {n}, but n >= 3 is required")
            }
            ParamError::NonPositive { field, value } => {
                write!(f, "NonPositive: {field} = {value} must be > 0 and finite")
            }
            ParamError::BetaBelowOne { value } => {
                write!(f, "BetaBelowOne: beta = {value} must be >= 1")
            }
        }
    }
}

/// One model instance. All hypothesis quantities and the dynamics are pure
/// functions of these eight values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Space dimension, n >= 3.
    pub n: u32,
    /// Diffusion exponent of rho^m, m > 0 (m < 1 fast, m > 1 porous-medium).
    pub m: f64,
    /// Growth coefficient, a > 0.
    pub a: f64,
    /// Damping coefficient, b > 0.
    pub b: f64,
    /// Local death exponent, alpha > 0.
    pub alpha: f64,
    /// Nonlocal exponent, beta >= 1.
    pub beta: f64,
    /// Growth exponent, eta > 0.
    pub eta: f64,
    /// Interaction orientation.
    pub sign: Sign,
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: u32,
        m: f64,
        a: f64,
        b: f64,
        alpha: f64,
        beta: f64,
        eta: f64,
        sign: Sign,
    ) -> Result<Self, ParamError> {
        let p = ModelParams {
            n,
            m,
            a,
            b,
            alpha,
            beta,
            eta,
            sign,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.n < 3 {
            return Err(ParamError::DimensionTooLow { n: self.n });
        }
        for (field, value) in [
            ("m", self.m),
            ("a", self.a),
            ("b", self.b),
            ("alpha", self.alpha),
            ("eta", self.eta),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(ParamError::NonPositive { field, value });
            }
        }
        if !self.beta.is_finite() || self.beta < 1.0 {
            return Err(ParamError::BetaBelowOne { value: self.beta });
        }
        Ok(())
    }
}
