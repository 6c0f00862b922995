//! Thin libm shims so the crate builds without std.

pub const PI: f64 = core::f64::consts::PI;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

/// x^k by binary exponentiation; exact for small integer powers of exact inputs.
pub fn powi(x: f64, k: u32) -> f64 {
    let mut base = x;
    let mut exp = k;
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// Gamma(n/2 + 1) for integer n >= 1, by the downward recurrence from
/// Gamma(1) = 1 (n even) or Gamma(1/2) = sqrt(pi) (n odd).
pub fn gamma_half_plus_one(n: u32) -> f64 {
    let mut x = n as f64 / 2.0;
    let mut acc = 1.0;
    while x > 0.4 {
        acc *= x;
        x -= 1.0;
    }
    if n % 2 == 1 {
        acc *= sqrt(PI);
    }
    acc
}
