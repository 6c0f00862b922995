//! In-place radix-2 complex FFT and a 3-D cube driver for the spectral
//! Poisson solve. Power-of-two lengths only (the box grid pins that).

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };

    #[inline]
    pub fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    #[inline]
    fn mul(self, other: Complex) -> Complex {
        Complex {
            re: self.re * other.re - self.im * other.im,
            im: self.re * other.im + self.im * other.re,
        }
    }

    #[inline]
    fn add(self, other: Complex) -> Complex {
        Complex {
            re: self.re + other.re,
            im: self.im + other.im,
        }
    }

    #[inline]
    fn sub(self, other: Complex) -> Complex {
        Complex {
            re: self.re - other.re,
            im: self.im - other.im,
        }
    }
}

/// Twiddle table for one transform length, shared by the 3n^2 line transforms
/// of a cube pass.
pub struct FftPlan {
    len: usize,
    /// Twiddles e^(-2 pi i j / len) for j in 0..len/2 (forward direction).
    twiddles: Vec<Complex>,
}

impl FftPlan {
    pub fn new(len: usize) -> FftPlan {
        debug_assert!(len.is_power_of_two());
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        for j in 0..half {
            let angle = -2.0 * math::PI * j as f64 / len as f64;
            twiddles.push(Complex::new(math::cos(angle), math::sin(angle)));
        }
        FftPlan { len, twiddles }
    }

    /// In-place Cooley–Tukey. `inverse` conjugates the twiddles and applies
    /// the 1/len normalization, so inverse(forward(x)) == x.
    pub fn transform(&self, data: &mut [Complex], inverse: bool) {
        let n = self.len;
        debug_assert_eq!(data.len(), n);
        // bit-reversal permutation
        let mut j = 0usize;
        for i in 0..n {
            if i < j {
                data.swap(i, j);
            }
            let mut mask = n >> 1;
            while mask > 0 && j & mask != 0 {
                j ^= mask;
                mask >>= 1;
            }
            j |= mask;
        }
        let mut width = 2;
        while width <= n {
            let half = width / 2;
            let stride = n / width;
            for start in (0..n).step_by(width) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w.im = -w.im;
                    }
                    let a = data[start + k];
                    let b = data[start + k + half].mul(w);
                    data[start + k] = a.add(b);
                    data[start + k + half] = a.sub(b);
                }
            }
            width <<= 1;
        }
        if inverse {
            let scale = 1.0 / n as f64;
            for v in data.iter_mut() {
                v.re *= scale;
                v.im *= scale;
            }
        }
    }
}

/// In-place 3-D transform of an n^3 cube stored row-major (x fastest).
pub fn fft3_inplace(data: &mut [Complex], n: usize, inverse: bool) {
    debug_assert_eq!(data.len(), n * n * n);
    let plan = FftPlan::new(n);
    let mut line = vec![Complex::ZERO; n];
    // x lines: contiguous
    for chunk in data.chunks_mut(n) {
        plan.transform(chunk, inverse);
    }
    // y lines
    for iz in 0..n {
        for ix in 0..n {
            for iy in 0..n {
                line[iy] = data[(iz * n + iy) * n + ix];
            }
            plan.transform(&mut line, inverse);
            for iy in 0..n {
                data[(iz * n + iy) * n + ix] = line[iy];
            }
        }
    }
    // z lines
    for iy in 0..n {
        for ix in 0..n {
            for iz in 0..n {
                line[iz] = data[(iz * n + iy) * n + ix];
            }
            plan.transform(&mut line, inverse);
            for iz in 0..n {
                data[(iz * n + iy) * n + ix] = line[iz];
            }
        }
    }
}

/// Signed integer mode index for FFT bin i of an n-point transform:
/// 0, 1, ..., n/2, -(n/2 - 1), ..., -1.
#[inline]
pub fn mode_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
