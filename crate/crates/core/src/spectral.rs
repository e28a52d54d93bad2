//! Trigonometric interpolation on equispaced periodic grids.
//!
//! All routines treat `samples[k]` as the value at `t_k = 2*pi*k/N` and use
//! the symmetric interpolant in which the Nyquist mode contributes a cosine.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Fourier coefficients `c_k` with `f(t_j) = sum_k c_k e^{i k t_j}`, stored in
/// FFT order.
pub fn coefficients(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn synthesize(mut coeffs: Vec<Complex64>) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut coeffs);
    coeffs
}

/// Signed wavenumber of FFT slot `k`; the Nyquist slot reports `n/2`.
pub fn wavenumber(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// `order`-th derivative of the interpolant at the nodes.
pub fn derivative(samples: &[Complex64], order: u32) -> Vec<Complex64> {
    let n = samples.len();
    let mut c = coefficients(samples);
    for (k, ck) in c.iter_mut().enumerate() {
        if n % 2 == 0 && k == n / 2 {
            // the cosine Nyquist mode has zero odd derivatives at the nodes
            if order % 2 == 1 {
                *ck = Complex64::new(0.0, 0.0);
            } else {
                *ck *= (-((n / 2) as f64).powi(2)).powi(order as i32 / 2);
            }
            continue;
        }
        let m = wavenumber(k, n) as f64;
        *ck *= Complex64::new(0.0, m).powu(order);
    }
    synthesize(c)
}

/// Periodic conjugate function: `cos kt -> sin kt`, `sin kt -> -cos kt`.
pub fn conjugate(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let z: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut c = coefficients(&z);
    for (k, ck) in c.iter_mut().enumerate() {
        let m = wavenumber(k, n);
        if m == 0 || (n % 2 == 0 && k == n / 2) {
            *ck = Complex64::new(0.0, 0.0);
        } else {
            *ck *= Complex64::new(0.0, -(m.signum() as f64));
        }
    }
    synthesize(c).into_iter().map(|c| c.re).collect()
}

/// Precomputed interpolant that can be evaluated at arbitrary parameters.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    coeffs: Vec<Complex64>,
}

impl TrigInterpolant {
    pub fn new(samples: &[Complex64]) -> Self {
        Self {
            coeffs: coefficients(samples),
        }
    }

    pub fn from_real(samples: &[f64]) -> Self {
        let z: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(&z)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value and first two derivatives at parameter `t`.
    pub fn eval_with_derivatives(&self, t: f64) -> [Complex64; 3] {
        let n = self.coeffs.len();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, &ck) in self.coeffs.iter().enumerate() {
            if n % 2 == 0 && k == n / 2 {
                let m = (n / 2) as f64;
                out[0] += ck * (m * t).cos();
                out[1] += ck * (-m * (m * t).sin());
                out[2] += ck * (-m * m * (m * t).cos());
                continue;
            }
            let m = wavenumber(k, n) as f64;
            let e = Complex64::from_polar(1.0, m * t);
            out[0] += ck * e;
            out[1] += ck * e * Complex64::new(0.0, m);
            out[2] += ck * e * (-m * m);
        }
        out
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.eval_with_derivatives(t)[0]
    }

    /// Values on a grid `refine` times finer than the node grid.
    pub fn upsample(&self, refine: usize) -> Vec<Complex64> {
        let n = self.coeffs.len();
        let big = n * refine;
        let mut c = vec![Complex64::new(0.0, 0.0); big];
        for (k, &ck) in self.coeffs.iter().enumerate() {
            let m = wavenumber(k, n);
            if n % 2 == 0 && k == n / 2 {
                c[n / 2] += ck * 0.5;
                c[big - n / 2] += ck * 0.5;
                continue;
            }
            let slot = if m >= 0 { m as usize } else { (big as i64 + m) as usize };
            c[slot] = ck;
        }
        synthesize(c)
    }

    /// Largest coefficient magnitude in the upper half of the spectrum.
    pub fn tail(&self) -> f64 {
        let n = self.coeffs.len();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| wavenumber(*k, n).unsigned_abs() as usize >= n / 4)
            .fold(0.0, |m, (_, c)| m.max(c.norm()))
    }

    /// Ratio of the largest coefficient in the upper half of the spectrum to
    /// the largest coefficient overall; a cheap resolution indicator.
    pub fn tail_ratio(&self) -> f64 {
        let n = self.coeffs.len();
        let mut total = 0.0f64;
        let mut tail = 0.0f64;
        for (k, c) in self.coeffs.iter().enumerate() {
            let a = c.norm();
            total = total.max(a);
            if wavenumber(k, n).unsigned_abs() as usize >= n / 4 {
                tail = tail.max(a);
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }
}

/// Equispaced parameter of node `k` on an `n`-point grid.
pub fn node_parameter(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}
