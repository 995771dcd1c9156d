//! Numerical quadrature and complex polynomial utilities used by the disk
//! geometry and characteristic-function layers: periodic trapezoid means
//! with doubling, adaptive Gauss–Legendre panels, and certified polynomial
//! root finding.

use num_complex::Complex64;

use crate::error::Error;

/// Mean of a 2π-periodic function over the circle by trapezoid doubling:
/// starts at `start` equally spaced angles and doubles until two successive
/// levels agree within `tol·(1 + |mean|)` (absolute for small values,
/// relative for large ones, so boundary blow-ups stay resolvable in f64)
/// or the sample budget is hit.
pub fn circle_mean<F: FnMut(f64) -> f64>(
    mut f: F,
    start: usize,
    tol: f64,
    max_points: usize,
) -> Result<(f64, f64), Error> {
    let mut k = start.max(4);
    let mut prev = trapezoid_mean(&mut f, k);
    loop {
        k *= 2;
        if k > max_points {
            return Err(Error::QuadratureNonConvergence { achieved: tol });
        }
        let cur = trapezoid_mean(&mut f, k);
        let err = (cur - prev).abs();
        if err <= tol * (1.0 + cur.abs()) {
            return Ok((cur, err));
        }
        prev = cur;
    }
}

fn trapezoid_mean<F: FnMut(f64) -> f64>(f: &mut F, k: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..k {
        s += f(2.0 * std::f64::consts::PI * i as f64 / k as f64);
    }
    s / k as f64
}

/// 16-point Gauss–Legendre nodes and weights on [−1, 1].
const GL_NODES: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_WEIGHTS: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

fn gl16<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..8 {
        let x = h * GL_NODES[i];
        s += GL_WEIGHTS[i] * (f(c + x) + f(c - x));
    }
    s * h
}

/// Adaptive Gauss–Legendre integral of f over [a, b]: each panel is
/// accepted when a split agrees with the single panel within the local
/// tolerance share. Returns (value, estimated error).
pub fn adaptive_integral<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), Error> {
    let mut total = 0.0;
    let mut err_total = 0.0;
    // explicit stack of (a, b, whole, depth)
    let whole = gl16(&mut f, a, b);
    let mut stack = vec![(a, b, whole, 0u32)];
    while let Some((lo, hi, w, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl16(&mut f, lo, mid);
        let right = gl16(&mut f, mid, hi);
        let err = (left + right - w).abs();
        let share = tol * (hi - lo) / (b - a);
        if err <= share.max(1e-300) || depth >= 40 {
            if depth >= 40 && err > share {
                return Err(Error::QuadratureNonConvergence { achieved: tol });
            }
            total += left + right;
            err_total += err;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok((total, err_total))
}

/// Complex polynomial with f64 coefficients, constant term first.
#[derive(Debug, Clone)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    /// Trims trailing (leading-degree) zeros below 1e-300.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut c = coeffs;
        while c.len() > 1 && c.last().unwrap().norm() < 1e-300 {
            c.pop();
        }
        CPoly { coeffs: c }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        CPoly::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        CPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }

    /// Coefficients of p(z + a) (synthetic Taylor shift).
    pub fn shift(&self, a: Complex64) -> CPoly {
        let n = self.coeffs.len();
        let mut c = self.coeffs.clone();
        // repeated synthetic division by (z - (-a)) accumulates the shift
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let (lo, hi) = c.split_at_mut(j + 1);
                lo[j] = lo[j] + a * hi[0];
                let _ = hi;
            }
        }
        CPoly { coeffs: c }
    }

    /// Multiplicity of the root at the origin (coefficients below `eps`
    /// count as zero).
    pub fn order_at_zero(&self, eps: f64) -> usize {
        self.coeffs
            .iter()
            .position(|c| c.norm() > eps)
            .unwrap_or(self.coeffs.len())
    }

    /// All roots by Durand–Kerner with Newton polish; each returned root r
    /// is certified via |p(r)| ≤ `residual_tol` · scale, where scale is the
    /// coefficient magnitude at |r|.
    pub fn roots(&self, residual_tol: f64) -> Result<Vec<Complex64>, Error> {
        let n = self.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        // monic normalization
        let lead = self.leading();
        let monic: Vec<Complex64> = self.coeffs.iter().map(|c| c / lead).collect();
        // Cauchy radius bound
        let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        // Durand–Kerner from a scaled non-symmetric starting configuration
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.35;
                Complex64::from_polar(0.5 * radius * (0.8 + 0.3 * (k as f64 / n as f64)), ang)
            })
            .collect();
        let eval_monic = |w: Complex64| -> Complex64 {
            let mut acc = Complex64::new(1.0, 0.0);
            for c in monic[..n].iter().rev() {
                acc = acc * w + c;
            }
            acc
        };
        for _ in 0..400 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        denom *= z[i] - z[j];
                    }
                }
                if denom.norm() == 0.0 {
                    denom = Complex64::new(1e-20, 0.0);
                }
                let step = eval_monic(z[i]) / denom;
                z[i] -= step;
                moved = moved.max(step.norm());
            }
            if moved < 1e-14 * radius.max(1.0) {
                break;
            }
        }
        // Newton polish on the original polynomial
        let dp = self.derivative();
        for zi in z.iter_mut() {
            for _ in 0..8 {
                let pv = self.eval(*zi);
                let dv = dp.eval(*zi);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = pv / dv;
                *zi -= step;
                if step.norm() < 1e-16 * (zi.norm() + 1.0) {
                    break;
                }
            }
        }
        // certify residuals against an absolute backward error relative to
        // the coefficient size at scale max(1, |root|); a purely relative
        // scale would vanish at roots of the origin and reject them
        let cmax = self.coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        for zi in &z {
            let rho = zi.norm().max(1.0);
            let scale: f64 = (0..self.coeffs.len())
                .map(|k| cmax * rho.powi(k as i32))
                .sum::<f64>()
                .max(1e-300);
            if self.eval(*zi).norm() > residual_tol * scale {
                return Err(Error::RootCertification {
                    residual: self.eval(*zi).norm() / scale,
                });
            }
        }
        Ok(z)
    }
}
