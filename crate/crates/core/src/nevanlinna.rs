//! Value-distribution layer for holomorphic curves on disks: proximity,
//! counting, and characteristic functions, the area-integral (geometric)
//! characteristic, the constant relating the two, and the detection of
//! moderate (logarithmic) characteristic growth from radius samples.

use num_complex::Complex64;

use crate::auxpoly::eisenstein_f64_coeffs;
use crate::diskgeom::{char_from_density, DiskForm};
use crate::error::Error;
use crate::quad::CPoly;

/// A holomorphic curve into projective space, given by polynomial (or long
/// truncated power-series) coordinate functions (φ_0 : … : φ_n) with no
/// common zeros; φ_0 is the distinguished hyperplane coordinate.
#[derive(Clone)]
pub struct MeroCurve {
    coords: Vec<CPoly>,
}

impl MeroCurve {
    pub fn new(coords: Vec<CPoly>) -> Result<Self, Error> {
        if coords.len() < 2 {
            return Err(Error::InvalidArgument(
                "curve needs at least two coordinates".into(),
            ));
        }
        if coords[0].is_zero() {
            return Err(Error::InvalidArgument(
                "distinguished coordinate is identically zero".into(),
            ));
        }
        Ok(MeroCurve { coords })
    }

    /// The curve (1 : p) in the projective line.
    pub fn from_plane(p: CPoly) -> Self {
        MeroCurve {
            coords: vec![CPoly::from_real(&[1.0]), p],
        }
    }

    /// The modular curve q ↦ (1 : q : E₂ : E₄ : E₆) on the unit disk,
    /// with the Eisenstein q-expansions truncated to `nterms` terms.
    pub fn modular_unit_disk(nterms: usize) -> Result<Self, Error> {
        let mut coords = vec![CPoly::from_real(&[1.0]), CPoly::from_real(&[0.0, 1.0])];
        for w in [2u32, 4, 6] {
            coords.push(CPoly::from_real(&eisenstein_f64_coeffs(w, nterms)));
        }
        Ok(MeroCurve { coords })
    }

    pub fn coords(&self) -> &[CPoly] {
        &self.coords
    }

    /// Euclidean norm ‖φ(z)‖.
    pub fn norm_at(&self, z: Complex64) -> f64 {
        self.coords
            .iter()
            .map(|p| p.eval(z).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Vanishing order ℓ and leading Taylor coefficient c_ℓ of φ_0 at the
    /// origin.
    pub fn leading(&self) -> (usize, Complex64) {
        let p = &self.coords[0];
        let scale = p
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let l = p.order_at_zero(1e-12 * scale);
        (l, p.coeffs()[l.min(p.degree())])
    }
}

/// Values of p at the K-th roots of unity scaled by r, by an FFT of the
/// radius-scaled coefficients (indices folded mod K, which is exact on the
/// sample grid). O(K log K) independent of the degree.
fn eval_on_circle(p: &CPoly, r: f64, k: usize) -> Vec<Complex64> {
    let mut folded = vec![Complex64::new(0.0, 0.0); k];
    let mut rn = 1.0f64;
    for (n, c) in p.coeffs().iter().enumerate() {
        folded[n % k] += c * rn;
        rn *= r;
    }
    // forward FFT computes sums with e^{-2pi i nj/K}; conjugate the input
    // and output to evaluate at e^{+2pi i nj/K}
    for v in folded.iter_mut() {
        *v = v.conj();
    }
    rustfft::FftPlanner::new()
        .plan_fft_forward(k)
        .process(&mut folded);
    for v in folded.iter_mut() {
        *v = v.conj();
    }
    folded
}

/// Mean over the circle |z| = r of a pointwise function of the coordinate
/// values, with trapezoid doubling on an FFT sample grid.
fn curve_circle_mean<F: Fn(&[Complex64]) -> f64>(
    c: &MeroCurve,
    r: f64,
    tol: f64,
    f: F,
) -> Result<f64, Error> {
    let ncoords = c.coords().len();
    let mut k = 256usize;
    let mean_at = |k: usize| -> f64 {
        let samples: Vec<Vec<Complex64>> =
            c.coords().iter().map(|p| eval_on_circle(p, r, k)).collect();
        let mut point = vec![Complex64::new(0.0, 0.0); ncoords];
        let mut s = 0.0;
        for j in 0..k {
            for (i, col) in samples.iter().enumerate() {
                point[i] = col[j];
            }
            s += f(&point);
        }
        s / k as f64
    };
    let mut prev = mean_at(k);
    loop {
        k *= 2;
        if k > (1 << 22) {
            return Err(Error::QuadratureNonConvergence { achieved: tol });
        }
        let cur = mean_at(k);
        if (cur - prev).abs() <= tol {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// Proximity function m(r) = mean over |z| = r of log(‖φ(z)‖ / |φ_0(z)|).
/// Nonnegative by Cauchy–Schwarz.
pub fn proximity(c: &MeroCurve, r: f64, tol: f64) -> Result<f64, Error> {
    curve_circle_mean(c, r, tol, |vals| {
        let norm = vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        (norm / vals[0].norm()).ln()
    })
}

/// Counting function of the zeros of φ_0 in |z| < r, computed without root
/// finding: N(r) = mean log|φ_0| − log|c_ℓ| (the Jensen formula, with the
/// origin's contribution ℓ·log r included).
pub fn counting_jensen(c: &MeroCurve, r: f64, tol: f64) -> Result<f64, Error> {
    let mean = curve_circle_mean(c, r, tol, |vals| vals[0].norm().ln())?;
    let (_, cl) = c.leading();
    Ok(mean - cl.norm().ln())
}

/// Counting function by explicit zeros: Σ log(r/|z_j|) over roots of φ_0
/// in the punctured disk plus ℓ·log r. Cross-checks [`counting_jensen`]
/// for honest polynomial coordinates.
pub fn counting_zero_sum(c: &MeroCurve, r: f64) -> Result<f64, Error> {
    let (l, _) = c.leading();
    let roots = c.coords()[0].roots(1e-8)?;
    let mut n = l as f64 * r.ln();
    let mut at_origin = 0usize;
    let mut sorted = roots;
    sorted.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    for z in sorted {
        if at_origin < l {
            at_origin += 1;
            continue;
        }
        if z.norm() < r {
            n += (r / z.norm()).ln();
        }
    }
    Ok(n)
}

/// Nevanlinna characteristic T(r) = m(r) + N(r) = mean log‖φ‖ − log|c_ℓ|.
pub fn characteristic(c: &MeroCurve, r: f64, tol: f64) -> Result<f64, Error> {
    let mean = curve_circle_mean(c, r, tol, |vals| {
        0.5 * vals.iter().map(|v| v.norm_sqr()).sum::<f64>().ln()
    })?;
    let (_, cl) = c.leading();
    Ok(mean - cl.norm().ln())
}

/// Area-integral characteristic: the pulled-back Fubini–Study curvature
/// form integrated against the Green kernel log(r/|z|).
pub fn characteristic_geometric(c: &MeroCurve, r: f64, tol: f64) -> Result<f64, Error> {
    let form = DiskForm::FsCurvature {
        map: c.coords().to_vec(),
    };
    Ok(char_from_density(&form, Complex64::new(0.0, 0.0), r, tol)?.0)
}

/// The r-independent constant T(r) − T_geom(r) = log‖φ(0)‖ − log|c_ℓ|.
/// Zero for the curve (1 : z) and, more generally, whenever φ_0(0) is the
/// only nonvanishing coordinate at the origin with |φ_0(0)| = 1.
pub fn first_main_constant(c: &MeroCurve) -> f64 {
    let (_, cl) = c.leading();
    c.norm_at(Complex64::new(0.0, 0.0)).ln() - cl.norm().ln()
}

/// Characteristic samples along increasing radii: T per radius, with the
/// proximity/counting split and per-sample tolerance when produced by
/// [`char_nevanlinna`] (both empty for the geometric characteristic).
#[derive(Debug, Clone)]
pub struct CharSamples {
    pub radii: Vec<f64>,
    pub t: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    pub tol: Vec<f64>,
}

/// Characteristic samples T = m + N over a radius grid.
pub fn char_nevanlinna(c: &MeroCurve, grid: &[f64], tol: f64) -> Result<CharSamples, Error> {
    let mut out = CharSamples {
        radii: grid.to_vec(),
        t: Vec::new(),
        m: Vec::new(),
        n: Vec::new(),
        tol: vec![tol; grid.len()],
    };
    for &r in grid {
        let m = proximity(c, r, tol)?;
        let n = counting_jensen(c, r, tol)?;
        out.m.push(m);
        out.n.push(n);
        out.t.push(m + n);
    }
    Ok(out)
}

/// Geometric characteristic samples over a radius grid.
pub fn char_geometric(c: &MeroCurve, grid: &[f64], tol: f64) -> Result<CharSamples, Error> {
    let mut out = CharSamples {
        radii: grid.to_vec(),
        t: Vec::new(),
        m: Vec::new(),
        n: Vec::new(),
        tol: vec![tol; grid.len()],
    };
    for &r in grid {
        out.t.push(characteristic_geometric(c, r, tol)?);
    }
    Ok(out)
}

/// Verdict of the moderate-growth test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthVerdict {
    /// T(r) ≈ a + b·log 1/(1 − r/R) on the tail.
    Moderate,
    /// Tail quotients still increasing beyond the tolerance.
    NotModerate,
}

/// Result of fitting T(r) against log 1/(1 − r/R) on the tail r/R ≥ 0.9.
#[derive(Debug, Clone)]
pub struct ModerateEstimate {
    /// Least-squares slope of T against x = log 1/(1 − r/R) on the tail.
    pub b_hat: f64,
    /// Least-squares intercept.
    pub a_hat: f64,
    /// Largest tail quotient T/x (the sampled growth quotient).
    pub max_tail_quotient: f64,
    /// Tail quotients T/x in radius order.
    pub tail_quotients: Vec<f64>,
    /// (max − min)/max of the tail quotients.
    pub quotient_variation: f64,
    pub verdict: GrowthVerdict,
}

/// Detects moderate characteristic growth: fits the tail samples
/// (r/R ≥ 0.9, at least 5 of them) by least squares against
/// x = log 1/(1 − r/R) and declares the growth moderate when the
/// quotients T/x are nonincreasing or vary by at most 5%.
pub fn moderate_estimate(samples: &CharSamples, big_r: f64) -> Result<ModerateEstimate, Error> {
    if samples.radii.len() != samples.t.len() {
        return Err(Error::InvalidArgument("sample length mismatch".into()));
    }
    let mut xs = Vec::new();
    let mut ts = Vec::new();
    for (&r, &t) in samples.radii.iter().zip(&samples.t) {
        if !(r > 0.0 && r < big_r) {
            return Err(Error::InvalidArgument("radius outside the disk".into()));
        }
        if r / big_r >= 0.9 {
            xs.push((1.0 / (1.0 - r / big_r)).ln());
            ts.push(t);
        }
    }
    if xs.len() < 5 {
        return Err(Error::InvalidArgument(
            "need at least 5 tail samples with r/R >= 0.9".into(),
        ));
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let st: f64 = ts.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxt: f64 = xs.iter().zip(&ts).map(|(x, t)| x * t).sum();
    let b_hat = (n * sxt - sx * st) / (n * sxx - sx * sx);
    let a_hat = (st - b_hat * sx) / n;

    let quotients: Vec<f64> = xs.iter().zip(&ts).map(|(x, t)| t / x).collect();
    let qmax = quotients.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let qmin = quotients.iter().cloned().fold(f64::INFINITY, f64::min);
    let variation = if qmax != 0.0 {
        (qmax - qmin) / qmax.abs()
    } else {
        0.0
    };
    let nonincreasing = quotients.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let verdict = if nonincreasing || variation <= 0.05 {
        GrowthVerdict::Moderate
    } else {
        GrowthVerdict::NotModerate
    };
    Ok(ModerateEstimate {
        b_hat,
        a_hat,
        max_tail_quotient: qmax,
        tail_quotients: quotients,
        quotient_variation: variation,
        verdict,
    })
}
