//! Logarithmic Mahler measure of multivariate polynomials on the torus and
//! its comparison against sampled sup norms on the sphere.

use num_complex::Complex64;

use crate::error::Error;
use crate::polyops::{eval_f64_terms, fubini_sup_refined, MPoly};

/// Logarithmic Mahler measure
/// m(P) = ∫_{Tⁿ} log|P(e^{iθ₁}, …, e^{iθₙ})| dθ/(2π)ⁿ.
///
/// Homogeneous input is dehomogenized at the first variable, which leaves
/// the measure unchanged (|X₀| = 1 on the torus). Each axis uses the
/// midpoint-shifted trapezoid rule with an even number of nodes (midpoints
/// avoid zeros pinned at angle π, such as 1 + z), doubled until two
/// Richardson extrapolants 2·v(2K) − v(K) agree within `tol`.
pub fn mahler_log(p: &MPoly, tol: f64) -> Result<f64, Error> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    // dehomogenize: drop the first variable when the polynomial is
    // homogeneous and actually uses it
    let terms: Vec<(Vec<u32>, f64)> = if p.homogeneous_degree().is_some() && p.num_vars() >= 2 {
        p.to_f64_terms()
            .into_iter()
            .map(|(e, c)| (e[1..].to_vec(), c))
            .collect()
    } else {
        p.to_f64_terms()
    };
    let dims = terms.first().map(|(e, _)| e.len()).unwrap_or(0);
    if dims == 0 {
        // constant polynomial
        return Ok(terms.iter().map(|(_, c)| c).sum::<f64>().abs().ln());
    }
    if dims > 3 {
        return Err(Error::SizeLimit(
            "torus quadrature supports at most 3 free variables".into(),
        ));
    }

    let grid_value = |k: usize| -> f64 {
        let mut sum = 0.0;
        let mut idx = vec![0usize; dims];
        let node = |j: usize| -> Complex64 {
            Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * (j as f64 + 0.5) / k as f64,
            )
        };
        loop {
            let z: Vec<Complex64> = idx.iter().map(|&j| node(j)).collect();
            let v = eval_f64_terms(&terms, &z).norm();
            sum += v.max(1e-300).ln();
            // odometer
            let mut carry = 0;
            while carry < dims {
                idx[carry] += 1;
                if idx[carry] < k {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
            }
            if carry == dims {
                break;
            }
        }
        sum / (k as f64).powi(dims as i32)
    };

    let k_cap = match dims {
        1 => 1 << 17,
        2 => 1 << 12,
        _ => 1 << 9,
    };
    let mut k = 16usize;
    let mut v1 = grid_value(k);
    let mut v2 = grid_value(2 * k);
    let mut rich_prev = 2.0 * v2 - v1;
    loop {
        k *= 2;
        if 2 * k > k_cap {
            return Err(Error::QuadratureNonConvergence { achieved: tol });
        }
        v1 = v2;
        v2 = grid_value(2 * k);
        let rich = 2.0 * v2 - v1;
        if (rich - rich_prev).abs() <= tol {
            return Ok(rich);
        }
        rich_prev = rich;
    }
}

/// Comparison of the Mahler measure against the sampled sup norm on the
/// sphere: for homogeneous P of degree d in n + 1 variables,
///
///   m(P) ≤ log⁺ sup_{S} |P| + (n + 1)·d/2.
#[derive(Debug, Clone)]
pub struct MahlerCheck {
    pub mahler: f64,
    pub log_sup_sphere: f64,
    /// Sampling margin added to the sup estimate before comparison.
    pub margin: f64,
    /// Right-hand side log⁺ sup + (n+1)·d/2 plus a fixed 1e−6 padding.
    pub bound: f64,
    pub ok: bool,
}

/// Evaluates both sides of the sphere/torus comparison with the sampled
/// sup padded by its refinement margin and a fixed 1e−6 tolerance.
/// Supports n ≤ 2 (at most three variables) and d ≤ 6.
pub fn mahler_height_check(p: &MPoly, samples: usize, tol: f64) -> Result<MahlerCheck, Error> {
    let d = p.homogeneous_degree().ok_or(Error::NotHomogeneous)? as f64;
    let n = (p.num_vars() - 1) as f64;
    if n > 2.0 || d > 6.0 {
        return Err(Error::SizeLimit(
            "height comparison supports n <= 2, d <= 6".into(),
        ));
    }
    let mahler = mahler_log(p, tol)?;
    let (sup, margin) = fubini_sup_refined(p, samples)?;
    let log_sup = (sup + margin).ln().max(0.0);
    let bound = log_sup + 0.5 * (n + 1.0) * d + 1e-6;
    Ok(MahlerCheck {
        mahler,
        log_sup_sphere: log_sup,
        margin,
        bound,
        ok: mahler <= bound,
    })
}
