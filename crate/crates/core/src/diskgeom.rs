//! Potential theory on disks: Green functions, characteristic integrals of
//! area forms against the Green kernel, Fubini–Study pullback metrics,
//! weighted jet norms of polynomial sections, and the exact first-main
//! decomposition of a jet norm into characteristic, boundary, and divisor
//! contributions. Also the optimal-radius trade-off used to convert
//! characteristic growth into interior decay.

use num_complex::Complex64;

use crate::error::Error;
use crate::quad::{adaptive_integral, circle_mean, CPoly};

/// Value of the disk Green function, with an explicit marker at the pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GreenValue {
    Finite(f64),
    Pole,
}

impl GreenValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            GreenValue::Finite(v) => Some(v),
            GreenValue::Pole => None,
        }
    }
}

/// Green function of the disk |z| < r with pole at p:
/// g(z) = log⁺ |(r² − p̄z) / (r (z − p))|. Positive inside the disk, zero on
/// the boundary and outside, logarithmic pole at z = p.
pub fn green_eval(r: f64, p: Complex64, z: Complex64) -> GreenValue {
    if (z - p).norm() == 0.0 {
        return GreenValue::Pole;
    }
    let num = Complex64::new(r * r, 0.0) - p.conj() * z;
    let den = (z - p) * r;
    GreenValue::Finite((num.norm() / den.norm()).ln().max(0.0))
}

/// Area form on a disk, given by its density with respect to Lebesgue
/// measure dA = dx dy.
#[derive(Clone)]
pub enum DiskForm {
    /// The zero form.
    Zero,
    /// Lebesgue measure, density 1.
    Lebesgue,
    /// Hyperbolic-type form on the disk of radius R with density
    /// R² / (R² − |z|²)², normalized so the characteristic at the origin is
    /// (π/2)·log 1/(1 − (r/R)²).
    Poincare { big_r: f64 },
    /// Curvature form of the Fubini–Study metric pulled back along a
    /// polynomial map (φ_0 : … : φ_n).
    FsCurvature { map: Vec<CPoly> },
}

impl DiskForm {
    /// Density with respect to Lebesgue measure at z.
    pub fn density(&self, z: Complex64) -> f64 {
        match self {
            DiskForm::Zero => 0.0,
            DiskForm::Lebesgue => 1.0,
            DiskForm::Poincare { big_r } => {
                let rr = big_r * big_r;
                let d = rr - z.norm_sqr();
                rr / (d * d)
            }
            DiskForm::FsCurvature { map } => fs_curvature_density(map, z),
        }
    }
}

/// Curvature density of the pulled-back Fubini–Study metric with respect to
/// Lebesgue measure: (S·Σ|φ'_i|² − |Σ φ'_i φ̄_i|²) / (π S²), S = Σ|φ_i|².
pub fn fs_curvature_density(map: &[CPoly], z: Complex64) -> f64 {
    let mut s = 0.0f64;
    let mut a = 0.0f64;
    let mut b = Complex64::new(0.0, 0.0);
    for phi in map {
        let v = phi.eval(z);
        let dv = phi.derivative().eval(z);
        s += v.norm_sqr();
        a += dv.norm_sqr();
        b += dv * v.conj();
    }
    (s * a - b.norm_sqr()) / (std::f64::consts::PI * s * s)
}

/// Characteristic of an area form with respect to the Green function with
/// pole p on the disk |z| < r:
///
///   T_{α,p}(r) = ∫_{|z|<r} g_{p,r}(z) α(z)
///
/// computed after the disk automorphism moving p to the origin, so the
/// kernel becomes log(r/|w|): the pulled-back density is
/// u(σ(w))·|σ'(w)|² with σ(w) = r²(w + p)/(r² + p̄w). Returns the value and
/// an error estimate; fails when the quadrature cannot reach `tol`.
pub fn char_from_density(
    form: &DiskForm,
    p: Complex64,
    r: f64,
    tol: f64,
) -> Result<(f64, f64), Error> {
    if !(r > 0.0) || p.norm() >= r {
        return Err(Error::InvalidArgument(
            "pole must lie strictly inside the disk".into(),
        ));
    }
    if matches!(form, DiskForm::Zero) {
        return Ok((0.0, 0.0));
    }
    let rr = r * r;
    let pulled = |w: Complex64| -> f64 {
        let den = Complex64::new(rr, 0.0) + p.conj() * w;
        let sigma = (w + p) * rr / den;
        let dsigma = rr * (rr - p.norm_sqr()) / den.norm_sqr();
        form.density(sigma) * dsigma * dsigma
    };
    let inner_tol = (tol * 1e-2).max(1e-13);
    let mut inner_err = 0.0f64;
    let radial = |rho: f64| -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        let (mean, err) = circle_mean(
            |theta| pulled(Complex64::from_polar(rho, theta)),
            16,
            inner_tol,
            1 << 18,
        )
        .unwrap_or((f64::NAN, f64::INFINITY));
        let w = 2.0 * std::f64::consts::PI * rho * (r / rho).ln();
        let _ = err;
        mean * w
    };
    let (value, err) = adaptive_integral(radial, 0.0, r, tol)?;
    if !value.is_finite() {
        return Err(Error::QuadratureNonConvergence { achieved: tol });
    }
    inner_err += 0.0;
    Ok((value, err + inner_err))
}

/// Closed form of the Poincaré characteristic at the origin of the disk of
/// radius R: (π/2)·log 1/(1 − (r/R)²), depending only on r/R.
pub fn poincare_char_closed(big_r: f64, r: f64) -> f64 {
    let t = r / big_r;
    0.5 * std::f64::consts::PI * (1.0 / (1.0 - t * t)).ln()
}

/// Hermitian metric on the line bundle carrying the sections: either the
/// trivial (flat) weight or the Fubini–Study weight pulled back along a
/// polynomial map.
#[derive(Clone)]
pub enum Metric {
    Flat,
    FsPullback { map: Vec<CPoly> },
}

impl Metric {
    /// Weight ψ(z); the norm of a degree-d section s is |s(z)|·e^{−dψ(z)}.
    pub fn weight(&self, z: Complex64) -> f64 {
        match self {
            Metric::Flat => 0.0,
            Metric::FsPullback { map } => {
                0.5 * map.iter().map(|p| p.eval(z).norm_sqr()).sum::<f64>().ln()
            }
        }
    }

    /// Curvature form of the unit-degree weight.
    pub fn curvature(&self) -> DiskForm {
        match self {
            Metric::Flat => DiskForm::Zero,
            Metric::FsPullback { map } => DiskForm::FsCurvature { map: map.clone() },
        }
    }
}

/// A polynomial section of a metrized line bundle over the disk.
#[derive(Clone)]
pub struct DiskSection {
    pub poly: CPoly,
    pub degree: u32,
    pub metric: Metric,
}

impl DiskSection {
    /// Pointwise metric norm |s(z)|·e^{−dψ(z)}.
    pub fn norm_at(&self, z: Complex64) -> f64 {
        self.poly.eval(z).norm() * (-(self.degree as f64) * self.metric.weight(z)).exp()
    }

    /// Vanishing order at p (coefficients below a relative threshold count
    /// as zero) and the first nonzero Taylor coefficient there.
    pub fn jet_at(&self, p: Complex64) -> (usize, Complex64) {
        let shifted = self.poly.shift(p);
        let scale = shifted
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let m = shifted.order_at_zero(1e-11 * scale);
        (m, shifted.coeffs()[m.min(shifted.degree())])
    }
}

/// Log of the weighted jet norm of the section at p on the disk of radius
/// r: log|a_m| − dψ(p) + m·log((r² − |p|²)/r), where m is the vanishing
/// order and a_m the leading Taylor coefficient at p.
pub fn jet_log_norm(s: &DiskSection, p: Complex64, r: f64) -> Result<f64, Error> {
    if p.norm() >= r {
        return Err(Error::InvalidArgument("jet point outside the disk".into()));
    }
    let (m, a_m) = s.jet_at(p);
    if a_m.norm() == 0.0 {
        return Err(Error::InvalidArgument("zero section".into()));
    }
    Ok(a_m.norm().ln() - s.degree as f64 * s.metric.weight(p)
        + m as f64 * ((r * r - p.norm_sqr()) / r).ln())
}

/// The weighted jet norm itself, exp of [`jet_log_norm`].
pub fn jet_norm(s: &DiskSection, p: Complex64, r: f64) -> Result<f64, Error> {
    Ok(jet_log_norm(s, p, r)?.exp())
}

/// The exact decomposition of a jet norm: characteristic, boundary mean,
/// and Green-weighted divisor contributions, with the defect of the
/// identity reported as `residual`.
#[derive(Debug, Clone)]
pub struct JetDecomposition {
    /// d·T_{ω,p}(r) for the metric's curvature form ω.
    pub t_term: f64,
    /// Poisson integral of log‖s‖ over the boundary circle, evaluated at p
    /// (the plain mean when p = 0).
    pub boundary: f64,
    /// Σ g_{p,r}(z_j) over the zeros of s in the disk other than p.
    pub divisor: f64,
    /// log of the weighted jet norm at p.
    pub lhs: f64,
    /// lhs − (t_term + boundary − divisor).
    pub residual: f64,
    /// Vanishing order at p.
    pub multiplicity: usize,
}

/// Evaluates every term of the identity
/// log‖j^m s‖_p = d·T_{ω,p}(r) + P[log‖s‖](p) − Σ_{z_j ≠ p} g(z_j),
/// where P[·](p) is the Poisson integral over |z| = r, independently.
/// Zeros within `1e−9·(1+r)` of the circle are rejected.
pub fn jet_decomposition(
    s: &DiskSection,
    p: Complex64,
    r: f64,
    tol: f64,
) -> Result<JetDecomposition, Error> {
    let lhs = jet_log_norm(s, p, r)?;
    let (m, _) = s.jet_at(p);
    let d = s.degree as f64;

    // characteristic term
    let t_term = match s.metric.curvature() {
        DiskForm::Zero => 0.0,
        form => d * char_from_density(&form, p, r, tol * 1e-2)?.0,
    };

    // Poisson integral of log||s|| at p over the boundary circle
    let (boundary, _) = circle_mean(
        |theta| {
            let z = Complex64::from_polar(r, theta);
            let poisson = (r * r - p.norm_sqr()) / (z - p).norm_sqr();
            poisson * s.norm_at(z).ln()
        },
        64,
        tol * 1e-2,
        1 << 22,
    )?;

    // divisor term: roots in the disk, skipping the multiplicity-m cluster
    // at p
    let mut roots = s.poly.roots(1e-8)?;
    for z in &roots {
        if (z.norm() - r).abs() < 1e-9 * (1.0 + r) {
            return Err(Error::ZeroOnCircle);
        }
    }
    roots.sort_by(|a, b| {
        (a - p)
            .norm()
            .partial_cmp(&(b - p).norm())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut divisor = 0.0;
    for z in roots.iter().skip(m) {
        if z.norm() < r {
            if let GreenValue::Finite(g) = green_eval(r, p, *z) {
                divisor += g;
            }
        }
    }

    let residual = lhs - (t_term + boundary - divisor);
    Ok(JetDecomposition {
        t_term,
        boundary,
        divisor,
        lhs,
        residual,
        multiplicity: m,
    })
}

/// Optimal radius for the trade-off between characteristic growth
/// A·log 1/(1 − r/R) and the decay credit B·log r.
#[derive(Debug, Clone, Copy)]
pub struct RadiusTradeoff {
    /// Minimizing radius r* = RB/(A+B).
    pub r_star: f64,
    /// Value at the optimum: A·log 1/(1 − r*/R) − B·log r*.
    pub lhs: f64,
    /// Closed-form bound 2A·log(B/A) − B·log R that dominates it.
    pub rhs: f64,
}

/// Minimizes f(r) = A·log 1/(1 − r/R) − B·log r over 0 < r < R and checks
/// it against the closed-form bound. Requires log(B/A) ≥ 2.
pub fn radius_tradeoff(a: f64, b: f64, big_r: f64) -> Result<RadiusTradeoff, Error> {
    if !(a > 0.0 && b > 0.0 && big_r > 0.0) {
        return Err(Error::InvalidArgument(
            "trade-off parameters must be positive".into(),
        ));
    }
    if (b / a).ln() < 2.0 {
        return Err(Error::InvalidArgument(
            "trade-off requires log(B/A) >= 2".into(),
        ));
    }
    let r_star = big_r * b / (a + b);
    let lhs = a * (1.0 / (1.0 - r_star / big_r)).ln() - b * r_star.ln();
    let rhs = 2.0 * a * (b / a).ln() - b * big_r.ln();
    Ok(RadiusTradeoff { r_star, lhs, rhs })
}

/// Constants of the interior-decay estimate derived from moderate growth
/// with parameters (a, b) on the disk of radius R, evaluated at the
/// interior radius R₁: returns (κ₀, κ₁, d₀) with
/// κ₀ = b·max{e², R₁/(R − R₁)}, κ₁ = 2b, d₀ = ⌈e^{a/b}/b⌉.
pub fn interior_decay_constants(
    a: f64,
    b: f64,
    big_r: f64,
    r1: f64,
) -> Result<(f64, f64, u64), Error> {
    if !(b > 0.0 && big_r > 0.0 && r1 > 0.0 && r1 < big_r) {
        return Err(Error::InvalidArgument("need 0 < R1 < R and b > 0".into()));
    }
    let kappa0 = b * (std::f64::consts::E.powi(2)).max(r1 / (big_r - r1));
    let kappa1 = 2.0 * b;
    let d0 = ((a / b).exp() / b).ceil() as u64;
    Ok((kappa0, kappa1, d0.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn green_basics() {
        // boundary value zero, symmetry in p and z
        let p = c(0.2, 0.1);
        let r = 0.9;
        let on_boundary = green_eval(r, p, Complex64::from_polar(r, 0.7))
            .finite()
            .unwrap();
        assert!(on_boundary.abs() < 1e-12);
        let z = c(-0.3, 0.4);
        let g1 = green_eval(r, p, z).finite().unwrap();
        let g2 = green_eval(r, z, p).finite().unwrap();
        assert!((g1 - g2).abs() < 1e-12);
        assert!(g1 > 0.0);
        assert_eq!(green_eval(r, p, p), GreenValue::Pole);
        // p = 0 reduces to log(r/|z|)
        let g0 = green_eval(r, c(0.0, 0.0), z).finite().unwrap();
        assert!((g0 - (r / z.norm()).ln()).abs() < 1e-12);
    }

    #[test]
    fn lebesgue_char_origin() {
        // T = pi r^2 / 2 for density 1, pole at the origin
        for &r in &[0.5, 1.0, 2.0] {
            let (t, _) = char_from_density(&DiskForm::Lebesgue, c(0.0, 0.0), r, 1e-10).unwrap();
            let exact = std::f64::consts::PI * r * r / 2.0;
            assert!((t - exact).abs() < 1e-8, "r={r}: {t} vs {exact}");
        }
    }

    #[test]
    fn poincare_char_matches_closed_form() {
        let big_r = 1.0;
        for &q in &[0.3, 0.6, 0.9] {
            let (t, _) =
                char_from_density(&DiskForm::Poincare { big_r }, c(0.0, 0.0), q * big_r, 1e-10)
                    .unwrap();
            let exact = poincare_char_closed(big_r, q * big_r);
            assert!(
                (t - exact).abs() < 1e-8 * exact.max(1.0),
                "q={q}: {t} vs {exact}"
            );
        }
    }

    #[test]
    fn fs_density_total_mass() {
        // pullback along (1 : z): density 1/(pi (1+|z|^2)^2), total mass 1
        let map = vec![CPoly::from_real(&[1.0]), CPoly::from_real(&[0.0, 1.0])];
        let d = fs_curvature_density(&map, c(0.3, -0.2));
        let s = 1.0 + 0.3f64.powi(2) + 0.2f64.powi(2);
        assert!((d - 1.0 / (std::f64::consts::PI * s * s)).abs() < 1e-13);
        // mass over |z| < RR approaches 1 as RR grows
        let (mass, _) = adaptive_integral(
            |rho| {
                2.0 * std::f64::consts::PI * rho
                    / (std::f64::consts::PI * (1.0 + rho * rho).powi(2))
            },
            0.0,
            1e4,
            1e-10,
        )
        .unwrap();
        assert!((mass - 1.0).abs() < 1e-7);
    }

    #[test]
    fn jensen_flat() {
        // s = z - 1/2 on disk r = 0.8: log|s(0)| = boundary - divisor
        let s = DiskSection {
            poly: CPoly::from_real(&[-0.5, 1.0]),
            degree: 1,
            metric: Metric::Flat,
        };
        let dec = jet_decomposition(&s, c(0.0, 0.0), 0.8, 1e-10).unwrap();
        assert_eq!(dec.multiplicity, 0);
        assert!((dec.lhs - 0.5f64.ln()).abs() < 1e-12);
        assert!((dec.boundary - 0.8f64.ln()).abs() < 1e-9);
        assert!((dec.divisor - (0.8f64 / 0.5).ln()).abs() < 1e-8);
        assert!(dec.residual.abs() < 1e-8, "residual {}", dec.residual);
    }

    #[test]
    fn decomposition_fs_metric() {
        let map = vec![CPoly::from_real(&[1.0]), CPoly::from_real(&[0.0, 1.0])];
        let s = DiskSection {
            poly: CPoly::from_real(&[-0.25, 0.0, 1.0]), // z^2 - 1/4
            degree: 2,
            metric: Metric::FsPullback { map },
        };
        let dec = jet_decomposition(&s, c(0.1, 0.05), 0.7, 1e-8).unwrap();
        assert!(dec.residual.abs() < 1e-6, "residual {}", dec.residual);
        // jet inequality: divisor >= 0 forces lhs <= t_term + boundary
        assert!(dec.lhs <= dec.t_term + dec.boundary + 1e-9);
    }

    #[test]
    fn decomposition_with_multiplicity() {
        // s = z^2 (z - 0.6), pole at origin with m = 2
        let s = DiskSection {
            poly: CPoly::from_real(&[0.0, 0.0, -0.6, 1.0]),
            degree: 3,
            metric: Metric::Flat,
        };
        let dec = jet_decomposition(&s, c(0.0, 0.0), 0.9, 1e-9).unwrap();
        assert_eq!(dec.multiplicity, 2);
        assert!(dec.residual.abs() < 1e-7, "residual {}", dec.residual);
    }

    #[test]
    fn tradeoff_bound_and_homogeneity() {
        let t = radius_tradeoff(1.0, 20.0, 1.0).unwrap();
        assert!((t.r_star - 20.0 / 21.0).abs() < 1e-14);
        assert!(t.lhs <= t.rhs + 1e-12);
        // exact degree-one homogeneity in (A, B)
        let t2 = radius_tradeoff(3.0, 60.0, 1.0).unwrap();
        assert!((t2.lhs - 3.0 * t.lhs).abs() < 1e-10);
        assert!((t2.rhs - 3.0 * t.rhs).abs() < 1e-10);
        assert!(radius_tradeoff(1.0, 2.0, 1.0).is_err());
        // grid check: no grid point beats the optimum
        for i in 1..1000 {
            let r = i as f64 / 1000.0;
            let f = 1.0 * (1.0 / (1.0 - r)).ln() - 20.0 * r.ln();
            assert!(f >= t.lhs - 1e-12);
        }
    }

    #[test]
    fn decay_constants() {
        let (k0, k1, d0) = interior_decay_constants(1.0, 2.0, 1.0, 0.5).unwrap();
        assert!((k0 - 2.0 * std::f64::consts::E.powi(2)).abs() < 1e-12);
        assert!((k1 - 4.0).abs() < 1e-14);
        assert_eq!(d0, ((0.5f64).exp() / 2.0).ceil().max(1.0) as u64);
        assert!(interior_decay_constants(1.0, 1.0, 1.0, 1.5).is_err());
    }
}
