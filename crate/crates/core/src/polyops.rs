//! Sparse exact multivariate polynomials, derivations along polynomial
//! vector fields, the iterated first-order operators attached to the
//! Ramanujan system, and coefficient/uniform norms on projective space.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::Error;
use crate::series::Q;
use crate::util::bigrational_to_f64;

/// Sparse multivariate polynomial over exact rationals.
///
/// Terms are keyed by exponent tuples of fixed length `num_vars`; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero(num_vars: usize) -> Self {
        MPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Q) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    /// The variable x_i.
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars);
        let mut e = vec![0u32; num_vars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Q) -> Self {
        let num_vars = exps.len();
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Build from a list of (exponents, coefficient) pairs, merging duplicates.
    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), num_vars, "exponent tuple length mismatch");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree when homogeneous, `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: u32 = e.iter().sum();
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        MPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// ∂/∂x_i.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Q::from(BigInt::from(e[i])));
        }
        out
    }

    /// Exact coefficient norms (‖·‖_∞, ‖·‖_1).
    pub fn poly_norms(&self) -> (Q, Q) {
        let mut sup = Q::zero();
        let mut l1 = Q::zero();
        for c in self.terms.values() {
            let a = c.abs();
            if a > sup {
                sup = a.clone();
            }
            l1 += a;
        }
        (sup, l1)
    }

    /// Terms with f64 coefficients, for repeated numeric evaluation.
    pub fn to_f64_terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), bigrational_to_f64(c)))
            .collect()
    }

    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.num_vars);
        eval_f64_terms(&self.to_f64_terms(), z)
    }
}

/// Evaluate pre-converted terms at a complex point.
pub fn eval_f64_terms(terms: &[(Vec<u32>, f64)], z: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in terms {
        let mut t = Complex64::new(*c, 0.0);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                t *= z[i].powu(k);
            }
        }
        acc += t;
    }
    acc
}

/// Polynomial vector field v = Σ_i P_i ∂/∂x_i.
///
/// When `pole_degree_hint` is set to k the field operates in graded mode:
/// every component must be homogeneous of degree k+2, and the derivation
/// raises degrees by exactly k+1.
#[derive(Debug, Clone)]
pub struct VectorField {
    components: Vec<MPoly>,
    pole_degree_hint: Option<u32>,
}

impl VectorField {
    pub fn new(components: Vec<MPoly>) -> Result<Self, Error> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("empty vector field".into()));
        }
        let n = components[0].num_vars();
        for c in &components {
            if c.num_vars() != n {
                return Err(Error::ArityMismatch {
                    left: n,
                    right: c.num_vars(),
                });
            }
        }
        if components.len() != n {
            return Err(Error::ArityMismatch {
                left: components.len(),
                right: n,
            });
        }
        Ok(VectorField {
            components,
            pole_degree_hint: None,
        })
    }

    /// Graded mode: all components homogeneous of degree k+2.
    pub fn new_graded(components: Vec<MPoly>, k: u32) -> Result<Self, Error> {
        let vf = Self::new(components)?;
        for c in &vf.components {
            if !c.is_zero() {
                let d = c.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
                if d != k + 2 {
                    return Err(Error::DegreeMismatch {
                        expected: k + 2,
                        got: d,
                    });
                }
            }
        }
        Ok(VectorField {
            pole_degree_hint: Some(k),
            ..vf
        })
    }

    pub fn components(&self) -> &[MPoly] {
        &self.components
    }

    pub fn num_vars(&self) -> usize {
        self.components.len()
    }

    pub fn pole_degree_hint(&self) -> Option<u32> {
        self.pole_degree_hint
    }

    /// max_i ‖v_i‖_∞, exact.
    pub fn max_component_norm(&self) -> Q {
        let mut m = Q::zero();
        for c in &self.components {
            let (sup, _) = c.poly_norms();
            if sup > m {
                m = sup;
            }
        }
        m
    }
}

/// ∂_v P = Σ_i v_i · ∂P/∂x_i, exact.
pub fn derive_along(v: &VectorField, p: &MPoly) -> Result<MPoly, Error> {
    if v.num_vars() != p.num_vars() {
        return Err(Error::ArityMismatch {
            left: v.num_vars(),
            right: p.num_vars(),
        });
    }
    let mut out = MPoly::zero(p.num_vars());
    for (i, vi) in v.components().iter().enumerate() {
        out = out.add(&vi.mul(&p.partial(i)));
    }
    Ok(out)
}

/// The first-order system of the Eisenstein series as a vector field on
/// affine 4-space with coordinates (x0, x1, x2, x3) = (q, E2, E4, E6):
/// x0·∂0 + (x1²−x2)/12·∂1 + (x1x2−x3)/3·∂2 + (x1x3−x2²)/2·∂3.
pub fn ramanujan_field() -> VectorField {
    let q = |n: i64, d: i64| Q::new(BigInt::from(n), BigInt::from(d));
    let x = |i: usize| MPoly::var(4, i);
    let c0 = x(0);
    let c1 = x(1).mul(&x(1)).sub(&x(2)).scale(&q(1, 12));
    let c2 = x(1).mul(&x(2)).sub(&x(3)).scale(&q(1, 3));
    let c3 = x(1).mul(&x(3)).sub(&x(2).mul(&x(2))).scale(&q(1, 2));
    VectorField::new(vec![c0, c1, c2, c3]).expect("well-formed field")
}

/// Iterated operator 12^j · ∂_v∘(∂_v−1)∘⋯∘(∂_v−(j−1)) for the Ramanujan
/// field, rightmost factor applied first. The 12^j prefactor clears the
/// denominators of the field, so integer input yields integer output.
pub fn ramanujan_iterate(j: u32, p: &MPoly) -> Result<MPoly, Error> {
    if j < 1 {
        return Err(Error::InvalidArgument(
            "ramanujan_iterate needs j >= 1".into(),
        ));
    }
    if p.num_vars() != 4 {
        return Err(Error::ArityMismatch {
            left: 4,
            right: p.num_vars(),
        });
    }
    let v = ramanujan_field();
    let mut acc = p.clone();
    for m in (0..j as i64).rev() {
        let shift = acc.scale(&Q::from(BigInt::from(m)));
        acc = derive_along(&v, &acc)?.sub(&shift);
    }
    let mut pref = Q::one();
    for _ in 0..j {
        pref *= Q::from(BigInt::from(12));
    }
    Ok(acc.scale(&pref))
}

/// Twisted iterate ∂_v∘(∂_v − t)∘⋯∘(∂_v − (j−1)t), rightmost factor first.
///
/// In graded mode (field carries a pole-degree hint k) the twist t must be
/// homogeneous of degree k+1 and P homogeneous; the output is homogeneous of
/// degree deg P + j(k+1). In affine mode no degree checks are applied.
pub fn twisted_iterate(v: &VectorField, t: &MPoly, j: u32, p: &MPoly) -> Result<MPoly, Error> {
    if j < 1 {
        return Err(Error::InvalidArgument(
            "twisted_iterate needs j >= 1".into(),
        ));
    }
    if v.num_vars() != p.num_vars() || t.num_vars() != p.num_vars() {
        return Err(Error::ArityMismatch {
            left: v.num_vars(),
            right: p.num_vars(),
        });
    }
    if let Some(k) = v.pole_degree_hint() {
        if !t.is_zero() {
            let dt = t.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
            if dt != k + 1 {
                return Err(Error::DegreeMismatch {
                    expected: k + 1,
                    got: dt,
                });
            }
        }
        if !p.is_zero() && p.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous);
        }
    }
    let mut acc = p.clone();
    for m in (0..j as i64).rev() {
        let twist = t.scale(&Q::from(BigInt::from(m))).mul(&acc);
        acc = derive_along(v, &acc)?.sub(&twist);
    }
    Ok(acc)
}

/// Lower estimate of ‖P‖_{L∞(ℙⁿ)} = sup |P(z)| / |z|^d over the unit sphere,
/// by maximizing over a fixed coarse unit-torus grid plus `samples`
/// quasi-random sphere points from a fixed deterministic stream.
///
/// Monotone nondecreasing in `samples`. Also see [`fubini_sup_refined`],
/// which reports a refinement margin alongside the estimate.
pub fn fubini_sup_estimate(p: &MPoly, samples: usize) -> Result<f64, Error> {
    Ok(fubini_sup_refined(p, samples)?.0)
}

/// (estimate, margin): margin is the gain of the final refinement step
/// (difference between the full-sample estimate and the half-sample one),
/// reported so callers can pad inequalities that use the sampled sup.
pub fn fubini_sup_refined(p: &MPoly, samples: usize) -> Result<(f64, f64), Error> {
    let d = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if samples < 1 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let n = p.num_vars();
    let terms = p.to_f64_terms();
    let mut best = 0.0f64;

    // Fixed coarse torus meshes over every nonempty coordinate subset:
    // coordinates in the subset run over a uniform circle grid (scaled to
    // the unit sphere), the rest are zero. Subset grids pick up
    // axis-aligned maximizers (e.g. X0^d at (1,0,...,0)) that random sphere
    // points would only approach.
    let mesh = if n <= 4 { 16usize } else { 4 };
    if n <= 20 {
        for subset in 1u32..(1u32 << n) {
            let members: Vec<usize> = (0..n).filter(|i| subset >> i & 1 == 1).collect();
            let m = members.len();
            if (mesh as f64).powi(m as i32) > 70_000.0 {
                continue;
            }
            let norm = (m as f64).sqrt();
            let mut idx = vec![0usize; m];
            loop {
                let mut z = vec![Complex64::new(0.0, 0.0); n];
                for (slot, &var) in members.iter().enumerate() {
                    z[var] = Complex64::from_polar(
                        1.0 / norm,
                        2.0 * std::f64::consts::PI * idx[slot] as f64 / mesh as f64,
                    );
                }
                let v = eval_f64_terms(&terms, &z).norm();
                if v > best {
                    best = v;
                }
                // odometer increment over the subset grid
                let mut i = 0;
                loop {
                    if i == m {
                        break;
                    }
                    idx[i] += 1;
                    if idx[i] < mesh {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == m {
                    break;
                }
            }
        }
    }
    let _ = d;

    // Quasi-random sphere points: fixed-key counter stream, so the first M
    // points are a prefix of the first 2M points (monotonicity in samples).
    let mut rng = ChaCha20Rng::seed_from_u64(0x5048_4552_4553_5045);
    let mut best_half = best;
    for s in 0..samples {
        let mut z = Vec::with_capacity(n);
        let mut norm2 = 0.0;
        for _ in 0..n {
            // Box–Muller pairs give rotation-invariant directions.
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            let r = (-2.0 * u1.ln()).sqrt();
            let c = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * u2);
            norm2 += c.norm_sqr();
            z.push(c);
        }
        let scale = norm2.sqrt();
        for c in &mut z {
            *c /= scale;
        }
        let v = eval_f64_terms(&terms, &z).norm();
        if v > best {
            best = v;
        }
        if s == samples / 2 {
            best_half = best;
        }
    }
    Ok((best, best - best_half))
}

/// Maximum of |P(z)|/(n+1)^{d/2} over the unit torus with `points` nodes per
/// angular dimension (supported for up to 3 variables).
pub fn torus_grid_max(p: &MPoly, points: usize) -> Result<f64, Error> {
    let d = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let n = p.num_vars();
    if n > 3 {
        return Err(Error::SizeLimit(
            "torus grid restricted to at most 3 variables".into(),
        ));
    }
    let terms = p.to_f64_terms();
    let norm = (n as f64).sqrt().powi(d as i32);
    let mut best = 0.0f64;
    let mut idx = vec![0usize; n];
    loop {
        let z: Vec<Complex64> = idx
            .iter()
            .map(|&k| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / points as f64)
            })
            .collect();
        let v = eval_f64_terms(&terms, &z).norm() / norm;
        if v > best {
            best = v;
        }
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            idx[i] += 1;
            if idx[i] < points {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(best)
}

/// Deterministic random polynomial for test suites: `nterms` monomials of
/// total degree ≤ `max_deg` (or exactly `max_deg` when `homogeneous`).
pub fn random_poly(
    rng: &mut ChaCha20Rng,
    num_vars: usize,
    max_deg: u32,
    nterms: usize,
    homogeneous: bool,
    coeff_bound: i64,
) -> MPoly {
    let mut p = MPoly::zero(num_vars);
    for _ in 0..nterms {
        let d = if homogeneous {
            max_deg
        } else {
            rng.gen_range(0..=max_deg)
        };
        // random composition of d into num_vars parts
        let mut e = vec![0u32; num_vars];
        for _ in 0..d {
            e[rng.gen_range(0..num_vars)] += 1;
        }
        let c = rng.gen_range(-coeff_bound..=coeff_bound);
        p = p.add(&MPoly::monomial(e, Q::from(BigInt::from(c))));
    }
    p
}
