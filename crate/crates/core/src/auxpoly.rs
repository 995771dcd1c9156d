//! Formal curves (tuples of truncated series), polynomial composition and
//! vanishing-order probes, and exact auxiliary-polynomial construction via
//! saturated integer kernels of Taylor-coefficient matrices.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::linalg::{integer_kernel, lll_reduce_gram};
use crate::polyops::MPoly;
use crate::series::{divisor_sigma, eisenstein, OrdQ, TruncSeries, Q};
use crate::util::binomial_usize;

/// A formal curve: a tuple of truncated series sharing one reliable window.
#[derive(Debug, Clone)]
pub struct FormalCurve {
    coords: Vec<TruncSeries>,
}

impl FormalCurve {
    pub fn new(coords: Vec<TruncSeries>) -> Result<Self, Error> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("curve needs coordinates".into()));
        }
        Ok(FormalCurve { coords })
    }

    pub fn coords(&self) -> &[TruncSeries] {
        &self.coords
    }

    pub fn num_coords(&self) -> usize {
        self.coords.len()
    }

    /// Shared reliable truncation order (minimum across coordinates).
    pub fn order(&self) -> i64 {
        self.coords.iter().map(|c| c.order()).min().unwrap()
    }

    /// The curve (q, E2, E4, E6) truncated below `order`.
    pub fn modular(order: i64) -> Result<Self, Error> {
        Ok(FormalCurve {
            coords: vec![
                TruncSeries::monomial(1, Q::one(), order),
                eisenstein(2, order)?,
                eisenstein(4, order)?,
                eisenstein(6, order)?,
            ],
        })
    }
}

/// Exact substitution of the curve coordinates into P, truncated to the
/// curve's reliable window. Coordinate powers are cached so repeated
/// exponents cost one series product each.
pub fn compose(p: &MPoly, curve: &FormalCurve) -> Result<TruncSeries, Error> {
    if p.num_vars() != curve.num_coords() {
        return Err(Error::ArityMismatch {
            left: p.num_vars(),
            right: curve.num_coords(),
        });
    }
    let order = curve.order();
    let n = p.num_vars();
    // power cache per coordinate
    let mut powers: Vec<Vec<TruncSeries>> = (0..n)
        .map(|i| vec![TruncSeries::one(order), curve.coords[i].clone()])
        .collect();
    let max_exp: Vec<u32> = (0..n)
        .map(|i| p.terms().map(|(e, _)| e[i]).max().unwrap_or(0))
        .collect();
    for (i, cache) in powers.iter_mut().enumerate() {
        while (cache.len() as u32) <= max_exp[i] {
            let next = cache.last().unwrap().mul(&curve.coords[i]);
            cache.push(next);
        }
    }
    let mut acc = TruncSeries::zero(order);
    for (e, c) in p.terms() {
        let mut term: Option<TruncSeries> = None;
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            term = Some(match term {
                None => powers[i][k as usize].clone(),
                Some(t) => t.mul(&powers[i][k as usize]),
            });
        }
        let term = term.unwrap_or_else(|| TruncSeries::one(order));
        acc = acc.add(&term.scale(c));
    }
    Ok(acc.truncate(order))
}

/// ord_q of the composed series: the multiplicity probe. Returns the
/// undetermined marker when every computed coefficient vanishes.
pub fn vanishing_order(p: &MPoly, curve: &FormalCurve) -> Result<OrdQ, Error> {
    Ok(compose(p, curve)?.ord_q())
}

/// Exponent tuples of total degree ≤ d (or = d when `homogeneous`), in
/// graded lexicographic order — the fixed column ordering of every
/// Taylor-coefficient matrix in this module.
pub fn monomials_graded(num_vars: usize, d: u32, homogeneous: bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let lo = if homogeneous { d } else { 0 };
    for total in lo..=d {
        // lexicographic enumeration of compositions of `total`
        let mut e = vec![0u32; num_vars];
        e[0] = total;
        loop {
            out.push(e.clone());
            // next composition: find the rightmost position before the last
            // with a positive entry, shift one unit right, gather the tail
            let mut found = None;
            for j in (0..num_vars - 1).rev() {
                if e[j] > 0 {
                    found = Some(j);
                    break;
                }
            }
            let Some(j) = found else { break };
            e[j] -= 1;
            let rest: u32 = e[j + 1..].iter().sum::<u32>() + 1;
            for x in e[j + 1..].iter_mut() {
                *x = 0;
            }
            e[j + 1] = rest;
        }
    }
    out
}

/// Composed series for every monomial, built incrementally along the graded
/// order (each monomial is its predecessor times one coordinate).
fn monomial_series(curve: &FormalCurve, monomials: &[Vec<u32>]) -> Result<Vec<TruncSeries>, Error> {
    let order = curve.order();
    let mut cache: HashMap<Vec<u32>, TruncSeries> = HashMap::new();
    cache.insert(vec![0; curve.num_coords()], TruncSeries::one(order));
    let mut out = Vec::with_capacity(monomials.len());
    for e in monomials {
        if let Some(s) = cache.get(e) {
            out.push(s.clone());
            continue;
        }
        let i = e
            .iter()
            .position(|&x| x > 0)
            .expect("nonzero exponent tuple");
        let mut parent = e.clone();
        parent[i] -= 1;
        let ps = match cache.get(&parent) {
            Some(s) => s.clone(),
            None => {
                // parent outside the enumerated list (homogeneous mode):
                // compose directly
                compose(&MPoly::monomial(parent.clone(), Q::one()), curve)?
            }
        };
        let s = ps.mul(&curve.coords[i]).truncate(order);
        cache.insert(e.clone(), s.clone());
        out.push(s);
    }
    Ok(out)
}

/// Integer Taylor-coefficient matrix: row j holds the q^j coefficients of
/// the monomial series, with each row scaled by its denominator lcm (row
/// scaling preserves the kernel).
fn taylor_matrix(
    curve: &FormalCurve,
    monomials: &[Vec<u32>],
    nrows: usize,
) -> Result<Vec<Vec<BigInt>>, Error> {
    let order = curve.order();
    if (nrows as i64) > order {
        return Err(Error::InsufficientTruncation {
            have: order,
            need: nrows as i64,
        });
    }
    for c in curve.coords() {
        if c.offset() < 0 {
            return Err(Error::InvalidArgument(
                "Taylor matrix requires curve coordinates with nonnegative valuation".into(),
            ));
        }
    }
    let series = monomial_series(curve, monomials)?;
    let mut rows = Vec::with_capacity(nrows);
    for j in 0..nrows {
        let vals: Vec<BigRational> = series
            .iter()
            .map(|s| s.coeff(j as i64).expect("within window"))
            .collect();
        let mut lcm = BigInt::one();
        for v in &vals {
            lcm = lcm.lcm(v.denom());
        }
        rows.push(
            vals.iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect(),
        );
    }
    Ok(rows)
}

fn poly_from_vector(monomials: &[Vec<u32>], v: &[BigInt]) -> MPoly {
    MPoly::from_terms(
        monomials[0].len(),
        monomials
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.clone(), Q::from(c.clone()))),
    )
}

/// Result of an auxiliary-polynomial search.
#[derive(Debug, Clone)]
pub struct AuxSearchResult {
    pub poly: MPoly,
    /// Number of monomial columns M(d).
    pub monomials: usize,
    /// Pigeonhole guarantee: M(d) − 1.
    pub guaranteed_ord: i64,
    /// Exact vanishing order of the returned polynomial.
    pub achieved_ord: OrdQ,
    /// Largest |coefficient|.
    pub max_coeff: BigInt,
}

/// Auxiliary polynomial of degree ≤ d along the curve: a saturated integer
/// kernel vector of the Taylor matrix with rows q^0..q^{M(d)−2}, so the
/// returned nonzero integer polynomial vanishes to order ≥ M(d) − 1.
/// With `reduce` set the kernel lattice is LLL-reduced (δ = 3/4) and the
/// shortest basis vector is returned.
pub fn aux_search(d: u32, curve: &FormalCurve, reduce: bool) -> Result<AuxSearchResult, Error> {
    if d < 1 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let monomials = monomials_graded(curve.num_coords(), d, false);
    let m = monomials.len();
    if curve.order() < m as i64 {
        return Err(Error::InsufficientTruncation {
            have: curve.order(),
            need: m as i64,
        });
    }
    let rows = taylor_matrix(curve, &monomials, m - 1)?;
    let kernel = integer_kernel(&rows, m);
    assert!(
        !kernel.is_empty(),
        "pigeonhole violated: kernel of a strictly wide matrix is nonzero"
    );
    let chosen = if reduce && kernel.len() > 1 {
        // LLL on the kernel lattice under the coefficient l2 norm
        let k = kernel.len();
        let gram: Vec<Vec<Q>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        Q::from(
                            kernel[i]
                                .iter()
                                .zip(&kernel[j])
                                .map(|(a, b)| a * b)
                                .sum::<BigInt>(),
                        )
                    })
                    .collect()
            })
            .collect();
        let (reduced_gram, t) = lll_reduce_gram(&gram);
        // shortest of the reduced basis
        let mut bi = 0;
        for i in 1..k {
            if reduced_gram[i][i] < reduced_gram[bi][bi] {
                bi = i;
            }
        }
        let mut v = vec![BigInt::zero(); m];
        for (j, coef) in t[bi].iter().enumerate() {
            if !coef.is_zero() {
                for c in 0..m {
                    v[c] += coef * &kernel[j][c];
                }
            }
        }
        v
    } else {
        kernel[0].clone()
    };
    let poly = poly_from_vector(&monomials, &chosen);
    let achieved = vanishing_order(&poly, curve)?;
    if let OrdQ::Known(o) = achieved {
        assert!(o >= m as i64 - 1, "kernel vector misses the guarantee");
    }
    let max_coeff = chosen
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    Ok(AuxSearchResult {
        poly,
        monomials: m,
        guaranteed_ord: m as i64 - 1,
        achieved_ord: achieved,
        max_coeff,
    })
}

/// Homogeneous degree-i polynomial vanishing to order ≥ ⌈iⁿ/n!⌉ along a
/// projective curve given by n+1 homogeneous coordinate series: there are
/// C(i+n, n) monomials, so imposing C(i+n,n) − 1 Taylor conditions leaves a
/// nonzero kernel vector, and C(i+n,n) − 1 ≥ ⌈iⁿ/n!⌉.
pub fn pigeonhole_witness(i: u32, curve: &FormalCurve, n: usize) -> Result<MPoly, Error> {
    if i < 1 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    if curve.num_coords() != n + 1 {
        return Err(Error::ArityMismatch {
            left: curve.num_coords(),
            right: n + 1,
        });
    }
    let monomials = monomials_graded(n + 1, i, true);
    let m = monomials.len();
    debug_assert_eq!(m, binomial_usize(i as u64 + n as u64, n as u64));
    if curve.order() < m as i64 {
        return Err(Error::InsufficientTruncation {
            have: curve.order(),
            need: m as i64,
        });
    }
    let rows = taylor_matrix(curve, &monomials, m - 1)?;
    let kernel = integer_kernel(&rows, m);
    assert!(!kernel.is_empty(), "pigeonhole violated");
    let poly = poly_from_vector(&monomials, &kernel[0]);
    // hard guarantee from the imposed conditions
    let target = {
        let mut p = 1u128;
        for _ in 0..n {
            p = p.saturating_mul(i as u128);
        }
        let fact: u128 = (1..=n as u128).product();
        p.div_ceil(fact) as i64
    };
    match vanishing_order(&poly, curve)? {
        OrdQ::Known(o) => assert!(o >= target, "witness misses the bound"),
        OrdQ::AtLeast(o) => assert!(o >= target),
    }
    Ok(poly)
}

/// Gap sequence of the lacunary example: n_0 = 2, n_{i+1} = (i+2)·n_i².
pub fn lacunary_gaps(upto: usize) -> Vec<u64> {
    let mut v = vec![2u64];
    for i in 0..upto {
        let last = *v.last().unwrap();
        v.push((i as u64 + 2) * last * last);
    }
    v
}

/// Lacunary counterexample data for degree index d: the curve
/// (1 : q : h) with h = Σ q^{n_i}, the polynomial
/// P_d = X0^{n_d−1}·X2 − Σ_{i≤d} X0^{n_d−n_i}·X1^{n_i} of degree n_d, and
/// the exact ratio mult(P_d)/n_d² = d+2.
///
/// The multiplicity is computed sparsely: the pullback collapses to
/// h(q) − Σ_{i≤d} q^{n_i} = Σ_{i>d} q^{n_i}, with leading exponent n_{d+1}.
pub fn lacunary_witness(d: u32, i_max: u32) -> Result<(FormalCurve, MPoly, Q), Error> {
    if d >= i_max {
        return Err(Error::InvalidArgument("need d < i_max".into()));
    }
    if d >= 4 {
        return Err(Error::SizeLimit(format!(
            "lacunary gap exponents explode for d = {d} (>= 4)"
        )));
    }
    let gaps = lacunary_gaps(d as usize + 1);
    let n_d = gaps[d as usize];
    let n_next = gaps[d as usize + 1];
    let order = n_next as i64 + 1;

    // sparse pullback: coefficients of phi*(P_d) as a map exponent -> coeff
    let mut sparse: HashMap<u64, i64> = HashMap::new();
    for &g in &gaps {
        if (g as i64) < order {
            *sparse.entry(g).or_insert(0) += 1; // X2 -> h
        }
    }
    for &g in gaps.iter().take(d as usize + 1) {
        *sparse.entry(g).or_insert(0) -= 1; // - q^{n_i}
    }
    let mult = sparse
        .iter()
        .filter(|(_, &c)| c != 0)
        .map(|(&e, _)| e)
        .min()
        .expect("nonzero pullback");
    assert_eq!(mult, n_next, "sparse multiplicity disagrees with gap value");

    // dense curve for the caller (coefficients are 0/1, cheap to store)
    let mut h = vec![Q::zero(); order as usize];
    for &g in &gaps {
        if (g as i64) < order {
            h[g as usize] = Q::one();
        }
    }
    let curve = FormalCurve::new(vec![
        TruncSeries::one(order),
        TruncSeries::monomial(1, Q::one(), order),
        TruncSeries::new(0, h),
    ])?;

    let mut terms = vec![(vec![(n_d - 1) as u32, 0u32, 1u32], Q::one())];
    for &ni in gaps.iter().take(d as usize + 1) {
        terms.push((vec![(n_d - ni) as u32, ni as u32, 0u32], -Q::one()));
    }
    let p = MPoly::from_terms(3, terms);
    let ratio = Q::new(BigInt::from(mult), BigInt::from(n_d * n_d));
    assert_eq!(ratio, Q::from(BigInt::from(d + 2)));
    Ok((curve, p, ratio))
}

/// Residual of the derivative-transfer identity: composing the iterated
/// operator with the modular curve must agree with (12q)^j d^j/dq^j applied
/// to the composed series. Returns the difference, truncated below `order`.
pub fn derivative_transfer_check(p: &MPoly, j: u32, order: i64) -> Result<TruncSeries, Error> {
    if j < 1 {
        return Err(Error::InvalidArgument("j must be >= 1".into()));
    }
    // the iterate raises degrees, so pad the curve window
    let slack = order + j as i64 + 2;
    let curve = FormalCurve::modular(slack)?;
    let lhs = compose(&crate::polyops::ramanujan_iterate(j, p)?, &curve)?;
    let f = compose(p, &curve)?;
    let rhs = f.scaled_derivative(j, &Q::from(BigInt::from(12)));
    Ok(lhs.sub(&rhs).truncate(order))
}

/// Convenience: exact σ-based f64 coefficient tables for numeric layers.
pub fn eisenstein_f64_coeffs(weight: u32, nterms: usize) -> Vec<f64> {
    let mult: f64 = match weight {
        2 => -24.0,
        4 => 240.0,
        6 => -504.0,
        _ => panic!("weight must be 2, 4, or 6"),
    };
    let mut v = vec![0.0f64; nterms];
    if nterms > 0 {
        v[0] = 1.0;
    }
    // sieve the divisor sums
    let mut sig = vec![0.0f64; nterms];
    for d in 1..nterms as u64 {
        let dk = (d as f64).powi(weight as i32 - 1);
        let mut m = d;
        while m < nterms as u64 {
            sig[m as usize] += dk;
            m += d;
        }
    }
    for j in 1..nterms {
        v[j] = mult * sig[j];
    }
    // spot-check the sieve against the exact values on small indices
    for j in 1..nterms.min(20) {
        let exact = divisor_sigma(weight - 1, j as u64).unwrap();
        debug_assert_eq!(exact.to_f64().unwrap() * mult, v[j]);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> Q {
        Q::from(BigInt::from(n))
    }

    #[test]
    fn graded_monomial_enumeration() {
        let m = monomials_graded(4, 2, false);
        assert_eq!(m.len(), binomial_usize(6, 4)); // C(2+4,4) = 15
                                                   // graded: degrees nondecreasing
        let degs: Vec<u32> = m.iter().map(|e| e.iter().sum()).collect();
        assert!(degs.windows(2).all(|w| w[0] <= w[1]));
        // no duplicates
        let mut sorted = m.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), m.len());
        let h = monomials_graded(3, 4, true);
        assert_eq!(h.len(), binomial_usize(6, 2)); // C(4+2,2) = 15
    }

    #[test]
    fn compose_modular_examples() {
        let curve = FormalCurve::modular(12).unwrap();
        // E2^2 - E4 = 12 q E2' : ord 1, leading -288
        let p = MPoly::var(4, 1)
            .mul(&MPoly::var(4, 1))
            .sub(&MPoly::var(4, 2));
        let s = compose(&p, &curve).unwrap();
        assert_eq!(s.ord_q(), OrdQ::Known(1));
        assert_eq!(s.coeff(1).unwrap(), qi(-288));
        // E4^3 - E6^2: ord 1, leading 1728
        let p2 =
            MPoly::monomial(vec![0, 0, 3, 0], qi(1)).sub(&MPoly::monomial(vec![0, 0, 0, 2], qi(1)));
        let s2 = compose(&p2, &curve).unwrap();
        assert_eq!(s2.ord_q(), OrdQ::Known(1));
        assert_eq!(s2.coeff(1).unwrap(), qi(1728));
        // constants pass through
        let one = MPoly::constant(4, qi(1));
        assert_eq!(compose(&one, &curve).unwrap().coeff(0).unwrap(), qi(1));
    }

    #[test]
    fn vanishing_orders() {
        let curve = FormalCurve::modular(10).unwrap();
        let x0 = MPoly::var(4, 0);
        assert_eq!(vanishing_order(&x0, &curve).unwrap(), OrdQ::Known(1));
        let p = MPoly::var(4, 1).sub(&MPoly::constant(4, qi(1)));
        assert_eq!(vanishing_order(&p, &curve).unwrap(), OrdQ::Known(1));
        // the zero polynomial is undetermined at any truncation
        let z = MPoly::zero(4);
        assert!(matches!(
            vanishing_order(&z, &curve).unwrap(),
            OrdQ::AtLeast(_)
        ));
    }

    #[test]
    fn compose_is_ring_homomorphism() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(11);
        let curve = FormalCurve::modular(20).unwrap();
        for _ in 0..5 {
            let a = crate::polyops::random_poly(&mut rng, 4, 3, 4, false, 5);
            let b = crate::polyops::random_poly(&mut rng, 4, 3, 4, false, 5);
            let lhs = compose(&a.mul(&b), &curve).unwrap();
            let rhs = compose(&a, &curve)
                .unwrap()
                .mul(&compose(&b, &curve).unwrap());
            assert!(lhs.sub(&rhs).is_zero_through_order());
            let lhs2 = compose(&a.add(&b), &curve).unwrap();
            let rhs2 = compose(&a, &curve)
                .unwrap()
                .add(&compose(&b, &curve).unwrap());
            assert!(lhs2.sub(&rhs2).is_zero_through_order());
        }
    }

    #[test]
    fn aux_search_small_degrees() {
        let curve = FormalCurve::modular(40).unwrap();
        for d in [1u32, 2] {
            let res = aux_search(d, &curve, false).unwrap();
            assert!(!res.poly.is_zero());
            let guarantee = res.guaranteed_ord;
            match res.achieved_ord {
                OrdQ::Known(o) => assert!(o >= guarantee, "d={d}: {o} < {guarantee}"),
                OrdQ::AtLeast(o) => assert!(o >= guarantee),
            }
        }
    }

    #[test]
    fn aux_search_dependent_coordinates() {
        // (q, q, q^2, q^3): X1 - X0 is an exact relation; kernel exists and
        // achieved order is undetermined (identically zero pullback possible)
        // or large.
        let order = 40;
        let q1 = TruncSeries::monomial(1, Q::one(), order);
        let curve = FormalCurve::new(vec![q1.clone(), q1.clone(), q1.pow(2), q1.pow(3)]).unwrap();
        let res = aux_search(2, &curve, false).unwrap();
        match res.achieved_ord {
            OrdQ::Known(o) => assert!(o >= 14),
            OrdQ::AtLeast(o) => assert!(o >= 14),
        }
    }

    #[test]
    fn pigeonhole_small() {
        let order = 60;
        let curve = FormalCurve::new(vec![
            TruncSeries::one(order),
            TruncSeries::monomial(1, Q::one(), order),
            eisenstein(4, order).unwrap(),
        ])
        .unwrap();
        for i in [1u32, 2, 4] {
            let p = pigeonhole_witness(i, &curve, 2).unwrap();
            assert_eq!(p.homogeneous_degree(), Some(i));
        }
    }

    #[test]
    fn lacunary_small() {
        let (curve, p, ratio) = lacunary_witness(0, 10).unwrap();
        assert_eq!(ratio, qi(2));
        // verify multiplicity through the dense path too
        let ord = vanishing_order(&p, &curve).unwrap();
        assert_eq!(ord, OrdQ::Known(8));
        let (_, _, r1) = lacunary_witness(1, 10).unwrap();
        assert_eq!(r1, qi(3));
        assert!(lacunary_witness(4, 10).is_err());
        assert!(lacunary_witness(3, 2).is_err());
    }

    #[test]
    fn transfer_identity_small() {
        let x0 = MPoly::var(4, 0);
        let r = derivative_transfer_check(&x0, 1, 30).unwrap();
        assert!(r.is_zero_through_order());
        let x1 = MPoly::var(4, 1);
        let r2 = derivative_transfer_check(&x1, 1, 30).unwrap();
        assert!(r2.is_zero_through_order());
        let r3 = derivative_transfer_check(&x1, 2, 20).unwrap();
        assert!(r3.is_zero_through_order());
    }

    #[test]
    fn vanishing_order_is_additive() {
        let curve = FormalCurve::modular(25).unwrap();
        let a = MPoly::var(4, 0); // ord 1
        let b = MPoly::var(4, 1)
            .mul(&MPoly::var(4, 1))
            .sub(&MPoly::var(4, 2)); // ord 1
        let oa = vanishing_order(&a, &curve).unwrap().known().unwrap();
        let ob = vanishing_order(&b, &curve).unwrap().known().unwrap();
        let oab = vanishing_order(&a.mul(&b), &curve)
            .unwrap()
            .known()
            .unwrap();
        assert_eq!(oab, oa + ob);
    }
}
