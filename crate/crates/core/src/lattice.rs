//! Euclidean lattices over the integers: degrees and slopes from exact Gram
//! determinants, shortest vectors, heights of linear maps, saturated kernel
//! lattices, and the filtered short-vector construction driven by a formal
//! curve's vanishing-order functional.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::auxpoly::{monomials_graded, vanishing_order, FormalCurve};
use crate::error::Error;
use crate::linalg::{
    hnf_rows, integer_kernel, leading_principal_minors, rational_det, shortest_vector,
};
use crate::polyops::MPoly;
use crate::series::{OrdQ, Q};
use crate::util::{bigrational_to_f64, content, ln_bigrational};

/// Default cap on the rank for exact shortest-vector enumeration.
pub const ENUMERATION_CAP: usize = 12;

/// Euclidean lattice: integer basis columns inside ℤ^N (optional) plus the
/// exact rational Gram matrix of the generators.
#[derive(Debug, Clone)]
pub struct HermLattice {
    basis: Option<Vec<Vec<BigInt>>>,
    gram: Vec<Vec<Q>>,
}

impl HermLattice {
    /// Lattice from generator columns under the standard inner product.
    pub fn from_basis(columns: Vec<Vec<BigInt>>) -> Result<Self, Error> {
        let k = columns.len();
        let mut gram = vec![vec![Q::zero(); k]; k];
        for i in 0..k {
            for j in i..k {
                let dot: BigInt = columns[i].iter().zip(&columns[j]).map(|(a, b)| a * b).sum();
                gram[i][j] = Q::from(dot.clone());
                gram[j][i] = Q::from(dot);
            }
        }
        let l = HermLattice {
            basis: Some(columns),
            gram,
        };
        l.check_positive_definite()?;
        Ok(l)
    }

    /// Lattice from a supplied positive-definite rational form.
    pub fn from_gram(gram: Vec<Vec<Q>>) -> Result<Self, Error> {
        let l = HermLattice { basis: None, gram };
        l.check_positive_definite()?;
        Ok(l)
    }

    /// The standard lattice ℤ^n.
    pub fn standard(n: usize) -> Self {
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        HermLattice { basis: None, gram }
    }

    /// Rank-0 lattice.
    pub fn trivial() -> Self {
        HermLattice {
            basis: Some(Vec::new()),
            gram: Vec::new(),
        }
    }

    fn check_positive_definite(&self) -> Result<(), Error> {
        let n = self.gram.len();
        for i in 0..n {
            if self.gram[i].len() != n {
                return Err(Error::InvalidArgument("Gram matrix not square".into()));
            }
            for j in 0..i {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(Error::InvalidArgument("Gram matrix not symmetric".into()));
                }
            }
        }
        // exact leading principal minors
        for k in 1..=n {
            let sub: Vec<Vec<Q>> = (0..k).map(|i| self.gram[i][..k].to_vec()).collect();
            if rational_det(&sub) <= Q::zero() {
                return Err(Error::NotPositiveDefinite);
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn basis(&self) -> Option<&[Vec<BigInt>]> {
        self.basis.as_deref()
    }

    /// Exact Gram determinant (squared covolume).
    pub fn gram_det(&self) -> Q {
        if self.gram.is_empty() {
            return Q::one();
        }
        rational_det(&self.gram)
    }
}

/// Arakelov degree at the rational integers: −½·log det(Gram), i.e.
/// −log(covolume). The rank-0 lattice has degree 0.
pub fn arakelov_degree(l: &HermLattice) -> f64 {
    if l.rank() == 0 {
        return 0.0;
    }
    -0.5 * ln_bigrational(&l.gram_det())
}

/// Slope: degree divided by rank; rank 0 returns the −∞ marker.
pub fn slope(l: &HermLattice) -> f64 {
    if l.rank() == 0 {
        return f64::NEG_INFINITY;
    }
    arakelov_degree(l) / l.rank() as f64
}

/// Maximal slope over nonzero sublattices. Only the rank-1 case (where it
/// coincides with the slope itself) is computed exactly; larger ranks would
/// need a search over the sublattice poset and are refused.
pub fn mu_max(l: &HermLattice) -> Result<f64, Error> {
    if l.rank() == 1 {
        return Ok(slope(l));
    }
    Err(Error::Unsupported(
        "maximal slope is only computed for rank-1 lattices".into(),
    ))
}

/// Exact first minimum: (λ1, witness in lattice coordinates).
pub fn first_minimum(l: &HermLattice) -> Result<(f64, Vec<BigInt>), Error> {
    first_minimum_capped(l, ENUMERATION_CAP)
}

pub fn first_minimum_capped(l: &HermLattice, cap: usize) -> Result<(f64, Vec<BigInt>), Error> {
    if l.rank() == 0 {
        return Err(Error::InvalidArgument(
            "rank-0 lattice has no minimum".into(),
        ));
    }
    if l.rank() > cap {
        return Err(Error::EnumerationCap {
            rank: l.rank(),
            cap,
        });
    }
    let (witness, norm2) = shortest_vector(l.gram());
    Ok((bigrational_to_f64(&norm2).sqrt(), witness))
}

/// Height of a nonzero linear map between Euclidean lattices, with entries
/// of `phi` expressed in the lattices' integral bases: archimedean term =
/// log operator norm between the Euclidean structures, nonarchimedean terms
/// = −log(content of the entry matrix).
pub fn map_height(
    phi: &[Vec<Q>],
    source: &HermLattice,
    target: &HermLattice,
) -> Result<f64, Error> {
    let rows = phi.len();
    if rows != target.rank() {
        return Err(Error::ArityMismatch {
            left: rows,
            right: target.rank(),
        });
    }
    let cols = if rows > 0 { phi[0].len() } else { 0 };
    if cols != source.rank() {
        return Err(Error::ArityMismatch {
            left: cols,
            right: source.rank(),
        });
    }
    if phi.iter().all(|r| r.iter().all(|x| x.is_zero())) {
        return Ok(f64::NEG_INFINITY);
    }

    // nonarchimedean: content of the rational matrix
    let mut lcm = BigInt::one();
    for r in phi {
        for x in r {
            lcm = lcm.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = phi
        .iter()
        .flat_map(|r| r.iter().map(|x| x.numer() * (&lcm / x.denom())))
        .collect();
    let g = content(&ints);
    let cont = Q::new(g, lcm);
    let nonarch = -ln_bigrational(&cont.abs());

    // archimedean: largest singular value of C_F · M · C_E^{-1} where
    // G = Cᵀ C are f64 Cholesky factors of the Gram matrices.
    let to_f64 = |g: &[Vec<Q>]| -> Vec<Vec<f64>> {
        g.iter()
            .map(|r| r.iter().map(bigrational_to_f64).collect())
            .collect()
    };
    let ce = cholesky_upper(&to_f64(source.gram()));
    let cf = cholesky_upper(&to_f64(target.gram()));
    let m: Vec<Vec<f64>> = phi
        .iter()
        .map(|r| r.iter().map(bigrational_to_f64).collect())
        .collect();
    // A = C_F * M * C_E^{-1}: solve X * C_E = C_F * M for X (C_E upper).
    let fm = mat_mul(&cf, &m);
    let a = solve_right_upper(&fm, &ce);
    let opnorm = largest_singular_value(&a);
    Ok(opnorm.ln() + nonarch)
}

fn cholesky_upper(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    // returns upper-triangular C with G = Cᵀ C
    let n = g.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut s = g[i][i];
        for k in 0..i {
            s -= c[k][i] * c[k][i];
        }
        c[i][i] = s.max(0.0).sqrt();
        for j in i + 1..n {
            let mut s2 = g[i][j];
            for k in 0..i {
                s2 -= c[k][i] * c[k][j];
            }
            c[i][j] = s2 / c[i][i];
        }
    }
    c
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t] == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

/// Solve X·U = B for X with U upper-triangular (columns back-substituted).
fn solve_right_upper(b: &[Vec<f64>], u: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rows = b.len();
    let n = u.len();
    let mut x = vec![vec![0.0; n]; rows];
    for r in 0..rows {
        for j in 0..n {
            let mut s = b[r][j];
            for k in 0..j {
                s -= x[r][k] * u[k][j];
            }
            x[r][j] = s / u[j][j];
        }
    }
    x
}

fn largest_singular_value(a: &[Vec<f64>]) -> f64 {
    // power iteration on AᵀA
    let rows = a.len();
    let cols = a[0].len();
    let mut v = vec![1.0f64; cols];
    let mut sigma = 0.0;
    for _ in 0..500 {
        // w = A v; u = Aᵀ w
        let mut w = vec![0.0; rows];
        for i in 0..rows {
            for j in 0..cols {
                w[i] += a[i][j] * v[j];
            }
        }
        let mut u = vec![0.0; cols];
        for j in 0..cols {
            for i in 0..rows {
                u[j] += a[i][j] * w[i];
            }
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let new_sigma = norm.sqrt();
        for (x, y) in v.iter_mut().zip(&u) {
            *x = y / norm;
        }
        if (new_sigma - sigma).abs() <= 1e-14 * new_sigma.max(1.0) {
            sigma = new_sigma;
            break;
        }
        sigma = new_sigma;
    }
    sigma
}

/// Saturation of ker(M) ∩ ℤ^N as a lattice (basis columns in HNF rows of
/// the kernel, standard inner product).
pub fn saturate_kernel(m: &[Vec<BigInt>], ncols: usize) -> Result<HermLattice, Error> {
    let rows = integer_kernel(m, ncols);
    if rows.is_empty() {
        return Ok(HermLattice::trivial());
    }
    // kernel vectors become basis columns
    HermLattice::from_basis(rows)
}

// ---------------------------------------------------------------------------
// Filtered lattices from a formal curve's order functional.
// ---------------------------------------------------------------------------

/// Decreasing filtration of the section lattice E_d = ℤ^{M(d)} (coefficient
/// vectors in the graded-lex monomial basis, ℓ² norm): level m consists of
/// the integer polynomials whose pullback along the curve vanishes to order
/// at least m. Levels are saturated kernels, so every quotient is
/// torsion-free of rank ≤ 1.
#[derive(Debug, Clone)]
pub struct FilteredLattice {
    curve: FormalCurve,
    degree: u32,
    monomials: Vec<Vec<u32>>,
    /// Taylor rows of the order functional (row m = q^m coefficients).
    rows: Vec<Vec<BigInt>>,
    /// levels[m] = basis rows of E^m, for m = 0..=depth.
    levels: Vec<Vec<Vec<BigInt>>>,
}

impl FilteredLattice {
    /// Build the filtration to `depth` levels for total degree ≤ d.
    pub fn from_curve(curve: &FormalCurve, d: u32, depth: usize) -> Result<Self, Error> {
        let monomials = monomials_graded(curve.num_coords(), d, false);
        let m = monomials.len();
        if curve.order() < depth as i64 + 1 {
            return Err(Error::InsufficientTruncation {
                have: curve.order(),
                need: depth as i64 + 1,
            });
        }
        let rows = taylor_rows(curve, &monomials, depth)?;
        let mut levels = Vec::with_capacity(depth + 1);
        // E^0 = ZZ^m
        levels.push(
            (0..m)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); m];
                    v[i] = BigInt::one();
                    v
                })
                .collect::<Vec<_>>(),
        );
        for lvl in 1..=depth {
            levels.push(integer_kernel(&rows[..lvl], m));
        }
        Ok(FilteredLattice {
            curve: curve.clone(),
            degree: d,
            monomials,
            rows,
            levels,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.monomials.len()
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_rank(&self, m: usize) -> usize {
        self.levels[m].len()
    }

    pub fn level_basis(&self, m: usize) -> &[Vec<BigInt>] {
        &self.levels[m]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn curve(&self) -> &FormalCurve {
        &self.curve
    }

    /// Saturation check: quotient of consecutive levels torsion-free.
    /// True by construction (levels are saturated kernels); verified via
    /// the Smith-diagonal of the stacked basis in tests.
    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    /// Adapted chain data for degrees/slopes: vectors x_m ∈ E^{m−1}
    /// completing a basis of E^m to E^{m−1} (m = 1..=depth, skipping levels
    /// where the rank does not drop), ordered deepest-first together with
    /// the basis of the deepest level, plus all leading principal minors of
    /// the Gram matrix in that order.
    pub fn adapted_minors(&self) -> AdaptedChain {
        let depth = self.depth();
        let n = self.ambient_rank();
        let mut chain: Vec<Vec<BigInt>> = self.levels[depth].to_vec();
        // quotient generator per level, deepest first
        let mut quotient_gen: Vec<Option<Vec<BigInt>>> = Vec::new();
        for m in (1..=depth).rev() {
            if self.level_rank(m) == self.level_rank(m - 1) {
                quotient_gen.push(None);
                continue;
            }
            // x in E^{m-1} with row_{m-1}·x = gcd of values on the basis
            let basis = &self.levels[m - 1];
            let row = &self.rows[m - 1];
            let vals: Vec<BigInt> = basis
                .iter()
                .map(|b| row.iter().zip(b).map(|(a, x)| a * x).sum())
                .collect();
            // extended gcd combination over the basis values
            let mut g = BigInt::zero();
            let mut coeffs = vec![BigInt::zero(); vals.len()];
            for (i, v) in vals.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                if g.is_zero() {
                    g = v.clone();
                    coeffs = vec![BigInt::zero(); vals.len()];
                    coeffs[i] = BigInt::one();
                } else {
                    let e = g.extended_gcd(v);
                    for c in coeffs.iter_mut() {
                        *c *= &e.x;
                    }
                    coeffs[i] = e.y.clone();
                    g = e.gcd;
                }
            }
            assert!(!g.is_zero(), "rank drop without a nonzero functional");
            let mut x = vec![BigInt::zero(); n];
            for (c, b) in coeffs.iter().zip(basis) {
                if !c.is_zero() {
                    for t in 0..n {
                        x[t] += c * &b[t];
                    }
                }
            }
            chain.push(x.clone());
            quotient_gen.push(Some(x));
        }
        let gram: Vec<Vec<BigInt>> = chain
            .iter()
            .map(|a| {
                chain
                    .iter()
                    .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect();
        let minors = leading_principal_minors(&gram);
        AdaptedChain {
            deepest_rank: self.levels[depth].len(),
            quotient_gen_deepest_first: quotient_gen,
            minors,
            rows: self.rows.clone(),
        }
    }
}

/// Chain data produced by [`FilteredLattice::adapted_minors`].
pub struct AdaptedChain {
    pub deepest_rank: usize,
    /// For m = depth down to 1: the adapted vector generating E^{m−1}/E^m,
    /// or None when the quotient is trivial.
    pub quotient_gen_deepest_first: Vec<Option<Vec<BigInt>>>,
    /// Leading principal minors of the adapted Gram matrix: minor k is the
    /// squared covolume of the span of the first k chain vectors.
    pub minors: Vec<BigInt>,
    pub rows: Vec<Vec<BigInt>>,
}

impl AdaptedChain {
    /// Arakelov degree of level m (levels indexed from the top: m = 0 is the
    /// full lattice). Requires the chain to reach level m.
    pub fn level_degree(&self, depth: usize, m: usize) -> f64 {
        // level m spans deepest_rank + (depth - m) chain vectors
        let k = self.deepest_rank + (depth - m);
        if k == 0 {
            return 0.0;
        }
        -0.5 * crate::util::ln_bigint(&self.minors[k - 1])
    }

    /// Slope of the rank-1 quotient E^m/E^{m+1} (None when trivial):
    /// −log of the orthogonal-projection length of the adapted vector.
    pub fn quotient_slope(&self, depth: usize, m: usize) -> Option<f64> {
        // quotient_gen_deepest_first[i] corresponds to quotient at
        // m = depth-1-i (generator of E^{m}/E^{m+1})
        let i = depth - 1 - m;
        self.quotient_gen_deepest_first[i].as_ref()?;
        Some(self.level_degree(depth, m) - self.level_degree(depth, m + 1))
    }
}

/// Certificate accompanying a filtered short vector.
#[derive(Debug, Clone)]
pub struct FilteredCertificate {
    /// μ̂(E^i/E^{i+1}) for i < m′ (None where the quotient is trivial).
    pub quotient_slopes: Vec<Option<f64>>,
    /// Non-decreasing envelope a_{d,m′} = max of the quotient slopes.
    pub slope_envelope: f64,
    /// Evaluated norm bound: max{0, −2μ̂(E_d)} + a_{d,m′} + ½·log r_d.
    pub norm_bound: f64,
    /// log ‖s‖_∞ of the returned vector.
    pub log_sup_norm: f64,
    /// ½·log(2·r_d): the recorded John-norm distortion (not modeled).
    pub john_distortion_log: f64,
    /// True when the vector came from exact enumeration; false when the
    /// rank exceeded the cap and the reduced-basis first vector was used.
    pub enumerated: bool,
}

/// Filtered short-vector search: forms the level-⌊r_d/2⌋ sublattice of the
/// curve filtration, returns its shortest (or LLL-reduced fallback) vector,
/// the exact vanishing order of the matching polynomial, and a certificate
/// with every intermediate quotient slope and the evaluated norm bound.
pub fn filtered_short_vector(
    f: &FilteredLattice,
) -> Result<(Vec<BigInt>, OrdQ, FilteredCertificate), Error> {
    let r_d = f.ambient_rank();
    let m_prime = r_d / 2;
    if f.depth() < m_prime {
        return Err(Error::InsufficientTruncation {
            have: f.depth() as i64,
            need: m_prime as i64,
        });
    }
    let basis = f.level_basis(m_prime);
    if basis.is_empty() {
        return Err(Error::InvalidArgument("level sublattice is trivial".into()));
    }
    let level = HermLattice::from_basis(basis.to_vec())?;
    let (vec_coords, enumerated) = if level.rank() <= ENUMERATION_CAP {
        let (_l1, witness) = first_minimum(&level)?;
        // map from level coordinates to ambient coordinates
        let mut v = vec![BigInt::zero(); r_d];
        for (j, c) in witness.iter().enumerate() {
            if !c.is_zero() {
                for t in 0..r_d {
                    v[t] += c * &basis[j][t];
                }
            }
        }
        (v, true)
    } else {
        // rank beyond the enumeration cap: exact pairwise size reduction
        // first, then float-guided LLL with a truncation ladder; both apply
        // only unimodular row operations, so the lattice is unchanged and
        // the certificate below is evaluated on the exact result
        let mut red = basis.to_vec();
        crate::linalg::pairwise_reduce_rows(&mut red);
        crate::linalg::float_lll_rows(&mut red);
        let v = red
            .into_iter()
            .min_by_key(|r| r.iter().map(|x| x * x).sum::<BigInt>())
            .expect("nonempty basis");
        (v, false)
    };

    // exact vanishing order of the matching polynomial
    let poly = MPoly::from_terms(
        f.curve.num_coords(),
        monomials_graded(f.curve.num_coords(), f.degree, false)
            .into_iter()
            .zip(&vec_coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, Q::from(c.clone()))),
    );
    let ord = vanishing_order(&poly, &f.curve)?;

    // certificate: quotient slopes and the norm bound
    let chain = f.adapted_minors();
    let depth = f.depth();
    let mut slopes = Vec::with_capacity(m_prime);
    let mut envelope = f64::NEG_INFINITY;
    for i in 0..m_prime {
        let s = chain.quotient_slope(depth, i);
        if let Some(v) = s {
            envelope = envelope.max(v);
        }
        slopes.push(s);
    }
    // ambient E_d is standard ZZ^{r_d}: slope 0
    let mu_ambient = 0.0f64;
    let bound = (0.0f64).max(-2.0 * mu_ambient) + envelope + 0.5 * (r_d as f64).ln();
    let sup: BigInt = vec_coords
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    assert!(!sup.is_zero(), "zero short vector");
    let log_sup = crate::util::ln_bigint(&sup);
    let cert = FilteredCertificate {
        quotient_slopes: slopes,
        slope_envelope: envelope,
        norm_bound: bound,
        log_sup_norm: log_sup,
        john_distortion_log: 0.5 * (2.0 * r_d as f64).ln(),
        enumerated,
    };
    Ok((vec_coords, ord, cert))
}

/// Taylor rows of the order functional (shared with the filtration).
fn taylor_rows(
    curve: &FormalCurve,
    monomials: &[Vec<u32>],
    nrows: usize,
) -> Result<Vec<Vec<BigInt>>, Error> {
    // compose each monomial and read off integer rows (scaled by row lcm)
    let order = curve.order();
    if (nrows as i64) > order {
        return Err(Error::InsufficientTruncation {
            have: order,
            need: nrows as i64,
        });
    }
    let series: Vec<crate::series::TruncSeries> = monomials
        .iter()
        .map(|e| {
            crate::auxpoly::compose(&MPoly::monomial(e.clone(), Q::one()), curve)
                .expect("arity checked by caller")
        })
        .collect();
    let mut rows = Vec::with_capacity(nrows);
    for j in 0..nrows {
        let vals: Vec<Q> = series
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

/// Deterministic random lattice for test suites: integer basis with entries
/// in [−bound, bound], retried until positive definite (full rank).
pub fn random_lattice(
    rng: &mut rand_chacha::ChaCha20Rng,
    rank: usize,
    dim: usize,
    bound: i64,
) -> HermLattice {
    use rand::Rng;
    loop {
        let cols: Vec<Vec<BigInt>> = (0..rank)
            .map(|_| {
                (0..dim)
                    .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                    .collect()
            })
            .collect();
        if let Ok(l) = HermLattice::from_basis(cols) {
            return l;
        }
    }
}

/// Saturation of the row lattice is idempotent; exposed for tests.
pub fn saturate_rows_public(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    hnf_rows(&crate::linalg::saturate_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn qr(n: i64, d: i64) -> Q {
        Q::new(bi(n), bi(d))
    }

    #[test]
    fn degrees_and_slopes() {
        let std3 = HermLattice::standard(3);
        assert_eq!(arakelov_degree(&std3), 0.0);
        assert_eq!(slope(&std3), 0.0);
        let two_z = HermLattice::from_basis(vec![vec![bi(2)]]).unwrap();
        assert!((arakelov_degree(&two_z) + 2f64.ln()).abs() < 1e-14);
        assert!((slope(&two_z) + 2f64.ln()).abs() < 1e-14);
        let hex = HermLattice::from_gram(vec![vec![qr(2, 1), qr(1, 1)], vec![qr(1, 1), qr(2, 1)]])
            .unwrap();
        assert!((arakelov_degree(&hex) + 0.5 * 3f64.ln()).abs() < 1e-14);
        assert_eq!(slope(&HermLattice::trivial()), f64::NEG_INFINITY);
    }

    #[test]
    fn minima() {
        let std2 = HermLattice::standard(2);
        let (l1, w) = first_minimum(&std2).unwrap();
        assert!((l1 - 1.0).abs() < 1e-12);
        assert_eq!(w.iter().filter(|x| !x.is_zero()).count(), 1);
        let hex = HermLattice::from_gram(vec![vec![qr(2, 1), qr(1, 1)], vec![qr(1, 1), qr(2, 1)]])
            .unwrap();
        let (l1h, _) = first_minimum(&hex).unwrap();
        assert!((l1h - 2f64.sqrt()).abs() < 1e-12);
        let two_z = HermLattice::from_basis(vec![vec![bi(2)]]).unwrap();
        assert!((first_minimum(&two_z).unwrap().0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn heights() {
        let z1 = HermLattice::standard(1);
        // identity on ZZ^n
        let idn = HermLattice::standard(3);
        let phi: Vec<Vec<Q>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        assert!(map_height(&phi, &idn, &idn).unwrap().abs() < 1e-12);
        // multiplication by 2 on unit lattices: product formula gives 0
        let m2 = vec![vec![qr(2, 1)]];
        assert!(map_height(&m2, &z1, &z1).unwrap().abs() < 1e-12);
        // identity map into the scaled lattice 2ZZ: archimedean log 2 from
        // the norms, nonarchimedean 0 -> total log 2
        let two_z = HermLattice::from_basis(vec![vec![bi(2)]]).unwrap();
        // map sends generator of ZZ to 1/2 * generator(2ZZ)? stay integral:
        // phi = [1]: source ZZ (norm 1) -> target 2ZZ (norm 2): opnorm 2
        let h = map_height(&vec![vec![qr(1, 1)]], &z1, &two_z).unwrap();
        assert!((h - 2f64.ln()).abs() < 1e-12, "got {h}");
        // zero map marker
        assert_eq!(
            map_height(&vec![vec![qr(0, 1)]], &z1, &z1).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn saturated_kernels() {
        let l = saturate_kernel(&[vec![bi(1), bi(1)]], 2).unwrap();
        assert_eq!(l.rank(), 1);
        let l2 = saturate_kernel(&[vec![bi(2), bi(2)]], 2).unwrap();
        assert_eq!(l2.basis(), l.basis());
        let id = vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)]];
        assert_eq!(saturate_kernel(&id, 2).unwrap().rank(), 0);
    }

    #[test]
    fn degree_additivity_small() {
        // ZZ^2 filtered by the saturated sublattice spanned by (1,1):
        // deg(E) = deg(E^1) + deg(E/E^1)
        let e1 = HermLattice::from_basis(vec![vec![bi(1), bi(1)]]).unwrap();
        let deg_e1 = arakelov_degree(&e1);
        // quotient covolume: |det ZZ^2| / covol(E^1) = 1/sqrt(2)
        let deg_q = 0.0 - deg_e1;
        assert!((deg_e1 + deg_q - 0.0).abs() < 1e-12);
        assert!((deg_e1 + 0.5 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn minkowski_random() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(99);
        for _ in 0..25 {
            use rand::Rng;
            let rank = rng.gen_range(1..=4usize);
            let l = random_lattice(&mut rng, rank, rank + 1, 4);
            let (l1, _) = first_minimum(&l).unwrap();
            let bound = -slope(&l) + 0.5 * (l.rank() as f64).ln();
            assert!(
                l1.ln() <= bound + 1e-9,
                "Minkowski violated: {} > {}",
                l1.ln(),
                bound
            );
        }
    }

    #[test]
    fn filtration_small_degree() {
        let curve = FormalCurve::modular(30).unwrap();
        let f = FilteredLattice::from_curve(&curve, 1, 3).unwrap();
        assert_eq!(f.ambient_rank(), 5);
        let ranks = f.ranks();
        assert_eq!(ranks[0], 5);
        for w in ranks.windows(2) {
            assert!(w[0] - w[1] <= 1, "rank drops by more than one");
        }
    }

    #[test]
    fn filtered_short_vector_d1() {
        let curve = FormalCurve::modular(30).unwrap();
        let f = FilteredLattice::from_curve(&curve, 1, 2).unwrap();
        let (v, ord, cert) = filtered_short_vector(&f).unwrap();
        assert!(v.iter().any(|x| !x.is_zero()));
        match ord {
            OrdQ::Known(o) => assert!(o >= 2),
            OrdQ::AtLeast(o) => assert!(o >= 2),
        }
        assert!(cert.log_sup_norm <= cert.norm_bound + 1e-9);
        assert!(cert.enumerated);
    }
}
