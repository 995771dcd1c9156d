//! Exact integer/rational linear algebra: saturated integer kernels via
//! multimodular elimination with certified reconstruction, Hermite/Smith
//! reductions, fraction-free principal minors, LLL reduction on Gram
//! matrices, and shortest-vector enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::util::{
    bigint_mod_u64, inv_mod, mul_mod, primes_below_2_62, rational_reconstruct, CrtAccumulator,
};

type Q = BigRational;

// ---------------------------------------------------------------------------
// Saturated integer kernel (multimodular, certified).
// ---------------------------------------------------------------------------

/// Reduced row echelon form mod p. Returns (pivot columns, rref rows).
fn rref_mod_p(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        // find pivot
        let mut sel = None;
        for i in r..rows.len() {
            if rows[i][c] != 0 {
                sel = Some(i);
                break;
            }
        }
        let Some(i) = sel else { continue };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in c..ncols {
                    let sub = mul_mod(f, rows[r][j], p);
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (pivots, rows)
}

/// Kernel basis mod p in canonical free-variable form: one vector per free
/// column f, with entry 1 at f and −rref values at pivot columns.
fn kernel_mod_p(
    matrix: &[Vec<BigInt>],
    ncols: usize,
    p: u64,
) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    let rows: Vec<Vec<u64>> = matrix
        .iter()
        .map(|r| r.iter().map(|x| bigint_mod_u64(x, p)).collect())
        .collect();
    let (pivots, rref) = rref_mod_p(rows, ncols, p);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let free: Vec<usize> = (0..ncols).filter(|&c| !is_pivot[c]).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = (p - rref[i][f] % p) % p;
        }
        basis.push(v);
    }
    (pivots, free, basis)
}

/// Saturated basis of ker(matrix) ∩ ℤ^ncols, rows in Hermite normal form.
///
/// Multimodular: eliminate modulo word-size primes, CRT-lift the canonical
/// rational kernel basis, reconstruct, clear denominators, then saturate.
/// The result is certified unconditionally: each vector is verified to lie
/// in the kernel by exact integer arithmetic, and the count matches the
/// mod-p upper bound for the kernel dimension.
pub fn integer_kernel(matrix: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    if matrix.is_empty() || matrix.iter().all(|r| r.iter().all(|x| x.is_zero())) {
        // full kernel = identity
        return (0..ncols)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ncols];
                v[i] = BigInt::one();
                v
            })
            .collect();
    }
    for r in matrix {
        assert_eq!(r.len(), ncols, "ragged matrix");
    }

    let mut budget = 8usize;
    loop {
        let primes = primes_below_2_62(budget);
        // Highest rank observed = true rank (certified below); keep primes
        // agreeing on the maximal pivot set.
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        let mut datasets: Vec<(u64, Vec<Vec<u64>>)> = Vec::new();
        for &p in &primes {
            let (pivots, free, basis) = kernel_mod_p(matrix, ncols, p);
            match &best {
                Some((bp, _)) if pivots.len() < bp.len() => continue,
                Some((bp, _)) if pivots.len() == bp.len() && *bp == pivots => {
                    datasets.push((p, basis));
                }
                _ => {
                    best = Some((pivots, free));
                    datasets = vec![(p, basis)];
                }
            }
        }
        let (pivots, free) = best.expect("at least one prime");
        let kdim = free.len();
        if kdim == 0 {
            return Vec::new();
        }

        // CRT per entry across agreeing primes, then rational reconstruction
        // of the canonical free-column kernel basis over ℚ.
        let mut ok = true;
        let mut rational: Vec<Vec<Q>> = Vec::with_capacity(kdim);
        'recon: for vi in 0..kdim {
            let mut entries: Vec<Q> = Vec::with_capacity(ncols);
            for c in 0..ncols {
                let mut acc = CrtAccumulator::new();
                for (p, basis) in &datasets {
                    acc.push(basis[vi][c], *p);
                }
                match rational_reconstruct(&acc.value, &acc.modulus) {
                    Some(q) => entries.push(q),
                    None => {
                        ok = false;
                        break 'recon;
                    }
                }
            }
            rational.push(entries);
        }

        if ok {
            // Exact verification: every reconstructed vector annihilates
            // every row over ℚ.
            let verified = rational.iter().all(|v| {
                matrix.iter().all(|row| {
                    let mut s = Q::zero();
                    for (a, b) in row.iter().zip(v) {
                        if !a.is_zero() && !b.is_zero() {
                            s += Q::from(a.clone()) * b;
                        }
                    }
                    s.is_zero()
                })
            });
            if verified {
                // kdim vectors, independent by the free-column structure,
                // and kernel dimension <= kdim by the mod-p rank bound:
                // this is the full rational kernel.
                return saturated_kernel_from_rational(&pivots, &free, &rational, ncols);
            }
        }
        budget *= 2;
        assert!(budget <= 4096, "kernel reconstruction failed to stabilize");
    }
}

/// Basis of ker ∩ ℤ^ncols from the canonical rational kernel basis
/// (vector j has entry 1 at free column j, 0 at the other free columns).
/// Every kernel element is x = Σ_j y_j v_j with y ∈ ℤ^kdim, and x is
/// integral iff its pivot coordinates are, i.e. iff A·y ≡ 0 (mod d) with d
/// the common denominator and A the scaled pivot entries. The congruence
/// lattice is extracted by one Hermite reduction on residues bounded by d,
/// which sidesteps the entry blowup of a Smith-form saturation.
fn saturated_kernel_from_rational(
    pivots: &[usize],
    free: &[usize],
    rational: &[Vec<Q>],
    ncols: usize,
) -> Vec<Vec<BigInt>> {
    let k = rational.len();
    let r = pivots.len();
    let mut d = BigInt::one();
    for v in rational {
        for &p in pivots {
            d = d.lcm(v[p].denom());
        }
    }
    let y_basis: Vec<Vec<BigInt>> = if d.is_one() || r == 0 {
        (0..k)
            .map(|j| {
                let mut e = vec![BigInt::zero(); k];
                e[j] = BigInt::one();
                e
            })
            .collect()
    } else {
        // rows (A·e_j mod d, e_j) for each generator plus (d·e_i, 0) for
        // each congruence; the HNF rows vanishing on the first r columns
        // project onto a basis of { y : A y ≡ 0 mod d }
        let mut stack: Vec<Vec<BigInt>> = Vec::with_capacity(k + r);
        for (j, v) in rational.iter().enumerate() {
            let mut row = vec![BigInt::zero(); r + k];
            for (i, &p) in pivots.iter().enumerate() {
                row[i] = (v[p].numer() * (&d / v[p].denom())).mod_floor(&d);
            }
            row[r + j] = BigInt::one();
            stack.push(row);
        }
        for i in 0..r {
            let mut row = vec![BigInt::zero(); r + k];
            row[i] = d.clone();
            stack.push(row);
        }
        hnf_rows(&stack)
            .into_iter()
            .filter(|row| row[..r].iter().all(|x| x.is_zero()))
            .map(|row| row[r..].to_vec())
            .collect()
    };
    assert_eq!(y_basis.len(), k, "congruence lattice lost rank");

    let mut out = Vec::with_capacity(k);
    for y in &y_basis {
        let mut x = vec![BigInt::zero(); ncols];
        for (j, &f) in free.iter().enumerate() {
            x[f] = y[j].clone();
        }
        for &p in pivots {
            let mut s = Q::zero();
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    s += rational[j][p].clone() * Q::from(yj.clone());
                }
            }
            assert!(s.is_integer(), "pivot coordinate must be integral");
            x[p] = s.to_integer();
        }
        out.push(x);
    }
    hnf_rows(&out)
}

/// Saturation of the row span inside ℤ^N: given independent integer rows H,
/// returns rows spanning (span_Q(H)) ∩ ℤ^N. Uses a Smith diagonalization
/// U·H·V = [D 0]: the rows of D^{-1}·U·H form the saturated basis.
pub fn saturate_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    if rows.len() == 1 {
        let mut v = rows[0].clone();
        let g = crate::util::content(&v);
        if !g.is_zero() && !g.is_one() {
            for x in v.iter_mut() {
                *x /= &g;
            }
        }
        return vec![v];
    }
    let (u, diag) = snf_left_transform(rows);
    let k = rows.len();
    let n = rows[0].len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = vec![BigInt::zero(); n];
        for (j, rj) in rows.iter().enumerate() {
            if u[i][j].is_zero() {
                continue;
            }
            for c in 0..n {
                row[c] += &u[i][j] * &rj[c];
            }
        }
        let d = &diag[i];
        assert!(!d.is_zero(), "rows not independent in saturation");
        for x in row.iter_mut() {
            let (q, r) = x.div_rem(d);
            assert!(r.is_zero(), "Smith divisibility violated");
            *x = q;
        }
        out.push(row);
    }
    out
}

/// Diagonalize by unimodular row/column operations, tracking only the row
/// transform: returns (U, diag) with U·M·V = diag (V discarded). Diagonal
/// entries are returned for the first rank positions.
fn snf_left_transform(m: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let k = m.len();
    let n = m[0].len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            let mut r = vec![BigInt::zero(); k];
            r[i] = BigInt::one();
            r
        })
        .collect();
    let mut diag = Vec::new();
    let mut t = 0usize; // current pivot index
    while t < k {
        // find smallest nonzero entry in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..k {
            for j in t..n {
                if !a[i][j].is_zero() {
                    match &pivot {
                        Some((pi, pj)) if a[*pi][*pj].abs() <= a[i][j].abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        // clear column t below and row t to the right, repeating until clean
        loop {
            let mut dirty = false;
            for i in t + 1..k {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[i][t], &a[t][t]);
                if !q.is_zero() {
                    for j in 0..n {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    for j in 0..k {
                        let s = &q * &u[t][j];
                        u[i][j] -= s;
                    }
                }
                if !a[i][t].is_zero() {
                    // remainder smaller than pivot: swap up and restart
                    a.swap(t, i);
                    u.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[t][j].clone(), &a[t][t]);
                if !q.is_zero() {
                    for i in 0..k {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    (u, diag)
}

/// Division rounded toward the nearest integer (ties toward zero).
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Row-style Hermite normal form (echelon, positive pivots, entries above a
/// pivot reduced into [0, pivot)). Input rows must be independent.
pub fn hnf_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let k = a.len();
    let mut r = 0usize;
    for c in 0..n {
        if r == k {
            break;
        }
        // gcd-reduce column c among rows r..k
        loop {
            let mut idx: Option<usize> = None;
            for i in r..k {
                if !a[i][c].is_zero() {
                    match idx {
                        Some(j) if a[j][c].abs() <= a[i][c].abs() => {}
                        _ => idx = Some(i),
                    }
                }
            }
            let Some(imin) = idx else { break };
            a.swap(r, imin);
            let mut again = false;
            for i in r + 1..k {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[i][c].clone(), &a[r][c]);
                for j in 0..n {
                    let s = &q * &a[r][j];
                    a[i][j] -= s;
                }
                if !a[i][c].is_zero() {
                    again = true;
                }
            }
            if !again {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        // reduce entries above the pivot
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                for j in 0..n {
                    let s = &q * &a[r][j];
                    a[i][j] -= s;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

// ---------------------------------------------------------------------------
// Fraction-free determinants and principal minors.
// ---------------------------------------------------------------------------

/// Leading principal minors d_1..d_n of a symmetric positive-definite
/// integer matrix, by fraction-free (Bareiss) elimination.
pub fn leading_principal_minors(g: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = g.len();
    let mut a: Vec<Vec<BigInt>> = g.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        assert!(!a[k][k].is_zero(), "zero pivot in positive-definite minor");
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
        minors.push(a[k][k].clone());
    }
    minors
}

/// Exact determinant of a square rational matrix (Gaussian elimination).
pub fn rational_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let mut piv = None;
        for r in c..n {
            if !a[r][c].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { return Q::zero() };
        if piv != c {
            a.swap(c, piv);
            det = -det;
        }
        det *= a[c][c].clone();
        let inv = Q::one() / a[c][c].clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() * inv.clone();
            for j in c..n {
                let s = f.clone() * a[c][j].clone();
                a[r][j] -= s;
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------
// LLL on Gram matrices and shortest-vector enumeration.
// ---------------------------------------------------------------------------

/// Gram-Schmidt data (μ coefficients and squared lengths B) from a Gram
/// matrix, exact.
fn gram_schmidt(g: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = g.len();
    let mut mu = vec![vec![Q::zero(); n]; n];
    let mut b = vec![Q::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j].clone();
            for k in 0..j {
                s -= mu[i][k].clone() * mu[j][k].clone() * b[k].clone();
            }
            mu[i][j] = s / b[j].clone();
        }
        let mut s = g[i][i].clone();
        for k in 0..i {
            s -= mu[i][k].clone() * mu[i][k].clone() * b[k].clone();
        }
        b[i] = s;
    }
    (mu, b)
}

/// LLL reduction (δ = 3/4 by default via `lll_reduce_gram`) acting on a Gram
/// matrix; returns the unimodular transform T with G' = T G Tᵀ.
///
/// Textbook size-reduction + Lovász-swap loop with exact rational
/// Gram-Schmidt recomputed incrementally.
pub fn lll_gram(g: &mut Vec<Vec<Q>>, delta: Q) -> Vec<Vec<BigInt>> {
    let n = g.len();
    let mut t: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::one();
            r
        })
        .collect();
    if n <= 1 {
        return t;
    }
    let (mut mu, mut b) = gram_schmidt(g);

    // b_k -= r b_j on the Gram matrix and transform.
    let reduce = |g: &mut Vec<Vec<Q>>,
                  t: &mut Vec<Vec<BigInt>>,
                  mu: &mut Vec<Vec<Q>>,
                  k: usize,
                  j: usize| {
        let r_rat = &mu[k][j];
        let r = rounded_rat(r_rat);
        if r.is_zero() {
            return;
        }
        let rq = Q::from(r.clone());
        // transform
        for c in 0..t[k].len() {
            let s = &r * &t[j][c];
            t[k][c] -= s;
        }
        // gram: row/col k
        let gkj: Vec<Q> = (0..g.len()).map(|c| g[j][c].clone()).collect();
        let gjj = g[j][j].clone();
        let gkj_k = g[k][j].clone();
        for c in 0..g.len() {
            if c == k {
                continue;
            }
            let s = rq.clone() * gkj[c].clone();
            g[k][c] -= s.clone();
            g[c][k] = g[k][c].clone();
        }
        g[k][k] = g[k][k].clone() - rq.clone() * gkj_k.clone() * Q::from(BigInt::from(2))
            + rq.clone() * rq.clone() * gjj;
        // mu row k
        mu[k][j] -= rq.clone();
        for i in 0..j {
            let s = rq.clone() * mu[j][i].clone();
            mu[k][i] -= s;
        }
    };

    let mut k = 1usize;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].clone().abs() > Q::new(BigInt::one(), BigInt::from(2)) {
                reduce(g, &mut t, &mut mu, k, j);
            }
        }
        let lhs = b[k].clone();
        let rhs = (delta.clone() - mu[k][k - 1].clone() * mu[k][k - 1].clone()) * b[k - 1].clone();
        if lhs >= rhs {
            k += 1;
        } else {
            // swap rows k-1, k with the standard incremental GS update
            t.swap(k - 1, k);
            g.swap(k - 1, k);
            for row in g.iter_mut() {
                row.swap(k - 1, k);
            }
            let m = mu[k][k - 1].clone();
            let bprime = b[k].clone() + m.clone() * m.clone() * b[k - 1].clone();
            mu[k][k - 1] = m.clone() * b[k - 1].clone() / bprime.clone();
            b[k] = b[k - 1].clone() * b[k].clone() / bprime.clone();
            b[k - 1] = bprime;
            for j in 0..k.saturating_sub(1) {
                let tmp = mu[k - 1][j].clone();
                mu[k - 1][j] = mu[k][j].clone();
                mu[k][j] = tmp;
            }
            let mkk1 = mu[k][k - 1].clone();
            for i in k + 1..n {
                let tcoef = mu[i][k].clone();
                mu[i][k] = mu[i][k - 1].clone() - m.clone() * tcoef.clone();
                mu[i][k - 1] = tcoef + mkk1.clone() * mu[i][k].clone();
            }
            if k > 1 {
                k -= 1;
            }
        }
    }
    t
}

/// Exact pairwise (Lagrange-style) size reduction of an integer row
/// basis: sweeps over ordered pairs, replacing b_i by b_i − round(μ)·b_j
/// whenever that strictly shrinks ‖b_i‖². Every step is an exact
/// unimodular operation, so the row lattice is unchanged. Much weaker than
/// LLL, but it collapses the huge entries of very skewed bases at
/// negligible cost, after which an exact LLL pass is affordable.
pub fn pairwise_reduce_rows(rows: &mut [Vec<BigInt>]) {
    let n = rows.len();
    if n <= 1 {
        return;
    }
    let norm2 = |r: &[BigInt]| -> BigInt { r.iter().map(|x| x * x).sum() };
    let mut norms: Vec<BigInt> = rows.iter().map(|r| norm2(r)).collect();
    for _sweep in 0..200 {
        let mut changed = false;
        // visit targets in decreasing-norm order so the largest rows are
        // reduced against everything available
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| norms[b].cmp(&norms[a]));
        for &i in &order {
            for j in 0..n {
                if i == j || norms[j].is_zero() || norms[j] > norms[i] {
                    continue;
                }
                let dot: BigInt = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                let r = rounded_div(&dot, &norms[j]);
                if r.is_zero() {
                    continue;
                }
                let new_norm = &norms[i] - (BigInt::from(2) * &dot - &r * &norms[j]) * &r;
                if new_norm < norms[i] {
                    let (ri, rj) = if i < j {
                        let (a, b) = rows.split_at_mut(j);
                        (&mut a[i], &b[0])
                    } else {
                        let (a, b) = rows.split_at_mut(i);
                        (&mut b[0], &a[j])
                    };
                    for (x, y) in ri.iter_mut().zip(rj.iter()) {
                        *x -= &r * y;
                    }
                    norms[i] = new_norm;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Floating-point LLL sweeps over an integer row basis, with a truncation
/// ladder for entries far beyond f64 steering range: while entries exceed
/// 64 bits, the sweep runs on the basis truncated to its top 48 bits and
/// every unimodular operation is mirrored onto the exact rows, which
/// shrinks the top of the ladder; once entries are small the sweep runs on
/// the rows directly. All mutations of the exact rows are unimodular row
/// operations, so the row lattice never changes. Numerical breakdown only
/// costs reduction quality, never correctness; callers needing guarantees
/// must re-verify claims on the returned exact rows.
pub fn float_lll_rows(rows: &mut [Vec<BigInt>]) {
    let total_norm_bits = |rows: &[Vec<BigInt>]| -> u64 {
        rows.iter()
            .map(|r| r.iter().map(|x| x * x).sum::<BigInt>().bits())
            .sum()
    };
    let max_entry_bits = |rows: &[Vec<BigInt>]| -> u64 {
        rows.iter()
            .flat_map(|r| r.iter().map(|x| x.bits()))
            .max()
            .unwrap_or(0)
    };
    let trace = std::env::var("LLL_TRACE").is_ok();
    let mut best = u64::MAX;
    for pass in 0..64 {
        let ebits = max_entry_bits(rows);
        let t = ebits.saturating_sub(48);
        if t > 0 {
            let mut guide: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|x| x >> t).collect())
                .collect();
            float_lll_pass(&mut guide, Some(rows));
            pairwise_reduce_rows(rows);
        } else {
            float_lll_pass(rows, None);
        }
        let now = total_norm_bits(rows);
        if trace {
            eprintln!(
                "float_lll pass {pass}: trunc {t}, total_norm_bits -> {now}, max entry {}",
                max_entry_bits(rows)
            );
        }
        if now >= best {
            break;
        }
        best = now;
    }
}

/// One f64 reduction sweep of `rows`; every row operation is mirrored onto
/// `shadow` when present (the truncation-ladder caller passes the
/// full-precision rows there).
fn float_lll_pass(rows: &mut [Vec<BigInt>], mut shadow: Option<&mut [Vec<BigInt>]>) {
    let n = rows.len();
    if n <= 1 {
        return;
    }
    let m = rows[0].len();
    let ebits = rows
        .iter()
        .flat_map(|r| r.iter().map(|x| x.bits()))
        .max()
        .unwrap_or(0);
    let shift = ebits.saturating_sub(40) as i64;
    let scaled = |x: &BigInt| -> f64 {
        let bits = x.bits() as i64;
        let drop = (bits - 53).max(0) as u64;
        (x >> drop).to_f64().unwrap_or(0.0) * ((drop as i64 - shift) as f64).exp2()
    };
    let mut v: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(scaled).collect())
        .collect();

    // modified Gram-Schmidt of the working vectors; degenerate directions
    // are clamped so the loop can continue on the healthy rows
    let mgs = |v: &[Vec<f64>]| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0f64; n]; n];
        let mut b = vec![0.0f64; n];
        let mut u = v.to_vec();
        for i in 0..n {
            for j in 0..i {
                let dot: f64 = u[i].iter().zip(&u[j]).map(|(a, c)| a * c).sum();
                let mij = if b[j] > 0.0 { dot / b[j] } else { 0.0 };
                mu[i][j] = mij;
                let (head, tail) = u.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= mij * y;
                }
            }
            let nn: f64 = u[i].iter().map(|x| x * x).sum();
            b[i] = if nn.is_finite() && nn > 0.0 {
                nn
            } else {
                1e-300
            };
        }
        (mu, b)
    };

    let (mut mu, mut b) = mgs(&v);
    let mut k = 1usize;
    let mut iters = 0usize;
    while k < n {
        iters += 1;
        if iters > 100_000 {
            break;
        }
        let mut changed = false;
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 && r.is_finite() {
                let rb = BigInt::from(r.clamp(-9.0e15, 9.0e15) as i64);
                for c in 0..m {
                    let s = &rb * &rows[j][c];
                    rows[k][c] -= s;
                    let t = r * v[j][c];
                    v[k][c] -= t;
                }
                if let Some(sh) = shadow.as_deref_mut() {
                    for c in 0..m {
                        let s = &rb * &sh[j][c];
                        sh[k][c] -= s;
                    }
                }
                changed = true;
            }
        }
        if changed {
            let g = mgs(&v);
            mu = g.0;
            b = g.1;
        }
        if b[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            k += 1;
        } else {
            rows.swap(k - 1, k);
            v.swap(k - 1, k);
            if let Some(sh) = shadow.as_deref_mut() {
                sh.swap(k - 1, k);
            }
            let g = mgs(&v);
            mu = g.0;
            b = g.1;
            if k > 1 {
                k -= 1;
            }
        }
    }
}

/// δ = 3/4 LLL; returns (reduced gram, transform).
pub fn lll_reduce_gram(g: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<Vec<BigInt>>) {
    let mut g2 = g.to_vec();
    let t = lll_gram(&mut g2, Q::new(BigInt::from(3), BigInt::from(4)));
    (g2, t)
}

fn rounded_rat(x: &Q) -> BigInt {
    rounded_div(x.numer(), x.denom())
}

/// Shortest nonzero vector of a positive-definite Gram matrix by
/// Fincke–Pohst enumeration over an LLL-reduced basis. Returns coordinates
/// in the ORIGINAL basis and the exact squared norm.
pub fn shortest_vector(g: &[Vec<Q>]) -> (Vec<BigInt>, Q) {
    let n = g.len();
    assert!(n >= 1);
    let (gr, t) = lll_reduce_gram(g);
    // f64 Cholesky of the reduced Gram: Q(x) = Σ d_i (x_i + Σ_{j>i} m_ij x_j)².
    let mut m = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = crate::util::bigrational_to_f64(&gr[i][j]);
        }
    }
    let mut d = vec![0.0f64; n];
    let mut u = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        let mut s = m[i][i];
        for k in 0..i {
            s -= d[k] * u[k][i] * u[k][i];
        }
        d[i] = s;
        for j in i + 1..n {
            let mut s2 = m[i][j];
            for k in 0..i {
                s2 -= d[k] * u[k][i] * u[k][j];
            }
            u[i][j] = s2 / d[i];
        }
    }

    let exact_norm = |x: &[i64]| -> Q {
        let mut acc = Q::zero();
        for i in 0..n {
            for j in 0..n {
                if x[i] != 0 && x[j] != 0 {
                    acc += gr[i][j].clone() * Q::from(BigInt::from(x[i] * x[j]));
                }
            }
        }
        acc
    };

    // initial bound: the shortest reduced-basis vector
    let mut best_x: Vec<i64> = {
        let mut bi = 0;
        for i in 1..n {
            if gr[i][i] < gr[bi][bi] {
                bi = i;
            }
        }
        let mut x = vec![0i64; n];
        x[bi] = 1;
        x
    };
    let mut best_norm = exact_norm(&best_x);
    let mut bound = crate::util::bigrational_to_f64(&best_norm) * (1.0 + 1e-9);

    // depth-first enumeration from the last coordinate
    fn descend(
        level: isize,
        n: usize,
        d: &[f64],
        u: &[Vec<f64>],
        x: &mut Vec<i64>,
        partial: &mut Vec<f64>, // accumulated norm from levels > level
        centers: &mut Vec<f64>,
        bound: &mut f64,
        best_x: &mut Vec<i64>,
        best_norm: &mut Q,
        exact_norm: &dyn Fn(&[i64]) -> Q,
    ) {
        if level < 0 {
            if x.iter().any(|&c| c != 0) {
                let norm = exact_norm(x);
                let nf = crate::util::bigrational_to_f64(&norm);
                if norm < *best_norm {
                    *best_norm = norm;
                    *best_x = x.clone();
                    *bound = nf * (1.0 + 1e-9);
                }
            }
            return;
        }
        let i = level as usize;
        let mut c = 0.0;
        for j in i + 1..n {
            c += u[i][j] * x[j] as f64;
        }
        centers[i] = c;
        let rem = *bound - partial[i + 1];
        if rem < 0.0 {
            return;
        }
        let half = (rem / d[i]).max(0.0).sqrt() + 1e-9;
        let lo = (-c - half).ceil() as i64;
        let hi = (-c + half).floor() as i64;
        for xi in lo..=hi {
            x[i] = xi;
            let t = xi as f64 + c;
            partial[i] = partial[i + 1] + d[i] * t * t;
            if partial[i] <= *bound + 1e-12 {
                descend(
                    level - 1,
                    n,
                    d,
                    u,
                    x,
                    partial,
                    centers,
                    bound,
                    best_x,
                    best_norm,
                    exact_norm,
                );
            }
        }
        x[i] = 0;
    }

    let mut x = vec![0i64; n];
    let mut partial = vec![0.0f64; n + 1];
    let mut centers = vec![0.0f64; n];
    descend(
        (n - 1) as isize,
        n,
        &d,
        &u,
        &mut x,
        &mut partial,
        &mut centers,
        &mut bound,
        &mut best_x,
        &mut best_norm,
        &exact_norm,
    );

    // map back to the original basis via the transform rows
    let mut coords = vec![BigInt::zero(); n];
    for (i, &xi) in best_x.iter().enumerate() {
        if xi != 0 {
            for c in 0..n {
                coords[c] += BigInt::from(xi) * &t[i][c];
            }
        }
    }
    (coords, best_norm)
}
