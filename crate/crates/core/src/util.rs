//! Shared numeric helpers: exact binomials, logarithms of big rationals,
//! word-size modular arithmetic, CRT lifting and rational reconstruction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// C(n, k) as usize; panics on overflow (callers stay well inside range).
pub fn binomial_usize(n: u64, k: u64) -> usize {
    binomial(n, k).to_usize().expect("binomial overflows usize")
}

/// Natural log of a positive big integer, accurate to f64 precision
/// regardless of magnitude (top bits + exponent, no overflow).
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 53 {
        return (mag.to_f64().unwrap()).ln();
    }
    let shift = bits - 53;
    let top: BigUint = mag >> shift;
    (top.to_f64().unwrap()).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive big rational.
pub fn ln_bigrational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Convert a big rational to f64 without overflowing on huge operands.
pub fn bigrational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_bigrational(&x.abs()).exp()
}

// ---------------------------------------------------------------------------
// Word-size modular arithmetic (moduli < 2^62).
// ---------------------------------------------------------------------------

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, m: u64) -> u64 {
    // Extended Euclid; m prime in our uses, a != 0 mod m.
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "inverse of non-unit");
    t0.rem_euclid(m as i128) as u64
}

/// Deterministic Miller–Rabin for u64 (sufficient witness set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes below 2^62, descending.
pub fn primes_below_2_62(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    while primes.len() < count {
        if is_prime_u64(n) {
            primes.push(n);
        }
        n -= 2;
    }
    primes
}

/// Reduce a big integer mod a word-size modulus.
pub fn bigint_mod_u64(x: &BigInt, m: u64) -> u64 {
    let r = (x % BigInt::from(m)).to_i64().unwrap();
    r.rem_euclid(m as i64) as u64
}

/// CRT-combine residues `(r_i mod m_i)` into a value mod prod(m_i),
/// returned in symmetric range handled by the caller.
pub struct CrtAccumulator {
    pub value: BigInt,
    pub modulus: BigInt,
}

impl CrtAccumulator {
    pub fn new() -> Self {
        CrtAccumulator {
            value: BigInt::zero(),
            modulus: BigInt::one(),
        }
    }

    pub fn push(&mut self, residue: u64, prime: u64) {
        let p = BigInt::from(prime);
        // value' = value + modulus * t where t = (residue - value) / modulus mod p
        let cur = bigint_mod_u64(&self.value, prime);
        let minv = inv_mod(bigint_mod_u64(&self.modulus, prime), prime);
        let t = mul_mod((prime + residue % prime - cur) % prime, minv, prime);
        self.value += &self.modulus * BigInt::from(t);
        self.modulus *= p;
    }
}

impl Default for CrtAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

/// Rational reconstruction of `v mod m`: finds n/d with |n|, d <= sqrt(m/2),
/// gcd(d, m) = 1, n ≡ v·d (mod m). Returns None when no such pair exists.
pub fn rational_reconstruct(v: &BigInt, m: &BigInt) -> Option<BigRational> {
    let v = v.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), v);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::one() && !r1.is_zero() {
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    Some(BigRational::new(num, den))
}

/// Content (gcd of entries) of an integer vector; zero vector gives 0.
pub fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}
