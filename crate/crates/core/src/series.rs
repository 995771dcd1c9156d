//! Truncated Laurent/power series over exact rationals, and the classical
//! modular q-expansions (Eisenstein series, the elliptic modular function J)
//! together with their first-order differential system.
//!
//! A [`TruncSeries`] stores coefficients for exponents in the half-open
//! window `[offset, order)`; coefficients below the offset are exactly zero
//! and coefficients at or above `order` are unknown. Arithmetic propagates
//! the reliable window pessimistically so a result never claims coefficients
//! it cannot certify.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational coefficient type used across the crate.
pub type Q = BigRational;

/// First-nonzero-exponent report: definite, or undetermined at truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdQ {
    /// First nonzero coefficient sits at this exponent.
    Known(i64),
    /// All coefficients vanish below this truncation order.
    AtLeast(i64),
}

impl OrdQ {
    pub fn known(self) -> Option<i64> {
        match self {
            OrdQ::Known(v) => Some(v),
            OrdQ::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for OrdQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdQ::Known(v) => write!(f, "{v}"),
            OrdQ::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

/// Truncated Laurent series with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    offset: i64,
    coeffs: Vec<Q>,
    order: i64,
}

impl TruncSeries {
    /// Series from coefficients starting at `offset`; the reliable order is
    /// `offset + coeffs.len()`.
    pub fn new(offset: i64, coeffs: Vec<Q>) -> Self {
        let order = offset + coeffs.len() as i64;
        TruncSeries {
            offset,
            coeffs,
            order,
        }
    }

    /// The zero series, reliable through exponents below `order`.
    pub fn zero(order: i64) -> Self {
        TruncSeries {
            offset: order,
            coeffs: Vec::new(),
            order,
        }
    }

    /// The constant-1 series reliable below `order`.
    pub fn one(order: i64) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s = Self::monomial(0, Q::one(), order);
        }
        s
    }

    /// c · q^e, reliable below `order`.
    pub fn monomial(e: i64, c: Q, order: i64) -> Self {
        assert!(e < order, "monomial exponent outside reliable window");
        let mut coeffs = vec![Q::zero(); (order - e) as usize];
        coeffs[0] = c;
        TruncSeries {
            offset: e,
            coeffs,
            order,
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Exclusive upper end of the reliable exponent window.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficient of q^e: `None` when e is at/above the reliable order.
    pub fn coeff(&self, e: i64) -> Option<Q> {
        if e >= self.order {
            None
        } else if e < self.offset {
            Some(Q::zero())
        } else {
            Some(self.coeffs[(e - self.offset) as usize].clone())
        }
    }

    /// Index of the first nonzero coefficient, or `AtLeast(order)`.
    pub fn ord_q(&self) -> OrdQ {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                return OrdQ::Known(self.offset + i as i64);
            }
        }
        OrdQ::AtLeast(self.order)
    }

    pub fn is_zero_through_order(&self) -> bool {
        matches!(self.ord_q(), OrdQ::AtLeast(_))
    }

    /// True when every reliable coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Restrict the reliable window to exponents below `order`.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        if order <= self.offset {
            return Self::zero(order);
        }
        TruncSeries {
            offset: self.offset,
            coeffs: self.coeffs[..(order - self.offset) as usize].to_vec(),
            order,
        }
    }

    /// Multiply by q^k (exact shift of the window).
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            offset: self.offset + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            order: self.order,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let offset = self.offset.min(other.offset).min(order);
        let mut coeffs = vec![Q::zero(); (order - offset) as usize];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let e = offset + i as i64;
            let a = self.coeff(e).unwrap_or_else(Q::zero);
            let b = other.coeff(e).unwrap_or_else(Q::zero);
            *c = a + b;
        }
        TruncSeries {
            offset,
            coeffs,
            order,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        TruncSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    /// Cauchy product. The reliable order of the result is
    /// `min(order_a + offset_b, order_b + offset_a)`: beyond that, unknown
    /// coefficients of one factor could contribute.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.offset).min(other.order + self.offset);
        let offset = self.offset + other.offset;
        if offset >= order {
            return Self::zero(order);
        }
        let mut coeffs = vec![Q::zero(); (order - offset) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.offset + i as i64;
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e = ea + other.offset + j as i64;
                if e >= order {
                    break;
                }
                coeffs[(e - offset) as usize] += a * b;
            }
        }
        TruncSeries {
            offset,
            coeffs,
            order,
        }
    }

    /// Integer power by repeated squaring; `pow(0)` is the constant 1 with
    /// this series' reliable order.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.order);
        }
        let mut base = self.clone();
        let mut e = e;
        let mut acc: Option<TruncSeries> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.unwrap()
    }

    /// Multiplicative inverse. Requires a definite leading coefficient; the
    /// reliable window shrinks by twice the valuation.
    pub fn invert(&self) -> Result<Self, Error> {
        let v = match self.ord_q() {
            OrdQ::Known(v) => v,
            OrdQ::AtLeast(n) => return Err(Error::UndeterminedValuation { truncation: n }),
        };
        // Unit part u with u(0) != 0, reliable for relative exponents < L.
        let l = (self.order - v) as usize;
        let lead = self.coeff(v).unwrap();
        let mut inv = vec![Q::zero(); l];
        inv[0] = Q::one() / lead.clone();
        for k in 1..l {
            // coefficient recurrence: sum_{i=0..k} u_i * inv_{k-i} = 0
            let mut acc = Q::zero();
            for i in 1..=k {
                let u_i = self.coeff(v + i as i64).unwrap();
                if !u_i.is_zero() {
                    acc += u_i * inv[k - i].clone();
                }
            }
            inv[k] = -acc / lead.clone();
        }
        Ok(TruncSeries::new(-v, inv))
    }

    /// Exact series division `self / other`.
    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        Ok(self.mul(&other.invert()?))
    }

    /// θ = q d/dq: multiply the coefficient of q^j by j.
    pub fn theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Q::from(BigInt::from(self.offset + i as i64)))
            .collect();
        TruncSeries {
            offset: self.offset,
            coeffs,
            order: self.order,
        }
    }

    /// (c q)^j d^j/dq^j: sends c_e q^e to c^j · e(e−1)⋯(e−j+1) · c_e q^e.
    /// This is the falling-factorial form of iterated θ, scaled by c^j.
    pub fn scaled_derivative(&self, j: u32, c: &Q) -> Self {
        let cj = (0..j).fold(Q::one(), |acc, _| acc * c);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, coeff)| {
                let e = self.offset + i as i64;
                let mut fall = Q::one();
                for t in 0..j as i64 {
                    fall *= Q::from(BigInt::from(e - t));
                }
                coeff * fall * cj.clone()
            })
            .collect();
        TruncSeries {
            offset: self.offset,
            coeffs,
            order: self.order,
        }
    }

    /// Largest |coefficient| over the reliable window.
    pub fn max_abs_coeff(&self) -> Q {
        let mut m = Q::zero();
        for c in &self.coeffs {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }
}

/// σ_k(j) = Σ_{d | j} d^k, exact.
pub fn divisor_sigma(k: u32, j: u64) -> Result<BigInt, Error> {
    if j == 0 {
        return Err(Error::InvalidArgument(
            "divisor_sigma undefined at j = 0".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "divisor_sigma requires k >= 1".into(),
        ));
    }
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= j {
        if j % d == 0 {
            acc += BigInt::from(d).pow(k);
            let e = j / d;
            if e != d {
                acc += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// Eisenstein series E_2, E_4, E_6 truncated below `order`.
pub fn eisenstein(weight: u32, order: i64) -> Result<TruncSeries, Error> {
    let mult: i64 = match weight {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "eisenstein weight must be 2, 4 or 6 (got {weight})"
            )))
        }
    };
    if order < 1 {
        return Err(Error::InvalidArgument("eisenstein needs order >= 1".into()));
    }
    let mut coeffs = vec![Q::zero(); order as usize];
    coeffs[0] = Q::one();
    for j in 1..order as u64 {
        let s = divisor_sigma(weight - 1, j)?;
        coeffs[j as usize] = Q::from(BigInt::from(mult) * s);
    }
    Ok(TruncSeries::new(0, coeffs))
}

/// J(q) = 1728·E4³/(E4³ − E6²): Laurent series with leading term q^{-1}.
///
/// Coefficients are reliable for exponents below `order`; internally the
/// Eisenstein inputs are computed with enough slack to absorb the division
/// by the valuation-1 denominator.
pub fn j_invariant(order: i64) -> Result<TruncSeries, Error> {
    if order < 1 {
        return Err(Error::InvalidArgument(
            "j_invariant needs order >= 1".into(),
        ));
    }
    let n = order + 2;
    let e4 = eisenstein(4, n)?;
    let e6 = eisenstein(6, n)?;
    let num = e4.pow(3).scale(&Q::from(BigInt::from(1728)));
    let den = e4.pow(3).sub(&e6.pow(2));
    Ok(num.div(&den)?.truncate(order))
}

/// Residuals of the Ramanujan system
/// θE2 − (E2²−E4)/12, θE4 − (E2E4−E6)/3, θE6 − (E2E6−E4²)/2,
/// each exact at truncation `order`; all three vanish identically.
pub fn ramanujan_residuals(order: i64) -> Result<[TruncSeries; 3], Error> {
    let e2 = eisenstein(2, order)?;
    let e4 = eisenstein(4, order)?;
    let e6 = eisenstein(6, order)?;
    let r1 = e2.theta().sub(
        &e2.pow(2)
            .sub(&e4)
            .scale(&Q::new(BigInt::one(), BigInt::from(12))),
    );
    let r2 = e4.theta().sub(
        &e2.mul(&e4)
            .sub(&e6)
            .scale(&Q::new(BigInt::one(), BigInt::from(3))),
    );
    let r3 = e6.theta().sub(
        &e2.mul(&e6)
            .sub(&e4.pow(2))
            .scale(&Q::new(BigInt::one(), BigInt::from(2))),
    );
    Ok([r1, r2, r3])
}
