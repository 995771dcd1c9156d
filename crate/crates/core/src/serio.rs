//! Serialization of the exact types (series, polynomials, lattices) to
//! JSON-friendly representations with `num/den` rational strings, plus the
//! fixed-precision float formatting used by the structured and CSV outputs.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::HermLattice;
use crate::polyops::MPoly;
use crate::series::{TruncSeries, Q};

/// Rational to the canonical `num/den` string (denominator always present).
pub fn q_to_string(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `num/den` or a bare integer.
pub fn q_from_string(s: &str) -> Result<Q, Error> {
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim()).map_err(|_| Error::InvalidArgument(format!("bad integer: {t}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == BigInt::from(0) {
                return Err(Error::InvalidArgument("zero denominator".into()));
            }
            Ok(Q::new(parse_int(n)?, den))
        }
        None => Ok(Q::from(parse_int(s)?)),
    }
}

/// Floats in structured output carry 17 significant digits, enough to
/// round-trip any f64.
pub fn format_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Serialized truncated series: window [offset, order) and the coefficient
/// list as rational strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesRepr {
    pub offset: i64,
    pub order: i64,
    pub coeffs: Vec<String>,
}

impl SeriesRepr {
    pub fn from_series(s: &TruncSeries) -> Self {
        SeriesRepr {
            offset: s.offset(),
            order: s.order(),
            coeffs: (s.offset()..s.order())
                .map(|e| q_to_string(&s.coeff(e).expect("within window")))
                .collect(),
        }
    }

    pub fn to_series(&self) -> Result<TruncSeries, Error> {
        if self.order - self.offset != self.coeffs.len() as i64 {
            return Err(Error::InvalidArgument(
                "coefficient count does not match the window".into(),
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| q_from_string(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TruncSeries::new(self.offset, coeffs))
    }
}

/// Serialized polynomial: variable count and (exponent tuple, coefficient)
/// pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyRepr {
    pub vars: usize,
    pub terms: Vec<(Vec<u32>, String)>,
}

impl PolyRepr {
    pub fn from_poly(p: &MPoly) -> Self {
        PolyRepr {
            vars: p.num_vars(),
            terms: p
                .terms()
                .map(|(e, c)| (e.clone(), q_to_string(c)))
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MPoly, Error> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                if e.len() != self.vars {
                    return Err(Error::ArityMismatch {
                        left: e.len(),
                        right: self.vars,
                    });
                }
                Ok((e.clone(), q_from_string(c)?))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MPoly::from_terms(self.vars, terms))
    }
}

/// Serialized lattice: rank, optional integer basis columns, and the exact
/// Gram matrix as rational strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeRepr {
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<String>>>,
    pub gram: Vec<Vec<String>>,
}

impl LatticeRepr {
    pub fn from_lattice(l: &HermLattice) -> Self {
        LatticeRepr {
            rank: l.rank(),
            basis: l.basis().map(|b| {
                b.iter()
                    .map(|col| col.iter().map(|x| x.to_string()).collect())
                    .collect()
            }),
            gram: l
                .gram()
                .iter()
                .map(|row| row.iter().map(q_to_string).collect())
                .collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<HermLattice, Error> {
        if let Some(basis) = &self.basis {
            let cols = basis
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|x| {
                            BigInt::from_str(x)
                                .map_err(|_| Error::InvalidArgument(format!("bad integer: {x}")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            return HermLattice::from_basis(cols);
        }
        let gram = self
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| q_from_string(x))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        HermLattice::from_gram(gram)
    }
}

/// One CSV line from string fields (no quoting; fields must not contain
/// commas).
pub fn csv_line(fields: &[String]) -> String {
    fields.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eisenstein;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["-355/113", "7/1", "0/5", "42"] {
            let q = q_from_string(s).unwrap();
            let back = q_from_string(&q_to_string(&q)).unwrap();
            assert_eq!(q, back);
        }
        assert!(q_from_string("1/0").is_err());
        assert!(q_from_string("x/2").is_err());
    }

    #[test]
    fn series_round_trip_exact() {
        let e4 = eisenstein(4, 12).unwrap();
        let repr = SeriesRepr::from_series(&e4);
        let json = serde_json::to_string(&repr).unwrap();
        let back: SeriesRepr = serde_json::from_str(&json).unwrap();
        let s2 = back.to_series().unwrap();
        for e in 0..12 {
            assert_eq!(e4.coeff(e), s2.coeff(e));
        }
    }

    #[test]
    fn poly_round_trip_exact() {
        let p = MPoly::from_terms(
            3,
            vec![
                (vec![2, 0, 1], q_from_string("5/3").unwrap()),
                (vec![0, 1, 0], q_from_string("-7").unwrap()),
            ],
        );
        let repr = PolyRepr::from_poly(&p);
        let json = serde_json::to_string(&repr).unwrap();
        let back: PolyRepr = serde_json::from_str(&json).unwrap();
        let p2 = back.to_poly().unwrap();
        assert_eq!(
            p.terms().collect::<Vec<_>>(),
            p2.terms().collect::<Vec<_>>()
        );
    }

    #[test]
    fn lattice_round_trip() {
        let l = HermLattice::from_basis(vec![
            vec![BigInt::from(1), BigInt::from(2)],
            vec![BigInt::from(0), BigInt::from(3)],
        ])
        .unwrap();
        let repr = LatticeRepr::from_lattice(&l);
        let json = serde_json::to_string(&repr).unwrap();
        let back: LatticeRepr = serde_json::from_str(&json).unwrap();
        let l2 = back.to_lattice().unwrap();
        assert_eq!(l.gram(), l2.gram());
    }

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[0.1, std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17] {
            let s = format_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(x, back);
        }
    }
}
