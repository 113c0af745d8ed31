//! Arithmetic over GF(2^m) backed by exp/log tables.
//!
//! Elements are stored in polynomial basis, bit `i` holding the coefficient of
//! `x^i`. The primitive element is always `x` (value 2), except for GF(2)
//! where it is 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primitive polynomials, indexed by `m - 1`. Bit `i` is the coefficient of `x^i`.
///
/// Degrees 1..=10 follow the usual tables; degrees 11..=16 are the
/// numerically smallest primitive polynomial of that degree.
pub const PRIMITIVE_POLYNOMIALS: [u32; 16] = [
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1000011,
    0b10001001,
    0b100011101,
    0b1000010001,
    0b10000001001,
    0b100000000101,
    0b1000001010011,
    0b10000000011011,
    0b100000000101011,
    0b1000000000000011,
    0b10000000000101101,
];

/// An element of GF(2^m), `value < q`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A realized finite field GF(2^m).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    m: u32,
    q: usize,
    primitive_poly: u32,
    /// `exp[i] = alpha^i` for `i` in `0..q-1`.
    exp: Vec<u16>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("m", &self.m)
            .field("q", &self.q)
            .field("primitive_poly", &format_args!("{:#b}", self.primitive_poly))
            .finish()
    }
}

impl FieldSpec {
    /// Builds GF(2^m) from the fixed primitive polynomial of degree `m`.
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::DegreeOutOfRange(m));
        }
        let q = 1usize << m;
        let poly = PRIMITIVE_POLYNOMIALS[(m - 1) as usize];
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![0u32; q];
        let mut x: u32 = 1;
        for i in 0..q - 1 {
            exp.push(x as u16);
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (q as u32) != 0 {
                x ^= poly;
            }
        }
        // GF(2): the loop above multiplies by x = 2 which reduces to 1.
        debug_assert_eq!(x, 1);
        Ok(Self {
            m,
            q,
            primitive_poly: poly,
            exp,
            log,
        })
    }

    /// Builds the field of order `q`, which must be a power of two in `2..=65536`.
    pub fn with_order(q: usize) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "field order {q} is not a power of two >= 2"
            )));
        }
        Self::new(q.trailing_zeros())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    pub fn exp_table(&self) -> &[u16] {
        &self.exp
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    /// The primitive element alpha.
    pub fn alpha(&self) -> FieldElem {
        FieldElem(self.exp[1 % self.exp.len()])
    }

    /// `alpha^i`, exponent taken modulo `q - 1`.
    #[inline]
    pub fn pow_alpha(&self, i: usize) -> FieldElem {
        FieldElem(self.exp[i % (self.q - 1)])
    }

    /// Wraps a raw value, checking that it lies in the field.
    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if (value as usize) < self.q {
            Ok(FieldElem(value as u16))
        } else {
            Err(Error::InvalidArgument(format!(
                "{value} is not an element of GF({})",
                self.q
            )))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(|v| FieldElem(v as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    /// Subtraction coincides with addition in characteristic 2.
    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let n = (self.q - 1) as u32;
        let mut s = self.log[a.0 as usize] + self.log[b.0 as usize];
        if s >= n {
            s -= n;
        }
        FieldElem(self.exp[s as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::InverseOfZero);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub fn inv_nonzero(&self, a: FieldElem) -> FieldElem {
        debug_assert!(a.0 != 0);
        let n = (self.q - 1) as u32;
        let l = self.log[a.0 as usize];
        FieldElem(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Carry-less multiplication followed by reduction, independent of the tables.
    fn clmul_reduce(a: u16, b: u16, poly: u32, m: u32) -> u16 {
        let mut acc: u32 = 0;
        for i in 0..16 {
            if (b >> i) & 1 == 1 {
                acc ^= (a as u32) << i;
            }
        }
        for bit in (m..32).rev() {
            if (acc >> bit) & 1 == 1 {
                acc ^= poly << (bit - m);
            }
        }
        acc as u16
    }

    #[test]
    fn gf4_alpha_relation() {
        let f = FieldSpec::new(2).unwrap();
        assert_eq!(f.q(), 4);
        assert_eq!(f.alpha(), FieldElem(2));
        assert_eq!(f.mul(f.alpha(), f.alpha()), FieldElem(3));
    }

    #[test]
    fn gf2_alpha_is_one() {
        let f = FieldSpec::new(1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.alpha(), FieldElem::ONE);
        assert_eq!(f.exp_table(), &[1]);
    }

    #[test]
    fn gf8_exp_table() {
        let f = FieldSpec::new(3).unwrap();
        assert_eq!(f.exp_table(), &[1, 2, 4, 3, 6, 7, 5]);
    }

    #[test]
    fn degree_out_of_range() {
        assert_eq!(FieldSpec::new(0), Err(Error::DegreeOutOfRange(0)));
        assert_eq!(FieldSpec::new(17), Err(Error::DegreeOutOfRange(17)));
        assert!(FieldSpec::with_order(6).is_err());
        assert_eq!(FieldSpec::with_order(512).unwrap().m(), 9);
    }

    #[test]
    fn addition() {
        let f = FieldSpec::new(3).unwrap();
        assert_eq!(f.add(FieldElem(3), FieldElem(3)), FieldElem::ZERO);
        assert_eq!(f.add(FieldElem(5), FieldElem::ZERO), FieldElem(5));
        assert_eq!(f.add(FieldElem(5), FieldElem(6)), FieldElem(3));
    }

    #[test]
    fn gf8_mul_matches_clmul() {
        let f = FieldSpec::new(3).unwrap();
        // (x^2 + 1)(x^2 + x) = x^4 + x^3 + x^2 + x = x + 1 mod x^3 + x + 1
        assert_eq!(clmul_reduce(5, 6, 0b1011, 3), 3);
        assert_eq!(f.mul(FieldElem(5), FieldElem(6)), FieldElem(3));
    }

    #[test]
    fn identity_and_absorbing() {
        let f = FieldSpec::new(4).unwrap();
        for a in f.elements() {
            assert_eq!(f.mul(a, FieldElem::ONE), a);
            assert_eq!(f.mul(a, FieldElem::ZERO), FieldElem::ZERO);
        }
    }

    #[test]
    fn inverse_of_zero_is_error() {
        let f = FieldSpec::new(4).unwrap();
        assert_eq!(f.inv(FieldElem::ZERO), Err(Error::InverseOfZero));
    }

    #[test]
    fn tables_are_consistent_for_every_degree() {
        for m in 1..=16 {
            let f = FieldSpec::new(m).unwrap();
            let q = f.q();
            assert_eq!(f.exp_table()[0], 1);
            let mut seen = vec![false; q];
            for &e in f.exp_table() {
                assert!(e != 0 && !seen[e as usize], "m={m}: alpha not primitive");
                seen[e as usize] = true;
            }
            for x in 1..q {
                assert_eq!(f.exp_table()[f.log_table()[x] as usize] as usize, x);
            }
        }
    }

    #[test]
    fn mul_matches_clmul_everywhere_small() {
        for m in 1..=6 {
            let f = FieldSpec::new(m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(
                        f.mul(a, b).0,
                        clmul_reduce(a.0, b.0, f.primitive_poly(), m),
                        "m={m} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_up_to_16() {
        for m in 1..=4 {
            let f = FieldSpec::new(m).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn field_axioms_sampled(m in 5u32..=16, a in any::<u16>(), b in any::<u16>(), c in any::<u16>()) {
                let f = FieldSpec::new(m).unwrap();
                let mask = (f.q() - 1) as u16;
                let (a, b, c) = (FieldElem(a & mask), FieldElem(b & mask), FieldElem(c & mask));
                prop_assert_eq!(f.mul(a, b), f.mul(b, a));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                if !a.is_zero() {
                    prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                }
            }
        }
    }
}
