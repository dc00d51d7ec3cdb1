//! The Picard lattice of a general rational elliptic surface: Z^10 with
//! fixed basis (h, e1..e9) and the unimodular intersection pairing of
//! signature (1,9).
//!
//! The basis is the geometric one: a class is h-coefficient times the line
//! pullback plus the (signed) exceptional coefficients. The alternative
//! basis (h, -e1, ..., -e9) used in some printed coordinate tables is
//! supported only as an I/O conversion, never internally.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Int, Rat};
use crate::error::{Error, Result};

pub const RANK: usize = 10;

/// A divisor class a_h·h + sum a_i·e_i with exact integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub h: Int,
    pub e: [Int; 9],
}

impl DivisorClass {
    pub fn zero() -> Self {
        DivisorClass { h: Int::zero(), e: std::array::from_fn(|_| Int::zero()) }
    }

    pub fn hyperplane() -> Self {
        DivisorClass { h: Int::one(), ..Self::zero() }
    }

    /// The i-th exceptional class, 1-based (e1..e9).
    pub fn exceptional(i: usize) -> Self {
        assert!((1..=9).contains(&i), "exceptional index must be 1..=9");
        let mut d = Self::zero();
        d.e[i - 1] = Int::one();
        d
    }

    /// f = 3h - e1 - ... - e9, the fiber (anticanonical) class.
    pub fn fiber() -> Self {
        DivisorClass { h: Int::from(3), e: std::array::from_fn(|_| Int::from(-1)) }
    }

    pub fn from_i64(h: i64, e: [i64; 9]) -> Self {
        DivisorClass { h: Int::from(h), e: e.map(Int::from) }
    }

    /// Coordinates in basis order (h, e1..e9).
    pub fn coords(&self) -> [Int; 10] {
        std::array::from_fn(|i| if i == 0 { self.h.clone() } else { self.e[i - 1].clone() })
    }

    pub fn from_coords(c: &[Int]) -> Self {
        assert_eq!(c.len(), RANK);
        DivisorClass { h: c[0].clone(), e: std::array::from_fn(|i| c[i + 1].clone()) }
    }

    /// Coordinates [b, a1..a9] in the negated exceptional basis
    /// (h, -e1, ..., -e9).
    pub fn to_negated_e_basis(&self) -> [Int; 10] {
        std::array::from_fn(|i| if i == 0 { self.h.clone() } else { -self.e[i - 1].clone() })
    }

    pub fn from_negated_e_basis(c: &[Int]) -> Self {
        assert_eq!(c.len(), RANK);
        DivisorClass { h: c[0].clone(), e: std::array::from_fn(|i| -c[i + 1].clone()) }
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero() && self.e.iter().all(Int::is_zero)
    }

    /// x·y = x_h y_h - sum x_i y_i.
    pub fn pair(&self, other: &DivisorClass) -> Int {
        let mut acc = &self.h * &other.h;
        for (a, b) in self.e.iter().zip(&other.e) {
            acc -= a * b;
        }
        acc
    }

    pub fn self_pair(&self) -> Int {
        self.pair(self)
    }

    /// x·x = -1 and x·f = 1: the lattice characterization of a section.
    pub fn is_section_class(&self) -> bool {
        self.self_pair() == Int::from(-1) && self.pair(&Self::fiber()).is_one()
    }

    /// Some(lambda) when the class is exactly lambda·f (lambda integer,
    /// possibly negative or zero... zero only for the zero class).
    pub fn as_fiber_multiple(&self) -> Option<Int> {
        let three = Int::from(3);
        if (&self.h % &three).is_zero() {
            let lambda = &self.h / &three;
            if self.e.iter().all(|c| *c == -lambda.clone()) {
                return Some(lambda);
            }
        }
        None
    }

    pub fn scaled(&self, k: &Int) -> Self {
        DivisorClass { h: &self.h * k, e: std::array::from_fn(|i| &self.e[i] * k) }
    }

    pub fn to_rationals(&self) -> Vec<Rat> {
        self.coords().iter().map(|c| Rat::from_integer(c.clone())).collect()
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            h: &self.h + &rhs.h,
            e: std::array::from_fn(|i| &self.e[i] + &rhs.e[i]),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            h: &self.h - &rhs.h,
            e: std::array::from_fn(|i| &self.e[i] - &rhs.e[i]),
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { h: -self.h.clone(), e: std::array::from_fn(|i| -self.e[i].clone()) }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        let mut term = |f: &mut fmt::Formatter<'_>, c: &Int, sym: String| -> fmt::Result {
            if c.is_zero() {
                return Ok(());
            }
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{a}{sym}")?;
            }
            wrote = true;
            Ok(())
        };
        term(f, &self.h, "h".to_string())?;
        for i in 0..9 {
            let c = self.e[i].clone();
            term(f, &c, format!("e{}", i + 1))?;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// JSON shape: {"h": int, "e": [9 ints]}; arbitrary-precision integers are
// carried through serde_json's number type so round trips are bit-exact.
impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            h: serde_json::Number,
            e: Vec<serde_json::Number>,
        }
        let conv = |x: &Int| {
            x.to_string().parse::<serde_json::Number>().expect("integer is a valid JSON number")
        };
        Repr { h: conv(&self.h), e: self.e.iter().map(conv).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            h: serde_json::Number,
            e: Vec<serde_json::Number>,
        }
        let repr = Repr::deserialize(d)?;
        let conv = |n: &serde_json::Number| -> std::result::Result<Int, D::Error> {
            n.to_string()
                .parse::<Int>()
                .map_err(|_| D::Error::custom(format!("expected an integer, got {n}")))
        };
        if repr.e.len() != 9 {
            return Err(D::Error::custom(format!("field `e` must have 9 entries, got {}", repr.e.len())));
        }
        let mut e: [Int; 9] = std::array::from_fn(|_| Int::zero());
        for (i, n) in repr.e.iter().enumerate() {
            e[i] = conv(n)?;
        }
        Ok(DivisorClass { h: conv(&repr.h)?, e })
    }
}

/// The fixed Gram matrix diag(1, -1, ..., -1) of the intersection pairing.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntersectionForm;

impl IntersectionForm {
    pub fn gram() -> [[i64; RANK]; RANK] {
        let mut g = [[0i64; RANK]; RANK];
        g[0][0] = 1;
        for i in 1..RANK {
            g[i][i] = -1;
        }
        g
    }

    /// (positive, negative) inertia indices.
    pub fn signature() -> (usize, usize) {
        (1, 9)
    }

    pub fn determinant() -> i64 {
        -1
    }

    pub fn is_unimodular() -> bool {
        Self::determinant().abs() == 1
    }

    pub fn pair_coords(x: &[Int; RANK], y: &[Int; RANK]) -> Int {
        let mut acc = &x[0] * &y[0];
        for i in 1..RANK {
            acc -= &x[i] * &y[i];
        }
        acc
    }
}

/// Sum of classes weighted by rational coefficients; Err when the result is
/// not integral.
pub fn rational_combination(coeffs: &[Rat], classes: &[DivisorClass]) -> Result<DivisorClass> {
    assert_eq!(coeffs.len(), classes.len());
    let mut acc = vec![Rat::zero(); RANK];
    for (c, cls) in coeffs.iter().zip(classes) {
        for (slot, coord) in acc.iter_mut().zip(cls.to_rationals()) {
            *slot += c * coord;
        }
    }
    let mut out = [Int::zero(), Int::zero(), Int::zero(), Int::zero(), Int::zero(),
        Int::zero(), Int::zero(), Int::zero(), Int::zero(), Int::zero()];
    for (i, v) in acc.iter().enumerate() {
        if !v.is_integer() {
            return Err(Error::NonIntegral);
        }
        out[i] = v.to_integer();
    }
    Ok(DivisorClass::from_coords(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pairing_examples() {
        let h = DivisorClass::hyperplane();
        let f = DivisorClass::fiber();
        let e1 = DivisorClass::exceptional(1);
        assert_eq!(h.pair(&h), Int::from(1));
        assert_eq!(f.pair(&f), Int::from(0));
        assert_eq!(e1.pair(&f), Int::from(1));
        assert_eq!(f.pair(&DivisorClass::exceptional(5)), Int::from(1));
    }

    #[test]
    fn fiber_class_shape() {
        let f = DivisorClass::fiber();
        assert_eq!(f.h, Int::from(3));
        assert!(f.e.iter().all(|c| *c == Int::from(-1)));
        assert_eq!(f.as_fiber_multiple(), Some(Int::one()));
        assert_eq!(DivisorClass::zero().as_fiber_multiple(), Some(Int::zero()));
        assert_eq!(DivisorClass::hyperplane().as_fiber_multiple(), None);
        let neg2f = DivisorClass::fiber().scaled(&Int::from(-2));
        assert_eq!(neg2f.as_fiber_multiple(), Some(Int::from(-2)));
    }

    #[test]
    fn section_class_examples() {
        assert!(DivisorClass::exceptional(1).is_section_class());
        assert!(!DivisorClass::fiber().is_section_class());
        // 6h - 3e2 - 2(e3+..+e9)
        let x = DivisorClass::from_i64(6, [0, -3, -2, -2, -2, -2, -2, -2, -2]);
        assert!(x.is_section_class());
    }

    #[test]
    fn negated_basis_round_trip() {
        let x = DivisorClass::from_i64(4, [-3, -1, -1, -1, -1, -1, -1, -1, -1]);
        let alt = x.to_negated_e_basis();
        assert_eq!(alt[0], Int::from(4));
        assert_eq!(alt[1], Int::from(3));
        assert_eq!(DivisorClass::from_negated_e_basis(&alt), x);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        // includes a coefficient beyond i64/f64 range
        let big: Int = "123456789012345678901234567890123".parse().unwrap();
        let mut x = DivisorClass::from_i64(7, [0, -1, 2, -3, 4, -5, 6, -7, 8]);
        x.e[3] = big.clone();
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("123456789012345678901234567890123"));
        let back: DivisorClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn json_rejects_non_integers() {
        assert!(serde_json::from_str::<DivisorClass>(r#"{"h": 1.5, "e": [0,0,0,0,0,0,0,0,0]}"#).is_err());
        assert!(serde_json::from_str::<DivisorClass>(r#"{"h": 1, "e": [0,0,0]}"#).is_err());
    }

    #[test]
    fn gram_is_unimodular_signature_1_9() {
        assert!(IntersectionForm::is_unimodular());
        assert_eq!(IntersectionForm::signature(), (1, 9));
        let g = IntersectionForm::gram();
        for i in 0..RANK {
            for j in 0..RANK {
                assert_eq!(g[i][j], g[j][i]);
            }
        }
    }

    fn arb_class() -> impl Strategy<Value = DivisorClass> {
        (any::<i32>(), proptest::array::uniform9(any::<i32>())).prop_map(|(h, e)| {
            DivisorClass::from_i64(h as i64, e.map(|x| x as i64))
        })
    }

    proptest! {
        #[test]
        fn pair_symmetric_bilinear(x in arb_class(), y in arb_class(), z in arb_class()) {
            prop_assert_eq!(x.pair(&y), y.pair(&x));
            let xy = &x + &y;
            prop_assert_eq!(xy.pair(&z), x.pair(&z) + y.pair(&z));
        }

        #[test]
        fn nondegenerate_on_basis(x in arb_class()) {
            if !x.is_zero() {
                let mut basis = vec![DivisorClass::hyperplane()];
                basis.extend((1..=9).map(DivisorClass::exceptional));
                prop_assert!(basis.iter().any(|b| !x.pair(b).is_zero()));
            }
        }
    }
}
