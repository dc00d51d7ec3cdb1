//! Shared exact-arithmetic helpers: big integers, big rationals, rational
//! vectors and matrices, and the integer-interval solver used by the
//! quadratic-form enumerator.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

/// Parses "p" or "p/q" into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = |_| Error::Malformed(format!("invalid rational literal {s:?}"));
    match s.split_once('/') {
        None => Ok(Rat::from_integer(s.trim().parse::<Int>().map_err(bad)?)),
        Some((p, q)) => {
            let num = p.trim().parse::<Int>().map_err(bad)?;
            let den = q.trim().parse::<Int>().map_err(bad)?;
            if den.is_zero() {
                return Err(Error::Malformed(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Formats a rational as "p" when integral, "p/q" otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub type QVec = Vec<Rat>;

pub fn qvec_from_i64(v: &[i64]) -> QVec {
    v.iter().map(|&x| rat_int(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn qvec_is_zero(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

/// Clears denominators and divides by the gcd. The direction is preserved
/// (positive scaling only); the zero vector maps to itself.
pub fn primitive_integer(v: &[Rat]) -> Vec<Int> {
    let mut den = Int::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let scaled: Vec<Int> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let mut g = Int::zero();
    for x in &scaled {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return scaled;
    }
    scaled.iter().map(|x| x / &g).collect()
}

pub fn ints_to_rats(v: &[Int]) -> QVec {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    a: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, a: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<QVec>) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        QMat { rows: n, cols, a: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.a[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.at(r, c).recip();
            for j in 0..self.cols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.at(i, j) - &f * self.at(r, j);
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {x : Ax = 0}.
    pub fn kernel_basis(&self) -> Vec<QVec> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[fc] = Rat::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(ri, fc).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves Ax = b exactly; None when inconsistent, the pivot solution when
    /// underdetermined (free variables set to zero).
    pub fn solve(&self, b: &[Rat]) -> Option<QVec> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the augmented column means 0 = 1
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(ri, self.cols).clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> QVec {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }
}

/// All integers m with (m - center)^2 <= radius_sq, as an inclusive interval.
/// Exact: integer square roots give candidates, then the endpoints are
/// adjusted by the exact predicate.
pub fn int_interval_quadratic(center: &Rat, radius_sq: &Rat) -> Option<(Int, Int)> {
    if radius_sq.is_negative() {
        return None;
    }
    let holds = |m: &Int| {
        let diff = Rat::from_integer(m.clone()) - center;
        &diff * &diff <= *radius_sq
    };
    let p = center.numer();
    let q = center.denom();
    let u = radius_sq.numer();
    let v = radius_sq.denom();
    // q*sqrt(u/v) = sqrt(u*q^2/v); t = isqrt(floor(.)) satisfies t <= q*sqrt(r2) < t+1,
    // so the true endpoints are within one unit of the integer candidates below.
    let t = num_integer::Roots::sqrt(&((u * q * q) / v));
    let mut hi = (p + &t).div_floor(q) + 1;
    for _ in 0..3 {
        if holds(&hi) {
            break;
        }
        hi -= 1;
    }
    let mut lo = (p - &t).div_ceil(q) - 1;
    for _ in 0..3 {
        if holds(&lo) {
            break;
        }
        lo += 1;
    }
    if lo > hi || !holds(&hi) || !holds(&lo) {
        return None;
    }
    Some((lo, hi))
}
