//! The telescoping decomposition of a section class minus the zero-section
//! over the root basis, the closed-form identity for its only possibly
//! negative coefficient, and a bulk integer sweep checking both on a full
//! coordinate box.
//!
//! The decomposition writes section(a) - e1 as a combination of
//! (h-e1-e2-e3, e1-e2, ..., e8-e9) with coefficients
//! (3d, 2d+s, 4d+s-a2, 6d+s-a2-a3, 5d+s-a2-a3-a4,
//!  4d+a6+a7+a8+a9, 3d+a7+a8+a9, 2d+a8+a9, d+a9).
//! All coefficients are nonnegative except possibly the second, which is
//! sum a_i^2 + (sum a_i + 3/2)^2 - 9/4 and dips below zero only when the
//! section is one of e2..e9.

use crate::arith::{rat, rat_int, Rat};
use crate::error::Result;
use crate::lattice::{rational_combination, DivisorClass};
use crate::mordell_weil::{ManinAux, SectionCoords};
use crate::weyl::simple_roots;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The nine decomposition coefficients, in root-basis index order.
pub fn lemma24_coefficients(a: &SectionCoords) -> [Rat; 9] {
    let ManinAux { d, s } = ManinAux::of(a);
    let ai = |i: usize| a.a(i);
    [
        rat_int(3) * &d,
        rat_int(2) * &d + &s,
        rat_int(4) * &d + &s - ai(2),
        rat_int(6) * &d + &s - ai(2) - ai(3),
        rat_int(5) * &d + &s - ai(2) - ai(3) - ai(4),
        rat_int(4) * &d + ai(6) + ai(7) + ai(8) + ai(9),
        rat_int(3) * &d + ai(7) + ai(8) + ai(9),
        rat_int(2) * &d + ai(8) + ai(9),
        d.clone() + ai(9),
    ]
}

/// Rebuilds sum c_i · B_i; equals section(a) - e1 exactly (the test oracle
/// for the coefficient formulas).
pub fn lemma24_reconstruct(coeffs: &[Rat; 9]) -> Result<DivisorClass> {
    let roots: Vec<DivisorClass> = simple_roots().iter().map(|r| r.class.clone()).collect();
    rational_combination(coeffs, &roots)
}

/// 2d+s, asserting the closed form
/// sum a_i^2 + (sum a_i + 3/2)^2 - 9/4 exactly.
pub fn two_d_plus_s(a: &SectionCoords) -> Rat {
    let ManinAux { d, s } = ManinAux::of(a);
    let direct = rat_int(2) * &d + &s;
    let sq: Rat = a.rationals().iter().map(|x| x * x).sum();
    let shifted = &s + rat(3, 2);
    let closed = sq + &shifted * &shifted - rat(9, 4);
    assert_eq!(direct, closed, "closed form for 2d+s must agree");
    direct
}

/// Result of sweeping every integer coordinate vector with sup norm at most
/// `bound`: per-point reconstruction and closed-form identity checks, and
/// the list of vectors with a negative coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub bound: u32,
    pub points: u64,
    pub reconstruction_failures: u64,
    pub identity_failures: u64,
    /// Coordinate vectors with some negative coefficient (expected: exactly
    /// the eight minus-deltas, whose sections are e2..e9).
    pub negative_cases: Vec<[i64; 8]>,
}

impl SweepReport {
    pub fn all_identities_hold(&self) -> bool {
        self.reconstruction_failures == 0 && self.identity_failures == 0
    }

    /// True when the negative cases are exactly the minus-delta vectors.
    pub fn negatives_are_exactly_exceptional(&self) -> bool {
        let mut expect: Vec<[i64; 8]> = (0..8)
            .map(|i| {
                let mut a = [0i64; 8];
                a[i] = -1;
                a
            })
            .collect();
        expect.sort();
        let mut got = self.negative_cases.clone();
        got.sort();
        got == expect
    }
}

fn scan_slice(bound: i64, a2_values: &[i64]) -> SweepReport {
    let mut report = SweepReport {
        bound: bound as u32,
        points: 0,
        reconstruction_failures: 0,
        identity_failures: 0,
        negative_cases: Vec::new(),
    };
    let mut a = [0i64; 8];
    for &a2 in a2_values {
        a[0] = a2;
        // odometer over the remaining seven coordinates
        for k in 1..8 {
            a[k] = -bound;
        }
        loop {
            check_point(&a, &mut report);
            let mut k = 7;
            loop {
                a[k] += 1;
                if a[k] <= bound {
                    break;
                }
                a[k] = -bound;
                if k == 1 {
                    k = 0;
                    break;
                }
                k -= 1;
            }
            if k == 0 {
                break;
            }
        }
    }
    report
}

#[inline]
fn check_point(a: &[i64; 8], report: &mut SweepReport) {
    report.points += 1;
    let s: i64 = a.iter().sum();
    let sq: i64 = a.iter().map(|x| x * x).sum();
    let cross = (s * s - sq) / 2;
    let d = sq + cross + s;

    let c = [
        3 * d,
        2 * d + s,
        4 * d + s - a[0],
        6 * d + s - a[0] - a[1],
        5 * d + s - a[0] - a[1] - a[2],
        4 * d + a[4] + a[5] + a[6] + a[7],
        3 * d + a[5] + a[6] + a[7],
        2 * d + a[6] + a[7],
        d + a[7],
    ];

    // reconstruction: coordinates of sum c_i B_i vs section(a) - e1
    let lhs = [
        c[0],
        -c[0] + c[1],
        -c[0] - c[1] + c[2],
        -c[0] - c[2] + c[3],
        -c[3] + c[4],
        -c[4] + c[5],
        -c[5] + c[6],
        -c[6] + c[7],
        -c[7] + c[8],
        -c[8],
    ];
    let mut rhs = [0i64; 10];
    rhs[0] = 3 * d;
    rhs[1] = s - d; // -(d - s - 1) - 1
    for i in 0..8 {
        rhs[i + 2] = -(d + a[i]);
    }
    if lhs != rhs {
        report.reconstruction_failures += 1;
    }

    // 4(2d+s) = 4 sum a^2 + (2s+3)^2 - 9
    if 4 * (2 * d + s) != 4 * sq + (2 * s + 3) * (2 * s + 3) - 9 {
        report.identity_failures += 1;
    }

    if c.iter().any(|&x| x < 0) {
        report.negative_cases.push(*a);
    }
}

fn merge(mut a: SweepReport, b: SweepReport) -> SweepReport {
    a.points += b.points;
    a.reconstruction_failures += b.reconstruction_failures;
    a.identity_failures += b.identity_failures;
    a.negative_cases.extend(b.negative_cases);
    a
}

/// Sweeps every integer a with sup norm <= bound. Plain machine integers:
/// the values involved stay far below overflow for any feasible bound.
pub fn lemma24_scan_seq(bound: u32) -> SweepReport {
    assert!(bound <= 500, "sweep bound out of the overflow-checked range");
    let b = bound as i64;
    let all: Vec<i64> = (-b..=b).collect();
    scan_slice(b, &all)
}

/// Parallel variant of the sweep (identical output).
pub fn lemma24_scan(bound: u32) -> SweepReport {
    assert!(bound <= 500, "sweep bound out of the overflow-checked range");
    let b = bound as i64;
    #[cfg(feature = "parallel")]
    {
        (-b..=b)
            .into_par_iter()
            .map(|a2| scan_slice(b, &[a2]))
            .reduce(
                || SweepReport {
                    bound,
                    points: 0,
                    reconstruction_failures: 0,
                    identity_failures: 0,
                    negative_cases: Vec::new(),
                },
                merge,
            )
    }
    #[cfg(not(feature = "parallel"))]
    {
        lemma24_scan_seq(bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mordell_weil::manin_class;
    use num_traits::{One, Signed, Zero};

    #[test]
    fn coefficients_examples() {
        // a = 0: everything vanishes
        let z = lemma24_coefficients(&SectionCoords::zero());
        assert!(z.iter().all(Rat::is_zero));

        // a2 = -1: the single negative coefficient, value -1
        let a = SectionCoords::from_integers([-1, 0, 0, 0, 0, 0, 0, 0]);
        let c = lemma24_coefficients(&a);
        assert_eq!(c[1], rat_int(-1));
        assert!(c.iter().enumerate().all(|(i, x)| i == 1 || x.is_zero()));

        // a2 = 1: fixed by the reconstruction oracle
        let a = SectionCoords::from_integers([1, 0, 0, 0, 0, 0, 0, 0]);
        let c = lemma24_coefficients(&a);
        let expect: Vec<Rat> = [6, 5, 8, 12, 10, 8, 6, 4, 2].iter().map(|&v| rat_int(v)).collect();
        assert_eq!(c.to_vec(), expect);
    }

    #[test]
    fn reconstruction_is_exact() {
        let samples = [
            SectionCoords::zero(),
            SectionCoords::from_integers([1, 0, 0, 0, 0, 0, 0, 0]),
            SectionCoords::from_integers([-1, 2, 0, -3, 1, 0, 4, -2]),
            SectionCoords::coset_generator(),
            SectionCoords::coset_generator().add(&SectionCoords::coset_generator()),
        ];
        for a in samples {
            let c = lemma24_coefficients(&a);
            let rebuilt = lemma24_reconstruct(&c).unwrap();
            let direct = &manin_class(&a).unwrap() - &DivisorClass::exceptional(1);
            assert_eq!(rebuilt, direct, "reconstruction for {a:?}");
        }
    }

    #[test]
    fn coset_generator_coefficients() {
        let c = lemma24_coefficients(&SectionCoords::coset_generator());
        let expect: Vec<Rat> = [4, 0, 3, 6, 5, 4, 3, 2, 1].iter().map(|&v| rat_int(v)).collect();
        assert_eq!(c.to_vec(), expect);
        assert!(c.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn two_d_plus_s_examples() {
        assert!(two_d_plus_s(&SectionCoords::zero()).is_zero());
        let a = SectionCoords::from_integers([-1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(two_d_plus_s(&a), -Rat::one());
        // the assert inside exercises the identity on random-ish data
        let b = SectionCoords::from_integers([3, -2, 5, 0, -1, 4, -3, 2]);
        let _ = two_d_plus_s(&b);
        let _ = two_d_plus_s(&SectionCoords::coset_generator());
    }

    #[test]
    fn small_sweep_matches_exact_path() {
        let report = lemma24_scan(1);
        assert_eq!(report.points, 3u64.pow(8));
        assert!(report.all_identities_hold());
        assert!(report.negatives_are_exactly_exceptional());

        let seq = lemma24_scan_seq(1);
        assert_eq!(seq, report);

        // dual route: exact rational coefficients on every sweep point of a
        // small box agree with the fast integer path implicitly through the
        // same negative set; spot-check a few points explicitly.
        for a in [[-1i64, 0, 0, 0, 0, 0, 0, 0], [1, -1, 1, -1, 1, -1, 1, -1]] {
            let coords = SectionCoords::from_integers(a);
            let exact = lemma24_coefficients(&coords);
            let rebuilt = lemma24_reconstruct(&exact).unwrap();
            assert_eq!(rebuilt, &manin_class(&coords).unwrap() - &DivisorClass::exceptional(1));
        }
    }
}
