//! Shared test oracles, independent of the library's enumeration path.
//!
//! The section-minimum oracle works on the thirds scale in machine
//! integers with a depth-first scan whose pruning uses only the elementary
//! identity 2*Q0(a) = sum a_i^2 + (sum a_i)^2; it shares nothing with the
//! library's triangular-factorization enumerator. All running quantities
//! are doubled to stay integral slot by slot.

use kcone::arith::Int;
use kcone::lattice::DivisorClass;
use kcone::mordell_weil::SectionCoords;

/// 9 * pair(x, section with thirds n), in machine integers:
/// 9V = F*(|n|^2 + (sum n)^2)/2 + 3*L.n + 9c.
pub fn value9(f: i64, l: &[i64; 8], c: i64, n: &[i64; 8]) -> i64 {
    let s: i64 = n.iter().sum();
    let sq: i64 = n.iter().map(|x| x * x).sum();
    debug_assert_eq!((sq + s * s) % 2, 0);
    f * ((sq + s * s) / 2) + 3 * n.iter().zip(l).map(|(a, b)| a * b).sum::<i64>() + 9 * c
}

/// The (F, L, c) data of a class, in machine integers. Panics when the
/// class has coefficients beyond the i64-safe test range.
pub fn model_i64(x: &DivisorClass) -> (i64, [i64; 8], i64) {
    let small = |v: Int| -> i64 { i64::try_from(v).expect("test classes stay small") };
    let f = small(x.pair(&DivisorClass::fiber()));
    let c = small(x.pair(&DivisorClass::exceptional(1)));
    let l = std::array::from_fn(|i| {
        let qi = small(x.pair(&DivisorClass::exceptional(i + 2)));
        f + c - qi
    });
    (f, l, c)
}

// 2 * (slot contribution of 9V): F t^2 + 6 L t.
fn slot2(f: i64, l: i64, t: i64) -> i64 {
    f * t * t + 6 * l * t
}

struct Search {
    f: i64,
    l: [i64; 8],
    c9: i64,
    limit: i64,
    /// suffix sums of L and L^2 over slots j..8
    suffix_l: [i64; 9],
    suffix_l2: [i64; 9],
    /// current best value of 2*(9V)
    best2: i64,
    mins: Vec<(u8, [i64; 8])>,
    nodes: u64,
    budget: u64,
}

impl Search {
    /// Real-relaxation lower bound on the doubled total from a prefix with
    /// doubled slot sum `partial2` and coordinate sum `sigma`, with `r`
    /// slots left: minimizing the remaining slots over the reals gives
    ///   partial2 + 2c9 - 9*suffix_l2/F + (F sigma - 3 suffix_l)^2/(F(1+r)).
    /// Scaled by F(1+r) to stay in integers; prunes only on strict excess.
    fn prunable(&self, depth: usize, partial2: i64, sigma: i64) -> bool {
        let r = (8 - depth) as i64;
        let scale = self.f * (1 + r);
        let lhs = scale * (partial2 + 2 * self.c9 - self.best2)
            - 9 * (1 + r) * self.suffix_l2[depth]
            + (self.f * sigma - 3 * self.suffix_l[depth]).pow(2);
        lhs > 0
    }

    /// partial2 = doubled slot contributions of the chosen prefix; sigma =
    /// running coordinate sum.
    fn walk(&mut self, depth: usize, residue: i64, partial2: i64, sigma: i64, n: &mut [i64; 8]) {
        self.nodes += 1;
        assert!(self.nodes <= self.budget, "oracle node budget exhausted");
        if depth == 8 {
            let total2 = partial2 + self.f * sigma * sigma + 2 * self.c9;
            match total2.cmp(&self.best2) {
                std::cmp::Ordering::Less => {
                    self.best2 = total2;
                    self.mins.clear();
                    self.mins.push((coset_of(residue), *n));
                }
                std::cmp::Ordering::Equal => self.mins.push((coset_of(residue), *n)),
                std::cmp::Ordering::Greater => {}
            }
            return;
        }
        for t in range_with_residue(self.limit, residue) {
            let p2 = partial2 + slot2(self.f, self.l[depth], t);
            if self.prunable(depth + 1, p2, sigma + t) {
                continue;
            }
            n[depth] = t;
            self.walk(depth + 1, residue, p2, sigma + t, n);
        }
    }
}

/// Exact minimum of 9*pair(x, section) over sections with |thirds| <=
/// 3*sup_bound componentwise (or over a self-certified range when None),
/// with every minimizer. Requires F > 0. Panics when `node_budget` is
/// exhausted, so a runaway scan fails the test instead of hanging.
pub fn oracle_min9(
    x: &DivisorClass,
    sup_bound: Option<i64>,
    node_budget: u64,
) -> (i64, Vec<(u8, [i64; 8])>) {
    let (f, l, c) = model_i64(x);
    assert!(f > 0, "oracle requires positive fiber degree");

    let limit = match sup_bound {
        Some(b) => 3 * b,
        None => {
            // beyond |n_i| > (3|L_i| + 3*sqrt(L_i^2 + sum L^2))/F the slot
            // cost exceeds what the other slots can compensate, so this
            // range certifiably contains every point with 9V <= 9c
            let lmax = l.iter().map(|v| v.abs()).max().unwrap().max(1);
            15 * lmax / f + 32
        }
    };

    let (suffix_l, suffix_l2) = {
        let mut sl = [0i64; 9];
        let mut sl2 = [0i64; 9];
        for j in (0..8).rev() {
            sl[j] = sl[j + 1] + l[j];
            sl2[j] = sl2[j + 1] + l[j] * l[j];
        }
        (sl, sl2)
    };

    let start2 = 2 * 9 * c; // doubled value at the zero section
    let mut best2 = start2;
    let mut mins: Vec<(u8, [i64; 8])> = Vec::new();
    for residue in [0i64, 2, 1] {
        let mut search = Search {
            f,
            l,
            c9: 9 * c,
            limit,
            suffix_l,
            suffix_l2,
            best2,
            mins: Vec::new(),
            nodes: 0,
            budget: node_budget,
        };
        let mut n = [0i64; 8];
        search.walk(0, residue, 0, 0, &mut n);
        match search.best2.cmp(&best2) {
            std::cmp::Ordering::Less => {
                best2 = search.best2;
                mins = search.mins;
            }
            std::cmp::Ordering::Equal => mins.extend(search.mins),
            std::cmp::Ordering::Greater => {}
        }
    }
    mins.sort();
    mins.dedup();
    debug_assert_eq!(best2 % 2, 0);
    for (_, n) in &mins {
        debug_assert_eq!(value9(f, &l, c, n) * 2, best2);
    }
    (best2 / 2, mins)
}

/// Thirds values in [-limit, limit] congruent to `residue` mod 3.
fn range_with_residue(limit: i64, residue: i64) -> impl Iterator<Item = i64> {
    let start = -limit + (residue + limit).rem_euclid(3);
    (0..).map(move |k| start + 3 * k).take_while(move |&t| t <= limit)
}

fn coset_of(residue: i64) -> u8 {
    match residue {
        0 => 0,
        2 => 1,
        1 => 2,
        _ => unreachable!(),
    }
}

/// Converts oracle minimizers to SectionCoords for comparison.
pub fn oracle_minimizers_to_coords(mins: &[(u8, [i64; 8])]) -> Vec<SectionCoords> {
    let mut out: Vec<SectionCoords> = mins
        .iter()
        .map(|(_, n)| {
            SectionCoords::from_thirds(std::array::from_fn(|i| Int::from(n[i])))
                .expect("oracle keeps residues aligned")
        })
        .collect();
    out.sort_by_key(|a| (a.coset(), a.thirds().clone()));
    out.dedup();
    out
}

/// Plain full scan over the box |thirds| <= 3*bound, no pruning at all;
/// the slow-but-unarguable cross-check for small boxes.
pub fn full_scan_min9(x: &DivisorClass, bound: i64) -> (i64, Vec<(u8, [i64; 8])>) {
    let (f, l, c) = model_i64(x);
    assert!(f > 0);
    let limit = 3 * bound;
    let mut best: Option<i64> = None;
    let mut mins: Vec<(u8, [i64; 8])> = Vec::new();
    for residue in [0i64, 2, 1] {
        let vals: Vec<i64> = range_with_residue(limit, residue).collect();
        if vals.is_empty() {
            continue;
        }
        let mut idx = [0usize; 8];
        'outer: loop {
            let n: [i64; 8] = std::array::from_fn(|k| vals[idx[k]]);
            let v = value9(f, &l, c, &n);
            match best {
                None => {
                    best = Some(v);
                    mins.push((coset_of(residue), n));
                }
                Some(b) if v < b => {
                    best = Some(v);
                    mins.clear();
                    mins.push((coset_of(residue), n));
                }
                Some(b) if v == b => mins.push((coset_of(residue), n)),
                _ => {}
            }
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < vals.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == 8 {
                    break 'outer;
                }
            }
        }
    }
    mins.sort();
    mins.dedup();
    (best.expect("box contains the zero section"), mins)
}
