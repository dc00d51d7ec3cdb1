//! Mordell-Weil section coordinates, the class formula and its inverse, the
//! translation group as lattice isometries, and the search expressing a
//! translation as a word in fundamental reflections.
//!
//! A section is determined by eight coordinates (a2..a9); the group of
//! sections is the integer lattice together with two further cosets whose
//! coordinates are thirds (the index-three extension generated by the
//! all--1/3 vector). Coordinates are stored as numerators over the fixed
//! denominator 3, so every formula stays in integer arithmetic.

use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{format_rat, parse_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;
use crate::weyl::{bourbaki_reduce, LatticeMap, Permutation, WeylWord, FULL_BASIS};

/// Coordinates (a2..a9) of a section, each a_i = thirds[i-2]/3. All eight
/// residues thirds mod 3 agree; that common residue encodes the coset of
/// the index-three extension: coset c has a_i = -c/3 (mod 1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SectionCoords {
    thirds: [Int; 8],
}

impl SectionCoords {
    /// Validates denominators (1 or 3) and the coset congruence.
    pub fn new(a: &[Rat]) -> Result<Self> {
        if a.len() != 8 {
            return Err(Error::Malformed(format!("expected 8 coordinates, got {}", a.len())));
        }
        let three = Int::from(3);
        let mut thirds: [Int; 8] = std::array::from_fn(|_| Int::zero());
        for (i, x) in a.iter().enumerate() {
            if !(&three % x.denom()).is_zero() {
                return Err(Error::NonIntegral);
            }
            thirds[i] = x.numer() * (&three / x.denom());
        }
        let r0 = thirds[0].mod_floor(&three);
        if thirds.iter().any(|t| t.mod_floor(&three) != r0) {
            return Err(Error::NonIntegral);
        }
        Ok(SectionCoords { thirds })
    }

    pub fn from_integers(a: [i64; 8]) -> Self {
        SectionCoords { thirds: a.map(|x| Int::from(3 * x)) }
    }

    pub fn zero() -> Self {
        Self::from_integers([0; 8])
    }

    /// Coordinates of the section e_j (j in 1..=9): zero for e1, minus the
    /// j-th delta otherwise.
    pub fn of_exceptional(j: usize) -> Self {
        assert!((1..=9).contains(&j));
        let mut a = [0i64; 8];
        if j >= 2 {
            a[j - 2] = -1;
        }
        Self::from_integers(a)
    }

    /// The coset-1 generator of the index-three extension: all coordinates
    /// equal to -1/3.
    pub fn coset_generator() -> Self {
        SectionCoords { thirds: std::array::from_fn(|_| Int::from(-1)) }
    }

    /// a_i for i in 2..=9.
    pub fn a(&self, i: usize) -> Rat {
        assert!((2..=9).contains(&i));
        Rat::new(self.thirds[i - 2].clone(), Int::from(3))
    }

    pub fn rationals(&self) -> Vec<Rat> {
        (2..=9).map(|i| self.a(i)).collect()
    }

    /// Numerators over the fixed denominator 3.
    pub fn thirds(&self) -> &[Int; 8] {
        &self.thirds
    }

    pub fn from_thirds(thirds: [Int; 8]) -> Result<Self> {
        let three = Int::from(3);
        let r0 = thirds[0].mod_floor(&three);
        if thirds.iter().any(|t| t.mod_floor(&three) != r0) {
            return Err(Error::NonIntegral);
        }
        Ok(SectionCoords { thirds })
    }

    /// Coset tag in {0,1,2}: all a_i = -coset/3 (mod 1).
    pub fn coset(&self) -> u8 {
        let r = self.thirds[0].mod_floor(&Int::from(3));
        // residue r corresponds to coset (3 - r) mod 3
        if r.is_zero() {
            0
        } else if r.is_one() {
            2
        } else {
            1
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coset() == 0
    }

    /// Componentwise sum; cosets add mod 3.
    pub fn add(&self, other: &SectionCoords) -> SectionCoords {
        SectionCoords { thirds: std::array::from_fn(|i| &self.thirds[i] + &other.thirds[i]) }
    }

    pub fn neg(&self) -> SectionCoords {
        SectionCoords { thirds: std::array::from_fn(|i| -self.thirds[i].clone()) }
    }

    pub fn is_zero(&self) -> bool {
        self.thirds.iter().all(Int::is_zero)
    }

    /// max |a_i| as a rational.
    pub fn sup_norm(&self) -> Rat {
        let m = self.thirds.iter().map(|t| t.abs()).max().unwrap();
        Rat::new(m, Int::from(3))
    }
}

impl fmt::Debug for SectionCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rationals().iter().map(format_rat).collect();
        write!(f, "SectionCoords[{}]", parts.join(", "))
    }
}

// JSON shape: {"a": ["p/q" x8], "coset": 0|1|2}; the coset is redundant but
// validated on input.
impl Serialize for SectionCoords {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            a: Vec<String>,
            coset: u8,
        }
        Repr { a: self.rationals().iter().map(format_rat).collect(), coset: self.coset() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SectionCoords {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            a: Vec<String>,
            coset: u8,
        }
        let repr = Repr::deserialize(d)?;
        let rats: Vec<Rat> = repr
            .a
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<_>>()
            .map_err(|e| D::Error::custom(format!("field `a`: {e}")))?;
        let coords = SectionCoords::new(&rats).map_err(|e| D::Error::custom(format!("field `a`: {e}")))?;
        if coords.coset() != repr.coset {
            return Err(D::Error::custom(format!(
                "field `coset`: declared {} but coordinates are in coset {}",
                repr.coset,
                coords.coset()
            )));
        }
        Ok(coords)
    }
}

/// The derived quantities d and s of the class formula: s is the coordinate
/// sum, d adds the square and cross terms (the unset first coordinate is
/// zero, so all sums run over 2..=9).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManinAux {
    pub d: Rat,
    pub s: Rat,
}

impl ManinAux {
    pub fn of(a: &SectionCoords) -> Self {
        let (d9, s3) = aux_scaled(a);
        ManinAux { d: Rat::new(d9, Int::from(9)), s: Rat::new(s3, Int::from(3)) }
    }
}

/// (9d, 3s) in exact integers, from the thirds representation:
/// 9d = sum n_i^2 + sum_{j<k} n_j n_k + 3 sum n_i with n_i = 3 a_i.
pub(crate) fn aux_scaled(a: &SectionCoords) -> (Int, Int) {
    let n = &a.thirds;
    let s3: Int = n.iter().sum();
    let sq: Int = n.iter().map(|x| x * x).sum();
    // sum_{j<k} n_j n_k = (s3^2 - sq) / 2
    let cross = (&s3 * &s3 - &sq) / Int::from(2);
    let d9 = &sq + &cross + Int::from(3) * &s3;
    (d9, s3)
}

/// The linear-equivalence class of the section with coordinates a:
/// 3d·h - (d-s-1)·e1 - (d+a_2)·e2 - ... - (d+a_9)·e9.
pub fn manin_class(a: &SectionCoords) -> Result<DivisorClass> {
    let (d9, s3) = aux_scaled(a);
    let three = Int::from(3);
    let nine = Int::from(9);
    // coefficients scaled by 9: h gets 27d/9, e1 gets -(9d - 9s - 9)/9, ...
    let h9 = &three * &d9;
    let e1_9 = -(&d9 - &three * &s3 - &nine);
    let mut coords9 = vec![h9, e1_9];
    for i in 0..8 {
        coords9.push(-(&d9 + &three * &a.thirds[i]));
    }
    let mut out = Vec::with_capacity(10);
    for c in &coords9 {
        let (q, r) = c.div_rem(&nine);
        if !r.is_zero() {
            return Err(Error::NonIntegral);
        }
        out.push(q);
    }
    let class = DivisorClass::from_coords(&out);
    debug_assert!(class.is_section_class());
    Ok(class)
}

/// Left inverse of the class formula: d = coeff_h/3, a_i = -coeff_{e_i} - d,
/// with the e1 coefficient acting as a consistency check.
pub fn class_to_coords(sigma: &DivisorClass) -> Result<SectionCoords> {
    if !sigma.is_section_class() {
        return Err(Error::NotASection);
    }
    let three = Int::from(3);
    let d3 = sigma.h.clone(); // 3d
    let mut thirds: [Int; 8] = std::array::from_fn(|_| Int::zero());
    for i in 0..8 {
        // n_i = 3 a_i = -3 coeff - 3d
        thirds[i] = -&three * &sigma.e[i + 1] - &d3;
    }
    let coords = SectionCoords::from_thirds(thirds).map_err(|_| Error::NotASection)?;
    let rebuilt = manin_class(&coords).map_err(|_| Error::NotASection)?;
    if &rebuilt != sigma {
        return Err(Error::NotASection);
    }
    Ok(coords)
}

/// Group law on section coordinates.
pub fn mw_add(a: &SectionCoords, b: &SectionCoords) -> SectionCoords {
    a.add(b)
}

/// The isometry of the Picard lattice induced by the translation with
/// coordinates t: fixes f, sends each section class by the group law, and is
/// pinned on h by 3h = f + e1 + ... + e9.
///
/// Panics if the resulting matrix is not integral or not form-preserving;
/// both would indicate an internal bug, not bad input.
pub fn translation_map(t: &SectionCoords) -> LatticeMap {
    let mut images_e: Vec<DivisorClass> = Vec::with_capacity(9);
    for j in 1..=9 {
        let coords = mw_add(&SectionCoords::of_exceptional(j), t);
        images_e.push(manin_class(&coords).expect("translated section class must be integral"));
    }
    // 3 T(h) = f + sum T(e_i)
    let mut sum = DivisorClass::fiber();
    for img in &images_e {
        sum = &sum + img;
    }
    let three = Int::from(3);
    let coords = sum.coords();
    assert!(
        coords.iter().all(|c| (c % &three).is_zero()),
        "translation image of h must be integral"
    );
    let th = DivisorClass::from_coords(&coords.map(|c| c / &three));
    let images: [DivisorClass; 10] = std::array::from_fn(|j| {
        if j == 0 {
            th.clone()
        } else {
            images_e[j - 1].clone()
        }
    });
    let map = LatticeMap::from_images(&images);
    assert!(map.preserves_form(), "translation matrix must preserve the intersection form");
    assert!(map.fixes_fiber(), "translation matrix must fix the fiber class");
    map
}

fn dual_chamber_generators() -> &'static [DivisorClass; 9] {
    static GENS: OnceLock<[DivisorClass; 9]> = OnceLock::new();
    GENS.get_or_init(|| {
        use crate::arith::{primitive_integer, QMat, QVec};
        use crate::weyl::simple_root;
        // omega_k pairs 1 with root k and 0 with the others; the e9
        // coefficient is pinned to 0 to fix the fiber-direction freedom.
        std::array::from_fn(|k| {
            let mut rows: Vec<QVec> = Vec::with_capacity(10);
            let mut rhs: Vec<Rat> = Vec::with_capacity(10);
            for j in 0..9 {
                let r = &simple_root(j).class;
                let mut row: QVec = Vec::with_capacity(10);
                row.push(Rat::from_integer(r.h.clone()));
                for c in &r.e {
                    row.push(Rat::from_integer(-c.clone()));
                }
                rows.push(row);
                rhs.push(if j == k { Rat::one() } else { Rat::zero() });
            }
            let mut last = vec![Rat::zero(); 10];
            last[9] = Rat::one();
            rows.push(last);
            rhs.push(Rat::zero());
            let sol = QMat::from_rows(rows).solve(&rhs).expect("dual system is nonsingular");
            let ints = primitive_integer(&sol);
            // primitive scaling may flip sign; re-orient so the pairing with
            // root k is positive.
            let cand = DivisorClass::from_coords(&ints);
            if cand.pair(&simple_root(k).class).is_positive() {
                cand
            } else {
                -&cand
            }
        })
    })
}

/// Deterministic sequence of strictly interior chamber points used as probe
/// points by the word search. Probe 0 is sum (10-k)·omega_k over the dual
/// chamber generators (k = 1..9); later probes reweight the same generators.
pub fn probe_point(attempt: usize) -> DivisorClass {
    let gens = dual_chamber_generators();
    let mut x = DivisorClass::zero();
    for (k, g) in gens.iter().enumerate() {
        // attempt 0: weights 9,8,...,1; attempt n perturbs by n*(k^2 mod 11 + 1)
        let w = (9 - k) as i64 + (attempt as i64) * ((k * k % 11) as i64 + 1);
        x = &x + &g.scaled(&Int::from(w));
    }
    debug_assert_eq!(crate::weyl::chamber_position(&x), crate::weyl::ChamberPosition::Interior);
    x
}

pub const WORD_SEARCH_PROBES: usize = 4;

/// An interior chamber point with the given positive weights on the dual
/// chamber generators; the configurable alternative to the built-in probe
/// sequence.
pub fn weighted_probe(weights: &[i64; 9]) -> Result<DivisorClass> {
    if weights.iter().any(|&w| w <= 0) {
        return Err(Error::Malformed("probe weights must all be positive".into()));
    }
    let gens = dual_chamber_generators();
    let mut x = DivisorClass::zero();
    for (g, &w) in gens.iter().zip(weights) {
        x = &x + &g.scaled(&Int::from(w));
    }
    debug_assert_eq!(crate::weyl::chamber_position(&x), crate::weyl::ChamberPosition::Interior);
    Ok(x)
}

/// Expresses the translation by t as a word in fundamental reflections:
/// reduce the image of an interior probe point back to the chamber, then
/// verify the candidate word realizes the translation on the whole lattice.
/// Caller-supplied probes are tried first, then the built-in sequence.
pub fn translation_as_weyl_word_with_probes(
    t: &SectionCoords,
    max_steps: u64,
    extra_probes: &[DivisorClass],
) -> Result<WeylWord> {
    let map = translation_map(t);
    let probes = extra_probes
        .iter()
        .cloned()
        .chain((0..WORD_SEARCH_PROBES).map(probe_point));
    for x in probes {
        let tx = map.apply(&x);
        let Ok((w, _)) = bourbaki_reduce(&tx, &FULL_BASIS, max_steps) else {
            continue;
        };
        // w(t(x)) = x, so w is a candidate for t^{-1}; the reversed word is
        // the candidate for t itself.
        let candidate = w.inverse();
        if candidate.matrix() == &map {
            return Ok(candidate);
        }
    }
    Err(Error::WordNotFound)
}

pub fn translation_as_weyl_word(t: &SectionCoords, max_steps: u64) -> Result<WeylWord> {
    translation_as_weyl_word_with_probes(t, max_steps, &[])
}

/// Decides whether some translation carries x to y, returning it when one
/// exists. A translation shifts the section-value form of a class by
/// L_i -> L_i - F(t_i + sum t); for positive fiber degree F that pins the
/// only candidate t, which is then verified on the whole lattice.
pub fn translation_between(x: &DivisorClass, y: &DivisorClass) -> Option<SectionCoords> {
    let f = DivisorClass::fiber();
    let fd = x.pair(&f);
    if fd != y.pair(&f) {
        return None;
    }
    if !fd.is_positive() {
        // translations fix fiber multiples pointwise; other degenerate
        // classes never reach this query in practice
        return if x == y { Some(SectionCoords::zero()) } else { None };
    }
    // w_i = (L_x - L_y)/F = t_i + T with T = sum t, so T = (sum w)/9.
    let fd_rat = Rat::from_integer(fd);
    let linear = |v: &DivisorClass, i: usize| {
        let qi = v.pair(&DivisorClass::exceptional(i));
        let q1 = v.pair(&DivisorClass::exceptional(1));
        Rat::from_integer(v.pair(&f) + q1 - qi)
    };
    let w: Vec<Rat> = (2..=9).map(|i| (linear(x, i) - linear(y, i)) / &fd_rat).collect();
    let total: Rat = w.iter().sum();
    let t_sum = total / Rat::from_integer(Int::from(9));
    let t: Vec<Rat> = w.iter().map(|wi| wi - &t_sum).collect();
    let coords = SectionCoords::new(&t).ok()?;
    if &translation_map(&coords).apply(x) == y {
        Some(coords)
    } else {
        None
    }
}

#[derive(Clone, Debug, Deserialize)]
struct WordFixture {
    #[allow(dead_code)]
    description: String,
    ws_root_index: u8,
    tuples: FixtureTuples,
    composition: Vec<String>,
    translation_by: String,
}

#[derive(Clone, Debug, Deserialize)]
#[allow(non_snake_case)]
struct FixtureTuples {
    P1: [usize; 9],
    P2: [usize; 9],
    P3: [usize; 9],
    P4: [usize; 9],
    P5: [usize; 9],
    P6: [usize; 9],
}

impl FixtureTuples {
    fn get(&self, name: &str) -> Option<&[usize; 9]> {
        match name {
            "P1" => Some(&self.P1),
            "P2" => Some(&self.P2),
            "P3" => Some(&self.P3),
            "P4" => Some(&self.P4),
            "P5" => Some(&self.P5),
            "P6" => Some(&self.P6),
            _ => None,
        }
    }
}

/// Raw fixture text with the published permutation tuples (shipped in the
/// repository and embedded here).
pub const WORD_FIXTURE_JSON: &str = include_str!("../fixtures/translation_word.json");

fn load_fixture() -> &'static WordFixture {
    static FIX: OnceLock<WordFixture> = OnceLock::new();
    FIX.get_or_init(|| serde_json::from_str(WORD_FIXTURE_JSON).expect("fixture parses"))
}

/// How the printed 9-tuples are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleNotation {
    OneLine,
    Cycle,
}

/// Outcome of checking the published factorization under both readings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordCheckReport {
    pub one_line_is_identity: bool,
    pub cycle_is_identity: bool,
}

impl WordCheckReport {
    pub fn ok(&self) -> bool {
        self.one_line_is_identity || self.cycle_is_identity
    }

    /// The unique working interpretation, when exactly one works.
    pub fn interpretation(&self) -> Option<TupleNotation> {
        match (self.one_line_is_identity, self.cycle_is_identity) {
            (true, false) => Some(TupleNotation::OneLine),
            (false, true) => Some(TupleNotation::Cycle),
            _ => None,
        }
    }
}

fn fixture_composite(notation: TupleNotation) -> WeylWord {
    let fix = load_fixture();
    let mut word = WeylWord::identity();
    for part in &fix.composition {
        let next = if part == "ws" {
            WeylWord::from_letters(&[fix.ws_root_index]).unwrap()
        } else {
            let tuple = fix.tuples.get(part).expect("composition names a known tuple");
            let perm = match notation {
                TupleNotation::OneLine => Permutation::from_one_line(tuple),
                TupleNotation::Cycle => Permutation::from_nine_cycle(tuple),
            }
            .expect("fixture tuples are permutations");
            perm.word()
        };
        // composition list is written leftmost-first; rightmost acts first
        word = word.compose(&next);
    }
    word
}

fn fixture_translation() -> LatticeMap {
    let fix = load_fixture();
    let j: usize = fix.translation_by.trim_start_matches('e').parse().expect("fixture names e<j>");
    translation_map(&SectionCoords::of_exceptional(j))
}

/// Composes the published word with the translation under both tuple
/// readings and reports which (if either) yields the identity.
pub fn verify_paper_word() -> WordCheckReport {
    let t = fixture_translation();
    let check = |notation| fixture_composite(notation).matrix().compose(&t).is_identity();
    WordCheckReport {
        one_line_is_identity: check(TupleNotation::OneLine),
        cycle_is_identity: check(TupleNotation::Cycle),
    }
}

/// Same check with one factor replaced by the identity; used as a
/// perturbation control for the verifier itself.
pub fn verify_paper_word_with_skipped_factor(skip: &str) -> bool {
    let fix = load_fixture();
    let t = fixture_translation();
    let mut word = WeylWord::identity();
    for part in &fix.composition {
        if part == skip {
            continue;
        }
        let next = if part == "ws" {
            WeylWord::from_letters(&[fix.ws_root_index]).unwrap()
        } else {
            let tuple = fix.tuples.get(part).unwrap();
            Permutation::from_one_line(tuple).unwrap().word()
        };
        word = word.compose(&next);
    }
    word.matrix().compose(&t).is_identity()
}
