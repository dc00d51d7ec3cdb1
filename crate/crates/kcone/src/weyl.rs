//! Root basis, fundamental reflections, Weyl words and the wall-reflection
//! reduction onto the fundamental chamber.
//!
//! The root basis B spans the orthogonal complement of the fiber class f,
//! indexed 0..=8 with root 0 = h - e1 - e2 - e3 and root i = e_i - e_{i+1}
//! for i = 1..=8. Removing root 8 leaves the finite sub-root-system used by
//! the fundamental-domain test.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Int;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, IntersectionForm, RANK};

/// Root indices of the full basis B.
pub const FULL_BASIS: [usize; 9] = [0, 1, 2, 3, 4, 5, 6, 7, 8];
/// Root indices spanning (e9, f)-perp: B minus the root e8 - e9.
pub const E8_SUBSET: [usize; 8] = [0, 1, 2, 3, 4, 5, 6, 7];

/// Default step cap for wall-reflection reduction.
pub const DEFAULT_MAX_STEPS: u64 = 10_000;

/// A simple root: its class and its index in B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub index: usize,
    pub class: DivisorClass,
}

fn build_roots() -> Vec<Root> {
    let mut roots = Vec::with_capacity(9);
    let h = DivisorClass::hyperplane();
    let mut alpha0 = h;
    for i in 1..=3 {
        alpha0 = &alpha0 - &DivisorClass::exceptional(i);
    }
    roots.push(Root { index: 0, class: alpha0 });
    for i in 1..=8 {
        let class = &DivisorClass::exceptional(i) - &DivisorClass::exceptional(i + 1);
        roots.push(Root { index: i, class });
    }
    roots
}

/// The nine simple roots in index order.
pub fn simple_roots() -> &'static [Root] {
    static ROOTS: OnceLock<Vec<Root>> = OnceLock::new();
    ROOTS.get_or_init(build_roots)
}

pub fn simple_root(index: usize) -> &'static Root {
    &simple_roots()[index]
}

/// s_alpha(x) = x + (x·alpha) alpha, for any alpha with alpha·alpha = -2.
pub fn reflect(x: &DivisorClass, alpha: &DivisorClass) -> Result<DivisorClass> {
    if alpha.self_pair() != Int::from(-2) {
        return Err(Error::InvalidRoot);
    }
    Ok(reflect_unchecked(x, alpha))
}

fn reflect_unchecked(x: &DivisorClass, alpha: &DivisorClass) -> DivisorClass {
    let c = x.pair(alpha);
    &alpha.scaled(&c) + x
}

/// Reflection in a simple root, by index.
pub fn reflect_simple(x: &DivisorClass, index: usize) -> DivisorClass {
    reflect_unchecked(x, &simple_root(index).class)
}

/// An integer 10x10 map acting on divisor-class coordinates (h, e1..e9).
#[derive(Clone, PartialEq, Eq)]
pub struct LatticeMap {
    cols: [[Int; RANK]; RANK],
}

impl LatticeMap {
    pub fn identity() -> Self {
        let cols = std::array::from_fn(|j| {
            std::array::from_fn(|i| if i == j { Int::one() } else { Int::zero() })
        });
        LatticeMap { cols }
    }

    /// Builds the map whose columns are the images of (h, e1..e9).
    pub fn from_images(images: &[DivisorClass; RANK]) -> Self {
        let cols = std::array::from_fn(|j| images[j].coords());
        LatticeMap { cols }
    }

    pub fn column(&self, j: usize) -> DivisorClass {
        DivisorClass::from_coords(&self.cols[j])
    }

    pub fn apply(&self, x: &DivisorClass) -> DivisorClass {
        let xc = x.coords();
        let mut out: [Int; RANK] = std::array::from_fn(|_| Int::zero());
        for (j, col) in self.cols.iter().enumerate() {
            if xc[j].is_zero() {
                continue;
            }
            for i in 0..RANK {
                out[i] += &col[i] * &xc[j];
            }
        }
        DivisorClass::from_coords(&out)
    }

    /// self ∘ other (other applied first).
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        let cols = std::array::from_fn(|j| self.apply(&other.column(j)).coords());
        LatticeMap { cols }
    }

    pub fn is_identity(&self) -> bool {
        *self == LatticeMap::identity()
    }

    /// M^T G M = G, with G the intersection Gram matrix.
    pub fn preserves_form(&self) -> bool {
        for j in 0..RANK {
            for k in j..RANK {
                let cj = self.column(j);
                let ck = self.column(k);
                let expect = Int::from(IntersectionForm::gram()[j][k]);
                if cj.pair(&ck) != expect {
                    return false;
                }
            }
        }
        true
    }

    pub fn fixes_fiber(&self) -> bool {
        let f = DivisorClass::fiber();
        self.apply(&f) == f
    }

    /// Inverse of a form-preserving map: G M^T G (G is its own inverse).
    /// Panics when the map does not preserve the form.
    pub fn isometry_inverse(&self) -> LatticeMap {
        assert!(self.preserves_form(), "isometry_inverse on a non-isometry");
        let sign = |i: usize| if i == 0 { 1 } else { -1 };
        let cols = std::array::from_fn(|j| {
            std::array::from_fn(|i| {
                // (G M^T G)[i][j] = g_i g_j M[j][i]; columns store M[.][col].
                let v = &self.cols[i][j];
                if sign(i) * sign(j) == 1 {
                    v.clone()
                } else {
                    -v.clone()
                }
            })
        });
        LatticeMap { cols }
    }
}

impl fmt::Debug for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LatticeMap [")?;
        for i in 0..RANK {
            let row: Vec<String> = (0..RANK).map(|j| self.cols[j][i].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn reflection_matrix(index: usize) -> &'static LatticeMap {
    static MATS: OnceLock<Vec<LatticeMap>> = OnceLock::new();
    &MATS.get_or_init(|| {
        (0..9)
            .map(|i| {
                let images = std::array::from_fn(|j| {
                    let basis = if j == 0 {
                        DivisorClass::hyperplane()
                    } else {
                        DivisorClass::exceptional(j)
                    };
                    reflect_simple(&basis, i)
                });
                LatticeMap::from_images(&images)
            })
            .collect()
    })[index]
}

/// A finite product of fundamental reflections. Letters are root indices,
/// applied right to left; the realizing matrix is kept in sync.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylWord {
    letters: Vec<u8>,
    matrix: LatticeMap,
}

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord { letters: Vec::new(), matrix: LatticeMap::identity() }
    }

    pub fn from_letters(letters: &[u8]) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l > 8) {
            return Err(Error::Malformed(format!("root index {bad} out of range 0..=8")));
        }
        let mut matrix = LatticeMap::identity();
        for &l in letters {
            // letters act right to left: the product is letters[0] ∘ ... ∘ letters[last]
            matrix = matrix.compose(reflection_matrix(l as usize));
        }
        Ok(WeylWord { letters: letters.to_vec(), matrix })
    }

    /// Builds the word from reflections listed in the order they are applied
    /// (first applied first).
    pub fn from_applied_sequence(seq: &[u8]) -> Result<Self> {
        let rev: Vec<u8> = seq.iter().rev().copied().collect();
        Self::from_letters(&rev)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn matrix(&self) -> &LatticeMap {
        &self.matrix
    }

    pub fn apply(&self, x: &DivisorClass) -> DivisorClass {
        self.matrix.apply(x)
    }

    /// Prepends a reflection (applied after everything already present).
    pub fn push_left(&mut self, letter: u8) {
        assert!(letter <= 8);
        self.letters.insert(0, letter);
        self.matrix = reflection_matrix(letter as usize).compose(&self.matrix);
    }

    /// self ∘ rhs: rhs is applied first.
    pub fn compose(&self, rhs: &WeylWord) -> WeylWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        WeylWord { letters, matrix: self.matrix.compose(&rhs.matrix) }
    }

    /// Reflections are involutions, so the inverse is the reversed word.
    pub fn inverse(&self) -> WeylWord {
        let letters: Vec<u8> = self.letters.iter().rev().copied().collect();
        WeylWord::from_letters(&letters).expect("letters already validated")
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

impl fmt::Debug for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylWord({:?})", self.letters)
    }
}

impl Serialize for WeylWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            letters: &'a [u8],
        }
        Repr { letters: &self.letters }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeylWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            letters: Vec<u8>,
        }
        let repr = Repr::deserialize(d)?;
        WeylWord::from_letters(&repr.letters).map_err(serde::de::Error::custom)
    }
}

/// Position of a class relative to the fundamental chamber
/// {x : x·alpha > 0 for all alpha in B}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChamberPosition {
    Interior,
    Boundary,
    Outside,
}

pub fn chamber_position(x: &DivisorClass) -> ChamberPosition {
    let mut boundary = false;
    for root in simple_roots() {
        let p = x.pair(&root.class);
        if p.is_negative() {
            return ChamberPosition::Outside;
        }
        if p.is_zero() {
            boundary = true;
        }
    }
    if boundary {
        ChamberPosition::Boundary
    } else {
        ChamberPosition::Interior
    }
}

/// True when every pairing with B is >= 0 (the closed chamber).
pub fn in_closed_chamber(x: &DivisorClass) -> bool {
    chamber_position(x) != ChamberPosition::Outside
}

/// Successively reflects x in the lowest-index root of `roots` pairing
/// strictly negatively, until none does. Returns the word w (so that
/// w(x) = y) together with the reduced class y.
///
/// The tie-break makes the procedure deterministic; the cap bounds inputs
/// outside the Tits cone, which cannot be detected directly.
pub fn bourbaki_reduce(
    x: &DivisorClass,
    roots: &[usize],
    max_steps: u64,
) -> Result<(WeylWord, DivisorClass)> {
    assert!(max_steps >= 1, "max_steps must be at least 1");
    let mut y = x.clone();
    let mut applied: Vec<u8> = Vec::new();
    let mut steps = 0u64;
    loop {
        let violated = roots
            .iter()
            .copied()
            .find(|&i| y.pair(&simple_root(i).class).is_negative());
        match violated {
            None => {
                let word = WeylWord::from_applied_sequence(&applied)?;
                debug_assert_eq!(word.apply(x), y);
                return Ok((word, y));
            }
            Some(i) => {
                if steps == max_steps {
                    return Err(Error::NotReduced { steps });
                }
                y = reflect_simple(&y, i);
                applied.push(i as u8);
                steps += 1;
            }
        }
    }
}

/// Membership in the fundamental domain for the translation action: the
/// union of the finite-subsystem translates of the closed chamber. The test
/// reduces over the sub-basis obtained by dropping the root e8 - e9 and
/// checks that the reduced class clears the remaining wall too.
pub fn in_fundamental_domain(x: &DivisorClass) -> bool {
    // The sub-root-system is finite, so reduction terminates in far fewer
    // steps than the cap; exhausting it would be a bug.
    let (_, y) = bourbaki_reduce(x, &E8_SUBSET, DEFAULT_MAX_STEPS)
        .expect("finite-subsystem reduction terminates");
    in_closed_chamber(&y)
}

/// A permutation of {1..9}, stored in one-line form: i maps to image[i-1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: [usize; 9],
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation { image: std::array::from_fn(|i| i + 1) }
    }

    /// One-line notation: entry i is the image of i+1.
    pub fn from_one_line(entries: &[usize]) -> Result<Self> {
        if entries.len() != 9 {
            return Err(Error::Malformed(format!("permutation needs 9 entries, got {}", entries.len())));
        }
        let mut seen = [false; 9];
        for &v in entries {
            if !(1..=9).contains(&v) || seen[v - 1] {
                return Err(Error::Malformed(format!("{entries:?} is not a permutation of 1..=9")));
            }
            seen[v - 1] = true;
        }
        let image = std::array::from_fn(|i| entries[i]);
        Ok(Permutation { image })
    }

    /// Reads the 9 entries as a single 9-cycle x1 -> x2 -> ... -> x9 -> x1.
    pub fn from_nine_cycle(entries: &[usize]) -> Result<Self> {
        // validate via the one-line checks, then rebuild as a cycle
        let _ = Self::from_one_line(entries)?;
        let mut image = [0usize; 9];
        for i in 0..9 {
            image[entries[i] - 1] = entries[(i + 1) % 9];
        }
        Ok(Permutation { image })
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    /// The lattice map h -> h, e_i -> e_{perm(i)}.
    pub fn lattice_map(&self) -> LatticeMap {
        let images = std::array::from_fn(|j| {
            if j == 0 {
                DivisorClass::hyperplane()
            } else {
                DivisorClass::exceptional(self.image[j - 1])
            }
        });
        LatticeMap::from_images(&images)
    }

    /// Expresses the permutation as a word in the adjacent-transposition
    /// roots e_i - e_{i+1} (indices 1..=8).
    pub fn word(&self) -> WeylWord {
        // Sort the one-line form back to the identity with adjacent swaps;
        // applying the recorded swaps in reverse order rebuilds the
        // permutation from the identity.
        let mut arr = self.image;
        let mut swaps: Vec<u8> = Vec::new();
        loop {
            let mut done = true;
            for i in 0..8 {
                if arr[i] > arr[i + 1] {
                    arr.swap(i, i + 1);
                    swaps.push((i + 1) as u8); // root e_{i+1} - e_{i+2}
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        swaps.reverse();
        let word = WeylWord::from_letters(&swaps).expect("indices in 1..=8");
        debug_assert_eq!(word.matrix(), &self.lattice_map());
        word
    }
}
