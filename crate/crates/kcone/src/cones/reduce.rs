//! Reduction of a class into the fundamental domain for the translation
//! action: reflect into the closed chamber, translate the section image of
//! e9 back to e9, and certify with the finite-subsystem word.

use crate::error::Result;
use crate::lattice::DivisorClass;
use crate::mordell_weil::{class_to_coords, mw_add, translation_map, SectionCoords};
use crate::weyl::{bourbaki_reduce, in_closed_chamber, in_fundamental_domain, WeylWord, E8_SUBSET, FULL_BASIS};

/// Outcome of the fundamental-domain reduction: `reduced` is the translate
/// of the input lying in the domain, `translation` realizes it, and
/// `finite_word` moves `reduced` on into the closed chamber.
#[derive(Clone, Debug)]
pub struct DomainReduction {
    pub translation: SectionCoords,
    pub finite_word: WeylWord,
    pub reduced: DivisorClass,
}

/// Finds a translation t with translation_map(t)·x in the fundamental
/// domain. Fails with NOT_REDUCED when the chamber reduction exhausts the
/// cap (the input may lie outside the Tits cone).
pub fn reduce_mod_translations(x: &DivisorClass, max_steps: u64) -> Result<DomainReduction> {
    // v(x) lands in the closed chamber; w = v^{-1} is the chamber-to-x map.
    let (v, dominant) = bourbaki_reduce(x, &FULL_BASIS, max_steps)?;
    let w = v.inverse();

    // w(e9) is a section class; pick the translation sending it back to e9.
    let sigma = w.apply(&DivisorClass::exceptional(9));
    debug_assert!(sigma.is_section_class());
    let u = class_to_coords(&sigma).expect("isometric image of a section is a section");
    let t = mw_add(&SectionCoords::of_exceptional(9), &u.neg());
    let map = translation_map(&t);
    debug_assert_eq!(map.apply(&sigma), DivisorClass::exceptional(9));

    let reduced = map.apply(x);
    debug_assert!(in_fundamental_domain(&reduced));

    // Finite-subsystem word carrying the reduced class into the chamber;
    // the composite fixes e9 and returns the original dominant point.
    let (finite_word, final_point) = bourbaki_reduce(&reduced, &E8_SUBSET, max_steps)
        .expect("finite-subsystem reduction terminates");
    debug_assert!(in_closed_chamber(&final_point));
    debug_assert_eq!(final_point, dominant);
    let composite = finite_word.matrix().compose(&map).compose(w.matrix());
    debug_assert_eq!(composite.apply(&DivisorClass::exceptional(9)), DivisorClass::exceptional(9));

    Ok(DomainReduction { translation: t, finite_word, reduced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::mordell_weil::probe_point;
    use crate::weyl::DEFAULT_MAX_STEPS;

    #[test]
    fn interior_point_is_fixed() {
        let x = probe_point(0);
        let r = reduce_mod_translations(&x, DEFAULT_MAX_STEPS).unwrap();
        assert!(r.translation.is_zero());
        assert!(r.finite_word.is_empty());
        assert_eq!(r.reduced, x);
    }

    #[test]
    fn translated_interior_point_round_trips() {
        let x0 = probe_point(0);
        let t2 = SectionCoords::of_exceptional(2);
        let moved = translation_map(&t2).apply(&x0);
        let r = reduce_mod_translations(&moved, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(r.translation, t2.neg());
        assert_eq!(r.reduced, x0);
        assert!(r.finite_word.is_empty());
    }

    #[test]
    fn coset_translation_round_trips() {
        let x0 = probe_point(1);
        let g = SectionCoords::coset_generator();
        let moved = translation_map(&g).apply(&x0);
        let r = reduce_mod_translations(&moved, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(r.reduced, x0);
        assert_eq!(r.translation, g.neg());
    }

    #[test]
    fn outputs_lie_in_the_domain() {
        // move chamber points around by short words and random translations
        let words = [
            vec![8u8],
            vec![8, 0, 3],
            vec![4, 8, 1, 0],
            vec![2, 8, 7, 8, 0],
        ];
        for (k, letters) in words.iter().enumerate() {
            let x0 = probe_point(k % 3);
            let w = crate::weyl::WeylWord::from_letters(letters).unwrap();
            let x = w.apply(&x0);
            let r = reduce_mod_translations(&x, DEFAULT_MAX_STEPS).unwrap();
            assert!(in_fundamental_domain(&r.reduced));
            assert_eq!(
                translation_map(&r.translation).apply(&x),
                r.reduced,
                "reduction must be realized by its translation"
            );
        }
    }

    #[test]
    fn cap_exhaustion_reports() {
        let t2 = SectionCoords::of_exceptional(2);
        let moved = translation_map(&t2).apply(&probe_point(0));
        assert!(matches!(
            reduce_mod_translations(&moved, 3),
            Err(Error::NotReduced { .. })
        ));
    }
}
