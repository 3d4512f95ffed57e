mod common;

use common::suites::{self, half_line, sched, W};
use coarse::logic::cover_characterizations;
use coarse::spaces::{BlockRule, ScaleSchedule, Subspace};
use proptest::prelude::*;

fn check(result: suites::Check) -> Result<(), TestCaseError> {
    result.map_err(TestCaseError::fail)
}

#[test]
fn metric_axioms() {
    suites::metric_axioms(0x5eed, 20_000).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entourage_composition(seed in any::<u64>()) {
        check(suites::entourage_composition(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coentourage_closure(seed in any::<u64>()) {
        check(suites::coentourage_closure(seed))?;
    }

    #[test]
    fn square_iff_bounded(seed in any::<u64>()) {
        check(suites::square_iff_bounded(seed))?;
    }

    #[test]
    fn cover_characterizations_agree(seed in any::<u64>()) {
        check(suites::characterizations_agree(seed))?;
    }

    #[test]
    fn grothendieck_axioms(seed in any::<u64>()) {
        check(suites::grothendieck_axioms(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_normal_form(seed in any::<u64>()) {
        check(suites::smith_normal_form_checks(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn complexes_and_permutations(seed in any::<u64>()) {
        check(suites::complexes_and_permutations(seed))?;
    }

    #[test]
    fn line_covers_with_three_pieces(seed in any::<u64>()) {
        check(suites::line_covers_with_three_pieces(seed))?;
    }
}

/// At one scale the pairwise test is weaker: an overlap of width 16 hides
/// from pairs at scale 16 but not from the thickened complements.
#[test]
fn thin_overlap_separates_the_characterizations_at_a_fixed_scale() {
    let family = vec![
        Subspace::Blocks(BlockRule::Intervals(vec![(0, 246), (287, 395)])),
        Subspace::Blocks(BlockRule::Intervals(vec![(230, 303), (379, u64::MAX / 4)])),
    ];
    let check = cover_characterizations(half_line(), &Subspace::All, &family, &sched(), W).unwrap();
    assert!(check.pairwise.holds());
    assert!(check.divergence.fails());
    let wider = ScaleSchedule::for_window(vec![1, 2, 4, 8, 16, 32], W).unwrap();
    let check = cover_characterizations(half_line(), &Subspace::All, &family, &wider, W).unwrap();
    assert!(check.agree() && check.pairwise.fails());
}
