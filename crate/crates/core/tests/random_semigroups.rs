//! Laws and cross-checks on semigroups far from the small-genus tree.

use proptest::prelude::*;
use wilfcheck_core::{
    apery_analysis, report, w0_number, w_number, Law, LawOutcome, NumericalSemigroup, ReportRecord,
};

fn arb_semigroup() -> impl Strategy<Value = NumericalSemigroup> {
    (
        3u32..30,
        prop::collection::vec(3u32..80, 1..5),
        prop::option::of(0u32..120),
    )
        .prop_filter_map("cofinite", |(m, rest, tail)| {
            let mut gens = vec![m];
            gens.extend(rest.into_iter().filter(|&g| g > m));
            match tail {
                Some(t) => NumericalSemigroup::from_generators_with_tail(&gens, m + t + 1).ok(),
                None => NumericalSemigroup::from_generators(&gens).ok(),
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn theorems_hold(s in arb_semigroup()) {
        for law in Law::ALL {
            if law == Law::W0Nonneg {
                continue;
            }
            let outcome = law.check(&s).unwrap();
            prop_assert!(!matches!(outcome, LawOutcome::Violated { .. }), "{} on {}: {:?}", law, s, outcome);
        }
    }

    #[test]
    fn report_agrees_with_standalone_functions(s in arb_semigroup()) {
        let r = report(&s).unwrap();
        prop_assert_eq!(r.w, w_number(&s));
        prop_assert_eq!(r.w0, w0_number(&s));
        prop_assert_eq!(r.g, s.genus());
        let a = apery_analysis(&s).unwrap();
        prop_assert_eq!(a.apery_set.len() as u32, s.multiplicity());
        prop_assert_eq!(r.c_size as usize, a.compressed.len());
        prop_assert_eq!(&r.profile, &a.profile());
    }

    #[test]
    fn records_replay(s in arb_semigroup()) {
        let rec = ReportRecord::new(&s).unwrap();
        let line = serde_json::to_string(&rec).unwrap();
        let back: ReportRecord = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(back.semigroup(), s);
        prop_assert_eq!(back, rec);
    }
}
