use std::collections::BTreeMap;

use proptest::prelude::*;

use isl_core::arcs::{is_well_nested, union_well_nested, Arc, CrossingPair};
use isl_core::blocks::{
    characterize, membership, segments_and_linkages, witness_string, JointSpec, Outcome, Reason, Violation,
};
use isl_core::corpus;
use isl_core::grammar::{cyk_membership, gnf_to_pda, to_cnf, to_gnf, Cfg};
use isl_core::machine::SearchLimits;
use isl_core::pda::{self, StackOp};
use isl_core::product::{state_bound, BoundKind, ComponentSizes};
use isl_core::pumping::{case_trace, factorizations, CaseLabel, Factorization};

fn limits() -> SearchLimits {
    SearchLimits::default()
}

fn word(alphabet: &'static str, max: usize) -> impl Strategy<Value = String> {
    let chars: Vec<char> = alphabet.chars().collect();
    proptest::collection::vec(proptest::sample::select(chars), 0..=max).prop_map(|v| v.into_iter().collect())
}

fn nested_arcs(max_len: usize, owner: u8) -> impl Strategy<Value = Vec<Arc>> {
    proptest::collection::vec(0u8..3, 0..=max_len).prop_map(move |moves| {
        let mut open = Vec::new();
        let mut arcs = Vec::new();
        for (p, m) in moves.iter().enumerate() {
            match m {
                0 => open.push(p + 1),
                1 => {
                    if let Some(i) = open.pop() {
                        arcs.push(Arc::new(i, p + 1, owner));
                    }
                }
                _ => {}
            }
        }
        arcs
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn runs_balance_and_respect_normal_form(w in word("01", 10)) {
        let (m1, m2) = corpus::palindrome_pair();
        for m in [&m1, &m2] {
            for run in pda::enumerate_runs(m, &w, 10, limits()).unwrap() {
                let mut pushed: BTreeMap<u32, i64> = BTreeMap::new();
                let mut per_pos: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
                for s in &run.steps {
                    let t = &m.transitions()[s.transition];
                    for op in &t.ops {
                        let e = per_pos.entry(s.input_pos).or_default();
                        match op {
                            StackOp::Push(x) => { *pushed.entry(x.0).or_default() += 1; e.0 += 1; }
                            StackOp::Pop(x) => { *pushed.entry(x.0).or_default() -= 1; e.1 += 1; }
                        }
                    }
                }
                for (_, (push, pop)) in per_pos {
                    prop_assert!(push <= 2 && pop <= 1);
                }
                let mut residual: BTreeMap<u32, i64> = BTreeMap::new();
                for s in run.final_config.stack.iter().skip(1) {
                    *residual.entry(s.0).or_default() += 1;
                }
                pushed.retain(|_, v| *v != 0);
                prop_assert_eq!(pushed, residual);
            }
        }
    }

    #[test]
    fn extracted_matchings_are_well_nested(w in word("abdefgh", 12)) {
        let (m1, m2) = corpus::refutation_pair();
        for (owner, m) in [(1u8, &m1), (2u8, &m2)] {
            for matching in isl_core::arcs::matchings(m, &w, owner, 5, limits()).unwrap() {
                prop_assert!(is_well_nested(&matching.arcs).0);
            }
        }
    }

    #[test]
    fn union_check_matches_direct_check(s1 in nested_arcs(14, 1), s2 in nested_arcs(14, 2)) {
        let union: Vec<Arc> = s1.iter().chain(&s2).copied().collect();
        prop_assert_eq!(union_well_nested(&s1, &s2).unwrap(), is_well_nested(&union).0);
    }

    #[test]
    fn crossing_measures(i in 1usize..20, d1 in 1usize..10, d2 in 1usize..10, d3 in 1usize..10) {
        let (ip, j) = (i + d1, i + d1 + d2);
        let jp = j + d3;
        let a = Arc::new(i, j, 1);
        let b = Arc::new(ip, jp, 2);
        prop_assert!(a.crosses(&b) && b.crosses(&a));
        let p = CrossingPair::new(b, a).unwrap();
        let m = p.measures();
        prop_assert_eq!(m.gap, d1.max(d3));
        prop_assert_eq!(m.inner, d1.max(d2));
        prop_assert!(m.gap >= 1 && m.inner >= 1);
        let seg = p.segments(jp + 2);
        prop_assert_eq!(seg.lengths(), [i, d1, d2, jp + 2 - j]);
    }

    #[test]
    fn trivial_pump_is_identity(w in word("abc", 8), cuts in proptest::collection::vec(0usize..=8, 4)) {
        let chars: Vec<char> = w.chars().collect();
        let mut c: Vec<usize> = cuts.into_iter().map(|x| x.min(chars.len())).collect();
        c.sort();
        let f = Factorization::new(c[0], c[1], c[2], c[3]);
        prop_assert_eq!(f.pump(&chars, 1), w.clone());
        let pumped = f.pump(&chars, 2);
        prop_assert_eq!(pumped.chars().count(), chars.len() + f.pumped_len());
    }

    #[test]
    fn short_factorizations_get_one_of_seven_cases(n in 2usize..6, a in 0usize..24, span in 1usize..6) {
        let spec = JointSpec::with_letters(4, &[(1, 3)], &[(2, 4)]).unwrap();
        let pkg = segments_and_linkages(&spec, (1, 3), (2, 4), n).unwrap();
        let len = 4 * n;
        prop_assume!(span < n && a + span <= len);
        let t = case_trace(&pkg.segments, &Factorization::new(a, a, a + span, a + span)).unwrap();
        prop_assert!(matches!(t.label, CaseLabel::Case(1..=7)));
        prop_assert!(t.linkage.is_some());
    }

    #[test]
    fn verdict_ignores_machine_order(k in 2usize..6, raw1 in proptest::collection::vec((1usize..6, 1usize..6), 0..3),
                                     raw2 in proptest::collection::vec((1usize..6, 1usize..6), 0..3)) {
        let clean = |raw: Vec<(usize, usize)>| -> Vec<(usize, usize)> {
            raw.into_iter().map(|(a, b)| (a.min(b), a.max(b))).filter(|&(a, b)| a < b && b <= k).collect()
        };
        let Ok(spec) = JointSpec::with_letters(k, &clean(raw1), &clean(raw2)) else { return Ok(()); };
        let (Ok(v), Ok(s)) = (characterize(&spec), characterize(&spec.swapped())) else { return Ok(()); };
        prop_assert_eq!(v.outcome, s.outcome);
        if let Reason::Violation(Violation::Crossing { left, right }) = v.reason {
            prop_assert_eq!(v.outcome, Outcome::NotCfl);
            for n in 1..4 {
                let w = witness_string(&spec, left, right, n).unwrap();
                prop_assert!(membership(&spec.first(), &w) && membership(&spec.second(), &w));
            }
        }
        let back = JointSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn bounds_grow_with_parameter(q1 in 1u64..20, q2 in 1u64..20, g1 in 0u64..5, g2 in 0u64..5, p in 0u64..6) {
        let sizes = ComponentSizes { states: [q1, q2], stack_symbols: [g1, g2] };
        for kind in [BoundKind::Displacement, BoundKind::Buffered] {
            let a = state_bound(kind, sizes, p).unwrap();
            let b = state_bound(kind, sizes, p + 1).unwrap();
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn grammar_pipeline_agrees_on_samples(w in word("x+*()", 9)) {
        let cfg = Cfg::parse("E -> E + T | T\nT -> T * F | F\nF -> ( E ) | x").unwrap();
        let cnf = to_cnf(&cfg).unwrap();
        let pda = gnf_to_pda(&to_gnf(&cnf));
        prop_assert_eq!(cyk_membership(&cnf, &w), pda::accepts(&pda, &w, limits()).unwrap().0);
    }
}

#[test]
fn factorization_count_is_binomial() {
    for n in [0usize, 1, 5, 16] {
        assert_eq!(factorizations(n).count(), (n + 1) * (n + 2) * (n + 3) * (n + 4) / 24);
    }
}
