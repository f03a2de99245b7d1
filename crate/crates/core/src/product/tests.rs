use std::collections::BTreeSet;

use super::*;
use crate::arcs::union_well_nested;
use crate::corpus::{
    all_words, interleaved_palindrome, palindrome_pair, refutation_intersection, refutation_language, refutation_pair,
};
use crate::pda::{self as pda_mod, Op, PdaBuilder};

fn limits() -> SearchLimits {
    SearchLimits::default()
}

fn both_accept(m1: &Pda, m2: &Pda, w: &str) -> bool {
    pda_mod::accepts(m1, w, limits()).unwrap().0 && pda_mod::accepts(m2, w, limits()).unwrap().0
}

#[test]
fn palindrome_displacement_language() {
    let (m1, m2) = palindrome_pair();
    let p = displacement_product(&m1, &m2, 1).unwrap();
    let got = p.language(8, limits()).unwrap();
    let want: BTreeSet<String> = all_words(&['0', '1'], 8)
        .into_iter()
        .filter(|w| interleaved_palindrome(w))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn palindrome_displacement_demand_is_one() {
    let (m1, m2) = palindrome_pair();
    let p = displacement_product(&m1, &m2, 1).unwrap().with_displacement_cap(6);
    for w in ["0101", "01101001", "0011110000111100"] {
        let runs = p.accepting_runs(w, 20, limits()).unwrap();
        assert!(!runs.is_empty(), "{w}");
        for run in &runs {
            assert!(max_displacement(run) <= 1, "{w}");
        }
    }
}

#[test]
fn zero_displacement_suffices_without_crossings() {
    let mut b = PdaBuilder::new("ab");
    b.start("p")
        .accept("q")
        .read("p", 'a', Op::Push("A"), "p")
        .read("p", 'b', Op::Pop("A"), "q")
        .read("q", 'b', Op::Pop("A"), "q")
        .read_any("p", "c", Op::Skip, "p")
        .read_any("q", "c", Op::Skip, "q")
        .mode(AcceptanceMode::FinalStateAndBottomOnly);
    let m1 = b.build().unwrap();
    let mut b = PdaBuilder::new("c");
    b.start("s").accept("s").read_any("s", "abc", Op::Skip, "s");
    let m2 = b.build().unwrap();
    let p = displacement_product(&m1, &m2, 0).unwrap();
    for w in all_words(&['a', 'b', 'c'], 6) {
        assert_eq!(
            p.accepts(&w, limits()).unwrap().is_some(),
            both_accept(&m1, &m2, &w),
            "{w}"
        );
    }
}

#[test]
fn displacement_bound_rejects_deep_crossings() {
    let bundle = crate::corpus::get("abcd").unwrap();
    let (m1, m2) = bundle.machines().unwrap();
    let p = displacement_product(m1, m2, 1).unwrap();
    assert!(p.accepts("abcd", limits()).unwrap().is_some());
    assert!(p.accepts("aabbccdd", limits()).unwrap().is_some());
    assert!(p.accepts("aaabbbcccddd", limits()).unwrap().is_none());
    assert!(both_accept(m1, m2, "aaabbbcccddd"));
}

#[test]
fn refutation_buffered_language() {
    let (m1, m2) = refutation_pair();
    let p = buffered_product(&m1, &m2, 1).unwrap();
    let got = p.language(12, limits()).unwrap();
    assert_eq!(got, refutation_language(12));
}

#[test]
fn refutation_buffer_stays_small() {
    let (m1, m2) = refutation_pair();
    let p = buffered_product(&m1, &m2, 1).unwrap().with_buffer_capacity(64);
    for w in refutation_language(12) {
        for run in p.accepting_runs(&w, 20, limits()).unwrap() {
            assert!(max_buffer_occupancy(&run) <= 8, "{w}");
            let arcs = trace_arcs(&run);
            let long: Vec<_> = arcs
                .iter()
                .filter(|(_, pl)| *pl == Placement::Stack)
                .map(|(a, _)| *a)
                .collect();
            let (l1, l2): (Vec<_>, Vec<_>) = long.iter().partition(|a| a.owner == 1);
            assert!(union_well_nested(&l1, &l2).unwrap(), "{w}");
            for (a, pl) in &arcs {
                if *pl == Placement::Buffer {
                    assert!(a.pop_pos - a.push_pos <= 2, "{w}: {a}");
                }
            }
        }
    }
}

#[test]
fn products_are_sound() {
    let (m1, m2) = refutation_pair();
    let p = displacement_product(&m1, &m2, 1).unwrap();
    for w in p.language(10, limits()).unwrap() {
        assert!(refutation_intersection(&w) && both_accept(&m1, &m2, &w), "{w}");
    }
    let (m1, m2) = palindrome_pair();
    let p = buffered_product(&m1, &m2, 1).unwrap();
    for w in p.language(10, limits()).unwrap() {
        assert!(both_accept(&m1, &m2, &w), "{w}");
    }
}

#[test]
fn stack_keeps_owner_order() {
    let (m1, m2) = palindrome_pair();
    let p = displacement_product(&m1, &m2, 1).unwrap();
    for w in ["0101", "01101001"] {
        for run in p.accepting_runs(w, 20, limits()).unwrap() {
            let mut own: [Vec<StackSym>; 2] = [Vec::new(), Vec::new()];
            for (label, config) in &run.steps {
                for e in &label.events {
                    match e {
                        StackEvent::Push { owner, symbol, .. } => own[*owner as usize - 1].push(*symbol),
                        StackEvent::Pop { owner, symbol, .. } => {
                            assert_eq!(own[*owner as usize - 1].pop(), Some(*symbol));
                        }
                    }
                }
                for owner in [1u8, 2] {
                    let on_stack: Vec<StackSym> = config
                        .stack
                        .iter()
                        .filter(|t| t.owner == owner)
                        .map(|t| t.symbol)
                        .collect();
                    assert_eq!(on_stack, own[owner as usize - 1], "{w}");
                }
            }
            let arcs = trace_arcs(&run);
            for owner in [1u8, 2] {
                let own: Vec<Arc> = arcs.iter().filter(|(a, _)| a.owner == owner).map(|(a, _)| *a).collect();
                assert!(crate::arcs::is_well_nested(&own).0);
            }
        }
    }
}

#[test]
fn composite_states_within_bound() {
    let (m1, m2) = palindrome_pair();
    let p = displacement_product(&m1, &m2, 1).unwrap();
    let seen = reachable_composite_states(&p, 8, limits()).unwrap();
    assert!(num_bigint::BigUint::from(seen) <= p.state_bound().unwrap());

    let (m1, m2) = refutation_pair();
    let p = buffered_product(&m1, &m2, 1).unwrap();
    let seen = reachable_composite_states(&p, 10, limits()).unwrap();
    assert!(num_bigint::BigUint::from(seen) <= p.state_bound().unwrap());
}

#[test]
fn exported_fragment_accepts_the_same_words() {
    let (m1, m2) = refutation_pair();
    let p = buffered_product(&m1, &m2, 1).unwrap();
    let file = export_fragment(&p, 8, 100_000).unwrap();
    let text = serde_json::to_string(&file).unwrap();
    let back = Pda::from_json(&text).unwrap();
    assert!(!file.composite_state_labels.is_empty());
    assert!(!validate_normal_form(&back).is_empty() || back.transitions().iter().all(|t| t.ops.len() <= 1));
    let got = pda_mod::enumerate_language(&back, 8, limits()).unwrap();
    assert_eq!(got, p.language(8, limits()).unwrap());
}

#[test]
fn rejects_bad_inputs() {
    let (m1, m2) = refutation_pair();
    assert!(matches!(
        buffered_product(&m1, &m2, 0),
        Err(Error::PreconditionViolated(_))
    ));
    let mut b = PdaBuilder::new("bad");
    b.start("p").accept("p");
    let a = b.symbol("A");
    b.raw("p", Some('a'), vec![StackOp::Push(a), StackOp::Push(a)], "p", false);
    let bad = b.build().unwrap();
    assert!(matches!(
        displacement_product(&bad, &m2, 1),
        Err(Error::InvalidMachine(_))
    ));
}
