use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::prelude::*;
use signed_hultman::group::{CayleyGroup, GroupSpec};
use signed_hultman::prob::pr_pi_bruteforce;
use signed_hultman::rewrite::{
    applicable_steps, apply_step, canonical_form, exchange, normalize, NormalizeOptions, StepKind,
};
use signed_hultman::signed::{enumerate_bn, order_bn};
use signed_hultman::{s_count, HVertex, Sign, SignedPermutation};

fn perm(max_n: usize) -> impl Strategy<Value = SignedPermutation> {
    (1..=max_n).prop_flat_map(|n| {
        (0..order_bn(n)).prop_map(move |i| SignedPermutation::from_enumeration_index(n, i).unwrap())
    })
}

fn group(spec: &str) -> CayleyGroup {
    spec.parse::<GroupSpec>().unwrap().build().unwrap()
}

fn all(n: usize) -> Vec<SignedPermutation> {
    enumerate_bn(n, false).unwrap().collect()
}

fn delta_m(before: &SignedPermutation, after: &SignedPermutation) -> i64 {
    after.m_count() as i64 - before.m_count() as i64
}

fn inverse_signs_differ(pi: &SignedPermutation, x: HVertex) -> bool {
    let inv = pi.inverse();
    inv.apply(x).sign != inv.apply(x.succ(pi.rank())).sign
}

#[test]
fn steps_preserve_s_and_positive_class() {
    for n in 1..=4 {
        for pi in all(n) {
            let s = s_count(&pi);
            for step in applicable_steps(&pi) {
                let theta = apply_step(&pi, &step).unwrap();
                assert_eq!(s_count(&theta), s, "{pi} {step}");
                if pi.is_positive() {
                    assert!(theta.is_positive(), "{pi} {step}");
                }
            }
        }
    }
}

/// Holds for every step whose `y` is not `±0`; see `exchange_m_change_at_zero_target`.
#[test]
fn exchange_m_rule_away_from_zero() {
    for n in 1..=5 {
        for pi in all(n) {
            for step in applicable_steps(&pi).into_iter().filter(|s| s.kind == StepKind::Exchange) {
                let d = delta_m(&pi, &apply_step(&pi, &step).unwrap());
                if !inverse_signs_differ(&pi, step.x) {
                    assert_eq!(d, 0, "{pi} {step}");
                } else if !step.y.is_zero() {
                    assert_eq!(d.abs(), 1, "{pi} {step}");
                }
            }
        }
    }
}

/// With `y = ±0` the inverse-sign test does not predict `Δm`.
#[test]
fn exchange_m_change_at_zero_target() {
    let pi: SignedPermutation = "+1,-2".parse().unwrap();
    let (x, y) = (HVertex::plus(1), HVertex::minus(0));
    assert_eq!(pi.pi_star().apply(x.succ(2)), y);
    assert!(inverse_signs_differ(&pi, x));
    let theta = exchange(&pi, x, y).unwrap();
    assert_eq!(s_count(&theta), s_count(&pi));
    assert_eq!(delta_m(&pi, &theta), 0);
}

#[test]
fn cyclic_m_rule() {
    for n in 1..=5 {
        for pi in all(n) {
            for step in applicable_steps(&pi).into_iter().filter(|s| s.kind == StepKind::Cyclic) {
                let d = delta_m(&pi, &apply_step(&pi, &step).unwrap());
                match step.y.sign {
                    Sign::Plus => assert_eq!(d, 0, "{pi} {step}"),
                    Sign::Minus => assert_eq!(d.abs(), 1, "{pi} {step}"),
                }
            }
        }
    }
}

#[test]
fn sign_change_interior_m_rule() {
    for n in 1..=5 {
        for pi in all(n) {
            for step in applicable_steps(&pi).into_iter().filter(|s| s.kind == StepKind::SignChange) {
                let mag = step.x.magnitude;
                if 0 < mag && mag < n {
                    assert_eq!(delta_m(&pi, &apply_step(&pi, &step).unwrap()), 0, "{pi} {step}");
                }
            }
        }
    }
}

#[test]
fn steps_preserve_probability() {
    let groups = [group("symmetric:3"), group("quaternion8")];
    for n in 1..=3 {
        for pi in all(n) {
            for g in &groups {
                let p = pr_pi_bruteforce(g, &pi).unwrap();
                for step in applicable_steps(&pi) {
                    let theta = apply_step(&pi, &step).unwrap();
                    assert_eq!(pr_pi_bruteforce(g, &theta).unwrap(), p, "{pi} {step}");
                }
            }
        }
    }
}

/// Components of the undirected operation graph on `B_n`.
fn components(n: usize) -> Vec<BTreeSet<SignedPermutation>> {
    let mut adj: BTreeMap<SignedPermutation, BTreeSet<SignedPermutation>> = BTreeMap::new();
    for pi in all(n) {
        adj.entry(pi.clone()).or_default();
        for step in applicable_steps(&pi) {
            let theta = apply_step(&pi, &step).unwrap();
            adj.entry(pi.clone()).or_default().insert(theta.clone());
            adj.entry(theta).or_default().insert(pi.clone());
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in adj.keys() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(p) = queue.pop_front() {
            if comp.insert(p.clone()) {
                queue.extend(adj[&p].iter().cloned());
            }
        }
        seen.extend(comp.iter().cloned());
        out.push(comp);
    }
    out
}

#[test]
fn operation_graph_classes_in_b3() {
    let comps = components(3);
    let mut labels = BTreeSet::new();
    for c in &comps {
        let label: BTreeSet<(usize, bool)> = c.iter().map(|p| (s_count(p), p.is_positive())).collect();
        assert_eq!(label.len(), 1, "component mixes classes");
        assert!(labels.insert(*label.iter().next().unwrap()), "class split across components");
    }
}

#[test]
fn normalize_reaches_canonical_form_in_b3() {
    for pi in all(3) {
        let (canon, trace) = normalize(&pi, NormalizeOptions::default()).unwrap();
        assert_eq!(canon, canonical_form(&pi));
        trace.replay().unwrap();
        assert_eq!(trace.source, pi);
        assert_eq!(trace.target, canon);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_steps_preserve_s(pi in perm(7)) {
        let s = s_count(&pi);
        for step in applicable_steps(&pi) {
            prop_assert_eq!(s_count(&apply_step(&pi, &step).unwrap()), s);
        }
    }

    #[test]
    fn exchange_has_inverse(pi in perm(6)) {
        let n = pi.rank();
        for step in applicable_steps(&pi).into_iter().filter(|s| s.kind == StepKind::Exchange) {
            let theta = apply_step(&pi, &step).unwrap();
            let back = exchange(&theta, step.x.succ(n).neg(), step.y.neg()).unwrap();
            prop_assert_eq!(back, pi.clone());
        }
    }

    #[test]
    fn sign_change_is_involution(pi in perm(7)) {
        for step in applicable_steps(&pi).into_iter().filter(|s| s.kind == StepKind::SignChange) {
            let theta = apply_step(&pi, &step).unwrap();
            prop_assert_eq!(apply_step(&theta, &step).unwrap(), pi.clone());
        }
    }
}
