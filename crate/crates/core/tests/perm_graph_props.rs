use proptest::prelude::*;
use signed_hultman::graph::{arrow_view, ArrowStyle};
use signed_hultman::signed::order_bn;
use signed_hultman::{build_graph, s_count, s_via_circ, HVertex, Sign, SignedPermutation};

fn perm(max_n: usize) -> impl Strategy<Value = SignedPermutation> {
    (1..=max_n).prop_flat_map(|n| {
        (0..order_bn(n)).prop_map(move |i| SignedPermutation::from_enumeration_index(n, i).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn negative_indices_mirror_window(pi in perm(8)) {
        for i in 1..=pi.rank() {
            prop_assert_eq!(pi.apply(HVertex::minus(i)), pi.apply(HVertex::plus(i)).neg());
        }
    }

    #[test]
    fn star_is_two_long_cycles(pi in perm(8)) {
        let n = pi.rank();
        let cycles = pi.pi_star().cycles();
        prop_assert_eq!(cycles.len(), 2);
        prop_assert!(cycles.iter().all(|c| c.len() == n + 1));
        let zero = cycles.iter().find(|c| c.contains(&HVertex::PLUS_ZERO)).unwrap();
        let minus = zero.iter().filter(|v| v.sign == Sign::Minus).count();
        prop_assert_eq!(minus, pi.m_count());
    }

    #[test]
    fn star_decodes_back(pi in perm(8)) {
        prop_assert_eq!(SignedPermutation::from_star(&pi.pi_star()), Some(pi.clone()));
    }

    #[test]
    fn enumeration_index_round_trip(pi in perm(9)) {
        let idx = pi.enumeration_index();
        prop_assert_eq!(SignedPermutation::from_enumeration_index(pi.rank(), idx).unwrap(), pi);
    }

    #[test]
    fn window_text_round_trip(pi in perm(9)) {
        let text = pi.to_string();
        prop_assert_eq!(text.parse::<SignedPermutation>().unwrap(), pi);
    }

    #[test]
    fn two_routes_to_s_agree(pi in perm(8)) {
        let s = s_count(&pi);
        prop_assert_eq!(s_via_circ(&pi).unwrap(), s);
        prop_assert_eq!(pi.pi_circ().cycle_count(), 2 * s);
        prop_assert!((1..=pi.rank() + 1).contains(&s));
    }

    #[test]
    fn graph_shape(pi in perm(8)) {
        let n = pi.rank();
        let g = build_graph(&pi);
        prop_assert_eq!(g.gray_edges().len(), n + 1);
        prop_assert_eq!(g.black_edges().len(), n + 1);
        let mut seen_gray = vec![0; 2 * n + 2];
        let mut seen_black = vec![0; 2 * n + 2];
        for &(a, b) in g.gray_edges() {
            seen_gray[a.index(n)] += 1;
            seen_gray[b.index(n)] += 1;
        }
        for &(a, b) in g.black_edges() {
            seen_black[a.index(n)] += 1;
            seen_black[b.index(n)] += 1;
        }
        prop_assert!(seen_gray.iter().chain(&seen_black).all(|&d| d == 1));
        prop_assert!(g.cycles().iter().all(|c| c.len() % 2 == 0));
        prop_assert_eq!(g.cycles().iter().map(Vec::len).sum::<usize>(), 2 * n + 2);
    }

    #[test]
    fn arrow_walks_alternate(pi in perm(6)) {
        for walk in arrow_view(&pi, ArrowStyle::Ascii) {
            let parts: Vec<&str> = walk.split(']').filter(|p| !p.is_empty()).collect();
            for (i, p) in parts.iter().enumerate().skip(1) {
                let joint = p.chars().next().unwrap();
                prop_assert_eq!(joint, if i % 2 == 1 { '~' } else { '-' }, "{}", walk);
            }
        }
    }
}

#[test]
fn extreme_elements() {
    for n in 1..=8 {
        assert_eq!(s_count(&SignedPermutation::identity(n)), n + 1);
        assert_eq!(s_count(&SignedPermutation::i_minus_k(n, n).unwrap()), 1);
    }
}
