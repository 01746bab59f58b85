use std::collections::BTreeSet;

use proptest::prelude::*;

use cckit::coherent::ColorMatrix;
use cckit::cyclotomic::CyclotomicInt;
use cckit::hadamard::{is_generalized_hadamard, ExponentMatrix};
use cckit::stabilization::{wl_closure, Coloring};
use cckit::build_configuration;

fn prime() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 3, 5, 7])
}

fn element(p: usize) -> impl Strategy<Value = CyclotomicInt> {
    prop::collection::vec(-6i64..=6, p - 1).prop_map(move |c| CyclotomicInt::new(p, c))
}

fn triple() -> impl Strategy<Value = (CyclotomicInt, CyclotomicInt, CyclotomicInt)> {
    prime().prop_flat_map(|p| (element(p), element(p), element(p)))
}

proptest! {
    #[test]
    fn ring_laws((a, b, c) in triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, CyclotomicInt::zero(a.p()));
        prop_assert_eq!(&a * &CyclotomicInt::one(a.p()), a.clone());
    }

    #[test]
    fn conjugation((a, b, _c) in triple()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        let n = a.norm_square();
        prop_assert_eq!(n.conj(), n);
    }

    #[test]
    fn root_powers(p in prime(), e in -20i64..20, f in -20i64..20) {
        prop_assert_eq!(CyclotomicInt::root(p, e) * CyclotomicInt::root(p, f), CyclotomicInt::root(p, e + f));
        prop_assert_eq!(CyclotomicInt::root(p, e).norm_square(), CyclotomicInt::one(p));
    }
}

/// Distinct rows differ by every residue exactly once.
fn gh_oracle(p: usize, h: &[Vec<usize>]) -> bool {
    (0..p).all(|k| {
        (0..p).filter(|&l| l != k).all(|l| {
            let diffs: BTreeSet<usize> = (0..p).map(|x| (h[k][x] + p - h[l][x]) % p).collect();
            diffs.len() == p
        })
    })
}

fn fourier(p: usize) -> Vec<Vec<usize>> {
    (0..p).map(|k| (0..p).map(|x| k * x % p).collect()).collect()
}

fn gh_input() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    prime().prop_flat_map(|p| (Just(p), prop::collection::vec(prop::collection::vec(0..p, p), p)))
}

proptest! {
    #[test]
    fn gh_agrees_with_oracle((p, h) in gh_input()) {
        let m = ExponentMatrix::new(p, h.clone()).unwrap();
        prop_assert_eq!(is_generalized_hadamard(&m), gh_oracle(p, &h));
    }

    #[test]
    fn gh_invariance(
        p in prime(),
        seed in prop::collection::vec(0usize..1000, 4 * 7),
    ) {
        let base = fourier(p);
        let rows: Vec<usize> = {
            let mut r: Vec<usize> = (0..p).collect();
            r.sort_by_key(|&i| (seed[i] * 7919 + i) % 1009);
            r
        };
        let cols: Vec<usize> = {
            let mut c: Vec<usize> = (0..p).collect();
            c.sort_by_key(|&i| (seed[p + i] * 104_729 + i) % 997);
            c
        };
        let h: Vec<Vec<usize>> = (0..p)
            .map(|k| (0..p).map(|x| (base[rows[k]][cols[x]] + seed[2 * p + k] + seed[3 * p + x]) % p).collect())
            .collect();
        prop_assert!(is_generalized_hadamard(&ExponentMatrix::new(p, h).unwrap()));
    }
}

fn graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..9).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let len = pairs.len();
        (Just(n), prop::sample::subsequence(pairs, 0..=len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wl_is_coherent_idempotent_monotone((n, edges) in graph()) {
        let input = Coloring::from_graph(n, &edges);
        let out = wl_closure(&input);
        prop_assert!(build_configuration(out.matrix().clone()).is_ok());
        let again = wl_closure(&Coloring::from_matrix(out.matrix().clone()));
        prop_assert_eq!(again.matrix(), out.matrix());
        let mut parent = vec![None; out.rank()];
        for a in 0..n {
            for b in 0..n {
                let p = parent[out.relation(a, b)].get_or_insert(input.matrix().get(a, b));
                prop_assert_eq!(*p, input.matrix().get(a, b));
            }
        }
    }

    #[test]
    fn wl_merge_recloses((n, edges) in graph()) {
        let input = Coloring::from_graph(n, &edges);
        let out = wl_closure(&input);
        let r = out.rank();
        let parent: Vec<usize> = (0..r)
            .map(|s| {
                let (a, b) = (0..n * n).map(|i| (i / n, i % n)).find(|&(a, b)| out.relation(a, b) == s).unwrap();
                input.matrix().get(a, b)
            })
            .collect();
        let pair = (0..r).flat_map(|s| (s + 1..r).map(move |t| (s, t))).find(|&(s, t)| parent[s] == parent[t]);
        if let Some((s, t)) = pair {
            let merged = ColorMatrix::from_labels(n, |a, b| {
                let c = out.relation(a, b);
                if c == t { s } else { c }
            });
            let reclosed = wl_closure(&Coloring::from_matrix(merged));
            prop_assert_eq!(reclosed.matrix(), out.matrix());
        }
    }
}
