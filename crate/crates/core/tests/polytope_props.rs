use std::collections::BTreeSet;

use macfarlane_core::exactnum::{int, Rat};
use macfarlane_core::polytope::{Constraint, Polytope};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Solves a square system by Gaussian elimination; `None` if singular.
fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let v = &f * &a[c][k];
                    a[r][k] -= v;
                }
                let v = &f * &b[c];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn brute_force_vertices(cons: &[Constraint], dim: usize) -> BTreeSet<Vec<Rat>> {
    let mut out = BTreeSet::new();
    let n = cons.len();
    let mut idx = vec![0usize; dim];
    fn rec(
        start: usize,
        depth: usize,
        idx: &mut Vec<usize>,
        n: usize,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if depth == idx.len() {
            f(idx);
            return;
        }
        for i in start..n {
            idx[depth] = i;
            rec(i + 1, depth + 1, idx, n, f);
        }
    }
    rec(0, 0, &mut idx, n, &mut |chosen| {
        let a = chosen.iter().map(|&i| cons[i].normal.clone()).collect();
        let b = chosen.iter().map(|&i| cons[i].offset.clone()).collect();
        if let Some(x) = solve(a, b) {
            if cons.iter().all(|c| !c.slack(&x).is_negative()) {
                out.insert(x);
            }
        }
    });
    out
}

fn constraint(dim: usize) -> impl Strategy<Value = Constraint> {
    (prop::collection::vec(-3i64..=3, dim), 1i64..=4).prop_map(|(n, o)| Constraint {
        normal: n.into_iter().map(int).collect(),
        offset: int(o),
    })
}

fn case() -> impl Strategy<Value = (usize, Vec<Constraint>)> {
    prop_oneof![Just(2usize), Just(3usize)]
        .prop_flat_map(|dim| (Just(dim), prop::collection::vec(constraint(dim), 1..9)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn incremental_matches_brute_force((dim, cons) in case()) {
        let mut poly = Polytope::cube(dim, &int(5));
        for c in &cons {
            if c.normal.iter().all(Zero::is_zero) {
                continue;
            }
            poly.add(c.clone());
        }
        let got: BTreeSet<Vec<Rat>> = poly.vertices().iter().map(|v| v.point.clone()).collect();
        let want = brute_force_vertices(poly.constraints(), dim);
        prop_assert_eq!(got, want);
        for v in poly.vertices() {
            for (k, c) in poly.constraints().iter().enumerate() {
                prop_assert_eq!(v.tight.contains(&k), c.slack(&v.point).is_zero());
            }
        }
        prop_assert!(poly.contains_strictly(&vec![Rat::zero(); dim]));
    }
}
