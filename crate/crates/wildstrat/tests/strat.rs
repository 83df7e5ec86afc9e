mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wildstrat::rational::{q, Q};
use wildstrat::strat::*;
use wildstrat::RootDatum;

fn pair(r: &RootDatum, i: usize, j: usize) -> RootSubset {
    RootSubset::from_indices([r.root_ij(i, j).unwrap(), r.root_ij(j, i).unwrap()])
}

fn long_roots(r: &RootDatum) -> RootSubset {
    RootSubset::from_indices((0..r.num_roots()).filter(|&k| {
        let h = r.cartan_g(r.coroot(k));
        r.invariant_form_g(&h, &h) == q(2)
    }))
}

#[test]
fn levi_examples() {
    let b2 = rd("B2");
    let long = long_roots(&b2);
    assert_eq!(long.len(), 4);
    assert!(!is_levi(&b2, long));
    let short = RootSubset::full(&b2).difference(long);
    assert!(!is_levi(&b2, short));
    assert!(is_levi(&b2, RootSubset::empty()));
    let g = rd("gl3");
    assert!(is_levi(&g, pair(&g, 1, 2)));
    assert!(!is_levi(&g, RootSubset::from_indices([g.root_ij(1, 2).unwrap()])));
}

#[test]
fn levi_criteria_agree_on_every_subset() {
    for name in ["gl3", "B2", "sl3"] {
        let r = rd(name);
        for m in 0u64..(1 << r.num_roots()) {
            let c = levi_criteria(&r, RootSubset(m));
            assert!(c[0] == c[1] && c[1] == c[2], "{name} {m:#x} {c:?}");
        }
    }
}

#[test]
fn levi_enumeration_matches_brute_force() {
    for (name, count) in [("gl3", 5), ("sl2", 2), ("B2", 6), ("sl4", 15), ("gl2", 2), ("C3", 0), ("gl1", 1)] {
        let r = rd(name);
        let w = WeylGroup::new(&r);
        let levis = enumerate_levi(&r, &w);
        if r.num_roots() <= 12 {
            assert_eq!(levis, enumerate_levi_bruteforce(&r), "{name}");
        }
        if count > 0 {
            assert_eq!(levis.len(), count, "{name}");
        }
        for &p in &levis {
            assert!(is_levi(&r, p));
        }
    }
}

#[test]
fn weyl_group_orders() {
    for (name, order) in [("sl2", 2), ("gl3", 6), ("B2", 8), ("sl4", 24), ("C3", 48), ("D4", 192), ("gl1", 1)] {
        let r = rd(name);
        let w = WeylGroup::new(&r);
        assert_eq!(w.order(), order, "{name}");
        for e in &w.elements {
            // Permutation and matrix actions agree: (w alpha)(w X) = alpha(X).
            let x: Vec<Q> = (0..r.cartan_dim()).map(|i| q(i as i64 * 3 + 1)).collect();
            let wx = e.act_cartan(&x);
            for k in 0..r.num_roots() {
                assert_eq!(r.root_eval(e.perm[k], &wx), r.root_eval(k, &x));
            }
        }
    }
}

#[test]
fn levi_poset_shapes() {
    let g = rd("gl3");
    let w = WeylGroup::new(&g);
    let p = LeviPoset::new(&g, &enumerate_levi(&g, &w));
    assert_eq!(p.elements.len(), 5);
    assert!(p.is_graded());
    assert_eq!(p.ranks, vec![1, 2, 2, 2, 3]);
    assert_eq!(p.elements[0], RootSubset::full(&g));
    assert_eq!(p.elements[4], RootSubset::empty());
    assert_eq!(p.covers.len(), 6);
    assert!(p.to_dot("gl3").contains("rank 3"));
    let s = rd("sl2");
    let p = LeviPoset::new(&s, &enumerate_levi(&s, &WeylGroup::new(&s)));
    assert_eq!(p.covers, vec![(0, 1)]);
    let g4 = rd("gl4");
    let p = LeviPoset::new(&g4, &enumerate_levi(&g4, &WeylGroup::new(&g4)));
    let ranks: std::collections::BTreeSet<usize> = p.ranks.iter().copied().collect();
    assert_eq!(ranks, (1..=4).collect());
    assert!(p.is_graded());
}

#[test]
fn levi_of_point_examples() {
    let s = rd("sl2");
    assert_eq!(levi_of_point(&s, &cartan(&[1])), RootSubset::empty());
    assert_eq!(levi_of_point(&s, &cartan(&[0])), RootSubset::full(&s));
    let g = rd("gl3");
    assert_eq!(levi_of_point(&g, &diag(&[1, 1, 0])), pair(&g, 1, 2));
}

#[test]
fn stratum_of_tuple_examples() {
    let s = rd("sl2");
    let f = stratum_of_tuple(&s, &[cartan(&[1]), cartan(&[0])]);
    assert_eq!(f.terms, vec![RootSubset::empty(), RootSubset::full(&s)]);
    let g = rd("gl3");
    let zero = stratum_of_tuple(&g, &vec![diag(&[0, 0, 0]); 3]);
    assert_eq!(zero, LeviFiltration::constant_full(&g, 3));
    // Oracle: direct intersection of root evaluations.
    let f = stratum_of_tuple(&g, &[diag(&[1, 1, 0]), diag(&[1, 2, 3])]);
    assert_eq!(f.terms, vec![RootSubset::empty(), RootSubset::empty()]);
    let f = stratum_of_tuple(&g, &[diag(&[1, 2, 3]), diag(&[1, 1, 0])]);
    assert_eq!(f.terms, vec![RootSubset::empty(), pair(&g, 1, 2)]);
    let f = stratum_of_tuple(&g, &[diag(&[1, 1, 0]), diag(&[2, 2, 5])]);
    assert_eq!(f.terms, vec![pair(&g, 1, 2), pair(&g, 1, 2)]);
}

#[test]
fn membership_matches_stratum_of_tuple_and_is_weyl_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["gl3", "B2", "sl3"] {
        let r = rd(name);
        let w = WeylGroup::new(&r);
        let filts = enumerate_filtrations(&enumerate_levi(&r, &w), 3);
        for _ in 0..200 {
            let xs: Vec<Vec<Q>> = (0..3)
                .map(|_| (0..r.cartan_dim()).map(|_| q(rng.gen_range(-1..=1))).collect())
                .collect();
            let f = stratum_of_tuple(&r, &xs);
            assert!(in_stratum(&r, &f, &xs));
            assert_eq!(filts.iter().filter(|g| in_stratum(&r, g, &xs)).count(), 1);
            let e = &w.elements[rng.gen_range(0..w.order())];
            let wxs: Vec<Vec<Q>> = xs.iter().map(|x| e.act_cartan(x)).collect();
            assert_eq!(stratum_of_tuple(&r, &wxs), f.act(e));
        }
    }
}

#[test]
fn filtration_counts() {
    let s = rd("sl2");
    let levis = enumerate_levi(&s, &WeylGroup::new(&s));
    for depth in 1..=6 {
        assert_eq!(enumerate_filtrations(&levis, depth).len(), depth + 1);
    }
    let g = rd("gl3");
    let levis = enumerate_levi(&g, &WeylGroup::new(&g));
    let oracle = levis.iter().flat_map(|a| levis.iter().map(move |b| (a, b))).filter(|(a, b)| a.is_subset(**b)).count();
    let f2 = enumerate_filtrations(&levis, 2);
    assert_eq!(f2.len(), oracle);
    assert_eq!(oracle, 12);
    assert!(f2.len() <= 6 * 9);
    assert!(f2.contains(&LeviFiltration::constant_full(&g, 2)));
}

#[test]
fn cardinality_bound() {
    for name in ["sl2", "gl2", "sl3", "gl3", "B2"] {
        let r = rd(name);
        let w = WeylGroup::new(&r);
        let levis = enumerate_levi(&r, &w);
        for s in 1..=3 {
            let n = enumerate_filtrations(&levis, s).len();
            assert!(n <= w.order() * (s + 1).pow(r.rank() as u32), "{name} s={s}");
        }
    }
}

#[test]
fn gl3_tame_quotient() {
    let g = rd("gl3");
    let w = WeylGroup::new(&g);
    let fam = enumerate_filtrations(&enumerate_levi(&g, &w), 1);
    let quo = weyl_quotient(&g, &w, &fam, 10, 1);
    assert_eq!(quo.classes.len(), 3);
    // The quotient order is a chain of three elements.
    assert_eq!(quo.order.len(), 3);
    for c in &quo.classes {
        assert_eq!(c.free_action_violations, 0);
        let phi = c.representative.terms[0];
        let expected = match phi.len() {
            6 => 1,
            2 => 1,
            0 => 6,
            _ => unreachable!(),
        };
        assert_eq!(c.out_order, expected);
    }
    let s = rd("sl2");
    let ws = WeylGroup::new(&s);
    let fam = enumerate_filtrations(&enumerate_levi(&s, &ws), 2);
    let quo = weyl_quotient(&s, &ws, &fam, 10, 1);
    assert_eq!(quo.classes.len(), 3);
    assert!(quo.classes.iter().all(|c| c.orbit.len() == 1));
}

#[test]
fn wild_quotients_report_free_actions() {
    for name in ["gl3", "B2"] {
        let r = rd(name);
        let w = WeylGroup::new(&r);
        let fam = enumerate_filtrations(&enumerate_levi(&r, &w), 2);
        let quo = weyl_quotient(&r, &w, &fam, 5, 3);
        let total: usize = quo.classes.iter().map(|c| c.orbit.len()).sum();
        assert_eq!(total, fam.len());
        for c in &quo.classes {
            assert_eq!(c.setwise_stabilizer % c.pointwise_stabilizer, 0);
            assert_eq!(c.free_action_violations, 0, "{name} {:?}", c.representative.to_lists());
        }
    }
}

#[test]
fn dual_stratum_examples() {
    let s = rd("sl2");
    assert_eq!(dual_stratum_of_covector(&s, &[cartan(&[0])]).terms, vec![RootSubset::full(&s)]);
    // lambda(H) = 3 and 1: on the coroot basis the values are the coordinates.
    let f = dual_stratum_of_covector(&s, &[cartan(&[3]), cartan(&[1])]);
    assert_eq!(f.terms, vec![RootSubset::empty(), RootSubset::empty()]);
    let g = rd("gl3");
    // lambda_0 = (l1, l2, l3) with l1 != l2; lambda_1 = (m1, m1, m2) with m1 != m2.
    let f = dual_stratum_of_covector(&g, &[diag(&[5, 2, 7]), diag(&[1, 1, 4])]);
    assert_eq!(f.terms, vec![RootSubset::empty(), pair(&g, 1, 2)]);
}

#[test]
fn musical_identification_matches_primal_strata() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["gl3", "B2", "sl3", "C3"] {
        let r = rd(name);
        for _ in 0..100 {
            let xs: Vec<Vec<Q>> = (0..2)
                .map(|_| (0..r.cartan_dim()).map(|_| q(rng.gen_range(-1..=1))).collect())
                .collect();
            let ls: Vec<Vec<Q>> = xs.iter().map(|x| musical(&r, x)).collect();
            assert_eq!(dual_stratum_of_covector(&r, &ls), stratum_of_tuple(&r, &xs), "{name}");
        }
    }
}

#[test]
fn stratification_axioms() {
    let g = rd("gl3");
    let fam = enumerate_filtrations(&enumerate_levi(&g, &WeylGroup::new(&g)), 1);
    assert!(verify_stratification_axioms(&g, 1, &fam, 1).ok);
    let s = rd("sl2");
    let fam = enumerate_filtrations(&enumerate_levi(&s, &WeylGroup::new(&s)), 3);
    let rep = verify_stratification_axioms(&s, 3, &fam, 2);
    assert!(rep.ok, "{:?}", rep.violation);
    let mut broken = fam.clone();
    broken.remove(1);
    let rep = verify_stratification_axioms(&s, 3, &broken, 2);
    assert!(!rep.ok);
    assert!(rep.violation.unwrap().contains("partition"));
}

#[test]
fn rank_and_dimension() {
    let g = rd("gl3");
    let f = LeviFiltration::new(vec![RootSubset::empty(), pair(&g, 1, 2)]);
    assert_eq!(f.dimension(&g), 3 + 2);
    assert_eq!(f.level(g.root_ij(1, 2).unwrap()), 1);
    assert_eq!(f.level(g.root_ij(1, 3).unwrap()), 2);
    assert!(f.validate(&g).is_ok());
    let bad = LeviFiltration::new(vec![pair(&g, 1, 2), RootSubset::empty()]);
    assert!(bad.validate(&g).is_err());
}
