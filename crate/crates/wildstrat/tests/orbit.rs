mod common;

use common::*;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wildstrat::liecore::{GElement, TcElement};
use wildstrat::orbit::*;
use wildstrat::parab::{b_pairing_matrix, ParabolicFiltration, ParabolicSubset};
use wildstrat::rational::{q, Q};
use wildstrat::strat::{enumerate_filtrations, enumerate_levi, Stratum, WeylGroup};
use wildstrat::{Error, RootDatum};

#[test]
fn examples_from_small_cases() {
    let s = rd("sl2");
    assert_eq!(strictness_index(&s, &tc(&s, 2, &[(0, "E12", 1)])).unwrap(), 0);
    let x = tc(&s, 2, &[(0, "H1", 1), (1, "E12", 1)]);
    let nf = birkhoff_normalize(&s, &x).unwrap();
    assert_eq!(nf.strictness, 2);
    assert_eq!(nf.normal, tc(&s, 2, &[(0, "H1", 1)]));
    // Oracle: Y = E/2 solves [Y, H] = -E; exp(ad_{Yε}) is the recorded gauge.
    let mut y = TcElement::zero(s.dim(), 2);
    y.coeffs[1] = el(&s, &[("E12", 1)]).scale(&Q::new(1.into(), 2.into()));
    assert_eq!(nf.gauge_log, y);
    assert_eq!(apply_gauge(&s, &y, &x).unwrap(), nf.normal);

    let zero = TcElement::zero(s.dim(), 3);
    let nf = birkhoff_normalize(&s, &zero).unwrap();
    assert_eq!((nf.strictness, nf.irregular_type().len()), (3, 3));
    assert!(nf.irregular_type().iter().all(|c| c.is_zero()));

    let g = rd("gl3");
    let x = tc(&g, 3, &[(0, "E11", 1), (0, "E22", 2), (0, "E33", 5), (1, "E12", 3), (1, "E31", -1), (2, "E23", 7), (2, "E22", 1)]);
    assert_eq!(strictness_index(&g, &x).unwrap(), 3);
}

#[test]
fn depth_one_strictness() {
    let s = rd("sl2");
    assert_eq!(strictness_index(&s, &tc(&s, 1, &[(0, "H1", 1)])).unwrap(), 1);
    assert_eq!(strictness_index(&s, &tc(&s, 1, &[(0, "E12", 1)])).unwrap(), 0);
}

fn random_cartan(r: &RootDatum, basis: &[Vec<Q>], rng: &mut ChaCha8Rng) -> GElement {
    let mut t = vec![Q::from_integer(0.into()); r.cartan_dim()];
    for b in basis {
        let c = q(rng.gen_range(-3..=3));
        for (x, y) in t.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    r.cartan_g(&t)
}

/// A normal form with strictness exactly `s`: Cartan prefix, then a non-semisimple coefficient.
pub fn fixture(r: &RootDatum, depth: usize, s: usize, rng: &mut ChaCha8Rng) -> TcElement {
    let w = WeylGroup::new(r);
    let levis: Vec<_> = enumerate_levi(r, &w).into_iter().filter(|p| !p.is_empty()).collect();
    let phi = levis[rng.gen_range(0..levis.len())];
    let kernel = wildstrat::strat::kernel_basis(r, phi);
    let full = wildstrat::linalg::Matrix::identity(r.cartan_dim()).to_rows();
    let mut x = TcElement::zero(r.dim(), depth);
    for i in 0..s.min(depth) {
        x.coeffs[i] = random_cartan(r, if s < depth { &kernel } else { &full }, rng);
    }
    if s < depth {
        let alpha = phi.indices()[rng.gen_range(0..phi.len())];
        let h_basis = wildstrat::strat::kernel_basis(r, wildstrat::strat::RootSubset::from_indices([alpha]));
        x.coeffs[s] = random_cartan(r, &h_basis, rng).add(&r.root_vector(alpha));
        for i in s + 1..depth {
            for c in x.coeffs[i].coords.iter_mut() {
                *c = q(rng.gen_range(-2..=2));
            }
        }
    }
    x
}

#[test]
fn gauge_invariance_of_strictness_and_irregular_type() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["sl2", "gl2", "gl3"] {
        let r = rd(name);
        for depth in [2, 3] {
            for s in 0..=depth {
                let x = fixture(&r, depth, s, &mut rng);
                let base = birkhoff_normalize(&r, &x).unwrap();
                assert_eq!(base.strictness, s, "{name} r={depth} s={s}");
                assert_eq!(base.irregular_type(), x.coeffs[..s].to_vec());
                for _ in 0..8 {
                    let z = random_birkhoff_gauge(&r, depth, &mut rng);
                    let y = apply_gauge(&r, &z, &x).unwrap();
                    let nf = birkhoff_normalize(&r, &y).unwrap();
                    assert_eq!(nf.strictness, s);
                    assert_eq!(nf.irregular_type(), base.irregular_type());
                    assert_eq!(apply_gauge(&r, &nf.gauge_log, &y).unwrap(), nf.normal);
                }
            }
        }
    }
}

#[test]
fn gauge_with_degree_zero_part_is_rejected() {
    let s = rd("sl2");
    let z = tc(&s, 2, &[(0, "E12", 1)]);
    assert!(matches!(exp_ad(&s, &z), Err(Error::Precondition(_))));
}

#[test]
fn centralizer_examples() {
    let s = rd("sl2");
    let c = centralizer(&s, &tc(&s, 2, &[(0, "H1", 1)])).unwrap();
    assert_eq!(c.dim, 2);
    assert!(c.matches);
    let c = centralizer(&s, &tc(&s, 2, &[(1, "H1", 1)])).unwrap();
    assert_eq!(c.dim, 4);
    assert_eq!(c.levi_dims, [3]);
    assert!(c.matches);
    let g = rd("gl3");
    let z = tc(&g, 3, &[(0, "E11", 1), (0, "E22", 1), (0, "E33", 1), (2, "E11", 2), (2, "E22", 2), (2, "E33", 2)]);
    let c = centralizer(&g, &z).unwrap();
    assert_eq!(c.dim, 27);
    assert!(c.matches);
    // Non-Cartan last coefficient commuting with the rest.
    let c = centralizer(&s, &tc(&s, 2, &[(1, "E12", 1)])).unwrap();
    assert_eq!((c.dim, c.predicted_dim), (4, 4));
    assert!(c.matches);
    assert!(matches!(centralizer(&s, &tc(&s, 2, &[(0, "E12", 1)])), Err(Error::Precondition(_))));
    assert!(matches!(centralizer(&s, &tc(&s, 2, &[(0, "H1", 1), (1, "E12", 1)])), Err(Error::Precondition(_))));
}

#[test]
fn centralizer_matches_structure_on_stratum_representatives() {
    for name in ["sl2", "gl2", "gl3", "sl3"] {
        let r = rd(name);
        let w = WeylGroup::new(&r);
        let levis = enumerate_levi(&r, &w);
        for depth in 1..=3 {
            for f in enumerate_filtrations(&levis, depth) {
                let pts = Stratum::new(&r, f.clone()).witness(&r).unwrap();
                let x = TcElement::new(pts.iter().rev().map(|p| r.cartan_g(p)).collect());
                let c = centralizer(&r, &x).unwrap();
                assert!(c.matches, "{name} {:?}", f.to_lists());
                assert_eq!(c.dim, c.predicted_dim);
                // Equivalent count r·dim t + Σ_α min(m_α, r).
                let mut alt = depth * r.cartan_dim();
                for a in 0..r.num_roots() {
                    let m = (0..depth).find(|&j| !r.root_eval(a, r.cartan_part(&x.coeffs[j])).is_zero()).unwrap_or(depth);
                    alt += m.min(depth);
                }
                assert_eq!(c.dim, alt);
            }
        }
    }
}

#[test]
fn classify_marked_examples() {
    let s = rd("sl2");
    let h = |a: i64, b: i64| tc(&s, 2, &[(0, "H1", a), (1, "H1", b)]);
    assert!(classify_marked(&s, &h(1, 0), &h(2, 0)).unwrap());
    assert!(!classify_marked(&s, &h(1, 0), &h(0, 1)).unwrap());
    let g = rd("gl3");
    let gx = |l: [i64; 3], t: [i64; 2]| {
        TcElement::new(vec![g.cartan_g(&cartan(&[t[0], t[0], t[1]])), g.cartan_g(&cartan(&l))])
    };
    assert!(classify_marked(&g, &gx([1, 2, 3], [4, 5]), &gx([7, -1, 0], [0, 9])).unwrap());
    assert!(!classify_marked(&g, &gx([1, 1, 3], [4, 5]), &gx([7, -1, 0], [0, 9])).unwrap());
    assert!(classify_marked(&s, &tc(&s, 2, &[(0, "E12", 1)]), &h(1, 0)).is_err());
}

#[test]
fn classify_unmarked_examples() {
    let s = rd("sl2");
    let w = WeylGroup::new(&s);
    let h = |a: i64, b: i64| tc(&s, 2, &[(0, "H1", a), (1, "H1", b)]);
    assert!(classify_unmarked(&s, &w, &h(1, 1), &h(-1, -1)).unwrap());
    assert!(!classify_unmarked(&s, &w, &h(1, 1), &h(1, -1)).unwrap());
    let g = rd("gl3");
    let wg = WeylGroup::new(&g);
    let a = TcElement::new(vec![g.cartan_g(&cartan(&[1, 2, 3])), g.cartan_g(&cartan(&[4, 5, 6]))]);
    let b = TcElement::new(vec![g.cartan_g(&cartan(&[3, 1, 2])), g.cartan_g(&cartan(&[6, 4, 5]))]);
    let c = TcElement::new(vec![g.cartan_g(&cartan(&[3, 1, 2])), g.cartan_g(&cartan(&[4, 5, 6]))]);
    assert!(classify_unmarked(&g, &wg, &a, &b).unwrap());
    assert!(!classify_unmarked(&g, &wg, &a, &c).unwrap());
}

#[test]
fn unmarked_is_equivalence_consistent_with_strata() {
    let g = rd("gl3");
    let w = WeylGroup::new(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts: Vec<TcElement> = (0..12)
        .map(|_| TcElement::new((0..2).map(|_| g.cartan_g(&cartan(&[rng.gen_range(0..2), rng.gen_range(0..2), rng.gen_range(0..2)]))).collect()))
        .collect();
    for a in &pts {
        assert!(classify_unmarked(&g, &w, a, a).unwrap());
        for b in &pts {
            let ab = classify_unmarked(&g, &w, a, b).unwrap();
            assert_eq!(ab, classify_unmarked(&g, &w, b, a).unwrap());
            if ab {
                let fa = marking_filtration(&g, a).unwrap();
                let fb = marking_filtration(&g, b).unwrap();
                assert!(w.elements.iter().any(|e| fa.act(e) == fb));
                for c in &pts {
                    if classify_unmarked(&g, &w, b, c).unwrap() {
                        assert!(classify_unmarked(&g, &w, a, c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn kks_form_matches_b_pairing() {
    let g = rd("gl3");
    let chain = gl3_chain(&g);
    let lam = gl3_lambda([1, 4, 2], [3, -1]);
    assert_eq!(kks_form(&g, &chain, &lam).unwrap(), b_pairing_matrix(&g, &chain, &lam).unwrap());
    assert!(kks_form(&g, &chain, &gl3_lambda([0, 0, 0], [0, 0])).unwrap().is_zero());
    let s = rd("sl2");
    let f = ParabolicFiltration::constant(ParabolicSubset::borel(&s), 2);
    let m = kks_form(&s, &f, &[cartan(&[2]), cartan(&[3])]).unwrap();
    // λ_i given on H: entries λ_{i+j}(H).
    assert_eq!(m.to_rows(), vec![cartan(&[2, 3]), cartan(&[3, 0])]);
}
