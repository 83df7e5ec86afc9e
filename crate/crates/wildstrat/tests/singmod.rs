mod common;

use common::*;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use wildstrat::linalg::{in_span, Matrix};
use wildstrat::parab::{b_pairing_matrix, triangular_split, ParabolicFiltration};
use wildstrat::poly::Poly;
use wildstrat::rational::{q, qf, Q};
use wildstrat::singmod::*;
use wildstrat::RootDatum;

fn sl2_module(lambdas: &[&[i64]]) -> (RootDatum, SingularityModule<Q>) {
    let r = rd("sl2");
    let psi = borel_chain(&r, lambdas.len());
    let l: Vec<Vec<Q>> = lambdas.iter().map(|v| cartan(v)).collect();
    let m = SingularityModule::new(&r, &psi, &l).unwrap();
    (r, m)
}

fn flat(rd: &RootDatum, deg: usize, name: &str) -> usize {
    deg * rd.dim() + rd.basis_index(name).unwrap()
}

fn vec1(mono: &[u16], c: Q) -> MVec<Q> {
    let mut v = MVec::new();
    v.insert(mono.to_vec(), c);
    v
}

#[test]
fn sl2_weight_spaces() {
    let (_, m) = sl2_module(&[&[3], &[1]]);
    let ws = m.weight_spaces(2);
    assert_eq!(ws.len(), 3);
    assert_eq!(ws[0].basis, vec![Vec::<u16>::new()]);
    assert_eq!(ws[1].weight, vec![1]);
    assert_eq!(ws[1].basis, vec![vec![0], vec![1]]);
    assert_eq!(ws[2].basis, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    assert_eq!(m.letters, vec![(0, 0), (0, 1)]);
}

#[test]
fn sl2_action_examples() {
    let (r, m) = sl2_module(&[&[5]]);
    let e = flat(&r, 0, "E12");
    assert_eq!(m.act(e, &vec1(&[0], q(1))), vec1(&[], q(5)));
    assert_eq!(m.act(e, &vec1(&[0, 0], q(1))), vec1(&[0], q(8)));
    let (r, m) = sl2_module(&[&[3], &[7]]);
    assert_eq!(m.act(flat(&r, 1, "E12"), &vec1(&[0], q(1))), vec1(&[], q(7)));
}

#[test]
fn sl2_closed_form_raising() {
    let l = qf(7, 3);
    let r = rd("sl2");
    let m = SingularityModule::new(&r, &borel_chain(&r, 1), &[vec![l.clone()]]).unwrap();
    let e = flat(&r, 0, "E12");
    for k in 1..=6u16 {
        let mono = vec![0u16; k as usize];
        let kq = q(k as i64);
        let expected = &kq * (&l - &kq + q(1));
        assert_eq!(m.act(e, &vec1(&mono, q(1))), vec1(&mono[1..], expected));
    }
}

/// Independent normal-ordering oracle: rewrites the rightmost disordered adjacent pair.
fn naive_normal(rd: &RootDatum, r: usize, free: &[usize], lambdas: &[Vec<Q>], word: Vec<usize>) -> MVec<Q> {
    let d = rd.dim();
    let pos = |f: usize| free.iter().position(|&x| x == f);
    let mut out = MVec::new();
    let mut stack = vec![(word, q(1))];
    while let Some((w, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        let Some(&last) = w.last() else {
            *out.entry(Vec::new()).or_insert_with(Q::zero) += c;
            continue;
        };
        if pos(last).is_none() {
            let (deg, b) = (last / d, last % d);
            let chi = if b < rd.cartan_dim() { lambdas[deg][b].clone() } else { Q::zero() };
            stack.push((w[..w.len() - 1].to_vec(), c * chi));
            continue;
        }
        let bad = (0..w.len() - 1).rev().find(|&i| match (pos(w[i]), pos(w[i + 1])) {
            (None, _) => true,
            (Some(a), Some(b)) => a > b,
            _ => false,
        });
        match bad {
            None => {
                let mono: Vec<u16> = w.iter().map(|&f| pos(f).unwrap() as u16).collect();
                *out.entry(mono).or_insert_with(Q::zero) += c;
            }
            Some(i) => {
                let (a, b) = (w[i], w[i + 1]);
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                stack.push((swapped, c.clone()));
                let deg = a / d + b / d;
                if deg < r {
                    for &(k, v) in rd.bracket_basis(a % d, b % d) {
                        let mut nw = w[..i].to_vec();
                        nw.push(deg * d + k);
                        nw.extend_from_slice(&w[i + 2..]);
                        stack.push((nw, &c * q(v)));
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn fixtures() -> Vec<(RootDatum, ParabolicFiltration, Vec<Vec<Q>>)> {
    let sl2 = rd("sl2");
    let gl2 = rd("gl2");
    let gl3 = rd("gl3");
    vec![
        (sl2.clone(), borel_chain(&sl2, 1), vec![cartan(&[3])]),
        (sl2.clone(), borel_chain(&sl2, 2), vec![cartan(&[2]), cartan(&[5])]),
        (gl2.clone(), borel_chain(&gl2, 2), vec![cartan(&[1, 4]), cartan(&[2, -1])]),
        (gl3.clone(), borel_chain(&gl3, 1), vec![cartan(&[3, 1, -2])]),
        (gl3.clone(), gl3_chain(&gl3), gl3_lambda([2, -1, 5], [3, 1])),
    ]
}

#[test]
fn straightening_matches_naive_oracle() {
    for (r, psi, l) in fixtures() {
        let m = SingularityModule::new(&r, &psi, &l).unwrap();
        let depth = psi.depth();
        let free = m.engine().free_letters().to_vec();
        for ws in m.weight_spaces(2) {
            for mono in &ws.basis {
                let word: Vec<usize> = mono.iter().map(|&p| free[p as usize]).collect();
                for z in 0..r.dim() * depth {
                    let mut w = vec![z];
                    w.extend_from_slice(&word);
                    let expected = naive_normal(&r, depth, &free, &l, w);
                    assert_eq!(m.act(z, &vec1(mono, q(1))), expected, "{:?} z={z} mono={mono:?}", r.lie_type());
                }
            }
        }
    }
}

#[test]
fn action_is_a_representation() {
    for (r, psi, l) in fixtures() {
        let m = SingularityModule::new(&r, &psi, &l).unwrap();
        let n = r.dim() * psi.depth();
        let e = m.engine();
        for ws in m.weight_spaces(2) {
            for mono in &ws.basis {
                let v = vec1(mono, q(1));
                for a in 0..n {
                    for b in 0..n {
                        let lhs = e.act_combo(&e.bracket(a, b).iter().map(|&(k, c)| (k, q(c))).collect::<Vec<_>>(), &v);
                        let mut rhs = e.act(a, &e.act(b, &v));
                        mvec_axpy(&mut rhs, &q(-1), &e.act(b, &e.act(a, &v)));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn shapovalov_sl2_examples() {
    let (_, m) = sl2_module(&[&[3], &[7]]);
    let ws = m.weight_spaces(1);
    assert_eq!(m.shapovalov_block(&ws[0]), vec![vec![q(1)]]);
    assert_eq!(m.shapovalov_block(&ws[1]), vec![vec![q(3), q(7)], vec![q(7), q(0)]]);
    let l = qf(11, 4);
    let r = rd("sl2");
    let m = SingularityModule::new(&r, &borel_chain(&r, 1), &[vec![l.clone()]]).unwrap();
    for ws in m.weight_spaces(6) {
        let k = ws.height as i64;
        let expected = (0..k).fold(q(1), |acc, j| acc * q(j + 1) * (&l - q(j)));
        assert_eq!(m.shapovalov_block(&ws), vec![vec![expected]]);
    }
}

#[test]
fn forms_are_symmetric_orthogonal_and_contragredient() {
    for (r, psi, l) in fixtures() {
        let m = SingularityModule::new(&r, &psi, &l).unwrap();
        let spaces = m.weight_spaces(2);
        let all: Vec<&Vec<u16>> = spaces.iter().flat_map(|w| w.basis.iter()).collect();
        for ws in &spaces {
            let a = m.shapovalov_block(ws);
            for i in 0..a.len() {
                for j in 0..a.len() {
                    assert_eq!(a[i][j], a[j][i]);
                }
            }
        }
        for x in &all {
            for y in &all {
                if m.weight_of(x) != m.weight_of(y) {
                    assert!(m.shapovalov_entry(x, y).is_zero());
                }
            }
        }
        for x in all.iter().filter(|x| x.len() <= 1) {
            for y in &all {
                for g in 0..r.dim() * psi.depth() {
                    let gx = m.act(r.transpose_letter(g), &vec1(x, q(1)));
                    let gy = m.act(g, &vec1(y, q(1)));
                    assert_eq!(m.shapovalov_vectors(&gx, &vec1(y, q(1))), m.shapovalov_vectors(&vec1(x, q(1)), &gy));
                }
            }
        }
    }
}

#[test]
fn radical_profiles_sl2() {
    let (_, m) = sl2_module(&[&[2]]);
    let p = m.maximal_submodule_profile(5);
    let dims: Vec<usize> = p.blocks.iter().map(|b| b.3).collect();
    assert_eq!(dims, vec![0, 0, 0, 1, 1, 1]);
    assert!(!m.is_simple_up_to(3));
    assert!(m.is_simple_up_to(2));
    let r = rd("sl2");
    let m = SingularityModule::new(&r, &borel_chain(&r, 1), &[vec![qf(1, 2)]]).unwrap();
    assert!(m.is_simple_up_to(6));
}

#[test]
fn radical_is_a_submodule() {
    let cases = vec![
        {
            let r = rd("sl2");
            let psi = borel_chain(&r, 1);
            (r, psi, vec![cartan(&[2])])
        },
        {
            let r = rd("gl3");
            let psi = gl3_chain(&r);
            (r, psi, gl3_lambda([1, 0, 4], [2, 5]))
        },
    ];
    for (r, psi, l) in cases {
        let m = SingularityModule::new(&r, &psi, &l).unwrap();
        let k = 4;
        let spaces = m.weight_spaces(k);
        let radicals: BTreeMap<Vec<i64>, (&WeightSpace, Vec<MVec<Q>>)> =
            spaces.iter().map(|ws| (ws.weight.clone(), (ws, m.radical(ws)))).collect();
        assert!(radicals.values().any(|(_, v)| !v.is_empty()), "{:?}", r.lie_type());
        for (ws, rad) in radicals.values() {
            for v in rad {
                for g in 0..r.dim() * psi.depth() {
                    let u = m.act(g, v);
                    let Some((mono, _)) = u.iter().next() else { continue };
                    let Some((target, trad)) = radicals.get(&m.weight_of(mono)) else { continue };
                    let coords = |x: &MVec<Q>| target.basis.iter().map(|b| x.get(b).cloned().unwrap_or_else(Q::zero)).collect::<Vec<_>>();
                    let basis: Vec<Vec<Q>> = trad.iter().map(coords).collect();
                    assert!(in_span(&basis, &coords(&u)), "weight {:?} letter {g}", ws.weight);
                }
            }
        }
    }
}

#[test]
fn factorisation_of_dilated_blocks() {
    let sl3 = rd("sl3");
    let mut cases = fixtures();
    cases.push((sl3.clone(), borel_chain(&sl3, 2), vec![cartan(&[1, 2]), cartan(&[3, -1])]));
    for (r, psi, l) in cases {
        if !wildstrat::parab::is_nonsingular(&r, &psi, &l).unwrap() {
            continue;
        }
        let m = SingularityModule::dilated(&r, &psi, &l).unwrap();
        let dual = m.dual_basis().unwrap();
        for ws in m.weight_spaces(3) {
            let block = m.dual_block(&ws, &dual);
            let f = factorize_block(&block).unwrap();
            assert!(f.d.iter().all(|d| *d > Q::zero()));
            for i in 0..f.d.len() {
                assert_eq!(f.d[i], multiplicity_factorial(&ws.basis[i]));
                for j in i + 1..f.d.len() {
                    assert!(f.c.get(i, j).is_zero());
                }
            }
        }
    }
    let r = rd("sl2");
    let m = SingularityModule::dilated(&r, &borel_chain(&r, 1), &[cartan(&[3])]).unwrap();
    let dual = m.dual_basis().unwrap();
    let ws = m.weight_spaces(2);
    let f0 = factorize_block(&m.dual_block(&ws[0], &dual)).unwrap();
    assert_eq!((f0.d.clone(), f0.c.clone()), (vec![q(1)], Matrix::identity(1)));
    let f2 = factorize_block(&m.dual_block(&ws[2], &dual)).unwrap();
    assert_eq!(f2.d, vec![q(2)]);
}

#[test]
fn dual_basis_normalisation() {
    for (r, psi, l) in fixtures() {
        let m = SingularityModule::dilated(&r, &psi, &l).unwrap();
        let dual = m.dual_basis().unwrap();
        let n = m.letters.len() as u16;
        for a in 0..n {
            for b in 0..n {
                let s = m.nonsymmetric_entry(&[dual[a as usize].clone()], &[b]);
                let expected = if a == b { Poly::monomial(1, q(1)) } else { Poly::zero() };
                assert_eq!(s, expected);
            }
        }
    }
}

#[test]
fn nonsymmetric_form_relations() {
    for (r, psi, l) in fixtures() {
        let m = SingularityModule::new(&r, &psi, &l).unwrap();
        for ws in m.weight_spaces(2) {
            for x in &ws.basis {
                let theta: Vec<Vec<(usize, Q)>> =
                    x.iter().map(|&p| vec![(r.transpose_letter(m.letter_flat(p)), -Q::one())]).collect();
                for y in &ws.basis {
                    assert_eq!(m.nonsymmetric_entry(&theta, y), m.shapovalov_entry(x, y));
                }
            }
        }
        let split = triangular_split(&r, &psi);
        let b = b_pairing_matrix(&r, &psi, &l).unwrap();
        for (i, &yp) in split.u_plus.iter().enumerate() {
            for (j, &xm) in split.u_minus.iter().enumerate() {
                let p = m.engine().position(xm).unwrap();
                assert_eq!(m.nonsymmetric_letters(&[yp], &[p]), -b.get(i, j).clone());
            }
        }
        assert_eq!(m.nonsymmetric_letters(&[], &[]), q(1));
    }
    let (r, m) = sl2_module(&[&[4]]);
    assert_eq!(m.nonsymmetric_letters(&[flat(&r, 0, "E12")], &[0]), q(-4));
}

#[test]
fn truncated_quotients() {
    let r = rd("sl2");
    let psi = borel_chain(&r, 2);
    for (l1, proper) in [(0, true), (1, false)] {
        let l = vec![cartan(&[3]), cartan(&[l1])];
        assert_eq!(truncated_quotient_proper(&l, 1).unwrap(), proper);
        assert_eq!(truncated_quotient_proper_literal(&r, &l, 1).unwrap(), proper);
        let m = SingularityModule::new(&r, &psi, &l).unwrap();
        assert_eq!(m.truncated_quotient_saturation(1, 4), proper);
    }
    let g = rd("gl2");
    let l = vec![cartan(&[2, 0]), cartan(&[1, 1])];
    let m = SingularityModule::new(&g, &borel_chain(&g, 2), &l).unwrap();
    assert!(truncated_quotient_proper_literal(&g, &l, 1).unwrap());
    assert!(!truncated_quotient_proper(&l, 1).unwrap());
    assert!(!m.truncated_quotient_saturation(1, 4));
    assert!(truncated_quotient_proper(&l, 0).is_err());
    assert!(truncated_quotient_proper(&l, 2).is_err());
}

#[test]
fn conjecture_probe_examples() {
    let r = rd("sl2");
    let p = conjecture_probe(&r, &borel_chain(&r, 2), &[cartan(&[2]), cartan(&[1])], 4).unwrap();
    assert!(p.cond1_nonsingular && p.cond2_alcove);
    assert_eq!(p.verdict, "consistent");
    let g = rd("gl3");
    let psi = gl3_chain(&g);
    let p = conjecture_probe(&g, &psi, &gl3_lambda([1, 0, 4], [2, 5]), 4).unwrap();
    assert!(p.cond1_nonsingular && !p.cond2_alcove);
    assert!(p.verdict == "consistent" || p.verdict == "inconclusive");
    let p = conjecture_probe(&g, &psi, &[vec![qf(1, 2), qf(1, 3), qf(-2, 7)], cartan(&[2, 2, 5])], 3).unwrap();
    assert_eq!((p.cond2_alcove, p.verdict.as_str()), (true, "consistent"));
}
