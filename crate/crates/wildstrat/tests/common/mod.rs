#![allow(dead_code)]

use wildstrat::linalg::Matrix;
use wildstrat::rational::{q, Q};
use wildstrat::{GElement, RootDatum, TcElement};

pub fn rd(name: &str) -> RootDatum {
    RootDatum::from_name(name).unwrap()
}

/// Element from `(name, integer coefficient)` pairs.
pub fn el(rd: &RootDatum, terms: &[(&str, i64)]) -> GElement {
    let t: Vec<(&str, Q)> = terms.iter().map(|&(n, c)| (n, q(c))).collect();
    rd.g_from_terms(&t).unwrap()
}

/// Element of depth `r` from `(degree, name, coefficient)` triples.
pub fn tc(rd: &RootDatum, r: usize, terms: &[(usize, &str, i64)]) -> TcElement {
    let mut x = TcElement::zero(rd.dim(), r);
    for &(d, n, c) in terms {
        x.coeffs[d] = x.coeffs[d].add(&el(rd, &[(n, c)]));
    }
    x
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

pub fn cartan(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Diagonal matrix entries of `gl_n` as Cartan coordinates.
pub fn diag(v: &[i64]) -> Vec<Q> {
    cartan(v)
}

/// The gl3 depth-2 chain `ψ_0 = Borel`, `ψ_1 = Borel ∪ {α21}`.
pub fn gl3_chain(rd: &RootDatum) -> wildstrat::parab::ParabolicFiltration {
    use wildstrat::strat::RootSubset;
    let borel = RootSubset::from_indices(0..rd.num_positive());
    let mut p1 = borel;
    p1.insert(rd.root_ij(2, 1).unwrap());
    wildstrat::parab::ParabolicFiltration::new(rd, &[borel, p1]).unwrap()
}

/// gl3 chain formal type: `λ_0 = (l1, l2, l3)`, `λ_1 = (t1, t1, t2)`.
pub fn gl3_lambda(l: [i64; 3], t: [i64; 2]) -> Vec<Vec<Q>> {
    vec![cartan(&l), cartan(&[t[0], t[0], t[1]])]
}

/// Constant Borel filtration of depth `r`.
pub fn borel_chain(rd: &RootDatum, r: usize) -> wildstrat::parab::ParabolicFiltration {
    wildstrat::parab::ParabolicFiltration::constant(wildstrat::parab::ParabolicSubset::borel(rd), r)
}
