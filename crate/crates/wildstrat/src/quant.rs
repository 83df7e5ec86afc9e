//! Deformation quantisation from the inverse Shapovalov form: the ℏ-expansion of `F`, the
//! Poisson bivector, projection to `V₀ = U g_r / U g_r · 𝔩` and exact truncated associativity.

use crate::error::{Error, Result};
use crate::liecore::RootDatum;
use crate::linalg::Matrix;
use crate::parab::{is_nonsingular, triangular_split, ParabolicFiltration};
use crate::poly::{HSeries, Poly};
use crate::rational::{fmt_q, serde_q, Q};
use crate::singmod::{factorize_block, InducedModule, MVec, Mono, SingularityModule};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// A word of rational combinations of letters, read as a product in `U g_r` (leftmost outermost).
pub type Word = Vec<Vec<(usize, Q)>>;

/// One coefficient `f_{ij} ℏ^k X_i ⊗ Ỹ_j` of the inverse Shapovalov series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HTerm {
    /// Power of ℏ.
    pub hdeg: usize,
    /// Weight in simple-root coordinates.
    pub weight: Vec<i64>,
    /// PBW monomial `X_i` in the negative letters.
    pub left: Mono,
    /// Dual monomial `Ỹ_j`, indexed by the same letter positions.
    pub right: Mono,
    /// The coefficient.
    #[serde(with = "serde_q")]
    pub coeff: Q,
}

/// The inverse Shapovalov series truncated at `ℏ^order` on weights of height at most `height`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HTensor {
    /// Truncation order `N`.
    pub order: usize,
    /// Height bound `K`.
    pub height: usize,
    /// Nonzero terms.
    pub terms: Vec<HTerm>,
}

/// The bivector `Π = Σ X_a ∧ Ỹ_a` over the dual bases.
#[derive(Clone, Debug, Serialize)]
pub struct PoissonBivector {
    /// Pairs `(X_a, Ỹ_a)`: a negative letter and its dual combination of positive letters.
    pub pairs: Vec<(usize, Vec<(usize, String)>)>,
}

/// The module `V₀` induced from the zero character of `𝔩`, with free letters `u⁻` then `u⁺`.
pub struct V0Module {
    engine: InducedModule<Q>,
    weights: Vec<Vec<i64>>,
}

impl V0Module {
    /// Builds `V₀` for a parabolic filtration, with the negative letters in the given order.
    pub fn new(rd: &RootDatum, psi: &ParabolicFiltration, negative: &[usize]) -> Self {
        let split = triangular_split(rd, psi);
        let free: Vec<usize> = negative.iter().chain(split.u_plus.iter()).copied().collect();
        let d = rd.dim();
        let weights = free
            .iter()
            .map(|&f| {
                let k = rd.basis_root(f % d).expect("root letter");
                rd.simple_coords(k).to_vec()
            })
            .collect();
        let engine = InducedModule::new(rd, psi.depth(), free, vec![Q::zero(); d * psi.depth()]);
        V0Module { engine, weights }
    }

    /// The straightening engine.
    pub fn engine(&self) -> &InducedModule<Q> {
        &self.engine
    }

    /// `p(u) = u · w₀` for a word `u`.
    pub fn project(&self, word: &[Vec<(usize, Q)>]) -> MVec<Q> {
        self.act_word(word, &InducedModule::<Q>::basis_vector(&[]))
    }

    /// Action of a word on a vector, the rightmost factor acting first.
    pub fn act_word(&self, word: &[Vec<(usize, Q)>], v: &MVec<Q>) -> MVec<Q> {
        word.iter().rev().fold(v.clone(), |acc, combo| self.engine.act_combo(combo, &acc))
    }

    /// Signed weight of a normal-form monomial.
    pub fn weight(&self, mono: &[u16]) -> Vec<i64> {
        let mut w = vec![0; self.weights.first().map_or(0, |x| x.len())];
        for &p in mono {
            for (x, y) in w.iter_mut().zip(&self.weights[p as usize]) {
                *x += y;
            }
        }
        w
    }
}

/// A three-fold tensor in `V₀^{⊗3}` graded by ℏ-degree.
pub type Triple = BTreeMap<(usize, Mono, Mono, Mono), Q>;

/// Outcome of the associativity comparison.
#[derive(Clone, Debug, Serialize)]
pub struct AssociativityReport {
    /// Whether both compositions agree on the compared region.
    pub equal: bool,
    /// Number of nonzero components compared.
    pub components: usize,
    /// First differing component, if any.
    pub first_difference: Option<String>,
    /// `B^(12,3)` on the compared region.
    #[serde(skip)]
    pub lhs: Triple,
    /// `B^(1,23)` on the compared region.
    #[serde(skip)]
    pub rhs: Triple,
}

/// The star-product data for a balanced filtration and a nonsingular character.
pub struct StarProduct {
    module: SingularityModule<Poly>,
    dual: Vec<Vec<(usize, Q)>>,
    v0: V0Module,
    series: HTensor,
}

impl StarProduct {
    /// Computes the inverse Shapovalov series to order `n` on weights of height at most `k`.
    pub fn new(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>], k: usize, n: usize) -> Result<Self> {
        if k < n {
            return Err(Error::Validation(format!("height bound {k} is below the order {n}")));
        }
        if !psi.is_balanced(rd) {
            return Err(Error::Precondition("the parabolic filtration is not balanced".into()));
        }
        if !is_nonsingular(rd, psi, lambdas)? {
            return Err(Error::Precondition("the character is singular".into()));
        }
        let module = SingularityModule::dilated(rd, psi, lambdas)?;
        let dual = module.dual_basis()?;
        let blocks: Vec<_> = module.weight_spaces(k);
        let mut terms = Vec::new();
        for ws in blocks {
            let block = module.dual_block(&ws, &dual);
            let f = factorize_block(&block)?;
            let inv = inverse_series(&f, n)?;
            for (i, x) in ws.basis.iter().enumerate() {
                for (j, y) in ws.basis.iter().enumerate() {
                    for (h, c) in inv[i][j].coeffs.iter().enumerate() {
                        if !c.is_zero() {
                            terms.push(HTerm { hdeg: h, weight: ws.weight.clone(), left: x.clone(), right: y.clone(), coeff: c.clone() });
                        }
                    }
                }
            }
        }
        let negative: Vec<usize> = module.engine().free_letters().to_vec();
        let v0 = V0Module::new(rd, psi, &negative);
        Ok(StarProduct { module, dual, v0, series: HTensor { order: n, height: k, terms } })
    }

    /// The inverse Shapovalov series.
    pub fn series(&self) -> &HTensor {
        &self.series
    }

    /// The module `V₀`.
    pub fn v0(&self) -> &V0Module {
        &self.v0
    }

    /// The dual basis `Ỹ` of the positive letters.
    pub fn dual_basis(&self) -> &[Vec<(usize, Q)>] {
        &self.dual
    }

    /// The word of `X_i` for a monomial.
    pub fn left_word(&self, mono: &[u16]) -> Word {
        mono.iter().map(|&p| vec![(self.module.letter_flat(p), Q::one())]).collect()
    }

    /// The word of `Ỹ_j` for a monomial.
    pub fn right_word(&self, mono: &[u16]) -> Word {
        mono.iter().map(|&p| self.dual[p as usize].clone()).collect()
    }

    /// The Poisson bivector over the dual bases.
    pub fn poisson_bivector(&self) -> PoissonBivector {
        PoissonBivector {
            pairs: (0..self.dual.len())
                .map(|a| (self.module.letter_flat(a as u16), self.dual[a].iter().map(|(f, c)| (*f, fmt_q(c))).collect()))
                .collect(),
        }
    }

    /// `B = p(F)` in `V₀ ⊗ V₀`, keyed by `(ℏ-degree, left, right)`.
    pub fn bidifferential(&self) -> BTreeMap<(usize, Mono, Mono), Q> {
        let mut out = BTreeMap::new();
        for t in &self.series.terms {
            let a = self.v0.project(&self.left_word(&t.left));
            let b = self.v0.project(&self.right_word(&t.right));
            for (m, x) in &a {
                for (n, y) in &b {
                    *out.entry((t.hdeg, m.clone(), n.clone())).or_insert_with(Q::zero) += &t.coeff * x * y;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Whether the skew part of the ℏ¹ coefficient of `B` equals `Π`.
    pub fn first_order_check(&self) -> bool {
        let b = self.bidifferential();
        let mut skew: BTreeMap<(Mono, Mono), Q> = BTreeMap::new();
        for ((h, m, n), c) in &b {
            if *h == 1 {
                *skew.entry((m.clone(), n.clone())).or_insert_with(Q::zero) += c;
                *skew.entry((n.clone(), m.clone())).or_insert_with(Q::zero) -= c;
            }
        }
        let mut pi: BTreeMap<(Mono, Mono), Q> = BTreeMap::new();
        for a in 0..self.dual.len() {
            let w = self.module.weight_of(&[a as u16]);
            if self.module.relative_height(&w).is_none_or(|h| h > self.series.height) {
                continue;
            }
            let x = self.v0.project(&self.left_word(&[a as u16]));
            let y = self.v0.project(&[self.dual[a].clone()]);
            for (m, s) in &x {
                for (n, t) in &y {
                    *pi.entry((m.clone(), n.clone())).or_insert_with(Q::zero) += s * t;
                    *pi.entry((n.clone(), m.clone())).or_insert_with(Q::zero) -= s * t;
                }
            }
        }
        skew.retain(|_, v| !v.is_zero());
        pi.retain(|_, v| !v.is_zero());
        skew == pi
    }

    fn in_region(&self, mono: &[u16]) -> bool {
        let w = self.v0.weight(mono);
        let h = if w.iter().all(|&x| x <= 0) {
            self.module.relative_height(&w.iter().map(|x| -x).collect::<Vec<_>>())
        } else if w.iter().all(|&x| x >= 0) {
            self.module.relative_height(&w)
        } else {
            None
        };
        h.is_some_and(|h| h <= self.series.height)
    }

    fn accumulate(&self, out: &mut Triple, hdeg: usize, coeff: &Q, f: [&MVec<Q>; 3]) {
        for (a, x) in f[0] {
            if !self.in_region(a) {
                continue;
            }
            for (b, y) in f[1] {
                for (c, z) in f[2] {
                    if !self.in_region(c) {
                        continue;
                    }
                    *out.entry((hdeg, a.clone(), b.clone(), c.clone())).or_insert_with(Q::zero) += coeff * x * y * z;
                }
            }
        }
    }

    /// Compares `(Δ⊗1)(B)·(B⊗1)` with `(1⊗Δ)(B)·(1⊗B)` in `V₀^{⊗3}` up to `ℏ^N`, on the components
    /// whose outer factors have relative height at most `K`.
    pub fn associativity(&self) -> AssociativityReport {
        let n = self.series.order;
        let terms = &self.series.terms;
        let proj: Vec<(MVec<Q>, MVec<Q>)> = terms
            .par_iter()
            .map(|t| (self.v0.project(&self.left_word(&t.left)), self.v0.project(&self.right_word(&t.right))))
            .collect();
        let (lhs, rhs) = (0..terms.len())
            .into_par_iter()
            .map(|k| {
                let (mut lhs, mut rhs) = (Triple::new(), Triple::new());
                let tk = &terms[k];
                let (xk, yk) = (self.left_word(&tk.left), self.right_word(&tk.right));
                for (l, tl) in terms.iter().enumerate() {
                    let h = tk.hdeg + tl.hdeg;
                    if h > n {
                        continue;
                    }
                    let coeff = &tk.coeff * &tl.coeff;
                    for (s, c) in shuffles(&xk) {
                        let f1 = self.v0.act_word(&s, &proj[l].0);
                        let f2 = self.v0.act_word(&c, &proj[l].1);
                        self.accumulate(&mut lhs, h, &coeff, [&f1, &f2, &proj[k].1]);
                    }
                    for (s, c) in shuffles(&yk) {
                        let f2 = self.v0.act_word(&s, &proj[l].0);
                        let f3 = self.v0.act_word(&c, &proj[l].1);
                        self.accumulate(&mut rhs, h, &coeff, [&proj[k].0, &f2, &f3]);
                    }
                }
                (lhs, rhs)
            })
            .reduce(|| (Triple::new(), Triple::new()), |mut a, b| {
                merge(&mut a.0, b.0);
                merge(&mut a.1, b.1);
                a
            });
        let (mut lhs, mut rhs) = (lhs, rhs);
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        let first_difference = lhs
            .keys()
            .chain(rhs.keys())
            .find(|key| lhs.get(*key) != rhs.get(*key))
            .map(|key| format!("{key:?}: {:?} vs {:?}", lhs.get(key).map(fmt_q), rhs.get(key).map(fmt_q)));
        AssociativityReport { equal: first_difference.is_none(), components: lhs.len().max(rhs.len()), first_difference, lhs, rhs }
    }
}

fn merge(a: &mut Triple, b: Triple) {
    for (k, v) in b {
        *a.entry(k).or_insert_with(Q::zero) += v;
    }
}

/// Coproduct of a product of primitive factors: all ordered splittings into a subword and its complement.
pub fn shuffles(word: &[Vec<(usize, Q)>]) -> Vec<(Word, Word)> {
    (0u32..1 << word.len())
        .map(|mask| {
            let (mut s, mut c) = (Vec::new(), Vec::new());
            for (i, x) in word.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.push(x.clone());
                } else {
                    c.push(x.clone());
                }
            }
            (s, c)
        })
        .collect()
}

/// `Q̃⁻¹C⁻¹D⁻¹` truncated at `ℏ^n`, with `ℏ = c⁻¹`.
fn inverse_series(f: &crate::singmod::Factorization, n: usize) -> Result<Vec<Vec<HSeries>>> {
    let size = f.d.len();
    let identity = |i: usize, j: usize| if i == j { HSeries::monomial(n, 0, Q::one()) } else { HSeries::zero(n) };
    let mut r = vec![vec![HSeries::zero(n); size]; size];
    for i in 0..size {
        for j in 0..size {
            let q = f.q[i][j]
                .to_hbar_series(n)
                .ok_or_else(|| Error::ClaimViolation("Q̃ has positive powers of c".into()))?;
            r[i][j] = identity(i, j).add(&q.scale(&-Q::one()));
        }
    }
    let mul = |a: &Vec<Vec<HSeries>>, b: &Vec<Vec<HSeries>>| -> Vec<Vec<HSeries>> {
        (0..size)
            .map(|i| (0..size).map(|j| (0..size).fold(HSeries::zero(n), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))).collect())
            .collect()
    };
    let mut inv: Vec<Vec<HSeries>> = (0..size).map(|i| (0..size).map(|j| identity(i, j)).collect()).collect();
    let mut power = inv.clone();
    for _ in 0..n {
        power = mul(&power, &r);
        for i in 0..size {
            for j in 0..size {
                inv[i][j] = inv[i][j].add(&power[i][j]);
            }
        }
    }
    let cinv: Matrix = f.c.inverse().expect("unipotent");
    Ok((0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let dinv = if f.l[j] <= n { HSeries::monomial(n, f.l[j], f.d[j].recip()) } else { HSeries::zero(n) };
                    (0..size).fold(HSeries::zero(n), |acc, k| acc.add(&inv[i][k].scale(cinv.get(k, j)))).mul(&dinv)
                })
                .collect()
        })
        .collect())
}

/// The inverse Shapovalov series `F` to order `n` on weights of height at most `k`.
pub fn inverse_shapovalov_series(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>], k: usize, n: usize) -> Result<HTensor> {
    Ok(StarProduct::new(rd, psi, lambdas, k, n)?.series)
}

/// Exact truncated associativity at order `n` with height bound `k`.
pub fn associativity_check(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>], n: usize, k: usize) -> Result<AssociativityReport> {
    Ok(StarProduct::new(rd, psi, lambdas, k, n)?.associativity())
}

/// Whether raising the height bound from `k_small` to `k_large` leaves the series and both
/// compositions unchanged on the smaller region.
pub fn truncation_stable(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>], n: usize, k_small: usize, k_large: usize) -> Result<bool> {
    let small = StarProduct::new(rd, psi, lambdas, k_small, n)?;
    let large = StarProduct::new(rd, psi, lambdas, k_large, n)?;
    let restricted: Vec<&HTerm> = large
        .series
        .terms
        .iter()
        .filter(|t| small.module.relative_height(&t.weight).is_some_and(|h| h <= k_small))
        .collect();
    if restricted.len() != small.series.terms.len() || restricted.iter().zip(&small.series.terms).any(|(a, b)| *a != b) {
        return Ok(false);
    }
    let (a, b) = (small.associativity(), large.associativity());
    let restrict = |t: &Triple| -> Triple { t.iter().filter(|((_, x, _, z), _)| small.in_region(x) && small.in_region(z)).map(|(k, v)| (k.clone(), v.clone())).collect() };
    Ok(a.lhs == restrict(&b.lhs) && a.rhs == restrict(&b.rhs))
}
