//! Levi subsystems, Levi filtrations, the stratifications they index, Weyl quotients and dual strata.

use crate::error::{Error, Result};
use crate::liecore::RootDatum;
use crate::linalg::{in_span, Matrix};
use crate::rational::{q, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

/// A set of roots, as a bitmask over the root list of a [`RootDatum`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootSubset(pub u64);

impl RootSubset {
    /// The empty set.
    pub fn empty() -> Self {
        RootSubset(0)
    }

    /// All roots of `rd`.
    pub fn full(rd: &RootDatum) -> Self {
        let n = rd.num_roots();
        RootSubset(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    /// Builds a subset from root indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = 0u64;
        for k in it {
            s |= 1 << k;
        }
        RootSubset(s)
    }

    /// Membership.
    pub fn contains(&self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    /// Adds a root.
    pub fn insert(&mut self, k: usize) {
        self.0 |= 1 << k;
    }

    /// Number of roots.
    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Root indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        (0..64).filter(|&k| self.contains(k)).collect()
    }

    /// Union.
    pub fn union(&self, o: RootSubset) -> RootSubset {
        RootSubset(self.0 | o.0)
    }

    /// Intersection.
    pub fn intersection(&self, o: RootSubset) -> RootSubset {
        RootSubset(self.0 & o.0)
    }

    /// Difference `self ∖ o`.
    pub fn difference(&self, o: RootSubset) -> RootSubset {
        RootSubset(self.0 & !o.0)
    }

    /// Inclusion `self ⊆ o`.
    pub fn is_subset(&self, o: RootSubset) -> bool {
        self.0 & !o.0 == 0
    }

    /// The set `-self`.
    pub fn negate(&self, rd: &RootDatum) -> RootSubset {
        RootSubset::from_indices(self.indices().into_iter().map(|k| rd.neg(k)))
    }
}

/// Basis of `Ker(φ) = ⋂_{α∈φ} Ker α` in Cartan coordinates.
pub fn kernel_basis(rd: &RootDatum, phi: RootSubset) -> Vec<Vec<Q>> {
    let nt = rd.cartan_dim();
    if phi.is_empty() {
        return Matrix::identity(nt).to_rows();
    }
    let rows: Vec<Vec<Q>> = phi.indices().iter().map(|&k| rd.covector(k).to_vec()).collect();
    Matrix::from_rows(&rows).nullspace()
}

/// Roots vanishing on `Ker(φ)`.
pub fn levi_closure(rd: &RootDatum, phi: RootSubset) -> RootSubset {
    let ker = kernel_basis(rd, phi);
    RootSubset::from_indices((0..rd.num_roots()).filter(|&k| ker.iter().all(|v| rd.root_eval(k, v).is_zero())))
}

/// Roots in the rational span of `φ`.
pub fn span_closure(rd: &RootDatum, phi: RootSubset) -> RootSubset {
    let span: Vec<Vec<Q>> = phi.indices().iter().map(|&k| rd.covector(k).to_vec()).collect();
    RootSubset::from_indices((0..rd.num_roots()).filter(|&k| phi.contains(k) || in_span(&span, rd.covector(k))))
}

/// A rational point of the span of `basis` on which no root of `avoid` vanishes.
///
/// Walks the moment curve `Σ t^k v_k` for `t = 1, 2, …`; each root that is not identically zero on
/// the span vanishes at fewer than `basis.len()` values of `t`, so the search is finite.
pub fn witness_point(rd: &RootDatum, basis: &[Vec<Q>], avoid: RootSubset) -> Option<Vec<Q>> {
    let nt = rd.cartan_dim();
    let roots = avoid.indices();
    if roots.iter().any(|&k| basis.iter().all(|v| rd.root_eval(k, v).is_zero())) {
        return None;
    }
    let bound = roots.len() * basis.len().max(1) + 2;
    for t in 1..=bound as i64 {
        let mut x = vec![Q::zero(); nt];
        let mut pow = q(1);
        for v in basis {
            pow *= q(t);
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += &pow * vi;
            }
        }
        if roots.iter().all(|&k| !rd.root_eval(k, &x).is_zero()) {
            return Some(x);
        }
    }
    None
}

/// A random small-integer point of the span of `basis` avoiding the roots in `avoid`,
/// falling back to [`witness_point`].
pub fn random_witness_point(rd: &RootDatum, basis: &[Vec<Q>], avoid: RootSubset, rng: &mut ChaCha8Rng) -> Option<Vec<Q>> {
    let nt = rd.cartan_dim();
    for _ in 0..64 {
        let mut x = vec![Q::zero(); nt];
        for v in basis {
            let c = q(rng.gen_range(-6..=6));
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += &c * vi;
            }
        }
        if avoid.indices().iter().all(|&k| !rd.root_eval(k, &x).is_zero()) {
            return Some(x);
        }
    }
    witness_point(rd, basis, avoid)
}

/// The three equivalent characterizations of a Levi subsystem, evaluated independently:
/// span closure, equality with the vanishing set of its kernel, and existence of a witness point.
pub fn levi_criteria(rd: &RootDatum, phi: RootSubset) -> [bool; 3] {
    let by_span = span_closure(rd, phi) == phi;
    let by_kernel = levi_closure(rd, phi) == phi;
    let full = RootSubset::full(rd);
    let by_witness = match witness_point(rd, &kernel_basis(rd, phi), full.difference(phi)) {
        Some(x) => phi.indices().iter().all(|&k| rd.root_eval(k, &x).is_zero()),
        None => false,
    };
    [by_span, by_kernel, by_witness]
}

/// Whether `φ` is a Levi subsystem: `span(φ) ∩ Φ = φ`.
pub fn is_levi(rd: &RootDatum, phi: RootSubset) -> bool {
    phi.is_subset(RootSubset::full(rd)) && span_closure(rd, phi) == phi
}

/// Roots vanishing at a Cartan element.
pub fn levi_of_point(rd: &RootDatum, x: &[Q]) -> RootSubset {
    RootSubset::from_indices((0..rd.num_roots()).filter(|&k| rd.root_eval(k, x).is_zero()))
}

/// Element of the Weyl group, acting on Cartan coordinates and on root indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// Image of each root index.
    pub perm: Vec<usize>,
    /// Matrix on Cartan coordinates (column vectors).
    pub matrix: Matrix,
    /// Inverse matrix.
    pub inverse: Matrix,
}

impl WeylElement {
    /// Acts on a Cartan vector.
    pub fn act_cartan(&self, x: &[Q]) -> Vec<Q> {
        self.matrix.mul_vec(x)
    }

    /// Acts on a covector given by its values on the Cartan basis: `(wλ)(X) = λ(w⁻¹X)`.
    pub fn act_covector(&self, l: &[Q]) -> Vec<Q> {
        self.inverse.transpose().mul_vec(l)
    }

    /// Image of a root subset.
    pub fn act_subset(&self, phi: RootSubset) -> RootSubset {
        RootSubset::from_indices(phi.indices().into_iter().map(|k| self.perm[k]))
    }

    /// Composition `self ∘ o`.
    pub fn compose(&self, o: &WeylElement) -> WeylElement {
        WeylElement {
            perm: o.perm.iter().map(|&k| self.perm[k]).collect(),
            matrix: self.matrix.mul(&o.matrix),
            inverse: o.inverse.mul(&self.inverse),
        }
    }
}

/// The Weyl group, enumerated exhaustively.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    /// All elements; the identity comes first.
    pub elements: Vec<WeylElement>,
}

impl WeylGroup {
    /// Generates the group from simple reflections `s_i(X) = X - α_i(X) H_i`.
    pub fn new(rd: &RootDatum) -> Self {
        let nt = rd.cartan_dim();
        let nroots = rd.num_roots();
        let gens: Vec<WeylElement> = (0..rd.rank())
            .map(|i| {
                let a = rd.simple_root(i);
                let h = rd.coroot(a);
                let cov = rd.covector(a);
                let mut m = Matrix::identity(nt);
                for r in 0..nt {
                    for c in 0..nt {
                        let v = m.get(r, c) - &h[r] * &cov[c];
                        m.set(r, c, v);
                    }
                }
                let perm = (0..nroots)
                    .map(|k| {
                        let pairing: Q = crate::linalg::dot(rd.covector(k), h);
                        let n = crate::rational::to_i64(&pairing).expect("non-integral root pairing");
                        let v: Vec<i64> =
                            rd.simple_coords(k).iter().zip(rd.simple_coords(a)).map(|(b, s)| b - n * s).collect();
                        rd.root_from_simple_coords(&v).expect("reflection does not permute roots")
                    })
                    .collect();
                WeylElement { perm, matrix: m.clone(), inverse: m }
            })
            .collect();
        let id = WeylElement { perm: (0..nroots).collect(), matrix: Matrix::identity(nt), inverse: Matrix::identity(nt) };
        let mut seen: HashMap<Matrix, usize> = HashMap::new();
        seen.insert(id.matrix.clone(), 0);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let w = g.compose(&elements[i]);
                if !seen.contains_key(&w.matrix) {
                    seen.insert(w.matrix.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(w);
                }
            }
        }
        WeylGroup { elements }
    }

    /// Group order.
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// All Levi subsystems, as Weyl orbits of the standard ones `Φ_Σ`, `Σ ⊆ Δ`.
pub fn enumerate_levi(rd: &RootDatum, w: &WeylGroup) -> Vec<RootSubset> {
    let l = rd.rank();
    let mut out = BTreeSet::new();
    for sigma in 0u64..(1 << l) {
        let std = RootSubset::from_indices(
            (0..rd.num_roots()).filter(|&k| rd.simple_coords(k).iter().enumerate().all(|(i, &c)| c == 0 || sigma >> i & 1 == 1)),
        );
        for e in &w.elements {
            out.insert(e.act_subset(std));
        }
    }
    sort_by_rank(rd, out.into_iter().collect())
}

/// All Levi subsystems by testing every subset of roots; only feasible for small root systems.
pub fn enumerate_levi_bruteforce(rd: &RootDatum) -> Vec<RootSubset> {
    let n = rd.num_roots();
    assert!(n <= 20, "brute-force enumeration is limited to 20 roots");
    let v: Vec<RootSubset> = (0u64..(1 << n)).map(RootSubset).filter(|&p| is_levi(rd, p)).collect();
    sort_by_rank(rd, v)
}

fn sort_by_rank(rd: &RootDatum, mut v: Vec<RootSubset>) -> Vec<RootSubset> {
    v.sort_by_key(|&p| (kernel_basis(rd, p).len(), p));
    v
}

/// Graded poset of Levi subsystems under reverse inclusion, with rank `dim Ker(φ)`.
#[derive(Clone, Debug, Serialize)]
pub struct LeviPoset {
    /// Levi subsystems, sorted by rank.
    pub elements: Vec<RootSubset>,
    /// Rank of each element.
    pub ranks: Vec<usize>,
    /// Cover relations `(lower, upper)` as element indices; lower contains upper.
    pub covers: Vec<(usize, usize)>,
}

impl LeviPoset {
    /// Builds the poset from a list of Levi subsystems.
    pub fn new(rd: &RootDatum, levis: &[RootSubset]) -> Self {
        let elements = sort_by_rank(rd, levis.to_vec());
        let ranks: Vec<usize> = elements.iter().map(|&p| kernel_basis(rd, p).len()).collect();
        let n = elements.len();
        let less = |a: usize, b: usize| a != b && elements[b].is_subset(elements[a]);
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if less(a, b) && !(0..n).any(|c| less(a, c) && less(c, b)) {
                    covers.push((a, b));
                }
            }
        }
        LeviPoset { elements, ranks, covers }
    }

    /// Whether every cover raises the rank by exactly one.
    pub fn is_graded(&self) -> bool {
        self.covers.iter().all(|&(a, b)| self.ranks[b] == self.ranks[a] + 1)
    }

    /// Hasse diagram in DOT format; nodes carry the bitmask and the rank.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
        for (i, (p, r)) in self.elements.iter().zip(&self.ranks).enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{:#x}\\nrank {r}\"];", p.0);
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// A nondecreasing chain `φ_0 ⊆ … ⊆ φ_{s-1}` of Levi subsystems; `φ_s = Φ` is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LeviFiltration {
    /// The terms `φ_0, …, φ_{s-1}`.
    pub terms: Vec<RootSubset>,
}

impl LeviFiltration {
    /// Wraps a list of terms without validation.
    pub fn new(terms: Vec<RootSubset>) -> Self {
        LeviFiltration { terms }
    }

    /// The constant filtration with every term equal to `Φ`.
    pub fn constant_full(rd: &RootDatum, s: usize) -> Self {
        LeviFiltration { terms: vec![RootSubset::full(rd); s] }
    }

    /// Depth `s`.
    pub fn depth(&self) -> usize {
        self.terms.len()
    }

    /// Term `i`, with `φ_i = Φ` for `i >= s`.
    pub fn term(&self, rd: &RootDatum, i: usize) -> RootSubset {
        self.terms.get(i).copied().unwrap_or_else(|| RootSubset::full(rd))
    }

    /// Level `d_α = min{i : α ∈ φ_i}`.
    pub fn level(&self, k: usize) -> usize {
        self.terms.iter().position(|p| p.contains(k)).unwrap_or(self.terms.len())
    }

    /// Checks monotonicity and that every term is a Levi subsystem.
    pub fn validate(&self, rd: &RootDatum) -> Result<()> {
        for (i, p) in self.terms.iter().enumerate() {
            if !is_levi(rd, *p) {
                return Err(Error::Validation(format!("term {i} is not a Levi subsystem")));
            }
            if i > 0 && !self.terms[i - 1].is_subset(*p) {
                return Err(Error::Validation(format!("terms {} and {i} are not nested", i - 1)));
            }
        }
        Ok(())
    }

    /// Order of the stratification: `self ≤ o` iff `φ_i ⊇ φ'_i` for all `i`.
    pub fn le(&self, o: &LeviFiltration) -> bool {
        self.terms.len() == o.terms.len() && self.terms.iter().zip(&o.terms).all(|(a, b)| b.is_subset(*a))
    }

    /// Dimension `Σ_i dim Ker(φ_i)` of the stratum.
    pub fn dimension(&self, rd: &RootDatum) -> usize {
        self.terms.iter().map(|&p| kernel_basis(rd, p).len()).sum()
    }

    /// Image under a Weyl element.
    pub fn act(&self, w: &WeylElement) -> LeviFiltration {
        LeviFiltration { terms: self.terms.iter().map(|&p| w.act_subset(p)).collect() }
    }

    /// Root index lists of the terms.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.terms.iter().map(|p| p.indices()).collect()
    }
}

/// A stratum of `𝔱^s`: its filtration, dimension and the kernels containing its factors.
#[derive(Clone, Debug)]
pub struct Stratum {
    /// Indexing filtration.
    pub filtration: LeviFiltration,
    /// Complex dimension.
    pub dimension: usize,
    /// Basis of `Ker(φ_i)` for each factor.
    pub kernel_bases: Vec<Vec<Vec<Q>>>,
}

impl Stratum {
    /// Builds the stratum of a filtration.
    pub fn new(rd: &RootDatum, filtration: LeviFiltration) -> Self {
        let kernel_bases: Vec<_> = filtration.terms.iter().map(|&p| kernel_basis(rd, p)).collect();
        let dimension = kernel_bases.iter().map(|b| b.len()).sum();
        Stratum { filtration, dimension, kernel_bases }
    }

    /// A point of the stratum, if it is nonempty.
    pub fn witness(&self, rd: &RootDatum) -> Option<Vec<Vec<Q>>> {
        (0..self.filtration.depth())
            .map(|i| {
                let avoid = self.filtration.term(rd, i + 1).difference(self.filtration.terms[i]);
                witness_point(rd, &self.kernel_bases[i], avoid)
            })
            .collect()
    }

    /// A random point of the stratum, if it is nonempty.
    pub fn random_point(&self, rd: &RootDatum, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<Q>>> {
        (0..self.filtration.depth())
            .map(|i| {
                let avoid = self.filtration.term(rd, i + 1).difference(self.filtration.terms[i]);
                random_witness_point(rd, &self.kernel_bases[i], avoid, rng)
            })
            .collect()
    }
}

/// The filtration `φ_i = ⋂_{j≥i} φ_{X_j}` of the stratum containing a tuple of Cartan vectors.
pub fn stratum_of_tuple(rd: &RootDatum, xs: &[Vec<Q>]) -> LeviFiltration {
    let mut terms = vec![RootSubset::full(rd); xs.len()];
    let mut acc = RootSubset::full(rd);
    for i in (0..xs.len()).rev() {
        acc = acc.intersection(levi_of_point(rd, &xs[i]));
        terms[i] = acc;
    }
    LeviFiltration { terms }
}

/// Membership of a tuple in a stratum: `X_i ∈ Ker(φ_i)` and `α(X_i) ≠ 0` for `α ∈ φ_{i+1} ∖ φ_i`.
pub fn in_stratum(rd: &RootDatum, f: &LeviFiltration, xs: &[Vec<Q>]) -> bool {
    if xs.len() != f.depth() {
        return false;
    }
    (0..xs.len()).all(|i| {
        let next = f.term(rd, i + 1);
        next.indices().iter().all(|&k| rd.root_eval(k, &xs[i]).is_zero() == f.terms[i].contains(k))
            && f.terms[i].is_subset(next)
    })
}

/// Whether a tuple lies in the closure `∏ Ker(φ_i)` of a stratum.
pub fn in_closure(rd: &RootDatum, f: &LeviFiltration, xs: &[Vec<Q>]) -> bool {
    xs.len() == f.depth()
        && f.terms.iter().zip(xs).all(|(p, x)| p.indices().iter().all(|&k| rd.root_eval(k, x).is_zero()))
}

/// All Levi filtrations of depth `s`.
pub fn enumerate_filtrations(levis: &[RootSubset], s: usize) -> Vec<LeviFiltration> {
    let mut out = Vec::new();
    let mut cur: Vec<RootSubset> = Vec::with_capacity(s);
    fn rec(levis: &[RootSubset], s: usize, cur: &mut Vec<RootSubset>, out: &mut Vec<LeviFiltration>) {
        if cur.len() == s {
            out.push(LeviFiltration { terms: cur.clone() });
            return;
        }
        for &p in levis {
            if cur.last().is_none_or(|&prev| prev.is_subset(p)) {
                cur.push(p);
                rec(levis, s, cur, out);
                cur.pop();
            }
        }
    }
    rec(levis, s, &mut cur, &mut out);
    out.sort();
    out
}

/// One point of the quotient stratification by the Weyl group.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientClass {
    /// Smallest filtration of the orbit.
    pub representative: LeviFiltration,
    /// The Weyl orbit.
    pub orbit: Vec<LeviFiltration>,
    /// Order of the setwise stabilizer of the stratum.
    pub setwise_stabilizer: usize,
    /// Order of the pointwise stabilizer of the stratum.
    pub pointwise_stabilizer: usize,
    /// Order of the quotient acting on the stratum.
    pub out_order: usize,
    /// Number of sampled points with a stabilizer strictly larger than the pointwise stabilizer.
    pub free_action_violations: usize,
}

/// The quotient stratification: Weyl orbits of filtrations, stabilizers, and the induced order.
#[derive(Clone, Debug, Serialize)]
pub struct WeylQuotient {
    /// Orbit classes.
    pub classes: Vec<QuotientClass>,
    /// Order relations `(a, b)` meaning class `a ≤` class `b`, `a ≠ b`.
    pub order: Vec<(usize, usize)>,
}

/// Computes Weyl orbits, stabilizers and the quotient order of a family of filtrations.
pub fn weyl_quotient(rd: &RootDatum, w: &WeylGroup, family: &[LeviFiltration], samples: usize, seed: u64) -> WeylQuotient {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assigned: HashMap<LeviFiltration, usize> = HashMap::new();
    let mut classes = Vec::new();
    let mut sorted = family.to_vec();
    sorted.sort();
    for f in &sorted {
        if assigned.contains_key(f) {
            continue;
        }
        let orbit: BTreeSet<LeviFiltration> = w.elements.iter().map(|e| f.act(e)).collect();
        let idx = classes.len();
        for g in &orbit {
            assigned.insert(g.clone(), idx);
        }
        let setwise: Vec<&WeylElement> = w.elements.iter().filter(|e| &f.act(e) == f).collect();
        let ker0 = kernel_basis(rd, f.term(rd, 0));
        let fixes = |e: &WeylElement| ker0.iter().all(|v| &e.act_cartan(v) == v);
        let pointwise = setwise.iter().filter(|e| fixes(e)).count();
        let stratum = Stratum::new(rd, f.clone());
        let mut violations = 0;
        for _ in 0..samples {
            let Some(pt) = stratum.random_point(rd, &mut rng) else { break };
            let stab = setwise.iter().filter(|e| pt.iter().all(|x| &e.act_cartan(x) == x)).count();
            if stab != pointwise {
                violations += 1;
            }
        }
        classes.push(QuotientClass {
            representative: f.clone(),
            orbit: orbit.into_iter().collect(),
            setwise_stabilizer: setwise.len(),
            pointwise_stabilizer: pointwise,
            out_order: setwise.len() / pointwise.max(1),
            free_action_violations: violations,
        });
    }
    let mut order = Vec::new();
    for a in 0..classes.len() {
        for b in 0..classes.len() {
            if a != b && classes[a].orbit.iter().any(|x| classes[b].orbit.iter().any(|y| x.le(y))) {
                order.push((a, b));
            }
        }
    }
    WeylQuotient { classes, order }
}

/// Dual filtration of a tuple of covectors: `φ∨_i = {α : λ_j(H_α) = 0 for all j ≥ i}`.
///
/// Covectors are given by their values on the Cartan basis; roots label their coroots.
pub fn dual_stratum_of_covector(rd: &RootDatum, lambdas: &[Vec<Q>]) -> LeviFiltration {
    let mut terms = vec![RootSubset::full(rd); lambdas.len()];
    let mut acc = RootSubset::full(rd);
    for i in (0..lambdas.len()).rev() {
        let vanish = RootSubset::from_indices(
            (0..rd.num_roots()).filter(|&k| crate::linalg::dot(&lambdas[i], rd.coroot(k)).is_zero()),
        );
        acc = acc.intersection(vanish);
        terms[i] = acc;
    }
    LeviFiltration { terms }
}

/// The covector `(X | ·)` restricted to the Cartan subalgebra, as values on the Cartan basis.
pub fn musical(rd: &RootDatum, x: &[Q]) -> Vec<Q> {
    let nt = rd.cartan_dim();
    (0..nt).map(|j| (0..nt).map(|i| &x[i] * rd.gram().get(i, j)).fold(Q::zero(), |s, v| s + v)).collect()
}

/// Outcome of checking the stratification axioms on a family of filtrations.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    /// Whether every check passed.
    pub ok: bool,
    /// Number of sample points examined.
    pub points_checked: usize,
    /// Description of the first violated axiom.
    pub violation: Option<String>,
}

/// Checks that a family of depth-`s` filtrations indexes a stratification of `𝔱^s`.
///
/// Sample points are witness points of every Levi filtration of depth `s` plus random points
/// with random vanishing patterns. The checks are: every member is a valid nonempty stratum,
/// every sample lies in exactly one member (partition), and for every pair the closure relation
/// `X_a ∈ ∏ Ker(φ^b_i)` holds exactly when `a ≤ b`, which also equals kernel inclusion.
pub fn verify_stratification_axioms(rd: &RootDatum, s: usize, family: &[LeviFiltration], seed: u64) -> AxiomReport {
    let fail = |msg: String, n: usize| AxiomReport { ok: false, points_checked: n, violation: Some(msg) };
    let levis = enumerate_levi(rd, &WeylGroup::new(rd));
    let distinct: BTreeSet<&LeviFiltration> = family.iter().collect();
    if distinct.len() != family.len() {
        return fail("family contains a repeated stratum".into(), 0);
    }
    let mut witnesses = Vec::new();
    for f in family {
        if f.depth() != s || f.validate(rd).is_err() {
            return fail(format!("invalid filtration {:?}", f.to_lists()), 0);
        }
        match Stratum::new(rd, f.clone()).witness(rd) {
            Some(w) => witnesses.push(w),
            None => return fail(format!("empty stratum {:?}", f.to_lists()), 0),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<Vec<Vec<Q>>> = enumerate_filtrations(&levis, s)
        .into_iter()
        .filter_map(|f| Stratum::new(rd, f).witness(rd))
        .collect();
    for _ in 0..200 {
        let pt: Vec<Vec<Q>> = (0..s)
            .map(|_| {
                let ker = kernel_basis(rd, levis[rng.gen_range(0..levis.len())]);
                let mut x = vec![Q::zero(); rd.cartan_dim()];
                for v in &ker {
                    let c = q(rng.gen_range(-2..=2));
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi += &c * vi;
                    }
                }
                x
            })
            .collect();
        samples.push(pt);
    }
    for (n, pt) in samples.iter().enumerate() {
        let hits = family.iter().filter(|f| in_stratum(rd, f, pt)).count();
        if hits != 1 {
            return fail(format!("partition fails: a point lies in {hits} strata"), n + 1);
        }
    }
    for (a, fa) in family.iter().enumerate() {
        for fb in family {
            let ker_incl = fa.terms.iter().zip(&fb.terms).all(|(&pa, &pb)| {
                let kb = kernel_basis(rd, pb);
                kernel_basis(rd, pa).iter().all(|v| in_span(&kb, v))
            });
            let closure = in_closure(rd, fb, &witnesses[a]);
            let ord = fa.le(fb);
            if ker_incl != ord || closure != ord {
                return fail(
                    format!("closure order mismatch between {:?} and {:?}", fa.to_lists(), fb.to_lists()),
                    samples.len(),
                );
            }
        }
    }
    AxiomReport { ok: true, points_checked: samples.len(), violation: None }
}
