//! Parabolic subsets and filtrations, balanced filtrations, triangular splittings of `g_r`,
//! character spaces and the nonsingularity pairing `B`.

use crate::error::{Error, Result};
use crate::liecore::{RootDatum, TcElement};
use crate::linalg::{dot, Matrix};
use crate::rational::Q;
use crate::strat::{dual_stratum_of_covector, LeviFiltration, RootSubset, WeylGroup};
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// A parabolic subset `ψ`: closed, with `ψ ∪ (-ψ) = Φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParabolicSubset {
    /// The roots of `ψ`.
    pub roots: RootSubset,
    /// Levi factor `φ = ψ ∩ (-ψ)`.
    pub levi: RootSubset,
    /// Nilradical index set `ν = ψ ∖ φ`.
    pub nil: RootSubset,
}

impl ParabolicSubset {
    /// Validates and wraps a root subset.
    pub fn new(rd: &RootDatum, roots: RootSubset) -> Result<Self> {
        if !is_parabolic(rd, roots) {
            return Err(Error::Validation(format!("{:?} is not a parabolic subset", roots.indices())));
        }
        Ok(Self::new_unchecked(rd, roots))
    }

    fn new_unchecked(rd: &RootDatum, roots: RootSubset) -> Self {
        let levi = roots.intersection(roots.negate(rd));
        ParabolicSubset { roots, levi, nil: roots.difference(levi) }
    }

    /// The whole root system as a parabolic subset.
    pub fn full(rd: &RootDatum) -> Self {
        Self::new_unchecked(rd, RootSubset::full(rd))
    }

    /// The standard Borel subset of positive roots.
    pub fn borel(rd: &RootDatum) -> Self {
        Self::new_unchecked(rd, RootSubset::from_indices(0..rd.num_positive()))
    }
}

/// Closedness: `α, β ∈ ψ` and `α + β ∈ Φ` imply `α + β ∈ ψ`.
pub fn is_closed(rd: &RootDatum, s: RootSubset) -> bool {
    let idx = s.indices();
    idx.iter().all(|&a| idx.iter().all(|&b| rd.root_sum(a, b).is_none_or(|c| s.contains(c))))
}

/// Whether a root subset is parabolic.
pub fn is_parabolic(rd: &RootDatum, s: RootSubset) -> bool {
    s.union(s.negate(rd)) == RootSubset::full(rd) && is_closed(rd, s)
}

/// All parabolic subsets, generated as `w(Φ⁺ ∪ ⟨Σ⟩)` for `w ∈ W` and `Σ` a set of simple roots.
pub fn enumerate_parabolic(rd: &RootDatum, w: &WeylGroup) -> Vec<ParabolicSubset> {
    let rank = rd.rank();
    let mut seen = BTreeSet::new();
    for sigma in 0u64..(1 << rank) {
        let mut base = RootSubset::from_indices(0..rd.num_positive());
        for k in 0..rd.num_roots() {
            let inside = rd.simple_coords(k).iter().enumerate().all(|(i, &c)| c == 0 || sigma & (1 << i) != 0);
            if inside {
                base.insert(k);
            }
        }
        for e in &w.elements {
            seen.insert(e.act_subset(base));
        }
    }
    seen.into_iter().map(|s| ParabolicSubset::new_unchecked(rd, s)).collect()
}

/// All parabolic subsets by brute force over the `3^{|Φ⁺|}` sign patterns.
pub fn enumerate_parabolic_bruteforce(rd: &RootDatum) -> Vec<ParabolicSubset> {
    let npos = rd.num_positive();
    let mut out = Vec::new();
    let total = 3u64.pow(npos as u32);
    for code in 0..total {
        let mut s = RootSubset::empty();
        let mut c = code;
        for k in 0..npos {
            match c % 3 {
                0 => s.insert(k),
                1 => s.insert(rd.neg(k)),
                _ => {
                    s.insert(k);
                    s.insert(rd.neg(k));
                }
            }
            c /= 3;
        }
        if is_closed(rd, s) {
            out.push(ParabolicSubset::new_unchecked(rd, s));
        }
    }
    out.sort();
    out
}

/// Number of `W`-orbits on a `W`-stable family of parabolic subsets.
pub fn parabolic_orbit_count(w: &WeylGroup, family: &[ParabolicSubset]) -> usize {
    let mut seen: BTreeSet<RootSubset> = BTreeSet::new();
    let mut count = 0;
    for p in family {
        if seen.contains(&p.roots) {
            continue;
        }
        count += 1;
        for e in &w.elements {
            seen.insert(e.act_subset(p.roots));
        }
    }
    count
}

/// The Levi-factor map as a list of `(levi, fibre)` pairs.
pub fn levi_factor_map(family: &[ParabolicSubset]) -> Vec<(RootSubset, Vec<ParabolicSubset>)> {
    let mut out: Vec<(RootSubset, Vec<ParabolicSubset>)> = Vec::new();
    for p in family {
        match out.iter_mut().find(|(l, _)| *l == p.levi) {
            Some((_, fib)) => fib.push(*p),
            None => out.push((p.levi, vec![*p])),
        }
    }
    out.sort_by_key(|(l, _)| (l.len(), *l));
    out
}

/// A depth-`r` parabolic filtration `ψ_0 ⊆ … ⊆ ψ_{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicFiltration {
    /// The chain of parabolic subsets.
    pub terms: Vec<ParabolicSubset>,
}

impl ParabolicFiltration {
    /// Validates a chain of root subsets.
    pub fn new(rd: &RootDatum, terms: &[RootSubset]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Validation("parabolic filtration must have depth at least 1".into()));
        }
        let terms = terms.iter().map(|&t| ParabolicSubset::new(rd, t)).collect::<Result<Vec<_>>>()?;
        for w in terms.windows(2) {
            if !w[0].roots.is_subset(w[1].roots) {
                return Err(Error::Validation("parabolic filtration is not nondecreasing".into()));
            }
        }
        Ok(ParabolicFiltration { terms })
    }

    /// The constant filtration with every term equal to `p`.
    pub fn constant(p: ParabolicSubset, r: usize) -> Self {
        ParabolicFiltration { terms: vec![p; r] }
    }

    /// Depth `r`.
    pub fn depth(&self) -> usize {
        self.terms.len()
    }

    /// The Levi factor filtration `Lf_r(ψ)`.
    pub fn levi(&self) -> LeviFiltration {
        LeviFiltration { terms: self.terms.iter().map(|p| p.levi).collect() }
    }

    /// `d_α`: number of levels `i` with `α ∈ ν_i`.
    pub fn d_alpha(&self, alpha: usize) -> usize {
        self.terms.iter().filter(|p| p.nil.contains(alpha)).count()
    }

    /// Bracket test `[u^±_{ψ_i}, u^±_{ψ_j}] ⊆ u^±_{ψ_{i+j}}` for `i + j ≤ r - 1`.
    pub fn is_balanced(&self, rd: &RootDatum) -> bool {
        let r = self.depth();
        for i in 0..r {
            for j in 0..r - i {
                let target = self.terms[i + j].nil;
                for a in self.terms[i].nil.indices() {
                    for b in self.terms[j].nil.indices() {
                        if let Some(c) = rd.root_sum(a, b) {
                            if !target.contains(c) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Lists of root indices, one per level.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.terms.iter().map(|p| p.roots.indices()).collect()
    }

    /// Acts by a Weyl group element.
    pub fn act(&self, rd: &RootDatum, w: &crate::strat::WeylElement) -> Self {
        ParabolicFiltration { terms: self.terms.iter().map(|p| ParabolicSubset::new_unchecked(rd, w.act_subset(p.roots))).collect() }
    }
}

/// All depth-`r` parabolic filtrations, i.e. nondecreasing chains of parabolic subsets.
pub fn enumerate_parabolic_filtrations(family: &[ParabolicSubset], r: usize) -> Vec<ParabolicFiltration> {
    fn rec(family: &[ParabolicSubset], r: usize, cur: &mut Vec<ParabolicSubset>, out: &mut Vec<ParabolicFiltration>) {
        if cur.len() == r {
            out.push(ParabolicFiltration { terms: cur.clone() });
            return;
        }
        for p in family {
            if cur.last().is_none_or(|q| q.roots.is_subset(p.roots)) {
                cur.push(*p);
                rec(family, r, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(family, r, &mut Vec::new(), &mut out);
    out
}

/// The splitting `g_r = u⁻ ⊕ l ⊕ u⁺` as flat basis indices `deg * dim + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularSplit {
    /// Basis of `u⁻`, degree-major, transpose of `u_plus` entrywise.
    pub u_minus: Vec<usize>,
    /// Basis of the Levi part `l`.
    pub levi: Vec<usize>,
    /// Basis of `u⁺`, degree-major.
    pub u_plus: Vec<usize>,
}

impl TriangularSplit {
    /// A flat index as a `g_r` element.
    pub fn element(rd: &RootDatum, r: usize, flat: usize) -> TcElement {
        let mut t = TcElement::zero(rd.dim(), r);
        t.coeffs[flat / rd.dim()].coords[flat % rd.dim()] = Q::one();
        t
    }
}

/// Builds the triangular splitting of a parabolic filtration.
pub fn triangular_split(rd: &RootDatum, psi: &ParabolicFiltration) -> TriangularSplit {
    let d = rd.dim();
    let mut split = TriangularSplit { u_minus: Vec::new(), levi: Vec::new(), u_plus: Vec::new() };
    for (i, p) in psi.terms.iter().enumerate() {
        split.levi.extend((0..rd.cartan_dim()).map(|b| i * d + b));
        split.levi.extend(p.levi.indices().into_iter().map(|a| i * d + rd.root_basis(a)));
        for a in p.nil.indices() {
            split.u_plus.push(i * d + rd.root_basis(a));
            split.u_minus.push(i * d + rd.root_basis(rd.neg(a)));
        }
    }
    split
}

/// Basis of `Z_{φ}^∨`: covectors (values on the Cartan basis) vanishing on all coroots of `φ`.
pub fn character_basis(rd: &RootDatum, phi: RootSubset) -> Vec<Vec<Q>> {
    let rows: Vec<Vec<Q>> = phi.indices().into_iter().map(|a| rd.coroot(a).to_vec()).collect();
    if rows.is_empty() {
        return Matrix::identity(rd.cartan_dim()).to_rows();
    }
    Matrix::from_rows(&rows).nullspace()
}

/// Bases of the character space, one per level.
pub fn character_space(rd: &RootDatum, psi: &ParabolicFiltration) -> Vec<Vec<Vec<Q>>> {
    psi.terms.iter().map(|p| character_basis(rd, p.levi)).collect()
}

/// Checks that `λ_i` annihilates every coroot of `φ_i`.
pub fn check_admissible(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>]) -> Result<()> {
    if lambdas.len() != psi.depth() {
        return Err(Error::Mismatch(format!("formal type has {} levels, filtration has {}", lambdas.len(), psi.depth())));
    }
    for (i, (l, p)) in lambdas.iter().zip(&psi.terms).enumerate() {
        if l.len() != rd.cartan_dim() {
            return Err(Error::Mismatch(format!("λ_{i} has {} entries, expected {}", l.len(), rd.cartan_dim())));
        }
        if let Some(a) = p.levi.indices().into_iter().find(|&a| !dot(l, rd.coroot(a)).is_zero()) {
            return Err(Error::Inadmissible(format!("λ_{i} does not vanish on the coroot of {}", rd.basis_name(rd.root_basis(a)))));
        }
    }
    Ok(())
}

/// Character value of a flat basis letter: `λ_i(h)` on `h ε^i`, zero on root vectors.
pub fn character_value(rd: &RootDatum, lambdas: &[Vec<Q>], flat: usize) -> Q {
    let (deg, b) = (flat / rd.dim(), flat % rd.dim());
    if b < rd.cartan_dim() && deg < lambdas.len() {
        lambdas[deg][b].clone()
    } else {
        Q::zero()
    }
}

/// Matrix of `B(Y, Y') = χ(π_𝛗[Y, Y'])` for `Y ∈ u⁺` (rows) and `Y' ∈ u⁻` (columns).
pub fn b_pairing_matrix(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>]) -> Result<Matrix> {
    check_admissible(rd, psi, lambdas)?;
    let split = triangular_split(rd, psi);
    let (d, r) = (rd.dim(), psi.depth());
    let n = split.u_plus.len();
    let mut m = Matrix::zeros(n, n);
    for (i, &y) in split.u_plus.iter().enumerate() {
        for (j, &yp) in split.u_minus.iter().enumerate() {
            let deg = y / d + yp / d;
            if deg >= r {
                continue;
            }
            let mut v = Q::zero();
            for &(k, c) in rd.bracket_basis(y % d, yp % d) {
                if k < rd.cartan_dim() {
                    v += Q::from_integer(c.into()) * &lambdas[deg][k];
                }
            }
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Nonsingularity of a character by the rank of `B`, cross-checked against dual-stratum membership.
pub fn is_nonsingular(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>]) -> Result<bool> {
    let b = b_pairing_matrix(rd, psi, lambdas)?;
    let by_rank = b.rank() == b.rows;
    let by_stratum = dual_stratum_of_covector(rd, lambdas) == psi.levi();
    if by_rank != by_stratum {
        return Err(Error::ClaimViolation(format!(
            "rank test ({by_rank}) and dual-stratum test ({by_stratum}) disagree"
        )));
    }
    Ok(by_rank)
}
