//! Finite generalised singularity modules: PBW weight spaces, the straightening action,
//! Shapovalov forms and their factorisation, radicals, truncated quotients and the simplicity probe.

use crate::error::{Error, Result};
use crate::liecore::RootDatum;
use crate::linalg::{dot, Matrix};
use crate::parab::{b_pairing_matrix, check_admissible, is_nonsingular, triangular_split, ParabolicFiltration};
use crate::poly::{Coeff, Laurent, Poly};
use crate::rational::Q;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// A PBW monomial: nondecreasing positions into the ordered list of free letters.
pub type Mono = Vec<u16>;

/// A module vector: a finite combination of PBW monomials applied to the generator.
pub type MVec<C> = BTreeMap<Mono, C>;

fn mvec_add<C: Coeff>(acc: &mut MVec<C>, m: &Mono, c: &C) {
    if c.cis_zero() {
        return;
    }
    match acc.get_mut(m) {
        Some(v) => {
            *v = v.cadd(c);
            if v.cis_zero() {
                acc.remove(m);
            }
        }
        None => {
            acc.insert(m.clone(), c.clone());
        }
    }
}

/// Adds `s * v` into `acc`.
pub fn mvec_axpy<C: Coeff>(acc: &mut MVec<C>, s: &C, v: &MVec<C>) {
    for (m, c) in v {
        mvec_add(acc, m, &c.cmul(s));
    }
}

/// A module induced from a character: `U g_r ⊗_{U p} C_χ`, presented by a PBW basis in an
/// ordered list of free letters. Every other basis letter of `g_r` acts on the generator by a scalar.
pub struct InducedModule<C: Coeff> {
    dim: usize,
    r: usize,
    free: Vec<usize>,
    position: Vec<Option<u16>>,
    chi: Vec<C>,
    brackets: Vec<Vec<(usize, i64)>>,
    cache: Mutex<HashMap<(usize, Mono), MVec<C>>>,
}

impl<C: Coeff> InducedModule<C> {
    /// Builds the module from the ordered free letters and the scalar action of all other letters.
    pub fn new(rd: &RootDatum, r: usize, free: Vec<usize>, chi: Vec<C>) -> Self {
        let (dim, n) = (rd.dim(), rd.dim() * r);
        let mut position = vec![None; n];
        for (p, &f) in free.iter().enumerate() {
            position[f] = Some(p as u16);
        }
        let mut brackets = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                let deg = a / dim + b / dim;
                if deg < r {
                    brackets[a * n + b] = rd.bracket_basis(a % dim, b % dim).iter().map(|&(k, v)| (deg * dim + k, v)).collect();
                }
            }
        }
        InducedModule { dim, r, free, position, chi, brackets, cache: Mutex::new(HashMap::new()) }
    }

    /// The ordered free letters as flat indices.
    pub fn free_letters(&self) -> &[usize] {
        &self.free
    }

    /// Number of flat basis letters of `g_r`.
    pub fn num_letters(&self) -> usize {
        self.dim * self.r
    }

    /// Position of a flat letter among the free letters.
    pub fn position(&self, flat: usize) -> Option<u16> {
        self.position[flat]
    }

    /// The bracket of two flat letters in `g_r`.
    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, i64)] {
        &self.brackets[a * self.dim * self.r + b]
    }

    /// Action of the flat letter `z` on the basis vector `mono`, by straightening.
    pub fn act_mono(&self, z: usize, mono: &[u16]) -> MVec<C> {
        let key = (z, mono.to_vec());
        if let Some(v) = self.cache.lock().expect("cache poisoned").get(&key) {
            return v.clone();
        }
        let out = self.act_uncached(z, mono);
        self.cache.lock().expect("cache poisoned").insert(key, out.clone());
        out
    }

    fn act_uncached(&self, z: usize, mono: &[u16]) -> MVec<C> {
        let mut out = MVec::new();
        let pz = self.position[z];
        if let Some(p) = pz {
            if mono.first().is_none_or(|&m| p <= m) {
                let mut m = Vec::with_capacity(mono.len() + 1);
                m.push(p);
                m.extend_from_slice(mono);
                out.insert(m, C::cone());
                return out;
            }
        } else if mono.is_empty() {
            mvec_add(&mut out, &Vec::new(), &self.chi[z]);
            return out;
        }
        // z X R = X (z R) + [z, X] R.
        let (first, rest) = (mono[0], &mono[1..]);
        let x = self.free[first as usize];
        let zr = self.act_mono(z, rest);
        for (m, c) in &zr {
            let v = self.act_mono(x, m);
            mvec_axpy(&mut out, c, &v);
        }
        for &(k, coef) in self.bracket(z, x) {
            let v = self.act_mono(k, rest);
            mvec_axpy(&mut out, &C::from_q(&Q::from_integer(coef.into())), &v);
        }
        out
    }

    /// Action of a flat letter on a vector.
    pub fn act(&self, z: usize, v: &MVec<C>) -> MVec<C> {
        let mut out = MVec::new();
        for (m, c) in v {
            mvec_axpy(&mut out, c, &self.act_mono(z, m));
        }
        out
    }

    /// Action of a rational combination of flat letters on a vector.
    pub fn act_combo(&self, combo: &[(usize, Q)], v: &MVec<C>) -> MVec<C> {
        let mut out = MVec::new();
        for (z, s) in combo {
            mvec_axpy(&mut out, &C::from_q(s), &self.act(*z, v));
        }
        out
    }

    /// Action of a word of letters, the rightmost letter acting first.
    pub fn act_word(&self, word: &[usize], v: &MVec<C>) -> MVec<C> {
        word.iter().rev().fold(v.clone(), |acc, &z| self.act(z, &acc))
    }

    /// The vector `mono · w`.
    pub fn basis_vector(mono: &[u16]) -> MVec<C> {
        let mut v = MVec::new();
        v.insert(mono.to_vec(), C::cone());
        v
    }

    /// Coefficient of the generator `w`.
    pub fn generator_coeff(v: &MVec<C>) -> C {
        v.get(&Vec::new()).cloned().unwrap_or_else(C::czero)
    }
}

/// A weight space `M[μ]` with its ordered PBW basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSpace {
    /// Weight `μ` in simple-root coordinates (the module weight is `λ_0 - μ`).
    pub weight: Vec<i64>,
    /// Relative height `|μ|_{ν_0}`.
    pub height: usize,
    /// Basis monomials, nonincreasing in length, lexicographic on ties.
    pub basis: Vec<Mono>,
}

/// A finite generalised singularity module `M^ψ_λ` (or its dilation by `c`).
pub struct SingularityModule<C: Coeff> {
    rd: RootDatum,
    psi: ParabolicFiltration,
    lambdas: Vec<Vec<Q>>,
    /// Free letters `X_{α,i} = E_{-α} ε^i` as `(root, degree)`, in PBW order.
    pub letters: Vec<(usize, usize)>,
    /// Roots of `ν_0` in PBW order.
    pub nu0: Vec<usize>,
    engine: InducedModule<C>,
    heights: Mutex<HashMap<Vec<i64>, Option<usize>>>,
}

impl SingularityModule<Q> {
    /// The module with character `λ`.
    pub fn new(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>]) -> Result<Self> {
        Self::build(rd, psi, lambdas, |q| q.clone())
    }
}

impl SingularityModule<Poly> {
    /// The module with dilated character `c λ`, coefficients polynomial in `c`.
    pub fn dilated(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>]) -> Result<Self> {
        Self::build(rd, psi, lambdas, |q| Poly::monomial(1, q.clone()))
    }
}

impl<C: Coeff> SingularityModule<C> {
    fn build(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>], lift: impl Fn(&Q) -> C) -> Result<Self> {
        check_admissible(rd, psi, lambdas)?;
        let p0 = &psi.terms[0];
        // Pointed-cone precondition: the sum of the nilradical coroots is positive on ν_0.
        let mut x = vec![Q::zero(); rd.cartan_dim()];
        for a in p0.nil.indices() {
            for (t, c) in x.iter_mut().zip(rd.coroot(a)) {
                *t += c;
            }
        }
        if p0.nil.indices().iter().any(|&a| !rd.root_eval(a, &x).is_positive()) {
            return Err(Error::Precondition("ν_0 does not generate a pointed cone".into()));
        }
        let mut module = SingularityModule {
            rd: rd.clone(),
            psi: psi.clone(),
            lambdas: lambdas.to_vec(),
            letters: Vec::new(),
            nu0: Vec::new(),
            engine: InducedModule::new(rd, 1, Vec::new(), Vec::new()),
            heights: Mutex::new(HashMap::new()),
        };
        let mut nu0 = p0.nil.indices();
        nu0.sort_by_key(|&a| (module.relative_height(rd.simple_coords(a)).unwrap_or(0), a));
        let letters: Vec<(usize, usize)> = nu0.iter().flat_map(|&a| (0..psi.d_alpha(a)).map(move |i| (a, i))).collect();
        let d = rd.dim();
        let r = psi.depth();
        let free: Vec<usize> = letters.iter().map(|&(a, i)| i * d + rd.root_basis(rd.neg(a))).collect();
        let chi: Vec<C> = (0..d * r)
            .map(|f| {
                let (deg, b) = (f / d, f % d);
                if b < rd.cartan_dim() {
                    lift(&lambdas[deg][b])
                } else {
                    C::czero()
                }
            })
            .collect();
        module.engine = InducedModule::new(rd, r, free, chi);
        module.letters = letters;
        module.nu0 = nu0;
        Ok(module)
    }

    /// The root datum.
    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    /// The parabolic filtration.
    pub fn filtration(&self) -> &ParabolicFiltration {
        &self.psi
    }

    /// The formal type.
    pub fn lambdas(&self) -> &[Vec<Q>] {
        &self.lambdas
    }

    /// The straightening engine.
    pub fn engine(&self) -> &InducedModule<C> {
        &self.engine
    }

    /// Flat index of a free letter.
    pub fn letter_flat(&self, p: u16) -> usize {
        self.engine.free_letters()[p as usize]
    }

    /// Weight of a monomial in simple-root coordinates.
    pub fn weight_of(&self, mono: &[u16]) -> Vec<i64> {
        let mut w = vec![0; self.rd.rank()];
        for &p in mono {
            for (x, y) in w.iter_mut().zip(self.rd.simple_coords(self.letters[p as usize].0)) {
                *x += y;
            }
        }
        w
    }

    /// Relative height `|μ|_{ν_0}`: the largest number of `ν_0` roots summing to `μ`.
    pub fn relative_height(&self, mu: &[i64]) -> Option<usize> {
        if mu.iter().all(|&x| x == 0) {
            return Some(0);
        }
        if let Some(h) = self.heights.lock().expect("cache poisoned").get(mu) {
            return *h;
        }
        let nil = self.psi.terms[0].nil.indices();
        let mut best: Option<usize> = None;
        for a in nil {
            let rest: Vec<i64> = mu.iter().zip(self.rd.simple_coords(a)).map(|(x, y)| x - y).collect();
            // Each step lowers the positive functional by a fixed amount, so the search terminates.
            if self.cone_value(&rest) < Q::zero() {
                continue;
            }
            if let Some(h) = self.relative_height(&rest) {
                best = Some(best.map_or(h + 1, |b: usize| b.max(h + 1)));
            }
        }
        self.heights.lock().expect("cache poisoned").insert(mu.to_vec(), best);
        best
    }

    fn cone_value(&self, mu: &[i64]) -> Q {
        let mut x = vec![Q::zero(); self.rd.cartan_dim()];
        for a in self.psi.terms[0].nil.indices() {
            for (t, c) in x.iter_mut().zip(self.rd.coroot(a)) {
                *t += c;
            }
        }
        (0..self.rd.rank())
            .map(|i| Q::from_integer(mu[i].into()) * self.rd.root_eval(self.rd.simple_root(i), &x))
            .fold(Q::zero(), |s, v| s + v)
    }

    /// All weight spaces with relative height at most `k`, ordered by height then weight.
    pub fn weight_spaces(&self, k: usize) -> Vec<WeightSpace> {
        let n = self.letters.len() as u16;
        let mut by_weight: BTreeMap<Vec<i64>, Vec<Mono>> = BTreeMap::new();
        let mut stack: Vec<Mono> = vec![Vec::new()];
        while let Some(m) = stack.pop() {
            by_weight.entry(self.weight_of(&m)).or_default().push(m.clone());
            if m.len() < k {
                let start = m.last().copied().unwrap_or(0);
                for p in start..n {
                    let mut next = m.clone();
                    next.push(p);
                    stack.push(next);
                }
            }
        }
        let mut out: Vec<WeightSpace> = by_weight
            .into_iter()
            .filter_map(|(weight, mut basis)| {
                let height = self.relative_height(&weight)?;
                if height > k {
                    return None;
                }
                basis.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
                Some(WeightSpace { weight, height, basis })
            })
            .collect();
        out.sort_by(|a, b| (a.height, &a.weight).cmp(&(b.height, &b.weight)));
        out
    }

    /// Action of a flat letter of `g_r` on a vector.
    pub fn act(&self, z: usize, v: &MVec<C>) -> MVec<C> {
        self.engine.act(z, v)
    }

    /// Symmetric Shapovalov form on basis vectors: the `w`-coefficient of `ᵗX · X' w`.
    pub fn shapovalov_entry(&self, x: &[u16], xp: &[u16]) -> C {
        let mut v = InducedModule::<C>::basis_vector(xp);
        for &p in x {
            v = self.engine.act(self.rd.transpose_letter(self.letter_flat(p)), &v);
        }
        InducedModule::generator_coeff(&v)
    }

    /// Symmetric Shapovalov form on arbitrary vectors.
    pub fn shapovalov_vectors(&self, u: &MVec<C>, v: &MVec<C>) -> C {
        let mut s = C::czero();
        for (m, a) in u {
            for (n, b) in v {
                s = s.cadd(&a.cmul(b).cmul(&self.shapovalov_entry(m, n)));
            }
        }
        s
    }

    /// Matrix of the symmetric form on a weight space.
    pub fn shapovalov_block(&self, ws: &WeightSpace) -> Vec<Vec<C>> {
        ws.basis.iter().map(|x| ws.basis.iter().map(|y| self.shapovalov_entry(x, y)).collect()).collect()
    }

    /// Nonsymmetric pairing `S^ι(Y, X)`: the `w`-coefficient of `ι(Y) · X w`, where `Y` is a word
    /// of rational combinations of letters.
    pub fn nonsymmetric_entry(&self, y: &[Vec<(usize, Q)>], x: &[u16]) -> C {
        let mut v = InducedModule::<C>::basis_vector(x);
        for combo in y {
            v = self.engine.act_combo(combo, &v);
        }
        let c = InducedModule::generator_coeff(&v);
        if y.len() % 2 == 1 {
            c.cscale(&-Q::one())
        } else {
            c
        }
    }

    /// Nonsymmetric pairing between a `u⁺` word of basis letters and a PBW monomial.
    pub fn nonsymmetric_letters(&self, y: &[usize], x: &[u16]) -> C {
        let word: Vec<Vec<(usize, Q)>> = y.iter().map(|&f| vec![(f, Q::one())]).collect();
        self.nonsymmetric_entry(&word, x)
    }

    /// Dual basis of `u⁺` with `S_c(Ỹ_a, X_b) = c δ_{ab}`, one combination per free letter.
    pub fn dual_basis(&self) -> Result<Vec<Vec<(usize, Q)>>> {
        let split = triangular_split(&self.rd, &self.psi);
        let b = b_pairing_matrix(&self.rd, &self.psi, &self.lambdas)?;
        // Reindex the u⁻ columns to PBW letter order.
        let cols: Vec<usize> = self
            .engine
            .free_letters()
            .iter()
            .map(|f| split.u_minus.iter().position(|u| u == f).expect("free letter in u⁻"))
            .collect();
        let n = cols.len();
        let mut bm = Matrix::zeros(n, n);
        for i in 0..n {
            for (j, &cj) in cols.iter().enumerate() {
                bm.set(i, j, b.get(i, cj).clone());
            }
        }
        let inv = bm.inverse().ok_or_else(|| Error::Precondition("character is singular".into()))?;
        // Rows g with g·B = -I.
        Ok((0..n)
            .map(|a| {
                (0..n)
                    .filter(|&p| !inv.get(a, p).is_zero())
                    .map(|p| (split.u_plus[p], -inv.get(a, p).clone()))
                    .collect()
            })
            .collect())
    }
}

/// A symbolic Shapovalov block with its `D·C·Q̃` factorisation.
#[derive(Clone, Debug)]
pub struct ShapovalovBlock {
    /// The weight space.
    pub space: WeightSpace,
    /// `A[μ]_{ij} = S_c(Y_i, X_j)` with `Y_i` the dual-basis monomial matching `X_i`.
    pub matrix: Vec<Vec<Poly>>,
    /// Monomial lengths `l_i`.
    pub lengths: Vec<usize>,
}

/// The factors `A = D C Q̃`.
#[derive(Clone, Debug)]
pub struct Factorization {
    /// Diagonal constants `d_i`.
    pub d: Vec<Q>,
    /// Exponents `l_i`.
    pub l: Vec<usize>,
    /// Unipotent lower-triangular constant matrix `C`.
    pub c: Matrix,
    /// `Q̃` with `Q̃ - I` in negative powers of `c`.
    pub q: Vec<Vec<Laurent>>,
}

impl SingularityModule<Poly> {
    /// Nonsymmetric block `A[μ]` in the dual bases.
    pub fn dual_block(&self, ws: &WeightSpace, dual: &[Vec<(usize, Q)>]) -> ShapovalovBlock {
        let matrix = ws
            .basis
            .iter()
            .map(|yi| {
                let word: Vec<Vec<(usize, Q)>> = yi.iter().map(|&p| dual[p as usize].clone()).collect();
                ws.basis.iter().map(|xj| self.nonsymmetric_entry(&word, xj)).collect()
            })
            .collect();
        ShapovalovBlock { space: ws.clone(), matrix, lengths: ws.basis.iter().map(|m| m.len()).collect() }
    }
}

/// Product of factorials of the letter multiplicities of a monomial.
pub fn multiplicity_factorial(mono: &[u16]) -> Q {
    let mut out = Q::one();
    let mut run = 0i64;
    for (i, p) in mono.iter().enumerate() {
        run = if i > 0 && mono[i - 1] == *p { run + 1 } else { 1 };
        out *= Q::from_integer(run.into());
    }
    out
}

/// Checks the degree bounds on a dilated block and factorises it as `D·C·Q̃`.
pub fn factorize_block(block: &ShapovalovBlock) -> Result<Factorization> {
    let n = block.matrix.len();
    let l = &block.lengths;
    for i in 0..n {
        for j in 0..n {
            let deg = block.matrix[i][j].degree();
            let bound = if l[i] == l[j] && i != j { l[i].checked_sub(1) } else { Some(l[i].min(l[j])) };
            if deg.is_some_and(|d| bound.is_none_or(|b| d > b)) {
                return Err(Error::ClaimViolation(format!("entry ({i},{j}) has degree {deg:?} above the bound {bound:?}")));
            }
        }
        let d = block.matrix[i][i].coeff(l[i]);
        if d != multiplicity_factorial(&block.space.basis[i]) {
            return Err(Error::ClaimViolation(format!("diagonal leading coefficient {d} at {i} is not the factorial product")));
        }
    }
    let d: Vec<Q> = (0..n).map(|i| block.matrix[i][i].coeff(l[i])).collect();
    let mut c = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let dij = block.matrix[i][j].coeff(l[i]);
            if i < j && !dij.is_zero() {
                return Err(Error::ClaimViolation(format!("upper entry ({i},{j}) has top-degree coefficient")));
            }
            if i > j {
                c.set(i, j, dij / &d[i]);
            }
        }
    }
    let cinv = c.inverse().expect("unipotent");
    // D^{-1} A as Laurent entries.
    let dinv_a: Vec<Vec<Laurent>> = (0..n)
        .map(|i| {
            let s = Laurent::monomial(-(l[i] as i64), d[i].recip());
            block.matrix[i].iter().map(|p| Laurent::from_poly(p).mul(&s)).collect()
        })
        .collect();
    let q: Vec<Vec<Laurent>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Laurent::zero(), |acc, k| acc.add(&dinv_a[k][j].scale(cinv.get(i, k)))))
                .collect()
        })
        .collect();
    for (i, row) in q.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let off = if i == j { e.sub(&Laurent::monomial(0, Q::one())) } else { e.clone() };
            if off.max_exp().is_some_and(|m| m >= 0) {
                return Err(Error::ClaimViolation(format!("Q̃ entry ({i},{j}) has nonnegative powers of c")));
            }
        }
    }
    let f = Factorization { d, l: l.clone(), c, q };
    if f.product() != block.matrix.iter().map(|r| r.iter().map(Laurent::from_poly).collect::<Vec<_>>()).collect::<Vec<_>>() {
        return Err(Error::ClaimViolation("D·C·Q̃ does not reproduce the block".into()));
    }
    Ok(f)
}

impl Factorization {
    /// The product `D·C·Q̃`.
    pub fn product(&self) -> Vec<Vec<Laurent>> {
        let n = self.d.len();
        (0..n)
            .map(|i| {
                let s = Laurent::monomial(self.l[i] as i64, self.d[i].clone());
                (0..n)
                    .map(|j| (0..n).fold(Laurent::zero(), |acc, k| acc.add(&self.q[k][j].scale(self.c.get(i, k)))).mul(&s))
                    .collect()
            })
            .collect()
    }
}

/// Converts a rational block to a matrix.
pub fn block_matrix(block: &[Vec<Q>]) -> Matrix {
    Matrix::from_rows(block)
}

/// Per-weight radical dimensions of the symmetric form.
#[derive(Clone, Debug, Serialize)]
pub struct RadicalProfile {
    /// `(weight, height, dim M[μ], dim Rad[μ])` per weight space.
    pub blocks: Vec<(Vec<i64>, usize, usize, usize)>,
}

impl RadicalProfile {
    /// Whether every block is nondegenerate.
    pub fn is_simple(&self) -> bool {
        self.blocks.iter().all(|b| b.3 == 0)
    }
}

impl SingularityModule<Q> {
    /// Radical of the symmetric form on a weight space, as vectors.
    pub fn radical(&self, ws: &WeightSpace) -> Vec<MVec<Q>> {
        let ns = block_matrix(&self.shapovalov_block(ws)).nullspace();
        ns.into_iter()
            .map(|c| {
                let mut v = MVec::new();
                for (m, x) in ws.basis.iter().zip(c) {
                    mvec_add(&mut v, m, &x);
                }
                v
            })
            .collect()
    }

    /// Radical dimensions for all weights of height at most `k`.
    pub fn maximal_submodule_profile(&self, k: usize) -> RadicalProfile {
        let blocks = self
            .weight_spaces(k)
            .into_iter()
            .map(|ws| {
                let rank = block_matrix(&self.shapovalov_block(&ws)).rank();
                (ws.weight.clone(), ws.height, ws.basis.len(), ws.basis.len() - rank)
            })
            .collect();
        RadicalProfile { blocks }
    }

    /// Whether all blocks of height at most `k` are nondegenerate.
    pub fn is_simple_up_to(&self, k: usize) -> bool {
        self.maximal_submodule_profile(k).is_simple()
    }

    /// Whether `w` stays outside the submodule generated by `ε^k g_r`, searched within weights of
    /// height at most `bound`.
    pub fn truncated_quotient_saturation(&self, k: usize, bound: usize) -> bool {
        let d = self.rd.dim();
        let r = self.psi.depth();
        let mut spans: BTreeMap<Vec<i64>, Vec<MVec<Q>>> = BTreeMap::new();
        let mut queue: Vec<MVec<Q>> = Vec::new();
        let w = InducedModule::<Q>::basis_vector(&[]);
        for f in k * d..r * d {
            queue.push(self.engine.act(f, &w));
        }
        while let Some(v) = queue.pop() {
            let Some((m, _)) = v.iter().next() else { continue };
            let weight = self.weight_of(m);
            if self.relative_height(&weight).is_none_or(|h| h > bound) {
                continue;
            }
            if weight.iter().all(|&x| x == 0) {
                return false;
            }
            let span = spans.entry(weight).or_default();
            let mut keys: Vec<Mono> = span.iter().flat_map(|u| u.keys().cloned()).chain(v.keys().cloned()).collect();
            keys.sort();
            keys.dedup();
            let to_row = |u: &MVec<Q>| keys.iter().map(|k| u.get(k).cloned().unwrap_or_else(Q::zero)).collect::<Vec<_>>();
            let mut rows: Vec<Vec<Q>> = span.iter().map(to_row).collect();
            let before = crate::linalg::rank_of(&rows);
            rows.push(to_row(&v));
            if crate::linalg::rank_of(&rows) == before {
                continue;
            }
            span.push(v.clone());
            for f in 0..r * d {
                let u = self.engine.act(f, &v);
                if !u.is_empty() {
                    queue.push(u);
                }
            }
        }
        true
    }
}

/// Literal truncated-quotient criterion: `λ_k, …, λ_{r-1}` vanish on every coroot.
pub fn truncated_quotient_proper_literal(rd: &RootDatum, lambdas: &[Vec<Q>], k: usize) -> Result<bool> {
    check_truncation_index(lambdas, k)?;
    Ok(lambdas[k..].iter().all(|l| (0..rd.num_roots()).all(|a| dot(l, rd.coroot(a)).is_zero())))
}

/// Truncated-quotient criterion: `λ_k, …, λ_{r-1}` vanish on the whole Cartan subalgebra.
pub fn truncated_quotient_proper(lambdas: &[Vec<Q>], k: usize) -> Result<bool> {
    check_truncation_index(lambdas, k)?;
    Ok(lambdas[k..].iter().all(|l| l.iter().all(|x| x.is_zero())))
}

fn check_truncation_index(lambdas: &[Vec<Q>], k: usize) -> Result<()> {
    if k == 0 || k >= lambdas.len() {
        return Err(Error::Validation(format!("truncation index {k} outside 1..{}", lambdas.len())));
    }
    Ok(())
}

/// Outcome of probing the simplicity conjecture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureProbe {
    /// Nonsingularity of the character.
    pub cond1_nonsingular: bool,
    /// `⟨λ_0|α∨⟩ ∉ Z_{>0}` for the roots of `ν_0` lying in `φ_1`.
    pub cond2_alcove: bool,
    /// All blocks up to the bound are nondegenerate.
    pub observed_simple_up_to_k: bool,
    /// `consistent`, `inconclusive` (predicted non-simple, no radical found yet) or `counterexample`.
    pub verdict: String,
}

/// Evaluates both conditions of the simplicity conjecture and compares with the computed blocks.
pub fn conjecture_probe(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>], k: usize) -> Result<ConjectureProbe> {
    let cond1 = is_nonsingular(rd, psi, lambdas)?;
    let levi = psi.levi();
    let phi1 = levi.term(rd, 1);
    let cond2 = psi.terms[0].nil.indices().into_iter().filter(|&a| phi1.contains(a)).all(|a| {
        let v = dot(&lambdas[0], rd.coroot(a));
        !(v.is_integer() && v.is_positive())
    });
    let observed = SingularityModule::new(rd, psi, lambdas)?.is_simple_up_to(k);
    let predicted = cond1 && cond2;
    let verdict = match (predicted, observed) {
        (true, true) | (false, false) => "consistent",
        (false, true) => "inconclusive",
        (true, false) => "counterexample",
    };
    Ok(ConjectureProbe { cond1_nonsingular: cond1, cond2_alcove: cond2, observed_simple_up_to_k: observed, verdict: verdict.into() })
}
