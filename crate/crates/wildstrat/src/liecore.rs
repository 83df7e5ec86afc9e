//! Root data, Chevalley bases and brackets in a reductive Lie algebra and its truncated current algebra.
//!
//! Every supported type is built from an explicit matrix realization: `gl_n` and `sl_n` through the
//! defining representation, and the classical types `B_n`, `C_n`, `D_n` as orthogonal or symplectic
//! matrices preserving an antidiagonal form. The realization is only used at construction time to
//! compute an integral structure-constant table, which is then the single source of truth.

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::rational::{fmt_q, q, to_i64, Q};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Family and size of a supported Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LieType {
    /// General linear algebra `gl_n`.
    Gl(usize),
    /// Special linear algebra `sl_n` (type `A_{n-1}`).
    Sl(usize),
    /// Odd orthogonal algebra `so_{2n+1}` (type `B_n`).
    B(usize),
    /// Symplectic algebra `sp_{2n}` (type `C_n`).
    C(usize),
    /// Even orthogonal algebra `so_{2n}` (type `D_n`).
    D(usize),
}

impl FromStr for LieType {
    type Err = Error;

    /// Accepts `gl3`, `sl2`, `A2` (same as `sl3`), `B2`, `C3`, `D4`, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(['_', '-'], "");
        let bad = || Error::Validation(format!("unknown Lie type {s:?}"));
        let (fam, num) = t.split_at(t.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
        let n: usize = num.parse().map_err(|_| bad())?;
        let ty = match fam {
            "gl" if n >= 1 => LieType::Gl(n),
            "sl" if n >= 2 => LieType::Sl(n),
            "a" if n >= 1 => LieType::Sl(n + 1),
            "b" if n >= 2 => LieType::B(n),
            "c" if n >= 2 => LieType::C(n),
            "d" if n >= 3 => LieType::D(n),
            _ => return Err(bad()),
        };
        Ok(ty)
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieType::Gl(n) => write!(f, "gl{n}"),
            LieType::Sl(n) => write!(f, "sl{n}"),
            LieType::B(n) => write!(f, "B{n}"),
            LieType::C(n) => write!(f, "C{n}"),
            LieType::D(n) => write!(f, "D{n}"),
        }
    }
}

/// Element of the finite-dimensional Lie algebra, as coordinates in the Chevalley basis.
///
/// The basis lists the Cartan basis first, then positive root vectors by height, then the
/// negative root vectors in the same order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GElement {
    /// Coordinates in the Chevalley basis.
    pub coords: Vec<Q>,
}

impl GElement {
    /// The zero element of a `dim`-dimensional algebra.
    pub fn zero(dim: usize) -> Self {
        GElement { coords: vec![Q::zero(); dim] }
    }

    /// Whether all coordinates vanish.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    /// Sum.
    pub fn add(&self, o: &GElement) -> GElement {
        GElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    /// Difference.
    pub fn sub(&self, o: &GElement) -> GElement {
        GElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &Q) -> GElement {
        GElement { coords: self.coords.iter().map(|a| a * s).collect() }
    }
}

/// Element `Σ X_i ε^i` of the truncated current algebra `g ⊗ C[ε]/ε^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TcElement {
    /// Coefficients `X_0, …, X_{r-1}`.
    pub coeffs: Vec<GElement>,
}

impl TcElement {
    /// The zero element of depth `r`.
    pub fn zero(dim: usize, r: usize) -> Self {
        TcElement { coeffs: vec![GElement::zero(dim); r] }
    }

    /// Builds an element from its coefficients.
    pub fn new(coeffs: Vec<GElement>) -> Self {
        TcElement { coeffs }
    }

    /// Depth `r`.
    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether the element vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Sum.
    pub fn add(&self, o: &TcElement) -> TcElement {
        TcElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    /// Difference.
    pub fn sub(&self, o: &TcElement) -> TcElement {
        TcElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &Q) -> TcElement {
        TcElement { coeffs: self.coeffs.iter().map(|a| a.scale(s)).collect() }
    }

    /// Coordinates flattened degree-major: index `i * dim + b`.
    pub fn flat(&self) -> Vec<Q> {
        self.coeffs.iter().flat_map(|c| c.coords.iter().cloned()).collect()
    }

    /// Inverse of [`TcElement::flat`].
    pub fn from_flat(v: &[Q], dim: usize) -> TcElement {
        TcElement { coeffs: v.chunks(dim).map(|c| GElement { coords: c.to_vec() }).collect() }
    }
}

/// A reductive Lie algebra with a Chevalley basis and an integral structure-constant table.
#[derive(Clone, Debug)]
pub struct RootDatum {
    ty: LieType,
    mat_n: usize,
    nt: usize,
    rank: usize,
    dim: usize,
    npos: usize,
    basis_mats: Vec<Matrix>,
    simple_coords: Vec<Vec<i64>>,
    covectors: Vec<Vec<Q>>,
    coroots: Vec<Vec<Q>>,
    cartan_matrix: Vec<Vec<i64>>,
    sc: Vec<Vec<(usize, i64)>>,
    gram: Matrix,
    names: Vec<String>,
    root_lookup: HashMap<Vec<i64>, usize>,
    type_a_pairs: Option<Vec<(usize, usize)>>,
}

fn unit(n: usize, a: usize, b: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m.set(a, b, Q::one());
    m
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

fn first_nonzero(m: &Matrix) -> Option<(usize, usize)> {
    (0..m.rows).flat_map(|i| (0..m.cols).map(move |j| (i, j))).find(|&(i, j)| !m.get(i, j).is_zero())
}

/// Data of a matrix realization before the Chevalley basis is completed.
struct Realization {
    n: usize,
    diag_basis: Vec<Matrix>,
    simple_e: Vec<Matrix>,
    cartan_is_diag_basis: bool,
    type_a: bool,
}

fn realization(ty: LieType) -> Realization {
    match ty {
        LieType::Gl(n) | LieType::Sl(n) => {
            let simple_e = (0..n - 1).map(|i| unit(n, i, i + 1)).collect();
            let diag_basis = (0..n).map(|i| unit(n, i, i)).collect();
            Realization {
                n,
                diag_basis,
                simple_e,
                cartan_is_diag_basis: matches!(ty, LieType::Gl(_)),
                type_a: true,
            }
        }
        LieType::B(l) | LieType::C(l) | LieType::D(l) => {
            let m = match ty {
                LieType::B(_) => 2 * l + 1,
                _ => 2 * l,
            };
            let mirror = |i: usize| m - 1 - i;
            let symplectic = matches!(ty, LieType::C(_));
            // Sign of the mirrored entry: X_{a,b} = -s(a,b) X_{m-1-b, m-1-a}.
            let pair = |a: usize, b: usize| -> Matrix {
                let mut x = unit(m, a, b);
                let (c, d) = (mirror(b), mirror(a));
                let sign = if symplectic && ((a < l) != (b < l)) { Q::one() } else { -Q::one() };
                if (c, d) != (a, b) {
                    *x.get_mut(c, d) += sign;
                }
                x
            };
            let diag_basis = (0..l).map(|i| unit(m, i, i).sub(&unit(m, mirror(i), mirror(i)))).collect();
            let mut simple_e: Vec<Matrix> = (0..l - 1).map(|i| pair(i, i + 1)).collect();
            simple_e.push(match ty {
                LieType::B(_) => pair(l - 1, l),
                LieType::C(_) => unit(m, l - 1, l),
                _ => pair(l - 2, l),
            });
            Realization { n: m, diag_basis, simple_e, cartan_is_diag_basis: false, type_a: false }
        }
    }
}

impl RootDatum {
    /// Builds the root datum of the given type.
    pub fn new(ty: LieType) -> Result<Self> {
        let real = realization(ty);
        let n = real.n;
        let l = real.simple_e.len();
        // Covector of a root vector on the diagonal basis.
        let weight = |e: &Matrix, basis: &[Matrix]| -> Vec<Q> {
            let (a, b) = first_nonzero(e).expect("zero root vector");
            basis.iter().map(|t| t.get(a, a) - t.get(b, b)).collect()
        };
        let simple_f: Vec<Matrix> = real
            .simple_e
            .iter()
            .map(|e| {
                let f = e.transpose();
                let h = commutator(e, &f);
                let (a, b) = first_nonzero(e).expect("zero simple root vector");
                f.scale(&(q(2) / (h.get(a, a) - h.get(b, b))))
            })
            .collect();
        let simple_h: Vec<Matrix> = real.simple_e.iter().zip(&simple_f).map(|(e, f)| commutator(e, f)).collect();
        let cartan_basis: Vec<Matrix> =
            if real.cartan_is_diag_basis { real.diag_basis.clone() } else { simple_h.clone() };
        let nt = cartan_basis.len();
        // Cartan matrix A[i][j] = alpha_j(H_i).
        let mut cartan_matrix = vec![vec![0i64; l]; l];
        for i in 0..l {
            for j in 0..l {
                let (a, b) = first_nonzero(&real.simple_e[j]).unwrap();
                let v = simple_h[i].get(a, a) - simple_h[i].get(b, b);
                cartan_matrix[i][j] = to_i64(&v).ok_or_else(|| Error::Validation("non-integral Cartan matrix".into()))?;
            }
        }
        // Positive roots in simple coordinates, by strings.
        let pair_with = |beta: &[i64], i: usize| -> i64 { (0..l).map(|j| beta[j] * cartan_matrix[i][j]).sum() };
        let mut pos: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect();
        let mut lookup: HashMap<Vec<i64>, usize> = pos.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let mut start = 0;
        while start < pos.len() {
            let end = pos.len();
            for k in start..end {
                for i in 0..l {
                    let beta = pos[k].clone();
                    let mut p = 0;
                    loop {
                        let mut g = beta.clone();
                        g[i] -= p + 1;
                        if lookup.contains_key(&g) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let qv = p - pair_with(&beta, i);
                    if qv > 0 {
                        let mut g = beta.clone();
                        g[i] += 1;
                        if !lookup.contains_key(&g) {
                            lookup.insert(g.clone(), pos.len());
                            pos.push(g);
                        }
                    }
                }
            }
            start = end;
        }
        pos.sort_by_key(|v| (v.iter().sum::<i64>(), v.iter().map(|x| -x).collect::<Vec<_>>()));
        let npos = pos.len();
        if 2 * npos > 64 {
            return Err(Error::Validation(format!("type {ty} has more than 64 roots")));
        }
        let pos_index: HashMap<Vec<i64>, usize> = pos.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let mut e_mats: Vec<Matrix> = Vec::with_capacity(npos);
        let mut f_mats: Vec<Matrix> = Vec::with_capacity(npos);
        for gamma in &pos {
            let height: i64 = gamma.iter().sum();
            if height == 1 {
                let i = gamma.iter().position(|&x| x == 1).unwrap();
                e_mats.push(real.simple_e[i].clone());
                f_mats.push(simple_f[i].clone());
                continue;
            }
            let k = (0..l)
                .find(|&k| {
                    let mut z = gamma.clone();
                    z[k] -= 1;
                    pos_index.contains_key(&z)
                })
                .expect("non-simple positive root without a simple predecessor");
            let mut zeta = gamma.clone();
            zeta[k] -= 1;
            let mut p = 0i64;
            loop {
                let mut z = zeta.clone();
                z[k] -= p + 1;
                if pos_index.contains_key(&z) {
                    p += 1;
                } else {
                    break;
                }
            }
            let zi = pos_index[&zeta];
            let xi = pos_index[&(0..l).map(|j| i64::from(j == k)).collect::<Vec<_>>()];
            let e = commutator(&e_mats[xi], &e_mats[zi]).scale(&Q::from_integer((p + 1).into()).recip());
            let fp = commutator(&f_mats[xi], &f_mats[zi]);
            let h = commutator(&e, &fp);
            let (a, b) = first_nonzero(&e).unwrap();
            let gh = h.get(a, a) - h.get(b, b);
            if gh.is_zero() {
                return Err(Error::Validation("degenerate root vector pairing".into()));
            }
            f_mats.push(fp.scale(&(q(2) / gh)));
            e_mats.push(e);
        }
        let mut basis_mats = cartan_basis.clone();
        basis_mats.extend(e_mats.iter().cloned());
        basis_mats.extend(f_mats.iter().cloned());
        let dim = basis_mats.len();
        let nroots = 2 * npos;
        let mut simple_coords = pos.clone();
        simple_coords.extend(pos.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
        let covectors: Vec<Vec<Q>> = (0..nroots).map(|k| weight(&basis_mats[nt + k], &cartan_basis)).collect();
        // Coordinates of a matrix in the basis: root parts read off one support entry each,
        // Cartan part solved from the diagonal.
        let supports: Vec<(usize, usize)> = (0..nroots).map(|k| first_nonzero(&basis_mats[nt + k]).unwrap()).collect();
        let diag_cols: Vec<Vec<Q>> = cartan_basis.iter().map(|t| (0..n).map(|i| t.get(i, i).clone()).collect()).collect();
        let diag_mat = Matrix::from_cols(&diag_cols, n);
        let coords_of = |m: &Matrix| -> Result<Vec<Q>> {
            let mut c = vec![Q::zero(); dim];
            let d: Vec<Q> = (0..n).map(|i| m.get(i, i).clone()).collect();
            let tc = diag_mat.solve(&d).ok_or_else(|| Error::Validation("bracket leaves the Cartan span".into()))?;
            c[..nt].clone_from_slice(&tc);
            for k in 0..nroots {
                let (a, b) = supports[k];
                c[nt + k] = m.get(a, b) / basis_mats[nt + k].get(a, b);
            }
            let mut rebuilt = Matrix::zeros(n, n);
            for (j, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    rebuilt = rebuilt.add(&basis_mats[j].scale(x));
                }
            }
            if &rebuilt != m {
                return Err(Error::Validation("matrix outside the span of the Chevalley basis".into()));
            }
            Ok(c)
        };
        let coroots: Vec<Vec<Q>> = (0..nroots)
            .map(|k| {
                let (ek, fk) = if k < npos { (k, k + npos) } else { (k, k - npos) };
                let h = commutator(&basis_mats[nt + ek], &basis_mats[nt + fk]);
                coords_of(&h).map(|c| c[..nt].to_vec())
            })
            .collect::<Result<_>>()?;
        let mut sc = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let c = coords_of(&commutator(&basis_mats[i], &basis_mats[j]))?;
                let mut entries = Vec::new();
                for (k, x) in c.iter().enumerate() {
                    if !x.is_zero() {
                        let v = to_i64(x).ok_or_else(|| {
                            Error::Validation(format!("non-integral structure constant {} in [{i},{j}]", fmt_q(x)))
                        })?;
                        entries.push((k, v));
                    }
                }
                sc[i * dim + j] = entries;
            }
        }
        // Invariant form: trace form rescaled so that (E_theta | F_theta) = 1 for the highest root.
        let tr = |a: &Matrix, b: &Matrix| -> Q {
            let p = a.mul(b);
            (0..n).map(|i| p.get(i, i).clone()).fold(Q::zero(), |s, x| s + x)
        };
        let norm = if npos == 0 { Q::one() } else { tr(&basis_mats[nt + npos - 1], &basis_mats[nt + 2 * npos - 1]).recip() };
        let mut gram = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                gram.set(i, j, tr(&basis_mats[i], &basis_mats[j]) * &norm);
            }
        }
        let type_a_pairs = real.type_a.then(|| {
            (0..nroots)
                .map(|k| {
                    let (a, b) = supports[k];
                    (a + 1, b + 1)
                })
                .collect::<Vec<_>>()
        });
        let mut names = Vec::with_capacity(dim);
        for i in 0..nt {
            names.push(match ty {
                LieType::Gl(_) => format!("E{}{}", i + 1, i + 1),
                _ => format!("H{}", i + 1),
            });
        }
        for k in 0..nroots {
            names.push(match &type_a_pairs {
                Some(p) => format!("E{}{}", p[k].0, p[k].1),
                None => {
                    let s = simple_coords[k].iter().map(|x| x.abs().to_string()).collect::<Vec<_>>().join("");
                    if k < npos { format!("E+{s}") } else { format!("E-{s}") }
                }
            });
        }
        let root_lookup = simple_coords.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let rd = RootDatum {
            ty,
            mat_n: n,
            nt,
            rank: l,
            dim,
            npos,
            basis_mats,
            simple_coords,
            covectors,
            coroots,
            cartan_matrix,
            sc,
            gram,
            names,
            root_lookup,
            type_a_pairs,
        };
        rd.check_jacobi()?;
        Ok(rd)
    }

    /// Parses a type name and builds the root datum.
    pub fn from_name(name: &str) -> Result<Self> {
        Self::new(name.parse()?)
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim;
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    let mut acc = vec![0i64; d];
                    for &(x, y, z) in &[(a, b, c), (b, c, a), (c, a, b)] {
                        for &(k, v) in &self.sc[y * d + z] {
                            for &(m, w) in &self.sc[x * d + k] {
                                acc[m] += v * w;
                            }
                        }
                    }
                    if acc.iter().any(|&v| v != 0) {
                        return Err(Error::Validation(format!("Jacobi identity fails on basis triple ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The Lie type.
    pub fn lie_type(&self) -> LieType {
        self.ty
    }

    /// Dimension of the Cartan subalgebra.
    pub fn cartan_dim(&self) -> usize {
        self.nt
    }

    /// Semisimple rank (number of simple roots).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the center.
    pub fn center_dim(&self) -> usize {
        self.nt - self.rank
    }

    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of positive roots.
    pub fn num_positive(&self) -> usize {
        self.npos
    }

    /// Number of roots.
    pub fn num_roots(&self) -> usize {
        2 * self.npos
    }

    /// Whether root `k` is positive.
    pub fn is_positive(&self, k: usize) -> bool {
        k < self.npos
    }

    /// Index of `-alpha_k`.
    pub fn neg(&self, k: usize) -> usize {
        if k < self.npos { k + self.npos } else { k - self.npos }
    }

    /// Basis index of the root vector of root `k`.
    pub fn root_basis(&self, k: usize) -> usize {
        self.nt + k
    }

    /// Root of a basis index, or `None` for Cartan basis elements.
    pub fn basis_root(&self, b: usize) -> Option<usize> {
        b.checked_sub(self.nt)
    }

    /// Coordinates of root `k` in the basis of simple roots.
    pub fn simple_coords(&self, k: usize) -> &[i64] {
        &self.simple_coords[k]
    }

    /// Height of root `k` (negative for negative roots).
    pub fn height(&self, k: usize) -> i64 {
        self.simple_coords[k].iter().sum()
    }

    /// Root with the given simple coordinates, if any.
    pub fn root_from_simple_coords(&self, v: &[i64]) -> Option<usize> {
        self.root_lookup.get(v).copied()
    }

    /// Index of `alpha_k + alpha_l` if it is a root.
    pub fn root_sum(&self, k: usize, l: usize) -> Option<usize> {
        let v: Vec<i64> = self.simple_coords[k].iter().zip(&self.simple_coords[l]).map(|(a, b)| a + b).collect();
        self.root_from_simple_coords(&v)
    }

    /// Values of root `k` on the Cartan basis.
    pub fn covector(&self, k: usize) -> &[Q] {
        &self.covectors[k]
    }

    /// Cartan coordinates of the coroot `H_k = [E_k, E_{-k}]`.
    pub fn coroot(&self, k: usize) -> &[Q] {
        &self.coroots[k]
    }

    /// Value of root `k` on a Cartan vector.
    pub fn root_eval(&self, k: usize, x: &[Q]) -> Q {
        dot(&self.covectors[k], x)
    }

    /// Cartan matrix `A[i][j] = alpha_j(H_i)`.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan_matrix
    }

    /// Index of root `alpha_i` for the `i`-th simple root.
    pub fn simple_root(&self, i: usize) -> usize {
        let v: Vec<i64> = (0..self.rank).map(|j| i64::from(i == j)).collect();
        self.root_lookup[&v]
    }

    /// Index of the root `e_i - e_j` in types `gl_n` and `sl_n` (1-based `i != j`).
    pub fn root_ij(&self, i: usize, j: usize) -> Option<usize> {
        self.type_a_pairs.as_ref()?.iter().position(|&p| p == (i, j))
    }

    /// The pair `(i, j)` of a root `e_i - e_j` in type A.
    pub fn type_a_pair(&self, k: usize) -> Option<(usize, usize)> {
        self.type_a_pairs.as_ref().map(|p| p[k])
    }

    /// Printable name of basis element `b`.
    pub fn basis_name(&self, b: usize) -> &str {
        &self.names[b]
    }

    /// Index of the basis element with the given printable name.
    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Element `Σ c · b` from printable basis names and coefficients.
    pub fn g_from_terms(&self, terms: &[(&str, Q)]) -> Result<GElement> {
        let mut x = self.zero_g();
        for (name, c) in terms {
            let b = self
                .basis_index(name)
                .ok_or_else(|| Error::Validation(format!("unknown basis element {name:?} for {}", self.ty)))?;
            x.coords[b] += c;
        }
        Ok(x)
    }

    /// Structure constants `[b_i, b_j] = Σ c_k b_k`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.sc[i * self.dim + j]
    }

    /// Matrix of the basis element `b` in the defining realization.
    pub fn realization(&self, b: usize) -> &Matrix {
        &self.basis_mats[b]
    }

    /// Size of the defining realization.
    pub fn realization_size(&self) -> usize {
        self.mat_n
    }

    /// Gram matrix of the invariant form on the Chevalley basis.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Realization matrix of an element.
    pub fn to_matrix(&self, x: &GElement) -> Matrix {
        let mut m = Matrix::zeros(self.mat_n, self.mat_n);
        for (b, c) in x.coords.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.basis_mats[b].scale(c));
            }
        }
        m
    }

    /// The zero element.
    pub fn zero_g(&self) -> GElement {
        GElement::zero(self.dim)
    }

    /// Basis element `b`.
    pub fn basis_g(&self, b: usize) -> GElement {
        let mut x = self.zero_g();
        x.coords[b] = Q::one();
        x
    }

    /// Root vector `E_k`.
    pub fn root_vector(&self, k: usize) -> GElement {
        self.basis_g(self.nt + k)
    }

    /// Cartan element with the given coordinates.
    pub fn cartan_g(&self, t: &[Q]) -> GElement {
        assert_eq!(t.len(), self.nt, "wrong number of Cartan coordinates");
        let mut x = self.zero_g();
        x.coords[..self.nt].clone_from_slice(t);
        x
    }

    /// Cartan part of an element.
    pub fn cartan_part<'a>(&self, x: &'a GElement) -> &'a [Q] {
        &x.coords[..self.nt]
    }

    /// Whether an element lies in the Cartan subalgebra.
    pub fn is_cartan(&self, x: &GElement) -> bool {
        x.coords[self.nt..].iter().all(|c| c.is_zero())
    }

    fn check_g(&self, x: &GElement) -> Result<()> {
        if x.coords.len() != self.dim {
            return Err(Error::Mismatch(format!("element of dimension {} used with {}", x.coords.len(), self.ty)));
        }
        Ok(())
    }

    fn check_gr(&self, x: &TcElement) -> Result<()> {
        x.coeffs.iter().try_for_each(|c| self.check_g(c))
    }

    /// Lie bracket in `g`.
    pub fn bracket_g(&self, x: &GElement, y: &GElement) -> Result<GElement> {
        self.check_g(x)?;
        self.check_g(y)?;
        Ok(self.bracket_g_unchecked(x, y))
    }

    fn bracket_g_unchecked(&self, x: &GElement, y: &GElement) -> GElement {
        let mut out = vec![Q::zero(); self.dim];
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for &(k, v) in &self.sc[i * self.dim + j] {
                    out[k] += &ab * Q::from_integer(v.into());
                }
            }
        }
        GElement { coords: out }
    }

    /// Matrix of `ad_x` on `g` (column `j` holds `[x, b_j]`).
    pub fn ad_g(&self, x: &GElement) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for &(k, v) in &self.sc[i * self.dim + j] {
                    *m.get_mut(k, j) += a * Q::from_integer(v.into());
                }
            }
        }
        m
    }

    /// Lie bracket in `g_r`, truncating degrees `>= r`.
    pub fn bracket_gr(&self, x: &TcElement, y: &TcElement) -> Result<TcElement> {
        if x.depth() != y.depth() {
            return Err(Error::Mismatch(format!("depths {} and {} differ", x.depth(), y.depth())));
        }
        self.check_gr(x)?;
        self.check_gr(y)?;
        let r = x.depth();
        let mut out = TcElement::zero(self.dim, r);
        for i in 0..r {
            if x.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..r - i {
                if y.coeffs[j].is_zero() {
                    continue;
                }
                let b = self.bracket_g_unchecked(&x.coeffs[i], &y.coeffs[j]);
                out.coeffs[i + j] = out.coeffs[i + j].add(&b);
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_x` on `g_r` in the flat degree-major basis.
    pub fn ad_gr(&self, x: &TcElement) -> Matrix {
        let r = x.depth();
        let d = self.dim;
        let mut m = Matrix::zeros(r * d, r * d);
        for (i, xi) in x.coeffs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let a = self.ad_g(xi);
            for j in 0..r - i {
                for row in 0..d {
                    for col in 0..d {
                        let v = a.get(row, col);
                        if !v.is_zero() {
                            m.set((i + j) * d + row, j * d + col, v.clone());
                        }
                    }
                }
            }
        }
        m
    }

    /// Whether `ad_x` is diagonalizable, decided by a squarefree minimal polynomial.
    pub fn is_semisimple(&self, x: &GElement) -> bool {
        self.ad_g(x).minimal_polynomial().is_squarefree()
    }

    /// The invariant symmetric form on `g`.
    pub fn invariant_form_g(&self, x: &GElement, y: &GElement) -> Q {
        let gy = self.gram.mul_vec(&y.coords);
        dot(&x.coords, &gy)
    }

    /// Pairing `(X ε^i | Y ε^j)_c = (X|Y) δ_{i+j, c-1}` on `g_r`.
    pub fn pairing_c(&self, x: &TcElement, y: &TcElement, c: usize) -> Result<Q> {
        if x.depth() != y.depth() {
            return Err(Error::Mismatch("pairing of elements of different depths".into()));
        }
        let mut s = Q::zero();
        for i in 0..x.depth() {
            if i + 1 > c {
                break;
            }
            let j = c - 1 - i;
            if j < y.depth() {
                s += self.invariant_form_g(&x.coeffs[i], &y.coeffs[j]);
            }
        }
        Ok(s)
    }

    /// Transposition: fixes the Cartan part and swaps `E_α` with `E_{-α}`.
    pub fn transpose_g(&self, x: &GElement) -> GElement {
        let mut out = self.zero_g();
        out.coords[..self.nt].clone_from_slice(&x.coords[..self.nt]);
        for k in 0..self.num_roots() {
            out.coords[self.nt + self.neg(k)] = x.coords[self.nt + k].clone();
        }
        out
    }

    /// Degreewise transposition on `g_r`.
    pub fn transpose_gr(&self, x: &TcElement) -> TcElement {
        TcElement { coeffs: x.coeffs.iter().map(|c| self.transpose_g(c)).collect() }
    }

    /// The Cartan involution `θ = -ᵗ(·)`.
    pub fn cartan_theta(&self, x: &TcElement) -> TcElement {
        self.transpose_gr(x).scale(&-Q::one())
    }

    /// Transpose of a flat basis letter `i * dim + b`.
    pub fn transpose_letter(&self, flat: usize) -> usize {
        let (deg, b) = (flat / self.dim, flat % self.dim);
        let tb = if b < self.nt { b } else { self.nt + self.neg(b - self.nt) };
        deg * self.dim + tb
    }

    /// JSON description: type, rank, roots, Cartan matrix, structure constants.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Sc {
            i: usize,
            j: usize,
            terms: Vec<(usize, i64)>,
        }
        let fam = match self.ty {
            LieType::Gl(_) => "gl",
            LieType::Sl(_) => "sl",
            LieType::B(_) => "B",
            LieType::C(_) => "C",
            LieType::D(_) => "D",
        };
        let sc: Vec<Sc> = (0..self.dim)
            .flat_map(|i| (0..self.dim).map(move |j| (i, j)))
            .filter(|&(i, j)| i < j && !self.sc[i * self.dim + j].is_empty())
            .map(|(i, j)| Sc { i, j, terms: self.sc[i * self.dim + j].clone() })
            .collect();
        serde_json::json!({
            "type": fam,
            "name": self.ty.to_string(),
            "rank": self.rank,
            "center_dim": self.center_dim(),
            "roots": self.simple_coords,
            "coroots": self.coroots.iter().map(|c| c.iter().map(fmt_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "cartan_matrix": self.cartan_matrix,
            "basis": self.names,
            "structure_constants": sc,
        })
    }
}

/// Antipode of a word of letters: `ι(x_1 ⋯ x_n) = (-1)^n x_n ⋯ x_1`.
pub fn antipode(word: &[usize]) -> (Q, Vec<usize>) {
    let sign = if word.len() % 2 == 0 { Q::one() } else { -Q::one() };
    (sign, word.iter().rev().copied().collect())
}

/// Splits a space into `Ker(f) ⊕ f(V)` for an endomorphism `f` that is semisimple on it.
///
/// `f` acts on ambient coordinates; `space` is a basis of an `f`-stable subspace.
/// Returns bases of the kernel and of the image.
pub fn semisimple_split(f: &Matrix, space: &[Vec<Q>]) -> Result<(Vec<Vec<Q>>, Vec<Vec<Q>>)> {
    if space.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let n = space[0].len();
    let basis = Matrix::from_cols(space, n);
    let images: Vec<Vec<Q>> = space.iter().map(|v| f.mul_vec(v)).collect();
    // Restriction of f in the coordinates of `space`.
    let mut restricted = Vec::with_capacity(space.len());
    for im in &images {
        restricted.push(basis.solve(im).ok_or_else(|| Error::Precondition("subspace is not f-stable".into()))?);
    }
    let rmat = Matrix::from_cols(&restricted, space.len());
    let kernel: Vec<Vec<Q>> = rmat.nullspace().iter().map(|c| basis.mul_vec(c)).collect();
    let image = crate::linalg::independent_subset(&images);
    let mut all = kernel.clone();
    all.extend(image.iter().cloned());
    if all.len() != space.len() || crate::linalg::rank_of(&all) != space.len() {
        return Err(Error::Precondition("endomorphism is not semisimple: kernel and image do not span".into()));
    }
    Ok((kernel, image))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_for_classical_types() {
        for (name, roots, dim) in [
            ("gl1", 0, 1),
            ("sl2", 2, 3),
            ("gl3", 6, 9),
            ("B2", 8, 10),
            ("C3", 18, 21),
            ("B3", 18, 21),
            ("D4", 24, 28),
            ("sl4", 12, 15),
        ] {
            let rd = RootDatum::from_name(name).unwrap();
            assert_eq!(rd.num_roots(), roots, "{name}");
            assert_eq!(rd.dim(), dim, "{name}");
        }
    }

    #[test]
    fn parse_type_names() {
        assert_eq!("A2".parse::<LieType>().unwrap(), LieType::Sl(3));
        assert_eq!("gl_3".parse::<LieType>().unwrap(), LieType::Gl(3));
        assert!("E8".parse::<LieType>().is_err());
        assert!("sl1".parse::<LieType>().is_err());
    }
}
