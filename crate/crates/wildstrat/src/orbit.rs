//! Birkhoff normal forms, strictness index, irregular types, centralisers and orbit classification.

use crate::error::{Error, Result};
use crate::liecore::{semisimple_split, GElement, RootDatum, TcElement};
use crate::linalg::{in_span, Matrix};
use crate::parab::{b_pairing_matrix, ParabolicFiltration};
use crate::rational::{q, Q};
use crate::strat::{levi_of_point, stratum_of_tuple, LeviFiltration, RootSubset, WeylGroup};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Result of the Birkhoff diagonalising algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct BirkhoffNormalForm {
    /// Strictness index `s ∈ {0, …, r}`.
    pub strictness: usize,
    /// Normal form; its first `s` coefficients are semisimple and pairwise commuting.
    pub normal: TcElement,
    /// Element `Z ∈ ε g_r` with `exp(ad_Z)(input) = normal`.
    pub gauge_log: TcElement,
}

impl BirkhoffNormalForm {
    /// The irregular type `τ_s`: the first `s` coefficients of the normal form.
    pub fn irregular_type(&self) -> Vec<GElement> {
        self.normal.coeffs[..self.strictness].to_vec()
    }
}

/// Matrix of `exp(ad_Z)` on `g_r` for `Z` without degree-zero part.
pub fn exp_ad(rd: &RootDatum, z: &TcElement) -> Result<Matrix> {
    if z.coeffs.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::Precondition("Birkhoff gauge must have vanishing degree-zero part".into()));
    }
    let ad = rd.ad_gr(z);
    let n = ad.rows;
    let mut out = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..z.depth() {
        term = term.mul(&ad).scale(&Q::from_integer((k as i64).into()).recip());
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// Applies the gauge `exp(ad_Z)` to `x`.
pub fn apply_gauge(rd: &RootDatum, z: &TcElement, x: &TcElement) -> Result<TcElement> {
    if z.depth() != x.depth() {
        return Err(Error::Mismatch("gauge and element have different depths".into()));
    }
    Ok(TcElement::from_flat(&exp_ad(rd, z)?.mul_vec(&x.flat()), rd.dim()))
}

/// Logarithm of a unipotent matrix by its terminating series.
pub fn unipotent_log(m: &Matrix) -> Matrix {
    let n = m.rows;
    let nil = m.sub(&Matrix::identity(n));
    let mut out = Matrix::zeros(n, n);
    let mut pow = Matrix::identity(n);
    for k in 1..=n {
        pow = pow.mul(&nil);
        if pow.is_zero() {
            break;
        }
        let c = Q::from_integer((k as i64).into()).recip();
        out = if k % 2 == 1 { out.add(&pow.scale(&c)) } else { out.sub(&pow.scale(&c)) };
    }
    out
}

/// Recovers `Z ∈ ε g_r` with `ad_Z = L` for an inner derivation `L` raising degrees.
fn solve_inner_derivation(rd: &RootDatum, r: usize, l: &Matrix) -> Result<TcElement> {
    let d = rd.dim();
    let mut z = TcElement::zero(d, r);
    for deg in 1..r {
        // Unknown Z_deg with [Z_deg, b_j] = (L b_j) restricted to degree deg.
        let mut a = Matrix::zeros(d * d, d);
        let mut rhs = vec![Q::zero(); d * d];
        for j in 0..d {
            for m in 0..d {
                for &(k, v) in rd.bracket_basis(m, j) {
                    *a.get_mut(j * d + k, m) += q(v);
                }
            }
            for k in 0..d {
                rhs[j * d + k] = l.get(deg * d + k, j).clone();
            }
        }
        let sol = a.solve(&rhs).ok_or_else(|| Error::ClaimViolation("gauge is not an inner automorphism".into()))?;
        z.coeffs[deg] = GElement { coords: sol };
    }
    if &rd.ad_gr(&z) != l {
        return Err(Error::ClaimViolation("recovered gauge logarithm does not reproduce the derivation".into()));
    }
    Ok(z)
}

/// Runs the diagonalising algorithm, recording the gauge.
///
/// At step `k` the coefficient `X_k` is tested for semisimplicity; if it passes, every higher
/// coefficient is split along `Ker ⊕ Im` of `ad_{X_k}` inside the current centraliser and the
/// image part is removed by a Birkhoff gauge. The centraliser is then cut down to `Ker ad_{X_k}`.
pub fn birkhoff_normalize(rd: &RootDatum, x: &TcElement) -> Result<BirkhoffNormalForm> {
    let r = x.depth();
    if r == 0 {
        return Err(Error::Validation("depth must be at least 1".into()));
    }
    let d = rd.dim();
    let mut cur = x.clone();
    let mut gauge = Matrix::identity(r * d);
    let mut sub: Vec<Vec<Q>> = Matrix::identity(d).to_rows();
    let mut s = 0;
    for k in 0..r {
        let xk = cur.coeffs[k].clone();
        if !rd.is_semisimple(&xk) {
            break;
        }
        let ad = rd.ad_g(&xk);
        let (ker, img) = semisimple_split(&ad, &sub)?;
        let mut split_basis = ker.clone();
        split_basis.extend(img.iter().cloned());
        let split = Matrix::from_cols(&split_basis, d);
        let ad_sub = Matrix::from_cols(&sub.iter().map(|v| ad.mul_vec(v)).collect::<Vec<_>>(), d);
        for i in k + 1..r {
            let c = split
                .solve(&cur.coeffs[i].coords)
                .ok_or_else(|| Error::ClaimViolation("coefficient left the centraliser".into()))?;
            let mut image_part = vec![Q::zero(); d];
            for (j, v) in img.iter().enumerate() {
                let cj = &c[ker.len() + j];
                for (t, vt) in image_part.iter_mut().zip(v) {
                    *t += cj * vt;
                }
            }
            if image_part.iter().all(|t| t.is_zero()) {
                continue;
            }
            // Solve [X_k, Y] = image part with Y in the centraliser; then [Y, X_k] removes it.
            let coeffs = ad_sub.solve(&image_part).ok_or_else(|| Error::ClaimViolation("image part not reachable".into()))?;
            let mut y = vec![Q::zero(); d];
            for (cj, v) in coeffs.iter().zip(&sub) {
                for (t, vt) in y.iter_mut().zip(v) {
                    *t += cj * vt;
                }
            }
            let mut z = TcElement::zero(d, r);
            z.coeffs[i - k] = GElement { coords: y };
            let e = exp_ad(rd, &z)?;
            cur = TcElement::from_flat(&e.mul_vec(&cur.flat()), d);
            gauge = e.mul(&gauge);
        }
        sub = ker;
        s = k + 1;
    }
    let gauge_log = solve_inner_derivation(rd, r, &unipotent_log(&gauge))?;
    if apply_gauge(rd, &gauge_log, x)? != cur {
        return Err(Error::ClaimViolation("gauge round trip failed".into()));
    }
    Ok(BirkhoffNormalForm { strictness: s, normal: cur, gauge_log })
}

/// Strictness index `s` of an element.
pub fn strictness_index(rd: &RootDatum, x: &TcElement) -> Result<usize> {
    Ok(birkhoff_normalize(rd, x)?.strictness)
}

/// Irregular type `τ_s` of an element.
pub fn irregular_type(rd: &RootDatum, x: &TcElement) -> Result<Vec<GElement>> {
    Ok(birkhoff_normalize(rd, x)?.irregular_type())
}

/// A random Birkhoff gauge `Z ∈ ε g_r` with small integer coefficients.
pub fn random_birkhoff_gauge(rd: &RootDatum, r: usize, rng: &mut ChaCha8Rng) -> TcElement {
    let mut z = TcElement::zero(rd.dim(), r);
    for deg in 1..r {
        for c in z.coeffs[deg].coords.iter_mut() {
            *c = q(rng.gen_range(-2..=2));
        }
    }
    z
}

/// Exact centraliser of a marked element together with its structural prediction.
#[derive(Clone, Debug)]
pub struct CentralizerReport {
    /// Dimension of the kernel of `ad_X` on `g_r`.
    pub dim: usize,
    /// Basis of the kernel.
    pub basis: Vec<TcElement>,
    /// Dimension of the common centraliser `g^X` of all coefficients in `g`.
    pub gx_dim: usize,
    /// Dimensions of `l_{φ_i}` for `i = 0, …, r-2`.
    pub levi_dims: Vec<usize>,
    /// Predicted dimension `dim g^X + Σ dim l_{φ_i}`.
    pub predicted_dim: usize,
    /// Filtration `φ_i = ⋂_{j ≤ r-2-i} φ_{X_j}`, of depth `r-1`.
    pub filtration: LeviFiltration,
    /// Whether the kernel equals the predicted subspace `g^X ⊕ ⊕_{k≥1} l_{φ_{k-1}} ε^k`.
    pub matches: bool,
}

/// Computes the centraliser of a marked element: `X_0, …, X_{r-2}` in the Cartan subalgebra and
/// `X_{r-1}` commuting with them.
pub fn centralizer(rd: &RootDatum, x: &TcElement) -> Result<CentralizerReport> {
    let r = x.depth();
    let d = rd.dim();
    if r == 0 {
        return Err(Error::Validation("depth must be at least 1".into()));
    }
    for i in 0..r.saturating_sub(1) {
        if !rd.is_cartan(&x.coeffs[i]) {
            return Err(Error::Precondition(format!("coefficient {i} is not in the Cartan subalgebra")));
        }
        if !rd.bracket_g(&x.coeffs[i], &x.coeffs[r - 1])?.is_zero() {
            return Err(Error::Precondition(format!("coefficient {} does not commute with coefficient {i}", r - 1)));
        }
    }
    let ad = rd.ad_gr(x);
    let ker = ad.nullspace();
    let basis: Vec<TcElement> = ker.iter().map(|v| TcElement::from_flat(v, d)).collect();
    // Common centraliser of all coefficients in g.
    let mut rows = Vec::new();
    for c in &x.coeffs {
        rows.extend(rd.ad_g(c).to_rows());
    }
    let gx = Matrix::from_rows(&rows).nullspace();
    let tuple: Vec<Vec<Q>> = x.coeffs[..r - 1].iter().rev().map(|c| rd.cartan_part(c).to_vec()).collect();
    let filtration = stratum_of_tuple(rd, &tuple);
    let levi_dims: Vec<usize> = filtration.terms.iter().map(|p| rd.cartan_dim() + p.len()).collect();
    let predicted_dim = gx.len() + levi_dims.iter().sum::<usize>();
    let mut predicted: Vec<Vec<Q>> = gx
        .iter()
        .map(|v| {
            let mut f = vec![Q::zero(); r * d];
            f[..d].clone_from_slice(v);
            f
        })
        .collect();
    for k in 1..r {
        let phi = filtration.terms[k - 1];
        let mut push = |b: usize| {
            let mut f = vec![Q::zero(); r * d];
            f[k * d + b] = Q::one();
            predicted.push(f);
        };
        (0..rd.cartan_dim()).for_each(&mut push);
        phi.indices().into_iter().for_each(|a| push(rd.root_basis(a)));
    }
    let matches = ker.len() == predicted_dim && predicted.iter().all(|v| in_span(&ker, v));
    Ok(CentralizerReport { dim: ker.len(), basis, gx_dim: gx.len(), levi_dims, predicted_dim, filtration, matches })
}

fn cartan_tuple(rd: &RootDatum, x: &TcElement) -> Result<Vec<Vec<Q>>> {
    x.coeffs
        .iter()
        .map(|c| {
            if rd.is_cartan(c) {
                Ok(rd.cartan_part(c).to_vec())
            } else {
                Err(Error::Precondition("marking must lie in the Cartan subalgebra".into()))
            }
        })
        .collect()
}

/// Marking filtration of an `r`-semisimple marking, using the swapped index convention
/// (the tuple is read from the highest coefficient down).
pub fn marking_filtration(rd: &RootDatum, x: &TcElement) -> Result<LeviFiltration> {
    let mut t = cartan_tuple(rd, x)?;
    t.reverse();
    Ok(stratum_of_tuple(rd, &t))
}

/// Whether two markings in `𝔱_r` lie in the same stratum.
pub fn classify_marked(rd: &RootDatum, x: &TcElement, y: &TcElement) -> Result<bool> {
    if x.depth() != y.depth() {
        return Err(Error::Mismatch("markings of different depths".into()));
    }
    Ok(marking_filtration(rd, x)? == marking_filtration(rd, y)?)
}

/// Whether two markings in `𝔱_r` are related by a Weyl group element.
pub fn classify_unmarked(rd: &RootDatum, w: &WeylGroup, x: &TcElement, y: &TcElement) -> Result<bool> {
    if x.depth() != y.depth() {
        return Err(Error::Mismatch("markings of different depths".into()));
    }
    let (tx, ty) = (cartan_tuple(rd, x)?, cartan_tuple(rd, y)?);
    Ok(w.elements.iter().any(|e| tx.iter().zip(&ty).all(|(a, b)| &e.act_cartan(a) == b)))
}

/// Matrix of the KKS form `ω_λ` on `u⁺ ⊗ u⁻` at a marking; equals the B-pairing matrix.
pub fn kks_form(rd: &RootDatum, psi: &ParabolicFiltration, lambdas: &[Vec<Q>]) -> Result<Matrix> {
    b_pairing_matrix(rd, psi, lambdas)
}

/// Roots vanishing on every coefficient of a Cartan tuple.
pub fn common_levi(rd: &RootDatum, xs: &[Vec<Q>]) -> RootSubset {
    xs.iter().fold(RootSubset::full(rd), |acc, x| acc.intersection(levi_of_point(rd, x)))
}
