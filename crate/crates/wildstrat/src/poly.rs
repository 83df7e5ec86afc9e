//! Univariate polynomials, Laurent polynomials and truncated power series over the rationals.

use crate::rational::{fmt_q, Q};
use num_traits::{One, Zero};
use std::fmt::Debug;

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    /// Builds a polynomial from coefficients (lowest degree first), trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// The constant `a`.
    pub fn constant(a: Q) -> Self {
        Self::new(vec![a])
    }

    /// The monomial `a * c^k`.
    pub fn monomial(k: usize, a: Q) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = a;
        Self::new(v)
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `c^k`.
    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Sum.
    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    /// Difference.
    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    /// Negation.
    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Product.
    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Poly::new(v)
    }

    /// Evaluation at `x`.
    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    ///
    /// Panics on division by zero.
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let f = &rem[k + dd] / &lead;
            if f.is_zero() {
                continue;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &f * c;
            }
            quot[k] = f;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divmod(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading().recip();
        a.scale(&l)
    }

    /// Whether the polynomial has no repeated factor over an algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Human-readable form in the variable `var`.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => fmt_q(c),
                1 => format!("{}*{var}", fmt_q(c)),
                _ => format!("{}*{var}^{k}", fmt_q(c)),
            });
        }
        parts.join(" + ")
    }
}

/// Laurent polynomial `Σ a_k c^k` with finitely many nonzero integer exponents.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent {
    low: i64,
    coeffs: Vec<Q>,
}

impl Laurent {
    fn normalized(mut low: i64, mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead_zeros);
        low += lead_zeros as i64;
        if coeffs.is_empty() {
            low = 0;
        }
        Laurent { low, coeffs }
    }

    /// The zero element.
    pub fn zero() -> Self {
        Laurent { low: 0, coeffs: Vec::new() }
    }

    /// The monomial `a * c^e`.
    pub fn monomial(e: i64, a: Q) -> Self {
        Self::normalized(e, vec![a])
    }

    /// Embeds a polynomial.
    pub fn from_poly(p: &Poly) -> Self {
        Self::normalized(0, p.coeffs().to_vec())
    }

    /// Whether this is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `c^e`.
    pub fn coeff(&self, e: i64) -> Q {
        let k = e - self.low;
        if k < 0 {
            return Q::zero();
        }
        self.coeffs.get(k as usize).cloned().unwrap_or_else(Q::zero)
    }

    /// Largest exponent with nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// Smallest exponent with nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Sum.
    pub fn add(&self, o: &Laurent) -> Laurent {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.max_exp().unwrap().max(o.max_exp().unwrap());
        Self::normalized(low, (low..=high).map(|e| self.coeff(e) + o.coeff(e)).collect())
    }

    /// Negation.
    pub fn neg(&self) -> Laurent {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Difference.
    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &Q) -> Laurent {
        Self::normalized(self.low, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Product.
    pub fn mul(&self, o: &Laurent) -> Laurent {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero();
        }
        let p = Poly::new(self.coeffs.clone()).mul(&Poly::new(o.coeffs.clone()));
        Self::normalized(self.low + o.low, p.coeffs().to_vec())
    }

    /// Coefficients of `ħ^k = c^{-k}` for `k = 0..=order`, provided there are no positive powers of `c`.
    pub fn to_hbar_series(&self, order: usize) -> Option<HSeries> {
        if self.max_exp().is_some_and(|e| e > 0) {
            return None;
        }
        Some(HSeries::new((0..=order).map(|k| self.coeff(-(k as i64))).collect()))
    }
}

/// Power series in `ħ` truncated after the coefficient of `ħ^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSeries {
    /// Coefficients of `ħ^0, …, ħ^order`.
    pub coeffs: Vec<Q>,
}

impl HSeries {
    /// Builds a series; the truncation order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        HSeries { coeffs }
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        HSeries { coeffs: vec![Q::zero(); order + 1] }
    }

    /// The monomial `a ħ^k` truncated at `order`.
    pub fn monomial(order: usize, k: usize, a: Q) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = a;
        }
        s
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Sum.
    pub fn add(&self, o: &HSeries) -> HSeries {
        assert_eq!(self.order(), o.order());
        HSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    /// Product truncated at the common order.
    pub fn mul(&self, o: &HSeries) -> HSeries {
        assert_eq!(self.order(), o.order());
        let n = self.order();
        let mut out = vec![Q::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        HSeries { coeffs: out }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &Q) -> HSeries {
        HSeries { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }
}

/// Coefficient ring used by the module engine: the rationals or polynomials in `c`.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    /// Additive identity.
    fn czero() -> Self;
    /// Multiplicative identity.
    fn cone() -> Self;
    /// Whether this is zero.
    fn cis_zero(&self) -> bool;
    /// Sum.
    fn cadd(&self, o: &Self) -> Self;
    /// Product.
    fn cmul(&self, o: &Self) -> Self;
    /// Multiplication by a rational.
    fn cscale(&self, q: &Q) -> Self;
    /// Embedding of a rational.
    fn from_q(q: &Q) -> Self;
}

impl Coeff for Q {
    fn czero() -> Self {
        <Q as Zero>::zero()
    }
    fn cone() -> Self {
        <Q as One>::one()
    }
    fn cis_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cadd(&self, o: &Self) -> Self {
        self + o
    }
    fn cmul(&self, o: &Self) -> Self {
        self * o
    }
    fn cscale(&self, q: &Q) -> Self {
        self * q
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
}

impl Coeff for Poly {
    fn czero() -> Self {
        Poly::zero()
    }
    fn cone() -> Self {
        Poly::constant(<Q as One>::one())
    }
    fn cis_zero(&self) -> bool {
        self.is_zero()
    }
    fn cadd(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn cmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn cscale(&self, q: &Q) -> Self {
        self.scale(q)
    }
    fn from_q(q: &Q) -> Self {
        Poly::constant(q.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)^2 (x+2)
        let f = p(&[1, -2, 1]).mul(&p(&[2, 1]));
        let (qq, r) = f.divmod(&p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(qq, p(&[-2, 1, 1]));
        assert!(!f.is_squarefree());
        assert!(p(&[-1, 0, 1]).is_squarefree());
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
    }

    #[test]
    fn laurent_arithmetic() {
        let a = Laurent::monomial(2, q(3)).add(&Laurent::monomial(-1, q(1)));
        let b = Laurent::monomial(-2, q(2));
        let ab = a.mul(&b);
        assert_eq!(ab.coeff(0), q(6));
        assert_eq!(ab.coeff(-3), q(2));
        assert_eq!(ab.max_exp(), Some(0));
        let s = ab.to_hbar_series(3).unwrap();
        assert_eq!(s.coeffs, vec![q(6), q(0), q(0), q(2)]);
        assert!(a.to_hbar_series(2).is_none());
    }

    #[test]
    fn series_product_truncates() {
        let a = HSeries::new(vec![q(1), q(1), q(0)]);
        let sq = a.mul(&a);
        assert_eq!(sq.coeffs, vec![q(1), q(2), q(1)]);
        let cube = sq.mul(&a);
        assert_eq!(cube.coeffs, vec![q(1), q(3), q(3)]);
    }
}
