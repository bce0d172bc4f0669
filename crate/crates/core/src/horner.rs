//! Polynomial evaluation by the pairing reduction.
//!
//! One Horner step `t ↦ x·t + a_k` is the affine map with matrix
//! `[[x, a_k], [0, 1]]`. Composing the leaves for `a_0, a_1, ..., a_N` left to
//! right gives the matrix `[[x^(N+1), p(x)], [0, 1]]`, and since matrix
//! multiplication is associative the product can be formed as a balanced tree.

use thiserror::Error;

use crate::forkjoin::{par_reduce_with, JoinPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolynomialError {
    #[error("a polynomial needs at least one coefficient")]
    NoCoefficients,
}

/// Top row `(p, q)` of `[[p, q], [0, 1]]`, the affine map `t ↦ p·t + q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinePair {
    pub p: f64,
    pub q: f64,
}

impl AffinePair {
    pub const IDENTITY: AffinePair = AffinePair { p: 1.0, q: 0.0 };

    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q }
    }

    /// The Horner step for coefficient `coeff` at point `x`.
    pub fn leaf(x: f64, coeff: f64) -> Self {
        Self { p: x, q: coeff }
    }

    /// `self ∘ inner`, i.e. the matrix product `self · inner`.
    pub fn compose(self, inner: AffinePair) -> AffinePair {
        AffinePair {
            p: self.p * inner.p,
            q: self.p * inner.q + self.q,
        }
    }

    pub fn apply(self, t: f64) -> f64 {
        self.p * t + self.q
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// `coeffs[i]` multiplies `x^i`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self, PolynomialError> {
        if coeffs.is_empty() {
            return Err(PolynomialError::NoCoefficients);
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Composes `leaf(x, a_0) ∘ ... ∘ leaf(x, a_N)` by the pairing reduction.
/// The result's `p` is `x^(N+1)` and its `q` is the polynomial value.
pub fn compose_all(poly: &Polynomial, x: f64, policy: &JoinPolicy) -> AffinePair {
    let coeffs = poly.coeffs();
    par_reduce_with(
        coeffs.len(),
        |k| AffinePair::leaf(x, coeffs[k]),
        AffinePair::compose,
        policy,
    )
    .expect("polynomial has at least one coefficient")
}

pub fn eval_parallel(poly: &Polynomial, x: f64, policy: &JoinPolicy) -> f64 {
    compose_all(poly, x, policy).q
}

/// `p_0 = a_N`, `p_k = x·p_(k-1) + a_(N-k)`; returns `p_N`.
pub fn eval_horner(poly: &Polynomial, x: f64) -> f64 {
    let (&lead, rest) = poly.coeffs().split_last().expect("nonempty");
    rest.iter().rev().fold(lead, |acc, &a| x * acc + a)
}

/// `Σ a_i·x^i` with every power rebuilt by repeated multiplication.
pub fn eval_powers(poly: &Polynomial, x: f64) -> f64 {
    let mut z = 0.0;
    for (i, &a) in poly.coeffs().iter().enumerate() {
        let mut v = 1.0;
        for _ in 0..i {
            v *= x;
        }
        z += v * a;
    }
    z
}
