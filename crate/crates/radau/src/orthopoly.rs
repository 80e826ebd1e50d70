//! Three-term recurrence coefficients of orthonormal polynomials with
//! respect to the modified weight (1 - x) w(x).
//!
//! The coefficients are produced by the discretized Stieltjes procedure:
//! every inner product is an adaptive weighted integral, and the
//! polynomials are evaluated through the recurrence built so far, never
//! through expanded monomial coefficients.

use crate::quadcore;
use crate::weights::{ModifiedWeight, WeightSpec};
use crate::{Error, Result};

/// Largest supported recurrence order.
pub const MAX_ORDER: usize = 32;

/// Recurrence data (alpha_k, beta_k), k = 0..q-1, with beta_0 the total
/// mass of the modified weight. The orthonormal polynomials satisfy
/// sqrt(beta_{k+1}) p_{k+1}(x) = (x - alpha_k) p_k(x) - sqrt(beta_k) p_{k-1}(x).
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCoefficients {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl RecurrenceCoefficients {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(Error::InvalidArgument(
                "alpha and beta must be nonempty and of equal length".into(),
            ));
        }
        for (k, b) in beta.iter().enumerate() {
            if !(*b > 0.0) {
                return Err(Error::LostPositivity { index: k, value: *b });
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn order(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Total mass of the underlying measure, beta_0.
    pub fn mu0(&self) -> f64 {
        self.beta[0]
    }

    /// Closed-form Legendre coefficients (constant measure on (-1, 1)):
    /// alpha_k = 0, beta_0 = 2, beta_k = k^2 / (4 k^2 - 1).
    pub fn legendre(q: usize) -> Self {
        let alpha = vec![0.0; q];
        let mut beta = Vec::with_capacity(q);
        beta.push(2.0);
        for k in 1..q {
            let kf = k as f64;
            beta.push(kf * kf / (4.0 * kf * kf - 1.0));
        }
        Self { alpha, beta }
    }
}

/// p_k(x) and p_{k-1}(x) by forward recurrence; needs alpha[0..k] and
/// beta[0..=k].
fn eval_pair(alpha: &[f64], beta: &[f64], k: usize, x: f64) -> (f64, f64) {
    let mut pm1 = 0.0;
    let mut p = 1.0 / beta[0].sqrt();
    for j in 0..k {
        let next = ((x - alpha[j]) * p - beta[j].sqrt() * pm1) / beta[j + 1].sqrt();
        pm1 = p;
        p = next;
    }
    (p, pm1)
}

/// Recurrence coefficients of the orthonormal polynomials of the modified
/// weight (1 - x) w(x), by the discretized Stieltjes procedure.
pub fn stieltjes(spec: &WeightSpec, q: usize, tol: f64) -> Result<RecurrenceCoefficients> {
    stieltjes_for(&ModifiedWeight::new(spec.clone()), q, tol)
}

/// Stieltjes run on an arbitrary measure; the Radau pipeline always passes
/// the modified weight, the direct form exists for cross-checks against
/// classical coefficient families.
pub fn stieltjes_for<W: crate::weights::Weight>(
    weight: &W,
    q: usize,
    tol: f64,
) -> Result<RecurrenceCoefficients> {
    if q < 1 || q > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "order q must satisfy 1 <= q <= {MAX_ORDER}, got {q}"
        )));
    }
    let beta0 = quadcore::integrate(|_| 1.0, weight, tol)?.value;
    if !(beta0 > 0.0) {
        return Err(Error::LostPositivity {
            index: 0,
            value: beta0,
        });
    }

    let mut alpha: Vec<f64> = Vec::with_capacity(q);
    let mut beta: Vec<f64> = vec![beta0];

    for k in 0..q {
        // <x p_k, p_k>; p_k is orthonormal so no normalization divide
        let a_k = {
            let (al, be) = (&alpha, &beta);
            quadcore::integrate(
                |x| {
                    let (p, _) = eval_pair(al, be, k, x);
                    x * p * p
                },
                weight,
                tol,
            )?
            .value
        };
        if !(a_k > -1.0 && a_k < 1.0) {
            return Err(Error::AlphaOutOfRange {
                index: k,
                value: a_k,
            });
        }
        alpha.push(a_k);

        if k + 1 < q {
            // residual t_{k+1} = (x - alpha_k) p_k - sqrt(beta_k) p_{k-1};
            // its squared norm is beta_{k+1}
            let b_next = {
                let (al, be) = (&alpha, &beta);
                quadcore::integrate(
                    |x| {
                        let (p, pm1) = eval_pair(al, be, k, x);
                        let t = (x - al[k]) * p - be[k].sqrt() * pm1;
                        t * t
                    },
                    weight,
                    tol,
                )?
                .value
            };
            if !(b_next > 0.0) {
                return Err(Error::LostPositivity {
                    index: k + 1,
                    value: b_next,
                });
            }
            beta.push(b_next);
        }
    }

    Ok(RecurrenceCoefficients { alpha, beta })
}

/// Value of the k-th orthonormal polynomial at x, k < coeffs.order().
pub fn eval_orthonormal(coeffs: &RecurrenceCoefficients, k: usize, x: f64) -> Result<f64> {
    if k >= coeffs.order() {
        return Err(Error::IndexOutOfRange {
            index: k,
            order: coeffs.order(),
        });
    }
    Ok(eval_pair(&coeffs.alpha, &coeffs.beta, k, x).0)
}
