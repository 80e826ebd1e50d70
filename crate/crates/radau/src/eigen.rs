//! Symmetric tridiagonal eigensolver and Golub-Welsch node/weight
//! extraction.
//!
//! The solver is an implicit-shift QL iteration with Wilkinson shifts and
//! deflation. Only the first component of each eigenvector is carried
//! through the rotations; that is all Golub-Welsch needs.

use crate::orthopoly::RecurrenceCoefficients;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 50;

/// Jacobi matrix of a measure: diagonal alpha, off-diagonal sqrt(beta),
/// total mass mu0.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiMatrix {
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
    mu0: f64,
}

impl JacobiMatrix {
    pub fn new(diagonal: Vec<f64>, offdiagonal: Vec<f64>, mu0: f64) -> Result<Self> {
        if diagonal.is_empty() || offdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidArgument(
                "off-diagonal must be one entry shorter than the diagonal".into(),
            ));
        }
        if offdiagonal.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::InvalidArgument(
                "off-diagonal entries must be strictly positive".into(),
            ));
        }
        if !(mu0 > 0.0) {
            return Err(Error::InvalidArgument("mu0 must be positive".into()));
        }
        Ok(Self {
            diagonal,
            offdiagonal,
            mu0,
        })
    }

    pub fn from_coefficients(coeffs: &RecurrenceCoefficients) -> Self {
        let diagonal = coeffs.alpha().to_vec();
        let offdiagonal = coeffs.beta()[1..].iter().map(|b| b.sqrt()).collect();
        Self {
            diagonal,
            offdiagonal,
            mu0: coeffs.mu0(),
        }
    }

    pub fn order(&self) -> usize {
        self.diagonal.len()
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[f64] {
        &self.offdiagonal
    }
}

/// Gauss rule extracted from a Jacobi matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub mu0: f64,
}

impl GaussRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }
}

/// Eigenvalues (ascending) and first components of the corresponding unit
/// eigenvectors of a symmetric tridiagonal matrix.
pub fn eigendecompose(m: &JacobiMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = m.order();
    let mut d = m.diagonal.clone();
    let mut e = m.offdiagonal.clone();
    e.push(0.0);
    // first row of the accumulated orthogonal transform
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut sweeps = 0usize;
        loop {
            // deflation point: first negligible off-diagonal at or after l
            let mut split = l;
            while split < n - 1 {
                let dd = d[split].abs() + d[split + 1].abs();
                if e[split].abs() <= f64::EPSILON * dd {
                    break;
                }
                split += 1;
            }
            if split == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    sweeps: MAX_SWEEPS,
                });
            }

            // Wilkinson shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[split] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0;
            let mut deflated_early = false;

            for i in (l..split).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[split] = 0.0;
                    deflated_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // carry the first eigenvector component through the rotation
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[split] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| d[*a].total_cmp(&d[*b]));
    let eigenvalues: Vec<f64> = order.iter().map(|i| d[*i]).collect();
    let first_components: Vec<f64> = order.iter().map(|i| z[*i]).collect();
    Ok((eigenvalues, first_components))
}

/// Gauss nodes and weights of the measure described by the recurrence
/// coefficients: nodes are the Jacobi-matrix eigenvalues, weight_j is
/// mu0 times the squared first eigenvector component.
pub fn golub_welsch(coeffs: &RecurrenceCoefficients) -> Result<GaussRule> {
    let m = JacobiMatrix::from_coefficients(coeffs);
    let (nodes, z) = eigendecompose(&m)?;
    for pair in nodes.windows(2) {
        if pair[1] - pair[0] <= 1e-14 {
            return Err(Error::Inconsistent(format!(
                "Gauss nodes not separated: {} and {}",
                pair[0], pair[1]
            )));
        }
    }
    if nodes.iter().any(|x| !(*x > -1.0 && *x < 1.0)) {
        return Err(Error::Inconsistent(
            "Gauss node escaped the open interval (-1, 1)".into(),
        ));
    }
    let weights: Vec<f64> = z.iter().map(|zi| m.mu0 * zi * zi).collect();
    let sum: f64 = weights.iter().sum();
    if ((sum - m.mu0) / m.mu0).abs() > 1e-12 {
        return Err(Error::Inconsistent(format!(
            "Gauss weights sum to {sum}, expected mu0 = {}",
            m.mu0
        )));
    }
    Ok(GaussRule {
        nodes,
        weights,
        mu0: m.mu0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::RecurrenceCoefficients;
    use approx::assert_abs_diff_eq;

    #[test]
    fn one_by_one_matrix() {
        let m = JacobiMatrix::new(vec![-1.0 / 3.0], vec![], 2.0).unwrap();
        let (vals, z) = eigendecompose(&m).unwrap();
        assert_abs_diff_eq!(vals[0], -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z[0].abs(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn legendre_two_point() {
        // 2x2 closed form: eigenvalues +-1/sqrt(3), the Gauss-Legendre pair
        let c = RecurrenceCoefficients::legendre(2);
        let rule = golub_welsch(&c).unwrap();
        let node = 1.0 / 3.0f64.sqrt();
        assert_abs_diff_eq!(rule.nodes[0], -node, epsilon = 1e-14);
        assert_abs_diff_eq!(rule.nodes[1], node, epsilon = 1e-14);
        assert_abs_diff_eq!(rule.weights[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rule.weights[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn legendre_three_point() {
        let c = RecurrenceCoefficients::legendre(3);
        let rule = golub_welsch(&c).unwrap();
        let node = (3.0f64 / 5.0).sqrt();
        assert_abs_diff_eq!(rule.nodes[0], -node, epsilon = 1e-14);
        assert!(rule.nodes[1].abs() <= 1e-14);
        assert_abs_diff_eq!(rule.nodes[2], node, epsilon = 1e-14);
        assert_abs_diff_eq!(rule.weights[1], 8.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn jacobi_1_0_single_node() {
        let c = RecurrenceCoefficients::new(vec![-1.0 / 3.0], vec![2.0]).unwrap();
        let rule = golub_welsch(&c).unwrap();
        assert_abs_diff_eq!(rule.nodes[0], -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rule.weights[0], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn weights_sum_to_mu0() {
        for q in [1, 2, 5, 12, 32] {
            let c = RecurrenceCoefficients::legendre(q);
            let rule = golub_welsch(&c).unwrap();
            let sum: f64 = rule.weights.iter().sum();
            assert!(((sum - 2.0) / 2.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn eigen_residuals_small() {
        // T v = lambda v checked through the rule itself: reconstruct v via
        // the recurrence p_k(lambda) and compare component-wise
        let c = RecurrenceCoefficients::legendre(8);
        let m = JacobiMatrix::from_coefficients(&c);
        let (vals, _) = eigendecompose(&m).unwrap();
        let norm: f64 = m
            .diagonal()
            .iter()
            .chain(m.offdiagonal())
            .fold(0.0f64, |a, x| a.max(x.abs()));
        for lambda in &vals {
            // eigenvector of a Jacobi matrix: v_k proportional to p_k(lambda)
            let mut v = Vec::with_capacity(8);
            for k in 0..8 {
                v.push(crate::orthopoly::eval_orthonormal(&c, k, *lambda).unwrap());
            }
            let nrm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for k in 0..8 {
                let mut t = m.diagonal()[k] * v[k];
                if k > 0 {
                    t += m.offdiagonal()[k - 1] * v[k - 1];
                }
                if k + 1 < 8 {
                    t += m.offdiagonal()[k] * v[k + 1];
                }
                let resid = (t - lambda * v[k]).abs() / nrm;
                assert!(resid <= 1e-12 * norm.max(1.0), "residual {resid}");
            }
        }
    }

    #[test]
    fn node_interlacing() {
        let lo = golub_welsch(&RecurrenceCoefficients::legendre(5)).unwrap();
        let hi = golub_welsch(&RecurrenceCoefficients::legendre(6)).unwrap();
        for (j, x) in lo.nodes.iter().enumerate() {
            assert!(hi.nodes[j] < *x && *x < hi.nodes[j + 1]);
        }
    }
}
