//! Right-sided Gauss-Radau rules: the endpoint node is pinned at 1, the
//! interior nodes are the Gauss nodes of the modified weight (1 - x) w(x),
//! and the rule is exact on polynomials of degree <= 2q.

use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::orthopoly;
use crate::quadcore::{self, legendre_p};
use crate::weights::WeightSpec;
use crate::{Error, Result};

/// A right-sided w-Gauss-Radau rule of order q: q interior nodes plus the
/// fixed endpoint node 1, with strictly positive weights summing to the
/// total mass of w.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadauRule {
    pub q: usize,
    pub weight: WeightSpec,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub mu0: f64,
}

impl RadauRule {
    /// Structural invariants of a (possibly deserialized) rule. Numerical
    /// exactness is checked separately by [`verify_exactness`].
    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.q + 1 || self.weights.len() != self.q + 1 {
            return Err(Error::InvalidArgument(format!(
                "rule of order {} must carry {} nodes and weights",
                self.q,
                self.q + 1
            )));
        }
        if *self.nodes.last().unwrap() != 1.0 {
            return Err(Error::InvalidArgument(
                "the endpoint node must be exactly 1".into(),
            ));
        }
        if self.nodes[0] <= -1.0 {
            return Err(Error::InvalidArgument(
                "the lowest node must lie strictly above -1".into(),
            ));
        }
        if self.nodes.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(Error::InvalidArgument(
                "nodes must be strictly increasing".into(),
            ));
        }
        self.weight.validate()
    }

    /// Apply the rule to an arbitrary function: sum of omega_j f(r_j).
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }
}

/// Build the right-sided w-Gauss-Radau rule of order q.
///
/// Interior nodes and weights come from the order-q Gauss rule of the
/// modified weight: node r_j stays put, weight omega_j = lambda_j / (1 - r_j).
/// The endpoint weight balances the total mass so that constants are
/// integrated exactly by construction.
pub fn build_radau(spec: &WeightSpec, q: usize, tol: f64) -> Result<RadauRule> {
    spec.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let coeffs = orthopoly::stieltjes(spec, q, tol)?;
    let gauss = eigen::golub_welsch(&coeffs)?;
    let mu0 = quadcore::integrate(|_| 1.0, spec, tol)?.value;

    let mut nodes = gauss.nodes;
    let mut weights: Vec<f64> = nodes
        .iter()
        .zip(&gauss.weights)
        .map(|(r, lambda)| lambda / (1.0 - r))
        .collect();
    let interior_sum: f64 = weights.iter().sum();
    let endpoint = mu0 - interior_sum;
    if !(endpoint > 0.0) {
        // Theorem-level impossibility; only a numerical breakdown lands here
        return Err(Error::Inconsistent(format!(
            "endpoint weight {endpoint} is not positive"
        )));
    }
    if !(nodes[0] > -1.0) {
        return Err(Error::Inconsistent(format!(
            "lowest node {} not above -1",
            nodes[0]
        )));
    }
    nodes.push(1.0);
    weights.push(endpoint);

    let rule = RadauRule {
        q,
        weight: spec.clone(),
        nodes,
        weights,
        mu0,
    };
    rule.validate()?;
    Ok(rule)
}

/// Result of checking the exactness contract of a rule over the Legendre
/// basis of degree 0..2q.
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    /// Relative defect per basis degree, normalized by the total mass of w.
    pub defects: Vec<f64>,
    pub max_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compare the rule against adaptive integration on every Legendre basis
/// polynomial of degree 0..2q; defects are normalized by the freshly
/// integrated total mass so tampered rules cannot hide behind their own
/// stored mu0.
pub fn verify_exactness(rule: &RadauRule, tol: f64) -> Result<ExactnessReport> {
    rule.validate()?;
    let itol = (tol * 1e-3).clamp(1e-14, 1e-8);
    let mass = quadcore::integrate(|_| 1.0, &rule.weight, itol)?.value;
    let mut defects = Vec::with_capacity(2 * rule.q + 1);
    for n in 0..=2 * rule.q {
        let exact = if n == 0 {
            mass
        } else {
            quadcore::integrate(|x| legendre_p(n, x), &rule.weight, itol)?.value
        };
        let approx = rule.apply(|x| legendre_p(n, x));
        defects.push((approx - exact).abs() / mass);
    }
    let max_defect = defects.iter().fold(0.0f64, |a, d| a.max(*d));
    Ok(ExactnessReport {
        defects,
        max_defect,
        tolerance: tol,
        pass: max_defect <= tol,
    })
}

/// The nodal polynomial chi of degree q+1: vanishes at every Radau node,
/// equals 1 at -1. Kept in rooted product form; the roots are the rule's
/// nodes sorted ascending with the endpoint 1 last.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiPolynomial {
    roots: Vec<f64>,
}

impl ChiPolynomial {
    pub fn from_rule(rule: &RadauRule) -> Self {
        Self {
            roots: rule.nodes.clone(),
        }
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// Product over all roots: prod_j (x - r_j) / (-1 - r_j).
    pub fn eval(&self, x: f64) -> f64 {
        self.roots.iter().map(|r| (x - r) / (-1.0 - r)).product()
    }

    /// Truncated product over the interior roots only (the factor chain of
    /// the endpoint-weight bound); degree q.
    pub fn eval_interior(&self, x: f64) -> f64 {
        self.roots[..self.roots.len() - 1]
            .iter()
            .map(|r| (x - r) / (-1.0 - r))
            .product()
    }
}

/// Serialize a rule as CSV with columns index,node,weight at full double
/// precision.
pub fn rule_to_csv(rule: &RadauRule) -> String {
    let mut out = String::from("index,node,weight\n");
    for (i, (x, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        out.push_str(&format!("{i},{x:.16e},{w:.16e}\n"));
    }
    out
}
