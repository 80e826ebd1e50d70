//! Weight functions on the open interval (-1, 1).
//!
//! A weight is any positive, integrable function. Four declarative families
//! are provided: the constant weight, the exponential family
//! `x -> exp(-rho * tau * (x + 1))`, Jacobi weights
//! `(1 - x)^alpha (1 + x)^beta`, and tabulated piecewise-linear weights.
//! The modified weight `(1 - x) * w(x)` used by the Radau reduction is a
//! separate wrapper type.

use serde::{Deserialize, Serialize};

use crate::quadcore;
use crate::{Error, Result};

/// Declarative description of a weight function on (-1, 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum WeightSpec {
    /// w(x) = 1.
    Constant,
    /// w(x) = exp(-rho * tau * (x + 1)). `tau` may be any real; `rho > 0`.
    Exp { rho: f64, tau: f64 },
    /// w(x) = (1 - x)^alpha * (1 + x)^beta with alpha, beta > -1.
    Jacobi { alpha: f64, beta: f64 },
    /// Piecewise-linear interpolation through (xs[i], vals[i]).
    /// The knots must be strictly increasing and span [-1, 1].
    Table { xs: Vec<f64>, vals: Vec<f64> },
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSpec::Constant => Ok(()),
            WeightSpec::Exp { rho, tau } => {
                if !rho.is_finite() || *rho <= 0.0 {
                    return Err(Error::InvalidWeight(format!(
                        "exp family requires rho > 0, got {rho}"
                    )));
                }
                if !tau.is_finite() {
                    return Err(Error::InvalidWeight("tau must be finite".into()));
                }
                Ok(())
            }
            WeightSpec::Jacobi { alpha, beta } => {
                if !(alpha.is_finite() && beta.is_finite() && *alpha > -1.0 && *beta > -1.0) {
                    return Err(Error::InvalidWeight(format!(
                        "jacobi family requires alpha, beta > -1, got alpha={alpha}, beta={beta}"
                    )));
                }
                Ok(())
            }
            WeightSpec::Table { xs, vals } => {
                if xs.len() != vals.len() {
                    return Err(Error::InvalidWeight(format!(
                        "table has {} knots but {} values",
                        xs.len(),
                        vals.len()
                    )));
                }
                if xs.len() < 2 {
                    return Err(Error::InvalidWeight(
                        "table needs at least two knots".into(),
                    ));
                }
                if xs[0] != -1.0 || *xs.last().unwrap() != 1.0 {
                    return Err(Error::InvalidWeight(
                        "table knots must span [-1, 1] exactly".into(),
                    ));
                }
                if xs.windows(2).any(|p| !(p[0] < p[1])) {
                    return Err(Error::InvalidWeight(
                        "table knots must be strictly increasing".into(),
                    ));
                }
                if vals.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                    return Err(Error::InvalidWeight(
                        "table values must be strictly positive".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// The modified weight `(1 - x) * w(x)`; strictly positive a.e. on (-1, 1)
/// whenever the base weight is.
#[derive(Clone, Debug, PartialEq)]
pub struct ModifiedWeight {
    base: WeightSpec,
}

impl ModifiedWeight {
    pub fn new(base: WeightSpec) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &WeightSpec {
        &self.base
    }
}

/// Pointwise weight evaluation inside the open interval; implementors do not
/// check the domain themselves.
pub trait Weight: Sync {
    fn density(&self, x: f64) -> f64;

    /// Interior points where the integrand loses smoothness; the adaptive
    /// integrator seeds panel boundaries here.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl Weight for WeightSpec {
    fn density(&self, x: f64) -> f64 {
        match self {
            WeightSpec::Constant => 1.0,
            WeightSpec::Exp { rho, tau } => (-rho * tau * (x + 1.0)).exp(),
            WeightSpec::Jacobi { alpha, beta } => (1.0 - x).powf(*alpha) * (1.0 + x).powf(*beta),
            WeightSpec::Table { xs, vals } => {
                // last index with xs[i] <= x; knots span [-1, 1] so the
                // bracketing segment always exists
                let i = match xs.binary_search_by(|k| k.partial_cmp(&x).unwrap()) {
                    Ok(i) => i.min(xs.len() - 2),
                    Err(i) => i.saturating_sub(1).min(xs.len() - 2),
                };
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                vals[i] + t * (vals[i + 1] - vals[i])
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            WeightSpec::Constant | WeightSpec::Exp { .. } => Vec::new(),
            WeightSpec::Jacobi { alpha, beta } => {
                // geometric grading toward an endpoint with a non-polynomial
                // factor; integrable singularities converge under grading
                // without ever sampling the endpoint itself
                let mut pts = Vec::new();
                let graded = |sign: f64, pts: &mut Vec<f64>| {
                    let mut h = 0.5f64;
                    for _ in 0..44 {
                        pts.push(sign * (1.0 - h));
                        h *= 0.5;
                    }
                };
                if alpha.fract() != 0.0 {
                    graded(1.0, &mut pts);
                }
                if beta.fract() != 0.0 {
                    graded(-1.0, &mut pts);
                }
                pts
            }
            WeightSpec::Table { xs, .. } => {
                xs.iter().copied().filter(|x| x.abs() < 1.0).collect()
            }
        }
    }
}

impl Weight for ModifiedWeight {
    fn density(&self, x: f64) -> f64 {
        (1.0 - x) * self.base.density(x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.base.breakpoints()
    }
}

/// w(x) for x strictly inside (-1, 1).
pub fn evaluate(spec: &WeightSpec, x: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::OutsideDomain { x });
    }
    spec.validate()?;
    Ok(spec.density(x))
}

/// The L^1 norm of the weight, i.e. the total mass of the measure.
pub fn l1_norm(spec: &WeightSpec, tol: f64) -> Result<f64> {
    spec.validate()?;
    Ok(quadcore::integrate(|_| 1.0, spec, tol)?.value)
}

/// L^1 distance between two weights on (-1, 1), the metric of the
/// continuity experiments.
pub fn l1_distance(a: &WeightSpec, b: &WeightSpec, tol: f64) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    let mut breaks = a.breakpoints();
    breaks.extend(b.breakpoints());
    let res = quadcore::integrate_with_breakpoints(
        |x| (a.density(x) - b.density(x)).abs(),
        &WeightSpec::Constant,
        tol,
        &breaks,
    )?;
    Ok(res.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exp_with_zero_tau_is_constant() {
        let w = WeightSpec::Exp { rho: 1.0, tau: 0.0 };
        assert_eq!(evaluate(&w, 0.37).unwrap(), 1.0);
    }

    #[test]
    fn constant_is_one() {
        assert_eq!(evaluate(&WeightSpec::Constant, -0.5).unwrap(), 1.0);
    }

    #[test]
    fn exp_closed_form() {
        let w = WeightSpec::Exp { rho: 1.0, tau: 1.0 };
        assert_abs_diff_eq!(
            evaluate(&w, 0.0).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn evaluate_rejects_closed_endpoints() {
        assert!(matches!(
            evaluate(&WeightSpec::Constant, 1.0),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(
            evaluate(&WeightSpec::Constant, -1.2),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn l1_norm_constant_is_interval_length() {
        assert_abs_diff_eq!(
            l1_norm(&WeightSpec::Constant, 1e-12).unwrap(),
            2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn l1_norm_exp_closed_forms() {
        // int exp(-(x+1)) dx over (-1,1) = 1 - e^{-2}
        let decay = WeightSpec::Exp { rho: 1.0, tau: 1.0 };
        assert_abs_diff_eq!(
            l1_norm(&decay, 1e-12).unwrap(),
            1.0 - (-2.0f64).exp(),
            epsilon = 1e-11
        );
        // growing weights are admissible: tau = -1 gives e^2 - 1
        let grow = WeightSpec::Exp { rho: 1.0, tau: -1.0 };
        assert_abs_diff_eq!(
            l1_norm(&grow, 1e-12).unwrap(),
            (2.0f64).exp() - 1.0,
            epsilon = 1e-11
        );
    }

    #[test]
    fn l1_distance_identical_weights_is_zero() {
        let d = l1_distance(&WeightSpec::Constant, &WeightSpec::Constant, 1e-12).unwrap();
        assert!(d.abs() <= 1e-12);
        let e = l1_distance(
            &WeightSpec::Exp { rho: 1.0, tau: 0.0 },
            &WeightSpec::Constant,
            1e-12,
        )
        .unwrap();
        assert!(e.abs() <= 1e-12);
    }

    #[test]
    fn l1_distance_constant_vs_exp() {
        // exp weight <= 1 everywhere, so |1 - w| integrates to 2 - (1 - e^{-2})
        let d = l1_distance(
            &WeightSpec::Constant,
            &WeightSpec::Exp { rho: 1.0, tau: 1.0 },
            1e-12,
        )
        .unwrap();
        assert_abs_diff_eq!(d, 2.0 - (1.0 - (-2.0f64).exp()), epsilon = 1e-11);
    }

    #[test]
    fn table_interpolates_and_validates() {
        let w = WeightSpec::Table {
            xs: vec![-1.0, 0.0, 1.0],
            vals: vec![1.0, 2.0, 1.0],
        };
        w.validate().unwrap();
        assert_abs_diff_eq!(evaluate(&w, -0.5).unwrap(), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(evaluate(&w, 0.5).unwrap(), 1.5, epsilon = 1e-15);

        let bad = WeightSpec::Table {
            xs: vec![-1.0, 0.5],
            vals: vec![1.0, 0.0],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn jacobi_validation() {
        assert!(WeightSpec::Jacobi {
            alpha: -1.0,
            beta: 0.0
        }
        .validate()
        .is_err());
        assert!(WeightSpec::Jacobi {
            alpha: 0.5,
            beta: -0.5
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn spec_json_round_trip() {
        let w: WeightSpec = serde_json::from_str(r#"{"family":"exp","rho":1.0,"tau":2.0}"#).unwrap();
        assert_eq!(w, WeightSpec::Exp { rho: 1.0, tau: 2.0 });
        let c: WeightSpec = serde_json::from_str(r#"{"family":"constant"}"#).unwrap();
        assert_eq!(c, WeightSpec::Constant);
        let t: WeightSpec =
            serde_json::from_str(r#"{"family":"table","xs":[-1,0,1],"vals":[1,2,1]}"#).unwrap();
        t.validate().unwrap();
        let j: WeightSpec =
            serde_json::from_str(r#"{"family":"jacobi","alpha":0.0,"beta":0.0}"#).unwrap();
        j.validate().unwrap();
    }
}
