//! Adaptive weighted integration on (-1, 1).
//!
//! Each panel is evaluated with an embedded Gauss(7)/Kronrod(15) pair; the
//! difference of the two values drives a worst-panel-first bisection loop
//! until the summed error estimate drops below the requested absolute
//! tolerance. All sample points are strictly interior, so weights with
//! integrable endpoint singularities are never evaluated at +-1.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::weights::{Weight, WeightSpec};
use crate::{Error, Result};

/// Default subdivision budget; override with the RADAU_MAX_PANELS
/// environment variable.
pub const DEFAULT_MAX_PANELS: usize = 1_000_000;

/// 15-point Kronrod abscissae (positive half, descending), QUADPACK values.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights for the embedded rule (nodes XGK[1], XGK[3], XGK[5], 0).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Outcome of an adaptive integration run.
#[derive(Clone, Copy, Debug)]
pub struct IntegrationResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.seq == other.seq
    }
}
impl Eq for Panel {}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // worst error first; sequence number keeps ties deterministic
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = g(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let fsum = g(c - dx) + g(c + dx);
        resk += WGK[i] * fsum;
        if i % 2 == 1 {
            resg += WG[i / 2] * fsum;
        }
    }
    (resk * h, (resk - resg).abs() * h)
}

fn max_panels() -> usize {
    std::env::var("RADAU_MAX_PANELS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_PANELS)
}

/// Integrate `f(x) * w(x)` over (-1, 1) to absolute tolerance `tol`.
pub fn integrate<W: Weight, F: Fn(f64) -> f64>(
    f: F,
    weight: &W,
    tol: f64,
) -> Result<IntegrationResult> {
    integrate_with_breakpoints(f, weight, tol, &[])
}

/// As [`integrate`], with extra interior panel boundaries seeded by the
/// caller (knots of tabulated weights, kinks of |a - b| integrands, ...).
pub fn integrate_with_breakpoints<W: Weight, F: Fn(f64) -> f64>(
    f: F,
    weight: &W,
    tol: f64,
    extra_breaks: &[f64],
) -> Result<IntegrationResult> {
    integrate_with_budget(f, weight, tol, extra_breaks, max_panels())
}

fn integrate_with_budget<W: Weight, F: Fn(f64) -> f64>(
    f: F,
    weight: &W,
    tol: f64,
    extra_breaks: &[f64],
    budget: usize,
) -> Result<IntegrationResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    // deep subdivision near an endpoint can round a sample onto +-1 itself;
    // nudge such samples back into the open interval
    let hi_cap = 1.0f64.next_down();
    let lo_cap = (-1.0f64).next_up();
    let g = |x: f64| {
        let x = x.clamp(lo_cap, hi_cap);
        f(x) * weight.density(x)
    };

    let mut edges: Vec<f64> = weight
        .breakpoints()
        .into_iter()
        .chain(extra_breaks.iter().copied())
        .filter(|x| x.abs() < 1.0)
        .collect();
    edges.push(-1.0);
    edges.push(1.0);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut seq = 0u64;
    let mut heap = BinaryHeap::new();
    let mut stuck: Vec<Panel> = Vec::new();
    let mut stuck_err = 0.0;
    let mut active_err = 0.0;
    let mut panels = 0usize;

    let push = |lo: f64,
                    hi: f64,
                    heap: &mut BinaryHeap<Panel>,
                    active_err: &mut f64,
                    seq: &mut u64| {
        let (value, err) = gauss_kronrod(&g, lo, hi);
        *active_err += err;
        heap.push(Panel {
            lo,
            hi,
            value,
            err,
            seq: *seq,
        });
        *seq += 1;
    };

    for pair in edges.windows(2) {
        push(pair[0], pair[1], &mut heap, &mut active_err, &mut seq);
        panels += 1;
    }

    while active_err + stuck_err > tol && panels < budget {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        active_err -= worst.err;
        let mid = 0.5 * (worst.lo + worst.hi);
        // a panel narrower than a few ulps cannot be refined further
        if !(worst.lo < mid && mid < worst.hi) {
            stuck_err += worst.err;
            stuck.push(worst);
            continue;
        }
        push(worst.lo, mid, &mut heap, &mut active_err, &mut seq);
        push(mid, worst.hi, &mut heap, &mut active_err, &mut seq);
        panels += 1;
    }

    // deterministic final summation in left-to-right panel order
    let mut all: Vec<Panel> = heap.into_vec();
    all.extend(stuck);
    all.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value: f64 = all.iter().map(|p| p.value).sum();
    let error_estimate: f64 = all.iter().map(|p| p.err).sum();

    if error_estimate > tol {
        return Err(Error::Accuracy {
            value,
            error_estimate,
            tol,
        });
    }
    Ok(IntegrationResult {
        value,
        error_estimate,
        subdivisions: panels,
    })
}

/// Basis in which [`PolynomialCoeffs`] are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Monomial,
    Legendre,
}

/// A polynomial given by coefficients in a declared basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialCoeffs {
    pub basis: Basis,
    pub coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    pub fn monomial(coeffs: Vec<f64>) -> Self {
        Self {
            basis: Basis::Monomial,
            coeffs,
        }
    }

    pub fn legendre(coeffs: Vec<f64>) -> Self {
        Self {
            basis: Basis::Legendre,
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != 0.0)
            .unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Monomial => self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Basis::Legendre => {
                // forward recurrence sum; P_k stays bounded by 1 on [-1, 1]
                let mut acc = 0.0;
                let mut pk_m1 = 0.0;
                let mut pk = 1.0;
                for (k, c) in self.coeffs.iter().enumerate() {
                    acc += c * pk;
                    let next = legendre_next(k, x, pk, pk_m1);
                    pk_m1 = pk;
                    pk = next;
                }
                acc
            }
        }
    }
}

#[inline]
fn legendre_next(k: usize, x: f64, pk: f64, pk_m1: f64) -> f64 {
    let kf = k as f64;
    ((2.0 * kf + 1.0) * x * pk - kf * pk_m1) / (kf + 1.0)
}

/// Legendre polynomial P_n(x) by the three-term recurrence.
pub fn legendre_p(n: usize, x: f64) -> f64 {
    let mut pk_m1 = 0.0;
    let mut pk = 1.0;
    for k in 0..n {
        let next = legendre_next(k, x, pk, pk_m1);
        pk_m1 = pk;
        pk = next;
    }
    pk
}

/// The weighted inner product <p, r>_w to absolute tolerance `tol`.
pub fn weighted_inner_product(
    p: &PolynomialCoeffs,
    r: &PolynomialCoeffs,
    spec: &WeightSpec,
    tol: f64,
) -> Result<f64> {
    spec.validate()?;
    Ok(integrate(|x| p.eval(x) * r.eval(x), spec, tol)?.value)
}

/// The first `count` monomial moments of the weight: k-th entry is
/// the integral of x^k * w(x), k = 0..count-1.
pub fn moments(spec: &WeightSpec, count: usize, tol: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("moment count must be >= 1".into()));
    }
    spec.validate()?;
    (0..count)
        .map(|k| Ok(integrate(|x| x.powi(k as i32), spec, tol)?.value))
        .collect()
}

/// Moments of the modified weight (1 - x) w(x); used by the recurrence tests.
pub fn modified_moments(spec: &WeightSpec, count: usize, tol: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("moment count must be >= 1".into()));
    }
    spec.validate()?;
    let wt = crate::weights::ModifiedWeight::new(spec.clone());
    (0..count)
        .map(|k| Ok(integrate(|x| x.powi(k as i32), &wt, tol)?.value))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::ModifiedWeight;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_weight_unit_integrand() {
        let r = integrate(|_| 1.0, &WeightSpec::Constant, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-13);
        assert!(r.error_estimate <= 1e-12);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let r = integrate(|x| x, &WeightSpec::Constant, 1e-12).unwrap();
        assert!(r.value.abs() <= 1e-13);
    }

    #[test]
    fn modified_constant_weight() {
        // int x (1 - x) dx = -2/3, exact antiderivative oracle
        let wt = ModifiedWeight::new(WeightSpec::Constant);
        let r = integrate(|x| x, &wt, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, -2.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn inner_product_examples() {
        let one = PolynomialCoeffs::monomial(vec![1.0]);
        let x = PolynomialCoeffs::monomial(vec![0.0, 1.0]);
        assert_abs_diff_eq!(
            weighted_inner_product(&one, &one, &WeightSpec::Constant, 1e-12).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert!(
            weighted_inner_product(&x, &one, &WeightSpec::Constant, 1e-12)
                .unwrap()
                .abs()
                <= 1e-12
        );
        // int x^2 exp(-(x+1)) dx = 1 - 5 e^{-2} by two integrations by parts;
        // the adaptive run must agree with the closed form
        let w = WeightSpec::Exp { rho: 1.0, tau: 1.0 };
        let closed = 1.0 - 5.0 * (-2.0f64).exp();
        assert_abs_diff_eq!(
            weighted_inner_product(&x, &x, &w, 1e-12).unwrap(),
            closed,
            epsilon = 1e-11
        );
    }

    #[test]
    fn moment_examples() {
        let m = moments(&WeightSpec::Constant, 3, 1e-12).unwrap();
        assert_abs_diff_eq!(m[0], 2.0, epsilon = 1e-12);
        assert!(m[1].abs() <= 1e-12);
        assert_abs_diff_eq!(m[2], 2.0 / 3.0, epsilon = 1e-12);

        let mm = modified_moments(&WeightSpec::Constant, 2, 1e-12).unwrap();
        assert_abs_diff_eq!(mm[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mm[1], -2.0 / 3.0, epsilon = 1e-12);

        let e = moments(&WeightSpec::Exp { rho: 1.0, tau: 0.0 }, 1, 1e-12).unwrap();
        assert_abs_diff_eq!(e[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn jacobi_singular_endpoint() {
        // int (1-x)^{-1/2} dx over (-1,1) = 2 sqrt(2); the inverse-square-root
        // singularity caps the attainable panel accuracy near machine
        // resolution of 1 - x, so the tolerance here is modest
        let w = WeightSpec::Jacobi {
            alpha: -0.5,
            beta: 0.0,
        };
        let r = integrate(|_| 1.0, &w, 1e-6).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 * 2.0f64.sqrt(), epsilon = 1e-6);
    }

    #[test]
    fn jacobi_half_exponent_tight_tolerance() {
        // int (1-x)^{1/2} dx = (2/3) 2^{3/2}
        let w = WeightSpec::Jacobi {
            alpha: 0.5,
            beta: 0.0,
        };
        let r = integrate(|_| 1.0, &w, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 / 3.0 * 2.0f64.sqrt() * 2.0, epsilon = 1e-11);
    }

    #[test]
    fn positivity_of_squares() {
        for w in [
            WeightSpec::Constant,
            WeightSpec::Exp { rho: 1.0, tau: 2.0 },
        ] {
            let r = integrate(|x| (x - 0.3) * (x - 0.3), &w, 1e-12).unwrap();
            assert!(r.value >= 0.0);
        }
    }

    #[test]
    fn legendre_values() {
        assert_abs_diff_eq!(legendre_p(2, 1.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(legendre_p(2, 0.0), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(legendre_p(3, 0.5), 0.5 * (5.0 * 0.125 - 3.0 * 0.5), epsilon = 1e-15);
    }

    #[test]
    fn legendre_basis_polynomial_eval() {
        // 1 + 2 P_1 + 3 P_2 at x: 1 + 2x + 3 (3x^2 - 1)/2
        let p = PolynomialCoeffs::legendre(vec![1.0, 2.0, 3.0]);
        for x in [-0.7, 0.0, 0.4, 1.0] {
            let expect = 1.0 + 2.0 * x + 1.5 * (3.0 * x * x - 1.0);
            assert_abs_diff_eq!(p.eval(x), expect, epsilon = 1e-14);
        }
        assert_eq!(p.degree(), 2);
        assert_eq!(PolynomialCoeffs::monomial(vec![0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn budget_exhaustion_reports_accuracy_error() {
        let res = integrate_with_budget(
            |x| (1.0 / (1.0 - x)).sqrt().min(1e12),
            &WeightSpec::Constant,
            1e-14,
            &[],
            4,
        );
        assert!(matches!(res, Err(Error::Accuracy { .. })));
    }
}
