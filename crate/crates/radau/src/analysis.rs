//! Operational verification of the continuity of the rule in the weight,
//! the endpoint-weight bound chain for the exponential family, the
//! interval change-of-variables identity, and the uniform lower bound on
//! the lowest node.
//!
//! Per-grid-point work fans out through [`crate::par::map_slice`]; reports
//! are assembled in grid order regardless of completion order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::par::map_slice;
use crate::radau::{build_radau, ChiPolynomial, RadauRule};
use crate::weights::{self, WeightSpec};
use crate::{quadcore, Error, Result};

const SPOT_CHECK_SEED: u64 = 0x5EED_0001;
const SPOT_CHECK_COUNT: usize = 100;

/// Bounded real interval (a, b) with the affine map from (-1, 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!(
                "interval requires finite a < b, got ({a}, {b})"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// The affine image (a + b)/2 + (b - a)/2 * x, defined on [-1, 1].
    pub fn phi(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::OutsideDomain { x });
        }
        Ok(self.map_unchecked(x))
    }

    pub fn phi_inv(&self, t: f64) -> f64 {
        (2.0 * t - (self.a + self.b)) / (self.b - self.a)
    }

    fn map_unchecked(&self, x: f64) -> f64 {
        0.5 * (self.a + self.b) + 0.5 * (self.b - self.a) * x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One step of the continuity experiment.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ContinuityStep {
    pub l1_distance: f64,
    pub max_node_deviation: f64,
    pub max_weight_deviation: f64,
}

/// Deviation table for a sequence of perturbed weights approaching a
/// target, sorted by decreasing L^1 distance.
#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub steps: Vec<ContinuityStep>,
    pub threshold: f64,
    pub verdict: Verdict,
}

/// Build the rule for the target and every perturbation; report per-step
/// node and weight deviations. The verdict passes when the final step is
/// both below `threshold` and the minimum of its sequence.
pub fn continuity_experiment(
    target: &WeightSpec,
    perturbations: &[WeightSpec],
    q: usize,
    tol: f64,
    threshold: f64,
) -> Result<ContinuityReport> {
    if perturbations.is_empty() {
        return Err(Error::InvalidArgument(
            "continuity experiment needs at least one perturbation".into(),
        ));
    }
    let reference = build_radau(target, q, tol)?;
    let computed: Vec<Result<ContinuityStep>> = map_slice(perturbations, |w| {
        let rule = build_radau(w, q, tol)?;
        let dist = weights::l1_distance(w, target, tol)?;
        Ok(step_deviation(dist, &rule, &reference))
    });
    let mut steps = Vec::with_capacity(perturbations.len());
    for (idx, s) in computed.into_iter().enumerate() {
        steps.push(s.map_err(|e| {
            Error::Inconsistent(format!("perturbation {idx} failed: {e}"))
        })?);
    }
    steps.sort_by(|a, b| b.l1_distance.total_cmp(&a.l1_distance));

    let last = steps.last().unwrap();
    let min_node = steps
        .iter()
        .fold(f64::INFINITY, |m, s| m.min(s.max_node_deviation));
    let min_weight = steps
        .iter()
        .fold(f64::INFINITY, |m, s| m.min(s.max_weight_deviation));
    let pass = last.max_node_deviation <= threshold
        && last.max_weight_deviation <= threshold
        && last.max_node_deviation <= min_node
        && last.max_weight_deviation <= min_weight;
    Ok(ContinuityReport {
        steps,
        threshold,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}

fn step_deviation(dist: f64, rule: &RadauRule, reference: &RadauRule) -> ContinuityStep {
    let max_node = rule
        .nodes
        .iter()
        .zip(&reference.nodes)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let max_weight = rule
        .weights
        .iter()
        .zip(&reference.weights)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    ContinuityStep {
        l1_distance: dist,
        max_node_deviation: max_node,
        max_weight_deviation: max_weight,
    }
}

/// Per-tau record of the endpoint-weight bound chain.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChiBoundEntry {
    pub tau: f64,
    pub r0: f64,
    pub omega_q: f64,
    /// Adaptive value of the full chi^2 integral against w_tau.
    pub adaptive_value: f64,
    /// Adaptive value of the truncated (interior-roots-only) product
    /// integral; a degree-2q polynomial the rule integrates exactly.
    pub truncated_integral: f64,
    /// omega_q * prod((1 - r_j) / (1 + r_j))^2 computed from the rule alone.
    pub closed_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiBoundReport {
    pub rho: f64,
    pub q: usize,
    pub entries: Vec<ChiBoundEntry>,
    pub sup_adaptive: f64,
    pub verdict: Verdict,
    /// tau values at which a chain inequality failed, if any.
    pub failures: Vec<f64>,
}

impl ChiBoundReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,r0,omega_q,a,b,c\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                e.tau, e.r0, e.omega_q, e.adaptive_value, e.truncated_integral, e.closed_bound
            ));
        }
        out
    }
}

/// Verify, on a finite tau grid, the bound chain behind the uniform
/// finiteness of the chi^2 integrals: A <= B and B = C, where A is the
/// full integral, B the truncated-product integral and C the closed
/// endpoint-weight expression.
pub fn chi_bound_chain(
    rho: f64,
    tau_grid: &[f64],
    q: usize,
    tol: f64,
) -> Result<ChiBoundReport> {
    if tau_grid.is_empty() {
        return Err(Error::InvalidArgument("tau grid must be nonempty".into()));
    }
    if tau_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("tau grid must be finite".into()));
    }
    let itol = (tol * 1e-3).clamp(1e-14, 1e-12);
    let computed: Vec<Result<ChiBoundEntry>> = map_slice(tau_grid, |tau| {
        let spec = WeightSpec::Exp { rho, tau: *tau };
        let rule = build_radau(&spec, q, itol)?;
        let chi = ChiPolynomial::from_rule(&rule);
        let a = quadcore::integrate(|x| chi.eval(x).powi(2), &spec, itol)?.value;
        let b = quadcore::integrate(|x| chi.eval_interior(x).powi(2), &spec, itol)?.value;
        let c = rule.weights[q]
            * rule.nodes[..q]
                .iter()
                .map(|r| ((1.0 - r) / (1.0 + r)).powi(2))
                .product::<f64>();
        Ok(ChiBoundEntry {
            tau: *tau,
            r0: rule.nodes[0],
            omega_q: rule.weights[q],
            adaptive_value: a,
            truncated_integral: b,
            closed_bound: c,
        })
    });
    let mut entries = Vec::with_capacity(tau_grid.len());
    for e in computed {
        entries.push(e?);
    }

    let mut failures = Vec::new();
    let mut sup_adaptive = 0.0f64;
    for e in &entries {
        sup_adaptive = sup_adaptive.max(e.adaptive_value);
        let chain_ok = e.adaptive_value <= e.truncated_integral + tol;
        let identity_ok =
            (e.truncated_integral - e.closed_bound).abs() <= tol * e.closed_bound.max(1.0);
        let positive = e.truncated_integral >= 0.0 && e.closed_bound >= 0.0;
        if !(chain_ok && identity_ok && positive) {
            failures.push(e.tau);
        }
    }
    let verdict = if failures.is_empty() && sup_adaptive.is_finite() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ChiBoundReport {
        rho,
        q,
        entries,
        sup_adaptive,
        verdict,
        failures,
    })
}

/// Both sides of the interval change-of-variables identity.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScalingCheck {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub q: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
    pub verdict: Verdict,
}

/// Compare the scaled integral over I of chi_{|I|}(phi^-1(t))^2
/// exp(-2 rho (t - inf I)) with its reference-interval form
/// (1/2) int chi_{|I|}^2 w_{|I|}; the two are equal up to quadrature error.
pub fn interval_scaling_check(
    interval: &Interval,
    rho: f64,
    q: usize,
    tol: f64,
) -> Result<ScalingCheck> {
    let len = interval.length();
    let itol = (tol * 1e-3).clamp(1e-14, 1e-12);
    let spec = WeightSpec::Exp { rho, tau: len };
    let rule = build_radau(&spec, q, itol)?;
    let chi = ChiPolynomial::from_rule(&rule);

    // right side on the reference interval, weight evaluated through the spec
    let rhs = 0.5 * quadcore::integrate(|x| chi.eval(x).powi(2), &spec, itol)?.value;

    // left side over I, pulled back through the affine map; the integrand is
    // assembled in t-coordinates so the phi / phi_inv pair is exercised
    let a = interval.a();
    let pulled = quadcore::integrate(
        |x| {
            let t = interval.map_unchecked(x);
            let back = interval.phi_inv(t);
            chi.eval(back).powi(2) * (-2.0 * rho * (t - a)).exp()
        },
        &WeightSpec::Constant,
        itol,
    )?
    .value;
    let lhs = (1.0 / len) * (len / 2.0) * pulled;

    let defect = (lhs - rhs).abs();
    Ok(ScalingCheck {
        a: interval.a(),
        b: interval.b(),
        rho,
        q,
        lhs,
        rhs,
        defect,
        verdict: if defect <= tol * rhs.abs().max(1.0) {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NodeConstantGridPoint {
    pub tau: f64,
    pub r0: f64,
}

/// Uniform lower bound on the distance of the lowest node from -1 over a
/// tau grid, with randomized interval spot checks.
#[derive(Clone, Debug, Serialize)]
pub struct NodeConstantEstimate {
    pub c: f64,
    /// Sharp grid minimum of r_0 + 1 before the safety factor.
    pub min_gap: f64,
    pub grid: Vec<NodeConstantGridPoint>,
    pub spot_checks_total: usize,
    pub spot_checks_passed: usize,
    pub verdict: Verdict,
}

/// Estimate the constant c with phi_I(r_0) - inf I >= c |I| for all
/// intervals with |I| <= horizon and tau in [0, horizon]: the grid minimum
/// of r_0 + 1 times a 0.99 safety factor, cross-checked on random
/// (interval, tau) pairs.
pub fn estimate_node_constant(
    rho: f64,
    horizon: f64,
    q: usize,
    grid_size: usize,
    tol: f64,
) -> Result<NodeConstantEstimate> {
    if grid_size == 0 {
        return Err(Error::InvalidArgument("grid size must be >= 1".into()));
    }
    if !(horizon >= 0.0) {
        return Err(Error::InvalidArgument("horizon must be nonnegative".into()));
    }
    if horizon > 0.0 && grid_size < 2 {
        return Err(Error::InvalidArgument(
            "a positive horizon needs at least two grid points".into(),
        ));
    }
    let taus: Vec<f64> = if grid_size == 1 {
        vec![0.0]
    } else {
        (0..grid_size)
            .map(|i| horizon * i as f64 / (grid_size - 1) as f64)
            .collect()
    };
    let computed: Vec<Result<NodeConstantGridPoint>> = map_slice(&taus, |tau| {
        let rule = build_radau(&WeightSpec::Exp { rho, tau: *tau }, q, tol)?;
        Ok(NodeConstantGridPoint {
            tau: *tau,
            r0: rule.nodes[0],
        })
    });
    let mut grid = Vec::with_capacity(taus.len());
    for g in computed {
        grid.push(g?);
    }

    let min_gap = grid.iter().fold(f64::INFINITY, |m, g| m.min(g.r0 + 1.0));
    // phi_I(r_0) - inf I = (|I|/2)(r_0 + 1), so the sharp uniform constant
    // carries the affine half factor
    let c = 0.99 * 0.5 * min_gap;
    if !(c > 0.0) {
        return Err(Error::Inconsistent(format!(
            "lowest-node constant {c} is not positive"
        )));
    }

    // the identity phi_I(r_0) - inf I = (|I|/2)(r_0 + 1) makes each check a
    // direct comparison against c |I|
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
    let mut passed = 0usize;
    let total = if horizon > 0.0 { SPOT_CHECK_COUNT } else { 0 };
    for _ in 0..total {
        let g = &grid[rng.gen_range(0..grid.len())];
        let len = rng.gen_range(f64::MIN_POSITIVE..=1.0) * horizon;
        let start = rng.gen_range(-horizon..=horizon);
        let interval = Interval::new(start, start + len)?;
        let image = interval.phi(g.r0)?;
        if image - interval.a() >= c * interval.length() {
            passed += 1;
        }
    }
    Ok(NodeConstantEstimate {
        c,
        min_gap,
        grid,
        spot_checks_total: total,
        spot_checks_passed: passed,
        verdict: if passed == total {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}
