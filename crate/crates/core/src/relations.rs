//! The deterministic governance equations and a reproducible forward
//! Monte Carlo estimator for their expectations under input uncertainty.
//!
//! Welfare is `w = alpha*d + beta*t + gamma*d*t`, trust/credibility is
//! `c = delta*t`, and effectiveness is `e = alpha*t + beta*c + gamma*t*c`.
//! The estimator draws Democracy and Transparency independently, pushes
//! each draw through the equations, and reports means with standard errors
//! and 95% intervals. Every draw is a pure function of `(seed, index)` and
//! sums are reduced over a fixed binary tree, so reports are bit-identical
//! across runs and across worker counts.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Errors raised by the governance relations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelationsError {
    #[error("sample count must be at least 1")]
    EmptySampleCount,
    #[error("coefficient '{0}' must be finite")]
    NonFiniteCoefficient(&'static str),
    #[error("invalid {kind} distribution: {reason}")]
    InvalidDistribution { kind: &'static str, reason: String },
}

/// Influence coefficients. Welfare and effectiveness read `alpha`, `beta`
/// and `gamma`; trust reads `delta`. Each equation may carry its own
/// instance, or one instance can be shared across all three.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Coefficients {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self, RelationsError> {
        for (name, value) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if !value.is_finite() {
                return Err(RelationsError::NonFiniteCoefficient(name));
            }
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }
}

/// Social welfare from democracy, transparency and their interaction.
pub fn welfare(d: f64, t: f64, coef: &Coefficients) -> f64 {
    coef.alpha * d + coef.beta * t + coef.gamma * d * t
}

/// Trust and credibility, proportional to transparency.
pub fn trust_credibility(t: f64, coef: &Coefficients) -> f64 {
    coef.delta * t
}

/// Governance effectiveness from transparency, trust and their interaction.
pub fn effectiveness(t: f64, c: f64, coef: &Coefficients) -> f64 {
    coef.alpha * t + coef.beta * c + coef.gamma * t * c
}

/// The joint deterministic state: inputs plus the three derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GovernanceState {
    pub d: f64,
    pub t: f64,
    pub w: f64,
    pub c: f64,
    pub e: f64,
}

/// Evaluates the equation chain at one `(d, t)` point.
pub fn evaluate_state(
    d: f64,
    t: f64,
    welfare_coef: &Coefficients,
    trust_coef: &Coefficients,
    eff_coef: &Coefficients,
) -> GovernanceState {
    let w = welfare(d, t, welfare_coef);
    let c = trust_credibility(t, trust_coef);
    let e = effectiveness(t, c, eff_coef);
    GovernanceState { d, t, w, c, e }
}

impl GovernanceState {
    /// Inputs are expected in `[0, 1]` and outputs are not clamped; values
    /// outside the unit interval are reported as warnings, never rejected.
    pub fn unit_range_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        for (name, value) in [("d", self.d), ("t", self.t)] {
            if !(0.0..=1.0).contains(&value) {
                warnings.push(format!("input {name} = {value} lies outside [0, 1]"));
            }
        }
        for (name, value) in [("w", self.w), ("c", self.c), ("e", self.e)] {
            if !(0.0..=1.0).contains(&value) {
                warnings.push(format!(
                    "{name} = {value} lies outside [0, 1]; consider rescaling coefficients"
                ));
            }
        }
        warnings
    }
}

/// Marginal distribution of one input variable; inputs are sampled
/// independently of each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DistributionSpec {
    Point { value: f64 },
    Uniform { lo: f64, hi: f64 },
    Triangular { a: f64, b: f64, c: f64 },
}

impl DistributionSpec {
    pub fn point(value: f64) -> Result<Self, RelationsError> {
        if !value.is_finite() {
            return Err(RelationsError::InvalidDistribution {
                kind: "point",
                reason: format!("value {value} is not finite"),
            });
        }
        Ok(Self::Point { value })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self, RelationsError> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(RelationsError::InvalidDistribution {
                kind: "uniform",
                reason: format!("bounds must be finite with lo < hi (got {lo}, {hi})"),
            });
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, RelationsError> {
        if [a, b, c].iter().any(|v| !v.is_finite()) || !(a <= b && b <= c) || a == c {
            return Err(RelationsError::InvalidDistribution {
                kind: "triangular",
                reason: format!("parameters must be finite with a <= b <= c and a < c (got {a}, {b}, {c})"),
            });
        }
        Ok(Self::Triangular { a, b, c })
    }

    /// Maps one uniform draw `u` in `[0, 1)` through the inverse CDF.
    fn sample(&self, u: f64) -> f64 {
        match *self {
            Self::Point { value } => value,
            Self::Uniform { lo, hi } => lo + (hi - lo) * u,
            Self::Triangular { a, b, c } => {
                let split = (b - a) / (c - a);
                if u < split {
                    a + (u * (c - a) * (b - a)).sqrt()
                } else {
                    c - ((1.0 - u) * (c - a) * (c - b)).sqrt()
                }
            }
        }
    }
}

/// Mean, standard error and 95% confidence interval of one quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateSummary {
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl EstimateSummary {
    pub fn contains(&self, value: f64) -> bool {
        (self.ci_low..=self.ci_high).contains(&value)
    }
}

/// Monte Carlo expectations of welfare, trust and effectiveness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n: u64,
    pub seed: u64,
    pub welfare: EstimateSummary,
    pub trust: EstimateSummary,
    pub effectiveness: EstimateSummary,
}

/// Streaming statistics for one quantity. Sums combine in a fixed tree
/// order; min/max make degenerate (constant) sample sets exact.
#[derive(Debug, Clone, Copy)]
struct Accumulator {
    sum: f64,
    sum_sq: f64,
    min: f64,
    max: f64,
}

impl Accumulator {
    fn empty() -> Self {
        Self {
            sum: 0.0,
            sum_sq: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, value: f64) {
        self.sum += value;
        self.sum_sq += value * value;
        self.min = self.min.min(value);
        self.max = self.max.max(value);
    }

    fn merge(self, other: Self) -> Self {
        Self {
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
        }
    }

    fn summary(&self, n: u64) -> EstimateSummary {
        // A constant sample has zero spread and its mean exactly; this
        // also sidesteps float cancellation for point distributions.
        if self.min == self.max {
            return EstimateSummary {
                mean: self.min,
                std_error: 0.0,
                ci_low: self.min,
                ci_high: self.min,
            };
        }
        let n_f = n as f64;
        let mean = self.sum / n_f;
        let variance = ((self.sum_sq - n_f * mean * mean) / (n_f - 1.0)).max(0.0);
        let std_error = (variance / n_f).sqrt();
        let half_width = 1.96 * std_error;
        EstimateSummary {
            mean,
            std_error,
            ci_low: mean - half_width,
            ci_high: mean + half_width,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Totals {
    w: Accumulator,
    c: Accumulator,
    e: Accumulator,
}

impl Totals {
    fn empty() -> Self {
        Self {
            w: Accumulator::empty(),
            c: Accumulator::empty(),
            e: Accumulator::empty(),
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            w: self.w.merge(other.w),
            c: self.c.merge(other.c),
            e: self.e.merge(other.e),
        }
    }
}

struct McContext {
    key: [u8; 32],
    d_dist: DistributionSpec,
    t_dist: DistributionSpec,
    welfare_coef: Coefficients,
    trust_coef: Coefficients,
    eff_coef: Coefficients,
}

/// One uniform draw in `[0, 1)` from the top 53 bits of a word.
fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl McContext {
    /// The draw for sample `index` depends only on `(seed, index)`: the
    /// seed keys the ChaCha stream family and the index selects the stream.
    fn sample(&self, index: u64) -> (f64, f64, f64) {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        let d = self.d_dist.sample(unit_f64(rng.next_u64()));
        let t = self.t_dist.sample(unit_f64(rng.next_u64()));
        let w = welfare(d, t, &self.welfare_coef);
        let c = trust_credibility(t, &self.trust_coef);
        let e = effectiveness(t, c, &self.eff_coef);
        (w, c, e)
    }

    /// Reduces `[start, end)` over a binary tree whose shape depends only
    /// on the range, so the float result is independent of how rayon
    /// schedules the two halves.
    fn reduce(&self, start: u64, end: u64) -> Totals {
        const LEAF: u64 = 8192;
        if end - start <= LEAF {
            let mut totals = Totals::empty();
            for index in start..end {
                let (w, c, e) = self.sample(index);
                totals.w.push(w);
                totals.c.push(c);
                totals.e.push(e);
            }
            totals
        } else {
            let mid = start + (end - start) / 2;
            let (left, right) =
                rayon::join(|| self.reduce(start, mid), || self.reduce(mid, end));
            left.merge(right)
        }
    }
}

/// Estimates `E[w]`, `E[c]` and `E[e]` from `n` independent draws of
/// `(d, t)`.
pub fn expectations_mc(
    d_dist: DistributionSpec,
    t_dist: DistributionSpec,
    welfare_coef: &Coefficients,
    trust_coef: &Coefficients,
    eff_coef: &Coefficients,
    n: u64,
    seed: u64,
) -> Result<MonteCarloReport, RelationsError> {
    if n == 0 {
        return Err(RelationsError::EmptySampleCount);
    }
    let context = McContext {
        key: *ChaCha8Rng::seed_from_u64(seed).get_seed().as_ref(),
        d_dist,
        t_dist,
        welfare_coef: *welfare_coef,
        trust_coef: *trust_coef,
        eff_coef: *eff_coef,
    };
    let totals = context.reduce(0, n);
    Ok(MonteCarloReport {
        n,
        seed,
        welfare: totals.w.summary(n),
        trust: totals.c.summary(n),
        effectiveness: totals.e.summary(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coef(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Coefficients {
        Coefficients::new(alpha, beta, gamma, delta).unwrap()
    }

    #[test]
    fn welfare_matches_direct_arithmetic() {
        assert_eq!(welfare(1.0, 1.0, &coef(0.5, 0.5, 0.0, 0.0)), 1.0);
        assert_eq!(welfare(0.0, 0.0, &coef(0.9, -2.0, 7.0, 0.0)), 0.0);
        assert_eq!(welfare(0.5, 0.5, &coef(0.25, 0.25, 2.0, 0.0)), 0.75);
    }

    #[test]
    fn trust_is_proportional_to_transparency() {
        assert_eq!(trust_credibility(0.0, &coef(0.0, 0.0, 0.0, 3.5)), 0.0);
        assert_eq!(trust_credibility(0.8, &coef(0.0, 0.0, 0.0, 1.0)), 0.8);
        assert_eq!(trust_credibility(0.25, &coef(0.0, 0.0, 0.0, 2.0)), 0.5);
    }

    #[test]
    fn effectiveness_matches_direct_arithmetic() {
        assert_eq!(effectiveness(0.0, 0.0, &coef(1.0, 1.0, 1.0, 0.0)), 0.0);
        assert_eq!(effectiveness(0.3, 0.9, &coef(1.0, 0.0, 0.0, 0.0)), 0.3);
        assert_eq!(effectiveness(1.0, 1.0, &coef(1.0, 1.0, 1.0, 0.0)), 3.0);
    }

    #[test]
    fn welfare_is_symmetric_when_alpha_equals_beta() {
        let c = coef(0.4, 0.4, 1.7, 0.0);
        for (d, t) in [(0.1, 0.9), (0.33, 0.77), (1.25, -0.5)] {
            assert_eq!(welfare(d, t, &c), welfare(t, d, &c));
        }
    }

    #[test]
    fn coefficients_must_be_finite() {
        assert_eq!(
            Coefficients::new(f64::NAN, 0.0, 0.0, 0.0),
            Err(RelationsError::NonFiniteCoefficient("alpha"))
        );
        assert_eq!(
            Coefficients::new(0.0, 0.0, 0.0, f64::INFINITY),
            Err(RelationsError::NonFiniteCoefficient("delta"))
        );
    }

    #[test]
    fn out_of_range_states_warn_but_do_not_reject() {
        let c = coef(2.0, 2.0, 0.0, 1.0);
        let state = evaluate_state(1.5, 0.5, &c, &c, &c);
        let warnings = state.unit_range_warnings();
        assert!(warnings.iter().any(|w| w.starts_with("input d")));
        assert!(warnings.iter().any(|w| w.starts_with("w = 4")));

        let calm = evaluate_state(0.5, 0.5, &coef(0.5, 0.5, 0.0, 1.0), &c, &c);
        assert!(calm.unit_range_warnings().iter().all(|w| !w.starts_with("input")));
    }

    #[test]
    fn distribution_parameters_are_validated() {
        assert!(DistributionSpec::point(f64::NAN).is_err());
        assert!(DistributionSpec::uniform(1.0, 0.0).is_err());
        assert!(DistributionSpec::uniform(0.5, 0.5).is_err());
        assert!(DistributionSpec::triangular(0.0, 2.0, 1.0).is_err());
        assert!(DistributionSpec::triangular(1.0, 1.0, 1.0).is_err());
        assert!(DistributionSpec::triangular(0.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn inverse_cdf_hits_distribution_ends() {
        let u = DistributionSpec::uniform(2.0, 4.0).unwrap();
        assert_eq!(u.sample(0.0), 2.0);
        assert_eq!(u.sample(0.5), 3.0);

        let t = DistributionSpec::triangular(0.0, 0.5, 1.0).unwrap();
        assert_eq!(t.sample(0.0), 0.0);
        assert!((t.sample(0.5) - 0.5).abs() <= 1e-12);
        assert!((t.sample(0.999999) - 1.0).abs() <= 1e-2);
    }

    #[test]
    fn zero_samples_is_a_domain_error() {
        let c = coef(0.5, 0.5, 0.0, 1.0);
        let d = DistributionSpec::point(0.5).unwrap();
        assert_eq!(
            expectations_mc(d, d, &c, &c, &c, 0, 1),
            Err(RelationsError::EmptySampleCount)
        );
    }

    #[test]
    fn point_distributions_reproduce_the_deterministic_equations() {
        let wc = coef(0.3, 0.6, 1.1, 0.0);
        let tc = coef(0.0, 0.0, 0.0, 0.9);
        let ec = coef(0.2, 0.4, 0.8, 0.0);
        let report = expectations_mc(
            DistributionSpec::point(0.4).unwrap(),
            DistributionSpec::point(0.6).unwrap(),
            &wc,
            &tc,
            &ec,
            10_000,
            7,
        )
        .unwrap();
        let state = evaluate_state(0.4, 0.6, &wc, &tc, &ec);
        assert_eq!(report.welfare.mean, state.w);
        assert_eq!(report.trust.mean, state.c);
        assert_eq!(report.effectiveness.mean, state.e);
        for summary in [report.welfare, report.trust, report.effectiveness] {
            assert_eq!(summary.std_error, 0.0);
            assert_eq!(summary.ci_low, summary.ci_high);
        }
    }

    #[test]
    fn uniform_inputs_match_the_closed_forms() {
        let unit = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let tc = coef(0.0, 0.0, 0.0, 1.0);

        // E[w] = alpha/2 + beta/2 with gamma = 0
        let linear = coef(0.5, 0.5, 0.0, 0.0);
        let report = expectations_mc(unit, unit, &linear, &tc, &linear, 1_000_000, 11).unwrap();
        assert!(report.welfare.contains(0.5), "CI {:?}", report.welfare);

        // E[DT] = E[D]E[T] = 1/4 under independence, so E[w] = 0.75
        let interacting = coef(0.5, 0.5, 1.0, 0.0);
        let report =
            expectations_mc(unit, unit, &interacting, &tc, &interacting, 1_000_000, 11).unwrap();
        assert!(report.welfare.contains(0.75), "CI {:?}", report.welfare);
    }

    #[test]
    fn identical_seeds_are_bit_identical_and_different_seeds_differ() {
        let unit = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let c = coef(0.5, 0.5, 1.0, 0.8);
        let a = expectations_mc(unit, unit, &c, &c, &c, 50_000, 42).unwrap();
        let b = expectations_mc(unit, unit, &c, &c, &c, 50_000, 42).unwrap();
        assert_eq!(a, b);
        let other = expectations_mc(unit, unit, &c, &c, &c, 50_000, 43).unwrap();
        assert_ne!(a.welfare.mean, other.welfare.mean);
    }

    #[test]
    fn report_is_independent_of_worker_count() {
        let unit = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let c = coef(0.5, 0.5, 1.0, 0.8);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| expectations_mc(unit, unit, &c, &c, &c, 100_000, 5).unwrap())
        };
        let single = run(1);
        let multi = run(4);
        assert_eq!(single, multi);
        assert_eq!(
            single.welfare.mean.to_bits(),
            multi.welfare.mean.to_bits()
        );
    }

    #[test]
    fn closed_form_stays_within_four_standard_errors_across_seeds() {
        let unit = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let c = coef(0.5, 0.5, 1.0, 1.0);
        let mut hits = 0;
        for seed in 0..100 {
            let report = expectations_mc(unit, unit, &c, &c, &c, 10_000, seed).unwrap();
            if (report.welfare.mean - 0.75).abs() <= 4.0 * report.welfare.std_error {
                hits += 1;
            }
        }
        assert!(hits >= 99, "only {hits}/100 seeds within 4 standard errors");
    }

    #[test]
    fn triangular_sampling_converges_to_its_mean() {
        let tri = DistributionSpec::triangular(0.0, 0.2, 1.0).unwrap();
        let c = coef(1.0, 0.0, 0.0, 1.0);
        // E[d] = (a + b + c) / 3 = 0.4 and w = d under these coefficients
        let report = expectations_mc(tri, tri, &c, &c, &c, 200_000, 3).unwrap();
        assert!(
            report.welfare.contains(0.4),
            "triangular mean CI {:?}",
            report.welfare
        );
    }
}
