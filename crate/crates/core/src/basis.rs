//! Random sigmoid basis `σᵢ(x) = 1 / (1 + exp(-(αᵢ x + βᵢ)))`.
//!
//! Each neuron is fixed by an internal weight `αᵢ` (slope) and a bias `βᵢ`.
//! The inflection point `Cᵢ = -βᵢ/αᵢ` is the neuron's center; sampling draws
//! the center first and derives the bias from it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, ElmError, Result};

/// Half-width factor of the S-shape amplitude: `σ(±2.945) ≈ 0.95 / 0.05`.
pub const S_SHAPE_HALF_WIDTH: f64 = 2.945;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(invalid(
                "domain",
                format!("[{lo}, {hi}] is empty or degenerate"),
            ));
        }
        Ok(Interval { lo, hi })
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Which derivative of the basis to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    Value,
    First,
    Second,
}

impl TryFrom<u8> for Derivative {
    type Error = ElmError;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            0 => Ok(Derivative::Value),
            1 => Ok(Derivative::First),
            2 => Ok(Derivative::Second),
            _ => Err(invalid("order", format!("{order} is not one of 0, 1, 2"))),
        }
    }
}

/// Logistic function evaluated without overflow for any finite `z`.
#[inline]
pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Value, first and second derivative of `σ(αx + β)` with respect to `x`.
///
/// Uses `σ' = α σ (1-σ)` and `σ'' = α² σ (1-σ)(1-2σ)` with `1-σ` computed as
/// `σ(-z)` so neither factor cancels for large `|z|`.
#[inline]
pub fn sigmoid_jet(alpha: f64, beta: f64, x: f64) -> (f64, f64, f64) {
    let z = alpha * x + beta;
    let s = logistic(z);
    let q = logistic(-z);
    let sq = s * q;
    (s, alpha * sq, alpha * alpha * sq * (q - s))
}

/// Range `[C - 2.945/|α|, C + 2.945/|α|]` where a sigmoid goes from 5% to 95%.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SShapeInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SShapeInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// `n` sigmoid neurons with fixed internal weights and biases.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmoidBasis {
    alphas: Vec<f64>,
    betas: Vec<f64>,
    domain: Interval,
}

impl SigmoidBasis {
    /// Builds a basis from explicit parameters.
    ///
    /// Rejects empty or mismatched vectors, non-finite entries, repeated
    /// `(α, β)` pairs and neurons whose center falls outside `domain`.
    /// A zero slope is accepted and yields the constant neuron `σ(β)`.
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>, domain: Interval) -> Result<Self> {
        if alphas.is_empty() {
            return Err(invalid("n", "basis needs at least one neuron"));
        }
        if alphas.len() != betas.len() {
            return Err(ElmError::Dimension(format!(
                "{} slopes but {} biases",
                alphas.len(),
                betas.len()
            )));
        }
        for (i, (&a, &b)) in alphas.iter().zip(&betas).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(invalid(
                    "alphas",
                    format!("neuron {i} has non-finite parameters"),
                ));
            }
            if a != 0.0 && !domain.contains(-b / a) {
                return Err(invalid(
                    "betas",
                    format!("neuron {i} has center {} outside the domain", -b / a),
                ));
            }
        }
        let mut pairs: Vec<(u64, u64)> = alphas
            .iter()
            .zip(&betas)
            .map(|(a, b)| (a.to_bits(), b.to_bits()))
            .collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid(
                "alphas",
                "two neurons share the same (alpha, beta) pair",
            ));
        }
        Ok(SigmoidBasis {
            alphas,
            betas,
            domain,
        })
    }

    /// Draws a random basis.
    ///
    /// Slopes are uniform on `[-A, A]` with `A = (n - 10)/10 + 4` for a unit
    /// domain (scaled by `1/|domain|` otherwise). Centers are uniform on the
    /// open domain and biases follow as `β = -α C`. The generator is ChaCha8
    /// keyed by `seed` on stream `n`, so the draw is reproducible across
    /// platforms and independent of thread count.
    pub fn sample(n: usize, domain: Interval, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "basis needs at least one neuron"));
        }
        let domain = Interval::new(domain.lo, domain.hi)?;
        let max_slope = alpha_bound(n) / domain.length();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n as u64);

        let mut alphas = Vec::with_capacity(n);
        let mut betas = Vec::with_capacity(n);
        let mut seen = std::collections::HashSet::with_capacity(n);
        while alphas.len() < n {
            let alpha = max_slope * (2.0 * rng.random::<f64>() - 1.0);
            let u = rng.random::<f64>();
            if u == 0.0 {
                continue;
            }
            let center = domain.lo + u * domain.length();
            if center >= domain.hi {
                continue;
            }
            let beta = -alpha * center;
            if !seen.insert((alpha.to_bits(), beta.to_bits())) {
                continue;
            }
            alphas.push(alpha);
            betas.push(beta);
        }
        Ok(SigmoidBasis {
            alphas,
            betas,
            domain,
        })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Inflection point `-βᵢ/αᵢ`; `None` for a flat neuron.
    pub fn center(&self, i: usize) -> Option<f64> {
        let a = self.alphas[i];
        (a != 0.0).then(|| -self.betas[i] / a)
    }

    /// Evaluates every neuron (or one of its derivatives) at `x`.
    pub fn eval(&self, x: f64, order: Derivative) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len()];
        self.eval_into(x, order, &mut out)?;
        Ok(out)
    }

    /// Like [`eval`](Self::eval), writing into a caller-provided buffer.
    pub fn eval_into(&self, x: f64, order: Derivative, out: &mut [f64]) -> Result<()> {
        if !x.is_finite() {
            return Err(ElmError::NonFinite {
                what: "basis argument",
                x,
                value: x,
            });
        }
        if out.len() != self.len() {
            return Err(ElmError::Dimension(format!(
                "output buffer has length {}, basis has {} neurons",
                out.len(),
                self.len()
            )));
        }
        for ((o, &a), &b) in out.iter_mut().zip(&self.alphas).zip(&self.betas) {
            let (s, d1, d2) = sigmoid_jet(a, b, x);
            *o = match order {
                Derivative::Value => s,
                Derivative::First => d1,
                Derivative::Second => d2,
            };
        }
        Ok(())
    }

    /// Value and derivatives of neuron `i` at `x`.
    #[inline]
    pub fn jet(&self, i: usize, x: f64) -> (f64, f64, f64) {
        sigmoid_jet(self.alphas[i], self.betas[i], x)
    }

    /// S-shape amplitude of neuron `i`.
    pub fn s_shape_interval(&self, i: usize) -> Result<SShapeInterval> {
        if i >= self.len() {
            return Err(invalid(
                "i",
                format!("index {i} out of range for {} neurons", self.len()),
            ));
        }
        let center = self
            .center(i)
            .ok_or_else(|| invalid("alpha", format!("neuron {i} is flat (alpha = 0)")))?;
        let half = S_SHAPE_HALF_WIDTH / self.alphas[i].abs();
        Ok(SShapeInterval {
            lo: center - half,
            hi: center + half,
        })
    }
}

/// Largest slope magnitude drawn for `n` neurons on a unit domain.
pub fn alpha_bound(n: usize) -> f64 {
    (n as f64 - 10.0) / 10.0 + 4.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn single(alpha: f64, beta: f64) -> SigmoidBasis {
        SigmoidBasis::new(vec![alpha], vec![beta], Interval::new(-10.0, 10.0).unwrap()).unwrap()
    }

    #[test]
    fn slope_range_grows_with_n() {
        assert_eq!(alpha_bound(10), 4.0);
        assert_eq!(alpha_bound(20), 5.0);
        assert_eq!(alpha_bound(1280), 131.0);
        for (n, bound) in [(10, 4.0), (20, 5.0)] {
            let b = SigmoidBasis::sample(n, Interval::UNIT, 3).unwrap();
            assert!(b.alphas().iter().all(|a| a.abs() <= bound));
        }
    }

    #[test]
    fn bias_is_minus_slope_times_center() {
        for seed in 0..5 {
            let b = SigmoidBasis::sample(50, Interval::UNIT, seed).unwrap();
            for i in 0..b.len() {
                let c = b.center(i).unwrap();
                assert!(c > 0.0 && c < 1.0);
                assert!((b.betas()[i] + b.alphas()[i] * c).abs() <= 1e-15 * b.alphas()[i].abs());
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = SigmoidBasis::sample(64, Interval::UNIT, 42).unwrap();
        let b = SigmoidBasis::sample(64, Interval::UNIT, 42).unwrap();
        assert_eq!(a, b);
        let c = SigmoidBasis::sample(64, Interval::UNIT, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_rejects_bad_input() {
        assert!(SigmoidBasis::sample(0, Interval::UNIT, 1).is_err());
        assert!(SigmoidBasis::sample(4, Interval { lo: 1.0, hi: 1.0 }, 1).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
    }

    #[test]
    fn new_rejects_duplicates_and_mismatch() {
        let d = Interval::UNIT;
        assert!(SigmoidBasis::new(vec![2.0, 2.0], vec![-1.0, -1.0], d).is_err());
        assert!(SigmoidBasis::new(vec![2.0], vec![-1.0, 0.0], d).is_err());
        assert!(SigmoidBasis::new(vec![], vec![], d).is_err());
        // center 2 is outside [0, 1]
        assert!(SigmoidBasis::new(vec![1.0], vec![-2.0], d).is_err());
        // flat neuron is allowed
        assert!(SigmoidBasis::new(vec![0.0, 1.0], vec![0.3, -0.5], d).is_ok());
    }

    #[test]
    fn pointwise_values() {
        assert_eq!(
            single(1.0, 0.0).eval(0.0, Derivative::Value).unwrap()[0],
            0.5
        );
        assert_eq!(
            single(4.0, 0.0).eval(0.0, Derivative::First).unwrap()[0],
            1.0
        );
        assert_eq!(
            single(7.0, 0.0).eval(0.0, Derivative::Second).unwrap()[0],
            0.0
        );
        let b = SigmoidBasis::new(vec![100.0], vec![-50.0], Interval::UNIT).unwrap();
        let hi = b.eval(0.5 + 0.02945, Derivative::Value).unwrap()[0];
        let lo = b.eval(0.5 - 0.02945, Derivative::Value).unwrap()[0];
        assert!((hi - 0.95).abs() < 1e-3, "{hi}");
        assert!((lo - 0.05).abs() < 1e-3, "{lo}");
    }

    #[test]
    fn order_and_argument_checks() {
        assert!(Derivative::try_from(3).is_err());
        assert_eq!(Derivative::try_from(2).unwrap(), Derivative::Second);
        let b = single(1.0, 0.0);
        assert!(b.eval(f64::NAN, Derivative::Value).is_err());
        assert!(b.eval(f64::INFINITY, Derivative::First).is_err());
    }

    #[test]
    fn saturates_without_nan() {
        for z in [-1e4, -800.0, 800.0, 1e4] {
            let (s, d1, d2) = sigmoid_jet(1.0, z, 0.0);
            assert!(s.is_finite() && d1.is_finite() && d2.is_finite());
            assert!(s == 0.0 || s == 1.0 || (s - 0.5).abs() > 0.49);
        }
        assert_eq!(logistic(1e4), 1.0);
        assert_eq!(logistic(-1e4), 0.0);
    }

    #[test]
    fn s_shape_examples() {
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        let b = SigmoidBasis::new(vec![100.0], vec![-50.0], Interval::UNIT).unwrap();
        let s = b.s_shape_interval(0).unwrap();
        assert!(close(s.lo, 0.47055) && close(s.hi, 0.52945));

        let s = single(1.0, 0.0).s_shape_interval(0).unwrap();
        assert!(close(s.lo, -2.945) && close(s.hi, 2.945));

        let b = SigmoidBasis::new(vec![-10.0], vec![3.0], Interval::UNIT).unwrap();
        let s = b.s_shape_interval(0).unwrap();
        assert!(close(s.lo, 0.0055) && close(s.hi, 0.5945));

        let flat = SigmoidBasis::new(vec![0.0], vec![0.2], Interval::UNIT).unwrap();
        assert!(flat.s_shape_interval(0).is_err());
        assert!(b.s_shape_interval(1).is_err());
    }

    proptest! {
        #[test]
        fn s_shape_endpoints_hit_five_and_ninety_five_percent(
            alpha in prop_oneof![-132.0..-0.1f64, 0.1..132.0f64],
            center in 0.0..1.0f64,
        ) {
            let b = SigmoidBasis::new(vec![alpha], vec![-alpha * center], Interval::UNIT).unwrap();
            let s = b.s_shape_interval(0).unwrap();
            prop_assert!(s.lo < s.hi);
            let (v_lo, v_hi) = (logistic(alpha * s.lo - alpha * center), logistic(alpha * s.hi - alpha * center));
            let (lo_target, hi_target) = if alpha > 0.0 { (0.05, 0.95) } else { (0.95, 0.05) };
            prop_assert!((v_lo - lo_target).abs() < 1e-3);
            prop_assert!((v_hi - hi_target).abs() < 1e-3);
        }

        #[test]
        fn values_stay_strictly_inside_unit_interval(seed in any::<u64>(), x in 0.0..=1.0f64) {
            let b = SigmoidBasis::sample(40, Interval::UNIT, seed).unwrap();
            for v in b.eval(x, Derivative::Value).unwrap() {
                prop_assert!(v > 0.0 && v < 1.0);
            }
        }

        #[test]
        fn monotone_in_direction_of_slope(
            // beyond |α| ≈ 36 the tails round to exactly 0 or 1
            alpha in prop_oneof![-25.0..-0.5f64, 0.5..25.0f64],
            center in 0.01..0.99f64,
        ) {
            let grid: Vec<f64> = (0..100).map(|j| j as f64 / 99.0).collect();
            let v: Vec<f64> = grid.iter().map(|&x| sigmoid_jet(alpha, -alpha * center, x).0).collect();
            for w in v.windows(2) {
                if alpha > 0.0 { prop_assert!(w[1] > w[0]); } else { prop_assert!(w[1] < w[0]); }
            }
        }

        #[test]
        fn curvature_changes_sign_at_center(
            alpha in prop_oneof![-132.0..-0.5f64, 0.5..132.0f64],
            center in 0.01..0.99f64,
        ) {
            let delta = 1e-3 / alpha.abs();
            let beta = -alpha * center;
            let left = sigmoid_jet(alpha, beta, center - delta).2;
            let right = sigmoid_jet(alpha, beta, center + delta).2;
            prop_assert!(left * right < 0.0);
        }
    }
}
