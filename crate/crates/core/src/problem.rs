//! Constant-coefficient boundary-value problems on `[0, 1]`:
//!
//! ```text
//! -μ u'' + γ u' + λ u = f          in (0, 1)
//! ν₀ u'(0) + ρ₀ u(0) = g₀
//! ν₁ u'(1) + ρ₁ u(1) = g₁
//! ```
//!
//! plus the benchmark suite with closed-form solutions.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, ElmError, Result};

/// Shared scalar function on `[0, 1]`.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Robin condition `ν u' + ρ u = g` at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinBc {
    pub nu: f64,
    pub rho: f64,
    pub g: f64,
}

impl RobinBc {
    pub fn dirichlet(value: f64) -> Self {
        RobinBc {
            nu: 0.0,
            rho: 1.0,
            g: value,
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        self.nu == 0.0
    }
}

#[derive(Clone)]
pub struct LinearBvp {
    pub mu: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub forcing: ScalarFn,
    pub left: RobinBc,
    pub right: RobinBc,
}

impl fmt::Debug for LinearBvp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearBvp")
            .field("mu", &self.mu)
            .field("gamma", &self.gamma)
            .field("lambda", &self.lambda)
            .field("left", &self.left)
            .field("right", &self.right)
            .finish_non_exhaustive()
    }
}

impl LinearBvp {
    pub fn new(
        mu: f64,
        gamma: f64,
        lambda: f64,
        forcing: ScalarFn,
        left: RobinBc,
        right: RobinBc,
    ) -> Result<Self> {
        for (name, v) in [("mu", mu), ("gamma", gamma), ("lambda", lambda)] {
            if !v.is_finite() {
                return Err(invalid(name, format!("{v} is not finite")));
            }
        }
        for (name, bc) in [("bc_left", left), ("bc_right", right)] {
            if ![bc.nu, bc.rho, bc.g].iter().all(|v| v.is_finite()) {
                return Err(invalid(name, "boundary coefficients must be finite"));
            }
            if bc.nu == 0.0 && bc.rho == 0.0 {
                return Err(invalid(name, "nu and rho cannot both vanish"));
            }
        }
        Ok(LinearBvp {
            mu,
            gamma,
            lambda,
            forcing,
            left,
            right,
        })
    }

    pub fn forcing(&self, x: f64) -> f64 {
        (self.forcing)(x)
    }

    /// `-μ u'' + γ u' + λ u` for given pointwise derivatives.
    #[inline]
    pub fn apply(&self, u: f64, du: f64, d2u: f64) -> f64 {
        -self.mu * d2u + self.gamma * du + self.lambda * u
    }

    pub fn is_dirichlet(&self) -> bool {
        self.left.is_dirichlet() && self.right.is_dirichlet()
    }
}

/// Closed-form solution with its first two derivatives.
#[derive(Clone)]
pub struct ExactSolution {
    pub u: ScalarFn,
    pub du: ScalarFn,
    pub d2u: ScalarFn,
}

impl ExactSolution {
    pub fn new(
        u: impl Fn(f64) -> f64 + Send + Sync + 'static,
        du: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2u: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ExactSolution {
            u: Arc::new(u),
            du: Arc::new(du),
            d2u: Arc::new(d2u),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.u)(x)
    }

    pub fn d1(&self, x: f64) -> f64 {
        (self.du)(x)
    }

    pub fn d2(&self, x: f64) -> f64 {
        (self.d2u)(x)
    }
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ExactSolution { .. }")
    }
}

/// Stable identifiers for the shipped benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkKind {
    SinBump,
    Polynomial,
    AdvectionLayer,
    ReactionLayer,
    AtanLayer,
    GaussianPeak,
    Comb,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 7] = [
        BenchmarkKind::SinBump,
        BenchmarkKind::Polynomial,
        BenchmarkKind::AdvectionLayer,
        BenchmarkKind::ReactionLayer,
        BenchmarkKind::AtanLayer,
        BenchmarkKind::GaussianPeak,
        BenchmarkKind::Comb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::SinBump => "sin_bump",
            BenchmarkKind::Polynomial => "polynomial",
            BenchmarkKind::AdvectionLayer => "advection_layer",
            BenchmarkKind::ReactionLayer => "reaction_layer",
            BenchmarkKind::AtanLayer => "atan_layer",
            BenchmarkKind::GaussianPeak => "gaussian_peak",
            BenchmarkKind::Comb => "comb",
        }
    }

    /// Parameter names with their default values.
    pub fn default_params(self) -> &'static [(&'static str, f64)] {
        match self {
            BenchmarkKind::SinBump => &[("k", 1.0)],
            BenchmarkKind::Polynomial => &[("p", 10.0)],
            BenchmarkKind::AdvectionLayer => &[("mu", 1.0), ("gamma", 100.0)],
            BenchmarkKind::ReactionLayer => &[("mu", 1.0), ("lambda", 300.0)],
            BenchmarkKind::AtanLayer => &[("alpha", 60.0), ("x0", 4.0 / 9.0)],
            BenchmarkKind::GaussianPeak => &[("eps", 1e-3)],
            BenchmarkKind::Comb => &[("eps", 1.0 / (10.0 * PI))],
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BenchmarkKind {
    type Err = ElmError;

    fn from_str(s: &str) -> Result<Self> {
        BenchmarkKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ElmError::UnknownProblem(s.to_string()))
    }
}

/// A problem together with its exact solution.
#[derive(Debug, Clone)]
pub struct BenchmarkCase {
    pub kind: BenchmarkKind,
    pub bvp: LinearBvp,
    pub exact: ExactSolution,
    pub params: BTreeMap<&'static str, f64>,
}

impl BenchmarkCase {
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Builds a benchmark by name. Missing parameters take their defaults;
    /// unknown parameter names are rejected.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let kind: BenchmarkKind = name.parse()?;
        let defaults = kind.default_params();
        for key in params.keys() {
            if !defaults.iter().any(|(k, _)| k == key) {
                let valid: Vec<_> = defaults.iter().map(|(k, _)| *k).collect();
                return Err(ElmError::InvalidParameter {
                    name: "param",
                    reason: format!("`{key}` is not a parameter of {name} (expected {valid:?})"),
                });
            }
        }
        let get = |key: &str| {
            params.get(key).copied().unwrap_or_else(|| {
                defaults
                    .iter()
                    .find(|(k, _)| *k == key)
                    .map(|(_, v)| *v)
                    .unwrap()
            })
        };
        match kind {
            BenchmarkKind::SinBump => sin_bump(integer_param("k", get("k"))?),
            BenchmarkKind::Polynomial => polynomial(integer_param("p", get("p"))?),
            BenchmarkKind::AdvectionLayer => advection_layer(get("mu"), get("gamma")),
            BenchmarkKind::ReactionLayer => reaction_layer(get("mu"), get("lambda")),
            BenchmarkKind::AtanLayer => atan_layer(get("alpha"), get("x0")),
            BenchmarkKind::GaussianPeak => gaussian_peak(get("eps")),
            BenchmarkKind::Comb => comb(get("eps")),
        }
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }
}

fn integer_param(name: &'static str, v: f64) -> Result<u32> {
    if v.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&v) {
        return Err(invalid(name, format!("{v} is not a non-negative integer")));
    }
    Ok(v as u32)
}

fn fun(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

/// Assembles a Dirichlet case whose boundary data come from the exact solution.
fn dirichlet_case(
    kind: BenchmarkKind,
    mu: f64,
    gamma: f64,
    lambda: f64,
    forcing: ScalarFn,
    exact: ExactSolution,
    params: &[(&'static str, f64)],
) -> Result<BenchmarkCase> {
    let left = RobinBc::dirichlet(exact.value(0.0));
    let right = RobinBc::dirichlet(exact.value(1.0));
    Ok(BenchmarkCase {
        kind,
        bvp: LinearBvp::new(mu, gamma, lambda, forcing, left, right)?,
        exact,
        params: params.iter().copied().collect(),
    })
}

/// `u'' + (4k²π² - 1) u = 4kπ eˣ cos(2kπx)`, `u = eˣ sin(2kπx)`.
pub fn sin_bump(k: u32) -> Result<BenchmarkCase> {
    if k < 1 {
        return Err(invalid("k", "must be a positive integer"));
    }
    let w = 2.0 * PI * k as f64;
    let lambda = w * w - 1.0;
    let exact = ExactSolution::new(
        move |x| x.exp() * (w * x).sin(),
        move |x| x.exp() * ((w * x).sin() + w * (w * x).cos()),
        move |x| x.exp() * ((1.0 - w * w) * (w * x).sin() + 2.0 * w * (w * x).cos()),
    );
    let forcing = fun(move |x| 2.0 * w * x.exp() * (w * x).cos());
    let mut case = dirichlet_case(
        BenchmarkKind::SinBump,
        -1.0,
        0.0,
        lambda,
        forcing,
        exact,
        &[("k", k as f64)],
    )?;
    // sin(2kπ) is not exactly zero in floating point
    case.bvp.left.g = 0.0;
    case.bvp.right.g = 0.0;
    Ok(case)
}

/// `u'' = f`, `u = 4ᵖ xᵖ (1-x)ᵖ`, with `f` obtained by differentiating `u`.
pub fn polynomial(p: u32) -> Result<BenchmarkCase> {
    if p < 2 {
        return Err(invalid("p", format!("{p} < 2")));
    }
    let pi = p as i32;
    let pf = p as f64;
    let scale = 4f64.powi(pi);
    let exact = ExactSolution::new(
        move |x| scale * (x * (1.0 - x)).powi(pi),
        move |x| scale * pf * (x * (1.0 - x)).powi(pi - 1) * (1.0 - 2.0 * x),
        move |x| second_derivative_poly(scale, pf, pi, x),
    );
    let forcing = fun(move |x| second_derivative_poly(scale, pf, pi, x));
    let mut case = dirichlet_case(
        BenchmarkKind::Polynomial,
        -1.0,
        0.0,
        0.0,
        forcing,
        exact,
        &[("p", pf)],
    )?;
    case.bvp.left.g = 0.0;
    case.bvp.right.g = 0.0;
    Ok(case)
}

fn second_derivative_poly(scale: f64, p: f64, pi: i32, x: f64) -> f64 {
    let v = x * (1.0 - x);
    let s = 1.0 - 2.0 * x;
    scale * p * v.powi(pi - 2) * (-1.0 + 2.0 * x - 2.0 * x * x + p * s * s)
}

/// `-μu'' + γu' = 0`, `u(0) = 0`, `u(1) = 1`; `u = (e^{rx} - 1)/(e^r - 1)` with `r = γ/μ`.
pub fn advection_layer(mu: f64, gamma: f64) -> Result<BenchmarkCase> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(invalid("mu", format!("{mu} must be positive")));
    }
    if !gamma.is_finite() {
        return Err(invalid("gamma", format!("{gamma} is not finite")));
    }
    let r = gamma / mu;
    // scaled forms: for r > 0, e^{rx}/(e^r - 1) = e^{r(x-1)} / (1 - e^{-r})
    let growth = move |x: f64| -> f64 {
        if r > 0.0 {
            (r * (x - 1.0)).exp() / -(-r).exp_m1()
        } else {
            (r * x).exp() / r.exp_m1()
        }
    };
    let exact = if r == 0.0 {
        ExactSolution::new(|x| x, |_| 1.0, |_| 0.0)
    } else {
        ExactSolution::new(
            move |x| {
                if r > 0.0 {
                    -(r * (x - 1.0)).exp() * (-r * x).exp_m1() / -(-r).exp_m1()
                } else {
                    (r * x).exp_m1() / r.exp_m1()
                }
            },
            move |x| r * growth(x),
            move |x| r * r * growth(x),
        )
    };
    let mut case = dirichlet_case(
        BenchmarkKind::AdvectionLayer,
        mu,
        gamma,
        0.0,
        fun(|_| 0.0),
        exact,
        &[("mu", mu), ("gamma", gamma)],
    )?;
    case.bvp.left.g = 0.0;
    case.bvp.right.g = 1.0;
    Ok(case)
}

/// `-μu'' + λu = 0`, `u(0) = 0`, `u(1) = 1`; `u = sinh(θx)/sinh(θ)` with `θ = √(λ/μ)`.
pub fn reaction_layer(mu: f64, lambda: f64) -> Result<BenchmarkCase> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(invalid("mu", format!("{mu} must be positive")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", format!("{lambda} must be non-negative")));
    }
    let theta = (lambda / mu).sqrt();
    let exact = if theta == 0.0 {
        ExactSolution::new(|x| x, |_| 1.0, |_| 0.0)
    } else {
        // sinh(θx)/sinh(θ) = e^{θ(x-1)} (1 - e^{-2θx}) / (1 - e^{-2θ}), likewise for cosh
        let denom = -(-2.0 * theta).exp_m1();
        let sinh_ratio =
            move |x: f64| -(theta * (x - 1.0)).exp() * (-2.0 * theta * x).exp_m1() / denom;
        let cosh_ratio =
            move |x: f64| (theta * (x - 1.0)).exp() * (1.0 + (-2.0 * theta * x).exp()) / denom;
        ExactSolution::new(
            sinh_ratio,
            move |x| theta * cosh_ratio(x),
            move |x| theta * theta * sinh_ratio(x),
        )
    };
    let mut case = dirichlet_case(
        BenchmarkKind::ReactionLayer,
        mu,
        0.0,
        lambda,
        fun(|_| 0.0),
        exact,
        &[("mu", mu), ("lambda", lambda)],
    )?;
    case.bvp.left.g = 0.0;
    case.bvp.right.g = 1.0;
    Ok(case)
}

/// `-u'' = 2α³(x-x₀)/(1+α²(x-x₀)²)²`, `u = atan(α(x-x₀))`.
pub fn atan_layer(alpha: f64, x0: f64) -> Result<BenchmarkCase> {
    if !(alpha.is_finite() && alpha != 0.0) {
        return Err(invalid(
            "alpha",
            format!("{alpha} must be finite and nonzero"),
        ));
    }
    if !x0.is_finite() {
        return Err(invalid("x0", format!("{x0} is not finite")));
    }
    let d2 = move |x: f64| {
        let s = x - x0;
        let q = 1.0 + alpha * alpha * s * s;
        -2.0 * alpha.powi(3) * s / (q * q)
    };
    let exact = ExactSolution::new(
        move |x| (alpha * (x - x0)).atan(),
        move |x| alpha / (1.0 + (alpha * (x - x0)).powi(2)),
        d2,
    );
    dirichlet_case(
        BenchmarkKind::AtanLayer,
        1.0,
        0.0,
        0.0,
        fun(move |x| -d2(x)),
        exact,
        &[("alpha", alpha), ("x0", x0)],
    )
}

/// `-u'' = (2/ε - 4x²/ε²) e^{-x²/ε}`, `u = e^{-x²/ε}`.
pub fn gaussian_peak(eps: f64) -> Result<BenchmarkCase> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("eps", format!("{eps} must be positive")));
    }
    let u = move |x: f64| (-x * x / eps).exp();
    let exact = ExactSolution::new(
        u,
        move |x| -2.0 * x / eps * u(x),
        move |x| (4.0 * x * x / (eps * eps) - 2.0 / eps) * u(x),
    );
    dirichlet_case(
        BenchmarkKind::GaussianPeak,
        1.0,
        0.0,
        0.0,
        fun(move |x| (2.0 / eps - 4.0 * x * x / (eps * eps)) * u(x)),
        exact,
        &[("eps", eps)],
    )
}

/// `-u'' = f`, `u = sin(1/(ε+x))`, with `f` obtained by differentiating `u`.
pub fn comb(eps: f64) -> Result<BenchmarkCase> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("eps", format!("{eps} must be positive")));
    }
    let d2 = move |x: f64| {
        let s = eps + x;
        let g = 1.0 / s;
        2.0 * g.cos() / s.powi(3) - g.sin() / s.powi(4)
    };
    let exact = ExactSolution::new(
        move |x| (1.0 / (eps + x)).sin(),
        move |x| -(1.0 / (eps + x)).cos() / (eps + x).powi(2),
        d2,
    );
    dirichlet_case(
        BenchmarkKind::Comb,
        1.0,
        0.0,
        0.0,
        fun(move |x| -d2(x)),
        exact,
        &[("eps", eps)],
    )
}

/// Which transport mechanism the global Péclet number measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PecletRegime {
    /// `γ = λ = 0`.
    Diffusive,
    Advective,
    Reactive,
    /// Both `γ` and `λ` nonzero; the larger of the two numbers is reported.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peclet {
    pub value: f64,
    pub regime: PecletRegime,
}

/// Global Péclet number on the unit domain: `|γ||I|/(2μ)` for advection,
/// `|λ||I|²/(6μ)` for reaction.
pub fn peclet(bvp: &LinearBvp) -> Result<Peclet> {
    if bvp.mu.is_nan() || bvp.mu <= 0.0 {
        return Err(invalid(
            "mu",
            format!("Péclet number needs mu > 0, got {}", bvp.mu),
        ));
    }
    let len = 1.0;
    let adv = bvp.gamma.abs() * len / (2.0 * bvp.mu);
    let react = bvp.lambda.abs() * len * len / (6.0 * bvp.mu);
    let regime = match (bvp.gamma != 0.0, bvp.lambda != 0.0) {
        (false, false) => PecletRegime::Diffusive,
        (true, false) => PecletRegime::Advective,
        (false, true) => PecletRegime::Reactive,
        (true, true) => PecletRegime::Mixed,
    };
    Ok(Peclet {
        value: adv.max(react),
        regime,
    })
}
