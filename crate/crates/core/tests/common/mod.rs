//! Test oracles independent of the library's hand-derived formulas.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use elm_core::BenchmarkCase;

/// Second-order forward-mode jet: value, first and second derivative.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub v: f64,
    pub d: f64,
    pub dd: f64,
}

impl Jet {
    pub fn var(x: f64) -> Jet {
        Jet {
            v: x,
            d: 1.0,
            dd: 0.0,
        }
    }

    pub fn cst(c: f64) -> Jet {
        Jet {
            v: c,
            d: 0.0,
            dd: 0.0,
        }
    }

    /// Applies g with g(v), g'(v), g''(v) given.
    fn chain(self, g: f64, g1: f64, g2: f64) -> Jet {
        Jet {
            v: g,
            d: g1 * self.d,
            dd: g2 * self.d * self.d + g1 * self.dd,
        }
    }

    pub fn exp(self) -> Jet {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn sin(self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sinh(self) -> Jet {
        self.chain(self.v.sinh(), self.v.cosh(), self.v.sinh())
    }

    pub fn atan(self) -> Jet {
        let q = 1.0 + self.v * self.v;
        self.chain(self.v.atan(), 1.0 / q, -2.0 * self.v / (q * q))
    }

    pub fn powi(self, n: i32) -> Jet {
        let nf = n as f64;
        self.chain(
            self.v.powi(n),
            nf * self.v.powi(n - 1),
            nf * (nf - 1.0) * self.v.powi(n - 2),
        )
    }

    pub fn recip(self) -> Jet {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d: self.d + o.d,
            dd: self.dd + o.dd,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            d: self.d - o.d,
            dd: self.dd - o.dd,
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            v: -self.v,
            d: -self.d,
            dd: -self.dd,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
            dd: self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        let r = o.recip();
        self * r
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self * o.v,
            d: self * o.d,
            dd: self * o.dd,
        }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet {
            v: self.v + c,
            ..self
        }
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet {
            v: self.v - c,
            ..self
        }
    }
}

/// Exact solution of a benchmark written once more, directly from its
/// closed form, and differentiated automatically.
pub fn exact_jet(case: &BenchmarkCase, x: f64) -> Jet {
    let t = Jet::var(x);
    let p = |k: &str| case.param(k).unwrap();
    match case.name() {
        "sin_bump" => t.exp() * (2.0 * PI * p("k") * t).sin(),
        "polynomial" => {
            let deg = p("p") as i32;
            4f64.powi(deg) * (t * (Jet::cst(1.0) - t)).powi(deg)
        }
        "advection_layer" => {
            let r = p("gamma") / p("mu");
            if r == 0.0 {
                t
            } else {
                ((r * t).exp() - 1.0) * Jet::cst(1.0 / r.exp_m1())
            }
        }
        "reaction_layer" => {
            let th = (p("lambda") / p("mu")).sqrt();
            if th == 0.0 {
                t
            } else {
                (th * t).sinh() * Jet::cst(1.0 / th.sinh())
            }
        }
        "atan_layer" => (p("alpha") * (t - p("x0"))).atan(),
        "gaussian_peak" => (-(1.0 / p("eps")) * t * t).exp(),
        "comb" => (t + p("eps")).recip().sin(),
        other => panic!("no oracle for {other}"),
    }
}

/// Largest `|f - L u| / max(1, |f|)` over `points` interior points, with `L u`
/// computed from the AD oracle.
pub fn worst_forcing_mismatch(case: &BenchmarkCase, points: usize) -> f64 {
    let bvp = &case.bvp;
    (1..=points)
        .map(|j| {
            let x = j as f64 / (points + 1) as f64;
            let u = exact_jet(case, x);
            let f = bvp.forcing(x);
            (f - bvp.apply(u.v, u.d, u.dd)).abs() / f.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Central-difference estimate of `g'(x)`.
pub fn central_diff(g: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (g(x + h) - g(x - h)) / (2.0 * h)
}
