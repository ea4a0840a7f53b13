//! One-dimensional convex function algebra.
//!
//! Every function is normalized to `f(0) = 0`, which makes the closed
//! perspective `z f(x/z)` vanish at the origin and keeps conjugates
//! nonnegative. Extended-real results use `f64::INFINITY`.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Guard below which perspective denominators are lifted before generating
/// supporting-hyperplane cuts.
pub const EPS_PERSP: f64 = 1e-9;

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FuncError {
    NegativeScale(f64),
}

impl fmt::Display for FuncError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncError::NegativeScale(z) => write!(f, "perspective scale {z} is negative"),
        }
    }
}

impl std::error::Error for FuncError {}

/// Catalog of one-dimensional convex functions with `f(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarConvex {
    /// `f(x) = x^2`
    Quadratic,
    /// `f(x) = log(1 + exp(-x)) - log 2` (centered logistic loss)
    LogisticCentered,
    /// `f(x) = |x|^r` with `r >= 1`; exercises nondifferentiability at 0
    /// when `r = 1` (the subgradient there is taken as 0).
    PowerAbs { r: f64 },
}

/// Numerically safe `log(1 + exp(t))`.
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// Logistic sigmoid `1 / (1 + exp(-t))` without overflow.
fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

impl ScalarConvex {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            ScalarConvex::Quadratic => x * x,
            ScalarConvex::LogisticCentered => softplus(-x) - LN2,
            ScalarConvex::PowerAbs { r } => x.abs().powf(*r),
        }
    }

    /// Derivative; at kinks the right derivative, except `PowerAbs{r=1}` at 0
    /// where the subgradient 0 is returned.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            ScalarConvex::Quadratic => 2.0 * x,
            ScalarConvex::LogisticCentered => -sigmoid(-x),
            ScalarConvex::PowerAbs { r } => {
                if x == 0.0 {
                    0.0
                } else {
                    r * x.abs().powf(r - 1.0) * x.signum()
                }
            }
        }
    }

    /// One-sided derivatives `(left, right)`.
    pub fn one_sided_derivatives(&self, x: f64) -> (f64, f64) {
        match self {
            ScalarConvex::PowerAbs { r } if *r == 1.0 && x == 0.0 => (-1.0, 1.0),
            _ => {
                let d = self.derivative(x);
                (d, d)
            }
        }
    }

    /// Convex conjugate `f*(g) = sup_x g x - f(x)`; infinite outside the
    /// conjugate domain.
    pub fn conjugate(&self, g: f64) -> f64 {
        match self {
            ScalarConvex::Quadratic => g * g / 4.0,
            ScalarConvex::LogisticCentered => {
                if !(-1.0..=0.0).contains(&g) {
                    return f64::INFINITY;
                }
                // (-g) ln(-g) + (1+g) ln(1+g) + ln 2, with 0 ln 0 = 0.
                let xlnx = |t: f64| if t <= 0.0 { 0.0 } else { t * t.ln() };
                xlnx(-g) + xlnx(1.0 + g) + LN2
            }
            ScalarConvex::PowerAbs { r } => {
                if *r == 1.0 {
                    if g.abs() <= 1.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    // sup g x - |x|^r = (r-1) (|g|/r)^(r/(r-1))
                    (r - 1.0) * (g.abs() / r).powf(r / (r - 1.0))
                }
            }
        }
    }

    /// Whether `g` lies in the conjugate domain (where `f*` is finite).
    pub fn in_conjugate_domain(&self, g: f64) -> bool {
        self.conjugate(g).is_finite()
    }

    /// Argmax of `g x - f(x)` when the supremum is attained; `None` when it
    /// is approached only along a maximizing sequence.
    pub fn maximizer(&self, g: f64) -> Option<f64> {
        match self {
            ScalarConvex::Quadratic => Some(g / 2.0),
            ScalarConvex::LogisticCentered => {
                if g > -1.0 && g < 0.0 {
                    Some(((1.0 + g) / (-g)).ln())
                } else {
                    // At the boundary the supremum is a limit (x -> ±inf);
                    // outside the domain the conjugate is infinite.
                    None
                }
            }
            ScalarConvex::PowerAbs { r } => {
                if *r == 1.0 {
                    if g.abs() <= 1.0 {
                        Some(0.0)
                    } else {
                        None
                    }
                } else if g == 0.0 {
                    Some(0.0)
                } else {
                    Some(g.signum() * (g.abs() / r).powf(1.0 / (r - 1.0)))
                }
            }
        }
    }

    /// An x with `g x - f(x) >= f*(g) - eps`, for boundary points of the
    /// conjugate domain where the supremum is unattained.
    pub fn eps_maximizer(&self, g: f64, eps: f64) -> Option<f64> {
        if let Some(x) = self.maximizer(g) {
            return Some(x);
        }
        if !self.in_conjugate_domain(g) {
            return None;
        }
        let target = self.conjugate(g);
        let mut x = 1.0;
        for _ in 0..200 {
            if g * x - self.value(x) >= target - eps {
                return Some(x);
            }
            if g * (-x) - self.value(-x) >= target - eps {
                return Some(-x);
            }
            x *= 2.0;
        }
        None
    }

    /// Recession value `lim_{t->inf} f(t x)/t`, the closure value of the
    /// perspective at scale zero.
    pub fn recession(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        match self {
            ScalarConvex::Quadratic => f64::INFINITY,
            ScalarConvex::LogisticCentered => (-x).max(0.0),
            ScalarConvex::PowerAbs { r } => {
                if *r == 1.0 {
                    x.abs()
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

/// Closed perspective `z f(x/z)` for `z >= 0`; `z = 0` takes the limit.
pub fn perspective_eval(f: &ScalarConvex, x: f64, z: f64) -> Result<f64, FuncError> {
    if z < 0.0 {
        return Err(FuncError::NegativeScale(z));
    }
    if z == 0.0 {
        return Ok(f.recession(x));
    }
    Ok(z * f.value(x / z))
}

/// A supporting hyperplane of the closed perspective: for all `(x, z)` with
/// `z >= 0`, `z f(x/z) >= slope_x * x + slope_z * z`, with equality at the
/// anchor. The coefficient pair is `(g, -f*(g))` for `g = f'(x0/z0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerspectiveCut {
    pub slope_x: f64,
    pub slope_z: f64,
    pub anchor: (f64, f64),
}

/// Supporting hyperplane anchored at `(x0, z0)` with `z0 > 0`.
pub fn perspective_cut(f: &ScalarConvex, x0: f64, z0: f64) -> PerspectiveCut {
    assert!(z0 > 0.0, "cut anchors require a positive scale");
    let u0 = x0 / z0;
    let (_, g) = f.one_sided_derivatives(u0);
    // slope_z = f(u0) - u0 g = -f*(g) when the conjugate sup is attained at u0.
    let slope_z = f.value(u0) - u0 * g;
    PerspectiveCut {
        slope_x: g,
        slope_z,
        anchor: (x0, z0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::XorShift64;

    const FUNCS: [ScalarConvex; 4] = [
        ScalarConvex::Quadratic,
        ScalarConvex::LogisticCentered,
        ScalarConvex::PowerAbs { r: 1.0 },
        ScalarConvex::PowerAbs { r: 3.0 },
    ];

    #[test]
    fn perspective_closed_forms() {
        let q = ScalarConvex::Quadratic;
        assert!((perspective_eval(&q, 3.0, 0.5).unwrap() - 18.0).abs() < 1e-12);
        assert_eq!(perspective_eval(&q, 0.0, 0.0).unwrap(), 0.0);
        assert!(perspective_eval(&q, 1.0, 0.0).unwrap().is_infinite());
        assert!(matches!(
            perspective_eval(&q, 1.0, -0.1),
            Err(FuncError::NegativeScale(_))
        ));
    }

    #[test]
    fn logistic_recession_matches_numeric_limit() {
        let f = ScalarConvex::LogisticCentered;
        // Limit of z*(log(1+e^(2/z)) - log 2) as z -> 0+ is 2.
        assert!((perspective_eval(&f, -2.0, 0.0).unwrap() - 2.0).abs() < 1e-12);
        for x in [-2.0, -0.7, 0.0, 0.4, 3.0] {
            let lim = f.recession(x);
            let mut last_err = f64::INFINITY;
            for z in [1e-2, 1e-4, 1e-6, 1e-8] {
                let v = perspective_eval(&f, x, z).unwrap();
                let err = (v - lim).abs();
                assert!(err <= last_err + 1e-15, "no monotone approach at x={x} z={z}");
                last_err = err;
            }
            assert!(last_err < 1e-6, "x={x}: final error {last_err}");
        }
    }

    #[test]
    fn cut_examples() {
        let c = perspective_cut(&ScalarConvex::Quadratic, 2.0, 1.0);
        assert_eq!((c.slope_x, c.slope_z), (4.0, -4.0));
        assert!((c.slope_x * 2.0 + c.slope_z * 1.0 - 4.0).abs() < 1e-12);

        let c = perspective_cut(&ScalarConvex::Quadratic, 0.0, 1.0);
        assert_eq!((c.slope_x, c.slope_z), (0.0, 0.0));

        let c = perspective_cut(&ScalarConvex::LogisticCentered, 0.0, 1.0);
        assert!((c.slope_x + 0.5).abs() < 1e-12);
        assert!(c.slope_z.abs() < 1e-12);
    }

    #[test]
    fn conjugate_examples() {
        assert!((ScalarConvex::Quadratic.conjugate(2.0) - 1.0).abs() < 1e-12);
        assert!(ScalarConvex::LogisticCentered.conjugate(-0.5).abs() < 1e-12);
        assert!(ScalarConvex::LogisticCentered.conjugate(0.3).is_infinite());
        // Endpoint limits.
        assert!((ScalarConvex::LogisticCentered.conjugate(0.0) - LN2).abs() < 1e-12);
        assert!((ScalarConvex::LogisticCentered.conjugate(-1.0) - LN2).abs() < 1e-12);
    }

    #[test]
    fn fenchel_inequality_random() {
        let mut rng = XorShift64::new(17);
        for f in FUNCS {
            for _ in 0..1000 {
                let x = rng.uniform(-8.0, 8.0);
                let g = match f {
                    ScalarConvex::LogisticCentered => rng.uniform(-1.0, 0.0),
                    ScalarConvex::PowerAbs { r } if r == 1.0 => rng.uniform(-1.0, 1.0),
                    _ => rng.uniform(-6.0, 6.0),
                };
                let lhs = f.value(x) + f.conjugate(g);
                assert!(lhs >= g * x - 1e-9, "fenchel violated: {f:?} x={x} g={g}");
                // Equality when g = f'(x).
                let gd = f.derivative(x);
                if f.in_conjugate_domain(gd) {
                    let gap = f.value(x) + f.conjugate(gd) - gd * x;
                    assert!(gap.abs() <= 1e-9, "fenchel equality gap {gap} for {f:?}");
                }
            }
        }
    }

    #[test]
    fn lemma1_monotone_in_scale() {
        let mut rng = XorShift64::new(5);
        for f in FUNCS {
            for _ in 0..500 {
                let x = rng.uniform(-10.0, 10.0);
                let t1 = rng.uniform(1e-3, 5.0);
                let t2 = t1 + rng.uniform(0.0, 5.0);
                let g1 = perspective_eval(&f, x, t1).unwrap();
                let g2 = perspective_eval(&f, x, t2).unwrap();
                assert!(g1 >= g2 - 1e-9, "{f:?}: g({x},{t1})={g1} < g({x},{t2})={g2}");
            }
        }
    }

    #[test]
    fn cuts_underestimate_on_grid() {
        let mut rng = XorShift64::new(9);
        for f in FUNCS {
            for _ in 0..20 {
                let x0 = rng.uniform(-5.0, 5.0);
                let z0 = rng.uniform(1e-3, 8.0);
                let cut = perspective_cut(&f, x0, z0);
                // Tight at the anchor.
                let v0 = perspective_eval(&f, x0, z0).unwrap();
                assert!(
                    (cut.slope_x * x0 + cut.slope_z * z0 - v0).abs() <= 1e-9 * v0.abs().max(1.0),
                    "anchor not tight for {f:?}"
                );
                for i in 0..50 {
                    for j in 0..50 {
                        let x = -10.0 + 20.0 * (i as f64) / 49.0;
                        let z = 10.0 * (j as f64) / 49.0;
                        let v = perspective_eval(&f, x, z).unwrap();
                        let c = cut.slope_x * x + cut.slope_z * z;
                        assert!(
                            v >= c - 1e-9 * c.abs().max(1.0),
                            "cut above perspective at ({x},{z}) for {f:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mut rng = XorShift64::new(23);
        for f in FUNCS {
            for _ in 0..100 {
                let mut x = rng.uniform(-6.0, 6.0);
                if let ScalarConvex::PowerAbs { .. } = f {
                    // Keep away from the kink where the FD stencil straddles 0.
                    if x.abs() < 0.1 {
                        x += 0.2_f64.copysign(if x == 0.0 { 1.0 } else { x });
                    }
                }
                let h = 1e-5;
                let fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
                assert!(
                    (f.derivative(x) - fd).abs() < 1e-6 * fd.abs().max(1.0),
                    "{f:?} derivative mismatch at {x}"
                );
            }
        }
    }

    #[test]
    fn positive_homogeneity() {
        let mut rng = XorShift64::new(31);
        for f in FUNCS {
            for _ in 0..200 {
                let x = rng.uniform(-5.0, 5.0);
                let z = rng.uniform(1e-3, 5.0);
                let lam = rng.uniform(1e-2, 10.0);
                let a = perspective_eval(&f, lam * x, lam * z).unwrap();
                let b = lam * perspective_eval(&f, x, z).unwrap();
                assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn maximizer_consistency() {
        // Where attained, g*x - f(x) equals the conjugate.
        for (f, g) in [
            (ScalarConvex::Quadratic, 2.0),
            (ScalarConvex::LogisticCentered, -0.5),
            (ScalarConvex::PowerAbs { r: 3.0 }, 1.7),
        ] {
            let x = f.maximizer(g).unwrap();
            assert!((g * x - f.value(x) - f.conjugate(g)).abs() < 1e-10);
        }
        // At the boundary of the logistic domain the sup is unattained but
        // eps-maximizers exist.
        assert!(ScalarConvex::LogisticCentered.maximizer(0.0).is_none());
        let x = ScalarConvex::LogisticCentered.eps_maximizer(0.0, 1e-10).unwrap();
        assert!(0.0 * x - ScalarConvex::LogisticCentered.value(x) >= LN2 - 1e-9);
    }
}
