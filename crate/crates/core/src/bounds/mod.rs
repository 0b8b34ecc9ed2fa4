//! Closed-form exponents of the machine counts, for reporting and fits.

use crate::error::{MrcError, Result};

/// Best known square matrix multiplication exponent.
pub const OMEGA_STAR: f64 = 2.3728;
/// Largest `x` with `ω⟨1,1,x⟩ = 2`.
pub const GAMMA: f64 = 0.30298;
/// Breakpoint of the two branches of `F`.
pub const F_BREAK: f64 = 0.31924;
/// Exponent of the implemented rank-7 scheme, `log₂ 7`.
pub fn omega_strassen() -> f64 {
    7f64.log2()
}

// linear fit of ω*⟨1,1,x⟩ used by the sampled APSP bound
const FIT_A: f64 = 1.8379;
const FIT_B: f64 = 0.5347;

/// `ω⟨1,1,x⟩` interpolated between `x = γ` (value 2) and `x = 1` (value `ω`).
pub fn omega_rect(x: f64, omega: f64) -> f64 {
    if x <= GAMMA {
        2.0
    } else {
        2.0 + (omega - 2.0) * (x - GAMMA) / (1.0 - GAMMA)
    }
}

/// Positive root `x` of `(a + b x)(3 − ε − x)/2 = 2 − 3ε/2 + x`.
fn balance_root(eps: f64) -> f64 {
    let (a, b) = (FIT_A, FIT_B);
    let qa = -b;
    let qb = b * (3.0 - eps) - a - 2.0;
    let qc = a * (3.0 - eps) - 4.0 + 3.0 * eps;
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    let r1 = (-qb + disc) / (2.0 * qa);
    let r2 = (-qb - disc) / (2.0 * qa);
    if (0.0..=1.0 + 1e-9).contains(&r1) {
        r1
    } else {
        r2
    }
}

/// Machine exponent of the sampled APSP, `F(ε)`.
pub fn zwick_f(eps: f64) -> f64 {
    if eps <= F_BREAK {
        3.0 - 2.5 * eps
    } else {
        2.0 - 1.5 * eps + balance_root(eps)
    }
}

/// The second branch of `F` with the rounded constants as they are printed.
pub fn zwick_f_printed(eps: f64) -> f64 {
    let inner = 0.07 * eps * eps + 1.66 * eps - 0.43 * eps + 2.92 - 0.89;
    2.0 * (1.0 - eps / 2.0) + (inner.sqrt() - 0.26 * eps - 1.11) / 0.53 - eps / 2.0
}

/// `|F(ε) − printed(ε)|` on the second branch.
pub fn zwick_f_discrepancy(eps: f64) -> f64 {
    (zwick_f(eps) - zwick_f_printed(eps)).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    Ov,
    ThreeSum,
    Matmul,
    MatmulRect,
    DistanceProduct,
    DistanceRect,
    BoundedDistance,
    Apsp,
    ZwickApsp,
    Fft,
    /// The line `2 − ε`.
    LowerBound,
}

impl Problem {
    pub const ALL: [Problem; 11] = [
        Problem::Ov,
        Problem::ThreeSum,
        Problem::Matmul,
        Problem::MatmulRect,
        Problem::DistanceProduct,
        Problem::DistanceRect,
        Problem::BoundedDistance,
        Problem::Apsp,
        Problem::ZwickApsp,
        Problem::Fft,
        Problem::LowerBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Ov => "ov",
            Problem::ThreeSum => "3sum",
            Problem::Matmul => "matmul",
            Problem::MatmulRect => "matmul-rect",
            Problem::DistanceProduct => "minplus",
            Problem::DistanceRect => "minplus-rect",
            Problem::BoundedDistance => "minplus-bounded",
            Problem::Apsp => "apsp",
            Problem::ZwickApsp => "zwick",
            Problem::Fft => "fft",
            Problem::LowerBound => "lower-bound",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Interval of ε on which the exponent is defined.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Problem::Ov | Problem::Fft | Problem::LowerBound => (0.0, 1.0),
            Problem::ThreeSum => (0.5, 1.0),
            _ => (0.0, 2.0),
        }
    }

    fn needs_x(self) -> bool {
        matches!(self, Problem::MatmulRect | Problem::DistanceRect | Problem::BoundedDistance)
    }
}

/// Machine-count exponent of `problem` at memory `n^ε`. `x` is the inner
/// exponent of the rectangular problems; `omega` defaults to `ω*`.
pub fn exponent(problem: Problem, eps: f64, x: Option<f64>, omega: Option<f64>) -> Result<f64> {
    let (lo, hi) = problem.domain();
    if !(eps >= lo && eps <= hi) {
        return Err(MrcError::DomainError(format!(
            "{} is defined for ε in [{lo}, {hi}], got {eps}",
            problem.name()
        )));
    }
    let w = omega.unwrap_or(OMEGA_STAR);
    let x = match (problem.needs_x(), x) {
        (true, Some(x)) if (0.0..=1.0).contains(&x) => x,
        (true, _) => return Err(MrcError::DomainError(format!("{} needs x in [0, 1]", problem.name()))),
        (false, _) => 1.0,
    };
    Ok(match problem {
        Problem::Ov | Problem::ThreeSum => 2.0 * (1.0 - eps),
        Problem::Matmul => w * (2.0 - eps) / 2.0,
        Problem::MatmulRect => omega_rect(x, w) * (2.0 - eps) / 2.0,
        Problem::DistanceProduct | Problem::Apsp => 3.0 * (1.0 - eps / 2.0),
        Problem::DistanceRect => 2.0 * (1.0 - eps / 2.0) + (x - eps / 2.0),
        Problem::BoundedDistance => omega_rect(x, w) * (3.0 - eps - x) / 2.0,
        Problem::ZwickApsp => zwick_f(eps),
        Problem::Fft => 1.0 - eps,
        Problem::LowerBound => 2.0 - eps,
    })
}

/// The ε where the machine exponent equals the memory exponent (bisection).
pub fn balanced_point(problem: Problem, x: Option<f64>, omega: Option<f64>) -> Result<f64> {
    let (mut lo, mut hi) = problem.domain();
    let gap = |e: f64| exponent(problem, e, x, omega).map(|v| v - e);
    if gap(lo)? < 0.0 || gap(hi)? > 0.0 {
        return Err(MrcError::DomainError(format!("{} has no balanced point", problem.name())));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `2ω/(ω+2)`.
pub fn matmul_balanced(omega: f64) -> f64 {
    2.0 * omega / (omega + 2.0)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `problem,eps,exponent` rows over an even grid of `steps + 1` points.
pub fn exponent_csv(problems: &[Problem], steps: usize, x: Option<f64>, omega: Option<f64>) -> String {
    let mut out = String::from("problem,eps,exponent\n");
    for &p in problems {
        let (lo, hi) = p.domain();
        for s in 0..=steps {
            let e = lo + (hi - lo) * s as f64 / steps.max(1) as f64;
            if let Ok(v) = exponent(p, e, x.or(Some(1.0)), omega) {
                out.push_str(&format!("{},{:.6},{:.6}\n", p.name(), e, v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert!((exponent(Problem::DistanceProduct, 1.2, None, None).unwrap() - 1.2).abs() < 1e-12);
        assert!((matmul_balanced(OMEGA_STAR) - 1.0852).abs() < 5e-4);
        let z = balanced_point(Problem::ZwickApsp, None, None).unwrap();
        assert!((z - 1.145).abs() < 5e-3, "{z}");
        assert!((balanced_point(Problem::Fft, None, None).unwrap() - 0.5).abs() < 1e-9);
        assert!((balanced_point(Problem::Ov, None, None).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn rect_omega_continuous() {
        assert_eq!(omega_rect(0.2, OMEGA_STAR), 2.0);
        assert!((omega_rect(GAMMA + 1e-12, OMEGA_STAR) - 2.0).abs() < 1e-9);
        assert!((omega_rect(1.0, OMEGA_STAR) - OMEGA_STAR).abs() < 1e-12);
    }

    #[test]
    fn f_branches_meet() {
        let left = 3.0 - 2.5 * F_BREAK;
        let right = 2.0 - 1.5 * F_BREAK + balance_root(F_BREAK);
        assert!((left - right).abs() < 1e-2, "{left} vs {right}");
        assert_eq!(zwick_f(0.2), 2.5);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = [64.0, 128.0, 256.0f64].iter().map(|&n| (n, 3.0 * n.powf(1.5))).collect();
        assert!((loglog_slope(&pts).unwrap() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn domains() {
        assert!(exponent(Problem::ThreeSum, 0.3, None, None).is_err());
        assert!(exponent(Problem::DistanceRect, 1.0, None, None).is_err());
    }
}
