//! Hausdorff dimension of the set of limit-disc words.

use serde::{Deserialize, Serialize};

use crate::classify::{phi, AffineMap};
use crate::error::{Error, Result};
use crate::mobius::{Complex, MobiusMap};
use crate::tangency::{tangency_data, GeneratorSet, TangencyGraph};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimensionMethod {
    Theorem3,
    Theorem4,
    UpperBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub value: f64,
    pub method: DimensionMethod,
    pub s_star: Option<f64>,
    pub details: String,
    pub gammas: Vec<Option<f64>>,
}

/// `log q(s)` with `q(s) = ∑ γ_i^{-s}`, evaluated as a log-sum-exp.
pub fn log_q(log_gammas: &[f64], s: f64) -> f64 {
    let m = log_gammas.iter().map(|l| -s * l).fold(f64::NEG_INFINITY, f64::max);
    m + log_gammas.iter().map(|l| (-s * l - m).exp()).sum::<f64>().ln()
}

/// `g'(s) = -∑ γ_i^{-s} log γ_i / ∑ γ_i^{-s}`, increasing in `s`.
fn g_prime(log_gammas: &[f64], s: f64) -> f64 {
    let m = log_gammas.iter().map(|l| -s * l).fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for l in log_gammas {
        let w = (-s * l - m).exp();
        num += w * l;
        den += w;
    }
    -num / den
}

/// Minimiser of `g = log q` over `s >= 0`, returned as `(s*, g(s*))`.
///
/// Needs at least one `γ > 1` and one `γ < 1`, which makes `g'` change
/// sign; its root is bracketed from `[-1, 1]` outward and bisected.
pub fn minimize_g(gammas: &[f64]) -> Result<(f64, f64)> {
    if gammas.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
        return Err(Error::NoInteriorMinimum);
    }
    let above = gammas.iter().any(|&g| g > 1.0 + tol::GAMMA_EPS);
    let below = gammas.iter().any(|&g| g < 1.0 - tol::GAMMA_EPS);
    if !(above && below) {
        return Err(Error::NoInteriorMinimum);
    }
    let logs: Vec<f64> = gammas.iter().map(|g| g.ln()).collect();
    let (mut lo, mut hi) = (-1.0, 1.0);
    while g_prime(&logs, lo) > 0.0 {
        lo *= 2.0;
    }
    while g_prime(&logs, hi) < 0.0 {
        hi *= 2.0;
    }
    while hi - lo > tol::BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g_prime(&logs, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = (0.5 * (lo + hi)).max(0.0);
    Ok((s, log_q(&logs, s)))
}

fn log_base(set: &GeneratorSet) -> Result<f64> {
    if set.len() < 2 {
        return Err(Error::LogBaseDegenerate);
    }
    Ok((set.len() as f64).ln())
}

/// `dim Λ = log ρ / log b` when every `γ_f < 1`, and 0 for an acyclic graph.
pub fn dim_theorem3(set: &GeneratorSet, graph: &TangencyGraph) -> Result<DimensionReport> {
    let base = log_base(set)?;
    let offenders: Vec<String> = set
        .generators()
        .iter()
        .filter(|g| g.data.gamma.is_some_and(|x| x >= 1.0 - tol::GAMMA_EPS))
        .map(|g| g.name.clone())
        .collect();
    if !offenders.is_empty() {
        return Err(Error::HypothesisViolated { offenders });
    }
    let (value, details) = if graph.has_cycle() {
        let rho = graph.spectral_radius()?;
        ((rho.ln() / base).clamp(0.0, 1.0), format!("log rho / log b with rho = {rho}"))
    } else {
        (0.0, "tangency graph is acyclic".to_string())
    };
    Ok(DimensionReport {
        value,
        method: DimensionMethod::Theorem3,
        s_star: None,
        details,
        gammas: set.gammas(),
    })
}

/// Complete tangency graph: 0 if all `γ >= 1`, 1 if all `γ < 1`, otherwise
/// `min_{s >= 0} log q(s) / log b`.
pub fn dim_theorem4(set: &GeneratorSet, graph: &TangencyGraph) -> Result<DimensionReport> {
    if !graph.is_complete() {
        return Err(Error::GraphNotComplete);
    }
    let base = log_base(set)?;
    let gammas: Vec<f64> = set
        .gammas()
        .into_iter()
        .map(|g| g.expect("complete graph has only tangent vertices"))
        .collect();
    let report = |value: f64, s_star, details: &str| DimensionReport {
        value,
        method: DimensionMethod::Theorem4,
        s_star,
        details: details.to_string(),
        gammas: set.gammas(),
    };
    if gammas.iter().all(|&g| g >= 1.0 - tol::GAMMA_EPS) {
        return Ok(report(0.0, None, "all gamma >= 1"));
    }
    if gammas.iter().all(|&g| g < 1.0 - tol::GAMMA_EPS) {
        return Ok(report(1.0, None, "all gamma < 1"));
    }
    match minimize_g(&gammas) {
        Ok((s, g)) => Ok(report((g / base).clamp(0.0, 1.0), Some(s), "min over s >= 0 of log q(s) / log b")),
        // some gamma = 1, the rest < 1: q is nondecreasing, minimum at s = 0
        Err(Error::NoInteriorMinimum) => Ok(report(1.0, Some(0.0), "q nondecreasing, minimum at s = 0")),
        Err(e) => Err(e),
    }
}

/// Exact value when a closed form applies, otherwise the smaller of the
/// two formulas as an upper bound.
pub fn dim_upper_bound(set: &GeneratorSet, graph: &TangencyGraph) -> Result<DimensionReport> {
    let base = log_base(set)?;
    match dim_theorem3(set, graph) {
        Ok(r) => return Ok(r),
        Err(Error::HypothesisViolated { .. }) => {}
        Err(e) => return Err(e),
    }
    if graph.is_complete() {
        return dim_theorem4(set, graph);
    }
    let mut value = if graph.has_cycle() {
        graph.spectral_radius()?.ln() / base
    } else {
        0.0
    };
    let mut details = format!("log rho / log b = {value}");
    let tangent: Vec<f64> = set.gammas().into_iter().flatten().collect();
    if let Ok((s, g)) = minimize_g(&tangent) {
        let bound = g / base;
        details.push_str(&format!("; gamma bound {bound} at s = {s}"));
        value = value.min(bound);
    }
    Ok(DimensionReport {
        value: value.clamp(0.0, 1.0),
        method: DimensionMethod::UpperBoundOnly,
        s_star: None,
        details,
        gammas: set.gammas(),
    })
}

/// Exact value if a theorem applies, otherwise an upper bound.
pub fn dimension(set: &GeneratorSet, graph: &TangencyGraph) -> Result<DimensionReport> {
    dim_upper_bound(set, graph)
}

/// `f = φ_p⁻¹ ∘ (w ↦ γ w + offset) ∘ φ_p`, a map with `α_f = β_f = p`
/// and `γ_f = gamma`.
pub fn make_tangent_generator(gamma: f64, offset: Complex, p: Complex) -> Result<MobiusMap> {
    let fail = |why: String| Error::ConstructionFailed(why);
    if !(gamma > 0.0) || !(offset.re > 0.0) || (p.norm() - 1.0).abs() > tol::DEFAULT_TOL {
        return Err(fail(format!("gamma = {gamma}, offset = {offset}, |p| = {}", p.norm())));
    }
    let h = AffineMap::new(gamma, offset)?.to_mobius();
    let ph = phi(p);
    let f = ph.inverse().compose(&h).compose(&ph);
    let data = tangency_data(&f, tol::DEFAULT_TOL).map_err(|e| fail(e.to_string()))?;
    let at_p = |z: Option<Complex>| z.is_some_and(|z| (z - p).norm() <= tol::DEFAULT_TOL);
    let ok = data.tangent
        && at_p(data.alpha_point())
        && at_p(data.beta_point())
        && data.gamma.is_some_and(|g| (g - gamma).abs() <= tol::DEFAULT_TOL * gamma.max(1.0));
    if !ok {
        return Err(fail(format!("tangency data {data:?}")));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn one() -> Complex {
        Complex::new(1.0, 0.0)
    }

    fn fixtures(gammas: &[f64]) -> GeneratorSet {
        let maps = gammas
            .iter()
            .enumerate()
            .map(|(i, &g)| (format!("f{i}"), make_tangent_generator(g, one(), one()).unwrap()))
            .collect();
        GeneratorSet::new(maps, tol::DEFAULT_TOL).unwrap()
    }

    #[test]
    fn minimize_examples() {
        let (s, g) = minimize_g(&[4.0, 0.5]).unwrap();
        assert_abs_diff_eq!(s, 1.0 / 3.0, epsilon = 1e-11);
        assert_abs_diff_eq!(g / 2f64.ln(), 3f64.log2() - 2.0 / 3.0, epsilon = 1e-11);
        let (s, g) = minimize_g(&[2.0, 0.5]).unwrap();
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(g, 2f64.ln(), epsilon = 1e-12);
        for c in [3.0, 7.5, 100.0] {
            assert_abs_diff_eq!(minimize_g(&[c, 1.0 / c]).unwrap().0, 0.0, epsilon = 1e-11);
        }
        assert_eq!(minimize_g(&[0.5, 0.25]), Err(Error::NoInteriorMinimum));
        assert_eq!(minimize_g(&[2.0, 1.0]), Err(Error::NoInteriorMinimum));
    }

    #[test]
    fn tangent_fixtures() {
        for (g, p) in [(0.5, one()), (2.0, one()), (1.0, -one())] {
            let f = make_tangent_generator(g, one(), p).unwrap();
            let d = tangency_data(&f, 1e-9).unwrap();
            assert!(d.tangent);
            assert_abs_diff_eq!(d.gamma.unwrap(), g, epsilon = 1e-12);
            assert_abs_diff_eq!((d.alpha_point().unwrap() - p).norm(), 0.0, epsilon = 1e-12);
        }
        assert!(make_tangent_generator(0.5, Complex::new(0.0, 1.0), one()).is_err());
        assert!(make_tangent_generator(-1.0, one(), one()).is_err());
    }

    #[test]
    fn theorem4_cases() {
        let set = fixtures(&[4.0, 0.5]);
        let r = dim_theorem4(&set, &set.graph()).unwrap();
        assert_abs_diff_eq!(r.value, 3f64.log2() - 2.0 / 3.0, epsilon = 1e-11);
        assert_abs_diff_eq!(r.s_star.unwrap(), 1.0 / 3.0, epsilon = 1e-11);
        let set = fixtures(&[2.0, 1.5]);
        assert_eq!(dim_theorem4(&set, &set.graph()).unwrap().value, 0.0);
        let set = fixtures(&[0.5, 0.25, 0.9]);
        let r = dim_theorem4(&set, &set.graph()).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.s_star.is_none());
        let t3 = dim_theorem3(&set, &set.graph()).unwrap();
        assert_abs_diff_eq!(t3.value, 1.0, epsilon = 1e-12);
        let set = fixtures(&[1.0, 0.5]);
        assert_eq!(dim_theorem4(&set, &set.graph()).unwrap().value, 1.0);
    }

    #[test]
    fn theorem3_errors() {
        let set = fixtures(&[0.5]);
        assert_eq!(dim_theorem3(&set, &set.graph()), Err(Error::LogBaseDegenerate));
        let set = fixtures(&[0.5, 2.0]);
        assert_eq!(
            dim_theorem3(&set, &set.graph()),
            Err(Error::HypothesisViolated {
                offenders: vec!["f1".into()]
            })
        );
    }

    #[test]
    fn acyclic_is_zero() {
        // g has α = -1, β = 1: no self-loop
        let g = MobiusMap::from_real(0.0, 0.5, 1.0, 1.5).unwrap();
        let half = MobiusMap::from_real(1.0, 0.0, 0.0, 2.0).unwrap();
        let set = GeneratorSet::new(vec![("g", g), ("q", half)], tol::DEFAULT_TOL).unwrap();
        let graph = set.graph();
        assert!(!graph.has_cycle());
        let r = dim_theorem3(&set, &graph).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(dim_upper_bound(&set, &graph).unwrap().method, DimensionMethod::Theorem3);
    }
}
