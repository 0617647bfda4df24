//! Limit-point versus limit-disc classification of eventually periodic
//! composition sequences, and the limit disc in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::{chordal_metric, Complex, Disc, ExtComplex, MobiusMap};
use crate::tangency::{GeneratorSet, TangencyGraph};
use crate::tol;

/// `f_1 f_2 ⋯` = `prefix` followed by `period` repeated forever.
/// An empty period denotes a finite word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordSpec {
    pub prefix: Vec<usize>,
    pub period: Vec<usize>,
}

/// Word as it appears in JSON input: generator names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedWord {
    #[serde(default)]
    pub prefix: Vec<String>,
    #[serde(default)]
    pub period: Vec<String>,
}

impl WordSpec {
    pub fn new(prefix: Vec<usize>, period: Vec<usize>) -> Self {
        WordSpec { prefix, period }
    }

    pub fn periodic(period: Vec<usize>) -> Self {
        WordSpec {
            prefix: Vec::new(),
            period,
        }
    }

    pub fn resolve(word: &NamedWord, set: &GeneratorSet) -> Result<Self> {
        let look = |names: &[String]| names.iter().map(|n| set.index_of(n)).collect::<Result<Vec<_>>>();
        Ok(WordSpec {
            prefix: look(&word.prefix)?,
            period: look(&word.period)?,
        })
    }

    pub fn named(&self, set: &GeneratorSet) -> NamedWord {
        let names = set.names();
        let look = |ix: &[usize]| ix.iter().map(|&i| names[i].clone()).collect();
        NamedWord {
            prefix: look(&self.prefix),
            period: look(&self.period),
        }
    }

    pub fn validate(&self, size: usize) -> Result<()> {
        match self.prefix.iter().chain(&self.period).find(|&&i| i >= size) {
            Some(&index) => Err(Error::IndexOutOfRange { index, size }),
            None => Ok(()),
        }
    }

    /// Letter at 0-based position `n`, or `None` past the end of a finite
    /// word.
    pub fn letter(&self, n: usize) -> Option<usize> {
        if n < self.prefix.len() {
            Some(self.prefix[n])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(n - self.prefix.len()) % self.period.len()])
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..).map_while(move |n| self.letter(n))
    }

    /// The word with its first `n` letters removed.
    pub fn drop_front(&self, n: usize) -> WordSpec {
        if n <= self.prefix.len() {
            return WordSpec::new(self.prefix[n..].to_vec(), self.period.clone());
        }
        let p = self.period.len();
        let shift = if p == 0 { 0 } else { (n - self.prefix.len()) % p };
        let mut period = self.period.clone();
        period.rotate_left(shift);
        WordSpec::periodic(period)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    LimitPoint,
    LimitDisc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub limit_tangent: bool,
    /// Number of leading letters before the tangency chain holds for good;
    /// absent when it never does.
    pub tail_start: Option<usize>,
    /// `∏ γ` over the period; absent when a period letter is not tangent.
    pub gamma_period_product: Option<f64>,
    pub borderline: bool,
}

/// Eventual tangency (`α_{f_n} = β_{f_{n+1}}` from some n on) of an eventually periodic word.
///
/// The pair `(f_n, f_{n+1})` is admissible iff the graph has the edge
/// `f_n → f_{n+1}`. Returns whether every pair from some point on is
/// admissible, and the number of letters before that point.
pub fn is_limit_tangent(graph: &TangencyGraph, w: &WordSpec) -> Result<(bool, Option<usize>)> {
    let p = w.period.len();
    if p == 0 {
        return Err(Error::EmptyPeriod);
    }
    w.validate(graph.size())?;
    let cyclic = (0..p).all(|i| graph.has_edge(w.period[i], w.period[(i + 1) % p]));
    if !cyclic {
        return Ok((false, None));
    }
    // pairs (w[i], w[i+1]) with i < prefix.len() are the only ones left
    let mut tail = 0;
    for i in 0..w.prefix.len() {
        let (u, v) = (w.letter(i).unwrap(), w.letter(i + 1).unwrap());
        if !graph.has_edge(u, v) {
            tail = i + 1;
        }
    }
    Ok((true, Some(tail)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaTest {
    pub converges: bool,
    pub period_product: f64,
    pub borderline: bool,
}

/// Gamma series test: `∑ γ_{f_1} ⋯ γ_{f_n}` converges iff the
/// product of `γ` over the period is below 1.
pub fn gamma_series_test(set: &GeneratorSet, w: &WordSpec) -> Result<GammaTest> {
    if w.period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    w.validate(set.len())?;
    let mut product = 1.0;
    for &i in &w.period {
        let g = set.get(i)?;
        product *= g.data.gamma.ok_or_else(|| Error::MissingGamma(g.name.clone()))?;
    }
    Ok(GammaTest {
        converges: product < 1.0 - tol::GAMMA_EPS,
        period_product: product,
        borderline: (product - 1.0).abs() <= tol::GAMMA_EPS,
    })
}

pub fn classify_word(set: &GeneratorSet, graph: &TangencyGraph, w: &WordSpec) -> Result<Classification> {
    let (limit_tangent, tail_start) = is_limit_tangent(graph, w)?;
    let all_tangent = w.period.iter().all(|&i| set.generators()[i].data.tangent);
    let gamma = if all_tangent { Some(gamma_series_test(set, w)?) } else { None };
    let disc = limit_tangent && gamma.is_some_and(|g| g.converges);
    let verdict = if disc { Verdict::LimitDisc } else { Verdict::LimitPoint };
    debug_assert!(verdict == Verdict::LimitPoint || limit_tangent);
    Ok(Classification {
        verdict,
        limit_tangent,
        tail_start,
        gamma_period_product: gamma.map(|g| g.period_product),
        borderline: gamma.is_some_and(|g| g.borderline),
    })
}

/// `w ↦ a w + b` with `a > 0`, `Re b >= 0`: a self-map of the right
/// half-plane `𝕂` fixing infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub a: f64,
    #[serde(with = "crate::mobius::complex_pair")]
    pub b: Complex,
}

impl AffineMap {
    pub fn new(a: f64, b: Complex) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b.re >= -tol::DEFAULT_TOL && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::InvalidAffine { a, re_b: b.re });
        }
        Ok(AffineMap { a, b })
    }

    pub fn apply(&self, w: Complex) -> Complex {
        self.a * w + self.b
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            a: self.a * other.a,
            b: self.a * other.b + self.b,
        }
    }

    pub fn to_mobius(&self) -> MobiusMap {
        let one = Complex::new(1.0, 0.0);
        MobiusMap::new(Complex::new(self.a, 0.0), self.b, Complex::new(0.0, 0.0), one).expect("a > 0")
    }
}

/// `φ_z(w) = (w + z)/(-w + z)`: sends 𝔻 onto the right half-plane,
/// `z` to infinity, `-z` to 0, and fixes `j`.
pub fn phi(z: Complex) -> MobiusMap {
    let one = Complex::new(1.0, 0.0);
    MobiusMap::new(one, z, -one, z).expect("z is nonzero on the unit circle")
}

/// Conjugates `f` with `f(z_in) = z_out` on the unit circle to
/// `h = φ_out ∘ f ∘ φ_in⁻¹`, an affine self-map of `𝕂`.
///
/// `a = 1/|f'(z_in)|`; `b` is read off from `h(1) = φ_out(f(0))`.
pub fn conjugate_to_halfplane(f: &MobiusMap, z_in: Complex, z_out: Complex, tol: f64) -> Result<AffineMap> {
    if (z_in.norm() - 1.0).abs() > tol || (z_out.norm() - 1.0).abs() > tol {
        return Err(Error::NotTangentPair(format!(
            "|z_in| = {}, |z_out| = {}",
            z_in.norm(),
            z_out.norm()
        )));
    }
    let miss = chordal_metric(f.apply(z_in.into()), z_out.into());
    if miss > tol {
        return Err(Error::NotTangentPair(format!("f(z_in) misses z_out by {miss:e}")));
    }
    let (po, pi) = (phi(z_out), phi(z_in));
    let h = po.compose(f).compose(&pi.inverse());
    if h.c().norm() > tol::DEFAULT_TOL {
        return Err(Error::NotAffine { c: h.c().norm() });
    }
    let a = 1.0 / f.derivative_modulus(z_in)?;
    let f0 = match f.apply(Complex::new(0.0, 0.0).into()) {
        ExtComplex::Finite(v) => v,
        ExtComplex::Infinity => return Err(Error::NotAffine { c: f64::INFINITY }),
    };
    let b = po.apply_complex(f0) - a;
    AffineMap::new(a, b)
}

/// Disc `φ_z⁻¹(t + 𝕂)`: internally tangent to the unit circle at `z`,
/// with center `z t/(t+1)` and radius `1/(t+1)`.
pub fn halfplane_disc(z: Complex, t: f64) -> Result<Disc> {
    Disc::new(z * (t / (t + 1.0)), 1.0 / (t + 1.0))
}

/// `t_∞ = ∑ a_1⋯a_{k-1} Re b_k` for the affine word `prefix · period^∞`.
pub fn translation_limit(prefix: &[AffineMap], period: &[AffineMap]) -> Result<f64> {
    let head = prefix.iter().fold(
        AffineMap {
            a: 1.0,
            b: Complex::new(0.0, 0.0),
        },
        |acc, h| acc.compose(h),
    );
    let block = period.iter().fold(
        AffineMap {
            a: 1.0,
            b: Complex::new(0.0, 0.0),
        },
        |acc, h| acc.compose(h),
    );
    if period.is_empty() || block.a >= 1.0 {
        return Err(Error::SeriesDiverges { product: block.a });
    }
    let t = head.b.re + head.a * block.b.re / (1.0 - block.a);
    if !(t > 0.0) {
        // t = 0 would make the limit the whole disc
        return Err(Error::NotLimitDisc);
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitDisc {
    /// `⋂ F_n(𝔻)` for the full word.
    pub disc: Disc,
    /// Limit disc of the word with its first `dropped` letters removed.
    pub tail_disc: Disc,
    pub t_inf: f64,
    pub dropped: usize,
    /// Common boundary point of the tail discs, `β` of the first tail letter.
    #[serde(with = "crate::mobius::complex_pair")]
    pub z0: Complex,
}

/// Per-generator affine conjugate `φ_β ∘ f ∘ φ_α⁻¹`.
pub fn generator_affine(set: &GeneratorSet, i: usize) -> Result<AffineMap> {
    let g = set.get(i)?;
    let (alpha, beta) = match (g.data.alpha_point(), g.data.beta_point()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::MissingGamma(g.name.clone())),
    };
    conjugate_to_halfplane(&g.map, alpha, beta, set.tol())
}

/// Limit disc of a limit-disc word, from the geometric-series closed form
/// of the half-plane translations.
pub fn limit_disc_exact(set: &GeneratorSet, graph: &TangencyGraph, w: &WordSpec) -> Result<LimitDisc> {
    let cls = classify_word(set, graph, w)?;
    if cls.verdict != Verdict::LimitDisc {
        return Err(Error::NotLimitDisc);
    }
    let dropped = cls.tail_start.unwrap_or(0);
    let tail = w.drop_front(dropped);
    let aff = |ix: &[usize]| ix.iter().map(|&i| generator_affine(set, i)).collect::<Result<Vec<_>>>();
    let t_inf = translation_limit(&aff(&tail.prefix)?, &aff(&tail.period)?)?;
    let first = tail.letter(0).expect("nonempty period");
    let z0 = set.generators()[first].data.beta_point().expect("tangent");
    let tail_disc = halfplane_disc(z0, t_inf)?;
    let head = w.prefix[..dropped]
        .iter()
        .fold(MobiusMap::identity(), |acc, &i| acc.compose(&set.generators()[i].map));
    let disc = head.image_disc(&tail_disc)?;
    Ok(LimitDisc {
        disc,
        tail_disc,
        t_inf,
        dropped,
        z0,
    })
}

/// Mean of `log γ` over a prefix of letters.
pub fn q_statistic(gamma_log_prefix: &[f64]) -> Result<f64> {
    if gamma_log_prefix.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    Ok(gamma_log_prefix.iter().sum::<f64>() / gamma_log_prefix.len() as f64)
}
