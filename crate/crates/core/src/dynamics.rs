//! Orbit simulation: nested discs `F_n(𝔻)`, the orbit of `j` in half-space,
//! escape sums, ideal and pointwise convergence.
//!
//! `F_n` is not stored as a plain matrix product. Along a run of letters
//! joined by tangency-graph edges the composition is
//! `φ_s⁻¹ ∘ (w ↦ A w + B) ∘ φ_z`, where `s` is the contact point of the
//! first letter of the run and `z = α` of the current letter; only when a
//! run is broken is it folded into a matrix `M`. So
//! `F_n = M ∘ φ_s⁻¹ ∘ H ∘ φ_z` with `H` affine. For a limit-disc word
//! the matrix entries of `F_n` grow like `A^{-1/2}` and the pole of `F_n`
//! closes in on the unit circle, which makes the disc images useless in
//! double precision after a few dozen steps; in the factored form the disc
//! is `M(φ_s⁻¹(Re B + 𝕂))`, which stays exact.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_word, generator_affine, halfplane_disc, phi, AffineMap, Verdict, WordSpec};
use crate::error::{Error, Result};
use crate::mobius::{chordal_metric, Complex, Disc, ExtComplex, H3Point, MobiusMap};
use crate::tangency::{GeneratorSet, TangencyGraph};
use crate::tol;

#[derive(Debug, Clone, Copy)]
struct Run {
    start: Complex,
    end: Complex,
    h: AffineMap,
}

impl Run {
    fn to_mobius(self) -> MobiusMap {
        phi(self.start).inverse().compose(&self.h.to_mobius()).compose(&phi(self.end))
    }
}

/// Incremental composition `F_n = f_1 ∘ ⋯ ∘ f_n`.
#[derive(Debug, Clone)]
pub struct Composition<'a> {
    set: &'a GeneratorSet,
    graph: TangencyGraph,
    affine: Vec<Option<AffineMap>>,
    frame: MobiusMap,
    run: Option<Run>,
    last: Option<usize>,
    steps: usize,
}

impl<'a> Composition<'a> {
    pub fn new(set: &'a GeneratorSet) -> Result<Self> {
        let affine = (0..set.len())
            .map(|i| {
                if set.generators()[i].data.tangent {
                    generator_affine(set, i).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Composition {
            set,
            graph: set.graph(),
            affine,
            frame: MobiusMap::identity(),
            run: None,
            last: None,
            steps: 0,
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `F_n ← F_n ∘ f_letter`.
    pub fn push(&mut self, letter: usize) -> Result<()> {
        let g = self.set.get(letter)?;
        self.steps += 1;
        let joined = self.last.is_some_and(|l| self.graph.has_edge(l, letter));
        match (self.run.as_mut(), self.affine[letter]) {
            (Some(run), Some(h)) if joined => {
                run.h = run.h.compose(&h);
                run.end = g.data.alpha_point().expect("tangent");
            }
            (_, h) => {
                if let Some(run) = self.run.take() {
                    self.frame = self.frame.compose(&run.to_mobius());
                }
                match h {
                    Some(h) => {
                        self.run = Some(Run {
                            start: g.data.beta_point().expect("tangent"),
                            end: g.data.alpha_point().expect("tangent"),
                            h,
                        })
                    }
                    None => self.frame = self.frame.compose(&g.map),
                }
            }
        }
        self.last = Some(letter);
        let run_ok = self
            .run
            .is_none_or(|r| r.h.a > 0.0 && r.h.a.is_finite() && r.h.b.re.is_finite() && r.h.b.im.is_finite());
        if !self.frame.is_finite() || !run_ok {
            return Err(Error::OrbitUnstable { step: self.steps });
        }
        Ok(())
    }

    /// `F_n` as a single matrix.
    pub fn map(&self) -> MobiusMap {
        match self.run {
            Some(run) => self.frame.compose(&run.to_mobius()),
            None => self.frame,
        }
    }

    /// `F_n(𝔻)`.
    pub fn disc(&self) -> Result<Disc> {
        let inner = match self.run {
            Some(run) => halfplane_disc(run.start, run.h.b.re)?,
            None => Disc::unit(),
        };
        self.frame.image_disc(&inner)
    }

    /// `F_n(j)`.
    pub fn ideal_point(&self) -> Result<H3Point> {
        let p = match self.run {
            Some(run) => {
                let p = H3Point::from_parts(run.h.b, run.h.a).ok_or(Error::OrbitUnstable { step: self.steps })?;
                phi(run.start).inverse().apply_h3(&p)
            }
            None => H3Point::J,
        };
        let q = self.frame.apply_h3(&p);
        H3Point::new(q.x, q.y, q.t).ok_or(Error::OrbitUnstable { step: self.steps })
    }

    /// Point shared by the boundaries of all discs of the current tangent
    /// run; `None` outside a run.
    pub fn anchor(&self) -> Option<ExtComplex> {
        self.run.map(|r| self.frame.apply(r.start.into()))
    }

    /// `F_n(x)`. A point within the chordal tolerance of the current
    /// `α` is treated as equal to it and sent to the anchor.
    pub fn apply(&self, x: ExtComplex) -> ExtComplex {
        let y = match self.run {
            Some(run) if chordal_metric(x, run.end.into()) <= self.set.tol() => run.start.into(),
            Some(run) => match phi(run.end).apply(x) {
                ExtComplex::Finite(u) => phi(run.start).inverse().apply(run.h.apply(u).into()),
                ExtComplex::Infinity => run.start.into(),
            },
            None => x,
        };
        self.frame.apply(y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub discs: Vec<Disc>,
    pub dist_j: Vec<f64>,
    pub heights: Vec<f64>,
    pub escape_partial_sums: Vec<f64>,
    pub ideal_points: Vec<H3Point>,
}

impl OrbitTrace {
    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }
}

fn check_length(w: &WordSpec, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::TraceTooShort { len: 0, needed: 1 });
    }
    if w.period.is_empty() && w.prefix.len() < n {
        return Err(Error::TraceTooShort {
            len: w.prefix.len(),
            needed: n,
        });
    }
    Ok(())
}

/// `F_1(𝔻) ⊃ ⋯ ⊃ F_N(𝔻)` together with the orbit of `j`.
pub fn iterate_orbit(set: &GeneratorSet, w: &WordSpec, n: usize) -> Result<OrbitTrace> {
    check_length(w, n)?;
    w.validate(set.len())?;
    let mut comp = Composition::new(set)?;
    let mut trace = OrbitTrace {
        discs: Vec::with_capacity(n),
        dist_j: Vec::with_capacity(n),
        heights: Vec::with_capacity(n),
        escape_partial_sums: Vec::with_capacity(n),
        ideal_points: Vec::with_capacity(n),
    };
    let mut sum = 0.0;
    for letter in w.letters().take(n) {
        comp.push(letter)?;
        let p = comp.ideal_point()?;
        let rho = H3Point::J.distance(&p);
        sum += (-rho).exp();
        trace
            .discs
            .push(comp.disc().map_err(|_| Error::OrbitUnstable { step: comp.steps() })?);
        trace.dist_j.push(rho);
        trace.heights.push(p.t);
        trace.escape_partial_sums.push(sum);
        trace.ideal_points.push(p);
    }
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeReport {
    pub is_cauchy_at_tail: bool,
    pub tail_increment: f64,
    pub tail_sum_estimate: f64,
    pub partial_sum: f64,
    pub height_inequality_holds: bool,
    pub height_violations: usize,
}

/// Whether `∑ exp(-ρ(j, F_n(j)))` has settled over the last quarter of
/// the trace, with a geometric estimate of the remaining tail.
pub fn rapid_escape_report(trace: &OrbitTrace) -> Result<EscapeReport> {
    let n = trace.len();
    if n < tol::MIN_TRACE {
        return Err(Error::TraceTooShort {
            len: n,
            needed: tol::MIN_TRACE,
        });
    }
    let s = &trace.escape_partial_sums;
    let quarter = n / 4;
    let tail_increment = s[n - 1] - s[n - 1 - quarter];
    let term = |k: usize| (-trace.dist_j[k]).exp();
    let (last, earlier) = (term(n - 1), term(n - 1 - quarter));
    let tail_sum_estimate = if last == 0.0 {
        0.0
    } else {
        let ratio = (last / earlier).powf(1.0 / quarter as f64);
        if ratio < 1.0 {
            last * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    };
    let height_violations = trace
        .dist_j
        .iter()
        .zip(&trace.heights)
        .filter(|&(&rho, &h)| (-rho).exp() > h + tol::HEIGHT_SLACK)
        .count();
    Ok(EscapeReport {
        is_cauchy_at_tail: tail_increment < tol::CAUCHY_TAIL,
        tail_increment,
        tail_sum_estimate,
        partial_sum: s[n - 1],
        height_inequality_holds: height_violations == 0,
        height_violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealLimit {
    pub q: ExtComplex,
    pub resid: f64,
    pub converged: bool,
}

fn window_diameter(points: &[ExtComplex]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for r in &points[i + 1..] {
            d = d.max(chordal_metric(*p, *r));
        }
    }
    d
}

/// Shadow of the last `F_n(j)` on the boundary plane, with the chordal
/// diameter of the last shadows as residual.
pub fn ideal_limit(trace: &OrbitTrace, tol: f64) -> Result<IdealLimit> {
    let n = trace.len();
    if n < tol::MIN_TRACE {
        return Err(Error::TraceTooShort {
            len: n,
            needed: tol::MIN_TRACE,
        });
    }
    let shadows: Vec<ExtComplex> = trace.ideal_points[n - tol::CONVERGENCE_WINDOW..]
        .iter()
        .map(|p| p.shadow().into())
        .collect();
    let resid = window_diameter(&shadows);
    let last = trace.ideal_points[n - 1];
    Ok(IdealLimit {
        q: last.shadow().into(),
        resid,
        converged: resid <= tol && last.t < tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: ExtComplex,
    pub converged: bool,
    /// Last value `F_N(x)`.
    pub limit: ExtComplex,
    pub diameter: f64,
    pub distance_to_q: f64,
    pub exceptional: bool,
    /// Steps `n` (1-based) at which `F_n(x)` sits on the common boundary
    /// point of the current tangent run.
    pub anchor_hits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub q: ExtComplex,
    pub q_resid: f64,
    pub verdict: Option<Verdict>,
    pub per_point: Vec<PointReport>,
    pub exceptional_set: Vec<ExtComplex>,
}

/// `α_f` for the tangent letters of the period, without repeats.
pub fn exceptional_set(set: &GeneratorSet, w: &WordSpec) -> Vec<ExtComplex> {
    let mut out: Vec<ExtComplex> = Vec::new();
    for &i in &w.period {
        let d = set.generators()[i].data;
        if d.tangent && !out.iter().any(|x| chordal_metric(*x, d.alpha) <= set.tol()) {
            out.push(d.alpha);
        }
    }
    out
}

/// Follows `F_n(x)` for each sample point over `N` steps.
pub fn pointwise_convergence(set: &GeneratorSet, w: &WordSpec, n: usize, sample_points: &[ExtComplex]) -> Result<ConvergenceReport> {
    if n < tol::MIN_POINTWISE_STEPS {
        return Err(Error::TraceTooShort {
            len: n,
            needed: tol::MIN_POINTWISE_STEPS,
        });
    }
    check_length(w, n)?;
    w.validate(set.len())?;
    if sample_points.iter().any(|p| !(p.norm() <= 1.0 + set.tol())) {
        return Err(Error::PointOutsideClosedDisc);
    }
    let x_set = exceptional_set(set, w);
    let window = tol::CONVERGENCE_WINDOW;
    let mut comp = Composition::new(set)?;
    let mut recent: Vec<VecDeque<ExtComplex>> = vec![VecDeque::with_capacity(window); sample_points.len()];
    let mut hits: Vec<Vec<usize>> = vec![Vec::new(); sample_points.len()];
    let mut shadows: VecDeque<ExtComplex> = VecDeque::with_capacity(window);
    for letter in w.letters().take(n) {
        comp.push(letter)?;
        let anchor = comp.anchor();
        for (k, &x) in sample_points.iter().enumerate() {
            let y = comp.apply(x);
            if anchor.is_some_and(|a| chordal_metric(a, y) <= set.tol()) {
                hits[k].push(comp.steps());
            }
            if recent[k].len() == window {
                recent[k].pop_front();
            }
            recent[k].push_back(y);
        }
        if shadows.len() == window {
            shadows.pop_front();
        }
        shadows.push_back(comp.ideal_point()?.shadow().into());
    }
    let q = *shadows.back().expect("n >= 1");
    let q_resid = window_diameter(shadows.make_contiguous());
    let per_point = sample_points
        .iter()
        .zip(recent.iter_mut().zip(hits))
        .map(|(&point, (vals, anchor_hits))| {
            let diameter = window_diameter(vals.make_contiguous());
            let limit = *vals.back().expect("n >= 1");
            PointReport {
                point,
                converged: diameter < tol::CONVERGENCE_DIAMETER,
                limit,
                diameter,
                distance_to_q: chordal_metric(limit, q),
                exceptional: x_set.iter().any(|x| chordal_metric(*x, point) <= set.tol()),
                anchor_hits,
            }
        })
        .collect();
    let verdict = if w.period.is_empty() {
        None
    } else {
        Some(classify_word(set, &set.graph(), w)?.verdict)
    };
    Ok(ConvergenceReport {
        q,
        q_resid,
        verdict,
        per_point,
        exceptional_set: x_set,
    })
}

/// Checks whether `D_n` is internally tangent to `D_{n+2}` from some index
/// on.
///
/// Tangency is measured by the inversive distance of the two circles,
/// `δ = (r_1² + r_2² - d²)/(2 r_1 r_2)`, which equals 1 exactly for
/// internally tangent circles and is Möbius invariant, so the test
/// `δ - 1 <= tol` does not drift as the discs shrink. A finite trace is
/// called eventually tangent when the passing tail covers at least the
/// second half of the pairs. Returns the first index of that tail.
pub fn tangency_chain_check(discs: &[Disc], tol: f64) -> (bool, Option<usize>) {
    if discs.len() < 3 {
        return (false, None);
    }
    let pairs = discs.len() - 2;
    let tangent = |a: &Disc, b: &Disc| {
        let (r1, r2) = (a.radius(), b.radius());
        let d = (a.center() - b.center()).norm();
        let gap = r1 - r2 - d;
        gap * (r1 - r2 + d) <= tol * 2.0 * r1 * r2
    };
    let witness = (0..pairs).rev().find(|&n| !tangent(&discs[n], &discs[n + 2])).map_or(0, |n| n + 1);
    if witness <= pairs / 2 {
        (true, Some(witness))
    } else {
        (false, None)
    }
}
