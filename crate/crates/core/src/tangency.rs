//! Tangency points `α_f`, `β_f`, the derivative quantity `γ_f`, and the
//! tangency graph of a generator set.

use std::collections::HashSet;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::{chordal_metric, Complex, Disc, ExtComplex, MobiusMap};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangencyData {
    pub tangent: bool,
    pub alpha: ExtComplex,
    pub beta: ExtComplex,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl TangencyData {
    fn detached() -> Self {
        TangencyData {
            tangent: false,
            alpha: ExtComplex::new(0.0, 0.0),
            beta: ExtComplex::Infinity,
            gamma: None,
        }
    }

    /// `α_f` as a finite point; `None` for a non-tangent map.
    pub fn alpha_point(&self) -> Option<Complex> {
        self.tangent.then(|| self.alpha.finite()).flatten()
    }

    pub fn beta_point(&self) -> Option<Complex> {
        self.tangent.then(|| self.beta.finite()).flatten()
    }
}

/// Tangency data of `f`, which must send the unit disc strictly inside
/// itself.
///
/// `f(𝔻)` is tangent to the unit circle when `|center| + radius >= 1 - tol`;
/// the contact point is then `β = center/|center|` and `α = f⁻¹(β)`.
pub fn tangency_data(f: &MobiusMap, tol: f64) -> Result<TangencyData> {
    let image = match f.in_class_md() {
        (true, Some(e)) => e,
        _ => {
            return Err(Error::NotInMD {
                offenders: vec![format!("{:?}", f.entries())],
            })
        }
    };
    let c = image.center();
    if image.outer_reach() < 1.0 - tol || c.norm() == 0.0 {
        return Ok(TangencyData::detached());
    }
    let beta = c / c.norm();
    let alpha = f.inverse().apply_complex(beta);
    let alpha = alpha / alpha.norm();
    let gamma = 1.0 / f.derivative_modulus(alpha)?;
    Ok(TangencyData {
        tangent: true,
        alpha: alpha.into(),
        beta: beta.into(),
        gamma: Some(gamma),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generator {
    pub name: String,
    pub map: MobiusMap,
    pub image: Disc,
    pub data: TangencyData,
}

/// An ordered, named, finite subset of maps sending 𝔻 strictly inside 𝔻.
/// The order fixes the alphabet `0..b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSet {
    generators: Vec<Generator>,
    tol: f64,
}

impl GeneratorSet {
    pub fn new<S: Into<String>>(maps: Vec<(S, MobiusMap)>, tol: f64) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptyGeneratorSet);
        }
        let mut seen = HashSet::new();
        let mut offenders = Vec::new();
        let mut generators = Vec::with_capacity(maps.len());
        for (name, map) in maps {
            let name = name.into();
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateName(name));
            }
            match map.in_class_md() {
                (true, Some(image)) => {
                    let data = tangency_data(&map, tol)?;
                    generators.push(Generator { name, map, image, data });
                }
                _ => offenders.push(name),
            }
        }
        if !offenders.is_empty() {
            return Err(Error::NotInMD { offenders });
        }
        Ok(GeneratorSet { generators, tol })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, i: usize) -> Result<&Generator> {
        self.generators.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            size: self.len(),
        })
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn gammas(&self) -> Vec<Option<f64>> {
        self.generators.iter().map(|g| g.data.gamma).collect()
    }

    pub fn graph(&self) -> TangencyGraph {
        TangencyGraph::build(self, self.tol)
    }
}

/// Directed graph on the generators with an edge `i → j` iff `α_i = β_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangencyGraph {
    names: Vec<String>,
    adjacency: Vec<Vec<u8>>,
    tol: f64,
}

impl TangencyGraph {
    pub fn build(set: &GeneratorSet, tol: f64) -> Self {
        let gens = set.generators();
        let adjacency = gens
            .iter()
            .map(|f| {
                gens.iter()
                    .map(|g| {
                        let edge = f.data.tangent && g.data.tangent && chordal_metric(f.data.alpha, g.data.beta) <= tol;
                        edge as u8
                    })
                    .collect()
            })
            .collect();
        let graph = TangencyGraph {
            names: set.names(),
            adjacency,
            tol,
        };
        if graph.is_complete() {
            let p = gens[0].data.alpha;
            let shared = gens.iter().all(|g| {
                let d = g.data;
                chordal_metric(d.alpha, p) <= tol && chordal_metric(d.beta, p) <= tol && chordal_metric(g.map.apply(p), p) <= tol
            });
            if !shared {
                warn!("complete tangency graph but generators do not share a boundary fixed point");
            }
        }
        graph
    }

    /// Graph from a raw 0/1 matrix, vertices named by index.
    pub fn from_adjacency(adjacency: Vec<Vec<u8>>) -> Self {
        let names = (0..adjacency.len()).map(|i| i.to_string()).collect();
        TangencyGraph {
            names,
            adjacency,
            tol: tol::DEFAULT_TOL,
        }
    }

    pub fn size(&self) -> usize {
        self.adjacency.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn adjacency(&self) -> &[Vec<u8>] {
        &self.adjacency
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j] != 0
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn named_edges(&self) -> Vec<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(i, j)| (self.names[i].clone(), self.names[j].clone()))
            .collect()
    }

    /// Directed cycle search (self-loops count).
    pub fn has_cycle(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Grey,
            Black,
        }
        let n = self.size();
        let mut mark = vec![Mark::White; n];
        for root in 0..n {
            if mark[root] != Mark::White {
                continue;
            }
            // iterative DFS: (vertex, next neighbour to try)
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Grey;
            while let Some(top) = stack.last_mut() {
                let (v, j) = *top;
                if j == n {
                    mark[v] = Mark::Black;
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                if !self.has_edge(v, j) {
                    continue;
                }
                match mark[j] {
                    Mark::Grey => return true,
                    Mark::White => {
                        mark[j] = Mark::Grey;
                        stack.push((j, 0));
                    }
                    Mark::Black => {}
                }
            }
        }
        false
    }

    pub fn is_complete(&self) -> bool {
        self.size() > 0 && self.adjacency.iter().all(|row| row.iter().all(|&e| e != 0))
    }

    /// Largest eigenvalue modulus of the adjacency matrix.
    ///
    /// The matrix is split into strongly connected components; on each
    /// irreducible block power iteration runs on `A + I` (primitive, so it
    /// converges) and stops when the Collatz-Wielandt bounds
    /// `min (Mx)_i/x_i <= ρ(M) <= max (Mx)_i/x_i` agree to
    /// [`tol::SPECTRAL_TOL`]. Blocks are needed because on a reducible
    /// matrix with Jordan structure the plain iteration converges only
    /// like `1/k`.
    pub fn spectral_radius(&self) -> Result<f64> {
        let mut rho: f64 = 0.0;
        for comp in self.strong_components() {
            let r = if comp.len() == 1 {
                let v = comp[0];
                if self.has_edge(v, v) {
                    1.0
                } else {
                    0.0
                }
            } else {
                self.block_radius(&comp)?
            };
            rho = rho.max(r);
        }
        Ok(rho)
    }

    fn block_radius(&self, comp: &[usize]) -> Result<f64> {
        let m = comp.len();
        let mut x = vec![1.0 / m as f64; m];
        let mut y = vec![0.0; m];
        for _ in 0..tol::MAX_POWER_ITERATIONS {
            for (i, &vi) in comp.iter().enumerate() {
                y[i] = x[i]
                    + comp
                        .iter()
                        .enumerate()
                        .filter(|&(_, &vj)| self.has_edge(vi, vj))
                        .map(|(j, _)| x[j])
                        .sum::<f64>();
            }
            let (lo, hi) = x.iter().zip(&y).fold((f64::INFINITY, 0.0f64), |(lo, hi), (&xi, &yi)| {
                let r = yi / xi;
                (lo.min(r), hi.max(r))
            });
            if hi - lo <= tol::SPECTRAL_TOL * hi {
                return Ok(0.5 * (lo + hi) - 1.0);
            }
            let s: f64 = y.iter().sum();
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi = yi / s;
            }
        }
        Err(Error::NoConvergence {
            iterations: tol::MAX_POWER_ITERATIONS,
        })
    }

    /// Tarjan's algorithm.
    fn strong_components(&self) -> Vec<Vec<usize>> {
        struct State<'a> {
            g: &'a TangencyGraph,
            index: Vec<Option<usize>>,
            low: Vec<usize>,
            on_stack: Vec<bool>,
            stack: Vec<usize>,
            next: usize,
            out: Vec<Vec<usize>>,
        }
        fn visit(s: &mut State, v: usize) {
            s.index[v] = Some(s.next);
            s.low[v] = s.next;
            s.next += 1;
            s.stack.push(v);
            s.on_stack[v] = true;
            for w in 0..s.g.size() {
                if !s.g.has_edge(v, w) {
                    continue;
                }
                match s.index[w] {
                    None => {
                        visit(s, w);
                        s.low[v] = s.low[v].min(s.low[w]);
                    }
                    Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                    _ => {}
                }
            }
            if Some(s.low[v]) == s.index[v] {
                let mut comp = Vec::new();
                while let Some(w) = s.stack.pop() {
                    s.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                s.out.push(comp);
            }
        }
        let n = self.size();
        let mut s = State {
            g: self,
            index: vec![None; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            next: 0,
            out: Vec::new(),
        };
        for v in 0..n {
            if s.index[v].is_none() {
                visit(&mut s, v);
            }
        }
        s.out
    }
}
