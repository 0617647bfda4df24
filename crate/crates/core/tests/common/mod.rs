#![allow(dead_code)]

use std::path::PathBuf;

use disc_dynamics::cli::load_generators;
use disc_dynamics::{Complex, GeneratorSet, MobiusMap};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub const G: usize = 0;
pub const H: usize = 1;
pub const K: usize = 2;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn ghk() -> GeneratorSet {
    load_generators(&data("ghk.json"), None).unwrap()
}

/// `e^{iθ}(z - a)/(1 - conj(a) z)`.
pub fn automorphism(a: Complex, theta: f64) -> MobiusMap {
    let rot = Complex::from_polar(1.0, theta);
    MobiusMap::new(rot, -rot * a, -a.conj(), Complex::new(1.0, 0.0)).unwrap()
}

pub fn random_in_disc(rng: &mut impl Rng, r: f64) -> Complex {
    let rho = r * rng.gen::<f64>().sqrt();
    Complex::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// `A ∘ (z ↦ s z) ∘ B` with disc automorphisms `A`, `B` and `0 < s < 1`:
/// sends 𝔻 onto a disc compactly inside 𝔻.
pub fn random_md_map(rng: &mut impl Rng) -> MobiusMap {
    let a = automorphism(random_in_disc(rng, 0.8), rng.gen_range(0.0..6.3));
    let b = automorphism(random_in_disc(rng, 0.8), rng.gen_range(0.0..6.3));
    let s = rng.gen_range(0.05..0.95);
    let scale = MobiusMap::from_real(s, 0.0, 0.0, 1.0).unwrap();
    a.compose(&scale).compose(&b)
}

pub fn random_map(rng: &mut impl Rng) -> MobiusMap {
    loop {
        let mut c = || Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if let Ok(f) = MobiusMap::new(c(), c(), c(), c()) {
            if f.det().norm() > 0.5 {
                return f;
            }
        }
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

/// Real 2x2 matrix over the rationals, acting as a Möbius map.
#[derive(Clone, Debug)]
pub struct RatMap(pub [BigRational; 4]);

impl RatMap {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        RatMap([a, b, c, d])
    }

    pub fn compose(&self, o: &RatMap) -> RatMap {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        RatMap([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn apply(&self, x: &BigRational) -> BigRational {
        let [a, b, c, d] = &self.0;
        (a * x + b) / (c * x + d)
    }
}

/// Polynomial with rational coefficients, lowest degree first.
pub type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = trim(a.clone());
    let b = trim(b.clone());
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &coef * c;
        }
        q[shift] = coef;
        r = trim(r);
    }
    (trim(q), r)
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let (_, r) = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Characteristic polynomial `det(λI - A)` by cofactor expansion over
/// polynomial entries (fine for n <= 4).
pub fn char_poly(adj: &[Vec<u8>]) -> Poly {
    let n = adj.len();
    let entry = |i: usize, j: usize| -> Poly {
        let a = BigRational::from_integer(BigInt::from(adj[i][j] as i64));
        if i == j {
            vec![-a, BigRational::one()]
        } else {
            trim(vec![-a])
        }
    };
    fn mul(p: &Poly, q: &Poly) -> Poly {
        if p.is_empty() || q.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); p.len() + q.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        trim(out)
    }
    fn add(p: &Poly, q: &Poly, sign: i64) -> Poly {
        let n = p.len().max(q.len());
        let s = BigRational::from_integer(BigInt::from(sign));
        trim(
            (0..n)
                .map(|i| p.get(i).cloned().unwrap_or_else(BigRational::zero) + &s * q.get(i).cloned().unwrap_or_else(BigRational::zero))
                .collect(),
        )
    }
    fn det(m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Vec::new();
        for col in 0..n {
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, p)| p.clone()).collect())
                .collect();
            let term = mul(&m[0][col], &det(&minor));
            acc = add(&acc, &term, if col % 2 == 0 { 1 } else { -1 });
        }
        acc
    }
    let m: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    det(&m)
}

fn sturm_sign_changes(chain: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| {
            let v = eval(p, x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Largest real root of `p`, located by bisection on Sturm's theorem
/// applied to the square-free part, to within `width`.
pub fn largest_real_root(p: &Poly, lo: f64, hi: f64, width: f64) -> f64 {
    let sqfree = rem(p, &gcd(p, &derivative(p))).0;
    let mut chain = vec![sqfree.clone(), derivative(&sqfree)];
    loop {
        let n = chain.len();
        let (_, r) = rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    let q = |x: f64| BigRational::from_float(x).unwrap();
    let roots_in = |a: &BigRational, b: &BigRational| sturm_sign_changes(&chain, a) - sturm_sign_changes(&chain, b);
    let (mut lo, mut hi) = (q(lo), q(hi));
    assert!(roots_in(&lo, &hi) > 0, "no root in the starting interval");
    let two = rat(2, 1);
    while to_f64(&(&hi - &lo)) > width {
        let mid = (&lo + &hi) / &two;
        if roots_in(&mid, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    to_f64(&((lo + hi) / two))
}
