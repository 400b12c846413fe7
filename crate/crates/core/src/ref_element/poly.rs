use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::Rational;

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Mean of `λ1^a λ2^b λ3^c` over the reference triangle, `2 a! b! c! / (a+b+c+2)!`.
pub fn integrate_monomial(a: u32, b: u32, c: u32) -> Rational {
    let num = factorial(a) * factorial(b) * factorial(c) * 2;
    Rational::new(num, factorial(a + b + c + 2))
}

/// Polynomial in the three barycentric coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BaryPoly {
    terms: BTreeMap<[u32; 3], Rational>,
}

impl BaryPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(exp: [u32; 3], c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// The coordinate `λ_i`.
    pub fn coord(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    fn add_term(&mut self, exp: [u32; 3], c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        out
    }

    /// Formal partial derivative with respect to `λ_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = *e;
                d[i] -= 1;
                out.add_term(d, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    pub fn eval(&self, lambda: &[Rational; 3]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mut t = c.clone();
            for i in 0..3 {
                for _ in 0..e[i] {
                    t *= &lambda[i];
                }
            }
            acc + t
        })
    }

    /// Mean value over the reference triangle.
    pub fn mean(&self) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| acc + c * integrate_monomial(e[0], e[1], e[2]))
    }
}

/// Quadratic Lagrange basis on a triangle, ordered as the three vertices
/// followed by the midpoints opposite vertex 0, 1, 2.
pub fn p2_basis() -> [BaryPoly; 6] {
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let vertex = |i: usize| {
        let l = BaryPoly::coord(i);
        l.mul(&l.scale(&two).add(&BaryPoly::constant(-one.clone())))
    };
    let edge = |i: usize, k: usize| BaryPoly::coord(i).mul(&BaryPoly::coord(k)).scale(&four);
    [vertex(0), vertex(1), vertex(2), edge(1, 2), edge(0, 2), edge(0, 1)]
}

/// Linear Lagrange basis on a triangle.
pub fn p1_basis() -> [BaryPoly; 3] {
    [BaryPoly::coord(0), BaryPoly::coord(1), BaryPoly::coord(2)]
}
