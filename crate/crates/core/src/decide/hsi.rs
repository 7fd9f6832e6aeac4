//! Arithmetic over `1, +, x, ^` with big naturals.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HsiTerm {
    One,
    Var(String),
    Add(Box<HsiTerm>, Box<HsiTerm>),
    Mul(Box<HsiTerm>, Box<HsiTerm>),
    Pow(Box<HsiTerm>, Box<HsiTerm>),
}

impl HsiTerm {
    pub fn var(x: &str) -> Self {
        HsiTerm::Var(x.to_string())
    }
    pub fn add(self, o: HsiTerm) -> Self {
        HsiTerm::Add(Box::new(self), Box::new(o))
    }
    pub fn mul(self, o: HsiTerm) -> Self {
        HsiTerm::Mul(Box::new(self), Box::new(o))
    }
    pub fn pow(self, o: HsiTerm) -> Self {
        HsiTerm::Pow(Box::new(self), Box::new(o))
    }

    /// Value at a valuation; `None` for unbound variables or exponents that
    /// do not fit in 32 bits.
    pub fn eval(&self, env: &BTreeMap<String, BigUint>) -> Option<BigUint> {
        Some(match self {
            HsiTerm::One => BigUint::one(),
            HsiTerm::Var(x) => env.get(x)?.clone(),
            HsiTerm::Add(a, b) => a.eval(env)? + b.eval(env)?,
            HsiTerm::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            HsiTerm::Pow(a, b) => a.eval(env)?.pow(b.eval(env)?.to_u32()?),
        })
    }
}

impl fmt::Display for HsiTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HsiTerm::One => write!(f, "1"),
            HsiTerm::Var(x) => write!(f, "{x}"),
            HsiTerm::Add(a, b) => write!(f, "({a} + {b})"),
            HsiTerm::Mul(a, b) => write!(f, "({a} * {b})"),
            HsiTerm::Pow(a, b) => write!(f, "({a} ^ {b})"),
        }
    }
}

/// Whether both sides agree at every sample.
pub fn check_hsi_equation(lhs: &HsiTerm, rhs: &HsiTerm, samples: &[BTreeMap<String, BigUint>]) -> bool {
    samples.iter().all(|env| matches!((lhs.eval(env), rhs.eval(env)), (Some(l), Some(r)) if l == r))
}

fn poly(coeffs_of_powers: &[u32]) -> HsiTerm {
    let x = HsiTerm::var("x");
    coeffs_of_powers
        .iter()
        .map(|&k| if k == 0 { HsiTerm::One } else if k == 1 { x.clone() } else { x.clone().pow(nat(k)) })
        .reduce(HsiTerm::add)
        .expect("non-empty polynomial")
}

/// The numeral `1 + 1 + ... + 1`.
pub fn nat(n: u32) -> HsiTerm {
    (1..n).fold(HsiTerm::One, |acc, _| acc.add(HsiTerm::One))
}

/// `A = 1+x`, `B = 1+x+x^2`, `C = 1+x^3`, `D = 1+x^2+x^4`.
pub fn wilkie_polynomials() -> [HsiTerm; 4] {
    [poly(&[0, 1]), poly(&[0, 1, 2]), poly(&[0, 3]), poly(&[0, 2, 4])]
}

/// `(A^x + B^x)^y (C^y + D^y)^x = (A^y + B^y)^x (C^x + D^x)^y`.
pub fn wilkie_equation() -> (HsiTerm, HsiTerm) {
    let [a, b, c, d] = wilkie_polynomials();
    let (x, y) = (HsiTerm::var("x"), HsiTerm::var("y"));
    let side = |u: &HsiTerm, v: &HsiTerm| {
        a.clone().pow(u.clone()).add(b.clone().pow(u.clone())).pow(v.clone())
            .mul(c.clone().pow(v.clone()).add(d.clone().pow(v.clone())).pow(u.clone()))
    };
    (side(&x, &y), side(&y, &x))
}

/// `A D = B C`.
pub fn ad_bc_equation() -> (HsiTerm, HsiTerm) {
    let [a, b, c, d] = wilkie_polynomials();
    (a.mul(d), b.mul(c))
}

pub fn grid(vars: &[&str], values: &[u64]) -> Vec<BTreeMap<String, BigUint>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|env| {
                values.iter().map(move |&n| {
                    let mut e = env.clone();
                    e.insert(v.to_string(), BigUint::from(n));
                    e
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (l, r) = wilkie_equation();
        assert!(check_hsi_equation(&l, &r, &grid(&["x", "y"], &[1])));
        let (l, r) = ad_bc_equation();
        assert_eq!(l.eval(&grid(&["x"], &[2])[0]).unwrap(), BigUint::from(63u8));
        assert!(check_hsi_equation(&l, &r, &grid(&["x"], &[2])));
        let x = HsiTerm::var("x");
        assert!(check_hsi_equation(&x.clone().mul(HsiTerm::One), &x, &grid(&["x"], &[5])));
        assert!(!check_hsi_equation(&x.clone().add(HsiTerm::One), &x, &grid(&["x"], &[5])));
    }

    #[test]
    fn wilkie_sides_differ_as_terms() {
        let (l, r) = wilkie_equation();
        assert_ne!(l, r);
    }
}
