//! Taylor jets of functions of one variable: the derivatives `f, f', f'', …`
//! at a fixed parameter.
//!
//! A jet is either *exact* (every derivative past the stored ones vanishes,
//! as for polynomials) or *truncated* (nothing is known past the stored ones).
//! Products of exact jets stay exact, so iterated operators on polynomial or
//! constant profiles lose no order.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    derivs: Vec<f64>,
    exact: bool,
}

impl Jet {
    /// Truncated jet from the known derivatives.
    pub fn truncated(derivs: Vec<f64>) -> Self {
        Self { derivs, exact: false }
    }

    /// Exact jet: derivatives past the given ones are zero.
    pub fn exact(derivs: Vec<f64>) -> Self {
        Self { derivs, exact: true }
    }

    pub fn constant(c: f64) -> Self {
        Self::exact(vec![c])
    }

    pub fn zero() -> Self {
        Self::exact(Vec::new())
    }

    /// Jet at `s` of the polynomial `Σ c_k s^k`.
    pub fn polynomial(coeffs: &[f64], s: f64) -> Self {
        let mut c = coeffs.to_vec();
        let mut derivs = Vec::with_capacity(c.len());
        while !c.is_empty() {
            derivs.push(c.iter().rev().fold(0.0, |acc, &a| acc * s + a));
            c = c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect();
        }
        Self::exact(derivs)
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Highest derivative order carried, `None` for exact jets.
    pub fn order(&self) -> Option<usize> {
        if self.exact {
            None
        } else {
            Some(self.derivs.len().saturating_sub(1))
        }
    }

    /// The `k`-th derivative.
    pub fn get(&self, k: usize) -> Result<f64> {
        match self.derivs.get(k) {
            Some(v) => Ok(*v),
            None if self.exact => Ok(0.0),
            None => Err(Error::JetOrder { have: self.derivs.len().saturating_sub(1), need: k }),
        }
    }

    pub fn value(&self) -> Result<f64> {
        self.get(0)
    }

    pub fn deriv(&self) -> Jet {
        Self { derivs: self.derivs.iter().skip(1).copied().collect(), exact: self.exact }
    }

    pub fn scale(&self, a: f64) -> Jet {
        Self { derivs: self.derivs.iter().map(|d| a * d).collect(), exact: self.exact }
    }

    fn len_with(&self, o: &Jet) -> usize {
        match (self.exact, o.exact) {
            (true, true) => self.derivs.len().max(o.derivs.len()),
            (true, false) => o.derivs.len(),
            (false, true) => self.derivs.len(),
            (false, false) => self.derivs.len().min(o.derivs.len()),
        }
    }

    fn at(&self, k: usize) -> f64 {
        self.derivs.get(k).copied().unwrap_or(0.0)
    }

    fn combine(&self, o: &Jet, b: f64) -> Jet {
        let n = self.len_with(o);
        Self { derivs: (0..n).map(|k| self.at(k) + b * o.at(k)).collect(), exact: self.exact && o.exact }
    }

    fn product(&self, o: &Jet) -> Jet {
        let exact = self.exact && o.exact;
        let n = if exact {
            if self.derivs.is_empty() || o.derivs.is_empty() {
                0
            } else {
                self.derivs.len() + o.derivs.len() - 1
            }
        } else {
            self.len_with(o)
        };
        let mut derivs = vec![0.0; n];
        for (k, slot) in derivs.iter_mut().enumerate() {
            let mut binom = 1.0;
            for j in 0..=k {
                *slot += binom * self.at(j) * o.at(k - j);
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
        }
        Self { derivs, exact }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        self.combine(o, 1.0)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        self.combine(o, -1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        self.product(o)
    }
}

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, j: &Jet) -> Jet {
        j.scale(self)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
