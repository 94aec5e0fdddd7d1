use alloc::vec::Vec;

use super::{Partial, ScalarField};
use crate::Point3;

/// Time-independent polynomial Σ c·x₁^a x₂^b x₃^c with exact partials.
#[derive(Clone, Debug, Default)]
pub struct Polynomial {
    terms: Vec<(f64, [u8; 3])>,
}

impl Polynomial {
    pub fn new(terms: Vec<(f64, [u8; 3])>) -> Self {
        Polynomial { terms }
    }

    /// The coordinate function xᵢ.
    pub fn coordinate(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Polynomial::new(alloc::vec![(1.0, e)])
    }

    pub fn terms(&self) -> &[(f64, [u8; 3])] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, e)| e.iter().map(|&v| v as usize).sum()).max().unwrap_or(0)
    }
}

fn falling(n: u8, k: u8) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

impl ScalarField for Polynomial {
    fn partial(&self, d: Partial, _t: f64, x: Point3) -> f64 {
        if d.t > 0 {
            return 0.0;
        }
        let mut total = 0.0;
        for (c, e) in &self.terms {
            if (0..3).any(|i| d.x[i] > e[i]) {
                continue;
            }
            let mut v = *c;
            for i in 0..3 {
                v *= falling(e[i], d.x[i]) * libm::pow(x[i], (e[i] - d.x[i]) as f64);
            }
            total += v;
        }
        total
    }

    fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == 0.0)
    }
}
