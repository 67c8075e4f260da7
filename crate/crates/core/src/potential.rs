//! Potential families: finite polynomials and a single step wall.

use serde::{Deserialize, Serialize};

/// `V(x) = sum_n coefficients[n] * x^n`.
///
/// The degree is uncapped, but the Hermite route used by the semiclassical
/// acceleration is only reliable up to degree ~30 in double precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialPotential {
    coefficients: Vec<f64>,
}

impl PolynomialPotential {
    /// An empty coefficient list is treated as the zero potential.
    pub fn new(coefficients: Vec<f64>) -> Self {
        let coefficients = if coefficients.is_empty() {
            vec![0.0]
        } else {
            coefficients
        };
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self::new(vec![0.0])
    }

    /// `V = mass * omega^2 * x^2 / 2`.
    pub fn harmonic(mass: f64, omega: f64) -> Self {
        Self::new(vec![0.0, 0.0, 0.5 * mass * omega * omega])
    }

    /// `V = alpha * x^3`.
    pub fn cubic(alpha: f64) -> Self {
        Self::new(vec![0.0, 0.0, 0.0, alpha])
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Index of the last stored coefficient (trailing zeros included).
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn value(&self, x: f64) -> f64 {
        horner(&self.coefficients, x)
    }

    /// Exact `order`-th derivative at `x`.
    pub fn derivative(&self, x: f64, order: usize) -> f64 {
        if order > self.degree() {
            return 0.0;
        }
        self.coefficients[order..]
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (j, &a)| acc * x + a * falling_factorial(j + order, order))
    }

    /// The `order`-th derivative as a polynomial in its own right.
    pub fn derivative_polynomial(&self, order: usize) -> PolynomialPotential {
        if order > self.degree() {
            return Self::zero();
        }
        Self::new(
            self.coefficients[order..]
                .iter()
                .enumerate()
                .map(|(j, &a)| a * falling_factorial(j + order, order))
                .collect(),
        )
    }

    /// `dV/dx`.
    pub fn gradient(&self, x: f64) -> f64 {
        self.derivative(x, 1)
    }
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// `n (n-1) ... (n-k+1)`
fn falling_factorial(n: usize, k: usize) -> f64 {
    ((n + 1 - k)..=n).fold(1.0, |acc, m| acc * m as f64)
}

/// Step of height `height` to the right of `wall`: `V = 0` for `x <= wall`,
/// `V = height` for `x > wall`.
///
/// There is deliberately no derivative method; the wall force only enters
/// through [`crate::semiclassical::accel_step`] and the grid oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPotential {
    pub height: f64,
    pub wall: f64,
}

impl StepPotential {
    pub fn new(height: f64, wall: f64) -> Self {
        Self { height, wall }
    }

    pub fn value(&self, x: f64) -> f64 {
        if x <= self.wall {
            0.0
        } else {
            self.height
        }
    }
}

/// Either potential family, for code that only needs `V(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Potential {
    Polynomial(PolynomialPotential),
    Step(StepPotential),
}

impl Potential {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Potential::Polynomial(p) => p.value(x),
            Potential::Step(s) => s.value(x),
        }
    }
}

impl From<PolynomialPotential> for Potential {
    fn from(p: PolynomialPotential) -> Self {
        Potential::Polynomial(p)
    }
}

impl From<StepPotential> for Potential {
    fn from(s: StepPotential) -> Self {
        Potential::Step(s)
    }
}

/// `R_n(y) = i^{-n} H_n(i y)`, the real-valued rotation of the physicists'
/// Hermite polynomial.
///
/// Uses `R_0 = 1`, `R_1 = 2y`, `R_{n+1} = 2y R_n + 2n R_{n-1}`.
pub fn hermite_real(n: usize, y: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * y;
    for k in 1..n {
        let next = 2.0 * y * cur + 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn polynomial_values() {
        assert_eq!(PolynomialPotential::new(vec![0.0, 0.0, 0.5]).value(2.0), 2.0);
        assert_eq!(PolynomialPotential::new(vec![5.0]).value(-17.3), 5.0);
        assert_eq!(PolynomialPotential::cubic(1.0).value(1.5), 3.375);
        assert_eq!(PolynomialPotential::new(vec![]).value(3.0), 0.0);
    }

    #[test]
    fn polynomial_derivatives() {
        let cubic = PolynomialPotential::cubic(1.0);
        assert_eq!(cubic.derivative(2.0, 3), 6.0);
        assert_eq!(cubic.derivative(2.0, 4), 0.0);
        assert_eq!(cubic.derivative(2.0, 0), 8.0);
        let harmonic = PolynomialPotential::harmonic(1.0, 2.0);
        assert_eq!(harmonic.derivative(0.5, 1), 2.0);
        assert_eq!(harmonic.derivative(0.5, 2), 4.0);
    }

    #[test]
    fn step_values() {
        let s = StepPotential::new(5.0, 1.0);
        assert_eq!(s.value(0.0), 0.0);
        assert_eq!(s.value(1.0), 0.0);
        assert_eq!(s.value(2.0), 5.0);
    }

    #[test]
    fn hermite_small_orders() {
        assert_eq!(hermite_real(0, 3.7), 1.0);
        assert_eq!(hermite_real(2, 1.0), 6.0);
        assert_eq!(hermite_real(3, 0.5), 7.0);
    }

    #[test]
    fn hermite_at_origin() {
        let fact = |n: usize| (1..=n).fold(1.0, |a, k| a * k as f64);
        for n in 0..=10 {
            let expected = if n % 2 == 1 { 0.0 } else { fact(n) / fact(n / 2) };
            assert_eq!(hermite_real(n, 0.0), expected, "n = {n}");
        }
    }

    #[test]
    fn hermite_matches_explicit_sum() {
        // i^{-n} H_n(iy) = sum_k (2y)^{n-2k} n! / (k! (n-2k)!)
        let fact = |n: usize| (1..=n).fold(1.0, |a, k| a * k as f64);
        for n in 0..12 {
            for &y in &[-1.3f64, 0.2, 2.5] {
                let direct: f64 = (0..=n / 2)
                    .map(|k| (2.0 * y).powi((n - 2 * k) as i32) * fact(n) / (fact(k) * fact(n - 2 * k)))
                    .sum();
                assert_relative_eq!(hermite_real(n, y), direct, max_relative = 1e-13);
            }
        }
    }

    proptest! {
        #[test]
        fn hermite_recurrence_residual(n in 1usize..30, y in -10.0f64..10.0) {
            let lhs = hermite_real(n + 1, y);
            let rhs = 2.0 * y * hermite_real(n, y) + 2.0 * n as f64 * hermite_real(n - 1, y);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn gradient_matches_finite_difference(
            coefficients in prop::collection::vec(-2.0f64..2.0, 1..8),
            x in -2.0f64..2.0,
        ) {
            let pot = PolynomialPotential::new(coefficients);
            let h = 1e-5;
            let fd = (pot.value(x + h) - pot.value(x - h)) / (2.0 * h);
            let exact = pot.gradient(x);
            let scale: f64 = pot.coefficients().iter().map(|a| a.abs()).sum::<f64>() * 2f64.powi(8);
            prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0) + 1e-9 * scale);
        }
    }
}
