//! Jacobi polynomials normalized to unit weighted L² norm on [-1, 1].
//!
//! Values come from the orthonormal three-term recurrence
//!
//! ```text
//! √A_{n+1} P̂_{n+1}(x) = (x - B_n) P̂_n(x) - √A_n P̂_{n-1}(x)
//! ```
//!
//! where `B_n`, `A_n` are the monic recurrence coefficients of the weight
//! `(1-x)^a (1+x)^b`. The homogeneous form evaluates `t^n P̂_n(s/t)` with
//! the same recurrence, so collapsed-coordinate products such as
//! `P̂_i(a)(1-b)^i` stay finite where the collapse map is singular.

use crate::real::Real;

/// Recurrence coefficients for one `(a, b)` pair up to degree `max_degree`.
#[derive(Clone, Debug)]
pub struct JacobiTable<T> {
    pub a: u32,
    pub b: u32,
    p0: T,
    shift: Vec<T>,
    sqrt_step: Vec<T>,
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl<T: Real> JacobiTable<T> {
    pub fn new(a: u32, b: u32, max_degree: usize) -> Self {
        let (ai, bi) = (a as i64, b as i64);
        // h₀ = 2^{a+b+1} a! b! / (a+b+1)!
        let h0 = T::from_f64(2f64.powi((a + b + 1) as i32))
            * T::from_f64(factorial(a))
            * T::from_f64(factorial(b))
            / T::from_f64(factorial(a + b + 1));
        let p0 = T::one() / h0.sqrt();

        let shift = (0..max_degree as i64)
            .map(|n| {
                if n == 0 {
                    T::ratio(bi - ai, ai + bi + 2)
                } else {
                    let s = 2 * n + ai + bi;
                    T::ratio(bi * bi - ai * ai, s * (s + 2))
                }
            })
            .collect();

        let sqrt_step = (0..=max_degree as i64)
            .map(|n| {
                if n == 0 {
                    return T::zero();
                }
                let s = 2 * n + ai + bi;
                let num = 4 * n * (n + ai) * (n + bi) * (n + ai + bi);
                let den = s * s * (s + 1) * (s - 1);
                // Reduce before converting so large degrees keep exact inputs.
                let g = gcd(num, den);
                T::ratio(num / g, den / g).sqrt()
            })
            .collect();

        JacobiTable {
            a,
            b,
            p0,
            shift,
            sqrt_step,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.shift.len()
    }

    /// Writes `t^n P̂_n(s/t)` for `n = 0..out.len()`.
    pub fn eval_homogeneous(&self, s: T, t: T, out: &mut [T]) {
        assert!(out.len() <= self.max_degree() + 1, "degree exceeds table");
        if out.is_empty() {
            return;
        }
        out[0] = self.p0;
        if out.len() == 1 {
            return;
        }
        out[1] = (s - self.shift[0] * t) * self.p0 / self.sqrt_step[1];
        let t2 = t * t;
        for n in 1..out.len() - 1 {
            out[n + 1] = ((s - self.shift[n] * t) * out[n] - self.sqrt_step[n] * t2 * out[n - 1])
                / self.sqrt_step[n + 1];
        }
    }

    pub fn eval(&self, x: T, out: &mut [T]) {
        self.eval_homogeneous(x, T::one(), out)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// `P̂_n^{(a,b)}(x)`.
pub fn jacobi_normalized<T: Real>(n: usize, a: u32, b: u32, x: T) -> T {
    let table = JacobiTable::<T>::new(a, b, n);
    let mut out = vec![T::zero(); n + 1];
    table.eval(x, &mut out);
    out[n]
}
