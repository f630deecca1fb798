//! Closed-form integrals of monomials `x^p y^q z^r` over the reference
//! domains, for checking rules independently of the orthonormal bases.

use crate::domain::{DomainKind, Point};

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn line(p: u32) -> f64 {
    if p.is_multiple_of(2) {
        2.0 / (p as f64 + 1.0)
    } else {
        0.0
    }
}

/// `∫ (2u-1)^p (2v-1)^q (2w-1)^r` over the unit simplex `u,v,w >= 0,
/// u+v+w <= 1`, expanded binomially against the Dirichlet moments
/// `∫ u^a v^b w^c = a! b! c! / (a+b+c+d)!` in dimension `d`.
fn simplex(exps: &[u32]) -> f64 {
    let d = exps.len() as u32;
    let mut total = 0.0;
    let mut stack = vec![(0usize, 1.0f64, 0u32, 1.0f64)];
    // Iterative expansion over each coordinate's binomial sum.
    while let Some((axis, coeff, sum_exp, fact_prod)) = stack.pop() {
        if axis == exps.len() {
            total += coeff * fact_prod / factorial(sum_exp + d);
            continue;
        }
        let p = exps[axis];
        for a in 0..=p {
            let sign = if (p - a).is_multiple_of(2) { 1.0 } else { -1.0 };
            let c = binomial(p, a) * 2f64.powi(a as i32) * sign;
            stack.push((axis + 1, coeff * c, sum_exp + a, fact_prod * factorial(a)));
        }
    }
    // Jacobian of x = 2u - 1 in each direction.
    total * 2f64.powi(d as i32)
}

/// Exact `∫ x^p y^q z^r dΩ`; `r` is ignored on two-dimensional domains.
pub fn monomial_integral(kind: DomainKind, [p, q, r]: [u32; 3]) -> f64 {
    match kind {
        DomainKind::Quadrilateral => line(p) * line(q),
        DomainKind::Hexahedron => line(p) * line(q) * line(r),
        DomainKind::Triangle => simplex(&[p, q]),
        DomainKind::Tetrahedron => simplex(&[p, q, r]),
        DomainKind::Prism => simplex(&[p, q]) * line(r),
        DomainKind::Pyramid => {
            // Slice at height z is the square |x|, |y| <= h with h = (1-z)/2;
            // with s = h the z-integral becomes 2 ∫₀¹ (1-2s)^r s^{p+q+2} ds.
            if p % 2 == 1 || q % 2 == 1 {
                return 0.0;
            }
            let square = 4.0 / ((p as f64 + 1.0) * (q as f64 + 1.0));
            let m = p + q + 2;
            let z: f64 = (0..=r)
                .map(|k| binomial(r, k) * (-2f64).powi(k as i32) / (m + k + 1) as f64)
                .sum();
            square * 2.0 * z
        }
    }
}

/// Exponent triples of total degree `<= degree`.
pub fn monomial_exponents(kind: DomainKind, degree: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for p in 0..=degree {
        for q in 0..=degree - p {
            if kind.dimension() == 2 {
                out.push([p, q, 0]);
            } else {
                for r in 0..=degree - p - q {
                    out.push([p, q, r]);
                }
            }
        }
    }
    out
}

/// Largest absolute integration error over all monomials of total degree
/// `<= degree`.
pub fn max_monomial_error(kind: DomainKind, points: &[Point], weights: &[f64], degree: u32) -> f64 {
    monomial_exponents(kind, degree)
        .into_iter()
        .map(|e| {
            let approx: f64 = points
                .iter()
                .zip(weights)
                .map(|(x, w)| {
                    w * x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32) * x[2].powi(e[2] as i32)
                })
                .sum();
            (approx - monomial_integral(kind, e)).abs()
        })
        .fold(0.0, f64::max)
}
