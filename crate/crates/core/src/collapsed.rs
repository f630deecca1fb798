//! Tensor-product Gauss–Legendre rules pulled back through the collapsed
//! (Duffy-type) maps of each reference domain.
//!
//! These rules are not symmetric and use many points, but they are exact for
//! polynomials of high degree and make a convenient reference integrator.

use crate::domain::{DomainKind, Point};

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n and its derivative.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n <= 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// A collapsed tensor rule with `n` Gauss points per collapsed direction.
pub fn collapsed_rule(kind: DomainKind, n: usize) -> (Vec<Point>, Vec<f64>) {
    let (g, w) = gauss_legendre(n);
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    let line = || g.iter().copied().zip(w.iter().copied());
    match kind {
        DomainKind::Quadrilateral => {
            for (a, wa) in line() {
                for (b, wb) in line() {
                    pts.push([a, b, 0.0]);
                    wts.push(wa * wb);
                }
            }
        }
        DomainKind::Triangle => {
            for (a, wa) in line() {
                for (b, wb) in line() {
                    pts.push([(1.0 + a) * (1.0 - b) / 2.0 - 1.0, b, 0.0]);
                    wts.push(wa * wb * (1.0 - b) / 2.0);
                }
            }
        }
        DomainKind::Prism => {
            let (tp, tw) = collapsed_rule(DomainKind::Triangle, n);
            for (p, pw) in tp.iter().zip(&tw) {
                for (c, wc) in line() {
                    pts.push([p[0], p[1], c]);
                    wts.push(pw * wc);
                }
            }
        }
        DomainKind::Tetrahedron => {
            for (a, wa) in line() {
                for (b, wb) in line() {
                    for (c, wc) in line() {
                        let x = (1.0 + a) * (1.0 - b) * (1.0 - c) / 4.0 - 1.0;
                        let y = (1.0 + b) * (1.0 - c) / 2.0 - 1.0;
                        pts.push([x, y, c]);
                        wts.push(wa * wb * wc * (1.0 - b) * (1.0 - c).powi(2) / 8.0);
                    }
                }
            }
        }
        DomainKind::Pyramid => {
            for (a, wa) in line() {
                for (b, wb) in line() {
                    for (c, wc) in line() {
                        let h = (1.0 - c) / 2.0;
                        pts.push([a * h, b * h, c]);
                        wts.push(wa * wb * wc * h * h);
                    }
                }
            }
        }
        DomainKind::Hexahedron => {
            for (a, wa) in line() {
                for (b, wb) in line() {
                    for (c, wc) in line() {
                        pts.push([a, b, c]);
                        wts.push(wa * wb * wc);
                    }
                }
            }
        }
    }
    (pts, wts)
}
