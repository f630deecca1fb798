//! Orthonormal polynomial bases on the reference domains and the reduced
//! objective index sets used when fitting symmetric rules.

mod jacobi;

pub use jacobi::{jacobi_normalized, JacobiTable};

use crate::domain::{DomainKind, Point};
use crate::real::Real;

/// Degrees `(i, j, k)` of a basis function; `k = 0` in two dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl BasisIndex {
    pub const fn new(i: u32, j: u32, k: u32) -> Self {
        BasisIndex { i, j, k }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j + self.k
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }
}

/// Every index of total degree `<= phi`, lexicographic in `(i, j, k)`.
pub fn full_indices(kind: DomainKind, phi: u32) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for i in 0..=phi {
        for j in 0..=phi - i {
            if kind.dimension() == 2 {
                out.push(BasisIndex::new(i, j, 0));
            } else {
                for k in 0..=phi - i - j {
                    out.push(BasisIndex::new(i, j, k));
                }
            }
        }
    }
    out
}

fn is_objective(kind: DomainKind, idx: &BasisIndex) -> bool {
    let even = |v: u32| v.is_multiple_of(2);
    let BasisIndex { i, j, k } = *idx;
    match kind {
        DomainKind::Triangle => i <= j,
        DomainKind::Quadrilateral => i <= j && even(i) && even(j),
        DomainKind::Tetrahedron => i <= j && j <= k,
        DomainKind::Prism => i <= j && even(k),
        DomainKind::Pyramid => i <= j && even(i) && even(j),
        DomainKind::Hexahedron => i <= j && j <= k && even(i) && even(j) && even(k),
    }
}

/// Objective basis of a domain at strength `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectiveBasis {
    pub kind: DomainKind,
    pub phi: u32,
    pub indices: Vec<BasisIndex>,
}

pub fn objective_indices(kind: DomainKind, phi: u32) -> ObjectiveBasis {
    ObjectiveBasis {
        kind,
        phi,
        indices: full_indices(kind, phi)
            .into_iter()
            .filter(|idx| is_objective(kind, idx))
            .collect(),
    }
}

/// `∫ ψ dΩ`: `√|Ω|` for the constant mode and zero otherwise.
pub fn basis_integral<T: Real>(kind: DomainKind, index: &BasisIndex) -> T {
    if index.is_constant() {
        kind.volume_ratio().to_real::<T>().sqrt()
    } else {
        T::zero()
    }
}

/// Evaluates the orthonormal basis of one domain up to a fixed degree.
///
/// Coefficient tables are built once, so a single evaluator should be
/// reused across many points.
#[derive(Clone, Debug)]
pub struct OrthoBasis<T> {
    kind: DomainKind,
    phi: u32,
    indices: Vec<BasisIndex>,
    legendre: JacobiTable<T>,
    // tables[m] has weight (1 - x)^m.
    tables: Vec<JacobiTable<T>>,
    scale: T,
}

impl<T: Real> OrthoBasis<T> {
    /// Full basis of total degree `<= phi`.
    pub fn full(kind: DomainKind, phi: u32) -> Self {
        Self::with_indices(kind, phi, full_indices(kind, phi))
    }

    /// Objective basis at strength `phi`.
    pub fn objective(kind: DomainKind, phi: u32) -> Self {
        Self::with_indices(kind, phi, objective_indices(kind, phi).indices)
    }

    fn with_indices(kind: DomainKind, phi: u32, indices: Vec<BasisIndex>) -> Self {
        let n = phi as usize;
        let max_weight = 2 * phi + 2;
        let tables = (0..=max_weight)
            .map(|m| JacobiTable::new(m, 0, n))
            .collect();
        let scale = match kind {
            DomainKind::Triangle | DomainKind::Prism => T::from_f64(2.0).sqrt(),
            DomainKind::Tetrahedron => T::from_f64(8.0).sqrt(),
            DomainKind::Pyramid => T::from_f64(2.0),
            DomainKind::Quadrilateral | DomainKind::Hexahedron => T::one(),
        };
        OrthoBasis {
            kind,
            phi,
            indices,
            legendre: JacobiTable::new(0, 0, n),
            tables,
            scale,
        }
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn phi(&self) -> u32 {
        self.phi
    }

    pub fn indices(&self) -> &[BasisIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Values at `point`, one per index.
    pub fn eval(&self, point: &Point<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.indices.len()];
        self.eval_into(point, &mut out);
        out
    }

    /// Adds `weight · ψ(point)` to `acc` for every index.
    pub fn accumulate(&self, point: &Point<T>, weight: T, acc: &mut [T]) {
        let mut scratch = Scratch::new(self.phi as usize);
        self.eval_with(point, &mut scratch, |n, v| acc[n] += weight * v);
    }

    pub fn eval_into(&self, point: &Point<T>, out: &mut [T]) {
        assert_eq!(out.len(), self.indices.len());
        let mut scratch = Scratch::new(self.phi as usize);
        self.eval_with(point, &mut scratch, |n, v| out[n] = v);
    }

    fn eval_with(&self, point: &Point<T>, s: &mut Scratch<T>, mut emit: impl FnMut(usize, T)) {
        let [x, y, z] = *point;
        let one = T::one();
        let two = T::from_f64(2.0);
        let n = self.phi as usize + 1;

        match self.kind {
            DomainKind::Quadrilateral | DomainKind::Hexahedron => {
                self.legendre.eval(x, &mut s.u[..n]);
                self.legendre.eval(y, &mut s.v[..n]);
                self.legendre.eval(z, &mut s.w[..n]);
                for (m, idx) in self.indices.iter().enumerate() {
                    let (i, j, k) = (idx.i as usize, idx.j as usize, idx.k as usize);
                    let mut v = s.u[i] * s.v[j];
                    if self.kind == DomainKind::Hexahedron {
                        v *= s.w[k];
                    }
                    emit(m, v);
                }
            }
            DomainKind::Triangle | DomainKind::Prism => {
                // a = (1 + 2x + y)/(1 - y), b = y
                self.legendre
                    .eval_homogeneous(one + two * x + y, one - y, &mut s.u[..n]);
                self.legendre.eval(z, &mut s.w[..n]);
                let mut last_i = usize::MAX;
                for (m, idx) in self.indices.iter().enumerate() {
                    let (i, j, k) = (idx.i as usize, idx.j as usize, idx.k as usize);
                    if i != last_i {
                        self.tables[2 * i + 1].eval(y, &mut s.v[..n - i]);
                        last_i = i;
                    }
                    let mut v = self.scale * s.u[i] * s.v[j];
                    if self.kind == DomainKind::Prism {
                        v *= s.w[k];
                    }
                    emit(m, v);
                }
            }
            DomainKind::Tetrahedron => {
                // a = (2 + 2x + y + z)/(-y - z), b = (1 + 2y + z)/(1 - z), c = z;
                // (1 - b)(1 - c) = 2(-y - z).
                self.legendre
                    .eval_homogeneous(two + two * x + y + z, -y - z, &mut s.u[..n]);
                let mut pow2 = one;
                for i in 0..n {
                    s.u[i] *= pow2;
                    pow2 *= two;
                }
                let mut last = (usize::MAX, usize::MAX);
                for (m, idx) in self.indices.iter().enumerate() {
                    let (i, j, k) = (idx.i as usize, idx.j as usize, idx.k as usize);
                    if last.0 != i {
                        self.tables[2 * i + 1].eval_homogeneous(
                            one + two * y + z,
                            one - z,
                            &mut s.v[..n - i],
                        );
                    }
                    if last != (i, j) {
                        self.tables[2 * i + 2 * j + 2].eval(z, &mut s.w[..n - i - j]);
                        last = (i, j);
                    }
                    emit(m, self.scale * s.u[i] * s.v[j] * s.w[k]);
                }
            }
            DomainKind::Pyramid => {
                // a = 2x/(1 - z), b = 2y/(1 - z), c = z
                self.legendre
                    .eval_homogeneous(two * x, one - z, &mut s.u[..n]);
                self.legendre
                    .eval_homogeneous(two * y, one - z, &mut s.v[..n]);
                let mut last = (usize::MAX, usize::MAX);
                for (m, idx) in self.indices.iter().enumerate() {
                    let (i, j, k) = (idx.i as usize, idx.j as usize, idx.k as usize);
                    if last != (i, j) {
                        self.tables[2 * i + 2 * j + 2].eval(z, &mut s.w[..n - i - j]);
                        last = (i, j);
                    }
                    emit(m, self.scale * s.u[i] * s.v[j] * s.w[k]);
                }
            }
        }
    }
}

struct Scratch<T> {
    u: Vec<T>,
    v: Vec<T>,
    w: Vec<T>,
}

impl<T: Real> Scratch<T> {
    fn new(phi: usize) -> Self {
        Scratch {
            u: vec![T::zero(); phi + 1],
            v: vec![T::zero(); phi + 1],
            w: vec![T::zero(); phi + 1],
        }
    }
}

/// Values of every basis function of total degree `<= phi` at `point`, in
/// the order of [`full_indices`].
pub fn ortho_basis_eval(kind: DomainKind, phi: u32, point: &Point) -> Vec<f64> {
    OrthoBasis::<f64>::full(kind, phi).eval(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: &[(u32, u32, u32)]) -> Vec<BasisIndex> {
        v.iter()
            .map(|&(i, j, k)| BasisIndex::new(i, j, k))
            .collect()
    }

    #[test]
    fn objective_examples() {
        assert_eq!(
            objective_indices(DomainKind::Quadrilateral, 2).indices,
            idx(&[(0, 0, 0), (0, 2, 0)])
        );
        assert_eq!(
            objective_indices(DomainKind::Triangle, 2).indices,
            idx(&[(0, 0, 0), (0, 1, 0), (0, 2, 0), (1, 1, 0)])
        );
        assert_eq!(
            objective_indices(DomainKind::Hexahedron, 1).indices,
            idx(&[(0, 0, 0)])
        );
    }

    #[test]
    fn constant_mode_is_inverse_root_volume() {
        for kind in DomainKind::ALL {
            let c = [-0.1, -0.2, -0.3];
            let v = ortho_basis_eval(kind, 0, &c)[0];
            assert!((v - 1.0 / kind.volume().sqrt()).abs() < 1e-15, "{kind}");
        }
    }

    #[test]
    fn quadrilateral_values() {
        let vals = ortho_basis_eval(DomainKind::Quadrilateral, 2, &[0.0, 0.0, 0.0]);
        let full = full_indices(DomainKind::Quadrilateral, 2);
        let at = |i, j| {
            vals[full
                .iter()
                .position(|x| *x == BasisIndex::new(i, j, 0))
                .unwrap()]
        };
        assert!((at(0, 0) - 0.5).abs() < 1e-15);
        assert!((at(0, 2) + 5f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_centroid_constant() {
        let v = ortho_basis_eval(DomainKind::Triangle, 0, &[-1.0 / 3.0, -1.0 / 3.0, 0.0]);
        assert!((v[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn finite_at_collapsed_points() {
        let apexes = [
            (DomainKind::Triangle, [-1.0, 1.0, 0.0]),
            (DomainKind::Tetrahedron, [-1.0, -1.0, 1.0]),
            (DomainKind::Tetrahedron, [-1.0, 0.0, 0.0]),
            (DomainKind::Prism, [-1.0, 1.0, 0.5]),
            (DomainKind::Pyramid, [0.0, 0.0, 1.0]),
        ];
        for (kind, p) in apexes {
            assert!(
                ortho_basis_eval(kind, 8, &p).iter().all(|v| v.is_finite()),
                "{kind}"
            );
        }
    }

    #[test]
    fn collapsed_limit_is_continuous() {
        // Approach the triangle apex along a line; values must converge.
        let at = |eps: f64| {
            ortho_basis_eval(DomainKind::Triangle, 6, &[-1.0 + eps, 1.0 - 2.0 * eps, 0.0])
        };
        let apex = at(0.0);
        let near = at(1e-9);
        for (a, b) in apex.iter().zip(&near) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn integrals() {
        let tri = basis_integral::<f64>(DomainKind::Triangle, &BasisIndex::new(0, 0, 0));
        assert!((tri - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            basis_integral::<f64>(DomainKind::Triangle, &BasisIndex::new(0, 1, 0)),
            0.0
        );
        assert_eq!(
            basis_integral::<f64>(DomainKind::Hexahedron, &BasisIndex::new(2, 2, 0)),
            0.0
        );
    }

    #[test]
    fn quadrilateral_objective_ratio() {
        for phi in 8..=40 {
            let obj = objective_indices(DomainKind::Quadrilateral, phi)
                .indices
                .len() as f64;
            let full = full_indices(DomainKind::Quadrilateral, phi).len() as f64;
            assert!(obj / full <= 0.125 + 2.0 / phi as f64, "phi={phi}");
        }
    }
}
