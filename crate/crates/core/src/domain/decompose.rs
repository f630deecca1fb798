//! Symmetric decompositions of a point count into orbit multiplicities.

use super::{DomainKind, OrbitDescriptor};

/// Multiplicities `n_j` of each orbit type with `Σ n_j |S_j| = point_count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    pub multiplicities: Vec<usize>,
    pub point_count: usize,
}

impl Decomposition {
    /// Builds a decomposition, deriving the point count from the catalog.
    pub fn new(kind: DomainKind, multiplicities: Vec<usize>) -> Self {
        let point_count = multiplicities
            .iter()
            .zip(&kind.domain().orbits)
            .map(|(n, o)| n * o.point_count)
            .sum();
        Decomposition {
            multiplicities,
            point_count,
        }
    }

    /// Orbit ids of the instances, in decomposition order.
    pub fn instances(&self) -> impl Iterator<Item = usize> + '_ {
        self.multiplicities
            .iter()
            .enumerate()
            .flat_map(|(j, &n)| std::iter::repeat_n(j, n))
    }

    pub fn instance_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Free parameters once weights are eliminated: `Σ n_j ⟦S_j⟧`.
    pub fn param_count(&self, kind: DomainKind) -> usize {
        self.weighted(kind, |o| o.param_count)
    }

    /// Unknowns when weights are kept explicit: `Σ n_j (⟦S_j⟧ + 1)`.
    pub fn full_dof(&self, kind: DomainKind) -> usize {
        self.weighted(kind, |o| o.param_count + 1)
    }

    fn weighted(&self, kind: DomainKind, f: impl Fn(&OrbitDescriptor) -> usize) -> usize {
        self.multiplicities
            .iter()
            .zip(&kind.domain().orbits)
            .map(|(n, o)| n * f(o))
            .sum()
    }

    pub fn is_valid(&self, kind: DomainKind) -> bool {
        let orbits = &kind.domain().orbits;
        self.multiplicities.len() == orbits.len()
            && self
                .multiplicities
                .iter()
                .zip(orbits)
                .all(|(&n, o)| o.max_multiplicity.is_none_or(|m| n <= m))
            && Decomposition::new(kind, self.multiplicities.clone()).point_count == self.point_count
    }
}

/// All multiplicity vectors decomposing `point_count`, in ascending
/// lexicographic order.
pub fn enumerate_decompositions(kind: DomainKind, point_count: usize) -> Vec<Decomposition> {
    let orbits = &kind.domain().orbits;
    let mut out = Vec::new();
    let mut current = vec![0; orbits.len()];

    fn rec(
        j: usize,
        remaining: usize,
        orbits: &[OrbitDescriptor],
        current: &mut Vec<usize>,
        out: &mut Vec<Decomposition>,
        total: usize,
    ) {
        if j == orbits.len() {
            if remaining == 0 {
                out.push(Decomposition {
                    multiplicities: current.clone(),
                    point_count: total,
                });
            }
            return;
        }
        let size = orbits[j].point_count;
        let mut max = remaining / size;
        if let Some(cap) = orbits[j].max_multiplicity {
            max = max.min(cap);
        }
        for n in 0..=max {
            current[j] = n;
            rec(j + 1, remaining - n * size, orbits, current, out, total);
        }
        current[j] = 0;
    }

    rec(0, point_count, orbits, &mut current, &mut out, point_count);
    out
}

/// Conservative test for decompositions that cannot reach strength `phi`.
///
/// The orbit catalog tags each orbit with the directions spanned by one
/// instance and the directions along which its centroid may move. When the
/// union over used orbits misses an axis, every point lies in a proper
/// affine subspace; a non-negative quadratic vanishing there then has a
/// positive integral that no weights can reproduce, so `phi >= 2` is out of
/// reach. Strength one only needs the centroid, which every symmetric
/// decomposition can match.
pub fn decomposition_viable(kind: DomainKind, d: &Decomposition, phi: u32) -> bool {
    if phi < 2 {
        return true;
    }
    let domain = kind.domain();
    let used = || {
        d.multiplicities
            .iter()
            .zip(&domain.orbits)
            .filter(|(&n, _)| n > 0)
            .map(|(_, o)| o)
    };
    let mut span = used().fold(0u8, |acc, o| acc | o.shape_span);
    if d.instance_count() >= 2 {
        span |= used().fold(0u8, |acc, o| acc | o.anchor_span);
    }
    span == domain.full_span()
}
