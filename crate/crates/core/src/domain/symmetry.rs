//! Symmetry groups of the reference domains acting on Cartesian points.

use super::{DomainKind, Point};

/// One element of a domain's symmetry group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// Permutation of the barycentric coordinates of a simplex:
    /// the image has `λ'[i] = λ[perm[i]]`.
    Barycentric(Vec<usize>),
    /// Coordinate permutation followed by sign flips, acting on the first
    /// `perm.len()` Cartesian axes.
    SignedPermutation { perm: Vec<usize>, signs: Vec<i8> },
    /// Triangle symmetry on `(x, y)` combined with an optional reflection in z.
    Prism { perm: Vec<usize>, flip_z: bool },
}

fn triangle_to_bary(p: &Point) -> [f64; 3] {
    let l2 = 0.5 * (1.0 + p[0]);
    let l3 = 0.5 * (1.0 + p[1]);
    [-0.5 * (p[0] + p[1]), l2, l3]
}

fn tet_to_bary(p: &Point) -> [f64; 4] {
    [
        -0.5 * (1.0 + p[0] + p[1] + p[2]),
        0.5 * (1.0 + p[0]),
        0.5 * (1.0 + p[1]),
        0.5 * (1.0 + p[2]),
    ]
}

// Columns of the vertex matrices give x = 2λ₂ - 1, y = 2λ₃ - 1, z = 2λ₄ - 1.
fn bary_to_cart(l: &[f64]) -> Point {
    let mut p = [0.0; 3];
    for (d, out) in p.iter_mut().enumerate().take(l.len() - 1) {
        *out = 2.0 * l[d + 1] - 1.0;
    }
    p
}

fn permute(l: &[f64], perm: &[usize]) -> Vec<f64> {
    perm.iter().map(|&i| l[i]).collect()
}

impl Symmetry {
    pub fn apply(&self, p: &Point) -> Point {
        match self {
            Symmetry::Barycentric(perm) if perm.len() == 3 => {
                bary_to_cart(&permute(&triangle_to_bary(p), perm))
            }
            Symmetry::Barycentric(perm) => bary_to_cart(&permute(&tet_to_bary(p), perm)),
            Symmetry::SignedPermutation { perm, signs } => {
                let mut q = *p;
                for (d, (&src, &s)) in perm.iter().zip(signs).enumerate() {
                    q[d] = s as f64 * p[src];
                }
                q
            }
            Symmetry::Prism { perm, flip_z } => {
                let mut q = bary_to_cart(&permute(&triangle_to_bary(p), perm));
                q[2] = if *flip_z { -p[2] } else { p[2] };
                q
            }
        }
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub(crate) fn sign_vectors(n: usize) -> Vec<Vec<i8>> {
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|d| if mask >> d & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

fn signed_permutations(n: usize) -> Vec<Symmetry> {
    let mut out = Vec::new();
    for perm in permutations(n) {
        for signs in sign_vectors(n) {
            out.push(Symmetry::SignedPermutation {
                perm: perm.clone(),
                signs,
            });
        }
    }
    out
}

/// Every element of the symmetry group of `kind`; the identity comes first.
pub fn symmetry_group(kind: DomainKind) -> Vec<Symmetry> {
    match kind {
        DomainKind::Triangle => permutations(3)
            .into_iter()
            .map(Symmetry::Barycentric)
            .collect(),
        DomainKind::Tetrahedron => permutations(4)
            .into_iter()
            .map(Symmetry::Barycentric)
            .collect(),
        DomainKind::Quadrilateral | DomainKind::Pyramid => signed_permutations(2),
        DomainKind::Hexahedron => signed_permutations(3),
        DomainKind::Prism => permutations(3)
            .into_iter()
            .flat_map(|perm| {
                [false, true].map(|flip_z| Symmetry::Prism {
                    perm: perm.clone(),
                    flip_z,
                })
            })
            .collect(),
    }
}

/// A generating set of the symmetry group of `kind`.
pub fn symmetry_generators(kind: DomainKind) -> Vec<Symmetry> {
    let reflect = |n: usize| {
        let mut signs = vec![1; n];
        signs[0] = -1;
        Symmetry::SignedPermutation {
            perm: (0..n).collect(),
            signs,
        }
    };
    let swap = |n: usize| {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(0, 1);
        Symmetry::SignedPermutation {
            perm,
            signs: vec![1; n],
        }
    };
    match kind {
        DomainKind::Triangle => vec![
            Symmetry::Barycentric(vec![1, 0, 2]),
            Symmetry::Barycentric(vec![1, 2, 0]),
        ],
        DomainKind::Tetrahedron => vec![
            Symmetry::Barycentric(vec![1, 0, 2, 3]),
            Symmetry::Barycentric(vec![1, 2, 3, 0]),
        ],
        DomainKind::Quadrilateral | DomainKind::Pyramid => vec![reflect(2), swap(2)],
        DomainKind::Hexahedron => vec![
            reflect(3),
            swap(3),
            Symmetry::SignedPermutation {
                perm: vec![1, 2, 0],
                signs: vec![1, 1, 1],
            },
        ],
        DomainKind::Prism => vec![
            Symmetry::Prism {
                perm: vec![1, 0, 2],
                flip_z: false,
            },
            Symmetry::Prism {
                perm: vec![1, 2, 0],
                flip_z: false,
            },
            Symmetry::Prism {
                perm: vec![0, 1, 2],
                flip_z: true,
            },
        ],
    }
}
