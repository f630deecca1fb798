//! Reference domains, their symmetry orbits and symmetric decompositions.
//!
//! Every orbit is stored as a template: a list of points whose coordinates
//! are affine forms in the orbital parameters. Expanding an orbit evaluates
//! the template, so the same code serves the double and double-double paths.

mod decompose;
mod ratio;
mod symmetry;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

pub use decompose::{decomposition_viable, enumerate_decompositions, Decomposition};
pub(crate) use ratio::{AffineForm, Ratio};
pub use symmetry::{symmetry_generators, symmetry_group, Symmetry};

use crate::error::{Error, Result};
use crate::real::Real;

/// Cartesian point; two-dimensional domains leave `z = 0`.
pub type Point<T = f64> = [T; 3];

/// Margin keeping clamped orbital parameters strictly inside their bounds.
pub const INTERIOR_MARGIN: f64 = 1e-10;

/// Two expanded points closer than this are treated as coincident.
pub const DEDUP_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainKind {
    Triangle,
    Quadrilateral,
    Tetrahedron,
    Prism,
    Pyramid,
    Hexahedron,
}

impl DomainKind {
    pub const ALL: [DomainKind; 6] = [
        DomainKind::Triangle,
        DomainKind::Quadrilateral,
        DomainKind::Tetrahedron,
        DomainKind::Prism,
        DomainKind::Pyramid,
        DomainKind::Hexahedron,
    ];

    /// Short name used on the command line and in rule files.
    pub fn short_name(self) -> &'static str {
        match self {
            DomainKind::Triangle => "tri",
            DomainKind::Quadrilateral => "quad",
            DomainKind::Tetrahedron => "tet",
            DomainKind::Prism => "pri",
            DomainKind::Pyramid => "pyr",
            DomainKind::Hexahedron => "hex",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            DomainKind::Triangle | DomainKind::Quadrilateral => 2,
            _ => 3,
        }
    }

    pub fn symmetry_number(self) -> usize {
        match self {
            DomainKind::Triangle => 6,
            DomainKind::Quadrilateral => 8,
            DomainKind::Tetrahedron => 24,
            DomainKind::Prism => 12,
            DomainKind::Pyramid => 8,
            DomainKind::Hexahedron => 48,
        }
    }

    pub(crate) fn volume_ratio(self) -> Ratio {
        match self {
            DomainKind::Triangle => Ratio::int(2),
            DomainKind::Quadrilateral => Ratio::int(4),
            DomainKind::Tetrahedron => Ratio::new(4, 3),
            DomainKind::Prism => Ratio::int(4),
            DomainKind::Pyramid => Ratio::new(8, 3),
            DomainKind::Hexahedron => Ratio::int(8),
        }
    }

    pub fn volume(self) -> f64 {
        self.volume_ratio().to_f64()
    }

    pub fn vertices(self) -> Vec<Point> {
        match self {
            DomainKind::Triangle => vec![[-1.0, -1.0, 0.0], [1.0, -1.0, 0.0], [-1.0, 1.0, 0.0]],
            DomainKind::Quadrilateral => vec![
                [-1.0, -1.0, 0.0],
                [1.0, -1.0, 0.0],
                [1.0, 1.0, 0.0],
                [-1.0, 1.0, 0.0],
            ],
            DomainKind::Tetrahedron => vec![
                [-1.0, -1.0, -1.0],
                [1.0, -1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [-1.0, -1.0, 1.0],
            ],
            DomainKind::Prism => {
                let mut v = Vec::new();
                for z in [-1.0, 1.0] {
                    v.extend([[-1.0, -1.0, z], [1.0, -1.0, z], [-1.0, 1.0, z]]);
                }
                v
            }
            DomainKind::Pyramid => vec![
                [-1.0, -1.0, -1.0],
                [1.0, -1.0, -1.0],
                [1.0, 1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [0.0, 0.0, 1.0],
            ],
            DomainKind::Hexahedron => {
                let mut v = Vec::new();
                for z in [-1.0, 1.0] {
                    for y in [-1.0, 1.0] {
                        for x in [-1.0, 1.0] {
                            v.push([x, y, z]);
                        }
                    }
                }
                v
            }
        }
    }

    /// Signed Euclidean distance from `p` to the boundary: positive inside,
    /// zero on a facet, negative outside.
    pub fn boundary_distance(self, p: &Point) -> f64 {
        let [x, y, z] = *p;
        let tri = |x: f64, y: f64| (x + 1.0).min(y + 1.0).min(-(x + y) / 2f64.sqrt());
        match self {
            DomainKind::Triangle => tri(x, y),
            DomainKind::Quadrilateral => (1.0 - x.abs()).min(1.0 - y.abs()),
            DomainKind::Tetrahedron => (x + 1.0)
                .min(y + 1.0)
                .min(z + 1.0)
                .min((-1.0 - x - y - z) / 3f64.sqrt()),
            DomainKind::Prism => tri(x, y).min(1.0 - z.abs()),
            DomainKind::Pyramid => {
                let side = (1.0 - z - 2.0 * x.abs().max(y.abs())) / 5f64.sqrt();
                side.min(z + 1.0)
            }
            DomainKind::Hexahedron => (1.0 - x.abs()).min(1.0 - y.abs()).min(1.0 - z.abs()),
        }
    }

    pub fn domain(self) -> &'static Domain {
        static CACHE: OnceLock<Vec<Domain>> = OnceLock::new();
        let all = CACHE.get_or_init(|| DomainKind::ALL.iter().map(|&k| Domain::build(k)).collect());
        &all[self as usize]
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::Triangle => "triangle",
            DomainKind::Quadrilateral => "quadrilateral",
            DomainKind::Tetrahedron => "tetrahedron",
            DomainKind::Prism => "prism",
            DomainKind::Pyramid => "pyramid",
            DomainKind::Hexahedron => "hexahedron",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownDomain(pub String);

impl fmt::Display for UnknownDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown domain `{}` (expected one of tri, quad, tet, pri, pyr, hex)",
            self.0
        )
    }
}

impl std::error::Error for UnknownDomain {}

impl FromStr for DomainKind {
    type Err = UnknownDomain;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        DomainKind::ALL
            .into_iter()
            .find(|k| s == k.short_name() || s == k.to_string())
            .ok_or_else(|| UnknownDomain(s.to_string()))
    }
}

/// Interval bound `value ± margin · δ`, with `δ` the interior margin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub(crate) value: Ratio,
    pub(crate) margin: f64,
}

impl Bound {
    fn new(value: Ratio) -> Self {
        Bound { value, margin: 1.0 }
    }

    /// The unshrunk bound.
    pub fn raw(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Feasible interval of one orbital parameter; realized as
/// `[lower + δ, upper - δ]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamBounds {
    pub lower: Bound,
    pub upper: Bound,
}

impl ParamBounds {
    fn new(lo: Ratio, hi: Ratio) -> Self {
        ParamBounds {
            lower: Bound::new(lo),
            upper: Bound::new(hi),
        }
    }

    pub fn lower_value<T: Real>(&self) -> T {
        self.lower.value.to_real::<T>() + T::from_f64(self.lower.margin * INTERIOR_MARGIN)
    }

    pub fn upper_value<T: Real>(&self) -> T {
        self.upper.value.to_real::<T>() - T::from_f64(self.upper.margin * INTERIOR_MARGIN)
    }
}

/// `Σ coeffs[k] · p[k] ≤ rhs - margin · δ`. Violations are repaired by
/// lowering the `movable` parameters only.
#[derive(Clone, Debug, PartialEq)]
pub struct JointConstraint {
    pub coeffs: Vec<i64>,
    pub rhs: f64,
    pub margin: f64,
    pub movable: Vec<usize>,
}

impl JointConstraint {
    fn limit<T: Real>(&self) -> T {
        T::from_f64(self.rhs) - T::from_f64(self.margin * INTERIOR_MARGIN)
    }

    fn lhs<T: Real>(&self, params: &[T]) -> T {
        let mut s = T::zero();
        for (&c, &p) in self.coeffs.iter().zip(params) {
            if c != 0 {
                s += T::from_f64(c as f64) * p;
            }
        }
        s
    }

    pub fn satisfied<T: Real>(&self, params: &[T]) -> bool {
        self.lhs(params) - self.limit::<T>() <= T::from_f64(JOINT_SLACK)
    }
}

// Rounding slack when testing joint constraints; keeps clamping idempotent.
const JOINT_SLACK: f64 = 1e-14;

// Axis bitmasks used for viability checks.
pub(crate) const AXIS_X: u8 = 1;
pub(crate) const AXIS_Y: u8 = 2;
pub(crate) const AXIS_Z: u8 = 4;

/// One symmetry orbit type of a domain.
#[derive(Clone, Debug)]
pub struct OrbitDescriptor {
    pub id: usize,
    pub point_count: usize,
    pub param_count: usize,
    pub param_bounds: Vec<ParamBounds>,
    pub joint_constraints: Vec<JointConstraint>,
    /// `None` means unbounded.
    pub max_multiplicity: Option<usize>,
    /// Directions spanned by the points of a single instance, relative to
    /// the instance's centroid.
    pub shape_span: u8,
    /// Directions along which the centroid of an instance can move.
    pub anchor_span: u8,
    template: Vec<[AffineForm; 3]>,
}

impl OrbitDescriptor {
    fn new(id: usize, nparams: usize, template: Vec<[AffineForm; 3]>, shape_span: u8) -> Self {
        OrbitDescriptor {
            id,
            point_count: template.len(),
            param_count: nparams,
            param_bounds: Vec::new(),
            joint_constraints: Vec::new(),
            max_multiplicity: if nparams == 0 { Some(1) } else { None },
            shape_span,
            anchor_span: 0,
            template,
        }
    }

    fn bounds(mut self, b: Vec<ParamBounds>) -> Self {
        assert_eq!(b.len(), self.param_count);
        self.param_bounds = b;
        self
    }

    fn joint(mut self, c: JointConstraint) -> Self {
        self.joint_constraints.push(c);
        self
    }

    fn anchor(mut self, span: u8) -> Self {
        self.anchor_span = span;
        self
    }

    /// Expands the orbit without any distinctness check; degenerate
    /// parameters yield repeated points.
    pub fn expand_raw<T: Real>(&self, params: &[T]) -> Vec<Point<T>> {
        self.template
            .iter()
            .map(|p| [p[0].eval(params), p[1].eval(params), p[2].eval(params)])
            .collect()
    }

    /// Projects `params` onto the feasible set in place.
    pub fn clamp_in_place<T: Real>(&self, params: &mut [T]) {
        for (p, b) in params.iter_mut().zip(&self.param_bounds) {
            let lo = b.lower_value::<T>();
            let hi = b.upper_value::<T>();
            // Written so that NaN lands on the lower bound.
            if !(*p >= lo) {
                *p = lo;
            } else if *p > hi {
                *p = hi;
            }
        }
        for c in &self.joint_constraints {
            let mut free = c.movable.clone();
            while !free.is_empty() && !c.satisfied(params) {
                let excess = c.lhs(params) - c.limit::<T>();
                let weight: i64 = free.iter().map(|&k| c.coeffs[k]).sum();
                let shift = excess / T::from_f64(weight as f64);
                for &k in &free {
                    params[k] -= shift;
                }
                free.retain(|&k| {
                    let lo = self.param_bounds[k].lower_value::<T>();
                    if params[k] < lo {
                        params[k] = lo;
                        false
                    } else {
                        true
                    }
                });
            }
        }
    }

    pub fn is_feasible<T: Real>(&self, params: &[T]) -> bool {
        params.len() == self.param_count
            && params
                .iter()
                .zip(&self.param_bounds)
                .all(|(&p, b)| p >= b.lower_value::<T>() && p <= b.upper_value::<T>())
            && self.joint_constraints.iter().all(|c| c.satisfied(params))
    }

    /// Recovers parameters whose expansion equals `points` as a set, up to
    /// `tol`.
    pub fn fit_params(&self, points: &[Point], tol: f64) -> Option<Vec<f64>> {
        if points.len() != self.point_count {
            return None;
        }
        let k = self.param_count;
        let target = points[0];
        self.template.iter().find_map(|form| {
            // Solve the affine system form(p) = target in the least-squares
            // sense, then confirm the whole orbit matches.
            let a = nalgebra::DMatrix::from_fn(3, k, |r, c| form[r].coeffs[c].to_f64());
            let b = nalgebra::DVector::from_fn(3, |r, _| target[r] - form[r].constant.to_f64());
            let params: Vec<f64> = if k == 0 {
                Vec::new()
            } else {
                let svd = a.svd(true, true);
                svd.solve(&b, 1e-12).ok()?.iter().copied().collect()
            };
            let expanded = self.expand_raw(&params);
            let close = |p: &Point, q: &Point| (0..3).all(|d| (p[d] - q[d]).abs() <= tol);
            let matched = expanded.iter().all(|e| points.iter().any(|p| close(e, p)))
                && points.iter().all(|p| expanded.iter().any(|e| close(e, p)));
            matched.then_some(params)
        })
    }
}

/// An orbit type together with concrete orbital parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitInstance<T = f64> {
    pub orbit_id: usize,
    pub params: Vec<T>,
}

impl<T: Real> OrbitInstance<T> {
    pub fn new(orbit_id: usize, params: Vec<T>) -> Self {
        OrbitInstance { orbit_id, params }
    }

    pub fn to_f64(&self) -> OrbitInstance<f64> {
        OrbitInstance {
            orbit_id: self.orbit_id,
            params: self.params.iter().map(|p| p.to_f64()).collect(),
        }
    }
}

/// A reference domain with its orbit catalog.
#[derive(Clone, Debug)]
pub struct Domain {
    pub kind: DomainKind,
    pub dimension: usize,
    pub volume: f64,
    pub vertices: Vec<Point>,
    pub orbits: Vec<OrbitDescriptor>,
}

impl Domain {
    pub fn full_span(&self) -> u8 {
        if self.dimension == 2 {
            AXIS_X | AXIS_Y
        } else {
            AXIS_X | AXIS_Y | AXIS_Z
        }
    }

    pub fn orbit(&self, id: usize) -> Result<&OrbitDescriptor> {
        self.orbits.get(id).ok_or(Error::UnknownOrbit {
            domain: self.kind,
            orbit: id,
        })
    }

    fn check_arity<T>(&self, inst: &OrbitInstance<T>) -> Result<&OrbitDescriptor> {
        let orbit = self.orbit(inst.orbit_id)?;
        if inst.params.len() != orbit.param_count {
            return Err(Error::ParamArity {
                orbit: inst.orbit_id,
                expected: orbit.param_count,
                found: inst.params.len(),
            });
        }
        Ok(orbit)
    }

    /// Expands an orbit instance into its `|S|` distinct points.
    pub fn expand_orbit<T: Real>(&self, inst: &OrbitInstance<T>) -> Result<Vec<Point<T>>> {
        let orbit = self.check_arity(inst)?;
        let points = orbit.expand_raw(&inst.params);
        for (i, p) in points.iter().enumerate() {
            for q in &points[..i] {
                let d2: f64 = (0..3).map(|d| (p[d] - q[d]).to_f64().powi(2)).sum();
                if d2.sqrt() <= DEDUP_TOLERANCE {
                    return Err(Error::DegenerateOrbit {
                        orbit: inst.orbit_id,
                        params: inst.params.iter().map(|v| v.to_f64()).collect(),
                        expected: orbit.point_count,
                    });
                }
            }
        }
        Ok(points)
    }

    pub fn clamp_orbit<T: Real>(&self, inst: &OrbitInstance<T>) -> Result<OrbitInstance<T>> {
        let orbit = self.check_arity(inst)?;
        let mut params = inst.params.clone();
        orbit.clamp_in_place(&mut params);
        Ok(OrbitInstance::new(inst.orbit_id, params))
    }

    fn build(kind: DomainKind) -> Domain {
        let orbits = match kind {
            DomainKind::Triangle => triangle_orbits(),
            DomainKind::Quadrilateral => quadrilateral_orbits(),
            DomainKind::Tetrahedron => tetrahedron_orbits(),
            DomainKind::Prism => prism_orbits(),
            DomainKind::Pyramid => pyramid_orbits(),
            DomainKind::Hexahedron => hexahedron_orbits(),
        };
        Domain {
            kind,
            dimension: kind.dimension(),
            volume: kind.volume(),
            vertices: kind.vertices(),
            orbits,
        }
    }
}

pub fn volume(kind: DomainKind) -> f64 {
    kind.volume()
}

pub fn orbit_catalog(kind: DomainKind) -> &'static [OrbitDescriptor] {
    &kind.domain().orbits
}

// ---------------------------------------------------------------------------
// Orbit templates
// ---------------------------------------------------------------------------

fn r(n: i64, d: i64) -> Ratio {
    Ratio::new(n, d)
}

fn unit() -> ParamBounds {
    ParamBounds::new(Ratio::ZERO, Ratio::ONE)
}

fn interval(lo: Ratio, hi: Ratio) -> ParamBounds {
    ParamBounds::new(lo, hi)
}

fn sum_at_most_one(coeffs: Vec<i64>) -> JointConstraint {
    let movable = (0..coeffs.len()).filter(|&k| coeffs[k] != 0).collect();
    JointConstraint {
        coeffs,
        rhs: 1.0,
        margin: 1.0,
        movable,
    }
}

/// Distinct rearrangements of a labelled tuple; `labels[i] == labels[j]`
/// marks entries that always hold the same value.
fn unique_arrangements(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for perm in symmetry::permutations(labels.len()) {
        let key: Vec<usize> = perm.iter().map(|&i| labels[i]).collect();
        if !seen.contains(&key) {
            seen.push(key);
            out.push(perm);
        }
    }
    out
}

/// Points of a simplex orbit generated by all distinct permutations of the
/// barycentric tuple `lambda`. Vertex `i + 1` sits at `-1 + 2e_i`.
fn barycentric_template(lambda: &[AffineForm], labels: &[usize]) -> Vec<[AffineForm; 3]> {
    let nparams = lambda[0].coeffs.len();
    let dim = lambda.len() - 1;
    unique_arrangements(labels)
        .into_iter()
        .map(|perm| {
            let mut pt: [AffineForm; 3] =
                std::array::from_fn(|_| AffineForm::constant(Ratio::ZERO, nparams));
            for (d, coord) in pt.iter_mut().enumerate().take(dim) {
                // x_d = 2 λ_{d+1} - 1
                *coord = AffineForm::constant(Ratio::int(-1), nparams)
                    .add_scaled(&lambda[perm[d + 1]], 2);
            }
            pt
        })
        .collect()
}

/// Images of the symbolic point `labels` under all signed permutations of
/// its axes. Label 0 stands for the coordinate value zero; label `l > 0`
/// is the form `forms[l - 1]`.
fn signed_template(labels: &[usize], forms: &[AffineForm], nparams: usize) -> Vec<[AffineForm; 3]> {
    let n = labels.len();
    let mut seen: Vec<Vec<(i8, usize)>> = Vec::new();
    for perm in symmetry::permutations(n) {
        for signs in symmetry::sign_vectors(n) {
            let img: Vec<(i8, usize)> = (0..n)
                .map(|d| {
                    let l = labels[perm[d]];
                    (if l == 0 { 1 } else { signs[d] }, l)
                })
                .collect();
            if !seen.contains(&img) {
                seen.push(img);
            }
        }
    }
    seen.into_iter()
        .map(|img| {
            std::array::from_fn(|d| match img.get(d) {
                Some(&(s, l)) if l > 0 => {
                    if s > 0 {
                        forms[l - 1].clone()
                    } else {
                        forms[l - 1].negate()
                    }
                }
                _ => AffineForm::constant(Ratio::ZERO, nparams),
            })
        })
        .collect()
}

fn p(k: usize, nparams: usize) -> AffineForm {
    AffineForm::linear(Ratio::ZERO, &[(k, 1)], nparams)
}

fn c(v: Ratio, nparams: usize) -> AffineForm {
    AffineForm::constant(v, nparams)
}

// Triangle-type barycentric tuples shared by triangle and prism.
fn tri_centroid(np: usize) -> (Vec<AffineForm>, Vec<usize>) {
    (vec![c(r(1, 3), np); 3], vec![0, 0, 0])
}

fn tri_s2(np: usize) -> (Vec<AffineForm>, Vec<usize>) {
    let a = p(0, np);
    let rest = AffineForm::linear(Ratio::ONE, &[(0, -2)], np);
    (vec![a.clone(), a, rest], vec![0, 0, 1])
}

fn tri_s3(np: usize) -> (Vec<AffineForm>, Vec<usize>) {
    let rest = AffineForm::linear(Ratio::ONE, &[(0, -1), (1, -1)], np);
    (vec![p(0, np), p(1, np), rest], vec![0, 1, 2])
}

fn triangle_orbits() -> Vec<OrbitDescriptor> {
    let xy = AXIS_X | AXIS_Y;
    let (l1, k1) = tri_centroid(0);
    let (l2, k2) = tri_s2(1);
    let (l3, k3) = tri_s3(2);
    vec![
        OrbitDescriptor::new(0, 0, barycentric_template(&l1, &k1), 0),
        OrbitDescriptor::new(1, 1, barycentric_template(&l2, &k2), xy)
            .bounds(vec![interval(Ratio::ZERO, r(1, 2))]),
        OrbitDescriptor::new(2, 2, barycentric_template(&l3, &k3), xy)
            .bounds(vec![unit(), unit()])
            .joint(sum_at_most_one(vec![1, 1])),
    ]
}

fn quadrilateral_orbits() -> Vec<OrbitDescriptor> {
    let xy = AXIS_X | AXIS_Y;
    vec![
        OrbitDescriptor::new(0, 0, signed_template(&[0, 0], &[], 0), 0),
        OrbitDescriptor::new(1, 1, signed_template(&[1, 0], &[p(0, 1)], 1), xy)
            .bounds(vec![unit()]),
        OrbitDescriptor::new(2, 1, signed_template(&[1, 1], &[p(0, 1)], 1), xy)
            .bounds(vec![unit()]),
        OrbitDescriptor::new(3, 2, signed_template(&[1, 2], &[p(0, 2), p(1, 2)], 2), xy)
            .bounds(vec![unit(), unit()]),
    ]
}

fn tetrahedron_orbits() -> Vec<OrbitDescriptor> {
    let all = AXIS_X | AXIS_Y | AXIS_Z;
    let s1 = vec![c(r(1, 4), 0); 4];
    let s2 = {
        let a = p(0, 1);
        vec![
            a.clone(),
            a.clone(),
            a,
            AffineForm::linear(Ratio::ONE, &[(0, -3)], 1),
        ]
    };
    let s3 = {
        let a = p(0, 1);
        let b = AffineForm::linear(r(1, 2), &[(0, -1)], 1);
        vec![a.clone(), a, b.clone(), b]
    };
    let s4 = {
        let a = p(0, 2);
        vec![
            a.clone(),
            a,
            p(1, 2),
            AffineForm::linear(Ratio::ONE, &[(0, -2), (1, -1)], 2),
        ]
    };
    let s5 = vec![
        p(0, 3),
        p(1, 3),
        p(2, 3),
        AffineForm::linear(Ratio::ONE, &[(0, -1), (1, -1), (2, -1)], 3),
    ];
    vec![
        OrbitDescriptor::new(0, 0, barycentric_template(&s1, &[0, 0, 0, 0]), 0),
        OrbitDescriptor::new(1, 1, barycentric_template(&s2, &[0, 0, 0, 1]), all)
            .bounds(vec![interval(Ratio::ZERO, r(1, 3))]),
        OrbitDescriptor::new(2, 1, barycentric_template(&s3, &[0, 0, 1, 1]), all)
            .bounds(vec![interval(Ratio::ZERO, r(1, 2))]),
        OrbitDescriptor::new(3, 2, barycentric_template(&s4, &[0, 0, 1, 2]), all)
            .bounds(vec![interval(Ratio::ZERO, r(1, 2)), unit()])
            .joint(sum_at_most_one(vec![2, 1])),
        OrbitDescriptor::new(4, 3, barycentric_template(&s5, &[0, 1, 2, 3]), all)
            .bounds(vec![unit(), unit(), unit()])
            .joint(sum_at_most_one(vec![1, 1, 1])),
    ]
}

/// Extrudes a triangle template: `z = 0`, or `z = ±γ` with γ the last
/// parameter.
fn extrude(tri: Vec<[AffineForm; 3]>, with_gamma: bool) -> Vec<[AffineForm; 3]> {
    if !with_gamma {
        return tri;
    }
    let mut out = Vec::with_capacity(2 * tri.len());
    for pt in tri {
        let np = pt[0].coeffs.len();
        let gamma = p(np - 1, np);
        for s in [1, -1] {
            let mut q = pt.clone();
            q[2] = if s > 0 { gamma.clone() } else { gamma.negate() };
            out.push(q);
        }
    }
    out
}

fn prism_orbits() -> Vec<OrbitDescriptor> {
    let xy = AXIS_X | AXIS_Y;
    let all = xy | AXIS_Z;
    let build = |(l, k): (Vec<AffineForm>, Vec<usize>), gamma: bool| {
        extrude(barycentric_template(&l, &k), gamma)
    };
    let half = || interval(Ratio::ZERO, r(1, 2));
    vec![
        OrbitDescriptor::new(0, 0, build(tri_centroid(0), false), 0),
        OrbitDescriptor::new(1, 1, build(tri_centroid(1), true), AXIS_Z).bounds(vec![unit()]),
        OrbitDescriptor::new(2, 1, build(tri_s2(1), false), xy).bounds(vec![half()]),
        OrbitDescriptor::new(3, 2, build(tri_s2(2), true), all).bounds(vec![half(), unit()]),
        OrbitDescriptor::new(4, 2, build(tri_s3(2), false), xy)
            .bounds(vec![unit(), unit()])
            .joint(sum_at_most_one(vec![1, 1])),
        OrbitDescriptor::new(5, 3, build(tri_s3(3), true), all)
            .bounds(vec![unit(), unit(), unit()])
            .joint(sum_at_most_one(vec![1, 1, 0])),
    ]
}

fn pyramid_orbits() -> Vec<OrbitDescriptor> {
    let xy = AXIS_X | AXIS_Y;
    let height = || interval(Ratio::int(-1), Ratio::ONE);
    // Keeps room for α in [δ, (1 - γ)/2 - δ].
    let capped_height = || {
        let mut b = height();
        b.upper.margin = 4.0;
        b
    };
    // 2α + γ ≤ 1, i.e. α ≤ (1 - γ)/2, repaired by moving α only.
    let apex = |k: usize, np: usize| {
        let mut coeffs = vec![0; np];
        coeffs[k] = 2;
        coeffs[np - 1] = 1;
        JointConstraint {
            coeffs,
            rhs: 1.0,
            margin: 2.0,
            movable: vec![k],
        }
    };
    let with_height = |labels: &[usize], np: usize| {
        let forms: Vec<AffineForm> = (0..np - 1).map(|k| p(k, np)).collect();
        let mut t = signed_template(labels, &forms, np);
        for pt in &mut t {
            pt[2] = p(np - 1, np);
        }
        t
    };
    vec![
        OrbitDescriptor::new(0, 1, with_height(&[0, 0], 1), 0)
            .bounds(vec![height()])
            .anchor(AXIS_Z),
        OrbitDescriptor::new(1, 2, with_height(&[1, 0], 2), xy)
            .bounds(vec![unit(), capped_height()])
            .joint(apex(0, 2))
            .anchor(AXIS_Z),
        OrbitDescriptor::new(2, 2, with_height(&[1, 1], 2), xy)
            .bounds(vec![unit(), capped_height()])
            .joint(apex(0, 2))
            .anchor(AXIS_Z),
        OrbitDescriptor::new(3, 3, with_height(&[1, 2], 3), xy)
            .bounds(vec![unit(), unit(), capped_height()])
            .joint(apex(0, 3))
            .joint(apex(1, 3))
            .anchor(AXIS_Z),
    ]
}

fn hexahedron_orbits() -> Vec<OrbitDescriptor> {
    let all = AXIS_X | AXIS_Y | AXIS_Z;
    let orbit = |id: usize, labels: [usize; 3], np: usize| {
        let forms: Vec<AffineForm> = (0..np).map(|k| p(k, np)).collect();
        OrbitDescriptor::new(
            id,
            np,
            signed_template(&labels, &forms, np),
            if np == 0 { 0 } else { all },
        )
        .bounds(vec![unit(); np])
    };
    vec![
        orbit(0, [0, 0, 0], 0),
        orbit(1, [1, 0, 0], 1),
        orbit(2, [1, 1, 1], 1),
        orbit(3, [1, 1, 0], 1),
        orbit(4, [1, 2, 0], 2),
        orbit(5, [1, 1, 2], 2),
        orbit(6, [1, 2, 3], 3),
    ]
}
