use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lm::levenberg_marquardt_projected;
use super::residual::{clamp_params, split_instances, CandidateParams, RuleResidual};
use super::SolverConfig;
use crate::domain::{decomposition_viable, enumerate_decompositions, Decomposition, DomainKind};
use crate::rules::{QuadratureRule, RuleTerm};

/// Rules whose canonical forms differ by at most this are duplicates.
const DISTINCT_TOLERANCE: f64 = 1e-8;

/// Rules with two points this close have collapsed onto a smaller
/// decomposition and are dropped.
const COINCIDENT_POINTS: f64 = 1e-8;

const SEED_REJECTION_LIMIT: usize = 10_000;

/// Draws every orbital parameter uniformly from its interval, redrawing an
/// instance until its joint constraints hold.
pub fn seed_orbits<R: Rng + ?Sized>(
    kind: DomainKind,
    d: &Decomposition,
    rng: &mut R,
) -> CandidateParams {
    let orbits = &kind.domain().orbits;
    let mut params = Vec::with_capacity(d.param_count(kind));
    for id in d.instances() {
        let orbit = &orbits[id];
        let mut block = vec![0.0; orbit.param_count];
        for _ in 0..SEED_REJECTION_LIMIT {
            for (v, b) in block.iter_mut().zip(&orbit.param_bounds) {
                *v = rng.random_range(b.lower_value::<f64>()..=b.upper_value::<f64>());
            }
            if orbit.joint_constraints.iter().all(|c| c.satisfied(&block)) {
                break;
            }
        }
        orbit.clamp_in_place(&mut block);
        params.extend(block);
    }
    CandidateParams::new(d.clone(), params)
}

#[derive(Clone, Debug, Default)]
pub struct SearchReport {
    pub decompositions: usize,
    pub viable: usize,
    pub attempts: usize,
    pub rules: Vec<QuadratureRule>,
}

/// Rules found by [`search`].
pub fn find_rules(
    kind: DomainKind,
    point_count: usize,
    phi: u32,
    cfg: &SolverConfig,
) -> Vec<QuadratureRule> {
    search(kind, point_count, phi, cfg).rules
}

/// Seeds and minimizes repeatedly on every viable decomposition of
/// `point_count` until its time budget or attempt cap runs out, or until
/// the decomposition saturates.
///
/// Attempt `a` on decomposition `i` draws from its own random stream, and
/// results are consumed in order of `(i, a)`, so a search that is not cut
/// short by the clock returns the same rules for a given seed whatever the
/// worker count.
pub fn search(kind: DomainKind, point_count: usize, phi: u32, cfg: &SolverConfig) -> SearchReport {
    let start = Instant::now();
    let global_deadline = cfg.total_time.map(|t| start + t);
    let decompositions = enumerate_decompositions(kind, point_count);
    let mut report = SearchReport {
        decompositions: decompositions.len(),
        ..SearchReport::default()
    };

    for (di, d) in decompositions.iter().enumerate() {
        if !decomposition_viable(kind, d, phi) {
            continue;
        }
        report.viable += 1;
        let now = Instant::now();
        if global_deadline.is_some_and(|g| now >= g) {
            continue;
        }
        let mut deadline = now + cfg.time_budget;
        if let Some(g) = global_deadline {
            deadline = deadline.min(g);
        }

        let residual = RuleResidual::new(kind, phi, d.clone());
        let cap = if residual.param_count() == 0 {
            1
        } else {
            cfg.max_attempts.unwrap_or(usize::MAX)
        };
        let counter = AtomicUsize::new(0);
        let stop = AtomicUsize::new(usize::MAX);
        let collector = Mutex::new(Collector::default());

        std::thread::scope(|s| {
            for _ in 0..cfg.workers.min(cap) {
                s.spawn(|| loop {
                    let a = counter.fetch_add(1, Ordering::Relaxed);
                    // The first attempt always runs so zero-parameter
                    // decompositions are never skipped.
                    if a >= cap
                        || a >= stop.load(Ordering::Relaxed)
                        || (a > 0 && Instant::now() >= deadline)
                    {
                        break;
                    }
                    let rule = attempt(&residual, cfg, di, a);
                    let mut c = collector.lock().expect("collector poisoned");
                    c.pending.insert(a, rule);
                    if let Some(at) = c.drain(cfg.saturation) {
                        stop.store(at, Ordering::Relaxed);
                    }
                });
            }
        });

        let c = collector.into_inner().expect("collector poisoned");
        report.attempts += c.next;
        report.rules.extend(c.rules);
    }
    report
}

/// Results of one decomposition, consumed strictly in attempt order so the
/// outcome does not depend on which worker finishes first.
#[derive(Default)]
struct Collector {
    pending: BTreeMap<usize, Option<QuadratureRule>>,
    next: usize,
    keys: Vec<Vec<f64>>,
    rules: Vec<QuadratureRule>,
    streak: usize,
    stopped: bool,
}

impl Collector {
    /// Consumes the contiguous run of finished attempts. Returns the index
    /// at which attempts stop when the saturation count is reached.
    fn drain(&mut self, saturation: Option<usize>) -> Option<usize> {
        while !self.stopped {
            let Some(result) = self.pending.remove(&self.next) else {
                break;
            };
            self.next += 1;
            let Some(rule) = result else {
                continue;
            };
            let key = canonical_key(&rule);
            if self
                .keys
                .iter()
                .all(|k| distance(k, &key) > DISTINCT_TOLERANCE)
            {
                self.keys.push(key);
                self.rules.push(rule);
                self.streak = 0;
            } else {
                self.streak += 1;
                if saturation.is_some_and(|n| self.streak >= n) {
                    self.stopped = true;
                    self.pending.clear();
                    return Some(self.next);
                }
            }
        }
        None
    }
}

fn attempt(
    residual: &RuleResidual,
    cfg: &SolverConfig,
    di: usize,
    a: usize,
) -> Option<QuadratureRule> {
    let kind = residual.kind;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(((di as u64) << 32) | a as u64);
    let seed = seed_orbits(kind, &residual.decomposition, &mut rng);

    let out = levenberg_marquardt_projected(
        |p: &[f64]| Ok(residual.evaluate(p).0.as_slice().to_vec()),
        |p: &mut [f64]| clamp_params(kind, &residual.decomposition, p),
        &seed.params,
        cfg,
    )
    .ok()?;
    if out.xi > cfg.success_threshold {
        return None;
    }
    let (_, weights) = residual.evaluate(&out.x);
    if weights.iter().any(|w| !w.is_finite()) {
        return None;
    }
    let terms = split_instances(kind, &residual.decomposition, &out.x)
        .into_iter()
        .zip(weights.iter())
        .map(|(inst, &w)| RuleTerm::new(inst, w))
        .collect();
    let rule = QuadratureRule::new(kind, residual.phi, terms).ok()?;
    (!has_coincident_points(&rule)).then_some(rule)
}

fn has_coincident_points(rule: &QuadratureRule) -> bool {
    let (pts, _) = rule.expanded();
    pts.iter().enumerate().any(|(i, p)| {
        pts[..i]
            .iter()
            .any(|q| (0..3).map(|d| (p[d] - q[d]).powi(2)).sum::<f64>().sqrt() <= COINCIDENT_POINTS)
    })
}

/// Per term, the orbit id, the lexicographically smallest expanded point
/// and the weight; terms sorted. Independent of how the parameters of an
/// orbit happen to be ordered.
fn canonical_key(rule: &QuadratureRule) -> Vec<f64> {
    let orbits = &rule.kind.domain().orbits;
    let mut terms: Vec<Vec<f64>> = rule
        .terms
        .iter()
        .map(|t| {
            let pts = orbits[t.orbit.orbit_id].expand_raw(&t.orbit.params);
            let min = pts
                .into_iter()
                .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or([0.0; 3]);
            vec![t.orbit.orbit_id as f64, min[0], min[1], min[2], t.weight]
        })
        .collect();
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    terms.concat()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
