//! Simulated annealing over the flip graph, searching for prismatoids with
//! few vertices at a prescribed minimum width.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::Error;
use crate::flip::Flip;
use crate::prism::{Prismatoid, Width};
use crate::vertex::Face;

/// Geometric cooling: temperature(k) = t0 * rate^k.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub t0: f64,
    pub rate: f64,
    pub iterations: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            t0: 1000.0,
            rate: 0.99997,
            iterations: 500_000,
        }
    }
}

impl Schedule {
    pub fn temperature(&self, k: usize) -> f64 {
        self.t0 * self.rate.powi(k as i32)
    }
}

/// Cost: vertex count plus epsilon times the generalized p-mean of the
/// vertex neighborhood sizes (p = -3 rewards complexes whose smallest vertex
/// neighborhoods are small, priming them for deletion flips).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Objective {
    pub epsilon: f64,
    pub power: f64,
}

impl Default for Objective {
    fn default() -> Self {
        Objective {
            epsilon: 0.01,
            power: -3.0,
        }
    }
}

impl Objective {
    pub fn cost(&self, p: &Prismatoid) -> f64 {
        let n = p.vertex_count() as f64;
        let mut acc = 0.0;
        for v in p.complex().used_vertices().iter() {
            let size = p
                .complex()
                .neighborhood(&Face::singleton(v))
                .expect("used vertex is a face")
                .len() as f64;
            acc += size.powf(self.power);
        }
        n + self.epsilon * (acc / n).powf(1.0 / self.power)
    }
}

/// Accept downhill moves outright, uphill moves with probability
/// exp(-delta/t).
pub fn accept_probability(delta: f64, temperature: f64) -> Result<f64, Error> {
    if !(temperature > 0.0) {
        return Err(Error::NonpositiveTemperature(temperature));
    }
    Ok(if delta < 0.0 {
        1.0
    } else {
        (-delta / temperature).exp()
    })
}

pub fn accept_decision<R: Rng + ?Sized>(
    rng: &mut R,
    delta: f64,
    temperature: f64,
) -> Result<bool, Error> {
    let p = accept_probability(delta, temperature)?;
    if delta < 0.0 {
        return Ok(true);
    }
    Ok(rng.random::<f64>() < p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthConstraint {
    Minimum(u32),
    Exact(u32),
}

impl WidthConstraint {
    pub fn allows(&self, w: Width) -> bool {
        match (self, w) {
            (WidthConstraint::Minimum(m), w) => w >= Width::Finite(*m),
            (WidthConstraint::Exact(e), Width::Finite(w)) => w == *e,
            (WidthConstraint::Exact(_), Width::Infinite) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealConfig {
    pub seed: u64,
    pub schedule: Schedule,
    pub objective: Objective,
    pub constraint: WidthConstraint,
    /// Ground-set size for the chain. With `Some(cap)` insertion flips stop
    /// being moves while the vertex count sits at the cap, so the walk
    /// explores prismatoids over a fixed label pool instead of minting labels
    /// without bound. `None` lets the hot phase grow the state arbitrarily,
    /// which rarely terminates on realistic schedules.
    pub max_vertices: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum StepOutcome {
    Accepted(Flip),
    RejectedCost(Flip),
    RejectedConstraint(Flip),
}

#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub step: usize,
    pub flip: Flip,
    pub cost: f64,
    pub width: Width,
    pub vertices: usize,
}

#[derive(Clone, Debug)]
pub struct BestState {
    pub step: usize,
    pub vertices: usize,
    pub facets: usize,
    pub width: Width,
    pub cost: f64,
    pub prismatoid: Prismatoid,
}

#[derive(Clone, Debug)]
pub struct AnnealRun {
    pub config: AnnealConfig,
    pub trace: Vec<TraceEntry>,
    pub best: BestState,
    pub accepted: usize,
    pub rejected_cost: usize,
    pub rejected_constraint: usize,
    pub final_vertices: usize,
    pub final_facets: usize,
    pub final_width: Width,
    pub final_cost: f64,
    /// Visits per (vertices, facets) pair, one tick per iteration.
    pub histogram: BTreeMap<(usize, usize), u64>,
}

/// One annealing move: sample a flip, apply, enforce the width constraint,
/// then accept or roll back by the cost rule. Constraint-rejected proposals
/// still consume the iteration and its temperature.
pub fn anneal_step<R: Rng + ?Sized>(
    p: &mut Prismatoid,
    rng: &mut R,
    temperature: f64,
    objective: &Objective,
    constraint: &WidthConstraint,
    max_vertices: Option<usize>,
) -> Result<StepOutcome, Error> {
    let flip = p.sample_flip_within(rng, max_vertices)?;
    let cost_before = objective.cost(p);
    let inverse = p.apply_flip(&flip)?;
    if !constraint.allows(p.width()) {
        p.apply_flip(&inverse)?;
        return Ok(StepOutcome::RejectedConstraint(flip));
    }
    let delta = objective.cost(p) - cost_before;
    if accept_decision(rng, delta, temperature)? {
        Ok(StepOutcome::Accepted(flip))
    } else {
        p.apply_flip(&inverse)?;
        Ok(StepOutcome::RejectedCost(flip))
    }
}

/// Runs a full chain. The trace records the accepted flips, which replayed in
/// order on the start prismatoid reproduce the final state. The best state is
/// the lexicographic minimum of (vertex count, cost) over all visited states.
pub fn anneal_run(start: &Prismatoid, config: &AnnealConfig) -> Result<AnnealRun, Error> {
    let mut p = start.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trace = Vec::new();
    let mut histogram: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut best = BestState {
        step: 0,
        vertices: p.vertex_count(),
        facets: p.facet_count(),
        width: p.width(),
        cost: config.objective.cost(&p),
        prismatoid: p.clone(),
    };
    let (mut accepted, mut rejected_cost, mut rejected_constraint) = (0usize, 0usize, 0usize);
    for k in 0..config.schedule.iterations {
        let t = config.schedule.temperature(k);
        match anneal_step(
            &mut p,
            &mut rng,
            t,
            &config.objective,
            &config.constraint,
            config.max_vertices,
        )? {
            StepOutcome::Accepted(flip) => {
                accepted += 1;
                let cost = config.objective.cost(&p);
                let entry = TraceEntry {
                    step: k,
                    flip,
                    cost,
                    width: p.width(),
                    vertices: p.vertex_count(),
                };
                if (p.vertex_count(), cost) < (best.vertices, best.cost) {
                    best = BestState {
                        step: k,
                        vertices: p.vertex_count(),
                        facets: p.facet_count(),
                        width: p.width(),
                        cost,
                        prismatoid: p.clone(),
                    };
                }
                trace.push(entry);
            }
            StepOutcome::RejectedCost(_) => rejected_cost += 1,
            StepOutcome::RejectedConstraint(_) => rejected_constraint += 1,
        }
        *histogram
            .entry((p.vertex_count(), p.facet_count()))
            .or_default() += 1;
    }
    Ok(AnnealRun {
        config: config.clone(),
        trace,
        best,
        accepted,
        rejected_cost,
        rejected_constraint,
        final_vertices: p.vertex_count(),
        final_facets: p.facet_count(),
        final_width: p.width(),
        final_cost: config.objective.cost(&p),
        histogram,
    })
}

#[derive(Clone, Debug)]
pub struct InflateWalk {
    pub prismatoid: Prismatoid,
    pub applied: Vec<Flip>,
    pub inverses: Vec<Flip>,
}

/// Random walk biased toward insertion flips, keeping the width at or above
/// `min_width`. Rejected proposals consume their step. The recorded inverses,
/// replayed in reverse, deflate the result back to the start.
pub fn inflate_walk(
    start: &Prismatoid,
    steps: usize,
    seed: u64,
    bias: f64,
    min_width: u32,
) -> Result<InflateWalk, Error> {
    let mut p = start.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut applied = Vec::new();
    let mut inverses = Vec::new();
    for _ in 0..steps {
        let flip = if rng.random::<f64>() < bias {
            p.sample_insertion_flip(&mut rng)?
        } else {
            p.sample_flip(&mut rng)?
        };
        let inverse = p.apply_flip(&flip)?;
        if !WidthConstraint::Minimum(min_width).allows(p.width()) {
            p.apply_flip(&inverse)?;
            continue;
        }
        applied.push(flip);
        inverses.push(inverse);
    }
    Ok(InflateWalk {
        prismatoid: p,
        applied,
        inverses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ann6_prismatoid;

    #[test]
    fn cost_of_ann6() {
        let p = ann6_prismatoid();
        let c = Objective::default().cost(&p);
        assert!((c - 6.05).abs() < 1e-9, "cost {c}");
    }

    #[test]
    fn acceptance_rule() {
        assert_eq!(accept_probability(-1.0, 1.0).unwrap(), 1.0);
        assert_eq!(accept_probability(0.0, 1.0).unwrap(), 1.0);
        let p = accept_probability(2.0, 1.0).unwrap();
        assert!((p - (-2.0f64).exp()).abs() < 1e-12);
        assert!(matches!(
            accept_probability(1.0, 0.0),
            Err(Error::NonpositiveTemperature(_))
        ));
        assert!(matches!(
            accept_probability(1.0, -3.0),
            Err(Error::NonpositiveTemperature(_))
        ));
    }

    #[test]
    fn acceptance_frequency_matches_the_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(20_240_901);
        let (delta, t) = (2.0, 1.0);
        let p = accept_probability(delta, t).unwrap();
        let trials = 100_000usize;
        let mut hits = 0usize;
        for _ in 0..trials {
            if accept_decision(&mut rng, delta, t).unwrap() {
                hits += 1;
            }
        }
        let mean = trials as f64 * p;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!(
            (hits as f64 - mean).abs() <= 3.0 * sigma,
            "hits {hits}, expected {mean:.1} ± {:.1}",
            3.0 * sigma
        );
    }

    #[test]
    fn schedule_is_geometric() {
        let s = Schedule {
            t0: 1000.0,
            rate: 0.99997,
            iterations: 500_000,
        };
        assert_eq!(s.temperature(0), 1000.0);
        assert!((s.temperature(2) - 1000.0 * 0.99997 * 0.99997).abs() < 1e-9);
    }

    #[test]
    fn short_run_trace_replays_to_the_final_state() {
        let start = ann6_prismatoid();
        let config = AnnealConfig {
            seed: 5,
            schedule: Schedule {
                t0: 1.0,
                rate: 0.999,
                iterations: 300,
            },
            objective: Objective::default(),
            constraint: WidthConstraint::Minimum(3),
            max_vertices: Some(9),
        };
        let run = anneal_run(&start, &config).unwrap();
        assert_eq!(
            run.accepted + run.rejected_cost + run.rejected_constraint,
            300
        );
        assert!(run.histogram.keys().all(|&(v, _)| v <= 9));
        assert_eq!(run.histogram.values().sum::<u64>(), 300);
        let mut replayed = start.clone();
        for entry in &run.trace {
            replayed.apply_flip(&entry.flip).unwrap();
        }
        assert_eq!(replayed.vertex_count(), run.final_vertices);
        assert_eq!(replayed.facet_count(), run.final_facets);
        assert_eq!(replayed.width(), run.final_width);
        replayed.consistency_check().unwrap();
        assert!(run.best.vertices <= start.vertex_count());
        assert!(run.best.prismatoid.width() >= Width::Finite(3));
    }

    #[test]
    fn exact_width_constraint_holds_along_a_run() {
        let start = ann6_prismatoid();
        let config = AnnealConfig {
            seed: 9,
            schedule: Schedule {
                t0: 2.0,
                rate: 0.999,
                iterations: 200,
            },
            objective: Objective::default(),
            constraint: WidthConstraint::Exact(3),
            max_vertices: None,
        };
        let run = anneal_run(&start, &config).unwrap();
        let mut replayed = start;
        for entry in &run.trace {
            replayed.apply_flip(&entry.flip).unwrap();
            assert_eq!(replayed.width(), Width::Finite(3));
        }
    }

    #[test]
    fn inflate_then_deflate_restores_the_start() {
        let start = ann6_prismatoid();
        let walk = inflate_walk(&start, 25, 77, 0.9, 3).unwrap();
        assert!(walk.prismatoid.vertex_count() > start.vertex_count());
        let mut back = walk.prismatoid.clone();
        for inv in walk.inverses.iter().rev() {
            back.apply_flip(inv).unwrap();
        }
        assert!(back.structurally_eq(&start));
    }
}
