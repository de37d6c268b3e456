//! Particle swarm search over (P_UE, P_BS, W_A, W_B).
//!
//! Each iteration:
//!
//! 1. project every particle onto the feasible set: powers rescaled to sum
//!    to P, bandwidths rescaled to sum to α_1 (W + w_o) and then clamped to
//!    [α_1 w_o, α_1 W] (absolute values are taken before rescaling);
//! 2. score each particle with λ = min{R_A, ε R_B};
//! 3. pick the global best and, per particle, the best of its ring
//!    neighbourhood;
//! 4. X ← X + u_1 r_1 (local − F) + u_2 r_2 (global − F), then F ← F + μ X.
//!
//! The best particle ever scored is returned.
//!
//! Random numbers come from ChaCha8 seeded with `rng_seed`. Uniform draws use
//! the top 53 bits of each 64-bit output. Draw order: initialization is
//! row-major over the N×4 population; a particle that has to be re-seeded
//! during projection takes 4 draws at that point; the velocity update is
//! row-major with r_1 drawn before r_2 for every element.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SolveResult, SolverKind};
use crate::ratemodel::{evaluate, Allocation, ScenarioParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoConfig {
    /// N.
    pub population_size: usize,
    /// T.
    pub max_iterations: usize,
    /// u_1, pull towards the neighbourhood best.
    pub learning_factor_1: f64,
    /// u_2, pull towards the global best.
    pub learning_factor_2: f64,
    /// μ, step size applied to the velocity in the position update.
    pub inertia_weight: f64,
    pub rng_seed: u64,
    /// Whether a particle counts as part of its own ring neighbourhood.
    pub ring_includes_self: bool,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            population_size: 50,
            max_iterations: 200,
            learning_factor_1: 2.0,
            learning_factor_2: 2.0,
            inertia_weight: 0.01,
            rng_seed: 0,
            ring_includes_self: true,
        }
    }
}

impl PsoConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.population_size < 3 {
            problems.push(format!(
                "population size must be at least 3 for the ring topology, got {}",
                self.population_size
            ));
        }
        if self.max_iterations < 1 {
            problems.push("at least one iteration is required".to_string());
        }
        for (name, v) in [
            ("learning factor 1", self.learning_factor_1),
            ("learning factor 2", self.learning_factor_2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                problems.push(format!("{name} must be positive, got {v}"));
            }
        }
        // μ = 0 freezes the swarm; allowed for degenerate runs.
        if !(self.inertia_weight >= 0.0 && self.inertia_weight.is_finite()) {
            problems.push(format!(
                "inertia weight must be nonnegative, got {}",
                self.inertia_weight
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

/// Work done so far, for complexity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PsoCounters {
    pub fitness_evaluations: u64,
    /// Per-element velocity and position updates.
    pub state_updates: u64,
    /// Particles re-seeded because projection was undefined.
    pub reseeds: u64,
}

type Particle = [f64; 4];

#[derive(Debug, Clone)]
pub struct PsoState {
    scn: ScenarioParams,
    cfg: PsoConfig,
    rng: ChaCha8Rng,
    population: Vec<Particle>,
    velocity: Vec<Particle>,
    fitness: Vec<f64>,
    best_particle: Particle,
    best_fitness: f64,
    iteration: usize,
    counters: PsoCounters,
}

impl PsoState {
    /// Random initial swarm: powers uniform on [0, P], bandwidths uniform on
    /// [0, α_1 (W + w_o)], zero velocity.
    pub fn new(scn: &ScenarioParams, cfg: &PsoConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        let population = (0..cfg.population_size)
            .map(|_| random_particle(&mut rng, scn))
            .collect();
        Ok(Self::assemble(scn, cfg, rng, population))
    }

    /// Starts from a caller-supplied swarm instead of a random one.
    pub fn from_population(
        scn: &ScenarioParams,
        cfg: &PsoConfig,
        population: Vec<[f64; 4]>,
    ) -> Result<Self> {
        cfg.validate()?;
        if population.len() != cfg.population_size {
            return Err(Error::InvalidParameters(format!(
                "population has {} particles, config expects {}",
                population.len(),
                cfg.population_size
            )));
        }
        let rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        Ok(Self::assemble(scn, cfg, rng, population))
    }

    fn assemble(
        scn: &ScenarioParams,
        cfg: &PsoConfig,
        rng: ChaCha8Rng,
        population: Vec<Particle>,
    ) -> Self {
        let n = population.len();
        Self {
            scn: *scn,
            cfg: *cfg,
            rng,
            population,
            velocity: vec![[0.0; 4]; n],
            fitness: vec![f64::NEG_INFINITY; n],
            best_particle: [0.0; 4],
            best_fitness: f64::NEG_INFINITY,
            iteration: 0,
            counters: PsoCounters::default(),
        }
    }

    pub fn population(&self) -> &[[f64; 4]] {
        &self.population
    }

    pub fn velocity(&self) -> &[[f64; 4]] {
        &self.velocity
    }

    /// Fitness of each particle as of the last scoring pass.
    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    pub fn best_particle(&self) -> [f64; 4] {
        self.best_particle
    }

    /// Best fitness seen so far; −∞ before the first step.
    pub fn best_fitness(&self) -> f64 {
        self.best_fitness
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn counters(&self) -> PsoCounters {
        self.counters
    }

    pub fn is_finished(&self) -> bool {
        self.iteration >= self.cfg.max_iterations
    }

    /// One full iteration: project, score, select bests, move.
    pub fn step(&mut self) {
        self.project();
        self.score();
        let global = self.global_best();
        let local = self.local_bests();
        self.advance(&local, global);
        self.iteration += 1;
    }

    fn project(&mut self) {
        for i in 0..self.population.len() {
            while !project_particle(&mut self.population[i], &self.scn) {
                self.population[i] = random_particle(&mut self.rng, &self.scn);
                self.counters.reseeds += 1;
            }
        }
    }

    fn score(&mut self) {
        let scn = &self.scn;
        for (f, p) in self.fitness.iter_mut().zip(&self.population) {
            *f = particle_fitness(scn, p);
        }
        self.counters.fitness_evaluations += self.population.len() as u64;
    }

    fn global_best(&mut self) -> Particle {
        let g = argmax(&self.fitness, 0..self.fitness.len());
        if self.fitness[g] > self.best_fitness {
            self.best_fitness = self.fitness[g];
            self.best_particle = self.population[g];
        }
        self.population[g]
    }

    fn local_bests(&self) -> Vec<Particle> {
        let n = self.population.len();
        (0..n)
            .map(|i| {
                let prev = (i + n - 1) % n;
                let next = (i + 1) % n;
                let best = if self.cfg.ring_includes_self {
                    argmax(&self.fitness, [prev, i, next])
                } else {
                    argmax(&self.fitness, [prev, next])
                };
                self.population[best]
            })
            .collect()
    }

    fn advance(&mut self, local: &[Particle], global: Particle) {
        let PsoConfig {
            learning_factor_1: u1,
            learning_factor_2: u2,
            inertia_weight: mu,
            ..
        } = self.cfg;
        for (i, (x, f)) in self
            .velocity
            .iter_mut()
            .zip(&mut self.population)
            .enumerate()
        {
            for m in 0..4 {
                let r1 = unit_draw(&mut self.rng);
                let r2 = unit_draw(&mut self.rng);
                x[m] += u1 * r1 * (local[i][m] - f[m]) + u2 * r2 * (global[m] - f[m]);
                f[m] += mu * x[m];
            }
        }
        self.counters.state_updates += 4 * self.population.len() as u64;
    }

    fn result(&self) -> Result<SolveResult> {
        let allocation = Allocation::from_array(self.best_particle);
        Ok(SolveResult {
            allocation,
            report: evaluate(&self.scn, &allocation)?,
            solver: SolverKind::Pso,
            iterations_used: self.iteration,
            converged: self.is_finished(),
        })
    }

    /// Runs the remaining iterations and returns the best particle found.
    pub fn run(mut self) -> Result<SolveResult> {
        while !self.is_finished() {
            self.step();
        }
        self.result()
    }
}

/// Particle swarm max-min allocation. Deterministic for a given seed.
///
/// The swarm has no convergence test; `converged` only records that all T
/// iterations ran.
pub fn pso_solve(scn: &ScenarioParams, cfg: &PsoConfig) -> Result<SolveResult> {
    PsoState::new(scn, cfg)?.run()
}

/// Uniform on [0, 1) from the top 53 bits.
fn unit_draw(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn random_particle(rng: &mut ChaCha8Rng, scn: &ScenarioParams) -> Particle {
    let p = scn.total_power();
    let w = scn.bandwidth_budget();
    [
        p * unit_draw(rng),
        p * unit_draw(rng),
        w * unit_draw(rng),
        w * unit_draw(rng),
    ]
}

/// Projects in place. False when a pair sums to zero (or is not finite) and
/// the rescaling is undefined.
fn project_particle(f: &mut Particle, scn: &ScenarioParams) -> bool {
    let power_sum = f[0].abs() + f[1].abs();
    let band_sum = f[2].abs() + f[3].abs();
    let usable = |s: f64| s > 0.0 && s.is_finite();
    if !(usable(power_sum) && usable(band_sum)) {
        return false;
    }
    let p = scn.total_power();
    let budget = scn.bandwidth_budget();
    let floor = scn.bandwidth_floor();
    let cap = scn.bandwidth_cap();
    f[0] = f[0].abs() / power_sum * p;
    f[1] = f[1].abs() / power_sum * p;
    for v in &mut f[2..] {
        *v = (v.abs() / band_sum * budget).clamp(floor, cap);
    }
    true
}

fn particle_fitness(scn: &ScenarioParams, f: &Particle) -> f64 {
    evaluate(scn, &Allocation::from_array(*f))
        .map(|r| r.fitness)
        .unwrap_or(f64::NEG_INFINITY)
}

/// Index of the largest fitness among `candidates`; first wins ties.
fn argmax(fitness: &[f64], candidates: impl IntoIterator<Item = usize>) -> usize {
    let mut iter = candidates.into_iter();
    let mut best = iter.next().expect("at least one candidate");
    for i in iter {
        if fitness[i] > fitness[best] {
            best = i;
        }
    }
    best
}
