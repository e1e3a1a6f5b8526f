//! Perturbations of a live instance and the oblivious single-swap update.
//!
//! Only modular quality is supported. A step of [`simulate`] draws one event,
//! applies it, runs the update rule, then measures the solution against a
//! freshly recomputed exact optimum.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::uniform;
use crate::error::{Error, Result};
use crate::model::{Instance, Solution};
use crate::solvers::{best_swap, brute_force_opt, greedy_vertex, Constraint, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PerturbationEvent {
    WeightIncrease { item: usize, delta: f64 },
    WeightDecrease { item: usize, delta: f64 },
    DistIncrease { u: usize, v: usize, delta: f64 },
    DistDecrease { u: usize, v: usize, delta: f64 },
}

impl PerturbationEvent {
    /// The event that sets the weight of `item` to `value`.
    pub fn weight_reset(inst: &Instance, item: usize, value: f64) -> Result<Self> {
        let w = inst.quality().weights().ok_or(Error::UnsupportedQuality)?;
        let old = *w
            .get(item)
            .ok_or_else(|| Error::invalid(format!("item {item} out of range")))?;
        Ok(if value >= old {
            Self::WeightIncrease { item, delta: value - old }
        } else {
            Self::WeightDecrease { item, delta: old - value }
        })
    }

    /// The event that sets `d(u,v)` to `value`.
    pub fn dist_reset(inst: &Instance, u: usize, v: usize, value: f64) -> Result<Self> {
        if u >= inst.n() || v >= inst.n() {
            return Err(Error::invalid(format!("pair ({u},{v}) out of range")));
        }
        let old = inst.d(u, v);
        Ok(if value >= old {
            Self::DistIncrease { u, v, delta: value - old }
        } else {
            Self::DistDecrease { u, v, delta: old - value }
        })
    }

    pub fn delta(&self) -> f64 {
        match *self {
            Self::WeightIncrease { delta, .. }
            | Self::WeightDecrease { delta, .. }
            | Self::DistIncrease { delta, .. }
            | Self::DistDecrease { delta, .. } => delta,
        }
    }

    /// Roman numeral of the event type: i, ii, iii or iv.
    pub fn type_label(&self) -> &'static str {
        match self {
            Self::WeightIncrease { .. } => "i",
            Self::WeightDecrease { .. } => "ii",
            Self::DistIncrease { .. } => "iii",
            Self::DistDecrease { .. } => "iv",
        }
    }
}

impl fmt::Display for PerturbationEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::WeightIncrease { item, delta } => write!(f, "w+({item},{delta})"),
            Self::WeightDecrease { item, delta } => write!(f, "w-({item},{delta})"),
            Self::DistIncrease { u, v, delta } => write!(f, "d+({u},{v},{delta})"),
            Self::DistDecrease { u, v, delta } => write!(f, "d-({u},{v},{delta})"),
        }
    }
}

/// Returns a copy of `inst` with one weight or one distance changed.
/// Distance events are checked against every triangle through the pair.
pub fn apply_perturbation(inst: &Instance, ev: &PerturbationEvent) -> Result<Instance> {
    if !inst.quality().is_modular() {
        return Err(Error::UnsupportedQuality);
    }
    let delta = ev.delta();
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("delta must be finite and >= 0, got {delta}")));
    }
    let n = inst.n();
    let mut next = inst.clone();
    match *ev {
        PerturbationEvent::WeightIncrease { item, .. } | PerturbationEvent::WeightDecrease { item, .. } => {
            if item >= n {
                return Err(Error::invalid(format!("item {item} out of range")));
            }
            let w = &mut next.quality_mut().weights_mut().expect("modular")[item];
            *w = match ev {
                PerturbationEvent::WeightIncrease { .. } => *w + delta,
                _ => *w - delta,
            };
            if *w < 0.0 {
                return Err(Error::invalid(format!("weight of item {item} would become {w}")));
            }
        }
        PerturbationEvent::DistIncrease { u, v, .. } | PerturbationEvent::DistDecrease { u, v, .. } => {
            if u >= n || v >= n || u == v {
                return Err(Error::invalid(format!("({u},{v}) is not a pair of distinct items")));
            }
            let old = inst.d(u, v);
            let value = match ev {
                PerturbationEvent::DistIncrease { .. } => old + delta,
                _ => old - delta,
            };
            if value < 0.0 {
                return Err(Error::invalid(format!("d({u},{v}) would become {value}")));
            }
            next.dist_mut().set(u, v, value);
            next.dist().check_pair_triangles(u, v)?;
        }
    }
    Ok(next)
}

/// Applies the best single swap iff it strictly improves `φ`. Returns the
/// objective change, 0 when nothing was swapped.
pub fn oblivious_update(inst: &Instance, sol: &mut Solution) -> f64 {
    match best_swap(inst, sol, None) {
        Some(swap) if swap.gain > 0.0 => {
            sol.swap(inst, swap.out, swap.inn).expect("swap from best_swap is valid");
            swap.gain
        }
        _ => 0.0,
    }
}

/// Number of updates that restore ratio 3 after a weight decrease of `delta`
/// on a selected item, where `w` is `φ(S)` before the decrease:
/// `⌈log_{(p−2)/(p−3)} w/(w−δ)⌉`, or 1 when `p ≤ 3` or `δ ≤ w/(p−2)`.
pub fn required_updates_bound(w: f64, delta: f64, p: usize) -> Result<usize> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::invalid(format!("w must be positive, got {w}")));
    }
    if !(delta >= 0.0) || delta >= w {
        return Err(Error::invalid(format!("delta must lie in [0, w), got {delta} with w = {w}")));
    }
    if p <= 3 || delta <= w / (p - 2) as f64 {
        return Ok(1);
    }
    let base = (p - 2) as f64 / (p - 3) as f64;
    let exact = (w / (w - delta)).ln() / base.ln();
    // exact powers of the base would otherwise round up by one
    Ok(((exact - 1e-12).ceil() as usize).max(1))
}

/// Updates mandated after `ev` hits solution `sol` of size `p`.
pub fn mandated_updates(sol: &Solution, ev: &PerturbationEvent) -> Result<usize> {
    match *ev {
        PerturbationEvent::WeightDecrease { item, delta } if sol.contains(item) && delta > 0.0 => {
            required_updates_bound(sol.objective(), delta, sol.len())
        }
        _ => Ok(1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Env {
    /// Reset a random item weight to `U[0,1]`.
    Vertex,
    /// Reset a random pair distance to `U[1,2]`.
    Edge,
    /// Either of the above with probability ½.
    Mixed,
}

impl Env {
    pub fn name(&self) -> &'static str {
        match self {
            Env::Vertex => "vperturbation",
            Env::Edge => "eperturbation",
            Env::Mixed => "mperturbation",
        }
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Env {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" | "v" | "vperturbation" => Ok(Env::Vertex),
            "edge" | "e" | "eperturbation" => Ok(Env::Edge),
            "mixed" | "m" | "mperturbation" => Ok(Env::Mixed),
            _ => Err(Error::invalid(format!("unknown environment `{s}`"))),
        }
    }
}

pub fn draw_event(inst: &Instance, env: Env, rng: &mut impl Rng) -> Result<PerturbationEvent> {
    let n = inst.n();
    let vertex = match env {
        Env::Vertex => true,
        Env::Edge => false,
        Env::Mixed => rng.gen_bool(0.5),
    };
    if vertex {
        let item = rng.gen_range(0..n);
        PerturbationEvent::weight_reset(inst, item, uniform(rng, 0.0, 1.0))
    } else {
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        PerturbationEvent::dist_reset(inst, u, v, uniform(rng, 1.0, 2.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub repeat: usize,
    /// 0 is the initial greedy solution, before any event.
    pub step: usize,
    pub event: Option<PerturbationEvent>,
    /// Swaps actually applied; the protocol allows at most one per step.
    pub updates: usize,
    /// What `mandated_updates` asks for after this event, for reference.
    pub mandated: usize,
    pub gain: f64,
    pub phi_before: f64,
    pub phi_after: f64,
    pub phi_opt: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsReport {
    pub lambda: f64,
    pub p: usize,
    pub env: Env,
    pub steps: Vec<StepRecord>,
    pub worst_ratio: f64,
}

#[derive(Serialize)]
struct CsvRow {
    lambda: f64,
    env: &'static str,
    repeat: usize,
    step: usize,
    ratio: f64,
}

impl DynamicsReport {
    /// Fraction of recorded steps whose ratio stays within 2.
    pub fn within_ratio_two(&self) -> f64 {
        let ok = self.steps.iter().filter(|s| s.ratio <= 2.0 + 1e-9).count();
        ok as f64 / self.steps.len().max(1) as f64
    }

    /// Columns `lambda,env,repeat,step,ratio`; header included when asked.
    pub fn write_csv<W: Write>(&self, out: W, header: bool) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(header).from_writer(out);
        for s in &self.steps {
            w.serialize(CsvRow {
                lambda: self.lambda,
                env: self.env.name(),
                repeat: s.repeat,
                step: s.step,
                ratio: s.ratio,
            })?;
        }
        w.flush().map_err(|e| Error::Internal(e.to_string()))?;
        Ok(())
    }
}

pub fn ratio(opt: f64, value: f64) -> f64 {
    if value > 0.0 {
        opt / value
    } else if opt > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Runs `repeats` independent trajectories of `steps` events from `inst0`,
/// each started from Greedy B, with one oblivious update per event. Repeat `r` draws from the ChaCha8 stream `r`
/// of `seed`, so results do not depend on scheduling.
pub fn simulate(
    inst0: &Instance,
    p: usize,
    env: Env,
    steps: usize,
    repeats: usize,
    seed: u64,
) -> Result<DynamicsReport> {
    if !inst0.quality().is_modular() {
        return Err(Error::UnsupportedQuality);
    }
    let start = greedy_vertex(inst0, p, &SolverConfig::default())?;
    let opt0 = brute_force_opt(inst0, Constraint::Cardinality(p))?.objective();
    let runs: Vec<Result<Vec<StepRecord>>> = (0..repeats)
        .into_par_iter()
        .map(|repeat| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(repeat as u64);
            run_repeat(inst0, p, env, steps, repeat, &start, opt0, &mut rng)
        })
        .collect();
    let mut records = Vec::with_capacity(repeats * (steps + 1));
    for run in runs {
        records.extend(run?);
    }
    let worst_ratio = match records.is_empty() {
        true => 1.0,
        false => records.iter().map(|s| s.ratio).fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(DynamicsReport {
        lambda: inst0.lambda(),
        p,
        env,
        steps: records,
        worst_ratio,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_repeat(
    inst0: &Instance,
    p: usize,
    env: Env,
    steps: usize,
    repeat: usize,
    start: &Solution,
    opt0: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<StepRecord>> {
    let mut inst = inst0.clone();
    let mut sol = start.clone();
    let phi0 = sol.objective();
    let mut out = vec![StepRecord {
        repeat,
        step: 0,
        event: None,
        updates: 0,
        mandated: 0,
        gain: 0.0,
        phi_before: phi0,
        phi_after: phi0,
        phi_opt: opt0,
        ratio: ratio(opt0, phi0),
    }];
    for step in 1..=steps {
        let ev = draw_event(&inst, env, rng)?;
        let mandated = mandated_updates(&sol, &ev)?;
        inst = apply_perturbation(&inst, &ev)?;
        sol = Solution::from_items(&inst, sol.selected())?;
        let phi_before = sol.objective();
        let gain = oblivious_update(&inst, &mut sol);
        let phi_opt = brute_force_opt(&inst, Constraint::Cardinality(p))?.objective();
        out.push(StepRecord {
            repeat,
            step,
            event: Some(ev),
            updates: usize::from(gain > 0.0),
            mandated,
            gain,
            phi_before,
            phi_after: sol.objective(),
            phi_opt,
            ratio: ratio(phi_opt, sol.objective()),
        });
    }
    Ok(out)
}
