//! Which presents each theory admits for a given past.
//!
//! "TR allows" is existential: some microstate reaches the present. No
//! measure on microstates is assumed. Copenhagen allows a present wherever
//! the density is nonzero.
//!
//! * Step barrier: a particle inside the barrier leaves it within the least
//!   upper bound of the dwell time, so presents later than that bound are
//!   excluded for every microstate.
//! * Square well: the libration period ranges over `(0, t_ML)` and whole
//!   periods may be added, so every interior present is reachable.

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::microstate::Microstate;
use crate::potential::{Kinematics, Region};
use crate::times::{dwell_bound, libration_period};
use crate::wavefield::{CopenhagenState, WellEigenstate};

/// A spacetime point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub x: f64,
    pub t: f64,
}

impl Event {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !(x.is_finite() && t.is_finite()) {
            return domain(format!("event coordinates must be finite, got ({x}, {t})"));
        }
        Ok(Self { x, t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    BothAllow,
    CopenhagenOnly,
    TrOnly,
    NeitherAllow,
}

impl Classification {
    pub fn from_flags(tr: bool, copenhagen: bool) -> Self {
        match (tr, copenhagen) {
            (true, true) => Self::BothAllow,
            (false, true) => Self::CopenhagenOnly,
            (true, false) => Self::TrOnly,
            (false, false) => Self::NeitherAllow,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::BothAllow => "BothAllow",
            Self::CopenhagenOnly => "CopenhagenOnly",
            Self::TrOnly => "TROnly",
            Self::NeitherAllow => "NeitherAllow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageVerdict {
    pub tr_allowed: bool,
    pub copenhagen_allowed: bool,
    pub classification: Classification,
    /// A microstate realizing the present, when a constructive solver ran.
    pub witness: Option<Microstate>,
}

impl CoverageVerdict {
    fn new(tr_allowed: bool, copenhagen_allowed: bool, witness: Option<Microstate>) -> Self {
        Self {
            tr_allowed,
            copenhagen_allowed,
            classification: Classification::from_flags(tr_allowed, copenhagen_allowed),
            witness,
        }
    }
}

fn elapsed(past: &Event, present: &Event) -> Result<f64> {
    let dt = present.t - past.t;
    if !(dt > 0.0) {
        return domain(format!(
            "present must follow past (past.t = {}, present.t = {})",
            past.t, present.t
        ));
    }
    Ok(dt)
}

/// Verdict for a past and present both inside the step barrier (`x >= 0`).
///
/// TR admits the present iff the elapsed time is strictly below the dwell
/// bound. A past on the interface maximizes the remaining stay, so the bound
/// covers every interior past as well.
pub fn sb_verdict(past: &Event, present: &Event, kin: &Kinematics) -> Result<CoverageVerdict> {
    if past.x < 0.0 || present.x < 0.0 {
        return domain(format!(
            "step-barrier events must lie in the barrier x >= 0 (past.x = {}, present.x = {})",
            past.x, present.x
        ));
    }
    let dt = elapsed(past, present)?;
    let tr = dt < dwell_bound(kin);
    let copenhagen = CopenhagenState::barrier(*kin).density(present.x) > 0.0;
    Ok(CoverageVerdict::new(tr, copenhagen, None))
}

/// Whether `x` coincides with a node of the eigenfunction (to 1e-12, scaled).
pub fn is_node(state: &WellEigenstate, x: f64) -> bool {
    state
        .nodes(f64::NEG_INFINITY, f64::INFINITY)
        .iter()
        .any(|&n| (x - n).abs() <= 1e-12 * n.abs().max(1.0))
}

/// Verdict for a past and present inside a square well (`|x| < q`).
///
/// TR admits every such present through [`connect`]; Copenhagen excludes the
/// nodes of the eigenfunction.
pub fn sw_verdict(
    past: &Event,
    present: &Event,
    state: &WellEigenstate,
) -> Result<CoverageVerdict> {
    let solution = connect(past, present, state)?;
    let copenhagen = !is_node(state, present.x);
    Ok(CoverageVerdict::new(true, copenhagen, Some(solution.ms)))
}

/// Monochromatic-equivalent orbit used to place events on a libration.
///
/// The path is unfolded onto `s in [0, L)`, `L = 4(q + 1/kappa)`: rightward
/// transit `(-q, q)`, a stay of length-equivalent `2/kappa` at `x = q`,
/// leftward transit, and the same stay at `x = -q`. The orbit advances `s`
/// at the constant rate `L / period`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LibrationOrbit {
    pub half_width: f64,
    pub kappa: f64,
    pub period: f64,
    /// Time at which the orbit sits at `s = 0` (`x = -q`, moving right).
    pub epoch: f64,
}

impl LibrationOrbit {
    pub fn path_length(&self) -> f64 {
        4.0 * (self.half_width + self.kappa.recip())
    }

    fn rate(&self) -> f64 {
        self.path_length() / self.period
    }

    /// Position on the unfolded path.
    pub fn position_on_path(&self, s: f64) -> f64 {
        let q = self.half_width;
        let stay = 2.0 / self.kappa;
        let s = s.rem_euclid(self.path_length());
        if s < 2.0 * q {
            -q + s
        } else if s < 2.0 * q + stay {
            q
        } else if s < 4.0 * q + stay {
            q - (s - 2.0 * q - stay)
        } else {
            -q
        }
    }

    pub fn position_at(&self, t: f64) -> f64 {
        self.position_on_path((t - self.epoch) * self.rate())
    }
}

/// A libration connecting a past to a present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionSolution {
    pub ms: Microstate,
    pub whole_periods: u64,
    /// Orbit phase (time since the `s = 0` point) at the past event.
    pub phase_offset: f64,
    /// Time spent after the whole periods to reach the present.
    pub sub_orbital: f64,
    pub target_period: f64,
    /// Libration period of `ms`.
    pub realized_period: f64,
    /// Whether the present is reached while moving toward `+x`.
    pub arrives_rightward: bool,
    pub orbit: LibrationOrbit,
}

impl ConnectionSolution {
    /// Time at which the orbit reaches the present.
    pub fn arrival_time(&self, past: &Event) -> f64 {
        past.t + self.whole_periods as f64 * self.realized_period + self.sub_orbital
    }
}

/// Largest period reachable on the `c = 0` slice, `2(1+r^2) m(q+1/kappa)/(hbar kappa)`.
pub fn slice_max_period(kin: &Kinematics, q: f64) -> f64 {
    let r = kin.ratio;
    2.0 * (1.0 + r * r) * kin.units.mass * (q + kin.kappa.recip()) / (kin.units.hbar * kin.kappa)
}

/// Microstate `(a, 1/a, 0)` with libration period `target`, taking the root
/// `a >= r` of `tau a^2 - a + tau r^2 = 0`, `tau = target / prefactor`.
pub fn slice_microstate(kin: &Kinematics, q: f64, target: f64) -> Result<Microstate> {
    let r = kin.ratio;
    let prefactor = 2.0 * r * slice_max_period(kin, q);
    let tau = target / prefactor;
    let disc = 1.0 - 4.0 * tau * tau * r * r;
    if !(target > 0.0) || disc < 0.0 {
        return Err(Error::Infeasible(format!(
            "period {target} outside the c = 0 slice (0, {}]",
            slice_max_period(kin, q)
        )));
    }
    Microstate::from_a_c((1.0 + disc.sqrt()) / (2.0 * tau), 0.0)
}

/// Both roots of the slice equation, larger first.
pub fn slice_roots(kin: &Kinematics, q: f64, target: f64) -> Result<(f64, f64)> {
    let big = slice_microstate(kin, q, target)?.a();
    // product of the roots is r^2
    Ok((big, kin.ratio * kin.ratio / big))
}

const MAX_WHOLE_PERIODS: u64 = 1 << 40;

/// Finds a libration through `past` and `present`.
///
/// The past is placed on the rightward transit. For `n = 0, 1, 2, ...` and
/// each arrival direction, the period that makes `n` whole periods plus the
/// sub-orbit fit `dt` is computed; the first one inside the `c = 0` slice
/// is solved for its microstate.
pub fn connect(
    past: &Event,
    present: &Event,
    state: &WellEigenstate,
) -> Result<ConnectionSolution> {
    let dt = present.t - past.t;
    if !(dt > 0.0) {
        return Err(Error::Infeasible(format!(
            "present must follow past (dt = {dt})"
        )));
    }
    let q = state.half_width();
    for e in [past, present] {
        if state.potential.region(e.x) != Region::Free {
            return domain(format!("event x = {} lies outside the well |x| < {q}", e.x));
        }
    }
    let kin = &state.kinematics;
    let kappa = kin.kappa;
    let length = 4.0 * (q + kappa.recip());
    let stay = 2.0 / kappa;
    let t_max = slice_max_period(kin, q);

    let s0 = past.x + q;
    let targets = [
        (present.x + q, true),
        (2.0 * q + stay + (q - present.x), false),
    ];

    let mut n: u64 = 0;
    loop {
        for &(s1, rightward) in &targets {
            let d = (s1 - s0).rem_euclid(length);
            let cycles = n as f64 + d / length;
            if cycles <= 0.0 {
                continue;
            }
            let period = dt / cycles;
            if period > t_max {
                continue;
            }
            let ms = slice_microstate(kin, q, period)?;
            let realized = libration_period(kin, q, &ms)?;
            let orbit = LibrationOrbit {
                half_width: q,
                kappa,
                period: realized,
                epoch: past.t - s0 / length * realized,
            };
            return Ok(ConnectionSolution {
                ms,
                whole_periods: n,
                phase_offset: s0 / length * realized,
                sub_orbital: d / length * realized,
                target_period: period,
                realized_period: realized,
                arrives_rightward: rightward,
                orbit,
            });
        }
        n += 1;
        if n > MAX_WHOLE_PERIODS {
            return Err(Error::Infeasible(
                "no period found within the search limit".into(),
            ));
        }
        // Skip straight to the first n whose period can fit.
        let needed = (dt / t_max).floor() as u64;
        if n < needed.saturating_sub(1) {
            n = needed.saturating_sub(1);
        }
    }
}

/// Scenario for a set-relation scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    StepBarrier(Kinematics),
    SquareWellBound(WellEigenstate),
    SquareWellExcited(WellEigenstate),
}

impl Scenario {
    pub fn label(&self) -> &'static str {
        match self {
            Scenario::StepBarrier(_) => "SB",
            Scenario::SquareWellBound(_) => "SW-bound",
            Scenario::SquareWellExcited(_) => "SW-excited",
        }
    }
}

/// Pasts, presents and elapsed times to scan. Every combination is a cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub past_x: Vec<f64>,
    pub present_x: Vec<f64>,
    pub dt: Vec<f64>,
    pub past_t: f64,
}

impl GridSpec {
    pub fn uniform(
        past: (f64, f64, usize),
        present: (f64, f64, usize),
        dt: (f64, f64, usize),
    ) -> Self {
        Self {
            past_x: linspace(past.0, past.1, past.2),
            present_x: linspace(present.0, present.1, present.2),
            dt: linspace(dt.0, dt.1, dt.2),
            past_t: 0.0,
        }
    }

    pub fn cells(&self) -> usize {
        self.past_x.len() * self.present_x.len() * self.dt.len()
    }
}

/// `n` evenly spaced points on `[lo, hi]` (just `lo` when `n == 1`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                // symmetric ranges hit 0 exactly at the midpoint
                lo * (1.0 - t) + hi * t
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassCounts {
    pub both: usize,
    pub copenhagen_only: usize,
    pub tr_only: usize,
    pub neither: usize,
}

impl ClassCounts {
    fn add(mut self, c: Classification) -> Self {
        match c {
            Classification::BothAllow => self.both += 1,
            Classification::CopenhagenOnly => self.copenhagen_only += 1,
            Classification::TrOnly => self.tr_only += 1,
            Classification::NeitherAllow => self.neither += 1,
        }
        self
    }

    pub fn total(&self) -> usize {
        self.both + self.copenhagen_only + self.tr_only + self.neither
    }
}

pub const REL_UNION_EQ_TR: &str = "{TR} ∪ {C} = {TR}";
pub const REL_UNION_NE_TR: &str = "{TR} ∪ {C} ≠ {TR}";
pub const REL_UNION_EQ_C: &str = "{TR} ∪ {C} = {Copenhagen}";
pub const REL_UNION_NE_C: &str = "{TR} ∪ {C} ≠ {Copenhagen}";

/// Outcome of a set-relation scan.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub scenario: &'static str,
    pub counts: ClassCounts,
    /// The headline relation for the scenario.
    pub relation: &'static str,
    /// Whether `{TR} ∪ {C} = {TR}` held on the grid.
    pub union_equals_tr: bool,
    /// Whether `{TR} ∪ {C} = {C}` held on the grid.
    pub union_equals_copenhagen: bool,
    /// Present positions of TR-only cells, sorted and deduplicated.
    pub tr_only_x: Vec<f64>,
    pub notes: Vec<&'static str>,
}

const NOTE_EXISTENTIAL: &str =
    "TR admissibility is existential over microstates; no probability measure on microstates is assumed";
const NOTE_GEDANKEN: &str =
    "an ideal semi-infinite step is a gedanken setting; real potentials smooth the step";

/// Scans verdicts over `grid` and summarizes the set relations.
pub fn set_relation_report(
    scenario: &Scenario,
    grid: &GridSpec,
    exec: Exec,
) -> Result<RelationReport> {
    let mut cells = Vec::with_capacity(grid.cells());
    for &px in &grid.past_x {
        for &x in &grid.present_x {
            for &dt in &grid.dt {
                cells.push((px, x, dt));
            }
        }
    }
    let verdicts = exec.try_map(&cells, |&(px, x, dt)| {
        let past = Event::new(px, grid.past_t)?;
        let present = Event::new(x, grid.past_t + dt)?;
        let v = match scenario {
            Scenario::StepBarrier(kin) => sb_verdict(&past, &present, kin)?,
            Scenario::SquareWellBound(s) | Scenario::SquareWellExcited(s) => {
                sw_verdict(&past, &present, s)?
            }
        };
        Ok::<_, Error>((x, v.classification))
    })?;

    let counts = verdicts
        .iter()
        .fold(ClassCounts::default(), |acc, &(_, c)| acc.add(c));
    let mut tr_only_x: Vec<f64> = verdicts
        .iter()
        .filter(|(_, c)| *c == Classification::TrOnly)
        .map(|&(x, _)| x)
        .collect();
    tr_only_x.sort_by(f64::total_cmp);
    tr_only_x.dedup();

    let union_equals_tr = counts.copenhagen_only == 0;
    let union_equals_copenhagen = counts.tr_only == 0;
    let relation = match scenario {
        Scenario::StepBarrier(_) | Scenario::SquareWellBound(_) => {
            if union_equals_tr {
                REL_UNION_EQ_TR
            } else {
                REL_UNION_NE_TR
            }
        }
        Scenario::SquareWellExcited(_) => {
            if union_equals_copenhagen {
                REL_UNION_EQ_C
            } else {
                REL_UNION_NE_C
            }
        }
    };
    let mut notes = vec![NOTE_EXISTENTIAL];
    if matches!(scenario, Scenario::StepBarrier(_)) {
        notes.push(NOTE_GEDANKEN);
    }
    Ok(RelationReport {
        scenario: scenario.label(),
        counts,
        relation,
        union_equals_tr,
        union_equals_copenhagen,
        tr_only_x,
        notes,
    })
}
