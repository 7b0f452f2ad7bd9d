//! Subcommand evaluation.

use crate::args::{
    Cli, Command, CoverageCommand, EventArg, EventPair, FormatArg, MicrostateArgs, ParityArg,
    PotentialArgs, Quantity, RangeArg, RegionArg, ScenarioArg, SignArg, StateArgs, StateParity,
    SweepParam,
};
use crate::config::{load_config, Config, PotentialKind};
use crate::error::{CliError, CliResult};
use crate::output::{emit, Fields, Format, OutputRecord};
use clap::ValueEnum;
use trcov::coverage::{
    connect, sb_verdict, set_relation_report, sw_verdict, CoverageVerdict, Event, GridSpec,
    Scenario,
};
use trcov::microstate::normalize;
use trcov::potential::{matching_residual, EIGEN_SCAN_POINTS};
use trcov::times::{
    dwell_bound, dwell_time, dwell_time_monochromatic, libration_bound, libration_bound_printed,
    libration_infimum_probe, libration_period, libration_period_monochromatic, max_dwell_with,
    max_libration_with, ExtremalReport, OptimizerOptions, Sign,
};
use trcov::trajectory::{sample_trajectory, ACTION_REL_TOL, ENERGY_STEP, TAIL_U};
use trcov::wavefield::{canonical_basis, qshje_residual, WellEigenstate};
use trcov::{
    bound_state_energies, Exec, Kinematics, Microstate, Parity, ParityFilter, Potential, Region,
    Units,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const NOTE_EXISTENTIAL: &str =
    "TR admissibility is existential over microstates; no probability measure on microstates is assumed";

/// Resolved global settings.
struct Ctx {
    cfg: Config,
    units: Units,
}

impl Ctx {
    fn new(cli: &Cli) -> CliResult<Self> {
        let cfg = match &cli.config {
            Some(path) => load_config(path).map_err(CliError::Usage)?,
            None => Config::default(),
        };
        let hbar = cli.hbar.unwrap_or(cfg.units.hbar);
        let mass = cli.mass.unwrap_or(cfg.units.mass);
        let units = Units::new(hbar, mass)?;
        Ok(Self { cfg, units })
    }

    fn height(&self, p: &PotentialArgs) -> CliResult<f64> {
        p.height
            .or_else(|| self.cfg.potential.as_ref().map(|c| c.height))
            .ok_or_else(|| {
                CliError::Usage("--U is required (or set potential.U in the config)".into())
            })
    }

    fn half_width(&self, p: &PotentialArgs) -> CliResult<f64> {
        p.half_width
            .or_else(|| self.cfg.potential.as_ref().and_then(|c| c.q))
            .ok_or_else(|| {
                CliError::Usage("--q is required (or set potential.q in the config)".into())
            })
    }

    fn step_kinematics(&self, energy: f64, p: &PotentialArgs) -> CliResult<Kinematics> {
        if p.half_width.is_some() {
            return Err(CliError::Usage(
                "--q applies only to square-well commands".into(),
            ));
        }
        if let Some(c) = &self.cfg.potential {
            if c.kind != PotentialKind::Step && p.height.is_none() {
                return Err(CliError::Usage(
                    "config potential is a well; this command needs a step barrier".into(),
                ));
            }
        }
        Ok(Kinematics::new(energy, self.height(p)?, self.units)?)
    }

    fn well(&self, p: &PotentialArgs) -> CliResult<Potential> {
        Ok(Potential::square_well(
            self.height(p)?,
            self.half_width(p)?,
        )?)
    }

    fn epsilon(&self, flag: Option<f64>) -> f64 {
        flag.unwrap_or(self.cfg.defaults.epsilon)
    }

    fn base_inputs(&self) -> Fields {
        Fields::new()
            .with("hbar", self.units.hbar)
            .with("mass", self.units.mass)
    }
}

fn base_metadata() -> Fields {
    Fields::new().with("version", VERSION)
}

fn record(command: &str, inputs: Fields, outputs: Fields, metadata: Fields) -> OutputRecord {
    OutputRecord {
        command: command.to_owned(),
        inputs,
        outputs,
        metadata,
    }
}

fn microstate(m: &MicrostateArgs) -> CliResult<Microstate> {
    Ok(normalize(m.a, m.b, m.c)?)
}

fn ms_inputs(f: &mut Fields, m: &MicrostateArgs) {
    f.push("a", m.a);
    f.push("b", m.b);
    f.push("c", m.c);
}

fn signs(s: SignArg) -> Vec<Sign> {
    match s {
        SignArg::Plus => vec![Sign::Plus],
        SignArg::Minus => vec![Sign::Minus],
        SignArg::Both => vec![Sign::Plus, Sign::Minus],
    }
}

fn state_parity(p: StateParity) -> Parity {
    match p {
        StateParity::Even => Parity::Even,
        StateParity::Odd => Parity::Odd,
    }
}

fn region(r: RegionArg) -> Region {
    match r {
        RegionArg::Free => Region::Free,
        RegionArg::Forbidden => Region::Forbidden,
    }
}

fn event(e: &EventArg) -> CliResult<Event> {
    Ok(Event::new(e.x, e.t)?)
}

fn kin_outputs(f: &mut Fields, kin: &Kinematics) {
    f.push("E", kin.energy);
    f.push("U", kin.height);
    f.push("k", kin.k);
    f.push("kappa", kin.kappa);
}

fn optimizer_metadata(opts: &OptimizerOptions, epsilon: f64) -> Fields {
    base_metadata()
        .with("epsilon", epsilon)
        .with("c_grid", opts.c_grid)
        .with("log_a_half_width", opts.log_a_half_width)
        .with("xtol", opts.xtol)
        .with(
            "extrapolation",
            "linear in epsilon from epsilon and 2 epsilon",
        )
}

fn ms_outputs(f: &mut Fields, ms: &Microstate) {
    f.push("a", ms.a());
    f.push("b", ms.b());
    f.push("c", ms.c());
}

/// Runs the parsed command and returns the rendered output.
pub fn execute(cli: &Cli) -> CliResult<String> {
    let ctx = Ctx::new(cli)?;
    let (records, as_array) = evaluate(&ctx, &cli.command)?;
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    emit(&records, format, cli.pretty, as_array).map_err(CliError::Usage)
}

fn evaluate(ctx: &Ctx, command: &Command) -> CliResult<(Vec<OutputRecord>, bool)> {
    Ok(match command {
        Command::Kinematics { energy, potential } => {
            let kin = ctx.step_kinematics(energy.energy, potential)?;
            (vec![kinematics_record(ctx, &kin)], false)
        }
        Command::Energies { potential, parity } => (energies(ctx, potential, *parity)?, true),
        Command::Dwell {
            energy,
            potential,
            microstate: m,
            sign,
        } => {
            let kin = ctx.step_kinematics(energy.energy, potential)?;
            let ms = microstate(m)?;
            let records = signs(*sign)
                .into_iter()
                .map(|s| dwell_record(ctx, &kin, &ms, s))
                .collect::<Vec<_>>();
            let single = records.len() == 1;
            (records, !single)
        }
        Command::DwellMax {
            energy,
            potential,
            epsilon,
        } => {
            let kin = ctx.step_kinematics(energy.energy, potential)?;
            (
                vec![dwell_max_record(ctx, &kin, ctx.epsilon(*epsilon))?],
                false,
            )
        }
        Command::Libration {
            energy,
            potential,
            microstate: m,
        } => {
            let pot = ctx.well(potential)?;
            let kin = Kinematics::new(energy.energy, pot.height(), ctx.units)?;
            let ms = microstate(m)?;
            (
                vec![libration_record(ctx, &kin, half_width(&pot), &ms)?],
                false,
            )
        }
        Command::LibrationMax {
            energy,
            potential,
            epsilon,
        } => {
            let pot = ctx.well(potential)?;
            let kin = Kinematics::new(energy.energy, pot.height(), ctx.units)?;
            let rec = libration_max_record(ctx, &kin, half_width(&pot), ctx.epsilon(*epsilon))?;
            (vec![rec], false)
        }
        Command::LibrationInf {
            energy,
            potential,
            probe,
        } => {
            let pot = ctx.well(potential)?;
            let kin = Kinematics::new(energy.energy, pot.height(), ctx.units)?;
            (libration_inf(ctx, &kin, half_width(&pot), probe)?, true)
        }
        Command::Trajectory {
            energy,
            potential,
            microstate: m,
            region: r,
            from,
            to,
            n,
        } => {
            let kin = ctx.step_kinematics(energy.energy, potential)?;
            (trajectory(ctx, &kin, m, *r, *from, *to, *n)?, true)
        }
        Command::QshjeCheck {
            energy,
            potential,
            microstate: m,
            region: r,
            x,
        } => {
            let kin = ctx.step_kinematics(energy.energy, potential)?;
            (qshje_check(ctx, &kin, m, *r, x)?, true)
        }
        Command::Coverage(cmd) => (vec![coverage(ctx, cmd)?], false),
        Command::Connect {
            potential,
            state,
            events,
        } => (vec![connect_record(ctx, potential, state, events)?], false),
        Command::Sweep {
            quantity,
            param,
            start,
            end,
            count,
            energy,
            potential,
            microstate: m,
            sign,
            epsilon,
        } => {
            let range = SweepRange::resolve(ctx, *param, *start, *end, *count)?;
            let base = SweepBase {
                energy: *energy,
                height: potential
                    .height
                    .or_else(|| ctx.cfg.potential.as_ref().map(|c| c.height)),
                half_width: potential
                    .half_width
                    .or_else(|| ctx.cfg.potential.as_ref().and_then(|c| c.q)),
                a: m.a,
                b: m.b,
                c: m.c,
                sign: match sign {
                    SignArg::Plus => Sign::Plus,
                    SignArg::Minus => Sign::Minus,
                    SignArg::Both => {
                        return Err(CliError::Usage("sweep needs a single --sign".into()))
                    }
                },
                epsilon: ctx.epsilon(*epsilon),
            };
            (sweep(ctx, *quantity, &range, &base)?, true)
        }
    })
}

fn half_width(pot: &Potential) -> f64 {
    pot.half_width().expect("square well has a half-width")
}

fn kinematics_record(ctx: &Ctx, kin: &Kinematics) -> OutputRecord {
    let inputs = ctx
        .base_inputs()
        .with("E", kin.energy)
        .with("U", kin.height);
    let mut out = Fields::new();
    kin_outputs(&mut out, kin);
    out.push("ratio", kin.ratio);
    out.push("time_scale", kin.time_scale());
    record("kinematics", inputs, out, base_metadata())
}

fn energies(ctx: &Ctx, p: &PotentialArgs, parity: ParityArg) -> CliResult<Vec<OutputRecord>> {
    let pot = ctx.well(p)?;
    let q = half_width(&pot);
    let filter = match parity {
        ParityArg::Even => ParityFilter::Even,
        ParityArg::Odd => ParityFilter::Odd,
        ParityArg::Both => ParityFilter::Both,
    };
    let states = bound_state_energies(&pot, ctx.units, filter)?;
    let inputs = ctx
        .base_inputs()
        .with("U", pot.height())
        .with("q", q)
        .with("parity", format!("{parity:?}").to_lowercase());
    let meta = base_metadata()
        .with("scan_points", EIGEN_SCAN_POINTS)
        .with("root_tolerance", "bisection to machine precision");
    let (mut even, mut odd) = (0usize, 0usize);
    Ok(states
        .iter()
        .map(|s| {
            let counter = match s.parity {
                Parity::Even => &mut even,
                Parity::Odd => &mut odd,
            };
            let index = *counter;
            *counter += 1;
            let out = Fields::new()
                .with("parity", s.parity.as_str())
                .with("index", index)
                .with("E", s.energy)
                .with("k", s.k)
                .with("kappa", s.kappa)
                .with("residual", matching_residual(s.parity, s.k, s.kappa, q));
            record("energies", inputs.clone(), out, meta.clone())
        })
        .collect())
}

fn dwell_fields(kin: &Kinematics, ms: &Microstate, sign: Sign) -> Fields {
    let d = dwell_time(kin, ms, sign);
    let mut out = Fields::new().with("t_D", d.t_d).with("sign", sign.as_str());
    ms_outputs(&mut out, ms);
    kin_outputs(&mut out, kin);
    out
}

fn dwell_record(ctx: &Ctx, kin: &Kinematics, ms: &Microstate, sign: Sign) -> OutputRecord {
    let mut inputs = ctx
        .base_inputs()
        .with("E", kin.energy)
        .with("U", kin.height);
    inputs.extend(
        Fields::new()
            .with("a", ms.a())
            .with("b", ms.b())
            .with("c", ms.c()),
    );
    inputs.push("sign", sign.as_str());
    let meta = base_metadata().with("gauge", "ab - c^2/4 = 1");
    record("dwell", inputs, dwell_fields(kin, ms, sign), meta)
}

fn extremal_fields(rep: &ExtremalReport, name: &str) -> Fields {
    let mut out = Fields::new().with(name, rep.supremum);
    out.push("bound", rep.bound);
    out.push("extrapolated", rep.extrapolated);
    ms_outputs(&mut out, &rep.maximizer);
    out.push("attained_at_boundary", rep.attained_at_boundary);
    out
}

fn dwell_max_fields(kin: &Kinematics, epsilon: f64, exec: Exec) -> CliResult<Fields> {
    let opts = OptimizerOptions {
        exec,
        ..OptimizerOptions::default()
    };
    let rep = max_dwell_with(kin, epsilon, &opts)?;
    let mut out = extremal_fields(&rep, "t_D_sup");
    out.push("sign", rep.sign.map_or("none", Sign::as_str));
    out.push("t_D_mono", dwell_time_monochromatic(kin));
    kin_outputs(&mut out, kin);
    Ok(out)
}

fn dwell_max_record(ctx: &Ctx, kin: &Kinematics, epsilon: f64) -> CliResult<OutputRecord> {
    let inputs = ctx
        .base_inputs()
        .with("E", kin.energy)
        .with("U", kin.height)
        .with("epsilon", epsilon);
    let out = dwell_max_fields(kin, epsilon, Exec::default())?;
    let meta = optimizer_metadata(&OptimizerOptions::default(), epsilon)
        .with("supremum", "open: attained only in the limit |c| -> 2");
    Ok(record("dwell-max", inputs, out, meta))
}

fn libration_fields(kin: &Kinematics, q: f64, ms: &Microstate) -> CliResult<Fields> {
    let t_l = libration_period(kin, q, ms)?;
    let transit = 4.0 * kin.units.mass * q / (kin.units.hbar * kin.k);
    let mut out = Fields::new().with("t_L", t_l);
    out.push("t_L_mono", libration_period_monochromatic(kin, q)?);
    out.push("transit_mono", transit);
    out.push("wall_stays_mono", 2.0 * dwell_time_monochromatic(kin));
    ms_outputs(&mut out, ms);
    kin_outputs(&mut out, kin);
    out.push("q", q);
    Ok(out)
}

fn libration_record(
    ctx: &Ctx,
    kin: &Kinematics,
    q: f64,
    ms: &Microstate,
) -> CliResult<OutputRecord> {
    let inputs = ctx
        .base_inputs()
        .with("E", kin.energy)
        .with("U", kin.height)
        .with("q", q)
        .with("a", ms.a())
        .with("b", ms.b())
        .with("c", ms.c());
    let out = libration_fields(kin, q, ms)?;
    Ok(record(
        "libration",
        inputs,
        out,
        base_metadata().with("gauge", "ab - c^2/4 = 1"),
    ))
}

fn libration_max_fields(kin: &Kinematics, q: f64, epsilon: f64, exec: Exec) -> CliResult<Fields> {
    let opts = OptimizerOptions {
        exec,
        ..OptimizerOptions::default()
    };
    let rep = max_libration_with(kin, q, epsilon, &opts)?;
    let mut out = extremal_fields(&rep, "t_L_sup");
    out.push("bound_printed", libration_bound_printed(kin, q));
    out.push("t_L_mono", libration_period_monochromatic(kin, q)?);
    if let Some(p) = rep.printed {
        out.push("supremum_exceeds_printed", p.supremum_exceeds_printed);
        out.push(
            "monochromatic_exceeds_printed",
            p.monochromatic_exceeds_printed,
        );
        out.push("printed_bound_violated", p.printed_violated());
        out.push("confirmed_bound", p.confirmed.as_str());
    }
    kin_outputs(&mut out, kin);
    out.push("q", q);
    Ok(out)
}

fn libration_max_record(
    ctx: &Ctx,
    kin: &Kinematics,
    q: f64,
    epsilon: f64,
) -> CliResult<OutputRecord> {
    let inputs = ctx
        .base_inputs()
        .with("E", kin.energy)
        .with("U", kin.height)
        .with("q", q)
        .with("epsilon", epsilon);
    let out = libration_max_fields(kin, q, epsilon, Exec::default())?;
    let meta = optimizer_metadata(&OptimizerOptions::default(), epsilon)
        .with("bound_derived", libration_bound(kin, q));
    Ok(record("libration-max", inputs, out, meta))
}

fn libration_inf(
    ctx: &Ctx,
    kin: &Kinematics,
    q: f64,
    probes: &[f64],
) -> CliResult<Vec<OutputRecord>> {
    let mono = libration_period_monochromatic(kin, q)?;
    probes
        .iter()
        .map(|&big_a| {
            let t = libration_infimum_probe(kin, q, big_a)?;
            let inputs = ctx
                .base_inputs()
                .with("E", kin.energy)
                .with("U", kin.height)
                .with("q", q)
                .with("A", big_a);
            let mut out = Fields::new()
                .with("A", big_a)
                .with("t_L", t)
                .with("t_L_mono", mono)
                .with("fraction_of_mono", t / mono);
            kin_outputs(&mut out, kin);
            let meta = base_metadata().with("probe", "microstate (A, 1/A, 0)");
            Ok(record("libration-inf", inputs, out, meta))
        })
        .collect()
}

fn trajectory(
    ctx: &Ctx,
    kin: &Kinematics,
    m: &MicrostateArgs,
    r: RegionArg,
    from: f64,
    to: f64,
    n: usize,
) -> CliResult<Vec<OutputRecord>> {
    let ms = microstate(m)?;
    let coeffs = ms.coefficients();
    let basis = canonical_basis(region(r), kin);
    let samples = sample_trajectory(from, to, n, &coeffs, &basis, kin, Exec::default())?;
    let mut inputs = ctx
        .base_inputs()
        .with("E", kin.energy)
        .with("U", kin.height);
    ms_inputs(&mut inputs, m);
    inputs.push("region", format!("{r:?}").to_lowercase());
    inputs.push("from", from);
    inputs.push("to", to);
    inputs.push("n", n);
    let meta = base_metadata()
        .with("tail_cutoff_2kappa_x", TAIL_U)
        .with("tail_weight_bound", (-TAIL_U).exp())
        .with("quadrature_rel_tol", ACTION_REL_TOL)
        .with("energy_step_rel", ENERGY_STEP)
        .with("time_origin", "x = from");
    Ok(samples
        .iter()
        .map(|s| {
            let out = Fields::new()
                .with("x", s.x)
                .with("t", s.t)
                .with("orientation", s.orientation.as_str())
                .with("W_x", s.w_x)
                .with("dW_x_dE", s.dwx_de)
                .with("speed", s.speed);
            record("trajectory", inputs.clone(), out, meta.clone())
        })
        .collect())
}

fn qshje_check(
    ctx: &Ctx,
    kin: &Kinematics,
    m: &MicrostateArgs,
    r: RegionArg,
    xs: &[f64],
) -> CliResult<Vec<OutputRecord>> {
    let ms = microstate(m)?;
    let coeffs = ms.coefficients();
    let basis = canonical_basis(region(r), kin);
    let tol = ctx.cfg.defaults.tolerances.qshje;
    let mut inputs = ctx
        .base_inputs()
        .with("E", kin.energy)
        .with("U", kin.height);
    ms_inputs(&mut inputs, m);
    inputs.push("region", format!("{r:?}").to_lowercase());
    let meta = base_metadata().with("tolerance_rel_E", tol);
    xs.iter()
        .map(|&x| {
            let res = qshje_residual(x, &coeffs, &basis, kin)?;
            let out = Fields::new()
                .with("x", x)
                .with("residual", res)
                .with("residual_rel_E", res.abs() / kin.energy)
                .with("within_tolerance", res.abs() <= tol * kin.energy);
            Ok(record("qshje-check", inputs.clone(), out, meta.clone()))
        })
        .collect()
}

fn verdict_fields(v: &CoverageVerdict, past: &Event, present: &Event) -> Fields {
    Fields::new()
        .with("classification", v.classification.as_str())
        .with("tr_allowed", v.tr_allowed)
        .with("copenhagen_allowed", v.copenhagen_allowed)
        .with("dt", present.t - past.t)
}

fn event_inputs(f: &mut Fields, past: &Event, present: &Event) {
    f.push("past_x", past.x);
    f.push("past_t", past.t);
    f.push("present_x", present.x);
    f.push("present_t", present.t);
}

fn eigenstate(ctx: &Ctx, p: &PotentialArgs, s: &StateArgs) -> CliResult<WellEigenstate> {
    Ok(WellEigenstate::new(
        ctx.well(p)?,
        ctx.units,
        state_parity(s.parity),
        s.index,
    )?)
}

fn state_inputs(f: &mut Fields, st: &WellEigenstate) {
    f.push("U", st.potential.height());
    f.push("q", st.half_width());
    f.push("parity", st.parity().as_str());
    f.push("index", st.index);
}

fn coverage(ctx: &Ctx, cmd: &CoverageCommand) -> CliResult<OutputRecord> {
    match cmd {
        CoverageCommand::Sb {
            energy,
            potential,
            events,
        } => {
            let kin = ctx.step_kinematics(energy.energy, potential)?;
            let (past, present) = (event(&events.past)?, event(&events.present)?);
            let v = sb_verdict(&past, &present, &kin)?;
            let mut inputs = ctx
                .base_inputs()
                .with("E", kin.energy)
                .with("U", kin.height);
            event_inputs(&mut inputs, &past, &present);
            let mut out = verdict_fields(&v, &past, &present);
            out.push("dwell_bound", dwell_bound(&kin));
            let meta = base_metadata().with("note", NOTE_EXISTENTIAL).with(
                "tr_rule",
                "dt strictly below the dwell-time least upper bound",
            );
            Ok(record("coverage sb", inputs, out, meta))
        }
        CoverageCommand::Sw {
            potential,
            state,
            events,
        } => {
            let st = eigenstate(ctx, potential, state)?;
            let (past, present) = (event(&events.past)?, event(&events.present)?);
            let v = sw_verdict(&past, &present, &st)?;
            let mut inputs = ctx.base_inputs();
            state_inputs(&mut inputs, &st);
            event_inputs(&mut inputs, &past, &present);
            let mut out = verdict_fields(&v, &past, &present);
            out.push("E", st.state.energy);
            if let Some(w) = v.witness {
                out.push("witness_a", w.a());
                out.push("witness_b", w.b());
                out.push("witness_c", w.c());
            }
            let meta = base_metadata()
                .with("note", NOTE_EXISTENTIAL)
                .with("node_tolerance", 1e-12);
            Ok(record("coverage sw", inputs, out, meta))
        }
        CoverageCommand::Report {
            scenario,
            energy,
            potential,
            state,
            past_x,
            present_x,
            dt,
        } => coverage_report(
            ctx, *scenario, *energy, potential, state, *past_x, *present_x, *dt,
        ),
    }
}

#[allow(clippy::too_many_arguments)]
fn coverage_report(
    ctx: &Ctx,
    scenario: ScenarioArg,
    energy: Option<f64>,
    potential: &PotentialArgs,
    state: &StateArgs,
    past_x: Option<RangeArg>,
    present_x: Option<RangeArg>,
    dt: Option<RangeArg>,
) -> CliResult<OutputRecord> {
    let mut inputs = ctx.base_inputs().with("scenario", format!("{scenario:?}"));
    let (sc, defaults) = match scenario {
        ScenarioArg::Sb => {
            let e =
                energy.ok_or_else(|| CliError::Usage("--E is required for scenario sb".into()))?;
            let kin = ctx.step_kinematics(e, potential)?;
            inputs.push("E", kin.energy);
            inputs.push("U", kin.height);
            let bound = dwell_bound(&kin);
            let d = (
                RangeArg {
                    lo: 0.0,
                    hi: 3.0,
                    n: 4,
                },
                RangeArg {
                    lo: 0.0,
                    hi: 3.0,
                    n: 7,
                },
                RangeArg {
                    lo: 0.25 * bound,
                    hi: 2.0 * bound,
                    n: 8,
                },
            );
            (Scenario::StepBarrier(kin), d)
        }
        ScenarioArg::SwBound | ScenarioArg::SwExcited => {
            let parity = match scenario {
                ScenarioArg::SwBound => StateParity::Even,
                _ => StateParity::Odd,
            };
            let args = StateArgs {
                parity,
                index: state.index,
            };
            let st = eigenstate(ctx, potential, &args)?;
            state_inputs(&mut inputs, &st);
            let q = st.half_width();
            let d = (
                RangeArg {
                    lo: -0.9 * q,
                    hi: 0.9 * q,
                    n: 5,
                },
                RangeArg {
                    lo: -0.95 * q,
                    hi: 0.95 * q,
                    n: 39,
                },
                RangeArg {
                    lo: 0.5,
                    hi: 40.0,
                    n: 8,
                },
            );
            let sc = if parity == StateParity::Even {
                Scenario::SquareWellBound(st)
            } else {
                Scenario::SquareWellExcited(st)
            };
            (sc, d)
        }
    };
    let px = past_x.unwrap_or(defaults.0);
    let qx = present_x.unwrap_or(defaults.1);
    let dts = dt.unwrap_or(defaults.2);
    for (name, r) in [("past_x", px), ("present_x", qx), ("dt", dts)] {
        inputs.push(&format!("{name}_lo"), r.lo);
        inputs.push(&format!("{name}_hi"), r.hi);
        inputs.push(&format!("{name}_n"), r.n);
    }
    let grid = GridSpec::uniform(
        (px.lo, px.hi, px.n),
        (qx.lo, qx.hi, qx.n),
        (dts.lo, dts.hi, dts.n),
    );
    let rep = set_relation_report(&sc, &grid, Exec::default())?;
    let tr_only_x = rep
        .tr_only_x
        .iter()
        .map(|x| crate::output::format_number(*x, false))
        .collect::<Vec<_>>()
        .join(";");
    let out = Fields::new()
        .with("scenario", rep.scenario)
        .with("relation", rep.relation)
        .with("union_equals_tr", rep.union_equals_tr)
        .with("union_equals_copenhagen", rep.union_equals_copenhagen)
        .with("cells", rep.counts.total())
        .with("both", rep.counts.both)
        .with("copenhagen_only", rep.counts.copenhagen_only)
        .with("tr_only", rep.counts.tr_only)
        .with("neither", rep.counts.neither)
        .with("tr_only_x", tr_only_x);
    let mut meta = base_metadata();
    for (i, note) in rep.notes.iter().enumerate() {
        meta.push(&format!("note_{i}"), *note);
    }
    Ok(record("coverage report", inputs, out, meta))
}

fn connect_record(
    ctx: &Ctx,
    potential: &PotentialArgs,
    state: &StateArgs,
    events: &EventPair,
) -> CliResult<OutputRecord> {
    let st = eigenstate(ctx, potential, state)?;
    let (past, present) = (event(&events.past)?, event(&events.present)?);
    let sol = connect(&past, &present, &st)?;
    let mut inputs = ctx.base_inputs();
    state_inputs(&mut inputs, &st);
    event_inputs(&mut inputs, &past, &present);
    let mut out = Fields::new();
    ms_outputs(&mut out, &sol.ms);
    out.push("whole_periods", sol.whole_periods);
    out.push("phase_offset", sol.phase_offset);
    out.push("sub_orbital", sol.sub_orbital);
    out.push("target_period", sol.target_period);
    out.push("realized_period", sol.realized_period);
    out.push("arrival_time", sol.arrival_time(&past));
    out.push("arrives_rightward", sol.arrives_rightward);
    out.push("E", st.state.energy);
    out.push("k", st.kinematics.k);
    out.push("kappa", st.kinematics.kappa);
    let meta = base_metadata()
        .with("slice", "c = 0")
        .with(
            "phase_convention",
            "unfolded path 4(q + 1/kappa), wall stay 2/kappa, past on the rightward transit",
        )
        .with("note", NOTE_EXISTENTIAL);
    Ok(record("connect", inputs, out, meta))
}

struct SweepRange {
    param: SweepParam,
    values: Vec<f64>,
}

impl SweepRange {
    fn resolve(
        ctx: &Ctx,
        param: Option<SweepParam>,
        start: Option<f64>,
        end: Option<f64>,
        count: Option<usize>,
    ) -> CliResult<Self> {
        let cfg = ctx.cfg.sweep.as_ref();
        let param = match (param, cfg) {
            (Some(p), _) => p,
            (None, Some(s)) => SweepParam::from_str(&s.parameter, false).map_err(|_| {
                CliError::Usage(format!("unknown sweep parameter '{}'", s.parameter))
            })?,
            (None, None) => return Err(CliError::Usage("--param is required".into())),
        };
        let missing = |name: &str| CliError::Usage(format!("--{name} is required"));
        let start = start
            .or(cfg.map(|s| s.start))
            .ok_or_else(|| missing("start"))?;
        let end = end.or(cfg.map(|s| s.end)).ok_or_else(|| missing("end"))?;
        let count = count
            .or(cfg.map(|s| s.count))
            .ok_or_else(|| missing("count"))?;
        if count == 0 {
            return Err(CliError::Usage("--count must be at least 1".into()));
        }
        Ok(Self {
            param,
            values: trcov::coverage::linspace(start, end, count),
        })
    }
}

struct SweepBase {
    energy: Option<f64>,
    height: Option<f64>,
    half_width: Option<f64>,
    a: f64,
    b: f64,
    c: f64,
    sign: Sign,
    epsilon: f64,
}

fn sweep(
    ctx: &Ctx,
    quantity: Quantity,
    spec: &SweepRange,
    base: &SweepBase,
) -> CliResult<Vec<OutputRecord>> {
    let needs_well = matches!(quantity, Quantity::Libration | Quantity::LibrationMax);
    if spec.param == SweepParam::HalfWidth && !needs_well {
        return Err(CliError::Usage(
            "q can only be swept for libration quantities".into(),
        ));
    }
    let param_name = spec
        .param
        .to_possible_value()
        .map(|v| v.get_name().to_owned())
        .unwrap_or_default();
    let inputs = {
        let mut f = ctx
            .base_inputs()
            .with("quantity", format!("{quantity:?}"))
            .with("param", param_name.as_str());
        let vals = &spec.values;
        f.push("start", vals[0]);
        f.push("end", vals[vals.len() - 1]);
        f.push("count", vals.len());
        f
    };
    let meta = base_metadata().with("ordering", "by sweep index");
    // Each point is independent; the optimizer itself runs sequentially so the
    // outer loop owns the parallelism.
    let indexed: Vec<(usize, f64)> = spec.values.iter().copied().enumerate().collect();
    let outputs = Exec::default().try_map(&indexed, |&(i, v)| -> CliResult<Fields> {
        let pick = |p: SweepParam, fallback: Option<f64>, name: &str| {
            if spec.param == p {
                Ok(v)
            } else {
                fallback
                    .ok_or_else(|| CliError::Usage(format!("--{name} is required for this sweep")))
            }
        };
        let energy = pick(SweepParam::Energy, base.energy, "E")?;
        let height = pick(SweepParam::Height, base.height, "U")?;
        let kin = Kinematics::new(energy, height, ctx.units)?;
        let ms = match spec.param {
            SweepParam::A => Microstate::from_a_c(v, base.c)?,
            SweepParam::C => Microstate::from_a_c(base.a, v)?,
            _ => normalize(base.a, base.b, base.c)?,
        };
        let q = || pick(SweepParam::HalfWidth, base.half_width, "q");
        let mut out = Fields::new().with("index", i).with("value", v);
        out.extend(match quantity {
            Quantity::Kinematics => {
                let mut f = Fields::new();
                kin_outputs(&mut f, &kin);
                f.push("ratio", kin.ratio);
                f
            }
            Quantity::DwellMono => {
                let mut f = Fields::new().with("t_D_mono", dwell_time_monochromatic(&kin));
                kin_outputs(&mut f, &kin);
                f
            }
            Quantity::Dwell => dwell_fields(&kin, &ms, base.sign),
            Quantity::DwellMax => dwell_max_fields(&kin, base.epsilon, Exec::Sequential)?,
            Quantity::Libration => libration_fields(&kin, q()?, &ms)?,
            Quantity::LibrationMax => {
                libration_max_fields(&kin, q()?, base.epsilon, Exec::Sequential)?
            }
        });
        Ok(out)
    })?;
    Ok(outputs
        .into_iter()
        .map(|out| record("sweep", inputs.clone(), out, meta.clone()))
        .collect())
}
