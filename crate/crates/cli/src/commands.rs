use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use novikov_core::experiments::{
    continuous_dependence_experiment, iteration_convergence_experiment, nonuniform_dependence_experiment,
    norm_scaling_experiment, peakon_travel_experiment, taylor_flow_experiment, transport_family, Check,
    ContinuitySetup, NudSetup, PeakonTravelSetup, Report,
};
use novikov_core::lp::harness::{commutator_family, moser_family, product_law_family, HarnessReport};
use novikov_core::lp::{besov_norm, sobolev_norm, triebel_lizorkin_norm};
use novikov_core::pde::{h1_energy, solve, Trajectory};
use novikov_core::peakon::{multipeakon_solve, PeakonState};
use novikov_core::Error;

use crate::config::{Config, Loaded, LEMMAS};

/// Where reports go and what the config hashed to.
pub struct Sink {
    pub dir: PathBuf,
    pub hash: String,
    pub raw: Value,
}

impl Sink {
    pub fn new(dir: &Path, loaded: &Loaded) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Sink { dir: dir.to_path_buf(), hash: loaded.hash.clone(), raw: loaded.raw.clone() })
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        Ok(BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?))
    }

    fn json(&self, name: &str, mut v: Value) -> Result<()> {
        if let Value::Object(m) = &mut v {
            m.insert("config".into(), self.raw.clone());
        }
        serde_json::to_writer_pretty(self.create(&format!("{name}.json"))?, &v)?;
        Ok(())
    }

    /// Writes `<experiment>.csv` and `<experiment>.json`.
    pub fn report(&self, rep: &Report) -> Result<bool> {
        rep.write_csv(self.create(&format!("{}.csv", rep.experiment))?)?;
        self.json(&rep.experiment, serde_json::to_value(rep.summary(&self.hash))?)?;
        for c in &rep.checks {
            println!("{c}");
        }
        Ok(rep.passed())
    }
}

pub fn run_solve(cfg: &Config, sink: &Sink, binary: bool) -> Result<bool> {
    let grid = cfg.grid.build()?;
    let u0 = cfg.datum()?.build(&grid)?;
    let params = cfg.space.params()?;
    let (traj, blowup) = match solve(&u0, &cfg.solver, cfg.equation) {
        Ok(t) => (t, None),
        Err(Error::BlowUp { t, max_slope, partial }) => (*partial, Some((t, max_slope))),
        Err(e) => return Err(e.into()),
    };
    let label = format!("F^{}_{{{},{}}}", params.s, params.p, novikov_core::report::fmt_index(params.q));
    traj.write_csv(sink.create("solve.csv")?, &[(label, params)])?;
    if binary {
        traj.write_binary(sink.create("solve.bin")?)?;
    }
    let mut rep = Report::new("solve", &[]);
    rep.seed = Some(cfg.seed);
    let h0 = h1_energy(&u0);
    let drift = h1_drift(&traj, h0);
    rep.constant("h1_initial", h0);
    rep.constant("h1_relative_drift", drift);
    rep.constant("t_reached", traj.final_time());
    if cfg.equation.conserves_h1() {
        rep.check(Check::at_most("h1_relative_drift", drift, 1e-6));
    }
    if let Some((t, slope)) = blowup {
        rep.note(format!("blow-up at t = {t}, max |u_x| = {slope}"));
    }
    sink.json("solve", serde_json::to_value(rep.summary(&sink.hash))?)?;
    for c in &rep.checks {
        println!("{c}");
    }
    if let Some((t, max_slope)) = blowup {
        return Err(Error::BlowUp { t, max_slope, partial: Box::new(Trajectory::new(&grid)) }.into());
    }
    Ok(rep.passed())
}

fn h1_drift(traj: &Trajectory, h0: f64) -> f64 {
    traj.diagnostics().iter().map(|d| (d.h1_sq - h0).abs() / h0.max(f64::MIN_POSITIVE)).fold(0.0, f64::max)
}

pub fn run_peakon(cfg: &Config, sink: &Sink) -> Result<bool> {
    let sec = cfg.section(&cfg.peakon, "peakon")?;
    let s0 = PeakonState::new(0.0, sec.positions.clone(), sec.momenta.clone())?;
    let traj = multipeakon_solve(&s0, sec.t_final, sec.dt)?;
    traj.write_csv(sink.create("peakon.csv")?)?;
    let mut rep = Report::new("peakon_ode", &[]);
    let drift = traj.max_h1_drift();
    rep.constant("h1_relative_drift", drift);
    rep.check(Check::at_most("h1_relative_drift", drift, 1e-8));
    sink.json("peakon", serde_json::to_value(rep.summary(&sink.hash))?)?;
    let mut ok = rep.passed();
    for c in &rep.checks {
        println!("{c}");
    }
    if let Some(t) = &sec.travel {
        let setup = PeakonTravelSetup {
            c: t.c,
            sigmas: t.sigmas.clone(),
            t_final: t.t_final,
            half_length: cfg.grid.half_length,
            start: t.start,
            cfl_safety: cfg.solver.cfl_safety,
            exec: cfg.execution(),
        };
        ok &= sink.report(&peakon_travel_experiment(&setup)?)?;
    }
    Ok(ok)
}

pub fn run_norms(cfg: &Config, sink: &Sink) -> Result<bool> {
    let grid = cfg.grid.build()?;
    let f = cfg.datum()?.build(&grid)?;
    let sp = &cfg.space;
    cfg.space.params()?;
    let v = json!({
        "s": sp.s,
        "p": sp.p,
        "r": if sp.r.is_finite() { json!(sp.r) } else { json!("inf") },
        "besov": besov_norm(&f, sp.s, sp.p, sp.r)?,
        "triebel_lizorkin": triebel_lizorkin_norm(&f, sp.s, sp.p, sp.r, false)?,
        "sobolev": sobolev_norm(&f, sp.s),
        "config_hash": sink.hash,
    });
    println!("{}", serde_json::to_string_pretty(&v)?);
    sink.json("norms", v)?;
    Ok(true)
}

pub fn run_verify(cfg: &Config, sink: &Sink) -> Result<bool> {
    let default = crate::config::VerifySection { lemmas: LEMMAS.iter().map(|s| s.to_string()).collect(), cases: 100 };
    let sec = cfg.verify.as_ref().unwrap_or(&default);
    let grid = cfg.grid.build()?;
    let params = cfg.space.params()?;
    let exec = cfg.execution();
    let mut reports: Vec<HarnessReport> = Vec::new();
    for lemma in &sec.lemmas {
        match lemma.as_str() {
            "moser" => reports.push(moser_family(&grid, &params, cfg.seed, sec.cases, exec)?),
            "product_law" => reports.extend(product_law_family(&grid, &params, cfg.seed, sec.cases, exec)?),
            "commutator" => reports.extend(commutator_family(&grid, &params, cfg.seed, sec.cases, exec)?),
            "transport" => reports.push(transport_family(&grid, &params, cfg.seed, sec.cases, exec)?),
            other => bail!("unknown lemma {other:?}; expected one of {LEMMAS:?}"),
        }
    }
    let mut w = sink.create("verify.csv")?;
    for (i, r) in reports.iter().enumerate() {
        r.write_csv(&mut w, i == 0)?;
    }
    let summaries: Vec<_> = reports.iter().map(HarnessReport::summary).collect();
    let passed = summaries.iter().all(|s| s.passed != Some(false));
    for s in &summaries {
        let tag = match s.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        };
        println!("{tag} {}: max ratio {} (frozen {:?})", s.lemma, s.max_ratio, s.frozen_constant);
    }
    sink.json(
        "verify",
        json!({ "experiment": "verify", "passed": passed, "seed": cfg.seed, "families": summaries, "config_hash": sink.hash }),
    )?;
    Ok(passed)
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum Experiment {
    Taylor,
    Nud,
    Continuity,
    Picard,
    Scaling,
}

pub fn run_experiment(which: Experiment, cfg: &Config, sink: &Sink) -> Result<bool> {
    let grid = cfg.grid.build()?;
    let params = cfg.space.params()?;
    if let Some(w) = params.well_posedness_warning() {
        eprintln!("warning: {w}");
    }
    let mut rep = match which {
        Experiment::Taylor => {
            let sec = cfg.section(&cfg.taylor, "taylor")?;
            taylor_flow_experiment(&cfg.datum()?.build(&grid)?, &params, &sec.t_list, &cfg.solver)?
        }
        Experiment::Nud => {
            let sec = cfg.section(&cfg.nud, "nud")?;
            let setup = NudSetup {
                params,
                n_list: sec.n_list.clone(),
                t_eval: sec.t_eval.clone(),
                solver: cfg.solver.clone(),
                exec: cfg.execution(),
            };
            nonuniform_dependence_experiment(&grid, &setup)?
        }
        Experiment::Continuity => {
            let sec = cfg.section(&cfg.continuity, "continuity")?;
            let setup = ContinuitySetup {
                params,
                deltas: sec.deltas.clone(),
                levels: sec.levels.clone(),
                times: sec.times.clone(),
                solver: cfg.solver.clone(),
                exec: cfg.execution(),
            };
            let u0 = cfg.datum()?.build(&grid)?;
            continuous_dependence_experiment(&u0, &sec.perturbation.build(&grid)?, &setup)?
        }
        Experiment::Picard => {
            let sec = cfg.section(&cfg.picard, "picard")?;
            let u0 = cfg.datum()?.build(&grid)?;
            iteration_convergence_experiment(&u0, sec.n_max, params.s, params.p, &cfg.solver)?
        }
        Experiment::Scaling => {
            let sec = cfg.section(&cfg.scaling, "scaling")?;
            norm_scaling_experiment(&grid, &params, &sec.n_list, cfg.solver.dealias_fraction)?
        }
    };
    rep.seed = Some(cfg.seed);
    sink.report(&rep)
}
