//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use novikov_core::experiments::{
    iteration_convergence_experiment, nonuniform_dependence_experiment, norm_scaling_experiment,
    peakon_travel_experiment, smooth_bump, taylor_flow_experiment, transport_family, NudSetup, PeakonTravelSetup,
    Report,
};
use novikov_core::lp::harness::{
    commutator_family, default_grid, frozen, moser_family, norm_equivalence_ratios, product_law_family, random_pairs,
    HarnessReport, DEFAULT_CASES, DEFAULT_SEED, NORM_EQUIVALENCE_CASES,
};
use novikov_core::lp::{make_cutoffs, verify_commutator, verify_moser, verify_product_law, SpaceParams};
use novikov_core::pde::{h1_energy, solve, verify_transport_estimate, EquationKind, FrozenCoefficients, SolveConfig};
use novikov_core::peakon::{multipeakon_h1, multipeakon_h1_quadrature, multipeakon_solve, PeakonState};
use novikov_core::quadrature::helmholtz_quadrature;
use novikov_core::report::loglog_fit;
use novikov_core::spectral::{helmholtz_inverse, lp_norm, Grid, GridFunction};
use novikov_core::Execution;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn report_verdict(rep: &Report) -> Outcome {
    let detail: Vec<String> = rep.checks.iter().map(|c| format!("{} = {:.6e}", c.name, c.value)).collect();
    let failed: Vec<String> = rep.checks.iter().filter(|c| !c.passed).map(ToString::to_string).collect();
    if failed.is_empty() {
        Ok(detail.join(", "))
    } else {
        Err(failed.join("; "))
    }
}

fn tl2() -> SpaceParams {
    SpaceParams::triebel_lizorkin(2.0, 2.0, 2.0)
}

fn partition_of_unity() -> Outcome {
    let cut = make_cutoffs();
    let worst = (0..1000)
        .map(|i| 100.0 * i as f64 / 999.0)
        .map(|xi| {
            let sum: f64 = cut.theta(xi) + (0..=12).map(|j| cut.phi(xi / 2f64.powi(j))).sum::<f64>();
            (sum - 1.0).abs()
        })
        .fold(0.0, f64::max);
    verdict(worst < 1e-12, format!("max deviation {worst:.3e}"))
}

fn helmholtz_oracle() -> Outcome {
    let grid = Grid::new(32.0, 1 << 13).map_err(|e| e.to_string())?;
    let bump = |x: f64| (-x * x).exp();
    let f = GridFunction::from_fn(&grid, bump);
    let spectral = helmholtz_inverse(&f);
    let quad = GridFunction::from_fn(&grid, |x| helmholtz_quadrature(bump, x, 32.0, 256));
    let rel = lp_norm(&(&spectral - &quad), 2.0).unwrap() / lp_norm(&quad, 2.0).unwrap();
    verdict(rel < 1e-8, format!("relative L2 error {rel:.3e}"))
}

fn h1_conservation() -> Outcome {
    let grid = Grid::new(32.0, 1 << 13).map_err(|e| e.to_string())?;
    let u0 = smooth_bump(&grid);
    let cfg = SolveConfig::new(0.5 * grid.dx(), 1.0);
    let tr = solve(&u0, &cfg, EquationKind::Ne).map_err(|e| e.to_string())?;
    let h0 = h1_energy(&u0);
    let drift = tr.diagnostics().iter().map(|d| (d.h1_sq - h0).abs() / h0).fold(0.0, f64::max);
    verdict(drift < 1e-6, format!("relative drift {drift:.3e} over {} records", tr.len()))
}

fn peakon_travel() -> Outcome {
    let rep = peakon_travel_experiment(&PeakonTravelSetup::default()).map_err(|e| e.to_string())?;
    let rows: Vec<String> = rep.rows.iter().map(|r| format!("sigma {} speed {:.5}", r[0], r[2])).collect();
    report_verdict(&rep).map(|d| format!("{d}; {}", rows.join(", ")))
}

fn multipeakon_h1_check() -> Outcome {
    let s0 = PeakonState::new(0.0, vec![-3.0, 1.0], vec![1.3, 0.6]).map_err(|e| e.to_string())?;
    let tr = multipeakon_solve(&s0, 5.0, 1e-3).map_err(|e| e.to_string())?;
    let mut quad_err: f64 = 0.0;
    for s in tr.states.iter().step_by(500) {
        let c = multipeakon_h1(s);
        quad_err = quad_err.max((multipeakon_h1_quadrature(s, 40.0) - c).abs() / c);
    }
    let drift = tr.max_h1_drift();
    verdict(
        quad_err < 1e-8 && drift < 1e-8,
        format!("closed form vs quadrature {quad_err:.3e}, drift over T = 5 {drift:.3e}"),
    )
}

fn taylor_exponent() -> Outcome {
    let grid = Grid::new(32.0, 1024).map_err(|e| e.to_string())?;
    let ts: Vec<f64> = (0..9).map(|i| 1e-3 * 10f64.powf(i as f64 / 4.0)).collect();
    let rep = taylor_flow_experiment(&smooth_bump(&grid), &tl2(), &ts, &SolveConfig::new(1e-3, 0.1))
        .map_err(|e| e.to_string())?;
    report_verdict(&rep)
}

fn norm_scalings() -> Outcome {
    let grid = Grid::new(32.0, 1 << 16).map_err(|e| e.to_string())?;
    let rep = norm_scaling_experiment(&grid, &tl2(), &[5, 6, 7, 8], 0.5).map_err(|e| e.to_string())?;
    report_verdict(&rep)
}

fn nonuniform_dependence() -> Outcome {
    let grid = Grid::new(32.0, 1 << 16).map_err(|e| e.to_string())?;
    let setup = NudSetup {
        params: tl2(),
        n_list: vec![5, 6, 7, 8],
        t_eval: vec![0.05, 0.1],
        solver: SolveConfig::new(0.5 * grid.dx(), 0.1),
        exec: Execution::default(),
    };
    let rep = nonuniform_dependence_experiment(&grid, &setup).map_err(|e| e.to_string())?;
    if rep.find_check("min_d_over_t_above_floor").is_none() {
        return Err("no frozen floor".into());
    }
    report_verdict(&rep)
}

fn picard() -> Outcome {
    let grid = Grid::new(32.0, 2048).map_err(|e| e.to_string())?;
    let rep = iteration_convergence_experiment(&smooth_bump(&grid), 6, 2.0, 2.0, &SolveConfig::new(0.005, 0.1))
        .map_err(|e| e.to_string())?;
    report_verdict(&rep)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn harnesses() -> Outcome {
    let grid = default_grid();
    let p = tl2();
    let exec = Execution::default();
    let mut reports: Vec<HarnessReport> = vec![];
    let err = |e: novikov_core::Error| e.to_string();
    reports.push(moser_family(&grid, &p, DEFAULT_SEED, DEFAULT_CASES, exec).map_err(err)?);
    reports.extend(product_law_family(&grid, &p, DEFAULT_SEED, DEFAULT_CASES, exec).map_err(err)?);
    reports.extend(commutator_family(&grid, &p, DEFAULT_SEED, DEFAULT_CASES, exec).map_err(err)?);
    reports.push(transport_family(&grid, &p, DEFAULT_SEED, DEFAULT_CASES, exec).map_err(err)?);
    let mut bad = vec![];
    for r in &reports {
        let s = r.summary();
        if s.passed != Some(true) {
            bad.push(format!("{} max {:.4e} frozen {:?}", s.lemma, s.max_ratio, s.frozen_constant));
        }
    }
    // scaling f by lam and g by mu multiplies each ratio by an exact power:
    // lam^0 mu^0, except the g-only product law, which picks up lam / mu
    let (lam, mu) = (3.7, 0.21);
    let mut worst: f64 = 0.0;
    for (f, g) in random_pairs(&grid, DEFAULT_SEED + 1, 5) {
        let (fs, gs) = (f.scale(lam), g.scale(mu));
        worst = worst.max(rel(verify_moser(&f, &g, &p).map_err(err)?, verify_moser(&fs, &gs, &p).map_err(err)?));
        let a = verify_product_law(&f, &g, &p).map_err(err)?;
        let b = verify_product_law(&fs, &gs, &p).map_err(err)?;
        worst = worst.max(rel(a.mixed, b.mixed)).max(rel(a.swapped, b.swapped)).max(rel(a.g_only * lam / mu, b.g_only));
        let a = verify_commutator(&f, &g, 2.0, 2.0, 2.0).map_err(err)?;
        let b = verify_commutator(&fs, &gs, 2.0, 2.0, 2.0).map_err(err)?;
        worst = worst.max(rel(a.0, b.0)).max(rel(a.1, b.1));
    }
    // transport: linear in (f, g) for frozen v; a compressive v forces C > 0
    let cfg = SolveConfig::new(0.01, 0.5);
    let v = GridFunction::from_fn(&grid, |x| -x * (-x * x / 8.0).exp());
    let f0 = GridFunction::from_fn(&grid, |x| (-x * x).exp());
    let g = GridFunction::from_fn(&grid, |x| 0.3 * (-(x - 1.0).powi(2)).exp());
    let co = FrozenCoefficients { velocity: v.clone(), forcing: g.clone() };
    let co_s = FrozenCoefficients { velocity: v, forcing: g.scale(lam) };
    let t1 = verify_transport_estimate(&f0, &co, &p, &cfg).map_err(err)?;
    let t2 = verify_transport_estimate(&f0.scale(lam), &co_s, &p, &cfg).map_err(err)?;
    if t1.is_nan() || t1 <= 0.0 {
        bad.push("transport rescaling case is degenerate".into());
    }
    worst = worst.max(rel(t1, t2));
    if worst > 1e-10 {
        bad.push(format!("rescaling deviation {worst:.3e}"));
    }
    verdict(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} families within 10x; rescaling deviation {worst:.3e}", reports.len())
        } else {
            bad.join("; ")
        },
    )
}

fn oracle_cross_check() -> Outcome {
    let grid = default_grid();
    let ratios =
        norm_equivalence_ratios(&grid, 2.0, DEFAULT_SEED, NORM_EQUIVALENCE_CASES).map_err(|e| e.to_string())?;
    let (lo, hi) = frozen::NORM_EQUIVALENCE;
    let (rmin, rmax) = ratios.iter().fold((f64::INFINITY, 0.0f64), |a, &r| (a.0.min(r), a.1.max(r)));
    let bracket_ok = rmin >= lo && rmax <= hi;

    let g = Grid::new(32.0, 512).map_err(|e| e.to_string())?;
    let u0 = smooth_bump(&g);
    let at = |dt: f64| solve(&u0, &SolveConfig::new(dt, 1.0), EquationKind::Ne).map(|t| t.final_state().clone());
    let reference = at(0.04 / 32.0).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&dt| at(dt).map(|u| (&u - &reference).max_abs()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let ratios16: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let order_ok = ratios16.iter().all(|r| (r - 16.0).abs() <= 3.0);
    let fit = loglog_fit(&[0.04, 0.02, 0.01], &errs).map(|f| f.slope).unwrap_or(f64::NAN);
    verdict(
        bracket_ok && order_ok,
        format!(
            "F/H ratios in [{rmin:.4}, {rmax:.4}] vs bracket [{lo:.4}, {hi:.4}]; Richardson ratios {:.2?} (order {fit:.3})",
            ratios16
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("partition of unity", partition_of_unity, Duration::from_secs(1)),
        ("Helmholtz oracle", helmholtz_oracle, Duration::from_secs(5)),
        ("H1 conservation", h1_conservation, Duration::from_secs(60)),
        ("peakon travel", peakon_travel, Duration::from_secs(120)),
        ("multi-peakon H1", multipeakon_h1_check, Duration::MAX),
        ("Taylor-flow exponent", taylor_exponent, Duration::from_secs(300)),
        ("norm scalings", norm_scalings, Duration::MAX),
        ("non-uniform dependence", nonuniform_dependence, Duration::from_secs(1800)),
        ("Picard convergence", picard, Duration::MAX),
        ("inequality harnesses", harnesses, Duration::MAX),
        ("oracle cross-check", oracle_cross_check, Duration::MAX),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; exceeded runtime budget {budget:?}")),
            Err(d) => (false, d),
        };
        failures += usize::from(!ok);
        println!("{} {:>2} {name}: {detail} [{:.2}s]", if ok { "PASS" } else { "FAIL" }, i + 1, took.as_secs_f64());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
