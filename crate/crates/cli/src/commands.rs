use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::anyhow;
use tdvrp_core::builder::{
    generate_synthetic, plan_fetch, FetchCache, FetchError, FetchLimits, FetchPlan, Fetcher, PeakWindow,
    QuerySchedule, RecordedProvider, SyntheticProvider, TrafficProfile, TravelTimeProvider, PAID_DAILY_QUOTA,
};
use tdvrp_core::export::route_geojson;
use tdvrp_core::io::{
    instance_to_string, matrix_to_string, read_instance, read_matrix, read_result, result_to_string,
};
use tdvrp_core::{data, format_hmm, Instance, MultiLayerMatrix, SolveResult, SolverParams};

use crate::failure::Failure;
use crate::{Backend, Cli, Command, ParamArgs, Profile, Tier};

const TWO_WEEKS: i64 = 14 * 24 * 3600;

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::GenInstance { random } => gen_instance(cli, *random),
        Command::GenMatrix { instance, layers, step, profile, speed, jitter, peaks } => {
            let instance = load_instance(instance.as_deref())?;
            let profile = build_profile(cli.seed, *profile, *speed, *jitter, peaks)?;
            let m = generate_synthetic(&instance, *layers, *step, &profile)?;
            emit(cli.out.as_deref(), &with_newline(matrix_to_string(&m)))?;
            eprintln!("{} nodes, {} layers of {} s, closed: {}", m.n_nodes(), m.n_layers(), m.step_seconds(), m.is_closed());
            Ok(())
        }
        Command::Fetch { .. } => fetch(cli),
        Command::Solve { instance, matrix } => solve(cli, instance.as_deref(), matrix),
        Command::Compare { instance, matrix, n_seeds } => compare(cli, instance.as_deref(), matrix, *n_seeds),
        Command::ExportGeojson { result, instance } => {
            let instance = load_instance(instance.as_deref())?;
            let result = read_result(result)?;
            let fc = route_geojson(&instance, &result)?;
            let text = serde_json::to_string_pretty(&fc).map_err(Failure::internal)?;
            emit(cli.out.as_deref(), &with_newline(text))
        }
    }
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

/// Writes `text` to `out`, or stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(anyhow!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Human-readable lines go to stdout unless stdout carries the document.
fn say(out: Option<&Path>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn load_instance(path: Option<&Path>) -> Result<Instance, Failure> {
    Ok(match path {
        Some(p) => read_instance(p)?,
        None => data::paris_instance(),
    })
}

fn solver_params(args: &ParamArgs, seed: u64, n_clients: usize) -> SolverParams {
    SolverParams {
        n_grasp: args.n_grasp,
        k_grasp: args.k_grasp,
        n_improve: args.n_improve,
        l_delete: args.l_delete.unwrap_or_else(|| SolverParams::default().l_delete.min(n_clients)),
        k_del: args.k_del,
        k_ins: args.k_ins,
        seed,
    }
}

fn gen_instance(cli: &Cli, random: Option<usize>) -> Result<(), Failure> {
    let instance = match random {
        Some(n) => data::random_instance(n, cli.seed)?,
        None => data::paris_instance(),
    };
    emit(cli.out.as_deref(), &instance_to_string(&instance))
}

fn parse_peak(text: &str) -> Result<PeakWindow, Failure> {
    let bad = || Failure::input(anyhow!("peak window {text:?} is not START:END:MULTIPLIER"));
    let mut parts = text.split(':');
    let (Some(a), Some(b), Some(m), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    Ok(PeakWindow {
        start_layer: a.trim().parse().map_err(|_| bad())?,
        end_layer: b.trim().parse().map_err(|_| bad())?,
        multiplier: m.trim().parse().map_err(|_| bad())?,
    })
}

fn build_profile(
    seed: u64,
    kind: Profile,
    speed: Option<f64>,
    jitter: Option<f64>,
    peaks: &[String],
) -> Result<TrafficProfile, Failure> {
    let mut profile = match kind {
        Profile::Rush => TrafficProfile::rush_hours(seed),
        Profile::Flat => TrafficProfile { seed, ..TrafficProfile::default() },
    };
    if let Some(s) = speed {
        profile.base_speed_kmh = s;
    }
    if let Some(j) = jitter {
        profile.asymmetry_jitter = j;
    }
    if !peaks.is_empty() {
        profile.peak_windows = peaks.iter().map(|p| parse_peak(p)).collect::<Result<_, _>>()?;
    }
    profile.validate()?;
    Ok(profile)
}

fn default_start_epoch() -> i64 {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs() as i64);
    (now + TWO_WEEKS) / 3600 * 3600
}

fn describe_plan(plan: &FetchPlan) -> String {
    format!(
        "plan: {} nodes x {} layers, {} requests, {} elements wanted, {} billed, quota {}/day, days_needed {}",
        plan.n_nodes,
        plan.n_layers,
        plan.requests.len(),
        plan.total_elements,
        plan.billed_elements,
        plan.daily_quota,
        plan.days_needed
    )
}

fn fetch(cli: &Cli) -> Result<(), Failure> {
    let Command::Fetch {
        instance,
        backend,
        recording,
        layers,
        step,
        start_epoch,
        cache,
        tier,
        daily_quota,
        include_self_pairs,
        plan_only,
    } = &cli.command
    else {
        unreachable!("dispatched on Fetch");
    };
    let out = cli.out.as_deref();
    let instance = load_instance(instance.as_deref())?;
    if *layers == 0 || *step <= 0 {
        return Err(Failure::input(anyhow!("need at least one layer and a positive step")));
    }
    let schedule = QuerySchedule {
        start_epoch: start_epoch.unwrap_or_else(default_start_epoch),
        step_seconds: *step,
    };
    let mut limits = match tier {
        Tier::Free => FetchLimits::default(),
        Tier::Paid => FetchLimits { daily_quota: PAID_DAILY_QUOTA, ..FetchLimits::default() },
    };
    if let Some(q) = daily_quota {
        if *q == 0 {
            return Err(Failure::input(anyhow!("daily quota must be positive")));
        }
        limits.daily_quota = *q;
    }
    limits.include_self_pairs = *include_self_pairs;
    let plan = plan_fetch(instance.len(), *layers, schedule, limits);
    if *plan_only {
        println!("{}", describe_plan(&plan));
        return Ok(());
    }
    say(out, &describe_plan(&plan));
    say(out, &format!("start epoch {} (pass --start-epoch to resume)", schedule.start_epoch));

    let provider: Box<dyn TravelTimeProvider> = match backend {
        Backend::Recorded => {
            let path: &PathBuf = recording.as_ref().expect("clap requires --recording");
            Box::new(
                RecordedProvider::from_jsonl(path).map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?,
            )
        }
        Backend::Synthetic => {
            let truth = generate_synthetic(&instance, *layers, *step, &TrafficProfile::rush_hours(cli.seed))?;
            Box::new(SyntheticProvider::new(truth, schedule))
        }
        Backend::Live => Box::new(
            tdvrp_core::builder::LiveProvider::from_env().map_err(|e| Failure::input(anyhow!("live backend: {e}")))?,
        ),
    };
    // offline backends cost nothing, so only the live one is held to the quota
    let budget = match backend {
        Backend::Live => plan.daily_quota,
        _ => usize::MAX,
    };
    let mut cache = match cache {
        Some(p) => FetchCache::open(p).map_err(|e| Failure::input(anyhow!("{}: {e}", p.display())))?,
        None => FetchCache::in_memory(),
    };
    let outcome = match Fetcher::new(provider.as_ref(), budget).execute(&plan, &instance, &mut cache) {
        Ok(o) => o,
        Err(e @ FetchError::Suspended { .. }) => {
            return Err(Failure::backend(anyhow!(
                "{e}; rerun with the same --cache and --start-epoch {}",
                schedule.start_epoch
            )))
        }
        Err(e) => return Err(e.into()),
    };
    emit(out, &with_newline(matrix_to_string(&outcome.matrix)))?;
    say(
        out,
        &format!(
            "fetched: {} requests issued, {} from cache, {} elements billed",
            outcome.requests_issued, outcome.requests_from_cache, outcome.budget.elements_used
        ),
    );
    if !outcome.report.is_clean() {
        say(
            out,
            &format!(
                "warning: {} triangle-inequality violations in fetched data (kept as is)",
                outcome.report.triangle_violations()
            ),
        );
    }
    Ok(())
}

/// Re-checks a result against the matrix it came from.
fn check_result(result: &SolveResult, matrix: &MultiLayerMatrix) -> Result<(), Failure> {
    if !result.best_route.is_complete(matrix.n_nodes()) {
        return Err(Failure::internal(anyhow!("solver returned an incomplete tour")));
    }
    let recomputed = matrix.evaluate_route(&result.best_route).map_err(Failure::internal)?;
    if recomputed != result.best_schedule {
        return Err(Failure::internal(anyhow!(
            "reported cost {} differs from re-evaluated cost {}",
            result.total_cost(),
            recomputed.total_cost
        )));
    }
    if result.cost_trace.iter().min() != Some(&result.total_cost()) {
        return Err(Failure::internal(anyhow!("cost trace does not reach the reported cost")));
    }
    Ok(())
}

fn load_pair(instance: Option<&Path>, matrix: &Path) -> Result<(Instance, MultiLayerMatrix), Failure> {
    let instance = load_instance(instance)?;
    let matrix = read_matrix(matrix)?;
    if instance.len() != matrix.n_nodes() {
        return Err(Failure::input(anyhow!(
            "instance has {} nodes but the matrix has {}",
            instance.len(),
            matrix.n_nodes()
        )));
    }
    Ok((instance, matrix))
}

fn solve(cli: &Cli, instance: Option<&Path>, matrix: &Path) -> Result<(), Failure> {
    let (instance, matrix) = load_pair(instance, matrix)?;
    let params = solver_params(&cli.params, cli.seed, instance.n_clients());
    let result = tdvrp_core::solve(&instance, &matrix, &params)?;
    check_result(&result, &matrix)?;
    let out = cli.out.as_deref();
    emit(out, &result_to_string(&result))?;

    let mut tour = vec![0];
    tour.extend_from_slice(result.best_route.order());
    tour.push(0);
    let tour: Vec<String> = tour.iter().map(usize::to_string).collect();
    say(out, &format!("tour: {}", tour.join(" -> ")));
    say(out, &format!("total: {} ({} s)", format_hmm(result.total_cost()), result.total_cost()));
    let (grasp, improve) = result.cost_trace.split_at(params.n_grasp.min(result.cost_trace.len()));
    if let (Some(lo), Some(hi)) = (grasp.iter().min(), grasp.iter().max()) {
        say(
            out,
            &format!("grasp: {} trials, best {}, worst {}", grasp.len(), format_hmm(*lo), format_hmm(*hi)),
        );
    }
    if let (Some(first), Some(last)) = (improve.first(), improve.last()) {
        say(
            out,
            &format!(
                "improvement: {} rounds, {} -> {}",
                improve.len(),
                format_hmm(*first),
                format_hmm(*last)
            ),
        );
    }
    Ok(())
}

fn compare(cli: &Cli, instance: Option<&Path>, matrix: &Path, n_seeds: usize) -> Result<(), Failure> {
    if n_seeds == 0 {
        return Err(Failure::input(anyhow!("--n-seeds must be at least 1")));
    }
    let (instance, matrix) = load_pair(instance, matrix)?;
    let params = solver_params(&cli.params, cli.seed, instance.n_clients());
    let report = tdvrp_core::compare(&instance, &matrix, &params, n_seeds)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv).map_err(Failure::internal)?;
    let csv = String::from_utf8(csv).map_err(Failure::internal)?;
    let out = cli.out.as_deref();
    emit(out, &csv)?;
    for line in report.summary().lines() {
        say(out, line);
    }
    Ok(())
}
