use std::fs;
use std::path::Path;

use guesslab::center::{
    member_divergences, member_i_values, solve_center, solve_center_from, CenterResult, FamilySpec, MixtureWeights,
};
use guesslab::families::{
    avs_center_radius, avs_rate, avs_stitch, avs_type_members, dms_pmf, dms_radius_bound, empirical_entropy_list,
    AvsSpec, DmsSpec,
};
use guesslab::geometry::{center_in_hull_check, project, ConvexHullSet};
use guesslab::guessing::{
    arikan_sandwich, campbell_exponent, campbell_length, campbell_min_exponent, converse_pmf, guessing_moment,
    length_pmf, redundancy, LengthFunction,
};
use guesslab::infomeasures::{h_value, i_value, kl_limit_check, l_alpha, renyi_entropy};
use guesslab::io::{check_list_for, from_json};
use guesslab::{nuisance, sort_to_list, GuessingList, JointPmf, OrderParam};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::args::{AvsCommand, CenterCommand, Cli, CodeCommand, Command, DmsCommand, GeomCommand, GuessCommand};
use crate::config::{number, RunConfig};
use crate::error::CliError;
use crate::report::{self, cell, Report, Table};

type Outcome = Result<(RunConfig, Report), CliError>;

pub fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    if !(g.tol > 0.0 && g.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be a positive number, got {}", g.tol)));
    }
    if let Some(jobs) = g.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let (cfg, report) = match cli.command {
        Command::Entropy { pmf } => entropy(RunConfig::new(&g, "entropy", None), &pmf),
        Command::Divergence { p, q } => divergence(RunConfig::new(&g, "divergence", None), &p, &q),
        Command::Guess(GuessCommand::Moment { pmf, list }) => {
            guess_moment(RunConfig::new(&g, "guess", Some("moment")), &pmf, list.as_deref())
        }
        Command::Guess(GuessCommand::Redundancy { pmf, list }) => {
            guess_redundancy(RunConfig::new(&g, "guess", Some("redundancy")), &pmf, &list)
        }
        Command::Guess(GuessCommand::Sandwich { pmf }) => guess_sandwich(RunConfig::new(&g, "guess", Some("sandwich")), &pmf),
        Command::Code(CodeCommand::Campbell { pmf, q }) => {
            code_campbell(RunConfig::new(&g, "code", Some("campbell")), &pmf, q.as_deref())
        }
        Command::Center(CenterCommand::Solve { family, restarts }) => {
            center_solve(RunConfig::new(&g, "center", Some("solve")), &family, restarts)
        }
        Command::Center(CenterCommand::Check { family, q }) => {
            center_check(RunConfig::new(&g, "center", Some("check")), &family, &q)
        }
        Command::Dms(DmsCommand::Universal { n, letters, p }) => {
            dms_universal(RunConfig::new(&g, "dms", Some("universal")), n, letters, p)
        }
        Command::Dms(DmsCommand::RadiusBound { m, n }) => {
            dms_bound(RunConfig::new(&g, "dms", Some("radius-bound")), m, n)
        }
        Command::Avs(AvsCommand::Center { spec }) => avs_center(RunConfig::new(&g, "avs", Some("center")), &spec),
        Command::Avs(AvsCommand::Stitch { spec }) => avs_stitch_cmd(RunConfig::new(&g, "avs", Some("stitch")), &spec),
        Command::Avs(AvsCommand::Rate { spec, u }) => avs_rate_cmd(RunConfig::new(&g, "avs", Some("rate")), &spec, u),
        Command::Geom(GeomCommand::Project { hull, reference }) => {
            geom_project(RunConfig::new(&g, "geom", Some("project")), &hull, &reference)
        }
        Command::Geom(GeomCommand::Pythagoras { hull, reference }) => {
            geom_pythagoras(RunConfig::new(&g, "geom", Some("pythagoras")), &hull, &reference)
        }
    }?;
    report::emit(&cfg, &report)
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    from_json(&text).map_err(|source| CliError::Input { path: path.into(), source })
}

fn numbers(values: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(values.into_iter().map(number).collect())
}

fn log_values(cfg: &RunConfig, values: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(values.into_iter().map(|v| cfg.log_value(v)).collect())
}

fn positive_rho(cfg: &RunConfig) -> Result<(OrderParam, f64), CliError> {
    let op = cfg.order()?;
    op.require_positive_rho()?;
    Ok((op, op.rho()))
}

fn entropy(mut cfg: RunConfig, pmf: &Path) -> Outcome {
    cfg.input("pmf", pmf);
    let op = cfg.order()?;
    let p: JointPmf = read(pmf)?;
    let result = json!({
        "renyi_entropy": cfg.log_value(renyi_entropy(&p, op)),
        "h": number(h_value(&p, op)),
        "x_size": p.nx(),
        "y_size": p.ny(),
    });
    Ok((cfg, Report::scalar(result)))
}

fn divergence(mut cfg: RunConfig, p_path: &Path, q_path: &Path) -> Outcome {
    cfg.input("p", p_path).input("q", q_path);
    let op = cfg.order()?;
    let p: JointPmf = read(p_path)?;
    let q: JointPmf = read(q_path)?;
    p.check_same_alphabet(&q)?;
    let kl = match kl_limit_check(&p, &q) {
        Ok(v) => cfg.log_value(v),
        Err(guesslab::Error::Infinite(_)) => number(f64::INFINITY),
        Err(e) => return Err(e.into()),
    };
    let result = json!({
        "l_alpha": cfg.log_value(l_alpha(&p, &q, op).value()),
        "i_value": number(i_value(&p, &q, op)),
        "kl_limit": kl,
    });
    Ok((cfg, Report::scalar(result)))
}

fn read_list_for(path: &Path, p: &JointPmf) -> Result<GuessingList, CliError> {
    let g: GuessingList = read(path)?;
    check_list_for(&g, p).map_err(|source| CliError::Input { path: path.into(), source })?;
    Ok(g)
}

fn guess_moment(mut cfg: RunConfig, pmf: &Path, list: Option<&Path>) -> Outcome {
    cfg.input("pmf", pmf);
    if let Some(l) = list {
        cfg.input("list", l);
    }
    let (_, rho) = positive_rho(&cfg)?;
    let p: JointPmf = read(pmf)?;
    let g = match list {
        Some(path) => read_list_for(path, &p)?,
        None => sort_to_list(&p),
    };
    let moment = guessing_moment(&p, &g, rho)?;
    let result = json!({
        "moment": number(moment),
        "exponent": cfg.log_value(moment.log2() / rho),
        "matched_list": list.is_none(),
    });
    Ok((cfg, Report::scalar(result)))
}

fn guess_redundancy(mut cfg: RunConfig, pmf: &Path, list: &Path) -> Outcome {
    cfg.input("pmf", pmf).input("list", list);
    let (op, rho) = positive_rho(&cfg)?;
    let p: JointPmf = read(pmf)?;
    let g = read_list_for(list, &p)?;
    let red = redundancy(&p, &g, rho)?;
    let l = l_alpha(&p, &converse_pmf(&g, rho)?, op).value();
    let slack = nuisance(p.nx());
    let result = json!({
        "redundancy": cfg.log_value(red),
        "l_alpha_converse": cfg.log_value(l),
        "nuisance": cfg.log_value(slack),
        "within_nuisance": (red - l).abs() <= slack + 1e-9,
    });
    Ok((cfg, Report::scalar(result)))
}

fn guess_sandwich(mut cfg: RunConfig, pmf: &Path) -> Outcome {
    cfg.input("pmf", pmf);
    let (_, rho) = positive_rho(&cfg)?;
    let p: JointPmf = read(pmf)?;
    let rep = arikan_sandwich(&p, rho)?;
    let result = json!({
        "moment": number(rep.moment),
        "exponent": cfg.log_value(rep.exponent),
        "lower": cfg.log_value(rep.lower),
        "upper": cfg.log_value(rep.upper),
        "holds": rep.holds(1e-9),
    });
    Ok((cfg, Report::scalar(result)))
}

fn length_rows(l: &LengthFunction) -> Value {
    let nx = l.alphabet().nx();
    Value::Array(l.lengths().chunks(nx).map(|r| json!(r)).collect())
}

fn code_campbell(mut cfg: RunConfig, pmf: &Path, q_path: Option<&Path>) -> Outcome {
    cfg.input("pmf", pmf);
    if let Some(q) = q_path {
        cfg.input("q", q);
    }
    let op = cfg.order()?;
    let rho = op.rho();
    let p: JointPmf = read(pmf)?;
    let (best, min_exponent) = campbell_min_exponent(&p, rho)?;
    let h = renyi_entropy(&p, op);
    let mut result = json!({
        "lengths": length_rows(&best),
        "min_exponent": cfg.log_value(min_exponent),
        "renyi_entropy": cfg.log_value(h),
        "upper": cfg.log_value(h + 1.0),
        "kraft_sums": numbers((0..p.ny()).map(|y| best.kraft_sum(y))),
    });
    let mut table = Table::new(&["x", "y", "probability", "optimal_length", "designed_length"]);
    let designed = match q_path {
        Some(path) => {
            let q: JointPmf = read(path)?;
            p.check_same_alphabet(&q)?;
            let lq = campbell_length(&q, rho)?;
            let e = campbell_exponent(&p, &lq, rho)?;
            let mismatch = l_alpha(&p, &length_pmf(&lq, rho)?, op).value();
            result["designed"] = json!({
                "lengths": length_rows(&lq),
                "exponent": cfg.log_value(e),
                "redundancy": cfg.log_value(e - min_exponent),
                "l_alpha_length_pmf": cfg.log_value(mismatch),
            });
            Some(lq)
        }
        None => None,
    };
    let al = p.alphabet();
    for y in 0..p.ny() {
        for x in 0..p.nx() {
            table.push(vec![
                al.x().label(x),
                al.y().label(y),
                p.get(x, y).to_string(),
                best.get(x, y).to_string(),
                designed.as_ref().map(|l| l.get(x, y).to_string()).unwrap_or_default(),
            ]);
        }
    }
    Ok((cfg, Report { result, table: Some(table) }))
}

fn center_report(cfg: &RunConfig, fam: &FamilySpec, res: &CenterResult, op: OrderParam) -> Result<Report, CliError> {
    let divs: Vec<f64> = member_divergences(fam, &res.q_star, op).into_iter().map(|d| d.value()).collect();
    let i_vals = member_i_values(fam, &res.q_star, op)?;
    let result = json!({
        "mu_star": res.mu_star,
        "q_star": res.q_star,
        "radius": cfg.log_value(res.radius),
        "k_plus": number(res.k_plus),
        "k_minus": number(res.k_minus),
        "duality_gap": number(res.duality_gap()),
        "nasc_residuals": numbers(res.nasc_residuals.iter().copied()),
        "normalizer_d": number(res.normalizer_d),
        "iterations": res.iterations,
        "member_divergences": log_values(cfg, divs.iter().copied()),
        "hull_residual": number(center_in_hull_check(fam, res)),
    });
    let mut table = Table::new(&["member", "mu", "i_value", "divergence", "nasc_residual"]);
    for (k, ((mu, i), (d, r))) in
        res.mu_star.as_slice().iter().zip(&i_vals).zip(divs.iter().zip(&res.nasc_residuals)).enumerate()
    {
        table.push(vec![
            k.to_string(),
            mu.to_string(),
            cell(&number(*i)),
            cell(&cfg.log_value(*d)),
            cell(&number(*r)),
        ]);
    }
    Ok(Report { result, table: Some(table) })
}

fn center_solve(mut cfg: RunConfig, family: &Path, restarts: usize) -> Outcome {
    cfg.input("family", family);
    if restarts > 0 {
        cfg.param("restarts", restarts);
    }
    let op = cfg.order()?;
    let fam: FamilySpec = read(family)?;
    let res = solve_center(&fam, op, cfg.tol)?;
    let mut report = center_report(&cfg, &fam, &res, op)?;
    if restarts > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let (mut q_spread, mut radius_spread) = (0.0f64, 0.0f64);
        for _ in 0..restarts {
            let w: Vec<f64> = (0..fam.len()).map(|_| rng.random_range(0.01..1.0)).collect();
            let total: f64 = w.iter().sum();
            let start = MixtureWeights::new(w.into_iter().map(|v| v / total).collect())?;
            let other = solve_center_from(&fam, op, cfg.tol, start)?;
            q_spread = q_spread.max(res.q_star.max_abs_diff(&other.q_star));
            radius_spread = radius_spread.max((res.radius - other.radius).abs());
        }
        report.result["restarts"] = json!({
            "runs": restarts,
            "max_q_difference": number(q_spread),
            "max_radius_difference": cfg.log_value(radius_spread),
        });
    }
    Ok((cfg, report))
}

fn center_check(mut cfg: RunConfig, family: &Path, q_path: &Path) -> Outcome {
    cfg.input("family", family).input("q", q_path);
    let op = cfg.order()?;
    let fam: FamilySpec = read(family)?;
    let q: JointPmf = read(q_path)?;
    q.check_same_alphabet(&fam.members()[0])?;
    let divs: Vec<f64> = member_divergences(&fam, &q, op).into_iter().map(|d| d.value()).collect();
    let worst = divs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let res = solve_center(&fam, op, cfg.tol)?;
    let result = json!({
        "member_divergences": log_values(&cfg, divs.iter().copied()),
        "i_values": numbers(member_i_values(&fam, &q, op)?),
        "max_divergence": cfg.log_value(worst),
        "radius": cfg.log_value(res.radius),
        "excess": cfg.log_value(worst - res.radius),
        "q_distance_to_center": number(q.max_abs_diff(&res.q_star)),
    });
    let mut table = Table::new(&["member", "divergence"]);
    for (k, d) in divs.iter().enumerate() {
        table.push(vec![k.to_string(), cell(&cfg.log_value(*d))]);
    }
    Ok((cfg, Report { result, table: Some(table) }))
}

fn dms_universal(mut cfg: RunConfig, n: usize, letters: Vec<String>, p: Option<Vec<f64>>) -> Outcome {
    cfg.param("n", n).param("letters", &letters);
    if let Some(p) = &p {
        cfg.param("p", p);
    }
    let spec = DmsSpec { letters, n, p: None };
    let list = empirical_entropy_list(&spec)?;
    let al = list.alphabet().clone();
    let order: Vec<String> = list.order(0).into_iter().map(|i| al.x().label(i)).collect();
    let mut result = json!({ "order": order, "nuisance": cfg.log_value(nuisance(al.nx())) });
    if let Some(p) = p {
        let (_, rho) = positive_rho(&cfg)?;
        let pn = dms_pmf(&spec.with_p(p))?;
        result["redundancy"] = cfg.log_value(redundancy(&pn, &list, rho)?);
    }
    let mut table = Table::new(&["rank", "string"]);
    for (k, s) in order.iter().enumerate() {
        table.push(vec![(k + 1).to_string(), s.clone()]);
    }
    Ok((cfg, Report { result, table: Some(table) }))
}

fn dms_bound(mut cfg: RunConfig, m: usize, n: usize) -> Outcome {
    cfg.param("m", m).param("n", n);
    let b = dms_radius_bound(m, n)?;
    let result = json!({
        "m": b.m,
        "n": b.n,
        "log_term": cfg.log_value(b.log_term),
        "u_m": cfg.log_value(b.u_m),
        "bound": cfg.log_value(b.bound),
        "epsilon_n_omitted": b.epsilon_n_omitted,
    });
    Ok((cfg, Report::scalar(result)))
}

fn avs_center(mut cfg: RunConfig, spec_path: &Path) -> Outcome {
    cfg.input("spec", spec_path);
    let op = cfg.order()?;
    let spec: AvsSpec = read(spec_path)?;
    let res = avs_center_radius(&spec, op)?;
    let fam = avs_type_members(&spec)?;
    let report = center_report(&cfg, &fam, &res, op)?;
    Ok((cfg, report))
}

fn avs_stitch_cmd(mut cfg: RunConfig, spec_path: &Path) -> Outcome {
    cfg.input("spec", spec_path);
    let op = cfg.order()?;
    let spec: AvsSpec = read(spec_path)?;
    let rep = avs_stitch(&spec, op)?;
    let mut table = Table::new(&["counts", "members", "radius", "max_redundancy", "bound", "holds"]);
    let types: Vec<Value> = rep
        .types
        .iter()
        .map(|t| {
            table.push(vec![
                t.counts.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
                t.members.to_string(),
                cell(&cfg.log_value(t.radius)),
                cell(&cfg.log_value(t.max_redundancy)),
                cell(&cfg.log_value(t.bound)),
                t.holds(1e-9).to_string(),
            ]);
            json!({
                "counts": t.counts,
                "members": t.members,
                "radius": cfg.log_value(t.radius),
                "max_redundancy": cfg.log_value(t.max_redundancy),
                "bound": cfg.log_value(t.bound),
                "holds": t.holds(1e-9),
            })
        })
        .collect();
    let result = json!({ "n": rep.n, "lists": rep.lists, "types": types });
    Ok((cfg, Report { result, table: Some(table) }))
}

fn avs_rate_cmd(mut cfg: RunConfig, spec_path: &Path, u: Vec<f64>) -> Outcome {
    cfg.input("spec", spec_path).param("u", &u);
    let op = cfg.order()?;
    let spec: AvsSpec = read(spec_path)?;
    spec.validate()?;
    let rate = avs_rate(&spec.channel, &u, op)?;
    Ok((cfg.clone(), Report::scalar(json!({ "rate": cfg.log_value(rate) }))))
}

fn geom_project(mut cfg: RunConfig, hull_path: &Path, reference: &Path) -> Outcome {
    cfg.input("hull", hull_path).input("reference", reference);
    let op = cfg.order()?;
    let hull: ConvexHullSet = read(hull_path)?;
    let r: JointPmf = read(reference)?;
    let res = project(&r, &hull, op, cfg.tol)?;
    let result = json!({
        "q": res.q,
        "value": cfg.log_value(res.value.value()),
        "weights": numbers(res.weights.iter().copied()),
        "certificate": log_values(&cfg, res.certificate.iter().copied()),
        "bisection_steps": res.bisection_steps,
    });
    let mut table = Table::new(&["vertex", "weight", "pythagorean_slack"]);
    for (k, (w, s)) in res.weights.iter().zip(&res.certificate).enumerate() {
        table.push(vec![k.to_string(), w.to_string(), cell(&cfg.log_value(*s))]);
    }
    Ok((cfg, Report { result, table: Some(table) }))
}

fn geom_pythagoras(mut cfg: RunConfig, hull_path: &Path, reference: &Path) -> Outcome {
    cfg.input("hull", hull_path).input("reference", reference);
    let op = cfg.order()?;
    let hull: ConvexHullSet = read(hull_path)?;
    let r: JointPmf = read(reference)?;
    let res = project(&r, &hull, op, cfg.tol)?;
    let l_qr = res.value.value();
    let mut table = Table::new(&["vertex", "l_pr", "l_pq", "l_qr", "residual", "holds"]);
    let vertices: Vec<Value> = hull
        .vertices()
        .iter()
        .zip(&res.certificate)
        .enumerate()
        .map(|(k, (v, &slack))| {
            let l_pr = l_alpha(v, &r, op).value();
            let l_pq = l_alpha(v, &res.q, op).value();
            let holds = slack >= -1e-6;
            table.push(vec![
                k.to_string(),
                cell(&cfg.log_value(l_pr)),
                cell(&cfg.log_value(l_pq)),
                cell(&cfg.log_value(l_qr)),
                cell(&cfg.log_value(slack)),
                holds.to_string(),
            ]);
            json!({
                "l_pr": cfg.log_value(l_pr),
                "l_pq": cfg.log_value(l_pq),
                "l_qr": cfg.log_value(l_qr),
                "residual": cfg.log_value(slack),
                "holds": holds,
            })
        })
        .collect();
    let result = json!({ "q": res.q, "value": cfg.log_value(l_qr), "vertices": vertices });
    Ok((cfg, Report { result, table: Some(table) }))
}
