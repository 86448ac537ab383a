use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use pds_core::checks::{run_battery, Battery};
use pds_core::detectors::{combined_test, linear_test, scan_test, ScanMode};
use pds_core::graphs::{
    gen_bipartite_er, gen_bipartite_pc, gen_bipartite_pds, gen_er, gen_pds_fixed_size, gen_pds_random_size,
    gen_planted_clique, read_bipartite_file, read_graph_file, write_bipartite_file, write_graph_file, PlantSize,
};
use pds_core::phase::{run_sweep_to_files, SweepConfig, EXACT_SCAN_MAX_VERTICES};
use pds_core::reduction::{KernelFault, Reducer};
use pds_core::{Error, PdsParams, ReductionParams, Seed};

use crate::{
    BatteryArg, Failure, FaultArg, GenerateArgs, Model, PlantArg, ReduceArgs, ScanArg, TestArg, TestArgs, VerifyArgs,
};

type CmdResult = Result<(), Failure>;

/// Attaches `path` to file errors.
fn at<T>(path: &Path, r: Result<T, Error>) -> Result<T, Failure> {
    r.map_err(|e| Failure::File(path.to_owned(), e))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write_json(path: &Path, value: &Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn model_name(model: Model) -> &'static str {
    match model {
        Model::Er => "er",
        Model::Pds => "pds",
        Model::PdsFixed => "pds-fixed",
        Model::Pc => "pc",
        Model::Ber => "ber",
        Model::Bpds => "bpds",
        Model::Bpc => "bpc",
    }
}

/// Options each model reads, besides `--n`.
fn model_options(model: Model) -> &'static [&'static str] {
    match model {
        Model::Er => &["q"],
        Model::Ber => &["q", "n-bottom"],
        Model::Pds | Model::PdsFixed => &["k", "p", "q"],
        Model::Bpds => &["k", "p", "q", "plant"],
        Model::Pc | Model::Bpc => &["k", "gamma"],
    }
}

fn check_options(args: &GenerateArgs) -> CmdResult {
    let allowed = model_options(args.model);
    let given = [
        ("n-bottom", args.n_bottom.is_some()),
        ("k", args.k.is_some()),
        ("p", args.p.is_some()),
        ("q", args.q.is_some()),
        ("gamma", args.gamma.is_some()),
        ("plant", args.plant != PlantArg::Random),
    ];
    let name = model_name(args.model);
    for (opt, present) in given {
        if present && !allowed.contains(&opt) {
            return Err(Failure::Usage(format!("--{opt} is not used by model {name}")));
        }
    }
    Ok(())
}

fn required<T: Copy>(value: Option<T>, opt: &str, model: Model) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("model {} requires --{opt}", model_name(model))))
}

pub fn generate(args: &GenerateArgs) -> CmdResult {
    check_options(args)?;
    let model = args.model;
    let seed = Seed::new(args.seed);
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.edges", model_name(model))));
    let n = args.n;
    let k = || required(args.k, "k", model);
    let p = || required(args.p, "p", model);
    let q = || required(args.q, "q", model);
    let gamma = || required(args.gamma, "gamma", model);

    let mut meta = json!({ "model": model_name(model), "seed": args.seed });
    let params;
    match model {
        Model::Er => {
            let q = q()?;
            let g = gen_er(n, q, seed)?;
            at(&out, write_graph_file(&out, &g))?;
            params = json!({ "n": n, "q": q });
            meta["num_edges"] = json!(g.num_edges());
        }
        Model::Pds | Model::PdsFixed | Model::Pc => {
            let inst = match model {
                Model::Pc => {
                    let (k, gamma) = (k()?, gamma()?);
                    params = json!({ "n": n, "k": k, "gamma": gamma });
                    gen_planted_clique(n, k, gamma, seed)?
                }
                _ => {
                    let pds = PdsParams::new(n, k()?, p()?, q()?)?;
                    params = json!({ "n": n, "k": pds.k, "p": pds.p, "q": pds.q });
                    if model == Model::Pds {
                        gen_pds_random_size(&pds, seed)?
                    } else {
                        gen_pds_fixed_size(&pds, seed)?
                    }
                }
            };
            at(&out, write_graph_file(&out, &inst.graph))?;
            meta["num_edges"] = json!(inst.graph.num_edges());
            meta["planted"] = json!(inst.planted);
        }
        Model::Ber => {
            let (q, nb) = (q()?, args.n_bottom.unwrap_or(n));
            let g = gen_bipartite_er(n, nb, q, seed)?;
            at(&out, write_bipartite_file(&out, &g))?;
            params = json!({ "n_top": n, "n_bottom": nb, "q": q });
            meta["num_edges"] = json!(g.num_edges());
        }
        Model::Bpds | Model::Bpc => {
            let inst = if model == Model::Bpc {
                let (k, gamma) = (k()?, gamma()?);
                params = json!({ "n": n, "k": k, "gamma": gamma });
                gen_bipartite_pc(n, k, gamma, seed)?
            } else {
                let pds = PdsParams::new(n, k()?, p()?, q()?)?;
                let size = match args.plant {
                    PlantArg::Random => PlantSize::Random,
                    PlantArg::Fixed => PlantSize::Fixed,
                };
                params = json!({ "n": n, "k": pds.k, "p": pds.p, "q": pds.q, "plant": size });
                gen_bipartite_pds(&pds, size, seed)?
            };
            at(&out, write_bipartite_file(&out, &inst.graph))?;
            meta["num_edges"] = json!(inst.graph.num_edges());
            meta["planted_top"] = json!(inst.planted_top);
            meta["planted_bottom"] = json!(inst.planted_bottom);
        }
    }
    meta["params"] = params;
    let sidecar = sidecar_path(&out);
    at(&sidecar, write_json(&sidecar, &meta))?;
    println!("wrote {} and {}", out.display(), sidecar.display());
    Ok(())
}

fn scan_mode(choice: Option<ScanArg>, n: usize, restarts: usize, budget: u64) -> ScanMode {
    let heuristic = match choice {
        Some(ScanArg::Exact) => false,
        Some(ScanArg::Heuristic) => true,
        None => n > EXACT_SCAN_MAX_VERTICES,
    };
    if heuristic {
        ScanMode::Heuristic { restarts }
    } else {
        ScanMode::Exact { budget }
    }
}

pub fn test(args: &TestArgs) -> CmdResult {
    let g = at(&args.graph, read_graph_file(&args.graph))?;
    let params = PdsParams::new(g.num_vertices(), args.k, args.p, args.q)?;
    let mode = scan_mode(args.scan_mode, g.num_vertices(), args.restarts, args.budget);
    let seed = Seed::new(args.seed);
    let mut out = json!({ "N": params.n, "K": params.k, "p": params.p, "q": params.q });
    let outcome = match args.test {
        TestArg::Lin => {
            out["test"] = json!("lin");
            json!(linear_test(&g, &params))
        }
        TestArg::Scan => {
            out["test"] = json!("scan");
            out["scan_mode"] = json!(mode.label());
            json!(scan_test(&g, &params, &mode, seed)?)
        }
        TestArg::Combined => {
            out["test"] = json!("combined");
            out["scan_mode"] = json!(mode.label());
            let c = combined_test(&g, &params, &mode, seed)?;
            out["components"] = json!({ "lin": c.lin, "scan": c.scan });
            json!({ "decision": c.decision })
        }
    };
    for (key, value) in outcome.as_object().expect("outcomes are objects") {
        out[key] = value.clone();
    }
    println!("{out}");
    Ok(())
}

pub fn reduce(args: &ReduceArgs) -> CmdResult {
    let params = ReductionParams {
        n: 0,
        k: args.k,
        gamma: args.gamma,
        ell: args.ell,
        q: args.q,
        strict: args.strict,
    };
    let seed = Seed::new(args.seed);
    let check_n = |found: usize| match args.n {
        Some(expected) if expected != found => Err(Error::VertexCountMismatch { expected, found }),
        _ => Ok(found),
    };
    let (params, reducer, num_edges) = if args.bipartite {
        let g = at(&args.graph, read_bipartite_file(&args.graph))?;
        if g.num_top() != g.num_bottom() {
            return Err(Error::VertexCountMismatch {
                expected: g.num_top(),
                found: g.num_bottom(),
            }
            .into());
        }
        let params = ReductionParams {
            n: check_n(g.num_top())?,
            ..params
        };
        let reducer = build_reducer(params)?;
        let out = reducer.reduce_bipartite(&g, seed)?;
        at(&args.out, write_bipartite_file(&args.out, &out))?;
        (params, reducer, out.num_edges())
    } else {
        let g = at(&args.graph, read_graph_file(&args.graph))?;
        let params = ReductionParams {
            n: check_n(g.num_vertices())?,
            ..params
        };
        let reducer = build_reducer(params)?;
        let out = reducer.reduce(&g, seed)?;
        at(&args.out, write_graph_file(&args.out, &out))?;
        (params, reducer, out.num_edges())
    };
    drop(reducer);
    let cond = params.conditions();
    let meta = json!({
        "n": params.n,
        "k": params.k,
        "gamma": params.gamma,
        "ell": params.ell,
        "q": params.q,
        "m0": params.m0(),
        "N": params.big_n(),
        "K": params.big_k(),
        "p": params.p(),
        "conditions": cond,
        "strict": params.strict,
        "bipartite": args.bipartite,
        "seed": args.seed,
        "num_edges": num_edges,
    });
    let sidecar = sidecar_path(&args.out);
    at(&sidecar, write_json(&sidecar, &meta))?;
    println!("wrote {} and {}", args.out.display(), sidecar.display());
    Ok(())
}

fn build_reducer(params: ReductionParams) -> Result<Reducer, Error> {
    let cond = params.conditions();
    let reducer = Reducer::new(params)?;
    if !cond.kernel_validity {
        eprintln!(
            "warning: 16*q*ell^2 = {} > 1; the kernel may not be a probability law",
            16.0 * params.q * (params.ell * params.ell) as f64
        );
    }
    if !cond.clique_size {
        eprintln!(
            "warning: k = {} < 6*e*ell = {:.3}; the total variation guarantee does not apply",
            params.k,
            6.0 * std::f64::consts::E * params.ell as f64
        );
    }
    Ok(reducer)
}

pub fn sweep(config: &Path) -> CmdResult {
    let config = at(config, SweepConfig::from_file(config))?;
    let rows = run_sweep_to_files(&config)?;
    println!(
        "wrote {} rows to {}, {} and {}",
        rows.len(),
        config.output_path,
        config.svg_path().display(),
        config.recovery_svg_path().display()
    );
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let battery = match args.battery {
        BatteryArg::Kernel => Battery::Kernel,
        BatteryArg::Lemmas => Battery::Lemmas,
        BatteryArg::ReductionExact => Battery::ReductionExact,
        BatteryArg::All => Battery::All,
    };
    let fault = args.inject_fault.map(|FaultArg::FlipATerm| KernelFault::FlipATerm);
    let reports = run_battery(battery, fault);
    let mut violations = 0;
    for report in &reports {
        let line = report.to_json_line();
        println!("{line}");
        if !report.satisfied {
            eprintln!("violation: {line}");
            violations += 1;
        }
    }
    eprintln!("{} checks, {violations} violations", reports.len());
    if violations > 0 {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}
