mod args;
mod error;
mod family;
mod output;

use std::fs::File;
use std::io::BufReader;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::Parser;
use walshlab::counterexample::{divergence_experiment, validate_alphas};
use walshlab::hardy::maximal_function;
use walshlab::io::{convergence_table, diagnostics_table, divergence_table, read_grid, read_spectrum};
use walshlab::selfcheck::run_suite;
use walshlab::signal::SignalSpec;
use walshlab::summability::{
    dirichlet_kernel, family_mean, fejer_kernel, make_weights, maximal_operator, norlund_kernel,
    t_kernel, weight_diagnostics,
};
use walshlab::systems::fourier_coeffs;
use walshlab::{Counterexample, Grid, Resolution, Spectrum, SystemKind};

use args::{Cli, Command, KernelType, Source};
use error::{exit_code, usage, CliResult};
use family::FamilySpec;
use output::Sink;

fn resolution(n: u32) -> CliResult<Resolution> {
    Resolution::new(n).map_err(|e| usage(format!("--resolution: {e}")))
}

fn load(source: &Source, n_bits: u32) -> CliResult<Grid> {
    if let Some(text) = &source.signal {
        let spec: SignalSpec = text.parse().map_err(|e| usage(format!("{e}")))?;
        let res = resolution(n_bits)?;
        return spec
            .generate(res)
            .map_err(|e| usage(format!("signal `{text}`: {e}")));
    }
    let path = source.input.as_ref().expect("clap enforces one source");
    let file = File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
    let (f, _) = read_grid(BufReader::new(file))
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(f)
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    let json = cli.json;
    match cli.command {
        Command::Transform(a) => {
            let sink = Sink { out: a.out.as_deref(), json };
            if a.inverse {
                let path = a.source.input.as_ref().expect("clap requires --input");
                let file = File::open(path)
                    .map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
                let s: Spectrum = read_spectrum(BufReader::new(file))
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                let system = s.system().to_string();
                sink.grid(&s.synthesize(), &[("system", system)])
            } else {
                let f = load(&a.source, cli.resolution)?;
                sink.spectrum(&fourier_coeffs(&f, a.system.into()))
            }
        }
        Command::Kernel(a) => {
            let res = resolution(cli.resolution)?;
            let system: SystemKind = a.system.into();
            let sink = Sink { out: a.out.as_deref(), json };
            let mut meta = vec![("type", format!("{:?}", a.kind).to_lowercase())];
            let k = match a.kind {
                KernelType::Dirichlet => dirichlet_kernel(a.n, system, res)?,
                KernelType::Fejer => fejer_kernel(a.n, system, res)?,
                KernelType::T | KernelType::Norlund => {
                    let family = FamilySpec::parse(&a.family)?.resolve(a.n, None)?;
                    let w = make_weights(&family, a.n)?;
                    meta.push(("family", family.label()));
                    if a.kind == KernelType::T {
                        t_kernel(a.n, &w, system, res)?
                    } else {
                        norlund_kernel(a.n, &w, system, res)?
                    }
                }
            };
            meta.push(("n", a.n.to_string()));
            meta.push(("system", system.to_string()));
            sink.grid(&k, &meta)
        }
        Command::Mean(a) => {
            let f = load(&a.source, cli.resolution)?;
            let family = FamilySpec::parse(&a.family)?.resolve(a.n, a.orientation.map(Into::into))?;
            let system: SystemKind = a.system.into();
            let m = family_mean(&f, a.n, &family, system)?;
            let meta = [
                ("family", family.label()),
                ("orientation", family.orientation().to_string()),
                ("n", a.n.to_string()),
                ("system", system.to_string()),
            ];
            Sink { out: a.out.as_deref(), json }.grid(&m, &meta)
        }
        Command::Maximal(a) => {
            let f = load(&a.source, cli.resolution)?;
            let family =
                FamilySpec::parse(&a.family)?.resolve(a.nmax, a.orientation.map(Into::into))?;
            let system: SystemKind = a.system.into();
            let m = maximal_operator(&f, &family, a.nmax, system)?;
            let meta = [
                ("family", family.label()),
                ("orientation", family.orientation().to_string()),
                ("nmax", a.nmax.to_string()),
                ("system", system.to_string()),
            ];
            let sink = Sink { out: a.out.as_deref(), json };
            sink.grid(&m, &meta)?;
            let ratio = m.sup_norm() / maximal_function(&f).sup_norm();
            let summary = if json {
                serde_json::json!({
                    "sup_norm": m.sup_norm(),
                    "l1_norm": m.lp_norm(1.0)?,
                    "input_sup_norm": f.sup_norm(),
                    "ratio_to_martingale_maximal": ratio,
                })
                .to_string()
                    + "\n"
            } else {
                format!(
                    "sup_norm={:.16e} l1_norm={:.16e} input_sup_norm={:.16e} ratio_to_martingale_maximal={:.16e}\n",
                    m.sup_norm(),
                    m.lp_norm(1.0)?,
                    f.sup_norm(),
                    ratio
                )
            };
            sink.summary(&summary)
        }
        Command::Converge(a) => {
            let f = load(&a.source, cli.resolution)?;
            let family =
                FamilySpec::parse(&a.family)?.resolve(a.nmax, a.orientation.map(Into::into))?;
            let rows = walshlab::summability::convergence_table(&f, &family, a.nmax, a.system.into())?;
            Sink { out: a.out.as_deref(), json }.table(&convergence_table(&rows))
        }
        Command::Weights(a) => {
            let horizon = a.nmax + 2;
            let family = FamilySpec::parse(&a.family)?.resolve(horizon, None)?;
            let w = make_weights(&family, horizon)?;
            let d = weight_diagnostics(&w, a.nmax)?;
            let sink = Sink { out: a.out.as_deref(), json };
            sink.table(&diagnostics_table(&d))?;
            sink.summary(&format!(
                "monotonicity={} C={:.16e} c={:.16e}\n",
                w.monotonicity(),
                d.node_constant,
                d.cond1_constant
            ))
        }
        Command::Counterexample(a) => {
            let spec = Counterexample::new(a.p, a.alphas.clone())
                .map_err(|e| usage(format!("{e}")))?;
            let res = resolution(cli.resolution)?;
            let report = validate_alphas(&spec);
            if let Some(k) = report.first_failure() {
                let c = &report.checks[k - 1];
                return Err(anyhow!(
                    "gap conditions fail at k = {k} (log2 margins: cond3 {:.6}, cond4 {:.6})",
                    c.cond3_margin,
                    c.cond4_margin
                ));
            }
            let horizon = spec.alphas().last().map_or(2, |&a| (1usize << a) + 2);
            let family = FamilySpec::parse(&a.weights)?.resolve(horizon, None)?;
            let w = make_weights(&family, horizon)?;
            let d = divergence_experiment(&spec, &w, res)?;
            let sink = Sink { out: a.out.as_deref(), json };
            sink.table(&divergence_table(&d))?;
            sink.summary(&format!("hypothesis={} weights={}\n", d.hypothesis, family.label()))
        }
        Command::Selfcheck => {
            let items = run_suite();
            if json {
                println!("{}", serde_json::to_string_pretty(&items)?);
            } else {
                for item in &items {
                    let mark = if item.passed { "PASS" } else { "FAIL" };
                    println!("{mark} {}: {}", item.name, item.detail);
                }
            }
            let failed = items.iter().filter(|i| !i.passed).count();
            if failed > 0 {
                Err(anyhow!("{failed} of {} selfcheck items failed", items.len()))
            } else {
                Ok(())
            }
        }
    }
}

fn broken_pipe(e: &anyhow::Error) -> bool {
    let kind = |io: &std::io::Error| io.kind() == std::io::ErrorKind::BrokenPipe;
    e.chain().any(|c| match c.downcast_ref::<walshlab::Error>() {
        Some(walshlab::Error::Io(io)) => kind(io),
        _ => {
            c.downcast_ref::<std::io::Error>().is_some_and(kind)
                || c.downcast_ref::<serde_json::Error>()
                    .and_then(|j| j.io_error_kind())
                    == Some(std::io::ErrorKind::BrokenPipe)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // reader went away, e.g. `| head`
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
