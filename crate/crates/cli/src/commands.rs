use std::fs::File;
use std::io::BufReader;
use std::sync::Arc;

use anyhow::Context;
use serde::Serialize;
use smp_core::{
    de_run, shannon_limit, sweep, table_report, CodeGraph, DeSettings, Ensemble, FieldSpec, SimResult,
    StopRule, TableRow, ThresholdSettings,
};

use crate::output::{sink, write_csv, write_json};
use crate::{CapacityArgs, CodegenArgs, Command, DeArgs, DeOpts, Failure, Format, ShannonArgs, SimulateArgs, ThresholdArgs};

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn de_settings(o: &DeOpts) -> Result<DeSettings, Failure> {
    if o.iters == 0 {
        return Err(usage("--iters must be positive"));
    }
    if !(o.delta > 0.0 && o.delta < 1.0) {
        return Err(usage("--delta must lie in (0, 1)"));
    }
    Ok(DeSettings {
        l_max: o.iters,
        delta_conv: o.delta,
    })
}

fn field(q: usize) -> Result<Arc<FieldSpec>, Failure> {
    Ok(Arc::new(FieldSpec::with_order(q)?))
}

pub fn threshold(config: &Command, a: &ThresholdArgs) -> Outcome {
    if a.q.is_empty() {
        return Err(usage("--q needs at least one field order"));
    }
    for &q in &a.q {
        Ensemble::new(a.dv, a.dc, q)?;
    }
    let settings = ThresholdSettings {
        de: de_settings(&a.de)?,
        bisect_tol: a.tol,
    };
    let rows = table_report(&[(a.dv, a.dc)], &a.q, a.de.mode.into(), settings)?;
    let mut w = sink(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => write_csv(&mut *w, config, TableRow::CSV_HEADER, rows.iter().map(TableRow::to_csv))?,
        Format::Json => write_json(&mut *w, config, &rows)?,
    }
    Ok(())
}

pub fn de(config: &Command, a: &DeArgs) -> Outcome {
    let ensemble = Ensemble::new(a.dv, a.dc, a.q)?;
    let trace = de_run(ensemble, a.eps, a.de.mode.into(), de_settings(&a.de)?)?;
    let mut w = sink(a.out.as_deref())?;
    match a.format {
        Format::Csv => write_csv(
            &mut *w,
            config,
            "iteration,p0_lower,p0_upper,xi_lower,xi_upper",
            trace.records.iter().map(|r| {
                format!(
                    "{},{:.15e},{:.15e},{:.15e},{:.15e}",
                    r.iteration, r.p0_lower, r.p0_upper, r.xi_lower, r.xi_upper
                )
            }),
        )?,
        Format::Json => write_json(&mut *w, config, &trace)?,
    }
    Ok(())
}

fn load_code(path: &std::path::Path, q: usize) -> Result<CodeGraph, Failure> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    CodeGraph::load(BufReader::new(file), field(q)?)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Runtime)
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    n: usize,
    dv: usize,
    dc: usize,
    q: usize,
    points: &'a [SimResult],
}

pub fn simulate(config: &Command, a: &SimulateArgs) -> Outcome {
    if a.workers == 0 {
        return Err(usage("--workers must be positive"));
    }
    if a.iters == 0 {
        return Err(usage("--iters must be positive"));
    }
    let grid: Vec<f64> = match (&a.eps_grid, a.eps) {
        (Some(g), _) => g.clone(),
        (None, Some(e)) => vec![e],
        (None, None) => return Err(usage("one of --eps or --eps-grid is required")),
    };
    if grid.is_empty() {
        return Err(usage("--eps-grid is empty"));
    }
    let code = match &a.load {
        Some(path) => load_code(path, a.q)?,
        None => {
            let (dv, dc, n) = (a.dv.unwrap_or(0), a.dc.unwrap_or(0), a.n.unwrap_or(0));
            Ensemble::new(dv, dc, a.q)?;
            CodeGraph::sample(n, dv, dc, field(a.q)?, a.code_seed.unwrap_or(a.seed))?
        }
    };
    if let Some(path) = &a.save_code {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        code.save(std::io::BufWriter::new(f))?;
    }
    let stop = StopRule {
        max_frames: a.max_frames,
        target_frame_errors: (a.frame_errors > 0).then_some(a.frame_errors),
        target_symbol_errors: a.symbol_errors,
    };
    if stop.max_frames == 0 || stop.target_symbol_errors == Some(0) {
        return Err(usage("stop criteria must be positive"));
    }
    let points = sweep(&code, &grid, a.iters, stop, a.seed, a.workers)?;
    let mut w = sink(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => write_csv(&mut *w, config, SimResult::CSV_HEADER, points.iter().map(SimResult::to_csv))?,
        Format::Json => write_json(
            &mut *w,
            config,
            &SimulateReport {
                n: code.n(),
                dv: code.dv(),
                dc: code.dc(),
                q: a.q,
                points: &points,
            },
        )?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Scalar {
    q: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate: Option<f64>,
    value: f64,
}

fn write_scalar(config: &Command, out: &crate::OutputArgs, s: &Scalar, header: &str, row: String) -> Outcome {
    let mut w = sink(out.out.as_deref())?;
    match out.format {
        Format::Csv => write_csv(&mut *w, config, header, [row])?,
        Format::Json => write_json(&mut *w, config, s)?,
    }
    Ok(())
}

fn check_q(q: usize) -> Result<(), Failure> {
    FieldSpec::with_order(q).map(|_| ()).map_err(Failure::from)
}

pub fn capacity(config: &Command, a: &CapacityArgs) -> Outcome {
    check_q(a.q)?;
    let max = smp_core::channel::uniform_error(a.q);
    if !(0.0..=max).contains(&a.eps) {
        return Err(usage(format!("--eps must lie in [0, {max}]")));
    }
    let value = smp_core::capacity(a.q, a.eps);
    let s = Scalar {
        q: a.q,
        eps: Some(a.eps),
        rate: None,
        value,
    };
    write_scalar(config, &a.output, &s, "q,eps,capacity", format!("{},{},{:.12}", a.q, a.eps, value))
}

pub fn shannon(config: &Command, a: &ShannonArgs) -> Outcome {
    check_q(a.q)?;
    if !(a.rate > 0.0 && a.rate < 1.0) {
        return Err(usage("--rate must lie in (0, 1)"));
    }
    let value = shannon_limit(a.q, a.rate)?;
    let s = Scalar {
        q: a.q,
        eps: None,
        rate: Some(a.rate),
        value,
    };
    write_scalar(config, &a.output, &s, "q,rate,eps_shannon", format!("{},{},{:.12}", a.q, a.rate, value))
}

pub fn codegen(a: &CodegenArgs) -> Outcome {
    Ensemble::new(a.dv, a.dc, a.q)?;
    let code = CodeGraph::sample(a.n, a.dv, a.dc, field(a.q)?, a.seed)?;
    let w = sink(a.out.as_deref())?;
    code.save(w)?;
    Ok(())
}
