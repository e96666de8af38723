use std::fs::File;
use std::io::BufWriter;

use spd_geom::deformed::deformed_distance;
use spd_geom::divergence::{divergence, dual_divergence, DivergenceSpec};
use spd_geom::experiments::{curvature_grid as run_grid, GridConfig};
use spd_geom::kernel::{mean_kernel_scan as run_scan, MeanGrid};
use spd_geom::mixed::{
    me_curvature, me_metric_eval, mpe_distance_commuting, sectional_curvature, MixedEuclideanMetric,
};

use crate::error::CliError;
use crate::input::{parse_map, parse_me, parse_metric, parse_mpe, parse_spd, parse_symmetric};
use crate::output::{bracket_line, significant, write_grid, write_scan};
use crate::{EvalCommand, GridArgs, MetricSource, MixedSource, ScanArgs};

fn create(path: &std::path::Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn curvature_grid(args: GridArgs) -> Result<(), CliError> {
    let base = if args.fast {
        GridConfig::fast()
    } else {
        GridConfig::default()
    };
    let alpha = args.alpha.unwrap_or(base.alpha);
    let cfg = GridConfig {
        alpha,
        beta: args
            .beta
            .unwrap_or(if args.alpha.is_some() { alpha } else { base.beta }),
        dim: args.dim,
        n_matrices: args.matrices.unwrap_or(base.n_matrices),
        n_planes: args.planes.unwrap_or(base.n_planes),
        seed: args.seed,
    };
    cfg.validate()?;
    let cells = run_grid(&cfg)?;
    write_grid(create(&args.out)?, &cells)?;

    let finite = cells.iter().filter(|c| c.kappa_min.is_finite());
    let lo = finite.clone().map(|c| c.kappa_min).fold(f64::INFINITY, f64::min);
    let hi = finite.map(|c| c.kappa_max).fold(f64::NEG_INFINITY, f64::max);
    let skipped: usize = cells.iter().map(|c| c.n_skipped).sum();
    println!("cells: {}", cells.len());
    println!("kappa range: [{}, {}]", significant(lo), significant(hi));
    println!("skipped samples: {skipped}");
    println!("written: {}", args.out.display());
    Ok(())
}

pub fn mean_kernel_scan(args: ScanArgs) -> Result<(), CliError> {
    args.range.validate()?;
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let grid = MeanGrid {
        points: args.points,
        ..MeanGrid::default()
    };
    let report = run_scan(args.range.lo, args.range.hi, args.range.step, &grid)?;
    write_scan(create(&args.out)?, &report)?;
    let passing = report.rows.iter().filter(|r| r.is_mean() == Some(true)).count();
    println!("values: {} ({} mean kernel)", report.rows.len(), passing);
    match bracket_line(&report) {
        Some(line) => println!("{line}"),
        None => println!("no failing-to-passing transition in range"),
    }
    println!("written: {}", args.out.display());
    Ok(())
}

fn mixed_from(mpe: Option<&str>, me: Option<&str>) -> Result<MixedEuclideanMetric, CliError> {
    match (mpe, me) {
        (Some(p), _) => Ok(parse_mpe(p)?.metric()?),
        (_, Some(m)) => parse_me(m),
        _ => Err(CliError::Usage("a metric source is required".into())),
    }
}

fn metric_value(source: &MetricSource, sigma: &str, x: &str, y: &str) -> Result<f64, CliError> {
    let sigma = parse_spd(sigma)?;
    let (x, y) = (parse_symmetric(x)?, parse_symmetric(y)?);
    match &source.metric {
        Some(name) => Ok(parse_metric(name)?.metric_eval(&sigma, &x, &y)?),
        None => Ok(me_metric_eval(
            &mixed_from(source.mpe.as_deref(), source.me.as_deref())?,
            &sigma,
            &x,
            &y,
        )?),
    }
}

fn distance_value(source: &MetricSource, sigma: &str, lambda: &str) -> Result<f64, CliError> {
    let (sigma, lambda) = (parse_spd(sigma)?, parse_spd(lambda)?);
    if let Some(name) = &source.metric {
        return Ok(deformed_distance(&parse_metric(name)?, &sigma, &lambda)?);
    }
    if let Some(pair) = &source.mpe {
        return Ok(mpe_distance_commuting(&parse_mpe(pair)?, &sigma, &lambda)?);
    }
    Err(CliError::Usage(
        "distances are available for flat catalog metrics (--metric) and MPE pairs (--mpe)".into(),
    ))
}

fn curvature_value(
    source: &MixedSource,
    sigma: &str,
    x: &str,
    y: &str,
    zt: Option<(&str, &str)>,
) -> Result<f64, CliError> {
    let m = mixed_from(source.mpe.as_deref(), source.me.as_deref())?;
    let sigma = parse_spd(sigma)?;
    let (x, y) = (parse_symmetric(x)?, parse_symmetric(y)?);
    match zt {
        Some((z, t)) => Ok(me_curvature(
            &m,
            &sigma,
            &x,
            &y,
            &parse_symmetric(z)?,
            &parse_symmetric(t)?,
        )?),
        None => Ok(sectional_curvature(&m, &sigma, &x, &y)?),
    }
}

pub fn eval(cmd: EvalCommand) -> Result<(), CliError> {
    let value = match cmd {
        EvalCommand::Metric { source, sigma, x, y } => metric_value(&source, &sigma, &x, &y)?,
        EvalCommand::Divergence {
            alpha,
            beta,
            uv,
            sigma,
            lambda,
            dual,
        } => {
            let spec = match (alpha, beta, uv) {
                (Some(a), Some(b), None) => DivergenceSpec::ab(a, b),
                (None, None, Some(uv)) => {
                    let parts: Vec<&str> = uv.split(',').collect();
                    let [u, v] = parts.as_slice() else {
                        return Err(CliError::Usage(format!("expected `u,v`, got `{uv}`")));
                    };
                    DivergenceSpec::uv(parse_map(u)?, parse_map(v)?)
                }
                _ => return Err(CliError::Usage("give either --alpha and --beta, or --uv".into())),
            };
            let (s, l) = (parse_spd(&sigma)?, parse_spd(&lambda)?);
            if dual {
                dual_divergence(&spec, &s, &l)?
            } else {
                divergence(&spec, &s, &l)?
            }
        }
        EvalCommand::Distance { source, sigma, lambda } => distance_value(&source, &sigma, &lambda)?,
        EvalCommand::Curvature {
            source,
            sigma,
            x,
            y,
            z,
            t,
        } => {
            let zt = z.as_deref().zip(t.as_deref());
            curvature_value(&source, &sigma, &x, &y, zt)?
        }
    };
    println!("{}", significant(value));
    Ok(())
}
