//! Parsing of matrix, map and metric arguments.

use std::fs;
use std::path::Path;

use spd_geom::deformed::MetricHandle;
use spd_geom::mixed::{MixedEuclideanMetric, MpePair};
use spd_geom::{ScalarFunction, SpdMatrix, SymmetricMatrix};

use crate::error::CliError;

/// Reads a symmetric matrix from one of three spellings:
///
/// * inline rows separated by `;`, entries by `,` (`2,1;1,3`);
/// * an inline list of eigenvalues, read as a diagonal matrix (`1,4`);
/// * a path to a CSV file with one row per line.
pub fn parse_symmetric(arg: &str) -> Result<SymmetricMatrix, CliError> {
    let trimmed = arg.trim();
    if trimmed.contains(';') {
        let rows = trimmed
            .split(';')
            .filter(|r| !r.trim().is_empty())
            .map(parse_row)
            .collect::<Result<Vec<_>, _>>()?;
        return from_rows(&rows, arg);
    }
    if let Ok(diag) = parse_row(trimmed) {
        if !diag.is_empty() {
            return Ok(SymmetricMatrix::diagonal(&diag));
        }
    }
    if Path::new(trimmed).is_file() {
        return read_csv_matrix(Path::new(trimmed));
    }
    Err(CliError::Usage(format!(
        "`{arg}` is neither an inline matrix, an eigenvalue list nor a readable file"
    )))
}

pub fn parse_spd(arg: &str) -> Result<SpdMatrix, CliError> {
    let s = parse_symmetric(arg)?;
    SpdMatrix::new(s).map_err(CliError::Geom)
}

fn parse_row(row: &str) -> Result<Vec<f64>, CliError> {
    row.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("cannot parse `{t}` as a finite number")))
        })
        .collect()
}

fn from_rows(rows: &[Vec<f64>], origin: &str) -> Result<SymmetricMatrix, CliError> {
    SymmetricMatrix::from_rows(rows).map_err(|e| CliError::Usage(format!("matrix `{origin}`: {e}")))
}

fn read_csv_matrix(path: &Path) -> Result<SymmetricMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let joined: Vec<&str> = record.iter().collect();
        rows.push(parse_row(&joined.join(","))?);
    }
    from_rows(&rows, &path.display().to_string())
}

/// `id`, `log`, `exp` or a nonzero power `p` (`0` means `log`).
pub fn parse_map(name: &str) -> Result<ScalarFunction, CliError> {
    match name.trim() {
        "id" | "identity" => Ok(ScalarFunction::identity()),
        "log" => Ok(ScalarFunction::log()),
        "exp" => Ok(ScalarFunction::exp()),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|p| p.is_finite())
            .map(ScalarFunction::power_or_log)
            .ok_or_else(|| CliError::Usage(format!("unknown map `{other}` (expected id, log, exp or a power)"))),
    }
}

pub fn parse_pair(arg: &str) -> Result<(f64, f64), CliError> {
    let v = parse_row(arg)?;
    match v.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!(
            "expected two comma-separated numbers, got `{arg}`"
        ))),
    }
}

pub fn parse_mpe(arg: &str) -> Result<MpePair, CliError> {
    let (a, b) = parse_pair(arg)?;
    Ok(MpePair::new(a, b))
}

pub fn parse_me(arg: &str) -> Result<MixedEuclideanMetric, CliError> {
    let parts: Vec<&str> = arg.split(',').collect();
    let [u, v] = parts.as_slice() else {
        return Err(CliError::Usage(format!("expected `u,v`, got `{arg}`")));
    };
    MixedEuclideanMetric::new(parse_map(u)?, parse_map(v)?).map_err(CliError::Geom)
}

/// Catalog names, or `family:p` for `power-euclidean`, `power-affine`,
/// `power-wasserstein` and `alpha-procrustes`.
pub fn parse_metric(name: &str) -> Result<MetricHandle, CliError> {
    let name = name.trim();
    if let Some((family, p)) = name.split_once(':') {
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("cannot parse the parameter of `{name}`")))?;
        let handle = match family {
            "power-euclidean" => MetricHandle::power_euclidean(p),
            "power-affine" => MetricHandle::power_affine(p),
            "power-wasserstein" => MetricHandle::power_wasserstein(p),
            "alpha-procrustes" => MetricHandle::alpha_procrustes(p),
            _ => return Err(CliError::Usage(format!("unknown metric family `{family}`"))),
        };
        return handle.map_err(CliError::Geom);
    }
    match name {
        "euclidean" => Ok(MetricHandle::euclidean()),
        "log-euclidean" | "le" => Ok(MetricHandle::log_euclidean()),
        "affine-invariant" | "affine" => Ok(MetricHandle::affine_invariant()),
        "bures-wasserstein" | "bw" => Ok(MetricHandle::bures_wasserstein()),
        "bogoliubov-kubo-mori" | "bkm" => Ok(MetricHandle::from_kernel(
            spd_geom::kernel::KernelMap::bogoliubov_kubo_mori(),
        )),
        _ => Err(CliError::Usage(format!("unknown metric `{name}`"))),
    }
}
