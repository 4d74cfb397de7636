//! Config file loading and mode-range parsing.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use spectra_core::{EquationSystem64, SliceOptions64, ValidationPolicy};

/// Parses `--n` values: an inclusive range `a..b` or a comma list `1,3,10`.
pub fn parse_modes(spec: &str) -> Result<Vec<u32>> {
    let spec = spec.trim();
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u32 = lo.trim().parse().context("range start is not an integer")?;
        let hi: u32 = hi.trim().parse().context("range end is not an integer")?;
        if lo == 0 {
            bail!("mode indices start at 1");
        }
        if hi < lo {
            bail!("empty mode range {lo}..{hi}");
        }
        return Ok((lo..=hi).collect());
    }
    let modes: Vec<u32> = spec
        .split(',')
        .map(|part| part.trim().parse::<u32>())
        .collect::<std::result::Result<_, _>>()
        .context("mode list entries must be integers")?;
    if modes.is_empty() || modes.contains(&0) {
        bail!("mode list must be nonempty with indices starting at 1");
    }
    Ok(modes)
}

/// Loads and validates a system description from a JSON file.
pub fn load_system(path: &Path) -> Result<EquationSystem64> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read system file {}", path.display()))?;
    let sys: EquationSystem64 =
        serde_json::from_str(&text).context("system JSON failed to parse")?;
    // Power laws break the standing finite-mass assumptions on purpose
    // (asymptotic model), so validate at the relaxed level here and let the
    // individual commands enforce anything stricter.
    sys.validate(ValidationPolicy::AsymptoticModel)
        .map_err(|e| anyhow!("invalid measure: {e}"))?;
    Ok(sys)
}

pub fn slice_options(tol: Option<f64>, im_tol: Option<f64>, max_iter: Option<usize>) -> Result<SliceOptions64> {
    let mut opts = SliceOptions64::default();
    if let Some(t) = tol {
        if !(t > 0.0) {
            bail!("--tol must be positive");
        }
        opts.root_tol = t;
    }
    if let Some(t) = im_tol {
        if !(t > 0.0) {
            bail!("--im-tol must be positive");
        }
        opts.im_tol = t;
    }
    if let Some(m) = max_iter {
        if m == 0 {
            bail!("--max-iter must be positive");
        }
        opts.dw_max_iter = m;
    }
    Ok(opts)
}
