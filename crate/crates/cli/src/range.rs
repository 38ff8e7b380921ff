use anyhow::{bail, Context, Result};

/// Parses `N`, `A..B` or `A..=B`; both range forms include `B`.
pub fn parse_dim_range(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let (a, b) = match s.split_once("..") {
        None => {
            let d = s.parse().with_context(|| format!("bad dimension {s:?}"))?;
            (d, d)
        }
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let a: usize = a.trim().parse().with_context(|| format!("bad range start in {s:?}"))?;
            let b: usize = b.trim().parse().with_context(|| format!("bad range end in {s:?}"))?;
            (a, b)
        }
    };
    if a > b {
        bail!("empty dimension range {s:?}");
    }
    Ok((a..=b).collect())
}
