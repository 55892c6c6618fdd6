//! CSV snapshots: one `# {json}` header line, then `x,u,v,w` rows.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::state::KdvhState;
use crate::error::{check_len, Error, Result};
use crate::sbp::PeriodicGrid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub x_left: f64,
    pub x_right: f64,
    pub n: usize,
    pub tau: f64,
    pub t: f64,
}

pub fn write_snapshot<W: Write>(
    mut out: W,
    grid: &PeriodicGrid,
    s: &KdvhState,
    t: f64,
) -> Result<()> {
    check_len(grid.len(), s.len())?;
    let header = SnapshotHeader {
        x_left: grid.x_left(),
        x_right: grid.x_right(),
        n: grid.len(),
        tau: s.tau,
        t,
    };
    writeln!(out, "# {}", serde_json::to_string(&header)?)?;
    writeln!(out, "x,u,v,w")?;
    for (i, x) in grid.nodes().iter().enumerate() {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", x, s.u[i], s.v[i], s.w[i])?;
    }
    Ok(())
}

pub fn read_snapshot<R: BufRead>(input: R) -> Result<(SnapshotHeader, KdvhState)> {
    let mut lines = input.lines();
    let bad = |m: &str| Error::Io(format!("malformed snapshot: {m}"));
    let first = lines.next().ok_or_else(|| bad("empty"))??;
    let json = first.strip_prefix("# ").ok_or_else(|| bad("missing header"))?;
    let header: SnapshotHeader = serde_json::from_str(json)?;
    lines.next().ok_or_else(|| bad("missing column names"))??;
    let (mut u, mut v, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for line in lines {
        let line = line?;
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|_| bad(&line)))
            .collect::<Result<_>>()?;
        if cols.len() != 4 {
            return Err(bad(&line));
        }
        u.push(cols[1]);
        v.push(cols[2]);
        w.push(cols[3]);
    }
    check_len(header.n, u.len())?;
    let s = KdvhState::new(u, v, w, header.tau)?;
    Ok((header, s))
}
