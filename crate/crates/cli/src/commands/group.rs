use clap::Args;
use landau_core::maggroup::{self, GroupElement, UnitaryRep};
use landau_core::C64;
use nalgebra::DMatrix;
use serde::Serialize;

use super::{outputs, Outcome};
use crate::settings::{CliError, Settings};

/// Largest nΦ whose full multiplication table is dumped.
pub const MAX_TABLE_NPHI: u32 = 12;

#[derive(Args, Debug, Serialize)]
pub struct GroupArgs {
    /// Skip the multiplication table and conjugacy classes (any nΦ)
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Serialize)]
struct Tables {
    /// `[nx, ny, m]` in lexicographic order; tables refer to these indices
    elements: Vec<[u32; 3]>,
    multiplication_table: Vec<Vec<usize>>,
    conjugacy_classes: Vec<Vec<[u32; 3]>>,
    center_matches_brute_force: bool,
    /// product of cosets labelled `(nx, ny)`, or null if the quotient is not
    /// `Z(nΦ) x Z(nΦ)`
    quotient_table: Option<Vec<Vec<(u32, u32)>>>,
}

#[derive(Serialize)]
struct GroupOutput {
    nphi: u32,
    order: usize,
    center: Vec<[u32; 3]>,
    /// generator matrices as rows of `[re, im]` pairs
    tx: Vec<Vec<[f64; 2]>>,
    ty: Vec<Vec<[f64; 2]>>,
    weyl_deviation: f64,
    unitarity_deviation: f64,
    commutant_dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    tables: Option<Tables>,
}

fn triple(g: &GroupElement) -> [u32; 3] {
    [g.nx(), g.ny(), g.m()]
}

fn rows(m: &DMatrix<C64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

pub fn group(settings: &Settings, args: &GroupArgs) -> Result<Outcome, CliError> {
    let nphi = settings.torus()?.nphi();
    if !args.summary_only && nphi > MAX_TABLE_NPHI {
        return Err(CliError::Failed(format!(
            "nphi = {nphi} is too large for a full table dump (at most {MAX_TABLE_NPHI}); use --summary-only"
        )));
    }
    let rep = UnitaryRep::new(nphi)?;
    let tables = (!args.summary_only).then(|| Tables {
        elements: maggroup::elements(nphi).map(|g| triple(&g)).collect(),
        multiplication_table: maggroup::multiplication_table(nphi),
        conjugacy_classes: maggroup::conjugacy_classes(nphi)
            .iter()
            .map(|c| c.iter().map(triple).collect())
            .collect(),
        center_matches_brute_force: maggroup::center(nphi) == maggroup::center_brute(nphi),
        quotient_table: maggroup::quotient_by_center(nphi),
    });
    let mut output = GroupOutput {
        nphi,
        order: maggroup::order(nphi),
        center: maggroup::center(nphi).iter().map(triple).collect(),
        tx: rows(&rep.tx),
        ty: rows(&rep.ty),
        weyl_deviation: rep.weyl_deviation(),
        unitarity_deviation: rep.unitarity_deviation(),
        commutant_dimension: rep.commutant_dimension(),
        tables,
    };
    let mut out = outputs(settings)?;
    out.write_json("group.json", &output)?;
    out.finish("group", settings, args, vec![])?;
    // the tables can be large; stdout only gets the summary fields
    output.tables = None;
    let summary =
        serde_json::to_string_pretty(&output).map_err(|e| CliError::Failed(e.to_string()))? + "\n";
    Ok(Outcome {
        summary,
        success: true,
    })
}
