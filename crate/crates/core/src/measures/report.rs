use super::{
    block_sensitivity, decision_tree_depth, exact_degree, fractional_block_sensitivity, sensitivity,
    BlockFamily, MeasureLimits,
};
use crate::error::Result;
use crate::func::PartialFn;
use serde::Serialize;

/// Measures of one function with their witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub name: String,
    pub n: usize,
    pub s: usize,
    pub s_input: usize,
    pub bs: usize,
    pub bs_witness: BlockFamily,
    pub fbs: f64,
    pub fbs_witness: BlockFamily,
    /// Exact degree; total functions only.
    pub deg: Option<usize>,
    #[serde(rename = "D")]
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adeg: Option<usize>,
}

impl MeasureReport {
    pub const CSV_HEADER: &'static str = "name,n,s,bs,fbs,deg,D";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{},{}",
            self.name,
            self.n,
            self.s,
            self.bs,
            self.fbs,
            self.deg.map_or(String::new(), |d| d.to_string()),
            self.depth
        )
    }

    pub fn ordered(&self) -> bool {
        self.s <= self.bs && (self.bs as f64) <= self.fbs + 1e-9
    }
}

pub fn measure_report(name: &str, f: &PartialFn, limits: MeasureLimits) -> Result<MeasureReport> {
    let s = sensitivity(f);
    let bs = block_sensitivity(f, limits)?;
    let fbs = fractional_block_sensitivity(f, limits)?;
    Ok(MeasureReport {
        name: name.to_string(),
        n: f.arity(),
        s: s.value,
        s_input: s.input,
        bs: bs.value.blocks.len(),
        bs_witness: bs.value,
        fbs: fbs.value.value,
        fbs_witness: fbs.value.family,
        deg: f.to_total().map(|t| exact_degree(&t)),
        depth: decision_tree_depth(f, limits)?,
        adeg: None,
    })
}
