use rayon::prelude::*;

use super::{fmt_f64, pearson, write_table};
use crate::error::{DidmError, Result};
use crate::graph_model::Dataset;
use crate::metric::{didm_distance, thread_pool};
use crate::mpnn::{output_distance, MpnnModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRow {
    pub graph: usize,
    pub delta: f64,
    pub output_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub anchor: usize,
    pub rows: Vec<CorrelationRow>,
    pub pearson: f64,
}

impl CorrelationReport {
    pub fn write_csv(&self, path: &std::path::Path, config: &str) -> Result<()> {
        let comments = vec![format!("anchor: {}", self.anchor), format!("pearson_r: {}", fmt_f64(self.pearson))];
        let rows = self
            .rows
            .iter()
            .map(|r| format!("{},{},{}", r.graph, fmt_f64(r.delta), fmt_f64(r.output_distance)));
        write_table(path, config, &comments, "graph,delta,output_distance", rows)
    }
}

/// DIDM distance and model output distance from one anchor graph to every graph.
pub fn dataset_correlation_experiment(
    ds: &Dataset,
    anchor: usize,
    model: &MpnnModel,
    depth: usize,
) -> Result<CorrelationReport> {
    let Some(a) = ds.graphs.get(anchor) else {
        return Err(DidmError::InvalidArgument(format!(
            "anchor index {anchor} out of range for {} graphs",
            ds.len()
        )));
    };
    let anchor_out = model.output(a)?;
    let rows: Vec<CorrelationRow> = thread_pool()?.install(|| {
        ds.graphs
            .par_iter()
            .enumerate()
            .map(|(graph, g)| {
                Ok(CorrelationRow {
                    graph,
                    delta: didm_distance(g, a, depth)?,
                    output_distance: output_distance(&model.output(g)?, &anchor_out),
                })
            })
            .collect::<Result<_>>()
    })?;
    let x: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.output_distance).collect();
    Ok(CorrelationReport { anchor, pearson: pearson(&x, &y), rows })
}
