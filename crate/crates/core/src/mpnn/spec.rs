use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::{init_gc_meanpool, init_gin_meanpool, AffineStage, Family, MpnnModel, UpdateLayer};
use crate::error::{DidmError, Result};

/// JSON description of a randomly initialised model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub family: Family,
    pub layers: usize,
    pub hidden: usize,
    pub attr_dim: usize,
    pub out_dim: usize,
    pub seed: u64,
}

impl ModelSpec {
    pub fn build(&self) -> Result<MpnnModel> {
        match self.family {
            Family::GinMeanpool => init_gin_meanpool(self.layers, self.hidden, self.attr_dim, self.out_dim, self.seed),
            Family::GcMeanpool => init_gc_meanpool(self.layers, self.hidden, self.attr_dim, self.out_dim, self.seed),
            Family::Custom => Err(DidmError::InvalidArgument(
                "custom models are assembled in code, not from a spec".into(),
            )),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| DidmError::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| DidmError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            DidmError::Parse { location, message } => DidmError::parse(format!("{}: {location}", path.display()), message),
            other => other,
        })
    }
}

const MAGIC: &[u8; 8] = b"DIDMW001";

fn all_stages(model: &MpnnModel) -> impl Iterator<Item = &AffineStage> {
    model.layers().iter().chain([model.readout()]).flat_map(|l| l.stages())
}

/// Writes every weight and bias as little-endian `f64`, layer by layer, after a header
/// of stage shapes.
pub fn save_weights(model: &MpnnModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let stages: Vec<&AffineStage> = all_stages(model).collect();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(stages.len() as u64).to_le_bytes());
    for st in &stages {
        out.extend_from_slice(&(st.out_dim() as u64).to_le_bytes());
        out.extend_from_slice(&(st.in_dim() as u64).to_le_bytes());
    }
    for st in &stages {
        for v in st.weight.iter().chain(st.bias.iter()) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    fs::write(path, out).map_err(|e| DidmError::io(path, e))
}

/// Rebuilds the architecture of `spec` and replaces its parameters with those stored
/// at `path`.
pub fn load_weights(spec: &ModelSpec, path: impl AsRef<Path>) -> Result<MpnnModel> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| DidmError::io(path, e))?;
    let bad = |msg: &str| DidmError::parse(path.display().to_string(), msg.to_string());
    let mut words = bytes.get(MAGIC.len()..).ok_or_else(|| bad("truncated header"))?.chunks_exact(8);
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(bad("not a weight file"));
    }
    let mut next = || words.next().map(|w| <[u8; 8]>::try_from(w).unwrap()).ok_or_else(|| bad("truncated"));
    let template = spec.build()?;
    let count = u64::from_le_bytes(next()?) as usize;
    let shapes: Vec<(usize, usize)> = all_stages(&template).map(|s| s.weight.dim()).collect();
    if count != shapes.len() {
        return Err(bad("stage count does not match the model spec"));
    }
    for &(rows, cols) in &shapes {
        let stored = (u64::from_le_bytes(next()?) as usize, u64::from_le_bytes(next()?) as usize);
        if stored != (rows, cols) {
            return Err(bad("stage shape does not match the model spec"));
        }
    }
    let mut rebuild = |layer: &UpdateLayer| -> Result<UpdateLayer> {
        let stages = layer
            .stages()
            .iter()
            .map(|st| {
                let (rows, cols) = st.weight.dim();
                let w: Vec<f64> = (0..rows * cols).map(|_| next().map(f64::from_le_bytes)).collect::<Result<_>>()?;
                let b: Vec<f64> = (0..rows).map(|_| next().map(f64::from_le_bytes)).collect::<Result<_>>()?;
                AffineStage::new(
                    Array2::from_shape_vec((rows, cols), w).expect("sized above"),
                    Array1::from(b),
                    st.activation,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        UpdateLayer::new(layer.combine(), layer.in_dim(), stages, layer.residual())
    };
    let layers = template.layers().iter().map(&mut rebuild).collect::<Result<Vec<_>>>()?;
    let readout = rebuild(template.readout())?;
    MpnnModel::new(layers, readout, template.family(), template.seed())
}
