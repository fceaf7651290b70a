//! JSON interchange for ensembles and moment operators.
//!
//! Layout: complex data is stored as `[re, im]` pairs; matrices are
//! row-major over the full replica space. Floats are written in shortest
//! round-trip form, so save/load is bit-exact.

use numeric_core::{CMatrix, CVector, StateVector, C64};
use serde::{Deserialize, Serialize};

use crate::{Error, MomentOperator, Result, WeightedEnsemble};

const MOMENT_SCHEMA: &str = "moment-operator/v1";
const ENSEMBLE_SCHEMA: &str = "weighted-ensemble/v1";

#[derive(Serialize, Deserialize)]
struct MomentJson {
    schema: String,
    base_dim: usize,
    order: usize,
    data: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleEntryJson {
    weight: f64,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleJson {
    schema: String,
    dim: usize,
    entries: Vec<EnsembleEntryJson>,
}

pub fn moment_to_json(moment: &MomentOperator) -> String {
    let m = moment.matrix();
    let n = m.nrows();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            data.push([z.re, z.im]);
        }
    }
    let doc = MomentJson {
        schema: MOMENT_SCHEMA.to_string(),
        base_dim: moment.base_dim(),
        order: moment.order(),
        data,
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn moment_from_json(text: &str) -> Result<MomentOperator> {
    let doc: MomentJson = serde_json::from_str(text)?;
    if doc.schema != MOMENT_SCHEMA {
        return Err(Error::Malformed(format!(
            "schema {:?}, expected {MOMENT_SCHEMA:?}",
            doc.schema
        )));
    }
    let rdim = doc
        .base_dim
        .checked_pow(doc.order as u32)
        .ok_or_else(|| Error::Malformed("replica dimension overflows".into()))?;
    if doc.data.len() != rdim * rdim {
        return Err(Error::Malformed(format!(
            "matrix data has {} entries, expected {}",
            doc.data.len(),
            rdim * rdim
        )));
    }
    let matrix = CMatrix::from_fn(rdim, rdim, |i, j| {
        let [re, im] = doc.data[i * rdim + j];
        C64::new(re, im)
    });
    MomentOperator::new(matrix, doc.base_dim, doc.order)
}

pub fn ensemble_to_json(ens: &WeightedEnsemble) -> String {
    let entries = ens
        .entries()
        .iter()
        .map(|(w, state)| EnsembleEntryJson {
            weight: *w,
            amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        })
        .collect();
    let doc = EnsembleJson {
        schema: ENSEMBLE_SCHEMA.to_string(),
        dim: ens.dim(),
        entries,
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn ensemble_from_json(text: &str) -> Result<WeightedEnsemble> {
    let doc: EnsembleJson = serde_json::from_str(text)?;
    if doc.schema != ENSEMBLE_SCHEMA {
        return Err(Error::Malformed(format!(
            "schema {:?}, expected {ENSEMBLE_SCHEMA:?}",
            doc.schema
        )));
    }
    let mut entries = Vec::with_capacity(doc.entries.len());
    for entry in doc.entries {
        if entry.amplitudes.len() != doc.dim {
            return Err(Error::Malformed(format!(
                "state has {} amplitudes, expected {}",
                entry.amplitudes.len(),
                doc.dim
            )));
        }
        let v = CVector::from_iterator(
            doc.dim,
            entry.amplitudes.iter().map(|&[re, im]| C64::new(re, im)),
        );
        entries.push((entry.weight, StateVector::new(v)?));
    }
    WeightedEnsemble::new(entries)
}
