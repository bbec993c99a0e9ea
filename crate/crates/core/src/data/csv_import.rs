//! Plain-text import for small datasets.
//!
//! Descriptor file: one descriptor per line, `sample_id,x_1,...,x_d`. Lines of
//! one sample must be consecutive; `#` starts a comment line and a leading
//! line whose second field is not numeric is taken as a header.
//!
//! Label file: `sample_id,class` with a zero-based integer class, one line per
//! sample. Labels become one-hot responses.

use std::collections::HashMap;
use std::path::Path;

use nalgebra::DMatrix;

use super::{one_hot, DataError, DescriptorDataset};

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>, DataError> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| DataError::Csv(format!("{}: {e}", path.display())))
}

/// Reads descriptors (and optionally labels). Returns the dataset and the
/// sample ids in partition order.
pub fn read_descriptor_csv(
    path: impl AsRef<Path>,
    labels: Option<&Path>,
) -> Result<(DescriptorDataset, Vec<String>), DataError> {
    let path = path.as_ref();
    let mut ids: Vec<String> = Vec::new();
    let mut partition: Vec<usize> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut dim: Option<usize> = None;

    for (line, record) in reader(path)?.records().enumerate() {
        let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
        if record.len() < 2 {
            return Err(DataError::Csv(format!("line {}: expected id and values", line + 1)));
        }
        let parsed: Result<Vec<f64>, _> = record.iter().skip(1).map(str::parse::<f64>).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if line == 0 => continue,
            Err(e) => return Err(DataError::Csv(format!("line {}: {e}", line + 1))),
        };
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(DataError::Csv(format!(
                    "line {}: {} values, expected {d}",
                    line + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        let id = &record[0];
        if ids.last().map(String::as_str) == Some(id) {
            *partition.last_mut().unwrap() += 1;
        } else {
            if ids.iter().any(|s| s == id) {
                return Err(DataError::Csv(format!(
                    "line {}: descriptors of sample {id:?} are not consecutive",
                    line + 1
                )));
            }
            ids.push(id.to_string());
            partition.push(1);
        }
        values.extend(row);
    }
    let d = dim.ok_or_else(|| DataError::Csv(format!("{}: no descriptors", path.display())))?;
    let n = values.len() / d;
    let x = DMatrix::from_vec(d, n, values);

    let responses = match labels {
        Some(p) => {
            let table: HashMap<String, usize> = read_label_csv(p)?.into_iter().collect();
            let mut labels = Vec::with_capacity(ids.len());
            for id in &ids {
                let l = table
                    .get(id)
                    .ok_or_else(|| DataError::Csv(format!("no label for sample {id:?}")))?;
                labels.push(*l);
            }
            let classes = labels.iter().max().map_or(0, |m| m + 1);
            Some(one_hot(&labels, classes))
        }
        None => None,
    };
    let ds = DescriptorDataset::new(x, partition, responses, None)?;
    Ok((ds, ids))
}

/// Reads `sample_id,class` pairs.
pub fn read_label_csv(path: impl AsRef<Path>) -> Result<Vec<(String, usize)>, DataError> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for (line, record) in reader(path)?.records().enumerate() {
        let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
        if record.len() != 2 {
            return Err(DataError::Csv(format!("line {}: expected id,class", line + 1)));
        }
        match record[1].parse::<usize>() {
            Ok(c) => out.push((record[0].to_string(), c)),
            Err(_) if line == 0 => continue,
            Err(e) => return Err(DataError::Csv(format!("line {}: {e}", line + 1))),
        }
    }
    Ok(out)
}
