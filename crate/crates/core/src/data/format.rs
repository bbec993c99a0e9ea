//! Little-endian binary formats.
//!
//! Dataset (`PLFA`):
//!
//! ```text
//! magic    4 bytes  "PLFA"
//! version  u16
//! d, N, m, c       u32 each (c = 0 without responses)
//! flags    u8       bit0 responses present, bit1 label mask present
//! partition        m × u32
//! descriptors      d × N f64, column-major
//! responses        m × c f64, row-major        (bit0)
//! label mask       m × u8, 0 or 1               (bit1)
//! ```
//!
//! Model (`PLFM`):
//!
//! ```text
//! magic    4 bytes  "PLFM"
//! version  u16
//! d, d̄, c          u32 each
//! f64 × 8  lambda1, lambda2, mu, eps_reweight, tol_inner_row, tol_admm,
//!          tol_outer, final objective
//! u32 × 4  max_inner_row, max_admm, max_outer, seed
//! P        d × d̄ f64, column-major
//! W        d̄ × c f64, row-major
//! flags    u8       bit0 selection block present
//! N, m     u32 each
//! Z        N × d̄ f64, column-major               (bit0)
//! argmax   d̄ × u32                              (bit0)
//! ```

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use super::model::{ModelMeta, ProjectionMatrix, PrototypeModel, Selection, SelectionMatrix};
use super::{validate_dataset, DataError, DatasetParts, DescriptorDataset, Hyperparameters};

pub const DATASET_MAGIC: [u8; 4] = *b"PLFA";
pub const DATASET_FORMAT_VERSION: u16 = 1;
pub const MODEL_MAGIC: [u8; 4] = *b"PLFM";
pub const MODEL_FORMAT_VERSION: u16 = 1;

const FLAG_RESPONSES: u8 = 0b01;
const FLAG_MASK: u8 = 0b10;
const FLAG_SELECTION: u8 = 0b01;

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8], DataError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or(DataError::Truncated { what })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self, what: &'static str) -> Result<u8, DataError> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &'static str) -> Result<u16, DataError> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &'static str) -> Result<u32, DataError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &'static str) -> Result<f64, DataError> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64s(&mut self, count: usize, what: &'static str) -> Result<Vec<f64>, DataError> {
        let bytes = count
            .checked_mul(8)
            .ok_or_else(|| DataError::DimensionOverflow { what: what.into() })?;
        let raw = self.take(bytes, what)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn magic(&mut self, expected: [u8; 4]) -> Result<(), DataError> {
        let found: [u8; 4] = self.take(4, "magic")?.try_into().unwrap();
        if found != expected {
            return Err(DataError::BadMagic { expected, found });
        }
        Ok(())
    }

    fn version(&mut self, expected: u16) -> Result<(), DataError> {
        let found = self.u16("version")?;
        if found != expected {
            return Err(DataError::Version { found, expected });
        }
        Ok(())
    }

    fn finish(&self) -> Result<(), DataError> {
        match self.buf.len() - self.pos {
            0 => Ok(()),
            extra => Err(DataError::TrailingBytes { extra }),
        }
    }
}

fn checked_area(rows: usize, cols: usize, what: &str) -> Result<usize, DataError> {
    rows.checked_mul(cols)
        .filter(|&n| n.checked_mul(8).is_some_and(|b| b <= isize::MAX as usize))
        .ok_or_else(|| DataError::DimensionOverflow {
            what: format!("{what} {rows} x {cols}"),
        })
}

fn to_u32(v: usize, what: &str) -> Result<u32, DataError> {
    u32::try_from(v).map_err(|_| DataError::DimensionOverflow {
        what: format!("{what} = {v} does not fit in u32"),
    })
}

fn put_f64s<'a>(out: &mut Vec<u8>, values: impl IntoIterator<Item = &'a f64>) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

fn put_row_major(out: &mut Vec<u8>, m: &DMatrix<f64>) {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.extend_from_slice(&m[(r, c)].to_le_bytes());
        }
    }
}

/// Serializes a dataset into the `PLFA` byte layout.
pub fn encode_dataset(ds: &DescriptorDataset) -> Result<Vec<u8>, DataError> {
    let (d, n, m) = (ds.dim(), ds.n_descriptors(), ds.n_samples());
    let c = ds.n_outputs();
    let mut out = Vec::with_capacity(27 + 4 * m + 8 * d * n + 8 * m * c + m);
    out.extend_from_slice(&DATASET_MAGIC);
    out.extend_from_slice(&DATASET_FORMAT_VERSION.to_le_bytes());
    for (v, what) in [(d, "d"), (n, "N"), (m, "m"), (c, "c")] {
        out.extend_from_slice(&to_u32(v, what)?.to_le_bytes());
    }
    let mut flags = 0u8;
    if ds.responses().is_some() {
        flags |= FLAG_RESPONSES;
    }
    if ds.label_mask().is_some() {
        flags |= FLAG_MASK;
    }
    out.push(flags);
    for &size in ds.partition() {
        out.extend_from_slice(&to_u32(size, "partition entry")?.to_le_bytes());
    }
    put_f64s(&mut out, ds.descriptors().as_slice());
    if let Some(y) = ds.responses() {
        put_row_major(&mut out, y);
    }
    if let Some(mask) = ds.label_mask() {
        out.extend(mask.iter().map(|&b| b as u8));
    }
    Ok(out)
}

/// Parses the `PLFA` byte layout.
pub fn decode_dataset(bytes: &[u8]) -> Result<DescriptorDataset, DataError> {
    let mut r = Reader::new(bytes);
    r.magic(DATASET_MAGIC)?;
    r.version(DATASET_FORMAT_VERSION)?;
    let d = r.u32("header")? as usize;
    let n = r.u32("header")? as usize;
    let m = r.u32("header")? as usize;
    let c = r.u32("header")? as usize;
    let flags = r.u8("flags")?;
    if flags & !(FLAG_RESPONSES | FLAG_MASK) != 0 {
        return Err(DataError::Format(format!("unknown dataset flags {flags:#04x}")));
    }
    let partition = (0..m)
        .map(|_| r.u32("partition").map(|v| v as usize))
        .collect::<Result<Vec<_>, _>>()?;
    let x_len = checked_area(d, n, "descriptors")?;
    let descriptors = DMatrix::from_vec(d, n, r.f64s(x_len, "descriptors")?);
    let responses = if flags & FLAG_RESPONSES != 0 {
        let len = checked_area(m, c, "responses")?;
        Some(DMatrix::from_row_slice(m, c, &r.f64s(len, "responses")?))
    } else {
        None
    };
    let label_mask = if flags & FLAG_MASK != 0 {
        let raw = r.take(m, "label mask")?;
        let mut mask = Vec::with_capacity(m);
        for &b in raw {
            match b {
                0 => mask.push(false),
                1 => mask.push(true),
                other => return Err(DataError::Format(format!("label mask byte {other} is not 0/1"))),
            }
        }
        Some(mask)
    } else {
        None
    };
    r.finish()?;
    Ok(validate_dataset(DatasetParts {
        descriptors,
        partition,
        responses,
        label_mask,
    })?)
}

pub fn write_descriptor_file(ds: &DescriptorDataset, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let bytes = encode_dataset(ds)?;
    fs::write(path, bytes).map_err(|e| DataError::io(path, e))
}

pub fn read_descriptor_file(path: impl AsRef<Path>) -> Result<DescriptorDataset, DataError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
    decode_dataset(&bytes)
}

/// Serializes a model into the `PLFM` byte layout. No invariant checks.
pub fn encode_model(model: &PrototypeModel) -> Result<Vec<u8>, DataError> {
    let d = model.meta.dim;
    let d_bar = model.d_bar();
    let w = model.projection.as_matrix();
    let c = w.ncols();
    let mut out = Vec::new();
    out.extend_from_slice(&MODEL_MAGIC);
    out.extend_from_slice(&MODEL_FORMAT_VERSION.to_le_bytes());
    for (v, what) in [(d, "d"), (d_bar, "d_bar"), (c, "c")] {
        out.extend_from_slice(&to_u32(v, what)?.to_le_bytes());
    }
    let h = &model.hyper;
    put_f64s(
        &mut out,
        &[
            h.lambda1,
            h.lambda2,
            h.mu,
            h.eps_reweight,
            h.tol_inner_row,
            h.tol_admm,
            h.tol_outer,
            model.final_objective,
        ],
    );
    for v in [h.max_inner_row, h.max_admm, h.max_outer, h.seed] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    put_f64s(&mut out, model.prototype_book.as_slice());
    put_row_major(&mut out, w);
    out.push(if model.selection.is_some() { FLAG_SELECTION } else { 0 });
    out.extend_from_slice(&to_u32(model.meta.n_descriptors, "N")?.to_le_bytes());
    out.extend_from_slice(&to_u32(model.meta.n_samples, "m")?.to_le_bytes());
    if let Some(sel) = &model.selection {
        put_f64s(&mut out, sel.z.as_matrix().as_slice());
        for &a in &sel.argmax {
            out.extend_from_slice(&a.to_le_bytes());
        }
    }
    Ok(out)
}

/// Parses the `PLFM` byte layout. No invariant checks beyond layout.
pub fn decode_model(bytes: &[u8]) -> Result<PrototypeModel, DataError> {
    let mut r = Reader::new(bytes);
    r.magic(MODEL_MAGIC)?;
    r.version(MODEL_FORMAT_VERSION)?;
    let d = r.u32("header")? as usize;
    let d_bar = r.u32("header")? as usize;
    let c = r.u32("header")? as usize;
    let mut f = [0.0; 8];
    for v in f.iter_mut() {
        *v = r.f64("hyperparameters")?;
    }
    let mut u = [0u32; 4];
    for v in u.iter_mut() {
        *v = r.u32("hyperparameters")?;
    }
    let hyper = Hyperparameters {
        lambda1: f[0],
        lambda2: f[1],
        mu: f[2],
        d_bar,
        eps_reweight: f[3],
        tol_inner_row: f[4],
        tol_admm: f[5],
        tol_outer: f[6],
        max_inner_row: u[0],
        max_admm: u[1],
        max_outer: u[2],
        seed: u[3],
    };
    let p_len = checked_area(d, d_bar, "prototype book")?;
    let prototype_book = DMatrix::from_vec(d, d_bar, r.f64s(p_len, "prototype book")?);
    let w_len = checked_area(d_bar, c, "projection")?;
    let w = DMatrix::from_row_slice(d_bar, c, &r.f64s(w_len, "projection")?);
    let flags = r.u8("flags")?;
    if flags & !FLAG_SELECTION != 0 {
        return Err(DataError::Format(format!("unknown model flags {flags:#04x}")));
    }
    let n = r.u32("metadata")? as usize;
    let m = r.u32("metadata")? as usize;
    let selection = if flags & FLAG_SELECTION != 0 {
        let z_len = checked_area(n, d_bar, "selection")?;
        let z = DMatrix::from_vec(n, d_bar, r.f64s(z_len, "selection")?);
        let argmax = (0..d_bar)
            .map(|_| r.u32("argmax"))
            .collect::<Result<Vec<_>, _>>()?;
        Some(Selection {
            z: SelectionMatrix::new_unchecked(z),
            argmax,
        })
    } else {
        None
    };
    r.finish()?;
    Ok(PrototypeModel {
        prototype_book,
        projection: ProjectionMatrix::new(w)?,
        hyper,
        final_objective: f[7],
        selection,
        meta: ModelMeta {
            dim: d,
            n_descriptors: n,
            n_samples: m,
            n_outputs: c,
        },
    })
}

pub fn write_model_file(model: &PrototypeModel, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let bytes = encode_model(model)?;
    fs::write(path, bytes).map_err(|e| DataError::io(path, e))
}

pub fn read_model_file(path: impl AsRef<Path>) -> Result<PrototypeModel, DataError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
    decode_model(&bytes)
}
