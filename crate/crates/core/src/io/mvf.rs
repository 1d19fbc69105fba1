//! `MVF1` container: magic, little-endian u32 header length, JSON header,
//! then little-endian f64 samples, pixel after pixel.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{Image, Shape};
use crate::manifold::{Manifold, ManifoldKind};

pub const MVF_MAGIC: &[u8; 4] = b"MVF1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    manifold: String,
    shape: Vec<usize>,
    element_len: usize,
    dtype: String,
}

/// An image as stored on disk: manifold tag, shape and flat coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RawMvf {
    pub kind: ManifoldKind,
    pub shape: Shape,
    pub data: Vec<f64>,
}

impl RawMvf {
    pub fn new(kind: ManifoldKind, shape: Shape, data: Vec<f64>) -> Result<Self> {
        let want = kind.element_len() * shape.len();
        if data.len() != want {
            return Err(Error::Format(format!(
                "{} image of shape {shape} needs {want} values, got {}",
                kind,
                data.len()
            )));
        }
        Ok(Self { kind, shape, data })
    }

    pub fn from_image<M: Manifold>(m: &M, img: &Image<M::Point>) -> Self {
        let mut data = Vec::with_capacity(m.element_len() * img.len());
        for p in img.pixels() {
            m.write_coords(p, &mut data);
        }
        Self { kind: m.kind(), shape: img.shape(), data }
    }

    pub fn element_len(&self) -> usize {
        self.kind.element_len()
    }

    pub fn pixel(&self, i: usize) -> &[f64] {
        let k = self.element_len();
        &self.data[i * k..(i + 1) * k]
    }

    /// Decodes and validates every pixel as a point of `m`.
    pub fn to_image<M: Manifold>(&self, m: &M) -> Result<Image<M::Point>> {
        if self.kind != m.kind() {
            return Err(Error::Format(format!(
                "file holds a {} image, expected {}",
                self.kind,
                m.kind()
            )));
        }
        let points = (0..self.shape.len())
            .map(|i| {
                let p = m.read_coords(self.pixel(i));
                m.check_point(&p).map_err(|reason| Error::Invariant {
                    manifold: self.kind.tag(),
                    pixel: i,
                    reason,
                })?;
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Image::new(self.shape, points)
    }

    /// Checks the point invariants of every pixel.
    pub fn validate(&self) -> Result<()> {
        crate::with_manifold!(&self.kind, m => self.to_image(&m).map(|_| ()))
    }

    pub fn encode(&self) -> Vec<u8> {
        let header = Header {
            manifold: self.kind.tag(),
            shape: self.shape.dims(),
            element_len: self.element_len(),
            dtype: "f64".into(),
        };
        let json = serde_json::to_vec(&header).expect("header serializes");
        let mut out = Vec::with_capacity(8 + json.len() + 8 * self.data.len());
        out.extend_from_slice(MVF_MAGIC);
        out.extend_from_slice(&(json.len() as u32).to_le_bytes());
        out.extend_from_slice(&json);
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    /// Parses the container without validating point invariants.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 {
            return Err(Error::Format("file shorter than the MVF preamble".into()));
        }
        if &bytes[..4] != MVF_MAGIC {
            return Err(Error::Format(format!("bad magic {:?}", String::from_utf8_lossy(&bytes[..4]))));
        }
        let header_len = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let body = &bytes[8..];
        if body.len() < header_len {
            return Err(Error::Format("truncated header".into()));
        }
        let header: Header = serde_json::from_slice(&body[..header_len])
            .map_err(|e| Error::Format(format!("bad header: {e}")))?;
        if header.dtype != "f64" {
            return Err(Error::Format(format!("unsupported dtype {:?}", header.dtype)));
        }
        let kind = ManifoldKind::from_tag(&header.manifold)?;
        if header.element_len != kind.element_len() {
            return Err(Error::Format(format!(
                "element_len {} does not match manifold {} ({})",
                header.element_len,
                kind,
                kind.element_len()
            )));
        }
        let shape = Shape::from_dims(&header.shape)?;
        let payload = &body[header_len..];
        let want = 8 * kind.element_len() * shape.len();
        if payload.len() != want {
            return Err(Error::Format(format!(
                "payload has {} bytes, header implies {want}",
                payload.len()
            )));
        }
        let data = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self { kind, shape, data })
    }
}

pub fn write_mvf(path: impl AsRef<Path>, raw: &RawMvf) -> Result<()> {
    fs::write(path, raw.encode())?;
    Ok(())
}

/// Reads a container and validates every pixel.
pub fn read_mvf(path: impl AsRef<Path>) -> Result<RawMvf> {
    let raw = RawMvf::decode(&fs::read(path)?)?;
    raw.validate()?;
    Ok(raw)
}

pub fn write_image<M: Manifold>(m: &M, img: &Image<M::Point>, path: impl AsRef<Path>) -> Result<()> {
    write_mvf(path, &RawMvf::from_image(m, img))
}

pub fn read_image<M: Manifold>(m: &M, path: impl AsRef<Path>) -> Result<Image<M::Point>> {
    RawMvf::decode(&fs::read(path)?)?.to_image(m)
}
