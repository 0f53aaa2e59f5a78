//! Grid sampling of a surface, masking of singular nodes, OBJ and CSV output.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use nalgebra::Vector3;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::ComplexScalar;
use crate::rotation::{x_ab, RotationParams};
use crate::weierstrass::{evaluate, CoreError, GeneratorPair, SurfaceJet, Thresholds};

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no valid node in the grid")]
    EmptyMesh,
}

/// Rectangular parameter grid, inclusive of both ends on each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub u1_min: f64,
    pub u1_max: f64,
    pub u2_min: f64,
    pub u2_max: f64,
    pub n1: usize,
    pub n2: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), SampleError> {
        let finite = [self.u1_min, self.u1_max, self.u2_min, self.u2_max].iter().all(|x| x.is_finite());
        if !finite || !(self.u1_min < self.u1_max) || !(self.u2_min < self.u2_max) {
            return Err(SampleError::InvalidGrid(format!("bounds must be finite with min < max: {self:?}")));
        }
        if self.n1 < 2 || self.n2 < 2 {
            return Err(SampleError::InvalidGrid(format!(
                "need at least 2 nodes per axis, got {}x{}",
                self.n1, self.n2
            )));
        }
        Ok(())
    }

    pub fn u1(&self, i: usize) -> f64 {
        lerp(self.u1_min, self.u1_max, i, self.n1)
    }

    pub fn u2(&self, j: usize) -> f64 {
        lerp(self.u2_min, self.u2_max, j, self.n2)
    }

    /// Node index of `(i, j)`; `u1` varies slowest.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn lerp(lo: f64, hi: f64, k: usize, n: usize) -> f64 {
    if k + 1 == n {
        hi
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

/// What to sample.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSource {
    Generators(GeneratorPair),
    /// Positions from `X_{a,b}`; all other quantities from `f = a z + b`, `g = e^z`.
    Rotation(RotationParams),
}

impl SurfaceSource {
    fn pair(&self) -> GeneratorPair {
        match self {
            SurfaceSource::Generators(gen) => gen.clone(),
            SurfaceSource::Rotation(p) => p.generator_pair(),
        }
    }
}

/// Thresholds for masking nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleThresholds {
    pub core: Thresholds,
    /// Nodes with `|R| / (|T^4 <xi, f'^2 - xi>| + 4 T^2 |f'|^2 |g'|^2 + 16 |g'|^4)`
    /// below this are masked.
    pub min_regularity: f64,
}

impl Default for SampleThresholds {
    fn default() -> Self {
        SampleThresholds { core: Thresholds::default(), min_regularity: 1e-9 }
    }
}

/// Sampled grid. Arrays are indexed by grid node; masked nodes hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshBuffer {
    pub grid: GridSpec,
    pub vertices: Vec<Vector3<f64>>,
    pub normals: Vec<Vector3<f64>>,
    pub valid_mask: Vec<bool>,
    /// Triangles as node indices.
    pub faces: Vec<[usize; 3]>,
}

impl MeshBuffer {
    pub fn valid_count(&self) -> usize {
        self.valid_mask.iter().filter(|&&v| v).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub u1: f64,
    pub u2: f64,
    pub x: Vector3<f64>,
    pub mean: f64,
    pub gauss: f64,
    pub psi: f64,
    pub lambda: f64,
    pub det_v: f64,
    pub residual: f64,
    pub regularity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub mesh: MeshBuffer,
    pub rows: Vec<ReportRow>,
    /// Per node: the evaluated jet, or why the node was masked.
    pub nodes: Vec<Result<SurfaceJet, NodeRejection>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NodeRejection {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("normalized regularity {0:e} below threshold")]
    BelowRegularity(f64),
}

/// `|R|` over the sum of the magnitudes of its three terms, in `[0, 1]`.
pub fn normalized_regularity(jet: &SurfaceJet) -> f64 {
    let df = jet.fj.d1;
    let dg2 = jet.gj.d1.norm_sqr();
    let t2 = jet.t * jet.t;
    let xi_term = t2 * t2 * crate::weierstrass::pairing(jet.xi, df * df - jet.xi);
    let scale = xi_term.abs() + 4.0 * t2 * df.norm_sqr() * dg2 + 16.0 * dg2 * dg2;
    jet.regularity.abs() / scale.max(1e-300)
}

/// Evaluate one node, applying every masking rule.
pub fn evaluate_node(
    gen: &GeneratorPair,
    z: ComplexScalar,
    th: &SampleThresholds,
) -> Result<SurfaceJet, NodeRejection> {
    let jet = evaluate(gen, z, &th.core)?;
    let rho = normalized_regularity(&jet);
    if !(rho >= th.min_regularity) {
        return Err(NodeRejection::BelowRegularity(rho));
    }
    Ok(jet)
}

/// Sample `source` over `grid`. Degenerate or singular nodes are masked; faces
/// are emitted for grid cells whose four nodes are valid and share the sign of
/// `det V` (a sign change means the cell straddles a singular curve).
pub fn sample(source: &SurfaceSource, grid: &GridSpec, th: &SampleThresholds) -> Result<Sample, SampleError> {
    grid.validate()?;
    let gen = source.pair();
    let nodes: Vec<Result<SurfaceJet, NodeRejection>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / grid.n2, k % grid.n2);
            evaluate_node(&gen, ComplexScalar::new(grid.u1(i), grid.u2(j)), th)
        })
        .collect();

    let nan = Vector3::repeat(f64::NAN);
    let mut vertices = Vec::with_capacity(grid.len());
    let mut normals = Vec::with_capacity(grid.len());
    let mut valid_mask = Vec::with_capacity(grid.len());
    let mut rows = Vec::new();
    for node in &nodes {
        match node {
            Ok(jet) => {
                let x = match source {
                    SurfaceSource::Generators(_) => jet.x,
                    SurfaceSource::Rotation(p) => x_ab(*p, jet.z.re, jet.z.im),
                };
                vertices.push(x);
                normals.push(jet.normal);
                valid_mask.push(true);
                rows.push(ReportRow {
                    u1: jet.z.re,
                    u2: jet.z.im,
                    x,
                    mean: jet.mean,
                    gauss: jet.gauss,
                    psi: jet.psi,
                    lambda: jet.lambda,
                    det_v: jet.det_v,
                    residual: jet.residual,
                    regularity: jet.regularity,
                });
            }
            Err(_) => {
                vertices.push(nan);
                normals.push(nan);
                valid_mask.push(false);
            }
        }
    }
    if rows.is_empty() {
        return Err(SampleError::EmptyMesh);
    }

    let sign = |k: usize| nodes[k].as_ref().map(|j| j.det_v > 0.0).ok();
    let mut faces = Vec::new();
    for i in 0..grid.n1 - 1 {
        for j in 0..grid.n2 - 1 {
            let a = grid.index(i, j);
            let b = grid.index(i + 1, j);
            let c = grid.index(i, j + 1);
            let d = grid.index(i + 1, j + 1);
            let s = sign(a);
            if s.is_some() && [b, c, d].iter().all(|&k| sign(k) == s) {
                faces.push([a, b, d]);
                faces.push([a, d, c]);
            }
        }
    }

    Ok(Sample { mesh: MeshBuffer { grid: *grid, vertices, normals, valid_mask, faces }, rows, nodes })
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `v`, `vn` and `f i//i j//j k//k` lines. Only valid nodes are written;
/// face indices are 1-based into that compacted list.
pub fn write_obj_to<W: Write>(mesh: &MeshBuffer, mut out: W) -> io::Result<()> {
    let mut remap = vec![0usize; mesh.valid_mask.len()];
    let mut next = 1;
    for (k, &valid) in mesh.valid_mask.iter().enumerate() {
        if valid {
            remap[k] = next;
            next += 1;
        }
    }
    let triple = |v: &Vector3<f64>| format!("{} {} {}", format_number(v.x), format_number(v.y), format_number(v.z));
    for (v, &valid) in mesh.vertices.iter().zip(&mesh.valid_mask) {
        if valid {
            writeln!(out, "v {}", triple(v))?;
        }
    }
    for (n, &valid) in mesh.normals.iter().zip(&mesh.valid_mask) {
        if valid {
            writeln!(out, "vn {}", triple(n))?;
        }
    }
    for face in &mesh.faces {
        let [a, b, c] = face.map(|k| remap[k]);
        writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}")?;
    }
    out.flush()
}

pub fn write_obj(mesh: &MeshBuffer, path: impl AsRef<Path>) -> io::Result<()> {
    write_obj_to(mesh, BufWriter::new(File::create(path)?))
}

pub const CSV_HEADER: &str = "u1,u2,x,y,z,H,K,psi,lambda,detV,residual,regularity";

pub fn write_csv_to<W: Write>(rows: &[ReportRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let fields =
            [r.u1, r.u2, r.x.x, r.x.y, r.x.z, r.mean, r.gauss, r.psi, r.lambda, r.det_v, r.residual, r.regularity];
        let line: Vec<String> = fields.iter().map(|&v| format_number(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()
}

pub fn write_csv(rows: &[ReportRow], path: impl AsRef<Path>) -> io::Result<()> {
    write_csv_to(rows, BufWriter::new(File::create(path)?))
}
