//! Single-level 2-D stationary framelet transform and decimated Haar transform.
//!
//! The framelet transform is undecimated: one low-pass and two high-pass
//! 3-tap filters are applied along columns and then rows, giving nine planes
//! the size of the input. Boundaries are periodic and filters are centered
//! (taps at offsets -1, 0, +1), so the synthesis operator is exactly the
//! adjoint of the analysis operator and `inverse(forward(x)) == x`.

use crate::error::{Error, Result};
use crate::image::Image;

const QUARTER: f64 = 0.25;
const HALF: f64 = 0.5;
const SQRT2_4: f64 = std::f64::consts::SQRT_2 / 4.0;

/// Labels of the nine framelet planes. The first symbol names the filter
/// applied along columns (vertical direction), the second the filter along
/// rows. Plane `k` used column filter `k % 3` and row filter `k / 3`.
pub const FRAMELET_LABELS: [&str; 9] = [
    "LL", "H1L", "H2L", "LH1", "H1H1", "H2H1", "LH2", "H1H2", "H2H2",
];

/// Labels of the four Haar planes, same column/row convention.
pub const HAAR_LABELS: [&str; 4] = ["LL", "LH", "HL", "HH"];

/// Analysis/synthesis taps of the 3-channel tight frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterBank {
    pub analysis: [[f64; 3]; 3],
    pub synthesis: [[f64; 3]; 3],
}

impl FilterBank {
    /// Piecewise-linear B-spline framelet.
    pub fn framelet() -> Self {
        FilterBank {
            analysis: [
                [QUARTER, HALF, QUARTER],
                [SQRT2_4, 0.0, -SQRT2_4],
                [-QUARTER, HALF, -QUARTER],
            ],
            synthesis: [
                [QUARTER, HALF, QUARTER],
                [-SQRT2_4, 0.0, SQRT2_4],
                [-QUARTER, HALF, -QUARTER],
            ],
        }
    }

    /// Sum over channels of the full correlation of each analysis filter with
    /// its synthesis filter. Equals the unit impulse `[0, 0, 1, 0, 0]` for a
    /// tight frame.
    pub fn perfect_reconstruction_kernel(&self) -> [f64; 5] {
        let mut out = [0.0; 5];
        for (a, s) in self.analysis.iter().zip(&self.synthesis) {
            // Both stages are centered correlations, so tap pair (i, j)
            // lands at offset i + j - 2.
            for i in 0..3 {
                for j in 0..3 {
                    out[i + j] += a[i] * s[j];
                }
            }
        }
        out
    }
}

impl Default for FilterBank {
    fn default() -> Self {
        Self::framelet()
    }
}

/// Which sparsifying transform backs a [`SubbandSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransformKind {
    /// Stationary framelet, nine full-size planes.
    Sft,
    /// One-level orthonormal Haar, four quarter-size planes.
    Haar,
}

impl TransformKind {
    pub fn forward(self, image: &Image) -> Result<SubbandSet> {
        match self {
            TransformKind::Sft => sft_forward(image),
            TransformKind::Haar => haar_forward(image),
        }
    }

    pub fn inverse(self, subbands: &SubbandSet) -> Result<Image> {
        match self {
            TransformKind::Sft => sft_inverse(subbands),
            TransformKind::Haar => haar_inverse(subbands),
        }
    }

    /// Rejects image shapes the transform cannot handle.
    pub fn check_shape(self, rows: usize, cols: usize) -> Result<()> {
        match self {
            TransformKind::Sft if rows < 3 || cols < 3 => {
                Err(Error::DegenerateDimensions { rows, cols, min: 3 })
            }
            TransformKind::Haar if !rows.is_multiple_of(2) || !cols.is_multiple_of(2) => {
                Err(Error::OddDimensions { rows, cols })
            }
            _ => Ok(()),
        }
    }

    pub fn plane_count(self) -> usize {
        match self {
            TransformKind::Sft => 9,
            TransformKind::Haar => 4,
        }
    }

    pub fn labels(self) -> &'static [&'static str] {
        match self {
            TransformKind::Sft => &FRAMELET_LABELS,
            TransformKind::Haar => &HAAR_LABELS,
        }
    }

    fn plane_shape(self, rows: usize, cols: usize) -> (usize, usize) {
        match self {
            TransformKind::Sft => (rows, cols),
            TransformKind::Haar => (rows / 2, cols / 2),
        }
    }
}

/// Coefficient planes of one image.
#[derive(Clone, Debug, PartialEq)]
pub struct SubbandSet {
    kind: TransformKind,
    source_shape: (usize, usize),
    planes: Vec<Image>,
}

impl SubbandSet {
    /// Assembles a set from explicit planes, validating count and shapes.
    pub fn from_planes(
        kind: TransformKind,
        source_shape: (usize, usize),
        planes: Vec<Image>,
    ) -> Result<Self> {
        kind.check_shape(source_shape.0, source_shape.1)?;
        if planes.len() != kind.plane_count() {
            return Err(Error::invalid(
                "subbands",
                format!(
                    "expected {} planes, got {}",
                    kind.plane_count(),
                    planes.len()
                ),
            ));
        }
        let expected = kind.plane_shape(source_shape.0, source_shape.1);
        for p in &planes {
            if p.shape() != expected {
                return Err(Error::ShapeMismatch {
                    expected,
                    found: p.shape(),
                });
            }
        }
        Ok(SubbandSet {
            kind,
            source_shape,
            planes,
        })
    }

    pub fn zeros(kind: TransformKind, rows: usize, cols: usize) -> Self {
        let (pr, pc) = kind.plane_shape(rows, cols);
        SubbandSet {
            kind,
            source_shape: (rows, cols),
            planes: vec![Image::zeros(pr, pc); kind.plane_count()],
        }
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn source_shape(&self) -> (usize, usize) {
        self.source_shape
    }

    pub fn planes(&self) -> &[Image] {
        &self.planes
    }

    pub fn planes_mut(&mut self) -> &mut [Image] {
        &mut self.planes
    }

    pub fn plane(&self, label: &str) -> Option<&Image> {
        self.kind
            .labels()
            .iter()
            .position(|&l| l == label)
            .map(|i| &self.planes[i])
    }

    pub fn norm_sq(&self) -> f64 {
        self.planes.iter().map(Image::norm_sq).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.planes.iter().all(Image::is_finite)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SubbandSet {
        SubbandSet {
            kind: self.kind,
            source_shape: self.source_shape,
            planes: self.planes.iter().map(|p| p.map(&f)).collect(),
        }
    }

    pub fn zip_map(&self, other: &SubbandSet, f: impl Fn(f64, f64) -> f64) -> SubbandSet {
        self.assert_compatible(other);
        SubbandSet {
            kind: self.kind,
            source_shape: self.source_shape,
            planes: self
                .planes
                .iter()
                .zip(&other.planes)
                .map(|(a, b)| a.zip_map(b, &f))
                .collect(),
        }
    }

    pub fn add(&self, other: &SubbandSet) -> SubbandSet {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SubbandSet) -> SubbandSet {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, k: f64) -> SubbandSet {
        self.map(|v| k * v)
    }

    /// `self += k * other`
    pub fn add_scaled(&mut self, k: f64, other: &SubbandSet) {
        self.assert_compatible(other);
        for (a, b) in self.planes.iter_mut().zip(&other.planes) {
            a.add_scaled(k, b);
        }
    }

    fn assert_compatible(&self, other: &SubbandSet) {
        assert!(
            self.kind == other.kind && self.source_shape == other.source_shape,
            "incompatible subband sets"
        );
    }
}

/// `out[n] = sum_k taps[k] * x[(n + k - 1) mod len]` along each column.
fn correlate_columns(src: &Image, taps: &[f64; 3]) -> Image {
    let (rows, cols) = src.shape();
    let x = src.pixels();
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        let up = (r + rows - 1) % rows;
        let down = (r + 1) % rows;
        let (ru, rc, rd) = (up * cols, r * cols, down * cols);
        for c in 0..cols {
            out[rc + c] = taps[0] * x[ru + c] + taps[1] * x[rc + c] + taps[2] * x[rd + c];
        }
    }
    Image::from_parts(rows, cols, out)
}

/// Same as [`correlate_columns`] along each row.
fn correlate_rows(src: &Image, taps: &[f64; 3]) -> Image {
    let (rows, cols) = src.shape();
    let x = src.pixels();
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        let row = &x[r * cols..(r + 1) * cols];
        let dst = &mut out[r * cols..(r + 1) * cols];
        for c in 0..cols {
            let left = (c + cols - 1) % cols;
            let right = (c + 1) % cols;
            dst[c] = taps[0] * row[left] + taps[1] * row[c] + taps[2] * row[right];
        }
    }
    Image::from_parts(rows, cols, out)
}

/// Forward stationary framelet transform.
pub fn sft_forward(image: &Image) -> Result<SubbandSet> {
    let (rows, cols) = image.shape();
    TransformKind::Sft.check_shape(rows, cols)?;
    let bank = FilterBank::framelet();
    let columns: Vec<Image> = bank
        .analysis
        .iter()
        .map(|taps| correlate_columns(image, taps))
        .collect();
    let mut planes = Vec::with_capacity(9);
    for row_taps in &bank.analysis {
        for col_result in &columns {
            planes.push(correlate_rows(col_result, row_taps));
        }
    }
    Ok(SubbandSet {
        kind: TransformKind::Sft,
        source_shape: (rows, cols),
        planes,
    })
}

/// Inverse stationary framelet transform (adjoint of [`sft_forward`]).
pub fn sft_inverse(subbands: &SubbandSet) -> Result<Image> {
    if subbands.kind != TransformKind::Sft {
        return Err(Error::invalid("subbands", "expected framelet planes"));
    }
    let (rows, cols) = subbands.source_shape;
    TransformKind::Sft.check_shape(rows, cols)?;
    for p in &subbands.planes {
        if p.shape() != (rows, cols) {
            return Err(Error::ShapeMismatch {
                expected: (rows, cols),
                found: p.shape(),
            });
        }
    }
    let bank = FilterBank::framelet();
    let mut out = Image::zeros(rows, cols);
    for (col_index, col_taps) in bank.synthesis.iter().enumerate() {
        let mut merged = Image::zeros(rows, cols);
        for (row_index, row_taps) in bank.synthesis.iter().enumerate() {
            let plane = &subbands.planes[row_index * 3 + col_index];
            merged.add_scaled(1.0, &correlate_rows(plane, row_taps));
        }
        out.add_scaled(1.0, &correlate_columns(&merged, col_taps));
    }
    Ok(out)
}

/// One-level orthonormal Haar analysis on 2x2 blocks.
///
/// For a block `[[a, b], [c, d]]`: `LL = (a+b+c+d)/2`, `LH = (a+b-c-d)/2`,
/// `HL = (a-b+c-d)/2`, `HH = (a-b-c+d)/2`.
pub fn haar_forward(image: &Image) -> Result<SubbandSet> {
    let (rows, cols) = image.shape();
    TransformKind::Haar.check_shape(rows, cols)?;
    let (hr, hc) = (rows / 2, cols / 2);
    let mut planes = vec![vec![0.0; hr * hc]; 4];
    for r in 0..hr {
        for c in 0..hc {
            let a = image.get(2 * r, 2 * c);
            let b = image.get(2 * r, 2 * c + 1);
            let cc = image.get(2 * r + 1, 2 * c);
            let d = image.get(2 * r + 1, 2 * c + 1);
            let k = r * hc + c;
            planes[0][k] = HALF * (a + b + cc + d);
            planes[1][k] = HALF * (a + b - cc - d);
            planes[2][k] = HALF * (a - b + cc - d);
            planes[3][k] = HALF * (a - b - cc + d);
        }
    }
    let planes = planes
        .into_iter()
        .map(|p| Image::from_parts(hr, hc, p))
        .collect();
    Ok(SubbandSet {
        kind: TransformKind::Haar,
        source_shape: (rows, cols),
        planes,
    })
}

/// Inverse of [`haar_forward`].
pub fn haar_inverse(subbands: &SubbandSet) -> Result<Image> {
    if subbands.kind != TransformKind::Haar {
        return Err(Error::invalid("subbands", "expected Haar planes"));
    }
    let (rows, cols) = subbands.source_shape;
    TransformKind::Haar.check_shape(rows, cols)?;
    let (hr, hc) = (rows / 2, cols / 2);
    for p in &subbands.planes {
        if p.shape() != (hr, hc) {
            return Err(Error::ShapeMismatch {
                expected: (hr, hc),
                found: p.shape(),
            });
        }
    }
    let [ll, lh, hl, hh] = [0, 1, 2, 3].map(|i| subbands.planes[i].pixels());
    let mut out = Image::zeros(rows, cols);
    for r in 0..hr {
        for c in 0..hc {
            let k = r * hc + c;
            out.set(2 * r, 2 * c, HALF * (ll[k] + lh[k] + hl[k] + hh[k]));
            out.set(2 * r, 2 * c + 1, HALF * (ll[k] + lh[k] - hl[k] - hh[k]));
            out.set(2 * r + 1, 2 * c, HALF * (ll[k] - lh[k] + hl[k] - hh[k]));
            out.set(2 * r + 1, 2 * c + 1, HALF * (ll[k] - lh[k] - hl[k] + hh[k]));
        }
    }
    Ok(out)
}
