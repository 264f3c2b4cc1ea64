//! Encoder output post-processing: raw 3600-value vector → grayscale →
//! 3×3 dilation → threshold → overlap with the scene.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::codec::{gray_to_png, CodecError};
use crate::grid::{AnswerPath, Coord, GrayImage, Grid, PathMask, Scene, CELLS, SIDE};
pub use crate::planner::overlap;

pub const DEFAULT_THRESHOLD: u8 = 50;
const MASK_HEADER: &str = "MASKV1 60 60";

#[derive(Debug, thiserror::Error)]
pub enum MaskError {
    #[error("mask value at index {0} is outside [-1, 1]")]
    OutOfRange(usize),
    #[error("mask vector has {0} values, expected 3600")]
    WrongLength(usize),
    #[error("no mask file for scene {index} (looked for {path})")]
    MissingMaskFile { index: u32, path: PathBuf },
    #[error("{path}: line {line}, token {token}: {reason}")]
    MalformedMaskFile {
        path: PathBuf,
        line: usize,
        token: usize,
        reason: String,
    },
    #[error("oracle predictor needs the answer path")]
    MissingAnswer,
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// 3600 row-major values in [-1, 1]: the encoder's tanh output.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskVector {
    values: Vec<f64>,
}

impl MaskVector {
    pub fn new(values: Vec<f64>) -> Result<Self, MaskError> {
        if values.len() != CELLS {
            return Err(MaskError::WrongLength(values.len()));
        }
        if let Some(i) = values.iter().position(|v| !(-1.0..=1.0).contains(v)) {
            return Err(MaskError::OutOfRange(i));
        }
        Ok(MaskVector { values })
    }

    pub fn filled(value: f64) -> Result<Self, MaskError> {
        MaskVector::new(vec![value; CELLS])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Step 1: `round_half_away_from_zero((v + 1) * 127.5)`, reshaped row-major.
pub fn vector_to_gray(v: &MaskVector) -> GrayImage {
    GrayImage::from_fn(|c| ((v.values[c.index()] + 1.0) * 127.5).round() as u8)
}

/// Step 2: grayscale dilation, the max over each clipped 3×3 window.
pub fn dilate_3x3(img: &GrayImage) -> GrayImage {
    // Separable max: rows first, then columns.
    let mut horiz = GrayImage::filled(0);
    for r in 0..SIDE {
        for c in 0..SIDE {
            let lo = c.saturating_sub(1);
            let hi = (c + 1).min(SIDE - 1);
            let m = (lo..=hi).map(|cc| img.get(Coord::new(r, cc))).max().unwrap();
            horiz.set(Coord::new(r, c), m);
        }
    }
    GrayImage::from_fn(|Coord { row, col }| {
        let lo = row.saturating_sub(1);
        let hi = (row + 1).min(SIDE - 1);
        (lo..=hi).map(|rr| horiz.get(Coord::new(rr, col))).max().unwrap()
    })
}

/// Step 3: `allowed = pixel > threshold`.
pub fn binarize(img: &GrayImage, threshold: u8) -> PathMask {
    PathMask::from_grid(Grid::from_fn(|c| img.get(c) > threshold))
}

/// Intermediate images of steps 1–3.
#[derive(Debug, Clone, PartialEq)]
pub struct Stages {
    pub gray: GrayImage,
    pub dilated: GrayImage,
    pub mask: PathMask,
}

pub fn process_stages(v: &MaskVector) -> Stages {
    let gray = vector_to_gray(v);
    let dilated = dilate_3x3(&gray);
    let mask = binarize(&dilated, DEFAULT_THRESHOLD);
    Stages {
        gray,
        dilated,
        mask,
    }
}

/// Steps 1–3 in order.
pub fn process_vector(v: &MaskVector) -> PathMask {
    process_stages(v).mask
}

/// Writes `gray.png`, `dilated.png`, `binary.png`, and `overlap.png`
/// (traversable cells after step 4, white) into `dir`.
pub fn dump_stages(stages: &Stages, scene: &Scene, dir: &Path) -> Result<(), MaskError> {
    std::fs::create_dir_all(dir).map_err(|source| MaskError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let space = overlap(scene, &stages.mask);
    let overlapped = GrayImage::from_fn(|c| if space.is_traversable(c) { 255 } else { 0 });
    let images = [
        ("gray.png", &stages.gray),
        ("dilated.png", &stages.dilated),
        ("binary.png", &stages.mask.to_gray()),
        ("overlap.png", &overlapped),
    ];
    for (name, img) in images {
        let path = dir.join(name);
        let bytes = gray_to_png(img)?;
        std::fs::write(&path, bytes).map_err(|source| MaskError::Io { path, source })?;
    }
    Ok(())
}

/// Where a pruning mask comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predictor {
    /// Everything allowed; pruned search equals plain search.
    AllPass,
    /// The answer path dilated `radius` times with the 3×3 element.
    Oracle { radius: u32 },
    /// `mask_<index>.txt` MASKV1 files, run through steps 1–3.
    FromFiles(PathBuf),
}

impl Predictor {
    /// `answer` is required by `Oracle`; `index` selects the file for
    /// `FromFiles`.
    pub fn predict(&self, answer: Option<&AnswerPath>, index: u32) -> Result<PathMask, MaskError> {
        match self {
            Predictor::AllPass => Ok(PathMask::all()),
            Predictor::Oracle { radius } => {
                let answer = answer.ok_or(MaskError::MissingAnswer)?;
                Ok((0..*radius).fold(answer.to_mask(), |m, _| m.dilated()))
            }
            Predictor::FromFiles(dir) => {
                let path = mask_file_path(dir, index);
                if !path.is_file() {
                    return Err(MaskError::MissingMaskFile { index, path });
                }
                Ok(process_vector(&read_mask_file(&path)?))
            }
        }
    }

    /// For `FromFiles`, descends into `scenario_<k>/` when that directory
    /// exists so one export tree can serve a multi-scenario dataset.
    pub fn for_scenario(&self, scenario: u8) -> Predictor {
        match self {
            Predictor::FromFiles(dir) => {
                let sub = dir.join(format!("scenario_{scenario}"));
                if sub.is_dir() {
                    Predictor::FromFiles(sub)
                } else {
                    self.clone()
                }
            }
            other => other.clone(),
        }
    }
}

pub fn mask_file_path(dir: &Path, index: u32) -> PathBuf {
    dir.join(format!("mask_{index:05}.txt"))
}

pub fn format_mask(v: &MaskVector) -> String {
    let mut out = String::with_capacity(16 * CELLS);
    out.push_str(MASK_HEADER);
    out.push('\n');
    for row in v.values.chunks(SIDE) {
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{x:.8e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses MASKV1 text. `path` is only used in error messages.
pub fn parse_mask(text: &str, path: &Path) -> Result<MaskVector, MaskError> {
    let err = |line: usize, token: usize, reason: String| MaskError::MalformedMaskFile {
        path: path.to_path_buf(),
        line,
        token,
        reason,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim_end() == MASK_HEADER => {}
        Some((_, l)) => return Err(err(1, 1, format!("expected header `{MASK_HEADER}`, got `{l}`"))),
        None => return Err(err(1, 1, "empty file".into())),
    }
    let mut values = Vec::with_capacity(CELLS);
    let mut last_line = 1;
    for (lineno, line) in lines {
        last_line = lineno + 1;
        for (t, tok) in line.split_whitespace().enumerate() {
            let v: f64 = tok
                .parse()
                .map_err(|_| err(lineno + 1, t + 1, format!("not a number: `{tok}`")))?;
            if !(-1.0..=1.0).contains(&v) {
                return Err(err(lineno + 1, t + 1, format!("value {tok} outside [-1, 1]")));
            }
            if values.len() == CELLS {
                return Err(err(lineno + 1, t + 1, "more than 3600 values".into()));
            }
            values.push(v);
        }
    }
    if values.len() != CELLS {
        return Err(err(
            last_line,
            0,
            format!("found {} values, expected {CELLS}", values.len()),
        ));
    }
    MaskVector::new(values)
}

pub fn read_mask_file(path: &Path) -> Result<MaskVector, MaskError> {
    let text = std::fs::read_to_string(path).map_err(|source| MaskError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_mask(&text, path)
}

pub fn write_mask_file(v: &MaskVector, path: &Path) -> Result<(), MaskError> {
    std::fs::write(path, format_mask(v)).map_err(|source| MaskError::Io {
        path: path.to_path_buf(),
        source,
    })
}
