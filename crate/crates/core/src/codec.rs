//! Scene and image codecs: canonical RGB, PNG containers, and the `SCENE1`
//! text fixture format.

use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder, ImageFormat};

use crate::grid::{AnswerPath, CellKind, Coord, GrayImage, Grid, PathError, Scene, SceneError, SIDE};

pub const FREE_RGB: [u8; 3] = [255, 255, 255];
pub const OBSTACLE_RGB: [u8; 3] = [0, 0, 0];
pub const START_RGB: [u8; 3] = [255, 255, 0];
pub const GOAL_RGB: [u8; 3] = [128, 128, 128];

const TEXT_HEADER: &str = "SCENE1 60 60";

#[derive(Debug, thiserror::Error)]
pub enum CodecError {
    #[error("pixel {0} is not one of the four canonical scene colors")]
    NonCanonicalColor(Coord),
    #[error("expected exactly one {0} marker")]
    MissingOrDuplicateMarker(CellKind),
    #[error("image is {width}x{height}, expected 60x60")]
    BadDimensions { width: u32, height: u32 },
    #[error("line {line}, column {col}: {reason}")]
    Parse {
        line: usize,
        col: usize,
        reason: String,
    },
    #[error("answer image: {0}")]
    BadAnswer(String),
    #[error("invalid path in answer image: {0}")]
    Path(#[from] PathError),
    #[error("png: {0}")]
    Png(#[from] image::ImageError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<SceneError> for CodecError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::MissingOrDuplicateMarker(k) => CodecError::MissingOrDuplicateMarker(k),
            // Decoders build scenes through `Scene::from_cells`, which only
            // reports marker counts.
            other => CodecError::Parse {
                line: 0,
                col: 0,
                reason: other.to_string(),
            },
        }
    }
}

/// 60×60 RGB pixels, row-major, 3 bytes each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub data: Vec<u8>,
}

pub fn kind_color(kind: CellKind) -> [u8; 3] {
    match kind {
        CellKind::Free => FREE_RGB,
        CellKind::Obstacle => OBSTACLE_RGB,
        CellKind::Start => START_RGB,
        CellKind::Goal => GOAL_RGB,
    }
}

fn color_kind(rgb: [u8; 3]) -> Option<CellKind> {
    match rgb {
        FREE_RGB => Some(CellKind::Free),
        OBSTACLE_RGB => Some(CellKind::Obstacle),
        START_RGB => Some(CellKind::Start),
        GOAL_RGB => Some(CellKind::Goal),
        _ => None,
    }
}

pub fn encode_scene_rgb(scene: &Scene) -> RgbImage {
    let data = scene
        .cells()
        .as_slice()
        .iter()
        .flat_map(|k| kind_color(*k))
        .collect();
    RgbImage { data }
}

pub fn decode_scene_rgb(image: &RgbImage) -> Result<Scene, CodecError> {
    if image.data.len() != SIDE * SIDE * 3 {
        return Err(CodecError::BadDimensions {
            width: SIDE as u32,
            height: (image.data.len() / (SIDE * 3)) as u32,
        });
    }
    let mut kinds = Vec::with_capacity(SIDE * SIDE);
    for (i, px) in image.data.chunks_exact(3).enumerate() {
        let kind = color_kind([px[0], px[1], px[2]])
            .ok_or(CodecError::NonCanonicalColor(Coord::from_index(i)))?;
        kinds.push(kind);
    }
    let cells = Grid::from_vec(kinds).expect("length checked above");
    Ok(Scene::from_cells(cells)?)
}

fn png_bytes(data: &[u8], color: ExtendedColorType) -> Result<Vec<u8>, CodecError> {
    let mut out = Vec::new();
    PngEncoder::new(&mut out).write_image(data, SIDE as u32, SIDE as u32, color)?;
    Ok(out)
}

fn load_png(bytes: &[u8]) -> Result<image::DynamicImage, CodecError> {
    let img = image::load(Cursor::new(bytes), ImageFormat::Png)?;
    if img.width() != SIDE as u32 || img.height() != SIDE as u32 {
        return Err(CodecError::BadDimensions {
            width: img.width(),
            height: img.height(),
        });
    }
    Ok(img)
}

/// 8-bit RGB PNG of the canonical scene encoding.
pub fn scene_to_png(scene: &Scene) -> Result<Vec<u8>, CodecError> {
    png_bytes(&encode_scene_rgb(scene).data, ExtendedColorType::Rgb8)
}

pub fn scene_from_png(bytes: &[u8]) -> Result<Scene, CodecError> {
    let data = load_png(bytes)?.to_rgb8().into_raw();
    decode_scene_rgb(&RgbImage { data })
}

/// 8-bit grayscale PNG.
pub fn gray_to_png(img: &GrayImage) -> Result<Vec<u8>, CodecError> {
    png_bytes(img.as_slice(), ExtendedColorType::L8)
}

pub fn gray_from_png(bytes: &[u8]) -> Result<GrayImage, CodecError> {
    let data = load_png(bytes)?.to_luma8().into_raw();
    Ok(GrayImage::from_vec(data).expect("dimensions checked"))
}

/// Recovers the ordered answer path from a rendered answer image.
///
/// A shortest path never touches itself, so walking from the start through
/// lit cells is unambiguous.
pub fn answer_from_gray(scene: &Scene, img: &GrayImage) -> Result<AnswerPath, CodecError> {
    let lit = |c: Coord| match img.get(c) {
        255 => Ok(true),
        0 => Ok(false),
        v => Err(CodecError::BadAnswer(format!("pixel {c} has value {v}"))),
    };
    let mut total = 0;
    for c in Coord::all() {
        if lit(c)? {
            total += 1;
        }
    }
    if !lit(scene.start())? {
        return Err(CodecError::BadAnswer("start cell is not lit".into()));
    }
    let mut cells = vec![scene.start()];
    let mut prev: Option<Coord> = None;
    let mut cur = scene.start();
    while cur != scene.goal() {
        let next: Vec<Coord> = cur
            .neighbors()
            .filter(|&n| Some(n) != prev && img.get(n) == 255)
            .collect();
        match next.as_slice() {
            [n] => {
                prev = Some(cur);
                cur = *n;
                cells.push(cur);
            }
            [] => return Err(CodecError::BadAnswer(format!("path breaks off at {cur}"))),
            _ => return Err(CodecError::BadAnswer(format!("path branches at {cur}"))),
        }
        if cells.len() > total {
            return Err(CodecError::BadAnswer("path loops".into()));
        }
    }
    if cells.len() != total {
        return Err(CodecError::BadAnswer(format!(
            "{} lit cells are not on the start-goal path",
            total - cells.len()
        )));
    }
    Ok(AnswerPath::new(scene, cells)?)
}

pub fn encode_scene_text(scene: &Scene) -> String {
    let mut out = String::with_capacity(TEXT_HEADER.len() + 1 + SIDE * (SIDE + 1));
    out.push_str(TEXT_HEADER);
    out.push('\n');
    for row in 0..SIDE {
        for col in 0..SIDE {
            out.push(match scene.kind(Coord::new(row, col)) {
                CellKind::Free => '.',
                CellKind::Obstacle => '#',
                CellKind::Start => 'S',
                CellKind::Goal => 'G',
            });
        }
        out.push('\n');
    }
    out
}

pub fn decode_scene_text(text: &str) -> Result<Scene, CodecError> {
    let err = |line: usize, col: usize, reason: &str| CodecError::Parse {
        line,
        col,
        reason: reason.to_string(),
    };
    let mut lines = text.split('\n');
    match lines.next() {
        Some(TEXT_HEADER) => {}
        _ => return Err(err(1, 1, "expected header `SCENE1 60 60`")),
    }
    let mut kinds = Vec::with_capacity(SIDE * SIDE);
    for row in 0..SIDE {
        let lineno = row + 2;
        let line = lines
            .next()
            .filter(|l| !l.is_empty())
            .ok_or_else(|| err(lineno, 1, &format!("expected {SIDE} grid rows, found {row}")))?;
        let mut width = 0;
        for (col, ch) in line.chars().enumerate() {
            let kind = match ch {
                '.' => CellKind::Free,
                '#' => CellKind::Obstacle,
                'S' => CellKind::Start,
                'G' => CellKind::Goal,
                other => return Err(err(lineno, col + 1, &format!("unexpected character {other:?}"))),
            };
            if col >= SIDE {
                return Err(err(lineno, col + 1, "row longer than 60 cells"));
            }
            kinds.push(kind);
            width += 1;
        }
        if width != SIDE {
            return Err(err(lineno, width + 1, "row shorter than 60 cells"));
        }
    }
    // Only a trailing newline may follow the grid.
    for (extra, line) in lines.enumerate() {
        if !line.is_empty() {
            return Err(err(SIDE + 2 + extra, 1, "trailing content after grid"));
        }
    }
    let cells = Grid::from_vec(kinds).expect("60 rows of 60 cells");
    Ok(Scene::from_cells(cells)?)
}

fn read_file(path: &Path) -> Result<Vec<u8>, CodecError> {
    std::fs::read(path).map_err(|source| CodecError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a scene from either a PNG or a `SCENE1` text file, sniffing the
/// content rather than the extension.
pub fn load_scene(path: &Path) -> Result<Scene, CodecError> {
    let bytes = read_file(path)?;
    if bytes.starts_with(b"SCENE1") {
        let text = String::from_utf8(bytes).map_err(|e| CodecError::Parse {
            line: 0,
            col: 0,
            reason: e.to_string(),
        })?;
        decode_scene_text(&text)
    } else {
        scene_from_png(&bytes)
    }
}
