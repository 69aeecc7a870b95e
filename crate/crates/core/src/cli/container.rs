use std::path::{Path, PathBuf};

use crate::error::{invalid, Result};
use crate::geometry::{Point, Polygon};

/// Where a container polygon comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum ContainerSource {
    Triangle,
    Square,
    Regular(usize),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContainerSpec {
    pub source: ContainerSource,
    /// Rescale to unit area about the centroid.
    pub normalize: bool,
}

impl ContainerSpec {
    /// `triangle`, `square`, `regular-k`, or a path to a vertex file.
    pub fn parse(text: &str, normalize: bool) -> Result<Self> {
        let source = match text {
            "triangle" => ContainerSource::Triangle,
            "square" => ContainerSource::Square,
            _ => match text.strip_prefix("regular-") {
                Some(k) => {
                    let k: usize = k
                        .parse()
                        .map_err(|_| invalid(format!("bad vertex count in {text:?}")))?;
                    if k < 3 {
                        return Err(invalid(format!("regular-k needs k >= 3, got {k}")));
                    }
                    ContainerSource::Regular(k)
                }
                None => ContainerSource::File(PathBuf::from(text)),
            },
        };
        Ok(Self { source, normalize })
    }

    pub fn label(&self) -> String {
        match &self.source {
            ContainerSource::Triangle => "triangle".into(),
            ContainerSource::Square => "square".into(),
            ContainerSource::Regular(k) => format!("regular-{k}"),
            ContainerSource::File(p) => p.display().to_string(),
        }
    }
}

/// Resolves a container to a validated counterclockwise polygon.
///
/// The builtin triangle is `(0,0), (1,0), (0,1)`; with normalization it is
/// scaled by `√2` about its centroid.
pub fn parse_container(spec: &ContainerSpec) -> Result<Polygon> {
    let poly = match &spec.source {
        ContainerSource::Triangle => Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])?,
        ContainerSource::Square => Polygon::unit_square(),
        ContainerSource::Regular(k) => Polygon::regular(*k)?,
        ContainerSource::File(path) => read_vertex_file(path)?,
    };
    Ok(if spec.normalize {
        poly.normalized_to_unit_area()
    } else {
        poly
    })
}

/// One `x y` pair per line; `#` starts a comment.
pub fn read_vertex_file(path: &Path) -> Result<Polygon> {
    let text = std::fs::read_to_string(path)?;
    parse_vertex_text(&text)
}

pub fn parse_vertex_text(text: &str) -> Result<Polygon> {
    let mut vertices = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        let coords: Option<Vec<f64>> = fields.iter().map(|f| f.parse().ok()).collect();
        match coords.as_deref() {
            Some([x, y]) => vertices.push(Point::new(*x, *y)),
            _ => {
                return Err(invalid(format!(
                    "line {}: expected two numbers, got {raw:?}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(Polygon::from_vertices(vertices)?)
}
