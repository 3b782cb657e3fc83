//! Plain-text mesh format.
//!
//! ```text
//! # comment
//! $Vertices
//! 4
//! 0 0
//! 1 0
//! 1 1
//! 0 1
//! $Triangles
//! 0
//! $Rectangles
//! 1
//! 0 1 2 3
//! $BoundaryTags
//! 1
//! 0 3 left
//! ```
//!
//! Sections may appear in any order; `$Vertices` is required. Indices are
//! 0-based. Coordinates are written in shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;

use super::{validate_mesh, BoundaryTag, HybridMesh};
use crate::error::{Error, Result};
use crate::geometry::Point;

pub fn write_mesh_string(mesh: &HybridMesh) -> String {
    let mut out = String::new();
    out.push_str("# hybrid triangle/rectangle mesh\n");
    let _ = writeln!(out, "$Vertices\n{}", mesh.n_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    let _ = writeln!(out, "$Triangles\n{}", mesh.n_triangles());
    for t in mesh.triangles() {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(out, "$Rectangles\n{}", mesh.n_rectangles());
    for r in mesh.rectangles() {
        let _ = writeln!(out, "{} {} {} {}", r[0], r[1], r[2], r[3]);
    }
    let tags = mesh.tag_list();
    let _ = writeln!(out, "$BoundaryTags\n{}", tags.len());
    for ([a, b], tag) in tags {
        let _ = writeln!(out, "{a} {b} {tag}");
    }
    out
}

pub fn write_mesh(mesh: &HybridMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mesh_string(mesh))?;
    Ok(())
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<HybridMesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    read_mesh_str(&text, path)
}

/// Parses and validates a mesh; `origin` is only used in error messages.
pub fn read_mesh_str(text: &str, origin: impl AsRef<Path>) -> Result<HybridMesh> {
    let origin = origin.as_ref().to_path_buf();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let err = |line: usize, message: String| Error::Parse {
        path: origin.clone(),
        line,
        message,
    };

    let mut vertices: Option<Vec<Point>> = None;
    let mut triangles = Vec::new();
    let mut rectangles = Vec::new();
    let mut tags = Vec::new();

    while let Some((line, header)) = lines.next() {
        let section = header
            .strip_prefix('$')
            .ok_or_else(|| err(line, format!("expected a section header, found `{header}`")))?;
        let (count_line, count_text) = lines
            .next()
            .ok_or_else(|| err(line, format!("section ${section} is missing its count")))?;
        let count: usize = count_text
            .parse()
            .map_err(|_| err(count_line, format!("invalid count `{count_text}`")))?;
        let mut rows = Vec::with_capacity(count);
        for _ in 0..count {
            let Some((l, text)) = lines.next_if(|(_, t)| !t.starts_with('$')) else {
                let at = rows.last().map_or(count_line, |(l, _)| *l);
                return Err(err(
                    at,
                    format!("section ${section} declares {count} entries but has {}", rows.len()),
                ));
            };
            rows.push((l, text.split_whitespace().collect::<Vec<_>>()));
        }
        match section {
            "Vertices" => {
                let mut v = Vec::with_capacity(count);
                for (l, toks) in rows {
                    let [x, y] = fields::<f64, 2>(&toks).map_err(|m| err(l, m))?;
                    v.push(Point::new(x, y));
                }
                vertices = Some(v);
            }
            "Triangles" => {
                for (l, toks) in rows {
                    triangles.push(fields::<usize, 3>(&toks).map_err(|m| err(l, format!("triangle: {m}")))?);
                }
            }
            "Rectangles" => {
                for (l, toks) in rows {
                    rectangles.push(fields::<usize, 4>(&toks).map_err(|m| err(l, format!("rectangle: {m}")))?);
                }
            }
            "BoundaryTags" => {
                for (l, toks) in rows {
                    if toks.len() != 3 {
                        return Err(err(
                            l,
                            format!("boundary tag: expected `v0 v1 tag`, found {} fields", toks.len()),
                        ));
                    }
                    let [a, b] = fields::<usize, 2>(&toks[..2]).map_err(|m| err(l, m))?;
                    let tag: BoundaryTag = toks[2].parse().map_err(|m| err(l, m))?;
                    tags.push(([a, b], tag));
                }
            }
            other => return Err(err(line, format!("unknown section ${other}"))),
        }
    }

    let vertices = vertices.ok_or_else(|| err(1, "missing $Vertices section".into()))?;
    let mesh = HybridMesh::from_parts(vertices, triangles, rectangles, &tags)?;
    validate_mesh(&mesh)?;
    Ok(mesh)
}

fn fields<T: std::str::FromStr, const N: usize>(toks: &[&str]) -> std::result::Result<[T; N], String> {
    if toks.len() != N {
        return Err(format!("expected {N} fields, found {}", toks.len()));
    }
    let parsed: Vec<T> = toks
        .iter()
        .map(|t| t.parse::<T>().map_err(|_| format!("cannot parse `{t}`")))
        .collect::<std::result::Result<_, _>>()?;
    Ok(parsed
        .try_into()
        .unwrap_or_else(|_| unreachable!("length checked above")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_structured_hybrid_mesh, build_structured_rect_mesh, BoundingBox, SplitDirection};

    #[test]
    fn round_trip_rect_mesh() {
        let m = build_structured_rect_mesh(2, 2, BoundingBox::unit()).unwrap();
        let back = read_mesh_str(&write_mesh_string(&m), "mem").unwrap();
        assert_eq!(back, m);
        assert_eq!(back.edges(), m.edges());
    }

    #[test]
    fn round_trip_through_file() {
        let m = build_structured_hybrid_mesh(4, 3, BoundingBox::unit(), 2, SplitDirection::Alternating).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.mesh");
        write_mesh(&m, &path).unwrap();
        assert_eq!(read_mesh(&path).unwrap(), m);
    }

    #[test]
    fn rectangle_with_three_vertices_reports_line() {
        let text = "$Vertices\n4\n0 0\n1 0\n1 1\n0 1\n$Rectangles\n1\n0 1 2\n";
        match read_mesh_str(text, "bad.mesh").unwrap_err() {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 9);
                assert!(message.contains("rectangle"), "{message}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn duplicate_edge_in_element_is_a_validation_error() {
        let text = "$Vertices\n3\n0 0\n1 0\n0 1\n$Triangles\n1\n0 1 1\n";
        let err = read_mesh_str(text, "dup.mesh").unwrap_err();
        assert!(matches!(err, Error::InvalidElement { .. }), "{err}");
    }

    #[test]
    fn truncated_section_is_reported() {
        let text = "$Vertices\n3\n0 0\n1 0\n";
        assert!(matches!(
            read_mesh_str(text, "t.mesh").unwrap_err(),
            Error::Parse { .. }
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# header\n$Vertices # section\n4\n0 0\n1 0\n\n1 1\n0 1\n$Rectangles\n1\n0 1 2 3 # the cell\n";
        let m = read_mesh_str(text, "c.mesh").unwrap();
        assert_eq!(m.n_rectangles(), 1);
    }

    #[test]
    fn non_conforming_file_is_rejected() {
        let text =
            "$Vertices\n8\n0 0\n1 0\n1 1\n0 1\n2 0\n2 0.5\n1 0.5\n2 1\n$Rectangles\n3\n0 1 2 3\n1 4 5 6\n6 5 7 2\n";
        assert!(matches!(
            read_mesh_str(text, "h.mesh").unwrap_err(),
            Error::Conformity { .. }
        ));
    }
}
