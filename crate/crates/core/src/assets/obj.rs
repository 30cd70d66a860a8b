//! Wavefront OBJ subset: `v`, `vt`, `vn` and `f` (convex polygons are fan
//! triangulated). Grouping and material statements (`o`, `g`, `s`, `mtllib`,
//! `usemtl`) are accepted and ignored; any other directive is rejected.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::mesh::{Albedo, ObjectAsset};
use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};

const IGNORED: &[&str] = &["o", "g", "s", "mtllib", "usemtl"];

const DEFAULT_COLOR: [f64; 3] = [0.6, 0.6, 0.6];

pub fn load_obj(path: &Path) -> Result<ObjectAsset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_obj(&text, path, id)
}

/// Key of an output vertex: position, texcoord and normal indices.
type Corner = (usize, Option<usize>, Option<usize>);

pub(crate) fn parse_obj(text: &str, path: &Path, id: String) -> Result<ObjectAsset> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut positions: Vec<Vec3> = Vec::new();
    let mut texcoords: Vec<Vec2> = Vec::new();
    let mut normals: Vec<Vec3> = Vec::new();
    let mut faces: Vec<(usize, Vec<Corner>)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let directive = parts.next().unwrap();
        let args: Vec<&str> = parts.collect();
        let floats = |n: usize| -> Result<Vec<f64>> {
            if args.len() < n {
                return Err(parse_err(lineno, format!("`{directive}` needs {n} values")));
            }
            args.iter()
                .take(n)
                .map(|a| {
                    a.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| parse_err(lineno, format!("bad number `{a}`")))
                })
                .collect()
        };
        match directive {
            "v" => {
                let f = floats(3)?;
                positions.push(Vec3::new(f[0], f[1], f[2]));
            }
            "vt" => {
                let f = floats(2)?;
                texcoords.push(Vec2::new(f[0], f[1]));
            }
            "vn" => {
                let f = floats(3)?;
                let n = Vec3::new(f[0], f[1], f[2]);
                let len = n.norm();
                if len < 1e-12 {
                    return Err(parse_err(lineno, "zero-length normal".into()));
                }
                normals.push(n / len);
            }
            "f" => {
                if args.len() < 3 {
                    return Err(parse_err(lineno, "face needs at least 3 vertices".into()));
                }
                let mut corners = Vec::with_capacity(args.len());
                for a in &args {
                    let mut it = a.split('/');
                    let resolve = |field: Option<&str>, count: usize, what: &str| -> Result<Option<usize>> {
                        match field {
                            None | Some("") => Ok(None),
                            Some(s) => {
                                let i: i64 = s
                                    .parse()
                                    .map_err(|_| parse_err(lineno, format!("bad {what} index `{s}`")))?;
                                let idx = if i > 0 {
                                    i - 1
                                } else if i < 0 {
                                    count as i64 + i
                                } else {
                                    -1
                                };
                                if idx < 0 || idx as usize >= count {
                                    return Err(parse_err(
                                        lineno,
                                        format!("{what} index {i} out of range (have {count})"),
                                    ));
                                }
                                Ok(Some(idx as usize))
                            }
                        }
                    };
                    let v = resolve(it.next(), positions.len(), "vertex")?
                        .ok_or_else(|| parse_err(lineno, "missing vertex index".into()))?;
                    let vt = resolve(it.next(), texcoords.len(), "texcoord")?;
                    let vn = resolve(it.next(), normals.len(), "normal")?;
                    if it.next().is_some() {
                        return Err(parse_err(lineno, format!("bad face corner `{a}`")));
                    }
                    corners.push((v, vt, vn));
                }
                faces.push((lineno, corners));
            }
            d if IGNORED.contains(&d) => {}
            d => {
                return Err(Error::UnsupportedFeature {
                    path: path.to_path_buf(),
                    line: lineno,
                    directive: d.to_string(),
                })
            }
        }
    }

    if faces.is_empty() {
        return Err(parse_err(text.lines().count().max(1), "no faces".into()));
    }

    let all_vt = faces.iter().flat_map(|f| &f.1).all(|c| c.1.is_some());
    let all_vn = faces.iter().flat_map(|f| &f.1).all(|c| c.2.is_some());
    let any_vt = faces.iter().flat_map(|f| &f.1).any(|c| c.1.is_some());
    let any_vn = faces.iter().flat_map(|f| &f.1).any(|c| c.2.is_some());
    if any_vt && !all_vt || any_vn && !all_vn {
        let line = faces[0].0;
        return Err(parse_err(
            line,
            "faces mix corners with and without texcoords/normals".into(),
        ));
    }

    let mut asset = ObjectAsset {
        id,
        category: String::new(),
        vertices: Vec::new(),
        normals: all_vn.then(Vec::new),
        uvs: all_vt.then(Vec::new),
        triangles: Vec::new(),
        albedo: Albedo::Color(DEFAULT_COLOR),
    };

    if !all_vt && !all_vn {
        asset.vertices = positions;
        for (_, corners) in &faces {
            fan(
                &corners.iter().map(|c| c.0 as u32).collect::<Vec<_>>(),
                &mut asset.triangles,
            );
        }
    } else {
        // Split vertices so each output vertex has one position/uv/normal.
        let mut remap: HashMap<Corner, u32> = HashMap::new();
        for (_, corners) in &faces {
            let mut idx = Vec::with_capacity(corners.len());
            for c in corners {
                let next = asset.vertices.len() as u32;
                let i = *remap.entry(*c).or_insert_with(|| {
                    asset.vertices.push(positions[c.0]);
                    if let (Some(uvs), Some(t)) = (asset.uvs.as_mut(), c.1) {
                        uvs.push(texcoords[t]);
                    }
                    if let (Some(ns), Some(n)) = (asset.normals.as_mut(), c.2) {
                        ns.push(normals[n]);
                    }
                    next
                });
                idx.push(i);
            }
            fan(&idx, &mut asset.triangles);
        }
    }
    Ok(asset)
}

fn fan(idx: &[u32], out: &mut Vec<[u32; 3]>) {
    for k in 1..idx.len() - 1 {
        out.push([idx[0], idx[k], idx[k + 1]]);
    }
}

/// Serializes the mesh as OBJ, one vertex record per asset vertex.
pub fn write_obj(asset: &ObjectAsset, path: &Path) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "# {} ({})", asset.id, asset.category);
    for v in &asset.vertices {
        let _ = writeln!(s, "v {} {} {}", v.x, v.y, v.z);
    }
    if let Some(uvs) = &asset.uvs {
        for t in uvs {
            let _ = writeln!(s, "vt {} {}", t.x, t.y);
        }
    }
    if let Some(ns) = &asset.normals {
        for n in ns {
            let _ = writeln!(s, "vn {} {} {}", n.x, n.y, n.z);
        }
    }
    for tri in &asset.triangles {
        let corner = |i: u32| {
            let k = i + 1;
            match (asset.uvs.is_some(), asset.normals.is_some()) {
                (false, false) => format!("{k}"),
                (true, false) => format!("{k}/{k}"),
                (false, true) => format!("{k}//{k}"),
                (true, true) => format!("{k}/{k}/{k}"),
            }
        };
        let _ = writeln!(s, "f {} {} {}", corner(tri[0]), corner(tri[1]), corner(tri[2]));
    }
    std::fs::write(path, s).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}
