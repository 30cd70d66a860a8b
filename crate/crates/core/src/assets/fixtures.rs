//! Built-in fixture catalog: simple furniture-like meshes across ten
//! categories, three floor textures and one textured asset. Used by tests,
//! the examples and as the default catalog of the command-line tool.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use image::{Rgb as Px, RgbImage};

use super::catalog::{CatalogEntry, PairingTable, FLOOR_CATEGORY};
use super::Catalog;
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Polygon soup written as OBJ with quad and n-gon faces.
#[derive(Default)]
struct MeshBuilder {
    positions: Vec<Vec3>,
    faces: Vec<Vec<usize>>,
}

impl MeshBuilder {
    fn vertex(&mut self, p: Vec3) -> usize {
        self.positions.push(p);
        self.positions.len() - 1
    }

    fn add_box(&mut self, min: [f64; 3], max: [f64; 3]) -> &mut Self {
        let base = self.positions.len();
        for i in 0..8 {
            let x = if i & 1 == 0 { min[0] } else { max[0] };
            let y = if i & 2 == 0 { min[1] } else { max[1] };
            let z = if i & 4 == 0 { min[2] } else { max[2] };
            self.vertex(Vec3::new(x, y, z));
        }
        // Outward CCW quads.
        for q in [
            [0, 2, 3, 1],
            [4, 5, 7, 6],
            [0, 1, 5, 4],
            [2, 6, 7, 3],
            [0, 4, 6, 2],
            [1, 3, 7, 5],
        ] {
            self.faces.push(q.iter().map(|i| base + i).collect());
        }
        self
    }

    /// Truncated cone around the vertical axis through `(cx, cy)`.
    fn add_frustum(&mut self, c: [f64; 2], z0: f64, z1: f64, r0: f64, r1: f64, segments: usize) -> &mut Self {
        let base = self.positions.len();
        for k in 0..segments {
            let a = TAU * k as f64 / segments as f64;
            let (s, co) = a.sin_cos();
            self.vertex(Vec3::new(c[0] + r0 * co, c[1] + r0 * s, z0));
            self.vertex(Vec3::new(c[0] + r1 * co, c[1] + r1 * s, z1));
        }
        for k in 0..segments {
            let n = (k + 1) % segments;
            self.faces
                .push(vec![base + 2 * k, base + 2 * n, base + 2 * n + 1, base + 2 * k + 1]);
        }
        self.faces.push((0..segments).rev().map(|k| base + 2 * k).collect());
        self.faces.push((0..segments).map(|k| base + 2 * k + 1).collect());
        self
    }

    fn add_cylinder(&mut self, c: [f64; 2], z0: f64, z1: f64, r: f64) -> &mut Self {
        self.add_frustum(c, z0, z1, r, r, 16)
    }

    /// Horizontal cylinder along x.
    fn add_log(&mut self, x0: f64, x1: f64, cy: f64, cz: f64, r: f64) -> &mut Self {
        let segments = 16;
        let base = self.positions.len();
        for k in 0..segments {
            let a = TAU * k as f64 / segments as f64;
            let (s, co) = a.sin_cos();
            self.vertex(Vec3::new(x0, cy + r * co, cz + r * s));
            self.vertex(Vec3::new(x1, cy + r * co, cz + r * s));
        }
        for k in 0..segments {
            let n = (k + 1) % segments;
            self.faces
                .push(vec![base + 2 * k, base + 2 * k + 1, base + 2 * n + 1, base + 2 * n]);
        }
        self.faces.push((0..segments).map(|k| base + 2 * k).collect());
        self.faces.push((0..segments).rev().map(|k| base + 2 * k + 1).collect());
        self
    }

    fn legs(&mut self, w: f64, d: f64, h: f64, t: f64) -> &mut Self {
        for (x, y) in [(0.0, 0.0), (w - t, 0.0), (0.0, d - t), (w - t, d - t)] {
            self.add_box([x, y, 0.0], [x + t, y + t, h]);
        }
        self
    }

    fn to_obj(&self, name: &str) -> String {
        let mut s = format!("# {name}\no {name}\n");
        for p in &self.positions {
            let _ = writeln!(s, "v {} {} {}", fmt(p.x), fmt(p.y), fmt(p.z));
        }
        for f in &self.faces {
            s.push('f');
            for i in f {
                let _ = write!(s, " {}", i + 1);
            }
            s.push('\n');
        }
        s
    }
}

fn fmt(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// Box with per-face texture coordinates and normals (exercises `vt`/`vn`).
fn textured_box_obj(name: &str, min: [f64; 3], max: [f64; 3]) -> String {
    let mut s = format!("# {name}\no {name}\n");
    for i in 0..8 {
        let x = if i & 1 == 0 { min[0] } else { max[0] };
        let y = if i & 2 == 0 { min[1] } else { max[1] };
        let z = if i & 4 == 0 { min[2] } else { max[2] };
        let _ = writeln!(s, "v {} {} {}", fmt(x), fmt(y), fmt(z));
    }
    for (u, v) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)] {
        let _ = writeln!(s, "vt {u} {v}");
    }
    let faces: [([usize; 4], [i32; 3]); 6] = [
        ([0, 2, 3, 1], [0, 0, -1]),
        ([4, 5, 7, 6], [0, 0, 1]),
        ([0, 1, 5, 4], [0, -1, 0]),
        ([2, 6, 7, 3], [0, 1, 0]),
        ([0, 4, 6, 2], [-1, 0, 0]),
        ([1, 3, 7, 5], [1, 0, 0]),
    ];
    for (_, n) in &faces {
        let _ = writeln!(s, "vn {} {} {}", n[0], n[1], n[2]);
    }
    s.push_str("usemtl wood\n");
    for (fi, (q, _)) in faces.iter().enumerate() {
        s.push('f');
        for (k, v) in q.iter().enumerate() {
            let _ = write!(s, " {}/{}/{}", v + 1, k + 1, fi + 1);
        }
        s.push('\n');
    }
    s
}

struct Fixture {
    id: &'static str,
    category: &'static str,
    color: [f64; 3],
    build: fn(&mut MeshBuilder),
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        id: "fx_chair_01",
        category: "chair",
        color: [0.72, 0.32, 0.18],
        build: |m| {
            m.legs(0.5, 0.5, 0.42, 0.07)
                .add_box([0.0, 0.0, 0.42], [0.5, 0.5, 0.5])
                .add_box([0.0, 0.4, 0.5], [0.5, 0.5, 0.95])
                .add_box([0.02, 0.02, 0.12], [0.48, 0.48, 0.2]);
        },
    },
    Fixture {
        id: "fx_chair_02",
        category: "chair",
        color: [0.25, 0.45, 0.7],
        build: |m| {
            m.add_box([0.0, 0.0, 0.05], [0.8, 0.75, 0.42])
                .add_box([0.0, 0.55, 0.42], [0.8, 0.75, 0.85])
                .add_box([0.0, 0.0, 0.42], [0.12, 0.55, 0.62])
                .add_box([0.68, 0.0, 0.42], [0.8, 0.55, 0.62])
                .legs(0.8, 0.75, 0.05, 0.08);
        },
    },
    Fixture {
        id: "fx_table_01",
        category: "table",
        color: [0.55, 0.38, 0.22],
        build: |m| {
            m.legs(1.0, 0.7, 0.7, 0.1)
                .add_box([0.0, 0.0, 0.7], [1.0, 0.7, 0.76])
                .add_box([0.05, 0.05, 0.5], [0.95, 0.65, 0.7])
                .add_box([0.1, 0.1, 0.08], [0.9, 0.6, 0.16]);
        },
    },
    Fixture {
        id: "fx_table_02",
        category: "table",
        color: [0.85, 0.82, 0.75],
        build: |m| {
            m.add_cylinder([0.0, 0.0], 0.0, 0.06, 0.35)
                .add_frustum([0.0, 0.0], 0.06, 0.55, 0.28, 0.18, 16)
                .add_cylinder([0.0, 0.0], 0.55, 0.65, 0.5);
        },
    },
    Fixture {
        id: "fx_sofa_01",
        category: "sofa",
        color: [0.35, 0.55, 0.35],
        build: |m| {
            m.add_box([0.0, 0.0, 0.08], [1.8, 0.9, 0.45])
                .add_box([0.0, 0.65, 0.45], [1.8, 0.9, 0.9])
                .add_box([0.0, 0.0, 0.45], [0.2, 0.65, 0.65])
                .add_box([1.6, 0.0, 0.45], [1.8, 0.65, 0.65])
                .legs(1.8, 0.9, 0.08, 0.08);
        },
    },
    Fixture {
        id: "fx_sofa_02",
        category: "sofa",
        color: [0.62, 0.3, 0.42],
        build: |m| {
            m.add_box([0.0, 0.0, 0.0], [1.3, 0.85, 0.42])
                .add_box([0.0, 0.6, 0.42], [1.3, 0.85, 0.95])
                .add_box([0.05, 0.05, 0.42], [0.65, 0.6, 0.52])
                .add_box([0.65, 0.05, 0.42], [1.25, 0.6, 0.52]);
        },
    },
    Fixture {
        id: "fx_bed_01",
        category: "bed",
        color: [0.82, 0.8, 0.9],
        build: |m| {
            m.add_box([0.0, 0.0, 0.0], [1.4, 2.0, 0.35])
                .add_box([0.05, 0.05, 0.35], [1.35, 1.95, 0.55])
                .add_box([0.0, 1.9, 0.0], [1.4, 2.0, 1.1])
                .add_box([0.15, 1.45, 0.55], [1.25, 1.85, 0.7]);
        },
    },
    Fixture {
        id: "fx_bed_02",
        category: "bed",
        color: [0.5, 0.42, 0.36],
        build: |m| {
            m.add_box([0.0, 0.0, 0.0], [1.6, 1.6, 0.45])
                .add_box([0.0, 1.5, 0.0], [1.6, 1.6, 1.0])
                .add_box([0.0, 0.0, 0.0], [1.6, 0.1, 0.7]);
        },
    },
    Fixture {
        id: "fx_lamp_01",
        category: "lamp",
        color: [0.95, 0.85, 0.55],
        build: |m| {
            m.add_cylinder([0.0, 0.0], 0.0, 0.3, 0.3)
                .add_cylinder([0.0, 0.0], 0.3, 0.5, 0.08)
                .add_frustum([0.0, 0.0], 0.5, 0.95, 0.45, 0.3, 16);
        },
    },
    Fixture {
        id: "fx_lamp_02",
        category: "lamp",
        color: [0.3, 0.3, 0.32],
        build: |m| {
            m.add_box([0.0, 0.0, 0.0], [0.6, 0.6, 0.45])
                .add_frustum([0.3, 0.3], 0.45, 1.0, 0.42, 0.32, 12);
        },
    },
    Fixture {
        id: "fx_stool_01",
        category: "stool",
        color: [0.9, 0.55, 0.2],
        build: |m| {
            m.add_frustum([0.0, 0.0], 0.0, 0.5, 0.32, 0.24, 16)
                .add_cylinder([0.0, 0.0], 0.5, 0.62, 0.34);
        },
    },
    Fixture {
        id: "fx_stool_02",
        category: "stool",
        color: [0.4, 0.25, 0.15],
        build: |m| {
            m.legs(0.5, 0.5, 0.6, 0.09)
                .add_box([0.0, 0.0, 0.6], [0.5, 0.5, 0.68])
                .add_box([0.0, 0.0, 0.2], [0.5, 0.5, 0.32]);
        },
    },
    Fixture {
        id: "fx_cabinet_01",
        category: "cabinet",
        color: [0.78, 0.76, 0.7],
        build: |m| {
            m.add_box([0.0, 0.0, 0.0], [0.9, 0.5, 1.6])
                .add_box([0.4, -0.04, 0.8], [0.44, 0.0, 1.0])
                .add_box([0.46, -0.04, 0.8], [0.5, 0.0, 1.0]);
        },
    },
    Fixture {
        id: "fx_rug_01",
        category: "rug",
        color: [0.7, 0.2, 0.25],
        build: |m| {
            m.add_log(0.0, 1.2, 0.0, 0.25, 0.25).add_log(0.0, 1.2, 0.5, 0.25, 0.25);
        },
    },
    Fixture {
        id: "fx_rug_02",
        category: "rug",
        color: [0.2, 0.5, 0.6],
        build: |m| {
            m.add_box([0.0, 0.0, 0.0], [1.0, 0.8, 0.35])
                .add_box([0.1, 0.1, 0.35], [0.9, 0.7, 0.55]);
        },
    },
    Fixture {
        id: "fx_cart_01",
        category: "cart",
        color: [0.6, 0.62, 0.66],
        build: |m| {
            m.add_box([0.0, 0.0, 0.15], [1.0, 0.6, 0.75])
                .add_box([0.0, 0.55, 0.75], [1.0, 0.6, 1.0])
                .legs(1.0, 0.6, 0.15, 0.12);
        },
    },
    Fixture {
        id: "fx_cart_02",
        category: "cart",
        color: [0.15, 0.35, 0.25],
        build: |m| {
            m.add_box([0.0, 0.0, 0.12], [0.8, 0.55, 0.55])
                .add_log(0.05, 0.75, 0.1, 0.08, 0.08)
                .add_log(0.05, 0.75, 0.45, 0.08, 0.08)
                .add_box([0.0, 0.45, 0.55], [0.8, 0.55, 0.9]);
        },
    },
    Fixture {
        id: "fx_shelf_01",
        category: "shelf",
        color: [0.66, 0.5, 0.33],
        build: |m| {
            m.add_box([0.0, 0.3, 0.0], [1.0, 0.4, 1.2])
                .add_box([0.0, 0.0, 0.0], [0.08, 0.4, 1.2])
                .add_box([0.92, 0.0, 0.0], [1.0, 0.4, 1.2])
                .add_box([0.08, 0.0, 0.0], [0.92, 0.4, 0.12])
                .add_box([0.08, 0.0, 0.5], [0.92, 0.4, 0.6])
                .add_box([0.08, 0.0, 1.1], [0.92, 0.4, 1.2])
                .add_box([0.15, 0.05, 0.12], [0.85, 0.3, 0.45])
                .add_box([0.15, 0.05, 0.6], [0.55, 0.3, 0.95]);
        },
    },
    Fixture {
        id: "fx_shelf_02",
        category: "shelf",
        color: [0.9, 0.9, 0.88],
        build: |m| {
            m.add_box([0.0, 0.0, 0.0], [1.2, 0.45, 0.9])
                .add_box([0.0, 0.0, 0.9], [0.4, 0.45, 1.3]);
        },
    },
];

/// Id, category and box of the textured fixture.
const TEXTURED: (&str, &str, [f64; 3], [f64; 3]) = ("fx_cabinet_02", "cabinet", [0.0, 0.0, 0.0], [1.2, 0.5, 0.9]);

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn save_png(img: &RgbImage, path: &Path) -> Result<()> {
    img.save(path)
        .map_err(|e| Error::image(format!("writing {}", path.display()), e))
}

pub(crate) fn checker(a: [u8; 3], b: [u8; 3], cells: u32, size: u32) -> RgbImage {
    RgbImage::from_fn(size, size, |x, y| {
        let c = size / cells;
        if ((x / c) + (y / c)).is_multiple_of(2) {
            Px(a)
        } else {
            Px(b)
        }
    })
}

fn planks(size: u32) -> RgbImage {
    RgbImage::from_fn(size, size, |x, y| {
        let row = y / 8;
        let shade = [0u8, 14, 5, 20, 9, 2, 17, 11][(row % 8) as usize];
        let seam = y % 8 == 0 || (x + row * 23) % 48 == 0;
        let grain = ((x * 7 + row * 13) % 11) as u8;
        if seam {
            Px([70, 48, 30])
        } else {
            Px([150 - shade + grain, 105 - shade / 2 + grain / 2, 62])
        }
    })
}

fn tiles(size: u32) -> RgbImage {
    RgbImage::from_fn(size, size, |x, y| {
        if x % 16 == 0 || y % 16 == 0 {
            Px([120, 120, 125])
        } else {
            let t = (((x / 16) * 3 + (y / 16) * 5) % 4) as u8 * 6;
            Px([205 - t, 200 - t, 190 - t])
        }
    })
}

fn wood(size: u32) -> RgbImage {
    RgbImage::from_fn(size, size, |x, y| {
        let band = ((x as f64 * 0.35 + (y as f64 * 0.2).sin() * 3.0).sin() * 18.0) as i32;
        Px([(160 + band) as u8, (110 + band / 2) as u8, 70])
    })
}

/// Writes the fixture catalog (`catalog.json`, `pairing.json`, meshes and
/// textures) into `dir` and returns the path of `catalog.json`.
pub fn write_fixture_catalog(dir: &Path) -> Result<PathBuf> {
    let mesh_dir = dir.join("meshes");
    let tex_dir = dir.join("textures");
    for d in [&mesh_dir, &tex_dir] {
        std::fs::create_dir_all(d).map_err(|e| Error::io(format!("creating {}", d.display()), e))?;
    }

    let mut entries = Vec::new();
    for f in FIXTURES {
        let mut m = MeshBuilder::default();
        (f.build)(&mut m);
        let file = format!("{}.obj", f.id);
        write(&mesh_dir.join(&file), m.to_obj(f.id).as_bytes())?;
        entries.push(CatalogEntry {
            id: f.id.into(),
            path: format!("meshes/{file}"),
            category: f.category.into(),
            base_color: Some(f.color),
            texture: None,
            tiling: None,
        });
    }
    let (id, category, min, max) = TEXTURED;
    write(
        &mesh_dir.join(format!("{id}.obj")),
        textured_box_obj(id, min, max).as_bytes(),
    )?;
    save_png(&wood(64), &tex_dir.join("wood.png"))?;
    entries.push(CatalogEntry {
        id: id.into(),
        path: format!("meshes/{id}.obj"),
        category: category.into(),
        base_color: None,
        texture: Some("textures/wood.png".into()),
        tiling: None,
    });

    let floors: [(&str, RgbImage, f64); 3] = [
        ("floor_checker", checker([215, 215, 210], [60, 62, 70], 8, 64), 0.25),
        ("floor_planks", planks(64), 0.5),
        ("floor_tiles", tiles(64), 0.5),
    ];
    for (id, img, tiling) in floors {
        let file = format!("{id}.png");
        save_png(&img, &tex_dir.join(&file))?;
        entries.push(CatalogEntry {
            id: id.into(),
            path: format!("textures/{file}"),
            category: FLOOR_CATEGORY.into(),
            base_color: None,
            texture: None,
            tiling: Some(tiling),
        });
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));

    let index = dir.join("catalog.json");
    let json = serde_json::to_string_pretty(&entries).map_err(|e| Error::json("encoding catalog", e))?;
    write(&index, format!("{json}\n").as_bytes())?;

    let catalog = Catalog::load(&index)?;
    let pairing = PairingTable::default_for(&catalog);
    let json = serde_json::to_string_pretty(&pairing).map_err(|e| Error::json("encoding pairing", e))?;
    write(&dir.join("pairing.json"), format!("{json}\n").as_bytes())?;
    Ok(index)
}

/// Location of the fixture catalog shipped with the crate.
pub fn bundled_catalog_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("catalog")
}
