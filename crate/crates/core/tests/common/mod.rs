//! Helpers shared by the integration tests, including an independent
//! ray-cast visibility oracle that uses only camera projection and the
//! mirror's plane equation.

#![allow(dead_code)]

use mirrorscene::assets::fixtures::bundled_catalog_dir;
use mirrorscene::assets::{Catalog, PairingTable};
use mirrorscene::geometry::{Vec2, Vec3};
use mirrorscene::render::Camera;
use mirrorscene::scene::{CameraPose, MirrorSpec};

pub fn fixture_catalog() -> (Catalog, PairingTable) {
    let catalog = Catalog::load(&bundled_catalog_dir()).expect("bundled catalog loads");
    let pairing = PairingTable::default_for(&catalog);
    (catalog, pairing)
}

/// Raster size used when testing whether a point is on screen.
const ORACLE_RASTER: u32 = 512;

fn on_screen(cam: &Camera, p: Vec3) -> bool {
    let s = ORACLE_RASTER as f64;
    cam.project(p)
        .is_some_and(|(x, y)| (0.0..s).contains(&x) && (0.0..s).contains(&y))
}

/// Whether some primary ray of `view` reaches `p` directly, and whether some
/// primary ray reaches it after one bounce off the mirror aperture.
/// Occlusion by other objects is ignored.
pub fn point_visibility(mirror: &MirrorSpec, view: &CameraPose, p: Vec3) -> (bool, bool) {
    let cam = Camera::new(view, ORACLE_RASTER, ORACLE_RASTER);
    let direct = on_screen(&cam, p);
    let n = mirror.plane.normal;
    let d = mirror.plane.offset;
    let side_p = n.dot(&p) - d;
    let side_eye = n.dot(&cam.eye) - d;
    if side_p <= 0.0 || side_eye <= 0.0 {
        return (direct, false);
    }
    let image = p - n * (2.0 * side_p);
    let t = side_eye / (side_eye - (n.dot(&image) - d));
    let hit = cam.eye + (image - cam.eye) * t;
    let c = mirror.aperture.center;
    let across = n.cross(&Vec3::z()).normalize();
    let inside = (hit - c).dot(&across).abs() <= mirror.aperture.half_width
        && (hit.z - c.z).abs() <= mirror.aperture.half_height;
    (direct, inside && on_screen(&cam, hit))
}

/// Ray-cast oracle for a unit-cube proxy standing on the floor at `xy`:
/// every camera must see at least one of its 27 lattice points directly
/// and at least one through the mirror.
pub fn proxy_visible_from_all(mirror: &MirrorSpec, rig: &[CameraPose], xy: Vec2, ground_z: f64) -> bool {
    let points: Vec<Vec3> = (0..27)
        .map(|k| {
            let (i, j, l) = (k % 3, k / 3 % 3, k / 9);
            Vec3::new(
                xy.x - 0.5 + 0.5 * i as f64,
                xy.y - 0.5 + 0.5 * j as f64,
                ground_z + 0.5 * l as f64,
            )
        })
        .collect();
    rig.iter().all(|view| {
        let vis: Vec<(bool, bool)> = points.iter().map(|p| point_visibility(mirror, view, *p)).collect();
        vis.iter().any(|v| v.0) && vis.iter().any(|v| v.1)
    })
}

pub fn tempdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("temporary directory")
}
