//! Reflects points and a camera in the default mirror plane and shows that
//! a ray from the mirrored camera is the mirror image of the real ray.
//!
//! ```text
//! cargo run --example mirror_reflection
//! ```

use mirrorscene::geometry::{reflect_point, reflection_transform, Plane, Vec3};
use mirrorscene::render::Camera;
use mirrorscene::scene::camera_rig;

fn main() {
    let plane = Plane::new(Vec3::y(), 0.0);
    let m = reflection_transform(&plane);
    println!("reflection matrix:{m}");

    for p in [Vec3::new(1.0, 2.0, 0.5), Vec3::new(-0.3, 0.7, 1.8)] {
        let q = reflect_point(&plane, p);
        println!("{:?} -> {:?}", p.as_slice(), q.as_slice());
    }

    let view = camera_rig()[4];
    let cam = Camera::new(&view, 64, 64);
    let virt = cam.reflected(&plane);
    println!("eye {:?}, mirrored eye {:?}", cam.eye.as_slice(), virt.eye.as_slice());
    for (x, y) in [(32.0, 32.0), (5.5, 60.25)] {
        let real = cam.ray(x, y);
        let mirrored = virt.ray(x, y);
        let expected = plane.reflect_vector(real.dir);
        println!(
            "pixel ({x}, {y}): |mirrored dir - reflected real dir| = {:.2e}",
            (mirrored.dir - expected).norm()
        );
    }
}
