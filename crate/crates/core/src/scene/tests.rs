use super::*;
use crate::kernels::PARITY_EIGENVALUES;
use crate::states::{
    build_helium, build_reference_spin_state, spin_orbital, HeliumState, OrbitalLabel,
    ReferencePanel, SpinState,
};
use approx::assert_abs_diff_eq;

fn small_grid(recipe: &mut FigureRecipe, count: usize) {
    recipe.grid = GridSpec { count, extent: 4.5 };
}

#[test]
fn product_state_textures_match_single_spin_panel() {
    let rho = spin_orbital(OrbitalLabel::ThreeDz2, SpinState::Up).unwrap().density();
    let mut recipe = FigureRecipe::new(&rho, Some(0), &[0]).unwrap();
    small_grid(&mut recipe, 21);
    let scene = build_scene(&rho, &recipe).unwrap();
    assert!(!scene.glyphs.is_empty());

    // reference: the bare up state on a single sphere
    let up = build_reference_spin_state(ReferencePanel::A).unwrap().density();
    let up_recipe = FigureRecipe::new(&up, None, &[0]).unwrap();
    let up_scene = build_scene(&up, &up_recipe).unwrap();
    assert_eq!(up_scene.glyphs.len(), 1);
    let reference = &up_scene.glyphs[0].texture;

    let mut best = 0.0f64;
    for glyph in &scene.glyphs {
        best = best.max(glyph.opacity);
        for (a, b) in glyph.texture.iter().zip(reference) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }
    // normalization: some glyph attains alpha = 1
    assert_abs_diff_eq!(best, 1.0, epsilon = 1e-12);
}

#[test]
fn helium_ground_texture_is_constant_minus_half() {
    let rho = build_helium(HeliumState::Ground).unwrap().density();
    let mut recipe = FigureRecipe::new(&rho, Some(0), &[0, 1]).unwrap();
    small_grid(&mut recipe, 15);
    let scene = build_scene(&rho, &recipe).unwrap();
    assert!(!scene.glyphs.is_empty());
    for glyph in &scene.glyphs {
        for v in &glyph.texture {
            assert_abs_diff_eq!(*v, -0.5, epsilon = 1e-12);
        }
    }
}

#[test]
fn threshold_drops_faint_glyphs() {
    let rho = spin_orbital(OrbitalLabel::ThreeDz2, SpinState::Up).unwrap().density();
    let mut recipe = FigureRecipe::new(&rho, Some(0), &[0]).unwrap();
    small_grid(&mut recipe, 21);
    let scene = build_scene(&rho, &recipe).unwrap();
    assert!(scene.glyphs.len() < 21 * 21);
    for glyph in &scene.glyphs {
        assert!(glyph.opacity >= recipe.threshold);
    }
    // constant mode keeps the full lattice
    recipe.opacity = OpacityMode::Constant;
    let scene = build_scene(&rho, &recipe).unwrap();
    assert_eq!(scene.glyphs.len(), 21 * 21);
}

#[test]
fn single_spin_texture_extrema_bound() {
    let rho = build_reference_spin_state(ReferencePanel::B).unwrap().density();
    let recipe = FigureRecipe::new(&rho, None, &[0]).unwrap();
    let scene = build_scene(&rho, &recipe).unwrap();
    for v in &scene.glyphs[0].texture {
        assert!(*v >= PARITY_EIGENVALUES.1 - 1e-12);
        assert!(*v <= PARITY_EIGENVALUES.0 + 1e-12);
    }
}

#[test]
fn global_phase_keeps_the_peak_glyph() {
    use crate::states::{ProductKet, StateVector};
    use num_complex::Complex64;
    let base = spin_orbital(OrbitalLabel::ThreeDz2, SpinState::Up).unwrap();
    let phase = Complex64::from_polar(1.0, 1.234);
    let rotated = StateVector::normalized(
        base.signature().clone(),
        base.terms()
            .iter()
            .map(|(a, k)| (phase * a, ProductKet::new(k.entries().to_vec())))
            .collect(),
    )
    .unwrap();

    let argmax = |rho: &crate::states::DensityOperator, count: usize| {
        let mut recipe = FigureRecipe::new(rho, Some(0), &[0]).unwrap();
        small_grid(&mut recipe, count);
        let scene = build_scene(rho, &recipe).unwrap();
        scene
            .glyphs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.opacity.total_cmp(&b.1.opacity))
            .map(|(i, g)| (i, g.center))
            .unwrap()
    };
    let (i0, c0) = argmax(&base.density(), 21);
    let (i1, c1) = argmax(&rotated.density(), 21);
    assert_eq!(i0, i1);
    assert_eq!(c0, c1);

    // the winning location survives a resolution change that still contains it
    let (_, c2) = argmax(&base.density(), 31);
    // d_z2 peaks on the z axis; both grids contain x = 0 exactly
    assert_abs_diff_eq!(c0[0], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(c2[0], 0.0, epsilon = 1e-12);
    assert!((c0[2] - c2[2]).abs() <= 0.5 * 9.0 / 20.0 + 1e-9);
}

#[test]
fn render_is_deterministic_and_blue_up() {
    let rho = build_reference_spin_state(ReferencePanel::A).unwrap().density();
    let recipe = FigureRecipe::new(&rho, None, &[0]).unwrap();
    let scene = build_scene(&rho, &recipe).unwrap();
    let camera = OrthoCamera::with_canvas(128, 128);
    let image1 = render(&scene, &camera).unwrap();
    let image2 = render(&scene, &camera).unwrap();
    assert_eq!(image1, image2);

    // the kernel of |up> is positive down to Theta ~ 125 deg, so the top of
    // the sphere is strongly blue while the bottom cap goes red
    let mut top = (0i64, 0i64); // (red, blue)
    let mut bottom = (0i64, 0i64);
    for y in 0..128u32 {
        for x in 0..128u32 {
            let idx = ((y * 128 + x) * 3) as usize;
            let (r, b) = (image1.pixels[idx] as i64, image1.pixels[idx + 2] as i64);
            if y < 20 {
                top = (top.0 + r, top.1 + b);
            } else if y >= 108 {
                bottom = (bottom.0 + r, bottom.1 + b);
            }
        }
    }
    assert!(top.1 > top.0, "top cap should lean blue");
    assert!(bottom.0 > bottom.1, "bottom cap should lean red");
}

#[test]
fn empty_scene_renders_background() {
    let scene = Scene { sphere_samples: (4, 4), plane_value: 0.0, glyphs: vec![] };
    let camera = OrthoCamera::with_canvas(64, 64);
    let image = render(&scene, &camera).unwrap();
    for px in image.pixels.chunks(3) {
        assert_eq!(px, render::DEFAULT_BACKGROUND);
    }
    assert!(render(&scene, &OrthoCamera::with_canvas(32, 32)).is_err());
}

#[test]
fn ppm_header_and_size() {
    let scene = Scene { sphere_samples: (4, 4), plane_value: 0.0, glyphs: vec![] };
    let image = render(&scene, &OrthoCamera::with_canvas(64, 70)).unwrap();
    let bytes = image.encode_ppm();
    assert!(bytes.starts_with(b"P6\n64 70\n255\n"));
    assert_eq!(bytes.len(), 13 + 64 * 70 * 3);
}

#[test]
fn scene_json_round_trip() {
    let rho = spin_orbital(OrbitalLabel::OneS, SpinState::Up).unwrap().density();
    let mut recipe = FigureRecipe::new(&rho, Some(0), &[0]).unwrap();
    recipe.arrows = true;
    small_grid(&mut recipe, 9);
    let scene = build_scene(&rho, &recipe).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.json");
    export_scene(&scene, &path).unwrap();

    let text = std::fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["version"], SCENE_VERSION);
    assert_eq!(doc["plane"]["axis"], "y");
    assert_eq!(doc["colormap"]["range"][0], -1.0);
    assert_eq!(doc["glyphs"].as_array().unwrap().len(), scene.glyphs.len());

    let back = import_scene(&path).unwrap();
    assert_eq!(back.glyphs.len(), scene.glyphs.len());
    for (a, b) in scene.glyphs.iter().zip(&back.glyphs) {
        assert_eq!(a.center, b.center);
        assert_eq!(a.radius, b.radius);
        assert_eq!(a.opacity, b.opacity);
        assert_eq!(a.arrow, b.arrow);
        for (x, y) in a.texture.iter().zip(&b.texture) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }
}

#[test]
fn bad_recipes_are_rejected() {
    let rho = build_reference_spin_state(ReferencePanel::A).unwrap().density();
    let mut recipe = FigureRecipe::new(&rho, None, &[0]).unwrap();
    recipe.threshold = 1.0;
    assert!(build_scene(&rho, &recipe).is_err());
    let mut recipe = FigureRecipe::new(&rho, None, &[0]).unwrap();
    recipe.sphere_samples = (1, 8);
    assert!(build_scene(&rho, &recipe).is_err());
}
