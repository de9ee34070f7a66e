use ssfilt_core::imgcore::{box_filter, decimate, histogram_match, mean_and_variance, upsample_nearest};
use ssfilt_core::kappamap::{BlurFeatureParams, NltParams};
use ssfilt_core::metrics::{ergas, total_variation};
use ssfilt_core::pipelines::{self, BlurMode, PipelineConfig, Preset};
use ssfilt_core::ssfilter::guided_filter;
use ssfilt_core::{synthetic, Image, ScalarField, Weighting};

fn masked_mean(values: &ScalarField, mask: &ScalarField) -> f64 {
    let (mut s, mut n) = (0.0, 0.0);
    for (v, m) in values.data().iter().zip(mask.data()) {
        if *m > 0.5 {
            s += v;
            n += 1.0;
        }
    }
    s / n
}

#[test]
fn sdof_smooths_far_and_keeps_near_detail() {
    let (img, depth, near) = synthetic::two_plane_scene(96, 96, 21);
    let cfg = Preset::PortraitSdof.config();
    let out = pipelines::sdof(&img, &depth, &cfg).unwrap();
    let far = near.map(|v| 1.0 - v);
    // shrink both regions away from the seam
    let near_core = ScalarField::from_fn(96, 96, |x, y| ((30..66).contains(&x) && (30..66).contains(&y)) as u8 as f64);
    let far_core = ScalarField::from_fn(96, 96, |x, y| (far.get(x, y) == 1.0 && (!(18..78).contains(&x) || !(18..78).contains(&y))) as u8 as f64);
    let r = cfg.filter.radius;
    for c in 0..3 {
        let (_, before) = mean_and_variance(img.plane(c), r).unwrap();
        let (_, after) = mean_and_variance(out.plane(c), r).unwrap();
        assert!(masked_mean(&after, &far_core) < masked_mean(&before, &far_core));
        assert!(masked_mean(&after, &near_core) >= masked_mean(&before, &near_core));
    }
}

#[test]
fn face_checkerboard_cells_move_in_opposite_directions() {
    let img = synthetic::textured(64, 64, 3, 22);
    let mask = synthetic::checkerboard(64, 64, 32);
    let out = pipelines::face_enhance(&img, &mask, &Preset::Face.config()).unwrap();
    let cell = |cx: usize, cy: usize| {
        ScalarField::from_fn(64, 64, move |x, y| {
            (x / 32 == cx && y / 32 == cy && (8..24).contains(&(x % 32)) && (8..24).contains(&(y % 32))) as u8 as f64
        })
    };
    let tv = |i: &Image, m: &ScalarField| total_variation(i, Some(m)).unwrap().value;
    for (cx, cy) in [(0, 0), (1, 1)] {
        assert!(tv(&out, &cell(cx, cy)) < tv(&img, &cell(cx, cy)));
    }
    for (cx, cy) in [(1, 0), (0, 1)] {
        assert!(tv(&out, &cell(cx, cy)) > tv(&img, &cell(cx, cy)));
    }
}

#[test]
fn blur_sharpen_raises_defocused_tv_only() {
    let (img, blurred) = synthetic::half_blurred(96, 64, 23);
    let mut cfg = Preset::Blur.config();
    cfg.blur = BlurFeatureParams {
        window: 9,
        refine_radius: 4,
        refine_epsilon: 0.01,
    };
    let out = pipelines::blur_guided(&img, &cfg, BlurMode::SharpenDefocus).unwrap();
    let soft = ScalarField::from_fn(96, 64, |x, _| (x < 36) as u8 as f64);
    let sharp = ScalarField::from_fn(96, 64, |x, _| (x >= 60) as u8 as f64);
    let tv = |i: &Image, m: &ScalarField| total_variation(i, Some(m)).unwrap().value;
    assert!(tv(&out, &soft) > tv(&img, &soft));
    assert!((tv(&out, &sharp) / tv(&img, &sharp) - 1.0).abs() < 0.02);
    assert_eq!(blurred.get(0, 0), 1.0);
}

#[test]
fn blur_mode_rejects_inverted_asymptotes() {
    let img = synthetic::textured(48, 48, 3, 24);
    let mut cfg = Preset::Blur.config();
    cfg.blur.window = 9;
    cfg.blur.refine_radius = 4;
    cfg.nlt = NltParams::new(1.5, 3.0, 20.0, 0.6);
    assert!(pipelines::blur_guided(&img, &cfg, BlurMode::SmoothDefocus).is_err());
    cfg.nlt = NltParams::new(0.0, 0.5, 20.0, 0.6);
    assert!(pipelines::blur_guided(&img, &cfg, BlurMode::SharpenDefocus).is_err());
}

#[test]
fn flash_with_unit_kappa_runs_but_is_not_identity() {
    let (noflash, flash) = synthetic::flash_pair(64, 64, 25);
    let mut cfg = Preset::FlashFusion.config();
    cfg.filter = cfg.filter.with_kappa(1.0).with_iterations(2);
    cfg.filter.radius = 5;
    let out = pipelines::flash_noflash(&noflash, &flash, &cfg).unwrap();
    assert_eq!((out.width(), out.height(), out.channels()), (64, 64, 3));
}

#[test]
fn pansharpen_at_full_resolution_is_close_to_guided_smoothing() {
    let ms = synthetic::multispectral(64, 64, 3, 26);
    let pan = ms.luma();
    let cfg = PipelineConfig {
        filter: Preset::Pansharpen.config().filter.with_kappa(0.0).with_weighting(Weighting::Uniform),
        ..PipelineConfig::default()
    };
    let out = pipelines::pansharpen(&ms, &pan, &cfg).unwrap();
    let gf = Image::from_planes(
        ms.planes()
            .iter()
            .map(|p| guided_filter(p, &pan, cfg.filter.radius, cfg.filter.epsilon).unwrap())
            .collect(),
    )
    .unwrap();
    // same grid, kappa = 0, uniform weights: guided filtering then matching
    let expected = histogram_match(&gf, &ms).unwrap();
    assert!(out.max_abs_diff(&expected) < 1e-12);
    // once epsilon is below the band contrast, edge-aware smoothing beats a plain box
    let boxed = Image::from_planes(ms.planes().iter().map(|p| box_filter(p, cfg.filter.radius).unwrap()).collect()).unwrap();
    let e_box = ergas(&boxed, &ms, 1.0).unwrap().value;
    let mut last = f64::INFINITY;
    for eps in [0.1, 0.01, 1e-3] {
        let mut c = cfg.clone();
        c.filter.epsilon = eps;
        let e = ergas(&pipelines::pansharpen(&ms, &pan, &c).unwrap(), &ms, 1.0).unwrap().value;
        assert!(e < last, "ergas {e} at epsilon {eps}");
        last = e;
    }
    assert!(last < e_box, "ergas {last} vs box {e_box}");
}

#[test]
fn pansharpen_beats_nearest_on_small_scene() {
    let truth = synthetic::multispectral(128, 128, 4, 27);
    let ms = decimate(&truth, 4).unwrap();
    let out = pipelines::pansharpen(&ms, &truth.luma(), &Preset::Pansharpen.config()).unwrap();
    let base = upsample_nearest(&ms, 128, 128).unwrap();
    assert!(ergas(&out, &truth, 4.0).unwrap().value < ergas(&base, &truth, 4.0).unwrap().value);
}

#[test]
fn pipelines_are_deterministic_and_keep_dimensions() {
    let (img, depth, _) = synthetic::two_plane_scene(40, 30, 28);
    let cfg = Preset::PortraitSdof.config();
    let a = pipelines::sdof(&img, &depth, &cfg).unwrap();
    let b = pipelines::sdof(&img, &depth, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!((a.width(), a.height()), (40, 30));
}
