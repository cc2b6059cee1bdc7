mod common;

use common::{max_excursion, pluck_releases, ramp, releases_alternate, seconds, single_mode_decay_db};
use inverse_control::gestures::{random_gesture, GestureSpec};
use inverse_control::physics::{build_preset, render_preset, LinkKind, ModelPreset};
use inverse_control::Error;

#[test]
fn pluck_is_silent_far_below_the_string() {
    let out = render_preset(ModelPreset::PluckAResonator, &vec![-0.05; 44_100]).unwrap();
    assert!(out.iter().all(|&y| y == 0.0));
}

#[test]
fn every_preset_is_silent_at_rest_away_from_contacts() {
    for preset in ModelPreset::ALL {
        let out = render_preset(preset, &vec![-0.05; 4410]).unwrap();
        assert!(out.iter().all(|&y| y == 0.0), "{preset} made sound at rest");
    }
}

#[test]
fn ramp_is_silent_until_the_crossing_then_sounds() {
    let gesture = ramp(-0.05, 0.05, 44_100);
    let out = render_preset(ModelPreset::PluckAResonator, &gesture).unwrap();
    let crossing = gesture.iter().position(|&g| g > 0.0).unwrap();
    assert!(out[..crossing].iter().all(|&y| y == 0.0));
    let window = &out[crossing..crossing + seconds(0.010)];
    let rms = (window.iter().map(|y| y * y).sum::<f64>() / window.len() as f64).sqrt();
    assert!(rms > 0.0);
}

#[test]
fn single_mode_decays_sixty_db_in_t60() {
    for (f, t60) in [(440.0, 1.0), (880.0, 0.5), (220.0, 2.0)] {
        let (measured, closed) = single_mode_decay_db(f, t60);
        assert!((measured + 60.0).abs() <= 1.0, "{f} Hz: {measured} dB");
        assert!((measured - closed).abs() <= 1.0, "{f} Hz: {measured} vs {closed} dB");
    }
}

#[test]
fn pluck_releases_alternate_under_random_gestures() {
    for preset in [ModelPreset::PluckAResonator, ModelPreset::PluckHarp10] {
        for seed in 0..3 {
            let g = random_gesture(&GestureSpec::new(10.0, seed)).into_samples();
            let events = pluck_releases(&mut build_preset(preset), &g);
            assert!(events.len() > 4, "{preset} seed {seed}: only {} plucks", events.len());
            assert!(releases_alternate(&events), "{preset} seed {seed}");
        }
    }
}

#[test]
fn positions_stay_bounded_over_a_minute() {
    let g = random_gesture(&GestureSpec::new(60.0, 7)).into_samples();
    for preset in ModelPreset::ALL {
        let worst = max_excursion(preset, &g);
        assert!(worst < 1.0, "{preset} reached {worst} m");
    }
}

#[test]
fn full_sweep_peaks_inside_output_range() {
    let mut sweep = ramp(-0.05, 0.05, 44_100);
    sweep.extend(ramp(0.05, -0.05, 44_100));
    for preset in ModelPreset::ALL {
        let out = render_preset(preset, &sweep).unwrap();
        let peak = out.iter().fold(0.0f64, |m, y| m.max(y.abs()));
        assert!((0.1..=0.9).contains(&peak), "{preset} peaks at {peak}");
    }
}

/// Per-10 ms peaks of `out` from `stop` on.
fn window_peaks(out: &[f64], stop: usize) -> Vec<f64> {
    out[stop..]
        .chunks_exact(seconds(0.010))
        .map(|c| c.iter().fold(0.0f64, |m, y| m.max(y.abs())))
        .collect()
}

/// Asserts the envelope never rises after its first window until it is
/// 80 dB below its peak, and that it gets there.
fn assert_monotone_decay(label: &str, peaks: &[f64]) {
    let top = peaks.iter().cloned().fold(0.0, f64::max);
    assert!(top > 0.0, "{label} was silent");
    let floor = top * 1e-4;
    let tail: Vec<f64> = peaks.iter().skip(1).cloned().take_while(|&p| p >= floor).collect();
    for (k, w) in tail.windows(2).enumerate() {
        assert!(w[1] <= w[0], "{label}: envelope rose at window {}", k + 2);
    }
    assert!(*peaks.last().unwrap() < floor, "{label} did not reach -80 dB");
}

#[test]
fn sound_decays_once_the_gesture_withdraws() {
    let mut gesture = ramp(-0.05, 0.05, seconds(0.5));
    gesture.extend(ramp(0.05, -0.05, seconds(0.5)));
    let stop = gesture.len();
    gesture.extend(vec![-0.05; seconds(4.0)]);
    for preset in [
        ModelPreset::PluckAResonator,
        ModelPreset::TouchSeveralModalResn,
        ModelPreset::ScratchMassLinkChain,
    ] {
        let out = render_preset(preset, &gesture).unwrap();
        assert_monotone_decay(preset.name(), &window_peaks(&out, stop));
    }
}

#[test]
fn one_harp_string_decays_monotonically() {
    // from between the two middle strings up past the one at +5 mm
    let mut gesture = ramp(0.001, 0.012, seconds(0.3));
    let stop = gesture.len();
    gesture.extend(vec![0.012; seconds(4.0)]);
    let mut harp = build_preset(ModelPreset::PluckHarp10);
    let events = pluck_releases(&mut harp, &gesture);
    assert_eq!(events.len(), 1, "expected exactly one plucked string");
    let out = build_preset(ModelPreset::PluckHarp10).render(&gesture).unwrap();
    assert_monotone_decay("single harp string", &window_peaks(&out, stop));
}

#[test]
fn many_harp_strings_die_away() {
    // strings tuned to a pentatonic scale beat against each other, so only
    // the end point of the decay is checked here
    let mut gesture = ramp(-0.05, 0.05, seconds(0.5));
    gesture.extend(ramp(0.05, -0.05, seconds(0.5)));
    let stop = gesture.len();
    gesture.extend(vec![-0.05; seconds(4.0)]);
    let mut harp = build_preset(ModelPreset::PluckHarp10);
    let out = harp.render(&gesture).unwrap();
    let engaged = harp.links().iter().any(|l| matches!(&l.kind, LinkKind::Pluck(p) if p.is_engaged()));
    assert!(!engaged, "a plectrum is still holding a string");
    let peaks = window_peaks(&out, stop);
    let top = peaks.iter().cloned().fold(0.0, f64::max);
    assert!(*peaks.last().unwrap() < top * 1e-4);
}

#[test]
fn every_harp_string_plucks_both_ways_on_a_sweep() {
    let mut sweep = ramp(-0.05, 0.05, seconds(0.5));
    sweep.extend(ramp(0.05, -0.05, seconds(0.5)));
    let mut harp = build_preset(ModelPreset::PluckHarp10);
    let events = pluck_releases(&mut harp, &sweep);
    for string in 0..10 {
        let signs: Vec<f64> = events.iter().filter(|e| e.0 == string).map(|e| e.1).collect();
        assert_eq!(signs, [1.0, -1.0], "string {string}");
    }
}

#[test]
fn reset_matches_a_fresh_graph() {
    let g = random_gesture(&GestureSpec::new(2.0, 3)).into_samples();
    for preset in ModelPreset::ALL {
        let fresh = build_preset(preset).render(&g).unwrap();
        let mut used = build_preset(preset);
        used.render(&g[..g.len() / 2]).unwrap();
        used.reset();
        assert_eq!(used, build_preset(preset), "{preset} reset left state behind");
        assert_eq!(used.render(&g).unwrap(), fresh, "{preset}");

        let mut twice = build_preset(preset);
        twice.render(&g).unwrap();
        twice.reset();
        let once = twice.clone();
        twice.reset();
        assert_eq!(twice, once, "{preset} reset is not idempotent");
    }
}

#[test]
fn reset_mid_render_then_rest_is_silent() {
    let g = random_gesture(&GestureSpec::new(1.0, 11)).into_samples();
    for preset in ModelPreset::ALL {
        let mut graph = build_preset(preset);
        graph.render(&g).unwrap();
        graph.reset();
        let out = graph.render(&vec![-0.05; 4410]).unwrap();
        assert!(out.iter().all(|&y| y == 0.0), "{preset}");
    }
}

#[test]
fn touch_force_is_zero_without_penetration() {
    let g = random_gesture(&GestureSpec::new(5.0, 5)).into_samples();
    let mut graph = build_preset(ModelPreset::TouchSeveralModalResn);
    let mut contacts = 0;
    for &x in &g {
        graph.step(x);
        for link in graph.links() {
            if let LinkKind::Touch(t) = &link.kind {
                if t.penetration() <= 0.0 {
                    assert_eq!(link.last_force(), 0.0);
                } else {
                    contacts += 1;
                }
            }
        }
    }
    assert!(contacts > 0, "gesture never touched a resonator");
}

#[test]
fn rendering_is_deterministic() {
    let g = random_gesture(&GestureSpec::new(3.0, 9)).into_samples();
    for preset in ModelPreset::ALL {
        let a = render_preset(preset, &g).unwrap();
        let b = render_preset(preset, &g).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()), "{preset}");
        assert_eq!(build_preset(preset), build_preset(preset));
    }
}

#[test]
fn out_of_range_gestures_are_clamped() {
    let wild: Vec<f64> = ramp(-0.3, 0.3, 4410);
    let clamped: Vec<f64> = wild.iter().map(|g| g.clamp(-0.05, 0.05)).collect();
    for preset in ModelPreset::ALL {
        assert_eq!(render_preset(preset, &wild).unwrap(), render_preset(preset, &clamped).unwrap());
    }
}

#[test]
fn empty_gesture_is_rejected() {
    for preset in ModelPreset::ALL {
        assert!(matches!(render_preset(preset, &[]), Err(Error::EmptyInput)));
    }
}
