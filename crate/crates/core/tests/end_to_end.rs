use std::path::PathBuf;

use tdsofdm::analysis::binomial_sigma;
use tdsofdm::channel::ChannelProfile;
use tdsofdm::dsp::qfunc;
use tdsofdm::frame::Modulation;
use tdsofdm::harness::{mc_point, run_mc_ber, run_theory, Link, ScenarioConfig};

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn small(modulation: Modulation) -> ScenarioConfig {
    let mut c = ScenarioConfig::default();
    c.frame.n_fft = 256;
    c.frame.pn_len = 64;
    c.frame.modulation = modulation;
    c
}

#[test]
fn shipped_recipes_and_profiles_load() {
    for name in ["bpsk-awgn.cfg", "response.cfg", "qam-awgn.cfg", "multipath-criterion.cfg"] {
        let cfg = ScenarioConfig::load(workspace().join("recipes").join(name)).unwrap();
        cfg.validate().unwrap();
        cfg.profile().unwrap();
        assert_eq!(cfg.fingerprint().unwrap().len(), 16);
    }
    for name in ["two-ray.txt", "three-ray.txt", "brazil-b.txt"] {
        let p = ChannelProfile::load(&workspace().join("profiles").join(name)).unwrap();
        let power: f64 = p.taps().iter().map(|t| t.gain.norm_sqr()).sum();
        assert!((power - 1.0).abs() < 1e-12);
    }
}

/// Oracle: textbook BPSK, `Q(sqrt(2 Eb/N0))` at 8 dB is 1.909e-4.
#[test]
fn bpsk_matches_textbook_at_zero_phase() {
    let mut cfg = ScenarioConfig::default();
    cfg.frame.modulation = Modulation::Bpsk;
    cfg.seed = 21;
    cfg.mc.min_bits = 1_500_000;
    cfg.mc.min_errors = 200;
    let link = Link::new(&cfg, &ChannelProfile::awgn(), 0.0).unwrap();
    let p = mc_point(&cfg, &link, 8.0, 0, 0).unwrap();
    let want = qfunc((2.0 * 10f64.powf(0.8)).sqrt());
    assert!((want - 1.909e-4).abs() < 1e-6);
    let sigma = binomial_sigma(want, p.bit_count);
    assert!((p.ber - want).abs() < 3.0 * sigma, "{} vs {want} (sigma {sigma})", p.ber);
}

#[test]
fn error_rate_is_periodic_in_phase() {
    let mut cfg = small(Modulation::Qam16);
    cfg.mc.min_bits = 200_000;
    cfg.mc.min_errors = 200;
    let profile = ChannelProfile::two_ray(0.75, 0.5).unwrap();
    let a = mc_point(&cfg, &Link::new(&cfg, &profile, 0.3).unwrap(), 10.0, 0, 0).unwrap();
    let b = mc_point(&cfg, &Link::new(&cfg, &profile, -0.7).unwrap(), 10.0, 0, 0).unwrap();
    let tol = 3.0 * (a.ber_sigma().powi(2) + b.ber_sigma().powi(2)).sqrt();
    assert!((a.ber - b.ber).abs() < tol, "{} vs {}", a.ber, b.ber);
}

#[test]
fn runs_are_reproducible_and_seed_sensitive() {
    let mut cfg = small(Modulation::Qam64);
    cfg.channel = "two-ray:0.5:0.6".into();
    cfg.phase.epsilon = vec![0.0, 0.25];
    cfg.sweep.ebn0_db = vec![12.0, 16.0];
    cfg.mc.min_bits = 30_000;
    cfg.mc.min_errors = 30;
    let a = run_mc_ber(&cfg).unwrap();
    let b = run_mc_ber(&cfg).unwrap();
    assert_eq!(a.points, b.points);
    assert_eq!(a.fingerprint, b.fingerprint);
    cfg.seed += 1;
    let c = run_mc_ber(&cfg).unwrap();
    assert_ne!(a.points, c.points);
    assert_ne!(a.fingerprint, c.fingerprint);
}

#[test]
fn monte_carlo_tracks_theory_shape() {
    let mut cfg = small(Modulation::Qam16);
    cfg.phase.epsilon = vec![0.0, 0.5];
    cfg.sweep.ebn0_db = vec![6.0, 10.0];
    cfg.mc.min_bits = 100_000;
    cfg.mc.min_errors = 200;
    let mc = run_mc_ber(&cfg).unwrap();
    let th = run_theory(&cfg).unwrap();
    for eps in [0.0, 0.5] {
        let m = mc.series(eps, tdsofdm::analysis::BerSource::MonteCarlo);
        let t = th.series(eps, tdsofdm::analysis::BerSource::Theory);
        assert_eq!(m.len(), 2);
        assert!(m[1].ber < m[0].ber);
        for (p, q) in m.iter().zip(&t) {
            let ratio = p.ber / q.ber;
            assert!((0.8..1.25).contains(&ratio), "eps {eps} {} dB: {} vs {}", p.ebn0_db, p.ber, q.ber);
        }
    }
}
