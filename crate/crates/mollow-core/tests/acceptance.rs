//! End-to-end acceptance checks for the driven-emitter spectrum engine.
//!
//! One test per criterion, each ending in a single `… PASS` line (shown under
//! `--nocapture`; the per-test ok/FAILED line mirrors it either way). The
//! checks pin the physics the engine exists for: the bare Mollow triplet in a
//! flat vacuum, phonon renormalization of the splitting, phonon-induced and
//! reservoir-induced sideband asymmetries at a photonic band edge, the
//! detuning competition between the two, rate directionality, limit
//! identities, and numerical hygiene.

use mollow_core::*;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

struct Ctx {
    t0: Instant,
    bath: PhononBath64,
    res: PhotonReservoir64,
    /// Lower/upper band-edge frequencies (LDOS maxima next to the gap).
    lo: f64,
    hi: f64,
}

fn ctx() -> &'static Ctx {
    static CTX: OnceLock<Ctx> = OnceLock::new();
    CTX.get_or_init(|| {
        let bath = PhononBath::new(0.06, 1.0, 4.0).unwrap();
        let ccw = CcwReservoir::with_midband_purcell(800.0, 4.0, 52000.0, 10.0, 0.0015).unwrap();
        let (lo, hi) = ccw.edge_frequencies();
        Ctx {
            t0: Instant::now(),
            bath,
            res: PhotonReservoir::CoupledCavityWaveguide(ccw),
            lo,
            hi,
        }
    })
}

fn params(omega: f64, delta_lx: f64, omega_l: f64, gamma_d: f64) -> SystemParams64 {
    SystemParams {
        omega,
        delta_lx,
        omega_l,
        gamma_b: 0.0015,
        gamma_d,
    }
}

fn point(p: &SystemParams64, bath: &PhononBath64, res: &PhotonReservoir64) -> PointResult64 {
    compute_point(p, bath, res, &RateQuadrature::default(), None).unwrap()
}

fn s0_asymmetry(pt: &PointResult64, omega_l: f64) -> f64 {
    sideband_asymmetry(&pt.series.omega, &pt.series.s0, omega_l, pt.eta).unwrap()
}

#[test]
fn c01_flat_vacuum_mollow_triplet() {
    let t = Instant::now();
    let p = params(1.0, 0.0, 800.0, 0.0);
    let res = PhotonReservoir::flat(0.0015).unwrap();
    let pt = point(&p, &PhononBath::disabled(), &res);
    assert_eq!(pt.photon.gamma_p, 0.0015); // flat reservoir is a pure rate
    let (w, s) = (&pt.series.omega, &pt.series.s0);

    let pk = find_peaks(w, s, 0.005).unwrap();
    assert_eq!(pk.len(), 3, "expected a triplet, found {}", pk.len());
    for (got, want) in pk.iter().zip([799.0, 800.0, 801.0]) {
        assert!(
            (got.omega - want).abs() <= 0.01 * p.omega,
            "peak at {} vs {want}",
            got.omega
        );
    }
    // two-level-system oracle on resonance: sideband peaks at 1/3 of the
    // central peak — the closed-form Mollow ratio — reproduced within 2%
    let (r_lo, r_up) = (pk[0].height / pk[1].height, pk[2].height / pk[1].height);
    assert!((3.0 * r_lo - 1.0).abs() <= 0.02, "lower/central {r_lo}");
    assert!((3.0 * r_up - 1.0).abs() <= 0.02, "upper/central {r_up}");

    let n = s.len();
    let mx = s.iter().fold(0.0f64, |m, &v| m.max(v));
    let mirror = (0..n)
        .map(|i| (s[i] - s[n - 1 - i]).abs())
        .fold(0.0f64, f64::max);
    assert!(mirror <= 0.005 * mx, "mirror defect {mirror:e}");

    let dt = t.elapsed();
    assert!(dt < Duration::from_secs(5), "took {dt:?}");
    println!(
        "C1 flat-vacuum triplet: side/central {:.6}/{:.6}, mirror {:.1e}, {:?} — PASS",
        r_lo, r_up, mirror, dt
    );
}

#[test]
fn c02_phonon_renormalized_splitting() {
    let c = ctx();
    let res = PhotonReservoir::flat(0.0015).unwrap();
    let p = params(0.4, 0.0, 800.0, 0.0078);
    assert!(
        (c.bath.b_mean - 0.90).abs() <= 0.02,
        "⟨B⟩ = {}",
        c.bath.b_mean
    );

    let split = |pt: &PointResult64| {
        let pk = find_peaks(&pt.series.omega, &pt.series.s0, 0.005).unwrap();
        assert!(pk.len() >= 2, "no resolved sidebands");
        pk.last().unwrap().omega - pk[0].omega
    };
    let on = split(&point(&p, &c.bath, &res));
    let off = split(&point(&p, &PhononBath::disabled(), &res));
    let shrink = on / off;
    assert!(
        (shrink - 0.914507307283295).abs() <= 1e-6,
        "splitting shrink {shrink}"
    );
    // the fitted splitting shrinks by the displacement factor itself
    assert!(
        (shrink / c.bath.b_mean - 1.0).abs() <= 0.01,
        "shrink {shrink} vs ⟨B⟩ {}",
        c.bath.b_mean
    );
    println!(
        "C2 splitting shrink {:.6} vs ⟨B⟩ {:.6} — PASS",
        shrink, c.bath.b_mean
    );
}

#[test]
fn c03_band_center_phonon_asymmetry() {
    let c = ctx();
    let pt = point(&params(1.0, 0.0, 800.0, 0.0078), &c.bath, &c.res);
    let pk = find_peaks(&pt.series.omega, &pt.series.s0, 0.005).unwrap();
    assert_eq!(pk.len(), 3, "expected a triplet, found {}", pk.len());
    let want = [
        (799.0595, 1.835712),
        (799.9973, 0.5217710),
        (800.9288, 0.2525573),
    ];
    for (got, (x, h)) in pk.iter().zip(want) {
        assert!((got.omega - x).abs() <= 1e-4, "peak {} vs {x}", got.omega);
        assert!(
            ((got.height - h) / h).abs() <= 1e-5,
            "height {} vs {h}",
            got.height
        );
    }
    // at band center the reservoir is symmetric; what remains is the phonon
    // asymmetry, which orders the triplet strictly downhill in frequency
    assert!(pk[0].height > pk[1].height && pk[1].height > pk[2].height);
    let ratio = s0_asymmetry(&pt, 800.0);
    assert!((ratio - 7.268496120130086).abs() <= 1e-6 * 7.27, "{ratio}");
    assert!(ratio > 1.0);
    println!("C3 band-center asymmetry {ratio:.4} > 1, heights strictly decreasing — PASS");
}

#[test]
fn c04_projected_spectrum_peak_count() {
    let c = ctx();
    let p = params(1.0, 0.0, 800.0, 0.0078);
    let grid: Vec<f64> = linspace(-6.0, 6.0, 6001)
        .into_iter()
        .map(|x| 800.0 + x)
        .collect();
    let pt = compute_point(&p, &c.bath, &c.res, &RateQuadrature::default(), Some(&grid)).unwrap();

    // the reservoir filter lifts the band-edge LDOS maxima above threshold:
    // triplet + two edge peaks in S_P, triplet alone in S₀
    let pk_p = find_peaks(&grid, &pt.series.sp, 1e-4).unwrap();
    assert_eq!(pk_p.len(), 5, "S_P peaks: {}", pk_p.len());
    let hmax = pk_p.iter().map(|p| p.height).fold(0.0f64, f64::max);
    let want = [
        (796.000092, 0.800540),
        (799.059080, 1.0),
        (799.997347, 0.269163),
        (800.929282, 0.138028),
        (803.999977, 0.085643),
    ];
    for (got, (x, hr)) in pk_p.iter().zip(want) {
        assert!((got.omega - x).abs() <= 1e-5, "peak {} vs {x}", got.omega);
        assert!(
            (got.height / hmax - hr).abs() <= 1e-4,
            "relative height {} vs {hr}",
            got.height / hmax
        );
    }
    let pk_0 = find_peaks(&grid, &pt.series.s0, 1e-4).unwrap();
    assert_eq!(pk_0.len(), 3, "S₀ peaks: {}", pk_0.len());
    println!("C4 S_P has exactly 5 peaks above 1e-4 (S₀ has 3) — PASS");
}

#[test]
fn c05_band_edge_filtering_without_phonons() {
    let c = ctx();
    let off = PhononBath::disabled();
    let lo_pt = point(&params(0.4, 0.0, c.lo, 0.0078), &off, &c.res);
    let hi_pt = point(&params(0.4, 0.0, c.hi, 0.0078), &off, &c.res);
    let r_lo = s0_asymmetry(&lo_pt, c.lo);
    let r_hi = s0_asymmetry(&hi_pt, c.hi);
    assert!((r_lo - 1.4961185321227983).abs() <= 1e-6, "{r_lo}");
    assert!((r_hi - 0.6739379720443596).abs() <= 1e-6, "{r_hi}");
    // the brighter sideband is the one facing the higher LDOS: below the gap
    // that is the lower sideband, above the gap the upper one
    assert!(r_lo > 1.0 && r_hi < 1.0);
    println!("C5 reservoir asymmetry: lower edge {r_lo:.4} > 1, upper edge {r_hi:.4} < 1 — PASS");
}

#[test]
fn c06_phonons_flip_upper_edge_asymmetry() {
    let c = ctx();
    let p = params(0.4, 0.0, c.hi, 0.0078);
    let r_on = s0_asymmetry(&point(&p, &c.bath, &c.res), c.hi);
    let r_off = s0_asymmetry(&point(&p, &PhononBath::disabled(), &c.res), c.hi);
    assert!((r_on - 1.641886124914009).abs() <= 1e-6, "{r_on}");
    // phonon emission favors the lower sideband strongly enough at 4 K to
    // overcome the upper edge's reservoir preference for the upper one
    assert!(
        r_on > r_off,
        "phonons must raise the ratio: {r_on} vs {r_off}"
    );
    assert!(r_on > 1.0, "phonon asymmetry must dominate on resonance");
    println!("C6 upper edge: ratio {r_off:.4} → {r_on:.4} with phonons — PASS");
}

#[test]
fn c07_rate_directionality() {
    let c = ctx();
    let ds = DressedState::new(c.bath.b_mean * 0.4, 0.0);
    let m_lo = photon_rates(&c.res, &c.bath, c.lo, &ds).unwrap().m_p;
    let m_hi = photon_rates(&c.res, &c.bath, c.hi, &ds).unwrap().m_p;
    let m_c = photon_rates(&c.res, &c.bath, 800.0, &ds).unwrap().m_p;
    // the cross rate points toward the higher LDOS side and all but vanishes
    // where the reservoir is locally symmetric
    assert!(m_lo.re > 0.0, "Re M' at lower edge: {}", m_lo.re);
    assert!(m_hi.re < 0.0, "Re M' at upper edge: {}", m_hi.re);
    assert!(m_lo.norm() >= 100.0 * m_c.norm());
    assert!(m_hi.norm() >= 100.0 * m_c.norm());
    let pn = phonon_rates(&c.bath, &ds, &RateQuadrature::default()).unwrap();
    assert!(pn.gamma_u.re > 0.0, "Re Γ_u: {}", pn.gamma_u.re);
    println!(
        "C7 Re M' {:+.2e} (lower) / {:+.2e} (upper), |M'| center {:.1e}, Re Γ_u {:+.2e} — PASS",
        m_lo.re,
        m_hi.re,
        m_c.norm(),
        pn.gamma_u.re
    );
}

#[test]
fn c08_detuned_band_edge_competition() {
    let c = ctx();
    let off = PhononBath::disabled();
    let run = |delta: f64, bath: &PhononBath64| {
        let pt = point(&params(0.4, delta, c.hi, 0.0078), bath, &c.res);
        s0_asymmetry(&pt, c.hi)
    };
    // (detuning, no-phonon ratio, 4 K ratio)
    let table = [
        (-0.1, 0.3194300934518592, 0.7834842690611927),
        (0.2, 1.619425239534665, 6.020515352354168),
        (0.6, 3.2841262378497937, 70.35395998945317),
        (-0.6, 0.025867951225141853, 0.060936379948819404),
    ];
    let mut got = vec![];
    for (dl, want_off, want_on) in table {
        let r_off = run(dl, &off);
        let r_on = run(dl, &c.bath);
        assert!(
            ((r_off - want_off) / want_off).abs() <= 1e-6,
            "Δ={dl}: {r_off} vs {want_off}"
        );
        assert!(
            ((r_on - want_on) / want_on).abs() <= 1e-6,
            "Δ={dl}: {r_on} vs {want_on}"
        );
        got.push((dl, r_off, r_on));
    }
    // small red detuning: the reservoir still favors the upper sideband,
    // phonons pull the ratio back toward symmetry
    assert!(got[0].1 < 1.0 && got[0].2 < 1.0);
    assert!(got[0].2.ln().abs() < got[0].1.ln().abs());
    // moderate blue detuning already flips the preference without phonons
    assert!(got[1].1 > 1.0);
    // far detuning: the sideband nearest the emitter line dominates in every
    // variant, whichever side of the gap it lies on
    assert!(got[2].1 > 1.0 && got[2].2 > 1.0);
    assert!(got[3].1 < 1.0 && got[3].2 < 1.0);
    println!("C8 detuning competition at the upper edge matches in all four regimes — PASS");
}

#[test]
fn c09_limit_identities() {
    let c = ctx();
    // (a) a flat reservoir is a pure decay rate at any operating point
    let flat = PhotonReservoir::flat(0.0012).unwrap();
    for (omr, dl) in [(0.3, 0.0), (0.8, -0.25), (1.3, 0.4)] {
        let r = photon_rates(&flat, &c.bath, 799.3, &DressedState::new(omr, dl)).unwrap();
        assert!((r.gamma_p - 0.0012).abs() <= 1e-10);
        assert!(r.m_p.norm() <= 1e-10 && r.k_p.norm() <= 1e-10 && r.n_p.norm() <= 1e-10);
    }
    // (b) weak drive collapses the rate to the central reservoir sample
    let ds_weak = DressedState::new(1e-3 * c.bath.b_mean, 0.0);
    let r = photon_rates(&c.res, &c.bath, 800.0, &ds_weak).unwrap();
    let want = 2.0 * r.t_d.re;
    assert!(((r.gamma_p - want) / want).abs() <= 1e-3, "{}", r.gamma_p);
    // (c) with phonons off, the assembled rates are bit-identical to the
    // bare-photon combination of the three reservoir samples
    let off = PhononBath::<f64>::disabled();
    assert_eq!(off.b_mean, 1.0);
    let ds = DressedState::new(off.b_mean * 0.7, -0.15);
    assert_eq!(ds.omega_r, 0.7);
    let got = photon_rates(&c.res, &off, c.lo, &ds).unwrap();
    let td = c.res.t_k(&off, c.lo).unwrap();
    let tu = c.res.t_k(&off, c.lo + ds.omega_r).unwrap();
    let tl = c.res.t_k(&off, c.lo - ds.omega_r).unwrap();
    let eta2 = ds.eta * ds.eta;
    let a = ds.omega_r * ds.omega_r / (2.0 * eta2);
    let d = ds.delta_lx / ds.eta;
    let br = td * a + tu * (0.5 * (1.0 - a - d)) + tl * (0.5 * (1.0 - a + d));
    let m_p =
        (td * d + tu * (0.5 * (1.0 - d)) - tl * (0.5 * (1.0 + d))) * (ds.omega_r / (2.0 * ds.eta));
    let k_p = (td - (tu + tl) * 0.5) * a;
    assert_eq!(got.gamma_p, 2.0 * br.re);
    assert_eq!(got.n_p, C64::new(0.0, br.im));
    assert_eq!(got.m_p, m_p);
    assert_eq!(got.k_p, k_p);
    assert_eq!((got.t_d, got.t_u, got.t_l), (td, tu, tl));
    // (d) the drive-off series for Γ_u continues the general formula
    let omr = 1e-6;
    let quad = RateQuadrature::default();
    let general = phonon_rates(&c.bath, &DressedState::new(omr, 0.0), &quad)
        .unwrap()
        .gamma_u;
    let series = gamma_u_small_eta(&c.bath, omr, &quad);
    assert!((general - series).norm() <= 1e-3 * series.norm());
    println!("C9 flat/weak-drive/phonons-off/small-splitting identities hold — PASS");
}

#[test]
fn c10_numerical_hygiene() {
    let c = ctx();
    let p = params(0.4, 0.0, c.lo, 0.0078);
    let ds = DressedState::new(c.bath.b_mean * p.omega, p.delta_lx);
    let quad = RateQuadrature::default();
    let pn = phonon_rates(&c.bath, &ds, &quad).unwrap();
    let ph = photon_rates(&c.res, &c.bath, p.omega_l, &ds).unwrap();
    let liou = build_liouvillian(&p, ds.omega_r, &pn, &ph).unwrap();
    let defect = liou.trace_defect();
    assert!(defect <= 1e-12, "trace defect {defect:e}");

    let rho = steady_state(&liou).unwrap(); // implies a simple zero eigenvalue
    assert!(((rho[[0, 0]] + rho[[1, 1]]).re - 1.0).abs() <= 1e-12);
    assert!((rho[[0, 1]] - rho[[1, 0]].conj()).norm() <= 1e-14);
    assert!(density_min_eigenvalue(&rho) >= -1e-8);

    // quantum-regression stepping equals independent matrix exponentials
    let taus: Vec<f64> = (0..250).map(|i| i as f64 * 0.18).collect();
    let stepped = two_time_correlation(&liou, &rho, &taus);
    for idx in [1, 57, 123, 249] {
        let single = two_time_correlation(&liou, &rho, &[taus[idx]]);
        assert!(
            (stepped[idx] - single[0]).norm() <= 1e-10,
            "stepping defect at τ = {}",
            taus[idx]
        );
    }

    // FFT evaluation of the sideband transform matches direct quadrature
    let modes = correlation_modes(&liou, &rho).unwrap();
    let dt = 0.004;
    let kern: Vec<C64> = (0..6250)
        .map(|i| {
            let t = i as f64 * dt;
            let mut g = modes.g_inf;
            for (l, a) in modes.lambda.iter().zip(&modes.amplitude) {
                g += *a * (*l * t).exp();
            }
            g * (c.bath.phi(t).exp() - 1.0)
        })
        .collect();
    let (nus, sf) = transform_correlation_fft(&kern, dt);
    let sd = transform_correlation_direct(&kern, dt, &nus);
    let smax = sf.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let worst = sf
        .iter()
        .zip(&sd)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-6 * smax, "fft vs direct {worst:e}");

    let dt_all = c.t0.elapsed();
    assert!(dt_all < Duration::from_secs(300), "suite at {dt_all:?}");
    println!("C10 trace {defect:.1e}, regression/FFT agree, elapsed {dt_all:?} — PASS");
}
