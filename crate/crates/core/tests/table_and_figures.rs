use std::f64::consts::FRAC_1_SQRT_2;

use mzi_parity::states::{self, FockTerm, StateFamily};
use mzi_parity::sweep::{self, fig2_data, fig3_data, fig4_data, PhiMode};
use mzi_parity::TwoModeState;
use num_complex::Complex64;

/// Terms as (n_a, n_b, amplitude) after removing the global phase of the
/// first term.
fn normalized_terms(state: &TwoModeState) -> Vec<(u32, u32, Complex64)> {
    let terms: Vec<FockTerm> = state.fock_terms().into_iter().filter(|t| t.amplitude.norm() > 1e-14).collect();
    let phase = terms[0].amplitude / terms[0].amplitude.norm();
    let mut out: Vec<_> = terms.iter().map(|t| (t.n_a, t.n_b, t.amplitude / phase)).collect();
    out.sort_by_key(|t| (t.0, t.1));
    out
}

fn assert_fock(state: &TwoModeState, expected: &[(u32, u32, f64)]) {
    let got = normalized_terms(state);
    let mut want: Vec<_> = expected.to_vec();
    want.sort_by_key(|t| (t.0, t.1));
    assert_eq!(got.len(), want.len(), "{}: {got:?}", state.label());
    for ((ga, gb, gamp), (wa, wb, wamp)) in got.iter().zip(&want) {
        assert_eq!((ga, gb), (wa, wb), "{}", state.label());
        assert!((gamp - Complex64::new(*wamp, 0.0)).norm() < 1e-12, "{}: {gamp} vs {wamp}", state.label());
    }
}

#[test]
fn fock_notation_of_the_table_rows() {
    let h = FRAC_1_SQRT_2;
    for n in [2u32, 4, 6, 8, 10] {
        // row 2: |N>_a |0>_b
        assert_fock(&states::single_fock_input(n).unwrap(), &[(n, 0, 1.0)]);
        // row 3: |N>_a |N>_b with N photons per mode
        assert_fock(&states::dual_fock_input(n / 2).unwrap(), &[(n / 2, n / 2, 1.0)]);
        // row 4: |N/2, N/2> + |N/2+1, N/2-1>
        assert_fock(&states::yurke_input(n).unwrap(), &[(n / 2, n / 2, h), (n / 2 + 1, n / 2 - 1, h)]);
        // row 6: |N/2+1, N/2-1> + |N/2-1, N/2+1>
        assert_fock(&states::pezze_smerzi_input(n).unwrap(), &[(n / 2 + 1, n / 2 - 1, h), (n / 2 - 1, n / 2 + 1, h)]);
        // row 8: internal |N, 0> + |0, N>
        assert_fock(&states::noon_internal(n).unwrap(), &[(n, 0, h), (0, n, h)]);
    }
    for n in [1u32, 3, 5, 9] {
        // row 5: |(N+1)/2, (N-1)/2> + |(N-1)/2, (N+1)/2>
        let (up, down) = (n.div_ceil(2), n / 2);
        assert_fock(&states::yuen_input(n, true).unwrap(), &[(up, down, h), (down, up, h)]);
    }
    // the Fock column of row 7 is garbled (its kets do not conserve photon
    // number); the Schwinger column fixes the moduli
    for n in [2u32, 5, 8] {
        let state = states::berry_wiseman_internal(n).unwrap();
        let amps = states::berry_wiseman_amplitudes(n).unwrap();
        for (term, c) in state.fock_terms().iter().zip(amps) {
            assert!((term.amplitude.norm() - c).abs() < 1e-15);
            assert_eq!(term.n_a + term.n_b, n);
        }
    }
    assert_eq!(states::pezze_smerzi_input(4).unwrap().fock_notation(), "0.70710678 |3>_a|1>_b + 0.70710678 |1>_a|3>_b");
}

#[test]
fn table_reproduction() {
    let rows = sweep::compute_table().unwrap();
    assert_eq!(rows.len(), 8);
    for row in &rows {
        if let Some(diff) = row.abs_diff {
            assert!(diff < 1e-6, "row {}: {row:?}", row.row);
        }
        assert!(row.delta_phi >= row.heisenberg * (1.0 - 1e-9));
    }
    let noon = &rows[7];
    assert_eq!(noon.n, 8);
    assert!((noon.delta_phi - 0.125).abs() < 1e-9);
    assert!((rows[0].delta_phi - 1.0 / 8f64.sqrt()).abs() < 1e-4);
    let modified_yuen = &rows[4];
    assert_eq!(modified_yuen.n, 9);
    assert!(modified_yuen.delta_phi < 1.0 / 3.0);
    for row in &rows[4..7] {
        assert!(row.closed_form.is_none());
        assert!(row.delta_phi < row.shot_noise);
    }
}

#[test]
fn fig2_coefficients() {
    let data = fig2_data().unwrap();
    assert_eq!(data.len(), 101);
    for i in 0..=100 {
        assert!((data[i].1.norm() - data[100 - i].1.norm()).abs() < 1e-12);
        assert_eq!(data[i].0, -data[100 - i].0);
    }
    let norm: f64 = data.iter().map(|(_, a)| a.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    let sign_changes = data.windows(2).filter(|w| w[0].1.re * w[1].1.re < 0.0).count();
    assert!(sign_changes > 10);
}

#[test]
fn fig3_panels() {
    let panels = fig3_data().unwrap();
    assert_eq!(panels.iter().map(|p| p.name.as_str()).collect::<Vec<_>>(), ["fig3_I", "fig3_II", "fig3_III"]);

    // panel I is the dual-Fock sweep
    let dual = panels[0].column("dual_fock").unwrap();
    let sweep = sweep::sweep_family(&StateFamily::DualFock, 2..=100, PhiMode::Limit).unwrap();
    assert_eq!(dual.len(), sweep.len());
    for ((n, value), record) in dual.iter().zip(&sweep) {
        assert_eq!(*n, record.n);
        assert_eq!(value.unwrap(), record.delta_phi);
        let nf = f64::from(*n);
        let want = 2f64.sqrt() / (nf * (nf + 2.0)).sqrt();
        assert!((value.unwrap() / want - 1.0).abs() < 1e-6);
        assert!(value.unwrap() < record.shot_noise && value.unwrap() >= record.heisenberg);
    }

    // panel III: theta = 0 and theta = pi coincide for N = 2 mod 4 and
    // converge for N = 0 mod 4
    let zero = panels[2].column("theta_0").unwrap();
    let pi = panels[2].column("theta_pi").unwrap();
    let mut gaps = Vec::new();
    for ((n, a), (_, b)) in zero.iter().zip(&pi) {
        let (a, b) = (a.unwrap(), b.unwrap());
        let gap = (a - b).abs() / a.min(b);
        if n % 4 == 2 {
            assert!(gap < 1e-9, "N={n}: {a} vs {b}");
        } else {
            gaps.push((*n, gap));
        }
    }
    assert!(gaps.windows(2).all(|w| w[1].1 < w[0].1), "{gaps:?}");
    assert!(gaps.last().unwrap().1 < 0.2);

    for panel in &panels[1..] {
        let sl = panel.column("shot_noise").unwrap();
        let hl = panel.column("heisenberg").unwrap();
        for curve in panel.columns.iter().filter(|c| !matches!(c.as_str(), "shot_noise" | "heisenberg")) {
            for (((n, v), (_, s)), (_, h)) in panel.column(curve).unwrap().iter().zip(&sl).zip(&hl) {
                let v = v.unwrap();
                assert!(v >= h.unwrap() * (1.0 - 1e-9), "{curve} N={n}");
                if *n >= 8 {
                    assert!(v < s.unwrap(), "{} {curve} N={n}: {v}", panel.name);
                }
            }
        }
    }
}

#[test]
fn fig4_panels() {
    let panels = fig4_data().unwrap();
    let bw = &panels[2];
    let curve = bw.column("berry_wiseman").unwrap();
    let povm = bw.column("bw_povm").unwrap();
    let sl = bw.column("shot_noise").unwrap();
    let hl = bw.column("heisenberg").unwrap();
    for i in 0..curve.len() {
        let n = curve[i].0;
        let v = curve[i].1.unwrap();
        if n >= 4 {
            assert!(v < sl[i].1.unwrap() && v >= hl[i].1.unwrap(), "N={n}: {v}");
        }
    }
    let last = povm.last().unwrap();
    assert!((last.1.unwrap() * f64::from(last.0) / std::f64::consts::PI - 1.0).abs() < 0.05);
}
