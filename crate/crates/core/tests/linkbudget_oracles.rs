mod common;

use std::f64::consts::PI;

use satiab::linkbudget::{
    antenna_pattern, bessel_j1, channel_gain, db_to_linear, free_space_path_loss, linear_to_db,
    slant_distance, GroundNodeParams, SatelliteParams,
};
use satiab::SPEED_OF_LIGHT;

use common::{bessel_j1_exact, is_close};

fn deg(d: f64) -> f64 {
    d * PI / 180.0
}

fn table_satellite(altitude: f64) -> SatelliteParams {
    SatelliteParams::new(db_to_linear(36.0), 1.5, 2e9, altitude).unwrap()
}

#[test]
fn j1_matches_fixed_point_series() {
    for i in 0..1000 {
        let x = 20.0 * i as f64 / 999.0;
        let want = bessel_j1_exact(x, 200);
        assert!(
            (bessel_j1(x) - want).abs() <= 1e-10,
            "x={x}: {} vs {want}",
            bessel_j1(x)
        );
    }
}

#[test]
fn j1_known_values() {
    assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-9);
    assert!((bessel_j1(2.0) - 0.576_724_807_756_873_4).abs() < 1e-9);
    assert!(bessel_j1(3.831_705_970_207_512).abs() < 1e-12);
    // beyond the series range
    assert!((bessel_j1(30.0) - bessel_j1_exact(30.0, 400)).abs() < 1e-10);
}

#[test]
fn pattern_at_bs_offset() {
    let psi = antenna_pattern(deg(0.8), 1.5, 2e9);
    assert!((psi - 0.456).abs() <= 0.005, "psi = {psi}");
    assert!(is_close(psi, 0.453_355_345_190_077_3, 1e-9));
    assert_eq!(antenna_pattern(0.0, 1.5, 2e9), 1.0);
}

#[test]
fn pattern_null_at_first_zero() {
    let k = 2.0 * PI * 2e9 / SPEED_OF_LIGHT;
    let theta = (3.831_705_970_207_512 / (k * 1.5)).asin();
    assert!(antenna_pattern(theta, 1.5, 2e9) < 1e-12);
}

#[test]
fn path_loss_and_slant_range() {
    let pl = linear_to_db(free_space_path_loss(2e9, 600e3));
    assert!((pl - 154.031_408_14).abs() < 1e-6, "{pl}");
    let d = slant_distance(600e3, deg(0.8));
    assert!(is_close(d, 600_058.491_295_914_5, 1e-12));
    // inverse-square law
    let ratio = free_space_path_loss(2e9, 1200e3) / free_space_path_loss(2e9, 600e3);
    assert!(is_close(ratio, 4.0, 1e-14));
}

#[test]
fn table_gains() {
    let sat = table_satellite(600e3);
    let ue = GroundNodeParams::at_altitude(1.0, 0.0, 600e3).unwrap();
    let bs = GroundNodeParams::at_altitude(db_to_linear(32.8), deg(0.8), 600e3).unwrap();
    let beta_ue = channel_gain(&sat, &ue);
    let beta_bs = channel_gain(&sat, &bs);
    assert!(is_close(beta_ue, 1.573_472_603_915_501_6e-12, 1e-9));
    assert!(is_close(beta_bs, 1.358_980_595_388_935_4e-9, 1e-9));
    assert!(is_close(beta_bs / beta_ue, 863.682_400_320_911_6, 1e-9));

    // doubling the altitude costs 6 dB on the boresight link
    let far = channel_gain(
        &table_satellite(1200e3),
        &GroundNodeParams::at_altitude(1.0, 0.0, 1200e3).unwrap(),
    );
    assert!(is_close(beta_ue / far, 4.0, 1e-12));
}
