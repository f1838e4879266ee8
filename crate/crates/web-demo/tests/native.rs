use std::f64::consts::{FRAC_PI_2, PI};

use kicktop_web::{husimi_values, portrait_points, series_values};

#[test]
fn portrait_shape_and_range() {
    let pts = portrait_points(3.0, FRAC_PI_2, 4, 10).unwrap();
    assert_eq!(pts.len(), 4 * 4 * 11 * 2);
    for pair in pts.chunks(2) {
        assert!((0.0..=PI).contains(&pair[0]));
        assert!((0.0..2.0 * PI).contains(&pair[1]));
    }
}

#[test]
fn series_starts_separable_and_stays_bounded() {
    let v = series_values(3.0, FRAC_PI_2, 2.25, 1.1, 50).unwrap();
    assert_eq!(v.len(), 102);
    assert!(v[0].abs() < 1e-12 && v[1].abs() < 1e-9);
    for pair in v.chunks(2) {
        assert!((0.0..=0.5 + 1e-12).contains(&pair[0]));
        assert!(pair[1] >= 0.0 && pair[1] <= 0.5 + 1e-12);
    }
}

#[test]
fn husimi_integrates_to_one() {
    let (nt, np) = (101, 201);
    let v = husimi_values(3.0, FRAC_PI_2, 2.25, 2.5, 7, nt, np).unwrap();
    assert_eq!(v.len(), nt * np);
    // trapezoid in theta with the sin(theta) measure, rectangles in phi
    let (dt, dp) = (PI / (nt - 1) as f64, 2.0 * PI / np as f64);
    let mut total = 0.0;
    for i in 0..nt {
        let w = if i == 0 || i == nt - 1 { 0.5 } else { 1.0 };
        let row: f64 = v[i * np..(i + 1) * np].iter().sum();
        total += w * (i as f64 * dt).sin() * row * dt * dp;
    }
    assert!((total - 1.0).abs() < 1e-3, "{total}");
}

#[test]
fn rejects_bad_input() {
    assert!(portrait_points(3.0, FRAC_PI_2, 0, 10).is_err());
    assert!(series_values(-1.0, FRAC_PI_2, 2.25, 1.1, 10).is_err());
    assert!(series_values(3.0, FRAC_PI_2, 4.0, 1.1, 10).is_err());
    assert!(husimi_values(3.0, FRAC_PI_2, 2.25, 1.1, 0, 1, 10).is_err());
}
