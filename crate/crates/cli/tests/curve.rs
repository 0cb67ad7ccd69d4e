//! ScalarCurve CSV contract.

use nefluct_cli::curve::{Column, ScalarCurve};
use proptest::prelude::*;

fn sample() -> ScalarCurve {
    let mut c = ScalarCurve::new(Column::new("body_temperature", "K"), Column::new("force", "N"))
        .unwrap()
        .with_error(Column::new("force_error", "N"))
        .unwrap();
    for (x, y) in [(200.0, -1.25e-25), (300.0, -2.5e-25), (450.5, -3.75e-25)] {
        c.push(x, y, Some(1e-35)).unwrap();
    }
    c.set_meta("seed", 7).unwrap();
    c.set_meta("note", "a: b").unwrap();
    c.set_echo("[thermal]\nenv = 300 K\n\n[geometry]\npreset = janus:100nm");
    c
}

#[test]
fn csv_round_trip() {
    let c = sample();
    let text = c.to_csv();
    assert!(text.starts_with("# nefluct scalar curve\n# abscissa: body_temperature [K]\n"));
    assert!(text.contains("\nbody_temperature,force,force_error\n2e2,-1.25e-25,1e-35\n"));
    let back = ScalarCurve::parse(&text).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.to_csv(), text);
    assert_eq!(back.meta("note"), Some("a: b"));
    assert_eq!(back.echo().len(), 5);
}

#[test]
fn body_excludes_metadata() {
    let body = sample().body();
    assert!(!body.contains('#'));
    assert_eq!(body.lines().count(), 4);
}

#[test]
fn adjacent_abscissae_survive_a_round_trip() {
    let mut c = ScalarCurve::new(Column::new("x", "1"), Column::new("y", "1")).unwrap();
    let x0 = 1.0f64;
    c.push(x0, 0.1, None).unwrap();
    c.push(f64::from_bits(x0.to_bits() + 1), 0.2, None).unwrap();
    assert_eq!(ScalarCurve::parse(&c.to_csv()).unwrap(), c);
}

#[test]
fn invariants_are_enforced_on_construction() {
    let mut c = ScalarCurve::new(Column::new("x", "1"), Column::new("y", "1")).unwrap();
    c.push(1.0, 0.0, None).unwrap();
    assert!(c.push(1.0, 0.0, None).is_err());
    assert!(c.push(0.5, 0.0, None).is_err());
    assert!(c.push(2.0, f64::NAN, None).is_err());
    assert!(c.push(f64::INFINITY, 0.0, None).is_err());
    assert!(c.push(2.0, 0.0, Some(1.0)).is_err());
    assert!(c.clone().with_error(Column::new("e", "1")).is_err());
    assert!(c.set_meta("abscissa", 1).is_err());
    assert!(c.set_meta("bad key", 1).is_err());
    assert!(c.set_meta("k", "two\nlines").is_err());
    assert!(ScalarCurve::new(Column::new("x", "1"), Column::new("x", "1")).is_err());
    assert!(ScalarCurve::new(Column::new("a,b", "1"), Column::new("y", "1")).is_err());
    assert!(ScalarCurve::new(Column::new("x", ""), Column::new("y", "1")).is_err());
}

#[test]
fn parser_reports_offending_lines() {
    let good = sample().to_csv();
    let cases = [
        (good.replace("4.505e2", "1e2"), "does not exceed"),
        (good.replace("4.505e2", "NaN"), "non-finite"),
        (good.replace("force,force_error\n", "force\n"), "header"),
        (good.replace("# value: force [N]\n", ""), "missing"),
        (good.replacen("# nefluct scalar curve", "# other", 1), "first line"),
        (format!("{good}1e9,2\n"), "expected 3 fields"),
        (format!("{good}1e9,x,0\n"), "not a number"),
        (good.replace("# seed: 7", "#seed: 7"), "metadata lines"),
    ];
    for (text, needle) in cases {
        let err = ScalarCurve::parse(&text).unwrap_err();
        assert!(err.to_string().contains(needle), "{err} lacks {needle}");
    }
    let err = ScalarCurve::parse(&good.replace("4.505e2", "1e2")).unwrap_err();
    // magic, 3 column lines, 2 metadata, 5 echo, header, then rows
    assert_eq!(err.line, Some(15));
}

#[test]
fn empty_curve_is_valid() {
    let c = ScalarCurve::new(Column::new("omega_a", "1"), Column::new("j_hat", "1")).unwrap();
    let back = ScalarCurve::parse(&c.to_csv()).unwrap();
    assert!(back.rows().is_empty());
}

proptest! {
    #[test]
    fn written_curves_parse_back(
        steps in prop::collection::vec(1e-6f64..1e6, 0..40),
        start in -1e6f64..1e6,
        ys in prop::collection::vec(-1e300f64..1e300, 40),
    ) {
        let mut c = ScalarCurve::new(Column::new("x", "m"), Column::new("y", "N m")).unwrap();
        let mut x = start;
        for (dx, y) in steps.iter().zip(&ys) {
            x += dx;
            c.push(x, *y, None).unwrap();
        }
        let text = c.to_csv();
        let back = ScalarCurve::parse(&text).unwrap();
        prop_assert_eq!(back.to_csv(), text);
    }

    #[test]
    fn arbitrary_text_never_panics(text in ".{0,300}") {
        let _ = ScalarCurve::parse(&text);
    }
}
