use mellin_pw::fourier::HalfPlaneSamples;
use mellin_pw::funcmodel::{gauss_pow, monomial_log, Endpoint, Expansion};
use mellin_pw::homdist::{fourier_hom, split_boundary, DistributionCombo, Side};
use mellin_pw::io::{document, from_document, read_half_plane_csv, read_line_csv, write_half_plane_csv, write_line_csv};
use mellin_pw::mellin::LineSample;
use mellin_pw::singexp::{direct_map, SingularExpansion};
use mellin_pw::Complex64;
use proptest::prelude::*;
use serde_json::json;

fn finite() -> impl Strategy<Value = f64> {
    -1e6..1e6f64
}

proptest! {
    #[test]
    fn line_csv_round_trip(rows in prop::collection::vec((finite(), finite(), finite()), 0..30)) {
        let samples: Vec<LineSample> = rows
            .iter()
            .map(|(eta, re, im)| LineSample { eta: *eta, value: Complex64::new(*re, *im), error: 0.0 })
            .collect();
        let mut buf = Vec::new();
        write_line_csv(&mut buf, &samples).unwrap();
        prop_assert_eq!(read_line_csv(buf.as_slice()).unwrap(), samples);
    }

    #[test]
    fn half_plane_csv_round_trip(rows in prop::collection::vec((finite(), 0.0..1e3f64, finite(), finite()), 1..30)) {
        let points = rows.iter().map(|r| Complex64::new(r.0, -r.1)).collect();
        let values = rows.iter().map(|r| Complex64::new(r.2, r.3)).collect();
        let s = HalfPlaneSamples::new(points, values).unwrap();
        let mut buf = Vec::new();
        write_half_plane_csv(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        prop_assert!(text.starts_with("xi,eta,re,im\n"));
        prop_assert_eq!(read_half_plane_csv(buf.as_slice()).unwrap(), s);
    }
}

#[test]
fn half_plane_csv_rejects_upper_points() {
    let text = "xi,eta,re,im\n1.0,-0.5,0.0,0.0\n";
    assert!(read_half_plane_csv(text.as_bytes()).is_err());
}

#[test]
fn expansion_json_shape() {
    let e = monomial_log(Complex64::new(0.5, 0.25), 1).unwrap().zero;
    let v = serde_json::to_value(&e).unwrap();
    let t = &v["terms"][0];
    assert_eq!(t["re_p"], json!(0.5));
    assert_eq!(t["im_p"], json!(0.25));
    assert_eq!(t["m"], json!(1));
    assert_eq!(t["coeffs"].as_array().unwrap().len(), 2);
    assert!(v.get("remainder_exp").is_some());
    let back: Expansion = serde_json::from_value(v).unwrap();
    assert_eq!(back, e);
}

#[test]
fn expansion_json_is_validated() {
    let bad = json!({"terms": [
        {"re_p": 1.0, "im_p": 0.0, "m": 0, "coeffs": [{"re": 1.0, "im": 0.0}]},
        {"re_p": 0.0, "im_p": 0.0, "m": 0, "coeffs": [{"re": 1.0, "im": 0.0}]}
    ], "remainder_exp": 2.0});
    assert!(serde_json::from_value::<Expansion>(bad).is_err());
    let short = json!({"terms": [{"re_p": 0.0, "im_p": 0.0, "m": 1, "coeffs": [{"re": 1.0, "im": 0.0}]}], "remainder_exp": 1.0});
    assert!(serde_json::from_value::<Expansion>(short).is_err());
}

#[test]
fn singular_expansion_document_round_trip() {
    let se = direct_map(&gauss_pow(Complex64::new(-0.5, 0.0)).unwrap().zero.truncate(3));
    let doc = document("singular_expansion", &se).unwrap();
    assert_eq!(doc["schema"], "mellin-pw/1");
    let el = &doc["data"]["elements"][0];
    assert!(el["q"]["re"].is_number() && el["principal"].is_array());
    let back: SingularExpansion = from_document("singular_expansion", &doc).unwrap();
    assert_eq!(back, se);
    assert!(from_document::<SingularExpansion>("tail_fit", &doc).is_err());
}

#[test]
fn combo_json_has_power_and_delta() {
    let combo = split_boundary(&fourier_hom(Side::Plus, Complex64::new(0.0, 0.0)).unwrap()).unwrap();
    let v = serde_json::to_value(&combo).unwrap();
    assert_eq!(v["power"].as_array().unwrap().len(), 2);
    assert_eq!(v["delta"][0]["order"], json!(0));
    let back: DistributionCombo = serde_json::from_value(v).unwrap();
    assert_eq!(back, combo);
}

#[test]
fn infinity_expansion_round_trip() {
    let e = Expansion::new(
        Endpoint::Infinity,
        vec![Complex64::new(-1.0, 0.0), Complex64::new(-2.5, 1.0)],
        vec![vec![Complex64::new(1.0, 0.0)], vec![Complex64::new(0.0, 2.0), Complex64::new(-1.0, 0.0)]],
        -3.0,
    )
    .unwrap();
    let back: Expansion = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
    assert_eq!(back, e);
}
