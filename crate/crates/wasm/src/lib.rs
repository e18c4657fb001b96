//! Browser bindings for the demo page in `www/`. Every export takes plain
//! numbers and returns a JSON string, so the page needs no generated types.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qentangle::bell::{self, ChshReport, ChshSetting};
use qentangle::entanglement::{self, Verdict};
use qentangle::states::{self, BlochVector, DensityOperator, MeasurementAxis};
use qentangle::QuantumError;

#[derive(Serialize)]
struct BlochView {
    bloch: BlochVector,
    purity: f64,
    density: DensityOperator,
}

/// `(1 − mix)|ψ⟩⟨ψ| + mix·I/2` with `|ψ⟩ = cos θ|0⟩ + e^{iφ} sin θ|1⟩`.
pub fn bloch_view(theta: f64, phi: f64, mix: f64) -> Result<String, QuantumError> {
    if !(0.0..=1.0).contains(&mix) {
        return Err(QuantumError::Validation {
            what: "mixing weight",
            measured: mix,
            expected: 0.5,
            tol: 0.5,
        });
    }
    let pure = states::density_from_pure(&states::qubit_from_angles(theta, phi));
    let noise = DensityOperator::maximally_mixed(2);
    let rho = DensityOperator::mixture(&[(1.0 - mix, &pure), (mix, &noise)])?;
    let view = BlochView {
        bloch: states::density_to_bloch(&rho)?,
        purity: states::purity(&rho)?,
        density: rho,
    };
    Ok(serde_json::to_string(&view).expect("serialisable"))
}

#[derive(Serialize)]
struct CurvePoint {
    offset_deg: f64,
    s_value: f64,
}

#[derive(Serialize)]
struct ChshView {
    offset_deg: f64,
    setting: ChshSetting,
    report: ChshReport,
    sampled_s: Option<f64>,
    curve: Vec<CurvePoint>,
}

/// Alice at 90° and 0°, Bob at 45° and 135°, with Bob's pair turned by
/// `offset` radians in the x–z plane.
fn bob_rotated(offset: f64) -> ChshSetting {
    let deg = |d: f64| d.to_radians();
    ChshSetting {
        a1: MeasurementAxis::in_xz_plane(deg(90.0)),
        a2: MeasurementAxis::in_xz_plane(0.0),
        b1: MeasurementAxis::in_xz_plane(deg(45.0) + offset),
        b2: MeasurementAxis::in_xz_plane(deg(135.0) + offset),
    }
}

/// Singlet CHSH value with Bob's axes rotated by `offset_deg`, the full
/// curve over ±180°, and a sampled estimate when `samples > 0`.
pub fn chsh_view(offset_deg: f64, samples: u32, seed: u64) -> Result<String, QuantumError> {
    let rho = bell::singlet_density();
    let setting = bob_rotated(offset_deg.to_radians());
    let report = bell::chsh_value(&rho, &setting)?;
    let sampled_s = if samples == 0 {
        None
    } else {
        let n = u64::from(samples);
        let c = |a, b, k| bell::sample_outcomes(&rho, a, b, n, seed.wrapping_add(k)).map(|s| s.empirical_correlation);
        let c11 = c(&setting.a1, &setting.b1, 0)?;
        let c12 = c(&setting.a1, &setting.b2, 1)?;
        let c21 = c(&setting.a2, &setting.b1, 2)?;
        let c22 = c(&setting.a2, &setting.b2, 3)?;
        Some(c22 - c11 - c12 - c21)
    };
    let curve = (-180..=180)
        .step_by(2)
        .map(|d| {
            let s = bell::chsh_value(&rho, &bob_rotated(f64::from(d).to_radians()))?;
            Ok(CurvePoint {
                offset_deg: f64::from(d),
                s_value: s.s_value,
            })
        })
        .collect::<Result<Vec<_>, QuantumError>>()?;
    let view = ChshView {
        offset_deg,
        setting,
        report,
        sampled_s,
        curve,
    };
    Ok(serde_json::to_string(&view).expect("serialisable"))
}

#[derive(Serialize)]
struct WernerPoint {
    p: f64,
    min_pt_eigenvalue: f64,
    verdict: Verdict,
    s_value: f64,
}

/// PPT verdict and optimal-setting CHSH value of the Werner state along
/// `p = 0, 1/steps, …, 1`.
pub fn werner_view(steps: u32) -> Result<String, QuantumError> {
    let steps = steps.max(1);
    let setting = bell::optimal_setting();
    let points = (0..=steps)
        .map(|i| {
            let p = f64::from(i) / f64::from(steps);
            let rho = entanglement::werner_state(p)?;
            let verdict = entanglement::separability_decision(&rho)?;
            Ok(WernerPoint {
                p,
                min_pt_eigenvalue: verdict.min_pt_eigenvalue,
                verdict: verdict.verdict,
                s_value: bell::chsh_value(&rho, &setting)?.s_value,
            })
        })
        .collect::<Result<Vec<_>, QuantumError>>()?;
    Ok(serde_json::to_string(&points).expect("serialisable"))
}

fn js_err(e: QuantumError) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[wasm_bindgen(js_name = blochState)]
pub fn bloch_state(theta: f64, phi: f64, mix: f64) -> Result<String, JsValue> {
    bloch_view(theta, phi, mix).map_err(js_err)
}

#[wasm_bindgen(js_name = chshScan)]
pub fn chsh_scan(offset_deg: f64, samples: u32, seed: u32) -> Result<String, JsValue> {
    chsh_view(offset_deg, samples, u64::from(seed)).map_err(js_err)
}

#[wasm_bindgen(js_name = wernerSweep)]
pub fn werner_sweep(steps: u32) -> Result<String, JsValue> {
    werner_view(steps).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn bloch_shrinks_with_noise() {
        let v = parse(bloch_view(0.4, 1.1, 0.0).unwrap());
        assert!((v["purity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        let v = parse(bloch_view(0.4, 1.1, 0.5).unwrap());
        // |n| = 1 − mix, purity = |n|²
        assert!((v["purity"].as_f64().unwrap() - 0.25).abs() < 1e-12);
        let z = v["bloch"]["n"][2].as_f64().unwrap();
        assert!((z - 0.5 * 0.8f64.cos()).abs() < 1e-12);
        assert!(bloch_view(0.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn chsh_peaks_at_zero_offset() {
        let v = parse(chsh_view(0.0, 0, 1).unwrap());
        let s = v["report"]["s_value"].as_f64().unwrap();
        assert!((s - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(v["sampled_s"].is_null());
        let curve = v["curve"].as_array().unwrap();
        assert_eq!(curve.len(), 181);
        let peak = curve.iter().map(|p| p["s_value"].as_f64().unwrap().abs()).fold(0.0, f64::max);
        assert!((peak - s).abs() < 1e-12);

        let v = parse(chsh_view(90.0, 0, 1).unwrap());
        assert!(v["report"]["s_value"].as_f64().unwrap().abs() < 1e-12);
    }

    #[test]
    fn chsh_sampling_is_seeded() {
        let a = chsh_view(10.0, 4000, 3).unwrap();
        assert_eq!(a, chsh_view(10.0, 4000, 3).unwrap());
        let v = parse(a);
        let exact = v["report"]["s_value"].as_f64().unwrap();
        let sampled = v["sampled_s"].as_f64().unwrap();
        assert!((exact - sampled).abs() < 4.0 * 4.0 / 4000f64.sqrt());
    }

    #[test]
    fn werner_threshold() {
        let v = parse(werner_view(6).unwrap());
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 7);
        for p in pts {
            let prob = p["p"].as_f64().unwrap();
            let min = p["min_pt_eigenvalue"].as_f64().unwrap();
            assert!((min - (1.0 - 3.0 * prob) / 4.0).abs() < 1e-9);
            let want = if prob > 1.0 / 3.0 + 1e-9 { "entangled" } else { "separable" };
            assert_eq!(p["verdict"], want, "p = {prob}");
            assert!((p["s_value"].as_f64().unwrap() - 2.0 * std::f64::consts::SQRT_2 * prob).abs() < 1e-9);
        }
    }
}
