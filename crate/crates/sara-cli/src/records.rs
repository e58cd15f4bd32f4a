//! Self-describing scan artifacts for replay: the geometry, mode and plan
//! travel with the measured sweep.

use serde::{Deserialize, Serialize};

use sara_core::{SamplingPlan, SaraError, ScanMode, ScanRecord, UlaGeometry};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StoredRecord {
    pub geometry: UlaGeometry,
    pub mode: ScanMode,
    pub plan: SamplingPlan,
    pub scan_period: f64,
    pub record: ScanRecord,
}

impl StoredRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, SaraError> {
        serde_json::from_str(s).map_err(|e| SaraError::GridError(format!("record: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sara_core::plan::lad_uniform_plan;
    use sara_core::signal::{scan_scene, Scatterer, Scene};

    #[test]
    fn stored_record_round_trip() {
        let g = UlaGeometry::half_wavelength(4, 1.0).unwrap();
        let plan = lad_uniform_plan(&g);
        let scene = Scene::noiseless(vec![Scatterer::unit(0.1)]);
        let record = scan_scene(&scene, &g, &plan, ScanMode::RxOnly, 1e-6, 1).unwrap();
        let stored = StoredRecord {
            geometry: g,
            mode: ScanMode::RxOnly,
            plan,
            scan_period: 1e-6,
            record,
        };
        let back = StoredRecord::from_json(&stored.to_json()).unwrap();
        assert_eq!(stored.record, back.record);
        assert_eq!(stored.plan, back.plan);
    }
}
