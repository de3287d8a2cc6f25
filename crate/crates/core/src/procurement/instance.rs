use std::collections::BTreeMap;

use serde::Deserialize;

use super::units::{Money, Percent, Quantity};
use super::ModelError;

#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub id: String,
    pub demand: Quantity,
}

/// One supplier's terms, indexed by material.
#[derive(Debug, Clone, PartialEq)]
pub struct SupplierOffer {
    pub id: String,
    pub capacity: Vec<Quantity>,
    /// Price per kilogram.
    pub unit_cost: Vec<Money>,
    pub defect_pct: Vec<Percent>,
    pub delay_pct: Vec<Percent>,
}

impl SupplierOffer {
    /// Offer with the same terms for every one of `materials` materials.
    pub fn uniform(
        id: impl Into<String>,
        materials: usize,
        capacity: Quantity,
        unit_cost: Money,
        defect_pct: Percent,
        delay_pct: Percent,
    ) -> Self {
        Self {
            id: id.into(),
            capacity: vec![capacity; materials],
            unit_cost: vec![unit_cost; materials],
            defect_pct: vec![defect_pct; materials],
            delay_pct: vec![delay_pct; materials],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessWeights {
    pub w1: f64,
    pub w2: f64,
}

impl Default for FitnessWeights {
    fn default() -> Self {
        Self { w1: 0.3, w2: 0.7 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    materials: Vec<Material>,
    suppliers: Vec<SupplierOffer>,
    delay_cost_rate: Money,
    weights: FitnessWeights,
    k_select: usize,
}

impl ProblemInstance {
    pub fn new(
        materials: Vec<Material>,
        suppliers: Vec<SupplierOffer>,
        delay_cost_rate: Money,
        weights: FitnessWeights,
        k_select: usize,
    ) -> Result<Self, ModelError> {
        let invalid = |msg: String| Err(ModelError::InvalidInstance(msg));
        if materials.is_empty() {
            return invalid("at least one material is required".into());
        }
        if suppliers.is_empty() {
            return invalid("at least one supplier is required".into());
        }
        let m = materials.len();
        for s in &suppliers {
            if s.capacity.len() != m
                || s.unit_cost.len() != m
                || s.defect_pct.len() != m
                || s.delay_pct.len() != m
            {
                return invalid(format!("supplier '{}' does not give terms for all {m} materials", s.id));
            }
            if let Some(j) = s.unit_cost.iter().position(|c| c.paise() <= 0) {
                return invalid(format!(
                    "supplier '{}' has non-positive unit cost for material '{}'",
                    s.id, materials[j].id
                ));
            }
        }
        if delay_cost_rate.paise() < 0 {
            return invalid("delay cost rate must be nonnegative".into());
        }
        if !(weights.w1 >= 0.0 && weights.w2 >= 0.0 && (weights.w1 + weights.w2 - 1.0).abs() <= 1e-12) {
            return invalid(format!(
                "fitness weights must be nonnegative and sum to 1, got {} + {}",
                weights.w1, weights.w2
            ));
        }
        if k_select == 0 {
            return invalid("k_select must be at least 1".into());
        }
        Ok(Self { materials, suppliers, delay_cost_rate, weights, k_select })
    }

    pub fn from_json(json: &str) -> Result<Self, ModelError> {
        let file: InstanceFile =
            serde_json::from_str(json).map_err(|e| ModelError::InvalidInstance(e.to_string()))?;
        file.into_instance()
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    pub fn suppliers(&self) -> &[SupplierOffer] {
        &self.suppliers
    }

    pub fn delay_cost_rate(&self) -> Money {
        self.delay_cost_rate
    }

    pub fn weights(&self) -> FitnessWeights {
        self.weights
    }

    pub fn k_select(&self) -> usize {
        self.k_select
    }

    pub fn with_k_select(mut self, k: usize) -> Result<Self, ModelError> {
        if k == 0 {
            return Err(ModelError::InvalidInstance("k_select must be at least 1".into()));
        }
        self.k_select = k;
        Ok(self)
    }

    /// Replaces the demand of material `j`.
    pub fn with_demand(mut self, j: usize, demand: Quantity) -> Self {
        self.materials[j].demand = demand;
        self
    }

    pub fn supplier_count(&self) -> usize {
        self.suppliers.len()
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PerMaterial {
    Scalar(f64),
    ByMaterial(BTreeMap<String, f64>),
}

impl PerMaterial {
    fn resolve(&self, materials: &[MaterialFile], supplier: &str, field: &str) -> Result<Vec<f64>, ModelError> {
        match self {
            PerMaterial::Scalar(v) => Ok(vec![*v; materials.len()]),
            PerMaterial::ByMaterial(map) => {
                if let Some(k) = map.keys().find(|k| !materials.iter().any(|m| &m.id == *k)) {
                    return Err(ModelError::InvalidInstance(format!(
                        "supplier '{supplier}': {field} names unknown material '{k}'"
                    )));
                }
                Ok(materials.iter().map(|m| map.get(&m.id).copied().unwrap_or(0.0)).collect())
            }
        }
    }
}

#[derive(Debug, Deserialize)]
struct MaterialFile {
    id: String,
    demand_tons: f64,
}

#[derive(Debug, Deserialize)]
struct SupplierFile {
    id: String,
    capacity_tons: PerMaterial,
    unit_cost_per_kg: PerMaterial,
    defect_pct: PerMaterial,
    delay_pct: PerMaterial,
}

#[derive(Debug, Deserialize)]
struct WeightsFile {
    w1: f64,
    w2: f64,
}

#[derive(Debug, Deserialize)]
struct InstanceFile {
    materials: Vec<MaterialFile>,
    suppliers: Vec<SupplierFile>,
    delay_cost_per_day: f64,
    #[serde(default)]
    weights: Option<WeightsFile>,
    #[serde(default = "default_k")]
    k_select: usize,
}

fn default_k() -> usize {
    3
}

impl InstanceFile {
    fn into_instance(self) -> Result<ProblemInstance, ModelError> {
        let bad = |msg: String| ModelError::InvalidInstance(msg);
        let materials = self
            .materials
            .iter()
            .map(|m| {
                Quantity::from_tons_f64(m.demand_tons)
                    .map(|demand| Material { id: m.id.clone(), demand })
                    .ok_or_else(|| bad(format!("material '{}': demand must be a nonnegative number", m.id)))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut suppliers = Vec::with_capacity(self.suppliers.len());
        for s in &self.suppliers {
            let field = |pm: &PerMaterial, name: &str| pm.resolve(&self.materials, &s.id, name);
            let capacity = field(&s.capacity_tons, "capacity_tons")?
                .into_iter()
                .map(|v| {
                    Quantity::from_tons_f64(v)
                        .ok_or_else(|| bad(format!("supplier '{}': capacity must be nonnegative", s.id)))
                })
                .collect::<Result<_, _>>()?;
            let unit_cost = field(&s.unit_cost_per_kg, "unit_cost_per_kg")?
                .into_iter()
                .map(Money::from_rupees_f64)
                .collect();
            let pct = |name: &str, pm: &PerMaterial| -> Result<Vec<Percent>, ModelError> {
                field(pm, name)?
                    .into_iter()
                    .map(|v| {
                        Percent::from_f64(v)
                            .ok_or_else(|| bad(format!("supplier '{}': {name} must lie in [0, 100]", s.id)))
                    })
                    .collect()
            };
            suppliers.push(SupplierOffer {
                id: s.id.clone(),
                capacity,
                unit_cost,
                defect_pct: pct("defect_pct", &s.defect_pct)?,
                delay_pct: pct("delay_pct", &s.delay_pct)?,
            });
        }
        let weights = self
            .weights
            .map_or_else(FitnessWeights::default, |w| FitnessWeights { w1: w.w1, w2: w.w2 });
        if !(self.delay_cost_per_day.is_finite() && self.delay_cost_per_day >= 0.0) {
            return Err(bad("delay_cost_per_day must be a nonnegative number".into()));
        }
        ProblemInstance::new(
            materials,
            suppliers,
            Money::from_rupees_f64(self.delay_cost_per_day),
            weights,
            self.k_select,
        )
    }
}
