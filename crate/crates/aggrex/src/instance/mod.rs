//! Energy-system data model: areas, production units, renewables, storages,
//! interconnectors, electric vehicles, demands and investment candidates,
//! plus file IO and a seeded synthetic instance generator.

mod io;
mod synth;

pub use io::{load_instance, save_instance};
pub use synth::{generate_synthetic, Season, SyntheticSpec};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

fn invalid(msg: impl Into<String>) -> InstanceError {
    InstanceError::Validation(msg.into())
}

/// A timeseries value: a constant scalar, an inlined hourly vector, or a
/// reference to a column of a side-car CSV file. File references are
/// resolved at load time; a validated instance never contains them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Series {
    Scalar(f64),
    Hourly(Vec<f64>),
    File { file: String, column: String },
}

impl Series {
    pub fn value(&self, t: usize) -> f64 {
        match self {
            Series::Scalar(v) => *v,
            Series::Hourly(vs) => vs[t],
            Series::File { file, .. } => panic!("unresolved series file reference: {file}"),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Series::Scalar(_))
    }

    /// Length check: scalars match any horizon.
    fn check_len(&self, horizon: usize, what: &str) -> Result<(), InstanceError> {
        match self {
            Series::Scalar(_) => Ok(()),
            Series::Hourly(vs) if vs.len() == horizon => Ok(()),
            Series::Hourly(vs) => Err(invalid(format!(
                "{what}: series has {} entries, horizon is {horizon}",
                vs.len()
            ))),
            Series::File { file, .. } => Err(invalid(format!(
                "{what}: unresolved file reference {file}"
            ))),
        }
    }

    fn check_range(&self, lo: f64, hi: f64, what: &str) -> Result<(), InstanceError> {
        let bad = |v: f64| v < lo || v > hi;
        let violation = match self {
            Series::Scalar(v) => bad(*v).then_some(*v),
            Series::Hourly(vs) => vs.iter().copied().find(|&v| bad(v)),
            Series::File { .. } => None,
        };
        match violation {
            Some(v) => Err(invalid(format!(
                "{what}: value {v} outside [{lo}, {hi}]"
            ))),
            None => Ok(()),
        }
    }

    /// Concatenates the slices of the given days, preserving order.
    pub fn slice_days(&self, days: &[usize], day_length: usize) -> Series {
        match self {
            Series::Scalar(v) => Series::Scalar(*v),
            Series::Hourly(vs) => {
                let mut out = Vec::with_capacity(days.len() * day_length);
                for &d in days {
                    out.extend_from_slice(&vs[d * day_length..(d + 1) * day_length]);
                }
                Series::Hourly(out)
            }
            Series::File { file, .. } => panic!("unresolved series file reference: {file}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyType {
    Power,
    Heat,
    Gas,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub id: String,
    pub energy_type: EnergyType,
}

/// External areas only carry an hourly price; they connect to the rest of
/// the system through interconnection lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalArea {
    pub id: String,
    pub energy_type: EnergyType,
    pub price: Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    #[default]
    Single,
    Backpressure,
    Extraction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionUnit {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_area: Option<String>,
    pub output_area: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary_output_area: Option<String>,
    #[serde(default)]
    pub kind: UnitKind,
    pub capacity: f64,
    #[serde(default = "one")]
    pub efficiency: f64,
    #[serde(default)]
    pub variable_cost: f64,
    #[serde(default = "zero_series")]
    pub fuel_price: Series,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub availability: Option<Series>,
    /// Secondary/primary output ratio for backpressure units.
    #[serde(default)]
    pub cb: f64,
    /// Capacity coupling coefficient for extraction units.
    #[serde(default)]
    pub cv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenewableUnit {
    pub id: String,
    pub area: String,
    pub capacity: f64,
    pub profile: Series,
    #[serde(default = "yes")]
    pub curtailable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Storage {
    pub id: String,
    pub area: String,
    pub energy_capacity: f64,
    pub charge_rate: f64,
    pub discharge_rate: f64,
    #[serde(default)]
    pub loss: f64,
    #[serde(default)]
    pub initial_level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interconnector {
    pub id: String,
    pub from: String,
    pub to: String,
    pub capacity_fwd: f64,
    pub capacity_bwd: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub availability: Option<Series>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrivingEvent {
    /// Hour by which the required energy must have been charged.
    pub deadline: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectricVehicleFleet {
    pub id: String,
    pub area: String,
    pub charge_rate: f64,
    #[serde(default)]
    pub driving_events: Vec<DrivingEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    pub id: String,
    pub area: String,
    pub series: Series,
    #[serde(default = "default_penalty")]
    pub slack_penalty: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvestmentTarget {
    Production,
    Res,
    Storage,
    Line,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvestmentCandidate {
    pub id: String,
    pub target_kind: InvestmentTarget,
    pub target_id: String,
    /// Cost per MW (or MWh for storage) of invested capacity.
    pub investment_cost: f64,
    #[serde(default)]
    pub lb: f64,
    pub ub: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub name: String,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_day_length")]
    pub day_length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub meta: Meta,
    #[serde(default)]
    pub areas: Vec<Area>,
    #[serde(default)]
    pub external_areas: Vec<ExternalArea>,
    #[serde(default)]
    pub units: Vec<ProductionUnit>,
    #[serde(default)]
    pub res: Vec<RenewableUnit>,
    #[serde(default)]
    pub storages: Vec<Storage>,
    #[serde(default)]
    pub lines: Vec<Interconnector>,
    #[serde(default)]
    pub evs: Vec<ElectricVehicleFleet>,
    #[serde(default)]
    pub demands: Vec<Demand>,
    #[serde(default)]
    pub investments: Vec<InvestmentCandidate>,
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn zero_series() -> Series {
    Series::Scalar(0.0)
}
fn default_penalty() -> f64 {
    1e6
}
fn default_horizon() -> usize {
    8760
}
fn default_day_length() -> usize {
    24
}

impl Instance {
    pub fn n_days(&self) -> usize {
        self.meta.horizon / self.meta.day_length
    }

    pub fn has_internal_area(&self, id: &str) -> bool {
        self.areas.iter().any(|a| a.id == id)
    }

    pub fn has_external_area(&self, id: &str) -> bool {
        self.external_areas.iter().any(|a| a.id == id)
    }

    /// Checks every structural invariant; messages name the offending
    /// component id.
    pub fn validate(&self) -> Result<(), InstanceError> {
        let h = self.meta.horizon;
        let dl = self.meta.day_length;
        if dl == 0 || h == 0 || h % dl != 0 {
            return Err(invalid(format!(
                "horizon {h} must be a positive multiple of day_length {dl}"
            )));
        }
        let internal_area =
            |id: &str, what: &str| -> Result<(), InstanceError> {
                if self.has_internal_area(id) {
                    Ok(())
                } else {
                    Err(invalid(format!("{what}: unknown area {id}")))
                }
            };
        let any_area = |id: &str, what: &str| -> Result<(), InstanceError> {
            if self.has_internal_area(id) || self.has_external_area(id) {
                Ok(())
            } else {
                Err(invalid(format!("{what}: unknown area {id}")))
            }
        };

        for a in &self.external_areas {
            if self.has_internal_area(&a.id) {
                return Err(invalid(format!(
                    "external area {}: id collides with an internal area",
                    a.id
                )));
            }
            a.price.check_len(h, &format!("external area {}", a.id))?;
        }

        let max_var_cost = self
            .units
            .iter()
            .map(|u| u.variable_cost)
            .fold(0.0_f64, f64::max);

        for u in &self.units {
            let what = format!("unit {}", u.id);
            internal_area(&u.output_area, &what)?;
            if let Some(a) = &u.input_area {
                internal_area(a, &what)?;
            }
            match u.kind {
                UnitKind::Single => {}
                UnitKind::Backpressure | UnitKind::Extraction => {
                    let sec = u.secondary_output_area.as_deref().ok_or_else(|| {
                        invalid(format!("{what}: {:?} unit needs a secondary output area", u.kind))
                    })?;
                    internal_area(sec, &what)?;
                }
            }
            if !(u.efficiency > 0.0 && u.efficiency <= 1.0) {
                return Err(invalid(format!(
                    "{what}: efficiency {} not in (0, 1]",
                    u.efficiency
                )));
            }
            if u.cb < 0.0 || u.cv < 0.0 {
                return Err(invalid(format!("{what}: cb and cv must be nonnegative")));
            }
            if u.capacity < 0.0 {
                return Err(invalid(format!("{what}: negative capacity")));
            }
            u.fuel_price.check_len(h, &what)?;
            if let Some(av) = &u.availability {
                av.check_len(h, &what)?;
                av.check_range(0.0, 1.0, &format!("{what} availability"))?;
            }
        }

        for r in &self.res {
            let what = format!("res {}", r.id);
            internal_area(&r.area, &what)?;
            if r.capacity < 0.0 {
                return Err(invalid(format!("{what}: negative capacity")));
            }
            r.profile.check_len(h, &what)?;
            r.profile.check_range(0.0, 1.0, &format!("{what} profile"))?;
        }

        for s in &self.storages {
            let what = format!("storage {}", s.id);
            internal_area(&s.area, &what)?;
            if s.charge_rate < 0.0 || s.discharge_rate < 0.0 {
                return Err(invalid(format!("{what}: negative rate")));
            }
            if !(0.0..1.0).contains(&s.loss) {
                return Err(invalid(format!("{what}: loss {} not in [0, 1)", s.loss)));
            }
            if s.initial_level < 0.0 || s.initial_level > s.energy_capacity {
                return Err(invalid(format!(
                    "{what}: initial level {} outside [0, {}]",
                    s.initial_level, s.energy_capacity
                )));
            }
        }

        for l in &self.lines {
            let what = format!("line {}", l.id);
            any_area(&l.from, &what)?;
            any_area(&l.to, &what)?;
            if l.from == l.to {
                return Err(invalid(format!("{what}: endpoints must differ")));
            }
            if self.has_external_area(&l.from) && self.has_external_area(&l.to) {
                return Err(invalid(format!(
                    "{what}: at least one endpoint must be internal"
                )));
            }
            if l.capacity_fwd < 0.0 || l.capacity_bwd < 0.0 {
                return Err(invalid(format!("{what}: negative capacity")));
            }
            if let Some(av) = &l.availability {
                av.check_len(h, &what)?;
                av.check_range(0.0, 1.0, &format!("{what} availability"))?;
            }
        }

        for e in &self.evs {
            let what = format!("ev {}", e.id);
            internal_area(&e.area, &what)?;
            if e.charge_rate < 0.0 {
                return Err(invalid(format!("{what}: negative charge rate")));
            }
            for ev in &e.driving_events {
                if ev.deadline >= h {
                    return Err(invalid(format!(
                        "{what}: deadline {} outside horizon {h}",
                        ev.deadline
                    )));
                }
                if ev.energy < 0.0 {
                    return Err(invalid(format!("{what}: negative required energy")));
                }
            }
        }

        for d in &self.demands {
            let what = format!("demand {}", d.id);
            internal_area(&d.area, &what)?;
            d.series.check_len(h, &what)?;
            if d.slack_penalty <= max_var_cost {
                return Err(invalid(format!(
                    "{what}: slack penalty {} must exceed every variable cost (max {max_var_cost})",
                    d.slack_penalty
                )));
            }
        }

        for c in &self.investments {
            let what = format!("investment {}", c.id);
            if !(0.0 <= c.lb && c.lb <= c.ub) {
                return Err(invalid(format!(
                    "{what}: bounds must satisfy 0 <= lb <= ub (got {}..{})",
                    c.lb, c.ub
                )));
            }
            let found = match c.target_kind {
                InvestmentTarget::Production => {
                    self.units.iter().any(|u| u.id == c.target_id)
                }
                InvestmentTarget::Res => self.res.iter().any(|r| r.id == c.target_id),
                InvestmentTarget::Storage => {
                    self.storages.iter().any(|s| s.id == c.target_id)
                }
                InvestmentTarget::Line => self.lines.iter().any(|l| l.id == c.target_id),
            };
            if !found {
                return Err(invalid(format!(
                    "{what}: target {} ({:?}) does not exist",
                    c.target_id, c.target_kind
                )));
            }
            let dupes = self
                .investments
                .iter()
                .filter(|o| o.target_kind == c.target_kind && o.target_id == c.target_id)
                .count();
            if dupes > 1 {
                return Err(invalid(format!(
                    "{what}: target {} ({:?}) has multiple candidates",
                    c.target_id, c.target_kind
                )));
            }
        }

        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn tiny_instance() -> Instance {
        Instance {
            meta: Meta {
                name: "tiny".into(),
                horizon: 48,
                day_length: 24,
            },
            areas: vec![Area {
                id: "power".into(),
                energy_type: EnergyType::Power,
            }],
            external_areas: vec![],
            units: vec![ProductionUnit {
                id: "gen".into(),
                input_area: None,
                output_area: "power".into(),
                secondary_output_area: None,
                kind: UnitKind::Single,
                capacity: 20.0,
                efficiency: 1.0,
                variable_cost: 1.0,
                fuel_price: Series::Scalar(0.0),
                availability: None,
                cb: 0.0,
                cv: 0.0,
            }],
            res: vec![],
            storages: vec![],
            lines: vec![],
            evs: vec![],
            demands: vec![Demand {
                id: "load".into(),
                area: "power".into(),
                series: Series::Scalar(1.0),
                slack_penalty: 1000.0,
            }],
            investments: vec![],
        }
    }

    #[test]
    fn valid_tiny_instance() {
        tiny_instance().validate().unwrap();
    }

    #[test]
    fn short_demand_series_names_the_demand() {
        let mut inst = tiny_instance();
        inst.demands[0].series = Series::Hourly(vec![1.0; 47]);
        let err = inst.validate().unwrap_err().to_string();
        assert!(err.contains("demand load"), "{err}");
        assert!(err.contains("47"), "{err}");
    }

    #[test]
    fn dangling_line_reference_rejected() {
        let mut inst = tiny_instance();
        inst.lines.push(Interconnector {
            id: "l1".into(),
            from: "power".into(),
            to: "nowhere".into(),
            capacity_fwd: 1.0,
            capacity_bwd: 1.0,
            availability: None,
        });
        let err = inst.validate().unwrap_err().to_string();
        assert!(err.contains("line l1") && err.contains("nowhere"), "{err}");
    }

    #[test]
    fn horizon_must_be_day_multiple() {
        let mut inst = tiny_instance();
        inst.meta.horizon = 50;
        assert!(inst.validate().is_err());
    }

    #[test]
    fn slack_penalty_must_dominate_costs() {
        let mut inst = tiny_instance();
        inst.demands[0].slack_penalty = 0.5;
        assert!(inst.validate().is_err());
    }

    #[test]
    fn extraction_unit_needs_secondary_area() {
        let mut inst = tiny_instance();
        inst.units[0].kind = UnitKind::Extraction;
        assert!(inst.validate().is_err());
    }

    #[test]
    fn series_slice_days_concatenates_in_order() {
        let s = Series::Hourly((0..12).map(|v| v as f64).collect());
        let sliced = s.slice_days(&[0, 2], 4);
        assert_eq!(
            sliced,
            Series::Hourly(vec![0.0, 1.0, 2.0, 3.0, 8.0, 9.0, 10.0, 11.0])
        );
        assert_eq!(Series::Scalar(7.0).slice_days(&[1], 4), Series::Scalar(7.0));
    }
}
