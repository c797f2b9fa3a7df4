//! Builds the LP-relaxed capacity expansion problem from an instance:
//! hourly area balances with penalized slack, production/RES/storage/line/EV
//! operation, and one continuous investment variable per candidate coupled
//! to the utilization of its target component.

use std::collections::HashMap;

use thiserror::Error;

use crate::instance::{
    Instance, Interconnector, InvestmentCandidate, InvestmentTarget, ProductionUnit,
    RenewableUnit, Series, Storage, UnitKind,
};

pub const INF: f64 = f64::INFINITY;

#[derive(Debug, Error)]
pub enum CepError {
    #[error("instance error: {0}")]
    Instance(#[from] crate::instance::InstanceError),
    #[error("candidate {candidate} does not target {component}")]
    TargetMismatch {
        candidate: String,
        component: String,
    },
    #[error("duplicate variable name {0}")]
    DuplicateVariable(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("investment {id} value {value} violates bounds [{lb}, {ub}]")]
    BoundViolation {
        id: String,
        value: f64,
        lb: f64,
        ub: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Sparse LP in standard minimization form with named, bounded variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    pub var_names: Vec<String>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Dense objective vector (one coefficient per variable).
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    var_index: HashMap<String, usize>,
    /// Candidate id and its investment variable column.
    pub investment_vars: Vec<(String, usize)>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn n_nonzeros(&self) -> usize {
        self.constraints.iter().map(|c| c.coeffs.len()).sum()
    }

    pub fn add_var(
        &mut self,
        name: String,
        lb: f64,
        ub: f64,
        obj: f64,
    ) -> Result<usize, CepError> {
        assert!(lb <= ub, "variable {name}: lb {lb} > ub {ub}");
        if self.var_index.contains_key(&name) {
            return Err(CepError::DuplicateVariable(name));
        }
        let col = self.var_names.len();
        self.var_index.insert(name.clone(), col);
        self.var_names.push(name);
        self.lower.push(lb);
        self.upper.push(ub);
        self.objective.push(obj);
        Ok(col)
    }

    pub fn var(&self, name: &str) -> Result<usize, CepError> {
        self.var_index
            .get(name)
            .copied()
            .ok_or_else(|| CepError::UnknownVariable(name.to_string()))
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        debug_assert!(coeffs.iter().all(|&(c, _)| c < self.n_vars()));
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Sparse view of the objective (nonzero coefficients only).
    pub fn objective_terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.objective
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| (i, c))
    }
}

/// Invested capacity per candidate id, in candidate order.
#[derive(Debug, Clone, PartialEq)]
pub struct InvestmentVector {
    pub entries: Vec<(String, f64)>,
}

impl InvestmentVector {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v).sum()
    }
}

fn series_at(s: &Series, t: usize) -> f64 {
    s.value(t)
}

fn avail_at(av: &Option<Series>, t: usize) -> f64 {
    av.as_ref().map_or(1.0, |s| s.value(t))
}

pub fn var_primary(unit: &str, t: usize) -> String {
    format!("p:{unit}:{t}")
}
pub fn var_secondary(unit: &str, t: usize) -> String {
    format!("s:{unit}:{t}")
}
pub fn var_res(res: &str, t: usize) -> String {
    format!("r:{res}:{t}")
}
pub fn var_level(storage: &str, t: usize) -> String {
    format!("lvl:{storage}:{t}")
}
pub fn var_flow_fwd(line: &str, t: usize) -> String {
    format!("fw:{line}:{t}")
}
pub fn var_flow_bwd(line: &str, t: usize) -> String {
    format!("bw:{line}:{t}")
}
pub fn var_investment(candidate: &str) -> String {
    format!("inv:{candidate}")
}

struct BalanceSheet {
    /// One coefficient list per (area, hour); rhs accumulates demand.
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    area_index: HashMap<String, usize>,
    horizon: usize,
}

impl BalanceSheet {
    fn new(instance: &Instance) -> Self {
        let area_index: HashMap<String, usize> = instance
            .areas
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), i))
            .collect();
        let n = instance.areas.len() * instance.meta.horizon;
        BalanceSheet {
            rows: vec![Vec::new(); n],
            rhs: vec![0.0; n],
            area_index,
            horizon: instance.meta.horizon,
        }
    }

    fn is_internal(&self, area: &str) -> bool {
        self.area_index.contains_key(area)
    }

    fn add(&mut self, area: &str, t: usize, col: usize, coeff: f64) {
        let a = self.area_index[area];
        self.rows[a * self.horizon + t].push((col, coeff));
    }

    fn add_rhs(&mut self, area: &str, t: usize, demand: f64) {
        let a = self.area_index[area];
        self.rhs[a * self.horizon + t] += demand;
    }
}

/// Builds the full LP: balance equalities per area and hour (supply + slack
/// = demand), operational bounds, and the investment couplings for every
/// candidate.
pub fn build_lp(instance: &Instance) -> Result<LpProblem, CepError> {
    instance.validate()?;
    let horizon = instance.meta.horizon;
    let mut p = LpProblem::new();
    let mut bal = BalanceSheet::new(instance);

    // candidates grouped by target
    let cands_for = |kind: InvestmentTarget, id: &str| -> Vec<&InvestmentCandidate> {
        instance
            .investments
            .iter()
            .filter(|c| c.target_kind == kind && c.target_id == id)
            .collect()
    };

    for c in &instance.investments {
        p.add_var(var_investment(&c.id), c.lb, c.ub, c.investment_cost)?;
        p.investment_vars
            .push((c.id.clone(), p.n_vars() - 1));
    }

    // production units
    for u in &instance.units {
        let cands = cands_for(InvestmentTarget::Production, &u.id);
        let invested = !cands.is_empty();
        for t in 0..horizon {
            let avail = avail_at(&u.availability, t);
            let obj = u.variable_cost + series_at(&u.fuel_price, t) / u.efficiency;
            let cap = u.capacity * avail;
            let plain_ub = match u.kind {
                UnitKind::Extraction => INF, // bounded by the cv row
                _ if invested => INF,
                _ => cap,
            };
            let pv = p.add_var(var_primary(&u.id, t), 0.0, plain_ub, obj)?;
            bal.add(&u.output_area, t, pv, 1.0);
            if let Some(input) = &u.input_area {
                bal.add(input, t, pv, -1.0 / u.efficiency);
            }
            match u.kind {
                UnitKind::Single => {}
                UnitKind::Backpressure => {
                    let sv = p.add_var(var_secondary(&u.id, t), 0.0, INF, 0.0)?;
                    let sec = u.secondary_output_area.as_ref().expect("validated");
                    bal.add(sec, t, sv, 1.0);
                    // secondary = cb * primary
                    p.add_constraint(vec![(sv, 1.0), (pv, -u.cb)], Relation::Eq, 0.0);
                }
                UnitKind::Extraction => {
                    let sv = p.add_var(var_secondary(&u.id, t), 0.0, INF, 0.0)?;
                    let sec = u.secondary_output_area.as_ref().expect("validated");
                    bal.add(sec, t, sv, 1.0);
                    if !invested {
                        // primary + cv * secondary <= capacity
                        p.add_constraint(
                            vec![(pv, 1.0), (sv, u.cv)],
                            Relation::Le,
                            cap,
                        );
                    }
                }
            }
        }
        for c in cands {
            match u.kind {
                UnitKind::Extraction => emit_extraction_investment(&mut p, u, c, horizon)?,
                _ => emit_production_investment(&mut p, u, c, horizon)?,
            }
        }
    }

    // renewables
    for r in &instance.res {
        let cands = cands_for(InvestmentTarget::Res, &r.id);
        let invested = !cands.is_empty();
        for t in 0..horizon {
            let max = series_at(&r.profile, t) * r.capacity;
            let (lb, ub) = match (r.curtailable, invested) {
                (true, false) => (0.0, max),
                (true, true) => (0.0, INF),
                (false, false) => (max, max),
                (false, true) => (0.0, INF),
            };
            let rv = p.add_var(var_res(&r.id, t), lb, ub, 0.0)?;
            bal.add(&r.area, t, rv, 1.0);
        }
        for c in cands {
            emit_res_investment(&mut p, r, c, horizon)?;
        }
    }

    // storages
    for s in &instance.storages {
        let cands = cands_for(InvestmentTarget::Storage, &s.id);
        let invested = !cands.is_empty();
        let keep = 1.0 - s.loss;
        let mut prev_level = None;
        for t in 0..horizon {
            let cap = if invested { INF } else { s.energy_capacity };
            let lvl = p.add_var(var_level(&s.id, t), 0.0, cap, 0.0)?;
            let ch = p.add_var(format!("ch:{}:{t}", s.id), 0.0, s.charge_rate, 0.0)?;
            let dis = p.add_var(format!("dis:{}:{t}", s.id), 0.0, s.discharge_rate, 0.0)?;
            bal.add(&s.area, t, ch, -1.0);
            bal.add(&s.area, t, dis, 1.0);
            // level_t = keep * level_{t-1} + charge - discharge
            match prev_level {
                None => p.add_constraint(
                    vec![(lvl, 1.0), (ch, -1.0), (dis, 1.0)],
                    Relation::Eq,
                    keep * s.initial_level,
                ),
                Some(prev) => p.add_constraint(
                    vec![(lvl, 1.0), (prev, -keep), (ch, -1.0), (dis, 1.0)],
                    Relation::Eq,
                    0.0,
                ),
            }
            prev_level = Some(lvl);
        }
        // end-of-horizon level may not fall below the initial level
        if let Some(last) = prev_level {
            p.add_constraint(vec![(last, 1.0)], Relation::Ge, s.initial_level);
        }
        for c in cands {
            emit_storage_investment(&mut p, s, c, horizon)?;
        }
    }

    // interconnection lines
    for l in &instance.lines {
        let cands = cands_for(InvestmentTarget::Line, &l.id);
        let invested = !cands.is_empty();
        let price_of = |area: &str| -> Option<&Series> {
            instance
                .external_areas
                .iter()
                .find(|x| x.id == area)
                .map(|x| &x.price)
        };
        let from_price = price_of(&l.from);
        let to_price = price_of(&l.to);
        for t in 0..horizon {
            let avail = avail_at(&l.availability, t);
            let (ub_fwd, ub_bwd) = if invested {
                (INF, INF)
            } else {
                (l.capacity_fwd * avail, l.capacity_bwd * avail)
            };
            // forward = from -> to, backward = to -> from. Imports from an
            // external endpoint cost its price, exports earn it.
            let mut obj_fwd = 0.0;
            let mut obj_bwd = 0.0;
            if let Some(price) = from_price {
                obj_fwd += price.value(t); // import into `to`
                obj_bwd -= price.value(t); // export out of `to`
            }
            if let Some(price) = to_price {
                obj_bwd += price.value(t);
                obj_fwd -= price.value(t);
            }
            let fw = p.add_var(var_flow_fwd(&l.id, t), 0.0, ub_fwd, obj_fwd)?;
            let bw = p.add_var(var_flow_bwd(&l.id, t), 0.0, ub_bwd, obj_bwd)?;
            if bal.is_internal(&l.from) {
                bal.add(&l.from, t, fw, -1.0);
                bal.add(&l.from, t, bw, 1.0);
            }
            if bal.is_internal(&l.to) {
                bal.add(&l.to, t, fw, 1.0);
                bal.add(&l.to, t, bw, -1.0);
            }
        }
        for c in cands {
            emit_line_investment(&mut p, l, c, horizon)?;
        }
    }

    // electric vehicles: flexible charging with cumulative deadlines
    for ev in &instance.evs {
        let mut charge_cols = Vec::with_capacity(horizon);
        for t in 0..horizon {
            let cv = p.add_var(format!("ev:{}:{t}", ev.id), 0.0, ev.charge_rate, 0.0)?;
            bal.add(&ev.area, t, cv, -1.0);
            charge_cols.push(cv);
        }
        let mut events = ev.driving_events.clone();
        events.sort_by_key(|e| e.deadline);
        let mut cumulative = 0.0;
        for e in &events {
            cumulative += e.energy;
            let coeffs: Vec<(usize, f64)> = charge_cols[..=e.deadline]
                .iter()
                .map(|&c| (c, 1.0))
                .collect();
            p.add_constraint(coeffs, Relation::Ge, cumulative);
        }
        if !events.is_empty() {
            let coeffs: Vec<(usize, f64)> = charge_cols.iter().map(|&c| (c, 1.0)).collect();
            p.add_constraint(coeffs, Relation::Le, cumulative);
        }
    }

    // demands and slack
    let global_penalty = instance
        .demands
        .iter()
        .map(|d| d.slack_penalty)
        .fold(1e5_f64, f64::max);
    for d in &instance.demands {
        for t in 0..horizon {
            bal.add_rhs(&d.area, t, d.series.value(t));
        }
    }
    for a in &instance.areas {
        let penalty = instance
            .demands
            .iter()
            .filter(|d| d.area == a.id)
            .map(|d| d.slack_penalty)
            .fold(f64::NEG_INFINITY, f64::max);
        let penalty = if penalty.is_finite() {
            penalty
        } else {
            global_penalty
        };
        for t in 0..horizon {
            let uns = p.add_var(format!("uns:{}:{t}", a.id), 0.0, INF, penalty)?;
            let sur = p.add_var(format!("sur:{}:{t}", a.id), 0.0, INF, penalty)?;
            bal.add(&a.id, t, uns, 1.0);
            bal.add(&a.id, t, sur, -1.0);
        }
    }

    // flush balance equalities
    for (row, coeffs) in bal.rows.iter().enumerate() {
        p.add_constraint(coeffs.clone(), Relation::Eq, bal.rhs[row]);
    }

    Ok(p)
}

fn check_target(
    candidate: &InvestmentCandidate,
    kind: InvestmentTarget,
    component: &str,
) -> Result<(), CepError> {
    if candidate.target_kind == kind && candidate.target_id == component {
        Ok(())
    } else {
        Err(CepError::TargetMismatch {
            candidate: candidate.id.clone(),
            component: component.to_string(),
        })
    }
}

fn investment_col(p: &mut LpProblem, c: &InvestmentCandidate) -> Result<usize, CepError> {
    match p.var(&var_investment(&c.id)) {
        Ok(col) => Ok(col),
        Err(_) => {
            let col = p.add_var(var_investment(&c.id), c.lb, c.ub, c.investment_cost)?;
            p.investment_vars.push((c.id.clone(), col));
            Ok(col)
        }
    }
}

/// Per-hour inventory coupling: `level_t <= existing_capacity + x`.
pub fn emit_storage_investment(
    p: &mut LpProblem,
    storage: &Storage,
    candidate: &InvestmentCandidate,
    horizon: usize,
) -> Result<(), CepError> {
    check_target(candidate, InvestmentTarget::Storage, &storage.id)?;
    let x = investment_col(p, candidate)?;
    for t in 0..horizon {
        let lvl = p.var(&var_level(&storage.id, t))?;
        p.upper[lvl] = INF;
        p.add_constraint(
            vec![(lvl, 1.0), (x, -1.0)],
            Relation::Le,
            storage.energy_capacity,
        );
    }
    Ok(())
}

/// Per-hour, per-direction flow coupling:
/// `flow_t <= avail_t * (existing_capacity + x)`.
pub fn emit_line_investment(
    p: &mut LpProblem,
    line: &Interconnector,
    candidate: &InvestmentCandidate,
    horizon: usize,
) -> Result<(), CepError> {
    check_target(candidate, InvestmentTarget::Line, &line.id)?;
    let x = investment_col(p, candidate)?;
    for t in 0..horizon {
        let avail = avail_at(&line.availability, t);
        for (var, cap) in [
            (var_flow_fwd(&line.id, t), line.capacity_fwd),
            (var_flow_bwd(&line.id, t), line.capacity_bwd),
        ] {
            let col = p.var(&var)?;
            p.upper[col] = INF;
            p.add_constraint(
                vec![(col, 1.0), (x, -avail)],
                Relation::Le,
                cap * avail,
            );
        }
    }
    Ok(())
}

/// Per-hour production coupling: curtailable units get
/// `prod_t <= profile_t * (existing + x)`, non-curtailable an equality.
pub fn emit_res_investment(
    p: &mut LpProblem,
    res: &RenewableUnit,
    candidate: &InvestmentCandidate,
    horizon: usize,
) -> Result<(), CepError> {
    check_target(candidate, InvestmentTarget::Res, &res.id)?;
    let x = investment_col(p, candidate)?;
    let relation = if res.curtailable {
        Relation::Le
    } else {
        Relation::Eq
    };
    for t in 0..horizon {
        let profile = res.profile.value(t);
        let col = p.var(&var_res(&res.id, t))?;
        p.upper[col] = INF;
        p.add_constraint(
            vec![(col, 1.0), (x, -profile)],
            relation,
            profile * res.capacity,
        );
    }
    Ok(())
}

/// Per-hour primary-output coupling for single-output and backpressure
/// units: `prod_t <= avail_t * (existing + x)`.
pub fn emit_production_investment(
    p: &mut LpProblem,
    unit: &ProductionUnit,
    candidate: &InvestmentCandidate,
    horizon: usize,
) -> Result<(), CepError> {
    check_target(candidate, InvestmentTarget::Production, &unit.id)?;
    let x = investment_col(p, candidate)?;
    for t in 0..horizon {
        let avail = avail_at(&unit.availability, t);
        let col = p.var(&var_primary(&unit.id, t))?;
        p.upper[col] = INF;
        p.add_constraint(
            vec![(col, 1.0), (x, -avail)],
            Relation::Le,
            unit.capacity * avail,
        );
    }
    Ok(())
}

/// Extraction units couple both outputs:
/// `primary_t + cv * secondary_t <= avail_t * (existing + x)`.
pub fn emit_extraction_investment(
    p: &mut LpProblem,
    unit: &ProductionUnit,
    candidate: &InvestmentCandidate,
    horizon: usize,
) -> Result<(), CepError> {
    check_target(candidate, InvestmentTarget::Production, &unit.id)?;
    let x = investment_col(p, candidate)?;
    for t in 0..horizon {
        let avail = avail_at(&unit.availability, t);
        let pv = p.var(&var_primary(&unit.id, t))?;
        let sv = p.var(&var_secondary(&unit.id, t))?;
        p.add_constraint(
            vec![(pv, 1.0), (sv, unit.cv), (x, -avail)],
            Relation::Le,
            unit.capacity * avail,
        );
    }
    Ok(())
}

/// Reads the invested capacities out of a solution, enforcing candidate
/// bounds within 1e-6.
pub fn extract_investments(
    problem: &LpProblem,
    values: &[f64],
) -> Result<InvestmentVector, CepError> {
    let mut entries = Vec::with_capacity(problem.investment_vars.len());
    for (id, col) in &problem.investment_vars {
        let v = values[*col];
        let (lb, ub) = (problem.lower[*col], problem.upper[*col]);
        if v < lb - 1e-6 || v > ub + 1e-6 {
            return Err(CepError::BoundViolation {
                id: id.clone(),
                value: v,
                lb,
                ub,
            });
        }
        entries.push((id.clone(), v.clamp(lb, ub)));
    }
    Ok(InvestmentVector { entries })
}
