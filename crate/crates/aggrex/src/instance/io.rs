//! Instance file IO. Instances are TOML documents; long timeseries may be
//! inlined as arrays or referenced as side-car CSV files (one column per
//! series, one row per hour, header row carries the series ids). File
//! references are resolved relative to the instance file and saving always
//! inlines the resolved values, so `load(save(x)) == x`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::{Instance, InstanceError, Series};

fn io_err(path: &Path, source: std::io::Error) -> InstanceError {
    InstanceError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance, InstanceError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut instance: Instance =
        toml::from_str(&text).map_err(|e| InstanceError::Parse(e.to_string()))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    resolve_files(&mut instance, base)?;
    instance.validate()?;
    Ok(instance)
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<(), InstanceError> {
    let path = path.as_ref();
    instance.validate()?;
    let text = toml::to_string(instance).map_err(|e| InstanceError::Parse(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn resolve_files(instance: &mut Instance, base: &Path) -> Result<(), InstanceError> {
    let mut cache: HashMap<PathBuf, HashMap<String, Vec<f64>>> = HashMap::new();
    let mut resolve = |s: &mut Series| -> Result<(), InstanceError> {
        if let Series::File { file, column } = s {
            let full = base.join(&*file);
            if !cache.contains_key(&full) {
                cache.insert(full.clone(), read_series_csv(&full)?);
            }
            let columns = &cache[&full];
            let values = columns.get(column).ok_or_else(|| {
                InstanceError::Parse(format!(
                    "series column {column} not found in {}",
                    full.display()
                ))
            })?;
            *s = Series::Hourly(values.clone());
        }
        Ok(())
    };

    for a in &mut instance.external_areas {
        resolve(&mut a.price)?;
    }
    for u in &mut instance.units {
        resolve(&mut u.fuel_price)?;
        if let Some(av) = &mut u.availability {
            resolve(av)?;
        }
    }
    for r in &mut instance.res {
        resolve(&mut r.profile)?;
    }
    for l in &mut instance.lines {
        if let Some(av) = &mut l.availability {
            resolve(av)?;
        }
    }
    for d in &mut instance.demands {
        resolve(&mut d.series)?;
    }
    Ok(())
}

fn read_series_csv(path: &Path) -> Result<HashMap<String, Vec<f64>>, InstanceError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| {
        InstanceError::Parse(format!("{}: {e}", path.display()))
    })?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| InstanceError::Parse(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    for record in reader.records() {
        let record = record.map_err(|e| InstanceError::Parse(format!("{}: {e}", path.display())))?;
        for (i, field) in record.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                InstanceError::Parse(format!(
                    "{}: non-numeric value {field:?}",
                    path.display()
                ))
            })?;
            columns[i].push(v);
        }
    }
    Ok(headers.into_iter().zip(columns).collect())
}
