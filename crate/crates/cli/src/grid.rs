//! Parameter grids for `tabulate`.

use matbeta::registry::{Identity, ParamKind};

use crate::error::CliError;

/// One axis of a grid: a parameter name and its values, unparsed.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<String>,
}

/// Parses `name=v1;v2;...`. Values of scalar parameters may also be split
/// on commas; sequence values are split on `;` only.
pub fn parse_axis(identity: &Identity, spec: &str) -> Result<Axis, CliError> {
    let (name, values) = spec
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("grid `{spec}`: expected name=values")))?;
    let name = name.trim();
    let param = identity
        .params
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CliError::usage(format!("`{}` takes no parameter `{name}`", identity.id)))?;
    let sep: &[char] = if param.kind == ParamKind::Sequence { &[';'] } else { &[';', ','] };
    let values: Vec<String> = values
        .split(sep)
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(String::from)
        .collect();
    if values.is_empty() {
        return Err(CliError::usage(format!("grid `{spec}` has no values")));
    }
    Ok(Axis { name: name.to_string(), values })
}

/// Cartesian product of the axes, the first axis varying slowest.
pub fn points(axes: &[Axis]) -> Vec<Vec<(String, String)>> {
    let mut rows: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for axis in axes {
        rows = rows
            .into_iter()
            .flat_map(|row| {
                axis.values.iter().map(move |v| {
                    let mut r = row.clone();
                    r.push((axis.name.clone(), v.clone()));
                    r
                })
            })
            .collect();
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use matbeta::registry::lookup;

    #[test]
    fn selberg_grid_has_six_rows() {
        let id = lookup("selberg-box").unwrap();
        let axes = vec![parse_axis(id, "n=1,2").unwrap(), parse_axis(id, "gamma=0.5;1;2").unwrap()];
        let rows = points(&axes);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0], vec![("n".into(), "1".into()), ("gamma".into(), "0.5".into())]);
        assert_eq!(rows[5], vec![("n".into(), "2".into()), ("gamma".into(), "2".into())]);
    }

    #[test]
    fn sequence_axis_keeps_commas() {
        let id = lookup("gindikin-gamma").unwrap();
        let a = parse_axis(id, "s=3,2;4,3").unwrap();
        assert_eq!(a.values, vec!["3,2", "4,3"]);
        assert!(parse_axis(id, "nope=1").is_err());
        assert!(parse_axis(id, "s=").is_err());
    }
}
