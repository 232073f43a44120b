//! Configuration files, CSV output and the command implementations behind
//! the `microswarm` binary.
//!
//! A configuration file is TOML overlaid on the default preset: omitted keys
//! keep their preset values, tables merge key by key, arrays of tables merge
//! element by element (extra elements are appended), and any key the preset
//! does not have is rejected.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::abm::{abm_run, l1_distance};
use crate::analysis::{compare_strategies, sweep_vd, target_density, vicinity_mass, SweepRow};
use crate::engine::{run, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::{paper_preset, total_mass, ScenarioConfig};

fn to_table(config: &ScenarioConfig) -> Table {
    Table::try_from(config).expect("config serializes to a TOML table")
}

/// Overlays the TOML document `text` on `base`.
pub fn parse_config_over(base: &ScenarioConfig, text: &str) -> Result<ScenarioConfig> {
    let overlay: Table = text.parse().map_err(|e: toml::de::Error| SwarmError::Parse(one_line(&e.to_string())))?;
    let mut merged = to_table(base);
    check_known_keys(&merged, &overlay, "")?;
    merge_tables(&mut merged, overlay);
    let config: ScenarioConfig = Value::Table(merged)
        .try_into()
        .map_err(|e: toml::de::Error| SwarmError::Parse(one_line(&e.to_string())))?;
    config.validate()?;
    Ok(config)
}

/// Parses a configuration document over the default preset.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_over(&paper_preset(), text)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| SwarmError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_config(&text)
}

/// Full TOML rendering of `config`; loading it reproduces `config` exactly.
pub fn config_to_toml(config: &ScenarioConfig) -> String {
    toml::to_string(config).expect("config serializes to TOML")
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn join_key(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn check_known_keys(base: &Table, overlay: &Table, prefix: &str) -> Result<()> {
    for (key, value) in overlay {
        let path = join_key(prefix, key);
        let Some(known) = base.get(key) else {
            return Err(SwarmError::UnknownKey(path));
        };
        match (known, value) {
            (Value::Table(b), Value::Table(o)) => check_known_keys(b, o, &path)?,
            (Value::Array(b), Value::Array(o)) => {
                let Some(Value::Table(template)) = b.first() else {
                    continue;
                };
                for (i, item) in o.iter().enumerate() {
                    if let Value::Table(t) = item {
                        let shape = match b.get(i) {
                            Some(Value::Table(bt)) => bt,
                            _ => template,
                        };
                        check_known_keys(shape, t, &format!("{path}[{i}]"))?;
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

fn merge_tables(base: &mut Table, overlay: Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(Value::Table(b)), Value::Table(o)) => merge_tables(b, o),
            (Some(Value::Array(b)), Value::Array(o)) if o.iter().all(Value::is_table) && b.iter().all(Value::is_table) => {
                for (i, item) in o.into_iter().enumerate() {
                    match (b.get_mut(i), item) {
                        (Some(Value::Table(bt)), Value::Table(ot)) => merge_tables(bt, ot),
                        (_, item) => b.push(item),
                    }
                }
            }
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

/// Floating-point rendering used in every CSV: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub const SNAPSHOT_HEADER: &str = "t,x,n1,n2,n3,rho,c";
pub const METRICS_HEADER: &str = "t,mass_total,density_at_target,vicinity_mass";
pub const SWEEP_HEADER: &str = "v_d,n0,t_agg";
pub const REPORT_HEADER: &str = "t,density_free,density_no_comm,density_comm,ratio";
pub const L1_HEADER: &str = "t,l1_total";

/// One row per (snapshot, cell). `n3` is zero for two-state runs.
pub fn snapshots_csv(traj: &Trajectory) -> String {
    let mut out = String::from(SNAPSHOT_HEADER);
    out.push('\n');
    for s in &traj.snapshots {
        let g = s.grid();
        let t = num(s.t);
        for i in 0..g.n_cells {
            let n = |k: usize| s.n.get(k).map_or(0.0, |f| f.values()[i]);
            let _ = writeln!(
                out,
                "{t},{},{},{},{},{},{}",
                num(g.center(i)),
                num(n(0)),
                num(n(1)),
                num(n(2)),
                num(s.rho.values()[i]),
                num(s.c.values()[i])
            );
        }
    }
    out
}

pub fn metrics_csv(traj: &Trajectory) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for s in &traj.snapshots {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(s.t),
            num(total_mass(s)),
            num(target_density(s)),
            num(vicinity_mass(s))
        );
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let t = r.t_agg.map(num).unwrap_or_default();
        let _ = writeln!(out, "{},{},{t}", num(r.v_d), num(r.n0));
    }
    out
}

/// Writes every `(file name, contents)` pair into `dir`, refusing to
/// replace existing files unless `force` is set. Nothing is written if any
/// target already exists.
pub fn write_outputs(dir: &Path, files: &[(&str, String)], force: bool) -> Result<Vec<PathBuf>> {
    let paths: Vec<PathBuf> = files.iter().map(|(name, _)| dir.join(name)).collect();
    if !force {
        if let Some(p) = paths.iter().find(|p| p.exists()) {
            return Err(SwarmError::WouldOverwrite(p.display().to_string()));
        }
    }
    fs::create_dir_all(dir)?;
    for (path, (_, contents)) in paths.iter().zip(files) {
        fs::write(path, contents)?;
    }
    Ok(paths)
}

/// `run`: snapshots.csv and metrics.csv for one trajectory.
pub fn cmd_run(config: &ScenarioConfig, out: &Path, force: bool) -> Result<Vec<PathBuf>> {
    let traj = run(config)?;
    write_outputs(
        out,
        &[("snapshots.csv", snapshots_csv(&traj)), ("metrics.csv", metrics_csv(&traj))],
        force,
    )
}

/// `sweep`: aggregation time for every drift speed and target fraction.
pub fn cmd_sweep(config: &ScenarioConfig, vd: &[f64], n0: &[f64], out: &Path, force: bool) -> Result<Vec<PathBuf>> {
    let rows = sweep_vd(config, vd, n0)?;
    write_outputs(out, &[("sweep.csv", sweep_csv(&rows))], force)
}

/// `compare`: metrics for the three strategies plus the ratio report.
pub fn cmd_compare(config: &ScenarioConfig, out: &Path, force: bool) -> Result<Vec<PathBuf>> {
    let cmp = compare_strategies(config)?;
    let r = &cmp.report;
    let report = format!(
        "{REPORT_HEADER}\n{},{},{},{},{}\n",
        num(r.t),
        num(r.density_free),
        num(r.density_no_comm),
        num(r.density_comm),
        num(r.ratio)
    );
    write_outputs(
        out,
        &[
            ("metrics_free.csv", metrics_csv(&cmp.free)),
            ("metrics_no_comm.csv", metrics_csv(&cmp.no_comm)),
            ("metrics_comm.csv", metrics_csv(&cmp.comm)),
            ("report.csv", report),
        ],
        force,
    )
}

/// `abm`: agent histograms and their L1 distance to the matching PDE run.
pub fn cmd_abm(config: &ScenarioConfig, agents: usize, seed: u64, out: &Path, force: bool) -> Result<Vec<PathBuf>> {
    let abm = abm_run(config, agents, seed)?;
    let pde = run(config)?;
    let mut l1 = String::from(L1_HEADER);
    l1.push('\n');
    for (a, p) in abm.snapshots.iter().zip(&pde.snapshots) {
        let _ = writeln!(l1, "{},{}", num(a.t), num(l1_distance(&a.total_density(), &p.total_density())));
    }
    write_outputs(
        out,
        &[
            ("abm_snapshots.csv", snapshots_csv(&abm)),
            ("abm_metrics.csv", metrics_csv(&abm)),
            ("l1_distance.csv", l1),
        ],
        force,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::three_state_preset;

    #[test]
    fn empty_file_is_the_preset() {
        assert_eq!(parse_config("").unwrap(), paper_preset());
    }

    #[test]
    fn override_touches_one_field() {
        let cfg = parse_config("[[states]]\n[[states]]\nchemotaxis = { speed = 0.2 }\n").unwrap();
        let mut expect = paper_preset();
        expect.states[1].chemotaxis.speed = 0.2;
        assert_eq!(cfg, expect);
    }

    #[test]
    fn nested_override() {
        let cfg = parse_config("[numerics]\nt_end = 3.5\n[grid]\nn_cells = 100\n").unwrap();
        assert_eq!(cfg.numerics.t_end, 3.5);
        assert_eq!(cfg.grid.n_cells, 100);
        assert_eq!(cfg.fields, paper_preset().fields);
    }

    #[test]
    fn misspelled_key_is_named() {
        let err = parse_config("[fields]\ngama_c = 0.2\n").unwrap_err();
        match err {
            SwarmError::UnknownKey(k) => assert_eq!(k, "fields.gama_c"),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_config("[[states]]\n[[states]]\n[states.chemotaxis]\nsped = 1.0\n").unwrap_err();
        assert!(matches!(err, SwarmError::UnknownKey(k) if k == "states[1].chemotaxis.sped"));
    }

    #[test]
    fn syntax_error_has_line_number() {
        let err = parse_config("[grid]\nn_cells = = 3\n").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, SwarmError::Parse(_)));
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn invalid_values_rejected() {
        let err = parse_config("[numerics]\ncfl_safety = 1.5\n").unwrap_err();
        assert!(matches!(err, SwarmError::InvalidConfig(_)));
        let err = parse_config("[controller]\nn_states = 3\n").unwrap_err();
        assert!(matches!(err, SwarmError::InvalidConfig(_)));
    }

    #[test]
    fn three_state_round_trip() {
        let cfg = three_state_preset();
        assert_eq!(parse_config(&config_to_toml(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn sweep_csv_leaves_unreached_empty() {
        let rows = [
            SweepRow {
                v_d: 0.1,
                n0: 0.5,
                t_agg: None,
            },
            SweepRow {
                v_d: 0.2,
                n0: 0.5,
                t_agg: Some(3.0),
            },
        ];
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "v_d,n0,t_agg");
        assert_eq!(lines[1], "1.0000000000000001e-1,5.0000000000000000e-1,");
        assert_eq!(lines[2], "2.0000000000000001e-1,5.0000000000000000e-1,3.0000000000000000e0");
    }

    #[test]
    fn refuses_overwrite_without_force() {
        let dir = tempfile::tempdir().unwrap();
        write_outputs(dir.path(), &[("a.csv", "x\n".into())], false).unwrap();
        let err = write_outputs(dir.path(), &[("a.csv", "y\n".into())], false).unwrap_err();
        assert!(matches!(err, SwarmError::WouldOverwrite(_)));
        write_outputs(dir.path(), &[("a.csv", "y\n".into())], true).unwrap();
        assert_eq!(fs::read_to_string(dir.path().join("a.csv")).unwrap(), "y\n");
    }
}
