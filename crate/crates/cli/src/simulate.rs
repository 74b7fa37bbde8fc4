use vague_core::expectations::{gen_panel, SimulationConfig};
use vague_core::Execution;

use crate::error::{core, CliError};
use crate::output::{read_input, Input, OutDir, Provenance};
use crate::{SimArgs, SimSettings};

/// Defaults, then the config file, then `--set`, then `--seed`.
pub fn resolve(settings: &SimSettings) -> Result<(SimulationConfig, Option<Input>), CliError> {
    let file = settings.config.as_deref().map(read_input).transpose()?;
    let mut overrides = settings.overrides.clone();
    if let Some(seed) = settings.seed {
        overrides.push(format!("seed={seed}"));
    }
    log::info!(
        "config precedence: defaults < {} < --set ({}) < --seed",
        file.as_ref().map_or("no config file", |f| f.name.as_str()),
        settings.overrides.len()
    );
    let cfg = SimulationConfig::resolve(file.as_ref().map(|f| f.text.as_str()), &overrides)
        .map_err(core)?;
    log::info!("seed {}", cfg.seed);
    Ok((cfg, file))
}

pub fn run(args: &SimArgs, exec: Execution) -> Result<(), CliError> {
    let (cfg, file) = resolve(&args.settings)?;
    let panel = gen_panel(&cfg, exec).map_err(core)?;
    let mut prov = Provenance::new("simulate", Some(cfg.seed), &file.iter().collect::<Vec<_>>());
    for w in &panel.warnings {
        prov.note(format!("warning: {w}"));
    }
    let out = OutDir::create(&args.output, prov)?;
    out.write("panel.csv", &panel.panel_csv())?;
    out.write("audit.csv", &panel.audit_csv())?;
    out.write("config.toml", &cfg.to_toml())?;
    print!("seed: {}\n{}", cfg.seed, panel.summary());
    Ok(())
}
