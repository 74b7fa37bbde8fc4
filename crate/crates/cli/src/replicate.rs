use vague_core::econometrics::ObservationTable;
use vague_core::replicate::{replicate, replicate_table, Replication, Status};
use vague_core::{Error, Execution};

use crate::error::CliError;
use crate::output::{read_input, OutDir, Provenance};
use crate::simulate::resolve;
use crate::ReplicateArgs;

fn checks_csv(rep: &Replication) -> String {
    let mut out = String::from("id,status,claim,detail\n");
    for c in &rep.checks {
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        out.push_str(&format!(
            "{},{},{},{}\n",
            c.id,
            c.status,
            quote(&c.claim),
            quote(&c.detail)
        ));
    }
    out
}

pub fn run(args: &ReplicateArgs, exec: Execution) -> Result<(), CliError> {
    let (cfg, file) = resolve(&args.settings)?;
    let panel_input = args.input.as_deref().map(read_input).transpose()?;

    let rep = match &panel_input {
        Some(p) => {
            let table = ObservationTable::from_csv_str(&p.text).map_err(|e| Error::Stage {
                stage: "load".into(),
                source: Box::new(e.into()),
            })?;
            replicate_table(&table, &cfg, exec)?
        }
        None => replicate(&cfg, exec)?.1,
    };

    let inputs: Vec<_> = file.iter().chain(panel_input.iter()).collect();
    let mut prov = Provenance::new("replicate", Some(cfg.seed), &inputs);
    if rep.null_mode {
        prov.note("null mode: no vague signals");
    }
    let out = OutDir::create(&args.output, prov)?;
    out.write("report.md", &rep.report_markdown())?;
    out.write(
        "results.csv",
        &vague_core::econometrics::results_csv(&rep.results),
    )?;
    out.write(
        "results.md",
        &vague_core::econometrics::results_markdown(&rep.results),
    )?;
    if let Some(q) = &rep.quintiles {
        out.write("quintiles.csv", &q.to_csv())?;
    }
    out.write("checks.csv", &checks_csv(&rep))?;

    println!("seed: {}", cfg.seed);
    for c in &rep.checks {
        println!("{} {}: {} ({})", c.status, c.id, c.claim, c.detail);
    }
    for (spec, err) in &rep.failures {
        eprintln!("error: spec {spec}: {err}");
    }
    let failed = rep
        .checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .count();
    if !rep.failures.is_empty() {
        return Err(CliError::SpecsFailed {
            failed: rep.failures.len(),
            total: rep.failures.len() + rep.results.len(),
        });
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}
