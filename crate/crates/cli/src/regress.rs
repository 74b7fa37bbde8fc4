use vague_core::econometrics::{
    construct_variables, parse_specs, results_csv, results_markdown, run_specs, ConstructOptions,
    ObservationTable, RunOptions,
};
use vague_core::Execution;

use crate::error::{core, CliError};
use crate::output::{read_input, OutDir, Provenance};
use crate::RegressArgs;

pub fn run(args: &RegressArgs, exec: Execution) -> Result<(), CliError> {
    let data = read_input(&args.input)?;
    let spec_file = read_input(&args.spec)?;
    let specs = parse_specs(&spec_file.text).map_err(core)?;
    let mut table = ObservationTable::from_csv_str(&data.text).map_err(core)?;
    let mut prov = Provenance::new("regress", None, &[&data, &spec_file]);

    // Raw panel exports get the derived variables first.
    if !table.has_column("ferror") && table.has_column("forecast") {
        let built = construct_variables(&table, &ConstructOptions::default()).map_err(core)?;
        prov.note("derived variables constructed from raw panel columns");
        for n in &built.notes {
            prov.note(format!("construct: {n}"));
        }
        table = built.table;
    }

    let opts = RunOptions {
        exec,
        ..RunOptions::default()
    };
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for (spec, res) in specs.iter().zip(run_specs(&specs, &table, &opts)) {
        match res {
            Ok(r) => results.push(r),
            Err(e) => {
                eprintln!("error: spec {}: {e}", spec.name);
                failures.push((spec.name.clone(), e.to_string()));
            }
        }
    }
    for (name, err) in &failures {
        prov.note(format!("spec {name} failed: {err}"));
    }

    let mut md = results_markdown(&results);
    for (name, err) in &failures {
        md.push_str(&format!("\n- {name}: FAILED ({err})\n"));
    }
    let out = OutDir::create(&args.output, prov)?;
    out.write("results.csv", &results_csv(&results))?;
    out.write("results.md", &md)?;
    print!("{md}");
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::SpecsFailed {
            failed: failures.len(),
            total: specs.len(),
        })
    }
}
