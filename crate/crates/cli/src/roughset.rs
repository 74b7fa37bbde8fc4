use vague_core::roughset::{
    classify_definability, enumerate_rough_sets, is_informative, tone_classify, verify_existence,
    verify_expression, RoughSet, RoughSetDocument, RoughSetError, StateSpace,
};
use vague_core::Execution;

use crate::error::{core, CliError};
use crate::output::{read_input, Provenance};
use crate::{RoughCheck, RoughsetArgs};

const TONE_RULES: &str = "\
positive: lower within {pi > 0}, or lower empty and upper within {pi > 0}
negative: lower within {pi < 0}, or lower empty and upper within {pi < 0}
neutral:  otherwise
the first clause of each rule applies only to a non-empty lower approximation
";

fn cap_error(e: RoughSetError) -> CliError {
    match e {
        RoughSetError::CapExceeded { size, cap } => CliError::Usage(format!(
            "{size} states exceeds the enumeration cap of {cap}; \
             enumeration visits 3^n pairs, so pass fewer states or raise --cap (at most 12)"
        )),
        other => core(other),
    }
}

/// Payoffs `i - (n-1)/2`, so the space straddles zero.
fn centred_space(n: usize) -> Result<StateSpace, CliError> {
    let half = (n as f64 - 1.0) / 2.0;
    let payoffs: Vec<f64> = (0..n).map(|i| i as f64 - half).collect();
    StateSpace::from_payoffs(&payoffs).map_err(core)
}

fn describe(rs: &RoughSet, space: &StateSpace) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}",
        space.format_set(rs.lower()),
        space.format_set(rs.upper()),
        tone_classify(rs, space),
        classify_definability(rs),
        if is_informative(rs) {
            "informative"
        } else {
            "uninformative"
        }
    )
}

pub fn run(args: &RoughsetArgs, exec: Execution) -> Result<(), CliError> {
    let input = args.input.as_deref().map(read_input).transpose()?;
    let (space, listed) = match &input {
        Some(f) => RoughSetDocument::parse(&f.text)
            .and_then(|d| d.decode())
            .map_err(core)?,
        None => (centred_space(args.states as usize)?, Vec::new()),
    };
    let cap = args.cap as usize;
    let mut out =
        Provenance::new("roughset", None, &input.iter().collect::<Vec<_>>()).hash_comment();
    out.push_str(&format!(
        "states: {}\n",
        space
            .labels()
            .iter()
            .zip(space.payoffs())
            .map(|(l, p)| format!("{l}={p}"))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    match args.check {
        RoughCheck::Existence => {
            let r = verify_existence(&space, cap, exec).map_err(cap_error)?;
            out.push_str(&r.render(&space));
        }
        RoughCheck::Expression => {
            let r = verify_expression(&space, cap, exec).map_err(cap_error)?;
            out.push_str(&r.render(&space));
        }
        RoughCheck::ToneTable => {
            let all = enumerate_rough_sets(&space, true, cap).map_err(cap_error)?;
            out.push_str(TONE_RULES);
            out.push_str("\nlower\tupper\ttone\tdefinability\tinformativeness\n");
            for rs in &all {
                out.push_str(&describe(rs, &space));
                out.push('\n');
            }
        }
        RoughCheck::Classify => {
            if listed.is_empty() {
                return Err(CliError::Usage(
                    "classify needs --input with a non-empty `rough_sets` list".into(),
                ));
            }
            out.push_str("lower\tupper\ttone\tdefinability\tinformativeness\n");
            for rs in &listed {
                out.push_str(&describe(rs, &space));
                out.push('\n');
            }
        }
    }
    print!("{out}");
    Ok(())
}
