use std::fmt::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use signgate::error_rates::AcceptanceRegion;
use signgate::numerics::two_sided_p_value;
use signgate::procedures::{
    by_procedure, decide, lc_procedure, nlc_procedure, tce_procedure, DecisionNote, DecisionSet,
};
use signgate::simulation::format_g17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcedureName {
    By,
    Lc,
    Nlc,
    Tce,
    FixedAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Asymmetric Laplace effects centred at zero.
    Ald0,
}

#[derive(Debug, Args)]
pub struct InferArgs {
    /// File with one statistic per line, or a CSV file with --csv.
    #[arg(long)]
    input: PathBuf,
    /// CSV column holding the statistics: a header name, or a 1-based
    /// position for files without a header.
    #[arg(long, value_name = "COL")]
    csv: Option<String>,
    #[arg(long, value_enum)]
    procedure: ProcedureName,
    /// Target sign error rate (all procedures except fixed-alpha).
    #[arg(long)]
    alpha_s: Option<f64>,
    /// Level of the acceptance region (fixed-alpha).
    #[arg(long)]
    alpha: Option<f64>,
    /// Share of the level in the lower tail (fixed-alpha).
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    /// Effect model fitted by the tce procedure.
    #[arg(long, value_enum, default_value = "ald0")]
    model: Model,
    /// Decision CSV path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn decisions_csv(y: &[f64], d: &DecisionSet) -> String {
    let mut out = String::from("index,y,rejected,sign,p_value\n");
    for (i, v) in y.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            i + 1,
            format_g17(*v),
            u8::from(d.rejected[i]),
            d.sign[i],
            format_g17(two_sided_p_value(*v))
        )
        .expect("writing to a string");
    }
    out
}

fn note_text(n: &DecisionNote) -> String {
    match n {
        DecisionNote::DegenerateFit { mean, variance } => format!(
            "moment fit degenerate (mean {mean:.4}, variance {variance:.4}); fallback model used"
        ),
        DecisionNote::AlphaAtUpperCap => {
            "MSER below target at every level; alpha at upper cap".into()
        }
        DecisionNote::AlphaAtLowerCap => {
            "MSER above target at every level; alpha at lower cap".into()
        }
    }
}

pub fn run(args: InferArgs) -> Result<()> {
    let data = crate::input::read_dataset(&args.input, args.csv.as_deref())?;
    let need_alpha_s = || match args.alpha_s {
        Some(a) => Ok(a),
        None => bail!("--alpha-s is required for this procedure"),
    };
    let Model::Ald0 = args.model;
    let d = match args.procedure {
        ProcedureName::By => by_procedure(&data, need_alpha_s()?)?,
        ProcedureName::Lc => lc_procedure(&data, need_alpha_s()?)?,
        ProcedureName::Nlc => nlc_procedure(&data, need_alpha_s()?)?,
        ProcedureName::Tce => tce_procedure(&data, need_alpha_s()?)?,
        ProcedureName::FixedAlpha => {
            let Some(alpha) = args.alpha else {
                bail!("--alpha is required for fixed-alpha");
            };
            decide(&data, &AcceptanceRegion::new(alpha, args.s)?)
        }
    };
    crate::emit(args.output.as_deref(), &decisions_csv(data.values(), &d))?;

    let name = args.procedure.to_possible_value().expect("named variant");
    eprintln!(
        "procedure={} m={} alpha_chosen={} R={}",
        name.get_name(),
        data.len(),
        format_g17(d.alpha_used.summary()),
        d.rejections()
    );
    if let Some(fit) = d.fitted {
        eprintln!(
            "fitted ALD: tau={} q={}",
            format_g17(fit.tau),
            format_g17(fit.q)
        );
    }
    for n in &d.notes {
        eprintln!("note: {}", note_text(n));
    }
    Ok(())
}
