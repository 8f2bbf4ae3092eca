use serde::Serialize;

use crate::error::CliResult;
use crate::model::Model;
use crate::output::{csv_table, emit, OutputArgs, Report};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, default_value_t = 64)]
    pub length: usize,
}

#[derive(Debug, Serialize)]
struct Generated {
    model: String,
    length: usize,
    first_site: i64,
    word: String,
    potential: Vec<f64>,
}

impl Report for Generated {
    fn text(&self) -> String {
        self.word.clone()
    }

    fn csv(&self) -> CliResult<String> {
        let rows = self.word.chars().zip(&self.potential).enumerate().map(|(i, (s, v))| {
            [(self.first_site + i as i64).to_string(), s.to_string(), v.to_string()]
        });
        csv_table(&["n", "symbol", "V"], rows)
    }
}

pub fn run(model: &Model, args: &Args, out: &OutputArgs) -> CliResult<()> {
    let range = 1..=args.length as i64;
    let word = model.word(range.clone())?;
    let v = model.potential(range)?;
    let report = Generated {
        model: model.label(),
        length: args.length,
        first_site: 1,
        word: word.to_string(),
        potential: v.values().to_vec(),
    };
    emit(&report, out)
}
