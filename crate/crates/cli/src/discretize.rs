use std::path::{Path, PathBuf};

use cfs_core::{discretize_mdl, load_csv};

use crate::args::DiscretizeArgs;
use crate::Failure;

/// `out.csv` -> `out.json`; a path that already ends in `.json` gets `.json` appended.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let swapped = output.with_extension("json");
    if swapped == output {
        let mut s = output.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    } else {
        swapped
    }
}

pub fn run(args: &DiscretizeArgs) -> Result<(), Failure> {
    let raw = load_csv(&args.input, &args.class, !args.no_header)?;
    let (ds, model) = discretize_mdl(&raw)?;
    ds.write_csv_file(&args.output)?;
    let sidecar = sidecar_path(&args.output);
    std::fs::write(&sidecar, model.to_json() + "\n")
        .map_err(|e| Failure::data(format!("cannot write {}: {e}", sidecar.display())))?;
    eprintln!(
        "wrote {} ({} rows, {} features) and {}",
        args.output.display(),
        ds.n_rows(),
        ds.n_features(),
        sidecar.display()
    );
    Ok(())
}
