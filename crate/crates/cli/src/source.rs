use std::fs;
use std::path::Path;
use std::sync::Arc;

use groupwalk::distribution::parse_distribution;
use groupwalk::group::{parse_cayley_table_with, parse_magma, validate_group, ValidateOptions};
use groupwalk::{Error, FiniteGroup, GroupDistribution, GroupValidationReport};

use crate::commands::Failure;
use crate::{DistArgs, GroupSource};

impl GroupSource {
    pub fn options(&self) -> ValidateOptions {
        ValidateOptions {
            associativity_limit: Some(self.assoc_limit),
        }
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn table(path: &Path, options: ValidateOptions) -> Result<FiniteGroup, Failure> {
    parse_cayley_table_with(&read(path)?, options).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

/// Loads the group, failing with exit status 2 if the table is not a group.
pub fn load_group(src: &GroupSource) -> Result<Arc<FiniteGroup>, Failure> {
    let kind = &src.kind;
    let group = if let Some(n) = kind.cyclic {
        FiniteGroup::cyclic(n)?
    } else if let Some(m) = kind.dihedral {
        FiniteGroup::dihedral(m)?
    } else if let Some(k) = kind.symmetric {
        FiniteGroup::symmetric(k)?
    } else if let Some(files) = &kind.product {
        let g = table(&files[0], src.options())?;
        let h = table(&files[1], src.options())?;
        FiniteGroup::direct_product(&g, &h)?
    } else if let Some(path) = &kind.table {
        table(path, src.options())?
    } else {
        return Err(Failure::Usage("no group source given".into()));
    };
    Ok(Arc::new(group))
}

/// Validation reports for every table the source reads; built-in
/// constructions are checked on their generated table.
pub fn validation_reports(src: &GroupSource) -> Result<Vec<GroupValidationReport>, Failure> {
    let files: Vec<&Path> = match (&src.kind.product, &src.kind.table) {
        (Some(files), _) => files.iter().map(|p| p.as_path()).collect(),
        (None, Some(path)) => vec![path.as_path()],
        (None, None) => return Ok(vec![load_group(src)?.validate(src.options())]),
    };
    let mut reports = Vec::new();
    for path in files {
        let (magma, _) = parse_magma(&read(path)?).map_err(|e| in_file(path, e))?;
        reports.push(validate_group(&magma, src.options()));
    }
    Ok(reports)
}

pub fn load_distribution(
    group: &Arc<FiniteGroup>,
    args: &DistArgs,
) -> Result<GroupDistribution, Failure> {
    parse_distribution(group.clone(), &read(&args.path)?, args.normalize)
        .map_err(|e| in_file(&args.path, e))
}
