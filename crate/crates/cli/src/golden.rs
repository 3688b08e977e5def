//! Golden values and golden report files.
//!
//! `golden/values.json` holds curated numbers that the reports are checked against.
//! `golden/reports/` holds full reports for the invocations listed in
//! `golden/manifest.json`; `--update-golden` rewrites one of them and appends a line
//! to `golden/AUDIT.md`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::commands::CliError;
use crate::report::{Status, TOOL_VERSION};

const VALUES: &str = include_str!("../golden/values.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCount {
    pub count: usize,
    pub orthogonal_intersecting: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GoldenValues {
    /// lattice preset → bound → counts
    pub short_roots: BTreeMap<String, BTreeMap<String, RootCount>>,
    /// field → `|disc|`
    pub discriminants: BTreeMap<String, u64>,
    /// `"p,q,r"` → arithmetic
    pub takeuchi: BTreeMap<String, bool>,
}

impl GoldenValues {
    pub fn shipped() -> Self {
        serde_json::from_str(VALUES).expect("shipped golden values parse")
    }

    pub fn short_roots(&self, lattice: &str, bound: i64) -> Option<RootCount> {
        self.short_roots
            .get(lattice)?
            .get(&bound.to_string())
            .copied()
    }

    pub fn discriminant(&self, field: &str) -> Option<u64> {
        self.discriminants.get(field).copied()
    }

    /// Keys are stored with sorted orders; the criterion is symmetric.
    pub fn takeuchi(&self, mut orders: [u32; 3]) -> Option<bool> {
        orders.sort();
        self.takeuchi
            .get(&format!("{},{},{}", orders[0], orders[1], orders[2]))
            .copied()
    }
}

/// The default golden directory of the source tree.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

/// File stem for an invocation: its arguments reduced to `[a-z0-9-]` (at most 48
/// characters) plus a hash of the exact arguments, so that distinct invocations
/// never share a file.
pub fn case_name(args: &[String]) -> String {
    let raw = args.join("-").to_lowercase();
    let mut slug = String::new();
    for ch in raw.chars() {
        let c = if ch.is_ascii_alphanumeric() { ch } else { '-' };
        if !(c == '-' && (slug.is_empty() || slug.ends_with('-'))) {
            slug.push(c);
        }
        if slug.len() >= 48 {
            break;
        }
    }
    // FNV-1a over the arguments, each terminated by a zero byte
    let h = args
        .iter()
        .flat_map(|a| a.bytes().chain([0]))
        .fold(0xcbf29ce484222325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x100000001b3)
        });
    format!("{}-{:08x}", slug.trim_end_matches('-'), h as u32)
}

pub type Manifest = BTreeMap<String, Vec<String>>;

pub fn read_manifest(dir: &Path) -> Result<Manifest, CliError> {
    let path = dir.join("manifest.json");
    if !path.exists() {
        return Ok(Manifest::new());
    }
    let text =
        fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes the report for `args` under `dir/reports/`, records the invocation in the
/// manifest and appends an audit line. Returns the report path.
pub fn update(
    dir: &Path,
    args: &[String],
    report: &str,
    status: Status,
) -> Result<PathBuf, CliError> {
    let io = |p: &Path, e: std::io::Error| CliError::Io(format!("{}: {e}", p.display()));
    let name = case_name(args);
    let reports = dir.join("reports");
    fs::create_dir_all(&reports).map_err(|e| io(&reports, e))?;
    let path = reports.join(format!("{name}.json"));
    let previous = fs::read_to_string(&path).ok();
    fs::write(&path, report).map_err(|e| io(&path, e))?;

    let mut manifest = read_manifest(dir)?;
    manifest.insert(name.clone(), args.to_vec());
    let mpath = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(&mpath, text).map_err(|e| io(&mpath, e))?;

    let change = match previous {
        None => "created",
        Some(p) if p == report => "unchanged",
        Some(_) => "changed",
    };
    let apath = dir.join("AUDIT.md");
    if !apath.exists() {
        fs::write(
            &apath,
            "# Golden report audit log\n\nOne line per `--update-golden` run.\n\n",
        )
        .map_err(|e| io(&apath, e))?;
    }
    let mut audit = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&apath)
        .map_err(|e| io(&apath, e))?;
    writeln!(
        audit,
        "- `{name}` {change} by {TOOL_VERSION}, status {}: `cm-glue {}`",
        serde_json::to_value(status)
            .expect("status serializes")
            .as_str()
            .unwrap_or("?"),
        args.join(" ")
    )
    .map_err(|e| io(&apath, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_names() {
        let a: Vec<String> = ["triangle", "--orders", "3,5,10", "--verify"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert!(case_name(&a).starts_with("triangle-orders-3-5-10-verify-"));
        let long: Vec<String> = vec![
            "stabilizer".into(),
            "--points".into(),
            "[\"x\"]".repeat(100),
        ];
        let n = case_name(&long);
        assert!(n.len() <= 57 && n.starts_with("stabilizer-points"));
        assert_eq!(n, case_name(&long));
        let p: Vec<String> = ["quintic", "--coeffs", "1,0,0,0,-1,0"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let q: Vec<String> = ["quintic", "--coeffs", "1,0,0,0,1,0"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_ne!(case_name(&p), case_name(&q));
    }

    #[test]
    fn shipped_values() {
        let g = GoldenValues::shipped();
        assert_eq!(g.short_roots("quintic-std", 2).unwrap().count, 762);
        assert_eq!(g.takeuchi([10, 5, 3]), Some(false));
        assert_eq!(g.discriminant("cyclotomic:5"), Some(125));
    }
}
