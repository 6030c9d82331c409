//! The shipped fixture store.
//!
//! Fixture documents live in `crates/core/fixtures/` next to a
//! `manifest.json` listing labels, aliases and SHA-256 digests. They are
//! embedded at compile time; a directory named by `GALREP_FIXTURES`
//! replaces the embedded set. Every document is checked against its digest
//! before it is parsed.
//!
//! The documents themselves are produced by [`generate`] (run
//! `cargo run -p galrep-core --example gen_fixtures`):
//!
//! * `11a`: `y² + y = x³ − x² − 10x − 20`, point counts.
//! * `27a`: `y² + y = x³ − 7`, point counts (CM by `Q(√−3)`).
//! * `23a` (alias `fixture-sqrt5`): the level-23 newform over `Q(√5)` from
//!   theta series.
//! * `synthetic-td29`: the `23a` table relabelled at level `23·29²` with a
//!   declared tamely dihedral type of order 5 at 29. It is synthetic test
//!   data, not an actual newform.
//! * `synthetic-nonexc`: pseudo-random eigenvalues over the degree-15
//!   compositum of `Q(ζ_7)^+` and `Q(ζ_11)^+`, at level `97²·241²` with
//!   tamely dihedral types of orders 7 and 11. Also synthetic.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::character::DirichletCharacter;
use super::eigenform::{Eigenform, EigenformError, LocalKind, LocalType};
use super::elliptic::{CurveError, EllipticCurveModel};
use super::theta::level23_newform;
use crate::algebra::{compositum, real_cyclotomic_minpoly, NumberField, QPoly};
use crate::primes::primes_up_to;

/// Environment variable naming a replacement fixture directory.
pub const FIXTURE_DIR_ENV: &str = "GALREP_FIXTURES";
/// Coefficient bound of the shipped fixtures.
pub const FIXTURE_BOUND: u64 = 10_000;

const MANIFEST: &str = include_str!("../../fixtures/manifest.json");
const EMBEDDED: &[(&str, &str)] = &[
    ("11a2.json", include_str!("../../fixtures/11a2.json")),
    ("27a.json", include_str!("../../fixtures/27a.json")),
    ("23a.json", include_str!("../../fixtures/23a.json")),
    (
        "synthetic-td29.json",
        include_str!("../../fixtures/synthetic-td29.json"),
    ),
    (
        "synthetic-nonexc.json",
        include_str!("../../fixtures/synthetic-nonexc.json"),
    ),
];

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?}")]
    Unknown(String),
    #[error("fixture {file}: content hash {actual} does not match manifest {expected}")]
    HashMismatch {
        file: String,
        expected: String,
        actual: String,
    },
    #[error("fixture manifest: {0}")]
    Manifest(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("fixture {label}: {source}")]
    Eigenform {
        label: String,
        source: EigenformError,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub label: String,
    pub file: String,
    pub sha256: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub fixtures: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        serde_json::from_str(text).map_err(|e| FixtureError::Manifest(e.to_string()))
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Hash-verified fixture documents keyed by file name.
#[derive(Clone, Debug)]
pub struct FixtureStore {
    pub manifest: Manifest,
    pub source: String,
    texts: HashMap<String, String>,
}

impl FixtureStore {
    fn build(
        manifest: Manifest,
        source: String,
        texts: HashMap<String, String>,
    ) -> Result<Self, FixtureError> {
        for e in &manifest.fixtures {
            let text = texts
                .get(&e.file)
                .ok_or_else(|| FixtureError::Manifest(format!("missing file {}", e.file)))?;
            let actual = sha256_hex(text);
            if actual != e.sha256 {
                return Err(FixtureError::HashMismatch {
                    file: e.file.clone(),
                    expected: e.sha256.clone(),
                    actual,
                });
            }
        }
        Ok(FixtureStore {
            manifest,
            source,
            texts,
        })
    }

    /// The fixtures compiled into the binary.
    pub fn embedded() -> Result<Self, FixtureError> {
        let texts = EMBEDDED
            .iter()
            .map(|&(f, t)| (f.to_string(), t.to_string()))
            .collect();
        Self::build(Manifest::parse(MANIFEST)?, "embedded".into(), texts)
    }

    /// Fixtures read from `dir/manifest.json` and the files it lists.
    pub fn from_dir(dir: &Path) -> Result<Self, FixtureError> {
        let read = |path: PathBuf| {
            std::fs::read_to_string(&path).map_err(|source| FixtureError::Io { path, source })
        };
        let manifest = Manifest::parse(&read(dir.join("manifest.json"))?)?;
        let mut texts = HashMap::new();
        for e in &manifest.fixtures {
            texts.insert(e.file.clone(), read(dir.join(&e.file))?);
        }
        Self::build(manifest, dir.display().to_string(), texts)
    }

    /// `dir` if given, else `$GALREP_FIXTURES`, else the embedded set.
    pub fn open(dir: Option<&Path>) -> Result<Self, FixtureError> {
        match dir {
            Some(d) => Self::from_dir(d),
            None => match std::env::var_os(FIXTURE_DIR_ENV) {
                Some(d) if !d.is_empty() => Self::from_dir(Path::new(&d)),
                _ => Self::embedded(),
            },
        }
    }

    /// Entry whose label, alias or file stem is `name`.
    pub fn resolve(&self, name: &str) -> Option<&ManifestEntry> {
        self.manifest.fixtures.iter().find(|e| {
            e.label == name
                || e.aliases.iter().any(|a| a == name)
                || e.file.strip_suffix(".json") == Some(name)
        })
    }

    pub fn labels(&self) -> Vec<&str> {
        self.manifest
            .fixtures
            .iter()
            .map(|e| e.label.as_str())
            .collect()
    }

    pub fn text(&self, name: &str) -> Result<&str, FixtureError> {
        let e = self
            .resolve(name)
            .ok_or_else(|| FixtureError::Unknown(name.to_string()))?;
        Ok(self.texts[&e.file].as_str())
    }

    pub fn load(&self, name: &str) -> Result<Eigenform, FixtureError> {
        Eigenform::parse(self.text(name)?).map_err(|source| FixtureError::Eigenform {
            label: name.to_string(),
            source,
        })
    }
}

/// Load an embedded fixture by label or alias; parsed forms are memoized.
pub fn load(name: &str) -> Result<Eigenform, FixtureError> {
    static CACHE: OnceLock<Mutex<HashMap<String, Eigenform>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("cache lock").get(name) {
        return Ok(f.clone());
    }
    let f = FixtureStore::embedded()?.load(name)?;
    cache
        .lock()
        .expect("cache lock")
        .insert(name.to_string(), f.clone());
    Ok(f)
}

/// Eigenform of a weight-2 rational newform from point counts on a minimal
/// model, including traces at the bad primes.
pub fn curve_eigenform(
    model: &EllipticCurveModel,
    level: u64,
    local_types: BTreeMap<u64, LocalType>,
    bound: u64,
) -> Result<Eigenform, EigenformError> {
    let field = NumberField::rationals();
    let ap = model
        .ap_table(bound)
        .into_iter()
        .map(|(p, a)| (p, field.from_int(a)))
        .collect();
    Eigenform::new(
        model.label.clone(),
        level,
        2,
        DirichletCharacter::trivial(1),
        field,
        ap,
        local_types,
        bound,
    )
}

fn local(q: u64, kind: LocalKind) -> (u64, LocalType) {
    (q, LocalType { prime: q, kind })
}

/// The `synthetic-td29` document built from a level-23 form.
pub fn synthetic_td29(base: &Eigenform) -> Result<Eigenform, EigenformError> {
    let mut ap = base.ap.clone();
    ap.remove(&29);
    Eigenform::new(
        "synthetic-td29",
        23 * 29 * 29,
        2,
        DirichletCharacter::trivial(1),
        base.field.clone(),
        ap,
        BTreeMap::from([
            local(23, LocalKind::Multiplicative),
            local(29, LocalKind::TamelyDihedral { order: 5 }),
        ]),
        base.bound,
    )
}

/// Coefficient bound of the `synthetic-nonexc` table.
pub const NONEXC_BOUND: u64 = 1000;

/// A synthetic table over the compositum of `Q(ζ_7)^+` and `Q(ζ_11)^+` at
/// level `97²·241²`, tamely dihedral of order 7 at 97 and of order 11 at 241.
/// The eigenvalues are pseudo-random field elements drawn from a fixed seed;
/// only their field-theoretic shape matters.
pub fn synthetic_nonexc(bound: u64) -> Result<Eigenform, EigenformError> {
    use rand::{Rng, SeedableRng};
    let poly = compositum(&real_cyclotomic_minpoly(7)?, &real_cyclotomic_minpoly(11)?)?;
    let field = NumberField::new(poly)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9724_1711);
    let mut ap = BTreeMap::new();
    for p in primes_up_to(bound) {
        let c: Vec<i64> = (0..field.degree())
            .map(|_| rng.random_range(-2..=2))
            .collect();
        if p != 97 && p != 241 {
            ap.insert(p, field.from_qpoly(&QPoly::from_i64(&c)));
        }
    }
    Eigenform::new(
        "synthetic-nonexc",
        97 * 97 * 241 * 241,
        2,
        DirichletCharacter::trivial(1),
        field,
        ap,
        BTreeMap::from([
            local(97, LocalKind::TamelyDihedral { order: 7 }),
            local(241, LocalKind::TamelyDihedral { order: 11 }),
        ]),
        bound,
    )
}

/// A generated fixture: manifest metadata plus the form.
pub struct Generated {
    pub file: &'static str,
    pub aliases: &'static [&'static str],
    pub description: &'static str,
    pub form: Eigenform,
}

/// Regenerate every shipped fixture at coefficient bound `bound`.
pub fn generate(bound: u64) -> Result<Vec<Generated>, FixtureError> {
    let wrap = |label: &str| {
        let label = label.to_string();
        move |source| FixtureError::Eigenform { label, source }
    };
    let e11 = EllipticCurveModel::new([0, -1, 1, -10, -20], "11a")?;
    let f11 = curve_eigenform(
        &e11,
        11,
        BTreeMap::from([local(11, LocalKind::Multiplicative)]),
        bound,
    )
    .map_err(wrap("11a"))?;
    let e27 = EllipticCurveModel::new([0, 0, 1, 0, -7], "27a")?;
    let f27 = curve_eigenform(
        &e27,
        27,
        BTreeMap::from([local(3, LocalKind::Unknown)]),
        bound,
    )
    .map_err(wrap("27a"))?;
    let f23 = level23_newform(bound).map_err(wrap("23a"))?;
    let td = synthetic_td29(&f23).map_err(wrap("synthetic-td29"))?;
    let nonexc = synthetic_nonexc(bound.min(NONEXC_BOUND)).map_err(wrap("synthetic-nonexc"))?;
    Ok(vec![
        Generated {
            file: "11a2.json",
            aliases: &["11a2", "11.a2"],
            description: "y^2 + y = x^3 - x^2 - 10x - 20, traces by point counting",
            form: f11,
        },
        Generated {
            file: "27a.json",
            aliases: &["27a1", "27.a"],
            description: "y^2 + y = x^3 - 7 (CM by Q(sqrt -3)), traces by point counting",
            form: f27,
        },
        Generated {
            file: "23a.json",
            aliases: &["fixture-sqrt5", "23.a"],
            description: "level 23 weight 2 newform over Q(sqrt 5), from theta series of x^2+xy+6y^2 and 2x^2+xy+3y^2",
            form: f23,
        },
        Generated {
            file: "synthetic-td29.json",
            aliases: &[],
            description: "synthetic: the 23a table at level 23*29^2 with a declared tamely dihedral type of order 5 at 29",
            form: td,
        },
        Generated {
            file: "synthetic-nonexc.json",
            aliases: &[],
            description: "synthetic: seeded pseudo-random eigenvalues over the compositum of Q(zeta_7)^+ and Q(zeta_11)^+ at level 97^2*241^2, tamely dihedral of orders 7 at 97 and 11 at 241",
            form: nonexc,
        },
    ])
}

/// Documents and manifest for [`generate`], as `(file name, contents)`.
pub fn render_all(generated: &[Generated]) -> Vec<(String, String)> {
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for g in generated {
        let text = g.form.serialize();
        entries.push(ManifestEntry {
            label: g.form.label.clone(),
            file: g.file.to_string(),
            sha256: sha256_hex(&text),
            aliases: g.aliases.iter().map(|s| s.to_string()).collect(),
            description: g.description.to_string(),
        });
        files.push((g.file.to_string(), text));
    }
    files.push((
        "manifest.json".to_string(),
        Manifest { fixtures: entries }.render(),
    ));
    files
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_store_verifies() {
        let store = FixtureStore::embedded().unwrap();
        assert_eq!(
            store.labels(),
            vec!["11a", "27a", "23a", "synthetic-td29", "synthetic-nonexc"]
        );
        assert_eq!(store.resolve("fixture-sqrt5").unwrap().label, "23a");
        assert_eq!(store.resolve("11a2").unwrap().label, "11a");
        assert!(matches!(
            store.load("missing"),
            Err(FixtureError::Unknown(_))
        ));
    }

    #[test]
    fn tampering_is_detected() {
        let mut texts: HashMap<String, String> = EMBEDDED
            .iter()
            .map(|&(f, t)| (f.to_string(), t.to_string()))
            .collect();
        texts.get_mut("11a2.json").unwrap().push(' ');
        let err = FixtureStore::build(Manifest::parse(MANIFEST).unwrap(), "t".into(), texts);
        assert!(matches!(err, Err(FixtureError::HashMismatch { .. })));
    }

    #[test]
    fn shipped_files_match_generators() {
        let generated = generate(FIXTURE_BOUND).unwrap();
        let rendered = render_all(&generated);
        let mut shipped: HashMap<&str, &str> = EMBEDDED.iter().copied().collect();
        shipped.insert("manifest.json", MANIFEST);
        for (file, text) in &rendered {
            assert!(shipped[file.as_str()] == text.as_str(), "{file} is stale");
        }
    }

    #[test]
    fn fixtures_round_trip_bit_exact() {
        for &(_, text) in EMBEDDED {
            let f = Eigenform::parse(text).unwrap();
            assert_eq!(f.serialize(), text);
            assert_eq!(Eigenform::parse(&f.serialize()).unwrap(), f);
        }
    }
}
