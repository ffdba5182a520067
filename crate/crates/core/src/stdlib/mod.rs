//! Embedded prelude: level-polymorphic witnesses, arithmetic libraries,
//! representation changes and the example corpus.

pub mod builtins;
pub mod literals;
pub mod template;

use thiserror::Error;

use crate::cli::module::{parse_module, Decl};
use crate::kernel::syntax::SyntaxError;
use crate::kernel::GlobalEnv;
use crate::registry::{RegistryError, Session};

#[derive(Debug, Error)]
pub enum StdlibError {
    #[error("prelude entry `{0}` is ill-typed: {1}")]
    PreludeIllTyped(String, RegistryError),
    #[error("prelude file {0} does not parse: {1}")]
    PreludeSyntax(&'static str, SyntaxError),
}

/// Prelude files in load order, with the level range each is instantiated at.
/// Files before this index hold the relation machinery itself; built-in
/// self-relations are installed after them and later definitions get
/// derived self-relations.
pub const MACHINERY: usize = 8;

/// Machinery definitions that also get derived self-relations, so that
/// proofs using them can be translated.
const PATH_OPS: &[&str] = &["pr1", "pr2", "ap", "path_transport", "sym", "concat"];

pub const FILES: &[(&str, &str, u32)] = &[
    ("paths", include_str!("prelude/paths.upt"), 4),
    ("equiv", include_str!("prelude/equiv.upt"), 3),
    ("universe", include_str!("prelude/universe.upt"), 2),
    ("pi", include_str!("prelude/pi.upt"), 3),
    ("eq", include_str!("prelude/eq.upt"), 3),
    ("types", include_str!("prelude/types.upt"), 0),
    ("ctor_rel", include_str!("prelude/ctor_rel.upt"), 0),
    ("elim_rel", include_str!("prelude/elim_rel.upt"), 1),
    ("arith", include_str!("prelude/arith.upt"), 0),
    ("nat_n", include_str!("prelude/nat_n.upt"), 0),
    ("int16", include_str!("prelude/int16.upt"), 0),
    ("caneq", include_str!("prelude/caneq.upt"), 0),
    ("corpus", include_str!("prelude/corpus.upt"), 0),
];

/// Relations, transports and goals replayed over the prelude.
pub const REPLAY: &str = include_str!("replay.upt");

pub fn replay_decls() -> Result<Vec<Decl>, StdlibError> {
    parse_module(REPLAY).map_err(|e| StdlibError::PreludeSyntax("replay", e))
}

/// The example corpus definitions.
pub fn corpus_decls() -> Result<Vec<Decl>, StdlibError> {
    let (name, src, max) = FILES.iter().find(|f| f.0 == "corpus").expect("corpus file is listed");
    file_decls(name, src, *max)
}

/// Declarations of one prelude file, instantiated at every level choice.
pub fn file_decls(name: &'static str, src: &str, max_level: u32) -> Result<Vec<Decl>, StdlibError> {
    let choices: Vec<Vec<u32>> = match template::arity(src) {
        0 => vec![vec![]],
        1 => (0..=max_level).map(|i| vec![i]).collect(),
        _ => (0..=max_level).flat_map(|i| (0..=max_level).map(move |j| vec![i, j])).collect(),
    };
    let mut out = Vec::new();
    for lv in choices {
        let text = template::instantiate(src, &lv);
        out.extend(parse_module(&text).map_err(|e| StdlibError::PreludeSyntax(name, e))?);
    }
    Ok(out)
}

/// Prelude declarations in load order.
pub fn prelude_decls() -> Result<Vec<Decl>, StdlibError> {
    let mut out = Vec::new();
    for (name, src, max) in FILES {
        out.extend(file_decls(name, src, *max)?);
    }
    Ok(out)
}

pub fn load_session() -> Result<Session, StdlibError> {
    let mut s = Session::new(GlobalEnv::new());
    for (idx, (name, src, max)) in FILES.iter().enumerate() {
        if idx == MACHINERY {
            builtins::install_builtin_relations(&mut s)
                .map_err(|e| StdlibError::PreludeIllTyped("built-in self-relations".into(), e))?;
            let paths: Vec<String> = s
                .env
                .iter()
                .map(|e| e.name.to_string())
                .filter(|n| PATH_OPS.iter().any(|p| n.split('@').next() == Some(p)))
                .collect();
            for n in paths {
                s.derive_self_relations(&n).map_err(|e| StdlibError::PreludeIllTyped(n.clone(), e))?;
            }
            s.derive_relations = true;
        }
        for d in file_decls(name, src, *max)? {
            let name = d.name().unwrap_or("").to_string();
            s.add_constant(&d).map_err(|e| StdlibError::PreludeIllTyped(name, e))?;
        }
    }
    s.derive_relations = false;
    Ok(s)
}

pub fn load_prelude() -> Result<GlobalEnv, StdlibError> {
    Ok(load_session()?.env)
}
