//! The two formula languages, their evaluators, and the compiler between
//! them: first-order group formulas evaluated over finite symmetric groups,
//! the many-sorted census language evaluated over the exhaustively
//! enumerated finite model, and the truth-preserving translation validated
//! by `check_translation`.

pub mod group_formula;
pub mod library;
pub mod mformula;
pub mod mlibrary;
pub mod model;
pub mod translate;

pub use group_formula::{
    eval_group, eval_group_tuple, free_vars, parse_group_formula, quantifier_depth, stats,
    Formula, GroupFormula, GroupTerm, LogicError, VarId,
};
pub use library::FormulaLibrary;
pub use mformula::{sort_check, MFormula, MSort, MVarId, MF};
pub use mlibrary::{m_formula_library, m_library_names, MLibraryEntry};
pub use model::{MEvaluator, MFinModel, ModelBounds, MValue};
pub use translate::{
    required_sort_arity,
    check_translation, check_translation_in, regression_pool, translate, translate_weighted,
    CompiledFormula, TranslationCheck,
};
