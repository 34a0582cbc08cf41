//! Two-sorted axiom language: parser, normal form, existential set-guard
//! classification and grounding to CNF.

mod ast;
mod ground;
mod normal;
mod parse;

pub use ast::{Atom, Formula, Pred, Sort, Term, Variable};
pub use ground::{eval, ground, ground_with, GroundConfig, GroundError};
pub use normal::{classify_esg, normalize, EsgVerdict};
pub use parse::{parse, ParseError, ParseErrorKind};

use crate::axioms::{AxiomId, AxiomSet};

/// Shipped source text of a catalog axiom.
pub fn catalog_source(axiom: AxiomId) -> &'static str {
    match axiom {
        AxiomId::LinE => include_str!("../../mslsp/lin_e.mslsp"),
        AxiomId::ReflS => include_str!("../../mslsp/refl_s.mslsp"),
        AxiomId::ComplS => include_str!("../../mslsp/compl_s.mslsp"),
        AxiomId::TransS => include_str!("../../mslsp/trans_s.mslsp"),
        AxiomId::Ext => include_str!("../../mslsp/ext.mslsp"),
        AxiomId::SDom => include_str!("../../mslsp/sdom.mslsp"),
        AxiomId::Gf1 => include_str!("../../mslsp/gf1.mslsp"),
        AxiomId::Gf2 => include_str!("../../mslsp/gf2.mslsp"),
        AxiomId::Ind => include_str!("../../mslsp/ind.mslsp"),
        AxiomId::StrictInd => include_str!("../../mslsp/strict_ind.mslsp"),
        AxiomId::SuaV => include_str!("../../mslsp/sua_v.mslsp"),
        AxiomId::SuaP => include_str!("../../mslsp/sua_p.mslsp"),
        AxiomId::STopMon => include_str!("../../mslsp/s_top_mon.mslsp"),
        AxiomId::SBotMon => include_str!("../../mslsp/s_bot_mon.mslsp"),
        AxiomId::TopInd => include_str!("../../mslsp/top_ind.mslsp"),
        AxiomId::BotInd => include_str!("../../mslsp/bot_ind.mslsp"),
        AxiomId::DisInd => include_str!("../../mslsp/dis_ind.mslsp"),
        AxiomId::IntInd => include_str!("../../mslsp/int_ind.mslsp"),
        AxiomId::EvenExt => include_str!("../../mslsp/even_ext.mslsp"),
        AxiomId::Mc => include_str!("../../mslsp/mc.mslsp"),
    }
}

/// File name of the shipped source, e.g. `sua_v.mslsp`.
pub fn catalog_file_name(axiom: AxiomId) -> String {
    format!("{}.mslsp", axiom.name().to_lowercase())
}

/// Preference-basedness, shipped as a sample outside the catalog.
pub const PB_SOURCE: &str = include_str!("../../mslsp/pb.mslsp");

/// A sentence with unguarded element existentials.
pub const THREE_DISTINCT_SOURCE: &str = include_str!("../../mslsp/three_distinct.mslsp");

pub fn catalog_formula(axiom: AxiomId) -> Formula {
    parse(catalog_source(axiom)).expect("shipped sources parse")
}

/// Catalog axioms whose shipped source passes [`classify_esg`].
pub fn certified_axioms() -> AxiomSet {
    AxiomId::ALL
        .into_iter()
        .filter(|&a| classify_esg(&catalog_formula(a)).is_esg())
        .collect()
}
