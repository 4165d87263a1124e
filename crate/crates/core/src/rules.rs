//! Fixed table of the results that certificates and derivation traces cite.
//!
//! Each rule has a stable textual id (used in serialized certificates) and an
//! anchor: the mathematical statement it stands for. Certificate checking
//! compares anchors against this table, so the table is the single source
//! for both.

use core::fmt;
use core::str::FromStr;

macro_rules! rule_table {
    ($( $variant:ident => $id:literal, $anchor:literal; )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleId {
            $( $variant, )*
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$( RuleId::$variant, )*];

            pub fn id(self) -> &'static str {
                match self {
                    $( RuleId::$variant => $id, )*
                }
            }

            pub fn anchor(self) -> &'static str {
                match self {
                    $( RuleId::$variant => $anchor, )*
                }
            }
        }
    };
}

rule_table! {
    // decisions on products of finitely generated groups
    ProductCriterion => "product_criterion",
        "prod M (M nonzero f.g.) is self-small iff T_S = 0, or S_(p) is finite for all p and S/T_S is finitely generated";
    TorsionFreeFamily => "torsion_free_family",
        "all members are free, so T_S = 0 and prod M = Z^kappa";
    FreePowerSelfSmall => "free_power_self_small",
        "Z^kappa is self-small for every cardinal kappa";
    FiniteFreeQuotient => "finite_free_quotient",
        "S/T_S is free of finite rank: finitely many members are infinite";
    FinitePrimarySums => "finite_primary_sums",
        "S_(p) is finite for every prime p: each p occurs in finitely many members";
    ProductNormalForm => "product_normal_form",
        "prod M = F (+) prod_p M_p with F f.g. free and every M_p a finite p-group";
    FinitePGroupProduct => "finite_p_group_product",
        "prod_p A_p is self-small whenever every A_p is a finite p-group";
    InfiniteFreePart => "infinite_free_part",
        "Z^kappa is R-small for a nonzero torsion group R only if kappa is finite, so S/T_S must be finitely generated";
    InfinitePrimarySupport => "infinite_primary_support",
        "(Z/p)^kappa is P-small for a nonzero p-group P iff kappa is finite, so S_(p) must be finite";
    // finite sums and powers
    FiniteSumPairs => "finite_sum_pairs",
        "a finite direct sum of N_1..N_k is self-small iff N_i is N_j-small for all i, j";
    FgSmall => "fg_small",
        "every finitely generated abelian group is small";
    CatalogueFact => "catalogue_fact",
        "value read from the saturated fact base";
    NoFact => "no_fact",
        "neither value is derivable from the fact base";
    SumPower => "sum_power",
        "A^(kappa) is self-small iff A is self-small and kappa is finite";
    ProductPower => "product_power",
        "A^I is self-small iff A^I is A-small";
    // closure rules of the inference engine
    BaseFact => "base_fact",
        "declared in the fact base";
    FgHom => "fg_hom",
        "Hom between finitely generated groups computed from invariant factors";
    HomZeroSmall => "hom_zero_small",
        "Hom(A, B) = 0 implies A is B-small";
    QuotientSmall => "quotient_small",
        "if A is B-small and C <= A then A/C is B-small";
    EmbeddedTarget => "embedded_target",
        "if A is B-small and C embeds in B^I then A is C-small";
    ExtensionSource => "extension_source",
        "for B <= C: if B and C/B are A-small then C is A-small";
    ExtensionTarget => "extension_target",
        "for B <= C: if A is B-small and C/B-small then A is C-small";
    FiniteSumSource => "finite_sum_source",
        "a finite sum of A-small groups is A-small";
    FiniteSumTarget => "finite_sum_target",
        "A is (+)N-small for a finite family N iff A is N-small for each N";
    PowerTarget => "power_target",
        "A is B-small iff A is B^(kappa)-small for nonzero kappa";
    ProductSumCriterion => "product_sum_criterion",
        "prod M is self-small iff prod M is (+)M-small";
    SelfSmallImage => "self_small_image",
        "for self-small A and f in Hom(A, A^I), f(A) is self-small";
    DivisibleFg => "divisible_fg",
        "Hom(D, B) = 0 for D divisible and B finitely generated";
    RationalRank => "rational_rank",
        "A is Q-small iff A has finite torsion-free rank";
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule id `{0}`")]
pub struct UnknownRule(pub alloc::string::String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL.iter().copied().find(|r| r.id() == s).ok_or_else(|| UnknownRule(s.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_parse_back() {
        for (i, a) in RuleId::ALL.iter().enumerate() {
            for b in &RuleId::ALL[i + 1..] {
                assert_ne!(a.id(), b.id());
            }
            assert_eq!(a.id().parse::<RuleId>().unwrap(), *a);
            assert!(!a.anchor().is_empty());
        }
        assert!("no_such_rule".parse::<RuleId>().is_err());
    }
}
