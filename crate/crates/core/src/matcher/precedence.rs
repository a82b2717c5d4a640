//! Which pattern wins when several rules fire on the same node, and which
//! patterns take over the nodes inside them.

use crate::catalog::Cip;

/// Patterns that, when they match the same node, suppress `c`.
pub(crate) fn outranked_by(c: Cip) -> &'static [Cip] {
    use Cip::*;
    match c {
        BinaryComparison => &[
            BinaryFlagCheck,
            CastSelfComparison,
            SelfComparison,
            DeltaCheck,
            NullCheck,
        ],
        NullCheck => &[BinaryFlagCheck, CastSelfComparison, SelfComparison, DeltaCheck],
        DeltaCheck => &[BinaryFlagCheck, CastSelfComparison, SelfComparison],
        SelfComparison => &[BinaryFlagCheck, CastSelfComparison],
        CastSelfComparison => &[BinaryFlagCheck],
        NullZeroCheck => &[NullEmptyCheck],
        NullBooleanCheck => &[NullEmptyCheck, NullZeroCheck],
        EqualsOrChain => &[NullEmptyCheck, NullZeroCheck, NullBooleanCheck],
        ConstantArgument => &[EnumValueOf],
        SwitchCase => &[SwitchLenChar],
        _ => &[],
    }
}

/// Patterns whose matches claim nodes other than their own.
pub(crate) const CLAIMERS: [Cip; 11] = [
    Cip::BinaryFlagCheck,
    Cip::IfChain,
    Cip::EqualsOrChain,
    Cip::NullEmptyCheck,
    Cip::NullZeroCheck,
    Cip::NullBooleanCheck,
    Cip::SwitchLenChar,
    Cip::EnumValueOf,
    Cip::IterateAndCheckLiteral,
    Cip::IndexLoopFind,
    Cip::IfReturnChain,
];
