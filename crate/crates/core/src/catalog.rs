//! Built-in catalog of the 30 constraint implementation patterns.

use std::fmt;
use std::sync::OnceLock;

use serde::ser::{Serialize, SerializeStruct, Serializer};

/// Stable identifier of a catalog pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cip {
    BooleanProperty,
    BinaryComparison,
    ConstantArgument,
    NullCheck,
    AssignConstant,
    BinaryFlagCheck,
    IfChain,
    EqualsOrChain,
    PropertiesFile,
    PolymorphicMethod,
    NullEmptyCheck,
    NullZeroCheck,
    ReturnConstant,
    SwitchLenChar,
    SelfComparison,
    StrStarts,
    NullBooleanCheck,
    Setter,
    ConstructorAssign,
    DeltaCheck,
    EnumValueOf,
    IterateAndCheckLiteral,
    ModOp,
    StrEnds,
    SwitchCase,
    OverrideValueSet,
    CastSelfComparison,
    IndexLoopFind,
    AssignClassCall,
    IfReturnChain,
}

impl Cip {
    pub const ALL: [Cip; 30] = [
        Cip::BooleanProperty,
        Cip::BinaryComparison,
        Cip::ConstantArgument,
        Cip::NullCheck,
        Cip::AssignConstant,
        Cip::BinaryFlagCheck,
        Cip::IfChain,
        Cip::EqualsOrChain,
        Cip::PropertiesFile,
        Cip::PolymorphicMethod,
        Cip::NullEmptyCheck,
        Cip::NullZeroCheck,
        Cip::ReturnConstant,
        Cip::SwitchLenChar,
        Cip::SelfComparison,
        Cip::StrStarts,
        Cip::NullBooleanCheck,
        Cip::Setter,
        Cip::ConstructorAssign,
        Cip::DeltaCheck,
        Cip::EnumValueOf,
        Cip::IterateAndCheckLiteral,
        Cip::ModOp,
        Cip::StrEnds,
        Cip::SwitchCase,
        Cip::OverrideValueSet,
        Cip::CastSelfComparison,
        Cip::IndexLoopFind,
        Cip::AssignClassCall,
        Cip::IfReturnChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Cip::BooleanProperty => "boolean property",
            Cip::BinaryComparison => "binary comparison",
            Cip::ConstantArgument => "constant argument",
            Cip::NullCheck => "null check",
            Cip::AssignConstant => "assign constant",
            Cip::BinaryFlagCheck => "binary flag check",
            Cip::IfChain => "if chain",
            Cip::EqualsOrChain => "equals or chain",
            Cip::PropertiesFile => "properties file",
            Cip::PolymorphicMethod => "polymorphic method",
            Cip::NullEmptyCheck => "null-empty check",
            Cip::NullZeroCheck => "null-zero check",
            Cip::ReturnConstant => "return constant",
            Cip::SwitchLenChar => "switch-len char",
            Cip::SelfComparison => "self comparison",
            Cip::StrStarts => "str starts",
            Cip::NullBooleanCheck => "null-boolean check",
            Cip::Setter => "setter",
            Cip::ConstructorAssign => "constructor assign",
            Cip::DeltaCheck => "delta check",
            Cip::EnumValueOf => "enum valueOf",
            Cip::IterateAndCheckLiteral => "iterate-and-check literal",
            Cip::ModOp => "mod op",
            Cip::StrEnds => "str ends",
            Cip::SwitchCase => "switch case",
            Cip::OverrideValueSet => "override value set",
            Cip::CastSelfComparison => "cast self-comparison",
            Cip::IndexLoopFind => "index loop find",
            Cip::AssignClassCall => "assign class call",
            Cip::IfReturnChain => "if-return chain",
        }
    }

    /// Look up by name; case and separators (`-`, `_`, space) are ignored.
    pub fn from_name(name: &str) -> Option<Cip> {
        let norm = |s: &str| -> String {
            s.chars()
                .filter(|c| !matches!(c, ' ' | '-' | '_'))
                .flat_map(char::to_lowercase)
                .collect()
        };
        let wanted = norm(name);
        Cip::ALL.iter().copied().find(|c| norm(c.name()) == wanted)
    }

    pub fn pattern(self) -> &'static CipPattern {
        &builtin_catalog()[self as usize]
    }
}

impl fmt::Display for Cip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementType {
    BooleanExpression,
    RelationalExpression,
    ArithmeticExpression,
    MethodCall,
    Assignment,
    ReturnStatement,
    IfStatement,
    SwitchStatement,
    LoopStatement,
    MethodDefinition,
    FileLine,
    Compound(Vec<StatementType>),
}

impl fmt::Display for StatementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StatementType::BooleanExpression => "boolean-expression",
            StatementType::RelationalExpression => "relational-expression",
            StatementType::ArithmeticExpression => "arithmetic-expression",
            StatementType::MethodCall => "method-call",
            StatementType::Assignment => "assignment",
            StatementType::ReturnStatement => "return-statement",
            StatementType::IfStatement => "if-statement",
            StatementType::SwitchStatement => "switch-statement",
            StatementType::LoopStatement => "loop-statement",
            StatementType::MethodDefinition => "method-definition",
            StatementType::FileLine => "file-line",
            StatementType::Compound(parts) => {
                let inner: Vec<String> = parts.iter().map(ToString::to_string).collect();
                return write!(f, "compound({})", inner.join(", "));
            }
        };
        f.write_str(s)
    }
}

/// Relational operators a comparison part may take.
pub const RELATIONAL_OPS: [&str; 6] = [">", "≥", "<", "≤", "=", "≠"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartRole {
    Variable,
    Constant,
    Method,
    Field,
    Collection,
    OperatorInSet(&'static [&'static str]),
}

impl PartRole {
    pub fn is_operator(self) -> bool {
        matches!(self, PartRole::OperatorInSet(_))
    }
}

impl fmt::Display for PartRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartRole::Variable => f.write_str("variable"),
            PartRole::Constant => f.write_str("constant"),
            PartRole::Method => f.write_str("method"),
            PartRole::Field => f.write_str("field"),
            PartRole::Collection => f.write_str("collection"),
            PartRole::OperatorInSet(ops) => write!(f, "operator-in-set{{{}}}", ops.join(",")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FrequencyClass {
    VeryFrequent,
    Frequent,
    Rare,
}

impl FrequencyClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FrequencyClass::VeryFrequent => "very-frequent",
            FrequencyClass::Frequent => "frequent",
            FrequencyClass::Rare => "rare",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CipPattern {
    pub id: Cip,
    pub name: &'static str,
    pub description: &'static str,
    pub statement_type: StatementType,
    pub parts: Vec<PartRole>,
    /// Number of detector inputs; 0 when the pattern has no detector.
    pub detector_arity: usize,
    pub frequency_class: FrequencyClass,
}

impl CipPattern {
    pub fn has_detector(&self) -> bool {
        self.detector_arity > 0
    }

    /// Parts that name data (operators excluded).
    pub fn data_part_count(&self) -> usize {
        self.parts.iter().filter(|p| !p.is_operator()).count()
    }
}

impl Serialize for CipPattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CipPattern", 6)?;
        st.serialize_field("name", self.name)?;
        st.serialize_field("description", self.description)?;
        st.serialize_field("statement_type", &self.statement_type.to_string())?;
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        st.serialize_field("parts", &parts)?;
        st.serialize_field("detector_arity", &self.detector_arity)?;
        st.serialize_field("frequency_class", self.frequency_class.as_str())?;
        st.end()
    }
}

fn entry(
    id: Cip,
    description: &'static str,
    statement_type: StatementType,
    parts: Vec<PartRole>,
    detector: bool,
    frequency_class: FrequencyClass,
) -> CipPattern {
    let detector_arity = if detector { parts.len() } else { 0 };
    CipPattern {
        id,
        name: id.name(),
        description,
        statement_type,
        parts,
        detector_arity,
        frequency_class,
    }
}

/// The 30 catalog patterns in catalog order. Immutable and shared.
pub fn builtin_catalog() -> &'static [CipPattern] {
    static CATALOG: OnceLock<Vec<CipPattern>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

fn build() -> Vec<CipPattern> {
    use FrequencyClass::{Frequent, Rare, VeryFrequent};
    use PartRole::{Collection, Constant, Field, Method, OperatorInSet, Variable};
    use StatementType as St;
    vec![
        entry(Cip::BooleanProperty,
            "A boolean-typed variable, field or boolean getter is tested as a condition, possibly negated.",
            St::BooleanExpression, vec![Variable], true, VeryFrequent),
        entry(Cip::BinaryComparison,
            "Two operands are compared with a relational or equality operator; an equals call counts as equality.",
            St::RelationalExpression, vec![Variable, OperatorInSet(&RELATIONAL_OPS), Variable], true, VeryFrequent),
        entry(Cip::ConstantArgument,
            "A literal is passed as an argument to a method or constructor call.",
            St::MethodCall, vec![Method, Constant], true, Frequent),
        entry(Cip::NullCheck,
            "A reference is compared against null with == or !=; the null keyword is not a part.",
            St::RelationalExpression, vec![Variable], true, Frequent),
        entry(Cip::AssignConstant,
            "A literal is assigned to a variable or field.",
            St::Assignment, vec![Variable, Constant], true, Frequent),
        entry(Cip::BinaryFlagCheck,
            "An integer bit field is masked with a bitwise operator and compared against a constant.",
            St::RelationalExpression, vec![Variable, Constant], true, Frequent),
        entry(Cip::IfChain,
            "An if / else-if chain tests one variable for equality against successive values.",
            St::IfStatement, vec![Variable], true, Frequent),
        entry(Cip::EqualsOrChain,
            "Equality tests of one variable against several values joined by logical or.",
            St::BooleanExpression, vec![Variable], true, Frequent),
        entry(Cip::PropertiesFile,
            "The value is stored as a key=value line in a properties file.",
            St::FileLine, vec![Constant], false, Frequent),
        entry(Cip::PolymorphicMethod,
            "Branching happens through a call to a method declared abstract and overridden in subclasses.",
            St::MethodCall, vec![Method], false, Frequent),
        entry(Cip::NullEmptyCheck,
            "A string is tested against null and also compared to the empty string in one expression.",
            St::BooleanExpression, vec![Variable], true, Frequent),
        entry(Cip::NullZeroCheck,
            "A value is tested against null and its length or size is compared to zero in one expression.",
            St::BooleanExpression, vec![Variable], true, Frequent),
        entry(Cip::ReturnConstant,
            "A return statement yields a literal.",
            St::ReturnStatement, vec![Constant], true, Frequent),
        entry(Cip::SwitchLenChar,
            "A switch on a string's length whose cases inspect individual characters.",
            St::SwitchStatement, vec![Variable], true, Frequent),
        entry(Cip::SelfComparison,
            "An operand is compared with itself.",
            St::RelationalExpression, vec![Variable], true, Frequent),
        entry(Cip::StrStarts,
            "startsWith is invoked on a string.",
            St::MethodCall, vec![Variable], false, Rare),
        entry(Cip::NullBooleanCheck,
            "A reference is tested against null and one of its boolean properties is tested in one expression.",
            St::BooleanExpression, vec![Variable], false, Rare),
        entry(Cip::Setter,
            "A setter call stores a computed value.",
            St::MethodCall, vec![Method, Variable], false, Rare),
        entry(Cip::ConstructorAssign,
            "A constructor initializes a field from something other than its parameters.",
            St::Assignment, vec![Field], false, Rare),
        entry(Cip::DeltaCheck,
            "The difference of two operands is stored and compared against zero.",
            St::Compound(vec![St::ArithmeticExpression, St::BooleanExpression]),
            vec![Variable, Variable], false, Rare),
        entry(Cip::EnumValueOf,
            "An enum's valueOf converts a string, rejecting values that are not members.",
            St::MethodCall, vec![Variable], false, Rare),
        entry(Cip::IterateAndCheckLiteral,
            "A loop walks a collection of allowed values and compares the variable against each one.",
            St::LoopStatement, vec![Variable, Collection], false, Rare),
        entry(Cip::ModOp,
            "A remainder operation limits a value to the residues of a divisor.",
            St::ArithmeticExpression, vec![Variable], false, Rare),
        entry(Cip::StrEnds,
            "endsWith is invoked on a string.",
            St::MethodCall, vec![Variable], false, Rare),
        entry(Cip::SwitchCase,
            "A switch on an enum-typed value whose cases name enum members.",
            St::SwitchStatement, vec![Variable], false, Rare),
        entry(Cip::OverrideValueSet,
            "Each allowed value is the return value of an override of an abstract method.",
            St::MethodDefinition, vec![Method], false, Rare),
        entry(Cip::CastSelfComparison,
            "A numeric value is cast to another type and compared with the original.",
            St::Compound(vec![St::Assignment, St::BooleanExpression]),
            vec![Variable], false, Rare),
        entry(Cip::IndexLoopFind,
            "An indexed loop returns the position of the matching element, or -1 after the loop.",
            St::Compound(vec![St::LoopStatement, St::ReturnStatement]),
            vec![Collection, Variable], false, Rare),
        entry(Cip::AssignClassCall,
            "A value obtained by calling a method on a class literal is assigned.",
            St::Assignment, vec![Variable], false, Rare),
        entry(Cip::IfReturnChain,
            "Consecutive ifs without else test one variable and each returns.",
            St::IfStatement, vec![Variable], false, Rare),
    ]
}

/// Detector-backed patterns taking exactly `k` inputs.
pub fn patterns_with_arity(k: usize) -> Vec<&'static CipPattern> {
    builtin_catalog()
        .iter()
        .filter(|p| p.has_detector() && p.detector_arity == k)
        .collect()
}

pub fn pattern_by_name(name: &str) -> Option<&'static CipPattern> {
    Cip::from_name(name).map(Cip::pattern)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_thirty_unique_patterns() {
        let cat = builtin_catalog();
        assert_eq!(cat.len(), 30);
        let mut names: Vec<&str> = cat.iter().map(|p| p.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 30);
        for (i, p) in cat.iter().enumerate() {
            assert_eq!(p.id as usize, i);
        }
    }

    #[test]
    fn thirteen_detectors_with_arity_equal_to_parts() {
        let cat = builtin_catalog();
        assert_eq!(cat.iter().filter(|p| p.has_detector()).count(), 13);
        for p in cat.iter().filter(|p| p.has_detector()) {
            assert_eq!(p.detector_arity, p.parts.len());
            assert!((1..=3).contains(&p.detector_arity));
        }
        assert!(!Cip::PropertiesFile.pattern().has_detector());
        assert!(!Cip::PolymorphicMethod.pattern().has_detector());
    }

    #[test]
    fn arity_groups() {
        let names = |k| -> Vec<&str> { patterns_with_arity(k).iter().map(|p| p.name).collect() };
        assert_eq!(names(3), vec!["binary comparison"]);
        assert_eq!(
            names(2),
            vec!["constant argument", "assign constant", "binary flag check"]
        );
        assert_eq!(names(1).len(), 9);
    }

    #[test]
    fn binary_comparison_parts() {
        let p = Cip::BinaryComparison.pattern();
        assert_eq!(
            p.parts,
            vec![
                PartRole::Variable,
                PartRole::OperatorInSet(&RELATIONAL_OPS),
                PartRole::Variable
            ]
        );
        assert_eq!(Cip::NullCheck.pattern().parts, vec![PartRole::Variable]);
    }

    #[test]
    fn frequency_strata() {
        let count = |c| builtin_catalog().iter().filter(|p| p.frequency_class == c).count();
        assert_eq!(count(FrequencyClass::VeryFrequent), 2);
        assert_eq!(count(FrequencyClass::Frequent), 13);
        assert_eq!(count(FrequencyClass::Rare), 15);
    }

    #[test]
    fn compound_only_where_listed() {
        let compound: Vec<&str> = builtin_catalog()
            .iter()
            .filter(|p| matches!(p.statement_type, StatementType::Compound(_)))
            .map(|p| p.name)
            .collect();
        assert_eq!(
            compound,
            vec!["delta check", "cast self-comparison", "index loop find"]
        );
    }

    #[test]
    fn names_parse_loosely() {
        assert_eq!(Cip::from_name("Null-Check"), Some(Cip::NullCheck));
        assert_eq!(Cip::from_name("enum_valueof"), Some(Cip::EnumValueOf));
        assert_eq!(Cip::from_name("nope"), None);
    }
}
