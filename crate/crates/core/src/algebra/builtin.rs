use std::collections::BTreeMap;

use super::CornerTreeFormula;

/// Names accepted by [`builtin_formula`].
pub const BUILTIN_NAMES: [&str; 6] = ["123", "213", "1234", "2134", "2143", "S"];

fn terms(name: &str) -> Option<&'static [(&'static str, &'static str)]> {
    Some(match name {
        "123" => &[("R(NE(NE))", "1")],
        "213" => &[("R(NE(SW))", "1/2"), ("R(NE(NE))", "-1"), ("R(NE)", "-1/2")],
        "1234" => &[("R(NE(NE(NE)))", "1")],
        "2134" => &[("R(NE(NE(NE)))", "-1"), ("R(NE(NE))", "-1/2"), ("R(SW(SW,SW))", "1/2")],
        "2143" => &[
            ("R(SW(SE),SE)", "1"),
            ("R(SE(SW),SE)", "-1"),
            ("R(SE(NE),SE)", "1"),
            ("R(SW(SE(SE)))", "-2"),
            ("R(SW(SE(SW)))", "-2"),
            ("R(SW(SE))", "-1"),
            ("R(NE,NE,NE)", "1/3"),
            ("R(NE(NE,NE))", "-1"),
            ("R(NE,NE)", "-1/2"),
            ("R(NE)", "1/6"),
        ],
        // building block of the Bergsma-Dassios statistic
        "S" => &[
            ("R(SE,NE,NE)", "2"),
            ("R(NE(SE(NE)))", "2"),
            ("R(NE,SE(NE))", "-2"),
            ("R(SE,NE)", "-1"),
        ],
        _ => return None,
    })
}

/// A hard-coded formula by name, see [`BUILTIN_NAMES`].
pub fn builtin_formula(name: &str) -> Option<CornerTreeFormula> {
    terms(name).map(|t| CornerTreeFormula::from_notation(t).expect("built-in formulas are well formed"))
}

/// All hard-coded formulas by name.
pub fn builtin_formulas() -> BTreeMap<&'static str, CornerTreeFormula> {
    BUILTIN_NAMES
        .iter()
        .map(|&n| (n, builtin_formula(n).expect("listed name")))
        .collect()
}
