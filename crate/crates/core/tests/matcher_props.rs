mod common;

use std::collections::HashMap;

use cipscan_core::catalog::{builtin_catalog, Cip};
use cipscan_core::matcher::{match_all, match_instance, match_statement, sort_instances, structural_patterns};
use common::from_source;
use proptest::prelude::*;

const TEMPLATES: [&str; 28] = [
    "if (a > {n}) { b = a; }",
    "if (s == null) { return; }",
    "if (s == null || s.equals(\"\")) { return; }",
    "if (s != null && s.length() > {n}) { a = s.length(); }",
    "if (s != null && s.isEmpty()) { a = 1; }",
    "if (flag & MASK == MASK) { a = 2; }",
    "if ((flag & MASK) != 0) { a = 3; }",
    "if (d != d) { a = 4; }",
    "int id{k} = (int) d; if (id{k} == d) { a = id{k}; }",
    "int delta{k} = a - b; if (delta{k} == 0) { a = b; }",
    "a = {n};",
    "other.setLimit(a);",
    "other.setLimit({n});",
    "log(\"x\", a);",
    "if (ok) { a++; }",
    "if (!other.isReady()) { a--; }",
    "if (a == 1) { b = 1; } else if (a == 2) { b = 2; } else if (a == 3) { b = 3; }",
    "if (s.equals(\"x\") || s.equals(\"y\")) { b = 5; }",
    "switch (s.length()) { case 1: if (s.charAt(0) == 'a') { b = 1; } break; }",
    "if (s.startsWith(\"-\")) { b = 7; }",
    "if (s.toLowerCase().endsWith(\".txt\")) { b = 8; }",
    "b = a % {n};",
    "for (int i = 0; i < items.length; i++) { if (items[i] == a) { b = i; } }",
    "while (a < b) { a = a + {n}; }",
    "if (a >= b && b <= {n}) { a = b; }",
    "b = \"k\".equals(s) ? 1 : 2;",
    "if (other != null && other.ready) { b = 9; }",
    "c = Holder.class.getName();",
];

fn program(choices: &[(usize, u8)]) -> String {
    let body: Vec<String> = choices
        .iter()
        .enumerate()
        .map(|(k, (t, n))| {
            TEMPLATES[*t]
                .replace("{n}", &n.to_string())
                .replace("{k}", &k.to_string())
        })
        .collect();
    format!(
        "class P {{\n  static final int MASK = 4;\n  int b;\n  String c;\n  boolean ok;\n  \
         void run(int a, String s, int flag, double d, int[] items, Other other) {{\n    {}\n  }}\n  \
         void log(String k, int v) {{ }}\n}}\n",
        body.join("\n    ")
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matcher_invariants(choices in prop::collection::vec((0..TEMPLATES.len(), 0u8..100), 1..8)) {
        let src = program(&choices);
        let (corpus, symbols) = from_source(&src);
        let found = match_all(&corpus, &structural_patterns(), &symbols);

        // soundness: the binding reproduces at its own node and fits the schema
        for inst in &found {
            let site = inst.site.unwrap();
            let again = match_statement(&corpus, &symbols, site.node, inst.pattern.pattern());
            prop_assert_eq!(again.as_ref(), Some(&inst.binding));
            prop_assert_eq!(inst.binding.len(), inst.pattern.pattern().parts.len());
            for part in &inst.binding.0 {
                if let Some(n) = part.node {
                    prop_assert!(site.span.contains(&corpus.node(n).location));
                }
            }
        }

        // completeness against brute force
        let mut brute = Vec::new();
        for node in corpus.all_nodes() {
            for p in builtin_catalog() {
                if let Some(i) = match_instance(&corpus, &symbols, node, p.id) {
                    brute.push(i);
                }
            }
        }
        sort_instances(&mut brute);
        prop_assert_eq!(&found, &brute);

        // precedence: one label per node within each exclusive group
        let groups: [&[Cip]; 2] = [
            &[Cip::BinaryComparison, Cip::SelfComparison, Cip::NullCheck, Cip::BinaryFlagCheck, Cip::DeltaCheck, Cip::CastSelfComparison],
            &[Cip::NullCheck, Cip::NullEmptyCheck, Cip::NullZeroCheck, Cip::NullBooleanCheck],
        ];
        for group in groups {
            let mut per_node: HashMap<_, usize> = HashMap::new();
            for inst in found.iter().filter(|i| group.contains(&i.pattern)) {
                *per_node.entry(inst.site.unwrap().node).or_default() += 1;
            }
            prop_assert!(per_node.values().all(|c| *c == 1));
        }

        // a null compound never leaves its inner null check behind
        for inst in found.iter().filter(|i| matches!(i.pattern, Cip::NullEmptyCheck | Cip::NullZeroCheck | Cip::NullBooleanCheck)) {
            let span = inst.site.unwrap().span;
            prop_assert!(!found.iter().any(|o| o.pattern == Cip::NullCheck
                && o.site.unwrap().node != inst.site.unwrap().node
                && span.contains(&o.site.unwrap().span)));
        }

        // if chain and if-return chain never share a root
        for inst in found.iter().filter(|i| i.pattern == Cip::IfChain) {
            prop_assert!(!found.iter().any(|o| o.pattern == Cip::IfReturnChain && o.site == inst.site));
        }
    }
}
