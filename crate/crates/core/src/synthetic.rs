//! Generated Java corpora with known enforcing statements, for measuring
//! detector recall.

use crate::constraint::{parse_constraint_expr, ConstraintRecord, SeedRef};

/// A generated corpus together with its constraints and the statement
/// planted for each one.
#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub sources: Vec<(String, String)>,
    pub constraints: Vec<ConstraintRecord>,
    /// `(constraint id, file, line)` of every planted enforcing statement.
    pub planted: Vec<(String, String, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Comparison,
    Flag,
    Presence,
}

struct Emitter {
    text: String,
    line: u32,
}

impl Emitter {
    fn new() -> Emitter {
        Emitter {
            text: String::new(),
            line: 0,
        }
    }

    /// Append one line and return its line number.
    fn push(&mut self, s: &str) -> u32 {
        self.line += 1;
        self.text.push_str(s);
        self.text.push('\n');
        self.line
    }
}

fn record(
    id: String,
    simplified: &str,
    seeds: Vec<SeedRef>,
    pattern: &str,
) -> ConstraintRecord {
    ConstraintRecord {
        id,
        system: "Synthetic".into(),
        description: format!("generated constraint `{simplified}`"),
        simplified: simplified.into(),
        scenario: String::new(),
        seeds,
        manual_pattern: Some(pattern.into()),
        expr: parse_constraint_expr(simplified).expect("generated expression parses"),
    }
}

fn seed(file: &str, line: u32, kind: &str, symbol: &str) -> SeedRef {
    SeedRef {
        file: file.into(),
        line,
        kind: kind.into(),
        symbol: Some(symbol.into()),
    }
}

/// `files` classes with `per_file` planted constraints each. Plants cycle
/// through three statement shapes and through flows of 0 to 3
/// interprocedural hops.
pub fn planted_corpus(files: usize, per_file: usize) -> PlantedCorpus {
    let mut out = PlantedCorpus {
        sources: Vec::new(),
        constraints: Vec::new(),
        planted: Vec::new(),
    };
    for f in 0..files {
        let class = format!("Module{f}");
        let path = format!("synth/{class}.java");
        let mut e = Emitter::new();
        e.push("package synth;");
        e.push("");
        e.push(&format!("public class {class} {{"));
        for j in 0..per_file {
            let k = f * per_file + j;
            let shape = [Shape::Comparison, Shape::Flag, Shape::Presence][k % 3];
            let hops = (k / 3) % 4;
            plant(&mut e, &mut out, &path, k, shape, hops);
        }
        e.push("}");
        out.sources.push((path, e.text));
    }
    out
}

fn plant(e: &mut Emitter, out: &mut PlantedCorpus, path: &str, k: usize, shape: Shape, hops: usize) {
    let (ty, field, getter, init) = match shape {
        Shape::Comparison => ("int", format!("limit{k}"), format!("getLimit{k}"), format!(" = {}", 10 + k)),
        Shape::Flag => ("boolean", format!("enabled{k}"), format!("isEnabled{k}"), String::new()),
        Shape::Presence => ("String", format!("name{k}"), format!("getName{k}"), String::new()),
    };
    let field_line = e.push(&format!("    private {ty} {field}{init};"));
    e.push("");
    e.push(&format!("    public {ty} {getter}() {{"));
    e.push(&format!("        return {field};"));
    e.push("    }");
    e.push("");
    let read = if hops == 0 { field.clone() } else { format!("{getter}()") };
    let (check_line, value_line) = match (shape, hops) {
        (_, 0 | 1) => {
            let value_line = e.push(&format!("    public boolean check{k}(int value) {{"));
            let cond = match shape {
                Shape::Comparison => format!("value > {read}"),
                Shape::Flag => read.clone(),
                Shape::Presence => format!("{read} != null"),
            };
            let line = guard(e, &cond);
            e.push("    }");
            (line, value_line)
        }
        (_, 2) => {
            let (params, body) = helper_parts(shape);
            e.push(&format!("    public boolean check{k}(int value) {{"));
            e.push(&format!("        return helper{k}({});", helper_args(shape, &read)));
            e.push("    }");
            e.push("");
            let value_line = e.push(&format!("    boolean helper{k}({params}) {{"));
            let line = guard(e, body);
            e.push("    }");
            (line, value_line)
        }
        _ => {
            let (params, body) = helper_parts(shape);
            let local_ty = ty;
            e.push(&format!("    public boolean check{k}(int value) {{"));
            e.push(&format!("        {local_ty} bound = {read};"));
            e.push(&format!("        return relay{k}({});", helper_args(shape, "bound")));
            e.push("    }");
            e.push("");
            e.push(&format!("    boolean relay{k}({params}) {{"));
            e.push(&format!("        return helper{k}({});", relay_args(shape)));
            e.push("    }");
            e.push("");
            let value_line = e.push(&format!("    boolean helper{k}({params}) {{"));
            let line = guard(e, body);
            e.push("    }");
            (line, value_line)
        }
    };
    e.push("");
    let id = format!("plant-{k}");
    let c = match shape {
        Shape::Comparison => record(
            id.clone(),
            &format!("value > limit {k}"),
            vec![
                seed(path, field_line, "field", &field),
                SeedRef {
                    file: String::new(),
                    line: 0,
                    kind: "operator".into(),
                    symbol: Some(">".into()),
                },
                seed(path, value_line, "parameter", "value"),
            ],
            "binary comparison",
        ),
        Shape::Flag => record(
            id.clone(),
            &format!("enabled {k} == true"),
            vec![seed(path, field_line, "field", &field)],
            "boolean property",
        ),
        Shape::Presence => record(
            id.clone(),
            &format!("name {k} != null"),
            vec![seed(path, field_line, "field", &field)],
            "null check",
        ),
    };
    out.constraints.push(c);
    out.planted.push((id, path.to_string(), check_line));
}

/// `if (cond) return true; return false;` as a method body.
fn guard(e: &mut Emitter, cond: &str) -> u32 {
    let line = e.push(&format!("        if ({cond}) {{"));
    e.push("            return true;");
    e.push("        }");
    e.push("        return false;");
    line
}

fn helper_parts(shape: Shape) -> (&'static str, &'static str) {
    match shape {
        Shape::Comparison => ("int value, int bound", "value > bound"),
        Shape::Flag => ("boolean flag", "flag"),
        Shape::Presence => ("String s", "s != null"),
    }
}

fn helper_args(shape: Shape, read: &str) -> String {
    match shape {
        Shape::Comparison => format!("value, {read}"),
        Shape::Flag | Shape::Presence => read.to_string(),
    }
}

fn relay_args(shape: Shape) -> &'static str {
    match shape {
        Shape::Comparison => "value, bound",
        Shape::Flag => "flag",
        Shape::Presence => "s",
    }
}

/// One boolean field tested at `sites` separate statements, with a single
/// constraint seeded on the field.
pub fn repeated_check_corpus(sites: usize) -> PlantedCorpus {
    let path = "flags/Switches.java".to_string();
    let mut e = Emitter::new();
    e.push("package flags;");
    e.push("");
    e.push("public class Switches {");
    let field_line = e.push("    private boolean enabled;");
    e.push("    private int count;");
    let mut planted = Vec::new();
    for i in 0..sites {
        e.push("");
        e.push(&format!("    public void step{i}() {{"));
        let line = e.push("        if (enabled) {");
        e.push("            count++;");
        e.push("        }");
        e.push("    }");
        planted.push(("switches".to_string(), path.clone(), line));
    }
    e.push("}");
    PlantedCorpus {
        constraints: vec![record(
            "switches".into(),
            "enabled == true",
            vec![seed(&path, field_line, "field", "enabled")],
            "boolean property",
        )],
        sources: vec![(path, e.text)],
        planted,
    }
}
