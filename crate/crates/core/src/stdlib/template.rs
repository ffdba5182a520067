//! Level templates. A template file starts with `-- levels: i` or
//! `-- levels: i j` and is instantiated once per level choice; `#let` lines
//! define text macros used as `${NAME}`.

/// Number of level variables named by the header line, 0 for a plain file.
pub fn arity(src: &str) -> usize {
    match src.lines().next().and_then(|l| l.strip_prefix("-- levels:")) {
        Some(rest) => rest.split_whitespace().count(),
        None => 0,
    }
}

/// Text of the template at `lv` (one level, or two for `i j`).
pub fn instantiate(src: &str, lv: &[u32]) -> String {
    let mut macros: Vec<(String, String)> = Vec::new();
    let mut body = String::new();
    for line in src.lines() {
        if let Some(def) = line.strip_prefix("#let ") {
            let (name, text) = def.split_once('=').expect("`#let NAME = text`");
            let mut text = text.trim().to_string();
            for (k, v) in &macros {
                text = text.replace(k, v);
            }
            macros.push((format!("${{{}}}", name.trim()), text));
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    for (k, v) in &macros {
        body = body.replace(k, v);
    }
    let i = lv.first().copied().unwrap_or(0);
    let j = lv.get(1).copied().unwrap_or(i);
    let k = i.max(j);
    // longer tokens first so `$i1` is not read as `$i` followed by `1`
    for (tok, v) in [("$i1", i + 1), ("$j1", j + 1), ("$k1", k + 1), ("$i", i), ("$j", j), ("$k", k)] {
        body = body.replace(tok, &v.to_string());
    }
    body
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitutes_levels_and_macros() {
        let src = "-- levels: i j\n#let T = Type@$j\ndef x@{$i,$j} : ${T} := Type@$k1\n";
        assert_eq!(arity(src), 2);
        let out = instantiate(src, &[2, 0]);
        assert!(out.contains("def x@{2,0} : Type@0 := Type@3"), "{}", out);
    }
}
