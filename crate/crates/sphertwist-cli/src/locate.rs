//! Maps a path such as `scenario/x/1/module` to the line and column where
//! that value starts in a document already known to be valid JSON.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seg {
    Key(String),
    Index(usize),
}

impl Seg {
    pub fn key(k: &str) -> Seg {
        Seg::Key(k.to_string())
    }
}

impl fmt::Display for Seg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seg::Key(k) => f.write_str(k),
            Seg::Index(i) => write!(f, "{i}"),
        }
    }
}

/// Builds a path from string keys and indices: `path!["scenario", "x", 1]`.
#[macro_export]
macro_rules! path {
    ($($seg:expr),* $(,)?) => {
        <[_]>::into_vec(Box::new([$($crate::locate::IntoSeg::into_seg($seg)),*]))
    };
}

pub trait IntoSeg {
    fn into_seg(self) -> Seg;
}

impl IntoSeg for &str {
    fn into_seg(self) -> Seg {
        Seg::Key(self.to_string())
    }
}

impl IntoSeg for &String {
    fn into_seg(self) -> Seg {
        Seg::Key(self.clone())
    }
}

impl IntoSeg for usize {
    fn into_seg(self) -> Seg {
        Seg::Index(self)
    }
}

/// 1-based line and column of the start of the value at `path`. Stops at
/// the deepest prefix of the path that exists.
pub fn position(text: &str, path: &[Seg]) -> (usize, usize) {
    let b = text.as_bytes();
    let mut i = skip_ws(b, 0);
    for seg in path {
        let found = match (seg, b.get(i)) {
            (Seg::Key(k), Some(b'{')) => find_key(text, i, k),
            (Seg::Index(n), Some(b'[')) => find_index(b, i, *n),
            _ => None,
        };
        match found {
            Some(j) => i = j,
            None => break,
        }
    }
    line_col(text, i)
}

pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |p| p + 1);
    (line, before[start..].chars().count() + 1)
}

fn skip_ws(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

/// End (exclusive) of the string literal starting at `i`.
fn string_end(b: &[u8], mut i: usize) -> usize {
    i += 1;
    while i < b.len() {
        match b[i] {
            b'\\' => i += 2,
            b'"' => return i + 1,
            _ => i += 1,
        }
    }
    b.len()
}

/// End (exclusive) of the value starting at `i`.
fn value_end(b: &[u8], i: usize) -> usize {
    match b.get(i) {
        Some(b'"') => string_end(b, i),
        Some(b'{') | Some(b'[') => {
            let mut depth = 0usize;
            let mut j = i;
            while j < b.len() {
                match b[j] {
                    b'"' => {
                        j = string_end(b, j);
                        continue;
                    }
                    b'{' | b'[' => depth += 1,
                    b'}' | b']' => {
                        depth -= 1;
                        if depth == 0 {
                            return j + 1;
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            b.len()
        }
        _ => {
            let mut j = i;
            while j < b.len() && !matches!(b[j], b',' | b'}' | b']') && !b[j].is_ascii_whitespace() {
                j += 1;
            }
            j
        }
    }
}

fn find_key(text: &str, open: usize, key: &str) -> Option<usize> {
    let b = text.as_bytes();
    let mut i = skip_ws(b, open + 1);
    let mut hit = None;
    while i < b.len() && b[i] == b'"' {
        let end = string_end(b, i);
        let name: String = serde_json::from_str(&text[i..end]).ok()?;
        i = skip_ws(b, end);
        i = skip_ws(b, i + 1);
        if name == key {
            hit = Some(i);
        }
        i = skip_ws(b, value_end(b, i));
        if b.get(i) == Some(&b',') {
            i = skip_ws(b, i + 1);
        }
    }
    hit
}

fn find_index(b: &[u8], open: usize, n: usize) -> Option<usize> {
    let mut i = skip_ws(b, open + 1);
    for k in 0.. {
        if i >= b.len() || b[i] == b']' {
            return None;
        }
        if k == n {
            return Some(i);
        }
        i = skip_ws(b, value_end(b, i));
        if b.get(i) == Some(&b',') {
            i = skip_ws(b, i + 1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_nested_values() {
        let text = "{\n  \"a\": [1, {\"b\": \"x,]\"}, [2]],\n  \"c\": {\"d\\\"\": true}\n}";
        assert_eq!(position(text, &path!["a"]), (2, 8));
        assert_eq!(position(text, &path!["a", 1, "b"]), (2, 18));
        assert_eq!(position(text, &path!["a", 2, 0]), (2, 27));
        assert_eq!(position(text, &[Seg::key("c"), Seg::key("d\"")]), (3, 16));
        assert_eq!(position(text, &path!["a", 7]), (2, 8));
        assert_eq!(position(text, &path!["zz"]), (1, 1));
    }

    #[test]
    fn last_duplicate_key_wins() {
        assert_eq!(position(r#"{"k": 1, "k": 2}"#, &path!["k"]), (1, 15));
    }

    #[test]
    fn columns_count_characters() {
        assert_eq!(position("{\"λ\": 5}", &path!["λ"]), (1, 7));
    }
}
