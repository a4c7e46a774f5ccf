/// A label broken into lowercase word tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedName {
    pub original: String,
    pub tokens: Vec<String>,
    pub joined: String,
}

impl NormalizedName {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Tokenizes a name: split camelCase, treat `_ - /` as spaces, drop other
/// punctuation, lowercase, split on whitespace. Digits stay attached to the
/// surrounding letters.
pub fn normalize(name: &str) -> NormalizedName {
    let chars: Vec<char> = name.chars().collect();
    let mut spaced = String::with_capacity(name.len() + 8);
    for (i, &c) in chars.iter().enumerate() {
        if i > 0 && c.is_uppercase() {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            // fooBar -> foo Bar, HTTPServer -> HTTP Server
            if prev.is_lowercase() || (prev.is_uppercase() && next_lower) {
                spaced.push(' ');
            }
        }
        match c {
            '_' | '-' | '/' => spaced.push(' '),
            c if c.is_alphanumeric() || c.is_whitespace() => spaced.push(c),
            _ => {}
        }
    }
    let tokens: Vec<String> =
        spaced.split_whitespace().map(|t| t.chars().flat_map(char::to_lowercase).collect()).collect();
    NormalizedName { original: name.to_owned(), joined: tokens.join(" "), tokens }
}
