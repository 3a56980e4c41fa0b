use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TokenizerOptions {
    pub lowercase: bool,
    pub strip_punctuation: bool,
    pub latin_abbrev_expansion: bool,
}

impl Default for TokenizerOptions {
    fn default() -> Self {
        TokenizerOptions {
            lowercase: true,
            strip_punctuation: true,
            latin_abbrev_expansion: true,
        }
    }
}

const LATIN_ABBREVIATIONS: &[(&str, &[&str])] = &[
    ("i.e.", &["id", "est"]),
    ("e.g.", &["exempli", "gratia"]),
    ("etc.", &["et", "cetera"]),
    ("viz.", &["videlicet"]),
    ("cf.", &["confer"]),
    ("vs.", &["versus"]),
    ("al.", &["alii"]),
];

fn expand(token: &str) -> Option<&'static [&'static str]> {
    let bare = token.trim_end_matches([',', ';', ':']).to_lowercase();
    LATIN_ABBREVIATIONS
        .iter()
        .find(|(abbr, _)| *abbr == bare)
        .map(|(_, words)| *words)
}

/// Whitespace tokenization after the enabled normalizations.
///
/// Abbreviations are expanded first (they need their periods), then tokens
/// are lowercased and stripped of punctuation; tokens left empty are dropped.
pub fn tokenize(text: &str, options: &TokenizerOptions) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        let expanded: Vec<String> = match options.latin_abbrev_expansion.then(|| expand(raw)).flatten() {
            Some(words) => words.iter().map(|w| w.to_string()).collect(),
            None => vec![raw.to_string()],
        };
        for mut token in expanded {
            if options.lowercase {
                token = token.to_lowercase();
            }
            if options.strip_punctuation {
                token.retain(|c| c.is_alphanumeric());
            }
            if !token.is_empty() {
                out.push(token);
            }
        }
    }
    out
}
