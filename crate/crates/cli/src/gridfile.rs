//! The settings-file format: one line per party, whitespace-separated
//! angles in radians, `#` starts a comment. Blank lines are ignored.

/// Parses settings-file text into per-party angle lists. Errors carry the
/// 1-based line number.
pub fn parse(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let mut parties = Vec::new();
    for (at, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut angles = Vec::new();
        for token in line.split_whitespace() {
            let angle: f64 = token
                .parse()
                .ok()
                .filter(|a: &f64| a.is_finite())
                .ok_or_else(|| {
                    format!(
                        "line {}: '{}' is not an angle in radians",
                        at + 1,
                        token
                    )
                })?;
            angles.push(angle);
        }
        if !angles.is_empty() {
            parties.push(angles);
        }
    }
    if parties.is_empty() {
        return Err("no angle lines found".into());
    }
    Ok(parties)
}

/// Parses an inline grid: per-party angle lists separated by `;`.
pub fn parse_inline(spec: &str) -> Result<Vec<Vec<f64>>, String> {
    spec.split(';')
        .enumerate()
        .map(|(party, chunk)| {
            chunk
                .split_whitespace()
                .map(|token| {
                    token
                        .parse::<f64>()
                        .ok()
                        .filter(|a| a.is_finite())
                        .ok_or_else(|| {
                            format!(
                                "party {}: '{}' is not an angle in radians",
                                party + 1,
                                token
                            )
                        })
                })
                .collect()
        })
        .collect()
}

/// Renders per-party angles back into settings-file text. Angles print in
/// the shortest form that re-reads to the same value.
pub fn render(angles: &[Vec<f64>]) -> String {
    let mut out = String::from("# one line per party, angles in radians\n");
    for party in angles {
        let words: Vec<String> = party.iter().map(|a| a.to_string()).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}
