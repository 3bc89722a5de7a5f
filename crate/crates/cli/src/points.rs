//! Two-column point files: `x y` or `x,y` per line, `#` comments, and an
//! optional non-numeric header line.

pub fn parse_points(text: &str) -> Result<Vec<[f64; 2]>, String> {
    let mut out = Vec::new();
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        match parsed.as_deref() {
            Some([x, y]) => {
                out.push([*x, *y]);
                seen_data = true;
            }
            None if !seen_data => {}
            _ => {
                return Err(format!(
                    "line {}: expected two numbers, got {line:?}",
                    i + 1
                ))
            }
        }
    }
    if out.is_empty() {
        return Err("no points found".into());
    }
    Ok(out)
}
