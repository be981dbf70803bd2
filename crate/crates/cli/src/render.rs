//! Plain-text tables.

use std::fmt::Write;

/// A grid with row labels `p = 0..` and column labels `q = 0..`.
pub fn pq_table(title: &str, cells: &[Vec<String>]) -> String {
    let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
    let headers: Vec<String> = std::iter::once("p\\q".to_string()).chain((0..cols).map(|q| q.to_string())).collect();
    let rows: Vec<Vec<String>> =
        cells.iter().enumerate().map(|(p, row)| std::iter::once(p.to_string()).chain(row.iter().cloned()).collect()).collect();
    let mut out = format!("{title}\n");
    out.push_str(&grid(&headers, &rows));
    out
}

pub fn grid(headers: &[String], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..headers.len())
        .map(|j| rows.iter().map(|r| r.get(j).map_or(0, |s| s.chars().count())).chain([headers[j].chars().count()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    };
    line(headers);
    for r in rows {
        line(r);
    }
    out
}

pub fn cone(rays: &[usize]) -> String {
    if rays.is_empty() {
        "0".into()
    } else {
        format!("{{{}}}", rays.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout() {
        let t = pq_table("H", &[vec!["Z".into(), "0".into()], vec!["0".into(), "Z^3 x Z/2Z".into()]]);
        assert_eq!(t, "H\np\\q  0  1\n0    Z  0\n1    0  Z^3 x Z/2Z\n");
        assert_eq!(cone(&[]), "0");
        assert_eq!(cone(&[0, 2]), "{0,2}");
    }
}
