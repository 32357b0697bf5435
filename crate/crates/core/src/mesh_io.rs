//! Text formats: meshes (`MDK1`), boundary displacements (`MDK1-DISP`) and
//! selection histories (CSV).
//!
//! Mesh layout, whitespace separated, `#` starts a comment, blank lines are
//! ignored:
//!
//! ```text
//! MDK1
//! NODES <n>
//! <x y z>               n lines, node id = order, 0-based
//! BOUNDARY <nb>
//! <node index>          nb lines, strictly increasing
//! CELLS <ne>
//! <k i0 .. i(k-1)>      ne lines, k in {3, 4}
//! ```
//!
//! Writers emit one canonical form (17 significant digits, `\n` line ends),
//! so reading and writing a canonical file reproduces it byte for byte.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{DisplacementField, Point3, Vec3Displacement};
use crate::selection::{IterationRecord, SelectionHistory, SweepRecord};

pub const MESH_MAGIC: &str = "MDK1";
pub const DISP_MAGIC: &str = "MDK1-DISP";
pub const HISTORY_HEADER: &str =
    "iter,group,node,local_max_error,kernel_evals,cum_kernel_evals,t1_s,t2_s";

/// Node coordinates, wall-node membership and optional surface cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<Point3>,
    boundary: Vec<usize>,
    cells: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn new(nodes: Vec<Point3>, boundary: Vec<usize>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let n = nodes.len();
        let bad = |message: String| Error::InvariantViolation { line: 0, message };
        if let Some(k) = nodes.iter().position(|p| !p.is_finite()) {
            return Err(bad(format!("node {k} has non-finite coordinates")));
        }
        for w in boundary.windows(2) {
            if w[0] >= w[1] {
                return Err(bad("boundary indices must be strictly increasing".into()));
            }
        }
        if let Some(&b) = boundary.iter().find(|&&b| b >= n) {
            return Err(bad(format!(
                "boundary index {b} out of range for {n} nodes"
            )));
        }
        for (c, cell) in cells.iter().enumerate() {
            if !(cell.len() == 3 || cell.len() == 4) {
                return Err(bad(format!("cell {c} has arity {}", cell.len())));
            }
            if let Some(&v) = cell.iter().find(|&&v| v >= n) {
                return Err(bad(format!("cell {c} vertex {v} out of range")));
            }
        }
        Ok(Self {
            nodes,
            boundary,
            cells,
        })
    }

    pub fn nodes(&self) -> &[Point3] {
        &self.nodes
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn boundary_points(&self) -> Vec<Point3> {
        self.boundary.iter().map(|&i| self.nodes[i]).collect()
    }

    /// Same topology with new node positions.
    pub fn with_nodes(&self, nodes: Vec<Point3>) -> Result<Self> {
        if nodes.len() != self.nodes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.nodes.len(),
                actual: nodes.len(),
            });
        }
        Mesh::new(nodes, self.boundary.clone(), self.cells.clone())
    }
}

/// A significant line with its 1-based number and tokens with 1-based columns.
struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

fn significant_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in body.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push((s + 1, &body[s..pos]));
                }
            } else if start.is_none() {
                start = Some(pos);
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &body[s..]));
        }
        (!tokens.is_empty()).then_some(Line {
            number: i + 1,
            tokens,
        })
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Cursor<'a, I: Iterator<Item = Line<'a>>> {
    lines: std::iter::Peekable<I>,
    last_line: usize,
}

impl<'a, I: Iterator<Item = Line<'a>>> Cursor<'a, I> {
    fn next(&mut self, what: &str) -> Result<Line<'a>> {
        match self.lines.next() {
            Some(l) => {
                self.last_line = l.number;
                Ok(l)
            }
            None => Err(parse_err(
                self.last_line + 1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    fn at_end(&mut self) -> bool {
        self.lines.peek().is_none()
    }
}

fn expect_arity(line: &Line<'_>, n: usize, what: &str) -> Result<()> {
    if line.tokens.len() != n {
        let col = line.tokens.get(n).map_or(1, |t| t.0);
        return Err(parse_err(
            line.number,
            format!(
                "column {col}: expected {n} fields for {what}, found {}",
                line.tokens.len()
            ),
        ));
    }
    Ok(())
}

fn parse_usize(line: &Line<'_>, k: usize) -> Result<usize> {
    let (col, tok) = line.tokens[k];
    tok.parse().map_err(|_| {
        parse_err(
            line.number,
            format!("column {col}: expected a non-negative integer, found {tok:?}"),
        )
    })
}

fn parse_f64(line: &Line<'_>, k: usize) -> Result<f64> {
    let (col, tok) = line.tokens[k];
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(
            line.number,
            format!("column {col}: expected a finite number, found {tok:?}"),
        )),
    }
}

fn section_header(line: &Line<'_>, keyword: &str) -> Result<usize> {
    if line.tokens[0].1 != keyword {
        return Err(parse_err(
            line.number,
            format!(
                "column {}: expected {keyword}, found {:?}",
                line.tokens[0].0, line.tokens[0].1
            ),
        ));
    }
    expect_arity(line, 2, keyword)?;
    parse_usize(line, 1)
}

pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut cur = Cursor {
        lines: significant_lines(text).peekable(),
        last_line: 0,
    };
    let magic = cur.next(MESH_MAGIC)?;
    if magic.tokens.len() != 1 || magic.tokens[0].1 != MESH_MAGIC {
        return Err(parse_err(
            magic.number,
            format!("expected {MESH_MAGIC} header"),
        ));
    }

    let header = cur.next("NODES")?;
    let n = section_header(&header, "NODES")?;
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        let l = cur.next("node coordinates")?;
        expect_arity(&l, 3, "a node")?;
        nodes.push(Point3::new(
            parse_f64(&l, 0)?,
            parse_f64(&l, 1)?,
            parse_f64(&l, 2)?,
        ));
    }

    let header = cur.next("BOUNDARY")?;
    let nb = section_header(&header, "BOUNDARY")?;
    let mut boundary = Vec::with_capacity(nb);
    for _ in 0..nb {
        let l = cur.next("boundary index")?;
        expect_arity(&l, 1, "a boundary index")?;
        let idx = parse_usize(&l, 0)?;
        if idx >= n {
            return Err(Error::InvariantViolation {
                line: l.number,
                message: format!("boundary index {idx} out of range for {n} nodes"),
            });
        }
        if boundary.last().is_some_and(|&prev| prev >= idx) {
            return Err(Error::InvariantViolation {
                line: l.number,
                message: format!("boundary index {idx} is not strictly increasing"),
            });
        }
        boundary.push(idx);
    }

    let mut cells = Vec::new();
    if !cur.at_end() {
        let header = cur.next("CELLS")?;
        let ne = section_header(&header, "CELLS")?;
        cells.reserve(ne);
        for _ in 0..ne {
            let l = cur.next("cell")?;
            let k = parse_usize(&l, 0)?;
            if !(k == 3 || k == 4) {
                return Err(Error::InvariantViolation {
                    line: l.number,
                    message: format!("cell arity {k} is not 3 or 4"),
                });
            }
            expect_arity(&l, k + 1, "a cell")?;
            let mut cell = Vec::with_capacity(k);
            for t in 1..=k {
                let v = parse_usize(&l, t)?;
                if v >= n {
                    return Err(Error::InvariantViolation {
                        line: l.number,
                        message: format!("cell vertex {v} out of range for {n} nodes"),
                    });
                }
                cell.push(v);
            }
            cells.push(cell);
        }
        if let Some(extra) = cur.lines.next() {
            return Err(parse_err(
                extra.number,
                "unexpected content after CELLS section",
            ));
        }
    }
    Ok(Mesh {
        nodes,
        boundary,
        cells,
    })
}

fn push_f64(out: &mut String, v: f64) {
    let _ = write!(out, "{v:.16e}");
}

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::with_capacity(mesh.nodes.len() * 72 + 64);
    out.push_str(MESH_MAGIC);
    out.push('\n');
    let _ = writeln!(out, "NODES {}", mesh.nodes.len());
    for p in &mesh.nodes {
        push_f64(&mut out, p.x);
        out.push(' ');
        push_f64(&mut out, p.y);
        out.push(' ');
        push_f64(&mut out, p.z);
        out.push('\n');
    }
    let _ = writeln!(out, "BOUNDARY {}", mesh.boundary.len());
    for b in &mesh.boundary {
        let _ = writeln!(out, "{b}");
    }
    let _ = writeln!(out, "CELLS {}", mesh.cells.len());
    for c in &mesh.cells {
        let _ = write!(out, "{}", c.len());
        for v in c {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Reads `<node dx dy dz>` lines and aligns them with `boundary_ids`.
pub fn read_displacements(text: &str, boundary_ids: &[usize]) -> Result<DisplacementField> {
    let position: HashMap<usize, usize> = boundary_ids
        .iter()
        .enumerate()
        .map(|(pos, &id)| (id, pos))
        .collect();
    let mut lines = significant_lines(text);
    match lines.next() {
        Some(l) if l.tokens.len() == 1 && l.tokens[0].1 == DISP_MAGIC => {}
        Some(l) => return Err(parse_err(l.number, format!("expected {DISP_MAGIC} header"))),
        None => return Err(parse_err(1, format!("expected {DISP_MAGIC} header"))),
    }
    let mut values: Vec<Option<Vec3Displacement>> = vec![None; boundary_ids.len()];
    for l in lines {
        expect_arity(&l, 4, "a displacement")?;
        let node = parse_usize(&l, 0)?;
        let pos = *position
            .get(&node)
            .ok_or_else(|| Error::InvariantViolation {
                line: l.number,
                message: format!("node {node} is not a boundary node"),
            })?;
        if values[pos].is_some() {
            return Err(Error::DuplicateNode {
                line: l.number,
                node,
            });
        }
        values[pos] = Some(Vec3Displacement::new(
            parse_f64(&l, 1)?,
            parse_f64(&l, 2)?,
            parse_f64(&l, 3)?,
        ));
    }
    values
        .into_iter()
        .enumerate()
        .map(|(pos, v)| v.ok_or(Error::MissingNode(boundary_ids[pos])))
        .collect::<Result<Vec<_>>>()
        .map(DisplacementField::from)
}

pub fn write_displacements(boundary_ids: &[usize], field: &DisplacementField) -> String {
    let mut out = String::with_capacity(field.len() * 80 + 16);
    out.push_str(DISP_MAGIC);
    out.push('\n');
    for (id, d) in boundary_ids.iter().zip(field.iter()) {
        let _ = write!(out, "{id} ");
        push_f64(&mut out, d.dx);
        out.push(' ');
        push_f64(&mut out, d.dy);
        out.push(' ');
        push_f64(&mut out, d.dz);
        out.push('\n');
    }
    out
}

/// One row per iteration, then a `final` row when a full sweep was recorded.
///
/// The final row reads `final,,<node>,<max error>,<sweep evals>,<running total>,<sweep seconds>,`.
pub fn write_history_csv(history: &SelectionHistory) -> String {
    let mut out = String::with_capacity(64 * (history.records.len() + 2));
    out.push_str(HISTORY_HEADER);
    out.push('\n');
    let mut cum = 0;
    for r in &history.records {
        let _ = writeln!(
            out,
            "{},{},{},{:e},{},{},{:e},{:e}",
            r.iter,
            r.group,
            r.node,
            r.local_max_error,
            r.kernel_evals,
            r.cum_kernel_evals,
            r.t1_s,
            r.t2_s
        );
        cum = r.cum_kernel_evals;
    }
    if let Some(s) = &history.final_sweep {
        let _ = writeln!(
            out,
            "final,,{},{:e},{},{},{:e},",
            s.node,
            s.max_error,
            s.kernel_evals,
            cum + s.kernel_evals,
            s.elapsed_s
        );
    }
    out
}

/// Parses the output of [`write_history_csv`]. Only `records` and
/// `final_sweep` are carried by the format.
pub fn read_history_csv(text: &str) -> Result<SelectionHistory> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HISTORY_HEADER => {}
        _ => return Err(parse_err(1, "missing history header")),
    }
    let mut history = SelectionHistory::default();
    for (i, raw) in lines {
        let number = i + 1;
        if raw.is_empty() {
            continue;
        }
        if history.final_sweep.is_some() {
            return Err(parse_err(number, "rows after the final sweep"));
        }
        let f: Vec<&str> = raw.split(',').collect();
        if f.len() != 8 {
            return Err(parse_err(
                number,
                format!("expected 8 fields, found {}", f.len()),
            ));
        }
        let int = |k: usize| -> Result<u64> {
            f[k].parse()
                .map_err(|_| parse_err(number, format!("field {}: bad integer {:?}", k + 1, f[k])))
        };
        let real = |k: usize| -> Result<f64> {
            f[k].parse()
                .map_err(|_| parse_err(number, format!("field {}: bad number {:?}", k + 1, f[k])))
        };
        if f[0] == "final" {
            history.final_sweep = Some(SweepRecord {
                node: int(2)? as usize,
                max_error: real(3)?,
                kernel_evals: int(4)?,
                elapsed_s: real(6)?,
            });
        } else {
            history.records.push(IterationRecord {
                iter: int(0)? as usize,
                group: int(1)? as usize,
                node: int(2)? as usize,
                local_max_error: real(3)?,
                kernel_evals: int(4)?,
                cum_kernel_evals: int(5)?,
                t1_s: real(6)?,
                t2_s: real(7)?,
            });
        }
    }
    Ok(history)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "MDK1\nNODES 3\n0 0 0\n1 0 0\n0 1 0\nBOUNDARY 3\n0\n1\n2\n";

    #[test]
    fn minimal_mesh() {
        let m = read_mesh(MINIMAL).unwrap();
        assert_eq!(m.nodes().len(), 3);
        assert_eq!(m.boundary(), &[0, 1, 2]);
        assert!(m.cells().is_empty());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# generated\nMDK1\n\nNODES 1 # one node\n  0.5 0.25 -1\nBOUNDARY 0\nCELLS 0\n";
        let m = read_mesh(text).unwrap();
        assert_eq!(m.nodes()[0], Point3::new(0.5, 0.25, -1.0));
    }

    #[test]
    fn boundary_out_of_range_names_line() {
        let text = "MDK1\nNODES 2\n0 0 0\n1 0 0\nBOUNDARY 1\n2\n";
        assert!(matches!(
            read_mesh(text).unwrap_err(),
            Error::InvariantViolation { line: 6, .. }
        ));
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let cases = [
            ("", 1),
            ("MDK2\n", 1),
            ("MDK1\nNODES x\n", 2),
            ("MDK1\nNODES 2\n0 0 0\n", 4),
            ("MDK1\nNODES 1\n0 0 nan\n", 3),
            ("MDK1\nNODES 1\n0 0\n", 3),
            ("MDK1\nNODES 1\n0 0 0\nBOUNDARY 1\n0\nCELLS 1\n3 0 0\n", 7),
            ("MDK1\nNODES 1\n0 0 0\nBOUNDARY 0\nCELLS 0\nextra\n", 6),
        ];
        for (text, line) in cases {
            match read_mesh(text) {
                Err(Error::Parse { line: l, .. })
                | Err(Error::InvariantViolation { line: l, .. }) => {
                    assert_eq!(l, line, "{text:?}")
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn canonical_round_trip() {
        let m = Mesh::new(
            vec![
                Point3::new(0.1, -2.5e-7, 3.0),
                Point3::new(1.0 / 3.0, 0.0, -0.0),
                Point3::new(1e10, 2.0, 7.0),
                Point3::new(0.0, 1.0, 1.0),
            ],
            vec![0, 2, 3],
            vec![vec![0, 1, 2], vec![0, 1, 2, 3]],
        )
        .unwrap();
        let text = write_mesh(&m);
        let back = read_mesh(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(write_mesh(&back), text);
    }

    #[test]
    fn displacement_cases() {
        assert_eq!(
            read_displacements("MDK1-DISP\n", &[]).unwrap(),
            DisplacementField::zeros(0)
        );
        let text = "MDK1-DISP\n4 0.1 0.2 0.3\n1 -1 0 0\n7 0 0 2.5\n";
        let f = read_displacements(text, &[1, 4, 7]).unwrap();
        assert_eq!(f[0], Vec3Displacement::new(-1.0, 0.0, 0.0));
        assert_eq!(f[1], Vec3Displacement::new(0.1, 0.2, 0.3));
        assert_eq!(f[2], Vec3Displacement::new(0.0, 0.0, 2.5));

        let dup = "MDK1-DISP\n1 0 0 0\n1 0 0 0\n";
        assert_eq!(
            read_displacements(dup, &[1, 2]).unwrap_err(),
            Error::DuplicateNode { line: 3, node: 1 }
        );
        let missing = "MDK1-DISP\n1 0 0 0\n";
        assert_eq!(
            read_displacements(missing, &[1, 2]).unwrap_err(),
            Error::MissingNode(2)
        );
        assert!(matches!(
            read_displacements("MDK1-DISP\n9 0 0 0\n", &[1]).unwrap_err(),
            Error::InvariantViolation { line: 2, .. }
        ));
    }

    #[test]
    fn history_csv_shapes() {
        let mut h = SelectionHistory::default();
        assert_eq!(write_history_csv(&h), format!("{HISTORY_HEADER}\n"));
        h.records.push(IterationRecord {
            iter: 3,
            group: 0,
            node: 17,
            local_max_error: 0.125,
            kernel_evals: 21,
            cum_kernel_evals: 21,
            t1_s: 1.5e-6,
            t2_s: 0.0,
        });
        let text = write_history_csv(&h);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(read_history_csv(&text).unwrap(), h);
    }
}
