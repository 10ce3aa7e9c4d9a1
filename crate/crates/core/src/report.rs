//! CSV, JSON, and SVG renderings of grids and region decompositions.
//! Rationals serialize as exact `num/den` strings in JSON; CSV prints
//! decimals with a dot separator and LF line endings.

use serde_json::{json, Value};

use crate::pointsolve::{GridResult, PointStatus};
use crate::rat::{to_decimal, to_frac_string, Rat};

fn status_str(s: PointStatus) -> &'static str {
    match s {
        PointStatus::Ok => "ok",
        PointStatus::Undetermined => "undetermined",
        PointStatus::Degenerate => "degenerate",
    }
}

fn rat_cell(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        to_decimal(q, 6)
    }
}

pub fn grid_csv(grid: &GridResult) -> String {
    let mut out = String::new();
    out.push_str(&grid.swept.join(","));
    if !grid.swept.is_empty() {
        out.push(',');
    }
    out.push_str("count,status\n");
    for p in &grid.points {
        for c in &p.coords {
            out.push_str(&rat_cell(c));
            out.push(',');
        }
        out.push_str(&format!("{},{}\n", p.count, status_str(p.status)));
    }
    out
}

pub fn grid_json(grid: &GridResult) -> Value {
    json!({
        "swept": grid.swept,
        "points": grid.points.iter().map(|p| {
            json!({
                "coords": p.coords.iter().map(to_frac_string).collect::<Vec<_>>(),
                "count": p.count,
                "status": status_str(p.status),
            })
        }).collect::<Vec<_>>(),
    })
}

fn rat_f64(q: &Rat) -> f64 {
    // display only; all decisions are made exactly upstream
    let digits = to_decimal(q, 12);
    digits.parse().unwrap_or(0.0)
}

struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
    width: f64,
    height: f64,
    margin: f64,
}

impl Frame {
    fn fit(xs: &[f64], ys: &[f64], width: f64, height: f64) -> Frame {
        let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
        for &x in xs {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
        }
        for &y in ys {
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        if !xmin.is_finite() {
            (xmin, xmax) = (0.0, 1.0);
        }
        if !ymin.is_finite() {
            (ymin, ymax) = (0.0, 1.0);
        }
        if xmax - xmin < 1e-9 {
            xmax = xmin + 1.0;
        }
        if ymax - ymin < 1e-9 {
            ymax = ymin + 1.0;
        }
        let margin = 40.0;
        Frame {
            x0: xmin,
            y0: ymin,
            sx: (width - 2.0 * margin) / (xmax - xmin),
            sy: (height - 2.0 * margin) / (ymax - ymin),
            width,
            height,
            margin,
        }
    }

    fn x(&self, v: f64) -> f64 {
        self.margin + (v - self.x0) * self.sx
    }

    // SVG y grows downward
    fn y(&self, v: f64) -> f64 {
        self.height - self.margin - (v - self.y0) * self.sy
    }
}

/// Scatter plot keyed to solution counts: disc for one fixed point, box
/// for three, diamond otherwise (red when zero or degenerate, green for
/// other counts).  Grids with three swept axes project onto the first two.
pub fn grid_scatter_svg(grid: &GridResult) -> String {
    let mut body = String::new();
    let xs: Vec<f64> = grid.points.iter().map(|p| rat_f64(&p.coords[0])).collect();
    let ys: Vec<f64> = grid
        .points
        .iter()
        .map(|p| p.coords.get(1).map(rat_f64).unwrap_or(0.0))
        .collect();
    let frame = Frame::fit(&xs, &ys, 720.0, 540.0);
    for (p, (x, y)) in grid.points.iter().zip(xs.iter().zip(&ys)) {
        let cx = frame.x(*x);
        let cy = frame.y(*y);
        let glyph = match (p.status, p.count) {
            (PointStatus::Ok, 1) => {
                format!("<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"4\" fill=\"#f5c518\"/>")
            }
            (PointStatus::Ok, 3) => format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"8\" height=\"8\" fill=\"#2a6fdb\"/>",
                cx - 4.0,
                cy - 4.0
            ),
            (status, n) => {
                let fill = if status != PointStatus::Ok || n == 0 {
                    "#d64545"
                } else {
                    "#3aa655"
                };
                format!(
                    "<path d=\"M {cx:.2} {:.2} L {:.2} {cy:.2} L {cx:.2} {:.2} L {:.2} {cy:.2} Z\" fill=\"{fill}\"/>",
                    cy - 5.0,
                    cx + 5.0,
                    cy + 5.0,
                    cx - 5.0
                )
            }
        };
        body.push_str("  ");
        body.push_str(&glyph);
        body.push('\n');
    }
    svg_document(frame.width, frame.height, &axis_labels(grid, &frame), &body)
}

fn axis_labels(grid: &GridResult, frame: &Frame) -> String {
    let x_name = grid.swept.first().cloned().unwrap_or_default();
    let y_name = grid.swept.get(1).cloned().unwrap_or_default();
    format!(
        "  <text x=\"{:.0}\" y=\"{:.0}\" font-size=\"14\">{}</text>\n  <text x=\"12\" y=\"{:.0}\" font-size=\"14\">{}</text>\n",
        frame.width / 2.0,
        frame.height - 8.0,
        x_name,
        frame.margin / 2.0 + 8.0,
        y_name
    )
}

fn svg_document(width: f64, height: f64, labels: &str, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{labels}{body}</svg>\n"
    )
}

/// Shaded region cells: each cell is a list of (x, lower y, upper y)
/// columns sampled across its base interval.
pub struct CellShape {
    pub columns: Vec<(f64, f64, f64)>,
    pub multistationary: bool,
}

pub fn region_svg(cells: &[CellShape], x_name: &str, y_name: &str) -> String {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for c in cells {
        for (x, lo, hi) in &c.columns {
            xs.push(*x);
            ys.push(*lo);
            ys.push(*hi);
        }
    }
    let frame = Frame::fit(&xs, &ys, 720.0, 540.0);
    let mut body = String::new();
    for cell in cells {
        if cell.columns.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, (x, lo, _)) in cell.columns.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd} {:.2} {:.2} ", frame.x(*x), frame.y(*lo)));
        }
        for (x, _, hi) in cell.columns.iter().rev() {
            d.push_str(&format!("L {:.2} {:.2} ", frame.x(*x), frame.y(*hi)));
        }
        d.push('Z');
        let fill = if cell.multistationary { "#2a6fdb" } else { "#f5c518" };
        body.push_str(&format!(
            "  <path d=\"{d}\" fill=\"{fill}\" fill-opacity=\"0.6\" stroke=\"#333\" stroke-width=\"0.5\"/>\n"
        ));
    }
    let labels = format!(
        "  <text x=\"360\" y=\"532\" font-size=\"14\">{x_name}</text>\n  <text x=\"12\" y=\"28\" font-size=\"14\">{y_name}</text>\n"
    );
    svg_document(frame.width, frame.height, &labels, &body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointsolve::GridPoint;
    use crate::rat::rat_int;

    fn tiny_grid() -> GridResult {
        GridResult {
            swept: vec!["k19".into(), "k17".into()],
            points: vec![
                GridPoint {
                    coords: vec![rat_int(200), rat_int(100)],
                    count: 1,
                    status: PointStatus::Ok,
                },
                GridPoint {
                    coords: vec![rat_int(500), rat_int(100)],
                    count: 3,
                    status: PointStatus::Ok,
                },
            ],
        }
    }

    #[test]
    fn csv_shape() {
        let g = tiny_grid();
        let csv = grid_csv(&g);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k19,k17,count,status");
        assert_eq!(lines[1], "200,100,1,ok");
        assert_eq!(lines[2], "500,100,3,ok");
        // empty grid: header only
        let empty = GridResult { swept: vec!["a".into()], points: vec![] };
        assert_eq!(grid_csv(&empty).lines().count(), 1);
    }

    #[test]
    fn json_rationals_exact() {
        let g = tiny_grid();
        let v = grid_json(&g);
        assert_eq!(v["points"][0]["coords"][0], "200/1");
        assert_eq!(v["points"][1]["count"], 3);
    }

    #[test]
    fn svg_glyphs() {
        let g = tiny_grid();
        let svg = grid_scatter_svg(&g);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<svg"));
        assert!(svg.contains("<circle"), "count-1 disc present");
        assert!(svg.contains("<rect x="), "count-3 box present");
        // empty input still yields a valid document
        let empty = GridResult { swept: vec![], points: vec![] };
        let svg2 = grid_scatter_svg(&empty);
        assert!(svg2.contains("</svg>"));
    }

    #[test]
    fn region_cells_render() {
        let cells = vec![
            CellShape {
                columns: vec![(0.0, 0.0, 1.0), (1.0, 0.2, 1.2)],
                multistationary: true,
            },
            CellShape {
                columns: vec![(0.0, 1.0, 2.0), (1.0, 1.2, 2.2)],
                multistationary: false,
            },
        ];
        let svg = region_svg(&cells, "k17", "k19");
        assert_eq!(svg.matches("<path").count(), 2);
    }
}
