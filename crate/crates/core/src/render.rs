//! SVG lattice drawings in the usual style: a generator with an arrow
//! `x -> U^a V^b y` sits `a` steps right and `b` steps up from `y`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write;

use crate::algebra::{Arrow, ArrowTag, BasedComplex, GenId};
use crate::error::{Error, Result};

const UNIT: i64 = 70;
const MARGIN: i64 = 50;

/// Lattice position of each generator, plus the arrows whose endpoints
/// disagree with the traversal by a diagonal shift `(k, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub positions: Vec<(i64, i64)>,
    pub shifted: BTreeMap<Arrow, i64>,
}

/// Breadth-first placement from the first generator of every component
/// using `pos(target) = pos(source) - (a, b)`.
///
/// When the two ends of `z` in a glued complex are reached along different
/// routes they disagree by a multiple of `(1, 1)`; such arrows are recorded
/// and drawn to their implied endpoint. Any other disagreement means the
/// gradings are not consistent and is an error.
pub fn layout(c: &BasedComplex) -> Result<Layout> {
    let n = c.generator_count();
    let mut pos: Vec<Option<(i64, i64)>> = vec![None; n];
    let mut adjacent: Vec<Vec<Arrow>> = vec![Vec::new(); n];
    for a in c.arrows() {
        adjacent[a.source.0].push(*a);
        adjacent[a.target.0].push(*a);
    }
    let mut shifted = BTreeMap::new();
    let mut next_origin = 0i64;
    for start in 0..n {
        if pos[start].is_some() {
            continue;
        }
        // Separate components are laid side by side.
        pos[start] = Some((next_origin, 0));
        let mut queue = VecDeque::from([start]);
        let mut max_x = next_origin;
        while let Some(i) = queue.pop_front() {
            let (px, py) = pos[i].expect("queued generators are placed");
            max_x = max_x.max(px);
            for a in &adjacent[i] {
                let (du, dv) = (a.monomial.u as i64, a.monomial.v as i64);
                let (other, want) = if a.source.0 == i {
                    (a.target.0, (px - du, py - dv))
                } else {
                    (a.source.0, (px + du, py + dv))
                };
                match pos[other] {
                    None => {
                        pos[other] = Some(want);
                        queue.push_back(other);
                    }
                    Some(have) if have == want => {}
                    Some(have) => {
                        let (dx, dy) = (have.0 - want.0, have.1 - want.1);
                        if dx != dy {
                            return Err(Error::Render(format!(
                                "{} placed at {:?} and {:?}",
                                c.name(GenId(other)),
                                have,
                                want
                            )));
                        }
                        shifted.entry(*a).or_insert(if a.source.0 == i { dx } else { -dx });
                    }
                }
            }
        }
        next_origin = max_x + 3;
    }
    Ok(Layout { positions: pos.into_iter().map(|p| p.expect("every generator placed")).collect(), shifted })
}

fn color(tag: Option<ArrowTag>) -> &'static str {
    match tag {
        Some(ArrowTag::Red) => "#c0392b",
        Some(ArrowTag::Blue) => "#2e6fd8",
        Some(ArrowTag::Green) => "#2e8b57",
        _ => "#111111",
    }
}

pub fn render_svg(c: &BasedComplex) -> Result<String> {
    let lay = layout(c)?;
    let mut xs: Vec<i64> = lay.positions.iter().map(|p| p.0).collect();
    let mut ys: Vec<i64> = lay.positions.iter().map(|p| p.1).collect();
    // Implied endpoints of shifted arrows must fit on the canvas too.
    for (a, &k) in &lay.shifted {
        let t = lay.positions[a.target.0];
        xs.push(t.0 - k);
        ys.push(t.1 - k);
    }
    let (min_x, max_x) = (*xs.iter().min().unwrap_or(&0), *xs.iter().max().unwrap_or(&0));
    let (min_y, max_y) = (*ys.iter().min().unwrap_or(&0), *ys.iter().max().unwrap_or(&0));
    let to_px = |p: (i64, i64)| (MARGIN + (p.0 - min_x) * UNIT, MARGIN + (max_y - p.1) * UNIT);
    let width = 2 * MARGIN + (max_x - min_x) * UNIT;
    let height = 2 * MARGIN + (max_y - min_y) * UNIT;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r#"<defs><marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="5" markerHeight="5" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/></marker></defs>"#
    );
    let _ = writeln!(svg, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for gx in min_x..=max_x {
        let (px, _) = to_px((gx, 0));
        let _ = writeln!(svg, r#"<line x1="{px}" y1="{MARGIN}" x2="{px}" y2="{}"/>"#, height - MARGIN);
    }
    for gy in min_y..=max_y {
        let (_, py) = to_px((0, gy));
        let _ = writeln!(svg, r#"<line x1="{MARGIN}" y1="{py}" x2="{}" y2="{py}"/>"#, width - MARGIN);
    }
    let _ = writeln!(svg, "</g>");

    for (a, tag) in c.tagged_arrows() {
        let shift = lay.shifted.get(a).copied();
        let s = to_px(lay.positions[a.source.0]);
        let t0 = lay.positions[a.target.0];
        let t = to_px(match shift {
            Some(k) => (t0.0 - k, t0.1 - k),
            None => t0,
        });
        // Stop short of the target dot.
        let (dx, dy) = ((t.0 - s.0) as f64, (t.1 - s.1) as f64);
        let len = (dx * dx + dy * dy).sqrt().max(1.0);
        let (ex, ey) = (t.0 as f64 - dx / len * 8.0, t.1 as f64 - dy / len * 8.0);
        let dash = if tag == Some(ArrowTag::Added) { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{ex:.1}" y2="{ey:.1}" stroke="{}" stroke-width="1.6"{dash} marker-end="url(#head)"><title>{}</title></line>"#,
            s.0,
            s.1,
            color(tag),
            c.describe(a)
        );
        if shift.is_some() {
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" font-size="11" font-family="sans-serif" fill="{}">{}</text>"#,
                t.0 + 4,
                t.1 + 14,
                color(tag),
                c.name(a.target)
            );
        }
    }
    for (i, g) in c.generators().iter().enumerate() {
        let (px, py) = to_px(lay.positions[i]);
        let _ = writeln!(svg, r#"<circle cx="{px}" cy="{py}" r="4" fill="black"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" font-family="sans-serif">{}</text>"#,
            px + 6,
            py - 6,
            g.name
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Bigrading, RingLevel};
    use crate::standard::{build_standard, SignSequence};

    #[test]
    fn c22_positions() {
        let c = build_standard(&SignSequence::new(vec![2, 2]).unwrap());
        let lay = layout(&c).unwrap();
        let origin = lay.positions[0];
        let rel: Vec<(i64, i64)> = lay.positions.iter().map(|p| (p.0 - origin.0, p.1 - origin.1)).collect();
        assert_eq!(rel, vec![(0, 0), (2, 0), (2, 2)]);
        let svg = render_svg(&c).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("marker-end").count(), 2);
    }

    #[test]
    fn single_dot() {
        let mut c = BasedComplex::new(RingLevel::R1);
        c.add_generator("a", Bigrading::new(0, 0)).unwrap();
        assert_eq!(layout(&c).unwrap().positions, vec![(0, 0)]);
        assert_eq!(render_svg(&c).unwrap().matches("<circle").count(), 1);
    }

    #[test]
    fn inconsistent_layout_is_an_error() {
        let mut c = BasedComplex::new(RingLevel::R1);
        let a = c.add_generator("a", Bigrading::new(0, 0)).unwrap();
        let b = c.add_generator("b", Bigrading::new(1, -1)).unwrap();
        c.add_arrow(a, crate::Monomial::new(1, 0), b);
        c.add_arrow(a, crate::Monomial::new(2, 0), b);
        assert!(matches!(layout(&c), Err(Error::Render(_))));
    }
}
