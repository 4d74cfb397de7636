//! Static SVG rendering of spectrum slices: real zeros as axis ticks,
//! non-real pairs as mirrored points, and the asymptotic prediction as an
//! overlay polyline when a closed-form formula applies. Output is fully
//! deterministic: fixed canvas, elements emitted in mode order.

use spectra_core::{predict, EquationSystem64, SpectrumSlice64};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;

struct Frame {
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
}

impl Frame {
    fn x(&self, re: f64) -> f64 {
        MARGIN + (re - self.re_min) / (self.re_max - self.re_min) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, im: f64) -> f64 {
        // SVG y grows downward.
        HEIGHT - MARGIN - (im - self.im_min) / (self.im_max - self.im_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn coord(v: f64) -> String {
    format!("{:.3}", v)
}

pub fn render(sys: &EquationSystem64, slices: &[SpectrumSlice64]) -> String {
    let mut re_lo = f64::INFINITY;
    let mut re_hi = f64::NEG_INFINITY;
    let mut im_hi = f64::NEG_INFINITY;
    let mut track = |re: f64, im: f64| {
        re_lo = re_lo.min(re);
        re_hi = re_hi.max(re);
        im_hi = im_hi.max(im.abs());
    };
    for slice in slices {
        if let Some((w, _)) = slice.nonreal_pair {
            track(w.re, w.im);
        }
        for z in slice.real_zeros.iter().flatten() {
            track(z.value, 0.0);
        }
    }
    if !re_lo.is_finite() {
        // Empty spectrum: axes only on a unit frame.
        re_lo = -1.0;
        re_hi = 1.0;
        im_hi = 1.0;
    }
    let pad_re = 0.05 * (re_hi - re_lo).max(1.0);
    let pad_im = 0.05 * im_hi.max(1.0);
    let frame = Frame {
        re_min: (re_lo - pad_re).min(-pad_re),
        re_max: (re_hi + pad_re).max(pad_re),
        im_min: -(im_hi + pad_im),
        im_max: im_hi + pad_im,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        coord(MARGIN),
        coord(frame.y(0.0)),
        coord(WIDTH - MARGIN),
        coord(frame.y(0.0))
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        coord(frame.x(0.0)),
        coord(MARGIN),
        coord(frame.x(0.0)),
        coord(HEIGHT - MARGIN)
    ));

    // Prediction overlay, one vertex per computed mode.
    let overlay: Vec<String> = slices
        .iter()
        .filter_map(|slice| predict(sys, slice.n, None).ok())
        .filter(|p| {
            p.predicted.re >= frame.re_min
                && p.predicted.re <= frame.re_max
                && p.predicted.im <= frame.im_max
        })
        .map(|p| format!("{},{}", coord(frame.x(p.predicted.re)), coord(frame.y(p.predicted.im))))
        .collect();
    if overlay.len() >= 2 {
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n",
            overlay.join(" ")
        ));
    }

    for slice in slices {
        for z in slice.real_zeros.iter().flatten() {
            let x = coord(frame.x(z.value));
            svg.push_str(&format!(
                "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#1a6b1a\" stroke-width=\"1.5\"/>\n",
                coord(frame.y(0.0) - 6.0),
                coord(frame.y(0.0) + 6.0)
            ));
        }
        if let Some((w, _)) = slice.nonreal_pair {
            for im in [w.im, -w.im] {
                svg.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#b03030\"/>\n",
                    coord(frame.x(w.re)),
                    coord(frame.y(im))
                ));
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}
