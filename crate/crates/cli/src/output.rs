//! Deterministic text emission. All floating-point values are printed with
//! 17 significant digits so fixtures round-trip exactly.

use spectra_core::{SliceMethod, SpectrumSlice64};

pub fn fmt(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn method_name(method: SliceMethod) -> &'static str {
    match method {
        SliceMethod::PolyOracle => "poly_oracle",
        SliceMethod::DwNewtonCertified => "dw_newton_certified",
        SliceMethod::ClosedForm => "closed_form",
    }
}

/// JSON fragment for the real zeros: `null` when the real spectrum is not
/// defined for the measure model.
pub fn real_zeros_json(slice: &SpectrumSlice64) -> String {
    match &slice.real_zeros {
        None => "null".to_owned(),
        Some(zeros) => {
            let items: Vec<String> = zeros
                .iter()
                .map(|z| {
                    format!(
                        "{{\"value\":{},\"bracket\":[{},{}]}}",
                        fmt(z.value),
                        fmt(z.bracket.0),
                        fmt(z.bracket.1)
                    )
                })
                .collect();
            format!("[{}]", items.join(","))
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn spectrum_csv(slices: &[SpectrumSlice64]) -> String {
    let mut out = String::from("n,re_w,im_w,method,certified,real_zeros_json\n");
    for slice in slices {
        let (re_w, im_w) = match slice.nonreal_pair {
            Some((w, _)) => (fmt(w.re), fmt(w.im)),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            slice.n,
            re_w,
            im_w,
            method_name(slice.method),
            slice.conclusive,
            csv_field(&real_zeros_json(slice))
        ));
    }
    out
}

pub fn complex_json(w: num_complex::Complex<f64>) -> String {
    format!("{{\"re\":{},\"im\":{}}}", fmt(w.re), fmt(w.im))
}

pub fn spectrum_json(slices: &[SpectrumSlice64]) -> String {
    let items: Vec<String> = slices
        .iter()
        .map(|slice| {
            let pair = match slice.nonreal_pair {
                Some((w, _)) => complex_json(w),
                None => "null".to_owned(),
            };
            format!(
                "{{\"n\":{},\"nonreal\":{},\"method\":\"{}\",\"certified\":{},\"real_zeros\":{}}}",
                slice.n,
                pair,
                method_name(slice.method),
                slice.conclusive,
                real_zeros_json(slice)
            )
        })
        .collect();
    format!("{{\"slices\":[{}]}}\n", items.join(","))
}
