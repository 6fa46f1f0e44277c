//! Text renderings shared by the CLI and the exporters.

use crate::dist::{to_f64, Dist};

/// Shortest decimal that agrees with `x` to 12 significant digits.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("float formatting");
    rounded.to_string()
}

/// `index,probability,numerator,denominator` rows for a level distribution,
/// one row per point of the support.
pub fn plot_data_csv(d: &Dist<usize>) -> String {
    let mut out = String::from("index,probability,numerator,denominator\n");
    for (j, w) in d.iter() {
        out.push_str(&format!("{j},{},{},{}\n", sig(to_f64(w)), w.numer(), w.denom()));
    }
    out
}

/// `element,probability` rows with decimal probabilities.
pub fn dist_csv<T: Ord + Clone, F: Fn(&T) -> String>(d: &Dist<T>, show: F) -> String {
    let mut out = String::from("element,probability\n");
    for (x, w) in d.iter() {
        out.push_str(&format!("{},{}\n", csv_field(&show(x)), sig(to_f64(w))));
    }
    out
}

/// Quote a CSV field when it contains a separator or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
