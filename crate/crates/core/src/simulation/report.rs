use std::fmt::Write;

use super::ScenarioReport;

pub const REPORT_HEADER: &str =
    "scenario_id,procedure,mean_sep,se_sep,mean_signs,se_signs,replicates";

/// `x` with 17 significant digits in the style of C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Report rows as CSV with LF line endings.
pub fn report_csv(reports: &[ScenarioReport]) -> String {
    let mut out = String::new();
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for rep in reports {
        for row in &rep.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                csv_field(&rep.scenario_id),
                row.procedure,
                format_g17(row.mean_sep),
                format_g17(row.se_sep),
                format_g17(row.mean_signs),
                format_g17(row.se_signs),
                row.replicates
            )
            .expect("writing to a string");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        // Expected strings from printf("%.17g").
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (123.5, "123.5"),
            (1e-5, "1.0000000000000001e-05"),
            (0.0001, "0.0001"),
            (1e17, "1e+17"),
            (12345678901234567.0, "12345678901234568"),
            (-2.5, "-2.5"),
            (1.0 / 3.0, "0.33333333333333331"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g17(x), want, "{x}");
        }
        assert_eq!(format_g17(0.0), "0");
    }

    #[test]
    fn round_trips() {
        for x in [0.1, 2.0 / 3.0, 1e-300, 6.02e23, 0.030743] {
            assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn quotes_awkward_ids() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain/tau=0.1"), "plain/tau=0.1");
    }
}
