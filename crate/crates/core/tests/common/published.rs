//! Reference values as printed in the published tables, one column per
//! X = 10^4, 10^5, 10^6, 10^7, 10^8. Strings keep the printed precision.

pub const XS: [u64; 5] = [10_000, 100_000, 1_000_000, 10_000_000, 100_000_000];

/// (1/X) Σ λ(n).
pub const LAMBDA_MEAN: [&str; 5] = ["-0.0094", "-0.00288", "-0.00053", "-8.42E-05", "-3.88E-05"];

/// Decay factors between consecutive columns of LAMBDA_MEAN.
pub const LAMBDA_MEAN_DECAY: [&str; 4] = ["3.264", "5.434", "6.295", "2.170"];

/// C = (1/X) Σ λ(n)λ(n+h).
pub const LAMBDA_CORR: [(u64, [&str; 5]); 8] = [
    (
        1,
        ["0.0112", "0.00068", "-0.00111", "-0.000205", "-3.92E-05"],
    ),
    (2, ["0.0012", "0.00258", "6.80E-05", "0.000125", "4.63E-05"]),
    (
        3,
        ["-0.0038", "-0.00074", "-0.000424", "-0.000318", "0.000107"],
    ),
    (
        4,
        ["-0.0038", "0.0013", "-0.000706", "7.78E-05", "-1.83E-05"],
    ),
    (
        5,
        ["0.006", "-0.00176", "0.000132", "-0.000209", "1.68E-05"],
    ),
    (
        10,
        ["-0.0014", "-0.0002", "0.000102", "-0.000690", "-5.11E-05"],
    ),
    (
        100,
        ["0.0022", "0.00252", "0.000216", "0.000152", "-2.95E-05"],
    ),
    (
        1000,
        ["-0.0098", "-0.00412", "-0.00128", "9.98E-05", "0.000121"],
    ),
];

/// Sweep statistics over h = 1..1000, rows in table order:
/// mean |C|, max |C|, intercept b, slope m, R², correlation with h.
pub const LAMBDA_SWEEP: [(&str, [&str; 5]); 6] = [
    (
        "mean_abs",
        ["0.00746", "0.00250", "0.000757", "0.000240", "7.96E-05"],
    ),
    (
        "max_abs",
        ["0.0414", "0.0113", "0.00334", "0.00100", "0.000324"],
    ),
    (
        "intercept_b",
        [
            "0.000685",
            "0.000225",
            "-1.29E-05",
            "-3.50E-05",
            "-2.22E-05",
        ],
    ),
    (
        "slope_m",
        ["-1.51E-06", "-2.45E-07", "1.64E-08", "5.25E-08", "2.67E-08"],
    ),
    (
        "r_squared",
        ["0.00202", "0.000514", "2.47E-05", "0.00254", "0.00619"],
    ),
    (
        "pearson_r",
        ["-0.0450", "-0.0227", "0.00497", "0.0504", "0.0787"],
    ),
];

/// χ² statistic Q for λ(n), λ(n+h).
pub const LAMBDA_CHISQ: [(u64, [&str; 5]); 12] = [
    (1, ["1.23490", "0.04512", "1.22829", "0.41946", "0.15336"]),
    (2, ["0.01236", "0.66141", "0.00459", "0.15523", "0.21454"]),
    (3, ["0.15107", "0.05599", "0.18001", "1.01128", "1.14787"]),
    (4, ["0.15107", "0.16687", "0.49883", "0.06052", "0.03364"]),
    (5, ["0.34998", "0.31265", "0.01735", "0.43684", "0.02808"]),
    (10, ["0.02210", "0.00433", "0.01035", "4.75834", "0.26134"]),
    (100, ["0.04484", "0.63111", "0.04654", "0.23224", "0.08692"]),
    (107, ["0.12131", "1.23363", "0.01857", "6.95901", "4.48429"]),
    (391, ["0.72065", "3.03895", "3.59377", "2.20894", "3.85567"]),
    (760, ["0.01148", "4.88087", "0.12269", "3.68700", "9.38083"]),
    (923, ["1.10632", "0.54436", "0.03470", "4.80258", "4.64668"]),
    (
        1000,
        ["0.97609", "1.70345", "1.62886", "0.09959", "1.45488"],
    ),
];

/// (1/Y₁) Σ μ(n).
pub const MOEBIUS_MEAN: [&str; 5] = ["-0.00378", "-0.000790", "0.000349", "0.000171", "3.17E-05"];

/// D = (1/Y₂) Σ μ(n)μ(n+h).
pub const MOEBIUS_CORR: [(u64, [&str; 5]); 8] = [
    (
        1,
        ["0.00372", "-0.00580", "0.00127", "0.000522", "-8.15E-05"],
    ),
    (
        2,
        ["-0.00526", "0.00294", "-0.00119", "3.38E-05", "-3.07E-05"],
    ),
    (
        3,
        ["-0.00372", "-0.00353", "-0.000942", "4.25E-05", "3.87E-05"],
    ),
    (
        4,
        ["0.00371", "-0.000558", "-0.00108", "0.000189", "-0.000118"],
    ),
    (
        5,
        [
            "-0.000309",
            "-0.00316",
            "0.000496",
            "-0.000424",
            "-8.92E-05",
        ],
    ),
    (
        10,
        ["-0.0220", "-0.0104", "-0.00227", "-0.00159", "-0.000242"],
    ),
    (
        100,
        [
            "-0.00752",
            "-0.000436",
            "-0.000452",
            "-0.000581",
            "-4.42E-05",
        ],
    ),
    (
        1000,
        ["-0.0180", "-0.00596", "-0.00111", "-0.000289", "-4.15E-05"],
    ),
];

pub const MOEBIUS_SWEEP: [(&str, [&str; 5]); 6] = [
    (
        "mean_abs",
        ["0.0129", "0.00408", "0.00124", "0.000421", "0.000135"],
    ),
    (
        "max_abs",
        ["0.0850", "0.0185", "0.00625", "0.00168", "0.000555"],
    ),
    (
        "intercept_b",
        [
            "-0.000207",
            "0.000341",
            "-8.64E-05",
            "-5.88E-05",
            "-2.13E-05",
        ],
    ),
    (
        "slope_m",
        ["-6.39E-07", "-4.57E-07", "2.03E-07", "8.71E-08", "2.59E-08"],
    ),
    (
        "r_squared",
        ["0.000115", "0.000655", "0.00137", "0.00228", "0.00193"],
    ),
    (
        "pearson_r",
        ["-0.0107", "-0.0256", "0.0370", "0.0478", "0.0439"],
    ),
];

/// χ² statistic Q for μ(n), μ(n+h) over doubly square-free n.
pub const MOEBIUS_CHISQ: [(u64, [&str; 5]); 13] = [
    (1, ["0.04702", "1.08525", "0.51843", "0.87790", "0.21455"]),
    (2, ["0.09417", "0.27883", "0.45534", "0.00369", "0.03050"]),
    (3, ["0.04458", "0.40277", "0.28575", "0.00580", "0.04834"]),
    (4, ["0.06671", "0.01509", "0.56955", "0.17298", "0.67732"]),
    (5, ["0.00032", "0.32247", "0.07947", "0.58047", "0.25687"]),
    (10, ["1.56487", "3.47856", "1.65657", "8.11887", "1.89446"]),
    (100, ["0.28372", "0.00955", "0.10290", "1.70498", "0.09883"]),
    (109, ["0.08963", "0.00920", "3.16200", "6.10480", "9.35062"]),
    (298, ["0.00045", "0.21368", "0.37504", "4.28434", "7.50830"]),
    (374, ["0.07947", "1.56817", "1.24637", "7.02544", "4.29383"]),
    (391, ["0.12518", "1.08537", "3.34727", "4.02410", "8.32421"]),
    (923, ["0.01960", "0.43887", "1.08631", "5.14136", "5.38660"]),
    (
        1000,
        ["1.64232", "1.79404", "0.62100", "0.42049", "0.08692"],
    ),
];
