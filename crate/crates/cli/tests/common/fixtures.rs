/// Golden fixtures: file name under `tests/golden` and the arguments that produce it.
pub const FIXTURES: &[(&str, &[&str])] = &[
    (
        "kinematics.json",
        &["kinematics", "--E", "0.18", "--U", "0.5"],
    ),
    (
        "energies.csv",
        &["--format", "csv", "energies", "--U", "1", "--q", "2"],
    ),
    (
        "dwell.csv",
        &[
            "--format", "csv", "dwell", "--E", "0.18", "--U", "0.5", "--a", "2", "--b", "1", "--c",
            "2", "--sign", "minus",
        ],
    ),
    (
        "dwell-max.json",
        &["dwell-max", "--E", "0.18", "--U", "0.5"],
    ),
    (
        "libration.json",
        &["libration", "--E", "0.18", "--U", "0.5", "--q", "1"],
    ),
    (
        "libration-max.json",
        &["libration-max", "--E", "0.18", "--U", "0.5", "--q", "1"],
    ),
    (
        "libration-inf.csv",
        &[
            "--format",
            "csv",
            "libration-inf",
            "--E",
            "0.18",
            "--U",
            "0.5",
            "--q",
            "1",
            "--A",
            "100,1e4,1e6",
        ],
    ),
    (
        "trajectory.csv",
        &[
            "--format",
            "csv",
            "trajectory",
            "--E",
            "0.18",
            "--U",
            "0.5",
            "--a",
            "2",
            "--b",
            "1",
            "--c",
            "2",
            "--to",
            "3",
            "--n",
            "7",
        ],
    ),
    (
        "qshje-check.json",
        &[
            "qshje-check",
            "--E",
            "0.18",
            "--U",
            "0.5",
            "--a",
            "2",
            "--b",
            "1",
            "--c",
            "2",
            "--region",
            "free",
            "--x",
            "-2,-1,-0.5",
        ],
    ),
    (
        "coverage-sb.json",
        &[
            "coverage",
            "sb",
            "--E",
            "0.18",
            "--U",
            "0.5",
            "--past",
            "0.2,0",
            "--present",
            "0.5,20",
        ],
    ),
    (
        "coverage-sw.json",
        &[
            "coverage",
            "sw",
            "--U",
            "1",
            "--q",
            "2",
            "--parity",
            "odd",
            "--past",
            "-1,0",
            "--present",
            "0,5",
        ],
    ),
    (
        "coverage-report.csv",
        &[
            "--format",
            "csv",
            "coverage",
            "report",
            "--scenario",
            "sw-excited",
            "--U",
            "1",
            "--q",
            "2",
        ],
    ),
    (
        "connect.json",
        &[
            "connect",
            "--U",
            "1",
            "--q",
            "2",
            "--past",
            "-1,0",
            "--present",
            "1.5,30",
        ],
    ),
    (
        "sweep.csv",
        &[
            "--format",
            "csv",
            "sweep",
            "--quantity",
            "dwell-mono",
            "--param",
            "U",
            "--start",
            "0.3",
            "--end",
            "1.3",
            "--count",
            "11",
            "--E",
            "0.2",
        ],
    ),
    (
        "pretty.json",
        &[
            "--pretty", "dwell", "--E", "0.18", "--U", "0.5", "--a", "2", "--b", "1", "--c", "2",
        ],
    ),
];
