"""
Application constants following SSOT (Single Source of Truth) principle.
All constants are centralized here for easy maintenance.
"""


class AppConstants:
    """Central repository for all application constants."""

    # File names
    REPORT_FILENAME = "report.json"
    TRAJECTORY_BASENAME = "trajectory"
    SCHEMA_DIRNAME = "schemas"
    MANIFOLD_SCHEMA_FILENAME = "manifold.schema.json"
    REPORT_SCHEMA_FILENAME = "report.schema.json"
    CONSTANTS_SCHEMA_FILENAME = "constants.schema.json"

    # Exit codes
    EXIT_PASS = 0
    EXIT_FAILURES = 1
    EXIT_INPUT_ERROR = 2

    # Encoding options
    ENCODING_OPTIONS = ["utf-8", "utf-8-sig"]

    # Numeric tolerances
    FLOW_DET_THRESHOLD = 1e-12
    SYMMETRY_TOLERANCE = 1e-10
    JACOBI_TOLERANCE = 1e-12
    NUMERIC_RANK_TOLERANCE = 1e-9
    SELF_SIMILAR_TOLERANCE = 1e-8

    # Report sections in output order
    REPORT_SECTIONS = [
        "structure",
        "trans_sasakian",
        "normality",
        "differential_forms",
        "curvature",
        "identities",
        "soliton",
        "discrepancies",
    ]
    COMMAND_SECTIONS = {
        "check": ["structure"],
        "report": REPORT_SECTIONS,
        "soliton": ["structure", "trans_sasakian", "soliton", "discrepancies"],
    }

    # Built-in example: three-dimensional trans-Sasakian manifold of type (0, -1)
    EXAMPLE_MANIFOLD = {
        "coordinates": ["x", "y", "z"],
        "frame": [
            ["exp(z)", "0", "0"],
            ["0", "exp(z)", "0"],
            ["0", "0", "1"],
        ],
        "metric": [
            ["1", "0", "0"],
            ["0", "1", "0"],
            ["0", "0", "-1"],
        ],
        "contact": {
            "phi": [
                ["0", "-1", "0"],
                ["1", "0", "0"],
                ["0", "0", "0"],
            ],
            "xi": ["0", "0", "1"],
        },
        "reference": {
            "ricci": {"e1,e1": "0", "e2,e2": "2", "e3,e3": "-2"},
            "lie_derivative_metric": {"e1,e1": "-2", "e2,e2": "-2", "e3,e3": "0"},
            "second_lie_derivative_metric": {"e1,e1": "4", "e2,e2": "4", "e3,e3": "0"},
            "alpha": "0",
            "beta": "-1",
            "phi_sectional": "1",
            "lambda_of_mu": "1 + mu/4",
        },
    }

    # Trajectory CSV layout: t, g upper triangle, k upper triangle, diagnostics
    CSV_TIME_COLUMN = "t"
    CSV_METRIC_PREFIX = "g"
    CSV_VELOCITY_PREFIX = "k"
    CSV_DIAGNOSTIC_COLUMNS = ["det", "r", "einstein_residual"]

    # Logging format
    LOG_FORMAT = "[%(asctime)s] [%(levelname)s] [Thread-%(thread)d] %(message)s"
    LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
