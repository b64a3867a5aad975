"""Default numeric tolerances of the operator lab (kept import-light for the CLI)."""

INDEX_TOLERANCE = 1e-9
SUPERTRACE_TOLERANCE = 1e-12
DEFAULT_T_GRID = (0.1, 1.0, 10.0)
