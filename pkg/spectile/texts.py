PROG = "spectile"
DESCRIPTION = (
    "Fourier checks for spectral sets and translational tilings of convex polytopes, "
    "and non-spectrality certificates for non-symmetric bodies."
)

HELP_FT_EVAL = "Evaluate the Fourier transform of a body's indicator at one frequency."
HELP_AUTOCORR = "Exact autocorrelation vol(P & (P + x)) at a point, or a CSV grid dump."
HELP_VERIFY_TILING = "Check that translates of a body by a lattice tile on a core window."
HELP_VERIFY_SPECTRUM = "Check orthogonality and completeness of a candidate spectrum on a window."
HELP_CERTIFY = "Issue a non-spectrality certificate for a non-symmetric body."
HELP_ANALYZE = "Symmetry, Brunn-Minkowski gap, then a certificate or a lattice spectrum sweep."
HELP_REFUTE = "Refute random density-one lattices as spectra of a body."
HELP_RUNS = "List recent runs from the ledger database."

HELP_BODY = "polytope JSON: {\"vertices\": [[\"p/q\", ...], ...]}"
HELP_LATTICE = "lattice JSON: {\"basis\": [[...], ...]} (generators are columns)"
HELP_SPECTRUM = "lattice JSON or point set JSON {\"points\": [...]}"
HELP_OUT = "write the report here instead of standard output"
HELP_DB = "SQLAlchemy URL of the run ledger (overrides SPECTILE_DATABASE_URL)"

USAGE_ERROR = "usage error: {message}"
IO_ERROR = "cannot read or write {path}: {reason}"
DOMAIN_ERROR = "{code}: {message}"
CONFIG_ERROR = "configuration error: {message}"
NO_LEDGER = "no ledger configured; pass --db or set SPECTILE_DATABASE_URL"
LEDGER_WRITE_FAILED = "Failed to record run in ledger"

REFUSED_SYMMETRIC = (
    "The body is centrally symmetric, so the Brunn-Minkowski gap vanishes and no certificate "
    "exists. Run `analyze` for the lattice tiling analysis instead."
)
CERTIFICATE_ISSUED = "Non-spectrality certificate issued."
NOT_CERTIFIED = "Symmetric body; tested the lattice spectra of its face-to-face tilings."
