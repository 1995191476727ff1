"""Exact geometry of two-dimensional digital sequences in base 2.

Coordinates are dyadic rationals and every quantity is computed over the
integers: separation radii come out exact, covering radii and mesh ratios
come out as certified enclosing intervals, and the closed-form separation
law is checked against independent computation.  The ``dyadnet`` console
script exposes the same pipeline as subcommands.
"""

from ._version import __version__
from .digital import (
    MAX_SCALE,
    DyadicPoint,
    GeneratorPair,
    NetFailure,
    NetReport,
    PointSet,
    bit_reverse,
    check_elementary_intervals,
    classify_close_pair,
    close_pair_structure_ok,
    digital_point,
    prefix,
    prefix_naive,
    sample_close_pair,
    sobol_point,
    xor_prefix_is_block,
)
from .geometry import (
    DEFAULT_RESOLUTION,
    CoveringInterval,
    MeshRatioInterval,
    Norm,
    ResourceBudgetError,
    SeparationReport,
    cell_coradius,
    covering_certified,
    distance_to_set,
    mesh_ratio,
    mesh_ratio_from_parts,
    separation,
    separation_naive,
    separation_profile,
)
from .gf2 import (
    BitMatrix,
    BitVector,
    binary_expand,
    is_nonsingular,
    matvec,
    pascal_entry,
    pascal_matrix,
    pascal_structure_failures,
    pascal_times_ones,
)
from .reports import (
    format_exact,
    format_exponent,
    parse_exact,
    read_points,
    read_separation_rows,
    render_scaling_plot,
    write_analyze_row,
    write_points,
    write_separation_rows,
    write_sidecar,
    write_verify_rows,
)
from .theory import (
    CROSS_CHECK_CEILING,
    DecayBounds,
    DecompositionKind,
    MDecomposition,
    Pow2,
    VerifyOutcome,
    VerifyRow,
    decay_bounds,
    decompose,
    envelope_holds,
    mesh_growth_holds,
    run_verify,
    separation_envelope,
    separation_exponent,
    separation_formula,
    witness_distance,
    witness_pair,
)

__all__ = [
    "__version__",
    "MAX_SCALE",
    "DEFAULT_RESOLUTION",
    "CROSS_CHECK_CEILING",
    # generation
    "DyadicPoint",
    "GeneratorPair",
    "PointSet",
    "bit_reverse",
    "sobol_point",
    "digital_point",
    "prefix",
    "prefix_naive",
    # net and digit structure
    "NetFailure",
    "NetReport",
    "check_elementary_intervals",
    "classify_close_pair",
    "close_pair_structure_ok",
    "sample_close_pair",
    "xor_prefix_is_block",
    # GF(2) kernels
    "BitMatrix",
    "BitVector",
    "binary_expand",
    "is_nonsingular",
    "matvec",
    "pascal_entry",
    "pascal_matrix",
    "pascal_structure_failures",
    "pascal_times_ones",
    # metrics
    "Norm",
    "SeparationReport",
    "CoveringInterval",
    "MeshRatioInterval",
    "ResourceBudgetError",
    "separation",
    "separation_naive",
    "separation_profile",
    "covering_certified",
    "cell_coradius",
    "distance_to_set",
    "mesh_ratio",
    "mesh_ratio_from_parts",
    # closed form and bounds
    "DecompositionKind",
    "MDecomposition",
    "DecayBounds",
    "Pow2",
    "VerifyOutcome",
    "VerifyRow",
    "decompose",
    "decay_bounds",
    "separation_exponent",
    "separation_formula",
    "separation_envelope",
    "envelope_holds",
    "mesh_growth_holds",
    "witness_distance",
    "witness_pair",
    "run_verify",
    # tables and figures
    "format_exact",
    "format_exponent",
    "parse_exact",
    "read_points",
    "read_separation_rows",
    "render_scaling_plot",
    "write_analyze_row",
    "write_points",
    "write_separation_rows",
    "write_sidecar",
    "write_verify_rows",
]
