"""Colored multiple zeta values: exact cyclotomic arithmetic, q-sums at
roots of unity, symmetric and finite evaluations, and relation discovery."""

from .cli import RunConfig
from .cli import main as cli_main
from .cyclotomic import CycNum, cyclotomic_polynomial, embed_complex, euler_phi
from .fq import (
    BadPrimeError,
    Fq,
    FqContext,
    inverse_table,
    is_prime,
    make_fq_context,
    right_kernel,
    to_residue_field,
)
from .finite import (
    CongruenceIndex,
    PrimeClass,
    ResidueTable,
    build_residue_table,
    congruence_from_colored,
    congruence_residue,
    finite_residue,
    format_congruence_index,
    parse_congruence_index,
    primes_in_class,
    store_records,
)
from .lattice import IntLattice, lll_reduce, rational_reconstruct
from .qsums import (
    QSumRequest,
    asymptotic_probe,
    field_op_counter,
    qsum_exact,
    qsum_half_numeric,
    qsum_numeric,
    sweep,
    truncated_cmzv_exact,
    truncated_cmzv_numeric,
)
from .relations import (
    DimConfig,
    DimensionReport,
    RelationCandidate,
    check_linear_shuffle_finite,
    check_linear_shuffle_symmetric,
    check_reversal_finite,
    dimension_table,
    discover_relations_lll,
    enumerate_generators,
    evaluate_colored_row,
    exact_relation_rank,
    linear_shuffle_relations,
    linear_shuffle_row,
    mt_dimension,
    reversal_relations_colored,
    reversal_relations_congruence,
)
from .symmetric import (
    MzvEvalConfig,
    RegPoly,
    SymmetricValue,
    harmonic_regularized_mzv,
    mzv_numeric,
    reg_correction_coefficients,
    regularization_relation_residual,
    shuffle_regularized_mzv,
    symmetric_cmzv,
)
from .words import (
    Index,
    LinComb,
    Word,
    cumulate_roots,
    difference_roots,
    format_index,
    harmonic_product,
    harmonic_regularize,
    index_to_word,
    indices_of_weight,
    parse_index,
    shuffle_product,
    shuffle_regularize,
    word_to_index,
)

__all__ = [
    "BadPrimeError",
    "CongruenceIndex",
    "CycNum",
    "DimConfig",
    "DimensionReport",
    "Fq",
    "FqContext",
    "Index",
    "IntLattice",
    "LinComb",
    "MzvEvalConfig",
    "PrimeClass",
    "QSumRequest",
    "RegPoly",
    "RelationCandidate",
    "ResidueTable",
    "RunConfig",
    "SymmetricValue",
    "Word",
    "asymptotic_probe",
    "build_residue_table",
    "check_linear_shuffle_finite",
    "check_linear_shuffle_symmetric",
    "check_reversal_finite",
    "cli_main",
    "congruence_from_colored",
    "congruence_residue",
    "cumulate_roots",
    "cyclotomic_polynomial",
    "difference_roots",
    "dimension_table",
    "discover_relations_lll",
    "embed_complex",
    "enumerate_generators",
    "euler_phi",
    "evaluate_colored_row",
    "exact_relation_rank",
    "field_op_counter",
    "finite_residue",
    "format_congruence_index",
    "format_index",
    "harmonic_product",
    "harmonic_regularize",
    "harmonic_regularized_mzv",
    "index_to_word",
    "indices_of_weight",
    "inverse_table",
    "is_prime",
    "linear_shuffle_relations",
    "linear_shuffle_row",
    "lll_reduce",
    "make_fq_context",
    "mt_dimension",
    "mzv_numeric",
    "parse_congruence_index",
    "parse_index",
    "primes_in_class",
    "qsum_exact",
    "qsum_half_numeric",
    "qsum_numeric",
    "rational_reconstruct",
    "reg_correction_coefficients",
    "regularization_relation_residual",
    "reversal_relations_colored",
    "reversal_relations_congruence",
    "right_kernel",
    "shuffle_product",
    "shuffle_regularize",
    "shuffle_regularized_mzv",
    "store_records",
    "sweep",
    "symmetric_cmzv",
    "to_residue_field",
    "truncated_cmzv_exact",
    "truncated_cmzv_numeric",
    "word_to_index",
]
