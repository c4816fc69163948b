"""Write-once-memory rewriting codes via binary erasure quantization."""

from .alist import AlistFormatError, read_alist, write_alist
from .constructions import (
    BchCode,
    ConjugatePair,
    DecodeFailure,
    EgLdpcCode,
    bch_decode,
    bch_encode,
    bch_generator_matrix,
    bch_parity_check,
    bch_syndromes,
    build_bch,
    build_conjugate_pair,
    build_eg_ldpc,
    build_mackay,
    build_mackay_profile,
    check_rows_in_bch,
    enumerate_mu_flats,
)
from .fields import Field, cyclotomic_cosets, minimal_polynomial
from .gf2 import (
    BitMatrix,
    asbits,
    complete_basis,
    multiply,
    null_space_basis,
    rank,
    rref,
    right_inverse,
)
from .rewriting import (
    ERASED,
    EncodeOutcome,
    RewriteCode,
    bec_mask,
    check_rewritable,
    dec,
    enc,
    erasure_decode,
    erasure_quantize,
    reconstruct,
)
from .schemes import (
    ChainScheme,
    ConcatScheme,
    SchemeFailure,
    SchemeReport,
    analytic_pd,
    build_chain_scheme,
    build_concat_scheme,
    chain_decode,
    chain_encode,
    chain_report,
    concat_decode,
    concat_encode,
    concat_report,
    conjugated_decode,
    conjugated_encode,
    conjugated_report,
)
from .sim import (
    SimConfig,
    SweepPoint,
    SweepResult,
    bsc_apply,
    run_rewrite_sweep,
    run_scheme_trials,
    sample_state,
    trial_stream,
    wilson_ci,
)
from .verify import run_verify

__version__ = "0.1.0"
