"""Bit-true emulation of hybrid temporal-computing MAC arithmetic.

Operands are N-bit fractional binary words carried as 2**N-cycle
bitstreams; multiplication gates a regulated stream against a temporal
stream, and four accumulator designs (exact binary, threshold-scaled,
counting, and MUX-scaled) turn M product streams back into numbers.
"""

from .adders import (
    DtsaState,
    cycle_sum,
    dtsa_mac_out,
    dtsa_run,
    dtsa_step,
    emba_accumulate,
    emba_mac_out,
    mux_add_stream,
)
from .encodings import (
    BinaryWord,
    Bitstream,
    Polarity,
    StreamFormat,
    decode_stream,
    dequantize,
    ones_count,
    quantize,
    stream_from_string,
)
from .generators import (
    LFSR_DEFAULT_SEED,
    LfsrState,
    gb_to_tb,
    lfsr_from_seed,
    lfsr_next,
    ones_budget,
    rb_bit,
    rb_generate,
    tb_generate,
)
from .mac import MacConfig, MacResult, MacVariant, mac_chain_dtsa, mac_run, mac_tiled
from .metrics import ErrorReport, ImageMetrics, exact_dot, image_metrics, mac_benchmark
from .multipliers import CbscProduct, cbsc_mul_bipolar, cbsc_mul_unipolar, htc_mul_stream
from .dsp import (
    DctMatrix,
    FirKernel,
    ImageBuffer,
    PgmError,
    dct8_matrix,
    dct_pipeline,
    fir_filter,
    gaussian_taps,
    pgm_read,
    pgm_write,
)

__version__ = "0.1.0"
