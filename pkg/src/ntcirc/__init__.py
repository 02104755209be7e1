"""Universal circuits for near-trivial transformations.

Synthesis of angle-encoded rotation circuits, the universal single-qubit
circuit, the near-trivial circuit family C_a / C_b / C_U / C_U', a factorizer
from arbitrary unitaries into near-trivial transformations, and a dense
statevector simulator that checks every construction against exact matrix
oracles.
"""

from .circuit import (
    Circuit,
    Control,
    Gate,
    RegisterLayout,
    compose,
    format_circuit,
    gate_set_report,
    inverse,
    parse_circuit,
    shift,
    universal_set_ok,
)
from .decompose import (
    NearTrivialSequence,
    build_two_level_circuit,
    compile_unitary,
    factor_unitary,
    gray_code,
)
from .encoders import (
    AngleEncoding,
    build_controlled_block,
    build_rotation_encoder,
    build_single_qubit_universal,
    encode_angle,
    encode_single_qubit,
)
from .neartrivial import (
    EncodedProgram,
    NearTrivialSpec,
    apply_near_trivial,
    build_ca,
    build_cb_exact,
    build_cb_universal,
    build_cu_exact,
    build_cu_universal,
    encode_spec,
    format_programs,
    parse_programs,
)
from .qmath import (
    ZYZAngles,
    distance_up_to_global_phase,
    elementary_matrix,
    embed_two_level,
    format_matrix,
    is_unitary,
    near_trivial_matrix,
    operator_distance,
    parse_matrix,
    zyz_decompose,
    zyz_matrix,
)
from .simulator import (
    CapacityError,
    apply_gate,
    basis_state,
    circuit_unitary,
    effective_data_operator,
    format_state,
    parse_state,
    run,
)

__version__ = "0.1.0"
