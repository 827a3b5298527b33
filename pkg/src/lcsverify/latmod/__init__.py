from .homology import TorusHomology, format_group, mapping_torus_homology
from .lemma import (
    HOLDS,
    VIOLATION,
    NormSequences,
    ResNilpVerdict,
    UnitLattice,
    exterior_power,
    find_unit_invariant_sublattice,
    is_unit_invariant,
    kron_char_poly,
    kron_power,
    lemma2_check_exterior,
    norm_report,
    norm_sequences,
    paper_matrix,
    stable_image_chain,
    structured_product_check,
    unit_divisors,
)
from .matrix import (
    IntMatrix,
    char_poly,
    companion,
    compound,
    det,
    hnf_rows,
    identity,
    intmat,
    invariant_factors,
    kernel_basis,
    poly_divides,
    poly_divmod,
    poly_eval_matrix,
    poly_str,
    smith_normal_form,
)
