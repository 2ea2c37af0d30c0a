"""Computational models for reflection-symmetric monopole moduli: exact
complex polynomial algebra, su(k) involution machinery, rational-map
membership tests and samplers, transverse Hilbert scheme charts on the D0/D1
surfaces with the sign quotient and its fibers, Nahm flow integration with
invariant monitors, and spectral-curve section calculus."""

from .polyalg import (
    DEFAULT_TOL,
    Poly,
    ToleranceContext,
    even_odd_assemble,
    even_odd_split,
    poly_divmod,
    poly_interpolate,
    poly_modinv,
    poly_resultant,
    poly_roots,
)
from .liealg import (
    ResidueTriple,
    form_matrix_J,
    is_in_sigma_subalgebra,
    principal_residues,
    sigma,
    transvectant,
)
from .moduli import (
    BasedRationalMap,
    CompanionData,
    companion_matrix,
    is_nk_member,
    is_strongly_centred,
    rational_map_from_su,
    sample_nk,
)
from .hilb import (
    D0Point,
    D1Point,
    cover_map_on_maps,
    d0_to_map,
    d1_to_map,
    fiber,
    map_to_d0,
    map_to_d1,
    quotient_map,
    z2_act,
)
from .nahm import (
    FlowControls,
    FlowReport,
    NahmState,
    beta_spectrum_drift,
    extend_by_involution,
    integrate,
    nahm_rhs,
    pole_model_state,
    symmetric_pair_table,
)
from .spectral import (
    CurvePoly,
    SpectralSection,
    build_sbar,
    eval_on_zero_section,
    rescale_curve,
    sample_norm_one_section,
    section_product_check,
)

__version__ = "0.1.0"
