"""pointreg: two-scale smoothing of point-singularity fields.

Replaces the monopole/dipole singularities of classical electrodynamics by
smooth two-parameter families (cutoff length a, smoothing width eps),
evaluates the resulting nearly-singular radial integrals, and verifies the
closed-form asymptotics of self-energy, self-force, hidden momentum and
spin, including their exact 1/a cancellations.
"""

from .backend import BACKEND
from .embedding import (
    SingularTermFamily,
    TestFunction,
    TwoScale,
    delta_embed,
    delta_family,
    heaviside_embed,
    pair_with_test,
    power_heaviside_family,
    term_eval,
)
from .fields import (
    ElectronParams,
    RadialProfile,
    charge_density,
    coulomb_field,
    coulomb_potential,
    cross_profile,
    dipole_field,
    dipole_h1h2,
    sphere_direction,
)
from .kernels import (
    Regularizer,
    asymmetric_bump,
    compact_bump,
    gaussian,
    kernel_by_name,
    moment,
    normalize,
    tabulated,
    tabulated_from_csv,
)
from .observables import (
    AsymptoticValue,
    IdentityTag,
    Rn_analytic,
    Rn_numeric,
    delta_sq_prediction,
    delta_sq_weighted,
    identity_residual,
    moment_Mn_analytic,
    moment_Mn_numeric,
)
from .electron import (
    ObservableReport,
    comparison_report,
    dipole_delta_volume_integral,
    hidden_momentum,
    radial_self_force,
    self_energy_electric,
    self_energy_magnetic,
    spin,
)
from .quadrature import (
    QuadratureSpec,
    SphereGrid,
    fit_asymptotics,
    fit_power_law,
    integrate_radial,
    integrate_sphere,
)

__version__ = "0.1.0"
