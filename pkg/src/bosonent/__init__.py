"""Entanglement of random Boson states: symmetric tensors, spectral norms, nets and experiments."""

__version__ = "0.1.0"

from .tensor_core import (
    BosonState,
    MultiIndex,
    SymmetricTensor,
    TensorFileError,
    basis_tensor,
    boson_distance,
    dim_sym,
    expand_full,
    hs_inner,
    index_table,
    multiplicity,
    parse_tensor,
    product_tensor,
    rank,
    read_tensor,
    symmetrize,
    unrank,
    write_tensor,
)
from .sampling import RngSpec, haar_boson_state, haar_unit_vector, haar_unit_vectors
from .spectral import (
    basis_spectral_norm,
    brute_force_spectral_norm,
    dicke_entanglement,
    entanglement,
    overlap,
    spectral_norm,
)
from .nets import EpsilonNet, NetTooLarge, build_net, certified_upper_bound, covering_check, power_distance

__all__ = [
    "__version__",
    "BosonState",
    "MultiIndex",
    "SymmetricTensor",
    "TensorFileError",
    "basis_tensor",
    "boson_distance",
    "dim_sym",
    "expand_full",
    "hs_inner",
    "index_table",
    "multiplicity",
    "parse_tensor",
    "product_tensor",
    "rank",
    "read_tensor",
    "symmetrize",
    "unrank",
    "write_tensor",
    "RngSpec",
    "haar_boson_state",
    "haar_unit_vector",
    "haar_unit_vectors",
    "basis_spectral_norm",
    "brute_force_spectral_norm",
    "dicke_entanglement",
    "entanglement",
    "overlap",
    "spectral_norm",
    "EpsilonNet",
    "NetTooLarge",
    "build_net",
    "certified_upper_bound",
    "covering_check",
    "power_distance",
]
