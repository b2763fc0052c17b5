"""Named sequence specs shared by the tests, with cached materialization."""

import functools

from slowdec import SequenceSpec, build_sequence

SPECS = {
    "integers": SequenceSpec("lattice"),
    "shifted": SequenceSpec("lattice", {"shift": 0.3}),
    "log_perturbed": SequenceSpec("perturbed", {"offset": "log1p_sq"}),
    "sparse_powers": SequenceSpec("lattice", {"exclude_powers_of": 2}),
    "perturbed_union": SequenceSpec("union", children=(
        SequenceSpec("perturbed", {"offset": "log_sq", "symmetric": True}),
        SequenceSpec("exp-sqrt", {"even": True}),
    )),
    "log_sq_perturbed": SequenceSpec("perturbed", {"offset": "log_sq"}),
    "lacunary": SequenceSpec("lacunary", {"ratio": 2}),
    "complex_log": SequenceSpec("even-closure", children=(
        SequenceSpec("complex-perturbed", {"imag_offset": "log1p"}),)),
    "complex_log_inflated": SequenceSpec("even-closure", children=(
        SequenceSpec("complex-perturbed", {"imag_offset": "log1p", "inflate": True}),)),
}

# radius that supports the default grids of every criterion up to x = 1e5
FULL_RADIUS = 1.3e6


@functools.lru_cache(maxsize=6)
def sequence(name, radius=FULL_RADIUS):
    return build_sequence(SPECS[name], radius)
