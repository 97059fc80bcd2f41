from .dense import (
    Poly,
    add,
    clear_denominators,
    compose_scale,
    degree,
    derivative,
    divmod_poly,
    evaluate,
    from_json,
    from_roots,
    gcd_poly,
    integrate,
    is_integral,
    mul,
    normalize,
    scale,
    squarefree_part,
    sub,
    to_int_poly,
    to_json,
)
from .finite_field import (
    FpPoly,
    fp_distinct_linear_split,
    fp_factor_degrees,
    fp_is_irreducible,
    fp_is_squarefree,
)
from .resultant import discriminant, resultant
from .sturm import real_root_count, sturm_sequence

__all__ = [
    "Poly",
    "FpPoly",
    "add",
    "clear_denominators",
    "compose_scale",
    "degree",
    "derivative",
    "discriminant",
    "divmod_poly",
    "evaluate",
    "fp_distinct_linear_split",
    "fp_factor_degrees",
    "fp_is_irreducible",
    "fp_is_squarefree",
    "from_json",
    "from_roots",
    "gcd_poly",
    "integrate",
    "is_integral",
    "mul",
    "normalize",
    "real_root_count",
    "resultant",
    "scale",
    "squarefree_part",
    "sturm_sequence",
    "sub",
    "to_int_poly",
    "to_json",
]
