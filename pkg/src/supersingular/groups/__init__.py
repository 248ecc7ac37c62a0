from .core import (
    ConjSetId, Family, GroupElement, NotTriangularizable, Subgroup,
    all_conj_ids, conj_props_admissible, conjugate_into_borel, group_order,
    in_conj_set, is_member, multiplier, quotient_image_size, witness,
)

__all__ = [
    "ConjSetId", "Family", "GroupElement", "NotTriangularizable", "Subgroup",
    "all_conj_ids", "conj_props_admissible", "conjugate_into_borel",
    "group_order", "in_conj_set", "is_member", "multiplier",
    "quotient_image_size", "witness",
]
