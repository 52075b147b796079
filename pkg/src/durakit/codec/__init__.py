"""Working erasure codecs: Reed-Solomon over GF(256) and the 6+2+2 LRC."""

from .fragments import (
    Fragment,
    FragmentRole,
    fragment_from_bytes,
    fragment_to_bytes,
    read_fragment,
    write_fragment,
)
from .lrc import LRC_6_2_2, LrcScheme, lrc_decode, lrc_encode, lrc_recoverable
from .repair import (
    RecoverabilityReport,
    RecoverabilityRow,
    RepairPlan,
    recoverability_report,
    repair_plan,
)
from .rs import rs_decode, rs_encode

__all__ = [
    "Fragment",
    "FragmentRole",
    "LRC_6_2_2",
    "LrcScheme",
    "RecoverabilityReport",
    "RecoverabilityRow",
    "RepairPlan",
    "fragment_from_bytes",
    "fragment_to_bytes",
    "lrc_decode",
    "lrc_encode",
    "lrc_recoverable",
    "read_fragment",
    "recoverability_report",
    "repair_plan",
    "rs_decode",
    "rs_encode",
    "write_fragment",
]
