"""Atom codes for the graded differential polynomial ring.

An atom is one generator of the free differential ring: a bosonic jet
d^k phi, an odd (Grassmann) jet d^k psibar, a time-derivative jet held
symbolic until a rewrite system eliminates it, or the constant odd
parameter epsbar used by supersymmetry variations.

Atoms are packed into ints so monomial keys compare and hash fast:

    code = label << 16 | kind << 12 | flow << 8 | order

Packing the label first makes plain integer comparison realize the global
odd-atom order (field label first, then derivative order), which keeps
golden files stable.
"""

from __future__ import annotations

# label ids in lexicographic order of their names
LABELS = (
    "b1", "epsbar", "f1", "phi", "phi1", "phi2", "phim", "phip",
    "psi", "psib", "psib1", "psib2", "psibm", "psibp", "u",
)
LABEL_ID = {name: i for i, name in enumerate(LABELS)}

ODD_LABELS = frozenset(
    {"epsbar", "f1", "psi", "psib", "psib1", "psib2", "psibm", "psibp"}
)
# atoms whose x-derivative vanishes
CONSTANT_LABELS = frozenset({"epsbar"})

FLOWS = ("x", "t1", "t3", "t5", "tm1")
FLOW_ID = {name: i for i, name in enumerate(FLOWS)}

KIND_JET = 0
KIND_TJET = 1

_KIND_SHIFT = 12
_FLOW_SHIFT = 8
_LABEL_SHIFT = 16
MAX_ORDER = 255


def jet(label: str, order: int = 0) -> int:
    """Plain x-jet atom d^order(label)."""
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"jet order {order} out of range")
    return (LABEL_ID[label] << _LABEL_SHIFT) | (KIND_JET << _KIND_SHIFT) | order


def tjet(flow: str, label: str, order: int = 0) -> int:
    """Symbolic time derivative d_t d^order_x (label)."""
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"jet order {order} out of range")
    return ((LABEL_ID[label] << _LABEL_SHIFT)
            | (KIND_TJET << _KIND_SHIFT)
            | (FLOW_ID[flow] << _FLOW_SHIFT) | order)


def label_of(code: int) -> str:
    return LABELS[code >> _LABEL_SHIFT]


def label_id_of(code: int) -> int:
    return code >> _LABEL_SHIFT


def kind_of(code: int) -> int:
    return (code >> _KIND_SHIFT) & 0xF


def flow_of(code: int) -> str:
    return FLOWS[(code >> _FLOW_SHIFT) & 0xF]


def order_of(code: int) -> int:
    return code & 0xFF


def with_order(code: int, order: int) -> int:
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"jet order {order} out of range")
    return (code & ~0xFF) | order


def is_odd_atom(code: int) -> bool:
    return LABELS[code >> _LABEL_SHIFT] in ODD_LABELS


def is_constant(code: int) -> bool:
    return LABELS[code >> _LABEL_SHIFT] in CONSTANT_LABELS


def atom_name(code: int) -> str:
    """Readable, parseable atom name, e.g. ``phi.2`` or ``psib.0@t3``."""
    lbl = label_of(code)
    order = order_of(code)
    if kind_of(code) == KIND_TJET:
        return f"{lbl}.{order}@{flow_of(code)}"
    return f"{lbl}.{order}"


def parse_atom(text: str) -> int:
    if "@" in text:
        head, flow = text.split("@")
        lbl, order = head.split(".")
        return tjet(flow, lbl, int(order))
    lbl, order = text.split(".")
    return jet(lbl, int(order))


EPSBAR = jet("epsbar", 0)
