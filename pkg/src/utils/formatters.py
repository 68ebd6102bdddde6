"""
Formatting utilities for text reports.
"""
from typing import Dict, Iterable, List, Optional, Sequence

from sympy import factorint


def format_group(torsion: Sequence[int], free_rank: int) -> str:
    """
    Format an abelian group in divisibility-chain form.

    Args:
        torsion: Torsion orders d_1 | d_2 | ...
        free_rank: Rank of the free part

    Returns:
        "Z^f + Z/d1 + Z/d2 ...", "Z" for rank one, "0" for the trivial group
    """
    parts: List[str] = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " + ".join(parts) if parts else "0"


def primary_parts(torsion: Iterable[int]) -> List[int]:
    """Prime-power orders of the cyclic summands, sorted."""
    powers: List[int] = []
    for d in torsion:
        powers.extend(prime ** exponent for prime, exponent in factorint(d).items())
    return sorted(powers)


def format_primary(torsion: Sequence[int], free_rank: int) -> str:
    """Same group, torsion split into prime-power cyclic summands."""
    return format_group(primary_parts(torsion), free_rank)


def format_vector(vector: Sequence[int], basis: Sequence[str]) -> str:
    """
    Format an integer vector as a linear combination of basis names.

    Returns:
        e.g. "v1 - 2*v3", or "0" for the zero vector
    """
    text = ""
    for coefficient, name in zip(vector, basis):
        coefficient = int(coefficient)
        if coefficient == 0:
            continue
        magnitude = abs(coefficient)
        term = name if magnitude == 1 else f"{magnitude}*{name}"
        if not text:
            text = term if coefficient > 0 else f"-{term}"
        else:
            text += f" + {term}" if coefficient > 0 else f" - {term}"
    return text or "0"


def format_function(values: Dict[str, int]) -> str:
    if not values:
        return "(empty)"
    return ", ".join(f"{key}={value}" for key, value in values.items())


def format_order(order: Optional[int]) -> str:
    return "infinite" if order is None else str(order)


def format_check(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def format_table(rows: Iterable[Sequence[object]], headers: Sequence[str]) -> str:
    """Left-aligned plain-text table."""
    body = [[str(cell) for cell in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in body:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in body)
    return "\n".join(lines)
