"""Plain-text matrix files carrying a Hamiltonian and its couplings.

Grammar (whitespace-separated, blank lines ignored):

    n m
    <n rows of n complex entries>     # the Hamiltonian
    <m blocks of n rows each>         # the coupling operators

Complex entries use ``i`` for the imaginary unit in the form ``re``,
``re+imi``, ``re-imi`` or ``imi`` (e.g. ``1.5-0.25i``, ``2i``, ``-i``);
scientific notation is accepted in both parts.
"""

from __future__ import annotations

import re

import numpy as np

_LONE_I = re.compile(r"(^|[+-])j")


def parse_complex(token: str) -> complex:
    """Parse one complex entry written with a trailing ``i``."""
    cleaned = token.strip().replace("I", "i").replace("i", "j")
    cleaned = _LONE_I.sub(r"\g<1>1j", cleaned)
    try:
        return complex(cleaned)
    except ValueError:
        raise ValueError(f"cannot parse complex entry {token!r}") from None


def format_complex(z: complex) -> str:
    """Format a complex number in the file grammar with 17 digits."""
    re_part = format(z.real, ".17g")
    im_part = format(abs(z.imag), ".17g")
    sign = "-" if z.imag < 0 else "+"
    return f"{re_part}{sign}{im_part}i"


def loads(text: str):
    """Parse matrix-file text into (hamiltonian, [couplings])."""
    tokens: list[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if len(tokens) < 2:
        raise ValueError("matrix file must start with 'n m'")
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ValueError(f"bad header {tokens[:2]!r}; expected two integers") from None
    if n < 1 or m < 0:
        raise ValueError(f"bad dimensions n={n}, m={m}")
    need = 2 + (1 + m) * n * n
    if len(tokens) != need:
        raise ValueError(
            f"expected {need - 2} matrix entries for n={n}, m={m}; got {len(tokens) - 2}"
        )
    values = np.array([parse_complex(t) for t in tokens[2:]], dtype=complex)
    blocks = values.reshape(1 + m, n, n)
    return blocks[0], [blocks[i] for i in range(1, 1 + m)]


def load(path):
    """Read a matrix file from ``path``; returns (hamiltonian, couplings)."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(h: np.ndarray, couplings=()) -> str:
    """Serialize (hamiltonian, couplings) in the file grammar."""
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    couplings = [np.asarray(c, dtype=complex) for c in couplings]
    lines = [f"{n} {len(couplings)}"]
    for block in [h, *couplings]:
        for row in block:
            lines.append(" ".join(format_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def dump(path, h: np.ndarray, couplings=()) -> None:
    """Write (hamiltonian, couplings) to ``path``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(h, couplings))
