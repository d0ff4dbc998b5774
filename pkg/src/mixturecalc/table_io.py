"""Plain-text tensor tables.

Each block starts with a header ``[name n]`` and lists the nonzero entries as
``i j k re im``, floats written with repr so that loading is exact. Lines
starting with '#' are comments.
"""

from pathlib import Path
from typing import Dict, Iterable, List, Tuple

import numpy as np

from .algebra import MixtureTensor
from .dirac import DiracSet
from .errors import ConfigError


def _format_block(name: str, array: np.ndarray, size: int = None) -> List[str]:
    lines = [f"[{name} {array.shape[0] if size is None else size}]"]
    for index in zip(*np.nonzero(array)):
        value = complex(array[index])
        idx = " ".join(str(int(i)) for i in index)
        lines.append(f"{idx} {float(value.real)!r} {float(value.imag)!r}")
    return lines


Entry = Tuple[List[int], complex, int]


def _parse_blocks(text: str) -> Dict[str, Tuple[int, List[Entry]]]:
    blocks: Dict[str, Tuple[int, List[Entry]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if line.startswith('['):
            parts = line[1:-1].split()
            if not line.endswith(']') or not parts or len(parts) > 2:
                raise ConfigError(f"line {lineno}: malformed block header '{line}'")
            name = parts[0]
            try:
                size = int(parts[1]) if len(parts) > 1 else 0
            except ValueError:
                raise ConfigError(f"line {lineno}: block size '{parts[1]}' is not an integer")
            if size < 0:
                raise ConfigError(f"line {lineno}: block size {size} is negative")
            blocks[name] = (size, [])
            current = name
            continue
        if current is None:
            raise ConfigError(f"line {lineno}: entry before any block header")
        fields = line.split()
        try:
            indices = [int(tok) for tok in fields[:-2]]
            value = complex(float(fields[-2]), float(fields[-1]))
        except (ValueError, IndexError):
            raise ConfigError(f"line {lineno}: cannot parse entry '{line}'")
        blocks[current][1].append((indices, value, lineno))
    return blocks


def _fill(size: int, rank: int, entries: Iterable[Entry], leading: int = None) -> np.ndarray:
    shape = ((leading,) if leading is not None else ()) + (size,) * rank
    array = np.zeros(shape, dtype=complex)
    for indices, value, lineno in entries:
        if len(indices) != len(shape):
            raise ConfigError(f"line {lineno}: entry has {len(indices)} indices, "
                              f"expected {len(shape)}")
        for index, bound in zip(indices, shape):
            if not 0 <= index < bound:
                raise ConfigError(f"line {lineno}: index {index} outside 0..{bound - 1}")
        array[tuple(indices)] = value
    return array


def dump_mixture(eta: MixtureTensor) -> str:
    lines = ["# mixture tensor: gamma alpha beta re im"]
    lines += _format_block('lower', eta.lower)
    lines += _format_block('upper', eta.upper)
    return "\n".join(lines) + "\n"


def load_mixture(text: str) -> MixtureTensor:
    blocks = _parse_blocks(text)
    for name in ('lower', 'upper'):
        if name not in blocks:
            raise ConfigError(f"mixture table lacks a [{name}] block")
    n = blocks['lower'][0]
    if blocks['upper'][0] != n:
        raise ConfigError(f"[upper {blocks['upper'][0]}] does not match [lower {n}]")
    return MixtureTensor(_fill(n, 3, blocks['lower'][1]), _fill(n, 3, blocks['upper'][1]))


def dump_dirac(d: DiracSet) -> str:
    stack = np.stack(d.matrices())
    lines = ["# dirac set: slot gamma alpha re im (slots eta0..eta3, H, Hhat)"]
    lines += _format_block('dirac', stack, size=stack.shape[1])
    lines.append("[N 1]")
    lines.append(f"{float(d.N.real)!r} {float(d.N.imag)!r}")
    return "\n".join(lines) + "\n"


def load_dirac(text: str) -> DiracSet:
    blocks = _parse_blocks(text)
    if 'dirac' not in blocks or 'N' not in blocks:
        raise ConfigError("dirac table needs [dirac] and [N] blocks")
    size, entries = blocks['dirac']
    stack = _fill(size, 2, entries, leading=6)
    n_entries = blocks['N'][1]
    N = n_entries[0][1] if n_entries else 0j
    return DiracSet(*stack, N=N)


def save_table(text: str, path: Path) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)


def read_table(path: Path) -> str:
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()
