"""CSV input/output and the fractional-count likelihood for real data."""
from __future__ import annotations

import io
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DataFormatError, DomainError
from ..model import BivariateSample, LocationScale, Partition, ShapeParams, loglik

_SPLIT = re.compile(r"[,\s]+")


def _is_numeric(fields) -> bool:
    try:
        [float(f) for f in fields[:2]]
    except ValueError:
        return False
    return True


def _read_rows(text: str, header: bool | None):
    rows = []
    first = True
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f for f in _SPLIT.split(line) if f]
        if first:
            first = False
            if header or (header is None and not _is_numeric(fields)):
                continue
        if len(fields) < 2:
            raise DataFormatError(f"line {lineno}: expected two columns, got {len(fields)}")
        try:
            rows.append((lineno, float(fields[0]), float(fields[1])))
        except ValueError:
            raise DataFormatError(f"line {lineno}: cannot parse {line!r} as two numbers") from None
    return rows


def ingest_csv(
    path, loc_scale: LocationScale = LocationScale(), *, header: bool | None = None
) -> BivariateSample:
    """Read a two-column file and standardize it with ``loc_scale``.

    Columns may be separated by commas or whitespace; ``#`` starts a
    comment. ``header=None`` skips the first line only when it is not
    numeric; ``True`` or ``False`` force the choice. Rows that
    standardize to a negative coordinate are rejected and reported by
    line number.
    """
    text = Path(path).read_text(encoding="utf-8")
    rows = _read_rows(text, header)
    if not rows:
        return BivariateSample(np.empty((0, 2)))
    lines = np.array([r[0] for r in rows])
    raw = np.array([r[1:] for r in rows], dtype=float)
    z = np.column_stack([
        (raw[:, 0] - loc_scale.mu1) / loc_scale.sigma1,
        (raw[:, 1] - loc_scale.mu2) / loc_scale.sigma2,
    ])
    bad = ~np.all(z >= 0, axis=1)
    if bad.any():
        shown = ", ".join(map(str, lines[bad][:20]))
        more = " ..." if bad.sum() > 20 else ""
        raise DataFormatError(
            f"{int(bad.sum())} row(s) negative after standardization, lines: {shown}{more}"
        )
    return BivariateSample(z)


def write_csv(data: BivariateSample, stream) -> None:
    """Write pairs with round-trip precision so diagonal ties survive."""
    stream.write("x1,x2\n")
    for a, b in data.pairs:
        stream.write(f"{float(a)!r},{float(b)!r}\n")


@dataclass(frozen=True)
class FractionalPartition:
    """Log-sums from the observed cells with parameter-dependent counts.

    After a location-scale transform real data have essentially no exact
    ties, so the cell counts are replaced by their multinomial
    expectations ``n * alpha_i / sum(alpha)`` at whatever parameter the
    likelihood is evaluated. The log-sums are taken from the observed
    ordering of each pair; exact ties, if any, feed ``s0``.
    """

    n: int
    s0: float
    s1a: float
    s1b: float
    s2a: float
    s2b: float

    @classmethod
    def from_sample(cls, data: BivariateSample) -> "FractionalPartition":
        x1, x2 = data.x1, data.x2
        y1, y2 = np.log1p(x1), np.log1p(x2)
        lower, upper, diag = x1 < x2, x1 > x2, x1 == x2
        return cls(
            n=data.n,
            s0=float(y1[diag].sum()),
            s1a=float(y1[lower].sum()),
            s1b=float(y2[lower].sum()),
            s2a=float(y1[upper].sum()),
            s2b=float(y2[upper].sum()),
        )

    def counts(self, p) -> tuple[float, float, float]:
        a0, a1, a2 = p
        total = a0 + a1 + a2
        return (self.n * a0 / total, self.n * a1 / total, self.n * a2 / total)

    def resolve(self, p) -> Partition:
        n0, n1, n2 = self.counts(p)
        return Partition(n0, n1, n2, self.s0, self.s1a, self.s1b, self.s2a, self.s2b)


def loglik_fractional(p, fp: FractionalPartition) -> float:
    if min(p) <= 0:
        raise DomainError("all shape parameters must be positive")
    return loglik(p, fp.resolve(ShapeParams(*p)))
