"""Instance generation, benchmark-file ingestion and the native file format.

Random instances follow the classic tardiness scheme: processing times and
weights are uniform integers in [1, 100]; due dates are uniform integers in

    [max(0, floor((1 - T - R/2) * P)), floor((1 - T + R/2) * P)]

where P is the instance's total processing time, T is the tardiness factor
and R the due-date range factor.  Due dates are first drawn on that
single-machine interval and then scaled by floor(d / m) for an m-machine
instance, so the same draws yield comparable instances across machine
counts.

All randomness comes from SplitMix64, a fixed, portable 64-bit generator,
with bounded draws done by rejection so there is no modulo bias.  Batches
are therefore reproducible bit for bit from their seeds on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Instance, Job

GRID = (0.2, 0.4, 0.6, 0.8, 1.0)

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 pseudo random generator (Steele, Lea and Flood's mixer).

    state' = state + 0x9E3779B97F4A7C15 (mod 2^64); the output is the state
    scrambled by two xor-shift-multiply rounds.  Small, seedable and exactly
    reproducible across platforms and languages.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], drawn by rejection (no modulo bias)."""
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = ((1 << 64) // span) * span
        u = self.next_u64()
        while u >= limit:
            u = self.next_u64()
        return lo + (u % span)


@dataclass(frozen=True)
class GenParams:
    """Parameters for one generated batch: `count` instances at one (R, T)."""

    n: int
    m: int
    r: float
    t: float
    seed: int
    count: int = 5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        _tenths(self.r, "R")
        _tenths(self.t, "T")


def _tenths(x: float, name: str) -> int:
    """Validate that x is a multiple of 0.1 in (0, 1] and return 10*x."""
    tens = round(x * 10)
    if abs(x * 10 - tens) > 1e-9 or not (1 <= tens <= 10):
        raise ValueError(f"{name} must be a multiple of 0.1 in (0, 1], got {x}")
    return tens


def due_date_interval(total_p: int, r: float, t: float) -> tuple[int, int]:
    """The single-machine due-date interval for total processing time P.

    Computed in exact integer arithmetic: with a = 10*R and b = 10*T the
    bounds are floor((20 - 2b -+ a) * P / 20), the lower one clamped at 0.
    """
    a = _tenths(r, "R")
    b = _tenths(t, "T")
    lo = ((20 - 2 * b - a) * total_p) // 20
    hi = ((20 - 2 * b + a) * total_p) // 20
    return max(0, lo), hi


def generate_instance(n: int, m: int, r: float, t: float, seed: int) -> Instance:
    """One seeded random instance.

    The draw order is fixed: p_1..p_n, then w_1..w_n, then d_1..d_n, all
    from a single SplitMix64 stream seeded with `seed`.  Due dates are drawn
    on the single-machine interval and then divided by m (floor), so
    generate_instance(n, m, ...) equals adapt_to_parallel applied to the
    m=1 instance with the same seed.
    """
    rng = SplitMix64(seed)
    p = [rng.randint(1, 100) for _ in range(n)]
    w = [rng.randint(1, 100) for _ in range(n)]
    lo, hi = due_date_interval(sum(p), r, t)
    d = [rng.randint(lo, hi) // m for _ in range(n)]
    jobs = [Job(i + 1, p[i], w[i], d[i]) for i in range(n)]
    meta = f"n{n}m{m}_R{r:.1f}_T{t:.1f}_s{seed}"
    return Instance(jobs, m, meta)


def instance_seeds(seed: int, count: int) -> list[int]:
    """Per-instance seeds derived from a batch seed.

    The splitting rule: a SplitMix64 stream seeded with `seed` yields one
    64-bit output per instance, consumed in batch order.
    """
    stream = SplitMix64(seed)
    return [stream.next_u64() for _ in range(count)]


def generate(params: GenParams) -> list[Instance]:
    """A batch of `count` instances for a single (R, T) pair."""
    return [
        generate_instance(params.n, params.m, params.r, params.t, s)
        for s in instance_seeds(params.seed, params.count)
    ]


def adapt_to_parallel(instance: Instance, m: int) -> Instance:
    """Turn a single-machine benchmark instance into an m-machine one.

    Processing times and weights are kept; every due date becomes
    floor(d / m), compensating for the m-fold capacity.
    """
    if m < 1:
        raise ValueError(f"machine count must be >= 1, got {m}")
    jobs = [Job(j.id, j.p, j.w, j.d // m) for j in instance.jobs]
    return Instance(jobs, m, f"{instance.meta}|m{m}" if instance.meta else f"m{m}")


class InstanceFormatError(ValueError):
    """Raised when an instance file does not match the expected layout."""


# ---------------------------------------------------------------------------
# native file format: line one "n m", then n lines "p w d", LF terminated


def format_instance(instance: Instance) -> str:
    lines = [f"{instance.n} {instance.m}"]
    lines.extend(f"{j.p} {j.w} {j.d}" for j in instance.jobs)
    return "\n".join(lines) + "\n"


def parse_instance(text: str, meta: str = "") -> Instance:
    tokens = text.split()
    if len(tokens) < 2:
        raise InstanceFormatError("missing 'n m' header")
    ints = _int_tokens(tokens)
    n, m = ints[0], ints[1]
    body = ints[2:]
    if len(body) != 3 * n:
        raise InstanceFormatError(
            f"expected {3 * n} values for n={n} jobs, found {len(body)}"
        )
    jobs = [
        Job(i + 1, body[3 * i], body[3 * i + 1], body[3 * i + 2]) for i in range(n)
    ]
    return Instance(jobs, m, meta)


def write_instance(instance: Instance, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_instance(instance))


def read_instance(path, meta: str | None = None) -> Instance:
    import os

    with open(path) as fh:
        text = fh.read()
    if meta is None:
        meta = os.path.splitext(os.path.basename(path))[0]
    return parse_instance(text, meta)


# ---------------------------------------------------------------------------
# single-machine benchmark files: whitespace separated integers in blocks of
# 3n per instance (n processing times, n weights, n due dates)


def load_orlib(text, n: int, source: str = "orlib") -> list[Instance]:
    """Parse a concatenated single-machine benchmark stream.

    `text` may be str or bytes.  Each instance occupies 3n integers: the
    processing-time block, the weight block, then the due-date block.  The
    result is a list of single-machine instances in file order.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    values = _int_tokens(text.split())
    if not values:
        return []
    if len(values) % (3 * n) != 0:
        raise InstanceFormatError(
            f"found {len(values)} values, not a multiple of 3n = {3 * n}"
        )
    out = []
    for k in range(len(values) // (3 * n)):
        base = k * 3 * n
        p = values[base : base + n]
        w = values[base + n : base + 2 * n]
        d = values[base + 2 * n : base + 3 * n]
        jobs = [Job(i + 1, p[i], w[i], d[i]) for i in range(n)]
        out.append(Instance(jobs, 1, f"{source}#{k}"))
    return out


def format_orlib(instances) -> str:
    """Serialize single-machine instances back into the block layout."""
    chunks = []
    for inst in instances:
        for block in (inst.p[1:], inst.w[1:], inst.d[1:]):
            chunks.append(" ".join(str(v) for v in block))
    return "\n".join(chunks) + "\n"


def _int_tokens(tokens) -> list[int]:
    out = []
    for k, tok in enumerate(tokens):
        try:
            out.append(int(tok))
        except ValueError:
            raise InstanceFormatError(
                f"value #{k} is not an integer: {tok!r}"
            ) from None
    return out
