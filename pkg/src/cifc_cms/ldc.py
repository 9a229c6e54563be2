"""Linear deterministic channel: sum-rate bounds, constructive schemes,
and brute-force decodability verification.

The channel is Y_l = sum_i S^(m - n[l][i]) X_i over GF(2), where the
gains n[l][i] count delivered bit levels and m is the largest gain.
All rates here are exact integers (bits per channel use at blocklength
one); no floating point enters this module except for the entropy
evaluation in the dominance check, which is pure numpy arithmetic on
exact probability vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf2

EXHAUSTIVE_BIT_CUTOFF = 20
DEFAULT_SAMPLES = 10_000
GENERIC3_MAX_RETRIES = 10_000


class SchemeSearchFailed(RuntimeError):
    """The constructive build plus randomized fallback missed the bound.

    This signals a bug or an unhandled corner, never silent degradation.
    """


@dataclass(frozen=True)
class LdcGains:
    """Integer gain matrix n[l][i] (receiver l, transmitter i)."""

    n: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.n)
        for row in self.n:
            if len(row) != k:
                raise ValueError("gain matrix must be square")
            for v in row:
                if not isinstance(v, (int, np.integer)) or v < 0:
                    raise ValueError("gains must be non-negative integers")

    @classmethod
    def from_matrix(cls, rows) -> "LdcGains":
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @classmethod
    def symmetric(cls, nd: int, ni: int, k: int) -> "LdcGains":
        return cls.from_matrix(
            [[nd if l == i else ni for i in range(k)] for l in range(k)]
        )

    @property
    def k(self) -> int:
        return len(self.n)

    @property
    def m(self) -> int:
        return max(max(row) for row in self.n)

    def channel_matrix(self, l: int, i: int) -> np.ndarray:
        return gf2.shift_matrix(self.m, self.m - self.n[l][i])


@dataclass(frozen=True)
class SumRateBound:
    """Sum-rate bound with its per-term breakdown."""

    value: int
    terms: tuple[tuple[str, int], ...]
    note: str = ""

    def __post_init__(self):
        if self.value != sum(t for _, t in self.terms):
            raise ValueError("value must equal the sum of breakdown terms")
        if self.value < 0:
            raise ValueError("bound must be non-negative")


@dataclass(frozen=True)
class LdcScheme:
    """Linear encoders/decoders with achieved per-user message lengths.

    Encoders map the concatenated message word (r_1 + ... + r_K bits,
    user 1 first) to the m-bit channel input; encoder i must have zero
    columns on messages of users > i (cumulative message sharing).
    Decoders map the m-bit channel output to the r_l message bits.
    """

    rates: tuple[int, ...]
    encoders: tuple[np.ndarray, ...]
    decoders: tuple[np.ndarray, ...]

    @property
    def total_bits(self) -> int:
        return sum(self.rates)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for r in self.rates:
            out.append(acc)
            acc += r
        return tuple(out)

    def message_slice(self, user: int) -> slice:
        off = self.offsets[user]
        return slice(off, off + self.rates[user])

    def respects_cms(self) -> bool:
        """Encoder i may only depend on messages of users 1..i."""
        for i, enc in enumerate(self.encoders):
            known = self.offsets[i] + self.rates[i]
            if enc[:, known:].any():
                return False
        return True


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    mode: str
    tuples_checked: int
    counterexample: tuple | None = None  # (messages, user, decoded)


@dataclass(frozen=True)
class DominanceReport:
    closed_form: int
    max_observed: float
    gap: float
    trials: int
    all_within: bool
    uniform_value: float


def positive_part(x: int) -> int:
    return max(0, x)


def f_function(c: int, d: int, a: int, b: int) -> int:
    """Max conditional entropy of one pair of shifted inputs given another.

    f(c,d|a,b) = max{c+b, a+d} - max{a,b}   if c-d != a-b,
                 max{a,b,c,d} - max{a,b}    if c-d == a-b.
    """
    for v in (c, d, a, b):
        if v < 0:
            raise ValueError("gains must be non-negative")
    if c - d != a - b:
        return max(c + b, a + d) - max(a, b)
    return max(a, b, c, d) - max(a, b)


def ldc3_sum_outer(g: LdcGains) -> SumRateBound:
    """Closed-form 3-user sum-rate upper bound."""
    if g.k != 3:
        raise ValueError("ldc3_sum_outer requires k == 3")
    n = g.n
    t1 = max(n[0][0], n[0][1], n[0][2])
    t2 = f_function(n[1][1], n[1][2], n[0][1], n[0][2])
    t3 = positive_part(n[2][2] - max(n[0][2], n[1][2]))
    return SumRateBound(
        value=t1 + t2 + t3,
        terms=(
            ("rx1_full", t1),
            ("rx2_conditional", t2),
            ("rx3_private", t3),
        ),
    )


def ldc_k_sym_sum_capacity(nd: int, ni: int, k: int) -> SumRateBound:
    """Symmetric K-user sum capacity: (K-1)max{nd,ni} + [nd-ni]^+.

    Degenerate branches: nd == ni > 0 collapses to a K-user MAC with sum
    capacity nd; nd == 0 (with ni > 0) is a broadcast-degenerate channel
    with sum rate 2*ni; nd == ni == 0 is 0 by continuity.
    """
    if nd < 0 or ni < 0 or k < 2:
        raise ValueError("need nd >= 0, ni >= 0, k >= 2")
    if nd == ni:
        if nd == 0:
            return SumRateBound(0, (("degenerate_zero", 0),),
                                note="all-zero gains, value 0 by continuity")
        return SumRateBound(nd, (("mac", nd),), note="mac")
    if nd == 0:
        return SumRateBound(2 * ni, (("broadcast", 2 * ni),),
                            note="broadcast degenerate")
    v = (k - 1) * max(nd, ni) + positive_part(nd - ni)
    return SumRateBound(
        v,
        (
            ("first_k_minus_1", (k - 1) * max(nd, ni)),
            ("last_user", positive_part(nd - ni)),
        ),
    )


def _sym_encoders(nd: int, ni: int, k: int) -> LdcScheme:
    """The one-cognitive-transmitter scheme for nd != ni."""
    m = max(nd, ni)
    t = positive_part(nd - ni)  # bits for the last user
    rates = tuple([m] * (k - 1) + [t])
    total = (k - 1) * m + t

    # Block selectors of the construction: top ni rows pass-through and
    # bottom [nd-ni]^+ rows pass-through.
    b_top = gf2.zeros(m, m)
    ni_eff = min(ni, m)
    b_top[:ni_eff, :ni_eff] = gf2.identity(ni_eff)
    b_bot = gf2.add(gf2.identity(m), b_top)

    encoders = []
    for j in range(k - 1):
        e = gf2.zeros(m, total)
        e[:, j * m:(j + 1) * m] = gf2.identity(m)
        encoders.append(e)
    e_k = gf2.zeros(m, total)
    for j in range(k - 1):
        e_k[:, j * m:(j + 1) * m] = b_top
    # Message K occupies the bottom t input levels.
    e_k[ni_eff:ni_eff + t, (k - 1) * m:] = gf2.identity(t)
    encoders.append(e_k)

    dec_all = gf2.invert(gf2.add(gf2.shift_matrix(m, m - nd),
                                 gf2.shift_matrix(m, m - ni)))
    decoders = [dec_all.copy() for _ in range(k - 1)]
    decoders.append(dec_all[ni_eff:ni_eff + t, :].copy())
    return LdcScheme(rates=rates, encoders=tuple(encoders),
                     decoders=tuple(decoders))


def build_sym_scheme(nd: int, ni: int, k: int) -> LdcScheme:
    """Capacity-achieving scheme for the symmetric K-user channel.

    For nd != ni this is the explicit construction where transmitters
    1..K-1 send their own message untouched and transmitter K both
    pre-cancels the aggregate interference and sneaks its own bits into
    the levels unseen by the other receivers.  For nd == ni the channel
    is a MAC and a single-user corner scheme carries nd bits.
    """
    if nd < 0 or ni < 0 or k < 2:
        raise ValueError("need nd >= 0, ni >= 0, k >= 2")
    if nd != ni:
        return _sym_encoders(nd, ni, k)
    # MAC corner: user 1 sends nd bits, everyone else is silent.
    m = nd
    rates = tuple([m] + [0] * (k - 1))
    encoders = []
    for i in range(k):
        e = gf2.zeros(m, m)
        if i == 0:
            e[:, :] = gf2.identity(m)
        encoders.append(e)
    decoders = [gf2.identity(m)] + [gf2.zeros(0, m) for _ in range(k - 1)]
    return LdcScheme(rates=rates, encoders=tuple(encoders),
                     decoders=tuple(decoders))


def _generic3_encoders(g: LdcGains, rng: np.random.Generator | None
                       ) -> LdcScheme | None:
    """One construction attempt; None if a decoder does not exist."""
    n, m = g.n, g.m
    h = [[g.channel_matrix(l, i) for i in range(3)] for l in range(3)]

    r1 = max(n[0][0], n[0][1], n[0][2])
    q = max(n[0][2], n[1][2])
    r3 = positive_part(n[2][2] - q)
    r2 = f_function(n[1][1], n[1][2], n[0][1], n[0][2])
    rates = (r1, r2, r3)
    total = r1 + r2 + r3

    # Layer 1: pick r1 input coordinates (across all three transmitters)
    # whose images at Y_1 are independent.
    cand1 = np.hstack([h[0][0], h[0][1], h[0][2]])
    t1 = gf2.identity(3 * m)
    if rng is not None:
        t1 = gf2.random_invertible(3 * m, rng)
        cand1 = gf2.matmul(cand1, t1)
    idx1 = gf2.basis_complete(gf2.zeros(m, 0), cand1)
    if len(idx1) != r1:
        return None
    l1 = t1[:, idx1]                       # 3m x r1, per-transmitter blocks
    l1_x1, l1_x2, l1_x3 = l1[:m], l1[m:2 * m], l1[2 * m:]

    # Layer 2 lives in the kernel of the Y_1 map on (X_2, X_3): invisible
    # to receiver 1, with independent images at Y_2.
    b_map = np.hstack([h[0][1], h[0][2]])   # (X_2, X_3) -> Y_1
    a_map = np.hstack([h[1][1], h[1][2]])   # (X_2, X_3) -> Y_2
    ker = gf2.nullspace(b_map)
    if rng is not None and ker.shape[1]:
        ker = gf2.matmul(ker, gf2.random_invertible(ker.shape[1], rng))
    w_img = gf2.matmul(a_map, ker)
    idx2 = gf2.basis_complete(gf2.zeros(m, 0), w_img)
    if len(idx2) != r2:
        return None
    l2 = ker[:, idx2]                      # 2m x r2
    w_basis = w_img[:, idx2]               # m x r2, spans the layer-2 image

    # Pre-cancel the W_1 components at Y_2 that fall inside the layer-2
    # image space; the correction is invisible at Y_1 by construction.
    n1 = (h[1][0].astype(np.int64) @ l1_x1.astype(np.int64)
          + h[1][1].astype(np.int64) @ l1_x2.astype(np.int64)
          + h[1][2].astype(np.int64) @ l1_x3.astype(np.int64)) % 2
    n1 = n1.astype(np.uint8)
    if r2:
        idx_r = gf2.basis_complete(w_basis, gf2.identity(m))
        comp = gf2.identity(m)[:, idx_r]
        z = gf2.solve(np.hstack([w_basis, comp]), n1)
        if z is None:
            return None
        corr = gf2.matmul(l2, z[:r2])      # 2m x r1 kernel-space correction
        l1_x2 = gf2.add(l1_x2, corr[:m])
        l1_x3 = gf2.add(l1_x3, corr[m:])
        n1 = gf2.add(n1, gf2.matmul(w_basis, z[:r2]))

    # Private layer for user 3: bits placed below the levels any other
    # receiver can see, then shifted so they land on the bottom r3
    # positions of Y_3, with the interference there pre-subtracted (the
    # GF(2) analogue of dirty paper coding).
    up = gf2.zeros(m, r3)
    up[:r3, :] = gf2.identity(r3)
    s_q = gf2.shift_matrix(m, q)
    priv = gf2.matmul(s_q, up)             # m x r3 placement in X_3

    # Assemble encoders (message layout: w1 | w2 | w3).
    e1 = gf2.zeros(m, total)
    e1[:, :r1] = l1_x1
    e2 = gf2.zeros(m, total)
    e2[:, :r1] = l1_x2
    if r2:
        e2[:, r1:r1 + r2] = l2[:m]
    e3 = gf2.zeros(m, total)
    e3[:, :r1] = l1_x3
    if r2:
        e3[:, r1:r1 + r2] = l2[m:]
    e3[:, r1 + r2:] = priv

    if r3:
        # Interference seen on the bottom r3 levels of Y_3 from the w1/w2
        # layers; transmitter 3 knows it exactly and pre-adds it.
        g3 = (h[2][0].astype(np.int64) @ e1.astype(np.int64)
              + h[2][1].astype(np.int64) @ e2.astype(np.int64)
              + h[2][2].astype(np.int64) @ e3.astype(np.int64)) % 2
        c = g3.astype(np.uint8)[m - r3:, :r1 + r2]
        e3[:, :r1 + r2] = gf2.add(e3[:, :r1 + r2],
                                  gf2.matmul(priv, c))

    encoders = (e1, e2, e3)

    # Decoders by solving D @ G_l == message selector.
    decoders = []
    for l in range(3):
        comp = (h[l][0].astype(np.int64) @ e1.astype(np.int64)
                + h[l][1].astype(np.int64) @ e2.astype(np.int64)
                + h[l][2].astype(np.int64) @ e3.astype(np.int64)) % 2
        comp = comp.astype(np.uint8)
        sel = gf2.zeros(rates[l], total)
        off = sum(rates[:l])
        sel[:, off:off + rates[l]] = gf2.identity(rates[l])
        d = gf2.solve(comp.T, sel.T)
        if d is None:
            return None
        decoders.append(d.T)
    return LdcScheme(rates=rates, encoders=encoders, decoders=tuple(decoders))


def build_generic3_scheme(g: LdcGains,
                          max_retries: int = GENERIC3_MAX_RETRIES,
                          seed: int = 0) -> LdcScheme:
    """Sum-capacity achieving scheme for arbitrary 3-user gains.

    The deterministic greedy construction is tried first; if it misses
    (no decoder exists), bounded randomized re-parameterizations of the
    message coordinates are tried before raising SchemeSearchFailed.
    """
    if g.k != 3:
        raise ValueError("build_generic3_scheme requires k == 3")
    scheme = _generic3_encoders(g, rng=None)
    if scheme is not None:
        return scheme
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        scheme = _generic3_encoders(g, rng=rng)
        if scheme is not None:
            return scheme
    raise SchemeSearchFailed(f"no scheme found for gains {g.n}")


def _bit_columns(values: np.ndarray, nbits: int) -> np.ndarray:
    """Columns of bits (MSB first) for an array of integers."""
    shifts = np.arange(nbits - 1, -1, -1, dtype=np.int64)
    return ((values[None, :] >> shifts[:, None]) & 1).astype(np.uint8)


def verify_scheme(g: LdcGains, s: LdcScheme, mode: str = "auto",
                  seed: int = 0, samples: int = DEFAULT_SAMPLES
                  ) -> VerificationReport:
    """Simulate the channel over message tuples and check every decoder.

    mode: "exhaustive", "sampled", or "auto" (exhaustive when the total
    message length is at most EXHAUSTIVE_BIT_CUTOFF bits).
    """
    if len(s.encoders) != g.k or len(s.decoders) != g.k:
        raise ValueError("scheme dimensions do not match the channel")
    m, total = g.m, s.total_bits
    for e in s.encoders:
        if e.shape != (m, total):
            raise ValueError("encoder dimensions do not match the channel")

    if mode == "auto":
        mode = "exhaustive" if total <= EXHAUSTIVE_BIT_CUTOFF else "sampled"
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")

    h = [[g.channel_matrix(l, i).astype(np.int64) for i in range(g.k)]
         for l in range(g.k)]
    enc = [e.astype(np.int64) for e in s.encoders]
    dec = [d.astype(np.int64) for d in s.decoders]

    def check_block(w: np.ndarray) -> tuple | None:
        xs = [(e @ w) % 2 for e in enc]
        for l in range(g.k):
            y = sum(h[l][i] @ xs[i] for i in range(g.k)) % 2
            got = (dec[l] @ y) % 2
            want = w[s.message_slice(l)]
            bad = np.nonzero((got != want).any(axis=0))[0]
            if bad.size:
                j = int(bad[0])
                msgs = tuple(tuple(int(b) for b in w[s.message_slice(u), j])
                             for u in range(g.k))
                return (msgs, l, tuple(int(b) for b in got[:, j]))
        return None

    checked = 0
    if mode == "exhaustive":
        n_tuples = 1 << total
        chunk = 1 << 14
        for start in range(0, n_tuples, chunk):
            vals = np.arange(start, min(start + chunk, n_tuples),
                             dtype=np.int64)
            w = _bit_columns(vals, total) if total else gf2.zeros(0, len(vals))
            cex = check_block(w)
            checked += w.shape[1]
            if cex is not None:
                return VerificationReport(False, mode, checked, cex)
    else:
        rng = np.random.default_rng(seed)
        chunk = 1 << 12
        remaining = samples
        while remaining > 0:
            cols = min(chunk, remaining)
            w = rng.integers(0, 2, size=(total, cols), dtype=np.int64)
            cex = check_block(w)
            checked += cols
            remaining -= cols
            if cex is not None:
                return VerificationReport(False, mode, checked, cex)
    return VerificationReport(True, mode, checked)


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def outer_bound_dominance_check(g: LdcGains, trials: int = 1000,
                                seed: int = 0) -> DominanceReport:
    """Exact-entropy check that no joint input distribution beats the
    closed-form 3-user sum bound.

    Evaluates H(Y1) + H(Y2|X1,Y1) + H(Y3|X1,Y1,X2,Y2) for random joint
    distributions on ({0,1}^m)^3 and for the uniform i.i.d. input.
    """
    if g.k != 3:
        raise ValueError("dominance check requires k == 3")
    m = g.m
    if m > 3:
        raise ValueError("dominance check is desk-scale only (m <= 3)")
    closed = ldc3_sum_outer(g).value

    size = 1 << m
    # Output integers for every (x1, x2, x3) triple.
    hmat = [[g.channel_matrix(l, i) for i in range(3)] for l in range(3)]
    xs = np.arange(size, dtype=np.int64)
    xbits = _bit_columns(xs, m) if m else gf2.zeros(0, size)

    def out_int(l: int, i1, i2, i3) -> np.ndarray:
        y = (hmat[l][0].astype(np.int64) @ xbits[:, i1]
             + hmat[l][1].astype(np.int64) @ xbits[:, i2]
             + hmat[l][2].astype(np.int64) @ xbits[:, i3]) % 2
        weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
        return weights @ y if m else np.zeros(i1.shape, dtype=np.int64)

    i1, i2, i3 = np.meshgrid(xs, xs, xs, indexing="ij")
    i1, i2, i3 = i1.ravel(), i2.ravel(), i3.ravel()
    y1 = out_int(0, i1, i2, i3)
    y2 = out_int(1, i1, i2, i3)
    y3 = out_int(2, i1, i2, i3)

    def evaluate(p: np.ndarray) -> float:
        def joint_entropy(*keys) -> float:
            key = np.zeros(p.shape, dtype=np.int64)
            for k_arr in keys:
                key = key * size + k_arr
            agg = np.bincount(key, weights=p)
            return _entropy_bits(agg)

        h_y1 = joint_entropy(y1)
        h_y2_cond = joint_entropy(i1, y1, y2) - joint_entropy(i1, y1)
        h_y3_cond = (joint_entropy(i1, y1, i2, y2, y3)
                     - joint_entropy(i1, y1, i2, y2))
        return h_y1 + h_y2_cond + h_y3_cond

    uniform = np.full(size ** 3, 1.0 / size ** 3)
    uniform_value = evaluate(uniform)

    rng = np.random.default_rng(seed)
    max_obs = uniform_value
    for _ in range(trials):
        p = rng.dirichlet(np.ones(size ** 3))
        max_obs = max(max_obs, evaluate(p))

    return DominanceReport(
        closed_form=closed,
        max_observed=max_obs,
        gap=closed - max_obs,
        trials=trials,
        all_within=max_obs <= closed + 1e-12,
        uniform_value=uniform_value,
    )
