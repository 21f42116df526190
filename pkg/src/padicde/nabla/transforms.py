"""How generic discs and breaks move under covers, in log coordinates.

A disc of radius r·ρ around the generic point of radius ρ = p^(-s) is
written (s, λ_r + s) with λ_r = -log_p r.  Each transform maps the disc
upstairs to the disc downstairs (or back) exactly.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import PreconditionError
from ..extended import as_rational, is_finite


def _rat(x, name):
    v = as_rational(x)
    if not is_finite(v):
        raise PreconditionError(f"{name} must be a finite rational")
    return Fraction(v)


def disc_transform(kind: str, s, lam_r, p: int, n: int | None = None):
    """Map the disc (s, λ_r + s) to (s', e'), e' = -log_p of the new disc radius.

    * ``tame``: t ↦ t^n with p ∤ n; (s, λ_r + s) ↦ (s/n, λ_r + s/n).
    * ``frobenius-small``: r ≤ p^(-p/(p-1)); the cover disc has radius
      r·p·ρ^(1/p), i.e. (s/p, λ_r - 1 + s/p).
    * ``frobenius-large``: p^(-p/(p-1)) < r < 1; the base disc has radius
      r^p·ρ.  ``frobenius-large`` gives the cover side (s/p, λ_r + s/p) and
      ``frobenius-large-base`` the base side (s, p·λ_r + s).
    * ``wild``: ρ > p^(-p/(p-1)); the u-disc has radius r·ρ^((2-p)/p),
      i.e. (s, λ_r + s·(2 - p)/p).
    """
    s, lam_r = _rat(s, "s"), _rat(lam_r, "λ_r")
    if s <= 0:
        raise PreconditionError("s must be positive")
    if lam_r < 0:
        raise PreconditionError("the disc radius ratio r must satisfy r <= 1")
    threshold = Fraction(p, p - 1)
    if kind in ("tame", "tame-n") or kind.startswith("tame-"):
        if kind.startswith("tame-") and n is None:
            n = int(kind[len("tame-"):])
        if n is None or n < 1:
            raise PreconditionError("tame transform needs a positive n")
        if n % p == 0:
            raise PreconditionError(f"tame transform needs p ∤ n, got n = {n}")
        return s / n, lam_r + s / n
    if kind == "frobenius-small":
        if lam_r < threshold:
            raise PreconditionError(f"small-radius branch needs λ_r >= {threshold}")
        return s / p, lam_r - 1 + s / p
    if kind == "frobenius-large":
        if not 0 < lam_r < threshold:
            raise PreconditionError(f"large-radius branch needs 0 < λ_r < {threshold}")
        return s / p, lam_r + s / p
    if kind == "frobenius-large-base":
        if not 0 < lam_r < threshold:
            raise PreconditionError(f"large-radius branch needs 0 < λ_r < {threshold}")
        return s, p * lam_r + s
    if kind == "wild":
        if not s < threshold:
            raise PreconditionError(f"wild transform needs s < {threshold}")
        return s, lam_r + s * (2 - p) / p
    raise PreconditionError(f"unknown disc transform {kind!r}")


def frobenius_transform(s, lam_r, p: int):
    """Pick the Frobenius branch from the size of r."""
    lam_r = _rat(lam_r, "λ_r")
    kind = "frobenius-small" if lam_r >= Fraction(p, p - 1) else "frobenius-large"
    return kind, disc_transform(kind, s, lam_r, p)


def wild_break_transform(beta, n: int, p: int, direction: str = "push") -> Fraction:
    """Highest break through the wild cover: push β ↦ βp - n(p-1), pull inverts."""
    beta = _rat(beta, "β")
    if not isinstance(n, int) or n < 1:
        raise PreconditionError("n must be a positive integer")
    if direction == "push":
        if beta < n:
            raise PreconditionError(f"push needs β >= n, got β = {beta}, n = {n}")
        return beta * p - n * (p - 1)
    if direction == "pull":
        out = (beta + n * (p - 1)) / p
        if out < n:
            raise PreconditionError(f"pulled break {out} is below n = {n}")
        return out
    raise PreconditionError(f"direction must be push or pull, got {direction!r}")
