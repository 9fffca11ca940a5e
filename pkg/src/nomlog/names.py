"""Names, name-types and finite permutations of names."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True, slots=True)
class NameType:
    ident: str

    def __str__(self) -> str:
        return self.ident


@dataclass(frozen=True, slots=True)
class Name:
    """An atomic name. Identity is the pair (type, id); the label is cosmetic."""

    type: NameType
    id: int
    label: str | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return self.label if self.label is not None else f"{self.type.ident}{self.id}"

    def __repr__(self) -> str:
        return f"Name({self})"

    def sort_key(self) -> tuple[str, int]:
        return (self.type.ident, self.id)


Swap = tuple[Name, Name]


def _check_swap(a: Name, b: Name) -> None:
    if a.type != b.type:
        raise TypeError(f"cannot swap {a}:{a.type} with {b}:{b.type}")


@dataclass(frozen=True, slots=True)
class Perm:
    """A finite permutation, stored as transpositions applied right-to-left."""

    swaps: tuple[Swap, ...] = ()

    def __post_init__(self) -> None:
        for a, b in self.swaps:
            _check_swap(a, b)

    def __call__(self, a: Name) -> Name:
        for x, y in reversed(self.swaps):
            if a == x:
                a = y
            elif a == y:
                a = x
        return a

    def __bool__(self) -> bool:
        return bool(self.swaps)

    def __matmul__(self, other: Perm) -> Perm:
        return perm_compose(self, other)

    def names(self) -> set[Name]:
        out: set[Name] = set()
        for a, b in self.swaps:
            out.add(a)
            out.add(b)
        return out

    def mapping(self) -> dict[Name, Name]:
        """Non-fixed points of the permutation."""
        out = {}
        for a in self.names():
            b = self(a)
            if b != a:
                out[a] = b
        return out

    def normalized(self) -> Perm:
        """Canonical transposition sequence with the same action."""
        if len(self.swaps) <= 1:
            if self.swaps and self.swaps[0][0] == self.swaps[0][1]:
                return IDENTITY
            if self.swaps and self.swaps[0][1].sort_key() < self.swaps[0][0].sort_key():
                a, b = self.swaps[0]
                return Perm(((b, a),))
            return self
        m = self.mapping()
        seen: set[Name] = set()
        swaps: list[Swap] = []
        for start in sorted(m, key=Name.sort_key):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = m[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = m[nxt]
            # (x1 x2 ... xk) = (x1 x2)(x2 x3)...(x_{k-1} xk), rightmost first
            for i in range(len(cycle) - 1):
                swaps.append((cycle[i], cycle[i + 1]))
        return Perm(tuple(swaps))

    def __str__(self) -> str:
        return "".join(f"({a} {b})" for a, b in self.swaps) or "id"


IDENTITY = Perm()


def transposition(a: Name, b: Name) -> Perm:
    return Perm(((a, b),))


def perm_apply(pi: Perm, a: Name) -> Name:
    return pi(a)


def perm_compose(pi: Perm, rho: Perm) -> Perm:
    """The permutation that applies ``rho`` first, then ``pi``."""
    return Perm(pi.swaps + rho.swaps)


def perm_inverse(pi: Perm) -> Perm:
    return Perm(tuple(reversed(pi.swaps)))


def perm_disagreement(pi: Perm, rho: Perm, domain: Iterable[Name] | None = None) -> set[Name]:
    """Names of ``domain`` moved differently by the two permutations.

    The default domain is every name mentioned by either permutation,
    which suffices since all other names are fixed by both.
    """
    if domain is None:
        domain = pi.names() | rho.names()
    return {a for a in domain if pi(a) != rho(a)}


class NameSupply:
    """Monotone counter handing out fresh name ids.

    One supply belongs to one engine or session. Calls are serialized by a
    lock so concurrent callers never receive the same id.
    """

    def __init__(self, start: int = 0):
        self._next = start
        self._lock = threading.Lock()

    def next_id(self) -> int:
        with self._lock:
            n = self._next
            self._next += 1
            return n

    def reserve(self, used_id: int) -> None:
        with self._lock:
            if used_id >= self._next:
                self._next = used_id + 1

    def peek(self) -> int:
        return self._next

    def name(self, nametype: NameType, label: str | None = None) -> Name:
        n = self.next_id()
        return Name(nametype, n, label if label is not None else f"{nametype.ident}{n}")


DEFAULT_SUPPLY = NameSupply(start=1_000_000)
