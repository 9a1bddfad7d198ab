"""Core domain types: exact rational values, instances and allocations.

All utilities and bids are non-negative rationals held as
:class:`fractions.Fraction`, so every index computed downstream is exact.
Values only become floats at reporting boundaries (CSV output, ``--decimal``
printing).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

#: Marker for an item that no agent has received.
UNALLOCATED = None


class FairDivError(Exception):
    """Base class for all domain errors raised by this package."""


class MalformedRational(FairDivError):
    """A matrix entry could not be parsed as a non-negative rational."""


class NegativeValue(FairDivError):
    """A bid or utility entry was negative."""


class DimensionMismatch(FairDivError):
    """Row/column counts of a matrix are inconsistent with the instance."""


class IndexOutOfRange(FairDivError):
    """An agent or item index falls outside the instance."""


def parse_rational(value) -> Fraction:
    """Parse an instance-file entry into an exact ``Fraction``.

    Accepted forms: integers, ``"p/q"`` strings and decimal strings such as
    ``"0.25"``.  Floats are rejected because their binary representation
    silently changes the value (write ``"0.1"``, not ``0.1``).
    """
    if isinstance(value, bool):
        raise MalformedRational(f"not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise MalformedRational(
            f"float entries are not exact; quote the value as a string: \"{value}\""
        )
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise MalformedRational(f"zero denominator in {value!r}") from None
        except ValueError:
            raise MalformedRational(f"cannot parse rational from {value!r}") from None
    raise MalformedRational(f"cannot parse rational from {value!r}")


def format_rational(value: Fraction) -> object:
    """Inverse of :func:`parse_rational`: an int when integral, else ``"p/q"``."""
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def _parse_matrix(rows, n: int, m: int, what: str) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(rows, Sequence) or isinstance(rows, (str, bytes)):
        raise DimensionMismatch(f"{what} must be a list of {n} rows")
    if len(rows) != n:
        raise DimensionMismatch(f"{what} has {len(rows)} rows, expected {n}")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, Sequence) or isinstance(row, (str, bytes)):
            raise DimensionMismatch(f"{what} row {i} is not a list")
        if len(row) != m:
            raise DimensionMismatch(f"{what} row {i} has {len(row)} entries, expected {m}")
        parsed = []
        for j, entry in enumerate(row):
            v = parse_rational(entry)
            if v < 0:
                raise NegativeValue(f"{what}[{i}][{j}] = {entry!r} is negative")
            parsed.append(v)
        out.append(tuple(parsed))
    return tuple(out)


@dataclass(frozen=True)
class Instance:
    """A fair-division problem: ``n`` agents, ``m`` indivisible items.

    ``bids`` is the public n×m matrix the mechanisms see.  ``true_utilities``
    is an optional private matrix for manipulation studies; when absent,
    agents are sincere and the bids double as utilities.
    """

    num_agents: int
    num_items: int
    bids: tuple[tuple[Fraction, ...], ...]
    true_utilities: Optional[tuple[tuple[Fraction, ...], ...]] = None
    agent_names: Optional[tuple[str, ...]] = None
    item_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.num_agents < 1:
            raise DimensionMismatch("an instance needs at least one agent")
        if self.num_items < 0:
            raise DimensionMismatch("negative item count")
        if len(self.bids) != self.num_agents or any(
            len(r) != self.num_items for r in self.bids
        ):
            raise DimensionMismatch("bid matrix shape does not match agents x items")
        if self.true_utilities is not None:
            if len(self.true_utilities) != self.num_agents or any(
                len(r) != self.num_items for r in self.true_utilities
            ):
                raise DimensionMismatch("utility matrix shape does not match agents x items")

    @property
    def n(self) -> int:
        return self.num_agents

    @property
    def m(self) -> int:
        return self.num_items

    def values(self, use_true: bool = True) -> tuple[tuple[Fraction, ...], ...]:
        """Utility matrix: true utilities when requested and present, else bids."""
        if use_true and self.true_utilities is not None:
            return self.true_utilities
        return self.bids

    def agent_label(self, i: int) -> str:
        return self.agent_names[i] if self.agent_names else f"a{i + 1}"

    def item_label(self, j: int) -> str:
        return self.item_names[j] if self.item_names else f"o{j + 1}"

    def to_dict(self) -> dict:
        doc: dict = {
            "agents": list(self.agent_names) if self.agent_names else self.num_agents,
            "items": list(self.item_names) if self.item_names else self.num_items,
            "bids": [[format_rational(v) for v in row] for row in self.bids],
        }
        if self.true_utilities is not None:
            doc["utilities"] = [
                [format_rational(v) for v in row] for row in self.true_utilities
            ]
        return doc


def make_instance(bids, utilities=None, agent_names=None, item_names=None) -> Instance:
    """Build a validated Instance from nested sequences of rational-like entries."""
    rows = [list(r) for r in bids]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    parsed = _parse_matrix(rows, n, m, "bids")
    true = _parse_matrix([list(r) for r in utilities], n, m, "utilities") if utilities is not None else None
    return Instance(
        num_agents=n,
        num_items=m,
        bids=parsed,
        true_utilities=true,
        agent_names=tuple(agent_names) if agent_names else None,
        item_names=tuple(item_names) if item_names else None,
    )


def validate_instance(raw: Mapping) -> Instance:
    """Validate parsed instance-file data and return a canonical Instance.

    The document carries ``agents`` (count or name list), ``items`` (count or
    name list), a row-major ``bids`` matrix and an optional ``utilities``
    matrix of the same shape.
    """
    if not isinstance(raw, Mapping):
        raise DimensionMismatch("instance document must be a mapping")
    try:
        agents = raw["agents"]
        items = raw["items"]
        bids = raw["bids"]
    except KeyError as exc:
        raise DimensionMismatch(f"instance document missing field {exc}") from None

    agent_names = None
    if isinstance(agents, bool) or not isinstance(agents, (int, Sequence)):
        raise DimensionMismatch("agents must be a count or a list of names")
    if isinstance(agents, int):
        n = agents
    else:
        agent_names = tuple(str(a) for a in agents)
        n = len(agent_names)
    item_names = None
    if isinstance(items, bool) or not isinstance(items, (int, Sequence)):
        raise DimensionMismatch("items must be a count or a list of names")
    if isinstance(items, int):
        m = items
    else:
        item_names = tuple(str(o) for o in items)
        m = len(item_names)

    if n < 1:
        raise DimensionMismatch("an instance needs at least one agent")
    if m < 0:
        raise DimensionMismatch("negative item count")

    matrix = _parse_matrix(bids, n, m, "bids")
    true = None
    if raw.get("utilities") is not None:
        true = _parse_matrix(raw["utilities"], n, m, "utilities")
    return Instance(
        num_agents=n,
        num_items=m,
        bids=matrix,
        true_utilities=true,
        agent_names=agent_names,
        item_names=item_names,
    )


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return validate_instance(json.load(fh))


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(inst.to_dict(), fh, indent=2)
        fh.write("\n")


@dataclass(frozen=True)
class Allocation:
    """Assignment of each item to at most one agent.

    ``owner[j]`` is the agent index holding item ``j`` or :data:`UNALLOCATED`.
    A complete allocation has no unallocated entries; the online mechanisms
    may leave items unallocated when nobody bids on them.
    """

    owner: tuple[Optional[int], ...]

    def __len__(self) -> int:
        return len(self.owner)

    @property
    def is_complete(self) -> bool:
        return all(a is not None for a in self.owner)

    def bundle(self, agent: int) -> tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.owner) if a == agent)

    def bundles(self, num_agents: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(num_agents)]
        for j, a in enumerate(self.owner):
            if a is not None:
                out[a].append(j)
        return out

    def validate_for(self, inst: Instance) -> None:
        if len(self.owner) != inst.num_items:
            raise DimensionMismatch(
                f"allocation covers {len(self.owner)} items, instance has {inst.num_items}"
            )
        for j, a in enumerate(self.owner):
            if a is not None and not (isinstance(a, int) and 0 <= a < inst.num_agents):
                raise IndexOutOfRange(f"owner of item {j} is {a!r}")

    def to_list(self) -> list:
        return list(self.owner)


def allocation_from_list(entries: Iterable) -> Allocation:
    owners = []
    for j, entry in enumerate(entries):
        if entry is None:
            owners.append(None)
        elif isinstance(entry, int) and not isinstance(entry, bool):
            owners.append(entry)
        else:
            raise IndexOutOfRange(f"allocation entry {j} must be an agent index or null")
    return Allocation(tuple(owners))


def load_allocation(path, inst: Optional[Instance] = None) -> Allocation:
    with open(path, "r", encoding="utf-8") as fh:
        alloc = allocation_from_list(json.load(fh))
    if inst is not None:
        alloc.validate_for(inst)
    return alloc


def save_allocation(alloc: Allocation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(alloc.to_list(), fh)
        fh.write("\n")


def bundle_utility(
    inst: Instance, agent: int, bundle: Iterable[int], use_true: bool = True
) -> Fraction:
    """Additive utility of ``agent`` for a set of items."""
    if not 0 <= agent < inst.num_agents:
        raise IndexOutOfRange(f"agent {agent} out of range")
    values = inst.values(use_true)
    total = Fraction(0)
    for j in bundle:
        if not 0 <= j < inst.num_items:
            raise IndexOutOfRange(f"item {j} out of range")
        total += values[agent][j]
    return total
