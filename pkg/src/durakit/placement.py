"""Allocation of replicas/fragments to data centers and availability under DC outages.

Data centers fail independently of one another (each with its own outage
probability), and disks inside a reachable DC are independently unavailable
with the model's p_unavail.  The DC outage probability is the one knob that
introduces correlated unavailability between co-located fragments.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .probability import (
    DiskFailureModel,
    ErasureScheme,
    ReplicationScheme,
    _check_prob,
    binomial_tail,
)

#: Largest DC count for which the exact 2**d outage enumeration runs.
DEFAULT_ENUMERATION_CAP = 6


@dataclass(frozen=True, init=False)
class Topology:
    """A set of data centers with independent outage probabilities."""

    dc_count: int
    outage_probs: tuple[float, ...]

    def __init__(self, dc_count: int, outage_prob: float | Sequence[float] = 0.0):
        if dc_count < 1:
            raise ValueError(f"dc_count must be >= 1, got {dc_count}")
        if isinstance(outage_prob, (int, float)):
            probs = (float(outage_prob),) * dc_count
        else:
            probs = tuple(float(q) for q in outage_prob)
            if len(probs) != dc_count:
                raise ValueError(
                    f"expected {dc_count} outage probabilities, got {len(probs)}"
                )
        for q in probs:
            _check_prob("outage probability", q)
        object.__setattr__(self, "dc_count", dc_count)
        object.__setattr__(self, "outage_probs", probs)


@dataclass(frozen=True)
class Placement:
    """Assignment of every fragment (by index) to a data center id."""

    scheme: object
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        expected = getattr(self.scheme, "fragment_count", None)
        if expected is None:
            raise TypeError(
                f"scheme {type(self.scheme).__name__} does not expose fragment_count"
            )
        if len(self.assignment) != expected:
            raise ValueError(
                f"assignment covers {len(self.assignment)} fragments, "
                f"scheme has {expected}"
            )
        for dc in self.assignment:
            if not isinstance(dc, int) or dc < 0:
                raise ValueError(f"dc ids must be non-negative integers, got {dc!r}")

    def dc_of(self, index: int) -> int:
        return self.assignment[index]

    def max_dc(self) -> int:
        return max(self.assignment)


@dataclass(frozen=True)
class CatalogEstimate:
    """How many fragment records fit in a given memory budget."""

    memory_budget: int
    record_size: int
    max_fragments: int


def balanced_placement(scheme, topology: Topology | int) -> Placement:
    """Round-robin fragments across the topology's data centers."""
    d = topology.dc_count if isinstance(topology, Topology) else int(topology)
    if d < 1:
        raise ValueError(f"need at least one data center, got {d}")
    count = scheme.fragment_count
    return Placement(scheme, tuple(i % d for i in range(count)))


def min_overhead_for_availability(dc_count: int) -> float:
    """Minimum storage overhead so any single DC outage leaves all data readable.

    With d data centers each holding an equal share plus enough redundancy
    to cover one missing DC, the overhead is 1/(d-1): 100% for 2 DCs, 50%
    for 3, and so on.  A single DC cannot survive its own outage.
    """
    if dc_count < 2:
        raise ValueError(
            f"need at least 2 data centers to survive a DC outage, got {dc_count}"
        )
    return 1.0 / (dc_count - 1)


def replication_unavailability(
    model: DiskFailureModel, topology: Topology, replicas: int
) -> float:
    """Probability no replica is reachable, one replica in each of the first k DCs.

    A replica is unreachable when its DC is out, or the DC is up but the
    disk itself is unavailable: q + (1-q) * p_unavail per DC.
    """
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    if replicas > topology.dc_count:
        raise ValueError(
            f"cannot place {replicas} one-per-DC replicas in "
            f"{topology.dc_count} data centers"
        )
    product = 1.0
    for q in topology.outage_probs[:replicas]:
        product *= q + (1.0 - q) * model.p_unavail
    return product


def ec_unavailability(
    model: DiskFailureModel,
    topology: Topology,
    placement: Placement,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Probability fewer than m fragments are reachable, exact over DC outage states.

    Sums over all 2**d outage subsets; conditional on the up/down pattern,
    fragments in up DCs are independently unavailable with p_unavail, so the
    reachable count is binomial.  Co-locating fragments can only raise this
    number relative to the uncorrelated m+n tail.
    """
    scheme = placement.scheme
    if not isinstance(scheme, ErasureScheme):
        raise TypeError(
            f"ec_unavailability needs an ErasureScheme placement, got "
            f"{type(scheme).__name__}"
        )
    return _enumerated_unavailability(
        model, topology, placement, scheme.m, enumeration_cap
    )


def placement_unavailability(
    model: DiskFailureModel,
    topology: Topology,
    placement: Placement,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Unavailability of an arbitrary placement: EC needs m reachable, replication 1.

    For a one-replica-per-DC replication placement this agrees with
    replication_unavailability; unlike that operation it also covers
    co-located replicas exactly.
    """
    scheme = placement.scheme
    if isinstance(scheme, ErasureScheme):
        need = scheme.m
    elif isinstance(scheme, ReplicationScheme):
        need = 1
    else:
        raise TypeError(
            f"unsupported scheme type: {type(scheme).__name__}"
        )
    return _enumerated_unavailability(model, topology, placement, need, enumeration_cap)


def _enumerated_unavailability(
    model: DiskFailureModel,
    topology: Topology,
    placement: Placement,
    need: int,
    enumeration_cap: int,
) -> float:
    d = topology.dc_count
    if d > enumeration_cap:
        raise ValueError(
            f"exact enumeration capped at {enumeration_cap} data centers "
            f"(got {d}); use the Monte Carlo simulator beyond that"
        )
    if placement.max_dc() >= d:
        raise ValueError(
            f"placement references dc {placement.max_dc()} outside topology "
            f"of {d} data centers"
        )

    per_dc = [0] * d
    for dc in placement.assignment:
        per_dc[dc] += 1

    p_u = model.p_unavail
    qs = topology.outage_probs
    total = 0.0
    for mask in range(1 << d):
        prob = 1.0
        up_fragments = 0
        for dc in range(d):
            if mask >> dc & 1:
                prob *= qs[dc]
            else:
                prob *= 1.0 - qs[dc]
                up_fragments += per_dc[dc]
        if prob == 0.0:
            continue
        total += prob * _prob_reachable_below(up_fragments, need, p_u)
    return min(1.0, total)


def _prob_reachable_below(fragments_up: int, m: int, p_unavail: float) -> float:
    """P[fewer than m of fragments_up independent fragments are reachable]."""
    if fragments_up < m:
        return 1.0
    # reachable < m  <=>  unavailable > fragments_up - m
    return binomial_tail(p_unavail, fragments_up, fragments_up - m)


def catalog_capacity(memory_budget: int, record_size: int) -> CatalogEstimate:
    """Fragment-catalog sizing: how many per-fragment records fit in memory."""
    if record_size < 1:
        raise ValueError(f"record_size must be >= 1 byte, got {record_size}")
    if memory_budget < 0:
        raise ValueError(f"memory_budget must be >= 0, got {memory_budget}")
    return CatalogEstimate(
        memory_budget=memory_budget,
        record_size=record_size,
        max_fragments=memory_budget // record_size,
    )
