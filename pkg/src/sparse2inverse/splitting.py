"""Modular angle partitioning and the subset collection driving training.

The l angle indices are split into k folds by index modulo k. Training
works with the collection of all p-element subsets of folds: each member
contributes a network input (the mean FBP over its folds) and a loss
target (the measured data on the complementary angles).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .geometry import Geometry
from .projector import Sinogram, fbp, restrict


@dataclass(frozen=True)
class Partition:
    """k disjoint angle-index folds, fold i = {j : j mod k == i}."""

    k: int
    l: int
    folds: tuple[tuple[int, ...], ...]

    def fold_ids(self, i: int) -> np.ndarray:
        return np.asarray(self.folds[i], dtype=np.intp)


@dataclass(frozen=True)
class SubsetSelection:
    """All p-element subsets of a partition's folds.

    ``members[m]`` lists the fold indices of member m;
    ``input_angle_ids[m]`` is the union of its folds and
    ``target_angle_ids[m]`` the complement, which together partition the
    full angle set.
    """

    p: int
    members: tuple[tuple[int, ...], ...]
    input_angle_ids: tuple[tuple[int, ...], ...]
    target_angle_ids: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.members)


def make_partition(l: int, k: int) -> Partition:
    """Partition angle indices 0..l-1 into k modular folds."""
    if k < 2:
        raise ValueError(f"need at least 2 folds, got k={k}")
    if k > l:
        raise ValueError(f"cannot split {l} angles into {k} folds")
    folds = tuple(tuple(range(i, l, k)) for i in range(k))
    return Partition(k=k, l=l, folds=folds)


def make_selection(partition: Partition, p: int) -> SubsetSelection:
    """Enumerate all p-element fold subsets with their input/target ids."""
    if not 1 <= p < partition.k:
        raise ValueError(
            f"subset size must satisfy 1 <= p < k, got p={p}, k={partition.k}")
    members = tuple(combinations(range(partition.k), p))
    inputs, targets = [], []
    for member in members:
        chosen = sorted(j for i in member for j in partition.folds[i])
        rest = sorted(set(range(partition.l)) - set(chosen))
        inputs.append(tuple(chosen))
        targets.append(tuple(rest))
    return SubsetSelection(p=p, members=members,
                           input_angle_ids=tuple(inputs),
                           target_angle_ids=tuple(targets))


def _check_consistent(sino: Sinogram, partition: Partition) -> None:
    if sino.n_angles != partition.l or sino.angle_ids[-1] != partition.l - 1:
        raise ValueError(
            f"partition over {partition.l} angles does not match sinogram "
            f"with {sino.n_angles} rows")


def network_input(sino: Sinogram, partition: Partition,
                  selection: SubsetSelection, member: int, geom: Geometry,
                  filter_name: str = "ram-lak") -> np.ndarray:
    """Mean sub-reconstruction over the member's folds (the network input)."""
    _check_consistent(sino, partition)
    fold_indices = selection.members[member]
    subs = [fbp(restrict(sino, partition.fold_ids(i)), geom, filter_name)
            for i in fold_indices]
    return np.mean(subs, axis=0)


def target_data(sino: Sinogram, partition: Partition,
                selection: SubsetSelection, member: int) -> Sinogram:
    """Measured rows on the member's complement angles (the loss target)."""
    _check_consistent(sino, partition)
    return restrict(sino, np.asarray(selection.target_angle_ids[member]))
