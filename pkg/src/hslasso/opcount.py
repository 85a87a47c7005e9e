"""Deterministic arithmetic-operation accounting for solver benchmarks.

Counts are exact integers accumulated by explicit charge calls at each
algebraic step, so they do not depend on the host platform, BLAS kernels,
or interpreter version.  Convention:

* a dense matrix-vector product of shape (rows, cols) costs
  ``rows*cols`` multiplications and ``rows*(cols-1)`` additions, i.e.
  ``p*(2p-1)`` for a square p x p product;
* an axpy update of length m costs m multiplications and m additions;
* a soft-threshold application costs 2 comparisons and 1 addition per
  entry (the add is charged on every entry, dead zone included, so that
  identical iteration maps always charge identical amounts);
* one-time precomputation (gram matrix, eigendecomposition, the search
  for the starting homotopy level) goes into a separate ``setup_ops``
  bucket that is excluded from ``total()``.

Benchmark outputs report both the per-iteration total and the setup
bucket so either an inclusive or an exclusive reading is available.
"""

from __future__ import annotations

from dataclasses import dataclass

_SCALAR_KINDS = ("mult", "add", "transcendental", "comparison")


@dataclass(frozen=True)
class CounterSnapshot:
    """Immutable copy of all counter buckets."""

    mults: int
    adds: int
    transcendentals: int
    comparisons: int
    setup_ops: int

    def total(self) -> int:
        return self.mults + self.adds + self.transcendentals + self.comparisons


@dataclass
class OpCounter:
    mults: int = 0
    adds: int = 0
    transcendentals: int = 0
    comparisons: int = 0
    setup_ops: int = 0

    def total(self) -> int:
        """Benchmark total: everything except the setup bucket."""
        return self.mults + self.adds + self.transcendentals + self.comparisons

    def snapshot(self) -> CounterSnapshot:
        return CounterSnapshot(
            self.mults, self.adds, self.transcendentals, self.comparisons, self.setup_ops
        )


def charge_matvec(counter: OpCounter | None, rows: int, cols: int) -> None:
    """Dense matrix-vector product: rows*cols mults, rows*(cols-1) adds."""
    if counter is None:
        return
    if rows < 1 or cols < 1:
        raise ValueError("matvec charge requires rows >= 1 and cols >= 1")
    counter.mults += rows * cols
    counter.adds += rows * (cols - 1)


def charge_axpy(counter: OpCounter | None, length: int) -> None:
    if counter is None:
        return
    if length < 0:
        raise ValueError("axpy charge requires length >= 0")
    counter.mults += length
    counter.adds += length


def charge_vec_add(counter: OpCounter | None, length: int) -> None:
    if counter is None:
        return
    if length < 0:
        raise ValueError("vector add charge requires length >= 0")
    counter.adds += length


def charge_vec_scale(counter: OpCounter | None, length: int) -> None:
    if counter is None:
        return
    if length < 0:
        raise ValueError("vector scale charge requires length >= 0")
    counter.mults += length


def charge_soft_threshold(counter: OpCounter | None, count: int) -> None:
    """Entrywise soft threshold: 2 comparisons + 1 add per entry."""
    if counter is None:
        return
    if count < 0:
        raise ValueError("soft-threshold charge requires count >= 0")
    counter.comparisons += 2 * count
    counter.adds += count


def charge_scalar(counter: OpCounter | None, kind: str) -> None:
    if counter is None:
        return
    if kind == "mult":
        counter.mults += 1
    elif kind == "add":
        counter.adds += 1
    elif kind == "transcendental":
        counter.transcendentals += 1
    elif kind == "comparison":
        counter.comparisons += 1
    else:
        raise ValueError(f"unknown scalar kind {kind!r}; expected one of {_SCALAR_KINDS}")


def charge_setup(counter: OpCounter | None, amount: int) -> None:
    if counter is None:
        return
    if amount < 0:
        raise ValueError("setup charge must be nonnegative")
    counter.setup_ops += amount


def snapshot(counter: OpCounter) -> CounterSnapshot:
    return counter.snapshot()
