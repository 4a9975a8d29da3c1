"""Reverse-mode autodiff tensor over float64 numpy storage.

The graph is taped implicitly: every op output keeps references to its
parents plus a closure that scatters the output gradient into them.
``backward`` on a scalar walks the graph once in reverse topological
order. Gradients accumulate additively; callers zero them between
optimizer steps with :func:`zero_grads`.

Allocation accounting: every live Tensor contributes its element count
to a global counter so benchmarks can measure the peak working set
without relying on allocator-noise-dominated RSS numbers.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from ..errors import NonFiniteError, ShapeError


class AllocationStats:
    """Live/peak tensor-element counters."""

    __slots__ = ("live_elements", "peak_elements")

    def __init__(self):
        self.live_elements = 0
        self.peak_elements = 0

    def reset_peak(self):
        """Restart peak tracking from the current live count."""
        self.peak_elements = self.live_elements


_stats = AllocationStats()

_debug_checks = True
_grad_enabled = True


def allocation_stats():
    return _stats


def set_debug_checks(enabled):
    """Toggle the NaN/Inf scan after every forward op (on by default)."""
    global _debug_checks
    previous = _debug_checks
    _debug_checks = bool(enabled)
    return previous


def debug_checks_enabled():
    return _debug_checks


@contextmanager
def no_grad():
    """Disable graph taping; op outputs carry no parents or closures."""
    global _grad_enabled
    previous = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = previous


def grad_enabled():
    return _grad_enabled


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward",
                 "_needs_grad", "__weakref__")

    def __init__(self, data, requires_grad=False, _parents=(), _backward=None):
        arr = np.asarray(data, dtype=np.float64)
        if _debug_checks and not np.all(np.isfinite(arr)):
            raise NonFiniteError("tensor holds NaN/Inf values")
        self.data = arr
        self.grad = None
        self.requires_grad = requires_grad
        self._parents = _parents
        self._backward = _backward
        self._needs_grad = requires_grad or any(p._needs_grad for p in _parents)
        _stats.live_elements += arr.size
        if _stats.live_elements > _stats.peak_elements:
            _stats.peak_elements = _stats.live_elements

    def __del__(self):
        try:
            _stats.live_elements -= self.data.size
        except Exception:
            pass

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    @property
    def ndim(self):
        return self.data.ndim

    def item(self):
        if self.data.size != 1:
            raise ShapeError(f"item() on tensor of shape {self.data.shape}")
        return float(self.data.reshape(()))

    def to_numpy(self):
        """Detached copy of the values."""
        return np.array(self.data)

    def accumulate_grad(self, g):
        if not self._needs_grad:
            return
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def backward(self):
        """Reverse pass from this scalar; accumulates into .grad slots."""
        if self.data.size != 1:
            raise ShapeError(
                f"backward() requires a scalar output, got shape {self.data.shape}"
            )
        topo = []
        seen = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in seen:
                    stack.append((parent, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"


def zero_grads(tensors):
    """Drop accumulated gradients (frees the gradient arrays)."""
    for t in tensors:
        t.grad = None


def as_tensor(value):
    """Lift ndarray/scalar inputs to constant tensors."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)
