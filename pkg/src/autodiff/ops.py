"""
Differentiable primitives.

Each primitive computes its forward value with numpy and records a
vector-Jacobian product on the operand tape. Broadcasting follows numpy
rules; gradients are summed back to the operand shape.
"""

from typing import Optional, Union

import numpy as np

from ..exceptions import ContractError, DimensionError
from .tape import Node, Tape

Operand = Union[Node, float, int, np.ndarray]


def _tape_of(*operands: Operand) -> Tape:
    for operand in operands:
        if isinstance(operand, Node):
            return operand.tape
    raise ContractError("At least one operand must be a Node")


def _lift(tape: Tape, operand: Operand) -> Node:
    if isinstance(operand, Node):
        return operand
    return tape.constant(operand)


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum a broadcast gradient back down to ``shape``."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _expand(grad: np.ndarray, shape: tuple, axis: Optional[int], keepdims: bool) -> np.ndarray:
    if axis is not None and not keepdims:
        grad = np.expand_dims(grad, axis)
    return np.broadcast_to(grad, shape).copy()


# ========== Dense layer ==========


def forward_dense(x: Node, weights: Node, bias: Node) -> Node:
    """
    Affine map ``x @ W + b``.

    Args:
        x: Input of shape ``(d,)`` or ``(B, d)``.
        weights: Matrix of shape ``(d, k)``.
        bias: Vector of shape ``(k,)``.

    Returns:
        Node of shape ``(k,)`` or ``(B, k)``.

    Raises:
        DimensionError: If the shapes do not chain.
    """
    tape = _tape_of(x, weights, bias)
    x, weights, bias = _lift(tape, x), _lift(tape, weights), _lift(tape, bias)
    if weights.value.ndim != 2 or x.value.ndim not in (1, 2):
        raise DimensionError("dense expects (B, d) input and (d, k) weights", x.shape, weights.shape)
    if x.shape[-1] != weights.shape[0]:
        raise DimensionError("dense input width does not match weights", x.shape, weights.shape)
    if bias.shape != (weights.shape[1],):
        raise DimensionError("dense bias does not match weights", bias.shape, weights.shape)

    xv, wv = x.value, weights.value
    value = xv @ wv + bias.value

    def vjp(grad):
        grad_x = grad @ wv.T
        if xv.ndim == 1:
            grad_w = np.outer(xv, grad)
            grad_b = grad
        else:
            grad_w = xv.T @ grad
            grad_b = grad.sum(axis=0)
        return grad_x, grad_w, grad_b

    return tape.record(value, (x, weights, bias), vjp, "dense")


# ========== Elementwise ==========


def add(a: Operand, b: Operand) -> Node:
    tape = _tape_of(a, b)
    a, b = _lift(tape, a), _lift(tape, b)
    sa, sb = a.shape, b.shape
    return tape.record(
        a.value + b.value,
        (a, b),
        lambda g: (_unbroadcast(g, sa), _unbroadcast(g, sb)),
        "add",
    )


def sub(a: Operand, b: Operand) -> Node:
    tape = _tape_of(a, b)
    a, b = _lift(tape, a), _lift(tape, b)
    sa, sb = a.shape, b.shape
    return tape.record(
        a.value - b.value,
        (a, b),
        lambda g: (_unbroadcast(g, sa), _unbroadcast(-g, sb)),
        "sub",
    )


def mul(a: Operand, b: Operand) -> Node:
    tape = _tape_of(a, b)
    a, b = _lift(tape, a), _lift(tape, b)
    av, bv = a.value, b.value
    return tape.record(
        av * bv,
        (a, b),
        lambda g: (_unbroadcast(g * bv, av.shape), _unbroadcast(g * av, bv.shape)),
        "mul",
    )


def scale(a: Node, factor: float) -> Node:
    """Multiply by a Python constant."""
    factor = float(factor)
    return a.tape.record(a.value * factor, (a,), lambda g: (g * factor,), "scale")


def neg(a: Node) -> Node:
    return a.tape.record(-a.value, (a,), lambda g: (-g,), "neg")


def relu(a: Node) -> Node:
    mask = a.value > 0
    return a.tape.record(np.where(mask, a.value, 0.0), (a,), lambda g: (g * mask,), "relu")


def square(a: Node) -> Node:
    av = a.value
    return a.tape.record(av * av, (a,), lambda g: (2.0 * av * g,), "square")


def exp(a: Node) -> Node:
    out = np.exp(a.value)
    return a.tape.record(out, (a,), lambda g: (g * out,), "exp")


def log(a: Node) -> Node:
    """Natural logarithm; defined for strictly positive inputs only."""
    av = a.value
    if np.any(av <= 0):
        raise ContractError("log requires strictly positive inputs")
    return a.tape.record(np.log(av), (a,), lambda g: (g / av,), "log")


def huber(a: Node, delta: float = 1.0) -> Node:
    """Quadratic inside ``|a| <= delta``, linear outside."""
    if delta <= 0:
        raise ContractError(f"huber delta must be positive, got {delta}")
    av = a.value
    inside = np.abs(av) <= delta
    value = np.where(inside, 0.5 * av * av, delta * (np.abs(av) - 0.5 * delta))
    return a.tape.record(value, (a,), lambda g: (g * np.clip(av, -delta, delta),), "huber")


# ========== Reductions ==========


def reduce_sum(a: Node, axis: Optional[int] = None, keepdims: bool = False) -> Node:
    shape = a.shape
    value = np.sum(a.value, axis=axis, keepdims=keepdims)
    return a.tape.record(
        np.asarray(value, dtype=np.float64),
        (a,),
        lambda g: (_expand(g, shape, axis, keepdims),),
        "sum",
    )


def reduce_mean(a: Node, axis: Optional[int] = None, keepdims: bool = False) -> Node:
    shape = a.shape
    count = a.value.size if axis is None else shape[axis]
    value = np.mean(a.value, axis=axis, keepdims=keepdims)
    return a.tape.record(
        np.asarray(value, dtype=np.float64),
        (a,),
        lambda g: (_expand(g, shape, axis, keepdims) / count,),
        "mean",
    )


def reduce_max(a: Node, keepdims: bool = False) -> Node:
    """
    Maximum over the last axis.

    The gradient is routed to the lowest index among tied maxima.
    """
    av = a.value
    idx = np.expand_dims(np.argmax(av, axis=-1), -1)
    value = np.take_along_axis(av, idx, axis=-1)
    if not keepdims:
        value = np.squeeze(value, axis=-1)

    def vjp(grad):
        if not keepdims:
            grad = np.expand_dims(grad, -1)
        out = np.zeros_like(av)
        np.put_along_axis(out, idx, grad, axis=-1)
        return (out,)

    return a.tape.record(value, (a,), vjp, "max")


def gather(a: Node, indices) -> Node:
    """Pick ``a[i, indices[i]]`` for every row of a ``(B, A)`` node."""
    av = a.value
    indices = np.asarray(indices)
    if av.ndim != 2 or indices.shape != (av.shape[0],):
        raise DimensionError("gather expects (B, A) values and (B,) indices", av.shape, indices.shape)
    if not np.issubdtype(indices.dtype, np.integer):
        raise ContractError("gather indices must be integers")
    if np.any(indices < 0) or np.any(indices >= av.shape[1]):
        raise ContractError(f"action index out of range [0, {av.shape[1]})")
    rows = np.arange(av.shape[0])

    def vjp(grad):
        out = np.zeros_like(av)
        out[rows, indices] = grad
        return (out,)

    return a.tape.record(av[rows, indices], (a,), vjp, "gather")


# ========== Softmax family ==========


def _check_temperature(temperature: float) -> float:
    if not temperature > 0:
        raise ContractError(f"temperature must be > 0, got {temperature}")
    return float(temperature)


def softmax(logits: Node, temperature: float = 1.0) -> Node:
    """
    Row-wise softmax over the last axis, computed with max-subtraction.

    Raises:
        ContractError: If temperature <= 0.
    """
    tau = _check_temperature(temperature)
    z = logits.value / tau
    z = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(z)
    probs = e / np.sum(e, axis=-1, keepdims=True)

    def vjp(grad):
        inner = np.sum(grad * probs, axis=-1, keepdims=True)
        return (probs * (grad - inner) / tau,)

    return logits.tape.record(probs, (logits,), vjp, "softmax")


def log_softmax(logits: Node, temperature: float = 1.0) -> Node:
    """Row-wise log of softmax, stable for large logits."""
    tau = _check_temperature(temperature)
    z = logits.value / tau
    z = z - np.max(z, axis=-1, keepdims=True)
    lse = np.log(np.sum(np.exp(z), axis=-1, keepdims=True))
    value = z - lse
    probs = np.exp(value)

    def vjp(grad):
        total = np.sum(grad, axis=-1, keepdims=True)
        return ((grad - probs * total) / tau,)

    return logits.tape.record(value, (logits,), vjp, "log_softmax")
