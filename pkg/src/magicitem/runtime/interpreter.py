"""ItemScript interpreter.

Programs compile to trees of Python closures; each executed node costs
one unit of instruction budget.  Scripts cannot touch the world
directly: host reads go through a per-dispatch snapshot and all writes
come back as Effect records for the simulator to apply at frame end.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from ..lang import nodes as n
from ..lang.printer import format_number
from . import effects as fx
from .errors import ErrorKind, ScriptError
from .state_codec import STATE_CAP_BYTES, measured_size
from .values import (
    MATH,
    Closure,
    HostFn,
    ItemHandle,
    MathHandle,
    PlayerHandle,
    StateDict,
    Vector3Value,
    display,
    strict_equals,
    truthy,
    type_name,
)

DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_CALL_DEPTH = 64
CONSOLE_CAP = 500

EVENT_KINDS = ("start", "update", "interact", "grab", "release", "ride", "exitRide")

_REGISTRARS = {
    "onStart": "start",
    "onUpdate": "update",
    "onInteract": "interact",
    "onGrab": "grab",
    "onRelease": "release",
    "onRide": "ride",
    "onExitRide": "exitRide",
}


@dataclass(frozen=True)
class Limits:
    max_nodes: int = DEFAULT_MAX_NODES
    max_call_depth: int = DEFAULT_MAX_CALL_DEPTH


@dataclass
class DispatchResult:
    effects: list
    console: list[str]


class ScriptInstance:
    """A compiled program plus its registered callbacks and state."""

    __slots__ = ("program", "limits", "callbacks", "state", "console",
                 "handle", "tracked", "pending_effects")

    def __init__(self, program: n.Program, limits: Limits):
        self.program = program
        self.limits = limits
        self.callbacks: dict[str, Closure] = {}
        self.state = StateDict()
        self.console: deque[str] = deque(maxlen=CONSOLE_CAP)
        self.handle = ItemHandle(self)
        self.tracked: set[int] = {id(self.state)}
        self.pending_effects: list = []


class _Return(Exception):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


class _Env:
    __slots__ = ("vars", "parent")

    def __init__(self, parent: "_Env | None"):
        self.vars: dict[str, list] = {}  # name -> [value, is_const]
        self.parent = parent

    def lookup(self, name: str):
        env = self
        while env is not None:
            cell = env.vars.get(name)
            if cell is not None:
                return cell
            env = env.parent
        return None


class _Run:
    """Per-execution accounting: budget, effects, console, host view."""

    __slots__ = ("nodes", "depth", "host", "effects", "console", "instance")

    def __init__(self, limits: Limits, host, instance: ScriptInstance):
        self.nodes = limits.max_nodes
        self.depth = limits.max_call_depth
        self.host = host
        self.effects: list = []
        self.console: list[str] = []
        self.instance = instance


# - public API -


def instantiate(program: n.Program, host, limits: Limits = Limits()) -> ScriptInstance:
    """Execute top-level statements once and capture registrations.

    Effects emitted at top level are queued on `pending_effects` for the
    installer to apply.  Any ScriptError aborts instantiation.
    """
    thunks = [_compile_stmt(s) for s in program.statements]
    instance = ScriptInstance(program, limits)
    rt = _Run(limits, host, instance)
    env = _root_env(instance)
    try:
        for thunk in thunks:
            thunk(rt, env)
    except _Return:
        pass  # top-level return just stops the script body
    except RecursionError:
        exc = ScriptError(ErrorKind.BUDGET_EXCEEDED, "evaluation nested too deeply")
        exc.console_lines = list(rt.console)
        instance.console.extend(rt.console)
        raise exc from None
    except ScriptError as exc:
        exc.console_lines = list(rt.console)
        instance.console.extend(rt.console)
        raise
    instance.console.extend(rt.console)
    instance.pending_effects = rt.effects
    return instance


def dispatch(instance: ScriptInstance, event: str, args: list, host) -> DispatchResult:
    """Run the callback registered for `event` with a fresh budget.

    Returns the effects and console lines the run emitted.  Raises
    ScriptError on any runtime error; the caller discards that run's
    effects and the instance stays installed.
    """
    if event not in EVENT_KINDS:
        raise ValueError(f"unknown event kind: {event}")
    callback = instance.callbacks.get(event)
    rt = _Run(instance.limits, host, instance)
    if callback is None:
        return DispatchResult([], [])
    try:
        _call_closure(rt, callback, list(args), n.Span(0, 0, 0))
    except RecursionError:
        exc = ScriptError(ErrorKind.BUDGET_EXCEEDED, "evaluation nested too deeply")
        exc.console_lines = list(rt.console)
        instance.console.extend(rt.console)
        raise exc from None
    except ScriptError as exc:
        exc.console_lines = list(rt.console)
        instance.console.extend(rt.console)
        raise
    instance.console.extend(rt.console)
    return DispatchResult(rt.effects, rt.console)


def snapshot_state(instance: ScriptInstance) -> bytes:
    from .state_codec import encode_state

    return encode_state(instance.state)


def restore_state(instance: ScriptInstance, blob: bytes) -> None:
    from .state_codec import decode_state

    state = decode_state(blob)
    instance.state = state
    instance.tracked = {id(state)}
    _track_containers(state, instance.tracked)


def _root_env(instance: ScriptInstance) -> _Env:
    env = _Env(None)
    env.vars["$"] = [instance.handle, True]
    env.vars["Vector3"] = [HostFn("Vector3", _vector3_ctor), True]
    env.vars["Math"] = [MATH, True]
    return env


# - compilation: statements -


def _compile_stmt(stmt: n.Stmt):
    if isinstance(stmt, n.VarDecl):
        return _compile_var_decl(stmt)
    if isinstance(stmt, n.ExprStmt):
        inner = _compile_expr(stmt.expr)
        line, col = stmt.span.line, stmt.span.column

        def run_expr_stmt(rt, env):
            inner(rt, env)

        return run_expr_stmt
    if isinstance(stmt, n.If):
        return _compile_if(stmt)
    if isinstance(stmt, n.While):
        return _compile_while(stmt)
    if isinstance(stmt, n.For):
        return _compile_for(stmt)
    if isinstance(stmt, n.Block):
        thunks = [_compile_stmt(s) for s in stmt.statements]

        def run_block(rt, env):
            _spend(rt, stmt.span)
            inner_env = _Env(env)
            for thunk in thunks:
                thunk(rt, inner_env)

        return run_block
    if isinstance(stmt, n.Return):
        value_thunk = _compile_expr(stmt.value) if stmt.value is not None else None

        def run_return(rt, env):
            _spend(rt, stmt.span)
            raise _Return(value_thunk(rt, env) if value_thunk is not None else None)

        return run_return
    raise TypeError(f"unknown statement node: {stmt!r}")


def _compile_var_decl(stmt: n.VarDecl):
    init = _compile_expr(stmt.init) if stmt.init is not None else None
    name = stmt.name
    is_const = stmt.kind == "const"
    span = stmt.span

    def run_var_decl(rt, env):
        _spend(rt, span)
        value = init(rt, env) if init is not None else None
        env.vars[name] = [value, is_const]

    return run_var_decl


def _compile_if(stmt: n.If):
    cond = _compile_expr(stmt.cond)
    then = _compile_stmt(stmt.then)
    orelse = _compile_stmt(stmt.orelse) if stmt.orelse is not None else None
    span = stmt.span

    def run_if(rt, env):
        _spend(rt, span)
        if truthy(cond(rt, env)):
            then(rt, env)
        elif orelse is not None:
            orelse(rt, env)

    return run_if


def _compile_while(stmt: n.While):
    cond = _compile_expr(stmt.cond)
    body = _compile_stmt(stmt.body)
    span = stmt.span

    def run_while(rt, env):
        _spend(rt, span)
        while truthy(cond(rt, env)):
            body(rt, env)

    return run_while


def _compile_for(stmt: n.For):
    init = _compile_stmt(stmt.init) if stmt.init is not None else None
    cond = _compile_expr(stmt.cond) if stmt.cond is not None else None
    update = _compile_expr(stmt.update) if stmt.update is not None else None
    body = _compile_stmt(stmt.body)
    span = stmt.span

    def run_for(rt, env):
        _spend(rt, span)
        loop_env = _Env(env)
        if init is not None:
            init(rt, loop_env)
        while cond is None or truthy(cond(rt, loop_env)):
            body(rt, loop_env)
            if update is not None:
                update(rt, loop_env)

    return run_for


def _spend(rt, span):
    rt.nodes -= 1
    if rt.nodes < 0:
        raise ScriptError(ErrorKind.BUDGET_EXCEEDED,
                          "instruction budget exhausted", span.line, span.column)


# - compilation: expressions -


def _compile_expr(expr: n.Expr):
    if isinstance(expr, n.NumberLit):
        value = expr.value
        span = expr.span

        def run_number(rt, env):
            _spend(rt, span)
            return value

        return run_number
    if isinstance(expr, n.StringLit):
        value = expr.value
        span = expr.span

        def run_string(rt, env):
            _spend(rt, span)
            return value

        return run_string
    if isinstance(expr, n.BoolLit):
        value = expr.value
        span = expr.span

        def run_bool(rt, env):
            _spend(rt, span)
            return value

        return run_bool
    if isinstance(expr, n.NullLit):
        span = expr.span

        def run_null(rt, env):
            _spend(rt, span)
            return None

        return run_null
    if isinstance(expr, n.ArrayLit):
        items = [_compile_expr(e) for e in expr.items]
        span = expr.span

        def run_array(rt, env):
            _spend(rt, span)
            return [item(rt, env) for item in items]

        return run_array
    if isinstance(expr, n.ObjectLit):
        entries = [(key, _compile_expr(value)) for key, value in expr.entries]
        span = expr.span

        def run_object(rt, env):
            _spend(rt, span)
            return {key: thunk(rt, env) for key, thunk in entries}

        return run_object
    if isinstance(expr, n.Ident):
        return _compile_ident(expr)
    if isinstance(expr, n.Member):
        obj = _compile_expr(expr.obj)
        name = expr.name
        span = expr.span

        def run_member(rt, env):
            _spend(rt, span)
            return _get_member(rt, obj(rt, env), name, span)

        return run_member
    if isinstance(expr, n.Index):
        obj = _compile_expr(expr.obj)
        index = _compile_expr(expr.index)
        span = expr.span

        def run_index(rt, env):
            _spend(rt, span)
            return _get_index(rt, obj(rt, env), index(rt, env), span)

        return run_index
    if isinstance(expr, n.Call):
        return _compile_call(expr)
    if isinstance(expr, n.Unary):
        return _compile_unary(expr)
    if isinstance(expr, n.Binary):
        return _compile_binary(expr)
    if isinstance(expr, n.Assign):
        return _compile_assign(expr)
    if isinstance(expr, n.Conditional):
        cond = _compile_expr(expr.cond)
        then = _compile_expr(expr.then)
        orelse = _compile_expr(expr.orelse)
        span = expr.span

        def run_conditional(rt, env):
            _spend(rt, span)
            return then(rt, env) if truthy(cond(rt, env)) else orelse(rt, env)

        return run_conditional
    if isinstance(expr, n.Arrow):
        return _compile_arrow(expr)
    raise TypeError(f"unknown expression node: {expr!r}")


def _compile_ident(expr: n.Ident):
    name = expr.name
    span = expr.span

    def run_ident(rt, env):
        _spend(rt, span)
        cell = env.lookup(name)
        if cell is None:
            raise ScriptError(ErrorKind.UNSUPPORTED_API,
                              f"{name} is not defined", span.line, span.column, path=name)
        return cell[0]

    return run_ident


def _compile_arrow(expr: n.Arrow):
    params = list(expr.params)
    span = expr.span
    if expr.is_expr_body:
        body = _compile_expr(expr.body)

        def run_arrow_expr(rt, env):
            _spend(rt, span)
            return Closure(params, body, env, True)

        return run_arrow_expr
    body_thunks = [_compile_stmt(s) for s in expr.body.statements]

    def run_arrow_block(rt, env):
        _spend(rt, span)
        return Closure(params, body_thunks, env, False)

    return run_arrow_block


def _compile_call(expr: n.Call):
    callee = _compile_expr(expr.callee)
    args = [_compile_expr(a) for a in expr.args]
    span = expr.span

    def run_call(rt, env):
        _spend(rt, span)
        fn = callee(rt, env)
        values = [a(rt, env) for a in args]
        if isinstance(fn, HostFn):
            return fn.fn(rt, values, span)
        if isinstance(fn, Closure):
            return _call_closure(rt, fn, values, span)
        raise ScriptError(ErrorKind.TYPE_MISMATCH,
                          f"{type_name(fn)} is not a function", span.line, span.column)

    return run_call


def _call_closure(rt, closure: Closure, args: list, span: n.Span):
    rt.depth -= 1
    if rt.depth < 0:
        raise ScriptError(ErrorKind.BUDGET_EXCEEDED,
                          f"call depth exceeded ({DEFAULT_MAX_CALL_DEPTH} max)",
                          span.line, span.column)
    env = _Env(closure.env)
    params = closure.params
    for i, name in enumerate(params):
        env.vars[name] = [args[i] if i < len(args) else None, False]
    try:
        if closure.is_expr:
            return closure.body(rt, env)
        for thunk in closure.body:
            thunk(rt, env)
        return None
    except _Return as ret:
        return ret.value
    finally:
        rt.depth += 1


def _compile_unary(expr: n.Unary):
    operand = _compile_expr(expr.operand)
    span = expr.span
    if expr.op == "!":

        def run_not(rt, env):
            _spend(rt, span)
            return not truthy(operand(rt, env))

        return run_not

    def run_neg(rt, env):
        _spend(rt, span)
        value = operand(rt, env)
        if not isinstance(value, float):
            raise ScriptError(ErrorKind.TYPE_MISMATCH,
                              f"unary '-' needs a number, got {type_name(value)}",
                              span.line, span.column)
        return -value

    return run_neg


def _compile_binary(expr: n.Binary):
    left = _compile_expr(expr.left)
    right = _compile_expr(expr.right)
    op = expr.op
    span = expr.span

    if op == "&&":

        def run_and(rt, env):
            _spend(rt, span)
            value = left(rt, env)
            return right(rt, env) if truthy(value) else value

        return run_and
    if op == "||":

        def run_or(rt, env):
            _spend(rt, span)
            value = left(rt, env)
            return value if truthy(value) else right(rt, env)

        return run_or
    if op == "==":

        def run_eq(rt, env):
            _spend(rt, span)
            return strict_equals(left(rt, env), right(rt, env))

        return run_eq
    if op == "!=":

        def run_ne(rt, env):
            _spend(rt, span)
            return not strict_equals(left(rt, env), right(rt, env))

        return run_ne
    if op == "+":

        def run_add(rt, env):
            _spend(rt, span)
            a = left(rt, env)
            b = right(rt, env)
            if isinstance(a, float) and isinstance(b, float):
                return a + b
            if isinstance(a, str) and isinstance(b, str):
                return a + b
            raise _arith_mismatch("+", a, b, span)

        return run_add

    if op in ("-", "*", "/", "%"):
        fn = _ARITH[op]

        def run_arith(rt, env):
            _spend(rt, span)
            a = left(rt, env)
            b = right(rt, env)
            if isinstance(a, float) and isinstance(b, float):
                return fn(a, b)
            raise _arith_mismatch(op, a, b, span)

        return run_arith

    # relational
    def run_rel(rt, env):
        _spend(rt, span)
        a = left(rt, env)
        b = right(rt, env)
        if isinstance(a, float) and isinstance(b, float):
            pass
        elif isinstance(a, str) and isinstance(b, str):
            pass
        else:
            raise _arith_mismatch(op, a, b, span)
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b

    return run_rel


def _js_div(a: float, b: float) -> float:
    if b == 0.0:
        if a == 0.0 or a != a:
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    return a / b


def _js_mod(a: float, b: float) -> float:
    if b == 0.0 or a != a or b != b or math.isinf(a):
        return math.nan
    if math.isinf(b):
        return a
    return math.fmod(a, b)


_ARITH = {
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _js_div,
    "%": _js_mod,
}


def _arith_mismatch(op, a, b, span):
    return ScriptError(ErrorKind.TYPE_MISMATCH,
                       f"'{op}' needs numbers, got {type_name(a)} and {type_name(b)}",
                       span.line, span.column)


def _compile_assign(expr: n.Assign):
    op = expr.op
    value_thunk = _compile_expr(expr.value)
    span = expr.span
    target = expr.target

    if isinstance(target, n.Ident):
        name = target.name

        def run_assign_ident(rt, env):
            _spend(rt, span)
            cell = env.lookup(name)
            if cell is None:
                raise ScriptError(ErrorKind.UNSUPPORTED_API,
                                  f"{name} is not declared", span.line, span.column,
                                  path=name)
            if cell[1]:
                raise ScriptError(ErrorKind.TYPE_MISMATCH,
                                  f"assignment to constant {name}", span.line, span.column)
            value = value_thunk(rt, env)
            if op != "=":
                value = _compound(op, cell[0], value, span)
            cell[0] = value
            return value

        return run_assign_ident

    if isinstance(target, n.Member):
        obj_thunk = _compile_expr(target.obj)
        name = target.name

        def run_assign_member(rt, env):
            _spend(rt, span)
            obj = obj_thunk(rt, env)
            value = value_thunk(rt, env)
            if op != "=":
                current = _get_member(rt, obj, name, span)
                value = _compound(op, current, value, span)
            _set_member(rt, obj, name, value, span)
            return value

        return run_assign_member

    obj_thunk = _compile_expr(target.obj)
    index_thunk = _compile_expr(target.index)

    def run_assign_index(rt, env):
        _spend(rt, span)
        obj = obj_thunk(rt, env)
        key = index_thunk(rt, env)
        value = value_thunk(rt, env)
        if op != "=":
            current = _get_index(rt, obj, key, span)
            value = _compound(op, current, value, span)
        _set_index(rt, obj, key, value, span)
        return value

    return run_assign_index


def _compound(op, current, value, span):
    base = op[0]
    if base == "+":
        if isinstance(current, float) and isinstance(value, float):
            return current + value
        if isinstance(current, str) and isinstance(value, str):
            return current + value
        raise _arith_mismatch("+", current, value, span)
    if isinstance(current, float) and isinstance(value, float):
        return _ARITH[base](current, value)
    raise _arith_mismatch(base, current, value, span)


# - member and index access -


def _get_member(rt, obj, name, span):
    if isinstance(obj, dict):
        return obj.get(name)
    if isinstance(obj, Vector3Value):
        if name == "x":
            return obj.x
        if name == "y":
            return obj.y
        if name == "z":
            return obj.z
        method = _VECTOR_METHODS.get(name)
        if method is not None:
            return _bind(f"Vector3.{name}", method, obj)
        raise _unsupported(f"Vector3.{name}", span)
    if isinstance(obj, ItemHandle):
        if name == "state":
            return rt.instance.state
        fn = _ITEM_FNS.get(name)
        if fn is not None:
            return fn
        raise _unsupported(f"$.{name}", span)
    if isinstance(obj, PlayerHandle):
        method = _PLAYER_METHODS.get(name)
        if method is not None:
            return _bind(f"player.{name}", method, obj)
        raise _unsupported(f"player.{name}", span)
    if isinstance(obj, MathHandle):
        if name == "PI":
            return math.pi
        fn = _MATH_FNS.get(name)
        if fn is not None:
            return fn
        raise _unsupported(f"Math.{name}", span)
    if obj is None:
        raise ScriptError(ErrorKind.TYPE_MISMATCH,
                          f"cannot read property '{name}' of null", span.line, span.column)
    raise _unsupported(f"{type_name(obj)}.{name}", span)


def _set_member(rt, obj, name, value, span):
    if isinstance(obj, dict):
        tracked = rt.instance.tracked
        if id(obj) in tracked:
            _state_write(rt, obj, name, value, span)
        else:
            obj[name] = value
        return
    if isinstance(obj, Vector3Value):
        if name in ("x", "y", "z"):
            if not isinstance(value, float):
                raise ScriptError(ErrorKind.TYPE_MISMATCH,
                                  f"Vector3.{name} must be a number, got {type_name(value)}",
                                  span.line, span.column)
            setattr(obj, name, value)
            return
        raise _unsupported(f"Vector3.{name}", span)
    if isinstance(obj, ItemHandle):
        if name == "state":
            if not isinstance(value, dict):
                raise ScriptError(ErrorKind.TYPE_MISMATCH,
                                  f"$.state must be an object, got {type_name(value)}",
                                  span.line, span.column)
            state = rt.instance.state
            if value is state:
                return
            old = dict(state)
            state.clear()
            state.update(value)
            _track_containers(state, rt.instance.tracked)
            if measured_size(state) > STATE_CAP_BYTES:
                state.clear()
                state.update(old)
                raise ScriptError(ErrorKind.STATE_OVERFLOW,
                                  "state exceeds the 8 KiB cap", span.line, span.column)
            return
        if name in _ITEM_FNS:
            raise ScriptError(ErrorKind.TYPE_MISMATCH,
                              f"$.{name} cannot be assigned", span.line, span.column)
        raise _unsupported(f"$.{name}", span)
    if isinstance(obj, PlayerHandle):
        if name in _PLAYER_METHODS:
            raise ScriptError(ErrorKind.TYPE_MISMATCH,
                              f"player.{name} cannot be assigned", span.line, span.column)
        raise _unsupported(f"player.{name}", span)
    if isinstance(obj, MathHandle):
        if name == "PI" or name in _MATH_FNS:
            raise ScriptError(ErrorKind.TYPE_MISMATCH,
                              f"Math.{name} cannot be assigned", span.line, span.column)
        raise _unsupported(f"Math.{name}", span)
    if obj is None:
        raise ScriptError(ErrorKind.TYPE_MISMATCH,
                          f"cannot set property '{name}' of null", span.line, span.column)
    raise _unsupported(f"{type_name(obj)}.{name}", span)


def _get_index(rt, obj, key, span):
    if isinstance(obj, list):
        if not isinstance(key, float) or key != int(key):
            return None
        i = int(key)
        if 0 <= i < len(obj):
            return obj[i]
        return None
    if isinstance(obj, dict):
        return obj.get(_dict_key(key, span))
    if isinstance(obj, str):
        if not isinstance(key, float) or key != int(key):
            return None
        i = int(key)
        if 0 <= i < len(obj):
            return obj[i]
        return None
    raise ScriptError(ErrorKind.TYPE_MISMATCH,
                      f"{type_name(obj)} cannot be indexed", span.line, span.column)


def _set_index(rt, obj, key, value, span):
    if isinstance(obj, list):
        if not isinstance(key, float) or key != int(key):
            raise ScriptError(ErrorKind.TYPE_MISMATCH,
                              "array index must be a whole number", span.line, span.column)
        i = int(key)
        if not 0 <= i <= len(obj):
            raise ScriptError(ErrorKind.TYPE_MISMATCH,
                              f"array index {i} out of range (length {len(obj)})",
                              span.line, span.column)
        tracked = rt.instance.tracked
        if id(obj) in tracked:
            _state_write_index(rt, obj, i, value, span)
        elif i == len(obj):
            obj.append(value)
        else:
            obj[i] = value
        return
    if isinstance(obj, dict):
        name = _dict_key(key, span)
        _set_member(rt, obj, name, value, span)
        return
    raise ScriptError(ErrorKind.TYPE_MISMATCH,
                      f"{type_name(obj)} cannot be indexed", span.line, span.column)


def _dict_key(key, span) -> str:
    if isinstance(key, str):
        return key
    if isinstance(key, float):
        return format_number(key)
    raise ScriptError(ErrorKind.TYPE_MISMATCH,
                      f"object key must be a string or number, got {type_name(key)}",
                      span.line, span.column)


# - state write tracking -


def _state_write(rt, obj: dict, name: str, value, span):
    had = name in obj
    old = obj.get(name)
    obj[name] = value
    _track_containers(value, rt.instance.tracked)
    if measured_size(rt.instance.state) > STATE_CAP_BYTES:
        if had:
            obj[name] = old
        else:
            del obj[name]
        raise ScriptError(ErrorKind.STATE_OVERFLOW,
                          "state exceeds the 8 KiB cap", span.line, span.column)


def _state_write_index(rt, obj: list, i: int, value, span):
    appended = i == len(obj)
    old = None if appended else obj[i]
    if appended:
        obj.append(value)
    else:
        obj[i] = value
    _track_containers(value, rt.instance.tracked)
    if measured_size(rt.instance.state) > STATE_CAP_BYTES:
        if appended:
            obj.pop()
        else:
            obj[i] = old
        raise ScriptError(ErrorKind.STATE_OVERFLOW,
                          "state exceeds the 8 KiB cap", span.line, span.column)


def _track_containers(value, tracked: set[int]) -> None:
    if not isinstance(value, (list, dict)):
        return
    stack = [value]
    while stack:
        item = stack.pop()
        if id(item) in tracked and item is not value:
            continue
        tracked.add(id(item))
        if isinstance(item, list):
            stack.extend(v for v in item if isinstance(v, (list, dict)))
        elif isinstance(item, dict):
            stack.extend(v for v in item.values() if isinstance(v, (list, dict)))


def _unsupported(path: str, span) -> ScriptError:
    return ScriptError(ErrorKind.UNSUPPORTED_API,
                       f"{path} is not part of the item API", span.line, span.column,
                       path=path)


# - host functions -


def _bind(path: str, method, self_value) -> HostFn:
    return HostFn(path, lambda rt, args, span: method(rt, self_value, args, span))


def _need(args, count, path, span):
    if len(args) != count:
        plural = "" if count == 1 else "s"
        raise ScriptError(ErrorKind.ARITY_MISMATCH,
                          f"{path} takes {count} argument{plural}, got {len(args)}",
                          span.line, span.column)


def _num_arg(value, path, span) -> float:
    if not isinstance(value, float):
        raise ScriptError(ErrorKind.TYPE_MISMATCH,
                          f"{path} expected a number, got {type_name(value)}",
                          span.line, span.column)
    return value


def _vec_arg(value, path, span) -> Vector3Value:
    if not isinstance(value, Vector3Value):
        raise ScriptError(ErrorKind.TYPE_MISMATCH,
                          f"{path} expected a Vector3, got {type_name(value)}",
                          span.line, span.column)
    return value


def _finite(value: float, path: str, span) -> float:
    if not math.isfinite(value):
        raise ScriptError(ErrorKind.TYPE_MISMATCH,
                          f"non-finite number passed to {path}", span.line, span.column)
    return value


def _finite_vec(vec: Vector3Value, path: str, span) -> tuple[float, float, float]:
    return (_finite(_num_arg(vec.x, path, span), path, span),
            _finite(_num_arg(vec.y, path, span), path, span),
            _finite(_num_arg(vec.z, path, span), path, span))


def _rate_arg(value, path, span) -> float:
    rate = _finite(_num_arg(value, path, span), path, span)
    if rate < 0:
        raise ScriptError(ErrorKind.TYPE_MISMATCH,
                          f"{path} expected a rate >= 0", span.line, span.column)
    return rate


def _vector3_ctor(rt, args, span):
    _need(args, 3, "Vector3", span)
    return Vector3Value(_num_arg(args[0], "Vector3", span),
                        _num_arg(args[1], "Vector3", span),
                        _num_arg(args[2], "Vector3", span))


def _make_registrar(reg_name: str, event: str):
    path = f"$.{reg_name}"

    def register(rt, args, span):
        _need(args, 1, path, span)
        callback = args[0]
        if not isinstance(callback, Closure):
            raise ScriptError(ErrorKind.TYPE_MISMATCH,
                              f"{path} expected a function, got {type_name(callback)}",
                              span.line, span.column)
        if event in rt.instance.callbacks:
            rt.console.append(f"warning: {path} replaced an earlier {event} handler")
        rt.instance.callbacks[event] = callback
        return None

    return register


def _item_get_position(rt, args, span):
    _need(args, 0, "$.getPosition", span)
    return Vector3Value(*rt.host.item_position())


def _item_set_position(rt, args, span):
    _need(args, 1, "$.setPosition", span)
    vec = _vec_arg(args[0], "$.setPosition", span)
    rt.effects.append(fx.SetItemPosition(*_finite_vec(vec, "$.setPosition", span)))
    return None


def _item_get_rotation(rt, args, span):
    _need(args, 0, "$.getRotation", span)
    return Vector3Value(*rt.host.item_rotation())


def _item_set_rotation(rt, args, span):
    _need(args, 1, "$.setRotation", span)
    vec = _vec_arg(args[0], "$.setRotation", span)
    rt.effects.append(fx.SetItemRotation(*_finite_vec(vec, "$.setRotation", span)))
    return None


def _item_get_velocity(rt, args, span):
    _need(args, 0, "$.getVelocity", span)
    return Vector3Value(*rt.host.item_velocity())


def _item_set_velocity(rt, args, span):
    _need(args, 1, "$.setVelocity", span)
    vec = _vec_arg(args[0], "$.setVelocity", span)
    rt.effects.append(fx.SetItemVelocity(*_finite_vec(vec, "$.setVelocity", span)))
    return None


def _item_add_impulse(rt, args, span):
    _need(args, 1, "$.addImpulse", span)
    vec = _vec_arg(args[0], "$.addImpulse", span)
    rt.effects.append(fx.AddItemImpulse(*_finite_vec(vec, "$.addImpulse", span)))
    return None


def _item_set_use_gravity(rt, args, span):
    _need(args, 1, "$.setUseGravity", span)
    flag = args[0]
    if not isinstance(flag, bool):
        raise ScriptError(ErrorKind.TYPE_MISMATCH,
                          f"$.setUseGravity expected a boolean, got {type_name(flag)}",
                          span.line, span.column)
    rt.effects.append(fx.SetItemUseGravity(flag))
    return None


def _item_set_gravity_scale(rt, args, span):
    _need(args, 1, "$.setGravityScale", span)
    scale = _finite(_num_arg(args[0], "$.setGravityScale", span),
                    "$.setGravityScale", span)
    rt.effects.append(fx.SetItemGravityScale(scale))
    return None


def _item_log(rt, args, span):
    _need(args, 1, "$.log", span)
    text = display(args[0])
    rt.console.append(text)
    # also surfaced as an effect so frame traces carry the line
    rt.effects.append(fx.Log(text))
    return None


_ITEM_FNS: dict[str, HostFn] = {}
for _reg, _event in _REGISTRARS.items():
    _ITEM_FNS[_reg] = HostFn(f"$.{_reg}", _make_registrar(_reg, _event))
_ITEM_FNS.update({
    "getPosition": HostFn("$.getPosition", _item_get_position),
    "setPosition": HostFn("$.setPosition", _item_set_position),
    "getRotation": HostFn("$.getRotation", _item_get_rotation),
    "setRotation": HostFn("$.setRotation", _item_set_rotation),
    "getVelocity": HostFn("$.getVelocity", _item_get_velocity),
    "setVelocity": HostFn("$.setVelocity", _item_set_velocity),
    "addImpulse": HostFn("$.addImpulse", _item_add_impulse),
    "setUseGravity": HostFn("$.setUseGravity", _item_set_use_gravity),
    "setGravityScale": HostFn("$.setGravityScale", _item_set_gravity_scale),
    "log": HostFn("$.log", _item_log),
})


def _player_get_position(rt, handle, args, span):
    _need(args, 0, "player.getPosition", span)
    return Vector3Value(*handle.position)


def _player_set_position(rt, handle, args, span):
    _need(args, 1, "player.setPosition", span)
    vec = _vec_arg(args[0], "player.setPosition", span)
    rt.effects.append(fx.SetPlayerPosition(handle.player_id,
                                           *_finite_vec(vec, "player.setPosition", span)))
    return None


def _player_set_jump_rate(rt, handle, args, span):
    _need(args, 1, "player.setJumpSpeedRate", span)
    rate = _rate_arg(args[0], "player.setJumpSpeedRate", span)
    rt.effects.append(fx.SetPlayerJumpSpeedRate(handle.player_id, rate))
    return None


def _player_set_move_rate(rt, handle, args, span):
    _need(args, 1, "player.setMoveSpeedRate", span)
    rate = _rate_arg(args[0], "player.setMoveSpeedRate", span)
    rt.effects.append(fx.SetPlayerMoveSpeedRate(handle.player_id, rate))
    return None


def _player_set_gravity_rate(rt, handle, args, span):
    _need(args, 1, "player.setGravityRate", span)
    rate = _rate_arg(args[0], "player.setGravityRate", span)
    rt.effects.append(fx.SetPlayerGravityRate(handle.player_id, rate))
    return None


def _player_respawn(rt, handle, args, span):
    _need(args, 0, "player.respawn", span)
    rt.effects.append(fx.RespawnPlayer(handle.player_id))
    return None


_PLAYER_METHODS = {
    "getPosition": _player_get_position,
    "setPosition": _player_set_position,
    "setJumpSpeedRate": _player_set_jump_rate,
    "setMoveSpeedRate": _player_set_move_rate,
    "setGravityRate": _player_set_gravity_rate,
    "respawn": _player_respawn,
}


def _vec_add(rt, vec, args, span):
    _need(args, 1, "Vector3.add", span)
    other = _vec_arg(args[0], "Vector3.add", span)
    return Vector3Value(vec.x + other.x, vec.y + other.y, vec.z + other.z)


def _vec_sub(rt, vec, args, span):
    _need(args, 1, "Vector3.sub", span)
    other = _vec_arg(args[0], "Vector3.sub", span)
    return Vector3Value(vec.x - other.x, vec.y - other.y, vec.z - other.z)


def _vec_scale(rt, vec, args, span):
    _need(args, 1, "Vector3.scale", span)
    factor = _num_arg(args[0], "Vector3.scale", span)
    return Vector3Value(vec.x * factor, vec.y * factor, vec.z * factor)


def _vec_length(rt, vec, args, span):
    _need(args, 0, "Vector3.length", span)
    return math.sqrt(vec.x * vec.x + vec.y * vec.y + vec.z * vec.z)


_VECTOR_METHODS = {
    "add": _vec_add,
    "sub": _vec_sub,
    "scale": _vec_scale,
    "length": _vec_length,
}


def _math_unary(name, fn):
    path = f"Math.{name}"

    def call(rt, args, span):
        _need(args, 1, path, span)
        return fn(_num_arg(args[0], path, span))

    return HostFn(path, call)


def _math_sqrt(x: float) -> float:
    return math.sqrt(x) if x >= 0 else math.nan


def _math_minmax(name, pick):
    path = f"Math.{name}"

    def call(rt, args, span):
        if not args:
            raise ScriptError(ErrorKind.ARITY_MISMATCH,
                              f"{path} takes at least 1 argument, got 0",
                              span.line, span.column)
        values = [_num_arg(a, path, span) for a in args]
        return pick(values)

    return HostFn(path, call)


def _math_random(rt, args, span):
    _need(args, 0, "Math.random", span)
    return rt.host.random()


_MATH_FNS = {
    "sin": _math_unary("sin", math.sin),
    "cos": _math_unary("cos", math.cos),
    "abs": _math_unary("abs", abs),
    "sqrt": _math_unary("sqrt", _math_sqrt),
    "floor": _math_unary("floor", lambda x: float(math.floor(x)) if math.isfinite(x) else x),
    "min": _math_minmax("min", min),
    "max": _math_minmax("max", max),
    "random": HostFn("Math.random", _math_random),
}


def surface_paths() -> frozenset[str]:
    """Every path the interpreter binds; tests hold this equal to the catalog."""
    paths = {"Vector3", "Math.PI", "$.state"}
    paths.update(f"$.{name}" for name in _ITEM_FNS)
    paths.update(f"player.{name}" for name in _PLAYER_METHODS)
    paths.update(f"Vector3.{name}" for name in _VECTOR_METHODS)
    paths.update(f"Vector3.{axis}" for axis in ("x", "y", "z"))
    paths.update(f"Math.{name}" for name in _MATH_FNS)
    return frozenset(paths)
