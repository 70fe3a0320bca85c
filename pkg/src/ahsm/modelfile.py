"""
Reading and writing perturbed pdes as model files:

    model ch {
        indep: x, t;
        dep: u;
        func: F;
        E0: dt(u) + dx(F(u)*u_x);
        E1: u_xxxx;
    }

Sections may come in any order and each appears at most once. ``param`` and
``func`` take comma-separated names and may be left out; ``E1`` defaults to 0.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path

import sympy

from .seriesgen import PerturbedPDE
from .symcore import (
    FAMILIES,
    RESERVED_PARAMS,
    Namespace,
    ParseError,
    func_derivs,
    line_col,
    parse,
    to_text,
)
from .typing import PathLike

__all__ = ["ModelFileError", "ModelSpec", "parse_model", "load_model", "dump_model"]

log = logging.getLogger(__name__)

_HEADER = re.compile(r"\s*model\s+([A-Za-z][A-Za-z0-9_-]*)\s*\{")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_LIST_SECTIONS = ("indep", "dep", "param", "func")
_SECTIONS = _LIST_SECTIONS + ("E0", "E1")


class ModelFileError(ValueError):
    """A malformed model file; ``line`` and ``col`` are 1-based."""

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class ModelSpec:
    name: str
    namespace: Namespace
    E0: sympy.Expr
    E1: sympy.Expr

    def to_pde(self) -> PerturbedPDE:
        return PerturbedPDE(self.name, self.E0, self.E1, self.namespace)


def _fail(src: str, pos: int, message: str):
    line, col = line_col(src, pos)
    raise ModelFileError(message, line, col)


def _is_reserved(name: str, indep: tuple[str, ...]) -> bool:
    if name in RESERVED_PARAMS or name == "d":
        return True
    if re.fullmatch(rf"({'|'.join(FAMILIES)})\d+(_[A-Za-z]+)?", name):
        return True
    # dX is the derivative shorthand for every independent variable X
    return name.startswith("d") and name[1:] in indep


def _names(src: str, value: str, offset: int) -> list[str]:
    names = []
    for match in re.finditer(r"[^,]+", value):
        name = match.group().strip()
        if not _NAME.fullmatch(name):
            _fail(src, offset + match.start(), f"invalid name {name!r}")
        names.append(name)
    return names


def parse_model(src: str) -> ModelSpec:
    """
    Raises:
        ModelFileError: on any syntax or declaration error, including errors
            inside the E0/E1 expressions.
    """
    header = _HEADER.match(src)
    if header is None:
        _fail(src, 0, "expected 'model NAME {'")
    end = src.rfind("}")
    if end < header.end() or src[end + 1 :].strip():
        _fail(src, len(src), "expected '}' closing the model")

    sections: dict[str, tuple[str, int]] = {}
    for match in re.finditer(r"[^;]+", src[header.end() : end]):
        if not match.group().strip():
            continue
        start = header.end() + match.start()
        raw_key, sep, value = match.group().partition(":")
        key = raw_key.strip()
        if not sep:
            _fail(src, start, f"expected 'section: value', found {match.group().strip()!r}")
        if key not in _SECTIONS:
            _fail(src, start, f"unknown section {key!r}")
        if key in sections:
            _fail(src, start, f"section {key!r} given twice")
        sections[key] = (value, start + len(raw_key) + 1)

    for required in ("indep", "dep", "E0"):
        if required not in sections:
            _fail(src, end, f"missing section {required!r}")

    lists = {
        key: _names(src, *sections[key]) for key in _LIST_SECTIONS if key in sections
    }
    indep = tuple(lists["indep"])
    if len(lists["dep"]) != 1:
        _fail(src, sections["dep"][1], "exactly one dependent variable is required")

    seen = set()
    for key in _LIST_SECTIONS:
        for name in lists.get(key, ()):
            if _is_reserved(name, indep):
                _fail(src, sections[key][1], f"{name!r} is reserved and cannot be declared")
            if name in seen:
                _fail(src, sections[key][1], f"{name!r} is declared twice")
            seen.add(name)
    log.debug("model %s declares %s", header.group(1), ", ".join(sorted(seen)))

    namespace = Namespace(
        indep,
        lists["dep"][0],
        tuple(lists.get("param", ())),
        tuple(lists.get("func", ())),
    )

    parts = {}
    for key in ("E0", "E1"):
        if key not in sections:
            parts[key] = sympy.S.Zero
            continue
        value, offset = sections[key]
        try:
            parts[key] = parse(value, namespace)
        except ParseError as exc:
            _fail(src, offset + exc.pos, exc.message)

    try:
        spec = ModelSpec(header.group(1), namespace, parts["E0"], parts["E1"])
        spec.to_pde()
    except ValueError as exc:
        _fail(src, sections["E0"][1], str(exc))
    return spec


def load_model(path: PathLike) -> PerturbedPDE:
    return parse_model(Path(path).read_text()).to_pde()


def dump_model(pde: PerturbedPDE) -> str:
    """A model file that :func:`parse_model` reads back into ``pde``."""
    ns = pde.namespace
    funcs = sorted({fd.func_name for fd in func_derivs(pde.E0) | func_derivs(pde.E1)})
    lines = [f"model {pde.name} {{", f"    indep: {', '.join(ns.indep)};", f"    dep: {ns.dep};"]
    if ns.params:
        lines.append(f"    param: {', '.join(ns.params)};")
    if funcs or ns.funcs:
        lines.append(f"    func: {', '.join(sorted(set(funcs) | set(ns.funcs)))};")
    lines.append(f"    E0: {to_text(pde.E0)};")
    lines.append(f"    E1: {to_text(pde.E1)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
