"""Problem-file loading and validation.

A problem file is JSON with a versioned schema: a dilation, variable
names, named function literals, optional switched-system definitions
referencing those functions, and optional Lyapunov candidate references.
Function literals come in two forms: a list of generalized-monomial
terms, or a coefficient-vector object keyed by "degree:index".  See
docs/schema.md for the full contract.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .homog_core import Dilation, GeneralizedPolynomial
from .stp_poly import CoeffVecPolynomial
from .switched_systems import SwitchedSystem

SCHEMA_VERSION = 1


class ProblemError(ValueError):
    """The problem file is missing, malformed, or inconsistent."""


def parse_function(n: int, spec):
    """One function literal: a term list (generalized polynomial) or a
    {"coeffs": {...}} object (coefficient-vector polynomial)."""
    if isinstance(spec, list):
        return GeneralizedPolynomial.from_json_terms(n, spec)
    if isinstance(spec, dict) and "coeffs" in spec:
        return CoeffVecPolynomial.from_json(n, spec["coeffs"])
    raise ProblemError(
        "function literal must be a term list or a {'coeffs': ...} object"
    )


def _as_generalized(fn) -> GeneralizedPolynomial:
    if isinstance(fn, CoeffVecPolynomial):
        return fn.to_generalized()
    return fn


@dataclass
class Problem:
    path: Path
    version: int
    dilation: Dilation
    variables: tuple
    functions: dict
    systems: dict = field(default_factory=dict)
    lyapunov: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.variables)

    def function(self, name: str):
        if name not in self.functions:
            raise ProblemError(f"problem defines no function named '{name}'")
        return self.functions[name]

    def pair(self) -> tuple[GeneralizedPolynomial, GeneralizedPolynomial]:
        """The canonical (f, g) pair, as generalized polynomials."""
        return (_as_generalized(self.function("f")),
                _as_generalized(self.function("g")))

    def pair_coeff_vec(self) -> tuple[CoeffVecPolynomial, CoeffVecPolynomial]:
        """The (f, g) pair in coefficient-vector form (integer powers)."""
        from .stp_poly import to_coeff_vec

        try:
            return to_coeff_vec(self.function("f")), to_coeff_vec(self.function("g"))
        except ValueError as e:
            raise ProblemError(str(e)) from None

    def single_system(self) -> tuple[str, SwitchedSystem]:
        if len(self.systems) != 1:
            raise ProblemError(
                f"expected exactly one system, found {len(self.systems)}"
            )
        return next(iter(self.systems.items()))

    def first_lyapunov(self) -> tuple[str, GeneralizedPolynomial]:
        if not self.lyapunov:
            raise ProblemError("problem defines no Lyapunov candidate")
        return next(iter(self.lyapunov.items()))


def load_problem(path) -> Problem:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ProblemError(f"problem file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ProblemError(f"problem file is not valid JSON: {e}") from None
    if not isinstance(raw, dict):
        raise ProblemError("problem file must contain a JSON object")

    version = raw.get("version")
    if version != SCHEMA_VERSION:
        raise ProblemError(
            f"unrecognized schema version {version!r}; this build reads "
            f"version {SCHEMA_VERSION}"
        )

    variables = raw.get("variables")
    if not isinstance(variables, list) or not variables:
        raise ProblemError("'variables' must be a nonempty list of names")
    n = len(variables)

    dspec = raw.get("dilation", {})
    weights = dspec.get("weights", [1.0] * n)
    l = dspec.get("l", 2.0)
    if len(weights) != n:
        raise ProblemError("dilation weights must match the variable count")
    try:
        dilation = Dilation(tuple(float(w) for w in weights), float(l))
    except ValueError as e:
        raise ProblemError(f"bad dilation: {e}") from None

    functions = {}
    for name, spec in (raw.get("functions") or {}).items():
        try:
            functions[name] = parse_function(n, spec)
        except (ValueError, TypeError, KeyError) as e:
            raise ProblemError(f"bad function '{name}': {e}") from None

    systems = {}
    for name, spec in (raw.get("systems") or {}).items():
        flds = spec.get("fields") if isinstance(spec, dict) else None
        if not isinstance(flds, list) or not flds:
            raise ProblemError(f"system '{name}' needs a 'fields' list")
        resolved = []
        for comps in flds:
            if not isinstance(comps, list) or len(comps) != n:
                raise ProblemError(
                    f"system '{name}': each subsystem needs {n} components"
                )
            row = []
            for ref in comps:
                if ref not in functions:
                    raise ProblemError(
                        f"system '{name}' references unknown function '{ref}'"
                    )
                row.append(_as_generalized(functions[ref]))
            resolved.append(row)
        try:
            systems[name] = SwitchedSystem(resolved)
        except ValueError as e:
            raise ProblemError(f"bad system '{name}': {e}") from None

    lyapunov = {}
    for name, ref in (raw.get("lyapunov") or {}).items():
        if ref not in functions:
            raise ProblemError(
                f"Lyapunov candidate '{name}' references unknown function '{ref}'"
            )
        lyapunov[name] = _as_generalized(functions[ref])

    return Problem(
        path=path,
        version=version,
        dilation=dilation,
        variables=tuple(variables),
        functions=functions,
        systems=systems,
        lyapunov=lyapunov,
    )
