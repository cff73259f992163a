"""Scenario file ingestion: JSON schema checks with path-qualified errors.

A scenario describes either one WLAN ("wlan") or a mesh of cliques
("mesh"), plus optional utilities, a seed and tolerance overrides.
Validation happens before any computation; unknown keys anywhere are
rejected, and every message is prefixed with the JSON path ($.a.b[2])
of the offending value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .mesh import CliqueRecord, MeshNetwork
from .model import WlanConfig
from .tolerances import MEMBERSHIP_TOL
from .utilities import utility_from_dict


@dataclass(frozen=True)
class Scenario:
    wlan: WlanConfig = None
    mesh: MeshNetwork = None
    utilities: tuple = None
    seed: int = 0
    membership_tol: float = MEMBERSHIP_TOL


def _fail(path, msg):
    raise DomainError(f"{path}: {msg}")


def _require_mapping(obj, path, allowed):
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        _fail(f"{path}.{unknown[0]}", "unknown key")
    return obj


def _require_list(obj, path, length=None):
    if not isinstance(obj, list):
        _fail(path, "expected an array")
    if length is not None and len(obj) != length:
        _fail(path, f"expected {length} entries, got {len(obj)}")
    return obj


def _number(obj, path):
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        _fail(path, "expected a number")
    return float(obj)


def _integer(obj, path):
    if isinstance(obj, bool) or not isinstance(obj, int):
        _fail(path, "expected an integer")
    return int(obj)


def _number_list(obj, path, length=None):
    arr = _require_list(obj, path, length)
    return np.array([_number(v, f"{path}[{i}]") for i, v in enumerate(arr)])


def _int_list(obj, path, length=None):
    arr = _require_list(obj, path, length)
    return np.array([_integer(v, f"{path}[{i}]") for i, v in enumerate(arr)], dtype=int)


def _parse_wlan(obj, path):
    _require_mapping(obj, path, {"n", "a", "L", "N_lo", "N_hi"})
    if "n" not in obj or "a" not in obj:
        _fail(path, "requires keys 'n' and 'a'")
    n = _integer(obj["n"], f"{path}.n")
    a = _number(obj["a"], f"{path}.a")
    kw = {}
    for key in ("L", "N_lo", "N_hi"):
        if key in obj:
            parse = _number_list if key == "L" else _int_list
            kw[key] = parse(obj[key], f"{path}.{key}", length=n)
    try:
        return WlanConfig(n=n, a=a, **kw)
    except DomainError as e:
        _fail(path, str(e))


def _parse_mesh(obj, path):
    _require_mapping(obj, path, {"flows", "cliques", "incidence", "rates_mbps"})
    for key in ("flows", "cliques", "incidence", "rates_mbps"):
        if key not in obj:
            _fail(path, f"requires key {key!r}")
    flows = _require_list(obj["flows"], f"{path}.flows")
    for i, f in enumerate(flows):
        if not isinstance(f, str) or not f:
            _fail(f"{path}.flows[{i}]", "expected a nonempty string")
    rates = _number_list(obj["rates_mbps"], f"{path}.rates_mbps", length=len(flows))
    cliques = _require_list(obj["cliques"], f"{path}.cliques")
    incidence = _require_list(obj["incidence"], f"{path}.incidence", length=len(cliques))
    recs = []
    for k, (cq, inc) in enumerate(zip(cliques, incidence)):
        cpath = f"{path}.cliques[{k}]"
        _require_mapping(cq, cpath, {"a", "bursts"})
        if "a" not in cq:
            _fail(cpath, "requires key 'a'")
        a = _number(cq["a"], f"{cpath}.a")
        members = _require_list(inc, f"{path}.incidence[{k}]")
        for i, f in enumerate(members):
            if f not in flows:
                _fail(f"{path}.incidence[{k}][{i}]", f"unknown flow {f!r}")
        member_rates = np.array([rates[flows.index(f)] for f in members]) \
            if members else np.empty(0)
        bursts = None
        if "bursts" in cq:
            bursts = _int_list(cq["bursts"], f"{cpath}.bursts", length=len(members))
        try:
            recs.append(CliqueRecord(a, tuple(members), member_rates, bursts,
                                     label=f"clique{k + 1}"))
        except DomainError as e:
            _fail(cpath, str(e))
    try:
        return MeshNetwork(tuple(flows), tuple(recs))
    except DomainError as e:
        _fail(path, str(e))


def _parse_utilities(obj, path):
    arr = _require_list(obj, path)
    out = []
    for i, entry in enumerate(arr):
        upath = f"{path}[{i}]"
        if not isinstance(entry, dict):
            _fail(upath, "expected an object")
        if "family" in entry and not isinstance(entry["family"], str):
            _fail(f"{upath}.family", "expected a string")
        try:
            out.append(utility_from_dict(entry))
        except DomainError as e:
            _fail(upath, str(e))
    return tuple(out)


def validate_scenario(doc) -> Scenario:
    """Validate a decoded scenario document and build the model objects."""
    _require_mapping(doc, "$", {"wlan", "mesh", "utilities", "seed", "tolerances"})
    if ("wlan" in doc) == ("mesh" in doc):
        _fail("$", "exactly one of 'wlan' or 'mesh' is required")
    wlan = _parse_wlan(doc["wlan"], "$.wlan") if "wlan" in doc else None
    mesh = _parse_mesh(doc["mesh"], "$.mesh") if "mesh" in doc else None
    utilities = _parse_utilities(doc["utilities"], "$.utilities") if "utilities" in doc else None
    seed = 0
    if "seed" in doc:
        seed = _integer(doc["seed"], "$.seed")
        if seed < 0:
            _fail("$.seed", "expected an integer >= 0")
    tol = MEMBERSHIP_TOL
    if "tolerances" in doc:
        tmap = _require_mapping(doc["tolerances"], "$.tolerances", {"membership"})
        if "membership" in tmap:
            tol = _number(tmap["membership"], "$.tolerances.membership")
            if not tol > 0:
                _fail("$.tolerances.membership", "expected a number > 0")
    if mesh is not None and utilities is not None and len(utilities) != mesh.n_flows:
        _fail("$.utilities", f"expected one utility per flow ({mesh.n_flows})")
    return Scenario(wlan=wlan, mesh=mesh, utilities=utilities, seed=seed,
                    membership_tol=tol)


def load_scenario(path) -> Scenario:
    """Read and validate a scenario JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise DomainError(f"cannot read scenario file: {e}") from e
    except json.JSONDecodeError as e:
        raise DomainError(f"invalid JSON in scenario file: {e}") from e
    return validate_scenario(doc)
