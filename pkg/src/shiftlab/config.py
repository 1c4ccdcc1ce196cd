# Run configuration: a single YAML document holding the subshift, the
# potential tables, numeric parameters and the seed.  Validation reports
# the offending field path instead of raising bare exceptions.

import math
from dataclasses import dataclass, field

import yaml

from .sft import SubshiftError, SymbolicMetric, validate_subshift
from .potentials import Potential


class ConfigInvalid(ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__("%s: %s" % (path, message))


def _req(mapping, key, path, types=None):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigInvalid("%s.%s" % (path, key), "missing required field")
    v = mapping[key]
    if types is not None and not isinstance(v, types):
        raise ConfigInvalid("%s.%s" % (path, key),
                            "expected %s, got %s" % (types, type(v).__name__))
    return v


def _parse_word(key, k, path):
    s = str(key)
    parts = s.split(",") if "," in s else list(s)
    try:
        word = tuple(int(p) for p in parts)
    except ValueError:
        raise ConfigInvalid(path, "cannot parse word %r" % s)
    if not all(1 <= a <= k for a in word):
        # a digit-split like "10" may really be one multi-digit symbol
        if "," not in s and s.isdigit() and 1 <= int(s) <= k:
            return (int(s),)
        raise ConfigInvalid(path, "word %r uses symbols outside 1..%d" % (s, k))
    return word


def _parse_potential(node, spec, path):
    if node is None:
        return None
    if not isinstance(node, dict):
        raise ConfigInvalid(path, "expected a mapping")
    if "constant" in node:
        c = node["constant"]
        if not isinstance(c, (int, float)):
            raise ConfigInvalid(path + ".constant", "expected a number")
        return Potential.constant(spec, float(c))
    depth = _req(node, "depth", path, int)
    table = _req(node, "table", path, dict)
    mapping = {}
    for key, val in table.items():
        w = _parse_word(key, spec.k, "%s.table.%s" % (path, key))
        if len(w) != depth:
            raise ConfigInvalid("%s.table.%s" % (path, key),
                                "word length %d != depth %d" % (len(w), depth))
        if not isinstance(val, (int, float)):
            raise ConfigInvalid("%s.table.%s" % (path, key), "expected a number")
        mapping[w] = float(val)
    try:
        return Potential.from_table(spec, depth, mapping)
    except SubshiftError as exc:
        raise ConfigInvalid(path + ".table", str(exc))


def _parse_complex(node, path):
    if isinstance(node, (int, float)):
        return complex(float(node), 0.0)
    if isinstance(node, list) and len(node) == 2 and \
            all(isinstance(x, (int, float)) for x in node):
        return complex(float(node[0]), float(node[1]))
    raise ConfigInvalid(path, "expected a number or [re, im] pair")


@dataclass
class RunConfig:
    spec: object
    metric: SymbolicMetric
    f: Potential
    tau: Potential
    g: Potential
    f_u: object  # Potential or None (derive from the normalized weight)
    depth: int
    seed: int
    params: dict
    raw: dict


def load_config(path):
    with open(path, "r") as fh:
        text = fh.read()
    return parse_config(text)


def parse_config(text):
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigInvalid("<document>", "not valid YAML: %s" % exc)
    if not isinstance(raw, dict):
        raise ConfigInvalid("<document>", "top level must be a mapping")

    sub = _req(raw, "subshift", "", dict)
    k = _req(sub, "k", "subshift", int)
    matrix = _req(sub, "matrix", "subshift", list)
    try:
        spec = validate_subshift(k, matrix)
    except SubshiftError as exc:
        raise ConfigInvalid("subshift.matrix", str(exc))

    theta = raw.get("theta", 0.5)
    if not isinstance(theta, (int, float)) or not (0.0 < theta < 1.0):
        raise ConfigInvalid("theta", "must be a number in (0, 1)")
    metric = SymbolicMetric(float(theta))

    pots = _req(raw, "potentials", "", dict)
    f = _parse_potential(pots.get("f"), spec, "potentials.f")
    tau = _parse_potential(pots.get("tau"), spec, "potentials.tau")
    g = _parse_potential(pots.get("g"), spec, "potentials.g")
    f_u = _parse_potential(pots.get("f_u"), spec, "potentials.f_u")
    if f is None:
        f = Potential.constant(spec, 0.0)
    if tau is None:
        tau = Potential.constant(spec, 1.0)
    if g is None:
        g = Potential.constant(spec, 1.0)

    depth = raw.get("depth", 3)
    if not isinstance(depth, int) or depth < 1:
        raise ConfigInvalid("depth", "must be a positive integer")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigInvalid("seed", "must be an integer")

    params = raw.get("params", {}) or {}
    if not isinstance(params, dict):
        raise ConfigInvalid("params", "must be a mapping")

    return RunConfig(spec=spec, metric=metric, f=f, tau=tau, g=g, f_u=f_u,
                     depth=depth, seed=seed, params=params, raw=raw)


def param(cfg, key, default=None, types=None):
    v = cfg.params.get(key, default)
    if v is None:
        raise ConfigInvalid("params.%s" % key, "missing required parameter")
    if types is not None and not isinstance(v, types):
        raise ConfigInvalid("params.%s" % key,
                            "expected %s, got %s" % (types, type(v).__name__))
    return v


def param_complex(cfg, key, default=None):
    v = cfg.params.get(key, default)
    if v is None:
        raise ConfigInvalid("params.%s" % key, "missing required parameter")
    return _parse_complex(v, "params.%s" % key)
