"""JSON scenario files: parsing with field loci into library objects.

Every validation failure is raised as :class:`ScenarioError` whose message
starts with the dotted path of the offending field, e.g.
``places.generator_images[1]: ...``. Size-guard refusals keep their own type.
"""

from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any

from .cohomology import Cochain
from .errors import GalcohError, ScenarioError, SizeGuardError
from .fundgroup import CATALOG_NAMES, FundamentalGroup, RootDatumInput, catalog, fundamental_group
from .gmodule import GModule, regular_module
from .groups import FiniteGroup, permutation_closure
from .local_global import GlobalScenario, PlaceSet
from .tn_triple import TNTripleCandidate, cyclic_triple
from .zlattice import FgAbGroup, IntMatrix


@contextmanager
def locus(path: str):
    """Prefix errors raised inside the block with ``path``."""
    try:
        yield
    except SizeGuardError:
        raise
    except ScenarioError as exc:
        raise ScenarioError(_prefix(path, str(exc))) from None
    except (GalcohError, ValueError, TypeError, KeyError, IndexError) as exc:
        raise ScenarioError(f"{path}: {_describe(exc)}") from None


def _prefix(path: str, msg: str) -> str:
    head = msg.split(":", 1)[0]
    if ":" in msg and head and " " not in head:
        return f"{path}{'' if head.startswith('[') else '.'}{msg}"
    return f"{path}: {msg}"


def _describe(exc: Exception) -> str:
    if isinstance(exc, KeyError):
        return f"missing field {exc.args[0]!r}"
    return str(exc)


def _require(d: Any, key: str) -> Any:
    if not isinstance(d, dict):
        raise ScenarioError("expected an object")
    if key not in d:
        raise ScenarioError(f"{key}: missing field")
    return d[key]


def _int(x: Any, what: str = "value") -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ScenarioError(f"{what} must be an integer, got {x!r}")
    return x


def _matrix(rows: Any, n: int | None = None) -> IntMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ScenarioError("matrix must be a list of rows")
    vals = [[_int(x, "matrix entry") for x in r] for r in rows]
    ncols = n if not vals else len(vals[0])
    if any(len(r) != ncols for r in vals):
        raise ScenarioError("matrix rows have different lengths")
    return IntMatrix.from_rows(vals, ncols if ncols is not None else 0)


@dataclass(frozen=True)
class ParsedGroup:
    group: FiniteGroup
    generators: tuple[int, ...]

    def echo(self) -> dict:
        return {"order": self.group.order, "generators": list(self.generators),
                "table": [list(r) for r in self.group.table]}


NAMED_GROUPS = ("trivial", "cyclic", "klein_four", "dihedral", "symmetric", "alternating", "quaternion")


def parse_group(d: Any, max_order: int, path: str = "group") -> ParsedGroup:
    with locus(path):
        if not isinstance(d, dict):
            raise ScenarioError("expected an object")
        if "table" in d:
            table = d["table"]
            if not isinstance(table, list) or len(table) > max_order:
                if isinstance(table, list):
                    raise SizeGuardError(f"{path}: group order {len(table)} exceeds the limit {max_order}")
                raise ScenarioError("table: expected a list of rows")
            g = FiniteGroup(tuple(tuple(_int(x, "table entry") for x in row) for row in table))
            gens = tuple(_int(x, "generator") for x in d["generators"]) if "generators" in d else g.generators()
            for x in gens:
                if not 0 <= x < g.order:
                    raise ScenarioError(f"generators: {x} is not an element")
            if g.closure(gens) != frozenset(range(g.order)):
                raise ScenarioError("generators: the listed elements do not generate the group")
            return ParsedGroup(g, gens)
        if "permutations" in d:
            perms = [tuple(_int(x, "permutation entry") for x in p) for p in d["permutations"]]
            elems = permutation_closure(perms, max_order)
            g = FiniteGroup.from_permutations(perms, max_order)
            return ParsedGroup(g, tuple(elems.index(p) for p in perms))
        if "named" in d:
            name = d["named"]
            n = d.get("n")
            if name == "trivial":
                g = FiniteGroup.trivial()
            elif name == "klein_four":
                g = FiniteGroup.klein_four()
            elif name == "quaternion":
                g = FiniteGroup.quaternion()
            elif name in ("cyclic", "dihedral", "symmetric", "alternating"):
                n = _int(n, "n")
                if n < 1:
                    raise ScenarioError("n: must be positive")
                size = {"cyclic": n, "dihedral": 2 * n}.get(name)
                if size is None:
                    from math import factorial
                    size = factorial(n) // (2 if name == "alternating" and n > 1 else 1)
                if size > max_order:
                    raise SizeGuardError(f"{path}: group order {size} exceeds the limit {max_order}")
                g = getattr(FiniteGroup, name)(n)
            else:
                raise ScenarioError(f"named: unknown group {name!r}; known: {', '.join(NAMED_GROUPS)}")
            if g.order > max_order:
                raise SizeGuardError(f"{path}: group order {g.order} exceeds the limit {max_order}")
            return ParsedGroup(g, g.generators())
        raise ScenarioError("give one of 'table', 'permutations' or 'named'")


def parse_places(d: Any, pg: ParsedGroup, path: str = "places") -> PlaceSet:
    with locus(path):
        pts = _require(d, "points")
        if not isinstance(pts, list) or not pts:
            raise ScenarioError("points: need a nonempty list of point labels")
        labels = tuple(str(p) for p in pts)
        if len(set(labels)) != len(labels):
            raise ScenarioError("points: labels must be distinct")
        index = {p: i for i, p in enumerate(labels)}
        images = _require(d, "generator_images")
        if not isinstance(images, list) or len(images) != len(pg.generators):
            raise ScenarioError(f"generator_images: need one image list per generator ({len(pg.generators)})")
        perms = []
        for k, img in enumerate(images):
            with locus(f"generator_images[{k}]"):
                if not isinstance(img, list) or len(img) != len(labels):
                    raise ScenarioError(f"need {len(labels)} images")
                perm = []
                for x in img:
                    if isinstance(x, int) and not isinstance(x, bool):
                        if not 0 <= x < len(labels):
                            raise ScenarioError(f"point index {x} out of range")
                        perm.append(x)
                    elif str(x) in index:
                        perm.append(index[str(x)])
                    else:
                        raise ScenarioError(f"unknown point {x!r}")
                perms.append(perm)
        degrees = d.get("degrees", [])
        degs = tuple(None if x is None else _int(x, "degree") for x in degrees)
        return PlaceSet.from_generators(pg.group, len(labels), pg.generators, perms, labels, degs)


def parse_lambda(d: Any, pg: ParsedGroup, path: str = "lambda") -> FundamentalGroup:
    with locus(path):
        if not isinstance(d, dict):
            raise ScenarioError("expected an object")
        if "catalog" in d:
            name = d["catalog"]
            if name not in CATALOG_NAMES:
                raise ScenarioError(f"catalog: unknown entry {name!r}; known: {', '.join(CATALOG_NAMES)}")
            n = d.get("n")
            rank = d.get("rank")
            kernel = d.get("kernel")
            return catalog(name, pg.group, n=None if n is None else _int(n, "n"),
                           rank=None if rank is None else _int(rank, "rank"),
                           kernel=None if kernel is None else [_int(x, "kernel element") for x in kernel])
        rank = _int(_require(d, "rank"), "rank")
        coroots = d.get("coroots", [])
        with locus("coroots"):
            roots = [[_int(x, "coroot entry") for x in c] for c in coroots]
        action = d.get("action")
        if action is None:
            mats = [IntMatrix.identity(rank) for _ in pg.generators]
        else:
            if not isinstance(action, list) or len(action) != len(pg.generators):
                raise ScenarioError(f"action: need one matrix per generator ({len(pg.generators)})")
            mats = []
            for k, m in enumerate(action):
                with locus(f"action[{k}]"):
                    mats.append(_matrix(m, rank))
        rd = RootDatumInput.make(rank, roots, pg.generators, mats)
        return fundamental_group(rd, pg.group, label=str(d.get("label", "custom")))


def parse_module(d: Any, pg: ParsedGroup, path: str = "module") -> GModule:
    """A module: ``regular``, ``trivial`` with invariants, or explicit matrices per generator."""
    with locus(path):
        if not isinstance(d, dict):
            raise ScenarioError("expected an object")
        g = pg.group
        if d.get("regular"):
            return regular_module(g)
        if "trivial" in d:
            t = d["trivial"]
            under = FgAbGroup.from_invariants([_int(x, "torsion") for x in t.get("torsion", [])],
                                              _int(t.get("free_rank", 0), "free_rank"))
            return GModule.trivial(g, under)
        rank = _int(_require(d, "rank"), "rank")
        rel_cols = d.get("relations", [])
        with locus("relations"):
            cols = [[_int(x, "relation entry") for x in c] for c in rel_cols]
            if any(len(c) != rank for c in cols):
                raise ScenarioError(f"each relation needs {rank} entries")
        under = FgAbGroup(rank, IntMatrix.from_columns(cols, rank))
        action = _require(d, "action")
        if not isinstance(action, list) or len(action) != len(pg.generators):
            raise ScenarioError(f"action: need one matrix per generator ({len(pg.generators)})")
        mats = []
        for k, m in enumerate(action):
            with locus(f"action[{k}]"):
                mats.append(_matrix(m, rank))
        return GModule.from_generators(g, under, pg.generators, mats)


def parse_triple(d: Any, pg: ParsedGroup | None, max_order: int, path: str = "triple") -> tuple[ParsedGroup, TNTripleCandidate]:
    with locus(path):
        if not isinstance(d, dict):
            raise ScenarioError("expected an object")
        if d.get("builtin") == "cyclic":
            n = _int(_require(d, "n"), "n")
            if n < 1:
                raise ScenarioError("n: must be positive")
            if n > max_order:
                raise SizeGuardError(f"{path}: group order {n} exceeds the limit {max_order}")
            t = cyclic_triple(n, _int(d.get("multiple", 1), "multiple"))
            return ParsedGroup(t.group, t.group.generators()), t
        if "builtin" in d:
            raise ScenarioError(f"builtin: unknown triple {d['builtin']!r}; known: 'cyclic'")
        if pg is None:
            raise ScenarioError("an explicit triple needs a top-level 'group'")
        x = parse_module(_require(d, "x"), pg, "x")
        a = parse_module(_require(d, "a"), pg, "a")
        vals = _require(d, "alpha")
        o = pg.group.order
        if not isinstance(vals, list) or len(vals) != o * o:
            raise ScenarioError(f"alpha: need {o * o} matrices, one per pair (g1, g2) with g1 major")
        flat_vals = []
        for k, m in enumerate(vals):
            with locus(f"alpha[{k}]"):
                mat = _matrix(m, x.ngens)
                if (mat.rows, mat.cols) != (a.ngens, x.ngens):
                    raise ScenarioError(f"need a {a.ngens}x{x.ngens} matrix")
                flat_vals.append(tuple(mat.entries))
        alpha = Cochain(pg.group, a.ngens * x.ngens, 2, tuple(flat_vals))
        return pg, TNTripleCandidate(pg.group, x, a, alpha)


def parse_locals(d: Any, places: PlaceSet, path: str = "locals") -> dict[int, list[int]]:
    """Local classes keyed by orbit index (``"0"``, ``"1"``...) or by a point label in the orbit."""
    out: dict[int, list[int]] = {}
    if d is None:
        return out
    with locus(path):
        items = d.items() if isinstance(d, dict) else enumerate(d) if isinstance(d, list) else None
        if items is None:
            raise ScenarioError("expected an object or a list")
        labels = {places.label(p): p for p in range(places.npoints)}
        for key, coords in items:
            if coords is None:
                continue
            with locus(f"[{key}]" if isinstance(key, int) else str(key)):
                if isinstance(key, int):
                    u = key
                elif str(key) in labels:
                    u = places.orbit_index(labels[str(key)])
                elif str(key).lstrip("-").isdigit():
                    u = int(key)
                else:
                    raise ScenarioError("neither an orbit index nor a point label")
                if not 0 <= u < len(places.orbits):
                    raise ScenarioError(f"orbit index {u} out of range ({len(places.orbits)} orbits)")
                if u in out:
                    raise ScenarioError(f"orbit {u} given twice")
                if not isinstance(coords, list):
                    raise ScenarioError("coordinates must be a list")
                out[u] = [_int(x, "coordinate") for x in coords]
    return out


def load(path: str) -> dict:
    """Read a UTF-8 JSON scenario file; syntax errors report line and column."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ScenarioError(f"{path}: top level must be an object")
    return doc


def parse_global(doc: dict, max_order: int) -> tuple[ParsedGroup, GlobalScenario]:
    pg = parse_group(_at(doc, "group"), max_order)
    places = parse_places(_at(doc, "places"), pg)
    lam = parse_lambda(_at(doc, "lambda"), pg)
    return pg, GlobalScenario(places, lam)


def _at(doc: dict, key: str) -> Any:
    if key not in doc:
        raise ScenarioError(f"{key}: missing field")
    return doc[key]
