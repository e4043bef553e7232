"""Space and transformation models: schema, validation, catalog, orbits.

Models are plain JSON documents (schema in the README).  Loading is
strict: unknown keys, malformed groups, or inconsistent homotopy data are
rejected with the offending field path.  Each loaded model keeps its raw
document, so the canonical serialization round-trips bit for bit.

Homotopy data is always explicitly truncated.  Asking for a degree past
the truncation is an error, never a silent zero.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .abelian import (FgAbelian, INFINITY, IntMatrix, subgroup_index,
                      subgroup_structure)
from .errors import (InvalidInputError, ModelError, NotFoundError,
                     ThgError, UnsupportedError)
from .fingroup import (CayleyGroup, SubgroupRef, abelian_structure,
                       from_catalog, full_subgroup, is_abelian,
                       center as group_center, subgroup_as_group,
                       subgroup_generated)
from .tower import (LayerAut, VirtAbelian, abelianization, center_structure,
                    identity_aut, make_virtabelian, to_cayley)

GroupLike = Union[CayleyGroup, FgAbelian, VirtAbelian]

TO_CAYLEY_CAP = 64


@dataclass(frozen=True)
class SubgroupData:
    """A subgroup of some ambient homotopy group, by one of five recipes.

    kind "full" and "trivial" speak for themselves; "generators" carries
    coordinate vectors into an abelian ambient; "elements" lists member
    names in a finite ambient; "center" marks the center of the ambient,
    resolved on demand (orbit spaces use it for their degree-1 group).
    """

    kind: str
    generators: Tuple[Tuple[int, ...], ...] = ()
    elements: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("full", "trivial", "generators", "elements", "center"):
            raise InvalidInputError(f"unknown subgroup kind {self.kind!r}")


FULL = SubgroupData("full")
TRIVIAL_SUBGROUP = SubgroupData("trivial")
CENTER = SubgroupData("center")


@dataclass
class SpaceModel:
    """A based space given by truncated homotopy data."""

    name: str
    truncation: int
    aspherical: bool
    pi1: GroupLike
    pi: Dict[int, FgAbelian]
    gottlieb: Dict[int, SubgroupData]
    whitehead_pairs: Optional[Dict[Tuple[int, int], tuple]]  # None means trivial
    pi1_action_trivial: bool
    raw: Optional[dict] = None
    warnings: Tuple[str, ...] = ()

    def pi_at(self, i: int) -> Union[GroupLike, FgAbelian]:
        if i < 1:
            raise InvalidInputError("homotopy degree must be at least 1")
        if i == 1:
            return self.pi1
        if self.aspherical:
            # Known in every degree, not just up to the truncation.
            return FgAbelian(0, ())
        if i > self.truncation:
            raise UnsupportedError(
                f"{self.name} carries data up to degree {self.truncation}; "
                f"degree {i} was requested")
        return self.pi[i]

    def gottlieb_at(self, i: int) -> Optional[SubgroupData]:
        """Evaluation subgroup data at degree i, or None when unknown.

        A trivial homotopy group forces the answer: its only subgroup is
        everything, so the data is "full" whether or not the file says so.
        """
        grp = self.pi_at(i)
        if group_order(grp) == 1:
            return FULL
        return self.gottlieb.get(i)

    def pi1_order(self) -> Union[int, float]:
        return group_order(self.pi1)

    def whitehead_trivial(self) -> bool:
        if self.whitehead_pairs is None:
            return True
        return all(_nested_all_zero(tbl) for tbl in self.whitehead_pairs.values())


@dataclass
class TransformationModel:
    """A finite group acting on a space, with per-degree induced maps."""

    name: str
    space: SpaceModel
    group: CayleyGroup
    free: bool
    action_by_degree: Dict[int, Tuple[LayerAut, ...]]
    cocycle: Optional[Dict[Tuple[int, int], Tuple[int, ...]]]
    g0_explicit: Optional[SubgroupRef]
    sphere_dimension: Optional[int]
    raw: Optional[dict] = None
    warnings: Tuple[str, ...] = ()

    def action_at(self, degree: int) -> Tuple[LayerAut, ...]:
        """Induced automorphisms of pi(degree), one per group element."""
        grp = self.space.pi_at(degree)
        if degree in self.action_by_degree:
            return self.action_by_degree[degree]
        if not isinstance(grp, FgAbelian):
            raise UnsupportedError(
                "induced maps on a non-abelian fundamental group are only "
                "supported when trivial")
        ident = identity_aut(grp)
        return (ident,) * self.group.order

    def action_trivial_at(self, degree: int) -> bool:
        grp = self.space.pi_at(degree)
        if degree not in self.action_by_degree:
            return True
        if not isinstance(grp, FgAbelian):
            return True
        return all(aut.is_identity() for aut in self.action_by_degree[degree])


Model = Union[SpaceModel, TransformationModel]
Resolver = Callable[[str], SpaceModel]


def group_order(grp: GroupLike) -> Union[int, float]:
    if isinstance(grp, CayleyGroup):
        return grp.order
    if isinstance(grp, (FgAbelian, VirtAbelian)):
        return grp.order()
    raise InvalidInputError(f"not a group value: {type(grp).__name__}")


def group_is_trivial(grp: GroupLike) -> bool:
    return group_order(grp) == 1


def group_is_abelian(grp: GroupLike) -> bool:
    if isinstance(grp, CayleyGroup):
        return is_abelian(grp)
    if isinstance(grp, FgAbelian):
        return True
    return grp.is_abelian()


def group_describe(grp: GroupLike) -> str:
    """Human-readable structure label used in reports."""
    if isinstance(grp, FgAbelian):
        return grp.describe()
    if isinstance(grp, CayleyGroup):
        return f"finite group of order {grp.order}"
    o = grp.order()
    if o == INFINITY:
        return (f"extension of {grp.layer.describe()} by a base of order "
                f"{grp.base.order}")
    return f"finite group of order {int(o)}"


def group_rank(grp: GroupLike) -> int:
    """Free rank.  A finite-index subgroup has the same rank as the whole
    group, so an extension of a lattice by a finite group inherits the
    lattice's rank."""
    if isinstance(grp, FgAbelian):
        return grp.rank
    if isinstance(grp, CayleyGroup):
        return 0
    return grp.layer.rank


def _nested_all_zero(t) -> bool:
    if isinstance(t, int):
        return t == 0
    return all(_nested_all_zero(x) for x in t)


# ---------------------------------------------------------------------------
# Subgroup bookkeeping


def subgroup_index_in(ambient: GroupLike, data: SubgroupData) -> Union[int, float]:
    """Index of the described subgroup in its ambient group.

    >>> subgroup_index_in(FgAbelian(1), SubgroupData("generators", ((2,),)))
    2
    >>> subgroup_index_in(FgAbelian(0, (4,)), TRIVIAL_SUBGROUP)
    4
    """
    if data.kind == "full":
        return 1
    if data.kind == "trivial":
        return group_order(ambient)
    if data.kind == "generators":
        if not isinstance(ambient, FgAbelian):
            raise InvalidInputError("generator matrices need an abelian ambient group")
        rows = [list(g) for g in data.generators]
        return subgroup_index(ambient, IntMatrix.from_rows(rows, cols=ambient.n_coords))
    if data.kind == "elements":
        if not isinstance(ambient, CayleyGroup):
            raise InvalidInputError("element lists need a finite ambient group")
        return ambient.order // len(data.elements)
    # center
    if isinstance(ambient, FgAbelian):
        return 1
    if isinstance(ambient, CayleyGroup):
        return ambient.order // group_center(ambient).order
    struct = center_structure(ambient)
    total, part = ambient.order(), struct.order()
    if part == INFINITY:
        # Same free rank as the whole group or not: compare via structure.
        return 1 if total == INFINITY and struct.rank == ambient.layer.rank else INFINITY
    if total == INFINITY:
        return INFINITY
    return int(total) // int(part)


def subgroup_structure_in(ambient: GroupLike, data: SubgroupData) -> Optional[FgAbelian]:
    """Isomorphism type of the described subgroup, when abelian; else None."""
    if data.kind == "trivial":
        return FgAbelian(0, ())
    if data.kind == "generators":
        if not isinstance(ambient, FgAbelian):
            raise InvalidInputError("generator matrices need an abelian ambient group")
        rows = [list(g) for g in data.generators]
        return subgroup_structure(ambient, IntMatrix.from_rows(rows, cols=ambient.n_coords))
    if isinstance(ambient, FgAbelian):
        # full and center coincide with the whole group here.
        return ambient
    if isinstance(ambient, CayleyGroup):
        if data.kind == "full":
            ref = full_subgroup(ambient)
        elif data.kind == "elements":
            ref = subgroup_generated(ambient,
                                     [ambient.index_of(n) for n in data.elements])
        else:
            ref = group_center(ambient)
        grp = subgroup_as_group(ambient, ref)
        return abelian_structure(grp) if is_abelian(grp) else None
    # VirtAbelian ambient.
    if data.kind == "center":
        return center_structure(ambient)
    if data.kind == "full" and ambient.is_abelian():
        return abelianization(ambient)
    return None


# ---------------------------------------------------------------------------
# Parsing helpers


def _fail(path: str, message: str):
    raise ModelError(path, message)


def _as_map(raw, path: str) -> dict:
    if not isinstance(raw, dict):
        _fail(path, f"expected an object, got {type(raw).__name__}")
    return raw


def _check_keys(raw: dict, path: str, required: Sequence[str], optional: Sequence[str] = ()):
    for key in raw:
        if key not in required and key not in optional:
            _fail(f"{path}.{key}" if path else key, "unknown key")
    for key in required:
        if key not in raw:
            _fail(path or key, f"missing required key {key!r}")


def _as_bool(raw, path: str) -> bool:
    if not isinstance(raw, bool):
        _fail(path, "expected true or false")
    return raw


def _as_int(raw, path: str) -> int:
    if not isinstance(raw, int) or isinstance(raw, bool):
        _fail(path, "expected an integer")
    return raw


def _as_str(raw, path: str) -> str:
    if not isinstance(raw, str):
        _fail(path, "expected a string")
    return raw


def _as_int_list(raw, path: str) -> List[int]:
    if not isinstance(raw, list):
        _fail(path, "expected a list of integers")
    return [_as_int(v, f"{path}[{i}]") for i, v in enumerate(raw)]


def _as_matrix(raw, path: str) -> List[List[int]]:
    if not isinstance(raw, list):
        _fail(path, "expected a matrix (list of rows)")
    return [_as_int_list(row, f"{path}[{i}]") for i, row in enumerate(raw)]


def _degree_key(key: str, path: str, low: int, high: int) -> int:
    if not re.fullmatch(r"[1-9][0-9]*", key):
        _fail(f"{path}.{key}", "degree keys must be positive integers")
    i = int(key)
    if not low <= i <= high:
        _fail(f"{path}.{key}", f"degree must lie between {low} and {high}")
    return i


def parse_abelian_spec(raw, path: str) -> FgAbelian:
    obj = _as_map(raw, path)
    _check_keys(obj, path, required=("rank", "torsion"))
    rank = _as_int(obj["rank"], f"{path}.rank")
    torsion = _as_int_list(obj["torsion"], f"{path}.torsion")
    try:
        return FgAbelian(rank, tuple(torsion))
    except InvalidInputError as exc:
        _fail(f"{path}.torsion", str(exc))


def _parse_cayley_table(obj: dict, path: str) -> CayleyGroup:
    _check_keys(obj, path, required=("names", "table", "identity"))
    names_raw = obj["names"]
    if not isinstance(names_raw, list) or not names_raw:
        _fail(f"{path}.names", "expected a non-empty list of names")
    names = tuple(_as_str(n, f"{path}.names[{i}]") for i, n in enumerate(names_raw))
    table = _as_matrix(obj["table"], f"{path}.table")
    ident = _as_str(obj["identity"], f"{path}.identity")
    if ident not in names:
        _fail(f"{path}.identity", f"identity {ident!r} is not among the names")
    try:
        return CayleyGroup(len(names), names, tuple(tuple(r) for r in table),
                           names.index(ident))
    except InvalidInputError as exc:
        _fail(path, str(exc))


def parse_layer_aut(raw, layer: FgAbelian, path: str) -> LayerAut:
    """An automorphism given as "identity" or an n x n integer matrix.

    The matrix must respect the coordinate split: an arbitrary unimodular
    block on the free part, a diagonal of +-1 on the torsion part, zeros
    between.
    """
    if raw == "identity":
        return identity_aut(layer)
    mat = _as_matrix(raw, path)
    n = layer.n_coords
    if len(mat) != n or any(len(row) != n for row in mat):
        _fail(path, f"expected a {n} x {n} matrix")
    r = layer.rank
    free = [row[:r] for row in mat[:r]]
    signs = []
    for i in range(r, n):
        for j in range(n):
            if j != i and mat[i][j] != 0:
                _fail(path, "torsion rows may only touch their own coordinate")
        signs.append(mat[i][i])
    for i in range(r):
        for j in range(r, n):
            if mat[i][j] != 0:
                _fail(path, "free rows may not touch torsion coordinates")
    try:
        return LayerAut(layer, IntMatrix.from_rows(free, cols=r), tuple(signs))
    except InvalidInputError as exc:
        _fail(path, str(exc))


def parse_group_spec(raw, path: str, resolver: Optional[Resolver] = None) -> GroupLike:
    obj = _as_map(raw, path)
    keys = set(obj)
    if keys == {"rank", "torsion"}:
        return parse_abelian_spec(obj, path)
    if keys == {"catalog"}:
        name = _as_str(obj["catalog"], f"{path}.catalog")
        try:
            return from_catalog(name)
        except NotFoundError as exc:
            _fail(f"{path}.catalog", str(exc))
    if keys == {"names", "table", "identity"}:
        return _parse_cayley_table(obj, path)
    if keys == {"base", "layer", "action", "cocycle"}:
        base = parse_group_spec(obj["base"], f"{path}.base", resolver)
        if not isinstance(base, CayleyGroup):
            _fail(f"{path}.base", "extension base must be a finite group")
        layer = parse_abelian_spec(obj["layer"], f"{path}.layer")
        action = _parse_action_for_layer(obj["action"], base, layer, f"{path}.action")
        cocycle = _parse_cocycle(obj["cocycle"], base, layer, f"{path}.cocycle")
        try:
            return make_virtabelian(base, layer, action, cocycle)
        except InvalidInputError as exc:
            _fail(path, str(exc))
    _fail(path, "unrecognized group form (expected rank/torsion, catalog, "
                "names/table/identity, or base/layer/action/cocycle)")


def _parse_action_for_layer(raw, base: CayleyGroup, layer: FgAbelian,
                            path: str) -> Dict[int, LayerAut]:
    obj = _as_map(raw, path)
    out: Dict[int, LayerAut] = {}
    for name, mat in obj.items():
        try:
            q = base.index_of(name)
        except NotFoundError:
            _fail(f"{path}.{name}", "not an element of the base group")
        out[q] = parse_layer_aut(mat, layer, f"{path}.{name}")
    return out


def _split_pair_key(key: str, group: CayleyGroup, path: str) -> Tuple[int, int]:
    """Split "q,r" on the comma that makes both halves element names."""
    hits = []
    for pos in range(1, len(key)):
        if key[pos] != ",":
            continue
        left, right = key[:pos], key[pos + 1:]
        if left in group.element_names and right in group.element_names:
            hits.append((group.element_names.index(left),
                         group.element_names.index(right)))
    if not hits:
        _fail(path, f"key {key!r} does not split into two element names")
    if len(hits) > 1:
        _fail(path, f"key {key!r} splits ambiguously; rename the elements")
    return hits[0]


def _parse_cocycle(raw, base: CayleyGroup, layer: FgAbelian,
                   path: str) -> Dict[Tuple[int, int], Tuple[int, ...]]:
    obj = _as_map(raw, path)
    out: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    for key, value in obj.items():
        pair = _split_pair_key(key, base, f"{path}.{key}")
        coords = _as_int_list(value, f"{path}.{key}")
        if len(coords) != layer.n_coords:
            _fail(f"{path}.{key}",
                  f"expected {layer.n_coords} coordinates, got {len(coords)}")
        out[pair] = layer.reduce(coords)
    return out


def parse_subgroup_spec(raw, path: str) -> SubgroupData:
    if raw == "full":
        return FULL
    if raw == "trivial":
        return TRIVIAL_SUBGROUP
    obj = _as_map(raw, path)
    keys = set(obj)
    if keys == {"generators"}:
        gens = _as_matrix(obj["generators"], f"{path}.generators")
        return SubgroupData("generators", tuple(tuple(g) for g in gens))
    if keys == {"elements"}:
        if not isinstance(obj["elements"], list):
            _fail(f"{path}.elements", "expected a list of element names")
        names = tuple(_as_str(n, f"{path}.elements[{i}]")
                      for i, n in enumerate(obj["elements"]))
        return SubgroupData("elements", elements=names)
    _fail(path, 'unrecognized subgroup form (expected "full", "trivial", '
                "generators, or elements)")


def _validate_subgroup_against(data: SubgroupData, ambient: GroupLike,
                               path: str, warnings: List[str],
                               pi1_action_trivial: bool, degree: int):
    if data.kind in ("full", "trivial"):
        if data.kind == "full" and degree == 1 and not pi1_action_trivial:
            warnings.append(
                f"{path}: a full degree-1 evaluation subgroup is inconsistent "
                "with a nontrivial fundamental group action on higher degrees")
        return
    if data.kind == "generators":
        if not isinstance(ambient, FgAbelian):
            _fail(path, "generator matrices need an abelian ambient group")
        for i, gen in enumerate(data.generators):
            if len(gen) != ambient.n_coords:
                _fail(f"{path}.generators[{i}]",
                      f"expected {ambient.n_coords} coordinates")
        return
    if data.kind == "elements":
        if not isinstance(ambient, CayleyGroup):
            _fail(path, "element lists need a finite ambient group")
        try:
            indices = tuple(sorted(ambient.index_of(n) for n in data.elements))
        except NotFoundError as exc:
            _fail(path, str(exc))
        closed = subgroup_generated(ambient, indices)
        if closed.element_indices != indices:
            _fail(path, "element list is not closed under multiplication")
        if degree == 1 and not is_abelian(ambient):
            zc = set(group_center(ambient).element_indices)
            if not set(indices) <= zc:
                # Gottlieb: G_1 always lands in the center.
                warnings.append(
                    f"{path}: degree-1 evaluation subgroup exceeds the center "
                    "of the fundamental group")
        return


# ---------------------------------------------------------------------------
# Space documents


def _parse_whitehead(raw, pi_of, truncation: int, path: str):
    if raw == "trivial":
        return None
    obj = _as_map(raw, path)
    out: Dict[Tuple[int, int], tuple] = {}
    for key, tables in obj.items():
        m = re.fullmatch(r"([1-9][0-9]*),([1-9][0-9]*)", key)
        if not m:
            _fail(f"{path}.{key}", 'pairing keys look like "2,3"')
        i, j = int(m.group(1)), int(m.group(2))
        if i < 2 or j < 2:
            _fail(f"{path}.{key}", "pairings below degree 2 are not supported")
        if i + j - 1 > truncation:
            _fail(f"{path}.{key}", "pairing lands past the truncation degree")
        gi, gj, target = pi_of(i), pi_of(j), pi_of(i + j - 1)
        if not isinstance(tables, list) or len(tables) != gi.n_coords:
            _fail(f"{path}.{key}", f"expected {gi.n_coords} rows")
        table = []
        for a, row in enumerate(tables):
            if not isinstance(row, list) or len(row) != gj.n_coords:
                _fail(f"{path}.{key}[{a}]", f"expected {gj.n_coords} entries")
            table.append(tuple(
                tuple(_as_int_list(cell, f"{path}.{key}[{a}][{b}]"))
                for b, cell in enumerate(row)))
            for b, cell in enumerate(table[-1]):
                if len(cell) != target.n_coords:
                    _fail(f"{path}.{key}[{a}][{b}]",
                          f"expected {target.n_coords} coordinates")
        out[(i, j)] = tuple(table)
    return out


def _parse_pi1_action(raw, pi1: GroupLike, pi: Dict[int, FgAbelian],
                      truncation: int, path: str) -> bool:
    """Returns whether the action is trivial; explicit tables are validated."""
    if raw == "trivial":
        return True
    obj = _as_map(raw, path)
    if not isinstance(pi1, CayleyGroup):
        _fail(path, "explicit fundamental group actions need a finite "
                    "fundamental group given as a table or catalog name")
    per_degree: Dict[int, Dict[int, LayerAut]] = {}
    for name, degrees in obj.items():
        try:
            q = pi1.index_of(name)
        except NotFoundError:
            _fail(f"{path}.{name}", "not an element of the fundamental group")
        degmap = _as_map(degrees, f"{path}.{name}")
        for key, mat in degmap.items():
            i = _degree_key(key, f"{path}.{name}", 2, truncation)
            aut = parse_layer_aut(mat, pi.get(i, FgAbelian(0, ())),
                                  f"{path}.{name}.{key}")
            per_degree.setdefault(i, {})[q] = aut
    trivial = True
    for i, table in per_degree.items():
        ident = identity_aut(pi.get(i, FgAbelian(0, ())))
        auts = [table.get(q, ident) for q in range(pi1.order)]
        if not auts[pi1.identity_index].is_identity():
            _fail(path, "the identity element must act trivially")
        for q in range(pi1.order):
            for r in range(pi1.order):
                if not auts[q].compose(auts[r]).same_as(auts[pi1.table[q][r]]):
                    _fail(path, f"action on degree {i} is not a homomorphism")
        if any(not a.is_identity() for a in auts):
            trivial = False
    return trivial


def _space_from_doc(doc: dict, path: str = "") -> SpaceModel:
    _check_keys(doc, path,
                required=("kind", "name", "truncation", "aspherical", "pi1", "pi"),
                optional=("gottlieb", "whitehead", "pi1_action", "notes"))
    name = _as_str(doc["name"], _join(path, "name"))
    truncation = _as_int(doc["truncation"], _join(path, "truncation"))
    if truncation < 1:
        _fail(_join(path, "truncation"), "truncation must be at least 1")
    aspherical = _as_bool(doc["aspherical"], _join(path, "aspherical"))
    pi1 = parse_group_spec(doc["pi1"], _join(path, "pi1"))
    pi_raw = _as_map(doc["pi"], _join(path, "pi"))
    pi: Dict[int, FgAbelian] = {}
    for key, spec in pi_raw.items():
        i = _degree_key(key, _join(path, "pi"), 2, truncation)
        pi[i] = parse_abelian_spec(spec, _join(path, f"pi.{key}"))
    if aspherical:
        for i, grp in pi.items():
            if not grp.is_trivial():
                _fail(_join(path, f"pi.{i}"),
                      "an aspherical space cannot carry higher homotopy")
    else:
        for i in range(2, truncation + 1):
            if i not in pi:
                _fail(_join(path, "pi"),
                      f"degree {i} is missing; every degree up to the "
                      "truncation must be listed")

    def pi_of(i: int) -> FgAbelian:
        if i == 1:
            if isinstance(pi1, FgAbelian):
                return pi1
            _fail(_join(path, "whitehead"),
                  "degree-1 pairings need an abelian fundamental group")
        return pi.get(i, FgAbelian(0, ()))

    whitehead = _parse_whitehead(doc.get("whitehead", "trivial"), pi_of,
                                 truncation, _join(path, "whitehead"))
    pi1_action_trivial = _parse_pi1_action(doc.get("pi1_action", "trivial"),
                                           pi1, pi, truncation,
                                           _join(path, "pi1_action"))
    warnings: List[str] = []
    gottlieb: Dict[int, SubgroupData] = {}
    got_raw = _as_map(doc.get("gottlieb", {}), _join(path, "gottlieb"))
    for key, spec in got_raw.items():
        i = _degree_key(key, _join(path, "gottlieb"), 1, truncation)
        data = parse_subgroup_spec(spec, _join(path, f"gottlieb.{key}"))
        ambient = pi1 if i == 1 else pi[i]
        _validate_subgroup_against(data, ambient, _join(path, f"gottlieb.{key}"),
                                   warnings, pi1_action_trivial, i)
        gottlieb[i] = data
    if "notes" in doc and not isinstance(doc["notes"], str):
        _fail(_join(path, "notes"), "expected a string")
    return SpaceModel(name=name, truncation=truncation, aspherical=aspherical,
                      pi1=pi1, pi=pi, gottlieb=gottlieb,
                      whitehead_pairs=whitehead,
                      pi1_action_trivial=pi1_action_trivial,
                      raw=doc, warnings=tuple(warnings))


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


# ---------------------------------------------------------------------------
# Transformation documents


def _transformation_from_doc(doc: dict, name: str,
                             resolver: Optional[Resolver]) -> TransformationModel:
    _check_keys(doc, "",
                required=("kind", "space", "group", "free", "action"),
                optional=("cocycle", "g0", "sphere_dimension", "notes"))
    space_raw = doc["space"]
    if isinstance(space_raw, str):
        if resolver is None:
            _fail("space", f"space reference {space_raw!r} needs a catalog to "
                           "resolve against")
        try:
            space = resolver(space_raw)
        except (NotFoundError, KeyError):
            _fail("space", f"unknown space {space_raw!r}")
    else:
        space = _space_from_doc(_as_map(space_raw, "space"), "space")
    group = parse_group_spec(doc["group"], "group")
    if not isinstance(group, CayleyGroup):
        _fail("group", "the acting group must be finite (catalog name or table)")
    free = _as_bool(doc["free"], "free")

    warnings: List[str] = list(space.warnings)
    action_raw = _as_map(doc["action"], "action")
    staged: Dict[int, Dict[int, LayerAut]] = {}
    for elt_name, degrees in action_raw.items():
        try:
            q = group.index_of(elt_name)
        except NotFoundError:
            _fail(f"action.{elt_name}", "not an element of the acting group")
        degmap = _as_map(degrees, f"action.{elt_name}")
        for key, mat in degmap.items():
            i = _degree_key(key, f"action.{elt_name}", 1, space.truncation)
            target = space.pi_at(i)
            if not isinstance(target, FgAbelian):
                if mat == "identity":
                    continue
                _fail(f"action.{elt_name}.{key}",
                      "matrices need an abelian homotopy group in this degree")
            staged.setdefault(i, {})[q] = parse_layer_aut(
                mat, target, f"action.{elt_name}.{key}")
    action_by_degree: Dict[int, Tuple[LayerAut, ...]] = {}
    for i, table in staged.items():
        layer = space.pi_at(i)
        ident = identity_aut(layer)
        auts = tuple(table.get(q, ident) for q in range(group.order))
        if not auts[group.identity_index].is_identity():
            _fail("action", "the identity element must act trivially")
        for q in range(group.order):
            for r in range(group.order):
                if not auts[q].compose(auts[r]).same_as(auts[group.table[q][r]]):
                    _fail("action", f"degree {i} action is not a homomorphism")
        action_by_degree[i] = auts

    cocycle: Optional[Dict[Tuple[int, int], Tuple[int, ...]]] = None
    if "cocycle" in doc:
        pi1 = space.pi1
        if not isinstance(pi1, FgAbelian):
            _fail("cocycle", "cocycle tables need an abelian fundamental group")
        cocycle = _parse_cocycle(doc["cocycle"], group, pi1, "cocycle")
        # Building the extension validates normalization, the cocycle
        # condition, and that the degree-1 action is a homomorphism.
        try:
            make_virtabelian(group, pi1,
                             dict(enumerate(action_by_degree.get(1,
                                  (identity_aut(pi1),) * group.order))),
                             cocycle)
        except InvalidInputError as exc:
            _fail("cocycle", str(exc))

    g0_explicit: Optional[SubgroupRef] = None
    if "g0" in doc:
        if not isinstance(doc["g0"], list):
            _fail("g0", "expected a list of element names")
        names = [_as_str(n, f"g0[{i}]") for i, n in enumerate(doc["g0"])]
        try:
            indices = tuple(sorted(group.index_of(n) for n in names))
        except NotFoundError as exc:
            _fail("g0", str(exc))
        try:
            g0_explicit = SubgroupRef(group, indices)
        except InvalidInputError as exc:
            _fail("g0", str(exc))

    sphere_dimension: Optional[int] = None
    if "sphere_dimension" in doc:
        sphere_dimension = _as_int(doc["sphere_dimension"], "sphere_dimension")
        if sphere_dimension < 1:
            _fail("sphere_dimension", "must be at least 1")
        if sphere_dimension > space.truncation:
            _fail("sphere_dimension", "exceeds the space truncation")
        top = space.pi_at(sphere_dimension)
        if not (isinstance(top, FgAbelian) and top == FgAbelian(1)):
            _fail("sphere_dimension",
                  "the marked degree must carry an infinite cyclic group")
    if "notes" in doc and not isinstance(doc["notes"], str):
        _fail("notes", "expected a string")

    return TransformationModel(name=name, space=space, group=group, free=free,
                               action_by_degree=action_by_degree,
                               cocycle=cocycle, g0_explicit=g0_explicit,
                               sphere_dimension=sphere_dimension, raw=doc,
                               warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# Entry points


def load_model(document: Union[bytes, str], name: Optional[str] = None,
               resolver: Optional[Resolver] = None) -> Model:
    """Parse and fully validate one JSON model document.

    name labels transformation models (their files carry no name field);
    conventionally the file stem.  resolver maps space names to loaded
    SpaceModels for transformation files that reference by name.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelError("", f"not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ModelError("", f"not valid JSON: {exc}") from None
    obj = _as_map(doc, "")
    kind = obj.get("kind")
    if kind == "space":
        return _space_from_doc(obj)
    if kind == "transformation":
        return _transformation_from_doc(obj, name or "unnamed", resolver)
    _fail("kind", 'expected "space" or "transformation"')


def serialize(model: Model) -> str:
    """Canonical JSON for a loaded model: sorted keys, two-space indent.

    Derived models (orbit spaces, templates built without documents) have
    no file form and are rejected.
    """
    if model.raw is None:
        raise UnsupportedError("derived models have no canonical document")
    return json.dumps(model.raw, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Orbit spaces


def orbit_space(tg: TransformationModel) -> SpaceModel:
    """The quotient space of a free action, with transported homotopy data.

    The fundamental group becomes the extension of pi1 by the acting
    group (tabulated outright when small and finite); higher groups copy
    over along the covering identification, and so do their evaluation
    subgroups.  The degree-1 subgroup is filled in only where a theorem
    provides it: centers for aspherical quotients, and centers again for
    quotients of odd spheres.
    """
    if not tg.free:
        raise UnsupportedError("orbit spaces are only constructed for free actions")
    X = tg.space
    pi1X = X.pi1
    new_pi1: GroupLike
    if group_is_trivial(pi1X):
        new_pi1 = tg.group
    elif isinstance(pi1X, FgAbelian):
        if tg.cocycle is None:
            raise InvalidInputError(
                "building the orbit fundamental group needs an explicit "
                "cocycle table; write {} for the zero cocycle")
        ext = make_virtabelian(tg.group, pi1X,
                               dict(enumerate(tg.action_at(1))), tg.cocycle)
        order = ext.order()
        new_pi1 = to_cayley(ext) if order != INFINITY and order <= TO_CAYLEY_CAP else ext
    else:
        raise UnsupportedError(
            "orbit fundamental groups are only built over an abelian or "
            "trivial fundamental group of the total space")

    gottlieb: Dict[int, SubgroupData] = {
        i: data for i, data in X.gottlieb.items() if i >= 2}
    if X.aspherical:
        gottlieb[1] = CENTER
    elif (tg.sphere_dimension is not None and tg.sphere_dimension % 2 == 1
          and group_is_trivial(pi1X)):
        # Free actions on odd spheres: the quotient's degree-1 group is
        # the center of its fundamental group (Oprea).
        gottlieb[1] = CENTER

    action_trivial = X.pi1_action_trivial and all(
        tg.action_trivial_at(i) for i in range(2, X.truncation + 1))
    return SpaceModel(
        name=f"{X.name}/{tg.name}",
        truncation=X.truncation,
        aspherical=X.aspherical,
        pi1=new_pi1,
        pi=dict(X.pi),
        gottlieb=gottlieb,
        whitehead_pairs=X.whitehead_pairs,
        pi1_action_trivial=action_trivial,
        raw=None,
        warnings=X.warnings)


# ---------------------------------------------------------------------------
# Built-in catalog and sphere templates


def sphere_space(n: int) -> SpaceModel:
    """Truncated model of the n-sphere, built from the classical facts.

    Truncation stops at n itself; even spheres carry trivial evaluation
    subgroups (nonzero Euler characteristic), odd H-space dimensions
    (1, 3, 7) carry full ones, and the remaining odd dimensions carry
    index two (the Whitehead square has order two).
    """
    if n < 1:
        raise InvalidInputError("sphere dimension must be at least 1")
    if n == 1:
        doc = {
            "kind": "space", "name": "S1", "truncation": 1, "aspherical": True,
            "pi1": {"rank": 1, "torsion": []}, "pi": {},
            "gottlieb": {"1": "full"}, "whitehead": "trivial",
            "pi1_action": "trivial",
        }
        return _space_from_doc(doc)
    pi = {str(i): {"rank": 0, "torsion": []} for i in range(2, n)}
    pi[str(n)] = {"rank": 1, "torsion": []}
    if n % 2 == 0:
        top: object = "trivial"
    elif n in (3, 7):
        top = "full"
    else:
        top = {"generators": [[2]]}
    doc = {
        "kind": "space", "name": f"S{n}", "truncation": n, "aspherical": False,
        "pi1": {"rank": 0, "torsion": []}, "pi": pi,
        "gottlieb": {str(n): top}, "whitehead": "trivial",
        "pi1_action": "trivial",
    }
    return _space_from_doc(doc)


def sphere_antipodal(n: int) -> TransformationModel:
    """The free involution on the n-sphere; degree (-1)^(n+1) on the top."""
    if n < 2:
        raise InvalidInputError("the antipodal template starts at dimension 2")
    sphere = sphere_space(n)
    action: dict = {}
    if (-1) ** (n + 1) == -1:
        action = {"t": {str(n): [[-1]]}}
    doc = {
        "kind": "transformation", "space": sphere.raw,
        "group": {"catalog": "Z(2)"}, "free": True, "action": action,
        "sphere_dimension": n,
    }
    return _transformation_from_doc(doc, f"s{n}-antipodal", None)


_SPHERE_NAME = re.compile(r"S([1-9][0-9]*)\Z")


def builtin_catalog() -> List[Model]:
    """Every shipped model, spaces first, each alphabetical by name."""
    from importlib import resources
    spaces: Dict[str, SpaceModel] = {}
    transformations: List[TransformationModel] = []
    root = resources.files("thg").joinpath("catalog")
    entries = sorted((p for p in root.iterdir() if p.name.endswith(".json")),
                     key=lambda p: p.name)
    staged = []
    for entry in entries:
        text = entry.read_text(encoding="utf-8")
        doc = json.loads(text)
        staged.append((entry.name[:-len(".json")], text, doc))
    for stem, text, doc in staged:
        if doc.get("kind") == "space":
            model = load_model(text, name=stem)
            spaces[model.name] = model
    for stem, text, doc in staged:
        if doc.get("kind") == "transformation":
            transformations.append(load_model(text, name=stem,
                                              resolver=spaces.__getitem__))
    models: List[Model] = sorted(spaces.values(), key=lambda m: m.name)
    models.extend(sorted(transformations, key=lambda m: m.name))
    return models


def catalog_from_dir(path: str) -> List[Model]:
    """Load every *.json in a directory as one self-contained catalog."""
    import os
    spaces: Dict[str, SpaceModel] = {}
    staged = []
    for fname in sorted(os.listdir(path)):
        if not fname.endswith(".json"):
            continue
        with open(os.path.join(path, fname), "rb") as fh:
            text = fh.read()
        try:
            doc = json.loads(text.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ModelError(fname, f"not valid JSON: {exc}") from None
        staged.append((fname[:-len(".json")], text, doc))
    for stem, text, doc in staged:
        if isinstance(doc, dict) and doc.get("kind") == "space":
            model = load_model(text, name=stem)
            spaces[model.name] = model
    models: List[Model] = sorted(spaces.values(), key=lambda m: m.name)
    for stem, text, doc in staged:
        if isinstance(doc, dict) and doc.get("kind") == "transformation":
            models.append(load_model(text, name=stem, resolver=spaces.__getitem__))
    return models


def find_model(name: str, models: Sequence[Model]) -> Model:
    """Model lookup by name, with S<k> falling back to the sphere template."""
    for m in models:
        if m.name == name:
            return m
    m = _SPHERE_NAME.fullmatch(name)
    if m:
        return sphere_space(int(m.group(1)))
    raise NotFoundError(f"no model named {name!r}")
