"""Plain-text interchange formats.

Complex::

    complex DIM
    vertices N
    cells D COUNT          # one line per D-cell: signed face indices +f0 -f1 +f2 ...
    ...
    provenance             # optional: "dim index" per vertex
    end

Chains follow as ``chain NAME DEGREE NNZ`` with NNZ lines ``cell coefficient``.
A bundle file starts with ``bundle`` and ``key value`` header lines (``n``,
``k``, ``provenance`` as JSON, optional ``labels``), then a complex and the
chains S and optionally D.  Lines starting with ``#`` are ignored.
"""
from __future__ import annotations

import json

from .complex import Chain, ComplexError, DeltaComplex
from .homology import IntMatrix, boundary_matrix


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class _Lines:
    def __init__(self, text: str):
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            s = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("provenance {") else raw.strip()
            if s:
                self.items.append((no, s))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None)

    def next(self, what="more input"):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 0
            raise FormatError(f"unexpected end of input, expected {what}", last + 1)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def expect(self, keyword, nargs):
        no, s = self.next(keyword)
        toks = s.split()
        if toks[0] != keyword or len(toks) != nargs + 1:
            raise FormatError(f"expected '{keyword}' with {nargs} argument(s), got {s!r}", no)
        try:
            return no, [int(t) for t in toks[1:]]
        except ValueError:
            raise FormatError(f"non-integer argument in {s!r}", no) from None


def _ints(no, s):
    try:
        return [int(t) for t in s.split()]
    except ValueError:
        raise FormatError(f"expected integers, got {s!r}", no) from None


# ---------------------------------------------------------------------------
# Complexes


def dump_complex(X: DeltaComplex) -> str:
    out = [f"complex {X.dimension}", f"vertices {X.num_cells(0)}"]
    for d in range(1, X.dimension + 1):
        out.append(f"cells {d} {X.num_cells(d)}")
        for i in range(X.num_cells(d)):
            out.append(" ".join(("+" if j % 2 == 0 else "-") + str(f) for j, f in enumerate(X.faces(d, i))))
    if X.provenance is not None:
        out.append("provenance")
        out.extend(f"{d} {i}" for d, i in X.provenance)
    out.append("end")
    return "\n".join(out) + "\n"


def _read_complex(lines: _Lines) -> DeltaComplex:
    _, (dim,) = lines.expect("complex", 1)
    _, (nv,) = lines.expect("vertices", 1)
    faces = []
    for d in range(1, dim + 1):
        no, (dd, count) = lines.expect("cells", 2)
        if dd != d:
            raise FormatError(f"expected cells of dimension {d}, got {dd}", no)
        level = []
        for _ in range(count):
            no, s = lines.next(f"a {d}-cell")
            toks = s.split()
            if len(toks) != d + 1:
                raise FormatError(f"{d}-cell needs {d + 1} faces, got {len(toks)}", no)
            fs = []
            for j, t in enumerate(toks):
                if t[0] in "+-":
                    want = "+" if j % 2 == 0 else "-"
                    if t[0] != want:
                        raise FormatError(f"face {j} must carry sign {want}", no)
                    t = t[1:]
                try:
                    f = int(t)
                except ValueError:
                    raise FormatError(f"bad face token {toks[j]!r}", no) from None
                below = nv if d == 1 else len(faces[d - 2])
                if not 0 <= f < below:
                    raise FormatError(f"face index {f} out of range (0..{below - 1})", no)
                fs.append(f)
            level.append(tuple(fs))
        faces.append(level)
    prov = None
    no, s = lines.peek()
    if s == "provenance":
        lines.next()
        prov = []
        for _ in range(nv):
            no, s = lines.next("a provenance entry")
            vals = _ints(no, s)
            if len(vals) != 2:
                raise FormatError("provenance entries are 'dim index'", no)
            prov.append(tuple(vals))
    no, s = lines.next("'end'")
    if s != "end":
        raise FormatError(f"expected 'end', got {s!r}", no)
    try:
        return DeltaComplex(nv, faces, provenance=prov)
    except ComplexError as exc:
        raise FormatError(f"invalid complex: {exc}", no) from None


def load_complex(text: str) -> DeltaComplex:
    return _read_complex(_Lines(text))


# ---------------------------------------------------------------------------
# Chains and bundles


def dump_chain(name: str, c: Chain) -> str:
    items = sorted(c.items())
    return "\n".join([f"chain {name} {c.degree} {len(items)}"] + [f"{i} {v}" for i, v in items]) + "\n"


def _read_chain(lines: _Lines, X: DeltaComplex):
    no, s = lines.next("a chain")
    toks = s.split()
    if len(toks) != 4 or toks[0] != "chain":
        raise FormatError(f"expected 'chain NAME DEGREE NNZ', got {s!r}", no)
    name = toks[1]
    try:
        deg, nnz = int(toks[2]), int(toks[3])
    except ValueError:
        raise FormatError("chain degree and size must be integers", no) from None
    coeffs = {}
    for _ in range(nnz):
        no, s = lines.next("a chain entry")
        vals = _ints(no, s)
        if len(vals) != 2:
            raise FormatError("chain entries are 'cell coefficient'", no)
        cell, v = vals
        if not 0 <= cell < X.num_cells(deg):
            raise FormatError(f"cell {cell} out of range for degree {deg}", no)
        if cell in coeffs:
            raise FormatError(f"cell {cell} listed twice", no)
        coeffs[cell] = v
    return name, Chain(deg, coeffs)


def dump_bundle(bundle) -> str:
    out = ["bundle", f"n {bundle.n}", f"k {bundle.k}",
           "provenance " + json.dumps(bundle.provenance, sort_keys=True)]
    if bundle.labels is not None:
        out.append("labels " + " ".join(str(v) for v in bundle.labels))
    text = "\n".join(out) + "\n" + dump_complex(bundle.L) + dump_chain("S", bundle.S)
    if bundle.D is not None:
        text += dump_chain("D", bundle.D)
    return text


def load_bundle(text: str, *, validate: bool = True):
    from .instances import BundleError, InstanceBundle
    lines = _Lines(text)
    no, s = lines.next("'bundle'")
    if s != "bundle":
        raise FormatError(f"expected 'bundle', got {s!r}", no)
    header = {}
    while True:
        no, s = lines.peek()
        if s is None or s.split()[0] == "complex":
            break
        lines.next()
        key, _, val = s.partition(" ")
        if key in header:
            raise FormatError(f"duplicate header {key!r}", no)
        header[key] = (no, val.strip())
    for key in ("n", "k"):
        if key not in header:
            raise FormatError(f"missing header {key!r}", no)
    try:
        n, k = int(header["n"][1]), int(header["k"][1])
    except ValueError:
        raise FormatError("n and k must be integers", header["n"][0]) from None
    prov = {}
    if "provenance" in header:
        try:
            prov = json.loads(header["provenance"][1])
        except json.JSONDecodeError as exc:
            raise FormatError(f"provenance is not JSON: {exc}", header["provenance"][0]) from None
    labels = None
    if "labels" in header:
        labels = _ints(header["labels"][0], header["labels"][1])
    L = _read_complex(lines)
    chains = {}
    while lines.peek()[1] is not None:
        no = lines.peek()[0]
        name, c = _read_chain(lines, L)
        if name in chains:
            raise FormatError(f"duplicate chain {name!r}", no)
        chains[name] = c
    if "S" not in chains:
        raise FormatError("bundle has no chain S")
    bundle = InstanceBundle(n, k, L, chains["S"], chains.get("D"), prov, labels)
    if validate:
        try:
            bundle.validate()
        except BundleError:
            raise
    return bundle


def read_bundle(path, **kw):
    with open(path) as fh:
        return load_bundle(fh.read(), **kw)


def write_bundle(bundle, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_bundle(bundle))


# ---------------------------------------------------------------------------
# Matrices and small covers


def dump_matrix(A: IntMatrix) -> str:
    """Coordinate text format (MatrixMarket, integer, 1-based)."""
    out = ["%%MatrixMarket matrix coordinate integer general", f"{A.rows} {A.cols} {len(A.entries)}"]
    for (r, c), v in sorted(A.entries.items(), key=lambda x: (x[0][1], x[0][0])):
        out.append(f"{r + 1} {c + 1} {v}")
    return "\n".join(out) + "\n"


def load_matrix(text: str) -> IntMatrix:
    lines = [(no, s.strip()) for no, s in enumerate(text.splitlines(), 1) if s.strip()]
    if not lines or not lines[0][1].startswith("%%MatrixMarket matrix coordinate integer"):
        raise FormatError("missing MatrixMarket coordinate integer header", 1)
    body = [(no, s) for no, s in lines[1:] if not s.startswith("%")]
    if not body:
        raise FormatError("missing size line", len(lines) + 1)
    no, s = body[0]
    dims = _ints(no, s)
    if len(dims) != 3:
        raise FormatError("size line is 'rows cols nnz'", no)
    rows, cols, nnz = dims
    if len(body) - 1 != nnz:
        raise FormatError(f"expected {nnz} entries, found {len(body) - 1}", no)
    entries = {}
    for no, s in body[1:]:
        vals = _ints(no, s)
        if len(vals) != 3:
            raise FormatError("entries are 'row col value'", no)
        r, c, v = vals
        if not (1 <= r <= rows and 1 <= c <= cols):
            raise FormatError(f"entry ({r}, {c}) out of range", no)
        entries[(r - 1, c - 1)] = v
    return IntMatrix(rows, cols, entries)


def export_boundary_matrices(X) -> dict[int, str]:
    return {d: dump_matrix(boundary_matrix(X, d)) for d in range(1, X.dimension + 1)}


def dump_small_cover(M) -> str:
    """Complex format of the cover followed by one '(cone cell) (coset bits)' line per cell."""
    from .smallcover import to_delta_complex
    text = dump_complex(to_delta_complex(M)).rstrip("\n")
    assert text.endswith("end")
    out = [text[:-3].rstrip("\n"), f"annotations {M.rank}"]
    for d in range(M.dimension + 1):
        out.append(f"cells {d} {M.num_cells(d)}")
        for i in range(M.num_cells(d)):
            j, g = M.decode(d, i)
            out.append(f"{j} {g:0{M.rank}b}")
    out.append("end")
    return "\n".join(out) + "\n"
