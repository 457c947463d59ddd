"""Line-oriented text format for scenarios, MBQC specs and empirical models.

A file holds one or more documents separated by a line ``---``.  Tokens are
whitespace separated and ``#`` starts a comment.  Sites are written 1-based.
Parsing checks syntax, duplicate ids and cross-references only; the domain
checks (commuting faces, eigenstates, normalization) run when a document is
turned into its domain object and raise :class:`ValidationError`.

Extensions beyond the basic grammar:

* ``E0 <edge> MU <bit>`` fixes ``mu`` explicitly for scenarios without a state;
* bit rows (``SROW`` and ``MATRIX``) are written as compact strings like ``101``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Union

import numpy as np

from .cocycle import InputGroup
from .complex import ChainComplex, RelativeComplex, build, contract
from .errors import DimensionMismatch, DuplicateId, ParseError, UnresolvedReference, ValidationError
from .fraction import EmpiricalModel
from .gf2 import BitMatrix
from .mbqc import MbqcSpec
from .operators import DenseOperator, Observable, PhasedPauli, StateVector, dump_dense, load_dense

SEPARATOR = "---"
# squared-norm slack under which a parsed state is silently renormalized
NORM_SLACK = 1e-9


@dataclass(frozen=True)
class EdgeDecl:
    id: str
    operator: Observable
    path: str | None = None  # sidecar file for DENSE edges


@dataclass(frozen=True)
class PairDecl:
    site: int  # 0-based
    edge0: str
    edge1: str
    srow: tuple[int, ...]


@dataclass
class ScenarioDoc:
    name: str
    backend: str = "pauli"
    qubits: int = 0
    state: tuple[complex, ...] | None = None
    edges: list[EdgeDecl] = field(default_factory=list)
    e0: list[str] = field(default_factory=list)
    mu: dict[str, int] = field(default_factory=dict)
    faces: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    volumes: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    input_m: int | None = None
    pairs: list[PairDecl] = field(default_factory=list)
    ref_face: str | None = None

    kind = "SCENARIO"

    def state_vector(self) -> StateVector | None:
        return None if self.state is None else _state(self.state, self.qubits)

    def complex(self) -> ChainComplex:
        ops = []
        for e in self.edges:
            op = e.operator
            if self.backend == "dense" and isinstance(op, PhasedPauli):
                op = op.to_dense()
            if op.dim != 1 << self.qubits:
                raise DimensionMismatch(f"edge {e.id!r} has dimension {op.dim}, QUBITS gives {1 << self.qubits}")
            ops.append((e.id, op))
        return build(ops, self.e0, faces=self.faces, state=self.state_vector(), mu=self.mu or None, volumes=self.volumes)

    def relative(self) -> RelativeComplex:
        return contract(self.complex())

    def input_group(self) -> InputGroup | None:
        if self.input_m is None:
            return None
        pairs = sorted(self.pairs, key=lambda p: p.site)
        if [p.site for p in pairs] != list(range(len(pairs))):
            raise ValidationError("input group pairs must cover sites 1..n without gaps")
        S = BitMatrix.from_lists([list(p.srow) for p in pairs], self.input_m)
        return InputGroup(self.input_m, tuple((p.edge0, p.edge1) for p in pairs), S)


@dataclass
class MbqcDoc:
    name: str
    qubits: int
    inputs: int
    outputs: int
    state: tuple[complex, ...]
    obs: dict[tuple[int, int], EdgeDecl]  # (site, q) -> operator; id is "site.q"
    Z: BitMatrix
    T: BitMatrix
    S: BitMatrix

    kind = "MBQC"

    def spec(self) -> MbqcSpec:
        pairs = tuple((self.obs[(i, 0)].operator, self.obs[(i, 1)].operator) for i in range(self.qubits))
        return MbqcSpec(self.qubits, self.inputs, self.outputs, _state(self.state, self.qubits), pairs, self.Z, self.T, self.S)


@dataclass
class ModelDoc:
    name: str
    contexts: list[tuple[str, tuple[str, ...]]]
    probabilities: dict[str, dict[tuple[int, ...], Fraction]]

    kind = "MODEL"

    def edges(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for _, members in self.contexts:
            for a in members:
                seen.setdefault(a)
        return tuple(seen)

    def model(self) -> EmpiricalModel:
        return EmpiricalModel(self.edges(), tuple(self.contexts), {c: dict(self.probabilities.get(c, {})) for c, _ in self.contexts})


Document = Union[ScenarioDoc, MbqcDoc, ModelDoc]


def _state(amps: tuple[complex, ...], qubits: int) -> StateVector:
    if len(amps) != 1 << qubits:
        raise DimensionMismatch(f"{len(amps)} amplitudes for {qubits} qubits")
    arr = np.array(amps, dtype=complex)
    norm2 = float(np.vdot(arr, arr).real)
    if abs(norm2 - 1.0) > NORM_SLACK:
        raise ValidationError(f"state amplitudes have squared norm {norm2!r}, not 1")
    return StateVector(arr, normalize=True)


# ---------------------------------------------------------------------------
# parsing


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    body = line.split("#", 1)[0]
    toks = []
    i = 0
    while i < len(body):
        if body[i].isspace():
            i += 1
            continue
        j = i
        while j < len(body) and not body[j].isspace():
            j += 1
        toks.append(_Tok(body[i:j], lineno, i + 1))
        i = j
    return toks


class _Cursor:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def done(self) -> bool:
        return self.i >= len(self.toks)

    def peek(self) -> _Tok | None:
        return None if self.done() else self.toks[self.i]

    def next(self, what: str) -> _Tok:
        if self.done():
            last = self.toks[-1]
            raise ParseError(f"expected {what}", last.line, last.col + len(last.text))
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def keyword(self, word: str) -> _Tok:
        tok = self.next(word)
        if tok.text != word:
            raise ParseError(f"expected {word!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def integer(self, what: str, low: int = 0) -> int:
        tok = self.next(what)
        try:
            value = int(tok.text)
        except ValueError:
            raise ParseError(f"expected integer {what}, got {tok.text!r}", tok.line, tok.col) from None
        if value < low:
            raise ParseError(f"{what} must be at least {low}", tok.line, tok.col)
        return value

    def ident(self, what: str) -> _Tok:
        tok = self.next(what)
        if tok.text == ":":
            raise ParseError(f"expected {what}, got ':'", tok.line, tok.col)
        return tok

    def rest(self) -> list[_Tok]:
        out = self.toks[self.i :]
        self.i = len(self.toks)
        return out

    def end(self) -> None:
        if not self.done():
            tok = self.toks[self.i]
            raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def _bits(tok: _Tok, length: int | None = None) -> tuple[int, ...]:
    if not tok.text or any(ch not in "01" for ch in tok.text):
        raise ParseError(f"expected a bit string, got {tok.text!r}", tok.line, tok.col)
    if length is not None and len(tok.text) != length:
        raise ParseError(f"expected {length} bits, got {len(tok.text)}", tok.line, tok.col)
    return tuple(int(ch) for ch in tok.text)


def _complex(tok: _Tok) -> complex:
    parts = tok.text.split(",")
    try:
        if len(parts) == 1:
            value = complex(float(parts[0]), 0.0)
        elif len(parts) == 2:
            value = complex(float(parts[0]), float(parts[1]))
        else:
            raise ValueError
    except ValueError:
        raise ParseError(f"expected an amplitude 're,im', got {tok.text!r}", tok.line, tok.col) from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ParseError(f"amplitude {tok.text!r} is not finite", tok.line, tok.col)
    return value


def _fraction(tok: _Tok) -> Fraction:
    try:
        value = Fraction(tok.text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a probability p/q, got {tok.text!r}", tok.line, tok.col) from None
    if not 0 <= value <= 1:
        raise ParseError(f"probability {tok.text} outside [0, 1]", tok.line, tok.col)
    return value


def _pauli(tok: _Tok) -> PhasedPauli:
    try:
        return PhasedPauli.from_string(tok.text)
    except ParseError as exc:
        raise ParseError(exc.message, tok.line, tok.col) from None


Loader = Callable[[str], str]


def _operator(cur: _Cursor, loader: Loader | None) -> tuple[Observable, str | None]:
    kind = cur.next("PAULI or DENSE")
    if kind.text == "PAULI":
        return _pauli(cur.next("Pauli string")), None
    if kind.text == "DENSE":
        ptok = cur.next("path")
        if loader is None:
            raise ParseError("DENSE operators need a base directory to load from", ptok.line, ptok.col)
        try:
            text = loader(ptok.text)
        except (OSError, UnicodeDecodeError) as exc:
            raise ParseError(f"cannot read {ptok.text!r}: {exc}", ptok.line, ptok.col) from None
        try:
            return load_dense(text), ptok.text
        except ParseError as exc:
            raise ParseError(f"{ptok.text}: {exc.message}", ptok.line, ptok.col) from None
    raise ParseError(f"expected PAULI or DENSE, got {kind.text!r}", kind.line, kind.col)


def _members(cur: _Cursor, what: str) -> list[_Tok]:
    cur.keyword(":")
    toks = cur.rest()
    if not toks:
        raise ParseError(f"expected at least one {what}", cur.toks[-1].line, cur.toks[-1].col + 1)
    return toks


def _split_documents(text: str) -> list[list[list[_Tok]]]:
    docs: list[list[list[_Tok]]] = [[]]
    for lineno, raw in enumerate(text.split("\n"), start=1):
        toks = _tokenize(raw, lineno)
        if len(toks) == 1 and toks[0].text == SEPARATOR:
            docs.append([])
        elif toks:
            docs[-1].append(toks)
    return docs


def parse_all(text: str | bytes, base_dir: str | Path | None = None) -> list[Document]:
    """Parse every document in ``text``; DENSE paths resolve against ``base_dir``."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc.reason}", 1, 1) from None
    loader = None
    if base_dir is not None:
        root = Path(base_dir)
        loader = lambda rel: (root / rel).read_text(encoding="utf-8")  # noqa: E731
    docs = []
    for lines in _split_documents(text):
        if not lines:
            # a separator with nothing after it is tolerated, an empty file is not
            continue
        docs.append(_parse_document(lines, loader))
    if not docs:
        raise ParseError("no document found", 1, 1)
    return docs


def parse(text: str | bytes, base_dir: str | Path | None = None) -> Document:
    """Parse text holding exactly one document."""
    docs = parse_all(text, base_dir)
    if len(docs) != 1:
        raise ParseError(f"expected one document, found {len(docs)}", 1, 1)
    return docs[0]


def load(path: str | Path) -> list[Document]:
    path = Path(path)
    return parse_all(path.read_bytes(), path.parent)


def _parse_document(lines: list[list[_Tok]], loader: Loader | None) -> Document:
    head = lines[0][0]
    if head.text == "SCENARIO":
        return _parse_scenario(lines, loader)
    if head.text == "MBQC":
        return _parse_mbqc(lines, loader)
    if head.text == "MODEL":
        return _parse_model(lines)
    raise ParseError(f"expected SCENARIO, MBQC or MODEL, got {head.text!r}", head.line, head.col)


def _header(cur: _Cursor, word: str) -> str:
    cur.keyword(word)
    name = cur.ident("document name").text
    cur.end()
    return name


def _parse_scenario(lines: list[list[_Tok]], loader: Loader | None) -> ScenarioDoc:
    doc = ScenarioDoc(_header(_Cursor(lines[0]), "SCENARIO"))
    edge_at: dict[str, _Tok] = {}
    face_at: dict[str, _Tok] = {}
    refs: list[tuple[_Tok, str]] = []  # (token, "edge" | "face")
    seen_qubits = seen_backend = False
    pair_sites: dict[int, _Tok] = {}
    srows: dict[int, tuple[int, ...]] = {}
    pair_tokens: list[tuple[_Tok, int, _Tok, _Tok]] = []
    e0_seen: set[str] = set()
    for toks in lines[1:]:
        cur = _Cursor(toks)
        word = cur.next("keyword")
        if word.text == "BACKEND":
            tok = cur.next("backend")
            if tok.text not in ("pauli", "dense"):
                raise ParseError(f"unknown backend {tok.text!r}", tok.line, tok.col)
            if seen_backend:
                raise DuplicateId("BACKEND given twice", word.line, word.col)
            doc.backend, seen_backend = tok.text, True
        elif word.text == "QUBITS":
            if seen_qubits:
                raise DuplicateId("QUBITS given twice", word.line, word.col)
            doc.qubits, seen_qubits = cur.integer("qubit count", 1), True
            if doc.qubits > 10:
                raise ParseError("at most 10 qubits are supported", word.line, word.col)
        elif word.text == "STATE":
            if doc.state is not None:
                raise DuplicateId("STATE given twice", word.line, word.col)
            cur.keyword("AMPLITUDES")
            doc.state = tuple(_complex(t) for t in cur.rest())
        elif word.text == "EDGE":
            tok = cur.ident("edge id")
            if tok.text in edge_at:
                raise DuplicateId(f"edge {tok.text!r} declared twice", tok.line, tok.col)
            op, path = _operator(cur, loader)
            edge_at[tok.text] = tok
            doc.edges.append(EdgeDecl(tok.text, op, path))
        elif word.text == "E0":
            tok = cur.ident("edge id")
            if tok.text in e0_seen:
                raise DuplicateId(f"edge {tok.text!r} listed in E0 twice", tok.line, tok.col)
            e0_seen.add(tok.text)
            refs.append((tok, "edge"))
            doc.e0.append(tok.text)
            if not cur.done():
                cur.keyword("MU")
                doc.mu[tok.text] = _bits(cur.next("mu bit"), 1)[0]
        elif word.text in ("FACE", "VOLUME"):
            tok = cur.ident("id")
            is_face = word.text == "FACE"
            if is_face:
                if tok.text in face_at:
                    raise DuplicateId(f"face {tok.text!r} declared twice", tok.line, tok.col)
                face_at[tok.text] = tok
            elif tok.text in {v for v, _ in doc.volumes}:
                raise DuplicateId(f"volume {tok.text!r} declared twice", tok.line, tok.col)
            members = _members(cur, "edge" if is_face else "face")
            refs += [(m, "edge" if is_face else "face") for m in members]
            entry = (tok.text, tuple(m.text for m in members))
            (doc.faces if is_face else doc.volumes).append(entry)
        elif word.text == "INPUTGROUP":
            if doc.input_m is not None:
                raise DuplicateId("INPUTGROUP given twice", word.line, word.col)
            cur.keyword("M")
            doc.input_m = cur.integer("input count", 1)
            while not cur.done():
                kw = cur.next("PAIR or SROW")
                if kw.text == "PAIR":
                    site_tok = cur.peek()
                    site = cur.integer("site", 1) - 1
                    if site in pair_sites:
                        raise DuplicateId(f"site {site + 1} paired twice", site_tok.line, site_tok.col)
                    pair_sites[site] = site_tok
                    a, b = cur.ident("edge"), cur.ident("edge")
                    refs += [(a, "edge"), (b, "edge")]
                    pair_tokens.append((site_tok, site, a, b))
                elif kw.text == "SROW":
                    site_tok = cur.peek()
                    site = cur.integer("site", 1) - 1
                    if site in srows:
                        raise DuplicateId(f"SROW for site {site + 1} given twice", site_tok.line, site_tok.col)
                    srows[site] = _bits(cur.next("bit row"), doc.input_m)
                else:
                    raise ParseError(f"expected PAIR or SROW, got {kw.text!r}", kw.line, kw.col)
        elif word.text == "REFFACE":
            if doc.ref_face is not None:
                raise DuplicateId("REFFACE given twice", word.line, word.col)
            tok = cur.ident("face id")
            refs.append((tok, "face"))
            doc.ref_face = tok.text
        else:
            raise ParseError(f"unknown scenario keyword {word.text!r}", word.line, word.col)
        cur.end()

    if not seen_qubits:
        raise ParseError("missing QUBITS line", lines[0][0].line, 1)
    for tok, what in refs:
        table = edge_at if what == "edge" else face_at
        if tok.text not in table:
            raise UnresolvedReference(f"undeclared {what} {tok.text!r}", tok.line, tok.col)
    for site_tok, site, a, b in pair_tokens:
        if site not in srows:
            raise UnresolvedReference(f"site {site + 1} has a PAIR but no SROW", site_tok.line, site_tok.col)
        doc.pairs.append(PairDecl(site, a.text, b.text, srows.pop(site)))
    if srows:
        site = min(srows)
        raise UnresolvedReference(f"SROW for site {site + 1} has no PAIR", lines[0][0].line, 1)
    return doc


def _parse_mbqc(lines: list[list[_Tok]], loader: Loader | None) -> MbqcDoc:
    name = _header(_Cursor(lines[0]), "MBQC")
    dims = None
    state = None
    obs: dict[tuple[int, int], EdgeDecl] = {}
    rows: dict[str, tuple[_Tok, list[tuple[int, ...]]]] = {}
    for toks in lines[1:]:
        cur = _Cursor(toks)
        word = cur.next("keyword")
        if word.text == "QUBITS":
            if dims is not None:
                raise DuplicateId("QUBITS given twice", word.line, word.col)
            n = cur.integer("qubit count", 1)
            if n > 10:
                raise ParseError("at most 10 qubits are supported", word.line, word.col)
            cur.keyword("INPUTS")
            m = cur.integer("input count", 1)
            cur.keyword("OUTPUTS")
            k = cur.integer("output count", 1)
            dims = (n, m, k)
        elif word.text == "STATE":
            if state is not None:
                raise DuplicateId("STATE given twice", word.line, word.col)
            cur.keyword("AMPLITUDES")
            state = tuple(_complex(t) for t in cur.rest())
        elif word.text == "OBS":
            site_tok = cur.peek()
            site = cur.integer("site", 1) - 1
            q = cur.integer("basis choice", 0)
            if q > 1:
                raise ParseError("basis choice must be 0 or 1", site_tok.line, site_tok.col)
            if (site, q) in obs:
                raise DuplicateId(f"OBS {site + 1} {q} given twice", site_tok.line, site_tok.col)
            op, path = _operator(cur, loader)
            obs[(site, q)] = EdgeDecl(f"{site + 1}.{q}", op, path)
        elif word.text == "MATRIX":
            tok = cur.next("Z, T or S")
            if tok.text not in ("Z", "T", "S"):
                raise ParseError(f"expected Z, T or S, got {tok.text!r}", tok.line, tok.col)
            if tok.text in rows:
                raise DuplicateId(f"MATRIX {tok.text} given twice", tok.line, tok.col)
            rows[tok.text] = (tok, [_bits(t) for t in cur.rest()])
        else:
            raise ParseError(f"unknown MBQC keyword {word.text!r}", word.line, word.col)
        cur.end()

    head = lines[0][0]
    if dims is None:
        raise ParseError("missing QUBITS ... INPUTS ... OUTPUTS line", head.line, 1)
    if state is None:
        raise ParseError("missing STATE line", head.line, 1)
    n, m, k = dims
    for key in obs:
        if key[0] >= n:
            raise UnresolvedReference(f"OBS for site {key[0] + 1} beyond {n} qubits", head.line, 1)
    for site in range(n):
        for q in (0, 1):
            if (site, q) not in obs:
                raise UnresolvedReference(f"missing OBS {site + 1} {q}", head.line, 1)
    shapes = {"Z": (k, n), "T": (n, n), "S": (n, m)}
    mats = {}
    for key, (nr, nc) in shapes.items():
        if key not in rows:
            if key == "T":
                mats[key] = BitMatrix.zeros(n, n)
                continue
            raise ParseError(f"missing MATRIX {key}", head.line, 1)
        tok, bits = rows[key]
        if len(bits) != nr or any(len(r) != nc for r in bits):
            raise ParseError(f"MATRIX {key} must be {nr} rows of {nc} bits", tok.line, tok.col)
        mats[key] = BitMatrix.from_lists([list(r) for r in bits], nc)
    return MbqcDoc(name, n, m, k, state, obs, mats["Z"], mats["T"], mats["S"])


def _parse_model(lines: list[list[_Tok]]) -> ModelDoc:
    name = _header(_Cursor(lines[0]), "MODEL")
    contexts: list[tuple[str, tuple[str, ...]]] = []
    probs: dict[str, dict[tuple[int, ...], Fraction]] = {}
    sizes: dict[str, int] = {}
    pending: list[tuple[_Tok, _Tok, _Tok]] = []
    for toks in lines[1:]:
        cur = _Cursor(toks)
        word = cur.next("keyword")
        if word.text == "CONTEXT":
            tok = cur.ident("context id")
            if tok.text in sizes:
                raise DuplicateId(f"context {tok.text!r} declared twice", tok.line, tok.col)
            members = _members(cur, "edge")
            names = tuple(t.text for t in members)
            if len(set(names)) != len(names):
                raise DuplicateId(f"context {tok.text!r} lists an edge twice", tok.line, tok.col)
            contexts.append((tok.text, names))
            sizes[tok.text] = len(names)
        elif word.text == "P":
            pending.append((cur.ident("context id"), cur.next("outcome bits"), cur.next("probability")))
        else:
            raise ParseError(f"unknown model keyword {word.text!r}", word.line, word.col)
        cur.end()
    for ctok, otok, ptok in pending:
        if ctok.text not in sizes:
            raise UnresolvedReference(f"undeclared context {ctok.text!r}", ctok.line, ctok.col)
        outcome = _bits(otok, sizes[ctok.text])
        table = probs.setdefault(ctok.text, {})
        if outcome in table:
            raise DuplicateId(f"outcome {otok.text} of {ctok.text!r} given twice", otok.line, otok.col)
        table[outcome] = _fraction(ptok)
    return ModelDoc(name, contexts, probs)


# ---------------------------------------------------------------------------
# serialization


def _fmt_complex(z: complex) -> str:
    return f"{float(z.real)!r},{float(z.imag)!r}"


def _fmt_op(decl: EdgeDecl) -> str:
    if isinstance(decl.operator, PhasedPauli):
        return f"PAULI {decl.operator.to_string()}"
    if decl.path is None:
        raise ValidationError(f"dense operator {decl.id!r} has no sidecar path")
    return f"DENSE {decl.path}"


def _fmt_bits(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def _serialize_one(doc: Document) -> list[str]:
    if isinstance(doc, ScenarioDoc):
        out = [f"SCENARIO {doc.name}", f"BACKEND {doc.backend}", f"QUBITS {doc.qubits}"]
        if doc.state is not None:
            out.append("STATE AMPLITUDES " + " ".join(_fmt_complex(z) for z in doc.state))
        out += [f"EDGE {e.id} {_fmt_op(e)}" for e in doc.edges]
        for a in doc.e0:
            out.append(f"E0 {a} MU {doc.mu[a]}" if a in doc.mu else f"E0 {a}")
        out += [f"FACE {fid} : {' '.join(ms)}" for fid, ms in doc.faces]
        out += [f"VOLUME {vid} : {' '.join(fs)}" for vid, fs in doc.volumes]
        if doc.input_m is not None:
            pairs = sorted(doc.pairs, key=lambda p: p.site)
            parts = [f"INPUTGROUP M {doc.input_m}"]
            parts += [f"PAIR {p.site + 1} {p.edge0} {p.edge1}" for p in pairs]
            parts += [f"SROW {p.site + 1} {_fmt_bits(p.srow)}" for p in pairs]
            out.append(" ".join(parts))
        if doc.ref_face is not None:
            out.append(f"REFFACE {doc.ref_face}")
        return out
    if isinstance(doc, MbqcDoc):
        out = [
            f"MBQC {doc.name}",
            f"QUBITS {doc.qubits} INPUTS {doc.inputs} OUTPUTS {doc.outputs}",
            "STATE AMPLITUDES " + " ".join(_fmt_complex(z) for z in doc.state),
        ]
        out += [f"OBS {s + 1} {q} {_fmt_op(doc.obs[(s, q)])}" for s, q in sorted(doc.obs)]
        for key in ("Z", "T", "S"):
            mat = getattr(doc, key)
            out.append(f"MATRIX {key} " + " ".join(_fmt_bits(r) for r in mat.to_lists()))
        return out
    if isinstance(doc, ModelDoc):
        out = [f"MODEL {doc.name}"]
        out += [f"CONTEXT {cid} : {' '.join(ms)}" for cid, ms in doc.contexts]
        for cid, _ in doc.contexts:
            for outcome in sorted(doc.probabilities.get(cid, {})):
                p = doc.probabilities[cid][outcome]
                out.append(f"P {cid} {_fmt_bits(outcome)} {p.numerator}/{p.denominator}")
        return out
    raise TypeError(f"not a document: {doc!r}")


def serialize(docs: Document | list[Document]) -> str:
    if not isinstance(docs, list):
        docs = [docs]
    blocks = ["\n".join(_serialize_one(d)) for d in docs]
    return ("\n" + SEPARATOR + "\n").join(blocks) + "\n"


def sidecars(docs: Document | list[Document]) -> dict[str, str]:
    """Dense operator files referenced by ``docs``, keyed by relative path."""
    if not isinstance(docs, list):
        docs = [docs]
    files: dict[str, str] = {}
    for doc in docs:
        decls = doc.edges if isinstance(doc, ScenarioDoc) else list(doc.obs.values()) if isinstance(doc, MbqcDoc) else []
        for e in decls:
            if isinstance(e.operator, DenseOperator):
                files[e.path] = dump_dense(e.operator)
    return files


def dump(docs: Document | list[Document], path: str | Path) -> None:
    """Write ``docs`` to ``path`` and any dense sidecars beside it."""
    path = Path(path)
    path.write_text(serialize(docs), encoding="utf-8")
    for rel, text in sidecars(docs).items():
        target = path.parent / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# documents from domain objects


def _amps(state: StateVector | None) -> tuple[complex, ...] | None:
    return None if state is None else tuple(complex(z) for z in state.amplitudes)


def scenario_document(
    cx: ChainComplex | RelativeComplex,
    name: str,
    group: InputGroup | None = None,
    ref_face: str | None = None,
) -> ScenarioDoc:
    """Describe a complex in the text format; dense edges get sidecar paths ``<name>/<edge>.op``."""
    if isinstance(cx, RelativeComplex):
        cx = cx.parent
    reps = [e.representative for e in cx.edges]
    dense = any(isinstance(op, DenseOperator) for op in reps)
    qubits = reps[0].dim.bit_length() - 1 if reps else 0
    edges = [EdgeDecl(e.id, e.representative, f"{name}/{e.id}.op" if dense else None) for e in cx.edges]
    if dense:
        edges = [EdgeDecl(e.id, e.operator.to_dense() if isinstance(e.operator, PhasedPauli) else e.operator, e.path) for e in edges]
    e0 = [e.id for e in cx.edges if e.id in cx.e0]
    doc = ScenarioDoc(
        name=name,
        backend="dense" if dense else "pauli",
        qubits=qubits,
        state=_amps(cx.state),
        edges=edges,
        e0=e0,
        mu={} if cx.state is not None else {a: cx.mu[a] for a in e0},
        faces=[(f.id, cx.face_order.get(f.id, tuple(sorted(f.edges)))) for f in cx.faces],
        volumes=[(vid, tuple(sorted(fs))) for vid, fs in cx.volumes],
        ref_face=ref_face,
    )
    if group is not None:
        doc.input_m = group.m
        doc.pairs = [PairDecl(i, a, b, tuple(group.S.row(i).to_list())) for i, (a, b) in enumerate(group.pairs)]
    return doc


def mbqc_document(spec: MbqcSpec, name: str) -> MbqcDoc:
    obs = {}
    for i, pair in enumerate(spec.obs):
        for q, op in enumerate(pair):
            path = f"{name}/obs_{i + 1}_{q}.op" if isinstance(op, DenseOperator) else None
            obs[(i, q)] = EdgeDecl(f"{i + 1}.{q}", op, path)
    return MbqcDoc(name, spec.n_sites, spec.m, spec.k, _amps(spec.state), obs, spec.Z, spec.T, spec.S)


def model_document(model: EmpiricalModel, name: str) -> ModelDoc:
    return ModelDoc(name, list(model.contexts), {c: dict(model.dist[c]) for c, _ in model.contexts})
