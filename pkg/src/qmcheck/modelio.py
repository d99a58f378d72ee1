"""Model text format, bundled example models, and result serialization.

A model document is line-oriented; ``#`` starts a comment.  Directives::

    qdtmc 1
    states <n>
    init <i>
    aps <name> ...
    label <state> <ap>=<T|F|?> ...
    trans <from> <to> <prob>

Every (state, ap) pair must be labeled exactly once; ``U`` is accepted as
an input alias for ``?``.  Rendering is canonical: states ascending, label
values in declaration order, transitions sorted by (from, to), so parsing
and rendering round-trip losslessly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import ModelFormatError
from .model import AP_RE, BinDtmc, QDtmc
from .tri import Tri

FORMAT_VERSION = "1"


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

def parse_model(text: str) -> QDtmc:
    """Parse a model document, collecting every diagnostic before failing."""
    diags: list[str] = []
    n: int | None = None
    init: int | None = None
    aps: list[str] | None = None
    labels: dict[tuple[int, str], Tri] = {}
    label_lines: dict[tuple[int, str], int] = {}
    trans: dict[tuple[int, int], float] = {}
    header_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive = tokens[0]
        if not header_seen:
            if directive != "qdtmc":
                diags.append(f"line {lineno}: expected 'qdtmc {FORMAT_VERSION}' header")
            elif tokens[1:] != [FORMAT_VERSION]:
                diags.append(f"line {lineno}: unsupported format version "
                             f"{' '.join(tokens[1:])!r}")
            header_seen = True
            if directive == "qdtmc":
                continue
        if directive == "qdtmc":
            diags.append(f"line {lineno}: duplicate header")
        elif directive == "states":
            if n is not None:
                diags.append(f"line {lineno}: duplicate 'states'")
            n = _parse_int(tokens[1:], lineno, "states", diags)
            if n is not None and n < 1:
                diags.append(f"line {lineno}: state count must be positive")
                n = None
        elif directive == "init":
            if init is not None:
                diags.append(f"line {lineno}: duplicate 'init'")
            init = _parse_int(tokens[1:], lineno, "init", diags)
        elif directive == "aps":
            if aps is not None:
                diags.append(f"line {lineno}: duplicate 'aps'")
            aps = []
            for name in tokens[1:]:
                if not AP_RE.match(name):
                    diags.append(f"line {lineno}: bad proposition name {name!r}")
                elif name in aps:
                    diags.append(f"line {lineno}: duplicate proposition {name!r}")
                else:
                    aps.append(name)
            if not aps:
                diags.append(f"line {lineno}: 'aps' needs at least one name")
                aps = None
        elif directive == "label":
            state = _parse_int(tokens[1:2], lineno, "label state", diags)
            if state is None:
                continue
            if len(tokens) < 3:
                diags.append(f"line {lineno}: 'label' needs <ap>=<value> pairs")
            for pair in tokens[2:]:
                name, eq, value = pair.partition("=")
                if not eq:
                    diags.append(f"line {lineno}: malformed label {pair!r}")
                    continue
                try:
                    tri = Tri.from_text(value)
                except ValueError as exc:
                    diags.append(f"line {lineno}: {exc}")
                    continue
                key = (state, name)
                if key in labels:
                    diags.append(
                        f"line {lineno}: duplicate label for ({state},{name}); "
                        f"first on line {label_lines[key]}"
                    )
                    continue
                labels[key] = tri
                label_lines[key] = lineno
        elif directive == "trans":
            if len(tokens) != 4:
                diags.append(f"line {lineno}: 'trans' needs <from> <to> <prob>")
                continue
            src = _parse_int(tokens[1:2], lineno, "trans source", diags)
            dst = _parse_int(tokens[2:3], lineno, "trans target", diags)
            try:
                p = float(tokens[3])
            except ValueError:
                diags.append(f"line {lineno}: bad probability {tokens[3]!r}")
                continue
            if src is None or dst is None:
                continue
            if (src, dst) in trans:
                diags.append(f"line {lineno}: duplicate transition ({src},{dst})")
                continue
            trans[(src, dst)] = p
        else:
            diags.append(f"line {lineno}: unknown directive {directive!r}")

    if not header_seen:
        diags.append("line 1: empty document")
    if n is None:
        diags.append("missing 'states' directive")
    if init is None:
        diags.append("missing 'init' directive")
    if aps is None:
        diags.append("missing 'aps' directive")
    if n is None or init is None or aps is None:
        raise ModelFormatError(diags)

    if not 0 <= init < n:
        diags.append(f"init {init} outside [0, {n - 1}]")
    for (s, name), _ in labels.items():
        if not 0 <= s < n:
            diags.append(f"label for state {s} outside [0, {n - 1}]")
        elif name not in aps:
            diags.append(f"label for unknown proposition ({s},{name})")
    for s in range(n):
        for name in aps:
            if (s, name) not in labels:
                diags.append(f"unlabeled ({s},{name})")
    for (src, dst) in trans:
        if not 0 <= src < n or not 0 <= dst < n:
            diags.append(f"transition ({src},{dst}) outside state range")
    if diags:
        raise ModelFormatError(diags)

    return QDtmc.build(
        n=n,
        init=init,
        aps=aps,
        labels=labels,
        transitions=[(i, j, p) for (i, j), p in trans.items()],
    )


def _parse_int(tokens: list[str], lineno: int, what: str,
               diags: list[str]) -> int | None:
    if len(tokens) != 1 or not tokens[0].lstrip("-").isdigit():
        diags.append(f"line {lineno}: {what} needs one integer")
        return None
    return int(tokens[0])


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

def render_model(m: QDtmc | BinDtmc) -> str:
    """Canonical text form; ``parse_model(render_model(m)) == m``."""
    lines = [f"qdtmc {FORMAT_VERSION}", f"states {m.n}", f"init {m.init}",
             "aps " + " ".join(m.aps)]
    for s in range(m.n):
        pairs = []
        for name, value in zip(m.aps, m.labels[s]):
            text = str(value) if isinstance(value, Tri) else ("T" if value else "F")
            pairs.append(f"{name}={text}")
        lines.append(f"label {s} " + " ".join(pairs))
    for s in range(m.n):
        for t, p in m.rows[s]:
            lines.append(f"trans {s} {t} {p!r}")
    return "\n".join(lines) + "\n"


def to_dot(m: QDtmc | BinDtmc) -> str:
    """Graphviz rendering of the state graph with its labels."""
    lines = ["digraph qdtmc {", "  rankdir=LR;", "  node [shape=circle];"]
    for s in range(m.n):
        pairs = []
        for name, value in zip(m.aps, m.labels[s]):
            text = str(value) if isinstance(value, Tri) else ("T" if value else "F")
            pairs.append(f"{name}={text}")
        shape = ", shape=doublecircle" if s == m.init else ""
        lines.append(f'  {s} [label="s{s}\\n{" ".join(pairs)}"{shape}];')
    for s in range(m.n):
        for t, p in m.rows[s]:
            lines.append(f'  {s} -> {t} [label="{p!r}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Bundled example models
# --------------------------------------------------------------------------

# m1/m2 share one 7-state graph and differ only in how much labeling is
# unknown; m3/m4 do the same on 16 states; m5 models a small program whose
# helper function has unverified behavior (states 8 and 9 are padding kept
# so that state numbers match the original drawing; they are unreachable).

_M1 = """\
qdtmc 1
states 7
init 0
aps p q
label 0 p=F q=?
label 1 p=? q=F
label 2 p=T q=T
label 3 p=F q=?
label 4 p=? q=?
label 5 p=T q=F
label 6 p=T q=T
trans 0 1 0.3
trans 0 2 0.2
trans 0 3 0.5
trans 1 0 0.1
trans 1 2 0.25
trans 1 4 0.4
trans 1 6 0.25
trans 2 1 0.1
trans 2 3 0.1
trans 2 4 0.8
trans 3 2 0.5
trans 3 4 0.5
trans 4 5 0.67
trans 4 6 0.33
trans 5 3 0.1
trans 5 5 0.9
trans 6 6 1.0
"""

_M2 = """\
qdtmc 1
states 7
init 0
aps p q
label 0 p=F q=?
label 1 p=? q=?
label 2 p=T q=T
label 3 p=? q=?
label 4 p=? q=?
label 5 p=T q=F
label 6 p=T q=T
trans 0 1 0.3
trans 0 2 0.2
trans 0 3 0.5
trans 1 0 0.1
trans 1 2 0.25
trans 1 4 0.4
trans 1 6 0.25
trans 2 1 0.1
trans 2 3 0.1
trans 2 4 0.8
trans 3 2 0.5
trans 3 4 0.5
trans 4 5 0.67
trans 4 6 0.33
trans 5 3 0.1
trans 5 5 0.9
trans 6 6 1.0
"""

_M3 = """\
qdtmc 1
states 16
init 0
aps p q r
label 0 p=T q=F r=?
label 1 p=T q=F r=?
label 2 p=F q=T r=T
label 3 p=T q=F r=F
label 4 p=? q=? r=?
label 5 p=T q=T r=?
label 6 p=T q=F r=?
label 7 p=T q=T r=T
label 8 p=F q=F r=T
label 9 p=F q=F r=?
label 10 p=F q=T r=F
label 11 p=T q=T r=T
label 12 p=T q=F r=F
label 13 p=F q=T r=T
label 14 p=F q=F r=F
label 15 p=T q=T r=F
trans 0 1 0.25
trans 0 2 0.25
trans 0 3 0.25
trans 0 4 0.25
trans 1 2 0.17
trans 1 5 0.5
trans 1 6 0.33
trans 2 12 1.0
trans 3 7 0.5
trans 3 8 0.5
trans 4 9 0.5
trans 4 15 0.5
trans 5 6 0.25
trans 5 10 0.5
trans 5 11 0.25
trans 6 12 1.0
trans 7 7 1.0
trans 8 13 0.75
trans 8 14 0.25
trans 9 9 1.0
trans 10 10 1.0
trans 11 11 1.0
trans 12 7 0.5
trans 12 11 0.5
trans 13 13 1.0
trans 14 14 1.0
trans 15 15 1.0
"""

_M4 = """\
qdtmc 1
states 16
init 0
aps p q r
label 0 p=T q=? r=?
label 1 p=T q=? r=?
label 2 p=F q=? r=?
label 3 p=T q=T r=?
label 4 p=? q=? r=?
label 5 p=T q=T r=?
label 6 p=T q=F r=?
label 7 p=? q=T r=T
label 8 p=? q=T r=?
label 9 p=F q=F r=?
label 10 p=F q=T r=F
label 11 p=T q=T r=T
label 12 p=T q=F r=?
label 13 p=F q=T r=T
label 14 p=F q=F r=F
label 15 p=T q=T r=?
trans 0 1 0.25
trans 0 2 0.25
trans 0 3 0.25
trans 0 4 0.25
trans 1 2 0.17
trans 1 5 0.5
trans 1 6 0.33
trans 2 12 1.0
trans 3 7 0.5
trans 3 8 0.5
trans 4 9 0.5
trans 4 15 0.5
trans 5 6 0.25
trans 5 10 0.5
trans 5 11 0.25
trans 6 12 1.0
trans 7 7 1.0
trans 8 13 0.75
trans 8 14 0.25
trans 9 9 1.0
trans 10 10 1.0
trans 11 11 1.0
trans 12 7 0.5
trans 12 11 0.5
trans 13 13 1.0
trans 14 14 1.0
trans 15 15 1.0
"""

_M5 = """\
qdtmc 1
states 11
init 0
aps p q r
label 0 p=F q=F r=F
label 1 p=T q=F r=F
label 2 p=F q=F r=F
label 3 p=T q=T r=F
label 4 p=T q=T r=?
label 5 p=F q=T r=F
label 6 p=F q=? r=F
label 7 p=F q=F r=T
label 8 p=F q=F r=F
label 9 p=F q=F r=F
label 10 p=T q=? r=?
trans 0 1 0.1
trans 0 2 0.9
trans 1 3 1.0
trans 2 5 0.4
trans 2 6 0.6
trans 3 4 1.0
trans 4 4 1.0
trans 5 4 0.82
trans 5 7 0.18
trans 6 7 0.16
trans 6 10 0.84
trans 7 7 1.0
trans 8 0 1.0
trans 9 0 1.0
trans 10 10 1.0
"""

FIXTURE_TEXTS: dict[str, str] = {
    "m1": _M1,
    "m2": _M2,
    "m3": _M3,
    "m4": _M4,
    "m5": _M5,
}


def fixture_names() -> tuple[str, ...]:
    return tuple(FIXTURE_TEXTS)


def fixture(name: str) -> QDtmc:
    """One of the bundled example models (``m1`` .. ``m5``)."""
    try:
        text = FIXTURE_TEXTS[name]
    except KeyError:
        raise KeyError(
            f"unknown fixture {name!r}; available: {', '.join(FIXTURE_TEXTS)}"
        ) from None
    return parse_model(text)


# --------------------------------------------------------------------------
# Result documents
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ResultDocument:
    """Machine-readable outcome of a check or a sweep."""

    command: str
    model: str
    formula: str
    engine: str
    mode: str
    init: int
    verdict: str | None = None
    per_state: tuple[str, ...] | None = None
    rows: tuple[tuple[float, str], ...] | None = None
    evidence: tuple[dict, ...] = ()
    horizon: int | None = None

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "model": self.model,
            "formula": self.formula,
            "engine": self.engine,
            "mode": self.mode,
            "init": self.init,
            "verdict": self.verdict,
            "per_state": list(self.per_state) if self.per_state is not None else None,
            "rows": [[theta, verdict] for theta, verdict in self.rows]
            if self.rows is not None else None,
            "evidence": list(self.evidence),
            "horizon": self.horizon,
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ResultDocument":
        payload = json.loads(text)
        rows = payload.get("rows")
        per_state = payload.get("per_state")
        return cls(
            command=payload["command"],
            model=payload["model"],
            formula=payload["formula"],
            engine=payload["engine"],
            mode=payload["mode"],
            init=payload["init"],
            verdict=payload.get("verdict"),
            per_state=tuple(per_state) if per_state is not None else None,
            rows=tuple((float(t), v) for t, v in rows) if rows is not None else None,
            evidence=tuple(payload.get("evidence", ())),
            horizon=payload.get("horizon"),
        )


def sweep_csv(rows: Sequence) -> str:
    """CSV table for a sweep: header ``theta,verdict``, one row per theta."""
    out = ["theta,verdict"]
    for theta, verdict in rows:
        out.append(f"{theta:.10g},{verdict}")
    return "\n".join(out) + "\n"
