"""Election text format, PrefLib import and JSON result documents.

Election files::

    # comments run to the end of a line
    election <n> <m> <k>
    candidates <name> ... <name>
    voter <id>: a, b > c > d

Groups separated by ``>`` are indifference classes, best first; candidates
not listed form one final tied class, so ``voter 7: a, b`` is an approval
ballot for ``{a, b}``.  Serialization lists classes in canonical candidate
order and leaves the final class implicit whenever there are two or more.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction

from .domains import CandidateOrder, Embedding, MixedOrder, VoterOrder
from .election import NAME_RE, Election, ElectionError

SCHEMA = "v1"
PREFLIB_KINDS = ("soc", "toc", "cat")


class ParseError(ElectionError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _int(token: str, what: str, line: int) -> int:
    if not re.fullmatch(r"[0-9]+", token):
        raise ParseError(f"{what} must be a non-negative integer, got {token!r}", line)
    return int(token)


def parse_election(text: str) -> Election:
    """Parse the election text format; errors carry the offending line number."""
    lines = [(no, _strip(raw)) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, s) for no, s in lines if s]
    if not lines:
        raise ParseError("empty input")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 4 or parts[0] != "election":
        raise ParseError("expected 'election <n> <m> <k>'", no)
    n, m, k = (_int(t, w, no) for t, w in zip(parts[1:], ("n", "m", "k")))
    if len(lines) < 2:
        raise ParseError("missing 'candidates' line")
    no, cand_line = lines[1]
    parts = cand_line.split()
    if not parts or parts[0] != "candidates":
        raise ParseError("expected 'candidates <name> ...'", no)
    names = parts[1:]
    if len(names) != m:
        raise ParseError(f"header declares m={m} but {len(names)} candidates are listed", no)
    for name in names:
        if not NAME_RE.match(name):
            raise ParseError(f"invalid candidate name {name!r}", no)
    if len(set(names)) != m:
        raise ParseError("duplicate candidate name", no)
    if m == 0:
        raise ParseError("election needs at least one candidate", no)
    if not 1 <= k <= m:
        raise ParseError(f"k={k} must satisfy 1 <= k <= m={m}", lines[0][0])
    index = {c: j for j, c in enumerate(names)}
    ids: list = []
    rankings: list = []
    for no, line in lines[2:]:
        m_ = re.fullmatch(r"voter\s+([^\s:]+)\s*:(.*)", line)
        if not m_:
            raise ParseError("expected 'voter <id>: <ranking>'", no)
        vid, body = m_.group(1), m_.group(2).strip()
        if not NAME_RE.match(vid):
            raise ParseError(f"invalid voter id {vid!r}", no)
        if vid in ids:
            raise ParseError(f"duplicate voter id {vid!r}", no)
        classes = []
        seen: set = set()
        if body:
            for group in body.split(">"):
                members = [x.strip() for x in group.split(",")]
                if any(not x for x in members):
                    raise ParseError("empty candidate in ranking", no)
                cls = set()
                for x in members:
                    if x not in index:
                        raise ParseError(f"unknown candidate {x!r}", no)
                    c = index[x]
                    if c in seen or c in cls:
                        raise ParseError(f"duplicate candidate {x!r}", no)
                    cls.add(c)
                seen |= cls
                classes.append(frozenset(cls))
        rest = frozenset(range(m)) - seen
        if rest:
            classes.append(rest)
        ids.append(vid)
        rankings.append(tuple(classes))
    if len(rankings) != n:
        raise ParseError(f"header declares n={n} but {len(rankings)} voters are listed")
    if n == 0:
        raise ParseError("election needs at least one voter")
    return Election(tuple(names), tuple(rankings), k, tuple(ids))


def serialize_election(election: Election) -> str:
    out = [f"election {election.n} {election.m} {election.k}",
           "candidates " + " ".join(election.candidates)]
    for vid, ranking in zip(election.voter_ids, election.rankings):
        shown = ranking if len(ranking) == 1 else ranking[:-1]
        groups = [", ".join(election.candidates[c] for c in sorted(cls)) for cls in shown]
        out.append(f"voter {vid}: " + " > ".join(groups))
    return "\n".join(out) + "\n"


# PrefLib

def _preflib_groups(body: str, line: int) -> list:
    groups = []
    pos = 0
    body = body.strip()
    while pos < len(body):
        if body[pos] == "{":
            end = body.find("}", pos)
            if end < 0:
                raise ParseError("unclosed '{'", line)
            inner = body[pos + 1:end].strip()
            groups.append([x.strip() for x in inner.split(",")] if inner else [])
            pos = end + 1
        else:
            end = body.find(",", pos)
            end = len(body) if end < 0 else end
            groups.append([body[pos:end].strip()])
            pos = end
        while pos < len(body) and body[pos] in " ,":
            pos += 1
    return groups


def import_preflib(text: str, kind: str, k: int) -> Election:
    """Read a PrefLib soc / toc / cat file (metadata-comment or legacy header).

    Count lines ``multiplicity: ranking`` are expanded into that many voters.
    For ``cat`` the first category is the approval set.
    """
    if kind not in PREFLIB_KINDS:
        raise ParseError(f"unsupported PrefLib kind {kind!r}; expected one of {', '.join(PREFLIB_KINDS)}")
    meta: dict = {}
    alt_names: dict = {}
    rows = []
    raw = [(no, line.strip()) for no, line in enumerate(text.splitlines(), 1)]
    raw = [(no, s) for no, s in raw if s]
    legacy = bool(raw) and not raw[0][1].startswith("#")
    if legacy:
        try:
            m = int(raw[0][1])
            for no, s in raw[1:m + 1]:
                idx, name = s.split(",", 1)
                alt_names[int(idx)] = name.strip()
            no, s = raw[m + 1]
            n_total, _, unique = (int(x) for x in s.split(",")[:3])
        except (ValueError, IndexError):
            raise ParseError("malformed legacy PrefLib header") from None
        meta = {"NUMBER ALTERNATIVES": m, "NUMBER VOTERS": n_total, "NUMBER UNIQUE ORDERS": unique}
        for no, s in raw[m + 2:]:
            count, _, body = s.partition(",")
            rows.append((no, count, body))
    else:
        for no, s in raw:
            if s.startswith("#"):
                key, sep, value = s[1:].partition(":")
                key = key.strip().upper()
                if not sep:
                    continue
                mm = re.fullmatch(r"ALTERNATIVE NAME (\d+)", key)
                if mm:
                    alt_names[int(mm.group(1))] = value.strip()
                elif key in ("NUMBER ALTERNATIVES", "NUMBER VOTERS", "NUMBER UNIQUE ORDERS"):
                    try:
                        meta[key] = int(value)
                    except ValueError:
                        raise ParseError(f"{key} must be an integer", no) from None
                continue
            count, sep, body = s.partition(":")
            if not sep:
                raise ParseError("expected '<count>: <order>'", no)
            rows.append((no, count, body))
    if "NUMBER ALTERNATIVES" not in meta:
        raise ParseError("missing NUMBER ALTERNATIVES")
    m = meta["NUMBER ALTERNATIVES"]
    if m < 1:
        raise ParseError("NUMBER ALTERNATIVES must be positive")
    labels = [alt_names.get(j, "") for j in range(1, m + 1)]
    if all(NAME_RE.match(x) for x in labels) and len(set(labels)) == m:
        cands = tuple(labels)
    else:
        cands = tuple(f"c{j}" for j in range(1, m + 1))
    rankings = []
    for no, count, body in rows:
        count = count.strip()
        if not count.isdigit():
            raise ParseError(f"invalid multiplicity {count!r}", no)
        groups = _preflib_groups(body, no)
        classes = []
        seen: set = set()
        for g in groups:
            cls = set()
            for token in g:
                if not token.isdigit() or not 1 <= int(token) <= m:
                    raise ParseError(f"unknown alternative {token!r}", no)
                c = int(token) - 1
                if c in seen or c in cls:
                    raise ParseError(f"duplicate alternative {token}", no)
                cls.add(c)
            seen |= cls
            classes.append(frozenset(cls))
        if kind == "soc":
            if any(len(c) != 1 for c in classes) or len(seen) != m:
                raise ParseError("soc rows must be complete strict orders", no)
        if kind == "cat":
            approved = classes[0] if classes else frozenset()
            classes = [approved] if approved else []
        classes = [c for c in classes if c]
        rest = frozenset(range(m)) - frozenset().union(*classes) if classes else frozenset(range(m))
        if rest:
            classes.append(rest)
        rankings.extend([tuple(classes)] * int(count))
    if "NUMBER VOTERS" in meta and meta["NUMBER VOTERS"] != len(rankings):
        raise ParseError(f"NUMBER VOTERS is {meta['NUMBER VOTERS']} but the counts sum to {len(rankings)}")
    if "NUMBER UNIQUE ORDERS" in meta and meta["NUMBER UNIQUE ORDERS"] != len(rows):
        raise ParseError(f"NUMBER UNIQUE ORDERS is {meta['NUMBER UNIQUE ORDERS']} but {len(rows)} rows are given")
    if not rankings:
        raise ParseError("no voters")
    return Election(cands, tuple(rankings), k)


# JSON

def rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def certificate_to_json(election: Election, domain, cert) -> dict:
    domain = getattr(domain, "value", domain)
    ids = election.voter_ids
    if isinstance(cert, VoterOrder):
        return {"domain": domain, "kind": "voter-order", "order": [ids[i] for i in cert.voters]}
    if isinstance(cert, CandidateOrder):
        return {"domain": domain, "kind": "candidate-order", "order": list(cert.candidates)}
    if isinstance(cert, MixedOrder):
        order = [{"voter": ids[x]} if t == "v" else {"candidate": x} for t, x in cert.items]
        return {"domain": domain, "kind": "mixed-order", "order": order}
    if isinstance(cert, Embedding):
        return {"domain": domain, "kind": "embedding", "coords": {
            "voters": {ids[i]: rational(x) for i, x in enumerate(cert.voter_pos)},
            "candidates": {c: rational(cert.candidate_pos[c]) for c in election.candidates}}}
    raise ElectionError(f"cannot serialize certificate {cert!r}")


def certificate_from_json(election: Election, doc: dict):
    kind = doc.get("kind")
    try:
        if kind == "voter-order":
            return VoterOrder(tuple(election.voter_index(str(v)) for v in doc["order"]))
        if kind == "candidate-order":
            return CandidateOrder(tuple(doc["order"]))
        if kind == "mixed-order":
            items = []
            for item in doc["order"]:
                if "voter" in item:
                    items.append(("v", election.voter_index(str(item["voter"]))))
                else:
                    items.append(("c", item["candidate"]))
            return MixedOrder(tuple(items))
        if kind == "embedding":
            coords = doc["coords"]
            return Embedding(tuple(Fraction(coords["voters"][v]) for v in election.voter_ids),
                             {c: Fraction(coords["candidates"][c]) for c in election.candidates})
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ElectionError(f"malformed certificate: {e}") from None
    raise ElectionError(f"unknown certificate kind {kind!r}")


def jsonable(value):
    """Convert results to JSON-ready values; rationals become "p/q" strings."""
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def result_document(command: str, input_text: str | None, outcome: dict, witnesses=None,
                    certificates=None, trace=None, timings=None) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "input-digest": digest(input_text) if input_text is not None else None,
        "outcome": jsonable(outcome),
        "witnesses": jsonable(witnesses or []),
        "certificates": jsonable(certificates or []),
        "trace": jsonable(trace or []),
        "timings": jsonable(timings or {}),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False)
