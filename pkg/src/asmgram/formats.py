"""Serialization: plan/grammar text formats, JSON objects, and the compact
binary witness encoding.

Text formats (UTF-8, '#' starts a comment, blank lines ignored):

    alphabet: 0 1            |    alphabet: 0 1
    target: 01010            |    start: R3
    s1 = '0' + '1'           |    R1 -> '0' '1'
    s2 = s1 + '0'            |    R2 -> R1 '0'
    s3 = s2 + s1             |    R3 -> R2 R1

Plan step names must be s1..st in order and may only reference earlier
steps; the final step is the product.  Grammar rules may appear in any
order.  Terminals are single-quoted; symbols used in text formats must not
contain whitespace or quotes.

Binary witness encoding: header = varint t, varint alphabet size; body =
per step two operand codes, each a 1-bit tag (0 terminal / 1 prior) plus a
fixed-width index of width ceil(log2(max(sigma, t, 2))) bits.  Terminal
indices are 0-based alphabet positions; prior indices are the 1-based step
numbers used everywhere else.  Bits are big-endian within bytes and the
body is zero-padded to a byte boundary.
"""

from __future__ import annotations

import re

from .model import (
    Alphabet,
    AssemblyPlan,
    AssemblyStep,
    FormatError,
    Nonterminal,
    Prior,
    Slp,
    SlpRule,
    Terminal,
    Word,
)

_STEP_NAME_RE = re.compile(r"^s[1-9][0-9]*$")
_STEP_LINE_RE = re.compile(r"^(\S+)\s*=\s*(\S+)\s*\+\s*(\S+)$")
_RULE_LINE_RE = re.compile(r"^(\S+)\s*->\s*(\S+)(?:\s+(\S+))?$")


def _check_text_symbol(symbol: str) -> str:
    if not symbol or "'" in symbol or any(c.isspace() for c in symbol):
        raise FormatError(f"symbol {symbol!r} cannot be written in the text format")
    return symbol


def _strip(raw: str) -> str:
    return raw.split("#", 1)[0].strip()


def _parse_alphabet_line(rest: str, lineno: int) -> Alphabet:
    tokens = rest.split()
    if not tokens:
        raise FormatError("empty alphabet", lineno)
    try:
        return Alphabet(tuple(tokens))
    except ValueError as exc:
        raise FormatError(str(exc), lineno) from exc


def _parse_target(rest: str, alphabet: Alphabet, lineno: int) -> Word:
    tokens = rest.split()
    if not tokens:
        raise FormatError("empty target", lineno)
    if len(tokens) == 1 and all(len(s) == 1 for s in alphabet):
        symbols = tuple(tokens[0])
    else:
        symbols = tuple(tokens)
    for sym in symbols:
        if sym not in alphabet:
            raise FormatError(f"target symbol {sym!r} is not in the alphabet", lineno)
    return Word(symbols)


def parse_plan(text: str) -> AssemblyPlan:
    """Parse the plan text format; errors carry the offending line number."""
    alphabet: Alphabet | None = None
    target: Word | None = None
    steps: list[AssemblyStep] = []

    def operand(token: str, lineno: int) -> Terminal | Prior:
        if token.startswith("'"):
            if len(token) < 3 or not token.endswith("'"):
                raise FormatError(f"malformed terminal {token}", lineno)
            symbol = token[1:-1]
            if symbol not in alphabet:
                raise FormatError(f"symbol {symbol!r} is not in the alphabet", lineno)
            return Terminal(symbol)
        if not _STEP_NAME_RE.match(token):
            raise FormatError(f"bad operand {token!r}", lineno)
        index = int(token[1:])
        if index > len(steps):
            raise FormatError(f"operand {token} references a later or undefined step", lineno)
        return Prior(index)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("alphabet:"):
            if alphabet is not None:
                raise FormatError("duplicate alphabet line", lineno)
            alphabet = _parse_alphabet_line(line[len("alphabet:"):], lineno)
            continue
        if alphabet is None:
            raise FormatError("alphabet must be declared first", lineno)
        if line.startswith("target:"):
            if target is not None:
                raise FormatError("duplicate target line", lineno)
            target = _parse_target(line[len("target:"):], alphabet, lineno)
            continue
        match = _STEP_LINE_RE.match(line)
        if not match:
            raise FormatError(f"unrecognized line: {line!r}", lineno)
        name, left, right = match.groups()
        expected = f"s{len(steps) + 1}"
        if name != expected:
            raise FormatError(f"expected step name {expected}, found {name}", lineno)
        steps.append(AssemblyStep(operand(left, lineno), operand(right, lineno)))

    if alphabet is None:
        raise FormatError("missing alphabet line")
    return AssemblyPlan(alphabet, tuple(steps), declared_target=target)


def serialize_plan(plan: AssemblyPlan) -> str:
    """Inverse of :func:`parse_plan`; output reparses to an equal plan."""
    plan.validate()
    lines = ["alphabet: " + " ".join(_check_text_symbol(s) for s in plan.alphabet)]
    if plan.declared_target is not None:
        symbols = plan.declared_target.symbols
        if all(len(s) == 1 for s in plan.alphabet):
            lines.append("target: " + "".join(symbols))
        else:
            lines.append("target: " + " ".join(symbols))

    def token(operand) -> str:
        if isinstance(operand, Terminal):
            return f"'{_check_text_symbol(operand.symbol)}'"
        return f"s{operand.step}"

    for i, step in enumerate(plan.steps, 1):
        lines.append(f"s{i} = {token(step.left)} + {token(step.right)}")
    return "\n".join(lines) + "\n"


def parse_slp(text: str) -> Slp:
    """Parse the grammar text format; rules may be in any order."""
    alphabet: Alphabet | None = None
    start: str | None = None
    rules: list[SlpRule] = []
    seen: set[str] = set()

    def ref(token: str, lineno: int) -> Terminal | Nonterminal:
        if token.startswith("'"):
            if len(token) < 3 or not token.endswith("'"):
                raise FormatError(f"malformed terminal {token}", lineno)
            symbol = token[1:-1]
            if symbol not in alphabet:
                raise FormatError(f"symbol {symbol!r} is not in the alphabet", lineno)
            return Terminal(symbol)
        return Nonterminal(token)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("alphabet:"):
            if alphabet is not None:
                raise FormatError("duplicate alphabet line", lineno)
            alphabet = _parse_alphabet_line(line[len("alphabet:"):], lineno)
            continue
        if alphabet is None:
            raise FormatError("alphabet must be declared first", lineno)
        if line.startswith("start:"):
            if start is not None:
                raise FormatError("duplicate start line", lineno)
            start = line[len("start:"):].strip()
            if not start:
                raise FormatError("empty start symbol", lineno)
            continue
        match = _RULE_LINE_RE.match(line)
        if not match:
            raise FormatError(f"unrecognized line: {line!r}", lineno)
        lhs, first, second = match.groups()
        if lhs.startswith("'"):
            raise FormatError(f"rule name {lhs!r} cannot be a terminal", lineno)
        if lhs in seen:
            raise FormatError(f"duplicate rule for {lhs}", lineno)
        seen.add(lhs)
        rhs = (ref(first, lineno),) if second is None else (ref(first, lineno), ref(second, lineno))
        try:
            rules.append(SlpRule(lhs, rhs))
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from exc

    if alphabet is None:
        raise FormatError("missing alphabet line")
    if start is None:
        raise FormatError("missing start line")
    if start not in seen:
        raise FormatError(f"start rule {start} is not defined")
    for rule in rules:
        for r in rule.rhs:
            if isinstance(r, Nonterminal) and r.name not in seen:
                raise FormatError(f"rule {rule.lhs} references undefined nonterminal {r.name}")
    return Slp(alphabet, tuple(rules), start)


def serialize_slp(slp: Slp) -> str:
    """Inverse of :func:`parse_slp`."""
    lines = ["alphabet: " + " ".join(_check_text_symbol(s) for s in slp.alphabet)]
    lines.append(f"start: {slp.start}")

    def token(ref) -> str:
        if isinstance(ref, Terminal):
            return f"'{_check_text_symbol(ref.symbol)}'"
        return ref.name

    for rule in slp.rules:
        lines.append(f"{rule.lhs} -> " + " ".join(token(r) for r in rule.rhs))
    return "\n".join(lines) + "\n"


# -- JSON object forms (stable field names) ---------------------------------

def _operand_to_obj(operand) -> dict:
    if isinstance(operand, Terminal):
        return {"terminal": operand.symbol}
    return {"prior": operand.step}


def _operand_from_obj(obj: dict) -> Terminal | Prior:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise FormatError(f"malformed operand object: {obj!r}")
    if "terminal" in obj:
        return Terminal(obj["terminal"])
    if "prior" in obj:
        return Prior(int(obj["prior"]))
    raise FormatError(f"malformed operand object: {obj!r}")


def plan_to_obj(plan: AssemblyPlan) -> dict:
    return {
        "alphabet": list(plan.alphabet),
        "target": list(plan.declared_target.symbols) if plan.declared_target else None,
        "cost": plan.cost,
        "steps": [
            {"left": _operand_to_obj(s.left), "right": _operand_to_obj(s.right)}
            for s in plan.steps
        ],
    }


def plan_from_obj(obj: dict) -> AssemblyPlan:
    try:
        alphabet = Alphabet(tuple(obj["alphabet"]))
        target = Word(tuple(obj["target"])) if obj.get("target") else None
        steps = tuple(
            AssemblyStep(_operand_from_obj(s["left"]), _operand_from_obj(s["right"]))
            for s in obj["steps"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed plan object: {exc}") from exc
    plan = AssemblyPlan(alphabet, steps, declared_target=target)
    if "cost" in obj and obj["cost"] != plan.cost:
        raise FormatError(f"cost field {obj['cost']} does not match {plan.cost} steps")
    return plan


def _ref_to_obj(ref) -> dict:
    if isinstance(ref, Terminal):
        return {"terminal": ref.symbol}
    return {"nonterminal": ref.name}


def _ref_from_obj(obj: dict) -> Terminal | Nonterminal:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise FormatError(f"malformed reference object: {obj!r}")
    if "terminal" in obj:
        return Terminal(obj["terminal"])
    if "nonterminal" in obj:
        return Nonterminal(obj["nonterminal"])
    raise FormatError(f"malformed reference object: {obj!r}")


def slp_to_obj(slp: Slp) -> dict:
    return {
        "alphabet": list(slp.alphabet),
        "start": slp.start,
        "size": slp.size,
        "rules": [
            {"lhs": r.lhs, "rhs": [_ref_to_obj(ref) for ref in r.rhs]} for r in slp.rules
        ],
    }


def slp_from_obj(obj: dict) -> Slp:
    try:
        alphabet = Alphabet(tuple(obj["alphabet"]))
        rules = tuple(
            SlpRule(r["lhs"], tuple(_ref_from_obj(ref) for ref in r["rhs"]))
            for r in obj["rules"]
        )
        slp = Slp(alphabet, rules, obj["start"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed grammar object: {exc}") from exc
    if "size" in obj and obj["size"] != slp.size:
        raise FormatError(f"size field {obj['size']} does not match {slp.size} binary rules")
    return slp


# -- Binary witness encoding -------------------------------------------------

class _BitWriter:
    def __init__(self):
        self._chunks = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, width: int) -> None:
        self._acc = (self._acc << width) | (value & ((1 << width) - 1))
        self._nbits += width
        while self._nbits >= 8:
            self._nbits -= 8
            self._chunks.append((self._acc >> self._nbits) & 0xFF)

    def getvalue(self) -> bytes:
        if self._nbits:
            return bytes(self._chunks) + bytes([(self._acc << (8 - self._nbits)) & 0xFF])
        return bytes(self._chunks)


class _BitReader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def read(self, width: int) -> int:
        out = 0
        for _ in range(width):
            byte = self._pos // 8
            if byte >= len(self._data):
                raise FormatError("witness data truncated")
            bit = (self._data[byte] >> (7 - self._pos % 8)) & 1
            out = (out << 1) | bit
            self._pos += 1
        return out


def _varint(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _read_varint(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise FormatError("witness header truncated")
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7


def _index_width(t: int, sigma: int) -> int:
    return (max(sigma, t, 2) - 1).bit_length()


def encode_witness(plan: AssemblyPlan) -> bytes:
    plan.validate()
    t = plan.cost
    sigma = len(plan.alphabet)
    header = _varint(t) + _varint(sigma)
    width = _index_width(t, sigma)
    bits = _BitWriter()
    for step in plan.steps:
        for operand in (step.left, step.right):
            if isinstance(operand, Terminal):
                bits.write(0, 1)
                bits.write(plan.alphabet.index(operand.symbol), width)
            else:
                bits.write(1, 1)
                bits.write(operand.step, width)
    return header + bits.getvalue()


def decode_witness(data: bytes, alphabet: Alphabet) -> AssemblyPlan:
    """Decode a witness produced by :func:`encode_witness` with the same
    alphabet (the encoding stores only the alphabet size)."""
    t, pos = _read_varint(data, 0)
    sigma, pos = _read_varint(data, pos)
    if sigma != len(alphabet):
        raise FormatError(
            f"witness was encoded over {sigma} symbols, alphabet has {len(alphabet)}"
        )
    width = _index_width(t, sigma)
    reader = _BitReader(data[pos:])
    steps = []
    for i in range(1, t + 1):
        operands = []
        for _ in range(2):
            tag = reader.read(1)
            index = reader.read(width)
            if tag == 0:
                if index >= sigma:
                    raise FormatError(f"step s{i}: terminal index {index} out of range")
                operands.append(Terminal(alphabet.symbols[index]))
            else:
                if not 1 <= index < i:
                    raise FormatError(f"step s{i}: prior index {index} out of range")
                operands.append(Prior(index))
        steps.append(AssemblyStep(operands[0], operands[1]))
    return AssemblyPlan(alphabet, tuple(steps))


def witness_size_bits(t: int, alphabet_size: int) -> int:
    """Exact bit count of the encoding for any t-step plan over an alphabet
    of the given size (header + padded body)."""
    header = 8 * (len(_varint(t)) + len(_varint(alphabet_size)))
    body = 2 * t * (1 + _index_width(t, alphabet_size))
    return header + 8 * ((body + 7) // 8)


def witness_encoding_size(plan: AssemblyPlan) -> int:
    """Bit size of the canonical witness encoding of ``plan``.

    Satisfies size <= 2*t*(log2(t + sigma) + 2) + header_bits + 7, the
    t*log(t) witness bound with constant 2.
    """
    return witness_size_bits(plan.cost, len(plan.alphabet))
