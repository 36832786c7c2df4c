"""Textual goal-model language: parser with line/column diagnostics and a
canonical serializer.

The grammar is block-structured (`kind id { key: value ... }`) with `#`
comments, quoted strings for free text, bare tokens for units and
enumerations, and table-function points written `points = [(x1,y1), ...]`.
Either `:` or `=` separates keys from values. The full EBNF lives in
docs/dsl.md. Parsing is total: any byte sequence yields a (possibly empty)
error list, never an exception, and the parser resynchronizes at block
boundaries so several errors surface in one pass. Numbers are held as exact
decimals, so serialize∘parse is byte-stable on canonical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal

from .engine import OrPolicy, Scenario, ScenarioOptions
from .functions import Extrapolation, Interpolation, TableFunction
from .model import (
    CONFIDENCE_PRESETS,
    INCREASE_VERBS,
    REDUCTION_VERBS,
    Belief,
    Confidence,
    ContributionLink,
    DecompositionLink,
    Direction,
    Estimate,
    FitCriterion,
    GoalModel,
    GroupMode,
    LinkGroup,
    Magnitude,
    Objective,
    Requirement,
    RequirementKind,
    Scale,
    ScaleKind,
    SoftGoal,
    SoftGoalLevel,
    TraceLink,
    format_decimal,
)

BLOCK_KINDS = ("objective", "requirement", "softgoal", "belief", "link",
               "function", "scenario", "weights", "utility")

_NUMBER_RE = re.compile(r"^[+-]?\d+(\.\d+)?$")
_WORD_SPECIALS = set('{}[](),:=#"')


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    code: str
    expected: str
    found: str
    message: str


@dataclass(frozen=True)
class BlockDecl:
    kind: str
    id: str
    span: SourceSpan


@dataclass(frozen=True)
class Document:
    blocks: tuple[BlockDecl, ...] = ()


@dataclass
class ParseResult:
    document: Document
    model: GoalModel | None
    scenarios: dict[str, Scenario]
    errors: list[ParseError]

    @property
    def ok(self) -> bool:
        return not self.errors


# ---------------------------------------------------------------------------
# lexer

@dataclass(frozen=True)
class _Token:
    kind: str  # WORD STRING PUNCT EOF
    text: str
    line: int
    column: int

    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.column, max(len(self.text), 1))


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "{}[](),:=":
            tokens.append(_Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf = []
            closed = False
            while i < n:
                c = text[i]
                if c == "\\" and i + 1 < n:
                    esc = text[i + 1]
                    buf.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc, esc))
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    closed = True
                    break
                if c == "\n":
                    break  # unterminated on this line
                buf.append(c)
                i += 1
                col += 1
            kind = "STRING" if closed else "BADSTRING"
            tokens.append(_Token(kind, "".join(buf), start_line, start_col))
            continue
        # bare word: everything up to whitespace or a special character
        start_col = col
        buf = []
        while i < n and text[i] not in " \t\r\n" and text[i] not in _WORD_SPECIALS:
            buf.append(text[i])
            i += 1
            col += 1
        tokens.append(_Token("WORD", "".join(buf), line, start_col))
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# raw block parsing

@dataclass
class _Entry:
    key: str
    arg: str | None
    value: object  # str (word), ("string", str), Decimal, or list[(Decimal, Decimal)]
    value_is_string: bool
    span: SourceSpan


@dataclass
class _RawBlock:
    kind: str
    id: str
    span: SourceSpan
    entries: list[_Entry]

    def get(self, key: str) -> _Entry | None:
        for e in self.entries:
            if e.key == key:
                return e
        return None


class _Parser:
    # scenario keys taking an id argument before the separator
    ARG_KEYS = {"level", "select", "confidence"}

    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0
        self.errors: list[ParseError] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, code: str, expected: str, tok: _Token, message: str) -> None:
        found = tok.text if tok.kind != "EOF" else "end of input"
        self.errors.append(ParseError(tok.span(), code, expected, found, message))

    def parse_blocks(self) -> list[_RawBlock]:
        blocks: list[_RawBlock] = []
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                break
            if tok.kind == "WORD" and tok.text in BLOCK_KINDS:
                block = self.parse_block()
                if block is not None:
                    blocks.append(block)
                continue
            self.error("PARSE_EXPECTED_BLOCK", "block kind "
                       f"({', '.join(BLOCK_KINDS)})", tok,
                       f"expected a block declaration, found {tok.text!r}")
            self.advance()
            self.skip_to_block()
        return blocks

    def skip_to_block(self) -> None:
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return
            if depth == 0 and tok.kind == "WORD" and tok.text in BLOCK_KINDS:
                return
            if tok.kind == "PUNCT" and tok.text == "{":
                depth += 1
            elif tok.kind == "PUNCT" and tok.text == "}":
                if depth <= 1:
                    self.advance()
                    return
                depth -= 1
            self.advance()

    def parse_block(self) -> _RawBlock | None:
        kind_tok = self.advance()
        kind = kind_tok.text
        block_id = ""
        if kind != "weights":
            tok = self.peek()
            if tok.kind == "WORD":
                block_id = self.advance().text
            else:
                self.error("PARSE_MISSING_ID", f"{kind} id", tok,
                           f"{kind} block needs an id")
                self.skip_to_block()
                return None
        tok = self.peek()
        if not (tok.kind == "PUNCT" and tok.text == "{"):
            self.error("PARSE_EXPECTED", "'{'", tok,
                       f"expected '{{' to open {kind} {block_id or ''}".rstrip())
            self.skip_to_block()
            return None
        self.advance()
        entries: list[_Entry] = []
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                self.error("PARSE_EXPECTED", "'}'", tok,
                           f"unterminated {kind} block")
                break
            if tok.kind == "PUNCT" and tok.text == "}":
                self.advance()
                break
            entry = self.parse_entry(kind)
            if entry is not None:
                entries.append(entry)
        return _RawBlock(kind, block_id, kind_tok.span(), entries)

    def parse_entry(self, block_kind: str) -> _Entry | None:
        key_tok = self.peek()
        if key_tok.kind != "WORD":
            self.error("PARSE_EXPECTED", "field name", key_tok,
                       f"expected a field name, found {key_tok.text!r}")
            self.advance()
            return None
        self.advance()
        arg = None
        if block_kind == "scenario" and key_tok.text in self.ARG_KEYS:
            arg_tok = self.peek()
            if arg_tok.kind == "WORD":
                arg = self.advance().text
            else:
                self.error("PARSE_EXPECTED", "id after "
                           f"{key_tok.text!r}", arg_tok,
                           f"{key_tok.text} takes an id before the separator")
                return None
        sep = self.peek()
        if not (sep.kind == "PUNCT" and sep.text in (":", "=")):
            self.error("PARSE_EXPECTED", "':' or '='", sep,
                       f"expected ':' or '=' after {key_tok.text!r}")
            return None
        self.advance()
        value, is_string = self.parse_value()
        if value is None and not is_string:
            return None
        return _Entry(key_tok.text, arg, value, is_string, key_tok.span())

    def parse_value(self):
        tok = self.peek()
        if tok.kind == "STRING":
            self.advance()
            return tok.text, True
        if tok.kind == "BADSTRING":
            self.advance()
            self.error("PARSE_UNTERMINATED_STRING", "closing '\"'", tok,
                       "string literal is missing its closing quote")
            return tok.text, True
        if tok.kind == "WORD":
            self.advance()
            return tok.text, False
        if tok.kind == "PUNCT" and tok.text == "[":
            return self.parse_points(), False
        self.error("PARSE_EXPECTED", "value", tok,
                   f"expected a value, found {tok.text!r}")
        self.advance()
        return None, False

    def parse_points(self):
        self.advance()  # [
        points: list[tuple[Decimal, Decimal]] = []
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                self.error("PARSE_EXPECTED", "']'", tok, "unterminated point list")
                return points
            if tok.kind == "PUNCT" and tok.text == "]":
                self.advance()
                return points
            if tok.kind == "PUNCT" and tok.text == ",":
                self.advance()
                continue
            if tok.kind == "PUNCT" and tok.text == "(":
                self.advance()
                x = self.parse_number()
                comma = self.peek()
                if comma.kind == "PUNCT" and comma.text == ",":
                    self.advance()
                y = self.parse_number()
                close = self.peek()
                if close.kind == "PUNCT" and close.text == ")":
                    self.advance()
                else:
                    self.error("PARSE_EXPECTED", "')'", close,
                               "expected ')' to close a point pair")
                if x is not None and y is not None:
                    points.append((x, y))
                continue
            self.error("PARSE_EXPECTED", "'(x, y)' pair", tok,
                       f"expected a point pair, found {tok.text!r}")
            self.advance()

    def parse_number(self) -> Decimal | None:
        tok = self.peek()
        if tok.kind == "WORD" and _NUMBER_RE.match(tok.text):
            self.advance()
            return Decimal(tok.text)
        self.error("PARSE_BAD_VALUE", "number", tok,
                   f"expected a number, found {tok.text!r}")
        if tok.kind not in ("EOF",) and not (tok.kind == "PUNCT" and tok.text in ")]"):
            self.advance()
        return None


# ---------------------------------------------------------------------------
# semantic construction

class _Builder:
    def __init__(self):
        self.errors: list[ParseError] = []

    def fail(self, block: _RawBlock, code: str, message: str,
             expected: str = "") -> None:
        self.errors.append(ParseError(block.span, code, expected,
                                      f"{block.kind} {block.id}".strip(), message))

    def text(self, block: _RawBlock, key: str, default: str = "") -> str:
        entry = block.get(key)
        if entry is None:
            return default
        return str(entry.value)

    def require(self, block: _RawBlock, key: str) -> _Entry | None:
        entry = block.get(key)
        if entry is None:
            self.fail(block, "PARSE_MISSING_FIELD",
                      f"{block.kind} {block.id!r} is missing required field {key!r}",
                      expected=key)
        return entry

    def number(self, block: _RawBlock, key: str, required: bool = False) -> Decimal | None:
        entry = self.require(block, key) if required else block.get(key)
        if entry is None:
            return None
        if isinstance(entry.value, Decimal):
            return entry.value
        if isinstance(entry.value, str) and _NUMBER_RE.match(entry.value):
            return Decimal(entry.value)
        self.errors.append(ParseError(entry.span, "PARSE_BAD_VALUE", "number",
                                      str(entry.value),
                                      f"field {key!r} needs a number"))
        return None

    def choice(self, block: _RawBlock, key: str, options: dict,
               default=None, required: bool = False):
        entry = self.require(block, key) if required else block.get(key)
        if entry is None:
            return default
        token = str(entry.value)
        if token in options:
            return options[token]
        self.errors.append(ParseError(entry.span, "PARSE_BAD_VALUE",
                                      "|".join(sorted(options)), token,
                                      f"field {key!r} must be one of: "
                                      f"{', '.join(sorted(options))}"))
        return default

    def check_keys(self, block: _RawBlock, allowed: set[str]) -> None:
        seen = set()
        for entry in block.entries:
            label = entry.key if entry.arg is None else f"{entry.key} {entry.arg}"
            if label in seen:
                self.errors.append(ParseError(entry.span, "PARSE_DUPLICATE_FIELD",
                                              "unique field", label,
                                              f"field {label!r} given twice"))
            seen.add(label)
            if entry.key not in allowed:
                self.errors.append(ParseError(entry.span, "PARSE_UNKNOWN_FIELD",
                                              "|".join(sorted(allowed)), entry.key,
                                              f"{block.kind} block has no field "
                                              f"{entry.key!r}"))


def parse(text: str) -> ParseResult:
    """Parse goal-model text into a document, model, and scenarios.

    On failure every error carries a source span; block order never affects
    the resulting model.
    """
    parser = _Parser(text)
    raw_blocks = parser.parse_blocks()
    builder = _Builder()
    errors = list(parser.errors)

    decls = []
    seen_ids: set[tuple[str, str]] = set()
    for block in raw_blocks:
        decls.append(BlockDecl(block.kind, block.id, block.span))
        key = (block.kind, block.id)
        if key in seen_ids:
            builder.fail(block, "PARSE_DUPLICATE_ID",
                         f"{block.kind} id {block.id!r} declared twice")
        seen_ids.add(key)
    document = Document(tuple(decls))

    objectives: dict[str, Objective] = {}
    requirements: dict[str, Requirement] = {}
    softgoals: dict[str, SoftGoal] = {}
    beliefs: dict[str, Belief] = {}
    functions: dict[str, TableFunction] = {}
    contributions: dict[str, ContributionLink] = {}
    decompositions: dict[str, DecompositionLink] = {}
    traces: dict[str, TraceLink] = {}
    weights: dict[str, Decimal] = {}
    utilities: dict[str, TableFunction] = {}
    scenarios: dict[str, Scenario] = {}

    # functions first: links resolve references regardless of block order
    for block in raw_blocks:
        if block.kind == "function":
            fn = _build_table(builder, block)
            if fn is not None:
                functions[block.id] = fn

    for block in raw_blocks:
        if block.kind == "objective":
            obj = _build_objective(builder, block)
            if obj is not None:
                objectives[block.id] = obj
        elif block.kind == "requirement":
            req = _build_requirement(builder, block)
            if req is not None:
                requirements[block.id] = req
        elif block.kind == "softgoal":
            builder.check_keys(block, {"statement", "level"})
            statement = builder.require(block, "statement")
            level = builder.choice(block, "level",
                                   {"goal": SoftGoalLevel.GOAL, "vision": SoftGoalLevel.VISION},
                                   default=SoftGoalLevel.GOAL)
            if statement is not None:
                softgoals[block.id] = SoftGoal(block.id, str(statement.value), level)
        elif block.kind == "belief":
            builder.check_keys(block, {"statement", "attached_to"})
            statement = builder.require(block, "statement")
            attached = builder.require(block, "attached_to")
            if statement is not None and attached is not None:
                beliefs[block.id] = Belief(block.id, str(statement.value),
                                           str(attached.value))
        elif block.kind == "link":
            _build_link(builder, block, functions, contributions,
                        decompositions, traces)
        elif block.kind == "utility":
            fn = _build_table(builder, block)
            if fn is not None:
                utilities[block.id] = fn
        elif block.kind == "weights":
            for entry in block.entries:
                value = builder.number(block, entry.key)
                if value is not None:
                    weights[entry.key] = value
        elif block.kind == "scenario":
            scn = _build_scenario(builder, block)
            if scn is not None:
                scenarios[block.id] = scn

    errors.extend(builder.errors)
    model = None
    if not errors:
        model = GoalModel(objectives=objectives, requirements=requirements,
                          softgoals=softgoals, beliefs=beliefs,
                          contributions=contributions, decompositions=decompositions,
                          traces=traces, functions=functions,
                          root_weights=weights, utilities=utilities)
    return ParseResult(document, model, scenarios, errors)


def parse_bytes(data: bytes) -> ParseResult:
    """Total parse entry point for raw bytes (fuzz target)."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        err = ParseError(SourceSpan(1, 1, 1), "PARSE_ENCODING", "UTF-8 text",
                         "invalid byte", f"input is not valid UTF-8: {exc.reason}")
        return ParseResult(Document(), None, {}, [err])
    return parse(text)


def parse_path(path) -> ParseResult:
    """Parse a model file plus its scenario sibling, when one exists.

    Scenario blocks are accepted both inline and in `<stem>.scenarios.goal`
    next to the model; sibling scenarios override same-named inline ones.
    Sibling parse errors fail the whole load.
    """
    from pathlib import Path

    path = Path(path)
    result = parse_bytes(path.read_bytes())
    sibling = path.with_suffix(".scenarios.goal")
    if not sibling.exists() or sibling == path:
        return result
    extra = parse_bytes(sibling.read_bytes())
    errors = result.errors + extra.errors
    scenarios = dict(result.scenarios)
    scenarios.update(extra.scenarios)
    return ParseResult(result.document, result.model if not errors else None,
                       scenarios, errors)


_OBJECTIVE_KEYS = {"activity", "object", "focus", "unit", "target", "threshold",
                   "as_is", "direction", "scale", "scale_kind", "timeframe",
                   "scope", "author"}


def _build_objective(builder: _Builder, block: _RawBlock) -> Objective | None:
    builder.check_keys(block, _OBJECTIVE_KEYS)
    activity_e = builder.require(block, "activity")
    object_e = builder.require(block, "object")
    focus_e = builder.require(block, "focus")
    unit_e = builder.require(block, "unit")
    target = builder.number(block, "target", required=True)
    threshold = builder.number(block, "threshold", required=True)
    as_is = builder.number(block, "as_is")
    direction = builder.choice(block, "direction",
                               {"reduction": Direction.REDUCTION,
                                "increase": Direction.INCREASE})
    if direction is None and activity_e is not None:
        verb = str(activity_e.value).lower()
        if verb in REDUCTION_VERBS:
            direction = Direction.REDUCTION
        elif verb in INCREASE_VERBS:
            direction = Direction.INCREASE
        else:
            builder.fail(block, "PARSE_MISSING_FIELD",
                         f"activity {activity_e.value!r} has no implied direction; "
                         f"add 'direction: reduction|increase'", expected="direction")
    kind = builder.choice(block, "scale_kind",
                          {"continuous": ScaleKind.CONTINUOUS,
                           "discrete": ScaleKind.DISCRETE},
                          default=ScaleKind.CONTINUOUS)
    if None in (activity_e, object_e, focus_e, unit_e, target, threshold, direction):
        return None
    return Objective(
        id=block.id,
        activity=str(activity_e.value),
        object=str(object_e.value),
        focus=str(focus_e.value),
        magnitude=Magnitude(target, threshold, as_is, direction),
        scale=Scale(builder.text(block, "scale"), str(unit_e.value), kind),
        timeframe=builder.text(block, "timeframe"),
        scope=builder.text(block, "scope"),
        author=builder.text(block, "author"),
    )


_REQUIREMENT_KEYS = {"kind", "headline", "fit_criterion", "fit_metric",
                     "fit_unit", "fit_target", "description", "rationale"}


def _build_requirement(builder: _Builder, block: _RawBlock) -> Requirement | None:
    builder.check_keys(block, _REQUIREMENT_KEYS)
    kind = builder.choice(block, "kind",
                          {"functional": RequirementKind.FUNCTIONAL, "F": RequirementKind.FUNCTIONAL,
                           "non_functional": RequirementKind.NON_FUNCTIONAL,
                           "NF": RequirementKind.NON_FUNCTIONAL},
                          required=True)
    headline = builder.require(block, "headline")
    fit = builder.require(block, "fit_criterion")
    if kind is None or headline is None or fit is None:
        return None
    return Requirement(
        id=block.id, kind=kind, headline=str(headline.value),
        fit_criterion=FitCriterion(
            text=str(fit.value),
            metric=builder.text(block, "fit_metric") or None,
            unit=builder.text(block, "fit_unit") or None,
            target=builder.number(block, "fit_target"),
        ),
        description=builder.text(block, "description"),
        rationale=builder.text(block, "rationale"),
    )


_LINK_KEYS = {"type", "from", "to", "parent", "child", "effect", "unit",
              "contribution", "halfwidth", "function", "confidence",
              "and_group", "or_group"}

_FUNCTION_KEYS = {"points", "interpolation", "extrapolation", "tension"}


def _build_link(builder: _Builder, block: _RawBlock, functions, contributions,
                decompositions, traces) -> None:
    builder.check_keys(block, _LINK_KEYS)
    link_type = builder.choice(block, "type",
                               {"contribution": "contribution",
                                "decomposition": "decomposition",
                                "trace": "trace"},
                               default="contribution")
    if link_type == "decomposition":
        parent = builder.require(block, "parent")
        child = builder.require(block, "child")
        if parent is not None and child is not None:
            decompositions[block.id] = DecompositionLink(
                block.id, str(parent.value), str(child.value))
        return
    source_e = builder.require(block, "from")
    target_e = builder.require(block, "to")
    if link_type == "trace":
        if source_e is not None and target_e is not None:
            traces[block.id] = TraceLink(block.id, str(source_e.value),
                                         str(target_e.value))
        return

    effect = builder.choice(block, "effect",
                            {"reduction": Direction.REDUCTION,
                             "increase": Direction.INCREASE}, required=True)
    unit_e = builder.require(block, "unit")
    conf = _build_confidence(builder, block)
    quantification = None
    function_ref = None
    contribution = block.get("contribution")
    fn_entry = block.get("function")
    if contribution is not None and fn_entry is not None:
        builder.fail(block, "PARSE_BAD_VALUE",
                     "give either 'contribution' (single point) or 'function' "
                     "(table), not both")
    elif contribution is not None:
        point = builder.number(block, "contribution")
        halfwidth = builder.number(block, "halfwidth")
        if point is not None:
            quantification = Estimate(point, halfwidth)
    elif fn_entry is not None:
        function_ref = str(fn_entry.value)
        quantification = functions.get(function_ref)
        if quantification is None:
            builder.fail(block, "PARSE_UNKNOWN_FUNCTION",
                         f"link references undefined function {function_ref!r}")
    else:
        builder.fail(block, "PARSE_MISSING_FIELD",
                     f"link {block.id!r} needs 'contribution' or 'function'",
                     expected="contribution")

    group = None
    and_group = block.get("and_group")
    or_group = block.get("or_group")
    if and_group is not None and or_group is not None:
        builder.fail(block, "PARSE_BAD_VALUE", "a link joins one group at most")
    elif and_group is not None:
        group = LinkGroup(str(and_group.value), GroupMode.AND)
    elif or_group is not None:
        group = LinkGroup(str(or_group.value), GroupMode.OR)

    if None in (source_e, target_e, effect, unit_e, conf) or quantification is None:
        return
    contributions[block.id] = ContributionLink(
        id=block.id, source=str(source_e.value), target=str(target_e.value),
        quantification=quantification, effect=effect, unit=str(unit_e.value),
        confidence=conf, group=group, function_ref=function_ref)


def _build_confidence(builder: _Builder, block: _RawBlock) -> Confidence | None:
    entry = builder.require(block, "confidence")
    if entry is None:
        return None
    token = str(entry.value)
    if token in CONFIDENCE_PRESETS:
        return Confidence.preset(token)
    if _NUMBER_RE.match(token):
        return Confidence(Decimal(token))
    builder.errors.append(ParseError(
        entry.span, "PARSE_BAD_VALUE",
        "number in [0,1] or " + "|".join(sorted(CONFIDENCE_PRESETS)), token,
        "confidence must be a number or a preset label"))
    return None


def _build_table(builder: _Builder, block: _RawBlock) -> TableFunction | None:
    builder.check_keys(block, _FUNCTION_KEYS)
    points_e = builder.require(block, "points")
    interpolation = builder.choice(
        block, "interpolation", {i.value: i for i in Interpolation},
        default=Interpolation.LINEAR)
    extrapolation = builder.choice(
        block, "extrapolation", {e.value: e for e in Extrapolation},
        default=Extrapolation.CLAMP)
    tension = builder.number(block, "tension")
    if points_e is None:
        return None
    if not isinstance(points_e.value, list):
        builder.errors.append(ParseError(points_e.span, "PARSE_BAD_VALUE",
                                         "[(x, y), ...]", str(points_e.value),
                                         "points must be a list of pairs"))
        return None
    return TableFunction(tuple(points_e.value), interpolation, extrapolation,
                         tension if tension is not None else Decimal("0.5"))


_SCENARIO_KEYS = {"level", "select", "confidence", "confidence_adjust",
                  "single_point_proration", "or_policy"}

_BOOL_WORDS = {"on": True, "true": True, "yes": True,
               "off": False, "false": False, "no": False}


def _build_scenario(builder: _Builder, block: _RawBlock) -> Scenario | None:
    builder.check_keys(block, _SCENARIO_KEYS)
    levels: dict[str, float] = {}
    selections: dict[str, str] = {}
    overrides: dict[str, Decimal] = {}
    confidence_adjust = True
    proration = False
    or_policy = OrPolicy.STRICT
    for entry in block.entries:
        if entry.key == "level" and entry.arg:
            if isinstance(entry.value, Decimal):
                levels[entry.arg] = float(entry.value)
            elif isinstance(entry.value, str) and _NUMBER_RE.match(entry.value):
                levels[entry.arg] = float(Decimal(entry.value))
            else:
                builder.errors.append(ParseError(entry.span, "PARSE_BAD_VALUE",
                                                 "number", str(entry.value),
                                                 "satisfaction level must be a number"))
        elif entry.key == "select" and entry.arg:
            selections[entry.arg] = str(entry.value)
        elif entry.key == "confidence" and entry.arg:
            token = str(entry.value)
            if token in CONFIDENCE_PRESETS:
                overrides[entry.arg] = CONFIDENCE_PRESETS[token]
            elif _NUMBER_RE.match(token):
                overrides[entry.arg] = Decimal(token)
            else:
                builder.errors.append(ParseError(entry.span, "PARSE_BAD_VALUE",
                                                 "number or preset", token,
                                                 "confidence override must be a "
                                                 "number or preset label"))
        elif entry.key == "confidence_adjust":
            confidence_adjust = _bool_value(builder, entry, default=True)
        elif entry.key == "single_point_proration":
            proration = _bool_value(builder, entry, default=False)
        elif entry.key == "or_policy":
            token = str(entry.value)
            if token in (OrPolicy.STRICT.value, OrPolicy.BEST.value):
                or_policy = OrPolicy(token)
            else:
                builder.errors.append(ParseError(entry.span, "PARSE_BAD_VALUE",
                                                 "strict|best", token,
                                                 "or_policy must be strict or best"))
    return Scenario(id=block.id, requirement_levels=levels,
                    or_selections=selections, confidence_override=overrides,
                    options=ScenarioOptions(confidence_adjust, proration, or_policy))


def _bool_value(builder: _Builder, entry: _Entry, default: bool) -> bool:
    token = str(entry.value).lower()
    if token in _BOOL_WORDS:
        return _BOOL_WORDS[token]
    builder.errors.append(ParseError(entry.span, "PARSE_BAD_VALUE", "on|off",
                                     str(entry.value),
                                     f"{entry.key} must be on or off"))
    return default


# ---------------------------------------------------------------------------
# serialization

def serialize(model: GoalModel) -> str:
    """Canonical text: blocks sorted by kind then id, two-space indent,
    LF endings. parse(serialize(m)) is semantically equal to m, and
    serialize∘parse is byte-stable on its own output."""
    writer = _Writer()
    named_tables: dict[str, TableFunction] = dict(model.functions)
    link_refs: dict[str, str] = {}
    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        if link.is_single_point():
            continue
        ref = link.function_ref
        if ref is not None and named_tables.get(ref) == link.quantification:
            link_refs[link.id] = ref
            continue
        name = ref or f"fn_{link.id}"
        while name in named_tables and named_tables[name] != link.quantification:
            name = f"{name}_"
        named_tables[name] = link.quantification
        link_refs[link.id] = name

    for belief in sorted(model.beliefs.values(), key=lambda b: b.id):
        writer.block("belief", belief.id, [
            ("statement", writer.string(belief.statement)),
            ("attached_to", belief.attached_to),
        ])
    for name in sorted(named_tables):
        writer.table_block("function", name, named_tables[name])
    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        writer.block("link", link.id, _link_fields(writer, link, link_refs))
    for dl in sorted(model.decompositions.values(), key=lambda d: d.id):
        writer.block("link", dl.id, [
            ("type", "decomposition"), ("parent", dl.parent), ("child", dl.child)])
    for tl in sorted(model.traces.values(), key=lambda t: t.id):
        writer.block("link", tl.id, [
            ("type", "trace"), ("from", tl.source), ("to", tl.target)])
    for obj in sorted(model.objectives.values(), key=lambda o: o.id):
        fields = [
            ("activity", writer.token(obj.activity)),
            ("object", writer.string(obj.object)),
            ("focus", writer.string(obj.focus)),
            ("unit", writer.token(obj.scale.unit)),
            ("target", format_decimal(obj.magnitude.target)),
            ("threshold", format_decimal(obj.magnitude.threshold)),
        ]
        if obj.magnitude.as_is is not None:
            fields.append(("as_is", format_decimal(obj.magnitude.as_is)))
        fields.append(("direction", obj.magnitude.direction.value))
        if obj.scale.kind is not ScaleKind.CONTINUOUS:
            fields.append(("scale_kind", obj.scale.kind.value))
        for key, value in (("scale", obj.scale.description),
                           ("timeframe", obj.timeframe), ("scope", obj.scope),
                           ("author", obj.author)):
            if value:
                fields.append((key, writer.string(value)))
        writer.block("objective", obj.id, fields)
    for req in sorted(model.requirements.values(), key=lambda r: r.id):
        fields = [
            ("kind", req.kind.value),
            ("headline", writer.string(req.headline)),
            ("fit_criterion", writer.string(req.fit_criterion.text)),
        ]
        if req.fit_criterion.metric:
            fields.append(("fit_metric", writer.string(req.fit_criterion.metric)))
        if req.fit_criterion.unit:
            fields.append(("fit_unit", writer.token(req.fit_criterion.unit)))
        if req.fit_criterion.target is not None:
            fields.append(("fit_target", format_decimal(req.fit_criterion.target)))
        if req.description:
            fields.append(("description", writer.string(req.description)))
        if req.rationale:
            fields.append(("rationale", writer.string(req.rationale)))
        writer.block("requirement", req.id, fields)
    for sg in sorted(model.softgoals.values(), key=lambda s: s.id):
        writer.block("softgoal", sg.id, [
            ("statement", writer.string(sg.statement)),
            ("level", sg.level.value),
        ])
    for obj_id in sorted(model.utilities):
        writer.table_block("utility", obj_id, model.utilities[obj_id])
    if model.root_weights:
        writer.block("weights", "", [(obj_id, format_decimal(w))
                                     for obj_id, w in sorted(model.root_weights.items())])
    return writer.text()


def _link_fields(writer: "_Writer", link: ContributionLink,
                 link_refs: dict[str, str]) -> list[tuple[str, str]]:
    fields = [("from", link.source), ("to", link.target),
              ("effect", link.effect.value), ("unit", writer.token(link.unit))]
    if link.is_single_point():
        fields.append(("contribution", format_decimal(link.quantification.point)))
        if link.quantification.halfwidth is not None:
            fields.append(("halfwidth", format_decimal(link.quantification.halfwidth)))
    else:
        fields.append(("function", link_refs[link.id]))
    conf = link.confidence
    fields.append(("confidence", conf.label if conf.label else format_decimal(conf.value)))
    if link.group is not None:
        key = "and_group" if link.group.mode is GroupMode.AND else "or_group"
        fields.append((key, link.group.id))
    return fields


def serialize_function(name: str, fn: TableFunction) -> str:
    """One `function` block in canonical form (proposal-file friendly)."""
    writer = _Writer()
    writer.table_block("function", name, fn)
    return writer.text()


def serialize_scenario(scenario: Scenario) -> str:
    """Scenario as a DSL block (sidecar-file friendly)."""
    writer = _Writer()
    fields: list[tuple[str, str]] = []
    for req_id, level in sorted(scenario.requirement_levels.items()):
        fields.append((f"level {req_id}", format_decimal(Decimal(repr(level)))))
    for group_id, link_id in sorted(scenario.or_selections.items()):
        fields.append((f"select {group_id}", link_id))
    for link_id, value in sorted(scenario.confidence_override.items()):
        fields.append((f"confidence {link_id}", format_decimal(value)))
    opts = scenario.options
    if not opts.confidence_adjust:
        fields.append(("confidence_adjust", "off"))
    if opts.single_point_proration:
        fields.append(("single_point_proration", "on"))
    if opts.or_policy is not OrPolicy.STRICT:
        fields.append(("or_policy", opts.or_policy.value))
    writer.block("scenario", scenario.id, fields)
    return writer.text()


class _Writer:
    def __init__(self):
        self.chunks: list[str] = []

    def block(self, kind: str, block_id: str, fields) -> None:
        head = f"{kind} {block_id}".rstrip()
        lines = [f"{head} {{"]
        for key, value in fields:
            lines.append(f"  {key}: {value}")
        lines.append("}")
        self.chunks.append("\n".join(lines))

    def table_block(self, kind: str, name: str, fn: TableFunction) -> None:
        points = ", ".join(f"({format_decimal(x)}, {format_decimal(y)})"
                           for x, y in fn.points)
        fields = [("points", f"[{points}]")]
        if fn.interpolation is not Interpolation.LINEAR:
            fields.append(("interpolation", fn.interpolation.value))
        if fn.extrapolation is not Extrapolation.CLAMP:
            fields.append(("extrapolation", fn.extrapolation.value))
        if fn.interpolation is Interpolation.CARDINAL and fn.tension != Decimal("0.5"):
            fields.append(("tension", format_decimal(fn.tension)))
        head = f"{kind} {name}".rstrip()
        lines = [f"{head} {{"]
        for key, value in fields:
            sep = " =" if key == "points" else ":"
            lines.append(f"  {key}{sep} {value}")
        lines.append("}")
        self.chunks.append("\n".join(lines))

    def string(self, value: str) -> str:
        escaped = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'

    def token(self, value: str) -> str:
        if value and not any(c in _WORD_SPECIALS or c.isspace() for c in value) \
                and value not in BLOCK_KINDS:
            return value
        return self.string(value)

    def text(self) -> str:
        return "\n\n".join(self.chunks) + ("\n" if self.chunks else "")
