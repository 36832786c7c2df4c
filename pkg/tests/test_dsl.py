"""Parser and serializer: diagnostics, order independence, round-trip
fixpoint, and totality under fuzz."""

import random
from decimal import Decimal

import pytest
from hypothesis import given, settings, strategies as st

import goalgraph as gg
from goalgraph import dsl
from goalgraph.engine import OrPolicy
from goalgraph.model import Direction, RequirementKind, ScaleKind, validate

from oracles import random_model

TABLE_1_BLOCK = """
objective lead_time {
  activity: Reduced
  object: "GT-BU FS"
  focus: "Average Manufacturing Lead Time"
  unit: months
  target: 3
  threshold: 2
  as_is: 6
  scale: "Average time in months required to have FS parts manufactured"
  timeframe: "1 year after system deployment"
  scope: "Gas Turbine Components X, Y & Z"
  author: "John Smith (Component Engineer, GT-BU)"
}
"""


class TestParse:
    def test_objective_block_fields(self):
        result = dsl.parse(TABLE_1_BLOCK)
        assert result.ok
        obj = result.model.objectives["lead_time"]
        assert obj.magnitude.target == Decimal(3)
        assert obj.magnitude.threshold == Decimal(2)
        assert obj.magnitude.as_is == Decimal(6)
        assert obj.magnitude.direction is Direction.REDUCTION  # implied by Reduced
        assert obj.scale.unit == "months"
        assert obj.scale.kind is ScaleKind.CONTINUOUS

    def test_empty_input(self):
        result = dsl.parse("")
        assert result.ok
        assert result.model == gg.GoalModel()
        assert result.scenarios == {}

    def test_missing_required_field(self):
        result = dsl.parse("""
objective broken {
  activity: Reduced
  object: "X"
  focus: "Y"
  unit: months
  threshold: 2
}
""")
        assert not result.ok
        assert [e.code for e in result.errors] == ["PARSE_MISSING_FIELD"]
        assert result.errors[0].span.line == 2
        assert "target" in result.errors[0].message

    def test_recovery_reports_multiple_errors(self):
        text = """
objective one { activity: Reduced object: "a" focus: "b" unit: u threshold: 1 }
objective two { activity: Reduced object: "a" focus: "b" unit: u threshold: 1 }
"""
        result = dsl.parse(text)
        missing = [e for e in result.errors if e.code == "PARSE_MISSING_FIELD"]
        assert len(missing) == 2

    def test_block_order_irrelevant(self, alignment):
        text = gg.fixture_path("alignment.goal").read_text(encoding="utf-8")
        # reverse the block order by splitting on blank lines between blocks
        blocks = [b for b in text.split("\n\n") if b.strip()]
        reversed_text = "\n\n".join(reversed(blocks))
        forward = dsl.parse(text)
        backward = dsl.parse(reversed_text)
        assert forward.ok and backward.ok
        assert forward.model == backward.model

    def test_duplicate_block_id(self):
        result = dsl.parse("""
softgoal s { statement: "a" }
softgoal s { statement: "b" }
""")
        assert any(e.code == "PARSE_DUPLICATE_ID" for e in result.errors)

    def test_unknown_field(self):
        result = dsl.parse('softgoal s { statement: "a"  sparkle: yes }')
        assert any(e.code == "PARSE_UNKNOWN_FIELD" for e in result.errors)

    def test_unknown_function_reference(self):
        result = dsl.parse("""
requirement r { kind: functional headline: "h" fit_criterion: "f" }
objective o { activity: Reduced object: "a" focus: "b" unit: u target: 2 threshold: 1 }
link l { from: r  to: o  effect: reduction  unit: u  function: ghost  confidence: 1 }
""")
        assert any(e.code == "PARSE_UNKNOWN_FUNCTION" for e in result.errors)

    def test_error_spans_inside_input(self):
        bad = "objective x {\n  target nonsense\n}"
        result = dsl.parse(bad)
        assert result.errors
        lines = bad.split("\n")
        for e in result.errors:
            assert 1 <= e.span.line <= len(lines) + 1
            assert e.span.column >= 1

    def test_scenario_block(self):
        result = dsl.parse("""
scenario what_if {
  level r1: 0.5
  select g2: linkB
  confidence F: 1.0
  confidence_adjust: off
  or_policy: best
}
""")
        assert result.ok
        scn = result.scenarios["what_if"]
        assert scn.requirement_levels == {"r1": 0.5}
        assert scn.or_selections == {"g2": "linkB"}
        assert scn.confidence_override == {"F": Decimal("1.0")}
        assert scn.options.confidence_adjust is False
        assert scn.options.or_policy is OrPolicy.BEST

    def test_separators_interchangeable(self):
        a = dsl.parse('softgoal s { statement: "x" }')
        b = dsl.parse('softgoal s { statement = "x" }')
        assert a.ok and b.ok and a.model == b.model

    def test_comments_ignored(self):
        result = dsl.parse('# leading\nsoftgoal s { statement: "x" # tail\n}\n')
        assert result.ok


class TestSerialize:
    def test_fixpoint_on_own_output(self, alignment):
        model, _ = alignment
        once = dsl.serialize(model)
        twice = dsl.serialize(dsl.parse(once).model)
        assert once == twice

    def test_parse_serialize_semantic_identity(self, alignment):
        model, _ = alignment
        assert dsl.parse(dsl.serialize(model)).model == model

    def test_empty_model(self):
        assert dsl.serialize(gg.GoalModel()) == ""

    def test_golden_canonical_form(self, alignment):
        from pathlib import Path

        model, _ = alignment
        golden = Path(__file__).parent / "golden" / "alignment_canonical.goal"
        assert dsl.serialize(model) == golden.read_text(encoding="utf-8")

    def test_interval_estimate_round_trip(self, alignment_interval):
        model, _ = alignment_interval
        again = dsl.parse(dsl.serialize(model)).model
        assert again == model
        h = again.contributions["H"]
        assert h.quantification.halfwidth == Decimal(1)

    def test_exotic_strings_survive(self):
        model = gg.GoalModel(softgoals={"s": gg.SoftGoal(
            "s", 'quote " backslash \\ newline \n tab\tend')})
        assert dsl.parse(dsl.serialize(model)).model == model

    def test_decimal_exactness_no_float_drift(self):
        text = 'softgoal s { statement: "x" }\nweights { }\n'
        result = dsl.parse("""
objective o { activity: Reduced object: "a" focus: "b" unit: u
  target: 0.30000000000000004 threshold: 0.1 }
""")
        assert result.ok
        assert result.model.objectives["o"].magnitude.target == \
            Decimal("0.30000000000000004")
        again = dsl.parse(dsl.serialize(result.model)).model
        assert again.objectives["o"].magnitude.target == \
            Decimal("0.30000000000000004")


class TestRoundTripProperty:
    def test_random_models(self):
        rng = random.Random(101)
        for case in range(200):
            model, _ = random_model(rng)
            text = dsl.serialize(model)
            parsed = dsl.parse(text)
            assert parsed.ok, (case, parsed.errors, text)
            assert parsed.model == model, (case, text)
            assert dsl.serialize(parsed.model) == text


class TestTotality:
    @settings(max_examples=300, deadline=None)
    @given(st.binary(max_size=400))
    def test_parse_bytes_never_raises(self, data):
        result = dsl.parse_bytes(data)
        assert isinstance(result.errors, list)
        if result.errors:
            assert result.model is None

    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=400))
    def test_parse_text_never_raises(self, text):
        result = dsl.parse(text)
        for e in result.errors:
            assert e.span.line >= 1 and e.span.column >= 1

    @settings(max_examples=150, deadline=None)
    @given(st.text(alphabet="objective requirement link {}()[]=:,\"0123456789.x\n",
                   max_size=300))
    def test_parse_grammar_shaped_noise(self, text):
        dsl.parse(text)


def test_parse_bytes_bad_utf8():
    result = dsl.parse_bytes(b"objective \xff\xfe {}")
    assert result.errors[0].code == "PARSE_ENCODING"


def test_sibling_scenario_file(tmp_path):
    model_path = tmp_path / "proj.goal"
    model_path.write_text(
        gg.fixture_path("alignment.goal").read_text(encoding="utf-8"))
    sibling = tmp_path / "proj.scenarios.goal"
    sibling.write_text("""
scenario extra {
  level req1: 1
  confidence_adjust: off
}

scenario base {
  level req1: 1
}
""")
    result = dsl.parse_path(model_path)
    assert result.ok
    assert "extra" in result.scenarios
    assert result.scenarios["extra"].options.confidence_adjust is False
    # sibling overrides the inline block of the same name
    assert result.scenarios["base"].requirement_levels == {"req1": 1.0}

    sibling.write_text("scenario broken {")
    assert not dsl.parse_path(model_path).ok
