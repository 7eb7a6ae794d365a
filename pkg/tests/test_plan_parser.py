import math
import re
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wignerfriend.frontend.plan import (
    ExperimentPlan,
    Measure,
    PlanError,
    Undo,
    load_plan,
    parse_angle,
    parse_plan,
    parse_setting,
    serialize_plan,
)
from wignerfriend.frontend.runner import run_plan

ROOT = Path(__file__).resolve().parents[1]
MALFORMED = sorted((ROOT / "tests" / "data" / "malformed").glob("*.plan"))


def _expected_code(path: Path) -> str:
    first = path.read_text().splitlines()[0]
    assert first.startswith("# expect: ")
    return first.removeprefix("# expect: ").strip()


def test_pm_reference_plan_folds_to_two_particles():
    plan = load_plan(ROOT / "plans" / "pm.plan")
    assert plan.state == "singlet" and plan.engine == "pilotwave"
    assert len(plan.events) == 6
    assert plan.parties == ("a", "b")
    assert [m.tag for m in plan.measurements("a")] == ["A1", "A2"]
    assert [m.tag for m in plan.measurements("b")] == ["B1", "B2"]
    assert [type(e).__name__ for e in plan.events] == ["Measure", "Measure", "Undo", "Undo", "Measure", "Measure"]


def test_fr_reference_plan():
    plan = load_plan(ROOT / "plans" / "fr.plan")
    assert plan.state == "hardy"
    assert [m.setting.basis for m in plan.measurements("coin")] == ["z-basis", "x-basis"]


@pytest.mark.parametrize("path", MALFORMED, ids=lambda p: p.stem)
def test_malformed_corpus_yields_documented_code(path):
    text = path.read_text()
    with pytest.raises(PlanError) as err:
        run_plan(parse_plan(text))
    codes = {d.code for d in err.value.diagnostics}
    assert codes == {_expected_code(path)}
    n_lines = max(1, len(text.splitlines()))
    for d in err.value.diagnostics:
        assert 1 <= d.line <= n_lines and d.column >= 1


def test_corpus_covers_every_diagnostic_the_frontend_can_emit():
    emitted = set()
    for f in (ROOT / "src" / "wignerfriend" / "frontend").glob("*.py"):
        emitted |= set(re.findall(r'(?:err|Diagnostic)\("([A-Z_]+)"', f.read_text()))
    assert emitted == {_expected_code(p) for p in MALFORMED}


def test_undo_of_missing_tag():
    with pytest.raises(PlanError) as err:
        parse_plan("state singlet\nengine pilotwave\nparty a\nparty b\nundo a m9\n")
    (d,) = err.value.diagnostics
    assert d.code == "UNDO_UNKNOWN_TAG" and (d.line, d.column) == (5, 8)
    assert "m9" in d.format("x.plan") and d.format("x.plan").startswith("x.plan:5:8: error")


def test_empty_input():
    for text in ("", "\n\n", "   # just a comment\n"):
        with pytest.raises(PlanError) as err:
            parse_plan(text)
        assert [d.code for d in err.value.diagnostics] == ["EMPTY_PLAN"]


def test_all_problems_are_reported_together():
    with pytest.raises(PlanError) as err:
        parse_plan("state singlet\nengine warp\nparty a\nparty b\nfoo\nmeasure a 0 as T\nmeasure b 1 as T\n")
    codes = [d.code for d in err.value.diagnostics]
    assert codes == ["UNKNOWN_ENGINE", "UNKNOWN_KEYWORD", "DUPLICATE_TAG"]


def test_comments_and_blank_lines_are_ignored():
    plan = parse_plan("# hi\n\nstate singlet   # the pair\nengine quantum\nparty a\nparty b\nmeasure a pi/3 as A # tag\n")
    assert plan.events[0].setting.value == pytest.approx(math.pi / 3)


@pytest.mark.parametrize(
    "text, value",
    [
        ("0", 0.0),
        ("1.25", 1.25),
        ("pi", math.pi),
        ("-pi/2", -math.pi / 2),
        ("3pi/4", 3 * math.pi / 4),
        ("3*pi/4", 3 * math.pi / 4),
        ("+2pi", 2 * math.pi),
        ("0.5pi", math.pi / 2),
    ],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["nan", "inf", "-Infinity", "pi/0", "*pi", "deg45", "1e400", "pi/"])
def test_parse_angle_rejects(text):
    with pytest.raises(ValueError):
        parse_angle(text)


def test_basis_keywords():
    plan = parse_plan("state ghz\nengine quantum\nparty a\nparty b\nparty c\nmeasure a x as A\nmeasure b y as B\nmeasure c 0.3 as C\n")
    assert [m.setting.value for m in plan.events] == pytest.approx([0.0, math.pi / 2, 0.3])
    with pytest.raises(PlanError) as err:
        parse_plan("state hardy\nengine quantum\nparty a\nparty b\nmeasure a 0.3 as A\n")
    assert err.value.diagnostics[0].code == "BASIS_MISMATCH"


ANGLE_TEXT = st.sampled_from(["0", "pi", "-pi/2", "3pi/4", "0.125", "2*pi/3", "-1.5"])
BASIS_TEXT = {"singlet": ANGLE_TEXT, "ghz": st.one_of(ANGLE_TEXT, st.sampled_from(["x", "y"])), "hardy": st.sampled_from(["z-basis", "x-basis"])}
N_PARTIES = {"singlet": 2, "ghz": 3, "hardy": 2}


@st.composite
def valid_plans(draw):
    state = draw(st.sampled_from(sorted(N_PARTIES)))
    parties = [f"p{k}" for k in range(N_PARTIES[state])]
    open_tags = {p: [] for p in parties}
    events, counter = [], 0
    for _ in range(draw(st.integers(0, 8))):
        party = draw(st.sampled_from(parties))
        if open_tags[party] and draw(st.booleans()):
            events.append(Undo(party, open_tags[party].pop()))
        else:
            counter += 1
            tag = f"t{counter}"
            text = draw(BASIS_TEXT[state])
            events.append(Measure(party, parse_setting(text), tag))
            open_tags[party].append(tag)
    return ExperimentPlan(
        name=draw(st.from_regex(r"[a-z][a-z0-9_.\-]{0,10}", fullmatch=True)),
        state=state,
        engine=draw(st.sampled_from(["pilotwave", "collapse", "quantum"])),
        parties=tuple(parties),
        events=tuple(events),
        trials=draw(st.none() | st.integers(1, 10**7)),
        seed=draw(st.none() | st.integers(0, 2**64 - 1)),
    )


@given(valid_plans())
def test_serialize_then_parse_round_trips(plan):
    text = serialize_plan(plan)
    again = parse_plan(text)
    assert again == plan
    assert serialize_plan(again) == text


@given(st.text(alphabet=st.characters(codec="ascii"), max_size=200))
def test_arbitrary_text_either_parses_or_has_located_diagnostics(text):
    try:
        parse_plan(text)
    except PlanError as err:
        assert err.diagnostics
        n_lines = max(1, len(text.splitlines()))
        for d in err.diagnostics:
            assert 1 <= d.line <= n_lines
            assert d.column >= 1
