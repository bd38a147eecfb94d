import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rpsm.analytic import INFINITE, Scheme
from rpsm.config import Axis, SweepSpec, parse_config, render, validate
from rpsm.errors import ParseError, ValidationError

BASIC = """
scheme = "scheme2"   # internal return
theta = 0.1
beta = 0.2
rounds = "inf"

[sweep.beta]
start = 0.05
stop = 0.5
num = 6
"""


def test_parse_basic():
    spec = parse_config(BASIC)
    assert spec.scheme is Scheme.SCHEME_II
    assert spec.theta == 0.1
    assert spec.rounds == INFINITE
    (axis,) = spec.axes
    assert axis.name == "beta"
    assert axis.points() == pytest.approx([0.05, 0.14, 0.23, 0.32, 0.41, 0.5])
    assert spec.row_count == 6


def test_defaults():
    spec = parse_config("")
    assert spec == validate(SweepSpec())
    assert spec.row_count == 1


def test_loss_out_of_range():
    with pytest.raises(ValidationError, match=r"loss_L must be in \[0,1\)"):
        parse_config("loss = 1.2")
    with pytest.raises(ValidationError):
        parse_config("[sweep.loss]\nvalues = [0.1, 1.0]")


def test_two_axis_grid():
    spec = parse_config("""
[sweep.theta]
start = 0.01
stop = 1.0
num = 50

[sweep.beta]
start = 0.01
stop = 1.5
num = 50
spacing = "log"
""")
    assert spec.row_count == 2500
    beta = spec.axis("beta").points()
    assert beta[0] == pytest.approx(0.01) and beta[-1] == pytest.approx(1.5)
    assert beta[1] / beta[0] == pytest.approx(beta[2] / beta[1])


def test_too_many_axes():
    text = "\n".join(f"[sweep.{n}]\nvalues = [0.1]" for n in ("theta", "beta", "loss"))
    with pytest.raises(ValidationError, match="at most 2"):
        parse_config(text)


def test_rounds_axis():
    spec = parse_config('[sweep.n]\nvalues = [1, 2, 10, inf]')
    assert spec.axis("n").points() == [1, 2, 10, math.inf]
    with pytest.raises(ValidationError):
        parse_config("[sweep.n]\nvalues = [0]")
    with pytest.raises(ValidationError):
        parse_config("[sweep.n]\nvalues = [2.5]")


@pytest.mark.parametrize("text,line", [
    ("theta = 0.1\nbeta == 0.2", 2),
    ("theta = 0.1\n\n\nbeta = zero", 4),
    ("[mc]\ntrials = 10\ntrials = 20", 3),
    ("theta = [1, 2", 1),
    ("[sweep.beta]\nnum = 3\n[sweep.beta]", 3),
])
def test_parse_error_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_config(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


@pytest.mark.parametrize("text", [
    "colour = 3",
    "[grid]\nx = 1",
    "[sweep.photons]\nvalues = [1]",
    "[sweep.beta]\nstart = 0\nstop = 1",
    "[sweep.beta]\nvalues = [0.1]\nnum = 2",
    "[sweep.beta]\nstart = 0\nstop = 1\nnum = 3\nspacing = \"log\"",
    "theta = \"wide\"",
    "angle_unit = \"grad\"",
    "output_format = \"xml\"",
    "photons = 0",
    "[mc]\ntrials = 1",
    "[mc]\nseed = -3",
    "scheme = \"scheme3\"",
])
def test_validation_errors(text):
    with pytest.raises(ValidationError):
        parse_config(text)


def test_comments_and_quotes():
    spec = parse_config('output_path = "runs/#1.csv"  # where to write\n')
    assert spec.output_path == "runs/#1.csv"


finite = st.floats(-10, 10, allow_nan=False)
axes = st.one_of(
    st.builds(lambda n, v: Axis(n, values=tuple(v)),
              st.sampled_from(["theta", "beta"]), st.lists(finite, min_size=1, max_size=5)),
    st.builds(lambda n, a, b, k: Axis(n, start=a, stop=b, num=k),
              st.sampled_from(["theta", "beta"]), finite, finite, st.integers(1, 20)),
)
specs = st.builds(
    SweepSpec,
    scheme=st.sampled_from(list(Scheme)),
    theta=finite, beta=finite,
    loss=st.floats(0, 0.99),
    epsilon=finite,
    photons=st.floats(1, 1e12),
    rounds=st.one_of(st.just(INFINITE), st.integers(1, 10**6)),
    angle_unit=st.sampled_from(["rad", "deg"]),
    axes=st.lists(axes, max_size=2, unique_by=lambda a: a.name).map(tuple),
    output_path=st.one_of(st.none(), st.just("out.csv")),
    output_format=st.sampled_from(["csv", "json"]),
    trials=st.integers(2, 10**5),
    seed=st.integers(0, 2**64 - 1),
)


@given(specs)
def test_render_round_trip(spec):
    spec = validate(spec)
    assert parse_config(render(spec)) == spec
