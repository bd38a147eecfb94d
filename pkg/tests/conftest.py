import math

import pytest

from rpsm import pulse

# 40-digit evaluations of the closed forms at theta = 0.1, beta = 0.2 (mpmath);
# cross-checked against the pulse-train oracle in test_oracle.py.
ANCHOR = {
    "p_d1": 0.012414836399092053565531946157,
    "p_c1": 0.98509348583106315032499261843650,
    "gamma_1": 0.0024916777698447961094754354064789,
    "P_V": 0.20070161939685507488431,
    "theta_tilde": 0.46452405757428233336462695,
    "eta1": 20.137196493244445473016776,
    "s1_P_d": 0.83284638235295049316009284,
    "s1_Gamma": 0.16715361764704950683990716,
    "s1_R": 4.0952644908637045547947788,
    "D_minus": 0.041567799635568942145249255,
    "D_plus": 0.95098200088733162447325383,
    "s2_P_d": 0.84778489194154735801777639,
    "s2_Gamma": 0.15221510805845264198222361,
    "s2_x": 19.896269968709371738461309,
    "s2_eta": 6.1620200381413842012557277,
    "s2_R": 2.2856219049040772908601709,
    "s2_P_V": 0.061415073385500278591552936,
    "s1_P_d_n2": 0.024644610863496008496807316,
    "s2_P_d_n2": 0.053363005040421859258372916,
    "s2_p_d2": 0.040948168641329805692840970,
}


@pytest.fixture(params=sorted(pulse.BACKENDS))
def backend(request):
    return request.param


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def pytest_report_header(config):
    return f"rpsm pulse backends: {sorted(pulse.BACKENDS)} (default {pulse.DEFAULT_BACKEND})"


THETA, BETA = 0.1, 0.2
PI = math.pi


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
