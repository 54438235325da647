import math

import hypothesis.strategies as st
from hypothesis import settings

from nomaq.qubit import BlochVector

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@st.composite
def bloch_vectors(draw, max_radius=1.0):
    polar = draw(st.floats(0, math.pi))
    azimuth = draw(st.floats(0, 2 * math.pi))
    r = draw(st.floats(0, max_radius))
    return BlochVector(r * math.sin(polar) * math.cos(azimuth),
                       r * math.sin(polar) * math.sin(azimuth),
                       r * math.cos(polar))


probabilities = st.floats(0.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(mod.RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
