import pytest
from hypothesis import strategies as st

from soctam import benchmark_path
from soctam.soc_model import CoreSpec, SocSpec, load_soc

# Power per d695 core in mW, in core order.
D695_POWER = [660, 602, 823, 275, 690, 354, 530, 753, 641, 1144]


@pytest.fixture(scope="session")
def d695():
    return load_soc(benchmark_path("d695"))


@pytest.fixture(scope="session")
def core6():
    return load_soc(benchmark_path("p93791_core6")).core(1)


@pytest.fixture
def tiny_core():
    return CoreSpec(1, "core1", 2, 2, 0, 10, (4, 3, 3), 100)


def cores(max_chains=6, max_len=40, max_io=30, max_patterns=50):
    return st.builds(
        lambda i, o, b, p, lengths, power: CoreSpec(1, "core1", i, o, b, p, tuple(lengths), power),
        st.integers(0, max_io),
        st.integers(0, max_io),
        st.integers(0, 4),
        st.integers(1, max_patterns),
        st.lists(st.integers(1, max_len), max_size=max_chains),
        st.one_of(st.none(), st.integers(0, 2000)),
    )


@st.composite
def socs(draw, max_cores=4, with_power=True, **core_kw):
    n = draw(st.integers(1, max_cores))
    out = []
    for k in range(1, n + 1):
        c = draw(cores(**core_kw))
        power = draw(st.integers(1, 1000)) if with_power else None
        out.append(CoreSpec(k, f"core{k}", c.inputs, c.outputs, c.bidirs, c.patterns,
                            c.scan_chain_lengths, power))
    return SocSpec("rand", tuple(out))


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
