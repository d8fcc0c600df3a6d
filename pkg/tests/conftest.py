import pytest

from conncalc.connection import product
from conncalc.fusion import ClassRegistry, FormalSum, load_bundle
from conncalc.scalar import fast_context, make_context

# criterion lines collected by test_acceptance, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ctx13():
    return make_context("sqrt13")


@pytest.fixture(scope="session")
def ctx17():
    return make_context("sqrt17")


@pytest.fixture(scope="session")
def fast13():
    return fast_context("sqrt13")


@pytest.fixture(scope="session")
def bundle13(ctx13):
    return load_bundle(ctx13)


@pytest.fixture(scope="session")
def bundle17(ctx17):
    return load_bundle(ctx17)


class Irreducibles:
    """Registry plus the standard irreducibles of one case."""

    def __init__(self, bundle):
        self.bundle = bundle
        self.reg = ClassRegistry(bundle.ctx)
        b = bundle
        self.one = FormalSum.single(self.reg.register(b.trivial, "1"))
        self.A = FormalSum.single(self.reg.register(b.alpha, "alpha"))
        self.aa = self.reg.expand(product(b.alpha, b.alpha_dual))
        self.Y = self.reg.connection(self.aa - self.one, "Y")
        self.G = self.reg.connection(self.reg.multiply(self.aa, self.A) - 2 * self.A, "G")


@pytest.fixture(scope="session")
def irr13(bundle13):
    return Irreducibles(bundle13)


@pytest.fixture(scope="session")
def irr17(bundle17):
    return Irreducibles(bundle17)
