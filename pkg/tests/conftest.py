import pathlib

import pytest

from solenoid_dim.model import SolenoidSpec
from solenoid_dim.specfile import load_spec
from solenoid_dim.trig import constant, trig_poly, zero

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fixture_path(name):
    return str(FIXTURES / name)


def constant_rate_spec(lam, eps=0.3, g_amp=0.1, inner=None, degree=2):
    """Degree-``degree`` circle solenoid with constant contraction ``lam``."""
    inner = lam / 4 if inner is None else inner
    return SolenoidSpec(
        l=1,
        p=1,
        d=1,
        M=(degree,),
        lambda_field=constant(1, lam),
        f=(trig_poly(1, [((1,), eps, 0.0)]),),
        lambda_tilde=inner,
        g=(trig_poly(1, [((1,), 0.0, g_amp)]),) if g_amp else (zero(1),),
        E_radius=0.5,
        F_radius=0.5,
    )


def planar_fiber_spec(lam=0.2, eps=0.25):
    """l=1 solenoid with a 2-d middle fiber: f traces a circle, no rotation."""
    return SolenoidSpec(
        l=1,
        p=2,
        d=1,
        M=(2,),
        lambda_field=constant(1, lam),
        f=(trig_poly(1, [((1,), eps, 0.0)]), trig_poly(1, [((1,), 0.0, eps)])),
        lambda_tilde=lam / 4,
        g=(zero(1),),
        E_radius=0.5,
        F_radius=0.5,
    )


@pytest.fixture(scope="session")
def sw_spec():
    return load_spec(fixture_path("smale_williams.spec"))


@pytest.fixture(scope="session")
def var_spec():
    return load_spec(fixture_path("varlambda.spec"))


@pytest.fixture(scope="session")
def strong_spec():
    return load_spec(fixture_path("lam005.spec"))


@pytest.fixture(scope="session")
def graph_spec():
    return load_spec(fixture_path("graph_attractor.spec"))


@pytest.fixture(scope="session")
def product_spec():
    return load_spec(fixture_path("product.spec"))
