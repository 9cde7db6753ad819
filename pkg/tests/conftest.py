import pytest

from netobserve.classify import decompose, place_agents
from netobserve.fixtures import six_state_demo
from netobserve.netdesign import design_canonical


@pytest.fixture(scope="session")
def six_state():
    return six_state_demo()


@pytest.fixture(scope="session")
def six_state_dec(six_state):
    return decompose(six_state)


@pytest.fixture(scope="session")
def six_state_plan(six_state_dec):
    return place_agents(six_state_dec)


@pytest.fixture(scope="session")
def six_state_net(six_state_plan):
    return design_canonical(six_state_plan)
