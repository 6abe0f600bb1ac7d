import pytest

from src.config import load_config
from src.workflow import ConeLemmaWorkflow, RuntimeContext, WonderfulWorkflow, resolve_algebra


@pytest.fixture
def context():
    return RuntimeContext(load_config())


def test_builtin_algebra_is_identified_by_name():
    g, identifier = resolve_algebra("sl3")
    assert identifier == "sl3"
    assert g.dim == 8


def test_cone_settings_come_from_config(context):
    context.config["spectral"]["trials"] = 2
    workflow = ConeLemmaWorkflow(context, seed=4)
    assert (workflow.seed, workflow.trials) == (4, 2)
    trials, report = workflow.run()
    assert len(trials.trials) == 2
    assert report.outputs["trials"] == 2
    assert report.inputs["seed"] == 4


def test_cone_settings_are_validated(context):
    with pytest.raises(ValueError):
        ConeLemmaWorkflow(context, max_dim=0)


def test_wonderful_mode_is_validated(context):
    with pytest.raises(ValueError):
        WonderfulWorkflow(context, "u1^2", "A1", mode="both")


def test_wonderful_defaults_to_config_degree_bound(context):
    context.config["wonderful"]["degree_bound"] = 3
    workflow = WonderfulWorkflow(context, "u1^2", "A1")
    assert workflow.degree_bound == 3
    assert workflow.run().passed
