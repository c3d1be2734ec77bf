import numpy as np
import pytest

from trunkload.model import BodySegment, JointDef, Model, MuscleElement, MuscleGroup
from trunkload.pipeline import default_model


@pytest.fixture(scope="session")
def model():
    return default_model()


def make_hinge_model(axis=(0.0, 0.0, 1.0), mass=2.0, com=(0.5, 0.0, 0.0)):
    """Single revolute joint at the origin; the analytic test geometry.

    The muscle runs from ground (0, 1, 0) to link-local (0.5, 0, 0), so
    its length is L(q) = sqrt(1.25 - sin q) for a z-axis hinge.
    """
    return Model(
        segments=(
            BodySegment("ground"),
            BodySegment("link", mass=mass, com=com),
        ),
        joints=(
            JointDef("hinge", "ground", "link", kind="revolute", axis=axis),
        ),
        muscles=(
            MuscleElement(
                "anchor_muscle",
                "g1",
                "midline",
                (("ground", (0.0, 1.0, 0.0)), ("link", (0.5, 0.0, 0.0))),
                1000.0,
            ),
        ),
        groups=(MuscleGroup("g1", "other"),),
    )


@pytest.fixture
def hinge_model():
    return make_hinge_model()
