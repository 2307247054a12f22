import pytest

from adverbial.behaviour import BehaviourStep, ObjectBehaviour
from adverbial.buckets import DEFAULT_SCHEME

PLACEMENT_TLTLTL = (("top", "left"), ("top", "left"), ("top", "left"))


def make_step(t=1, mag=7.5, sector="n", area="small", mip="small",
              placement=PLACEMENT_TLTLTL):
    return BehaviourStep(time_step=t, magnitude=mag, sector=sector,
                         area_bucket=area, mip_bucket=mip,
                         placement=placement)


def make_behaviour(label="person", clip="clip0", steps=None, **step_kwargs):
    if steps is None:
        steps = (make_step(**step_kwargs),)
    return ObjectBehaviour(object_label=label, clip_id=clip,
                           steps=tuple(steps))


@pytest.fixture
def scheme():
    return DEFAULT_SCHEME
