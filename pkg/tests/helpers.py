"""Shared hypothesis strategies and field probes for the test suite."""
import numpy as np
from hypothesis import strategies as st

from mtmm.membrane import PaddedMembrane, SlabMembrane
from mtmm.tmm_core import Gap, Stack, ThinScatterer, reflectivity_transmissivity

gaps = st.builds(Gap, st.floats(1.0, 5000.0))
slabs = st.builds(SlabMembrane, st.floats(1.0, 4.0), st.floats(10.0, 500.0))
element = st.one_of(
    gaps,
    slabs,
    st.builds(ThinScatterer, st.floats(-20.0, 20.0)),
    st.builds(PaddedMembrane, slabs),
)


def random_stack(max_size=8):
    return st.lists(element, min_size=1, max_size=max_size).map(Stack)


def right_states(stack, k):
    mats = stack.matrices(k)
    m = mats[0]
    for x in mats[1:]:
        m = m @ x
    _, t = reflectivity_transmissivity(m)
    state = np.array([0.0, t], dtype=complex)
    out = [None] * len(mats)
    for i in range(len(mats) - 1, -1, -1):
        out[i] = state
        state = mats[i] @ state
    return out


def boundary_fields(stack, k):
    """Pairs ``(E just left, E just right)`` at every element face."""
    states = right_states(stack, k)
    elems = stack.elements
    tiny = np.nextafter(0.0, 1.0)
    pairs = []
    for i, e in enumerate(elems):
        if e.length > 0:
            pairs.append((np.sum(e.state_at(k, 0.0, states[i])),
                           np.sum(e.state_at(k, tiny, states[i]))))
        if i > 0:
            prev = elems[i - 1]
            pairs.append((np.sum(prev.state_at(k, prev.length, states[i - 1])),
                           np.sum(e.state_at(k, 0.0, states[i]))))
    return pairs
