"""Hypothesis strategies for states of REF1 and REF2, boundaries included."""

from hypothesis import strategies as st

unit = st.one_of(st.sampled_from([0.0, 1.0, 0.5]), st.floats(0.0, 1.0))


@st.composite
def states(draw, model, phase=None):
    phase = phase or draw(st.sampled_from(["free", "congested"]))
    if phase == "free":
        return model.free(draw(unit) * model.rf_hi)
    w = model.w_c + draw(unit) * (model.w_max - model.w_c)
    return model.congested(w, draw(unit) * model.v_c)
