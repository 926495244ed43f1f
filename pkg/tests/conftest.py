from fractions import Fraction

from hypothesis import strategies as st

F = Fraction

# endpoints on a 1/8 grid; membership is then decided by probing a 1/32 grid
eighths = st.integers(0, 8).map(lambda k: F(k, 8))
PROBES = [F(k, 32) for k in range(33)]


@st.composite
def components(draw):
    a, b = sorted((draw(eighths), draw(eighths)))
    if a == b:
        return (a, a, True, True)
    return (a, b, draw(st.booleans()), draw(st.booleans()))


regions_st = st.lists(components(), max_size=4)
