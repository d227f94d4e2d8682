from hypothesis import strategies as st

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
nonzero_rationals = rationals.filter(lambda q: q != 0)


def exponents(nvars: int, max_deg: int):
    """Exponent vectors of total degree <= max_deg, built as a multiset of variables."""
    def count(idx):
        return tuple(idx.count(i) for i in range(nvars))
    return st.lists(st.integers(0, nvars - 1), max_size=max_deg).map(count)


def polynomials(ring, max_deg: int = 3, max_terms: int = 5, nonzero: bool = False):
    """Random polynomials of bounded total degree in ``ring``."""
    F = ring.field
    if F.characteristic:
        coeff = st.integers(1, F.characteristic - 1)
    else:
        coeff = st.fractions(min_value=-9, max_value=9, max_denominator=4).filter(bool)
    terms = st.dictionaries(exponents(ring.nvars, max_deg), coeff,
                            min_size=1 if nonzero else 0, max_size=max_terms)

    def build(ts):
        f = ring.zero()
        for e, c in ts.items():
            f = f + ring.monomial(e, c)
        return f
    return terms.map(build)

