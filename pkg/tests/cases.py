"""Small exact test processes, each paired with its brute-force path law."""

from fractions import Fraction as F

import bruteforce as bf
from sdentropy import (
    Distribution,
    MarkovSpec,
    StateSpace,
    TransformationSpec,
    block_recode,
    convex_mix,
    dilation_pushforward,
    factor_pushforward,
    from_transformation,
    iid,
    markov,
    point_path,
    product_measure,
    product_sequence,
    restriction_pushforward,
    shift_pushforward,
)

X3 = StateSpace.range(3)
P_EX = [[F(9, 10), F(1, 10)], [F(1, 2), F(1, 2)]]
PI_EX = (F(5, 6), F(1, 6))

NU3 = (F(1, 2), F(1, 3), F(1, 6))
P3 = [[F(1, 2), F(1, 2), 0], [0, F(1, 3), F(2, 3)], [F(3, 4), 0, F(1, 4)]]
T3 = [1, 2, 1]
LAWS = [(F(1, 2), F(1, 4), F(1, 4)), (0, F(1, 2), F(1, 2))]


def _cases():
    chain3 = markov(MarkovSpec(P3, NU3))
    bchain3 = bf.bf_markov(P3, NU3)
    coin = iid(Distribution(NU3))
    bcoin = bf.bf_iid(NU3)
    tr = from_transformation(TransformationSpec(T3, Distribution(NU3)))
    btr = bf.bf_transformation(T3, NU3)
    yield "iid", coin, bcoin
    yield "markov", chain3, bchain3
    yield "transformation", tr, btr
    yield "product_sequence", product_sequence([Distribution(LAWS[0])], tail=[Distribution(LAWS[1]), Distribution(NU3)]), \
        bf.bf_product_sequence(lambda j: LAWS[0] if j == 0 else (LAWS[1] if j % 2 else NU3))
    yield "point", point_path(X3, [0, 2]), bf.bf_point(3, [0, 2])
    yield "mix", convex_mix(F(2, 7), chain3, tr), bf.bf_mix(F(2, 7), bchain3, btr)
    yield "product", product_measure(iid(Distribution((F(1, 3), F(2, 3)))), tr), \
        bf.bf_product(bf.bf_iid((F(1, 3), F(2, 3))), btr)
    yield "shift", shift_pushforward(tr), bf.bf_shift(btr)
    yield "restriction", restriction_pushforward(chain3, [0, 2, 3, 6, 7]), bf.bf_restriction(bchain3, [0, 2, 3, 6, 7])
    yield "dilation", dilation_pushforward(chain3, 3), bf.bf_dilation(bchain3, 3)
    yield "factor", factor_pushforward([1, 0, 1], chain3, 2), bf.bf_factor([1, 0, 1], bchain3, 2)
    yield "block_recode", block_recode(chain3, 2), bf.bf_block_recode(bchain3, 2)


CASES = list(_cases())
