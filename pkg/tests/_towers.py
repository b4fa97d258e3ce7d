"""Small builders shared by the test modules."""

from zptowers.arith import GlobalParams
from zptowers.lfun import TameSpec
from zptowers.tower import INFINITY, TowerSpec, asw_reduce


def tower(p, local, a=1, precision=4, constant=None, **declared):
    """Reduced form from {point: {pole order: int or coefficient list}}."""
    params = GlobalParams(p, a)
    R = params.unram(1, precision)
    F = params.field(1)
    pts = []
    loc = {}
    for P, data in local.items():
        key = INFINITY if P == "inf" else F(P)
        pts.append(key)
        loc[key] = {k: R(v) for k, v in data.items()}
    const = R(constant) if constant is not None else None
    return asw_reduce(TowerSpec(params, tuple(pts), loc, precision, const, **declared))


def gauss_tower():
    return tower(3, {"inf": {2: 1}})


def cubic_tower():
    return tower(2, {"inf": {3: 1}})


def gm_tower():
    return tower(3, {0: {1: 1}, "inf": {1: 1}})


def quadratic_psi(red):
    return TameSpec(((red.params.field(1)(0), 1),), 2)
