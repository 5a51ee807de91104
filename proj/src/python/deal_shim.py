"""Minimal runtime-contract decorators compatible with the common `deal` API."""

import functools


class ContractError(AssertionError):
    pass


class PreContractError(ContractError):
    pass


class PostContractError(ContractError):
    pass


class InvContractError(ContractError):
    pass


class RaisesContractError(ContractError):
    pass


class _Contract:
    def __init__(self, kind, predicate=None):
        self.kind = kind
        self.predicate = predicate

    def __call__(self, fn):
        return _attach(fn, [self])


def _attach(fn, contracts):
    raw = getattr(fn, "__deal_raw__", fn)
    existing = list(getattr(fn, "__deal_contracts__", []))

    @functools.wraps(raw)
    def wrapper(*args, **kwargs):
        return check_call(wrapper.__deal_contracts__, raw, args, kwargs)

    wrapper.__deal_raw__ = raw
    wrapper.__deal_contracts__ = contracts + existing
    return wrapper


def _holds(predicate, *args, **kwargs):
    try:
        return bool(predicate(*args, **kwargs))
    except Exception:
        return False


def check_call(contracts, fn, args, kwargs=None):
    kwargs = kwargs or {}
    for c in contracts:
        if c.kind == "pre" and not _holds(c.predicate, *args, **kwargs):
            raise PreContractError("precondition failed")
    safe = any(c.kind == "safe" for c in contracts)
    try:
        result = fn(*args, **kwargs)
    except ContractError:
        raise
    except AssertionError as exc:
        raise InvContractError("assertion failed in body: %s" % exc) from exc
    except Exception as exc:
        if safe:
            raise RaisesContractError("safe function raised %s" % type(exc).__name__) from exc
        raise
    for c in contracts:
        if c.kind == "post" and not _holds(c.predicate, result):
            raise PostContractError("postcondition failed")
        if c.kind == "ensure" and not _holds(c.predicate, *args, result=result, **kwargs):
            raise PostContractError("ensure failed")
        if c.kind == "inv" and not _holds(c.predicate, result):
            raise InvContractError("invariant failed")
    return result


def pre(predicate):
    return _Contract("pre", predicate)


def post(predicate):
    return _Contract("post", predicate)


def ensure(predicate):
    return _Contract("ensure", predicate)


def inv(predicate):
    return _Contract("inv", predicate)


class _Marker(_Contract):
    def __init__(self, kind):
        super().__init__(kind)


safe = _Marker("safe")
pure = _Marker("pure")


def raises(*exceptions):
    return _Marker("raises")


def has(*markers):
    return _Marker("has")


def reason(event, predicate):
    return _Marker("reason")


def chain(*decorators):
    contracts = []
    for d in decorators:
        if isinstance(d, _Contract):
            contracts.append(d)

    def apply(fn):
        return _attach(fn, contracts)

    return apply


def contracts_of(fn):
    return list(getattr(fn, "__deal_contracts__", []))


def raw_function(fn):
    return getattr(fn, "__deal_raw__", fn)
