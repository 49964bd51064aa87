"""Sampling checks of the exchange-mechanism conditions.

Each checker draws seeded random multi-trader offer profiles (plus a few
fixed corner cases) and compares exact rational outputs.  A clean run means
no violation was found at the sampled inputs, not that the condition is
proved.  Checkers stop at the first witness; ``replay`` re-evaluates a
stored witness.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .mechanisms import Bundle, MechanismUnderTest, Offer
from .rational import format_rational

CONDITIONS = (
    "conservation",
    "anonymity",
    "aggregation",
    "invariance",
    "nondissipation",
    "value_conservation",
    "flexibility",
)


@dataclass
class ViolationReport:
    condition: str
    mechanism: str
    witness: dict
    observed: object
    required: object
    detail: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {
                "condition": self.condition,
                "mechanism": self.mechanism,
                "detail": self.detail,
                "witness": _encode(self.witness),
                "observed": _encode(self.observed),
                "required": _encode(self.required),
            },
            sort_keys=True,
        )


def _encode(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {_key(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(x) for x in obj]
    return obj


def _key(k) -> str:
    if isinstance(k, tuple):
        return "-".join(str(x) for x in k)
    return str(k)


# Sampling -----------------------------------------------------------------


def _rand_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 60), rng.randint(1, 12))


def _sample_profile(mech: MechanismUnderTest, rng: random.Random, n: int) -> list[dict]:
    """``n`` offers whose aggregate is positive on every index."""
    labels = mech.labels
    offers = [{h: _rand_rational(rng) for h in labels if rng.random() < 0.6} for _ in range(n)]
    for h in labels:
        if not any(a.get(h) for a in offers):
            offers[rng.randrange(n)][h] = _rand_rational(rng)
    return offers


def _corner_profiles(mech: MechanismUnderTest, rng: random.Random) -> list[list[dict]]:
    full = {h: _rand_rational(rng) for h in mech.labels}
    split = {h: v / 3 for h, v in full.items()}
    return [
        [full],                                 # single trader offering the whole state
        [full, {}],                             # a trader who offers nothing
        [split, split, {h: v - 2 * v / 3 for h, v in full.items()}],
    ]


def _profiles(mech: MechanismUnderTest, samples: int, seed: int, min_traders: int = 1):
    rng = random.Random(seed)
    produced = 0
    for prof in _corner_profiles(mech, rng):
        if produced == samples:
            return
        if len(prof) >= min_traders:
            produced += 1
            yield prof
    while produced < samples:
        n = rng.randint(max(1, min_traders), 3)
        produced += 1
        yield _sample_profile(mech, rng, n)


def _add(x: Bundle, y: Bundle) -> Bundle:
    return tuple(a + b for a, b in zip(x, y))


def _sub(x: Bundle, y: Bundle) -> Bundle:
    return tuple(a - b for a, b in zip(x, y))


# Witness evaluators: return (observed, required, detail) on violation, else None.


def _eval_conservation(mech, w):
    offers = w["offers"]
    returns = mech.clear(offers)
    got = tuple(sum(col, Fraction(0)) for col in zip(*returns))
    want = tuple(sum(col, Fraction(0)) for col in zip(*[mech.aggregate(a) for a in offers]))
    if got != want:
        return got, want, "total returns differ from total offered"
    return None


def _eval_anonymity(mech, w):
    offers, perm = w["offers"], w["perm"]
    base = mech.clear(offers)
    permuted = mech.clear([offers[k] for k in perm])
    want = [base[k] for k in perm]
    if permuted != want:
        return permuted, want, "returns do not follow the traders under reordering"
    return None


def _eval_aggregation(mech, w):
    offers = w["offers"]
    base = mech.clear(offers)
    merged_offer = {h: Fraction(offers[-2].get(h, 0)) + Fraction(offers[-1].get(h, 0)) for h in mech.labels}
    merged = mech.clear(offers[:-2] + [merged_offer])
    want = base[:-2] + [_add(base[-2], base[-1])]
    if merged != want:
        return merged, want, "merging the last two traders changed returns"
    return None


def _eval_invariance(mech, w):
    offers, lam = w["offers"], w["lambda"]
    base = mech.clear(offers)
    scaled = [{h: Fraction(v) * lam[mech.source(h) - 1] for h, v in a.items()} for a in offers]
    got = mech.clear(scaled)
    want = [tuple(x * l for x, l in zip(r, lam)) for r in base]
    if got != want:
        return got, want, "rescaling units did not rescale returns"
    return None


def _signs(nu: Bundle) -> tuple[bool, bool]:
    return any(x > 0 for x in nu), any(x < 0 for x in nu)


def _eval_nondissipation(mech, w):
    offers = w["offers"]
    for k, (a, r) in enumerate(zip(offers, mech.clear(offers))):
        nu = _sub(r, mech.aggregate(a))
        pos, neg = _signs(nu)
        if neg and not pos:
            return {"trader": k, "net_trade": nu}, "zero or a positive component", "trader loses without gaining"
        if pos and not neg:
            return {"trader": k, "net_trade": nu}, "no gain without giving", "net trade is a pure gain"
    return None


def _eval_value_conservation(mech, w):
    offers = w["offers"]
    b = mech.total(offers)
    p = mech.price_map(b)
    for k, (a, r) in enumerate(zip(offers, mech.clear(offers))):
        nu = _sub(r, mech.aggregate(a))
        v = sum((x * y for x, y in zip(p, nu)), Fraction(0))
        if v != 0:
            return {"trader": k, "value": v}, Fraction(0), "priced net trade is not zero"
    return None


def _eval_flexibility(mech, w):
    probes = w["probes"]
    m = mech.m
    index_targets = {}
    for i, ks in enumerate(mech.index_sets, start=1):
        for h in ks:
            support = set()
            for probe in probes:
                r = mech.clear([{h: Fraction(1)}, probe])[0]
                support |= {j for j in range(1, m + 1) if r[j - 1] != 0}
            index_targets[h] = (i, support)
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i == j:
                continue
            reaching = [h for h, (s, sup) in index_targets.items() if s == i and j in sup]
            pure = [h for h in reaching if index_targets[h][1] == {j}]
            if reaching and not pure:
                return {"pair": [i, j], "indices": [_key(h) for h in reaching]}, "a pure index", "no pure index for this pair"
    return None


EVALUATORS: dict[str, Callable] = {
    "conservation": _eval_conservation,
    "anonymity": _eval_anonymity,
    "aggregation": _eval_aggregation,
    "invariance": _eval_invariance,
    "nondissipation": _eval_nondissipation,
    "value_conservation": _eval_value_conservation,
    "flexibility": _eval_flexibility,
}


def replay(mech: MechanismUnderTest, report: ViolationReport) -> ViolationReport | None:
    """Re-evaluate a report's witness; returns the reproduced report or None."""
    found = EVALUATORS[report.condition](mech, report.witness)
    if found is None:
        return None
    observed, required, detail = found
    return ViolationReport(report.condition, mech.name, report.witness, observed, required, detail)


def _run(condition: str, mech: MechanismUnderTest, witnesses) -> list[ViolationReport]:
    evaluate = EVALUATORS[condition]
    for w in witnesses:
        found = evaluate(mech, w)
        if found is not None:
            observed, required, detail = found
            return [ViolationReport(condition, mech.name, w, observed, required, detail)]
    return []


def check_conservation(mech: MechanismUnderTest, samples: int = 100, seed: int = 0) -> list[ViolationReport]:
    return _run("conservation", mech, ({"offers": p} for p in _profiles(mech, samples, seed)))


def check_anonymity(mech: MechanismUnderTest, samples: int = 100, seed: int = 0) -> list[ViolationReport]:
    rng = random.Random(seed + 1)

    def witnesses():
        for p in _profiles(mech, samples, seed, min_traders=2):
            perm = list(range(len(p)))
            while perm == sorted(perm):
                rng.shuffle(perm)
            yield {"offers": p, "perm": perm}

    return _run("anonymity", mech, witnesses())


def check_aggregation(mech: MechanismUnderTest, samples: int = 100, seed: int = 0) -> list[ViolationReport]:
    return _run("aggregation", mech, ({"offers": p} for p in _profiles(mech, samples, seed, min_traders=2)))


def check_invariance(mech: MechanismUnderTest, samples: int = 100, seed: int = 0) -> list[ViolationReport]:
    rng = random.Random(seed + 2)

    def witnesses():
        for p in _profiles(mech, samples, seed):
            lam = [Fraction(rng.randint(1, 20), rng.randint(1, 20)) for _ in range(mech.m)]
            yield {"offers": p, "lambda": lam}

    return _run("invariance", mech, witnesses())


def check_nondissipation(mech: MechanismUnderTest, samples: int = 100, seed: int = 0) -> list[ViolationReport]:
    """Every net trade is zero or has both a positive and a negative component.

    A net trade with no negative component but some positive one is reported
    too, since that is an arbitrage gain.
    """
    def witnesses():
        for n, p in enumerate(_profiles(mech, samples, seed)):
            yield {"offers": p}
            if n >= 3:
                continue
            # single-index offers against the same aggregate expose lopsided indices
            b = mech.total(p)
            for h in mech.labels:
                yield {"offers": [{h: b[h] / 2}, {g: (v / 2 if g == h else v) for g, v in b.items()}]}

    return _run("nondissipation", mech, witnesses())


def check_value_conservation(mech: MechanismUnderTest, samples: int = 100, seed: int = 0) -> list[ViolationReport]:
    if mech.price_map is None:
        raise ValueError(f"mechanism {mech.name} publishes no prices")
    return _run("value_conservation", mech, ({"offers": p} for p in _profiles(mech, samples, seed)))


def check_flexibility(mech: MechanismUnderTest, probe_states: Sequence[Offer]) -> list[ViolationReport]:
    """Each pair with an index paying out in ``j`` must have a pure one, judged at the probes.

    A probe is the combined offer of the other traders; index ``h`` is
    probed by a trader offering one unit at ``h`` against it.
    """
    return _run("flexibility", mech, [{"probes": list(probe_states)}])


def default_probes(mech: MechanismUnderTest, count: int = 3, seed: int = 0) -> list[dict]:
    rng = random.Random(seed + 3)
    return [{h: _rand_rational(rng) for h in mech.labels} for _ in range(count)]


@dataclass
class HarnessResult:
    mechanism: str
    reports: dict[str, list[ViolationReport]] = field(default_factory=dict)

    @property
    def failed(self) -> list[str]:
        return [c for c, r in self.reports.items() if r]


def run_all(mech: MechanismUnderTest, samples: int = 100, seed: int = 0) -> HarnessResult:
    """Every applicable checker; value conservation only if the mechanism publishes prices."""
    res = HarnessResult(mech.name)
    res.reports["conservation"] = check_conservation(mech, samples, seed)
    res.reports["anonymity"] = check_anonymity(mech, samples, seed)
    res.reports["aggregation"] = check_aggregation(mech, samples, seed)
    res.reports["invariance"] = check_invariance(mech, samples, seed)
    res.reports["nondissipation"] = check_nondissipation(mech, samples, seed)
    if mech.price_map is not None:
        res.reports["value_conservation"] = check_value_conservation(mech, samples, seed)
    res.reports["flexibility"] = check_flexibility(mech, default_probes(mech, seed=seed))
    return res
