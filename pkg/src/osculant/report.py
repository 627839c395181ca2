"""Machine-readable verification results."""

import json
from dataclasses import asdict, dataclass, field

import numpy as np

VERDICTS = ("disjoint", "nested", "intersecting", "inconclusive", "equal-family", "verified", "violated")

# CLI exit codes per verdict
EXIT_CODES = {
    "disjoint": 0,
    "nested": 0,
    "verified": 0,
    "intersecting": 1,
    "violated": 1,
    "inconclusive": 3,
    "equal-family": 3,
}


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None if np.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


@dataclass
class VerificationReport:
    theorem: str
    family: str
    verdict: str = "inconclusive"
    params: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    pairs: list = field(default_factory=list)
    multiplicities: list = field(default_factory=list)
    index: int | None = None
    bound: int | None = None
    witness: list | None = None
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def add_pair(self, a, b, min_gap, verdict, witness=None, **extra):
        entry = {"a": float(a), "b": float(b), "min_gap": float(min_gap), "verdict": verdict}
        if witness is not None:
            entry["witness"] = [float(w) for w in witness]
        entry.update(extra)
        self.pairs.append(entry)
        return entry

    def finalize(self, all_ok="disjoint"):
        """Derive the overall verdict from the pair verdicts.

        Any intersecting pair wins, then any inconclusive pair; otherwise the
        verdict is ``all_ok``. The first intersecting pair's witness is lifted
        to the top level.
        """
        self.pairs.sort(key=lambda p: (p["a"], p["b"]))
        kinds = {p["verdict"] for p in self.pairs}
        if "intersecting" in kinds:
            self.verdict = "intersecting"
            first = next(p for p in self.pairs if p["verdict"] == "intersecting")
            self.witness = first.get("witness")
        elif "inconclusive" in kinds:
            self.verdict = "inconclusive"
        else:
            self.verdict = all_ok
        return self

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict]

    def worst_pair(self):
        if not self.pairs:
            return None
        bad = [p for p in self.pairs if p["verdict"] == "intersecting"]
        if bad:
            return bad[0]
        return min(self.pairs, key=lambda p: p["min_gap"])

    def to_dict(self):
        return _plain(asdict(self))

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    def to_text(self):
        lines = []
        head = self.verdict.upper()
        summary = f"{self.theorem} [{self.family}]"
        if self.verdict == "inconclusive":
            lines.append(f"INCONCLUSIVE: {summary}")
        else:
            lines.append(f"{head}: {summary}")
        if self.pairs:
            n_bad = sum(p["verdict"] == "intersecting" for p in self.pairs)
            lines.append(f"pairs checked: {len(self.pairs)}, intersecting: {n_bad}")
            worst = self.worst_pair()
            lines.append(f"worst pair: a={worst['a']:.6g} b={worst['b']:.6g} "
                         f"min_gap={worst['min_gap']:.3e} ({worst['verdict']})")
        if self.witness is not None:
            coords = ", ".join(f"{w:.9g}" for w in self.witness)
            lines.append(f"witness: ({coords})")
        for m in self.multiplicities:
            sat = "+" if m.get("saturated") else ""
            lines.append(f"multiplicity at s={m['s']:.6g} t={m['t']:.6g}: {m['order']}{sat}")
        if self.index is not None:
            lines.append(f"index: {self.index} (bound {self.bound})")
        for k, v in sorted(self.checks.items()):
            lines.append(f"check {k}: {v}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)
