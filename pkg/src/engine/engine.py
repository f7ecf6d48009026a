from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.engine.calculus.arith import factorize, e_sol, p_part, ws
from src.engine.calculus.threshold import DEFAULT_PRECISION, threshold, threshold_interval
from src.engine.config import EngineSettings, load_settings, load_seed_file
from src.engine.errors import InadmissibleInputError, ResourceLimitError
from src.engine.groups.fixtures import FixtureBuilder, SUITES
from src.engine.models.certificate import BoundCertificate, BoundMode, RationalValue, SeedConstant
from src.engine.models.fixture import FixtureOutcome
from src.engine.models.profile import OrbitProfile, TowerProfile
from src.engine.processors.bound_engine import BoundEngine, combine, family_degrees
from src.engine.processors.profile_engine import ProfileEngine

# (description, profile, expected floor) replayed by `checkpoints` with the seed for 2^16 * 5.
PUBLISHED_CHECKPOINTS = [
    ("two orbits of length 2^15*5 (row 7)", {2 ** 15 * 5: 2}, 123274),
    ("four orbits of length 2^14*5 (rows 18, 19)", {2 ** 14 * 5: 4}, 126313),
    ("orbits 2^15*5, 2^14*5, 2^14*5 (rows 18, 19)", {2 ** 15 * 5: 1, 2 ** 14 * 5: 2}, 124793),
    ("orbits 2^14*5 and 2^14*15 (row 18)", {2 ** 14 * 5: 1, 2 ** 14 * 15: 1}, 97115),
    ("2048 orbits each of lengths 5 and 155 (row 29)", {5: 2048, 155: 2048}, 69634),
]
CHECKPOINT_DEGREE = 2 ** 17 * 5


class VerificationEngine:
    """
    Wires the arithmetic kernel, the profile and bound processors and the
    group oracle together behind the operations the front end exposes.
    """
    def __init__(self, settings: Optional[EngineSettings] = None, seeds_path: Optional[Path] = None,
                 verbose: bool = True):
        self.settings = settings or load_settings()
        self.seeds_path = Path(seeds_path) if seeds_path else self.settings.seeds_path
        self.verbose = verbose
        self._seeds: Optional[List[SeedConstant]] = None
        self.seed_digest: Optional[str] = None

        self._say("Initializing verification engine...")
        self.profile_engine = ProfileEngine()
        self.bound_engine = BoundEngine(self.profile_engine)
        self.fixture_builder = FixtureBuilder(cap=self.settings.group_cap)
        self._say(f"Engine ready: {len(self.profile_engine.rows)} table rows, "
                  f"{len(self.fixture_builder.fixture_names)} group fixtures.")

    def _say(self, message: str) -> None:
        if self.verbose:
            print(message)

    @property
    def seeds(self) -> List[SeedConstant]:
        if self._seeds is None:
            self._seeds, self.seed_digest = load_seed_file(self.seeds_path)
            self._say(f"Loaded {len(self._seeds)} seed constants from {self.seeds_path}")
        return self._seeds

    # ------------------------------------------------------------------
    # Calculus
    # ------------------------------------------------------------------

    def esol_report(self, s: int) -> Dict[str, Any]:
        """
        Factorization statistics, ws, the 2-part and E_sol(s, 2).

        ws is None (with the reason in ws_note) when K(s) is beyond exact
        evaluation; E_sol is always reported.
        """
        factored = factorize(s)
        weight, note = None, None
        try:
            weight = RationalValue.from_fraction(ws(s)).model_dump()
        except ResourceLimitError as exc:
            note = str(exc)
        return {
            "s": s,
            "factorization": str(factored),
            "factors": {str(p): e for p, e in factored.items()},
            "omega": factored.omega,
            "omega1": factored.omega1,
            "K": factored.k_value,
            "ws": weight,
            "ws_note": note,
            "s_2": p_part(s, 2),
            "e_sol": RationalValue.from_fraction(e_sol(s, 2)).model_dump(),
        }

    def threshold_report(self, n: int, precision: int = DEFAULT_PRECISION) -> Dict[str, Any]:
        value = threshold(n, precision=precision)
        doubled = threshold(n, precision=2 * precision)
        lo, hi = threshold_interval(n, precision)
        return {
            "n": n,
            "threshold": value,
            "precision": precision,
            "enclosure": [format(lo, ".25g"), format(hi, ".25g")],
            "stable_under_doubling": value == doubled,
        }

    # ------------------------------------------------------------------
    # Profiles
    # ------------------------------------------------------------------

    def profiles_report(self, m: int, row: Optional[int] = None, limit: Optional[int] = 20) -> Dict[str, Any]:
        """Applicable rows at degree m and their profiles (at most `limit` per row; None lists all)."""
        applicable = self.profile_engine.rows_for_degree(m)
        if row is not None:
            record = self.profile_engine.row(row)
            applicable = [(s, k) for s, k in applicable if s.row_id == record.row_id]
            if not applicable:
                raise InadmissibleInputError(f"row {row} does not apply at degree {m}")
        rows = []
        for record, skeletons in applicable:
            entries = []
            total = 0
            for instance, profile in self.profile_engine.enumerate_profiles(record, m):
                total += 1
                if limit is None or len(entries) < limit:
                    entries.append({"assignment": instance.assignment, "profile": _render_profile(profile)})
            rows.append({
                "row_id": record.row_id,
                "section": record.section,
                "degree_expression": record.degree_expression,
                "skeletons": skeletons,
                "profile_count": total,
                "profiles": entries,
                "truncated": limit is not None and total > limit,
            })
        self._say(f"Degree {m}: rows {[r['row_id'] for r in rows]}")
        return {"m": m, "rows": rows}

    # ------------------------------------------------------------------
    # Bounds
    # ------------------------------------------------------------------

    def bound(self, n: int, mode: Optional[BoundMode] = None) -> BoundCertificate:
        """Certificate for n, computed along its family from the first degree."""
        mode = mode or self.settings.mode
        certificates = self.bound_engine.chain(n, self.seeds, mode)
        for certificate in certificates[:-1]:
            self._say(f"  {certificate.summary_line()}")
        return certificates[-1]

    def verify_chain(self, families: Sequence[int] = (5, 15), mode: Optional[BoundMode] = None) -> List[BoundCertificate]:
        mode = mode or self.settings.mode
        for family in families:
            family_degrees(family)
        self._say(f"Running the inductive sweep over families {list(families)} ({mode.value} mode)...")
        certificates = self.bound_engine.verify_families(self.seeds, mode, families)
        for certificate in certificates:
            self._say(f"  {certificate.summary_line()}")
        return certificates

    def checkpoints(self) -> Dict[str, Any]:
        """Replay the published combine() values at 2^17 * 5 and the certificate for that degree."""
        seed = next((s for s in self.seeds if s.degree == CHECKPOINT_DEGREE // 2), None)
        if seed is None:
            raise InadmissibleInputError(f"the seed file has no constant for degree {CHECKPOINT_DEGREE // 2}")
        results = []
        for description, counts, expected in PUBLISHED_CHECKPOINTS:
            value = combine(OrbitProfile.from_counts(counts), seed.bound)
            floored = value.numerator // value.denominator
            results.append({
                "description": description,
                "profile": {str(length): m for length, m in sorted(counts.items())},
                "value": RationalValue.from_fraction(value).model_dump(),
                "floor": floored,
                "expected": expected,
                "ok": floored == expected,
            })
        certificate = self.bound(CHECKPOINT_DEGREE, BoundMode.FIDELITY)
        maximum = max(r["floor"] for r in results)
        return {
            "seed": seed.bound,
            "checkpoints": results,
            "maximum": maximum,
            "certificate_total": certificate.total,
            "threshold": certificate.threshold,
            "verdict": certificate.verdict.value,
            "ok": all(r["ok"] for r in results) and certificate.passed and certificate.total == maximum,
        }

    # ------------------------------------------------------------------
    # Groups
    # ------------------------------------------------------------------

    def verify_groups(self, suites: Sequence[str] = SUITES) -> List[FixtureOutcome]:
        outcomes = []
        for suite in suites:
            self._say(f"Running group suite {suite}...")
            outcomes.extend(self.fixture_builder.run_suite(suite))
        return outcomes


def _render_profile(profile) -> Any:
    if isinstance(profile, TowerProfile):
        return {
            "levels": [
                {"level": level.level, "blocks": level.blocks, "unit": level.unit,
                 "choices": [list(choice) for choice in level.choices]}
                for level in profile.levels
            ]
        }
    return {str(length): m for length, m in profile.items}
