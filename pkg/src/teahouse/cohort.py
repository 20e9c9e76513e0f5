"""Synthetic cohort fixture generator.

Produces a dataset of fully simulated sessions with an age mix mirroring the
published study layout (22/17/2 across the three groups at n=41), seeded
demographics, age-dependent planted errors and pacing, and questionnaire
responses. Everything derives from one seed.
"""
from __future__ import annotations

import random

from .core import (
    AgeGroup,
    DifficultyParams,
    EducationBand,
    Gender,
    ParticipantProfile,
    TechBackground,
    validate_profile,
)
from .questionnaires import QuestionnaireBundle, SusResponse, TlxResponse
from .scripts import SessionPlan, session_script
from .session import Dataset, SessionRecord, run_session

# Target item-level response tendencies for the usability scale (odd items
# lean agree, even items lean disagree) used to draw per-respondent answers.
_SUS_ITEM_MEANS = (3.3, 2.4, 3.6, 3.4, 3.7, 3.1, 3.7, 2.7, 4.2, 2.1)
_TLX_MEANS = (4.0, 3.5, 3.8, 5.3, 4.5, 1.9)

LIKERT_SECTIONS = {
    "pre_experience": ("would_participate", "sports_games_attract"),
    "post_experience": ("overall_satisfaction", "likes_gamified_practice", "motivates_rehab"),
}


def age_split(n: int) -> tuple[int, int, int]:
    """Group sizes proportional to the 22/17/2 layout; exact at n=41."""
    n1 = round(n * 22 / 41)
    n2 = round(n * 17 / 41)
    n3 = n - n1 - n2
    if n3 < 0:
        n2 += n3
        n3 = 0
    return n1, n2, n3


def _likert_from_gauss(rng: random.Random, mean: float, sd: float, lo: int, hi: int) -> int:
    return max(lo, min(hi, round(rng.gauss(mean, sd))))


def _gen_profile(rng: random.Random, idx: int, group: AgeGroup) -> ParticipantProfile:
    if group == AgeGroup.G60_69:
        age = rng.randint(60, 69)
        moca_mean = 27.0
    elif group == AgeGroup.G70_79:
        age = rng.randint(70, 79)
        moca_mean = 27.1
    else:
        age = rng.randint(80, 90)
        moca_mean = 24.5
    gender = Gender.FEMALE if rng.random() < 0.732 else Gender.MALE
    education = rng.choices(
        list(EducationBand),
        weights=[2, 5, 8, 16, 10],
    )[0]
    moca = max(15, min(30, round(rng.gauss(moca_mean, 2.2))))
    tech = TechBackground(
        gaming_frequency=rng.randint(1, 5),
        computer_proficiency=rng.randint(1, 4),
        prior_vr=rng.random() < 0.54,
        prior_motion_capture=rng.random() < 0.29,
        sensory_impairment=rng.random() < 0.1,
    )
    return validate_profile(
        participant_id=f"p{idx:03d}",
        age=age,
        gender=gender,
        education_band=education,
        moca_score=moca,
        tech=tech,
    )


def _gen_questionnaires(rng: random.Random) -> QuestionnaireBundle:
    sus = SusResponse(tuple(_likert_from_gauss(rng, m, 1.1, 1, 5) for m in _SUS_ITEM_MEANS))
    tlx = TlxResponse(tuple(_likert_from_gauss(rng, m, 1.3, 1, 7) for m in _TLX_MEANS))
    likert = {
        section: {item: _likert_from_gauss(rng, 4.3, 0.8, 1, 5) for item in items}
        for section, items in LIKERT_SECTIONS.items()
    }
    return QuestionnaireBundle(sus=sus, tlx=tlx, likert=likert)


def _gen_plan(rng: random.Random, group: AgeGroup, params: DifficultyParams) -> SessionPlan:
    """Age-graded error and pacing tendencies so group contrasts exist."""
    sev = {AgeGroup.G60_69: 0.0, AgeGroup.G70_79: 0.35, AgeGroup.G80_PLUS: 1.0}[group]
    n_steam = params.steamer_item_count
    dim_wrong = rng.choices([0, 1, 2], weights=[8 - 6 * sev, 2 + 2 * sev, 0.4 + 2 * sev])[0]
    dim_leave = rng.choices([0, 1], weights=[9 - 5 * sev, 0.7 + 3 * sev])[0]
    steam = n_steam - rng.choices([0, 1, 2], weights=[9 - 6 * sev, 1 + 3 * sev, 0.2 + 2.5 * sev])[0]
    late = rng.choices([0, 1], weights=[9, 0.5 + 2 * sev])[0] if steam else 0
    late = min(late, steam)
    transfer = steam - late
    if transfer > 0 and rng.random() < 0.15 + 0.5 * sev:
        transfer -= 1  # one item steamed but never served
    solve = params.cashier_trial_count - rng.choices(
        [0, 1, 2, 3], weights=[5 - 3 * sev, 3, 1.5 + 2 * sev, 0.5 + 2.5 * sev]
    )[0]
    pace_ticks = int(rng.uniform(0, 6) + sev * rng.uniform(4, 20))
    return SessionPlan(
        dimsum_wrong=dim_wrong,
        dimsum_leave=dim_leave,
        steamer_steam=steam,
        steamer_transfer=max(transfer, 0),
        steamer_late=late,
        cashier_solve=max(solve, 0),
        pace_ms=pace_ticks * 50,
    )


def gen_cohort(
    n: int = 41,
    seed: int = 0,
    params: DifficultyParams | None = None,
    tutorial_ms: int = 30_000,
) -> Dataset:
    params = params or DifficultyParams()
    n1, n2, n3 = age_split(n)
    groups = [AgeGroup.G60_69] * n1 + [AgeGroup.G70_79] * n2 + [AgeGroup.G80_PLUS] * n3
    records: list[SessionRecord] = []
    for idx, group in enumerate(groups):
        rng = random.Random(f"{seed}/cohort/{idx}")
        profile = _gen_profile(rng, idx, group)
        plan = _gen_plan(rng, group, params)
        session_seed = rng.getrandbits(32)
        script = session_script(params, session_seed, tutorial_ms, plan, label=f"cohort_{idx}")
        record = run_session(
            profile,
            params,
            session_seed,
            script,
            questionnaires=_gen_questionnaires(rng),
            tutorial_ms=tutorial_ms,
        )
        records.append(record)
    return Dataset(
        records=records,
        provenance={"generator": "gen_cohort", "n": n, "seed": seed},
    )
