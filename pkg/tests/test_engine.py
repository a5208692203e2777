import itertools

import pytest

from dosepath import (
    DEFAULT_CONFIG,
    ROLLING_CONFIG,
    Decision,
    DecisionHistory,
    EscalationState,
    InfeasibleDecisionError,
    ProtocolConfig,
    RegretRuleSet,
    Tally,
    ValidationError,
    anticipated_tallies,
    apply_decision,
    cohort_outcomes,
    decision_histories,
    enroll_transitions,
    infeasible,
    next_decision,
    outcome_tallies,
    parse_state,
    regrets,
    regrettable,
    stop_recommendation,
    validate_tally,
)

ESC, STA, DES, STOP = (
    Decision.ESCALATE,
    Decision.STAY,
    Decision.DEESCALATE,
    Decision.STOP,
)


def q(t, n):
    return Tally(t, n)


ALL_VALID_TALLIES = [q(t, n) for n in range(7) for t in range(n + 1)]


class TestCohortOutcomes:
    def test_cohort_of_three(self):
        assert cohort_outcomes(3) == [q(3, 3), q(2, 3), q(1, 3), q(0, 3)]

    def test_single_patient(self):
        assert cohort_outcomes(1) == [q(1, 1), q(0, 1)]

    def test_pair(self):
        assert cohort_outcomes(2) == [q(2, 2), q(1, 2), q(0, 2)]

    def test_size_below_one_rejected(self):
        with pytest.raises(ValidationError):
            cohort_outcomes(0)


class TestOutcomeTallies:
    def test_cohort_of_three_from_empty(self):
        assert outcome_tallies(q(0, 0)) == [q(3, 3), q(2, 3), q(1, 3), q(0, 3)]

    def test_componentwise_addition(self):
        assert outcome_tallies(q(1, 3)) == [q(4, 6), q(3, 6), q(2, 6), q(1, 6)]

    def test_rolling_sizes_concatenate_in_order(self):
        got = outcome_tallies(q(0, 3), ROLLING_CONFIG)
        assert got == [
            q(3, 6), q(2, 6), q(1, 6), q(0, 6),
            q(2, 5), q(1, 5), q(0, 5),
            q(1, 4), q(0, 4),
        ]

    def test_matches_bruteforce_over_size_dlt_pairs(self):
        for prior in ALL_VALID_TALLIES:
            for config in (DEFAULT_CONFIG, ROLLING_CONFIG):
                expected = [
                    q(prior.t + d, prior.n + c)
                    for c in config.cohort_sizes
                    for d in range(c, -1, -1)
                    if prior.n + c <= config.max_denominator
                ]
                assert outcome_tallies(prior, config) == expected

    def test_invalid_prior_rejected(self):
        with pytest.raises(ValidationError):
            outcome_tallies(q(3, 7))


class TestEnrollTransitions:
    def test_full_dose_has_no_transition(self):
        assert enroll_transitions(q(0, 6)) == []

    def test_half_enrolled_dose(self):
        assert enroll_transitions(q(0, 3)) == [q(3, 6), q(2, 6), q(1, 6), q(0, 6)]

    def test_rolling_keeps_only_fitting_sizes(self):
        # from 2/5 only a single-patient cohort fits under the cap
        assert enroll_transitions(q(2, 5), ROLLING_CONFIG) == [q(3, 6), q(2, 6)]

    def test_same_values_as_outcome_tallies(self):
        for prior in ALL_VALID_TALLIES:
            assert enroll_transitions(prior, ROLLING_CONFIG) == outcome_tallies(
                prior, ROLLING_CONFIG
            )


class TestAnticipatedTallies:
    def test_ignores_the_enrollment_cap(self):
        assert anticipated_tallies(q(2, 5), ROLLING_CONFIG) == [
            q(5, 8), q(4, 8), q(3, 8), q(2, 8),
            q(4, 7), q(3, 7), q(2, 7),
            q(3, 6), q(2, 6),
        ]

    def test_agrees_with_outcomes_when_nothing_overflows(self):
        assert anticipated_tallies(q(0, 3)) == outcome_tallies(q(0, 3))


class TestApplyDecision:
    def test_escalate_enrolls_next_higher(self):
        state = parse_state("[0/3]-[0/0,0/0]")
        assert apply_decision(state, ESC, 3, 0) == parse_state("[0/3,0/3]-[0/0]")

    def test_deescalate_parks_current_above(self):
        state = parse_state("[2/6,0/3]-[]")
        assert apply_decision(state, DES, 3, 0) == parse_state("[0/6]-[2/6]")

    def test_stay_reenrolls_current(self):
        state = parse_state("[0/0]-[0/0]")
        assert apply_decision(state, STA, 3, 2) == parse_state("[2/3]-[0/0]")

    def test_escalate_without_higher_dose(self):
        with pytest.raises(InfeasibleDecisionError, match="escalate"):
            apply_decision(parse_state("[0/3]-[]"), ESC, 3, 0)

    def test_deescalate_from_lowest(self):
        with pytest.raises(InfeasibleDecisionError, match="de-escalate"):
            apply_decision(parse_state("[0/3]-[0/0]"), DES, 3, 0)

    def test_denominator_overflow(self):
        with pytest.raises(InfeasibleDecisionError, match="max_denominator"):
            apply_decision(parse_state("[0/6]-[]"), STA, 3, 0)

    def test_disallowed_size(self):
        with pytest.raises(ValidationError, match="size"):
            apply_decision(parse_state("[0/0]-[]"), STA, 2, 0)

    def test_dlts_out_of_range(self):
        with pytest.raises(ValidationError, match="dlts"):
            apply_decision(parse_state("[0/0]-[]"), STA, 3, 4)

    def test_stop_never_applies(self):
        with pytest.raises(InfeasibleDecisionError):
            apply_decision(parse_state("[0/0]-[]"), STOP, 3, 0)


def _has_successor(state, decision, config):
    for size in config.cohort_sizes:
        for dlts in range(size + 1):
            try:
                apply_decision(state, decision, size, dlts, config)
                return True
            except (InfeasibleDecisionError, ValidationError):
                continue
    return False


class TestInfeasible:
    def test_escalate_above_top(self):
        assert infeasible(parse_state("[0/3,0/3,0/3]-[]"), ESC) is True

    def test_stay_at_full_dose(self):
        assert infeasible(parse_state("[0/6]-[2/6]"), STA) is True

    def test_escalate_with_room(self):
        assert infeasible(parse_state("[0/3]-[0/0]"), ESC) is False

    @pytest.mark.parametrize("config", [DEFAULT_CONFIG, ROLLING_CONFIG])
    def test_complementary_to_successor_existence(self, config):
        # exhaustive over all valid one- and two-dose states
        states = [EscalationState(lower=(a,), higher=()) for a in ALL_VALID_TALLIES]
        for a, b in itertools.product(ALL_VALID_TALLIES, repeat=2):
            states.append(EscalationState(lower=(a,), higher=(b,)))
            states.append(EscalationState(lower=(a, b), higher=()))
        for state in states:
            for decision in (ESC, STA, DES):
                assert infeasible(state, decision, config) == (
                    not _has_successor(state, decision, config)
                ), (state, decision)


class TestDecisionHistories:
    def test_escalate_pairs_higher_outcomes_with_current_prior(self):
        got = decision_histories(parse_state("[0/3]-[0/0,0/0]"), ESC)
        assert got == [
            DecisionHistory(q(3, 3), q(0, 3)),
            DecisionHistory(q(2, 3), q(0, 3)),
            DecisionHistory(q(1, 3), q(0, 3)),
            DecisionHistory(q(0, 3), q(0, 3)),
        ]

    def test_stay_prior_equals_enrolled(self):
        got = decision_histories(parse_state("[1/3]-[0/0]"), STA)
        assert got == [
            DecisionHistory(q(4, 6), q(1, 3)),
            DecisionHistory(q(3, 6), q(1, 3)),
            DecisionHistory(q(2, 6), q(1, 3)),
            DecisionHistory(q(1, 6), q(1, 3)),
        ]

    def test_deescalate_enrolls_the_dose_below(self):
        got = decision_histories(parse_state("[2/6,0/3]-[]"), DES)
        assert got == [
            DecisionHistory(q(3, 6), q(2, 6)),
            DecisionHistory(q(2, 6), q(2, 6)),
            DecisionHistory(q(1, 6), q(2, 6)),
            DecisionHistory(q(0, 6), q(2, 6)),
        ]

    def test_structurally_impossible_decision(self):
        with pytest.raises(InfeasibleDecisionError):
            decision_histories(parse_state("[0/3]-[]"), ESC)


class TestRegrets:
    def test_justified_escalation_is_not_regretted(self):
        assert regrets(ESC, DecisionHistory(result=q(3, 3), prior=q(0, 3))) is False

    def test_unjustified_escalation_regretted_whatever_happens(self):
        for result in ALL_VALID_TALLIES:
            assert regrets(ESC, DecisionHistory(result=result, prior=q(1, 3))) is True

    def test_deescalation_regretted_on_very_low_net_toxicity(self):
        assert regrets(DES, DecisionHistory(result=q(0, 6), prior=q(1, 6))) is True

    def test_stop_has_no_clauses(self):
        with pytest.raises(ValueError):
            regrets(STOP, DecisionHistory(result=q(0, 3), prior=q(0, 3)))

    def test_matches_direct_transcription_pairwise(self):
        # direct transcription of the three reified disjunctions over
        # (N0, N, T0, T), checked pair for pair across the whole domain
        def esc_disjunction(n0, n, t0, t):
            return (0 == 1) or (not (n0 >= 3 and t0 * 6 <= n0)) or (t >= 5)

        def sta_disjunction(n0, n, t0, t):
            return (0 == 1) or (t >= 5)

        def des_disjunction(n0, n, t0, t):
            return (
                (0 == 1)
                or (t0 <= 1 and n0 >= 3 and (n > 0 and t * 6 < n))
                or (t >= 5)
            )

        transcribed = {ESC: esc_disjunction, STA: sta_disjunction, DES: des_disjunction}
        for prior, result in itertools.product(ALL_VALID_TALLIES, repeat=2):
            history = DecisionHistory(result=result, prior=prior)
            for decision, disjunction in transcribed.items():
                assert regrets(decision, history) == disjunction(
                    prior.n, result.n, prior.t, result.t
                ), (decision, history)


class TestRegrettable:
    def test_escalating_from_unenrolled_start(self):
        assert regrettable(parse_state("[0/0]-[0/0,0/0]"), ESC) is True

    def test_staying_at_fresh_start(self):
        assert regrettable(parse_state("[0/0]-[0/0,0/0]"), STA) is False

    def test_staying_at_two_of_three(self):
        assert regrettable(parse_state("[2/3]-[0/0]"), STA) is True

    def test_structurally_impossible_decision_raises(self):
        with pytest.raises(InfeasibleDecisionError):
            regrettable(parse_state("[0/3]-[0/0]"), DES)


class TestNextDecision:
    def test_top_dose_all_clear_stays(self):
        assert next_decision(parse_state("[0/3,0/3,0/3]-[]")) is STA

    def test_one_of_six_with_fresh_dose_above_escalates(self):
        assert next_decision(parse_state("[1/6]-[0/0,0/0]")) is ESC

    def test_two_of_three_at_bottom_stops(self):
        assert next_decision(parse_state("[2/3]-[0/0]")) is STOP

    def test_total_over_all_single_dose_states(self):
        for tally in ALL_VALID_TALLIES:
            state = EscalationState(lower=(tally,), higher=())
            assert next_decision(state) in (ESC, STA, DES, STOP)

    def test_no_current_dose_stops(self):
        state = EscalationState(lower=(), higher=(q(0, 0),))
        assert next_decision(state) is STOP

    def test_anticipation_soundness(self):
        # a decision declared regret-free must stay regret-free for every
        # outcome an enrollment can actually realize
        from dosepath import enrolled_dose_tally, reachable_states, all_zero_state

        for config in (DEFAULT_CONFIG, ROLLING_CONFIG):
            for state in reachable_states(all_zero_state(3, config), config):
                for decision in (ESC, STA, DES):
                    if infeasible(state, decision, config):
                        continue
                    if regrettable(state, decision, config):
                        continue
                    target = enrolled_dose_tally(state, decision)
                    prior = state.current
                    for realized in enroll_transitions(target, config):
                        history = DecisionHistory(result=realized, prior=prior)
                        assert not regrets(decision, history, config.regret_rules)


class TestStopRecommendation:
    def test_no_current_dose_recommends_nothing(self):
        assert stop_recommendation(EscalationState(lower=(), higher=(q(2, 6),))) == 0

    def test_toxic_bottom_dose_recommends_nothing(self):
        assert stop_recommendation(parse_state("[3/6]-[2/6]")) == 0

    def test_tolerable_current_dose_recommended(self):
        assert stop_recommendation(parse_state("[1/6,0/3]-[]")) == 2

    def test_rate_boundary(self):
        assert stop_recommendation(parse_state("[1/6]-[]")) == 1  # 6 <= 6
        assert stop_recommendation(parse_state("[2/6]-[]")) == 0  # 12 > 6

    def test_unenrolled_current_dose_falls_into_tolerable_branch(self):
        # not reachable by any transition sequence; pinned behavior only
        assert stop_recommendation(parse_state("[0/0]-[]")) == 1


class TestCustomRules:
    def test_without_cap_lets_two_of_three_proceed(self):
        nocap = ProtocolConfig(regret_rules=RegretRuleSet.default().without_dlt_cap())
        assert next_decision(parse_state("[2/3]-[0/0]"), nocap) is STA

    def test_rule_thresholds_are_parameters(self):
        from dosepath import ExcessToxicity, UnjustifiedEscalation

        tight = RegretRuleSet(
            escalate=(UnjustifiedEscalation(min_prior_enrollment=6), ExcessToxicity()),
            stay=(ExcessToxicity(),),
            deescalate=(ExcessToxicity(),),
        )
        config = ProtocolConfig(regret_rules=tight)
        # 0/3 no longer justifies escalation when 6 priors are demanded
        assert next_decision(parse_state("[0/3]-[0/0]"), config) is STA


def test_validate_tally_is_reused_by_engine_boundaries():
    with pytest.raises(ValidationError):
        anticipated_tallies(Tally(5, 3))
    assert validate_tally(0, 6).n == 6
