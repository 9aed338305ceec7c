import random
from datetime import datetime, timedelta, timezone

import pytest

from vocalize import analytics, fixtures
from vocalize.campaign import EngagementEvent, replay
from vocalize.errors import NoAttempts, NoMessages

from oracles import concentration_prefix

T0 = datetime(2024, 3, 1, tzinfo=timezone.utc)


def attempt_log(counts: dict[str, int]) -> list[EngagementEvent]:
    """Minimal log with the given per-user recording counts."""
    events = []
    seq = 0
    for uid in sorted(counts):
        seq += 1
        events.append(EngagementEvent(seq, T0, "c", uid, "inbound_text", {}))
        seq += 1
        events.append(EngagementEvent(seq, T0, "c", uid, "registered",
                                      {"contact": {}}))
    for uid, n in sorted(counts.items()):
        for i in range(n):
            seq += 1
            events.append(EngagementEvent(seq, T0 + timedelta(seconds=seq), "c", uid,
                                          "inbound_audio", {}))
            seq += 1
            events.append(EngagementEvent(
                seq, T0 + timedelta(seconds=seq), "c", uid, "attempt_scored",
                {"attempt_id": f"a{seq}", "duration_s": 1.0, "combined": 0.5,
                 "keyword": None, "shape": None, "envelope": []},
            ))
    return events


class TestFunnelReport:
    def test_wearedevelopers_golden(self):
        report = analytics.funnel_report(fixtures.wearedevelopers_log())
        assert report.potential_leads == 430
        assert report.leads_pct == 71.16
        assert report.participants_pct == 68.60
        assert report.recurring_pct == 64.42
        assert (report.text_share, report.audio_share) == (25.0, 75.0)

    def test_goto_chicago_golden(self):
        report = analytics.funnel_report(fixtures.goto_chicago_log())
        assert report.potential_leads == 35
        assert report.leads_pct == 71.43
        assert report.participants_pct == 65.71
        assert report.recurring_pct == 60.00
        assert (report.text_share, report.audio_share) == (13.0, 87.0)

    def test_empty_log(self):
        report = analytics.funnel_report([])
        assert report.potential_leads == 0
        assert report.leads_pct == 0.0

    def test_full_conversion(self):
        events = attempt_log({"a": 2, "b": 3})
        report = analytics.funnel_report(events)
        assert report.leads_pct == 100.0
        assert report.participants_pct == 100.0
        assert report.recurring_pct == 100.0

    def test_matches_replay_path(self):
        events = fixtures.goto_chicago_log()
        report = analytics.funnel_report(events)
        campaign = fixtures.demo_campaign()
        state = replay(events, campaign)
        order = ["potential_lead", "lead", "participant", "recurring_participant"]

        def pct(minimum):
            count = sum(
                1 for u in state.users.values()
                if order.index(u.funnel_state) >= order.index(minimum)
            )
            return round(100.0 * count / len(state.users), 2) if state.users else 0.0

        assert report.leads_pct == pct("lead")
        assert report.participants_pct == pct("participant")
        assert report.recurring_pct == pct("recurring_participant")

    def test_ordering_invariant(self):
        report = analytics.funnel_report(fixtures.wearedevelopers_log())
        assert 100 >= report.leads_pct >= report.participants_pct >= report.recurring_pct >= 0
        assert report.text_share + report.audio_share == pytest.approx(100, abs=0.01)

    def test_csv_export(self):
        csv = analytics.funnel_report(fixtures.goto_chicago_log()).to_csv()
        assert csv.startswith("metric,value\n")
        assert "leads_pct,71.43" in csv


class TestMessageMix:
    def test_golden_rows(self):
        assert analytics.message_mix(fixtures.wearedevelopers_log()) == (25.0, 75.0)
        assert analytics.message_mix(fixtures.goto_chicago_log()) == (13.0, 87.0)

    def test_audio_only(self):
        events = [e for e in attempt_log({"a": 2}) if e.kind != "inbound_text"]
        assert analytics.message_mix(events) == (0.0, 100.0)

    def test_no_messages(self):
        with pytest.raises(NoMessages):
            analytics.message_mix([])


class TestDurationStats:
    def test_kulendayz_golden(self):
        total, median, count = analytics.duration_stats(fixtures.kulendayz_log())
        assert count == 1257
        assert median == 2.05

    def test_single_attempt(self):
        events = attempt_log({"a": 1})
        total, median, count = analytics.duration_stats(events)
        assert (total, median, count) == (1.0, 1.0, 1)

    def test_lower_middle_for_even_counts(self):
        events = attempt_log({"a": 4})
        # overwrite durations 1,2,3,4
        scored = [e for e in events if e.kind == "attempt_scored"]
        for value, event in zip([1.0, 2.0, 3.0, 4.0], scored):
            event.payload["duration_s"] = value
        total, median, count = analytics.duration_stats(events)
        assert median == 2.0

    def test_no_attempts(self):
        with pytest.raises(NoAttempts):
            analytics.duration_stats([])


class TestConcentration:
    def test_wearedevelopers_shape(self):
        fraction = analytics.concentration(fixtures.wearedevelopers_log(), 0.8)
        assert abs(100 * fraction - 24.11) <= 0.5

    def test_uniform_distribution(self):
        events = attempt_log({f"u{i}": 3 for i in range(10)})
        assert analytics.concentration(events, 0.8) == pytest.approx(0.8, abs=0.1)

    def test_single_participant(self):
        events = attempt_log({"only": 5})
        assert analytics.concentration(events, 0.3) == 1.0

    def test_matches_prefix_sum_oracle(self):
        rng = random.Random(77)
        for _ in range(60):
            counts = {
                f"u{i:02d}": rng.randint(1, 30)
                for i in range(rng.randint(1, 40))
            }
            share = rng.uniform(0.05, 1.0)
            events = attempt_log(counts)
            assert analytics.concentration(events, share) == pytest.approx(
                concentration_prefix(counts, share)
            )

    def test_skew_never_increases_fraction(self):
        rng = random.Random(31)
        for _ in range(30):
            counts = {f"u{i:02d}": rng.randint(1, 20) for i in range(12)}
            share = 0.7
            base = analytics.concentration(attempt_log(counts), share)
            heaviest = max(counts, key=lambda k: (counts[k], k))
            lightest = min(counts, key=lambda k: (counts[k], k))
            if heaviest == lightest or counts[lightest] <= 1:
                continue
            counts[heaviest] += 1
            counts[lightest] -= 1
            skewed = analytics.concentration(attempt_log(counts), share)
            assert skewed <= base + 1e-12

    def test_curve_endpoints(self):
        curve = analytics.concentration_curve(attempt_log({"a": 3, "b": 1}))
        assert curve.points[0] == (0.0, 0.0)
        assert curve.points[-1] == (1.0, 1.0)
        xs = [p[0] for p in curve.points]
        ys = [p[1] for p in curve.points]
        assert xs == sorted(xs) and ys == sorted(ys)

    def test_curve_csv(self):
        csv = analytics.concentration_curve(attempt_log({"a": 3})).to_csv()
        assert csv.splitlines()[0] == "participant_fraction,message_fraction"

    def test_bad_share(self):
        with pytest.raises(ValueError):
            analytics.concentration(attempt_log({"a": 1}), 0.0)
