"""Engagement analytics over a bundled synthetic campaign log: registration
funnel, recording durations, and how concentrated participation is."""

from vocalize import analytics
from vocalize.fixtures import wearedevelopers_log


def main() -> None:
    events = wearedevelopers_log()
    report = analytics.funnel_report(events)
    print("funnel")
    print(f"  potential leads        {report.potential_leads}")
    print(f"  leads                  {report.leads_pct}%")
    print(f"  participants           {report.participants_pct}%")
    print(f"  recurring participants {report.recurring_pct}%")
    print(f"  message mix            {report.text_share}% text / "
          f"{report.audio_share}% audio")

    total_s, median_s, count = analytics.duration_stats(events)
    print(f"durations: {count} recordings, {total_s:.0f}s total, "
          f"median {median_s:.2f}s")

    fraction = analytics.concentration(events, 0.8)
    print(f"concentration: {100 * fraction:.2f}% of participants produced "
          f"80% of all recordings")
    curve = analytics.concentration_curve(events)
    print(f"curve: {len(curve.points)} points from {curve.points[0]} "
          f"to {curve.points[-1]}")


if __name__ == "__main__":
    main()
