"""Writes tests/data/replay_events.log: a synthetic usage log whose totals are
fixed below. Standalone; does not use the C++ code."""
import random
import uuid
from datetime import datetime, timedelta, timezone
from pathlib import Path

SESSIONS = 55
TABS = {"resume": 75, "career-services": 62, "mindfulness": 61, "translator": 54,
        "common-questions": 75, "locator": 45}
QUESTIONS = {"finding-a-job": 10, "resume-cv-creation": 15, "common-question-type": 13,
             "preparing-for-an-interview": 5, "emotional-support": 3,
             "questions-asked-in-error": 20}
RESUMES = 17
AJC = 15
AUDIO = {"en": 161, "es": 139, "fr": 118, "ar": 116}
OTHER_PANELS = {"salaries-and-wages": 9, "training": 7, "unemployment": 4, "skills-gaps": 3}
BUTTONS = {"chat-open": 48, "chat-send": 66, "phrase-category": 120, "faq-expand": 70,
           "resume-build": 25, "locator-search": 30}
LINKS = {"locator-map": 21, "mindfulness-video": 33, "faq-resource": 12}


def main():
    rng = random.Random(20240415)
    sessions = [str(uuid.UUID(int=rng.getrandbits(128), version=4)) for _ in range(SESSIONS)]
    events = [(s, "tab_opened", "resume") for s in sessions]  # every session appears
    remaining_tabs = dict(TABS)
    remaining_tabs["resume"] -= SESSIONS
    assert remaining_tabs["resume"] >= 0

    def spread(kind, counts):
        for target, n in counts.items():
            for _ in range(n):
                events.append((rng.choice(sessions), kind, target))

    spread("tab_opened", remaining_tabs)
    spread("question_submitted", QUESTIONS)
    spread("resume_generated", {"resume-builder": RESUMES})
    spread("career_panel_opened", {"american-job-center": AJC, **OTHER_PANELS})
    spread("audio_played", AUDIO)
    spread("button_clicked", BUTTONS)
    spread("link_accessed", LINKS)

    start = datetime(2024, 4, 15, 9, 0, tzinfo=timezone.utc)
    stamps = sorted(start + timedelta(milliseconds=rng.randrange(21 * 86400 * 1000))
                    for _ in events)
    rng.shuffle(events)
    lines = []
    for ts, (session, kind, target) in zip(stamps, events):
        stamp = ts.strftime("%Y%m%dT%H%M%S.") + f"{ts.microsecond // 1000:03d}Z"
        lines.append(f"{stamp}\t{session}\t{kind}\t{target}\n")
    out = Path(__file__).resolve().parent.parent / "data" / "replay_events.log"
    out.write_text("".join(lines), encoding="utf-8")
    print(f"{len(lines)} events -> {out}")


if __name__ == "__main__":
    main()
