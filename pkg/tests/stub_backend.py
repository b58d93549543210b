"""Minimal external backend answering from a fixed table, for tests."""

import json
import sys

CLUBS = [{"value": "santos", "predicates": ["footballPlayer.team"]},
         {"value": "barcelona", "predicates": ["footballPlayer.team"]},
         {"value": "psg", "predicates": ["footballPlayer.team"]}]

ANSWERS = {
    "where did neymar play?": CLUBS,
    "which teams did neymar play for?": CLUBS,
    "who was the first spouse of julia roberts?": [
        {"value": "lyle_lovett", "predicates": ["marriage.spouse"]},
        {"value": "danny_moder", "predicates": ["marriage.spouse"]}],
    "when neymar joined barcelona?": [
        {"value": "2013-06-03",
         "predicates": ["footballPlayer.team.joinedOnDate"]}],
    "bad date?": [{"value": "2013-13-01", "predicates": []}],
}


def main():
    for line in sys.stdin:
        request = json.loads(line)
        if request["question"] == "garbage?":
            print("not json", flush=True)
            continue
        if request["question"] == "wrong id?":
            print(json.dumps({"id": "other", "answers": []}), flush=True)
            continue
        print(json.dumps({"id": request["id"],
                          "answers": ANSWERS.get(request["question"], [])}),
              flush=True)


if __name__ == "__main__":
    main()
