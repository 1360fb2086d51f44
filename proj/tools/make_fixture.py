#!/usr/bin/env python3
# Copyright 2026 The topicsent Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the deterministic test fixtures under tests/data.

fixture_comments.jsonl: 1000 synthetic comments over 10 subreddits.
fixture_glove50.txt: 50-d vectors for most fixture words (a few left out
so coverage < 1).
"""
import json
import math
import pathlib
import random

SUBREDDITS = [
    "Coronavirus", "COVID19", "China_Flu", "news", "worldnews",
    "politics", "science", "Health", "AskReddit", "CoronavirusUS",
]

TOPICS = {
    "masks": "mask masks wear wearing n95 surgical face cloth cover public".split(),
    "vaccine": "vaccine vaccines trial trials pfizer moderna dose doses shot immunity".split(),
    "lockdown": "lockdown quarantine stay home shut closed schools business travel ban".split(),
    "testing": "test tests testing positive cases confirmed results lab swab kits".split(),
    "hospital": "hospital icu beds ventilators nurses doctors patients staff care ward".split(),
    "economy": "economy jobs market stocks unemployment stimulus money rent bills workers".split(),
    "china": "china wuhan outbreak province market origin government report early spread".split(),
    "symptoms": "fever cough symptoms breathing loss taste smell tired sick recovery".split(),
}

POSITIVE = ["hope", "loved", "safe", "magnificent", "luck", "kind"]
NEGATIVE = ["greed", "prejudice", "racism", "hate", "kill", "concerned", "refused", "fucks", "bullshit", "scary"]
BOOSTERS = ["really", "fucking", "would"]
FILLER = "the a is was it this that we they people everyone think just time day week news".split()


def sentence(rng, topic):
    words = rng.sample(TOPICS[topic], 4) + rng.sample(FILLER, 3)
    roll = rng.random()
    if roll < 0.30:
        words.insert(rng.randrange(len(words) + 1), rng.choice(POSITIVE))
    elif roll < 0.60:
        words.insert(rng.randrange(len(words) + 1), rng.choice(NEGATIVE))
    if rng.random() < 0.15:
        pos = rng.choice(POSITIVE) if rng.random() < 0.5 else rng.choice(NEGATIVE)
        words += [rng.choice(BOOSTERS), pos]
    if rng.random() < 0.10:
        pool = POSITIVE if rng.random() < 0.5 else NEGATIVE
        a, b = rng.sample(pool, 2)
        words += [a, b]
    return " ".join(words)


def comment(rng, i):
    topic = rng.choice(sorted(TOPICS))
    n = rng.randint(1, 3)
    sents = [sentence(rng, topic if rng.random() < 0.8 else rng.choice(sorted(TOPICS))) for _ in range(n)]
    text = ". ".join(s.capitalize() for s in sents) + rng.choice([".", "!", "?", ""])
    if rng.random() < 0.05:
        text += " see https://example.org/story/" + str(i)
    if rng.random() < 0.03:
        text = "<p>" + text + "</p> &amp; more"
    return text


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"
    root.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20200311)
    with open(root / "fixture_comments.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for i in range(1000):
            rec = {
                "id": "c%04d" % i,
                "subreddit": SUBREDDITS[i % len(SUBREDDITS)],
                "created_utc": 1583900000 + 37 * i,
                "body": comment(rng, i),
            }
            f.write(json.dumps(rec, sort_keys=True) + "\n")

    vocab = sorted({w for ws in TOPICS.values() for w in ws} | set(POSITIVE) | set(NEGATIVE) | set(BOOSTERS) | set(FILLER))
    left_out = set(vocab[::17])
    vrng = random.Random(50)
    with open(root / "fixture_glove50.txt", "w", encoding="utf-8", newline="\n") as f:
        for w in vocab:
            if w in left_out:
                continue
            vec = [vrng.gauss(0.0, 1.0) for _ in range(50)]
            norm = math.sqrt(sum(v * v for v in vec))
            f.write(w + " " + " ".join("%.5f" % (v / norm) for v in vec) + "\n")


if __name__ == "__main__":
    main()
