// Copyright 2026 The topicsent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <random>

#include "golden.hpp"
#include "topicsent/sentiment.hpp"
#include "topicsent/util.hpp"

using namespace topicsent;
using namespace topicsent::sentiment;
using golden::kGolden;

TEST_CASE("reference comments reproduce their traces and scores") {
  const auto lex = Lexicon::seed();
  for (const auto& g : kGolden) {
    CAPTURE(g.text);
    const auto r = score_text(g.text, lex);
    CHECK(r.positive == g.p);
    CHECK(r.negative == g.n);
    CHECK(r.polarity == g.polarity);
    CHECK(r.trace() == g.trace);
  }
}

TEST_CASE("sentence scores of the multi-sentence comments") {
  const auto lex = Lexicon::seed();
  auto r = score_text(kGolden[1].text, lex);
  REQUIRE(r.sentences.size() == 2);
  CHECK(r.sentences[0] == SentenceScore{4, -1});
  CHECK(r.sentences[1] == SentenceScore{3, -1});
  r = score_text(kGolden[5].text, lex);
  REQUIRE(r.sentences.size() == 2);
  CHECK(r.sentences[0] == SentenceScore{1, -3});
  CHECK(r.sentences[1] == SentenceScore{1, -4});
}

TEST_CASE("polarity grid over all 25 score pairs") {
  int pos = 0, neg = 0, neu = 0;
  for (int p = 1; p <= 5; ++p)
    for (int n = -5; n <= -1; ++n) {
      const Polarity expected = p > -n ? Polarity::positive : (p < -n ? Polarity::negative : Polarity::neutral);
      CHECK(polarity(p, n) == expected);
      pos += expected == Polarity::positive;
      neg += expected == Polarity::negative;
      neu += expected == Polarity::neutral;
    }
  CHECK(pos == 10);
  CHECK(neg == 10);
  CHECK(neu == 5);
  CHECK(polarity(3, -3) == Polarity::neutral);
  CHECK(polarity(4, -2) == Polarity::positive);
  CHECK_THROWS_AS(polarity(0, -1), InputError);
  CHECK_THROWS_AS(polarity(1, 0), InputError);
  CHECK_THROWS_AS(polarity(6, -1), InputError);
}

TEST_CASE("five-class labels") {
  CHECK(label5(5, -1) == Label5::very_positive);
  CHECK(label5(4, -3) == Label5::very_positive);
  CHECK(label5(3, -1) == Label5::positive);
  CHECK(label5(2, -2) == Label5::neutral);
  CHECK(label5(1, -2) == Label5::negative);
  CHECK(label5(1, -4) == Label5::very_negative);
  CHECK(label5(2, -5) == Label5::very_negative);
  for (int l = 0; l < kNumLabels; ++l) {
    const auto lab = static_cast<Label5>(l);
    CHECK(parse_label5(to_string(lab)) == lab);
  }
}

TEST_CASE("empty and neutral comments") {
  const auto lex = Lexicon::seed();
  auto r = score_text("", lex);
  CHECK(r.positive == 1);
  CHECK(r.negative == -1);
  CHECK(r.polarity == Polarity::neutral);
  CHECK(r.sentences.empty());
  r = score_text("the cat sat on the mat", lex);
  CHECK(r.positive == 1);
  CHECK(r.negative == -1);
}

TEST_CASE("scores stay in range for strong words") {
  Lexicon lex;
  lex.set_term("bliss", 4);
  lex.set_term("joy", 4);
  lex.set_term("doom", -4);
  lex.set_booster("utterly", 3);
  const auto r = score_text("utterly bliss joy. utterly doom doom", lex);
  CHECK(r.positive == 5);
  CHECK(r.negative == -5);
  for (const auto& s : r.words)
    for (const auto& w : s) {
      CHECK(w.adjusted <= 4);
      CHECK(w.adjusted >= -4);
    }
}

TEST_CASE("booster affects only the next sentiment word in the same sentence") {
  const auto lex = Lexicon::seed();
  auto r = score_text("really. hope", lex);
  CHECK(r.positive == 3);
  r = score_text("really the the hope", lex);
  CHECK(r.positive == 4);
  r = score_text("really hope hope", lex);
  REQUIRE(r.words.size() == 1);
  CHECK(r.words[0][1].adjusted == 3);
  CHECK(r.words[0][2].adjusted == 2);
}

TEST_CASE("booster changes magnitude for either polarity") {
  Lexicon lex = Lexicon::seed();
  lex.set_booster("very", 1);
  CHECK(score_text("very hate", lex).negative == -5);
  CHECK(score_text("very kind", lex).positive == 3);
  CHECK(score_text("would hate", lex).negative == -3);
}

TEST_CASE("sentence order does not change the comment score") {
  const auto lex = Lexicon::seed();
  std::vector<std::string> sentences = {"i hope loved ones", "greed prejudice racism", "scary times",
                                        "really kind people", "nothing here"};
  std::mt19937 gen(7);
  auto join = [](const std::vector<std::string>& s) {
    std::string t;
    for (const auto& x : s) t += x + ". ";
    return t;
  };
  const auto base = score_text(join(sentences), lex);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(sentences.begin(), sentences.end(), gen);
    const auto r = score_text(join(sentences), lex);
    CHECK(r.positive == base.positive);
    CHECK(r.negative == base.negative);
  }
}

TEST_CASE("raising a positive word's strength never lowers the positive score") {
  const std::vector<std::string> texts = {"i hope loved ones remain safe", "kind kind hope. luck", "safe and greed",
                                          "really safe hate"};
  for (const auto& text : texts) {
    for (const char* word : {"hope", "safe", "kind", "luck", "loved"}) {
      Lexicon lex = Lexicon::seed();
      int prev = score_text(text, lex).positive;
      for (int s = lex.strength(word) + 1; s <= 4; ++s) {
        lex.set_term(word, s);
        const int now = score_text(text, lex).positive;
        CHECK(now >= prev);
        prev = now;
      }
    }
  }
}

TEST_CASE("lexicon files and validation") {
  Lexicon lex;
  CHECK_THROWS_AS(lex.set_term("x", 5), InputError);
  CHECK_THROWS_AS(lex.set_term("x", 0), InputError);
  CHECK_THROWS_AS(lex.set_booster("x", 0), InputError);
  const auto dir = std::filesystem::temp_directory_path() / "topicsent_lexicon_test";
  std::filesystem::create_directories(dir);
  write_file(dir / "terms.tsv", "# comment\ngood\t2\nbad\t-3\n");
  write_file(dir / "boost.tsv", "very\t1\n");
  lex.load_terms(dir / "terms.tsv");
  lex.load_boosters(dir / "boost.tsv");
  CHECK(lex.strength("good") == 2);
  CHECK(lex.strength("bad") == -3);
  CHECK(lex.strength("neutral") == 0);
  CHECK(lex.booster("very") == 1);
  write_file(dir / "bad.tsv", "good\tlots\n");
  CHECK_THROWS_AS(lex.load_terms(dir / "bad.tsv"), InputError);
  CHECK_THROWS_AS(lex.load_terms(dir / "missing.tsv"), InputError);
}

TEST_CASE("corpus labeling and distribution") {
  std::vector<RawComment> corpus = {
      {"a", "news", 0, "I hope loved ones remain safe healthy.", false},
      {"b", "news", 0, "scary times", false},
      {"c", "science", 0, "nothing to see", false},
      {"d", "science", 0, "", true},
  };
  const auto labels = label_corpus(corpus, Lexicon::seed(), true);
  REQUIRE(labels.comments.size() == 4);
  CHECK(labels.overall.total == 4);
  CHECK(labels.overall.polarity[static_cast<int>(Polarity::positive)] == 1);
  CHECK(labels.overall.polarity[static_cast<int>(Polarity::negative)] == 1);
  CHECK(labels.overall.polarity[static_cast<int>(Polarity::neutral)] == 2);
  CHECK(labels.by_subreddit.size() == 2);
  CHECK(labels.by_subreddit.at("news").total == 2);

  const auto round = CorpusLabels::parse_csv(labels.to_csv());
  REQUIRE(round.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(round[i].id == labels.comments[i].id);
    CHECK(round[i].positive == labels.comments[i].positive);
    CHECK(round[i].negative == labels.comments[i].negative);
    CHECK(round[i].label == labels.comments[i].label);
  }
  CHECK(labels.comments[0].trace.find("MultiplePositiveWords") != std::string::npos);
  CHECK_THROWS_AS(label_corpus({}, Lexicon::seed()), InputError);
}
