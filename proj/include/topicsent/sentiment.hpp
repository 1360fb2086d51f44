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

#ifndef TOPICSENT_SENTIMENT_HPP_
#define TOPICSENT_SENTIMENT_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topicsent/corpus.hpp"

namespace topicsent::sentiment {

// Term strengths in [-4, -1] ∪ [1, 4] plus booster increments.
class Lexicon {
 public:
  Lexicon() = default;

  // Every word scored in the reference comment traces, with its base
  // strength, and the three boosters those traces use.
  static Lexicon seed();
  // `term<TAB>strength` lines; '#' comments. Later entries override.
  void load_terms(const std::filesystem::path& path);
  // `term<TAB>delta` lines.
  void load_boosters(const std::filesystem::path& path);

  void set_term(std::string term, int strength);
  void set_booster(std::string term, int delta);

  int strength(std::string_view term) const;            // 0 when absent
  std::optional<int> booster(std::string_view term) const;

  std::size_t term_count() const { return terms_.size(); }
  std::size_t booster_count() const { return boosters_.size(); }

 private:
  std::unordered_map<std::string, int> terms_;
  std::unordered_map<std::string, int> boosters_;
};

struct Modifier {
  std::string name;
  int delta = 0;
};

struct ScoredWord {
  std::string token;
  int base = 0;
  std::vector<Modifier> modifiers;
  int adjusted = 0;
};

struct SentenceScore {
  int positive = 1;   // [1, 5]
  int negative = -1;  // [-5, -1]
  bool operator==(const SentenceScore&) const = default;
};

enum class Polarity { positive, negative, neutral };

// Class order used by the classifiers.
enum class Label5 { very_negative = 0, negative = 1, neutral = 2, positive = 3, very_positive = 4 };
inline constexpr int kNumLabels = 5;

std::string_view to_string(Polarity p);
std::string_view to_string(Label5 l);
std::optional<Label5> parse_label5(std::string_view s);
std::optional<Polarity> parse_polarity(std::string_view s);

inline constexpr std::string_view kMultipleWords = "MultiplePositiveWords";
inline constexpr std::string_view kBooster = "LastWordBoosterStrength";

// Base strengths, then two rules:
//  - a booster moves the magnitude of the next sentiment-bearing word of the
//    sentence by its delta (an unconsumed booster expires at sentence end);
//  - the second word of the first adjacent pair of distinct same-polarity
//    words gets +1 (positive) or -1 (negative), once per polarity.
// Adjusted strengths are clamped to [0, 4] for positive words and [-4, 0]
// for negative ones.
std::vector<ScoredWord> score_words(const Sentence& sentence, const Lexicon& lexicon);

// (1 + max positive, -1 + min negative), clamped to [1, 5] / [-5, -1].
SentenceScore score_sentence(const std::vector<ScoredWord>& words);

struct SentimentResult {
  std::string id;
  std::vector<std::vector<ScoredWord>> words;
  std::vector<SentenceScore> sentences;
  int positive = 1;
  int negative = -1;
  Polarity polarity = Polarity::neutral;
  Label5 label = Label5::neutral;

  // word[s][modifiers] ... [[Sentence=n,p=word max, 1-5]] ... [[[p,n max of sentences]]]
  std::string trace() const;
};

// Max of sentence positives, min of sentence negatives; (1, -1) when there
// are no sentences.
SentimentResult score_comment(const std::vector<Sentence>& sentences, const Lexicon& lexicon,
                              std::string id = {});
// Sentence split and tokenization without stop-word removal, then scoring.
SentimentResult score_text(std::string_view text, const Lexicon& lexicon, std::string id = {});

// Throws InputError unless p ∈ [1, 5] and n ∈ [-5, -1].
Polarity polarity(int p, int n);
// Neutral when p == |n|; otherwise very_* when the winning side is >= 4.
Label5 label5(int p, int n);
inline constexpr int kVeryThreshold = 4;

inline int clamp_positive(int p) { return p < 1 ? 1 : (p > 5 ? 5 : p); }
inline int clamp_negative(int n) { return n > -1 ? -1 : (n < -5 ? -5 : n); }

struct Distribution {
  std::size_t total = 0;
  std::array<std::size_t, 3> polarity{};  // indexed by Polarity
  std::array<std::size_t, kNumLabels> label{};

  void add(const SentimentResult& r);
};

struct LabeledComment {
  std::string id;
  std::string subreddit;
  int positive = 1;
  int negative = -1;
  Polarity polarity = Polarity::neutral;
  Label5 label = Label5::neutral;
  std::string trace;  // filled only when traces are requested
};

struct CorpusLabels {
  std::vector<LabeledComment> comments;
  Distribution overall;
  std::map<std::string, Distribution> by_subreddit;

  // CSV `id,subreddit,p,n,polarity,label5`.
  std::string to_csv() const;
  // Counts and percentages, overall and per subreddit.
  std::string distribution_json() const;
  static std::vector<LabeledComment> parse_csv(std::string_view text);
};

// Throws InputError on an empty corpus.
CorpusLabels label_corpus(const std::vector<RawComment>& corpus, const Lexicon& lexicon,
                          bool keep_traces = false);

}  // namespace topicsent::sentiment

#endif  // TOPICSENT_SENTIMENT_HPP_
