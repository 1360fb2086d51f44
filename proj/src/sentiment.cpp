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

#include "topicsent/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "json.hpp"
#include "topicsent/util.hpp"

namespace topicsent::sentiment {
namespace {

int parse_int(std::string_view s, const std::string& where) {
  s = trim(s);
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("expected an integer at " + where + ", got '" + std::string(s) + "'");
  return v;
}

template <typename Fn>
void for_each_entry(const std::filesystem::path& path, Fn&& fn) {
  const std::string text = read_file(path);
  std::size_t lineno = 0;
  for (auto line : split(text, '\n')) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    auto f = split(line, '\t');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (f.size() != 2) throw InputError("expected term<TAB>value at " + where);
    fn(std::string(trim(f[0])), parse_int(f[1], where));
  }
}

int sign(int v) { return (v > 0) - (v < 0); }

}  // namespace

Lexicon Lexicon::seed() {
  Lexicon lex;
  for (auto [term, s] : std::initializer_list<std::pair<const char*, int>>{
           {"hope", 2},       {"loved", 3},     {"safe", 1},      {"magnificent", 3},
           {"luck", 2},       {"greed", -2},    {"prejudice", -2}, {"racism", -1},
           {"hate", -3},      {"kill", -1},     {"concerned", -1}, {"refused", -1},
           {"fucks", -2},     {"bullshit", -2}, {"scary", -3},    {"kind", 1}})
    lex.set_term(term, s);
  lex.set_booster("really", 1);
  lex.set_booster("fucking", 2);
  lex.set_booster("would", -1);
  return lex;
}

void Lexicon::set_term(std::string term, int strength) {
  if (strength == 0 || strength < -4 || strength > 4)
    throw InputError("lexicon strength for '" + term + "' must be in [-4,-1] or [1,4]");
  terms_[std::move(term)] = strength;
}

void Lexicon::set_booster(std::string term, int delta) {
  if (delta == 0) throw InputError("booster delta for '" + term + "' must be nonzero");
  boosters_[std::move(term)] = delta;
}

void Lexicon::load_terms(const std::filesystem::path& path) {
  for_each_entry(path, [&](std::string term, int v) { set_term(std::move(term), v); });
}

void Lexicon::load_boosters(const std::filesystem::path& path) {
  for_each_entry(path, [&](std::string term, int v) { set_booster(std::move(term), v); });
}

int Lexicon::strength(std::string_view term) const {
  auto it = terms_.find(std::string(term));
  return it == terms_.end() ? 0 : it->second;
}

std::optional<int> Lexicon::booster(std::string_view term) const {
  auto it = boosters_.find(std::string(term));
  if (it == boosters_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::negative: return "negative";
    case Polarity::neutral: return "neutral";
  }
  return "neutral";
}

std::string_view to_string(Label5 l) {
  switch (l) {
    case Label5::very_negative: return "very_negative";
    case Label5::negative: return "negative";
    case Label5::neutral: return "neutral";
    case Label5::positive: return "positive";
    case Label5::very_positive: return "very_positive";
  }
  return "neutral";
}

std::optional<Label5> parse_label5(std::string_view s) {
  for (int i = 0; i < kNumLabels; ++i)
    if (to_string(static_cast<Label5>(i)) == s) return static_cast<Label5>(i);
  return std::nullopt;
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  for (auto p : {Polarity::positive, Polarity::negative, Polarity::neutral})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

std::vector<ScoredWord> score_words(const Sentence& sentence, const Lexicon& lexicon) {
  std::vector<ScoredWord> out;
  out.reserve(sentence.size());
  int pending_booster = 0;  // boosters are nonzero, so 0 means none
  bool multiple_used[2] = {false, false};  // [negative, positive]

  for (std::size_t i = 0; i < sentence.size(); ++i) {
    ScoredWord w;
    w.token = sentence[i];
    w.base = lexicon.strength(w.token);
    if (w.base == 0) {
      if (auto b = lexicon.booster(w.token)) pending_booster = *b;
      w.adjusted = 0;
      out.push_back(std::move(w));
      continue;
    }
    const int s = sign(w.base);
    // Booster deltas change magnitude: +2 makes a -2 word -4.
    if (pending_booster) {
      w.modifiers.push_back({std::string(kBooster), pending_booster * s});
      pending_booster = 0;
    }
    const bool& used = multiple_used[s > 0];
    if (!used && i > 0 && sign(out[i - 1].base) == s && out[i - 1].token != w.token) {
      w.modifiers.push_back({std::string(kMultipleWords), s});
      multiple_used[s > 0] = true;
    }
    int adjusted = w.base;
    for (const auto& m : w.modifiers) adjusted += m.delta;
    w.adjusted = s > 0 ? std::clamp(adjusted, 0, 4) : std::clamp(adjusted, -4, 0);
    out.push_back(std::move(w));
  }
  return out;
}

SentenceScore score_sentence(const std::vector<ScoredWord>& words) {
  int max_pos = 0, min_neg = 0;
  for (const auto& w : words) {
    max_pos = std::max(max_pos, w.adjusted);
    min_neg = std::min(min_neg, w.adjusted);
  }
  return {clamp_positive(1 + max_pos), clamp_negative(-1 + min_neg)};
}

Polarity polarity(int p, int n) {
  if (p < 1 || p > 5 || n > -1 || n < -5)
    throw InputError("sentiment scores out of range: (" + std::to_string(p) + "," + std::to_string(n) + ")");
  const int mag = -n;
  if (p > mag) return Polarity::positive;
  if (mag > p) return Polarity::negative;
  return Polarity::neutral;
}

Label5 label5(int p, int n) {
  switch (polarity(p, n)) {
    case Polarity::positive: return p >= kVeryThreshold ? Label5::very_positive : Label5::positive;
    case Polarity::negative: return -n >= kVeryThreshold ? Label5::very_negative : Label5::negative;
    case Polarity::neutral: break;
  }
  return Label5::neutral;
}

SentimentResult score_comment(const std::vector<Sentence>& sentences, const Lexicon& lexicon,
                              std::string id) {
  SentimentResult r;
  r.id = std::move(id);
  for (const auto& s : sentences) {
    r.words.push_back(score_words(s, lexicon));
    r.sentences.push_back(score_sentence(r.words.back()));
    r.positive = std::max(r.positive, r.sentences.back().positive);
    r.negative = std::min(r.negative, r.sentences.back().negative);
  }
  r.polarity = polarity(r.positive, r.negative);
  r.label = label5(r.positive, r.negative);
  return r;
}

SentimentResult score_text(std::string_view text, const Lexicon& lexicon, std::string id) {
  return score_comment(tokenize_sentences(text, nullptr), lexicon, std::move(id));
}

std::string SentimentResult::trace() const {
  std::string out;
  for (std::size_t s = 0; s < words.size(); ++s) {
    if (s) out.push_back(' ');
    for (const auto& w : words[s]) {
      out += w.token + "[" + std::to_string(w.base) + "]";
      for (const auto& m : w.modifiers)
        out += "[" + std::string(m.delta > 0 ? "+" : "") + std::to_string(m.delta) + " " + m.name + "]";
      out.push_back(' ');
    }
    out += "[[Sentence=" + std::to_string(sentences[s].negative) + "," +
           std::to_string(sentences[s].positive) + "=word max, 1-5]]";
  }
  out += "[[[" + std::to_string(positive) + "," + std::to_string(negative) + " max of sentences]]]";
  return out;
}

void Distribution::add(const SentimentResult& r) {
  ++total;
  ++polarity[static_cast<std::size_t>(r.polarity)];
  ++label[static_cast<std::size_t>(r.label)];
}

std::string CorpusLabels::to_csv() const {
  std::string out = "id,subreddit,p,n,polarity,label5\n";
  for (const auto& c : comments) {
    out += csv_field(c.id) + "," + csv_field(c.subreddit) + "," + std::to_string(c.positive) + "," +
           std::to_string(c.negative) + "," + std::string(to_string(c.polarity)) + "," +
           std::string(to_string(c.label)) + "\n";
  }
  return out;
}

namespace {

nlohmann::ordered_json distribution_to_json(const Distribution& d) {
  auto pct = [&](std::size_t n) { return d.total ? 100.0 * static_cast<double>(n) / static_cast<double>(d.total) : 0.0; };
  nlohmann::ordered_json j;
  j["total"] = d.total;
  nlohmann::ordered_json pol, lab;
  for (auto p : {Polarity::positive, Polarity::negative, Polarity::neutral}) {
    const auto n = d.polarity[static_cast<std::size_t>(p)];
    pol[std::string(to_string(p))] = {{"count", n}, {"pct", pct(n)}};
  }
  for (int i = kNumLabels - 1; i >= 0; --i) {
    const auto n = d.label[static_cast<std::size_t>(i)];
    lab[std::string(to_string(static_cast<Label5>(i)))] = {{"count", n}, {"pct", pct(n)}};
  }
  j["polarity"] = std::move(pol);
  j["label5"] = std::move(lab);
  return j;
}

}  // namespace

std::string CorpusLabels::distribution_json() const {
  nlohmann::ordered_json j;
  j["label5_rule"] = "neutral when p == |n|; very_* when the winning score >= " + std::to_string(kVeryThreshold);
  j["overall"] = distribution_to_json(overall);
  nlohmann::ordered_json subs = nlohmann::ordered_json::object();
  for (const auto& [name, d] : by_subreddit) subs[name] = distribution_to_json(d);
  j["by_subreddit"] = std::move(subs);
  return j.dump(1) + "\n";
}

std::vector<LabeledComment> CorpusLabels::parse_csv(std::string_view text) {
  auto rows = topicsent::parse_csv(text);
  if (rows.empty()) throw InputError("labeled CSV is empty");
  const std::vector<std::string> header{"id", "subreddit", "p", "n", "polarity", "label5"};
  if (rows[0] != header) throw InputError("labeled CSV header must be id,subreddit,p,n,polarity,label5");
  std::vector<LabeledComment> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string where = "labeled CSV record " + std::to_string(i + 1);
    if (r.size() != 6) throw InputError("wrong field count in " + where);
    LabeledComment c;
    c.id = r[0];
    c.subreddit = r[1];
    c.positive = parse_int(r[2], where);
    c.negative = parse_int(r[3], where);
    auto pol = parse_polarity(r[4]);
    auto lab = parse_label5(r[5]);
    if (!pol || !lab) throw InputError("unknown polarity or label in " + where);
    c.polarity = *pol;
    c.label = *lab;
    out.push_back(std::move(c));
  }
  return out;
}

CorpusLabels label_corpus(const std::vector<RawComment>& corpus, const Lexicon& lexicon, bool keep_traces) {
  if (corpus.empty()) throw InputError("cannot label an empty corpus");
  CorpusLabels out;
  out.comments.reserve(corpus.size());
  for (const auto& c : corpus) {
    auto r = score_text(c.body, lexicon, c.id);
    out.overall.add(r);
    out.by_subreddit[c.subreddit].add(r);
    LabeledComment lc{c.id, c.subreddit, r.positive, r.negative, r.polarity, r.label, {}};
    if (keep_traces) lc.trace = r.trace();
    out.comments.push_back(std::move(lc));
  }
  return out;
}

}  // namespace topicsent::sentiment
