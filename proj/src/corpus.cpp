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

#include "topicsent/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "topicsent/util.hpp"

namespace topicsent {
namespace {

constexpr std::size_t kMaxMessages = 20;

void warn(IngestStats& stats, std::string msg) {
  ++stats.warnings;
  if (stats.messages.size() < kMaxMessages) stats.messages.push_back(std::move(msg));
}

bool valid_id(const std::string& id) {
  return !id.empty() && id.find_first_of("\t\r\n") == std::string::npos;
}

std::optional<std::int64_t> parse_epoch(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return static_cast<std::int64_t>(v);
}

// Shared tail of both readers: id checks, duplicate detection, empty bodies.
class RecordGate {
 public:
  RecordGate(IngestStats& stats, const CommentSink& sink) : stats_(stats), sink_(sink) {}

  void offer(RawComment&& c, std::size_t line) {
    if (!valid_id(c.id)) {
      warn(stats_, "line " + std::to_string(line) + ": missing or invalid id");
      return;
    }
    if (!seen_.insert(c.id).second) {
      warn(stats_, "line " + std::to_string(line) + ": duplicate id " + c.id);
      return;
    }
    if (c.missing_body) warn(stats_, "line " + std::to_string(line) + ": missing body");
    if (c.body.empty()) ++stats_.empty_bodies;
    ++stats_.records;
    sink_(std::move(c));
  }

 private:
  IngestStats& stats_;
  const CommentSink& sink_;
  std::unordered_set<std::string> seen_;
};

std::string json_scalar_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return format_double(v.get<double>());
  return {};
}

void ingest_jsonl(std::istream& in, IngestStats& stats, const CommentSink& sink) {
  RecordGate gate(stats, sink);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      warn(stats, "line " + std::to_string(lineno) + ": malformed JSON");
      continue;
    }
    if (!obj.is_object()) {
      warn(stats, "line " + std::to_string(lineno) + ": not a JSON object");
      continue;
    }
    RawComment c;
    if (auto it = obj.find("id"); it != obj.end()) c.id = json_scalar_to_string(*it);
    if (auto it = obj.find("subreddit"); it != obj.end() && it->is_string()) c.subreddit = *it;
    if (auto it = obj.find("created_utc"); it != obj.end()) {
      if (it->is_number()) {
        c.created_at = static_cast<std::int64_t>(it->get<double>());
        if (it->is_number_integer()) c.created_at = it->get<std::int64_t>();
      } else if (it->is_string()) {
        c.created_at = parse_epoch(it->get<std::string>()).value_or(0);
      }
    }
    auto body = obj.find("body");
    if (body == obj.end() || body->is_null()) {
      c.missing_body = true;
    } else if (body->is_string()) {
      c.body = body->get<std::string>();
    } else {
      warn(stats, "line " + std::to_string(lineno) + ": non-string body");
      continue;
    }
    gate.offer(std::move(c), lineno);
  }
}

void ingest_csv(std::istream& in, IngestStats& stats, const CommentSink& sink) {
  std::vector<std::string> header;
  std::size_t lineno = 0;
  if (!read_csv_record(in, header, lineno)) return;
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[std::string(trim(header[i]))] = i;
  if (!col.count("id")) throw InputError("CSV header lacks an 'id' column");

  auto get = [&](const std::vector<std::string>& row, const char* name) -> const std::string* {
    auto it = col.find(name);
    if (it == col.end() || it->second >= row.size()) return nullptr;
    return &row[it->second];
  };

  RecordGate gate(stats, sink);
  std::vector<std::string> row;
  while (true) {
    const std::size_t start = lineno + 1;
    if (!read_csv_record(in, row, lineno)) break;
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    if (row.size() > header.size()) {
      warn(stats, "line " + std::to_string(start) + ": too many fields");
      continue;
    }
    RawComment c;
    if (auto v = get(row, "id")) c.id = *v;
    if (auto v = get(row, "subreddit")) c.subreddit = *v;
    if (auto v = get(row, "created_utc")) c.created_at = parse_epoch(*v).value_or(0);
    if (auto v = get(row, "body")) {
      c.body = *v;
    } else {
      c.missing_body = true;
    }
    gate.offer(std::move(c), start);
  }
}

bool is_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool starts_with_icase(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Length of an apostrophe (ASCII or U+2019) at pos, or 0.
std::size_t apostrophe_at(std::string_view s, std::size_t pos) {
  if (s[pos] == '\'') return 1;
  if (pos + 2 < s.size() && static_cast<unsigned char>(s[pos]) == 0xE2 &&
      static_cast<unsigned char>(s[pos + 1]) == 0x80 && static_cast<unsigned char>(s[pos + 2]) == 0x99)
    return 3;
  return 0;
}

constexpr const char* kEnglishStopWords =
    "i me my myself we our ours ourselves you you're you've you'll you'd your yours yourself "
    "yourselves he him his himself she she's her hers herself it it's its itself they them "
    "their theirs themselves what which who whom this that that'll these those am is are was "
    "were be been being have has had having do does did doing a an the and but if or because "
    "as until while of at by for with about against between into through during before after "
    "above below to from up down in out on off over under again further then once here there "
    "when where why how all any both each few more most other some such no nor not only own "
    "same so than too very s t can will just don don't should should've now d ll m o re ve y "
    "ain aren aren't couldn couldn't didn didn't doesn doesn't hadn hadn't hasn hasn't haven "
    "haven't isn isn't ma mightn mightn't mustn mustn't needn needn't shan shan't shouldn "
    "shouldn't wasn wasn't weren weren't won won't wouldn wouldn't ";

}  // namespace

InputFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? InputFormat::csv : InputFormat::jsonl;
}

std::optional<InputFormat> parse_input_format(std::string_view name) {
  if (name == "jsonl" || name == "json") return InputFormat::jsonl;
  if (name == "csv") return InputFormat::csv;
  return std::nullopt;
}

IngestStats ingest(std::istream& in, InputFormat format, const CommentSink& sink) {
  IngestStats stats;
  if (format == InputFormat::jsonl) {
    ingest_jsonl(in, stats, sink);
  } else {
    ingest_csv(in, stats, sink);
  }
  return stats;
}

IngestStats ingest(const std::filesystem::path& path, InputFormat format, const CommentSink& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus file " + path.string());
  return ingest(in, format, sink);
}

std::vector<RawComment> ingest_all(const std::filesystem::path& path, InputFormat format,
                                   IngestStats* stats) {
  std::vector<RawComment> out;
  auto s = ingest(path, format, [&](RawComment&& c) { out.push_back(std::move(c)); });
  if (stats) *stats = std::move(s);
  return out;
}

StopWords::StopWords(const std::vector<std::string>& words) {
  for (const auto& w : words)
    for (auto& t : tokenize(w)) words_.insert(std::move(t));
}

const StopWords& StopWords::english() {
  static const StopWords list = [] {
    std::vector<std::string> words;
    std::istringstream ss(kEnglishStopWords);
    for (std::string w; ss >> w;) words.push_back(w);
    return StopWords(words);
  }();
  return list;
}

StopWords StopWords::load(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<std::string> words;
  for (auto line : split(text, '\n')) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) words.emplace_back(line);
  }
  return StopWords(words);
}

std::string strip_noise(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const bool boundary = i == 0 || !is_alnum(static_cast<unsigned char>(text[i - 1]));
    if (boundary && (starts_with_icase(text, i, "http://") || starts_with_icase(text, i, "https://") ||
                     starts_with_icase(text, i, "www."))) {
      while (i < text.size() && !is_space(text[i])) ++i;
      out.push_back(' ');
      continue;
    }
    if (c == '<') {
      // Tag: <a ...>, </p>, <!-- ... -->
      const std::size_t close = text.find('>', i);
      if (close != std::string_view::npos && i + 1 < text.size() &&
          (std::isalpha(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '/' ||
           text[i + 1] == '!')) {
        i = close + 1;
        out.push_back(' ');
        continue;
      }
    }
    if (c == '&') {
      // &amp; &#39; &#x27;
      std::size_t j = i + 1;
      if (j < text.size() && text[j] == '#') ++j;
      const std::size_t name_start = j;
      while (j < text.size() && j - name_start < 10 && is_alnum(static_cast<unsigned char>(text[j]))) ++j;
      if (j > name_start && j < text.size() && text[j] == ';') {
        i = j + 1;
        out.push_back(' ');
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size();) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_alnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
      ++i;
      continue;
    }
    if (const std::size_t len = apostrophe_at(text, i);
        len > 0 && !current.empty() && i + len < text.size() &&
        is_alnum(static_cast<unsigned char>(text[i + len]))) {
      i += len;  // intra-word apostrophe joins
      continue;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
    ++i;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> clean_tokens(std::string_view text, const StopWords& stop) {
  auto tokens = tokenize(strip_noise(text));
  std::erase_if(tokens, [&](const std::string& t) { return stop.contains(t); });
  return tokens;
}

std::string clean(std::string_view text, const StopWords& stop) {
  std::string out;
  for (const auto& t : clean_tokens(text, stop)) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::vector<Sentence> tokenize_sentences(std::string_view text, const StopWords* stop) {
  const std::string stripped = strip_noise(text);
  std::vector<Sentence> sentences;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    auto tokens = tokenize(std::string_view(stripped).substr(start, end - start));
    if (stop) std::erase_if(tokens, [&](const std::string& t) { return stop->contains(t); });
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  };
  for (std::size_t i = 0; i < stripped.size(); ++i) {
    const char c = stripped[i];
    if (c == '.' || c == '!' || c == '?') {
      flush(i);
      start = i + 1;
    }
  }
  flush(stripped.size());
  return sentences;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& docs, int min_df,
                             std::size_t max_size) {
  if (min_df < 1) throw InputError("min_df must be >= 1");
  if (docs.empty()) throw InputError("cannot build a vocabulary from an empty corpus");
  std::unordered_map<std::string, std::int64_t> df;
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : docs) {
    seen.clear();
    for (const auto& t : doc)
      if (seen.insert(t).second) ++df[t];
  }
  std::vector<std::pair<std::string, std::int64_t>> entries;
  for (auto& [tok, n] : df)
    if (n >= min_df) entries.emplace_back(tok, n);
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (max_size > 0 && entries.size() > max_size) entries.resize(max_size);

  std::vector<std::string> tokens;
  std::vector<std::int64_t> freqs;
  for (auto& [tok, n] : entries) {
    tokens.push_back(tok);
    freqs.push_back(n);
  }
  Vocabulary v = from_tokens(std::move(tokens), std::move(freqs), 0);
  std::int64_t total = 0;
  for (const auto& doc : docs)
    for (const auto& t : doc)
      if (v.find(t)) ++total;
  v.total_tokens_ = total;
  return v;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens, std::vector<std::int64_t> df,
                                   std::int64_t total_tokens) {
  if (tokens.size() != df.size()) throw InputError("vocabulary token/df length mismatch");
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.df_ = std::move(df);
  v.total_tokens_ = total_tokens;
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    if (!v.index_.emplace(v.tokens_[i], static_cast<TokenId>(i)).second)
      throw InputError("duplicate vocabulary token '" + v.tokens_[i] + "'");
  }
  return v;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::serialize() const {
  std::string out = "# " + std::to_string(tokens_.size()) + " " + std::to_string(total_tokens_) + "\n";
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    out += std::to_string(i) + "\t" + tokens_[i] + "\t" + std::to_string(df_[i]) + "\n";
  return out;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  std::vector<std::string> tokens;
  std::vector<std::int64_t> df;
  std::int64_t total = 0;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss{std::string(line.substr(1))};
      std::size_t v = 0;
      ss >> v >> total;
      continue;
    }
    auto f = split(line, '\t');
    if (f.size() != 3) throw InputError("malformed vocabulary line: " + std::string(line));
    if (std::stoul(std::string(f[0])) != tokens.size())
      throw InputError("vocabulary ids are not dense at " + std::string(line));
    tokens.emplace_back(f[1]);
    df.push_back(std::stoll(std::string(f[2])));
  }
  return from_tokens(std::move(tokens), std::move(df), total);
}

EncodedDocument encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                       EncodeMode mode, std::string id) {
  return encode_sentences(tokens.empty() ? std::vector<Sentence>{} : std::vector<Sentence>{tokens},
                          vocab, mode, std::move(id));
}

EncodedDocument encode_sentences(const std::vector<Sentence>& sentences, const Vocabulary& vocab,
                                 EncodeMode mode, std::string id) {
  EncodedDocument doc;
  doc.id = std::move(id);
  for (const auto& sentence : sentences) {
    const std::size_t start = doc.tokens.size();
    for (const auto& t : sentence) {
      if (auto tid = vocab.find(t)) {
        doc.tokens.push_back(*tid);
      } else if (mode == EncodeMode::classifier) {
        doc.tokens.push_back(vocab.oov_id());
      }
    }
    if (doc.tokens.size() > start) doc.sentence_offsets.push_back(start);
  }
  doc.empty = doc.tokens.empty();
  return doc;
}

std::vector<std::string> decode(const EncodedDocument& doc, const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(doc.tokens.size());
  for (TokenId t : doc.tokens)
    out.push_back(t >= 0 && static_cast<std::size_t>(t) < vocab.size() ? vocab.token(t)
                                                                       : std::string("<oov>"));
  return out;
}

std::size_t EncodedCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.tokens.size();
  return n;
}

std::string EncodedCorpus::serialize() const {
  std::string out = std::to_string(vocab_size) + " " + std::to_string(docs.size()) + "\n";
  for (const auto& d : docs) {
    out += d.id;
    out.push_back('\t');
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) out.push_back(' ');
      out += std::to_string(d.tokens[i]);
    }
    out.push_back('\n');
  }
  return out;
}

EncodedCorpus EncodedCorpus::parse(std::string_view text) {
  EncodedCorpus corpus;
  auto lines = split(text, '\n');
  if (lines.empty() || trim(lines[0]).empty()) throw InputError("encoded corpus lacks a header");
  std::size_t m = 0;
  {
    std::istringstream ss{std::string(lines[0])};
    if (!(ss >> corpus.vocab_size >> m)) throw InputError("malformed encoded corpus header");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto line = lines[i];
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw InputError("malformed encoded corpus line " + std::to_string(i + 1));
    EncodedDocument d;
    d.id = std::string(line.substr(0, tab));
    std::istringstream ss{std::string(line.substr(tab + 1))};
    for (long long id; ss >> id;) {
      if (id < 0 || static_cast<std::size_t>(id) >= corpus.vocab_size)
        throw InputError("token id out of range on line " + std::to_string(i + 1));
      d.tokens.push_back(static_cast<TokenId>(id));
    }
    d.empty = d.tokens.empty();
    if (!d.empty) d.sentence_offsets.push_back(0);
    corpus.docs.push_back(std::move(d));
  }
  if (corpus.docs.size() != m) throw InputError("encoded corpus document count does not match header");
  return corpus;
}

}  // namespace topicsent
