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

#ifndef TOPICSENT_CORPUS_HPP_
#define TOPICSENT_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace topicsent {

using TokenId = std::int32_t;

struct RawComment {
  std::string id;
  std::string subreddit;
  std::int64_t created_at = 0;
  std::string body;
  bool missing_body = false;  // record had no body field; body is empty

  bool operator==(const RawComment&) const = default;
};

enum class InputFormat { jsonl, csv };

// Picks the format from the file extension (.csv, otherwise JSONL).
InputFormat format_for_path(const std::filesystem::path& path);
std::optional<InputFormat> parse_input_format(std::string_view name);

struct IngestStats {
  std::size_t records = 0;
  std::size_t empty_bodies = 0;
  std::size_t warnings = 0;
  std::vector<std::string> messages;  // first few warning texts
};

using CommentSink = std::function<void(RawComment&&)>;

// Streams one RawComment per well-formed record into `sink`. Malformed
// records and duplicate ids are skipped with a warning; a record with no
// body yields an empty-body comment and a warning. Throws InputError if the
// file cannot be read.
IngestStats ingest(const std::filesystem::path& path, InputFormat format, const CommentSink& sink);
IngestStats ingest(std::istream& in, InputFormat format, const CommentSink& sink);
std::vector<RawComment> ingest_all(const std::filesystem::path& path, InputFormat format,
                                   IngestStats* stats = nullptr);

class StopWords {
 public:
  StopWords() = default;
  explicit StopWords(const std::vector<std::string>& words);

  // The shipped English list (179 entries).
  static const StopWords& english();
  // One token per line; '#' starts a comment.
  static StopWords load(const std::filesystem::path& path);

  bool contains(std::string_view token) const { return words_.count(std::string(token)) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Removes URLs, HTML/markdown markup and character entities, leaving
// sentence punctuation in place.
std::string strip_noise(std::string_view text);

// Lowercased maximal runs of [a-z0-9]. An apostrophe between two
// alphanumerics is dropped so "don't" becomes "dont"; every other
// character separates tokens. Does not strip URLs; see clean().
std::vector<std::string> tokenize(std::string_view text);

// Noise stripped, lowercased, tokenized, stop-words removed, joined by
// single spaces. Idempotent.
std::string clean(std::string_view text, const StopWords& stop = StopWords::english());
std::vector<std::string> clean_tokens(std::string_view text,
                                      const StopWords& stop = StopWords::english());

using Sentence = std::vector<std::string>;

// Splits on '.', '!' and '?' after noise removal, tokenizes each sentence
// and drops empty ones. With stop == nullptr no stop-words are removed.
std::vector<Sentence> tokenize_sentences(std::string_view text,
                                         const StopWords* stop = &StopWords::english());

class Vocabulary {
 public:
  Vocabulary() = default;

  // Ids in descending document frequency, ties lexicographic. Tokens with
  // df < min_df are excluded; max_size > 0 truncates to the most frequent.
  // Throws InputError on an empty corpus or min_df < 1.
  static Vocabulary build(const std::vector<std::vector<std::string>>& docs, int min_df,
                          std::size_t max_size = 0);

  static Vocabulary from_tokens(std::vector<std::string> tokens, std::vector<std::int64_t> df,
                                std::int64_t total_tokens);

  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::int64_t document_frequency(TokenId id) const { return df_.at(static_cast<std::size_t>(id)); }
  std::int64_t total_tokens() const { return total_tokens_; }
  std::size_t size() const { return tokens_.size(); }
  // Reserved id for out-of-vocabulary tokens in classifier encoding.
  TokenId oov_id() const { return static_cast<TokenId>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Lines `id<TAB>token<TAB>df`, preceded by a `# V total_tokens` header.
  std::string serialize() const;
  static Vocabulary parse(std::string_view text);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::int64_t> df_;
  std::unordered_map<std::string, TokenId> index_;
  std::int64_t total_tokens_ = 0;
};

enum class EncodeMode {
  lda,        // out-of-vocabulary tokens dropped
  classifier  // out-of-vocabulary tokens mapped to vocab.oov_id()
};

struct EncodedDocument {
  std::string id;
  std::vector<TokenId> tokens;
  std::vector<std::size_t> sentence_offsets;  // start index of each sentence
  bool empty = false;
};

EncodedDocument encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                       EncodeMode mode, std::string id = {});
EncodedDocument encode_sentences(const std::vector<Sentence>& sentences, const Vocabulary& vocab,
                                 EncodeMode mode, std::string id = {});
// Maps ids back to tokens; the OOV id decodes to "<oov>".
std::vector<std::string> decode(const EncodedDocument& doc, const Vocabulary& vocab);

struct EncodedCorpus {
  std::size_t vocab_size = 0;
  std::vector<EncodedDocument> docs;

  std::size_t token_count() const;
  // Header `V M`, then `doc_id<TAB>space-separated ids` per document.
  std::string serialize() const;
  static EncodedCorpus parse(std::string_view text);
};

}  // namespace topicsent

#endif  // TOPICSENT_CORPUS_HPP_
