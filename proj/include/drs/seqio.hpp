#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "drs/clause.hpp"

namespace drs::seqio {

// ---------------------------------------------------------------------------
// Target-side tokens
// ---------------------------------------------------------------------------

enum class TokenKind : uint8_t {
  Structural,   // operator or role name, atomic
  RelVar,       // variable as relative reference or NEW introduction
  CharPiece,    // one character of a concept lemma or constant
  WordStart,
  WordEnd,
  SenseSep,
  ClauseSep,
  SenseTag,     // atomic sense symbol, e.g. n.08
};

inline constexpr int kRelVarNew = -1;

struct TargetToken {
  TokenKind kind;
  std::string text;          // Structural name, CharPiece char, SenseTag value
  VarKind var_kind = VarKind::Box;
  int offset = kRelVarNew;   // RelVar: distance back to introduction, 1 = newest

  std::string render() const;
  friend bool operator==(const TargetToken&, const TargetToken&) = default;
};

TargetToken token_from_string(const std::string& symbol);

std::vector<std::string> render_tokens(const std::vector<TargetToken>& tokens);
std::vector<TargetToken> tokens_from_strings(const std::vector<std::string>& symbols);

// Clause stream with relative variables and character-split concepts and
// constants; operators, roles and senses stay atomic.
std::vector<TargetToken> linearize(const Drs& d);

// Best-effort inverse; sets meta.malformed instead of throwing on broken
// streams so scoring can apply the zero rule.
Drs delinearize(const std::vector<TargetToken>& tokens);

// ---------------------------------------------------------------------------
// Source side
// ---------------------------------------------------------------------------

// Unicode scalar values per token (UTF-8 input, no normalization).
std::vector<std::vector<uint32_t>> source_char_split(const std::vector<std::string>& tokens);

std::vector<uint32_t> utf8_scalars(const std::string& token);
std::string utf8_encode(uint32_t scalar);

// ---------------------------------------------------------------------------
// Vocab
// ---------------------------------------------------------------------------

struct Vocab {
  static constexpr int kPad = 0, kUnk = 1, kBos = 2, kEos = 3;

  std::vector<std::string> symbols;           // index = id; includes specials
  std::vector<long> frequencies;              // aligned with symbols
  std::unordered_map<std::string, int> ids;
  int min_occurrence = 1;

  int id(const std::string& symbol) const {
    auto it = ids.find(symbol);
    return it == ids.end() ? kUnk : it->second;
  }
  const std::string& symbol(int id) const { return symbols[static_cast<size_t>(id)]; }
  int size() const { return static_cast<int>(symbols.size()); }

  std::string serialize() const;              // line = symbol TAB frequency
  static Vocab deserialize(const std::string& text);
  void save(const std::string& path) const;
  static Vocab load(const std::string& path);
};

// Frequency-thresholded symbol table; ids are deterministic
// (specials, then frequency descending, ties lexicographic).
Vocab build_vocab(const std::vector<std::vector<std::string>>& corpus, int min_occ);

// ---------------------------------------------------------------------------
// Corpus splits and the training schedule
// ---------------------------------------------------------------------------

enum class Tier { Gold, Silver, Bronze };

struct Phase {
  std::vector<Tier> tiers;
  int epochs = 1;
};

struct CorpusSplit {
  std::vector<Drs> gold, silver, bronze, dev, test;
  std::vector<Phase> schedule;

  std::vector<const Drs*> phase_docs(const Phase& p) const;
};

struct SplitPaths {
  std::string gold, silver, bronze, dev, test;  // empty = absent
};

// Default schedule: pretrain on gold+silver, fine-tune on gold.
std::vector<Phase> default_schedule(int pretrain_epochs, int finetune_epochs);
std::vector<Phase> parse_schedule(const std::string& text);  // "gold+silver:10,gold:5"
std::string render_schedule(const std::vector<Phase>& schedule);

CorpusSplit load_split(const SplitPaths& paths, std::vector<Phase> schedule);

// ---------------------------------------------------------------------------
// Linguistic feature channels
// ---------------------------------------------------------------------------

struct FeatureAlignment {
  std::vector<std::string> channel_names;
  // channels[c][i] = tag of token i in channel c
  std::vector<std::vector<std::string>> channels;
};

FeatureAlignment align_features(const std::vector<std::string>& tokens,
                                const std::vector<std::pair<std::string, std::vector<std::string>>>& tag_rows);

// One whitespace-separated tag line per sentence.
std::vector<std::vector<std::string>> load_tag_file(const std::string& path);

}  // namespace drs::seqio
