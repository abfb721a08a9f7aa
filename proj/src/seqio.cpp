#include "drs/seqio.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "drs/referee.hpp"

namespace drs::seqio {

namespace {
constexpr const char* kWordStart = "<w>";
constexpr const char* kWordEnd = "</w>";
constexpr const char* kSenseSep = "<s>";
constexpr const char* kClauseSep = "***";
}  // namespace

std::string TargetToken::render() const {
  switch (kind) {
    case TokenKind::Structural:
    case TokenKind::CharPiece:
    case TokenKind::SenseTag:
      return text;
    case TokenKind::WordStart: return kWordStart;
    case TokenKind::WordEnd: return kWordEnd;
    case TokenKind::SenseSep: return kSenseSep;
    case TokenKind::ClauseSep: return kClauseSep;
    case TokenKind::RelVar: {
      std::string k(1, var_kind_letter(var_kind));
      if (offset == kRelVarNew) return "@new-" + k;
      return "@" + k + "-" + std::to_string(offset);
    }
  }
  return text;
}

TargetToken token_from_string(const std::string& s) {
  if (s == kWordStart) return {TokenKind::WordStart, ""};
  if (s == kWordEnd) return {TokenKind::WordEnd, ""};
  if (s == kSenseSep) return {TokenKind::SenseSep, ""};
  if (s == kClauseSep) return {TokenKind::ClauseSep, ""};
  if (s.size() >= 2 && s[0] == '@') {
    if (s.rfind("@new-", 0) == 0 && s.size() == 6) {
      if (auto k = var_kind_from_letter(s[5]))
        return {TokenKind::RelVar, "", *k, kRelVarNew};
    } else if (s.size() >= 4 && s[2] == '-') {
      auto k = var_kind_from_letter(s[1]);
      bool digits = true;
      for (size_t i = 3; i < s.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(s[i]));
      if (k && digits) return {TokenKind::RelVar, "", *k, std::stoi(s.substr(3))};
    }
  }
  if (is_sense_token(s)) return {TokenKind::SenseTag, s};
  if (utf8_scalars(s).size() == 1) return {TokenKind::CharPiece, s};
  return {TokenKind::Structural, s};
}

std::vector<std::string> render_tokens(const std::vector<TargetToken>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const TargetToken& t : tokens) out.push_back(t.render());
  return out;
}

std::vector<TargetToken> tokens_from_strings(const std::vector<std::string>& symbols) {
  std::vector<TargetToken> out;
  out.reserve(symbols.size());
  for (const std::string& s : symbols) out.push_back(token_from_string(s));
  return out;
}

// ---------------------------------------------------------------------------
// linearize / delinearize
// ---------------------------------------------------------------------------

namespace {

class VarTracker {
 public:
  // NEW on first occurrence, otherwise 1-based distance from the most recent
  // introduction of the same kind.
  TargetToken encode(const Variable& v) {
    auto& intro = intros_[static_cast<int>(v.kind)];
    for (size_t i = 0; i < intro.size(); ++i)
      if (intro[i] == v)
        return {TokenKind::RelVar, "", v.kind, static_cast<int>(intro.size() - i)};
    intro.push_back(v);
    return {TokenKind::RelVar, "", v.kind, kRelVarNew};
  }

  // Decoding twin: materializes variables named in introduction order.
  std::optional<Variable> decode(const TargetToken& t) {
    auto& intro = intros_[static_cast<int>(t.var_kind)];
    if (t.offset == kRelVarNew) {
      Variable v{t.var_kind, static_cast<int>(intro.size()) + 1};
      intro.push_back(v);
      return v;
    }
    if (t.offset < 1 || t.offset > static_cast<int>(intro.size())) return std::nullopt;
    return intro[intro.size() - static_cast<size_t>(t.offset)];
  }

 private:
  std::array<std::vector<Variable>, kNumVarKinds> intros_;
};

void emit_chars(std::vector<TargetToken>& out, const std::string& word) {
  out.push_back({TokenKind::WordStart, ""});
  for (uint32_t scalar : utf8_scalars(word))
    out.push_back({TokenKind::CharPiece, utf8_encode(scalar)});
  out.push_back({TokenKind::WordEnd, ""});
}

}  // namespace

std::vector<TargetToken> linearize(const Drs& d) {
  if (d.meta.malformed || !referee::validate(d).well_formed)
    fail(Errc::ill_formed_input, "cannot linearize an ill-formed DRS");
  std::vector<TargetToken> out;
  VarTracker vars;
  for (const Clause& c : d.clauses) {
    out.push_back(vars.encode(c.box));
    if (c.pred.cls == PredicateClass::Concept)
      emit_chars(out, c.pred.name);
    else
      out.push_back({TokenKind::Structural, c.pred.name});
    for (const Term& t : c.args) {
      if (const auto* v = std::get_if<Variable>(&t))
        out.push_back(vars.encode(*v));
      else if (const auto* k = std::get_if<Constant>(&t))
        emit_chars(out, k->value);
      else
        out.push_back({TokenKind::SenseTag, std::get<Sense>(t).value});
    }
    out.push_back({TokenKind::ClauseSep, ""});
  }
  return out;
}

Drs delinearize(const std::vector<TargetToken>& tokens) {
  Drs d;
  VarTracker vars;
  std::set<std::string> seen;
  bool malformed = false;

  size_t i = 0;
  while (i < tokens.size()) {
    // collect one clause worth of tokens
    size_t j = i;
    while (j < tokens.size() && tokens[j].kind != TokenKind::ClauseSep) ++j;
    bool terminated = j < tokens.size();
    std::vector<const TargetToken*> group;
    for (size_t k = i; k < j; ++k)
      if (tokens[k].kind != TokenKind::SenseSep) group.push_back(&tokens[k]);
    i = j + 1;
    if (group.empty()) continue;
    if (!terminated) {  // truncated stream: drop the partial clause
      malformed = true;
      break;
    }

    bool clause_ok = true;
    size_t g = 0;
    auto take_word = [&]() -> std::optional<std::string> {
      if (g >= group.size() || group[g]->kind != TokenKind::WordStart) return std::nullopt;
      ++g;
      std::string word;
      while (g < group.size() && group[g]->kind == TokenKind::CharPiece) word += group[g++]->text;
      if (g >= group.size() || group[g]->kind != TokenKind::WordEnd) return std::nullopt;
      ++g;
      if (word.empty()) return std::nullopt;
      return word;
    };

    // head box
    Clause c;
    if (g < group.size() && group[g]->kind == TokenKind::RelVar &&
        group[g]->var_kind == VarKind::Box) {
      auto v = vars.decode(*group[g]);
      ++g;
      if (v)
        c.box = *v;
      else
        clause_ok = false;
    } else {
      clause_ok = false;
    }

    // predicate: atomic structural symbol or character-split concept
    if (clause_ok) {
      if (g < group.size() && group[g]->kind == TokenKind::Structural) {
        c.pred = {classify_predicate(group[g]->text), group[g]->text};
        ++g;
      } else if (auto word = take_word()) {
        c.pred = {classify_predicate(*word), *word};
      } else {
        clause_ok = false;
      }
    }

    // arguments
    while (clause_ok && g < group.size()) {
      if (c.args.size() == 2) {
        clause_ok = false;
        break;
      }
      const TargetToken& t = *group[g];
      if (t.kind == TokenKind::RelVar) {
        auto v = vars.decode(t);
        ++g;
        if (v)
          c.args.emplace_back(*v);
        else
          clause_ok = false;
      } else if (t.kind == TokenKind::SenseTag) {
        c.args.emplace_back(Sense{t.text});
        ++g;
      } else if (auto word = take_word()) {
        c.args.emplace_back(Constant{*word});
      } else {
        clause_ok = false;
      }
    }
    if (clause_ok && c.args.empty()) clause_ok = false;

    if (clause_ok) {
      // keep only clauses that survive the text format round trip
      try {
        Clause reparsed = parse_clause(c.render());
        std::string key = reparsed.render();
        if (seen.insert(key).second)
          d.clauses.push_back(std::move(reparsed));
        else
          ++d.meta.duplicates_dropped;
      } catch (const Error&) {
        clause_ok = false;
      }
    }
    if (!clause_ok) malformed = true;
  }

  d.meta.malformed = malformed;
  return d;
}

// ---------------------------------------------------------------------------
// UTF-8
// ---------------------------------------------------------------------------

std::vector<uint32_t> utf8_scalars(const std::string& s) {
  std::vector<uint32_t> out;
  size_t i = 0;
  const auto* b = reinterpret_cast<const unsigned char*>(s.data());
  size_t n = s.size();
  while (i < n) {
    unsigned char c = b[i];
    uint32_t scalar = 0;
    int len = 0;
    if (c < 0x80) {
      scalar = c;
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      scalar = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      scalar = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      scalar = c & 0x07;
      len = 4;
    } else {
      len = 0;
    }
    bool ok = len > 0 && i + len <= n;
    for (int k = 1; ok && k < len; ++k) {
      if ((b[i + k] & 0xC0) != 0x80)
        ok = false;
      else
        scalar = (scalar << 6) | (b[i + k] & 0x3F);
    }
    if (!ok) {
      // invalid byte: surrogate-escape so encode() restores it verbatim
      out.push_back(0xDC00u + c);
      ++i;
    } else {
      out.push_back(scalar);
      i += len;
    }
  }
  return out;
}

std::string utf8_encode(uint32_t v) {
  std::string out;
  if (v >= 0xDC80 && v <= 0xDCFF) {
    out += static_cast<char>(v - 0xDC00);
  } else if (v < 0x80) {
    out += static_cast<char>(v);
  } else if (v < 0x800) {
    out += static_cast<char>(0xC0 | (v >> 6));
    out += static_cast<char>(0x80 | (v & 0x3F));
  } else if (v < 0x10000) {
    out += static_cast<char>(0xE0 | (v >> 12));
    out += static_cast<char>(0x80 | ((v >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (v & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (v >> 18));
    out += static_cast<char>(0x80 | ((v >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((v >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (v & 0x3F));
  }
  return out;
}

std::vector<std::vector<uint32_t>> source_char_split(const std::vector<std::string>& tokens) {
  std::vector<std::vector<uint32_t>> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) {
    if (t.empty()) fail(Errc::empty_token, "empty source token");
    out.push_back(utf8_scalars(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocab
// ---------------------------------------------------------------------------

namespace {
const char* kSpecials[] = {"<pad>", "<unk>", "<bos>", "<eos>"};
}

Vocab build_vocab(const std::vector<std::vector<std::string>>& corpus, int min_occ) {
  if (min_occ < 1) fail(Errc::invalid_config, "min_occ must be >= 1");
  if (corpus.empty()) fail(Errc::empty_corpus, "no sequences to build a vocab from");

  std::map<std::string, long> freq;
  for (const auto& seq : corpus)
    for (const std::string& s : seq) ++freq[s];

  std::vector<std::pair<std::string, long>> kept;
  for (const auto& [sym, n] : freq)
    if (n >= min_occ) kept.emplace_back(sym, n);
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocab v;
  v.min_occurrence = min_occ;
  for (const char* s : kSpecials) {
    v.ids[s] = static_cast<int>(v.symbols.size());
    v.symbols.emplace_back(s);
    v.frequencies.push_back(0);
  }
  for (auto& [sym, n] : kept) {
    if (v.ids.count(sym)) continue;
    v.ids[sym] = static_cast<int>(v.symbols.size());
    v.symbols.push_back(sym);
    v.frequencies.push_back(n);
  }
  return v;
}

std::string Vocab::serialize() const {
  std::string out;
  for (size_t i = 0; i < symbols.size(); ++i) {
    out += symbols[i];
    out += '\t';
    out += std::to_string(frequencies[i]);
    out += '\n';
  }
  return out;
}

Vocab Vocab::deserialize(const std::string& text) {
  Vocab v;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) fail(Errc::parse_error, "vocab line without TAB: " + line);
    std::string sym = line.substr(0, tab);
    long n = std::stol(line.substr(tab + 1));
    v.ids[sym] = static_cast<int>(v.symbols.size());
    v.symbols.push_back(sym);
    v.frequencies.push_back(n);
  }
  for (int i = 0; i < 4; ++i)
    if (v.size() <= i || v.symbols[i] != kSpecials[i])
      fail(Errc::parse_error, "vocab file missing special symbols");
  return v;
}

void Vocab::save(const std::string& path) const { write_file(path, serialize()); }

Vocab Vocab::load(const std::string& path) { return deserialize(read_file(path)); }

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

std::vector<Phase> default_schedule(int pretrain_epochs, int finetune_epochs) {
  std::vector<Phase> out;
  if (pretrain_epochs > 0) out.push_back({{Tier::Gold, Tier::Silver}, pretrain_epochs});
  if (finetune_epochs > 0) out.push_back({{Tier::Gold}, finetune_epochs});
  return out;
}

namespace {

Tier tier_from(const std::string& s) {
  if (s == "gold") return Tier::Gold;
  if (s == "silver") return Tier::Silver;
  if (s == "bronze") return Tier::Bronze;
  fail(Errc::invalid_config, "unknown tier '" + s + "'");
}

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Gold: return "gold";
    case Tier::Silver: return "silver";
    case Tier::Bronze: return "bronze";
  }
  return "?";
}

}  // namespace

std::vector<Phase> parse_schedule(const std::string& text) {
  std::vector<Phase> out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) continue;
    auto colon = part.find(':');
    if (colon == std::string::npos)
      fail(Errc::invalid_config, "schedule phase needs tiers:epochs, got '" + part + "'");
    Phase p;
    p.epochs = std::stoi(part.substr(colon + 1));
    std::istringstream tiers(part.substr(0, colon));
    std::string t;
    while (std::getline(tiers, t, '+')) p.tiers.push_back(tier_from(t));
    if (p.tiers.empty()) fail(Errc::invalid_config, "schedule phase with no tiers");
    if (p.epochs > 0) out.push_back(std::move(p));
  }
  return out;
}

std::string render_schedule(const std::vector<Phase>& schedule) {
  std::string out;
  for (size_t i = 0; i < schedule.size(); ++i) {
    if (i) out += ',';
    for (size_t t = 0; t < schedule[i].tiers.size(); ++t) {
      if (t) out += '+';
      out += tier_name(schedule[i].tiers[t]);
    }
    out += ':' + std::to_string(schedule[i].epochs);
  }
  return out;
}

std::vector<const Drs*> CorpusSplit::phase_docs(const Phase& p) const {
  std::vector<const Drs*> docs;
  for (Tier t : p.tiers) {
    const std::vector<Drs>* tier = t == Tier::Gold ? &gold : t == Tier::Silver ? &silver : &bronze;
    for (const Drs& d : *tier) docs.push_back(&d);
  }
  return docs;
}

CorpusSplit load_split(const SplitPaths& paths, std::vector<Phase> schedule) {
  CorpusSplit split;
  auto load = [](const std::string& path) {
    return path.empty() ? std::vector<Drs>{} : load_corpus(path);
  };
  split.gold = load(paths.gold);
  split.silver = load(paths.silver);
  split.bronze = load(paths.bronze);
  split.dev = load(paths.dev);
  split.test = load(paths.test);
  split.schedule = std::move(schedule);

  // leak check on explicitly tagged document ids
  std::set<std::string> held_out;
  for (const auto* docs : {&split.dev, &split.test})
    for (const Drs& d : *docs)
      if (d.meta.id_explicit) held_out.insert(d.meta.id);
  for (const auto* docs : {&split.gold, &split.silver, &split.bronze})
    for (const Drs& d : *docs)
      if (d.meta.id_explicit && held_out.count(d.meta.id))
        fail(Errc::overlap_error, "document " + d.meta.id + " appears in both training and dev/test");
  return split;
}

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

FeatureAlignment align_features(
    const std::vector<std::string>& tokens,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& tag_rows) {
  FeatureAlignment fa;
  for (const auto& [name, tags] : tag_rows) {
    if (tags.size() != tokens.size())
      fail(Errc::alignment_mismatch, "channel '" + name + "' has " + std::to_string(tags.size()) +
                                         " tags for " + std::to_string(tokens.size()) + " tokens");
    fa.channel_names.push_back(name);
    fa.channels.push_back(tags);
  }
  return fa;
}

std::vector<std::vector<std::string>> load_tag_file(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tags;
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tags.push_back(t);
    rows.push_back(std::move(tags));
  }
  return rows;
}

}  // namespace drs::seqio
