#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "drs/error.hpp"

namespace drs {

// Variable kinds of the clause notation: boxes plus the five referent kinds.
enum class VarKind : uint8_t { Box, Entity, Event, State, Time, Proposition };

inline constexpr int kNumVarKinds = 6;

char var_kind_letter(VarKind k);
std::optional<VarKind> var_kind_from_letter(char c);

struct Variable {
  VarKind kind = VarKind::Box;
  int index = 1;  // >= 1

  std::string render() const;
  friend bool operator==(const Variable&, const Variable&) = default;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

// Quoted string whose value excludes the quotes.
struct Constant {
  std::string value;
  friend bool operator==(const Constant&, const Constant&) = default;
  friend auto operator<=>(const Constant&, const Constant&) = default;
};

// WordNet-style sense token: pos letter in {n,v,a,r}, dot, two digits.
struct Sense {
  std::string value;
  char pos() const { return value.empty() ? '?' : value[0]; }
  friend bool operator==(const Sense&, const Sense&) = default;
  friend auto operator<=>(const Sense&, const Sense&) = default;
};

using Term = std::variant<Variable, Constant, Sense>;

bool is_sense_token(std::string_view unquoted);
std::string render_term(const Term& t);

enum class PredicateClass : uint8_t { Operator, Role, Concept };

// Total classification: all-uppercase letters -> Operator; leading
// uppercase -> Role; everything else -> Concept.
PredicateClass classify_predicate(std::string_view token);

struct PredicateKind {
  PredicateClass cls = PredicateClass::Concept;
  std::string name;
  friend bool operator==(const PredicateKind&, const PredicateKind&) = default;
  friend auto operator<=>(const PredicateKind&, const PredicateKind&) = default;
};

struct Clause {
  Variable box;        // clause head, always a box variable
  PredicateKind pred;
  std::vector<Term> args;  // 1 or 2 terms

  std::string render() const;
  friend bool operator==(const Clause&, const Clause&) = default;
  friend auto operator<=>(const Clause&, const Clause&) = default;
};

struct DocMeta {
  std::string id;
  bool id_explicit = false;  // id came from a '% id:' comment
  std::optional<std::string> raw_sentence;
  std::vector<std::string> semtags;
  std::vector<std::string> comments;  // verbatim '%' lines, ingest order
  int duplicates_dropped = 0;
  // Set when the clause stream came from an unparseable decoder output;
  // scoring treats the document as ill-formed.
  bool malformed = false;
};

struct Drs {
  std::vector<Clause> clauses;
  DocMeta meta;

  std::string render() const;
  std::vector<Variable> variables() const;  // distinct, first-occurrence order
  std::vector<std::string> sentence_tokens() const;  // whitespace split of raw_sentence
};

Clause parse_clause(std::string_view line);
Drs parse_document(std::string_view text);

// Blank-line separated blocks, one Drs each.
std::vector<Drs> parse_corpus(std::string_view text);

struct CorpusReadReport {
  std::vector<Drs> docs;
  std::vector<std::string> errors;  // one entry per skipped document
};

// Skip-and-report variant of parse_corpus.
CorpusReadReport parse_corpus_lenient(std::string_view text);

std::vector<Drs> load_corpus(const std::string& path);
std::string render_corpus(const std::vector<Drs>& docs);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace drs

template <>
struct std::hash<drs::Variable> {
  size_t operator()(const drs::Variable& v) const {
    return std::hash<int>()(static_cast<int>(v.kind) * 1000003 + v.index);
  }
};
