#include "drs/clause.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace drs {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_clause: return "MalformedClause";
    case Errc::unknown_variable_kind: return "UnknownVariableKind";
    case Errc::parse_error: return "ParseError";
    case Errc::ill_formed_input: return "IllFormedInput";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::oracle_limit_exceeded: return "OracleLimitExceeded";
    case Errc::overlap_error: return "OverlapError";
    case Errc::alignment_mismatch: return "AlignmentMismatch";
    case Errc::empty_input: return "EmptyInput";
    case Errc::empty_token: return "EmptyToken";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::missing_sense_table: return "MissingSenseTable";
    case Errc::missing_embedding: return "MissingEmbedding";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

char var_kind_letter(VarKind k) {
  switch (k) {
    case VarKind::Box: return 'b';
    case VarKind::Entity: return 'x';
    case VarKind::Event: return 'e';
    case VarKind::State: return 's';
    case VarKind::Time: return 't';
    case VarKind::Proposition: return 'p';
  }
  return '?';
}

std::optional<VarKind> var_kind_from_letter(char c) {
  switch (c) {
    case 'b': return VarKind::Box;
    case 'x': return VarKind::Entity;
    case 'e': return VarKind::Event;
    case 's': return VarKind::State;
    case 't': return VarKind::Time;
    case 'p': return VarKind::Proposition;
  }
  return std::nullopt;
}

std::string Variable::render() const {
  return var_kind_letter(kind) + std::to_string(index);
}

bool is_sense_token(std::string_view s) {
  return s.size() == 4 && (s[0] == 'n' || s[0] == 'v' || s[0] == 'a' || s[0] == 'r') &&
         s[1] == '.' && std::isdigit(static_cast<unsigned char>(s[2])) &&
         std::isdigit(static_cast<unsigned char>(s[3]));
}

std::string render_term(const Term& t) {
  if (const auto* v = std::get_if<Variable>(&t)) return v->render();
  if (const auto* c = std::get_if<Constant>(&t)) return '"' + c->value + '"';
  return '"' + std::get<Sense>(t).value + '"';
}

PredicateClass classify_predicate(std::string_view token) {
  bool all_upper = !token.empty() &&
                   std::all_of(token.begin(), token.end(),
                               [](char c) { return c >= 'A' && c <= 'Z'; });
  if (all_upper) return PredicateClass::Operator;
  if (!token.empty() && token[0] >= 'A' && token[0] <= 'Z') return PredicateClass::Role;
  return PredicateClass::Concept;
}

std::string Clause::render() const {
  std::string out = box.render();
  out += ' ';
  out += pred.name;
  for (const Term& t : args) {
    out += ' ';
    out += render_term(t);
  }
  return out;
}

namespace {

// Variable-shaped token: one lowercase letter followed by digits.
std::optional<Variable> try_parse_variable(std::string_view tok) {
  if (tok.size() < 2) return std::nullopt;
  if (!(tok[0] >= 'a' && tok[0] <= 'z')) return std::nullopt;
  for (size_t i = 1; i < tok.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
  auto kind = var_kind_from_letter(tok[0]);
  if (!kind)
    fail(Errc::unknown_variable_kind,
         "variable letter '" + std::string(1, tok[0]) + "' in token '" + std::string(tok) + "'");
  int index = std::stoi(std::string(tok.substr(1)));
  if (index < 1)
    fail(Errc::malformed_clause, "variable index must be >= 1 in '" + std::string(tok) + "'");
  return Variable{*kind, index};
}

struct RawToken {
  std::string text;
  bool quoted = false;
};

// Splits on whitespace outside quotes; strips a '%' comment outside quotes.
std::vector<RawToken> tokenize_clause_line(std::string_view line) {
  std::vector<RawToken> toks;
  RawToken cur;
  bool in_quote = false;
  bool have = false;
  auto flush = [&] {
    if (have) toks.push_back(cur);
    cur = RawToken{};
    have = false;
  };
  for (char c : line) {
    if (!in_quote && c == '%') break;
    if (c == '"') {
      in_quote = !in_quote;
      cur.quoted = true;
      have = true;
      continue;
    }
    if (!in_quote && (c == ' ' || c == '\t' || c == '\r')) {
      flush();
      continue;
    }
    cur.text += c;
    have = true;
  }
  if (in_quote) fail(Errc::malformed_clause, "unbalanced quotes in: " + std::string(line));
  flush();
  return toks;
}

Term parse_term(const RawToken& tok) {
  if (tok.quoted) {
    if (tok.text.empty()) fail(Errc::malformed_clause, "empty quoted constant");
    if (is_sense_token(tok.text)) return Sense{tok.text};
    return Constant{tok.text};
  }
  if (auto v = try_parse_variable(tok.text)) return *v;
  fail(Errc::malformed_clause, "expected variable or quoted term, got '" + tok.text + "'");
}

}  // namespace

Clause parse_clause(std::string_view line) {
  std::vector<RawToken> toks = tokenize_clause_line(line);
  if (toks.size() < 3 || toks.size() > 4)
    fail(Errc::malformed_clause,
         "expected 3 or 4 tokens, got " + std::to_string(toks.size()) + " in: " + std::string(line));

  if (toks[0].quoted) fail(Errc::malformed_clause, "clause head must be a box variable");
  auto head = try_parse_variable(toks[0].text);
  if (!head || head->kind != VarKind::Box)
    fail(Errc::malformed_clause, "first token '" + toks[0].text + "' is not a box variable");

  if (toks[1].quoted) fail(Errc::malformed_clause, "predicate cannot be quoted");
  Clause c;
  c.box = *head;
  c.pred = PredicateKind{classify_predicate(toks[1].text), toks[1].text};
  for (size_t i = 2; i < toks.size(); ++i) c.args.push_back(parse_term(toks[i]));

  switch (c.pred.cls) {
    case PredicateClass::Concept:
      if (c.args.size() != 2 || !std::holds_alternative<Sense>(c.args[0]) ||
          !std::holds_alternative<Variable>(c.args[1]))
        fail(Errc::malformed_clause,
             "concept clause needs (sense, variable) arguments: " + std::string(line));
      break;
    case PredicateClass::Role:
      if (c.args.size() != 2 || !std::holds_alternative<Variable>(c.args[0]))
        fail(Errc::malformed_clause,
             "role clause needs (variable, term) arguments: " + std::string(line));
      break;
    case PredicateClass::Operator:
      // Operator inventory is open; accept arity 1 or 2 as written.
      break;
  }
  return c;
}

namespace {

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

void apply_comment(Drs& d, std::string_view line) {
  d.meta.comments.emplace_back(line);
  std::string_view body = line.substr(1);
  while (!body.empty() && (body.front() == ' ' || body.front() == '\t')) body.remove_prefix(1);
  while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.remove_suffix(1);
  if (starts_with(body, "id:")) {
    auto rest = body.substr(3);
    auto toks = split_ws(rest);
    if (!toks.empty()) {
      d.meta.id = toks[0];
      d.meta.id_explicit = true;
    }
    return;
  }
  if (starts_with(body, "semtags:")) {
    d.meta.semtags = split_ws(body.substr(8));
    return;
  }
  if (!d.meta.raw_sentence && !body.empty()) d.meta.raw_sentence = std::string(body);
}

}  // namespace

Drs parse_document(std::string_view text) {
  Drs d;
  std::unordered_set<std::string> seen;
  size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) continue;
    std::string_view stripped = line;
    while (!stripped.empty() && (stripped.front() == ' ' || stripped.front() == '\t'))
      stripped.remove_prefix(1);
    if (stripped.front() == '%') {
      apply_comment(d, stripped);
      continue;
    }
    Clause c;
    try {
      c = parse_clause(line);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
    std::string key = c.render();
    if (seen.insert(std::move(key)).second)
      d.clauses.push_back(std::move(c));
    else
      ++d.meta.duplicates_dropped;
  }
  return d;
}

std::string Drs::render() const {
  std::string out;
  for (const std::string& c : meta.comments) {
    out += c;
    out += '\n';
  }
  for (const Clause& c : clauses) {
    out += c.render();
    out += '\n';
  }
  return out;
}

std::vector<Variable> Drs::variables() const {
  std::vector<Variable> vars;
  std::unordered_set<Variable> seen;
  auto add = [&](const Variable& v) {
    if (seen.insert(v).second) vars.push_back(v);
  };
  for (const Clause& c : clauses) {
    add(c.box);
    for (const Term& t : c.args)
      if (const auto* v = std::get_if<Variable>(&t)) add(*v);
  }
  return vars;
}

std::vector<std::string> Drs::sentence_tokens() const {
  if (!meta.raw_sentence) return {};
  return split_ws(*meta.raw_sentence);
}

namespace {

std::vector<std::string_view> split_blocks(std::string_view text) {
  std::vector<std::string_view> blocks;
  size_t pos = 0;
  size_t block_start = std::string_view::npos;
  auto line_end = [&](size_t p) {
    size_t nl = text.find('\n', p);
    return nl == std::string_view::npos ? text.size() : nl;
  };
  while (pos < text.size()) {
    size_t end = line_end(pos);
    std::string_view line = text.substr(pos, end - pos);
    if (is_blank(line)) {
      if (block_start != std::string_view::npos) {
        blocks.push_back(text.substr(block_start, pos - block_start));
        block_start = std::string_view::npos;
      }
    } else if (block_start == std::string_view::npos) {
      block_start = pos;
    }
    pos = end + 1;
  }
  if (block_start != std::string_view::npos)
    blocks.push_back(text.substr(block_start));
  return blocks;
}

}  // namespace

std::vector<Drs> parse_corpus(std::string_view text) {
  std::vector<Drs> docs;
  auto blocks = split_blocks(text);
  for (size_t i = 0; i < blocks.size(); ++i) {
    try {
      docs.push_back(parse_document(blocks[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "document " + std::to_string(i) + ": " + e.what());
    }
    if (docs.back().meta.id.empty()) docs.back().meta.id = "doc" + std::to_string(i);
  }
  return docs;
}

CorpusReadReport parse_corpus_lenient(std::string_view text) {
  CorpusReadReport rep;
  auto blocks = split_blocks(text);
  for (size_t i = 0; i < blocks.size(); ++i) {
    try {
      rep.docs.push_back(parse_document(blocks[i]));
      if (rep.docs.back().meta.id.empty()) rep.docs.back().meta.id = "doc" + std::to_string(i);
    } catch (const Error& e) {
      rep.errors.push_back("document " + std::to_string(i) + ": " + e.what());
    }
  }
  return rep;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::vector<Drs> load_corpus(const std::string& path) {
  return parse_corpus(read_file(path));
}

std::string render_corpus(const std::vector<Drs>& docs) {
  std::string out;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (i) out += '\n';
    out += docs[i].render();
  }
  return out;
}

}  // namespace drs
