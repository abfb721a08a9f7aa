#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drs/clause.hpp"

namespace drs::counter {

struct EvalConfig {
  int restarts = 100;
  bool default_sense = false;
  uint64_t seed = 0;
  bool validate_first = true;
  int oracle_limit = 8;   // max total predicted variables for brute force
  int jobs = 1;           // document-level parallelism
};

// Injective, kind-preserving partial map from predicted to gold variables.
struct VariableMapping {
  std::vector<std::pair<Variable, Variable>> pairs;  // sorted by predicted var

  std::optional<Variable> image(const Variable& pred) const;
};

struct MatchResult {
  int matched = 0;
  int produced = 0;
  int gold = 0;
  VariableMapping mapping;

  double precision() const { return produced > 0 ? double(matched) / produced : 0.0; }
  double recall() const { return gold > 0 ? double(matched) / gold : 0.0; }
  double f1() const;
};

double f1_from(double p, double r);

bool clause_match(const Clause& pred, const Clause& gold, const VariableMapping& m,
                  const EvalConfig& cfg);

// Exact maximum over all kind-preserving injective mappings. Throws
// OracleLimitExceeded when the predicted side has too many variables.
MatchResult brute_force_match(const Drs& pred, const Drs& gold, const EvalConfig& cfg);

// Restarted steepest-ascent hill climbing; deterministic under cfg.seed.
MatchResult match_score(const Drs& pred, const Drs& gold, const EvalConfig& cfg);

struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<double> per_doc_f1;
  int ill_formed_count = 0;
  long matched_sum = 0;
  long produced_sum = 0;
  long gold_sum = 0;
};

ScoreReport evaluate_corpus(const std::vector<Drs>& preds, const std::vector<Drs>& golds,
                            const EvalConfig& cfg);

// Majority (lemma -> most frequent sense) table for the infrequent-sense score.
struct SenseTable {
  std::map<std::string, std::string> majority;

  static SenseTable from_corpus(const std::vector<Drs>& training_docs);
  static SenseTable load(const std::string& path);
  void save(const std::string& path) const;
};

struct CategoryCounts {
  long matched = 0;
  long produced = 0;
  long gold = 0;

  double precision() const { return produced > 0 ? double(matched) / produced : 0.0; }
  double recall() const { return gold > 0 ? double(matched) / gold : 0.0; }
  double f1() const { return f1_from(precision(), recall()); }
};

struct DetailedReport {
  ScoreReport overall;
  CategoryCounts operators, roles, concepts, nouns, verbs, adjectives, adverbs, events;
  double perfect_sense_f1 = 0.0;
  std::optional<double> infrequent_sense_f1;
  int ill_formed = 0;
  int perfect_docs = 0;  // per-doc F1 == 1.0
  int zero_docs = 0;     // per-doc F1 == 0.0
};

DetailedReport detailed_report(const std::vector<Drs>& preds, const std::vector<Drs>& golds,
                               const EvalConfig& cfg, const SenseTable* senses = nullptr);

}  // namespace drs::counter
