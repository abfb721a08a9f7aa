#include "drs/counter.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "drs/referee.hpp"
#include "drs/rng.hpp"

namespace drs::counter {

double f1_from(double p, double r) {
  return (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

double MatchResult::f1() const { return f1_from(precision(), recall()); }

std::optional<Variable> VariableMapping::image(const Variable& pred) const {
  for (const auto& [p, g] : pairs)
    if (p == pred) return g;
  return std::nullopt;
}

bool clause_match(const Clause& pred, const Clause& gold, const VariableMapping& m,
                  const EvalConfig& cfg) {
  if (pred.pred != gold.pred) return false;
  if (pred.args.size() != gold.args.size()) return false;
  auto img = m.image(pred.box);
  if (!img || !(*img == gold.box)) return false;
  for (size_t i = 0; i < pred.args.size(); ++i) {
    const Term& tp = pred.args[i];
    const Term& tg = gold.args[i];
    if (const auto* vp = std::get_if<Variable>(&tp)) {
      const auto* vg = std::get_if<Variable>(&tg);
      if (!vg) return false;
      auto iv = m.image(*vp);
      if (!iv || !(*iv == *vg)) return false;
    } else if (const auto* cp = std::get_if<Constant>(&tp)) {
      const auto* cg = std::get_if<Constant>(&tg);
      if (!cg || cp->value != cg->value) return false;
    } else {
      const auto& sp = std::get<Sense>(tp);
      const auto* sg = std::get_if<Sense>(&tg);
      if (!sg) return false;
      if (!cfg.default_sense && sp.value != sg->value) return false;
    }
  }
  return true;
}

namespace {

// ---------------------------------------------------------------------------
// Matching engine. Variables get dense per-kind indices; each predicted
// clause keeps the list of gold clauses it could match, each as the variable
// pair conditions that the mapping must satisfy.
// ---------------------------------------------------------------------------

struct VarCond {
  int kind;
  int pred_idx;
  int gold_idx;
};

struct CompatEntry {
  std::array<VarCond, 3> conds;
  int n_conds = 0;
};

struct Instance {
  std::array<std::vector<Variable>, kNumVarKinds> pred_vars, gold_vars;
  std::vector<std::vector<CompatEntry>> compat;                       // per pred clause
  std::array<std::vector<std::vector<int>>, kNumVarKinds> clauses_of; // kind -> pred idx -> clauses
  int produced = 0;
  int gold = 0;
  int total_pred_vars = 0;
};

struct SlotSig {
  int tag;   // 0 none, 1 var, 2 symbol
  int kind;  // var kind
  int value; // dense var index or symbol id
};

struct ClauseSig {
  int pred_sym;
  std::array<SlotSig, 3> slots;
  int n_slots;
};

class Interner {
 public:
  int id(const std::string& s) {
    auto [it, _] = map_.try_emplace(s, static_cast<int>(map_.size()));
    return it->second;
  }

 private:
  std::unordered_map<std::string, int> map_;
};

int dense_index(std::array<std::vector<Variable>, kNumVarKinds>& vars, const Variable& v) {
  auto& list = vars[static_cast<int>(v.kind)];
  for (size_t i = 0; i < list.size(); ++i)
    if (list[i] == v) return static_cast<int>(i);
  list.push_back(v);
  return static_cast<int>(list.size()) - 1;
}

ClauseSig make_sig(const Clause& c, Interner& intern,
                   std::array<std::vector<Variable>, kNumVarKinds>& vars,
                   const EvalConfig& cfg) {
  ClauseSig sig;
  sig.pred_sym = intern.id("P\x01" + c.pred.name + (c.pred.cls == PredicateClass::Operator ? "\x01O" :
                        c.pred.cls == PredicateClass::Role ? "\x01R" : "\x01C"));
  sig.n_slots = 1 + static_cast<int>(c.args.size());
  sig.slots[0] = {1, static_cast<int>(c.box.kind), dense_index(vars, c.box)};
  for (size_t i = 0; i < c.args.size(); ++i) {
    const Term& t = c.args[i];
    SlotSig s{};
    if (const auto* v = std::get_if<Variable>(&t)) {
      s = {1, static_cast<int>(v->kind), dense_index(vars, *v)};
    } else if (const auto* k = std::get_if<Constant>(&t)) {
      s = {2, 0, intern.id("C\x01" + k->value)};
    } else {
      const auto& sense = std::get<Sense>(t);
      s = {2, 0, intern.id(cfg.default_sense ? std::string("S\x01*") : "S\x01" + sense.value)};
    }
    sig.slots[1 + i] = s;
  }
  return sig;
}

Instance build_instance(const Drs& pred, const Drs& gold, const EvalConfig& cfg) {
  Instance inst;
  Interner intern;
  std::vector<ClauseSig> psigs, gsigs;
  psigs.reserve(pred.clauses.size());
  gsigs.reserve(gold.clauses.size());
  for (const Clause& c : pred.clauses) psigs.push_back(make_sig(c, intern, inst.pred_vars, cfg));
  for (const Clause& c : gold.clauses) gsigs.push_back(make_sig(c, intern, inst.gold_vars, cfg));
  inst.produced = static_cast<int>(pred.clauses.size());
  inst.gold = static_cast<int>(gold.clauses.size());
  for (int k = 0; k < kNumVarKinds; ++k) {
    inst.total_pred_vars += static_cast<int>(inst.pred_vars[k].size());
    inst.clauses_of[k].resize(inst.pred_vars[k].size());
  }

  inst.compat.resize(psigs.size());
  for (size_t i = 0; i < psigs.size(); ++i) {
    const ClauseSig& p = psigs[i];
    for (const ClauseSig& g : gsigs) {
      if (p.pred_sym != g.pred_sym || p.n_slots != g.n_slots) continue;
      CompatEntry e;
      bool ok = true;
      for (int s = 0; s < p.n_slots && ok; ++s) {
        const SlotSig& ps = p.slots[s];
        const SlotSig& gs = g.slots[s];
        if (ps.tag != gs.tag) { ok = false; break; }
        if (ps.tag == 2) {
          if (ps.value != gs.value) ok = false;
        } else {
          if (ps.kind != gs.kind) { ok = false; break; }
          // duplicate condition on the same variable pair is harmless
          e.conds[e.n_conds++] = {ps.kind, ps.value, gs.value};
        }
      }
      if (ok) inst.compat[i].push_back(e);
    }
    // index clauses by the predicted variables they mention
    const ClauseSig& p2 = psigs[i];
    for (int s = 0; s < p2.n_slots; ++s)
      if (p2.slots[s].tag == 1) {
        auto& lst = inst.clauses_of[p2.slots[s].kind][p2.slots[s].value];
        if (lst.empty() || lst.back() != static_cast<int>(i)) lst.push_back(static_cast<int>(i));
      }
  }
  return inst;
}

// Mapping state: per kind, pred dense index -> gold dense index or -1.
struct MapState {
  std::array<std::vector<int>, kNumVarKinds> p2g, g2p;

  explicit MapState(const Instance& inst) {
    for (int k = 0; k < kNumVarKinds; ++k) {
      p2g[k].assign(inst.pred_vars[k].size(), -1);
      g2p[k].assign(inst.gold_vars[k].size(), -1);
    }
  }

  void set(int k, int p, int g) {
    int old = p2g[k][p];
    if (old >= 0) g2p[k][old] = -1;
    p2g[k][p] = g;
    if (g >= 0) g2p[k][g] = p;
  }
};

// Lexicographic word over predicted variables in kind/dense order; unmapped
// sorts last so the tie-break prefers mapped-to-lower-gold assignments.
std::vector<int> mapping_word(const MapState& m) {
  std::vector<int> w;
  for (int k = 0; k < kNumVarKinds; ++k)
    for (int g : m.p2g[k]) w.push_back(g < 0 ? std::numeric_limits<int>::max() : g);
  return w;
}

class Matcher {
 public:
  Matcher(const Instance& inst) : inst_(inst), map_(inst), ok_(inst.compat.size(), false) {}

  const MapState& state() const { return map_; }
  int matched() const { return matched_; }

  void reset(const MapState& m) {
    map_ = m;
    matched_ = 0;
    for (size_t i = 0; i < inst_.compat.size(); ++i) {
      ok_[i] = eval_clause(static_cast<int>(i));
      matched_ += ok_[i];
    }
  }

  // Steepest-ascent over single mapping-pair changes.
  void climb() {
    struct Move { int type, kind, a, b; };
    for (;;) {
      int best_delta = 0;
      Move best{};
      auto consider = [&](int type, int k, int a, int b) {
        int d = try_delta(type, k, a, b);
        if (d > best_delta) {
          best_delta = d;
          best = {type, k, a, b};
        }
      };
      for (int k = 0; k < kNumVarKinds; ++k) {
        int np = static_cast<int>(map_.p2g[k].size());
        int ng = static_cast<int>(map_.g2p[k].size());
        for (int p = 0; p < np; ++p) {
          if (map_.p2g[k][p] < 0) {
            for (int g = 0; g < ng; ++g)
              if (map_.g2p[k][g] < 0) consider(kAdd, k, p, g);
          } else {
            for (int g = 0; g < ng; ++g)
              if (map_.g2p[k][g] < 0) consider(kReassign, k, p, g);
            for (int q = 0; q < np; ++q)
              if (q != p && map_.p2g[k][q] < 0) consider(kTransfer, k, p, q);
            for (int q = p + 1; q < np; ++q)
              if (map_.p2g[k][q] >= 0) consider(kSwap, k, p, q);
            consider(kRemove, k, p, -1);
          }
        }
      }
      if (best_delta <= 0) break;
      apply(best.type, best.kind, best.a, best.b);
    }
  }

 private:
  static constexpr int kAdd = 0, kReassign = 1, kTransfer = 2, kSwap = 3, kRemove = 4;

  bool eval_clause(int i) const {
    for (const CompatEntry& e : inst_.compat[i]) {
      bool all = true;
      for (int c = 0; c < e.n_conds; ++c) {
        const VarCond& vc = e.conds[c];
        if (map_.p2g[vc.kind][vc.pred_idx] != vc.gold_idx) { all = false; break; }
      }
      if (all) return true;
    }
    return false;
  }

  void edit(int type, int k, int a, int b) {
    switch (type) {
      case kAdd: map_.set(k, a, b); break;
      case kReassign: map_.set(k, a, b); break;
      case kTransfer: {
        int g = map_.p2g[k][a];
        map_.set(k, a, -1);
        map_.set(k, b, g);
        break;
      }
      case kSwap: {
        int ga = map_.p2g[k][a], gb = map_.p2g[k][b];
        map_.set(k, a, -1);
        map_.set(k, b, ga);
        map_.set(k, a, gb);
        break;
      }
      case kRemove: map_.set(k, a, -1); break;
    }
  }

  void undo(int type, int k, int a, int b, int old_a, int old_b) {
    switch (type) {
      case kAdd: map_.set(k, a, -1); break;
      case kReassign: map_.set(k, a, old_a); break;
      case kTransfer:
        map_.set(k, b, -1);
        map_.set(k, a, old_a);
        break;
      case kSwap:
        map_.set(k, a, -1);
        map_.set(k, b, old_b);
        map_.set(k, a, old_a);
        break;
      case kRemove: map_.set(k, a, old_a); break;
    }
  }

  template <typename Fn>
  void for_affected(int type, int k, int a, int b, Fn&& fn) const {
    auto visit = [&](int p) {
      for (int ci : inst_.clauses_of[k][p]) fn(ci);
    };
    visit(a);
    if (type == kTransfer || type == kSwap) visit(b);
  }

  int try_delta(int type, int k, int a, int b) {
    int old_a = a >= 0 ? map_.p2g[k][a] : -1;
    int old_b = (type == kSwap) ? map_.p2g[k][b] : -1;
    edit(type, k, a, b);
    int delta = 0;
    scratch_.clear();
    for_affected(type, k, a, b, [&](int ci) {
      for (int seen : scratch_)
        if (seen == ci) return;
      scratch_.push_back(ci);
      delta += int(eval_clause(ci)) - int(ok_[ci]);
    });
    undo(type, k, a, b, old_a, old_b);
    return delta;
  }

  void apply(int type, int k, int a, int b) {
    edit(type, k, a, b);
    scratch_.clear();
    for_affected(type, k, a, b, [&](int ci) {
      for (int seen : scratch_)
        if (seen == ci) return;
      scratch_.push_back(ci);
      bool now = eval_clause(ci);
      matched_ += int(now) - int(ok_[ci]);
      ok_[ci] = now;
    });
  }

  const Instance& inst_;
  MapState map_;
  std::vector<char> ok_;
  std::vector<int> scratch_;
  int matched_ = 0;
};

// Signature-based init: pair variables whose clause contexts share symbols.
MapState smart_init(const Instance& inst) {
  MapState m(inst);
  for (int k = 0; k < kNumVarKinds; ++k) {
    int np = static_cast<int>(inst.pred_vars[k].size());
    int ng = static_cast<int>(inst.gold_vars[k].size());
    if (np == 0 || ng == 0) continue;
    // similarity = number of compat entries that would pin p to g
    std::vector<std::vector<int>> sim(np, std::vector<int>(ng, 0));
    for (const auto& entries : inst.compat)
      for (const CompatEntry& e : entries)
        for (int c = 0; c < e.n_conds; ++c)
          if (e.conds[c].kind == k) ++sim[e.conds[c].pred_idx][e.conds[c].gold_idx];
    struct Cand { int s, p, g; };
    std::vector<Cand> cands;
    for (int p = 0; p < np; ++p)
      for (int g = 0; g < ng; ++g)
        if (sim[p][g] > 0) cands.push_back({sim[p][g], p, g});
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.s != b.s) return a.s > b.s;
      if (a.p != b.p) return a.p < b.p;
      return a.g < b.g;
    });
    for (const Cand& c : cands)
      if (m.p2g[k][c.p] < 0 && m.g2p[k][c.g] < 0) m.set(k, c.p, c.g);
    // fill remaining greedily in index order
    for (int p = 0, g = 0; p < np; ++p) {
      if (m.p2g[k][p] >= 0) continue;
      while (g < ng && m.g2p[k][g] >= 0) ++g;
      if (g >= ng) break;
      m.set(k, p, g);
    }
  }
  return m;
}

MapState random_init(const Instance& inst, Rng& rng) {
  MapState m(inst);
  for (int k = 0; k < kNumVarKinds; ++k) {
    int np = static_cast<int>(inst.pred_vars[k].size());
    int ng = static_cast<int>(inst.gold_vars[k].size());
    if (np == 0 || ng == 0) continue;
    std::vector<int> ps(np), gs(ng);
    for (int i = 0; i < np; ++i) ps[i] = i;
    for (int i = 0; i < ng; ++i) gs[i] = i;
    rng.shuffle(ps);
    rng.shuffle(gs);
    int n = std::min(np, ng);
    for (int i = 0; i < n; ++i) m.set(k, ps[i], gs[i]);
  }
  return m;
}

MatchResult result_from(const Instance& inst, const MapState& m, int matched) {
  MatchResult r;
  r.matched = matched;
  r.produced = inst.produced;
  r.gold = inst.gold;
  for (int k = 0; k < kNumVarKinds; ++k)
    for (size_t p = 0; p < m.p2g[k].size(); ++p)
      if (m.p2g[k][p] >= 0)
        r.mapping.pairs.emplace_back(inst.pred_vars[k][p], inst.gold_vars[k][m.p2g[k][p]]);
  std::sort(r.mapping.pairs.begin(), r.mapping.pairs.end());
  return r;
}

bool treat_ill_formed(const Drs& pred, const EvalConfig& cfg) {
  if (!cfg.validate_first) return false;
  if (pred.meta.malformed) return true;
  return !referee::validate(pred).well_formed;
}

MatchResult ill_formed_result(const Drs& pred, const Drs& gold) {
  MatchResult r;
  r.matched = 0;
  r.produced = static_cast<int>(pred.clauses.size());
  r.gold = static_cast<int>(gold.clauses.size());
  return r;
}

}  // namespace

MatchResult match_score(const Drs& pred, const Drs& gold, const EvalConfig& cfg) {
  if (cfg.restarts < 1) fail(Errc::invalid_config, "restarts must be >= 1");
  if (treat_ill_formed(pred, cfg)) return ill_formed_result(pred, gold);

  Instance inst = build_instance(pred, gold, cfg);
  Matcher matcher(inst);
  Rng rng(cfg.seed);

  bool have_best = false;
  int best_matched = -1;
  std::vector<int> best_word;
  MapState best_map(inst);

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    MapState init = restart == 0 ? smart_init(inst) : random_init(inst, rng);
    matcher.reset(init);
    matcher.climb();
    std::vector<int> word = mapping_word(matcher.state());
    if (!have_best || matcher.matched() > best_matched ||
        (matcher.matched() == best_matched && word < best_word)) {
      have_best = true;
      best_matched = matcher.matched();
      best_word = std::move(word);
      best_map = matcher.state();
    }
  }
  return result_from(inst, best_map, best_matched);
}

MatchResult brute_force_match(const Drs& pred, const Drs& gold, const EvalConfig& cfg) {
  if (treat_ill_formed(pred, cfg)) return ill_formed_result(pred, gold);

  Instance inst = build_instance(pred, gold, cfg);
  if (inst.total_pred_vars > cfg.oracle_limit)
    fail(Errc::oracle_limit_exceeded,
         std::to_string(inst.total_pred_vars) + " predicted variables exceed oracle limit " +
             std::to_string(cfg.oracle_limit));

  Matcher matcher(inst);
  MapState m(inst);
  int best_matched = -1;
  std::vector<int> best_word;
  MapState best_map(inst);
  long leaves = 0;
  constexpr long kLeafCap = 20'000'000;

  // Depth-first over (kind, pred index); a variable may stay unmapped only
  // when the remaining gold pool is short, which keeps only maximal maps.
  // count_only first bounds the enumeration before any evaluation runs.
  std::function<bool(int, int, bool)> rec = [&](int k, int p, bool count_only) -> bool {
    while (k < kNumVarKinds && p >= static_cast<int>(inst.pred_vars[k].size())) {
      ++k;
      p = 0;
    }
    if (k == kNumVarKinds) {
      if (++leaves > kLeafCap) return false;
      if (count_only) return true;
      matcher.reset(m);
      std::vector<int> word = mapping_word(m);
      if (matcher.matched() > best_matched ||
          (matcher.matched() == best_matched && word < best_word)) {
        best_matched = matcher.matched();
        best_word = std::move(word);
        best_map = m;
      }
      return true;
    }
    int np = static_cast<int>(inst.pred_vars[k].size());
    int ng = static_cast<int>(inst.gold_vars[k].size());
    int free_gold = 0;
    for (int g = 0; g < ng; ++g) free_gold += (m.g2p[k][g] < 0);
    for (int g = 0; g < ng; ++g) {
      if (m.g2p[k][g] >= 0) continue;
      m.set(k, p, g);
      bool ok = rec(k, p + 1, count_only);
      m.set(k, p, -1);
      if (!ok) return false;
    }
    if (free_gold < np - p)
      if (!rec(k, p + 1, count_only)) return false;  // someone must stay unmapped
    return true;
  };

  if (!rec(0, 0, true))
    fail(Errc::oracle_limit_exceeded, "mapping enumeration too large for the oracle");
  leaves = 0;
  rec(0, 0, false);

  return result_from(inst, best_map, best_matched);
}

namespace {

struct DocEval {
  MatchResult strict;
  MatchResult relaxed;  // default_sense = true
  bool ill_formed = false;
  double f1 = 0.0;
};

DocEval eval_doc(const Drs& pred, const Drs& gold, const EvalConfig& cfg, uint64_t doc_salt,
                 bool want_relaxed) {
  DocEval ev;
  EvalConfig doc_cfg = cfg;
  doc_cfg.seed = Rng(cfg.seed).split(doc_salt).next_u64();
  ev.ill_formed = treat_ill_formed(pred, cfg);
  ev.strict = match_score(pred, gold, doc_cfg);
  if (want_relaxed) {
    EvalConfig relaxed = doc_cfg;
    relaxed.default_sense = true;
    ev.relaxed = match_score(pred, gold, relaxed);
  }
  if (ev.strict.produced == 0 && ev.strict.gold == 0 && !ev.ill_formed)
    ev.f1 = 1.0;
  else
    ev.f1 = ev.strict.f1();
  return ev;
}

std::vector<DocEval> eval_all(const std::vector<Drs>& preds, const std::vector<Drs>& golds,
                              const EvalConfig& cfg, bool want_relaxed) {
  if (preds.size() != golds.size())
    fail(Errc::length_mismatch, std::to_string(preds.size()) + " predictions vs " +
                                    std::to_string(golds.size()) + " gold documents");
  std::vector<DocEval> evals(preds.size());
  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || preds.size() < 2) {
    for (size_t i = 0; i < preds.size(); ++i)
      evals[i] = eval_doc(preds[i], golds[i], cfg, i, want_relaxed);
  } else {
    std::vector<std::thread> workers;
    std::atomic<size_t> next{0};
    for (int t = 0; t < jobs; ++t)
      workers.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= preds.size()) return;
          evals[i] = eval_doc(preds[i], golds[i], cfg, i, want_relaxed);
        }
      });
    for (auto& w : workers) w.join();
  }
  return evals;
}

ScoreReport aggregate(const std::vector<DocEval>& evals) {
  ScoreReport rep;
  for (const DocEval& ev : evals) {
    rep.matched_sum += ev.strict.matched;
    rep.produced_sum += ev.strict.produced;
    rep.gold_sum += ev.strict.gold;
    rep.per_doc_f1.push_back(ev.f1);
    rep.ill_formed_count += ev.ill_formed;
  }
  rep.precision = rep.produced_sum > 0 ? double(rep.matched_sum) / double(rep.produced_sum) : 0.0;
  rep.recall = rep.gold_sum > 0 ? double(rep.matched_sum) / double(rep.gold_sum) : 0.0;
  rep.f1 = f1_from(rep.precision, rep.recall);
  return rep;
}

enum CatBit {
  kCatOperator = 1,
  kCatRole = 2,
  kCatConcept = 4,
  kCatNoun = 8,
  kCatVerb = 16,
  kCatAdj = 32,
  kCatAdv = 64,
  kCatEvent = 128,
  kCatInfreq = 256,
};

int clause_categories(const Clause& c, const SenseTable* senses) {
  switch (c.pred.cls) {
    case PredicateClass::Operator: return kCatOperator;
    case PredicateClass::Role: return kCatRole;
    case PredicateClass::Concept: break;
  }
  int bits = kCatConcept;
  const auto& sense = std::get<Sense>(c.args[0]);
  switch (sense.pos()) {
    case 'n': bits |= kCatNoun; break;
    case 'v': bits |= kCatVerb; break;
    case 'a': bits |= kCatAdj; break;
    case 'r': bits |= kCatAdv; break;
  }
  if (const auto* v = std::get_if<Variable>(&c.args[1]); v && v->kind == VarKind::Event)
    bits |= kCatEvent;
  if (senses) {
    auto it = senses->majority.find(c.pred.name);
    if (it == senses->majority.end() || it->second != sense.value) bits |= kCatInfreq;
  }
  return bits;
}

}  // namespace

ScoreReport evaluate_corpus(const std::vector<Drs>& preds, const std::vector<Drs>& golds,
                            const EvalConfig& cfg) {
  return aggregate(eval_all(preds, golds, cfg, false));
}

DetailedReport detailed_report(const std::vector<Drs>& preds, const std::vector<Drs>& golds,
                               const EvalConfig& cfg, const SenseTable* senses) {
  std::vector<DocEval> evals = eval_all(preds, golds, cfg, true);

  DetailedReport rep;
  rep.overall = aggregate(evals);
  rep.ill_formed = rep.overall.ill_formed_count;

  long relaxed_matched = 0, relaxed_produced = 0, relaxed_gold = 0;
  CategoryCounts* cats[] = {&rep.operators, &rep.roles, &rep.concepts, &rep.nouns,
                            &rep.verbs,     &rep.adjectives, &rep.adverbs, &rep.events};
  int bits_for[] = {kCatOperator, kCatRole, kCatConcept, kCatNoun,
                    kCatVerb,     kCatAdj,  kCatAdv,     kCatEvent};
  CategoryCounts infreq;

  for (size_t d = 0; d < preds.size(); ++d) {
    const DocEval& ev = evals[d];
    relaxed_matched += ev.relaxed.matched;
    relaxed_produced += ev.relaxed.produced;
    relaxed_gold += ev.relaxed.gold;
    if (ev.f1 >= 1.0) ++rep.perfect_docs;
    if (ev.f1 <= 0.0) ++rep.zero_docs;

    for (const Clause& c : golds[d].clauses) {
      int bits = clause_categories(c, senses);
      for (int i = 0; i < 8; ++i)
        if (bits & bits_for[i]) ++cats[i]->gold;
      if (bits & kCatInfreq) ++infreq.gold;
    }
    for (const Clause& c : preds[d].clauses) {
      int bits = clause_categories(c, senses);
      bool matched = false;
      if (!ev.ill_formed) {
        for (const Clause& g : golds[d].clauses)
          if (clause_match(c, g, ev.strict.mapping, cfg)) {
            matched = true;
            break;
          }
      }
      for (int i = 0; i < 8; ++i)
        if (bits & bits_for[i]) {
          ++cats[i]->produced;
          if (matched) ++cats[i]->matched;
        }
      if (bits & kCatInfreq) {
        ++infreq.produced;
        if (matched) ++infreq.matched;
      }
    }
  }

  double rp = relaxed_produced > 0 ? double(relaxed_matched) / relaxed_produced : 0.0;
  double rr = relaxed_gold > 0 ? double(relaxed_matched) / relaxed_gold : 0.0;
  rep.perfect_sense_f1 = f1_from(rp, rr);
  if (senses) rep.infrequent_sense_f1 = infreq.f1();
  return rep;
}

SenseTable SenseTable::from_corpus(const std::vector<Drs>& docs) {
  std::map<std::string, std::map<std::string, int>> counts;
  for (const Drs& d : docs)
    for (const Clause& c : d.clauses)
      if (c.pred.cls == PredicateClass::Concept)
        ++counts[c.pred.name][std::get<Sense>(c.args[0]).value];
  SenseTable table;
  for (const auto& [lemma, senses] : counts) {
    int best = -1;
    std::string best_sense;
    for (const auto& [sense, n] : senses)
      if (n > best) {
        best = n;
        best_sense = sense;
      }
    table.majority[lemma] = best_sense;
  }
  return table;
}

SenseTable SenseTable::load(const std::string& path) {
  SenseTable table;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      fail(Errc::parse_error, path + ":" + std::to_string(lineno) + ": expected lemma<TAB>sense");
    table.majority[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return table;
}

void SenseTable::save(const std::string& path) const {
  std::string out;
  for (const auto& [lemma, sense] : majority) {
    out += lemma;
    out += '\t';
    out += sense;
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace drs::counter
