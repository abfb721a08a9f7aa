#include "drs/referee.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace drs::referee {

const char* violation_name(Violation v) {
  switch (v) {
    case Violation::FreeVariable: return "FreeVariable";
    case Violation::SubordinationCycle: return "SubordinationCycle";
    case Violation::Disconnected: return "Disconnected";
    case Violation::UnboundBox: return "UnboundBox";
  }
  return "?";
}

std::vector<std::pair<Variable, Variable>> subordination_graph(const Drs& d) {
  std::vector<std::pair<Variable, Variable>> edges;
  std::set<std::pair<Variable, Variable>> seen;
  for (const Clause& c : d.clauses) {
    if (c.pred.cls != PredicateClass::Operator || c.args.size() != 1) continue;
    const auto* v = std::get_if<Variable>(&c.args[0]);
    if (!v || v->kind != VarKind::Box) continue;
    auto e = std::make_pair(c.box, *v);
    if (seen.insert(e).second) edges.push_back(e);
  }
  return edges;
}

namespace {

bool has_cycle(const std::vector<std::pair<Variable, Variable>>& edges,
               std::string* detail) {
  std::map<Variable, std::vector<Variable>> adj;
  std::set<Variable> nodes;
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    nodes.insert(a);
    nodes.insert(b);
  }
  // 0 = unvisited, 1 = on stack, 2 = done
  std::map<Variable, int> state;
  std::vector<Variable> stack;
  std::function<bool(const Variable&)> dfs = [&](const Variable& v) -> bool {
    state[v] = 1;
    stack.push_back(v);
    for (const Variable& w : adj[v]) {
      int s = state.count(w) ? state[w] : 0;
      if (s == 1) {
        if (detail) {
          std::string cyc = w.render();
          for (auto it = std::find(stack.begin(), stack.end(), w); it != stack.end(); ++it)
            if (*it != w) cyc += " -> " + it->render();
          *detail = cyc + " -> " + w.render();
        }
        return true;
      }
      if (s == 0 && dfs(w)) return true;
    }
    stack.pop_back();
    state[v] = 2;
    return false;
  };
  for (const Variable& v : nodes)
    if (!state.count(v) && dfs(v)) return true;
  return false;
}

}  // namespace

ValidationReport validate(const Drs& d) {
  ValidationReport report;

  std::set<Variable> introduced;   // non-box vars with a REF clause
  std::set<Variable> bound_boxes;  // clause heads + boxes under box-to-box operators
  std::set<Variable> used_nonbox;
  std::set<Variable> used_boxes;

  for (const Clause& c : d.clauses) {
    bound_boxes.insert(c.box);
    if (c.pred.cls == PredicateClass::Operator && c.pred.name == "REF" && c.args.size() == 1) {
      if (const auto* v = std::get_if<Variable>(&c.args[0]))
        if (v->kind != VarKind::Box) introduced.insert(*v);
    }
    for (const Term& t : c.args) {
      const auto* v = std::get_if<Variable>(&t);
      if (!v) continue;
      if (v->kind == VarKind::Box) {
        used_boxes.insert(*v);
        if (c.pred.cls == PredicateClass::Operator) bound_boxes.insert(*v);
      } else {
        used_nonbox.insert(*v);
      }
    }
  }

  for (const Variable& v : used_nonbox)
    if (!introduced.count(v))
      report.add(Violation::FreeVariable, v.render() + " has no REF introduction");

  for (const Variable& b : used_boxes)
    if (!bound_boxes.count(b))
      report.add(Violation::UnboundBox, b.render() + " never heads a clause");

  std::string cycle;
  if (has_cycle(subordination_graph(d), &cycle))
    report.add(Violation::SubordinationCycle, cycle);

  // Connectedness over variable co-occurrence: each clause is a hyperedge
  // joining all variables it mentions.
  std::map<Variable, Variable> parent;
  std::function<Variable(Variable)> find = [&](Variable v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  auto unite = [&](const Variable& a, const Variable& b) {
    Variable ra = find(a), rb = find(b);
    if (!(ra == rb)) parent[ra] = rb;
  };
  for (const Variable& v : d.variables()) parent[v] = v;
  for (const Clause& c : d.clauses) {
    for (const Term& t : c.args)
      if (const auto* v = std::get_if<Variable>(&t)) unite(c.box, *v);
  }
  std::set<Variable> roots;
  for (const auto& [v, _] : parent) roots.insert(find(v));
  if (roots.size() > 1) {
    std::string detail = std::to_string(roots.size()) + " components:";
    for (const Variable& r : roots) detail += ' ' + r.render();
    report.add(Violation::Disconnected, detail);
  }

  return report;
}

}  // namespace drs::referee
