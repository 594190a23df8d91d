#pragma once

// Brute-force reference evaluation of the two contracts over small synthetic
// instances. The four formulas are expanded literally with nested loops and
// share no code with the production evaluator; equivalence between the two is
// asserted over randomized instances.

#include <random>
#include <string>
#include <vector>

#include "resil/engine.hpp"
#include "resil/harness.hpp"
#include "resil/site_model.hpp"

namespace oracle {

using resil::UsageKind;

// A synthetic analysis instance: usage kinds per (site, test) as a standard
// run would record them, plus the injected outcome per (site, test). One
// injected exception type per site.
struct Instance {
  int n_sites = 0;
  int n_tests = 0;
  std::vector<std::vector<std::vector<UsageKind>>> kinds;  // [site][test]; empty = not covering
  std::vector<std::vector<bool>> pass;                     // [site][test] injected outcome

  std::string site_id(int s) const { return "s" + std::to_string(s); }
  std::string test_id(int t) const { return "t" + std::to_string(t); }
};

struct PredicateBits {
  bool si = false;
  bool sd = false;
  bool res = false;
  bool nres = false;
};

inline PredicateBits literal_eval(const Instance& ins, int s) {
  std::vector<int> cov;
  for (int t = 0; t < ins.n_tests; ++t) {
    if (!ins.kinds[s][t].empty()) cov.push_back(t);
  }

  PredicateBits b;

  // forall a in A_x, forall u in usages(x, a): white(u) implies pass(a, x)
  b.si = true;
  for (int a : cov) {
    for (UsageKind u : ins.kinds[s][a]) {
      if (u == UsageKind::kWhite && !ins.pass[s][a]) b.si = false;
    }
  }

  // exists a in A_x: usages nonempty and all white and not pass(a, x)
  b.sd = false;
  for (int a : cov) {
    bool all_white = !ins.kinds[s][a].empty();
    for (UsageKind u : ins.kinds[s][a]) {
      if (u != UsageKind::kWhite) all_white = false;
    }
    if (all_white && !ins.pass[s][a]) b.sd = true;
  }

  // (forall a in A_x: pass(a, x)) and (exists a, u: pink(u))
  bool all_pass = true;
  bool any_pink = false;
  for (int a : cov) {
    if (!ins.pass[s][a]) all_pass = false;
    for (UsageKind u : ins.kinds[s][a]) {
      if (u == UsageKind::kPink) any_pink = true;
    }
  }
  b.res = all_pass && any_pink;

  // exists a in A_x: not pass(a, x)
  b.nres = false;
  for (int a : cov) {
    if (!ins.pass[s][a]) b.nres = true;
  }

  return b;
}

// Engine-shaped inputs equivalent to the instance.
struct Materialized {
  resil::SiteInventory inv;
  resil::CoverageIndex cov;
  resil::InjectionMatrix matrix;
};

inline Materialized materialize(const Instance& ins) {
  Materialized m;
  for (int s = 0; s < ins.n_sites; ++s) {
    resil::TryCatchSite site;
    site.site_id = ins.site_id(s);
    site.stmt_uid = "u" + std::to_string(s);
    site.try_span.file = "src/synthetic.cpp";
    site.catch_ordinal = 0;
    site.caught_types = {"SyntheticError"};
    m.inv.sites.push_back(site);
    m.cov.by_site[site.site_id];

    resil::MatrixRow row;
    row.site_id = site.site_id;
    row.injected_type = "SyntheticError";
    for (int t = 0; t < ins.n_tests; ++t) {
      if (ins.kinds[s][t].empty()) continue;
      m.cov.by_site[site.site_id][ins.test_id(t)] = ins.kinds[s][t];
      resil::CellValue c;
      c.state = ins.pass[s][t] ? resil::Cell::kPassed : resil::Cell::kFailed;
      row.cells[ins.test_id(t)] = c;
    }
    m.matrix.rows.push_back(std::move(row));
  }
  return m;
}

inline Instance random_instance(std::mt19937& rng, int max_sites = 5, int max_tests = 8) {
  Instance ins;
  ins.n_sites = std::uniform_int_distribution<int>(1, max_sites)(rng);
  ins.n_tests = std::uniform_int_distribution<int>(1, max_tests)(rng);
  ins.kinds.assign(ins.n_sites, std::vector<std::vector<UsageKind>>(ins.n_tests));
  ins.pass.assign(ins.n_sites, std::vector<bool>(ins.n_tests, false));
  std::uniform_int_distribution<int> usage_count(0, 3);
  std::uniform_int_distribution<int> kind_pick(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int s = 0; s < ins.n_sites; ++s) {
    for (int t = 0; t < ins.n_tests; ++t) {
      int n = usage_count(rng);
      for (int k = 0; k < n; ++k) {
        switch (kind_pick(rng)) {
          case 0: ins.kinds[s][t].push_back(UsageKind::kPink); break;
          case 1: ins.kinds[s][t].push_back(UsageKind::kWhite); break;
          default: ins.kinds[s][t].push_back(UsageKind::kBlue); break;
        }
      }
      ins.pass[s][t] = coin(rng) == 1;
    }
  }
  return ins;
}

}  // namespace oracle
