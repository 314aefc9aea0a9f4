#pragma once

#include <deque>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "sbpairs/engine.hpp"

namespace fixtures {

// Three stocks with similarity 1 everywhere. A and C sit above their base
// and B below, so shorting A or C against B is tradable:
// w(A,B) = 0.99 - 1.01 = -0.02, w(C,B) = 0.99 - 1.005 = -0.015.
struct ScriptedEngine {
  sbpairs::Universe universe = fixtures::universe({"A", "B", "C"});
  sbpairs::SimilarityMatrix sim{3, 1.0};
  std::deque<std::vector<int>> script;  // cycles to return; {} = empty run
  std::vector<sbpairs::DecisionRecord> log;
  std::ostringstream csv;
  sbpairs::Engine engine;

  explicit ScriptedEngine(sbpairs::EngineConfig cfg = {}) : engine(universe, sim, cfg) {
    sbpairs::write_decision_header(csv);
    engine.set_solver([this](const sbpairs::QuboProblem& q, sbpairs::XorshiftRng&) {
      sbpairs::EdgeVars x(q.n_stocks());
      if (!script.empty()) {
        x = cycle_vars(q.n_stocks(), script.front());
        script.pop_front();
      }
      return x;
    });
    engine.set_decision_sink([this](const sbpairs::DecisionRecord& r) {
      log.push_back(r);
      sbpairs::write_decision(csv, r, universe);
    });
  }

  void prime(std::int64_t ts) {
    engine.on_feed(quote(ts, "A", "1010", "1011"));
    engine.on_feed(quote(ts, "C", "1005", "1006"));
  }

  std::vector<sbpairs::OrderIntent> tick(std::int64_t ts, const char* b_bid = "989", const char* b_ask = "990") {
    return engine.on_feed(quote(ts, "B", b_bid, b_ask));
  }

  std::vector<int> events() const {
    std::vector<int> out;
    for (const auto& r : log) out.push_back(r.event);
    return out;
  }
};

}  // namespace fixtures
