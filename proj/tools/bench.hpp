#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsprep/circuit.hpp"
#include "qsprep/qstate.hpp"
#include "qsprep/search.hpp"

namespace qsp::bench {

enum class Flow { exact, nflow, mflow, hybrid };

std::string to_string(Flow flow);
Flow parse_flow(std::string_view name);

// Library defaults plus a pricing budget of 2000 operators, which keeps dense
// 4-qubit searches to seconds; with fallback on, exhaustion means one more
// reduction step.
SearchConfig default_search();

struct RunOptions {
  Flow flow = Flow::hybrid;
  // Unset: exact for exact/hybrid, graycode for the two baselines.
  std::optional<CostModel> cost_model;
  SearchConfig search = default_search();
  bool fallback = true;
  bool verify = true;
  double timeout_seconds = 3600.0;  // <= 0 disables
};

CostModel effective_cost_model(const RunOptions& options);

struct RunResult {
  Circuit circuit;  // lowered to {Ry, CNOT}
  int cnots = 0;
  bool verified = false;
  double seconds = 0.0;
};

// Runs the flow, lowers, and verifies (dense simulation up to 12 qubits,
// sparse propagation beyond). Throws CapExceeded or Timeout.
RunResult run_flow(const SparseState& state, const RunOptions& options);

bool verify_circuit(const Circuit& circuit, const SparseState& target, double tol = 1e-6);

struct Record {
  int n = 0;
  std::size_t m = 0;
  std::string instance;  // "k=2" for Dicke rows, seed index for random ones
  Flow flow = Flow::hybrid;
  std::optional<int> cnots;  // empty: timed out or over a cap
  std::string status;        // "ok", "TLE" or "CAP"
  bool verified = false;
  double seconds = 0.0;
};

struct RunReport {
  std::vector<Flow> flows;
  std::vector<Record> records;  // instance-major, flows in `flows` order
};

// Geometric mean of the positive values; 0 when there are none.
double geometric_mean(const std::vector<double>& values);

// QSPREP_THREADS if set and positive, else the hardware concurrency.
int worker_count();

// Calls fn(i) for i in [0, count) on a worker pool.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

struct DickeBenchOptions {
  int max_n = 6;
  std::vector<Flow> flows{Flow::mflow, Flow::nflow, Flow::hybrid};
  RunOptions base;
};

// Rows (n, k) for 3 <= n <= max_n and 1 <= k <= n/2.
RunReport bench_dicke(const DickeBenchOptions& options);

struct RandomBenchOptions {
  int n_min = 3;
  int n_max = 6;
  bool dense = false;  // dense: m = 2^(n-1); sparse: m = n
  int count = 10;
  std::uint64_t seed = 1;
  std::vector<Flow> flows{Flow::mflow, Flow::nflow, Flow::hybrid};
  RunOptions base;
};

std::uint64_t instance_seed(std::uint64_t seed, int n, int index);
RunReport bench_random(const RandomBenchOptions& options);

// Wide CSV: one row per instance with a column per flow, then summary rows.
// Timing columns are opt-in so that reruns are byte-identical by default.
void write_dicke_csv(const RunReport& report, std::ostream& out, bool timing = false);
void write_random_csv(const RunReport& report, std::ostream& out, bool timing = false);

}  // namespace qsp::bench
