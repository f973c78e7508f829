#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <thread>

#include "qsprep/errors.hpp"
#include "qsprep/reduce.hpp"
#include "qsprep/sim.hpp"

namespace qsp::bench {

std::string to_string(Flow flow) {
  switch (flow) {
    case Flow::exact: return "exact";
    case Flow::nflow: return "nflow";
    case Flow::mflow: return "mflow";
    case Flow::hybrid: return "hybrid";
  }
  return "?";
}

Flow parse_flow(std::string_view name) {
  for (Flow f : {Flow::exact, Flow::nflow, Flow::mflow, Flow::hybrid}) {
    if (name == to_string(f)) return f;
  }
  throw InvalidArgument("unknown flow '" + std::string(name) + "'");
}

SearchConfig default_search() {
  SearchConfig c;
  c.pricing_budget = 2000;
  return c;
}

CostModel effective_cost_model(const RunOptions& options) {
  if (options.cost_model) return *options.cost_model;
  return options.flow == Flow::nflow || options.flow == Flow::mflow ? CostModel::graycode : CostModel::exact;
}

bool verify_circuit(const Circuit& circuit, const SparseState& target, double tol) {
  // Wide registers: Gray-code lowering gives millions of gates, each touching
  // only a few sparse amplitudes but all 2^n dense ones.
  if (target.num_qubits() <= 12) return verify(circuit, target, tol);
  const SparseState out = apply_circuit(SparseState::ground(target.num_qubits()), circuit);
  return fidelity(out, target) >= 1.0 - tol;
}

RunResult run_flow(const SparseState& state, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const CostModel model = effective_cost_model(options);
  SearchConfig search = options.search;
  search.cost_model = model;
  if (options.timeout_seconds > 0) {
    search.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(options.timeout_seconds));
  }
  FlowOptions flow_options;
  flow_options.cost_model = model;

  Circuit circuit;
  switch (options.flow) {
    case Flow::exact: circuit = prepare_exact(state, search); break;
    case Flow::nflow: circuit = prepare_nflow(state, flow_options); break;
    case Flow::mflow: circuit = prepare_mflow(state, flow_options); break;
    case Flow::hybrid: circuit = prepare_hybrid(state, {search, options.fallback}); break;
  }
  RunResult r;
  r.circuit = lower_to_basis(circuit, model);
  r.cnots = r.circuit.cnot_gate_count();
  r.verified = options.verify ? verify_circuit(r.circuit, state) : false;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double geometric_mean(const std::vector<double>& values) {
  double log_sum = 0.0;
  int count = 0;
  for (double v : values) {
    if (v > 0) {
      log_sum += std::log(v);
      ++count;
    }
  }
  return count == 0 ? 0.0 : std::exp(log_sum / count);
}

int worker_count() {
  if (const char* env = std::getenv("QSPREP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

struct Instance {
  SparseState state;
  std::string name;
};

RunReport run_instances(const std::vector<Instance>& instances, const std::vector<Flow>& flows,
                        const RunOptions& base) {
  RunReport report;
  report.flows = flows;
  report.records.resize(instances.size() * flows.size());
  parallel_for(report.records.size(), [&](std::size_t i) {
    const Instance& inst = instances[i / flows.size()];
    Record& rec = report.records[i];
    rec.n = inst.state.num_qubits();
    rec.m = inst.state.cardinality();
    rec.instance = inst.name;
    rec.flow = flows[i % flows.size()];
    RunOptions opts = base;
    opts.flow = rec.flow;
    const auto start = std::chrono::steady_clock::now();
    try {
      auto r = run_flow(inst.state, opts);
      rec.cnots = r.cnots;
      rec.verified = r.verified;
      rec.status = "ok";
    } catch (const Timeout&) {
      rec.status = "TLE";
    } catch (const CapExceeded&) {
      rec.status = "CAP";
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return report;
}

std::string cell(const Record& r) { return r.cnots ? std::to_string(*r.cnots) : r.status; }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void header(std::ostream& out, const RunReport& report, const std::string& lead, bool timing) {
  out << lead;
  for (Flow f : report.flows) out << ',' << to_string(f);
  out << ",verified";
  if (timing) {
    for (Flow f : report.flows) out << ',' << to_string(f) << "_seconds";
  }
  out << '\n';
}

void row_tail(std::ostream& out, const Record* rows, std::size_t k, bool timing) {
  bool verified = true;
  for (std::size_t j = 0; j < k; ++j) {
    out << ',' << cell(rows[j]);
    if (rows[j].cnots && !rows[j].verified) verified = false;
  }
  out << ',' << (verified ? "true" : "false");
  if (timing) {
    for (std::size_t j = 0; j < k; ++j) out << ',' << fixed(rows[j].seconds, 3);
  }
  out << '\n';
}

}  // namespace

RunReport bench_dicke(const DickeBenchOptions& options) {
  std::vector<Instance> instances;
  for (int n = 3; n <= options.max_n; ++n) {
    for (int k = 1; k <= n / 2; ++k) instances.push_back({make_dicke(n, k), "k=" + std::to_string(k)});
  }
  return run_instances(instances, options.flows, options.base);
}

std::uint64_t instance_seed(std::uint64_t seed, int n, int index) {
  // splitmix64 finalizer over the combined coordinates
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(n) * 1000003ULL +
                                                   static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RunReport bench_random(const RandomBenchOptions& options) {
  if (options.n_min < 1 || options.n_max < options.n_min || options.n_max > 62) {
    throw InvalidArgument("bad qubit range");
  }
  std::vector<Instance> instances;
  for (int n = options.n_min; n <= options.n_max; ++n) {
    const std::size_t m = options.dense ? std::size_t{1} << (n - 1) : static_cast<std::size_t>(n);
    for (int i = 0; i < options.count; ++i) {
      instances.push_back({random_state(n, m, instance_seed(options.seed, n, i)), std::to_string(i)});
    }
  }
  return run_instances(instances, options.flows, options.base);
}

void write_dicke_csv(const RunReport& report, std::ostream& out, bool timing) {
  const std::size_t k = report.flows.size();
  header(out, report, "n,k", timing);
  std::vector<std::vector<double>> counts(k);
  for (std::size_t i = 0; i + k <= report.records.size(); i += k) {
    const Record& r = report.records[i];
    out << r.n << ',' << r.instance.substr(2);
    row_tail(out, &report.records[i], k, timing);
    for (std::size_t j = 0; j < k; ++j) {
      if (report.records[i + j].cnots) counts[j].push_back(*report.records[i + j].cnots);
    }
  }
  out << "geo_mean,";
  for (std::size_t j = 0; j < k; ++j) out << ',' << fixed(geometric_mean(counts[j]), 1);
  out << ",\n";
}

void write_random_csv(const RunReport& report, std::ostream& out, bool timing) {
  const std::size_t k = report.flows.size();
  header(out, report, "n,m,instance", timing);
  // per-n mean over completed instances, then geometric mean over n
  std::map<int, std::pair<std::size_t, std::vector<std::vector<double>>>> by_n;
  for (std::size_t i = 0; i + k <= report.records.size(); i += k) {
    const Record& r = report.records[i];
    out << r.n << ',' << r.m << ',' << r.instance;
    row_tail(out, &report.records[i], k, timing);
    auto& slot = by_n[r.n];
    slot.first = r.m;
    slot.second.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      if (report.records[i + j].cnots) slot.second[j].push_back(*report.records[i + j].cnots);
    }
  }
  std::vector<std::vector<double>> means(k);
  for (const auto& [n, slot] : by_n) {
    out << n << ',' << slot.first << ",mean";
    for (std::size_t j = 0; j < k; ++j) {
      const auto& v = slot.second[j];
      if (v.empty()) {
        out << ",TLE";
        continue;
      }
      double sum = 0.0;
      for (double x : v) sum += x;
      means[j].push_back(sum / static_cast<double>(v.size()));
      out << ',' << fixed(means[j].back(), 2);
    }
    out << ",\n";
  }
  out << "geo_mean,,";
  for (std::size_t j = 0; j < k; ++j) out << ',' << fixed(geometric_mean(means[j]), 2);
  out << ",\n";
}

}  // namespace qsp::bench
