#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bench.hpp"
#include "qsprep/canon.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/mcry.hpp"
#include "qsprep/sim.hpp"
#include "qsprep/state_io.hpp"

namespace {

using namespace qsp;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerify = 2;
constexpr int kExitCap = 3;

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
}

struct SearchFlags {
  int max_entangled = 4;
  std::size_t max_card = 16;
  int max_distinct_angles = 4;
  std::uint64_t node_budget = 10'000'000;
  std::uint64_t pricing_budget = bench::default_search().pricing_budget;
  std::string cost_model;
  bool fallback = false;
  double timeout = 3600.0;

  void add(CLI::App* app) {
    app->add_option("--exact-max-entangled", max_entangled, "Entangled-qubit cap for exact synthesis")
        ->capture_default_str();
    app->add_option("--exact-max-card", max_card, "Cardinality cap for exact synthesis")->capture_default_str();
    app->add_option("--max-distinct-angles", max_distinct_angles,
                    "Distinct rotation angles per operator once m > 8")
        ->capture_default_str();
    app->add_option("--node-budget", node_budget, "A* expansion limit")->capture_default_str();
    app->add_option("--pricing-budget", pricing_budget, "A* operator pricings allowed (0: unlimited)")
        ->capture_default_str();
    app->add_option("--cost-model", cost_model, "exact or graycode (default: exact for exact/hybrid)")
        ->check(CLI::IsMember({"exact", "graycode"}));
    app->add_flag("--fallback,!--no-fallback", fallback,
                  "On A* budget exhaustion keep reducing and retry (bench commands: on)");
    app->add_option("--timeout", timeout, "Per-run time limit in seconds (0 disables)")->capture_default_str();
  }

  bench::RunOptions options() const {
    bench::RunOptions o;
    o.search.max_entangled = max_entangled;
    o.search.max_cardinality = max_card;
    o.search.max_distinct_angles = max_distinct_angles;
    o.search.node_budget = node_budget;
    o.search.pricing_budget = pricing_budget;
    if (!cost_model.empty()) o.cost_model = parse_cost_model(cost_model);
    o.fallback = fallback;
    o.timeout_seconds = timeout;
    return o;
  }
};

std::vector<bench::Flow> parse_flows(const std::string& list) {
  std::vector<bench::Flow> flows;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) flows.push_back(bench::parse_flow(item));
  if (flows.empty()) throw InvalidArgument("no flows given");
  return flows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CNOT-minimizing preparation of real-amplitude quantum states"};
  app.require_subcommand(1);

  // prepare
  auto* prep = app.add_subcommand("prepare", "Synthesize a circuit preparing a state");
  std::string state_file, qasm_out, json_out, flow_name = "hybrid";
  std::vector<int> dicke;
  int ghz = 0, w = 0;
  bool no_verify = false;
  SearchFlags prep_flags;
  prep->add_option("state", state_file, "State file (JSON or text)");
  prep->add_option("--dicke", dicke, "Dicke state: N K")->expected(2);
  prep->add_option("--ghz", ghz, "GHZ state on N qubits");
  prep->add_option("--w", w, "W state on N qubits");
  prep->add_option("--flow", flow_name, "exact, nflow, mflow or hybrid")
      ->check(CLI::IsMember({"exact", "nflow", "mflow", "hybrid"}))
      ->capture_default_str();
  prep->add_option("-o,--output", qasm_out, "Write OpenQASM here ('-' for stdout)");
  prep->add_option("--json", json_out, "Write the circuit as JSON here");
  prep->add_flag("--no-verify", no_verify, "Skip simulation");
  prep_flags.add(prep);

  // verify
  auto* ver = app.add_subcommand("verify", "Check that a QASM circuit prepares a state");
  std::string ver_qasm, ver_state;
  double tol = 1e-6;
  ver->add_option("qasm", ver_qasm, "OpenQASM file")->required();
  ver->add_option("state", ver_state, "State file")->required();
  ver->add_option("--tol", tol, "Fidelity tolerance")->capture_default_str();

  // decompose-mcry
  auto* dec = app.add_subcommand("decompose-mcry", "Decompose a rotation table into Ry and CNOT");
  std::string table_file, mode = "exact", initial = "0";
  dec->add_option("table", table_file, "Rotation table JSON")->required();
  dec->add_option("--mode", mode, "gray or exact")->check(CLI::IsMember({"gray", "exact"}))->capture_default_str();
  dec->add_option("--initial", initial, "Known target angle before the gate, or 'none'")->capture_default_str();

  // canon-count
  auto* cc = app.add_subcommand("canon-count", "Count uniform states up to zero-CNOT equivalence");
  int cc_n = 4, cc_m_max = 8;
  cc->add_option("--n", cc_n, "Qubits (at most 5)")->capture_default_str();
  cc->add_option("--m-max", cc_m_max, "Largest cardinality")->capture_default_str();

  // bench-dicke
  auto* bd = app.add_subcommand("bench-dicke", "CNOT counts for Dicke states");
  int bd_max_n = 6;
  std::string bd_flows = "mflow,nflow,hybrid", bd_out = "-";
  bool bd_timing = false;
  SearchFlags bd_flags;
  bd_flags.fallback = true;
  bd->add_option("--max-n", bd_max_n, "Largest qubit count")->capture_default_str();
  bd->add_option("--flows", bd_flows, "Comma-separated flows")->capture_default_str();
  bd->add_option("-o,--output", bd_out, "CSV destination")->capture_default_str();
  bd->add_flag("--timing", bd_timing, "Add wall-time columns");
  bd_flags.add(bd);

  // bench-random
  auto* br = app.add_subcommand("bench-random", "CNOT counts for seeded random states");
  bench::RandomBenchOptions br_opts;
  std::string br_density = "sparse", br_flows = "mflow,nflow,hybrid", br_out = "-";
  bool br_timing = false;
  SearchFlags br_flags;
  br_flags.fallback = true;
  br->add_option("--n-min", br_opts.n_min, "Smallest qubit count")->capture_default_str();
  br->add_option("--n-max", br_opts.n_max, "Largest qubit count")->capture_default_str();
  br->add_option("--density", br_density, "sparse (m = n) or dense (m = 2^(n-1))")
      ->check(CLI::IsMember({"sparse", "dense"}))
      ->capture_default_str();
  br->add_option("--count", br_opts.count, "States per qubit count")->capture_default_str();
  br->add_option("--seed", br_opts.seed, "Base seed")->capture_default_str();
  br->add_option("--flows", br_flows, "Comma-separated flows")->capture_default_str();
  br->add_option("-o,--output", br_out, "CSV destination")->capture_default_str();
  br->add_flag("--timing", br_timing, "Add wall-time columns");
  br_flags.add(br);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prep) {
      SparseState state;
      const int sources = !state_file.empty() + !dicke.empty() + (ghz > 0) + (w > 0);
      if (sources != 1) throw InvalidArgument("give exactly one of: state file, --dicke, --ghz, --w");
      if (!state_file.empty()) state = read_state_file(state_file);
      else if (!dicke.empty()) state = make_dicke(dicke[0], dicke[1]);
      else if (ghz > 0) state = make_ghz(ghz);
      else state = make_w(w);

      auto opts = prep_flags.options();
      opts.flow = bench::parse_flow(flow_name);
      opts.verify = !no_verify;
      const auto r = bench::run_flow(state, opts);
      if (!qasm_out.empty()) write_text(qasm_out, emit_qasm(r.circuit));
      if (!json_out.empty()) write_text(json_out, circuit_to_json(r.circuit) + "\n");
      std::cout << "cnots=" << r.cnots << " verified=" << (r.verified ? "true" : "false") << '\n';
      return opts.verify && !r.verified ? kExitVerify : kExitOk;
    }
    if (*ver) {
      const Circuit circ = parse_qasm(read_file(ver_qasm));
      const SparseState target = read_state_file(ver_state);
      if (circ.num_qubits() != target.num_qubits()) throw InvalidArgument("qubit counts differ");
      const SparseState out = apply_circuit(SparseState::ground(circ.num_qubits()), circ);
      const double f = fidelity(out, target);
      const bool ok = f >= 1.0 - tol;
      std::printf("fidelity=%.12f cnots=%d verified=%s\n", f, circ.cnot_gate_count(), ok ? "true" : "false");
      return ok ? kExitOk : kExitVerify;
    }
    if (*dec) {
      const RotationTable table = parse_rotation_table(read_file(table_file));
      std::optional<double> init;
      if (initial != "none") init = std::stod(initial);
      int target = 0;
      for (int q : table.controls) target = std::max(target, q + 1);
      const int n = target + 1;
      Circuit circ = mode == "gray" ? gray_code_decompose(table, target, n) : exact_decompose(table, target, n, init);
      const auto cs = table_constraints(table, mode == "gray" ? std::nullopt : init);
      const bool ok = satisfies_constraints(circ, table.controls, target, cs);
      std::cout << emit_qasm(circ);
      std::cout << "cnots=" << circ.cnot_gate_count() << " verified=" << (ok ? "true" : "false") << '\n';
      return ok ? kExitOk : kExitVerify;
    }
    if (*cc) {
      std::cout << "m,raw,canonical\n";
      for (int m = 1; m <= cc_m_max; ++m) {
        const auto c = count_canonical_uniform(cc_n, m);
        std::cout << m << ',' << c.raw << ',' << c.canonical << '\n';
      }
      return kExitOk;
    }
    if (*bd) {
      bench::DickeBenchOptions o;
      o.max_n = bd_max_n;
      o.flows = parse_flows(bd_flows);
      o.base = bd_flags.options();
      const auto report = bench::bench_dicke(o);
      std::ostringstream csv;
      bench::write_dicke_csv(report, csv, bd_timing);
      write_text(bd_out, csv.str());
      for (const auto& rec : report.records) {
        if (rec.cnots && !rec.verified) return kExitVerify;
      }
      return kExitOk;
    }
    if (*br) {
      br_opts.dense = br_density == "dense";
      br_opts.flows = parse_flows(br_flows);
      br_opts.base = br_flags.options();
      const auto report = bench::bench_random(br_opts);
      std::ostringstream csv;
      bench::write_random_csv(report, csv, br_timing);
      write_text(br_out, csv.str());
      for (const auto& rec : report.records) {
        if (rec.cnots && !rec.verified) return kExitVerify;
      }
      return kExitOk;
    }
  } catch (const CapExceeded& e) {
    std::cerr << "qsprep: " << e.what() << '\n';
    return kExitCap;
  } catch (const Timeout& e) {
    std::cerr << "qsprep: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "qsprep: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}
