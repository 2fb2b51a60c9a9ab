// Copyright 2026 The amptrans Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// amptrans command-line driver: plan, synth, sample, table1, baselines.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "amptrans/amptrans.hpp"
#include "amptrans/io.hpp"

namespace {

using namespace amptrans;
using nlohmann::json;

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kOverflow = 3, kMemory = 4, kAcceptance = 5 };

struct Options {
  std::size_t rows = 2;
  std::size_t cols = 2;
  std::optional<double> beta_j;
  std::optional<double> beta_rel_critical;
  std::string variant = "direct";
  std::optional<std::size_t> d;
  std::optional<int> nu;
  std::string nu_rule = "paper";
  std::uint64_t shots = std::uint64_t{1} << 17;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  bool allow_large = false;
  bool enforce_zero = false;
  bool conditional = false;
  bool check = false;
  std::optional<std::uint64_t> memory_budget_mib;
  std::string alphas;
  std::optional<double> eps;
  double delta = 0.001;
  std::optional<double> gamma;
};

constexpr std::uint64_t kDefaultBudgetMib = 1024;

double effective_beta_j(const Options& o) {
  if (o.beta_rel_critical) return *o.beta_rel_critical * kCriticalBetaJ;
  return o.beta_j.value_or(0.1);
}

std::uint64_t budget_bytes(const Options& o) {
  if (o.memory_budget_mib) return *o.memory_budget_mib << 20;
  if (o.allow_large) return std::numeric_limits<std::uint64_t>::max();
  return kDefaultBudgetMib << 20;
}

/// Prints the state size to stderr ahead of runs above 256 MiB.
void announce_memory(std::size_t qubits) {
  const auto bytes = StateVector::bytes_for(qubits);
  if (bytes > (std::uint64_t{256} << 20))
    std::cerr << "state vector: " << qubits << " qubits, " << (bytes >> 20) << " MiB\n";
}

/// Rows of JSON cells written either as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  static std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return io::fmt(v.get<double>());
    return v.dump();
  }

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
      os << '\n';
    }
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json o = json::object();
      for (std::size_t i = 0; i < r.size(); ++i) o[columns[i]] = r[i];
      arr.push_back(o);
    }
    return arr;
  }

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json")
      os << to_json().dump(2) << '\n';
    else
      write_csv(os);
  }
};

json nullable(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

/// Writes to `path`, or to stdout when it is empty.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  write(os);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << text;
}

std::string render(const Table& t, const std::string& format) {
  std::ostringstream os;
  t.write(os, format);
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_plan(const Options& o) {
  const double eps = o.eps.value_or(0.001);
  const auto t = tally_registers(eps, o.delta);
  Table table{{"method", "d", "registers", "ancilla_qubits"}, {}};
  table.rows.push_back({"multiplicative-direct", t.d, 1, t.direct});
  table.rows.push_back({"multiplicative-controlled", t.d, 2, t.controlled});
  table.rows.push_back({"comparator", t.comparator_d, t.comparator_registers, t.comparator});
  emit(o.out, [&](std::ostream& os) { table.write(os, o.format); });
  return kOk;
}

json lattice_config(const Options& o, const IsingLattice& lattice) {
  return {{"rows", lattice.rows()},
          {"cols", lattice.cols()},
          {"beta_j", lattice.beta_j()},
          {"variant", o.variant},
          {"d", o.d ? json(*o.d) : json(nullptr)},
          {"nu", o.nu ? json(*o.nu) : json(nullptr)},
          {"nu_rule", o.nu_rule}};
}

struct TableInput {
  AmplitudeTable table;
  json config;
};

TableInput load_table(const Options& o) {
  const auto alphas = io::read_alphas(o.alphas);
  const double eps = o.eps.value_or(0.001);
  const std::size_t d = o.d.value_or(plan_precision(eps, o.delta));
  const double gamma = o.gamma.value_or(std::exp(-std::log(eps) / (std::ldexp(1.0, static_cast<int>(d)) - 1.0)));
  auto table = build_lambda_table(alphas, gamma, d, eps);
  json config{{"alphas", alphas},     {"eps", eps},           {"d", d},
              {"gamma", gamma},       {"variant", o.variant}, {"enforce_zero", o.enforce_zero},
              {"nu", o.nu ? json(*o.nu) : json(nullptr)}, {"nu_rule", o.nu_rule}};
  return {std::move(table), std::move(config)};
}

/// The lattice or alpha-table run selected by the options.
struct Experiment {
  SynthesisRun run;
  json config;
  std::optional<IsingLattice> lattice;
  std::optional<AmplitudeTable> table;
};

Experiment run_experiment(const Options& o) {
  const auto variant = parse_variant(o.variant);
  if (!o.alphas.empty()) {
    auto input = load_table(o);
    TableOptions opt;
    opt.variant = variant;
    opt.exact_zero = o.enforce_zero;
    opt.nu_rule = parse_nu_rule(o.nu_rule);
    opt.nu = o.nu;
    opt.memory_budget_bytes = budget_bytes(o);
    announce_memory(transduction_layout(static_cast<std::size_t>(std::countr_zero(input.table.alphas.size())),
                                        input.table.d, variant, o.enforce_zero)
                        .total_qubits());
    auto run = synthesize_table(input.table, opt);
    return {std::move(run), std::move(input.config), std::nullopt, std::move(input.table)};
  }
  if (o.enforce_zero) throw ConfigError("--enforce-zero applies to --alphas tables; Boltzmann weights never saturate");
  const IsingLattice lattice(o.rows, o.cols, effective_beta_j(o));
  BoltzmannOptions opt;
  opt.variant = variant;
  opt.d = o.d;
  opt.nu_rule = parse_nu_rule(o.nu_rule);
  opt.nu = o.nu;
  opt.memory_budget_bytes = budget_bytes(o);
  announce_memory(ising_layout(lattice, o.d.value_or(auto_d(lattice)), variant).total_qubits());
  auto run = synthesize_boltzmann(lattice, opt);
  auto config = lattice_config(o, lattice);
  config["gamma"] = run.gamma;
  return {std::move(run), std::move(config), lattice, std::nullopt};
}

json diagnostics_json(const SynthesisDiagnostics& d) { return io::to_json(d); }

int cmd_synth(const Options& o) {
  const auto e = run_experiment(o);
  const auto& d = e.run.diagnostics;
  if (o.format == "json") {
    json j{{"command", "synth"}, {"config", e.config}, {"diagnostics", diagnostics_json(d)}};
    emit(o.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  } else {
    Table t{{"qubits", "d", "u_sq", "u_sq_oracle", "nu", "a_prime_sq", "a_prime_sq_measured"}, {}};
    t.rows.push_back({d.qubits, d.d, d.u_sq, nullable(d.u_sq_oracle), d.nu, d.a_prime_sq, d.a_prime_sq_measured});
    emit(o.out, [&](std::ostream& os) { t.write_csv(os); });
  }
  return kOk;
}

json fit_json(const DistributionTest& t) {
  return {{"chi_square", t.chi_square}, {"dof", t.dof}, {"p_value", t.p_value}, {"tvd", t.tvd}, {"bins", t.bins}};
}

int cmd_sample(const Options& o) {
  if (o.out.empty()) throw ConfigError("sample needs --out DIR for its output files");
  auto e = run_experiment(o);
  const auto s = sample_postselected(e.run, o.shots, o.seed, o.conditional);
  e.run.diagnostics.shots = o.shots;
  e.run.diagnostics.efficiency = s.efficiency;
  if (s.kept == 0) throw ConfigError("no shot landed in the target slice; raise --shots or use --conditional");

  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  const std::string ext = o.format == "json" ? ".json" : ".csv";
  json files = json::array();
  json fits = json::object();
  auto save = [&](const std::string& stem, const Table& t) {
    write_file(dir / (stem + ext), render(t, o.format));
    files.push_back(stem + ext);
  };

  if (e.lattice) {
    const auto& lattice = *e.lattice;
    Table configs{{"config", "sigma", "magnetization", "count"}, {}};
    for (const auto& [l, n] : s.values)
      configs.rows.push_back({l, sigma_count(lattice, l), magnetization(lattice, l), n});
    save("configs", configs);
    if (lattice.sites() <= kMaxEnumeratedSites) {
      const auto ref = boltzmann_reference(lattice);
      const auto sigma = sigma_histogram(lattice, s.values, ref);
      Table st{{"sigma", "states", "observed", "per_state", "theory_per_state"}, {}};
      std::vector<std::uint64_t> obs;
      std::vector<double> expected;
      for (const auto& b : sigma) {
        st.rows.push_back({b.sigma, b.states, b.observed, b.per_state, b.theory});
        obs.push_back(b.observed);
        expected.push_back(ref.p_sigma.at(b.sigma));
      }
      save("sigma", st);
      fits["sigma"] = fit_json(distribution_tests(obs, expected));

      const auto mag = magnetization_histogram(lattice, s.values, ref);
      Table mt{{"magnetization", "observed", "frequency", "reference"}, {}};
      obs.clear();
      expected.clear();
      for (const auto& b : mag) {
        mt.rows.push_back({b.m, b.observed, b.frequency, b.reference});
        obs.push_back(b.observed);
        expected.push_back(b.reference);
      }
      save("magnetization", mt);
      fits["magnetization"] = fit_json(distribution_tests(obs, expected));
    } else {
      std::cerr << "lattice has " << lattice.sites() << " sites; reference histograms need at most "
                << kMaxEnumeratedSites << "\n";
    }
  } else {
    const auto& table = *e.table;
    const auto exact = register_distribution(e.run.state, e.run.layout, "C", e.run.target);
    double total = 0;
    for (double p : exact) total += p;
    Table vt{{"index", "alpha", "lambda", "target_probability", "observed", "frequency"}, {}};
    std::vector<std::uint64_t> obs;
    for (std::size_t l = 0; l < table.alphas.size(); ++l) {
      const auto it = s.values.find(l);
      const std::uint64_t n = it == s.values.end() ? 0 : it->second;
      obs.push_back(n);
      vt.rows.push_back({l, table.alphas[l], table.lambdas[l], exact[l] / total, n,
                         static_cast<double>(n) / static_cast<double>(s.kept)});
    }
    save("values", vt);
    fits["values"] = fit_json(distribution_tests(obs, exact));
  }

  json run{{"command", "sample"},
           {"config", e.config},
           {"shots", o.shots},
           {"seed", o.seed},
           {"conditional", o.conditional},
           {"kept", s.kept},
           {"diagnostics", diagnostics_json(e.run.diagnostics)},
           {"fit", fits},
           {"files", files}};
  write_file(dir / "run.json", run.dump(2) + "\n");
  return kOk;
}

// Reference rows: lattice side, variant, u^2, nu, A'^2 (three-decimal values).
struct ReferenceRow {
  std::size_t side;
  Variant variant;
  double u_sq;
  int nu;
  double a_prime_sq;
};

const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows{
      {2, Variant::Direct, 0.167, 2, 0.738},     {3, Variant::Direct, 0.063, 3, 0.960},
      {4, Variant::Direct, 0.016, 6, 0.996},     {2, Variant::Controlled, 0.487, 1, 0.539},
      {3, Variant::Controlled, 0.182, 2, 0.650}, {4, Variant::Controlled, 0.048, 4, 0.837}};
  return rows;
}

int cmd_table1(const Options& o) {
  Table t{{"lattice", "variant", "qubits", "d", "nu", "u_sq", "u_sq_oracle", "a_prime_sq", "a_prime_sq_measured",
           "efficiency", "shots", "status"},
          {}};
  bool ok = true;
  const auto rule = parse_nu_rule(o.nu_rule);
  for (const auto& ref : reference_rows()) {
    const IsingLattice lattice(ref.side, ref.side, 0.1);
    const auto d = auto_d(lattice);
    const auto qubits = ising_layout(lattice, d, ref.variant).total_qubits();
    const auto bytes = StateVector::bytes_for(qubits);
    if (bytes > budget_bytes(o)) {
      std::cerr << "skipping " << lattice.name() << " " << to_string(ref.variant) << ": " << qubits << " qubits need "
                << (bytes >> 20) << " MiB; pass --allow-large to run it\n";
      t.rows.push_back({lattice.name(), to_string(ref.variant), qubits, d, nullptr, nullptr, nullptr, nullptr, nullptr,
                        nullptr, nullptr, "skipped"});
      continue;
    }
    announce_memory(qubits);
    BoltzmannOptions opt;
    opt.variant = ref.variant;
    opt.nu_rule = rule;
    opt.memory_budget_bytes = budget_bytes(o);
    const auto run = synthesize_boltzmann(lattice, opt);
    const auto s = sample_postselected(run, o.shots, o.seed);
    const auto& dg = run.diagnostics;
    bool row_ok = true;
    if (o.check) {
      row_ok = std::abs(dg.u_sq - ref.u_sq) <= 0.0005 && std::abs(dg.u_sq_oracle - ref.u_sq) <= 0.0005 &&
               dg.nu == ref.nu && std::abs(dg.a_prime_sq - ref.a_prime_sq) <= 0.002 &&
               std::abs(dg.a_prime_sq_measured - ref.a_prime_sq) <= 0.002 &&
               within_binomial_sigma(s.efficiency, dg.a_prime_sq_measured, o.shots, 5);
      ok = ok && row_ok;
    }
    t.rows.push_back({lattice.name(), to_string(ref.variant), dg.qubits, dg.d, dg.nu, dg.u_sq, dg.u_sq_oracle,
                      dg.a_prime_sq, dg.a_prime_sq_measured, s.efficiency, o.shots,
                      o.check ? (row_ok ? "pass" : "fail") : "ok"});
  }
  emit(o.out, [&](std::ostream& os) { t.write(os, o.format); });
  return ok ? kOk : kAcceptance;
}

int cmd_baselines(const Options& o) {
  if (o.alphas.empty()) throw ConfigError("baselines needs --alphas FILE");
  const auto alphas = io::read_alphas(o.alphas);
  CompareOptions opt;
  opt.cutoff_eps = o.eps;
  opt.gamma = o.gamma;
  const auto rows = compare_norms(alphas, o.d.value_or(6), opt);
  Table t{{"method", "d", "norm", "ancilla_qubits", "total_qubits", "simulated"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.method, r.d, r.norm, r.ancilla_qubits, r.total_qubits, r.simulated});
  emit(o.out, [&](std::ostream& os) { t.write(os, o.format); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplicative amplitude transduction: state synthesis, amplification and Ising sampling"};
  app.set_config("--config", "", "Read option=value lines from a file; command-line flags take precedence");
  app.require_subcommand(1, 1);
  Options o;

  auto* lat = app.add_option_group("Lattice");
  lat->add_option("--rows", o.rows, "Lattice rows")->capture_default_str();
  lat->add_option("--cols", o.cols, "Lattice columns")->capture_default_str();
  auto* bj = lat->add_option("--beta-j", o.beta_j, "Coupling beta*J (default 0.1)");
  lat->add_option("--beta-rel-critical", o.beta_rel_critical, "beta*J as a multiple of 2.269")->excludes(bj);

  auto* syn = app.add_option_group("Synthesis");
  syn->add_option("--variant", o.variant, "Transduction variant")
      ->check(CLI::IsMember({"direct", "controlled"}))
      ->capture_default_str();
  syn->add_option("--d", o.d, "Width of the D (and E) register; chosen automatically when absent");
  syn->add_option("--nu", o.nu, "Number of amplification iterates; overrides --nu-rule");
  syn->add_option("--nu-rule", o.nu_rule, "paper: round(pi/(4u)); optimal: the better integer next to pi/(4 asin u) - 1/2")
      ->check(CLI::IsMember({"paper", "optimal"}))
      ->capture_default_str();
  syn->add_flag("--enforce-zero", o.enforce_zero, "Give entries below the cutoff amplitude exactly 0");
  syn->add_option("--alphas", o.alphas, "Target table (CSV index,alpha or JSON array) instead of a lattice");
  syn->add_option("--eps", o.eps, "Cutoff epsilon (default 0.001)");
  syn->add_option("--delta", o.delta, "Relative precision delta")->capture_default_str();
  syn->add_option("--gamma", o.gamma, "Base gamma; defaults to eps^(-1/(2^d - 1))");

  auto* run = app.add_option_group("Run");
  run->add_option("--shots", o.shots, "Measurement shots")->capture_default_str();
  run->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
  run->add_flag("--conditional", o.conditional, "Sample directly from the target slice");
  run->add_flag("--allow-large", o.allow_large, "Lift the default 1024 MiB state-vector budget");
  run->add_option("--memory-budget-mib", o.memory_budget_mib, "State-vector budget in MiB");
  run->add_flag("--check", o.check, "table1: compare against the reference values; exit 5 on mismatch");
  run->add_option("--out", o.out, "Output file (directory for sample); stdout when absent");
  run->add_option("--format", o.format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* plan = app.add_subcommand("plan", "Register widths for a cutoff --eps and precision --delta");
  auto* synth = app.add_subcommand("synth", "Synthesize and amplify; report u^2, nu and A'^2");
  auto* sample = app.add_subcommand("sample", "Synthesize, amplify, sample and write histograms to --out");
  auto* table1 = app.add_subcommand("table1", "Norm and efficiency table for the 2x2, 3x3 and 4x4 lattices");
  auto* baselines = app.add_subcommand("baselines", "Compare pre-amplification norms across synthesis methods");
  for (auto* s : {plan, synth, sample, table1, baselines}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*plan) return cmd_plan(o);
    if (*synth) return cmd_synth(o);
    if (*sample) return cmd_sample(o);
    if (*table1) return cmd_table1(o);
    if (*baselines) return cmd_baselines(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return kOverflow;
  } catch (const MemoryBudgetError& e) {
    std::cerr << "memory: " << e.what() << " (pass --allow-large or --memory-budget-mib)\n";
    return kMemory;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
