#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qls/paperchecks.hpp"

namespace {

using namespace qls;

std::string format_partition(const Partition& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  return out + "]";
}

std::string format_rational(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

TaskKind parse_task(const std::string& name) {
  if (name == "pauli") return TaskKind::PauliManyVsOne;
  if (name == "randomobs") return TaskKind::RandomObsManyVsOne;
  if (name == "purity") return TaskKind::PurityManyVsOne;
  if (name == "channel") return TaskKind::ChannelFixedConj;
  if (name == "symmetry") return TaskKind::SymmetryTriple;
  throw CLI::ValidationError("--task", "unknown task '" + name +
                                           "' (valid: pauli randomobs purity channel symmetry)");
}

GroupKind parse_group(const std::string& name) {
  if (name == "u") return GroupKind::Unitary;
  if (name == "o") return GroupKind::Orthogonal;
  if (name == "sp") return GroupKind::Symplectic;
  throw CLI::ValidationError("--group", "unknown group '" + name + "' (valid: u o sp)");
}

const char* kCsvHeader = "task,learner,n,T,trials,successes,rate,ci_lo,ci_hi,copies,seed";

std::string csv_row(const RunResult& r) {
  std::ostringstream os;
  os << r.task << ',' << r.learner << ',' << r.n << ',' << r.t << ',' << r.trials << ','
     << r.successes << ',' << fmt_double(r.rate) << ',' << fmt_double(r.ci_lo) << ','
     << fmt_double(r.ci_hi) << ',' << r.copies << ',' << r.seed;
  return os.str();
}

std::string jsonl_row(const RunResult& r) {
  nlohmann::ordered_json j;
  j["task"] = r.task;
  j["learner"] = r.learner;
  j["n"] = r.n;
  j["T"] = r.t;
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["rate"] = r.rate;
  j["ci_lo"] = r.ci_lo;
  j["ci_hi"] = r.ci_hi;
  j["copies"] = r.copies;
  j["seed"] = r.seed;
  return j.dump();
}

std::vector<long> parse_list(const std::string& csv, const char* flag) {
  std::vector<long> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "expected a comma-separated integer list");
    }
  }
  if (out.empty()) throw CLI::ValidationError(flag, "empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum learning simulation and verification toolkit"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run the identity/inequality check suite");
  std::uint64_t verify_seed = 0;
  int verify_jobs = 0;
  verify->add_option("--seed", verify_seed, "root seed");
  verify->add_option("--jobs", verify_jobs, "worker threads (0 = hardware)");

  // wg
  auto* wg = app.add_subcommand("wg", "print an exact Weingarten table");
  std::string wg_group;
  int wg_k = 0;
  long wg_d = 0;
  wg->add_option("--group", wg_group, "u, o, or sp")->required();
  wg->add_option("--k", wg_k, "moment order")->required();
  wg->add_option("--d", wg_d, "matrix dimension")->required();

  // run
  auto* run = app.add_subcommand("run", "run one (task, learner, n, T) cell");
  std::string run_task, run_learner, run_group = "u", run_format = "csv";
  int run_n = 2, run_trials_count = 100, run_jobs = 0, run_m = 64;
  long run_t = 10;
  std::uint64_t run_seed = 0;
  double run_eps = 0.3;
  run->add_option("--task", run_task)->required();
  run->add_option("--learner", run_learner)->required();
  run->add_option("--n", run_n, "number of qubits")->required();
  run->add_option("--t", run_t, "copy/query budget")->required();
  run->add_option("--trials", run_trials_count);
  run->add_option("--seed", run_seed);
  run->add_option("--eps", run_eps, "signal strength for pauli/randomobs");
  run->add_option("--m", run_m, "observable count for randomobs");
  run->add_option("--group", run_group, "conjugation group for the channel task");
  run->add_option("--jobs", run_jobs);
  run->add_option("--format", run_format, "csv or jsonl");

  // sweep
  auto* sw = app.add_subcommand("sweep", "sweep budgets and qubit counts");
  std::string sw_task, sw_learner, sw_group = "u", sw_format = "csv", sw_out;
  std::string sw_nlist, sw_tlist;
  int sw_trials = 100, sw_jobs = 0, sw_m = 64;
  std::uint64_t sw_seed = 0;
  double sw_eps = 0.3;
  sw->add_option("--task", sw_task)->required();
  sw->add_option("--learner", sw_learner)->required();
  sw->add_option("--n-list", sw_nlist, "comma-separated qubit counts")->required();
  sw->add_option("--t-list", sw_tlist, "comma-separated budgets, increasing")->required();
  sw->add_option("--trials", sw_trials);
  sw->add_option("--seed", sw_seed);
  sw->add_option("--eps", sw_eps);
  sw->add_option("--m", sw_m);
  sw->add_option("--group", sw_group);
  sw->add_option("--jobs", sw_jobs);
  sw->add_option("--format", sw_format, "csv or jsonl");
  sw->add_option("--out", sw_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      const auto reports = check_identities(verify_seed, verify_jobs);
      std::cout << format_reports(reports);
      return all_pass(reports) ? 0 : 1;
    }

    if (*wg) {
      const GroupKind g = parse_group(wg_group);
      if (wg_k < 1) throw CLI::ValidationError("--k", "k must be positive");
      if (g == GroupKind::Symplectic && wg_d % 2 != 0)
        throw CLI::ValidationError("--d", "sp needs an even dimension");
      std::vector<Partition> types = partitions_of(wg_k);
      std::sort(types.begin(), types.end());
      for (const Partition& type : types) {
        Rational value;
        switch (g) {
          case GroupKind::Unitary:
            value = wg_unitary(type, wg_d);
            break;
          case GroupKind::Orthogonal:
            value = wg_orthogonal(type, wg_d);
            break;
          case GroupKind::Symplectic:
            value = wg_symplectic(type, wg_d / 2);
            break;
        }
        std::cout << format_partition(type) << " " << format_rational(value) << "\n";
      }
      return 0;
    }

    auto make_spec = [](const std::string& task, int n, double eps, int m,
                        const std::string& group) {
      TaskSpec spec;
      spec.kind = parse_task(task);
      spec.n_qubits = n;
      spec.eps = eps;
      spec.m_observables = m;
      spec.group = parse_group(group);
      spec.validate();
      return spec;
    };

    if (*run) {
      if (run_format != "csv" && run_format != "jsonl")
        throw CLI::ValidationError("--format", "expected csv or jsonl");
      const TaskSpec spec = make_spec(run_task, run_n, run_eps, run_m, run_group);
      const RunResult res =
          run_trials(spec, run_learner, run_t, run_trials_count, run_seed, run_jobs);
      if (run_format == "csv")
        std::cout << kCsvHeader << "\n" << csv_row(res) << "\n";
      else
        std::cout << jsonl_row(res) << "\n";
      return 0;
    }

    if (*sw) {
      if (sw_format != "csv" && sw_format != "jsonl")
        throw CLI::ValidationError("--format", "expected csv or jsonl");
      const auto ns = parse_list(sw_nlist, "--n-list");
      const auto ts = parse_list(sw_tlist, "--t-list");
      std::ofstream out(sw_out);
      if (!out) throw std::runtime_error("cannot open output file " + sw_out);
      if (sw_format == "csv") out << kCsvHeader << "\n";
      for (long n : ns) {
        const TaskSpec spec = make_spec(sw_task, static_cast<int>(n), sw_eps, sw_m, sw_group);
        const auto rows = sweep(spec, sw_learner, ts, sw_trials, sw_seed, sw_jobs);
        for (const RunResult& r : rows)
          out << (sw_format == "csv" ? csv_row(r) : jsonl_row(r)) << "\n";
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
